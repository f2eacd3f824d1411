//! Physical constants (CODATA 2018), SI units.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Vacuum permeability, N/A².
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Fine-structure constant used for the magnetic/electric rate ratio.
pub const FINE_STRUCTURE_INVERSE: f64 = 137.0;

/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
