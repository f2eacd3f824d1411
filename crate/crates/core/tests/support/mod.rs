#![allow(dead_code)]

pub mod regrouped;

use chiral_nri::{DetuningSet, DriveConfig};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Reference drive of the chirality figure: θ = π/5, Ω_c = 1.3, Ω_s = 20.
pub fn reference_drive() -> DriveConfig {
    DriveConfig { omega_c: 1.3, omega_s: 20.0, theta: std::f64::consts::PI / 5.0 }
}

pub fn reference_detunings(delta_p: f64) -> DetuningSet {
    DetuningSet { delta_p, delta_c: 0.001, delta_s: 0.0, delta_m: 0.001 }
}

/// Deterministic sampler built on the proptest RNG.
pub struct Sampler(TestRunner);

impl Sampler {
    pub fn new(seed: u8) -> Self {
        Sampler(TestRunner::new_with_rng(
            Config::default(),
            TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
        ))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo..hi).new_tree(&mut self.0).expect("range strategy").current()
    }
}

/// Values from an independent numpy evaluation (dense 16×16 Liouvillian
/// solve, and a separate transcription of the printed closed forms), in
/// reduced units, ordered ee, eh, he, hh as (re, im).
pub struct FrozenPoint {
    pub theta: f64,
    pub omega_c: f64,
    pub delta_p: f64,
    pub oracle: [(f64, f64); 4],
    pub printed: [(f64, f64); 4],
    pub rho33: f64,
}

pub const FROZEN: [FrozenPoint; 3] = [
    FrozenPoint {
        theta: std::f64::consts::PI / 5.0,
        omega_c: 1.3,
        delta_p: 0.5,
        oracle: [
            (-3.1223328331227526e-06, 1.403852512850942e-05),
            (-0.004809878939032416, 0.0065390376214487685),
            (-0.004562786082595155, -0.006197838732996752),
            (-0.000735122453377901, 0.0034713855775572264),
        ],
        printed: [
            (-0.0005154144481655132, 1.2482254104207617e-05),
            (-0.004831208360007265, 0.006530201191155971),
            (0.004457731653809035, -0.006273725783750764),
            (-0.0007365546714324906, 0.0034717399226001887),
        ],
        rho33: 0.40920093549629255,
    },
    FrozenPoint {
        theta: std::f64::consts::PI / 5.0,
        omega_c: 1.3,
        delta_p: -1.25,
        oracle: [
            (6.588109068900197e-06, 1.4066326186419052e-05),
            (-0.004690208177897248, 0.006626669156937577),
            (-0.004440832535823179, -0.0062860714603095785),
            (0.0018315399344540123, 0.0034779898000458376),
        ],
        printed: [
            (0.001295108664014176, 2.40780178877559e-05),
            (-0.004664318221492217, 0.006687181777572818),
            (0.004671854051839585, -0.006115456997204066),
            (0.0018351256791329276, 0.00348021573304559),
        ],
        rho33: 0.40920093549629255,
    },
    FrozenPoint {
        theta: 1.5 * std::f64::consts::PI,
        omega_c: 1.0,
        delta_p: 0.3,
        oracle: [
            (-1.3169518171868329e-06, 8.521240604949413e-06),
            (0.009283001341527217, 2.6190945044187595e-05),
            (0.00895445098716686, -2.650762792919617e-05),
            (-0.0004746480339494802, 0.003630401228700701),
        ],
        printed: [
            (-0.00027322413102261574, 6.942896066204367e-06),
            (0.00928516855597044, 3.25056659539215e-05),
            (-0.008954364337073712, 3.990722137165128e-05),
            (-0.0004749578827517898, 0.003630509021358755),
        ],
        rho33: 0.3636363195592341,
    },
];

impl FrozenPoint {
    pub fn drive(&self) -> DriveConfig {
        DriveConfig { omega_c: self.omega_c, omega_s: 20.0, theta: self.theta }
    }

    pub fn detunings(&self) -> DetuningSet {
        reference_detunings(self.delta_p)
    }
}

pub fn to_complex(v: &[(f64, f64); 4]) -> [chiral_nri::Complex64; 4] {
    v.map(|(re, im)| chiral_nri::Complex64::new(re, im))
}

/// Largest complex relative deviation between two coefficient arrays.
pub fn max_relative(a: &[chiral_nri::Complex64; 4], b: &[chiral_nri::Complex64; 4]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = x.norm().max(y.norm());
            if scale == 0.0 { 0.0 } else { (x - y).norm() / scale }
        })
        .fold(0.0, f64::max)
}
