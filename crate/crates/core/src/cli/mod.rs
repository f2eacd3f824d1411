//! `chiral-nri` command-line surface.
//!
//! ```text
//! chiral-nri sweep|bands|oracle-check|figures --config <path> [--out <dir>] [--jobs <k>]
//! ```
//!
//! Exit codes: 0 success, 1 I/O or unexpected failure, 2 configuration
//! error, 3 every sweep point flagged, 4 oracle solve failure or residual
//! above tolerance.

pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{ConfigError, Format, RunConfig};
use crate::constitutive::ChiralConstitutive;
use crate::error::Error;
use crate::model::evaluate_point;
use crate::oracle::{summarize_errata, OracleCheckPoint, RESIDUAL_TOLERANCE};
use crate::sweep::{
    detect_negative_bands, run_oracle_checks, run_sweep, summarize_group, summarize_metrics,
    BandReport, Scenario, ScenarioMetrics, ScenarioSpectrum, SweepPlan,
};
use output::ErrataSection;
use svg::Series;

/// Environment variable overriding the output root.
pub const SEED_DIR_ENV: &str = "CHIRAL_NRI_SEED_DIR";

#[derive(Debug, Parser)]
#[command(name = "chiral-nri", version, about = "Chiral negative refraction in a closed-loop four-level medium")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for the sweep (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectra per scenario as CSV plus a JSON summary.
    Sweep(CommonArgs),
    /// Negative-index bands per scenario.
    Bands(CommonArgs),
    /// Closed forms against the Liouville oracle.
    OracleCheck(CommonArgs),
    /// Plot-ready tables and SVG line plots.
    Figures(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Sweep(a) | Command::Bands(a) | Command::OracleCheck(a) | Command::Figures(a) => a,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("every sweep point is flagged; no output values")]
    EmptyOutput,
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("{0}")]
    Pipeline(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::EmptyOutput => 3,
            CliError::Oracle(_) => 4,
            CliError::Pipeline(Error::InvalidPlan(_) | Error::InvalidInput(_)) => 2,
            CliError::Pipeline(_) | CliError::Io { .. } | CliError::Other(_) => 1,
        }
    }
}

/// Output directory: `--out`, else `output.dir`; relative paths are joined
/// to `seed_root` when given.
pub fn resolve_output_dir(out: Option<&Path>, config_dir: &Path, seed_root: Option<&Path>) -> PathBuf {
    let dir = out.unwrap_or(config_dir);
    match seed_root {
        Some(root) if dir.is_relative() => root.join(dir),
        _ => dir.to_path_buf(),
    }
}

/// Parse arguments, run, print diagnostics, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let seed = std::env::var_os(SEED_DIR_ENV).map(PathBuf::from);
    match run(&cli.command, seed.as_deref()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("chiral-nri: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: &Command, seed_root: Option<&Path>) -> Result<(), CliError> {
    let args = command.args();
    let cfg = RunConfig::load(&args.config)?;
    let out_dir = resolve_output_dir(args.out.as_deref(), &cfg.output.dir, seed_root);
    let body = || match command {
        Command::Sweep(_) => cmd_sweep(&cfg, &out_dir),
        Command::Bands(_) => cmd_bands(&cfg, &out_dir),
        Command::OracleCheck(_) => cmd_oracle_check(&cfg, &out_dir),
        Command::Figures(_) => cmd_figures(&cfg, &out_dir),
    };
    match args.jobs {
        Some(0) => Err(CliError::Config(ConfigError::Invalid("--jobs must be >= 1".into()))),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Other(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

struct Analysed {
    spectrum: ScenarioSpectrum,
    bands: BandReport,
    metrics: ScenarioMetrics,
}

fn sweep_and_analyse(plan: &SweepPlan) -> Result<Vec<Analysed>, CliError> {
    let spectra = run_sweep(plan)?;
    let total: usize = spectra.iter().map(|s| s.records.len()).sum();
    let flagged: usize =
        spectra.iter().flat_map(|s| &s.records).filter(|r| r.flag().is_some()).count();
    if total == 0 || flagged == total {
        return Err(CliError::EmptyOutput);
    }
    Ok(spectra
        .into_iter()
        .map(|spectrum| {
            let bands = detect_negative_bands(&spectrum.records);
            let metrics = summarize_metrics(&spectrum.scenario, &spectrum.records, &bands);
            Analysed { spectrum, bands, metrics }
        })
        .collect())
}

#[derive(Serialize)]
struct ScenarioBlock<'a> {
    label: String,
    group: &'a str,
    theta: f64,
    omega_c: f64,
    metrics: &'a ScenarioMetrics,
    bands: &'a BandReport,
}

fn scenario_blocks(results: &[Analysed]) -> Vec<ScenarioBlock<'_>> {
    results
        .iter()
        .map(|a| ScenarioBlock {
            label: a.spectrum.scenario.label(),
            group: &a.spectrum.scenario.group,
            theta: a.spectrum.scenario.theta,
            omega_c: a.spectrum.scenario.omega_c,
            metrics: &a.metrics,
            bands: &a.bands,
        })
        .collect()
}

fn group_names(plan: &SweepPlan) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for s in &plan.scenarios {
        if !names.contains(&s.group) {
            names.push(s.group.clone());
        }
    }
    names
}

fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let plan = cfg.plan();
    let results = sweep_and_analyse(&plan)?;
    if cfg.output.wants(Format::Csv) {
        for a in &results {
            let name = format!("{}.csv", a.spectrum.scenario.label());
            write_file(out, &name, &output::spectrum_csv(&a.spectrum.records))?;
        }
    }
    if cfg.output.wants(Format::Json) {
        let metrics: Vec<ScenarioMetrics> = results.iter().map(|a| a.metrics.clone()).collect();
        let groups: Vec<_> =
            group_names(&plan).iter().map(|g| summarize_group(g, &metrics)).collect();
        let summary = serde_json::json!({
            "grid": plan.grid,
            "setup": plan.setup,
            "omega_s": plan.omega_s,
            "delta_c": plan.delta_c,
            "delta_m": plan.delta_m,
            "delta_s": plan.delta_s,
            "scenarios": scenario_blocks(&results),
            "groups": groups,
        });
        write_file(out, "summary.json", &to_json(&summary)?)?;
    }
    Ok(())
}

fn cmd_bands(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let results = sweep_and_analyse(&cfg.plan())?;
    for a in &results {
        println!("{}: {} band(s), total width {:.6}", a.spectrum.scenario.label(), a.bands.bands.len(), a.bands.total_width);
        for b in &a.bands.bands {
            println!(
                "  [{:.6}, {:.6}]  min Re n {:.6} at {:.4}",
                b.lo, b.hi, b.min_re_n, b.min_re_n_at
            );
        }
    }
    write_file(out, "bands.json", &to_json(&scenario_blocks(&results))?)
}

fn cmd_oracle_check(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let plan = cfg.plan();
    let mut checks: Vec<(Scenario, Vec<OracleCheckPoint>)> = Vec::new();
    for s in &plan.scenarios {
        let points = run_oracle_checks(&plan, s).map_err(|e| match e {
            Error::InvalidPlan(_) | Error::InvalidInput(_) => CliError::Pipeline(e),
            other => CliError::Oracle(format!("{}: {other}", s.label())),
        })?;
        write_file(out, &format!("oracle_{}.csv", s.label()), &output::oracle_csv(&points))?;
        checks.push((s.clone(), points));
    }

    // printed constitutive closed forms along the figure drive point
    let fig = cfg.figure_scenario();
    let drive = plan.drive(&fig);
    let mut rows = Vec::new();
    for dp in plan.grid.points() {
        if let Ok(p) = evaluate_point(&plan.setup, &drive, &plan.detunings(dp)) {
            rows.push((dp, p.coupling));
        }
    }
    write_file(out, "printed_forms.csv", &output::printed_forms_csv(&rows))?;
    let mut worst = [0.0_f64; 4];
    for (_, a) in &rows {
        let d = crate::constitutive::printed_form_crosscheck(a).deviation;
        for k in 0..4 {
            if d[k].is_finite() {
                worst[k] = worst[k].max(d[k]);
            }
        }
    }

    let findings: Vec<_> = checks.iter().map(|(_, p)| summarize_errata(p)).collect();
    let labels: Vec<String> = checks.iter().map(|(s, _)| s.label()).collect();
    let sections: Vec<ErrataSection<'_>> = checks
        .iter()
        .zip(&findings)
        .zip(&labels)
        .map(|(((_, points), f), label)| ErrataSection {
            label,
            points: points.len(),
            max_residual: points.iter().map(|p| p.residual).fold(0.0, f64::max),
            findings: f,
        })
        .collect();
    write_file(out, "errata.md", &output::errata_markdown(&sections, Some(worst)))?;

    let bad: Vec<String> = sections
        .iter()
        .filter(|s| !(s.max_residual < RESIDUAL_TOLERANCE))
        .map(|s| format!("{} (residual {:e})", s.label, s.max_residual))
        .collect();
    if !bad.is_empty() {
        return Err(CliError::Oracle(format!("residual above {RESIDUAL_TOLERANCE:e}: {}", bad.join(", "))));
    }
    Ok(())
}

type Column = (String, Vec<Option<Complex64>>);

fn column(name: String, spectrum: &ScenarioSpectrum, f: fn(&ChiralConstitutive) -> Complex64) -> Column {
    (name, spectrum.records.iter().map(|r| r.constitutive().map(f)).collect())
}

fn emit_figure(
    cfg: &RunConfig,
    out: &Path,
    stem: &str,
    title: &str,
    x: &[f64],
    columns: &[Column],
) -> Result<(), CliError> {
    write_file(out, &format!("{stem}.csv"), &output::figure_csv(x, columns))?;
    if cfg.output.wants(Format::Svg) {
        let mut series = Vec::new();
        for (k, (name, values)) in columns.iter().enumerate() {
            for (part, dashed, pick) in [("re", false, (|z: Complex64| z.re) as fn(Complex64) -> f64), ("im", true, |z: Complex64| z.im)] {
                series.push(Series {
                    name: format!("{part} {name}"),
                    dashed,
                    color_index: k,
                    values: values.iter().map(|v| v.map(pick)).collect(),
                });
            }
        }
        write_file(out, &format!("{stem}.svg"), &svg::line_plot(title, "delta_p / gamma", x, &series))?;
    }
    Ok(())
}

fn cmd_figures(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let base = cfg.plan();
    let x = base.grid.points();
    let reference = cfg.plan_for(vec![cfg.figure_scenario()]);
    let r = sweep_and_analyse(&reference)?;
    let spectrum = &r[0].spectrum;
    emit_figure(cfg, out, "fig2_xi_eh", "chirality coefficient xi_EH", &x, &[column("xi_eh".into(), spectrum, |c| c.xi_eh)])?;
    emit_figure(cfg, out, "fig2_xi_he", "chirality coefficient xi_HE", &x, &[column("xi_he".into(), spectrum, |c| c.xi_he)])?;

    let results = sweep_and_analyse(&base)?;
    for group in group_names(&base) {
        let columns: Vec<Column> = results
            .iter()
            .filter(|a| a.spectrum.scenario.group == group)
            .map(|a| column(format!("omega_c_{:?}", a.spectrum.scenario.omega_c), &a.spectrum, |c| c.n))
            .collect();
        emit_figure(cfg, out, &format!("{group}_n"), &format!("refractive index ({group})"), &x, &columns)?;
    }

    emit_figure(cfg, out, "fig4_eps", "relative permittivity", &x, &[column("eps".into(), spectrum, |c| c.eps_r)])?;
    emit_figure(cfg, out, "fig4_mu", "relative permeability", &x, &[column("mu".into(), spectrum, |c| c.mu_r)])?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_dir_precedence() {
        let cfg_dir = Path::new("out");
        assert_eq!(resolve_output_dir(None, cfg_dir, None), PathBuf::from("out"));
        assert_eq!(resolve_output_dir(Some(Path::new("x")), cfg_dir, None), PathBuf::from("x"));
        assert_eq!(resolve_output_dir(None, cfg_dir, Some(Path::new("/seed"))), PathBuf::from("/seed/out"));
        assert_eq!(
            resolve_output_dir(Some(Path::new("/abs")), cfg_dir, Some(Path::new("/seed"))),
            PathBuf::from("/abs")
        );
    }

    #[test]
    fn parses_all_subcommands() {
        for sub in ["sweep", "bands", "oracle-check", "figures"] {
            let cli = Cli::try_parse_from(["chiral-nri", sub, "--config", "c.toml", "--jobs", "2"]).unwrap();
            assert_eq!(cli.command.args().jobs, Some(2));
        }
        assert!(Cli::try_parse_from(["chiral-nri", "sweep"]).is_err());
    }
}
