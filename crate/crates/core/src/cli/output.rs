//! Text serialisation of sweep, oracle and figure data.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::constitutive::{printed_form_crosscheck, ChiralConstitutive};
use crate::oracle::{Coefficient, ErrataFinding, OracleCheckPoint, FORMULA_TOLERANCE};
use crate::sweep::SpectrumRecord;

pub const SPECTRUM_HEADER: &str =
    "delta_p,re_xi_eh,im_xi_eh,re_xi_he,im_xi_he,re_eps,im_eps,re_mu,im_mu,re_n,im_n,flag";

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_complex(row: &mut String, z: Complex64) {
    let _ = write!(row, ",{},{}", num(z.re), num(z.im));
}

pub fn spectrum_csv(records: &[SpectrumRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 220);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&num(r.delta_p));
        match &r.value {
            Ok(c) => {
                for z in [c.xi_eh, c.xi_he, c.eps_r, c.mu_r, c.n] {
                    push_complex(&mut out, z);
                }
                out.push(',');
            }
            Err(flag) => {
                out.push_str(&",".repeat(10));
                out.push(',');
                out.push_str(flag.as_str());
            }
        }
        out.push('\n');
    }
    out
}

/// Parse a spectrum CSV back into values (flagged rows become `None`).
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<(f64, Option<ChiralConstitutive>)>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(SPECTRUM_HEADER) {
        return Err("unexpected header".into());
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 12 {
                return Err(format!("row {}: {} fields", k + 1, fields.len()));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("row {}: {e}", k + 1));
            let delta_p = parse(fields[0])?;
            if !fields[11].is_empty() {
                return Ok((delta_p, None));
            }
            let v: Vec<f64> = fields[1..11].iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
            let z = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
            Ok((
                delta_p,
                Some(ChiralConstitutive { xi_eh: z(0), xi_he: z(1), eps_r: z(2), mu_r: z(3), n: z(4) }),
            ))
        })
        .collect()
}

const SUFFIX: [&str; 4] = ["ee", "eh", "he", "hh"];

pub fn oracle_csv(points: &[OracleCheckPoint]) -> String {
    let mut out = String::from("delta_p,residual");
    for prefix in ["printed_dev", "repaired_dev"] {
        for s in SUFFIX {
            let _ = write!(out, ",{prefix}_{s}");
        }
    }
    for prefix in ["oracle", "printed"] {
        for s in SUFFIX {
            let _ = write!(out, ",re_{prefix}_{s},im_{prefix}_{s}");
        }
    }
    out.push('\n');
    for p in points {
        out.push_str(&num(p.delta_p));
        let _ = write!(out, ",{}", num(p.residual));
        for d in p.printed_deviation.deviation.iter().chain(&p.repaired_deviation.deviation) {
            let _ = write!(out, ",{}", num(*d));
        }
        for z in p.oracle.as_array().into_iter().chain(p.printed.as_array()) {
            push_complex(&mut out, z);
        }
        out.push('\n');
    }
    out
}

/// Printed constitutive closed forms against the canonical local-field
/// solve, one row per unflagged point.
pub fn printed_forms_csv(rows: &[(f64, crate::constitutive::CouplingCoefficients)]) -> String {
    let mut out = String::from("delta_p,dev_eps,dev_mu,dev_xi_eh,dev_xi_he\n");
    for (dp, a) in rows {
        let r = printed_form_crosscheck(a);
        out.push_str(&num(*dp));
        for d in r.deviation {
            let _ = write!(out, ",{}", num(d));
        }
        out.push('\n');
    }
    out
}

pub struct ErrataSection<'a> {
    pub label: &'a str,
    pub points: usize,
    pub max_residual: f64,
    pub findings: &'a [ErrataFinding],
}

pub fn errata_markdown(sections: &[ErrataSection<'_>], printed_forms: Option<[f64; 4]>) -> String {
    let mut out = String::from("# Closed-form audit\n\n");
    let _ = writeln!(
        out,
        "Closed-form coefficients compared with the Liouville linear-response oracle. \
         Deviations are complex relative errors; the agreement target is {FORMULA_TOLERANCE:e}.\n"
    );
    for s in sections {
        let _ = writeln!(out, "## {}\n", s.label);
        let _ = writeln!(out, "- points compared: {}", s.points);
        let _ = writeln!(out, "- largest solve residual: {}", num(s.max_residual));
        if s.findings.is_empty() {
            out.push_str("- all printed coefficients within target\n\n");
            continue;
        }
        out.push('\n');
        out.push_str("| coefficient | max deviation | at delta_p | points above target | with all corrections | implicated |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for f in s.findings {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                f.coefficient,
                num(f.max_deviation),
                num(f.at_delta_p),
                f.points_above_tolerance,
                num(f.repaired_max_deviation),
                if f.implicated.is_empty() { "unattributed".to_string() } else { f.implicated.join("; ") }
            );
        }
        out.push('\n');
    }
    if let Some(dev) = printed_forms {
        out.push_str("## Printed constitutive closed forms\n\n");
        out.push_str("Largest relative deviation from the local-field solve at the figure drive point:\n\n");
        for (name, d) in ["eps_r", "mu_r", "xi_EH", "xi_HE"].iter().zip(dev) {
            let _ = writeln!(out, "- {name}: {}", num(d));
        }
        out.push('\n');
    }
    out
}

pub fn coefficient_names() -> [&'static str; 4] {
    Coefficient::ALL.map(|c| c.name())
}

/// Figure table: `delta_p` then `re_<name>,im_<name>` per series.
pub fn figure_csv(x: &[f64], series: &[(String, Vec<Option<Complex64>>)]) -> String {
    let mut out = String::from("delta_p");
    for (name, _) in series {
        let _ = write!(out, ",re_{name},im_{name}");
    }
    out.push('\n');
    for (k, xv) in x.iter().enumerate() {
        out.push_str(&num(*xv));
        for (_, values) in series {
            match values[k] {
                Some(z) => push_complex(&mut out, z),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}
