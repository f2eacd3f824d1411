use serde::{Deserialize, Serialize};

use super::{antisymmetry_in_range, is_non_decreasing, BandReport, Scenario, SignCensus, SpectrumRecord};

/// Window in which the chirality antisymmetry is reported separately.
pub const ANTISYMMETRY_WINDOW: (f64, f64) = (0.0, 2.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMetrics {
    pub label: String,
    pub group: String,
    pub theta: f64,
    pub omega_c: f64,
    /// Smallest Re n over unflagged points (1 for an empty sweep).
    pub min_re_n: f64,
    pub min_re_n_at: Option<f64>,
    pub band_count: usize,
    pub total_band_width: f64,
    pub census: SignCensus,
    /// Every band contains a point with Re n < 0 and Re μ > 0.
    pub every_band_has_positive_mu: bool,
    pub max_antisymmetry: Option<f64>,
    pub max_antisymmetry_in_window: Option<f64>,
    pub flagged_points: usize,
}

pub fn summarize_metrics(
    scenario: &Scenario,
    records: &[SpectrumRecord],
    bands: &BandReport,
) -> ScenarioMetrics {
    let mut min_re_n = 1.0;
    let mut min_re_n_at = None;
    let mut first = true;
    for r in records {
        if let Some(c) = r.constitutive() {
            if first || c.n.re < min_re_n {
                min_re_n = c.n.re;
                min_re_n_at = Some(r.delta_p);
                first = false;
            }
        }
    }
    ScenarioMetrics {
        label: scenario.label(),
        group: scenario.group.clone(),
        theta: scenario.theta,
        omega_c: scenario.omega_c,
        min_re_n,
        min_re_n_at,
        band_count: bands.bands.len(),
        total_band_width: bands.total_width,
        census: bands.census(),
        every_band_has_positive_mu: bands.bands.iter().all(|b| b.census.mu_positive > 0),
        max_antisymmetry: bands.max_antisymmetry,
        max_antisymmetry_in_window: antisymmetry_in_range(
            records,
            ANTISYMMETRY_WINDOW.0,
            ANTISYMMETRY_WINDOW.1,
        ),
        flagged_points: records.iter().filter(|r| r.flag().is_some()).count(),
    }
}

/// Ordinal comparison of the scenarios sharing a group, in increasing Ω_c.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub omega_c: Vec<f64>,
    pub min_re_n: Vec<f64>,
    pub total_band_width: Vec<f64>,
    /// Ω_c with the most negative min Re n.
    pub argmin_omega_c: Option<f64>,
    pub band_width_non_decreasing: bool,
}

pub fn summarize_group(group: &str, metrics: &[ScenarioMetrics]) -> GroupSummary {
    let mut members: Vec<&ScenarioMetrics> = metrics.iter().filter(|m| m.group == group).collect();
    members.sort_by(|a, b| a.omega_c.total_cmp(&b.omega_c));
    let argmin_omega_c = members
        .iter()
        .min_by(|a, b| a.min_re_n.total_cmp(&b.min_re_n))
        .map(|m| m.omega_c);
    let total_band_width: Vec<f64> = members.iter().map(|m| m.total_band_width).collect();
    GroupSummary {
        group: group.to_string(),
        omega_c: members.iter().map(|m| m.omega_c).collect(),
        min_re_n: members.iter().map(|m| m.min_re_n).collect(),
        band_width_non_decreasing: is_non_decreasing(&total_band_width),
        total_band_width,
        argmin_omega_c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::ChiralConstitutive;
    use crate::sweep::detect_negative_bands;

    #[test]
    fn vacuum_metrics() {
        let recs: Vec<_> = (0..11)
            .map(|k| SpectrumRecord { delta_p: k as f64, value: Ok(ChiralConstitutive::VACUUM) })
            .collect();
        let s = Scenario::new("g", 0.0, 1.0);
        let m = summarize_metrics(&s, &recs, &detect_negative_bands(&recs));
        assert_eq!(m.min_re_n, 1.0);
        assert_eq!(m.band_count, 0);
        assert_eq!(m.max_antisymmetry, None);
        assert!(m.every_band_has_positive_mu);
    }

    #[test]
    fn group_ordering() {
        let mk = |oc: f64, min: f64, w: f64| ScenarioMetrics {
            label: String::new(),
            group: "g".into(),
            theta: 0.0,
            omega_c: oc,
            min_re_n: min,
            min_re_n_at: None,
            band_count: 1,
            total_band_width: w,
            census: SignCensus::default(),
            every_band_has_positive_mu: true,
            max_antisymmetry: None,
            max_antisymmetry_in_window: None,
            flagged_points: 0,
        };
        let ms = vec![mk(1.3, -2.0, 3.0), mk(0.4, -1.0, 1.0), mk(0.8, -0.5, 2.0), {
            let mut o = mk(9.0, -9.0, 0.0);
            o.group = "other".into();
            o
        }];
        let g = summarize_group("g", &ms);
        assert_eq!(g.omega_c, vec![0.4, 0.8, 1.3]);
        assert_eq!(g.argmin_omega_c, Some(1.3));
        assert!(g.band_width_non_decreasing);
    }
}
