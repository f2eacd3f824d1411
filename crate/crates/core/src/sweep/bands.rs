use serde::{Deserialize, Serialize};

use super::SpectrumRecord;

/// Signs of Re ε and Re μ at the negative-index points of a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignCensus {
    pub points: usize,
    pub eps_negative: usize,
    pub mu_negative: usize,
    pub both_negative: usize,
    /// Points with Re n < 0 and Re μ > 0.
    pub mu_positive: usize,
}

impl SignCensus {
    fn add(&mut self, other: &SignCensus) {
        self.points += other.points;
        self.eps_negative += other.eps_negative;
        self.mu_negative += other.mu_negative;
        self.both_negative += other.both_negative;
        self.mu_positive += other.mu_positive;
    }
}

/// Maximal Δ_p interval with Re n < 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    /// Edge interpolated between a grid pair across which Re n changes sign.
    /// False when the band runs into the grid end or a flagged point; the
    /// edge is then the outermost negative grid point.
    pub lo_bracketed: bool,
    pub hi_bracketed: bool,
    pub width: f64,
    pub min_re_n: f64,
    pub min_re_n_at: f64,
    pub max_im_n: f64,
    pub min_im_n: f64,
    pub census: SignCensus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub bands: Vec<Band>,
    pub total_width: f64,
    /// Largest |ξ_EH + ξ_HE| / (|ξ_EH| + |ξ_HE|) over the sweep; `None` if
    /// the ratio is undefined at every point.
    pub max_antisymmetry: Option<f64>,
}

impl BandReport {
    pub fn census(&self) -> SignCensus {
        let mut c = SignCensus::default();
        for b in &self.bands {
            c.add(&b.census);
        }
        c
    }

    pub fn intersects(&self, lo: f64, hi: f64) -> bool {
        self.bands.iter().any(|b| b.hi >= lo && b.lo <= hi)
    }
}

/// Root of the line through (x0, y0), (x1, y1).
fn crossing(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    if y1 == y0 {
        return x0;
    }
    x0 + (x1 - x0) * (y0 / (y0 - y1))
}

fn re_n(r: &SpectrumRecord) -> Option<f64> {
    r.constitutive().map(|c| c.n.re)
}

/// Sign-based negative-index bands of records sorted by Δ_p.
pub fn detect_negative_bands(records: &[SpectrumRecord]) -> BandReport {
    let mut bands = Vec::new();
    let mut k = 0;
    while k < records.len() {
        if !re_n(&records[k]).is_some_and(|v| v < 0.0) {
            k += 1;
            continue;
        }
        let first = k;
        while k + 1 < records.len() && re_n(&records[k + 1]).is_some_and(|v| v < 0.0) {
            k += 1;
        }
        let last = k;
        k += 1;

        let (lo, lo_bracketed) = match first.checked_sub(1).and_then(|p| re_n(&records[p]).map(|v| (p, v))) {
            Some((p, v)) => {
                let inner = re_n(&records[first]).unwrap_or_default();
                (crossing(records[p].delta_p, v, records[first].delta_p, inner), true)
            }
            None => (records[first].delta_p, false),
        };
        let (hi, hi_bracketed) = match records.get(last + 1).and_then(|r| re_n(r).map(|v| (r, v))) {
            Some((r, v)) => {
                let inner = re_n(&records[last]).unwrap_or_default();
                (crossing(records[last].delta_p, inner, r.delta_p, v), true)
            }
            None => (records[last].delta_p, false),
        };

        let mut band = Band {
            lo,
            hi,
            lo_bracketed,
            hi_bracketed,
            width: hi - lo,
            min_re_n: f64::INFINITY,
            min_re_n_at: records[first].delta_p,
            max_im_n: f64::NEG_INFINITY,
            min_im_n: f64::INFINITY,
            census: SignCensus::default(),
        };
        for r in &records[first..=last] {
            let c = r.constitutive().expect("band points are unflagged");
            if c.n.re < band.min_re_n {
                band.min_re_n = c.n.re;
                band.min_re_n_at = r.delta_p;
            }
            band.max_im_n = band.max_im_n.max(c.n.im);
            band.min_im_n = band.min_im_n.min(c.n.im);
            let census = &mut band.census;
            census.points += 1;
            let (eps_neg, mu_neg) = (c.eps_r.re < 0.0, c.mu_r.re < 0.0);
            census.eps_negative += usize::from(eps_neg);
            census.mu_negative += usize::from(mu_neg);
            census.both_negative += usize::from(eps_neg && mu_neg);
            census.mu_positive += usize::from(c.mu_r.re > 0.0);
        }
        bands.push(band);
    }
    let total_width = bands.iter().map(|b| b.width).sum();
    let max_antisymmetry = antisymmetry_in_range(records, f64::NEG_INFINITY, f64::INFINITY);
    BandReport { bands, total_width, max_antisymmetry }
}

/// Largest antisymmetry ratio over records with `lo ≤ Δ_p ≤ hi`.
pub fn antisymmetry_in_range(records: &[SpectrumRecord], lo: f64, hi: f64) -> Option<f64> {
    records
        .iter()
        .filter(|r| r.delta_p >= lo && r.delta_p <= hi)
        .filter_map(|r| r.constitutive().and_then(|c| c.antisymmetry()))
        .reduce(f64::max)
}

pub fn is_non_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::ChiralConstitutive;
    use crate::sweep::PointFlag;
    use num_complex::Complex64;

    fn record(delta_p: f64, n_re: f64) -> SpectrumRecord {
        let c = ChiralConstitutive { n: Complex64::new(n_re, 0.1), ..ChiralConstitutive::VACUUM };
        SpectrumRecord { delta_p, value: Ok(c) }
    }

    fn parabola(count: usize) -> Vec<SpectrumRecord> {
        (0..count)
            .map(|k| {
                let x = -3.0 + 6.0 * k as f64 / (count - 1) as f64;
                record(x, x * x - 1.0)
            })
            .collect()
    }

    #[test]
    fn positive_index_gives_no_bands() {
        let recs: Vec<_> = (0..50).map(|k| record(k as f64, 1.0 + k as f64)).collect();
        let r = detect_negative_bands(&recs);
        assert!(r.bands.is_empty());
        assert_eq!(r.total_width, 0.0);
    }

    #[test]
    fn parabola_band_edges() {
        let recs = parabola(601);
        let step = 6.0 / 600.0;
        let r = detect_negative_bands(&recs);
        assert_eq!(r.bands.len(), 1);
        let b = &r.bands[0];
        assert!((b.lo + 1.0).abs() < step && (b.hi - 1.0).abs() < step, "{b:?}");
        assert!(b.lo_bracketed && b.hi_bracketed);
        assert!((b.min_re_n + 1.0).abs() < 1e-12);
        assert!(b.min_re_n_at.abs() < step);
        assert_eq!(b.census.points, b.census.mu_positive);
    }

    #[test]
    fn flagged_point_splits_a_band() {
        let mut recs = parabola(61);
        recs[30].value = Err(PointFlag::Pole);
        let r = detect_negative_bands(&recs);
        assert_eq!(r.bands.len(), 2);
        assert!(!r.bands[0].hi_bracketed && !r.bands[1].lo_bracketed);
        assert!(r.bands[0].hi < recs[30].delta_p && r.bands[1].lo > recs[30].delta_p);
    }

    #[test]
    fn band_at_grid_end_is_unbracketed() {
        let recs: Vec<_> = (0..10).map(|k| record(k as f64, 4.5 - k as f64)).collect();
        let r = detect_negative_bands(&recs);
        assert_eq!(r.bands.len(), 1);
        assert!(r.bands[0].lo_bracketed && !r.bands[0].hi_bracketed);
        assert_eq!(r.bands[0].lo, 4.5);
        assert_eq!(r.bands[0].hi, 9.0);
    }

    #[test]
    fn monotone_helper() {
        assert!(is_non_decreasing(&[1.0, 1.0, 2.0]));
        assert!(!is_non_decreasing(&[1.0, 0.5]));
        assert!(is_non_decreasing(&[]));
    }
}
