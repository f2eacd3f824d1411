//! Minimal self-contained SVG line plots.
//!
//! The root element carries the data-to-pixel mapping as `data-*`
//! attributes so plotted paths can be mapped back to data coordinates.

use std::fmt::Write as _;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 6] = ["#000000", "#7f7f7f", "#bfbfbf", "#1f4e9c", "#b03a2e", "#2e7d32"];

/// One curve; `None` breaks the line.
pub struct Series {
    pub name: String,
    pub dashed: bool,
    pub color_index: usize,
    pub values: Vec<Option<f64>>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// y-range from the 1st to 99th percentile of all finite values, widened by
/// 10 % and always containing 0. Outliers near poles are clipped.
fn robust_range(series: &[Series]) -> (f64, f64) {
    let mut all: Vec<f64> =
        series.iter().flat_map(|s| s.values.iter().flatten().copied()).filter(|v| v.is_finite()).collect();
    if all.is_empty() {
        return (-1.0, 1.0);
    }
    all.sort_by(f64::total_cmp);
    let pick = |q: f64| all[((all.len() - 1) as f64 * q).round() as usize];
    let (mut lo, mut hi) = (pick(0.01).min(0.0), pick(0.99).max(0.0));
    if hi - lo <= 0.0 {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = 0.1 * (hi - lo);
    (lo - pad, hi + pad)
}

pub fn line_plot(title: &str, x_label: &str, x: &[f64], series: &[Series]) -> String {
    let (x_min, x_max) = (x.first().copied().unwrap_or(0.0), x.last().copied().unwrap_or(1.0));
    let (y_min, y_max) = robust_range(series);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (v - x_min) / (x_max - x_min) * plot_w;
    let py = |v: f64| TOP + (y_max - v.clamp(y_min, y_max)) / (y_max - y_min) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-x-min="{x_min:e}" data-x-max="{x_max:e}" data-y-min="{y_min:e}" data-y-max="{y_max:e}" data-left="{LEFT}" data-top="{TOP}" data-plot-width="{plot_w}" data-plot-height="{plot_h}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    if y_min < 0.0 && y_max > 0.0 {
        let y0 = py(0.0);
        let _ = writeln!(
            out,
            r##"<line class="zero" x1="{LEFT}" y1="{y0:.3}" x2="{:.3}" y2="{y0:.3}" stroke="#999" stroke-width="0.5"/>"##,
            LEFT + plot_w
        );
    }
    for k in 0..=4 {
        let xv = x_min + (x_max - x_min) * k as f64 / 4.0;
        let yv = y_min + (y_max - y_min) * k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            px(xv),
            TOP + plot_h + 16.0,
            fmt_tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(yv) + 4.0,
            fmt_tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );

    for (k, s) in series.iter().enumerate() {
        let mut d = String::new();
        let mut pen_down = false;
        for (xv, yv) in x.iter().zip(&s.values) {
            match yv.filter(|v| v.is_finite()) {
                Some(v) => {
                    let _ = write!(d, "{}{:.3} {:.3} ", if pen_down { "L" } else { "M" }, px(*xv), py(v));
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        let color = PALETTE[s.color_index % PALETTE.len()];
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<path data-series="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash} d="{}"/>"#,
            escape(&s.name),
            d.trim_end()
        );
        let ly = TOP + 14.0 + 14.0 * k as f64;
        let lx = LEFT + plot_w - 170.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-2 && v.abs() < 1e4) {
        format!("{v:.2}")
    } else {
        format!("{v:.1e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_contains_zero_and_clips_outliers() {
        let mut values: Vec<Option<f64>> = (0..200).map(|k| Some(1.0 + k as f64 / 200.0)).collect();
        values[7] = Some(1e9);
        let s = [Series { name: "a".into(), dashed: false, color_index: 0, values }];
        let (lo, hi) = robust_range(&s);
        assert!(lo < 0.0 && hi < 10.0);
    }

    #[test]
    fn gaps_restart_the_path() {
        let s = [Series {
            name: "re <n>".into(),
            dashed: true,
            color_index: 1,
            values: vec![Some(1.0), None, Some(2.0), Some(3.0)],
        }];
        let svg = line_plot("t", "x", &[0.0, 1.0, 2.0, 3.0], &s);
        let path = svg.lines().find(|l| l.starts_with("<path")).unwrap();
        assert_eq!(path.matches('M').count(), 2);
        assert!(svg.contains("re &lt;n&gt;"));
        assert!(svg.contains("stroke-dasharray"));
    }
}
