use std::fmt::Write;

use super::{ExperimentKind, FitStatistic, SweepResult};

/// One named curve in data coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

impl PlotSeries {
    /// The fitted statistic of a sweep against `n`.
    pub fn empirical(sweep: &SweepResult) -> Self {
        let points = sweep
            .points
            .iter()
            .filter_map(|row| {
                let y = match sweep.fit_statistic {
                    FitStatistic::Mean => row.mean,
                    FitStatistic::Q90 => row.q90,
                }?;
                Some((row.n as f64, y))
            })
            .collect();
        PlotSeries {
            label: format!("empirical {}", statistic_name(sweep.fit_statistic)),
            points,
        }
    }

    /// Reference curve over the sweep's grid: the closed-form mean scan
    /// length `(L + 1) / 2` with `L = n/2 - 1` for double-star, the fitted
    /// power law otherwise.
    pub fn analytic(sweep: &SweepResult) -> Option<Self> {
        let grid = sweep.points.iter().map(|row| row.n as f64);
        if sweep.config.experiment == ExperimentKind::DoubleStar {
            return Some(PlotSeries {
                label: "(L+1)/2".into(),
                points: grid.map(|n| (n, n / 4.0)).collect(),
            });
        }
        let fit = sweep.fit.as_ref()?;
        Some(PlotSeries {
            label: format!("fit n^{:.3}", fit.slope),
            points: grid
                .map(|n| (n, (fit.intercept + fit.slope * n.ln()).exp()))
                .collect(),
        })
    }
}

fn statistic_name(statistic: FitStatistic) -> &'static str {
    match statistic {
        FitStatistic::Mean => "mean",
        FitStatistic::Q90 => "q90",
    }
}

fn log_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .map(f64::log10)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return None;
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    Some(if lo == hi { (lo, lo + 1.0) } else { (lo, hi) })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the series on log-log axes as a standalone SVG document.
/// Non-positive values are dropped. Returns a blank frame when nothing is
/// plottable.
pub fn plot_svg(title: &str, y_label: &str, empirical: &PlotSeries, analytic: Option<&PlotSeries>) -> String {
    let all = || empirical.points.iter().chain(analytic.into_iter().flat_map(|s| s.points.iter()));
    let x_range = log_range(all().map(|p| p.0));
    let y_range = log_range(all().map(|p| p.1));
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN / 2.0, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path class="axes" d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">n</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    if let (Some((xa, xb)), Some((ya, yb))) = (x_range, y_range) {
        let sx = |x: f64| x0 + (x.log10() - xa) / (xb - xa) * (x1 - x0);
        let sy = |y: f64| y0 - (y.log10() - ya) / (yb - ya) * (y0 - y1);
        for decade in xa as i32..=xb as i32 {
            let x = sx(10f64.powi(decade));
            let _ = writeln!(
                svg,
                r#"<text class="tick" x="{x:.1}" y="{}" text-anchor="middle" font-size="11">1e{decade}</text>"#,
                y0 + 16.0
            );
        }
        for decade in ya as i32..=yb as i32 {
            let y = sy(10f64.powi(decade));
            let _ = writeln!(
                svg,
                r#"<text class="tick" x="{}" y="{y:.1}" text-anchor="end" font-size="11">1e{decade}</text>"#,
                x0 - 6.0
            );
        }
        let mut legend_y = y1 + 4.0;
        let styled = [(Some(empirical), "empirical", "#1f5fa8", ""), (analytic, "analytic", "#c0392b", r#" stroke-dasharray="6 4""#)];
        for (series, class, color, dash) in styled {
            let Some(series) = series else { continue };
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
                .map(|&(x, y)| (sx(x), sy(y)))
                .collect();
            let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="series {class}" points="{}" stroke="{color}" stroke-width="2" fill="none"{dash}/>"#,
                coords.join(" ")
            );
            if class == "empirical" {
                for (x, y) in &pts {
                    let _ = writeln!(svg, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="{color}"/>"#);
                }
            }
            let _ = writeln!(
                svg,
                r#"<text class="legend" x="{}" y="{legend_y:.1}" font-size="12" fill="{color}">{}</text>"#,
                x0 + 12.0,
                escape(&series.label)
            );
            legend_y += 16.0;
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(points: &[(f64, f64)]) -> PlotSeries {
        PlotSeries {
            label: "a<b".into(),
            points: points.to_vec(),
        }
    }

    #[test]
    fn renders_both_series_with_markers() {
        let svg = plot_svg(
            "demo",
            "queries",
            &series(&[(100.0, 5.0), (1000.0, 50.0), (10000.0, 500.0)]),
            Some(&series(&[(100.0, 4.0), (10000.0, 400.0)])),
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains(r#"class="series empirical""#));
        assert!(svg.contains(r#"class="series analytic""#));
        assert!(svg.contains("a&lt;b"));
    }

    #[test]
    fn empty_input_gives_blank_frame() {
        let svg = plot_svg("empty", "y", &series(&[(0.0, 1.0)]), None);
        assert!(!svg.contains("polyline"));
        assert!(svg.contains("</svg>"));
    }
}
