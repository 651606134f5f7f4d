//! Minimal self-contained SVG output: line plots for one-axis sweeps and
//! heatmaps for two-axis maps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::engine::SweepResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy, Debug)]
struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>, log: bool, px_lo: f64, px_hi: f64) -> Option<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return None;
        }
        if hi == lo {
            lo -= 0.5;
            hi += 0.5;
        }
        Some(Self {
            lo,
            hi,
            log,
            px_lo,
            px_hi,
        })
    }

    fn map(&self, v: f64) -> Option<f64> {
        if !v.is_finite() || (self.log && v <= 0.0) {
            return None;
        }
        let u = if self.log { v.log10() } else { v };
        Some(self.px_lo + (u - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo))
    }

    /// Tick values in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = ((b - a) / 6 + 1).max(1);
            let mut t: Vec<f64> = (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).collect();
            if t.is_empty() {
                t.push(10f64.powf(self.lo));
            }
            t
        } else {
            let span = self.hi - self.lo;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| span / s <= 6.0)
                .unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last).map(|i| i as f64 * step).collect()
        }
    }
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

fn frame(svg: &mut String, title: &str, xs: &Scale, ys: &Scale, x_name: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = write!(
        svg,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for t in xs.ticks() {
        if let Some(px) = xs.map(t) {
            let _ = write!(
                svg,
                r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                label(t)
            );
        }
    }
    for t in ys.ticks() {
        if let Some(py) = ys.map(t) {
            let _ = write!(
                svg,
                r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                label(t)
            );
        }
    }
    let _ = write!(
        svg,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text><text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(x_name),
        (x0 + x1) / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open() -> String {
    format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif"><rect width="100%" height="100%" fill="white"/>"#
    )
}

/// One polyline per (series, column) pair, x taken from the first axis.
pub fn render_line_plot(
    title: &str,
    series: &[(&str, &SweepResult)],
    log_x: bool,
    log_y: bool,
) -> Result<String> {
    if series.iter().all(|(_, r)| r.is_empty() || r.columns.is_empty()) {
        return Err(Error::Empty { what: "sweep result" });
    }
    let xs_all = series.iter().flat_map(|(_, r)| r.axis_values(0));
    let ys_all = series
        .iter()
        .flat_map(|(_, r)| r.rows.iter().flat_map(|row| row.values.iter().flatten().copied()));
    let (Some(xs), Some(ys)) = (
        Scale::new(xs_all, log_x, LEFT, WIDTH - RIGHT),
        Scale::new(ys_all, log_y, HEIGHT - BOTTOM, TOP),
    ) else {
        return Err(Error::Empty { what: "plottable values" });
    };

    let mut svg = open();
    let x_name = series[0].1.axes[0].name();
    frame(&mut svg, title, &xs, &ys, x_name);
    let mut k = 0;
    for (name, r) in series {
        for (c, col) in r.columns.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let mut path = String::new();
            let mut pen_up = true;
            for row in &r.rows {
                match (xs.map(row.coords[0]), row.values[c].and_then(|v| ys.map(v))) {
                    (Some(px), Some(py)) => {
                        let _ = write!(path, "{}{px:.2},{py:.2} ", if pen_up { "M" } else { "L" });
                        pen_up = false;
                    }
                    _ => pen_up = true,
                }
            }
            let _ = write!(
                svg,
                r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.trim_end()
            );
            let ly = TOP + 14.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 12.0;
            let text = if name.is_empty() {
                col.clone()
            } else {
                format!("{name}: {col}")
            };
            let _ = write!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-size="11">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(&text)
            );
            k += 1;
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn viridis(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let lerp = |u: f64, v: f64| (u + (v - u) * f).round() as u8;
    (lerp(a.0, b.0), lerp(a.1, b.1), lerp(a.2, b.2))
}

/// Heatmap of `column` over a two-axis sweep, with a colorbar.
pub fn render_heatmap(title: &str, result: &SweepResult, column: &str) -> Result<String> {
    if result.is_empty() {
        return Err(Error::Empty { what: "sweep result" });
    }
    if result.axes.len() != 2 {
        return Err(Error::validation("plot", "heatmaps need a two-axis sweep"));
    }
    let values = result
        .column(column)
        .ok_or_else(|| Error::validation("plot", format!("no column `{column}`")))?;
    let mut ux = result.axis_values(0);
    let mut uy = result.axis_values(1);
    for u in [&mut ux, &mut uy] {
        u.sort_by(f64::total_cmp);
        u.dedup();
    }
    let xs = Scale::new(ux.iter().copied(), false, LEFT, WIDTH - RIGHT).expect("nonempty axis");
    let ys = Scale::new(uy.iter().copied(), false, HEIGHT - BOTTOM, TOP).expect("nonempty axis");
    let finite: Vec<f64> = values.iter().flatten().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::Empty { what: "plottable values" });
    }
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };

    let cell = |u: &[f64], i: usize, s: &Scale| {
        let here = s.map(u[i]).unwrap();
        let prev = if i > 0 { s.map(u[i - 1]).unwrap() } else { here - (s.map(u[(i + 1).min(u.len() - 1)]).unwrap() - here) };
        let next = if i + 1 < u.len() { s.map(u[i + 1]).unwrap() } else { here + (here - prev) };
        let (a, b) = ((prev + here) / 2.0, (here + next) / 2.0);
        if (b - a).abs() < 1.0 {
            (here - 0.5, 1.0)
        } else {
            (a.min(b), (b - a).abs())
        }
    };

    let mut svg = open();
    for (row, v) in result.rows.iter().zip(&values) {
        let Some(v) = v.filter(|v| v.is_finite()) else {
            continue;
        };
        let i = ux.iter().position(|&x| x == row.coords[0]).unwrap();
        let j = uy.iter().position(|&y| y == row.coords[1]).unwrap();
        let (x, w) = cell(&ux, i, &xs);
        let (y, h) = cell(&uy, j, &ys);
        let (r, g, b) = viridis((v - lo) / span);
        let _ = write!(
            svg,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="rgb({r},{g},{b})"/>"#
        );
    }
    frame(&mut svg, title, &xs, &ys, result.axes[0].name());
    let _ = write!(
        svg,
        r#"<text x="20" y="{}" font-size="13" transform="rotate(-90 20 {})" text-anchor="middle">{}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        result.axes[1].name()
    );

    let bx = WIDTH - RIGHT + 40.0;
    let steps = 64;
    let bar_h = HEIGHT - BOTTOM - TOP;
    for s in 0..steps {
        let t = s as f64 / (steps - 1) as f64;
        let (r, g, b) = viridis(t);
        let y = HEIGHT - BOTTOM - (s + 1) as f64 * bar_h / steps as f64;
        let _ = write!(
            svg,
            r#"<rect x="{bx}" y="{y:.2}" width="20" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
            bar_h / steps as f64 + 0.5
        );
    }
    let _ = write!(
        svg,
        r#"<text x="{}" y="{}" font-size="11">{}</text><text x="{}" y="{}" font-size="11">{}</text><text x="{bx}" y="{}" font-size="12">{}</text></svg>
"#,
        bx + 26.0,
        HEIGHT - BOTTOM,
        label(lo),
        bx + 26.0,
        TOP + 10.0,
        label(hi),
        TOP - 8.0,
        escape(column)
    );
    Ok(svg)
}

/// Heatmap of the first column for two-axis results, line plot otherwise.
pub fn write_plot(path: &Path, title: &str, series: &[(&str, &SweepResult)]) -> Result<()> {
    let first = series.first().ok_or(Error::Empty { what: "sweep result" })?.1;
    let svg = if first.axes.len() == 2 {
        let column = first.columns.first().ok_or(Error::Empty { what: "sweep result" })?;
        render_heatmap(title, first, column)?
    } else {
        render_line_plot(title, series, first.log_x, first.log_y)?
    };
    fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::sweep::config::{Axis, AxisSpec, Engine, Observable, SweepSpec};
    use crate::sweep::engine::run_sweep;

    fn line() -> SweepResult {
        let spec = SweepSpec::new(
            ModelParams::default(),
            AxisSpec::list(Axis::Kappa, &[0.5, 1.0, 2.0]).unwrap(),
            Engine::Analytic,
            &[Observable::ICav, Observable::IAt],
        )
        .unwrap();
        run_sweep(&spec).unwrap()
    }

    #[test]
    fn one_polyline_per_observable() {
        let r = line();
        let svg = render_line_plot("t", &[("", &r)], true, true).unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains(">i_cav<") && svg.contains(">i_at<"));
    }

    #[test]
    fn heatmap_has_colorbar() {
        let mut spec = SweepSpec::new(
            ModelParams::default().pattern(2, 0.0),
            AxisSpec::list(Axis::X1, &[0.0, 0.25, 0.5]).unwrap(),
            Engine::Oracle,
            &[Observable::ICav],
        )
        .unwrap();
        spec.axis2 = Some(AxisSpec::list(Axis::X2, &[0.0, 0.5]).unwrap());
        let r = run_sweep(&spec).unwrap();
        let svg = render_heatmap("map", &r, "i_cav").unwrap();
        assert!(svg.matches("<rect").count() >= 6 + 64);
    }

    #[test]
    fn empty_result_writes_nothing() {
        let mut r = line();
        r.rows.clear();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.svg");
        assert!(write_plot(&path, "t", &[("", &r)]).is_err());
        assert!(!path.exists());
    }
}
