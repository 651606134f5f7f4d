use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use super::engine::SweepResult;
use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip scientific notation.
pub fn format_number(v: f64) -> String {
    // Adding zero folds −0 into 0.
    format!("{:e}", v + 0.0)
}

fn metadata(result: &SweepResult) -> Vec<String> {
    let p = &result.base;
    let regular = p.positions.len() > 4
        && p.positions.windows(2).all(|w| w[1].x - w[0].x == p.lambda && w[1].y == w[0].y);
    let positions: Vec<String> = if regular {
        let s = p.positions[0];
        vec![format!(
            "{} sites from ({},{}) in steps of lambda",
            p.positions.len(),
            format_number(s.x),
            format_number(s.y)
        )]
    } else {
        p.positions
            .iter()
            .map(|s| format!("({},{})", format_number(s.x), format_number(s.y)))
            .collect()
    };
    let mut lines = vec![
        format!("# cavity-interference {VERSION}"),
        format!("# engine: {}", result.engine),
        format!(
            "# params: n_atoms={} g0={} omega={} delta_a={} delta_c={} gamma={} kappa={} lambda={}",
            p.n_atoms,
            format_number(p.g0),
            format_number(p.omega),
            format_number(p.delta_a),
            format_number(p.delta_c),
            format_number(p.gamma),
            format_number(p.kappa),
            format_number(p.lambda),
        ),
        format!("# positions: {}", positions.join(" ")),
        format!(
            "# axes: {}",
            result.axes.iter().map(|a| a.name()).collect::<Vec<_>>().join(" ")
        ),
    ];
    match (p.n_max, result.n_max_used) {
        (_, Some(n)) => lines.push(format!("# n_max: {n}")),
        (Some(n), None) => lines.push(format!("# n_max: {n}")),
        _ => {}
    }
    lines
}

/// CSV text; the last comment line carries the timestamp and wall time.
pub fn render_csv(result: &SweepResult) -> Result<String> {
    let mut out = metadata(result).join("\n");
    out.push('\n');
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    out.push_str(&format!(
        "# generated: unix {stamp} wall_time_s: {:.3}\n",
        result.wall_time
    ));

    let mut w = ::csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = result
        .axes
        .iter()
        .map(|a| a.name())
        .chain(result.columns.iter().map(|c| c.as_str()))
        .chain(std::iter::once("flag"))
        .collect();
    let csv_err = |e: ::csv::Error| Error::Numerical(format!("csv encoding: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for row in &result.rows {
        let fields: Vec<String> = row
            .coords
            .iter()
            .map(|&v| format_number(v))
            .chain(row.values.iter().map(|v| v.map(format_number).unwrap_or_default()))
            .chain(std::iter::once(row.flag.clone().unwrap_or_default()))
            .collect();
        w.write_record(&fields).map_err(csv_err)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| Error::Numerical(format!("csv encoding: {e}")))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let text = render_csv(result)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Data lines and header without the `#` prologue.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::sweep::config::{Axis, AxisSpec, Engine, Observable, SweepSpec};
    use crate::sweep::engine::run_sweep;

    fn result() -> SweepResult {
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
    fn layout() {
        let text = render_csv(&result()).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 4);
        assert_eq!(data[0], "kappa,i_cav,i_at,flag");
        assert!(data[1].starts_with("5e-1,"));
        assert!(text.lines().any(|l| l.starts_with("# engine: analytic")));
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn reruns_match_apart_from_the_stamp() {
        let a = render_csv(&result()).unwrap();
        let b = render_csv(&result()).unwrap();
        let drop_stamp = |t: &str| {
            t.lines()
                .filter(|l| !l.starts_with("# generated:"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(drop_stamp(&a), drop_stamp(&b));
    }

    #[test]
    fn unwritable_path_names_the_path() {
        let err = write_csv(&result(), Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
