//! Rendering of curves and measures: Markdown tables, SVG plots and CSV.

mod svg;
mod table;

use thiserror::Error;

use crate::curve::LossDataCurve;

pub use svg::plot_svg;
pub use table::{table_markdown, ComparisonTable, RowKey};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("nothing to render: {0}")]
    Empty(&'static str),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("column {column:?} mixes {first} with {second}")]
    InconsistentColumn {
        column: String,
        first: String,
        second: String,
    },
    #[error("curves mix loss metrics")]
    MixedUnits,
}

/// One row per grid point. Floats use the shortest representation that
/// parses back to the same value.
pub fn curve_to_csv(curve: &LossDataCurve) -> String {
    let mut out = String::from("n,mean_loss,std_error,monotone_mean\n");
    for (p, m) in curve.points.iter().zip(&curve.monotone_means) {
        let se = if p.std_error.is_finite() {
            p.std_error
        } else {
            0.0
        };
        out.push_str(&format!("{},{},{},{}\n", p.n, p.mean_loss, se, m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurvePoint;

    #[test]
    fn csv_round_trip() {
        let c = LossDataCurve::from_means(&[1, 10, 100], &[0.1 + 0.2, 1.0 / 3.0, 0.05], 2).unwrap();
        let csv = curve_to_csv(&c);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "n,mean_loss,std_error,monotone_mean");
        for (line, p) in lines[1..].iter().zip(&c.points) {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[0].parse::<usize>().unwrap(), p.n);
            assert_eq!(f[1].parse::<f64>().unwrap(), p.mean_loss);
            assert_eq!(f[2], "0");
        }
    }

    #[test]
    fn csv_with_std_errors() {
        let mut c = LossDataCurve::from_means(&[5], &[0.5], 2).unwrap();
        c.points[0] = CurvePoint::from_losses(5, vec![0.25, 0.75]);
        let csv = curve_to_csv(&c);
        assert_eq!(csv.lines().nth(1).unwrap(), "5,0.5,0.25,0.5");
    }
}
