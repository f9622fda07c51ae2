use std::fmt::Write;

use super::ReportError;
use crate::curve::LossDataCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, n: f64) -> f64 {
        let t = (n.log10() - self.x_lo) / (self.x_hi - self.x_lo);
        LEFT + t * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, loss: f64) -> f64 {
        let t = loss / self.y_hi;
        HEIGHT - BOTTOM - t * (HEIGHT - TOP - BOTTOM)
    }
}

/// Loss-data curves on a log-scale size axis, each with a ±1 standard
/// error band, plus a dashed reference line at `epsilon` if given.
pub fn plot_svg(curves: &[LossDataCurve], epsilon: Option<f64>) -> Result<String, ReportError> {
    let first = curves
        .first()
        .ok_or(ReportError::Empty("no curves to plot"))?;
    if curves.iter().any(|c| c.metric != first.metric) {
        return Err(ReportError::MixedUnits);
    }
    let sizes = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.n as f64));
    let (n_min, n_max) = sizes.fold((f64::INFINITY, 0f64), |(a, b), n| (a.min(n), b.max(n)));
    let x_lo = n_min.log10().floor();
    let mut x_hi = n_max.log10().ceil();
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    let top = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.mean_loss + finite(p.std_error)))
        .fold(epsilon.unwrap_or(0.0), f64::max);
    let y_hi = if top > 0.0 { top * 1.05 } else { 1.0 };
    let f = Frame { x_lo, x_hi, y_hi };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2} {y1:.2} L{x0:.2} {y0:.2} L{x1:.2} {y0:.2}" fill="none" stroke="black"/>"#
    );

    let decades = (x_hi - x_lo) as i32;
    for i in 0..=decades {
        let e = x_lo as i32 + i;
        let x = f.x(10f64.powi(e));
        let _ = writeln!(
            s,
            r#"<path d="M{x:.2} {y0:.2} L{x:.2} {:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
    }
    for i in 0..=5 {
        let v = y_hi * i as f64 / 5.0;
        let y = f.y(v);
        let _ = writeln!(
            s,
            r#"<path d="M{:.2} {y:.2} L{x0:.2} {y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">evaluation set size n</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">mean loss</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let upper: Vec<String> = c
            .points
            .iter()
            .map(|p| {
                format!(
                    "{:.2},{:.2}",
                    f.x(p.n as f64),
                    f.y(p.mean_loss + finite(p.std_error))
                )
            })
            .collect();
        let lower: Vec<String> = c
            .points
            .iter()
            .rev()
            .map(|p| {
                let lo = (p.mean_loss - finite(p.std_error)).max(0.0);
                format!("{:.2},{:.2}", f.x(p.n as f64), f.y(lo))
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{} {}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            upper.join(" "),
            lower.join(" ")
        );
        let line: Vec<String> = c
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", f.x(p.n as f64), f.y(p.mean_loss)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            line.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="12" height="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            x1 + 10.0,
            ly - 4.0,
            x1 + 28.0,
            ly,
            xml_escape(&c.name)
        );
    }

    if let Some(eps) = epsilon {
        let y = f.y(eps);
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="gray" stroke-dasharray="6 4"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">ε = {eps}</text>"#,
            x1 + 10.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn finite(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> LossDataCurve {
        LossDataCurve::from_means(&[10, 1000], &[0.6, 0.1], 2)
            .unwrap()
            .with_name("a<b")
    }

    #[test]
    fn one_polyline_two_vertices() {
        let svg = plot_svg(&[two_point()], None).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let lines: Vec<_> = doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .collect();
        assert_eq!(lines.len(), 1);
        let pts = lines[0]
            .attribute("points")
            .unwrap()
            .split_whitespace()
            .count();
        assert_eq!(pts, 2);
        assert!(!doc
            .descendants()
            .any(|n| n.attribute("stroke-dasharray").is_some()));
    }

    #[test]
    fn epsilon_line_position() {
        let svg = plot_svg(&[two_point()], Some(0.1)).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let dashed: Vec<_> = doc
            .descendants()
            .filter(|n| n.attribute("stroke-dasharray").is_some())
            .collect();
        assert_eq!(dashed.len(), 1);
        let line = dashed[0];
        assert!(line.has_tag_name("line"));
        let y1: f64 = line.attribute("y1").unwrap().parse().unwrap();
        assert_eq!(line.attribute("y1"), line.attribute("y2"));
        // y axis spans 0..0.63 over pixel rows 450..20
        let want = 450.0 - 0.1 / 0.63 * 430.0;
        assert!((y1 - want).abs() < 0.01, "{y1} vs {want}");
    }

    #[test]
    fn deterministic_and_escaped() {
        let a = plot_svg(&[two_point(), two_point()], Some(0.2)).unwrap();
        let b = plot_svg(&[two_point(), two_point()], Some(0.2)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("a&lt;b"));
        let doc = roxmltree::Document::parse(&a).unwrap();
        assert_eq!(doc.root_element().attribute("viewBox"), Some("0 0 800 500"));
    }

    #[test]
    fn empty_is_error() {
        assert!(plot_svg(&[], None).is_err());
    }
}
