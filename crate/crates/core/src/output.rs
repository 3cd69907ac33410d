//! Plain-text output formats.
//!
//! Every float is written with `{:.16e}` (17 significant digits), enough to
//! round-trip an f64.

use std::io::{self, Write};

use crate::analysis::{ScanHit, WeylReport};
use crate::diophantine::CurvePoint;
use crate::model::TrajectoryFrame;

pub struct Float(pub f64);

impl std::fmt::Display for Float {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

pub fn write_frames<W: Write>(w: &mut W, frames: &[TrajectoryFrame]) -> io::Result<()> {
    writeln!(w, "n,t,sx,sy,sz")?;
    for f in frames {
        writeln!(
            w,
            "{},{},{},{},{}",
            f.n,
            Float(f.t),
            Float(f.bloch.sx),
            Float(f.bloch.sy),
            Float(f.bloch.sz)
        )?;
    }
    Ok(())
}

pub fn write_hits<W: Write>(w: &mut W, hits: &[ScanHit]) -> io::Result<()> {
    writeln!(w, "beta,n,t,sx,sz")?;
    for h in hits {
        writeln!(w, "{},{},{},{},{}", Float(h.beta), h.n, Float(h.t), Float(h.sx), Float(h.sz))?;
    }
    Ok(())
}

pub fn write_weyl<W: Write>(w: &mut W, report: &WeylReport) -> io::Result<()> {
    writeln!(w, "m,magnitude")?;
    for &(m, v) in &report.magnitudes {
        writeln!(w, "{},{}", m, Float(v))?;
    }
    Ok(())
}

pub fn write_curves<W: Write>(w: &mut W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(w, "beta,q,sx")?;
    for p in points {
        writeln!(w, "{},{},{}", Float(p.beta), p.q, Float(p.sx))?;
    }
    Ok(())
}

/// One line of a `check,value,threshold,pass` report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

pub fn write_report<W: Write>(w: &mut W, rows: &[ReportRow]) -> io::Result<()> {
    writeln!(w, "check,value,threshold,pass")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.check, Float(r.value), Float(r.threshold), r.pass)?;
    }
    Ok(())
}

pub fn write_distances<W: Write>(w: &mut W, rows: &[(String, f64, bool)]) -> io::Result<()> {
    writeln!(w, "name,value,pass")?;
    for (name, v, pass) in rows {
        writeln!(w, "{},{},{}", name, Float(*v), pass)?;
    }
    Ok(())
}

/// Scatter plot of `(x, y)` points on `[-1, 1]^2` as a standalone SVG.
pub fn write_scatter_svg<W: Write>(w: &mut W, title: &str, points: &[[f64; 2]], size: u32) -> io::Result<()> {
    let s = size as f64;
    let pad = 0.05 * s;
    let span = s - 2.0 * pad;
    let map = |v: f64| pad + (v + 1.0) * 0.5 * span;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )?;
    writeln!(w, "<title>{}</title>", escape(title))?;
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<rect x="{pad:.1}" y="{pad:.1}" width="{span:.1}" height="{span:.1}" fill="none" stroke="black"/>"#
    )?;
    let mid = map(0.0);
    writeln!(
        w,
        r##"<path d="M{pad:.1} {mid:.1}H{:.1}M{mid:.1} {pad:.1}V{:.1}" stroke="#bbb"/>"##,
        pad + span,
        pad + span
    )?;
    writeln!(w, r#"<g fill="steelblue" fill-opacity="0.5">"#)?;
    for &[x, y] in points {
        if !(x.is_finite() && y.is_finite()) {
            continue;
        }
        writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#, map(x), map(-y))?;
    }
    writeln!(w, "</g>\n</svg>")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BlochVector;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, std::f64::consts::PI] {
            let s = Float(v).to_string();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn frames_schema() {
        let frames = [TrajectoryFrame {
            n: 3,
            t: 12.0,
            bloch: BlochVector::new(0.5, 0.0, -0.25),
        }];
        let mut buf = Vec::new();
        write_frames(&mut buf, &frames).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,t,sx,sy,sz"));
        let cols: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cols[0], "3");
        assert_eq!(cols[4].parse::<f64>().unwrap(), -0.25);
    }

    #[test]
    fn svg_is_well_formed() {
        let mut buf = Vec::new();
        write_scatter_svg(&mut buf, "a<b", &[[0.0, 0.0], [f64::NAN, 1.0]], 200).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<circle").count(), 1);
        assert!(text.contains("a&lt;b"));
    }
}
