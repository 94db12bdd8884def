//! Deterministic SVG rendering of `H`, `E1`, `E2` zero curves.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::interval::Rect;
use crate::parabolic::ParabolicSystem;
use crate::poly::{int, SparsePoly};
use crate::solver::trace::{trace_curve, Polyline};

pub const CANVAS: f64 = 600.0;

/// Stroke style of one curve layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub id: &'static str,
    pub color: &'static str,
    pub dash: Option<&'static str>,
    pub poly: SparsePoly,
}

pub fn system_layers(sys: &ParabolicSystem) -> Vec<Layer> {
    vec![
        Layer {
            id: "H",
            color: "#000000",
            dash: None,
            poly: sys.h.clone(),
        },
        Layer {
            id: "E1",
            color: "#d62728",
            dash: Some("6 3"),
            poly: sys.e1.clone(),
        },
        Layer {
            id: "E2",
            color: "#1f77b4",
            dash: Some("2 2"),
            poly: sys.e2.clone(),
        },
    ]
}

struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(w: &Rect) -> Frame {
        let f = |r: &crate::poly::Rational| r.to_f64().unwrap();
        let (x0, x1, y0, y1) = (f(&w.x.lo), f(&w.x.hi), f(&w.y.lo), f(&w.y.hi));
        Frame {
            x0,
            y0: y1,
            sx: CANVAS / (x1 - x0),
            sy: CANVAS / (y1 - y0),
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (clean((x - self.x0) * self.sx), clean((self.y0 - y) * self.sy))
    }
}

/// Avoid printing `-0.000`.
fn clean(v: f64) -> f64 {
    if v.abs() < 5e-4 {
        0.0
    } else {
        v
    }
}

fn path(frame: &Frame, line: &Polyline) -> String {
    let mut d = String::with_capacity(line.len() * 16);
    for (k, p) in line.iter().enumerate() {
        let (u, v) = frame.map(*p);
        let _ = write!(d, "{}{:.3},{:.3}", if k == 0 { "M" } else { " L" }, u, v);
    }
    d
}

/// Render the zero curves of each layer over `window`, sampled on a
/// `res x res` grid, with the coordinate axes and a circle at each marker.
pub fn render_svg(layers: &[Layer], window: &Rect, res: u32, markers: &[(f64, f64)]) -> String {
    let frame = Frame::new(window);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(s, r##"<rect width="{c}" height="{c}" fill="#ffffff"/>"##, c = CANVAS);
    let _ = writeln!(s, r##"<g id="axes" stroke="#999999" stroke-width="1">"##);
    let (ox, oy) = frame.map((0.0, 0.0));
    if window.x.contains(&int(0)) {
        let _ = writeln!(s, r#"<line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{CANVAS}"/>"#);
    }
    if window.y.contains(&int(0)) {
        let _ = writeln!(s, r#"<line x1="0" y1="{oy:.3}" x2="{CANVAS}" y2="{oy:.3}"/>"#);
    }
    s.push_str("</g>\n");
    for layer in layers {
        let dash = layer
            .dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<g id="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}>"#,
            layer.id, layer.color
        );
        if !layer.poly.is_zero() {
            for line in trace_curve(&layer.poly, window, res) {
                let _ = writeln!(s, r#"<path d="{}"/>"#, path(&frame, &line));
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g id=\"points\" fill=\"#2ca02c\" stroke=\"#000000\">\n");
    for m in markers {
        let (u, v) = frame.map(*m);
        let _ = writeln!(s, r#"<circle cx="{u:.3}" cy="{v:.3}" r="4"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn render_system(sys: &ParabolicSystem, window: &Rect, res: u32, markers: &[(f64, f64)]) -> String {
    render_svg(&system_layers(sys), window, res, markers)
}
