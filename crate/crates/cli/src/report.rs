//! JSON and CSV renderings. Exact rationals are written as strings.

use serde_json::{json, Value};

use parabolica::construction::{GlueReport, Reproduction};
use parabolica::interval::{RatRange, Rect};
use parabolica::patchwork::Subdivision;
use parabolica::poly::{ParamPoly, Rational, SparsePoly};
use parabolica::solver::{Cluster, SolverConfig, TsppReport, UnresolvedKind};

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn range(r: &RatRange) -> Value {
    json!([r.lo.to_string(), r.hi.to_string()])
}

fn rect(r: &Rect) -> Value {
    json!({ "x": range(&r.x), "y": range(&r.y) })
}

fn kind(k: UnresolvedKind) -> &'static str {
    match k {
        UnresolvedKind::Exhausted => "exhausted",
        UnresolvedKind::BoxLimit => "box_limit",
        UnresolvedKind::Boundary => "boundary",
        UnresolvedKind::HessianUndecided => "hessian_undecided",
        UnresolvedKind::Ambiguous => "ambiguous",
    }
}

fn cluster(c: &Cluster) -> Value {
    json!({ "hull": rect(&c.hull), "boxes": c.boxes, "kind": kind(c.kind) })
}

pub fn analyze_json(f: &SparsePoly, search: &Rect, cfg: &SolverConfig, rep: &TsppReport) -> Value {
    let points: Vec<Value> = rep
        .points
        .iter()
        .map(|p| {
            json!({
                "enclosure": rect(&p.enclosure),
                "midpoint": [p.approx.0, p.approx.1],
                "flags": {
                    "hessian_smooth": p.hessian_smooth,
                    "transversal": p.transversal,
                    "off_axes": p.enclosure.off_axes(),
                },
                "residuals": { "h": p.residuals.h, "e1": p.residuals.e1, "e2": p.residuals.e2 },
            })
        })
        .collect();
    json!({
        "polynomial": f.to_string(),
        "search_box": rect(search),
        "config": {
            "min_width": cfg.min_width,
            "max_depth": cfg.max_depth,
            "residual_tol": cfg.residual_tol,
            "off_axes": cfg.off_axes,
            "axis_min_width": cfg.axis_min_width,
        },
        "tspp_count": rep.tspp_count(),
        "complete": rep.is_complete(),
        "points": points,
        "unresolved": rep.unresolved.iter().map(cluster).collect::<Vec<_>>(),
        "axis_residue": rep.axis_residue.iter().map(cluster).collect::<Vec<_>>(),
        "dropped_nonparabolic": rep.dropped_nonparabolic,
        "boxes": rep.boxes,
    })
}

pub fn analyze_csv(rep: &TsppReport) -> String {
    let mut s = String::from("x_lo,x_hi,y_lo,y_hi,x,y,hessian_smooth,transversal,res_h,res_e1,res_e2\n");
    for p in &rep.points {
        let e = &p.enclosure;
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:e},{:e},{:e}\n",
            e.x.lo, e.x.hi, e.y.lo, e.y.hi, p.approx.0, p.approx.1, p.hessian_smooth, p.transversal,
            p.residuals.h, p.residuals.e1, p.residuals.e2
        ));
    }
    s
}

pub fn patchwork_json(ft: &ParamPoly, sub: &Subdivision, ts: &[Rational]) -> Value {
    let specs: Vec<Value> = ts
        .iter()
        .map(|t| json!({ "t": t.to_string(), "polynomial": ft.specialize(t).to_string() }))
        .collect();
    json!({
        "f_t": ft.to_string(),
        "subdivision": serde_json::to_value(sub.to_json()).expect("serializable"),
        "specializations": specs,
    })
}

pub fn patchwork_csv(ft: &ParamPoly, ts: &[Rational]) -> String {
    let mut s = String::from("t,polynomial\n");
    for t in ts {
        s.push_str(&format!("{t},\"{}\"\n", ft.specialize(t)));
    }
    s
}

fn glue(r: &GlueReport) -> Value {
    json!({
        "t": r.t.to_string(),
        "glued": r.glued,
        "bound": r.bound,
        "sum_tiles": r.tile_sum,
        "holds": r.inequality_holds,
        "monotone": r.monotone_holds,
        "settled": r.settled,
        "chart_points": r.chart_points,
        "unresolved": r.unresolved,
        "points": r.points.iter().map(rect).collect::<Vec<_>>(),
    })
}

pub fn reproduce_json(rep: &Reproduction) -> Value {
    let c = &rep.construction;
    let tiles: Vec<Value> = c
        .tiles
        .iter()
        .zip(&c.tile_counts)
        .map(|(t, n)| {
            json!({
                "kind": t.kind.name(),
                "params": [t.anchor.0, t.anchor.1],
                "triangle": t.triangle.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
                "polynomial": t.polynomial.to_string(),
                "certified": n.certified,
                "expected": n.expected,
                "complete": n.complete,
            })
        })
        .collect();
    let opt = |t: Option<Rational>| t.map(|t| t.to_string());
    json!({
        "d": c.d,
        "bound": rep.bound,
        "lifting": c.lifting.iter().map(|(p, v)| [p.0, p.1, v]).collect::<Vec<_>>(),
        "subdivision": serde_json::to_value(c.subdivision.to_json()).expect("serializable"),
        "f_t": c.patchwork.to_string(),
        "tiles": tiles,
        "sum_tiles": c.tile_sum(),
        "reports": rep.reports.iter().map(glue).collect::<Vec<_>>(),
        "largest_t_holding": {
            "positive": opt(rep.largest_t_holding(true)),
            "negative": opt(rep.largest_t_holding(false)),
        },
    })
}
