//! Marching-squares tracing of a real plane curve `{p = 0}` over a window.
//!
//! Values `> 0` count as positive, everything else as nonpositive. Edge
//! crossings are placed by linear interpolation and ambiguous saddle cells
//! are resolved by the sign of the mean of the four corner values.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::interval::Rect;
use crate::poly::SparsePoly;

pub type Polyline = Vec<(f64, f64)>;

/// Grid edge: `(vertical, i, j)` is the edge leaving grid node `(i, j)` in
/// the `+x` direction, or `+y` when `vertical`.
type EdgeId = (bool, u32, u32);

struct Grid {
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    n: u32,
    v: Vec<f64>,
}

impl Grid {
    fn val(&self, i: u32, j: u32) -> f64 {
        self.v[(j * (self.n + 1) + i) as usize]
    }

    fn node(&self, i: u32, j: u32) -> (f64, f64) {
        (self.x0 + self.dx * i as f64, self.y0 + self.dy * j as f64)
    }

    fn crossing(&self, e: EdgeId) -> (f64, f64) {
        let (vert, i, j) = e;
        let (i2, j2) = if vert { (i, j + 1) } else { (i + 1, j) };
        let (a, b) = (self.val(i, j), self.val(i2, j2));
        let t = a / (a - b);
        let (p, q) = (self.node(i, j), self.node(i2, j2));
        (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1))
    }
}

fn horner_rows(p: &SparsePoly) -> Vec<Vec<f64>> {
    let (mi, mj) = p.max_exponents();
    let mut rows = vec![vec![0.0; mi as usize + 1]; mj as usize + 1];
    for (m, c) in p.terms() {
        rows[m.j as usize][m.i as usize] = c.to_f64().unwrap_or(f64::NAN);
    }
    rows
}

/// Floating evaluation by nested Horner in `x` then `y`.
pub fn eval_f64(rows: &[Vec<f64>], x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for row in rows.iter().rev() {
        let r = row.iter().rev().fold(0.0, |s, c| s * x + c);
        acc = acc * y + r;
    }
    acc
}

/// Polylines approximating `{p = 0}` on a `res x res` cell grid.
pub fn trace_curve(p: &SparsePoly, window: &Rect, res: u32) -> Vec<Polyline> {
    assert!(res > 0, "resolution must be positive");
    let rows = horner_rows(&p.normalized());
    let x0 = window.x.lo.to_f64().unwrap();
    let y0 = window.y.lo.to_f64().unwrap();
    let dx = (window.x.hi.to_f64().unwrap() - x0) / res as f64;
    let dy = (window.y.hi.to_f64().unwrap() - y0) / res as f64;
    let mut v = Vec::with_capacity(((res + 1) * (res + 1)) as usize);
    for j in 0..=res {
        for i in 0..=res {
            v.push(eval_f64(&rows, x0 + dx * i as f64, y0 + dy * j as f64));
        }
    }
    let g = Grid { x0, y0, dx, dy, n: res, v };

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..res {
        for i in 0..res {
            let pos = |a: u32, b: u32| g.val(a, b) > 0.0;
            let (s00, s10, s11, s01) = (pos(i, j), pos(i + 1, j), pos(i + 1, j + 1), pos(i, j + 1));
            let bottom = (false, i, j);
            let top = (false, i, j + 1);
            let left = (true, i, j);
            let right = (true, i + 1, j);
            let mut cut = Vec::with_capacity(4);
            if s00 != s10 {
                cut.push(bottom);
            }
            if s10 != s11 {
                cut.push(right);
            }
            if s01 != s11 {
                cut.push(top);
            }
            if s00 != s01 {
                cut.push(left);
            }
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    let mean = 0.25 * (g.val(i, j) + g.val(i + 1, j) + g.val(i + 1, j + 1) + g.val(i, j + 1));
                    if (mean > 0.0) == s00 {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((bottom, left));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }
    join(&g, &segments)
}

fn join(g: &Grid, segments: &[(EdgeId, EdgeId)]) -> Vec<Polyline> {
    let mut at: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        at.entry(*a).or_default().push(k);
        at.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let walk = |start_seg: usize, start_edge: EdgeId, used: &mut Vec<bool>| {
        let mut line = vec![g.crossing(start_edge)];
        let mut seg = start_seg;
        let mut from = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == from { b } else { a };
            line.push(g.crossing(next));
            let Some(&cand) = at[&next].iter().find(|&&s| !used[s]) else {
                break;
            };
            seg = cand;
            from = next;
        }
        line
    };
    // Open chains first, starting from their free ends.
    for (edge, segs) in &at {
        if segs.len() == 1 && !used[segs[0]] {
            out.push(walk(segs[0], *edge, &mut used));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            out.push(walk(k, segments[k].0, &mut used));
        }
    }
    out
}
