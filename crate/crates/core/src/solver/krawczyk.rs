//! Krawczyk operator for square systems of two polynomials, in `f64`
//! interval arithmetic and in exact rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{FBox, Interval, RatRange, Rect};
use crate::poly::{IPoly, Rational, SparsePoly};

/// A polynomial with its gradient, prepared for box evaluation.
#[derive(Clone, Debug)]
pub struct Func {
    pub exact: SparsePoly,
    pub p: IPoly,
    pub dx: IPoly,
    pub dy: IPoly,
}

impl Func {
    /// Normalised copy of `p`; zero sets are unchanged.
    pub fn new(p: &SparsePoly) -> Self {
        let exact = p.normalized();
        Func {
            p: IPoly::new(&exact),
            dx: IPoly::new(&exact.dx()),
            dy: IPoly::new(&exact.dy()),
            exact,
        }
    }

    /// Natural extension intersected with the mean-value form.
    pub fn range(&self, b: &FBox) -> Interval {
        let nat = self.p.eval(b);
        let (mx, my) = b.mid();
        let centered = self.p.eval_point(mx, my)
            + self.dx.eval(b) * (b.x - Interval::point(mx))
            + self.dy.eval(b) * (b.y - Interval::point(my));
        nat.intersect(&centered).unwrap_or(nat)
    }

    pub fn grad(&self, b: &FBox) -> [Interval; 2] {
        [self.dx.eval(b), self.dy.eval(b)]
    }

    pub fn approx(&self, x: f64, y: f64) -> (f64, f64, f64) {
        (self.p.approx(x, y), self.dx.approx(x, y), self.dy.approx(x, y))
    }
}

pub struct PairSystem {
    pub f: [Func; 2],
}

pub enum KResult {
    /// No zero in the box.
    Empty,
    /// Exactly one zero in the box, inside the returned enclosure.
    Inside(FBox),
    Inconclusive,
}

fn inverse(m: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let r = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    r.iter().flatten().all(|v| v.is_finite()).then_some(r)
}

impl PairSystem {
    pub fn new(a: &SparsePoly, b: &SparsePoly) -> Self {
        PairSystem {
            f: [Func::new(a), Func::new(b)],
        }
    }

    pub fn jacobian(&self, b: &FBox) -> [[Interval; 2]; 2] {
        [self.f[0].grad(b), self.f[1].grad(b)]
    }

    pub fn det_jacobian(&self, b: &FBox) -> Interval {
        let j = self.jacobian(b);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// The Krawczyk image `K(b)`; every zero in `b` lies in it.
    fn k_image(&self, b: &FBox) -> Option<FBox> {
        let (mx, my) = b.mid();
        let fm = [self.f[0].p.eval_point(mx, my), self.f[1].p.eval_point(mx, my)];
        let j = self.jacobian(b);
        let y = inverse([[j[0][0].mid(), j[0][1].mid()], [j[1][0].mid(), j[1][1].mid()]])?;
        let dev = [b.x - Interval::point(mx), b.y - Interval::point(my)];
        let m = [mx, my];
        let mut k = [Interval::point(0.0); 2];
        for r in 0..2 {
            let yr = [Interval::point(y[r][0]), Interval::point(y[r][1])];
            let mut acc = Interval::point(m[r]) - (yr[0] * fm[0] + yr[1] * fm[1]);
            for c in 0..2 {
                let delta = Interval::point(if r == c { 1.0 } else { 0.0 });
                acc = acc + (delta - (yr[0] * j[0][c] + yr[1] * j[1][c])) * dev[c];
            }
            if !acc.lo.is_finite() || !acc.hi.is_finite() {
                return None;
            }
            k[r] = acc;
        }
        Some(FBox::new(k[0], k[1]))
    }

    pub fn krawczyk(&self, b: &FBox) -> KResult {
        let Some(kb) = self.k_image(b) else {
            return KResult::Inconclusive;
        };
        if kb.intersect(b).is_none() {
            KResult::Empty
        } else if kb.strictly_inside(b) {
            KResult::Inside(kb)
        } else {
            KResult::Inconclusive
        }
    }

    /// Shrink an enclosure of a known unique zero by iterating `K ∩ X`.
    pub fn refine(&self, mut x: FBox, min_width: f64) -> FBox {
        let mut stalls = 0;
        for _ in 0..64 {
            if x.width() <= min_width {
                break;
            }
            let Some(next) = self.k_image(&x).and_then(|k| k.intersect(&x)) else {
                break;
            };
            let progress = next.width() <= 0.5 * x.width();
            x = next;
            if progress {
                stalls = 0;
            } else {
                stalls += 1;
                if stalls >= 2 {
                    break;
                }
            }
        }
        x
    }

    /// Floating Newton iteration from `(x, y)`; not rigorous.
    pub fn newton(&self, mut x: f64, mut y: f64, iters: usize) -> Option<(f64, f64)> {
        for _ in 0..iters {
            let (f0, a, b) = self.f[0].approx(x, y);
            let (f1, c, d) = self.f[1].approx(x, y);
            let inv = inverse([[a, b], [c, d]])?;
            let sx = inv[0][0] * f0 + inv[0][1] * f1;
            let sy = inv[1][0] * f0 + inv[1][1] * f1;
            x -= sx;
            y -= sy;
            if !x.is_finite() || !y.is_finite() {
                return None;
            }
            if sx.abs().max(sy.abs()) <= 1e-15 * (1.0 + x.abs().max(y.abs())) {
                break;
            }
        }
        Some((x, y))
    }

    /// Exact Krawczyk step over a rational box. Returns the contracted box
    /// and whether it lies strictly inside the input.
    pub fn krawczyk_exact(&self, b: &Rect) -> Option<(Rect, bool)> {
        let m = [b.x.mid(), b.y.mid()];
        let fm = [
            self.f[0].exact.eval(&m[0], &m[1]),
            self.f[1].exact.eval(&m[0], &m[1]),
        ];
        let grads: Vec<[RatRange; 2]> = self
            .f
            .iter()
            .map(|f| [eval_range(&f.exact.dx(), b), eval_range(&f.exact.dy(), b)])
            .collect();
        let jm = [
            [mid_f64(&grads[0][0]), mid_f64(&grads[0][1])],
            [mid_f64(&grads[1][0]), mid_f64(&grads[1][1])],
        ];
        let y = inverse(jm)?;
        let y: Vec<Vec<Rational>> = y
            .iter()
            .map(|row| row.iter().map(|v| Rational::from_float(*v).unwrap()).collect())
            .collect();
        let dev = [
            RatRange::new(&b.x.lo - &m[0], &b.x.hi - &m[0]),
            RatRange::new(&b.y.lo - &m[1], &b.y.hi - &m[1]),
        ];
        let mut k = Vec::with_capacity(2);
        for r in 0..2 {
            let base = &m[r] - (&y[r][0] * &fm[0] + &y[r][1] * &fm[1]);
            let mut acc = RatRange::point(base);
            for c in 0..2 {
                let delta = if r == c { Rational::one() } else { Rational::zero() };
                let yj = grads[0][c].scale(&y[r][0]).add(&grads[1][c].scale(&y[r][1]));
                let entry = RatRange::new(&delta - &yj.hi, &delta - &yj.lo);
                acc = acc.add(&entry.mul(&dev[c]));
            }
            k.push(acc);
        }
        let ky = k.pop().unwrap();
        let kx = k.pop().unwrap();
        let inside = kx.lo > b.x.lo && kx.hi < b.x.hi && ky.lo > b.y.lo && ky.hi < b.y.hi;
        let clip = |a: RatRange, o: &RatRange| {
            let lo = a.lo.max(o.lo.clone());
            let hi = a.hi.min(o.hi.clone());
            (lo <= hi).then(|| RatRange::new(lo, hi))
        };
        let x = clip(round_out(kx, b.x.width()), &b.x)?;
        let y = clip(round_out(ky, b.y.width()), &b.y)?;
        Some((Rect::new(x, y), inside))
    }
}

fn mid_f64(r: &RatRange) -> f64 {
    r.mid().to_f64().unwrap_or(0.0)
}

/// Round endpoints outward to a dyadic grid well below the current width,
/// so denominators stay bounded across iterations.
fn round_out(r: RatRange, width: Rational) -> RatRange {
    let w = width.to_f64().unwrap_or(0.0);
    let bits = if w > 0.0 { (-w.log2()).max(0.0) as i64 * 2 + 64 } else { 256 };
    let scale = num_traits::pow(BigInt::from(2), bits.min(4096) as usize);
    let floor = |v: &Rational| {
        let s = v * Rational::from_integer(scale.clone());
        Rational::new(s.floor().to_integer(), scale.clone())
    };
    let ceil = |v: &Rational| {
        let s = v * Rational::from_integer(scale.clone());
        Rational::new(s.ceil().to_integer(), scale.clone())
    };
    RatRange::new(floor(&r.lo), ceil(&r.hi))
}

/// Exact natural interval extension over a rational box.
pub fn eval_range(p: &SparsePoly, b: &Rect) -> RatRange {
    let (mi, mj) = p.max_exponents();
    let xp: Vec<RatRange> = (0..=mi).map(|k| b.x.powi(k)).collect();
    let yp: Vec<RatRange> = (0..=mj).map(|k| b.y.powi(k)).collect();
    p.terms().fold(RatRange::point(Rational::zero()), |acc, (m, c)| {
        acc.add(&xp[m.i as usize].mul(&yp[m.j as usize]).scale(c))
    })
}

/// Upper bound on `|p|` over the box.
pub fn abs_bound(p: &SparsePoly, b: &Rect) -> Rational {
    let r = eval_range(p, b);
    r.lo.abs().max(r.hi.abs())
}
