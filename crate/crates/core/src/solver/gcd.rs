//! Modular test for a common factor of two bivariate polynomials.
//!
//! Specialising one variable at a point where both leading coefficients
//! survive turns a common factor into a common factor of the univariate
//! images. Conversely, for coprime inputs only finitely many specialisations
//! produce a nontrivial gcd, so a single degree-0 gcd in each direction
//! proves coprimality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::poly::SparsePoly;

const P: u64 = (1 << 61) - 1;
const TRIALS: u64 = 8;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    n.mod_floor(&p).to_u64().expect("reduced below p")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of `gcd(a, b)` over `Z/p`; both inputs nonzero.
fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let q = mul(*a.last().unwrap(), lb);
            let shift = a.len() - b.len();
            for (k, &c) in b.iter().enumerate() {
                a[shift + k] = sub(a[shift + k], mul(q, c));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Integer image of `p` with denominators cleared, as `(i, j, c mod P)`.
fn integer_terms(p: &SparsePoly) -> Vec<(u32, u32, u64)> {
    let l = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    p.terms()
        .map(|(m, c)| {
            let n = c.numer() * (&l / c.denom());
            (m.i, m.j, reduce(&n))
        })
        .collect()
}

/// Univariate image in the kept variable after substituting `v0` for the
/// other, plus the expected degree; `None` if the leading coefficient dies.
fn specialise(terms: &[(u32, u32, u64)], keep_x: bool, v0: u64) -> Option<Vec<u64>> {
    let deg = terms
        .iter()
        .map(|&(i, j, _)| if keep_x { i } else { j })
        .max()
        .unwrap_or(0) as usize;
    let mut out = vec![0u64; deg + 1];
    for &(i, j, c) in terms {
        let (k, other) = if keep_x { (i, j) } else { (j, i) };
        out[k as usize] = add(out[k as usize], mul(c, pow(v0, other as u64)));
    }
    (out[deg] != 0).then_some(out)
}

fn trial_point(k: u64) -> u64 {
    // Fixed, well-spread evaluation points keep results reproducible.
    let mut z = k.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (z ^ (z >> 31)) % P
}

/// True when `a` and `b` share a non-constant factor. Zero inputs count as
/// sharing one.
pub fn share_common_factor(a: &SparsePoly, b: &SparsePoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    if a.is_constant() || b.is_constant() {
        return false;
    }
    let ta = integer_terms(a);
    let tb = integer_terms(b);
    for keep_x in [true, false] {
        let mut proved_coprime = false;
        let mut k = 0;
        let mut good_trials = 0;
        while good_trials < TRIALS && k < 64 * TRIALS {
            k += 1;
            let v0 = trial_point(k + if keep_x { 0 } else { 1 << 32 });
            let (Some(ua), Some(ub)) = (specialise(&ta, keep_x, v0), specialise(&tb, keep_x, v0))
            else {
                continue;
            };
            good_trials += 1;
            if ua.len() == 1 || ub.len() == 1 || gcd_degree(ua, ub) == 0 {
                proved_coprime = true;
                break;
            }
        }
        if !proved_coprime {
            return true;
        }
    }
    false
}
