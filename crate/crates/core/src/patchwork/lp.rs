//! Dense two-phase simplex method over exact rationals, with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

struct Tableau {
    /// `m` rows of `n` coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn n(&self) -> usize {
        self.rows[0].len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let k = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &k * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimise `cost . x` over columns `< allowed`; false if unbounded.
    fn optimise(&mut self, cost: &[Rational], allowed: usize) -> bool {
        let n = self.n();
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        r -= &cost[self.basis[i]] * &row[j];
                    }
                }
                r.is_negative()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[n] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, j);
        }
    }
}

/// Minimise `cost . x` subject to `a x = b`, `x >= 0`. Returns `None` when
/// infeasible or unbounded.
pub fn minimize(cost: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = cost.len();
    if m == 0 {
        return cost
            .iter()
            .all(|c| !c.is_negative())
            .then(|| vec![Rational::zero(); n]);
    }
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let s = |v: &Rational| if flip { -v.clone() } else { v.clone() };
        let mut r: Vec<Rational> = row.iter().map(s).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        r.push(s(rhs));
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
    };
    let mut phase1 = vec![Rational::zero(); n + m];
    for c in phase1.iter_mut().skip(n) {
        *c = Rational::one();
    }
    t.optimise(&phase1, n + m);
    let infeasibility: Rational = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| r[n + m].clone())
        .sum();
    if infeasibility.is_positive() {
        return None;
    }
    // Drive artificial variables out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut phase2 = cost.to_vec();
    phase2.extend((0..m).map(|_| Rational::zero()));
    if !t.optimise(&phase2, n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[n + m].clone();
        }
    }
    Some(x)
}

/// Minimise `sum x` subject to `a x >= 1`, `x >= 0`.
pub fn strictly_feasible(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    let m = a.len();
    let mut eq = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r = row.clone();
        r.extend((0..m).map(|k| if k == i { -Rational::one() } else { Rational::zero() }));
        eq.push(r);
    }
    let mut cost = vec![Rational::one(); n];
    cost.extend((0..m).map(|_| Rational::zero()));
    let b = vec![Rational::one(); m];
    minimize(&cost, &eq, &b).map(|x| x[..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn small_lp() {
        // min x + y  s.t.  x + 2y >= 1, 3x + y >= 1
        let a = vec![vec![int(1), int(2)], vec![int(3), int(1)]];
        let x = strictly_feasible(&a).unwrap();
        assert_eq!(x, vec![rat(1, 5), rat(2, 5)]);
    }

    #[test]
    fn infeasible_lp() {
        // x >= 1 and -x >= 1
        let a = vec![vec![int(1)], vec![int(-1)]];
        assert!(strictly_feasible(&a).is_none());
    }
}
