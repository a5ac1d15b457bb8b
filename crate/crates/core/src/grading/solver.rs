//! Exact feasibility for homogeneous weight problems.
//!
//! Rational feasibility is decided by Fourier–Motzkin elimination on the
//! free coordinates of the equality constraints. The returned integer point
//! minimizes the largest weight and, among those, is lexicographically
//! smallest.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qlinalg::{rat, Matrix, Rational};

/// `a·y ≥ b`
type Constraint = (Vec<Rational>, Rational);

/// Weights `w ∈ ℤⁿ` subject to homogeneous equalities, per-variable lower
/// bounds and extra inequalities `a·w ≥ b`. All lower bounds and right-hand
/// sides must be non-negative, so feasible points stay feasible under scaling
/// by any integer `λ ≥ 1`.
#[derive(Debug, Clone, Default)]
pub struct WeightProblem {
    pub nvars: usize,
    pub equalities: Vec<Vec<Rational>>,
    pub lower: Vec<i64>,
    pub inequalities: Vec<Constraint>,
}

struct Parametrization {
    /// n × d, identity on the rows in `free`
    kernel: Matrix,
    free: Vec<usize>,
}

impl WeightProblem {
    pub fn new(nvars: usize) -> Self {
        WeightProblem {
            nvars,
            equalities: Vec::new(),
            lower: vec![0; nvars],
            inequalities: Vec::new(),
        }
    }

    fn parametrize(&self) -> Parametrization {
        let n = self.nvars;
        if self.equalities.is_empty() {
            return Parametrization {
                kernel: Matrix::identity(n),
                free: (0..n).collect(),
            };
        }
        let e = Matrix::from_rows(&self.equalities).expect("equalities have nvars columns");
        let (_, pivots) = e.rref();
        Parametrization {
            kernel: e.kernel(),
            free: (0..n).filter(|c| !pivots.contains(c)).collect(),
        }
    }

    fn constraints_in(&self, k: &Matrix) -> Vec<Constraint> {
        let d = k.cols();
        let mut out = Vec::new();
        for i in 0..self.nvars {
            out.push((k.row(i).to_vec(), rat(self.lower[i])));
        }
        for (a, b) in &self.inequalities {
            let row: Vec<Rational> = (0..d)
                .map(|c| (0..self.nvars).map(|i| &a[i] * &k[(i, c)]).sum())
                .collect();
            out.push((row, b.clone()));
        }
        out
    }

    /// Some rational feasible point, or `None` if the polyhedron is empty.
    pub fn rational_point(&self) -> Option<Vec<Rational>> {
        self.check_homogeneous();
        let p = self.parametrize();
        let y = fourier_motzkin(self.constraints_in(&p.kernel), p.kernel.cols())?;
        Some(p.kernel.mul_vec(&y))
    }

    fn check_homogeneous(&self) {
        assert!(
            self.lower.len() == self.nvars,
            "one lower bound per variable"
        );
        assert!(
            self.lower.iter().all(|&l| l >= 0)
                && self.inequalities.iter().all(|(_, b)| !b.is_negative()),
            "weight problems must be scale invariant"
        );
    }

    /// Integer point minimizing `max w_i`, then lexicographically smallest.
    pub fn canonical_integer_point(&self) -> Option<Vec<i64>> {
        let x = self.rational_point()?;
        let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = x
            .iter()
            .map(|v| (v * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let upper = scaled
            .iter()
            .max()
            .cloned()
            .unwrap_or_default()
            .to_i64()
            .expect("weights fit in i64");
        let p = self.parametrize();
        let start = self.lower.iter().copied().max().unwrap_or(0);
        for bound in start..=upper.max(start) {
            let mut search = Search {
                problem: self,
                param: &p,
                bound,
                assigned: Vec::new(),
                best: None,
            };
            search.run();
            if let Some(best) = search.best {
                return Some(best);
            }
        }
        unreachable!("the scaled rational point is feasible with max weight {upper}")
    }
}

struct Search<'a> {
    problem: &'a WeightProblem,
    param: &'a Parametrization,
    bound: i64,
    assigned: Vec<i64>,
    best: Option<Vec<i64>>,
}

impl Search<'_> {
    fn range(&self, f: usize) -> (i64, i64) {
        (self.problem.lower[self.param.free[f]], self.bound)
    }

    /// Bounds of `Σ_f coef_f y_f` given the current partial assignment.
    fn interval(&self, coef: &[Rational]) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (f, c) in coef.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(&v) = self.assigned.get(f) {
                let t = c * rat(v);
                lo += &t;
                hi += t;
            } else {
                let (a, b) = self.range(f);
                let (x, y) = (c * rat(a), c * rat(b));
                if x <= y {
                    lo += x;
                    hi += y;
                } else {
                    lo += y;
                    hi += x;
                }
            }
        }
        (lo, hi)
    }

    fn prune(&self) -> bool {
        let k = &self.param.kernel;
        for i in 0..self.problem.nvars {
            let (lo, hi) = self.interval(k.row(i));
            if hi < rat(self.problem.lower[i]) || lo > rat(self.bound) {
                return true;
            }
        }
        for (a, b) in &self.problem.inequalities {
            let coef: Vec<Rational> = (0..k.cols())
                .map(|c| (0..self.problem.nvars).map(|i| &a[i] * &k[(i, c)]).sum())
                .collect();
            if self.interval(&coef).1 < *b {
                return true;
            }
        }
        false
    }

    fn run(&mut self) {
        if self.prune() {
            return;
        }
        let d = self.param.kernel.cols();
        if self.assigned.len() == d {
            self.accept_leaf();
            return;
        }
        let (lo, hi) = self.range(self.assigned.len());
        for v in lo..=hi {
            self.assigned.push(v);
            self.run();
            self.assigned.pop();
        }
    }

    fn accept_leaf(&mut self) {
        let y: Vec<Rational> = self.assigned.iter().map(|&v| rat(v)).collect();
        let w = self.param.kernel.mul_vec(&y);
        if !w.iter().all(Rational::is_integer) {
            return;
        }
        let w: Vec<i64> = w.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
        let ok_bounds = w
            .iter()
            .zip(&self.problem.lower)
            .all(|(&x, &l)| x >= l && x <= self.bound);
        let ok_ineq = self.problem.inequalities.iter().all(|(a, b)| {
            let s: Rational = a.iter().zip(&w).map(|(c, &x)| c * rat(x)).sum();
            s >= *b
        });
        if ok_bounds && ok_ineq && self.best.as_ref().is_none_or(|b| w < *b) {
            self.best = Some(w);
        }
    }
}

fn normalize((a, b): Constraint) -> Option<Constraint> {
    match a.iter().find(|c| !c.is_zero()) {
        None => Some((a, b)),
        Some(lead) => {
            let s = lead.abs();
            Some((a.iter().map(|c| c / &s).collect(), b / s))
        }
    }
}

/// Fourier–Motzkin elimination; returns a point satisfying every `a·y ≥ b`.
pub fn fourier_motzkin(constraints: Vec<Constraint>, d: usize) -> Option<Vec<Rational>> {
    // stages[v] holds the constraints involving only y_0..y_{v-1}
    let mut stages: Vec<Vec<Constraint>> = vec![Vec::new(); d + 1];
    stages[d] = dedup(constraints)?;
    for v in (0..d).rev() {
        let cur = &stages[v + 1];
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cur {
            if c.0[v].is_positive() {
                pos.push(c.clone());
            } else if c.0[v].is_negative() {
                neg.push(c.clone());
            } else {
                rest.push(c.clone());
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let (sp, sn) = (pa[v].clone(), -na[v].clone());
                let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x * &sn + y * &sp).collect();
                let b = pb * &sn + nb * &sp;
                rest.push((a, b));
            }
        }
        stages[v] = dedup(rest)?;
    }
    let mut y: Vec<Rational> = Vec::with_capacity(d);
    for v in 0..d {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b) in &stages[v + 1] {
            let c = &a[v];
            if c.is_zero() {
                continue;
            }
            let known: Rational = a[..v].iter().zip(&y).map(|(x, t)| x * t).sum();
            let bound = (b - known) / c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        let value = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
        y.push(value);
    }
    Some(y)
}

/// Normalizes and dedups; `None` when a constant constraint `0 ≥ b > 0` appears.
fn dedup(cs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in cs {
        let (a, b) = normalize(c)?;
        if a.iter().all(Zero::is_zero) {
            if b.is_positive() {
                return None;
            }
            continue;
        }
        if seen.insert((a.clone(), b.clone())) {
            out.push((a, b));
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn fm_detects_infeasible_box() {
        // y >= 2 and -y >= -1
        let cs = vec![(row(&[1]), rat(2)), (row(&[-1]), rat(-1))];
        assert!(fourier_motzkin(cs, 1).is_none());
    }

    #[test]
    fn fm_point_satisfies_constraints() {
        // x + y >= 3, x - y >= -1, y >= 0, -x >= -5
        let cs = vec![
            (row(&[1, 1]), rat(3)),
            (row(&[1, -1]), rat(-1)),
            (row(&[0, 1]), rat(0)),
            (row(&[-1, 0]), rat(-5)),
        ];
        let y = fourier_motzkin(cs.clone(), 2).unwrap();
        for (a, b) in cs {
            let s: Rational = a.iter().zip(&y).map(|(p, q)| p * q).sum();
            assert!(s >= b);
        }
    }

    #[test]
    fn canonical_point_heisenberg() {
        // w3 = w1 + w2, all >= 1
        let mut p = WeightProblem::new(3);
        p.equalities.push(row(&[1, 1, -1]));
        p.lower = vec![1, 1, 1];
        assert_eq!(p.canonical_integer_point(), Some(vec![1, 1, 2]));
    }

    #[test]
    fn canonical_point_with_strict_order() {
        // w1 < w2 < w3, w3 = w1 + w2, all >= 1  ->  (1, 2, 3)
        let mut p = WeightProblem::new(3);
        p.equalities.push(row(&[1, 1, -1]));
        p.lower = vec![1, 1, 1];
        p.inequalities.push((row(&[-1, 1, 0]), rat(1)));
        p.inequalities.push((row(&[0, -1, 1]), rat(1)));
        assert_eq!(p.canonical_integer_point(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn infeasible_positive() {
        // w1 + w2 = w2 forces w1 = 0
        let mut p = WeightProblem::new(2);
        p.equalities.push(row(&[1, 0]));
        p.lower = vec![1, 1];
        assert_eq!(p.canonical_integer_point(), None);
    }
}
