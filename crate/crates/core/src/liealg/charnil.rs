//! Characteristic nilpotency: is every derivation a nilpotent endomorphism?
//!
//! Acceptance is decided by expanding `Tr((Σ t_a D_a)^k)` over a basis
//! `D_1..D_d` of `Der(𝔫)` as a polynomial in `t` for `k = 1..n`; all
//! eigenvalues of every derivation vanish iff all these polynomials vanish.
//! Rejection always carries an explicit non-nilpotent derivation.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::LieAlgebra;
use crate::grading;
use crate::qlinalg::{rat, Matrix, Rational};
use crate::serial;
use crate::verdict::Verdict;

#[derive(Debug, Clone)]
pub struct CharNilOptions {
    /// Random rational combinations tried before the exact expansion. These
    /// can only produce rejection witnesses.
    pub random_trials: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub max_derivations: usize,
}

impl Default for CharNilOptions {
    fn default() -> Self {
        CharNilOptions {
            random_trials: 8,
            seed: 0x6e69_6c67,
            max_dim: 8,
            max_derivations: 16,
        }
    }
}

/// Homogeneous polynomial in the derivation coordinates `t_1..t_d`.
type MPoly = BTreeMap<Vec<u8>, Rational>;

fn add_into(acc: &mut MPoly, key: Vec<u8>, c: Rational) {
    use std::collections::btree_map::Entry;
    match acc.entry(key) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Multiplies `p` by the linear form `Σ coeffs[a] t_a`.
fn mul_linear(p: &MPoly, coeffs: &[(usize, Rational)], out: &mut MPoly) {
    for (mono, c) in p {
        for (a, l) in coeffs {
            let mut key = mono.clone();
            key[*a] += 1;
            add_into(out, key, c * l);
        }
    }
}

fn first_trace_power(w: &Matrix) -> Option<(usize, Rational)> {
    let n = w.rows();
    let mut p = Matrix::identity(n);
    for k in 1..=n {
        p = &p * w;
        let t = p.trace();
        if !t.is_zero() {
            return Some((k, t));
        }
    }
    None
}

fn reject_with(alg: &LieAlgebra, witness: Matrix, method: &str) -> Option<Verdict> {
    if witness.is_nilpotent() || !alg.is_derivation(&witness) {
        return None;
    }
    let (k, t) = first_trace_power(&witness)?;
    Some(
        Verdict::reject(json!({
            "witness": serial::matrix(&witness),
            "method": method,
            "trace_power": k,
            "trace": t.to_string(),
        }))
        .with_diagnostic(format!(
            "non-nilpotent derivation found ({method}): Tr(D^{k}) = {t}"
        )),
    )
}

fn combination(ders: &[Matrix], t: &[Rational]) -> Matrix {
    let n = ders[0].rows();
    ders.iter()
        .zip(t)
        .filter(|(_, c)| !c.is_zero())
        .fold(Matrix::zeros(n, n), |acc, (d, c)| &acc + &d.scale(c))
}

/// Evaluates the trace polynomials, returning the first nonzero one.
fn nonzero_trace_polynomial(ders: &[Matrix], n: usize) -> Option<(usize, MPoly)> {
    let d = ders.len();
    // generic[r][c] = Σ_a D_a[r][c] t_a
    let generic: Vec<Vec<Vec<(usize, Rational)>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    ders.iter()
                        .enumerate()
                        .filter(|(_, m)| !m[(r, c)].is_zero())
                        .map(|(a, m)| (a, m[(r, c)].clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    // power[r][c] of (generic)^k, starting from the identity
    let mut power: Vec<Vec<MPoly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut p = MPoly::new();
                    if r == c {
                        p.insert(vec![0; d], rat(1));
                    }
                    p
                })
                .collect()
        })
        .collect();
    for k in 1..=n {
        let mut next: Vec<Vec<MPoly>> = vec![vec![MPoly::new(); n]; n];
        for r in 0..n {
            for m in 0..n {
                if power[r][m].is_empty() {
                    continue;
                }
                for c in 0..n {
                    if generic[m][c].is_empty() {
                        continue;
                    }
                    mul_linear(&power[r][m], &generic[m][c], &mut next[r][c]);
                }
            }
        }
        power = next;
        let mut trace = MPoly::new();
        for (i, row) in power.iter().enumerate() {
            for (mono, c) in &row[i] {
                add_into(&mut trace, mono.clone(), c.clone());
            }
        }
        if !trace.is_empty() {
            return Some((k, trace));
        }
    }
    None
}

fn substitute(p: &MPoly, var: usize, value: i64) -> MPoly {
    let mut out = MPoly::new();
    let v = rat(value);
    for (mono, c) in p {
        let e = mono[var];
        let mut key = mono.clone();
        key[var] = 0;
        let f = (0..e).fold(c.clone(), |acc, _| acc * &v);
        add_into(&mut out, key, f);
    }
    out
}

/// Integer point in `{0..=deg}^d` where the nonzero polynomial `p` does not vanish.
fn nonvanishing_point(p: &MPoly, d: usize, deg: usize) -> Vec<Rational> {
    let mut cur = p.clone();
    let mut point = Vec::with_capacity(d);
    for a in 0..d {
        let v = (0..=deg as i64)
            .find(|&v| !substitute(&cur, a, v).is_empty())
            .expect("a nonzero polynomial of degree deg survives one of deg+1 values");
        cur = substitute(&cur, a, v);
        point.push(rat(v));
    }
    point
}

pub(super) fn check(alg: &LieAlgebra, opts: &CharNilOptions) -> Verdict {
    let n = alg.dim();
    if n == 0 {
        return Verdict::accept(json!({"derivation_dim": 0, "method": "trace-polynomial"}));
    }
    // cheap exact witnesses first
    let weight_candidates = [
        grading::find_positive_weights(alg),
        grading::find_nonneg_nontrivial_weights(alg),
    ];
    for w in weight_candidates.into_iter().flatten() {
        let diag = Matrix::diag(&w.weights().iter().map(|&x| rat(x)).collect::<Vec<_>>());
        if let Some(v) = reject_with(alg, diag, "weight-system") {
            return v;
        }
    }
    let ders = alg.derivations();
    for d in &ders {
        if let Some(v) = reject_with(alg, d.clone(), "derivation-basis") {
            return v;
        }
    }
    if ders.is_empty() {
        return Verdict::accept(json!({"derivation_dim": 0, "method": "trace-polynomial"}));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_trials {
        let t: Vec<Rational> = (0..ders.len())
            .map(|_| {
                Rational::new(
                    rng.gen_range(-7i64..=7).into(),
                    rng.gen_range(1i64..=5).into(),
                )
            })
            .collect();
        if let Some(v) = reject_with(alg, combination(&ders, &t), "random-combination") {
            return v;
        }
    }
    if n > opts.max_dim || ders.len() > opts.max_derivations {
        return Verdict::unknown(format!(
            "exact trace expansion capped at dim <= {} and Der dim <= {} (got {n}, {})",
            opts.max_dim,
            opts.max_derivations,
            ders.len()
        ));
    }
    match nonzero_trace_polynomial(&ders, n) {
        None => Verdict::accept(json!({
            "derivation_dim": ders.len(),
            "derivation_basis": ders.iter().map(serial::matrix).collect::<Vec<_>>(),
            "method": "trace-polynomial",
            "trace_powers_checked": n,
        }))
        .with_diagnostic("every derivation is nilpotent"),
        Some((k, poly)) => {
            let t = nonvanishing_point(&poly, ders.len(), k);
            let w = combination(&ders, &t);
            reject_with(alg, w, "trace-polynomial").unwrap_or_else(|| {
                Verdict::unknown("internal: trace polynomial witness failed to verify")
            })
        }
    }
}
