//! Spectral criteria for automorphisms and the extraction of gradings from
//! expanding maps and self-covers.
//!
//! Nothing here leaves ℚ. Root moduli are compared with the unit circle by a
//! Schur–Cohn recursion, and the field norm of an eigenvalue is replaced by
//! `|p_i(0)|^{M̂/n_i}`, which differs from the true norm only by a positive
//! power shared by every eigenvalue of the map.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grading::solver::WeightProblem;
use crate::grading::{self, Grading, GradingClass, GradingComponent};
use crate::liealg::LieAlgebra;
use crate::qlinalg::{
    charpoly, minpoly, primary_decomposition, rat, squarefree_part, Matrix, Poly, Rational,
};
use crate::serial;

/// True iff every root of `p` lies strictly inside the unit disk.
///
/// With `f = Σ a_k z^k` of degree `n`, all roots are inside iff `|a_0| < |a_n|`
/// and `(a_n f - a_0 f*) / z` (degree `n - 1`) has the same property, where
/// `f*` is the reversed polynomial.
pub fn roots_inside_unit_disk(p: &Poly) -> Result<bool> {
    let mut f: Vec<Rational> = p.coeffs().to_vec();
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    while f.len() > 1 {
        let n = f.len() - 1;
        let (a0, an) = (f[0].clone(), f[n].clone());
        if a0.abs() >= an.abs() {
            return Ok(false);
        }
        f = (1..=n).map(|k| &an * &f[k] - &a0 * &f[n - k]).collect();
    }
    Ok(true)
}

/// Every eigenvalue has modulus `> 1`. Roots on the unit circle count as not
/// expanding.
pub fn is_expanding(m: &Matrix) -> Result<bool> {
    m.ensure_square()?;
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    let cp = charpoly(m)?;
    let reversed = Poly::new(cp.coeffs().iter().rev().cloned().collect());
    roots_inside_unit_disk(&reversed)
}

pub fn is_z_charpoly(m: &Matrix) -> Result<bool> {
    Ok(charpoly(m)?.has_integer_coeffs())
}

/// Characteristic polynomial in `ℤ[X]` and determinant `±1`.
pub fn is_integer_like(m: &Matrix) -> Result<bool> {
    let cp = charpoly(m)?;
    Ok(cp.has_integer_coeffs() && cp.coeff(0).abs().is_one())
}

/// Semisimple part of the Jordan–Chevalley decomposition over ℚ.
///
/// Newton iteration `S ← S - f(S)·f'(S)⁻¹` with `f` the squarefree part of the
/// minimal polynomial; convergence is quadratic in the nilpotent order, so
/// `⌈log₂ n⌉ + 1` steps suffice.
pub fn semisimple_part(m: &Matrix) -> Result<Matrix> {
    m.ensure_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(m.clone());
    }
    let f = squarefree_part(&minpoly(m)?)?;
    let df = f.derivative();
    let steps = usize::BITS - (n - 1).leading_zeros() + 1;
    let mut s = m.clone();
    for _ in 0..steps {
        let fs = f.eval_matrix(&s);
        if fs.is_zero() {
            return Ok(s);
        }
        let correction = &fs * &df.eval_matrix(&s).inverse()?;
        s = &s - &correction;
    }
    if f.eval_matrix(&s).is_zero() {
        Ok(s)
    } else {
        Err(Error::Invariant(
            "Newton iteration for the semisimple part did not converge".into(),
        ))
    }
}

pub fn is_semisimple(m: &Matrix) -> Result<bool> {
    let mp = minpoly(m)?;
    Ok(mp.gcd(&mp.derivative()).degree() == Some(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormEntry {
    pub factor: Poly,
    pub degree: usize,
    pub subspace: Matrix,
    pub value: Rational,
}

/// Primary components of a semisimple automorphism together with the norm
/// surrogate `|p_i(0)|^{M̂/n_i}` of their eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormProfile {
    /// `M̂`, the lcm of the factor degrees.
    pub lcm_degree: usize,
    /// Sorted by value, then by factor.
    pub entries: Vec<NormEntry>,
}

impl NormProfile {
    /// One value per dimension, ascending.
    pub fn values(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.clone(), e.subspace.cols()))
            .collect()
    }

    /// Distinct values with the sum of their subspaces.
    pub fn classes(&self) -> Vec<(Rational, Matrix)> {
        let mut map: BTreeMap<Rational, Matrix> = BTreeMap::new();
        for e in &self.entries {
            map.entry(e.value.clone())
                .and_modify(|b| *b = b.hstack(&e.subspace))
                .or_insert_with(|| e.subspace.clone());
        }
        map.into_iter().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lcm_degree": self.lcm_degree,
            "entries": self.entries.iter().map(|e| json!({
                "factor": serial::poly(&e.factor),
                "degree": e.degree,
                "basis": serial::column_list(&e.subspace),
                "value": serial::rational(&e.value),
            })).collect::<Vec<_>>(),
            "values": self.values().iter().map(serial::rational).collect::<Vec<_>>(),
        })
    }
}

pub fn norm_profile(alg: &LieAlgebra, m: &Matrix) -> Result<NormProfile> {
    alg.check_automorphism(m)?;
    if !is_semisimple(m)? {
        return Err(Error::NotSemisimple);
    }
    let comps = primary_decomposition(m)?;
    let lcm_degree = comps
        .iter()
        .map(|c| c.factor.degree().unwrap_or(1))
        .fold(1usize, |acc, d| acc.lcm(&d));
    let mut entries: Vec<NormEntry> = comps
        .into_iter()
        .map(|c| {
            let degree = c.factor.degree().unwrap_or(1);
            let base = c.factor.coeff(0).abs();
            NormEntry {
                value: num_traits::pow(base, lcm_degree / degree),
                factor: c.factor,
                degree,
                subspace: c.basis,
            }
        })
        .collect();
    entries.sort_by(|a, b| (&a.value, &a.factor).cmp(&(&b.value, &b.factor)));
    Ok(NormProfile {
        lcm_degree,
        entries,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Positive,
    NonnegNontrivial,
}

/// Grading by norm-value classes of the semisimple part of `m`.
///
/// Classes are weighted by integers that respect every bracket relation
/// between classes and the order of the values; value `1` gets weight `0`
/// in the self-cover case.
fn extract(alg: &LieAlgebra, m: &Matrix, target: Target) -> Result<Grading> {
    let s = semisimple_part(m)?;
    let profile = norm_profile(alg, &s)?;
    let classes = profile.classes();
    let index: BTreeMap<&Rational, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, (v, _))| (v, i))
        .collect();
    let c = classes.len();

    let mut problem = WeightProblem::new(c);
    let unit = |i: usize| -> Vec<Rational> {
        let mut r = vec![Rational::zero(); c];
        r[i] = rat(1);
        r
    };
    for a in 0..c {
        for b in a..c {
            let span = alg.bracket_span(&classes[a].1, &classes[b].1);
            if span.cols() == 0 {
                continue;
            }
            let product = &classes[a].0 * &classes[b].0;
            let Some(&t) = index.get(&product) else {
                return Err(Error::Invariant(format!(
                    "bracket of value classes {} and {} is nonzero but no class has value {product}",
                    classes[a].0, classes[b].0
                )));
            };
            if !classes[t].1.span_contains(&span) {
                return Err(Error::Invariant(format!(
                    "bracket of value classes {} and {} leaves class {product}",
                    classes[a].0, classes[b].0
                )));
            }
            let mut row = unit(t);
            row[a] -= rat(1);
            row[b] -= rat(1);
            problem.equalities.push(row);
        }
    }
    for i in 1..c {
        let mut row = unit(i);
        row[i - 1] = rat(-1);
        problem.inequalities.push((row, rat(1)));
    }
    match target {
        Target::Positive => problem.lower = vec![1; c],
        Target::NonnegNontrivial => {
            problem.lower = classes
                .iter()
                .map(|(v, _)| i64::from(!v.is_one()))
                .collect();
            if let Some(&one) = index.get(&Rational::one()) {
                problem.equalities.push(unit(one));
            }
        }
    }
    let weights = problem.canonical_integer_point().ok_or_else(|| {
        Error::Invariant("no integer re-weighting of the norm classes exists".into())
    })?;
    let mut components: Vec<GradingComponent> = classes
        .into_iter()
        .zip(weights)
        .map(|((_, basis), weight)| GradingComponent { weight, basis })
        .collect();
    components.sort_by_key(|c| c.weight);
    let g = Grading::new(components);
    let v = grading::verify_grading(alg, &g);
    if !v.is_accept() {
        return Err(Error::Invariant(format!(
            "extracted grading failed verification: {}",
            v.diagnostics.join("; ")
        )));
    }
    let expected = match target {
        Target::Positive => GradingClass::Positive,
        Target::NonnegNontrivial => GradingClass::NonnegativeNontrivial,
    };
    let class = grading::classify(alg, &g)?;
    if class != expected && !(target == Target::NonnegNontrivial && class == GradingClass::Positive)
    {
        return Err(Error::Invariant(format!(
            "extracted grading is {}",
            class.label()
        )));
    }
    Ok(g)
}

/// A positive grading preserved by the expanding automorphism `m`.
pub fn expanding_to_positive_grading(alg: &LieAlgebra, m: &Matrix) -> Result<Grading> {
    alg.check_automorphism(m)?;
    if !is_expanding(m)? {
        return Err(Error::Precondition("automorphism is not expanding".into()));
    }
    extract(alg, m, Target::Positive)
}

/// A non-negative non-trivial grading preserved by `m`, which must have an
/// integral characteristic polynomial and `|det| > 1`.
pub fn selfcover_to_nonneg_grading(alg: &LieAlgebra, m: &Matrix) -> Result<Grading> {
    alg.check_automorphism(m)?;
    if !is_z_charpoly(m)? {
        return Err(Error::Precondition(
            "characteristic polynomial is not in Z[X]".into(),
        ));
    }
    if m.det()?.abs() <= Rational::one() {
        return Err(Error::Precondition("|det| must exceed 1".into()));
    }
    extract(alg, m, Target::NonnegNontrivial)
}

/// Whether `psi`, which must commute with `m`, preserves `g`.
pub fn commuting_preservation_check(g: &Grading, m: &Matrix, psi: &Matrix) -> Result<bool> {
    if !psi.commutes_with(m) {
        return Err(Error::NotCommuting);
    }
    grading::preserved_by(g, psi)
}

/// `|det|` as `p^k` when it is a prime power.
pub fn prime_power(x: &Rational) -> Option<(BigInt, u32)> {
    if !x.is_integer() {
        return None;
    }
    let n = x.to_integer().abs();
    if n <= BigInt::one() {
        return None;
    }
    let f = crate::qlinalg::factorize(&n);
    (f.len() == 1).then(|| f[0].clone())
}
