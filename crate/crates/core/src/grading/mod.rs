//! Gradings `𝔫 = ⊕ 𝔫_i` with `[𝔫_i, 𝔫_j] ⊆ 𝔫_{i+j}`: verification,
//! classification, basis-aligned search and the scaling maps `φ_p`.

pub mod solver;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::qlinalg::{rat, Matrix, Rational};
use crate::serial;
use crate::verdict::Verdict;
use solver::WeightProblem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingComponent {
    pub weight: i64,
    /// Column basis of `𝔫_weight`.
    pub basis: Matrix,
}

/// List of `(weight, subspace)` pairs. Only [`verify_grading`] establishes
/// that the list really is a grading of a given algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    components: Vec<GradingComponent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradingClass {
    Positive,
    NonnegativeNontrivial,
    Trivial,
    Other,
}

impl GradingClass {
    pub fn label(self) -> &'static str {
        match self {
            GradingClass::Positive => "positive",
            GradingClass::NonnegativeNontrivial => "nonnegative-nontrivial",
            GradingClass::Trivial => "trivial",
            GradingClass::Other => "other",
        }
    }
}

/// One integer weight per basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem(Vec<i64>);

impl WeightSystem {
    pub fn new(weights: Vec<i64>) -> Self {
        WeightSystem(weights)
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// First structure constant `c[i][j][k] ≠ 0` with `w_i + w_j ≠ w_k` (1-indexed).
    pub fn violation(&self, alg: &LieAlgebra) -> Option<(usize, usize, usize)> {
        if self.0.len() != alg.dim() {
            return Some((0, 0, 0));
        }
        alg.structure_constants()
            .find(|&(i, j, k, _)| self.0[i] + self.0[j] != self.0[k])
            .map(|(i, j, k, _)| (i + 1, j + 1, k + 1))
    }

    pub fn check(&self, alg: &LieAlgebra) -> Result<()> {
        if self.0.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                got: self.0.len(),
            });
        }
        match self.violation(alg) {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::WeightConstraint(format!(
                "[X{i},X{j}] has a component on X{k} but w{i} + w{j} != w{k}"
            ))),
        }
    }

    pub fn to_json(&self) -> Value {
        serial::weights(&self.0)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"weights\": [...]}".into()))?;
        arr.iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::Parse(format!("weight {x} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeightSystem)
    }
}

impl Grading {
    pub fn new(components: Vec<GradingComponent>) -> Self {
        Grading { components }
    }

    pub fn components(&self) -> &[GradingComponent] {
        &self.components
    }

    pub fn weights(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.weight).collect()
    }

    /// All component bases side by side.
    pub fn basis_matrix(&self) -> Option<Matrix> {
        let first = self.components.first()?;
        let mut m = first.basis.clone();
        for c in &self.components[1..] {
            if c.basis.rows() != m.rows() {
                return None;
            }
            m = m.hstack(&c.basis);
        }
        Some(m)
    }

    /// Weight of each basis vector `X_i`, if every `X_i` is homogeneous.
    pub fn basis_weights(&self) -> Option<Vec<i64>> {
        let n = self.components.first()?.basis.rows();
        (0..n)
            .map(|i| {
                let mut e = vec![Rational::zero(); n];
                e[i] = rat(1);
                let e = Matrix::from_columns(n, &[e]);
                self.components
                    .iter()
                    .find(|c| c.basis.span_contains(&e))
                    .map(|c| c.weight)
            })
            .collect()
    }

    pub fn component(&self, weight: i64) -> Option<&GradingComponent> {
        self.components.iter().find(|c| c.weight == weight)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "components": self.components.iter().map(|c| json!({
                "weight": c.weight,
                "basis": serial::column_list(&c.basis),
            })).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"components\": [...]}".into()))?;
        let mut out = Vec::with_capacity(comps.len());
        for c in comps {
            let weight = c
                .get("weight")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("component missing integer \"weight\"".into()))?;
            let basis = serial::parse_column_list(
                c.get("basis")
                    .ok_or_else(|| Error::Parse("component missing \"basis\"".into()))?,
                n,
            )?;
            out.push(GradingComponent { weight, basis });
        }
        Ok(Grading::new(out))
    }
}

fn structural_problem(alg: &LieAlgebra, g: &Grading) -> Option<String> {
    let n = alg.dim();
    if g.components.is_empty() {
        return (n != 0).then(|| "no components".to_string());
    }
    for w in g.components.windows(2) {
        if w[0].weight >= w[1].weight {
            return Some(format!(
                "weights must be strictly increasing ({} then {})",
                w[0].weight, w[1].weight
            ));
        }
    }
    for c in &g.components {
        if c.basis.rows() != n {
            return Some(format!(
                "component {} lives in dimension {}",
                c.weight,
                c.basis.rows()
            ));
        }
        if c.basis.cols() == 0 || c.basis.rank() != c.basis.cols() {
            return Some(format!(
                "component {} basis is empty or dependent",
                c.weight
            ));
        }
    }
    let all = g.basis_matrix()?;
    if !all.is_square() || !all.is_invertible() {
        return Some("components do not form a direct sum equal to the algebra".into());
    }
    None
}

/// Accepts iff the components form a direct sum of `𝔫` and every bracket is
/// homogeneous; rejection names the weight pair and the offending bracket.
pub fn verify_grading(alg: &LieAlgebra, g: &Grading) -> Verdict {
    if let Some(msg) = structural_problem(alg, g) {
        return Verdict::reject(json!({"violation": "direct-sum", "detail": msg.clone()}))
            .with_diagnostic(msg);
    }
    let comps = &g.components;
    for (a, ca) in comps.iter().enumerate() {
        for cb in &comps[a..] {
            let target_w = ca.weight + cb.weight;
            let target = g.component(target_w);
            for x in ca.basis.columns() {
                for y in cb.basis.columns() {
                    let z = alg.bracket(&x, &y).expect("dimensions checked");
                    if z.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let zm = Matrix::from_columns(alg.dim(), std::slice::from_ref(&z));
                    if target.is_none_or(|t| !t.basis.span_contains(&zm)) {
                        return Verdict::reject(json!({
                            "violation": "homogeneity",
                            "pair": [ca.weight, cb.weight],
                            "bracket": serial::vector(&z),
                            "target_weight": target_w,
                        }))
                        .with_diagnostic(format!(
                            "bracket of weights ({}, {}) leaves component {}{}",
                            ca.weight,
                            cb.weight,
                            target_w,
                            if target.is_none() { " (empty)" } else { "" }
                        ));
                    }
                }
            }
        }
    }
    Verdict::accept(json!({
        "grading": g.to_json(),
        "class": classify_unchecked(g).label(),
    }))
}

fn classify_unchecked(g: &Grading) -> GradingClass {
    let ws = g.weights();
    if ws.iter().any(|&w| w < 0) {
        GradingClass::Other
    } else if ws.iter().all(|&w| w >= 1) {
        GradingClass::Positive
    } else if ws == [0] {
        GradingClass::Trivial
    } else {
        GradingClass::NonnegativeNontrivial
    }
}

pub fn classify(alg: &LieAlgebra, g: &Grading) -> Result<GradingClass> {
    ensure_verified(alg, g)?;
    Ok(classify_unchecked(g))
}

fn ensure_verified(alg: &LieAlgebra, g: &Grading) -> Result<()> {
    let v = verify_grading(alg, g);
    if v.is_accept() {
        Ok(())
    } else {
        Err(Error::InvalidGrading(v.diagnostics.join("; ")))
    }
}

/// Rows `e_i + e_j - e_k`, one per nonzero structure constant.
pub fn weight_constraint_rows(alg: &LieAlgebra) -> Vec<Vec<Rational>> {
    let n = alg.dim();
    let mut rows: Vec<Vec<Rational>> = alg
        .structure_constants()
        .map(|(i, j, k, _)| {
            let mut r = vec![Rational::zero(); n];
            r[i] += rat(1);
            r[j] += rat(1);
            r[k] -= rat(1);
            r
        })
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// Basis (columns) of all rational weight vectors compatible with the brackets.
pub fn weight_solution_space(alg: &LieAlgebra) -> Matrix {
    let rows = weight_constraint_rows(alg);
    if rows.is_empty() {
        return Matrix::identity(alg.dim());
    }
    Matrix::from_rows(&rows).expect("rectangular").kernel()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Positive,
    NonnegNontrivial,
}

/// Canonical basis-aligned weight system, with optional extra linear
/// equalities on the weights.
pub fn search_weights(
    alg: &LieAlgebra,
    extra_equalities: &[Vec<Rational>],
    mode: WeightMode,
) -> Option<WeightSystem> {
    let n = alg.dim();
    if n == 0 {
        return None;
    }
    let mut p = WeightProblem::new(n);
    p.equalities = weight_constraint_rows(alg);
    p.equalities.extend(extra_equalities.iter().cloned());
    match mode {
        WeightMode::Positive => p.lower = vec![1; n],
        WeightMode::NonnegNontrivial => {
            p.lower = vec![0; n];
            p.inequalities.push((vec![rat(1); n], rat(1)));
        }
    }
    p.canonical_integer_point().map(WeightSystem)
}

pub fn find_positive_weights(alg: &LieAlgebra) -> Option<WeightSystem> {
    search_weights(alg, &[], WeightMode::Positive)
}

pub fn find_nonneg_nontrivial_weights(alg: &LieAlgebra) -> Option<WeightSystem> {
    search_weights(alg, &[], WeightMode::NonnegNontrivial)
}

/// Groups basis vectors of equal weight into components.
pub fn grading_from_weights(alg: &LieAlgebra, w: &WeightSystem) -> Result<Grading> {
    w.check(alg)?;
    let n = alg.dim();
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &x) in w.weights().iter().enumerate() {
        groups.entry(x).or_default().push(i);
    }
    let components = groups
        .into_iter()
        .map(|(weight, idx)| {
            let cols: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| {
                    let mut e = vec![Rational::zero(); n];
                    e[i] = rat(1);
                    e
                })
                .collect();
            GradingComponent {
                weight,
                basis: Matrix::from_columns(n, &cols),
            }
        })
        .collect();
    Ok(Grading::new(components))
}

/// The automorphism acting as `p^i` on `𝔫_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingMap {
    pub map: Matrix,
    pub prime: u64,
    /// `det = prime^det_exponent`, with `det_exponent = Σ i·dim 𝔫_i`.
    pub det_exponent: i64,
}

impl ScalingMap {
    pub fn det(&self) -> Rational {
        pow_rational(self.prime, self.det_exponent)
    }
}

fn pow_rational(p: u64, e: i64) -> Rational {
    let base = Rational::from_integer(p.into());
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub fn phi_p(alg: &LieAlgebra, g: &Grading, p: u64) -> Result<ScalingMap> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    ensure_verified(alg, g)?;
    let b = g.basis_matrix().expect("verified grading has components");
    let scales: Vec<Rational> = g
        .components
        .iter()
        .flat_map(|c| std::iter::repeat_n(pow_rational(p, c.weight), c.basis.cols()))
        .collect();
    let map = &(&b * &Matrix::diag(&scales)) * &b.inverse()?;
    let det_exponent = g
        .components
        .iter()
        .map(|c| c.weight * c.basis.cols() as i64)
        .sum();
    Ok(ScalingMap {
        map,
        prime: p,
        det_exponent,
    })
}

/// True iff `psi` maps every component onto itself.
pub fn preserved_by(g: &Grading, psi: &Matrix) -> Result<bool> {
    psi.ensure_square()?;
    if !psi.is_invertible() {
        return Err(Error::Singular);
    }
    for c in &g.components {
        if c.basis.rows() != psi.rows() {
            return Err(Error::DimensionMismatch {
                expected: psi.rows(),
                got: c.basis.rows(),
            });
        }
        if !c.basis.span_contains(&(psi * &c.basis)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
