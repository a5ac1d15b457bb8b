//! Finite holonomy groups acting on a Lie algebra, and the equivariant
//! versions of the grading and expanding-map criteria.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grading::{self, Grading, GradingClass, WeightMode, WeightSystem};
use crate::liealg::LieAlgebra;
use crate::qlinalg::{rat, Matrix, Rational};
use crate::serial;
use crate::specmaps;
use crate::verdict::Verdict;

pub const DEFAULT_CAP: usize = 1024;

/// Explicit finite matrix group, identity first, then breadth-first layers
/// each sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyGroup {
    elements: Vec<Matrix>,
}

impl HolonomyGroup {
    pub fn trivial(n: usize) -> Self {
        HolonomyGroup {
            elements: vec![Matrix::identity(n)],
        }
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    /// Every element must be an automorphism of `alg`.
    pub fn validate_for(&self, alg: &LieAlgebra) -> Result<()> {
        self.ensure_dim(alg.dim())?;
        for f in &self.elements {
            alg.check_automorphism(f)?;
        }
        Ok(())
    }

    fn ensure_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Parses `{"generators": [matrix, ...], "cap": N}` and closes the group.
    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("holonomy file needs \"generators\"".into()))?
            .iter()
            .map(serial::parse_matrix)
            .collect::<Result<Vec<_>>>()?;
        let cap = match v.get("cap") {
            None => DEFAULT_CAP,
            Some(c) => c
                .as_u64()
                .ok_or_else(|| Error::Parse("\"cap\" must be a positive integer".into()))?
                as usize,
        };
        for g in &gens {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.rows(),
                });
            }
        }
        if gens.is_empty() {
            return Ok(HolonomyGroup::trivial(n));
        }
        close_group(&gens, cap)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "elements": self.elements.iter().map(serial::matrix).collect::<Vec<_>>(),
        })
    }
}

/// Closure of `generators` under multiplication; fails once more than `cap`
/// elements have been found.
pub fn close_group(generators: &[Matrix], cap: usize) -> Result<HolonomyGroup> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Precondition("at least one generator is required".into()))?;
    let n = first.rows();
    for g in generators {
        g.ensure_square()?;
        if g.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.rows(),
            });
        }
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
    }
    let id = Matrix::identity(n);
    let mut seen: BTreeSet<Matrix> = BTreeSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut layer = vec![id];
    while !layer.is_empty() {
        let mut next: BTreeSet<Matrix> = BTreeSet::new();
        for x in &layer {
            for g in generators {
                let y = g * x;
                if !seen.contains(&y) {
                    next.insert(y);
                }
            }
        }
        if seen.len() + next.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        seen.extend(next.iter().cloned());
        layer = next.into_iter().collect();
        elements.extend(layer.iter().cloned());
    }
    Ok(HolonomyGroup { elements })
}

pub fn preserves_grading_all(f: &HolonomyGroup, g: &Grading) -> Result<bool> {
    if let Some(c) = g.components().first() {
        f.ensure_dim(c.basis.rows())?;
    }
    for x in f.elements() {
        if !grading::preserved_by(g, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First element of `f` not commuting with `m`.
pub fn first_noncommuting<'a>(m: &Matrix, f: &'a HolonomyGroup) -> Result<Option<&'a Matrix>> {
    m.ensure_square()?;
    f.ensure_dim(m.rows())?;
    Ok(f.elements().iter().find(|x| !x.commutes_with(m)))
}

pub fn commutes_with_all(m: &Matrix, f: &HolonomyGroup) -> Result<bool> {
    Ok(first_noncommuting(m, f)?.is_none())
}

/// A user-supplied witness for condition 2 (grading) or 3 (automorphism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Grading(Grading),
    Automorphism(Matrix),
}

impl Certificate {
    /// Accepts a grading (`{"components": ...}` or `{"grading": ...}`),
    /// `{"automorphism": matrix}`, a bare matrix, or a whole verdict whose
    /// `"certificate"` is one of these.
    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        if let Some(inner) = v.get("certificate") {
            return Certificate::from_json(inner, n);
        }
        let cert = if v.get("components").is_some() {
            Certificate::Grading(Grading::from_json(v, n)?)
        } else if let Some(g) = v.get("grading") {
            Certificate::Grading(Grading::from_json(g, n)?)
        } else if let Some(m) = v.get("automorphism") {
            Certificate::Automorphism(serial::parse_matrix(m)?)
        } else if v.is_array() {
            Certificate::Automorphism(serial::parse_matrix(v)?)
        } else {
            return Err(Error::Parse(
                "certificate must be a grading or {\"automorphism\": matrix}".into(),
            ));
        };
        if let Certificate::Automorphism(m) = &cert {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.rows(),
                });
            }
        }
        Ok(cert)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Grading(g) => g.to_json(),
            Certificate::Automorphism(m) => json!({"automorphism": serial::matrix(m)}),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Criterion {
    Expanding,
    Cover,
}

impl Criterion {
    fn prefix(self) -> &'static str {
        match self {
            Criterion::Expanding => "expinfra",
            Criterion::Cover => "covinfra",
        }
    }
}

fn check(
    alg: &LieAlgebra,
    f: &HolonomyGroup,
    cert: &Certificate,
    which: Criterion,
) -> Result<Verdict> {
    f.ensure_dim(alg.dim())?;
    let prefix = which.prefix();
    match cert {
        Certificate::Grading(g) => {
            let condition = format!("{prefix}-cond-2");
            let v = grading::verify_grading(alg, g);
            if !v.is_accept() {
                return Ok(v
                    .with_condition(condition)
                    .with_diagnostic("certificate is not a grading"));
            }
            let class = grading::classify(alg, g)?;
            let class_ok = match which {
                Criterion::Expanding => class == GradingClass::Positive,
                Criterion::Cover => {
                    matches!(
                        class,
                        GradingClass::Positive | GradingClass::NonnegativeNontrivial
                    )
                }
            };
            if !class_ok {
                return Ok(Verdict::reject(
                    json!({"grading": g.to_json(), "class": class.label()}),
                )
                .with_condition(condition)
                .with_diagnostic(format!("grading is {}", class.label())));
            }
            if let Some(x) = f
                .elements()
                .iter()
                .find(|x| !grading::preserved_by(g, x).unwrap_or(false))
            {
                return Ok(Verdict::reject(json!({
                    "grading": g.to_json(),
                    "element": serial::matrix(x),
                }))
                .with_condition(condition)
                .with_diagnostic("a holonomy element does not preserve the grading"));
            }
            Ok(Verdict::accept(json!({
                "grading": g.to_json(),
                "class": class.label(),
                "holonomy_order": f.order(),
            }))
            .with_condition(condition))
        }
        Certificate::Automorphism(m) => {
            let condition = format!("{prefix}-cond-3");
            let reject = |why: String, extra: Value| {
                Verdict::reject(json!({"automorphism": serial::matrix(m), "witness": extra}))
                    .with_condition(condition.clone())
                    .with_diagnostic(why)
            };
            if let Err(e) = alg.check_automorphism(m) {
                return Ok(reject(e.to_string(), Value::Null));
            }
            let mut facts = serde_json::Map::new();
            match which {
                Criterion::Expanding => {
                    if !specmaps::is_expanding(m)? {
                        return Ok(reject("automorphism is not expanding".into(), Value::Null));
                    }
                    facts.insert("expanding".into(), json!(true));
                }
                Criterion::Cover => {
                    if !specmaps::is_z_charpoly(m)? {
                        return Ok(reject(
                            "characteristic polynomial is not in Z[X]".into(),
                            Value::Null,
                        ));
                    }
                    let det = m.det()?;
                    if det.abs() <= Rational::one() {
                        return Ok(reject(
                            format!("|det| = {} is not > 1", det.abs()),
                            Value::Null,
                        ));
                    }
                    facts.insert("det".into(), serial::rational(&det));
                    if let Some((p, k)) = specmaps::prime_power(&det) {
                        facts.insert(
                            "det_prime_power".into(),
                            json!({"prime": p.to_string(), "exponent": k}),
                        );
                    }
                }
            }
            if let Some(x) = first_noncommuting(m, f)? {
                return Ok(reject(
                    "automorphism does not commute with a holonomy element".into(),
                    serial::matrix(x),
                ));
            }
            facts.insert("automorphism".into(), serial::matrix(m));
            facts.insert("holonomy_order".into(), json!(f.order()));
            Ok(Verdict::accept(Value::Object(facts)).with_condition(condition))
        }
    }
}

/// Replays a certificate for the expanding-map criterion of an infra-nilmanifold.
pub fn check_expinfra(alg: &LieAlgebra, f: &HolonomyGroup, cert: &Certificate) -> Result<Verdict> {
    check(alg, f, cert, Criterion::Expanding)
}

/// Replays a certificate for the self-cover (non-co-Hopfian) criterion.
pub fn check_covinfra(alg: &LieAlgebra, f: &HolonomyGroup, cert: &Certificate) -> Result<Verdict> {
    check(alg, f, cert, Criterion::Cover)
}

/// `σ` with `x(X_j) ∈ ℚ·X_{σ(j)}`, or `None` if `x` is not monomial.
fn monomial_permutation(x: &Matrix) -> Option<Vec<usize>> {
    (0..x.cols())
        .map(|j| {
            let nz: Vec<usize> = (0..x.rows()).filter(|&i| !x[(i, j)].is_zero()).collect();
            (nz.len() == 1).then(|| nz[0])
        })
        .collect()
}

/// Basis-aligned weight search with `w_j = w_{σ(j)}` for every element of `f`.
pub fn equivariant_weight_search(
    alg: &LieAlgebra,
    f: &HolonomyGroup,
    mode: WeightMode,
) -> Result<Option<WeightSystem>> {
    f.ensure_dim(alg.dim())?;
    let n = alg.dim();
    let mut extra: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for x in f.elements() {
        let sigma = monomial_permutation(x).ok_or_else(|| {
            Error::UnsupportedSearch("holonomy element is not monomial in the fixed basis".into())
        })?;
        for (j, &s) in sigma.iter().enumerate() {
            if s != j {
                let mut row = vec![Rational::zero(); n];
                row[j] = rat(1);
                row[s] = rat(-1);
                extra.insert(row);
            }
        }
    }
    let extra: Vec<Vec<Rational>> = extra.into_iter().collect();
    Ok(grading::search_weights(alg, &extra, mode))
}
