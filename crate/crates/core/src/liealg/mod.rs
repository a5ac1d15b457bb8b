//! Rational Lie algebras given by structure constants on a fixed basis.

mod charnil;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qlinalg::{Matrix, Rational};
use crate::serial;
use crate::verdict::Verdict;

pub use charnil::CharNilOptions;

/// `(i, j, &[(k, c), ...])`, see [`LieAlgebra::from_table`].
pub type TableRow<'a> = (usize, usize, &'a [(usize, i64)]);

/// Lie algebra over ℚ with basis `X_1..X_n`.
///
/// Only brackets `[X_i, X_j]` with `i < j` are stored (0-indexed internally);
/// antisymmetry is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

/// `𝔫 → 𝔫/[𝔫,𝔫]` in coordinates: `projection` is `q × n`, `section` is the
/// `n × q` matrix of the chosen complement basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub quotient_dim: usize,
    pub projection: Matrix,
    pub section: Matrix,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    /// Builds an algebra from 0-indexed `(i, j, vector)` brackets with `i < j`.
    pub fn from_brackets(
        dim: usize,
        brackets: impl IntoIterator<Item = ((usize, usize), Vec<Rational>)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= j || j >= dim {
                return Err(Error::Parse(format!(
                    "bracket index pair ({}, {}) must satisfy 1 <= i < j <= {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if map.contains_key(&(i, j)) {
                return Err(Error::Parse(format!(
                    "duplicate bracket ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if v.iter().any(|c| !c.is_zero()) {
                map.insert((i, j), v);
            }
        }
        Ok(LieAlgebra { dim, brackets: map })
    }

    /// Shorthand for integer structure constants, 1-indexed:
    /// `(i, j, &[(k, c), ...])` means `[X_i, X_j] = Σ c·X_k`.
    pub fn from_table(dim: usize, table: &[TableRow<'_>]) -> Result<Self> {
        let entries = table.iter().map(|&(i, j, terms)| {
            let mut v = vec![Rational::zero(); dim];
            for &(k, c) in terms {
                v[k - 1] += crate::qlinalg::rat(c);
            }
            ((i - 1, j - 1), v)
        });
        Self::from_brackets(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[X_i, X_j]` as a coordinate vector (0-indexed).
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => vec![Rational::zero(); self.dim],
            Less => self
                .brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| vec![Rational::zero(); self.dim]),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|c| -c).collect())
                .unwrap_or_else(|| vec![Rational::zero(); self.dim]),
        }
    }

    /// Nonzero structure constants `(i, j, k, c)` with `i < j`, 0-indexed.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.brackets.iter().flat_map(|(&(i, j), v)| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(k, c)| (i, j, k, c))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.dim];
        for (&(i, j), v) in &self.brackets {
            let coef = &x[i] * &y[j] - &x[j] * &y[i];
            if coef.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(v) {
                *o += &coef * c;
            }
        }
        Ok(out)
    }

    fn br(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.bracket(x, y).expect("internal dimension mismatch")
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::from_integer(1.into());
        v
    }

    /// First basis triple `(i, j, k)` with nonzero Jacobi residual.
    pub fn jacobi_violation(&self) -> Option<((usize, usize, usize), Vec<Rational>)> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (xi, xj, xk) = (self.unit(i), self.unit(j), self.unit(k));
                    let a = self.br(&self.basis_bracket(i, j), &xk);
                    let b = self.br(&self.basis_bracket(j, k), &xi);
                    let c = self.br(&self.basis_bracket(k, i), &xj);
                    let r: Vec<Rational> = (0..n).map(|t| &a[t] + &b[t] + &c[t]).collect();
                    if r.iter().any(|x| !x.is_zero()) {
                        return Some(((i, j, k), r));
                    }
                }
            }
        }
        None
    }

    /// Span of all brackets between columns of `a` and columns of `b`.
    pub fn bracket_span(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut cols = Vec::new();
        for x in a.columns() {
            for y in b.columns() {
                let z = self.br(&x, &y);
                if z.iter().any(|c| !c.is_zero()) {
                    cols.push(z);
                }
            }
        }
        Matrix::from_columns(self.dim, &cols).column_space()
    }

    /// `γ_1 = 𝔫, γ_{i+1} = [𝔫, γ_i]` until the dimension stops dropping.
    /// The last entry is the stable term (zero iff the algebra is nilpotent).
    fn central_series_until_stable(&self) -> Vec<Matrix> {
        let whole = Matrix::identity(self.dim);
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            if last.cols() == 0 {
                return series;
            }
            let next = self.bracket_span(&whole, last);
            let stable = next.cols() == last.cols();
            series.push(next);
            if stable {
                return series;
            }
        }
    }

    /// Nonzero terms `γ_1 ⊋ γ_2 ⊋ ... ⊋ γ_c` of the lower central series.
    pub fn lower_central_series(&self) -> Result<Vec<Matrix>> {
        let mut s = self.central_series_until_stable();
        let last = s.pop().unwrap();
        if last.cols() != 0 {
            return Err(Error::Precondition(format!(
                "algebra is not nilpotent: lower central series stabilizes in dimension {}",
                last.cols()
            )));
        }
        Ok(s)
    }

    pub fn nilpotency_class(&self) -> Result<usize> {
        Ok(self.lower_central_series()?.len())
    }

    /// Checks Jacobi for all basis triples and nilpotency.
    pub fn validate(&self) -> Verdict {
        if let Some(((i, j, k), r)) = self.jacobi_violation() {
            return Verdict::reject(json!({
                "violation": "jacobi",
                "triple": [i + 1, j + 1, k + 1],
                "residual": serial::vector(&r),
            }))
            .with_diagnostic(format!(
                "Jacobi identity fails for (X{}, X{}, X{})",
                i + 1,
                j + 1,
                k + 1
            ));
        }
        let series = self.central_series_until_stable();
        let dims: Vec<usize> = series.iter().map(Matrix::cols).collect();
        let stable = *dims.last().unwrap();
        if stable != 0 {
            return Verdict::reject(json!({
                "violation": "not-nilpotent",
                "series_dims": dims,
            }))
            .with_diagnostic(format!(
                "lower central series stabilizes at dimension {stable}"
            ));
        }
        Verdict::accept(json!({
            "dim": self.dim,
            "class": dims.len() - 1,
            "series_dims": &dims[..dims.len() - 1],
        }))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_accept()
    }

    fn ensure_map(&self, m: &Matrix) -> Result<()> {
        m.ensure_square()?;
        if m.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.rows(),
            });
        }
        Ok(())
    }

    /// Basis of `Der(𝔫)`: solutions of `D[x,y] = [Dx,y] + [x,Dy]` on basis pairs.
    pub fn derivations(&self) -> Vec<Matrix> {
        let n = self.dim;
        let var = |r: usize, c: usize| r * n + c;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let cij = self.basis_bracket(i, j);
                for s in 0..n {
                    let mut row = vec![Rational::zero(); n * n];
                    for (k, c) in cij.iter().enumerate() {
                        if !c.is_zero() {
                            row[var(s, k)] += c;
                        }
                    }
                    for r in 0..n {
                        let crj = &self.basis_bracket(r, j)[s];
                        if !crj.is_zero() {
                            row[var(r, i)] -= crj;
                        }
                        let cir = &self.basis_bracket(i, r)[s];
                        if !cir.is_zero() {
                            row[var(r, j)] -= cir;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(n * n)
        } else {
            Matrix::from_rows(&rows).expect("rectangular").kernel()
        };
        kernel
            .columns()
            .into_iter()
            .map(|v| {
                let r: Vec<Vec<Rational>> = v.chunks(n).map(<[Rational]>::to_vec).collect();
                Matrix::from_rows(&r).expect("square")
            })
            .collect()
    }

    pub fn is_derivation(&self, d: &Matrix) -> bool {
        if self.ensure_map(d).is_err() {
            return false;
        }
        let n = self.dim;
        let cols = d.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = d.mul_vec(&self.basis_bracket(i, j));
                let a = self.br(&cols[i], &self.unit(j));
                let b = self.br(&self.unit(i), &cols[j]);
                if (0..n).any(|t| lhs[t] != &a[t] + &b[t]) {
                    return false;
                }
            }
        }
        true
    }

    /// First basis pair `(i, j)` with `M[X_i,X_j] ≠ [MX_i, MX_j]`.
    pub fn homomorphism_violation(&self, m: &Matrix) -> Option<(usize, usize)> {
        let n = self.dim;
        let cols = m.columns();
        for i in 0..n {
            for j in i + 1..n {
                if m.mul_vec(&self.basis_bracket(i, j)) != self.br(&cols[i], &cols[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        self.ensure_map(m).is_ok() && m.is_invertible() && self.homomorphism_violation(m).is_none()
    }

    /// `Ok(())` or a `NotAutomorphism` error naming the first failure.
    pub fn check_automorphism(&self, m: &Matrix) -> Result<()> {
        self.ensure_map(m)?;
        if !m.is_invertible() {
            return Err(Error::NotAutomorphism("map is singular".into()));
        }
        if let Some((i, j)) = self.homomorphism_violation(m) {
            return Err(Error::NotAutomorphism(format!(
                "M[X{a},X{b}] != [MX{a},MX{b}]",
                a = i + 1,
                b = j + 1
            )));
        }
        Ok(())
    }

    pub fn is_characteristically_nilpotent(&self) -> Verdict {
        self.is_characteristically_nilpotent_with(&CharNilOptions::default())
    }

    pub fn is_characteristically_nilpotent_with(&self, opts: &CharNilOptions) -> Verdict {
        charnil::check(self, opts)
    }

    pub fn abelianization(&self) -> Abelianization {
        let n = self.dim;
        let derived = self.bracket_span(&Matrix::identity(n), &Matrix::identity(n));
        // complement: greedily add standard basis vectors
        let mut complement: Vec<usize> = Vec::new();
        let mut span = derived.clone();
        for i in 0..n {
            let e = Matrix::from_columns(n, &[self.unit(i)]);
            if !span.span_contains(&e) {
                span = span.hstack(&e);
                complement.push(i);
            }
        }
        let q = complement.len();
        let section = Matrix::from_columns(
            n,
            &complement.iter().map(|&i| self.unit(i)).collect::<Vec<_>>(),
        );
        let full = section.hstack(&derived);
        let inv = full
            .inverse()
            .expect("complement plus derived algebra is a basis");
        let rows: Vec<Vec<Rational>> = (0..q).map(|i| inv.row(i).to_vec()).collect();
        let projection = if q == 0 {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(&rows).expect("rectangular")
        };
        Abelianization {
            quotient_dim: q,
            projection,
            section,
        }
    }

    /// `π(M)` on `𝔫/[𝔫,𝔫]`, satisfying `proj ∘ M = π(M) ∘ proj`.
    pub fn induced_map(&self, m: &Matrix) -> Result<Matrix> {
        self.check_automorphism(m)?;
        let ab = self.abelianization();
        if ab.quotient_dim == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let pi = &(&ab.projection * m) * &ab.section;
        if &ab.projection * m != &pi * &ab.projection {
            return Err(Error::Invariant(
                "automorphism does not preserve [n,n]".into(),
            ));
        }
        Ok(pi)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or invalid \"dim\"".into()))?
            as usize;
        let list = match v.get("brackets") {
            None | Some(Value::Null) => vec![],
            Some(Value::Array(a)) => a.clone(),
            Some(_) => return Err(Error::Parse("\"brackets\" must be an array".into())),
        };
        let mut entries = Vec::new();
        for b in &list {
            let idx = |key: &str| -> Result<usize> {
                let x = b
                    .get(key)
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse(format!("bracket missing index {key:?}")))?
                    as usize;
                if x == 0 || x > dim {
                    return Err(Error::Parse(format!(
                        "index {key}={x} out of range 1..={dim}"
                    )));
                }
                Ok(x - 1)
            };
            let (i, j) = (idx("i")?, idx("j")?);
            let mut vec = vec![Rational::zero(); dim];
            let terms = b
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("bracket missing \"terms\"".into()))?;
            for t in terms {
                let k = t
                    .get("k")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("term missing \"k\"".into()))?
                    as usize;
                if k == 0 || k > dim {
                    return Err(Error::Parse(format!(
                        "term index k={k} out of range 1..={dim}"
                    )));
                }
                let c = serial::parse_rational_value(
                    t.get("c")
                        .ok_or_else(|| Error::Parse("term missing \"c\"".into()))?,
                )?;
                vec[k - 1] += c;
            }
            entries.push(((i, j), vec));
        }
        Self::from_brackets(dim, entries)
    }

    pub fn to_json(&self) -> Value {
        let brackets: Vec<Value> = self
            .brackets
            .iter()
            .map(|(&(i, j), v)| {
                let terms: Vec<Value> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| json!({"k": k + 1, "c": c.to_string()}))
                    .collect();
                json!({"i": i + 1, "j": j + 1, "terms": terms})
            })
            .collect();
        json!({"dim": self.dim, "brackets": brackets})
    }
}
