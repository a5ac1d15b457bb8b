use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Full-rank lattice in ℚⁿ spanned by the columns of a square invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    basis: Matrix,
}

impl IntegerLattice {
    pub fn new(basis: Matrix) -> Result<Self> {
        basis.ensure_square()?;
        if !basis.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(IntegerLattice { basis })
    }

    pub fn standard(n: usize) -> Self {
        IntegerLattice {
            basis: Matrix::identity(n),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Column-style Hermite normal form of the basis: lower triangular,
    /// positive diagonal, entries left of each pivot reduced into `[0, pivot)`.
    /// Independent of the chosen basis of the lattice.
    pub fn hnf(&self) -> Matrix {
        let den = common_denominator(&self.basis);
        let n = self.dim();
        let mut h: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (&self.basis[(i, j)] * int(&den)).to_integer())
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if h[i][j].is_zero() {
                    continue;
                }
                // columns i, j  <-  unimodular combination killing h[i][j]
                let a = h[i][i].clone();
                let b = h[i][j].clone();
                let e = a.extended_gcd(&b);
                let (x, y, g) = (e.x, e.y, e.gcd);
                let (ag, bg) = (&a / &g, &b / &g);
                for row in h.iter_mut() {
                    let ci = row[i].clone();
                    let cj = row[j].clone();
                    row[i] = &x * &ci + &y * &cj;
                    row[j] = &ag * &cj - &bg * &ci;
                }
            }
            if h[i][i].is_negative() {
                for row in h.iter_mut() {
                    row[i] = -&row[i];
                }
            }
            for j in 0..i {
                let q = h[i][j].div_floor(&h[i][i]);
                if q.is_zero() {
                    continue;
                }
                for row in h.iter_mut() {
                    let d = &q * &row[i];
                    row[j] -= d;
                }
            }
        }
        let dq = int(&den);
        let rows: Vec<Vec<Rational>> = h
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| Rational::from_integer(x) / &dq)
                    .collect()
            })
            .collect();
        Matrix::from_rows(&rows).expect("square")
    }

    pub fn contains_all(&self, vectors: &Matrix) -> Result<bool> {
        for v in vectors.columns() {
            if !hnf_membership(&v, self)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn common_denominator(m: &Matrix) -> BigInt {
    m.data()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Exact test of `v ∈ ℤ-span(L)` by forward substitution against the HNF.
pub fn hnf_membership(v: &[Rational], lattice: &IntegerLattice) -> Result<bool> {
    let n = lattice.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let h = lattice.hnf();
    let mut coords: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = v[i].clone();
        for (j, c) in coords.iter().enumerate() {
            r -= &h[(i, j)] * c;
        }
        let x = r / &h[(i, i)];
        if !x.is_integer() {
            return Ok(false);
        }
        coords.push(x);
    }
    Ok(true)
}

pub(crate) fn to_int_matrix(m: &Matrix) -> Result<Vec<Vec<BigInt>>> {
    if !m.is_integral() {
        return Err(Error::NonInteger);
    }
    Ok((0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_integer()).collect())
        .collect())
}

pub(crate) fn mat_mul_mod(a: &[Vec<BigInt>], b: &[Vec<BigInt>], m: &BigInt) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
        for x in out[i].iter_mut() {
            *x = x.mod_floor(m);
        }
    }
    out
}

fn is_identity_mod(a: &[Vec<BigInt>], m: &BigInt) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            let target = if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            (x - target).mod_floor(m).is_zero()
        })
    })
}

fn mat_pow_mod(a: &[Vec<BigInt>], mut e: BigInt, m: &BigInt) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut acc: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut base = a.to_vec();
    let two = BigInt::from(2);
    while e.is_positive() {
        if e.is_odd() {
            acc = mat_mul_mod(&acc, &base, m);
        }
        e /= &two;
        if e.is_positive() {
            base = mat_mul_mod(&base, &base, m);
        }
    }
    acc
}

/// Prime factorization by trial division.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// `|GL(n, ℤ/m)|`, the hard cap on the multiplicative order of a matrix mod `m`.
pub fn gl_order_bound(n: usize, m: &BigInt) -> BigInt {
    let mut total = BigInt::one();
    for (p, e) in factorize(m) {
        let pn = num_traits::pow(p.clone(), n);
        let mut f = num_traits::pow(p.clone(), (e as usize - 1) * n * n);
        for i in 0..n {
            f *= &pn - num_traits::pow(p.clone(), i);
        }
        total *= f;
    }
    total
}

/// Smallest `k ≥ 1` with `Mᵏ ≡ I (mod m)`.
///
/// Powers are taken prime by prime: the order modulo `p` is found by
/// iterative powering, then lifted to `pᵉ` by repeated `p`-th powers (the
/// kernel of reduction mod `p` is a `p`-group); the orders are combined by lcm.
pub fn order_mod(m_: &Matrix, modulus: &BigInt) -> Result<BigInt> {
    m_.ensure_square()?;
    let a = to_int_matrix(m_)?;
    if !modulus.is_positive() {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let det = m_.det()?.to_integer();
    if !det.gcd(modulus).is_one() {
        return Err(Error::NotInvertibleMod {
            det: det.to_string(),
            modulus: modulus.to_string(),
        });
    }
    let n = a.len();
    let mut order = BigInt::one();
    for (p, e) in factorize(modulus) {
        let cap = gl_order_bound(n, &p);
        let mut k = BigInt::one();
        let mut pw: Vec<Vec<BigInt>> = a
            .iter()
            .map(|r| r.iter().map(|x| x.mod_floor(&p)).collect())
            .collect();
        let base = pw.clone();
        while !is_identity_mod(&pw, &p) {
            pw = mat_mul_mod(&pw, &base, &p);
            k += 1;
            if k > cap {
                return Err(Error::Invariant(format!(
                    "order mod {p} exceeds |GL(n, Z_p)|"
                )));
            }
        }
        let pe = num_traits::pow(p.clone(), e as usize);
        let mut b = mat_pow_mod(&a, k.clone(), &pe);
        let mut lifted = 0;
        while !is_identity_mod(&b, &pe) {
            b = mat_pow_mod(&b, p.clone(), &pe);
            k *= &p;
            lifted += 1;
            if lifted > e {
                return Err(Error::Invariant(format!(
                    "order mod {pe} is not a p-power lift"
                )));
            }
        }
        order = order.lcm(&k);
    }
    Ok(order)
}
