//! Powers of integer matrices that map a rational lattice into itself, and
//! the primes that obstruct them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qlinalg::{
    factorize, mat_mul_mod, order_mod, to_int_matrix, IntegerLattice, Matrix, Rational,
};
use crate::serial;
use crate::verdict::Verdict;

/// Witness that `P⁻¹AᵏP` is integral for the lattice with basis `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePowerCertificate {
    pub primes: Vec<BigInt>,
    /// Product of all entry denominators of `P` and `P⁻¹`.
    pub modulus: BigInt,
    /// Smallest `k ≥ 1` found by scanning.
    pub k: u64,
    /// `order_mod(A, m)`, the a priori bound on `k`.
    pub order_witness: BigInt,
    pub conjugated_power: Matrix,
}

impl LatticePowerCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "primes": self.primes.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "modulus": self.modulus.to_string(),
            "k": self.k,
            "order_witness": self.order_witness.to_string(),
            "conjugated_power": serial::matrix(&self.conjugated_power),
        })
    }
}

/// `m` = product of every entry denominator of `P` and `P⁻¹`, and its primes.
pub fn denominator_primes(p: &Matrix) -> Result<(Vec<BigInt>, BigInt)> {
    p.ensure_square()?;
    let inv = p.inverse()?;
    let m: BigInt = p
        .data()
        .iter()
        .chain(inv.data())
        .map(|x| x.denom().clone())
        .product();
    let primes = factorize(&m).into_iter().map(|(q, _)| q).collect();
    Ok((primes, m))
}

/// Smallest `k` with `Aᵏ(L) ⊆ L`, scanning up to `order_mod(A, m)`.
pub fn power_into_lattice(a: &Matrix, lattice: &IntegerLattice) -> Result<LatticePowerCertificate> {
    power_into_lattice_bounded(a, lattice, None)
}

/// As [`power_into_lattice`], but fails with `Precondition` if the minimal
/// power exceeds `bound`.
pub fn power_into_lattice_bounded(
    a: &Matrix,
    lattice: &IntegerLattice,
    bound: Option<u64>,
) -> Result<LatticePowerCertificate> {
    a.ensure_square()?;
    if a.rows() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: a.rows(),
        });
    }
    if !a.is_integral() {
        return Err(Error::NonInteger);
    }
    let det = a.det()?.to_integer();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let p = lattice.basis();
    let (primes, modulus) = denominator_primes(p)?;
    if let Some(bad) = primes.iter().find(|q| det.is_multiple_of(q)) {
        return Err(Error::ObstructionPrime(bad.to_string()));
    }
    let order_witness = order_mod(a, &modulus)?;
    let limit = order_witness
        .to_u64()
        .ok_or_else(|| Error::Invariant(format!("order {order_witness} too large to scan")))?;
    let p_inv = p.inverse()?;
    // With d clearing the denominators of P and P⁻¹, P⁻¹AᵏP is integral iff
    // (dP⁻¹)·Aᵏ·(dP) ≡ 0 mod d², so the scan only needs Aᵏ mod d².
    let d = p
        .data()
        .iter()
        .chain(p_inv.data())
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let d2 = &d * &d;
    let scale = Rational::from_integer(d.clone());
    let dp = to_int_matrix(&p.scale(&scale))?;
    let dp_inv = to_int_matrix(&p_inv.scale(&scale))?;
    let a_int = to_int_matrix(a)?;
    let mut power = to_int_matrix(&Matrix::identity(a.rows()))?;
    for k in 1..=limit {
        if let Some(b) = bound.filter(|&b| k > b) {
            return Err(Error::Precondition(format!(
                "no power k <= {b} maps the lattice into itself"
            )));
        }
        power = mat_mul_mod(&power, &a_int, &d2);
        let scaled = mat_mul_mod(&mat_mul_mod(&dp_inv, &power, &d2), &dp, &d2);
        if scaled.iter().flatten().all(Zero::is_zero) {
            let k32 =
                u32::try_from(k).map_err(|_| Error::Invariant(format!("power {k} too large")))?;
            return Ok(LatticePowerCertificate {
                primes,
                modulus,
                k,
                order_witness,
                conjugated_power: &(&p_inv * &a.pow(k32)) * p,
            });
        }
    }
    Err(Error::Invariant(format!(
        "A^{order_witness} does not map the lattice into itself"
    )))
}

/// For `k = 1..=bound`, whether `Aᵏv` is integral. Accepts iff the orbit
/// never lands in `ℤⁿ`.
pub fn orbit_escapes_lattice(a: &Matrix, v: &[Rational], bound: u64) -> Result<Verdict> {
    a.ensure_square()?;
    if v.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: v.len(),
        });
    }
    if bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let mut x = v.to_vec();
    let mut integral_at = Vec::new();
    for k in 1..=bound {
        x = a.mul_vec(&x);
        if x.iter().all(Rational::is_integer) {
            integral_at.push(k);
        }
    }
    let cert = json!({
        "bound": bound,
        "vector": serial::vector(v),
        "integral_at": integral_at,
    });
    Ok(match integral_at.first() {
        None => Verdict::accept(cert)
            .with_diagnostic(format!("A^k v is not integral for 1 <= k <= {bound}")),
        Some(k) => Verdict::reject(cert).with_diagnostic(format!("A^{k} v is integral")),
    })
}

/// Primes of the change of basis `P1⁻¹·P2` between two lattices.
pub fn obstruction_primes_pair(p1: &IntegerLattice, p2: &IntegerLattice) -> Result<Vec<BigInt>> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            got: p2.dim(),
        });
    }
    let change = &p1.basis().inverse()? * p2.basis();
    let (primes, _) = denominator_primes(&change)?;
    Ok(primes
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// `Aᵏ(L) ⊆ L` checked by lattice membership of every image basis vector.
pub fn maps_into(a: &Matrix, k: u32, lattice: &IntegerLattice) -> Result<bool> {
    lattice.contains_all(&(&a.pow(k) * lattice.basis()))
}
