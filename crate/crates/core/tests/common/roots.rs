//! Floating-point root oracle, independent of the exact library code: the
//! characteristic polynomial comes from cofactor determinants and
//! interpolation, the squarefree part from a local Euclidean gcd, and the
//! roots from Durand–Kerner iteration polished by Newton steps.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::det_cofactor;
use nilgrade::qlinalg::{rat, Matrix, Rational};

type P = Vec<Rational>;

fn trim(mut p: P) -> P {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn sub(a: &P, b: &P) -> P {
    let n = a.len().max(b.len());
    let z = rat(0);
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn mul(a: &P, b: &P) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![rat(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn divmod(a: &P, b: &P) -> (P, P) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut q = vec![rat(0); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        let mut term = vec![rat(0); shift];
        term.extend(b.iter().map(|x| x * &c));
        q[shift] = c;
        r = sub(&r, &term);
    }
    (trim(q), r)
}

fn gcd(a: &P, b: &P) -> P {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &P) -> P {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat(i as i64))
            .collect(),
    )
}

/// Coefficients (constant first) of `det(tI - m)`, by Newton interpolation
/// through the points `t = 0..=n`.
pub fn charpoly_by_interpolation(m: &Matrix) -> P {
    let n = m.rows();
    let ys: Vec<Rational> = (0..=n)
        .map(|t| {
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                rat(t as i64) - &m[(i, j)]
                            } else {
                                -m[(i, j)].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            det_cofactor(&rows)
        })
        .collect();
    // divided differences on nodes 0, 1, ..., n
    let mut dd = ys.clone();
    for k in 1..=n {
        for i in (k..=n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / rat(k as i64);
        }
    }
    let mut poly: P = Vec::new();
    let mut basis: P = vec![rat(1)];
    for (k, c) in dd.iter().enumerate() {
        let term: P = basis.iter().map(|b| b * c).collect();
        let len = poly.len().max(term.len());
        poly.resize(len, rat(0));
        for (i, x) in term.into_iter().enumerate() {
            poly[i] += x;
        }
        basis = mul(&basis, &vec![rat(-(k as i64)), rat(1)]);
    }
    trim(poly)
}

pub fn squarefree(p: &P) -> P {
    let g = gcd(p, &derivative(p));
    divmod(p, &g).0
}

fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

/// Complex roots of a squarefree rational polynomial.
pub fn roots(p: &P) -> Vec<Complex64> {
    let lead = p.last().unwrap().clone();
    let f: Vec<Complex64> = p
        .iter()
        .map(|c| Complex64::new((c / &lead).to_f64().unwrap(), 0.0))
        .collect();
    let df: Vec<Complex64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    let n = f.len() - 1;
    let radius = 1.0 + f[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(&f, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let d = eval(&df, *r);
            if d.norm() > 0.0 {
                *r -= eval(&f, *r) / d;
            }
        }
    }
    z
}

/// `Some(all |λ| > 1)` unless a root lies within `margin` of the unit circle.
pub fn expanding_oracle(m: &Matrix, margin: f64) -> Option<bool> {
    let p = squarefree(&charpoly_by_interpolation(m));
    let rs = roots(&p);
    if rs.iter().any(|r| (r.norm() - 1.0).abs() <= margin) {
        return None;
    }
    Some(rs.iter().all(|r| r.norm() > 1.0))
}
