#![allow(dead_code)]

pub mod roots;

use nilgrade::qlinalg::{parse_rational, rat, Matrix, Rational};
use nilgrade::LieAlgebra;

pub fn diag(xs: &[i64]) -> Matrix {
    Matrix::diag(&xs.iter().map(|&x| rat(x)).collect::<Vec<_>>())
}

pub fn q(rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

pub fn from_flat(n: usize, xs: &[i64]) -> Matrix {
    let rows: Vec<Vec<Rational>> = xs
        .chunks(n)
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    Matrix::from_rows(&rows).unwrap()
}

/// `a ⊕ b` with the basis of `b` appended after that of `a`.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> LieAlgebra {
    let (n, m) = (a.dim(), b.dim());
    let mut entries = Vec::new();
    for (alg, off) in [(a, 0), (b, n)] {
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                let v = alg.basis_bracket(i, j);
                if v.iter().all(|c| *c == rat(0)) {
                    continue;
                }
                let mut w = vec![rat(0); n + m];
                for (k, c) in v.into_iter().enumerate() {
                    w[k + off] = c;
                }
                entries.push(((i + off, j + off), w));
            }
        }
    }
    LieAlgebra::from_brackets(n + m, entries).unwrap()
}

/// Relabels basis vector `X_i` as `X_{perm[i]}`.
pub fn permute(a: &LieAlgebra, perm: &[usize]) -> LieAlgebra {
    let n = a.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = a.basis_bracket(i, j);
            if v.iter().all(|c| *c == rat(0)) {
                continue;
            }
            let mut w = vec![rat(0); n];
            for (k, c) in v.into_iter().enumerate() {
                w[perm[k]] = c;
            }
            let (pi, pj) = (perm[i], perm[j]);
            if pi < pj {
                entries.push(((pi, pj), w));
            } else {
                entries.push(((pj, pi), w.into_iter().map(|c| -c).collect()));
            }
        }
    }
    LieAlgebra::from_brackets(n, entries).unwrap()
}

/// Determinant by cofactor expansion; an oracle independent of elimination.
pub fn det_cofactor(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return rat(1);
    }
    let mut total = rat(0);
    for j in 0..n {
        if m[0][j] == rat(0) {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Unit upper times unit lower triangular, so `det = 1`.
pub fn unimodular(n: usize, upper: &[i64], lower: &[i64]) -> Matrix {
    let mut u = Matrix::identity(n);
    let mut l = Matrix::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            u[(i, j)] = rat(upper[k % upper.len()]);
            l[(j, i)] = rat(lower[k % lower.len()]);
            k += 1;
        }
    }
    &u * &l
}

/// Lattice basis `U·diag(1/q_i)`.
pub fn lattice_basis(u: &Matrix, denominators: &[i64]) -> Matrix {
    let d = Matrix::diag(
        &denominators
            .iter()
            .map(|&q| Rational::new(1.into(), q.into()))
            .collect::<Vec<_>>(),
    );
    u * &d
}

/// Smallest `k` in `1..=limit` with `P⁻¹AᵏP` integral, by direct scan.
///
/// With `m` the product of every denominator in `P` and `P⁻¹`, both `mP`
/// and `mP⁻¹` are integral, so integrality of `P⁻¹XP` only depends on `X`
/// modulo `m²`; powers are reduced accordingly to keep entries small.
pub fn scan_min_power(a: &Matrix, p: &Matrix, limit: u64) -> Option<u64> {
    let p_inv = p.inverse().unwrap();
    let m: num_bigint::BigInt = p
        .data()
        .iter()
        .chain(p_inv.data())
        .map(|x| x.denom().clone())
        .product();
    let m2 = &m * &m;
    let n = a.rows();
    let mut power = Matrix::identity(n);
    (1..=limit).find(|_| {
        power = &power * a;
        for i in 0..n {
            for j in 0..n {
                let x = num_integer::Integer::mod_floor(&power[(i, j)].to_integer(), &m2);
                power[(i, j)] = Rational::from_integer(x);
            }
        }
        (&(&p_inv * &power) * p).is_integral()
    })
}
