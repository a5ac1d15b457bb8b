//! Exact linear algebra over ℚ and univariate polynomial arithmetic.

mod factor;
mod lattice;
mod matrix;
mod poly;
mod rational;

pub use factor::{factor_over_q, squarefree_decomposition};
pub use lattice::{factorize, gl_order_bound, hnf_membership, order_mod, IntegerLattice};
pub(crate) use lattice::{mat_mul_mod, to_int_matrix};
pub use matrix::{companion, Matrix};
pub use poly::Poly;
pub use rational::{int, parse_rational, rat, Rational};

use crate::error::{Error, Result};

/// Characteristic polynomial `det(X·I - M)` by Faddeev–LeVerrier.
pub fn charpoly(m: &Matrix) -> Result<Poly> {
    m.ensure_square()?;
    let n = m.rows();
    // coeffs[n] = 1, coeffs[n-k] = c_k
    let mut coeffs = vec![Rational::from_integer(0.into()); n + 1];
    coeffs[n] = rat(1);
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &Matrix::identity(n).scale(&coeffs[n - k + 1]);
        let t = (m * &mk).trace();
        coeffs[n - k] = -t / rat(k as i64);
    }
    Ok(Poly::new(coeffs))
}

/// Minimal polynomial: the first linear dependency among `I, M, M², ...`.
pub fn minpoly(m: &Matrix) -> Result<Poly> {
    m.ensure_square()?;
    let n = m.rows();
    let mut powers: Vec<Matrix> = vec![Matrix::identity(n)];
    loop {
        let next = powers.last().unwrap() * m;
        // columns vec(M^0) .. vec(M^{k-1}); look for vec(M^k) in their span
        let cols: Vec<Vec<Rational>> = powers.iter().map(|p| p.data().to_vec()).collect();
        let basis = Matrix::from_columns(n * n, &cols);
        if let Some(sol) = basis.solve(next.data()) {
            let mut coeffs: Vec<Rational> = sol.into_iter().map(|c| -c).collect();
            coeffs.push(rat(1));
            return Ok(Poly::new(coeffs));
        }
        if powers.len() > n {
            return Err(Error::Invariant(
                "minimal polynomial degree exceeds n".into(),
            ));
        }
        powers.push(next);
    }
}

/// `p / gcd(p, p')`, made monic.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = p.gcd(&p.derivative());
    Ok(p.div_rem(&g).0.monic())
}

/// One primary component: `ker f(M)^mult` for an irreducible factor `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub factor: Poly,
    pub multiplicity: usize,
    /// Column basis of the component, in reduced column-echelon form.
    pub basis: Matrix,
}

/// Splits ℚⁿ into the generalized kernels of the irreducible factors of the
/// characteristic polynomial. Components are ordered as returned by
/// [`factor_over_q`].
pub fn primary_decomposition(m: &Matrix) -> Result<Vec<PrimaryComponent>> {
    let cp = charpoly(m)?;
    let factors = factor_over_q(&cp)?;
    let mut out = Vec::with_capacity(factors.len());
    for (f, mult) in factors {
        let fm = f.eval_matrix(m);
        let power = fm.pow(mult as u32);
        let basis = power.kernel();
        out.push(PrimaryComponent {
            factor: f,
            multiplicity: mult,
            basis,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly(&Matrix::identity(2)).unwrap(), p(&[1, -2, 1]));
        assert_eq!(
            charpoly(&m(&[&["1/2", "1/2"], &["-3/2", "5/2"]])).unwrap(),
            p(&[2, -3, 1])
        );
        // trace 3, det 1
        assert_eq!(
            charpoly(&m(&[&["5/2", "1/2"], &["1/2", "1/2"]])).unwrap(),
            p(&[1, -3, 1])
        );
        assert!(matches!(
            charpoly(&Matrix::zeros(2, 3)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn charpoly_constant_term_is_signed_det() {
        let a = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 4], &[0, -2, 5]]);
        let cp = charpoly(&a).unwrap();
        assert_eq!(-cp.coeff(0), a.det().unwrap());
    }

    #[test]
    fn minpoly_examples() {
        assert_eq!(minpoly(&Matrix::identity(3)).unwrap(), p(&[-1, 1]));
        let c = companion(&p(&[2, -3, 1]));
        assert_eq!(minpoly(&c).unwrap(), p(&[2, -3, 1]));
        let j = Matrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert_eq!(minpoly(&j).unwrap(), p(&[4, -4, 1]));
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(&p(&[-1, 3, -3, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(squarefree_part(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn primary_decomposition_diagonal() {
        let d = Matrix::from_i64(&[&[1, 0], &[0, 2]]);
        let comps = primary_decomposition(&d).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].factor, p(&[-1, 1]));
        assert_eq!(comps[0].basis, Matrix::from_i64(&[&[1], &[0]]));
        assert_eq!(comps[1].factor, p(&[-2, 1]));
        assert_eq!(comps[1].basis, Matrix::from_i64(&[&[0], &[1]]));
    }

    #[test]
    fn primary_decomposition_eigenlines() {
        let a = m(&[&["1/2", "1/2"], &["-3/2", "5/2"]]);
        let comps = primary_decomposition(&a).unwrap();
        // A - I = [[-1/2,1/2],[-3/2,3/2]] kills (1,1); A - 2I kills (1,3)
        assert_eq!(comps[0].basis, Matrix::from_i64(&[&[1], &[1]]));
        assert_eq!(comps[1].basis, m(&[&["1/3"], &["1"]]));
    }

    #[test]
    fn primary_decomposition_irreducible() {
        let c = companion(&p(&[1, 0, 1]));
        let comps = primary_decomposition(&c).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].basis.cols(), 2);
    }
}
