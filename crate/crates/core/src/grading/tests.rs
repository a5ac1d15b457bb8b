use super::*;
use crate::fixtures;
use crate::qlinalg::rat;

fn heis() -> LieAlgebra {
    fixtures::algebra("heisenberg").unwrap()
}

fn span(n: usize, idx: &[usize]) -> Matrix {
    let cols: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&i| {
            let mut v = vec![rat(0); n];
            v[i - 1] = rat(1);
            v
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

fn comp(weight: i64, basis: Matrix) -> GradingComponent {
    GradingComponent { weight, basis }
}

fn diag(xs: &[i64]) -> Matrix {
    Matrix::diag(&xs.iter().map(|&x| rat(x)).collect::<Vec<_>>())
}

fn notcohopf_grading() -> (LieAlgebra, Grading) {
    let alg = fixtures::algebra("notcohopf").unwrap();
    let g = grading_from_weights(&alg, &WeightSystem::new(vec![0, 1, 1, 1, 2, 2, 3])).unwrap();
    (alg, g)
}

#[test]
fn verify_examples() {
    let g = Grading::new(vec![comp(1, span(3, &[1, 2])), comp(2, span(3, &[3]))]);
    assert!(verify_grading(&heis(), &g).is_accept());

    let (alg, g) = notcohopf_grading();
    assert!(verify_grading(&alg, &g).is_accept());

    let bad = Grading::new(vec![comp(1, span(3, &[1, 3])), comp(2, span(3, &[2]))]);
    let v = verify_grading(&heis(), &bad);
    assert!(v.is_reject());
    assert_eq!(v.certificate["pair"], serde_json::json!([1, 2]));
    assert_eq!(v.certificate["target_weight"], 3);
    assert_eq!(v.certificate["bracket"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn verify_rejects_non_direct_sums() {
    let overlap = Grading::new(vec![comp(1, span(3, &[1, 2])), comp(2, span(3, &[2, 3]))]);
    assert!(verify_grading(&heis(), &overlap).is_reject());
    let short = Grading::new(vec![comp(1, span(3, &[1, 2]))]);
    assert!(verify_grading(&heis(), &short).is_reject());
    let unordered = Grading::new(vec![comp(2, span(3, &[3])), comp(1, span(3, &[1, 2]))]);
    assert!(verify_grading(&heis(), &unordered).is_reject());
}

#[test]
fn verify_accepts_non_basis_aligned() {
    // 𝔫_1 = span(X1 + X3, X2), 𝔫_2 = span(X3)
    let mut b1 = span(3, &[1, 2]);
    b1[(2, 0)] = rat(1);
    let g = Grading::new(vec![comp(1, b1), comp(2, span(3, &[3]))]);
    assert!(verify_grading(&heis(), &g).is_accept());
    assert_eq!(g.basis_weights(), None);
}

#[test]
fn classify_examples() {
    let g = grading_from_weights(&heis(), &WeightSystem::new(vec![1, 1, 2])).unwrap();
    assert_eq!(classify(&heis(), &g).unwrap(), GradingClass::Positive);
    let (alg, g) = notcohopf_grading();
    assert_eq!(
        classify(&alg, &g).unwrap(),
        GradingClass::NonnegativeNontrivial
    );
    let ab = LieAlgebra::abelian(2);
    let g = grading_from_weights(&ab, &WeightSystem::new(vec![0, 0])).unwrap();
    assert_eq!(classify(&ab, &g).unwrap(), GradingClass::Trivial);
    let g = grading_from_weights(&ab, &WeightSystem::new(vec![-1, 2])).unwrap();
    assert_eq!(classify(&ab, &g).unwrap(), GradingClass::Other);
    let bad = Grading::new(vec![comp(1, span(3, &[1, 3])), comp(2, span(3, &[2]))]);
    assert!(matches!(
        classify(&heis(), &bad),
        Err(Error::InvalidGrading(_))
    ));
}

#[test]
fn solution_space_examples() {
    assert_eq!(weight_solution_space(&LieAlgebra::abelian(3)).cols(), 3);
    assert_eq!(weight_solution_space(&heis()).cols(), 2);
    assert_eq!(
        weight_solution_space(&fixtures::algebra("nilp5").unwrap()).cols(),
        0
    );
    assert_eq!(
        weight_solution_space(&fixtures::algebra("notcohopf").unwrap()).cols(),
        1
    );
}

#[test]
fn search_examples() {
    assert_eq!(
        find_positive_weights(&heis()).unwrap().weights(),
        &[1, 1, 2]
    );
    let nilp5 = fixtures::algebra("nilp5").unwrap();
    assert!(find_positive_weights(&nilp5).is_none());
    assert!(find_nonneg_nontrivial_weights(&nilp5).is_none());
    let nc = fixtures::algebra("notcohopf").unwrap();
    assert!(find_positive_weights(&nc).is_none());
    assert_eq!(
        find_nonneg_nontrivial_weights(&nc).unwrap().weights(),
        &[0, 1, 1, 1, 2, 2, 3]
    );
    assert_eq!(
        find_nonneg_nontrivial_weights(&heis()).unwrap().weights(),
        &[0, 1, 1]
    );
}

#[test]
fn grading_from_weights_examples() {
    let g = grading_from_weights(&heis(), &WeightSystem::new(vec![1, 1, 2])).unwrap();
    assert_eq!(g.weights(), vec![1, 2]);
    assert_eq!(g.components()[0].basis, span(3, &[1, 2]));
    let (_, g) = notcohopf_grading();
    assert_eq!(g.components().len(), 4);
    let g = grading_from_weights(&LieAlgebra::abelian(2), &WeightSystem::new(vec![5, 5])).unwrap();
    assert_eq!(g.weights(), vec![5]);
    assert!(matches!(
        grading_from_weights(&heis(), &WeightSystem::new(vec![1, 1, 1])),
        Err(Error::WeightConstraint(_))
    ));
}

#[test]
fn phi_p_examples() {
    let g = grading_from_weights(&heis(), &WeightSystem::new(vec![1, 1, 2])).unwrap();
    let phi = phi_p(&heis(), &g, 2).unwrap();
    assert_eq!(phi.map, diag(&[2, 2, 4]));
    assert_eq!(phi.det(), rat(16));
    assert_eq!(phi.det_exponent, 4);

    let (alg, g) = notcohopf_grading();
    let phi = phi_p(&alg, &g, 2).unwrap();
    assert_eq!(phi.map, diag(&[1, 2, 2, 2, 4, 4, 8]));
    assert_eq!(phi.det(), rat(1024));
    assert!(alg.is_automorphism(&phi.map));

    let triv = Grading::new(vec![comp(0, span(3, &[1, 2, 3]))]);
    let ab = LieAlgebra::abelian(3);
    let phi = phi_p(&ab, &triv, 3).unwrap();
    assert_eq!(phi.map, Matrix::identity(3));
    assert_eq!(phi.det(), rat(1));

    assert_eq!(phi_p(&ab, &triv, 4), Err(Error::NotPrime(4)));
}

#[test]
fn phi_p_in_a_skew_basis() {
    let mut b1 = span(3, &[1, 2]);
    b1[(2, 0)] = rat(1);
    let g = Grading::new(vec![comp(1, b1), comp(2, span(3, &[3]))]);
    let phi = phi_p(&heis(), &g, 3).unwrap();
    assert!(heis().is_automorphism(&phi.map));
    assert_eq!(phi.map.det().unwrap(), rat(81));
    assert!(preserved_by(&g, &phi.map).unwrap());
}

#[test]
fn preserved_by_examples() {
    let (_, g) = notcohopf_grading();
    assert!(preserved_by(&g, &Matrix::identity(7)).unwrap());
    assert!(preserved_by(&g, &diag(&[1, 2, 2, 2, 4, 4, 8])).unwrap());
    let hg = grading_from_weights(&heis(), &WeightSystem::new(vec![1, 1, 2])).unwrap();
    let swap13 = Matrix::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
    assert!(!preserved_by(&hg, &swap13).unwrap());
    assert!(!heis().is_automorphism(&swap13));
    assert_eq!(preserved_by(&hg, &diag(&[1, 0, 1])), Err(Error::Singular));
}

#[test]
fn json_round_trips() {
    let (_, g) = notcohopf_grading();
    assert_eq!(Grading::from_json(&g.to_json(), 7).unwrap(), g);
    let w = WeightSystem::new(vec![0, 1, 1, 1, 2, 2, 3]);
    assert_eq!(WeightSystem::from_json(&w.to_json()).unwrap(), w);
}
