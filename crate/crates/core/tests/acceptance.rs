//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the report reads top to bottom; exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::roots::expanding_oracle;
use common::{diag, from_flat, lattice_basis, q, scan_min_power, unimodular};
use nilgrade::fixtures;
use nilgrade::grading::{
    classify, find_positive_weights, grading_from_weights, phi_p, preserved_by, verify_grading,
    weight_solution_space, GradingClass, WeightSystem,
};
use nilgrade::latpow::{denominator_primes, orbit_escapes_lattice, power_into_lattice};
use nilgrade::qlinalg::{rat, IntegerLattice, Matrix, Rational};
use nilgrade::specmaps::{expanding_to_positive_grading, is_expanding};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn notcohopf_determinant() -> Outcome {
    let alg = fixtures::algebra("notcohopf").unwrap();
    let g = grading_from_weights(&alg, &WeightSystem::new(vec![0, 1, 1, 1, 2, 2, 3])).unwrap();
    let phi = phi_p(&alg, &g, 2).unwrap();
    ensure!(
        phi.map == diag(&[1, 2, 2, 2, 4, 4, 8]),
        "phi_2 = {:?}",
        phi.map
    );
    ensure!(
        alg.is_automorphism(&phi.map),
        "phi_2 is not an automorphism"
    );
    let det = phi.map.det().unwrap();
    ensure!(det == rat(1024), "det = {det}");
    Ok("phi_2 = diag(1,2,2,2,4,4,8), det = 2^10".into())
}

fn notcohopf_negative() -> Outcome {
    let alg = fixtures::algebra("notcohopf").unwrap();
    ensure!(
        find_positive_weights(&alg).is_none(),
        "a positive weight system was found"
    );
    let phi = diag(&[1, 2, 2, 2, 4, 4, 8]);
    ensure!(!is_expanding(&phi).unwrap(), "phi is expanding");
    Ok("no basis-aligned positive grading; phi not expanding".into())
}

fn nilp5_characteristically_nilpotent() -> Outcome {
    let alg = fixtures::algebra("nilp5").unwrap();
    let start = Instant::now();
    let v = alg.is_characteristically_nilpotent();
    let elapsed = start.elapsed();
    ensure!(v.is_accept(), "verdict {:?}", v.decision);
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    let ders = alg.derivations();
    let n = alg.dim() as u32;
    ensure!(
        ders.iter().all(|d| d.pow(n).is_zero()),
        "a derivation is not nilpotent"
    );
    let dim = weight_solution_space(&alg).cols();
    ensure!(dim == 0, "weight solution space has dimension {dim}");
    Ok(format!(
        "{} nilpotent derivations, weight space 0, {elapsed:.2?}",
        ders.len()
    ))
}

fn integer_like_cube() -> Outcome {
    let b = q(&[&["5/2", "1/2"], &["1/2", "1/2"]]);
    let cube = b.pow(3);
    ensure!(cube == from_flat(2, &[17, 4, 4, 1]), "cube = {cube:?}");
    Ok("[[5/2,1/2],[1/2,1/2]]^3 = [[17,4],[4,1]]".into())
}

fn escape_orbit() -> Outcome {
    let a = q(&[&["1/2", "1/2"], &["-3/2", "5/2"]]);
    let v = vec![rat(0), rat(1)];
    let verdict = orbit_escapes_lattice(&a, &v, 64).unwrap();
    ensure!(verdict.is_accept(), "orbit hits the integer lattice");
    let mut x = v.clone();
    for k in 1..=64u32 {
        x = a.mul_vec(&x);
        let c = Rational::new(BigInt::from(2).pow(k) - 1, BigInt::from(2));
        let closed = vec![&v[0] + &c, &v[1] + &c * rat(3)];
        ensure!(x == closed, "k = {k}: {x:?} differs from the closed form");
        ensure!(!x.iter().all(Rational::is_integer), "A^{k} v is integral");
    }
    Ok("A^k v = v + (2^k - 1)/2 (1,3) is non-integral for k = 1..64".into())
}

fn random_lattice(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let entries =
        |rng: &mut ChaCha8Rng| (0..3).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>();
    let (up, lo) = (entries(rng), entries(rng));
    let qs: Vec<i64> = (0..n).map(|_| [1, 2, 3, 5][rng.gen_range(0..4)]).collect();
    lattice_basis(&unimodular(n, &up, &lo), &qs)
}

/// 200 matrices, 100 of each size, each paired with the 20 lattices of its
/// size. Determinants are drawn coprime to 30, hence to every possible `m`.
fn lattice_powers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a77_1ce5);
    let lattices: Vec<Vec<Matrix>> = [2usize, 3]
        .iter()
        .map(|&n| (0..20).map(|_| random_lattice(&mut rng, n)).collect())
        .collect();
    let (mut checked, mut max_k) = (0usize, 0u64);
    for i in 0..200 {
        let n = 2 + i % 2;
        let a = loop {
            let xs: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-4..=4)).collect();
            let a = from_flat(n, &xs);
            if a.det()
                .unwrap()
                .to_integer()
                .gcd(&BigInt::from(30))
                .is_one()
            {
                break a;
            }
        };
        for p in &lattices[n - 2] {
            let (_, m) = denominator_primes(p).unwrap();
            ensure!(
                a.det().unwrap().to_integer().gcd(&m).is_one(),
                "det shares a prime with m = {m}"
            );
            let lattice = IntegerLattice::new(p.clone()).unwrap();
            let c = power_into_lattice(&a, &lattice).map_err(|e| format!("{a:?} on {p:?}: {e}"))?;
            ensure!(
                c.conjugated_power.is_integral(),
                "P^-1 A^k P is not integral"
            );
            let scanned = scan_min_power(&a, p, 200);
            if c.k <= 200 {
                ensure!(
                    scanned == Some(c.k),
                    "k = {} but the scan found {scanned:?}",
                    c.k
                );
            } else {
                ensure!(
                    scanned.is_none(),
                    "k = {} but the scan found {scanned:?}",
                    c.k
                );
            }
            checked += 1;
            max_k = max_k.max(c.k);
        }
    }
    ensure!(checked == 4000, "checked {checked} pairs");
    Ok(format!("{checked} pairs minimal by scan, max k {max_k}"))
}

fn grading_round_trip() -> Outcome {
    let mut runs = 0;
    for name in fixtures::ALGEBRAS {
        let alg = fixtures::algebra(name).unwrap();
        let Some(w) = find_positive_weights(&alg) else {
            continue;
        };
        let g = grading_from_weights(&alg, &w).unwrap();
        let bundled = fixtures::automorphisms(name).unwrap();
        for p in [2, 3, 5] {
            let phi = phi_p(&alg, &g, p).unwrap().map;
            let h =
                expanding_to_positive_grading(&alg, &phi).map_err(|e| format!("{name}: {e}"))?;
            ensure!(
                verify_grading(&alg, &h).is_accept(),
                "{name}: extracted grading fails verification"
            );
            ensure!(
                classify(&alg, &h).unwrap() == GradingClass::Positive,
                "{name}: not positive"
            );
            ensure!(
                preserved_by(&h, &phi).unwrap(),
                "{name}: phi_{p} does not preserve it"
            );
            for psi in bundled.iter().filter(|psi| psi.commutes_with(&phi)) {
                ensure!(
                    preserved_by(&h, psi).unwrap(),
                    "{name}: commuting {psi:?} does not preserve it"
                );
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} round trips"))
}

fn small_corpus_gradable() -> Outcome {
    for name in fixtures::SMALL_CORPUS {
        let alg = fixtures::algebra(name).unwrap();
        ensure!(alg.dim() <= 6, "{name} has dimension {}", alg.dim());
        let w =
            find_positive_weights(&alg).ok_or_else(|| format!("{name}: no positive weights"))?;
        ensure!(
            w.check(&alg).is_ok(),
            "{name}: weights fail the constraints"
        );
    }
    Ok(format!(
        "{} algebras of dimension <= 6",
        fixtures::SMALL_CORPUS.len()
    ))
}

fn pi_compatibility() -> Outcome {
    let mut count = 0;
    for name in fixtures::ALGEBRAS {
        let alg = fixtures::algebra(name).unwrap();
        let mut maps = fixtures::automorphisms(name).unwrap();
        if let Some(w) = find_positive_weights(&alg) {
            let g = grading_from_weights(&alg, &w).unwrap();
            maps.push(phi_p(&alg, &g, 2).unwrap().map);
        }
        for m in maps {
            let pi = alg.induced_map(&m).unwrap();
            let (a, b) = (is_expanding(&m).unwrap(), is_expanding(&pi).unwrap());
            ensure!(a == b, "{name}: {m:?} expanding = {a}, induced = {b}");
            count += 1;
        }
    }
    Ok(format!("{count} automorphisms"))
}

/// Entries in [-3, 3], shifted by a random multiple of the identity so both
/// expanding and non-expanding matrices are common.
fn schur_cohn_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c40_c0b2);
    let (mut agreed, mut excluded, mut expanding) = (0usize, 0usize, 0usize);
    let mut generated = 0;
    while generated < 500 {
        let n = rng.gen_range(1..=5);
        let shift = [0, 0, 2, -2, 4, -4][rng.gen_range(0..6)];
        let mut xs: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
        for i in 0..n {
            xs[i * n + i] += shift;
        }
        let m = from_flat(n, &xs);
        if !m.is_invertible() {
            continue;
        }
        generated += 1;
        let Some(expected) = expanding_oracle(&m, 1e-9) else {
            excluded += 1;
            continue;
        };
        let got = is_expanding(&m).unwrap();
        ensure!(got == expected, "{m:?}: exact {got}, oracle {expected}");
        agreed += 1;
        expanding += usize::from(got);
    }
    ensure!(expanding > 0 && expanding < agreed, "degenerate sample");
    Ok(format!(
        "{agreed}/{agreed} agree ({expanding} expanding), {excluded} near the unit circle excluded"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("notcohopf determinant", notcohopf_determinant),
        ("notcohopf negative", notcohopf_negative),
        (
            "nilp5 characteristically nilpotent",
            nilp5_characteristically_nilpotent,
        ),
        ("integer-like cube", integer_like_cube),
        ("escape orbit", escape_orbit),
        ("lattice powers", lattice_powers),
        ("grading round trip", grading_round_trip),
        ("small corpus gradable", small_corpus_gradable),
        ("abelianization compatibility", pi_compatibility),
        ("Schur-Cohn vs root oracle", schur_cohn_vs_oracle),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2}: PASS  {name}: {detail} [{secs:.2}s]",
                i + 1
            ),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
