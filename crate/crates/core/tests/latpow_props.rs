mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use common::{from_flat, lattice_basis, scan_min_power, unimodular};
use nilgrade::latpow::{
    denominator_primes, maps_into, power_into_lattice, power_into_lattice_bounded,
};
use nilgrade::qlinalg::{order_mod, IntegerLattice, Matrix};
use nilgrade::Error;

fn lattice_strategy(n: usize) -> impl Strategy<Value = Matrix> {
    (
        prop::collection::vec(-2i64..=2, 3),
        prop::collection::vec(-2i64..=2, 3),
        prop::collection::vec(prop::sample::select(vec![1i64, 2, 3, 5]), n),
    )
        .prop_map(move |(up, lo, qs)| lattice_basis(&unimodular(n, &up, &lo), &qs))
}

fn case_strategy() -> impl Strategy<Value = (Matrix, Matrix)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            prop::collection::vec(-4i64..=4, n * n).prop_map(move |xs| from_flat(n, &xs)),
            lattice_strategy(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn minimal_power_matches_scan((a, p) in case_strategy()) {
        let det = a.det().unwrap().to_integer();
        prop_assume!(det != BigInt::from(0));
        let (primes, m) = denominator_primes(&p).unwrap();
        let lattice = IntegerLattice::new(p.clone()).unwrap();
        let result = power_into_lattice(&a, &lattice);
        if !det.gcd(&m).is_one() {
            let is_obstruction = matches!(result, Err(Error::ObstructionPrime(_)));
            prop_assert!(is_obstruction);
            return Ok(());
        }
        let c = result.unwrap();
        prop_assert_eq!(&c.primes, &primes);
        prop_assert_eq!(&c.modulus, &m);
        prop_assert_eq!(&c.order_witness, &order_mod(&a, &m).unwrap());
        let order = c.order_witness.to_u64().unwrap();
        prop_assert!(c.k <= order);
        prop_assert_eq!(scan_min_power(&a, &p, c.k), Some(c.k));
        // the a-priori witness order also works, checked exactly when small
        if order <= 64 {
            prop_assert!((&(&p.inverse().unwrap() * &a.pow(order as u32)) * &p).is_integral());
        }
        prop_assert_eq!(&c.conjugated_power, &(&(&p.inverse().unwrap() * &a.pow(c.k as u32)) * &p));
        // lattice membership agrees with the conjugation test
        prop_assert!(maps_into(&a, c.k as u32, &lattice).unwrap());
        for j in 1..c.k.min(12) {
            prop_assert!(!maps_into(&a, j as u32, &lattice).unwrap());
        }
        let bounded_ok = power_into_lattice_bounded(&a, &lattice, Some(c.k)).is_ok();
        prop_assert!(bounded_ok);
        if c.k > 1 {
            let is_precondition =
                matches!(power_into_lattice_bounded(&a, &lattice, Some(c.k - 1)), Err(Error::Precondition(_)));
            prop_assert!(is_precondition);
        }
    }

    #[test]
    fn unimodular_maps_always_succeed(
        up in prop::collection::vec(-3i64..=3, 3),
        lo in prop::collection::vec(-3i64..=3, 3),
        p in lattice_strategy(3),
    ) {
        let a = unimodular(3, &up, &lo);
        let c = power_into_lattice(&a, &IntegerLattice::new(p).unwrap()).unwrap();
        prop_assert!(c.k >= 1);
    }

    #[test]
    fn modulus_is_product_of_denominators(p in lattice_strategy(3)) {
        let (primes, m) = denominator_primes(&p).unwrap();
        let inv = p.inverse().unwrap();
        let product: BigInt = p.data().iter().chain(inv.data()).map(|x| x.denom().clone()).product();
        prop_assert_eq!(&m, &product);
        for q in &primes {
            prop_assert!(m.is_multiple_of(q));
        }
        prop_assert!(primes.iter().all(|q| [2, 3, 5].contains(&q.to_i64().unwrap())));
    }
}
