use proptest::prelude::*;

use wplcluster::mutation::QuiverState;
use wplcluster::verify::kronecker::subspaces;
use wplcluster::{BarLaurent, CompatiblePair, IntMatrix, Series, Torus, WeightSpec};

fn laurent() -> impl Strategy<Value = BarLaurent> {
    prop::collection::vec((-6i64..=6, -5i128..=5), 0..5).prop_map(BarLaurent::from_terms)
}

fn pair(spec: &str) -> CompatiblePair {
    CompatiblePair::new(&spec.parse::<WeightSpec>().unwrap()).unwrap()
}

fn vector(m: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, m)
}

/// Number of k-dimensional subspaces of F_q^n by the q-binomial product.
fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

proptest! {
    #[test]
    fn bar_is_an_involutive_ring_map(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn centred_quantum_integers_are_bar_invariant(n in 1i64..12, half in 1i64..3) {
        let q = BarLaurent::quantum_integer(n, 2 * half).shift(-half * (n - 1));
        prop_assert!(q.is_bar_invariant());
    }

    #[test]
    fn lambda_is_compatible_with_btilde(
        weights in prop::collection::vec(1u32..=5, 0..4),
        i in 0usize..8,
    ) {
        let spec = weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
        let pair = pair(&spec);
        let m = pair.m;
        prop_assert!(pair.lambda.is_skew_symmetric());
        prop_assert!(pair.btilde.is_skew_symmetric() || pair.btilde.cols != pair.btilde.rows);
        let product = pair.lambda.mul(&pair.btilde).unwrap();
        let j = i % m;
        for k in 0..m {
            let expect = if k == j { -pair.d } else { 0 };
            prop_assert_eq!(product.get(k, j), expect);
        }
    }

    #[test]
    fn pairing_identities_hold_for_random_weights(
        weights in prop::collection::vec(1u32..=4, 0..4),
        seed in vector(16),
        other in vector(16),
    ) {
        let spec = weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
        let pair = pair(&spec);
        let m = pair.m;
        let (a, b) = (&seed[..m], &other[..m]);
        let lam = |x: &[i64], y: &[i64]| pair.lambda.bilinear(x, y);
        let bt = |v: &[i64]| pair.btilde.mul_vec(v).unwrap();
        let et = |v: &[i64]| pair.etilde.mul_vec(v).unwrap();
        let ett = |v: &[i64]| pair.etilde.transpose().mul_vec(v).unwrap();
        let (ab, ba) = (pair.etilde.bilinear(a, b), pair.etilde.bilinear(b, a));
        prop_assert_eq!(lam(&bt(a), &et(b)), pair.d * ab);
        prop_assert_eq!(lam(&bt(a), &ett(b)), pair.d * ba);
        prop_assert_eq!(lam(&bt(a), &bt(b)), pair.d * (ba - ab));
        prop_assert_eq!(lam(&et(a), &et(b)), lam(&ett(a), &ett(b)));
    }

    #[test]
    fn monomials_quasi_commute(a in vector(6), b in vector(6)) {
        let pair = pair("1,1,4");
        let torus = Torus::from_pair(&pair);
        let x = Series::monomial(&torus, a.clone(), BarLaurent::one());
        let y = Series::monomial(&torus, b.clone(), BarLaurent::one());
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        let lambda = pair.lambda.bilinear(&a, &b);
        prop_assert!(xy.agrees_with(&yx.shift_nu(2 * lambda)));
        prop_assert!(xy.bar().agrees_with(&y.bar().mul(&x.bar()).unwrap()));
    }

    #[test]
    fn quiver_mutation_is_involutive(
        entries in prop::collection::vec(-3i64..=3, 6),
        k in 0usize..4,
    ) {
        let mut s = IntMatrix::zeros(4, 4);
        let mut it = entries.into_iter();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let x = it.next().unwrap();
                s.data[i][j] = x;
                s.data[j][i] = -x;
            }
        }
        let q = QuiverState::from_skew(&s);
        let twice = q.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(twice, q);
    }

    #[test]
    fn subspace_enumeration_counts(n in 0usize..=4, k in 0usize..=4, q in prop::sample::select(vec![2u64, 3])) {
        prop_assume!(k <= n);
        let found = subspaces(n, k, q);
        prop_assert_eq!(found.len() as u64, gaussian_binomial(n as u32, k as u32, q));
    }
}
