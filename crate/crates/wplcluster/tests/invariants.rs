use proptest::prelude::*;

use wplcluster::characters::{line_bundle_char, simple_char, P1};
use wplcluster::mutation::{run_from_root, ClusterState, StateJson};
use wplcluster::series::{corner_exponents, max_corner, SeriesJson};
use wplcluster::verify::{compare_series, run_suite, SuiteParams, SuiteReport};
use wplcluster::{BarLaurent, CompatiblePair, GradeVector, PairSummary, Series, Torus, WeightSpec};

fn pair(spec: &str) -> CompatiblePair {
    CompatiblePair::new(&spec.parse::<WeightSpec>().unwrap()).unwrap()
}

fn laurent() -> impl Strategy<Value = BarLaurent> {
    prop::collection::vec((-4i64..=4, -3i128..=3), 1..3).prop_map(BarLaurent::from_terms)
}

fn monomial_term(m: usize) -> impl Strategy<Value = (Vec<i64>, BarLaurent)> {
    (prop::collection::vec(-3i64..=3, m), laurent())
}

/// A finite series over the (1,1,4) torus.
fn finite_series() -> impl Strategy<Value = Vec<(Vec<i64>, BarLaurent)>> {
    prop::collection::vec(monomial_term(6), 1..4)
}

fn build(torus: &std::sync::Arc<Torus>, terms: Vec<(Vec<i64>, BarLaurent)>) -> Series {
    terms
        .into_iter()
        .map(|(e, c)| Series::monomial(torus, e, c))
        .fold(Series::zero(torus), |acc, x| acc.add(&x).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn torus_product_is_associative(a in monomial_term(6), b in monomial_term(6), c in monomial_term(6)) {
        let torus = Torus::from_pair(&pair("1,1,4"));
        let (x, y, z) = (
            Series::monomial(&torus, a.0, a.1),
            Series::monomial(&torus, b.0, b.1),
            Series::monomial(&torus, c.0, c.1),
        );
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }
}

proptest! {
    #[test]
    fn truncation_commutes_with_products(f in finite_series(), g in finite_series(), cap in -10i64..10) {
        let torus = Torus::from_pair(&pair("1,1,4"));
        let (f, g) = (build(&torus, f), build(&torus, g));
        let truncated = f.truncate(cap).mul(&g.truncate(cap)).unwrap();
        let full = f.mul(&g).unwrap();
        let contracted = truncated.precision();
        let c = compare_series(&truncated, &full, contracted).unwrap();
        prop_assert!(c.equal);
    }
}

#[test]
fn conic_inverses_of_line_bundles() {
    let p1 = P1::new();
    let target = p1.precision(8);
    let one = Series::one(&p1.torus);
    for l in -4..=4 {
        let f = p1.line_bundle(l, target + 20);
        let inv = f.conic_invert(target).unwrap();
        for product in [f.mul(&inv).unwrap(), inv.mul(&f).unwrap()] {
            let c = compare_series(&product, &one, product.precision()).unwrap();
            assert!(c.equal && c.terms > 0, "l={l}");
            assert!(product.precision().unwrap() >= target - 2 * p1.pair.d * 4, "l={l}");
        }
    }
}

#[test]
fn finite_characters_have_unit_corners() {
    for spec in ["1,1", "2,3", "1,1,4"] {
        let pair = pair(spec);
        let torus = Torus::from_pair(&pair);
        let mut classes = vec![pair.point_class()];
        for (tube, &w) in pair.p_tilde.weights.iter().enumerate() {
            for index in 1..=w {
                classes.push(pair.simple_class(tube, index));
            }
        }
        for m in classes {
            let f = simple_char(&pair, &torus, &m);
            let (hi, lo) = corner_exponents(&pair, &f).unwrap();
            let neg = |v: Vec<i64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            assert_eq!(hi, neg(pair.star_left(&m).unwrap()), "{spec} {m:?}");
            assert_eq!(lo, neg(pair.star_right(&m).unwrap()), "{spec} {m:?}");
            assert!(f.coeff(&hi).as_unit().is_some());
            assert!(f.coeff(&lo).as_unit().is_some());
        }
    }
}

#[test]
fn line_bundle_characters_have_the_expected_top_corner() {
    let pair = pair("2,3");
    let torus = Torus::from_pair(&pair);
    for l in -2..=2 {
        let x = GradeVector::multiple_of_c(l, pair.p_tilde.count());
        let f = line_bundle_char(&pair, &torus, &x, 6 * pair.d);
        let m = pair.line_bundle_class(&x);
        let top: Vec<i64> = pair.star_left(&m).unwrap().into_iter().map(|v| -v).collect();
        assert_eq!(max_corner(&pair, &f).unwrap(), top, "l={l}");
    }
}

/// Quasi-commutation of the cluster and unimodularity of its classes.
fn check_cluster(s: &ClusterState) {
    assert!(s.dims_unimodular(), "path {:?}", s.path);
    for i in 0..s.size() {
        for j in (i + 1)..s.size() {
            let k = s.pair.lambda_star(&s.dims[i], &s.dims[j]).unwrap();
            let xy = s.vars[i].mul(&s.vars[j]).unwrap();
            let yx = s.vars[j].mul(&s.vars[i]).unwrap().shift_nu(2 * k);
            let c = compare_series(&xy, &yx, xy.precision().min(yx.precision())).unwrap();
            assert!(c.equal && c.terms > 0, "path {:?} pair ({i},{j}): {c:?}", s.path);
        }
    }
}

#[test]
fn engine_clusters_quasi_commute_with_unimodular_classes() {
    let pair = pair("2,3");
    let target = 8 * pair.d;
    for path in [vec![], vec![1], vec![2, 1], vec![3, 4, 1]] {
        check_cluster(&run_from_root(&pair, &path, target).unwrap());
    }
}

#[test]
fn normalized_monomials_do_not_depend_on_factor_order() {
    let pair = pair("1,1");
    let s = run_from_root(&pair, &[1], 10 * pair.d).unwrap();
    for c in [[1, 1], [2, 1], [1, 3], [2, 2]] {
        let forward = s.normalized_monomial(&c).unwrap();
        let mut twist = 0;
        for l in 0..2 {
            for r in (l + 1)..2 {
                twist += c[l] * c[r] * pair.lambda_star(&s.dims[l], &s.dims[r]).unwrap();
            }
        }
        let reversed = s.vars[1]
            .pow(c[1] as u32)
            .unwrap()
            .mul(&s.vars[0].pow(c[0] as u32).unwrap())
            .unwrap()
            .shift_nu(twist);
        let precision = forward.precision().min(reversed.precision());
        let cmp = compare_series(&forward, &reversed, precision).unwrap();
        assert!(cmp.equal && cmp.terms > 1, "{c:?}: {cmp:?}");
    }
}

#[test]
fn json_documents_round_trip() {
    let pair = pair("2,3");
    let summary = pair.summary();
    let back: PairSummary = serde_json::from_str(&serde_json::to_string(&summary).unwrap()).unwrap();
    assert_eq!(back, summary);

    let state = run_from_root(&pair, &[1, 2], 3 * pair.d).unwrap().to_json();
    let back: StateJson = serde_json::from_str(&serde_json::to_string(&state).unwrap()).unwrap();
    assert_eq!(back, state);

    let series = P1::new().line_bundle(2, 8).to_json();
    let back: SeriesJson = serde_json::from_str(&serde_json::to_string(&series).unwrap()).unwrap();
    assert_eq!(back, series);

    let report = run_suite("example33", &SuiteParams { lmax: Some(1), ..Default::default() }).unwrap();
    let back: SuiteReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);
}
