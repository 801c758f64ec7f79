//! The registered identity suites.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kronecker::{
    brute_force_kronecker_grassmannian, extract_kronecker, kronecker_pairing, module_dims,
};
use super::{Cases, SuiteParams, SuiteReport};
use crate::characters::{
    chebyshev, eval_polynomial, fpoly_extract, simple_char, ChebyshevKind, TorsionFamily, P1,
};
use crate::error::{Error, Result};
use crate::kzero::{ClassVector, CompatiblePair, WeightSpec};
use crate::laurent::BarLaurent;
use crate::mutation::{kronecker_variables, run_from_root, ClusterState};
use crate::series::Series;

/// Pairs sampled by the pairing-identity suite.
pub const PROP34_PAIRS: [&str; 3] = ["1,1", "1,1,4", "3,3,3"];
const PROP34_SAMPLES: usize = 200;

fn pair_of(spec: &str) -> Result<CompatiblePair> {
    CompatiblePair::new(&spec.parse::<WeightSpec>()?)
}

/// `ν^4 − 1`, the count of nonzero extension classes over `F_q`, `q = ν⁴`.
fn q_minus_one(power: i64) -> BarLaurent {
    BarLaurent::from_terms([(power, 1), (0, -1)])
}

fn prod(factors: &[&Series]) -> Result<Series> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// P¹ characters generated at a working precision with enough headroom for
/// products of up to `factors` line bundles of twist at most `reach`.
struct P1Ctx {
    p1: P1,
    target: i64,
    work: i64,
}

impl P1Ctx {
    fn new(psi: i64, reach: i64, factors: i64) -> Self {
        let p1 = P1::new();
        let target = p1.precision(psi);
        // The lowest grade of X_{O(k)} is min(2k+3, 1−2k) ≥ −2|k| − 1.
        let work = target + (factors - 1) * (2 * reach.abs() + 1);
        P1Ctx { p1, target, work }
    }

    fn x(&self, l: i64) -> Series {
        self.p1.line_bundle(l, self.work)
    }

    fn delta(&self) -> Series {
        self.p1.delta()
    }

    fn z(&self, k: i64) -> Series {
        if k == 0 {
            Series::one(&self.p1.torus)
        } else {
            self.p1.ndelta(k)
        }
    }

    fn one(&self) -> Series {
        Series::one(&self.p1.torus)
    }

    fn prec(&self) -> Option<i64> {
        Some(self.target)
    }
}

pub fn prop34(_params: &SuiteParams) -> Result<SuiteReport> {
    let mut cases = Cases::default();
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for spec in PROP34_PAIRS {
        let pair = pair_of(spec)?;
        let m = pair.m;
        let et = pair.etilde.transpose();
        let lam = |a: &[i64], b: &[i64]| pair.lambda.bilinear(a, b);
        let mut failures: [Vec<String>; 4] = Default::default();
        for _ in 0..PROP34_SAMPLES {
            let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
            let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
            let ba = pair.btilde.mul_vec(&a)?;
            let bb = pair.btilde.mul_vec(&b)?;
            let ea = pair.etilde.mul_vec(&a)?;
            let eb = pair.etilde.mul_vec(&b)?;
            let eta = et.mul_vec(&a)?;
            let etb = et.mul_vec(&b)?;
            let ab = pair.euler_pairing(&a, &b)?;
            let ba_pair = pair.euler_pairing(&b, &a)?;
            let checks = [
                lam(&ba, &eb) == pair.d * ab,
                lam(&ba, &etb) == pair.d * ba_pair,
                lam(&ba, &bb) == pair.d * (ba_pair - ab),
                lam(&ea, &eb) == lam(&eta, &etb),
            ];
            for (k, ok) in checks.iter().enumerate() {
                if !ok {
                    failures[k].push(format!("m={a:?} n={b:?}"));
                }
            }
        }
        let names = [
            "Λ(B̃m,Ẽn) = d⟨m,n⟩",
            "Λ(B̃m,Ẽᵗn) = d⟨n,m⟩",
            "Λ(B̃m,B̃n) = d(⟨n,m⟩−⟨m,n⟩)",
            "Λ(Ẽm,Ẽn) = Λ(Ẽᵗm,Ẽᵗn)",
        ];
        for (name, fails) in names.iter().zip(&failures) {
            let detail = match fails.first() {
                None => format!("{PROP34_SAMPLES} random pairs in [−5,5]^{m}"),
                Some(first) => format!("{} of {PROP34_SAMPLES} fail, e.g. {first}", fails.len()),
            };
            cases.check(format!("({spec}) {name}"), fails.is_empty(), detail);
        }
    }
    Ok(cases.finish("prop34"))
}

pub fn p1_relations(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(5);
    let ctx = P1Ctx::new(params.precision_or(16), lmax + 2, 2);
    let mut cases = Cases::default();
    for l in -lmax..=lmax {
        let (a, b, c) = (ctx.x(l), ctx.x(l + 1), ctx.x(l + 2));
        let b2 = prod(&[&b, &b]);
        cases.series(
            format!("exchange l={l}: X_O(l+2)X_O(l) = ν²X_O(l+1)² + 1"),
            prod(&[&c, &a]),
            b2.clone().and_then(|s| s.shift_nu(2).add(&ctx.one())),
            ctx.prec(),
        );
        cases.series(
            format!("reverse exchange l={l}: X_O(l)X_O(l+2) = ν⁻²X_O(l+1)² + 1"),
            prod(&[&a, &c]),
            b2.and_then(|s| s.shift_nu(-2).add(&ctx.one())),
            ctx.prec(),
        );
        cases.series(
            format!("commutation l={l}: X_O(l+1)X_O(l) = ν²X_O(l)X_O(l+1)"),
            prod(&[&b, &a]),
            prod(&[&a, &b]).map(|s| s.shift_nu(2)),
            ctx.prec(),
        );
    }
    Ok(cases.finish("p1_relations"))
}

/// Right-hand side sums of the rank-two product formulas.
fn square_tail(ctx: &P1Ctx, n: i64, odd: bool, conjugate: bool, printed: bool) -> Result<Series> {
    let mut acc = Series::zero(&ctx.p1.torus);
    for l in 0..n {
        let base = if odd {
            2 * (-n + 2 * l) + 1
        } else {
            2 * (-n + 2 * l + 1)
        };
        let exp = match (conjugate, printed && odd) {
            (false, _) => base,
            (true, false) => -base,
            // The printed bar variant of the odd formula reads ν^{−2(−n+2l)+1}.
            (true, true) => -2 * (-n + 2 * l) + 1,
        };
        for i in (l + 1)..=n {
            let k = if odd { 2 * (n - i) + 1 } else { 2 * (n - i) };
            acc = acc.add(&ctx.z(k).shift_nu(exp))?;
        }
    }
    Ok(acc)
}

pub fn lemma54_prop511(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(5);
    let nmax = 4;
    let ctx = P1Ctx::new(params.precision_or(16), lmax + 2 * nmax + 3, 3);
    let mut cases = Cases::default();
    let delta = ctx.delta();
    for l in -lmax..=lmax {
        let (a, b, c, e) = (ctx.x(l), ctx.x(l + 1), ctx.x(l + 2), ctx.x(l + 3));
        cases.series(
            format!("exchange l={l}: X_O(l+2)X_O(l) = ν²X_O(l+1)² + 1"),
            prod(&[&c, &a]),
            prod(&[&b, &b]).and_then(|s| s.shift_nu(2).add(&ctx.one())),
            ctx.prec(),
        );
        cases.series(
            format!("three-step l={l}: X_O(l+3)X_O(l) = ν²X_O(l+2)X_O(l+1) + ν⁻¹X_δ"),
            prod(&[&e, &a]),
            prod(&[&c, &b]).and_then(|s| s.shift_nu(2).add(&delta.shift_nu(-1))),
            ctx.prec(),
        );
        cases.series(
            format!("δ action l={l}: X_δX_O(l) = νX_O(l+1) + ν⁻¹X_O(l−1)"),
            prod(&[&delta, &a]),
            b.shift_nu(1).add(&ctx.x(l - 1).shift_nu(-1)),
            ctx.prec(),
        );
        cases.series(
            format!("bar three-step l={l}: X_O(l)X_O(l+3) = ν⁻²X_O(l+1)X_O(l+2) + νX_δ"),
            prod(&[&a, &e]),
            prod(&[&b, &c]).and_then(|s| s.shift_nu(-2).add(&delta.shift_nu(1))),
            ctx.prec(),
        );
        cases.series(
            format!("bar δ action l={l}: X_O(l)X_δ = ν⁻¹X_O(l+1) + νX_O(l−1)"),
            prod(&[&a, &delta]),
            b.shift_nu(-1).add(&ctx.x(l - 1).shift_nu(1)),
            ctx.prec(),
        );
    }
    let o = ctx.x(0);
    for n in 1..=nmax {
        let (xn, xn1, x2n, x2n1) = (ctx.x(n), ctx.x(n + 1), ctx.x(2 * n), ctx.x(2 * n + 1));
        let sq = prod(&[&xn, &xn]);
        cases.series(
            format!("even product n={n}: X_O(2n)X_O"),
            prod(&[&x2n, &o]),
            sq.clone().and_then(|s| s.shift_nu(2 * n).add(&square_tail(&ctx, n, false, false, false)?)),
            ctx.prec(),
        );
        cases.series(
            format!("odd product n={n}: X_O(2n+1)X_O"),
            prod(&[&x2n1, &o]),
            prod(&[&xn1, &xn]).and_then(|s| s.shift_nu(2 * n).add(&square_tail(&ctx, n, true, false, false)?)),
            ctx.prec(),
        );
        cases.series(
            format!("bar even product n={n}: X_OX_O(2n)"),
            prod(&[&o, &x2n]),
            sq.and_then(|s| s.shift_nu(-2 * n).add(&square_tail(&ctx, n, false, true, false)?)),
            ctx.prec(),
        );
        let odd_bar_rhs = |printed: bool| -> Result<Series> {
            prod(&[&xn, &xn1])?
                .shift_nu(-2 * n)
                .add(&square_tail(&ctx, n, true, true, printed)?)
        };
        cases.series(
            format!("bar odd product n={n}: X_OX_O(2n+1), tail exponent −(2(−n+2l)+1)"),
            prod(&[&o, &x2n1]),
            odd_bar_rhs(false),
            ctx.prec(),
        );
        // The printed tail exponent −2(−n+2l)+1 is recorded, not asserted.
        let printed = prod(&[&o, &x2n1]).and_then(|lhs| {
            Ok(super::compare_series(&lhs, &odd_bar_rhs(true)?, ctx.prec())?.equal)
        });
        cases.check(
            format!("bar odd product n={n}: printed tail exponent −2(−n+2l)+1"),
            true,
            match printed {
                Ok(true) => "printed form also holds".to_string(),
                Ok(false) => "printed form fails; the true conjugate has −(2(−n+2l)+1)".to_string(),
                Err(e) => format!("error: {e}"),
            },
        );
    }
    Ok(cases.finish("lemma54_prop511"))
}

/// Writes `f` in the torsion family `family` by peeling the top monomial
/// `X^{(k,0)}`; returns the coefficients by index, or `None` when some
/// leading coefficient is not a unit or the remainder leaves the span.
fn express_torsion(p1: &P1, f: &Series, family: TorsionFamily) -> Result<Option<BTreeMap<i64, BarLaurent>>> {
    let mut rem = f.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = rem
        .terms()
        .keys()
        .filter(|e| e[1] == 0)
        .map(|e| e[0])
        .max()
    {
        if rem.terms().keys().any(|e| e[1] != 0) || top < 0 {
            return Ok(None);
        }
        let basis = p1.torsion_family(family, top)?;
        let lead = basis.coeff(&[top, 0]);
        let c = rem.coeff(&[top, 0]);
        let Some((sign, shift)) = lead.as_unit() else {
            return Ok(None);
        };
        let coeff = c.shift(-shift).scale_int(sign);
        rem = rem.sub(&basis.scale(&coeff))?;
        out.insert(top, coeff);
    }
    Ok(rem.is_empty().then_some(out))
}

pub fn torsion_lemmas(_params: &SuiteParams) -> Result<SuiteReport> {
    let p1 = P1::new();
    let mut cases = Cases::default();
    let delta = p1.delta();
    for n in 1..=12usize {
        cases.series(
            format!("Chebyshev n={n}: F_n(X_δ) = X_nδ"),
            eval_polynomial(&chebyshev(ChebyshevKind::First, n), &delta),
            Ok(p1.ndelta(n as i64)),
            None,
        );
    }
    for n in 0..=12usize {
        cases.series(
            format!("Chebyshev n={n}: G_n(X_δ) = X_E({n})"),
            eval_polynomial(&chebyshev(ChebyshevKind::Second, n), &delta),
            Ok(p1.indec(n as i64)),
            None,
        );
    }
    for n in 1..=8i64 {
        for m in 1..=n {
            let (zn, zm) = (p1.ndelta(n), p1.ndelta(m));
            let rhs = if n == m {
                p1.ndelta(2 * n).add(&Series::one(&p1.torus).scale(&BarLaurent::constant(2)))
            } else {
                p1.ndelta(n + m).add(&p1.ndelta(n - m))
            };
            let label = if n == m {
                format!("δ products n={n}: X_nδ² = X_2nδ + 2")
            } else {
                format!("δ products n={n} m={m}: X_nδX_mδ = X_(n+m)δ + X_(n−m)δ")
            };
            cases.series(label, zn.mul(&zm), rhs, None);
            if n != m {
                cases.series(
                    format!("δ products n={n} m={m}: X_nδX_mδ = X_mδX_nδ"),
                    zn.mul(&zm),
                    zm.mul(&zn),
                    None,
                );
            }
        }
    }
    for n in 1..=8i64 {
        cases.attempt(format!("δ products n={n}: X_δ^n = X_nδ + lower"), || {
            let power = p1.torsion_family(TorsionFamily::Tor2, n)?;
            let coeffs = express_torsion(&p1, &power, TorsionFamily::Tor1)?;
            Ok(match coeffs {
                Some(c) => {
                    let top = c.get(&n).cloned().unwrap_or_default();
                    (top.is_one() && c.keys().all(|&k| k <= n), format!("coefficients {c:?}"))
                }
                None => (false, "not in the span of X_kδ".into()),
            })
        });
    }
    let families = [
        ("tor1", TorsionFamily::Tor1),
        ("tor2", TorsionFamily::Tor2),
        ("tor3", TorsionFamily::Tor3),
    ];
    for (fa, a) in families {
        for (fb, b) in families {
            if fa == fb {
                continue;
            }
            cases.attempt(format!("family change: {fa} in terms of {fb}, r ≤ 8"), || {
                for r in 0..=8 {
                    let f = p1.torsion_family(a, r)?;
                    match express_torsion(&p1, &f, b)? {
                        Some(c) => {
                            let top = c.get(&r).cloned().unwrap_or_default();
                            if top.as_unit().is_none() || c.keys().any(|&k| k > r) {
                                return Ok((false, format!("r={r}: leading coefficient {top}")));
                            }
                        }
                        None => return Ok((false, format!("r={r}: not expressible"))),
                    }
                }
                Ok((true, "triangular with unit diagonal".into()))
            });
        }
    }
    Ok(cases.finish("torsion_lemmas"))
}

pub fn example33(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(5);
    let ctx = P1Ctx::new(params.precision_or(12), lmax + 2, 2);
    let p1 = &ctx.p1;
    let mut cases = Cases::default();
    let sx = simple_char(&p1.pair, &p1.torus, &p1.pair.point_class());
    cases.series("X_Sx equals X_δ", Ok(sx.clone()), Ok(p1.delta()), None);
    let k = q_minus_one(4);
    let (o, o1, om1, o2) = (ctx.x(0), ctx.x(1), ctx.x(-1), ctx.x(2));
    cases.series(
        "(ν⁴−1)X_O(2)X_O = ν²(ν⁴−1)X_O(1)² + (ν⁴−1)",
        prod(&[&o2, &o]).map(|s| s.scale(&k)),
        prod(&[&o1, &o1]).and_then(|s| s.scale(&k).shift_nu(2).add(&ctx.one().scale(&k))),
        ctx.prec(),
    );
    cases.series(
        "(ν⁴−1)X_SxX_O = ν(ν⁴−1)X_O(1) + ν⁻¹(ν⁴−1)X_O(−1)",
        prod(&[&sx, &o]).map(|s| s.scale(&k)),
        o1.scale(&k).shift_nu(1).add(&om1.scale(&k).shift_nu(-1)),
        ctx.prec(),
    );
    for m in -lmax..=lmax {
        cases.series(
            format!("m={m}: X_SxX_O(m) = νX_O(m+1) + ν⁻¹X_O(m−1)"),
            prod(&[&sx, &ctx.x(m)]),
            ctx.x(m + 1).shift_nu(1).add(&ctx.x(m - 1).shift_nu(-1)),
            ctx.prec(),
        );
    }
    Ok(cases.finish("example33"))
}

pub fn chebyshev_suite(_params: &SuiteParams) -> Result<SuiteReport> {
    let p1 = P1::new();
    let mut cases = Cases::default();
    let g1 = p1.delta();
    for n in 1..=12i64 {
        cases.series(
            format!("G_{}(X_δ) = X_δG_{n}(X_δ) − G_{}(X_δ)", n + 1, n - 1),
            Ok(p1.indec(n + 1)),
            g1.mul(&p1.indec(n)).and_then(|s| s.sub(&p1.indec(n - 1))),
            None,
        );
        cases.series(
            format!("G_{n}(X_δ)X_δ = X_δG_{n}(X_δ)"),
            p1.indec(n).mul(&g1),
            g1.mul(&p1.indec(n)),
            None,
        );
        if n >= 2 {
            cases.series(
                format!("F_{}(X_δ) = X_δF_{n}(X_δ) − F_{}(X_δ)", n + 1, n - 1),
                Ok(p1.ndelta(n + 1)),
                g1.mul(&p1.ndelta(n)).and_then(|s| s.sub(&p1.ndelta(n - 1))),
                None,
            );
        }
    }
    cases.series(
        "F_2(X_δ) = X_δ² − 2",
        Ok(p1.ndelta(2)),
        g1.mul(&g1).and_then(|s| s.sub(&Series::one(&p1.torus).scale(&BarLaurent::constant(2)))),
        None,
    );
    for n in 2..=12usize {
        cases.series(
            format!("F_{n} = G_{n} − G_{}", n - 2),
            Ok(p1.ndelta(n as i64)),
            Ok(p1.indec(n as i64).sub(&p1.indec(n as i64 - 2))?),
            None,
        );
    }
    Ok(cases.finish("chebyshev"))
}

pub fn bases(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(4);
    let rmax = 4u32;
    let p1 = P1::new();
    let precision = p1.precision(params.precision_or(8));
    let mut cases = Cases::default();
    cases.attempt(format!("distinct corners: r ≤ {rmax}, |l| ≤ {lmax}"), || {
        let report = p1.independence_window_check(rmax, lmax)?;
        let ok = report.passed();
        let detail = if ok {
            format!("{} distinct maximal corners equal to −*m", report.entries.len())
        } else {
            format!(
                "corner mismatches {:?}, collisions {:?}",
                report.corner_mismatches, report.collisions
            )
        };
        Ok((ok, detail))
    });
    for r in 1..=rmax {
        for l in -lmax..=lmax {
            for d in 1..=r {
                cases.attempt(format!("bar-invariant ν^(d(r−d))X_O(l)^dX_O(l+1)^(r−d) r={r} l={l} d={d}"), || {
                    let f = p1.bar_basis_element(l, r, d, precision)?;
                    let c = super::compare_series(&f, &f.bar(), Some(precision))?;
                    Ok((c.equal, super::describe(&c)))
                });
            }
        }
    }
    for (name, family) in [
        ("X_nδ", TorsionFamily::Tor1),
        ("X_δ^n", TorsionFamily::Tor2),
        ("X_E(n)", TorsionFamily::Tor3),
    ] {
        cases.attempt(format!("bar-invariant {name}, n ≤ {rmax}"), || {
            for n in 0..=rmax as i64 {
                let f = p1.torsion_family(family, n)?;
                if !f.is_bar_invariant() {
                    return Ok((false, format!("n={n}: {f}")));
                }
            }
            Ok((true, format!("n = 0..{rmax}")))
        });
    }
    Ok(cases.finish("bases"))
}

/// Pairs whose root seeds are checked for bar-invariance.
const BAR_PAIRS: [&str; 4] = ["1,1", "1,1,4", "2,3", "3,3,3"];

pub fn bar_invariance(params: &SuiteParams) -> Result<SuiteReport> {
    let psi = params.precision_or(8);
    let lmax = params.lmax_or(6);
    let mut cases = Cases::default();
    let p1 = P1::new();
    for l in -lmax..=lmax {
        let f = p1.line_bundle(l, p1.precision(psi));
        cases.check(
            format!("X_O({l}) bar-invariant"),
            f.is_bar_invariant(),
            format!("{} terms", f.len()),
        );
    }
    for spec in BAR_PAIRS {
        cases.attempt(format!("({spec}) root seed characters bar-invariant"), || {
            let pair = pair_of(spec)?;
            let s = ClusterState::initial(&pair, pair.d * psi)?;
            for (i, v) in s.vars.iter().enumerate() {
                if !v.is_bar_invariant() {
                    return Ok((false, format!("variable {}", i + 1)));
                }
            }
            Ok((true, format!("{} variables", s.size())))
        });
    }
    for spec in ["1,1", "1,1,4"] {
        cases.attempt(format!("({spec}) root cluster monomials of degree ≤ 2 bar-invariant"), || {
            let pair = pair_of(spec)?;
            // Products lose precision at negative grades; start higher.
            let s = ClusterState::initial(&pair, pair.d * (psi + 8))?;
            let m = s.size();
            let mut checked = 0;
            for i in 0..m {
                for j in i..m {
                    let mut c = vec![0; m];
                    c[i] += 1;
                    c[j] += 1;
                    let f = s.normalized_monomial(&c)?;
                    let cmp = super::compare_series(&f, &f.bar(), Some(pair.d * psi))?;
                    if !cmp.equal {
                        return Ok((false, format!("c={c:?}: {}", super::describe(&cmp))));
                    }
                    checked += 1;
                }
            }
            Ok((true, format!("{checked} monomials")))
        });
    }
    Ok(cases.finish("bar_invariance"))
}

/// The P¹ engine paths reaching `O(l)`: mutating at 1 first walks up, at 2
/// walks down.
pub fn p1_path_to(l: i64) -> Option<(Vec<usize>, usize)> {
    match l {
        0 => None,
        1 => None,
        l if l >= 2 => {
            let path: Vec<usize> = (0..(l - 1)).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
            let last = *path.last().unwrap();
            Some((path, last))
        }
        l => {
            let path: Vec<usize> = (0..(-l)).map(|i| if i % 2 == 0 { 2 } else { 1 }).collect();
            let last = *path.last().unwrap();
            Some((path, last))
        }
    }
}

fn arrows_total(s: &ClusterState) -> i64 {
    s.quiver.r.data.iter().flatten().sum()
}

fn polynomial_counts(s: &ClusterState, k: usize) -> Result<(bool, String)> {
    let counts = fpoly_extract(&s.pair, &s.vars[k], &s.dims[k])?;
    let bad: Vec<&ClassVector> = counts
        .iter()
        .filter(|(_, c)| !c.is_polynomial())
        .map(|(e, _)| e)
        .collect();
    Ok(match bad.first() {
        None => (true, format!("{} coefficients in Z[ν]", counts.len())),
        Some(e) => (false, format!("quotient class {e:?} has coefficient {}", counts[*e])),
    })
}

/// Closes one engine run: bar-invariance and Z[ν] counts of the newest
/// variable, and involutivity of the last step.
fn closure_cases(
    cases: &mut Cases,
    pair: &CompatiblePair,
    label: &str,
    path: &[usize],
    target: i64,
) {
    let k = *path.last().expect("nonempty path");
    let state = run_from_root(pair, path, target);
    let back = state.as_ref().ok().map(|_| {
        let mut longer = path.to_vec();
        longer.push(k);
        run_from_root(pair, &longer, target)
    });
    let before = run_from_root(pair, &path[..path.len() - 1], target);
    cases.attempt(format!("bar/{label} {path:?}"), || {
        let s = state.clone()?;
        let v = &s.vars[k - 1];
        let c = super::compare_series(v, &v.bar(), Some(target))?;
        Ok((c.equal, super::describe(&c)))
    });
    cases.attempt(format!("polynomial/{label} {path:?}"), || polynomial_counts(&state.clone()?, k - 1));
    cases.attempt(format!("involution/{label} {path:?}+[{k}]"), || {
        let twice = back.clone().expect("state computed")?;
        let once = before.clone()?;
        if twice.dims != once.dims || twice.quiver != once.quiver {
            return Ok((false, format!("dims {:?} vs {:?}", twice.dims, once.dims)));
        }
        let c = super::compare_series(&twice.vars[k - 1], &once.vars[k - 1], Some(target))?;
        Ok((c.equal, super::describe(&c)))
    });
}

pub fn mutation_closure(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(6);
    let line_psi = params.precision_or(12);
    let closure_psi = params.precision.unwrap_or(8);
    let mut cases = Cases::default();
    let p1 = P1::new();
    let pair = p1.pair.clone();
    let target = p1.precision(line_psi);
    for l in -lmax..=lmax {
        let Some((path, k)) = p1_path_to(l) else {
            continue;
        };
        cases.attempt(format!("lines/X_O({l}) via {path:?}"), || {
            let s = run_from_root(&pair, &path, target)?;
            let dims_ok = s.dims[k - 1] == vec![1, l];
            let arrows = arrows_total(&s);
            let two_arrow = arrows == 2 && s.quiver.r.data[0][0] == 0 && s.quiver.r.data[1][1] == 0;
            let c = super::compare_series(&s.vars[k - 1], &p1.line_bundle(l, target), Some(target))?;
            Ok((
                dims_ok && two_arrow && c.equal,
                format!("dims {:?}, {arrows} arrows, {}", s.dims[k - 1], super::describe(&c)),
            ))
        });
        cases.attempt(format!("polynomial/lines X_O({l})"), || {
            polynomial_counts(&run_from_root(&pair, &path, target)?, k - 1)
        });
    }
    let p1_target = p1.precision(closure_psi);
    for start in [1usize, 2] {
        for depth in 1..=6usize {
            let path: Vec<usize> = (0..depth)
                .map(|i| if i % 2 == 0 { start } else { 3 - start })
                .collect();
            closure_cases(&mut cases, &pair, "p1", &path, p1_target);
        }
    }
    let big = pair_of("3,3,3")?;
    let big_target = big.d * closure_psi;
    let mutable: Vec<usize> = (1..=big.m).filter(|k| !big.frozen.contains(&(k - 1))).collect();
    for &i in &mutable {
        closure_cases(&mut cases, &big, "333", &[i], big_target);
        for &j in &mutable {
            if j != i {
                closure_cases(&mut cases, &big, "333", &[i, j], big_target);
            }
        }
    }
    Ok(cases.finish("mutation_closure"))
}

/// Field sizes of the Kronecker oracle by default.
pub const ORACLE_FIELDS: [u64; 2] = [2, 3];
/// Modules `V(l)` with `|l| ≤ 3`.
pub const ORACLE_LS: [i64; 5] = [-3, -2, -1, 0, 3];

/// One coefficient of an engine-produced Kronecker variable with the
/// brute-force counts of its subobject class.
#[derive(Clone, Debug)]
pub struct OracleDatum {
    pub l: i64,
    pub sub: Vec<i64>,
    pub quotient: Vec<i64>,
    pub coeff: BarLaurent,
    pub counts: BTreeMap<u64, u64>,
}

/// Collects the oracle data; classes outside `0 ≤ e ≤ v` carried by the
/// engine are returned as errors.
pub fn kronecker_oracle_data(qs: &[u64]) -> Result<Vec<OracleDatum>> {
    let vars = kronecker_variables(-3, 3)?;
    let mut data = Vec::new();
    for l in ORACLE_LS {
        let (n1, n2) = module_dims(l)?;
        let v = vec![n1 as i64, n2 as i64];
        let (_, f) = &vars[&l];
        let mut coeffs = extract_kronecker(f, &v)?;
        for s1 in 0..=n1 {
            for s2 in 0..=n2 {
                let sub = vec![s1 as i64, s2 as i64];
                let quotient = vec![v[0] - sub[0], v[1] - sub[1]];
                let counts = qs
                    .iter()
                    .map(|&q| Ok((q, brute_force_kronecker_grassmannian(l, (s1, s2), q)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let coeff = coeffs.remove(&quotient).unwrap_or_default();
                data.push(OracleDatum {
                    l,
                    sub,
                    quotient,
                    coeff,
                    counts,
                });
            }
        }
        if let Some((e, _)) = coeffs.into_iter().next() {
            return Err(Error::NotCharacterShaped(e));
        }
    }
    Ok(data)
}

/// Whether `coeff = ν^{α⟨s,e⟩ + β⟨e,s⟩}·P(ν^{2d})` with `P(q)` the count.
pub fn oracle_matches(datum: &OracleDatum, alpha: i64, beta: i64, d: i64) -> bool {
    let s = &datum.sub;
    let e = &datum.quotient;
    let shift = alpha * kronecker_pairing(s, e) + beta * kronecker_pairing(e, s);
    let Some(p) = datum.coeff.shift(-shift).unsubstitute_power(2 * d) else {
        return false;
    };
    if !p.is_polynomial() {
        return false;
    }
    datum.counts.iter().all(|(&q, &count)| {
        let value: i128 = p
            .terms()
            .map(|(k, c)| c * (q as i128).pow(k as u32))
            .sum();
        value == count as i128
    })
}

/// Every `(α, β)` in `[−4, 4]²` fitting all data.
pub fn fit_oracle(data: &[OracleDatum], d: i64) -> Vec<(i64, i64)> {
    let mut fits = Vec::new();
    for alpha in -4..=4 {
        for beta in -4..=4 {
            if data.iter().all(|x| oracle_matches(x, alpha, beta, d)) {
                fits.push((alpha, beta));
            }
        }
    }
    fits
}

pub fn kronecker_oracle(params: &SuiteParams) -> Result<SuiteReport> {
    let lmax = params.lmax_or(6);
    let qs = params.q.clone().unwrap_or_else(|| ORACLE_FIELDS.to_vec());
    let mut cases = Cases::default();
    match kronecker_variables(-lmax, lmax.max(2)) {
        Ok(vars) => {
            for l in (-lmax + 2)..=lmax {
                let (Some((_, a)), Some((_, b)), Some((_, c))) =
                    (vars.get(&(l - 2)), vars.get(&(l - 1)), vars.get(&l))
                else {
                    continue;
                };
                cases.series(
                    format!("A(2,2) l={l}: X_V(l−2)X_V(l) = ν²X_V(l−1)² + 1"),
                    a.mul(c),
                    b.mul(b).and_then(|s| s.shift_nu(2).add(&Series::one(s.torus()))),
                    None,
                );
            }
            for l in (-lmax + 1)..=lmax {
                let (Some((_, b)), Some((_, c))) = (vars.get(&(l - 1)), vars.get(&l)) else {
                    continue;
                };
                cases.series(
                    format!("A(2,2) l={l}: X_V(l−1)X_V(l) = ν²X_V(l)X_V(l−1)"),
                    b.mul(c),
                    c.mul(b).map(|s| s.shift_nu(2)),
                    None,
                );
            }
            let classes_ok = vars.iter().all(|(l, (dim, _))| dim == &vec![1, -l]);
            cases.check(
                format!("V(l) has the class of O(−l), |l| ≤ {lmax}"),
                classes_ok,
                format!("{} variables", vars.len()),
            );
        }
        Err(e) => cases.check("Kronecker engine", false, format!("error: {e}")),
    }
    let ctx = P1Ctx::new(params.precision_or(12), lmax + 2, 2);
    for l in (-lmax + 2)..=lmax {
        let (a, b, c) = (ctx.x(-(l - 2)), ctx.x(-(l - 1)), ctx.x(-l));
        cases.series(
            format!("κ l={l}: X_O(2−l)X_O(−l) = ν²X_O(1−l)² + 1"),
            prod(&[&a, &c]),
            prod(&[&b, &b]).and_then(|s| s.shift_nu(2).add(&ctx.one())),
            ctx.prec(),
        );
    }
    for l in (-lmax + 1)..=lmax {
        let (b, c) = (ctx.x(-(l - 1)), ctx.x(-l));
        cases.series(
            format!("κ l={l}: X_O(1−l)X_O(−l) = ν²X_O(−l)X_O(1−l)"),
            prod(&[&b, &c]),
            prod(&[&c, &b]).map(|s| s.shift_nu(2)),
            ctx.prec(),
        );
    }
    let d = CompatiblePair::p1().d;
    cases.attempt("oracle: one global prefactor ν^(α⟨s,e⟩+β⟨e,s⟩) in [−4,4]²", || {
        let data = kronecker_oracle_data(&qs)?;
        let fits = fit_oracle(&data, d);
        Ok((
            fits.len() == 1,
            format!("{} coefficients over F_q, q ∈ {qs:?}; fits {fits:?}", data.len()),
        ))
    });
    cases.attempt("oracle: counts match under α = −d, β = 0", || {
        let data = kronecker_oracle_data(&qs)?;
        let bad: Vec<String> = data
            .iter()
            .filter(|x| !oracle_matches(x, -d, 0, d))
            .map(|x| format!("V({}) s={:?}: {} vs {:?}", x.l, x.sub, x.coeff, x.counts))
            .collect();
        Ok((bad.is_empty(), bad.first().cloned().unwrap_or_else(|| "all coefficients".into())))
    });
    Ok(cases.finish("kronecker_oracle"))
}
