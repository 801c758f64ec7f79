//! Quantum cluster characters: closed forms on P¹, line bundles and simple
//! torsion sheaves on general weighted projective lines, Chebyshev torsion
//! elements and the standard basis families.
//!
//! A character of a class `m` is `Σ_s ν^{−d⟨s,e⟩}·|Gr_s|(ν^{2d})·X^{−s*−*e}`,
//! summed over subobject classes `s` with quotient class `e = m − s`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kzero::{ClassVector, CompatiblePair, GradeVector};
use crate::laurent::BarLaurent;
use crate::series::{Exponent, Series, Torus};

/// Exponent `−s* − *e` of the term with subobject class `s`, quotient `e`.
pub fn character_exponent(pair: &CompatiblePair, s: &[i64], e: &[i64]) -> Exponent {
    let ss = pair.star_right(s).expect("length");
    let se = pair.star_left(e).expect("length");
    ss.iter().zip(&se).map(|(a, b)| -a - b).collect()
}

/// Character of the line bundle `O(x)`, x in L(p̃), up to `precision`
/// (units of 1/d). Subobjects are `O(x − y)` with `y ≥ 0`; there are
/// `[h0(y)]` of each class.
pub fn line_bundle_char(
    pair: &CompatiblePair,
    torus: &Arc<Torus>,
    x: &GradeVector,
    precision: i64,
) -> Series {
    let m = pair.line_bundle_class(x);
    let d = pair.d;
    let mut terms = vec![(
        character_exponent(pair, &vec![0; pair.m], &m),
        BarLaurent::one(),
    )];
    let weights = &pair.p_tilde.weights;
    let mut residue = vec![0i64; weights.len()];
    loop {
        for y0 in 0.. {
            let y = GradeVector::new(y0, residue.clone());
            let s = pair.line_bundle_class(&x.sub(&y));
            let e: ClassVector = m.iter().zip(&s).map(|(a, b)| a - b).collect();
            let exp = character_exponent(pair, &s, &e);
            // Each step in y0 raises the grade by d·u′(Ŝx) > 0.
            if torus.grade(&exp) > precision {
                break;
            }
            let pairing = pair.euler_pairing(&s, &e).expect("length");
            let count = BarLaurent::quantum_integer(pair.h0(&y), 2 * d);
            terms.push((exp, count.shift(-d * pairing)));
        }
        if !next_residue(&mut residue, weights) {
            break;
        }
    }
    Series::from_terms(torus, terms, Some(precision))
}

fn next_residue(r: &mut [i64], weights: &[u32]) -> bool {
    for (x, &w) in r.iter_mut().zip(weights) {
        *x += 1;
        if *x < w as i64 {
            return true;
        }
        *x = 0;
    }
    false
}

/// Character of a sheaf whose only subobjects are 0 and itself (a simple
/// torsion sheaf): `X^{−*e} + X^{−e*}`.
pub fn simple_char(pair: &CompatiblePair, torus: &Arc<Torus>, e: &[i64]) -> Series {
    let zero = vec![0; pair.m];
    Series::from_terms(
        torus,
        [
            (character_exponent(pair, &zero, e), BarLaurent::one()),
            (character_exponent(pair, e, &zero), BarLaurent::one()),
        ],
        None,
    )
}

/// Recovers `e ↦ |Gr|` from a character-shaped series of class `m`: each
/// exponent `a = −m* + B̃e` is inverted and the prefactor `ν^{−d⟨m−e,e⟩}`
/// removed. The returned counts are polynomials in ν (in `ν^{2d}` for
/// sheaves).
pub fn fpoly_extract(
    pair: &CompatiblePair,
    f: &Series,
    m: &[i64],
) -> Result<BTreeMap<ClassVector, BarLaurent>> {
    let mstar = pair.star_right(m)?;
    let mut out = BTreeMap::new();
    for (a, c) in f.terms() {
        let shifted: Vec<i64> = a.iter().zip(&mstar).map(|(x, y)| x + y).collect();
        let e = pair
            .btilde_preimage(&shifted)
            .ok_or_else(|| Error::NotCharacterShaped(a.clone()))?;
        let s: Vec<i64> = m.iter().zip(&e).map(|(x, y)| x - y).collect();
        let pairing = pair.euler_pairing(&s, &e)?;
        out.insert(e, c.shift(pair.d * pairing));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebyshevKind {
    First,
    Second,
}

/// Integer coefficients (index = power) of `F_n` or `G_n`:
/// `F_2 = x² − 2`, `G_2 = x² − 1`, then `P_{n+1} = x·P_n − P_{n−1}`.
pub fn chebyshev(kind: ChebyshevKind, n: usize) -> Vec<i64> {
    let p2 = match kind {
        ChebyshevKind::First => vec![-2, 0, 1],
        ChebyshevKind::Second => vec![-1, 0, 1],
    };
    let mut seq = vec![vec![1], vec![0, 1], p2];
    while seq.len() <= n {
        let k = seq.len();
        let mut next = vec![0; k + 1];
        for (i, c) in seq[k - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in seq[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        seq.push(next);
    }
    seq.swap_remove(n)
}

/// Evaluates an integer polynomial at a torus element.
pub fn eval_polynomial(coeffs: &[i64], x: &Series) -> Result<Series> {
    let t = x.torus();
    let mut acc = Series::zero(t);
    let mut power = Series::one(t);
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = power.mul(x)?;
        }
        if c != 0 {
            acc = acc.add(&power.scale(&BarLaurent::constant(c as i128)))?;
        }
    }
    Ok(acc)
}

/// The projective line with its characters in closed form.
#[derive(Clone, Debug)]
pub struct P1 {
    pub pair: CompatiblePair,
    pub torus: Arc<Torus>,
}

impl Default for P1 {
    fn default() -> Self {
        Self::new()
    }
}

impl P1 {
    pub fn new() -> Self {
        let pair = CompatiblePair::p1();
        let torus = Torus::from_pair(&pair);
        P1 { pair, torus }
    }

    /// Precision in units of 1/d for a ψ-bound.
    pub fn precision(&self, psi: i64) -> i64 {
        psi * self.pair.d
    }

    /// `X_{O(l)} = X^{−(1+l,−1)} + Σ_{r≥−l} ν^{−2(l+r)}[l+r+1]_{ν⁴} X^{−(l+2r+1,1)}`.
    pub fn line_bundle(&self, l: i64, precision: i64) -> Series {
        let mut terms = vec![(vec![-(1 + l), 1], BarLaurent::one())];
        for r in -l.. {
            let exp = vec![-(l + 2 * r + 1), -1];
            if self.torus.grade(&exp) > precision {
                break;
            }
            let c = BarLaurent::quantum_integer(l + r + 1, 4).shift(-2 * (l + r));
            terms.push((exp, c));
        }
        Series::from_terms(&self.torus, terms, Some(precision))
    }

    /// Simple torsion sheaf at a point of degree `deg`: `X^{−(deg,0)} + X^{(deg,0)}`.
    pub fn torsion_simple(&self, deg: i64) -> Series {
        self.ndelta(deg)
    }

    /// `X_{nδ} = X^{−(n,0)} + X^{(n,0)}`.
    pub fn ndelta(&self, n: i64) -> Series {
        Series::from_terms(
            &self.torus,
            [
                (vec![-n, 0], BarLaurent::one()),
                (vec![n, 0], BarLaurent::one()),
            ],
            None,
        )
    }

    /// `X_δ`.
    pub fn delta(&self) -> Series {
        self.ndelta(1)
    }

    /// Indecomposable torsion sheaf of length n at a degree-one point:
    /// `Σ_{l=0}^{n} X^{−(n−2l,0)}`.
    pub fn indec(&self, n: i64) -> Series {
        Series::from_terms(
            &self.torus,
            (0..=n).map(|l| (vec![-(n - 2 * l), 0], BarLaurent::one())),
            None,
        )
    }

    pub fn class_of_line_bundle(&self, l: i64) -> ClassVector {
        vec![1, l]
    }

    /// `X_{O(l)}^dd · X_{O(l+1)}^{r−dd}`, truncated at `precision`.
    pub fn cr_element(&self, l: i64, r: u32, dd: u32, precision: i64) -> Result<Series> {
        let work = self.product_working_precision(l, r, precision);
        let a = self.line_bundle(l, work).pow(dd)?;
        let b = self.line_bundle(l + 1, work).pow(r - dd)?;
        Ok(a.mul(&b)?.truncate(precision))
    }

    /// The bar-invariant normalization `ν^{dd(r−dd)} X_{O(l)}^dd X_{O(l+1)}^{r−dd}`.
    pub fn bar_basis_element(&self, l: i64, r: u32, dd: u32, precision: i64) -> Result<Series> {
        Ok(self
            .cr_element(l, r, dd, precision)?
            .shift_nu((dd * (r - dd)) as i64))
    }

    /// Per-factor precision so that an r-fold product is known up to `precision`.
    fn product_working_precision(&self, l: i64, r: u32, precision: i64) -> i64 {
        // ψ of the two corners of X_{O(k)} is k + 3/2 and −k + 1/2.
        let floor = |k: i64| (2 * k + 3).min(-2 * k + 1);
        let lowest = floor(l).min(floor(l + 1));
        precision - (r as i64 - 1) * lowest.min(0)
    }
}

/// Torsion basis families of the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorsionFamily {
    /// `X_{rδ}` (with `X_{0δ}` read as the unit).
    Tor1,
    /// `X_δ^r`.
    Tor2,
    /// `X_{E^{(r)}}`.
    Tor3,
}

impl P1 {
    pub fn torsion_family(&self, family: TorsionFamily, r: i64) -> Result<Series> {
        match family {
            TorsionFamily::Tor1 if r == 0 => Ok(Series::one(&self.torus)),
            TorsionFamily::Tor1 => Ok(self.ndelta(r)),
            TorsionFamily::Tor2 => self.delta().pow(r as u32),
            TorsionFamily::Tor3 => Ok(self.indec(r)),
        }
    }
}

/// Families of bar-invariant bases on the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFamily {
    /// `X_{O(l)}^d X_{O(l+1)}^{r−d}`.
    Cr,
    /// `ν^{d(r−d)} X_{O(l)}^d X_{O(l+1)}^{r−d}`.
    BarB,
    Tor1,
    Tor2,
    Tor3,
}

/// One entry of the independence window: `(r, l, d)` (torsion powers
/// `X_δ^n` as `(0, 0, n)`), its class `m` and maximal corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub r: u32,
    pub l: i64,
    pub d: u32,
    pub class: ClassVector,
    pub corner: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub entries: Vec<WindowEntry>,
    /// Entries whose computed corner differs from `−*m`.
    pub corner_mismatches: Vec<WindowEntry>,
    /// Pairs of entries sharing a corner.
    pub collisions: Vec<(WindowEntry, WindowEntry)>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.corner_mismatches.is_empty() && self.collisions.is_empty()
    }
}

impl P1 {
    /// Element of a basis family. `r, l, d` index the line-bundle families;
    /// the torsion families read `r` only.
    pub fn basis_family(
        &self,
        family: BasisFamily,
        r: u32,
        l: i64,
        d: u32,
        precision: i64,
    ) -> Result<Series> {
        match family {
            BasisFamily::Cr => self.cr_element(l, r, d, precision),
            BasisFamily::BarB => self.bar_basis_element(l, r, d, precision),
            BasisFamily::Tor1 => self.torsion_family(TorsionFamily::Tor1, r as i64),
            BasisFamily::Tor2 => self.torsion_family(TorsionFamily::Tor2, r as i64),
            BasisFamily::Tor3 => self.torsion_family(TorsionFamily::Tor3, r as i64),
        }
    }

    /// `d·[O(l)] + (r−d)·[O(l+1)]`.
    pub fn window_class(&self, r: u32, l: i64, d: u32) -> ClassVector {
        let a = self.class_of_line_bundle(l);
        let b = self.class_of_line_bundle(l + 1);
        a.iter()
            .zip(&b)
            .map(|(x, y)| d as i64 * x + (r - d) as i64 * y)
            .collect()
    }

    /// Computes every `ν^{d(r−d)}X_{O(l)}^d X_{O(l+1)}^{r−d}` with
    /// `1 ≤ d ≤ r ≤ r_max`, `|l| ≤ l_max`, and `X_δ^n` for `n ≤ r_max`, reads
    /// off the maximal corner of each and checks it equals `−*m` and that no
    /// two entries share it.
    pub fn independence_window_check(&self, r_max: u32, l_max: i64) -> Result<WindowReport> {
        let mut entries = Vec::new();
        let mut mismatches = Vec::new();
        let mut push = |r: u32, l: i64, d: u32, class: ClassVector, f: &Series| -> Result<()> {
            let corner = crate::series::max_corner(&self.pair, f)?;
            let expected: Exponent = self.pair.star_left(&class)?.iter().map(|x| -x).collect();
            let entry = WindowEntry {
                r,
                l,
                d,
                class,
                corner,
            };
            if entry.corner != expected {
                mismatches.push(entry.clone());
            }
            entries.push(entry);
            Ok(())
        };
        for r in 1..=r_max {
            for l in -l_max..=l_max {
                for d in 1..=r {
                    let class = self.window_class(r, l, d);
                    let top: Exponent = self.pair.star_left(&class)?.iter().map(|x| -x).collect();
                    let f = self.bar_basis_element(l, r, d, self.torus.grade(&top).max(0))?;
                    push(r, l, d, class, &f)?;
                }
            }
        }
        for n in 1..=r_max {
            let class: ClassVector = self.pair.point_class().iter().map(|x| x * n as i64).collect();
            let f = self.torsion_family(TorsionFamily::Tor2, n as i64)?;
            push(0, 0, n, class, &f)?;
        }
        let mut seen: BTreeMap<Exponent, WindowEntry> = BTreeMap::new();
        let mut collisions = Vec::new();
        for e in &entries {
            if let Some(prev) = seen.insert(e.corner.clone(), e.clone()) {
                collisions.push((prev, e.clone()));
            }
        }
        Ok(WindowReport {
            entries,
            corner_mismatches: mismatches,
            collisions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_line_bundle_first_terms() {
        let p1 = P1::new();
        let x = p1.line_bundle(0, p1.precision(3));
        assert_eq!(x.len(), 3);
        assert_eq!(x.coeff(&[-1, 1]), BarLaurent::one());
        assert_eq!(x.coeff(&[-1, -1]), BarLaurent::one());
        assert_eq!(
            x.coeff(&[-3, -1]),
            BarLaurent::from_terms([(-2, 1), (2, 1)])
        );
    }

    #[test]
    fn general_rule_matches_closed_form_on_p1() {
        let p1 = P1::new();
        for l in -6..=6 {
            let prec = p1.precision(12);
            let closed = p1.line_bundle(l, prec);
            let general =
                line_bundle_char(&p1.pair, &p1.torus, &GradeVector::multiple_of_c(l, 2), prec);
            assert_eq!(closed, general, "l = {l}");
        }
    }

    #[test]
    fn chebyshev_polynomials() {
        assert_eq!(chebyshev(ChebyshevKind::First, 2), vec![-2, 0, 1]);
        assert_eq!(chebyshev(ChebyshevKind::Second, 2), vec![-1, 0, 1]);
        assert_eq!(chebyshev(ChebyshevKind::First, 3), vec![0, -3, 0, 1]);
        assert_eq!(chebyshev(ChebyshevKind::First, 0), vec![1]);
    }

    #[test]
    fn torsion_closed_forms() {
        let p1 = P1::new();
        assert_eq!(p1.torsion_simple(1).terms().len(), 2);
        let e2 = p1.indec(2);
        assert_eq!(
            e2.terms().keys().cloned().collect::<Vec<_>>(),
            vec![vec![-2, 0], vec![0, 0], vec![2, 0]]
        );
        assert_eq!(p1.indec(0), Series::one(&p1.torus));
        let sx = simple_char(&p1.pair, &p1.torus, &p1.pair.point_class());
        assert_eq!(sx, p1.delta());
    }

    #[test]
    fn extraction_of_counts() {
        let p1 = P1::new();
        let f = p1.line_bundle(1, p1.precision(10));
        let counts = fpoly_extract(&p1.pair, &f, &[1, 1]).unwrap();
        assert_eq!(counts[&vec![1, 1]], BarLaurent::one());
        assert_eq!(counts[&vec![0, 0]], BarLaurent::one());
        assert_eq!(counts[&vec![0, 1]], BarLaurent::quantum_integer(2, 4));
        assert_eq!(counts[&vec![0, 2]], BarLaurent::quantum_integer(3, 4));
        assert!(counts.values().all(BarLaurent::is_polynomial));
    }

    #[test]
    fn window_corners_are_distinct() {
        let p1 = P1::new();
        let report = p1.independence_window_check(3, 2).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.entries.len(), 6 * 5 + 3);
        for e in &report.entries {
            assert_eq!(e.corner[1], e.r as i64);
        }
    }
}
