//! The quantum torus T_Λ and its graded completion.
//!
//! A [`Series`] is a Z[ν^{±1}]-combination of monomials `X^a` together with a
//! precision `P`: every monomial with ψ(a) ≤ P is present with its exact
//! coefficient, nothing is claimed above `P`. Exact (finite) elements carry
//! no precision. Grades and precisions are stored as integers in units of
//! `1/d`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kzero::CompatiblePair;
use crate::laurent::{BarLaurent, QuadraticNumber};
use crate::matrix::{dot, IntMatrix};

pub type Exponent = Vec<i64>;

/// Multiplication data of a quantum torus: `X^a X^b = ν^{aᵗTb} X^{a+b}`,
/// graded by `grade_row·a / d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    pub key: String,
    pub m: usize,
    pub d: i64,
    pub twist: IntMatrix,
    pub grade_row: Vec<i64>,
}

impl Torus {
    /// Torus of a compatible pair: the twist is the integral `Λ` itself.
    pub fn from_pair(pair: &CompatiblePair) -> Arc<Torus> {
        let twist = pair.lambda.clone();
        Arc::new(Torus {
            key: pair.p_tilde.to_string(),
            m: pair.m,
            d: pair.d,
            twist,
            grade_row: pair.grade_row.clone(),
        })
    }

    pub fn grade(&self, a: &[i64]) -> i64 {
        dot(&self.grade_row, a)
    }

    pub fn twist_exponent(&self, a: &[i64], b: &[i64]) -> i64 {
        self.twist.bilinear(a, b)
    }
}

#[derive(Clone)]
pub struct Series {
    torus: Arc<Torus>,
    terms: BTreeMap<Exponent, BarLaurent>,
    precision: Option<i64>,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.torus.key == other.torus.key
            && self.precision == other.precision
            && self.terms == other.terms
    }
}

impl Series {
    pub fn zero(torus: &Arc<Torus>) -> Self {
        Series {
            torus: torus.clone(),
            terms: BTreeMap::new(),
            precision: None,
        }
    }

    pub fn one(torus: &Arc<Torus>) -> Self {
        Self::monomial(torus, vec![0; torus.m], BarLaurent::one())
    }

    pub fn monomial(torus: &Arc<Torus>, exp: Exponent, coeff: BarLaurent) -> Self {
        assert_eq!(exp.len(), torus.m, "exponent length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Series {
            torus: torus.clone(),
            terms,
            precision: None,
        }
    }

    /// Builds a series from terms, dropping everything above `precision`.
    pub fn from_terms<I>(torus: &Arc<Torus>, terms: I, precision: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (Exponent, BarLaurent)>,
    {
        let mut out = Series {
            torus: torus.clone(),
            terms: BTreeMap::new(),
            precision,
        };
        for (e, c) in terms {
            assert_eq!(e.len(), torus.m, "exponent length");
            if precision.is_some_and(|p| torus.grade(&e) > p) {
                continue;
            }
            let slot = out.terms.entry(e).or_insert_with(BarLaurent::zero);
            slot.add_assign_ref(&c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn torus(&self) -> &Arc<Torus> {
        &self.torus
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BarLaurent> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> BarLaurent {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    fn same_torus(&self, other: &Series) -> Result<()> {
        if Arc::ptr_eq(&self.torus, &other.torus) || *self.torus == *other.torus {
            Ok(())
        } else {
            Err(Error::PairMismatch)
        }
    }

    /// Smallest stored grade, or `None` for the zero series.
    pub fn min_stored_grade(&self) -> Option<i64> {
        self.terms.keys().map(|e| self.torus.grade(e)).min()
    }

    /// Lower bound for the grade of every monomial of the true element.
    fn grade_floor(&self) -> Option<i64> {
        match (self.min_stored_grade(), self.precision) {
            (Some(g), Some(p)) => Some(g.min(p)),
            (Some(g), None) => Some(g),
            (None, p) => p,
        }
    }

    /// Drops terms above `p` and lowers the precision to at most `p`.
    pub fn truncate(&self, p: i64) -> Series {
        let cap = self.precision.map_or(p, |q| q.min(p));
        let precision = Some(cap);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| self.torus.grade(e) <= cap)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Series {
            torus: self.torus.clone(),
            terms,
            precision,
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.same_torus(other)?;
        let precision = min_precision(self.precision, other.precision);
        let terms = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|(e, c)| (e.clone(), c.clone()));
        Ok(Series::from_terms(&self.torus, terms, precision))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.scale(&BarLaurent::constant(-1))
    }

    /// Multiplies every coefficient by `c`; the precision is unchanged.
    pub fn scale(&self, c: &BarLaurent) -> Series {
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c));
        let mut out = Series::from_terms(&self.torus, terms, None);
        out.precision = self.precision;
        out
    }

    /// Multiplies by `ν^k`.
    pub fn shift_nu(&self, k: i64) -> Series {
        Series {
            torus: self.torus.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.shift(k)))
                .collect(),
            precision: self.precision,
        }
    }

    /// Twisted product. Output precision is `min(P_f + minψ(g), P_g + minψ(f))`.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.mul_capped(other, None)
    }

    /// Twisted product truncated at `cap`; terms above it are never formed.
    pub fn mul_truncated(&self, other: &Series, cap: i64) -> Result<Series> {
        self.mul_capped(other, Some(cap))
    }

    fn mul_capped(&self, other: &Series, cap: Option<i64>) -> Result<Series> {
        self.same_torus(other)?;
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            _ if (self.is_exact() && self.is_empty()) || (other.is_exact() && other.is_empty()) => {
                None
            }
            (pf, pg) => {
                let a = pf.map(|p| p + other.grade_floor().unwrap_or(p));
                let b = pg.map(|p| p + self.grade_floor().unwrap_or(p));
                min_precision(a, b)
            }
        };
        let precision = min_precision(precision, cap);
        let t = &self.torus;
        let mut right: Vec<(i64, &Exponent, &BarLaurent)> = other
            .terms
            .iter()
            .map(|(e, c)| (t.grade(e), e, c))
            .collect();
        right.sort_by_key(|x| x.0);
        let mut acc: HashMap<Exponent, BarLaurent> = HashMap::new();
        for (ea, ca) in &self.terms {
            let ga = t.grade(ea);
            let ta: Vec<i64> = (0..t.m)
                .map(|j| (0..t.m).map(|i| ea[i] * t.twist.data[i][j]).sum())
                .collect();
            for &(gb, eb, cb) in &right {
                if precision.is_some_and(|p| ga + gb > p) {
                    break;
                }
                let k = dot(&ta, eb);
                let exp: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = (ca * cb).shift(k);
                acc.entry(exp).or_default().add_assign_ref(&prod);
            }
        }
        let mut terms: BTreeMap<Exponent, BarLaurent> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let Some(p) = precision {
            terms.retain(|e, _| t.grade(e) <= p);
        }
        Ok(Series {
            torus: t.clone(),
            terms,
            precision,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Series> {
        let mut acc = Series::one(&self.torus);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// ν ↦ ν⁻¹ on coefficients, monomials fixed.
    pub fn bar(&self) -> Series {
        Series {
            torus: self.torus.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.bar()))
                .collect(),
            precision: self.precision,
        }
    }

    /// Compares with `other` on all monomials up to the common precision
    /// (optionally lowered to `limit`). Returns the first discrepancy.
    pub fn compare(&self, other: &Series, limit: Option<i64>) -> Result<Option<Discrepancy>> {
        self.same_torus(other)?;
        let p = min_precision(min_precision(self.precision, other.precision), limit);
        let keys: std::collections::BTreeSet<&Exponent> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for e in keys {
            if p.is_some_and(|p| self.torus.grade(e) > p) {
                continue;
            }
            let a = self.coeff(e);
            let b = other.coeff(e);
            if a != b {
                return Ok(Some(Discrepancy {
                    exponent: e.clone(),
                    left: a,
                    right: b,
                }));
            }
        }
        Ok(None)
    }

    pub fn agrees_with(&self, other: &Series) -> bool {
        matches!(self.compare(other, None), Ok(None))
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.agrees_with(&self.bar())
    }

    /// The unique term of minimal grade.
    pub fn min_grade_term(&self) -> Option<(&Exponent, &BarLaurent)> {
        let g = self.min_stored_grade()?;
        let mut it = self.terms.iter().filter(|(e, _)| self.torus.grade(e) == g);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    /// Inverse in the completion, exact up to `target`, by a Neumann series
    /// around the minimal-grade corner `c·X^γ` (c = ±ν^j).
    pub fn conic_invert(&self, target: i64) -> Result<Series> {
        let (gamma, c) = self.min_grade_term().ok_or(Error::NotConic)?;
        let (sign, j) = c.as_unit().ok_or(Error::NotConic)?;
        let t = &self.torus;
        let g = t.grade(gamma);
        let neg: Exponent = gamma.iter().map(|x| -x).collect();
        let corner_inv = Series::monomial(t, neg, BarLaurent::monomial(sign, -j));
        if self.is_exact() && self.len() == 1 {
            return Ok(corner_inv);
        }
        let rel_target = target + g;
        let needed = rel_target + g;
        if let Some(p) = self.precision {
            if p < needed {
                return Err(Error::InsufficientPrecision {
                    needed,
                    available: p,
                    den: t.d,
                });
            }
        }
        let normalized = corner_inv.mul_truncated(self, rel_target)?;
        let h = normalized.sub(&Series::one(t))?.neg();
        let mut acc = Series::one(t).truncate(rel_target);
        let mut power = Series::one(t);
        loop {
            power = power.mul_truncated(&h, rel_target)?;
            if power.is_empty() {
                break;
            }
            acc = acc.add(&power)?;
        }
        let mut out = acc.mul_truncated(&corner_inv, target)?;
        out.precision = Some(target);
        Ok(out)
    }

    /// `Q` with `Q·divisor = self`, known up to at most `cap`: grade levels
    /// of the remainder are peeled off against the minimal-grade corner of
    /// the divisor, so the full inverse is never formed.
    pub fn right_divide(&self, divisor: &Series, cap: i64) -> Result<Series> {
        self.same_torus(divisor)?;
        let t = &self.torus;
        let (gamma, c) = divisor.min_grade_term().ok_or(Error::NotConic)?;
        let (sign, j) = c.as_unit().ok_or(Error::NotConic)?;
        let g = t.grade(gamma);
        let q_floor = self.grade_floor().unwrap_or(cap + 2 * g) - g;
        let mut valid = cap + g;
        if let Some(p) = self.precision {
            valid = valid.min(p);
        }
        if let Some(p) = divisor.precision {
            valid = valid.min(p + q_floor);
        }
        let divisor_terms: Vec<(i64, &Exponent, &BarLaurent)> = divisor
            .terms
            .iter()
            .map(|(e, c)| (t.grade(e), e, c))
            .collect();
        let mut rem: BTreeMap<(i64, Exponent), BarLaurent> = self
            .terms
            .iter()
            .map(|(e, c)| ((t.grade(e), e.clone()), c.clone()))
            .filter(|((ge, _), _)| *ge <= valid)
            .collect();
        let mut quotient = BTreeMap::new();
        while let Some((&(level, _), _)) = rem.iter().next() {
            let mut batch = Vec::new();
            while let Some(entry) = rem.first_entry() {
                if entry.key().0 != level {
                    break;
                }
                let ((_, e), coeff) = entry.remove_entry();
                let q: Exponent = e.iter().zip(gamma).map(|(x, y)| x - y).collect();
                let tw = t.twist_exponent(&q, gamma);
                batch.push((q, coeff.shift(-j - tw).scale_int(sign)));
            }
            for (q, qc) in &batch {
                let gq = t.grade(q);
                let tq: Vec<i64> = (0..t.m)
                    .map(|jj| (0..t.m).map(|i| q[i] * t.twist.data[i][jj]).sum())
                    .collect();
                for &(gb, eb, cb) in &divisor_terms {
                    if gq + gb > valid || eb == gamma {
                        continue;
                    }
                    let key = (gq + gb, q.iter().zip(eb).map(|(x, y)| x + y).collect());
                    let prod = (qc * cb).shift(dot(&tq, eb)).scale_int(-1);
                    let slot = rem.entry(key.clone()).or_default();
                    slot.add_assign_ref(&prod);
                    if slot.is_zero() {
                        rem.remove(&key);
                    }
                }
            }
            quotient.extend(batch);
        }
        Ok(Series::from_terms(t, quotient, Some(valid - g)))
    }

    /// Exact right division: `Q` with `Q·divisor = self`, for finite elements.
    pub fn right_divide_exact(&self, divisor: &Series) -> Result<Series> {
        self.divide_exact(divisor, false)
    }

    /// Exact left division: `Q` with `divisor·Q = self`, for finite elements.
    pub fn left_divide_exact(&self, divisor: &Series) -> Result<Series> {
        self.divide_exact(divisor, true)
    }

    fn divide_exact(&self, divisor: &Series, left: bool) -> Result<Series> {
        self.same_torus(divisor)?;
        if !self.is_exact() || !divisor.is_exact() {
            return Err(Error::NotDivisible);
        }
        let t = &self.torus;
        let (lead_exp, lead_coeff) = divisor
            .terms
            .iter()
            .next_back()
            .ok_or(Error::NotDivisible)?;
        let (sign, k) = lead_coeff.as_unit().ok_or(Error::NotDivisible)?;
        let floor: Option<Exponent> = match (self.terms.keys().next(), divisor.terms.keys().next())
        {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            _ => None,
        };
        let mut rem = self.clone();
        let mut quotient = Series::zero(t);
        while let Some((exp, coeff)) = rem.terms.iter().next_back() {
            let q_exp: Exponent = exp.iter().zip(lead_exp).map(|(x, y)| x - y).collect();
            if floor.as_ref().is_some_and(|f| q_exp < *f) {
                return Err(Error::NotDivisible);
            }
            let tw = if left {
                t.twist_exponent(lead_exp, &q_exp)
            } else {
                t.twist_exponent(&q_exp, lead_exp)
            };
            let q_coeff = coeff.shift(-k - tw).scale_int(sign);
            let term = Series::monomial(t, q_exp, q_coeff);
            let prod = if left {
                divisor.mul(&term)?
            } else {
                term.mul(divisor)?
            };
            rem = rem.sub(&prod)?;
            quotient = quotient.add(&term)?;
        }
        Ok(quotient)
    }

    /// Evaluates every coefficient at ν = √q.
    pub fn specialize(&self, q: i128) -> BTreeMap<Exponent, QuadraticNumber> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.eval_sqrt(q)))
            .collect()
    }

    /// Largest absolute integer coefficient.
    pub fn max_coefficient_abs(&self) -> i128 {
        self.terms
            .values()
            .flat_map(|c| c.terms().map(|(_, x)| x.abs()))
            .max()
            .unwrap_or(0)
    }

    /// JSON form `{"precision", "terms"}`; the caller adds the pair header.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            precision: self.precision.map(|p| Rational {
                num: p,
                den: self.torus.d,
            }),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }
}

fn min_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub exponent: Exponent,
    pub left: BarLaurent,
    pub right: BarLaurent,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at X^{:?}: {} vs {}",
            self.exponent, self.left, self.right
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Exponent,
    pub coeff: BarLaurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub precision: Option<Rational>,
    pub terms: Vec<TermJson>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(e, _)| (self.torus.grade(e), (*e).clone()));
        for (i, (e, c)) in sorted.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})X^{e:?}")?;
        }
        if let Some(p) = self.precision {
            write!(f, " + O(ψ>{}/{})", p, self.torus.d)?;
        }
        Ok(())
    }
}

/// The two distinguished corners of a character-shaped series under the
/// order `a ≤ b ⇔ B̃⁻¹(b − a)` effective or zero: `(max, min)`.
pub fn corner_exponents(pair: &CompatiblePair, f: &Series) -> Result<(Exponent, Exponent)> {
    Ok((corner(pair, f, true)?, corner(pair, f, false)?))
}

/// The maximal corner alone; well defined on truncations of infinite series.
pub fn max_corner(pair: &CompatiblePair, f: &Series) -> Result<Exponent> {
    corner(pair, f, true)
}

fn corner(pair: &CompatiblePair, f: &Series, upper: bool) -> Result<Exponent> {
    let exps: Vec<&Exponent> = f.terms().keys().collect();
    let le = |a: &Exponent, b: &Exponent| -> bool {
        if a == b {
            return true;
        }
        let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        pair.btilde_preimage(&diff)
            .is_some_and(|e| pair.is_effective(&e))
    };
    let found: Vec<&&Exponent> = exps
        .iter()
        .filter(|a| exps.iter().all(|b| if upper { le(b, a) } else { le(a, b) }))
        .collect();
    match found.as_slice() {
        [one] => Ok((**one).clone()),
        _ => Err(Error::NoUniqueCorner),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> (CompatiblePair, Arc<Torus>) {
        let pair = CompatiblePair::p1();
        let t = Torus::from_pair(&pair);
        (pair, t)
    }

    fn x(t: &Arc<Torus>, e: &[i64]) -> Series {
        Series::monomial(t, e.to_vec(), BarLaurent::one())
    }

    #[test]
    fn p1_twist() {
        let (_, t) = p1();
        let prod = x(&t, &[1, 0]).mul(&x(&t, &[0, 1])).unwrap();
        assert_eq!(
            prod,
            Series::monomial(&t, vec![1, 1], BarLaurent::nu_power(-1))
        );
        assert_eq!(
            Series::one(&t).mul(&x(&t, &[3, -2])).unwrap(),
            x(&t, &[3, -2])
        );
    }

    #[test]
    fn p1_grade() {
        let (pair, t) = p1();
        // ψ(a) = a2/2 − a1 on P¹.
        assert_eq!(pair.d, 2);
        assert_eq!(t.grade(&[1, 0]), -2);
        assert_eq!(t.grade(&[0, 1]), 1);
    }

    #[test]
    fn addition_and_precision() {
        let (_, t) = p1();
        let a = x(&t, &[1, 0]);
        let two = a.add(&a).unwrap();
        assert_eq!(two.coeff(&[1, 0]), BarLaurent::constant(2));
        let trunc = a.add(&Series::one(&t)).unwrap().truncate(0);
        assert!(trunc.add(&trunc.neg()).unwrap().is_empty());
        assert_eq!(trunc.add(&trunc.neg()).unwrap().precision(), Some(0));
    }

    #[test]
    fn monomial_inverse_and_neumann() {
        let (_, t) = p1();
        let g = Series::monomial(&t, vec![-1, -1], BarLaurent::nu_power(3));
        let inv = g.conic_invert(10).unwrap();
        assert!(inv.mul(&g).unwrap().agrees_with(&Series::one(&t)));
        // 1 + X^{(-1,0)} has grade-positive tail: ψ(-1,0) = 1.
        let f = Series::one(&t).add(&x(&t, &[-1, 0])).unwrap();
        let inv = f.conic_invert(20).unwrap();
        assert_eq!(inv.len(), 11);
        let id = f.mul(&inv).unwrap();
        assert_eq!(id.precision(), Some(20));
        assert!(id.agrees_with(&Series::one(&t)));
        assert!(inv.mul(&f).unwrap().agrees_with(&Series::one(&t)));
    }

    #[test]
    fn inversion_needs_precision() {
        let (_, t) = p1();
        let f = Series::from_terms(
            &t,
            [
                (vec![0, 0], BarLaurent::one()),
                (vec![-1, 0], BarLaurent::one()),
            ],
            Some(4),
        );
        assert!(matches!(
            f.conic_invert(10),
            Err(Error::InsufficientPrecision { .. })
        ));
        assert!(f.conic_invert(4).is_ok());
        let flat = Series::from_terms(
            &t,
            [
                (vec![0, 0], BarLaurent::one()),
                (vec![1, 2], BarLaurent::one()),
            ],
            None,
        );
        assert_eq!(flat.conic_invert(4).unwrap_err(), Error::NotConic);
    }

    #[test]
    fn exact_division() {
        let (_, t) = p1();
        let a = x(&t, &[1, 0]).add(&x(&t, &[0, 1]).shift_nu(2)).unwrap();
        let b = x(&t, &[-1, 3]).add(&Series::one(&t)).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.right_divide_exact(&b).unwrap(), a);
        assert_eq!(ab.left_divide_exact(&a).unwrap(), b);
        let c = x(&t, &[2, 2]).add(&Series::one(&t)).unwrap();
        assert_eq!(c.right_divide_exact(&a).unwrap_err(), Error::NotDivisible);
    }

    #[test]
    fn bar_anti_automorphism() {
        let (_, t) = p1();
        let f = x(&t, &[1, 0]).shift_nu(1).add(&x(&t, &[2, -1])).unwrap();
        let g = x(&t, &[0, 1]).add(&x(&t, &[-1, 1]).shift_nu(-3)).unwrap();
        let lhs = f.mul(&g).unwrap().bar();
        let rhs = g.bar().mul(&f.bar()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(f.bar().bar(), f);
    }

    #[test]
    fn compare_reports_discrepancy() {
        let (_, t) = p1();
        let one = Series::one(&t);
        let nu = one.shift_nu(1);
        let d = one.compare(&nu, None).unwrap().unwrap();
        assert_eq!(d.exponent, vec![0, 0]);
        assert!(one.compare(&one, None).unwrap().is_none());
    }

    #[test]
    fn pair_mismatch() {
        let (_, t) = p1();
        let other = Torus::from_pair(&CompatiblePair::new(&"3,3,3".parse().unwrap()).unwrap());
        let a = Series::one(&t);
        let b = Series::one(&other);
        assert_eq!(a.mul(&b).unwrap_err(), Error::PairMismatch);
    }
}
