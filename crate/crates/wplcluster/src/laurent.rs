//! Laurent polynomials in ν with integer coefficients, quantum integers and
//! exact evaluation at ν = √q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Element of Z[ν^{±1}], stored densely from its lowest exponent.
/// The zero polynomial has no coefficients; otherwise both ends are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BarLaurent {
    low: i64,
    coeffs: Vec<i128>,
}

impl BarLaurent {
    pub fn zero() -> Self {
        BarLaurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c·ν^k`.
    pub fn monomial(c: i128, k: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        BarLaurent {
            low: k,
            coeffs: vec![c],
        }
    }

    pub fn nu_power(k: i64) -> Self {
        Self::monomial(1, k)
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i128)>>(terms: I) -> Self {
        let terms: Vec<(i64, i128)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|t| t.0).min().unwrap();
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0; (high - low + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - low) as usize] += c;
        }
        let mut out = BarLaurent { low, coeffs };
        out.trim();
        out
    }

    /// Quantum integer `[n]_{ν^s} = 1 + ν^s + … + ν^{s(n−1)}` (zero for n ≤ 0).
    pub fn quantum_integer(n: i64, s: i64) -> Self {
        Self::from_terms((0..n.max(0)).map(|k| (s * k, 1)))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> i128 {
        if k < self.low {
            return 0;
        }
        self.coeffs
            .get((k - self.low) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    /// `±ν^k` if this is a unit of Z[ν^{±1}].
    pub fn as_unit(&self) -> Option<(i128, i64)> {
        match self.coeffs.as_slice() {
            [c] if *c == 1 || *c == -1 => Some((*c, self.low)),
            _ => None,
        }
    }

    /// Multiplies by `ν^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BarLaurent {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// ν ↦ ν⁻¹.
    pub fn bar(&self) -> Self {
        match self.max_exponent() {
            None => Self::zero(),
            Some(high) => BarLaurent {
                low: -high,
                coeffs: self.coeffs.iter().rev().copied().collect(),
            },
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// True when every exponent is nonnegative (membership in Z[ν]).
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Substitutes ν ↦ ν^s.
    pub fn substitute_power(&self, s: i64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k * s, c)))
    }

    /// Exact quotient by `ν^s`-substitution: returns `P` with `P(ν^s) = self` if it exists.
    pub fn unsubstitute_power(&self, s: i64) -> Option<Self> {
        if self.terms().any(|(k, _)| k.rem_euclid(s) != 0) {
            return None;
        }
        Some(Self::from_terms(self.terms().map(|(k, c)| (k / s, c))))
    }

    pub fn scale_int(&self, c: i128) -> Self {
        if c == 0 {
            return Self::zero();
        }
        BarLaurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &BarLaurent) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        let low = self.low.min(other.low);
        let high = self
            .max_exponent()
            .unwrap()
            .max(other.max_exponent().unwrap());
        if low < self.low {
            let pad = (self.low - low) as usize;
            let mut v = vec![0; pad];
            v.extend_from_slice(&self.coeffs);
            self.coeffs = v;
            self.low = low;
        }
        self.coeffs.resize((high - self.low + 1) as usize, 0);
        let off = (other.low - self.low) as usize;
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[off + i] += c;
        }
        self.trim();
    }

    /// Adds `c·ν^k·other`.
    pub fn add_scaled_shifted(&mut self, other: &BarLaurent, k: i64) {
        self.add_assign_ref(&other.shift(k));
    }

    /// Evaluation at ν = √q, exact in Z[√q, 1/q].
    pub fn eval_sqrt(&self, q: i128) -> QuadraticNumber {
        let shift = self.min_exponent().map_or(0, |k| (-k).max(0));
        // ν^{-1} = √q / q, so lift by an even power and divide afterwards.
        let lift = shift + shift % 2;
        let mut acc = QuadraticNumber::zero(q);
        for (k, c) in self.terms() {
            let k = k + lift;
            let qp = q.pow((k / 2) as u32) * c;
            if k % 2 == 1 {
                acc.b += qp;
            } else {
                acc.a += qp;
            }
        }
        acc.den = (lift / 2) as u32;
        acc.reduce();
        acc
    }
}

impl fmt::Debug for BarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BarLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let abs = c.abs();
            let body = match (k, abs) {
                (0, a) => a.to_string(),
                (1, 1) => "v".into(),
                (k, 1) => format!("v^{k}"),
                (1, a) => format!("{a}v"),
                (k, a) => format!("{a}v^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &BarLaurent {
    type Output = BarLaurent;
    fn add(self, rhs: &BarLaurent) -> BarLaurent {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for BarLaurent {
    type Output = BarLaurent;
    fn add(mut self, rhs: BarLaurent) -> BarLaurent {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Neg for &BarLaurent {
    type Output = BarLaurent;
    fn neg(self) -> BarLaurent {
        self.scale_int(-1)
    }
}

impl Neg for BarLaurent {
    type Output = BarLaurent;
    fn neg(self) -> BarLaurent {
        self.scale_int(-1)
    }
}

impl Sub for &BarLaurent {
    type Output = BarLaurent;
    fn sub(self, rhs: &BarLaurent) -> BarLaurent {
        self + &(-rhs)
    }
}

impl Sub for BarLaurent {
    type Output = BarLaurent;
    fn sub(self, rhs: BarLaurent) -> BarLaurent {
        &self - &rhs
    }
}

impl Mul for &BarLaurent {
    type Output = BarLaurent;
    fn mul(self, rhs: &BarLaurent) -> BarLaurent {
        if self.is_zero() || rhs.is_zero() {
            return BarLaurent::zero();
        }
        let mut coeffs = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut out = BarLaurent {
            low: self.low + rhs.low,
            coeffs,
        };
        out.trim();
        out
    }
}

impl Mul for BarLaurent {
    type Output = BarLaurent;
    fn mul(self, rhs: BarLaurent) -> BarLaurent {
        &self * &rhs
    }
}

/// Serialized as a list of `[exponent, coefficient]` pairs.
impl Serialize for BarLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, i64)> = self.terms().map(|(k, c)| (k, c as i64)).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BarLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(i64, i64)> = Vec::deserialize(d)?;
        Ok(BarLaurent::from_terms(
            v.into_iter().map(|(k, c)| (k, c as i128)),
        ))
    }
}

/// `(a + b·√q) / q^den` with exact integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticNumber {
    pub a: i128,
    pub b: i128,
    pub q: i128,
    pub den: u32,
}

impl QuadraticNumber {
    pub fn zero(q: i128) -> Self {
        QuadraticNumber {
            a: 0,
            b: 0,
            q,
            den: 0,
        }
    }

    pub fn integer(a: i128, q: i128) -> Self {
        QuadraticNumber { a, b: 0, q, den: 0 }
    }

    fn reduce(&mut self) {
        while self.den > 0 && self.a % self.q == 0 && self.b % self.q == 0 {
            self.a /= self.q;
            self.b /= self.q;
            self.den -= 1;
        }
    }

    fn lifted(&self, den: u32) -> (i128, i128) {
        let f = self.q.pow(den - self.den);
        (self.a * f, self.b * f)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.q, o.q);
        let den = self.den.max(o.den);
        let (a1, b1) = self.lifted(den);
        let (a2, b2) = o.lifted(den);
        let mut r = QuadraticNumber {
            a: a1 + a2,
            b: b1 + b2,
            q: self.q,
            den,
        };
        r.reduce();
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.q, o.q);
        let mut r = QuadraticNumber {
            a: self.a * o.a + self.q * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
            q: self.q,
            den: self.den + o.den,
        };
        r.reduce();
        r
    }

    pub fn as_integer(&self) -> Option<i128> {
        (self.b == 0 && self.den == 0).then_some(self.a)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}")?,
            (0, b) => write!(f, "{b}√{}", self.q)?,
            (a, b) => write!(f, "({a}{:+}√{})", b, self.q)?,
        }
        if self.den > 0 {
            write!(f, "/{}^{}", self.q, self.den)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_trim() {
        let a = BarLaurent::from_terms([(-1, 1), (1, 1)]);
        let b = BarLaurent::from_terms([(-1, 1), (1, -1)]);
        assert_eq!(&a * &b, BarLaurent::from_terms([(-2, 1), (2, -1)]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &b), BarLaurent::monomial(2, -1));
        assert_eq!((&a + &b).min_exponent(), Some(-1));
    }

    #[test]
    fn bar_is_involution() {
        let a = BarLaurent::from_terms([(-3, 2), (0, -1), (5, 7)]);
        assert_eq!(a.bar().bar(), a);
        assert_eq!(a.bar().coeff(3), 2);
        assert!(BarLaurent::from_terms([(-2, 1), (2, 1)]).is_bar_invariant());
    }

    #[test]
    fn quantum_integers() {
        let q3 = BarLaurent::quantum_integer(3, 4);
        assert_eq!(q3, BarLaurent::from_terms([(0, 1), (4, 1), (8, 1)]));
        assert!(BarLaurent::quantum_integer(0, 4).is_zero());
        assert!(q3.shift(-4).is_bar_invariant());
    }

    #[test]
    fn specialization() {
        assert_eq!(
            BarLaurent::nu_power(2).eval_sqrt(5),
            QuadraticNumber::integer(5, 5)
        );
        assert_eq!(
            BarLaurent::quantum_integer(2, 4).eval_sqrt(3),
            QuadraticNumber::integer(10, 3)
        );
        let v = BarLaurent::from_terms([(1, 1), (3, 1)]).eval_sqrt(2);
        assert_eq!((v.a, v.b), (0, 3));
        // ν + ν⁻¹ at q = 4 is 5√4/4
        let w = BarLaurent::from_terms([(-1, 1), (1, 1)]).eval_sqrt(4);
        assert_eq!((w.a, w.b, w.den), (0, 5, 1));
        let x = BarLaurent::from_terms([(-2, 1), (0, 1)]).eval_sqrt(3);
        assert_eq!((x.a, x.b, x.den), (4, 0, 1));
    }

    #[test]
    fn serde_round_trip() {
        let a = BarLaurent::from_terms([(-2, 1), (2, -3)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[-2,1],[2,-3]]");
        let b: BarLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
