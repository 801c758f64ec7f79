//! Weight data, the grading group L(p), the Grothendieck group and the
//! compatible pair (Λ, B̃) of a weighted projective line.
//!
//! Classes are integer vectors in an ordered basis of K₀. The reduced basis
//! of `p` is `Ô, Ŝx, Ŝ_{i,j}` (j = 2..p_i). The starred basis of the oddified
//! weights `p̃` lists the simples `Ŝ_{i,2}` of every enlarged tube last.
//!
//! Simples in tube i are labelled so that `S_{i,j}` is the cokernel of
//! `O(-j·x_i) → O(-(j-1)·x_i)` and `τS_{i,j} = S_{i,j+1}` (indices mod p_i).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, IntMatrix};

/// Coordinates of a K₀ class in the ordered starred basis.
pub type ClassVector = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl WeightSpec {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidWeights("weights must be at least 1".into()));
        }
        Ok(WeightSpec {
            weights,
            labels: None,
        })
    }

    /// The projective line itself, as the weight tuple (1,1).
    pub fn p1() -> Self {
        WeightSpec {
            weights: vec![1, 1],
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn count(&self) -> usize {
        self.weights.len()
    }

    /// Rank of K₀: 2 + Σ(p_i − 1).
    pub fn rank(&self) -> usize {
        2 + self.weights.iter().map(|&p| p as usize - 1).sum::<usize>()
    }

    pub fn all_odd(&self) -> bool {
        self.weights.iter().all(|p| p % 2 == 1)
    }

    /// Increments every even weight.
    pub fn oddified(&self) -> WeightSpec {
        WeightSpec {
            weights: self
                .weights
                .iter()
                .map(|&p| if p % 2 == 0 { p + 1 } else { p })
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return WeightSpec::new(vec![]);
        }
        let weights = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("weight `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightSpec::new(weights)
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Element of the grading group L(p): `l0·c⃗ + Σ li·x⃗_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeVector {
    pub l0: i64,
    pub li: Vec<i64>,
}

impl GradeVector {
    pub fn new(l0: i64, li: Vec<i64>) -> Self {
        GradeVector { l0, li }
    }

    pub fn multiple_of_c(l0: i64, count: usize) -> Self {
        GradeVector {
            l0,
            li: vec![0; count],
        }
    }

    /// Normal form with `0 ≤ li < p_i`, using `p_i·x⃗_i = c⃗`.
    pub fn normalize(&self, weights: &[u32]) -> GradeVector {
        assert_eq!(self.li.len(), weights.len(), "grade vector length");
        let mut l0 = self.l0;
        let li = self
            .li
            .iter()
            .zip(weights)
            .map(|(&l, &p)| {
                let p = p as i64;
                l0 += l.div_euclid(p);
                l.rem_euclid(p)
            })
            .collect();
        GradeVector { l0, li }
    }

    pub fn sub(&self, other: &GradeVector) -> GradeVector {
        GradeVector {
            l0: self.l0 - other.l0,
            li: self.li.iter().zip(&other.li).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &GradeVector) -> GradeVector {
        GradeVector {
            l0: self.l0 + other.l0,
            li: self.li.iter().zip(&other.li).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A basis symbol of K₀. `Simple { tube, index }` uses 0-based tubes and
/// 1-based indices within the tube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisElement {
    Structure,
    Point,
    Simple { tube: usize, index: u32 },
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Structure => write!(f, "O"),
            BasisElement::Point => write!(f, "Sx"),
            BasisElement::Simple { tube, index } => write!(f, "S{},{}", tube + 1, index),
        }
    }
}

/// Reduced basis `Ô, Ŝx, Ŝ_{i,j}` (2 ≤ j ≤ p_i).
pub fn reduced_basis(p: &WeightSpec) -> Vec<BasisElement> {
    let mut b = vec![BasisElement::Structure, BasisElement::Point];
    for (tube, &w) in p.weights.iter().enumerate() {
        for index in 2..=w {
            b.push(BasisElement::Simple { tube, index });
        }
    }
    b
}

/// Euler form on basis symbols, including the simples `S_{i,1}`.
fn euler_symbol(p: &WeightSpec, a: BasisElement, b: BasisElement) -> i64 {
    use BasisElement::*;
    match (a, b) {
        (Structure, Structure) => 1,
        (Structure, Point) => 1,
        (Point, Structure) => -1,
        (Point, Point) => 0,
        (Structure, Simple { index, .. }) => (index == 1) as i64,
        (Simple { tube, index }, Structure) => -((index == p.weights[tube]) as i64),
        (Point, Simple { .. }) | (Simple { .. }, Point) => 0,
        (Simple { tube: s, index: j }, Simple { tube: t, index: l }) => {
            if s != t {
                return 0;
            }
            let pw = p.weights[s];
            let next = j % pw + 1;
            (j == l) as i64 - (l == next) as i64
        }
    }
}

/// Expansion of a symbol in reduced coordinates (sparse), with
/// `Ŝ_{i,1} = Ŝx − Σ_{j≥2} Ŝ_{i,j}`.
fn expand_symbol(p: &WeightSpec, e: BasisElement) -> Vec<(BasisElement, i64)> {
    match e {
        BasisElement::Simple { tube, index: 1 } => {
            let mut v = vec![(BasisElement::Point, 1)];
            for j in 2..=p.weights[tube] {
                v.push((BasisElement::Simple { tube, index: j }, -1));
            }
            v
        }
        other => vec![(other, 1)],
    }
}

/// Euler matrix of `p` in its reduced basis: `E[u][v] = ⟨b_u, b_v⟩`.
pub fn euler_matrix(p: &WeightSpec) -> IntMatrix {
    let basis = reduced_basis(p);
    euler_matrix_in(p, &basis)
}

fn euler_matrix_in(p: &WeightSpec, basis: &[BasisElement]) -> IntMatrix {
    let n = basis.len();
    let mut e = IntMatrix::zeros(n, n);
    for (u, &a) in basis.iter().enumerate() {
        for (v, &b) in basis.iter().enumerate() {
            e.data[u][v] = euler_symbol(p, a, b);
        }
    }
    e
}

/// Starred basis of the oddified weights: enlarged tubes list `j ≥ 3` in
/// place and their `Ŝ_{i,2}` at the end.
pub fn starred_basis(p: &WeightSpec) -> Vec<BasisElement> {
    let pt = p.oddified();
    let mut head = vec![BasisElement::Structure, BasisElement::Point];
    let mut tail = Vec::new();
    for (tube, (&w, &wt)) in p.weights.iter().zip(&pt.weights).enumerate() {
        let enlarged = wt != w;
        for index in 2..=wt {
            if enlarged && index == 2 {
                tail.push(BasisElement::Simple { tube, index });
            } else {
                head.push(BasisElement::Simple { tube, index });
            }
        }
    }
    head.extend(tail);
    head
}

/// Output of the odd-weight embedding, before Λ is solved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub p: WeightSpec,
    pub p_tilde: WeightSpec,
    pub basis: Vec<BasisElement>,
    pub e: IntMatrix,
    pub etilde: IntMatrix,
    pub btilde: IntMatrix,
}

pub fn oddify_and_embed(p: &WeightSpec) -> Embedding {
    let p_tilde = p.oddified();
    let basis = starred_basis(p);
    let etilde = euler_matrix_in(&p_tilde, &basis);
    let btilde = etilde.transpose().sub(&etilde);
    Embedding {
        p: p.clone(),
        p_tilde,
        basis,
        e: euler_matrix(p),
        etilde,
        btilde,
    }
}

/// `Λ = −d·B̃⁻¹` with `d` the least common multiple of the denominators of `B̃⁻¹`.
pub fn solve_lambda(btilde: &IntMatrix) -> Result<(IntMatrix, i64)> {
    let inv = btilde.rational_inverse().ok_or(Error::SingularMatrix)?;
    let (scaled, d) = clear_denominators(&inv);
    Ok((scaled.scale(-1), d))
}

/// The weights identifying a pair in serialized output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairHeader {
    pub p: Vec<u32>,
    pub p_tilde: Vec<u32>,
    pub d: i64,
}

/// The matrices of a compatible pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub p: Vec<u32>,
    pub p_tilde: Vec<u32>,
    pub e: IntMatrix,
    pub b: IntMatrix,
    pub btilde: IntMatrix,
    pub lambda: IntMatrix,
    pub d: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatiblePair {
    pub p: WeightSpec,
    pub p_tilde: WeightSpec,
    pub n: usize,
    pub m: usize,
    pub basis: Vec<BasisElement>,
    pub e: IntMatrix,
    pub etilde: IntMatrix,
    pub btilde: IntMatrix,
    pub lambda: IntMatrix,
    pub d: i64,
    /// Grade vector u′ on the starred basis.
    pub grade_vector: Vec<i64>,
    /// Integral row `−u′ᵗΛ`; ψ(a) equals `grade_row·a / d`.
    pub grade_row: Vec<i64>,
    /// 0-based frozen indices `n..m`.
    pub frozen: Vec<usize>,
}

impl CompatiblePair {
    pub fn header(&self) -> PairHeader {
        PairHeader {
            p: self.p.weights.clone(),
            p_tilde: self.p_tilde.weights.clone(),
            d: self.d,
        }
    }

    pub fn summary(&self) -> PairSummary {
        PairSummary {
            p: self.p.weights.clone(),
            p_tilde: self.p_tilde.weights.clone(),
            e: self.e.clone(),
            b: self.b(),
            btilde: self.btilde.clone(),
            lambda: self.lambda.clone(),
            d: self.d,
        }
    }

    pub fn new(p: &WeightSpec) -> Result<Self> {
        let emb = oddify_and_embed(p);
        let (lambda, d) = solve_lambda(&emb.btilde)?;
        let n = p.rank();
        let m = emb.p_tilde.rank();
        let point_weight = emb
            .p_tilde
            .weights
            .iter()
            .copied()
            .max()
            .unwrap_or(1)
            .max(2) as i64;
        let grade_vector: Vec<i64> = emb
            .basis
            .iter()
            .map(|b| {
                if *b == BasisElement::Point {
                    point_weight
                } else {
                    1
                }
            })
            .collect();
        let grade_row = (0..m)
            .map(|j| {
                -(0..m)
                    .map(|i| grade_vector[i] * lambda.data[i][j])
                    .sum::<i64>()
            })
            .collect();
        Ok(CompatiblePair {
            p: p.clone(),
            p_tilde: emb.p_tilde,
            n,
            m,
            basis: emb.basis,
            e: emb.e,
            etilde: emb.etilde,
            btilde: emb.btilde,
            lambda,
            d,
            grade_vector,
            grade_row,
            frozen: (n..m).collect(),
        })
    }

    pub fn p1() -> Self {
        Self::new(&WeightSpec::p1()).expect("P1 pair")
    }

    /// Upper-left n×n block of B̃, equal to Eᵗ − E of the unembedded weights.
    pub fn b(&self) -> IntMatrix {
        self.e.transpose().sub(&self.e)
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `v* = Ẽᵗv`.
    pub fn star_right(&self, v: &[i64]) -> Result<ClassVector> {
        self.check_len(v)?;
        let mut out = vec![0; self.m];
        for (i, &vi) in v.iter().enumerate() {
            if vi != 0 {
                for (o, &e) in out.iter_mut().zip(&self.etilde.data[i]) {
                    *o += vi * e;
                }
            }
        }
        Ok(out)
    }

    /// `*v = Ẽv`.
    pub fn star_left(&self, v: &[i64]) -> Result<ClassVector> {
        self.check_len(v)?;
        self.etilde.mul_vec(v)
    }

    /// `⟨a, b⟩`, using Ẽ for length-m vectors and E for length-n vectors.
    pub fn euler_pairing(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        if a.len() == self.m {
            Ok(self.etilde.bilinear(a, b))
        } else if a.len() == self.n {
            Ok(self.e.bilinear(a, b))
        } else {
            Err(Error::DimensionMismatch {
                expected: self.m,
                found: a.len(),
            })
        }
    }

    /// Integral skew form `Λ(a, b)`.
    pub fn lambda_pairing(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.lambda.bilinear(a, b))
    }

    /// `Λ(a*, b*)`, the twist exponent between classes.
    pub fn lambda_star(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        let a = self.star_right(a)?;
        let b = self.star_right(b)?;
        Ok(self.lambda.bilinear(&a, &b))
    }

    /// ψ(a) scaled by d.
    pub fn grade(&self, a: &[i64]) -> i64 {
        crate::matrix::dot(&self.grade_row, a)
    }

    /// Position of a basis symbol in the starred basis.
    pub fn index_of(&self, e: BasisElement) -> Option<usize> {
        self.basis.iter().position(|&b| b == e)
    }

    /// Class of a basis symbol of `p̃` in starred coordinates (`Ŝ_{i,1}` expanded).
    pub fn symbol_class(&self, e: BasisElement) -> ClassVector {
        let mut v = vec![0; self.m];
        for (s, c) in expand_symbol(&self.p_tilde, e) {
            let i = self.index_of(s).expect("symbol in basis");
            v[i] += c;
        }
        v
    }

    /// Class of the simple `S_{tube, index}` of `p̃` (1 ≤ index ≤ p̃_tube).
    pub fn simple_class(&self, tube: usize, index: u32) -> ClassVector {
        self.symbol_class(BasisElement::Simple { tube, index })
    }

    pub fn point_class(&self) -> ClassVector {
        self.symbol_class(BasisElement::Point)
    }

    pub fn structure_class(&self) -> ClassVector {
        self.symbol_class(BasisElement::Structure)
    }

    /// Class of the line bundle `O(x)`, x in L(p̃). In normal form,
    /// `O(x) = Ô + l0·Ŝx + Σ_i Σ_{k=1}^{l_i} Ŝ_{i, p̃_i+1−k}`.
    pub fn line_bundle_class(&self, x: &GradeVector) -> ClassVector {
        let x = x.normalize(&self.p_tilde.weights);
        let mut v = self.structure_class();
        v[1] += x.l0;
        for (tube, &l) in x.li.iter().enumerate() {
            let w = self.p_tilde.weights[tube];
            for k in 1..=l as u32 {
                let s = self.simple_class(tube, w + 1 - k);
                for (a, b) in v.iter_mut().zip(&s) {
                    *a += b;
                }
            }
        }
        v
    }

    /// `dim H⁰(O(x)) = l0 + 1` when the normal form has `l0 ≥ 0`, else 0.
    pub fn h0(&self, x: &GradeVector) -> i64 {
        let x = x.normalize(&self.p_tilde.weights);
        (x.l0 + 1).max(0)
    }

    /// Whether `v` is the class of a nonzero sheaf: positive rank, or rank
    /// zero and a nonzero nonnegative combination of simple classes.
    pub fn is_effective(&self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.m);
        match v[0] {
            r if r > 0 => true,
            r if r < 0 => false,
            _ => {
                if v.iter().all(|&x| x == 0) {
                    return false;
                }
                // v = a·Ŝx + Σ v_ij Ŝ_ij; using t_i copies of Ŝ_{i,1} the
                // remaining coefficients are v_ij + t_i and a − Σ t_i.
                let point = self.index_of(BasisElement::Point).expect("point");
                let mut needed = 0;
                for tube in 0..self.p_tilde.count() {
                    let w = self.p_tilde.weights[tube];
                    let min = (2..=w)
                        .map(|j| {
                            v[self
                                .index_of(BasisElement::Simple { tube, index: j })
                                .expect("simple")]
                        })
                        .min()
                        .unwrap_or(0);
                    needed += (-min).max(0);
                }
                v[point] >= needed
            }
        }
    }

    /// `B̃⁻¹a` when integral (the inverse of the exponent map `e ↦ B̃e`).
    pub fn btilde_preimage(&self, a: &[i64]) -> Option<ClassVector> {
        let la = self.lambda.mul_vec(a).ok()?;
        la.iter()
            .map(|&x| {
                if x % self.d == 0 {
                    Some(-x / self.d)
                } else {
                    None
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn p1_euler_matrix() {
        assert_eq!(
            euler_matrix(&WeightSpec::p1()),
            m(vec![vec![1, 1], vec![-1, 0]])
        );
        let empty: WeightSpec = "".parse().unwrap();
        assert_eq!(euler_matrix(&empty), m(vec![vec![1, 1], vec![-1, 0]]));
    }

    #[test]
    fn golden_114() {
        let p: WeightSpec = "1,1,4".parse().unwrap();
        let e = euler_matrix(&p);
        let b = e.transpose().sub(&e);
        assert_eq!(
            b,
            m(vec![
                vec![0, -2, 0, 0, -1],
                vec![2, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, -1, 0, 1],
                vec![1, 0, 0, -1, 0],
            ])
        );
        let pair = CompatiblePair::new(&p).unwrap();
        assert_eq!(pair.p_tilde.weights, vec![1, 1, 5]);
        assert_eq!(
            pair.btilde,
            m(vec![
                vec![0, -2, 0, 0, -1, 0],
                vec![2, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0, -1],
                vec![0, 0, -1, 0, 1, 0],
                vec![1, 0, 0, -1, 0, 0],
                vec![0, 0, 1, 0, 0, 0],
            ])
        );
        assert_eq!(
            pair.lambda.mul(&pair.btilde).unwrap(),
            IntMatrix::identity(6).scale(-pair.d)
        );
    }

    #[test]
    fn p1_pair() {
        let pair = CompatiblePair::p1();
        assert_eq!(pair.btilde, m(vec![vec![0, -2], vec![2, 0]]));
        assert_eq!(pair.lambda, m(vec![vec![0, -1], vec![1, 0]]));
        assert_eq!(pair.d, 2);
        assert_eq!(pair.star_right(&[1, 2]).unwrap(), vec![-1, 1]);
        assert_eq!(pair.star_right(&[1, 0]).unwrap(), vec![1, 1]);
        assert_eq!(pair.euler_pairing(&[1, 2], &[1, 0]).unwrap(), -1);
        assert_eq!(pair.euler_pairing(&[0, 1], &[1, 0]).unwrap(), -1);
        assert!(pair.star_right(&[1, 2, 3]).is_err());
    }

    #[test]
    fn line_bundles_and_h0() {
        let pair = CompatiblePair::new(&"2,3,3".parse().unwrap()).unwrap();
        let zero = GradeVector::multiple_of_c(0, 3);
        assert_eq!(pair.line_bundle_class(&zero), pair.structure_class());
        assert_eq!(pair.h0(&zero), 1);
        let c = GradeVector::multiple_of_c(1, 3);
        let mut expect = pair.structure_class();
        expect[1] += 1;
        assert_eq!(pair.line_bundle_class(&c), expect);
        assert_eq!(pair.h0(&c), 2);
        // p̃_i·x⃗_i = c⃗
        let px = GradeVector::new(0, vec![0, 3, 0]);
        assert_eq!(pair.line_bundle_class(&px), expect);

        let p1 = CompatiblePair::p1();
        for l in -6i64..=6 {
            let x = GradeVector::multiple_of_c(l, 2);
            let class = p1.line_bundle_class(&x);
            assert_eq!(class, vec![1, l]);
            let chi = p1.euler_pairing(&p1.structure_class(), &class).unwrap();
            assert_eq!(p1.h0(&x) - chi, (-l - 1).max(0));
        }
    }

    #[test]
    fn normalization_idempotent() {
        let w = [2, 3, 5];
        let x = GradeVector::new(-2, vec![7, -4, 11]);
        let n = x.normalize(&w);
        assert_eq!(n.normalize(&w), n);
        assert!(n.li.iter().zip(&w).all(|(&l, &p)| 0 <= l && l < p as i64));
    }

    #[test]
    fn effectivity() {
        let p1 = CompatiblePair::p1();
        assert!(p1.is_effective(&[2, 2]));
        assert!(!p1.is_effective(&[-1, 0]));
        assert!(!p1.is_effective(&[0, 0]));
        assert!(p1.is_effective(&[0, 3]));
        assert!(!p1.is_effective(&[0, -1]));
        let pair = CompatiblePair::new(&"3,3,3".parse().unwrap()).unwrap();
        for tube in 0..3 {
            for j in 1..=3 {
                assert!(pair.is_effective(&pair.simple_class(tube, j)));
            }
        }
        let s = pair.simple_class(0, 2);
        let neg: Vec<i64> = s.iter().map(|x| -x).collect();
        assert!(!pair.is_effective(&neg));
    }

    #[test]
    fn invertibility_iff_odd() {
        for n in 0..=3usize {
            let mut idx = vec![1u32; n];
            loop {
                let p = WeightSpec::new(idx.clone()).unwrap();
                let e = euler_matrix(&p);
                let b = e.transpose().sub(&e);
                assert_eq!(b.determinant() != 0, p.all_odd(), "{p}");
                let emb = oddify_and_embed(&p);
                assert_ne!(emb.btilde.determinant(), 0);
                let k = emb.e.rows;
                for i in 0..k {
                    for j in 0..k {
                        assert_eq!(emb.btilde.data[i][j], b.data[i][j]);
                    }
                }
                let mut pos = 0;
                while pos < n && idx[pos] == 5 {
                    idx[pos] = 1;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
                idx[pos] += 1;
            }
        }
    }
}
