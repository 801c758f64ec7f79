//! The exchange-relation mutation engine.
//!
//! A [`ClusterState`] holds a quiver, the classes `d_i(t)` of the current
//! cluster-tilting summands and their characters `X_i(t)`. Mutation at a
//! mutable index replaces one summand using the exchange relation
//!
//! `X′·X_i = ν^{L}X_E(a) + ν^{L−d}X_E(b)` (or `ν^{L+d}X_E(a) + ν^{L}X_E(b)`),
//!
//! where `a_j = R[j][i]`, `b_j = R[i][j]`, `L = Λ(d′*, d_i*)` and the case is
//! selected by which of the two candidate class differences is effective.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::line_bundle_char;
use crate::error::{Error, Result};
use crate::kzero::{ClassVector, CompatiblePair, GradeVector};
use crate::laurent::BarLaurent;
use crate::matrix::{unimodular_inverse, IntMatrix};
use crate::series::{Series, SeriesJson, Torus};

/// Arrow counts: `r[i][j]` arrows `i → j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverState {
    pub r: IntMatrix,
}

impl QuiverState {
    pub fn new(r: IntMatrix) -> Result<Self> {
        let n = r.rows;
        if r.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.cols,
            });
        }
        for i in 0..n {
            if r.data[i][i] != 0 {
                return Err(Error::Parse(format!("loop at vertex {}", i + 1)));
            }
            for j in 0..n {
                if r.data[i][j] < 0 {
                    return Err(Error::Parse("negative arrow count".into()));
                }
                if r.data[i][j] > 0 && r.data[j][i] > 0 {
                    return Err(Error::TwoCycleCreated(i + 1));
                }
            }
        }
        Ok(QuiverState { r })
    }

    /// Quiver with skew matrix `s = R − Rᵗ`.
    pub fn from_skew(s: &IntMatrix) -> Self {
        let data = s
            .data
            .iter()
            .map(|row| row.iter().map(|&x| x.max(0)).collect())
            .collect();
        QuiverState {
            r: IntMatrix::from_rows(data),
        }
    }

    pub fn skew(&self) -> IntMatrix {
        self.r.sub(&self.r.transpose())
    }

    pub fn size(&self) -> usize {
        self.r.rows
    }

    pub fn arrows(&self, i: usize, j: usize) -> i64 {
        self.r.data[i][j]
    }

    /// Fomin–Zelevinsky mutation at `i` (0-based).
    pub fn mutate(&self, i: usize) -> Result<QuiverState> {
        let s = self.skew();
        let n = s.rows;
        let mut out = IntMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                out.data[x][y] = if x == i || y == i {
                    -s.data[x][y]
                } else {
                    let (a, b) = (s.data[x][i], s.data[i][y]);
                    s.data[x][y] + (a.abs() * b + a * b.abs()) / 2
                };
            }
        }
        let q = QuiverState::from_skew(&out);
        for x in 0..n {
            for y in 0..n {
                if q.r.data[x][y] > 0 && q.r.data[y][x] > 0 {
                    return Err(Error::TwoCycleCreated(i + 1));
                }
            }
        }
        Ok(q)
    }
}

/// The quiver compatible with a cluster of classes `dims`: its skew matrix
/// is `−d·L⁻¹` with `L[a][b] = Λ(d_a*, d_b*)`.
pub fn compatible_quiver(pair: &CompatiblePair, dims: &[ClassVector]) -> Result<QuiverState> {
    let m = dims.len();
    let mut l = IntMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            l.data[a][b] = pair.lambda_star(&dims[a], &dims[b])?;
        }
    }
    let inv = l.rational_inverse().ok_or(Error::SingularMatrix)?;
    let mut s = IntMatrix::zeros(m, m);
    for (a, row) in inv.iter().enumerate() {
        for (b, &entry) in row.iter().enumerate() {
            let x = entry * num_rational::Ratio::from_integer(-pair.d as i128);
            if !x.is_integer() {
                return Err(Error::SingularMatrix);
            }
            s.data[a][b] = x.to_integer() as i64;
        }
    }
    Ok(QuiverState::from_skew(&s))
}

/// Edge label of one mutation step: the arrow counts into and out of the
/// mutated vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub index: usize,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

/// Which candidate class difference was effective in an exchange step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExchangeCase {
    First,
    Second,
}

/// One exchange step: `X′·X_i = ν^{ka}·main + ν^{kb}·other`, where `main` and
/// `other` are the normalized monomials `X_E(a)`, `X_E(b)`.
#[derive(Clone, Debug)]
pub struct ExchangeParts {
    pub case: ExchangeCase,
    pub new_dim: ClassVector,
    /// `Λ(d′*, d_i*)`.
    pub lambda: i64,
    /// `⟨d′, d_i⟩`.
    pub pairing_new_old: i64,
    /// `⟨d_i, d′⟩`.
    pub pairing_old_new: i64,
    pub main: Series,
    pub other: Series,
    pub label: EdgeLabel,
}

impl ExchangeParts {
    /// The calibrated exponents `(ka, kb)`: `(L, L − d)` or `(L + d, L)`.
    pub fn exponents(&self, d: i64) -> (i64, i64) {
        match self.case {
            ExchangeCase::First => (self.lambda, self.lambda - d),
            ExchangeCase::Second => (self.lambda + d, self.lambda),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClusterState {
    pub pair: Arc<CompatiblePair>,
    pub torus: Arc<Torus>,
    pub quiver: QuiverState,
    pub dims: Vec<ClassVector>,
    pub vars: Vec<Series>,
    /// 0-based frozen indices.
    pub frozen: Vec<usize>,
    /// 1-based applied indices.
    pub path: Vec<usize>,
    pub labels: Vec<EdgeLabel>,
}

/// Summands of the root cluster-tilting object: the line bundles `O(x)`
/// with `0 ≤ x ≤ c⃗`, ordered `O, O(c⃗)`, then `O(j·x⃗_i)` tube by tube. For
/// each enlarged tube the summand `O(x⃗_i)` is frozen and listed last.
pub fn seed_summands(pair: &CompatiblePair) -> Vec<GradeVector> {
    let count = pair.p_tilde.count();
    let mut head = vec![
        GradeVector::multiple_of_c(0, count),
        GradeVector::multiple_of_c(1, count),
    ];
    let mut tail = Vec::new();
    for (tube, (&w, &wt)) in pair.p.weights.iter().zip(&pair.p_tilde.weights).enumerate() {
        for j in 1..wt as i64 {
            let mut li = vec![0; count];
            li[tube] = j;
            let x = GradeVector::new(0, li);
            if wt != w && j == 1 {
                tail.push(x);
            } else {
                head.push(x);
            }
        }
    }
    head.extend(tail);
    head
}

/// Character of the i-th root seed summand (0-based), up to `precision`.
pub fn seed_char(
    pair: &CompatiblePair,
    torus: &Arc<Torus>,
    i: usize,
    precision: i64,
) -> Result<Series> {
    let summands = seed_summands(pair);
    let x = summands.get(i).ok_or(Error::IndexOutOfRange {
        index: i + 1,
        max: summands.len(),
    })?;
    Ok(line_bundle_char(pair, torus, x, precision))
}

/// Serialized cluster state; `frozen` is 1-based like `path`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub quiver: IntMatrix,
    pub dims: Vec<ClassVector>,
    pub vars: Vec<SeriesJson>,
    pub frozen: Vec<usize>,
    pub path: Vec<usize>,
}

impl ClusterState {
    /// Root seed with characters known up to `precision` (units of 1/d).
    pub fn initial(pair: &CompatiblePair, precision: i64) -> Result<Self> {
        let torus = Torus::from_pair(pair);
        let summands = seed_summands(pair);
        let dims: Vec<ClassVector> = summands.iter().map(|x| pair.line_bundle_class(x)).collect();
        let vars = summands
            .iter()
            .map(|x| line_bundle_char(pair, &torus, x, precision))
            .collect();
        let quiver = compatible_quiver(pair, &dims)?;
        Ok(ClusterState {
            pair: Arc::new(pair.clone()),
            torus,
            quiver,
            dims,
            vars,
            frozen: pair.frozen.clone(),
            path: Vec::new(),
            labels: Vec::new(),
        })
    }

    /// A state over exact (finite) elements; mutation divides exactly.
    pub fn from_parts(
        pair: &CompatiblePair,
        quiver: QuiverState,
        dims: Vec<ClassVector>,
        vars: Vec<Series>,
    ) -> Self {
        let torus = vars
            .first()
            .map(|v| v.torus().clone())
            .unwrap_or_else(|| Torus::from_pair(pair));
        ClusterState {
            pair: Arc::new(pair.clone()),
            torus,
            quiver,
            dims,
            vars,
            frozen: pair.frozen.clone(),
            path: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.dims.len()
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            quiver: self.quiver.r.clone(),
            dims: self.dims.clone(),
            vars: self.vars.iter().map(Series::to_json).collect(),
            frozen: self.frozen.iter().map(|i| i + 1).collect(),
            path: self.path.clone(),
        }
    }

    /// Lowest precision among the variables (None if all exact).
    pub fn precision(&self) -> Option<i64> {
        self.vars.iter().filter_map(Series::precision).min()
    }

    /// `X_E(c) = ν^{−Σ_{l<r} c_l c_r Λ(d_l*, d_r*)} X_1^{c_1}⋯X_m^{c_m}`.
    pub fn normalized_monomial(&self, c: &[i64]) -> Result<Series> {
        let mut acc = Series::one(&self.torus);
        let mut twist = 0;
        for (l, &cl) in c.iter().enumerate() {
            if cl < 0 {
                return Err(Error::Parse("negative exponent in cluster monomial".into()));
            }
            if cl == 0 {
                continue;
            }
            for (r, &cr) in c.iter().enumerate().skip(l + 1) {
                if cr != 0 {
                    twist += cl * cr * self.pair.lambda_star(&self.dims[l], &self.dims[r])?;
                }
            }
            acc = acc.mul(&self.vars[l].pow(cl as u32)?)?;
        }
        Ok(acc.shift_nu(-twist))
    }

    /// The ingredients of the exchange relation at `i` (0-based), before the
    /// ν-powers are attached.
    pub fn exchange_parts(&self, i: usize) -> Result<ExchangeParts> {
        let m = self.size();
        let a: Vec<i64> = (0..m).map(|j| self.quiver.arrows(j, i)).collect();
        let b: Vec<i64> = (0..m).map(|j| self.quiver.arrows(i, j)).collect();
        let combo = |c: &[i64]| -> ClassVector {
            let mut v: ClassVector = self.dims[i].iter().map(|x| -x).collect();
            for (j, &cj) in c.iter().enumerate() {
                for (x, y) in v.iter_mut().zip(&self.dims[j]) {
                    *x += cj * y;
                }
            }
            v
        };
        let u = combo(&a);
        let w = combo(&b);
        let u_minus_w: ClassVector = u.iter().zip(&w).map(|(x, y)| x - y).collect();
        let w_minus_u: ClassVector = u_minus_w.iter().map(|x| -x).collect();
        let (new_dim, case) = if self.pair.is_effective(&u_minus_w) {
            (u, ExchangeCase::First)
        } else if self.pair.is_effective(&w_minus_u) {
            (w, ExchangeCase::Second)
        } else {
            return Err(Error::NoEffectiveDirection(i + 1));
        };
        let lambda = self.pair.lambda_star(&new_dim, &self.dims[i])?;
        Ok(ExchangeParts {
            case,
            lambda,
            pairing_new_old: self.pair.euler_pairing(&new_dim, &self.dims[i])?,
            pairing_old_new: self.pair.euler_pairing(&self.dims[i], &new_dim)?,
            main: self.normalized_monomial(&a)?,
            other: self.normalized_monomial(&b)?,
            new_dim,
            label: EdgeLabel { index: i + 1, a, b },
        })
    }

    /// New class and right-hand side of the exchange relation at `i` (0-based).
    pub fn exchange(&self, i: usize) -> Result<(ClassVector, Series, EdgeLabel)> {
        let parts = self.exchange_parts(i)?;
        let (ka, kb) = parts.exponents(self.pair.d);
        let rhs = parts
            .main
            .shift_nu(ka)
            .add(&parts.other.shift_nu(kb))?;
        Ok((parts.new_dim, rhs, parts.label))
    }

    /// Mutation at the 1-based index `k`, producing the new variable up to
    /// `precision` when possible (exactly for finite states).
    pub fn mutate_at(&self, k: usize, precision: i64) -> Result<ClusterState> {
        let m = self.size();
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, max: m });
        }
        let i = k - 1;
        if self.frozen.contains(&i) {
            return Err(Error::FrozenIndex(k));
        }
        let (new_dim, rhs, label) = self.exchange(i)?;
        let xi = &self.vars[i];
        let new_var = if rhs.is_exact() && xi.is_exact() {
            rhs.right_divide_exact(xi)?
        } else {
            rhs.right_divide(xi, precision)?
        };
        let mut next = self.clone();
        next.quiver = self.quiver.mutate(i)?;
        next.dims[i] = new_dim;
        next.vars[i] = new_var;
        next.path.push(k);
        next.labels.push(label);
        Ok(next)
    }

    /// Left fold of [`ClusterState::mutate_at`] over a 1-based path.
    pub fn run_path(&self, path: &[usize], precision: i64) -> Result<ClusterState> {
        path.iter()
            .try_fold(self.clone(), |s, &k| s.mutate_at(k, precision))
    }

    /// Whether the classes `d_i` form a Z-basis.
    pub fn dims_unimodular(&self) -> bool {
        let rows: Vec<Vec<i64>> = self.dims.clone();
        unimodular_inverse(&IntMatrix::from_rows(rows)).is_ok()
    }

    /// Truncates every variable to `precision`.
    pub fn truncated(&self, precision: i64) -> ClusterState {
        let mut s = self.clone();
        s.vars = s
            .vars
            .iter()
            .map(|v| {
                if v.is_exact() {
                    v.clone()
                } else {
                    v.truncate(precision)
                }
            })
            .collect();
        s
    }
}

/// Runs `path` from the root seed of `pair`, raising the working precision
/// of the root characters until every variable is known up to `target`.
pub fn run_from_root(pair: &CompatiblePair, path: &[usize], target: i64) -> Result<ClusterState> {
    Ok(run_from_root_with_work(pair, path, target)?.0)
}

/// As [`run_from_root`], also returning the working precision used for the
/// root characters.
pub fn run_from_root_with_work(
    pair: &CompatiblePair,
    path: &[usize],
    target: i64,
) -> Result<(ClusterState, i64)> {
    let step = 4 * pair.d.max(1);
    let mut work = target;
    for _ in 0..64 {
        let attempt = ClusterState::initial(pair, work).and_then(|s| s.run_path(path, work));
        match attempt {
            Ok(state) => match state.precision() {
                Some(p) if p < target => work += target - p,
                _ => return Ok((state.truncated(target), work)),
            },
            Err(Error::InsufficientPrecision { .. }) => work += step,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InsufficientPrecision {
        needed: target,
        available: work,
        den: pair.d,
    })
}

/// The Kronecker instance: the P¹ pair with root classes of `O(−1)`, `O(−2)`
/// and initial variables the monomials `x₁ = X^{(0,1)}`, `x₂ = X^{(1,0)}`.
/// All variables stay finite Laurent polynomials.
pub fn kronecker_state() -> ClusterState {
    let pair = CompatiblePair::p1();
    let torus = Torus::from_pair(&pair);
    let dims = vec![vec![1, -1], vec![1, -2]];
    let quiver = compatible_quiver(&pair, &dims).expect("Kronecker quiver");
    let vars = vec![
        Series::monomial(&torus, vec![0, 1], BarLaurent::one()),
        Series::monomial(&torus, vec![1, 0], BarLaurent::one()),
    ];
    ClusterState::from_parts(&pair, quiver, dims, vars)
}

/// The Kronecker variables `X_{V(l)}` for `lo ≤ l ≤ hi` (with `lo ≤ 1`,
/// `hi ≥ 2`), keyed by `l` together with their classes. The initial cluster
/// is `{V(1), V(2)}`; mutating `V(1)` yields `V(3)`, mutating `V(2)` yields
/// `V(0)`, and alternating continues each direction.
pub fn kronecker_variables(lo: i64, hi: i64) -> Result<BTreeMap<i64, (ClassVector, Series)>> {
    let start = kronecker_state();
    let mut out = BTreeMap::new();
    out.insert(1, (start.dims[0].clone(), start.vars[0].clone()));
    out.insert(2, (start.dims[1].clone(), start.vars[1].clone()));
    // Upwards: V(l+2) replaces V(l).
    let mut s = start.clone();
    for l in 3..=hi {
        let k = if l % 2 == 1 { 1 } else { 2 };
        s = s.mutate_at(k, 0)?;
        out.insert(l, (s.dims[k - 1].clone(), s.vars[k - 1].clone()));
    }
    // Downwards: V(l−2) replaces V(l).
    let mut s = start;
    for l in (lo..=0).rev() {
        let k = if l % 2 == 0 { 2 } else { 1 };
        s = s.mutate_at(k, 0)?;
        out.insert(l, (s.dims[k - 1].clone(), s.vars[k - 1].clone()));
    }
    out.retain(|l, _| (lo..=hi).contains(l));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::P1;

    #[test]
    fn kronecker_quiver_mutation() {
        let q = QuiverState::new(IntMatrix::from_rows(vec![vec![0, 0], vec![2, 0]])).unwrap();
        let q1 = q.mutate(0).unwrap();
        assert_eq!(q1.r.data, vec![vec![0, 2], vec![0, 0]]);
        assert_eq!(q1.mutate(0).unwrap(), q);
        assert_eq!(q.mutate(1).unwrap(), q1);
    }

    #[test]
    fn p1_root_seed() {
        let pair = CompatiblePair::p1();
        let s = ClusterState::initial(&pair, 8).unwrap();
        assert_eq!(s.dims, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(s.quiver.r.data.iter().flatten().sum::<i64>(), 2);
    }

    #[test]
    fn p1_first_mutation_gives_o2() {
        let p1 = P1::new();
        let prec = p1.precision(6);
        let s = run_from_root(&p1.pair, &[1], prec).unwrap();
        assert_eq!(s.dims[0], vec![1, 2]);
        assert!(s.vars[0].agrees_with(&p1.line_bundle(2, prec)));
    }

    #[test]
    fn kronecker_relation() {
        let s = kronecker_state();
        let t = s.mutate_at(1, 0).unwrap();
        let lhs = s.vars[0].mul(&t.vars[0]).unwrap();
        let rhs = s.vars[1]
            .pow(2)
            .unwrap()
            .shift_nu(2)
            .add(&Series::one(&s.torus))
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
