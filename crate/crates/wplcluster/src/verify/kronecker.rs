//! Brute-force subrepresentation counts for the Kronecker quiver over a
//! prime field, and the coefficient extraction that compares them with the
//! engine-produced variables `X_{V(l)}`.
//!
//! The quiver has vertices 1, 2 and two arrows `2 → 1`; a representation is
//! a pair of maps `A, B: V₂ → V₁`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::BarLaurent;
use crate::matrix::IntMatrix;
use crate::series::Series;

/// Largest total dimension the enumeration accepts.
pub const MAX_TOTAL_DIM: usize = 7;

/// A representation `(V₁, V₂; A, B)` over `F_q`; `a` and `b` are
/// `dim V₁ × dim V₂` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KroneckerRep {
    pub dims: (usize, usize),
    pub q: u64,
    pub a: Vec<Vec<u64>>,
    pub b: Vec<Vec<u64>>,
}

/// Dimension vector of the module `V(l)`: the preprojective `P_l = (1−l, −l)`
/// for `l ≤ 0`, the preinjective `I_{l−2} = (l−3, l−2)` for `l ≥ 3`. The
/// objects `V(1)`, `V(2)` are shifted projectives, not modules.
pub fn module_dims(l: i64) -> Result<(usize, usize)> {
    match l {
        l if l <= 0 => Ok(((1 - l) as usize, (-l) as usize)),
        l if l >= 3 => Ok(((l - 3) as usize, (l - 2) as usize)),
        _ => Err(Error::Parse(format!("V({l}) is a shifted projective"))),
    }
}

impl KroneckerRep {
    /// The standard rigid representation of `V(l)`: `A = [I; 0]`, `B = [0; I]`
    /// on `(k+1, k)`, and `A = [I | 0]`, `B = [0 | I]` on `(k, k+1)`.
    pub fn standard(l: i64, q: u64) -> Result<Self> {
        check_field(q)?;
        let (n1, n2) = module_dims(l)?;
        if n1 + n2 > MAX_TOTAL_DIM {
            return Err(Error::TooLarge(format!(
                "total dimension {} exceeds {MAX_TOTAL_DIM}",
                n1 + n2
            )));
        }
        let entry = |i: usize, j: usize, shift_rows: bool, second: bool| -> u64 {
            let hit = match (shift_rows, second) {
                (true, false) => i == j,
                (true, true) => i == j + 1,
                (false, false) => i == j,
                (false, true) => j == i + 1,
            };
            u64::from(hit)
        };
        let tall = n1 > n2;
        let build = |second: bool| -> Vec<Vec<u64>> {
            (0..n1)
                .map(|i| (0..n2).map(|j| entry(i, j, tall, second)).collect())
                .collect()
        };
        Ok(KroneckerRep {
            dims: (n1, n2),
            q,
            a: build(false),
            b: build(true),
        })
    }

    /// Number of subrepresentations `(U₁, U₂)` with `dim = e`.
    pub fn count_subreps(&self, e: (usize, usize)) -> u64 {
        let (n1, n2) = self.dims;
        if e.0 > n1 || e.1 > n2 {
            return 0;
        }
        let q = self.q;
        let uppers = subspaces(n1, e.0, q);
        let mut count = 0;
        for u2 in subspaces(n2, e.1, q) {
            let images: Vec<Vec<u64>> = u2
                .iter()
                .flat_map(|v| [apply(&self.a, v, q), apply(&self.b, v, q)])
                .collect();
            count += uppers
                .iter()
                .filter(|u1| images.iter().all(|w| in_span(u1, w, q)))
                .count() as u64;
        }
        count
    }
}

fn check_field(q: u64) -> Result<()> {
    let prime = q >= 2 && (2..q).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p));
    if !prime {
        return Err(Error::Parse(format!("field size {q} is not a prime")));
    }
    if q > 4 {
        return Err(Error::TooLarge(format!("field size {q} exceeds 4")));
    }
    Ok(())
}

/// Exhaustive count of subrepresentations of dimension `e` in the standard
/// representation of `V(l)` over `F_q`.
pub fn brute_force_kronecker_grassmannian(l: i64, e: (usize, usize), q: u64) -> Result<u64> {
    Ok(KroneckerRep::standard(l, q)?.count_subreps(e))
}

fn apply(m: &[Vec<u64>], v: &[u64], q: u64) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<u64>() % q)
        .collect()
}

/// Membership of `w` in the span of a basis in reduced row-echelon form.
fn in_span(basis: &[Vec<u64>], w: &[u64], q: u64) -> bool {
    let mut r = w.to_vec();
    for row in basis {
        let pivot = row.iter().position(|&x| x != 0).expect("nonzero row");
        let c = r[pivot];
        if c != 0 {
            for (x, y) in r.iter_mut().zip(row) {
                *x = (*x + (q - c) * y) % q;
            }
        }
    }
    r.iter().all(|&x| x == 0)
}

/// Every `k`-dimensional subspace of `F_q^n`, each exactly once, as the rows
/// of its reduced row-echelon form.
pub fn subspaces(n: usize, k: usize, q: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // Free slots: row i, column j > pivot i, j not a pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let pivots = &pivots;
                (p + 1..n)
                    .filter(move |j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for &(i, j) in &free {
                rows[i][j] = code % q;
                code /= q;
            }
            out.push(rows);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Euler matrix of the Kronecker quiver in the basis of simples `S₁, S₂`:
/// `⟨S₂, S₁⟩ = −2`.
pub fn kronecker_euler() -> IntMatrix {
    IntMatrix::from_rows(vec![vec![1, 0], vec![-2, 1]])
}

/// `⟨x, y⟩` for the Kronecker quiver.
pub fn kronecker_pairing(x: &[i64], y: &[i64]) -> i64 {
    kronecker_euler().bilinear(x, y)
}

/// Inverts the exponent map `a = −Eᵗs − E·e` (`s` subobject, `e = v − s`
/// quotient) on a Kronecker variable of dimension vector `v`, returning the
/// raw coefficient of each quotient class.
pub fn extract_kronecker(f: &Series, v: &[i64]) -> Result<BTreeMap<Vec<i64>, BarLaurent>> {
    let e = kronecker_euler();
    let et = e.transpose();
    let b = et.sub(&e);
    let base = et.mul_vec(v)?;
    let mut out = BTreeMap::new();
    for (a, c) in f.terms() {
        // (Eᵗ − E)·e = a + Eᵗv, with Eᵗ − E = [[0, −2], [2, 0]].
        let t: Vec<i64> = a.iter().zip(&base).map(|(x, y)| x + y).collect();
        let (b01, b10) = (b.get(0, 1), b.get(1, 0));
        if t[1] % b10 != 0 || t[0] % b01 != 0 {
            return Err(Error::NotCharacterShaped(a.clone()));
        }
        out.insert(vec![t[1] / b10, t[0] / b01], c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: u64, k: u64, q: u64) -> u64 {
        let mut num = 1;
        let mut den = 1;
        for i in 0..k {
            num *= q.pow((n - i) as u32) - 1;
            den *= q.pow((i + 1) as u32) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for q in [2, 3] {
            for n in 0..=4 {
                for k in 0..=n {
                    assert_eq!(
                        subspaces(n, k, q).len() as u64,
                        gaussian(n as u64, k as u64, q),
                        "n={n} k={k} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn small_counts() {
        for q in [2, 3] {
            assert_eq!(brute_force_kronecker_grassmannian(-1, (1, 0), q).unwrap(), q + 1);
            assert_eq!(brute_force_kronecker_grassmannian(-1, (1, 1), q).unwrap(), 0);
            assert_eq!(brute_force_kronecker_grassmannian(-1, (0, 0), q).unwrap(), 1);
            assert_eq!(brute_force_kronecker_grassmannian(-1, (2, 1), q).unwrap(), 1);
        }
    }

    #[test]
    fn standard_reps() {
        let p = KroneckerRep::standard(-2, 2).unwrap();
        assert_eq!(p.dims, (3, 2));
        assert_eq!(p.a, vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
        assert_eq!(p.b, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let i = KroneckerRep::standard(4, 2).unwrap();
        assert_eq!(i.dims, (1, 2));
        assert_eq!(i.a, vec![vec![1, 0]]);
        assert_eq!(i.b, vec![vec![0, 1]]);
        assert!(KroneckerRep::standard(1, 2).is_err());
        assert!(matches!(KroneckerRep::standard(0, 5), Err(Error::TooLarge(_))));
        assert!(KroneckerRep::standard(0, 4).is_err());
        assert!(matches!(KroneckerRep::standard(-4, 2), Err(Error::TooLarge(_))));
    }
}
