//! Exponent vectors, lexicographic order and monomial bases.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative exponent vector; variable 1 is the first entry. The derived
/// ordering is lex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn new(exps: Vec<u32>) -> Self {
        ExpVec(exps)
    }

    pub fn zero(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExpVec(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Drops the last coordinate.
    pub fn dehomogenize(&self) -> ExpVec {
        ExpVec(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for ExpVec {
    fn from(v: Vec<u32>) -> Self {
        ExpVec(v)
    }
}

impl<const N: usize> From<[u32; N]> for ExpVec {
    fn from(v: [u32; N]) -> Self {
        ExpVec(v.to_vec())
    }
}

/// Lexicographic comparison: the first differing coordinate decides.
pub fn lex_compare(a: &ExpVec, b: &ExpVec) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.0.cmp(&b.0))
}

/// Positive weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVec(Vec<u64>);

impl WeightVec {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        Ok(WeightVec(weights))
    }

    /// `((d+1)^(n-1), ..., d+1, 1)`: on degree-`d` vectors the induced order is lex.
    pub fn lex_weight(n: usize, d: u32) -> Self {
        let base = d as u64 + 1;
        WeightVec((0..n).rev().map(|k| base.pow(k as u32)).collect())
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }

    pub fn apply(&self, v: &ExpVec) -> u128 {
        self.0
            .iter()
            .zip(&v.0)
            .map(|(&w, &e)| w as u128 * e as u128)
            .sum()
    }
}

/// Appends `d - |v|`.
pub fn homogenize(v: &ExpVec, d: u32) -> Result<ExpVec> {
    let s = v.degree();
    if s > d {
        return Err(Error::InvalidArgument(format!(
            "exponent sum {s} exceeds degree {d}"
        )));
    }
    let mut e = v.0.clone();
    e.push(d - s);
    Ok(ExpVec(e))
}

/// All exponent vectors of degree `d` in `n` variables, ascending in lex.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExpVec> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, d, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, rem: u32, out: &mut Vec<ExpVec>) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(ExpVec(cur.clone()));
        return;
    }
    for e in 0..=rem {
        cur[pos] = e;
        fill(cur, pos + 1, rem - e, out);
    }
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lex_examples() {
        let a = ExpVec::from([2, 0, 0]);
        let b = ExpVec::from([0, 0, 2]);
        assert_eq!(lex_compare(&a, &b).unwrap(), Ordering::Greater);
        assert_eq!(lex_compare(&a, &a).unwrap(), Ordering::Equal);
        assert!(lex_compare(&a, &ExpVec::from([1, 1])).is_err());
    }

    #[test]
    fn homogenize_examples() {
        assert_eq!(
            homogenize(&ExpVec::from([0, 0]), 2).unwrap(),
            ExpVec::from([0, 0, 2])
        );
        assert_eq!(
            homogenize(&ExpVec::from([1, 0]), 2).unwrap(),
            ExpVec::from([1, 0, 1])
        );
        assert!(homogenize(&ExpVec::from([2, 1]), 2).is_err());
    }

    #[test]
    fn monomial_bases() {
        assert_eq!(
            monomials_of_degree(2, 1),
            vec![ExpVec::from([0, 1]), ExpVec::from([1, 0])]
        );
        let m = monomials_of_degree(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], ExpVec::from([0, 0, 2]));
        assert_eq!(m[5], ExpVec::from([2, 0, 0]));
        assert_eq!(monomials_of_degree(4, 5).len(), 56);
        assert_eq!(monomials_of_degree(3, 0), vec![ExpVec::zero(3)]);
    }

    #[test]
    fn weight_order_matches_lex_exhaustively() {
        for n in 1..=4 {
            for d in 0..=6 {
                let w = WeightVec::lex_weight(n, d);
                let ms = monomials_of_degree(n, d);
                for a in &ms {
                    for b in &ms {
                        assert_eq!(w.apply(a).cmp(&w.apply(b)), lex_compare(a, b).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(2, 3), 0);
    }

    fn exp_pair() -> impl Strategy<Value = (ExpVec, ExpVec, u32)> {
        (1usize..5, 0u32..8).prop_flat_map(|(n, d)| {
            let ms = monomials_of_degree(n, d);
            let k = ms.len();
            (0..k, 0..k).prop_map(move |(i, j)| (ms[i].clone(), ms[j].clone(), d))
        })
    }

    proptest! {
        #[test]
        fn random_pairs_weight_agrees((a, b, d) in exp_pair()) {
            let w = WeightVec::lex_weight(a.len(), d);
            prop_assert_eq!(w.apply(&a).cmp(&w.apply(&b)), lex_compare(&a, &b).unwrap());
        }

        #[test]
        fn homogenize_round_trip(v in proptest::collection::vec(0u32..5, 1..5), extra in 0u32..4) {
            let v = ExpVec(v);
            let d = v.degree() + extra;
            let h = homogenize(&v, d).unwrap();
            prop_assert_eq!(h.degree(), d);
            prop_assert_eq!(h.dehomogenize(), v);
        }

        #[test]
        fn sort_dedup_idempotent(vs in proptest::collection::vec(proptest::collection::vec(0u32..3, 3), 0..20)) {
            let mut a: Vec<ExpVec> = vs.into_iter().map(ExpVec).collect();
            a.sort_by(|x, y| lex_compare(x, y).unwrap());
            a.dedup();
            let mut b = a.clone();
            b.sort_by(|x, y| lex_compare(x, y).unwrap());
            b.dedup();
            prop_assert_eq!(a, b);
        }
    }
}
