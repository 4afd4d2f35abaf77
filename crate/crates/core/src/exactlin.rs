//! Dense matrices over exact rationals and seeded random charts.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Default entry bound for random charts.
pub const DEFAULT_CHART_BOUND: i64 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Rat>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(RatMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form with pivots chosen by scanning columns in
    /// `column_order`. Pivot columns are returned in scan order; the pivot rows
    /// come first, followed by the zero rows.
    pub fn rref(&self, column_order: &[usize]) -> Result<(RatMatrix, Vec<usize>)> {
        check_permutation(column_order, self.cols)?;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for &c in column_order {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(next, p);
            let inv = m.get(next, c).recip();
            m.scale_row(next, &inv);
            for r in 0..m.rows {
                if r != next && !m.get(r, c).is_zero() {
                    let f = m.get(r, c).clone();
                    m.sub_row_multiple(r, next, &f);
                }
            }
            pivots.push(c);
            next += 1;
        }
        Ok((m, pivots))
    }

    /// RREF in the natural column order.
    pub fn rref_natural(&self) -> (RatMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref(&order).expect("identity is a permutation")
    }

    pub fn rank(&self) -> usize {
        self.rref_natural().1.len()
    }

    pub fn determinant(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.recip();
            for r in c + 1..m.rows {
                if !m.get(r, c).is_zero() {
                    let f = m.get(r, c) * &inv;
                    m.sub_row_multiple(r, c, &f);
                }
            }
        }
        Ok(det)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rat::one());
        }
        let (red, pivots) = aug.rref_natural();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Unique solution of a square system, `None` when singular.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        self.inverse().map(|inv| inv.mul_vec(rhs).expect("square"))
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (red, pivots) = self.rref_natural();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -red.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Negative definiteness of a symmetric matrix via pivots of `-self`
    /// without row exchanges (all pivots must be positive).
    pub fn is_negative_definite(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut m = self.clone();
        for c in 0..m.cols {
            let piv = -m.get(c, c);
            if !piv.is_positive() {
                return false;
            }
            let inv = m.get(c, c).recip();
            for r in c + 1..m.rows {
                if !m.get(r, c).is_zero() {
                    let f = m.get(r, c) * &inv;
                    m.sub_row_multiple(r, c, &f);
                }
            }
        }
        true
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rat) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            if !self.data[idx].is_zero() {
                self.data[idx] *= f;
            }
        }
    }

    /// row[target] -= f * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Rat) {
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let delta = f * s;
            self.data[target * self.cols + c] -= delta;
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|r| self.row(r)))
            .finish()
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "column order has length {}, expected {n}",
            order.len()
        )));
    }
    for &c in order {
        if c >= n || seen[c] {
            return Err(Error::InvalidArgument(
                "column order is not a permutation".into(),
            ));
        }
        seen[c] = true;
    }
    Ok(())
}

/// Seed of the `k`-th independent stream derived from `master`.
pub fn derive_seed(master: u64, k: u64) -> u64 {
    // splitmix64 finalizer over a golden-ratio stride
    let mut z = master.wrapping_add((k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit lower-triangular matrix with strictly-lower entries uniform in
/// `[-bound, bound]`.
pub fn random_unit_lower_triangular(n: usize, bound: i64, seed: u64) -> Result<RatMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if bound < 2 {
        return Err(Error::InvalidArgument(format!("bound {bound} < 2")));
    }
    let mut rng = rng_from_seed(seed);
    let mut m = RatMatrix::identity(n);
    for r in 1..n {
        for c in 0..r {
            m.set(r, c, Rat::from(rng.gen_range(-bound..=bound)));
        }
    }
    Ok(m)
}

/// Random integer matrix with entries in `[-bound, bound]`, resampled until
/// the determinant is nonzero.
pub fn random_invertible(n: usize, bound: i64, seed: u64) -> Result<RatMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument(format!("bound {bound} < 1")));
    }
    let mut rng = rng_from_seed(seed);
    loop {
        let rows = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Rat::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        let m = RatMatrix::from_rows(rows)?;
        if !m.determinant()?.is_zero() {
            return Ok(m);
        }
    }
}
