//! Exact rational convex polytopes in ambient dimension at most 6.
//!
//! Every [`RationalPolytope`] is kept in a canonical form: vertices are the
//! sorted extreme points, halfspaces are sorted, irredundant, with primitive
//! integer normals. Two polytopes are equal as sets iff they compare equal.

mod dd;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{dot, RatMatrix};
use crate::rat::Rat;

pub const MAX_DIM: usize = 6;

pub type Point = Vec<Rat>;

/// The closed halfspace `normal . x <= offset`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.offset - dot(&self.normal, x)
    }

    /// Rescales so the normal is a primitive integer vector. `None` for a zero normal.
    fn canonical(&self) -> Option<Halfspace> {
        let ints = integer_row(&self.normal);
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return None;
        }
        let scale = {
            let l = crate::rat::denominator_lcm(&self.normal);
            Rat::from(l) / Rat::from(g)
        };
        Some(Halfspace {
            normal: self.normal.iter().map(|x| x * &scale).collect(),
            offset: &self.offset * &scale,
        })
    }
}

impl fmt::Debug for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}.x <= {}", self.normal, self.offset)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPolytope {
    dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
    affine_dim: Option<usize>,
}

/// Scales a rational row to a primitive-free integer row by the lcm of denominators.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = crate::rat::denominator_lcm(row);
    row.iter().map(|x| (x.numer() * &l) / x.denom()).collect()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

impl RationalPolytope {
    pub fn empty(dim: usize) -> Self {
        RationalPolytope {
            dim,
            vertices: Vec::new(),
            halfspaces: vec![Halfspace::new(vec![Rat::zero(); dim], -Rat::one())],
            affine_dim: None,
        }
    }

    /// Convex hull of a nonempty finite point set.
    pub fn hull(points: &[Point]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyInput("point list"));
        };
        let n = first.len();
        check_dim(n)?;
        for p in points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let base = pts[0].clone();

        let diffs: Vec<Vec<Rat>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let (pivots, equalities) = if diffs.is_empty() {
            let eqs = (0..n)
                .map(|i| {
                    let mut e = vec![Rat::zero(); n];
                    e[i] = Rat::one();
                    e
                })
                .collect();
            (Vec::new(), eqs)
        } else {
            let m = RatMatrix::from_rows_with_cols(diffs, n)?;
            let (_, piv) = m.rref_natural();
            (piv, m.nullspace())
        };
        let r = pivots.len();

        let mut halfspaces = Vec::new();
        for v in &equalities {
            let c = dot(v, &base);
            halfspaces.push(Halfspace::new(v.clone(), c.clone()));
            halfspaces.push(Halfspace::new(v.iter().map(|x| -x).collect(), -c));
        }

        let vertices = if r == 0 {
            vec![base]
        } else {
            let proj: Vec<Vec<Rat>> = pts
                .iter()
                .map(|p| pivots.iter().map(|&i| p[i].clone()).collect())
                .collect();
            // facets of the projected hull are extreme rays of {(b, a) : b - a.q >= 0}
            let rows: Vec<Vec<BigInt>> = proj
                .iter()
                .map(|q| {
                    let mut row = vec![Rat::one()];
                    row.extend(q.iter().map(|x| -x));
                    integer_row(&row)
                })
                .collect();
            let cone = dd::double_description(&rows, r + 1);
            let mut facets: Vec<(Vec<Rat>, Rat)> = Vec::new();
            let mut tight_sets = Vec::new();
            for ray in &cone.rays {
                if ray.v[1..].iter().all(Zero::is_zero) {
                    continue;
                }
                let b = Rat::from(ray.v[0].clone());
                let a: Vec<Rat> = ray.v[1..].iter().map(|x| Rat::from(x.clone())).collect();
                tight_sets.push(ray.zero.clone());
                facets.push((a, b));
            }
            for (a, b) in &facets {
                let mut normal = vec![Rat::zero(); n];
                for (k, &i) in pivots.iter().enumerate() {
                    normal[i] = a[k].clone();
                }
                halfspaces.push(Halfspace::new(normal, b.clone()));
            }
            (0..pts.len())
                .filter(|&j| {
                    let normals: Vec<Vec<Rat>> = facets
                        .iter()
                        .zip(&tight_sets)
                        .filter(|(_, z)| z.contains(j))
                        .map(|((a, _), _)| a.clone())
                        .collect();
                    normals.len() >= r
                        && RatMatrix::from_rows_with_cols(normals, r)
                            .map(|m| m.rank() == r)
                            .unwrap_or(false)
                })
                .map(|j| pts[j].clone())
                .collect()
        };

        let mut hs: Vec<Halfspace> = halfspaces.iter().filter_map(Halfspace::canonical).collect();
        hs.sort();
        hs.dedup();
        Ok(RationalPolytope {
            dim: n,
            vertices,
            halfspaces: hs,
            affine_dim: Some(r),
        })
    }

    /// Polytope `{x : normal . x <= offset for all halfspaces}`; errors if unbounded.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        check_dim(dim)?;
        for h in halfspaces {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.normal.len(),
                });
            }
        }
        if dim == 0 {
            return if halfspaces.iter().all(|h| !h.offset.is_negative()) {
                Self::hull(&[Vec::new()])
            } else {
                Ok(Self::empty(0))
            };
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(halfspaces.len() + 1);
        let mut x0 = vec![BigInt::zero(); dim + 1];
        x0[0] = BigInt::one();
        rows.push(x0);
        for h in halfspaces {
            let mut row = vec![h.offset.clone()];
            row.extend(h.normal.iter().map(|x| -x));
            rows.push(integer_row(&row));
        }
        let cone = dd::double_description(&rows, dim + 1);
        let mut vertices = Vec::new();
        let mut recession = !cone.lineality.is_empty();
        for ray in &cone.rays {
            if ray.v[0].is_positive() {
                let w = Rat::from(ray.v[0].clone());
                vertices.push(
                    ray.v[1..]
                        .iter()
                        .map(|x| Rat::from(x.clone()) / &w)
                        .collect(),
                );
            } else {
                recession = true;
            }
        }
        if vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        if recession {
            return Err(Error::Unbounded);
        }
        Self::hull(&vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the affine hull, `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == Some(self.dim)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn contains_polytope(&self, other: &RationalPolytope) -> bool {
        other.dim == self.dim && other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn is_in_orthant(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| !x.is_negative()))
    }

    pub fn max_coord(&self, i: usize) -> Option<Rat> {
        self.vertices.iter().map(|v| v[i].clone()).max()
    }

    pub fn min_coord(&self, i: usize) -> Option<Rat> {
        self.vertices.iter().map(|v| v[i].clone()).min()
    }

    /// Maximum of a linear functional over the polytope.
    pub fn max_linear(&self, c: &[Rat]) -> Option<Rat> {
        self.vertices.iter().map(|v| dot(c, v)).max()
    }

    /// Largest `t >= 0` with `t * dir` in the polytope, which must contain the origin.
    /// `None` when the ray is unbounded within the halfspaces (cannot happen for bounded polytopes
    /// unless `dir` is zero).
    pub fn max_ray_scalar(&self, dir: &[Rat]) -> Result<Option<Rat>> {
        let origin = vec![Rat::zero(); self.dim];
        if !self.contains(&origin) {
            return Err(Error::OriginNotInBody);
        }
        Ok(self
            .halfspaces
            .iter()
            .filter_map(|h| {
                let ad = dot(&h.normal, dir);
                ad.is_positive().then(|| &h.offset / ad)
            })
            .min())
    }

    /// Euclidean volume in the ambient dimension; 0 unless full-dimensional.
    pub fn volume(&self) -> Rat {
        match self.affine_dim {
            None => Rat::zero(),
            Some(_) if self.dim == 0 => Rat::one(),
            Some(r) if r < self.dim => Rat::zero(),
            Some(_) => self.full_volume(),
        }
    }

    fn full_volume(&self) -> Rat {
        let d = self.dim;
        if d == 1 {
            return self.max_coord(0).unwrap() - self.min_coord(0).unwrap();
        }
        let v0 = &self.vertices[0];
        let mut total = Rat::zero();
        for h in &self.halfspaces {
            let height = h.slack(v0);
            if height.is_zero() {
                continue;
            }
            let j = h
                .normal
                .iter()
                .position(|x| !x.is_zero())
                .expect("facet normal");
            let face: Vec<Point> = self
                .vertices
                .iter()
                .filter(|v| h.slack(v).is_zero())
                .map(|v| drop_coord(v, j))
                .collect();
            let shadow = Self::hull(&face).expect("facet has vertices");
            total += height / h.normal[j].abs() * shadow.volume();
        }
        total / Rat::from(d)
    }

    /// Intersection with `coeffs . x = value`, re-embedded by eliminating coordinate `drop`
    /// (which must have a nonzero coefficient).
    pub fn section(&self, coeffs: &[Rat], value: &Rat, drop: usize) -> Result<Self> {
        if coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coeffs.len(),
            });
        }
        if drop >= self.dim || coeffs[drop].is_zero() {
            return Err(Error::InvalidArgument(format!(
                "cannot eliminate coordinate {drop}"
            )));
        }
        if self.is_empty() {
            return Ok(Self::empty(self.dim - 1));
        }
        // x_drop = (value - sum_{k != drop} c_k x_k) / c_drop
        let cd = &coeffs[drop];
        let hs: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| {
                let f = &h.normal[drop] / cd;
                let normal = (0..self.dim)
                    .filter(|&k| k != drop)
                    .map(|k| &h.normal[k] - &f * &coeffs[k])
                    .collect();
                Halfspace::new(normal, &h.offset - &f * value)
            })
            .collect();
        Self::from_halfspaces(self.dim - 1, &hs)
    }

    /// Intersection with `x_coord = value`, dropping that coordinate.
    pub fn slice(&self, coord: usize, value: &Rat) -> Result<Self> {
        if coord >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "coordinate {coord} out of range"
            )));
        }
        let mut e = vec![Rat::zero(); self.dim];
        e[coord] = Rat::one();
        self.section(&e, value, coord)
    }

    /// Shadow after forgetting coordinate `coord`.
    pub fn project_drop(&self, coord: usize) -> Result<Self> {
        if coord >= self.dim {
            return Err(Error::InvalidArgument(format!(
                "coordinate {coord} out of range"
            )));
        }
        if self.is_empty() {
            return Ok(Self::empty(self.dim - 1));
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| drop_coord(v, coord)).collect();
        Self::hull(&pts)
    }

    pub fn minkowski_sum(&self, other: &RationalPolytope) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.dim));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::hull(&pts)
    }

    pub fn intersect(&self, other: &RationalPolytope) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Self::from_halfspaces(self.dim, &hs)
    }

    /// Convex hull of the union.
    pub fn join(&self, other: &RationalPolytope) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut pts = self.vertices.clone();
        pts.extend(other.vertices.iter().cloned());
        if pts.is_empty() {
            return Ok(Self::empty(self.dim));
        }
        Self::hull(&pts)
    }

    pub fn scale(&self, factor: &Rat) -> Result<Self> {
        self.map_points(|v| v.iter().map(|x| x * factor).collect())
    }

    /// Image under the linear map `x -> m x`.
    pub fn map_linear(&self, m: &RatMatrix) -> Result<Self> {
        if m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.cols(),
            });
        }
        if self.is_empty() {
            return Ok(Self::empty(m.rows()));
        }
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<_>>()?;
        Self::hull(&pts)
    }

    fn map_points(&self, f: impl Fn(&Point) -> Point) -> Result<Self> {
        if self.is_empty() {
            return Ok(self.clone());
        }
        let pts: Vec<Point> = self.vertices.iter().map(f).collect();
        Self::hull(&pts)
    }

    pub fn straighten(&self) -> Result<Self> {
        let s = StraightenMap::new(self.dim);
        self.map_points(|v| s.apply(v))
    }

    pub fn unstraighten(&self) -> Result<Self> {
        let s = StraightenMap::new(self.dim);
        self.map_points(|v| s.apply_inverse(v))
    }

    /// Integer points, by enumeration over the bounding box.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| ceil_i64(&self.min_coord(i).unwrap()))
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| {
                self.max_coord(i)
                    .unwrap()
                    .floor()
                    .try_into()
                    .unwrap_or(i64::MAX)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return out;
        }
        loop {
            let p: Vec<Rat> = cur.iter().map(|&x| Rat::from(x)).collect();
            if self.contains(&p) {
                out.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == self.dim {
                    return out;
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }

    /// Coordinate simplex `hull(0, t_1 e_1, ..., t_n e_n)`.
    pub fn simplex(t: &[Rat]) -> Result<Self> {
        check_params(t)?;
        let n = t.len();
        let mut pts = vec![vec![Rat::zero(); n]];
        for (i, ti) in t.iter().enumerate() {
            let mut p = vec![Rat::zero(); n];
            p[i] = ti.clone();
            pts.push(p);
        }
        Self::hull(&pts)
    }

    /// `{x >= 0 : x_1 + ... + x_i <= t_i for all i}`.
    pub fn gamma(t: &[Rat]) -> Result<Self> {
        check_params(t)?;
        let n = t.len();
        let mut hs = Vec::new();
        for i in 0..n {
            let mut neg = vec![Rat::zero(); n];
            neg[i] = -Rat::one();
            hs.push(Halfspace::new(neg, Rat::zero()));
            let partial = (0..n)
                .map(|k| if k <= i { Rat::one() } else { Rat::zero() })
                .collect();
            hs.push(Halfspace::new(partial, t[i].clone()));
        }
        Self::from_halfspaces(n, &hs)
    }

    /// `prod [0, t_i]`.
    pub fn box_polytope(t: &[Rat]) -> Result<Self> {
        check_params(t)?;
        let n = t.len();
        let mut hs = Vec::new();
        for i in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            hs.push(Halfspace::new(e.clone(), t[i].clone()));
            e[i] = -Rat::one();
            hs.push(Halfspace::new(e, Rat::zero()));
        }
        Self::from_halfspaces(n, &hs)
    }

    /// Preimage of the coordinate simplex under the straightening map.
    pub fn inverted_simplex(t: &[Rat]) -> Result<Self> {
        Self::simplex(t)?.unstraighten()
    }

    pub fn inverted_gamma(t: &[Rat]) -> Result<Self> {
        Self::gamma(t)?.unstraighten()
    }
}

fn check_params(t: &[Rat]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::EmptyInput("parameter list"));
    }
    check_dim(t.len())?;
    if t.iter().any(Rat::is_negative) {
        return Err(Error::InvalidArgument("negative polytope parameter".into()));
    }
    Ok(())
}

fn ceil_i64(x: &Rat) -> i64 {
    let f = x.floor();
    let c = if Rat::from(f.clone()) == *x { f } else { f + 1 };
    c.try_into().unwrap_or(i64::MIN)
}

pub(crate) fn drop_coord(v: &[Rat], j: usize) -> Point {
    v.iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, x)| x.clone())
        .collect()
}

impl fmt::Debug for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalPolytope")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices)
            .finish()
    }
}

/// `S(v) = (v_2, ..., v_n, v_1 - v_2 - ... - v_n)`, unimodular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StraightenMap {
    n: usize,
}

impl StraightenMap {
    pub fn new(n: usize) -> Self {
        StraightenMap { n }
    }

    pub fn apply(&self, v: &[Rat]) -> Point {
        if self.n <= 1 {
            return v.to_vec();
        }
        let mut out: Point = v[1..].to_vec();
        let rest: Rat = v[1..].iter().sum();
        out.push(&v[0] - rest);
        out
    }

    pub fn apply_inverse(&self, a: &[Rat]) -> Point {
        if self.n <= 1 {
            return a.to_vec();
        }
        let mut out = vec![a.iter().sum::<Rat>()];
        out.extend_from_slice(&a[..self.n - 1]);
        out
    }

    pub fn matrix(&self) -> RatMatrix {
        let n = self.n;
        let mut m = RatMatrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[c] = Rat::one();
            for (r, x) in self.apply(&e).into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
}

impl Serialize for RationalPolytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.clone(),
            halfspaces: self.halfspaces.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(deserializer)?;
        RationalPolytope::from_descriptions(raw.dim, &raw.vertices, &raw.halfspaces)
            .map_err(serde::de::Error::custom)
    }
}

impl RationalPolytope {
    /// Rebuilds a polytope from both descriptions, rejecting them if they disagree.
    pub fn from_descriptions(
        dim: usize,
        vertices: &[Point],
        halfspaces: &[Halfspace],
    ) -> Result<Self> {
        let from_h = Self::from_halfspaces(dim, halfspaces)?;
        let from_v = if vertices.is_empty() {
            Self::empty(dim)
        } else {
            Self::hull(vertices)?
        };
        if from_v.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: from_v.dim,
            });
        }
        if from_h != from_v {
            return Err(Error::Parse(
                "vertex and halfspace descriptions disagree".into(),
            ));
        }
        Ok(from_v)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{factorial, rat};
    use proptest::prelude::*;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| Rat::from(x)).collect()
    }

    fn rv(xs: &[i64]) -> Vec<Rat> {
        pt(xs)
    }

    #[test]
    fn tilted_triangle() {
        let p = RationalPolytope::hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[1, 1])]).unwrap();
        assert_eq!(p.halfspaces().len(), 3);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.volume(), rat(1, 1));
        assert_eq!(
            p.straighten().unwrap(),
            RationalPolytope::simplex(&rv(&[1, 2])).unwrap()
        );
    }

    #[test]
    fn point_polytope() {
        let p = RationalPolytope::hull(&[pt(&[1, 2])]).unwrap();
        assert_eq!(p.affine_dim(), Some(0));
        assert!(p.contains(&pt(&[1, 2])));
        assert!(!p.contains(&pt(&[1, 3])));
        assert_eq!(p.volume(), Rat::zero());
    }

    #[test]
    fn redundant_points_dropped() {
        let p = RationalPolytope::hull(&[
            pt(&[0, 0]),
            pt(&[1, 0]),
            pt(&[0, 1]),
            pt(&[1, 1]),
            pt(&[0, 2]),
        ])
        .unwrap();
        assert_eq!(p, RationalPolytope::gamma(&rv(&[1, 2])).unwrap());
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), rat(3, 2));
    }

    #[test]
    fn gamma_halfspaces_by_brute_force() {
        // the four candidate facets of the lattice hull: x >= 0, y >= 0, x <= 1, x + y <= 2
        let g = RationalPolytope::gamma(&rv(&[1, 2])).unwrap();
        let lattice = [[0, 0], [1, 0], [0, 1], [1, 1], [0, 2]];
        let facets: [(&[i64], i64); 4] = [(&[-1, 0], 0), (&[0, -1], 0), (&[1, 0], 1), (&[1, 1], 2)];
        for (a, b) in facets {
            let h = Halfspace::new(rv(a), Rat::from(b));
            assert!(g.halfspaces().contains(&h));
            let tight = lattice
                .iter()
                .filter(|p| h.slack(&pt(&p[..])).is_zero())
                .count();
            assert!(tight >= 2);
            assert!(lattice.iter().all(|p| h.contains(&pt(&p[..]))));
        }
        assert_eq!(g.halfspaces().len(), 4);
    }

    #[test]
    fn volumes() {
        for n in 1..=5 {
            let t = vec![rat(3, 2); n];
            let s = RationalPolytope::simplex(&t).unwrap();
            assert_eq!(s.volume(), rat(3, 2).pow(n as u32) / factorial(n));
        }
        let body =
            RationalPolytope::hull(&[pt(&[0, 0]), pt(&[7, 0]), pt(&[3, 2]), pt(&[1, 1])]).unwrap();
        assert_eq!(body.volume(), rat(15, 2));
        let cube = RationalPolytope::box_polytope(&rv(&[1, 2, 3])).unwrap();
        assert_eq!(cube.volume(), rat(6, 1));
    }

    #[test]
    fn slices() {
        let s = RationalPolytope::simplex(&rv(&[1, 2])).unwrap();
        let seg = s.slice(0, &Rat::zero()).unwrap();
        assert_eq!(seg, RationalPolytope::hull(&[pt(&[0]), pt(&[2])]).unwrap());
        let tri = RationalPolytope::hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[1, 1])]).unwrap();
        assert_eq!(
            tri.slice(0, &Rat::one()).unwrap(),
            RationalPolytope::hull(&[pt(&[0]), pt(&[1])]).unwrap()
        );
        assert!(tri.slice(0, &rat(3, 1)).unwrap().is_empty());
        assert!(tri.slice(0, &rat(-1, 1)).unwrap().is_empty());
        let pt_slice = tri.slice(0, &rat(2, 1)).unwrap();
        assert_eq!(pt_slice.vertices(), &[pt(&[0])]);
    }

    #[test]
    fn projections() {
        let cube = RationalPolytope::box_polytope(&rv(&[1, 1, 1])).unwrap();
        assert_eq!(
            cube.project_drop(2).unwrap(),
            RationalPolytope::box_polytope(&rv(&[1, 1])).unwrap()
        );
        let s = RationalPolytope::simplex(&rv(&[1, 2, 3])).unwrap();
        assert_eq!(
            s.project_drop(2).unwrap(),
            RationalPolytope::simplex(&rv(&[1, 2])).unwrap()
        );
    }

    #[test]
    fn minkowski() {
        let s = RationalPolytope::simplex(&rv(&[1, 1])).unwrap();
        let origin = RationalPolytope::hull(&[pt(&[0, 0])]).unwrap();
        assert_eq!(s.minkowski_sum(&origin).unwrap(), s);
        assert_eq!(
            s.minkowski_sum(&s).unwrap(),
            RationalPolytope::simplex(&rv(&[2, 2])).unwrap()
        );
        let a = RationalPolytope::hull(&[pt(&[0, 0]), pt(&[1, 0])]).unwrap();
        let b = RationalPolytope::hull(&[pt(&[0, 0]), pt(&[1, 1])]).unwrap();
        let par = a.minkowski_sum(&b).unwrap();
        assert_eq!(par.vertices().len(), 4);
        assert_eq!(par.volume(), Rat::one());
    }

    #[test]
    fn bounding_polytope_relations() {
        for t in [1, 2, 5] {
            let v = vec![Rat::from(t); 3];
            assert_eq!(
                RationalPolytope::simplex(&v).unwrap(),
                RationalPolytope::gamma(&v).unwrap()
            );
        }
        let t = rv(&[1, 2, 4]);
        let g = RationalPolytope::gamma(&t).unwrap();
        assert!(RationalPolytope::box_polytope(&t)
            .unwrap()
            .contains_polytope(&g));
        assert!(g.contains_polytope(&RationalPolytope::simplex(&t).unwrap()));
    }

    #[test]
    fn inverted_shapes_straighten_back() {
        let t = rv(&[1, 2, 2]);
        let ig = RationalPolytope::inverted_gamma(&t).unwrap();
        assert_eq!(
            ig.straighten().unwrap(),
            RationalPolytope::gamma(&t).unwrap()
        );
        let is = RationalPolytope::inverted_simplex(&rv(&[1, 2, 3])).unwrap();
        let mut expected = [
            pt(&[0, 0, 0]),
            pt(&[1, 1, 0]),
            pt(&[2, 0, 2]),
            pt(&[3, 0, 0]),
        ];
        expected.sort();
        assert_eq!(is.vertices(), &expected[..]);
    }

    #[test]
    fn unbounded_and_empty() {
        let h = [Halfspace::new(rv(&[1, 0]), Rat::one())];
        assert_eq!(
            RationalPolytope::from_halfspaces(2, &h),
            Err(Error::Unbounded)
        );
        let infeasible = [
            Halfspace::new(rv(&[1]), rat(-1, 1)),
            Halfspace::new(rv(&[-1]), Rat::zero()),
        ];
        assert!(RationalPolytope::from_halfspaces(1, &infeasible)
            .unwrap()
            .is_empty());
        assert!(RationalPolytope::hull(&[]).is_err());
        assert!(RationalPolytope::hull(&[pt(&[0]), pt(&[0, 1])]).is_err());
        assert!(RationalPolytope::hull(&[vec![Rat::zero(); 7]]).is_err());
        assert!(RationalPolytope::simplex(&rv(&[1, -1])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = RationalPolytope::hull(&[pt(&[0, 0]), pt(&[7, 0]), pt(&[3, 2]), pt(&[1, 1])])
            .unwrap()
            .scale(&rat(1, 3))
            .unwrap();
        let s = p.to_json();
        assert!(s.contains("\"7/3\""));
        let q = RationalPolytope::from_json(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_json(), s);
        let e = RationalPolytope::empty(2);
        assert_eq!(RationalPolytope::from_json(&e.to_json()).unwrap(), e);
        let bad = s.replace("\"7/3\"", "\"8/3\"");
        assert!(RationalPolytope::from_json(&bad).is_err());
    }

    #[test]
    fn max_ray() {
        let s = RationalPolytope::inverted_simplex(&rv(&[1, 2, 3])).unwrap();
        assert_eq!(s.max_ray_scalar(&rv(&[1, 1, 0])).unwrap(), Some(rat(1, 1)));
        assert_eq!(s.max_ray_scalar(&rv(&[1, 0, 1])).unwrap(), Some(rat(2, 1)));
        let off = RationalPolytope::hull(&[pt(&[1, 1]), pt(&[2, 2])]).unwrap();
        assert_eq!(
            off.max_ray_scalar(&rv(&[1, 1])),
            Err(Error::OriginNotInBody)
        );
    }

    fn random_polytope() -> impl Strategy<Value = RationalPolytope> {
        (1usize..4).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-4i64..5, n), 1..9).prop_map(
                |pts| {
                    let pts: Vec<Point> = pts.iter().map(|p| pt(p)).collect();
                    RationalPolytope::hull(&pts).unwrap()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn representations_agree(p in random_polytope()) {
            let q = RationalPolytope::from_halfspaces(p.dim(), p.halfspaces()).unwrap();
            prop_assert_eq!(&q, &p);
            for v in p.vertices() {
                prop_assert!(p.contains(v));
                for h in p.halfspaces() {
                    let bumped: Point = v.iter().zip(&h.normal).map(|(x, a)| x + a).collect();
                    if h.slack(v).is_zero() {
                        prop_assert!(!p.contains(&bumped));
                    }
                }
            }
        }

        #[test]
        fn straighten_round_trip(p in random_polytope()) {
            let s = p.straighten().unwrap();
            prop_assert_eq!(s.volume(), p.volume());
            prop_assert_eq!(s.unstraighten().unwrap(), p);
        }

        #[test]
        fn join_volume_monotone(p in random_polytope(), q in random_polytope()) {
            prop_assume!(p.dim() == q.dim());
            let j = p.join(&q).unwrap();
            prop_assert!(j.volume() >= p.volume().max(q.volume()));
            prop_assert!(j.contains_polytope(&p) && j.contains_polytope(&q));
        }

        #[test]
        fn shadow_contains_projected_vertices(p in random_polytope()) {
            prop_assume!(p.dim() >= 2);
            let s = p.project_drop(p.dim() - 1).unwrap();
            for v in p.vertices() {
                prop_assert!(s.contains(&drop_coord(v, p.dim() - 1)));
            }
        }

        #[test]
        fn simplex_in_gamma_iff_dominated(
            a in proptest::collection::vec(0i64..5, 3),
            b in proptest::collection::vec(0i64..5, 3),
        ) {
            let mut t = b.clone();
            t.sort();
            let s = RationalPolytope::simplex(&rv(&a)).unwrap();
            let g = RationalPolytope::gamma(&rv(&t)).unwrap();
            let dominated = a.iter().zip(&t).all(|(x, y)| x <= y);
            prop_assert_eq!(g.contains_polytope(&s), dominated);
        }
    }
}
