//! Borel-fixed lattice sets and Borel-fixed convex shapes.
//!
//! Coordinates are 0-based in code. On `Z^k` the moves are
//! `f_i = -e_i + e_{i+1}` for `i < k-1` and `f_{k-1} = -e_{k-1}`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{binomial, ExpVec};
use crate::polytope::{Point, RationalPolytope};
use crate::rat::{factorial, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiscreteSetJson", into = "DiscreteSetJson")]
pub struct DiscreteSet {
    dim: usize,
    points: BTreeSet<ExpVec>,
}

#[derive(Serialize, Deserialize)]
struct DiscreteSetJson {
    dim: usize,
    points: Vec<Vec<u32>>,
}

impl TryFrom<DiscreteSetJson> for DiscreteSet {
    type Error = Error;

    fn try_from(raw: DiscreteSetJson) -> Result<Self> {
        DiscreteSet::new(raw.dim, raw.points.into_iter().map(ExpVec))
    }
}

impl From<DiscreteSet> for DiscreteSetJson {
    fn from(s: DiscreteSet) -> Self {
        DiscreteSetJson {
            dim: s.dim,
            points: s.points.into_iter().map(|p| p.0).collect(),
        }
    }
}

/// A move that leaves a set: `point + f_index = image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetViolation {
    pub point: ExpVec,
    pub index: usize,
    pub image: ExpVec,
}

/// A crush map sending a vertex outside the body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyViolation {
    pub index: usize,
    pub vertex: Point,
    pub image: Point,
}

impl DiscreteSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = ExpVec>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            set.insert(p);
        }
        Ok(DiscreteSet { dim, points: set })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &ExpVec> {
        self.points.iter()
    }

    pub fn contains(&self, p: &ExpVec) -> bool {
        self.points.contains(p)
    }

    /// First move leaving the set, in point order then move order.
    pub fn borel_violation(&self) -> Option<SetViolation> {
        self.points.iter().find_map(|p| {
            borel_moves(p)
                .into_iter()
                .find(|(_, q)| !self.points.contains(q))
                .map(|(index, image)| SetViolation {
                    point: p.clone(),
                    index,
                    image,
                })
        })
    }

    pub fn is_borel_fixed(&self) -> bool {
        self.borel_violation().is_none()
    }

    pub fn union(&self, other: &DiscreteSet) -> Result<DiscreteSet> {
        self.same_dim(other)?;
        DiscreteSet::new(self.dim, self.points.union(&other.points).cloned())
    }

    pub fn intersection(&self, other: &DiscreteSet) -> Result<DiscreteSet> {
        self.same_dim(other)?;
        DiscreteSet::new(self.dim, self.points.intersection(&other.points).cloned())
    }

    pub fn minkowski_sum(&self, other: &DiscreteSet) -> Result<DiscreteSet> {
        self.same_dim(other)?;
        let sums = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| a.add(b)));
        DiscreteSet::new(self.dim, sums)
    }

    fn same_dim(&self, other: &DiscreteSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Coordinate-wise maxima.
    pub fn widths(&self) -> Result<Vec<u32>> {
        if self.is_empty() {
            return Err(Error::EmptyInput("discrete set"));
        }
        Ok((0..self.dim)
            .map(|i| self.points.iter().map(|p| p.0[i]).max().unwrap_or(0))
            .collect())
    }

    /// `max {a : a e_i in S}` per axis (0 when the origin is the only axis point).
    pub fn axis_widths(&self) -> Result<Vec<u32>> {
        if self.is_empty() {
            return Err(Error::EmptyInput("discrete set"));
        }
        Ok((0..self.dim)
            .map(|i| {
                self.points
                    .iter()
                    .filter(|p| p.0.iter().enumerate().all(|(k, &x)| k == i || x == 0))
                    .map(|p| p.0[i])
                    .max()
                    .unwrap_or(0)
            })
            .collect())
    }

    /// `(1 + sum_i C(w_i + n - i - 1, n - i), prod_i (w_i + 1))` with `n = dim + 1`
    /// and 1-based `i`; both bounds are checked against `|S|`.
    pub fn counting_bounds(&self) -> Result<(u64, u64)> {
        if let Some(v) = self.borel_violation() {
            return Err(Error::NotBorelFixed(format!(
                "{:?} + f_{} = {:?}",
                v.point,
                v.index + 1,
                v.image
            )));
        }
        let w = self.widths()?;
        let n = self.dim as u64 + 1;
        let lower = 1 + w
            .iter()
            .enumerate()
            .map(|(k, &wi)| {
                let i = k as u64 + 1;
                if wi == 0 {
                    0
                } else {
                    binomial(wi as u64 + n - i - 1, n - i)
                }
            })
            .sum::<u64>();
        let upper = w.iter().map(|&wi| wi as u64 + 1).product::<u64>();
        let size = self.len() as u64;
        if !(lower <= size && size <= upper) {
            return Err(Error::Invariant(format!(
                "counting bounds {lower} <= {size} <= {upper} violated"
            )));
        }
        Ok((lower, upper))
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.points
            .iter()
            .map(|p| p.0.iter().map(|&x| Rat::from(x as u64)).collect())
            .collect()
    }

    pub fn hull(&self) -> Result<RationalPolytope> {
        RationalPolytope::hull(&self.to_points())
    }
}

/// All admissible single moves of `p`, tagged with the move index.
pub fn borel_moves(p: &ExpVec) -> Vec<(usize, ExpVec)> {
    let k = p.len();
    (0..k)
        .filter(|&i| p.0[i] > 0)
        .map(|i| {
            let mut q = p.0.clone();
            q[i] -= 1;
            if i + 1 < k {
                q[i + 1] += 1;
            }
            (i, ExpVec(q))
        })
        .collect()
}

/// Smallest Borel-fixed superset, by breadth-first expansion.
pub fn borel_closure(dim: usize, points: impl IntoIterator<Item = ExpVec>) -> Result<DiscreteSet> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if seen.insert(p.clone()) {
            queue.push_back(p);
        }
    }
    while let Some(p) = queue.pop_front() {
        for (_, q) in borel_moves(&p) {
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(DiscreteSet { dim, points: seen })
}

/// `B_i(a)`: zero coordinate `i` and add it to `i+1`; the last index only zeroes.
pub fn crush(a: &[Rat], i: usize) -> Point {
    let mut b = a.to_vec();
    let x = std::mem::replace(&mut b[i], Rat::zero());
    if i + 1 < b.len() {
        b[i + 1] += x;
    }
    b
}

/// Every (index, vertex) whose crush image leaves the body.
pub fn body_borel_violations(p: &RationalPolytope) -> Result<Vec<BodyViolation>> {
    if p.is_empty() {
        return Err(Error::EmptyInput("polytope"));
    }
    if !p.is_in_orthant() {
        return Err(Error::NotInOrthant);
    }
    let mut out = Vec::new();
    for i in 0..p.dim() {
        for v in p.vertices() {
            let image = crush(v, i);
            if !p.contains(&image) {
                out.push(BodyViolation {
                    index: i,
                    vertex: v.clone(),
                    image,
                });
            }
        }
    }
    Ok(out)
}

pub fn is_borel_fixed_body(p: &RationalPolytope) -> Result<bool> {
    Ok(body_borel_violations(p)?.is_empty())
}

fn require_borel_body(p: &RationalPolytope) -> Result<()> {
    let v = body_borel_violations(p)?;
    match v.first() {
        None => Ok(()),
        Some(b) => Err(Error::NotBorelFixed(format!(
            "B_{} sends {:?} to {:?}",
            b.index + 1,
            b.vertex,
            b.image
        ))),
    }
}

/// Coordinate-wise maxima of a nonempty polytope.
pub fn body_widths(p: &RationalPolytope) -> Result<Vec<Rat>> {
    if p.is_empty() {
        return Err(Error::EmptyInput("polytope"));
    }
    Ok((0..p.dim()).map(|i| p.max_coord(i).unwrap()).collect())
}

#[derive(Clone, Debug)]
pub struct ShapeBounds {
    pub widths: Vec<Rat>,
    pub lower: RationalPolytope,
    pub upper: RationalPolytope,
}

/// `simplex(w) <= P <= Gamma(w)` and `prod w / k! <= vol P <= prod w` for a Borel-fixed body.
pub fn shape_bounds(p: &RationalPolytope) -> Result<ShapeBounds> {
    require_borel_body(p)?;
    let widths = body_widths(p)?;
    if widths.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invariant(format!(
            "widths {widths:?} not nondecreasing"
        )));
    }
    let lower = RationalPolytope::simplex(&widths)?;
    let upper = RationalPolytope::gamma(&widths)?;
    if !p.contains_polytope(&lower) {
        return Err(Error::Invariant("simplex of widths not contained".into()));
    }
    if !upper.contains_polytope(p) {
        return Err(Error::Invariant(
            "body not contained in Gamma of widths".into(),
        ));
    }
    let prod: Rat = widths.iter().product();
    let vol = p.volume();
    if !(&prod / factorial(p.dim()) <= vol && vol <= prod) {
        return Err(Error::Invariant(format!(
            "volume {vol} outside width bounds"
        )));
    }
    Ok(ShapeBounds {
        widths,
        lower,
        upper,
    })
}

/// Volumes of the diagonal sections `P ∩ {sum a = t}`, measured after dropping
/// the last coordinate; checks they do not increase on `[w_{k-1}, w_k)`.
pub fn slice_volume_profile(p: &RationalPolytope, samples: &[Rat]) -> Result<Vec<(Rat, Rat)>> {
    require_borel_body(p)?;
    let k = p.dim();
    if k == 0 {
        return Err(Error::InvalidArgument("zero-dimensional body".into()));
    }
    let w = body_widths(p)?;
    let top = w[k - 1].clone();
    let ones = vec![Rat::one(); k];
    let mut out = Vec::with_capacity(samples.len());
    for t in samples {
        if t.is_negative() || *t > top {
            return Err(Error::SampleOutOfRange(format!(
                "t = {t} not in [0, {top}]"
            )));
        }
        let section = p.section(&ones, t, k - 1)?;
        out.push((t.clone(), section.volume()));
    }
    let lo = if k >= 2 {
        w[k - 2].clone()
    } else {
        Rat::zero()
    };
    let mut window: Vec<&(Rat, Rat)> = out.iter().filter(|(t, _)| *t >= lo && *t < top).collect();
    window.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(pair) = window.windows(2).find(|w| w[1].1 > w[0].1) {
        return Err(Error::Invariant(format!(
            "slice volume increases from t = {} to t = {}",
            pair[0].0, pair[1].0
        )));
    }
    Ok(out)
}
