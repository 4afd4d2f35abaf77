//! Zariski decompositions on blow-up surfaces from exact intersection data, and
//! the two-dimensional infinitesimal body cut out by the ray `L_t = pi^*L - tE`.
//!
//! Classes are coefficient vectors over the model's basis. Candidate curves are
//! the basis elements not marked auxiliary; auxiliary classes are assumed nef.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::RatMatrix;
use crate::polytope::RationalPolytope;
use crate::rat::Rat;

const MAX_PIECES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    names: Vec<String>,
    gram: RatMatrix,
    exceptional: usize,
    pullback: Vec<Rat>,
    auxiliary: Vec<bool>,
    volume: Option<Rat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceModelJson {
    pub curves: Vec<String>,
    pub gram: Vec<Vec<Rat>>,
    pub exceptional: String,
    pub pullback: Vec<Rat>,
    #[serde(default)]
    pub auxiliary: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<Rat>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

impl SurfaceModel {
    pub fn new(
        names: Vec<String>,
        gram: Vec<Vec<Rat>>,
        exceptional: &str,
        pullback: Vec<Rat>,
        auxiliary: &[String],
        volume: Option<Rat>,
    ) -> Result<Self> {
        let k = names.len();
        if k == 0 {
            return Err(invalid("no classes listed"));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(invalid(format!("duplicate class name {a:?}")));
            }
        }
        if gram.len() != k || gram.iter().any(|r| r.len() != k) {
            return Err(invalid(format!("intersection matrix must be {k}x{k}")));
        }
        let gram = RatMatrix::from_rows(gram).map_err(|e| invalid(e.to_string()))?;
        if !gram.is_symmetric() {
            return Err(invalid("intersection matrix is not symmetric"));
        }
        let exceptional = names
            .iter()
            .position(|n| n == exceptional)
            .ok_or_else(|| invalid(format!("unknown exceptional class {exceptional:?}")))?;
        if *gram.get(exceptional, exceptional) != -Rat::one() {
            return Err(invalid(
                "the exceptional class must have self-intersection -1",
            ));
        }
        if pullback.len() != k {
            return Err(invalid(format!(
                "pullback has {} coefficients, expected {k}",
                pullback.len()
            )));
        }
        let mut aux = vec![false; k];
        for a in auxiliary {
            let i = names
                .iter()
                .position(|n| n == a)
                .ok_or_else(|| invalid(format!("unknown auxiliary class {a:?}")))?;
            if i == exceptional {
                return Err(invalid("the exceptional class cannot be auxiliary"));
            }
            aux[i] = true;
        }
        for i in 0..k {
            for j in 0..i {
                if !aux[i] && !aux[j] && gram.get(i, j).is_negative() {
                    return Err(invalid(format!(
                        "distinct curves {} and {} meet negatively",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(SurfaceModel {
            names,
            gram,
            exceptional,
            pullback,
            auxiliary: aux,
            volume,
        })
    }

    pub fn from_json_value(raw: SurfaceModelJson) -> Result<Self> {
        Self::new(
            raw.curves,
            raw.gram,
            &raw.exceptional,
            raw.pullback,
            &raw.auxiliary,
            raw.volume,
        )
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SurfaceModelJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(raw)
    }

    pub fn to_json_value(&self) -> SurfaceModelJson {
        SurfaceModelJson {
            curves: self.names.clone(),
            gram: self.gram.to_rows(),
            exceptional: self.names[self.exceptional].clone(),
            pullback: self.pullback.clone(),
            auxiliary: (0..self.len())
                .filter(|&i| self.auxiliary[i])
                .map(|i| self.names[i].clone())
                .collect(),
            volume: self.volume.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }

    /// The plane blown up at a point and then at a very general point `x` of the
    /// line-to-be: classes `l` (strict line), `F` (first exceptional curve) and `E`.
    pub fn blowup_p2(u: &Rat, v: &Rat) -> Result<Self> {
        if !(v.is_positive() && u >= v) {
            return Err(Error::InvalidArgument("require u >= v > 0".into()));
        }
        let g = |x: i64| Rat::from(x);
        let gram = vec![
            vec![g(-1), g(0), g(1)],
            vec![g(0), g(-2), g(1)],
            vec![g(1), g(1), g(-1)],
        ];
        let two = Rat::from(2);
        let pullback = vec![u + v, u.clone(), &two * u + v];
        let volume = u * u + &two * u * v;
        Self::new(
            vec!["l".into(), "F".into(), "E".into()],
            gram,
            "E",
            pullback,
            &[],
            Some(volume),
        )
    }

    /// An auxiliary nef class `H` with `H^2 = d` and the exceptional curve only.
    pub fn rank_one(d: &Rat) -> Result<Self> {
        Self::new(
            vec!["H".into(), "E".into()],
            vec![vec![d.clone(), Rat::zero()], vec![Rat::zero(), -Rat::one()]],
            "E",
            vec![Rat::one(), Rat::zero()],
            &["H".into()],
            Some(d.clone()),
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn exceptional(&self) -> usize {
        self.exceptional
    }

    pub fn pullback(&self) -> &[Rat] {
        &self.pullback
    }

    pub fn declared_volume(&self) -> Option<&Rat> {
        self.volume.as_ref()
    }

    pub fn is_candidate(&self, i: usize) -> bool {
        !self.auxiliary[i]
    }

    pub fn candidates(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.auxiliary[i]).collect()
    }

    /// `a . b` for class vectors.
    pub fn intersect(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let gb = self.gram.mul_vec(b).expect("class length");
        crate::exactlin::dot(a, &gb)
    }

    /// `a . C_i`.
    pub fn dot_basis(&self, a: &[Rat], i: usize) -> Rat {
        crate::exactlin::dot(a, &self.gram.column(i))
    }

    /// Coefficients of `L_t = pi^*L - tE`.
    pub fn ray_class(&self, t: &Rat) -> Vec<Rat> {
        let mut c = self.pullback.clone();
        c[self.exceptional] -= t;
        c
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn class_from_named(&self, coeffs: &[(String, Rat)]) -> Result<Vec<Rat>> {
        let mut c = vec![Rat::zero(); self.len()];
        for (name, v) in coeffs {
            let i = self
                .index_of(name)
                .ok_or_else(|| invalid(format!("unknown class {name:?}")))?;
            c[i] += v;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeTerm {
    pub curve: String,
    pub multiplicity: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiResult {
    /// Coefficients of the positive part over the model basis.
    pub positive: Vec<Rat>,
    pub negative: Vec<NegativeTerm>,
    /// Basis indices of the support, ascending.
    pub support: Vec<usize>,
}

impl ZariskiResult {
    pub fn multiplicity(&self, i: usize) -> Rat {
        self.support
            .iter()
            .position(|&s| s == i)
            .map(|k| self.negative[k].multiplicity.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Coefficients of the negative part over the model basis.
    pub fn negative_class(&self, len: usize) -> Vec<Rat> {
        let mut c = vec![Rat::zero(); len];
        for (k, &i) in self.support.iter().enumerate() {
            c[i] = self.negative[k].multiplicity.clone();
        }
        c
    }
}

/// `c0 + c1 delta` for an infinitesimal `delta > 0`; signs are lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Germ(Rat, Rat);

impl Germ {
    fn signum(&self) -> i32 {
        match self.0.signum() {
            0 => self.1.signum(),
            s => s,
        }
    }
}

fn lex_sign(parts: &[Rat]) -> i32 {
    parts.iter().map(Rat::signum).find(|&s| s != 0).unwrap_or(0)
}

struct GermDecomposition {
    support: Vec<usize>,
    x0: Vec<Rat>,
    x1: Vec<Rat>,
}

/// Iterative support growth for the class `d0 + delta d1`, validating every
/// defining property of the decomposition.
fn decompose_germ(m: &SurfaceModel, d0: &[Rat], d1: &[Rat]) -> Result<GermDecomposition> {
    let k = m.len();
    let germ_dot = |p0: &[Rat], p1: &[Rat], i: usize| Germ(m.dot_basis(p0, i), m.dot_basis(p1, i));
    let mut support: Vec<usize> = m
        .candidates()
        .into_iter()
        .filter(|&i| germ_dot(d0, d1, i).signum() < 0)
        .collect();
    let name_list = |s: &[usize]| {
        s.iter()
            .map(|&i| m.names[i].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    loop {
        let (x0, x1) = if support.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let g = m.gram.principal(&support);
            if !g.is_negative_definite() {
                return Err(Error::NoDecomposition(format!(
                    "curves {{{}}} do not have a negative definite intersection matrix",
                    name_list(&support)
                )));
            }
            let inv = g.inverse().expect("definite matrices are invertible");
            let r0: Vec<Rat> = support.iter().map(|&i| m.dot_basis(d0, i)).collect();
            let r1: Vec<Rat> = support.iter().map(|&i| m.dot_basis(d1, i)).collect();
            (inv.mul_vec(&r0)?, inv.mul_vec(&r1)?)
        };
        let mut p0 = d0.to_vec();
        let mut p1 = d1.to_vec();
        for (j, &i) in support.iter().enumerate() {
            p0[i] -= &x0[j];
            p1[i] -= &x1[j];
        }
        let fresh: Vec<usize> = m
            .candidates()
            .into_iter()
            .filter(|i| !support.contains(i) && germ_dot(&p0, &p1, *i).signum() < 0)
            .collect();
        if !fresh.is_empty() {
            support.extend(fresh);
            support.sort_unstable();
            continue;
        }
        for (j, &i) in support.iter().enumerate() {
            if Germ(x0[j].clone(), x1[j].clone()).signum() <= 0 {
                return Err(Error::NoDecomposition(format!(
                    "non-positive multiplicity on {}",
                    m.names[i]
                )));
            }
        }
        for i in 0..k {
            if germ_dot(&p0, &p1, i).signum() < 0 {
                return Err(Error::NoDecomposition(format!(
                    "positive part is negative on {}",
                    m.names[i]
                )));
            }
        }
        let q = [
            m.intersect(&p0, &p0),
            Rat::from(2) * m.intersect(&p0, &p1),
            m.intersect(&p1, &p1),
        ];
        if lex_sign(&q) < 0 {
            return Err(Error::NoDecomposition(
                "positive part has negative self-intersection (class not pseudoeffective)".into(),
            ));
        }
        return Ok(GermDecomposition { support, x0, x1 });
    }
}

/// Zariski decomposition of `d` with respect to the listed curves.
pub fn zariski_decompose(m: &SurfaceModel, d: &[Rat]) -> Result<ZariskiResult> {
    if d.len() != m.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            found: d.len(),
        });
    }
    let zero = vec![Rat::zero(); m.len()];
    let g = decompose_germ(m, d, &zero)?;
    Ok(result_from(m, d, &g.support, &g.x0))
}

fn result_from(m: &SurfaceModel, d: &[Rat], support: &[usize], x: &[Rat]) -> ZariskiResult {
    let mut positive = d.to_vec();
    for (j, &i) in support.iter().enumerate() {
        positive[i] -= &x[j];
    }
    ZariskiResult {
        positive,
        negative: support
            .iter()
            .zip(x)
            .map(|(&i, v)| NegativeTerm {
                curve: m.names[i].clone(),
                multiplicity: v.clone(),
            })
            .collect(),
        support: support.to_vec(),
    }
}

/// Validity of a candidate decomposition of `d` supported on `support`:
/// negative definite support, positive multiplicities, positive part nef on every
/// listed class and of nonnegative square. Returns the decomposition when valid.
pub fn decomposition_on_support(
    m: &SurfaceModel,
    d: &[Rat],
    support: &[usize],
) -> Option<ZariskiResult> {
    let x = if support.is_empty() {
        Vec::new()
    } else {
        let g = m.gram.principal(support);
        if !g.is_negative_definite() {
            return None;
        }
        let r: Vec<Rat> = support.iter().map(|&i| m.dot_basis(d, i)).collect();
        g.solve(&r)?
    };
    if x.iter().any(|v| !v.is_positive()) {
        return None;
    }
    let res = result_from(m, d, support, &x);
    if (0..m.len()).any(|i| m.dot_basis(&res.positive, i).is_negative()) {
        return None;
    }
    if m.intersect(&res.positive, &res.positive).is_negative() {
        return None;
    }
    Some(res)
}

/// One support-stable interval of the ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayPiece {
    pub from: Rat,
    pub to: Rat,
    pub support: Vec<String>,
    /// `N(L_t) . E = ne_slope * t + ne_intercept` on the interval.
    pub ne_slope: Rat,
    pub ne_intercept: Rat,
}

impl RayPiece {
    pub fn ne_at(&self, t: &Rat) -> Rat {
        &self.ne_slope * t + &self.ne_intercept
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayProfile {
    pub mu: Rat,
    /// Interior support changes followed by `mu`.
    pub breakpoints: Vec<Rat>,
    pub pieces: Vec<RayPiece>,
}

impl RayProfile {
    pub fn ne_at(&self, t: &Rat) -> Result<Rat> {
        if t.is_negative() || *t > self.mu {
            return Err(Error::SampleOutOfRange(format!(
                "t = {t} not in [0, {}]",
                self.mu
            )));
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| p.from <= *t && *t <= p.to)
            .expect("pieces cover [0, mu]");
        Ok(piece.ne_at(t))
    }

    /// `t - N(L_t) . E`, the upper boundary of the body.
    pub fn upper_at(&self, t: &Rat) -> Result<Rat> {
        Ok(t - self.ne_at(t)?)
    }
}

/// Smallest `s > t` where `a + b s` turns negative.
fn linear_exit(a: &Rat, b: &Rat, t: &Rat) -> Option<Rat> {
    if !b.is_negative() {
        return None;
    }
    let r = -(a / b);
    (r > *t).then_some(r)
}

/// Smallest `s` in `(t, h)` where `q(s) = c + b s + a s^2` turns negative, given
/// `q >= 0` just after `t`. Errors if that point is irrational.
fn quadratic_exit(a: &Rat, b: &Rat, c: &Rat, t: &Rat, h: Option<&Rat>) -> Result<Option<Rat>> {
    let q = |s: &Rat| c + b * s + a * s * s;
    if a.is_zero() {
        return Ok(linear_exit(c, b, t).filter(|r| h.is_none_or(|h| r < h)));
    }
    let four = Rat::from(4);
    let disc = b * b - &four * a * c;
    if disc.is_negative() {
        return Ok(None);
    }
    let two_a = Rat::from(2) * a;
    let vertex = -(b / &two_a);
    // q turns negative at the smaller root when convex, at the larger when concave
    if let Some(sq) = disc.sqrt_exact() {
        if sq.is_zero() {
            // a double root: q keeps its sign unless concave, where it is <= 0 everywhere
            return Ok(
                if a.is_negative() && vertex > *t && h.is_none_or(|h| vertex < *h) {
                    Some(vertex)
                } else {
                    None
                },
            );
        }
        let r1 = (-b - &sq) / &two_a;
        let r2 = (-b + &sq) / &two_a;
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        let r = if a.is_positive() { lo } else { hi };
        return Ok((r > *t && h.is_none_or(|h| r < *h)).then_some(r));
    }
    // irrational roots: locate them against t and h by signs of q
    #[derive(PartialEq, PartialOrd)]
    enum Pos {
        Below,
        Between,
        Above,
    }
    let pos = |x: &Rat| {
        if (a * q(x)).is_negative() {
            Pos::Between
        } else if *x < vertex {
            Pos::Below
        } else {
            Pos::Above
        }
    };
    let pt = pos(t);
    let inside = if a.is_positive() {
        pt == Pos::Below && h.is_none_or(|h| pos(h) >= Pos::Between)
    } else {
        pt <= Pos::Between && h.is_none_or(|h| pos(h) == Pos::Above)
    };
    if inside {
        let approx = ((-b.to_f64()
            + (if a.is_positive() { -1.0 } else { 1.0 }) * disc.to_f64().sqrt())
            / two_a.to_f64())
        .to_string();
        return Err(Error::IrrationalEndpoint(format!(
            "self-intersection of the positive part vanishes at t ~ {approx}"
        )));
    }
    Ok(None)
}

/// The piecewise affine function `t -> N(L_t) . E` on `[0, mu]`.
pub fn negative_part_on_e(m: &SurfaceModel) -> Result<RayProfile> {
    let k = m.len();
    let e = m.exceptional;
    let mut dir = vec![Rat::zero(); k];
    dir[e] = -Rat::one();
    let mut t = Rat::zero();
    let mut pieces: Vec<RayPiece> = Vec::new();
    // L_0 itself must decompose
    zariski_decompose(m, &m.ray_class(&t))?;
    loop {
        if pieces.len() > MAX_PIECES {
            return Err(Error::Invariant(
                "too many support changes along the ray".into(),
            ));
        }
        let base = m.ray_class(&t);
        let germ = match decompose_germ(m, &base, &dir) {
            Ok(g) => g,
            Err(Error::NoDecomposition(_)) if !pieces.is_empty() || t.is_zero() => break,
            Err(err) => return Err(err),
        };
        let s = &germ.support;
        // x(s) = x0 + (s - t) x1 on the interval; P(s) = P0 + (s - t) P1
        let mut p0 = base.clone();
        let mut p1 = dir.clone();
        for (j, &i) in s.iter().enumerate() {
            p0[i] -= &germ.x0[j];
            p1[i] -= &germ.x1[j];
        }
        let shift = |a: &Rat, b: &Rat| (a - b * &t, b.clone());
        let mut exits: Vec<Rat> = Vec::new();
        for j in 0..s.len() {
            let (a, b) = shift(&germ.x0[j], &germ.x1[j]);
            exits.extend(linear_exit(&a, &b, &t));
        }
        for i in 0..k {
            if s.contains(&i) {
                continue;
            }
            let (a, b) = shift(&m.dot_basis(&p0, i), &m.dot_basis(&p1, i));
            exits.extend(linear_exit(&a, &b, &t));
        }
        let linear_hi = exits.into_iter().min();
        // P(s)^2 with s = t + h: q0 + 2 q01 h + q11 h^2, rewritten in s
        let q0 = m.intersect(&p0, &p0);
        let q01 = m.intersect(&p0, &p1);
        let q11 = m.intersect(&p1, &p1);
        let two = Rat::from(2);
        let qa = q11.clone();
        let qb = &two * &q01 - &two * &q11 * &t;
        let qc = &q0 - &two * &q01 * &t + &q11 * &t * &t;
        let quad_hi = quadratic_exit(&qa, &qb, &qc, &t, linear_hi.as_ref())?;
        let hi = match (quad_hi, linear_hi) {
            (Some(q), _) => q,
            (None, Some(l)) => l,
            (None, None) => return Err(Error::UnboundedRay),
        };
        // N . E(s) = sum_j x_j(s) (C_j . E)
        let mut slope = Rat::zero();
        let mut at_t = Rat::zero();
        for (j, &i) in s.iter().enumerate() {
            let ce = m.gram.get(i, e);
            slope += &germ.x1[j] * ce;
            at_t += &germ.x0[j] * ce;
        }
        let intercept = at_t - &slope * &t;
        let names: Vec<String> = s.iter().map(|&i| m.names[i].clone()).collect();
        match pieces.last_mut() {
            Some(last)
                if last.support == names
                    && last.ne_slope == slope
                    && last.ne_intercept == intercept =>
            {
                last.to = hi.clone();
            }
            _ => pieces.push(RayPiece {
                from: t.clone(),
                to: hi.clone(),
                support: names,
                ne_slope: slope,
                ne_intercept: intercept,
            }),
        }
        t = hi;
    }
    if pieces.is_empty() {
        return Err(Error::NoDecomposition(
            "the ray leaves the pseudoeffective cone at t = 0".into(),
        ));
    }
    let mu = t;
    for w in pieces.windows(2) {
        let b = &w[0].to;
        if w[0].ne_at(b) != w[1].ne_at(b) {
            return Err(Error::Invariant(format!("N.E is discontinuous at t = {b}")));
        }
        if w[1].ne_slope < w[0].ne_slope {
            return Err(Error::Invariant(format!(
                "upper boundary is not concave at t = {b}"
            )));
        }
    }
    let mut breakpoints: Vec<Rat> = pieces.iter().map(|p| p.to.clone()).collect();
    breakpoints.dedup();
    Ok(RayProfile {
        mu,
        breakpoints,
        pieces,
    })
}

/// `{(t, y) : 0 <= y <= t - N(L_t).E, 0 <= t <= mu}`.
pub fn surface_inobody(m: &SurfaceModel) -> Result<(RationalPolytope, RayProfile)> {
    let prof = negative_part_on_e(m)?;
    let mut pts = vec![
        vec![Rat::zero(), Rat::zero()],
        vec![prof.mu.clone(), Rat::zero()],
    ];
    for p in &prof.pieces {
        for t in [&p.from, &p.to] {
            let y = t - p.ne_at(t);
            if y.is_negative() {
                return Err(Error::Invariant(format!(
                    "negative upper boundary at t = {t}"
                )));
            }
            pts.push(vec![t.clone(), y]);
        }
    }
    let body = RationalPolytope::hull(&pts)?;
    if let Some(vol) = &m.volume {
        let twice = Rat::from(2) * body.volume();
        if twice != *vol {
            return Err(Error::Invariant(format!(
                "twice the body area is {twice}, declared volume is {vol}"
            )));
        }
    }
    Ok((body, prof))
}
