//! Flag valuations of homogeneous forms and generic valuative sets.
//!
//! A chart `g` acts by the substitution `x = g^T z`, i.e. `x_i = sum_j g_ji z_j`.
//! The valuation of a form is the exponent of its lex-smallest monomial in `z`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::borel::DiscreteSet;
use crate::error::{Error, Result};
use crate::exactlin::{
    derive_seed, random_invertible, random_unit_lower_triangular, RatMatrix, DEFAULT_CHART_BOUND,
};
use crate::monomial::{binomial, monomials_of_degree, ExpVec};
use crate::par::{map_range, ExecMode};
use crate::polytope::{Point, RationalPolytope};
use crate::rat::Rat;

pub const RETRY_CAP: usize = 5;
pub const DEFAULT_TRIALS: usize = 3;
/// Largest supported number of monomials of one degree.
pub const MAX_BASIS: u64 = 20_000;

/// Sparse homogeneous polynomial; keys ascend in lex, zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    vars: usize,
    terms: BTreeMap<ExpVec, Rat>,
}

impl Form {
    pub fn zero(vars: usize) -> Self {
        Form {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(coef: Rat, exps: ExpVec) -> Self {
        let mut f = Form::zero(exps.len());
        if !coef.is_zero() {
            f.terms.insert(exps, coef);
        }
        f
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Rat, ExpVec)>) -> Result<Self> {
        let mut f = Form::zero(vars);
        let mut degree = None;
        for (c, e) in terms {
            if e.len() != vars {
                return Err(Error::DimensionMismatch {
                    expected: vars,
                    found: e.len(),
                });
            }
            match degree {
                None => degree = Some(e.degree()),
                Some(d) if d != e.degree() => {
                    return Err(Error::InvalidArgument(format!(
                        "form is not homogeneous: degrees {d} and {}",
                        e.degree()
                    )))
                }
                _ => {}
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, e: ExpVec, c: Rat) {
        let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a nonzero form.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(ExpVec::degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExpVec) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut out: BTreeMap<ExpVec, Rat> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *out.entry(a.add(b)).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Form {
            vars: self.vars,
            terms: out,
        }
    }

    pub fn scale(&self, c: &Rat) -> Form {
        if c.is_zero() {
            return Form::zero(self.vars);
        }
        Form {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Exponent of the lex-smallest monomial.
    pub fn lex_min(&self) -> Option<&ExpVec> {
        self.terms.keys().next()
    }

    /// Coefficients over `monomials_of_degree(vars, d)`.
    pub fn dense(&self, basis: &[ExpVec]) -> Vec<Rat> {
        basis.iter().map(|e| self.coefficient(e)).collect()
    }

    /// Image under `x = g^T z`.
    pub fn substitute(&self, chart: &FlagChart) -> Result<Form> {
        let mut cache = SubstitutionCache::new(chart);
        cache.form(self)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*z^{e:?}")?;
        }
        Ok(())
    }
}

/// Memoizes images of linear forms and monomials under one chart.
struct SubstitutionCache<'a> {
    chart: &'a FlagChart,
    linear: Vec<Form>,
    monomials: HashMap<ExpVec, Form>,
}

impl<'a> SubstitutionCache<'a> {
    fn new(chart: &'a FlagChart) -> Self {
        let n = chart.n();
        let linear = (0..n)
            .map(|i| {
                let terms = (0..n).map(|j| (chart.g.get(j, i).clone(), ExpVec::unit(n, j)));
                Form::from_terms(n, terms).expect("linear forms are homogeneous")
            })
            .collect();
        SubstitutionCache {
            chart,
            linear,
            monomials: HashMap::new(),
        }
    }

    fn monomial(&mut self, e: &ExpVec) -> Form {
        if let Some(f) = self.monomials.get(e) {
            return f.clone();
        }
        let n = self.chart.n();
        let image = match e.0.iter().position(|&x| x > 0) {
            None => Form::monomial(Rat::one(), ExpVec::zero(n)),
            Some(i) => {
                let mut rest = e.clone();
                rest.0[i] -= 1;
                let r = self.monomial(&rest);
                r.mul(&self.linear[i])
            }
        };
        self.monomials.insert(e.clone(), image.clone());
        image
    }

    fn form(&mut self, f: &Form) -> Result<Form> {
        if f.vars != self.chart.n() {
            return Err(Error::DimensionMismatch {
                expected: self.chart.n(),
                found: f.vars,
            });
        }
        let mut out = Form::zero(f.vars);
        for (e, c) in &f.terms {
            let m = self.monomial(e);
            for (k, v) in m.terms {
                *out.terms.entry(k).or_insert_with(Rat::zero) += v * c;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// An invertible chart `g`, acting by `x = g^T z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagChart {
    g: RatMatrix,
}

impl FlagChart {
    pub fn new(g: RatMatrix) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::InvalidArgument("chart matrix must be square".into()));
        }
        if g.determinant()?.is_zero() {
            return Err(Error::InvalidArgument("chart matrix is singular".into()));
        }
        Ok(FlagChart { g })
    }

    pub fn identity(n: usize) -> Self {
        FlagChart {
            g: RatMatrix::identity(n),
        }
    }

    /// Unit lower-triangular random chart.
    pub fn random(n: usize, bound: i64, seed: u64) -> Result<Self> {
        Ok(FlagChart {
            g: random_unit_lower_triangular(n, bound, seed)?,
        })
    }

    pub fn random_general(n: usize, bound: i64, seed: u64) -> Result<Self> {
        Ok(FlagChart {
            g: random_invertible(n, bound, seed)?,
        })
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.g
    }
}

/// Homogeneous valuation vector of a nonzero form.
pub fn valuative_vector(f: &Form, chart: &FlagChart) -> Result<ExpVec> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let image = f.substitute(chart)?;
    image.lex_min().cloned().ok_or(Error::ZeroForm)
}

/// Space of degree-`d` forms in `n` variables, stored as an echelon basis over
/// `monomials_of_degree(n, d)`. Rank zero is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpace {
    n: usize,
    d: u32,
    basis: RatMatrix,
}

impl FormSpace {
    pub fn from_forms(n: usize, d: u32, gens: &[Form]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "at least one variable required".into(),
            ));
        }
        let size = binomial(d as u64 + n as u64 - 1, n as u64 - 1);
        if size > MAX_BASIS {
            return Err(Error::InvalidArgument(format!(
                "{size} monomials of degree {d} exceed the supported {MAX_BASIS}"
            )));
        }
        let monos = monomials_of_degree(n, d);
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            if g.vars != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.vars,
                });
            }
            if let Some(gd) = g.degree() {
                if gd != d {
                    return Err(Error::InvalidArgument(format!(
                        "generator of degree {gd} in a degree-{d} space"
                    )));
                }
            }
            rows.push(g.dense(&monos));
        }
        Self::from_rows(n, d, rows)
    }

    /// Rows are coefficient vectors over `monomials_of_degree(n, d)`.
    pub fn from_rows(n: usize, d: u32, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = monomials_of_degree(n, d).len();
        let m = RatMatrix::from_rows_with_cols(rows, cols)?;
        let (red, piv) = m.rref_natural();
        let basis = RatMatrix::from_rows_with_cols(
            (0..piv.len()).map(|r| red.row(r).to_vec()).collect(),
            cols,
        )?;
        Ok(FormSpace { n, d, basis })
    }

    pub fn complete(n: usize, d: u32) -> Result<Self> {
        let k = monomials_of_degree(n, d).len();
        Self::from_rows(n, d, RatMatrix::identity(k).to_rows())
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn forms(&self) -> Vec<Form> {
        let monos = monomials_of_degree(self.n, self.d);
        (0..self.basis.rows())
            .map(|r| {
                let terms = self
                    .basis
                    .row(r)
                    .iter()
                    .zip(&monos)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, e)| (c.clone(), e.clone()));
                Form::from_terms(self.n, terms).expect("basis rows are homogeneous")
            })
            .collect()
    }

    /// Basis rows after the substitution `x = g^T z`.
    fn transformed(&self, chart: &FlagChart) -> Result<RatMatrix> {
        if chart.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: chart.n(),
            });
        }
        let monos = monomials_of_degree(self.n, self.d);
        let mut cache = SubstitutionCache::new(chart);
        let rows = self
            .forms()
            .iter()
            .map(|f| cache.form(f).map(|img| img.dense(&monos)))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_rows_with_cols(rows, monos.len())
    }
}

/// Valuation vectors realized by the space under `chart`: pivot exponents of the
/// transformed basis reduced with columns scanned in ascending lex.
pub fn valuative_set(v: &FormSpace, chart: &FlagChart) -> Result<DiscreteSet> {
    let monos = monomials_of_degree(v.n, v.d);
    let m = v.transformed(chart)?;
    let (_, piv) = m.rref_natural();
    DiscreteSet::new(v.n, piv.into_iter().map(|c| monos[c].clone()))
}

/// Drops the homogenizing last coordinate.
pub fn dehomogenize_set(s: &DiscreteSet) -> Result<DiscreteSet> {
    if s.dim() == 0 {
        return Err(Error::InvalidArgument(
            "cannot dehomogenize a 0-dimensional set".into(),
        ));
    }
    DiscreteSet::new(s.dim() - 1, s.points().map(ExpVec::dehomogenize))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub master_seed: u64,
    /// Seeds of the charts whose valuative sets agreed.
    pub chart_seeds: Vec<u64>,
    pub attempts: usize,
    pub bound: i64,
    pub borel_fixed: bool,
}

#[derive(Clone, Debug)]
pub struct GenericOptions {
    pub trials: usize,
    pub bound: i64,
    pub mode: ExecMode,
}

impl Default for GenericOptions {
    fn default() -> Self {
        GenericOptions {
            trials: DEFAULT_TRIALS,
            bound: DEFAULT_CHART_BOUND,
            mode: ExecMode::default(),
        }
    }
}

/// Valuative set under a generic chart: `trials` random charts must agree and the
/// dehomogenized set must be Borel-fixed, otherwise fresh charts are drawn.
pub fn generic_valuative_set(
    v: &FormSpace,
    seed: u64,
    opts: &GenericOptions,
) -> Result<(DiscreteSet, Certificate)> {
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial required".into()));
    }
    let mut last_reason = String::new();
    for attempt in 0..RETRY_CAP {
        let seeds: Vec<u64> = (0..opts.trials)
            .map(|t| derive_seed(seed, (attempt * opts.trials + t) as u64))
            .collect();
        let sets = map_range(opts.mode, seeds.len(), |k| {
            let chart = FlagChart::random(v.n, opts.bound, seeds[k])?;
            valuative_set(v, &chart)
        });
        let sets = sets.into_iter().collect::<Result<Vec<_>>>()?;
        if sets.iter().any(|s| *s != sets[0]) {
            last_reason = "charts disagree".into();
            continue;
        }
        let set = sets.into_iter().next().expect("trials > 0");
        if !dehomogenize_set(&set)?.is_borel_fixed() {
            last_reason = "agreed set is not Borel-fixed".into();
            continue;
        }
        let cert = Certificate {
            master_seed: seed,
            chart_seeds: seeds,
            attempts: attempt + 1,
            bound: opts.bound,
            borel_fixed: true,
        };
        return Ok((set, cert));
    }
    Err(Error::RetryCapExceeded {
        attempts: RETRY_CAP,
        reason: last_reason,
    })
}

/// Spaces `A_m` of degree `m t`, indexed by `m`.
#[derive(Clone, Debug, Default)]
pub struct GradedValuativeSystem {
    t: Rat,
    spaces: BTreeMap<u32, FormSpace>,
}

impl GradedValuativeSystem {
    pub fn new(t: Rat) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidArgument("t must be positive".into()));
        }
        Ok(GradedValuativeSystem {
            t,
            spaces: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, m: u32, space: FormSpace) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("levels start at m = 1".into()));
        }
        if Rat::from(space.degree() as u64) != &self.t * Rat::from(m as u64) {
            return Err(Error::InvalidArgument(format!(
                "level {m} has degree {} but m t = {}",
                space.degree(),
                &self.t * Rat::from(m as u64)
            )));
        }
        if let Some((_, first)) = self.spaces.iter().next() {
            if first.vars() != space.vars() {
                return Err(Error::DimensionMismatch {
                    expected: first.vars(),
                    found: space.vars(),
                });
            }
        }
        self.spaces.insert(m, space);
        Ok(())
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn levels(&self) -> impl Iterator<Item = (&u32, &FormSpace)> {
        self.spaces.iter()
    }
}

#[derive(Clone, Debug)]
pub struct NobodyApproximation {
    /// `(m, (1/m) hull(Gamma_m))` in dehomogenized coordinates.
    pub levels: Vec<(u32, RationalPolytope)>,
    pub union: RationalPolytope,
}

/// Scaled hulls of generic valuative sets per level and the hull of their union.
pub fn nobody_approximation(
    sys: &GradedValuativeSystem,
    seed: u64,
    m_max: u32,
    opts: &GenericOptions,
) -> Result<NobodyApproximation> {
    let mut levels = Vec::new();
    for (&m, space) in sys.spaces.range(1..=m_max) {
        if space.rank() == 0 {
            continue;
        }
        let (set, _) = generic_valuative_set(space, derive_seed(seed, m as u64), opts)?;
        let flat = dehomogenize_set(&set)?;
        let inv = Rat::new(1, m);
        let pts: Vec<Point> = flat
            .to_points()
            .into_iter()
            .map(|p| p.iter().map(|x| x * &inv).collect())
            .collect();
        let hull = RationalPolytope::hull(&pts)?;
        if !crate::borel::is_borel_fixed_body(&hull)? {
            return Err(Error::Invariant(format!(
                "level {m} hull is not Borel-fixed"
            )));
        }
        levels.push((m, hull));
    }
    if levels.is_empty() {
        return Err(Error::EmptyInput("all spaces are zero"));
    }
    for (m, p) in &levels {
        for (dm, q) in &levels {
            if dm % m == 0 && dm != m && !q.contains_polytope(p) {
                return Err(Error::Invariant(format!(
                    "P_{m} is not contained in P_{dm}"
                )));
            }
        }
    }
    let all: Vec<Point> = levels
        .iter()
        .flat_map(|(_, p)| p.vertices().iter().cloned())
        .collect();
    let union = RationalPolytope::hull(&all)?;
    Ok(NobodyApproximation { levels, union })
}

/// Whether restricting `w` to a general codimension-`(i-1)` linear subspace
/// (`z_1 = ... = z_{i-1} = 0` in a random chart) is onto all degree-`s` forms
/// in the remaining `n-i+1` variables. Two independent charts must agree.
pub fn partial_jet_separates(w: &FormSpace, i: usize, seed: u64) -> Result<bool> {
    let n = w.n;
    if i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("index {i} not in 1..={n}")));
    }
    let target = binomial(w.d as u64 + (n - i) as u64, (n - i) as u64) as usize;
    let monos = monomials_of_degree(n, w.d);
    let restrict_rank = |s: u64| -> Result<usize> {
        let chart = FlagChart::random_general(n, DEFAULT_CHART_BOUND, s)?;
        let m = w.transformed(&chart)?;
        let keep: Vec<usize> = (0..monos.len())
            .filter(|&c| monos[c].0[..i - 1].iter().all(|&x| x == 0))
            .collect();
        let rows = (0..m.rows())
            .map(|r| keep.iter().map(|&c| m.get(r, c).clone()).collect())
            .collect();
        Ok(RatMatrix::from_rows_with_cols(rows, keep.len())?.rank())
    };
    for attempt in 0..RETRY_CAP {
        let a = restrict_rank(derive_seed(seed, 2 * attempt as u64))? == target;
        let b = restrict_rank(derive_seed(seed, 2 * attempt as u64 + 1))? == target;
        if a == b {
            return Ok(a);
        }
    }
    Err(Error::RetryCapExceeded {
        attempts: RETRY_CAP,
        reason: "charts disagree on jet separation".into(),
    })
}

/// Exact partial derivative in variable `var` (0-based).
pub fn jet_derivative(f: &Form, var: usize) -> Result<Form> {
    if var >= f.vars {
        return Err(Error::InvalidArgument(format!(
            "variable {var} out of range"
        )));
    }
    if f.degree() == Some(0) {
        return Err(Error::InvalidArgument("derivative of a constant".into()));
    }
    let mut out = Form::zero(f.vars);
    for (e, c) in &f.terms {
        let k = e.0[var];
        if k == 0 {
            continue;
        }
        let mut d = e.clone();
        d.0[var] -= 1;
        out.add_term(d, c * Rat::from(k as u64));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct FormsJson {
    vars: usize,
    generators: Vec<Vec<(Rat, Vec<u32>)>>,
}

type RawTerms = Vec<(Rat, Vec<u32>)>;

/// Parses generators as JSON `{"vars":n,"generators":[[["p/q",[e1,..]],..],..]}`
/// or as text with one generator per line, terms `coef:e1,e2,..` separated by
/// whitespace (`#` starts a comment).
pub fn parse_forms(input: &str) -> Result<(usize, Vec<Form>)> {
    let trimmed = input.trim_start();
    let (vars, raw): (usize, Vec<RawTerms>) = if trimmed.starts_with('{') {
        let j: FormsJson =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        (j.vars, j.generators)
    } else {
        let mut gens = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut terms = Vec::new();
            for tok in line.split_whitespace() {
                let (c, e) = tok.split_once(':').ok_or_else(|| {
                    Error::Parse(format!("line {}: term {tok:?} lacks ':'", lineno + 1))
                })?;
                let coef: Rat = c.parse()?;
                let exps = e
                    .split(',')
                    .map(|x| {
                        x.trim().parse::<u32>().map_err(|_| {
                            Error::Parse(format!("line {}: bad exponent {x:?}", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?;
                terms.push((coef, exps));
            }
            gens.push(terms);
        }
        let vars = gens
            .first()
            .and_then(|g| g.first())
            .map(|(_, e)| e.len())
            .ok_or(Error::EmptyInput("no generators"))?;
        (vars, gens)
    };
    if raw.is_empty() || raw.iter().all(Vec::is_empty) {
        return Err(Error::EmptyInput("no generators"));
    }
    let forms = raw
        .into_iter()
        .map(|g| Form::from_terms(vars, g.into_iter().map(|(c, e)| (c, ExpVec(e)))))
        .collect::<Result<Vec<_>>>()?;
    Ok((vars, forms))
}

/// Common degree of a nonempty generator list, ignoring zero forms.
pub fn common_degree(forms: &[Form]) -> Result<u32> {
    let mut degree = None;
    for f in forms {
        match (degree, f.degree()) {
            (_, None) => {}
            (None, Some(d)) => degree = Some(d),
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidArgument(format!(
                    "generators have degrees {a} and {b}"
                )))
            }
            _ => {}
        }
    }
    degree.ok_or(Error::ZeroForm)
}
