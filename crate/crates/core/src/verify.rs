//! Seeded random generators, a brute-force Zariski oracle and the property
//! batteries run by `inobody verify`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{
    build_family, epsilons_from_body, simplicial_matches_body, verify_bounds, width_function,
    width_verdicts, BodyReport, Family, WidthFunction,
};
use crate::borel::{
    body_borel_violations, body_widths, borel_closure, is_borel_fixed_body, shape_bounds,
    slice_volume_profile, DiscreteSet,
};
use crate::error::{Error, Result};
use crate::exactlin::{derive_seed, rng_from_seed};
use crate::flagval::{
    dehomogenize_set, generic_valuative_set, jet_derivative, valuative_set, valuative_vector,
    FlagChart, Form, FormSpace, GenericOptions, RETRY_CAP,
};
use crate::monomial::{lex_compare, monomials_of_degree, ExpVec, WeightVec};
use crate::par::{map_range, ExecMode};
use crate::polytope::RationalPolytope;
use crate::rat::{factorial, rat, Rat};
use crate::surfzar::{
    decomposition_on_support, surface_inobody, zariski_decompose, SurfaceModel, ZariskiResult,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Borel,
    Flagval,
    Surfzar,
    Bodies,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Borel, Suite::Flagval, Suite::Surfzar, Suite::Bodies];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Borel => "borel",
            Suite::Flagval => "flagval",
            Suite::Surfzar => "surfzar",
            Suite::Bodies => "bodies",
        }
    }

    fn salt(self) -> u64 {
        self as u64 + 1
    }

    /// `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|x| vec![x])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Battery sizes.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub mode: ExecMode,
    pub closures: usize,
    pub borel_bodies: usize,
    pub subspaces: usize,
    pub forms: usize,
    pub models: usize,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        VerifyConfig {
            seed,
            mode: ExecMode::default(),
            closures: 1000,
            borel_bodies: 100,
            subspaces: 100,
            forms: 100,
            models: 500,
        }
    }

    /// Reduced sizes for smoke runs.
    pub fn quick(seed: u64) -> Self {
        VerifyConfig {
            closures: 100,
            borel_bodies: 20,
            subspaces: 20,
            forms: 20,
            models: 50,
            ..Self::new(seed)
        }
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: String,
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `cases` seeded checks; the first failure in index order is the counterexample.
fn battery<F>(
    suite: Suite,
    name: &str,
    cfg: &VerifyConfig,
    cases: usize,
    salt: u64,
    check: F,
) -> PropertyResult
where
    F: Fn(u64) -> std::result::Result<(), String> + Sync + Send,
{
    let base = derive_seed(cfg.seed, suite.salt() * 1000 + salt);
    let outcomes = map_range(cfg.mode, cases, |k| check(derive_seed(base, k as u64)));
    let counterexample = outcomes
        .into_iter()
        .enumerate()
        .find_map(|(k, r)| r.err().map(|e| format!("case {k}: {e}")));
    PropertyResult {
        suite: suite.name().into(),
        name: name.into(),
        cases,
        passed: counterexample.is_none(),
        counterexample,
    }
}

fn single<F>(suite: Suite, name: &str, check: F) -> PropertyResult
where
    F: FnOnce() -> std::result::Result<(), String>,
{
    let counterexample = check().err();
    PropertyResult {
        suite: suite.name().into(),
        name: name.into(),
        cases: 1,
        passed: counterexample.is_none(),
        counterexample,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- generators

/// Borel closure of 1 to 3 random points of dimension 1 to `max_dim`, coordinates at most 3.
pub fn random_closure(seed: u64, max_dim: usize) -> DiscreteSet {
    let mut rng = rng_from_seed(seed);
    let dim = rng.gen_range(1..=max_dim.max(1));
    let count = rng.gen_range(1..=3);
    let pts: Vec<ExpVec> = (0..count)
        .map(|_| ExpVec((0..dim).map(|_| rng.gen_range(0..=3)).collect()))
        .collect();
    borel_closure(dim, pts).expect("consistent dimensions")
}

/// Hull of a random closure in dimension 2 to 4, scaled by a random positive rational.
pub fn random_borel_body(seed: u64) -> RationalPolytope {
    let mut rng = rng_from_seed(seed);
    loop {
        let dim = rng.gen_range(2..=4);
        let count = rng.gen_range(1..=3);
        let pts: Vec<ExpVec> = (0..count)
            .map(|_| ExpVec((0..dim).map(|_| rng.gen_range(0..=3)).collect()))
            .collect();
        let s = borel_closure(dim, pts).expect("consistent dimensions");
        let hull = s.hull().expect("hull of lattice points");
        if hull.is_full_dimensional() {
            let c = rat(rng.gen_range(1..=3), rng.gen_range(1..=2));
            return hull.scale(&c).expect("positive factor");
        }
    }
}

/// Random span of 1 to 5 sparse forms of degree at most 4 in 2 to 4 variables.
pub fn random_form_space(seed: u64) -> FormSpace {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(2..=4);
    let d = rng.gen_range(1..=4);
    let monos = monomials_of_degree(n, d);
    let r = rng.gen_range(1..=monos.len().min(5));
    let gens: Vec<Form> = (0..r)
        .map(|_| {
            let terms = rng.gen_range(1..=4);
            let t: Vec<(Rat, ExpVec)> = (0..terms)
                .map(|_| {
                    let mut c = 0;
                    while c == 0 {
                        c = rng.gen_range(-5..=5);
                    }
                    (Rat::from(c), monos.choose(&mut rng).unwrap().clone())
                })
                .collect();
            Form::from_terms(n, t).expect("homogeneous")
        })
        .collect();
    FormSpace::from_forms(n, d, &gens).expect("bounded size")
}

fn random_form(seed: u64) -> Form {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(2..=4);
    let d = rng.gen_range(1..=4);
    let monos = monomials_of_degree(n, d);
    let terms = rng.gen_range(1..=5);
    let t: Vec<(Rat, ExpVec)> = (0..terms)
        .map(|_| {
            (
                Rat::from(rng.gen_range(1..=9)),
                monos.choose(&mut rng).unwrap().clone(),
            )
        })
        .collect();
    Form::from_terms(n, t).expect("homogeneous")
}

/// Lattice classes on the plane blown up at `r` points: coefficients of `H, E_1..E_r`.
fn lattice_dot(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

/// A random valid model on the plane blown up at 2 to 4 points: the nef class `H`
/// (auxiliary) and at most 7 curves drawn from `E_i`, `E_i - E_j`, `H - E_i - E_j`
/// and `H - E_i - E_j - E_k`, pairwise meeting nonnegatively. `E_1` is the
/// exceptional curve and the pullback is `aH + sum c_j C_j`.
pub fn random_surface_model(seed: u64) -> SurfaceModel {
    let mut rng = rng_from_seed(seed);
    let r = rng.gen_range(2..=4usize);
    let unit = |i: usize| {
        let mut v = vec![0i64; r + 1];
        v[i] = 1;
        v
    };
    let mut pool: Vec<(String, Vec<i64>)> = Vec::new();
    for i in 1..=r {
        if i > 1 {
            pool.push((format!("E{i}"), unit(i)));
        }
        for j in 1..=r {
            if i != j {
                let v: Vec<i64> = unit(i).iter().zip(unit(j)).map(|(a, b)| a - b).collect();
                pool.push((format!("E{i}-E{j}"), v));
            }
        }
        for j in i + 1..=r {
            let v: Vec<i64> = (0..=r)
                .map(|k| unit(0)[k] - unit(i)[k] - unit(j)[k])
                .collect();
            for k in j + 1..=r {
                let w: Vec<i64> = (0..=r).map(|x| v[x] - unit(k)[x]).collect();
                pool.push((format!("H-E{i}-E{j}-E{k}"), w));
            }
            pool.push((format!("H-E{i}-E{j}"), v));
        }
    }
    pool.shuffle(&mut rng);
    let limit = rng.gen_range(2..=7usize);
    let mut chosen: Vec<(String, Vec<i64>)> = vec![("E1".into(), unit(1))];
    for (name, v) in pool {
        if chosen.len() >= limit {
            break;
        }
        if chosen.iter().all(|(_, c)| lattice_dot(c, &v) >= 0) {
            chosen.push((name, v));
        }
    }
    let mut classes = vec![("H".to_string(), unit(0))];
    classes.extend(chosen);
    let names: Vec<String> = classes.iter().map(|(n, _)| n.clone()).collect();
    let gram: Vec<Vec<Rat>> = classes
        .iter()
        .map(|(_, a)| {
            classes
                .iter()
                .map(|(_, b)| Rat::from(lattice_dot(a, b)))
                .collect()
        })
        .collect();
    let mut pullback = vec![Rat::from(rng.gen_range(1..=3))];
    pullback.extend((1..classes.len()).map(|_| Rat::from(rng.gen_range(0..=2))));
    SurfaceModel::new(names, gram, "E1", pullback, &["H".to_string()], None)
        .expect("generated models are valid")
}

/// Exhaustive search over candidate supports; errors if two supports validate.
pub fn brute_force_zariski(m: &SurfaceModel, d: &[Rat]) -> Result<Option<ZariskiResult>> {
    let cands = m.candidates();
    if cands.len() > 16 {
        return Err(Error::InvalidArgument(
            "too many candidates for exhaustive search".into(),
        ));
    }
    let mut found: Option<ZariskiResult> = None;
    for mask in 0u32..(1 << cands.len()) {
        let support: Vec<usize> = (0..cands.len())
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| cands[b])
            .collect();
        if let Some(res) = decomposition_on_support(m, d, &support) {
            if let Some(prev) = &found {
                return Err(Error::Invariant(format!(
                    "supports {:?} and {:?} both validate",
                    prev.support, res.support
                )));
            }
            found = Some(res);
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------- suites

fn borel_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let s = Suite::Borel;
    let mut out = Vec::new();
    out.push(battery(
        s,
        "closure_is_borel_fixed",
        cfg,
        cfg.closures,
        1,
        |seed| {
            let c = random_closure(seed, 4);
            ensure(c.is_borel_fixed(), || format!("{:?}", c.borel_violation()))
        },
    ));
    out.push(battery(
        s,
        "closure_counting_bounds",
        cfg,
        cfg.closures,
        2,
        |seed| {
            let c = random_closure(seed, 4);
            let (lo, hi) = lift(c.counting_bounds())?;
            let size = c.len() as u64;
            ensure(lo <= size && size <= hi, || {
                format!("{lo} <= {size} <= {hi} fails")
            })
        },
    ));
    out.push(battery(
        s,
        "closure_widths_monotone_and_axial",
        cfg,
        cfg.closures,
        3,
        |seed| {
            let c = random_closure(seed, 4);
            let w = lift(c.widths())?;
            ensure(w.windows(2).all(|p| p[0] <= p[1]), || {
                format!("widths {w:?}")
            })?;
            let a = lift(c.axis_widths())?;
            ensure(a == w, || {
                format!("axis widths {a:?} differ from widths {w:?}")
            })
        },
    ));
    out.push(battery(
        s,
        "closure_shape_bounds",
        cfg,
        cfg.closures,
        4,
        |seed| {
            let c = random_closure(seed, 3);
            let hull = lift(c.hull())?;
            lift(shape_bounds(&hull)).map(|_| ())
        },
    ));
    out.push(battery(
        s,
        "closure_operations_stay_borel",
        cfg,
        cfg.closures / 4,
        5,
        |seed| {
            let a = random_closure(derive_seed(seed, 0), 3);
            let mut b = random_closure(derive_seed(seed, 1), 3);
            if b.dim() != a.dim() {
                b = borel_closure(a.dim(), [ExpVec::zero(a.dim())]).unwrap();
            }
            for (name, r) in [
                ("union", a.union(&b)),
                ("intersection", a.intersection(&b)),
                ("minkowski", a.minkowski_sum(&b)),
            ] {
                let r = lift(r)?;
                ensure(r.is_borel_fixed(), || format!("{name} of {a:?} and {b:?}"))?;
            }
            Ok(())
        },
    ));
    out.push(battery(
        s,
        "body_slice_volume_monotone",
        cfg,
        cfg.borel_bodies,
        6,
        |seed| {
            let p = random_borel_body(seed);
            let w = lift(body_widths(&p))?;
            let k = p.dim();
            let top = w[k - 1].clone();
            let samples: Vec<Rat> = (0..=12).map(|j| &top * rat(j, 12)).collect();
            lift(slice_volume_profile(&p, &samples)).map(|_| ())
        },
    ));
    out.push(battery(
        s,
        "body_shape_bounds",
        cfg,
        cfg.borel_bodies,
        7,
        |seed| {
            let p = random_borel_body(seed);
            lift(shape_bounds(&p)).map(|_| ())
        },
    ));
    out.push(single(s, "non_borel_witness", || {
        let mut pts: Vec<Vec<Rat>> = RationalPolytope::simplex(&[1, 2, 3].map(Rat::from))
            .unwrap()
            .vertices()
            .to_vec();
        pts.push(vec![Rat::one(); 3]);
        let p = lift(RationalPolytope::hull(&pts))?;
        let v = lift(body_borel_violations(&p))?;
        let target: Vec<Rat> = [1, 0, 2].map(Rat::from).to_vec();
        ensure(v.iter().any(|x| x.image == target), || {
            format!("violations {v:?}")
        })
    }));
    out
}

fn flagval_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let s = Suite::Flagval;
    let opts = GenericOptions {
        mode: ExecMode::Sequential,
        ..GenericOptions::default()
    };
    let mut out = Vec::new();
    out.push(battery(
        s,
        "generic_valuative_set",
        cfg,
        cfg.subspaces,
        1,
        |seed| {
            let v = random_form_space(seed);
            let (set, cert) = lift(generic_valuative_set(&v, seed, &opts))?;
            ensure(set.len() == v.rank(), || {
                format!("|set| = {} but rank {}", set.len(), v.rank())
            })?;
            ensure(cert.borel_fixed && cert.attempts <= RETRY_CAP, || {
                format!("{cert:?}")
            })?;
            let d = lift(dehomogenize_set(&set))?;
            ensure(d.is_borel_fixed(), || format!("{d:?}"))
        },
    ));
    out.push(single(s, "hand_case_three_seeds", || {
        let x = |e: [u32; 3]| Form::monomial(Rat::one(), ExpVec::from(e));
        let v = lift(FormSpace::from_forms(3, 2, &[x([2, 0, 0]), x([1, 1, 0])]))?;
        let want = DiscreteSet::new(3, [ExpVec::from([0, 0, 2]), ExpVec::from([0, 1, 1])]).unwrap();
        for k in 0..3 {
            let (set, _) = lift(generic_valuative_set(&v, derive_seed(cfg.seed, k), &opts))?;
            ensure(set == want, || format!("seed {k}: {set:?}"))?;
        }
        Ok(())
    }));
    out.push(battery(s, "lex_agrees_with_weight", cfg, 200, 2, |seed| {
        let mut rng = rng_from_seed(seed);
        let n = rng.gen_range(1..=5);
        let d = rng.gen_range(0..=6);
        let monos = monomials_of_degree(n, d);
        let a = monos.choose(&mut rng).unwrap();
        let b = monos.choose(&mut rng).unwrap();
        let w = WeightVec::lex_weight(n, d);
        let lex = lift(lex_compare(a, b))?;
        ensure(lex == w.apply(a).cmp(&w.apply(b)), || {
            format!("{a:?} vs {b:?}")
        })
    }));
    out.push(battery(
        s,
        "derivative_lowers_last_exponent",
        cfg,
        cfg.forms,
        3,
        |seed| {
            let f = random_form(seed);
            let n = f.vars();
            let df = lift(jet_derivative(&f, n - 1))?;
            if df.is_zero() {
                return Ok(());
            }
            let chart = lift(FlagChart::random(
                n,
                crate::exactlin::DEFAULT_CHART_BOUND,
                seed,
            ))?;
            let a = lift(valuative_vector(&f, &chart))?;
            let b = lift(valuative_vector(&df, &chart))?;
            let mut expect = a.clone();
            expect.0[n - 1] = expect.0[n - 1].saturating_sub(1);
            ensure(a.0[n - 1] >= 1 && b == expect, || {
                format!("{f:?}: {a:?} -> {b:?}")
            })
        },
    ));
    out.push(battery(
        s,
        "identity_chart_pivots_are_lex_minima",
        cfg,
        cfg.subspaces,
        4,
        |seed| {
            let v = random_form_space(seed);
            let set = lift(valuative_set(&v, &FlagChart::identity(v.vars())))?;
            let mins: Vec<ExpVec> = v
                .forms()
                .iter()
                .filter_map(|f| f.lex_min().cloned())
                .collect();
            ensure(mins.iter().all(|m| set.contains(m)), || {
                format!("{mins:?} not in {set:?}")
            })
        },
    ));
    out
}

fn same_decomposition(a: &ZariskiResult, b: &ZariskiResult) -> bool {
    a.positive == b.positive && a.support == b.support && a.negative == b.negative
}

fn surfzar_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let s = Suite::Surfzar;
    let mut out = Vec::new();
    out.push(battery(
        s,
        "iterative_matches_exhaustive",
        cfg,
        cfg.models,
        1,
        |seed| {
            let m = random_surface_model(seed);
            let mut rng = rng_from_seed(derive_seed(seed, 7));
            let t = rat(rng.gen_range(0..=12), rng.gen_range(1..=3));
            for d in [m.pullback().to_vec(), m.ray_class(&t)] {
                let brute = lift(brute_force_zariski(&m, &d))?;
                match (zariski_decompose(&m, &d), brute) {
                    (Ok(a), Some(b)) => {
                        ensure(same_decomposition(&a, &b), || {
                            format!("{a:?} vs {b:?} on {}", m.to_json())
                        })?;
                        let g = m.gram().principal(&a.support);
                        ensure(a.support.is_empty() || g.is_negative_definite(), || {
                            "support not definite".into()
                        })?;
                        for &i in &a.support {
                            ensure(m.dot_basis(&a.positive, i).is_zero(), || {
                                "positive part not orthogonal".into()
                            })?;
                        }
                    }
                    (Err(_), None) => {}
                    (a, b) => {
                        return Err(format!(
                            "iterative {a:?} but exhaustive {b:?} on {}",
                            m.to_json()
                        ))
                    }
                }
            }
            Ok(())
        },
    ));
    out.push(battery(s, "blowup_surface_volume", cfg, 20, 2, |seed| {
        let mut rng = rng_from_seed(seed);
        let v = rat(rng.gen_range(1..=4), rng.gen_range(1..=2));
        let u = &v + Rat::from(rng.gen_range(0..=4));
        let m = lift(SurfaceModel::blowup_p2(&u, &v))?;
        let (body, prof) = lift(surface_inobody(&m))?;
        let two = Rat::from(2);
        ensure(&two * body.volume() == &u * &u + &two * &u * &v, || {
            format!("u={u}, v={v}")
        })?;
        ensure(prof.mu == &two * &u + &v, || {
            format!("mu {} for u={u}, v={v}", prof.mu)
        })
    }));
    out
}

fn family_list() -> Vec<Family> {
    let mut fams = Vec::new();
    for n in 1..=4 {
        fams.push(Family::ProductOfCurves { n });
        fams.push(Family::SymPower { n });
        fams.push(Family::Quadric { n });
        fams.push(Family::ProjSpace { n });
    }
    for (n, a) in [
        (2, Rat::from(2)),
        (3, Rat::from(2)),
        (3, Rat::from(3)),
        (2, rat(3, 2)),
    ] {
        fams.push(Family::BlowupPn { n, a });
    }
    for (u, v) in [(3, 1), (1, 1), (2, 1), (5, 2)] {
        fams.push(Family::BlowupP2 {
            u: Rat::from(u),
            v: Rat::from(v),
        });
    }
    fams.extend([
        Family::P1xP1Generic,
        Family::P1xP1Special,
        Family::JacobianNonhyper,
        Family::JacobianHyper,
    ]);
    fams
}

/// Extraction checks on a straightened Borel-fixed body.
fn borel_body_coherence(p: &RationalPolytope) -> std::result::Result<(), String> {
    let tilted = lift(p.unstraighten())?;
    let eps = lift(epsilons_from_body(&tilted))?;
    ensure(
        eps.iter().all(Rat::is_positive) && eps.windows(2).all(|w| w[0] <= w[1]),
        || format!("minima {eps:?}"),
    )?;
    let n = p.dim();
    let report = BodyReport {
        family: "random-borel".into(),
        n,
        very_general: true,
        tilted: Some(tilted),
        straightened: Some(p.clone()),
        epsilons: eps.clone(),
        eps_loc: None,
        mu: eps[n - 1].clone(),
        vol: factorial(n) * p.volume(),
        simplicial: false,
        seshadri_interval: (Rat::zero(), Rat::zero()),
        width_fns: Vec::new(),
        verdicts: Default::default(),
        ray_profile: None,
        notes: Vec::new(),
    };
    for (name, pass) in lift(verify_bounds(&report, true))? {
        ensure(pass, || format!("{name} fails for {p:?}"))?;
    }
    ensure(
        lift(simplicial_matches_body(&report))? == Some(true),
        || format!("simplicial criterion fails for {p:?}"),
    )?;
    let samples: Vec<Rat> = (0..=6)
        .map(|k| &report.mu * rat(k, 6))
        .chain(eps.clone())
        .collect();
    for index in 2..=n {
        let wf: WidthFunction = lift(width_function(&report, index, &samples))?;
        for (name, pass) in width_verdicts(&wf, &eps[index - 2], false) {
            ensure(pass, || format!("{name} fails for index {index} of {p:?}"))?;
        }
    }
    Ok(())
}

fn bodies_suite(cfg: &VerifyConfig) -> Vec<PropertyResult> {
    let s = Suite::Bodies;
    let fams = family_list();
    let mut out = Vec::new();
    let outcomes = map_range(cfg.mode, fams.len(), |k| {
        let f = &fams[k];
        match build_family(f, true) {
            Ok(rep) if rep.all_ok() => Ok(()),
            Ok(rep) => Err(format!("{f}: {:?}", rep.unexpected_failures())),
            Err(e) => Err(format!("{f}: {e}")),
        }
    });
    let counterexample = outcomes.into_iter().find_map(|r| r.err());
    out.push(PropertyResult {
        suite: s.name().into(),
        name: "family_verdicts".into(),
        cases: fams.len(),
        passed: counterexample.is_none(),
        counterexample,
    });
    out.push(battery(
        s,
        "borel_body_extraction",
        cfg,
        cfg.borel_bodies,
        1,
        |seed| {
            let p = random_borel_body(seed);
            ensure(lift(is_borel_fixed_body(&p))?, || {
                format!("generator produced {p:?}")
            })?;
            borel_body_coherence(&p)
        },
    ));
    out
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<PropertyResult> {
    match suite {
        Suite::Borel => borel_suite(cfg),
        Suite::Flagval => flagval_suite(cfg),
        Suite::Surfzar => surfzar_suite(cfg),
        Suite::Bodies => bodies_suite(cfg),
    }
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> VerifyReport {
    VerifyReport {
        seed: cfg.seed,
        results: suites.iter().flat_map(|&s| run_suite(s, cfg)).collect(),
    }
}

/// Re-derives every recorded quantity of a stored body report.
pub fn check_report_fixture(report: &BodyReport) -> Vec<PropertyResult> {
    let s = Suite::Bodies;
    let mut out = Vec::new();
    let mut push = |name: &str, r: std::result::Result<(), String>| {
        out.push(PropertyResult {
            suite: s.name().into(),
            name: name.into(),
            cases: 1,
            passed: r.is_ok(),
            counterexample: r.err(),
        });
    };
    let n = report.n;
    push(
        "dimension",
        ensure(report.epsilons.len() == n, || {
            format!("{} minima for n = {n}", report.epsilons.len())
        }),
    );
    if report.epsilons.len() != n || n == 0 {
        return out;
    }
    push(
        "mu_is_last_epsilon",
        ensure(report.epsilons[n - 1] == report.mu, || {
            format!("mu = {}", report.mu)
        }),
    );
    let simplicial = report.epsilons.iter().product::<Rat>() == report.vol;
    push(
        "simplicial_flag",
        ensure(simplicial == report.simplicial, || {
            format!("recorded {}", report.simplicial)
        }),
    );
    if let Some(tilted) = &report.tilted {
        push(
            "epsilons_from_body",
            match epsilons_from_body(tilted) {
                Ok(e) => ensure(e == report.epsilons, || format!("body gives {e:?}")),
                Err(e) => Err(e.to_string()),
            },
        );
        push(
            "volume",
            ensure(factorial(n) * tilted.volume() == report.vol, || {
                format!("body volume gives {}", factorial(n) * tilted.volume())
            }),
        );
        push(
            "straightened_is_image",
            match (&report.straightened, tilted.straighten()) {
                (Some(s), Ok(t)) => ensure(*s == t, || "straightened body differs".into()),
                (None, _) => Err("missing straightened body".into()),
                (_, Err(e)) => Err(e.to_string()),
            },
        );
        push(
            "lower_inclusion",
            match (
                &report.straightened,
                RationalPolytope::simplex(&report.epsilons),
            ) {
                (Some(s), Ok(simp)) => ensure(s.contains_polytope(&simp), || {
                    "simplex(eps) not inside".into()
                }),
                (_, Err(e)) => Err(e.to_string()),
                (None, _) => Err("missing straightened body".into()),
            },
        );
    }
    if let Some(loc) = &report.eps_loc {
        let prod: Rat = loc.iter().product();
        push(
            "local_minima_volume_bound",
            ensure(loc.len() == n && prod <= report.vol, || {
                format!("prod {prod} > vol {}", report.vol)
            }),
        );
    }
    let (lo, hi) = &report.seshadri_interval;
    push(
        "seshadri_interval_ordered",
        ensure(lo <= hi, || format!("[{lo}, {hi}]")),
    );
    out
}
