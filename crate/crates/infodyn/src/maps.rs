//! Logistic-map variants and deterministic bifurcation scans.
//!
//! Three update rules over the unit interval, all with control
//! parameter `a`:
//!
//! * recursive: `x(t+1) = a * x(t) * (1 - x(t))`, the classic forward
//!   map, defined for `0 < a <= 4`;
//! * incursive: `x(t+1) = a * x(t) / (1 + a * x(t))`, the closed form of
//!   feeding the next state back into its own production, converging to
//!   the steady state `(a - 1) / a` for `a > 1`;
//! * hyper-incursive: `x(t+1) = 1/2 +- 1/2 * sqrt(1 - (4/a) * x(t))`,
//!   the two-root inversion of the logistic rule, defined for `a >= 4`,
//!   where every step must choose a branch.
//!
//! Branch choices come from a [`BranchPolicy`]; the random policy is
//! seeded explicitly so identical specs yield bit-identical
//! trajectories and scans.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::numfmt;

/// Longest cycle length the period detector will report.
pub const MAX_PERIOD: usize = 64;

/// Default number of warm-up iterations a scan discards per grid point.
pub const DEFAULT_TRANSIENT: usize = 1000;

/// Default number of recorded states per grid point.
pub const DEFAULT_SAMPLES: usize = 200;

/// Default number of grid points in a scan.
pub const DEFAULT_GRID: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("ParameterOutOfRange: {0}")]
    ParameterOutOfRange(String),
    #[error("DiscriminantNegative: 1 - (4/{a}) * {x} < 0, no real branch")]
    DiscriminantNegative { x: f64, a: f64 },
    #[error("PolicyMismatch: {0}")]
    PolicyMismatch(String),
    #[error("TrajectoryTooShort: need {needed} post-transient states, got {got}")]
    TrajectoryTooShort { needed: usize, got: usize },
    #[error("GridError: {0}")]
    GridError(String),
    #[error("StepFailed: step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<MapError>,
    },
    #[error("ScanStepFailed: a = {a}, step {step}: {source}")]
    ScanStepFailed {
        a: f64,
        step: usize,
        #[source]
        source: Box<MapError>,
    },
}

pub type Result<T> = std::result::Result<T, MapError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Recursive,
    Incursive,
    HyperIncursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// How a hyper-incursive trajectory picks between the two roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchPolicy {
    AlwaysPlus,
    AlwaysMinus,
    /// Plus on even steps, minus on odd steps.
    Alternate,
    /// Independent draws: plus with probability `p_plus`, from a
    /// ChaCha8 stream seeded with `seed`.
    Random { seed: u64, p_plus: f64 },
}

/// A fully specified map: kind, parameter, start state, and (for the
/// hyper-incursive kind only) a branch policy.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub a: f64,
    pub x0: f64,
    pub policy: Option<BranchPolicy>,
}

impl MapSpec {
    pub fn new(kind: MapKind, a: f64, x0: f64, policy: Option<BranchPolicy>) -> Result<Self> {
        if !x0.is_finite() || !(0.0..=1.0).contains(&x0) {
            return Err(MapError::ParameterOutOfRange(format!(
                "x0 = {x0} is outside [0, 1]"
            )));
        }
        match kind {
            MapKind::Recursive => {
                if !a.is_finite() || a <= 0.0 || a > 4.0 {
                    return Err(MapError::ParameterOutOfRange(format!(
                        "recursive map needs 0 < a <= 4, got a = {a}"
                    )));
                }
            }
            MapKind::Incursive => {
                if !a.is_finite() || a <= 0.0 {
                    return Err(MapError::ParameterOutOfRange(format!(
                        "incursive map needs a > 0, got a = {a}"
                    )));
                }
            }
            MapKind::HyperIncursive => {
                if !a.is_finite() || a < 4.0 {
                    return Err(MapError::ParameterOutOfRange(format!(
                        "hyper-incursive map needs a >= 4, got a = {a}"
                    )));
                }
            }
        }
        match (&kind, &policy) {
            (MapKind::HyperIncursive, None) => {
                return Err(MapError::PolicyMismatch(
                    "hyper-incursive maps need a branch policy".to_string(),
                ));
            }
            (MapKind::HyperIncursive, Some(p)) => validate_policy(p)?,
            (_, Some(_)) => {
                return Err(MapError::PolicyMismatch(
                    "branch policies only apply to the hyper-incursive kind".to_string(),
                ));
            }
            (_, None) => {}
        }
        Ok(MapSpec { kind, a, x0, policy })
    }
}

fn validate_policy(policy: &BranchPolicy) -> Result<()> {
    if let BranchPolicy::Random { p_plus, .. } = policy {
        if !p_plus.is_finite() || !(0.0..=1.0).contains(p_plus) {
            return Err(MapError::ParameterOutOfRange(format!(
                "p_plus = {p_plus} is outside [0, 1]"
            )));
        }
    }
    Ok(())
}

fn check_state(x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(MapError::ParameterOutOfRange(format!(
            "state x = {x} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// One step of the recursive map `a * x * (1 - x)`. Stays in `[0, 1]`
/// because `a <= 4` and `x * (1 - x) <= 1/4`.
pub fn step_recursive(x: f64, a: f64) -> Result<f64> {
    check_state(x)?;
    if !a.is_finite() || a <= 0.0 || a > 4.0 {
        return Err(MapError::ParameterOutOfRange(format!(
            "recursive map needs 0 < a <= 4, got a = {a}"
        )));
    }
    Ok(a * x * (1.0 - x))
}

/// One step of the incursive map `a * x / (1 + a * x)`.
pub fn step_incursive(x: f64, a: f64) -> Result<f64> {
    check_state(x)?;
    if !a.is_finite() || a <= 0.0 {
        return Err(MapError::ParameterOutOfRange(format!(
            "incursive map needs a > 0, got a = {a}"
        )));
    }
    Ok(a * x / (1.0 + a * x))
}

/// One step of the hyper-incursive map: the chosen root of
/// `y^2 - y + x/a = 0`, i.e. `1/2 +- 1/2 * sqrt(1 - (4/a) * x)`.
///
/// The two roots sum to one; the minus root is derived as `1 - plus`
/// so that the pair sums to 1.0 exactly in floating point as well.
pub fn step_hyper(x: f64, a: f64, branch: Branch) -> Result<f64> {
    check_state(x)?;
    if !a.is_finite() || a <= 0.0 {
        return Err(MapError::ParameterOutOfRange(format!(
            "hyper-incursive map needs a > 0, got a = {a}"
        )));
    }
    let discriminant = 1.0 - (4.0 / a) * x;
    if discriminant < 0.0 {
        return Err(MapError::DiscriminantNegative { x, a });
    }
    let plus = 0.5 + 0.5 * discriminant.sqrt();
    Ok(match branch {
        Branch::Plus => plus,
        Branch::Minus => 1.0 - plus,
    })
}

/// Steady state of the incursive map for `a > 1`: `(a - 1) / a`.
pub fn steady_state_incursive(a: f64) -> Result<f64> {
    if !a.is_finite() || a <= 1.0 {
        return Err(MapError::ParameterOutOfRange(format!(
            "incursive steady state needs a > 1, got a = {a}"
        )));
    }
    Ok((a - 1.0) / a)
}

/// Fixed points of the hyper-incursive map for `a >= 4`: `0` and
/// `(a - 1) / a` (the plus branch returns the latter to itself).
pub fn fixed_points_hyper(a: f64) -> Result<[f64; 2]> {
    if !a.is_finite() || a < 4.0 {
        return Err(MapError::ParameterOutOfRange(format!(
            "hyper-incursive fixed points need a >= 4, got a = {a}"
        )));
    }
    Ok([0.0, (a - 1.0) / a])
}

/// A simulated orbit: `states[0]` is the start state and each later
/// entry is one application of the map, `steps + 1` states in total.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub spec: MapSpec,
    pub states: Vec<f64>,
}

enum Chooser {
    Fixed(Branch),
    Alternate,
    Random(Box<ChaCha8Rng>, f64),
}

impl Chooser {
    fn from_policy(policy: &BranchPolicy) -> Chooser {
        match policy {
            BranchPolicy::AlwaysPlus => Chooser::Fixed(Branch::Plus),
            BranchPolicy::AlwaysMinus => Chooser::Fixed(Branch::Minus),
            BranchPolicy::Alternate => Chooser::Alternate,
            BranchPolicy::Random { seed, p_plus } => {
                Chooser::Random(Box::new(ChaCha8Rng::seed_from_u64(*seed)), *p_plus)
            }
        }
    }

    fn choose(&mut self, step: usize) -> Branch {
        match self {
            Chooser::Fixed(b) => *b,
            Chooser::Alternate => {
                if step % 2 == 0 {
                    Branch::Plus
                } else {
                    Branch::Minus
                }
            }
            Chooser::Random(rng, p_plus) => {
                if rng.random_bool(*p_plus) {
                    Branch::Plus
                } else {
                    Branch::Minus
                }
            }
        }
    }
}

/// Iterates `spec` for `steps` applications of the map. Step failures
/// carry the index of the failing transition.
pub fn trajectory(spec: &MapSpec, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(MapError::ParameterOutOfRange(
            "steps must be at least 1".to_string(),
        ));
    }
    let mut chooser = spec.policy.as_ref().map(Chooser::from_policy);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(spec.x0);
    let mut x = spec.x0;
    for step in 0..steps {
        x = apply_step(spec.kind, x, spec.a, chooser.as_mut(), step)
            .map_err(|e| MapError::StepFailed {
                step,
                source: Box::new(e),
            })?;
        states.push(x);
    }
    Ok(Trajectory {
        spec: spec.clone(),
        states,
    })
}

fn apply_step(
    kind: MapKind,
    x: f64,
    a: f64,
    chooser: Option<&mut Chooser>,
    step: usize,
) -> Result<f64> {
    match kind {
        MapKind::Recursive => step_recursive(x, a),
        MapKind::Incursive => step_incursive(x, a),
        MapKind::HyperIncursive => {
            let chooser = chooser.expect("hyper-incursive specs always carry a policy");
            step_hyper(x, a, chooser.choose(step))
        }
    }
}

/// Outcome of period detection on a settled orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Periodic(usize),
    /// No period up to [`MAX_PERIOD`] fits within tolerance.
    Chaotic,
}

/// Finds the smallest period `p <= MAX_PERIOD` such that
/// `|x(t+p) - x(t)| < tol` for every post-transient `t`. The first half
/// of the trajectory is discarded as transient; the remaining tail must
/// hold at least `2 * MAX_PERIOD` states.
pub fn detect_period(traj: &Trajectory, tol: f64) -> Result<Periodicity> {
    let transient = traj.states.len() / 2;
    let tail = &traj.states[transient..];
    if tail.len() < 2 * MAX_PERIOD {
        return Err(MapError::TrajectoryTooShort {
            needed: 2 * MAX_PERIOD,
            got: tail.len(),
        });
    }
    for p in 1..=MAX_PERIOD {
        if (0..tail.len() - p).all(|t| (tail[t + p] - tail[t]).abs() < tol) {
            return Ok(Periodicity::Periodic(p));
        }
    }
    Ok(Periodicity::Chaotic)
}

/// Parameters of a bifurcation scan over a closed `a` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub kind: MapKind,
    pub a_min: f64,
    pub a_max: f64,
    /// Number of grid points, both endpoints included.
    pub a_steps: usize,
    pub x0: f64,
    /// Warm-up iterations discarded per grid point.
    pub transient: usize,
    /// States recorded per grid point after the warm-up.
    pub samples: usize,
    pub policy: Option<BranchPolicy>,
}

/// The recorded `(a, x)` points of a scan, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationScan {
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub transient: usize,
    pub samples: usize,
    pub points: Vec<(f64, f64)>,
}

/// Runs a bifurcation scan: for every grid point `a`, iterates
/// `transient` steps from `x0` and records the next `samples` states.
///
/// Grid points are independent, so they run in parallel; results merge
/// in grid order. A random branch policy is re-seeded per grid point as
/// `seed XOR grid index`, which keeps the whole scan reproducible.
pub fn bifurcation_scan(cfg: &ScanConfig) -> Result<BifurcationScan> {
    validate_scan(cfg)?;
    let per_point: Vec<Result<Vec<(f64, f64)>>> = (0..cfg.a_steps)
        .into_par_iter()
        .map(|i| scan_point(cfg, i))
        .collect();
    let mut points = Vec::with_capacity(cfg.a_steps * cfg.samples);
    for result in per_point {
        points.extend(result?);
    }
    Ok(BifurcationScan {
        a_min: cfg.a_min,
        a_max: cfg.a_max,
        a_steps: cfg.a_steps,
        transient: cfg.transient,
        samples: cfg.samples,
        points,
    })
}

fn validate_scan(cfg: &ScanConfig) -> Result<()> {
    if !cfg.a_min.is_finite() || !cfg.a_max.is_finite() || cfg.a_min >= cfg.a_max {
        return Err(MapError::GridError(format!(
            "need a_min < a_max, got [{}, {}]",
            cfg.a_min, cfg.a_max
        )));
    }
    if cfg.a_steps < 2 {
        return Err(MapError::GridError(format!(
            "need at least 2 grid points, got {}",
            cfg.a_steps
        )));
    }
    if cfg.samples == 0 {
        return Err(MapError::GridError("need at least 1 sample".to_string()));
    }
    if !cfg.x0.is_finite() || !(0.0..=1.0).contains(&cfg.x0) {
        return Err(MapError::ParameterOutOfRange(format!(
            "x0 = {} is outside [0, 1]",
            cfg.x0
        )));
    }
    match cfg.kind {
        MapKind::Recursive => {
            if cfg.a_min <= 0.0 || cfg.a_max > 4.0 {
                return Err(MapError::GridError(format!(
                    "recursive scans need 0 < a <= 4, got [{}, {}]",
                    cfg.a_min, cfg.a_max
                )));
            }
        }
        MapKind::Incursive => {
            if cfg.a_min <= 0.0 {
                return Err(MapError::GridError(format!(
                    "incursive scans need a > 0, got a_min = {}",
                    cfg.a_min
                )));
            }
        }
        MapKind::HyperIncursive => {
            if cfg.a_min < 4.0 {
                return Err(MapError::GridError(format!(
                    "hyper-incursive scans need a >= 4, got a_min = {}",
                    cfg.a_min
                )));
            }
        }
    }
    match (&cfg.kind, &cfg.policy) {
        (MapKind::HyperIncursive, None) => Err(MapError::PolicyMismatch(
            "hyper-incursive scans need a branch policy".to_string(),
        )),
        (MapKind::HyperIncursive, Some(p)) => validate_policy(p),
        (_, Some(_)) => Err(MapError::PolicyMismatch(
            "branch policies only apply to the hyper-incursive kind".to_string(),
        )),
        (_, None) => Ok(()),
    }
}

fn grid_value(cfg: &ScanConfig, i: usize) -> f64 {
    if i == cfg.a_steps - 1 {
        cfg.a_max
    } else {
        let frac = i as f64 / (cfg.a_steps - 1) as f64;
        (cfg.a_min + (cfg.a_max - cfg.a_min) * frac).clamp(cfg.a_min, cfg.a_max)
    }
}

fn scan_point(cfg: &ScanConfig, i: usize) -> Result<Vec<(f64, f64)>> {
    let a = grid_value(cfg, i);
    let mut chooser = cfg.policy.as_ref().map(|p| {
        Chooser::from_policy(&match *p {
            BranchPolicy::Random { seed, p_plus } => BranchPolicy::Random {
                seed: seed ^ i as u64,
                p_plus,
            },
            other => other,
        })
    });
    let mut x = cfg.x0;
    let mut recorded = Vec::with_capacity(cfg.samples);
    for step in 0..cfg.transient + cfg.samples {
        x = apply_step(cfg.kind, x, a, chooser.as_mut(), step).map_err(|e| {
            MapError::ScanStepFailed {
                a,
                step,
                source: Box::new(e),
            }
        })?;
        if step >= cfg.transient {
            recorded.push((a, x));
        }
    }
    Ok(recorded)
}

/// Renders a scan as CSV with header `a,x`, one row per recorded point,
/// both columns at the given decimal precision.
pub fn scan_to_csv(scan: &BifurcationScan, precision: usize) -> String {
    let mut out = String::with_capacity(16 * scan.points.len() + 4);
    out.push_str("a,x\n");
    for &(a, x) in &scan.points {
        out.push_str(&numfmt::fixed(a, precision));
        out.push(',');
        out.push_str(&numfmt::fixed(x, precision));
        out.push('\n');
    }
    out
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 600.0;
const SVG_LEFT: f64 = 60.0;
const SVG_RIGHT: f64 = 780.0;
const SVG_TOP: f64 = 20.0;
const SVG_BOTTOM: f64 = 560.0;

/// Renders a scan as an 800x600 SVG scatter plot: one 1px mark per
/// point, labeled axes (`a` horizontal, `x` vertical), the full unit
/// interval on the vertical axis.
pub fn scan_to_svg(scan: &BifurcationScan) -> String {
    let mut out = String::with_capacity(40 * scan.points.len() + 1024);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"800\" height=\"600\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<line x1=\"{SVG_LEFT}\" y1=\"{SVG_BOTTOM}\" x2=\"{SVG_RIGHT}\" y2=\"{SVG_BOTTOM}\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{SVG_LEFT}\" y1=\"{SVG_TOP}\" x2=\"{SVG_LEFT}\" y2=\"{SVG_BOTTOM}\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"420\" y=\"592\" text-anchor=\"middle\" font-size=\"14\">a</text>\n"
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"290\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 290)\">x</text>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{SVG_LEFT}\" y=\"578\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
        scan.a_min
    ));
    out.push_str(&format!(
        "<text x=\"{SVG_RIGHT}\" y=\"578\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
        scan.a_max
    ));
    out.push_str("<text x=\"52\" y=\"564\" text-anchor=\"end\" font-size=\"12\">0</text>\n");
    out.push_str("<text x=\"52\" y=\"26\" text-anchor=\"end\" font-size=\"12\">1</text>\n");
    let a_span = scan.a_max - scan.a_min;
    for &(a, x) in &scan.points {
        let px = SVG_LEFT + (a - scan.a_min) / a_span * (SVG_RIGHT - SVG_LEFT);
        let py = SVG_BOTTOM - x.clamp(0.0, 1.0) * (SVG_BOTTOM - SVG_TOP);
        out.push_str(&format!(
            "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"1\" height=\"1\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}
