//! Equilibrium branches of the two-variable model in one free parameter.

mod arclength;
mod envelope;
mod lyapunov;

pub(crate) use arclength::{locate_zero, point_at, tangent, CorrectorSettings, CurveProblem};
pub use envelope::{
    cycle_envelope, cycle_probe, pick_envelope_start, CycleExtent, EnvelopeSample, EnvelopeSettings,
};
pub use lyapunov::{first_lyapunov_from_partials, lyapunov_at};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibria::{eigenvalues_2x2, Equilibrium, Stability, MARGINAL_TOL};
use crate::error::{Error, Result};
use crate::model::{field_original, fx, gx, jacobian_original, OriginalParams, State2};

/// Tolerance on `|det|` or `|trace|` at a refined bifurcation.
pub const TEST_FUNCTION_TOL: f64 = 1e-10;

/// Parameter varied along a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeParam {
    #[serde(rename = "I")]
    Current,
    #[serde(rename = "gamma")]
    Gamma,
}

impl FreeParam {
    pub fn value(self, p: &OriginalParams) -> f64 {
        match self {
            FreeParam::Current => p.current(),
            FreeParam::Gamma => p.gamma(),
        }
    }

    pub fn apply(self, p: &OriginalParams, v: f64) -> Result<OriginalParams> {
        match self {
            FreeParam::Current => p.with_current(v),
            FreeParam::Gamma => p.with_gamma(v),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FreeParam::Current => "I",
            FreeParam::Gamma => "gamma",
        }
    }
}

impl std::str::FromStr for FreeParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "current" => Ok(FreeParam::Current),
            "gamma" | "g" => Ok(FreeParam::Gamma),
            other => Err(Error::InvalidArgument(format!(
                "unknown free parameter `{other}` (expected I or gamma)"
            ))),
        }
    }
}

/// Step control and tolerances of the predictor-corrector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuationSettings {
    pub h0: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub newton_tol: f64,
    pub residual_tol: f64,
    pub max_newton: usize,
    pub grow_factor: f64,
    pub grow_after: usize,
    pub max_steps: usize,
    /// Branch stops when `|x|` or `|y|` exceeds this.
    pub state_bound: f64,
    /// `true` walks toward increasing parameter from the start point.
    pub increasing: bool,
}

impl Default for ContinuationSettings {
    fn default() -> Self {
        ContinuationSettings {
            h0: 1e-3,
            h_min: 1e-6,
            h_max: 1e-2,
            newton_tol: 1e-12,
            residual_tol: 1e-12,
            max_newton: 25,
            grow_factor: 1.3,
            grow_after: 3,
            max_steps: 200_000,
            state_bound: 5.0,
            increasing: true,
        }
    }
}

impl ContinuationSettings {
    fn validate(&self) -> Result<()> {
        let pos = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive",
                })
            }
        };
        pos("h0", self.h0)?;
        pos("h_min", self.h_min)?;
        pos("h_max", self.h_max)?;
        if !(self.h_min <= self.h0 && self.h0 <= self.h_max) {
            return Err(Error::InvalidArgument(format!(
                "step sizes must satisfy h_min ≤ h0 ≤ h_max (got {}, {}, {})",
                self.h_min, self.h0, self.h_max
            )));
        }
        Ok(())
    }

    fn corrector(&self) -> CorrectorSettings {
        CorrectorSettings {
            tol: self.newton_tol,
            residual_tol: self.residual_tol,
            max_iter: self.max_newton,
        }
    }
}

/// One corrected point of a branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub state: State2,
    pub param: f64,
    pub trace: f64,
    pub det: f64,
    pub stability: Stability,
    /// Unit tangent in `(x, y, param)` oriented along the walk.
    pub tangent: [f64; 3],
    /// Step the walk takes from this point.
    pub next_step: f64,
    /// Consecutive successful steps before this point, for step growth.
    pub streak: usize,
}

impl BranchPoint {
    fn u(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.state.x, self.state.y, self.param])
    }
    fn tau(&self) -> DVector<f64> {
        DVector::from_row_slice(&self.tangent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    Fold,
    Hopf,
    NeutralSaddle,
    Cusp,
    GeneralizedHopf,
}

impl BifurcationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BifurcationKind::Fold => "fold",
            BifurcationKind::Hopf => "hopf",
            BifurcationKind::NeutralSaddle => "neutral_saddle",
            BifurcationKind::Cusp => "cusp",
            BifurcationKind::GeneralizedHopf => "generalized_hopf",
        }
    }
}

/// A located codimension-one or codimension-two point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationPoint {
    pub kind: BifurcationKind,
    pub state: State2,
    pub current: f64,
    pub gamma: f64,
    pub l1: Option<f64>,
    pub eigenvalues: [Complex64; 2],
    pub trace: f64,
    pub det: f64,
}

#[derive(Serialize, Deserialize)]
struct BifurcationRecord {
    kind: BifurcationKind,
    x: f64,
    y: f64,
    #[serde(rename = "I")]
    current: f64,
    gamma: f64,
    l1: Option<f64>,
    trace: f64,
    det: f64,
    eigenvalues: [[f64; 2]; 2],
}

impl Serialize for BifurcationPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BifurcationRecord {
            kind: self.kind,
            x: self.state.x,
            y: self.state.y,
            current: self.current,
            gamma: self.gamma,
            l1: self.l1,
            trace: self.trace,
            det: self.det,
            eigenvalues: [
                [self.eigenvalues[0].re, self.eigenvalues[0].im],
                [self.eigenvalues[1].re, self.eigenvalues[1].im],
            ],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BifurcationPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BifurcationRecord::deserialize(d)?;
        Ok(BifurcationPoint {
            kind: r.kind,
            state: State2 { x: r.x, y: r.y },
            current: r.current,
            gamma: r.gamma,
            l1: r.l1,
            trace: r.trace,
            det: r.det,
            eigenvalues: [
                Complex64::new(r.eigenvalues[0][0], r.eigenvalues[0][1]),
                Complex64::new(r.eigenvalues[1][0], r.eigenvalues[1][1]),
            ],
        })
    }
}

impl BifurcationPoint {
    /// Build from a state and parameter pair, evaluating the Jacobian there.
    pub fn at(kind: BifurcationKind, state: State2, p: &OriginalParams, l1: Option<f64>) -> Self {
        let j = jacobian_original(state, p);
        let (trace, det) = (j.trace(), j.determinant());
        BifurcationPoint {
            kind,
            state,
            current: p.current(),
            gamma: p.gamma(),
            l1,
            eigenvalues: eigenvalues_2x2(trace, det),
            trace,
            det,
        }
    }

    pub fn params(&self, base: &OriginalParams) -> Result<OriginalParams> {
        OriginalParams::new(base.a(), base.alpha(), self.gamma, self.current)
    }
}

/// Why a branch stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    /// The free parameter reached an end of the requested range.
    ReachedBoundary { param: f64 },
    /// The corrector failed even at the minimum step.
    CorrectorFailure { param: f64 },
    /// The state left the box `|x|, |y| ≤ state_bound`.
    LeftStateBox { param: f64 },
    MaxSteps,
}

/// An equilibrium branch with the bifurcations found along it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub free: FreeParam,
    pub base: OriginalParams,
    pub range: (f64, f64),
    pub settings: ContinuationSettings,
    pub points: Vec<BranchPoint>,
    pub bifurcations: Vec<BifurcationPoint>,
    /// For each bifurcation, the index `i` of the segment `points[i]..points[i + 1]`
    /// that contains it.
    pub segments: Vec<usize>,
    pub termination: Termination,
    pub warnings: Vec<String>,
}

impl Branch {
    pub fn count(&self, kind: BifurcationKind) -> usize {
        self.bifurcations.iter().filter(|b| b.kind == kind).count()
    }

    pub fn of_kind(&self, kind: BifurcationKind) -> impl Iterator<Item = &BifurcationPoint> {
        self.bifurcations.iter().filter(move |b| b.kind == kind)
    }

    /// `true` when the walk ended because the parameter range was exhausted.
    pub fn is_complete(&self) -> bool {
        matches!(self.termination, Termination::ReachedBoundary { .. })
    }
}

/// `F(x, y, λ) = 0` with `λ` the free parameter.
pub(crate) struct EquilibriumCurve {
    base: OriginalParams,
    free: FreeParam,
}

impl EquilibriumCurve {
    pub(crate) fn new(base: OriginalParams, free: FreeParam) -> Self {
        EquilibriumCurve { base, free }
    }

    /// Parameters at `λ`, bypassing validation so the corrector may probe
    /// non-physical values transiently.
    fn params_at(&self, lambda: f64) -> OriginalParams {
        let b = &self.base;
        match self.free {
            FreeParam::Current => OriginalParams::raw(b.a(), b.alpha(), b.gamma(), lambda),
            FreeParam::Gamma => OriginalParams::raw(b.a(), b.alpha(), lambda, b.current()),
        }
    }

    fn trace_det(&self, u: &DVector<f64>) -> (f64, f64) {
        let p = self.params_at(u[2]);
        let j = jacobian_original(State2 { x: u[0], y: u[1] }, &p);
        (j.trace(), j.determinant())
    }
}

impl CurveProblem for EquilibriumCurve {
    fn dim(&self) -> usize {
        3
    }

    fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        let p = self.params_at(u[2]);
        let [f, g] = field_original(u[0], u[1], &p);
        DVector::from_vec(vec![f, g])
    }

    fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let p = self.params_at(u[2]);
        let (x, y) = (u[0], u[1]);
        let (dfl, dgl) = match self.free {
            FreeParam::Current => (1.0, 0.0),
            FreeParam::Gamma => (0.0, -y),
        };
        DMatrix::from_row_slice(
            2,
            3,
            &[fx(x), -1.0, dfl, gx(x, p.a(), p.alpha()), -p.gamma(), dgl],
        )
    }
}

fn residual_norm(state: State2, p: &OriginalParams) -> f64 {
    let [f, g] = field_original(state.x, state.y, p);
    f.hypot(g)
}

/// Newton on `(x, y)` at fixed parameters.
fn polish(state: State2, p: &OriginalParams) -> Result<State2> {
    let mut s = state;
    for _ in 0..25 {
        let [f, g] = field_original(s.x, s.y, p);
        if f.hypot(g) < 1e-14 {
            return Ok(s);
        }
        let j = jacobian_original(s, p);
        let Some(inv) = j.try_inverse() else { break };
        let d = inv * nalgebra::Vector2::new(f, g);
        s.x -= d[0];
        s.y -= d[1];
    }
    if residual_norm(s, p) < 1e-12 {
        Ok(s)
    } else {
        Err(Error::NotAnEquilibrium {
            residual: residual_norm(s, p),
        })
    }
}

fn make_point(curve: &EquilibriumCurve, u: &DVector<f64>, tau: &DVector<f64>, h: f64, streak: usize) -> BranchPoint {
    let (trace, det) = curve.trace_det(u);
    BranchPoint {
        state: State2 { x: u[0], y: u[1] },
        param: u[2],
        trace,
        det,
        stability: Stability::from_trace_det(trace, det),
        tangent: [tau[0], tau[1], tau[2]],
        next_step: h,
        streak,
    }
}

/// Continue the equilibrium `start` of `p` in `free` over `range`.
///
/// The walk starts toward increasing parameter unless `settings.increasing`
/// is false, follows the curve through folds, and stops when the parameter
/// leaves `range` (the last point is placed exactly on the boundary), when the
/// state leaves the box, or when the corrector fails at `h_min`.
pub fn continue_equilibrium(
    start: &Equilibrium,
    p: &OriginalParams,
    free: FreeParam,
    range: (f64, f64),
    settings: &ContinuationSettings,
) -> Result<Branch> {
    settings.validate()?;
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "parameter range [{lo}, {hi}] is empty"
        )));
    }
    let lambda0 = free.value(p);
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if lambda0 < lo - slack || lambda0 > hi + slack {
        return Err(Error::InvalidArgument(format!(
            "start parameter {lambda0} lies outside [{lo}, {hi}]"
        )));
    }
    let residual = residual_norm(start.state, p);
    if residual > 1e-8 {
        return Err(Error::NotAnEquilibrium { residual });
    }
    let state = polish(start.state, p)?;

    let curve = EquilibriumCurve::new(*p, free);
    let u0 = DVector::from_vec(vec![state.x, state.y, lambda0]);
    let sign = if settings.increasing { 1.0 } else { -1.0 };
    let orient = DVector::from_vec(vec![0.0, 0.0, sign]);
    let tau0 = match tangent(&curve, &u0, &orient) {
        Ok(t) => t,
        // At a fold in this parameter the bordered matrix with e_λ is
        // singular; any transverse direction will do.
        Err(_) => tangent(&curve, &u0, &DVector::from_vec(vec![sign, 0.0, 0.0]))?,
    };
    let first = make_point(&curve, &u0, &tau0, settings.h0, 0);
    let branch = Branch {
        free,
        base: *p,
        range,
        settings: *settings,
        points: vec![first],
        bifurcations: Vec::new(),
        segments: Vec::new(),
        termination: Termination::MaxSteps,
        warnings: Vec::new(),
    };
    walk(curve, branch)
}

/// Resume the walk of `branch` from point `index`, discarding later points
/// and the bifurcations beyond it. Produces the same points as the original
/// walk from there on.
pub fn continue_from(branch: &Branch, index: usize) -> Result<Branch> {
    if index >= branch.points.len() {
        return Err(Error::InvalidArgument(format!(
            "restart index {index} beyond branch of {} points",
            branch.points.len()
        )));
    }
    let curve = EquilibriumCurve::new(branch.base, branch.free);
    let mut b = branch.clone();
    b.points.truncate(index + 1);
    let keep = branch.segments.iter().take_while(|&&s| s < index).count();
    b.bifurcations.truncate(keep);
    b.segments.truncate(keep);
    b.warnings.clear();
    b.termination = Termination::MaxSteps;
    walk(curve, b)
}

fn walk(curve: EquilibriumCurve, mut branch: Branch) -> Result<Branch> {
    let settings = branch.settings;
    let corr = settings.corrector();
    let (lo, hi) = branch.range;
    let last = *branch.points.last().expect("branch has a start point");
    let mut u = last.u();
    let mut tau = last.tau();
    let mut h = last.next_step;
    let mut streak = last.streak;
    let mut prev = last;

    for _ in 0..settings.max_steps {
        let v = match point_at(&curve, &u, &tau, h, &corr) {
            Ok(v) => v,
            Err(_) => {
                h *= 0.5;
                streak = 0;
                if h < settings.h_min {
                    branch.termination = Termination::CorrectorFailure { param: u[2] };
                    branch
                        .warnings
                        .push(format!("corrector failed below h_min near parameter {}", u[2]));
                    return Ok(branch);
                }
                continue;
            }
        };

        if v[0].abs() > settings.state_bound || v[1].abs() > settings.state_bound {
            branch.termination = Termination::LeftStateBox { param: u[2] };
            return Ok(branch);
        }

        let (v, h_used, boundary) = if v[2] > hi || v[2] < lo {
            let bound = if v[2] > hi { hi } else { lo };
            let (clip, _) = locate_zero(&curve, &u, &tau, h, |w| Ok(w[2] - bound), 1e-14, &corr)?;
            let mut clip = clip;
            clip[2] = bound;
            let s = tau.dot(&(&clip - &u));
            (clip, s, Some(bound))
        } else {
            (v, h, None)
        };

        let tau_new = tangent(&curve, &v, &tau)?;
        streak += 1;
        let mut h_next = h;
        if boundary.is_none() && streak >= settings.grow_after {
            h_next = (h * settings.grow_factor).min(settings.h_max);
            streak = 0;
        }
        let point = make_point(&curve, &v, &tau_new, h_next, streak);

        let segment = branch.points.len() - 1;
        detect(&curve, &prev, &point, h_used, segment, &mut branch);
        branch.points.push(point);

        if let Some(bound) = boundary {
            branch.termination = Termination::ReachedBoundary { param: bound };
            return Ok(branch);
        }
        prev = point;
        u = v;
        tau = tau_new;
        h = h_next;
    }
    branch.termination = Termination::MaxSteps;
    Ok(branch)
}

fn detect(
    curve: &EquilibriumCurve,
    a: &BranchPoint,
    b: &BranchPoint,
    h: f64,
    segment: usize,
    branch: &mut Branch,
) {
    if (a.det < 0.0) != (b.det < 0.0) {
        match locate_between(curve, a, h, Monitor::Det) {
            Ok(bp) => {
                branch.bifurcations.push(bp);
                branch.segments.push(segment);
            }
            Err(e) => branch.warnings.push(format!("fold refinement failed: {e}")),
        }
    }
    if (a.trace < 0.0) != (b.trace < 0.0) {
        match locate_between(curve, a, h, Monitor::Trace) {
            Ok(bp) => {
                branch.bifurcations.push(bp);
                branch.segments.push(segment);
            }
            Err(e) => branch.warnings.push(format!("Hopf refinement failed: {e}")),
        }
    }
}

#[derive(Clone, Copy)]
enum Monitor {
    Det,
    Trace,
}

fn locate_between(curve: &EquilibriumCurve, a: &BranchPoint, h: f64, monitor: Monitor) -> Result<BifurcationPoint> {
    let corr = CorrectorSettings {
        tol: 1e-13,
        residual_tol: 1e-13,
        max_iter: 25,
    };
    let f = |w: &DVector<f64>| {
        let (t, d) = curve.trace_det(w);
        Ok(match monitor {
            Monitor::Det => d,
            Monitor::Trace => t,
        })
    };
    let (u, _) = locate_zero(curve, &a.u(), &a.tau(), h, f, 0.1 * TEST_FUNCTION_TOL, &corr)?;
    let p = curve.free.apply(&curve.base, u[2])?;
    let state = State2 { x: u[0], y: u[1] };
    match monitor {
        Monitor::Det => Ok(BifurcationPoint::at(BifurcationKind::Fold, state, &p, None)),
        Monitor::Trace => {
            let j = jacobian_original(state, &p);
            let det = j.determinant();
            if det.abs() <= MARGINAL_TOL {
                Err(Error::BogdanovTakensSuspect {
                    x: state.x,
                    current: p.current(),
                    gamma: p.gamma(),
                })
            } else if det > 0.0 {
                let l1 = lyapunov_at(state, &p)?;
                Ok(BifurcationPoint::at(BifurcationKind::Hopf, state, &p, Some(l1)))
            } else {
                Ok(BifurcationPoint::at(BifurcationKind::NeutralSaddle, state, &p, None))
            }
        }
    }
}

fn check_pair(a: &BranchPoint, b: &BranchPoint, sign_of: fn(&BranchPoint) -> f64, what: &str) -> Result<f64> {
    if (sign_of(a) < 0.0) == (sign_of(b) < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{what} does not change sign between the two points"
        )));
    }
    let h = a.tau().dot(&(b.u() - a.u()));
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(
            "second point must follow the first along the branch".into(),
        ));
    }
    Ok(h)
}

/// Refine a fold between two consecutive branch points with opposite `det`.
pub fn locate_fold(a: &BranchPoint, b: &BranchPoint, p: &OriginalParams, free: FreeParam) -> Result<BifurcationPoint> {
    let h = check_pair(a, b, |q| q.det, "det")?;
    locate_between(&EquilibriumCurve::new(*p, free), a, h, Monitor::Det)
}

/// Refine a trace zero between two consecutive branch points.
///
/// The result is a Hopf point (with `l1`) when `det > 0` there and a neutral
/// saddle when `det < 0`.
pub fn locate_hopf(a: &BranchPoint, b: &BranchPoint, p: &OriginalParams, free: FreeParam) -> Result<BifurcationPoint> {
    let h = check_pair(a, b, |q| q.trace, "trace")?;
    locate_between(&EquilibriumCurve::new(*p, free), a, h, Monitor::Trace)
}

/// First Lyapunov coefficient at a located Hopf point; see [`first_lyapunov_from_partials`]
/// for the normalization.
pub fn first_lyapunov_coefficient(hopf: &BifurcationPoint, p: &OriginalParams) -> Result<f64> {
    if hopf.kind != BifurcationKind::Hopf && hopf.kind != BifurcationKind::GeneralizedHopf {
        return Err(Error::InvalidArgument(format!(
            "first Lyapunov coefficient requested for a {} point",
            hopf.kind.as_str()
        )));
    }
    lyapunov_at(hopf.state, &hopf.params(p)?)
}

/// Jacobian at a bifurcation point, for diagnostics.
pub fn jacobian_at(bp: &BifurcationPoint, p: &OriginalParams) -> Result<Matrix2<f64>> {
    Ok(jacobian_original(bp.state, &bp.params(p)?))
}
