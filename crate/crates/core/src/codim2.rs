//! Two-parameter picture in the `(I, γ)` plane.
//!
//! Along the equilibrium manifold `y = (A/γ)e^{αx}`, `I = y − x²(1 − x)`,
//! the Jacobian has `trace = 2x − 3x² − γ` and
//! `det = Aα e^{αx} − γ(2x − 3x²)`, so both bifurcation loci are explicit
//! curves parametrized by the equilibrium abscissa `x ∈ (0, 2/3)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuation::{
    continue_equilibrium, cycle_probe, locate_zero, lyapunov_at, point_at, tangent, BifurcationKind,
    BifurcationPoint, ContinuationSettings, CorrectorSettings, CurveProblem, CycleExtent,
    EnvelopeSettings, FreeParam,
};
use crate::equilibria::{find_equilibria_default, Stability};
use crate::error::{Error, Result};
use crate::model::{fx, gx, OriginalParams, State2};

/// Upper end of the parametrization interval.
pub const X_MAX: f64 = 2.0 / 3.0;

/// A point of a bifurcation locus together with its generating abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPlanePoint {
    #[serde(rename = "I")]
    pub current: f64,
    pub gamma: f64,
    pub x_eq: f64,
}

impl ParamPlanePoint {
    pub fn state(&self, p: &OriginalParams) -> State2 {
        State2 {
            x: self.x_eq,
            y: p.a() / self.gamma * (p.alpha() * self.x_eq).exp(),
        }
    }

    pub fn params(&self, p: &OriginalParams) -> Result<OriginalParams> {
        OriginalParams::new(p.a(), p.alpha(), self.gamma, self.current)
    }
}

/// A point of the trace-zero locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfCurvePoint {
    #[serde(flatten)]
    pub point: ParamPlanePoint,
    /// `det > 0`: a genuine Hopf point rather than a neutral saddle.
    pub genuine: bool,
}

fn current_on_manifold(x: f64, gamma: f64, p: &OriginalParams) -> f64 {
    p.a() / gamma * (p.alpha() * x).exp() - x * x * (1.0 - x)
}

fn check_abscissa(x: f64) -> Result<()> {
    if !(x > 0.0 && x < X_MAX) || fx(x).abs() < 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "abscissa {x} outside the open interval (0, 2/3)"
        )));
    }
    Ok(())
}

/// Fold locus point generated by `x`.
pub fn fold_point(p: &OriginalParams, x: f64) -> Result<ParamPlanePoint> {
    check_abscissa(x)?;
    let gamma = gx(x, p.a(), p.alpha()) / fx(x);
    Ok(ParamPlanePoint {
        current: current_on_manifold(x, gamma, p),
        gamma,
        x_eq: x,
    })
}

/// Trace-zero locus point generated by `x`.
pub fn hopf_point(p: &OriginalParams, x: f64) -> Result<HopfCurvePoint> {
    check_abscissa(x)?;
    let gamma = fx(x);
    Ok(HopfCurvePoint {
        point: ParamPlanePoint {
            current: current_on_manifold(x, gamma, p),
            gamma,
            x_eq: x,
        },
        genuine: gx(x, p.a(), p.alpha()) > gamma * gamma,
    })
}

pub fn fold_curve(p: &OriginalParams, xs: &[f64]) -> Result<Vec<ParamPlanePoint>> {
    xs.iter().map(|&x| fold_point(p, x)).collect()
}

pub fn hopf_curve(p: &OriginalParams, xs: &[f64]) -> Result<Vec<HopfCurvePoint>> {
    xs.iter().map(|&x| hopf_point(p, x)).collect()
}

/// `n` interior points evenly spaced in `(0, 2/3)`.
pub fn default_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| X_MAX * i as f64 / (n + 1) as f64).collect()
}

/// Fold residual `Aα e^{αx} − γ(2x − 3x²)` at fixed `γ`.
fn fold_residual(x: f64, gamma: f64, p: &OriginalParams) -> f64 {
    gx(x, p.a(), p.alpha()) - gamma * fx(x)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Abscissae of fold points at fixed `γ`, in increasing order.
pub fn fold_abscissae(p: &OriginalParams, gamma: f64) -> Vec<f64> {
    const N: usize = 4000;
    let grid: Vec<f64> = (1..N).map(|i| X_MAX * i as f64 / N as f64).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (fold_residual(w[0], gamma, p), fold_residual(w[1], gamma, p));
        if (a < 0.0) != (b < 0.0) {
            roots.push(bisect(|x| fold_residual(x, gamma, p), w[0], w[1]));
        }
    }
    roots
}

/// Abscissae where `trace = 0` at fixed `γ`: `x = (1 ± √(1 − 3γ))/3`.
pub fn hopf_abscissae(gamma: f64) -> Vec<f64> {
    let disc = 1.0 - 3.0 * gamma;
    if !(gamma > 0.0) || disc < 0.0 {
        return Vec::new();
    }
    let r = disc.sqrt();
    if r == 0.0 {
        vec![1.0 / 3.0]
    } else {
        vec![(1.0 - r) / 3.0, (1.0 + r) / 3.0]
    }
}

/// Cusp from the double root of the fold residual:
/// `3αx² − (2α + 6)x + 2 = 0` on `(0, 2/3)`.
pub fn find_cusp(p: &OriginalParams) -> Result<BifurcationPoint> {
    let al = p.alpha();
    let (qa, qb, qc) = (3.0 * al, -(2.0 * al + 6.0), 2.0);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Err(Error::NoRoot(format!("cusp quadratic has no real root for alpha = {al}")));
    }
    let s = disc.sqrt();
    // Numerically stable pair of roots.
    let q = -0.5 * (qb + qb.signum() * s);
    let x = [q / qa, qc / q]
        .into_iter()
        .filter(|x| *x > 0.0 && *x < X_MAX)
        .fold(f64::NAN, |acc, x| if acc.is_nan() || x < acc { x } else { acc });
    if x.is_nan() {
        return Err(Error::NoRoot(format!(
            "no cusp abscissa in (0, 2/3) for alpha = {al}"
        )));
    }
    let fp = fold_point(p, x)?;
    Ok(BifurcationPoint::at(
        BifurcationKind::Cusp,
        fp.state(p),
        &fp.params(p)?,
        None,
    ))
}

/// Fold locus as a curve in `(x, y, I, γ)`: equilibrium plus `det = 0`.
struct FoldLocus {
    a: f64,
    alpha: f64,
}

impl CurveProblem for FoldLocus {
    fn dim(&self) -> usize {
        4
    }

    fn residual(&self, u: &DVector<f64>) -> DVector<f64> {
        let (x, y, i, g) = (u[0], u[1], u[2], u[3]);
        let e = self.a * (self.alpha * x).exp();
        DVector::from_vec(vec![
            x * x * (1.0 - x) - y + i,
            e - g * y,
            self.alpha * e - g * fx(x),
        ])
    }

    fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let (x, y, g) = (u[0], u[1], u[3]);
        let e = self.a * (self.alpha * x).exp();
        DMatrix::from_row_slice(
            3,
            4,
            &[
                fx(x), -1.0, 1.0, 0.0,
                self.alpha * e, -g, 0.0, -y,
                self.alpha * self.alpha * e - g * (2.0 - 6.0 * x), 0.0, 0.0, -fx(x),
            ],
        )
    }
}

/// Cusp located numerically: a fold found by equilibrium continuation at
/// `start_gamma` is followed along the fold locus toward smaller `γ` until the
/// locus turns in `γ`.
pub fn track_cusp(p: &OriginalParams, start_gamma: f64) -> Result<BifurcationPoint> {
    let q = OriginalParams::new(p.a(), p.alpha(), start_gamma, -0.05)?;
    let scan = find_equilibria_default(&q)?;
    let start = scan
        .equilibria
        .first()
        .ok_or_else(|| Error::NoRoot("no equilibrium at the tracking start".into()))?;
    let branch = continue_equilibrium(
        start,
        &q,
        FreeParam::Current,
        (-0.05, 0.2),
        &ContinuationSettings::default(),
    )?;
    let fold = branch
        .of_kind(BifurcationKind::Fold)
        .next()
        .ok_or_else(|| Error::NoRoot(format!("no fold on the branch at gamma = {start_gamma}")))?;

    let locus = FoldLocus {
        a: p.a(),
        alpha: p.alpha(),
    };
    let corr = CorrectorSettings {
        tol: 1e-13,
        residual_tol: 1e-13,
        max_iter: 25,
    };
    let mut u = DVector::from_vec(vec![fold.state.x, fold.state.y, fold.current, fold.gamma]);
    let mut tau = tangent(&locus, &u, &DVector::from_vec(vec![0.0, 0.0, 0.0, -1.0]))?;
    if tau[3] >= 0.0 {
        return Err(Error::NoRoot("fold locus does not descend in gamma from the start".into()));
    }
    let h = 2e-3;
    for _ in 0..100_000 {
        let v = point_at(&locus, &u, &tau, h, &corr)?;
        let tau_v = tangent(&locus, &v, &tau)?;
        if tau_v[3] >= 0.0 {
            let base_tau = tau.clone();
            let monitor = |w: &DVector<f64>| Ok(tangent(&locus, w, &base_tau)?[3]);
            let (c, _) = locate_zero(&locus, &u, &tau, h, monitor, 1e-13, &corr)?;
            let pc = OriginalParams::new(p.a(), p.alpha(), c[3], c[2])?;
            return Ok(BifurcationPoint::at(
                BifurcationKind::Cusp,
                State2 { x: c[0], y: c[1] },
                &pc,
                None,
            ));
        }
        if v[3] <= 0.0 || v[0].abs() > 5.0 {
            break;
        }
        u = v;
        tau = tau_v;
    }
    Err(Error::NoRoot("fold locus never turned in gamma".into()))
}

/// First Lyapunov coefficient along the genuine part of the trace-zero locus.
pub fn hopf_l1(p: &OriginalParams, x: f64) -> Result<Option<f64>> {
    let hp = hopf_point(p, x)?;
    if !hp.genuine {
        return Ok(None);
    }
    let q = hp.point.params(p)?;
    lyapunov_at(hp.point.state(p), &q).map(Some)
}

/// Generalized Hopf point: zero of `l1` along the genuine trace-zero locus
/// inside `x_bracket`.
///
/// The bracket is sampled to find the first sign change between adjacent
/// genuine points, then bisected until `|l1| < 1e-8`.
pub fn find_generalized_hopf(p: &OriginalParams, x_bracket: (f64, f64)) -> Result<BifurcationPoint> {
    const SAMPLES: usize = 400;
    let (lo, hi) = x_bracket;
    if !(lo > 0.0 && hi < X_MAX && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "bracket [{lo}, {hi}] must lie inside (0, 2/3)"
        )));
    }
    let xs: Vec<f64> = (0..=SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / SAMPLES as f64)
        .collect();
    let l1s = xs
        .iter()
        .map(|&x| hopf_l1(p, x))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..SAMPLES {
        if let (Some(a), Some(b)) = (l1s[i], l1s[i + 1]) {
            if (a < 0.0) != (b < 0.0) {
                return refine_gh(p, xs[i], a, xs[i + 1]);
            }
        }
    }
    Err(Error::NoRoot(format!(
        "l1 does not change sign on the genuine part of [{lo}, {hi}]"
    )))
}

fn refine_gh(p: &OriginalParams, mut lo: f64, mut l_lo: f64, mut hi: f64) -> Result<BifurcationPoint> {
    let l1 = |x: f64| -> Result<f64> {
        hopf_l1(p, x)?.ok_or_else(|| Error::NoRoot("left the genuine Hopf segment".into()))
    };
    let mut x = 0.5 * (lo + hi);
    let mut lx = l1(x)?;
    for _ in 0..200 {
        if lx.abs() < 1e-8 && hi - lo < 1e-12 {
            break;
        }
        if (lx < 0.0) == (l_lo < 0.0) {
            lo = x;
            l_lo = lx;
        } else {
            hi = x;
        }
        let next = 0.5 * (lo + hi);
        if next == x {
            break;
        }
        x = next;
        lx = l1(x)?;
    }
    if lx.abs() >= 1e-8 {
        return Err(Error::NoConvergence {
            what: "generalized Hopf bisection",
            iterations: 200,
        });
    }
    let hp = hopf_point(p, x)?;
    Ok(BifurcationPoint::at(
        BifurcationKind::GeneralizedHopf,
        hp.point.state(p),
        &hp.point.params(p)?,
        Some(lx),
    ))
}

/// Every generalized Hopf point on the trace-zero locus.
pub fn find_all_generalized_hopf(p: &OriginalParams) -> Result<Vec<BifurcationPoint>> {
    const SAMPLES: usize = 2000;
    let xs = default_grid(SAMPLES);
    let l1s = xs
        .iter()
        .map(|&x| hopf_l1(p, x))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..xs.len() - 1 {
        if let (Some(a), Some(b)) = (l1s[i], l1s[i + 1]) {
            if (a < 0.0) != (b < 0.0) {
                out.push(refine_gh(p, xs[i], a, xs[i + 1])?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    R1,
    R2,
    R3,
    R4,
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::R1 => "R1",
            RegionLabel::R2 => "R2",
            RegionLabel::R3 => "R3",
            RegionLabel::R4 => "R4",
            RegionLabel::Unclassified => "unclassified",
        }
    }

    /// Region from the equilibrium census and cycle presence.
    ///
    /// R1: one stable equilibrium, no cycle. R2: three equilibria, two
    /// stable, no cycle. R4: one unstable equilibrium and a stable cycle.
    /// R3: any other configuration with a stable cycle.
    pub fn from_census(count: usize, stable: usize, cycle: bool) -> Self {
        match (cycle, count, stable) {
            (false, 1, 1) => RegionLabel::R1,
            (false, 3, 2) => RegionLabel::R2,
            (true, 1, 0) => RegionLabel::R4,
            (true, _, _) => RegionLabel::R3,
            _ => RegionLabel::Unclassified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    #[serde(rename = "I")]
    pub current: f64,
    pub gamma: f64,
    pub equilibria: Vec<Stability>,
    pub stable_count: usize,
    pub cycle_present: bool,
    pub cycle: Option<CycleExtent>,
    pub label: RegionLabel,
}

/// Extra starting points used when fewer than three equilibria exist: one on
/// the upper branch of the cubic, one left of the lower branch.
const FILL_STARTS: [(f64, f64); 2] = [(0.8, 0.05), (-0.3, 0.0)];

/// Equilibrium census plus a cycle search from three starting points.
pub fn classify_region(current: f64, gamma: f64, p: &OriginalParams, s: &EnvelopeSettings) -> Result<RegionReport> {
    let q = OriginalParams::new(p.a(), p.alpha(), gamma, current)?;
    let scan = find_equilibria_default(&q)?;
    let mut starts: Vec<State2> = scan
        .equilibria
        .iter()
        .map(|e| State2 {
            x: e.state.x + s.offset,
            y: e.state.y,
        })
        .collect();
    for (x, y) in FILL_STARTS {
        if starts.len() >= 3 {
            break;
        }
        starts.push(State2 { x, y });
    }
    let mut cycle: Option<CycleExtent> = None;
    for st in starts {
        if let Some(c) = cycle_probe(&q, st, s)? {
            if cycle.map_or(true, |old| c.width() > old.width()) {
                cycle = Some(c);
            }
        }
    }
    let stable_count = scan.stable_count();
    Ok(RegionReport {
        current,
        gamma,
        equilibria: scan.equilibria.iter().map(|e| e.stability).collect(),
        stable_count,
        cycle_present: cycle.is_some(),
        cycle,
        label: RegionLabel::from_census(scan.count(), stable_count, cycle.is_some()),
    })
}

/// [`classify_region`] on an `n_i × n_gamma` grid, row-major in `γ`.
pub fn region_grid(
    p: &OriginalParams,
    i_range: (f64, f64),
    gamma_range: (f64, f64),
    n_i: usize,
    n_gamma: usize,
    s: &EnvelopeSettings,
) -> Result<Vec<RegionReport>> {
    if n_i < 2 || n_gamma < 2 {
        return Err(Error::InvalidArgument("region grid needs at least 2×2 cells".into()));
    }
    let cells: Vec<(f64, f64)> = (0..n_gamma)
        .flat_map(|j| {
            let g = gamma_range.0 + (gamma_range.1 - gamma_range.0) * j as f64 / (n_gamma - 1) as f64;
            (0..n_i).map(move |i| {
                (i_range.0 + (i_range.1 - i_range.0) * i as f64 / (n_i - 1) as f64, g)
            })
        })
        .collect();
    cells
        .par_iter()
        .map(|&(i, g)| classify_region(i, g, p, s))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Fold,
    Hopf,
}

/// A reported bifurcation current to be matched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub kind: TargetKind,
    #[serde(rename = "I")]
    pub current: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetResidual {
    pub kind: TargetKind,
    pub target: f64,
    /// Matched prediction, absent when the fit has fewer points of this kind.
    pub predicted: Option<f64>,
    pub residual: Option<f64>,
    pub x_eq: Option<f64>,
    /// For trace-zero matches: genuine Hopf (`det > 0`) or neutral saddle.
    pub genuine: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub gamma: f64,
    /// Sum of squared residuals, with a unit penalty per unmatched target.
    pub score: f64,
    pub residuals: Vec<TargetResidual>,
    pub bracket: (f64, f64),
    pub scan_points: usize,
}

const UNMATCHED_PENALTY: f64 = 1.0;

struct Prediction {
    current: f64,
    x: f64,
    genuine: Option<bool>,
}

fn predictions(p: &OriginalParams, gamma: f64, kind: TargetKind) -> Vec<Prediction> {
    match kind {
        TargetKind::Fold => fold_abscissae(p, gamma)
            .into_iter()
            .map(|x| Prediction {
                current: current_on_manifold(x, gamma, p),
                x,
                genuine: None,
            })
            .collect(),
        TargetKind::Hopf => hopf_abscissae(gamma)
            .into_iter()
            .filter(|&x| x > 0.0 && x < X_MAX)
            .map(|x| Prediction {
                current: current_on_manifold(x, gamma, p),
                x,
                genuine: Some(gx(x, p.a(), p.alpha()) > gamma * gamma),
            })
            .collect(),
    }
}

/// Order-preserving assignment of `targets` to `preds` (both in branch
/// order) minimizing squared residuals; returns the matched prediction index
/// per target.
fn match_in_order(targets: &[f64], preds: &[Prediction]) -> (f64, Vec<Option<usize>>) {
    let (n, m) = (targets.len(), preds.len());
    // cost[i][j]: first i targets placed among first j predictions.
    let mut cost = vec![vec![f64::INFINITY; m + 1]; n + 1];
    let mut choice = vec![vec![0u8; m + 1]; n + 1];
    for c in cost[0].iter_mut() {
        *c = 0.0;
    }
    for i in 1..=n {
        cost[i][0] = cost[i - 1][0] + UNMATCHED_PENALTY;
        choice[i][0] = 2;
        for j in 1..=m {
            let d = targets[i - 1] - preds[j - 1].current;
            let options = [
                (cost[i - 1][j - 1] + d * d, 0u8),
                (cost[i][j - 1], 1u8),
                (cost[i - 1][j] + UNMATCHED_PENALTY, 2u8),
            ];
            let best = options
                .into_iter()
                .fold((f64::INFINITY, 0u8), |acc, o| if o.0 < acc.0 { o } else { acc });
            cost[i][j] = best.0;
            choice[i][j] = best.1;
        }
    }
    let mut assign = vec![None; n];
    let (mut i, mut j) = (n, m);
    while i > 0 {
        match choice[i][j] {
            0 => {
                assign[i - 1] = Some(j - 1);
                i -= 1;
                j -= 1;
            }
            1 => j -= 1,
            _ => i -= 1,
        }
    }
    (cost[n][m], assign)
}

fn score_at(p: &OriginalParams, gamma: f64, targets: &[Target]) -> (f64, Vec<TargetResidual>) {
    let mut residuals: Vec<Option<TargetResidual>> = vec![None; targets.len()];
    let mut total = 0.0;
    for kind in [TargetKind::Fold, TargetKind::Hopf] {
        let idx: Vec<usize> = (0..targets.len()).filter(|&i| targets[i].kind == kind).collect();
        if idx.is_empty() {
            continue;
        }
        let preds = predictions(p, gamma, kind);
        let vals: Vec<f64> = idx.iter().map(|&i| targets[i].current).collect();
        let (c, assign) = match_in_order(&vals, &preds);
        total += c;
        for (k, &ti) in idx.iter().enumerate() {
            let t = targets[ti];
            residuals[ti] = Some(match assign[k] {
                Some(j) => TargetResidual {
                    kind,
                    target: t.current,
                    predicted: Some(preds[j].current),
                    residual: Some(preds[j].current - t.current),
                    x_eq: Some(preds[j].x),
                    genuine: preds[j].genuine,
                },
                None => TargetResidual {
                    kind,
                    target: t.current,
                    predicted: None,
                    residual: None,
                    x_eq: None,
                    genuine: None,
                },
            });
        }
    }
    (total, residuals.into_iter().map(|r| r.expect("every target scored")).collect())
}

/// Best-fit `γ` for reported bifurcation currents over `bracket`, by a
/// `scan_points` grid followed by golden-section refinement around the best
/// cell. Targets of each kind are matched to predictions in order of
/// increasing equilibrium abscissa.
pub fn recover_gamma(
    p: &OriginalParams,
    targets: &[Target],
    bracket: (f64, f64),
    scan_points: usize,
) -> Result<GammaFit> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("no targets to fit".into()));
    }
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi >= lo) || scan_points == 0 {
        return Err(Error::InvalidArgument(format!(
            "invalid gamma bracket [{lo}, {hi}] or scan size {scan_points}"
        )));
    }
    let score = |g: f64| score_at(p, g, targets).0;
    let width = hi - lo;
    let grid: Vec<f64> = if width == 0.0 {
        vec![lo]
    } else {
        (0..scan_points)
            .map(|k| lo + width * (k as f64 + 0.5) / scan_points as f64)
            .collect()
    };
    let scores: Vec<f64> = grid.par_iter().map(|&g| score(g)).collect();
    let best = scores
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if *s < scores[b] { i } else { b });
    let mut gamma = grid[best];
    if width > 0.0 {
        let cell = width / scan_points as f64;
        let (mut a, mut b) = ((gamma - cell).max(lo), (gamma + cell).min(hi));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (score(c), score(d));
        for _ in 0..100 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = score(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = score(d);
            }
        }
        let refined = 0.5 * (a + b);
        if score(refined) <= scores[best] {
            gamma = refined;
        }
    }
    let (s, residuals) = score_at(p, gamma, targets);
    Ok(GammaFit {
        gamma,
        score: s,
        residuals,
        bracket,
        scan_points,
    })
}

/// [`recover_gamma`] over `(γ_cusp, 1/3)` with 2000 scan points.
pub fn recover_fig2_gamma(p: &OriginalParams, targets: &[Target]) -> Result<GammaFit> {
    let gc = find_cusp(p)?.gamma;
    recover_gamma(p, targets, (gc, 1.0 / 3.0), 2000)
}
