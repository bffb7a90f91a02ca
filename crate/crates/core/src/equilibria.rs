//! Nullclines, equilibria and their linear stability for the two-variable model.
//!
//! Equilibria are the intersections of the x-nullcline `y = x²(1 − x) + I` with
//! the y-nullcline `y = (A/γ)·exp(αx)`, i.e. the roots of
//!
//! ```text
//! h(x) = x²(1 − x) + I − (A/γ)·exp(αx).
//! ```
//!
//! Roots are bracketed by a sign-change scan on a uniform grid, narrowed by
//! bisection to width `1e-6` and polished by Newton's method to `|h| < 1e-12`.
//! Tangential (double) roots produce no sign change and are not reported; they
//! only occur exactly on a fold curve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{field_original, fx, gx, jacobian_original, OriginalParams, State2};

/// Default lower end of the equilibrium search bracket.
pub const DEFAULT_X_LO: f64 = -1.0;
/// Default upper end of the equilibrium search bracket.
pub const DEFAULT_X_HI: f64 = 1.5;
/// Default number of grid cells in the sign-change scan.
pub const DEFAULT_GRID_N: usize = 512;

/// `|trace|` or `|det|` below this makes a classification marginal.
pub const MARGINAL_TOL: f64 = 1e-10;

const BISECTION_WIDTH: f64 = 1e-6;
const ROOT_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;

/// Linear stability type of an equilibrium of a planar system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    StableNode,
    StableFocus,
    Saddle,
    UnstableNode,
    UnstableFocus,
    /// Trace or determinant within [`MARGINAL_TOL`] of zero: a bifurcation
    /// candidate rather than a classification.
    Marginal,
}

impl Stability {
    /// Classify from the trace and determinant of the Jacobian.
    pub fn from_trace_det(trace: f64, det: f64) -> Self {
        if trace.abs() < MARGINAL_TOL || det.abs() < MARGINAL_TOL {
            return Stability::Marginal;
        }
        if det < 0.0 {
            return Stability::Saddle;
        }
        let focus = trace * trace - 4.0 * det < 0.0;
        match (trace < 0.0, focus) {
            (true, false) => Stability::StableNode,
            (true, true) => Stability::StableFocus,
            (false, false) => Stability::UnstableNode,
            (false, true) => Stability::UnstableFocus,
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(self, Stability::StableNode | Stability::StableFocus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stability::StableNode => "stable-node",
            Stability::StableFocus => "stable-focus",
            Stability::Saddle => "saddle",
            Stability::UnstableNode => "unstable-node",
            Stability::UnstableFocus => "unstable-focus",
            Stability::Marginal => "marginal",
        }
    }
}

/// Eigenvalues of a 2×2 matrix with the given trace and determinant, ordered
/// by decreasing real part (then decreasing imaginary part).
pub fn eigenvalues_2x2(trace: f64, det: f64) -> [Complex64; 2] {
    let half = 0.5 * trace;
    let disc = half * half - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [Complex64::new(half + r, 0.0), Complex64::new(half - r, 0.0)]
    } else {
        let w = (-disc).sqrt();
        [Complex64::new(half, w), Complex64::new(half, -w)]
    }
}

/// A classified equilibrium of the two-variable model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub state: State2,
    pub eigenvalues: [Complex64; 2],
    pub stability: Stability,
    pub trace: f64,
    pub det: f64,
}

#[derive(Serialize, Deserialize)]
struct EquilibriumRecord {
    x: f64,
    y: f64,
    trace: f64,
    det: f64,
    eigenvalues: [[f64; 2]; 2],
    stability: Stability,
}

impl Serialize for Equilibrium {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EquilibriumRecord {
            x: self.state.x,
            y: self.state.y,
            trace: self.trace,
            det: self.det,
            eigenvalues: [
                [self.eigenvalues[0].re, self.eigenvalues[0].im],
                [self.eigenvalues[1].re, self.eigenvalues[1].im],
            ],
            stability: self.stability,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Equilibrium {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EquilibriumRecord::deserialize(d)?;
        Ok(Equilibrium {
            state: State2 { x: r.x, y: r.y },
            eigenvalues: [
                Complex64::new(r.eigenvalues[0][0], r.eigenvalues[0][1]),
                Complex64::new(r.eigenvalues[1][0], r.eigenvalues[1][1]),
            ],
            stability: r.stability,
            trace: r.trace,
            det: r.det,
        })
    }
}

/// A grid cell whose bracketed root could not be polished.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementFailure {
    pub x_lo: f64,
    pub x_hi: f64,
    pub last_x: f64,
    pub last_residual: f64,
}

/// Result of [`find_equilibria`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EquilibriumScan {
    /// Equilibria sorted by increasing `x`.
    pub equilibria: Vec<Equilibrium>,
    pub failures: Vec<RefinementFailure>,
}

impl EquilibriumScan {
    pub fn count(&self) -> usize {
        self.equilibria.len()
    }

    pub fn stable_count(&self) -> usize {
        self.equilibria
            .iter()
            .filter(|e| e.stability.is_stable())
            .count()
    }
}

/// `y = x²(1 − x) + I`.
pub fn x_nullcline(x: f64, p: &OriginalParams) -> f64 {
    x * x * (1.0 - x) + p.current()
}

/// `y = (A/γ)·exp(αx)`.
pub fn y_nullcline(x: f64, p: &OriginalParams) -> f64 {
    p.a() / p.gamma() * (p.alpha() * x).exp()
}

/// Difference of the nullclines, whose roots are the equilibrium abscissae.
pub fn nullcline_gap(x: f64, p: &OriginalParams) -> f64 {
    x_nullcline(x, p) - y_nullcline(x, p)
}

fn nullcline_gap_dx(x: f64, p: &OriginalParams) -> f64 {
    fx(x) - gx(x, p.a(), p.alpha()) / p.gamma()
}

/// Locate every sign change of the nullcline gap on `[x_lo, x_hi]`.
pub fn find_equilibria(
    p: &OriginalParams,
    x_lo: f64,
    x_hi: f64,
    grid_n: usize,
) -> Result<EquilibriumScan> {
    if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
        return Err(Error::InvalidArgument(format!(
            "search bracket [{x_lo}, {x_hi}] is empty"
        )));
    }
    if grid_n < 64 {
        return Err(Error::InvalidArgument(format!(
            "grid_n = {grid_n} is below the minimum of 64"
        )));
    }

    let dx = (x_hi - x_lo) / grid_n as f64;
    let node = |i: usize| if i == grid_n { x_hi } else { x_lo + i as f64 * dx };

    let mut scan = EquilibriumScan::default();
    let mut prev_x = node(0);
    let mut prev_h = nullcline_gap(prev_x, p);
    if prev_h == 0.0 {
        scan.equilibria.push(classify_equilibrium(
            State2 {
                x: prev_x,
                y: y_nullcline(prev_x, p),
            },
            p,
        )?);
    }
    for i in 1..=grid_n {
        let x = node(i);
        let h = nullcline_gap(x, p);
        if h == 0.0 {
            scan.equilibria.push(classify_equilibrium(
                State2 {
                    x,
                    y: y_nullcline(x, p),
                },
                p,
            )?);
        } else if prev_h != 0.0 && (prev_h < 0.0) != (h < 0.0) {
            match refine_root(p, prev_x, prev_h, x) {
                Ok(root) => scan.equilibria.push(classify_equilibrium(
                    State2 {
                        x: root,
                        y: y_nullcline(root, p),
                    },
                    p,
                )?),
                Err(f) => scan.failures.push(f),
            }
        }
        prev_x = x;
        prev_h = h;
    }
    Ok(scan)
}

/// [`find_equilibria`] on the default bracket and grid.
pub fn find_equilibria_default(p: &OriginalParams) -> Result<EquilibriumScan> {
    find_equilibria(p, DEFAULT_X_LO, DEFAULT_X_HI, DEFAULT_GRID_N)
}

fn refine_root(
    p: &OriginalParams,
    mut lo: f64,
    mut h_lo: f64,
    mut hi: f64,
) -> std::result::Result<f64, RefinementFailure> {
    let (cell_lo, cell_hi) = (lo, hi);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let h_mid = nullcline_gap(mid, p);
        if h_mid == 0.0 {
            return Ok(mid);
        }
        if (h_mid < 0.0) == (h_lo < 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut h = nullcline_gap(x, p);
    for _ in 0..NEWTON_MAX_ITER {
        if h.abs() < ROOT_TOL {
            return Ok(x);
        }
        let slope = nullcline_gap_dx(x, p);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        x -= h / slope;
        h = nullcline_gap(x, p);
    }
    if h.abs() < ROOT_TOL && x >= cell_lo && x <= cell_hi {
        return Ok(x);
    }
    Err(RefinementFailure {
        x_lo: cell_lo,
        x_hi: cell_hi,
        last_x: x,
        last_residual: h,
    })
}

/// Classify a known equilibrium by the eigenvalues of its Jacobian.
///
/// Fails when the full vector field at `e` exceeds `1e-8` in norm.
pub fn classify_equilibrium(e: State2, p: &OriginalParams) -> Result<Equilibrium> {
    if !e.is_finite() {
        return Err(Error::NonFinite("equilibrium state"));
    }
    let [dx, dy] = field_original(e.x, e.y, p);
    let residual = dx.hypot(dy);
    if residual > 1e-8 {
        return Err(Error::NotAnEquilibrium { residual });
    }
    let j = jacobian_original(e, p);
    let trace = j.trace();
    let det = j.determinant();
    Ok(Equilibrium {
        state: e,
        eigenvalues: eigenvalues_2x2(trace, det),
        stability: Stability::from_trace_det(trace, det),
        trace,
        det,
    })
}
