//! Pseudo-arclength predictor-corrector for curves `F(u) = 0`, `F: Rⁿ → Rⁿ⁻¹`.
//!
//! The predictor steps along the unit tangent; the corrector runs Newton on
//! the bordered system `[F(v); τ·(v − v_pred)] = 0`, i.e. it stays on the
//! hyperplane through the predicted point orthogonal to the tangent.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A curve defined implicitly by `n − 1` equations in `n` unknowns.
pub(crate) trait CurveProblem {
    fn dim(&self) -> usize;
    fn residual(&self, u: &DVector<f64>) -> DVector<f64>;
    /// `(n − 1) × n` Jacobian of [`residual`](Self::residual).
    fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64>;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct CorrectorSettings {
    pub tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

fn bordered<P: CurveProblem>(problem: &P, u: &DVector<f64>, row: &DVector<f64>) -> DMatrix<f64> {
    let n = problem.dim();
    let jac = problem.jacobian(u);
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, 0), (n - 1, n)).copy_from(&jac);
    for j in 0..n {
        m[(n - 1, j)] = row[j];
    }
    m
}

/// Unit tangent at `u`, oriented to have positive projection on `orient`.
pub(crate) fn tangent<P: CurveProblem>(
    problem: &P,
    u: &DVector<f64>,
    orient: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = problem.dim();
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let m = bordered(problem, u, orient);
    let t = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::NoConvergence {
            what: "tangent computation (singular bordered matrix)",
            iterations: 0,
        })?;
    let norm = t.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::NonFinite("continuation tangent"));
    }
    let t = t / norm;
    Ok(if t.dot(orient) < 0.0 { -t } else { t })
}

/// Newton correction of `predicted` on the hyperplane orthogonal to `direction`.
pub(crate) fn correct<P: CurveProblem>(
    problem: &P,
    predicted: &DVector<f64>,
    direction: &DVector<f64>,
    settings: &CorrectorSettings,
) -> Result<DVector<f64>> {
    let n = problem.dim();
    let mut v = predicted.clone();
    for _ in 0..settings.max_iter {
        let f = problem.residual(&v);
        let mut g = DVector::zeros(n);
        g.rows_mut(0, n - 1).copy_from(&f);
        g[n - 1] = direction.dot(&(&v - predicted));
        let m = bordered(problem, &v, direction);
        let delta = m.lu().solve(&g).ok_or(Error::NoConvergence {
            what: "corrector (singular Jacobian)",
            iterations: 0,
        })?;
        v -= &delta;
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("corrector iterate"));
        }
        if delta.amax() <= settings.tol {
            let r = problem.residual(&v).amax();
            if r <= settings.residual_tol {
                return Ok(v);
            }
        }
    }
    Err(Error::NoConvergence {
        what: "pseudo-arclength corrector",
        iterations: settings.max_iter,
    })
}

/// Point on the curve reached from `base` along `direction` at pseudo-arclength `s`.
pub(crate) fn point_at<P: CurveProblem>(
    problem: &P,
    base: &DVector<f64>,
    direction: &DVector<f64>,
    s: f64,
    settings: &CorrectorSettings,
) -> Result<DVector<f64>> {
    let predicted = base + direction * s;
    correct(problem, &predicted, direction, settings)
}

/// Root of a scalar monitor along the curve between `base` (`s = 0`) and
/// `s = h`, by the Illinois variant of regula falsi.
///
/// Returns the refined point and its monitor value.
pub(crate) fn locate_zero<P, M>(
    problem: &P,
    base: &DVector<f64>,
    direction: &DVector<f64>,
    h: f64,
    monitor: M,
    monitor_tol: f64,
    settings: &CorrectorSettings,
) -> Result<(DVector<f64>, f64)>
where
    P: CurveProblem,
    M: Fn(&DVector<f64>) -> Result<f64>,
{
    const MAX_ITER: usize = 50;
    let mut s0 = 0.0;
    let mut m0 = monitor(base)?;
    let mut s1 = h;
    let mut p1 = point_at(problem, base, direction, s1, settings)?;
    let mut m1 = monitor(&p1)?;
    if m0.abs() < monitor_tol {
        return Ok((base.clone(), m0));
    }
    if m1.abs() < monitor_tol {
        return Ok((p1, m1));
    }
    if (m0 < 0.0) == (m1 < 0.0) {
        return Err(Error::InvalidArgument(
            "monitor does not change sign across the bracket".into(),
        ));
    }
    let mut side = 0i8;
    for _ in 0..MAX_ITER {
        let s = (s0 * m1 - s1 * m0) / (m1 - m0);
        let p = point_at(problem, base, direction, s, settings)?;
        let m = monitor(&p)?;
        if m.abs() < monitor_tol || (s1 - s0).abs() < 1e-15 * h.abs().max(1.0) {
            return Ok((p, m));
        }
        if (m < 0.0) == (m1 < 0.0) {
            s1 = s;
            m1 = m;
            p1 = p;
            if side == 1 {
                m0 *= 0.5;
            }
            side = 1;
        } else {
            s0 = s;
            m0 = m;
            if side == -1 {
                m1 *= 0.5;
            }
            side = -1;
        }
    }
    let _ = p1;
    Err(Error::NoConvergence {
        what: "test-function root along the branch",
        iterations: MAX_ITER,
    })
}
