//! Dormand–Prince 5(4) integrator with dense output.
//!
//! The adaptive driver samples the solution on a uniform grid using the
//! fourth-order continuous extension, so output spacing is independent of
//! the internal step sequence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Smallest step the adaptive driver accepts before giving up.
pub const MIN_STEP: f64 = 1e-12;

/// Tolerances and output grid for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeSettings {
    pub rtol: f64,
    pub atol: f64,
    pub sample_dt: f64,
    /// Upper bound on the internal step; `None` means the span length.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings {
            rtol: 1e-9,
            atol: 1e-12,
            sample_dt: 0.1,
            h_max: None,
            max_steps: 50_000_000,
        }
    }
}

impl OdeSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol >= 1e-12 && self.rtol <= 1e-3) {
            return Err(Error::InvalidParameter {
                name: "rtol",
                value: self.rtol,
                reason: "must lie in [1e-12, 1e-3]",
            });
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "atol",
                value: self.atol,
                reason: "must be positive",
            });
        }
        if !(self.sample_dt > 0.0 && self.sample_dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sample_dt",
                value: self.sample_dt,
                reason: "must be positive",
            });
        }
        if let Some(h) = self.h_max {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "h_max",
                    value: h,
                    reason: "must be positive",
                });
            }
        }
        Ok(())
    }
}

/// Work counters of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Uniformly sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub stats: StepStats,
}

#[inline]
fn lin<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

struct Stage<const N: usize> {
    y1: [f64; N],
    k: [[f64; N]; 7],
}

/// One Dormand–Prince step from `(t, y)` with `k1 = f(t, y)` already known.
fn dp_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> Stage<N>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k2 = f(t + C2 * h, &lin(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &lin(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &lin(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        t + C5 * h,
        &lin(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &lin(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y1 = lin(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y1);
    Stage {
        y1,
        k: [*k1, k2, k3, k4, k5, k6, k7],
    }
}

fn error_norm<const N: usize>(y0: &[f64; N], st: &Stage<N>, h: f64, rtol: f64, atol: f64) -> f64 {
    let k = &st.k;
    let mut sum = 0.0;
    for i in 0..N {
        let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
            + E7 * k[6][i]);
        let sc = atol + rtol * y0[i].abs().max(st.y1[i].abs());
        sum += (e / sc) * (e / sc);
    }
    (sum / N as f64).sqrt()
}

/// Coefficients of the continuous extension over one accepted step.
struct Dense<const N: usize> {
    r: [[f64; N]; 5],
}

impl<const N: usize> Dense<N> {
    fn new(y0: &[f64; N], st: &Stage<N>, h: f64) -> Self {
        let k = &st.k;
        let mut r = [[0.0; N]; 5];
        for i in 0..N {
            let dy = st.y1[i] - y0[i];
            let bspl = h * k[0][i] - dy;
            r[0][i] = y0[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * k[6][i] - bspl;
            r[4][i] = h
                * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i]
                    + D7 * k[6][i]);
        }
        Dense { r }
    }

    fn eval(&self, theta: f64) -> [f64; N] {
        let th1 = 1.0 - theta;
        let r = &self.r;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = r[0][i] + theta * (r[1][i] + th1 * (r[2][i] + theta * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

fn rms_scaled<const N: usize>(v: &[f64; N], sc: &[f64; N]) -> f64 {
    (v.iter().zip(sc).map(|(a, s)| (a / s) * (a / s)).sum::<f64>() / N as f64).sqrt()
}

/// Starting step from the local scale of the solution and its derivatives.
fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    h_max: f64,
    rtol: f64,
    atol: f64,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut sc = [0.0; N];
    for i in 0..N {
        sc[i] = atol + rtol * y0[i].abs();
    }
    let d0 = rms_scaled(y0, &sc);
    let d1 = rms_scaled(f0, &sc);
    let mut h0 = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(h_max);
    let y1 = lin(y0, dir * h0, &[(1.0, f0)]);
    let f1 = f(t0 + dir * h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms_scaled(&diff, &sc) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    (100.0 * h0).min(h1).min(h_max)
}

/// Integrate `y' = f(t, y)` over `t_span`, sampling every `settings.sample_dt`.
///
/// Samples are at `t0 + k·dt` for `k = 0, 1, …` up to the end of the span.
/// `t_span.1` must exceed `t_span.0`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t_span: (f64, f64),
    y0: [f64; N],
    settings: &OdeSettings,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    settings.validate()?;
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "time span [{t0}, {t1}] must be finite and increasing"
        )));
    }
    if !y0.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }

    let dt = settings.sample_dt;
    let n_samples = ((t1 - t0) / dt * (1.0 + 1e-12)).floor() as usize + 1;
    let mut out_t = Vec::with_capacity(n_samples);
    let mut out_y = Vec::with_capacity(n_samples);
    out_t.push(t0);
    out_y.push(y0);

    let h_max = settings.h_max.unwrap_or(t1 - t0).min(t1 - t0);
    let mut stats = StepStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&mut f, t, &y, &k1, 1.0, h_max, settings.rtol, settings.atol);
    stats.evaluations += 1;
    let mut last_rejected = false;

    while out_t.len() < n_samples {
        if stats.accepted + stats.rejected >= settings.max_steps {
            return Err(Error::TooManySteps(settings.max_steps));
        }
        if h < MIN_STEP {
            return Err(Error::StepUnderflow {
                t,
                h,
                state: y.to_vec(),
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let st = dp_step(&mut f, t, &y, &k1, h);
        stats.evaluations += 6;
        let err = error_norm(&y, &st, h, settings.rtol, settings.atol);

        if !err.is_finite() || err > 1.0 {
            stats.rejected += 1;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 1.0)
            } else {
                0.2
            };
            h *= fac;
            last_rejected = true;
            continue;
        }

        stats.accepted += 1;
        let t_new = if last { t1 } else { t + h };
        let dense = Dense::new(&y, &st, h);
        while out_t.len() < n_samples {
            let k = out_t.len();
            let ts = t0 + k as f64 * dt;
            if ts > t_new && !(last && k + 1 == n_samples) {
                break;
            }
            let theta = ((ts - t) / h).clamp(0.0, 1.0);
            out_t.push(ts);
            out_y.push(dense.eval(theta));
        }
        if !st.y1.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("integrated state"));
        }
        t = t_new;
        y = st.y1;
        k1 = st.k[6];
        if last {
            break;
        }

        let mut fac = if err == 0.0 {
            10.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 10.0)
        };
        if last_rejected {
            fac = fac.min(1.0);
        }
        last_rejected = false;
        h = (h * fac).min(h_max);
    }

    Ok(Solution {
        t: out_t,
        y: out_y,
        stats,
    })
}

/// Advance `y0` over `t_span` with `n_steps` equal Dormand–Prince steps.
///
/// Used to measure the convergence order; no error control.
pub fn integrate_fixed<const N: usize, F>(
    mut f: F,
    t_span: (f64, f64),
    y0: [f64; N],
    n_steps: usize,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be positive".into()));
    }
    let h = (t_span.1 - t_span.0) / n_steps as f64;
    let mut y = y0;
    let mut k1 = f(t_span.0, &y);
    for i in 0..n_steps {
        let t = t_span.0 + i as f64 * h;
        let st = dp_step(&mut f, t, &y, &k1, h);
        y = st.y1;
        k1 = st.k[6];
    }
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("integrated state"));
    }
    Ok(y)
}
