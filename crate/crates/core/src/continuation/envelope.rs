//! Stable-cycle envelope by direct simulation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FreeParam;
use crate::equilibria::{find_equilibria_default, Stability};
use crate::error::{Error, Result};
use crate::model::{field_original, OriginalParams, State2};
use crate::ode::{integrate, OdeSettings};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSettings {
    pub horizon: f64,
    /// Leading fraction of the run discarded as transient.
    pub transient_fraction: f64,
    /// Offset added to `x` of the starting equilibrium.
    pub offset: f64,
    pub sample_dt: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Post-transient `x` range below which the orbit counts as converged.
    pub min_width: f64,
    /// The orbit also counts as converged when the range over the second half
    /// of the kept window is below this fraction of the first half's.
    pub decay_ratio: f64,
}

impl Default for EnvelopeSettings {
    fn default() -> Self {
        EnvelopeSettings {
            horizon: 3000.0,
            transient_fraction: 0.6,
            offset: 1e-3,
            sample_dt: 0.05,
            rtol: 1e-9,
            atol: 1e-12,
            min_width: 1e-6,
            decay_ratio: 0.5,
        }
    }
}

/// Post-transient extent of `x` on an attracting cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleExtent {
    pub x_min: f64,
    pub x_max: f64,
}

impl CycleExtent {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSample {
    pub param: f64,
    /// `None` when the trajectory settles on an equilibrium.
    pub cycle: Option<CycleExtent>,
}

fn range_of(xs: &[[f64; 2]]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s[0]), hi.max(s[0])))
}

/// Integrate from `start` and report the attracting cycle it reaches, if any.
pub fn cycle_probe(p: &OriginalParams, start: State2, s: &EnvelopeSettings) -> Result<Option<CycleExtent>> {
    if !(s.transient_fraction >= 0.0 && s.transient_fraction < 1.0) {
        return Err(Error::InvalidParameter {
            name: "transient_fraction",
            value: s.transient_fraction,
            reason: "must lie in [0, 1)",
        });
    }
    let ode = OdeSettings {
        rtol: s.rtol,
        atol: s.atol,
        sample_dt: s.sample_dt,
        ..OdeSettings::default()
    };
    let sol = integrate(
        |_, u: &[f64; 2]| field_original(u[0], u[1], p),
        (0.0, s.horizon),
        [start.x, start.y],
        &ode,
    )?;
    let skip = (sol.y.len() as f64 * s.transient_fraction) as usize;
    let kept = &sol.y[skip..];
    if kept.len() < 4 {
        return Err(Error::SeriesTooShort {
            len: kept.len(),
            required: 4,
        });
    }
    let (lo, hi) = range_of(kept);
    let half = kept.len() / 2;
    let (lo1, hi1) = range_of(&kept[..half]);
    let (lo2, hi2) = range_of(&kept[half..]);
    let late = hi2 - lo2;
    if hi - lo < s.min_width || late < s.min_width || late < s.decay_ratio * (hi1 - lo1) {
        return Ok(None);
    }
    Ok(Some(CycleExtent { x_min: lo, x_max: hi }))
}

/// Starting point for an envelope run: the first equilibrium that is not a
/// saddle and not stable, else the first non-saddle, else the first
/// equilibrium; shifted by `offset` in `x`.
pub fn pick_envelope_start(p: &OriginalParams, offset: f64) -> Result<State2> {
    let scan = find_equilibria_default(p)?;
    let eq = &scan.equilibria;
    let pick = eq
        .iter()
        .find(|e| !e.stability.is_stable() && e.stability != Stability::Saddle)
        .or_else(|| eq.iter().find(|e| e.stability != Stability::Saddle))
        .or_else(|| eq.first())
        .ok_or_else(|| Error::NoRoot("no equilibrium found in the default bracket".into()))?;
    Ok(State2 {
        x: pick.state.x + offset,
        y: pick.state.y,
    })
}

/// Cycle extent at `samples` evenly spaced values of `free` over `range`.
pub fn cycle_envelope(
    p: &OriginalParams,
    free: FreeParam,
    range: (f64, f64),
    samples: usize,
    s: &EnvelopeSettings,
) -> Result<Vec<EnvelopeSample>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let (a, b) = range;
    let values: Vec<f64> = if samples == 1 {
        vec![a]
    } else {
        (0..samples)
            .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
            .collect()
    };
    values
        .par_iter()
        .map(|&v| {
            let q = free.apply(p, v)?;
            let start = pick_envelope_start(&q, s.offset)?;
            Ok(EnvelopeSample {
                param: v,
                cycle: cycle_probe(&q, start, s)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_equilibrium_has_no_cycle() {
        let p = OriginalParams::with_defaults(0.2, 0.0).unwrap();
        let start = pick_envelope_start(&p, 1e-3).unwrap();
        assert_eq!(cycle_probe(&p, start, &EnvelopeSettings::default()).unwrap(), None);
    }
}
