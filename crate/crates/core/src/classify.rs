//! Spike trains, burst structure and firing-regime labels.
//!
//! Peaks are found by a zig-zag scan: an extremum is confirmed once the
//! signal reverses by `reversal · range`. A peak reaching
//! `min + level · range` is a spike; lower peaks are subthreshold
//! oscillations. All thresholds are relative to the series range, so labels
//! are unchanged by affine rescaling of `x` and by shifts in time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::TimeSeries;

/// Fewest samples accepted by [`detect_spikes`].
pub const MIN_SAMPLES: usize = 10;
/// Fewest forcing periods accepted by [`classify_activity`].
pub const MIN_PERIODS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifySettings {
    /// Spike level as a fraction of the range above the minimum.
    pub level: f64,
    /// Reversal that confirms an extremum, as a fraction of the range.
    pub reversal: f64,
    /// Below this range the series has no spikes at all.
    pub min_spike_range: f64,
    /// Below this range a spike-free series is at rest.
    pub rest_range: f64,
    /// An interval longer than this multiple of the shortest one ends a burst.
    pub burst_factor: f64,
    /// Largest interval coefficient of variation for regular spiking.
    pub regular_cv: f64,
    /// Stroboscopic repeat tolerance, relative to each component's range.
    pub strobe_tol: f64,
    pub max_strobe_period: usize,
    /// Share of gaps that must hold a subthreshold peak for mixed-mode.
    pub mixed_gap_share: f64,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        ClassifySettings {
            level: 0.8,
            reversal: 0.005,
            min_spike_range: 0.2,
            rest_range: 0.05,
            burst_factor: 4.0,
            regular_cv: 0.05,
            strobe_tol: 1e-3,
            max_strobe_period: 8,
            mixed_gap_share: 0.5,
        }
    }
}

/// Peaks of a series split into spikes and subthreshold peaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeTrain {
    pub spike_times: Vec<f64>,
    pub spike_heights: Vec<f64>,
    pub subthreshold_times: Vec<f64>,
    /// Spike level `min + level · range`.
    pub threshold: f64,
    /// Minimum reversal used to confirm extrema.
    pub reversal: f64,
    pub range: (f64, f64),
}

impl SpikeTrain {
    pub fn len(&self) -> usize {
        self.spike_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spike_times.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.range.1 - self.range.0
    }

    /// Subthreshold peaks strictly between two times.
    pub fn subthreshold_between(&self, a: f64, b: f64) -> usize {
        self.subthreshold_times.iter().filter(|&&t| t > a && t < b).count()
    }
}

/// Indices of confirmed local maxima under a minimum reversal `delta`.
fn zigzag_peaks(x: &[f64], delta: f64) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut seeking_max = false;
    let mut lo = 0;
    let mut hi = 0;
    for i in 1..x.len() {
        if seeking_max {
            if x[i] > x[hi] {
                hi = i;
            } else if x[hi] - x[i] >= delta {
                peaks.push(hi);
                seeking_max = false;
                lo = i;
            }
        } else if x[i] < x[lo] {
            lo = i;
        } else if x[i] - x[lo] >= delta {
            seeking_max = true;
            hi = i;
        }
    }
    peaks
}

pub fn detect_spikes(ts: &TimeSeries) -> Result<SpikeTrain> {
    detect_spikes_with(ts, &ClassifySettings::default())
}

pub fn detect_spikes_with(ts: &TimeSeries, s: &ClassifySettings) -> Result<SpikeTrain> {
    if ts.len() < MIN_SAMPLES {
        return Err(Error::SeriesTooShort {
            len: ts.len(),
            required: MIN_SAMPLES,
        });
    }
    let (mn, mx) = ts
        .x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let r = mx - mn;
    let threshold = mn + s.level * r;
    let delta = s.reversal * r;
    let mut train = SpikeTrain {
        spike_times: Vec::new(),
        spike_heights: Vec::new(),
        subthreshold_times: Vec::new(),
        threshold,
        reversal: delta,
        range: (mn, mx),
    };
    if r < s.min_spike_range {
        return Ok(train);
    }
    for i in zigzag_peaks(&ts.x, delta) {
        if ts.x[i] >= threshold {
            train.spike_times.push(ts.t[i]);
            train.spike_heights.push(ts.x[i]);
        } else {
            train.subthreshold_times.push(ts.t[i]);
        }
    }
    Ok(train)
}

pub fn interspike_intervals(st: &SpikeTrain) -> Result<Vec<f64>> {
    if st.len() < 2 {
        return Err(Error::TooFewSpikes(st.len()));
    }
    Ok(st.spike_times.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Groups of consecutive spike indices; an interval longer than
/// `factor ×` the shortest one starts a new group.
pub fn partition_bursts(st: &SpikeTrain, factor: f64) -> Result<Vec<Vec<usize>>> {
    let isi = interspike_intervals(st)?;
    let min = isi.iter().copied().fold(f64::INFINITY, f64::min);
    let mut groups = vec![vec![0]];
    for (i, d) in isi.iter().enumerate() {
        if *d > factor * min {
            groups.push(Vec::new());
        }
        groups.last_mut().expect("nonempty").push(i + 1);
    }
    Ok(groups)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsiStats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub cv: f64,
    pub min: f64,
    pub max: f64,
}

impl IsiStats {
    pub fn of(isi: &[f64]) -> Option<IsiStats> {
        if isi.is_empty() {
            return None;
        }
        let n = isi.len() as f64;
        let mean = isi.iter().sum::<f64>() / n;
        let var = isi.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        Some(IsiStats {
            count: isi.len(),
            mean,
            std,
            cv: std / mean,
            min: isi.iter().copied().fold(f64::INFINITY, f64::min),
            max: isi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Rest,
    SubthresholdOscillation,
    RegularSpiking,
    Bursting,
    MixedMode,
    Irregular,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::Rest => "rest",
            RegimeKind::SubthresholdOscillation => "subthreshold_oscillation",
            RegimeKind::RegularSpiking => "regular_spiking",
            RegimeKind::Bursting => "bursting",
            RegimeKind::MixedMode => "mixed_mode",
            RegimeKind::Irregular => "irregular",
        }
    }
}

/// Firing-regime label with the diagnostics behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub kind: RegimeKind,
    /// Spikes per burst, for `bursting`.
    pub n_per_burst: Option<usize>,
    pub spike_count: usize,
    pub isi_stats: Option<IsiStats>,
    /// Smallest number of forcing periods after which the stroboscopic
    /// samples repeat, if any up to the configured maximum.
    pub strobe_period: Option<usize>,
    /// Sizes of the complete bursts (first and last dropped when more than two).
    pub burst_sizes: Vec<usize>,
    pub subthreshold_count: usize,
    pub range: f64,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n_per_burst {
            Some(n) => write!(f, "{}({n})", self.kind.as_str()),
            None => f.write_str(self.kind.as_str()),
        }
    }
}

fn interpolate(t: &[f64], v: &[f64], at: f64) -> f64 {
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let pos = ((at - t[0]) / dt).clamp(0.0, (t.len() - 1) as f64);
    let i = (pos.floor() as usize).min(t.len() - 2);
    let w = pos - i as f64;
    v[i] * (1.0 - w) + v[i + 1] * w
}

/// Smallest `p ≤ max_p` with the stroboscopic samples `S(t₀ + kT)` equal to
/// `S(t₀ + (k + p)T)` for every available `k`, within `tol` of each
/// component's range.
pub fn stroboscopic_period(ts: &TimeSeries, period: f64, tol: f64, max_p: usize) -> Option<usize> {
    if ts.len() < 2 || !(period > 0.0) {
        return None;
    }
    let mut cols: Vec<&[f64]> = vec![&ts.x, &ts.y];
    if let Some(phi) = &ts.phi {
        cols.push(phi);
    }
    let t0 = ts.t[0];
    let n = ((ts.duration() / period) * (1.0 + 1e-12)).floor() as usize + 1;
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|k| cols.iter().map(|c| interpolate(&ts.t, c, t0 + k as f64 * period)).collect())
        .collect();
    let scales: Vec<f64> = cols
        .iter()
        .map(|c| {
            let (a, b) = c
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            (b - a).max(f64::MIN_POSITIVE)
        })
        .collect();
    (1..=max_p).find(|&p| {
        p < n
            && (0..n - p).all(|k| {
                samples[k]
                    .iter()
                    .zip(&samples[k + p])
                    .zip(&scales)
                    .all(|((a, b), s)| (a - b).abs() <= tol * s)
            })
    })
}

pub fn classify_activity(ts: &TimeSeries, forcing_period: f64) -> Result<RegimeLabel> {
    classify_activity_with(ts, forcing_period, &ClassifySettings::default())
}

/// Label a post-transient series of a system forced with period `forcing_period`.
///
/// Decision order: no spikes gives rest or subthreshold oscillation by range;
/// one burst of single spikes is mixed-mode when subthreshold peaks sit in
/// enough of its gaps, regular spiking when intervals are uniform, irregular
/// otherwise; several bursts of constant size `n ≥ 2` with a repeating
/// stroboscopic map are `bursting(n)`, else mixed-mode when subthreshold
/// peaks separate the bursts, else irregular.
pub fn classify_activity_with(ts: &TimeSeries, forcing_period: f64, s: &ClassifySettings) -> Result<RegimeLabel> {
    if !(forcing_period > 0.0 && forcing_period.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "forcing_period",
            value: forcing_period,
            reason: "must be positive",
        });
    }
    let periods = ts.duration() / forcing_period;
    if periods < MIN_PERIODS {
        return Err(Error::HorizonTooShort {
            periods,
            required: MIN_PERIODS,
        });
    }
    let train = detect_spikes_with(ts, s)?;
    let strobe_period = stroboscopic_period(ts, forcing_period, s.strobe_tol, s.max_strobe_period);
    let mut label = RegimeLabel {
        kind: RegimeKind::Irregular,
        n_per_burst: None,
        spike_count: train.len(),
        isi_stats: None,
        strobe_period,
        burst_sizes: Vec::new(),
        subthreshold_count: train.subthreshold_times.len(),
        range: train.span(),
    };

    if train.is_empty() {
        label.kind = if train.span() < s.rest_range {
            RegimeKind::Rest
        } else {
            RegimeKind::SubthresholdOscillation
        };
        return Ok(label);
    }
    if train.len() < 2 {
        return Ok(label);
    }

    let isi = interspike_intervals(&train)?;
    label.isi_stats = IsiStats::of(&isi);
    let bursts = partition_bursts(&train, s.burst_factor)?;
    let gaps_with_sub = |pairs: &mut dyn Iterator<Item = (f64, f64)>| {
        let (mut n, mut with) = (0usize, 0usize);
        for (a, b) in pairs {
            n += 1;
            if train.subthreshold_between(a, b) > 0 {
                with += 1;
            }
        }
        n > 0 && with as f64 >= s.mixed_gap_share * n as f64
    };

    if bursts.len() == 1 {
        label.burst_sizes = vec![train.len()];
        let times = &train.spike_times;
        if gaps_with_sub(&mut times.windows(2).map(|w| (w[0], w[1]))) {
            label.kind = RegimeKind::MixedMode;
        } else if label.isi_stats.is_some_and(|st| st.cv < s.regular_cv) {
            label.kind = RegimeKind::RegularSpiking;
        }
        return Ok(label);
    }

    let complete: &[Vec<usize>] = if bursts.len() > 2 {
        &bursts[1..bursts.len() - 1]
    } else {
        &bursts
    };
    label.burst_sizes = complete.iter().map(Vec::len).collect();
    let n = label.burst_sizes[0];
    let constant = label.burst_sizes.iter().all(|&m| m == n);
    if constant && n >= 2 && strobe_period.is_some() {
        label.kind = RegimeKind::Bursting;
        label.n_per_burst = Some(n);
        return Ok(label);
    }
    let t = &train.spike_times;
    if gaps_with_sub(&mut bursts.windows(2).map(|w| (t[*w[0].last().unwrap()], t[w[1][0]]))) {
        label.kind = RegimeKind::MixedMode;
    }
    Ok(label)
}
