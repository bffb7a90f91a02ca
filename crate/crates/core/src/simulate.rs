//! Time integration of both models and the named forcing scenarios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{field_improved, field_original, ImprovedParams, OriginalParams, State2, State3};
use crate::ode::{integrate, OdeSettings, StepStats};

/// Tolerances and output spacing of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub rtol: f64,
    pub atol: f64,
    pub sample_dt: f64,
}

impl SolverSettings {
    pub fn new(rtol: f64, atol: f64, sample_dt: f64) -> Result<Self> {
        let s = SolverSettings { rtol, atol, sample_dt };
        s.ode().validate()?;
        Ok(s)
    }

    fn ode(&self) -> OdeSettings {
        OdeSettings {
            rtol: self.rtol,
            atol: self.atol,
            sample_dt: self.sample_dt,
            ..OdeSettings::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum ModelParams {
    Original(OriginalParams),
    Improved(ImprovedParams),
}

/// Provenance of a simulated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub params: ModelParams,
    pub initial: Vec<f64>,
    pub t_span: (f64, f64),
    pub solver: SolverSettings,
    pub stats: StepStats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scenario: Option<String>,
}

/// Uniformly sampled trajectory stored by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Present for the flux-coupled model.
    pub phi: Option<Vec<f64>>,
    pub meta: Option<SeriesMeta>,
}

impl TimeSeries {
    /// Series from columns, checking lengths, finiteness and uniform spacing.
    pub fn from_columns(t: Vec<f64>, x: Vec<f64>, y: Vec<f64>, phi: Option<Vec<f64>>) -> Result<Self> {
        let ts = TimeSeries {
            t,
            x,
            y,
            phi,
            meta: None,
        };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.t.len();
        if self.x.len() != n || self.y.len() != n || self.phi.as_ref().is_some_and(|p| p.len() != n) {
            return Err(Error::InvalidArgument("time series columns differ in length".into()));
        }
        let finite = |v: &[f64]| v.iter().all(|a| a.is_finite());
        if !finite(&self.t) || !finite(&self.x) || !finite(&self.y) || !self.phi.as_deref().map_or(true, finite) {
            return Err(Error::NonFinite("time series sample"));
        }
        if n >= 2 {
            let dt = self.sample_dt();
            if !(dt > 0.0) {
                return Err(Error::InvalidArgument("sample times must increase".into()));
            }
            let tol = 1e-6 * dt + 1e-9 * self.t[n - 1].abs();
            for (k, w) in self.t.windows(2).enumerate() {
                let expected = self.t[0] + (k + 1) as f64 * dt;
                if !(w[1] > w[0]) || (w[1] - expected).abs() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "sample times are not uniformly spaced near t = {}",
                        w[1]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Mean spacing of the sample times.
    pub fn sample_dt(&self) -> f64 {
        let n = self.t.len();
        if n < 2 {
            return 0.0;
        }
        (self.t[n - 1] - self.t[0]) / (n - 1) as f64
    }

    pub fn duration(&self) -> f64 {
        match (self.t.first(), self.t.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// The series without its leading `fraction` of samples.
    pub fn tail(&self, fraction: f64) -> TimeSeries {
        let skip = ((self.len() as f64) * fraction.clamp(0.0, 1.0)).floor() as usize;
        TimeSeries {
            t: self.t[skip..].to_vec(),
            x: self.x[skip..].to_vec(),
            y: self.y[skip..].to_vec(),
            phi: self.phi.as_ref().map(|p| p[skip..].to_vec()),
            meta: self.meta.clone(),
        }
    }

    /// Largest `|x|`, `|y|` and `|φ|` over the series.
    pub fn max_abs(&self) -> [f64; 3] {
        let m = |v: &[f64]| v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        [m(&self.x), m(&self.y), self.phi.as_deref().map_or(0.0, m)]
    }

    /// State vector at sample `i` (`φ` omitted for the two-variable model).
    pub fn state(&self, i: usize) -> Vec<f64> {
        let mut s = vec![self.x[i], self.y[i]];
        if let Some(p) = &self.phi {
            s.push(p[i]);
        }
        s
    }
}

/// Trajectory of the two-variable model.
pub fn simulate_original(p: &OriginalParams, s0: State2, t_span: (f64, f64), solver: &SolverSettings) -> Result<TimeSeries> {
    let sol = integrate(
        |_, u: &[f64; 2]| field_original(u[0], u[1], p),
        t_span,
        [s0.x, s0.y],
        &solver.ode(),
    )?;
    Ok(TimeSeries {
        x: sol.y.iter().map(|u| u[0]).collect(),
        y: sol.y.iter().map(|u| u[1]).collect(),
        t: sol.t,
        phi: None,
        meta: Some(SeriesMeta {
            params: ModelParams::Original(*p),
            initial: vec![s0.x, s0.y],
            t_span,
            solver: *solver,
            stats: sol.stats,
            scenario: None,
        }),
    })
}

/// Trajectory of the forced, flux-coupled model.
pub fn simulate_improved(p: &ImprovedParams, s0: State3, t_span: (f64, f64), solver: &SolverSettings) -> Result<TimeSeries> {
    let sol = integrate(|t, u: &[f64; 3]| field_improved(t, u, p), t_span, s0.to_array(), &solver.ode())?;
    Ok(TimeSeries {
        x: sol.y.iter().map(|u| u[0]).collect(),
        y: sol.y.iter().map(|u| u[1]).collect(),
        phi: Some(sol.y.iter().map(|u| u[2]).collect()),
        t: sol.t,
        meta: Some(SeriesMeta {
            params: ModelParams::Improved(*p),
            initial: s0.to_array().to_vec(),
            t_span,
            solver: *solver,
            stats: sol.stats,
            scenario: None,
        }),
    })
}

/// Default starting state for the forced scenarios.
pub const SCENARIO_INITIAL: [f64; 3] = [0.01, 0.01, 0.01];
pub const SCENARIO_PERIODS: f64 = 20.0;
pub const SCENARIO_TRANSIENT: f64 = 0.5;
/// Output samples per forcing period.
pub const SAMPLES_PER_PERIOD: f64 = 2000.0;
/// Shortest admissible horizon, in forcing periods.
pub const MIN_PERIODS: f64 = 10.0;

/// A named parameter set of the forced model with its run protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub params: ImprovedParams,
    pub initial: State3,
    /// Horizon in forcing periods.
    pub periods: f64,
    pub transient_fraction: f64,
    /// Behaviour reported for this parameter set, in classifier vocabulary.
    pub reported: String,
}

impl Scenario {
    pub fn new(name: &str, description: &str, params: ImprovedParams, reported: &str) -> Self {
        Scenario {
            name: name.into(),
            description: description.into(),
            params,
            initial: State3 {
                x: SCENARIO_INITIAL[0],
                y: SCENARIO_INITIAL[1],
                phi: SCENARIO_INITIAL[2],
            },
            periods: SCENARIO_PERIODS,
            transient_fraction: SCENARIO_TRANSIENT,
            reported: reported.into(),
        }
    }

    pub fn horizon(&self) -> f64 {
        self.periods * self.params.forcing_period()
    }

    pub fn default_solver(&self) -> SolverSettings {
        SolverSettings {
            rtol: 1e-9,
            atol: 1e-12,
            sample_dt: self.params.forcing_period() / SAMPLES_PER_PERIOD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.periods >= MIN_PERIODS) {
            return Err(Error::HorizonTooShort {
                periods: self.periods,
                required: MIN_PERIODS,
            });
        }
        if !(self.transient_fraction >= 0.0 && self.transient_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "transient_fraction",
                value: self.transient_fraction,
                reason: "must lie in [0, 1)",
            });
        }
        if !self.initial.is_finite() {
            return Err(Error::NonFinite("scenario initial state"));
        }
        Ok(())
    }
}

fn defaults(gamma: f64, i0: f64) -> ImprovedParams {
    ImprovedParams::defaults(gamma, i0).expect("scenario parameters are valid")
}

fn panel(a: f64, gamma: f64, omega: f64, k: Option<f64>, i0: f64) -> ImprovedParams {
    let p = defaults(gamma, i0)
        .with_a(a)
        .and_then(|p| p.with_omega(omega))
        .expect("scenario parameters are valid");
    match k {
        Some(k) => p.with_k(k).expect("scenario parameters are valid"),
        None => p,
    }
}

/// The forcing scenarios: an `I₀` sweep at `γ = 0.315` and six panels with
/// several parameters changed at once.
pub fn scenarios() -> Vec<Scenario> {
    vec![
        Scenario::new("fig4a", "gamma=0.315, I0=0.00072", defaults(0.315, 0.00072), "rest"),
        Scenario::new("fig4c", "gamma=0.315, I0=0.0155", defaults(0.315, 0.0155), "regular_spiking"),
        Scenario::new("fig4e", "gamma=0.315, I0=0.016", defaults(0.315, 0.016), "bursting(2)"),
        Scenario::new("fig4g", "gamma=0.315, I0=0.02", defaults(0.315, 0.02), "bursting(4)"),
        Scenario::new("fig4i", "gamma=0.315, I0=0.04", defaults(0.315, 0.04), "bursting(13)"),
        Scenario::new(
            "fig5a",
            "A=0.005, gamma=0.23, omega=0.03, I0=0.04 (k at its default 0.003)",
            panel(0.005, 0.23, 0.03, None, 0.04),
            "mixed_mode",
        ),
        Scenario::new(
            "fig5b",
            "A=0.005, gamma=0.035, omega=0.0121, k=0.0231, I0=0.187",
            panel(0.005, 0.035, 0.0121, Some(0.0231), 0.187),
            "mixed_mode",
        ),
        Scenario::new(
            "fig5c",
            "A=0.002, gamma=0.1576, omega=0.02, k=0.018, I0=0.17",
            panel(0.002, 0.1576, 0.02, Some(0.018), 0.17),
            "bursting(7)",
        ),
        Scenario::new(
            "fig5d",
            "A=0.002, gamma=0.1576, omega=0.001, k=0.919, I0=0.17",
            panel(0.002, 0.1576, 0.001, Some(0.919), 0.17),
            "regular_spiking",
        ),
        Scenario::new(
            "fig5e",
            "A=0.0187, gamma=0.231, omega=0.015, k=0.05, I0=0.434",
            panel(0.0187, 0.231, 0.015, Some(0.05), 0.434),
            "bursting",
        ),
        Scenario::new(
            "fig5f",
            "A=0.0018, gamma=0.231, omega=0.015, k=0.08, I0=0.201",
            panel(0.0018, 0.231, 0.015, Some(0.08), 0.201),
            "bursting",
        ),
    ]
}

pub fn scenario(name: &str) -> Result<Scenario> {
    scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario `{name}`")))
}

/// Full run of a scenario and its post-transient part.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub full: TimeSeries,
    pub steady: TimeSeries,
}

pub fn run_scenario(sc: &Scenario) -> Result<ScenarioRun> {
    run_scenario_with(sc, &sc.default_solver())
}

pub fn run_scenario_with(sc: &Scenario, solver: &SolverSettings) -> Result<ScenarioRun> {
    sc.validate()?;
    let mut full = simulate_improved(&sc.params, sc.initial, (0.0, sc.horizon()), solver)?;
    if let Some(m) = full.meta.as_mut() {
        m.scenario = Some(sc.name.clone());
    }
    let steady = full.tail(sc.transient_fraction);
    Ok(ScenarioRun {
        scenario: sc.clone(),
        full,
        steady,
    })
}
