//! Subcommands as functions from arguments to file contents.
//!
//! Nothing here writes to the output directory; [`crate::run`] does that, so
//! the same arguments always produce the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use dml_core::classify::{classify_activity, RegimeLabel};
use dml_core::codim2::{
    default_grid, find_all_generalized_hopf, find_cusp, fold_curve, hopf_curve, recover_gamma, region_grid,
    track_cusp, Target, TargetKind,
};
use dml_core::continuation::{
    continue_equilibrium, BifurcationPoint, ContinuationSettings, EnvelopeSettings, FreeParam,
};
use dml_core::equilibria::{find_equilibria, x_nullcline, y_nullcline};
use dml_core::io::{fmt_num, series_from_csv, series_to_csv, table_csv};
use dml_core::model::{ImprovedParams, OriginalParams, State2, State3};
use dml_core::simulate::{
    run_scenario, scenario, scenarios, simulate_improved, simulate_original, Scenario, SeriesMeta,
    SolverSettings, TimeSeries, SAMPLES_PER_PERIOD, SCENARIO_TRANSIENT,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::figures;
use crate::table::Table;

/// End time of the unforced model when none is given.
pub const ORIGINAL_T_END: f64 = 1000.0;
pub const ORIGINAL_DT: f64 = 0.1;

/// Files to write plus what goes into the manifest.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub parameters: Value,
    pub solver: Option<Value>,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

/// Contents of `series.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(flatten)]
    pub meta: SeriesMeta,
    pub forcing_period: Option<f64>,
    pub transient_fraction: f64,
}

/// Contents of `classification.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: String,
    #[serde(flatten)]
    pub regime: RegimeLabel,
    pub forcing_period: f64,
    pub transient_fraction: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported: Option<String>,
}

pub fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Nullclines(_) => "nullclines",
        Command::Equilibria(_) => "equilibria",
        Command::Continue(_) => "continue",
        Command::Codim2(_) => "codim2",
        Command::Cusp(_) => "cusp",
        Command::Gh(_) => "gh",
        Command::Regions(_) => "regions",
        Command::FitGamma(_) => "fit-gamma",
        Command::Simulate(_) => "simulate",
        Command::Classify(_) => "classify",
        Command::Sweep(_) => "sweep",
        Command::Scenario { .. } => "scenario",
        Command::Rerun { .. } => "rerun",
        Command::Render(_) => "render",
    }
}

/// Whether a run leaves a manifest behind.
pub fn writes_manifest(c: &Command) -> bool {
    !matches!(c, Command::Scenario { .. } | Command::Rerun { .. })
}

pub fn execute(c: &Command) -> CliResult<Outcome> {
    match c {
        Command::Nullclines(a) => nullclines(a),
        Command::Equilibria(a) => equilibria(a),
        Command::Continue(a) => continuation(a),
        Command::Codim2(a) => codim2(a),
        Command::Cusp(a) => cusp(a),
        Command::Gh(a) => gh(a),
        Command::Regions(a) => regions(a),
        Command::FitGamma(a) => fit_gamma(a),
        Command::Simulate(a) => simulate(a),
        Command::Classify(a) => classify(a),
        Command::Sweep(a) => sweep(a),
        Command::Scenario {
            command: ScenarioCommand::List,
        } => Ok(scenario_list()),
        Command::Render(a) => render(a),
        Command::Rerun { .. } => Err(CliError::Usage("rerun is handled by the caller".into())),
    }
}

fn model(m: &ModelArgs) -> CliResult<OriginalParams> {
    Ok(OriginalParams::new(m.rate.a, m.rate.alpha, m.gamma, m.current)?)
}

/// Parameters for routines that use only `A` and `α`.
fn rate_only(r: &RateArgs) -> CliResult<OriginalParams> {
    Ok(OriginalParams::new(r.a, r.alpha, 1.0, 0.0)?)
}

fn rate_json(r: &RateArgs) -> Value {
    json!({ "A": r.a, "alpha": r.alpha })
}

fn pretty<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn nullclines(a: &NullclineArgs) -> CliResult<Outcome> {
    let p = model(&a.model)?;
    if a.points < 2 || !(a.x_from < a.x_to) {
        return Err(CliError::Usage(format!(
            "need --points ≥ 2 and --x-from < --x-to (got {}, {}, {})",
            a.points, a.x_from, a.x_to
        )));
    }
    let rows: Vec<[f64; 3]> = (0..a.points)
        .map(|i| {
            let x = a.x_from + (a.x_to - a.x_from) * i as f64 / (a.points - 1) as f64;
            [x, x_nullcline(x, &p), y_nullcline(x, &p)]
        })
        .collect();
    let csv = table_csv(&["x", "y_xnull", "y_ynull"], &rows);
    let mut out = Outcome {
        parameters: json!({ "params": p, "x_from": a.x_from, "x_to": a.x_to, "points": a.points }),
        ..Outcome::default()
    };
    if a.svg {
        let svg = figures::nullclines(&Table::parse(&csv, "nullclines.csv")?)?.render();
        out.file("nullclines.svg", svg);
    }
    out.file("nullclines.csv", csv);
    Ok(out)
}

fn equilibria(a: &EquilibriaArgs) -> CliResult<Outcome> {
    let p = model(&a.model)?;
    let scan = find_equilibria(&p, a.x_lo, a.x_hi, a.grid_n)?;
    let mut out = Outcome {
        parameters: json!({ "params": p, "x_lo": a.x_lo, "x_hi": a.x_hi, "grid_n": a.grid_n }),
        ..Outcome::default()
    };
    for f in &scan.failures {
        let _ = writeln!(
            out.stderr,
            "warning: root in [{}, {}] not refined (last x = {}, residual {:e})",
            f.x_lo, f.x_hi, f.last_x, f.last_residual
        );
    }
    for e in &scan.equilibria {
        let _ = writeln!(out.stdout, "x = {:.10}  y = {:.10}  {}", e.state.x, e.state.y, e.stability.as_str());
    }
    out.file("equilibria.json", pretty(&scan.equilibria)?);
    Ok(out)
}

fn continuation(a: &ContinueArgs) -> CliResult<Outcome> {
    let free = match a.free {
        Free::Current => FreeParam::Current,
        Free::Gamma => FreeParam::Gamma,
    };
    let (gamma, current) = match free {
        FreeParam::Current => (
            a.gamma
                .ok_or_else(|| CliError::Usage("--gamma is required when continuing in I".into()))?,
            a.from,
        ),
        FreeParam::Gamma => (a.from, a.current.unwrap_or(0.0)),
    };
    if a.from == a.to {
        return Err(CliError::Usage(format!("--from and --to are both {}", a.from)));
    }
    let p = OriginalParams::new(a.rate.a, a.rate.alpha, gamma, current)?;
    let scan = find_equilibria(
        &p,
        dml_core::equilibria::DEFAULT_X_LO,
        dml_core::equilibria::DEFAULT_X_HI,
        dml_core::equilibria::DEFAULT_GRID_N,
    )?;
    let start = scan.equilibria.get(a.start).ok_or_else(|| {
        CliError::Usage(format!(
            "--start {} but only {} equilibria exist at the start value",
            a.start,
            scan.count()
        ))
    })?;
    let settings = ContinuationSettings {
        h0: a.h0,
        h_min: a.hmin,
        h_max: a.hmax,
        increasing: a.to > a.from,
        ..ContinuationSettings::default()
    };
    let range = (a.from.min(a.to), a.from.max(a.to));
    let branch = continue_equilibrium(start, &p, free, range, &settings)?;

    let rows: Vec<[f64; 5]> = branch
        .points
        .iter()
        .map(|b| [b.param, b.state.x, b.state.y, b.trace, b.det])
        .collect();
    let mut csv = String::new();
    let _ = writeln!(csv, "{},x,y,trace,det,stability", free.as_str());
    for (r, b) in rows.iter().zip(&branch.points) {
        let cells: Vec<String> = r.iter().map(|v| fmt_num(*v)).collect();
        let _ = writeln!(csv, "{},{}", cells.join(","), b.stability.as_str());
    }

    let mut out = Outcome {
        parameters: json!({
            "params": p,
            "free": free.as_str(),
            "from": a.from,
            "to": a.to,
            "start": a.start,
        }),
        solver: Some(serde_json::to_value(settings)?),
        ..Outcome::default()
    };
    for b in &branch.bifurcations {
        let _ = write!(
            out.stdout,
            "{:<18} I = {:.10}  gamma = {:.10}  x = {:.10}",
            b.kind.as_str(),
            b.current,
            b.gamma,
            b.state.x
        );
        if let Some(l1) = b.l1 {
            let _ = write!(out.stdout, "  l1 = {l1:.6e}");
        }
        out.stdout.push('\n');
    }
    for w in &branch.warnings {
        let _ = writeln!(out.stderr, "warning: {w}");
    }
    let summary = json!({
        "free": free.as_str(),
        "range": [range.0, range.1],
        "points": branch.points.len(),
        "termination": branch.termination,
        "complete": branch.is_complete(),
        "warnings": branch.warnings,
        "segments": branch.segments,
    });
    if a.svg {
        let svg = figures::branch(&Table::parse(&csv, "branch.csv")?, &branch.bifurcations)?.render();
        out.file("branch.svg", svg);
    }
    out.file("branch.csv", csv);
    out.file("bifurcations.json", pretty(&branch.bifurcations)?);
    out.file("branch.json", pretty(&summary)?);
    Ok(out)
}

fn fold_csv(p: &OriginalParams, xs: &[f64]) -> CliResult<String> {
    let rows: Vec<[f64; 3]> = fold_curve(p, xs)?
        .iter()
        .map(|q| [q.x_eq, q.current, q.gamma])
        .collect();
    Ok(table_csv(&["x", "I", "gamma"], &rows))
}

fn hopf_csv(p: &OriginalParams, xs: &[f64]) -> CliResult<String> {
    let mut s = String::from("x,I,gamma,genuine\n");
    for h in hopf_curve(p, xs)? {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_num(h.point.x_eq),
            fmt_num(h.point.current),
            fmt_num(h.point.gamma),
            u8::from(h.genuine)
        );
    }
    Ok(s)
}

fn envelope_settings(g: &GridArgs) -> EnvelopeSettings {
    EnvelopeSettings {
        horizon: g.horizon,
        ..EnvelopeSettings::default()
    }
}

fn regions_csv(p: &OriginalParams, g: &GridArgs) -> CliResult<String> {
    let reports = region_grid(
        p,
        (g.i_from, g.i_to),
        (g.gamma_from, g.gamma_to),
        g.ni,
        g.ngamma,
        &envelope_settings(g),
    )?;
    let mut s = String::from("I,gamma,region,equilibria,stable,cycle\n");
    for r in &reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_num(r.current),
            fmt_num(r.gamma),
            r.label.as_str(),
            r.equilibria.len(),
            r.stable_count,
            u8::from(r.cycle_present)
        );
    }
    Ok(s)
}

fn grid_json(g: &GridArgs) -> Value {
    json!({
        "I_range": [g.i_from, g.i_to],
        "gamma_range": [g.gamma_from, g.gamma_to],
        "ni": g.ni,
        "ngamma": g.ngamma,
        "horizon": g.horizon,
    })
}

fn codim2(a: &Codim2Args) -> CliResult<Outcome> {
    if a.n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2 (got {})", a.n)));
    }
    let p = rate_only(&a.rate)?;
    let xs = default_grid(a.n);
    let fold = fold_csv(&p, &xs)?;
    let hopf = hopf_csv(&p, &xs)?;
    let cp = find_cusp(&p)?;
    let ghs = find_all_generalized_hopf(&p)?;
    let mut out = Outcome {
        parameters: json!({
            "rate": rate_json(&a.rate),
            "n": a.n,
            "regions": if a.regions { grid_json(&a.grid) } else { Value::Null },
        }),
        ..Outcome::default()
    };
    let _ = writeln!(out.stdout, "cusp: I = {:.7}  gamma = {:.7}  x = {:.7}", cp.current, cp.gamma, cp.state.x);
    for g in &ghs {
        let _ = writeln!(out.stdout, "generalized Hopf: I = {:.7}  gamma = {:.7}  x = {:.7}", g.current, g.gamma, g.state.x);
    }
    if a.svg {
        let mut points = vec![cp];
        points.extend(ghs.iter().copied());
        let svg = figures::codim2(
            &Table::parse(&fold, "fold_curve.csv")?,
            &Table::parse(&hopf, "hopf_curve.csv")?,
            &points,
        )?
        .render();
        out.file("codim2.svg", svg);
    }
    out.file("fold_curve.csv", fold);
    out.file("hopf_curve.csv", hopf);
    out.file("cusp.json", pretty(&cp)?);
    out.file("gh.json", pretty(&ghs)?);
    if a.regions {
        out.file("regions.csv", regions_csv(&p, &a.grid)?);
        out.solver = Some(serde_json::to_value(envelope_settings(&a.grid))?);
    }
    Ok(out)
}

fn cusp(a: &CuspArgs) -> CliResult<Outcome> {
    let p = rate_only(&a.rate)?;
    let quadratic = find_cusp(&p)?;
    let tracked = track_cusp(&p, a.track_from)?;
    let gap = (quadratic.gamma - tracked.gamma).abs();
    let mut out = Outcome {
        parameters: json!({ "rate": rate_json(&a.rate), "track_from": a.track_from }),
        ..Outcome::default()
    };
    let _ = writeln!(
        out.stdout,
        "cusp: I = {:.7}  gamma = {:.7}  x = {:.7}  (tracked gamma differs by {gap:.2e})",
        quadratic.current, quadratic.gamma, quadratic.state.x
    );
    out.file(
        "cusp.json",
        pretty(&json!({ "quadratic": quadratic, "tracked": tracked, "gamma_gap": gap }))?,
    );
    Ok(out)
}

fn gh(a: &RateArgs) -> CliResult<Outcome> {
    let p = rate_only(a)?;
    let ghs = find_all_generalized_hopf(&p)?;
    let mut out = Outcome {
        parameters: json!({ "rate": rate_json(a) }),
        ..Outcome::default()
    };
    for g in &ghs {
        let _ = writeln!(out.stdout, "generalized Hopf: I = {:.7}  gamma = {:.7}  x = {:.7}", g.current, g.gamma, g.state.x);
    }
    out.file("gh.json", pretty(&ghs)?);
    Ok(out)
}

fn regions(a: &RegionArgs) -> CliResult<Outcome> {
    let p = rate_only(&a.rate)?;
    let mut out = Outcome {
        parameters: json!({ "rate": rate_json(&a.rate), "grid": grid_json(&a.grid) }),
        solver: Some(serde_json::to_value(envelope_settings(&a.grid))?),
        ..Outcome::default()
    };
    out.file("regions.csv", regions_csv(&p, &a.grid)?);
    Ok(out)
}

/// Parse `fold:<I>` or `hopf:<I>`.
pub fn parse_target(s: &str) -> CliResult<Target> {
    let bad = || CliError::Usage(format!("target `{s}` is not of the form fold:<I> or hopf:<I>"));
    let (kind, value) = s.split_once(':').ok_or_else(bad)?;
    let kind = match kind.trim() {
        "fold" | "LP" | "lp" => TargetKind::Fold,
        "hopf" | "HB" | "hb" => TargetKind::Hopf,
        _ => return Err(bad()),
    };
    let current: f64 = value.trim().parse().map_err(|_| bad())?;
    if !current.is_finite() {
        return Err(bad());
    }
    Ok(Target { kind, current })
}

fn fit_gamma(a: &FitArgs) -> CliResult<Outcome> {
    let p = rate_only(&a.rate)?;
    let targets = a.targets.iter().map(|s| parse_target(s)).collect::<CliResult<Vec<_>>>()?;
    let lo = match a.gamma_from {
        Some(g) => g,
        None => find_cusp(&p)?.gamma,
    };
    let hi = a.gamma_to.unwrap_or(1.0 / 3.0);
    let fit = recover_gamma(&p, &targets, (lo, hi), a.scan)?;
    let mut out = Outcome {
        parameters: json!({
            "rate": rate_json(&a.rate),
            "targets": targets,
            "bracket": [lo, hi],
            "scan": a.scan,
        }),
        ..Outcome::default()
    };
    let _ = writeln!(out.stdout, "gamma = {:.6}  score = {:.3e}", fit.gamma, fit.score);
    out.file("fit.json", pretty(&fit)?);
    Ok(out)
}

struct Run {
    series: TimeSeries,
    forcing_period: Option<f64>,
    transient_fraction: f64,
    scenario: Option<Scenario>,
}

fn improved_params(a: &SimulateArgs, gamma: f64) -> CliResult<ImprovedParams> {
    Ok(ImprovedParams::defaults(gamma, a.i0)?
        .with_a(a.rate.a)?
        .with_alpha(a.rate.alpha)?
        .with_omega(a.omega)?
        .with_k(a.k)?
        .with_flux(a.k1, a.k2, a.phi_ext)?
        .with_memductance(a.alpha1, a.beta)?)
}

fn scenario_run(name: &str) -> CliResult<Run> {
    let sc = scenario(name)?;
    let r = run_scenario(&sc)?;
    Ok(Run {
        series: r.full,
        forcing_period: Some(sc.params.forcing_period()),
        transient_fraction: sc.transient_fraction,
        scenario: Some(sc),
    })
}

fn simulate_run(a: &SimulateArgs) -> CliResult<Run> {
    if let Some(name) = &a.scenario {
        return scenario_run(name);
    }
    let gamma = a
        .gamma
        .ok_or_else(|| CliError::Usage("--gamma is required without --scenario".into()))?;
    match a.model {
        ModelKind::Original => {
            let p = OriginalParams::new(a.rate.a, a.rate.alpha, gamma, a.current)?;
            let solver = SolverSettings::new(a.rtol, a.atol, a.dt.unwrap_or(ORIGINAL_DT))?;
            let s0 = State2::new(a.x0, a.y0)?;
            let series = simulate_original(&p, s0, (0.0, a.t_end.unwrap_or(ORIGINAL_T_END)), &solver)?;
            Ok(Run {
                series,
                forcing_period: None,
                transient_fraction: SCENARIO_TRANSIENT,
                scenario: None,
            })
        }
        ModelKind::Improved => {
            let p = improved_params(a, gamma)?;
            let period = p.forcing_period();
            let solver = SolverSettings::new(a.rtol, a.atol, a.dt.unwrap_or(period / SAMPLES_PER_PERIOD))?;
            let s0 = State3::new(a.x0, a.y0, a.phi0)?;
            let t_end = a.t_end.unwrap_or(dml_core::simulate::SCENARIO_PERIODS * period);
            let series = simulate_improved(&p, s0, (0.0, t_end), &solver)?;
            Ok(Run {
                series,
                forcing_period: Some(period),
                transient_fraction: SCENARIO_TRANSIENT,
                scenario: None,
            })
        }
    }
}

fn simulate(a: &SimulateArgs) -> CliResult<Outcome> {
    let run = simulate_run(a)?;
    let meta = run
        .series
        .meta
        .clone()
        .ok_or_else(|| CliError::Numerical("simulation returned no metadata".into()))?;
    let csv = series_to_csv(&run.series);
    let mut out = Outcome {
        parameters: json!({
            "model": meta.params,
            "initial": meta.initial,
            "t_span": [meta.t_span.0, meta.t_span.1],
            "scenario": a.scenario,
        }),
        solver: Some(serde_json::to_value(meta.solver)?),
        ..Outcome::default()
    };
    let [mx, my, mp] = run.series.max_abs();
    let _ = writeln!(
        out.stdout,
        "{} samples, t in [{}, {}], max |x| = {mx:.4}, max |y| = {my:.4}{}",
        run.series.len(),
        meta.t_span.0,
        meta.t_span.1,
        if run.series.phi.is_some() { format!(", max |phi| = {mp:.4}") } else { String::new() }
    );
    let file = SeriesFile {
        meta,
        forcing_period: run.forcing_period,
        transient_fraction: run.transient_fraction,
    };
    if a.svg {
        let t = Table::parse(&csv, "series.csv")?;
        out.file("series.svg", figures::series(&t)?.render());
        out.file("phase.svg", figures::phase(&t)?.render());
    }
    out.file("series.csv", csv);
    out.file("series.meta.json", pretty(&file)?);
    Ok(out)
}

/// `<dir>/<stem>.meta.json` next to a series CSV, if present.
fn sibling_meta(input: &Path) -> CliResult<Option<SeriesFile>> {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let path = input.with_file_name(format!("{stem}.meta.json"));
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn classify(a: &ClassifyArgs) -> CliResult<Outcome> {
    let (series, period, transient, scenario_name, reported, source) = match (&a.input, &a.scenario) {
        (Some(input), None) => {
            let text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
            let series = series_from_csv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
            let meta = sibling_meta(input)?;
            let period = a
                .period
                .or_else(|| meta.as_ref().and_then(|m| m.forcing_period))
                .ok_or_else(|| CliError::Usage("no forcing period: pass --period or keep the series meta file".into()))?;
            let transient = a
                .transient
                .or_else(|| meta.as_ref().map(|m| m.transient_fraction))
                .unwrap_or(SCENARIO_TRANSIENT);
            let name = meta.and_then(|m| m.meta.scenario);
            (series, period, transient, name, None, json!(input.display().to_string()))
        }
        (None, Some(name)) => {
            let run = scenario_run(name)?;
            let sc = run.scenario.expect("scenario runs carry their scenario");
            let period = a.period.unwrap_or(sc.params.forcing_period());
            let transient = a.transient.unwrap_or(sc.transient_fraction);
            (run.series, period, transient, Some(sc.name), Some(sc.reported), json!(null))
        }
        _ => return Err(CliError::Usage("give exactly one of --input and --scenario".into())),
    };
    if !(0.0..1.0).contains(&transient) {
        return Err(CliError::Usage(format!("--transient must lie in [0, 1) (got {transient})")));
    }
    let reported = reported.or_else(|| {
        scenario_name
            .as_deref()
            .and_then(|n| scenario(n).ok())
            .map(|s| s.reported)
    });
    let regime = classify_activity(&series.tail(transient), period)?;
    let mut out = Outcome {
        parameters: json!({
            "input": source,
            "scenario": a.scenario,
            "forcing_period": period,
            "transient_fraction": transient,
        }),
        ..Outcome::default()
    };
    let _ = writeln!(out.stdout, "{regime}");
    let record = Classification {
        label: regime.to_string(),
        regime,
        forcing_period: period,
        transient_fraction: transient,
        scenario: scenario_name,
        reported,
    };
    out.file("classification.json", pretty(&record)?);
    Ok(out)
}

fn sweep(a: &SweepArgs) -> CliResult<Outcome> {
    if a.n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2 (got {})", a.n)));
    }
    let base = ImprovedParams::defaults(a.gamma, a.i0_from)?
        .with_a(a.rate.a)?
        .with_alpha(a.rate.alpha)?
        .with_omega(a.omega)?
        .with_k(a.k)?;
    let values: Vec<f64> = (0..a.n)
        .map(|i| a.i0_from + (a.i0_to - a.i0_from) * i as f64 / (a.n - 1) as f64)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let labels: Vec<RegimeLabel> = pool.install(|| {
        values
            .par_iter()
            .map(|&i0| -> CliResult<RegimeLabel> {
                let mut sc = Scenario::new("sweep", "", base.with_i0(i0)?, "");
                sc.periods = a.periods;
                let r = run_scenario(&sc)?;
                Ok(classify_activity(&r.steady, sc.params.forcing_period())?)
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    let opt = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_default();
    let mut csv = String::from("I0,kind,n_per_burst,spike_count,strobe_period\n");
    let mut out = Outcome {
        parameters: json!({
            "params": base,
            "I0_range": [a.i0_from, a.i0_to],
            "n": a.n,
            "periods": a.periods,
        }),
        ..Outcome::default()
    };
    for (i0, l) in values.iter().zip(&labels) {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_num(*i0),
            l.kind.as_str(),
            opt(l.n_per_burst),
            l.spike_count,
            opt(l.strobe_period)
        );
        let _ = writeln!(out.stdout, "I0 = {i0:<12} {l}");
    }
    out.file("sweep.csv", csv);
    Ok(out)
}

fn scenario_list() -> Outcome {
    let mut out = Outcome::default();
    for s in scenarios() {
        let _ = writeln!(
            out.stdout,
            "{:<6} {:<62} reported: {}",
            s.name, s.description, s.reported
        );
    }
    out
}

/// Markers from a JSON file: a point, an array of points, or the output of `cusp`.
fn markers(path: &Path) -> CliResult<Vec<BifurcationPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let v: Value = serde_json::from_str(&text).map_err(bad)?;
    match v {
        Value::Array(_) => serde_json::from_value(v).map_err(bad),
        Value::Object(ref m) if m.contains_key("quadratic") => {
            Ok(vec![serde_json::from_value(m["quadratic"].clone()).map_err(bad)?])
        }
        _ => Ok(vec![serde_json::from_value(v).map_err(bad)?]),
    }
}

fn render(a: &RenderArgs) -> CliResult<Outcome> {
    let need = |n: usize| -> CliResult<()> {
        if a.inputs.len() < n {
            Err(CliError::Usage(format!("render needs at least {n} input file(s)")))
        } else {
            Ok(())
        }
    };
    let table = |i: usize| Table::read(&a.inputs[i]);
    let extra = |from: usize| -> CliResult<Vec<BifurcationPoint>> {
        let mut v = Vec::new();
        for p in &a.inputs[from..] {
            v.extend(markers(p)?);
        }
        Ok(v)
    };
    let (plot, name) = match a.kind {
        RenderKind::Nullclines => (figures::nullclines(&table(0)?)?, "nullclines"),
        RenderKind::Branch => (figures::branch(&table(0)?, &extra(1)?)?, "branch"),
        RenderKind::Codim2 => {
            need(2)?;
            (figures::codim2(&table(0)?, &table(1)?, &extra(2)?)?, "codim2")
        }
        RenderKind::Series => (figures::series(&table(0)?)?, "series"),
        RenderKind::Phase => (figures::phase(&table(0)?)?, "phase"),
    };
    let file = a.output.clone().unwrap_or_else(|| format!("{name}.svg"));
    if file.contains('/') || file.contains('\\') {
        return Err(CliError::Usage(format!("--output `{file}` must be a plain file name")));
    }
    let mut out = Outcome {
        parameters: json!({
            "kind": name,
            "inputs": a.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }),
        ..Outcome::default()
    };
    out.file(&file, plot.render());
    Ok(out)
}
