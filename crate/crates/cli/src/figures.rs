//! Figures built from output tables, so `--svg` and `render` agree byte for byte.

use dml_core::continuation::BifurcationPoint;

use crate::error::CliResult;
use crate::svg::{Group, Marker, Plot};
use crate::table::Table;

/// Window of the parameter-plane figure; both loci diverge near x = 2/3.
pub const CODIM2_WINDOW: ((f64, f64), (f64, f64)) = ((-0.05, 0.25), (0.0, 0.5));

fn zip(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().copied().zip(b.iter().copied()).collect()
}

/// Consecutive runs of points sharing a key.
fn runs<K: PartialEq + Copy>(pts: &[(f64, f64)], keys: &[K]) -> Vec<(K, Vec<(f64, f64)>)> {
    let mut out: Vec<(K, Vec<(f64, f64)>)> = Vec::new();
    for (p, k) in pts.iter().zip(keys) {
        match out.last_mut() {
            Some((key, line)) if key == k => line.push(*p),
            _ => {
                // Start the new run at the previous point so the curve stays connected.
                let mut line = out.last().and_then(|(_, l)| l.last().copied()).into_iter().collect::<Vec<_>>();
                line.push(*p);
                out.push((*k, line));
            }
        }
    }
    out
}

pub fn nullclines(t: &Table) -> CliResult<Plot> {
    let x = t.numbers("x")?;
    let yx = t.numbers("y_xnull")?;
    let yy = t.numbers("y_ynull")?;
    let (lo, hi) = yx
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let pad = 0.1 * (hi - lo).max(1e-3);
    Ok(Plot {
        title: "Nullclines".into(),
        x_label: "x".into(),
        y_label: "y".into(),
        groups: vec![
            Group::new("x-nullcline", "#1f4e9c").with_line(zip(&x, &yx)),
            Group::new("y-nullcline", "black").with_line(zip(&x, &yy)),
        ],
        y_range: Some((lo - pad, hi + pad)),
        ..Plot::default()
    })
}

pub fn branch(t: &Table, bifurcations: &[BifurcationPoint]) -> CliResult<Plot> {
    let free = t.header.first().map(String::as_str).unwrap_or("I");
    let param = t.numbers(free)?;
    let x = t.numbers("x")?;
    let stability = t.text("stability")?;
    let mut stable: Vec<bool> = Vec::with_capacity(stability.len());
    for s in &stability {
        // Marginal points continue the current run.
        let v = match *s {
            "stable-node" | "stable-focus" => true,
            "marginal" => stable.last().copied().unwrap_or(true),
            _ => false,
        };
        stable.push(v);
    }
    let mut st = Group::new("stable", "#1f4e9c");
    let mut un = Group::new("unstable", "#c0392b").dashed();
    for (k, line) in runs(&zip(&param, &x), &stable) {
        if k {
            st.lines.push(line);
        } else {
            un.lines.push(line);
        }
    }
    let markers = bifurcations
        .iter()
        .map(|b| Marker {
            x: if free == "gamma" { b.gamma } else { b.current },
            y: b.state.x,
            label: short_kind(b),
        })
        .collect();
    Ok(Plot {
        title: "Equilibrium branch".into(),
        x_label: free.into(),
        y_label: "x".into(),
        groups: vec![st, un],
        markers,
        ..Plot::default()
    })
}

fn short_kind(b: &BifurcationPoint) -> String {
    use dml_core::continuation::BifurcationKind as K;
    match b.kind {
        K::Fold => "LP",
        K::Hopf => "HB",
        K::NeutralSaddle => "NS",
        K::Cusp => "CP",
        K::GeneralizedHopf => "GH",
    }
    .into()
}

pub fn codim2(fold: &Table, hopf: &Table, points: &[BifurcationPoint]) -> CliResult<Plot> {
    let fold_line = zip(&fold.numbers("I")?, &fold.numbers("gamma")?);
    let genuine: Vec<bool> = hopf.text("genuine")?.iter().map(|s| *s == "1").collect();
    let mut real = Group::new("hopf", "#c0392b");
    let mut neutral = Group::new("neutral-saddle", "#888888").dashed();
    for (k, line) in runs(&zip(&hopf.numbers("I")?, &hopf.numbers("gamma")?), &genuine) {
        if k {
            real.lines.push(line);
        } else {
            neutral.lines.push(line);
        }
    }
    let ((x0, x1), y) = CODIM2_WINDOW;
    let clip = |line: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
        line.into_iter()
            .filter(|p| p.0 >= x0 - 0.1 && p.0 <= x1 + 0.1 && p.1 <= y.1 + 0.5)
            .collect()
    };
    let mut groups = vec![Group::new("fold", "black").with_line(clip(fold_line))];
    for mut g in [real, neutral] {
        g.lines = g.lines.into_iter().map(clip).collect();
        groups.push(g);
    }
    Ok(Plot {
        title: "Fold and Hopf loci".into(),
        x_label: "I".into(),
        y_label: "gamma".into(),
        groups,
        markers: points
            .iter()
            .map(|b| Marker {
                x: b.current,
                y: b.gamma,
                label: short_kind(b),
            })
            .collect(),
        x_range: Some((x0, x1)),
        y_range: Some(y),
        ..Plot::default()
    })
}

pub fn series(t: &Table) -> CliResult<Plot> {
    Ok(Plot {
        title: "Membrane potential".into(),
        x_label: "t".into(),
        y_label: "x".into(),
        groups: vec![Group::new("x", "#1f4e9c").with_line(zip(&t.numbers("t")?, &t.numbers("x")?))],
        monotone_x: true,
        ..Plot::default()
    })
}

pub fn phase(t: &Table) -> CliResult<Plot> {
    Ok(Plot {
        title: "Phase projection".into(),
        x_label: "x".into(),
        y_label: "y".into(),
        groups: vec![Group::new("orbit", "#1f4e9c").with_line(zip(&t.numbers("x")?, &t.numbers("y")?))],
        ..Plot::default()
    })
}
