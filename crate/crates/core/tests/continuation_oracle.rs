//! Continuation against the closed-form equilibrium manifold.
//!
//! At fixed `γ` the equilibria form the curve `y = (A/γ)e^{αx}`,
//! `I = y − x²(1 − x)`, so every fold and trace-zero point has an explicit
//! abscissa: folds solve `Aαe^{αx} = γ(2x − 3x²)` and trace zeros solve
//! `3x² − 2x + γ = 0`. Those roots are computed here without the library.

use dml_core::continuation::{
    continue_equilibrium, continue_from, jacobian_at, BifurcationKind, Branch, ContinuationSettings, FreeParam,
};
use dml_core::equilibria::{eigenvalues_2x2, find_equilibria_default, Stability};
use dml_core::model::{OriginalParams, DEFAULT_A, DEFAULT_ALPHA};

const A: f64 = DEFAULT_A;
const ALPHA: f64 = DEFAULT_ALPHA;

fn current_on_manifold(x: f64, gamma: f64) -> f64 {
    A / gamma * (ALPHA * x).exp() - x * x * (1.0 - x)
}

fn det_on_manifold(x: f64, gamma: f64) -> f64 {
    A * ALPHA * (ALPHA * x).exp() - gamma * (2.0 * x - 3.0 * x * x)
}

/// Cusp abscissa from `3αx² − (2α + 6)x + 2 = 0`, then `γ` from the fold formula.
fn cusp_gamma() -> f64 {
    let (a, b, c) = (3.0 * ALPHA, -(2.0 * ALPHA + 6.0), 2.0);
    let x = (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    A * ALPHA * (ALPHA * x).exp() / (2.0 * x - 3.0 * x * x)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fold abscissae on (0, 2/3) by a dense sign scan.
fn oracle_folds(gamma: f64) -> Vec<f64> {
    let n = 20_000;
    let xs: Vec<f64> = (1..n).map(|k| k as f64 * (2.0 / 3.0) / n as f64).collect();
    xs.windows(2)
        .filter(|w| det_on_manifold(w[0], gamma).signum() != det_on_manifold(w[1], gamma).signum())
        .map(|w| bisect(|x| det_on_manifold(x, gamma), w[0], w[1]))
        .collect()
}

/// Trace-zero abscissae and whether each is a genuine Hopf (`det > 0`).
fn oracle_trace_zeros(gamma: f64) -> Vec<(f64, bool)> {
    let r = (1.0 - 3.0 * gamma).sqrt();
    [(1.0 - r) / 3.0, (1.0 + r) / 3.0]
        .into_iter()
        .map(|x| (x, det_on_manifold(x, gamma) > 0.0))
        .collect()
}

fn branch(gamma: f64, range: (f64, f64), increasing: bool) -> Branch {
    let start_i = if increasing { range.0 } else { range.1 };
    let p = OriginalParams::with_defaults(gamma, start_i).unwrap();
    let scan = find_equilibria_default(&p).unwrap();
    assert_eq!(scan.count(), 1, "start at I = {start_i} should be unique");
    let settings = ContinuationSettings {
        increasing,
        ..ContinuationSettings::default()
    };
    continue_equilibrium(&scan.equilibria[0], &p, FreeParam::Current, range, &settings).unwrap()
}

fn gammas() -> Vec<f64> {
    let lo = cusp_gamma();
    let hi = 1.0 / 3.0;
    (0..10).map(|k| lo + (k as f64 + 0.5) / 10.0 * (hi - lo)).collect()
}

const RANGE: (f64, f64) = (-0.05, 1.0);

#[test]
fn detected_points_match_closed_form() {
    for gamma in gammas() {
        let b = branch(gamma, RANGE, true);
        assert!(b.is_complete(), "γ = {gamma}: {:?}", b.termination);

        let folds = oracle_folds(gamma);
        assert_eq!(folds.len(), 2, "γ = {gamma}");
        assert_eq!(b.count(BifurcationKind::Fold), 2, "γ = {gamma}");
        for bp in b.of_kind(BifurcationKind::Fold) {
            let x = folds
                .iter()
                .copied()
                .min_by(|a, c| (a - bp.state.x).abs().total_cmp(&(c - bp.state.x).abs()))
                .unwrap();
            assert!((bp.state.x - x).abs() < 1e-8, "γ = {gamma}: fold x {} vs {x}", bp.state.x);
            let di = (bp.current - current_on_manifold(x, gamma)).abs();
            assert!(di < 1e-8, "γ = {gamma}: fold ΔI = {di}");
            assert!(bp.det.abs() < 1e-10);
        }

        let zeros = oracle_trace_zeros(gamma);
        let found: Vec<_> = b
            .bifurcations
            .iter()
            .filter(|bp| matches!(bp.kind, BifurcationKind::Hopf | BifurcationKind::NeutralSaddle))
            .collect();
        assert_eq!(found.len(), zeros.len(), "γ = {gamma}");
        for (x, genuine) in zeros {
            let bp = found
                .iter()
                .find(|bp| (bp.state.x - x).abs() < 1e-8)
                .unwrap_or_else(|| panic!("γ = {gamma}: no trace zero at x = {x}"));
            let di = (bp.current - current_on_manifold(x, gamma)).abs();
            assert!(di < 1e-8, "γ = {gamma}: trace-zero ΔI = {di}");
            assert_eq!(bp.kind == BifurcationKind::Hopf, genuine, "γ = {gamma}, x = {x}");
            assert_eq!(bp.det > 0.0, genuine);
            assert!(bp.trace.abs() < 1e-10);
        }
    }
}

#[test]
fn hopf_eigenvalues_are_imaginary() {
    for gamma in gammas() {
        let b = branch(gamma, RANGE, true);
        for bp in b.of_kind(BifurcationKind::Hopf) {
            let p = bp.params(&b.base).unwrap();
            let j = jacobian_at(bp, &p).unwrap();
            let det = j.determinant();
            let ev = eigenvalues_2x2(j.trace(), det);
            let w0 = det.sqrt();
            assert!(ev[0].re.abs() < 1e-8 && ev[1].re.abs() < 1e-8);
            assert!((ev[0].im.abs() - w0).abs() < 1e-8);
            assert!((w0 * w0 - bp.det).abs() < 1e-8);
            assert!(bp.l1.is_some());
        }
    }
}

#[test]
fn every_point_is_an_equilibrium() {
    let gamma = gammas()[4];
    let b = branch(gamma, RANGE, true);
    for pt in &b.points {
        let y = A / gamma * (ALPHA * pt.state.x).exp();
        let i = y - pt.state.x * pt.state.x * (1.0 - pt.state.x);
        assert!((pt.state.y - y).abs() < 1e-10);
        assert!((pt.param - i).abs() < 1e-10);
    }
}

fn coarse(s: Stability) -> Option<u8> {
    match s {
        Stability::StableNode | Stability::StableFocus => Some(0),
        Stability::UnstableNode | Stability::UnstableFocus => Some(1),
        Stability::Saddle => Some(2),
        Stability::Marginal => None,
    }
}

#[test]
fn stability_changes_only_at_markers() {
    for gamma in gammas() {
        let b = branch(gamma, RANGE, true);
        let mut last: Option<(usize, u8)> = None;
        for (i, pt) in b.points.iter().enumerate() {
            let Some(c) = coarse(pt.stability) else { continue };
            if let Some((j, prev)) = last {
                if prev != c {
                    assert!(
                        b.segments.iter().any(|&s| s >= j && s < i),
                        "γ = {gamma}: stability change between points {j} and {i} without a marker"
                    );
                }
            }
            last = Some((i, c));
        }
        // Markers sit where their test function changes sign.
        for (bp, &s) in b.bifurcations.iter().zip(&b.segments) {
            let (l, r) = (&b.points[s], &b.points[s + 1]);
            let changes = match bp.kind {
                BifurcationKind::Fold => l.det.signum() != r.det.signum(),
                _ => l.trace.signum() != r.trace.signum(),
            };
            assert!(changes, "γ = {gamma}: {:?} in segment {s}", bp.kind);
        }
    }
}

#[test]
fn reversed_walk_traces_the_same_curve() {
    let gamma = gammas()[3];
    let fwd = branch(gamma, RANGE, true);
    let rev = branch(gamma, RANGE, false);
    assert!(rev.is_complete());
    let first = fwd.points.first().unwrap();
    let last = fwd.points.last().unwrap();
    let rfirst = rev.points.first().unwrap();
    let rlast = rev.points.last().unwrap();
    for (a, b) in [(first, rlast), (last, rfirst)] {
        assert!((a.state.x - b.state.x).abs() < 1e-8);
        assert!((a.state.y - b.state.y).abs() < 1e-8);
        assert!((a.param - b.param).abs() < 1e-8);
    }
    for pt in &rev.points {
        assert!((pt.param - current_on_manifold(pt.state.x, gamma)).abs() < 1e-8);
    }
    assert_eq!(fwd.bifurcations.len(), rev.bifurcations.len());
    for (a, b) in fwd.bifurcations.iter().zip(rev.bifurcations.iter().rev()) {
        assert_eq!(a.kind, b.kind);
        assert!((a.state.x - b.state.x).abs() < 1e-8);
        assert!((a.current - b.current).abs() < 1e-8);
    }
}

#[test]
fn restart_reproduces_the_tail() {
    let gamma = gammas()[6];
    let b = branch(gamma, RANGE, true);
    let n = b.points.len();
    for index in [1, n / 5, n / 2, n - 3] {
        let r = continue_from(&b, index).unwrap();
        assert_eq!(r.points.len(), n, "restart at {index}");
        for (p, q) in b.points.iter().zip(&r.points).skip(index) {
            assert!((p.state.x - q.state.x).abs() < 1e-8);
            assert!((p.state.y - q.state.y).abs() < 1e-8);
            assert!((p.param - q.param).abs() < 1e-8);
        }
        assert_eq!(r.bifurcations.len(), b.bifurcations.len());
    }
}
