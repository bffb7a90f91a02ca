//! The first Lyapunov coefficient against an independent complex-eigenvector
//! evaluation of the cubic normal-form coefficient.
//!
//! The oracle uses the projection formula
//! `Re[⟨p,C(q,q,q̄)⟩ − 2⟨p,B(q,A⁻¹B(q,q̄))⟩ + ⟨p,B(q̄,(2iωI−A)⁻¹B(q,q))⟩] / (2ω)`
//! with `Aq = iωq`, `Aᵀp = −iωp`, `⟨p,q⟩ = 1` and the first component of `q`
//! fixed to `i`. The canonical-coordinate image of that `q` has squared modulus 2,
//! and the projection scales with `|q|²`, so the oracle equals four times the
//! library value.

use dml_core::codim2::{hopf_l1, hopf_point};
use dml_core::continuation::{first_lyapunov_from_partials, lyapunov_at};
use dml_core::model::{higher_partials, jacobian_original, HigherPartials, OriginalParams, Partials};
use nalgebra::Matrix2;
use num_complex::Complex64 as C;

type V = [C; 2];

fn b(h: &HigherPartials, u: V, v: V) -> V {
    let mut out = [C::new(0.0, 0.0); 2];
    for (c, o) in out.iter_mut().enumerate() {
        let d2 = h.component(c).d2;
        for i in 0..2 {
            for j in 0..2 {
                *o += d2[i][j] * u[i] * v[j];
            }
        }
    }
    out
}

fn c3(h: &HigherPartials, u: V, v: V, w: V) -> V {
    let mut out = [C::new(0.0, 0.0); 2];
    for (c, o) in out.iter_mut().enumerate() {
        let d3 = h.component(c).d3;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    *o += d3[i][j][k] * u[i] * v[j] * w[k];
                }
            }
        }
    }
    out
}

fn solve(m: [[C; 2]; 2], r: V) -> V {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        (r[0] * m[1][1] - m[0][1] * r[1]) / det,
        (m[0][0] * r[1] - m[1][0] * r[0]) / det,
    ]
}

fn inner(p: V, q: V) -> C {
    p[0].conj() * q[0] + p[1].conj() * q[1]
}

fn oracle(a: &Matrix2<f64>, h: &HigherPartials) -> f64 {
    let omega = a.determinant().sqrt();
    let i = C::new(0.0, 1.0);
    let re = |v: f64| C::new(v, 0.0);
    let q1 = i;
    let q = [q1, (i * omega - a[(0, 0)]) * q1 / a[(0, 1)]];
    // Left eigenvector for −iω, rescaled so that ⟨p,q⟩ = 1.
    let p0 = [re(1.0), (-i * omega - a[(0, 0)]) / a[(1, 0)]];
    let norm = inner(p0, q);
    let p = [p0[0] / norm.conj(), p0[1] / norm.conj()];
    assert!((inner(p, q) - 1.0).norm() < 1e-12);

    let qb = [q[0].conj(), q[1].conj()];
    let am = [[re(a[(0, 0)]), re(a[(0, 1)])], [re(a[(1, 0)]), re(a[(1, 1)])]];
    let shifted = [
        [2.0 * i * omega - am[0][0], -am[0][1]],
        [-am[1][0], 2.0 * i * omega - am[1][1]],
    ];
    let r1 = solve(am, b(h, q, qb));
    let r2 = solve(shifted, b(h, q, q));
    let term = inner(p, c3(h, q, q, qb)) - 2.0 * inner(p, b(h, q, r1)) + inner(p, b(h, qb, r2));
    term.re / (2.0 * omega)
}

fn defaults() -> OriginalParams {
    OriginalParams::with_defaults(0.3, 0.0).unwrap()
}

#[test]
fn matches_oracle_along_hopf_curve() {
    let p = defaults();
    let mut checked = 0;
    for k in 0..60 {
        let x = 0.02 + k as f64 * 0.01;
        let Ok(h) = hopf_point(&p, x) else { continue };
        if !h.genuine {
            continue;
        }
        let q = h.point.params(&p).unwrap();
        let s = h.point.state(&p);
        let jac = jacobian_original(s, &q);
        let hp = higher_partials(s, &q);
        let lib = lyapunov_at(s, &q).unwrap();
        let orc = oracle(&jac, &hp);
        assert!(
            (orc - 4.0 * lib).abs() <= 1e-9 * orc.abs().max(1e-3),
            "x = {x}: oracle {orc}, library {lib}"
        );
        assert_eq!(orc.signum(), lib.signum());
        assert_eq!(hopf_l1(&p, x).unwrap(), Some(lib));
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} genuine Hopf points checked");
}

#[test]
fn random_rotations_agree() {
    // Arbitrary non-symmetric linear parts with a centre and dense higher terms.
    let cases = [
        (Matrix2::new(0.3, -1.2, 0.9, -0.3), 0.7),
        (Matrix2::new(-0.5, 2.0, -0.4, 0.5), -1.3),
        (Matrix2::new(1.1, -0.2, 6.5, -1.1), 0.25),
    ];
    for (jac, seed) in cases {
        let mut h = HigherPartials::default();
        let mut v: f64 = seed;
        let mut next = || {
            v = (v * 12.9898 + 78.233).sin() * 43758.5453;
            v.fract()
        };
        for c in 0..2 {
            let mut part = Partials::default();
            for i in 0..2 {
                for j in i..2 {
                    let x = next();
                    part.d2[i][j] = x;
                    part.d2[j][i] = x;
                }
            }
            // Symmetric third-order tensor from four free entries.
            let t = [next(), next(), next(), next()];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        part.d3[i][j][k] = t[i + j + k];
                    }
                }
            }
            if c == 0 {
                h.f = part;
            } else {
                h.g = part;
            }
        }
        let lib = first_lyapunov_from_partials(&jac, &h).unwrap();
        let orc = oracle(&jac, &h);
        assert!((orc - 4.0 * lib).abs() < 1e-10 * orc.abs().max(1.0), "{orc} vs {lib}");
    }
}
