//! First Lyapunov coefficient of a planar Hopf point.
//!
//! Convention: with the equilibrium at the origin, coordinates are changed to
//! `(ξ, η)` so the linear part is `[[0, −ω₀], [ω₀, 0]]`, with `ξ` equal to the
//! shift in `x`. In these coordinates
//!
//! ```text
//! l1 = 1/(16ω₀) · [F_ξξξ + F_ξηη + G_ξξη + G_ηηη
//!        + (F_ξη(F_ξξ + F_ηη) − G_ξη(G_ξξ + G_ηη) − F_ξξ G_ξξ + F_ηη G_ηη) / ω₀]
//! ```
//!
//! so that `ξ' = −ω₀η − ξ(ξ² + η²)` has `l1 = −1/ω₀`. Other tools rescale
//! time or the eigenvector; only the sign is invariant.

use nalgebra::Matrix2;

use crate::equilibria::MARGINAL_TOL;
use crate::error::{Error, Result};
use crate::model::{higher_partials, jacobian_original, HigherPartials, OriginalParams, State2};

type T2 = [[f64; 2]; 2];
type T3 = [[[f64; 2]; 2]; 2];

/// Transformation to canonical coordinates: returns `(P, P⁻¹, ω₀)` with
/// `P⁻¹ J P = [[0, −ω₀], [ω₀, 0]]` once the trace is removed.
pub(crate) fn canonical_basis(jac: &Matrix2<f64>) -> Result<(Matrix2<f64>, Matrix2<f64>, f64)> {
    let a = 0.5 * (jac[(0, 0)] - jac[(1, 1)]);
    let b = jac[(0, 1)];
    let c = jac[(1, 0)];
    let w2 = -a * a - b * c;
    if !(w2 > MARGINAL_TOL) {
        return Err(Error::InvalidArgument(format!(
            "not a Hopf point: ω₀² = {w2:e} must be positive"
        )));
    }
    let w = w2.sqrt();
    // ξ = u₁, η = −(a·u₁ + b·u₂)/ω₀.
    let p_inv = Matrix2::new(1.0, 0.0, -a / w, -b / w);
    let p = Matrix2::new(1.0, 0.0, -a / b, -w / b);
    Ok((p, p_inv, w))
}

/// `l1` from the Jacobian and derivative tensors at the Hopf point.
pub fn first_lyapunov_from_partials(jac: &Matrix2<f64>, partials: &HigherPartials) -> Result<f64> {
    let (p, p_inv, w) = canonical_basis(jac)?;

    let mut d2 = [[[0.0; 2]; 2]; 2];
    let mut d3 = [[[[0.0; 2]; 2]; 2]; 2];
    for (i, (d2i, d3i)) in d2.iter_mut().zip(d3.iter_mut()).enumerate() {
        for l in 0..2 {
            let w_il = p_inv[(i, l)];
            if w_il == 0.0 {
                continue;
            }
            let src: &T2 = &partials.component(l).d2;
            let src3: &T3 = &partials.component(l).d3;
            for j in 0..2 {
                for k in 0..2 {
                    let mut s2 = 0.0;
                    for m in 0..2 {
                        for n in 0..2 {
                            s2 += src[m][n] * p[(m, j)] * p[(n, k)];
                        }
                    }
                    d2i[j][k] += w_il * s2;
                    for q in 0..2 {
                        let mut s3 = 0.0;
                        for m in 0..2 {
                            for n in 0..2 {
                                for r in 0..2 {
                                    s3 += src3[m][n][r] * p[(m, j)] * p[(n, k)] * p[(r, q)];
                                }
                            }
                        }
                        d3i[j][k][q] += w_il * s3;
                    }
                }
            }
        }
    }

    let (f2, g2) = (&d2[0], &d2[1]);
    let (f3, g3) = (&d3[0], &d3[1]);
    let third = f3[0][0][0] + f3[0][1][1] + g3[0][0][1] + g3[1][1][1];
    let second = f2[0][1] * (f2[0][0] + f2[1][1]) - g2[0][1] * (g2[0][0] + g2[1][1])
        - f2[0][0] * g2[0][0]
        + f2[1][1] * g2[1][1];
    let l1 = (third + second / w) / (16.0 * w);
    if !l1.is_finite() {
        return Err(Error::NonFinite("first Lyapunov coefficient"));
    }
    Ok(l1)
}

/// `l1` of the original model at an equilibrium with `trace = 0`, `det > 0`.
pub fn lyapunov_at(state: State2, p: &OriginalParams) -> Result<f64> {
    let jac = jacobian_original(state, p);
    let det = jac.determinant();
    if det <= MARGINAL_TOL {
        return Err(Error::InvalidArgument(format!(
            "first Lyapunov coefficient needs det > 0 (got {det:e})"
        )));
    }
    first_lyapunov_from_partials(&jac, &higher_partials(state, p))
}
