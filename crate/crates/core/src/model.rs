//! Vector fields of the two-variable denatured Morris-Lecar neuron and of its
//! three-variable extension with magnetic-flux feedback and periodic forcing.
//!
//! Original model, state `(x, y)`:
//!
//! ```text
//! dx/dt = x²(1 − x) − y + I
//! dy/dt = A·exp(αx) − γy
//! ```
//!
//! Extended model, state `(x, y, φ)`:
//!
//! ```text
//! dx/dt = x²(1 − x) − y + I₀·sin(ωt) + k·ρ(φ)·x
//! dy/dt = A·exp(αx) − γy
//! dφ/dt = k₁x − k₂φ + φ_ext,        ρ(φ) = α₁ + 3βφ²
//! ```
//!
//! Every right-hand side is evaluated in a fixed order, term by term from
//! left to right as written above, so repeated runs are bit-for-bit identical.
//! With `k = 0` and `I₀ = 0` the `(x, y)` components of the extended field are
//! bit-identical to the original field at `I = 0`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default rate constant `A`.
pub const DEFAULT_A: f64 = 0.0041;
/// Default exponential gain `α`.
pub const DEFAULT_ALPHA: f64 = 5.276;
/// Default flux feedback gain `k`.
pub const DEFAULT_K: f64 = 0.003;
/// Default flux coupling `k₁`.
pub const DEFAULT_K1: f64 = 0.19;
/// Default flux decay `k₂`.
pub const DEFAULT_K2: f64 = 0.5;
/// Default memductance constant `α₁`.
pub const DEFAULT_ALPHA1: f64 = 0.1;
/// Default memductance constant `β`.
pub const DEFAULT_BETA: f64 = 0.02;
/// Default forcing angular frequency `ω`.
pub const DEFAULT_OMEGA: f64 = 0.01;
/// Default external flux `φ_ext`.
pub const DEFAULT_PHI_EXT: f64 = 0.2;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        });
    }
    Ok(value)
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Parameters of the two-variable model. `A`, `α` and `γ` are positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOriginal", into = "RawOriginal")]
pub struct OriginalParams {
    a: f64,
    alpha: f64,
    gamma: f64,
    current: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOriginal {
    #[serde(rename = "A", default = "default_a")]
    a: f64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    gamma: f64,
    #[serde(rename = "I")]
    current: f64,
}

fn default_a() -> f64 {
    DEFAULT_A
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

impl TryFrom<RawOriginal> for OriginalParams {
    type Error = Error;
    fn try_from(raw: RawOriginal) -> Result<Self> {
        OriginalParams::new(raw.a, raw.alpha, raw.gamma, raw.current)
    }
}

impl From<OriginalParams> for RawOriginal {
    fn from(p: OriginalParams) -> Self {
        RawOriginal {
            a: p.a,
            alpha: p.alpha,
            gamma: p.gamma,
            current: p.current,
        }
    }
}

impl OriginalParams {
    pub fn new(a: f64, alpha: f64, gamma: f64, current: f64) -> Result<Self> {
        Ok(Self {
            a: positive("A", a)?,
            alpha: positive("alpha", alpha)?,
            gamma: positive("gamma", gamma)?,
            current: finite("I", current)?,
        })
    }

    /// Construct without validation; for solvers that probe parameter values
    /// transiently.
    pub(crate) fn raw(a: f64, alpha: f64, gamma: f64, current: f64) -> Self {
        Self {
            a,
            alpha,
            gamma,
            current,
        }
    }

    /// Default `A` and `α` with the given recovery decay and current.
    pub fn with_defaults(gamma: f64, current: f64) -> Result<Self> {
        Self::new(DEFAULT_A, DEFAULT_ALPHA, gamma, current)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.a, self.alpha, gamma, self.current)
    }

    pub fn with_current(self, current: f64) -> Result<Self> {
        Self::new(self.a, self.alpha, self.gamma, current)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }
}

/// Parameters of the flux-coupled, periodically forced model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawImproved", into = "RawImproved")]
pub struct ImprovedParams {
    a: f64,
    alpha: f64,
    gamma: f64,
    i0: f64,
    omega: f64,
    k: f64,
    k1: f64,
    k2: f64,
    alpha1: f64,
    beta: f64,
    phi_ext: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImproved {
    #[serde(rename = "A", default = "default_a")]
    a: f64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    gamma: f64,
    #[serde(rename = "I0")]
    i0: f64,
    #[serde(default = "default_omega")]
    omega: f64,
    #[serde(default = "default_k")]
    k: f64,
    #[serde(default = "default_k1")]
    k1: f64,
    #[serde(default = "default_k2")]
    k2: f64,
    #[serde(default = "default_alpha1")]
    alpha1: f64,
    #[serde(default = "default_beta")]
    beta: f64,
    #[serde(default = "default_phi_ext")]
    phi_ext: f64,
}

fn default_omega() -> f64 {
    DEFAULT_OMEGA
}
fn default_k() -> f64 {
    DEFAULT_K
}
fn default_k1() -> f64 {
    DEFAULT_K1
}
fn default_k2() -> f64 {
    DEFAULT_K2
}
fn default_alpha1() -> f64 {
    DEFAULT_ALPHA1
}
fn default_beta() -> f64 {
    DEFAULT_BETA
}
fn default_phi_ext() -> f64 {
    DEFAULT_PHI_EXT
}

impl TryFrom<RawImproved> for ImprovedParams {
    type Error = Error;
    fn try_from(r: RawImproved) -> Result<Self> {
        ImprovedParams::defaults(r.gamma, r.i0)?
            .with_a(r.a)?
            .with_alpha(r.alpha)?
            .with_omega(r.omega)?
            .with_k(r.k)?
            .with_flux(r.k1, r.k2, r.phi_ext)?
            .with_memductance(r.alpha1, r.beta)
    }
}

impl From<ImprovedParams> for RawImproved {
    fn from(p: ImprovedParams) -> Self {
        RawImproved {
            a: p.a,
            alpha: p.alpha,
            gamma: p.gamma,
            i0: p.i0,
            omega: p.omega,
            k: p.k,
            k1: p.k1,
            k2: p.k2,
            alpha1: p.alpha1,
            beta: p.beta,
            phi_ext: p.phi_ext,
        }
    }
}

impl ImprovedParams {
    /// Default constants with the given recovery decay `γ` and forcing amplitude `I₀`.
    pub fn defaults(gamma: f64, i0: f64) -> Result<Self> {
        Ok(Self {
            a: DEFAULT_A,
            alpha: DEFAULT_ALPHA,
            gamma: positive("gamma", gamma)?,
            i0: finite("I0", i0)?,
            omega: DEFAULT_OMEGA,
            k: DEFAULT_K,
            k1: DEFAULT_K1,
            k2: DEFAULT_K2,
            alpha1: DEFAULT_ALPHA1,
            beta: DEFAULT_BETA,
            phi_ext: DEFAULT_PHI_EXT,
        })
    }

    pub fn with_a(mut self, a: f64) -> Result<Self> {
        self.a = positive("A", a)?;
        Ok(self)
    }
    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = positive("alpha", alpha)?;
        Ok(self)
    }
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = positive("gamma", gamma)?;
        Ok(self)
    }
    pub fn with_i0(mut self, i0: f64) -> Result<Self> {
        self.i0 = finite("I0", i0)?;
        Ok(self)
    }
    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = positive("omega", omega)?;
        Ok(self)
    }
    pub fn with_k(mut self, k: f64) -> Result<Self> {
        self.k = finite("k", k)?;
        Ok(self)
    }
    pub fn with_flux(mut self, k1: f64, k2: f64, phi_ext: f64) -> Result<Self> {
        self.k1 = finite("k1", k1)?;
        self.k2 = finite("k2", k2)?;
        self.phi_ext = finite("phi_ext", phi_ext)?;
        Ok(self)
    }
    pub fn with_memductance(mut self, alpha1: f64, beta: f64) -> Result<Self> {
        self.alpha1 = finite("alpha1", alpha1)?;
        self.beta = finite("beta", beta)?;
        Ok(self)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn i0(&self) -> f64 {
        self.i0
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn k1(&self) -> f64 {
        self.k1
    }
    pub fn k2(&self) -> f64 {
        self.k2
    }
    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn phi_ext(&self) -> f64 {
        self.phi_ext
    }

    /// Period `2π/ω` of the external current.
    pub fn forcing_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }
}

/// Point `(x, y)` of the two-variable phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State2 {
    pub x: f64,
    pub y: f64,
}

impl State2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let s = Self { x, y };
        s.check()?;
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn check(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("state (x, y)"))
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Point `(x, y, φ)` of the three-variable phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State3 {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl State3 {
    pub fn new(x: f64, y: f64, phi: f64) -> Result<Self> {
        let s = Self { x, y, phi };
        if !s.is_finite() {
            return Err(Error::NonFinite("state (x, y, phi)"));
        }
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.phi.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.phi]
    }
}

#[inline]
pub(crate) fn field_original(x: f64, y: f64, p: &OriginalParams) -> [f64; 2] {
    [
        x * x * (1.0 - x) - y + p.current,
        p.a * (p.alpha * x).exp() - p.gamma * y,
    ]
}

#[inline]
pub(crate) fn field_improved(t: f64, s: &[f64; 3], p: &ImprovedParams) -> [f64; 3] {
    let [x, y, phi] = *s;
    [
        x * x * (1.0 - x) - y + p.i0 * (p.omega * t).sin() + p.k * rho(phi, p) * x,
        p.a * (p.alpha * x).exp() - p.gamma * y,
        p.k1 * x - p.k2 * phi + p.phi_ext,
    ]
}

/// Time derivative of the two-variable model.
pub fn rhs_original(s: State2, p: &OriginalParams) -> Result<State2> {
    s.check()?;
    let [dx, dy] = field_original(s.x, s.y, p);
    Ok(State2 { x: dx, y: dy })
}

/// Flux-dependent memductance `ρ(φ) = α₁ + 3βφ²`.
#[inline]
pub fn rho(phi: f64, p: &ImprovedParams) -> f64 {
    p.alpha1 + 3.0 * p.beta * phi * phi
}

/// Time derivative of the extended model at time `t`.
pub fn rhs_improved(s: State3, t: f64, p: &ImprovedParams) -> Result<State3> {
    if !s.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite("state or time"));
    }
    let [dx, dy, dphi] = field_improved(t, &s.to_array(), p);
    Ok(State3 {
        x: dx,
        y: dy,
        phi: dphi,
    })
}

/// `∂(dx/dt)/∂x` of the original model, `2x − 3x²`.
#[inline]
pub(crate) fn fx(x: f64) -> f64 {
    2.0 * x - 3.0 * x * x
}

/// `∂(dy/dt)/∂x`, `Aα·exp(αx)`.
#[inline]
pub(crate) fn gx(x: f64, a: f64, alpha: f64) -> f64 {
    a * alpha * (alpha * x).exp()
}

/// Analytic Jacobian `[[2x − 3x², −1], [Aα·exp(αx), −γ]]`.
pub fn jacobian_original(s: State2, p: &OriginalParams) -> Matrix2<f64> {
    Matrix2::new(fx(s.x), -1.0, gx(s.x, p.a, p.alpha), -p.gamma)
}

/// First, second and third partial derivatives of one scalar component with
/// respect to `(x, y)`. Index 0 is `x`, index 1 is `y`; the tensors are symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub d1: [f64; 2],
    pub d2: [[f64; 2]; 2],
    pub d3: [[[f64; 2]; 2]; 2],
}

/// Partial derivatives through third order of both components of the original field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HigherPartials {
    pub f: Partials,
    pub g: Partials,
}

impl HigherPartials {
    pub fn component(&self, i: usize) -> &Partials {
        match i {
            0 => &self.f,
            _ => &self.g,
        }
    }
}

/// Derivatives of `f = x²(1−x) − y + I` and `g = A·exp(αx) − γy` through third order.
///
/// Only pure-`x` derivatives of order two and three are nonzero: `f_xx = 2 − 6x`,
/// `f_xxx = −6`, and `∂ⁿg/∂xⁿ = Aαⁿ·exp(αx)`.
pub fn higher_partials(s: State2, p: &OriginalParams) -> HigherPartials {
    let e = p.a * (p.alpha * s.x).exp();
    let mut f = Partials {
        d1: [fx(s.x), -1.0],
        ..Partials::default()
    };
    f.d2[0][0] = 2.0 - 6.0 * s.x;
    f.d3[0][0][0] = -6.0;

    let mut g = Partials {
        d1: [e * p.alpha, -p.gamma],
        ..Partials::default()
    };
    g.d2[0][0] = e * p.alpha * p.alpha;
    g.d3[0][0][0] = e * p.alpha * p.alpha * p.alpha;

    HigherPartials { f, g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(gamma: f64, current: f64) -> OriginalParams {
        OriginalParams::with_defaults(gamma, current).unwrap()
    }

    #[test]
    fn origin_gives_rate_constant() {
        let d = rhs_original(State2 { x: 0.0, y: 0.0 }, &p(0.2, 0.0)).unwrap();
        assert_eq!(d.x, 0.0);
        assert_eq!(d.y, 0.0041);
    }

    #[test]
    fn unit_potential() {
        let d = rhs_original(State2 { x: 1.0, y: 0.0 }, &p(0.2, 0.0)).unwrap();
        assert_eq!(d.x, 0.0);
        assert_relative_eq!(d.y, 0.0041 * 5.276f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(d.y, 0.8019, epsilon = 1e-4);
    }

    #[test]
    fn hand_evaluated_point() {
        let d = rhs_original(State2 { x: 0.5, y: 0.1 }, &p(0.315, 0.013)).unwrap();
        assert_relative_eq!(d.x, 0.038, epsilon = 1e-15);
        // 0.0041·e^{2.638} − 0.0315
        assert_relative_eq!(d.y, 0.0041 * 2.638f64.exp() - 0.0315, epsilon = 1e-15);
        assert_relative_eq!(d.y, 0.02584, epsilon = 1e-5);
    }

    #[test]
    fn non_finite_state_rejected() {
        let s = State2 {
            x: f64::NAN,
            y: 0.0,
        };
        assert!(rhs_original(s, &p(0.2, 0.0)).is_err());
        assert!(State2::new(f64::INFINITY, 0.0).is_err());
        let s3 = State3 {
            x: 0.0,
            y: 0.0,
            phi: f64::NAN,
        };
        let q = ImprovedParams::defaults(0.315, 0.0).unwrap();
        assert!(rhs_improved(s3, 0.0, &q).is_err());
    }

    #[test]
    fn memductance_values() {
        let q = ImprovedParams::defaults(0.315, 0.0).unwrap();
        assert_eq!(rho(0.0, &q), 0.1);
        assert_relative_eq!(rho(1.0, &q), 0.16, epsilon = 1e-15);
        for c in [0.1, 0.7, 3.3, 1e3] {
            assert_eq!(rho(c, &q), rho(-c, &q));
        }
    }

    #[test]
    fn improved_at_origin() {
        let q = ImprovedParams::defaults(0.315, 0.02).unwrap();
        let d = rhs_improved(
            State3 {
                x: 0.0,
                y: 0.0,
                phi: 0.0,
            },
            0.0,
            &q,
        )
        .unwrap();
        assert_eq!(d.x, 0.0);
        assert_eq!(d.y, 0.0041);
        assert_eq!(d.phi, 0.2);
    }

    #[test]
    fn improved_hand_evaluated() {
        let q = ImprovedParams::defaults(0.315, 0.02).unwrap();
        let d = rhs_improved(
            State3 {
                x: 0.5,
                y: 0.1,
                phi: 0.2,
            },
            0.0,
            &q,
        )
        .unwrap();
        let expect = 0.125 - 0.1 + 0.003 * (0.1 + 3.0 * 0.02 * 0.04) * 0.5;
        assert_relative_eq!(d.x, expect, epsilon = 1e-15);
        assert_relative_eq!(d.x, 0.025154, epsilon = 1e-6);
        assert_relative_eq!(d.phi, 0.195, epsilon = 1e-15);
    }

    #[test]
    fn reduction_to_original_is_bit_exact() {
        let q = ImprovedParams::defaults(0.28, 0.0)
            .unwrap()
            .with_k(0.0)
            .unwrap();
        let o = p(0.28, 0.0);
        for &(x, y, phi, t) in &[
            (0.3, -0.2, 0.7, 12.5),
            (-0.9, 0.4, -1.2, 1e4),
            (0.123456789, 0.987654321, 0.5, 3.0),
        ] {
            let a = rhs_improved(State3 { x, y, phi }, t, &q).unwrap();
            let b = rhs_original(State2 { x, y }, &o).unwrap();
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn jacobian_at_zero() {
        let j = jacobian_original(State2 { x: 0.0, y: 0.3 }, &p(0.2, 0.0));
        assert_eq!(j[(0, 0)], 0.0);
        assert_eq!(j[(0, 1)], -1.0);
        assert_relative_eq!(j[(1, 0)], 0.0216316, epsilon = 1e-12);
    }

    #[test]
    fn jacobian_determinant_closed_form() {
        let j = jacobian_original(State2 { x: 0.2, y: 0.0 }, &p(0.28, 0.0));
        let det = j.determinant();
        assert_relative_eq!(det, -0.28 * 0.28 + 0.0216316 * 1.0552f64.exp(), epsilon = 1e-12);
        assert_relative_eq!(det, -0.01626, epsilon = 1e-5);
        assert_relative_eq!(j.trace(), 0.4 - 0.12 - 0.28, epsilon = 1e-15);
    }

    #[test]
    fn higher_partials_examples() {
        let h = higher_partials(State2 { x: 0.0, y: 0.0 }, &p(0.2, 0.0));
        assert_eq!(h.f.d3[0][0][0], -6.0);
        assert_eq!(h.g.d2[1][1], 0.0);
        assert_relative_eq!(h.g.d2[0][0], 0.0041 * 5.276 * 5.276, epsilon = 1e-15);
        assert_relative_eq!(h.g.d2[0][0], 0.114128, epsilon = 1e-6);
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let q = ImprovedParams::defaults(0.315, 0.0155).unwrap();
        let s = q.to_json();
        assert!(s.contains("\"phi_ext\""));
        assert!(s.contains("\"I0\""));
        assert_eq!(ImprovedParams::from_json(&s).unwrap(), q);
        assert!(ImprovedParams::from_json(r#"{"gamma":0.3,"I0":0.0,"bogus":1}"#).is_err());
        assert!(OriginalParams::from_json(r#"{"gamma":0.3,"I":0.0,"I0":1}"#).is_err());
        assert!(OriginalParams::from_json(r#"{"gamma":-0.3,"I":0.0}"#).is_err());
        let o = OriginalParams::from_json(r#"{"gamma":0.3,"I":0.01}"#).unwrap();
        assert_eq!(o.a(), DEFAULT_A);
    }

    #[test]
    fn validation_rejects_nonpositive() {
        assert!(OriginalParams::new(0.0, 5.0, 0.2, 0.0).is_err());
        assert!(OriginalParams::new(0.004, -1.0, 0.2, 0.0).is_err());
        assert!(OriginalParams::with_defaults(0.0, 0.0).is_err());
        assert!(ImprovedParams::defaults(0.3, 0.0)
            .unwrap()
            .with_omega(0.0)
            .is_err());
    }
}
