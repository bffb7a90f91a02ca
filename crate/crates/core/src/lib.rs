//! Bifurcation analysis and simulation of a reduced Morris–Lecar neuron.
//!
//! The two-variable model
//!
//! ```text
//! x' = x²(1 − x) − y + I
//! y' = A·exp(αx) − γy
//! ```
//!
//! is analysed with closed-form fold and Hopf curves, a pseudo-arclength
//! continuation of equilibria, and first Lyapunov coefficients. The
//! three-variable extension adds a periodic current `I₀ sin(ωt)` and a
//! magnetic-flux variable `φ` coupled through the memductance
//! `ρ(φ) = α₁ + 3βφ²`; its responses are simulated and labelled by
//! [`classify`].

pub mod classify;
pub mod codim2;
pub mod continuation;
pub mod equilibria;
pub mod error;
pub mod io;
pub mod model;
pub mod ode;
pub mod simulate;

pub use error::{Error, Result};
