//! Macroscopic kernel parameters: circle length `L` and diffusion constant
//! `D`, with the derived quantities every kernel representation needs.

use std::f64::consts::PI;
use std::fmt;

/// Relative tolerance deciding whether `L^2 = 4 pi D` holds, i.e. whether
/// the frequency and space representations share the same decay rate.
pub const SELF_DUAL_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamsError {
    what: &'static str,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "precondition violated: {}", self.what)
    }
}

impl std::error::Error for ParamsError {}

/// Length and diffusion constant of the scaling limit.  Immutable once
/// built; all derived rates are computed on demand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    l: f64,
    d: f64,
}

impl KernelParams {
    pub fn new(l: f64, d: f64) -> Result<Self, ParamsError> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(ParamsError {
                what: "length L must be positive and finite",
            });
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(ParamsError {
                what: "diffusion constant D must be positive and finite",
            });
        }
        Ok(Self { l, d })
    }

    /// The canonical self dual point `D = pi`, `L = 2 pi`, where
    /// `L^2 = 4 pi D` holds exactly up to one rounding.
    pub fn self_dual_canonical() -> Self {
        Self { l: 2.0 * PI, d: PI }
    }

    pub fn length(&self) -> f64 {
        self.l
    }

    pub fn diffusion(&self) -> f64 {
        self.d
    }

    /// Decay rate of the space side representation: `alpha = L^2 / (4 D)`.
    pub fn alpha(&self) -> f64 {
        self.l * self.l / (4.0 * self.d)
    }

    /// Decay rate of the frequency side representation:
    /// `4 pi^2 D / L^2 = pi^2 / alpha`.
    pub fn frequency_rate(&self) -> f64 {
        4.0 * PI * PI * self.d / (self.l * self.l)
    }

    /// `|L^2 - 4 pi D| <= 1e-12 L^2`, equivalently `alpha = pi` up to the
    /// same relative tolerance.
    pub fn is_self_dual(&self) -> bool {
        (self.l * self.l - 4.0 * PI * self.d).abs() <= SELF_DUAL_REL_TOL * self.l * self.l
    }

    /// Time rescaled into the standard theta variable:
    /// `t' = 4 pi D t / L^2`.  Self dual parameters give `t' = t`.
    pub fn jacobi_time(&self, t: f64) -> f64 {
        4.0 * PI * self.d * t / (self.l * self.l)
    }

    /// The short-time singular factor `L / sqrt(4 pi D t)`, equal to
    /// `1 / sqrt(t')`.
    pub fn singular_prefactor(&self, t: f64) -> f64 {
        self.l / (4.0 * PI * self.d * t).sqrt()
    }
}
