//! Heat kernel traces on discrete cycles, their theta function scaling
//! limits, an annihilation operator that completes those traces, and the
//! Mellin / Laplace identities tying the completed objects to the even
//! completed zeta function.  Everything is plain `f64` / `Complex64`
//! arithmetic with certified truncation and explicit error types; no
//! global state, no panics on bad input.

pub mod archimedean;
pub mod cycle;
pub mod logkernel;
pub mod numerics;
pub mod params;
pub mod report;
pub mod specfun;
pub mod theta;
pub mod totalpos;
pub mod zeros;

pub use numerics::{KahanSum, NumericsError, QuadratureSpec, TruncationBudget};
pub use params::KernelParams;
pub use report::{AuditReport, CheckRow, CheckStatus, Provenance};
pub use specfun::SpecFunError;
