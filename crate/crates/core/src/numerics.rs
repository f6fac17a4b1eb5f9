//! Low level numerical machinery shared by the rest of the crate:
//! compensated summation, double exponential quadrature on the half line
//! and on the real line, and certified truncation budgets for series of
//! Gaussian type.

use num_complex::Complex64;
use std::fmt;

/// Default refinement depth for the double exponential rules.  Level `l`
/// uses step `2^-l`, so 12 levels reach `h = 1/4096`, far below what a
/// tolerance of `1e-12` needs for analytic integrands.
pub const DEFAULT_QUAD_MAX_LEVEL: u32 = 12;

/// Terms whose magnitude falls below this fraction of the running sum are
/// counted towards the truncation stop of a trapezoid pass.
const TRUNCATION_EPS: f64 = 1e-17;

/// Consecutive negligible terms required before a trapezoid pass stops.
const TRUNCATION_RUN: u32 = 3;

/// The transform variable is clamped so that `exp` never overflows and the
/// abscissa never collapses to zero.
const ABSCISSA_EXP_CAP: f64 = 700.0;

/// Compensated accumulator (Kahan).  Keeps the running error of repeated
/// additions near one ulp of the true sum instead of growing with the term
/// count.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    fn max_abs_component(&self) -> f64 {
        self.re.value().abs().max(self.im.value().abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NumericsError {
    /// The refinement ladder ran out of levels (or hit a non finite sample)
    /// before the error estimate dropped below the target.  Carries the best
    /// value seen so the caller can still report it.
    NonConvergence { value: Complex64, err_estimate: f64 },
    /// A certified truncation point exists but lies beyond the allowed term
    /// count.  `tail_bound` is the certificate at the budget boundary.
    BudgetExceeded { max_terms: usize, tail_bound: f64 },
    /// Input outside the mathematical domain of the routine.
    Domain { what: &'static str },
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericsError::NonConvergence {
                value,
                err_estimate,
            } => write!(
                f,
                "quadrature failed to converge: best estimate {} with error estimate {:.3e}",
                value, err_estimate
            ),
            NumericsError::BudgetExceeded {
                max_terms,
                tail_bound,
            } => write!(
                f,
                "truncation budget of {} terms exhausted (certified tail bound {:.3e})",
                max_terms, tail_bound
            ),
            NumericsError::Domain { what } => write!(f, "domain error: {}", what),
        }
    }
}

impl std::error::Error for NumericsError {}

/// Which double exponential substitution to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    /// `t = exp((pi/2) sinh x)` mapping the real line onto `(0, inf)`.
    /// Handles integrable endpoint singularities at `t = 0`.
    DoubleExponentialHalfline,
    /// The half line rule applied to `t` and `-t` simultaneously, covering
    /// all of `R` for integrands that decay in both directions.
    DoubleExponentialRealline,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub max_level: u32,
    pub target_abs_tol: f64,
}

impl QuadratureSpec {
    pub fn halfline(target_abs_tol: f64) -> Self {
        Self {
            rule: QuadRule::DoubleExponentialHalfline,
            max_level: DEFAULT_QUAD_MAX_LEVEL,
            target_abs_tol,
        }
    }

    pub fn realline(target_abs_tol: f64) -> Self {
        Self {
            rule: QuadRule::DoubleExponentialRealline,
            max_level: DEFAULT_QUAD_MAX_LEVEL,
            target_abs_tol,
        }
    }
}

/// Integrate `f` with the rule in `spec`.  Returns the value together with
/// the final error estimate `|S_l - S_{l-1}|`.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<(Complex64, f64), NumericsError>
where
    F: Fn(f64) -> Complex64,
{
    match spec.rule {
        QuadRule::DoubleExponentialHalfline => refine_levels(&f, spec),
        QuadRule::DoubleExponentialRealline => refine_levels(&|t: f64| f(t) + f(-t), spec),
    }
}

fn refine_levels<G>(g: &G, spec: &QuadratureSpec) -> Result<(Complex64, f64), NumericsError>
where
    G: Fn(f64) -> Complex64,
{
    if !(spec.target_abs_tol >= 0.0) {
        return Err(NumericsError::Domain {
            what: "quadrature tolerance must be non negative",
        });
    }
    let mut h = 1.0;
    let mut s = trapezoid_pass(g, h, false)? * h;
    let mut err = f64::INFINITY;
    for _ in 1..=spec.max_level {
        h *= 0.5;
        let odd = trapezoid_pass(g, h, true)?;
        let s_next = s * 0.5 + odd * h;
        err = (s_next - s).norm();
        s = s_next;
        if err <= spec.target_abs_tol {
            return Ok((s, err));
        }
    }
    Err(NumericsError::NonConvergence {
        value: s,
        err_estimate: err,
    })
}

/// One trapezoid pass at step `h` over the transformed axis.  With
/// `odd_only` set, only odd multiples of `h` are sampled so that a level can
/// reuse the sum of the previous one.  Each direction stops after
/// `TRUNCATION_RUN` consecutive negligible terms or when the transform
/// exponent leaves the representable range.
fn trapezoid_pass<G>(g: &G, h: f64, odd_only: bool) -> Result<Complex64, NumericsError>
where
    G: Fn(f64) -> Complex64,
{
    let mut acc = KahanComplex::default();
    for dir in [1.0f64, -1.0] {
        // The origin is sampled exactly once, on the positive pass.
        let mut j: u64 = if odd_only {
            1
        } else if dir > 0.0 {
            0
        } else {
            1
        };
        let step: u64 = if odd_only { 2 } else { 1 };
        let mut quiet_run = 0u32;
        loop {
            let x = dir * (j as f64) * h;
            let a = std::f64::consts::FRAC_PI_2 * x.sinh();
            if a.abs() > ABSCISSA_EXP_CAP {
                break;
            }
            let t = a.exp();
            let w = std::f64::consts::FRAC_PI_2 * x.cosh() * t;
            let term = g(t) * w;
            if !term.re.is_finite() || !term.im.is_finite() {
                return Err(NumericsError::NonConvergence {
                    value: Complex64::new(f64::NAN, f64::NAN),
                    err_estimate: f64::INFINITY,
                });
            }
            acc.add(term);
            let mag = term.re.abs().max(term.im.abs());
            if mag <= TRUNCATION_EPS * (1.0 + acc.max_abs_component()) {
                quiet_run += 1;
                if quiet_run >= TRUNCATION_RUN {
                    break;
                }
            } else {
                quiet_run = 0;
            }
            j += step;
        }
    }
    Ok(acc.value())
}

/// Absolute truncation target plus a hard cap on the number of series terms.
#[derive(Clone, Copy, Debug)]
pub struct TruncationBudget {
    pub eps_abs: f64,
    pub max_terms: usize,
}

impl Default for TruncationBudget {
    fn default() -> Self {
        Self {
            eps_abs: 1e-15,
            max_terms: 2000,
        }
    }
}

impl TruncationBudget {
    pub fn with_eps(eps_abs: f64) -> Self {
        Self {
            eps_abs,
            ..Self::default()
        }
    }
}

/// Certified upper bound on the Gaussian tail `sum_{n > m} exp(-q n^2)`.
///
/// For `k >= 1` the increments satisfy `(m+1+k)^2 - (m+1)^2 >= k (2m+1)`,
/// so the tail is dominated by the first omitted term times the geometric
/// series with ratio `exp(-q (2m+1))`.
pub fn geometric_tail_bound(q: f64, m: usize) -> f64 {
    if !(q > 0.0) {
        return f64::INFINITY;
    }
    let m = m as f64;
    let head = (-q * (m + 1.0) * (m + 1.0)).exp();
    let denom = -(-q * (2.0 * m + 1.0)).exp_m1();
    head / denom
}

/// Smallest term count `M` such that keeping `n = 1..=M` in a series with
/// Gaussian weights `exp(-rate n^2 t)` leaves a certified tail at most
/// `budget.eps_abs`.  The closed form start point solves
/// `exp(-rate M^2 t) <= eps`; the certificate loop then bumps it until
/// `geometric_tail_bound` actually clears the target.
pub fn theta_terms_needed(
    rate: f64,
    t: f64,
    budget: &TruncationBudget,
) -> Result<usize, NumericsError> {
    let q = rate * t;
    if !(q > 0.0) {
        return Err(NumericsError::Domain {
            what: "Gaussian decay rate must be positive",
        });
    }
    let eps = budget.eps_abs;
    if !(eps > 0.0) {
        return Err(NumericsError::Domain {
            what: "truncation target must be positive",
        });
    }
    let mut m: usize = if eps >= 1.0 {
        1
    } else {
        let guess = ((1.0 / eps).ln() / q).sqrt().ceil();
        if guess >= budget.max_terms as f64 + 1.0 {
            return Err(NumericsError::BudgetExceeded {
                max_terms: budget.max_terms,
                tail_bound: geometric_tail_bound(q, budget.max_terms),
            });
        }
        (guess as usize).max(1)
    };
    // Guard against a ceil that landed one short through rounding.
    while (-q * (m as f64) * (m as f64)).exp() > eps {
        m += 1;
        if m > budget.max_terms {
            return Err(NumericsError::BudgetExceeded {
                max_terms: budget.max_terms,
                tail_bound: geometric_tail_bound(q, budget.max_terms),
            });
        }
    }
    while geometric_tail_bound(q, m) > eps {
        m += 1;
        if m > budget.max_terms {
            return Err(NumericsError::BudgetExceeded {
                max_terms: budget.max_terms,
                tail_bound: geometric_tail_bound(q, budget.max_terms),
            });
        }
    }
    Ok(m)
}
