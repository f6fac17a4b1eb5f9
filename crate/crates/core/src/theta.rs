//! Theta series kernels: the classical Jacobi theta function, the scaling
//! limit trace of the cycle walk in both of its representations, the
//! completed trace with the short-time singularity removed, its symmetrized
//! form, and the fourth-order polynomial-weighted series produced by the
//! completion operator.  Every value carries the number of series terms
//! used and a certified bound on the omitted tail.

use crate::numerics::{
    geometric_tail_bound, theta_terms_needed, KahanSum, NumericsError, TruncationBudget,
};
use crate::params::KernelParams;

/// A series evaluation together with its truncation evidence.
#[derive(Clone, Copy, Debug)]
pub struct ThetaValue {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// `sum_{n >= 1} exp(-q n^2)` over exactly `m` terms.
fn gaussian_partial_sum(q: f64, m: usize) -> f64 {
    let mut acc = KahanSum::new();
    for n in 1..=m {
        let nf = n as f64;
        acc.add((-q * nf * nf).exp());
    }
    acc.value()
}

/// Jacobi theta `sum_{n in Z} exp(-pi n^2 u) = 1 + 2 sum_{n >= 1}`.
/// Evaluated directly for every `u` so that the inversion identity stays a
/// genuine cross-check instead of the definition of one branch.
pub fn jacobi_theta(u: f64, budget: &TruncationBudget) -> Result<ThetaValue, NumericsError> {
    if !(u > 0.0) {
        return Err(NumericsError::Domain {
            what: "theta argument must be positive",
        });
    }
    // The two-sided series doubles the tail, so ask for half the target.
    let half = TruncationBudget {
        eps_abs: 0.5 * budget.eps_abs,
        max_terms: budget.max_terms,
    };
    let m = theta_terms_needed(std::f64::consts::PI, u, &half)?;
    let q = std::f64::consts::PI * u;
    Ok(ThetaValue {
        value: 1.0 + 2.0 * gaussian_partial_sum(q, m),
        terms_used: m,
        tail_bound: 2.0 * geometric_tail_bound(q, m),
    })
}

/// Frequency side representation of the scaling limit trace:
/// `K_L(t) = 1 + 2 sum_{n >= 1} exp(-(4 pi^2 D / L^2) n^2 t)`.
pub fn trace_limit(
    params: &KernelParams,
    t: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "trace time must be positive",
        });
    }
    let rate = params.frequency_rate();
    let half = TruncationBudget {
        eps_abs: 0.5 * budget.eps_abs,
        max_terms: budget.max_terms,
    };
    let m = theta_terms_needed(rate, t, &half)?;
    let q = rate * t;
    Ok(ThetaValue {
        value: 1.0 + 2.0 * gaussian_partial_sum(q, m),
        terms_used: m,
        tail_bound: 2.0 * geometric_tail_bound(q, m),
    })
}

/// Space side (Poisson summed) representation of the same trace:
/// `K_L(t) = (L / sqrt(4 pi D t)) sum_{m in Z} exp(-alpha m^2 / t)` with
/// `alpha = L^2 / (4D)`.
pub fn trace_limit_dual(
    params: &KernelParams,
    t: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "trace time must be positive",
        });
    }
    let prefactor = params.singular_prefactor(t);
    // The prefactor scales the tail, so the inner target shrinks by it.
    let inner_eps = 0.5 * budget.eps_abs / prefactor.max(1.0);
    let inner = TruncationBudget {
        eps_abs: inner_eps,
        max_terms: budget.max_terms,
    };
    let m = theta_terms_needed(params.alpha(), 1.0 / t, &inner)?;
    let q = params.alpha() / t;
    Ok(ThetaValue {
        value: prefactor * (1.0 + 2.0 * gaussian_partial_sum(q, m)),
        terms_used: m,
        tail_bound: 2.0 * prefactor * geometric_tail_bound(q, m),
    })
}

/// Fluctuation part of the limiting trace, `K_L(t) - 1`, summed without
/// the constant term.  The full trace rounds `1 + tiny` at ulp(1) once the
/// exponential sum drops below 1e-16, and a later subtraction or second
/// difference amplifies that rounding; summing the exponentials alone
/// keeps full relative precision at every time.
pub fn trace_fluctuation(
    params: &KernelParams,
    t: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "trace time must be positive",
        });
    }
    let rate = params.frequency_rate();
    let half = TruncationBudget {
        eps_abs: 0.5 * budget.eps_abs,
        max_terms: budget.max_terms,
    };
    let m = theta_terms_needed(rate, t, &half)?;
    let q = rate * t;
    Ok(ThetaValue {
        value: 2.0 * gaussian_partial_sum(q, m),
        terms_used: m,
        tail_bound: 2.0 * geometric_tail_bound(q, m),
    })
}

/// The completed trace `K_L(t) - L / sqrt(4 pi D t)`.  For rescaled time
/// `t' = 4 pi D t / L^2 < 1` the subtraction would cancel catastrophically,
/// so the value is taken from the space side sum over `m != 0`, whose terms
/// are all positive.  For `t' >= 1` the frequency form is used, where the
/// subtracted prefactor is at most 1.
pub fn completed_trace(
    params: &KernelParams,
    t: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "trace time must be positive",
        });
    }
    let t_prime = params.jacobi_time(t);
    if t_prime < 1.0 {
        let prefactor = params.singular_prefactor(t);
        let inner_eps = 0.5 * budget.eps_abs / prefactor.max(1.0);
        let inner = TruncationBudget {
            eps_abs: inner_eps,
            max_terms: budget.max_terms,
        };
        let m = theta_terms_needed(params.alpha(), 1.0 / t, &inner)?;
        let q = params.alpha() / t;
        Ok(ThetaValue {
            value: prefactor * 2.0 * gaussian_partial_sum(q, m),
            terms_used: m,
            tail_bound: 2.0 * prefactor * geometric_tail_bound(q, m),
        })
    } else {
        let rate = params.frequency_rate();
        let half = TruncationBudget {
            eps_abs: 0.5 * budget.eps_abs,
            max_terms: budget.max_terms,
        };
        let m = theta_terms_needed(rate, t, &half)?;
        let q = rate * t;
        Ok(ThetaValue {
            value: (1.0 - params.singular_prefactor(t)) + 2.0 * gaussian_partial_sum(q, m),
            terms_used: m,
            tail_bound: 2.0 * geometric_tail_bound(q, m),
        })
    }
}

/// `t^{-1/2}` times the completed trace.
pub fn sym_kernel(
    params: &KernelParams,
    t: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "trace time must be positive",
        });
    }
    let scale = t.sqrt().recip();
    // Shrink the inner target so the scaled tail still honors the request.
    let inner = TruncationBudget {
        eps_abs: budget.eps_abs * t.sqrt().min(1.0),
        max_terms: budget.max_terms,
    };
    let base = completed_trace(params, t, &inner)?;
    Ok(ThetaValue {
        value: scale * base.value,
        terms_used: base.terms_used,
        tail_bound: scale * base.tail_bound,
    })
}

/// `sum_{n >= 1} (c4 n^4 + c2 n^2 + c0) exp(-c n^2)` with a certified tail.
///
/// For `n >= max(M+1, 2/sqrt(c))` the term ratio is bounded by
/// `exp(4/n - c(2n+1)) <= exp(-c(2n+1)/2)`, giving a geometric tail
/// certificate with the absolute-coefficient envelope as its head.
pub(crate) fn theta_poly_sum(
    c: f64,
    c4: f64,
    c2: f64,
    c0: f64,
    budget: &TruncationBudget,
) -> Result<ThetaValue, NumericsError> {
    if !(c > 0.0) {
        return Err(NumericsError::Domain {
            what: "polynomial theta sum needs a positive decay rate",
        });
    }
    let envelope = |x: f64| c4.abs() * x.powi(4) + c2.abs() * x * x + c0.abs();
    let tail_cert = |m: usize| -> f64 {
        let mf = m as f64;
        let head = envelope(mf + 1.0) * (-c * (mf + 1.0) * (mf + 1.0)).exp();
        let denom = -(-0.5 * c * (2.0 * mf + 1.0)).exp_m1();
        head / denom
    };
    let eps = budget.eps_abs;
    if !(eps > 0.0) {
        return Err(NumericsError::Domain {
            what: "truncation target must be positive",
        });
    }
    let base = if eps >= 1.0 {
        1.0
    } else {
        ((1.0 / eps).ln() / c).sqrt().ceil()
    };
    let mut m = base.max((4.0 / c).sqrt().ceil()).max(1.0) as usize;
    if m > budget.max_terms {
        return Err(NumericsError::BudgetExceeded {
            max_terms: budget.max_terms,
            tail_bound: tail_cert(budget.max_terms),
        });
    }
    while tail_cert(m) > eps {
        m += 1;
        if m > budget.max_terms {
            return Err(NumericsError::BudgetExceeded {
                max_terms: budget.max_terms,
                tail_bound: tail_cert(budget.max_terms),
            });
        }
    }
    let mut acc = KahanSum::new();
    for n in 1..=m {
        let nf = n as f64;
        acc.add((c4 * nf.powi(4) + c2 * nf * nf + c0) * (-c * nf * nf).exp());
    }
    Ok(ThetaValue {
        value: acc.value(),
        terms_used: m,
        tail_bound: tail_cert(m),
    })
}

/// The polynomial-weighted theta series produced by applying the completion
/// operator to the self dual trace:
/// `sum_{n >= 1} (2 pi^2 n^4 t^{3/2} - 3 pi n^2 t^{1/2}) exp(-pi n^2 t)`.
///
/// For `t < 1` the exact inversion law `value(t) = t^{-3/2} value(1/t)` is
/// applied through the expanded dual series, which is cancellation free
/// there (all coefficients positive for `t < 2 pi / 3`), while the direct
/// series loses every significant digit below `t ~ 0.1`.
pub fn theta_capital(t: f64, budget: &TruncationBudget) -> Result<ThetaValue, NumericsError> {
    if !(t > 0.0) {
        return Err(NumericsError::Domain {
            what: "argument must be positive",
        });
    }
    let pi = std::f64::consts::PI;
    if t >= 1.0 {
        theta_poly_sum(
            pi * t,
            2.0 * pi * pi * t.powf(1.5),
            -3.0 * pi * t.sqrt(),
            0.0,
            budget,
        )
    } else {
        theta_poly_sum(
            pi / t,
            2.0 * pi * pi / (t * t * t),
            -3.0 * pi / (t * t),
            0.0,
            budget,
        )
    }
}
