//! Exact heat kernel of the continuous-time nearest-neighbor walk on a
//! discrete circle, its rescaled trace, and the empirical audit of the
//! convergence rate towards the scaling limit trace.

use crate::numerics::{KahanSum, NumericsError, TruncationBudget};
use crate::params::KernelParams;
use crate::report::{AuditReport, CheckRow, Provenance};
use crate::theta;
use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum CycleError {
    Precondition {
        what: &'static str,
    },
    /// The rate regression is degenerate (fewer than two distinct sizes or
    /// non finite error logs).
    Fit {
        what: &'static str,
    },
    Budget(NumericsError),
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleError::Precondition { what } => write!(f, "precondition violated: {}", what),
            CycleError::Fit { what } => write!(f, "degenerate fit: {}", what),
            CycleError::Budget(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for CycleError {}

impl From<NumericsError> for CycleError {
    fn from(e: NumericsError) -> Self {
        CycleError::Budget(e)
    }
}

/// A cycle of `n` sites with per-edge jump rate `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleSpec {
    n: usize,
    a: f64,
}

impl CycleSpec {
    pub fn new(n: usize, a: f64) -> Result<Self, CycleError> {
        if n == 0 {
            return Err(CycleError::Precondition {
                what: "cycle needs at least one site",
            });
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(CycleError::Precondition {
                what: "jump rate must be positive and finite",
            });
        }
        Ok(Self { n, a })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.a
    }
}

/// Transition probability `p_t(0, j)` of the walk, via the spectral sum
/// `(1/N) sum_k exp(-2at(1 - cos(2 pi k / N))) cos(2 pi k j / N)`.
///
/// Frequencies are paired `k <-> N-k` and the angle representative is
/// reduced to `min(r, N-r)` before the cosine, which makes the spatial
/// symmetry `p_t(0, j) = p_t(0, N-j)` hold bit for bit.
pub fn heat_kernel_cycle(spec: &CycleSpec, t: f64, j: i64) -> Result<f64, CycleError> {
    if !(t >= 0.0) {
        return Err(CycleError::Precondition {
            what: "time must be non negative",
        });
    }
    let n = spec.n;
    let j = j.rem_euclid(n as i64) as usize;
    let nf = n as f64;
    let mut acc = KahanSum::new();
    // k = 0 mode.
    acc.add(1.0);
    let half = n / 2;
    for k in 1..=half {
        if 2 * k == n && k > 0 {
            // Unpaired Nyquist mode for even N.
            let eig = 2.0 * spec.a * t * 2.0;
            let r = (k * j) % n;
            let r = r.min(n - r);
            let angle = 2.0 * PI * (r as f64) / nf;
            acc.add((-eig).exp() * angle.cos());
            break;
        }
        let eig = 2.0 * spec.a * t * (1.0 - (2.0 * PI * (k as f64) / nf).cos());
        let r = (k * j) % n;
        let r = r.min(n - r);
        let angle = 2.0 * PI * (r as f64) / nf;
        acc.add(2.0 * (-eig).exp() * angle.cos());
    }
    Ok(acc.value() / nf)
}

/// The rescaled on-diagonal trace `N p_{s^2 t}(0, 0)` with `a = D` and
/// `s = N / L`, which converges to the scaling limit trace as `N` grows.
pub fn trace_scaled(n: usize, params: &KernelParams, t: f64) -> Result<f64, CycleError> {
    if n < 2 {
        return Err(CycleError::Precondition {
            what: "rescaled trace needs at least two sites",
        });
    }
    if !(t > 0.0) {
        return Err(CycleError::Precondition {
            what: "time must be positive",
        });
    }
    let nf = n as f64;
    let s = nf / params.length();
    let tau = s * s * t;
    let a = params.diffusion();
    // N * (1/N) sum_k cancels; sum the exponentials directly, paired.
    let mut acc = KahanSum::new();
    acc.add(1.0);
    let half = n / 2;
    for k in 1..=half {
        let eig = 2.0 * a * tau * (1.0 - (2.0 * PI * (k as f64) / nf).cos());
        if 2 * k == n {
            acc.add((-eig).exp());
        } else {
            acc.add(2.0 * (-eig).exp());
        }
    }
    Ok(acc.value())
}

/// Measured sup-errors `e(N) = max_t |trace_scaled - K_L(t)|` over a time
/// grid, together with a least squares fit of the decay exponent `rho` in
/// `e(N) ~ N^{-rho}`.  The audit passes when `rho >= 0.75`, a quarter
/// below the proven `O(1/N)` rate to absorb fit noise.
pub fn ulclt_audit(
    ns: &[usize],
    ts: &[f64],
    params: &KernelParams,
) -> Result<AuditReport, CycleError> {
    if ns.is_empty() {
        return Err(CycleError::Precondition {
            what: "need at least one cycle size",
        });
    }
    if ns.iter().any(|&n| n < 16) {
        return Err(CycleError::Precondition {
            what: "cycle sizes below 16 are outside the audit regime",
        });
    }
    if ts.is_empty() || ts.iter().any(|&t| !(t > 0.0)) {
        return Err(CycleError::Precondition {
            what: "time grid must be positive",
        });
    }
    let budget = TruncationBudget::default();
    let mut report = AuditReport::new("ulclt_rate");
    report.metadata.insert("sizes".into(), format!("{:?}", ns));
    report.metadata.insert(
        "time_grid".into(),
        format!("[{}, {}] x{}", ts[0], ts[ts.len() - 1], ts.len()),
    );

    let mut errors = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut worst = 0.0f64;
        for &t in ts {
            let finite = trace_scaled(n, params, t)?;
            let limit = theta::trace_limit(params, t, &budget)?.value;
            worst = worst.max((finite - limit).abs());
        }
        errors.push(worst);
        report.push(CheckRow::audit(
            format!("sup_error_n_{}", n),
            format!("N={}", n),
            format!("{}", worst),
            worst,
            Provenance::Derived,
        ));
    }

    // Least squares slope of log e against log N; rho is its negation.
    let logs: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors.iter())
        .map(|(&n, &e)| ((n as f64).ln(), e.ln()))
        .collect();
    if logs.iter().any(|&(_, le)| !le.is_finite()) {
        return Err(CycleError::Fit {
            what: "error log is not finite (exact agreement or underflow)",
        });
    }
    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx < 1e-12 {
        return Err(CycleError::Fit {
            what: "cycle sizes do not vary",
        });
    }
    let rho = -(sxy / sxx);
    report.push(CheckRow::residual_check(
        "rate_exponent",
        format!("fit over {} sizes", ns.len()),
        ">= 0.75",
        format!("{}", rho),
        if rho >= 0.75 { 0.0 } else { 0.75 - rho },
        0.0,
        Provenance::Derived,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense matrix exponential by scaling and squaring with a Taylor core.
    /// Independent of the spectral route: builds the generator explicitly.
    fn matrix_exponential_kernel(n: usize, a: f64, t: f64) -> Vec<f64> {
        let dim = n;
        let idx = |i: usize, j: usize| i * dim + j;
        let mut q = vec![0.0f64; dim * dim];
        for i in 0..dim {
            q[idx(i, i)] = -2.0 * a;
            q[idx(i, (i + 1) % dim)] += a;
            q[idx(i, (i + dim - 1) % dim)] += a;
        }
        if dim == 1 {
            // Single state: generator is 0.
            return vec![1.0];
        }
        // Scale so the Taylor series converges rapidly.
        let norm: f64 = 4.0 * a * t;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
        let scale = 0.5f64.powi(squarings as i32);
        let mut base = vec![0.0f64; dim * dim];
        for (pos, v) in base.iter_mut().enumerate() {
            *v = q[pos] * t * scale;
        }
        // exp(base) via 24 Taylor terms.
        let mut result = vec![0.0f64; dim * dim];
        for i in 0..dim {
            result[idx(i, i)] = 1.0;
        }
        let mut term = result.clone();
        for order in 1..=24 {
            let mut next = vec![0.0f64; dim * dim];
            for i in 0..dim {
                for k in 0..dim {
                    let tik = term[idx(i, k)];
                    if tik == 0.0 {
                        continue;
                    }
                    for j in 0..dim {
                        next[idx(i, j)] += tik * base[idx(k, j)];
                    }
                }
            }
            for v in next.iter_mut() {
                *v /= order as f64;
            }
            for pos in 0..dim * dim {
                result[pos] += next[pos];
            }
            term = next;
        }
        for _ in 0..squarings {
            let mut sq = vec![0.0f64; dim * dim];
            for i in 0..dim {
                for k in 0..dim {
                    let rik = result[idx(i, k)];
                    if rik == 0.0 {
                        continue;
                    }
                    for j in 0..dim {
                        sq[idx(i, j)] += rik * result[idx(k, j)];
                    }
                }
            }
            result = sq;
        }
        result
    }

    #[test]
    fn single_site_is_trivial() {
        let spec = CycleSpec::new(1, 2.0).unwrap();
        for &t in &[0.0, 0.5, 10.0] {
            assert_eq!(heat_kernel_cycle(&spec, t, 0).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_site_closed_form() {
        let spec = CycleSpec::new(2, 1.0).unwrap();
        let v = heat_kernel_cycle(&spec, 0.5, 0).unwrap();
        let expected = 0.5 * (1.0 + (-2.0f64).exp());
        assert!((v - expected).abs() < 1e-14, "{} vs {}", v, expected);
        assert!((expected - 0.567_667_641_618_306_4).abs() < 1e-12);
    }

    #[test]
    fn spectral_matches_matrix_exponential_oracle() {
        for &n in &[3usize, 5, 8, 12, 16] {
            for &(a, t) in &[(1.0, 0.3), (0.7, 1.1), (2.5, 0.05)] {
                let spec = CycleSpec::new(n, a).unwrap();
                let dense = matrix_exponential_kernel(n, a, t);
                for j in 0..n {
                    let spectral = heat_kernel_cycle(&spec, t, j as i64).unwrap();
                    assert!(
                        (spectral - dense[j]).abs() <= 1e-10,
                        "N={} a={} t={} j={}: {} vs {}",
                        n,
                        a,
                        t,
                        j,
                        spectral,
                        dense[j]
                    );
                }
            }
        }
    }

    #[test]
    fn rows_are_stochastic() {
        for &n in &[2usize, 7, 16, 33, 64] {
            let spec = CycleSpec::new(n, 1.3).unwrap();
            for &t in &[0.0, 0.2, 1.0, 5.0] {
                let mut total = KahanSum::new();
                for j in 0..n {
                    let p = heat_kernel_cycle(&spec, t, j as i64).unwrap();
                    // Spectral cancellation can leave ~1e-17 noise where the
                    // true probability underflows.
                    assert!((-1e-13..=1.0 + 1e-13).contains(&p));
                    total.add(p);
                }
                assert!(
                    (total.value() - 1.0).abs() <= 1e-12,
                    "mass {} at N={} t={}",
                    total.value(),
                    n,
                    t
                );
            }
        }
    }

    #[test]
    fn spatial_symmetry_is_exact() {
        for &n in &[5usize, 8, 21, 64] {
            let spec = CycleSpec::new(n, 0.9).unwrap();
            for j in 1..n {
                let a = heat_kernel_cycle(&spec, 0.7, j as i64).unwrap();
                let b = heat_kernel_cycle(&spec, 0.7, (n - j) as i64).unwrap();
                assert_eq!(a, b, "bitwise symmetry broken at N={} j={}", n, j);
            }
        }
    }

    #[test]
    fn negative_sites_wrap() {
        let spec = CycleSpec::new(9, 1.0).unwrap();
        let a = heat_kernel_cycle(&spec, 0.4, -2).unwrap();
        let b = heat_kernel_cycle(&spec, 0.4, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn semigroup_property() {
        for &n in &[4usize, 16, 64] {
            let spec = CycleSpec::new(n, 1.0).unwrap();
            let (t, s) = (0.3, 0.45);
            let direct = heat_kernel_cycle(&spec, t + s, 0).unwrap();
            let mut composed = KahanSum::new();
            for j in 0..n {
                let pt = heat_kernel_cycle(&spec, t, j as i64).unwrap();
                let ps = heat_kernel_cycle(&spec, s, j as i64).unwrap();
                composed.add(pt * ps);
            }
            assert!(
                (direct - composed.value()).abs() <= 1e-11,
                "semigroup residual at N={}",
                n
            );
        }
    }

    #[test]
    fn scaled_trace_approaches_theta() {
        let p = KernelParams::self_dual_canonical();
        let theta_one = theta::jacobi_theta(1.0, &TruncationBudget::default())
            .unwrap()
            .value;
        let t256 = trace_scaled(256, &p, 1.0).unwrap();
        assert!((t256 - theta_one).abs() < 2e-3, "{} vs {}", t256, theta_one);
        let t512 = trace_scaled(512, &p, 1.0).unwrap();
        assert!((t512 - theta_one).abs() < (t256 - theta_one).abs());
    }

    #[test]
    fn scaled_trace_long_time_limit() {
        let p = KernelParams::new(3.0, 0.8).unwrap();
        for &n in &[16usize, 64] {
            let v = trace_scaled(n, &p, 50.0).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "long-time trace {}", v);
        }
    }

    #[test]
    fn rate_audit_passes_on_dyadic_sizes() {
        let p = KernelParams::self_dual_canonical();
        let ts: Vec<f64> = (0..=15).map(|i| 0.5 + 0.1 * (i as f64)).collect();
        let report = ulclt_audit(&[64, 128, 256], &ts, &p).unwrap();
        assert!(!report.failed(), "rate audit failed: {:?}", report.checks);
        // Errors must decrease monotonically.
        let sup: Vec<f64> = report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("sup_error"))
            .map(|c| c.residual)
            .collect();
        assert_eq!(sup.len(), 3);
        assert!(sup[0] > sup[1] && sup[1] > sup[2]);
    }

    #[test]
    fn degenerate_fit_is_an_error() {
        let p = KernelParams::self_dual_canonical();
        let ts = [0.5, 1.0];
        match ulclt_audit(&[64, 64], &ts, &p) {
            Err(CycleError::Fit { .. }) => {}
            other => panic!("expected FitError, got {:?}", other),
        }
    }

    #[test]
    fn bad_inputs_are_preconditions() {
        let p = KernelParams::self_dual_canonical();
        assert!(matches!(
            ulclt_audit(&[64, 128], &[0.5, -1.0], &p),
            Err(CycleError::Precondition { .. })
        ));
        assert!(matches!(
            ulclt_audit(&[8, 64], &[0.5], &p),
            Err(CycleError::Precondition { .. })
        ));
        assert!(matches!(
            trace_scaled(1, &p, 1.0),
            Err(CycleError::Precondition { .. })
        ));
        assert!(matches!(
            CycleSpec::new(0, 1.0),
            Err(CycleError::Precondition { .. })
        ));
        assert!(matches!(
            CycleSpec::new(5, 0.0),
            Err(CycleError::Precondition { .. })
        ));
    }
}
