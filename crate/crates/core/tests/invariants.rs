//! Randomized structural invariants.  Each property is an identity the
//! library promises for every admissible input, not just the tabulated
//! examples, so shrunk counterexamples here point at real defects.

use num_complex::Complex64;
use proptest::prelude::*;
use thetatrace_core::{cycle, logkernel, specfun, theta, totalpos};
use thetatrace_core::{KahanSum, KernelParams, TruncationBudget};

fn budget() -> TruncationBudget {
    TruncationBudget::with_eps(1e-15)
}

fn params_strategy() -> impl Strategy<Value = KernelParams> {
    (1.0..4.0f64, 0.25..2.0f64).prop_map(|(l, d)| KernelParams::new(l, d).expect("valid geometry"))
}

proptest! {
    #[test]
    fn theta_inversion_holds_everywhere(u in 0.05..20.0f64) {
        let b = budget();
        let direct = theta::jacobi_theta(u, &b).unwrap().value;
        let reflected = theta::jacobi_theta(1.0 / u, &b).unwrap().value / u.sqrt();
        prop_assert!((direct - reflected).abs() <= 1e-12 * direct);
    }

    #[test]
    fn trace_routes_agree_for_random_geometry(
        params in params_strategy(),
        t in 0.05..20.0f64,
    ) {
        let b = budget();
        let space = theta::trace_limit(&params, t, &b).unwrap().value;
        let frequency = theta::trace_limit_dual(&params, t, &b).unwrap().value;
        prop_assert!((space - frequency).abs() <= 1e-12 * space.abs());
    }

    #[test]
    fn completed_trace_stays_positive(
        params in params_strategy(),
        t in 0.5..20.0f64,
    ) {
        let b = budget();
        let v = theta::completed_trace(&params, t, &b).unwrap().value;
        prop_assert!(v > 0.0, "completed trace {} at t={}", v, t);
    }

    #[test]
    fn log_kernel_routes_agree(x in -2.0..3.0f64) {
        // The mixture form of the kernel and the rescaled symmetric trace
        // are independent evaluation routes for the same function.
        let p = KernelParams::self_dual_canonical();
        let b = budget();
        let mixture = logkernel::phi(&p, x, &b).unwrap();
        let traced = (0.25 * x).exp() * theta::sym_kernel(&p, x.exp(), &b).unwrap().value;
        prop_assert!((mixture - traced).abs() <= 1e-12 * (1.0 + mixture.abs()));
    }

    #[test]
    fn rescaled_time_inverts_exactly_when_self_dual(
        params in params_strategy(),
        t in 0.05..20.0f64,
    ) {
        let product = params.jacobi_time(t) * params.jacobi_time(1.0 / t);
        let gap = (params.length() * params.length()
            - 4.0 * std::f64::consts::PI * params.diffusion())
        .abs();
        if gap == 0.0 {
            prop_assert!((product - 1.0).abs() <= 4.0 * f64::EPSILON);
        } else if gap > 0.1 {
            prop_assert!((product - 1.0).abs() > 1e-3);
        }
        let sd = KernelParams::self_dual_canonical();
        let exact = sd.jacobi_time(t) * sd.jacobi_time(1.0 / t);
        prop_assert!((exact - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn theta_capital_is_positive(t in 0.01..10.0f64) {
        let b = budget();
        let v = theta::theta_capital(t, &b).unwrap().value;
        prop_assert!(v > 0.0, "Theta(t) = {} at t={}", v, t);
    }

    #[test]
    fn kernel_stays_under_its_tail_envelopes(
        params in params_strategy(),
        x in -2.0..30.0f64,
    ) {
        let b = budget();
        let v = logkernel::phi(&params, x, &b).unwrap();
        prop_assert!(v > 0.0, "Phi({}) = {}", x, v);
        let cert = logkernel::tail_cert(&params);
        let slack = 1.0 + 1e-12;
        if x >= 0.0 {
            prop_assert!(v <= cert.c_plus * (-0.25 * x).exp() * slack);
        } else {
            let ln_bound = cert.c_minus.ln() - 0.75 * x - cert.c * (-x).exp();
            prop_assert!(v <= ln_bound.exp() * slack);
        }
    }

    #[test]
    fn cycle_rows_are_stochastic_and_symmetric(
        n in 2usize..64,
        a in 0.1..5.0f64,
        t in 0.01..10.0f64,
    ) {
        let spec = cycle::CycleSpec::new(n, a).unwrap();
        let mut row = KahanSum::new();
        for j in 0..n as i64 {
            let p = cycle::heat_kernel_cycle(&spec, t, j).unwrap();
            // The spectral sum reaches far sites only through cancellation,
            // so probabilities below roundoff may come out barely negative.
            prop_assert!(p >= -1e-13, "p_t(0,{}) = {}", j, p);
            row.add(p);
        }
        prop_assert!((row.value() - 1.0).abs() <= 1e-12);
        for j in 1..n as i64 {
            let here = cycle::heat_kernel_cycle(&spec, t, j).unwrap();
            let there = cycle::heat_kernel_cycle(&spec, t, n as i64 - j).unwrap();
            prop_assert!(here.to_bits() == there.to_bits());
        }
    }

    #[test]
    fn gauge_identity_holds_for_random_instances(
        (m, xs, ys, a) in (1usize..=3).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(0.1..2.0f64, n), n),
            prop::collection::vec(-2.0..2.0f64, n),
            prop::collection::vec(-2.0..2.0f64, n),
            -0.2..0.2f64,
        )),
    ) {
        let residual = totalpos::gauge_check(&m, a, &xs, &ys).unwrap();
        prop_assert!(residual <= 1e-12, "gauge residual {}", residual);
    }

    #[test]
    fn first_order_minors_are_positive(
        u in 0.2..5.0f64,
        x in -3.0..3.0f64,
        y in -3.0..3.0f64,
    ) {
        // Positivity is only observable while exp(-u e^{y-x}) stays above
        // the subnormal floor; beyond it the kernel underflows to zero.
        prop_assume!(u * (y - x).exp() < 700.0);
        let b = budget();
        let sample = totalpos::minor_det(
            &totalpos::MinorKernel::BuildingBlock { u },
            &[x],
            &[y],
            &b,
        )
        .unwrap();
        prop_assert!(sample.det > 0.0);
    }

    #[test]
    fn gamma_recurrence_holds_off_the_poles(
        x in 0.2..5.0f64,
        y in -10.0..10.0f64,
    ) {
        let z = Complex64::new(x, y);
        let step = specfun::gamma(z + 1.0).unwrap();
        let scaled = z * specfun::gamma(z).unwrap();
        prop_assert!((step - scaled).norm() <= 1e-11 * step.norm());
    }

    #[test]
    fn compensated_summation_tracks_exact_arithmetic(
        raw in prop::collection::vec(
            (0.5..1.0f64, -25..=25i32, any::<bool>()),
            1..200,
        ),
    ) {
        // Terms are dyadic with exponents bounded below, so scaling by
        // 2^78 makes every one an exact integer and i128 accumulation is
        // exact arithmetic.
        let xs: Vec<f64> = raw
            .iter()
            .map(|&(m, e, neg)| if neg { -m } else { m } * 2f64.powi(e))
            .collect();
        let scale = 2f64.powi(78);
        let mut exact: i128 = 0;
        let mut magnitude = 0.0f64;
        for &x in &xs {
            let v = x * scale;
            prop_assert!(v.fract() == 0.0);
            exact += v as i128;
            magnitude += x.abs();
        }
        let reference = exact as f64 / scale;
        let mut acc = KahanSum::new();
        for &x in &xs {
            acc.add(x);
        }
        let bound = 2.0 * f64::EPSILON * magnitude + 2.0 * f64::EPSILON * reference.abs();
        prop_assert!(
            (acc.value() - reference).abs() <= bound,
            "kahan {} vs exact {}",
            acc.value(),
            reference
        );
    }
}
