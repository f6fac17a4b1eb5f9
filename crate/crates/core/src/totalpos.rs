//! Total positivity machinery: minor determinants of translation kernels,
//! the exact exponential gauge identity, the Gamma-transform building block
//! `e^{-u e^{-x}}`, and randomized sign audits with persisted witnesses.

use crate::archimedean::MellinPoint;
use crate::logkernel::{self, LogKernelError};
use crate::numerics::{integrate, KahanSum, NumericsError, QuadratureSpec, TruncationBudget};
use crate::params::KernelParams;
use crate::report::{AuditReport, CheckRow, Provenance};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::Cell;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum TpError {
    Monotonicity { what: &'static str },
    Size { n: usize, max: usize },
    Domain { what: &'static str },
    Kernel(LogKernelError),
    Numerics(NumericsError),
}

impl fmt::Display for TpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TpError::Monotonicity { what } => write!(f, "monotonicity violated: {}", what),
            TpError::Size { n, max } => write!(f, "size {} exceeds supported maximum {}", n, max),
            TpError::Domain { what } => write!(f, "domain error: {}", what),
            TpError::Kernel(e) => write!(f, "{}", e),
            TpError::Numerics(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for TpError {}

impl From<LogKernelError> for TpError {
    fn from(e: LogKernelError) -> Self {
        TpError::Kernel(e)
    }
}

impl From<NumericsError> for TpError {
    fn from(e: NumericsError) -> Self {
        TpError::Numerics(e)
    }
}

/// Translation kernel whose minors are under study.
#[derive(Clone, Debug)]
pub enum MinorKernel {
    Phi(KernelParams),
    BuildingBlock { u: f64 },
}

impl MinorKernel {
    fn validate(&self) -> Result<(), TpError> {
        if let MinorKernel::BuildingBlock { u } = self {
            if !(*u > 0.0) || !u.is_finite() {
                return Err(TpError::Domain {
                    what: "building block parameter must be positive and finite",
                });
            }
        }
        Ok(())
    }

    fn eval(&self, x: f64, budget: &TruncationBudget) -> Result<f64, TpError> {
        match self {
            MinorKernel::Phi(p) => Ok(logkernel::phi(p, x, budget)?),
            MinorKernel::BuildingBlock { u } => Ok(building_block(*u, x)),
        }
    }

    fn describe(&self) -> String {
        match self {
            MinorKernel::Phi(p) => format!("phi(L={}, D={})", p.length(), p.diffusion()),
            MinorKernel::BuildingBlock { u } => format!("building_block(u={})", u),
        }
    }
}

/// The Gamma-transform building block `e^{-u e^{-x}}`; its negative second
/// log-derivative makes it log-concave, and its bilateral Laplace transform
/// is `u^{-s} Gamma(s)`.
pub fn building_block(u: f64, x: f64) -> f64 {
    (-u * (-x).exp()).exp()
}

/// One evaluated minor: the determinant of `(kernel(x_i - y_j))` and its
/// row-max normalized companion used for sign classification.
#[derive(Clone, Debug)]
pub struct MinorSample {
    pub n: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub det: f64,
    pub normalized_det: f64,
}

pub const MINOR_SIZE_MAX: usize = 8;

fn check_strictly_increasing(v: &[f64], what: &'static str) -> Result<(), TpError> {
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(TpError::Monotonicity { what });
    }
    Ok(())
}

/// Determinant of a small dense matrix by partial-pivoting LU after each
/// row is divided by its max magnitude.  Returns the determinant of the
/// normalized matrix and the product of the row maxima; the raw
/// determinant is their product.
fn det_row_scaled(mut m: Vec<Vec<f64>>) -> (f64, f64) {
    let n = m.len();
    let mut scale_product = 1.0f64;
    for row in m.iter_mut() {
        let mx = row.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if mx == 0.0 {
            return (0.0, 0.0);
        }
        for v in row.iter_mut() {
            *v /= mx;
        }
        scale_product *= mx;
    }
    let mut sign = 1.0f64;
    let mut normalized = 1.0f64;
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if m[i][k].abs() > m[piv][k].abs() {
                piv = i;
            }
        }
        if m[piv][k] == 0.0 {
            return (0.0, scale_product);
        }
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            let f = row[k] / pivot_row[k];
            for j in k..n {
                row[j] -= f * pivot_row[j];
            }
        }
        normalized *= pivot_row[k];
    }
    (sign * normalized, scale_product)
}

/// Minor of the kernel over strictly increasing node sequences.
pub fn minor_det(
    kernel: &MinorKernel,
    xs: &[f64],
    ys: &[f64],
    budget: &TruncationBudget,
) -> Result<MinorSample, TpError> {
    kernel.validate()?;
    let n = xs.len();
    if n == 0 || n != ys.len() || n > MINOR_SIZE_MAX {
        return Err(TpError::Size {
            n: n.max(ys.len()),
            max: MINOR_SIZE_MAX,
        });
    }
    check_strictly_increasing(xs, "row nodes must be strictly increasing")?;
    check_strictly_increasing(ys, "column nodes must be strictly increasing")?;
    let mut m = vec![vec![0.0f64; n]; n];
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            m[i][j] = kernel.eval(x - y, budget)?;
        }
    }
    let (normalized_det, scale) = det_row_scaled(m);
    Ok(MinorSample {
        n,
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        det: normalized_det * scale,
        normalized_det,
    })
}

/// Relative residual of the exponential gauge identity
/// `det(e^{-a(x_i - y_j)} M_ij) = e^{-a sum x + a sum y} det(M)`,
/// both sides evaluated independently.
pub fn gauge_check(m: &[Vec<f64>], a: f64, xs: &[f64], ys: &[f64]) -> Result<f64, TpError> {
    let n = m.len();
    if n == 0 || n > MINOR_SIZE_MAX || xs.len() != n || ys.len() != n {
        return Err(TpError::Size {
            n: n.max(xs.len()).max(ys.len()),
            max: MINOR_SIZE_MAX,
        });
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(TpError::Size { n, max: n });
    }
    let mut scaled = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            scaled[i][j] = (-a * (xs[i] - ys[j])).exp() * m[i][j];
        }
    }
    let (dn, ds) = det_row_scaled(scaled);
    let lhs = dn * ds;
    let (rn, rs) = det_row_scaled(m.to_vec());
    let det_m = rn * rs;
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    let rhs = (-a * sum_x + a * sum_y).exp() * det_m;
    Ok((lhs - rhs).abs() / (1.0 + det_m.abs()))
}

/// Bilateral Laplace transform of the building block by quadrature; the
/// closed form `u^{-s} Gamma(s)` is its test oracle.
pub fn building_block_laplace(
    u: f64,
    s: Complex64,
    spec: &QuadratureSpec,
) -> Result<MellinPoint, TpError> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(TpError::Domain {
            what: "building block parameter must be positive and finite",
        });
    }
    if !(s.re > 0.05) {
        return Err(TpError::Domain {
            what: "transform needs Re s > 0.05",
        });
    }
    let trapped: Cell<Option<NumericsError>> = Cell::new(None);
    let integrand = |x: f64| -> Complex64 {
        let k = building_block(u, x);
        if k == 0.0 {
            // Weight on the far left would overflow against an
            // underflowed kernel.
            return Complex64::new(0.0, 0.0);
        }
        (-s * x).exp() * k
    };
    let (value, quad_error) = integrate(integrand, spec).map_err(|e| {
        if let Some(inner) = trapped.take() {
            TpError::Numerics(inner)
        } else {
            TpError::Numerics(e)
        }
    })?;
    Ok(MellinPoint {
        s,
        value,
        quad_error,
    })
}

const AUDIT_WINDOW_DEFAULT: f64 = 3.0;
const NEGATIVE_MINOR_THRESHOLD: f64 = -1e-9;
const WITNESS_REEVAL_EPS: f64 = 1e-18;
const CHUNK: usize = 256;
const WITNESS_ROW_CAP: usize = 8;

fn draw_sorted<R: Rng>(rng: &mut R, n: usize, window: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-window..window)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if v.windows(2).all(|w| w[1] > w[0]) {
            return v;
        }
    }
}

/// Multilinear expansion probe for minors of a finite positive sum of
/// building blocks: draws monotone node configurations, expands the sum
/// minor over per-column kernel assignments, and records the worst member
/// of each determinant population alongside the expansion self-consistency.
/// Signs are recorded, not asserted.
pub fn sum_expansion_probe(
    us: &[f64],
    cs: &[f64],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<AuditReport, TpError> {
    if us.len() != cs.len() || us.len() < 2 {
        return Err(TpError::Domain {
            what: "need at least two mixture components with matching weights",
        });
    }
    if us.iter().any(|&u| !(u > 0.0)) {
        return Err(TpError::Domain {
            what: "mixture rates must be positive",
        });
    }
    if cs.iter().any(|&c| !(c >= 0.0)) {
        return Err(TpError::Domain {
            what: "mixture weights must be non negative",
        });
    }
    if n == 0 || n > 5 {
        return Err(TpError::Size { n, max: 5 });
    }
    let k = us.len();
    let window = AUDIT_WINDOW_DEFAULT;
    let budget = TruncationBudget::default();
    let sum_kernel = |x: f64| -> f64 {
        let mut acc = KahanSum::new();
        for (&u, &c) in us.iter().zip(cs.iter()) {
            acc.add(c * building_block(u, x));
        }
        acc.value()
    };

    let mut min_sum = f64::INFINITY;
    let mut min_sum_witness = (Vec::new(), Vec::new());
    let mut min_mixed = f64::INFINITY;
    let mut min_mixed_witness = (Vec::new(), Vec::new(), Vec::new());
    let mut worst_residual = 0.0f64;

    let chunks = samples.div_ceil(CHUNK);
    let mut remaining = samples;
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let in_chunk = remaining.min(CHUNK);
        remaining -= in_chunk;
        for _ in 0..in_chunk {
            let xs = draw_sorted(&mut rng, n, window);
            let ys = draw_sorted(&mut rng, n, window);
            // Sum-kernel minor through the shared engine.
            let mut m = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = sum_kernel(xs[i] - ys[j]);
                }
            }
            let (sum_norm, sum_scale) = det_row_scaled(m);
            let sum_det = sum_norm * sum_scale;
            if sum_norm < min_sum {
                min_sum = sum_norm;
                min_sum_witness = (xs.clone(), ys.clone());
            }
            // Every column assignment with positive weight.
            let mut assignment = vec![0usize; n];
            let mut expansion = KahanSum::new();
            loop {
                let weight: f64 = assignment.iter().map(|&a| cs[a]).product();
                if weight > 0.0 {
                    let mut mm = vec![vec![0.0f64; n]; n];
                    for j in 0..n {
                        let u = us[assignment[j]];
                        for i in 0..n {
                            mm[i][j] = building_block(u, xs[i] - ys[j]);
                        }
                    }
                    let (mixed_norm, mixed_scale) = det_row_scaled(mm);
                    expansion.add(weight * mixed_norm * mixed_scale);
                    if mixed_norm < min_mixed {
                        min_mixed = mixed_norm;
                        min_mixed_witness = (
                            xs.clone(),
                            ys.clone(),
                            assignment.iter().map(|&a| us[a]).collect(),
                        );
                    }
                }
                // Odometer over the k^n assignments.
                let mut pos = 0;
                loop {
                    if pos == n {
                        break;
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < k {
                        break;
                    }
                    assignment[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
            }
            let residual = (sum_det - expansion.value()).abs() / (1.0 + sum_det.abs());
            worst_residual = worst_residual.max(residual);
        }
    }
    let _ = budget;

    let mut report = AuditReport::new("sum_expansion");
    report.seed = Some(seed);
    report.metadata.insert("rates".into(), format!("{:?}", us));
    report
        .metadata
        .insert("weights".into(), format!("{:?}", cs));
    report.metadata.insert("order".into(), format!("{}", n));
    report
        .metadata
        .insert("samples".into(), format!("{}", samples));
    report
        .metadata
        .insert("window".into(), format!("{}", window));
    report.push(CheckRow::audit(
        "min_sum_minor",
        format!("xs={:?} ys={:?}", min_sum_witness.0, min_sum_witness.1),
        format!("{}", min_sum),
        min_sum,
        Provenance::Derived,
    ));
    report.push(CheckRow::audit(
        "min_mixed_minor",
        format!(
            "xs={:?} ys={:?} column_rates={:?}",
            min_mixed_witness.0, min_mixed_witness.1, min_mixed_witness.2
        ),
        format!("{}", min_mixed),
        min_mixed,
        Provenance::Derived,
    ));
    report.push(CheckRow::residual_check(
        "expansion_consistency",
        "multilinear column expansion",
        "sum minor",
        "weighted mixed minors",
        worst_residual,
        1e-10,
        Provenance::Trivial,
    ));
    Ok(report)
}

/// Randomized minor sign audit.  For order 1 positivity is asserted; for
/// the building block at order 2 near-nonnegativity is asserted via
/// log-concavity; all other populations are recorded with witnesses and
/// no verdict.
pub fn tp_random_audit(
    kernel: &MinorKernel,
    n: usize,
    samples: usize,
    window: f64,
    seed: u64,
    budget: &TruncationBudget,
) -> Result<AuditReport, TpError> {
    kernel.validate()?;
    if n == 0 || n > 6 {
        return Err(TpError::Size { n, max: 6 });
    }
    if !(window > 0.0) || !window.is_finite() {
        return Err(TpError::Domain {
            what: "window must be positive and finite",
        });
    }
    let asserted_floor = match (kernel, n) {
        (_, 1) => Some(0.0),
        (MinorKernel::BuildingBlock { .. }, 2) => Some(-1e-12),
        _ => None,
    };

    let mut worst = f64::INFINITY;
    let mut worst_witness: Option<MinorSample> = None;
    let mut below_threshold: Vec<MinorSample> = Vec::new();
    let mut below_count = 0usize;

    let chunks = samples.div_ceil(CHUNK);
    let mut remaining = samples;
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let in_chunk = remaining.min(CHUNK);
        remaining -= in_chunk;
        for _ in 0..in_chunk {
            let xs = draw_sorted(&mut rng, n, window);
            let ys = draw_sorted(&mut rng, n, window);
            let sample = minor_det(kernel, &xs, &ys, budget)?;
            if sample.normalized_det < worst {
                worst = sample.normalized_det;
                worst_witness = Some(sample.clone());
            }
            if sample.normalized_det < NEGATIVE_MINOR_THRESHOLD {
                // Confirm at a tighter series budget before recording.
                let tight = TruncationBudget {
                    eps_abs: WITNESS_REEVAL_EPS,
                    max_terms: budget.max_terms,
                };
                let confirmed = minor_det(kernel, &xs, &ys, &tight)?;
                if confirmed.normalized_det < NEGATIVE_MINOR_THRESHOLD {
                    below_count += 1;
                    if below_threshold.len() < WITNESS_ROW_CAP {
                        below_threshold.push(confirmed);
                    }
                }
            }
        }
    }

    let mut report = AuditReport::new("tp_minors");
    report.seed = Some(seed);
    report.metadata.insert("kernel".into(), kernel.describe());
    report.metadata.insert("order".into(), format!("{}", n));
    report
        .metadata
        .insert("samples".into(), format!("{}", samples));
    report
        .metadata
        .insert("window".into(), format!("{}", window));
    let witness_text = worst_witness
        .as_ref()
        .map(|w| format!("xs={:?} ys={:?}", w.xs, w.ys))
        .unwrap_or_default();
    match asserted_floor {
        Some(floor) => {
            report.push(CheckRow::residual_check(
                "worst_normalized_minor",
                witness_text,
                format!(">= {}", floor),
                format!("{}", worst),
                (floor - worst).max(0.0),
                0.0,
                Provenance::Derived,
            ));
        }
        None => {
            report.push(CheckRow::audit(
                "worst_normalized_minor",
                witness_text,
                format!("{}", worst),
                (-worst).max(0.0),
                Provenance::Derived,
            ));
        }
    }
    report.push(CheckRow::audit(
        "count_below_threshold",
        format!("threshold {}", NEGATIVE_MINOR_THRESHOLD),
        format!("{}", below_count),
        below_count as f64,
        Provenance::Derived,
    ));
    for (i, w) in below_threshold.iter().enumerate() {
        report.push(CheckRow::audit(
            format!("witness_{}", i),
            format!("xs={:?} ys={:?}", w.xs, w.ys),
            format!("{}", w.normalized_det),
            w.normalized_det.abs(),
            Provenance::Derived,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;
    use crate::specfun;

    fn budget() -> TruncationBudget {
        TruncationBudget::default()
    }

    #[test]
    fn order_one_minor_is_the_kernel_value() {
        let k = MinorKernel::Phi(KernelParams::self_dual_canonical());
        let s = minor_det(&k, &[0.7], &[-0.3], &budget()).unwrap();
        assert!(s.det > 0.0);
        assert_eq!(s.normalized_det, 1.0);
        let direct = logkernel::phi(&KernelParams::self_dual_canonical(), 1.0, &budget()).unwrap();
        assert!((s.det - direct).abs() <= 1e-15 * direct);
    }

    #[test]
    fn two_by_two_building_block_hand_value() {
        let k = MinorKernel::BuildingBlock { u: 1.0 };
        let s = minor_det(&k, &[0.0, 1.0], &[0.0, 1.0], &budget()).unwrap();
        let expected = (-2.0f64).exp() - (-(-1.0f64).exp()).exp() * (-(1.0f64).exp()).exp();
        assert!(
            (s.det - expected).abs() <= 1e-15,
            "{} vs {}",
            s.det,
            expected
        );
        assert!((expected - 0.089_658_323_413_342_66).abs() <= 1e-15);
        assert!(s.det > 0.0);
    }

    #[test]
    fn monotonicity_and_size_guards() {
        let k = MinorKernel::BuildingBlock { u: 1.0 };
        assert!(matches!(
            minor_det(&k, &[0.0, 0.0], &[0.0, 1.0], &budget()),
            Err(TpError::Monotonicity { .. })
        ));
        assert!(matches!(
            minor_det(&k, &[1.0, 0.0], &[0.0, 1.0], &budget()),
            Err(TpError::Monotonicity { .. })
        ));
        let nodes: Vec<f64> = (0..9).map(|i| i as f64).collect();
        assert!(matches!(
            minor_det(&k, &nodes, &nodes, &budget()),
            Err(TpError::Size { .. })
        ));
        assert!(matches!(
            minor_det(&k, &[0.0], &[0.0, 1.0], &budget()),
            Err(TpError::Size { .. })
        ));
        assert!(matches!(
            minor_det(
                &MinorKernel::BuildingBlock { u: 0.0 },
                &[0.0],
                &[0.0],
                &budget()
            ),
            Err(TpError::Domain { .. })
        ));
    }

    #[test]
    fn determinant_engine_matches_cofactor_expansion() {
        fn cofactor_det(m: &[Vec<f64>]) -> f64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut total = 0.0;
            for j in 0..n {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * m[0][j] * cofactor_det(&minor);
            }
            total
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..50 {
                let m: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
                    .collect();
                let (dn, ds) = det_row_scaled(m.clone());
                let lu = dn * ds;
                let co = cofactor_det(&m);
                assert!(
                    (lu - co).abs() <= 1e-12 * (1.0 + co.abs()),
                    "n={}: {} vs {}",
                    n,
                    lu,
                    co
                );
            }
        }
    }

    #[test]
    fn gauge_identity_zero_shift() {
        let m = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let r = gauge_check(&m, 0.0, &[0.0, 1.0], &[0.5, 2.0]).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn gauge_identity_random_population() {
        // Well-scaled population: the exponential factor is kept O(10) so
        // both sides stay within the identity's conditioning regime.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut accepted = 0;
        while accepted < 1000 {
            let n = rng.gen_range(2..=4);
            let m: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let a: f64 = rng.gen_range(-1.0..1.0);
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let spread: f64 = xs.iter().sum::<f64>() - ys.iter().sum::<f64>();
            if (a * spread).abs() > 2.5 {
                continue;
            }
            accepted += 1;
            let r = gauge_check(&m, a, &xs, &ys).unwrap();
            assert!(r <= 1e-12, "residual {}", r);
        }
    }

    #[test]
    fn gauge_identity_spec_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let m: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let xs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ys: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = gauge_check(&m, 0.7, &xs, &ys).unwrap();
            assert!(r <= 1e-12, "residual {}", r);
        }
    }

    #[test]
    fn gauge_identity_rank_one_input() {
        // Rank 1: both sides must be numerically zero.
        let u = [1.0, 2.0, 3.0, 4.0];
        let v = [0.5, -1.0, 2.0, 1.5];
        let m: Vec<Vec<f64>> = u
            .iter()
            .map(|&a| v.iter().map(|&b| a * b).collect())
            .collect();
        let xs = [0.0, 0.5, 1.0, 1.5];
        let ys = [-0.5, 0.0, 0.5, 1.0];
        let r = gauge_check(&m, 0.7, &xs, &ys).unwrap();
        assert!(r <= 1e-14, "residual {}", r);
    }

    #[test]
    fn building_block_pointwise_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let u: f64 = rng.gen_range(0.1..5.0);
            let x: f64 = rng.gen_range(-5.0..10.0);
            let v = building_block(u, x);
            assert!(v > 0.0 && v < 1.0, "u={} x={}: {}", u, x, v);
            let w = building_block(u, x + 0.1);
            assert!(w > v, "not increasing at u={} x={}", u, x);
        }
    }

    #[test]
    fn building_block_transform_examples() {
        let q = QuadratureSpec::realline(1e-11);
        let v = building_block_laplace(1.0, Complex64::new(1.0, 0.0), &q).unwrap();
        assert!((v.value.re - 1.0).abs() <= 1e-10, "{}", v.value);
        assert!(v.value.im.abs() <= 1e-11);
        let v = building_block_laplace(2.0, Complex64::new(0.5, 0.0), &q).unwrap();
        assert!(
            (v.value.re - 1.253_314_137_315_500_3).abs() <= 1e-10,
            "{}",
            v.value
        );
        let v =
            building_block_laplace(std::f64::consts::PI, Complex64::new(1.75, 0.0), &q).unwrap();
        assert!(
            (v.value.re - 0.123_974_618_820_852_7).abs() <= 1e-10,
            "{}",
            v.value
        );
    }

    #[test]
    fn building_block_transform_grid_against_closed_form() {
        let q = QuadratureSpec::realline(1e-11);
        for &u in &[0.5, 1.0, 2.0, 5.0] {
            for &(re, im) in &[(0.1, 0.0), (0.5, 1.0), (1.0, -2.0), (2.0, 0.5), (3.0, 3.0)] {
                let s = Complex64::new(re, im);
                let quad = building_block_laplace(u, s, &q).unwrap().value;
                let closed = specfun::gamma(s).unwrap() * (-s * u.ln()).exp();
                assert!(
                    (quad - closed).norm() <= 1e-10 * (1.0 + closed.norm()),
                    "u={} s={}: {} vs {}",
                    u,
                    s,
                    quad,
                    closed
                );
            }
        }
    }

    #[test]
    fn building_block_transform_guards() {
        let q = QuadratureSpec::realline(1e-11);
        assert!(matches!(
            building_block_laplace(1.0, Complex64::new(0.05, 0.0), &q),
            Err(TpError::Domain { .. })
        ));
        assert!(matches!(
            building_block_laplace(-1.0, Complex64::new(1.0, 0.0), &q),
            Err(TpError::Domain { .. })
        ));
    }

    #[test]
    fn one_term_reduction_composes_to_kernel_transform() {
        // The kernel transform factors exactly as prefactor times the
        // building block transform at the shifted argument times zeta.
        let q = QuadratureSpec::realline(1e-11);
        for params in [
            KernelParams::self_dual_canonical(),
            KernelParams::new(1.0, 1.0).unwrap(),
        ] {
            let alpha = params.alpha();
            let c0 = params.singular_prefactor(1.0);
            let s = Complex64::new(0.3, 0.7);
            let full = logkernel::bilateral_laplace_closed(&params, s).unwrap();
            let bb = building_block_laplace(alpha, s + 0.75, &q).unwrap().value;
            let zeta = specfun::zeta(s * 2.0 + 1.5).unwrap();
            let composed = bb * zeta * 2.0 * c0;
            assert!(
                (full - composed).norm() <= 1e-9 * (1.0 + full.norm()),
                "{} vs {}",
                full,
                composed
            );
        }
    }

    #[test]
    fn expansion_probe_single_component_weights() {
        // Zero weight on the second component reduces to single-kernel
        // minors, which are nonneg to roundoff by log-concavity.
        let report = sum_expansion_probe(&[1.0, 4.0], &[1.0, 0.0], 2, 2000, 42).unwrap();
        assert!(!report.failed());
        let min_mixed = report
            .checks
            .iter()
            .find(|c| c.name == "min_mixed_minor")
            .unwrap();
        assert!(min_mixed.residual >= -1e-12, "{}", min_mixed.residual);
        let min_sum = report
            .checks
            .iter()
            .find(|c| c.name == "min_sum_minor")
            .unwrap();
        assert!(min_sum.residual >= -1e-12, "{}", min_sum.residual);
    }

    #[test]
    fn expansion_probe_two_components() {
        let report = sum_expansion_probe(&[1.0, 4.0], &[1.0, 1.0], 2, 2000, 42).unwrap();
        assert!(!report.failed(), "consistency failed: {:?}", report.checks);
        let consistency = report
            .checks
            .iter()
            .find(|c| c.name == "expansion_consistency")
            .unwrap();
        assert_eq!(consistency.status, CheckStatus::Pass);
        // Both minima are recorded with witnesses; no sign requirement.
        for name in ["min_sum_minor", "min_mixed_minor"] {
            let row = report.checks.iter().find(|c| c.name == name).unwrap();
            assert!(row.residual.is_finite());
            assert!(row.input.contains("xs="));
        }
    }

    #[test]
    fn expansion_probe_pointwise_order() {
        let report = sum_expansion_probe(&[1.0, 4.0], &[1.0, 1.0], 1, 500, 7).unwrap();
        let min_sum = report
            .checks
            .iter()
            .find(|c| c.name == "min_sum_minor")
            .unwrap();
        assert!(min_sum.residual >= 0.0);
        let min_mixed = report
            .checks
            .iter()
            .find(|c| c.name == "min_mixed_minor")
            .unwrap();
        assert!(min_mixed.residual >= 0.0);
    }

    #[test]
    fn expansion_probe_guards() {
        assert!(matches!(
            sum_expansion_probe(&[1.0], &[1.0], 2, 10, 1),
            Err(TpError::Domain { .. })
        ));
        assert!(matches!(
            sum_expansion_probe(&[1.0, 2.0], &[1.0, -1.0], 2, 10, 1),
            Err(TpError::Domain { .. })
        ));
        assert!(matches!(
            sum_expansion_probe(&[1.0, 2.0], &[1.0, 1.0], 6, 10, 1),
            Err(TpError::Size { .. })
        ));
    }

    #[test]
    fn random_audit_order_one_positivity() {
        let k = MinorKernel::Phi(KernelParams::self_dual_canonical());
        let report = tp_random_audit(&k, 1, 1000, 3.0, 7, &budget()).unwrap();
        assert!(!report.failed(), "{:?}", report.checks);
        let worst = report
            .checks
            .iter()
            .find(|c| c.name == "worst_normalized_minor")
            .unwrap();
        assert_eq!(worst.status, CheckStatus::Pass);
    }

    #[test]
    fn random_audit_building_block_order_two() {
        let k = MinorKernel::BuildingBlock { u: 1.0 };
        let report = tp_random_audit(&k, 2, 10_000, 3.0, 7, &budget()).unwrap();
        assert!(!report.failed(), "{:?}", report.checks);
        let worst = report
            .checks
            .iter()
            .find(|c| c.name == "worst_normalized_minor")
            .unwrap();
        assert_eq!(worst.status, CheckStatus::Pass);
    }

    #[test]
    fn random_audit_higher_order_is_observational() {
        let k = MinorKernel::Phi(KernelParams::self_dual_canonical());
        let report = tp_random_audit(&k, 4, 2000, 3.0, 7, &budget()).unwrap();
        let worst = report
            .checks
            .iter()
            .find(|c| c.name == "worst_normalized_minor")
            .unwrap();
        assert_eq!(worst.status, CheckStatus::Audit);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name == "count_below_threshold"));
    }

    #[test]
    fn random_audit_is_deterministic() {
        let k = MinorKernel::Phi(KernelParams::self_dual_canonical());
        let a = tp_random_audit(&k, 3, 1500, 3.0, 99, &budget()).unwrap();
        let b = tp_random_audit(&k, 3, 1500, 3.0, 99, &budget()).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
        let c = tp_random_audit(&k, 3, 1500, 3.0, 100, &budget()).unwrap();
        let jc = serde_json::to_string(&c).unwrap();
        assert_ne!(ja, jc);
    }

    #[test]
    fn random_audit_guards() {
        let k = MinorKernel::Phi(KernelParams::self_dual_canonical());
        assert!(matches!(
            tp_random_audit(&k, 7, 10, 3.0, 1, &budget()),
            Err(TpError::Size { .. })
        ));
        assert!(matches!(
            tp_random_audit(&k, 2, 10, 0.0, 1, &budget()),
            Err(TpError::Domain { .. })
        ));
    }
}
