//! Complex special functions: Gamma, the Riemann zeta function, the
//! completed xi function and its rotated form on the critical line.  These
//! serve as the independent reference side for every transform identity in
//! the crate, so they are built from classical algorithms with explicit
//! accuracy thresholds rather than from the kernels under test.

use crate::numerics::KahanSum;
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::fmt;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Lanczos parameters (g = 7, 9 coefficients).  Relative error of the
/// rational part is below 1e-15 on the right half plane.
pub(crate) const LANCZOS_G: f64 = 7.0;
pub(crate) const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Stieltjes constants gamma_0 .. gamma_8 for the Laurent expansion of zeta
/// about its pole.  Nine terms keep the truncation below 1e-17 for
/// |w - 1| < 0.1.
const STIELTJES: [f64; 9] = [
    0.577_215_664_901_532_86,
    -0.072_815_845_483_676_725,
    -0.009_690_363_192_872_318_4,
    0.002_053_834_420_303_345_9,
    0.002_325_370_065_467_300_0,
    0.000_793_323_817_301_062_70,
    -0.000_238_769_345_430_199_60,
    -0.000_527_289_567_057_751_04,
    -0.000_352_123_353_803_039_50,
];

/// B_{2j} / (2j)! for j = 1..=16, the Euler-Maclaurin correction weights.
const BERNOULLI_OVER_FACTORIAL: [f64; 16] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_810e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252_2e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_546e-23,
    2.267_952_452_337_656_5e-24,
    -5.744_790_668_872_202_4e-26,
];

#[derive(Clone, Debug, PartialEq)]
pub enum SpecFunError {
    /// Evaluation requested exactly at a pole of the function.
    Pole { at: Complex64 },
    /// The result magnitude exceeds the double precision range.
    Overflow { at: Complex64 },
}

impl fmt::Display for SpecFunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecFunError::Pole { at } => write!(f, "pole at {}", at),
            SpecFunError::Overflow { at } => {
                write!(f, "value exceeds double precision range at {}", at)
            }
        }
    }
}

impl std::error::Error for SpecFunError {}

/// `sin(pi z)` with the real part reduced modulo 1 before multiplication by
/// pi, so the result keeps full relative accuracy near the zeros at the
/// integers (where the naive `(pi * z).sin()` loses everything).
fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = z.re - k;
    let (sr, cr) = (PI * r).sin_cos();
    let sign = if (k % 2.0).abs() < 0.5 { 1.0 } else { -1.0 };
    let b = PI * z.im;
    Complex64::new(sign * sr * b.cosh(), sign * cr * b.sinh())
}

/// Gamma on the complex plane.  Lanczos approximation for `Re z >= 1/2`,
/// reflection through `sin(pi z)` otherwise.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(SpecFunError::Pole { at: z });
    }
    if z.re < 0.5 {
        let g = gamma(ONE - z)?;
        let v = Complex64::new(PI, 0.0) / (sin_pi(z) * g);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(SpecFunError::Overflow { at: z });
        }
        return Ok(v);
    }
    let zm1 = z - ONE;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += Complex64::new(c, 0.0) / (zm1 + Complex64::new(i as f64, 0.0));
    }
    let t = zm1 + Complex64::new(LANCZOS_G + 0.5, 0.0);
    let log_gamma =
        Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z - Complex64::new(0.5, 0.0)) * t.ln() - t
            + acc.ln();
    if log_gamma.re > 709.0 {
        return Err(SpecFunError::Overflow { at: z });
    }
    Ok(log_gamma.exp())
}

/// Number of series terms for the accelerated alternating sum so that its
/// certified error stays below 1e-17 times the result scale.  The growth
/// with |Im s| follows the classical bound `exp(pi |t| / 2) (1 + 2|t|)`
/// against the acceleration factor `(3 + sqrt 8)^{-n}`.
fn alternating_term_count(s: Complex64, denom_norm: f64) -> usize {
    let t = s.im.abs();
    let needed =
        (41.45 + 0.5 * PI * t + (1.0 + 2.0 * t).ln() + (1.0 / denom_norm.min(1.0)).ln()) / 1.7627;
    (needed.ceil() as usize).clamp(24, 380)
}

/// Chebyshev-weighted coefficients d_0..d_n of the accelerated alternating
/// series.  d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!).
fn chebyshev_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = term;
    d.push(nf * acc);
    for i in 0..n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d.push(nf * acc);
    }
    d
}

/// Accelerated alternating series for zeta, valid for `Re s >= 1/2` away
/// from the zeros of `1 - 2^{1-s}`.
fn zeta_alternating(s: Complex64, denom: Complex64, n: usize) -> Complex64 {
    let d = chebyshev_weights(n);
    let dn = d[n];
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (k, &dk) in d.iter().enumerate().take(n) {
        let base = (-s * ((k as f64) + 1.0).ln()).exp();
        let term = base * (dk - dn);
        let signed = if k % 2 == 0 { term } else { -term };
        re.add(signed.re);
        im.add(signed.im);
    }
    -Complex64::new(re.value(), im.value()) / (dn * denom)
}

/// Euler-Maclaurin evaluation of zeta for `Re s >= 1/2`.  Used where the
/// alternating-series denominator `1 - 2^{1-s}` nearly vanishes; also the
/// cross-check partner for the alternating path.
fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let n = 48.0_f64.max((1.6 * s.im.abs()).ceil());
    let ln_n = n.ln();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut k = 1.0;
    while k < n {
        let term = (-s * k.ln()).exp();
        re.add(term.re);
        im.add(term.im);
        k += 1.0;
    }
    let pole_term = ((ONE - s) * ln_n).exp() / (s - ONE);
    let half_term = (-s * ln_n).exp() * 0.5;
    re.add(pole_term.re);
    im.add(pole_term.im);
    re.add(half_term.re);
    im.add(half_term.im);
    let mut poch = s;
    let mut npow = (-(s + ONE) * ln_n).exp();
    let n2 = n * n;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = poch * npow * b;
        re.add(term.re);
        im.add(term.im);
        let shift = 2.0 * (j as f64) + 1.0;
        poch *= (s + Complex64::new(shift, 0.0)) * (s + Complex64::new(shift + 1.0, 0.0));
        npow /= Complex64::new(n2, 0.0);
    }
    Complex64::new(re.value(), im.value())
}

fn zeta_upper_half(s: Complex64) -> Complex64 {
    let denom = ONE - (Complex64::new(LN_2, 0.0) * (ONE - s)).exp();
    let dn = denom.norm();
    // The alternating-series error is amplified by 1/|1 - 2^{1-s}|, so the
    // lattice of near zeros of that factor is handed to Euler-Maclaurin.
    if dn < 1e-2 {
        zeta_euler_maclaurin(s)
    } else {
        zeta_alternating(s, denom, alternating_term_count(s, dn))
    }
}

/// Riemann zeta.  Direct summation branch for `Re s >= 1/2`; the reflection
/// formula `zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)`
/// otherwise, with the product `sin(pi s/2) zeta(1-s)` arranged as
/// `[sin(pi s/2)/(-s)] * [(-s) zeta(1-s)]` so that `s = 0` stays finite.
pub fn zeta(s: Complex64) -> Result<Complex64, SpecFunError> {
    if s == ONE {
        return Err(SpecFunError::Pole { at: s });
    }
    if s.re >= 0.5 {
        return Ok(zeta_upper_half(s));
    }
    let shifted = zeta_shifted(ONE - s)?;
    let ratio = if s.re == 0.0 && s.im == 0.0 {
        Complex64::new(-0.5 * PI, 0.0)
    } else {
        sin_pi(s * 0.5) / (-s)
    };
    let g = gamma(ONE - s)?;
    let two_pow = (s * LN_2).exp();
    let pi_pow = ((s - ONE) * PI.ln()).exp();
    let v = two_pow * pi_pow * g * ratio * shifted;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(SpecFunError::Overflow { at: s });
    }
    Ok(v)
}

/// The pole-free product `(w - 1) zeta(w)`.  Near `w = 1` this is the
/// Stieltjes series `1 + sum_n (-1)^n gamma_n (w-1)^{n+1} / n!`, which keeps
/// the removable singularity analytic instead of a 0 * inf fight.
pub fn zeta_shifted(w: Complex64) -> Result<Complex64, SpecFunError> {
    let d = w - ONE;
    if d.norm() < 0.1 {
        let mut acc = ONE;
        let mut power = d;
        let mut factorial = 1.0;
        for (n, &g) in STIELTJES.iter().enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += power * (sign * g / factorial);
            power *= d;
            factorial *= (n as f64) + 1.0;
        }
        return Ok(acc);
    }
    Ok(d * zeta(w)?)
}

/// The completed, entire combination
/// `pi^{-w/2} Gamma(w/2 + 1) (w - 1) zeta(w)`, symmetric under
/// `w -> 1 - w`.  The values at the removable points are
/// `xi_completed(0) = xi_completed(1) = 1/2`.
pub fn xi_completed(w: Complex64) -> Result<Complex64, SpecFunError> {
    // At negative even integers the Gamma pole meets a zero of zeta; the
    // reflected argument sits safely in the right half plane.
    if w.im == 0.0 && w.re <= -2.0 && (w.re * 0.5).fract() == 0.0 {
        return xi_completed(ONE - w);
    }
    let half = w * 0.5;
    let g = gamma(half + ONE)?;
    let prefactor = (-half * PI.ln()).exp();
    Ok(prefactor * g * zeta_shifted(w)?)
}

/// The completed function rotated onto the critical line:
/// `big_xi(z) = xi_completed(1/2 + i z)`.  Even in `z`, real on the real
/// axis, and its real zeros are the critical-line zeros of zeta.
pub fn big_xi(z: Complex64) -> Result<Complex64, SpecFunError> {
    xi_completed(Complex64::new(0.5, 0.0) + Complex64::new(0.0, 1.0) * z)
}
