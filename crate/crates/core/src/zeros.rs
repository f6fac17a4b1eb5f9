//! Argument-principle counting of zeros minus poles over axis-aligned
//! rectangles, and real-axis root location by a bisection/secant hybrid.
//! Phase is accumulated by unwrapping along adaptively refined boundary
//! samples, so no derivative of the target function is needed.

use num_complex::Complex64;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum ZerosError {
    /// The endpoints do not straddle a sign change.
    NoBracket,
    /// Some boundary sample is within 1e-8 of a zero (or is not finite),
    /// so the winding number is not trustworthy.
    BoundaryTooClose {
        min_modulus: f64,
    },
    /// Adaptive refinement hit its cap before consecutive phase steps
    /// dropped below pi/2, or the total winding missed an integer.
    UnwrapFailure {
        what: &'static str,
    },
    Domain {
        what: &'static str,
    },
}

impl fmt::Display for ZerosError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZerosError::NoBracket => write!(f, "endpoints do not bracket a sign change"),
            ZerosError::BoundaryTooClose { min_modulus } => {
                write!(f, "boundary modulus {} below safe floor", min_modulus)
            }
            ZerosError::UnwrapFailure { what } => write!(f, "phase unwrap failed: {}", what),
            ZerosError::Domain { what } => write!(f, "domain error: {}", what),
        }
    }
}

impl std::error::Error for ZerosError {}

/// Closed axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, ZerosError> {
        if !(re_min < re_max && im_min < im_max)
            || ![re_min, re_max, im_min, im_max]
                .iter()
                .all(|v| v.is_finite())
        {
            return Err(ZerosError::Domain {
                what: "rectangle needs finite re_min < re_max and im_min < im_max",
            });
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Image under the involution `s -> 2 center - s` restricted to the
    /// real direction combined with imaginary negation, i.e. the map
    /// `s -> 2 center - conj(s)` is NOT used here: this is the full point
    /// reflection `s -> 2 center - s`.
    pub fn reflected_through(&self, center_re: f64) -> Rectangle {
        Rectangle {
            re_min: 2.0 * center_re - self.re_max,
            re_max: 2.0 * center_re - self.re_min,
            im_min: -self.im_max,
            im_max: -self.im_min,
        }
    }

    /// Mirror image across the real axis.
    pub fn conjugated(&self) -> Rectangle {
        Rectangle {
            re_min: self.re_min,
            re_max: self.re_max,
            im_min: -self.im_max,
            im_max: -self.im_min,
        }
    }

    fn corners(&self) -> [Complex64; 5] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
            Complex64::new(self.re_min, self.im_min),
        ]
    }
}

pub const BOUNDARY_MODULUS_FLOOR: f64 = 1e-8;
pub const EDGE_EVAL_CAP: usize = 1 << 14;
const PHASE_STEP_LIMIT: f64 = std::f64::consts::FRAC_PI_2;
const WINDING_INTEGER_TOL: f64 = 1e-3;

fn boundary_value<G>(g: &G, z: Complex64, min_mod: &mut f64) -> Result<Complex64, ZerosError>
where
    G: Fn(Complex64) -> Option<Complex64>,
{
    let v = g(z).ok_or(ZerosError::Domain {
        what: "function evaluation failed on the boundary",
    })?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(ZerosError::Domain {
            what: "boundary sample is not finite",
        });
    }
    let m = v.norm();
    if m < *min_mod {
        *min_mod = m;
    }
    if m < BOUNDARY_MODULUS_FLOOR {
        return Err(ZerosError::BoundaryTooClose { min_modulus: m });
    }
    Ok(v)
}

/// Winding count `N - P` of `g` along the rectangle boundary, positively
/// oriented.  Phase differences between consecutive boundary samples are
/// kept below pi/2 by bisecting offending segments; the summed winding
/// must land within 1e-3 of an integer.
pub fn argument_count<G>(g: G, rect: &Rectangle, samples_per_edge: usize) -> Result<i64, ZerosError>
where
    G: Fn(Complex64) -> Option<Complex64>,
{
    if samples_per_edge < 2 {
        return Err(ZerosError::Domain {
            what: "need at least two samples per edge",
        });
    }
    if samples_per_edge > EDGE_EVAL_CAP {
        return Err(ZerosError::Domain {
            what: "samples per edge exceed the refinement cap",
        });
    }
    let corners = rect.corners();
    let mut min_mod = f64::INFINITY;
    let mut total_phase = 0.0f64;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[e + 1];
        let point = |t: f64| a + (b - a) * t;
        let mut evals = 0usize;
        let mut value_at = |t: f64, min_mod: &mut f64| -> Result<Complex64, ZerosError> {
            evals += 1;
            if evals > EDGE_EVAL_CAP {
                return Err(ZerosError::UnwrapFailure {
                    what: "edge refinement cap reached",
                });
            }
            boundary_value(&g, point(t), min_mod)
        };
        // Seed segments at uniform parameters, then bisect any segment
        // whose phase step is too large.  Segment order does not affect
        // the sum.
        let mut stack: Vec<(f64, Complex64, f64, Complex64)> =
            Vec::with_capacity(samples_per_edge + 16);
        let mut prev_t = 0.0;
        let mut prev_v = value_at(0.0, &mut min_mod)?;
        for k in 1..=samples_per_edge {
            let t = k as f64 / samples_per_edge as f64;
            let v = value_at(t, &mut min_mod)?;
            stack.push((prev_t, prev_v, t, v));
            prev_t = t;
            prev_v = v;
        }
        while let Some((ta, va, tb, vb)) = stack.pop() {
            let step = (vb / va).arg();
            if step.abs() < PHASE_STEP_LIMIT {
                total_phase += step;
                continue;
            }
            let tm = 0.5 * (ta + tb);
            if tm <= ta || tm >= tb {
                return Err(ZerosError::UnwrapFailure {
                    what: "segment collapsed below floating point resolution",
                });
            }
            let vm = value_at(tm, &mut min_mod)?;
            stack.push((ta, va, tm, vm));
            stack.push((tm, vm, tb, vb));
        }
    }
    let winding = total_phase / (2.0 * std::f64::consts::PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > WINDING_INTEGER_TOL {
        return Err(ZerosError::UnwrapFailure {
            what: "total winding did not land on an integer",
        });
    }
    Ok(rounded as i64)
}

/// Root of a continuous real function inside a sign-change bracket, by a
/// secant step whenever it lands strictly inside the bracket and makes
/// progress, with bisection as the fallback that guarantees convergence.
pub fn find_real_zero<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, ZerosError>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(ZerosError::Domain {
            what: "bracket endpoints must be finite with lo < hi",
        });
    }
    if !(tol > 0.0) {
        return Err(ZerosError::Domain {
            what: "tolerance must be positive",
        });
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(ZerosError::NoBracket);
    }
    let mut force_bisect = false;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut c = if force_bisect {
            mid
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        // Keep the iterate strictly interior so the bracket always
        // shrinks.
        let margin = 0.125 * (b - a);
        if !c.is_finite() || c <= a + margin * 0.01 || c >= b - margin * 0.01 {
            c = mid;
        }
        let fc = f(c);
        if fc == 0.0 {
            return Ok(c);
        }
        let old_width = b - a;
        if fa * fc < 0.0 {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
        // If the secant step failed to halve the bracket, bisect next
        // round; this is what makes the hybrid globally convergent.
        force_bisect = (b - a) > 0.5 * old_width;
    }
    Ok(0.5 * (a + b))
}
