//! Adaptive Simpson quadrature for smooth, exponentially damped radial integrands.

use crate::coulomb::CoulombState;
use crate::{Error, Result};

/// Domain truncation and error control for the correction integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub r_max: f64,
    /// Absolute tolerance on the integral.
    pub tolerance: f64,
    /// Upper bound on the total number of interval bisections.
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_TOLERANCE: f64 = 1e-14;
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 1 << 20;

    /// Cut the domain where the envelope r^(2N+6)·exp(−2βr) has fallen below
    /// 1e−20 of its peak; the extra powers cover the r², r³ and W² weights.
    pub fn for_state(state: &CoulombState) -> Self {
        let power = 2.0 * f64::from(state.qn.principal()) + 6.0;
        let two_beta = 2.0 * state.beta;
        let log_env = |r: f64| power * r.ln() - two_beta * r;
        let peak_r = power / two_beta;
        let peak = log_env(peak_r);
        let target = peak + (1e-20f64).ln();
        let mut r = peak_r;
        let step = 0.25 / state.beta;
        while log_env(r) > target {
            r += step;
        }
        Self {
            r_max: r,
            tolerance: Self::DEFAULT_TOLERANCE,
            max_subdivisions: Self::DEFAULT_MAX_SUBDIVISIONS,
        }
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, ..self }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

const INITIAL_PANELS: usize = 32;
const MAX_DEPTH: u32 = 48;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

/// Integrate `f` over [a, b] to absolute tolerance `tol`.
///
/// The interval is first split into equal panels, each refined by bisection
/// until the Simpson estimates on the halves agree with the whole to 15·tol
/// (local tolerance halves at each level); accepted panels carry the
/// Richardson-corrected value.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, max_subdivisions: usize) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain {
            quantity: "integration limit",
            value: if a.is_finite() { b } else { a },
            reason: "limits must be finite",
        });
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    if b < a {
        let inner = integrate(f, b, a, tol, max_subdivisions)?;
        return Ok(Integral {
            value: -inner.value,
            ..inner
        });
    }

    let width = (b - a) / INITIAL_PANELS as f64;
    let mut stack: Vec<Panel> = Vec::with_capacity(64);
    for k in (0..INITIAL_PANELS).rev() {
        let pa = a + k as f64 * width;
        let pb = if k + 1 == INITIAL_PANELS { b } else { pa + width };
        let fa = f(pa);
        let fb = f(pb);
        let fm = f(0.5 * (pa + pb));
        stack.push(Panel {
            a: pa,
            b: pb,
            fa,
            fm,
            fb,
            whole: simpson(pa, pb, fa, fm, fb),
            tol: tol / INITIAL_PANELS as f64,
            depth: 0,
        });
    }

    let mut value = 0.0;
    let mut compensation = 0.0;
    let mut error_estimate = 0.0;
    let mut subdivisions = 0usize;

    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left + right - p.whole;

        if diff.abs() <= 15.0 * p.tol || p.depth >= MAX_DEPTH || (m - p.a) <= f64::EPSILON * m.abs() {
            if !diff.is_finite() {
                return Err(Error::QuadratureFailure {
                    subdivisions,
                    estimate: f64::INFINITY,
                });
            }
            // Kahan sum keeps the thousands of small panel contributions exact enough
            let term = left + right + diff / 15.0 - compensation;
            let t = value + term;
            compensation = (t - value) - term;
            value = t;
            error_estimate += diff.abs() / 15.0;
            continue;
        }

        subdivisions += 1;
        if subdivisions > max_subdivisions {
            return Err(Error::QuadratureFailure {
                subdivisions,
                estimate: error_estimate + diff.abs(),
            });
        }
        let depth = p.depth + 1;
        let tol = 0.5 * p.tol;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol,
            depth,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol,
            depth,
        });
    }

    Ok(Integral {
        value,
        error_estimate,
        subdivisions,
    })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 1000).unwrap();
        assert_relative_eq!(r.value, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn damped_moment() {
        // ∫0^∞ x^4 e^{-x} dx = 24
        let r = integrate(|x| x.powi(4) * (-x).exp(), 0.0, 80.0, 1e-12, 100_000).unwrap();
        assert_relative_eq!(r.value, 24.0, max_relative = 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let fwd = integrate(|x| x.sin(), 0.0, 1.0, 1e-12, 1000).unwrap().value;
        let rev = integrate(|x| x.sin(), 1.0, 0.0, 1e-12, 1000).unwrap().value;
        assert_eq!(fwd, -rev);
        assert_eq!(integrate(|x| x, 3.0, 3.0, 1e-12, 10).unwrap().value, 0.0);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let err = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, 1e-15, 10).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }
}
