//! Ground-state (n = 0) wavefunction through second order:
//! ψ(r) = χ(r)·u(r) = N·r^(l+1)·exp(P(r)), with P a quintic polynomial.
//!
//! The truncated exponent is not normalizable (p5 > 0 makes exp(P) grow
//! eventually), so every sampler carries a validity radius: the first r > 0
//! where P′(r) turns non-negative.

use crate::coulomb::{CoulombState, QuantumNumbers};
use crate::perturbation::{w1_polynomial, w2_polynomial, CoefficientsABC};
use crate::potential::PhysicalParams;
use crate::{Error, Result};

/// P(r) = p1·r + p2·r² + p3·r³ + p4·r⁴ + p5·r⁵.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialP {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
}

impl PolynomialP {
    pub fn eval(&self, r: f64) -> f64 {
        r * (self.p1 + r * (self.p2 + r * (self.p3 + r * (self.p4 + r * self.p5))))
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.p1 + r * (2.0 * self.p2 + r * (3.0 * self.p3 + r * (4.0 * self.p4 + r * 5.0 * self.p5)))
    }
}

/// Exponent coefficients of the full ground-state wavefunction.
///
/// p1 = −Am/((l+1)ħ²), p2 = (9/4)·(l+2)/(l+1)²·c²dδ⁴, p3 = cdδ⁴/6,
/// p4 = acδ⁴/8, p5 = cδ⁶/10.
pub fn p_coefficients(params: &PhysicalParams, l: u32) -> Result<PolynomialP> {
    params.require_cosine_screening()?;
    let delta = params.screening_delta;
    if !(delta > 0.0) {
        return Err(Error::Degenerate("δ = 0 is the pure Coulomb state; use χ directly"));
    }
    let abc = CoefficientsABC::new(params, l);
    let d = abc.d()?;
    let l1 = f64::from(l + 1);
    let d4 = delta.powi(4);
    Ok(PolynomialP {
        p1: -params.strength_a * params.mass / (l1 * params.hbar * params.hbar),
        p2: 2.25 * f64::from(l + 2) / (l1 * l1) * abc.c * abc.c * d * d4,
        p3: abc.c * d * d4 / 6.0,
        p4: abc.a * abc.c * d4 / 8.0,
        p5: abc.c * delta.powi(6) / 10.0,
    })
}

/// u(r) = exp(−(√(2m)/ħ)·∫₀^r (W⁽¹⁾ + W⁽²⁾) dx) with the polynomial integral done exactly.
pub fn moderating_u(params: &PhysicalParams, l: u32, r: f64) -> Result<f64> {
    params.require_cosine_screening()?;
    if !(r >= 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "radial coordinate must be non-negative",
        });
    }
    Ok(moderating_exponent(params, l, r).exp())
}

fn moderating_exponent(params: &PhysicalParams, l: u32, r: f64) -> f64 {
    let [a1, a2] = w1_polynomial(params, l);
    let [b1, b2, b3, b4] = w2_polynomial(params, l);
    // ∫₀^r Σ c_k x^k dx = Σ c_k r^(k+1)/(k+1)
    let integral = r * r * ((a1 + b1) / 2.0 + r * ((a2 + b2) / 3.0 + r * (b3 / 4.0 + r * b4 / 5.0)));
    -integral / params.hbar_over_sqrt2m()
}

/// Perturbed ground state for one l at fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateWavefunction {
    pub state: CoulombState,
    pub poly: PolynomialP,
    pub r_valid: f64,
}

/// One row of a wavefunction sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSample {
    pub r: f64,
    pub chi: f64,
    pub u: f64,
    pub psi: f64,
}

impl GroundStateWavefunction {
    pub fn new(params: &PhysicalParams, l: u32) -> Result<Self> {
        let poly = p_coefficients(params, l)?;
        let state = CoulombState::new(*params, QuantumNumbers::new(0, l))?;
        let r_valid = validity_radius(&poly, params.bohr_radius());
        Ok(Self { state, poly, r_valid })
    }

    pub fn l(&self) -> u32 {
        self.state.qn.l
    }

    /// ψ(r) = N·r^(l+1)·exp(P(r)), N the Coulomb n = 0 normalization.
    pub fn psi(&self, r: f64) -> f64 {
        self.state.norm * r.powi(self.l() as i32 + 1) * self.poly.eval(r).exp()
    }

    /// d ln ψ / dr = (l+1)/r + P′(r).
    pub fn log_derivative(&self, r: f64) -> f64 {
        f64::from(self.l() + 1) / r + self.poly.derivative(r)
    }

    pub fn sample(&self, r: f64) -> Result<WavefunctionSample> {
        Ok(WavefunctionSample {
            r,
            chi: self.state.chi(r)?,
            u: moderating_u(&self.state.params, self.l(), r)?,
            psi: self.psi(r),
        })
    }
}

/// Full ground-state ψ(r) for δ > 0.
pub fn full_psi(params: &PhysicalParams, l: u32, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "radial coordinate must be non-negative",
        });
    }
    Ok(GroundStateWavefunction::new(params, l)?.psi(r))
}

/// First r > 0 where P′(r) ≥ 0; infinite if it never turns.
pub fn validity_radius(poly: &PolynomialP, length_scale: f64) -> f64 {
    if poly.derivative(0.0) >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut step = 0.05 * length_scale;
    let limit = 1e9 * length_scale;
    while lo < limit {
        let hi = lo + step;
        if poly.derivative(hi) >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if poly.derivative(mid) >= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= 4.0 * f64::EPSILON * b {
                    break;
                }
            }
            return b;
        }
        lo = hi;
        step *= 1.02;
    }
    f64::INFINITY
}
