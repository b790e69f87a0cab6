//! The exponential-cosine-screened Coulomb potential and its small-δ expansion.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// Coupling, screening and unit constants shared by every calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Coupling constant A (energy·length).
    pub strength_a: f64,
    /// Screening parameter δ (1/length).
    pub screening_delta: f64,
    /// Cosine factor g; 1 for the cosine-screened case, 0 for Yukawa.
    pub cosine_g: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalParams {
    pub fn new(strength_a: f64, screening_delta: f64, cosine_g: f64, hbar: f64, mass: f64) -> Result<Self> {
        let params = Self {
            strength_a,
            screening_delta,
            cosine_g,
            hbar,
            mass,
        };
        params.validate()?;
        Ok(params)
    }

    /// ħ = m = A = 1.
    pub fn atomic(delta: f64) -> Self {
        Self {
            strength_a: 1.0,
            screening_delta: delta,
            cosine_g: 1.0,
            hbar: 1.0,
            mass: 1.0,
        }
    }

    /// ħ = m = 1, A = √2 and δ = G·A for the dimensionless screening `g_scaled`.
    pub fn table5(g_scaled: f64) -> Self {
        let a = std::f64::consts::SQRT_2;
        Self {
            strength_a: a,
            screening_delta: g_scaled * a,
            cosine_g: 1.0,
            hbar: 1.0,
            mass: 1.0,
        }
    }

    /// ħ = 2m = 1.
    pub fn hbar2m1(strength_a: f64, delta: f64) -> Self {
        Self {
            strength_a,
            screening_delta: delta,
            cosine_g: 1.0,
            hbar: 1.0,
            mass: 0.5,
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self {
            screening_delta: delta,
            ..self
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { cosine_g: g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.strength_a,
            self.screening_delta,
            self.cosine_g,
            self.hbar,
            self.mass,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.strength_a <= 0.0 || self.hbar <= 0.0 || self.mass <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "A, hbar and mass must be positive (A = {}, hbar = {}, mass = {})",
                self.strength_a, self.hbar, self.mass
            )));
        }
        if self.screening_delta < 0.0 || self.cosine_g < 0.0 {
            return Err(Error::InvalidParams(format!(
                "delta and g must be non-negative (delta = {}, g = {})",
                self.screening_delta, self.cosine_g
            )));
        }
        Ok(())
    }

    /// Coulomb length scale ħ²/(mA).
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.strength_a)
    }

    /// ħ/√(2m), the prefactor linking superpotentials to log-derivatives.
    pub fn hbar_over_sqrt2m(&self) -> f64 {
        self.hbar / (2.0 * self.mass).sqrt()
    }

    pub(crate) fn require_cosine_screening(&self) -> Result<()> {
        if self.cosine_g != 1.0 {
            return Err(Error::Unsupported(format!(
                "the truncated perturbation and its closed forms are defined for g = 1 (got g = {})",
                self.cosine_g
            )));
        }
        Ok(())
    }
}

/// Named unit conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitPreset {
    /// ħ = m = A = 1.
    Atomic,
    /// ħ = m = 1, A = √2.
    Table5,
    /// ħ = 2m = 1.
    Hbar2m1,
    /// Everything supplied by the caller.
    Custom,
}

impl UnitPreset {
    /// (ħ, m, default A) for the preset; `Custom` defaults to the atomic values.
    pub fn constants(self) -> (f64, f64, f64) {
        match self {
            UnitPreset::Atomic | UnitPreset::Custom => (1.0, 1.0, 1.0),
            UnitPreset::Table5 => (1.0, 1.0, std::f64::consts::SQRT_2),
            UnitPreset::Hbar2m1 => (1.0, 0.5, 1.0),
        }
    }
}

impl FromStr for UnitPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "atomic" => Ok(UnitPreset::Atomic),
            "table5" => Ok(UnitPreset::Table5),
            "hbar2m1" => Ok(UnitPreset::Hbar2m1),
            "custom" => Ok(UnitPreset::Custom),
            other => Err(Error::Parse(format!("unknown unit preset `{other}`"))),
        }
    }
}

impl fmt::Display for UnitPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            UnitPreset::Atomic => "atomic",
            UnitPreset::Table5 => "table5",
            UnitPreset::Hbar2m1 => "hbar2m1",
            UnitPreset::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// Taylor coefficients V_0..V_imax of exp(-x)·cos(gx).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub values: Vec<f64>,
    pub g: f64,
}

impl SeriesCoefficients {
    pub fn get(&self, i: usize) -> Option<f64> {
        self.values.get(i).copied()
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Exact potential −(A/r)·exp(−δr)·cos(gδr).
pub fn ecsc_eval(params: &PhysicalParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "the potential is evaluated only for r > 0",
        });
    }
    let x = params.screening_delta * r;
    Ok(-(params.strength_a / r) * (-x).exp() * (params.cosine_g * x).cos())
}

/// V_i = Re[(−(1 + i·g))^i] / i!.
///
/// This is the Taylor expansion of exp(−x)cos(gx) = Re exp(−(1 + ig)x). For g = 1
/// it gives 1, −1, 0, 1/3, −1/6, 1/30, … The general-g form is our own
/// generalisation; only the g = 1 coefficients are tabulated in the literature.
pub fn series_coefficients(g: f64, imax: usize) -> SeriesCoefficients {
    let z = -Complex64::new(1.0, g);
    let mut power = Complex64::new(1.0, 0.0);
    let mut factorial = 1.0;
    let mut values = Vec::with_capacity(imax + 1);
    for i in 0..=imax {
        if i > 0 {
            power *= z;
            factorial *= i as f64;
        }
        values.push(power.re / factorial);
    }
    SeriesCoefficients { values, g }
}

/// −(A/r)·Σ V_i (δr)^i using the coefficients in `coeffs`.
pub fn series_sum(params: &PhysicalParams, coeffs: &SeriesCoefficients, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "the potential is evaluated only for r > 0",
        });
    }
    let x = params.screening_delta * r;
    // Horner from the top coefficient
    let sum = coeffs.values.iter().rev().fold(0.0, |acc, &v| acc * x + v);
    Ok(-(params.strength_a / r) * sum)
}

pub const DEFAULT_TRUNCATION_ORDER: u32 = 5;

/// Truncated screening perturbation ΔV(r) = Aδ − (Aδ³/3)r² + (Aδ⁴/6)r³ − (Aδ⁵/30)r⁴.
///
/// `order` is the highest power of δ kept (1..=5). Only g = 1 is supported.
pub fn delta_v_truncated(params: &PhysicalParams, r: f64, order: u32) -> Result<f64> {
    params.require_cosine_screening()?;
    if !(1..=5).contains(&order) {
        return Err(Error::Unsupported(format!(
            "truncation order must be in 1..=5 (got {order})"
        )));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "radial coordinate must be non-negative",
        });
    }
    let coeffs = series_coefficients(1.0, order as usize);
    let a = params.strength_a;
    let d = params.screening_delta;
    // ΔV = −A Σ_{i≥1} V_i δ^i r^{i−1}
    let mut total = 0.0;
    let mut d_pow = 1.0;
    let mut r_pow = 1.0;
    for i in 1..=order as usize {
        d_pow *= d;
        if i > 1 {
            r_pow *= r;
        }
        total -= a * coeffs.values[i] * d_pow * r_pow;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coulomb_limit_and_special_cases() {
        let p = PhysicalParams::atomic(0.0);
        assert_eq!(ecsc_eval(&p, 2.0).unwrap(), -0.5);

        let p = PhysicalParams::atomic(0.1);
        let expected = -(-0.1f64).exp() * 0.1f64.cos();
        assert_relative_eq!(ecsc_eval(&p, 1.0).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(ecsc_eval(&p, 1.0).unwrap(), -0.900316, epsilon = 1e-6);

        let yukawa = p.with_g(0.0);
        assert_relative_eq!(ecsc_eval(&yukawa, 1.0).unwrap(), -0.904837, epsilon = 1e-6);
    }

    #[test]
    fn non_positive_radius_is_rejected() {
        let p = PhysicalParams::atomic(0.1);
        assert!(matches!(ecsc_eval(&p, 0.0), Err(Error::Domain { .. })));
        assert!(ecsc_eval(&p, -1.0).is_err());
        assert!(ecsc_eval(&p, f64::NAN).is_err());
    }

    #[test]
    fn series_matches_exact_potential_at_12_terms() {
        let p = PhysicalParams::atomic(0.1);
        let c = series_coefficients(1.0, 12);
        let exact = ecsc_eval(&p, 1.0).unwrap();
        assert_relative_eq!(series_sum(&p, &c, 1.0).unwrap(), exact, max_relative = 1e-14);
    }

    #[test]
    fn known_coefficient_tables() {
        let c = series_coefficients(1.0, 5);
        let expected = [1.0, -1.0, 0.0, 1.0 / 3.0, -1.0 / 6.0, 1.0 / 30.0];
        for (got, want) in c.values.iter().zip(expected) {
            assert!((got - want).abs() <= f64::EPSILON, "{got} vs {want}");
        }
        let c = series_coefficients(0.0, 3);
        assert_eq!(c.values, vec![1.0, -1.0, 0.5, -1.0 / 6.0]);
        let c = series_coefficients(2.0, 2);
        assert_relative_eq!(c.values[2], -1.5, max_relative = 1e-15);
    }

    #[test]
    fn truncated_perturbation_values() {
        let p = PhysicalParams::atomic(0.1);
        assert_relative_eq!(delta_v_truncated(&p, 0.0, 5).unwrap(), 0.1, max_relative = 1e-15);
        assert_relative_eq!(
            delta_v_truncated(&p, 1.0, 3).unwrap(),
            0.1 - 0.001 / 3.0,
            max_relative = 1e-14
        );
        let want = 0.1 - (1e-3 / 3.0) * 4.0 + (1e-4 / 6.0) * 8.0 - (1e-5 / 30.0) * 16.0;
        assert_relative_eq!(delta_v_truncated(&p, 2.0, 5).unwrap(), want, max_relative = 1e-14);
        assert_relative_eq!(delta_v_truncated(&p, 2.0, 5).unwrap(), 0.0987947, epsilon = 1e-7);
        // orders 1 and 2 keep only the constant shift
        assert_eq!(
            delta_v_truncated(&p, 3.0, 1).unwrap(),
            delta_v_truncated(&p, 3.0, 2).unwrap()
        );
    }

    #[test]
    fn truncation_requires_g_one() {
        let p = PhysicalParams::atomic(0.1).with_g(0.0);
        assert!(matches!(delta_v_truncated(&p, 1.0, 5), Err(Error::Unsupported(_))));
        let p = PhysicalParams::atomic(0.1);
        assert!(delta_v_truncated(&p, 1.0, 6).is_err());
        assert!(delta_v_truncated(&p, 1.0, 0).is_err());
    }

    #[test]
    fn presets() {
        let p = PhysicalParams::table5(0.05);
        assert_relative_eq!(p.screening_delta, 0.05 * std::f64::consts::SQRT_2);
        assert_eq!(PhysicalParams::hbar2m1(4.0, 0.2).mass, 0.5);
        assert!(PhysicalParams::new(-1.0, 0.1, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -0.1, 1.0, 1.0, 1.0).is_err());
        assert_eq!("HBAR2M1".parse::<UnitPreset>().unwrap(), UnitPreset::Hbar2m1);
        assert!("si".parse::<UnitPreset>().is_err());
    }
}
