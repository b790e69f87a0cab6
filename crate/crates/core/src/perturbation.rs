//! First and second order energy and superpotential corrections.
//!
//! The screening perturbation is ΔV(r) = Aδ − (Aδ³/3)r² + (Aδ⁴/6)r³ − …; the
//! constant Aδ is carried as an explicit shift, the r² term drives the first
//! order and the r³ term (together with W⁽¹⁾²) the second order. Two routes
//! are provided for each quantity: closed forms in δ for n = 0, 1, 2, and direct
//! quadrature over the unperturbed density χ²(r).

use std::fmt;
use std::str::FromStr;

use crate::coulomb::{r_squared_expectation, unperturbed_energy, CoulombState, QuantumNumbers};
use crate::potential::PhysicalParams;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::{Error, Result};

/// How many perturbative corrections to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum CorrectionOrder {
    Zeroth = 0,
    First = 1,
    #[default]
    Second = 2,
}

impl TryFrom<u8> for CorrectionOrder {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Self::Zeroth),
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::Parse(format!("correction order must be 0, 1 or 2 (got {v})"))),
        }
    }
}

impl FromStr for CorrectionOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("correction order must be 0, 1 or 2 (got `{s}`)")))?;
        v.try_into()
    }
}

impl fmt::Display for CorrectionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// E = E⁽⁰⁾ + Aδ + E⁽¹⁾ + E⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub e0: f64,
    pub shift: f64,
    pub e1: f64,
    pub e2: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(e0: f64, shift: f64, e1: f64, e2: f64) -> Self {
        Self {
            e0,
            shift,
            e1,
            e2,
            total: e0 + shift + e1 + e2,
        }
    }

    /// −E.
    pub fn binding(&self) -> f64 {
        -self.total
    }
}

/// Auxiliary coefficients of the second-order ground-state superpotential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientsABC {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    l: u32,
    params: PhysicalParams,
}

impl CoefficientsABC {
    pub fn new(params: &PhysicalParams, l: u32) -> Self {
        let (hb, m, big_a, d) = (params.hbar, params.mass, params.strength_a, params.screening_delta);
        let l1 = f64::from(l + 1);
        let lf = f64::from(l);
        let a = hb * hb * l1 * (3.0 * lf + 7.0) * d * d / (big_a * m) - 3.0 * big_a * m / (hb * hb * l1 * l1);
        let b = hb.powi(4) * l1 * l1 * (8.0 * lf * lf + 37.0 * lf + 43.0) * d * d / (2.0 * big_a * big_a * m * m)
            - 1.5 * (2.0 * lf + 5.0) / l1;
        let c = hb * hb * l1.powi(3) / (9.0 * big_a * m);
        Self {
            a,
            b,
            c,
            l,
            params: *params,
        }
    }

    /// d = b + 6Am/(ħ²(l+1)²δ); needs δ > 0.
    pub fn d(&self) -> Result<f64> {
        let p = &self.params;
        if !(p.screening_delta > 0.0) {
            return Err(Error::Degenerate("d carries 1/δ and is undefined at δ = 0"));
        }
        let l1 = f64::from(self.l + 1);
        Ok(self.b + 6.0 * p.strength_a * p.mass / (p.hbar * p.hbar * l1 * l1 * p.screening_delta))
    }
}

fn closed_form_guard(params: &PhysicalParams, qn: QuantumNumbers) -> Result<()> {
    params.validate()?;
    params.require_cosine_screening()?;
    if qn.n > 2 {
        return Err(Error::OutOfRange { n: qn.n });
    }
    Ok(())
}

/// Closed-form E⁽¹⁾ for n = 0, 1, 2.
pub fn e1_closed(params: &PhysicalParams, qn: QuantumNumbers) -> Result<f64> {
    closed_form_guard(params, qn)?;
    let l = f64::from(qn.l);
    let poly = match qn.n {
        0 => (l + 1.0).powi(2) * (l + 2.0) * (2.0 * l + 3.0),
        1 => (l + 2.0).powi(2) * (l + 7.0) * (2.0 * l + 3.0),
        _ => (l + 3.0).powi(2) * (l + 2.0) * (2.0 * l + 23.0),
    };
    let (hb, m) = (params.hbar, params.mass);
    Ok(-hb.powi(4) * poly * params.screening_delta.powi(3) / (6.0 * params.strength_a * m * m))
}

/// E⁽¹⁾ = −(Aδ³/3)·⟨r²⟩ for any (n, l).
pub fn e1_general(params: &PhysicalParams, qn: QuantumNumbers) -> Result<f64> {
    params.validate()?;
    params.require_cosine_screening()?;
    Ok(-params.strength_a * params.screening_delta.powi(3) / 3.0 * r_squared_expectation(params, qn))
}

/// E⁽¹⁾ = ∫₀^∞ χ²(r)·(−Aδ³/3)r² dr by adaptive quadrature.
pub fn e1_quadrature(params: &PhysicalParams, qn: QuantumNumbers, spec: &QuadratureSpec) -> Result<f64> {
    params.require_cosine_screening()?;
    let state = CoulombState::new(*params, qn)?;
    let coef = -params.strength_a * params.screening_delta.powi(3) / 3.0;
    if coef == 0.0 {
        return Ok(0.0);
    }
    // integrate ⟨r²⟩ and scale, so the tolerance applies to the energy
    let tol = spec.tolerance / coef.abs();
    let moment = integrate(
        |r| {
            let chi = state.chi_unchecked(r);
            chi * chi * r * r
        },
        0.0,
        spec.r_max,
        tol,
        spec.max_subdivisions,
    )?;
    Ok(coef * moment.value)
}

/// W⁽¹⁾_n(r) = −(ħNδ³r/(3√(2m)))·{r + ħ²N(N+1)/(Am)} with N = n + l + 1.
///
/// Exact for n = 0; for n ≥ 1 this is the node-free hierarchy form.
pub fn w1_closed(params: &PhysicalParams, qn: QuantumNumbers, r: f64) -> Result<f64> {
    params.require_cosine_screening()?;
    let (scale, k) = w1_parts(params, qn);
    Ok(scale * r * (r + k))
}

/// dW⁽¹⁾/dr of [`w1_closed`].
pub fn w1_closed_derivative(params: &PhysicalParams, qn: QuantumNumbers, r: f64) -> Result<f64> {
    params.require_cosine_screening()?;
    let (scale, k) = w1_parts(params, qn);
    Ok(scale * (2.0 * r + k))
}

fn w1_parts(params: &PhysicalParams, qn: QuantumNumbers) -> (f64, f64) {
    let big_n = f64::from(qn.principal());
    let scale = -params.hbar_over_sqrt2m() * big_n * params.screening_delta.powi(3) / 3.0;
    let k = params.hbar * params.hbar * big_n * (big_n + 1.0) / (params.strength_a * params.mass);
    (scale, k)
}

/// W⁽¹⁾(r) = (√(2m)/ħ)·χ⁻²(r)·∫₀^r χ²(x)[E⁽¹⁾ + (Aδ³/3)x²] dx.
pub fn w1_quadrature(state: &CoulombState, e1: f64, r: f64) -> Result<f64> {
    w1_quadrature_with(state, e1, r, &QuadratureSpec::for_state(state))
}

/// [`w1_quadrature`] with explicit quadrature controls; `spec.tolerance` is
/// applied relative to the magnitude of the integrand on the integrated side.
///
/// Past the zero of the integrand (x² = −E⁽¹⁾/k) the head integral is a small
/// difference of large numbers, so there the equivalent tail form
/// −∫_r^∞ is used instead. The two agree exactly when `e1` is the
/// expectation value of the perturbation, which is what makes W⁽¹⁾ finite.
pub fn w1_quadrature_with(state: &CoulombState, e1: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let params = &state.params;
    params.require_cosine_screening()?;
    if !(r > 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "the superpotential is defined for r > 0",
        });
    }
    let chi_r = state.chi_unchecked(r);
    let near_node = state
        .nodes()
        .iter()
        .any(|&node| (r - node).abs() <= 1e-8 * params.bohr_radius());
    if chi_r == 0.0 || near_node {
        return Err(Error::Pole { r });
    }
    let k = params.strength_a * params.screening_delta.powi(3) / 3.0;
    let integrand = |x: f64| {
        let chi = state.chi_unchecked(x);
        chi * chi * (e1 + k * x * x)
    };
    let use_tail = k > 0.0 && e1 < 0.0 && r * r > -e1 / k;
    let integral = if use_tail {
        let upper = spec.r_max.max(r + 40.0 / state.beta);
        // the integrand decays monotonically beyond its zero
        let scale = (upper - r) * integrand(r).abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        -integrate(integrand, r, upper, spec.tolerance * scale, spec.max_subdivisions)?.value
    } else {
        let scale = r * chi_r * chi_r * (e1.abs() + k * r * r);
        if scale == 0.0 {
            return Ok(0.0);
        }
        integrate(integrand, 0.0, r, spec.tolerance * scale, spec.max_subdivisions)?.value
    };
    Ok(integral / (params.hbar_over_sqrt2m() * chi_r * chi_r))
}

/// The δ⁴ and δ⁶ parts of the closed-form E⁽²⁾ for n = 0, 1, 2.
pub fn e2_closed_terms(params: &PhysicalParams, qn: QuantumNumbers) -> Result<(f64, f64)> {
    closed_form_guard(params, qn)?;
    let l = f64::from(qn.l);
    let (quartic, sextic) = match qn.n {
        0 => (
            (l + 1.0).powi(3) * (l + 2.0) * (2.0 * l + 3.0) * (2.0 * l + 5.0),
            (l + 1.0).powi(6) * (l + 2.0) * (2.0 * l + 3.0) * (8.0 * l * l + 37.0 * l + 43.0),
        ),
        1 => (
            (l + 2.0).powi(3) * (l + 11.0) * (2.0 * l + 3.0) * (2.0 * l + 5.0),
            (l + 2.0).powi(6) * (l + 3.0) * (2.0 * l + 3.0) * (7.0 * l * l + 101.0 * l + 211.0),
        ),
        _ => (
            (l + 2.0) * (l + 3.0).powi(2) * (2.0 * l + 5.0) * (2.0 * l * l + 45.0 * l + 153.0),
            (l + 2.0)
                * (l + 3.0).powi(5)
                * (16.0 * l.powi(4) + 474.0 * l.powi(3) + 3879.0 * l * l + 12118.0 * l + 12873.0),
        ),
    };
    let (hb, m, a, d) = (params.hbar, params.mass, params.strength_a, params.screening_delta);
    Ok((
        hb.powi(6) * quartic * d.powi(4) / (24.0 * a * a * m.powi(3)),
        -hb.powi(10) * sextic * d.powi(6) / (72.0 * a.powi(4) * m.powi(5)),
    ))
}

/// Closed-form E⁽²⁾ for n = 0, 1, 2 (n = 1 is approximate by construction).
pub fn e2_closed(params: &PhysicalParams, qn: QuantumNumbers) -> Result<f64> {
    let (quartic, sextic) = e2_closed_terms(params, qn)?;
    Ok(quartic + sextic)
}

/// Which first-order superpotential to feed into the E⁽²⁾ integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W1Path {
    Closed,
    Quadrature,
}

/// E⁽²⁾ = ∫₀^∞ χ²(r)[(Aδ⁴/6)r³ − W⁽¹⁾(r)²] dr for the nodeless n = 0 states.
pub fn e2_quadrature(state: &CoulombState, e1: f64, spec: &QuadratureSpec, path: W1Path) -> Result<f64> {
    let params = state.params;
    params.require_cosine_screening()?;
    if state.qn.n != 0 {
        return Err(Error::Unsupported(format!(
            "second-order quadrature needs a nodeless state; n = {} has poles in 1/χ²",
            state.qn.n
        )));
    }
    let k4 = params.strength_a * params.screening_delta.powi(4) / 6.0;
    if k4 == 0.0 {
        return Ok(0.0);
    }
    let inner_spec = QuadratureSpec {
        tolerance: 1e-13,
        ..*spec
    };
    let w1 = |r: f64| -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        match path {
            W1Path::Closed => w1_closed(&params, state.qn, r).unwrap_or(f64::NAN),
            W1Path::Quadrature => w1_quadrature_with(state, e1, r, &inner_spec).unwrap_or(f64::NAN),
        }
    };
    let integrand = |r: f64| {
        let chi = state.chi_unchecked(r);
        let density = chi * chi;
        if density == 0.0 {
            return 0.0;
        }
        let w = w1(r);
        density * (k4 * r * r * r - w * w)
    };
    let value = integrate(integrand, 0.0, spec.r_max, spec.tolerance, spec.max_subdivisions)?.value;
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            subdivisions: 0,
            estimate: f64::INFINITY,
        });
    }
    Ok(value)
}

/// ∫₀^∞ χ_n²[(Aδ⁴/6)r³ − (W⁽¹⁾_n hierarchy)²] dr for any n.
///
/// No 1/χ² factor appears, so nodes are harmless. For n = 0 and n = 2 this
/// reproduces [`e2_closed`]; for n = 1 only the δ⁴ part agrees.
pub fn e2_hierarchy_quadrature(state: &CoulombState, spec: &QuadratureSpec) -> Result<f64> {
    let params = state.params;
    params.require_cosine_screening()?;
    let k4 = params.strength_a * params.screening_delta.powi(4) / 6.0;
    let (scale, k) = w1_parts(&params, state.qn);
    let integrand = |r: f64| {
        let chi = state.chi_unchecked(r);
        let w = scale * r * (r + k);
        chi * chi * (k4 * r * r * r - w * w)
    };
    Ok(integrate(integrand, 0.0, spec.r_max, spec.tolerance, spec.max_subdivisions)?.value)
}

/// W⁽²⁾₀(r) = −(ħδ⁴c·r/(2√(2m)))·{δ²r³ + ar² + b[r + ħ²(l+1)(l+2)/(Am)]}.
///
/// This is the polynomial that satisfies the second-order Riccati equation
/// with W⁽²⁾(0) = 0.
pub fn w2_closed(params: &PhysicalParams, l: u32, r: f64) -> Result<f64> {
    params.require_cosine_screening()?;
    let [c1, c2, c3, c4] = w2_polynomial(params, l);
    Ok(r * (c1 + r * (c2 + r * (c3 + r * c4))))
}

/// dW⁽²⁾₀/dr of [`w2_closed`].
pub fn w2_closed_derivative(params: &PhysicalParams, l: u32, r: f64) -> Result<f64> {
    params.require_cosine_screening()?;
    let [c1, c2, c3, c4] = w2_polynomial(params, l);
    Ok(c1 + r * (2.0 * c2 + r * (3.0 * c3 + r * 4.0 * c4)))
}

/// [`w2_closed`] plus the constant −ħ(l+1)E⁽²⁾/(√(2m)A).
///
/// Kept for comparison: with the constant the second-order Riccati residual
/// is 2·W₀·const instead of zero.
pub fn w2_closed_with_offset(params: &PhysicalParams, l: u32, r: f64, e2: f64) -> Result<f64> {
    let offset = -params.hbar_over_sqrt2m() * f64::from(l + 1) / params.strength_a * e2;
    Ok(w2_closed(params, l, r)? + offset)
}

/// Coefficients of r¹..r⁴ in W⁽²⁾₀.
pub(crate) fn w2_polynomial(params: &PhysicalParams, l: u32) -> [f64; 4] {
    let abc = CoefficientsABC::new(params, l);
    let d = params.screening_delta;
    let pre = -params.hbar_over_sqrt2m() * d.powi(4) * abc.c / 2.0;
    let k0 = params.hbar * params.hbar * f64::from((l + 1) * (l + 2)) / (params.strength_a * params.mass);
    [pre * abc.b * k0, pre * abc.b, pre * abc.a, pre * d * d]
}

/// Coefficients of r¹, r² in W⁽¹⁾₀.
pub(crate) fn w1_polynomial(params: &PhysicalParams, l: u32) -> [f64; 2] {
    let (scale, k) = w1_parts(params, QuantumNumbers::new(0, l));
    [scale * k, scale]
}

/// E⁽⁰⁾ + Aδ + E⁽¹⁾ + E⁽²⁾ from the closed forms, gated by `order`.
pub fn total_energy(params: &PhysicalParams, qn: QuantumNumbers, order: CorrectionOrder) -> Result<EnergyBreakdown> {
    closed_form_guard(params, qn)?;
    let e0 = unperturbed_energy(params, qn);
    let shift = params.strength_a * params.screening_delta;
    let e1 = if order >= CorrectionOrder::First {
        e1_closed(params, qn)?
    } else {
        0.0
    };
    let e2 = if order >= CorrectionOrder::Second {
        e2_closed(params, qn)?
    } else {
        0.0
    };
    Ok(EnergyBreakdown::new(e0, shift, e1, e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qn(n: u32, l: u32) -> QuantumNumbers {
        QuantumNumbers::new(n, l)
    }

    #[test]
    fn e1_closed_examples() {
        assert_relative_eq!(
            e1_closed(&PhysicalParams::atomic(0.01), qn(0, 0)).unwrap(),
            -1e-6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            e1_closed(&PhysicalParams::atomic(0.01), qn(1, 0)).unwrap(),
            -1.4e-5,
            max_relative = 1e-12
        );
        assert_eq!(e1_closed(&PhysicalParams::hbar2m1(8.0, 0.0), qn(2, 1)).unwrap(), 0.0);
        assert!(matches!(
            e1_closed(&PhysicalParams::atomic(0.01), qn(3, 0)),
            Err(Error::OutOfRange { n: 3 })
        ));
        assert!(matches!(
            e1_closed(&PhysicalParams::atomic(0.01).with_g(0.5), qn(0, 0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn e1_general_examples() {
        let p = PhysicalParams::atomic(0.1);
        assert_relative_eq!(e1_general(&p, qn(0, 0)).unwrap(), -1e-3, max_relative = 1e-12);
        let p = PhysicalParams::atomic(0.01);
        assert_relative_eq!(e1_general(&p, qn(3, 0)).unwrap(), -2.16e-4, max_relative = 1e-12);
        for n in 0..3 {
            for l in 0..6 {
                assert_relative_eq!(
                    e1_general(&p, qn(n, l)).unwrap(),
                    e1_closed(&p, qn(n, l)).unwrap(),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn e1_quadrature_examples() {
        let p = PhysicalParams::atomic(0.02);
        let s = CoulombState::new(p, qn(0, 0)).unwrap();
        let spec = QuadratureSpec::for_state(&s);
        assert!((e1_quadrature(&p, qn(0, 0), &spec).unwrap() + 8e-6).abs() < 1e-12);

        let p0 = PhysicalParams::atomic(0.0);
        assert_eq!(e1_quadrature(&p0, qn(0, 0), &spec).unwrap(), 0.0);

        let p = PhysicalParams::atomic(0.05);
        let s = CoulombState::new(p, qn(0, 2)).unwrap();
        let got = e1_quadrature(&p, qn(0, 2), &QuadratureSpec::for_state(&s)).unwrap();
        assert!((got + 5.25e-3).abs() < 1e-12, "{got}");

        // excited states go through the same integral
        let p = PhysicalParams::atomic(0.01);
        let s = CoulombState::new(p, qn(3, 0)).unwrap();
        let got = e1_quadrature(&p, qn(3, 0), &QuadratureSpec::for_state(&s)).unwrap();
        assert!((got + 2.16e-4).abs() < 1e-12, "{got}");
    }

    #[test]
    fn w1_closed_examples() {
        let p = PhysicalParams::atomic(0.1);
        assert_eq!(w1_closed(&p, qn(2, 1), 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            w1_closed(&p, qn(0, 0), 1.0).unwrap(),
            -1e-3 / std::f64::consts::SQRT_2,
            max_relative = 1e-13
        );
        let want = -(2.0 * 1e-3 * 2.0 / (3.0 * std::f64::consts::SQRT_2)) * 8.0;
        assert_relative_eq!(w1_closed(&p, qn(1, 0), 2.0).unwrap(), want, max_relative = 1e-13);
        assert_relative_eq!(want, -7.5425e-3, max_relative = 1e-4);
    }

    #[test]
    fn w1_quadrature_matches_closed_form_for_nodeless_state() {
        for (delta, r) in [(0.05, 1.0), (0.02, 5.0), (0.1, 0.3), (0.1, 12.0)] {
            let p = PhysicalParams::atomic(delta);
            let s = CoulombState::new(p, qn(0, 0)).unwrap();
            let e1 = e1_closed(&p, qn(0, 0)).unwrap();
            let got = w1_quadrature(&s, e1, r).unwrap();
            let want = w1_closed(&p, qn(0, 0), r).unwrap();
            assert!((got - want).abs() < 1e-9, "delta={delta} r={r}: {got} vs {want}");
        }
        let p = PhysicalParams::atomic(0.05);
        let s = CoulombState::new(p, qn(0, 0)).unwrap();
        let e1 = e1_closed(&p, qn(0, 0)).unwrap();
        assert!(w1_quadrature(&s, e1, 1e-6).unwrap().abs() < 1e-9);
    }

    #[test]
    fn w1_quadrature_rejects_nodes() {
        let p = PhysicalParams::atomic(0.05);
        let s = CoulombState::new(p, qn(1, 0)).unwrap();
        let e1 = e1_closed(&p, qn(1, 0)).unwrap();
        assert!(matches!(w1_quadrature(&s, e1, 2.0), Err(Error::Pole { .. })));
        assert!(w1_quadrature(&s, e1, 0.0).is_err());
        assert!(w1_quadrature(&s, e1, 1.0).unwrap().is_finite());
    }

    #[test]
    fn e2_closed_examples() {
        let p = PhysicalParams::atomic(0.01);
        let want = 30.0 / 24.0 * 1e-8 - 258.0 / 72.0 * 1e-12;
        assert_relative_eq!(e2_closed(&p, qn(0, 0)).unwrap(), want, max_relative = 1e-12);
        assert_relative_eq!(want, 1.2496e-8, max_relative = 1e-4);

        let want = 8.0 * 11.0 * 3.0 * 5.0 / 24.0 * 1e-8 - 64.0 * 3.0 * 3.0 * 211.0 / 72.0 * 1e-12;
        assert_relative_eq!(e2_closed(&p, qn(1, 0)).unwrap(), want, max_relative = 1e-12);
        assert_relative_eq!(want, 5.48312e-7, max_relative = 1e-6);

        assert_eq!(e2_closed(&PhysicalParams::atomic(0.0), qn(2, 2)).unwrap(), 0.0);
        assert!(e2_closed(&p, qn(4, 0)).is_err());
    }

    #[test]
    fn e2_quadrature_matches_closed_form() {
        for (delta, l) in [(0.04, 0), (0.05, 2)] {
            let p = PhysicalParams::atomic(delta);
            let s = CoulombState::new(p, qn(0, l)).unwrap();
            let spec = QuadratureSpec::for_state(&s);
            let e1 = e1_closed(&p, qn(0, l)).unwrap();
            let want = e2_closed(&p, qn(0, l)).unwrap();
            for path in [W1Path::Closed, W1Path::Quadrature] {
                let got = e2_quadrature(&s, e1, &spec, path).unwrap();
                assert!((got - want).abs() < 1e-10, "l={l} {path:?}: {got} vs {want}");
            }
        }
        let p = PhysicalParams::atomic(0.0);
        let s = CoulombState::new(p, qn(0, 0)).unwrap();
        assert_eq!(
            e2_quadrature(&s, 0.0, &QuadratureSpec::for_state(&s), W1Path::Closed).unwrap(),
            0.0
        );
    }

    #[test]
    fn e2_quadrature_rejects_nodal_states() {
        let p = PhysicalParams::atomic(0.05);
        let s = CoulombState::new(p, qn(1, 0)).unwrap();
        let spec = QuadratureSpec::for_state(&s);
        assert!(matches!(
            e2_quadrature(&s, 0.0, &spec, W1Path::Closed),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn hierarchy_integral_reproduces_excited_closed_forms() {
        let p = PhysicalParams::atomic(0.03);
        for l in 0..3 {
            let s = CoulombState::new(p, qn(2, l)).unwrap();
            let got = e2_hierarchy_quadrature(&s, &QuadratureSpec::for_state(&s)).unwrap();
            let want = e2_closed(&p, qn(2, l)).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-9);
        }
        // n = 1: quartic part only; isolate it by scaling δ
        for l in 0..3 {
            let (quartic, _) = e2_closed_terms(&p, qn(1, l)).unwrap();
            let small = p.with_delta(1e-4);
            let s = CoulombState::new(small, qn(1, l)).unwrap();
            let got = e2_hierarchy_quadrature(&s, &QuadratureSpec::for_state(&s)).unwrap();
            let (q_small, _) = e2_closed_terms(&small, qn(1, l)).unwrap();
            assert_relative_eq!(got, q_small, max_relative = 1e-6);
            assert_relative_eq!(q_small * 300.0f64.powi(4), quartic, max_relative = 1e-12);
        }
    }

    #[test]
    fn abc_coefficients() {
        let p = PhysicalParams::atomic(0.05);
        let abc = CoefficientsABC::new(&p, 0);
        assert_relative_eq!(abc.c, 1.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(abc.a, -2.9825, max_relative = 1e-13);
        assert_relative_eq!(abc.b, -7.44625, max_relative = 1e-13);
        assert_relative_eq!(abc.d().unwrap(), -7.44625 + 120.0, max_relative = 1e-13);
        assert!(CoefficientsABC::new(&PhysicalParams::atomic(0.0), 0).d().is_err());
    }

    #[test]
    fn w2_offset_form() {
        let p = PhysicalParams::atomic(0.05);
        let e2 = e2_closed(&p, qn(0, 1)).unwrap();
        assert_eq!(w2_closed(&p, 1, 0.0).unwrap(), 0.0);
        let want = -(2.0 / std::f64::consts::SQRT_2) * e2;
        assert_relative_eq!(
            w2_closed_with_offset(&p, 1, 0.0, e2).unwrap(),
            want,
            max_relative = 1e-14
        );
    }

    #[test]
    fn total_energy_table_rows() {
        let b = total_energy(&PhysicalParams::atomic(0.01), qn(0, 0), CorrectionOrder::Second).unwrap();
        assert!((b.total + 0.4900009).abs() < 5e-7);
        assert_eq!(b.total, b.e0 + b.shift + b.e1 + b.e2);
        let b = total_energy(&PhysicalParams::atomic(0.02), qn(1, 0), CorrectionOrder::Second).unwrap();
        assert!((b.total + 0.1051033).abs() < 5e-7);
        let b = total_energy(&PhysicalParams::hbar2m1(4.0, 0.2), qn(0, 0), CorrectionOrder::Second).unwrap();
        assert!((b.total + 3.207029).abs() < 5e-6);
    }

    #[test]
    fn order_gating() {
        let p = PhysicalParams::atomic(0.05);
        let z = total_energy(&p, qn(0, 0), CorrectionOrder::Zeroth).unwrap();
        let f = total_energy(&p, qn(0, 0), CorrectionOrder::First).unwrap();
        assert_eq!((z.e1, z.e2), (0.0, 0.0));
        assert_eq!(f.e2, 0.0);
        assert!(f.e1 < 0.0 && z.shift > 0.0);
        assert!("3".parse::<CorrectionOrder>().is_err());
        assert_eq!("1".parse::<CorrectionOrder>().unwrap(), CorrectionOrder::First);
    }

    #[test]
    fn unscreened_breakdown() {
        let b = total_energy(&PhysicalParams::atomic(0.0), qn(0, 1), CorrectionOrder::Second).unwrap();
        assert_eq!((b.shift, b.e1, b.e2), (0.0, 0.0, 0.0));
        assert_eq!(b.total, -0.125);
    }
}
