//! The exactly solvable Coulomb sector: energies, normalized radial
//! functions χ(r) = u(r) = r·R(r), associated Laguerre polynomials and the
//! unperturbed superpotential W = −(ħ/√(2m))·χ′/χ.

use std::fmt;
use std::str::FromStr;

use crate::potential::PhysicalParams;
use crate::{Error, Result};

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuv";

/// Radial quantum number `n` (node count) and orbital `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub const fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }

    /// N = n + l + 1.
    pub const fn principal(&self) -> u32 {
        self.n + self.l + 1
    }

    /// Spectroscopic label such as `3p`; `None` when l has no letter.
    pub fn label(&self) -> Option<String> {
        let letter = *ORBITAL_LETTERS.get(self.l as usize)?;
        Some(format!("{}{}", self.principal(), letter as char))
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(label) => f.write_str(&label),
            None => write!(f, "n={},l={}", self.n, self.l),
        }
    }
}

impl FromStr for QuantumNumbers {
    type Err = Error;

    /// Accepts spectroscopic labels (`1s`, `3d`) or explicit `n=1,l=0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((lhs, rhs)) = s.split_once(',') {
            let n = parse_assignment(lhs, "n")?;
            let l = parse_assignment(rhs, "l")?;
            return Ok(Self { n, l });
        }
        let bad = || Error::Parse(format!("invalid state label `{s}`"));
        let letter = s.chars().last().ok_or_else(bad)?;
        let digits = &s[..s.len() - letter.len_utf8()];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let principal: u32 = digits.parse().map_err(|_| bad())?;
        let l = ORBITAL_LETTERS
            .iter()
            .position(|&c| c as char == letter.to_ascii_lowercase())
            .ok_or_else(bad)? as u32;
        if principal <= l {
            return Err(Error::Parse(format!("state `{s}` needs principal number > l = {l}")));
        }
        Ok(Self {
            n: principal - l - 1,
            l,
        })
    }
}

fn parse_assignment(part: &str, key: &str) -> Result<u32> {
    let (k, v) = part
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected `{key}=<int>`, got `{part}`")))?;
    if k.trim() != key {
        return Err(Error::Parse(format!("expected `{key}=<int>`, got `{part}`")));
    }
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{}` is not a non-negative integer", v.trim())))
}

/// Associated Laguerre polynomial L_n^k(x) by upward three-term recurrence.
pub fn laguerre(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// −mA²/(2ħ²N²).
pub fn unperturbed_energy(params: &PhysicalParams, qn: QuantumNumbers) -> f64 {
    let big_n = f64::from(qn.principal());
    -params.mass * params.strength_a * params.strength_a / (2.0 * params.hbar * params.hbar * big_n * big_n)
}

/// Hydrogenic ⟨r²⟩ = a₀²·N²(5N² + 1 − 3l(l+1))/2 with a₀ = ħ²/(mA).
pub fn r_squared_expectation(params: &PhysicalParams, qn: QuantumNumbers) -> f64 {
    let a0 = params.bohr_radius();
    let big_n = f64::from(qn.principal());
    let l = f64::from(qn.l);
    a0 * a0 * big_n * big_n * (5.0 * big_n * big_n + 1.0 - 3.0 * l * (l + 1.0)) / 2.0
}

/// A normalized Coulomb bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombState {
    pub params: PhysicalParams,
    pub qn: QuantumNumbers,
    /// β = mA/(Nħ²).
    pub beta: f64,
    pub norm: f64,
}

impl CoulombState {
    pub fn new(params: PhysicalParams, qn: QuantumNumbers) -> Result<Self> {
        params.validate()?;
        let beta = params.mass * params.strength_a / (f64::from(qn.principal()) * params.hbar * params.hbar);
        let norm = laguerre_norm(beta, qn);
        Ok(Self { params, qn, beta, norm })
    }

    /// The normalization written in terms of the coupling,
    /// (2mA/(Nħ²))^(l+1)·(1/N)·[ħ²(n+2l+1)!/(mA·n!)]^(−1/2).
    /// Agrees with [`CoulombState::norm`] analytically.
    pub fn norm_from_coupling(&self) -> f64 {
        let p = &self.params;
        let big_n = f64::from(self.qn.principal());
        let two_beta = 2.0 * p.mass * p.strength_a / (big_n * p.hbar * p.hbar);
        let ratio = factorial_ratio(self.qn.n, self.qn.n + 2 * self.qn.l + 1);
        two_beta.powi(self.qn.l as i32 + 1) / big_n / (p.hbar * p.hbar / (p.mass * p.strength_a) / ratio).sqrt()
    }

    pub fn laguerre_order(&self) -> u32 {
        2 * self.qn.l + 1
    }

    /// χ(r) = N·r^(l+1)·exp(−βr)·L_n^(2l+1)(2βr).
    pub fn chi(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.chi_unchecked(r))
    }

    pub(crate) fn chi_unchecked(&self, r: f64) -> f64 {
        let lag = laguerre(self.qn.n, self.laguerre_order(), 2.0 * self.beta * r);
        self.norm * r.powi(self.qn.l as i32 + 1) * (-self.beta * r).exp() * lag
    }

    /// Analytic χ′(r) using dL_n^k/dx = −L_(n−1)^(k+1).
    pub fn chi_derivative(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let (l, k) = (self.qn.l as i32, self.laguerre_order());
        let x = 2.0 * self.beta * r;
        let lag = laguerre(self.qn.n, k, x);
        let dlag = if self.qn.n == 0 {
            0.0
        } else {
            -laguerre(self.qn.n - 1, k + 1, x)
        };
        let env = self.norm * (-self.beta * r).exp();
        let lead = if l == 0 {
            1.0
        } else {
            f64::from(self.qn.l + 1) * r.powi(l)
        };
        Ok(env * (lead * lag + r.powi(l + 1) * (-self.beta * lag + 2.0 * self.beta * dlag)))
    }

    /// χ′/χ for r > 0, analytic. Fails with [`Error::Pole`] at a node.
    pub fn log_derivative(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain {
                quantity: "r",
                value: r,
                reason: "the superpotential is defined for r > 0",
            });
        }
        let l1 = f64::from(self.qn.l + 1);
        if self.qn.n == 0 {
            return Ok(l1 / r - self.beta);
        }
        let k = self.laguerre_order();
        let x = 2.0 * self.beta * r;
        let lag = laguerre(self.qn.n, k, x);
        let lag_up = laguerre(self.qn.n - 1, k + 1, x);
        if lag.abs() <= 1e-12 * lag_up.abs().max(1.0) {
            return Err(Error::Pole { r });
        }
        Ok(l1 / r - self.beta - 2.0 * self.beta * lag_up / lag)
    }

    /// Unperturbed superpotential W(r) = −(ħ/√(2m))·χ′/χ.
    pub fn base_superpotential(&self, r: f64) -> Result<f64> {
        Ok(-self.params.hbar_over_sqrt2m() * self.log_derivative(r)?)
    }

    pub fn energy(&self) -> f64 {
        unperturbed_energy(&self.params, self.qn)
    }

    /// Positions of the n nodes on (0, ∞): 2β·r_k are the zeros of L_n^(2l+1).
    pub fn nodes(&self) -> Vec<f64> {
        let k = self.laguerre_order();
        let n = self.qn.n;
        if n == 0 {
            return Vec::new();
        }
        // zeros of L_n^k lie in (0, n + k + (n−1)·√(n+k)·2 + 2]; scan then bisect
        let x_max = 4.0 * f64::from(n) + 2.0 * f64::from(k) + 10.0;
        let steps = 4000 * n as usize;
        let h = x_max / steps as f64;
        let mut zeros = Vec::with_capacity(n as usize);
        let mut x0 = 0.0;
        let mut f0 = laguerre(n, k, x0);
        for i in 1..=steps {
            let x1 = i as f64 * h;
            let f1 = laguerre(n, k, x1);
            if f0 == 0.0 || f0.signum() != f1.signum() {
                let (mut lo, mut hi) = (x0, x1);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if laguerre(n, k, lo).signum() == laguerre(n, k, mid).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                zeros.push(0.5 * (lo + hi) / (2.0 * self.beta));
            }
            x0 = x1;
            f0 = f1;
        }
        zeros
    }
}

/// Superpotential W(r) of the Coulomb state `qn` at `r`.
pub fn base_superpotential(state: &CoulombState, r: f64) -> Result<f64> {
    state.base_superpotential(r)
}

/// χ(r) of `state`.
pub fn chi(state: &CoulombState, r: f64) -> Result<f64> {
    state.chi(r)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::Domain {
            quantity: "r",
            value: r,
            reason: "radial coordinate must be non-negative",
        });
    }
    Ok(())
}

/// N = (2β)^(l+1)·√(2β·n!/(2N·(n+2l+1)!)) from ∫₀^∞ x^(k+1) e^(−x) (L_n^k)² dx = (n+k)!(2n+k+1)/n!.
fn laguerre_norm(beta: f64, qn: QuantumNumbers) -> f64 {
    let ratio = factorial_ratio(qn.n, qn.n + 2 * qn.l + 1);
    let big_n = f64::from(qn.principal());
    let two_beta = 2.0 * beta;
    two_beta.powi(qn.l as i32 + 1) * (two_beta * ratio / (2.0 * big_n)).sqrt()
}

/// lo!/hi! for lo ≤ hi.
fn factorial_ratio(lo: u32, hi: u32) -> f64 {
    (lo + 1..=hi).fold(1.0, |acc, k| acc / f64::from(k))
}
