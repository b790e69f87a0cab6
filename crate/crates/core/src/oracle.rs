//! Reference eigenvalues of the full ECSC radial equation
//!
//! χ″(r) = (2m/ħ²)·(V(r) + ħ²l(l+1)/(2mr²) − E)·χ(r)
//!
//! integrated outward with Numerov's method on a uniform grid. The number of
//! sign changes of the outward solution equals the number of Dirichlet levels
//! below the trial energy, so bisection on the node count brackets the level
//! with exactly n nodes; a final secant step on the terminal value polishes it.

use crate::coulomb::{unperturbed_energy, QuantumNumbers};
use crate::potential::{ecsc_eval, PhysicalParams};
use crate::{Error, Result};

/// Radial grid and stopping rules for [`solve_eigenvalue`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub num_points: usize,
    pub energy_tolerance: f64,
    pub max_bisections: usize,
}

impl OracleConfig {
    pub const DEFAULT_POINTS: usize = 20_000;
    pub const MIN_POINTS: usize = 2_000;

    /// Grid sized for the state `qn`: r_max = 40·N²·a₀, stretched by
    /// 1/(1 − 10δN²a₀) (at most 4×) as screening pushes the level up.
    pub fn for_state(params: &PhysicalParams, qn: QuantumNumbers) -> Self {
        let a0 = params.bohr_radius();
        let n2 = f64::from(qn.principal()).powi(2);
        let x = 10.0 * params.screening_delta * n2 * a0;
        let stretch = if x < 0.75 { 1.0 / (1.0 - x) } else { 4.0 };
        Self {
            r_min: 1e-6 * a0,
            r_max: 40.0 * n2 * a0 * stretch,
            num_points: Self::DEFAULT_POINTS,
            energy_tolerance: 1e-10 * params.mass * params.strength_a.powi(2) / params.hbar.powi(2),
            max_bisections: 200,
        }
    }

    pub fn with_points(self, num_points: usize) -> Self {
        Self { num_points, ..self }
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.num_points - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max.is_finite() && self.r_min <= 1e-4 * self.r_max) {
            return Err(Error::InvalidParams(format!(
                "oracle grid needs 0 < r_min <= 1e-4 r_max (r_min = {}, r_max = {})",
                self.r_min, self.r_max
            )));
        }
        if self.num_points < Self::MIN_POINTS {
            return Err(Error::InvalidParams(format!(
                "oracle grid needs at least {} points (got {})",
                Self::MIN_POINTS,
                self.num_points
            )));
        }
        if !(self.energy_tolerance > 0.0) || self.max_bisections == 0 {
            return Err(Error::InvalidParams(
                "energy tolerance and bisection budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub energy: f64,
    pub node_count: u32,
    /// Width of the final node-count bracket; the outward solution diverges at
    /// r_max on either side of the level, so its terminal value is no measure.
    pub residual: f64,
    pub converged: bool,
}

/// Outcome of one outward integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    /// χ(r_max) divided by max |χ| on the grid.
    pub terminal_value: f64,
    pub node_count: u32,
}

/// V(r) + ħ²l(l+1)/(2mr²) with the exact (unexpanded) potential.
pub fn effective_potential(params: &PhysicalParams, l: u32, r: f64) -> Result<f64> {
    let v = ecsc_eval(params, r)?;
    let lf = f64::from(l);
    Ok(v + params.hbar * params.hbar * lf * (lf + 1.0) / (2.0 * params.mass * r * r))
}

/// Precomputed (2m/ħ²)·V_eff on the grid.
struct Grid {
    r_min: f64,
    h: f64,
    scaled_potential: Vec<f64>,
    energy_scale: f64,
    l: u32,
    frobenius: f64,
}

impl Grid {
    fn new(params: &PhysicalParams, l: u32, config: &OracleConfig) -> Result<Self> {
        params.validate()?;
        config.validate()?;
        let h = config.step();
        let energy_scale = 2.0 * params.mass / (params.hbar * params.hbar);
        let scaled_potential = (0..config.num_points)
            .map(|i| effective_potential(params, l, config.r_min + i as f64 * h).map(|v| energy_scale * v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            r_min: config.r_min,
            h,
            scaled_potential,
            energy_scale,
            l,
            // χ ≈ r^(l+1)·(1 − mA r/((l+1)ħ²)) near the origin
            frobenius: -params.mass * params.strength_a / (f64::from(l + 1) * params.hbar * params.hbar),
        })
    }

    fn start_value(&self, r: f64) -> f64 {
        r.powi(self.l as i32 + 1) * (1.0 + self.frobenius * r)
    }

    fn shoot(&self, energy: f64) -> Result<Shot> {
        const RESCALE_ABOVE: f64 = 1e150;

        let h2_12 = self.h * self.h / 12.0;
        let e = self.energy_scale * energy;
        let f = |i: usize| self.scaled_potential[i] - e;

        let mut y_prev = self.start_value(self.r_min);
        let mut y_cur = self.start_value(self.r_min + self.h);
        let mut f_prev = f(0);
        let mut f_cur = f(1);
        let mut peak = y_prev.abs().max(y_cur.abs());
        let mut nodes = 0u32;
        let mut last_sign = sign_of(y_cur).or(sign_of(y_prev));

        for i in 2..self.scaled_potential.len() {
            let f_next = f(i);
            let y_next =
                (2.0 * y_cur * (1.0 + 5.0 * h2_12 * f_cur) - y_prev * (1.0 - h2_12 * f_prev)) / (1.0 - h2_12 * f_next);
            if !y_next.is_finite() {
                return Err(Error::IntegrationFailure(format!(
                    "non-finite value at r = {}",
                    self.r_min + i as f64 * self.h
                )));
            }
            if let Some(s) = sign_of(y_next) {
                if last_sign.is_some_and(|prev| prev != s) {
                    nodes += 1;
                }
                last_sign = Some(s);
            }
            y_prev = y_cur;
            y_cur = y_next;
            f_prev = f_cur;
            f_cur = f_next;
            peak = peak.max(y_cur.abs());
            if peak > RESCALE_ABOVE {
                y_prev /= peak;
                y_cur /= peak;
                peak = 1.0;
            }
        }
        Ok(Shot {
            terminal_value: y_cur / peak,
            node_count: nodes,
        })
    }
}

fn sign_of(y: f64) -> Option<bool> {
    if y > 0.0 {
        Some(true)
    } else if y < 0.0 {
        Some(false)
    } else {
        None
    }
}

/// Integrate outward at `energy` and report χ(r_max)/max|χ| and the node count.
pub fn shoot(params: &PhysicalParams, l: u32, energy: f64, config: &OracleConfig) -> Result<Shot> {
    if !(energy < 0.0) {
        return Err(Error::Domain {
            quantity: "energy",
            value: energy,
            reason: "bound-state shooting needs E < 0",
        });
    }
    Grid::new(params, l, config)?.shoot(energy)
}

/// The eigenvalue with exactly `qn.n` nodes for angular momentum `qn.l`.
pub fn solve_eigenvalue(params: &PhysicalParams, qn: QuantumNumbers, config: &OracleConfig) -> Result<EigenResult> {
    let a0 = params.bohr_radius();
    let big_n = f64::from(qn.principal());
    if config.r_max < 6.0 * big_n * big_n * a0 {
        return Err(Error::InvalidParams(format!(
            "r_max = {} is below 6·N²·a0 = {} for {}",
            config.r_max,
            6.0 * big_n * big_n * a0,
            qn
        )));
    }
    let grid = Grid::new(params, qn.l, config)?;
    let target = qn.n;

    // |e^{-δr}cos(gδr)| ≤ 1, so every level lies above its Coulomb counterpart
    let coulomb = unperturbed_energy(params, qn);
    let mut lo = coulomb * 1.01;
    let mut lo_shot = grid.shoot(lo)?;
    let mut widen = 0;
    while lo_shot.node_count > target {
        lo *= 2.0;
        lo_shot = grid.shoot(lo)?;
        widen += 1;
        if widen > 60 {
            return Err(Error::IntegrationFailure(
                "could not bracket the level from below".into(),
            ));
        }
    }
    let mut hi = -1e-12 * coulomb.abs();
    let mut hi_shot = grid.shoot(hi)?;
    if hi_shot.node_count <= target {
        return Err(Error::NoBoundState {
            n: qn.n,
            l: qn.l,
            reason: format!(
                "only {} nodes just below E = 0; the level has merged with the continuum",
                hi_shot.node_count
            ),
        });
    }

    let mut iterations = 0;
    while hi - lo > config.energy_tolerance && iterations < config.max_bisections {
        let mid = 0.5 * (lo + hi);
        let shot = grid.shoot(mid)?;
        if shot.node_count > target {
            hi = mid;
            hi_shot = shot;
        } else {
            lo = mid;
            lo_shot = shot;
        }
        iterations += 1;
    }
    let converged = hi - lo <= config.energy_tolerance;
    if converged && lo_shot.node_count != target {
        return Err(Error::IntegrationFailure(format!(
            "no level with {target} nodes between {lo} and {hi} (grid too coarse?)"
        )));
    }

    // secant through the bracket on the terminal value
    let (ta, tb) = (lo_shot.terminal_value, hi_shot.terminal_value);
    let mut energy = 0.5 * (lo + hi);
    if ta.is_finite() && tb.is_finite() && ta != tb && ta.signum() != tb.signum() {
        let secant = lo - ta * (hi - lo) / (tb - ta);
        if secant > lo && secant < hi {
            energy = secant;
        }
    }
    Ok(EigenResult {
        energy,
        node_count: lo_shot.node_count,
        residual: hi - lo,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn effective_potential_examples() {
        let p = PhysicalParams::atomic(0.0);
        assert_eq!(effective_potential(&p, 0, 1.0).unwrap(), -1.0);
        assert_eq!(effective_potential(&p, 1, 1.0).unwrap(), 0.0);
        let p = PhysicalParams::atomic(0.1);
        assert_relative_eq!(effective_potential(&p, 0, 1.0).unwrap(), -0.900316, epsilon = 1e-6);
        assert!(effective_potential(&p, 0, 0.0).is_err());
    }

    #[test]
    fn shooting_brackets_hydrogen_ground_state() {
        let p = PhysicalParams::atomic(0.0);
        let cfg = OracleConfig::for_state(&p, QuantumNumbers::new(0, 0));
        let below = shoot(&p, 0, -0.51, &cfg).unwrap();
        let above = shoot(&p, 0, -0.49, &cfg).unwrap();
        assert_eq!(below.node_count, 0);
        assert_eq!(above.node_count, 1);
        assert!(above.terminal_value.signum() != below.terminal_value.signum());
    }

    #[test]
    fn node_staircase() {
        // one node per Dirichlet level below the trial energy: -0.12 lies
        // above both the 1s (-1/2) and 2s (-1/8) levels
        let p = PhysicalParams::atomic(0.0);
        let cfg = OracleConfig::for_state(&p, QuantumNumbers::new(1, 0));
        assert_eq!(shoot(&p, 0, -0.12, &cfg).unwrap().node_count, 2);
        assert_eq!(shoot(&p, 0, -0.2, &cfg).unwrap().node_count, 1);
        assert_eq!(shoot(&p, 0, -0.6, &cfg).unwrap().node_count, 0);
        assert!(shoot(&p, 0, 0.1, &cfg).is_err());
    }

    #[test]
    fn hydrogen_levels() {
        let p = PhysicalParams::atomic(0.0);
        for (n, l) in [(0, 0), (1, 0), (0, 1)] {
            let qn = QuantumNumbers::new(n, l);
            let res = solve_eigenvalue(&p, qn, &OracleConfig::for_state(&p, qn)).unwrap();
            assert!(res.converged);
            assert_eq!(res.node_count, n);
            assert!(
                (res.energy - unperturbed_energy(&p, qn)).abs() < 1e-8,
                "{qn}: {}",
                res.energy
            );
        }
    }

    #[test]
    fn unbound_state_is_reported() {
        // 1s unbinds near δ ≈ 0.7 for the cosine-screened case
        let p = PhysicalParams::atomic(2.0);
        let qn = QuantumNumbers::new(0, 0);
        let err = solve_eigenvalue(&p, qn, &OracleConfig::for_state(&p, qn)).unwrap_err();
        assert!(matches!(err, Error::NoBoundState { .. }), "{err}");
    }

    #[test]
    fn config_validation() {
        let p = PhysicalParams::atomic(0.0);
        let qn = QuantumNumbers::new(0, 0);
        let cfg = OracleConfig::for_state(&p, qn);
        assert!(cfg.with_points(100).validate().is_err());
        let short = OracleConfig { r_max: 3.0, ..cfg };
        assert!(solve_eigenvalue(&p, qn, &short).is_err());
    }
}
