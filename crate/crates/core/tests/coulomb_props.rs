mod common;

use ecsc::coulomb::{laguerre, r_squared_expectation, unperturbed_energy};
use ecsc::{CoulombState, Error, PhysicalParams, QuantumNumbers};
use proptest::prelude::*;

fn presets() -> [PhysicalParams; 3] {
    [
        PhysicalParams::atomic(0.0),
        PhysicalParams::table5(0.0),
        PhysicalParams::hbar2m1(4.0, 0.0),
    ]
}

#[test]
fn riccati_identity_for_nodeless_states() {
    for p in presets() {
        let k = p.hbar_over_sqrt2m();
        for l in 0..4 {
            let s = CoulombState::new(p, QuantumNumbers::new(0, l)).unwrap();
            let w = |r: f64| s.base_superpotential(r).unwrap();
            let l_term = p.hbar * p.hbar * f64::from(l * (l + 1)) / (2.0 * p.mass);
            for r in common::log_grid(0.05, 40.0, 120) {
                let h = 1e-3 * r;
                let lhs = w(r).powi(2) - k * common::derivative(w, r, h);
                let rhs = -p.strength_a / r + l_term / (r * r) - s.energy();
                assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs(), "l={l} r={r}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn riccati_identity_for_excited_states_away_from_nodes() {
    let p = PhysicalParams::atomic(0.0);
    let k = p.hbar_over_sqrt2m();
    for (n, l) in [(1, 0), (2, 0), (1, 1), (3, 2)] {
        let s = CoulombState::new(p, QuantumNumbers::new(n, l)).unwrap();
        let nodes = s.nodes();
        let w = |r: f64| s.base_superpotential(r).unwrap();
        let l_term = f64::from(l * (l + 1)) / 2.0;
        for r in common::log_grid(0.05, 40.0, 120) {
            // W has simple poles at the nodes; keep the stencil well clear of them
            if nodes.iter().any(|&x| (r - x).abs() < 0.05 * x.max(1.0)) {
                continue;
            }
            let h = 1e-4 * r;
            let lhs = w(r).powi(2) - k * common::derivative(w, r, h);
            let rhs = -1.0 / r + l_term / (r * r) - s.energy();
            let scale = w(r).powi(2) + rhs.abs();
            assert!((lhs - rhs).abs() <= 1e-6 * scale, "{n},{l} r={r}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn chi_has_exactly_n_sign_changes() {
    for p in presets() {
        for n in 0..6 {
            for l in 0..3 {
                let s = CoulombState::new(p, QuantumNumbers::new(n, l)).unwrap();
                // the outermost node sits below 2N²a₀
                let big_n = f64::from(n + l + 1);
                let r_max = 4.0 * big_n * big_n * p.bohr_radius();
                let samples: Vec<f64> = common::lin_grid(0.0, r_max, 20001)[1..]
                    .iter()
                    .map(|&r| s.chi(r).unwrap())
                    .collect();
                let changes = samples
                    .windows(2)
                    .filter(|w| w[0].signum() != w[1].signum() && w[1] != 0.0)
                    .count();
                assert_eq!(changes as u32, n, "n={n} l={l}");
                assert_eq!(s.nodes().len() as u32, n);
            }
        }
    }
}

#[test]
fn nodes_are_zeros_of_chi() {
    let p = PhysicalParams::atomic(0.0);
    for (n, l) in [(1, 0), (2, 0), (3, 1), (4, 2)] {
        let s = CoulombState::new(p, QuantumNumbers::new(n, l)).unwrap();
        for x in s.nodes() {
            let h = 1e-6 * x;
            let (a, b) = (s.chi(x - h).unwrap(), s.chi(x + h).unwrap());
            assert!(a.signum() != b.signum(), "{n},{l} node {x}");
            assert!(matches!(s.base_superpotential(x), Err(Error::Pole { .. })));
        }
    }
}

#[test]
fn energies_by_preset() {
    let qn = QuantumNumbers::new(0, 0);
    assert_eq!(unperturbed_energy(&PhysicalParams::atomic(0.0), qn), -0.5);
    let t5 = unperturbed_energy(&PhysicalParams::table5(0.0), qn);
    assert!((t5 + 1.0).abs() <= 4.0 * f64::EPSILON);
    assert_eq!(unperturbed_energy(&PhysicalParams::hbar2m1(4.0, 0.0), qn), -4.0);
    // the energy depends on n and l only through N
    let p = PhysicalParams::atomic(0.0);
    for big_n in 1..8u32 {
        let want = -0.5 / f64::from(big_n * big_n);
        for l in 0..big_n {
            assert_eq!(unperturbed_energy(&p, QuantumNumbers::new(big_n - l - 1, l)), want);
        }
    }
}

#[test]
fn chi_examples() {
    let p = PhysicalParams::atomic(0.0);
    let s1 = CoulombState::new(p, QuantumNumbers::new(0, 0)).unwrap();
    // independent: χ_1s = 2r·e^{−r}
    for r in [0.0f64, 0.5, 1.0, 3.0, 12.0] {
        let want = 2.0 * r * (-r).exp();
        assert!((s1.chi(r).unwrap() - want).abs() <= 1e-15 * want.max(1e-300));
    }
    let norm = common::simpson(|r| s1.chi(r).unwrap().powi(2), 0.0, 60.0, 60000);
    assert!((norm - 1.0).abs() <= 1e-12);

    // χ_2s = r(2 − r)e^{−r/2}/(2√2)
    let s2 = CoulombState::new(p, QuantumNumbers::new(1, 0)).unwrap();
    for r in [0.3f64, 1.0, 2.0, 5.5] {
        let want = r * (2.0 - r) * (-r / 2.0).exp() / (2.0 * std::f64::consts::SQRT_2);
        assert!((s2.chi(r).unwrap() - want).abs() <= 1e-15);
    }
    assert_eq!(s2.chi(2.0).unwrap(), 0.0);
    assert!(matches!(s2.chi(-1e-9), Err(Error::Domain { .. })));
}

#[test]
fn r_squared_matches_quadrature() {
    for p in presets() {
        for (n, l) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            let s = CoulombState::new(p, QuantumNumbers::new(n, l)).unwrap();
            let big_n = f64::from(n + l + 1);
            let r_max = 60.0 * big_n * p.bohr_radius();
            let direct = common::simpson(|r| r * r * s.chi(r).unwrap().powi(2), 0.0, r_max, 20000);
            let closed = r_squared_expectation(&p, s.qn);
            assert!(
                (direct - closed).abs() <= 1e-9 * closed,
                "{n},{l}: {direct} vs {closed}"
            );
        }
    }
}

proptest! {
    #[test]
    fn laguerre_recurrence_matches_finite_sum(n in 0u32..=6, k in 0u32..=9, x in 0.0f64..50.0) {
        let sum = common::laguerre_sum(n, k, x);
        // cancellation between terms of size up to x^n/n!: compare on that scale
        let scale: f64 = (0..=n)
            .map(|j| common::binomial(n + k, n - j) * x.powi(j as i32) / common::factorial(j))
            .sum();
        prop_assert!((laguerre(n, k, x) - sum).abs() <= 1e-12 * scale);
    }

    #[test]
    fn laguerre_at_origin_is_binomial(n in 0u32..12, k in 0u32..12) {
        let want = common::binomial(n + k, n);
        prop_assert!((laguerre(n, k, 0.0) - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn chi_derivative_matches_finite_difference(n in 0u32..4, l in 0u32..4, r in 0.2f64..25.0) {
        let s = CoulombState::new(PhysicalParams::atomic(0.0), QuantumNumbers::new(n, l)).unwrap();
        let fd = common::derivative(|x| s.chi(x).unwrap(), r, 1e-3);
        let d = s.chi_derivative(r).unwrap();
        prop_assert!((d - fd).abs() <= 1e-8 * (d.abs() + s.norm * 1e-3), "{} vs {}", d, fd);
    }

    #[test]
    fn labels_round_trip(n in 0u32..30, l in 0u32..17) {
        let qn = QuantumNumbers::new(n, l);
        let label = qn.label().unwrap();
        prop_assert_eq!(label.parse::<QuantumNumbers>().unwrap(), qn);
        let explicit = format!("n={n},l={l}");
        prop_assert_eq!(explicit.parse::<QuantumNumbers>().unwrap(), qn);
    }
}
