mod common;

use common::*;
use dqdot::capnet::{CapacitanceNetwork, ChargeState, Dot};
use dqdot::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn network() -> impl Strategy<Value = CapacitanceNetwork> {
    any::<u64>().prop_map(|seed| random_network(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Any stable coupling, including `C_m` beyond a total capacitance.
fn stable_network() -> impl Strategy<Value = CapacitanceNetwork> {
    (20.0..200.0f64, 20.0..200.0f64, 0.0..0.99f64, 0.1..10.0f64, 0.1..10.0f64, 1.0..500.0f64).prop_map(
        |(cl, cr, f, gl, gr, t)| {
            CapacitanceNetwork::new(cl, cr, f * (cl * cr).sqrt(), gl.min(cl), gr.min(cr), t).unwrap()
        },
    )
}

#[test]
fn reference_energies() {
    let ec = reference().charging_energies();
    let det = 79.8 * 100.4 - 25.0 * 25.0;
    assert!(rel(ec.e_c_left, E2_MEV_AF * 100.4 / det) < 1e-14);
    assert!(rel(ec.e_c_right, E2_MEV_AF * 79.8 / det) < 1e-14);
    assert!(rel(ec.e_c_m, E2_MEV_AF * 25.0 / det) < 1e-14);
    assert!((ec.e_c_left - 2.178).abs() < 1e-3);
    assert!((ec.e_c_right - 1.731).abs() < 1e-3);
    assert!((ec.e_c_m - 0.542).abs() < 1e-3);
}

#[test]
fn decoupled_dots() {
    let ec = CapacitanceNetwork::new(80.0, 100.0, 0.0, 2.0, 2.0, 100.0)
        .unwrap()
        .charging_energies();
    assert!((ec.e_c_left - 2.0027).abs() < 1e-4);
    assert!((ec.e_c_right - 1.6022).abs() < 1e-4);
    assert_eq!(ec.e_c_m, 0.0);
}

#[test]
fn degenerate_coupling_is_rejected() {
    let r = CapacitanceNetwork::new(80.0, 100.0, 90.0, 2.0, 2.0, 100.0);
    assert!(matches!(r, Err(Error::Degenerate { .. })));
}

#[test]
fn one_period_up_adds_one_left_charge() {
    let net = reference();
    let dv = E_OVER_AF / net.c_gate_left();
    let (vl, vr) = (3.0 * dv, 2.0 * E_OVER_AF / net.c_gate_right());
    let a = net.ground_state(vl, vr, 10).state;
    let b = net.ground_state(vl + dv, vr, 10).state;
    assert_eq!(a, ChargeState::new(3, 2));
    assert_eq!(b, ChargeState::new(a.n_left + 1, a.n_right));
    assert_eq!(brute_ground(fields(&net), (vl + dv, vr), 10), (4, 2));
}

#[test]
fn cell_centre_beats_single_charge_neighbours() {
    let net = reference();
    let (vl, vr) = (2.0 * E_OVER_AF / 1.84, 1.0 * E_OVER_AF / 3.0);
    let u = |a, b| net.total_energy(ChargeState::new(a, b), vl, vr);
    let centre = u(2, 1);
    for (a, b) in [(1, 1), (3, 1), (2, 0), (2, 2)] {
        assert!(centre < u(a, b));
    }
}

#[test]
fn empty_dot_has_no_removal_potential() {
    let r = reference().chemical_potential(ChargeState::new(0, 3), Dot::Left, 0.0, 0.0);
    assert!(matches!(r, Err(Error::EmptyDot(_))));
}

#[test]
fn left_resonance_is_a_straight_line() {
    // μ_L(1,0) = 0 along V_GR: solve for V_GL at several V_GR and check collinearity
    let net = reference();
    let s = ChargeState::new(1, 0);
    let mu = |vl: f64, vr: f64| net.chemical_potential(s, Dot::Left, vl, vr).unwrap();
    let root = |vr: f64| {
        let (a, b) = (mu(0.0, vr), mu(0.1, vr));
        -a * 0.1 / (b - a)
    };
    let pts: Vec<(f64, f64)> = [0.0, 0.01, 0.02, 0.03].iter().map(|&vr| (root(vr), vr)).collect();
    let slope = |p: (f64, f64), q: (f64, f64)| (q.1 - p.1) / (q.0 - p.0);
    let s0 = slope(pts[0], pts[1]);
    for w in pts.windows(2) {
        assert!(rel(slope(w[0], w[1]), s0) < 1e-9);
    }
    // slope from the quadratic model: dV_GR/dV_GL = −(E_C1·C_GL)/(E_Cm·C_GR)
    let ec = net.charging_energies();
    let want = -(ec.e_c_left * net.c_gate_left()) / (ec.e_c_m * net.c_gate_right());
    assert!(rel(s0, want) < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ground_state_matches_exhaustive_search(net in network(), x in -0.5..11.0f64, y in -0.5..11.0f64) {
        let v = (x * E_OVER_AF / net.c_gate_left(), y * E_OVER_AF / net.c_gate_right());
        let g = net.ground_state(v.0, v.1, 10).state;
        prop_assert_eq!((g.n_left, g.n_right), brute_ground(fields(&net), v, 10));
    }

    #[test]
    fn energy_matches_capacitance_matrix(net in stable_network(), a in 0u32..8, b in 0u32..8, x in -0.2..0.5f64, y in -0.2..0.5f64) {
        let u = net.total_energy(ChargeState::new(a, b), x, y);
        let want = energy_oracle(fields(&net), (a, b), (x, y));
        prop_assert!((u - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn relabeling_symmetry(net in stable_network(), a in 0u32..6, b in 0u32..6, x in 0.0..0.5f64, y in 0.0..0.5f64) {
        let sw = net.swapped();
        let (e, es) = (net.charging_energies(), sw.charging_energies());
        prop_assert_eq!(e.e_c_left, es.e_c_right);
        prop_assert_eq!(e.e_c_right, es.e_c_left);
        prop_assert_eq!(e.e_c_m, es.e_c_m);
        let s = ChargeState::new(a, b);
        let u = net.total_energy(s, x, y);
        prop_assert!((u - sw.total_energy(s.swapped(), y, x)).abs() <= 1e-12 * (1.0 + u.abs()));
        prop_assert_eq!(net.ground_state(x, y, 10).state.swapped(), sw.ground_state(y, x, 10).state);
        if a > 0 {
            let mu = net.chemical_potential(s, Dot::Left, x, y).unwrap();
            let mus = sw.chemical_potential(s.swapped(), Dot::Right, y, x).unwrap();
            prop_assert!((mu - mus).abs() <= 1e-12 * (1.0 + mu.abs()));
        }
    }

    #[test]
    fn second_differences_are_constant(net in stable_network(), a in 1u32..6, b in 1u32..6, x in -0.3..0.3f64, y in -0.3..0.3f64) {
        let ec = net.charging_energies();
        let u = |p: u32, q: u32| net.total_energy(ChargeState::new(p, q), x, y);
        let d_left = u(a + 1, b) - 2.0 * u(a, b) + u(a - 1, b);
        let d_right = u(a, b + 1) - 2.0 * u(a, b) + u(a, b - 1);
        let d_cross = u(a + 1, b + 1) - u(a + 1, b) - u(a, b + 1) + u(a, b);
        let tol = 1e-9 * (1.0 + u(a, b).abs());
        prop_assert!((d_left - ec.e_c_left).abs() < tol);
        prop_assert!((d_right - ec.e_c_right).abs() < tol);
        prop_assert!((d_cross - ec.e_c_m).abs() < tol);
    }

    #[test]
    fn addition_potential_steps(net in stable_network(), a in 1u32..6, b in 1u32..6, x in 0.0..0.3f64, y in 0.0..0.3f64) {
        let ec = net.charging_energies();
        let mu = |p, q, d| net.chemical_potential(ChargeState::new(p, q), d, x, y).unwrap();
        let tol = 1e-9 * (1.0 + mu(a, b, Dot::Left).abs());
        prop_assert!((mu(a + 1, b, Dot::Left) - mu(a, b, Dot::Left) - ec.e_c_left).abs() < tol);
        prop_assert!((mu(a, b + 1, Dot::Left) - mu(a, b, Dot::Left) - ec.e_c_m).abs() < tol);
        prop_assert!((mu(a, b + 1, Dot::Right) - mu(a, b, Dot::Right) - ec.e_c_right).abs() < tol);
    }

    #[test]
    fn coupling_energy_increases_with_c_m(net in stable_network(), f in 0.0..0.98f64, g in 0.0..0.98f64) {
        prop_assume!(f < g);
        let lim = net.c_m_limit();
        let lo = net.with_c_m(f * lim).unwrap().charging_energies();
        let hi = net.with_c_m(g * lim).unwrap().charging_energies();
        prop_assert!(lo.e_c_m < hi.e_c_m);
    }

    #[test]
    fn zero_coupling_gives_single_dot_energies(net in stable_network()) {
        let ec = net.with_c_m(0.0).unwrap().charging_energies();
        prop_assert!(rel(ec.e_c_left, E2_MEV_AF / net.c_sigma_left()) < 1e-15);
        prop_assert!(rel(ec.e_c_right, E2_MEV_AF / net.c_sigma_right()) < 1e-15);
        prop_assert_eq!(ec.e_c_m, 0.0);
    }

    #[test]
    fn coupling_energy_inverse(net in stable_network(), f in 0.0..0.98f64) {
        let c_m = f * net.c_m_limit();
        let e = net.with_c_m(c_m).unwrap().charging_energies().e_c_m;
        let back = net.c_m_for_coupling_energy(e).unwrap();
        prop_assert!((back - c_m).abs() <= 1e-9 * (1.0 + c_m));
    }

    #[test]
    fn constant_offset_does_not_move_the_minimum(net in network(), x in 0.0..5.0f64, y in 0.0..5.0f64, k in -100.0..100.0f64) {
        let v = (x * E_OVER_AF / net.c_gate_left(), y * E_OVER_AF / net.c_gate_right());
        let shifted = |s: ChargeState| net.total_energy(s, v.0, v.1) + k;
        let g = net.ground_state(v.0, v.1, 10).state;
        for a in 0..=10 {
            for b in 0..=10 {
                prop_assert!(shifted(g) <= shifted(ChargeState::new(a, b)) + 1e-12);
            }
        }
    }

    #[test]
    fn network_file_round_trip(net in stable_network()) {
        let back = CapacitanceNetwork::parse(&net.to_string()).unwrap();
        prop_assert_eq!(back, net);
    }
}
