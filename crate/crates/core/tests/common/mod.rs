#![allow(dead_code)]

use dqdot::capnet::CapacitanceNetwork;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// e²/(1 aF) in meV, written out independently of the library constants.
pub const E2_MEV_AF: f64 = 160.217_663_4;
/// e/(1 aF) in volts.
pub const E_OVER_AF: f64 = 0.160_217_663_4;
/// Boltzmann constant in meV/K.
pub const KB_MEV: f64 = 0.086_173_332_62;

pub fn reference() -> CapacitanceNetwork {
    CapacitanceNetwork::new(79.8, 100.4, 25.0, 1.84, 3.0, 120.0).unwrap()
}

pub fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Electrostatic energy from the inverse capacitance matrix,
/// `U = ½·q·C⁻¹·q` with `q = N − C_G·V/e`.
pub fn energy_oracle(c: [f64; 5], n: (u32, u32), v: (f64, f64)) -> f64 {
    let [cl, cr, cm, cgl, cgr] = c;
    let det = cl * cr - cm * cm;
    let q1 = f64::from(n.0) - cgl * v.0 / E_OVER_AF;
    let q2 = f64::from(n.1) - cgr * v.1 / E_OVER_AF;
    0.5 * E2_MEV_AF * (cr * q1 * q1 + 2.0 * cm * q1 * q2 + cl * q2 * q2) / det
}

/// Exhaustive minimum over `{0..=n_max}²`, scanning left occupation first.
pub fn brute_ground(c: [f64; 5], v: (f64, f64), n_max: u32) -> (u32, u32) {
    let mut best = (0, 0);
    let mut e_best = f64::INFINITY;
    for a in 0..=n_max {
        for b in 0..=n_max {
            let e = energy_oracle(c, (a, b), v);
            if e < e_best {
                e_best = e;
                best = (a, b);
            }
        }
    }
    best
}

pub fn fields(net: &CapacitanceNetwork) -> [f64; 5] {
    [
        net.c_sigma_left(),
        net.c_sigma_right(),
        net.c_m(),
        net.c_gate_left(),
        net.c_gate_right(),
    ]
}

/// Network whose total capacitances contain both the gate and the interdot
/// capacitance, `C_G + C_m < C_Σ` on each side.
pub fn random_network(rng: &mut ChaCha8Rng) -> CapacitanceNetwork {
    let cl: f64 = rng.gen_range(40.0..160.0);
    let cr = rng.gen_range(40.0..160.0);
    let cgl = rng.gen_range(0.5..6.0);
    let cgr = rng.gen_range(0.5..6.0);
    let cm = rng.gen_range(0.0..0.95) * (cl - cgl).min(cr - cgr);
    let t = rng.gen_range(50.0..300.0);
    CapacitanceNetwork::new(cl, cr, cm, cgl, cgr, t).unwrap()
}

/// Medium-regime network whose coupling energy stays well above half a
/// 0.3 meV bias window, so the two spots of each vertex pair stay apart.
pub fn random_medium_network(rng: &mut ChaCha8Rng) -> CapacitanceNetwork {
    loop {
        let cl = rng.gen_range(60.0..130.0);
        let cr = rng.gen_range(60.0..130.0);
        let f = rng.gen_range(0.4..0.8);
        let cm = f / (1.0 / cl + 1.0 / cr);
        let cgl = rng.gen_range(1.2..4.0);
        let cgr = rng.gen_range(1.2..4.0);
        let net = CapacitanceNetwork::new(cl, cr, cm, cgl, cgr, 120.0).unwrap();
        let em = E2_MEV_AF * cm / (cl * cr - cm * cm);
        if em > 0.25 {
            return net;
        }
    }
}
