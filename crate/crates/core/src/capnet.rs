//! Constant-interaction electrostatics of two capacitively coupled dots.
//!
//! The energy of a charge configuration `(N1, N2)` at gate voltages
//! `(V_GL, V_GR)` is
//!
//! ```text
//! U = ½·E_C1·(N1 − n1)² + ½·E_C2·(N2 − n2)² + E_Cm·(N1 − n1)(N2 − n2)
//! ```
//!
//! with induced charges `n1 = C_GL·V_GL/e`, `n2 = C_GR·V_GR/e` and
//!
//! ```text
//! E_C1 = e²/C_L · 1/(1 − C_m²/(C_L·C_R))
//! E_C2 = e²/C_R · 1/(1 − C_m²/(C_L·C_R))
//! E_Cm = e²·C_m/(C_L·C_R − C_m²)
//! ```
//!
//! Cross capacitances (left gate to right dot and vice versa) are not part
//! of the model.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::units;

/// Default occupation cap for ground-state searches.
pub const DEFAULT_N_MAX: u32 = 10;

/// Default electron temperature when a network file omits it.
pub const DEFAULT_TEMPERATURE_MK: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dot {
    Left,
    Right,
}

impl Dot {
    pub fn other(self) -> Dot {
        match self {
            Dot::Left => Dot::Right,
            Dot::Right => Dot::Left,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dot::Left => "left",
            Dot::Right => "right",
        }
    }
}

/// Occupation `(N, M)` of the left and right dot, counted from an
/// arbitrary reference cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ChargeState {
    pub n_left: u32,
    pub n_right: u32,
}

impl ChargeState {
    pub const fn new(n_left: u32, n_right: u32) -> Self {
        ChargeState { n_left, n_right }
    }

    pub fn on(self, dot: Dot) -> u32 {
        match dot {
            Dot::Left => self.n_left,
            Dot::Right => self.n_right,
        }
    }

    /// The state with one extra carrier on `dot`.
    pub fn added(self, dot: Dot) -> Self {
        match dot {
            Dot::Left => ChargeState::new(self.n_left + 1, self.n_right),
            Dot::Right => ChargeState::new(self.n_left, self.n_right + 1),
        }
    }

    /// The state with one carrier removed from `dot`, if there is one.
    pub fn removed(self, dot: Dot) -> Option<Self> {
        match dot {
            Dot::Left => self
                .n_left
                .checked_sub(1)
                .map(|n| ChargeState::new(n, self.n_right)),
            Dot::Right => self
                .n_right
                .checked_sub(1)
                .map(|n| ChargeState::new(self.n_left, n)),
        }
    }

    pub fn swapped(self) -> Self {
        ChargeState::new(self.n_right, self.n_left)
    }
}

impl fmt::Display for ChargeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n_left, self.n_right)
    }
}

/// Charging energies of the coupled pair, in meV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargingEnergies {
    pub e_c_left: f64,
    pub e_c_right: f64,
    pub e_c_m: f64,
}

impl ChargingEnergies {
    /// `E_Cm ≤ min(E_C1, E_C2)`, which holds whenever `C_m` does not exceed
    /// either total capacitance.
    pub fn is_physical(&self) -> bool {
        self.e_c_m <= self.e_c_left.min(self.e_c_right)
    }
}

/// Ground state of a bounded search together with a flag telling whether the
/// search box constrained the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundState {
    pub state: ChargeState,
    /// Set when a state just outside `{0..=n_max}²` would have lower energy.
    pub at_boundary: bool,
}

/// Electrostatic description of the double dot. Capacitances in aF,
/// temperature in mK.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceNetwork {
    c_sigma_left: f64,
    c_sigma_right: f64,
    c_m: f64,
    c_gate_left: f64,
    c_gate_right: f64,
    temperature_mk: f64,
}

impl CapacitanceNetwork {
    pub fn new(
        c_sigma_left: f64,
        c_sigma_right: f64,
        c_m: f64,
        c_gate_left: f64,
        c_gate_right: f64,
        temperature_mk: f64,
    ) -> Result<Self> {
        let net = CapacitanceNetwork {
            c_sigma_left,
            c_sigma_right,
            c_m,
            c_gate_left,
            c_gate_right,
            temperature_mk,
        };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("c_sigma_left", self.c_sigma_left),
            ("c_sigma_right", self.c_sigma_right),
            ("c_m", self.c_m),
            ("c_gate_left", self.c_gate_left),
            ("c_gate_right", self.c_gate_right),
            ("temperature", self.temperature_mk),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidNetwork(format!("{name} is not finite")));
            }
            if v < 0.0 {
                return Err(Error::InvalidNetwork(format!("{name} = {v} is negative")));
            }
        }
        if self.c_sigma_left <= 0.0 || self.c_sigma_right <= 0.0 {
            return Err(Error::InvalidNetwork(
                "total capacitances must be positive".into(),
            ));
        }
        if self.temperature_mk <= 0.0 {
            return Err(Error::InvalidNetwork("temperature must be positive".into()));
        }
        if self.c_gate_left <= 0.0 || self.c_gate_right <= 0.0 {
            return Err(Error::InvalidNetwork(
                "plunger gate capacitances must be positive".into(),
            ));
        }
        if self.c_gate_left > self.c_sigma_left {
            return Err(Error::InvalidNetwork(format!(
                "c_gate_left = {} exceeds c_sigma_left = {}",
                self.c_gate_left, self.c_sigma_left
            )));
        }
        if self.c_gate_right > self.c_sigma_right {
            return Err(Error::InvalidNetwork(format!(
                "c_gate_right = {} exceeds c_sigma_right = {}",
                self.c_gate_right, self.c_sigma_right
            )));
        }
        let cm2 = self.c_m * self.c_m;
        let prod = self.c_sigma_left * self.c_sigma_right;
        if cm2 >= prod {
            return Err(Error::Degenerate { cm2, prod });
        }
        Ok(())
    }

    pub fn c_sigma_left(&self) -> f64 {
        self.c_sigma_left
    }

    pub fn c_sigma_right(&self) -> f64 {
        self.c_sigma_right
    }

    pub fn c_m(&self) -> f64 {
        self.c_m
    }

    pub fn c_gate_left(&self) -> f64 {
        self.c_gate_left
    }

    pub fn c_gate_right(&self) -> f64 {
        self.c_gate_right
    }

    pub fn temperature_mk(&self) -> f64 {
        self.temperature_mk
    }

    pub fn c_sigma(&self, dot: Dot) -> f64 {
        match dot {
            Dot::Left => self.c_sigma_left,
            Dot::Right => self.c_sigma_right,
        }
    }

    pub fn c_gate(&self, dot: Dot) -> f64 {
        match dot {
            Dot::Left => self.c_gate_left,
            Dot::Right => self.c_gate_right,
        }
    }

    /// Same network with a different interdot capacitance.
    pub fn with_c_m(&self, c_m: f64) -> Result<Self> {
        CapacitanceNetwork::new(
            self.c_sigma_left,
            self.c_sigma_right,
            c_m,
            self.c_gate_left,
            self.c_gate_right,
            self.temperature_mk,
        )
    }

    pub fn with_temperature(&self, temperature_mk: f64) -> Result<Self> {
        CapacitanceNetwork::new(
            self.c_sigma_left,
            self.c_sigma_right,
            self.c_m,
            self.c_gate_left,
            self.c_gate_right,
            temperature_mk,
        )
    }

    /// Left/right relabeled network.
    pub fn swapped(&self) -> Self {
        CapacitanceNetwork {
            c_sigma_left: self.c_sigma_right,
            c_sigma_right: self.c_sigma_left,
            c_m: self.c_m,
            c_gate_left: self.c_gate_right,
            c_gate_right: self.c_gate_left,
            temperature_mk: self.temperature_mk,
        }
    }

    /// Largest stable interdot capacitance, `√(C_L·C_R)` (exclusive).
    pub fn c_m_limit(&self) -> f64 {
        (self.c_sigma_left * self.c_sigma_right).sqrt()
    }

    /// Interdot capacitance giving coupling energy `e_c_m` (meV) with the
    /// present total capacitances: the positive root of
    /// `E·C_m² + e²·C_m − E·C_L·C_R = 0`. Always below [`c_m_limit`].
    ///
    /// [`c_m_limit`]: CapacitanceNetwork::c_m_limit
    pub fn c_m_for_coupling_energy(&self, e_c_m: f64) -> Result<f64> {
        if !e_c_m.is_finite() || e_c_m < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "coupling energy must be finite and non-negative, got {e_c_m}"
            )));
        }
        if e_c_m == 0.0 {
            return Ok(0.0);
        }
        let e2 = units::charging_energy_mev(1.0);
        let prod = self.c_sigma_left * self.c_sigma_right;
        // stable form of (−e² + √(e⁴ + 4E²P))/(2E)
        Ok(2.0 * e_c_m * prod / (e2 + (e2 * e2 + 4.0 * e_c_m * e_c_m * prod).sqrt()))
    }

    pub fn thermal_energy_mev(&self) -> f64 {
        units::thermal_energy_mev(self.temperature_mk)
    }

    pub fn charging_energies(&self) -> ChargingEnergies {
        let prod = self.c_sigma_left * self.c_sigma_right;
        let cm2 = self.c_m * self.c_m;
        let denom = 1.0 - cm2 / prod;
        ChargingEnergies {
            e_c_left: units::charging_energy_mev(self.c_sigma_left) / denom,
            e_c_right: units::charging_energy_mev(self.c_sigma_right) / denom,
            // e²·C_m/(C_L·C_R − C_m²) = (e²/1 aF)·C_m/(prod − cm2)
            e_c_m: units::charging_energy_mev(1.0) * self.c_m / (prod - cm2),
        }
    }

    /// Gate-induced charges `(C_GL·V_GL/e, C_GR·V_GR/e)`.
    pub fn induced_charges(&self, v_gl: f64, v_gr: f64) -> (f64, f64) {
        (
            units::induced_charge(self.c_gate_left, v_gl),
            units::induced_charge(self.c_gate_right, v_gr),
        )
    }

    /// Total electrostatic energy in meV.
    pub fn total_energy(&self, s: ChargeState, v_gl: f64, v_gr: f64) -> f64 {
        let ec = self.charging_energies();
        let (n1, n2) = self.induced_charges(v_gl, v_gr);
        quadratic_energy(&ec, f64::from(s.n_left) - n1, f64::from(s.n_right) - n2)
    }

    /// Addition potential `μ_dot(s) = U(s) − U(s minus one carrier on dot)`.
    pub fn chemical_potential(&self, s: ChargeState, dot: Dot, v_gl: f64, v_gr: f64) -> Result<f64> {
        let ec = self.charging_energies();
        let (n1, n2) = self.induced_charges(v_gl, v_gr);
        if s.on(dot) == 0 {
            return Err(Error::EmptyDot(dot.name()));
        }
        Ok(addition_potential(
            &ec,
            dot,
            f64::from(s.n_left) - n1,
            f64::from(s.n_right) - n2,
        ))
    }

    /// Lowest-energy configuration in `{0..=n_max}²`. Ties go to the smaller
    /// left occupation, then the smaller right occupation.
    pub fn ground_state(&self, v_gl: f64, v_gr: f64, n_max: u32) -> GroundState {
        let ec = self.charging_energies();
        let (n1, n2) = self.induced_charges(v_gl, v_gr);
        ground_state_in(&ec, n1, n2, n_max)
    }
}

/// `U` as a function of the charge offsets `x = N1 − n1`, `y = N2 − n2`.
#[inline]
pub(crate) fn quadratic_energy(ec: &ChargingEnergies, x: f64, y: f64) -> f64 {
    0.5 * ec.e_c_left * x * x + 0.5 * ec.e_c_right * y * y + ec.e_c_m * x * y
}

/// `U(x, y) − U(x − 1, y)` (left) or `U(x, y) − U(x, y − 1)` (right).
#[inline]
pub(crate) fn addition_potential(ec: &ChargingEnergies, dot: Dot, x: f64, y: f64) -> f64 {
    match dot {
        Dot::Left => ec.e_c_left * (x - 0.5) + ec.e_c_m * y,
        Dot::Right => ec.e_c_right * (y - 0.5) + ec.e_c_m * x,
    }
}

/// Row-wise minimisation: for each left occupation the energy is a convex
/// parabola in the right occupation, so only the two integers bracketing its
/// vertex need to be checked.
pub(crate) fn ground_state_in(ec: &ChargingEnergies, n1: f64, n2: f64, n_max: u32) -> GroundState {
    let energy = |a: i64, b: i64| quadratic_energy(ec, a as f64 - n1, b as f64 - n2);
    let top = i64::from(n_max);

    let mut best = (0_i64, 0_i64);
    let mut best_u = f64::INFINITY;
    for a in 0..=top {
        let x = a as f64 - n1;
        let vertex = n2 - ec.e_c_m * x / ec.e_c_right;
        let lo = (vertex.floor() as i64).clamp(0, top);
        let hi = (vertex.ceil() as i64).clamp(0, top);
        let (mut b, mut u) = (lo, energy(a, lo));
        if hi != lo {
            let u_hi = energy(a, hi);
            if u_hi < u {
                b = hi;
                u = u_hi;
            }
        }
        if u < best_u {
            best = (a, b);
            best_u = u;
        }
    }

    let (a, b) = best;
    let at_boundary = (a == 0 && energy(-1, b) < best_u)
        || (a == top && energy(top + 1, b) < best_u)
        || (b == 0 && energy(a, -1) < best_u)
        || (b == top && energy(a, top + 1) < best_u);
    GroundState {
        state: ChargeState::new(a as u32, b as u32),
        at_boundary,
    }
}

const NETWORK_KEYS: [&str; 6] = [
    "c_sigma_left_aF",
    "c_sigma_right_aF",
    "c_m_aF",
    "c_gate_left_aF",
    "c_gate_right_aF",
    "temperature_mK",
];

impl CapacitanceNetwork {
    /// Parses the flat `key = value` network format.
    ///
    /// Recognised keys: `c_sigma_left_aF`, `c_sigma_right_aF`, `c_m_aF`,
    /// `c_gate_left_aF`, `c_gate_right_aF` (all required) and
    /// `temperature_mK` (optional, 120 mK when absent). `#` starts a comment.
    /// Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: [Option<f64>; 6] = [None; 6];
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let slot = NETWORK_KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::parse(lineno, format!("unknown key `{key}`")))?;
            if values[slot].is_some() {
                return Err(Error::parse(lineno, format!("duplicate key `{key}`")));
            }
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{}` is not a number", value.trim())))?;
            values[slot] = Some(v);
        }
        let get = |i: usize| {
            values[i].ok_or_else(|| Error::InvalidNetwork(format!("missing key `{}`", NETWORK_KEYS[i])))
        };
        CapacitanceNetwork::new(
            get(0)?,
            get(1)?,
            get(2)?,
            get(3)?,
            get(4)?,
            values[5].unwrap_or(DEFAULT_TEMPERATURE_MK),
        )
    }
}

impl FromStr for CapacitanceNetwork {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CapacitanceNetwork::parse(s)
    }
}

impl fmt::Display for CapacitanceNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values = [
            self.c_sigma_left,
            self.c_sigma_right,
            self.c_m,
            self.c_gate_left,
            self.c_gate_right,
            self.temperature_mk,
        ];
        for (key, v) in NETWORK_KEYS.iter().zip(values) {
            writeln!(f, "{key} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(cl: f64, cr: f64, cm: f64) -> CapacitanceNetwork {
        CapacitanceNetwork::new(cl, cr, cm, 1.84, 3.0, 120.0).unwrap()
    }

    #[test]
    fn decoupled_energies_are_single_dot() {
        let ec = net(80.0, 100.0, 0.0).charging_energies();
        assert!((ec.e_c_left - 2.002_720_79).abs() < 1e-8);
        assert!((ec.e_c_right - 1.602_176_634).abs() < 1e-12);
        assert_eq!(ec.e_c_m, 0.0);
    }

    #[test]
    fn coupled_energies_match_closed_form() {
        // values from evaluating the closed forms by hand
        let ec = net(79.8, 100.4, 25.0).charging_energies();
        assert!((ec.e_c_left - 2.177_613_05).abs() < 1e-8, "{}", ec.e_c_left);
        assert!((ec.e_c_right - 1.730_811_97).abs() < 1e-8, "{}", ec.e_c_right);
        assert!((ec.e_c_m - 0.542_234_33).abs() < 1e-8, "{}", ec.e_c_m);
    }

    #[test]
    fn swapping_dots_swaps_energies() {
        let a = net(79.8, 100.4, 25.0).charging_energies();
        let b = net(79.8, 100.4, 25.0).swapped().charging_energies();
        assert_eq!(a.e_c_left, b.e_c_right);
        assert_eq!(a.e_c_right, b.e_c_left);
        assert_eq!(a.e_c_m, b.e_c_m);
    }

    #[test]
    fn rejects_degenerate_and_invalid_networks() {
        assert!(matches!(
            CapacitanceNetwork::new(50.0, 50.0, 50.0, 1.0, 1.0, 100.0),
            Err(Error::Degenerate { .. })
        ));
        assert!(CapacitanceNetwork::new(50.0, 50.0, 10.0, 60.0, 1.0, 100.0).is_err());
        assert!(CapacitanceNetwork::new(50.0, 50.0, 10.0, 1.0, 1.0, 0.0).is_err());
        assert!(CapacitanceNetwork::new(0.0, 50.0, 0.0, 0.0, 1.0, 10.0).is_err());
        assert!(CapacitanceNetwork::new(50.0, 50.0, 0.0, 0.0, 1.0, 10.0).is_err());
        assert!(CapacitanceNetwork::new(50.0, 50.0, -1.0, 1.0, 1.0, 10.0).is_err());
        assert!(CapacitanceNetwork::new(f64::NAN, 50.0, 1.0, 1.0, 1.0, 10.0).is_err());
    }

    #[test]
    fn reference_configuration_has_zero_energy() {
        let n = net(79.8, 100.4, 25.0);
        assert_eq!(n.total_energy(ChargeState::new(0, 0), 0.0, 0.0), 0.0);
    }

    #[test]
    fn second_difference_is_charging_energy() {
        let n = net(79.8, 100.4, 25.0);
        let ec = n.charging_energies();
        let u = |a| n.total_energy(ChargeState::new(a, 2), 0.31, -0.12);
        let d2 = (u(4) - u(3)) - (u(3) - u(2));
        assert!((d2 - ec.e_c_left).abs() < 1e-12);
    }

    #[test]
    fn addition_potentials_step_by_charging_energies() {
        let n = net(79.8, 100.4, 25.0);
        let ec = n.charging_energies();
        let (vl, vr) = (0.2, 0.15);
        let mu = |a, b, d| n.chemical_potential(ChargeState::new(a, b), d, vl, vr).unwrap();
        assert!((mu(3, 2, Dot::Left) - mu(2, 2, Dot::Left) - ec.e_c_left).abs() < 1e-12);
        assert!((mu(2, 3, Dot::Right) - mu(2, 2, Dot::Right) - ec.e_c_right).abs() < 1e-12);
        assert!((mu(2, 3, Dot::Left) - mu(2, 2, Dot::Left) - ec.e_c_m).abs() < 1e-12);
        assert!((mu(3, 2, Dot::Right) - mu(2, 2, Dot::Right) - ec.e_c_m).abs() < 1e-12);
    }

    #[test]
    fn removal_from_empty_dot_is_rejected() {
        let n = net(79.8, 100.4, 25.0);
        assert!(matches!(
            n.chemical_potential(ChargeState::new(0, 3), Dot::Left, 0.0, 0.0),
            Err(Error::EmptyDot("left"))
        ));
        assert!(n
            .chemical_potential(ChargeState::new(2, 0), Dot::Right, 0.0, 0.0)
            .is_err());
    }

    #[test]
    fn zero_gates_give_empty_dots() {
        let g = net(79.8, 100.4, 25.0).ground_state(0.0, 0.0, DEFAULT_N_MAX);
        assert_eq!(g.state, ChargeState::new(0, 0));
        assert!(!g.at_boundary);
    }

    #[test]
    fn boundary_flag_when_window_exceeds_search_box() {
        let n = net(79.8, 100.4, 25.0);
        // 20 periods above the reference cell, n_max = 10
        let g = n.ground_state(20.0 * units::voltage_period(1.84), 0.0, DEFAULT_N_MAX);
        assert_eq!(g.state.n_left, DEFAULT_N_MAX);
        assert!(g.at_boundary);
        // negative gate voltage pushes against the lower edge
        let g = n.ground_state(-0.5, 0.0, DEFAULT_N_MAX);
        assert_eq!(g.state.n_left, 0);
        assert!(g.at_boundary);
    }

    #[test]
    fn network_file_round_trip() {
        let n = net(79.8, 100.4, 25.0);
        let parsed: CapacitanceNetwork = n.to_string().parse().unwrap();
        assert_eq!(parsed, n);
    }

    #[test]
    fn network_file_errors_carry_line_numbers() {
        let text = "# comment\nc_sigma_left_aF = 79.8\nbogus = 1\n";
        match CapacitanceNetwork::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let dup = "c_m_aF = 1\nc_m_aF = 2\n";
        assert!(matches!(CapacitanceNetwork::parse(dup), Err(Error::Parse { line: 2, .. })));
        let missing = "c_sigma_left_aF = 79.8\n";
        assert!(matches!(CapacitanceNetwork::parse(missing), Err(Error::InvalidNetwork(_))));
        let bad = "c_m_aF = abc\n";
        assert!(matches!(CapacitanceNetwork::parse(bad), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn temperature_defaults_when_absent() {
        let text = "c_sigma_left_aF = 79.8\nc_sigma_right_aF = 100.4\nc_m_aF = 25 # interdot\n\
                    c_gate_left_aF = 1.84\nc_gate_right_aF = 3.0\n";
        let n = CapacitanceNetwork::parse(text).unwrap();
        assert_eq!(n.temperature_mk(), DEFAULT_TEMPERATURE_MK);
        assert_eq!(n.c_m(), 25.0);
    }

    #[test]
    fn coupling_energy_inverse_matches_bisection() {
        let base = net(79.8, 100.4, 0.0);
        for target in [0.0, 0.05, 0.58, 1.34, 4.07, 40.0] {
            let cm = base.c_m_for_coupling_energy(target).unwrap();
            let (mut lo, mut hi) = (0.0, base.c_m_limit());
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let e = net(79.8, 100.4, mid).charging_energies().e_c_m;
                if e < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((cm - lo).abs() < 1e-9 * (1.0 + lo), "{target}: {cm} vs {lo}");
            assert!(cm < base.c_m_limit());
        }
        assert!(base.c_m_for_coupling_energy(-1.0).is_err());
        assert!(base.c_m_for_coupling_energy(f64::NAN).is_err());
    }
}
