use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::capnet::{addition_potential, ground_state_in, CapacitanceNetwork, ChargeState, Dot};
use crate::error::{Error, Result};
use crate::units;

/// Rectangle in the `(V_GL, V_GR)` plane, volts, `(start, stop)` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub v_gl: (f64, f64),
    pub v_gr: (f64, f64),
}

impl Window {
    pub fn new(v_gl: (f64, f64), v_gr: (f64, f64)) -> Result<Self> {
        for (name, (a, b)) in [("v_gl", v_gl), ("v_gr", v_gr)] {
            if !a.is_finite() || !b.is_finite() || a >= b {
                return Err(Error::InvalidArgument(format!(
                    "window {name} needs finite start < stop, got ({a}, {b})"
                )));
            }
        }
        Ok(Window { v_gl, v_gr })
    }

    /// `n` cells along each gate, from the center of cell `(1, 1)` to the
    /// center of cell `(1 + n, 1 + n)`. Every vertex pair between those
    /// centers lies well inside the window.
    pub fn cells(net: &CapacitanceNetwork, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cell count must be at least 1".into()));
        }
        let dl = units::voltage_period(net.c_gate_left());
        let dr = units::voltage_period(net.c_gate_right());
        let span = f64::from(n);
        Window::new((dl, (1.0 + span) * dl), (dr, (1.0 + span) * dr))
    }

    pub fn contains(&self, v_gl: f64, v_gr: f64) -> bool {
        (self.v_gl.0..=self.v_gl.1).contains(&v_gl) && (self.v_gr.0..=self.v_gr.1).contains(&v_gr)
    }

    pub fn swapped(&self) -> Self {
        Window {
            v_gl: self.v_gr,
            v_gr: self.v_gl,
        }
    }
}

/// Pixel counts along `V_GL` and `V_GR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub n_gl: usize,
    pub n_gr: usize,
}

impl Resolution {
    pub fn new(n_gl: usize, n_gr: usize) -> Result<Self> {
        if n_gl < 2 || n_gr < 2 {
            return Err(Error::InvalidArgument(format!(
                "resolution must be at least 2 per axis, got {n_gl}x{n_gr}"
            )));
        }
        Ok(Resolution { n_gl, n_gr })
    }

    pub fn square(n: usize) -> Result<Self> {
        Resolution::new(n, n)
    }
}

/// Evenly spaced grid including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument("axis needs at least 2 points".into()));
        }
        if !start.is_finite() || !stop.is_finite() || start == stop {
            return Err(Error::InvalidArgument(format!(
                "axis end points must be finite and distinct, got ({start}, {stop})"
            )));
        }
        Ok(Axis { start, stop, count })
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.step()
        }
    }

    /// Fractional pixel index of a voltage.
    pub fn index_of(&self, v: f64) -> f64 {
        (v - self.start) / self.step()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }
}

/// Ground-state occupation per pixel, row-major with rows along `V_GR`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeMap {
    pub v_gl: Axis,
    pub v_gr: Axis,
    pub states: Vec<ChargeState>,
    /// Pixels whose ground state was constrained by `n_max`.
    pub boundary_pixels: usize,
}

impl ChargeMap {
    pub fn get(&self, row: usize, col: usize) -> ChargeState {
        self.states[row * self.v_gl.count + col]
    }
}

/// Conductance per pixel (arbitrary units), row-major with rows along `V_GR`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceMap {
    pub v_gl: Axis,
    pub v_gr: Axis,
    pub values: Vec<f64>,
    /// Source–drain bias the map was taken at, volts.
    pub bias: f64,
}

impl ConductanceMap {
    pub fn new(v_gl: Axis, v_gr: Axis, values: Vec<f64>, bias: f64) -> Result<Self> {
        let map = ConductanceMap {
            v_gl,
            v_gr,
            values,
            bias,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn validate(&self) -> Result<()> {
        if self.v_gl.count < 2 || self.v_gr.count < 2 {
            return Err(Error::InvalidArgument("map axes need at least 2 points".into()));
        }
        if self.values.len() != self.v_gl.count * self.v_gr.count {
            return Err(Error::InvalidArgument(format!(
                "map has {} values, axes need {}",
                self.values.len(),
                self.v_gl.count * self.v_gr.count
            )));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "map values must be finite and non-negative, found {v}"
            )));
        }
        if !self.bias.is_finite() {
            return Err(Error::InvalidArgument("bias must be finite".into()));
        }
        Ok(())
    }

    pub fn cols(&self) -> usize {
        self.v_gl.count
    }

    pub fn rows(&self) -> usize {
        self.v_gr.count
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.v_gl.count + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.cols();
        &self.values[row * w..(row + 1) * w]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Normalised transport window for a level at energy `mu` (meV) with
/// `ev = e·|bias|` (meV) and `kt = k_B·T` (meV).
///
/// At zero bias this is the thermal resonance `cosh⁻²(μ/2k_BT)`. At finite
/// bias it is the Fermi-function difference across `[−eV/2, +eV/2]`,
/// normalised to one at the band center: flat inside the window, half
/// height exactly at its edges, with thermal tails outside. The finite-bias
/// form reduces to the zero-bias one as `eV → 0`.
pub fn transport_window(mu: f64, ev: f64, kt: f64) -> f64 {
    let two_kt = 2.0 * kt;
    if ev <= 1e-9 * kt {
        let c = (mu / two_kt).cosh();
        return 1.0 / (c * c);
    }
    let half = 0.5 * ev;
    let num = ((mu + half) / two_kt).tanh() - ((mu - half) / two_kt).tanh();
    0.5 * num / (half / two_kt).tanh()
}

fn check_grid(window: &Window, res: Resolution) -> Result<(Axis, Axis)> {
    Window::new(window.v_gl, window.v_gr)?;
    Resolution::new(res.n_gl, res.n_gr)?;
    Ok((
        Axis::new(window.v_gl.0, window.v_gl.1, res.n_gl)?,
        Axis::new(window.v_gr.0, window.v_gr.1, res.n_gr)?,
    ))
}

/// Per-pixel ground state over `window`.
pub fn charge_map(net: &CapacitanceNetwork, window: &Window, res: Resolution, n_max: u32) -> Result<ChargeMap> {
    let (ax_gl, ax_gr) = check_grid(window, res)?;
    let ec = net.charging_energies();
    let rows: Vec<(Vec<ChargeState>, usize)> = (0..res.n_gr)
        .into_par_iter()
        .map(|r| {
            let v_gr = ax_gr.value(r);
            let mut hits = 0;
            let row = ax_gl
                .values()
                .map(|v_gl| {
                    let (n1, n2) = net.induced_charges(v_gl, v_gr);
                    let g = ground_state_in(&ec, n1, n2, n_max);
                    hits += usize::from(g.at_boundary);
                    g.state
                })
                .collect();
            (row, hits)
        })
        .collect();
    let boundary_pixels = rows.iter().map(|(_, h)| h).sum();
    let states = rows.into_iter().flat_map(|(r, _)| r).collect();
    Ok(ChargeMap {
        v_gl: ax_gl,
        v_gr: ax_gr,
        states,
        boundary_pixels,
    })
}

/// Parallel-transport conductance map.
///
/// Each dot contributes `g·W(μ)` for its addition and removal potentials
/// relative to the local ground state; the two dots' contributions add.
pub fn conductance_map(
    net: &CapacitanceNetwork,
    window: &Window,
    res: Resolution,
    bias: f64,
    g_left: f64,
    g_right: f64,
) -> Result<ConductanceMap> {
    let (ax_gl, ax_gr) = check_grid(window, res)?;
    if !bias.is_finite() || !g_left.is_finite() || !g_right.is_finite() {
        return Err(Error::InvalidArgument("bias and conductance scales must be finite".into()));
    }
    if g_left < 0.0 || g_right < 0.0 {
        return Err(Error::InvalidArgument("conductance scales must be non-negative".into()));
    }
    let kt = net.thermal_energy_mev();
    if kt <= 0.0 {
        return Err(Error::InvalidNetwork("temperature must be positive".into()));
    }
    let ec = net.charging_energies();
    let ev = units::volts_to_mev(bias.abs());

    // Search box large enough that no pixel is clamped.
    let reach = |c: f64, a: &Axis| units::induced_charge(c, a.start.abs().max(a.stop.abs()));
    let n_max = (reach(net.c_gate_left(), &ax_gl).max(reach(net.c_gate_right(), &ax_gr)).ceil() as u32 + 2)
        .max(crate::capnet::DEFAULT_N_MAX);

    let values: Vec<f64> = (0..res.n_gr)
        .into_par_iter()
        .flat_map_iter(|r| {
            let v_gr = ax_gr.value(r);
            (0..ax_gl.count).map(move |c| {
                let (n1, n2) = net.induced_charges(ax_gl.value(c), v_gr);
                let s = ground_state_in(&ec, n1, n2, n_max).state;
                let x = f64::from(s.n_left) - n1;
                let y = f64::from(s.n_right) - n2;
                let mut g = 0.0;
                for (dot, scale, occupied) in [
                    (Dot::Left, g_left, s.n_left > 0),
                    (Dot::Right, g_right, s.n_right > 0),
                ] {
                    let (dx, dy) = match dot {
                        Dot::Left => (1.0, 0.0),
                        Dot::Right => (0.0, 1.0),
                    };
                    let add = addition_potential(&ec, dot, x + dx, y + dy);
                    let mut w = transport_window(add, ev, kt);
                    if occupied {
                        w += transport_window(addition_potential(&ec, dot, x, y), ev, kt);
                    }
                    g += scale * w;
                }
                g
            })
        })
        .collect();
    ConductanceMap::new(ax_gl, ax_gr, values, bias)
}

/// Adds seeded Gaussian noise with standard deviation `sigma_frac` times the
/// map maximum, clamping at zero.
pub fn add_gaussian_noise(map: &mut ConductanceMap, sigma_frac: f64, seed: u64) -> Result<()> {
    if !sigma_frac.is_finite() || sigma_frac < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise fraction must be non-negative, got {sigma_frac}"
        )));
    }
    if sigma_frac == 0.0 {
        return Ok(());
    }
    let sigma = sigma_frac * map.max_value();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in &mut map.values {
        *v = (*v + normal.sample(&mut rng)).max(0.0);
    }
    Ok(())
}
