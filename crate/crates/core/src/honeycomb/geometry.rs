use std::fmt;

use crate::capnet::CapacitanceNetwork;
use crate::error::{Error, Result};
use crate::units;

use super::map::Window;

/// Fractional splitting below which the dots count as weakly coupled.
pub const WEAK_MEDIUM_THRESHOLD: f64 = 0.3;
/// Fractional splitting at and above which the dots count as strongly coupled.
pub const MEDIUM_STRONG_THRESHOLD: f64 = 1.0;

/// Measurable honeycomb dimensions, all in volts.
///
/// `dv_gl_m` is the shift of a left-dot addition line along `V_GL` when the
/// right dot gains one carrier (and symmetrically for `dv_gr_m`). `delta_v_*`
/// is the gate-axis width of a conducting band at source-drain bias `bias`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoneycombGeometry {
    pub dv_gl: f64,
    pub dv_gr: f64,
    pub dv_gl_m: f64,
    pub dv_gr_m: f64,
    pub delta_v_gl: f64,
    pub delta_v_gr: f64,
    pub bias: f64,
}

impl HoneycombGeometry {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("dv_gl", self.dv_gl),
            ("dv_gr", self.dv_gr),
            ("dv_gl_m", self.dv_gl_m),
            ("dv_gr_m", self.dv_gr_m),
            ("delta_v_gl", self.delta_v_gl),
            ("delta_v_gr", self.delta_v_gr),
            ("bias", self.bias),
        ];
        if let Some((name, _)) = all.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidGeometry(format!("{name} is not finite")));
        }
        if self.dv_gl <= 0.0 || self.dv_gr <= 0.0 {
            return Err(Error::InvalidGeometry("cell periods must be positive".into()));
        }
        if self.dv_gl_m < 0.0 || self.dv_gr_m < 0.0 || self.delta_v_gl < 0.0 || self.delta_v_gr < 0.0 {
            return Err(Error::InvalidGeometry("negative splitting or band width".into()));
        }
        if self.dv_gl_m >= self.dv_gl || self.dv_gr_m >= self.dv_gr {
            return Err(Error::InvalidGeometry(
                "vertex splitting must be smaller than the cell period".into(),
            ));
        }
        let has_bands = self.delta_v_gl > 0.0 || self.delta_v_gr > 0.0;
        if (self.bias != 0.0) != has_bands {
            return Err(Error::InvalidGeometry(
                "band widths must be zero exactly when the bias is zero".into(),
            ));
        }
        Ok(())
    }

    /// `ΔV_GL^m/ΔV_GL + ΔV_GR^m/ΔV_GR`.
    pub fn fractional_splitting(&self) -> f64 {
        self.dv_gl_m / self.dv_gl + self.dv_gr_m / self.dv_gr
    }
}

impl fmt::Display for HoneycombGeometry {
    /// Key–value sidecar format, one field per line, volts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dv_gl_V = {}", self.dv_gl)?;
        writeln!(f, "dv_gr_V = {}", self.dv_gr)?;
        writeln!(f, "dv_gl_m_V = {}", self.dv_gl_m)?;
        writeln!(f, "dv_gr_m_V = {}", self.dv_gr_m)?;
        writeln!(f, "delta_v_gl_V = {}", self.delta_v_gl)?;
        writeln!(f, "delta_v_gr_V = {}", self.delta_v_gr)?;
        writeln!(f, "bias_V = {}", self.bias)
    }
}

impl HoneycombGeometry {
    /// Parses the sidecar written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        const KEYS: [&str; 7] = [
            "dv_gl_V",
            "dv_gr_V",
            "dv_gl_m_V",
            "dv_gr_m_V",
            "delta_v_gl_V",
            "delta_v_gr_V",
            "bias_V",
        ];
        let mut vals = [None; 7];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected `key = value`"))?;
            let slot = KEYS
                .iter()
                .position(|key| *key == k.trim())
                .ok_or_else(|| Error::parse(i + 1, format!("unknown key `{}`", k.trim())))?;
            vals[slot] = Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(i + 1, "not a number"))?,
            );
        }
        let get = |i: usize| {
            vals[i].ok_or_else(|| Error::InvalidGeometry(format!("missing key `{}`", KEYS[i])))
        };
        Ok(HoneycombGeometry {
            dv_gl: get(0)?,
            dv_gr: get(1)?,
            dv_gl_m: get(2)?,
            dv_gr_m: get(3)?,
            delta_v_gl: get(4)?,
            delta_v_gr: get(5)?,
            bias: get(6)?,
        })
    }
}

/// Analytic honeycomb geometry of a network at source–drain bias `bias` (V).
///
/// `ΔV = e/C_G` per gate, `ΔV_GL^m = ΔV_GL·C_m/C_R`, `ΔV_GR^m = ΔV_GR·C_m/C_L`
/// and `δV = |bias|·C_Σ/C_G`.
pub fn cell_dimensions(net: &CapacitanceNetwork, bias: f64) -> HoneycombGeometry {
    let dv_gl = units::voltage_period(net.c_gate_left());
    let dv_gr = units::voltage_period(net.c_gate_right());
    HoneycombGeometry {
        dv_gl,
        dv_gr,
        dv_gl_m: dv_gl * net.c_m() / net.c_sigma_right(),
        dv_gr_m: dv_gr * net.c_m() / net.c_sigma_left(),
        delta_v_gl: bias.abs() * net.c_sigma_left() / net.c_gate_left(),
        delta_v_gr: bias.abs() * net.c_sigma_right() / net.c_gate_right(),
        bias,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// Lower-left vertex of a pair, shared by `(N,M)`, `(N+1,M)`, `(N,M+1)`.
    Electron,
    /// Upper-right vertex, shared by `(N+1,M)`, `(N,M+1)`, `(N+1,M+1)`.
    Hole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriplePoint {
    pub v_gl: f64,
    pub v_gr: f64,
    pub kind: VertexKind,
    /// Lowest occupation `(N, M)` among the states meeting at the pair.
    pub n_left: u32,
    pub n_right: u32,
}

/// Offset `(x0, y0)` of each vertex from the pair midpoint, in induced-charge
/// units: the solution of `[[E_C1, E_Cm], [E_Cm, E_C2]]·(x0, y0) = E_Cm/2·(1, 1)`.
pub(crate) fn half_pair_offset(net: &CapacitanceNetwork) -> (f64, f64) {
    let ec = net.charging_energies();
    let det = ec.e_c_left * ec.e_c_right - ec.e_c_m * ec.e_c_m;
    let half = 0.5 * ec.e_c_m;
    (
        half * (ec.e_c_right - ec.e_c_m) / det,
        half * (ec.e_c_left - ec.e_c_m) / det,
    )
}

/// All triple points with non-negative occupations inside `window`, ordered
/// by `(N, M, kind)`.
///
/// The two vertices of a pair are separated by `(a·ΔV_GL, b·ΔV_GR)` with
/// `a = s1(1 − s2)/(1 − s1·s2)`, `s1 = C_m/C_R`, `s2 = C_m/C_L` (and `b` by
/// exchanging `s1` and `s2`); to first order in `C_m` this is `(ΔV_GL^m, ΔV_GR^m)`.
pub fn triple_points(net: &CapacitanceNetwork, window: &Window) -> Vec<TriplePoint> {
    let dv_gl = units::voltage_period(net.c_gate_left());
    let dv_gr = units::voltage_period(net.c_gate_right());
    let (x0, y0) = half_pair_offset(net);

    let range = |lo: f64, hi: f64, dv: f64| {
        let first = ((lo / dv).floor() - 1.0).max(0.0) as u32;
        let last = ((hi / dv).ceil() + 1.0).max(0.0) as u32;
        first..=last
    };

    let mut out = Vec::new();
    for n in range(window.v_gl.0, window.v_gl.1, dv_gl) {
        for m in range(window.v_gr.0, window.v_gr.1, dv_gr) {
            let cx = f64::from(n) + 0.5;
            let cy = f64::from(m) + 0.5;
            for (kind, sign) in [(VertexKind::Electron, -1.0), (VertexKind::Hole, 1.0)] {
                let v_gl = (cx + sign * x0) * dv_gl;
                let v_gr = (cy + sign * y0) * dv_gr;
                if window.contains(v_gl, v_gr) {
                    out.push(TriplePoint {
                        v_gl,
                        v_gr,
                        kind,
                        n_left: n,
                        n_right: m,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    Weak,
    Medium,
    Strong,
}

impl RegimeLabel {
    pub fn from_splitting(f: f64) -> Self {
        if f < WEAK_MEDIUM_THRESHOLD {
            RegimeLabel::Weak
        } else if f < MEDIUM_STRONG_THRESHOLD {
            RegimeLabel::Medium
        } else {
            RegimeLabel::Strong
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Weak => "weak",
            RegimeLabel::Medium => "medium",
            RegimeLabel::Strong => "strong",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRegime {
    pub label: RegimeLabel,
    pub fractional_splitting: f64,
}

impl CouplingRegime {
    pub fn from_splitting(fractional_splitting: f64) -> Self {
        CouplingRegime {
            label: RegimeLabel::from_splitting(fractional_splitting),
            fractional_splitting,
        }
    }
}

/// Regime from the fractional splitting `C_m/C_R + C_m/C_L`.
pub fn classify_regime(net: &CapacitanceNetwork) -> CouplingRegime {
    CouplingRegime::from_splitting(cell_dimensions(net, 0.0).fractional_splitting())
}
