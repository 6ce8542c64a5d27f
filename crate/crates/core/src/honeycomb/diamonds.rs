use crate::error::{Error, Result};
use crate::units;

/// Bias convention used for diamond edges.
pub const DIAMOND_CONVENTION: &str =
    "bias applied to the source, drain grounded; source level at -e*V_bias";

/// One blockade diamond in the `(V_gate, V_bias)` plane, volts.
///
/// Vertices are ordered left, top, right, bottom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diamond {
    /// Occupation inside the diamond.
    pub n: u32,
    pub vertices: [(f64, f64); 4],
}

impl Diamond {
    pub fn width(&self) -> f64 {
        self.vertices[2].0 - self.vertices[0].0
    }

    pub fn half_height(&self) -> f64 {
        self.vertices[1].1
    }

    /// Whether `(v_gate, v_bias)` lies inside the blockaded region.
    pub fn contains(&self, v_gate: f64, v_bias: f64) -> bool {
        // convex quadrilateral: same side of all four edges
        let mut sign = 0.0_f64;
        for i in 0..4 {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % 4];
            let cross = (x1 - x0) * (v_bias - y0) - (y1 - y0) * (v_gate - x0);
            if cross != 0.0 {
                if sign != 0.0 && cross.signum() != sign {
                    return false;
                }
                sign = cross.signum();
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondSet {
    pub diamonds: Vec<Diamond>,
    /// `e/C_gate`, volts.
    pub gate_period: f64,
    /// `e/C_Σ`, volts.
    pub half_height: f64,
    /// `e²/C_Σ`, meV.
    pub addition_energy: f64,
    /// `C_gate/C_Σ`.
    pub lever_arm: f64,
    /// `dV_bias/dV_gate` of the edges set by the source level.
    pub positive_slope: f64,
    /// `dV_bias/dV_gate` of the edges set by the drain level; `None` when the
    /// source capacitance vanishes and those edges are vertical.
    pub negative_slope: Option<f64>,
    pub convention: &'static str,
}

/// Single-dot Coulomb diamonds for occupations `0..n_diamonds`.
///
/// The dot level is `μ_N = (N − ½)·e²/C_Σ − e·(C_gate·V_gate + C_source·V_bias)/C_Σ`.
/// Transport is blocked while `μ_N` lies below both lead levels `0` and
/// `−e·V_bias` and `μ_{N+1}` above both.
pub fn coulomb_diamonds(c_gate: f64, c_source: f64, c_sigma: f64, n_diamonds: u32) -> Result<DiamondSet> {
    if !(c_gate.is_finite() && c_source.is_finite() && c_sigma.is_finite()) {
        return Err(Error::InvalidArgument("capacitances must be finite".into()));
    }
    if c_gate <= 0.0 || c_gate > c_sigma {
        return Err(Error::InvalidArgument(format!(
            "need 0 < c_gate <= c_sigma, got c_gate = {c_gate}, c_sigma = {c_sigma}"
        )));
    }
    if c_source < 0.0 || c_source >= c_sigma {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= c_source < c_sigma, got c_source = {c_source}"
        )));
    }
    let gate_period = units::voltage_period(c_gate);
    let half_height = units::voltage_period(c_sigma);
    let shift = half_height * c_source / c_gate;

    let diamonds = (0..n_diamonds)
        .map(|n| {
            let left = (f64::from(n) - 0.5) * gate_period;
            let right = left + gate_period;
            Diamond {
                n,
                vertices: [
                    (left, 0.0),
                    (right - shift, half_height),
                    (right, 0.0),
                    (left + shift, -half_height),
                ],
            }
        })
        .collect();

    Ok(DiamondSet {
        diamonds,
        gate_period,
        half_height,
        addition_energy: units::charging_energy_mev(c_sigma),
        lever_arm: c_gate / c_sigma,
        positive_slope: c_gate / (c_sigma - c_source),
        negative_slope: (c_source > 0.0).then(|| -c_gate / c_source),
        convention: DIAMOND_CONVENTION,
    })
}
