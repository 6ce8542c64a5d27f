use crate::error::{Error, Result};
use crate::honeycomb::{CouplingRegime, HoneycombGeometry};
use crate::units;

/// Device parameters recovered from honeycomb dimensions.
///
/// Capacitances in aF, energies in meV. Both coupling estimates are kept:
/// a measured honeycomb need not give the same value through either gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractedParameters {
    pub c_gate_left: f64,
    pub c_gate_right: f64,
    pub alpha_left: f64,
    pub alpha_right: f64,
    pub c_sigma_left: f64,
    pub c_sigma_right: f64,
    pub e_c_left: f64,
    pub e_c_right: f64,
    /// `α_GL·ΔV_GL^m`.
    pub e_c_m_from_left: f64,
    /// `α_GR·ΔV_GR^m`.
    pub e_c_m_from_right: f64,
    /// `C_R·ΔV_GL^m/ΔV_GL`.
    pub c_m_from_left: f64,
    /// `C_L·ΔV_GR^m/ΔV_GR`.
    pub c_m_from_right: f64,
    pub regime: CouplingRegime,
}

impl ExtractedParameters {
    /// Geometric mean of the two coupling-capacitance estimates.
    pub fn c_m_combined(&self) -> f64 {
        (self.c_m_from_left * self.c_m_from_right).sqrt()
    }

    /// `|C_m,left − C_m,right|` relative to their mean; zero when both vanish.
    pub fn c_m_disagreement(&self) -> f64 {
        let mean = 0.5 * (self.c_m_from_left + self.c_m_from_right);
        if mean == 0.0 {
            0.0
        } else {
            (self.c_m_from_left - self.c_m_from_right).abs() / mean
        }
    }
}

/// Runs the standard chain `C_G = e/ΔV`, `α = |V_bias|/δV`, `C_Σ = C_G/α`,
/// `E_C = α·ΔV`, `E_Cm = α·ΔV^m`, `C_m = C_Σ,other·ΔV^m/ΔV`.
pub fn params_from_geometry(g: &HoneycombGeometry) -> Result<ExtractedParameters> {
    if g.bias == 0.0 {
        return Err(Error::Precondition(
            "lever arms undefined: geometry was measured at zero bias".into(),
        ));
    }
    g.validate()?;
    if g.delta_v_gl >= g.dv_gl || g.delta_v_gr >= g.dv_gr {
        return Err(Error::InvalidGeometry(format!(
            "band width ({}, {}) V is not smaller than the cell ({}, {}) V; bias window exceeds the cell",
            g.delta_v_gl, g.delta_v_gr, g.dv_gl, g.dv_gr
        )));
    }
    let bias = g.bias.abs();
    if g.delta_v_gl <= bias || g.delta_v_gr <= bias {
        return Err(Error::InvalidGeometry(format!(
            "band width must exceed |bias| = {bias} V for a lever arm below one"
        )));
    }

    let c_gate_left = units::capacitance_from_period(g.dv_gl);
    let c_gate_right = units::capacitance_from_period(g.dv_gr);
    let alpha_left = bias / g.delta_v_gl;
    let alpha_right = bias / g.delta_v_gr;
    let c_sigma_left = c_gate_left / alpha_left;
    let c_sigma_right = c_gate_right / alpha_right;

    Ok(ExtractedParameters {
        c_gate_left,
        c_gate_right,
        alpha_left,
        alpha_right,
        c_sigma_left,
        c_sigma_right,
        e_c_left: alpha_left * units::volts_to_mev(g.dv_gl),
        e_c_right: alpha_right * units::volts_to_mev(g.dv_gr),
        e_c_m_from_left: alpha_left * units::volts_to_mev(g.dv_gl_m),
        e_c_m_from_right: alpha_right * units::volts_to_mev(g.dv_gr_m),
        c_m_from_left: c_sigma_right * g.dv_gl_m / g.dv_gl,
        c_m_from_right: c_sigma_left * g.dv_gr_m / g.dv_gr,
        regime: CouplingRegime::from_splitting(g.fractional_splitting()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::honeycomb::RegimeLabel;

    fn measured() -> HoneycombGeometry {
        HoneycombGeometry {
            dv_gl: 0.087,
            dv_gr: 0.053,
            dv_gl_m: 0.0261,
            dv_gr_m: 0.0133,
            delta_v_gl: 0.013,
            delta_v_gr: 0.010,
            bias: 0.3e-3,
        }
    }

    #[test]
    fn measured_honeycomb_chain() {
        let p = params_from_geometry(&measured()).unwrap();
        assert!((p.alpha_left - 0.3e-3 / 0.013).abs() < 1e-12);
        assert!((p.alpha_right - 0.03).abs() < 1e-12);
        assert!((p.c_gate_left - 1.8416).abs() < 1e-3);
        assert!((p.c_gate_right - 3.0230).abs() < 1e-3);
        assert!((p.c_sigma_left - 79.80).abs() < 0.01);
        assert!((p.c_sigma_right - 100.77).abs() < 0.01);
        assert!((p.e_c_left - 2.0077).abs() < 1e-3);
        assert!((p.e_c_right - 1.59).abs() < 1e-9);
        assert!((p.e_c_m_from_left - 0.6023).abs() < 1e-3);
        assert!((p.e_c_m_from_right - 0.399).abs() < 1e-9);
        assert!((p.c_m_from_left - 30.23).abs() < 0.01);
        assert!((p.c_m_from_right - 20.03).abs() < 0.01);
        assert_eq!(p.regime.label, RegimeLabel::Medium);
    }

    #[test]
    fn charging_energy_times_capacitance_is_e_squared() {
        let p = params_from_geometry(&measured()).unwrap();
        let e2 = 1e3 * units::CHARGE_OVER_AF;
        assert!((p.e_c_left * p.c_sigma_left - e2).abs() < 1e-10);
        assert!((p.e_c_right * p.c_sigma_right - e2).abs() < 1e-10);
    }

    #[test]
    fn zero_bias_is_a_precondition_failure() {
        let g = HoneycombGeometry {
            delta_v_gl: 0.0,
            delta_v_gr: 0.0,
            bias: 0.0,
            ..measured()
        };
        match params_from_geometry(&g) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("lever arms undefined")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn band_wider_than_cell_is_rejected() {
        let g = HoneycombGeometry {
            delta_v_gl: 0.09,
            ..measured()
        };
        assert!(matches!(params_from_geometry(&g), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn disagreement_is_relative_to_mean() {
        let p = params_from_geometry(&measured()).unwrap();
        let want = (p.c_m_from_left - p.c_m_from_right) / (0.5 * (p.c_m_from_left + p.c_m_from_right));
        assert!((p.c_m_disagreement() - want).abs() < 1e-15);
        assert!((p.c_m_combined() - (30.23f64 * 20.03).sqrt()).abs() < 0.01);
    }
}
