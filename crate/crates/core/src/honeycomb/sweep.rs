use crate::capnet::CapacitanceNetwork;
use crate::error::Result;

use super::geometry::{cell_dimensions, RegimeLabel};

/// One row of an interdot-capacitance sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// aF.
    pub c_m: f64,
    pub fractional_splitting: f64,
    pub label: RegimeLabel,
    /// meV.
    pub e_c_m: f64,
    /// Volts.
    pub dv_gl_m: f64,
    pub dv_gr_m: f64,
    /// `E_Cm ≤ min(E_C)`; false once `C_m` exceeds a total capacitance.
    pub physical: bool,
}

/// Coupling regime of `net` at each interdot capacitance, in input order.
/// An invalid value yields an error in its own row only.
pub fn regime_sweep(net: &CapacitanceNetwork, c_ms: &[f64]) -> Vec<Result<SweepRow>> {
    c_ms.iter()
        .map(|&c_m| {
            let n = net.with_c_m(c_m)?;
            let g = cell_dimensions(&n, 0.0);
            let ec = n.charging_energies();
            let f = g.fractional_splitting();
            Ok(SweepRow {
                c_m,
                fractional_splitting: f,
                label: RegimeLabel::from_splitting(f),
                e_c_m: ec.e_c_m,
                dv_gl_m: g.dv_gl_m,
                dv_gr_m: g.dv_gr_m,
                physical: ec.is_physical(),
            })
        })
        .collect()
}
