//! Physical constants and unit conversions.
//!
//! Capacitances are carried in attofarads, voltages in volts, energies in
//! meV and temperatures in millikelvin throughout the crate.

/// Elementary charge in coulombs (exact, SI 2019).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Boltzmann constant in meV per kelvin.
pub const BOLTZMANN_MEV_PER_K: f64 = 8.617_333_262e-2;

/// `e / 1 aF` expressed in volts.
pub const CHARGE_OVER_AF: f64 = ELEMENTARY_CHARGE * 1e18;

/// Charging energy `e²/C` in meV for a capacitance in aF.
pub fn charging_energy_mev(c_af: f64) -> f64 {
    1e3 * CHARGE_OVER_AF / c_af
}

/// Voltage period `e/C` in volts for a capacitance in aF.
pub fn voltage_period(c_af: f64) -> f64 {
    CHARGE_OVER_AF / c_af
}

/// Capacitance `e/ΔV` in aF for a voltage period in volts.
pub fn capacitance_from_period(dv: f64) -> f64 {
    CHARGE_OVER_AF / dv
}

/// Induced charge `C·V/e` (in units of e) for a capacitance in aF.
pub fn induced_charge(c_af: f64, volts: f64) -> f64 {
    c_af * volts / CHARGE_OVER_AF
}

/// `e·V` in meV.
pub fn volts_to_mev(volts: f64) -> f64 {
    1e3 * volts
}

/// `k_B·T` in meV for a temperature in mK.
pub fn thermal_energy_mev(t_mk: f64) -> f64 {
    BOLTZMANN_MEV_PER_K * t_mk * 1e-3
}
