//! Simulation and parameter extraction for parallel-coupled double quantum
//! dots in the constant-interaction (purely capacitive) model.
//!
//! * [`capnet`]: capacitance network, charging energies, ground states.
//! * [`honeycomb`]: honeycomb geometry, charge and conductance maps, Coulomb
//!   diamonds, map file formats.
//! * [`extract`]: recovering device parameters from honeycomb geometry or
//!   directly from a conductance map.

pub mod capnet;
pub mod error;
pub mod extract;
pub mod honeycomb;
pub mod units;

pub use capnet::{CapacitanceNetwork, ChargeState, ChargingEnergies, Dot, GroundState};
pub use error::{Error, Result};
pub use honeycomb::{ConductanceMap, CouplingRegime, HoneycombGeometry, RegimeLabel, Window};
