//! Forward synthesis of honeycomb charge-stability diagrams.

mod diamonds;
mod format;
mod geometry;
mod map;
mod sweep;

pub use diamonds::{coulomb_diamonds, Diamond, DiamondSet, DIAMOND_CONVENTION};
pub use format::{parse_map, to_pgm, write_map, MAP_MAGIC};
pub use geometry::{
    cell_dimensions, classify_regime, triple_points, CouplingRegime, HoneycombGeometry, RegimeLabel,
    TriplePoint, VertexKind, MEDIUM_STRONG_THRESHOLD, WEAK_MEDIUM_THRESHOLD,
};
pub use map::{
    add_gaussian_noise, charge_map, conductance_map, transport_window, Axis, ChargeMap,
    ConductanceMap, Resolution, Window,
};
pub use sweep::{regime_sweep, SweepRow};
