//! Recovering device parameters from honeycomb dimensions, either supplied
//! directly or measured on a conductance map.

mod lattice;
mod params;
mod peaks;
mod pipeline;
mod report;

pub use lattice::{fit_lattice, geometry_from_fit, measure_band_widths, BandWidths, LatticeFit};
pub use params::{params_from_geometry, ExtractedParameters};
pub use peaks::{detect_peaks, detect_peaks_with, Peak, PeakOptions, PeakSet, Refinement};
pub use pipeline::{extract_from_map, extract_from_map_with, Diagnostics, Extraction};
pub use report::{format_record, format_report, RECORD_FIELDS, RECORD_HEADER};
