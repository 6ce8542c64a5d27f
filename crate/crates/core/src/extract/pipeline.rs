use crate::error::{Error, Result};
use crate::honeycomb::{ConductanceMap, HoneycombGeometry};

use super::lattice::{fit_lattice, geometry_from_fit, measure_band_widths, LatticeFit};
use super::params::{params_from_geometry, ExtractedParameters};
use super::peaks::{detect_peaks_with, PeakOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub peak_count: usize,
    pub threshold: f64,
    /// Volts.
    pub residual_rms: f64,
    /// Pixel lines averaged for the band widths along `V_GL` and `V_GR`.
    pub band_lines: (usize, usize),
    /// `c_m_from_left / c_m_from_right`; 1 when both vanish.
    pub c_m_ratio: f64,
    pub c_m_disagreement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub params: ExtractedParameters,
    pub geometry: HoneycombGeometry,
    pub fit: LatticeFit,
    pub diagnostics: Diagnostics,
}

pub fn extract_from_map(map: &ConductanceMap) -> Result<Extraction> {
    extract_from_map_with(map, &PeakOptions::default())
}

/// Peaks → lattice → band widths → parameters. Failures carry the label of
/// the stage that produced them.
pub fn extract_from_map_with(map: &ConductanceMap, opts: &PeakOptions) -> Result<Extraction> {
    if map.bias == 0.0 {
        return Err(Error::Precondition(
            "lever arms undefined: map was recorded at zero bias".into(),
        )
        .in_stage("params"));
    }
    let peaks = detect_peaks_with(map, opts).map_err(|e| e.in_stage("peaks"))?;
    let fit = fit_lattice(&peaks).map_err(|e| e.in_stage("lattice"))?;
    let bands = measure_band_widths(map, &fit).map_err(|e| e.in_stage("bands"))?;
    let geometry = geometry_from_fit(&fit, Some(&bands)).map_err(|e| e.in_stage("geometry"))?;
    let params = params_from_geometry(&geometry).map_err(|e| e.in_stage("params"))?;
    let c_m_ratio = match (params.c_m_from_left, params.c_m_from_right) {
        (l, r) if l == 0.0 && r == 0.0 => 1.0,
        (l, r) => l / r,
    };
    Ok(Extraction {
        diagnostics: Diagnostics {
            peak_count: peaks.len(),
            threshold: peaks.threshold,
            residual_rms: fit.residual_rms,
            band_lines: bands.lines,
            c_m_ratio,
            c_m_disagreement: params.c_m_disagreement(),
        },
        params,
        geometry,
        fit,
    })
}
