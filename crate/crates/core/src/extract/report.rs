use std::fmt::Write as _;

use super::params::ExtractedParameters;
use super::pipeline::Extraction;

/// Field order of [`format_record`].
pub const RECORD_FIELDS: [&str; 16] = [
    "c_gate_left_aF",
    "c_gate_right_aF",
    "alpha_left",
    "alpha_right",
    "c_sigma_left_aF",
    "c_sigma_right_aF",
    "e_c_left_meV",
    "e_c_right_meV",
    "e_c_m_from_left_meV",
    "e_c_m_from_right_meV",
    "c_m_from_left_aF",
    "c_m_from_right_aF",
    "c_m_combined_aF",
    "c_m_disagreement",
    "fractional_splitting",
    "regime",
];

/// Comma-joined [`RECORD_FIELDS`], suitable as a CSV header.
pub const RECORD_HEADER: &str = "c_gate_left_aF,c_gate_right_aF,alpha_left,alpha_right,c_sigma_left_aF,c_sigma_right_aF,e_c_left_meV,e_c_right_meV,e_c_m_from_left_meV,e_c_m_from_right_meV,c_m_from_left_aF,c_m_from_right_aF,c_m_combined_aF,c_m_disagreement,fractional_splitting,regime";

const COUPLING_NOTE: &str = "e_c_m_from_left = alpha_left*dv_gl_m and e_c_m_from_right = alpha_right*dv_gr_m as computed; no factor-of-two convention is applied";

fn values(p: &ExtractedParameters) -> [String; 16] {
    [
        p.c_gate_left,
        p.c_gate_right,
        p.alpha_left,
        p.alpha_right,
        p.c_sigma_left,
        p.c_sigma_right,
        p.e_c_left,
        p.e_c_right,
        p.e_c_m_from_left,
        p.e_c_m_from_right,
        p.c_m_from_left,
        p.c_m_from_right,
        p.c_m_combined(),
        p.c_m_disagreement(),
        p.regime.fractional_splitting,
    ]
    .map(|x| x.to_string())
    .into_iter()
    .chain([p.regime.label.to_string()])
    .collect::<Vec<_>>()
    .try_into()
    .expect("sixteen fields")
}

/// One comma-separated line in [`RECORD_FIELDS`] order, no trailing newline.
pub fn format_record(p: &ExtractedParameters) -> String {
    values(p).join(",")
}

/// `key = value` report: parameters, the geometry they came from and, for
/// map extractions, the fit diagnostics.
pub fn format_report(p: &ExtractedParameters, run: Option<&Extraction>) -> String {
    let mut out = String::new();
    for (k, v) in RECORD_FIELDS.iter().zip(values(p)) {
        let _ = writeln!(out, "{k} = {v}");
    }
    let _ = writeln!(out, "note = {COUPLING_NOTE}");
    if let Some(run) = run {
        let g = &run.geometry;
        let d = &run.diagnostics;
        out.push_str("# measured geometry\n");
        for line in g.to_string().lines() {
            let _ = writeln!(out, "{line}");
        }
        out.push_str("# fit diagnostics\n");
        let _ = writeln!(out, "peak_count = {}", d.peak_count);
        let _ = writeln!(out, "peak_threshold = {}", d.threshold);
        let _ = writeln!(out, "residual_rms_V = {}", d.residual_rms);
        let _ = writeln!(out, "hole_sites = {}", run.fit.n_hole);
        let _ = writeln!(out, "band_lines = {} {}", d.band_lines.0, d.band_lines.1);
        let _ = writeln!(out, "c_m_ratio = {}", d.c_m_ratio);
    }
    out
}
