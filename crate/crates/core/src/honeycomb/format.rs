//! `#DQDMAP v1` text format and P2 graymap rendering.
//!
//! ```text
//! #DQDMAP v1
//! #vgl <start> <stop> <count>
//! #vgr <start> <stop> <count>
//! #bias <volts>
//! <count_vgr rows of count_vgl space-separated values>
//! ```
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so a
//! written map parses back to identical bits.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::map::{Axis, ConductanceMap};

pub const MAP_MAGIC: &str = "#DQDMAP v1";

pub fn write_map(map: &ConductanceMap) -> String {
    let mut out = String::with_capacity(map.values.len() * 12 + 128);
    out.push_str(MAP_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "#vgl {} {} {}", map.v_gl.start, map.v_gl.stop, map.v_gl.count);
    let _ = writeln!(out, "#vgr {} {} {}", map.v_gr.start, map.v_gr.stop, map.v_gr.count);
    let _ = writeln!(out, "#bias {}", map.bias);
    for r in 0..map.rows() {
        for (c, v) in map.row(r).iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(line, format!("{what}: `{tok}` is not a number")))
}

fn parse_axis(text: Option<&str>, line: usize, tag: &str) -> Result<Axis> {
    let text = text.ok_or_else(|| Error::parse(line, format!("missing `{tag}` header")))?;
    let mut it = text.split_whitespace();
    if it.next() != Some(tag) {
        return Err(Error::parse(line, format!("expected `{tag} <start> <stop> <count>`")));
    }
    let fields: Vec<&str> = it.collect();
    if fields.len() != 3 {
        return Err(Error::parse(line, format!("`{tag}` needs exactly three fields")));
    }
    let start = parse_f64(fields[0], line, tag)?;
    let stop = parse_f64(fields[1], line, tag)?;
    let count: usize = fields[2]
        .parse()
        .map_err(|_| Error::parse(line, format!("{tag}: `{}` is not a count", fields[2])))?;
    Axis::new(start, stop, count).map_err(|e| Error::parse(line, e.to_string()))
}

pub fn parse_map(text: &str) -> Result<ConductanceMap> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim_end() == MAP_MAGIC => {}
        _ => return Err(Error::parse(1, format!("expected `{MAP_MAGIC}`"))),
    }
    let v_gl = parse_axis(lines.next(), 2, "#vgl")?;
    let v_gr = parse_axis(lines.next(), 3, "#vgr")?;
    let bias = match lines.next().map(|l| l.split_whitespace().collect::<Vec<_>>()) {
        Some(f) if f.len() == 2 && f[0] == "#bias" => parse_f64(f[1], 4, "#bias")?,
        _ => return Err(Error::parse(4, "expected `#bias <volts>`")),
    };

    let mut values = Vec::with_capacity(v_gl.count * v_gr.count);
    for r in 0..v_gr.count {
        let lineno = 5 + r;
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(lineno, format!("missing data row {} of {}", r + 1, v_gr.count)))?;
        let before = values.len();
        for tok in line.split_whitespace() {
            let v = parse_f64(tok, lineno, "value")?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::parse(lineno, format!("value {v} must be finite and non-negative")));
            }
            values.push(v);
        }
        let n = values.len() - before;
        if n != v_gl.count {
            return Err(Error::parse(lineno, format!("row has {n} values, expected {}", v_gl.count)));
        }
    }
    for (lineno, extra) in (5 + v_gr.count..).zip(lines) {
        if !extra.trim().is_empty() {
            return Err(Error::parse(lineno, "unexpected data after the last row"));
        }
    }
    ConductanceMap::new(v_gl, v_gr, values, bias)
}

/// Plain (P2) graymap, 8-bit, scaled to the map maximum. The top image row is
/// the highest `V_GR`.
pub fn to_pgm(map: &ConductanceMap) -> String {
    let (w, h) = (map.cols(), map.rows());
    let max = map.max_value();
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    let mut out = String::with_capacity(w * h * 4 + 32);
    let _ = writeln!(out, "P2\n{w} {h}\n255");
    for r in (0..h).rev() {
        // keep lines under 70 characters
        for chunk in map.row(r).chunks(16) {
            let line: Vec<String> = chunk
                .iter()
                .map(|v| ((v * scale).round().clamp(0.0, 255.0) as u8).to_string())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}
