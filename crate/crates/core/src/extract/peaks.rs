use crate::error::{Error, Result};
use crate::honeycomb::{Axis, ConductanceMap};

/// How a detected blob is reduced to one sub-pixel position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    /// `Ridges` for zero-bias maps, `Centroid` otherwise.
    Auto,
    /// 2D quadratic fitted to the 3×3 patch around the brightest pixel.
    Quadratic,
    /// Unweighted centroid of the pixels above threshold. Suits the
    /// flat-topped spots of finite-bias maps.
    Centroid,
    /// Intersection of the two resonance lines that end at the peak, each
    /// located by per-scanline centroids. Zero-bias vertices are corners
    /// rather than symmetric blobs, so a symmetric fit lands inside the
    /// corner.
    ///
    /// Candidates are local maxima of the smoothed map rather than blobs,
    /// and a candidate is kept only if exactly one vertical and one
    /// horizontal arm leave it; bright points on a straight line are
    /// rejected. Candidates too close to the edge to trace both arms are
    /// dropped.
    Ridges,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakOptions {
    /// Quantile of all pixel values used as the background level `b`.
    pub threshold_quantile: f64,
    /// Threshold is `b + level·(max − b)` on the smoothed map. `None` picks
    /// 0.5 for finite-bias maps, where spots are twice the line height and
    /// the threshold then sits on the spot edge. At zero bias it picks 0.3
    /// for `Ridges`, which leaves the lines in and lets the arm test reject
    /// them, and 0.65 otherwise.
    pub level: Option<f64>,
    /// Blobs with fewer pixels are discarded.
    pub min_pixels: usize,
    /// Width in pixels of the Gaussian applied before thresholding; 0
    /// disables it. Refinement other than `Centroid` reads the raw map.
    pub smoothing: f64,
    pub refinement: Refinement,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            threshold_quantile: 0.9,
            level: None,
            min_pixels: 1,
            smoothing: 1.0,
            refinement: Refinement::Auto,
        }
    }
}

impl PeakOptions {
    fn validate(&self) -> Result<()> {
        if !(self.threshold_quantile > 0.0 && self.threshold_quantile < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold quantile must lie in (0, 1), got {}",
                self.threshold_quantile
            )));
        }
        if let Some(level) = self.level {
            if !(0.0..1.0).contains(&level) {
                return Err(Error::InvalidArgument(format!(
                    "threshold level must lie in [0, 1), got {level}"
                )));
            }
        }
        if !(self.smoothing.is_finite() && self.smoothing >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "smoothing width must be finite and non-negative, got {}",
                self.smoothing
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub v_gl: f64,
    pub v_gr: f64,
    /// Brightest pixel value of the blob.
    pub strength: f64,
    pub pixels: usize,
}

/// Detected peaks in row-major order of their brightest pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakSet {
    pub points: Vec<Peak>,
    pub threshold: f64,
    /// Axes and bias of the source map.
    pub v_gl: Axis,
    pub v_gr: Axis,
    pub bias: f64,
    /// The refinement actually applied (never `Auto`).
    pub refinement: Refinement,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean pixel pitch in volts, used as a length scale by the fit.
    pub fn pixel_size(&self) -> f64 {
        0.5 * (self.v_gl.step().abs() + self.v_gr.step().abs())
    }
}

fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    let k = ((v.len() - 1) as f64 * q).round() as usize;
    let (_, x, _) = v.select_nth_unstable_by(k, f64::total_cmp);
    *x
}

/// Peaks with the default options and the given background quantile.
pub fn detect_peaks(map: &ConductanceMap, threshold_quantile: f64) -> Result<PeakSet> {
    detect_peaks_with(
        map,
        &PeakOptions {
            threshold_quantile,
            ..PeakOptions::default()
        },
    )
}

/// Separable Gaussian blur of width `sigma` pixels, renormalised at the
/// edges.
fn smooth(values: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    if sigma == 0.0 {
        return values.to_vec();
    }
    let r = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-r..=r)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let pass = |src: &[f64], horizontal: bool| -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        for y in 0..h {
            for x in 0..w {
                let (mut sum, mut norm) = (0.0, 0.0);
                for (j, k) in kernel.iter().enumerate() {
                    let d = j as isize - r;
                    let (xx, yy) = if horizontal {
                        (x as isize + d, y as isize)
                    } else {
                        (x as isize, y as isize + d)
                    };
                    if xx < 0 || yy < 0 || xx >= w as isize || yy >= h as isize {
                        continue;
                    }
                    sum += k * src[yy as usize * w + xx as usize];
                    norm += k;
                }
                out[y * w + x] = sum / norm;
            }
        }
        out
    };
    pass(&pass(values, true), false)
}

/// Half-width of the window a `Ridges` candidate must dominate.
const NMS_RADIUS: isize = 4;

/// Smooths and thresholds the map, then reduces each bright feature to one
/// refined position. `Ridges` takes local maxima checked for corner
/// structure; the other refinements label 8-connected blobs and drop blobs
/// touching the map edge.
pub fn detect_peaks_with(map: &ConductanceMap, opts: &PeakOptions) -> Result<PeakSet> {
    opts.validate()?;
    map.validate()?;
    let refinement = match opts.refinement {
        Refinement::Auto if map.bias == 0.0 => Refinement::Ridges,
        Refinement::Auto => Refinement::Centroid,
        r => r,
    };
    let (w, h) = (map.cols(), map.rows());
    let smoothed = smooth(&map.values, w, h, opts.smoothing);
    let base = quantile(&smoothed, opts.threshold_quantile);
    let max = smoothed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let level = opts.level.unwrap_or(match (map.bias == 0.0, refinement) {
        (false, _) => 0.5,
        (true, Refinement::Ridges) => 0.3,
        (true, _) => 0.65,
    });
    let threshold = base + level * (max - base);
    let mut set = PeakSet {
        points: Vec::new(),
        threshold,
        v_gl: map.v_gl,
        v_gr: map.v_gr,
        bias: map.bias,
        refinement,
    };
    if max <= base {
        return Ok(set);
    }
    let found = if refinement == Refinement::Ridges {
        corner_peaks(map, &smoothed, threshold)
    } else {
        blob_peaks(map, &smoothed, threshold, opts.min_pixels, refinement)
    };
    set.points = found
        .into_iter()
        .map(|(best, (row, col), pixels)| Peak {
            v_gl: map.v_gl.start + col * map.v_gl.step(),
            v_gr: map.v_gr.start + row * map.v_gr.step(),
            strength: map.values[best],
            pixels,
        })
        .collect();
    Ok(set)
}

type Found = (usize, (f64, f64), usize);

fn corner_peaks(map: &ConductanceMap, smoothed: &[f64], threshold: f64) -> Vec<Found> {
    let (w, h) = (map.cols() as isize, map.rows() as isize);
    let mut found = Vec::new();
    for i in 0..smoothed.len() {
        let v = smoothed[i];
        if v <= threshold {
            continue;
        }
        let (r, c) = (i as isize / w, i as isize % w);
        // strict maximum of its window; ties go to the first in row-major order
        let dominant = (-NMS_RADIUS..=NMS_RADIUS).all(|dr| {
            (-NMS_RADIUS..=NMS_RADIUS).all(|dc| {
                let (rr, cc) = (r + dr, c + dc);
                if (dr, dc) == (0, 0) || rr < 0 || cc < 0 || rr >= h || cc >= w {
                    return true;
                }
                let j = (rr * w + cc) as usize;
                smoothed[j] < v || (smoothed[j] == v && j > i)
            })
        });
        if !dominant {
            continue;
        }
        if let Some(pos) = ridge_vertex(map, smoothed, r as usize, c as usize) {
            found.push((i, pos, 1));
        }
    }
    found
}

fn blob_peaks(
    map: &ConductanceMap,
    smoothed: &[f64],
    threshold: f64,
    min_pixels: usize,
    refinement: Refinement,
) -> Vec<Found> {
    let (w, h) = (map.cols(), map.rows());
    let above = |i: usize| smoothed[i] > threshold;
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let mut blob = Vec::new();
    let mut found = Vec::new();
    for start in 0..w * h {
        if seen[start] || !above(start) {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        blob.clear();
        let mut touches_edge = false;
        while let Some(i) = stack.pop() {
            blob.push(i);
            let (r, c) = (i / w, i % w);
            touches_edge |= r == 0 || c == 0 || r + 1 == h || c + 1 == w;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (rr, cc) = (r as isize + dr, c as isize + dc);
                    if rr < 0 || cc < 0 || rr >= h as isize || cc >= w as isize {
                        continue;
                    }
                    let j = rr as usize * w + cc as usize;
                    if !seen[j] && above(j) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        if touches_edge || blob.len() < min_pixels {
            continue;
        }
        // brightest raw pixel, first in row-major order on ties
        let best = *blob
            .iter()
            .max_by(|&&a, &&b| map.values[a].total_cmp(&map.values[b]).then(b.cmp(&a)))
            .expect("blob is non-empty");
        let pos = match refinement {
            Refinement::Centroid => centroid(w, &blob),
            _ => quadratic_peak(map, best / w, best % w),
        };
        found.push((best, pos, blob.len()));
    }
    found.sort_by_key(|(best, _, _)| *best);
    found
}

fn centroid(w: usize, blob: &[usize]) -> (f64, f64) {
    let (sr, sc) = blob
        .iter()
        .fold((0usize, 0usize), |(r, c), &i| (r + i / w, c + i % w));
    let n = blob.len() as f64;
    (sr as f64 / n, sc as f64 / n)
}

/// Least-squares line `y = a + b·x`.
fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

const ARM_NEAR: isize = 2;
/// Arms are traced over scanlines `ARM_NEAR..far` with `far` between these
/// bounds, as room allows.
const ARM_FAR_MIN: isize = 9;
const ARM_FAR_MAX: isize = 20;
const ARM_HALF: isize = 3;
/// Scanlines over which the presence of an arm is tested, clear of the
/// other line's tail at the corner.
const ARM_TEST: std::ops::Range<isize> = 4..12;

/// See [`Refinement::Ridges`]. Arms are found on `smoothed` and traced on
/// the raw map. `None` when the two arms are not found or run off the map.
fn ridge_vertex(map: &ConductanceMap, smoothed: &[f64], r: usize, c: usize) -> Option<(f64, f64)> {
    let (w, h) = (map.cols() as isize, map.rows() as isize);
    let (ri, ci) = (r as isize, c as isize);
    let room = ri.min(ci).min(h - 1 - ri).min(w - 1 - ci) - 2 * ARM_HALF - 1;
    let far = room.min(ARM_FAR_MAX);
    if far < ARM_FAR_MIN {
        return None;
    }
    let at = |rr: isize, cc: isize| map.get(rr as usize, cc as usize);
    let at_smooth = |rr: isize, cc: isize| smoothed[(rr * w + cc) as usize];
    // mean along an arm of the brightest pixel across it
    let arm = |dr: isize, dc: isize| {
        let mut sum = 0.0;
        for k in ARM_TEST {
            let (rr, cc) = (ri + dr * k, ci + dc * k);
            let mut m = 0.0_f64;
            for a in -1..=1 {
                for b in -1..=1 {
                    m = m.max(at_smooth(rr + a, cc + b));
                }
            }
            sum += m;
        }
        sum / ARM_TEST.len() as f64
    };
    let peak = at_smooth(ri, ci);
    let pick = |plus: f64, minus: f64| -> Option<isize> {
        let (strong, weak, dir) = if plus >= minus { (plus, minus, 1) } else { (minus, plus, -1) };
        (strong > 0.25 * peak && strong > 2.0 * weak).then_some(dir)
    };
    let sv = pick(arm(1, 0), arm(-1, 0))?;
    let sh = pick(arm(0, 1), arm(0, -1))?;

    let half = ARM_HALF;
    // centroid across a scanline, following the ridge outwards
    let trace = |along_rows: bool, sign: isize| -> Option<Vec<(f64, f64)>> {
        let mut pred = if along_rows { ci } else { ri };
        let mut out = Vec::new();
        for k in ARM_NEAR..far {
            let fixed = if along_rows { ri + sign * k } else { ci + sign * k };
            let val = |x: isize| if along_rows { at(fixed, x) } else { at(x, fixed) };
            let limit = if along_rows { w } else { h };
            if pred - 2 * half < 0 || pred + 2 * half >= limit {
                return None;
            }
            let j = (pred - half..=pred + half)
                .max_by(|&a, &b| val(a).total_cmp(&val(b)).then(b.cmp(&a)))
                .expect("non-empty range");
            let seg: Vec<f64> = (j - half..=j + half).map(val).collect();
            let floor = seg.iter().copied().fold(f64::INFINITY, f64::min);
            let (sw, sx) = seg
                .iter()
                .enumerate()
                .fold((0.0, 0.0), |(a, b), (i, v)| (a + (v - floor), b + (v - floor) * i as f64));
            if sw <= 0.0 {
                return None;
            }
            let cen = (j - half) as f64 + sx / sw;
            out.push((fixed as f64, cen));
            pred = cen.round() as isize;
        }
        Some(out)
    };
    // vertical arm: column as a function of row; horizontal arm: row as a
    // function of column
    let (a1, b1) = fit_line(&trace(true, sv)?);
    let (a2, b2) = fit_line(&trace(false, sh)?);
    let den = 1.0 - b1 * b2;
    if den.abs() < 1e-6 {
        return None;
    }
    let row = (a2 + b2 * a1) / den;
    let col = a1 + b1 * row;
    ((row - r as f64).hypot(col - c as f64) <= 3.0).then_some((row, col))
}

/// Stationary point of the least-squares quadratic through the 3×3 patch
/// centred on `(r, c)`, falling back to per-axis parabolas when the fitted
/// surface is not a maximum nearby. Offsets are clamped to half a pixel.
fn quadratic_peak(map: &ConductanceMap, r: usize, c: usize) -> (f64, f64) {
    let f = |dr: isize, dc: isize| map.get((r as isize + dr) as usize, (c as isize + dc) as usize);
    let (mut gx, mut gy, mut gxy, mut qx, mut qy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for dr in -1isize..=1 {
        for dc in -1isize..=1 {
            let v = f(dr, dc);
            let (x, y) = (dc as f64, dr as f64);
            gx += x * v;
            gy += y * v;
            gxy += x * y * v;
            qx += (x * x - 2.0 / 3.0) * v;
            qy += (y * y - 2.0 / 3.0) * v;
        }
    }
    let (b, cc, e) = (gx / 6.0, gy / 6.0, gxy / 4.0);
    let (d, ff) = (qx / 2.0, qy / 2.0);
    // maximise a + b x + c y + d x² + e xy + f y²
    let det = 4.0 * d * ff - e * e;
    let (mut ox, mut oy) = if d < 0.0 && det > 0.0 {
        ((-2.0 * ff * b + e * cc) / det, (-2.0 * d * cc + e * b) / det)
    } else {
        (f64::NAN, f64::NAN)
    };
    if !(ox.abs() <= 1.0 && oy.abs() <= 1.0) {
        let parabola = |m: f64, z: f64, p: f64| {
            let den = m - 2.0 * z + p;
            if den < 0.0 {
                0.5 * (m - p) / den
            } else {
                0.0
            }
        };
        ox = parabola(f(0, -1), f(0, 0), f(0, 1));
        oy = parabola(f(-1, 0), f(0, 0), f(1, 0));
    }
    (r as f64 + oy.clamp(-0.5, 0.5), c as f64 + ox.clamp(-0.5, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_map(centres: &[(f64, f64)], bias: f64) -> ConductanceMap {
        let (w, h) = (40, 30);
        let mut values = vec![0.0; w * h];
        for r in 0..h {
            for c in 0..w {
                for &(cr, cc) in centres {
                    let d2 = (r as f64 - cr).powi(2) + (c as f64 - cc).powi(2);
                    values[r * w + c] += (-d2 / 4.0).exp();
                }
            }
        }
        ConductanceMap::new(
            Axis::new(0.0, (w - 1) as f64, w).unwrap(),
            Axis::new(0.0, (h - 1) as f64, h).unwrap(),
            values,
            bias,
        )
        .unwrap()
    }

    fn quadratic() -> PeakOptions {
        PeakOptions {
            refinement: Refinement::Quadratic,
            ..PeakOptions::default()
        }
    }

    #[test]
    fn uniform_map_has_no_peaks() {
        let map = ConductanceMap::new(
            Axis::new(0.0, 1.0, 10).unwrap(),
            Axis::new(0.0, 1.0, 10).unwrap(),
            vec![1.0; 100],
            0.0,
        )
        .unwrap();
        assert!(detect_peaks(&map, 0.9).unwrap().is_empty());
    }

    #[test]
    fn gaussian_blobs_are_refined_below_a_tenth_of_a_pixel() {
        let centres = [(8.3, 10.6), (20.45, 29.2)];
        let set = detect_peaks_with(&gaussian_map(&centres, 0.0), &quadratic()).unwrap();
        assert_eq!(set.refinement, Refinement::Quadratic);
        assert_eq!(set.len(), 2);
        for (p, &(r, c)) in set.points.iter().zip(&centres) {
            assert!((p.v_gr - r).abs() < 0.1, "{p:?}");
            assert!((p.v_gl - c).abs() < 0.1, "{p:?}");
            assert!(p.strength > set.threshold);
        }
    }

    #[test]
    fn ridges_locate_the_corner_where_two_lines_end() {
        // lines along +row and +col from (22.4, 20.7)
        let (w, h) = (50, 50);
        let (vr, vc) = (22.4, 20.7);
        let line = |d: f64| 1.0 / (d / 0.8).cosh().powi(2);
        let mut values = vec![0.0; w * h];
        for r in 0..h {
            for c in 0..w {
                let (dr, dc) = (r as f64 - vr, c as f64 - vc);
                let mut g = 0.0;
                if dr >= 0.0 || dc >= 0.0 {
                    g += if dr >= 0.0 { line(dc) } else { 0.0 };
                    g += if dc >= 0.0 { line(dr) } else { 0.0 };
                }
                values[r * w + c] = g;
            }
        }
        let map = ConductanceMap::new(
            Axis::new(0.0, (w - 1) as f64, w).unwrap(),
            Axis::new(0.0, (h - 1) as f64, h).unwrap(),
            values,
            0.0,
        )
        .unwrap();
        let set = detect_peaks(&map, 0.9).unwrap();
        assert_eq!(set.refinement, Refinement::Ridges);
        assert_eq!(set.len(), 1);
        let p = set.points[0];
        assert!((p.v_gr - vr).hypot(p.v_gl - vc) < 0.2, "{p:?}");
    }

    #[test]
    fn centroid_refinement_on_symmetric_blob() {
        let set = detect_peaks(&gaussian_map(&[(15.0, 17.5)], 1e-3), 0.9).unwrap();
        assert_eq!(set.refinement, Refinement::Centroid);
        assert_eq!(set.len(), 1);
        assert!((set.points[0].v_gr - 15.0).abs() < 1e-9);
        assert!((set.points[0].v_gl - 17.5).abs() < 1e-9);
    }

    #[test]
    fn blobs_on_the_edge_are_dropped() {
        let set = detect_peaks_with(&gaussian_map(&[(0.0, 10.0), (15.0, 20.0)], 0.0), &quadratic()).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.points[0].v_gr - 15.0).abs() < 0.1);
    }

    #[test]
    fn ordering_is_row_major() {
        let set = detect_peaks_with(&gaussian_map(&[(20.0, 5.0), (8.0, 30.0), (8.0, 12.0)], 0.0), &quadratic()).unwrap();
        let order: Vec<(f64, f64)> = set.points.iter().map(|p| (p.v_gr.round(), p.v_gl.round())).collect();
        assert_eq!(order, vec![(8.0, 12.0), (8.0, 30.0), (20.0, 5.0)]);
    }

    #[test]
    fn rejects_bad_quantile() {
        let map = gaussian_map(&[(10.0, 10.0)], 0.0);
        assert!(detect_peaks(&map, 0.0).is_err());
        assert!(detect_peaks(&map, 1.0).is_err());
        let opts = PeakOptions {
            level: Some(1.0),
            ..PeakOptions::default()
        };
        assert!(detect_peaks_with(&map, &opts).is_err());
        let opts = PeakOptions {
            smoothing: -1.0,
            ..PeakOptions::default()
        };
        assert!(detect_peaks_with(&map, &opts).is_err());
    }

    #[test]
    fn bright_points_on_a_straight_line_are_not_vertices() {
        let (w, h) = (60, 60);
        let mut values = vec![0.0; w * h];
        for r in 0..h {
            for c in 0..w {
                let d = c as f64 - 30.3;
                values[r * w + c] = 1.0 / (d / 0.8).cosh().powi(2);
            }
        }
        values[30 * w + 30] += 0.5;
        let ax = Axis::new(0.0, (w - 1) as f64, w).unwrap();
        let map = ConductanceMap::new(ax, ax, values, 0.0).unwrap();
        assert!(detect_peaks(&map, 0.9).unwrap().is_empty());
    }
}
