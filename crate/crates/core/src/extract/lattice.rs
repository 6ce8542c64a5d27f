use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::honeycomb::{ConductanceMap, HoneycombGeometry};

use super::peaks::{PeakSet, Refinement};

const MIN_PEAKS: usize = 8;
const MAX_ROUNDS: usize = 100;
/// Fraction of eligible translates that must land on a peak for a
/// difference vector to count as a lattice vector.
const LATTICE_SCORE: f64 = 0.9;

/// Two-point lattice fitted to a peak set, volts.
///
/// Electron sites sit at `origin + m·a1 + n·a2`, hole sites at the same
/// points shifted by `pair`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFit {
    pub origin: (f64, f64),
    pub a1: (f64, f64),
    pub a2: (f64, f64),
    pub pair: (f64, f64),
    /// `pair` in units of `(a1, a2)`.
    pub pair_fraction: (f64, f64),
    /// RMS distance between peaks and fitted sites.
    pub residual_rms: f64,
    pub n_peaks: usize,
    /// Peaks assigned to the hole sublattice; zero when the pairs are not
    /// resolved.
    pub n_hole: usize,
    /// Rounds taken by the sublattice assignment.
    pub rounds: usize,
    pub refinement: Refinement,
    pub bias: f64,
}

impl LatticeFit {
    /// `(ΔV_GL, ΔV_GR)`: `a1` projected on `V_GL`, `a2` on `V_GR`.
    pub fn periods(&self) -> (f64, f64) {
        (self.a1.0, self.a2.1)
    }

    fn basis(&self) -> Matrix2<f64> {
        Matrix2::new(self.a1.0, self.a2.0, self.a1.1, self.a2.1)
    }

    /// Site of the pair midpoint of cell `(m, n)`.
    fn pair_midpoint(&self, m: f64, n: f64) -> Vector2<f64> {
        Vector2::new(self.origin.0, self.origin.1)
            + self.basis() * Vector2::new(m, n)
            + 0.5 * Vector2::new(self.pair.0, self.pair.1)
    }
}

fn wrap(x: f64) -> f64 {
    x - x.round()
}

fn cross(a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Fraction of points whose translate by `t`, when it stays inside the
/// bounding box, lands within `tol` of another point.
fn score(pts: &[Vector2<f64>], t: Vector2<f64>, lo: Vector2<f64>, hi: Vector2<f64>, tol: f64) -> (f64, usize) {
    let (mut eligible, mut hit) = (0usize, 0usize);
    for p in pts {
        let q = p + t;
        if q.x < lo.x - tol || q.y < lo.y - tol || q.x > hi.x + tol || q.y > hi.y + tol {
            continue;
        }
        eligible += 1;
        if pts.iter().any(|r| (r - q).norm() < tol) {
            hit += 1;
        }
    }
    if eligible == 0 {
        (0.0, 0)
    } else {
        (hit as f64 / eligible as f64, eligible)
    }
}

/// Shortest two non-collinear difference vectors that translate the peak set
/// onto itself, oriented along `+V_GL` and `+V_GR`.
fn lattice_vectors(pts: &[Vector2<f64>], tol: f64) -> Result<(Vector2<f64>, Vector2<f64>)> {
    let lo = pts.iter().fold(Vector2::repeat(f64::INFINITY), |a, p| a.inf(p));
    let hi = pts.iter().fold(Vector2::repeat(f64::NEG_INFINITY), |a, p| a.sup(p));

    let mut cands: Vec<Vector2<f64>> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let mut near: Vec<Vector2<f64>> = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q - p)
            .collect();
        near.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        for mut d in near.into_iter().take(12) {
            if d.x < 0.0 || (d.x == 0.0 && d.y < 0.0) {
                d = -d;
            }
            cands.push(d);
        }
    }
    cands.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.x.total_cmp(&b.x)));

    let mut tried: Vec<Vector2<f64>> = Vec::new();
    let mut accepted: Vec<Vector2<f64>> = Vec::new();
    for c in cands {
        if c.norm() < tol || tried.iter().any(|t| (t - c).norm() < tol) {
            continue;
        }
        tried.push(c);
        let (s, eligible) = score(pts, c, lo, hi, tol);
        if s < LATTICE_SCORE || eligible < 3 {
            continue;
        }
        match accepted.first() {
            None => accepted.push(c),
            Some(&a) if cross(a, c).abs() >= 0.2 * a.norm() * c.norm() => {
                accepted.push(c);
                break;
            }
            Some(_) => {}
        }
    }
    if accepted.len() < 2 {
        return Err(Error::Fit(format!(
            "found {} of 2 lattice vectors; peaks do not repeat along both gates",
            accepted.len()
        )));
    }
    let (mut a1, mut a2) = (accepted[0], accepted[1]);
    if a2.x.abs() / a2.norm() > a1.x.abs() / a1.norm() {
        std::mem::swap(&mut a1, &mut a2);
    }
    if a1.x < 0.0 {
        a1 = -a1;
    }
    if a2.y < 0.0 {
        a2 = -a2;
    }
    Ok((a1, a2))
}

/// Splits fractional cell coordinates into at most two sublattices by
/// alternating nearest-centre assignment on the torus. Returns the hole
/// flags, the electron → hole offset in lattice units and the rounds used.
fn assign_sublattices(u: &[Vector2<f64>], basis: &Matrix2<f64>, tol: f64) -> Result<(Vec<bool>, Vector2<f64>, usize)> {
    let dist = |a: Vector2<f64>, b: Vector2<f64>| {
        let d = a - b;
        (basis * Vector2::new(wrap(d.x), wrap(d.y))).norm()
    };
    let mut ca = u[0];
    let far = u
        .iter()
        .copied()
        .max_by(|a, b| dist(*a, ca).total_cmp(&dist(*b, ca)))
        .expect("non-empty");
    if dist(far, ca) < tol {
        return Ok((vec![false; u.len()], Vector2::zeros(), 0));
    }
    let mut cb = far;
    let mut hole: Vec<bool> = Vec::new();
    for round in 1..=MAX_ROUNDS {
        let next: Vec<bool> = u.iter().map(|&p| dist(p, cb) < dist(p, ca)).collect();
        let n_b = next.iter().filter(|&&h| h).count();
        if n_b == 0 || n_b == u.len() {
            return Err(Error::Fit("sublattice assignment collapsed onto one site".into()));
        }
        let centre = |c: Vector2<f64>, want: bool| {
            let (sum, k) = u
                .iter()
                .zip(&next)
                .filter(|(_, &h)| h == want)
                .fold((Vector2::zeros(), 0.0), |(s, k), (p, _)| {
                    let d = p - c;
                    (s + Vector2::new(wrap(d.x), wrap(d.y)), k + 1.0)
                });
            c + sum / k
        };
        ca = centre(ca, false);
        cb = centre(cb, true);
        if next == hole {
            let d = cb - ca;
            let mut off = Vector2::new(d.x.rem_euclid(1.0), d.y.rem_euclid(1.0));
            if dist(cb, ca) < tol {
                return Ok((vec![false; u.len()], Vector2::zeros(), round));
            }
            // the electron → hole offset has components summing below one
            if off.x + off.y > 1.0 {
                off = Vector2::new((-d.x).rem_euclid(1.0), (-d.y).rem_euclid(1.0));
                hole.iter_mut().for_each(|h| *h = !*h);
            }
            return Ok((hole, off, round));
        }
        hole = next;
    }
    Err(Error::Fit(format!(
        "sublattice assignment did not converge in {MAX_ROUNDS} rounds"
    )))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Least-squares fit of a doubly periodic two-point lattice to `peaks`.
pub fn fit_lattice(peaks: &PeakSet) -> Result<LatticeFit> {
    let n = peaks.len();
    if n < MIN_PEAKS {
        return Err(Error::Fit(format!("need at least {MIN_PEAKS} peaks, found {n}")));
    }
    let pts: Vec<Vector2<f64>> = peaks.points.iter().map(|p| Vector2::new(p.v_gl, p.v_gr)).collect();
    let nn = median(
        pts.iter()
            .enumerate()
            .map(|(i, p)| {
                pts.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| (q - p).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    );
    let tol = (0.25 * nn).max(1.5 * peaks.pixel_size());

    let (a1, a2) = lattice_vectors(&pts, tol)?;
    let basis = Matrix2::from_columns(&[a1, a2]);
    let inv = basis
        .try_inverse()
        .ok_or_else(|| Error::Fit("lattice vectors are collinear".into()))?;
    let u: Vec<Vector2<f64>> = pts.iter().map(|p| inv * (p - pts[0])).collect();
    let (hole, off, rounds) = assign_sublattices(&u, &basis, tol)?;
    let paired = hole.iter().any(|&h| h);

    // integer cell of each peak relative to the first electron site
    let first_e = hole.iter().position(|&h| !h).unwrap_or(0);
    let cells: Vec<(f64, f64)> = u
        .iter()
        .zip(&hole)
        .map(|(p, &h)| {
            let q = p - u[first_e] - if h { off } else { Vector2::zeros() };
            (q.x.round(), q.y.round())
        })
        .collect();
    for (axis, pick) in [("V_GL", 0), ("V_GR", 1)] {
        let mut idx: Vec<i64> = cells.iter().map(|c| (if pick == 0 { c.0 } else { c.1 }) as i64).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() < 2 {
            return Err(Error::Fit(format!("peaks span fewer than 2 cells along {axis}")));
        }
    }

    let k = if paired { 4 } else { 3 };
    let mut a = DMatrix::zeros(n, k);
    for (i, (&(m, nn), &h)) in cells.iter().zip(&hole).enumerate() {
        a[(i, 0)] = 1.0;
        a[(i, 1)] = m;
        a[(i, 2)] = nn;
        if paired {
            a[(i, 3)] = if h { 1.0 } else { 0.0 };
        }
    }
    let bx = DVector::from_iterator(n, pts.iter().map(|p| p.x));
    let by = DVector::from_iterator(n, pts.iter().map(|p| p.y));
    let svd = a.clone().svd(true, true);
    let sx = svd.solve(&bx, 1e-12).map_err(|e| Error::Fit(e.to_string()))?;
    let sy = svd.solve(&by, 1e-12).map_err(|e| Error::Fit(e.to_string()))?;
    let rx = &a * &sx - &bx;
    let ry = &a * &sy - &by;
    let residual_rms = ((rx.norm_squared() + ry.norm_squared()) / n as f64).sqrt();

    let a1 = Vector2::new(sx[1], sy[1]);
    let a2 = Vector2::new(sx[2], sy[2]);
    let pair = if paired { Vector2::new(sx[3], sy[3]) } else { Vector2::zeros() };
    let frac = Matrix2::from_columns(&[a1, a2])
        .try_inverse()
        .ok_or_else(|| Error::Fit("fitted lattice vectors are collinear".into()))?
        * pair;
    Ok(LatticeFit {
        origin: (sx[0], sy[0]),
        a1: (a1.x, a1.y),
        a2: (a2.x, a2.y),
        pair: (pair.x, pair.y),
        pair_fraction: (frac.x, frac.y),
        residual_rms,
        n_peaks: n,
        n_hole: hole.iter().filter(|&&h| h).count(),
        rounds,
        refinement: peaks.refinement,
        bias: peaks.bias,
    })
}

/// Widths of the single-dot conducting bands measured straight along each
/// gate axis, volts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandWidths {
    /// Left-dot band width along `V_GL` at fixed `V_GR`.
    pub along_gl: f64,
    /// Right-dot band width along `V_GR` at fixed `V_GL`.
    pub along_gr: f64,
    /// Pixel lines averaged for each width.
    pub lines: (usize, usize),
}

/// Length of `[x0, x1]` (fractional sample indices) over which the linear
/// interpolant of `f` exceeds `t`.
fn length_above(f: impl Fn(usize) -> f64, x0: f64, x1: f64, t: f64) -> f64 {
    let mut total = 0.0;
    let first = x0.floor() as usize;
    let last = x1.ceil() as usize;
    for i in first..last {
        let (a, b) = (f(i), f(i + 1));
        let lo = x0.max(i as f64) - i as f64;
        let hi = x1.min((i + 1) as f64) - i as f64;
        if hi <= lo {
            continue;
        }
        let val = |s: f64| a + (b - a) * s;
        let (va, vb) = (val(lo), val(hi));
        total += if va > t && vb > t {
            hi - lo
        } else if va <= t && vb <= t {
            0.0
        } else {
            let s = lo + (t - va) / (vb - va) * (hi - lo);
            if va > t {
                s - lo
            } else {
                hi - s
            }
        };
    }
    total
}

/// Full width at half maximum, summed over a line spanning a whole number
/// of periods, with the half level taken between the median band and median
/// background values.
fn line_width(f: &dyn Fn(usize) -> f64, x0: f64, x1: f64) -> Option<f64> {
    let samples: Vec<f64> = (x0.ceil() as usize..=x1.floor() as usize).map(f).collect();
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let p98 = sorted[((sorted.len() - 1) as f64 * 0.98).round() as usize];
    if p98 <= 0.0 {
        return None;
    }
    let band: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.5 * p98).collect();
    let floor: Vec<f64> = samples.iter().copied().filter(|&x| x <= 0.5 * p98).collect();
    if band.is_empty() || floor.is_empty() {
        return None;
    }
    let half = 0.5 * (median(band) + median(floor));
    Some(length_above(f, x0, x1, half))
}

/// Measures single-dot band widths on lines through the cell centres.
///
/// Lines within ±0.2 of a period of each centre are used; each covers the
/// largest whole number of periods that fits in the map, so every line
/// crosses one band per period.
pub fn measure_band_widths(map: &ConductanceMap, fit: &LatticeFit) -> Result<BandWidths> {
    let (dvl, dvr) = fit.periods();
    let (ax, ay) = (map.v_gl, map.v_gr);
    let (px, py) = (ax.step(), ay.step());
    if px <= 0.0 || py <= 0.0 {
        return Err(Error::InvalidArgument("band widths need increasing map axes".into()));
    }
    let centre = |m: f64, n: f64| fit.pair_midpoint(m - 0.5, n - 0.5);
    // cell-index range covering the map
    let inv = fit.basis().try_inverse().expect("fitted basis is invertible");
    let corners = [
        (ax.start, ay.start),
        (ax.stop, ay.start),
        (ax.start, ay.stop),
        (ax.stop, ay.stop),
    ];
    let idx: Vec<Vector2<f64>> = corners
        .iter()
        .map(|&(x, y)| inv * (Vector2::new(x, y) - centre(0.0, 0.0)))
        .collect();
    let lo = idx.iter().fold(Vector2::repeat(f64::INFINITY), |a, p| a.inf(p)).map(|x| x.floor() as i64 - 1);
    let hi = idx.iter().fold(Vector2::repeat(f64::NEG_INFINITY), |a, p| a.sup(p)).map(|x| x.ceil() as i64 + 1);

    let mut gl = Vec::new();
    for n in lo.y..=hi.y {
        let c = centre(lo.x as f64, n as f64);
        let band = 0.2 * dvr;
        let r0 = ay.index_of(c.y - band).ceil().max(0.0) as usize;
        let r1 = ay.index_of(c.y + band).floor().min((ay.count - 1) as f64);
        if r1 < 0.0 {
            continue;
        }
        for r in r0..=r1 as usize {
            // centre x on this row, shifted by whole periods into the map
            let y = ay.value(r);
            let x_c = c.x + (y - c.y) * fit.a2.0 / fit.a2.1;
            let first = ((ax.start - x_c) / dvl).ceil();
            let x0 = x_c + first * dvl;
            let periods = ((ax.stop - x0) / dvl).floor();
            if periods < 1.0 {
                continue;
            }
            let f = |i: usize| map.get(r, i);
            if let Some(w) = line_width(&f, ax.index_of(x0), ax.index_of(x0 + periods * dvl)) {
                gl.push(w * px / periods);
            }
        }
    }

    let mut gr = Vec::new();
    for m in lo.x..=hi.x {
        let c = centre(m as f64, lo.y as f64);
        let band = 0.2 * dvl;
        let c0 = ax.index_of(c.x - band).ceil().max(0.0) as usize;
        let c1 = ax.index_of(c.x + band).floor().min((ax.count - 1) as f64);
        if c1 < 0.0 {
            continue;
        }
        for col in c0..=c1 as usize {
            let x = ax.value(col);
            let y_c = c.y + (x - c.x) * fit.a1.1 / fit.a1.0;
            let first = ((ay.start - y_c) / dvr).ceil();
            let y0 = y_c + first * dvr;
            let periods = ((ay.stop - y0) / dvr).floor();
            if periods < 1.0 {
                continue;
            }
            let f = |i: usize| map.get(i, col);
            if let Some(w) = line_width(&f, ay.index_of(y0), ay.index_of(y0 + periods * dvr)) {
                gr.push(w * py / periods);
            }
        }
    }
    if gl.is_empty() || gr.is_empty() {
        return Err(Error::Fit(
            "no line through a cell centre spans a full period along both gates".into(),
        ));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(BandWidths {
        along_gl: mean(&gl),
        along_gr: mean(&gr),
        lines: (gl.len(), gr.len()),
    })
}

/// Coupling ratios `(C_m/C_R, C_m/C_L)` from the pair offset in lattice
/// units and the band widths in lattice units.
///
/// Vertex pairs sit `s1(1 − s2)/(1 − s1·s2)` apart along `a1` (and the
/// mirror expression along `a2`). Centroids of finite-bias spots sit further
/// apart by `(1 − s2)·w1/(2(1 − s1·s2))`. The ratios follow by fixed-point
/// iteration, clamped at zero.
pub(crate) fn coupling_ratios(pair: (f64, f64), widths: (f64, f64)) -> (f64, f64) {
    let (a, b) = pair;
    let (w1, w2) = widths;
    let mut s = (a, b);
    for _ in 0..10_000 {
        let s1 = ((a - (1.0 - s.1) * 0.5 * w1) / ((1.0 - s.1) + a * s.1)).max(0.0);
        let s2 = ((b - (1.0 - s.0) * 0.5 * w2) / ((1.0 - s.0) + b * s.0)).max(0.0);
        let done = (s1 - s.0).abs() < 1e-16 && (s2 - s.1).abs() < 1e-16;
        s = (s1, s2);
        if done {
            break;
        }
    }
    s
}

/// Converts a lattice fit (and band widths, at finite bias) into honeycomb
/// dimensions.
///
/// The addition-line shifts are `ΔV^m = s·ΔV` with `s` from
/// [`coupling_ratios`]. A band measured straight along `V_GL` is narrower
/// than `|bias|/α_GL` by `1 − s1·s2`, because the other dot's level moves
/// with the gate too; the reported `δV` undoes that factor.
pub fn geometry_from_fit(fit: &LatticeFit, bands: Option<&BandWidths>) -> Result<HoneycombGeometry> {
    let (dvl, dvr) = fit.periods();
    let (along_gl, along_gr) = match (fit.bias != 0.0, bands) {
        (false, _) => (0.0, 0.0),
        (true, Some(b)) => (b.along_gl, b.along_gr),
        (true, None) => {
            return Err(Error::InvalidArgument(
                "band widths are required for a finite-bias fit".into(),
            ))
        }
    };
    let spot_widths = match fit.refinement {
        Refinement::Centroid => (along_gl / dvl, along_gr / dvr),
        _ => (0.0, 0.0),
    };
    let (s1, s2) = if fit.n_hole == 0 {
        (0.0, 0.0)
    } else {
        coupling_ratios(fit.pair_fraction, spot_widths)
    };
    let shrink = 1.0 - s1 * s2;
    let g = HoneycombGeometry {
        dv_gl: dvl,
        dv_gr: dvr,
        dv_gl_m: s1 * dvl,
        dv_gr_m: s2 * dvr,
        delta_v_gl: along_gl / shrink,
        delta_v_gr: along_gr / shrink,
        bias: fit.bias,
    };
    g.validate()?;
    Ok(g)
}
