//! Momentum densities of rectangle eigenfunctions.
//!
//! On `(0, 2a)` the mode `sin(n pi x / 2a)` has Fourier transform
//! `(e(k - p) - e(-k - p)) / 2i` with `k = n pi / 2a` and
//! `e(u) = int_0^{2a} e^{iux} dx = pi delta_{2a}(-u)`, where
//! `delta_L(t) = (1 - e^{-iLt}) / (pi i t)` is the smoothed delta. The two
//! terms peak at `p = +-k`, so a single separable mode concentrates near the
//! four points `(+-n pi/2a, +-m pi/2b)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::spectrum::{RectangleGeometry, Spectrum, SpectrumKind};

pub const DEFAULT_RESOLUTION: usize = 512;
const MIN_RESOLUTION: usize = 8;

/// `(1 - e^{-int}) / (pi i t)`, written as `(n/pi) e^{-int/2} sinc(nt/2)` so
/// that `t = 0` needs no special care.
pub fn smoothed_delta(n: f64, t: f64) -> Complex64 {
    let x = 0.5 * n * t;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    Complex64::from_polar(n / PI * sinc, -x)
}

/// Fourier transform of `sin(n pi x / len)` on `(0, len)`.
fn sine_transform(n: u32, len: f64, p: f64) -> Complex64 {
    let k = n as f64 * PI / len;
    let e = |u: f64| PI * smoothed_delta(len, -u);
    (e(k - p) - e(-(k + p))) / Complex64::new(0.0, 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumGridSpec {
    /// The grid spans `[-extent, extent]` on both axes.
    pub extent: f64,
    pub resolution: usize,
}

impl MomentumGridSpec {
    pub fn new(extent: f64, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::GridResolution { resolution });
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(invalid(format!("extent must be positive, got {extent}")));
        }
        Ok(MomentumGridSpec { extent, resolution })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.extent / self.resolution as f64
    }

    /// Cell centre `-extent + (i + 1/2) h`.
    pub fn coord(&self, i: usize) -> f64 {
        -self.extent + (i as f64 + 0.5) * self.step()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    pub spec: MomentumGridSpec,
    /// Row-major, `density[iy * resolution + ix]`.
    pub density: Vec<f64>,
}

impl MomentumGrid {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.density[iy * self.spec.resolution + ix]
    }

    /// Riemann sum of the density.
    pub fn total_mass(&self) -> f64 {
        let h = self.spec.step();
        self.density.iter().sum::<f64>() * h * h
    }
}

/// `|sum_j c_j Phi_hat_j(p)|^2` on a grid, where `coeffs[k]` multiplies the
/// level at position `k` of a rectangle-odd spectrum. Zero coefficients are
/// skipped, so callers can pass a localised slice of an eigenfunction.
pub fn momentum_density(
    geom: &RectangleGeometry,
    spec: &Spectrum,
    coeffs: &[Complex64],
    grid: MomentumGridSpec,
) -> Result<MomentumGrid> {
    let grid = MomentumGridSpec::new(grid.extent, grid.resolution)?;
    if spec.kind() != SpectrumKind::RectangleOdd {
        return Err(invalid("momentum densities need a rectangle-odd spectrum"));
    }
    if spec.params().get("a") != Some(&geom.a) || spec.params().get("b") != Some(&geom.b) {
        return Err(Error::SpectrumMismatch);
    }
    if coeffs.len() > spec.len() {
        return Err(invalid("more coefficients than levels"));
    }
    let mut modes: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (c, line) in coeffs.iter().zip(spec.lines()) {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        if line.modes.is_empty() {
            return Err(invalid(format!("level {} carries no modes", line.index)));
        }
        for m in &line.modes {
            *modes.entry((m.n, m.m)).or_default() += c * m.coeff;
        }
    }
    let res = grid.resolution;
    let coords: Vec<f64> = (0..res).map(|i| grid.coord(i)).collect();
    let mut xs: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
    let mut ys: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
    for &(n, m) in modes.keys() {
        xs.entry(n).or_insert_with(|| {
            coords
                .iter()
                .map(|&p| sine_transform(n, 2.0 * geom.a, p))
                .collect()
        });
        ys.entry(m).or_insert_with(|| {
            coords
                .iter()
                .map(|&p| sine_transform(m, 2.0 * geom.b, p))
                .collect()
        });
    }
    let norm = 1.0 / (2.0 * PI * (geom.a * geom.b).sqrt());
    let modes: Vec<((u32, u32), Complex64)> = modes.into_iter().collect();
    let density: Vec<f64> = (0..res)
        .into_par_iter()
        .flat_map_iter(|iy| {
            let mut row = vec![Complex64::new(0.0, 0.0); res];
            for &((n, m), w) in &modes {
                let wy = w * ys[&m][iy] * norm;
                for (r, x) in row.iter_mut().zip(&xs[&n]) {
                    *r += wy * x;
                }
            }
            row.into_iter().map(|z| z.norm_sqr())
        })
        .collect();
    Ok(MomentumGrid {
        spec: grid,
        density,
    })
}

/// `(+-n pi/2a, +-m pi/2b)`.
pub fn localisation_points(geom: &RectangleGeometry, n: u32, m: u32) -> [(f64, f64); 4] {
    let (px, py) = (geom.px(n), geom.py(m));
    [(px, py), (-px, py), (px, -py), (-px, -py)]
}

/// Default window radius, as a fraction of `|P| = sqrt(E_{n,m})`.
pub const DEFAULT_WINDOW_RADIUS: f64 = 0.1;

/// Fraction of the grid mass inside the windows around the localisation
/// points of each `(n, m)` in `levels`.
///
/// The window around `P = (P_x, P_y)` for mode `(n, m)` is the disk of
/// radius `radius * |P|`, so `radius` is an angular width on the energy
/// shell rather than a fixed momentum.
pub fn eight_point_mass(
    grid: &MomentumGrid,
    geom: &RectangleGeometry,
    levels: &[(u32, u32)],
    radius: f64,
) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    if levels.is_empty() {
        return Err(invalid("no levels given"));
    }
    let ext = grid.spec.extent;
    let mut windows = Vec::new();
    for &(n, m) in levels {
        if n == 0 || m == 0 {
            return Err(invalid("mode numbers start at 1"));
        }
        for (px, py) in localisation_points(geom, n, m) {
            let r = radius * geom.mode_energy(n, m).sqrt();
            if px.abs() + r > ext || py.abs() + r > ext {
                return Err(Error::Coverage {
                    extent: ext,
                    px,
                    py,
                    radius,
                });
            }
            windows.push((px, py, r * r));
        }
    }
    let res = grid.spec.resolution;
    let mut inside = 0.0;
    let mut total = 0.0;
    for iy in 0..res {
        let py = grid.spec.coord(iy);
        for ix in 0..res {
            let px = grid.spec.coord(ix);
            let d = grid.at(ix, iy);
            total += d;
            if windows
                .iter()
                .any(|&(cx, cy, r2)| (px - cx).powi(2) + (py - cy).powi(2) <= r2)
            {
                inside += d;
            }
        }
    }
    if !(total > 0.0) {
        return Err(invalid("grid carries no mass"));
    }
    Ok(inside / total)
}
