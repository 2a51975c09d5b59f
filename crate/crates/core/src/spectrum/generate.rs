use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, Exp};

use super::{reduce_levels, Mode, RawLevel, Spectrum, SpectrumKind, ZERO_AMPLITUDE};
use crate::error::{invalid, Error, Result};
use crate::rng::stream_rng;

/// Rectangle `(0, 2a) x (0, 2b)` with a scatterer at `(x_p, y_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleGeometry {
    pub a: f64,
    pub b: f64,
    pub scatterer: (f64, f64),
}

impl RectangleGeometry {
    pub fn new(a: f64, b: f64, scatterer: (f64, f64)) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(invalid(format!(
                "half-sides must be positive, got a={a}, b={b}"
            )));
        }
        let (x, y) = scatterer;
        if !(x > 0.0 && x < 2.0 * a && y > 0.0 && y < 2.0 * b) {
            return Err(Error::ScattererOnBoundary { x, y });
        }
        Ok(RectangleGeometry { a, b, scatterer })
    }

    /// Scatterer at the centre `(a, b)`.
    pub fn centered(a: f64, b: f64) -> Result<Self> {
        RectangleGeometry::new(a, b, (a, b))
    }

    pub fn is_centered(&self) -> bool {
        self.scatterer == (self.a, self.b)
    }

    /// Momentum of the odd mode `n` along x, `n pi / (2a)`.
    pub fn px(&self, n: u32) -> f64 {
        n as f64 * PI / (2.0 * self.a)
    }

    pub fn py(&self, m: u32) -> f64 {
        m as f64 * PI / (2.0 * self.b)
    }

    /// Dirichlet energy `pi^2/4 (n^2/a^2 + m^2/b^2)` of mode `(n, m)`.
    pub fn mode_energy(&self, n: u32, m: u32) -> f64 {
        let (n, m) = (n as f64, m as f64);
        PI * PI / 4.0 * (n * n / (self.a * self.a) + m * m / (self.b * self.b))
    }
}

/// Odd-odd Dirichlet levels of the rectangle with a central scatterer,
/// `E_{s,t} = pi^2 ((s+1/2)^2/a^2 + (t+1/2)^2/b^2)` with amplitude
/// `(-1)^{s+t}/sqrt(ab)`.
pub fn generate_rectangle_odd(geom: &RectangleGeometry, e_max: f64) -> Result<Spectrum> {
    if !geom.is_centered() {
        return Err(invalid(
            "rectangle-odd spectra need the scatterer at the centre (a, b)",
        ));
    }
    let (a, b) = (geom.a, geom.b);
    let ground = PI * PI * (0.25 / (a * a) + 0.25 / (b * b));
    if !(e_max >= ground) {
        return Err(Error::EmptySpectrum { e_max });
    }
    let amp = 1.0 / (a * b).sqrt();
    let mut raw = Vec::new();
    let mut s = 0u32;
    loop {
        let sx = (s as f64 + 0.5) / a;
        let ex = PI * PI * sx * sx;
        if ex + PI * PI * 0.25 / (b * b) > e_max {
            break;
        }
        let mut t = 0u32;
        loop {
            let ty = (t as f64 + 0.5) / b;
            let e = ex + PI * PI * ty * ty;
            if e > e_max {
                break;
            }
            let sign = if (s + t).is_multiple_of(2) { 1.0 } else { -1.0 };
            raw.push(RawLevel {
                energy: e,
                amplitude: Complex64::new(sign * amp, 0.0),
                modes: vec![Mode {
                    n: 2 * s + 1,
                    m: 2 * t + 1,
                    coeff: Complex64::new(1.0, 0.0),
                }],
            });
            t += 1;
        }
        s += 1;
    }
    let lines = reduce_levels(raw)?;
    let mut params = BTreeMap::new();
    params.insert("a".to_owned(), a);
    params.insert("b".to_owned(), b);
    params.insert("xp".to_owned(), geom.scatterer.0);
    params.insert("yp".to_owned(), geom.scatterer.1);
    Spectrum::from_lines(lines, e_max, SpectrumKind::RectangleOdd, params, None)
}

/// Full Dirichlet spectrum of the rectangle with sides `side_x x side_y` and
/// an arbitrary interior scatterer: `E_{n,m} = pi^2 (n^2/side_x^2 + m^2/side_y^2)`,
/// amplitude `2/sqrt(side_x side_y) sin(n pi x_p/side_x) sin(m pi y_p/side_y)`.
pub fn generate_rectangle_full(
    side_x: f64,
    side_y: f64,
    scatterer: (f64, f64),
    e_max: f64,
) -> Result<Spectrum> {
    if !(side_x > 0.0 && side_x.is_finite() && side_y > 0.0 && side_y.is_finite()) {
        return Err(invalid(format!(
            "sides must be positive, got {side_x} x {side_y}"
        )));
    }
    let (x, y) = scatterer;
    if !(x > 0.0 && x < side_x && y > 0.0 && y < side_y) {
        return Err(Error::ScattererOnBoundary { x, y });
    }
    let ground = PI * PI * (1.0 / (side_x * side_x) + 1.0 / (side_y * side_y));
    if !(e_max >= ground) {
        return Err(Error::EmptySpectrum { e_max });
    }
    let norm = 2.0 / (side_x * side_y).sqrt();
    let mut raw = Vec::new();
    let mut n = 1u32;
    loop {
        let ex = PI * PI * (n as f64 / side_x).powi(2);
        if ex + PI * PI / (side_y * side_y) > e_max {
            break;
        }
        let sx = (n as f64 * PI * x / side_x).sin();
        let mut m = 1u32;
        loop {
            let e = ex + PI * PI * (m as f64 / side_y).powi(2);
            if e > e_max {
                break;
            }
            let amp = norm * sx * (m as f64 * PI * y / side_y).sin();
            if amp.abs() >= ZERO_AMPLITUDE {
                raw.push(RawLevel {
                    energy: e,
                    amplitude: Complex64::new(amp, 0.0),
                    modes: vec![Mode {
                        n,
                        m,
                        coeff: Complex64::new(1.0, 0.0),
                    }],
                });
            }
            m += 1;
        }
        n += 1;
    }
    let lines = reduce_levels(raw)?;
    let mut params = BTreeMap::new();
    params.insert("side_x".to_owned(), side_x);
    params.insert("side_y".to_owned(), side_y);
    params.insert("xp".to_owned(), x);
    params.insert("yp".to_owned(), y);
    Spectrum::from_lines(lines, e_max, SpectrumKind::RectangleFull, params, None)
}

/// Event times of a Poisson process with the given intensity, truncated at
/// `e_max`, each carrying amplitude `sqrt(weight)`.
pub fn generate_poisson(intensity: f64, weight: f64, e_max: f64, seed: u64) -> Result<Spectrum> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(invalid(format!(
            "intensity must be positive, got {intensity}"
        )));
    }
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(invalid(format!("weight must be positive, got {weight}")));
    }
    if !(e_max >= 0.0 && e_max.is_finite()) {
        return Err(invalid(format!(
            "e_max must be finite and non-negative, got {e_max}"
        )));
    }
    let gaps = Exp::new(intensity).map_err(|e| invalid(e.to_string()))?;
    let mut rng = stream_rng(seed, 0);
    let amp = Complex64::new(weight.sqrt(), 0.0);
    let mut raw = Vec::new();
    let mut t = 0.0;
    loop {
        t += gaps.sample(&mut rng);
        if t > e_max {
            break;
        }
        raw.push(RawLevel::new(t, amp));
    }
    let lines = reduce_levels(raw)?;
    let mut params = BTreeMap::new();
    params.insert("intensity".to_owned(), intensity);
    params.insert("weight".to_owned(), weight);
    Spectrum::from_lines(lines, e_max, SpectrumKind::Poisson, params, Some(seed))
}
