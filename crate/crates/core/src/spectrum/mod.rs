//! Unperturbed spectra `{(E_j, Phi_j(p))}` as seen from the scatterer.
//!
//! A [`Spectrum`] is always *reduced*: levels whose eigenfunctions vanish at
//! the scatterer are dropped and degenerate eigenspaces are rotated so that a
//! single basis vector carries the whole value at `p`. The result is a
//! strictly increasing list of levels with positive weights `|Phi_j(p)|^2`.

mod diophantine;
mod generate;
pub mod io;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use diophantine::{
    diophantine_floor, diophantine_profile, lemma_sides, FloorPoint, ModeFilter,
};
pub use generate::{
    generate_poisson, generate_rectangle_full, generate_rectangle_odd, RectangleGeometry,
};

/// Relative tolerance under which two energies are the same level.
pub const DEGENERACY_RTOL: f64 = 1e-10;
/// Amplitudes below this (absolute) are treated as exact zeros.
pub const ZERO_AMPLITUDE: f64 = 1e-12;

/// Weyl density `1/(4 pi)` of the weighted counting function on a surface.
pub const SURFACE_WEYL_DENSITY: f64 = 1.0 / (4.0 * PI);

/// One component of a level's basis function in terms of separable modes
/// `Phi_{n,m}`. Only generated rectangle spectra carry modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: u32,
    pub m: u32,
    pub coeff: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    /// 1-based rank in the reduced spectrum.
    pub index: usize,
    pub energy: f64,
    pub amplitude: Complex64,
    pub weight: f64,
    /// Expansion of this level's basis function over separable modes.
    pub modes: Vec<Mode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    RectangleOdd,
    RectangleFull,
    Poisson,
    File,
}

impl SpectrumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumKind::RectangleOdd => "rectangle-odd",
            SpectrumKind::RectangleFull => "rectangle-full",
            SpectrumKind::Poisson => "poisson",
            SpectrumKind::File => "file",
        }
    }
}

impl std::str::FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectangle-odd" => Ok(SpectrumKind::RectangleOdd),
            "rectangle-full" => Ok(SpectrumKind::RectangleFull),
            "poisson" => Ok(SpectrumKind::Poisson),
            "file" => Ok(SpectrumKind::File),
            other => Err(invalid(format!("unknown spectrum kind '{other}'"))),
        }
    }
}

/// A level before reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct RawLevel {
    pub energy: f64,
    pub amplitude: Complex64,
    pub modes: Vec<Mode>,
}

impl RawLevel {
    pub fn new(energy: f64, amplitude: Complex64) -> Self {
        RawLevel {
            energy,
            amplitude,
            modes: Vec::new(),
        }
    }
}

/// Reduced, strictly increasing truncation of an unperturbed spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lines: Vec<SpectralLine>,
    e_max: f64,
    kind: SpectrumKind,
    params: BTreeMap<String, f64>,
    seed: Option<u64>,
    id: u64,
}

impl Spectrum {
    /// Assemble a spectrum from already reduced lines, checking every invariant.
    pub fn from_lines(
        lines: Vec<SpectralLine>,
        e_max: f64,
        kind: SpectrumKind,
        params: BTreeMap<String, f64>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if !e_max.is_finite() {
            return Err(invalid("e_max must be finite"));
        }
        for (i, line) in lines.iter().enumerate() {
            if line.index != i + 1 {
                return Err(invalid(format!(
                    "line {} carries index {}",
                    i + 1,
                    line.index
                )));
            }
            if !line.energy.is_finite() || line.energy < 0.0 {
                return Err(invalid(format!(
                    "level {} has energy {}",
                    i + 1,
                    line.energy
                )));
            }
            if line.energy > e_max {
                return Err(Error::OutOfRange {
                    energy: line.energy,
                    e_max,
                });
            }
            if !(line.weight > 0.0) || !line.weight.is_finite() {
                return Err(invalid(format!(
                    "level {} has weight {}",
                    i + 1,
                    line.weight
                )));
            }
            let norm = line.amplitude.norm_sqr();
            if (norm - line.weight).abs() > 1e-12 * line.weight {
                return Err(invalid(format!(
                    "level {}: weight {} differs from |amplitude|^2 = {}",
                    i + 1,
                    line.weight,
                    norm
                )));
            }
            if i > 0 && line.energy <= lines[i - 1].energy {
                return Err(invalid(format!(
                    "energies not strictly increasing at level {}",
                    i + 1
                )));
            }
        }
        if let Some(d) = params.get("weyl_density") {
            if !(*d > 0.0) || !d.is_finite() {
                return Err(invalid("weyl_density must be positive"));
            }
        }
        let id = fingerprint(&lines, e_max, kind);
        Ok(Spectrum {
            lines,
            e_max,
            kind,
            params,
            seed,
            id,
        })
    }

    /// Toy spectrum from `(energy, weight)` pairs, mostly useful in tests.
    pub fn from_weights(levels: &[(f64, f64)], e_max: f64) -> Result<Self> {
        let raw: Vec<RawLevel> = levels
            .iter()
            .map(|&(e, w)| {
                if !(w >= 0.0) {
                    return Err(invalid(format!("negative weight {w}")));
                }
                Ok(RawLevel::new(e, Complex64::new(w.sqrt(), 0.0)))
            })
            .collect::<Result<_>>()?;
        let lines = reduce_levels(raw)?;
        Spectrum::from_lines(lines, e_max, SpectrumKind::File, BTreeMap::new(), None)
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Identity used to detect mixing objects from different spectra.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn energies(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.lines.iter().map(|l| l.energy)
    }

    /// Number of leading levels with `E_j <= cutoff`.
    pub fn count_up_to(&self, cutoff: f64) -> usize {
        self.lines.partition_point(|l| l.energy <= cutoff)
    }

    /// Levels with `E_j <= cutoff`.
    pub fn truncated(&self, cutoff: f64) -> &[SpectralLine] {
        &self.lines[..self.count_up_to(cutoff)]
    }

    /// Asymptotic density of the weighted counting function `N(E)`.
    ///
    /// Surfaces obey `N(E) ~ E/(4 pi)`; a Poisson spectrum with intensity
    /// `r` and constant weight `w` has `N(E) ~ r w E`.
    pub fn weyl_density(&self) -> f64 {
        if let Some(d) = self.params.get("weyl_density") {
            return *d;
        }
        match self.kind {
            SpectrumKind::Poisson => {
                let intensity = self.params.get("intensity").copied().unwrap_or(1.0);
                let weight = self.params.get("weight").copied().unwrap_or(1.0);
                intensity * weight
            }
            _ => SURFACE_WEYL_DENSITY,
        }
    }

    /// Copy of this spectrum keeping only levels with `E_j <= e_max`.
    pub fn truncate(&self, e_max: f64) -> Result<Spectrum> {
        if e_max > self.e_max {
            return Err(Error::OutOfRange {
                energy: e_max,
                e_max: self.e_max,
            });
        }
        let lines = self.truncated(e_max).to_vec();
        Spectrum::from_lines(lines, e_max, self.kind, self.params.clone(), self.seed)
    }
}

fn fingerprint(lines: &[SpectralLine], e_max: f64, kind: SpectrumKind) -> u64 {
    // FNV-1a over the bit patterns.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    feed(kind as u64);
    feed(e_max.to_bits());
    for l in lines {
        feed(l.energy.to_bits());
        feed(l.weight.to_bits());
    }
    h
}

/// Merge degenerate levels and drop levels invisible at the scatterer.
///
/// Each cluster of energies within [`DEGENERACY_RTOL`] of its first member
/// becomes one line with weight `sum |a_i|^2` and amplitude `sqrt(weight)`.
/// The line's basis function is `sum conj(a_i)/R * B_i`, so its modes are
/// carried along with the matching coefficients.
pub fn reduce_levels(mut raw: Vec<RawLevel>) -> Result<Vec<SpectralLine>> {
    for r in &raw {
        if !r.energy.is_finite() {
            return Err(invalid(format!("non-finite energy {}", r.energy)));
        }
        if !r.amplitude.re.is_finite() || !r.amplitude.im.is_finite() {
            return Err(invalid(format!("non-finite amplitude at E = {}", r.energy)));
        }
    }
    raw.retain(|r| r.amplitude.norm() >= ZERO_AMPLITUDE);
    raw.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    let mut lines: Vec<SpectralLine> = Vec::new();
    let mut start = 0;
    while start < raw.len() {
        let e0 = raw[start].energy;
        let tol = DEGENERACY_RTOL * e0.abs().max(f64::MIN_POSITIVE);
        let mut end = start + 1;
        while end < raw.len() && raw[end].energy - e0 <= tol {
            end += 1;
        }
        let cluster = &raw[start..end];
        let weight: f64 = cluster.iter().map(|r| r.amplitude.norm_sqr()).sum();
        let root = weight.sqrt();
        let mut modes = Vec::new();
        for r in cluster {
            let rot = r.amplitude.conj() / root;
            modes.extend(r.modes.iter().map(|m| Mode {
                n: m.n,
                m: m.m,
                coeff: m.coeff * rot,
            }));
        }
        lines.push(SpectralLine {
            index: lines.len() + 1,
            energy: e0,
            amplitude: Complex64::new(root, 0.0),
            weight,
            modes,
        });
        start = end;
    }
    Ok(lines)
}

/// Reduce `(energy, amplitude)` pairs into a file-kind [`Spectrum`] whose
/// cutoff is the largest surviving energy.
pub fn reduce_multiplicities(raw: &[(f64, Complex64)]) -> Result<Spectrum> {
    let levels = raw.iter().map(|&(e, a)| RawLevel::new(e, a)).collect();
    let lines = reduce_levels(levels)?;
    let e_max = lines.last().map_or(0.0, |l| l.energy);
    Spectrum::from_lines(lines, e_max, SpectrumKind::File, BTreeMap::new(), None)
}

/// Weighted counting function `N(E) = sum_{E_j <= E} |Phi_j(p)|^2`.
pub fn weyl_count(spec: &Spectrum, energy: f64) -> Result<f64> {
    if energy > spec.e_max() {
        return Err(Error::OutOfRange {
            energy,
            e_max: spec.e_max(),
        });
    }
    Ok(spec.truncated(energy).iter().map(|l| l.weight).sum())
}
