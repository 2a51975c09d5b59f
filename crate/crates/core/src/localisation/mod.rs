//! Gap quadruples and the localisation experiments built on them.
//!
//! A quadruple is four consecutive levels `E_a < E_b < E_c < E_d` with a
//! small middle gap and two wide flanks:
//!
//! ```text
//! E_c - E_b < eps,  E_d - E_c > eps^q,  E_b - E_a > eps^q,  E_d < eps^-rho
//! ```
//!
//! On such a quadruple the two-level quasimode on `[E_b, E_c]` is close to
//! the eigenfunction whose eigenvalue falls between `E_b` and `E_c`.

mod momentum;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quasimode::{build_quasimode, overlap, solve_quasi_eigenvalues, Interval, Quasimode};
use crate::secular::{
    eigenpair_coefficients, solve_gap, PerturbedEigenpair, ScattererConfig, SecularFunction,
};
use crate::spectrum::Spectrum;

pub use momentum::{
    eight_point_mass, localisation_points, momentum_density, smoothed_delta, MomentumGrid,
    MomentumGridSpec, DEFAULT_RESOLUTION, DEFAULT_WINDOW_RADIUS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadrupleFlags {
    pub middle_small: bool,
    pub upper_wide: bool,
    pub lower_wide: bool,
    pub below_ceiling: bool,
}

impl QuadrupleFlags {
    pub fn all(&self) -> bool {
        self.middle_small && self.upper_wide && self.lower_wide && self.below_ceiling
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapQuadruple {
    /// 1-based spectrum indices of `E_a, E_b, E_c, E_d`.
    pub indices: [usize; 4],
    pub energies: [f64; 4],
    pub eps: f64,
    pub q: f64,
    pub rho: f64,
    pub flags: QuadrupleFlags,
}

impl GapQuadruple {
    /// Evaluate the four conditions on consecutive levels.
    pub fn classify(indices: [usize; 4], energies: [f64; 4], eps: f64, q: f64, rho: f64) -> Self {
        let [a, b, c, d] = energies;
        let wide = eps.powf(q);
        let flags = QuadrupleFlags {
            middle_small: c - b < eps,
            upper_wide: d - c > wide,
            lower_wide: b - a > wide,
            below_ceiling: d < eps.powf(-rho),
        };
        GapQuadruple {
            indices,
            energies,
            eps,
            q,
            rho,
            flags,
        }
    }

    pub fn satisfied(&self) -> bool {
        self.flags.all()
    }

    /// `E_c - E_b`.
    pub fn middle_gap(&self) -> f64 {
        self.energies[2] - self.energies[1]
    }

    /// `min(E_d - E_c, E_b - E_a)`.
    pub fn flank(&self) -> f64 {
        (self.energies[3] - self.energies[2]).min(self.energies[1] - self.energies[0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadrupleScan {
    /// Satisfied quadruples in order of energy.
    pub quadruples: Vec<GapQuadruple>,
    /// Number of consecutive quadruples examined (those with `E_d` below the ceiling).
    pub examined: usize,
    pub middle_small: usize,
    pub ceiling: f64,
}

pub fn check_quadruple_params(eps: f64, q: f64, rho: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    if !(q > 0.0 && q < 0.5) {
        return Err(invalid(format!("q must lie in (0, 1/2), got {q}")));
    }
    if !(rho > 1.0 && rho < 2.0 * (1.0 - q)) {
        return Err(invalid(format!(
            "rho must lie in (1, {}), got {rho}",
            2.0 * (1.0 - q)
        )));
    }
    Ok(())
}

/// Every satisfied quadruple of consecutive levels.
pub fn scan_quadruples(spec: &Spectrum, eps: f64, q: f64, rho: f64) -> Result<QuadrupleScan> {
    check_quadruple_params(eps, q, rho)?;
    let ceiling = eps.powf(-rho);
    let lines = spec.lines();
    let mut scan = QuadrupleScan {
        quadruples: Vec::new(),
        examined: 0,
        middle_small: 0,
        ceiling,
    };
    for w in lines.windows(4) {
        if w[3].energy >= ceiling {
            break;
        }
        scan.examined += 1;
        let quad = GapQuadruple::classify(
            [w[0].index, w[1].index, w[2].index, w[3].index],
            [w[0].energy, w[1].energy, w[2].energy, w[3].energy],
            eps,
            q,
            rho,
        );
        scan.middle_small += quad.flags.middle_small as usize;
        if quad.satisfied() {
            scan.quadruples.push(quad);
        }
    }
    Ok(scan)
}

/// Lower bound on the best normalised overlap with a two-level quasimode:
/// `(1/sqrt 3) (1 - l^2 / (4 m^2))^{1/2}` with `l` the middle gap and `m`
/// the smaller flank; zero once `l >= 2m`.
pub fn proposition3_bound(middle: f64, flank: f64) -> f64 {
    let r = 1.0 - middle * middle / (4.0 * flank * flank);
    (r.max(0.0) / 3.0).sqrt()
}

fn normalised_overlap(spec: &Spectrum, qm: &Quasimode, pair: &PerturbedEigenpair) -> Result<f64> {
    Ok(overlap(spec, qm, pair)? / (qm.norm_sq * pair.norm_sq).sqrt())
}

/// Eigenvalues in `(E_a, E_b)`, `(E_b, E_c)`, `(E_c, E_d)`.
fn quadruple_eigenvalues(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    quad: &GapQuadruple,
) -> Result<[f64; 3]> {
    let f = SecularFunction::new(spec, cfg)?;
    if quad.energies[3] >= f.upper_limit() {
        return Err(invalid(format!(
            "quadruple top {} must stay below e_cutoff - 1",
            quad.energies[3]
        )));
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let r = solve_gap(
            |x| f.eval_unchecked(x),
            quad.indices[k],
            quad.energies[k],
            quad.energies[k + 1],
            true,
            true,
        )?;
        *slot = r.lambda;
    }
    Ok(out)
}

fn two_level_quasimode(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    quad: &GapQuadruple,
) -> Result<Quasimode> {
    let interval = Interval::new(spec, quad.energies[1], quad.energies[2])?;
    let mu = solve_quasi_eigenvalues(spec, &interval, 0.0, cfg)?[0];
    build_quasimode(spec, &interval, 0.0, mu, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Proposition3Check {
    pub quadruple: GapQuadruple,
    pub mu: f64,
    pub lambdas: [f64; 3],
    /// Normalised overlaps with the three eigenfunctions.
    pub overlaps: [f64; 3],
    pub best_overlap: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn proposition3_check(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    quad: &GapQuadruple,
) -> Result<Proposition3Check> {
    if !quad.satisfied() {
        return Err(invalid("quadruple does not satisfy all four conditions"));
    }
    let qm = two_level_quasimode(spec, cfg, quad)?;
    let lambdas = quadruple_eigenvalues(spec, cfg, quad)?;
    let mut overlaps = [0.0; 3];
    for (o, &l) in overlaps.iter_mut().zip(&lambdas) {
        *o = normalised_overlap(spec, &qm, &eigenpair_coefficients(spec, cfg, l)?)?;
    }
    let best_overlap = overlaps.iter().copied().fold(0.0, f64::max);
    let bound = proposition3_bound(quad.middle_gap(), quad.flank());
    Ok(Proposition3Check {
        quadruple: *quad,
        mu: qm.mu,
        lambdas,
        overlaps,
        best_overlap,
        bound,
        holds: best_overlap >= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Top2Mass {
    /// 1-based indices `(j, j + 1)`.
    pub indices: (usize, usize),
    pub mass_fraction: f64,
    /// 1 when the two coefficients have opposite signs in the separable mode
    /// basis (`Phi_j - Phi_{j+1}`), 0 otherwise.
    pub beta: u8,
}

/// The adjacent pair of levels carrying the most of `|c_j|^2`.
pub fn top2_mass(spec: &Spectrum, pair: &PerturbedEigenpair) -> Result<Top2Mass> {
    if spec.id() != pair.spectrum_id {
        return Err(Error::SpectrumMismatch);
    }
    let c = &pair.coefficients;
    if c.len() < 2 {
        return Err(invalid("need at least two coefficients"));
    }
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..c.len() - 1 {
        let m = c[k].norm_sqr() + c[k + 1].norm_sqr();
        if m > best.1 {
            best = (k, m);
        }
    }
    let k = best.0;
    let lines = spec.lines();
    // Coefficient on the first separable mode of each level, so that the sign
    // refers to the unrotated eigenfunctions where those exist.
    let in_modes = |j: usize| match lines[j].modes.first() {
        Some(m) => c[j] * m.coeff,
        None => c[j],
    };
    let rel = in_modes(k) * in_modes(k + 1).conj();
    Ok(Top2Mass {
        indices: (lines[k].index, lines[k + 1].index),
        mass_fraction: best.1 / pair.norm_sq,
        beta: (rel.re < 0.0) as u8,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem7Row {
    pub eps: f64,
    pub quadruple: GapQuadruple,
    pub mu: f64,
    /// Eigenvalue between `E_b` and `E_c`.
    pub lambda: f64,
    /// Flanking eigenvalues in `(E_a, E_b)` and `(E_c, E_d)`.
    pub lambda_below: f64,
    pub lambda_above: f64,
    pub defect: f64,
    pub gap_margin: f64,
    pub top2: Top2Mass,
}

/// Default sweep `0.1 * 2^-k`, `k = 0..n`.
pub fn default_eps_sequence(n: usize) -> Vec<f64> {
    (0..n).map(|k| 0.1 * 0.5f64.powi(k as i32)).collect()
}

/// For each `eps`, the two-level quasimode on the lowest satisfied quadruple
/// against the eigenfunction between its middle levels.
///
/// `min_weight` is the lower bound the weights must respect up to the
/// cutoff.
pub fn theorem7_experiment(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    eps_sequence: &[f64],
    q: f64,
    rho: f64,
    min_weight: f64,
) -> Result<Vec<Theorem7Row>> {
    if cfg.theta != PI || cfg.kappa != 0.0 {
        return Err(invalid("the convergence experiment runs at theta = pi"));
    }
    if eps_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(invalid("eps sequence must be strictly decreasing"));
    }
    if let Some(l) = spec
        .truncated(cfg.e_cutoff)
        .iter()
        .find(|l| l.weight < min_weight)
    {
        return Err(invalid(format!(
            "level {} has weight {} below the required {min_weight}",
            l.index, l.weight
        )));
    }
    let mut rows = Vec::with_capacity(eps_sequence.len());
    for &eps in eps_sequence {
        let scan = scan_quadruples(spec, eps, q, rho)?;
        let quad = *scan.quadruples.first().ok_or(Error::NoQuadruple { eps })?;
        let qm = two_level_quasimode(spec, cfg, &quad)?;
        let [below, lambda, above] = quadruple_eigenvalues(spec, cfg, &quad)?;
        let pair = eigenpair_coefficients(spec, cfg, lambda)?;
        let o = normalised_overlap(spec, &qm, &pair)?;
        let [_, eb, ec, _] = quad.energies;
        let margin = (above - ec).min(eb - below) / eps.powf(rho / 2.0 + q);
        rows.push(Theorem7Row {
            eps,
            quadruple: quad,
            mu: qm.mu,
            lambda,
            lambda_below: below,
            lambda_above: above,
            defect: 1.0 - o * o,
            gap_margin: margin,
            top2: top2_mass(spec, &pair)?,
        });
    }
    Ok(rows)
}

/// `c_j` restricted to the `half_width` levels on either side of the pair's
/// gap, zero elsewhere. Handy for momentum densities of eigenfunctions,
/// whose far coefficients are small but numerous.
pub fn local_coefficients(pair: &PerturbedEigenpair, half_width: usize) -> Vec<Complex64> {
    let g = pair.gap_index;
    let lo = g.saturating_sub(half_width);
    let hi = (g + half_width).min(pair.coefficients.len());
    pair.coefficients
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if k >= lo && k < hi {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(levels: &[f64], e_max: f64) -> Spectrum {
        let w: Vec<(f64, f64)> = levels.iter().map(|&e| (e, 1.0)).collect();
        Spectrum::from_weights(&w, e_max).unwrap()
    }

    #[test]
    fn satisfied_example() {
        let s = toy(&[0.0, 1.0, 1.049, 2.0], 2.0);
        let scan = scan_quadruples(&s, 0.05, 0.25, 1.4).unwrap();
        assert_eq!(scan.quadruples.len(), 1);
        assert_eq!(scan.quadruples[0].indices, [1, 2, 3, 4]);
        assert!((scan.ceiling - 66.289).abs() < 1e-3);
    }

    #[test]
    fn middle_gap_is_strict() {
        let s = toy(&[0.0, 1.0, 1.5, 3.0], 3.0);
        let scan = scan_quadruples(&s, 0.5, 0.25, 1.4).unwrap();
        assert!(scan.quadruples.is_empty());
        assert_eq!(scan.middle_small, 0);
    }

    #[test]
    fn uniform_spectrum_has_none() {
        let levels: Vec<f64> = (1..50).map(f64::from).collect();
        let s = toy(&levels, 50.0);
        assert!(scan_quadruples(&s, 0.5, 0.25, 1.4)
            .unwrap()
            .quadruples
            .is_empty());
    }

    #[test]
    fn parameter_ranges() {
        let s = toy(&[1.0], 1.0);
        assert!(scan_quadruples(&s, 0.1, 0.5, 1.2).is_err());
        assert!(scan_quadruples(&s, 0.1, 0.25, 1.5).is_err());
        assert!(scan_quadruples(&s, 0.1, 0.25, 1.0).is_err());
        assert!(scan_quadruples(&s, 0.0, 0.25, 1.2).is_err());
    }

    #[test]
    fn bound_collapses() {
        assert_eq!(proposition3_bound(2.0, 1.0), 0.0);
        assert!((proposition3_bound(0.0, 1.0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_toy_meets_overlap_bound() {
        let s = toy(&[0.0, 10.0, 10.1, 20.0], 100.0);
        let cfg = ScattererConfig::new(PI, 100.0).unwrap().with_tail(false);
        let scan = scan_quadruples(&s, 0.11, 0.25, 1.4).unwrap();
        let c = proposition3_check(&s, &cfg, &scan.quadruples[0]).unwrap();
        assert!(c.holds, "{c:?}");
        assert!(c.lambdas[1] > 10.0 && c.lambdas[1] < 10.1);
    }

    #[test]
    fn top2_flat_vector() {
        let s = toy(&(1..=10).map(f64::from).collect::<Vec<_>>(), 10.0);
        let pair = PerturbedEigenpair {
            lambda: 0.5,
            gap_index: 0,
            coefficients: vec![Complex64::new(1.0, 0.0); 10],
            norm_sq: 10.0,
            spectrum_id: s.id(),
        };
        let t = top2_mass(&s, &pair).unwrap();
        assert!((t.mass_fraction - 0.2).abs() < 1e-15);
    }

    #[test]
    fn top2_sign_in_mode_basis() {
        // Two separable modes with amplitudes of opposite sign at p: the
        // eigenvector between them has c_j, c_{j+1} of opposite sign in the
        // reduced basis, hence the same sign in the mode basis.
        use crate::spectrum::{Mode, RawLevel};
        use std::collections::BTreeMap;
        let mk = |e: f64, a: f64, n: u32| RawLevel {
            energy: e,
            amplitude: Complex64::new(a, 0.0),
            modes: vec![Mode {
                n,
                m: 1,
                coeff: Complex64::new(1.0, 0.0),
            }],
        };
        for (a2, beta) in [(-1.0, 0u8), (1.0, 1u8)] {
            let lines =
                crate::spectrum::reduce_levels(vec![mk(1.0, 1.0, 1), mk(2.0, a2, 3)]).unwrap();
            let s = Spectrum::from_lines(
                lines,
                2.0,
                crate::spectrum::SpectrumKind::File,
                BTreeMap::new(),
                None,
            )
            .unwrap();
            let cfg = ScattererConfig::new(PI, 2.0).unwrap().with_tail(false);
            let pair = eigenpair_coefficients(&s, &cfg, 1.5).unwrap();
            assert_eq!(top2_mass(&s, &pair).unwrap().beta, beta);
        }
    }

    #[test]
    fn controlled_toy_defect_shrinks() {
        // Fixed flanks, shrinking middle gap: the defect falls with it.
        let cfg = ScattererConfig::new(PI, 200.0).unwrap().with_tail(false);
        let mut last = f64::INFINITY;
        for &g in &[0.05, 0.01, 0.002] {
            let s = toy(&[1.0, 5.0, 5.0 + g, 9.0, 13.0], 200.0);
            let rows = theorem7_experiment(&s, &cfg, &[0.1], 0.25, 1.4, 1.0).unwrap();
            assert!(rows[0].defect < last);
            last = rows[0].defect;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn convergence_sweep_requires_pi() {
        let s = toy(&[1.0, 5.0, 5.01, 9.0], 200.0);
        let cfg = ScattererConfig::new(PI / 2.0, 200.0).unwrap();
        assert!(theorem7_experiment(&s, &cfg, &[0.1], 0.25, 1.4, 1.0).is_err());
    }

    #[test]
    fn convergence_sweep_reports_missing_quadruple() {
        let s = toy(&[1.0, 2.0, 3.0, 4.0], 200.0);
        let cfg = ScattererConfig::new(PI, 200.0).unwrap();
        assert!(matches!(
            theorem7_experiment(&s, &cfg, &[0.1], 0.25, 1.4, 1.0),
            Err(Error::NoQuadruple { .. })
        ));
    }

    #[test]
    fn convergence_sweep_weight_audit() {
        let s = Spectrum::from_weights(&[(1.0, 1.0), (5.0, 0.1), (5.01, 1.0), (9.0, 1.0)], 200.0)
            .unwrap();
        let cfg = ScattererConfig::new(PI, 200.0).unwrap();
        assert!(theorem7_experiment(&s, &cfg, &[0.1], 0.25, 1.4, 0.5).is_err());
    }
}
