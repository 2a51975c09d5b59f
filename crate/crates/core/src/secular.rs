//! Perturbed eigenvalues from the regularised secular equation.
//!
//! With weights `w_j = |Phi_j(p)|^2` the eigenvalues `lambda` of the
//! point-perturbed operator solve `F(lambda) = 0` where
//!
//! ```text
//! F(l) = sum_j (1/(E_j - l) - E_j/(1 + E_j^2)) w_j - kappa sum_j w_j/(1 + E_j^2)
//! ```
//!
//! The series is cut at `e_cutoff` and the remainder is replaced by its Weyl
//! integral with density `rho` (see [`Spectrum::weyl_density`]):
//!
//! ```text
//! tail(l) = rho (-ln((C - l)/sqrt(1 + C^2)) - kappa (pi/2 - atan C))
//! ```
//!
//! `F` increases strictly from `-inf` to `+inf` between consecutive poles, so
//! every gap holds exactly one root and plain bisection finds it.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rootfind::bisect_increasing;
use crate::spectrum::{SpectralLine, Spectrum};

/// Relative distance to a level below which `lambda` counts as a pole.
pub const POLE_RTOL: f64 = 1e-12;
/// Bracket margin as a fraction of the gap.
pub const BRACKET_MARGIN: f64 = 1e-9;
/// Gaps narrower than this are skipped.
pub const MIN_GAP: f64 = 1e-10;

/// `sin(theta)/(1 - cos(theta))`, exactly zero at `theta = pi`.
pub fn kappa_of_theta(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(invalid(format!("theta must be finite, got {theta}")));
    }
    if theta == PI {
        return Ok(0.0);
    }
    let denom = 1.0 - theta.cos();
    if denom.abs() < 1e-12 {
        return Err(Error::SingularCoupling { theta });
    }
    Ok(theta.sin() / denom)
}

/// Parse a coupling angle: a decimal, `pi`, `pi/d`, `k*pi/d`, `kpi/d` or `kpi`.
pub fn parse_theta(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || invalid(format!("cannot parse theta '{s}'"));
    let Some(pos) = t.find("pi") else {
        let x: f64 = t.parse().map_err(|_| bad())?;
        return if x.is_finite() { Ok(x) } else { Err(bad()) };
    };
    let (num, rest) = t.split_at(pos);
    let rest = &rest[2..];
    let k: f64 = match num.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        k => k.parse().map_err(|_| bad())?,
    };
    let d: f64 = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?,
    };
    if !(k.is_finite() && d.is_finite()) || d == 0.0 {
        return Err(bad());
    }
    if k == 1.0 && d == 1.0 {
        return Ok(PI);
    }
    Ok(k * PI / d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererConfig {
    pub theta: f64,
    pub kappa: f64,
    /// Series truncation energy; must not exceed the spectrum's `e_max`.
    pub e_cutoff: f64,
    pub tail_correction: bool,
}

impl ScattererConfig {
    /// Configuration with the Weyl tail correction switched on.
    pub fn new(theta: f64, e_cutoff: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 2.0 * PI) {
            return Err(invalid(format!("theta must lie in (0, 2pi], got {theta}")));
        }
        let kappa = kappa_of_theta(theta)?;
        if !e_cutoff.is_finite() {
            return Err(invalid("e_cutoff must be finite"));
        }
        Ok(ScattererConfig {
            theta,
            kappa,
            e_cutoff,
            tail_correction: true,
        })
    }

    pub fn with_tail(mut self, on: bool) -> Self {
        self.tail_correction = on;
        self
    }

    pub(crate) fn check_against(&self, spec: &Spectrum) -> Result<()> {
        if self.e_cutoff > spec.e_max() {
            return Err(Error::OutOfRange {
                energy: self.e_cutoff,
                e_max: spec.e_max(),
            });
        }
        Ok(())
    }
}

/// Closed forms of `int_C^inf t^2/(1+t^2)^2`, `int_C^inf t/(1+t^2)^2` and
/// `int_C^inf 1/(1+t^2)^2`.
pub fn tail_integrals(c: f64) -> (f64, f64, f64) {
    let arc = FRAC_PI_2 - c.atan();
    let r = c / (1.0 + c * c);
    (0.5 * (arc + r), 0.5 / (1.0 + c * c), 0.5 * (arc - r))
}

pub(crate) fn check_pole(lines: &[SpectralLine], lambda: f64) -> Result<()> {
    let tol = POLE_RTOL * lambda.abs().max(1.0);
    let k = lines.partition_point(|l| l.energy < lambda);
    for l in lines[k.saturating_sub(1)..].iter().take(2) {
        if (l.energy - lambda).abs() < tol {
            return Err(Error::PoleProximity {
                lambda,
                index: l.index,
                energy: l.energy,
            });
        }
    }
    Ok(())
}

/// `F` with its lambda-independent part summed once.
#[derive(Debug, Clone)]
pub struct SecularFunction<'a> {
    lines: &'a [SpectralLine],
    constant: f64,
    kappa: f64,
    cutoff: f64,
    density: Option<f64>,
}

impl<'a> SecularFunction<'a> {
    pub fn new(spec: &'a Spectrum, cfg: &ScattererConfig) -> Result<Self> {
        cfg.check_against(spec)?;
        let lines = spec.truncated(cfg.e_cutoff);
        let constant = -lines
            .iter()
            .map(|l| (l.energy + cfg.kappa) * l.weight / (1.0 + l.energy * l.energy))
            .sum::<f64>();
        Ok(SecularFunction {
            lines,
            constant,
            kappa: cfg.kappa,
            cutoff: cfg.e_cutoff,
            density: cfg.tail_correction.then(|| spec.weyl_density()),
        })
    }

    pub fn lines(&self) -> &'a [SpectralLine] {
        self.lines
    }

    /// Largest admissible argument.
    pub fn upper_limit(&self) -> f64 {
        match self.density {
            Some(_) => self.cutoff - 1.0,
            None => f64::INFINITY,
        }
    }

    pub fn tail(&self, lambda: f64) -> f64 {
        match self.density {
            Some(rho) => {
                let c = self.cutoff;
                rho * (-((c - lambda) / (1.0 + c * c).sqrt()).ln()
                    - self.kappa * (FRAC_PI_2 - c.atan()))
            }
            None => 0.0,
        }
    }

    /// `F(lambda)` without the pole check.
    pub fn eval_unchecked(&self, lambda: f64) -> f64 {
        let poles: f64 = self
            .lines
            .iter()
            .map(|l| l.weight / (l.energy - lambda))
            .sum();
        poles + self.constant + self.tail(lambda)
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() {
            return Err(invalid(format!("lambda must be finite, got {lambda}")));
        }
        if lambda >= self.upper_limit() {
            return Err(invalid(format!(
                "lambda = {lambda} must stay below e_cutoff - 1 = {}",
                self.upper_limit()
            )));
        }
        check_pole(self.lines, lambda)?;
        Ok(self.eval_unchecked(lambda))
    }
}

pub fn secular_value(spec: &Spectrum, cfg: &ScattererConfig, lambda: f64) -> Result<f64> {
    SecularFunction::new(spec, cfg)?.eval(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularRoot {
    /// `j` with `E_j < lambda < E_{j+1}`, or 0 below the first level.
    pub gap_index: usize,
    pub lambda: f64,
    pub residual: f64,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkippedGap {
    pub gap_index: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenSolution {
    pub roots: Vec<SecularRoot>,
    /// Gaps narrower than [`MIN_GAP`], left unsolved.
    pub skipped: Vec<SkippedGap>,
}

/// Root of `f` on the gap `(lo, hi)`; either end may be a pole (pass
/// `pole_lo`/`pole_hi`) in which case the bracket is pulled in by
/// [`BRACKET_MARGIN`] of the gap.
pub(crate) fn solve_gap<F: Fn(f64) -> f64>(
    f: F,
    gap_index: usize,
    lo: f64,
    hi: f64,
    pole_lo: bool,
    pole_hi: bool,
) -> Result<SecularRoot> {
    let delta = BRACKET_MARGIN * (hi - lo);
    let a = if pole_lo { lo + delta } else { lo };
    let b = if pole_hi { hi - delta } else { hi };
    let (fa, fb) = (f(a), f(b));
    if !(fa < 0.0 && fb > 0.0) {
        return Err(Error::BracketFailure {
            gap_index,
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let r = bisect_increasing(&f, a, b);
    Ok(SecularRoot {
        gap_index,
        lambda: r.x,
        residual: r.residual,
        bracket_width: r.width,
    })
}

/// One root per gap between consecutive levels inside `window`, plus the
/// root below the first level when the window reaches under it and `F`
/// changes sign there.
pub fn solve_all_eigenvalues(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    window: (f64, f64),
) -> Result<EigenSolution> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!(
            "window ({lo}, {hi}) is empty or not finite"
        )));
    }
    let f = SecularFunction::new(spec, cfg)?;
    if hi >= f.upper_limit() {
        return Err(invalid(format!(
            "window end {hi} must stay below e_cutoff - 1 = {}",
            f.upper_limit()
        )));
    }
    let lines = f.lines();
    let mut out = EigenSolution::default();

    let first = lines.first().map_or(f64::INFINITY, |l| l.energy);
    if lo < first {
        let top = hi.min(first);
        let pole_hi = top == first;
        let b = if pole_hi {
            top - BRACKET_MARGIN * (top - lo)
        } else {
            top
        };
        if f.eval_unchecked(lo) < 0.0 && f.eval_unchecked(b) > 0.0 {
            out.roots.push(solve_gap(
                |x| f.eval_unchecked(x),
                0,
                lo,
                top,
                false,
                pole_hi,
            )?);
        }
    }

    let start = lines.partition_point(|l| l.energy < lo);
    let end = lines.partition_point(|l| l.energy <= hi);
    if end > start + 1 {
        let gaps: Vec<(usize, f64, f64)> = (start..end - 1)
            .map(|k| (lines[k].index, lines[k].energy, lines[k + 1].energy))
            .collect();
        let solved: Vec<Result<Option<SecularRoot>>> = gaps
            .par_iter()
            .map(|&(j, a, b)| {
                if b - a < MIN_GAP {
                    return Ok(None);
                }
                solve_gap(|x| f.eval_unchecked(x), j, a, b, true, true).map(Some)
            })
            .collect();
        for (res, &(j, a, b)) in solved.into_iter().zip(&gaps) {
            match res? {
                Some(r) => out.roots.push(r),
                None => out.skipped.push(SkippedGap {
                    gap_index: j,
                    lo: a,
                    hi: b,
                }),
            }
        }
    }
    Ok(out)
}

/// Eigenfunction `phi = sum_j c_j Phi_j` with `c_j = conj(Phi_j(p))/(E_j - lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedEigenpair {
    pub lambda: f64,
    pub gap_index: usize,
    /// One entry per level with `E_j <= e_cutoff`.
    pub coefficients: Vec<Complex64>,
    /// `sum |c_j|^2`, plus `rho/(C - lambda)` when the tail is on.
    pub norm_sq: f64,
    pub spectrum_id: u64,
}

pub fn eigenpair_coefficients(
    spec: &Spectrum,
    cfg: &ScattererConfig,
    lambda: f64,
) -> Result<PerturbedEigenpair> {
    cfg.check_against(spec)?;
    if !lambda.is_finite() {
        return Err(invalid(format!("lambda must be finite, got {lambda}")));
    }
    let lines = spec.truncated(cfg.e_cutoff);
    check_pole(lines, lambda)?;
    let coefficients: Vec<Complex64> = lines
        .iter()
        .map(|l| l.amplitude.conj() / (l.energy - lambda))
        .collect();
    let mut norm_sq: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if cfg.tail_correction {
        if lambda >= cfg.e_cutoff {
            return Err(invalid(format!(
                "lambda = {lambda} is above the cutoff {}",
                cfg.e_cutoff
            )));
        }
        norm_sq += spec.weyl_density() / (cfg.e_cutoff - lambda);
    }
    Ok(PerturbedEigenpair {
        lambda,
        gap_index: lines.partition_point(|l| l.energy < lambda),
        coefficients,
        norm_sq,
        spectrum_id: spec.id(),
    })
}
