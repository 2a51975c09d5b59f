//! Quasimodes built from the levels in a window `I`.
//!
//! For `sigma` in `[0, 1]` and `mu` solving
//!
//! ```text
//! zeta_I(1, mu) = sigma sum_{E_j in I} (E_j - kappa) w_j / (1 + E_j^2)
//! ```
//!
//! the quasimode has coefficients `conj(Phi_j(p))/(E_j - mu)` on `I` and
//! `sigma (E_j - kappa) conj(Phi_j(p))/(1 + E_j^2)` off `I`. The off-window
//! part does not depend on `mu`, which is why quasimodes on the same window
//! have inner product `sigma^2 S_tail`.

use std::ops::Range;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::secular::{check_pole, solve_gap, tail_integrals, PerturbedEigenpair, ScattererConfig};
use crate::spectrum::{SpectralLine, Spectrum};

/// Closed window `[lo, hi]` and the levels it holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Positions (0-based) into `Spectrum::lines`.
    #[serde(skip)]
    members: Range<usize>,
}

impl Interval {
    pub fn new(spec: &Spectrum, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(invalid(format!(
                "interval [{lo}, {hi}] is empty or not finite"
            )));
        }
        let lines = spec.lines();
        let start = lines.partition_point(|l| l.energy < lo);
        let end = lines.partition_point(|l| l.energy <= hi);
        if end <= start {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval {
            lo,
            hi,
            members: start..end,
        })
    }

    /// `hi - lo`.
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn members(&self) -> Range<usize> {
        self.members.clone()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// 1-based spectrum indices of the members.
    pub fn member_indices(&self) -> Vec<usize> {
        self.members.clone().map(|k| k + 1).collect()
    }

    pub fn contains_position(&self, k: usize) -> bool {
        self.members.contains(&k)
    }

    pub fn lines<'a>(&self, spec: &'a Spectrum) -> &'a [SpectralLine] {
        &spec.lines()[self.members.clone()]
    }
}

/// `sum_{E_j in I} w_j / (E_j - lambda)^s`.
pub fn zeta(spec: &Spectrum, interval: &Interval, s: f64, lambda: f64) -> Result<f64> {
    if !s.is_finite() || !lambda.is_finite() {
        return Err(invalid("zeta needs finite s and lambda"));
    }
    let lines = interval.lines(spec);
    if s == 0.0 {
        return Ok(lines.iter().map(|l| l.weight).sum());
    }
    if s > 0.0 {
        check_pole(lines, lambda)?;
    }
    let integer = s.fract() == 0.0;
    let mut sum = 0.0;
    for l in lines {
        let base = l.energy - lambda;
        if !integer && base < 0.0 {
            return Err(Error::Domain { s, index: l.index });
        }
        sum += l.weight
            * if integer {
                base.powi(s as i32).recip()
            } else {
                base.powf(-s)
            };
    }
    Ok(sum)
}

fn zeta1(lines: &[SpectralLine], mu: f64) -> f64 {
    lines.iter().map(|l| l.weight / (l.energy - mu)).sum()
}

/// Off-window sums entering the norm and the discrepancy.
///
/// With `P_k = sum_{E_j not in I, E_j <= C} E_j^k w_j / (1 + E_j^2)^2` and the
/// Weyl integrals `A, B, D` of [`tail_integrals`]:
///
/// ```text
/// S_tail   = P_2 - 2 kappa P_1 + kappa^2 P_0 + rho (A - 2 kappa B + kappa^2 D)
/// R_tail(mu) = sum (alpha + beta E_j)^2 w_j/(1+E_j^2)^2 + rho (beta^2 A + 2 alpha beta B + alpha^2 D)
/// ```
///
/// where `alpha = 1 - kappa mu` and `beta = mu + kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSums {
    pub s_tail: f64,
    pub kappa: f64,
    p: [f64; 3],
    /// `rho * (A, B, D)`, zero without tail correction.
    weyl: [f64; 3],
}

impl TailSums {
    pub fn r_tail(&self, mu: f64) -> f64 {
        let alpha = 1.0 - self.kappa * mu;
        let beta = mu + self.kappa;
        let [p0, p1, p2] = self.p;
        let [a, b, d] = self.weyl;
        alpha * alpha * (p0 + d) + 2.0 * alpha * beta * (p1 + b) + beta * beta * (p2 + a)
    }

    /// Weyl-integral part of `S_tail`.
    pub fn s_correction(&self) -> f64 {
        let [a, b, d] = self.weyl;
        a - 2.0 * self.kappa * b + self.kappa * self.kappa * d
    }

    /// Weyl-integral part of `R_tail(mu)`.
    pub fn r_correction(&self, mu: f64) -> f64 {
        let alpha = 1.0 - self.kappa * mu;
        let beta = mu + self.kappa;
        let [a, b, d] = self.weyl;
        beta * beta * a + 2.0 * alpha * beta * b + alpha * alpha * d
    }
}

pub fn tail_sums(spec: &Spectrum, interval: &Interval, cfg: &ScattererConfig) -> Result<TailSums> {
    cfg.check_against(spec)?;
    if cfg.e_cutoff < 2.0 * interval.hi {
        return Err(Error::CutoffTooSmall {
            e_cutoff: cfg.e_cutoff,
            hi: interval.hi,
            required: 2.0 * interval.hi,
        });
    }
    let n = spec.count_up_to(cfg.e_cutoff);
    let mut p = [0.0; 3];
    for (k, l) in spec.lines()[..n].iter().enumerate() {
        if interval.contains_position(k) {
            continue;
        }
        let e = l.energy;
        let q = l.weight / (1.0 + e * e).powi(2);
        p[0] += q;
        p[1] += e * q;
        p[2] += e * e * q;
    }
    let weyl = if cfg.tail_correction {
        let rho = spec.weyl_density();
        let (a, b, d) = tail_integrals(cfg.e_cutoff);
        [rho * a, rho * b, rho * d]
    } else {
        [0.0; 3]
    };
    let kappa = cfg.kappa;
    let mut t = TailSums {
        s_tail: 0.0,
        kappa,
        p,
        weyl,
    };
    t.s_tail = p[2] - 2.0 * kappa * p[1] + kappa * kappa * p[0] + t.s_correction();
    Ok(t)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(invalid(format!("sigma must lie in [0, 1], got {sigma}")));
    }
    Ok(())
}

fn rhs(lines: &[SpectralLine], sigma: f64, kappa: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    sigma
        * lines
            .iter()
            .map(|l| (l.energy - kappa) * l.weight / (1.0 + l.energy * l.energy))
            .sum::<f64>()
}

/// All roots `mu` of the quasi-eigenvalue equation, ascending.
pub fn solve_quasi_eigenvalues(
    spec: &Spectrum,
    interval: &Interval,
    sigma: f64,
    cfg: &ScattererConfig,
) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    let lines = interval.lines(spec);
    if sigma == 0.0 && lines.len() < 2 {
        return Err(Error::NoRoot(
            "sigma = 0 needs at least two levels in the interval".into(),
        ));
    }
    let target = rhs(lines, sigma, cfg.kappa);
    let g = |mu: f64| zeta1(lines, mu) - target;

    let mut roots = Vec::with_capacity(lines.len());
    if target > 0.0 {
        roots.push(outside_root(&g, lines[0].energy, -1.0)?);
    }
    for (k, w) in lines.windows(2).enumerate() {
        let r = solve_gap(g, lines[0].index + k, w[0].energy, w[1].energy, true, true)?;
        roots.push(r.lambda);
    }
    if target < 0.0 {
        roots.push(outside_root(&g, lines[lines.len() - 1].energy, 1.0)?);
    }
    Ok(roots)
}

/// Root of `g` beyond the end level `edge`, searched in direction `dir`.
fn outside_root<G: Fn(f64) -> f64>(g: &G, edge: f64, dir: f64) -> Result<f64> {
    let mut h = edge.abs().max(1.0);
    // g is negative (dir < 0) or positive (dir > 0) far away from the edge.
    for _ in 0..2000 {
        let far = edge + dir * h;
        if !far.is_finite() {
            break;
        }
        let v = g(far);
        if (dir < 0.0 && v < 0.0) || (dir > 0.0 && v > 0.0) {
            let (lo, hi, pole_lo, pole_hi) = if dir < 0.0 {
                (far, edge, false, true)
            } else {
                (edge, far, true, false)
            };
            return Ok(solve_gap(g, 0, lo, hi, pole_lo, pole_hi)?.lambda);
        }
        h *= 2.0;
    }
    Err(Error::NoRoot(format!(
        "no root beyond the interval edge {edge}"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quasimode {
    pub sigma: f64,
    pub interval: Interval,
    pub mu: f64,
    /// `conj(Phi_j(p))/(E_j - mu)` for the members of the interval.
    pub in_coeffs: Vec<Complex64>,
    pub kappa: f64,
    pub e_cutoff: f64,
    pub tail_correction: bool,
    /// Zero when `sigma = 0`.
    pub s_tail: f64,
    /// `R_tail(mu)`, zero when `sigma = 0`.
    pub r_tail: f64,
    pub norm_sq: f64,
    pub discrepancy: f64,
    pub spectrum_id: u64,
}

impl Quasimode {
    /// Coefficient on the level at position `k` of the spectrum.
    pub fn coefficient(&self, k: usize, line: &SpectralLine) -> Complex64 {
        if self.interval.contains_position(k) {
            self.in_coeffs[k - self.interval.members.start]
        } else {
            let e = line.energy;
            line.amplitude.conj() * (self.sigma * (e - self.kappa) / (1.0 + e * e))
        }
    }

    /// All coefficients up to the cutoff.
    pub fn coefficients(&self, spec: &Spectrum) -> Result<Vec<Complex64>> {
        if spec.id() != self.spectrum_id {
            return Err(Error::SpectrumMismatch);
        }
        Ok(spec
            .truncated(self.e_cutoff)
            .iter()
            .enumerate()
            .map(|(k, l)| self.coefficient(k, l))
            .collect())
    }
}

pub fn build_quasimode(
    spec: &Spectrum,
    interval: &Interval,
    sigma: f64,
    mu: f64,
    cfg: &ScattererConfig,
) -> Result<Quasimode> {
    check_sigma(sigma)?;
    cfg.check_against(spec)?;
    if !mu.is_finite() {
        return Err(invalid(format!("mu must be finite, got {mu}")));
    }
    let lines = interval.lines(spec);
    if interval.members.end > spec.count_up_to(cfg.e_cutoff) {
        return Err(Error::CutoffTooSmall {
            e_cutoff: cfg.e_cutoff,
            hi: interval.hi,
            required: interval.hi,
        });
    }
    check_pole(lines, mu)?;
    let zeta2: f64 = lines
        .iter()
        .map(|l| l.weight / (l.energy - mu).powi(2))
        .sum();
    let residual = zeta1(lines, mu) - rhs(lines, sigma, cfg.kappa);
    let step = residual / zeta2;
    if step.abs() > 1e-9 * mu.abs().max(1.0) {
        return Err(Error::NotARoot { mu, step });
    }
    let in_coeffs = lines
        .iter()
        .map(|l| l.amplitude.conj() / (l.energy - mu))
        .collect();
    let zeta0: f64 = lines.iter().map(|l| l.weight).sum();
    let (s_tail, r_tail) = if sigma > 0.0 {
        let t = tail_sums(spec, interval, cfg)?;
        (t.s_tail, t.r_tail(mu))
    } else {
        (0.0, 0.0)
    };
    let norm_sq = zeta2 + sigma * sigma * s_tail;
    let num = (1.0 - sigma).powi(2) * zeta0 + sigma * sigma * r_tail;
    Ok(Quasimode {
        sigma,
        interval: interval.clone(),
        mu,
        in_coeffs,
        kappa: cfg.kappa,
        e_cutoff: cfg.e_cutoff,
        tail_correction: cfg.tail_correction,
        s_tail,
        r_tail,
        norm_sq,
        discrepancy: (num / norm_sq).sqrt(),
        spectrum_id: spec.id(),
    })
}

/// `||(H - mu) psi||^2 / ||psi||^2` from the coefficient expansion, without
/// tail corrections.
///
/// `psi` splits as a finite combination of eigenfunctions (which vanishes at
/// the scatterer because `mu` is a root) plus `sigma/(1 - e^{i theta})` times
/// `g_i - e^{i theta} g_{-i}`. The first part is hit by `H_0 - mu` level by
/// level; on the second the operator acts as `+-i - mu` on `g_{+-i}`.
pub fn residual_oracle(spec: &Spectrum, qm: &Quasimode, cfg: &ScattererConfig) -> Result<f64> {
    if spec.id() != qm.spectrum_id {
        return Err(Error::SpectrumMismatch);
    }
    let theta = cfg.theta;
    let i = Complex64::i();
    let e_it = Complex64::from_polar(1.0, theta);
    let scale = qm.sigma / (Complex64::new(1.0, 0.0) - e_it);
    let mu = qm.mu;
    let mut res = 0.0;
    let mut norm = 0.0;
    for (k, l) in spec.truncated(qm.e_cutoff).iter().enumerate() {
        let e = l.energy;
        let cphi = l.amplitude.conj();
        // g_{+-i} has coefficient conj(Phi)/(E -+ i)
        let g_plus = cphi / (e - i);
        let g_minus = cphi / (e + i);
        let g_part = scale * (g_plus - e_it * g_minus);
        let h_g_part = scale * ((i - mu) * g_plus - e_it * (-i - mu) * g_minus);
        let (coeff, image) = if qm.interval.contains_position(k) {
            let smooth = cphi / (e - mu) - g_part;
            (cphi / (e - mu), smooth * (e - mu) + h_g_part)
        } else {
            (g_part, h_g_part)
        };
        res += image.norm_sqr();
        norm += coeff.norm_sqr();
    }
    Ok(res / norm)
}

/// `<psi_1, psi_2>`, which equals `sigma^2 S_tail` for distinct roots.
pub fn quasimode_inner_product(qm1: &Quasimode, qm2: &Quasimode) -> Result<f64> {
    if qm1.spectrum_id != qm2.spectrum_id {
        return Err(Error::SpectrumMismatch);
    }
    if qm1.sigma != qm2.sigma
        || qm1.interval != qm2.interval
        || qm1.kappa != qm2.kappa
        || qm1.e_cutoff != qm2.e_cutoff
    {
        return Err(Error::IntervalMismatch);
    }
    let inside: Complex64 = qm1
        .in_coeffs
        .iter()
        .zip(&qm2.in_coeffs)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(inside.re + qm1.sigma * qm1.sigma * qm1.s_tail)
}

/// `|<phi, psi>|` over the levels both expansions share.
pub fn overlap(spec: &Spectrum, qm: &Quasimode, pair: &PerturbedEigenpair) -> Result<f64> {
    if spec.id() != qm.spectrum_id || spec.id() != pair.spectrum_id {
        return Err(Error::SpectrumMismatch);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, (l, c)) in spec.lines().iter().zip(&pair.coefficients).enumerate() {
        if l.energy > qm.e_cutoff {
            break;
        }
        sum += c.conj() * qm.coefficient(k, l);
    }
    Ok(sum.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionCheck {
    /// Mass of the normalised `psi` on eigenvalues farther than `M` from `mu`
    /// (supplied ones exactly, unsupplied ones bounded by the leftover mass).
    pub lhs: f64,
    /// `d^2 / M^2`.
    pub rhs: f64,
    /// With a single eigenvalue within `M`: the distance
    /// `min_chi ||phi - e^{i chi} psi||` between the normalised vectors.
    pub distance: Option<f64>,
    /// ... and its bound `2 d / M`.
    pub certificate: Option<f64>,
}

/// Spectral-projection bound for a quasimode. `pairs` must cover every
/// gap in a contiguous run of gaps whose outer levels lie strictly beyond
/// `mu -+ M`.
pub fn projection_bound_check(
    spec: &Spectrum,
    qm: &Quasimode,
    pairs: &[PerturbedEigenpair],
    m: f64,
) -> Result<ProjectionCheck> {
    if !(m > 0.0) {
        return Err(invalid(format!("M must be positive, got {m}")));
    }
    let mu = qm.mu;
    let coverage = Error::InsufficientCoverage {
        lo: mu - m,
        hi: mu + m,
    };
    if pairs.is_empty() {
        return Err(coverage);
    }
    let mut sorted: Vec<&PerturbedEigenpair> = pairs.iter().collect();
    sorted.sort_by_key(|p| p.gap_index);
    for w in sorted.windows(2) {
        if w[1].gap_index != w[0].gap_index + 1 {
            return Err(coverage);
        }
    }
    let lines = spec.lines();
    let g_lo = sorted[0].gap_index;
    let g_hi = sorted[sorted.len() - 1].gap_index;
    let lower = if g_lo == 0 {
        f64::NEG_INFINITY
    } else {
        lines[g_lo - 1].energy
    };
    let upper = match lines.get(g_hi) {
        Some(l) if l.energy <= qm.e_cutoff => l.energy,
        _ => return Err(coverage),
    };
    if !(lower < mu - m && upper > mu + m) {
        return Err(coverage);
    }

    let mut far = 0.0;
    let mut supplied = 0.0;
    let mut near: Vec<f64> = Vec::new();
    for p in &sorted {
        let o = overlap(spec, qm, p)?;
        let frac = o * o / (p.norm_sq * qm.norm_sq);
        supplied += frac;
        if (p.lambda - mu).abs() > m {
            far += frac;
        } else {
            near.push(frac);
        }
    }
    let lhs = far + (1.0 - supplied).max(0.0);
    let d = qm.discrepancy;
    let (distance, certificate) = if near.len() == 1 {
        let dist = (2.0 - 2.0 * near[0].sqrt()).max(0.0).sqrt();
        (Some(dist), Some(2.0 * d / m))
    } else {
        (None, None)
    };
    Ok(ProjectionCheck {
        lhs,
        rhs: d * d / (m * m),
        distance,
        certificate,
    })
}
