//! Gap quadruples in Poisson spectra.
//!
//! With unit-rate gaps `xi_1, xi_2, ...` and levels `E_0 = 0`,
//! `E_k = xi_1 + ... + xi_k`, the block event
//! `S_j = {xi_{3j+1} > eps^q, xi_{3j+2} < eps, xi_{3j+3} > eps^q}` has
//! probability `(1 - e^-eps) e^{-2 eps^q}`. Among `M` independent blocks one
//! fires with probability `p1 = 1 - (1 - P(S_0))^M`, and the `N = 3M` levels
//! stay under the ceiling `eps^-rho` with probability `p2 = P(Gamma(N) < eps^-rho)`,
//! so a quadruple exists with probability at least `p1 + p2 - 1`.

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::localisation::check_quadruple_params;
use crate::rng::stream_rng;

/// Default cap on `N * trials` for the Monte Carlo runs.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

/// `P(S_0) = (1 - e^-eps) e^{-2 eps^q}`.
pub fn block_event_probability(eps: f64, q: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(0.0..0.5).contains(&q) {
        return Err(invalid(format!("q must lie in [0, 1/2), got {q}")));
    }
    Ok(-(-eps).exp_m1() * (-2.0 * eps.powf(q)).exp())
}

/// `P(Gamma(n, 1) >= x) = sum_{k < n} e^-x x^k / k!`, summed in log space.
pub fn gamma_upper_tail(n: u64, x: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    let lx = x.ln();
    let mut log_fact = 0.0;
    let mut logs = Vec::with_capacity(n as usize);
    for k in 0..n {
        if k > 0 {
            log_fact += (k as f64).ln();
        }
        logs.push(-x + k as f64 * lx - log_fact);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    (top + s.ln()).exp().min(1.0)
}

/// `n` unit-rate exponential gaps from stream `stream` of `seed`.
pub fn exponential_gaps(n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, stream);
    (0..n).map(|_| Exp1.sample(&mut rng)).collect()
}

fn binomial_stderr(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockEventParams {
    pub eps: f64,
    pub q: f64,
    pub rho: f64,
    pub rho_prime: f64,
    pub trials: u64,
    pub seed: u64,
    /// Upper bound on `N * trials`.
    pub budget: u64,
}

impl BlockEventParams {
    /// Parameters with `rho' = (1 + rho)/2` and the default budget.
    pub fn new(eps: f64, q: f64, rho: f64, trials: u64, seed: u64) -> Self {
        BlockEventParams {
            eps,
            q,
            rho,
            rho_prime: 0.5 * (1.0 + rho),
            trials,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_quadruple_params(self.eps, self.q, self.rho)?;
        if self.eps >= 1.0 {
            return Err(invalid(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !(self.rho_prime > 1.0 && self.rho_prime < self.rho) {
            return Err(invalid(format!(
                "rho' must lie in (1, rho), got {}",
                self.rho_prime
            )));
        }
        if self.trials < 1000 {
            return Err(invalid(format!(
                "at least 1000 trials are needed, got {}",
                self.trials
            )));
        }
        Ok(())
    }

    /// `M = ceil(eps^-rho' / 3)`.
    pub fn blocks(&self) -> u64 {
        (self.eps.powf(-self.rho_prime) / 3.0).ceil() as u64
    }

    /// `N = 3M`.
    pub fn levels(&self) -> u64 {
        3 * self.blocks()
    }

    pub fn ceiling(&self) -> f64 {
        self.eps.powf(-self.rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McB2Report {
    pub params: BlockEventParams,
    pub blocks: u64,
    pub levels: u64,
    pub ceiling: f64,
    /// Fraction of paths with a satisfied quadruple anywhere under the ceiling.
    pub empirical_p: f64,
    pub stderr: f64,
    /// Fraction of paths where an aligned block fires and `E_N` is under the ceiling.
    pub block_p: f64,
    pub p_block_event: f64,
    pub p1: f64,
    pub p2: f64,
    pub analytic_lower: f64,
}

/// Scan one path of gaps. Returns (any quadruple, aligned block with `E_N` under the ceiling).
fn scan_path(gaps: &[f64], eps: f64, wide: f64, ceiling: f64) -> (bool, bool) {
    let mut full = false;
    let mut level = 0.0;
    // levels[k] = E_k; quadruple (E_k, .., E_{k+3}) uses gaps k, k+1, k+2
    let mut levels = Vec::with_capacity(gaps.len() + 1);
    levels.push(0.0);
    for g in gaps {
        level += g;
        levels.push(level);
    }
    for k in 0..gaps.len().saturating_sub(2) {
        if levels[k + 3] >= ceiling {
            break;
        }
        if gaps[k] > wide && gaps[k + 1] < eps && gaps[k + 2] > wide {
            full = true;
            break;
        }
    }
    let under = level < ceiling;
    let block = under
        && gaps
            .chunks_exact(3)
            .any(|b| b[0] > wide && b[1] < eps && b[2] > wide);
    (full, block)
}

pub fn mc_proposition_b2(params: &BlockEventParams) -> Result<McB2Report> {
    params.validate()?;
    let m = params.blocks();
    let n = params.levels();
    if n.saturating_mul(params.trials) > params.budget {
        return Err(Error::Resource(format!(
            "{n} levels x {} trials exceeds the budget {}",
            params.trials, params.budget
        )));
    }
    let (eps, wide, ceiling) = (params.eps, params.eps.powf(params.q), params.ceiling());
    let (full, block) = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let gaps = exponential_gaps(n as usize, params.seed, t);
            let (f, b) = scan_path(&gaps, eps, wide, ceiling);
            (f as u64, b as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let trials = params.trials;
    let empirical_p = full as f64 / trials as f64;
    let p_block_event = block_event_probability(eps, params.q)?;
    let p1 = -((m as f64) * (-p_block_event).ln_1p()).exp_m1();
    let p2 = 1.0 - gamma_upper_tail(n, ceiling);
    Ok(McB2Report {
        params: *params,
        blocks: m,
        levels: n,
        ceiling,
        empirical_p,
        stderr: binomial_stderr(empirical_p, trials),
        block_p: block as f64 / trials as f64,
        p_block_event,
        p1,
        p2,
        analytic_lower: p1 + p2 - 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyEstimate {
    pub empirical: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Empirical frequency of `S_0` over `trials` triples of gaps.
pub fn mc_block_event(eps: f64, q: f64, trials: u64, seed: u64) -> Result<FrequencyEstimate> {
    block_event_probability(eps, q)?;
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let wide = eps.powf(q);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = exponential_gaps(3, seed, t);
            (g[0] > wide && g[1] < eps && g[2] > wide) as u64
        })
        .sum();
    let p = hits as f64 / trials as f64;
    Ok(FrequencyEstimate {
        empirical: p,
        stderr: binomial_stderr(p, trials),
        trials,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaTailReport {
    pub n: u64,
    pub alpha: f64,
    pub threshold: f64,
    /// Fraction of paths with `E_N >= N^{1+alpha}`.
    pub empirical: f64,
    pub stderr: f64,
    /// Poisson-sum value of the same probability.
    pub exact: f64,
    /// `exp(-N^{1+alpha} + N) N^{alpha (N-1)} / sqrt(2 pi (N-1))`.
    pub bound_scale: f64,
    /// `empirical <= 10 bound_scale` or no exceedance at all.
    pub within_bound: bool,
}

pub fn gamma_tail_check(n: u64, alpha: f64, trials: u64, seed: u64) -> Result<GammaTailReport> {
    if n < 10 {
        return Err(invalid(format!("N must be at least 10, got {n}")));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be non-negative, got {alpha}")));
    }
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let nf = n as f64;
    let threshold = nf.powf(1.0 + alpha);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| (exponential_gaps(n as usize, seed, t).iter().sum::<f64>() >= threshold) as u64)
        .sum();
    let empirical = hits as f64 / trials as f64;
    let log_bound = -threshold + nf + alpha * (nf - 1.0) * nf.ln()
        - 0.5 * (2.0 * std::f64::consts::PI * (nf - 1.0)).ln();
    let bound_scale = log_bound.exp();
    Ok(GammaTailReport {
        n,
        alpha,
        threshold,
        empirical,
        stderr: binomial_stderr(empirical, trials),
        exact: gamma_upper_tail(n, threshold),
        bound_scale,
        within_bound: hits == 0 || empirical <= 10.0 * bound_scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BorelCantelliEntry {
    pub n: u64,
    pub found: bool,
}

/// Cap on the number of levels generated for one path.
pub const PATH_BUDGET: f64 = 5e7;

/// On a single unit-rate path, whether for each `n = 1..=n_max` there are
/// consecutive levels with middle gap `< 1/n`, flanks `> n^-q` and top
/// `< n^rho`.
pub fn borel_cantelli_sequence(
    q: f64,
    rho: f64,
    n_max: u64,
    seed: u64,
) -> Result<Vec<BorelCantelliEntry>> {
    if n_max < 2 {
        return Err(invalid(format!("n_max must be at least 2, got {n_max}")));
    }
    check_quadruple_params(0.5, q, rho)?;
    let top = (n_max as f64).powf(rho);
    if !(top <= PATH_BUDGET) {
        return Err(Error::Resource(format!(
            "path up to {top} exceeds the budget {PATH_BUDGET}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut levels = vec![0.0];
    let mut e = 0.0;
    while e < top {
        e += <Exp1 as Distribution<f64>>::sample(&Exp1, &mut rng);
        levels.push(e);
    }
    if levels.iter().filter(|&&x| x < top).count() < 4 {
        return Err(Error::Resource(format!(
            "path holds fewer than four levels below {top}"
        )));
    }
    Ok((1..=n_max)
        .map(|n| {
            let nf = n as f64;
            let (eps, wide, ceiling) = (1.0 / nf, nf.powf(-q), nf.powf(rho));
            let found = levels
                .windows(4)
                .take_while(|w| w[3] < ceiling)
                .any(|w| w[1] - w[0] > wide && w[2] - w[1] < eps && w[3] - w[2] > wide);
            BorelCantelliEntry { n, found }
        })
        .collect())
}
