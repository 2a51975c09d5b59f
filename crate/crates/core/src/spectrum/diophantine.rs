//! Lower bounds on `E^2 |Phi_{n,m}(p)|^2` for the full Dirichlet rectangle.
//!
//! When both coordinates of the scatterer are badly approximable multiples
//! of the sides, `|sin(n pi x_p / side_x)| >> 1/n` and so
//! `E_{n,m}^2 |Phi_{n,m}(p)|^2` stays bounded away from zero.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Which mode numbers enter a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeFilter {
    All,
    /// Only odd `n` and odd `m`.
    Odd,
}

impl ModeFilter {
    fn admits(self, k: u32) -> bool {
        match self {
            ModeFilter::All => true,
            ModeFilter::Odd => k % 2 == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorPoint {
    pub n: u32,
    pub m: u32,
    pub energy: f64,
    /// `E^2 |Phi_{n,m}(p)|^2`.
    pub value: f64,
}

fn check(side_x: f64, side_y: f64, scatterer: (f64, f64), n_max: u32) -> Result<()> {
    if n_max < 1 {
        return Err(invalid("n_max must be at least 1"));
    }
    if !(side_x > 0.0 && side_x.is_finite() && side_y > 0.0 && side_y.is_finite()) {
        return Err(invalid(format!(
            "sides must be positive, got {side_x} x {side_y}"
        )));
    }
    let (x, y) = scatterer;
    if !(x > 0.0 && x < side_x && y > 0.0 && y < side_y) {
        return Err(Error::ScattererOnBoundary { x, y });
    }
    Ok(())
}

/// `E^2 |Phi_{n,m}(p)|^2` for every admitted `1 <= n, m <= n_max`, sorted by energy.
///
/// No zero-amplitude filtering happens here: exact nodal lines through `p`
/// show up as (numerically) zero values.
pub fn diophantine_profile(
    side_x: f64,
    side_y: f64,
    scatterer: (f64, f64),
    n_max: u32,
    filter: ModeFilter,
) -> Result<Vec<FloorPoint>> {
    check(side_x, side_y, scatterer, n_max)?;
    let (x, y) = scatterer;
    let norm = 4.0 / (side_x * side_y);
    let sy: Vec<(u32, f64)> = (1..=n_max)
        .filter(|&m| filter.admits(m))
        .map(|m| (m, (m as f64 * PI * y / side_y).sin().powi(2)))
        .collect();
    let mut out = Vec::with_capacity(sy.len() * sy.len());
    for n in (1..=n_max).filter(|&n| filter.admits(n)) {
        let sx = (n as f64 * PI * x / side_x).sin().powi(2);
        let ex = PI * PI * (n as f64 / side_x).powi(2);
        for &(m, s2) in &sy {
            let energy = ex + PI * PI * (m as f64 / side_y).powi(2);
            out.push(FloorPoint {
                n,
                m,
                energy,
                value: energy * energy * norm * sx * s2,
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.n.cmp(&b.n)));
    Ok(out)
}

/// Running-minimum records of [`diophantine_profile`] in order of energy.
pub fn diophantine_floor(
    side_x: f64,
    side_y: f64,
    scatterer: (f64, f64),
    n_max: u32,
    filter: ModeFilter,
) -> Result<Vec<FloorPoint>> {
    let profile = diophantine_profile(side_x, side_y, scatterer, n_max, filter)?;
    let mut records: Vec<FloorPoint> = Vec::new();
    for p in profile {
        if records.last().is_none_or(|r| p.value < r.value) {
            records.push(p);
        }
    }
    Ok(records)
}

/// Both sides of `1/(n^2 m^2) >= 4 pi^4 / (side_x^2 side_y^2 E^2)`, which
/// follows from `E >= 2 pi^2 n m / (side_x side_y)` with equality iff
/// `n/side_x = m/side_y`.
pub fn lemma_sides(n: u32, m: u32, side_x: f64, side_y: f64) -> (f64, f64) {
    let (nf, mf) = (n as f64, m as f64);
    let energy = PI * PI * (nf * nf / (side_x * side_x) + mf * mf / (side_y * side_y));
    let lhs = 1.0 / (nf * nf * mf * mf);
    let rhs = 4.0 * PI.powi(4) / (side_x * side_x * side_y * side_y * energy * energy);
    (lhs, rhs)
}
