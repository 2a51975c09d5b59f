//! Bisection for functions that increase through a simple root.
//!
//! Both the secular function and the quasi-eigenvalue function are strictly
//! increasing between consecutive poles, so a sign-checked bracket always
//! contains exactly one root. Bisection runs until the bracket cannot be
//! split any further in `f64`.

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub x: f64,
    /// `f(x)` at the returned point.
    pub residual: f64,
    /// Width of the final bracket.
    pub width: f64,
    pub iterations: u32,
}

const MAX_ITER: u32 = 2000;

/// Bisect an increasing function on `[lo, hi]` with `f(lo) < 0 < f(hi)`.
///
/// The caller is responsible for checking the signs at the endpoints.
pub fn bisect_increasing<F>(f: F, mut lo: f64, mut hi: f64) -> BracketedRoot
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return BracketedRoot {
                x: mid,
                residual: 0.0,
                width: hi - lo,
                iterations,
            };
        }
        if fm < 0.0 {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    let (x, residual) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    BracketedRoot {
        x,
        residual,
        width: hi - lo,
        iterations,
    }
}
