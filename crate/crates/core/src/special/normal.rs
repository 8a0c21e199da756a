use super::logprob::LogProb;
use crate::error::{domain, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Above this standardized argument the Mills-ratio continued fraction is
/// used; below it `erfc` is accurate to a few ulps.
const CF_SWITCH: f64 = 8.0;

/// `ln P(Z >= z)` for a standard normal `Z`.
pub fn log_std_normal_sf(z: f64) -> LogProb {
    if z.is_nan() {
        return LogProb::clamped(f64::NAN);
    }
    if z < 0.0 {
        // P(Z >= z) = 1 - P(Z >= -z) with the subtracted part <= 1/2
        let upper = std_normal_sf_positive(-z);
        return LogProb::clamped((-upper.exp()).ln_1p());
    }
    LogProb::clamped(std_normal_sf_positive(z))
}

fn std_normal_sf_positive(z: f64) -> f64 {
    if z <= CF_SWITCH {
        (0.5 * libm::erfc(z / std::f64::consts::SQRT_2)).ln()
    } else {
        -0.5 * z * z - LN_SQRT_2PI + mills_ratio_cf(z).ln()
    }
}

/// Mills ratio `R(z) = P(Z >= z) / phi(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...))))`.
fn mills_ratio_cf(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for j in 1..10_000 {
        let a = j as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `ln P(N(mu, sigma^2) >= x)`.
pub fn log_normal_sf(mu: f64, sigma: f64, x: f64) -> Result<LogProb> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(domain(format!("normal scale must be positive, got {sigma}")));
    }
    Ok(log_std_normal_sf((x - mu) / sigma))
}
