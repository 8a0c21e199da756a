//! Exact-arithmetic reference implementations shared by the integration
//! tests. Nothing here calls into the crate under test.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_u(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// `(mantissa in [1,2), binary exponent)` of a positive rational, to 63 bits.
fn split(r: &BigRational) -> (f64, i64) {
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let shift = 64 - (n.bits() as i64 - d.bits() as i64);
    let q: BigUint = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    let qb = q.bits() as i64;
    let top: BigUint = &q >> (qb - 63).max(0) as u64;
    let m = top.iter_u64_digits().next().unwrap_or(0) as f64 / 2f64.powi(62);
    // q ~ m * 2^(qb-1), value = q * 2^-shift
    (m, qb - 1 - shift)
}

pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let (m, e) = split(&r.abs());
    // two steps so that 2^e never overflows on its own
    let half = e / 2;
    sign * m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

/// Natural log of a positive rational.
pub fn ln_rat(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log of a non-positive rational");
    let (m, e) = split(r);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// `sum_{j=lo}^{hi} lambda^j / j!` exactly.
pub fn poisson_weight_sum(lambda: &BigRational, lo: u64, hi: u64) -> BigRational {
    let mut term = BigRational::one();
    let mut s = BigRational::zero();
    for j in 0..=hi {
        if j > 0 {
            term = term * lambda / BigRational::from_integer(BigInt::from(j));
        }
        if j >= lo {
            s += &term;
        }
    }
    s
}

/// `sum_{j>=lo} lambda^j / j!`, truncated once the geometric bound on the
/// remainder falls below `e^-110` of the running sum.
pub fn poisson_weight_tail(lambda: &BigRational, lo: u64) -> BigRational {
    let lam = to_f64(lambda);
    let mut term = BigRational::one();
    let mut s = BigRational::zero();
    let mut j = 0u64;
    loop {
        if j > 0 {
            term = term * lambda / BigRational::from_integer(BigInt::from(j));
        }
        if j >= lo {
            s += &term;
            let ratio = lam / (j + 1) as f64;
            if ratio < 0.5 && ln_rat(&term) - ln_rat(&s) < -110.0 {
                return s;
            }
        }
        j += 1;
    }
}

/// `1/sqrt(2 pi)` to 60 digits.
pub fn inv_sqrt_2pi() -> BigRational {
    let digits = "398942280401432677939946059934381868475858631164934657665926";
    let num: BigInt = digits.parse().unwrap();
    BigRational::new(num, BigInt::from(10u32).pow(digits.len() as u32))
}

/// `ln P(Z >= z)` for a standard normal.
///
/// `|z| <= 9`: exact-rational Taylor series of the integral from 0.
/// `z >= 9`: the asymptotic series for the Mills ratio, stopped at its
/// smallest term (relative error below 1e-17 there).
pub fn ln_normal_sf(z: &BigRational) -> f64 {
    let zf = to_f64(z);
    if zf >= 9.0 {
        let z2 = z * z;
        let mut term = BigRational::one();
        let mut s = BigRational::one();
        let mut k = 1i64;
        loop {
            let next = -(&term * BigRational::from_integer(BigInt::from(2 * k - 1))) / &z2;
            if next.abs() >= term.abs() || to_f64(&next.abs()) < 1e-40 {
                break;
            }
            s += &next;
            term = next;
            k += 1;
        }
        return ln_rat(&inv_sqrt_2pi()) - zf * zf / 2.0 + ln_rat(&(s / z));
    }
    // Phi(z) - 1/2 = c * sum_n (-1)^n z^(2n+1) / (2^n n! (2n+1))
    let z2 = z * z;
    let mut pow = z.clone();
    let mut s = BigRational::zero();
    let mut n = 0i64;
    loop {
        let t = &pow / BigRational::from_integer(BigInt::from(2 * n + 1));
        if n > 10 && to_f64(&t.abs()) < 1e-70 {
            break;
        }
        if n % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
        n += 1;
        pow = pow * &z2 / BigRational::from_integer(BigInt::from(2 * n));
    }
    let sf = rat(1, 2) - inv_sqrt_2pi() * s;
    ln_rat(&sf)
}

/// Exact Stein constants with the common factor `e^-lambda` cancelled:
/// `(c0, c1_minus, c1_plus)` for `k > lambda`.
pub fn stein_constants(lambda: &BigRational, k: u64) -> (BigRational, BigRational, BigRational) {
    let kk = BigRational::from_integer(BigInt::from(k));
    let pi_k = poisson_weight_sum(lambda, k, k);
    let f_km1 = poisson_weight_sum(lambda, 0, k - 1);
    let c0 = &f_km1 / (&kk * &pi_k);
    let c1m = if k == 1 {
        c0.clone()
    } else {
        let f_km2 = poisson_weight_sum(lambda, 0, k - 2);
        let km1 = BigRational::from_integer(BigInt::from(k - 1));
        &c0 * (BigRational::one() - (f_km2 / &f_km1) * lambda / km1)
    };
    let t_k = poisson_weight_tail(lambda, k);
    let t_k1 = &t_k - &pi_k;
    let c1p = &c0 * (BigRational::one() - (t_k1 / t_k) * &kk / lambda);
    (c0, c1m, c1p)
}

/// Relative difference, with `0 == 0`.
pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Compensated sum for test-side f64 reductions.
pub fn kahan(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for x in xs {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// Total variation between two pmfs on `0..`.
pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    0.5 * kahan((0..n).map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs()))
}
