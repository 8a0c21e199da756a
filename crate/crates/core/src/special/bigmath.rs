use num_bigint::BigUint;
use num_traits::Zero;

/// Splits `x > 0` into `m * 2^e` with `m` in `[1, 2)`, keeping 64 bits.
fn split(x: &BigUint) -> (f64, i64) {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top: BigUint = x >> shift;
    let t = top.iter_u64_digits().next().unwrap_or(0);
    let e = bits as i64 - 1;
    let m = t as f64 / 2f64.powi((bits - shift) as i32 - 1);
    (m, e)
}

/// Natural log of a big unsigned integer to f64 accuracy.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = split(x);
    (m - 1.0).ln_1p() + e as f64 * std::f64::consts::LN_2
}

/// `ln(num / den)`.
pub fn ln_ratio_biguint(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    // scale so that the quotient keeps 128 significant bits
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = 128 - (nb - db);
    let q: BigUint = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let (m, e) = split(&q);
    (m - 1.0).ln_1p() + (e - shift) as f64 * std::f64::consts::LN_2
}
