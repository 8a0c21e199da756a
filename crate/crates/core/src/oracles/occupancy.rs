use num_bigint::BigUint;
use num_traits::Zero;

use super::table::DistributionTable;
use super::MomentSummary;
use crate::error::{domain, Error, Result};
use crate::special::dd::{Dd, DD_EPS};
use crate::special::{ln_ratio_biguint, LogProb};

/// Cancellation level (largest term over result) above which a probability is
/// recomputed exactly.
const CANCELLATION_LIMIT: f64 = 1e6;

/// Largest box count accepted; keeps every binomial coefficient inside f64
/// range.
pub const OCCUPANCY_MAX_BOXES: u64 = 1000;

fn check(n: u64, l: u64) -> Result<()> {
    if n < 2 || l < 1 {
        return Err(domain(format!("occupancy needs n >= 2 boxes and l >= 1 balls, got n={n}, l={l}")));
    }
    Ok(())
}

/// Law of the number of empty boxes after `l` balls are thrown uniformly
/// into `n` boxes, by inclusion-exclusion
/// `P(W=m) = C(n,m) sum_j (-1)^j C(n-m,j) (1-(m+j)/n)^l`.
///
/// Terms are summed in double-double; any entry whose alternating sum loses
/// more than six digits (or drops a non-negligible underflowed term) is redone in exact integer arithmetic.
pub fn occupancy_table(n: u64, l: u64) -> Result<DistributionTable> {
    check(n, l)?;
    if n > OCCUPANCY_MAX_BOXES {
        return Err(Error::SizeGuard(format!(
            "occupancy table limited to n <= {OCCUPANCY_MAX_BOXES} boxes, got {n}; use Monte Carlo"
        )));
    }
    let l32 = u32::try_from(l).map_err(|_| domain("ball count too large"))?;
    let nf = n as f64;
    // r_b = (b/n)^l for b = 0..=n
    let pows: Vec<Dd> = (0..=n).map(|b| Dd::from_f64(b as f64).div_f64(nf).powi(l32)).collect();
    let mut exact = ExactOccupancy::new(n, l);
    let mut log_pmf = Vec::with_capacity(n as usize);
    let mut c_nm = Dd::ONE;
    for m in 0..n {
        if m > 0 {
            c_nm = c_nm.mul_f64((n - m + 1) as f64).div_f64(m as f64);
        }
        let free = n - m;
        let mut c = Dd::ONE;
        let mut sum = Dd::ZERO;
        let mut max_term = 0.0f64;
        // largest ln-magnitude among terms whose power underflowed
        let mut lost = f64::NEG_INFINITY;
        for j in 0..=free {
            if j > 0 {
                c = c.mul_f64((free - j + 1) as f64).div_f64(j as f64);
            }
            let base = free - j;
            let r = pows[base as usize];
            if base > 0 && r.hi < 1e-280 {
                lost = lost.max(c.ln() + l as f64 * (base as f64 / nf).ln());
            }
            let t = c * r;
            max_term = max_term.max(t.hi.abs());
            sum = if j % 2 == 0 { sum + t } else { sum - t };
        }
        let clean = sum.hi > 0.0 && max_term <= CANCELLATION_LIMIT * sum.hi && lost < sum.ln() - 80.0;
        let ln = if clean {
            (c_nm * sum).ln()
        } else {
            exact.ln_prob(m)
        };
        log_pmf.push(LogProb::clamped(ln));
    }
    Ok(DistributionTable {
        offset: 0,
        log_pmf,
        truncated_mass: 0.0,
        // powi and the binomial recurrences stay within a few hundred ulps
        // of double-double, amplified by at most the cancellation limit
        rel_error: CANCELLATION_LIMIT * (4.0 * (n + l) as f64 + 64.0) * DD_EPS,
    })
}

/// Big-integer evaluation of `P(W=m) = C(n,m) sum_j (-1)^j C(n-m,j) (n-m-j)^l / n^l`.
struct ExactOccupancy {
    n: u64,
    l: u64,
    pows: Vec<Option<BigUint>>,
    denom: BigUint,
}

impl ExactOccupancy {
    fn new(n: u64, l: u64) -> Self {
        ExactOccupancy {
            n,
            l,
            pows: vec![None; (n + 1) as usize],
            denom: BigUint::from(n).pow(l as u32),
        }
    }

    fn pow(&mut self, b: u64) -> &BigUint {
        let l = self.l as u32;
        self.pows[b as usize].get_or_insert_with(|| BigUint::from(b).pow(l))
    }

    fn ln_prob(&mut self, m: u64) -> f64 {
        let n = self.n;
        let free = n - m;
        let mut pos = BigUint::zero();
        let mut neg = BigUint::zero();
        let mut c = BigUint::from(1u32);
        for j in 0..=free {
            if j > 0 {
                c = c * (free - j + 1) / j;
            }
            let t = &c * self.pow(free - j);
            if j % 2 == 0 {
                pos += t;
            } else {
                neg += t;
            }
        }
        let s = pos - neg;
        let mut c_nm = BigUint::from(1u32);
        for i in 0..m {
            c_nm = c_nm * (n - i) / (i + 1);
        }
        ln_ratio_biguint(&(s * c_nm), &self.denom)
    }
}

/// `mu = n (1-1/n)^l` and
/// `sigma2 = mu - mu^2 + mu (n-1) (1 - 1/(n-1))^l`.
pub fn occupancy_params(n: u64, l: u64) -> Result<MomentSummary> {
    check(n, l)?;
    let nf = n as f64;
    let lf = l as f64;
    let mu = nf * (lf * (-1.0 / nf).ln_1p()).exp();
    let pair = if n == 2 { 0.0 } else { (lf * (-1.0 / (nf - 1.0)).ln_1p()).exp() };
    let sigma2 = mu - mu * mu + mu * (nf - 1.0) * pair;
    Ok(MomentSummary { mu, sigma2: sigma2.max(0.0), mu2: None })
}
