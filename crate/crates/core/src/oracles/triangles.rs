use super::table::{neumaier_sum, DistributionTable};
use super::MomentSummary;
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::special::LogProb;

/// Largest number of potential edges enumerated exhaustively.
pub const TRIANGLES_MAX_EDGES: u32 = 24;

const CHUNK_BITS: u32 = 14;

fn check(n: u64, p: f64) -> Result<()> {
    if n < 1 {
        return Err(domain("triangles need n >= 1 vertices"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("edge probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

fn choose3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Edge masks of every triangle of `K_n`, edges numbered lexicographically.
fn triangle_masks(n: usize) -> Vec<u32> {
    let mut id = vec![vec![0u32; n]; n];
    let mut e = 0;
    for i in 0..n {
        for j in i + 1..n {
            id[i][j] = e;
            e += 1;
        }
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push((1 << id[a][b]) | (1 << id[a][c]) | (1 << id[b][c]));
            }
        }
    }
    out
}

/// Exact law of the triangle count in `G(n, p)` by enumerating all
/// `2^C(n,2)` edge sets (so `n <= 7`).
pub fn triangles_table_small(n: u64, p: f64) -> Result<DistributionTable> {
    triangles_table_small_with(n, p, Execution::default())
}

/// As [`triangles_table_small`] with an explicit execution policy. The
/// enumeration reduces to integer counts, so the result does not depend on
/// the policy.
pub fn triangles_table_small_with(n: u64, p: f64, exec: Execution) -> Result<DistributionTable> {
    check(n, p)?;
    let m = (n * n.saturating_sub(1) / 2) as u32;
    if m > TRIANGLES_MAX_EDGES {
        return Err(Error::SizeGuard(format!(
            "triangle enumeration limited to C(n,2) <= {TRIANGLES_MAX_EDGES} edges (n <= 7), got n={n}; use Monte Carlo"
        )));
    }
    let tris = triangle_masks(n as usize);
    let t_max = tris.len();
    let stride = t_max + 1;
    let total: u64 = 1 << m;
    let chunk = 1u64 << CHUNK_BITS.min(m);
    let n_chunks = (total / chunk) as usize;
    let partial = exec.map_indexed(n_chunks, |c| {
        let mut counts = vec![0u64; (m as usize + 1) * stride];
        let start = c as u64 * chunk;
        for mask in start..start + chunk {
            let mask = mask as u32;
            let t = tris.iter().filter(|&&tm| mask & tm == tm).count();
            counts[mask.count_ones() as usize * stride + t] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; (m as usize + 1) * stride];
    for part in partial {
        for (a, b) in counts.iter_mut().zip(part) {
            *a += b;
        }
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let log_pmf = (0..=t_max)
        .map(|t| {
            let s = neumaier_sum((0..=m as usize).map(|e| {
                let c = counts[e * stride + t];
                if c == 0 {
                    0.0
                } else {
                    ((c as f64).ln() + e as f64 * lp + (m as usize - e) as f64 * lq).exp()
                }
            }));
            LogProb::clamped(s.ln())
        })
        .collect();
    Ok(DistributionTable {
        offset: 0,
        log_pmf,
        truncated_mass: 0.0,
        rel_error: (m as f64 * (lp.abs() + lq.abs()) + 64.0) * f64::EPSILON,
    })
}

/// `mu = C(n,3) p^3` and `sigma2 = C(n,3) p^3 [1 - p^3 + 3(n-3)(p^2 - p^3)]`.
pub fn triangles_params(n: u64, p: f64) -> Result<MomentSummary> {
    check(n, p)?;
    let c = choose3(n) as f64;
    let p3 = p * p * p;
    let mu = c * p3;
    let extra = if n >= 3 { 3.0 * (n - 3) as f64 * (p * p - p3) } else { 0.0 };
    Ok(MomentSummary { mu, sigma2: mu * (1.0 - p3 + extra), mu2: None })
}

/// Largest possible triangle count.
pub(crate) fn max_triangles(n: u64) -> u64 {
    choose3(n)
}
