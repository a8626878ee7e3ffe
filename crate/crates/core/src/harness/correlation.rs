use crate::scalar::Scalar;
use crate::{Error, Result};

fn check<F: Scalar>(a: &[F], b: &[F]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Correlation("inputs differ in length"));
    }
    if a.len() < 2 {
        return Err(Error::Correlation("need at least 2 observations"));
    }
    Ok(())
}

/// Pearson's r. Zero variance in either input has no defined value and is
/// reported as an error.
pub fn pearson_r<F: Scalar>(a: &[F], b: &[F]) -> Result<F> {
    check(a, b)?;
    let n = F::of_usize(a.len());
    let mean_a = a.iter().fold(F::zero(), |s, &x| s + x) / n;
    let mean_b = b.iter().fold(F::zero(), |s, &x| s + x) / n;
    let (mut sab, mut saa, mut sbb) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa == F::zero() || sbb == F::zero() {
        return Err(Error::Correlation("zero variance"));
    }
    let r = sab / (saa * sbb).sqrt();
    Ok(r.max(-F::one()).min(F::one()))
}

/// 1-based ranks, averaging over tied values.
fn average_ranks<F: Scalar>(v: &[F]) -> Vec<F> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![F::zero(); v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = F::of_usize(start + 1 + end) / F::of(2.0);
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson's r over average ranks.
pub fn spearman_rho<F: Scalar>(a: &[F], b: &[F]) -> Result<F> {
    check(a, b)?;
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::Correlation("NaN in input"));
    }
    pearson_r(&average_ranks(a), &average_ranks(b))
}
