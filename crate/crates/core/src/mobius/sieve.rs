//! Möbius function sieves.

/// Linear sieve: `μ(0..=n)` with `μ(0) = 0`.
pub fn linear(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Segmented sieve over `[1, n]` in windows of `segment` integers; memory is
/// `O(√n + segment)` beyond the output.
pub fn segmented(n: usize, segment: usize) -> Vec<i8> {
    let mut out = vec![0i8; n + 1];
    if n == 0 {
        return out;
    }
    let root = (n as f64).sqrt() as usize + 1;
    let primes: Vec<usize> = (2..=root).filter(|&i| (2..).take_while(|d| d * d <= i).all(|d| i % d != 0)).collect();
    let segment = segment.max(1);
    let mut rest = vec![0u64; segment];
    let mut lo = 1;
    while lo <= n {
        let hi = (lo + segment - 1).min(n);
        let len = hi - lo + 1;
        let mu = &mut out[lo..=hi];
        mu.fill(1);
        for (k, r) in rest.iter_mut().take(len).enumerate() {
            *r = (lo + k) as u64;
        }
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            for m in (first..=hi).step_by(p) {
                let k = m - lo;
                mu[k] = -mu[k];
                rest[k] /= p as u64;
            }
            let pp = p * p;
            let first = lo.div_ceil(pp) * pp;
            for m in (first..=hi).step_by(pp) {
                mu[m - lo] = 0;
            }
        }
        // whatever is left over is a single prime above √hi
        for k in 0..len {
            if rest[k] > 1 {
                mu[k] = -mu[k];
            }
        }
        lo = hi + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmented_matches_linear() {
        let n = 200_003;
        let lin = linear(n);
        for seg in [1, 7, 1000, 65_536, n + 10] {
            assert_eq!(segmented(n, seg), lin, "segment {seg}");
        }
        assert_eq!(segmented(1, 4), vec![0, 1]);
    }
}
