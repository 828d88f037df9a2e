//! Smallest-prime-factor sieve shared by every factorization on the hot path.

use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug, Clone)]
pub struct PrimeSieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl PrimeSieve {
    /// Linear sieve up to `limit` inclusive.
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(2);
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = p as usize * i;
                if p > si || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        PrimeSieve { spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// Position of prime `p` in the ascending prime list (2 -> 0, 3 -> 1, ...).
    pub fn prime_index(&self, p: u32) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Prime factorization as ascending `(prime, exponent)` pairs; empty for n = 1.
    pub fn factorize(&self, mut n: usize) -> Vec<(u32, u32)> {
        assert!(
            n >= 1 && n <= self.limit(),
            "factorize({n}) outside sieve range"
        );
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n];
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n /= p as usize;
        }
        out
    }
}

static SHARED: OnceLock<RwLock<Arc<PrimeSieve>>> = OnceLock::new();

/// Shared sieve covering at least `limit`; regrown by doubling when too small.
pub fn sieve(limit: usize) -> Arc<PrimeSieve> {
    let lock = SHARED.get_or_init(|| RwLock::new(Arc::new(PrimeSieve::new(1 << 12))));
    {
        let current = lock.read().expect("sieve lock poisoned");
        if current.limit() >= limit {
            return Arc::clone(&current);
        }
    }
    let mut current = lock.write().expect("sieve lock poisoned");
    if current.limit() < limit {
        let mut size = current.limit().max(2);
        while size < limit {
            size *= 2;
        }
        *current = Arc::new(PrimeSieve::new(size));
    }
    Arc::clone(&current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let s = PrimeSieve::new(30);
        assert_eq!(s.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(s.factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(s.factorize(1), vec![]);
        assert_eq!(s.factorize(29), vec![(29, 1)]);
        assert_eq!(s.prime_index(7), Some(3));
        assert_eq!(s.prime_index(8), None);
    }

    #[test]
    fn factorization_multiplies_back() {
        let s = PrimeSieve::new(5000);
        for n in 1..=5000usize {
            let prod: usize = s
                .factorize(n)
                .iter()
                .map(|&(p, e)| (p as usize).pow(e))
                .product();
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn shared_sieve_grows() {
        let s = sieve(100_000);
        assert!(s.limit() >= 100_000);
        assert!(s.is_prime(99_991));
    }
}
