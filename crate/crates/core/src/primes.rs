//! Small-prime utilities: smallest-prime-factor sieve, primality, factoring.

/// Linear sieve. `spf[n]` is the smallest prime factor of `n` for `n >= 2`;
/// entries 0 and 1 are 0.
pub fn smallest_prime_factors(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > n_max {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Divisors of `n`, unordered.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_agrees_with_trial_division() {
        let spf = smallest_prime_factors(2000);
        for n in 2..=2000u64 {
            assert_eq!(spf[n as usize] as u64, distinct_prime_factors(n)[0], "n = {n}");
            assert_eq!(is_prime(n), spf[n as usize] as u64 == n);
        }
        let ps = primes_up_to(100);
        assert_eq!(ps.len(), 25);
        assert_eq!(*ps.last().unwrap(), 97);
    }

    #[test]
    fn divisors_of_twelve() {
        let mut d = divisors(12);
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(distinct_prime_factors(1), Vec::<u64>::new());
    }
}
