//! Elementary multiplicative arithmetic: a smallest-prime-factor sieve and
//! the divisor-type functions `d`, `d_4`, `μ` needed by the coefficient
//! bounds.

/// Smallest-prime-factor sieve up to a fixed limit. Factorization of any
/// `n ≤ limit` is then a walk down the `spf` chain.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Prime-power factorization of `n` as `(p, e)` pairs, `p` increasing.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && (n as usize) <= self.limit(), "n out of sieve range");
        let mut out = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && (n as usize) <= self.limit() && self.spf[n as usize] as u64 == n
    }

    /// All primes up to `bound` (inclusive), `bound ≤ limit`.
    pub fn primes_upto(&self, bound: u64) -> Vec<u64> {
        (2..=bound).filter(|&n| self.is_prime(n)).collect()
    }
}

/// Number of divisors `d(n)`.
pub fn divisor_d(n: u64, sieve: &SpfSieve) -> u64 {
    sieve
        .factorize(n)
        .iter()
        .map(|&(_, e)| (e as u64) + 1)
        .product()
}

/// `d_4(n)`: ordered factorizations of `n` into four positive factors;
/// multiplicative with `d_4(p^e) = C(e+3, 3)`.
pub fn divisor_d4(n: u64, sieve: &SpfSieve) -> u64 {
    sieve.factorize(n).iter().map(|&(_, e)| d4_prime_power(e)).product()
}

/// `d_4(p^e) = (e+1)(e+2)(e+3)/6`.
pub fn d4_prime_power(e: u32) -> u64 {
    let e = e as u64;
    (e + 1) * (e + 2) * (e + 3) / 6
}

/// Moebius function, in `{−1, 0, 1}`.
pub fn moebius(n: u64, sieve: &SpfSieve) -> i64 {
    let f = sieve.factorize(n);
    if f.iter().any(|&(_, e)| e >= 2) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The elementary eigenvalue majorant
/// `Σ_{m squarefree, m²|n} |μ(m)|/m · d_4(n/m²)`.
///
/// For squarefree `n` only `m = 1` contributes and the value is `d_4(n)`.
pub fn trivial_lambda_bound(n: u64, sieve: &SpfSieve) -> f64 {
    let fac = sieve.factorize(n);
    // m runs over squarefree products of the primes appearing in n with
    // exponent ≥ 2.
    let candidates: Vec<(u64, u32)> = fac.iter().copied().filter(|&(_, e)| e >= 2).collect();
    let mut total = 0.0;
    let subsets = 1usize << candidates.len();
    for mask in 0..subsets {
        let mut m = 1u64;
        let mut ok = true;
        for (bit, &(p, _)) in candidates.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                m = match m.checked_mul(p) {
                    Some(v) => v,
                    None => {
                        ok = false;
                        break;
                    }
                };
            }
        }
        if !ok {
            continue;
        }
        // d_4(n/m²) from the factorization of n with exponents reduced.
        let mut d4 = 1u64;
        for &(p, e) in &fac {
            let used = if mask != 0 {
                candidates
                    .iter()
                    .enumerate()
                    .any(|(bit, &(q, _))| q == p && mask & (1 << bit) != 0)
            } else {
                false
            };
            let e_red = if used { e - 2 } else { e };
            d4 *= d4_prime_power(e_red);
        }
        total += d4 as f64 / m as f64;
    }
    total
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // These witnesses decide primality for all n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primes up to `bound` by a plain Eratosthenes pass (no sieve reuse).
pub fn primes_upto(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
