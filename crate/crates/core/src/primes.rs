//! Prime-power recognition and enumeration.
//!
//! The threshold formulas accept any prime power q, and the asymptotic
//! checks probe q far beyond machine-word scale, so recognition works on
//! u128: trial division up to 10^6 first (which settles every power of a
//! small prime, however large), then perfect-power extraction, then
//! deterministic Miller-Rabin for the remaining bare candidates. The
//! 13-witness test is a proven deterministic primality decision below
//! 3.317e24; inputs past that bound with no small factor are refused rather
//! than answered probabilistically.

use crate::error::{Error, Result};

/// Upper bound (exclusive) for the deterministic 13-witness Miller-Rabin set.
pub const MILLER_RABIN_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const TRIAL_LIMIT: u128 = 1_000_000;

const WITNESSES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mul_mod(mut a: u128, mut b: u128, m: u128) -> u128 {
    // Double-and-add; operands stay below m < 2^127 so the additions cannot
    // overflow after reduction.
    let mut acc: u128 = 0;
    a %= m;
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a + a) % m;
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1 % m;
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

/// Deterministic Miller-Rabin for odd n with no factor <= 10^6.
/// Returns Ok(None) if prime, Ok(Some(witness)) if composite.
fn miller_rabin(n: u128) -> Result<Option<u128>> {
    if n >= MILLER_RABIN_LIMIT {
        return Err(Error::PrimalityOutOfRange { q: n });
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d_odd = d >> s;
    'witness: for &a in &WITNESSES {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d_odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return Ok(Some(a));
    }
    Ok(None)
}

/// Largest r with r^e <= q, by binary search (exact at any scale, unlike a
/// float seed, which drifts by thousands near 2^63).
fn integer_nth_root(q: u128, e: u32) -> u128 {
    if e == 1 {
        return q;
    }
    let mut lo: u128 = 1;
    let mut hi: u128 = 1u128 << (q.ilog2() / e + 1).min(127);
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        match checked_pow(mid, e) {
            Some(p) if p <= q => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Decides whether q = k^n for a prime k, returning (k, n).
///
/// Errors carry an explicit factorization when one is known; a composite
/// with no factor below 10^6 and no perfect-power structure is reported via
/// its Miller-Rabin witness instead (no factorization is exhibited).
pub fn prime_power_decompose(q: u128) -> Result<(u128, u32)> {
    if q < 2 {
        return Err(Error::QTooSmall { q });
    }
    // Trial division: settles everything with a small prime factor.
    let mut d: u128 = 2;
    while d <= TRIAL_LIMIT && d * d <= q {
        if q.is_multiple_of(d) {
            let mut rest = q;
            let mut mult = 0u32;
            while rest.is_multiple_of(d) {
                rest /= d;
                mult += 1;
            }
            if rest == 1 {
                return Ok((d, mult));
            }
            return Err(Error::NotPrimePower {
                q,
                a: q / rest,
                b: rest,
            });
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if q <= TRIAL_LIMIT * TRIAL_LIMIT {
        // Trial division was exhaustive: q is prime.
        return Ok((q, 1));
    }
    // No factor <= 10^6. Any prime-power structure q = k^e now has k > 10^6,
    // so e <= log_10^6(q) < 8 for u128 inputs.
    for e in (2..=7u32).rev() {
        let r = integer_nth_root(q, e);
        if r >= 2 && checked_pow(r, e) == Some(q) {
            // r inherits "no factor <= 10^6" from q, and q odd makes r odd.
            return match miller_rabin(r)? {
                None => Ok((r, e)),
                Some(_) => Err(Error::NotPrimePower { q, a: r, b: q / r }),
            };
        }
    }
    match miller_rabin(q)? {
        None => Ok((q, 1)),
        Some(witness) => Err(Error::CompositeNoFactor { q, witness }),
    }
}

/// True iff q is a prime power (errors only past the decidable range).
pub fn is_prime_power(q: u128) -> bool {
    prime_power_decompose(q).is_ok()
}

/// All prime powers <= max, ascending.
pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    if max < 2 {
        return Vec::new();
    }
    let m = max as usize;
    let mut sieve = vec![true; m + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= m {
        if sieve[i] {
            let mut j = i * i;
            while j <= m {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    let mut out = Vec::new();
    for (p, &is_p) in sieve.iter().enumerate() {
        if !is_p {
            continue;
        }
        let mut v = p as u64;
        loop {
            out.push(v);
            match v.checked_mul(p as u64) {
                Some(next) if next <= max => v = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_decompositions() {
        assert_eq!(prime_power_decompose(2).unwrap(), (2, 1));
        assert_eq!(prime_power_decompose(7).unwrap(), (7, 1));
        assert_eq!(prime_power_decompose(8).unwrap(), (2, 3));
        assert_eq!(prime_power_decompose(9).unwrap(), (3, 2));
        assert_eq!(prime_power_decompose(729).unwrap(), (3, 6));
        assert_eq!(prime_power_decompose(1u128 << 100).unwrap(), (2, 100));
    }

    #[test]
    fn six_names_its_factorization() {
        match prime_power_decompose(6) {
            Err(Error::NotPrimePower { q, a, b }) => assert_eq!((q, a, b), (6, 2, 3)),
            other => panic!("expected factorization error, got {other:?}"),
        }
        match prime_power_decompose(12) {
            Err(Error::NotPrimePower { q, a, b }) => assert_eq!((q, a, b), (12, 4, 3)),
            other => panic!("expected factorization error, got {other:?}"),
        }
        assert!(matches!(
            prime_power_decompose(0),
            Err(Error::QTooSmall { .. })
        ));
        assert!(matches!(
            prime_power_decompose(1),
            Err(Error::QTooSmall { .. })
        ));
    }

    #[test]
    fn large_primes_and_their_powers() {
        let p: u128 = 1_000_003;
        assert_eq!(prime_power_decompose(p).unwrap(), (p, 1));
        assert_eq!(prime_power_decompose(p * p).unwrap(), (p, 2));
        assert_eq!(prime_power_decompose(p * p * p).unwrap(), (p, 3));
        // Semiprime of two distinct primes above the trial-division limit:
        // compositeness is provable, a factorization is not.
        let p2: u128 = 1_000_033;
        match prime_power_decompose(p * p2) {
            Err(Error::CompositeNoFactor { .. }) => {}
            other => panic!("expected composite-no-factor, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_matches_direct_check() {
        let pps = prime_powers_up_to(100);
        assert_eq!(
            pps,
            vec![
                2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47,
                49, 53, 59, 61, 64, 67, 71, 73, 79, 81, 83, 89, 97
            ]
        );
        for q in 2..=1000u64 {
            assert_eq!(
                prime_powers_up_to(1000).contains(&q),
                is_prime_power(q as u128),
                "disagreement at q = {q}"
            );
        }
    }
}
