use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bases that make Miller-Rabin exact for every n < 2^64.
const DETERMINISTIC_BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra random rounds above 2^64; each round has error at most 1/4.
const RANDOM_ROUNDS: usize = 64;

const DEFAULT_SEED: u64 = 0x5eed_4e57_0b11_ce55;

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // double-and-add; every intermediate stays below m
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
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

fn strong_probable_prime(n: u128, d: u128, s: u32, a: u128) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test. Exact below 2^64; above that the error probability is
/// below 2^-128 (twelve fixed bases plus 64 random ones).
pub fn is_prime(n: u128) -> bool {
    is_prime_seeded(n, DEFAULT_SEED)
}

/// As [`is_prime`], with the seed for the random bases used above 2^64.
pub fn is_prime_seeded(n: u128, seed: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    if !DETERMINISTIC_BASES
        .iter()
        .all(|&a| strong_probable_prime(n, d, s, a))
    {
        return false;
    }
    if n <= u64::MAX as u128 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_ROUNDS).all(|_| {
        let a = rng.gen_range(2..n - 1);
        strong_probable_prime(n, d, s, a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn examples() {
        assert!(is_prime(2));
        assert!(is_prime(409));
        assert!(!is_prime(25));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
    }

    #[test]
    fn agrees_with_trial_division_up_to_a_million() {
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime(n as u128), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u128,
            3_825_123_056_546_413_051,
            318_665_857_834_031_151_167_461,
        ] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn large_primes() {
        assert!(is_prime(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(is_prime((1u128 << 89) - 1)); // Mersenne
        assert!(is_prime((1u128 << 127) - 1));
        assert!(!is_prime(((1u128 << 61) - 1) * ((1u128 << 31) - 1)));
    }

    #[test]
    fn mul_mod_wide() {
        let m = (1u128 << 127) - 1;
        assert_eq!(mul_mod(m - 1, m - 1, m), 1);
        assert_eq!(mul_mod(1u128 << 100, 1u128 << 100, m), 1u128 << 73);
    }
}
