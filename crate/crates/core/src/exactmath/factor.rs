use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::primality::{is_prime_seeded, mul_mod};
use super::{gcd, SmallFactorTable};
use crate::error::{Error, Result};

/// Pollard-Brent iterations allowed per `factorize` call by default.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 24;

const TRIAL_BOUND: u32 = 1 << 12;
const DEFAULT_SEED: u64 = 0xfac7_0812_e5ee_d001;

fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; TRIAL_BOUND as usize + 1];
        let mut primes = Vec::new();
        for i in 2..=TRIAL_BOUND as usize {
            if !composite[i] {
                primes.push(i as u32);
                for j in (i * i..=TRIAL_BOUND as usize).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

/// Prime factorization `base = Π prime^exponent`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    base: u128,
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            base: 1,
            factors: Vec::new(),
        }
    }

    /// Builds a factorization from (prime, exponent) pairs in any order.
    /// Primality of the entries is the caller's responsibility.
    pub fn from_prime_powers(pairs: impl IntoIterator<Item = (u128, u32)>) -> Result<Self> {
        let mut factors: Vec<(u128, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable();
        factors.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                prev.1 += next.1;
                true
            } else {
                false
            }
        });
        let mut base = 1u128;
        for &(p, e) in &factors {
            if p < 2 {
                return Err(Error::InvalidInput(format!("{p} is not a prime")));
            }
            for _ in 0..e {
                base = base
                    .checked_mul(p)
                    .ok_or(Error::Overflow("factorization base"))?;
            }
        }
        Ok(Factorization { base, factors })
    }

    pub fn base(&self) -> u128 {
        self.base
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of divisors, Π(exponent + 1).
    pub fn divisor_count(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(_, e)| acc.saturating_mul(e as u128 + 1))
    }

    /// Factorization of the product of two factored numbers.
    pub fn multiply(&self, other: &Factorization) -> Result<Factorization> {
        let base = self
            .base
            .checked_mul(other.base)
            .ok_or(Error::Overflow("product of factorizations"))?;
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, b) = (self.factors[i], other.factors[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    factors.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    factors.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Ok(Factorization { base, factors })
    }

    /// Multiplies in a small integer by factoring it directly.
    pub fn multiply_small(&self, k: u64) -> Result<Factorization> {
        self.multiply(&factorize(k as u128)?)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factorization settings: trial division, then Pollard-Brent under a work budget.
#[derive(Debug, Clone)]
pub struct Factorizer {
    pub work_budget: u64,
    pub seed: u64,
    table: Option<Arc<SmallFactorTable>>,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            work_budget: DEFAULT_WORK_BUDGET,
            seed: DEFAULT_SEED,
            table: None,
        }
    }
}

impl Factorizer {
    pub fn new(work_budget: u64, seed: u64) -> Self {
        Factorizer {
            work_budget,
            seed,
            table: None,
        }
    }

    /// Uses a smallest-prime-factor table for every input it covers.
    pub fn with_table(mut self, table: Arc<SmallFactorTable>) -> Self {
        self.table = Some(table);
        self
    }

    pub fn factorize(&self, n: u128) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidInput("cannot factor 0".into()));
        }
        if let Some(table) = &self.table {
            if let Some(f) = table.factorize(n) {
                return Ok(f);
            }
        }
        let mut primes: Vec<u128> = Vec::new();
        let mut m = n;
        for &p in trial_primes() {
            let p = p as u128;
            if p * p > m {
                break;
            }
            while m.is_multiple_of(p) {
                primes.push(p);
                m /= p;
            }
        }
        if m > 1 {
            let bound = TRIAL_BOUND as u128 + 1;
            if m < bound * bound {
                primes.push(m);
            } else {
                let mut budget = self.work_budget;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (n as u64));
                self.split_large(n, m, &mut primes, &mut budget, &mut rng)?;
            }
        }
        Factorization::from_prime_powers(primes.into_iter().map(|p| (p, 1)))
    }

    fn split_large(
        &self,
        n: u128,
        m: u128,
        out: &mut Vec<u128>,
        budget: &mut u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<()> {
        if m == 1 {
            return Ok(());
        }
        if is_prime_seeded(m, self.seed) {
            out.push(m);
            return Ok(());
        }
        let root = super::isqrt(m);
        if root * root == m {
            self.split_large(n, root, out, budget, rng)?;
            return self.split_large(n, root, out, budget, rng);
        }
        let d = loop {
            if let Some(d) = pollard_brent(m, budget, rng) {
                break d;
            }
            if *budget == 0 {
                return Err(Error::WorkBudgetExceeded {
                    n,
                    budget: self.work_budget,
                });
            }
        };
        self.split_large(n, d, out, budget, rng)?;
        self.split_large(n, m / d, out, budget, rng)
    }
}

/// One Pollard-Brent attempt with a random polynomial. Returns a proper
/// divisor, or `None` if the cycle closed without one or the budget ran out.
fn pollard_brent(n: u128, budget: &mut u64, rng: &mut ChaCha8Rng) -> Option<u128> {
    const BATCH: u64 = 128;
    let c = rng.gen_range(1..n);
    let f = |v: u128| (mul_mod(v, v, n) + c) % n;
    let mut y = rng.gen_range(0..n);
    let (mut x, mut ys) = (y, y);
    let mut g = 1u128;
    let mut q = 1u128;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if *budget < steps {
                *budget = 0;
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        // retrace one step at a time from the last saved point
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Factorizes with the default budget and seed.
pub fn factorize(n: u128) -> Result<Factorization> {
    Factorizer::default().factorize(n)
}
