//! Divisor-pair split search.
//!
//! For `n = 4m + 1` and `x = m + r` (`1 <= r <= 2m`),
//! `4/n - 1/x = (4r - 1) / (n·x)`. If the numerator, optionally scaled by
//! `r1`, splits as `a + b` with both parts dividing `r1·n·x`, then
//! `4/n = 1/x + 1/(r1·n·x/b) + 1/(r1·n·x/a)`. The `n = 24l + 1` searches are
//! the special case `m = 6l`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{Decomposition, Method, Params, UnitTriple};
use crate::error::{Error, Result};
use crate::exactmath::{divisors_up_to, gcd, Factorization, Factorizer, SmallFactorTable};

/// The data certifying one split: `a + b = (4r - 1)·r1`, `a <= b`, both
/// dividing `r1·n·x`, with `d = gcd(a, b)`, `a = d·y1`, `b = d·z1` and
/// `g·d·y1·z1 = r1·n·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub r: u128,
    pub a: u128,
    pub b: u128,
    pub r1: u128,
    pub d: u128,
    pub y1: u128,
    pub z1: u128,
    pub g: u128,
}

impl SplitWitness {
    pub(crate) fn new(r: u128, a: u128, b: u128, r1: u128, scaled_modulus: u128) -> Self {
        let d = gcd(a, b);
        let (y1, z1) = (a / d, b / d);
        // lcm(a, b) = d·y1·z1 divides r1·n·x because a and b both do
        let g = scaled_modulus / (d * y1 * z1);
        SplitWitness {
            r,
            a,
            b,
            r1,
            d,
            y1,
            z1,
            g,
        }
    }

    /// Rebuilds the triple for `n = 4m + 1` from the witness alone.
    pub fn triple(&self, n: u128, m: u128) -> Result<UnitTriple> {
        let x = m + self.r;
        let scaled = self
            .r1
            .checked_mul(n)
            .and_then(|v| v.checked_mul(x))
            .ok_or(Error::Overflow("r1·n·x"))?;
        if scaled % self.a != 0 || scaled % self.b != 0 {
            return Err(Error::InvalidInput(format!(
                "split ({}, {}) does not divide r1·n·x = {scaled}",
                self.a, self.b
            )));
        }
        UnitTriple::new(x, scaled / self.b, scaled / self.a)
    }

    fn params(&self, m: u128) -> Params {
        [
            ("m", m),
            ("r", self.r),
            ("a", self.a),
            ("b", self.b),
            ("r1", self.r1),
            ("d", self.d),
            ("y1", self.y1),
            ("z1", self.z1),
            ("g", self.g),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSolution {
    pub witness: SplitWitness,
    #[serde(skip)]
    pub decomposition: Decomposition,
}

/// A factorization that gave up during the scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceHit {
    pub r: u128,
    pub r1: u128,
    pub message: String,
}

/// Result of scanning one `m` (or `l`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitOutcome {
    pub index: u128,
    pub n: u128,
    pub found: Option<SplitSolution>,
    pub limits: Vec<ResourceHit>,
}

impl SplitOutcome {
    pub fn solved(&self) -> bool {
        self.found.is_some()
    }

    /// Not solved, and at least one candidate could not be checked.
    pub fn inconclusive(&self) -> bool {
        self.found.is_none() && !self.limits.is_empty()
    }

    pub fn witness(&self) -> Option<&SplitWitness> {
        self.found.as_ref().map(|s| &s.witness)
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.found.as_ref().map(|s| &s.decomposition)
    }
}

/// Exception list over a range of `l`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExceptionSieve {
    pub exceptions: Vec<u128>,
    pub inconclusive: Vec<u128>,
}

/// Smallest `a <= target/2` with `a | modulus` and `(target - a) | modulus`.
fn first_pair(target: u128, modulus: u128, f: &Factorization, a_max: u128) -> Option<(u128, u128)> {
    let a_max = a_max.min(target / 2);
    let candidates = divisors_up_to(f, a_max);
    if let Ok(m64) = u64::try_from(modulus) {
        let t64 = target as u64;
        candidates
            .into_iter()
            .map(|a| a as u64)
            .find(|&a| m64 % (t64 - a) == 0)
            .map(|a| (a as u128, target - a as u128))
    } else {
        candidates
            .into_iter()
            .find(|&a| modulus.is_multiple_of(target - a))
            .map(|a| (a, target - a))
    }
}

fn all_pairs(target: u128, modulus: u128, f: &Factorization) -> Vec<(u128, u128)> {
    divisors_up_to(f, target / 2)
        .into_iter()
        .filter(|&a| modulus.is_multiple_of(target - a))
        .map(|a| (a, target - a))
        .collect()
}

/// Split search settings.
#[derive(Debug, Clone, Default)]
pub struct SplitSearch {
    factorizer: Factorizer,
}

impl SplitSearch {
    pub fn new(factorizer: Factorizer) -> Self {
        SplitSearch { factorizer }
    }

    /// Backed by a smallest-prime-factor table large enough for every
    /// `x` and `n` arising from `n <= max_n` (and multipliers up to 4·max_n).
    pub fn with_table_for(max_n: u128, factorizer: Factorizer) -> Self {
        let limit = u32::try_from(max_n.saturating_add(1)).unwrap_or(u32::MAX);
        SplitSearch {
            factorizer: factorizer.with_table(Arc::new(SmallFactorTable::new(limit))),
        }
    }

    pub fn factorizer(&self) -> &Factorizer {
        &self.factorizer
    }

    /// Two divisors of `modulus` summing to `target`, smallest `a` first.
    pub fn divisor_pair_split(&self, target: u128, modulus: u128) -> Result<Option<(u128, u128)>> {
        if target < 2 || modulus < 1 {
            return Err(Error::InvalidInput(format!(
                "divisor_pair_split needs target >= 2 and modulus >= 1, got ({target}, {modulus})"
            )));
        }
        let f = self.factorizer.factorize(modulus)?;
        Ok(first_pair(target, modulus, &f, target / 2))
    }

    /// Plain split for `n = 4m + 1`: `r = 1..=2m`, `a <= 2r - 1`.
    pub fn search_m(&self, m: u128) -> Result<SplitOutcome> {
        self.scan(m, m, 1)
    }

    /// Plain split for `n = 24l + 1`: `x = 6l + r`, `r = 1..=12l`.
    pub fn search_l(&self, l: u128) -> Result<SplitOutcome> {
        let m = l.checked_mul(6).ok_or(Error::Overflow("6l"))?;
        let mut out = self.scan(l, m, 1)?;
        tag_l(&mut out, l)?;
        Ok(out)
    }

    /// Multiplier split for `n = 4m + 1`: for each `r`, `r1 = 1..=r1_max`
    /// scales numerator and denominator before splitting; `a` ranges up to
    /// half the scaled numerator. With `r1_max = 1` this is [`Self::search_m`].
    pub fn multiplier_search_m(&self, m: u128, r1_max: u128) -> Result<SplitOutcome> {
        self.scan(m, m, r1_max)
    }

    pub fn multiplier_search(&self, l: u128, r1_max: u128) -> Result<SplitOutcome> {
        let m = l.checked_mul(6).ok_or(Error::Overflow("6l"))?;
        let mut out = self.scan(l, m, r1_max)?;
        tag_l(&mut out, l)?;
        Ok(out)
    }

    fn scan(&self, index: u128, m: u128, r1_max: u128) -> Result<SplitOutcome> {
        if m < 1 || r1_max < 1 {
            return Err(Error::InvalidInput(format!(
                "split search needs m >= 1 and r1_max >= 1, got ({m}, {r1_max})"
            )));
        }
        let n = m
            .checked_mul(4)
            .and_then(|v| v.checked_add(1))
            .ok_or(Error::Overflow("4m+1"))?;
        let mut out = SplitOutcome {
            index,
            n,
            found: None,
            limits: Vec::new(),
        };
        let fn_ = match self.factorizer.factorize(n) {
            Ok(f) => f,
            Err(e) if e.is_resource_limit() => {
                out.limits.push(ResourceHit {
                    r: 0,
                    r1: 0,
                    message: e.to_string(),
                });
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        for r in 1..=2 * m {
            let x = m + r;
            let base = match self
                .factorizer
                .factorize(x)
                .and_then(|fx| fx.multiply(&fn_))
            {
                Ok(f) => f,
                Err(e) if e.is_resource_limit() => {
                    out.limits.push(ResourceHit {
                        r,
                        r1: 1,
                        message: e.to_string(),
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            for r1 in 1..=r1_max {
                let attempt = (|| -> Result<Option<SplitSolution>> {
                    let f = if r1 == 1 {
                        base.clone()
                    } else {
                        base.multiply(&self.factorizer.factorize(r1)?)?
                    };
                    let target = (4 * r - 1)
                        .checked_mul(r1)
                        .ok_or(Error::Overflow("(4r-1)·r1"))?;
                    let Some((a, b)) = first_pair(target, f.base(), &f, target / 2) else {
                        return Ok(None);
                    };
                    let witness = SplitWitness::new(r, a, b, r1, f.base());
                    let method = if r1 == 1 {
                        Method::Split
                    } else {
                        Method::MultiplierSplit
                    };
                    let decomposition =
                        Decomposition::new(n, witness.triple(n, m)?, method, witness.params(m))?;
                    Ok(Some(SplitSolution {
                        witness,
                        decomposition,
                    }))
                })();
                match attempt {
                    Ok(Some(sol)) => {
                        out.found = Some(sol);
                        return Ok(out);
                    }
                    Ok(None) => {}
                    Err(e) if e.is_resource_limit() => out.limits.push(ResourceHit {
                        r,
                        r1,
                        message: e.to_string(),
                    }),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }

    /// Every witness for `n = 4m + 1` with `r1 <= r1_max`, ordered by `(r, r1, a)`.
    pub fn witnesses_m(&self, m: u128, r1_max: u128) -> Result<Vec<SplitWitness>> {
        let n = 4 * m + 1;
        let fn_ = self.factorizer.factorize(n)?;
        let mut out = Vec::new();
        for r in 1..=2 * m {
            let base = self.factorizer.factorize(m + r)?.multiply(&fn_)?;
            for r1 in 1..=r1_max {
                let f = base.multiply(&self.factorizer.factorize(r1)?)?;
                let target = (4 * r - 1) * r1;
                for (a, b) in all_pairs(target, f.base(), &f) {
                    out.push(SplitWitness::new(r, a, b, r1, f.base()));
                }
            }
        }
        Ok(out)
    }

    /// Every `l` in `l_lo..=l_hi` the plain split cannot resolve, ascending.
    /// Runs in parallel; the result does not depend on the thread count.
    pub fn exception_sieve(&self, l_lo: u128, l_hi: u128) -> Result<ExceptionSieve> {
        if l_lo < 1 || l_lo > l_hi {
            return Err(Error::InvalidInput(format!("bad l range {l_lo}..={l_hi}")));
        }
        let outcomes: Vec<SplitOutcome> = (l_lo as u64..=l_hi as u64)
            .into_par_iter()
            .map(|l| self.search_l(l as u128))
            .collect::<Result<_>>()?;
        let mut sieve = ExceptionSieve::default();
        for o in outcomes {
            if o.inconclusive() {
                sieve.inconclusive.push(o.index);
            } else if !o.solved() {
                sieve.exceptions.push(o.index);
            }
        }
        Ok(sieve)
    }
}

fn tag_l(out: &mut SplitOutcome, l: u128) -> Result<()> {
    if let Some(sol) = out.found.take() {
        let mut p = sol.decomposition.params().clone();
        p.insert("l".into(), l);
        let d = Decomposition::new(
            out.n,
            sol.decomposition.triple(),
            sol.decomposition.method(),
            p,
        )?;
        out.found = Some(SplitSolution {
            witness: sol.witness,
            decomposition: d,
        });
    }
    Ok(())
}

/// Re-derives a split decomposition's triple from its parameters.
pub fn replay(d: &Decomposition) -> Result<UnitTriple> {
    let get = |k: &str| {
        d.param(k)
            .ok_or_else(|| Error::InvalidInput(format!("split record lacks parameter {k}")))
    };
    let (m, r, a, b, r1) = (get("m")?, get("r")?, get("a")?, get("b")?, get("r1")?);
    if a + b != (4 * r - 1) * r1 {
        return Err(Error::InvalidInput(format!("a + b != (4r-1)·r1 for {d}")));
    }
    SplitWitness::new(r, a, b, r1, 1).triple(d.n(), m)
}

pub fn divisor_pair_split(target: u128, modulus: u128) -> Result<Option<(u128, u128)>> {
    SplitSearch::default().divisor_pair_split(target, modulus)
}

pub fn search_m(m: u128) -> Result<SplitOutcome> {
    SplitSearch::default().search_m(m)
}

pub fn search_l(l: u128) -> Result<SplitOutcome> {
    SplitSearch::default().search_l(l)
}

pub fn multiplier_search(l: u128, r1_max: u128) -> Result<SplitOutcome> {
    SplitSearch::default().multiplier_search(l, r1_max)
}

pub fn exception_sieve(l_lo: u128, l_hi: u128) -> Result<ExceptionSieve> {
    SplitSearch::with_table_for(24 * l_hi + 1, Factorizer::default()).exception_sieve(l_lo, l_hi)
}
