//! Parametric decompositions with `n | x` and `n | y`.
//!
//! Writing `x = u5·p`, `y = v4·p`, `z = w3`, the equation holds whenever
//! `u5·v4 = w2·w3`, `u5 + v4 = w2·w4` and `p = 4·w3 - w4`. For `p = 1 mod 4`
//! take `w4 = 4·w5 + 3`; then `w3 = w5 + (p+3)/4` and
//! `w2 = u5² / ((4·w5+3)·u5 - w3)` must be a positive integer.
//!
//! Nothing here claims the search succeeds for every `p`; it is bounded by
//! `w5_max` and `u5_max`.

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{params, Decomposition, FamilyId, Method, UnitTriple};
use crate::error::{Error, Result};
use crate::exactmath::{divisors, factorize, gcd};
use crate::identities::apply_family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParametricWitness {
    pub p: u128,
    pub w5: u128,
    pub u5: u128,
    pub w2: u128,
    pub v4: u128,
    pub w3: u128,
    pub w4: u128,
}

impl ParametricWitness {
    pub fn triple(&self) -> Result<UnitTriple> {
        let x = self.u5.checked_mul(self.p).ok_or(Error::Overflow("u5·p"))?;
        let y = self.v4.checked_mul(self.p).ok_or(Error::Overflow("v4·p"))?;
        UnitTriple::new(x, y, self.w3)
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        Decomposition::new(
            self.p,
            self.triple()?,
            Method::Parametric,
            params([
                ("w5", self.w5),
                ("u5", self.u5),
                ("w2", self.w2),
                ("v4", self.v4),
                ("w3", self.w3),
                ("w4", self.w4),
            ]),
        )
    }
}

fn require_one_mod_four(p: u128) -> Result<()> {
    if p % 4 != 1 || p < 5 {
        return Err(Error::ResidueMismatch {
            p,
            residue: 1,
            modulus: 4,
        });
    }
    Ok(())
}

/// Smallest admissible `u5` is one more than this.
pub fn u5_floor(p: u128, w5: u128) -> u128 {
    (w5 + p.div_ceil(4)) / (4 * w5 + 3)
}

/// Tests one `(w5, u5)`; `None` when `w2` is not an integer.
pub fn parametric_step(p: u128, w5: u128, u5: u128) -> Result<Option<ParametricWitness>> {
    require_one_mod_four(p)?;
    let floor = u5_floor(p, w5);
    if u5 <= floor {
        return Err(Error::InvalidInput(format!(
            "u5 = {u5} must exceed {floor} for p = {p}, w5 = {w5}"
        )));
    }
    Ok(step_unchecked(p, w5, u5))
}

fn step_unchecked(p: u128, w5: u128, u5: u128) -> Option<ParametricWitness> {
    let w3 = w5 + p.div_ceil(4);
    let w4 = 4 * w5 + 3;
    let denom = w4 * u5 - w3;
    let sq = u5 * u5;
    if !sq.is_multiple_of(denom) {
        return None;
    }
    let w2 = sq / denom;
    let v4 = w4 * w2 - u5;
    Some(ParametricWitness {
        p,
        w5,
        u5,
        w2,
        v4,
        w3,
        w4,
    })
}

/// Every witness with `0 <= w5 <= w5_max` and `1 <= u5 <= u5_max`, ordered by `(w5, u5)`.
pub fn parametric_search(p: u128, w5_max: u128, u5_max: u128) -> Result<Vec<ParametricWitness>> {
    require_one_mod_four(p)?;
    check_bounds(p, w5_max, u5_max)?;
    let slices: Vec<Vec<ParametricWitness>> = (0..=w5_max as u64)
        .into_par_iter()
        .map(|w5| slice(p, w5 as u128, u5_max).collect())
        .collect();
    Ok(slices.into_iter().flatten().collect())
}

/// The first witness in `(w5, u5)` order, if any.
pub fn parametric_first(p: u128, w5_max: u128, u5_max: u128) -> Result<Option<ParametricWitness>> {
    require_one_mod_four(p)?;
    check_bounds(p, w5_max, u5_max)?;
    Ok((0..=w5_max).find_map(|w5| slice(p, w5, u5_max).next()))
}

fn check_bounds(p: u128, w5_max: u128, u5_max: u128) -> Result<()> {
    // (4·w5+3)·u5 and u5² must stay well inside u128
    if w5_max > u64::MAX as u128 / 8 || u5_max > u32::MAX as u128 || p > u64::MAX as u128 {
        return Err(Error::Overflow("parametric search bounds"));
    }
    Ok(())
}

fn slice(p: u128, w5: u128, u5_max: u128) -> impl Iterator<Item = ParametricWitness> {
    let lo = u5_floor(p, w5) + 1;
    (lo.max(1)..=u5_max).filter_map(move |u5| step_unchecked(p, w5, u5))
}

/// The three `x = y` closed forms for `p = 3 mod 4` (families F25, F26, F27).
pub fn case2_forms(p: u128) -> Result<[Decomposition; 3]> {
    if p % 4 != 3 {
        return Err(Error::ResidueMismatch {
            p,
            residue: 3,
            modulus: 4,
        });
    }
    let u = params([("u", (p + 1) / 4)]);
    Ok([
        apply_family(FamilyId(25), p, &u)?,
        apply_family(FamilyId(26), p, &u)?,
        apply_family(FamilyId(27), p, &u)?,
    ])
}

/// `p = slope·w6 + offset` for fixed `u5` and `w2 = 1`; valid while
/// `v4 = 4·w6 - u5 - 1 >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorollaryFamily {
    pub u5: u128,
    pub slope: u128,
    pub offset: i128,
}

/// `(slope, offset)` for `u5 = 1..=10`, as tabulated.
const TABULATED: [(u128, i128); 10] = [
    (12, -7),
    (28, -23),
    (44, -47),
    (60, -79),
    (76, -119),
    (92, -167),
    (108, -223),
    (124, -287),
    (140, -359),
    (156, -439),
];

impl CorollaryFamily {
    pub fn computed(u5: u128) -> Self {
        CorollaryFamily {
            u5,
            slope: 16 * u5 - 4,
            offset: 1 - 4 * (u5 * (u5 + 1)) as i128,
        }
    }

    /// `p mod slope`, the form `slope·w7 + residue`.
    pub fn residue(&self) -> u128 {
        self.offset.rem_euclid(self.slope as i128) as u128
    }

    pub fn min_w6(&self) -> u128 {
        (self.u5 + 2).div_ceil(4).max(1)
    }

    pub fn n_at(&self, w6: u128) -> Option<u128> {
        let v = (self.slope as i128).checked_mul(w6 as i128)? + self.offset;
        (v >= 2).then_some(v as u128)
    }

    /// Decomposition of `4/n` for `n = n_at(w6)`.
    pub fn decomposition(&self, w6: u128) -> Result<Decomposition> {
        let n = self
            .n_at(w6)
            .filter(|_| w6 >= self.min_w6())
            .ok_or_else(|| {
                Error::InvalidInput(format!("w6 = {w6} out of range for u5 = {}", self.u5))
            })?;
        let v4 = 4 * w6 - self.u5 - 1;
        let t = UnitTriple::new(self.u5 * n, v4 * n, self.u5 * v4)?;
        Decomposition::new(
            n,
            t,
            Method::Corollary,
            params([("u5", self.u5), ("w6", w6), ("v4", v4), ("w2", 1)]),
        )
    }
}

/// The `w2 = 1` families for `u5 = 1..=u5_max`.
pub fn corollary_families(u5_max: u128) -> Vec<CorollaryFamily> {
    (1..=u5_max)
        .map(|u5| match TABULATED.get(u5 as usize - 1) {
            Some(&(slope, offset)) => CorollaryFamily { u5, slope, offset },
            None => CorollaryFamily::computed(u5),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Case3Entry {
    pub w2: u128,
    pub w3: u128,
    pub w4: u128,
    pub p: u128,
}

impl Case3Entry {
    pub fn decomposition(&self, u5: u128, v4: u128) -> Result<Decomposition> {
        let t = UnitTriple::new(u5 * self.p, v4 * self.p, self.w3)?;
        Decomposition::new(
            self.p,
            t,
            Method::Parametric,
            params([
                ("u5", u5),
                ("v4", v4),
                ("w2", self.w2),
                ("w3", self.w3),
                ("w4", self.w4),
            ]),
        )
    }
}

/// For each common divisor `w2` of `u5 + v4` and `u5·v4`, the `n = 4·w3 - w4`
/// it produces (only positive ones). Primality is left to the caller.
pub fn case3_primes_from(u5: u128, v4: u128) -> Result<Vec<Case3Entry>> {
    if u5 == 0 || v4 == 0 {
        return Err(Error::InvalidInput("u5 and v4 must be positive".into()));
    }
    let sum = u5.checked_add(v4).ok_or(Error::Overflow("u5 + v4"))?;
    let product = u5.checked_mul(v4).ok_or(Error::Overflow("u5·v4"))?;
    let common = gcd(sum, product);
    Ok(divisors(&factorize(common)?)?
        .into_iter()
        .filter_map(|w2| {
            let (w4, w3) = (sum / w2, product / w2);
            let p = (4 * w3).checked_sub(w4).filter(|&p| p > 0)?;
            Some(Case3Entry { w2, w3, w4, p })
        })
        .collect())
}

/// Re-derives a parametric or corollary decomposition from its parameters.
pub fn replay(d: &Decomposition) -> Result<UnitTriple> {
    let get = |k: &str| {
        d.param(k)
            .ok_or_else(|| Error::InvalidInput(format!("parametric record lacks parameter {k}")))
    };
    let (u5, v4) = (get("u5")?, get("v4")?);
    let w3 = match d.method() {
        Method::Corollary => u5 * v4,
        _ => get("w3")?,
    };
    UnitTriple::new(u5 * d.n(), v4 * d.n(), w3)
}
