//! Closed-form identity families `F1`..`F31` and the classifier that finds
//! which of them apply to a given `n`.
//!
//! Most families are linear: `n = slope·t + offset` for an integer parameter
//! `t >= 1`, with a polynomial triple in `t`. `F8` needs a factor of
//! `(6l+1)(24l+1)` congruent to 2 mod 3, and `F28`..`F31` are the `w2 = 1`
//! parametric families `n = (16·u5 - 4)·w6 + 1 - 4·u5·(u5+1)`.

use std::fmt::Write as _;

use crate::decomposition::{params, Decomposition, FamilyId, Method, Params, UnitTriple};
use crate::error::{Error, Result};
use crate::exactmath::Factorizer;

type LinearGenerator = fn(u128) -> Option<[u128; 3]>;

/// What `n` must look like for a family to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `n = slope·t + offset` with `t >= 1`.
    Linear {
        slope: u128,
        offset: i128,
        param: &'static str,
    },
    /// `n = 24l + 1` and `(6l+1)(24l+1)` has a factor `3b + 2`.
    Factor,
    /// `n = (16·u5 - 4)·w6 + 1 - 4·u5·(u5+1)` for some `u5` in the range and
    /// `v4 = 4·w6 - u5 - 1 >= 1`.
    Corollary { u5_min: u128, u5_max: u128 },
}

#[derive(Debug, Clone, Copy)]
enum Generator {
    Linear(LinearGenerator),
    Factor,
    Corollary,
}

/// A parametrized closed-form decomposition with its applicability condition.
#[derive(Debug, Clone, Copy)]
pub struct IdentityFamily {
    pub id: FamilyId,
    pub condition: Condition,
    pub condition_text: &'static str,
    pub formula: &'static str,
    pub source: &'static str,
    generator: Generator,
}

// a·t + c, `None` when non-positive or out of range
fn lin(a: u128, t: u128, c: i128) -> Option<u128> {
    let at = a.checked_mul(t)?;
    let v = if c >= 0 {
        at.checked_add(c as u128)?
    } else {
        at.checked_sub(c.unsigned_abs())?
    };
    (v > 0).then_some(v)
}

fn prod(xs: &[Option<u128>]) -> Option<u128> {
    xs.iter().try_fold(1u128, |acc, &v| acc.checked_mul(v?))
}

fn triple(x: Option<u128>, y: Option<u128>, z: Option<u128>) -> Option<[u128; 3]> {
    Some([x?, y?, z?])
}

macro_rules! linear {
    ($id:expr, $slope:expr, $offset:expr, $param:expr, $cond:expr, $formula:expr, $source:expr, $gen:expr) => {
        IdentityFamily {
            id: FamilyId($id),
            condition: Condition::Linear {
                slope: $slope,
                offset: $offset,
                param: $param,
            },
            condition_text: $cond,
            formula: $formula,
            source: $source,
            generator: Generator::Linear($gen),
        }
    };
}

macro_rules! corollary {
    ($id:expr, $lo:expr, $hi:expr, $cond:expr, $source:expr) => {
        IdentityFamily {
            id: FamilyId($id),
            condition: Condition::Corollary {
                u5_min: $lo,
                u5_max: $hi,
            },
            condition_text: $cond,
            formula: "(u5*n, (4w6-u5-1)*n, u5*(4w6-u5-1))",
            source: $source,
            generator: Generator::Corollary,
        }
    };
}

/// The family table, in ascending id order.
pub static FAMILIES: [IdentityFamily; 31] = [
    linear!(1, 2, 0, "m", "n = 2m", "(2m, 2m, m)", "even n", |m| triple(
        lin(2, m, 0),
        lin(2, m, 0),
        Some(m)
    )),
    linear!(
        2,
        3,
        0,
        "m",
        "n = 3m",
        "(2m, 2m, 3m)",
        "multiple of 3",
        |m| triple(lin(2, m, 0), lin(2, m, 0), lin(3, m, 0))
    ),
    linear!(
        3,
        3,
        2,
        "m",
        "n = 3m+2",
        "(3m+2, m+1, (m+1)(3m+2))",
        "n = 2 mod 3",
        |m| triple(
            lin(3, m, 2),
            lin(1, m, 1),
            prod(&[lin(1, m, 1), lin(3, m, 2)])
        )
    ),
    linear!(
        4,
        4,
        3,
        "m",
        "n = 4m+3",
        "(m+1, 2(4m+3)(m+1), 2(4m+3)(m+1))",
        "n = 3 mod 4",
        |m| {
            let y = prod(&[Some(2), lin(4, m, 3), lin(1, m, 1)]);
            triple(lin(1, m, 1), y, y)
        }
    ),
    linear!(
        5,
        8,
        -3,
        "k",
        "n = 8k-3",
        "(2k, 2k(8k-3), k(8k-3))",
        "x = 2k, split 1+2",
        |k| triple(
            lin(2, k, 0),
            prod(&[lin(2, k, 0), lin(8, k, -3)]),
            prod(&[Some(k), lin(8, k, -3)])
        )
    ),
    linear!(
        6,
        24,
        -15,
        "l",
        "n = 24l-15",
        "(6l-3, 2(2l-1)(24l-15), 2(2l-1)(24l-15))",
        "x = 6l-3, halved remainder",
        |l| {
            let y = prod(&[Some(2), lin(2, l, -1), lin(24, l, -15)]);
            triple(lin(6, l, -3), y, y)
        }
    ),
    linear!(
        7,
        24,
        -7,
        "l",
        "n = 24l-7",
        "(6l-1, 2l(6l-1)(24l-7), 2l(24l-7))",
        "x = 6l-1, split 1+(6l-1)",
        |l| triple(
            lin(6, l, -1),
            prod(&[lin(2, l, 0), lin(6, l, -1), lin(24, l, -7)]),
            prod(&[lin(2, l, 0), lin(24, l, -7)]),
        )
    ),
    IdentityFamily {
        id: FamilyId(8),
        condition: Condition::Factor,
        condition_text: "n = 24l+1, (6l+1)(24l+1) has a factor 3b+2",
        formula: "(6l+1, (3b+2)(b+1)f, (b+1)f), f = (6l+1)(24l+1)/(3b+2)",
        source: "x = 6l+1, split 1+(3b+2)",
        generator: Generator::Factor,
    },
    linear!(
        9,
        40,
        -7,
        "b",
        "n = 40b-7",
        "(10b, 5b(40b-7), 2b(40b-7))",
        "x = 10b, split 2+5",
        |b| triple(
            lin(10, b, 0),
            prod(&[lin(5, b, 0), lin(40, b, -7)]),
            prod(&[lin(2, b, 0), lin(40, b, -7)])
        )
    ),
    linear!(
        10,
        56,
        -7,
        "b",
        "n = 56b-7",
        "(14b, 4b(56b-7), 4b(56b-7))",
        "x = 14b, halved remainder",
        |b| {
            let y = prod(&[lin(4, b, 0), lin(56, b, -7)]);
            triple(lin(14, b, 0), y, y)
        }
    ),
    linear!(
        11,
        56,
        33,
        "b",
        "n = 56b+33",
        "(2(7b+5), (b+1)(7b+5)(56b+33), 2(b+1)(56b+33))",
        "x = 2(7b+5), split 2+(7b+5)",
        |b| triple(
            lin(14, b, 10),
            prod(&[lin(1, b, 1), lin(7, b, 5), lin(56, b, 33)]),
            prod(&[lin(2, b, 2), lin(56, b, 33)]),
        )
    ),
    linear!(
        12,
        56,
        41,
        "b",
        "n = 56b+41",
        "(2(7b+6), 2(b+1)(7b+6)(56b+41), 2(b+1)(56b+41))",
        "x = 2(7b+6), split 1+(7b+6)",
        |b| triple(
            lin(14, b, 12),
            prod(&[lin(2, b, 2), lin(7, b, 6), lin(56, b, 41)]),
            prod(&[lin(2, b, 2), lin(56, b, 41)]),
        )
    ),
    linear!(
        13,
        56,
        17,
        "b",
        "n = 56b+17",
        "(2(7b+3), 2(2b+1)(7b+3)(56b+17), (2b+1)(56b+17))",
        "x = 2(7b+3), split 1+(14b+6)",
        |b| triple(
            lin(14, b, 6),
            prod(&[Some(2), lin(2, b, 1), lin(7, b, 3), lin(56, b, 17)]),
            prod(&[lin(2, b, 1), lin(56, b, 17)]),
        )
    ),
    linear!(
        14,
        120,
        -95,
        "b",
        "n = 120b-95",
        "(30b-23, 10(24b-19)(30b-23), 2(24b-19)(30b-23))",
        "mod 120, l = 5b-4",
        |b| triple(
            lin(30, b, -23),
            prod(&[Some(10), lin(24, b, -19), lin(30, b, -23)]),
            prod(&[Some(2), lin(24, b, -19), lin(30, b, -23)]),
        )
    ),
    linear!(
        15,
        120,
        -47,
        "b",
        "n = 120b-47",
        "(30b-10, 5(120b-47)(3b-1), 2(120b-47)(3b-1))",
        "mod 120, l = 5b-2",
        |b| triple(
            lin(30, b, -10),
            prod(&[Some(5), lin(120, b, -47), lin(3, b, -1)]),
            prod(&[Some(2), lin(120, b, -47), lin(3, b, -1)]),
        )
    ),
    linear!(
        16,
        120,
        -23,
        "b",
        "n = 120b-23",
        "(30b-5, 10(120b-23)(6b-1), 2(120b-23)(6b-1))",
        "mod 120, l = 5b-1",
        |b| triple(
            lin(30, b, -5),
            prod(&[Some(10), lin(120, b, -23), lin(6, b, -1)]),
            prod(&[Some(2), lin(120, b, -23), lin(6, b, -1)]),
        )
    ),
    linear!(
        17,
        840,
        -599,
        "c",
        "n = 840c-599",
        "(210c-147, 42(10c-7)(840c-599), 2(10c-7)(840c-599))",
        "mod 840, n = 120b+1, b = 7c-5",
        |c| triple(
            lin(210, c, -147),
            prod(&[Some(42), lin(10, c, -7), lin(840, c, -599)]),
            prod(&[Some(2), lin(10, c, -7), lin(840, c, -599)]),
        )
    ),
    linear!(
        18,
        840,
        -359,
        "c",
        "n = 840c-359",
        "(210c-88, (15c-6)(105c-44)(840c-359), 2(15c-6)(840c-359))",
        "mod 840, n = 120b+1, b = 7c-3",
        |c| triple(
            lin(210, c, -88),
            prod(&[lin(15, c, -6), lin(105, c, -44), lin(840, c, -359)]),
            prod(&[Some(2), lin(15, c, -6), lin(840, c, -359)]),
        )
    ),
    linear!(
        19,
        840,
        -239,
        "c",
        "n = 840c-239",
        "(210c-58, 2(15c-4)(105c-29)(840c-239), 2(15c-4)(840c-239))",
        "mod 840, n = 120b+1, b = 7c-2",
        |c| triple(
            lin(210, c, -58),
            prod(&[Some(2), lin(15, c, -4), lin(105, c, -29), lin(840, c, -239)]),
            prod(&[Some(2), lin(15, c, -4), lin(840, c, -239)]),
        )
    ),
    linear!(
        20,
        840,
        -119,
        "c",
        "n = 840c-119",
        "(210c-28, 28(15c-2)(120c-17), 28(15c-2)(120c-17))",
        "mod 840, n = 120b+1, b = 7c-1",
        |c| {
            let y = prod(&[Some(28), lin(15, c, -2), lin(120, c, -17)]);
            triple(lin(210, c, -28), y, y)
        }
    ),
    linear!(
        21,
        840,
        -791,
        "c",
        "n = 840c-791",
        "(210c-196, 28(120c-113)(15c-14), 28(120c-113)(15c-14))",
        "mod 840, n = 120b-71, b = 7c-6",
        |c| {
            let y = prod(&[Some(28), lin(120, c, -113), lin(15, c, -14)]);
            triple(lin(210, c, -196), y, y)
        }
    ),
    linear!(
        22,
        840,
        -431,
        "c",
        "n = 840c-431",
        "(210c-106, 30(2c-1)(105c-53)(840c-431), 15(2c-1)(840c-431))",
        "mod 840, n = 120b-71, b = 7c-3",
        |c| triple(
            lin(210, c, -106),
            prod(&[Some(30), lin(2, c, -1), lin(105, c, -53), lin(840, c, -431)]),
            prod(&[Some(15), lin(2, c, -1), lin(840, c, -431)]),
        )
    ),
    linear!(
        23,
        840,
        -191,
        "c",
        "n = 840c-191",
        "(210c-46, 3(5c-1)(105c-23)(840c-191), 6(5c-1)(840c-191))",
        "mod 840, n = 120b-71, b = 7c-1",
        |c| triple(
            lin(210, c, -46),
            prod(&[Some(3), lin(5, c, -1), lin(105, c, -23), lin(840, c, -191)]),
            prod(&[Some(6), lin(5, c, -1), lin(840, c, -191)]),
        )
    ),
    linear!(
        24,
        840,
        -71,
        "c",
        "n = 840c-71",
        "(210c-16, 2(15c-1)(105c-8)(840c-71), 2(15c-1)(840c-71))",
        "mod 840, n = 120b-71, b = 7c",
        |c| triple(
            lin(210, c, -16),
            prod(&[Some(2), lin(15, c, -1), lin(105, c, -8), lin(840, c, -71)]),
            prod(&[Some(2), lin(15, c, -1), lin(840, c, -71)]),
        )
    ),
    linear!(
        25,
        4,
        -1,
        "u",
        "n = 4u-1",
        "(n(n+1)/2, n(n+1)/2, (n+1)/4)",
        "x = y, n | x",
        |u| {
            let n = lin(4, u, -1);
            let y = prod(&[n, lin(2, u, 0)]);
            triple(y, y, Some(u))
        }
    ),
    linear!(
        26,
        4,
        -1,
        "u",
        "n = 4u-1",
        "((n+1)/2, (n+1)/2, n(n+1)/4)",
        "x = y, n | z",
        |u| triple(lin(2, u, 0), lin(2, u, 0), prod(&[lin(4, u, -1), Some(u)]))
    ),
    linear!(
        27,
        4,
        -1,
        "u",
        "n = 4u-1",
        "(n(n+1)/4, (n+1)/4+1, ((n+1)/4)((n+1)/4+1))",
        "n | x, n | 4x/n - 1",
        |u| triple(
            prod(&[lin(4, u, -1), Some(u)]),
            lin(1, u, 1),
            prod(&[Some(u), lin(1, u, 1)])
        )
    ),
    corollary!(28, 1, 1, "n = 12w6-7", "w2 = 1, u5 = 1"),
    corollary!(29, 2, 2, "n = 28w6-23", "w2 = 1, u5 = 2"),
    corollary!(30, 3, 3, "n = 44w6-47", "w2 = 1, u5 = 3"),
    corollary!(
        31,
        4,
        10,
        "n = (16u5-4)w6+1-4u5(u5+1), 4 <= u5 <= 10",
        "w2 = 1, u5 = 4..10"
    ),
];

/// Looks up a family by id.
pub fn family(id: FamilyId) -> Result<&'static IdentityFamily> {
    FAMILIES
        .get((id.0 as usize).wrapping_sub(1))
        .ok_or_else(|| Error::InvalidInput(format!("unknown family {id}")))
}

/// A family that applies to `n`, with its solved-for parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMatch {
    pub family: FamilyId,
    pub params: Params,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Classification {
    /// Applicable families in ascending id order.
    pub matches: Vec<FamilyMatch>,
    /// Families whose applicability could not be decided (factorization gave up).
    pub unknown: Vec<FamilyId>,
}

impl Classification {
    pub fn contains(&self, id: FamilyId) -> bool {
        self.matches.iter().any(|m| m.family == id)
    }

    pub fn get(&self, id: FamilyId) -> Option<&FamilyMatch> {
        self.matches.iter().find(|m| m.family == id)
    }
}

fn solve_linear(n: u128, slope: u128, offset: i128) -> Option<u128> {
    let shifted = if offset >= 0 {
        n.checked_sub(offset as u128)?
    } else {
        n.checked_add(offset.unsigned_abs())?
    };
    (shifted % slope == 0 && shifted / slope >= 1).then_some(shifted / slope)
}

fn corollary_slope_offset(u5: u128) -> (u128, u128) {
    // n = slope·w6 - (4·u5·(u5+1) - 1)
    (16 * u5 - 4, 4 * u5 * (u5 + 1) - 1)
}

fn solve_corollary(n: u128, u5: u128) -> Option<u128> {
    let (slope, shift) = corollary_slope_offset(u5);
    let total = n.checked_add(shift)?;
    if total % slope != 0 {
        return None;
    }
    let w6 = total / slope;
    (w6 >= 1 && 4 * w6 > u5 + 1).then_some(w6)
}

/// Smallest prime factor congruent to 2 mod 3 of `(6l+1)(24l+1)`.
fn smallest_two_mod_three_factor(l: u128, factorizer: &Factorizer) -> Result<Option<u128>> {
    let small = factorizer.factorize(6 * l + 1)?;
    let big = factorizer.factorize(24 * l + 1)?;
    Ok(small
        .factors()
        .iter()
        .chain(big.factors())
        .map(|&(p, _)| p)
        .filter(|p| p % 3 == 2)
        .min())
}

/// Every family applicable to `n`, using the default factorizer for `F8`.
pub fn classify(n: u128) -> Result<Classification> {
    classify_with(n, &Factorizer::default())
}

pub fn classify_with(n: u128, factorizer: &Factorizer) -> Result<Classification> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let mut out = Classification::default();
    for fam in &FAMILIES {
        match fam.condition {
            Condition::Linear {
                slope,
                offset,
                param,
            } => {
                if let Some(t) = solve_linear(n, slope, offset) {
                    out.matches.push(FamilyMatch {
                        family: fam.id,
                        params: params([(param, t)]),
                    });
                }
            }
            Condition::Factor => {
                if n % 24 != 1 {
                    continue;
                }
                let l = (n - 1) / 24;
                match smallest_two_mod_three_factor(l, factorizer) {
                    Ok(Some(q)) => out.matches.push(FamilyMatch {
                        family: fam.id,
                        params: params([("l", l), ("b", (q - 2) / 3), ("factor", q)]),
                    }),
                    Ok(None) => {}
                    Err(e) if e.is_resource_limit() => out.unknown.push(fam.id),
                    Err(e) => return Err(e),
                }
            }
            Condition::Corollary { u5_min, u5_max } => {
                if let Some((u5, w6)) =
                    (u5_min..=u5_max).find_map(|u5| solve_corollary(n, u5).map(|w6| (u5, w6)))
                {
                    out.matches.push(FamilyMatch {
                        family: fam.id,
                        params: params([("u5", u5), ("w6", w6)]),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn violation(id: FamilyId, n: u128, reason: impl Into<String>) -> Error {
    Error::ConditionViolation {
        family: id.to_string(),
        n,
        reason: reason.into(),
    }
}

fn need(id: FamilyId, n: u128, p: &Params, key: &str) -> Result<u128> {
    p.get(key)
        .copied()
        .ok_or_else(|| violation(id, n, format!("missing parameter {key}")))
}

/// Instantiates family `id` for `n` and verifies the result.
pub fn apply_family(id: FamilyId, n: u128, p: &Params) -> Result<Decomposition> {
    let fam = family(id)?;
    let (t, kept) = match (fam.condition, fam.generator) {
        (
            Condition::Linear {
                slope,
                offset,
                param,
            },
            Generator::Linear(gen),
        ) => {
            let t = need(id, n, p, param)?;
            if t < 1 || lin(slope, t, offset) != Some(n) {
                return Err(violation(
                    id,
                    n,
                    format!("n != {} with {param} = {t}", fam.condition_text),
                ));
            }
            let [x, y, z] = gen(t).ok_or(Error::Overflow("identity triple"))?;
            (UnitTriple::new(x, y, z)?, params([(param, t)]))
        }
        (Condition::Factor, _) => {
            if n % 24 != 1 || n < 25 {
                return Err(violation(id, n, "n is not of the form 24l+1"));
            }
            let l = (n - 1) / 24;
            let b = need(id, n, p, "b")?;
            let q = 3 * b + 2;
            let x = 6 * l + 1;
            let nx = x.checked_mul(n).ok_or(Error::Overflow("(6l+1)(24l+1)"))?;
            if nx % q != 0 {
                return Err(violation(
                    id,
                    n,
                    format!("3b+2 = {q} does not divide (6l+1)(24l+1)"),
                ));
            }
            let f = nx / q;
            let y =
                prod(&[Some(q), Some(b + 1), Some(f)]).ok_or(Error::Overflow("identity triple"))?;
            let z = (b + 1)
                .checked_mul(f)
                .ok_or(Error::Overflow("identity triple"))?;
            (
                UnitTriple::new(x, y, z)?,
                params([("l", l), ("b", b), ("factor", q)]),
            )
        }
        (Condition::Corollary { u5_min, u5_max }, _) => {
            let u5 = need(id, n, p, "u5")?;
            let w6 = need(id, n, p, "w6")?;
            if !(u5_min..=u5_max).contains(&u5) || solve_corollary(n, u5) != Some(w6) {
                return Err(violation(
                    id,
                    n,
                    format!("n != {} with u5 = {u5}, w6 = {w6}", fam.condition_text),
                ));
            }
            let v4 = 4 * w6 - u5 - 1;
            let t = UnitTriple::new(
                u5.checked_mul(n)
                    .ok_or(Error::Overflow("identity triple"))?,
                v4.checked_mul(n)
                    .ok_or(Error::Overflow("identity triple"))?,
                u5 * v4,
            )?;
            (t, params([("u5", u5), ("w6", w6)]))
        }
        _ => unreachable!("family table pairs each condition with its generator"),
    };
    Decomposition::new(n, t, Method::Identity(id), kept)
}

/// First applicable family in id order, instantiated and verified.
pub fn solve_by_identity(n: u128, factorizer: &Factorizer) -> Result<Option<Decomposition>> {
    let c = classify_with(n, factorizer)?;
    match c.matches.first() {
        Some(m) => apply_family(m.family, n, &m.params).map(Some),
        None => Ok(None),
    }
}

/// Whether a residue class is covered by an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueStatus {
    Resolved(FamilyId),
    PossibleException,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueClassification {
    pub modulus: u128,
    pub residue: u128,
    pub status: ResidueStatus,
}

/// Families that make up the mod-120 chain; the mod-840 chain adds F17..F24.
const CHAIN_120: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 14, 15, 16];
const CHAIN_840: [u8; 8] = [17, 18, 19, 20, 21, 22, 23, 24];

/// Classifies every residue class mod 120 or mod 840 by the first chain
/// family that covers the whole class.
pub fn residue_atlas(modulus: u128) -> Result<Vec<ResidueClassification>> {
    let chain: Vec<u8> = match modulus {
        120 => CHAIN_120.to_vec(),
        840 => CHAIN_120.iter().chain(&CHAIN_840).copied().collect(),
        _ => {
            return Err(Error::InvalidInput(format!(
                "residue atlas is defined for modulus 120 or 840, got {modulus}"
            )))
        }
    };
    Ok((0..modulus)
        .map(|residue| {
            let covering = chain
                .iter()
                .map(|&k| &FAMILIES[k as usize - 1])
                .find(|fam| {
                    let Condition::Linear { slope, offset, .. } = fam.condition else {
                        return false;
                    };
                    modulus.is_multiple_of(slope)
                        && (residue as i128 - offset).rem_euclid(slope as i128) == 0
                });
            ResidueClassification {
                modulus,
                residue,
                status: covering.map_or(ResidueStatus::PossibleException, |f| {
                    ResidueStatus::Resolved(f.id)
                }),
            }
        })
        .collect())
}

/// Residues of the atlas that no chain family covers.
pub fn possible_exceptions(modulus: u128) -> Result<Vec<u128>> {
    Ok(residue_atlas(modulus)?
        .into_iter()
        .filter(|c| c.status == ResidueStatus::PossibleException)
        .map(|c| c.residue)
        .collect())
}

/// `families --list` table: id, condition, triple formula, derivation.
pub fn families_tsv() -> String {
    let mut s = String::from("id\tcondition\ttriple\tderivation\n");
    for f in &FAMILIES {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}",
            f.id, f.condition_text, f.formula, f.source
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::verify_triple;

    fn id(k: u8) -> FamilyId {
        FamilyId(k)
    }

    #[test]
    fn table_ids_are_dense_and_ordered() {
        for (i, f) in FAMILIES.iter().enumerate() {
            assert_eq!(f.id.0 as usize, i + 1);
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(6).unwrap();
        assert_eq!(c.get(id(1)).unwrap().params["m"], 3);
        assert_eq!(c.get(id(2)).unwrap().params["m"], 2);

        let c = classify(97).unwrap();
        let f8 = c.get(id(8)).unwrap();
        assert_eq!(f8.params["b"], 1);
        assert_eq!(f8.params["factor"], 5);

        let c = classify(841).unwrap();
        assert!((17..=24).all(|k| !c.contains(id(k))));
        let atlas = residue_atlas(840).unwrap();
        assert_eq!(atlas[841 % 840].status, ResidueStatus::PossibleException);
    }

    #[test]
    fn classify_is_in_ascending_id_order() {
        for n in 2..3000u128 {
            let c = classify(n).unwrap();
            assert!(c.matches.windows(2).all(|w| w[0].family < w[1].family));
        }
    }

    #[test]
    fn apply_examples() {
        let d = apply_family(id(4), 7, &params([("m", 1)])).unwrap();
        assert_eq!(d.triple(), UnitTriple::new(2, 28, 28).unwrap());
        assert_eq!(d.method(), Method::Identity(id(4)));

        let d = apply_family(id(8), 97, &params([("b", 1)])).unwrap();
        assert_eq!(d.triple(), UnitTriple::new(25, 4850, 970).unwrap());

        let d = apply_family(id(9), 33, &params([("b", 1)])).unwrap();
        assert_eq!(d.triple(), UnitTriple::new(10, 165, 66).unwrap());

        let d = apply_family(id(17), 241, &params([("c", 1)])).unwrap();
        assert_eq!(d.triple(), UnitTriple::new(63, 30366, 1446).unwrap());
    }

    #[test]
    fn condition_violations() {
        assert!(matches!(
            apply_family(id(4), 9, &params([("m", 1)])),
            Err(Error::ConditionViolation { .. })
        ));
        assert!(matches!(
            apply_family(id(4), 7, &Params::new()),
            Err(Error::ConditionViolation { .. })
        ));
        // 7 is not 2 mod 3 and does not divide (6·4+1)·97
        assert!(apply_family(id(8), 97, &params([("b", 2)])).is_err());
        assert!(apply_family(id(8), 98, &params([("b", 1)])).is_err());
        assert!(apply_family(id(28), 5, &params([("u5", 2), ("w6", 1)])).is_err());
        assert!(family(FamilyId(32)).is_err());
    }

    #[test]
    fn f8_accepts_factors_of_either_number() {
        // l = 6: 6l+1 = 37, 24l+1 = 145 = 5·29; the factor sits in 24l+1
        let c = classify(145).unwrap();
        let m = c.get(id(8)).unwrap();
        assert_eq!(m.params["factor"], 5);
        apply_family(id(8), 145, &m.params).unwrap();
        // l = 2: 13 · 49 has no factor 2 mod 3
        assert!(!classify(49).unwrap().contains(id(8)));
    }

    #[test]
    fn f8_with_budget_exhaustion_is_unknown() {
        // 24l+1 is a product of two primes = 5 mod 24, out of reach with a budget of 1
        let n = 2_147_483_693u128 * 2_147_483_813;
        assert_eq!(n % 24, 1);
        let c = classify_with(n, &Factorizer::new(1, 7)).unwrap();
        assert!(c.unknown.contains(&id(8)));
        assert!(!c.contains(id(8)));
    }

    #[test]
    fn corollary_entries() {
        let c = classify(5).unwrap();
        let m = c.get(id(28)).unwrap();
        assert_eq!((m.params["u5"], m.params["w6"]), (1, 1));
        let d = apply_family(id(28), 5, &m.params).unwrap();
        assert_eq!(d.triple(), UnitTriple::new(5, 10, 2).unwrap());
        // u5 = 10, w6 = 3: n = 156·3 - 439 = 29, v4 = 1
        let c = classify(29).unwrap();
        assert!(c.matches.iter().any(|m| m.family == id(31)));
    }

    #[test]
    fn atlas_exceptions() {
        assert_eq!(possible_exceptions(120).unwrap(), vec![1, 49]);
        assert_eq!(
            possible_exceptions(840).unwrap(),
            vec![1, 121, 169, 289, 361, 529]
        );
        let atlas = residue_atlas(840).unwrap();
        assert_eq!(atlas[769].status, ResidueStatus::Resolved(id(24)));
        assert!(residue_atlas(780).is_err());
    }

    #[test]
    fn atlas_families_really_cover_their_classes() {
        for modulus in [120u128, 840] {
            for c in residue_atlas(modulus).unwrap() {
                if let ResidueStatus::Resolved(fid) = c.status {
                    for k in 1..5u128 {
                        let n = c.residue + k * modulus;
                        let m = classify(n).unwrap();
                        let hit = m.get(fid).expect("family should match its class");
                        let d = apply_family(fid, n, &hit.params).unwrap();
                        assert!(verify_triple(n, &d.triple()));
                    }
                }
            }
        }
    }

    #[test]
    fn tsv_lists_every_family() {
        let tsv = families_tsv();
        assert_eq!(tsv.lines().count(), 32);
        assert!(tsv.lines().all(|l| l.split('\t').count() == 4));
    }
}
