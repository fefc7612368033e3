//! The twelve hard cases `n = 24l + 1` (the plain split exceptions for
//! `l <= 10^5`) with reference multiplier-split decompositions.

use serde::Serialize;

use crate::decomposition::{verify_triple, UnitTriple};
use crate::splitsearch::SplitWitness;

#[derive(Debug, Clone, Copy)]
pub struct GoldenItem {
    pub label: &'static str,
    pub l: u128,
    /// `n` as printed in the item's concluding line; two items misprint it.
    pub stated_n: u128,
    pub x: u128,
    pub y: u128,
    pub z: u128,
    pub r1: u128,
    pub a: u128,
    pub b: u128,
}

#[allow(clippy::too_many_arguments)]
const fn item(
    label: &'static str,
    l: u128,
    stated_n: u128,
    x: u128,
    y: u128,
    z: u128,
    r1: u128,
    a: u128,
    b: u128,
) -> GoldenItem {
    GoldenItem {
        label,
        l,
        stated_n,
        x,
        y,
        z,
        r1,
        a,
        b,
    }
}

#[rustfmt::skip]
pub static GOLDEN: [GoldenItem; 12] = [
    item("i",    17,    409,     104,    85072,          6544,         2,  1,  13),
    item("ii",   24,    577,     145,    167330,         33466,        2,  1,  5),
    item("iii",  232,   5569,    1394,   46579116,       1136076,      6,  1,  41),
    item("iv",   400,   9601,    2405,   46180810,       1248130,      2,  1,  37),
    item("v",    997,   23929,   5984,   107393352,      25269024,     3,  4,  17),
    item("vi",   3477,  83449,   20865,  5803877950,     162725550,    10, 3,  107),
    item("vii",  4250,  102001,  25502,  15607377012,    380667732,    6,  1,  41),
    item("viii", 13734, 102001,  82405,  54324177770,    10864835554,  2,  1,  5),
    item("ix",   29680, 712321,  178086, 190281596409,   5680047654,   3,  2,  67),
    item("x",    47260, 1134241, 283561, 25086867951678, 107668961166, 78, 1,  233),
    item("xi",   71842, 1724209, 431054, 1486454372572,  114342644044, 2,  1,  13),
    item("xii",  71925, 1724209, 431566, 98022323785,    13447105790,  5,  38, 277),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenResult {
    pub label: &'static str,
    pub l: u128,
    pub n: u128,
    pub triple: UnitTriple,
    /// The triple decomposes `4/n` for `n = 24l + 1`.
    pub verified: bool,
    /// The `(r1, a, b)` split rebuilds exactly this triple.
    pub replayed: bool,
    /// Set when the printed `n` is not `24l + 1`.
    pub label_mismatch: Option<String>,
}

impl GoldenResult {
    pub fn passed(&self) -> bool {
        self.verified && self.replayed
    }
}

pub fn check(it: &GoldenItem) -> GoldenResult {
    let n = 24 * it.l + 1;
    let m = 6 * it.l;
    let triple = UnitTriple {
        x: it.x,
        y: it.y,
        z: it.z,
    };
    let r = it.x.checked_sub(m).filter(|&r| r >= 1);
    let replayed = r.is_some_and(|r| {
        it.a + it.b == (4 * r - 1) * it.r1
            && SplitWitness::new(r, it.a, it.b, it.r1, 1)
                .triple(n, m)
                .is_ok_and(|t| t.canonical() == triple.canonical())
    });
    GoldenResult {
        label: it.label,
        l: it.l,
        n,
        triple,
        verified: verify_triple(n, &triple),
        replayed,
        label_mismatch: (it.stated_n != n)
            .then(|| format!("stated 4/{} but the computation is for 4/{n}", it.stated_n)),
    }
}

pub fn golden_suite() -> Vec<GoldenResult> {
    GOLDEN.iter().map(check).collect()
}
