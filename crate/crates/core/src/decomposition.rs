//! The decomposition data model and the exact verifier.
//!
//! Nothing here uses rationals or floats: a triple decomposes `4/n` iff
//! `n·(xy + yz + zx) = 4·xyz`, checked in `u128` when it fits and in
//! arbitrary precision otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three positive denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitTriple {
    pub x: u128,
    pub y: u128,
    pub z: u128,
}

impl UnitTriple {
    pub fn new(x: u128, y: u128, z: u128) -> Result<Self> {
        if x == 0 || y == 0 || z == 0 {
            return Err(Error::InvalidInput(format!(
                "denominators must be positive, got ({x}, {y}, {z})"
            )));
        }
        Ok(UnitTriple { x, y, z })
    }

    /// Sorted ascending.
    pub fn canonical(self) -> Self {
        let mut v = [self.x, self.y, self.z];
        v.sort_unstable();
        UnitTriple {
            x: v[0],
            y: v[1],
            z: v[2],
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.x <= self.y && self.y <= self.z
    }

    /// Multiplies every denominator by `m` (a solution for `n` becomes one for `m·n`).
    pub fn scaled(&self, m: u128) -> Result<Self> {
        let s = |v: u128| v.checked_mul(m).ok_or(Error::Overflow("scaled triple"));
        UnitTriple::new(s(self.x)?, s(self.y)?, s(self.z)?)
    }
}

impl fmt::Display for UnitTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn canonicalize(t: UnitTriple) -> UnitTriple {
    t.canonical()
}

/// `true` iff `4/n = 1/x + 1/y + 1/z` exactly.
pub fn verify_triple(n: u128, t: &UnitTriple) -> bool {
    if n == 0 || t.x == 0 || t.y == 0 || t.z == 0 {
        return false;
    }
    if let Some(ok) = verify_narrow(n, t) {
        return ok;
    }
    let (n, x, y, z) = (
        BigUint::from(n),
        BigUint::from(t.x),
        BigUint::from(t.y),
        BigUint::from(t.z),
    );
    let lhs = &n * (&x * &y + &y * &z + &z * &x);
    let rhs = BigUint::from(4u8) * x * y * z;
    lhs == rhs
}

fn verify_narrow(n: u128, t: &UnitTriple) -> Option<bool> {
    let xy = t.x.checked_mul(t.y)?;
    let yz = t.y.checked_mul(t.z)?;
    let zx = t.z.checked_mul(t.x)?;
    let lhs = n.checked_mul(xy.checked_add(yz)?.checked_add(zx)?)?;
    let rhs = xy.checked_mul(t.z)?.checked_mul(4)?;
    Some(lhs == rhs)
}

/// Range of the smallest denominator of any canonical solution:
/// `floor(n/4) + 1 <= x <= floor(3n/4)`.
pub fn x_bounds(n: u128) -> (u128, u128) {
    (n / 4 + 1, n / 4 * 3 + (n % 4) * 3 / 4)
}

/// Identifier of an identity family, `F1` through `F31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId(pub u8);

impl FamilyId {
    pub const MAX: u8 = 31;
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix(['F', 'f']).unwrap_or(s);
        match digits.parse::<u8>() {
            Ok(k) if (1..=FamilyId::MAX).contains(&k) => Ok(FamilyId(k)),
            _ => Err(Error::InvalidInput(format!("unknown family id {s:?}"))),
        }
    }
}

/// How a decomposition was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Identity(FamilyId),
    Split,
    MultiplierSplit,
    Parametric,
    Corollary,
    Oracle,
    Manual,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Identity(id) => write!(f, "identity:{id}"),
            Method::Split => f.write_str("split"),
            Method::MultiplierSplit => f.write_str("multiplier-split"),
            Method::Parametric => f.write_str("parametric"),
            Method::Corollary => f.write_str("corollary"),
            Method::Oracle => f.write_str("oracle"),
            Method::Manual => f.write_str("manual"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(id) = s.strip_prefix("identity:") {
            return Ok(Method::Identity(id.parse()?));
        }
        Ok(match s {
            "split" => Method::Split,
            "multiplier-split" => Method::MultiplierSplit,
            "parametric" => Method::Parametric,
            "corollary" => Method::Corollary,
            "oracle" => Method::Oracle,
            "manual" => Method::Manual,
            _ => return Err(Error::InvalidInput(format!("unknown method {s:?}"))),
        })
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Witness parameters, e.g. `r`, `a`, `r1` or `w5`, `u5`, `w2`.
pub type Params = BTreeMap<String, u128>;

/// Builds a [`Params`] map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, u128); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// A verified decomposition of `4/n` together with how it was found.
///
/// The only constructor verifies the triple; an unverified triple can not be
/// represented. Deserialization goes through the same check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionRecord", into = "DecompositionRecord")]
pub struct Decomposition {
    n: u128,
    triple: UnitTriple,
    method: Method,
    params: Params,
}

impl Decomposition {
    pub fn new(n: u128, triple: UnitTriple, method: Method, params: Params) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if !verify_triple(n, &triple) {
            return Err(Error::VerificationFailed {
                n,
                x: triple.x,
                y: triple.y,
                z: triple.z,
                method: method.to_string(),
            });
        }
        Ok(Decomposition {
            n,
            triple,
            method,
            params,
        })
    }

    pub fn n(&self) -> u128 {
        self.n
    }

    pub fn triple(&self) -> UnitTriple {
        self.triple
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<u128> {
        self.params.get(key).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition record always serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.triple;
        write!(
            f,
            "4/{} = 1/{} + 1/{} + 1/{}  [{}]",
            self.n, t.x, t.y, t.z, self.method
        )
    }
}

/// Flat JSON shape `{"n", "x", "y", "z", "method", "params"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub n: u128,
    pub x: u128,
    pub y: u128,
    pub z: u128,
    pub method: Method,
    #[serde(default)]
    pub params: Params,
}

impl TryFrom<DecompositionRecord> for Decomposition {
    type Error = Error;

    fn try_from(r: DecompositionRecord) -> Result<Self> {
        Decomposition::new(r.n, UnitTriple::new(r.x, r.y, r.z)?, r.method, r.params)
    }
}

impl From<Decomposition> for DecompositionRecord {
    fn from(d: Decomposition) -> Self {
        DecompositionRecord {
            n: d.n,
            x: d.triple.x,
            y: d.triple.y,
            z: d.triple.z,
            method: d.method,
            params: d.params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(x: u128, y: u128, z: u128) -> UnitTriple {
        UnitTriple::new(x, y, z).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(verify_triple(2, &t(1, 2, 2)));
        assert!(verify_triple(409, &t(104, 6544, 85072)));
        assert!(!verify_triple(13, &t(4, 26, 53)));
        assert!(verify_triple(13, &t(4, 26, 52)));
    }

    #[test]
    fn verify_wide_products() {
        // n·x·y·z is about 10^40 here, beyond u128
        assert!(verify_triple(
            1_134_241,
            &t(283_561, 107_668_961_166, 25_086_867_951_678)
        ));
        assert!(!verify_triple(
            1_134_241,
            &t(283_561, 107_668_961_166, 25_086_867_951_679)
        ));
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(t(52, 4, 26)), t(4, 26, 52));
        assert_eq!(canonicalize(t(2, 2, 1)), t(1, 2, 2));
        assert_eq!(canonicalize(t(104, 85072, 6544)), t(104, 6544, 85072));
    }

    #[test]
    fn x_bounds_examples() {
        assert_eq!(x_bounds(25), (7, 18));
        assert_eq!(x_bounds(13), (4, 9));
        assert_eq!(x_bounds(2), (1, 1));
        for n in 2..2000u128 {
            assert_eq!(x_bounds(n), (n / 4 + 1, 3 * n / 4));
        }
    }

    #[test]
    fn zero_denominators_rejected() {
        assert!(UnitTriple::new(0, 1, 1).is_err());
        let bad = UnitTriple { x: 0, y: 1, z: 1 };
        assert!(!verify_triple(4, &bad));
    }

    #[test]
    fn construction_refuses_unverified_triples() {
        let err = Decomposition::new(13, t(4, 26, 53), Method::Manual, Params::new()).unwrap_err();
        assert!(matches!(err, Error::VerificationFailed { n: 13, .. }));
        assert!(Decomposition::new(1, t(1, 1, 1), Method::Manual, Params::new()).is_err());
    }

    #[test]
    fn json_record_shape() {
        let d = Decomposition::new(
            409,
            t(104, 6544, 85072),
            Method::MultiplierSplit,
            params([("r", 2), ("r1", 2), ("a", 1), ("b", 13)]),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["n"], 409);
        assert_eq!(v["x"], 104);
        assert_eq!(v["y"], 6544);
        assert_eq!(v["z"], 85072);
        assert_eq!(v["method"], "multiplier-split");
        assert_eq!(v["params"]["r1"], 2);
        assert_eq!(Decomposition::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn tampered_record_is_rejected() {
        let s = r#"{"n":13,"x":4,"y":26,"z":53,"method":"split","params":{}}"#;
        assert!(Decomposition::from_json(s).is_err());
        let s = r#"{"n":13,"x":4,"y":26,"z":52,"method":"identity:F99","params":{}}"#;
        assert!(Decomposition::from_json(s).is_err());
    }

    #[test]
    fn method_round_trips() {
        for m in [
            Method::Identity(FamilyId(27)),
            Method::Split,
            Method::MultiplierSplit,
            Method::Parametric,
            Method::Corollary,
            Method::Oracle,
            Method::Manual,
        ] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }

    proptest! {
        #[test]
        fn permutation_and_scaling_invariance(
            n in 2u128..5000,
            m in 1u128..1000,
            perm in 0usize..6,
        ) {
            prop_assume!(n % 4 != 1);
            let base = if n % 2 == 0 {
                t(n, n, n / 2)
            } else {
                t(n / 4 + 1, 2 * n * (n / 4 + 1), 2 * n * (n / 4 + 1))
            };
            let v = [base.x, base.y, base.z];
            let p = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
            let permuted = t(v[p[0]], v[p[1]], v[p[2]]);
            prop_assert!(verify_triple(n, &base));
            prop_assert!(verify_triple(n, &permuted));
            prop_assert!(verify_triple(n * m, &base.scaled(m).unwrap()));
        }
    }
}
