//! Exhaustive enumeration of canonical solutions for small `n`.
//!
//! For each `x` in [`x_bounds`], the remainder `4/n - 1/x = num/den` (lowest
//! terms) must be `1/y + 1/z` with `x <= y <= z`. Then `1/y < num/den` and
//! `2/y >= num/den`, so `den/num < y <= 2·den/num`, and `z` is forced.

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{x_bounds, UnitTriple};
use crate::exactmath::gcd;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub n: u128,
    /// Canonical triples in lexicographic order.
    pub solutions: Vec<UnitTriple>,
    /// `false` when `max_solutions` cut the enumeration short.
    pub exhausted: bool,
}

// above this, unbounded enumeration is spread over threads
const PARALLEL_FROM: u128 = 2_000;

fn solutions_for_x(n: u128, x: u128, limit: usize, out: &mut Vec<UnitTriple>) {
    let num = 4 * x - n;
    let den = n * x;
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    let lo = (den / num + 1).max(x);
    let hi = 2 * den / num;
    for y in lo..=hi {
        if out.len() >= limit {
            return;
        }
        let q = num * y - den;
        if (den * y) % q == 0 {
            let z = den * y / q;
            if z >= y {
                out.push(UnitTriple { x, y, z });
            }
        }
    }
}

/// Every canonical solution, or the first `max_solutions` of them.
pub fn enumerate_all(n: u128, max_solutions: Option<usize>) -> OracleResult {
    assert!(n >= 2, "enumerate_all needs n >= 2");
    let (lo, hi) = x_bounds(n);
    let limit = max_solutions.unwrap_or(usize::MAX);
    let solutions = if max_solutions.is_none() && n >= PARALLEL_FROM {
        (lo as u64..=hi as u64)
            .into_par_iter()
            .map(|x| {
                let mut v = Vec::new();
                solutions_for_x(n, x as u128, usize::MAX, &mut v);
                v
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        let mut v = Vec::new();
        for x in lo..=hi {
            if v.len() >= limit {
                break;
            }
            solutions_for_x(n, x, limit, &mut v);
        }
        v
    };
    let exhausted = solutions.len() < limit || max_solutions.is_none();
    OracleResult {
        n,
        solutions,
        exhausted,
    }
}

/// Number of canonical solutions.
pub fn count_solutions(n: u128) -> u64 {
    enumerate_all(n, None).solutions.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::verify_triple;

    fn t(x: u128, y: u128, z: u128) -> UnitTriple {
        UnitTriple::new(x, y, z).unwrap()
    }

    /// Independent of `x_bounds` and of the reduced-fraction bounds above:
    /// every `x` up to `n`, `y` up to `2nx/(4x-n)`, `z` solved from the
    /// unreduced equation.
    fn naive(n: u128) -> Vec<UnitTriple> {
        let mut out = Vec::new();
        for x in 1..=n {
            if 4 * x <= n {
                continue;
            }
            let y_max = 2 * n * x / (4 * x - n);
            for y in x..=y_max {
                let num = 4 * x * y;
                let sub = n * y + n * x;
                if num <= sub {
                    continue;
                }
                let zden = num - sub;
                if (n * x * y).is_multiple_of(zden) {
                    let z = n * x * y / zden;
                    if z >= y {
                        out.push(t(x, y, z));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn examples() {
        assert!(enumerate_all(2, None).solutions.contains(&t(1, 2, 2)));
        let five = enumerate_all(5, None).solutions;
        assert!(five.contains(&t(2, 4, 20)) && five.contains(&t(2, 5, 10)));
        assert_eq!(
            enumerate_all(13, None).solutions,
            vec![t(4, 18, 468), t(4, 20, 130), t(4, 26, 52), t(5, 10, 130)]
        );
        assert!(count_solutions(2) >= 1);
        assert!(enumerate_all(3, None).solutions.contains(&t(1, 4, 12)));
    }

    #[test]
    fn contains_the_hard_409_triple() {
        let r = enumerate_all(409, None);
        assert!(r.exhausted);
        assert!(r.solutions.contains(&t(104, 6544, 85072)));
    }

    #[test]
    fn truncation() {
        let r = enumerate_all(13, Some(2));
        assert_eq!(r.solutions.len(), 2);
        assert!(!r.exhausted);
        let all = enumerate_all(13, None);
        assert_eq!(&all.solutions[..2], &r.solutions[..]);
        let r = enumerate_all(13, Some(10_000));
        assert!(r.exhausted);
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        for n in 2..=200u128 {
            let fast = enumerate_all(n, None);
            assert_eq!(fast.solutions, naive(n), "n = {n}");
            assert!(fast
                .solutions
                .iter()
                .all(|s| verify_triple(n, s) && s.is_canonical()));
            assert!(fast.solutions.windows(2).all(|w| w[0] < w[1]));
            let (lo, hi) = x_bounds(n);
            assert!(fast.solutions.iter().all(|s| (lo..=hi).contains(&s.x)));
        }
    }

    #[test]
    fn parallel_path_matches_sequential() {
        let n = 2_017;
        let par = enumerate_all(n, None).solutions;
        let mut seq = Vec::new();
        let (lo, hi) = x_bounds(n);
        for x in lo..=hi {
            solutions_for_x(n, x, usize::MAX, &mut seq);
        }
        assert_eq!(par, seq);
    }
}
