use super::Factorization;
use crate::error::{Error, Result};

/// Divisor lists longer than this are refused by [`divisors`].
pub const DEFAULT_DIVISOR_CAP: u64 = 1_000_000;

/// All divisors in increasing order, refusing more than [`DEFAULT_DIVISOR_CAP`].
pub fn divisors(f: &Factorization) -> Result<Vec<u128>> {
    divisors_capped(f, DEFAULT_DIVISOR_CAP)
}

pub fn divisors_capped(f: &Factorization, cap: u64) -> Result<Vec<u128>> {
    let count = f.divisor_count();
    if count > cap as u128 {
        return Err(Error::DivisorCapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    out.push(1u128);
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Divisors `<= bound` in increasing order. Never materializes the larger ones,
/// so it stays cheap on very smooth numbers as long as the bound is small.
pub fn divisors_up_to(f: &Factorization, bound: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    if bound == 0 {
        return Vec::new();
    }
    for &(p, e) in f.factors() {
        if p > bound {
            break;
        }
        let len = out.len();
        for i in 0..len {
            let mut d = out[i];
            for _ in 0..e {
                match d.checked_mul(p) {
                    Some(v) if v <= bound => {
                        d = v;
                        out.push(d);
                    }
                    _ => break,
                }
            }
        }
    }
    out.sort_unstable();
    out
}
