use super::Factorization;

/// Smallest-prime-factor table for fast factorization of small integers.
#[derive(Debug, Clone)]
pub struct SmallFactorTable {
    spf: Vec<u32>,
}

impl SmallFactorTable {
    /// Covers every integer in `1..=limit`.
    pub fn new(limit: u32) -> Self {
        let limit = limit.max(1) as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if let Some(start) = i.checked_mul(i).filter(|&s| s <= limit) {
                    for j in (start..=limit).step_by(i) {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                    }
                }
            }
        }
        SmallFactorTable { spf }
    }

    pub fn limit(&self) -> u128 {
        (self.spf.len() - 1) as u128
    }

    /// `None` when `n` is outside the table.
    pub fn factorize(&self, n: u128) -> Option<Factorization> {
        if n == 0 || n > self.limit() {
            return None;
        }
        let mut m = n as usize;
        let mut pairs: Vec<(u128, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p as u128, e));
        }
        Factorization::from_prime_powers(pairs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::factorize;

    #[test]
    fn agrees_with_general_factorizer() {
        let t = SmallFactorTable::new(20_000);
        for n in 1..=20_000u128 {
            assert_eq!(t.factorize(n).unwrap(), factorize(n).unwrap());
        }
        assert!(t.factorize(20_001).is_none());
    }
}
