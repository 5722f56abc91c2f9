use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Memoized counts `a_m` of partitions of `m` into powers of two.
///
/// `a_0 = 1`, `a_m = a_{m-1}` for odd `m`, `a_m = a_{m-1} + a_{m/2}` for even
/// `m >= 2`. The table is filled bottom-up and owned by the caller, so
/// concurrent tasks each keep their own counter.
#[derive(Clone, Debug)]
pub struct PartitionCounter {
    memo: Vec<BigUint>,
}

impl Default for PartitionCounter {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionCounter {
    pub fn new() -> Self {
        PartitionCounter {
            memo: vec![BigUint::one()],
        }
    }

    pub fn get(&mut self, m: usize) -> &BigUint {
        while self.memo.len() <= m {
            let j = self.memo.len();
            let next = if j % 2 == 1 {
                self.memo[j - 1].clone()
            } else {
                &self.memo[j - 1] + &self.memo[j / 2]
            };
            self.memo.push(next);
        }
        &self.memo[m]
    }

    /// `a_m` as a machine integer; panics if it does not fit in `usize`
    /// (first happens past `m = 10^4`).
    pub fn get_usize(&mut self, m: usize) -> usize {
        self.get(m)
            .to_usize()
            .unwrap_or_else(|| panic!("a_{m} does not fit in usize"))
    }

    /// `r_n = a_{2(n-1)}`.
    pub fn r(&mut self, n: u32) -> &BigUint {
        assert!(n >= 1, "r_n is defined for n >= 1");
        self.get(2 * (n as usize - 1))
    }
}

/// Number of partitions of `m` into powers of two.
pub fn partitions_pow2(m: usize) -> BigUint {
    PartitionCounter::new().get(m).clone()
}

/// `r_n`, the number of partitions of `2(n-1)` into powers of two.
pub fn r(n: u32) -> BigUint {
    PartitionCounter::new().r(n).clone()
}

/// `r_n` as a machine integer, for the ranges where boxes are materialized.
pub fn r_usize(n: u32) -> usize {
    let mut pc = PartitionCounter::new();
    pc.get_usize(2 * (n as usize - 1))
}
