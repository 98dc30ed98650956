use num_bigint::BigUint;
use num_traits::One;
use std::collections::HashMap;

use super::dims::factorial;

/// A conjugacy class of `S_n`, cycles in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType {
    pub cycles: Vec<usize>,
    pub class_size: BigUint,
}

impl CycleType {
    pub fn new(mut cycles: Vec<usize>) -> CycleType {
        cycles.retain(|&c| c > 0);
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        let n: usize = cycles.iter().sum();
        let class_size = factorial(n) / centralizer_order(&cycles);
        CycleType { cycles, class_size }
    }

    pub fn identity(n: usize) -> CycleType {
        CycleType::new(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.cycles.iter().sum()
    }
}

/// `z_c = Π_i i^{m_i} m_i!`.
pub fn centralizer_order(cycles: &[usize]) -> BigUint {
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for &c in cycles {
        *mult.entry(c).or_default() += 1;
    }
    let mut z = BigUint::one();
    for (&len, &m) in &mult {
        z *= BigUint::from(len).pow(m as u32) * factorial(m);
    }
    z
}

/// `z_c` in `u128`; exact for `n <= 34`.
pub fn centralizer_order_u128(cycles: &[usize]) -> u128 {
    let mut z: u128 = 1;
    let mut i = 0;
    while i < cycles.len() {
        let len = cycles[i];
        let mut m = 0u128;
        while i < cycles.len() && cycles[i] == len {
            m += 1;
            z = z.checked_mul(len as u128 * m).expect("centralizer order overflows u128");
            i += 1;
        }
    }
    z
}

/// All partitions of `n` as non-increasing cycle lists, in reverse-lexicographic order
/// (`[n]` first, `[1,…,1]` last).
pub fn enumerate_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    part_rec(n, n, &mut cur, &mut out);
    out
}

fn part_rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rem == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=max.min(rem)).rev() {
        cur.push(p);
        part_rec(rem - p, p, cur, out);
        cur.pop();
    }
}

pub fn enumerate_cycle_types(n: usize) -> Vec<CycleType> {
    enumerate_partitions(n).into_iter().map(CycleType::new).collect()
}

/// Cycle lengths of a permutation given in one-line notation (`perm[i]` is the image of `i`).
pub fn cycle_type_of(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    cycles
}

/// Advances to the next permutation in lexicographic order; false after the last one.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=12).map(|n| enumerate_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert_eq!(enumerate_partitions(30).len(), 5604);
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 0..=10 {
            let s = enumerate_cycle_types(n).iter().fold(BigUint::zero(), |a, c| a + &c.class_size);
            assert_eq!(s, factorial(n));
        }
    }

    #[test]
    fn class_sizes_match_permutation_census() {
        for n in 1..=6 {
            let mut census: HashMap<Vec<usize>, u64> = HashMap::new();
            let mut p: Vec<usize> = (0..n).collect();
            loop {
                *census.entry(cycle_type_of(&p)).or_default() += 1;
                if !next_permutation(&mut p) {
                    break;
                }
            }
            for c in enumerate_cycle_types(n) {
                assert_eq!(BigUint::from(census[&c.cycles]), c.class_size);
            }
        }
    }

    #[test]
    fn u128_centralizer_matches_big() {
        for cyc in enumerate_partitions(30) {
            assert_eq!(BigUint::from(centralizer_order_u128(&cyc)), centralizer_order(&cyc));
        }
    }
}
