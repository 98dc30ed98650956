//! Irreducible characters of the symmetric group by the Murnaghan–Nakayama rule.
//!
//! Shapes are handled as beta-sets (first-column hook lengths): a rim hook of length `r`
//! is a bead moving by `r`, with sign `(−1)^{beads jumped over}`.

use super::cycles::{enumerate_partitions, CycleType};
use super::young::{enumerate_young, YoungIndex};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

fn beta_set(decreasing: &[usize]) -> Vec<usize> {
    let k = decreasing.len();
    decreasing.iter().enumerate().map(|(i, &m)| m + (k - 1 - i)).collect()
}

fn beads_between(beta: &[usize], lo: usize, hi: usize) -> usize {
    beta.iter().filter(|&&b| b > lo && b < hi).count()
}

/// Memo for `χ^λ(c)` keyed on (beta-set, remaining cycles). Owned per caller.
#[derive(Default)]
pub struct CharacterCache {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterCache {
    pub fn new() -> CharacterCache {
        CharacterCache::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `χ^λ(c)`; `λ` and `c` must have the same weight.
    pub fn character(&mut self, lambda: &YoungIndex, c: &CycleType) -> BigInt {
        assert_eq!(lambda.n(), c.n(), "shape and class must have equal weight");
        let mut beta = beta_set(&lambda.decreasing_padded());
        beta.sort_unstable();
        self.remove_hooks(beta, &c.cycles)
    }

    fn remove_hooks(&mut self, beta: Vec<usize>, cycles: &[usize]) -> BigInt {
        let Some((&r, rest)) = cycles.split_first() else {
            return BigInt::one();
        };
        let key = (beta, cycles.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let beta = &key.0;
        let mut total = BigInt::zero();
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let sign = if beads_between(beta, b - r, b).is_multiple_of(2) { 1 } else { -1 };
            let mut next = beta.clone();
            next[idx] = b - r;
            next.sort_unstable();
            total += sign * self.remove_hooks(next, rest);
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// One-off `χ^λ(c)` with a fresh memo.
pub fn sn_character(lambda: &YoungIndex, c: &CycleType) -> BigInt {
    CharacterCache::new().character(lambda, c)
}

/// `χ^λ(c)` for every class `c` of `S_n` and every `λ` with at most `d` rows.
///
/// Built forward: a depth-first walk over cycle lists expands `p_{c_1} ⋯ p_{c_k}` in Schur
/// functions by adding rim hooks, so shared cycle prefixes are computed once. Shapes with
/// more than `d` rows never return to `<= d` rows and are dropped (the beta-set has `d` beads).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub n: usize,
    pub d: usize,
    pub shapes: Vec<YoungIndex>,
    /// Cycle lists in `enumerate_partitions(n)` order.
    pub classes: Vec<Vec<usize>>,
    /// `values[class][shape]`.
    pub values: Vec<Vec<i128>>,
}

type BeadState = BTreeMap<Vec<usize>, i128>;

impl CharacterTable {
    pub fn new(n: usize, d: usize) -> CharacterTable {
        let shapes = enumerate_young(n, d);
        let index: HashMap<Vec<usize>, usize> = shapes
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut b = beta_set(&s.decreasing_padded());
                b.sort_unstable();
                (b, i)
            })
            .collect();
        let classes = enumerate_partitions(n);
        let mut values = Vec::with_capacity(classes.len());
        let mut start = BeadState::new();
        start.insert((0..d).collect(), 1);
        let mut cycles = Vec::new();
        walk(n, n, &start, &mut cycles, &index, shapes.len(), &mut values);
        debug_assert_eq!(values.len(), classes.len());
        CharacterTable { n, d, shapes, classes, values }
    }
}

fn add_hook(state: &BeadState, r: usize) -> BeadState {
    let mut out = BeadState::new();
    for (beta, &coef) in state {
        for (idx, &b) in beta.iter().enumerate() {
            if beta.contains(&(b + r)) {
                continue;
            }
            let sign = if beads_between(beta, b, b + r).is_multiple_of(2) { 1 } else { -1 };
            let mut next = beta.clone();
            next[idx] = b + r;
            next.sort_unstable();
            *out.entry(next).or_insert(0) += sign * coef;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn walk(
    rem: usize,
    max: usize,
    state: &BeadState,
    cycles: &mut Vec<usize>,
    index: &HashMap<Vec<usize>, usize>,
    nshapes: usize,
    out: &mut Vec<Vec<i128>>,
) {
    if rem == 0 {
        let mut row = vec![0i128; nshapes];
        for (beta, &v) in state {
            row[index[beta]] = v;
        }
        out.push(row);
        return;
    }
    for r in (1..=max.min(rem)).rev() {
        let next = add_hook(state, r);
        cycles.push(r);
        walk(rem - r, r, &next, cycles, index, nshapes, out);
        cycles.pop();
    }
}
