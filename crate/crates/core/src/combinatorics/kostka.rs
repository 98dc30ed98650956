use super::young::YoungIndex;
use std::collections::HashMap;

/// Kostka numbers `K_{λμ}` (weight-space dimensions of `U_λ`), by peeling horizontal strips.
///
/// `K` is symmetric in the order of `μ`, so keys use the sorted weight.
#[derive(Default)]
pub struct KostkaCache {
    memo: HashMap<(Vec<usize>, Vec<usize>), u128>,
}

impl KostkaCache {
    pub fn new() -> KostkaCache {
        KostkaCache::default()
    }

    /// `K_{λμ}` for an occupation vector `μ` of the same weight as `λ`.
    pub fn kostka(&mut self, lambda: &YoungIndex, mu: &[usize]) -> u128 {
        let shape = lambda.decreasing();
        let mut w: Vec<usize> = mu.iter().copied().filter(|&m| m > 0).collect();
        w.sort_unstable();
        if shape.iter().sum::<usize>() != w.iter().sum::<usize>() {
            return 0;
        }
        self.rec(shape, w)
    }

    fn rec(&mut self, shape: Vec<usize>, weight: Vec<usize>) -> u128 {
        let Some((&last, rest)) = weight.split_last() else {
            return u128::from(shape.is_empty());
        };
        if shape.len() > weight.len() {
            return 0;
        }
        let key = (shape, weight.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let shape = &key.0;
        let mut total = 0u128;
        let mut nu = vec![0usize; shape.len()];
        strips(shape, 0, last, &mut nu, &mut |nu: &[usize]| {
            let inner: Vec<usize> = nu.iter().copied().filter(|&x| x > 0).collect();
            total += self.rec(inner, rest.to_vec());
        });
        self.memo.insert(key, total);
        total
    }
}

/// Calls `f(ν)` for every `ν` with `λ/ν` a horizontal strip of size `size`
/// (`λ_{i+1} <= ν_i <= λ_i`).
fn strips(lambda: &[usize], i: usize, size: usize, nu: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if i == lambda.len() {
        if size == 0 {
            f(nu);
        }
        return;
    }
    let lo = lambda.get(i + 1).copied().unwrap_or(0);
    for v in lo..=lambda[i] {
        let removed = lambda[i] - v;
        if removed > size {
            continue;
        }
        nu[i] = v;
        strips(lambda, i + 1, size - removed, nu, f);
    }
}
