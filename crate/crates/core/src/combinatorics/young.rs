use serde::{Deserialize, Serialize};
use std::fmt;

/// A length-`d` partition of `n` stored in increasing order (`λ_1 <= … <= λ_d`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungIndex {
    parts: Vec<usize>,
}

impl YoungIndex {
    /// Accepts non-decreasing parts; `d = parts.len()`, `n = Σ parts`.
    pub fn new(parts: Vec<usize>) -> Option<YoungIndex> {
        if parts.is_empty() || parts.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        Some(YoungIndex { parts })
    }

    /// Builds from a partition in any order, padding with zeros to length `d`.
    pub fn from_unordered(mut parts: Vec<usize>, d: usize) -> Option<YoungIndex> {
        parts.retain(|&p| p > 0);
        if parts.len() > d {
            return None;
        }
        parts.resize(d, 0);
        parts.sort_unstable();
        Some(YoungIndex { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Parts in the conventional decreasing order, zeros dropped.
    pub fn decreasing(&self) -> Vec<usize> {
        self.parts.iter().rev().copied().filter(|&p| p > 0).collect()
    }

    /// Decreasing order, padded with zeros to length `d`.
    pub fn decreasing_padded(&self) -> Vec<usize> {
        self.parts.iter().rev().copied().collect()
    }
}

impl fmt::Display for YoungIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All non-decreasing `d`-tuples of non-negative integers summing to `n`, lexicographic.
pub fn enumerate_young(n: usize, d: usize) -> Vec<YoungIndex> {
    assert!(d >= 1, "d must be at least 1");
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fill(n, d, 0, &mut cur, &mut out);
    out
}

fn fill(rem: usize, slots: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungIndex>) {
    if slots == 1 {
        if rem >= min {
            cur.push(rem);
            out.push(YoungIndex { parts: cur.clone() });
            cur.pop();
        }
        return;
    }
    // the remaining `slots` parts are all >= v, so v * slots <= rem
    let mut v = min;
    while v * slots <= rem {
        cur.push(v);
        fill(rem - v, slots - 1, v, cur, out);
        cur.pop();
        v += 1;
    }
}

/// Occupation vectors `(n_1..n_d)` with `Σ n_i = n`, lexicographic.
pub fn enumerate_weights(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    weights_rec(n, 0, &mut cur, &mut out);
    out
}

fn weights_rec(rem: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let d = cur.len();
    if pos + 1 == d {
        cur[pos] = rem;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rem {
        cur[pos] = v;
        weights_rec(rem - v, pos + 1, cur, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lists() {
        let got: Vec<Vec<usize>> = enumerate_young(2, 2).iter().map(|y| y.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 2], vec![1, 1]]);
        let got: Vec<Vec<usize>> = enumerate_young(0, 3).iter().map(|y| y.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0, 0]]);
        let got: Vec<Vec<usize>> = enumerate_young(3, 2).iter().map(|y| y.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn matches_filtered_cartesian_product() {
        for d in 1..=4 {
            for n in 0..=9 {
                let mut brute = Vec::new();
                let total = (n + 1usize).pow(d as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut v = Vec::with_capacity(d);
                    for _ in 0..d {
                        v.push(c % (n + 1));
                        c /= n + 1;
                    }
                    v.reverse();
                    if v.iter().sum::<usize>() == n && v.windows(2).all(|w| w[0] <= w[1]) {
                        brute.push(v);
                    }
                }
                brute.sort();
                let got: Vec<Vec<usize>> = enumerate_young(n, d).iter().map(|y| y.parts().to_vec()).collect();
                assert_eq!(got, brute, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn weights_count_is_stars_and_bars() {
        assert_eq!(enumerate_weights(5, 3).len(), 21);
        assert_eq!(enumerate_weights(0, 2), vec![vec![0, 0]]);
        let w = enumerate_weights(2, 2);
        assert_eq!(w, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }
}
