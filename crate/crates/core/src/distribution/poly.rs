//! Homogeneous polynomials in `z_1..z_d` with double-double coefficients.
//!
//! A monomial `z^e` with `|e| <= n` is stored at `Σ_{i<d−1} e_i (n+1)^i`; the last exponent is
//! implied by the degree. Exponent addition is index addition, so products need no decoding.

use crate::dd::Dd;

#[derive(Clone, Debug)]
pub struct PolyLayout {
    pub n: usize,
    pub d: usize,
    /// Index shift caused by multiplying with `z_i` (0 for the last variable).
    pub stride: Vec<usize>,
    pub box_size: usize,
    /// Indices of all monomials of each degree `0..=n`, ascending.
    pub support: Vec<Vec<usize>>,
}

/// A homogeneous polynomial stored as its non-zero terms.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    pub degree: usize,
    pub terms: Vec<(usize, Dd)>,
}

impl PolyLayout {
    pub fn new(n: usize, d: usize) -> PolyLayout {
        assert!(d >= 1);
        let base = n + 1;
        let mut stride = Vec::with_capacity(d);
        let mut s = 1usize;
        for _ in 0..d - 1 {
            stride.push(s);
            s *= base;
        }
        stride.push(0);
        let mut support = vec![Vec::new(); n + 1];
        let mut e = vec![0usize; d - 1];
        'outer: loop {
            let deg: usize = e.iter().sum();
            if deg <= n {
                // the last exponent takes up the remaining degree
                let idx: usize = e.iter().zip(&stride).map(|(a, b)| a * b).sum();
                for sup in support.iter_mut().skip(deg) {
                    sup.push(idx);
                }
            }
            let mut k = 0;
            loop {
                if k == e.len() {
                    break 'outer;
                }
                e[k] += 1;
                if e[k] <= n {
                    break;
                }
                e[k] = 0;
                k += 1;
            }
        }
        for v in support.iter_mut() {
            v.sort_unstable();
        }
        PolyLayout { n, d, stride, box_size: s, support }
    }

    /// Index of the monomial `z^μ`.
    pub fn index(&self, mu: &[usize]) -> usize {
        mu.iter().zip(&self.stride).map(|(a, b)| a * b).sum()
    }

    pub fn zeros(&self) -> Vec<Dd> {
        vec![Dd::ZERO; self.box_size]
    }

    /// `out = a * b` with `a` dense of degree `da`; `out` is cleared on its support first.
    pub fn mul_into(&self, a: &[Dd], da: usize, b: &SparsePoly, out: &mut [Dd]) {
        for &i in &self.support[da + b.degree] {
            out[i] = Dd::ZERO;
        }
        for &ia in &self.support[da] {
            let ca = a[ia];
            if ca.hi == 0.0 {
                continue;
            }
            for &(ib, cb) in &b.terms {
                out[ia + ib].fma_assign(ca, cb);
            }
        }
    }

    pub fn to_sparse(&self, dense: &[Dd], degree: usize) -> SparsePoly {
        let terms = self.support[degree].iter().filter(|&&i| dense[i].hi != 0.0).map(|&i| (i, dense[i])).collect();
        SparsePoly { degree, terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_sizes_are_binomial() {
        let l = PolyLayout::new(6, 3);
        for k in 0..=6 {
            assert_eq!(l.support[k].len(), (k + 2) * (k + 1) / 2);
        }
        let l = PolyLayout::new(5, 1);
        assert!(l.support.iter().all(|s| s == &vec![0]));
    }

    #[test]
    fn product_of_linear_forms() {
        // (z1 + 2 z2)(3 z1 + z2) = 3 z1^2 + 7 z1 z2 + 2 z2^2
        let l = PolyLayout::new(2, 2);
        let mut a = l.zeros();
        a[l.index(&[1, 0])] = Dd::from_f64(1.0);
        a[l.index(&[0, 1])] = Dd::from_f64(2.0);
        let b = SparsePoly {
            degree: 1,
            terms: vec![(l.index(&[1, 0]), Dd::from_f64(3.0)), (l.index(&[0, 1]), Dd::from_f64(1.0))],
        };
        let mut out = l.zeros();
        l.mul_into(&a, 1, &b, &mut out);
        assert_eq!(out[l.index(&[2, 0])].to_f64(), 3.0);
        assert_eq!(out[l.index(&[1, 1])].to_f64(), 7.0);
        assert_eq!(out[l.index(&[0, 2])].to_f64(), 2.0);
    }
}
