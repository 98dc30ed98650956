//! Scalable exact evaluation through the cycle factorization
//! `Tr[ρ̃^{⊗n} U(π) Z^{⊗n}] = Π_{cycles ℓ of π} Tr[(ρ̃Z)^ℓ]`, `Z = diag(z)`.
//!
//! Then `p(λ, μ) = dim V_λ Σ_c χ^λ(c)/z_c [z^μ] Π_ℓ t_ℓ` with `t_ℓ = Tr (ρ̃Z)^ℓ`. The class sum
//! cancels by about `dim V_λ`, so coefficients and accumulators are double-double.

use super::poly::{PolyLayout, SparsePoly};
use super::{atom_skeleton, check_pair, clamp_and_normalize, Backend, OutcomeDistribution, CYCLE_MAX_D, CYCLE_MAX_N};
use crate::combinatorics::cycles::centralizer_order_u128;
use crate::combinatorics::dims::sn_dim;
use crate::combinatorics::CharacterTable;
use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::states::{DensityMatrix, SigmaSpectrum};
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// `t_ℓ = Tr (ρ̃Z)^ℓ` for `ℓ = 1..=n`.
pub(crate) fn power_traces(rho_t: &[Complex64], layout: &PolyLayout) -> Vec<SparsePoly> {
    let d = layout.d;
    let n = layout.n;
    let r: Vec<CDd> = rho_t.iter().map(|z| CDd::new(z.re, z.im)).collect();
    // q[i*d + j] is the (i, j) entry of (ρ̃Z)^ℓ
    let mut q: Vec<Vec<CDd>> = (0..d * d)
        .map(|k| {
            let mut v = vec![CDd::ZERO; layout.box_size];
            if k / d == k % d {
                v[0] = CDd::ONE;
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for ell in 1..=n {
        let mut next: Vec<Vec<CDd>> = vec![vec![CDd::ZERO; layout.box_size]; d * d];
        for i in 0..d {
            for k in 0..d {
                let src = &q[i * d + k];
                for j in 0..d {
                    let c = r[k * d + j];
                    let shift = layout.stride[j];
                    let dst = &mut next[i * d + j];
                    for &idx in &layout.support[ell - 1] {
                        dst[idx + shift].fma_assign(src[idx], c);
                    }
                }
            }
        }
        q = next;
        let mut t = layout.zeros();
        for i in 0..d {
            for &idx in &layout.support[ell] {
                t[idx] += q[i * d + i][idx].re;
            }
        }
        out.push(layout.to_sparse(&t, ell));
    }
    out
}

struct Walk<'a> {
    layout: &'a PolyLayout,
    traces: &'a [SparsePoly],
    table: &'a CharacterTable,
    dim_v: &'a [i128],
    /// `acc[λ]` accumulates `Σ_c χ^λ(c) dim V_λ / z_c · Π t_ℓ`, indexed by position in the
    /// degree-`n` support.
    acc: Vec<Vec<Dd>>,
    leaf_buf: Vec<Dd>,
    /// Products along the current cycle prefix, one buffer per depth.
    stack: Vec<Vec<Dd>>,
    cycles: Vec<usize>,
    leaf: usize,
}

impl Walk<'_> {
    fn run(&mut self, depth: usize, deg: usize, max: usize) {
        let n = self.layout.n;
        if deg == n {
            self.emit(depth);
            return;
        }
        for ell in (1..=max.min(n - deg)).rev() {
            let (lo, hi) = self.stack.split_at_mut(depth + 1);
            self.layout.mul_into(&lo[depth], deg, &self.traces[ell - 1], &mut hi[0]);
            self.cycles.push(ell);
            self.run(depth + 1, deg + ell, ell);
            self.cycles.pop();
        }
    }

    fn emit(&mut self, depth: usize) {
        let ci = self.leaf;
        self.leaf += 1;
        debug_assert_eq!(self.table.classes[ci], self.cycles);
        let z = Dd::from_u128(centralizer_order_u128(&self.cycles));
        let poly = &self.stack[depth];
        for (slot, &idx) in self.leaf_buf.iter_mut().zip(&self.layout.support[self.layout.n]) {
            *slot = poly[idx];
        }
        for (li, &chi) in self.table.values[ci].iter().enumerate() {
            if chi == 0 {
                continue;
            }
            let w = Dd::from_i128(self.dim_v[li] * chi) / z;
            for (a, &c) in self.acc[li].iter_mut().zip(&self.leaf_buf) {
                a.fma_assign(w, c);
            }
        }
    }
}

/// Exact distribution for `d <= 4`, `n <= 30`.
pub fn cycle_poly_distribution(rho: &DensityMatrix, sigma: &SigmaSpectrum, n: usize) -> Result<OutcomeDistribution> {
    check_pair(rho, sigma)?;
    let d = sigma.dim();
    if n == 0 || n > CYCLE_MAX_N || d > CYCLE_MAX_D {
        return Err(Error::GuardExceeded(format!(
            "cycle_poly backend needs 1 <= n <= {CYCLE_MAX_N} and d <= {CYCLE_MAX_D} (n={n}, d={d})"
        )));
    }
    let rt = sigma.rotate(rho);
    let rho_t: Vec<Complex64> = (0..d * d).map(|k| rt[(k / d, k % d)]).collect();
    let layout = PolyLayout::new(n, d);
    let traces = power_traces(&rho_t, &layout);
    let table = CharacterTable::new(n, d);
    let dim_v: Vec<i128> = table.shapes.iter().map(|s| sn_dim(s).to_i128().expect("fits for n <= 30")).collect();

    let mut stack = vec![layout.zeros(); n + 1];
    stack[0][0] = Dd::ONE;
    let mut walk = Walk {
        layout: &layout,
        traces: &traces,
        table: &table,
        dim_v: &dim_v,
        acc: vec![vec![Dd::ZERO; layout.support[n].len()]; table.shapes.len()],
        leaf_buf: vec![Dd::ZERO; layout.support[n].len()],
        stack,
        cycles: Vec::with_capacity(n),
        leaf: 0,
    };
    walk.run(0, 0, n);
    debug_assert_eq!(walk.leaf, table.classes.len());

    let position: std::collections::HashMap<usize, usize> =
        layout.support[n].iter().enumerate().map(|(k, &idx)| (idx, k)).collect();
    let mut atoms = atom_skeleton(n, d, sigma);
    let mut li = 0;
    for a in atoms.iter_mut() {
        while table.shapes[li] != a.lambda {
            li += 1;
        }
        a.p = walk.acc[li][position[&layout.index(&a.mu)]].to_f64();
    }
    let diagnostics = clamp_and_normalize(&mut atoms)?;
    Ok(OutcomeDistribution {
        n,
        d,
        backend: Backend::CyclePoly,
        sigma_spectrum: sigma.eigenvalues.clone(),
        atoms,
        diagnostics,
        annotated: false,
    })
}
