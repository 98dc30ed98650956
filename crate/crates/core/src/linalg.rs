//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Eigenvalues below this are treated as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are eigenvectors, matching `values`.
    pub vectors: CMat,
}

/// Eigendecomposition of the Hermitian part of `a`, eigenvalues ascending,
/// each eigenvector's largest component made real positive.
pub fn herm_eig(a: &CMat) -> HermEig {
    let h = hermitize(a);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let mut vectors = CMat::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        let mut best = 0;
        for r in 0..n {
            if v[r].norm() > v[best].norm() + 1e-12 {
                best = r;
            }
        }
        let phase = if v[best].norm() > 0.0 { v[best].conj() / v[best].norm() } else { Complex64::new(1.0, 0.0) };
        for r in 0..n {
            vectors[(r, col)] = v[r] * phase;
        }
    }
    HermEig { values, vectors }
}

pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Largest elementwise `|a − a†|`.
pub fn hermitian_defect(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            m = m.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    m
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Re Tr(a b)` without forming the product.
pub fn trace_prod_re(a: &CMat, b: &CMat) -> f64 {
    let mut s = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    s
}

/// `V diag(f(λ)) V†` over eigenpairs where `keep(λ)`; other eigenvalues map to 0.
pub fn spectral_fn(eig: &HermEig, f: impl Fn(f64) -> f64, keep: impl Fn(f64) -> bool) -> CMat {
    let n = eig.values.len();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        if !keep(lam) {
            continue;
        }
        let fl = f(lam);
        let v = eig.vectors.column(k);
        for i in 0..n {
            let vi = v[i] * fl;
            for j in 0..n {
                out[(i, j)] += vi * v[j].conj();
            }
        }
    }
    out
}

/// `log a` on the support (eigenvalues above [`SUPPORT_CUTOFF`]).
pub fn log_on_support(a: &CMat) -> CMat {
    let e = herm_eig(a);
    spectral_fn(&e, f64::ln, |l| l > SUPPORT_CUTOFF)
}

/// `a^p` for a positive semidefinite `a`, negative eigenvalues clamped to 0.
pub fn psd_power(a: &CMat, p: f64) -> CMat {
    let e = herm_eig(a);
    spectral_fn(&e, |l| l.max(0.0).powf(p), |l| l > 0.0)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_power(a: &CMat, n: usize) -> CMat {
    let mut out = CMat::identity(1, 1);
    for _ in 0..n {
        out = kron(&out, a);
    }
    out
}

pub fn diag(values: &[f64]) -> CMat {
    CMat::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0))))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Symmetrized product `(ab + ba)/2`.
pub fn jordan(a: &CMat, b: &CMat) -> CMat {
    (a * b + b * a).scale(0.5)
}
