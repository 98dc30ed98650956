//! Density matrices, divergences and the local Cramér–Rao quantities.

use crate::error::{Error, Result};
use crate::linalg::{
    diag, herm_eig, hermitian_defect, hermitize, jordan, log_on_support, psd_power, spectral_fn, trace, trace_prod_re,
    CMat, HermEig, SUPPORT_CUTOFF,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Largest correction `validate_state` applies silently.
pub const CORRECTION_TOLERANCE: f64 = 1e-6;
/// Eigenvalues in `[−EIGEN_CLAMP, 0)` are clamped without being recorded as a defect.
pub const EIGEN_CLAMP: f64 = 1e-10;
/// A `ρ`-eigenvector outside `supp σ` has `σ`-expectation below this.
pub const SIGMA_SUPPORT_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Corrections {
    pub hermitian_defect: f64,
    pub clamped_eigenvalue: f64,
    pub trace_defect: f64,
}

/// A validated `d×d` Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMat,
    pub corrections: Corrections,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn eig(&self) -> HermEig {
        herm_eig(&self.mat)
    }

    pub fn from_spectrum(p: &[f64]) -> Result<DensityMatrix> {
        validate_state(&diag(p))
    }

    pub fn maximally_mixed(d: usize) -> DensityMatrix {
        DensityMatrix { mat: diag(&vec![1.0 / d as f64; d]), corrections: Corrections::default() }
    }

    /// `u ρ u†`, revalidated.
    pub fn conjugate(&self, u: &CMat) -> Result<DensityMatrix> {
        validate_state(&(u * &self.mat * u.adjoint()))
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.mat[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().values[0]
    }
}

/// Hermitizes, clamps small negative eigenvalues and renormalizes the trace of `raw`.
///
/// Any single correction larger than [`CORRECTION_TOLERANCE`] is an error.
pub fn validate_state(raw: &CMat) -> Result<DensityMatrix> {
    if raw.nrows() != raw.ncols() {
        return Err(Error::DimensionMismatch { expected: raw.nrows(), found: raw.ncols() });
    }
    if raw.nrows() == 0 {
        return Err(Error::InvalidState("empty matrix".into()));
    }
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("non-finite entry".into()));
    }
    let herm = hermitian_defect(raw);
    if herm > CORRECTION_TOLERANCE {
        return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
    }
    let mut mat = if herm > 0.0 { hermitize(raw) } else { raw.clone() };
    let eig = herm_eig(&mat);
    let min = eig.values[0];
    let mut clamped = 0.0;
    if min < 0.0 {
        if min < -CORRECTION_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        clamped = -min;
        mat = spectral_fn(&eig, |l| l.max(0.0), |_| true);
    }
    let tr = trace(&mat).re;
    let trace_defect = (tr - 1.0).abs();
    if trace_defect > CORRECTION_TOLERANCE {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    if tr != 1.0 {
        mat = mat.unscale(tr);
    }
    Ok(DensityMatrix {
        mat,
        corrections: Corrections { hermitian_defect: herm, clamped_eigenvalue: clamped, trace_defect },
    })
}

/// Eigen-data of a full-rank `σ`: eigenvalues descending and `σ = W diag(s) W†`.
#[derive(Clone, Debug)]
pub struct SigmaSpectrum {
    pub eigenvalues: Vec<f64>,
    pub basis: CMat,
}

impl SigmaSpectrum {
    pub fn new(sigma: &DensityMatrix) -> Result<SigmaSpectrum> {
        let d = sigma.dim();
        let (values, basis) = if sigma.is_diagonal() {
            let dvals: Vec<f64> = (0..d).map(|i| sigma.matrix()[(i, i)].re).collect();
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&a, &b| dvals[b].total_cmp(&dvals[a]).then(a.cmp(&b)));
            let mut w = CMat::zeros(d, d);
            for (col, &k) in order.iter().enumerate() {
                w[(k, col)] = Complex64::new(1.0, 0.0);
            }
            (order.iter().map(|&k| dvals[k]).collect::<Vec<_>>(), w)
        } else {
            let e = sigma.eig();
            let mut w = CMat::zeros(d, d);
            let mut vals = Vec::with_capacity(d);
            for col in 0..d {
                let k = d - 1 - col;
                vals.push(e.values[k]);
                w.set_column(col, &e.vectors.column(k));
            }
            (vals, w)
        };
        let smin = values[d - 1];
        if smin <= SIGMA_SUPPORT_CUTOFF {
            return Err(Error::RankDeficient(smin));
        }
        Ok(SigmaSpectrum { eigenvalues: values, basis })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `W† ρ W`, i.e. `ρ` written in `σ`'s eigenbasis.
    pub fn rotate(&self, rho: &DensityMatrix) -> CMat {
        self.basis.adjoint() * rho.matrix() * &self.basis
    }

    pub fn ln_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|s| s.ln()).collect()
    }
}

fn check_dims(rho: &CMat, sigma: &CMat) -> Result<()> {
    if rho.nrows() != sigma.nrows() {
        return Err(Error::DimensionMismatch { expected: sigma.nrows(), found: rho.nrows() });
    }
    Ok(())
}

/// `log ρ − log σ` on `supp ρ`, or `None` when `supp ρ ⊄ supp σ`.
fn log_ratio(rho: &CMat, sigma: &CMat) -> Option<(HermEig, CMat)> {
    let er = herm_eig(rho);
    let es = herm_eig(sigma);
    let d = rho.nrows();
    for (k, &r) in er.values.iter().enumerate() {
        if r <= SUPPORT_CUTOFF {
            continue;
        }
        let v = er.vectors.column(k);
        let mut expect = 0.0;
        let mut kernel_weight = 0.0;
        for (j, &s) in es.values.iter().enumerate() {
            let overlap = es.vectors.column(j).dotc(&v).norm_sqr();
            expect += s * overlap;
            if s <= SIGMA_SUPPORT_CUTOFF {
                kernel_weight += overlap;
            }
        }
        if expect < SIGMA_SUPPORT_CUTOFF || kernel_weight > SUPPORT_CUTOFF {
            return None;
        }
    }
    let log_rho = spectral_fn(&er, f64::ln, |l| l > SUPPORT_CUTOFF);
    let log_sigma = spectral_fn(&es, f64::ln, |l| l > SIGMA_SUPPORT_CUTOFF);
    debug_assert_eq!(log_rho.nrows(), d);
    Some((er, log_rho - log_sigma))
}

fn relative_entropy_raw(rho: &CMat, sigma: &CMat) -> f64 {
    match log_ratio(rho, sigma) {
        None => f64::INFINITY,
        Some((_, g)) => trace_prod_re(rho, &g),
    }
}

/// `D(ρ‖σ) = Tr ρ(log ρ − log σ)` in nats; `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.matrix(), sigma.matrix())?;
    Ok(relative_entropy_raw(rho.matrix(), sigma.matrix()))
}

/// `V(ρ‖σ) = Tr ρ(log ρ − log σ − D)²`, evaluated as `‖(G − D)ρ^{1/2}‖²`.
pub fn relative_varentropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.matrix(), sigma.matrix())?;
    let (er, g) = log_ratio(rho.matrix(), sigma.matrix()).ok_or(Error::SupportViolation)?;
    let dval = trace_prod_re(rho.matrix(), &g);
    let d = rho.dim();
    let centered = g - CMat::identity(d, d) * Complex64::new(dval, 0.0);
    let sqrt_rho = spectral_fn(&er, |l| l.max(0.0).sqrt(), |l| l > 0.0);
    let m = centered * sqrt_rho;
    Ok(m.iter().map(|z| z.norm_sqr()).sum())
}

/// Sandwiched Rényi divergence `(α−1)^{-1} log Tr(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α`.
///
/// The reverse argument order is `sandwiched_renyi(sigma, rho, α)`.
pub fn sandwiched_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_dims(rho.matrix(), sigma.matrix())?;
    if !(alpha > 0.0) || (alpha - 1.0).abs() < 1e-15 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be positive and != 1, got {alpha}")));
    }
    let smin = sigma.min_eigenvalue();
    if smin <= SIGMA_SUPPORT_CUTOFF {
        return Err(Error::RankDeficient(smin));
    }
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let s = psd_power(sigma.matrix(), gamma);
    let m = &s * rho.matrix() * &s;
    let q: f64 = herm_eig(&m).values.iter().map(|&l| if l > 0.0 { l.powf(alpha) } else { 0.0 }).sum();
    Ok(q.ln() / (alpha - 1.0))
}

/// Fidelity `F(ρ,σ) = Tr |√ρ √σ|`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.matrix(), sigma.matrix())?;
    let sr = psd_power(rho.matrix(), 0.5);
    let m = &sr * sigma.matrix() * &sr;
    Ok(herm_eig(&m).values.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceSet {
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "V")]
    pub v: f64,
    /// `(α, D_α(ρ‖σ))`, sandwiched.
    pub renyi: Vec<(f64, f64)>,
}

pub fn divergence_set(rho: &DensityMatrix, sigma: &DensityMatrix, alphas: &[f64]) -> Result<DivergenceSet> {
    let d = relative_entropy(rho, sigma)?;
    let v = relative_varentropy(rho, sigma)?;
    let renyi = alphas.iter().map(|&a| Ok((a, sandwiched_renyi(rho, sigma, a)?))).collect::<Result<Vec<_>>>()?;
    Ok(DivergenceSet { d, v, renyi })
}

#[derive(Clone, Debug)]
pub struct SldQuantities {
    /// `L¹ = log ρ* − log σ − D(ρ*‖σ) I`.
    pub l1: CMat,
    /// `⟨L¹, L¹⟩_{ρ*} = Re Tr (ρ*∘L¹) L¹`.
    pub inner: f64,
    pub divergence: f64,
}

fn require_full_rank(rho: &CMat) -> Result<()> {
    let m = herm_eig(rho).values[0];
    if m <= SUPPORT_CUTOFF {
        return Err(Error::RankDeficient(m));
    }
    Ok(())
}

pub fn sld_quantities(rho_star: &DensityMatrix, sigma: &DensityMatrix) -> Result<SldQuantities> {
    check_dims(rho_star.matrix(), sigma.matrix())?;
    require_full_rank(rho_star.matrix())?;
    require_full_rank(sigma.matrix())?;
    let d = rho_star.dim();
    let g = log_on_support(rho_star.matrix()) - log_on_support(sigma.matrix());
    let dv = trace_prod_re(rho_star.matrix(), &g);
    let l1 = g - CMat::identity(d, d) * Complex64::new(dv, 0.0);
    let inner = trace_prod_re(&jordan(rho_star.matrix(), &l1), &l1);
    Ok(SldQuantities { l1, inner, divergence: dv })
}

/// Generalized Gell-Mann matrices: `d² − 1` traceless Hermitian matrices, trace-orthogonal.
pub fn gell_mann_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = CMat::zeros(d, d);
            s[(j, k)] = one;
            s[(k, j)] = one;
            out.push(s);
            let mut a = CMat::zeros(d, d);
            a[(j, k)] = -i;
            a[(k, j)] = i;
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMat::zeros(d, d);
        for t in 0..l {
            m[(t, t)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CrReport {
    #[serde(rename = "V")]
    pub v: f64,
    pub inner: f64,
    pub step: f64,
    /// Central difference of `θ ↦ D(ρ* + θX₁‖σ)`; should be 1.
    pub derivative_x1: f64,
    /// Central differences along the `X_j` orthogonal to `L¹`; should be 0.
    pub derivatives_orthogonal: Vec<f64>,
    /// `max_j |derivative − target| / (1 + ‖X_j‖)`.
    pub max_defect: f64,
    /// Defect at `h` over defect at `h/2` along `X₁` (about 4 for a second-order scheme).
    pub richardson_ratio: f64,
    pub tolerance_met: bool,
}

fn central_difference(rho: &CMat, x: &CMat, sigma: &CMat, h: f64) -> f64 {
    let plus = relative_entropy_raw(&(rho + x * Complex64::new(h, 0.0)), sigma);
    let minus = relative_entropy_raw(&(rho - x * Complex64::new(h, 0.0)), sigma);
    (plus - minus) / (2.0 * h)
}

fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Finite-difference check that `X₁ = V^{-1} ρ*∘L¹` has unit slope of `D(·‖σ)` and that every
/// traceless Hermitian direction trace-orthogonal to `L¹` has zero slope.
pub fn cr_condition_check(rho_star: &DensityMatrix, sigma: &DensityMatrix, h: f64) -> Result<CrReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
    }
    let sld = sld_quantities(rho_star, sigma)?;
    let v = relative_varentropy(rho_star, sigma)?;
    if v <= 1e-14 {
        return Err(Error::Degenerate("V(rho||sigma) = 0, the log-ratio is constant".into()));
    }
    let d = rho_star.dim();
    let rho = rho_star.matrix();
    let x1 = jordan(rho, &sld.l1).unscale(v);

    // traceless part of L¹ spans the one direction removed from the Gell-Mann basis
    let tl = &sld.l1 - CMat::identity(d, d) * (trace(&sld.l1) / d as f64);
    let tl_norm2 = trace_prod_re(&tl, &tl);
    let mut basis: Vec<CMat> = Vec::new();
    for g in gell_mann_basis(d) {
        let mut x = &g - &tl * Complex64::new(trace_prod_re(&g, &sld.l1) / tl_norm2, 0.0);
        for b in &basis {
            let c = trace_prod_re(&x, b);
            x -= b * Complex64::new(c, 0.0);
        }
        let nrm = trace_prod_re(&x, &x).sqrt();
        if nrm > 1e-8 {
            basis.push(x.unscale(nrm));
        }
        if basis.len() == d * d - 2 {
            break;
        }
    }

    let lam_min = herm_eig(rho).values[0];
    let mut dirs: Vec<(CMat, f64)> = vec![(x1.clone(), 1.0)];
    dirs.extend(basis.into_iter().map(|x| (x, 0.0)));
    let mut step = h;
    for (x, _) in &dirs {
        let spec = herm_eig(x).values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        while step * spec > 0.5 * lam_min {
            step *= 0.5;
        }
    }

    let mut max_defect = 0.0f64;
    let mut derivative_x1 = 0.0;
    let mut orth = Vec::new();
    for (k, (x, target)) in dirs.iter().enumerate() {
        let fd = central_difference(rho, x, sigma.matrix(), step);
        max_defect = max_defect.max((fd - target).abs() / (1.0 + frob(x)));
        if k == 0 {
            derivative_x1 = fd;
        } else {
            orth.push(fd);
        }
    }
    let coarse = (central_difference(rho, &x1, sigma.matrix(), step) - 1.0).abs();
    let fine = (central_difference(rho, &x1, sigma.matrix(), step / 2.0) - 1.0).abs();
    let richardson_ratio = if fine > 0.0 { coarse / fine } else { f64::INFINITY };
    Ok(CrReport {
        v,
        inner: sld.inner,
        step,
        derivative_x1,
        derivatives_orthogonal: orth,
        max_defect,
        richardson_ratio,
        tolerance_met: max_defect <= 1e-5,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LloCheck {
    /// `√V(ρ‖σ)`.
    pub lhs: f64,
    /// `log d + t d`.
    pub rhs: f64,
    pub holds: bool,
}

/// `√V(ρ‖σ) <= log d + t d` whenever every eigenvalue of `σ` is at least `e^{−t d}`.
pub fn llo_bound_check(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64) -> Result<LloCheck> {
    let d = sigma.dim() as f64;
    let smin = sigma.min_eigenvalue();
    if smin < (-t * d).exp() * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!("min eigenvalue {smin:e} of sigma is below e^(-t d)")));
    }
    let lhs = relative_varentropy(rho, sigma)?.max(0.0).sqrt();
    let rhs = d.ln() + t * d;
    Ok(LloCheck { lhs, rhs, holds: lhs <= rhs + 1e-12 })
}

/// On-disk state: a full matrix or a diagonal shortcut.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum StateFile {
    Matrix { dim: usize, re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
    Spectrum { spectrum: Vec<f64> },
}

impl StateFile {
    pub fn to_raw(&self) -> Result<CMat> {
        match self {
            StateFile::Spectrum { spectrum } => {
                if spectrum.is_empty() {
                    return Err(Error::Parse("empty spectrum".into()));
                }
                Ok(diag(spectrum))
            }
            StateFile::Matrix { dim, re, im } => {
                let d = *dim;
                if d == 0 || re.len() != d || im.len() != d || re.iter().chain(im.iter()).any(|r| r.len() != d) {
                    return Err(Error::Parse(format!("matrix rows do not match dim = {d}")));
                }
                Ok(DMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j])))
            }
        }
    }

    pub fn from_state(rho: &DensityMatrix) -> StateFile {
        let d = rho.dim();
        let m = rho.matrix();
        StateFile::Matrix {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }
}

/// Parses and validates a JSON state file.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    validate_state(&file.to_raw()?)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of `R`'s diagonal removed.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// `U diag(spectrum) U†` with Haar `U`.
pub fn random_mixed<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> Result<DensityMatrix> {
    let u = haar_unitary(spectrum.len(), rng);
    validate_state(&(&u * diag(spectrum) * u.adjoint()))
}

/// Hilbert–Schmidt random state `G G† / Tr G G†`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = CMat::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    validate_state(&m.unscale(t)).expect("Wishart matrix is a valid state")
}

/// `(1−p)|ψ⟩⟨ψ| + p I/d` with Haar `ψ`.
pub fn random_pure_depolarized<R: Rng + ?Sized>(d: usize, p: f64, rng: &mut R) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("depolarizing weight {p} outside [0,1]")));
    }
    let u = haar_unitary(d, rng);
    let psi = u.column(0);
    let pure = psi * psi.adjoint();
    let m = pure * Complex64::new(1.0 - p, 0.0) + CMat::identity(d, d) * Complex64::new(p / d as f64, 0.0);
    validate_state(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> DensityMatrix {
        let h = Complex64::new(0.5, 0.0);
        validate_state(&CMat::from_row_slice(2, 2, &[h, h, h, h])).unwrap()
    }

    #[test]
    fn validate_examples() {
        let id = DensityMatrix::maximally_mixed(4);
        let v = validate_state(id.matrix()).unwrap();
        assert_eq!(v.matrix(), id.matrix());
        assert_eq!(v.corrections, Corrections::default());
        let v = validate_state(&diag(&[0.5 + 1e-12, 0.5])).unwrap();
        assert!((trace(v.matrix()).re - 1.0).abs() < 1e-15);
        assert!(validate_state(&diag(&[1.01, -0.01])).is_err());
    }

    #[test]
    fn entropy_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        let zero = DensityMatrix::from_spectrum(&[1.0, 0.0]).unwrap();
        assert!(relative_entropy(&half, &half).unwrap().abs() < 1e-15);
        assert!((relative_entropy(&zero, &half).unwrap() - 2f64.ln()).abs() < 1e-14);
        let dp = relative_entropy(&plus(), &half).unwrap();
        assert!((dp - 2f64.ln()).abs() < 1e-14);
        let f = fidelity(&plus(), &half).unwrap();
        assert!(-2.0 * f.ln() <= dp + 1e-14);
        assert_eq!(relative_entropy(&half, &zero).unwrap(), f64::INFINITY);
    }

    #[test]
    fn varentropy_commuting() {
        let (p, s) = (0.8, 0.3);
        let rho = DensityMatrix::from_spectrum(&[p, 1.0 - p]).unwrap();
        let sigma = DensityMatrix::from_spectrum(&[s, 1.0 - s]).unwrap();
        let a = (p / s).ln();
        let b = ((1.0 - p) / (1.0 - s)).ln();
        let m = p * a + (1.0 - p) * b;
        let var = p * (a - m).powi(2) + (1.0 - p) * (b - m).powi(2);
        assert!((relative_varentropy(&rho, &sigma).unwrap() - var).abs() < 1e-14);
        assert!(relative_varentropy(&rho, &rho).unwrap().abs() < 1e-20);
    }

    #[test]
    fn renyi_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        let zero = DensityMatrix::from_spectrum(&[1.0, 0.0]).unwrap();
        assert!((sandwiched_renyi(&zero, &half, 0.5).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(sandwiched_renyi(&half, &half, 1.7).unwrap().abs() < 1e-14);
        assert!(sandwiched_renyi(&half, &half, 1.0).is_err());
    }

    #[test]
    fn sld_commuting() {
        let rho = DensityMatrix::from_spectrum(&[0.8, 0.2]).unwrap();
        let sigma = DensityMatrix::from_spectrum(&[0.3, 0.7]).unwrap();
        let q = sld_quantities(&rho, &sigma).unwrap();
        assert!((q.inner - relative_varentropy(&rho, &sigma).unwrap()).abs() < 1e-14);
        let z = sld_quantities(&sigma, &sigma).unwrap();
        assert!(z.inner.abs() < 1e-28);
    }

    #[test]
    fn cr_check_commuting() {
        let rho = DensityMatrix::from_spectrum(&[0.8, 0.2]).unwrap();
        let sigma = DensityMatrix::from_spectrum(&[0.3, 0.7]).unwrap();
        let r = cr_condition_check(&rho, &sigma, 1e-4).unwrap();
        assert!((r.derivative_x1 - 1.0).abs() < 1e-5);
        assert_eq!(r.derivatives_orthogonal.len(), 2);
        assert!(r.derivatives_orthogonal.iter().all(|x| x.abs() < 1e-5));
        assert!(r.tolerance_met);
    }

    #[test]
    fn gell_mann_is_orthogonal() {
        for d in 2..=4 {
            let b = gell_mann_basis(d);
            assert_eq!(b.len(), d * d - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(trace(x).norm() < 1e-15);
                for (j, y) in b.iter().enumerate() {
                    let ip = trace_prod_re(x, y);
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn haar_is_unitary_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(3, &mut a);
        let v = haar_unitary(3, &mut b);
        assert_eq!(u, v);
        let id = &u * u.adjoint();
        assert!(crate::linalg::max_abs_diff(&id, &CMat::identity(3, 3)) < 1e-14);
    }

    #[test]
    fn state_file_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density(3, &mut rng);
        let text = serde_json::to_string(&StateFile::from_state(&rho)).unwrap();
        let back = parse_state_json(&text).unwrap();
        assert!(crate::linalg::max_abs_diff(back.matrix(), rho.matrix()) < 1e-15);
        let s = parse_state_json(r#"{"spectrum":[0.5,0.5]}"#).unwrap();
        assert_eq!(s.matrix(), DensityMatrix::maximally_mixed(2).matrix());
        assert!(parse_state_json(r#"{"dim":2,"re":[[1]],"im":[[0]]}"#).is_err());
    }

    #[test]
    fn llo_examples() {
        let d = 3;
        let sigma = DensityMatrix::maximally_mixed(d);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(d, &mut rng);
        let c = llo_bound_check(&rho, &sigma, (d as f64).ln() / d as f64).unwrap();
        assert!((c.rhs - 2.0 * (d as f64).ln()).abs() < 1e-14);
        assert!(c.lhs <= (d as f64).ln() && c.holds);
        let c = llo_bound_check(&sigma, &sigma, 1.0).unwrap();
        assert!(c.lhs.abs() < 1e-10);
        let sig = DensityMatrix::from_spectrum(&[0.9, 0.05, 0.05]).unwrap();
        assert!(llo_bound_check(&rho, &sig, -(0.05f64).ln() / 3.0).unwrap().holds);
        assert!(llo_bound_check(&rho, &sig, 0.1).is_err());
    }
}
