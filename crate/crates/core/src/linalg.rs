//! Dense complex linear algebra for the small matrices this crate works with
//! (dimension at most a few dozen): products, Kronecker products, a cyclic
//! Jacobi eigensolver for Hermitian input, and the entropies built on it.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max `|H_ij - conj(H_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues at or below this are treated as exactly zero in entropy sums.
pub const EIGEN_CLAMP: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries. `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for an (unnormalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |H_ij - conj(H_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn checked_hermitian(&self) -> Result<Self> {
        let deviation = self.hermitian_deviation();
        if !(deviation <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(self.hermitian_part())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: `(A⊗B)[i·dB+k, j·dB+l] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let db = b.dim();
    ComplexMatrix::from_fn(a.dim() * db, |r, c| {
        a[(r / db, c / db)] * b[(r % db, c % db)]
    })
}

/// Spectral data of a Hermitian matrix. Eigenvalues ascending; `vectors[n]`
/// is the normalized eigenvector paired with `values[n]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * *lam;
                }
            }
        }
        out
    }

    /// Max entrywise deviation of `V†V` from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.vectors.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let dot: Complex64 = self.vectors[a]
                    .iter()
                    .zip(&self.vectors[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized after the Hermiticity check. Eigenvalues come out
/// ascending, ties ordered by original column index, and each eigenvector is
/// phase-fixed so its first non-negligible component is real and positive.
pub fn eigh(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let mut a = h.checked_hermitian()?;
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let threshold = (f64::EPSILON * f64::EPSILON) * scale.max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re).then(x.cmp(&y)));

    let values = order.iter().map(|&c| a[(c, c)].re).collect();
    let vectors = order
        .iter()
        .map(|&c| {
            let mut col: Vec<Complex64> = (0..n).map(|r| v[(r, c)]).collect();
            fix_phase(&mut col);
            col
        })
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(h)?.values)
}

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let g_abs = g.norm();
    if g_abs == 0.0 {
        return;
    }
    let n = a.dim();
    // Phase so the (p,q) element becomes real, then a real symmetric rotation.
    let phase = (g / g_abs).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * g_abs);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // W restricted to (p,q): [[c, s], [-s·phase, c·phase]].
    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = phase * (-s);
    let w_qq = phase * c;

    // A ← A·W
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    // A ← W†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * g_abs, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g_abs, 0.0);

    // V ← V·W
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

fn fix_phase(col: &mut [Complex64]) {
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let pivot = col.iter().find(|z| z.norm() > 1e-8 * norm).copied();
    if let Some(z) = pivot {
        let rot = z.conj() / z.norm();
        for x in col.iter_mut() {
            *x *= rot / norm;
        }
    }
}

/// Unit in which entropic quantities are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    /// Converts a value computed in bits to this unit.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogBase::Two => bits,
            LogBase::E => bits * std::f64::consts::LN_2,
        }
    }
}

/// Shannon entropy in bits of a list of weights, skipping entries `≤ EIGEN_CLAMP`.
pub fn shannon_entropy(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|&w| w > EIGEN_CLAMP)
        .map(|w| -w * w.log2())
        .sum()
}

/// Von Neumann entropy in bits of a Hermitian matrix's spectrum.
pub fn spectral_entropy(h: &ComplexMatrix) -> Result<f64> {
    Ok(shannon_entropy(eigvalsh(h)?))
}

/// `S(ρ‖σ) = tr ρ log₂ρ − tr ρ log₂σ` in bits; `+∞` when the support of ρ is
/// not contained in the support of σ.
pub fn relative_entropy_matrices(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -spectral_entropy(rho)?;
    let sig = eigh(sigma)?;
    let mut cross = 0.0;
    for (lam, vec) in sig.values.iter().zip(&sig.vectors) {
        // ⟨s|ρ|s⟩
        let rv = rho.mul_vec(vec);
        let weight: f64 = vec.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
        if *lam > EIGEN_CLAMP {
            cross += weight * lam.log2();
        } else if weight > EIGEN_CLAMP {
            return Ok(f64::INFINITY);
        }
    }
    Ok(neg_entropy - cross)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigvalsh(m)?.iter().map(|l| l.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let e = eigh(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = eigh(&sigma_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // phase-fixed: first component real positive
        assert!((e.vectors[0][0] - c(h, 0.)).norm() < 1e-12);
        assert!((e.vectors[0][1] - c(-h, 0.)).norm() < 1e-12);
        assert!((e.vectors[1][0] - c(h, 0.)).norm() < 1e-12);
        assert!((e.vectors[1][1] - c(h, 0.)).norm() < 1e-12);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 3, 4] {
            for _ in 0..1000 {
                let h = random_hermitian(dim, &mut rng);
                let e = eigh(&h).unwrap();
                assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
                assert!(e.orthonormality_residual() < 1e-10);
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn larger_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in [9, 16] {
            let h = random_hermitian(dim, &mut rng);
            let e = eigh(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-10);
            assert!(e.orthonormality_residual() < 1e-10);
        }
    }

    #[test]
    fn eigh_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(4, &mut rng);
        let a = eigh(&h).unwrap();
        let b = eigh(&h).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
            .unwrap();
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let xx = kron(&sigma_x(), &sigma_x());
        for r in 0..4 {
            for col in 0..4 {
                let want = if r + col == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(r, col)], c(want, 0.));
            }
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let [a, b, cc, d] = [0; 4].map(|_| random_hermitian(2, &mut rng));
            let lhs = &kron(&a, &b) * &kron(&cc, &d);
            let rhs = kron(&(&a * &cc), &(&b * &d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn entropy_of_diag_three_quarters() {
        // −(3/4)log₂(3/4) − (1/4)log₂(1/4)
        let oracle = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        let s = spectral_entropy(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        assert!((s - oracle).abs() < 1e-14);
        assert!((s - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn trace_norm_pauli_z() {
        let z = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!((trace_norm(&z).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn log_base_conversion() {
        assert_eq!(LogBase::Two.from_bits(1.0), 1.0);
        assert!((LogBase::E.from_bits(1.0) - 2f64.ln()).abs() < 1e-15);
    }
}
