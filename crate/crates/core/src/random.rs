//! Seeded random matrices and states for property tests and the decomposition search.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteState, DensityMatrix, Ensemble};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    g.hermitian_part()
}

/// Haar-random unit vector.
pub fn haar_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Uniformly distributed point on the probability simplex.
pub fn simplex_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Mixture of `dim²` Haar-random pure states with uniform-simplex weights.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    random_mixed_state(dim, dim * dim, rng)
}

/// Mixture of `count` Haar-random pure states with uniform-simplex weights.
pub fn random_mixed_state<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> DensityMatrix {
    let weights = simplex_weights(count, rng);
    let mut mat = ComplexMatrix::zeros(dim);
    for w in weights {
        let v = haar_pure_vector(dim, rng);
        mat = &mat + &ComplexMatrix::outer(&v).scale(w);
    }
    DensityMatrix::new(mat).expect("random mixture is a valid state")
}

pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix::from_pure(&haar_pure_vector(dim, rng)).expect("unit vector")
}

pub fn random_bipartite<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> BipartiteState {
    BipartiteState::new(random_density_matrix(dim_a * dim_b, rng), dim_a, dim_b)
        .expect("dimensions match")
}

/// Ensemble of `size` random mixed states with uniform-simplex weights.
pub fn random_ensemble<R: Rng + ?Sized>(size: usize, dim: usize, rng: &mut R) -> Ensemble {
    let weights = simplex_weights(size, rng);
    let members = weights
        .into_iter()
        .map(|w| (w, random_mixed_state(dim, 1 + rng.gen_range(0..dim), rng)))
        .collect();
    Ensemble::new(members).expect("valid ensemble")
}

/// Haar-random `rows × cols` isometry (orthonormal columns), row-major.
/// Gram–Schmidt on Gaussian columns.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Vec<Complex64> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<Complex64> = (0..rows).map(|_| gaussian(rng)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &columns {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for (k, col) in columns.iter().enumerate() {
        for (j, z) in col.iter().enumerate() {
            out[j * cols + k] = *z;
        }
    }
    out
}
