//! Seeded random inputs for property checks and corpus runs.
//!
//! Uniformly random matrices are almost always invertible, so
//! [`structured_matrix`] mixes in low-rank products and conjugated
//! block-diagonal matrices with a nilpotent part, which exercise nonzero
//! indices.

use rand::Rng;

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

/// Small rational `a/b` with `|a| ≤ 3`, `1 ≤ b ≤ 3`, or a uniform residue.
pub fn small_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Rational => {
            let num = rng.gen_range(-3i64..=3);
            let den = rng.gen_range(1i64..=3);
            field
                .from_ratio(&num.into(), &den.into())
                .expect("nonzero denominator")
        }
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    loop {
        let s = small_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn uniform_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| small_scalar(rng, field)).collect();
    Matrix::new(field, rows, cols, data).expect("consistent shape")
}

/// Sparse-ish integer entries in `{-1, 0, 1}`; keeps conjugations small.
fn unit_triangular<R: Rng>(rng: &mut R, field: Field, n: usize, upper: bool) -> Matrix {
    let mut m = Matrix::identity(field, n);
    for i in 0..n {
        for j in 0..n {
            if (upper && j > i) || (!upper && j < i) {
                m.set(i, j, field.from_i64(rng.gen_range(-1i64..=1)));
            }
        }
    }
    m
}

/// A random invertible matrix with determinant one.
pub fn unimodular<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let l = unit_triangular(rng, field, n, false);
    let u = unit_triangular(rng, field, n, true);
    l.mul(&u).expect("square factors")
}

pub fn invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let m = uniform_matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// One of: uniform, low-rank product, or `P diag(N, C) P^{-1}` with `N`
/// nilpotent Jordan blocks and `C` invertible.
pub fn structured_matrix<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    match rng.gen_range(0..3) {
        0 => uniform_matrix(rng, field, n, n),
        1 => {
            let r = rng.gen_range(0..n);
            let b = uniform_matrix(rng, field, n, r);
            let c = uniform_matrix(rng, field, r, n);
            b.mul(&c).expect("compatible shapes")
        }
        _ => {
            let core_dim = rng.gen_range(0..n);
            let mut blocks = Vec::new();
            let mut left = n - core_dim;
            while left > 0 {
                let size = rng.gen_range(1..=left);
                blocks.push(Matrix::jordan_zero(field, size));
                left -= size;
            }
            if core_dim > 0 {
                blocks.push(invertible(rng, field, core_dim));
            }
            let d = Matrix::block_diag(field, &blocks);
            let p = unimodular(rng, field, n);
            let p_inv = p.inverse().expect("square").expect("unimodular");
            p.mul(&d).and_then(|pd| pd.mul(&p_inv)).expect("square")
        }
    }
}

/// `count` structured matrices with dimensions drawn from `1..=max_dim`.
pub fn corpus<R: Rng>(rng: &mut R, field: Field, count: usize, max_dim: usize) -> Vec<Matrix> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_dim);
            structured_matrix(rng, field, n)
        })
        .collect()
}

/// A nonzero matrix of the given shape.
pub fn nonzero_matrix<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(field, n, n);
        for _ in 0..rng.gen_range(1..=n * n) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            m.set(i, j, small_scalar(rng, field));
        }
        if !m.is_zero() {
            return m;
        }
    }
}

/// Polynomial of degree at most `max_degree` with small coefficients.
pub fn poly<R: Rng>(rng: &mut R, field: Field, max_degree: usize) -> Poly {
    let d = rng.gen_range(0..=max_degree);
    let coeffs = (0..=d).map(|_| small_scalar(rng, field)).collect();
    Poly::from_coeffs(field, coeffs).expect("single field")
}

/// Monic polynomial of exact degree `degree`.
pub fn monic_poly<R: Rng>(rng: &mut R, field: Field, degree: usize) -> Poly {
    let mut coeffs: Vec<Scalar> = (0..degree).map(|_| small_scalar(rng, field)).collect();
    coeffs.push(field.one());
    Poly::from_coeffs(field, coeffs).expect("single field")
}
