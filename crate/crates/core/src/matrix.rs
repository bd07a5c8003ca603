//! Dense matrices over an exact field.
//!
//! Elimination over `Q` is fraction-free (Bareiss) on an integer-scaled copy
//! of the input; over `F_p` it is plain Gauss-Jordan.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

/// Row-major dense matrix; every entry lives in `field`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(AlgebraError::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from small integer rows; panics on ragged input.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("rectangular rows")
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Block-diagonal matrix `diag(blocks...)`.
    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Nilpotent Jordan block `J_n(0)`: ones on the superdiagonal.
    pub fn jordan_zero(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 1..n {
            m.set(i - 1, i, field.one());
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(AlgebraError::InvalidInput(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn require_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_field(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.require_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `A^exp` by repeated squaring; `A^0 = I`.
    pub fn pow(&self, mut exp: usize) -> Result<Matrix> {
        self.require_square("matrix power")?;
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f(A)` by Horner's rule.
    pub fn poly_at(&self, f: &Poly) -> Result<Matrix> {
        self.require_square("polynomial evaluation")?;
        if f.field() != self.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: f.field(),
            });
        }
        let id = Matrix::identity(self.field, self.rows);
        let mut acc = Matrix::zeros(self.field, self.rows, self.cols);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self)?.add(&id.scale(c))?;
        }
        Ok(acc)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_field(other)?;
        if self.rows != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(self.field, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..cols {
                let v = if j < self.cols {
                    self.get(i, j)
                } else {
                    other.get(i, j - self.cols)
                };
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Columns `range` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m.set(i, j - start, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.field {
            Field::Rational => bareiss_rref(self),
            Field::Prime(_) => gauss_rref(self),
        }
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss_echelon(self).1.len(),
            Field::Prime(_) => gauss_rref(self).1.len(),
        }
    }

    /// Basis of `{v : Av = 0}` in canonical form.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut gens = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            gens.push(v);
        }
        Subspace::from_vectors(self.field, self.cols, &gens)
            .expect("kernel vectors have ambient length")
    }

    /// Basis of the column space in canonical form.
    pub fn image_basis(&self) -> Subspace {
        Subspace::from_generators(self)
    }

    /// One solution of `Ax = b` (free variables set to zero), if any exists.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = Matrix::from_columns(self.field, self.rows, &[b.to_vec()])?;
        let (r, pivots) = self.hstack(&rhs)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        self.require_square("inverse")?;
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(self.field, n))?.rref();
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return Ok(None);
        }
        Ok(Some(r.column_block(n, 2 * n)))
    }

    /// Monic least-degree `f` with `f(A) = 0`, found as the first linear
    /// dependency among the vectorized powers `I, A, A^2, ...`.
    pub fn minimal_polynomial(&self) -> Result<Poly> {
        self.require_square("minimal polynomial")?;
        let field = self.field;
        let n = self.rows;
        // (pivot, reduced vector with 1 at pivot, combination of powers)
        let mut basis: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
        let mut power = Matrix::identity(field, n);
        for k in 0..=n {
            let mut w = power.data.clone();
            let mut combo = vec![field.zero(); k + 1];
            combo[k] = field.one();
            for (p, v, c) in &basis {
                if w[*p].is_zero() {
                    continue;
                }
                let factor = w[*p].clone();
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi = &*wi - &(&factor * vi);
                }
                for (ci, bi) in combo.iter_mut().zip(c) {
                    *ci = &*ci - &(&factor * bi);
                }
            }
            match w.iter().position(|s| !s.is_zero()) {
                None => return Poly::from_coeffs(field, combo),
                Some(p) => {
                    let inv = w[p].inv()?;
                    let w = w.iter().map(|s| s * &inv).collect();
                    let combo = combo.iter().map(|s| s * &inv).collect();
                    basis.push((p, w, combo));
                }
            }
            power = power.mul(self)?;
        }
        Err(AlgebraError::InternalInconsistency(
            "no dependency among the first n+1 powers".into(),
        ))
    }

    /// `det(xI - A)` via reduction to upper Hessenberg form.
    pub fn characteristic_polynomial(&self) -> Result<Poly> {
        self.require_square("characteristic polynomial")?;
        let field = self.field;
        let n = self.rows;
        let mut h = self.clone();
        // Similarity transforms down to Hessenberg form.
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                h.swap_rows(piv, j + 1);
                h.swap_cols(piv, j + 1);
            }
            let inv = h.get(j + 1, j).inv()?;
            for i in j + 2..n {
                let t = h.get(i, j) * &inv;
                if t.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = h.get(i, c) - &(&t * h.get(j + 1, c));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = h.get(r, j + 1) + &(&t * h.get(r, i));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_k = det(xI - H[..k, ..k]) by the Hessenberg recurrence.
        let x = Poly::x_pow(field, 1);
        let mut p: Vec<Poly> = vec![Poly::one(field)];
        for k in 0..n {
            let mut next = x.sub(&Poly::constant(h.get(k, k).clone())).mul(&p[k]);
            let mut prod = field.one();
            for i in (0..k).rev() {
                prod = &prod * h.get(i + 1, i);
                let term = &prod * h.get(i, k);
                next = next.sub(&p[i].scale(&term));
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Plain Gauss-Jordan elimination over any field.
pub fn gauss_rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(piv) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(piv, row);
        let inv = a.get(row, col).inv().expect("nonzero pivot");
        for c in col..a.cols {
            let v = a.get(row, c) * &inv;
            a.set(row, c, v);
        }
        for i in 0..a.rows {
            if i == row || a.get(i, col).is_zero() {
                continue;
            }
            let factor = a.get(i, col).clone();
            for c in col..a.cols {
                let v = a.get(i, c) - &(&factor * a.get(row, c));
                a.set(i, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Integer rows spanning the same row space (each row scaled by the lcm of
/// its denominators).
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, s| {
                acc.lcm(s.as_rational().expect("rational entry").denom())
            });
            row.iter()
                .map(|s| {
                    let q = s.as_rational().unwrap();
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon form over `Z` of a rational matrix.
fn bareiss_echelon(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(piv) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        let p = a[row][col].clone();
        for i in row + 1..rows {
            let lead = a[i][col].clone();
            for c in col..cols {
                let num = &p * &a[i][c] - &lead * &a[row][c];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[i][c] = num / &prev;
            }
        }
        prev = p;
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// RREF over `Q` via fraction-free forward elimination then rational
/// back-substitution.
pub fn bareiss_rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (ech, pivots) = bareiss_echelon(m);
    let mut out = Matrix::zeros(Field::Rational, m.rows, m.cols);
    for (r, &p) in pivots.iter().enumerate() {
        let lead = ech[r][p].clone();
        for c in 0..m.cols {
            out.set(
                r,
                c,
                Scalar::Rational(BigRational::new(ech[r][c].clone(), lead.clone())),
            );
        }
    }
    for (r, &p) in pivots.iter().enumerate().rev() {
        for above in 0..r {
            let factor = out.get(above, p).clone();
            if factor.is_zero() {
                continue;
            }
            for c in p..m.cols {
                let v = out.get(above, c) - &(&factor * out.get(r, c));
                out.set(above, c, v);
            }
        }
    }
    (out, pivots)
}

/// A linear subspace of `k^n`, stored as a basis in reduced column echelon
/// form. Equality of values is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of the columns of `generators`.
    pub fn from_generators(generators: &Matrix) -> Subspace {
        let (r, pivots) = generators.transpose().rref();
        let mut basis = Matrix::zeros(generators.field(), generators.rows(), pivots.len());
        for j in 0..pivots.len() {
            for i in 0..generators.rows() {
                basis.set(i, j, r.get(j, i).clone());
            }
        }
        Subspace {
            ambient_dim: generators.rows(),
            basis,
        }
    }

    pub fn from_vectors(
        field: Field,
        ambient_dim: usize,
        vectors: &[Vec<Scalar>],
    ) -> Result<Subspace> {
        Ok(Subspace::from_generators(&Matrix::from_columns(
            field,
            ambient_dim,
            vectors,
        )?))
    }

    pub fn zero(field: Field, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(field, ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.basis.solve(v)?.is_some())
    }

    /// True iff `self ⊕ other` is the whole ambient space.
    pub fn is_complement_of(&self, other: &Subspace) -> Result<bool> {
        direct_sum_check(self, other)
    }
}

/// `V = K ⊕ W`: dimensions add up and the joint rank is full.
pub fn direct_sum_check(k: &Subspace, w: &Subspace) -> Result<bool> {
    if k.ambient_dim != w.ambient_dim {
        return Err(AlgebraError::InvalidInput(format!(
            "ambient dimensions {} and {} differ",
            k.ambient_dim, w.ambient_dim
        )));
    }
    if k.dim() + w.dim() != k.ambient_dim {
        return Ok(false);
    }
    Ok(k.basis.hstack(&w.basis)?.rank() == k.ambient_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Q.zero(); n];
        v[i] = Q.one();
        v
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::jordan_zero(Q, 3).rank(), 2);
        assert_eq!(Matrix::identity(Q, 4).rank(), 4);
        assert_eq!(Matrix::zeros(Q, 3, 2).rank(), 0);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(Matrix::from_i64_rows(f7, &[&[1, 2], &[3, 6]]).rank(), 1);
        assert_eq!(Matrix::from_i64_rows(f7, &[&[1, 2], &[3, 13]]).rank(), 1);
    }

    #[test]
    fn kernel_of_jordan_block() {
        let k = Matrix::jordan_zero(Q, 3).kernel_basis();
        assert_eq!(k, Subspace::from_vectors(Q, 3, &[e(3, 0)]).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let a = Matrix::from_i64_rows(Q, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            a.inverse().unwrap(),
            Some(Matrix::from_i64_rows(Q, &[&[1, -1], &[0, 1]]))
        );
        assert_eq!(Matrix::jordan_zero(Q, 2).inverse().unwrap(), None);
        assert!(Matrix::zeros(Q, 2, 3).inverse().is_err());
    }

    #[test]
    fn poly_at_matrix() {
        let x2 = Poly::x_pow(Q, 2);
        assert!(Matrix::jordan_zero(Q, 2).poly_at(&x2).unwrap().is_zero());
        let f = Poly::from_i64s(Q, &[3, 0, 1]);
        let a = Matrix::from_i64_rows(Q, &[&[1, 2], &[0, 1]]);
        let expected = a
            .mul(&a)
            .unwrap()
            .add(&Matrix::identity(Q, 2).scale(&Q.from_i64(3)))
            .unwrap();
        assert_eq!(a.poly_at(&f).unwrap(), expected);
    }

    #[test]
    fn direct_sum_examples() {
        let k = Subspace::from_vectors(Q, 3, &[e(3, 0)]).unwrap();
        let w = Subspace::from_vectors(Q, 3, &[e(3, 1), e(3, 2)]).unwrap();
        assert!(direct_sum_check(&k, &w).unwrap());

        let k = Subspace::from_vectors(Q, 2, &[e(2, 0)]).unwrap();
        let w = Subspace::from_vectors(Q, 2, &[vec![Q.one(), Q.one()]]).unwrap();
        assert!(direct_sum_check(&k, &w).unwrap());
        assert!(!direct_sum_check(&k, &k).unwrap());

        let other = Subspace::zero(Q, 3);
        assert!(direct_sum_check(&k, &other).is_err());
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(
            Matrix::identity(Q, 3).minimal_polynomial().unwrap(),
            Poly::from_i64s(Q, &[-1, 1])
        );
        assert_eq!(
            Matrix::jordan_zero(Q, 3).minimal_polynomial().unwrap(),
            Poly::x_pow(Q, 3)
        );
        // diag(J2(0), 2): x^2 (x - 2) = x^3 - 2x^2
        let a = Matrix::block_diag(
            Q,
            &[Matrix::jordan_zero(Q, 2), Matrix::from_i64_rows(Q, &[&[2]])],
        );
        assert_eq!(
            a.minimal_polynomial().unwrap(),
            Poly::from_i64s(Q, &[0, 0, -2, 1])
        );
        assert_eq!(
            Matrix::zeros(Q, 0, 0).minimal_polynomial().unwrap(),
            Poly::one(Q)
        );
    }

    #[test]
    fn characteristic_polynomial_small() {
        let a = Matrix::from_i64_rows(Q, &[&[1, 2], &[3, 4]]);
        // x^2 - 5x - 2
        assert_eq!(
            a.characteristic_polynomial().unwrap(),
            Poly::from_i64s(Q, &[-2, -5, 1])
        );
        let b = Matrix::from_i64_rows(Q, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            b.characteristic_polynomial().unwrap(),
            Poly::from_i64s(Q, &[-1, 0, 0, 1])
        );
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_i64_rows(Q, &[&[1, 1], &[2, 2]]);
        let b = vec![Q.from_i64(1), Q.from_i64(2)];
        assert_eq!(a.solve(&b).unwrap(), Some(vec![Q.one(), Q.zero()]));
        assert_eq!(a.solve(&[Q.one(), Q.one()]).unwrap(), None);
        assert!(a.solve(&[Q.one()]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Matrix::zeros(Q, 2, 3);
        assert!(matches!(a.mul(&a), Err(AlgebraError::DimensionMismatch(_))));
        assert!(a.pow(2).is_err());
        assert!(a.minimal_polynomial().is_err());
    }
}
