//! Dense exact linear algebra over a [`FieldSpec`]: rank, linear solve,
//! conjugate transpose, Gram matrix and row-space intersection dimension.
//!
//! Elimination is plain Gaussian elimination with deterministic pivoting
//! (first nonzero in column order); arithmetic is exact, so there are no
//! stability concerns and echelon forms are reproducible.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the system has no solution")]
    NoSolution,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct Matrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix {}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<u64> = (0..self.cols).map(|c| self.get(r, c).index()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(
        field: Arc<FieldSpec>,
        rows: usize,
        cols: usize,
        data: Vec<FieldElem>,
    ) -> Result<Matrix, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|&x| !field.owns(x)) {
            return Err(MatrixError::FieldMismatch);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Arc<FieldSpec>, rows: usize, cols: usize) -> Matrix {
        let z = field.zero();
        Matrix {
            field,
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: Arc<FieldSpec>, rows: Vec<Vec<FieldElem>>) -> Result<Matrix, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElem) {
        assert!(r < self.rows && c < self.cols);
        assert!(self.field.owns(x));
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Entrywise Frobenius conjugation.
    pub fn conj(&self) -> Result<Matrix, MatrixError> {
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|&x| f.frobenius(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// (M^dagger)_{ij} = (M_{ji})^q.
    pub fn conj_transpose(&self) -> Result<Matrix, MatrixError> {
        Ok(self.conj()?.transpose())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if !Arc::ptr_eq(&self.field, &other.field) && self.field.order() != other.field.order() {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(self.field.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// G G^dagger; entry (r, c) = sum_k G[r][k] * G[c][k]^q.
    pub fn gram(&self) -> Result<Matrix, MatrixError> {
        let f = &self.field;
        let mut out = Matrix::zeros(self.field.clone(), self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.rows {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, k), f.frobenius(self.get(c, k))?));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Row-reduces in place, returning the pivot columns. Deterministic: for
    /// each column the first row with a nonzero entry becomes the pivot.
    fn echelonize(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero());
            let Some(r) = found else { continue };
            if r != pivot_row {
                for c in 0..self.cols {
                    let (a, b) = (self.get(pivot_row, c), self.get(r, c));
                    self.set(pivot_row, c, b);
                    self.set(r, c, a);
                }
            }
            let pivot = self.get(pivot_row, col);
            let inv = f.inv(pivot).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(pivot_row, c), inv);
                self.set(pivot_row, c, v);
            }
            for r2 in 0..self.rows {
                if r2 == pivot_row || self.get(r2, col).is_zero() {
                    continue;
                }
                let factor = self.get(r2, col);
                for c in col..self.cols {
                    let v = f.sub(self.get(r2, c), f.mul(factor, self.get(pivot_row, c)));
                    self.set(r2, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelonize().len()
    }

    /// Solves A x = b for one solution, verifying it by substitution. Free
    /// variables are set to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Vec<FieldElem>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "matrix has {} rows, right side has {}",
                self.rows,
                b.len()
            )));
        }
        let f = &self.field;
        let mut aug = Matrix::zeros(self.field.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.echelonize();
        // A pivot in the augmented column means the system is inconsistent.
        if pivots.last() == Some(&self.cols) {
            return Err(MatrixError::NoSolution);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols);
        }
        for r in 0..self.rows {
            let mut acc = f.zero();
            for c in 0..self.cols {
                acc = f.add(acc, f.mul(self.get(r, c), x[c]));
            }
            if acc != b[r] {
                return Err(MatrixError::NoSolution);
            }
        }
        Ok(x)
    }

    /// Basis of { x : M x^T = 0 }, one row per basis vector.
    pub fn nullspace_basis(&self) -> Matrix {
        let f = &self.field;
        let mut work = self.clone();
        let pivots = work.echelonize();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field.clone(), free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, f.one());
            for (row, &pc) in pivots.iter().enumerate() {
                basis.set(bi, pc, f.neg(work.get(row, fc)));
            }
        }
        basis
    }

    pub fn stack(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "stacking {} columns onto {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::new(self.field.clone(), self.rows + other.rows, self.cols, data)
    }

    /// dim(rowspace(M1) intersect rowspace(M2)) via the rank identity.
    pub fn row_space_intersection_dim(&self, other: &Matrix) -> Result<usize, MatrixError> {
        let stacked = self.stack(other)?;
        Ok(self.rank() + other.rank() - stacked.rank())
    }

    /// Leading d x d block.
    pub fn leading_submatrix(&self, d: usize) -> Matrix {
        assert!(d <= self.rows && d <= self.cols);
        let mut out = Matrix::zeros(self.field.clone(), d, d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(f: &Arc<FieldSpec>, rows: usize, cols: usize, rng: &mut StdRng) -> Matrix {
        let data = (0..rows * cols)
            .map(|_| f.elem_from_index(rng.gen_range(0..f.order())))
            .collect();
        Matrix::new(f.clone(), rows, cols, data).unwrap()
    }

    #[test]
    fn rank_of_trivial_matrices() {
        let f = FieldSpec::new(13, 2).unwrap();
        assert_eq!(Matrix::zeros(f.clone(), 5, 5).rank(), 0);
        assert_eq!(Matrix::identity(f.clone(), 7).rank(), 7);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&f, 4, 6, &mut rng);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn solve_identity_and_singular() {
        let f = FieldSpec::new(13, 2).unwrap();
        let id = Matrix::identity(f.clone(), 4);
        let b: Vec<_> = (0..4).map(|i| f.elem_from_index(i + 5)).collect();
        assert_eq!(id.solve(&b).unwrap(), b);

        // Singular 2x2 with inconsistent right side.
        let one = f.one();
        let two = f.elem_from_int(2);
        let sing = Matrix::new(f.clone(), 2, 2, vec![one, one, two, two]).unwrap();
        let b = vec![f.one(), f.one()];
        assert_eq!(sing.solve(&b).unwrap_err(), MatrixError::NoSolution);
        // Consistent singular system still returns a verified solution.
        let b = vec![f.one(), f.elem_from_int(2)];
        let x = sing.solve(&b).unwrap();
        assert_eq!(f.add(x[0], x[1]), f.one());
    }

    #[test]
    fn solve_vandermonde_unique() {
        // Distinct powers of g give an invertible Vandermonde system.
        let f = FieldSpec::new(13, 2).unwrap();
        let g = f.generator();
        let nodes: Vec<_> = (1..=4).map(|i| f.pow(g, i)).collect();
        let rows: Vec<Vec<_>> = nodes
            .iter()
            .map(|&x| (0..4).map(|e| f.pow(x, e)).collect())
            .collect();
        let vm = Matrix::from_rows(f.clone(), rows).unwrap();
        assert_eq!(vm.rank(), 4);
        let b: Vec<_> = (0..4).map(|i| f.elem_from_index(i * 3 + 1)).collect();
        let x = vm.solve(&b).unwrap();
        let mut check = Vec::new();
        for r in 0..4 {
            let mut acc = f.zero();
            for c in 0..4 {
                acc = f.add(acc, f.mul(vm.get(r, c), x[c]));
            }
            check.push(acc);
        }
        assert_eq!(check, b);
    }

    #[test]
    fn conj_transpose_involution() {
        let f = FieldSpec::new(5, 2).unwrap();
        let x = f.generator();
        let m1 = Matrix::new(f.clone(), 1, 1, vec![x]).unwrap();
        assert_eq!(m1.conj_transpose().unwrap().get(0, 0), f.pow(x, 5));

        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let m = random_matrix(&f, 3, 4, &mut rng);
            assert_eq!(m.conj_transpose().unwrap().conj_transpose().unwrap(), m);
        }
    }

    #[test]
    fn conj_transpose_of_subfield_matrix_is_transpose() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        let data: Vec<_> = (0..12)
            .map(|_| f.subfield_star(rng.gen_range(0..4)).unwrap())
            .collect();
        let m = Matrix::new(f.clone(), 3, 4, data).unwrap();
        assert_eq!(m.conj_transpose().unwrap(), m.transpose());
    }

    #[test]
    fn gram_is_hermitian() {
        let f = FieldSpec::new(13, 2).unwrap();
        assert_eq!(
            Matrix::zeros(f.clone(), 3, 5).gram().unwrap(),
            Matrix::zeros(f.clone(), 3, 3)
        );
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..10 {
            let m = random_matrix(&f, 3, 6, &mut rng);
            let gm = m.gram().unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    assert_eq!(f.frobenius(gm.get(r, c)).unwrap(), gm.get(c, r));
                }
            }
        }
    }

    #[test]
    fn row_space_intersections() {
        let f = FieldSpec::new(13, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        let m = random_matrix(&f, 3, 6, &mut rng);
        assert_eq!(m.row_space_intersection_dim(&m).unwrap(), m.rank());

        // Disjoint coordinate supports intersect trivially.
        let mut m1 = Matrix::zeros(f.clone(), 2, 6);
        let mut m2 = Matrix::zeros(f.clone(), 2, 6);
        for i in 0..2 {
            m1.set(i, i, f.one());
            m2.set(i, i + 3, f.one());
        }
        assert_eq!(m1.row_space_intersection_dim(&m2).unwrap(), 0);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = FieldSpec::new(5, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..10 {
            let m = random_matrix(&f, 3, 7, &mut rng);
            let ns = m.nullspace_basis();
            assert_eq!(ns.rows(), 7 - m.rank());
            for r in 0..ns.rows() {
                for mr in 0..m.rows() {
                    let mut acc = f.zero();
                    for c in 0..7 {
                        acc = f.add(acc, f.mul(m.get(mr, c), ns.get(r, c)));
                    }
                    assert!(acc.is_zero());
                }
            }
        }
    }
}
