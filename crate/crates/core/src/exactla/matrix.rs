use std::fmt;

use super::{Field, LinAlgError, Scalar, Subspace};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { field, rows: n, cols, data }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, cols, rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
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
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend(self.row(r).iter().cloned());
            data.extend(other.row(r).iter().cloned());
        }
        Matrix { field: self.field, rows: self.rows, cols, data }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(found) = (prow..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(prow, found);
            let inv = m.get(prow, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(prow, c) * &inv;
                m.set(prow, c, v);
            }
            for r in 0..m.rows {
                if r == prow || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let p = m.get(prow, c);
                    if p.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * p);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Rref { rank: pivots.len(), pivots, matrix: m }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of the right null space.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -matrix.get(row, free);
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.field, self.cols, basis)
    }

    /// Some solution `x` of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinAlgError> {
        if rhs.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: rhs.len() });
        }
        let column = Matrix::from_columns(self.field, self.rows, &[rhs.to_vec()]);
        let Rref { matrix, pivots, .. } = self.hstack(&column).rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn rref_identity() {
        let r = Matrix::identity(Q, 2).rref();
        assert_eq!(r.matrix, Matrix::identity(Q, 2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let z = Matrix::zeros(Q, 3, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_proportional_rows() {
        let r = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(Q, 4).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(Q, 1, 3).kernel().dim(), 3);
        let k = Matrix::from_i64(Q, &[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], vec![Q.from_i64(1), Q.from_i64(-1)]);
    }

    #[test]
    fn solve_examples() {
        let v = vec![Q.from_i64(3), Q.from_i64(-2)];
        assert_eq!(Matrix::identity(Q, 2).solve(&v).unwrap(), Some(v.clone()));

        let m = Matrix::from_i64(Q, &[&[1, 1]]);
        let x = m.solve(&[Q.zero()]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![Q.zero()]);

        let m = Matrix::from_i64(Q, &[&[1], &[1]]);
        assert_eq!(m.solve(&[Q.from_i64(1), Q.from_i64(2)]).unwrap(), None);
        assert!(m.solve(&[Q.zero()]).is_err());
    }

    #[test]
    fn kernel_over_prime_field_differs_in_char_two() {
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_i64(f2, &[&[1, 1], &[1, -1]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(Matrix::from_i64(Q, &[&[1, 1], &[1, -1]]).rank(), 2);
    }
}
