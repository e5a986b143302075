use super::{Field, LinAlgError, Matrix, Scalar};

/// A linear subspace of `field^ambient_dim`, stored by its canonical reduced
/// echelon basis. Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        Self::from_spanning(field, ambient_dim, Matrix::identity(field, ambient_dim).rows_vec())
    }

    pub fn from_spanning(field: Field, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        let m = Matrix::from_rows(field, ambient_dim, vectors);
        let rref = m.rref();
        let basis = (0..rref.rank).map(|r| rref.matrix.row(r).to_vec()).collect();
        Subspace { field, ambient_dim, basis, pivots: rref.pivots }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r -= &(c * x);
                }
            }
        }
        residual.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<(), LinAlgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinAlgError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_same_ambient(other)?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::from_spanning(self.field, self.ambient_dim, vectors))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_same_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field, self.ambient_dim));
        }
        // Solve sum_i a_i u_i = sum_j b_j w_j; the u-combinations span the intersection.
        let cols: Vec<Vec<Scalar>> = self.basis.iter().cloned().chain(other.basis.iter().map(|w| w.iter().map(|x| -x).collect())).collect();
        let system = Matrix::from_columns(self.field, self.ambient_dim, &cols);
        let kernel = system.kernel();
        let vectors = kernel
            .basis()
            .iter()
            .map(|k| {
                let mut v = vec![self.field.zero(); self.ambient_dim];
                for (a, u) in k.iter().zip(&self.basis) {
                    if a.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(u) {
                        *x += &(a * y);
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_spanning(self.field, self.ambient_dim, vectors))
    }

    /// Vectors of `sup`'s basis, greedily chosen, that extend a basis of
    /// `self` to a basis of `self + sup`. When `self ⊆ sup` they represent a
    /// basis of the quotient `sup / self`.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Vec<Scalar>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in sup.basis() {
            if !acc.contains(v) {
                out.push(v.clone());
                let mut vs = acc.basis.clone();
                vs.push(v.clone());
                acc = Subspace::from_spanning(self.field, self.ambient_dim, vs);
            }
        }
        out
    }

    /// Image of the subspace under a linear map (given as a matrix acting on columns).
    pub fn image(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient_dim);
        let vectors = self.basis.iter().map(|v| map.mul_vec(v)).collect();
        Subspace::from_spanning(self.field, map.rows(), vectors)
    }
}

impl Matrix {
    pub(crate) fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn intersect_self() {
        let a = Subspace::from_spanning(Q, 3, vec![v(&[1, 2, 0]), v(&[0, 1, 1])]);
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn intersect_complementary_coordinates() {
        let a = Subspace::from_spanning(Q, 3, vec![v(&[1, 0, 0])]);
        let b = Subspace::from_spanning(Q, 3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
    }

    #[test]
    fn intersect_plane_with_diagonal() {
        let a = Subspace::from_spanning(Q, 2, vec![v(&[1, 0]), v(&[0, 1])]);
        let b = Subspace::from_spanning(Q, 2, vec![v(&[1, 1])]);
        assert_eq!(a.intersect(&b).unwrap(), b);
    }

    #[test]
    fn intersect_dimension_mismatch() {
        let a = Subspace::zero(Q, 2);
        let b = Subspace::zero(Q, 3);
        assert!(matches!(a.intersect(&b), Err(LinAlgError::DimensionMismatch { .. })));
    }

    #[test]
    fn canonical_basis_is_span_invariant() {
        let a = Subspace::from_spanning(Q, 3, vec![v(&[1, 1, 0]), v(&[1, -1, 2])]);
        let b = Subspace::from_spanning(Q, 3, vec![v(&[2, 0, 2]), v(&[0, 2, -2]), v(&[3, 1, 2])]);
        assert_eq!(a, b);
    }

    #[test]
    fn complement_represents_quotient() {
        let small = Subspace::from_spanning(Q, 3, vec![v(&[1, 1, 0])]);
        let big = Subspace::full(Q, 3);
        let reps = small.complement_in(&big);
        assert_eq!(reps.len(), 2);
        assert_eq!(small.coordinates(&v(&[2, 2, 0])), Some(v(&[2])));
        assert_eq!(small.coordinates(&v(&[1, 0, 0])), None);
    }
}
