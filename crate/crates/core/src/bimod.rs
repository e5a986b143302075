//! Finite-dimensional bimodules over a bound quiver algebra.
//!
//! Bimodules built from presentations live inside an ambient algebra `X`,
//! spanned by a subspace of `X` that is closed under multiplication by the
//! image of the acting algebra `A → X`. The actions are stored sparsely per
//! pair of basis elements.

use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraMap, BoundQuiverAlgebra};
use crate::exactla::{Field, LinAlgError, Matrix, Scalar, SparseVec, Subspace};
use crate::quiver::QuiverError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimodError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("subspace is not closed under the actions")]
    NotClosed,
    #[error("basis vector `{0}` is not homogeneous for the vertex grading")]
    NotHomogeneous(String),
    #[error("E² ≠ 0: `{0}` · `{1}` is nonzero")]
    SquareNonzero(String, String),
    #[error("bimodules do not share an ambient algebra")]
    NoAmbient,
    #[error("acting algebras differ")]
    ActingMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: Field,
    acting_dim: usize,
    generators: Vec<usize>,
    dim: usize,
    labels: Vec<String>,
    grading: Vec<(usize, usize)>,
    left: Vec<SparseVec>,
    right: Vec<SparseVec>,
    ambient: Option<Vec<Vec<Scalar>>>,
}

/// A bimodule homomorphism, as a matrix on basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub matrix: Matrix,
}

impl BimoduleMap {
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }
}

/// Where the products `x·f(y)` and `f(x)·y` of the 𝓔 condition are taken.
pub struct ProductContext<'a> {
    pub ambient: &'a BoundQuiverAlgebra,
}

fn generator_indices(a: &BoundQuiverAlgebra) -> Vec<usize> {
    let mut g: Vec<usize> = (0..a.quiver().vertex_count()).map(|v| a.idempotent(v)).collect();
    g.extend((0..a.quiver().arrows().len()).map(|x| a.arrow_basis(x)));
    g
}

impl Bimodule {
    /// `A` as a bimodule over itself.
    pub fn regular(a: &BoundQuiverAlgebra) -> Bimodule {
        let n = a.dim();
        let mut left = Vec::with_capacity(n * n);
        let mut right = vec![SparseVec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                left.push(a.mult(i, j).clone());
                right[j * n + i] = a.mult(j, i).clone();
            }
        }
        Bimodule {
            field: a.field(),
            acting_dim: n,
            generators: generator_indices(a),
            dim: n,
            labels: a.basis().iter().map(|p| a.quiver().display_path(p)).collect(),
            grading: (0..n).map(|i| a.grading(i)).collect(),
            left,
            right,
            ambient: Some((0..n).map(|i| a.unit_vec(i)).collect()),
        }
    }

    /// The subspace of `ambient` spanned by `spanning`, as a bimodule over
    /// `acting` through `iota`. The basis is the reduced echelon basis.
    pub fn inside(ambient: &BoundQuiverAlgebra, acting: &BoundQuiverAlgebra, iota: &AlgebraMap, spanning: Vec<Vec<Scalar>>) -> Result<Bimodule, BimodError> {
        let field = ambient.field();
        let space = Subspace::from_spanning(field, ambient.dim(), spanning);
        let basis: Vec<Vec<Scalar>> = space.basis().to_vec();
        let m = basis.len();
        let n = acting.dim();
        let mut grading = Vec::with_capacity(m);
        for v in &basis {
            let mut grades = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| ambient.grading(i));
            let first = grades.next().expect("basis vectors are nonzero");
            if grades.any(|g| g != first) {
                return Err(BimodError::NotHomogeneous(ambient.format_vec(v)));
            }
            grading.push(first);
        }
        let images: Vec<Vec<Scalar>> = (0..n).map(|i| iota.matrix().column(i)).collect();
        let mut left = Vec::with_capacity(n * m);
        let mut right = vec![SparseVec::new(); n * m];
        for (i, x) in images.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let l = space.coordinates(&ambient.mul_vec(x, v)).ok_or(BimodError::NotClosed)?;
                left.push(SparseVec::from_dense(&l));
                let r = space.coordinates(&ambient.mul_vec(v, x)).ok_or(BimodError::NotClosed)?;
                right[j * n + i] = SparseVec::from_dense(&r);
            }
        }
        Ok(Bimodule {
            field,
            acting_dim: n,
            generators: generator_indices(acting),
            dim: m,
            labels: basis.iter().map(|v| ambient.format_vec(v)).collect(),
            grading,
            left,
            right,
            ambient: Some(basis),
        })
    }

    /// An abstract bimodule from dense action matrices, one per basis element
    /// of `acting`: `left[i]` is `m ↦ b_i·m` and `right[i]` is `m ↦ m·b_i`.
    pub fn from_actions(acting: &BoundQuiverAlgebra, labels: Vec<String>, grading: Vec<(usize, usize)>, left: &[Matrix], right: &[Matrix]) -> Bimodule {
        let n = acting.dim();
        let m = labels.len();
        assert_eq!(left.len(), n);
        assert_eq!(right.len(), n);
        let mut l = Vec::with_capacity(n * m);
        let mut r = vec![SparseVec::new(); n * m];
        for i in 0..n {
            for j in 0..m {
                l.push(SparseVec::from_dense(&left[i].column(j)));
                r[j * n + i] = SparseVec::from_dense(&right[i].column(j));
            }
        }
        Bimodule { field: acting.field(), acting_dim: n, generators: generator_indices(acting), dim: m, labels, grading, left: l, right: r, ambient: None }
    }

    pub fn zero(acting: &BoundQuiverAlgebra) -> Bimodule {
        Bimodule::from_actions(acting, Vec::new(), Vec::new(), &vec![Matrix::zeros(acting.field(), 0, 0); acting.dim()], &vec![Matrix::zeros(acting.field(), 0, 0); acting.dim()])
    }

    /// `self ⊕ other`; the result has no ambient algebra.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule, BimodError> {
        if self.acting_dim != other.acting_dim {
            return Err(BimodError::ActingMismatch);
        }
        let n = self.acting_dim;
        let (m1, m2) = (self.dim, other.dim);
        let shift = |v: &SparseVec| SparseVec::from_entries(v.iter().map(|(k, c)| (k + m1, c.clone())));
        let mut left = Vec::with_capacity(n * (m1 + m2));
        for i in 0..n {
            left.extend((0..m1).map(|j| self.left(i, j).clone()));
            left.extend((0..m2).map(|j| shift(other.left(i, j))));
        }
        let mut right = Vec::with_capacity(n * (m1 + m2));
        for j in 0..m1 {
            right.extend((0..n).map(|i| self.right(j, i).clone()));
        }
        for j in 0..m2 {
            right.extend((0..n).map(|i| shift(other.right(j, i))));
        }
        Ok(Bimodule {
            field: self.field,
            acting_dim: n,
            generators: self.generators.clone(),
            dim: m1 + m2,
            labels: self.labels.iter().chain(&other.labels).cloned().collect(),
            grading: self.grading.iter().chain(&other.grading).copied().collect(),
            left,
            right,
            ambient: None,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn acting_dim(&self) -> usize {
        self.acting_dim
    }

    /// Acting basis indices of the idempotents and arrows.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `(x, y)` with `m_j ∈ e_x M e_y`.
    pub fn grading(&self, j: usize) -> (usize, usize) {
        self.grading[j]
    }

    /// `b_i · m_j`
    pub fn left(&self, i: usize, j: usize) -> &SparseVec {
        &self.left[i * self.dim + j]
    }

    /// `m_j · b_i`
    pub fn right(&self, j: usize, i: usize) -> &SparseVec {
        &self.right[j * self.acting_dim + i]
    }

    pub fn ambient_vectors(&self) -> Option<&[Vec<Scalar>]> {
        self.ambient.as_deref()
    }

    /// Ambient coordinates of a module vector.
    pub fn to_ambient(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let basis = self.ambient.as_ref()?;
        let len = basis.first().map_or(0, Vec::len);
        let mut out = vec![self.field.zero(); len];
        for (c, b) in v.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o += &(c * x);
            }
        }
        Some(out)
    }

    pub fn act_left(&self, a: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in m.iter() {
                let xy = x * y;
                entries.extend(self.left(*i, *j).iter().map(|(k, c)| (*k, &xy * c)));
            }
        }
        SparseVec::from_entries(entries)
    }

    pub fn act_right(&self, m: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (j, y) in m.iter() {
            for (i, x) in a.iter() {
                let xy = x * y;
                entries.extend(self.right(*j, *i).iter().map(|(k, c)| (*k, &xy * c)));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Dense matrix of `m ↦ b_i·m`.
    pub fn left_matrix(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.left(i, j).to_dense(self.field, self.dim)).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Dense matrix of `m ↦ m·b_i`.
    pub fn right_matrix(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.right(j, i).to_dense(self.field, self.dim)).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Unit, associativity of both actions and their compatibility, on all basis triples.
    pub fn check_actions(&self, acting: &BoundQuiverAlgebra) -> bool {
        let n = self.acting_dim;
        let one = SparseVec::from_dense(&acting.one_vec());
        let e = |k: usize| SparseVec::unit(k, self.field.one());
        for j in 0..self.dim {
            let m = e(j);
            if self.act_left(&one, &m) != m || self.act_right(&m, &one) != m {
                return false;
            }
            for a in 0..n {
                for b in 0..n {
                    let ab = acting.mult(a, b);
                    if self.act_left(ab, &m) != self.act_left(&e(a), self.left(b, j)) {
                        return false;
                    }
                    if self.act_right(&m, ab) != self.act_right(self.right(j, a), &e(b)) {
                        return false;
                    }
                    if self.act_right(self.left(a, j), &e(b)) != self.act_left(&e(a), self.right(j, b)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether every element of `elements` (acting coordinates) kills `self` on both sides.
    pub fn annihilated_by(&self, elements: &[Vec<Scalar>]) -> bool {
        elements.iter().all(|z| {
            let z = SparseVec::from_dense(z);
            (0..self.dim).all(|j| {
                let m = SparseVec::unit(j, self.field.one());
                self.act_left(&z, &m).is_zero() && self.act_right(&m, &z).is_zero()
            })
        })
    }

    /// `Hom_{A^e}(self, other)` as a subspace of row-major `other.dim × self.dim` matrices.
    pub fn hom(&self, other: &Bimodule) -> Result<Subspace, BimodError> {
        if self.acting_dim != other.acting_dim {
            return Err(BimodError::ActingMismatch);
        }
        let rows = hom_constraints(self, other);
        Ok(kernel_or_full(self.field, self.dim * other.dim, rows))
    }

    pub fn end_enveloping(&self) -> Subspace {
        self.hom(self).expect("same acting algebra")
    }
}

pub fn matrix_from_coords(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> BimoduleMap {
    BimoduleMap { matrix: Matrix::from_rows(field, cols, (0..rows).map(|r| v[r * cols..(r + 1) * cols].to_vec()).collect()) }
}

fn kernel_or_full(field: Field, unknowns: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
    if rows.is_empty() {
        Subspace::full(field, unknowns)
    } else {
        Matrix::from_rows(field, unknowns, rows).kernel()
    }
}

/// Rows of `F·(g·m) = g·F(m)` and `F(m·g) = F(m)·g` for generators `g`.
fn hom_constraints(src: &Bimodule, dst: &Bimodule) -> Vec<Vec<Scalar>> {
    let field = src.field;
    let (s, t) = (src.dim, dst.dim);
    let idx = |r: usize, c: usize| r * s + c;
    let mut rows = Vec::new();
    for &g in &src.generators {
        for j in 0..s {
            // Σ_c F[r,c] (g·m_j)_c − Σ_k (g·n_k)_r F[k,j] = 0 for each r, and likewise on the right.
            for is_left in [true, false] {
                let image_src = if is_left { src.left(g, j) } else { src.right(j, g) };
                let mut block = vec![vec![field.zero(); s * t]; t];
                for (c, x) in image_src.iter() {
                    for (r, row) in block.iter_mut().enumerate() {
                        row[idx(r, *c)] += x;
                    }
                }
                for k in 0..t {
                    let image_dst = if is_left { dst.left(g, k) } else { dst.right(k, g) };
                    for (r, x) in image_dst.iter() {
                        block[*r][idx(k, j)] -= x;
                    }
                }
                rows.extend(block.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())));
            }
        }
    }
    rows
}

/// The set 𝓔(M, T) of bimodule maps `f: M → T` with `x·f(y) + f(x)·y = 0`
/// for all `x, y ∈ M`, products taken in the context's ambient algebra.
pub fn curly_e(m: &Bimodule, target: &Bimodule, ctx: &ProductContext<'_>) -> Result<Subspace, BimodError> {
    if m.acting_dim != target.acting_dim {
        return Err(BimodError::ActingMismatch);
    }
    let (mv, tv) = match (m.ambient_vectors(), target.ambient_vectors()) {
        (Some(a), Some(b)) if a.first().is_none_or(|v| v.len() == ctx.ambient.dim()) && b.first().is_none_or(|v| v.len() == ctx.ambient.dim()) => (a, b),
        _ => return Err(BimodError::NoAmbient),
    };
    let field = m.field;
    let x_dim = ctx.ambient.dim();
    let (s, t) = (m.dim, target.dim);
    let mut rows = hom_constraints(m, target);
    // x·t_r and t_r·y in ambient coordinates.
    let left_prod: Vec<Vec<Vec<Scalar>>> = mv.iter().map(|x| tv.iter().map(|tr| ctx.ambient.mul_vec(x, tr)).collect()).collect();
    let right_prod: Vec<Vec<Vec<Scalar>>> = mv.iter().map(|y| tv.iter().map(|tr| ctx.ambient.mul_vec(tr, y)).collect()).collect();
    for u in 0..s {
        for w in 0..s {
            let mut block = vec![vec![field.zero(); s * t]; x_dim];
            for r in 0..t {
                for (k, c) in left_prod[u][r].iter().enumerate() {
                    if !c.is_zero() {
                        block[k][r * s + w] += c;
                    }
                }
                for (k, c) in right_prod[w][r].iter().enumerate() {
                    if !c.is_zero() {
                        block[k][r * s + u] += c;
                    }
                }
            }
            rows.extend(block.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())));
        }
    }
    Ok(kernel_or_full(field, s * t, rows))
}

/// The two-sided ideal of `ambient` generated by `arrows` over the image of
/// `acting`, as an `acting`-bimodule. Requires the ideal to square to zero.
pub fn arrow_ideal_bimodule<S: AsRef<str>>(ambient: &BoundQuiverAlgebra, acting: &BoundQuiverAlgebra, arrows: &[S]) -> Result<Bimodule, BimodError> {
    let iota = AlgebraMap::by_names(acting, ambient)?;
    iota.check_morphism(acting, ambient)?;
    let images: Vec<Vec<Scalar>> = (0..acting.dim()).map(|i| iota.matrix().column(i)).collect();
    let mut spanning = Vec::new();
    for name in arrows {
        let a = ambient.quiver().arrow_id(name.as_ref()).ok_or_else(|| AlgebraError::from(QuiverError::UnknownArrow(name.as_ref().to_string())))?;
        let x = ambient.unit_vec(ambient.arrow_basis(a));
        for l in &images {
            let lx = ambient.mul_vec(l, &x);
            if lx.iter().all(Scalar::is_zero) {
                continue;
            }
            for r in &images {
                spanning.push(ambient.mul_vec(&lx, r));
            }
        }
    }
    let e = Bimodule::inside(ambient, acting, &iota, spanning)?;
    let basis = e.ambient_vectors().expect("inside has an ambient");
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            if ambient.mul_vec(x, y).iter().any(|c| !c.is_zero()) {
                return Err(BimodError::SquareNonzero(e.labels[i].clone(), e.labels[j].clone()));
            }
        }
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct DirectSumCheck {
    pub e: Bimodule,
    pub e_s: Bimodule,
    pub e_sc: Bimodule,
    pub ok: bool,
}

/// Splits the ideal generated by `new_arrows` into the parts generated by
/// `s` and by its complement, and checks the sum is direct and exhaustive.
pub fn direct_sum_check<S: AsRef<str>>(ambient: &BoundQuiverAlgebra, acting: &BoundQuiverAlgebra, new_arrows: &[S], s: &[S]) -> Result<DirectSumCheck, BimodError> {
    let names: Vec<&str> = new_arrows.iter().map(AsRef::as_ref).collect();
    let chosen: Vec<&str> = s.iter().map(AsRef::as_ref).collect();
    let rest: Vec<&str> = names.iter().copied().filter(|n| !chosen.contains(n)).collect();
    let e = arrow_ideal_bimodule(ambient, acting, &names)?;
    let e_s = arrow_ideal_bimodule(ambient, acting, &chosen)?;
    let e_sc = arrow_ideal_bimodule(ambient, acting, &rest)?;
    let field = ambient.field();
    let span = |b: &Bimodule| Subspace::from_spanning(field, ambient.dim(), b.ambient_vectors().unwrap_or(&[]).to_vec());
    let (u, w) = (span(&e_s), span(&e_sc));
    let ok = u.intersect(&w)?.dim() == 0 && u.dim() + w.dim() == e.dim() && span(&e).contains_subspace(&u.sum(&w)?);
    Ok(DirectSumCheck { e, e_s, e_sc, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_LENGTH_CAP;
    use crate::qdsl::parse;

    const EX1: &str = include_str!("../fixtures/ex1.quiv");
    const EX2: &str = include_str!("../fixtures/ex2.quiv");

    fn algebras(text: &str) -> (BoundQuiverAlgebra, BoundQuiverAlgebra, BoundQuiverAlgebra) {
        let f = parse(text).unwrap();
        let b = |n: &str| BoundQuiverAlgebra::from_block(f.block(n).unwrap(), None, DEFAULT_LENGTH_CAP).unwrap();
        (b("C"), b("B"), b("Ctilde"))
    }

    #[test]
    fn relation_bimodules_of_example_one() {
        let (c, _, ct) = algebras(EX1);
        let e1 = arrow_ideal_bimodule(&ct, &c, &["eps"]).unwrap();
        assert_eq!(e1.labels(), &["eps".to_string()]);
        assert_eq!(e1.grading(0), (0, 1));
        assert!(e1.check_actions(&c));
        let check = direct_sum_check(&ct, &c, &["eps", "eps2"], &["eps"]).unwrap();
        assert!(check.ok);
        assert_eq!((check.e_s.dim(), check.e_sc.dim()), (1, 1));
    }

    #[test]
    fn relation_bimodules_of_example_two() {
        let (c, _, ct) = algebras(EX2);
        let e1 = arrow_ideal_bimodule(&ct, &c, &["eps"]).unwrap();
        let mut labels = e1.labels().to_vec();
        labels.sort();
        assert_eq!(labels, ["beta.eps", "beta.eps.alpha", "eps", "eps.alpha"]);
        let e = arrow_ideal_bimodule(&ct, &c, &["eps", "eps2"]).unwrap();
        assert_eq!(e.dim(), ct.dim() - c.dim());
        let check = direct_sum_check(&ct, &c, &["eps", "eps2"], &["eps"]).unwrap();
        assert!(check.ok);
        assert_eq!((check.e_s.dim(), check.e_sc.dim()), (4, 4));
        let empty: [&str; 0] = [];
        let none = direct_sum_check(&ct, &c, &["eps", "eps2"], &empty[..]).unwrap();
        assert!(none.ok);
        assert_eq!((none.e_s.dim(), none.e_sc.dim()), (0, 8));
    }

    #[test]
    fn square_nonzero_is_rejected() {
        let a = parse("algebra A\nvertices 1 2\narrow x 1 2\narrow y 2 1\nrel x.y.x\nrel y.x.y\nend\n").unwrap();
        let a = BoundQuiverAlgebra::from_block(&a.blocks[0], None, DEFAULT_LENGTH_CAP).unwrap();
        let k = a.quotient_by_arrows(&["x", "y"]).unwrap();
        let err = arrow_ideal_bimodule(&a, &k, &["x", "y"]).unwrap_err();
        assert!(matches!(err, BimodError::SquareNonzero(_, _)));
    }

    #[test]
    fn endomorphisms() {
        let (c, _, ct) = algebras(EX2);
        let e1 = arrow_ideal_bimodule(&ct, &c, &["eps"]).unwrap();
        assert_eq!(e1.end_enveloping().dim(), 1);
        let two = e1.direct_sum(&e1).unwrap();
        assert!(two.check_actions(&c));
        assert_eq!(two.end_enveloping().dim(), 4);
        assert_eq!(Bimodule::zero(&c).end_enveloping().dim(), 0);
        let reg = Bimodule::regular(&c);
        assert!(reg.check_actions(&c));
        // End of the regular bimodule is the center.
        assert_eq!(reg.end_enveloping().dim(), c.center().dim());
    }

    #[test]
    fn curly_e_of_example_one() {
        let (c, b, ct) = algebras(EX1);
        let ctx = ProductContext { ambient: &ct };
        let e1 = arrow_ideal_bimodule(&ct, &c, &["eps"]).unwrap();
        let c_in = arrow_image(&ct, &c);
        assert_eq!(curly_e(&e1, &c_in, &ctx).unwrap().dim(), 0);
        let e2 = arrow_ideal_bimodule(&ct, &b, &["eps2"]).unwrap();
        let b_in = arrow_image(&ct, &b);
        assert_eq!(curly_e(&e2, &b_in, &ctx).unwrap().dim(), 0);
    }

    fn arrow_image(ambient: &BoundQuiverAlgebra, sub: &BoundQuiverAlgebra) -> Bimodule {
        let iota = AlgebraMap::by_names(sub, ambient).unwrap();
        let cols = (0..sub.dim()).map(|i| iota.matrix().column(i)).collect();
        Bimodule::inside(ambient, sub, &iota, cols).unwrap()
    }
}
