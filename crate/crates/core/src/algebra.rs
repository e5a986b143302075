//! Bound quiver algebras `kQ/I` with an explicit path basis.
//!
//! For homogeneous relations the ideal is built one path length at a time:
//! the degree-`L` slice is spanned by the relations of length `L` together
//! with `R·I_{L-1}` and `I_{L-1}·R`, and the basis in degree `L` consists of
//! the non-pivot paths of its echelon form. Construction stops at the first
//! length where no path survives. Nonhomogeneous relations go through a
//! truncated computation in `kQ/R^T` instead (see [`BoundQuiverAlgebra::new`]).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::exactla::{Echelon, Field, LinAlgError, Matrix, Scalar, SparseVec, Subspace};
use crate::qdsl::AlgebraBlock;
use crate::quiver::{Path, Quiver, QuiverError};

pub const DEFAULT_LENGTH_CAP: usize = 64;
/// Refuse to build algebras with more basis elements than this.
pub const MAX_DIMENSION: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("not finite-dimensional within path length cap {0}")]
    NotFiniteDimensional(usize),
    #[error("dimension exceeds the supported limit of {0}")]
    TooLarge(usize),
    #[error("length cap must be at least 2, got {0}")]
    CapTooSmall(usize),
    #[error("elements belong to different algebras")]
    ParentMismatch,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("map is not an algebra morphism: {0}")]
    NotAMorphism(String),
}

/// `sum_k c_k p_k` over parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Path)>,
}

impl Relation {
    fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].1.len() == w[1].1.len())
    }

    fn min_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }

    fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra {
    name: String,
    quiver: Quiver,
    relations: Vec<Relation>,
    field: Field,
    cap: usize,
    basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    vanishing_length: usize,
    mult: Vec<SparseVec>,
    landing: Vec<Vec<(usize, usize, Scalar)>>,
}

impl BoundQuiverAlgebra {
    /// Builds an algebra from a parsed block. `field` overrides the block's field.
    pub fn from_block(block: &AlgebraBlock, field: Option<Field>, cap: usize) -> Result<Self, AlgebraError> {
        let field = field.or(block.field).unwrap_or_default();
        let quiver = Quiver::new(
            block.vertices.iter().map(String::as_str),
            block.arrows.iter().map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str())),
        )?;
        let mut relations = Vec::new();
        for rel in &block.relations {
            let mut terms = Vec::new();
            for t in &rel.terms {
                let c = field.from_rational(&t.coefficient)?;
                if c.is_zero() {
                    continue;
                }
                terms.push((c, quiver.path(&t.path)?));
            }
            if !terms.is_empty() {
                relations.push(Relation { terms });
            }
        }
        Self::new(block.name.clone(), quiver, relations, field, cap)
    }

    /// Builds `kQ/I` for the ideal generated by `relations`.
    ///
    /// Nonhomogeneous relations are handled in `kQ/R^T` for growing `T`; the
    /// first length `k < T` at which every path lies in `I + R^T` is taken as
    /// the vanishing length, which is correct when `I` contains all long
    /// enough paths (the admissible case).
    pub fn new(name: impl Into<String>, quiver: Quiver, relations: Vec<Relation>, field: Field, cap: usize) -> Result<Self, AlgebraError> {
        if cap < 2 {
            return Err(AlgebraError::CapTooSmall(cap));
        }
        let (basis, nf, vanishing_length) = if relations.iter().all(Relation::is_homogeneous) {
            let graded = Graded::build(&quiver, &relations, field, cap)?;
            let (basis, nf) = graded.finish(&quiver);
            let top = basis.iter().map(Path::len).max().unwrap_or(0) + 1;
            (basis, nf, top)
        } else {
            let trunc = Truncated::build(&quiver, &relations, field, cap)?;
            let top = trunc.vanishing;
            let (basis, nf) = trunc.finish();
            (basis, nf, top)
        };
        let basis_index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let dim = basis.len();
        let mut mult = vec![SparseVec::new(); dim * dim];
        let mut landing = vec![Vec::new(); dim];
        for i in 0..dim {
            for j in 0..dim {
                let Some(p) = basis[i].compose(&basis[j]) else { continue };
                let v = if p.len() >= vanishing_length { SparseVec::new() } else { nf(&p) };
                for (k, c) in v.iter() {
                    landing[*k].push((i, j, c.clone()));
                }
                mult[i * dim + j] = v;
            }
        }
        Ok(BoundQuiverAlgebra { name: name.into(), quiver, relations, field, cap, basis, basis_index, vanishing_length, mult, landing })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    /// Every path of at least this length is zero in the algebra.
    pub fn vanishing_length(&self) -> usize {
        self.vanishing_length
    }

    /// Basis index of the idempotent `e_v`.
    pub fn idempotent(&self, vertex: usize) -> usize {
        self.basis_index[&Path::stationary(vertex)]
    }

    /// Basis index of an arrow (arrows never lie in the ideal).
    pub fn arrow_basis(&self, arrow: usize) -> usize {
        self.basis_index[&Path::arrow(arrow, self.quiver.arrow(arrow))]
    }

    /// `(source, target)` of basis element `i`, so `b_i ∈ e_s A e_t`.
    pub fn grading(&self, i: usize) -> (usize, usize) {
        (self.basis[i].source(), self.basis[i].target())
    }

    /// `b_i · b_j` in basis coordinates.
    pub fn mult(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }

    /// All `(i, j, c)` with coefficient `c ≠ 0` of `b_k` in `b_i · b_j`.
    pub fn landing(&self, k: usize) -> &[(usize, usize, Scalar)] {
        &self.landing[k]
    }

    pub fn is_triangular(&self) -> bool {
        self.quiver.is_acyclic()
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn unit_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    pub fn one_vec(&self) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        for x in 0..self.quiver.vertex_count() {
            v[self.idempotent(x)] = self.field.one();
        }
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.mult(i, j).iter() {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Product of sparse vectors.
    pub fn mul_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let ab = a * b;
                entries.extend(self.mult(*i, *j).iter().map(|(k, c)| (*k, &ab * c)));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Normal form of a path.
    pub fn nf(&self, p: &Path) -> SparseVec {
        if let Some(i) = self.basis_index(p) {
            return SparseVec::unit(i, self.field.one());
        }
        if p.len() >= self.vanishing_length {
            return SparseVec::new();
        }
        let mut acc = SparseVec::unit(self.idempotent(p.source()), self.field.one());
        for &a in p.arrows() {
            acc = self.mul_sparse(&acc, &SparseVec::unit(self.arrow_basis(a), self.field.one()));
        }
        acc
    }

    /// Matrix of `m ↦ x·m` on basis coordinates.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|j| self.mul_vec(x, &self.unit_vec(j))).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    /// Matrix of `m ↦ m·x` on basis coordinates.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|j| self.mul_vec(&self.unit_vec(j), x)).collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    /// Center, as the common kernel of `z ↦ b z − z b` over all basis elements `b`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for b in 0..n {
            let mut block = vec![vec![self.field.zero(); n]; n];
            for z in 0..n {
                for (k, c) in self.mult(b, z).iter() {
                    block[*k][z] += c;
                }
                for (k, c) in self.mult(z, b).iter() {
                    block[*k][z] -= c;
                }
            }
            rows.extend(block);
        }
        Matrix::from_rows(self.field, n, rows).kernel()
    }

    /// The algebra obtained by deleting `arrows`; relation terms through a
    /// deleted arrow are dropped.
    pub fn quotient_by_arrows<S: AsRef<str>>(&self, arrows: &[S]) -> Result<BoundQuiverAlgebra, AlgebraError> {
        let mut deleted = Vec::new();
        for a in arrows {
            let id = self.quiver.arrow_id(a.as_ref()).ok_or_else(|| QuiverError::UnknownArrow(a.as_ref().to_string()))?;
            deleted.push(id);
        }
        let kept: Vec<usize> = (0..self.quiver.arrows().len()).filter(|a| !deleted.contains(a)).collect();
        let quiver = Quiver::new(
            self.quiver.vertices().iter().map(String::as_str),
            kept.iter().map(|&a| {
                let ar = self.quiver.arrow(a);
                (ar.name.as_str(), self.quiver.vertices()[ar.source].as_str(), self.quiver.vertices()[ar.target].as_str())
            }),
        )?;
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut terms = Vec::new();
            for (c, p) in &rel.terms {
                if deleted.iter().any(|&d| p.contains_arrow(d)) {
                    continue;
                }
                let names: Vec<&str> = p.arrows().iter().map(|&a| self.quiver.arrow(a).name.as_str()).collect();
                let q = if names.is_empty() { unreachable!("relation terms have length at least two") } else { quiver.path(&names)? };
                terms.push((c.clone(), q));
            }
            debug_assert!(terms.iter().all(|(_, p)| p.len() >= 2));
            if !terms.is_empty() {
                relations.push(Relation { terms });
            }
        }
        let shown: Vec<&str> = arrows.iter().map(AsRef::as_ref).collect();
        let name = if shown.is_empty() { self.name.clone() } else { format!("{}/<{}>", self.name, shown.join(",")) };
        BoundQuiverAlgebra::new(name, quiver, relations, self.field, self.cap)
    }

    pub fn element(&self, coords: Vec<Scalar>) -> AlgebraElement<'_> {
        assert_eq!(coords.len(), self.dim(), "coordinate length must equal the dimension");
        AlgebraElement { parent: self, coords }
    }

    pub fn one(&self) -> AlgebraElement<'_> {
        self.element(self.one_vec())
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement<'_> {
        self.element(self.unit_vec(i))
    }

    /// The element represented by a path given by arrow names (a single
    /// vertex name gives the idempotent).
    pub fn path_element<S: AsRef<str>>(&self, names: &[S]) -> Result<AlgebraElement<'_>, AlgebraError> {
        let p = match names {
            [v] if self.quiver.arrow_id(v.as_ref()).is_none() => {
                let id = self.quiver.vertex_id(v.as_ref()).ok_or_else(|| AlgebraError::UnknownVertex(v.as_ref().to_string()))?;
                Path::stationary(id)
            }
            _ => self.quiver.path(names)?,
        };
        Ok(self.element(self.nf(&p).to_dense(self.field, self.dim())))
    }

    /// Human-readable linear combination, e.g. `alpha.beta - 2*e_1`.
    pub fn format_vec(&self, v: &[Scalar]) -> String {
        format_combination(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (c.clone(), self.quiver.display_path(&self.basis[i]))))
    }

    /// Checks associativity on every basis triple.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mult(i, j);
                for k in 0..n {
                    let left = self.mul_sparse(ij, &SparseVec::unit(k, self.field.one()));
                    let right = self.mul_sparse(&SparseVec::unit(i, self.field.one()), self.mult(j, k));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn format_combination(terms: impl Iterator<Item = (Scalar, String)>) -> String {
    let mut out = String::new();
    for (c, label) in terms {
        let (neg, mag) = match c.as_rational() {
            Some(r) if r.is_negative() => (true, Scalar::Q(r.abs())),
            _ => (false, c),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {} over {})", self.name, self.dim(), self.field)
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraElement<'a> {
    parent: &'a BoundQuiverAlgebra,
    coords: Vec<Scalar>,
}

impl<'a> AlgebraElement<'a> {
    pub fn parent(&self) -> &'a BoundQuiverAlgebra {
        self.parent
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    fn check(&self, other: &AlgebraElement<'_>) -> Result<(), AlgebraError> {
        if std::ptr::eq(self.parent, other.parent) {
            Ok(())
        } else {
            Err(AlgebraError::ParentMismatch)
        }
    }

    pub fn multiply(&self, other: &AlgebraElement<'_>) -> Result<AlgebraElement<'a>, AlgebraError> {
        self.check(other)?;
        Ok(AlgebraElement { parent: self.parent, coords: self.parent.mul_vec(&self.coords, &other.coords) })
    }

    pub fn add(&self, other: &AlgebraElement<'_>) -> Result<AlgebraElement<'a>, AlgebraError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { parent: self.parent, coords })
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement<'a> {
        AlgebraElement { parent: self.parent, coords: self.coords.iter().map(|a| a * s).collect() }
    }
}

impl PartialEq for AlgebraElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.coords == other.coords
    }
}

impl fmt::Display for AlgebraElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parent.format_vec(&self.coords))
    }
}

/// A linear map between algebras given on basis paths by matching vertex and
/// arrow names: a path of the source goes to the normal form of the same word
/// in the target, or to 0 if it uses an arrow the target lacks.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    matrix: Matrix,
}

impl AlgebraMap {
    pub fn by_names(src: &BoundQuiverAlgebra, dst: &BoundQuiverAlgebra) -> Result<AlgebraMap, AlgebraError> {
        let field = dst.field();
        let mut cols = Vec::with_capacity(src.dim());
        for p in src.basis() {
            let sv = &src.quiver().vertices()[p.source()];
            let s = dst.quiver().vertex_id(sv).ok_or_else(|| AlgebraError::UnknownVertex(sv.clone()))?;
            let mut ids = Vec::new();
            let mut missing = false;
            for &a in p.arrows() {
                match dst.quiver().arrow_id(&src.quiver().arrow(a).name) {
                    Some(id) => ids.push(id),
                    None => missing = true,
                }
            }
            let col = if missing {
                dst.zero_vec()
            } else if ids.is_empty() {
                dst.unit_vec(dst.idempotent(s))
            } else {
                let q = dst.quiver().path_from_ids(&ids)?;
                dst.nf(&q).to_dense(field, dst.dim())
            };
            cols.push(col);
        }
        Ok(AlgebraMap { matrix: Matrix::from_columns(field, dst.dim(), &cols) })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    /// Checks unitality and multiplicativity on all basis pairs.
    pub fn check_morphism(&self, src: &BoundQuiverAlgebra, dst: &BoundQuiverAlgebra) -> Result<(), AlgebraError> {
        if self.apply(&src.one_vec()) != dst.one_vec() {
            return Err(AlgebraError::NotAMorphism("identity is not preserved".into()));
        }
        let images: Vec<Vec<Scalar>> = (0..src.dim()).map(|i| self.matrix.column(i)).collect();
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let lhs = self.apply(&src.mult(i, j).to_dense(src.field(), src.dim()));
                let rhs = dst.mul_vec(&images[i], &images[j]);
                if lhs != rhs {
                    let p = src.quiver().display_path(&src.basis()[i]);
                    let q = src.quiver().display_path(&src.basis()[j]);
                    return Err(AlgebraError::NotAMorphism(format!("product {p}·{q} is not preserved")));
                }
            }
        }
        Ok(())
    }
}

/// Per-length data of the graded construction.
struct Degree {
    candidates: Vec<Path>,
    index: HashMap<Vec<usize>, usize>,
    echelon: Echelon,
}

impl Degree {
    fn survivors(&self) -> Vec<usize> {
        (0..self.candidates.len()).filter(|&c| !self.echelon.is_pivot(c)).collect()
    }
}

struct Graded {
    field: Field,
    degrees: Vec<Degree>,
}

impl Graded {
    fn build(quiver: &Quiver, relations: &[Relation], field: Field, cap: usize) -> Result<Graded, AlgebraError> {
        let arrows: Vec<Path> = (0..quiver.arrows().len()).map(|a| Path::arrow(a, quiver.arrow(a))).collect();
        let mut g = Graded { field, degrees: Vec::new() };
        // Degree 0 is unused; degree 1 holds the arrows with an empty ideal slice.
        g.degrees.push(Degree { candidates: Vec::new(), index: HashMap::new(), echelon: Echelon::new(field) });
        g.degrees.push(Degree {
            index: arrows.iter().enumerate().map(|(i, p)| (p.arrows().to_vec(), i)).collect(),
            candidates: arrows.clone(),
            echelon: Echelon::new(field),
        });
        let mut total = quiver.vertex_count() + arrows.len();
        if arrows.is_empty() {
            return Ok(g);
        }
        let mut len = 2;
        loop {
            let prev = &g.degrees[len - 1];
            let mut candidates: Vec<Path> = Vec::new();
            for s in prev.survivors() {
                for a in &arrows {
                    if let Some(p) = prev.candidates[s].compose(a) {
                        candidates.push(p);
                    }
                }
            }
            if candidates.is_empty() {
                break;
            }
            if len > cap {
                return Err(AlgebraError::NotFiniteDimensional(cap));
            }
            candidates.sort();
            let index = candidates.iter().enumerate().map(|(i, p)| (p.arrows().to_vec(), i)).collect();
            g.degrees.push(Degree { candidates, index, echelon: Echelon::new(field) });

            let mut memo = HashMap::new();
            let mut gens: Vec<SparseVec> = Vec::new();
            for rel in relations.iter().filter(|r| r.max_len() == len) {
                let mut v = SparseVec::new();
                for (c, p) in &rel.terms {
                    v = v.axpy(c, &g.lift(len, p.arrows(), &mut memo));
                }
                gens.push(v);
            }
            let prev = &g.degrees[len - 1];
            for row in prev.echelon.rows() {
                for (ai, a) in quiver.arrows().iter().enumerate() {
                    let mut v = SparseVec::new();
                    for (c, coef) in row.iter() {
                        let p = &prev.candidates[*c];
                        if a.target != p.source() {
                            continue;
                        }
                        let mut word = vec![ai];
                        word.extend_from_slice(p.arrows());
                        v = v.axpy(coef, &g.lift(len, &word, &mut memo));
                    }
                    if !v.is_zero() {
                        gens.push(v);
                    }
                }
            }
            let deg = g.degrees.last_mut().expect("just pushed");
            for v in &gens {
                deg.echelon.push(v);
            }
            let surviving = deg.survivors().len();
            total += surviving;
            if total > MAX_DIMENSION {
                return Err(AlgebraError::TooLarge(MAX_DIMENSION));
            }
            if surviving == 0 {
                break;
            }
            len += 1;
        }
        Ok(g)
    }

    /// Coordinates of the word (length `len`) over the degree-`len`
    /// candidates, before reduction by the degree-`len` ideal slice.
    fn lift(&self, len: usize, word: &[usize], memo: &mut HashMap<Vec<usize>, SparseVec>) -> SparseVec {
        debug_assert_eq!(word.len(), len);
        if len == 1 {
            return SparseVec::unit(word[0], self.field.one());
        }
        let prefix = self.local_nf(len - 1, &word[..len - 1], memo);
        let deg = &self.degrees[len];
        let last = word[len - 1];
        let prev = &self.degrees[len - 1];
        SparseVec::from_entries(prefix.iter().map(|(c, x)| {
            let mut key = prev.candidates[*c].arrows().to_vec();
            key.push(last);
            (deg.index[&key], x.clone())
        }))
    }

    /// Normal form of a word of length `len` over the surviving candidates.
    fn local_nf(&self, len: usize, word: &[usize], memo: &mut HashMap<Vec<usize>, SparseVec>) -> SparseVec {
        if len == 1 {
            return SparseVec::unit(word[0], self.field.one());
        }
        if len >= self.degrees.len() {
            return SparseVec::new();
        }
        if let Some(v) = memo.get(word) {
            return v.clone();
        }
        let v = self.degrees[len].echelon.reduce(&self.lift(len, word, memo));
        memo.insert(word.to_vec(), v.clone());
        v
    }

    fn finish(self, quiver: &Quiver) -> (Vec<Path>, Box<dyn Fn(&Path) -> SparseVec>) {
        let mut basis: Vec<Path> = (0..quiver.vertex_count()).map(Path::stationary).collect();
        let mut offsets = vec![0usize; self.degrees.len()];
        let mut local_to_global: Vec<HashMap<usize, usize>> = vec![HashMap::new(); self.degrees.len()];
        for (len, deg) in self.degrees.iter().enumerate().skip(1) {
            offsets[len] = basis.len();
            for s in deg.survivors() {
                local_to_global[len].insert(s, basis.len());
                basis.push(deg.candidates[s].clone());
            }
        }
        let field = self.field;
        let nf = move |p: &Path| -> SparseVec {
            let len = p.len();
            if len == 0 {
                return SparseVec::unit(p.source(), field.one());
            }
            let mut memo = HashMap::new();
            let local = self.local_nf(len, p.arrows(), &mut memo);
            SparseVec::from_entries(local.iter().map(|(c, x)| (local_to_global[len][c], x.clone())))
        };
        (basis, Box::new(nf))
    }
}

/// Computation in `kQ/R^T` for nonhomogeneous relations. Pivots prefer
/// longer paths, so normal forms are written in the shortest paths possible.
struct Truncated {
    field: Field,
    paths: Vec<Path>,
    index: HashMap<Vec<usize>, usize>,
    echelon: Echelon,
    vanishing: usize,
}

const MAX_TRUNCATED_PATHS: usize = 50_000;

impl Truncated {
    fn build(quiver: &Quiver, relations: &[Relation], field: Field, cap: usize) -> Result<Truncated, AlgebraError> {
        let start = relations.iter().map(Relation::max_len).max().unwrap_or(1) + 1;
        for t in start..=cap + 1 {
            let mut paths = quiver.enumerate_paths(t - 1);
            if paths.len() > MAX_TRUNCATED_PATHS {
                return Err(AlgebraError::TooLarge(MAX_TRUNCATED_PATHS));
            }
            paths.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            let index: HashMap<Vec<usize>, usize> =
                paths.iter().enumerate().filter(|(_, p)| !p.is_empty()).map(|(i, p)| (p.arrows().to_vec(), i)).collect();
            let mut echelon = Echelon::new(field);
            for rel in relations {
                let room = (t - 1).saturating_sub(rel.min_len());
                let (s, e) = (rel.terms[0].1.source(), rel.terms[0].1.target());
                let lefts: Vec<&Path> = paths.iter().filter(|p| p.target() == s && p.len() <= room).collect();
                let rights: Vec<&Path> = paths.iter().filter(|p| p.source() == e && p.len() <= room).collect();
                for l in &lefts {
                    for r in rights.iter().filter(|r| l.len() + r.len() <= room) {
                        let v = SparseVec::from_entries(rel.terms.iter().filter_map(|(c, p)| {
                            let full = l.compose(p)?.compose(r)?;
                            (full.len() < t).then(|| (index[full.arrows()], c.clone()))
                        }));
                        echelon.push(&v);
                    }
                }
            }
            let vanishes = |k: usize| {
                paths.iter().filter(|p| p.len() == k).all(|p| echelon.contains(&SparseVec::unit(index[p.arrows()], field.one())))
            };
            if let Some(k) = (2..t).find(|&k| vanishes(k)) {
                return Ok(Truncated { field, paths, index, echelon, vanishing: k });
            }
        }
        Err(AlgebraError::NotFiniteDimensional(cap))
    }

    fn finish(self) -> (Vec<Path>, Box<dyn Fn(&Path) -> SparseVec>) {
        let mut survivors: Vec<usize> =
            (0..self.paths.len()).filter(|&i| self.paths[i].len() < self.vanishing && (self.paths[i].is_empty() || !self.echelon.is_pivot(i))).collect();
        survivors.sort_by(|&a, &b| self.paths[a].cmp(&self.paths[b]));
        let basis: Vec<Path> = survivors.iter().map(|&i| self.paths[i].clone()).collect();
        let to_global: HashMap<usize, usize> = survivors.iter().enumerate().map(|(g, &i)| (i, g)).collect();
        let stationary: HashMap<usize, usize> = basis.iter().enumerate().filter(|(_, p)| p.is_empty()).map(|(g, p)| (p.source(), g)).collect();
        let nf = move |p: &Path| -> SparseVec {
            if p.is_empty() {
                return SparseVec::unit(stationary[&p.source()], self.field.one());
            }
            if p.len() >= self.vanishing {
                return SparseVec::new();
            }
            let i = self.index[p.arrows()];
            let rem = self.echelon.reduce(&SparseVec::unit(i, self.field.one()));
            SparseVec::from_entries(rem.iter().map(|(c, x)| (to_global[c], x.clone())))
        };
        (basis, Box::new(nf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdsl::parse;

    pub(crate) const EX1: &str = "\
algebra C
vertices 1 2 3 4 5
arrow alpha 2 3
arrow beta 3 1
arrow delta 3 4
arrow gamma 5 3
rel alpha.beta
rel gamma.delta
end
";

    const EX2_B: &str = "\
algebra B
vertices 1 2 3 4
arrow alpha 4 2
arrow beta 2 1
arrow gamma 4 3
arrow delta 3 1
arrow eps 1 4
rel alpha.beta
rel gamma.delta
rel delta.eps
rel eps.gamma
end
";

    fn build(text: &str) -> BoundQuiverAlgebra {
        let f = parse(text).unwrap();
        BoundQuiverAlgebra::from_block(&f.blocks[0], None, DEFAULT_LENGTH_CAP).unwrap()
    }

    /// Independent count: enumerate paths up to `max` and drop those with a
    /// monomial relation as a subword.
    fn monomial_count(q: &Quiver, zero: &[Vec<usize>], max: usize) -> usize {
        q.enumerate_paths(max).iter().filter(|p| !zero.iter().any(|z| p.arrows().windows(z.len()).any(|w| w == z.as_slice()))).count()
    }

    #[test]
    fn example_one_dimension() {
        let a = build(EX1);
        assert_eq!(a.dim(), 11);
        let zero = vec![vec![0, 1], vec![3, 2]];
        assert_eq!(monomial_count(a.quiver(), &zero, 4), 11);
        let ab = a.path_element(&["alpha", "beta"]).unwrap();
        assert!(ab.is_zero());
        assert!(a.is_triangular());
    }

    #[test]
    fn example_two_b_has_a_cycle() {
        let b = build(EX2_B);
        assert_eq!(b.dim(), 12);
        let cycle = b.path_element(&["beta", "eps", "alpha"]).unwrap();
        assert!(!cycle.is_zero());
        assert!(!b.is_triangular());
        assert_eq!(b.center().dim(), 2);
        assert!(b.center().contains(cycle.coords()));
    }

    #[test]
    fn structural_invariants() {
        for text in [EX1, EX2_B] {
            let a = build(text);
            assert!(a.is_associative());
            let one = a.one();
            for i in 0..a.dim() {
                let b = a.basis_element(i);
                assert_eq!(one.multiply(&b).unwrap(), b);
                assert_eq!(b.multiply(&one).unwrap(), b);
                let (s, t) = a.grading(i);
                for x in 0..a.quiver().vertex_count() {
                    for y in 0..a.quiver().vertex_count() {
                        let ex = a.basis_element(a.idempotent(x));
                        let ey = a.basis_element(a.idempotent(y));
                        let sandwich = ex.multiply(&b).unwrap().multiply(&ey).unwrap();
                        assert_eq!(sandwich == b, (x, y) == (s, t));
                        assert_eq!(sandwich.is_zero(), (x, y) != (s, t));
                    }
                }
            }
            assert!(a.center().contains(&a.one_vec()));
        }
    }

    #[test]
    fn parent_mismatch() {
        let a = build(EX1);
        let b = build(EX1);
        assert_eq!(a.one().multiply(&b.one()).unwrap_err(), AlgebraError::ParentMismatch);
    }

    #[test]
    fn quotient_by_arrows_drops_terms() {
        let b = build(EX2_B);
        let c = b.quotient_by_arrows(&["eps"]).unwrap();
        assert_eq!(c.dim(), 8);
        assert_eq!(b.quotient_by_arrows::<&str>(&[]).unwrap().dim(), 12);
        let q = AlgebraMap::by_names(&c, &b).unwrap();
        let p = AlgebraMap::by_names(&b, &c).unwrap();
        q.check_morphism(&c, &b).unwrap();
        p.check_morphism(&b, &c).unwrap();
        assert_eq!(p.matrix().mul(q.matrix()), Matrix::identity(Field::Rational, 8));
    }

    #[test]
    fn commutativity_relation() {
        let text = "algebra S\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 4\narrow c 1 3\narrow d 3 4\nrel a.b - c.d\nend\n";
        let a = build(text);
        assert_eq!(a.dim(), 4 + 4 + 1);
        assert_eq!(a.path_element(&["a", "b"]).unwrap(), a.path_element(&["c", "d"]).unwrap());
    }

    #[test]
    fn relations_of_different_lengths() {
        let text = "algebra N\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 4\narrow c 2 3\narrow d 3 4\narrow x 1 3\nrel a.b - x.d\nrel a.c.d\nend\n";
        let a = build(text);
        assert!(a.is_associative());
        assert_eq!(a.dim(), 4 + 5 + 3);
    }

    #[test]
    fn nonhomogeneous_relation() {
        // x^2 = y^3 with xy = yx = 0: basis e, x, y, y^2, x^2.
        let text = "algebra L\nvertices 1\narrow x 1 1\narrow y 1 1\nrel x.x - y.y.y\nrel x.y\nrel y.x\nend\n";
        let a = build(text);
        assert_eq!(a.dim(), 5);
        assert!(a.is_associative());
        assert_eq!(a.path_element(&["x", "x"]).unwrap(), a.path_element(&["y", "y", "y"]).unwrap());
        assert!(a.path_element(&["x", "x", "x"]).unwrap().is_zero());
        assert!(!a.path_element(&["y", "y"]).unwrap().is_zero());
    }

    #[test]
    fn infinite_dimensional_is_rejected() {
        let f = parse("algebra L\nvertices 1\narrow x 1 1\nend\n").unwrap();
        let err = BoundQuiverAlgebra::from_block(&f.blocks[0], None, 8).unwrap_err();
        assert_eq!(err, AlgebraError::NotFiniteDimensional(8));
        let loops = parse("algebra L\nvertices 1\narrow x 1 1\nrel x.x\nend\n").unwrap();
        assert_eq!(BoundQuiverAlgebra::from_block(&loops.blocks[0], None, 8).unwrap().dim(), 2);
    }

    #[test]
    fn center_of_triangular_is_scalars() {
        assert_eq!(build(EX1).center().dim(), 1);
    }
}
