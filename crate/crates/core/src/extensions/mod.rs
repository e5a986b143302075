//! Relation extensions `C̃ = C ⋉ E` and their partial versions `B = C ⋉ E′`.
//!
//! A fixture gives `C` and `C̃` as two presentations where `C̃` adds "new"
//! arrows. Choosing a subset `S` of them gives `B`, the quotient of `C̃` by
//! the remaining new arrows, with `E′` the ideal generated by `S`. The
//! complementary ideal of `C̃` is written `E″`, so `C̃ = B ⋉ E″`.

mod poset;
mod verify;

use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraMap, BoundQuiverAlgebra, DEFAULT_LENGTH_CAP};
use crate::bimod::{arrow_ideal_bimodule, direct_sum_check, BimodError, Bimodule};
use crate::exactla::{Field, LinAlgError, Matrix, Scalar, SparseVec};
use crate::hochschild::{h0, h1, CohomologySpace, HochschildError, Slots, H1};
use crate::qdsl::PresentationFile;
use crate::repmod::{ext2_dimension, RepError};

pub use poset::{poset, ExtensionPoset, PosetEdge, PosetNode, MAX_NEW_ARROWS};
pub use verify::{verify_theorem, Check, Identity, OracleEntry, ProjectionReport, Row, TheoremReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bimod(#[from] BimodError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("no algebra named `{0}`")]
    UnknownBlock(String),
    #[error("`{tilde}` does not contain every arrow of `{base}`")]
    NotAnExtension { base: String, tilde: String },
    #[error("`{0}` is not a new arrow")]
    UnknownNewArrow(String),
    #[error("the ideals generated by {0:?} and its complement do not split the relation bimodule")]
    SplittingFails(Vec<String>),
    #[error("dim Ext² = {ext2} but the new arrows generate an ideal of dimension {ideal}")]
    Ext2Mismatch { ext2: usize, ideal: usize },
    #[error("new arrow `{arrow}` has no relation of the base running from its target to its source")]
    OppositionViolated { arrow: String },
    #[error("projection is not a retraction of the inclusion")]
    SectionFails,
    #[error("too many new arrows ({0}) to enumerate")]
    TooManyArrows(usize),
}

/// A base algebra together with its relation extension.
#[derive(Clone, Debug)]
pub struct RelationExtension {
    pub base: BoundQuiverAlgebra,
    pub tilde: BoundQuiverAlgebra,
    pub new_arrows: Vec<String>,
    pub ext2: usize,
}

impl RelationExtension {
    /// Builds both algebras and validates `E² = 0`, the Ext² count and the
    /// orientation of every new arrow against the relations of the base.
    pub fn from_file(file: &PresentationFile, base: &str, tilde: &str, field: Option<Field>) -> Result<RelationExtension, ExtensionError> {
        let block = |n: &str| file.block(n).ok_or_else(|| ExtensionError::UnknownBlock(n.to_string()));
        let c = BoundQuiverAlgebra::from_block(block(base)?, field, DEFAULT_LENGTH_CAP)?;
        let ct = BoundQuiverAlgebra::from_block(block(tilde)?, field, DEFAULT_LENGTH_CAP)?;
        RelationExtension::new(c, ct)
    }

    pub fn new(c: BoundQuiverAlgebra, ct: BoundQuiverAlgebra) -> Result<RelationExtension, ExtensionError> {
        let mismatch = || ExtensionError::NotAnExtension { base: c.name().to_string(), tilde: ct.name().to_string() };
        if c.quiver().vertices() != ct.quiver().vertices() {
            return Err(mismatch());
        }
        for a in c.quiver().arrows() {
            match ct.quiver().arrow_id(&a.name).map(|i| ct.quiver().arrow(i)) {
                Some(b) if (b.source, b.target) == (a.source, a.target) => {}
                _ => return Err(mismatch()),
            }
        }
        let new_arrows: Vec<String> = ct.quiver().arrows().iter().filter(|a| c.quiver().arrow_id(&a.name).is_none()).map(|a| a.name.clone()).collect();
        for name in &new_arrows {
            let a = ct.quiver().arrow(ct.quiver().arrow_id(name).expect("listed"));
            let opposed = c.relations().iter().any(|r| r.terms.first().is_some_and(|(_, p)| p.source() == a.target && p.target() == a.source));
            if !opposed {
                return Err(ExtensionError::OppositionViolated { arrow: name.clone() });
            }
        }
        let e = arrow_ideal_bimodule(&ct, &c, &new_arrows)?;
        let ext2 = ext2_dimension(&c)?;
        if ext2 != e.dim() || ct.dim() != c.dim() + e.dim() {
            return Err(ExtensionError::Ext2Mismatch { ext2, ideal: e.dim() });
        }
        Ok(RelationExtension { base: c, tilde: ct, new_arrows, ext2 })
    }

    /// The partial extension generated by the new arrows in `s`.
    pub fn split<S: AsRef<str>>(&self, s: &[S]) -> Result<SplitPresentation, ExtensionError> {
        let mut chosen: Vec<String> = Vec::new();
        for name in s {
            let name = name.as_ref();
            if !self.new_arrows.iter().any(|n| n == name) {
                return Err(ExtensionError::UnknownNewArrow(name.to_string()));
            }
            if !chosen.iter().any(|n| n == name) {
                chosen.push(name.to_string());
            }
        }
        // Keep the fixture's arrow order so reports do not depend on argument order.
        chosen.sort_by_key(|n| self.new_arrows.iter().position(|m| m == n));
        let check = direct_sum_check(&self.tilde, &self.base, &self.new_arrows, &chosen)?;
        if !check.ok {
            return Err(ExtensionError::SplittingFails(chosen));
        }
        let rest: Vec<&str> = self.new_arrows.iter().map(String::as_str).filter(|n| !chosen.iter().any(|c| c == n)).collect();
        let b = if rest.is_empty() { self.tilde.clone() } else { self.tilde.quotient_by_arrows(&rest)? };
        SplitPresentation::new(self.base.clone(), b, chosen)
    }
}

/// `B = C ⋉ E′` with the inclusion `q: C → B` and projection `p: B → C`.
#[derive(Clone, Debug)]
pub struct SplitPresentation {
    pub base: BoundQuiverAlgebra,
    pub extension: BoundQuiverAlgebra,
    /// `E′` as a `C`-bimodule inside `B`.
    pub ideal: Bimodule,
    pub new_arrows: Vec<String>,
    pub p: AlgebraMap,
    pub q: AlgebraMap,
}

impl SplitPresentation {
    pub fn new(c: BoundQuiverAlgebra, b: BoundQuiverAlgebra, new_arrows: Vec<String>) -> Result<SplitPresentation, ExtensionError> {
        let p = AlgebraMap::by_names(&b, &c)?;
        let q = AlgebraMap::by_names(&c, &b)?;
        p.check_morphism(&b, &c)?;
        q.check_morphism(&c, &b)?;
        if p.matrix().mul(q.matrix()) != Matrix::identity(c.field(), c.dim()) {
            return Err(ExtensionError::SectionFails);
        }
        let ideal = arrow_ideal_bimodule(&b, &c, &new_arrows)?;
        if b.dim() != c.dim() + ideal.dim() {
            return Err(ExtensionError::SplittingFails(new_arrows));
        }
        Ok(SplitPresentation { base: c, extension: b, ideal, new_arrows, p, q })
    }
}

/// Builds `C`, `C̃` and the partial extension for `s` from a presentation file.
pub fn build_split<S: AsRef<str>>(file: &PresentationFile, base: &str, tilde: &str, s: &[S], field: Option<Field>) -> Result<SplitPresentation, ExtensionError> {
    RelationExtension::from_file(file, base, tilde, field)?.split(s)
}

/// The map induced on `HH⁰` or `HH¹` by an algebra surjection `p`, in the
/// representative bases of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub degree: usize,
    pub matrix: Matrix,
    /// Coboundaries were sent to coboundaries.
    pub well_defined: bool,
}

impl Projection {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.matrix.rows()
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - self.rank()
    }
}

fn matrix_of_columns(field: Field, rows: usize, cols: Vec<Vec<Scalar>>) -> Matrix {
    if cols.is_empty() {
        Matrix::zeros(field, rows, 0)
    } else {
        Matrix::from_columns(field, rows, &cols)
    }
}

/// Pushes a normalized derivation of `big` down along `p`, keeping the arrows
/// the smaller algebra shares with it.
pub(crate) fn push_derivation(big: &BoundQuiverAlgebra, big_slots: &Slots, small: &BoundQuiverAlgebra, small_slots: &Slots, p: &AlgebraMap, values: &[Scalar]) -> Vec<Scalar> {
    let field = small.field();
    let mut out = vec![field.zero(); small_slots.len()];
    for (ai, arrow) in small.quiver().arrows().iter().enumerate() {
        let bi = big.quiver().arrow_id(&arrow.name).expect("shared arrow");
        let v = big_slots.arrow_value(values, bi).to_dense(field, big.dim());
        let image = SparseVec::from_dense(&p.apply(&v));
        let enc = small_slots.encode(ai, &image, field).expect("projection preserves the grading");
        for (o, e) in out.iter_mut().zip(enc) {
            if !e.is_zero() {
                *o = e;
            }
        }
    }
    out
}

pub(crate) fn project_h1(big: &BoundQuiverAlgebra, hb: &H1, small: &BoundQuiverAlgebra, hs: &H1, p: &AlgebraMap) -> Projection {
    let field = small.field();
    let push = |v: &[Scalar]| push_derivation(big, &hb.slots, small, &hs.slots, p, v);
    let well_defined = hb.space.coboundaries().basis().iter().all(|v| hs.space.coboundaries().contains(&push(v)));
    let cols = hb.space.representatives().iter().map(|v| hs.space.class_coordinates(&push(v)).expect("image of a derivation is a derivation")).collect();
    Projection { degree: 1, matrix: matrix_of_columns(field, hs.dim(), cols), well_defined }
}

pub(crate) fn project_h0(hb: &CohomologySpace, small: &BoundQuiverAlgebra, hs: &CohomologySpace, p: &AlgebraMap) -> Projection {
    let cols: Vec<Vec<Scalar>> = hb.representatives().iter().map(|z| p.apply(z)).collect();
    let well_defined = cols.iter().all(|v| hs.cocycles().contains(v));
    let cols = cols.iter().map(|v| hs.class_coordinates(v).unwrap_or_else(|| vec![small.field().zero(); hs.dim()])).collect();
    Projection { degree: 0, matrix: matrix_of_columns(small.field(), hs.dim(), cols), well_defined }
}

/// `φⁿ: HHⁿ(B) → HHⁿ(C)` for `n ∈ {0, 1}`.
pub fn hochschild_projection(sp: &SplitPresentation, degree: usize) -> Result<Projection, HochschildError> {
    let (b, c) = (&sp.extension, &sp.base);
    let (mb, mc) = (Bimodule::regular(b), Bimodule::regular(c));
    match degree {
        0 => Ok(project_h0(&h0(b, &mb), c, &h0(c, &mc), &sp.p)),
        1 => Ok(project_h1(b, &h1(b, &mb), c, &h1(c, &mc), &sp.p)),
        d => Err(HochschildError::UnsupportedDegree(d)),
    }
}

/// A derivation of `C` and, when it exists, a linear `α: E → E` with
/// `x·d(c) = α(x)·c − α(x·c)` and `d(c)·x = c·α(x) − α(c·x)`.
#[derive(Clone, Debug)]
pub struct LiftWitness {
    pub derivation: Vec<Scalar>,
    pub alpha: Option<Matrix>,
}

impl LiftWitness {
    pub fn is_lifted(&self) -> bool {
        self.alpha.is_some()
    }
}

/// Rows of the lifting system, one block per condition, with right-hand sides.
fn lift_system(c: &BoundQuiverAlgebra, e: &Bimodule, d_of_basis: &[SparseVec]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let field = c.field();
    let n = e.dim();
    let unknown = |i: usize, j: usize| i * n + j;
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for j in 0..n {
        let xj = SparseVec::unit(j, field.one());
        for (k, dk) in d_of_basis.iter().enumerate() {
            let ck = SparseVec::unit(k, field.one());
            for left in [false, true] {
                // α(x_j)c_k − α(x_j c_k) = x_j d(c_k), or c_k α(x_j) − α(c_k x_j) = d(c_k) x_j.
                let mut block = vec![vec![field.zero(); n * n]; n];
                for i in 0..n {
                    let xi = SparseVec::unit(i, field.one());
                    let moved = if left { e.act_left(&ck, &xi) } else { e.act_right(&xi, &ck) };
                    for (r, x) in moved.iter() {
                        block[*r][unknown(i, j)] += x;
                    }
                }
                let acted = if left { e.act_left(&ck, &xj) } else { e.act_right(&xj, &ck) };
                for (l, x) in acted.iter() {
                    for (i, row) in block.iter_mut().enumerate() {
                        row[unknown(i, *l)] -= x;
                    }
                }
                let target = if left { e.act_left(dk, &xj) } else { e.act_right(&xj, dk) };
                let target = target.to_dense(field, n);
                for (row, t) in block.into_iter().zip(target) {
                    if row.iter().any(|x| !x.is_zero()) || !t.is_zero() {
                        rows.push(row);
                        rhs.push(t);
                    }
                }
            }
        }
    }
    (rows, rhs)
}

/// Solves for `α` given the arrow values of `d ∈ Der₀(C, C)`. The bimodule
/// `e` must be over `c`.
pub fn lift_derivation(c: &BoundQuiverAlgebra, slots: &Slots, e: &Bimodule, d: &[Scalar]) -> LiftWitness {
    let field = c.field();
    let reg = Bimodule::regular(c);
    let d_of_basis: Vec<SparseVec> = c.basis().iter().map(|p| slots.path_value(c, &reg, d, p)).collect();
    let n = e.dim();
    let (rows, rhs) = lift_system(c, e, &d_of_basis);
    let alpha = if n == 0 {
        Some(Matrix::zeros(field, 0, 0))
    } else if rows.is_empty() {
        Some(Matrix::zeros(field, n, n))
    } else {
        Matrix::from_rows(field, n * n, rows).solve(&rhs).expect("sizes agree").map(|sol| Matrix::from_rows(field, n, sol.chunks(n).map(<[Scalar]>::to_vec).collect()))
    };
    LiftWitness { derivation: d.to_vec(), alpha }
}

/// Re-checks both lifting conditions for a witness.
pub fn check_lift(c: &BoundQuiverAlgebra, slots: &Slots, e: &Bimodule, w: &LiftWitness) -> bool {
    let Some(alpha) = &w.alpha else { return false };
    let field = c.field();
    let reg = Bimodule::regular(c);
    let n = e.dim();
    let apply = |v: &SparseVec| SparseVec::from_dense(&alpha.mul_vec(&v.to_dense(field, n)));
    let minus = -field.one();
    c.basis().iter().enumerate().all(|(k, p)| {
        let dk = slots.path_value(c, &reg, &w.derivation, p);
        let ck = SparseVec::unit(k, field.one());
        (0..n).all(|j| {
            let x = SparseVec::unit(j, field.one());
            let c1 = e.act_right(&apply(&x), &ck).axpy(&minus, &apply(&e.act_right(&x, &ck)));
            let c2 = e.act_left(&ck, &apply(&x)).axpy(&minus, &apply(&e.act_left(&ck, &x)));
            c1 == e.act_right(&x, &dk) && c2 == e.act_left(&dk, &x)
        })
    })
}

#[cfg(test)]
mod tests;
