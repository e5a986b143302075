//! Hochschild cohomology in degrees 0 and 1.
//!
//! The primary method works with normalized derivations. The algebra is
//! generated by its idempotents and arrows, so a derivation vanishing on the
//! idempotents is fixed by its arrow values `d(a) ∈ e_x M e_y` ("slots"),
//! and such values extend to a derivation exactly when every relation is
//! sent to zero by the Leibniz rule. Degree-1 cohomology is then
//! `Der₀/Inn₀`, where `Inn₀` consists of the `c ↦ c·x − x·c` with
//! `x ∈ ⊕ e_i M e_i`.
//!
//! [`bar`] recomputes the same groups from the bar complex.

pub mod bar;
pub mod cup;

use thiserror::Error;

use crate::algebra::BoundQuiverAlgebra;
use crate::bimod::Bimodule;
use crate::exactla::{Field, Matrix, Scalar, SparseVec, Subspace};
use crate::quiver::Path;

pub use bar::{bar_h, coboundary, BarCohomology, Cochain, CoboundaryTester};
pub use cup::cup_product;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("total degree {0} exceeds 2")]
    DegreeOverflow(usize),
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("bimodule is not over this algebra")]
    ModuleMismatch,
}

/// Coordinates `(arrow, module basis element)` for arrow values of normalized derivations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slots {
    entries: Vec<(usize, usize)>,
    by_arrow: Vec<Vec<usize>>,
    module_dim: usize,
}

impl Slots {
    pub fn new(a: &BoundQuiverAlgebra, m: &Bimodule) -> Slots {
        let mut entries = Vec::new();
        let mut by_arrow = vec![Vec::new(); a.quiver().arrows().len()];
        for (ai, ar) in a.quiver().arrows().iter().enumerate() {
            for j in 0..m.dim() {
                if m.grading(j) == (ar.source, ar.target) {
                    by_arrow[ai].push(entries.len());
                    entries.push((ai, j));
                }
            }
        }
        Slots { entries, by_arrow, module_dim: m.dim() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// `d(a)` as a module vector.
    pub fn arrow_value(&self, values: &[Scalar], arrow: usize) -> SparseVec {
        SparseVec::from_entries(self.by_arrow[arrow].iter().map(|&s| (self.entries[s].1, values[s].clone())))
    }

    /// Slot coordinates of a module vector assigned to `arrow`, or `None` if it
    /// has a component outside `e_x M e_y`.
    pub fn encode(&self, arrow: usize, v: &SparseVec, field: Field) -> Option<Vec<Scalar>> {
        let mut out = vec![field.zero(); self.len()];
        for (k, c) in v.iter() {
            let s = *self.by_arrow[arrow].iter().find(|&&s| self.entries[s].1 == *k)?;
            out[s] = c.clone();
        }
        Some(out)
    }

    /// `d(p)` by the Leibniz rule, `Σ_k p_{<k}·d(p_k)·p_{>k}`.
    pub fn path_value(&self, a: &BoundQuiverAlgebra, m: &Bimodule, values: &[Scalar], p: &Path) -> SparseVec {
        let mut acc = SparseVec::new();
        let one = a.field().one();
        for k in 0..p.len() {
            let dv = self.arrow_value(values, p.arrows()[k]);
            if dv.is_zero() {
                continue;
            }
            let prefix = a.nf(&p.subpath(0, k, a.quiver()));
            let suffix = a.nf(&p.subpath(k + 1, p.len(), a.quiver()));
            acc = acc.axpy(&one, &m.act_right(&m.act_left(&prefix, &dv), &suffix));
        }
        acc
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }
}

/// A normalized derivation given by its arrow values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub values: Vec<Scalar>,
}

impl Derivation {
    /// One line per arrow with a nonzero value, `arrow -> element`.
    pub fn describe(&self, a: &BoundQuiverAlgebra, m: &Bimodule, slots: &Slots) -> Vec<String> {
        (0..a.quiver().arrows().len())
            .filter_map(|ai| {
                let v = slots.arrow_value(&self.values, ai);
                if v.is_zero() {
                    return None;
                }
                let text = crate::algebra::format_combination(v.iter().map(|(k, c)| (c.clone(), m.labels()[*k].clone())));
                Some(format!("{} -> {}", a.quiver().arrow(ai).name, text))
            })
            .collect()
    }
}

/// A quotient `cocycles / coboundaries` with chosen representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySpace {
    degree: usize,
    cocycles: Subspace,
    coboundaries: Subspace,
    representatives: Vec<Vec<Scalar>>,
}

impl CohomologySpace {
    pub fn new(degree: usize, cocycles: Subspace, coboundaries: Subspace) -> CohomologySpace {
        debug_assert!(cocycles.contains_subspace(&coboundaries));
        let representatives = coboundaries.complement_in(&cocycles);
        CohomologySpace { degree, cocycles, coboundaries, representatives }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn cocycles(&self) -> &Subspace {
        &self.cocycles
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.representatives
    }

    /// Coordinates of the class of `v` in the representative basis; `None`
    /// when `v` is not a cocycle.
    pub fn class_coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let field = self.cocycles.field();
        let cols: Vec<Vec<Scalar>> = self.representatives.iter().chain(self.coboundaries.basis()).cloned().collect();
        if cols.is_empty() {
            return v.iter().all(Scalar::is_zero).then(Vec::new);
        }
        let system = Matrix::from_columns(field, self.cocycles.ambient_dim(), &cols);
        let sol = system.solve(v).expect("sizes agree")?;
        Some(sol[..self.dim()].to_vec())
    }
}

/// `Der₀(A, M)` in slot coordinates.
pub fn derivation_space(a: &BoundQuiverAlgebra, m: &Bimodule) -> (Slots, Subspace) {
    let slots = Slots::new(a, m);
    let field = a.field();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in a.relations() {
        // Column s holds the image of the relation under the slot-s unit derivation.
        let mut block = vec![vec![field.zero(); slots.len()]; m.dim()];
        for (s, _) in slots.entries().iter().enumerate() {
            let mut unit = vec![field.zero(); slots.len()];
            unit[s] = field.one();
            let mut total = SparseVec::new();
            for (c, p) in &rel.terms {
                total = total.axpy(c, &slots.path_value(a, m, &unit, p));
            }
            for (k, x) in total.iter() {
                block[*k][s] = x.clone();
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let space = if rows.is_empty() { Subspace::full(field, slots.len()) } else { Matrix::from_rows(field, slots.len(), rows).kernel() };
    (slots, space)
}

/// `x ↦ [c ↦ c·x − x·c]` restricted to arrows, for `x` a module basis element.
fn inner_values(a: &BoundQuiverAlgebra, m: &Bimodule, slots: &Slots, j: usize) -> Vec<Scalar> {
    let field = a.field();
    let x = SparseVec::unit(j, field.one());
    let mut out = vec![field.zero(); slots.len()];
    for ai in 0..a.quiver().arrows().len() {
        let arrow = SparseVec::unit(a.arrow_basis(ai), field.one());
        let v = m.act_left(&arrow, &x).axpy(&-field.one(), &m.act_right(&x, &arrow));
        let enc = slots.encode(ai, &v, field).expect("inner derivation of a diagonal element is graded");
        for (o, e) in out.iter_mut().zip(enc) {
            if !e.is_zero() {
                *o += &e;
            }
        }
    }
    out
}

/// `Inn₀(A, M)`: inner derivations of diagonal elements, in slot coordinates.
pub fn inner_space(a: &BoundQuiverAlgebra, m: &Bimodule, slots: &Slots) -> Subspace {
    let vectors = (0..m.dim()).filter(|&j| m.grading(j).0 == m.grading(j).1).map(|j| inner_values(a, m, slots, j)).collect();
    Subspace::from_spanning(a.field(), slots.len(), vectors)
}

/// Elements `x ∈ M` whose inner derivation vanishes on every idempotent are
/// exactly the diagonal ones, and their derivations lie in `Der₀`.
pub fn inner_cross_check(a: &BoundQuiverAlgebra, m: &Bimodule) -> bool {
    let field = a.field();
    let mut rows = Vec::new();
    for v in 0..a.quiver().vertex_count() {
        let e = SparseVec::unit(a.idempotent(v), field.one());
        let mut block = vec![vec![field.zero(); m.dim()]; m.dim()];
        for j in 0..m.dim() {
            let x = SparseVec::unit(j, field.one());
            let d = m.act_left(&e, &x).axpy(&-field.one(), &m.act_right(&x, &e));
            for (k, c) in d.iter() {
                block[*k][j] = c.clone();
            }
        }
        rows.extend(block);
    }
    let normalizing = if rows.is_empty() { m.dim() } else { Matrix::from_rows(field, m.dim(), rows).kernel().dim() };
    let diagonal = (0..m.dim()).filter(|&j| m.grading(j).0 == m.grading(j).1).count();
    let (slots, der) = derivation_space(a, m);
    normalizing == diagonal && der.contains_subspace(&inner_space(a, m, &slots))
}

/// `H⁰(A, M) = {x : c·x = x·c}`, tested on the generators.
pub fn h0(a: &BoundQuiverAlgebra, m: &Bimodule) -> CohomologySpace {
    let field = a.field();
    let mut rows = Vec::new();
    for &g in m.generators() {
        let gv = SparseVec::unit(g, field.one());
        let mut block = vec![vec![field.zero(); m.dim()]; m.dim()];
        for j in 0..m.dim() {
            let x = SparseVec::unit(j, field.one());
            let d = m.act_left(&gv, &x).axpy(&-field.one(), &m.act_right(&x, &gv));
            for (k, c) in d.iter() {
                block[*k][j] = c.clone();
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let cocycles = if rows.is_empty() { Subspace::full(field, m.dim()) } else { Matrix::from_rows(field, m.dim(), rows).kernel() };
    CohomologySpace::new(0, cocycles, Subspace::zero(field, m.dim()))
}

/// `H¹(A, M) = Der₀/Inn₀` with its slot layout.
#[derive(Clone, Debug)]
pub struct H1 {
    pub slots: Slots,
    pub space: CohomologySpace,
}

impl H1 {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn representatives(&self) -> Vec<Derivation> {
        self.space.representatives().iter().map(|v| Derivation { values: v.clone() }).collect()
    }
}

pub fn h1(a: &BoundQuiverAlgebra, m: &Bimodule) -> H1 {
    let (slots, der) = derivation_space(a, m);
    let inn = inner_space(a, m, &slots);
    H1 { space: CohomologySpace::new(1, der, inn), slots }
}

/// The full 1-cochain `b_i ↦ d(b_i)` of a derivation.
pub fn derivation_to_cochain(a: &BoundQuiverAlgebra, m: &Bimodule, slots: &Slots, values: &[Scalar]) -> Cochain {
    let mut entries = Vec::new();
    for (i, p) in a.basis().iter().enumerate() {
        for (k, c) in slots.path_value(a, m, values, p).iter() {
            entries.push((i * m.dim() + k, c.clone()));
        }
    }
    Cochain::new(1, a.dim(), m.dim(), SparseVec::from_entries(entries))
}
