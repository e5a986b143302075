//! Right modules over a bound quiver algebra, as representations.
//!
//! A right module `M` is stored as the spaces `M e_v` and, for each arrow
//! `a: s → t`, the matrix of `m ↦ m·a` from `M e_s` to `M e_t` acting on
//! column vectors. A path `a_1…a_n` then acts by `M_{a_n}⋯M_{a_1}`.

use thiserror::Error;

use crate::algebra::BoundQuiverAlgebra;
use crate::exactla::{Field, Matrix, Scalar, Subspace};
use crate::quiver::Path;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("the algebra is not triangular")]
    NotTriangular,
    #[error("global dimension exceeds 2")]
    GlobalDimensionTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: Field,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

/// Per-vertex matrices `F_v: M e_v → N e_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    blocks: Vec<Matrix>,
}

impl Representation {
    /// Builds and checks sizes; `maps[a]` is `dims[target] × dims[source]`.
    pub fn new(a: &BoundQuiverAlgebra, dims: Vec<usize>, maps: Vec<Matrix>) -> Representation {
        let q = a.quiver();
        assert_eq!(dims.len(), q.vertex_count());
        assert_eq!(maps.len(), q.arrows().len());
        for (m, ar) in maps.iter().zip(q.arrows()) {
            assert_eq!((m.rows(), m.cols()), (dims[ar.target], dims[ar.source]), "arrow `{}` has the wrong shape", ar.name);
        }
        Representation { field: a.field(), dims, maps }
    }

    pub fn zero(a: &BoundQuiverAlgebra) -> Representation {
        let dims = vec![0; a.quiver().vertex_count()];
        let maps = a.quiver().arrows().iter().map(|_| Matrix::zeros(a.field(), 0, 0)).collect();
        Representation { field: a.field(), dims, maps }
    }

    pub fn simple(a: &BoundQuiverAlgebra, vertex: usize) -> Representation {
        let mut dims = vec![0; a.quiver().vertex_count()];
        dims[vertex] = 1;
        let maps = a.quiver().arrows().iter().map(|ar| Matrix::zeros(a.field(), dims[ar.target], dims[ar.source])).collect();
        Representation { field: a.field(), dims, maps }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    /// Action of a path on `M e_{source}`.
    pub fn path_map(&self, p: &Path) -> Matrix {
        let mut m = Matrix::identity(self.field, self.dims[p.source()]);
        for &a in p.arrows() {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// Every relation of `a` acts as zero.
    pub fn satisfies_relations(&self, a: &BoundQuiverAlgebra) -> bool {
        a.relations().iter().all(|rel| {
            let (s, t) = (rel.terms[0].1.source(), rel.terms[0].1.target());
            let mut acc = Matrix::zeros(self.field, self.dims[t], self.dims[s]);
            for (c, p) in &rel.terms {
                acc = acc.add(&self.path_map(p).scale(c));
            }
            acc.is_zero()
        })
    }

    /// `M·rad(A)` at each vertex: the span of the images of incoming arrows.
    pub fn radical(&self, a: &BoundQuiverAlgebra) -> Vec<Subspace> {
        (0..self.dims.len())
            .map(|v| {
                let mut vectors = Vec::new();
                for (i, ar) in a.quiver().arrows().iter().enumerate() {
                    if ar.target == v {
                        let m = &self.maps[i];
                        vectors.extend((0..m.cols()).map(|c| m.column(c)));
                    }
                }
                Subspace::from_spanning(self.field, self.dims[v], vectors)
            })
            .collect()
    }

    /// Dimension vector of the top `M / M·rad(A)`.
    pub fn top_dims(&self, a: &BoundQuiverAlgebra) -> Vec<usize> {
        self.radical(a).iter().zip(&self.dims).map(|(r, d)| d - r.dim()).collect()
    }
}

impl ModuleMap {
    pub fn new(blocks: Vec<Matrix>) -> ModuleMap {
        ModuleMap { blocks }
    }

    pub fn block(&self, v: usize) -> &Matrix {
        &self.blocks[v]
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(f, g)| f.mul(g)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// Naturality: `N_a F_s = F_t M_a` for every arrow.
    pub fn is_homomorphism(&self, a: &BoundQuiverAlgebra, src: &Representation, dst: &Representation) -> bool {
        a.quiver().arrows().iter().enumerate().all(|(i, ar)| {
            dst.maps[i].mul(&self.blocks[ar.source]) == self.blocks[ar.target].mul(&src.maps[i])
        })
    }

    fn from_coords(src: &Representation, dst: &Representation, coords: &[Scalar]) -> ModuleMap {
        let mut offset = 0;
        let blocks = (0..src.dims.len())
            .map(|v| {
                let (r, c) = (dst.dims[v], src.dims[v]);
                let rows = (0..r).map(|i| coords[offset + i * c..offset + (i + 1) * c].to_vec()).collect();
                offset += r * c;
                Matrix::from_rows(src.field, c, rows)
            })
            .collect();
        ModuleMap { blocks }
    }

    fn to_coords(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|m| (0..m.rows()).flat_map(move |r| m.row(r).to_vec())).collect()
    }
}

/// The space of module maps `src → dst`, as a subspace of the concatenated
/// (row-major) block coordinates.
#[derive(Clone, Debug)]
pub struct HomSpace {
    src: Representation,
    dst: Representation,
    space: Subspace,
}

impl HomSpace {
    pub fn new(a: &BoundQuiverAlgebra, src: &Representation, dst: &Representation) -> HomSpace {
        let field = a.field();
        let n = src.dims.len();
        let mut offsets = vec![0; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + dst.dims[v] * src.dims[v];
        }
        let unknowns = offsets[n];
        let idx = |v: usize, r: usize, c: usize| offsets[v] + r * src.dims[v] + c;
        let mut rows = Vec::new();
        for (i, ar) in a.quiver().arrows().iter().enumerate() {
            let (s, t) = (ar.source, ar.target);
            let (na, ma) = (&dst.maps[i], &src.maps[i]);
            for r in 0..dst.dims[t] {
                for c in 0..src.dims[s] {
                    let mut row = vec![field.zero(); unknowns];
                    for k in 0..dst.dims[s] {
                        row[idx(s, k, c)] += na.get(r, k);
                    }
                    for k in 0..src.dims[t] {
                        row[idx(t, r, k)] -= ma.get(k, c);
                    }
                    rows.push(row);
                }
            }
        }
        let space = if rows.is_empty() { Subspace::full(field, unknowns) } else { Matrix::from_rows(field, unknowns, rows).kernel() };
        HomSpace { src: src.clone(), dst: dst.clone(), space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<ModuleMap> {
        self.space.basis().iter().map(|v| ModuleMap::from_coords(&self.src, &self.dst, v)).collect()
    }

    /// Coordinates of a map in the echelon basis of this space.
    pub fn coordinates(&self, f: &ModuleMap) -> Option<Vec<Scalar>> {
        self.space.coordinates(&f.to_coords())
    }

    /// Matrix of `f ↦ f∘g` from this space to `Hom(g.src, self.dst)`.
    pub fn precompose_matrix(&self, g: &ModuleMap, target: &HomSpace) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self
            .basis()
            .iter()
            .map(|f| target.coordinates(&f.compose(g)).expect("composite lies in the target hom space"))
            .collect();
        Matrix::from_columns(self.src.field, target.dim(), &cols)
    }
}

/// `P_v = e_v A` with basis the basis paths starting at `v`, graded by target.
pub fn projective(a: &BoundQuiverAlgebra, vertex: usize) -> Representation {
    let n = a.quiver().vertex_count();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in a.basis().iter().enumerate() {
        if p.source() == vertex {
            at[p.target()].push(i);
        }
    }
    let dims = at.iter().map(Vec::len).collect();
    let maps = a
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, ar)| {
            let x = a.arrow_basis(ai);
            let cols: Vec<Vec<Scalar>> = at[ar.source]
                .iter()
                .map(|&p| {
                    let prod = a.mult(p, x);
                    at[ar.target].iter().map(|&q| prod.get(q).cloned().unwrap_or_else(|| a.field().zero())).collect()
                })
                .collect();
            Matrix::from_columns(a.field(), at[ar.target].len(), &cols)
        })
        .collect();
    Representation::new(a, dims, maps)
}

/// `DA = Hom_k(A, k)` as a right module: `(φ·x)(y) = φ(x·y)`, basis dual to
/// the path basis, with `φ_j` placed at the source of `b_j`.
pub fn injective_cogenerator(a: &BoundQuiverAlgebra) -> Representation {
    let n = a.quiver().vertex_count();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, p) in a.basis().iter().enumerate() {
        at[p.source()].push(j);
    }
    let dims = at.iter().map(Vec::len).collect();
    let maps = a
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, ar)| {
            let x = a.arrow_basis(ai);
            // φ_j·x = Σ_k (coefficient of b_j in x·b_k) φ_k
            let cols: Vec<Vec<Scalar>> = at[ar.source]
                .iter()
                .map(|&j| at[ar.target].iter().map(|&k| a.mult(x, k).get(j).cloned().unwrap_or_else(|| a.field().zero())).collect())
                .collect();
            Matrix::from_columns(a.field(), at[ar.target].len(), &cols)
        })
        .collect();
    Representation::new(a, dims, maps)
}

/// One step of a minimal projective resolution.
#[derive(Clone, Debug)]
pub struct Syzygy {
    /// Vertex of each indecomposable summand of the cover, in order.
    pub summands: Vec<usize>,
    pub cover: Representation,
    pub cover_map: ModuleMap,
    pub kernel: Representation,
    pub inclusion: ModuleMap,
}

fn direct_sum(a: &BoundQuiverAlgebra, parts: &[Representation]) -> Representation {
    let n = a.quiver().vertex_count();
    let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let maps = a
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, ar)| {
            let mut m = Matrix::zeros(a.field(), dims[ar.target], dims[ar.source]);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let pm = &p.maps[i];
                for r in 0..pm.rows() {
                    for c in 0..pm.cols() {
                        m.set(r0 + r, c0 + c, pm.get(r, c).clone());
                    }
                }
                r0 += pm.rows();
                c0 += pm.cols();
            }
            m
        })
        .collect();
    Representation::new(a, dims, maps)
}

/// Projective cover of `m` and its kernel. Summands are ordered by vertex;
/// generators at a vertex are the standard basis vectors that complement the
/// radical, taken greedily.
pub fn syzygy(a: &BoundQuiverAlgebra, m: &Representation) -> Syzygy {
    let field = a.field();
    let n = a.quiver().vertex_count();
    let rad = m.radical(a);
    let mut summands = Vec::new();
    let mut generators: Vec<Vec<Scalar>> = Vec::new();
    for v in 0..n {
        for g in rad[v].complement_in(&Subspace::full(field, m.dims[v])) {
            summands.push(v);
            generators.push(g);
        }
    }
    let parts: Vec<Representation> = summands.iter().map(|&v| projective(a, v)).collect();
    let cover = direct_sum(a, &parts);

    // Cover map: the summand for generator g sends a path p from v to g·p.
    let mut blocks: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for (&v, g) in summands.iter().zip(&generators) {
        for p in a.basis().iter().filter(|p| p.source() == v) {
            blocks[p.target()].push(m.path_map(p).mul_vec(g));
        }
    }
    let cover_map = ModuleMap::new((0..n).map(|v| Matrix::from_columns(field, m.dims[v], &blocks[v])).collect());
    debug_assert!(cover_map.is_homomorphism(a, &cover, m));

    let kernels: Vec<Subspace> = (0..n).map(|v| cover_map.blocks[v].kernel()).collect();
    let inclusion = ModuleMap::new((0..n).map(|v| Matrix::from_columns(field, cover.dims[v], kernels[v].basis())).collect());
    let maps = a
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, ar)| {
            let cols: Vec<Vec<Scalar>> = kernels[ar.source]
                .basis()
                .iter()
                .map(|k| kernels[ar.target].coordinates(&cover.maps[i].mul_vec(k)).expect("kernel is a submodule"))
                .collect();
            Matrix::from_columns(field, kernels[ar.target].dim(), &cols)
        })
        .collect();
    let kernel = Representation::new(a, kernels.iter().map(Subspace::dim).collect(), maps);
    Syzygy { summands, cover, cover_map, kernel, inclusion }
}

/// Whether every simple module has projective dimension at most `n`.
pub fn gldim_at_most(a: &BoundQuiverAlgebra, n: usize) -> bool {
    (0..a.quiver().vertex_count()).all(|v| {
        let mut m = Representation::simple(a, v);
        for _ in 0..=n {
            if m.is_zero() {
                return true;
            }
            m = syzygy(a, &m).kernel;
        }
        m.is_zero()
    })
}

/// The first `steps` differentials `P_k → P_{k-1}` of a minimal projective
/// resolution of `m`, with `P_0 → m` first.
pub fn resolution(a: &BoundQuiverAlgebra, m: &Representation, steps: usize) -> (Vec<Representation>, Vec<ModuleMap>) {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut current = m.clone();
    let mut prev_inclusion: Option<ModuleMap> = None;
    for _ in 0..steps {
        let s = syzygy(a, &current);
        let d = match &prev_inclusion {
            Some(inc) => inc.compose(&s.cover_map),
            None => s.cover_map.clone(),
        };
        terms.push(s.cover);
        maps.push(d);
        prev_inclusion = Some(s.inclusion);
        current = s.kernel;
    }
    (terms, maps)
}

/// `dim Ext²_A(DA, A)` from a minimal projective resolution of `DA`.
pub fn ext2_dimension(a: &BoundQuiverAlgebra) -> Result<usize, RepError> {
    if !a.is_triangular() {
        return Err(RepError::NotTriangular);
    }
    if !gldim_at_most(a, 2) {
        return Err(RepError::GlobalDimensionTooLarge);
    }
    Ok(ext_dimension(a, &injective_cogenerator(a), &regular_module(a), 2))
}

/// `dim Ext^n_A(m, target)` for right modules.
pub fn ext_dimension(a: &BoundQuiverAlgebra, m: &Representation, target: &Representation, n: usize) -> usize {
    let (terms, maps) = resolution(a, m, n + 2);
    let homs: Vec<HomSpace> = terms.iter().map(|p| HomSpace::new(a, p, target)).collect();
    // d*_{k}: Hom(P_{k-1}, T) → Hom(P_k, T) is precomposition with maps[k].
    let outgoing = homs[n].precompose_matrix(&maps[n + 1], &homs[n + 1]);
    let kernel = homs[n].dim() - outgoing.rank();
    let incoming = if n == 0 { 0 } else { homs[n - 1].precompose_matrix(&maps[n], &homs[n]).rank() };
    kernel - incoming
}

pub fn regular_module(a: &BoundQuiverAlgebra) -> Representation {
    direct_sum(a, &(0..a.quiver().vertex_count()).map(|v| projective(a, v)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_LENGTH_CAP;
    use crate::qdsl::parse;

    fn algebra(text: &str, name: &str) -> BoundQuiverAlgebra {
        let f = parse(text).unwrap();
        BoundQuiverAlgebra::from_block(f.block(name).unwrap(), None, DEFAULT_LENGTH_CAP).unwrap()
    }

    const EX2: &str = include_str!("../fixtures/ex2.quiv");
    const EX1: &str = include_str!("../fixtures/ex1.quiv");

    #[test]
    fn projectives_of_example_two() {
        let c = algebra(EX2, "C");
        assert_eq!(projective(&c, 3).dims(), &[0, 1, 1, 1]);
        assert_eq!(projective(&c, 0).dims(), &[1, 0, 0, 0]);
        for v in 0..4 {
            assert!(projective(&c, v).satisfies_relations(&c));
        }
    }

    #[test]
    fn linear_a2() {
        let a = algebra("algebra A\nvertices 1 2\narrow x 1 2\nend\n", "A");
        assert_eq!(projective(&a, 0).dims(), &[1, 1]);
        assert!(gldim_at_most(&a, 1));
        assert!(!gldim_at_most(&a, 0));
        assert_eq!(ext2_dimension(&a).unwrap(), 0);
    }

    #[test]
    fn dual_module() {
        for (text, dim) in [(EX2, 8), (EX1, 11)] {
            let c = algebra(text, "C");
            let d = injective_cogenerator(&c);
            assert_eq!(d.total_dim(), dim);
            assert!(d.satisfies_relations(&c));
        }
        let s = algebra("algebra S\nvertices 1 2\nend\n", "S");
        assert_eq!(injective_cogenerator(&s), regular_module(&s));
    }

    #[test]
    fn syzygies_of_simples() {
        let c = algebra(EX2, "C");
        let s1 = syzygy(&c, &Representation::simple(&c, 0));
        assert_eq!(s1.summands, vec![0]);
        assert!(s1.kernel.is_zero());
        let s4 = syzygy(&c, &Representation::simple(&c, 3));
        assert_eq!(s4.summands, vec![3]);
        assert_eq!(s4.kernel.dims(), &[0, 1, 1, 0]);
        let p = projective(&c, 3);
        assert!(syzygy(&c, &p).kernel.is_zero());
    }

    #[test]
    fn cover_is_minimal() {
        let c = algebra(EX2, "C");
        let d = injective_cogenerator(&c);
        let s = syzygy(&c, &d);
        assert!(s.cover_map.is_homomorphism(&c, &s.cover, &d));
        assert_eq!(s.cover.top_dims(&c), d.top_dims(&c));
        assert_eq!(s.kernel.total_dim(), s.cover.total_dim() - d.total_dim());
        let rad = s.cover.radical(&c);
        for v in 0..4 {
            let k = s.inclusion.block(v);
            for col in 0..k.cols() {
                assert!(rad[v].contains(&k.column(col)));
            }
        }
    }

    #[test]
    fn ext2_matches_extension_sizes() {
        assert_eq!(ext2_dimension(&algebra(EX1, "C")).unwrap(), 13 - 11);
        assert_eq!(ext2_dimension(&algebra(EX2, "C")).unwrap(), 16 - 8);
        assert_eq!(ext2_dimension(&algebra(EX2, "B")), Err(RepError::NotTriangular));
    }

    #[test]
    fn global_dimension() {
        assert!(gldim_at_most(&algebra(EX1, "C"), 2));
        assert!(gldim_at_most(&algebra(EX2, "C"), 2));
        assert!(gldim_at_most(&algebra("algebra S\nvertices 1\nend\n", "S"), 0));
    }
}
