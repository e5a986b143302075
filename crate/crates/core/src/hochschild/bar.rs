//! Sparse cochains of the bar complex `C^n(A, M) = Hom(A^{⊗n}, M)`.
//!
//! A cochain stores its values on tuples of basis elements. The flat index of
//! `(u_0, .., u_{n-1}; k)` is `(Σ u_i dim(A)^{n-1-i}) · dim(M) + k`.

use std::collections::BTreeMap;

use super::HochschildError;
use crate::algebra::BoundQuiverAlgebra;
use crate::bimod::Bimodule;
use crate::exactla::{Echelon, Field, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    n: usize,
    m: usize,
    entries: SparseVec,
}

impl Cochain {
    pub fn new(degree: usize, algebra_dim: usize, module_dim: usize, entries: SparseVec) -> Cochain {
        Cochain { degree, n: algebra_dim, m: module_dim, entries }
    }

    pub fn zero(degree: usize, algebra_dim: usize, module_dim: usize) -> Cochain {
        Cochain::new(degree, algebra_dim, module_dim, SparseVec::new())
    }

    pub fn unit(degree: usize, algebra_dim: usize, module_dim: usize, flat: usize, field: Field) -> Cochain {
        Cochain::new(degree, algebra_dim, module_dim, SparseVec::unit(flat, field.one()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &SparseVec {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Number of coordinates, `dim(A)^degree · dim(M)`.
    pub fn flat_len(&self) -> usize {
        self.n.pow(self.degree as u32) * self.m
    }

    pub fn index(&self, tuple: &[usize], k: usize) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        tuple.iter().fold(0, |acc, &u| acc * self.n + u) * self.m + k
    }

    pub fn decode(&self, flat: usize) -> (Vec<usize>, usize) {
        let k = flat % self.m;
        let mut t = flat / self.m;
        let mut tuple = vec![0; self.degree];
        for slot in tuple.iter_mut().rev() {
            *slot = t % self.n;
            t /= self.n;
        }
        (tuple, k)
    }

    /// The module vector `f(b_{u_0}, .., b_{u_{n-1}})`.
    pub fn value(&self, tuple: &[usize]) -> SparseVec {
        let base = self.index(tuple, 0);
        SparseVec::from_entries(self.entries.iter().filter(|(i, _)| (base..base + self.m).contains(i)).map(|(i, c)| (i - base, c.clone())))
    }

    fn same_shape(&self, other: &Cochain) -> bool {
        self.degree == other.degree && self.n == other.n && self.m == other.m
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert!(self.same_shape(other), "cochain shapes differ");
        let one = match self.entries.iter().chain(other.entries.iter()).next() {
            Some((_, c)) => c.field().one(),
            None => return self.clone(),
        };
        Cochain { entries: self.entries.axpy(&one, &other.entries), ..*self }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        let Some((_, c)) = other.entries.iter().next() else { return self.clone() };
        self.add(&other.scale(&-c.field().one()))
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain { entries: self.entries.scale(s), ..*self }
    }
}

fn accumulate(out: &mut BTreeMap<usize, Scalar>, index: usize, v: Scalar) {
    match out.get_mut(&index) {
        Some(x) => *x += &v,
        None => {
            out.insert(index, v);
        }
    }
}

/// The Hochschild coboundary
/// `(δf)(a_1, .., a_{n+1}) = a_1 f(a_2, ..) + Σ_j (−1)^j f(.., a_j a_{j+1}, ..) + (−1)^{n+1} f(.., a_n) a_{n+1}`.
///
/// Works over the nonzero entries of `f`, pushing each one forward along the
/// transpose of every face.
pub fn coboundary(a: &BoundQuiverAlgebra, m: &Bimodule, f: &Cochain) -> Cochain {
    let n = a.dim();
    let md = m.dim();
    let deg = f.degree;
    let field = a.field();
    let minus = -field.one();
    let sign = |j: usize| if j.is_multiple_of(2) { field.one() } else { minus.clone() };
    let out_shape = Cochain::zero(deg + 1, n, md);
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (flat, c) in f.entries.iter() {
        let (u, k) = f.decode(*flat);
        let mut t = Vec::with_capacity(deg + 1);
        for p in 0..n {
            t.clear();
            t.push(p);
            t.extend_from_slice(&u);
            for (l, x) in m.left(p, k).iter() {
                accumulate(&mut out, out_shape.index(&t, *l), c * x);
            }
        }
        for j in 1..=deg {
            let s = sign(j);
            for (x, y, mu) in a.landing(u[j - 1]) {
                t.clear();
                t.extend_from_slice(&u[..j - 1]);
                t.push(*x);
                t.push(*y);
                t.extend_from_slice(&u[j..]);
                accumulate(&mut out, out_shape.index(&t, k), &(&s * mu) * c);
            }
        }
        let s = sign(deg + 1);
        for r in 0..n {
            t.clear();
            t.extend_from_slice(&u);
            t.push(r);
            for (l, x) in m.right(k, r).iter() {
                accumulate(&mut out, out_shape.index(&t, *l), &(&s * c) * x);
            }
        }
    }
    Cochain { entries: SparseVec::from_map(out), ..out_shape }
}

/// Images of all unit cochains of degree `deg` under the coboundary.
fn coboundary_images<'a>(a: &'a BoundQuiverAlgebra, m: &'a Bimodule, deg: usize) -> impl Iterator<Item = Cochain> + 'a {
    let len = a.dim().pow(deg as u32) * m.dim();
    (0..len).map(move |i| coboundary(a, m, &Cochain::unit(deg, a.dim(), m.dim(), i, a.field())))
}

/// `H^n` computed from ranks of the bar coboundaries, with representatives.
#[derive(Clone, Debug)]
pub struct BarCohomology {
    pub degree: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub representatives: Vec<Cochain>,
}

impl BarCohomology {
    pub fn dim(&self) -> usize {
        self.cocycle_dim - self.coboundary_dim
    }
}

/// Bar-complex cohomology in degree 0 or 1.
pub fn bar_h(a: &BoundQuiverAlgebra, m: &Bimodule, degree: usize) -> Result<BarCohomology, HochschildError> {
    if degree > 1 {
        return Err(HochschildError::UnsupportedDegree(degree));
    }
    if m.acting_dim() != a.dim() {
        return Err(HochschildError::ModuleMismatch);
    }
    let field = a.field();
    let (n, md) = (a.dim(), m.dim());
    // Kernel of the outgoing coboundary, from tracked dependencies.
    let mut ech = Echelon::tracked(field);
    let mut cocycles = Vec::new();
    for img in coboundary_images(a, m, degree) {
        if let Some(dep) = ech.push_tracked(img.entries()) {
            cocycles.push(Cochain::new(degree, n, md, dep));
        }
    }
    let mut reduced = Echelon::new(field);
    if degree == 1 {
        for img in coboundary_images(a, m, 0) {
            reduced.push(img.entries());
        }
    }
    let coboundary_dim = reduced.rank();
    let representatives = cocycles.iter().filter(|z| reduced.push(z.entries())).cloned().collect();
    Ok(BarCohomology { degree, cocycle_dim: cocycles.len(), coboundary_dim, representatives })
}

/// Checks `δ∘δ = 0` on every unit cochain of the given degree.
pub fn square_zero(a: &BoundQuiverAlgebra, m: &Bimodule, degree: usize) -> bool {
    coboundary_images(a, m, degree).all(|img| coboundary(a, m, &img).is_zero())
}

/// Span of the coboundaries in one degree, for repeated membership tests.
#[derive(Clone, Debug)]
pub struct CoboundaryTester {
    degree: usize,
    echelon: Echelon,
}

impl CoboundaryTester {
    /// Coboundaries of degree `degree ≥ 1`.
    pub fn new(a: &BoundQuiverAlgebra, m: &Bimodule, degree: usize) -> Result<CoboundaryTester, HochschildError> {
        if degree == 0 {
            return Err(HochschildError::UnsupportedDegree(0));
        }
        let mut echelon = Echelon::new(a.field());
        for img in coboundary_images(a, m, degree - 1) {
            echelon.push(img.entries());
        }
        Ok(CoboundaryTester { degree, echelon })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_coboundary(&self, f: &Cochain) -> bool {
        f.degree() == self.degree && self.echelon.contains(f.entries())
    }
}
