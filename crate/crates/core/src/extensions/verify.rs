//! The four exact sequences relating `HH^*(C)`, `HH^*(B)` and `HH^*(C̃)`,
//! checked through dimensions, surjectivity of the projections and explicit
//! kernels.

use serde::Serialize;

use super::{project_h0, project_h1, ExtensionError, Projection, RelationExtension};
use crate::algebra::{AlgebraMap, BoundQuiverAlgebra};
use crate::bimod::{arrow_ideal_bimodule, curly_e, matrix_from_coords, Bimodule, ProductContext};
use crate::exactla::{Field, Matrix, Scalar, SparseVec, Subspace};
use crate::hochschild::{bar_h, h0, h1, inner_cross_check, CohomologySpace, Slots, H1};

/// `lhs = Σ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub name: String,
    pub lhs: i64,
    pub rhs: Vec<i64>,
    pub pass: bool,
}

impl Identity {
    fn new(name: &str, lhs: usize, rhs: &[i64]) -> Identity {
        let lhs = lhs as i64;
        Identity { name: name.to_string(), lhs, rhs: rhs.to_vec(), pass: lhs == rhs.iter().sum::<i64>() }
    }
}

/// One short exact sequence `0 → kernel terms → HHⁿ(X) → HHⁿ(Y) → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: String,
    pub lhs: usize,
    pub rhs: Vec<usize>,
    pub dims_ok: bool,
    pub surjective: bool,
    pub kernel_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleEntry {
    pub algebra: String,
    pub module: String,
    pub degree: usize,
    pub derivations: usize,
    pub bar: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub name: String,
    pub degree: usize,
    pub rank: usize,
    pub surjective: bool,
    pub well_defined: bool,
    pub matrix: Vec<Vec<String>>,
}

impl ProjectionReport {
    fn new(name: &str, p: &Projection) -> ProjectionReport {
        let matrix = (0..p.matrix.rows()).map(|r| p.matrix.row(r).iter().map(ToString::to_string).collect()).collect();
        ProjectionReport { name: name.to_string(), degree: p.degree, rank: p.rank(), surjective: p.is_surjective(), well_defined: p.well_defined, matrix }
    }
}

/// Everything computed for one splitting. Field names are the JSON keys.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub field: String,
    pub base: String,
    pub tilde: String,
    pub split: Vec<String>,
    pub complement: Vec<String>,
    pub dim_C: usize,
    pub dim_B: usize,
    pub dim_Ctilde: usize,
    pub dim_Eprime: usize,
    pub dim_Esec: usize,
    pub ext2_C: usize,
    pub hh0_C: usize,
    pub hh0_B: usize,
    pub hh0_Ctilde: usize,
    pub hh1_C: usize,
    pub hh1_B: usize,
    pub hh1_Ctilde: usize,
    pub h0_B_Eprime: usize,
    pub h1_B_Eprime: usize,
    pub h1_C_Eprime: usize,
    pub end_Eprime: usize,
    pub h0_Ctilde_Esec: usize,
    pub h1_Ctilde_Esec: usize,
    pub h1_B_Esec: usize,
    pub end_Esec: usize,
    pub curlyE_Esec_B: usize,
    pub curlyE_Eprime_C: usize,
    pub h1_Ctilde_E: usize,
    pub h1_C_E: usize,
    pub end_E: usize,
    pub projections: Vec<ProjectionReport>,
    pub rows: Vec<Row>,
    pub remarks: Vec<Identity>,
    pub pushout: Identity,
    pub checks: Vec<Check>,
    pub oracle: Option<Vec<OracleEntry>>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
            && self.remarks.iter().all(|r| r.pass)
            && self.pushout.pass
            && self.checks.iter().all(|c| c.pass)
            && self.oracle.as_ref().is_none_or(|o| o.iter().all(|e| e.equal))
    }
}

fn same(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.contains_subspace(b)
}

fn kernel_of(m: &Matrix) -> Subspace {
    if m.rows() == 0 {
        Subspace::full(m.field(), m.cols())
    } else {
        m.kernel()
    }
}

fn combine(field: Field, len: usize, coeffs: &[Scalar], vectors: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += &(c * x);
        }
    }
    out
}

/// A bimodule viewed inside its acting algebra.
fn image_of(ambient: &BoundQuiverAlgebra, sub: &BoundQuiverAlgebra) -> Result<(AlgebraMap, Bimodule), ExtensionError> {
    let iota = AlgebraMap::by_names(sub, ambient)?;
    let cols = (0..sub.dim()).map(|i| iota.matrix().column(i)).collect();
    let m = Bimodule::inside(ambient, sub, &iota, cols)?;
    Ok((iota, m))
}

/// Derivation with values in a sub-bimodule `n ⊆ a`, as a derivation of `a`.
fn include_derivation(a: &BoundQuiverAlgebra, a_slots: &Slots, n: &Bimodule, n_slots: &Slots, values: &[Scalar]) -> Vec<Scalar> {
    let field = a.field();
    let mut out = vec![field.zero(); a_slots.len()];
    for ai in 0..a.quiver().arrows().len() {
        let v = n_slots.arrow_value(values, ai).to_dense(field, n.dim());
        let amb = SparseVec::from_dense(&n.to_ambient(&v).expect("bimodule has an ambient"));
        for (o, e) in out.iter_mut().zip(a_slots.encode(ai, &amb, field).expect("graded value")) {
            if !e.is_zero() {
                *o = e;
            }
        }
    }
    out
}

fn ambient_span(a: &BoundQuiverAlgebra, n: &Bimodule) -> Subspace {
    Subspace::from_spanning(a.field(), a.dim(), n.ambient_vectors().unwrap_or(&[]).to_vec())
}

/// Degree 0: `ker φ⁰ = H⁰(X, N) = N ∩ Z(X)` inside `X`.
fn kernel_check_0(x: &BoundQuiverAlgebra, hx: &CohomologySpace, phi: &Projection, n: &Bimodule, hn: &CohomologySpace) -> bool {
    let field = x.field();
    let ker = kernel_of(&phi.matrix);
    let k = Subspace::from_spanning(field, x.dim(), ker.basis().iter().map(|c| combine(field, x.dim(), c, hx.representatives())).collect());
    let img = Subspace::from_spanning(field, x.dim(), hn.representatives().iter().map(|v| n.to_ambient(v).expect("ambient")).collect());
    let meet = match Subspace::from_spanning(field, x.dim(), hx.cocycles().basis().to_vec()).intersect(&ambient_span(x, n)) {
        Ok(s) => s,
        Err(_) => return false,
    };
    same(&k, &img) && same(&k, &meet) && img.dim() == hn.dim()
}

/// Degree 1: the given derivations of `X` are killed by `φ¹` and their classes
/// form a basis of the kernel.
fn kernel_check_1(hx: &H1, phi: &Projection, derivations: &[Vec<Scalar>]) -> bool {
    let field = phi.matrix.field();
    let mut cols = Vec::new();
    for d in derivations {
        match hx.space.class_coordinates(d) {
            Some(c) => cols.push(c),
            None => return false,
        }
    }
    if cols.is_empty() {
        return phi.kernel_dim() == 0;
    }
    let k = Matrix::from_columns(field, hx.dim(), &cols);
    k.rank() == cols.len() && k.rank() == phi.kernel_dim() && phi.matrix.mul(&k).is_zero()
}

struct Regular {
    m: Bimodule,
    h0: CohomologySpace,
    h1: H1,
}

impl Regular {
    fn new(a: &BoundQuiverAlgebra) -> Regular {
        let m = Bimodule::regular(a);
        Regular { h0: h0(a, &m), h1: h1(a, &m), m }
    }
}

/// Computes the report for the partial extension generated by `s`.
pub fn verify_theorem<S: AsRef<str>>(ext: &RelationExtension, s: &[S], oracle: bool) -> Result<TheoremReport, ExtensionError> {
    let sp = ext.split(s)?;
    let (c, b, ct) = (&sp.base, &sp.extension, &ext.tilde);
    let field = c.field();
    let rest: Vec<String> = ext.new_arrows.iter().filter(|n| !sp.new_arrows.contains(n)).cloned().collect();
    let p2 = AlgebraMap::by_names(ct, b)?;
    p2.check_morphism(ct, b)?;

    let (rc, rb, rt) = (Regular::new(c), Regular::new(b), Regular::new(ct));

    let ep_b = arrow_ideal_bimodule(b, b, &sp.new_arrows)?;
    let ep_c = &sp.ideal;
    let es_t = arrow_ideal_bimodule(ct, ct, &rest)?;
    let es_b = arrow_ideal_bimodule(ct, b, &rest)?;
    let e_t = arrow_ideal_bimodule(ct, ct, &ext.new_arrows)?;
    let e_c = arrow_ideal_bimodule(ct, c, &ext.new_arrows)?;
    let (_, c_in_b) = image_of(b, c)?;
    let (q2, b_in_t) = image_of(ct, b)?;

    let h0_b_ep = h0(b, &ep_b);
    let h1_b_ep = h1(b, &ep_b);
    let h1_c_ep = h1(c, ep_c);
    let h0_t_es = h0(ct, &es_t);
    let h1_t_es = h1(ct, &es_t);
    let h1_b_es = h1(b, &es_b);
    let h1_t_e = h1(ct, &e_t);
    let h1_c_e = h1(c, &e_c);
    let end_ep = ep_c.end_enveloping().dim();
    let end_es = es_b.end_enveloping().dim();
    let end_e = e_c.end_enveloping().dim();
    let curly_es_b = curly_e(&es_b, &b_in_t, &ProductContext { ambient: ct })?;
    let curly_ep_c = curly_e(ep_c, &c_in_b, &ProductContext { ambient: b })?;

    let phi0_bc = project_h0(&rb.h0, c, &rc.h0, &sp.p);
    let phi1_bc = project_h1(b, &rb.h1, c, &rc.h1, &sp.p);
    let phi0_tb = project_h0(&rt.h0, b, &rb.h0, &p2);
    let phi1_tb = project_h1(ct, &rt.h1, b, &rb.h1, &p2);

    let row = |name: &str, lhs: usize, rhs: Vec<usize>, phi: &Projection, kernel_ok: bool| {
        let dims_ok = lhs == rhs.iter().sum::<usize>();
        let surjective = phi.is_surjective();
        Row { name: name.to_string(), lhs, rhs, dims_ok, surjective, kernel_ok, pass: dims_ok && surjective && kernel_ok && phi.well_defined }
    };

    let row1 = row("HH0(B) = H0(B,E') + HH0(C)", rb.h0.dim(), vec![h0_b_ep.dim(), rc.h0.dim()], &phi0_bc, kernel_check_0(b, &rb.h0, &phi0_bc, &ep_b, &h0_b_ep));

    let included: Vec<Vec<Scalar>> = h1_b_ep.space.representatives().iter().map(|v| include_derivation(b, &rb.h1.slots, &ep_b, &h1_b_ep.slots, v)).collect();
    let row2 = row("HH1(B) = H1(B,E') + HH1(C)", rb.h1.dim(), vec![h1_b_ep.dim(), rc.h1.dim()], &phi1_bc, kernel_check_1(&rb.h1, &phi1_bc, &included));

    let row3 = row("HH0(C~) = H0(C~,E'') + HH0(B)", rt.h0.dim(), vec![h0_t_es.dim(), rb.h0.dim()], &phi0_tb, kernel_check_0(ct, &rt.h0, &phi0_tb, &es_t, &h0_t_es));

    let mut kernel4: Vec<Vec<Scalar>> = h1_t_es.space.representatives().iter().map(|v| include_derivation(ct, &rt.h1.slots, &es_t, &h1_t_es.slots, v)).collect();
    let derived = curly_derivations(ct, &rt.h1.slots, &es_b, &b_in_t, &curly_es_b, &rest);
    let derived_ok = derived.iter().all(|d| rt.h1.space.cocycles().contains(d));
    kernel4.extend(derived);
    let row4 = row(
        "HH1(C~) = H1(C~,E'') + E(E'',B) + HH1(B)",
        rt.h1.dim(),
        vec![h1_t_es.dim(), curly_es_b.dim(), rb.h1.dim()],
        &phi1_tb,
        derived_ok && kernel_check_1(&rt.h1, &phi1_tb, &kernel4),
    );

    let remarks = vec![
        Identity::new("H1(B,E') = H1(C,E') + End(E')", h1_b_ep.dim(), &[h1_c_ep.dim() as i64, end_ep as i64]),
        Identity::new("H1(C~,E'') = H1(B,E'') + End(E'')", h1_t_es.dim(), &[h1_b_es.dim() as i64, end_es as i64]),
        Identity::new("H1(C~,E) = H1(C,E) + End(E)", h1_t_e.dim(), &[h1_c_e.dim() as i64, end_e as i64]),
    ];
    let pushout = Identity::new("HH1(B) = HH1(C~) + H1(B,E') - H1(C~,E)", rb.h1.dim(), &[rt.h1.dim() as i64, h1_b_ep.dim() as i64, -(h1_t_e.dim() as i64)]);

    // Central elements without an idempotent component; 1 itself acts trivially on nothing.
    let radical = Subspace::from_spanning(field, b.dim(), (0..b.dim()).filter(|&i| !b.basis()[i].is_stationary()).map(|i| b.unit_vec(i)).collect());
    let center = Subspace::from_spanning(field, b.dim(), rb.h0.cocycles().basis().to_vec());
    let radical_center = center.intersect(&radical)?;
    let center_kills = radical_center.dim() + 1 == center.dim()
        && radical_center.basis().iter().all(|z| {
            let z = q2.apply(z);
            es_t.ambient_vectors().unwrap_or(&[]).iter().all(|x| ct.mul_vec(&z, x).iter().all(Scalar::is_zero) && ct.mul_vec(x, &z).iter().all(Scalar::is_zero))
        });
    let (c_slots, der_c) = crate::hochschild::derivation_space(c, &rc.m);
    let lifts = der_c.basis().iter().all(|d| {
        let w = super::lift_derivation(c, &c_slots, ep_c, d);
        w.is_lifted() && super::check_lift(c, &c_slots, ep_c, &w)
    });
    let checks = vec![
        Check { name: "E(E',C) = 0".into(), pass: curly_ep_c.dim() == 0 },
        Check { name: "radical of Z(B) annihilates E''".into(), pass: center_kills },
        Check { name: "every derivation of C lifts".into(), pass: lifts },
        Check { name: "projections are well defined".into(), pass: [&phi0_bc, &phi1_bc, &phi0_tb, &phi1_tb].iter().all(|p| p.well_defined) },
        Check { name: "inner derivations are diagonal".into(), pass: [(c, &rc.m), (b, &rb.m), (ct, &rt.m), (b, &ep_b), (ct, &es_t)].iter().all(|(a, m)| inner_cross_check(a, m)) },
        Check { name: "Ext2(DC,C) matches the relation bimodule".into(), pass: ext.ext2 == e_c.dim() },
    ];

    let oracle = if oracle {
        let pairs: Vec<(&BoundQuiverAlgebra, &Bimodule, &str, usize, usize)> = vec![
            (c, &rc.m, "C", rc.h0.dim(), rc.h1.dim()),
            (b, &rb.m, "B", rb.h0.dim(), rb.h1.dim()),
            (ct, &rt.m, "C~", rt.h0.dim(), rt.h1.dim()),
            (b, &ep_b, "E'", h0_b_ep.dim(), h1_b_ep.dim()),
            (c, ep_c, "E'", h0(c, ep_c).dim(), h1_c_ep.dim()),
            (ct, &es_t, "E''", h0_t_es.dim(), h1_t_es.dim()),
            (b, &es_b, "E''", h0(b, &es_b).dim(), h1_b_es.dim()),
            (ct, &e_t, "E", h0(ct, &e_t).dim(), h1_t_e.dim()),
        ];
        let mut entries = Vec::new();
        for (a, m, label, d0, d1) in pairs {
            for (degree, derivations) in [(0, d0), (1, d1)] {
                let bar = bar_h(a, m, degree)?.dim();
                let algebra = algebra_label(a, c, b, ct);
                entries.push(OracleEntry { algebra, module: label.to_string(), degree, derivations, bar, equal: bar == derivations });
            }
        }
        Some(entries)
    } else {
        None
    };

    Ok(TheoremReport {
        field: field.to_string(),
        base: c.name().to_string(),
        tilde: ct.name().to_string(),
        split: sp.new_arrows.clone(),
        complement: rest,
        dim_C: c.dim(),
        dim_B: b.dim(),
        dim_Ctilde: ct.dim(),
        dim_Eprime: ep_c.dim(),
        dim_Esec: es_b.dim(),
        ext2_C: ext.ext2,
        hh0_C: rc.h0.dim(),
        hh0_B: rb.h0.dim(),
        hh0_Ctilde: rt.h0.dim(),
        hh1_C: rc.h1.dim(),
        hh1_B: rb.h1.dim(),
        hh1_Ctilde: rt.h1.dim(),
        h0_B_Eprime: h0_b_ep.dim(),
        h1_B_Eprime: h1_b_ep.dim(),
        h1_C_Eprime: h1_c_ep.dim(),
        end_Eprime: end_ep,
        h0_Ctilde_Esec: h0_t_es.dim(),
        h1_Ctilde_Esec: h1_t_es.dim(),
        h1_B_Esec: h1_b_es.dim(),
        end_Esec: end_es,
        curlyE_Esec_B: curly_es_b.dim(),
        curlyE_Eprime_C: curly_ep_c.dim(),
        h1_Ctilde_E: h1_t_e.dim(),
        h1_C_E: h1_c_e.dim(),
        end_E: end_e,
        projections: vec![
            ProjectionReport::new("phi0: HH0(B) -> HH0(C)", &phi0_bc),
            ProjectionReport::new("phi1: HH1(B) -> HH1(C)", &phi1_bc),
            ProjectionReport::new("phi0: HH0(C~) -> HH0(B)", &phi0_tb),
            ProjectionReport::new("phi1: HH1(C~) -> HH1(B)", &phi1_tb),
        ],
        rows: vec![row1, row2, row3, row4],
        remarks,
        pushout,
        checks,
        oracle,
    })
}

fn algebra_label(a: &BoundQuiverAlgebra, c: &BoundQuiverAlgebra, b: &BoundQuiverAlgebra, ct: &BoundQuiverAlgebra) -> String {
    if std::ptr::eq(a, c) {
        "C".into()
    } else if std::ptr::eq(a, b) {
        "B".into()
    } else if std::ptr::eq(a, ct) {
        "C~".into()
    } else {
        a.name().to_string()
    }
}

/// For `f ∈ 𝓔(E″, B)`, the derivation of `C̃` sending each complementary new
/// arrow `a` to `f(a)` and every other arrow to zero.
fn curly_derivations(ct: &BoundQuiverAlgebra, slots: &Slots, es_b: &Bimodule, b_in_t: &Bimodule, curly: &Subspace, rest: &[String]) -> Vec<Vec<Scalar>> {
    let field = ct.field();
    let basis = es_b.ambient_vectors().unwrap_or(&[]).to_vec();
    if basis.is_empty() {
        return Vec::new();
    }
    let in_es = Matrix::from_columns(field, ct.dim(), &basis);
    curly
        .basis()
        .iter()
        .map(|v| {
            let f = matrix_from_coords(field, b_in_t.dim(), es_b.dim(), v);
            let mut out = vec![field.zero(); slots.len()];
            for name in rest {
                let ai = ct.quiver().arrow_id(name).expect("new arrow");
                let coords = in_es.solve(&ct.unit_vec(ct.arrow_basis(ai))).expect("sizes agree").expect("arrow lies in its ideal");
                let value = b_in_t.to_ambient(&f.apply(&coords)).expect("ambient");
                let enc = slots.encode(ai, &SparseVec::from_dense(&value), field).expect("bimodule map preserves the grading");
                for (o, e) in out.iter_mut().zip(enc) {
                    if !e.is_zero() {
                        *o = e;
                    }
                }
            }
            out
        })
        .collect()
}
