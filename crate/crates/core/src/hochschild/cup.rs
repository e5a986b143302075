//! Cup product on cochains with coefficients in the regular bimodule.

use std::collections::BTreeMap;

use super::{Cochain, HochschildError};
use crate::algebra::BoundQuiverAlgebra;
use crate::exactla::{Scalar, SparseVec};

/// `(f ⌣ g)(u_1, .., u_s, v_1, .., v_t) = f(u)·g(v)`, for `s + t ≤ 2`.
pub fn cup_product(a: &BoundQuiverAlgebra, f: &Cochain, g: &Cochain) -> Result<Cochain, HochschildError> {
    let total = f.degree() + g.degree();
    if total > 2 {
        return Err(HochschildError::DegreeOverflow(total));
    }
    let n = a.dim();
    for h in [f, g] {
        if h.algebra_dim() != n || h.module_dim() != n {
            return Err(HochschildError::ModuleMismatch);
        }
    }
    let shape = Cochain::zero(total, n, n);
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (fi, c) in f.entries().iter() {
        let (u, k) = f.decode(*fi);
        for (gi, d) in g.entries().iter() {
            let (v, l) = g.decode(*gi);
            let cd = c * d;
            let tuple: Vec<usize> = u.iter().chain(&v).copied().collect();
            let base = shape.index(&tuple, 0);
            for (r, x) in a.mult(k, l).iter() {
                let term = &cd * x;
                match out.get_mut(&(base + r)) {
                    Some(acc) => *acc += &term,
                    None => {
                        out.insert(base + r, term);
                    }
                }
            }
        }
    }
    Ok(Cochain::new(total, n, n, SparseVec::from_map(out)))
}
