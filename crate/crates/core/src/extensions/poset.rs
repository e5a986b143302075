//! The poset of partial relation extensions, ordered by inclusion of the
//! chosen new arrows.

use rayon::prelude::*;
use serde::Serialize;

use super::{project_h1, ExtensionError, Projection, RelationExtension};
use crate::algebra::{AlgebraMap, BoundQuiverAlgebra};
use crate::bimod::Bimodule;
use crate::hochschild::{h1, H1};

/// Subsets are enumerated exhaustively, so keep the count small.
pub const MAX_NEW_ARROWS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub arrows: Vec<String>,
    pub dim: usize,
    pub hh1: usize,
}

/// A covering pair `lower < upper` with the projection `HH¹(upper) → HH¹(lower)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetEdge {
    pub lower: usize,
    pub upper: usize,
    pub monotone: bool,
    pub surjective: bool,
    pub well_defined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionPoset {
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<PosetEdge>,
    pub minimum: Option<usize>,
    pub maximum: Option<usize>,
    pub triangles_commute: bool,
}

impl ExtensionPoset {
    pub fn passed(&self) -> bool {
        self.minimum.is_some() && self.maximum.is_some() && self.triangles_commute && self.edges.iter().all(|e| e.monotone && e.surjective && e.well_defined)
    }

    pub fn profile(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.hh1).collect()
    }
}

struct Node {
    mask: u32,
    algebra: BoundQuiverAlgebra,
    h1: H1,
}

fn projection(upper: &Node, lower: &Node) -> Result<Projection, ExtensionError> {
    let p = AlgebraMap::by_names(&upper.algebra, &lower.algebra)?;
    p.check_morphism(&upper.algebra, &lower.algebra)?;
    Ok(project_h1(&upper.algebra, &upper.h1, &lower.algebra, &lower.h1, &p))
}

/// Enumerates every arrow subset whose ideal splits off, with Hasse edges.
pub fn poset(ext: &RelationExtension) -> Result<ExtensionPoset, ExtensionError> {
    let k = ext.new_arrows.len();
    if k > MAX_NEW_ARROWS {
        return Err(ExtensionError::TooManyArrows(k));
    }
    let mut masks: Vec<u32> = (0..1u32 << k).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let built: Vec<Result<Option<Node>, ExtensionError>> = masks
        .par_iter()
        .map(|&mask| {
            let subset: Vec<&str> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ext.new_arrows[i].as_str()).collect();
            match ext.split(&subset) {
                Ok(sp) => {
                    let h = h1(&sp.extension, &Bimodule::regular(&sp.extension));
                    Ok(Some(Node { mask, algebra: sp.extension, h1: h }))
                }
                Err(ExtensionError::SplittingFails(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut nodes = Vec::new();
    for n in built {
        if let Some(n) = n? {
            nodes.push(n);
        }
    }

    let below = |a: u32, b: u32| a != b && a & b == a;
    let mut covers = Vec::new();
    for (i, lo) in nodes.iter().enumerate() {
        for (j, hi) in nodes.iter().enumerate() {
            if below(lo.mask, hi.mask) && !nodes.iter().any(|m| below(lo.mask, m.mask) && below(m.mask, hi.mask)) {
                covers.push((i, j));
            }
        }
    }
    let projections: Vec<Projection> = covers.par_iter().map(|&(i, j)| projection(&nodes[j], &nodes[i])).collect::<Result<_, _>>()?;
    let edges = covers
        .iter()
        .zip(&projections)
        .map(|(&(i, j), p)| PosetEdge { lower: i, upper: j, monotone: nodes[i].h1.dim() <= nodes[j].h1.dim(), surjective: p.is_surjective(), well_defined: p.well_defined })
        .collect();

    let full = (1u32 << k) - 1;
    let minimum = nodes.iter().position(|n| n.mask == 0);
    let maximum = nodes.iter().position(|n| n.mask == full);
    let mut triangles_commute = true;
    if let Some(top) = maximum {
        let from_top: Vec<Option<Projection>> = nodes.iter().enumerate().map(|(i, _)| if i == top { None } else { projection(&nodes[top], &nodes[i]).ok() }).collect();
        for (&(i, j), p) in covers.iter().zip(&projections) {
            if j == top {
                continue;
            }
            match (&from_top[j], &from_top[i]) {
                (Some(upper), Some(direct)) => triangles_commute &= p.matrix.mul(&upper.matrix) == direct.matrix,
                _ => triangles_commute = false,
            }
        }
    }

    let nodes = nodes
        .iter()
        .map(|n| PosetNode { arrows: (0..k).filter(|i| n.mask >> i & 1 == 1).map(|i| ext.new_arrows[i].clone()).collect(), dim: n.algebra.dim(), hh1: n.h1.dim() })
        .collect();
    Ok(ExtensionPoset { nodes, edges, minimum, maximum, triangles_commute })
}
