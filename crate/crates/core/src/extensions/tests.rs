use super::*;
use crate::algebra::AlgebraMap;
use crate::hochschild::derivation_space;
use crate::qdsl::parse;

const EX1: &str = include_str!("../../fixtures/ex1.quiv");
const EX2: &str = include_str!("../../fixtures/ex2.quiv");
const CHAIN: &str = "algebra C\nvertices 1 2 3\narrow a 1 2\narrow b 2 3\nrel a.b\nend\n\
algebra T\nextension_of C\nvertices 1 2 3\narrow a 1 2\narrow b 2 3\narrow x 3 1\nnew x\nrel a.b\nrel b.x\nrel x.a\nend\n";

fn ext(text: &str, tilde: &str) -> Result<RelationExtension, ExtensionError> {
    RelationExtension::from_file(&parse(text).unwrap(), "C", tilde, None)
}

#[test]
fn splits_match_the_fixture_presentations() {
    for text in [EX1, EX2] {
        let e = ext(text, "Ctilde").unwrap();
        let sp = e.split(&["eps"]).unwrap();
        assert_eq!(sp.extension.dim(), 12);
        assert_eq!(sp.extension.dim(), sp.base.dim() + sp.ideal.dim());
        // The quotient agrees with the separately presented B.
        let file = parse(text).unwrap();
        let fixture_b = crate::algebra::BoundQuiverAlgebra::from_block(file.block("B").unwrap(), None, 64).unwrap();
        let iso = AlgebraMap::by_names(&sp.extension, &fixture_b).unwrap();
        iso.check_morphism(&sp.extension, &fixture_b).unwrap();
        assert_eq!(iso.matrix().rank(), 12);
        let full = e.split(&["eps2", "eps"]).unwrap();
        assert_eq!(full.extension.dim(), e.tilde.dim());
        assert_eq!(full.new_arrows, ["eps", "eps2"]);
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let e = ext(EX1, "Ctilde").unwrap();
    assert_eq!(e.split(&["alpha"]).unwrap_err(), ExtensionError::UnknownNewArrow("alpha".into()));
    assert_eq!(ext(EX1, "D").unwrap_err(), ExtensionError::UnknownBlock("D".into()));
    let wrong_way = CHAIN.replace("arrow x 3 1", "arrow x 1 3").replace("rel b.x\nrel x.a\n", "");
    assert_eq!(ext(&wrong_way, "T").unwrap_err(), ExtensionError::OppositionViolated { arrow: "x".into() });
    let loose = CHAIN.replace("rel x.a\n", "");
    assert_eq!(ext(&loose, "T").unwrap_err(), ExtensionError::Ext2Mismatch { ext2: 1, ideal: 2 });
}

#[test]
fn degree_zero_projection_sends_one_to_one() {
    let e = ext(EX2, "Ctilde").unwrap();
    let sp = e.split(&["eps"]).unwrap();
    let phi = hochschild_projection(&sp, 0).unwrap();
    assert!(phi.is_surjective() && phi.well_defined);
    assert_eq!((phi.matrix.rows(), phi.matrix.cols()), (1, 2));
    assert!(hochschild_projection(&sp, 2).is_err());
}

#[test]
fn trivial_split_projects_identically() {
    let e = ext(EX2, "Ctilde").unwrap();
    let empty: [&str; 0] = [];
    let sp = e.split(&empty).unwrap();
    assert_eq!(sp.extension.dim(), sp.base.dim());
    for degree in [0, 1] {
        let phi = hochschild_projection(&sp, degree).unwrap();
        assert_eq!(phi.matrix, crate::exactla::Matrix::identity(sp.base.field(), phi.matrix.rows()));
    }
}

#[test]
fn derivations_of_the_base_lift() {
    for text in [EX1, EX2] {
        let e = ext(text, "Ctilde").unwrap();
        let sp = e.split(&["eps", "eps2"]).unwrap();
        let c = &sp.base;
        let (slots, der) = derivation_space(c, &crate::bimod::Bimodule::regular(c));
        let zero = vec![c.field().zero(); slots.len()];
        let w = lift_derivation(c, &slots, &sp.ideal, &zero);
        assert!(w.alpha.as_ref().unwrap().is_zero());
        for d in der.basis() {
            let w = lift_derivation(c, &slots, &sp.ideal, d);
            assert!(w.is_lifted() && check_lift(c, &slots, &sp.ideal, &w));
        }
        let bogus = LiftWitness { derivation: der.basis()[0].clone(), alpha: None };
        assert!(!check_lift(c, &slots, &sp.ideal, &bogus));
    }
}

#[test]
fn first_example_report() {
    let e = ext(EX1, "Ctilde").unwrap();
    let r = verify_theorem(&e, &["eps"], true).unwrap();
    assert!(r.passed());
    let rows: Vec<(usize, Vec<usize>)> = r.rows.iter().map(|x| (x.lhs, x.rhs.clone())).collect();
    assert_eq!(rows, [(1, vec![0, 1]), (1, vec![1, 0]), (1, vec![0, 1]), (2, vec![1, 0, 1])]);
    assert_eq!(r.projections[3].rank, 1);
}

#[test]
fn second_example_report() {
    let e = ext(EX2, "Ctilde").unwrap();
    let r = verify_theorem(&e, &["eps"], false).unwrap();
    assert!(r.passed());
    assert_eq!((r.hh1_C, r.hh1_B, r.hh1_Ctilde), (1, 2, 3));
    assert_eq!((r.h1_C_Eprime, r.h1_B_Eprime, r.end_Eprime), (0, 1, 1));
    assert_eq!((r.hh0_B, r.hh0_Ctilde, r.h0_B_Eprime), (2, 3, 1));
    // ε′α = 0 in C̃ while εα ≠ 0 in B forces every f ∈ 𝓔(E″, B) to vanish.
    assert_eq!((r.curlyE_Esec_B, r.h1_Ctilde_Esec), (0, 1));
    assert_eq!(r.pushout.rhs, [3, 1, -2]);
    assert!(r.pushout.pass);
}

#[test]
fn posets_of_both_examples() {
    for (text, profile) in [(EX1, [0, 1, 1, 2]), (EX2, [1, 2, 2, 3])] {
        let p = poset(&ext(text, "Ctilde").unwrap()).unwrap();
        assert!(p.passed());
        assert_eq!(p.profile(), profile);
        assert_eq!(p.edges.len(), 4);
        assert_eq!((p.minimum, p.maximum), (Some(0), Some(3)));
        assert_eq!(p.nodes[1].arrows, ["eps"]);
    }
}

#[test]
fn single_new_arrow_gives_a_chain() {
    let p = poset(&ext(CHAIN, "T").unwrap()).unwrap();
    assert_eq!(p.nodes.len(), 2);
    assert_eq!(p.edges.len(), 1);
    assert!(p.passed());
}
