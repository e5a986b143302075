use proptest::prelude::*;

use relext::algebra::{BoundQuiverAlgebra, DEFAULT_LENGTH_CAP};
use relext::bimod::Bimodule;
use relext::exactla::{Field, Matrix, Scalar, Subspace};
use relext::hochschild::{bar_h, coboundary, cup_product, derivation_to_cochain, h0, h1};
use relext::qdsl::{parse, serialize};
use relext::quiver::Quiver;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(5)), Just(Field::Prime(101))]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

fn build(field: Field, rows: &[Vec<i64>], cols: usize) -> Matrix {
    Matrix::from_rows(field, cols, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
}

/// An acyclic quiver with monomial relations, as presentation text.
fn algebra_text() -> impl Strategy<Value = String> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let arrow = (0..n, 0..n).prop_filter_map("acyclic", |(s, t)| (s < t).then_some((s, t)));
            let arrows = if n == 1 { Just(Vec::new()).boxed() } else { prop::collection::vec(arrow, 0..=5).boxed() };
            (Just(n), arrows, prop::collection::vec((0usize..5, 0usize..5, 0usize..5, any::<bool>()), 0..=4))
        })
        .prop_map(|(n, arrows, picks)| {
            let mut text = format!("algebra A\nvertices {}\n", (1..=n).map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            for (i, (s, t)) in arrows.iter().enumerate() {
                text.push_str(&format!("arrow a{i} {} {}\n", s + 1, t + 1));
            }
            let mut rels: Vec<String> = Vec::new();
            for (x, y, z, long) in picks {
                if arrows.is_empty() {
                    break;
                }
                let (x, y, z) = (x % arrows.len(), y % arrows.len(), z % arrows.len());
                let mut path = vec![x];
                if arrows[x].1 == arrows[y].0 {
                    path.push(y);
                    if long && arrows[y].1 == arrows[z].0 {
                        path.push(z);
                    }
                }
                if path.len() >= 2 {
                    let r = path.iter().map(|i| format!("a{i}")).collect::<Vec<_>>().join(".");
                    if !rels.contains(&r) {
                        rels.push(r);
                    }
                }
            }
            for r in rels {
                text.push_str(&format!("rel {r}\n"));
            }
            text.push_str("end\n");
            text
        })
}

fn algebra(text: &str, field: Field) -> BoundQuiverAlgebra {
    BoundQuiverAlgebra::from_block(&parse(text).unwrap().blocks[0], Some(field), DEFAULT_LENGTH_CAP).unwrap()
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(field in fields(), (r, c) in (1usize..6, 1usize..6), seed in matrix(6, 6)) {
        let rows: Vec<Vec<i64>> = seed[..r].iter().map(|row| row[..c].to_vec()).collect();
        let m = build(field, &rows, c);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), c);
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn rref_is_invariant_under_row_operations(field in fields(), rows in matrix(4, 5), ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8)) {
        let m = build(field, &rows, 5);
        let mut moved = m.clone();
        for (i, j, s) in ops {
            if i == j {
                continue;
            }
            // row_i += s * row_j, then swap the two rows.
            for col in 0..5 {
                let add = &field.from_i64(s) * moved.get(j, col);
                moved.add_to(i, col, &add);
            }
            for col in 0..5 {
                let (a, b) = (moved.get(i, col).clone(), moved.get(j, col).clone());
                moved.set(i, col, b);
                moved.set(j, col, a);
            }
        }
        let (r1, r2) = (m.rref(), moved.rref());
        prop_assert_eq!(&r1, &r2);
        prop_assert_eq!(r1.matrix.rref(), r1.clone());
    }

    #[test]
    fn grassmann_formula(field in fields(), u in matrix(3, 5), w in matrix(3, 5)) {
        let span = |rows: &Vec<Vec<i64>>| Subspace::from_spanning(field, 5, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect());
        let (u, w) = (span(&u), span(&w));
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains_subspace(&u) && sum.contains_subspace(&w));
        prop_assert!(u.contains_subspace(&meet) && w.contains_subspace(&meet));
    }

    #[test]
    fn path_composition_is_associative(picks in prop::collection::vec(0usize..4, 1..7)) {
        let q = Quiver::new(["1", "2"], [("a", "1", "1"), ("b", "1", "2"), ("c", "2", "2"), ("d", "2", "1")]).unwrap();
        let arrows: Vec<_> = picks.iter().map(|&i| q.path_from_ids(&[i]).unwrap()).collect();
        for w in arrows.windows(3) {
            let left = w[0].compose(&w[1]).and_then(|p| p.compose(&w[2]));
            let right = w[1].compose(&w[2]).and_then(|p| w[0].compose(&p));
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn presentations_round_trip(text in algebra_text()) {
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(serialize(&parsed), text.clone());
        prop_assert_eq!(parse(&serialize(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9 .+*/#\\-\n]{0,120}") {
        let _ = parse(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_algebras_are_associative_with_agreeing_cohomology(text in algebra_text(), field in fields()) {
        let a = algebra(&text, field);
        prop_assert!(a.is_associative());
        let m = Bimodule::regular(&a);
        let (z, d) = (h0(&a, &m), h1(&a, &m));
        prop_assert_eq!(z.dim(), a.center().dim());
        prop_assert_eq!(bar_h(&a, &m, 0).unwrap().dim(), z.dim());
        let bar1 = bar_h(&a, &m, 1).unwrap();
        prop_assert_eq!(bar1.dim(), d.dim());
        // The image of the first coboundary is the space of all inner derivations.
        prop_assert_eq!(bar1.coboundary_dim, a.dim() - z.dim());
        for rep in d.representatives() {
            let f = derivation_to_cochain(&a, &m, &d.slots, &rep.values);
            prop_assert!(coboundary(&a, &m, &f).is_zero());
            for rel in a.relations() {
                let mut total = relext::exactla::SparseVec::new();
                for (c, p) in &rel.terms {
                    total = total.axpy(c, &d.slots.path_value(&a, &m, &rep.values, p));
                }
                prop_assert!(total.is_zero());
            }
            for other in d.representatives() {
                let g = derivation_to_cochain(&a, &m, &d.slots, &other.values);
                prop_assert!(coboundary(&a, &m, &cup_product(&a, &f, &g).unwrap()).is_zero());
            }
        }
    }
}
