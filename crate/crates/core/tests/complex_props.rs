mod common;

use common::*;
use proptest::prelude::*;
use quadtame::complex::{
    orientation_report, verify_section5, weight_asymmetry, BigSquare, CnuGraph, Gallery, Link, Outcome, Vertex,
};
use quadtame::{QElem, Ring, Valuation, Var};

fn balanced7() -> Valuation {
    fixed_valuations()[2].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gallery_squares_pass_square_checks(w in word(6)) {
        let ring = Ring::default();
        let nu = balanced7();
        prop_assert!(weight_asymmetry(&nu, &ring).unwrap());
        let g = Gallery::from_word(&w, &ring).unwrap();
        prop_assert_eq!(g.squares.len(), w.len() + 1);
        for (k, l) in g.links.iter().enumerate() {
            prop_assert!(!matches!(l, Link::Disjoint), "squares {} and {} share no vertex", k, k + 1);
        }
        let rep = verify_section5(&g, &nu, &ring).unwrap();
        for c in &rep.squares {
            prop_assert_eq!(c.outcome, Outcome::Pass);
            prop_assert!(c.sum_identity && c.duality);
        }
        for c in rep.propagation.iter().chain(&rep.drops) {
            prop_assert_ne!(c.outcome, Outcome::Fail, "{}", c.vertex);
        }
    }

    #[test]
    fn corner_identity_for_any_valuation(w in word(4), nu in valuation()) {
        let ring = Ring::default();
        let s = BigSquare::of(&w.evaluate(&ring).unwrap());
        let o = orientation_report(&s, &nu, &ring).unwrap();
        prop_assert!(o.sum_identity);
        prop_assert_eq!(o.min.is_some(), o.max.is_some());
    }

    #[test]
    fn action_preserves_types(w in word(4), v in word(3)) {
        let ring = Ring::default();
        let f = w.evaluate(&ring).unwrap();
        let vs = [
            Vertex::type_i(&f.components()[0]),
            Vertex::type_ii_slots(&f, Var::X, Var::Y).unwrap(),
            Vertex::type_iii(&f),
        ];
        for x in &vs {
            let moved = x.act(&v, &ring).unwrap();
            prop_assert_eq!(moved.kind(), x.kind());
            prop_assert_eq!(&moved.act(&v.inverse(), &ring).unwrap(), x);
        }
        let moved = w.concat(&v.inverse()).evaluate(&ring).unwrap();
        prop_assert_eq!(vs[0].act(&v, &ring).unwrap(), Vertex::type_i(&moved.components()[0]));
    }

    #[test]
    fn explored_distance_shrinks_as_graph_grows(w in word(5)) {
        let ring = Ring::default();
        let nu = balanced7();
        let g = Gallery::from_word(&w, &ring).unwrap();
        let full = CnuGraph::from_gallery(&g, &nu, &ring).unwrap();
        let mut part = CnuGraph::new();
        let t = Vertex::type_i(&QElem::var(Var::T));
        for s in &g.squares {
            part.add_square(s, &nu, &ring).unwrap();
            for v in part.nodes().to_vec() {
                let Ok(Some(d)) = part.distance(&t, &v) else { continue };
                let df = full.distance(&t, &v).unwrap().unwrap();
                prop_assert!(df <= d);
            }
        }
        prop_assert_eq!(part.nodes().len(), full.nodes().len());
    }
}

#[test]
fn identity_square_has_coordinate_corners() {
    let ring = Ring::default();
    let s = BigSquare::of(&quadtame::TameAut::identity());
    let names: Vec<String> = s.corners.iter().map(|c| c.to_string()).collect();
    assert_eq!(names, ["[x]", "[y]", "[z]", "[t]"]);
    let o = orientation_report(&s, &balanced7(), &ring).unwrap();
    assert_eq!((o.min, o.max), (Some(0), Some(3)));
}
