mod common;

use common::*;
use newton_forge::geometry::convex_hull;
use newton_forge::network::Gate;
use newton_forge::lattice::{build_ball, play, SeparatorStrategy};
use newton_forge::synthesis::decompose_polygon;
use newton_forge::{eval_circuit, net_to_circuit, CpwlFn, Polytope, Vector};
use num_traits::Signed;
use proptest::prelude::*;

fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, dim), 1..=max)
}

fn hull_of(pts: &[Vec<i64>], dim: usize) -> Polytope {
    convex_hull(&to_rat(pts), dim).unwrap()
}

fn direction(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec((-7i64..=7, 1i64..=5), dim).prop_map(|c| Vector::new(c.into_iter().map(|(n, d)| q(n, d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(pts in points(3, 14)) {
        let p = hull_of(&pts, 3);
        prop_assert_eq!(convex_hull(p.vertices(), 3).unwrap(), p.clone());
        for w in &to_rat(&pts) {
            prop_assert!(p.contains(w));
        }
    }

    #[test]
    fn support_is_additive_under_minkowski_sums(a in points(3, 8), b in points(3, 8), u in direction(3)) {
        let (pa, pb) = (hull_of(&a, 3), hull_of(&b, 3));
        let s = pa.minkowski_sum(&pb).unwrap();
        prop_assert_eq!(support_brute(&s, &u), support_brute(&pa, &u) + support_brute(&pb, &u));
    }

    #[test]
    fn support_of_a_homothet(pts in points(2, 10), u in direction(2), a in 0i64..=5, shift in direction(2)) {
        let p = hull_of(&pts, 2);
        let moved = p.scale(&q(a, 1)).translate(&shift);
        prop_assert_eq!(support_brute(&moved, &u), q(a, 1) * support_brute(&p, &u) + shift.dot(&u));
    }

    #[test]
    fn support_faces_are_exposed(pts in points(3, 12), u in direction(3)) {
        prop_assume!(!u.is_zero());
        let p = hull_of(&pts, 3);
        let f = p.support_face(&u).unwrap();
        let h = p.support_value(&u).unwrap();
        for w in f.vertices() {
            prop_assert_eq!(w.dot(&u), h.clone());
            prop_assert!(p.vertex_index(w).is_some());
        }
    }

    #[test]
    fn decomposition_re_sums(pts in points(2, 16)) {
        let p = hull_of(&pts, 2);
        let d = decompose_polygon(&p).unwrap();
        prop_assert_eq!(d.resum(), p);
    }

    #[test]
    fn circuits_agree_with_networks(seed in any::<u64>(), dim in 1usize..=3, gates in 1usize..=10) {
        let mut g = newton_forge::sampling::rng(seed);
        let mut net = random_net(&mut g, dim, gates);
        // Zero biases and non-negative gate-to-gate weights.
        for gate in &mut net.gates {
            if let Gate::Affine { incoming, bias } = gate {
                *bias = q(0, 1);
                for (src, w) in incoming.iter_mut() {
                    if *src >= dim {
                        *w = w.abs();
                    }
                }
            }
        }
        let poly = eval_circuit(&net_to_circuit(&net).unwrap()).unwrap().output().clone();
        for _ in 0..5 {
            let x: Vector = newton_forge::sampling::vector(&mut g, dim, -4, 4, 5);
            prop_assert_eq!(support_brute(&poly, &x), interpret(&net, &x));
        }
    }

    #[test]
    fn cpwl_sum_is_the_minkowski_sum(a in points(2, 6), b in points(2, 6), u in direction(2)) {
        let fa = CpwlFn::new(2, to_rat(&a)).unwrap();
        let fb = CpwlFn::new(2, to_rat(&b)).unwrap();
        let s = fa.sum(&fb).unwrap();
        prop_assert_eq!(s.eval(&u).unwrap(), fa.eval(&u).unwrap() + fb.eval(&u).unwrap());
        prop_assert_eq!(s.newton_polytope(), fa.newton_polytope().minkowski_sum(&fb.newton_polytope()).unwrap());
    }

    #[test]
    fn separator_respects_its_bound(r in 1usize..=12) {
        let g = build_ball(r);
        let t = play(&g, &mut SeparatorStrategy, &g.full_set()).unwrap();
        prop_assert!(t.cost() <= 6 * r);
    }
}
