mod common;

use common::*;
use newton_forge::network::{max4_general, CircuitKind, Gate, NetBuilder, NetworkError, Violation};
use newton_forge::sampling::{self, rng, SampleRng};
use newton_forge::{circuit_to_net, eval_circuit, net_to_circuit, NetKind, PolytopeCircuit, Rat, ReluNetwork, Vector};
use rand::Rng;

/// ICNN-shaped network: raw inputs take any sign, gate-to-gate weights are
/// non-negative. Biases only when `biased`.
fn random_icnn(g: &mut SampleRng, dim: usize, gates: usize, biased: bool) -> ReluNetwork {
    let mut gs = Vec::new();
    for i in 0..gates {
        let nodes = dim + i;
        let gate = if i == 0 || g.random_bool(0.55) {
            let k = g.random_range(1..=3.min(nodes));
            let incoming = (0..k)
                .map(|_| {
                    let src = g.random_range(0..nodes);
                    let lo = if src < dim { -4 } else { 0 };
                    (src, q(g.random_range(lo..=4), g.random_range(1..=3)))
                })
                .collect();
            let bias = if biased { q(g.random_range(-3..=3), 2) } else { q(0, 1) };
            Gate::Affine { incoming, bias }
        } else {
            Gate::Relu { source: g.random_range(dim..nodes) }
        };
        gs.push(gate);
    }
    ReluNetwork { input_dim: dim, kind: NetKind::Icnn, gates: gs, output: dim + gates - 1 }
}

#[test]
fn eval_matches_interpreter() {
    let mut g = rng(21);
    for _ in 0..200 {
        let dim = g.random_range(1..=4);
        let gates = g.random_range(1..=15);
        let net = random_net(&mut g, dim, gates);
        for _ in 0..5 {
            let x: Vector = sampling::vector(&mut g, dim, -4, 4, 5);
            assert_eq!(net.eval(&x).unwrap(), interpret(&net, &x));
        }
    }
}

#[test]
fn circuits_compute_the_same_functions() {
    let mut g = rng(22);
    for _ in 0..80 {
        let dim = g.random_range(1..=3);
        let gates = g.random_range(1..=10);
        let net = random_icnn(&mut g, dim, gates, false);
        let c = net_to_circuit(&net).unwrap();
        assert!(c.validate().is_empty());
        assert!(c.depth() <= net.depth());
        let poly = eval_circuit(&c).unwrap().output().clone();
        let back = circuit_to_net(&c).unwrap();
        for _ in 0..10 {
            let x: Vector = sampling::vector(&mut g, dim, -4, 4, 5);
            let want = interpret(&net, &x);
            assert_eq!(support_brute(&poly, &x), want);
            assert_eq!(back.eval(&x).unwrap(), want);
        }
    }
}

#[test]
fn affine_max_form_of_biased_networks() {
    let mut g = rng(23);
    for _ in 0..60 {
        let dim = g.random_range(1..=3);
        let gates = g.random_range(1..=10);
        let net = random_icnn(&mut g, dim, gates, true);
        let f = net.to_affine_max().unwrap();
        for _ in 0..10 {
            let x: Vector = sampling::vector(&mut g, dim, -4, 4, 5);
            assert_eq!(f.eval(&x).unwrap(), interpret(&net, &x));
        }
    }
}

#[test]
fn conversion_preconditions() {
    let mut b = NetBuilder::<Rat>::new(1, NetKind::Monotone);
    let a = b.affine(vec![(0, q(1, 1))], q(1, 1));
    let net = b.finish(a);
    assert!(matches!(net_to_circuit(&net), Err(NetworkError::NonZeroBias { .. })));

    let mut b = NetBuilder::<Rat>::new(1, NetKind::General);
    let r = b.relu(0);
    let a = b.affine(vec![(r, q(-1, 1))], q(0, 1));
    let net = b.finish(a);
    assert!(matches!(net_to_circuit(&net), Err(NetworkError::NegativeInnerWeight { .. })));
}

#[test]
fn validation_reports_each_rule() {
    let net = ReluNetwork::<Rat> {
        input_dim: 2,
        kind: NetKind::Monotone,
        gates: vec![Gate::Affine { incoming: vec![(0, q(-1, 1)), (3, q(1, 1))], bias: q(0, 1) }, Gate::Relu { source: 2 }],
        output: 9,
    };
    let found = net.validate();
    assert!(found.contains(&Violation::NotTopological { node: 2, source: 3 }));
    assert!(found.iter().any(|x| matches!(x, Violation::NegativeWeight { node: 2, source: 0, .. })));
    assert!(found.contains(&Violation::BadOutput { output: 9 }));
    assert!(net.eval(&v(&[1, 1])).is_err());

    let mut icnn = net.clone();
    icnn.kind = NetKind::Icnn;
    icnn.gates[0] = Gate::Affine { incoming: vec![(0, q(-1, 1))], bias: q(0, 1) };
    icnn.output = 3;
    assert!(icnn.validate().is_empty());
}

#[test]
fn depth_counts_relus_on_the_longest_path() {
    let mut b = NetBuilder::<Rat>::new(2, NetKind::Monotone);
    let r1 = b.relu(0);
    let r2 = b.relu(r1);
    let s = b.affine(vec![(r2, q(1, 1)), (1, q(1, 1))], q(0, 1));
    let r3 = b.relu(s);
    let short = b.relu(1);
    let out = b.affine(vec![(r3, q(1, 1)), (short, q(2, 1))], q(0, 1));
    let net = b.finish(out);
    assert_eq!(net.depth(), 3);
    assert_eq!(net.eval(&v(&[2, 3])).unwrap(), q(11, 1));
}

#[test]
fn strip_bias_detects_homogeneity() {
    let mut g = rng(24);
    let mut b = NetBuilder::<Rat>::new(1, NetKind::Monotone);
    let up = b.affine(vec![(0, q(1, 1))], q(1, 1));
    let down = b.affine(vec![(up, q(1, 1))], q(-1, 1));
    let r = b.relu(down);
    let net = b.finish(r);
    let stripped = net.strip_bias(&mut g, 20).unwrap();
    assert!(!stripped.has_biases());

    let mut b = NetBuilder::<Rat>::new(1, NetKind::Monotone);
    let up = b.affine(vec![(0, q(1, 1))], q(1, 1));
    let r = b.relu(up);
    let net = b.finish(r);
    assert!(matches!(net.strip_bias(&mut g, 20), Err(NetworkError::NotHomogeneous { .. })));
}

#[test]
fn affine_horizon_is_a_valid_threshold() {
    let mut g = rng(25);
    let mut b = NetBuilder::<Rat>::new(2, NetKind::Monotone);
    let a = b.affine(vec![(0, q(1, 1))], q(-3, 1));
    let r = b.relu(a);
    let s = b.affine(vec![(r, q(1, 1)), (1, q(1, 1))], q(-1, 1));
    let out = b.relu(s);
    let net = b.finish(out);
    let t = net.affine_horizon().unwrap();
    assert_eq!(t, q(3, 1));
    // Above the threshold the network equals x1 + x2 - 4.
    for _ in 0..50 {
        let x: Vector = sampling::vector(&mut g, 2, 3, 20, 7);
        assert_eq!(net.eval(&x).unwrap(), &x[0] + &x[1] - q(4, 1));
    }
    let general = random_net(&mut g, 2, 4);
    assert!(matches!(general.affine_horizon(), Err(NetworkError::WrongKind { .. })));
}

#[test]
fn max4_general_is_the_maximum() {
    let mut g = rng(26);
    let net = max4_general::<Rat>();
    for _ in 0..100 {
        let x: Vector = sampling::vector(&mut g, 4, -5, 5, 4);
        assert_eq!(net.eval(&x).unwrap(), x.coords().iter().max().unwrap().clone());
    }
}

#[test]
fn json_round_trips() {
    let mut g = rng(27);
    for _ in 0..20 {
        let net = random_icnn(&mut g, 3, 8, false);
        let back: ReluNetwork = serde_json::from_str(&serde_json::to_string(&net).unwrap()).unwrap();
        assert_eq!(back, net);
        let c = net_to_circuit(&net).unwrap();
        let back: PolytopeCircuit = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.kind, CircuitKind::Icnn);
    }
}

#[test]
fn hand_written_json_parses() {
    let text = r#"{"input_dim": 2, "kind": "monotone", "gates": [
        {"op": "affine", "in": [[0, 1], [1, "1/2"]], "bias": "-1/3"},
        {"op": "relu", "in": 2}
    ], "output": 3}"#;
    let net: ReluNetwork = serde_json::from_str(text).unwrap();
    assert_eq!(net.eval(&v(&[1, 2])).unwrap(), q(5, 3));
    assert_eq!(net.eval(&v(&[0, 0])).unwrap(), q(0, 1));
}
