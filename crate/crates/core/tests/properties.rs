use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hamcube::cube::{Side, SplitContext};
use hamcube::engine::{ham_path_matching, EngineConfig};
use hamcube::forest::{is_linear_forest, is_matching, nnc_check};
use hamcube::io::{emit_instance, emit_path, parse_instance, parse_path};
use hamcube::verify::{random_instance, verify_path, ViolationKind};
use hamcube::{Dim, Edge, Vertex};

fn cube_vertex() -> impl Strategy<Value = (u32, u64)> {
    (1u32..=12).prop_flat_map(|n| (Just(n), 0..(1u64 << n)))
}

proptest! {
    #[test]
    fn flip_is_an_involution_changing_parity((n, bits) in cube_vertex(), j in 1u32..=12) {
        let j = 1 + (j - 1) % n;
        let v = Vertex(bits);
        let w = v.flip(j);
        prop_assert_eq!(w.flip(j), v);
        prop_assert_ne!(w.parity(), v.parity());
        prop_assert!(v.is_adjacent(w));
        prop_assert_eq!(Edge::of(v, w).dim(), j);
        prop_assert_eq!(Edge::of(v, w), Edge::of(w, v));
    }

    #[test]
    fn bit_strings_round_trip((n, bits) in cube_vertex()) {
        let d = Dim::new(n).unwrap();
        let s = Vertex(bits).to_bits(d);
        prop_assert_eq!(s.len(), n as usize);
        prop_assert_eq!(Vertex::parse_bits(&s).unwrap(), (Vertex(bits), d));
    }

    #[test]
    fn distance_is_a_metric(a in 0u64..1024, b in 0u64..1024, c in 0u64..1024) {
        let (a, b, c) = (Vertex(a), Vertex(b), Vertex(c));
        prop_assert_eq!(a.distance(b), b.distance(a));
        prop_assert!(a.distance(c) <= a.distance(b) + b.distance(c));
        prop_assert_eq!(a.distance(b) % 2 == 0, a.parity() == b.parity());
    }

    #[test]
    fn split_round_trips((n, bits) in cube_vertex(), j in 1u32..=12, flipped: bool) {
        prop_assume!(n >= 2);
        let d = Dim::new(n).unwrap();
        let j = 1 + (j - 1) % n;
        let mut sc = SplitContext::new(d, j).unwrap();
        if flipped {
            sc = sc.swapped();
        }
        let v = Vertex(bits);
        let side = sc.side(v);
        prop_assert_eq!(sc.lift(sc.project(v), side), v);
        prop_assert_eq!(sc.project(sc.partner(v)), sc.project(v));
        prop_assert_eq!(sc.side(sc.partner(v)), side.other());
        prop_assert!(sc.project(v).is_valid(sc.sub_dim()));
        let e = Edge::of(v, v.flip(j));
        prop_assert!(sc.is_cross(e));
        prop_assert_eq!(sc.swapped().side(v), side.other());
        if side == Side::Zero {
            prop_assert_eq!(sc.lift(sc.project(v), Side::One), sc.partner(v));
        }
    }

    #[test]
    fn sampled_instances_are_valid(n in 5u32..=9, seed: u64) {
        let d = Dim::new(n).unwrap();
        let m = (3 * n - 13) as usize;
        let inst = random_instance(d, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(inst.validate().is_ok());
        prop_assert!(is_matching(&inst.m));
        prop_assert!(is_linear_forest(&inst.m));
        prop_assert!(nnc_check(&inst.m, inst.x, inst.y));
        let text = emit_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Engine output passes the checker, and every single-step corruption of
    /// it is caught.
    #[test]
    fn engine_paths_verify_and_mutations_fail(n in 5u32..=8, seed: u64, i in 0usize..256, k in 0usize..256) {
        let d = Dim::new(n).unwrap();
        let m = (3 * n - 13) as usize;
        let inst = random_instance(d, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let cfg = EngineConfig { n_base: 5, ..EngineConfig::default() };
        let c = ham_path_matching(&inst, &cfg).unwrap();
        let path = c.path().to_vec();
        prop_assert!(verify_path(d, &path, inst.x, inst.y, &inst.m).is_ok());
        prop_assert_eq!(c.trace.stats.bound_violations, 0);
        prop_assert_eq!(c.trace.stats.depth_violations, 0);

        let (parsed_n, parsed) = parse_path(&emit_path(d, &path)).unwrap();
        prop_assert_eq!(parsed_n, d);
        prop_assert_eq!(&parsed, &path);

        let len = path.len();
        let (i, k) = (i % len, k % len);
        if i != k {
            let mut swapped = path.clone();
            swapped.swap(i, k);
            prop_assert!(verify_path(d, &swapped, inst.x, inst.y, &inst.m).is_err());
        }
        let mut dup = path.clone();
        dup[i] = path[(i + 1) % len];
        prop_assert!(verify_path(d, &dup, inst.x, inst.y, &inst.m).is_err());
        let mut short = path.clone();
        short.remove(i);
        let errs = verify_path(d, &short, inst.x, inst.y, &inst.m).unwrap_err();
        prop_assert!(!errs.is_empty());
        if i != 0 && i != len - 1 {
            prop_assert!(errs.iter().any(|v| v.kind == ViolationKind::MissedVertex));
        }
    }
}
