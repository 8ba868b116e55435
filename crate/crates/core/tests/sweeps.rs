use std::collections::BTreeMap;

use hamcube::engine::EngineConfig;
use hamcube::io::{emit_report, parse_report};
use hamcube::verify::{canonical_instances, cross_check, sweep_exhaustive, sweep_random, SweepConfig, SweepError};
use hamcube::Dim;

fn dim(n: u32) -> Dim {
    Dim::new(n).unwrap()
}

/// The reduced family must be a set of orbit representatives: same verdicts
/// as the full family, and no fewer orbits than the weight classes of `y`.
#[test]
fn symmetry_reduction_agrees_with_the_full_family() {
    let reduced_cfg = SweepConfig::default();
    let full_cfg = SweepConfig { symmetry_reduction: false, ..SweepConfig::default() };
    let reduced = sweep_exhaustive(dim(5), 1, &reduced_cfg).unwrap();
    let full = sweep_exhaustive(dim(5), 1, &full_cfg).unwrap();
    assert!(reduced.all_passed() && full.all_passed());
    // every x, every odd-distance y, every matching of size 0 or 1 (80 edges)
    // minus the pairs where xy is the single matching edge
    assert_eq!(full.instances, 32 * 16 * 81 - 80 * 2);
    assert!(reduced.instances < full.instances);

    // orbit sizes recomputed independently: count full-family instances by
    // the invariants (|M|, d(x, y), d(x, M), d(y, M)) on both sides
    let key = |i: &hamcube::Instance| {
        let dm = |v: hamcube::Vertex| i.m.iter().map(|e| v.distance(e.lo()).min(v.distance(e.hi()))).min();
        (i.m.len(), i.x.distance(i.y), dm(i.x), dm(i.y))
    };
    let mut full_keys = BTreeMap::new();
    for i in canonical_instances(dim(5), 1, false, usize::MAX).unwrap() {
        *full_keys.entry(key(&i)).or_insert(0u64) += 1;
    }
    let mut reduced_keys = BTreeMap::new();
    for i in canonical_instances(dim(5), 1, true, usize::MAX).unwrap() {
        *reduced_keys.entry(key(&i)).or_insert(0u64) += 1;
    }
    assert_eq!(full_keys.keys().collect::<Vec<_>>(), reduced_keys.keys().collect::<Vec<_>>());
}

#[test]
fn exhaustive_counts_at_n5() {
    let reduced = canonical_instances(dim(5), 2, true, usize::MAX).unwrap();
    assert_eq!(reduced.len(), 594);
    assert!(reduced.iter().all(|i| i.x.0 == 0 && i.validate().is_ok()));
    assert!(matches!(canonical_instances(dim(5), 2, false, 1000), Err(SweepError::TooLarge(..))));
    assert!(matches!(canonical_instances(dim(8), 0, true, usize::MAX), Err(SweepError::OutOfRange(_))));
}

#[test]
fn random_sweeps_exercise_the_construction() {
    let cfg = SweepConfig {
        engine: EngineConfig { n_base: 5, strict: true, ..EngineConfig::default() },
        ..SweepConfig::default()
    };
    let rep = sweep_random(dim(8), 11, 100, 5, &cfg).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.failures);
    assert_eq!(rep.fallback, 0);
    assert!(rep.cases.keys().any(|k| k.starts_with("n8 case")));
    assert!(rep.cases.keys().all(|k| k != "exact"));
    assert_eq!((rep.bound_violations, rep.depth_violations), (0, 0));
    assert_eq!(parse_report(&emit_report(&rep)).unwrap(), rep);
}

#[test]
fn engine_and_oracle_agree() {
    let cfg = SweepConfig { engine: EngineConfig { n_base: 5, ..EngineConfig::default() }, ..SweepConfig::default() };
    for n in [5, 6] {
        let rep = cross_check(dim(n), 60, 17, &cfg).unwrap();
        assert_eq!(rep.disagreements, 0, "{:?}", rep.failures);
        assert!(rep.all_passed());
    }
    assert!(cross_check(dim(7), 1, 0, &cfg).is_err());
}

#[test]
fn job_count_does_not_change_reports() {
    let one = SweepConfig { jobs: Some(1), ..SweepConfig::default() };
    let four = SweepConfig { jobs: Some(4), ..SweepConfig::default() };
    let a = sweep_random(dim(6), 5, 30, 1, &one).unwrap();
    let b = sweep_random(dim(6), 5, 30, 1, &four).unwrap();
    assert_eq!(emit_report(&a), emit_report(&b));
}
