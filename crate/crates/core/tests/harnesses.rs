use coalgebra::barr::{barr_vs_bisim_exhaustive, barr_vs_bisim_harness, cut_relation};
use coalgebra::bisim::{phi_power, Relation};
use coalgebra::exec::Execution;
use coalgebra::random::{instance_rng, random_system};

#[test]
fn seeded_random_harness_agrees() {
    let report = barr_vs_bisim_harness(1, 200, 6, Execution::Parallel).unwrap();
    assert_eq!(report.summary(), "200/200 systems, 0 disagreements");
}

#[test]
fn exhaustive_harness_agrees() {
    let report = barr_vs_bisim_exhaustive(3, Execution::Parallel).unwrap();
    assert_eq!(report.total(), 2 + 16 + 512);
    assert_eq!(report.disagreements(), 0);
}

#[test]
fn execution_modes_give_identical_reports() {
    let seq = barr_vs_bisim_harness(7, 40, 5, Execution::Sequential).unwrap();
    let par = barr_vs_bisim_harness(7, 40, 5, Execution::Parallel).unwrap();
    assert_eq!(seq.to_text(), par.to_text());
}

#[test]
fn harness_rejects_bad_sizes() {
    assert!(barr_vs_bisim_harness(1, 1, 0, Execution::Sequential).is_err());
    assert!(barr_vs_bisim_harness(1, 1, 11, Execution::Sequential).is_err());
    assert!(barr_vs_bisim_exhaustive(4, Execution::Sequential).is_err());
}

#[test]
fn cut_relations_match_phi_powers_on_random_systems() {
    for i in 0..150 {
        let ts = random_system(&mut instance_rng(99, i), 8);
        let total = Relation::total(ts.len());
        for n in 0..=6 {
            assert_eq!(cut_relation(&ts, n), phi_power(&ts, &total, n), "instance {i} at n={n}\n{ts}");
        }
    }
}
