use std::fs;

use primemeans::kernel::state_at;
use primemeans::verifier::{resume, run, Checkpoint, RunOptions, StoredState, VerificationJob, VerifyError};
use primemeans::{Precision, PrimeStream, SieveConfig};

fn job(limit: u64, precision: Precision) -> VerificationJob {
    let ids = [
        "ineq-3.1",
        "cor-6.3",
        "prop-4.6",
        "ineq-5.2",
        "conj-monotone",
        "env-5.4u",
    ];
    VerificationJob::new(ids.iter().map(|s| s.to_string()).collect(), None, limit, precision)
}

fn with_checkpoint(path: &std::path::Path, halt_at: Option<u64>) -> RunOptions {
    RunOptions {
        checkpoint: Some(path.to_path_buf()),
        checkpoint_interval: Some(7_000),
        halt_at,
        ..RunOptions::default()
    }
}

#[test]
fn halted_then_resumed_run_equals_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let j = job(100_000, Precision::DoubleDouble);
    let full = run(&j, &RunOptions::default()).unwrap();
    assert!(!full.halted);

    let first = run(&j, &with_checkpoint(&path, Some(50_000))).unwrap();
    assert!(first.halted);
    let cp = Checkpoint::load(&path).unwrap();
    assert_eq!(cp.state.n, 50_000);

    let resumed = resume(&path, Some(&j), &with_checkpoint(&path, None)).unwrap();
    assert!(!resumed.halted);
    assert_eq!(resumed.report.to_json(), full.report.to_json());
    assert_eq!(resumed.report.to_csv().unwrap(), full.report.to_csv().unwrap());
}

#[test]
fn resume_with_other_job_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let j = job(20_000, Precision::DoubleDouble);
    run(&j, &with_checkpoint(&path, Some(10_000))).unwrap();
    let other = job(20_000, Precision::Double);
    assert!(matches!(
        resume(&path, Some(&other), &RunOptions::default()),
        Err(VerifyError::HashMismatch { .. })
    ));
    let longer = job(30_000, Precision::DoubleDouble);
    assert!(matches!(
        resume(&path, Some(&longer), &RunOptions::default()),
        Err(VerifyError::HashMismatch { .. })
    ));
    assert!(resume(&path, Some(&j), &RunOptions::default()).is_ok());
}

#[test]
fn damaged_files_are_reported_as_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let j = job(20_000, Precision::DoubleDouble);
    run(&j, &with_checkpoint(&path, Some(10_000))).unwrap();
    let good = fs::read_to_string(&path).unwrap();

    fs::write(&path, &good[..good.len() / 2]).unwrap();
    assert!(matches!(
        resume(&path, None, &RunOptions::default()),
        Err(VerifyError::Corrupt(_))
    ));

    fs::write(&path, good.replace("primemeans-checkpoint", "something-else")).unwrap();
    assert!(matches!(Checkpoint::load(&path), Err(VerifyError::Corrupt(_))));

    let mut cp: serde_json::Value = serde_json::from_str(&good).unwrap();
    cp["job"]["limit"] = serde_json::json!(25_000);
    fs::write(&path, cp.to_string()).unwrap();
    assert!(matches!(Checkpoint::load(&path), Err(VerifyError::Corrupt(_))));

    let mut cp: serde_json::Value = serde_json::from_str(&good).unwrap();
    cp["state"]["theta_hi"] = serde_json::json!("not a float");
    fs::write(&path, cp.to_string()).unwrap();
    assert!(matches!(Checkpoint::load(&path), Err(VerifyError::Corrupt(_))));
}

#[test]
fn stored_state_round_trips_at_1e6() {
    let state = state_at(1_000_000, Precision::DoubleDouble);
    let exact: u128 = PrimeStream::new(SieveConfig::default())
        .take(1_000_000)
        .map(u128::from)
        .sum();
    assert_eq!(state.sum_primes(), exact);
    let stored = StoredState::from_state(&state);
    assert_eq!(stored.sum_primes, exact.to_string());
    let text = serde_json::to_string(&stored).unwrap();
    assert!(text.contains("0x"), "{text}");
    let back: StoredState = serde_json::from_str(&text).unwrap();
    let j = VerificationJob::all_bounds(2_000_000, Precision::DoubleDouble);
    let restored = back.to_state(&j).unwrap();
    assert_eq!(restored.n(), state.n());
    assert_eq!(restored.p(), state.p());
    assert_eq!(restored.sum_primes(), state.sum_primes());
    assert_eq!(restored.theta_dd(), state.theta_dd());
    assert_eq!(restored.theta_error().to_bits(), state.theta_error().to_bits());
    assert_eq!(restored.quantities().unwrap(), state.quantities().unwrap());
}

proptest::proptest! {
    #[test]
    fn accumulators_round_trip_bit_exactly(
        value in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO,
        error in 0.0f64..1e-3,
        n in 1u64..1_000_000_000,
    ) {
        use primemeans::verifier::{Accumulator, MarginAt};
        let acc = Accumulator {
            evaluated: n,
            min_margin: Some(MarginAt { n, margin: primemeans::Quantity::new(value, error) }),
            last_not_holds: Some(n),
            ..Accumulator::default()
        };
        let back: Accumulator = serde_json::from_str(&serde_json::to_string(&acc).unwrap()).unwrap();
        let (a, b) = (acc.min_margin.unwrap().margin, back.min_margin.unwrap().margin);
        proptest::prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        proptest::prop_assert_eq!(a.error.to_bits(), b.error.to_bits());
        proptest::prop_assert_eq!(acc, back);
    }
}
