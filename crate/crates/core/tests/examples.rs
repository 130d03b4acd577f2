#[allow(dead_code)]
#[path = "../examples/config_driven_run.rs"]
mod config_driven_run;
#[allow(dead_code)]
#[path = "../examples/convergence_history.rs"]
mod convergence_history;
#[allow(dead_code)]
#[path = "../examples/forchheimer_sweep.rs"]
mod forchheimer_sweep;
#[allow(dead_code)]
#[path = "../examples/kf_sweep.rs"]
mod kf_sweep;
#[allow(dead_code)]
#[path = "../examples/newton_reference.rs"]
mod newton_reference;
#[allow(dead_code)]
#[path = "../examples/plot_sweep_table.rs"]
mod plot_sweep_table;
#[allow(dead_code)]
#[path = "../examples/solve_fractured_slab.rs"]
mod solve_fractured_slab;
#[allow(dead_code)]
#[path = "../examples/transfer_operators.rs"]
mod transfer_operators;
#[allow(dead_code)]
#[path = "../examples/vanka_smoothing.rs"]
mod vanka_smoothing;
#[allow(dead_code)]
#[path = "../examples/verification_suite.rs"]
mod verification_suite;

#[test]
fn solve_example() {
    let cycles = solve_fractured_slab::run_example(16, 1e-6, 10.0).unwrap();
    assert!((5..=12).contains(&cycles));
}

#[test]
fn sweep_examples() {
    let t = kf_sweep::run_example(vec![8, 16]).unwrap();
    assert_eq!(t.len(), 4);
    assert!(t.iter().flatten().all(|c| c.is_some()));
    let t = forchheimer_sweep::run_example(vec![8], vec![0.0, 100.0]).unwrap();
    assert_eq!(t.len(), 2);
    assert!(t.iter().flatten().all(|c| c.is_some()));
}

#[test]
fn convergence_example() {
    let dir = tempfile::tempdir().unwrap();
    let counts = convergence_history::run_example(dir.path(), vec![8, 16]).unwrap();
    assert_eq!(counts.len(), 2);
    assert!(dir.path().join("convergence.svg").exists());
}

#[test]
fn newton_example() {
    assert!(newton_reference::run_example(8).unwrap() < 1e-6);
}

#[test]
fn transfer_example() {
    transfer_operators::run_example().unwrap();
}

#[test]
fn smoothing_example() {
    let (smoothed, cycles) = vanka_smoothing::run_example(16).unwrap();
    assert!(smoothed < 1.0);
    assert!(cycles < smoothed);
}

#[test]
fn config_example() {
    let dir = tempfile::tempdir().unwrap();
    assert!(config_driven_run::run_example(dir.path(), 16).unwrap());
    assert!(dir.path().join("config.toml").exists());
}

#[test]
fn verification_example() {
    assert!(verification_suite::run_example(8).unwrap());
}

#[test]
fn plot_example() {
    let dir = tempfile::tempdir().unwrap();
    plot_sweep_table::run_example(dir.path(), vec![8, 16]).unwrap();
    assert!(dir.path().join("table.svg").exists());
    assert!(dir.path().join("history.svg").exists());
}
