//! End-to-end runs of the `pxlap-dg` binary.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pxlap-dg"))
}

#[test]
fn study_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("study.csv");
    let status = bin()
        .args(["study", "--b", "0,0.5", "--nx", "4,6", "--r", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "b,nx,m,l2_error,iterations,jh,converged");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[6], "true");
        let nx: usize = fields[1].parse().unwrap();
        assert_eq!(fields[2].parse::<usize>().unwrap(), nx * nx);
        assert!(fields[3].parse::<f64>().unwrap() > 0.0);
    }
    assert!(text.ends_with('\n') && !text.contains(",\n"));
}

#[test]
fn solve_writes_solution_trace_and_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let (out, trace, mesh) = (dir.path().join("u.csv"), dir.path().join("t.csv"), dir.path().join("m.csv"));
    let status = bin()
        .args(["solve", "--b", "0.25", "--nx", "5", "--r", "1", "--out"])
        .arg(&out)
        .arg("--trace")
        .arg(&trace)
        .arg("--mesh-out")
        .arg(&mesh)
        .status()
        .unwrap();
    assert!(status.success());
    let u = fs::read_to_string(&out).unwrap();
    assert_eq!(u.lines().next().unwrap(), "element,x,y,u_h,u_exact");
    assert_eq!(u.lines().count(), 26);
    let t = fs::read_to_string(&trace).unwrap();
    assert_eq!(t.lines().next().unwrap(), "iter,residual_u,residual_constraint,residual_lambda,Jh");
    assert!(t.lines().count() > 2);
    assert!(fs::read_to_string(&mesh).unwrap().starts_with("element_index,x_min,x_max,y_min,y_max"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# solver settings\nr = 1\nalg = 1\ntol = 1e-9\n").unwrap();
    let status = bin().args(["solve", "--b", "0.5", "--nx", "4", "--config"]).arg(&cfg).status().unwrap();
    assert!(status.success());
}

#[test]
fn unconverged_run_exits_with_two() {
    let status = bin()
        .args(["solve", "--b", "0.5", "--nx", "6", "--r", "1", "--max-iter", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        vec!["solve", "--b", "0.5", "--nx", "4"],
        vec!["solve", "--b=-1", "--nx", "4", "--r", "1"],
        vec!["solve", "--b", "0.5", "--nx", "4", "--r", "1", "--rho", "3"],
        vec!["solve", "--nx", "4", "--r", "1", "--bogus"],
        vec!["study", "--b", "0,x", "--nx", "4", "--r", "1", "--out", "/dev/null"],
    ] {
        let status = bin().args(&args).status().unwrap();
        assert_eq!(status.code(), Some(1), "{args:?}");
    }
}
