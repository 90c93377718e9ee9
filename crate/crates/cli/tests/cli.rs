use std::process::{Command, Output};

#[path = "../src/report.rs"]
#[allow(dead_code)]
mod report;

use report::*;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superdirac")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> (T, String) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    (serde_json::from_str(&s).expect("valid report"), s)
}

#[test]
fn algebra_info_gl21() {
    let o = run(&["algebra", "info", "2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("positive roots: 1 even, 2 odd"), "{s}");
    assert!(s.contains("rho = [0,-1|1]"), "{s}");
    let (rep, _): (AlgebraReport, _) = json(&["algebra", "info", "2", "1"]);
    assert_eq!(rep.rho, "[0,-1|1]");
    assert!(rep.checks.values().all(|&x| x));
}

#[test]
fn algebra_info_gl11_isotropic() {
    let (rep, _): (AlgebraReport, _) = json(&["algebra", "info", "1", "1"]);
    assert_eq!(rep.positive_roots.len(), 1);
    assert_eq!(rep.positive_roots[0].parity, "odd");
    assert_eq!(rep.positive_roots[0].norm, "0");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["algebra", "info", "0", "1"]).status.code(), Some(2));
    assert_eq!(run(&["dirac", "--algebra", "2"]).status.code(), Some(2));
    assert_eq!(run(&["dirac", "--algebra", "2,1", "--hw", "1e7"]).status.code(), Some(2));
    assert_eq!(run(&["dirac", "--algebra", "2,1", "--functional", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dirac_g0_all_checks() {
    let args = ["dirac", "--algebra", "2,1", "--functional", "1,1,0", "--hw", "2e1+1e2", "--checks", "all"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_D dim 2"));
    let (rep, _): (DiracCliReport, _) = json(&args);
    assert_eq!(rep.h_dim, 2);
    assert!(rep.matches_prediction);
    assert_eq!(rep.l_decomposition.len(), 1);
    assert_eq!(rep.l_decomposition[0].weight, "[3/2,1/2|1]");
    assert!(rep.checks.len() >= 8 && rep.checks.values().all(|&x| x));
}

#[test]
fn dirac_gl11_borel() {
    let o = run(&["dirac", "--algebra", "1,1", "--functional", "1,0", "--hw", "1e1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_D dim 1 at [1/2|1/2]"), "{}", stdout(&o));
}

#[test]
fn atypical_candidates_demand_a_window() {
    let o = run(&["dirac", "--algebra", "1,1", "--hw", "0", "--strategy", "candidates"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--window"));
    // with a window the trivial module goes through and is flagged
    let (rep, _): (DiracCliReport, _) = json(&["dirac", "--algebra", "1,1", "--hw", "0", "--window", "3"]);
    assert!(rep.d_is_zero && rep.discrepancy);
    assert_eq!(rep.h_dim, 4);
}

#[test]
fn kostant_trivial_gl11() {
    let o = run(&["kostant", "--algebra", "1,1", "--hw", "0", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p = 0..3: 1,1,1,1"), "{}", stdout(&o));
    let (rep, _): (KostantCliReport, _) = json(&["kostant", "--algebra", "1,1", "--hw", "0", "--max-degree", "3"]);
    let dims: Vec<usize> = rep.degrees.iter().map(|d| d.dim_h).collect();
    assert_eq!(dims, [1, 1, 1, 1]);
}

#[test]
fn kostant_checks_on_gl21() {
    let args = ["kostant", "--algebra", "2,1", "--hw", "2e1+1e2", "--checks", "all", "--window", "2"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (rep, _): (KostantCliReport, _) = json(&args);
    for k in ["square_zero", "duality", "euler_poincare", "identification", "embedding", "equivariance"] {
        assert_eq!(rep.checks.get(k), Some(&true), "{k}");
    }
}

#[test]
fn index_matches_euler() {
    let args = ["index", "--algebra", "2,1", "--functional", "1,1,0", "--hw", "2e1+1e2", "--window", "6"];
    let (rep, _): (IndexReport, _) = json(&args);
    assert!(rep.matches);
    assert_eq!(rep.index, rep.h_euler);
    assert_eq!(rep.index.len(), 2);
}

#[test]
fn verify_matrix_passes() {
    let o = run(&["verify", "--suite", "square,invariance,nilpotency,trace", "--matrix", "gl11,gl21,gl12", "--window", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (rep, _): (VerifyReport, _) = json(&["verify", "--matrix", "gl11,gl21", "--window", "2"]);
    assert_eq!(rep.runs.len(), 5);
    assert!(rep.all_pass);
}

#[test]
fn parabolic_and_module_reports() {
    let (p, _): (ParabolicReport, _) = json(&["parabolic", "--algebra", "2,1", "--functional", "1,1,0", "--checks", "clifford"]);
    assert_eq!(p.kind, "g0");
    assert_eq!((p.s0, p.s1), (0, 2));
    assert_eq!(p.constant, p.constant_trace);
    assert!(p.checks.values().all(|&x| x));
    let (m, _): (ModuleReport, _) = json(&["module", "--algebra", "2,1", "--hw", "2e1+1e2", "--kind", "kac", "--checks", "all"]);
    assert_eq!(m.dim, 8);
    assert_eq!(m.typical, Some(true));
    assert_eq!(m.checks.get("representation"), Some(&true));
}

#[test]
fn json_round_trips_and_carries_conventions() {
    let (rep, s): (DiracCliReport, _) = json(&["dirac", "--algebra", "1,1", "--functional", "1,0", "--hw", "1e1"]);
    let again = serde_json::to_string_pretty(&rep).unwrap();
    assert_eq!(again.trim(), s.trim());
    assert_eq!(serde_json::from_str::<DiracCliReport>(&again).unwrap(), rep);
    assert!(rep.conventions.form.contains("supertrace"));
    assert!(!rep.conventions.sign_validations.is_empty());
}
