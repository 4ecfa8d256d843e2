use assert_cmd::Command;

fn cmd() -> Command {
    let mut c = Command::cargo_bin("superdouble").unwrap();
    c.env_remove("SUPERDOUBLE_CATALOG").current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

fn golden(target: &str, expected: &str, extra: &[&str]) {
    cmd()
        .args(["report", "--target", target, "--format", "machine"])
        .args(extra)
        .assert()
        .success()
        .stdout(expected.to_string());
}

#[test]
fn check_algebra_f() {
    cmd()
        .args(["check", "--algebra", "F"])
        .assert()
        .success()
        .stdout("grading: PASS (0 residuals)\nantisymmetry: PASS (0 residuals)\njacobi: PASS (0 residuals)\n");
}

#[test]
fn check_whole_catalog() {
    let out = cmd().args(["check", "--format", "machine"]).assert().success().get_output().stdout.clone();
    let s = String::from_utf8(out).unwrap();
    assert_eq!(s.lines().filter(|l| l.starts_with("algebra=")).count(), 28);
    assert_eq!(s.lines().filter(|l| l.starts_with("triple=")).count(), 50);
    assert!(!s.contains("FAIL"));
}

#[test]
fn verify_catalog_certificate() {
    cmd().args(["verify-iso", "--cert", "appendixA/DD42_V"]).assert().success().stdout(
        "certificate: appendixA/DD42_V\nsource: MT42_7(p=0,eps=1)\ntarget: MT42_7(p=0,eps=-1)\n\
             instances: 1 branches, 0 samples\ncondition(i): PASS, condition(ii): PASS\n",
    );
}

#[test]
fn search_between_triples() {
    has_lines(
        cmd()
            .args(["verify-iso", "--from", "MT22_3", "--to", "MT22_4", "--bind", "eps=1", "--format", "machine"])
            .assert()
            .success(),
        &["condition(i)=PASS", "condition(ii)=PASS"],
    );
}

fn has_lines(a: assert_cmd::assert::Assert, want: &[&str]) {
    let s = String::from_utf8_lossy(&a.get_output().stdout).into_owned();
    for w in want {
        assert!(s.lines().any(|l| l == *w), "missing {w:?} in\n{s}");
    }
}

#[test]
fn search_across_fingerprints_fails() {
    cmd()
        .args(["verify-iso", "--from", "MT22_1", "--to", "MT22_2", "--format", "machine"])
        .assert()
        .code(1)
        .stdout("exhausted=fingerprints0,0,0and2,0,0(1,1)differ\nnodes=0/20000\n");
}

#[test]
fn table5_at_one_binding() {
    golden("table5", include_str!("golden/report_table5_bound.txt"), &["--bind", "p=2", "--bind", "kappa=1"]);
    has_lines(
        cmd().args(["report", "--target", "table5", "--bind", "p=2", "--bind", "kappa=1"]).assert().success(),
        &["  rows 14/14, bindings 18"],
    );
}

#[test]
fn report_table2() {
    golden("table2", include_str!("golden/report_table2.txt"), &[]);
}

#[test]
fn report_table4() {
    golden("table4", include_str!("golden/report_table4.txt"), &[]);
}

#[test]
fn report_table5() {
    golden("table5", include_str!("golden/report_table5.txt"), &[]);
}

#[test]
fn report_table7() {
    golden("table7", include_str!("golden/report_table7.txt"), &[]);
}

#[test]
fn report_thm1() {
    golden("thm1", include_str!("golden/report_thm1.txt"), &[]);
}

#[test]
fn report_thm2() {
    golden("thm2", include_str!("golden/report_thm2.txt"), &[]);
}

#[test]
fn report_thm3() {
    golden("thm3", include_str!("golden/report_thm3.txt"), &[]);
}

#[test]
fn machine_output_is_deterministic() {
    let run = || {
        cmd().args(["classify", "--dims", "4,2", "--format", "machine"]).assert().success().get_output().stdout.clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn solve_r_symbolic() {
    cmd().args(["solve-r", "--algebra", "C4", "--format", "machine"]).assert().success().stdout(
        "H=[[1,0],[1,1]]\nG=[[alpha,beta],[beta,gamma]]\n\
             R=[[1/2*alpha-1/2*beta+1/4*gamma,1/2*beta-1/4*gamma],[1/2*beta-1/4*gamma,1/2*gamma]]\n\
             residual=PASS residuals=0\n",
    );
}

#[test]
fn solve_r_obstruction() {
    has_lines(cmd().args(["solve-r", "--algebra", "C3"]).assert().code(1), &["no-solution: gamma != 0"]);
    has_lines(cmd().args(["solve-r", "--algebra", "C2_m1"]).assert().code(1), &["no-solution: beta != 0"]);
}

#[test]
fn enumerate_s11() {
    has_lines(
        cmd().args(["enumerate", "--seed", "S11", "--grid", "0,1,-1", "--format", "machine"]).assert().success(),
        &["seed=S11"],
    );
}

#[test]
fn double_brackets() {
    cmd().args(["double", "--triple", "MT22_3"]).assert().success().stdout(
        "triple: (S11|A11)\nsuperdimension: (2,2)\n[b1,f1] = f1\n[b1,ft1] = -ft1\n[f1,ft1] = bt1\n\
             compatibility: PASS (0 residuals)\nad-invariance: PASS (0 residuals)\n",
    );
}

#[test]
fn invariants_of_a_double() {
    cmd()
        .args(["invariants", "--triple", "MT42_6", "--bind", "p=0", "--format", "machine"])
        .assert()
        .success()
        .stdout("C1=(3,0)\nC2=(1,0)\nC3=(0,0)\ndims=3,1,0\n");
}

#[test]
fn failed_check_exits_1() {
    has_lines(
        cmd().args(["check", "--file", "tests/data/bad_jacobi.sd"]).assert().code(1),
        &["jacobi: FAIL (6 residuals)"],
    );
}

#[test]
fn parse_errors_exit_2() {
    cmd()
        .args(["check", "--file", "tests/data/malformed.sd"])
        .assert()
        .code(2)
        .stderr("superdouble: parse error at 2:24: malformed.sd: expected expression, found `;`\n");
    cmd().args(["check", "--bind", "p=x"]).assert().code(2);
}

#[test]
fn constraint_violations_exit_3() {
    cmd().args(["invariants", "--algebra", "C2_p", "--bind", "p=3"]).assert().code(3);
    cmd().args(["invariants", "--triple", "MT42_7", "--bind", "p=0"]).assert().code(3);
}

#[test]
fn budget_exhaustion_exits_4() {
    cmd().args(["enumerate", "--seed", "S11", "--budget", "3"]).assert().code(4);
}

#[test]
fn unknown_names_exit_5() {
    cmd().args(["check", "--algebra", "nope"]).assert().code(5);
    cmd().args(["verify-iso", "--cert", "nope"]).assert().code(5);
    cmd().args(["report", "--target", "table9"]).assert().code(5);
}

#[test]
fn catalog_path_from_environment() {
    cmd().env("SUPERDOUBLE_CATALOG", "tests/data/catalog").args(["check", "--algebra", "S11"]).assert().success();
    cmd().env("SUPERDOUBLE_CATALOG", "tests/data/catalog").args(["check", "--algebra", "F"]).assert().code(5);
}
