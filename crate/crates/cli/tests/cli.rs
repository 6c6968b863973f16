use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricperv"))
        .args(args.iter().map(|a| if a.ends_with(".json") { data(a).into_os_string() } else { a.into() }))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fan_check_exit_codes() {
    assert_eq!(code(&run(&["fan", "check", "p2.json"])), 0);
    let bad = run(&["fan", "check", "nonregular.json"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("FAN\t"));
    let overlap = run(&["fan", "check", "overlapping.json"]);
    assert_eq!(code(&overlap), 1);
    assert!(stdout(&overlap).contains("OVERLAP\t{0,1} {0,2}\t"));
}

#[test]
fn fan_faces_lists_cones_and_pairs() {
    let out = stdout(&run(&["fan", "faces", "p2.json"]));
    assert_eq!(out.lines().filter(|l| l.starts_with("cone\t")).count(), 7);
    assert_eq!(out.lines().filter(|l| l.starts_with("pair\t")).count(), 9);
}

#[test]
fn membership_reports_the_failing_entry() {
    assert_eq!(code(&run(&["alg", "member", "line.json", "u_line.json"])), 0);
    let out = run(&["alg", "member", "line.json", "not_member.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("NOTMEMBER\t{0} {}\tnot divisible by t - 1"));
}

#[test]
fn product_of_v_and_u_is_t_minus_one_on_the_zero_cone() {
    let path = scratch("vu.json");
    let o = run(&["alg", "mul", "line.json", "v_line.json", "u_line.json", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let x = toric_perv::io::parse_element(&text, None, None).unwrap();
    let fan = x.fan().clone();
    assert_eq!(x.entries().len(), 1);
    assert_eq!(x.entry(fan.zero_cone(), fan.zero_cone()).unwrap().to_string(), "t - 1");
}

#[test]
fn mudelta_and_repcheck_pass() {
    let o = run(&["alg", "mudelta", "p2.json", "--trials", "10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["mod", "repcheck", "line_module.json", "--trials", "20", "--seed", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn module_validation() {
    assert_eq!(code(&run(&["mod", "validate", "line_module.json", "--verify", "full"])), 0);
    let bad = run(&["mod", "validate", "bad_module.json"]);
    assert_eq!(code(&bad), 1);
    let out = stdout(&bad);
    assert!(out.contains("A4\t{}<{0}\t"));
    assert!(out.ends_with("module axioms: FAIL (3 findings)\n"));
}

#[test]
fn relations_on_the_plane() {
    let out = stdout(&run(&["mod", "relations", "p2.json"]));
    for line in ["M₁M₂M₃ = id on V_∅", "N₁M₁₂M₁₃ = id on V₁", "N₂M₂₁M₂₃ = id on V₂", "N₃M₃₁M₃₂ = id on V₃"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn hom_of_a_simple_module_is_one_dimensional() {
    let out = stdout(&run(&["mod", "hom", "line_module.json", "line_module.json"]));
    assert!(out.starts_with("dim Hom = 1\n"));
}

#[test]
fn descent_check_and_glue() {
    assert_eq!(code(&run(&["desc", "check", "p1_descent.json"])), 0);
    let broken = run(&["desc", "check", "p1_descent_broken.json"]);
    assert_eq!(code(&broken), 1);
    let out = stdout(&broken);
    assert!(out.contains("COCYCLE\t{0} {1} {0}\tfails on {}"));
    assert!(out.contains("COCYCLE\t{1} {0} {1}\tfails on {}"));

    let path = scratch("p1_glued.json");
    let o = run(&["desc", "glue", "p1_descent.json", "--verify", "full", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["mod", "validate", path.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["desc", "glue", "p1_descent_broken.json"])), 1);
}

#[test]
fn equivariant_commands() {
    let o = stdout(&run(&["equi", "present", "characters.json"]));
    assert!(o.contains("d = (2)"));
    assert!(o.contains("quotient rank 1, torsion order 2"));
    assert!(stdout(&run(&["equi", "present", "whole_torus.json"])).contains("quotient rank 0"));

    let s = run(&["equi", "structure", "line.json", "mu2.json"]);
    assert_eq!(code(&s), 0);
    assert!(stdout(&s).contains("c\t{} {0} {}\tt^2 - 1"));

    assert_eq!(code(&run(&["equi", "validate", "sqrt_module.json"])), 0);
    assert_eq!(code(&run(&["equi", "validate", "not_sqrt_module.json"])), 1);

    let path = scratch("inflated.json");
    assert_eq!(code(&run(&["equi", "inflate", "sqrt_module.json", "-o", path.to_str().unwrap()])), 0);
    let m = toric_perv::io::parse_module(&std::fs::read_to_string(&path).unwrap(), None).unwrap();
    assert!(m.is_valid());
    assert_eq!(m.torus(m.fan().zero_cone())[0].to_string(), "[4]");
}

#[test]
fn demos() {
    let c1 = run(&["demo", "c1"]);
    assert_eq!(code(&c1), 0);
    assert!(stdout(&c1).contains("s ↦ t·1: unit: PASS"));

    let p1 = run(&["demo", "p1"]);
    assert_eq!(code(&p1), 0);
    let out = stdout(&p1);
    assert!(out.contains("[ a          b          c         ]"));
    assert!(out.contains("(1-t^-1)g  (1-t^-1)h  l"));

    let d = run(&["demo", "dupont"]);
    assert_eq!(code(&d), 0);
    let out = stdout(&d);
    assert!(out.contains("corrected relation: PASS (N1·M12·M13 = id on V1)"));
    assert!(out.contains("Dupont relation M12·M13 = id: FAIL"));
}

#[test]
fn input_errors_exit_with_two() {
    let o = run(&["mod", "validate", "no_such_file.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("ERROR\tinput\t"));
    assert_eq!(code(&run(&["alg", "member", "line.json", "p2.json"])), 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["demo", "dupont", "--seed", "12"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let args = ["alg", "mudelta", "p2.json", "--trials", "3", "--seed", "8"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}
