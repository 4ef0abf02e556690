use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodcheck")).args(args).env_remove("PRODCHECK_CATALOG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn eval_prints_scalars_and_sparse_tensors() {
    let o = run(&["eval", "--builtin", "cross3", "--term", "cup * cap"]);
    assert_eq!((code(&o), stdout(&o)), (0, "3\n".to_string()));

    let o = run(&["eval", "--builtin", "cross3", "--term", "wedge * braid[V,V] + wedge"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 nonzero"), "{}", stdout(&o));

    let o = run(&["eval", "--builtin", "quaternion", "--term", "m * (e @ e)"]);
    let out = stdout(&o);
    assert!(out.contains("1 nonzero") && out.ends_with("0 = 1\n"), "{out}");

    let o = run(&["eval", "--builtin", "cross3", "--term", "wedge * ("]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
}

#[test]
fn check_reports_equality_or_a_witness() {
    let o = run(&["check", "--builtin", "cross7", "--lhs", "(cup @ id[V]) * (id[V] @ cap)", "--rhs", "id[V]"]);
    assert_eq!((code(&o), stdout(&o)), (0, "EQUAL\n".to_string()));

    let o = run(&[
        "check",
        "--builtin",
        "zerowedge2",
        "--lhs",
        "wedge * (wedge @ id[V]) * (x @ y @ x)",
        "--rhs",
        "((cup * (x @ x)) @ y) - ((cup * (x @ y)) @ x)",
        "--forall",
        "x : -> V",
        "--forall",
        "y : -> V",
    ]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("x = e1") && out.contains("y = e2") && out.contains("lhs 0 rhs 1"), "{out}");

    let o = run(&["check", "--builtin", "cross3", "--lhs", "wedge", "--rhs", "cup"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn axioms_exit_codes_follow_profiles() {
    let o = run(&["axioms", "--builtin", "cross3", "--suite", "vpa", "--output", "tsv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().last().unwrap().starts_with("TOTAL "));

    let o = run(&["axioms", "--builtin", "cross7", "--suite", "assoc"]);
    assert_eq!(code(&o), 1);
    let o = run(&["axioms", "--builtin", "cross7", "--suite", "assoc", "--profile", "builtin"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("fail (expected)"));

    let o = run(&["axioms", "--builtin", "cross3", "--suite", "ca"]);
    assert_eq!(code(&o), 2);
    let o = run(&["axioms", "--builtin", "cross3", "--suite", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn tsv_lines_have_three_fields() {
    let o = run(&["axioms", "--builtin", "complex", "--output", "tsv"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    for l in &lines[..lines.len() - 1] {
        let fields: Vec<&str> = l.split('\t').collect();
        assert_eq!(fields.len(), 3, "{l}");
        assert!(["pass", "fail", "skipped"].contains(&fields[1]), "{l}");
    }
    assert_eq!(out, stdout(&run(&["axioms", "--builtin", "complex", "--output", "tsv"])));
}

#[test]
fn paper_reports_dimension_lines() {
    let o = run(&["paper", "--builtin", "quaternion"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("d=4  (d-1)(d-2)(d-4)(d-8)=0 OK"));

    let o = run(&["paper", "--builtin", "cross3"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(out.contains("mickey=12 OK") && out.contains("mounts=-6 OK"), "{out}");

    let o = run(&["paper", "--builtin", "cross7", "--profile", "builtin"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("# vpa suite on cross7: 28/28 pass"), "{out}");
    assert!(out.contains("fail (expected)") && out.contains("mounts=-378 OK"), "{out}");
    assert_eq!(code(&run(&["paper", "--builtin", "cross7"])), 1);
}

#[test]
fn builtin_emit_reloads() {
    let o = run(&["builtin", "--list"]);
    assert!(stdout(&o).lines().any(|l| l == "cross7"));
    let emitted = stdout(&run(&["builtin", "--emit", "cross3"]));
    let dir = std::env::temp_dir().join(format!("prodcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cross3.model");
    std::fs::write(&path, &emitted).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["eval", "--model", p, "--term", "cup * cap"]);
    assert_eq!(stdout(&o), "3\n");

    let phi = stdout(&run(&["phi", "--builtin", "quaternion"]));
    assert!(phi.starts_with("model phi(quaternion)\n"));
    let psi = stdout(&run(&["psi", "--model", p]));
    assert!(psi.contains("gen m : A A -> A"));
    let o = run(&["roundtrip", "--model", p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("IDENTITY"));
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(code(&run(&["builtin", "--emit", "cross5"])), 2);
    assert_eq!(code(&run(&["psi", "--builtin", "zerowedge2"])), 1);
}

#[test]
fn catalog_override_from_environment() {
    let dir = std::env::temp_dir().join(format!("prodcheck-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.toml");
    std::fs::write(&path, "[[entry]]\nid = \"t\"\ntags = [\"duality\"]\nsource = \"s\"\nlhs = \"cup * cap\"\nrhs = \"2 . id[]\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_prodcheck"))
        .args(["axioms", "--builtin", "complex", "--suite", "duality", "--output", "tsv"])
        .env("PRODCHECK_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "t\tpass\ts\nTOTAL 1/1\n");
    std::fs::write(&path, "not toml [").unwrap();
    let o = run(&["axioms", "--builtin", "complex", "--catalog", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
