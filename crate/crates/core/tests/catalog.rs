use std::collections::BTreeSet;

use num_bigint::BigInt;
use prodcheck::builtin::{by_name, cross_vpa, zero_wedge_control};
use prodcheck::verify::{
    bind, check_equation, dimension_report, format_report, run_suite, Binding, Catalog, OutputMode, Profile, Section,
    Status, Suite, VerifyError, COVERAGE,
};
use prodcheck::{apply, Rational, RationalTensor, Role};

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[test]
fn every_family_is_covered_and_every_source_is_known() {
    let cat = Catalog::builtin();
    let sources: BTreeSet<&str> = cat.entries().iter().map(|e| e.source.as_str()).collect();
    for family in COVERAGE {
        assert!(sources.contains(family), "no entry for `{family}`");
    }
    for s in &sources {
        assert!(COVERAGE.contains(s), "unlisted source `{s}`");
    }
}

#[test]
fn swapped_entries_agree_with_originals() {
    let cat = Catalog::builtin();
    for name in ["cross3", "quaternion", "zerowedge2"] {
        let m = by_name(name).unwrap();
        for e in cat.entries() {
            let v = check_equation(&m, e).unwrap();
            let w = check_equation(&m, &e.swapped()).unwrap();
            assert_eq!(v.status, w.status, "{name}: {}", e.id);
            if let (Some(a), Some(b)) = (&v.witness, &w.witness) {
                assert_eq!((&a.lhs, &a.rhs), (&b.rhs, &b.lhs));
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for name in ["cross3", "complex", "zerowedge2"] {
        let m = by_name(name).unwrap();
        let render = || {
            let secs: Vec<Section> = Suite::ALL
                .iter()
                .map(|&s| Section::new(s, m.name(), run_suite(&m, s, Catalog::builtin()).unwrap(), Profile::Builtin))
                .collect();
            format_report(&secs, OutputMode::Tsv)
        };
        assert_eq!(render(), render());
    }
}

#[test]
fn failures_carry_differing_witnesses() {
    let cat = Catalog::builtin();
    for (name, suite) in [("zerowedge2", Suite::Vpa), ("cross7", Suite::Assoc), ("zerowedge3", Suite::Assoc)] {
        let m = by_name(name).unwrap();
        let vs = run_suite(&m, suite, cat).unwrap();
        assert!(vs.iter().any(|v| v.status == Status::Fail), "{name}");
        for v in vs.iter().filter(|v| v.status == Status::Fail) {
            let w = v.witness.as_ref().expect("fail has witness");
            assert_ne!(w.lhs, w.rhs);
        }
    }
}

#[test]
fn double_wedge_fails_on_zero_wedge_at_e1_e2() {
    let m = zero_wedge_control(2);
    let e = Catalog::builtin().get("vpa.pointwise.double-wedge").unwrap();
    let v = check_equation(&m, e).unwrap();
    assert_eq!(v.status, Status::Fail);
    let w = v.witness.unwrap();
    assert_eq!(w.assignment, vec![("x".to_string(), "e1".to_string()), ("y".to_string(), "e2".to_string())]);
    assert_eq!((w.index, w.lhs, w.rhs), (vec![1], r(0), r(1)));
}

#[test]
fn associativity_fails_only_in_dimension_seven() {
    let cat = Catalog::builtin();
    for n in [0, 1, 3] {
        let vs = run_suite(&cross_vpa(n).unwrap(), Suite::Assoc, cat).unwrap();
        assert!(vs.iter().all(|v| v.status == Status::Pass), "cross{n}");
    }
    let v = check_equation(&cross_vpa(7).unwrap(), cat.get("assoc.pointwise.triple").unwrap()).unwrap();
    assert_eq!(v.status, Status::Fail);
    let v = check_equation(&cross_vpa(3).unwrap(), cat.get("assoc.pointwise.triple").unwrap()).unwrap();
    assert!(v.detail.ends_with("27 probe assignments"), "{}", v.detail);
}

#[test]
fn springer_coefficient_is_d_minus_four() {
    let text = Catalog::builtin().macro_text("springer").unwrap();
    for (n, k) in [(3, -1), (7, 3)] {
        let m = cross_vpa(n).unwrap();
        let b = bind(&m, Binding::Vpa).unwrap();
        let lhs = b.evaluate_text(text).unwrap();
        let wedge = m.role_tensor(Role::Wedge).unwrap();
        assert_eq!(lhs, RationalTensor::scale(&r(k), wedge), "cross{n}");
    }
    let m = cross_vpa(3).unwrap();
    let lhs = bind(&m, Binding::Vpa).unwrap().evaluate_text(text).unwrap();
    let e = |k: usize| (0..3).map(|j| r((j == k) as i64)).collect::<Vec<_>>();
    assert_eq!(apply(&lhs, &[e(0), e(1)]).unwrap(), vec![r(0), r(0), r(-1)]);
}

#[test]
fn missing_roles_skip() {
    let cat = Catalog::builtin();
    let vs = run_suite(&by_name("quaternion").unwrap(), Suite::Vpa, cat).unwrap();
    assert!(vs.iter().all(|v| v.status == Status::Skipped && v.detail.contains("wedge")));
    let vs = run_suite(&cross_vpa(3).unwrap(), Suite::Ca, cat).unwrap();
    assert!(vs.iter().all(|v| v.status == Status::Skipped));
}

#[test]
fn dimension_reports() {
    let cat = Catalog::builtin();
    let rep = dimension_report(&cross_vpa(3).unwrap(), cat).unwrap().into_result().unwrap();
    assert_eq!(rep.d, r(3));
    assert_eq!(rep.check("mickey").unwrap().computed, r(12));
    assert_eq!(rep.check("mounts").unwrap().computed, r(-6));
    assert_eq!(rep.check("theta").unwrap().computed, r(-6));
    assert!(rep.associative);

    let rep = dimension_report(&cross_vpa(1).unwrap(), cat).unwrap();
    assert!(rep.checks.iter().all(|c| c.computed == r(0)));

    let rep = dimension_report(&by_name("octonion").unwrap(), cat).unwrap();
    assert_eq!(rep.lines()[0], "d=8  (d-1)(d-2)(d-4)(d-8)=0 OK");

    let err = dimension_report(&zero_wedge_control(2), cat).unwrap().into_result().unwrap_err();
    assert!(matches!(err, VerifyError::AssertionFailure { .. }), "{err}");
}

#[test]
fn user_catalogs_load_and_reject_bad_entries() {
    let text = r#"
[macros]
loop = "cup * cap"

[[entry]]
id = "t.loop"
tags = ["duality", "closed-scalar"]
source = "custom"
lhs = "$loop"
rhs = "3 . id[]"
"#;
    let cat = Catalog::from_toml(text).unwrap();
    let vs = run_suite(&cross_vpa(3).unwrap(), Suite::Duality, &cat).unwrap();
    assert_eq!(vs.len(), 1);
    assert_eq!(vs[0].status, Status::Pass);
    let vs = run_suite(&cross_vpa(7).unwrap(), Suite::Duality, &cat).unwrap();
    assert_eq!(vs[0].status, Status::Fail);

    for bad in [
        text.replace("$loop", "$nope"),
        text.replace("3 . id[]", "cup"),
        text.replace("source", "paper_ref"),
        format!("{text}\n{}", &text[text.find("[[entry]]").unwrap()..]),
    ] {
        assert!(Catalog::from_toml(&bad).is_err(), "{bad}");
    }
}
