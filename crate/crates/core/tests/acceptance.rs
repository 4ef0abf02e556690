//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;

use num_bigint::BigInt;
use prodcheck::builtin::{by_name, cross_vpa, names, zero_wedge_control};
use prodcheck::equivalence::{phi, psi, round_trip, split_unit};
use prodcheck::verify::{bind, check_equation, dimension_report, run_suite, Binding, Catalog, Status, Suite};
use prodcheck::{apply, emit_model, load_model, parse, pretty, typecheck, Model, Rational, RationalTensor, Role};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const VPA: [usize; 4] = [0, 1, 3, 7];
const CA: [&str; 4] = ["real", "complex", "quaternion", "octonion"];

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(m: &Model, suites: &[Suite]) -> Result<usize, String> {
    let mut n = 0;
    for &s in suites {
        for v in run_suite(m, s, Catalog::builtin()).map_err(|e| e.to_string())? {
            ensure(v.status == Status::Pass, || format!("{}: {} is {} ({})", m.name(), v.id, v.status.name(), v.detail))?;
            n += 1;
        }
    }
    Ok(n)
}

fn axiom_suites() -> Outcome {
    let mut n = 0;
    for d in VPA {
        n += all_pass(&cross_vpa(d).unwrap(), &[Suite::Duality, Suite::Vpa])?;
    }
    for name in CA {
        n += all_pass(&by_name(name).unwrap(), &[Suite::Duality, Suite::Ca])?;
    }
    Ok(format!("{n} verdicts pass on cross0/1/3/7 and the four classical algebras"))
}

fn poly(d: &Rational, roots: &[i64]) -> Rational {
    roots.iter().fold(r(1), |acc, k| acc * (d - r(*k)))
}

fn dimension_polynomials() -> Outcome {
    let mut seen = Vec::new();
    for n in VPA {
        let rep = dimension_report(&cross_vpa(n).unwrap(), Catalog::builtin()).map_err(|e| e.to_string())?;
        ensure(rep.d == r(n as i64), || format!("cross{n}: d = {}", rep.d))?;
        ensure(poly(&rep.d, &[0, 1, 3, 7]) == r(0), || format!("cross{n}: quartic nonzero"))?;
        seen.push(rep.d.to_string());
    }
    for (name, n) in CA.iter().zip([1, 2, 4, 8]) {
        let rep = dimension_report(&by_name(name).unwrap(), Catalog::builtin()).map_err(|e| e.to_string())?;
        ensure(rep.d == r(n), || format!("{name}: d = {}", rep.d))?;
        ensure(poly(&rep.d, &[1, 2, 4, 8]) == r(0), || format!("{name}: quartic nonzero"))?;
        ensure(rep.passed(), || format!("{name}: {:?}", rep.lines()))?;
        seen.push(rep.d.to_string());
    }
    Ok(format!("d = {}", seen.join(", ")))
}

fn closed_traces() -> Outcome {
    let mut out = Vec::new();
    for n in VPA {
        let m = cross_vpa(n).unwrap();
        let rep = dimension_report(&m, Catalog::builtin()).map_err(|e| e.to_string())?;
        let d = r(n as i64);
        let one = r(1);
        let mickey = rep.check("mickey").unwrap().computed.clone();
        let mounts = rep.check("mounts").unwrap().computed.clone();
        let square = &d * (&d - &one) * (&d - &one);
        ensure(mickey == square, || format!("cross{n}: mickey {mickey} vs d(d-1)^2 {square}"))?;
        if n != 7 {
            let twice = r(2) * &d * (&d - &one);
            ensure(mickey == twice, || format!("cross{n}: mickey {mickey} vs 2d(d-1) {twice}"))?;
        }
        let d4 = &d - r(4);
        let factored = &d4 * &d4 * (&one - &d) * &d;
        let expanded = &d4 * (&one - &d) * &d - &d * (&one - &d) * (&one - &d);
        ensure(mounts == factored && mounts == expanded, || format!("cross{n}: mounts {mounts}"))?;
        out.push(format!("d={n} mickey={mickey} mounts={mounts}"));
    }
    let rep3 = dimension_report(&cross_vpa(3).unwrap(), Catalog::builtin()).unwrap();
    let rep7 = dimension_report(&cross_vpa(7).unwrap(), Catalog::builtin()).unwrap();
    ensure(rep3.check("mickey").unwrap().computed == r(12), || "mickey at d=3 is not 12".into())?;
    ensure(rep3.check("mounts").unwrap().computed == r(-6), || "mounts at d=3 is not -6".into())?;
    ensure(rep7.check("mounts").unwrap().computed == r(-378), || "mounts at d=7 is not -378".into())?;
    Ok(out.join("; "))
}

fn springer() -> Outcome {
    let text = Catalog::builtin().macro_text("springer").unwrap();
    for (n, k) in [(3, -1), (7, 3)] {
        let m = cross_vpa(n).unwrap();
        let lhs = bind(&m, Binding::Vpa).unwrap().evaluate_text(text).map_err(|e| e.to_string())?;
        let expected = RationalTensor::scale(&r(k), m.role_tensor(Role::Wedge).unwrap());
        ensure(lhs == expected, || format!("cross{n}: double-wedge loop is not {k} times the wedge"))?;
    }
    Ok("double-wedge loop = -1.wedge on cross3, 3.wedge on cross7".into())
}

fn evaluations() -> Outcome {
    let mut thetas = Vec::new();
    for n in [3usize, 7] {
        let m = cross_vpa(n).unwrap();
        let b = bind(&m, Binding::Vpa).unwrap();
        let eval = |t: &str| b.evaluate_text(t).map_err(|e| e.to_string());
        let lollipop = eval("wedge * cap")?;
        ensure(lollipop.is_zero() && lollipop.cod() == [n], || format!("cross{n}: wedge*cap nonzero"))?;
        let looped = eval("wedge * (id[V] @ wedge) * (cap @ id[V])")?;
        let expected = RationalTensor::scale(&r(1 - n as i64), &RationalTensor::identity(n));
        ensure(looped == expected, || format!("cross{n}: loop is not (1-d).id"))?;
        let theta = eval(Catalog::builtin().macro_text("theta").unwrap())?;
        let want = r((1 - n as i64) * n as i64);
        ensure(theta.as_scalar() == Some(&want), || format!("cross{n}: theta {:?}", theta.as_scalar()))?;
        thetas.push(format!("theta(d={n})={want}"));
    }
    ensure(thetas == ["theta(d=3)=-6", "theta(d=7)=-42"], || format!("{thetas:?}"))?;
    Ok(format!("lollipop 0, loop (1-d).id, {}", thetas.join(", ")))
}

/// First basis pair where `(x.x)y - (x.y)x` differs from the zero wedge's
/// double wedge, which is identically zero.
fn brute_force_double_wedge(n: usize) -> Option<(usize, usize, Vec<i64>)> {
    for x in 0..n {
        for y in 0..n {
            let rhs: Vec<i64> = (0..n).map(|k| (k == y) as i64 - ((x == y) as i64) * ((k == x) as i64)).collect();
            if rhs.iter().any(|&c| c != 0) {
                return Some((x, y, rhs));
            }
        }
    }
    None
}

fn negative_controls() -> Outcome {
    let cat = Catalog::builtin();
    let v = check_equation(&zero_wedge_control(2), cat.get("vpa.pointwise.double-wedge").unwrap()).map_err(|e| e.to_string())?;
    let w = v.witness.as_ref().ok_or("zerowedge2 double-wedge has no witness")?;
    let (x, y, rhs) = brute_force_double_wedge(2).unwrap();
    let names: Vec<&str> = w.assignment.iter().map(|(_, d)| d.as_str()).collect();
    let want = [format!("e{}", x + 1), format!("e{}", y + 1)];
    ensure(v.status == Status::Fail && names == want, || format!("zerowedge2 witness {names:?}, oracle {want:?}"))?;
    let k = w.index[0];
    ensure(w.lhs == r(0) && w.rhs == r(rhs[k]) && rhs == [0, 1], || format!("zerowedge2 witness values {} vs {}", w.lhs, w.rhs))?;

    let cross7 = cross_vpa(7).unwrap();
    let v = check_equation(&cross7, cat.get("assoc.pointwise.triple").unwrap()).map_err(|e| e.to_string())?;
    let w = v.witness.as_ref().ok_or("cross7 associativity has no witness")?;
    let wedge = cross7.role_tensor(Role::Wedge).unwrap();
    let e = |k: usize| (0..7).map(|j| r((j == k) as i64)).collect::<Vec<_>>();
    let mut oracle = None;
    'search: for a in 0..7 {
        for b in 0..7 {
            for c in 0..7 {
                let lhs = apply(wedge, &[apply(wedge, &[e(a), e(b)]).unwrap(), e(c)]).unwrap();
                let rhs: Vec<Rational> = (0..7).map(|k| r((a == c && k == b) as i64 - (b == c && k == a) as i64)).collect();
                if lhs != rhs {
                    oracle = Some([a, b, c]);
                    break 'search;
                }
            }
        }
    }
    let [a, b, c] = oracle.ok_or("brute force found cross7 associative")?;
    let got: Vec<&str> = w.assignment.iter().map(|(_, d)| d.as_str()).collect();
    let want = [format!("e{}", a + 1), format!("e{}", b + 1), format!("e{}", c + 1)];
    ensure(v.status == Status::Fail && got == want, || format!("cross7 witness {got:?}, oracle {want:?}"))?;
    ensure(w.lhs != w.rhs, || "witness sides agree".into())?;
    Ok(format!("zerowedge2 at (e1,e2): 0 vs e2; cross7 at ({}): {} vs {}", want.join(","), w.lhs, w.rhs))
}

fn equivalence() -> Outcome {
    let v = phi(&by_name("quaternion").unwrap()).map_err(|e| e.to_string())?;
    let c3 = cross_vpa(3).unwrap();
    for role in [Role::Cup, Role::Cap, Role::Wedge] {
        ensure(v.role_tensor(role).unwrap() == c3.role_tensor(role).unwrap(), || format!("phi(quaternion) {role} differs"))?;
    }
    let h = psi(&c3).map_err(|e| e.to_string())?;
    let q = by_name("quaternion").unwrap();
    for role in [Role::Cup, Role::Cap, Role::M, Role::E] {
        ensure(h.role_tensor(role).unwrap() == q.role_tensor(role).unwrap(), || format!("psi(cross3) {role} differs"))?;
    }
    let unit = |k: usize| (0..4).map(|j| r((j == k) as i64)).collect::<Vec<_>>();
    let ij = apply(h.role_tensor(Role::M).unwrap(), &[unit(1), unit(2)]).unwrap();
    ensure(ij == unit(3), || format!("ij = {ij:?}"))?;
    for n in VPA {
        let m = cross_vpa(n).unwrap();
        let rt = round_trip(&m).map_err(|e| format!("cross{n}: {e}"))?;
        ensure(rt.is_identity(), || format!("cross{n}: round trip is not the identity"))?;
        for role in [Role::Cup, Role::Wedge] {
            ensure(rt.target.role_tensor(role).unwrap() == m.role_tensor(role).unwrap(), || format!("cross{n}: {role} not transported"))?;
        }
    }
    Ok("phi(quaternion) = cross3, psi(cross3) = quaternion with ij = k, round trips are identities".into())
}

fn direct_sums() -> Outcome {
    let c = |a: &RationalTensor, b: &RationalTensor| RationalTensor::compose(a, b).unwrap();
    let split = ["complex:+", "quaternion:+-", "quaternion:++", "octonion:+--", "octonion:+++"];
    for name in CA.iter().chain(split.iter()) {
        let a = by_name(name).unwrap();
        let n = a.dim("A").unwrap();
        let ds = split_unit(&a).map_err(|e| format!("{name}: {e}"))?;
        ensure(c(&ds.p, &ds.e) == RationalTensor::scalar(r(1)), || format!("{name}: p.e"))?;
        ensure(c(&ds.q, &ds.i) == RationalTensor::identity(n - 1), || format!("{name}: q.i"))?;
        ensure(c(&ds.p, &ds.i).is_zero(), || format!("{name}: p.i"))?;
        ensure(c(&ds.q, &ds.e).is_zero(), || format!("{name}: q.e"))?;
        let sum = RationalTensor::add(&c(&ds.e, &ds.p), &c(&ds.i, &ds.q)).unwrap();
        ensure(sum == RationalTensor::identity(n), || format!("{name}: e.p + i.q"))?;
    }
    Ok(format!("five laws on {} algebras", CA.len() + split.len()))
}

fn infrastructure() -> Outcome {
    let sig = common::sig();
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = common::random_type(&mut rng, 3);
        let cod = common::random_type(&mut rng, 3);
        let t = common::gen_term(&mut rng, &sig, &dom, &cod, 4);
        let text = pretty(&t);
        let back = parse(&text, &sig).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == t && typecheck(&back, &sig).unwrap() == (dom, cod), || format!("seed {seed}: {text}"))?;
    }
    let mut models = 0;
    for name in names() {
        let m = by_name(&name.replace("<N>", "2")).unwrap();
        let back = load_model(&emit_model(&m)).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == m, || format!("{name}: reload differs"))?;
        models += 1;
    }
    for seed in 0..32u64 {
        let m = common::model(seed);
        let ev = |t: &str| common::ev(&m, t);
        ensure(ev("(h * c) @ (j * a)") == ev("(h @ j) * (c @ a)"), || format!("seed {seed}: interchange"))?;
        ensure(ev("braid[V,W]") == common::swap_oracle(2, 3), || format!("seed {seed}: swap"))?;
        ensure(ev("braidinv[V,W] * braid[V,W]") == RationalTensor::identity_on(&[2, 3]), || format!("seed {seed}: inverse"))?;
        ensure(
            ev("(braid[W,U] @ id[V]) * (id[W] @ braid[V,U]) * (braid[V,W] @ id[U])")
                == ev("(id[U] @ braid[V,W]) * (braid[V,U] @ id[W]) * (id[V] @ braid[W,U])"),
            || format!("seed {seed}: Yang-Baxter"),
        )?;
        ensure(ev("braid[V;W,U]") == ev("(id[W] @ braid[V,U]) * (braid[V,W] @ id[U])"), || format!("seed {seed}: hexagon"))?;
        ensure(ev("braid[V,W;U]") == ev("(braid[V,U] @ id[W]) * (id[V] @ braid[W,U])"), || format!("seed {seed}: hexagon"))?;
        ensure(ev("braid[W,U] * (a @ k)") == ev("(k @ a) * braid[V,V]"), || format!("seed {seed}: naturality"))?;
    }
    Ok(format!("1000 terms round-trip, {models} model files reload, 32 random models obey braid and functor laws"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom suites", axiom_suites),
        ("dimension polynomials", dimension_polynomials),
        ("closed-diagram traces", closed_traces),
        ("Springer identity", springer),
        ("loop evaluations", evaluations),
        ("negative controls", negative_controls),
        ("equivalence", equivalence),
        ("direct-sum laws", direct_sums),
        ("infrastructure properties", infrastructure),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
