//! Random well-typed terms and random models shared by the test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use prodcheck::{evaluate, parse, GenDecl, Model, ObjType, Rational, RationalTensor, Signature, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sig() -> Signature {
    let mut s = Signature::new();
    s.add_object("V");
    s.add_object("W");
    let t = |xs: &[&str]| ObjType::new(xs.iter().copied());
    for (name, dom, cod) in [
        ("wedge", t(&["V", "V"]), t(&["V"])),
        ("cup", t(&["V", "V"]), t(&[])),
        ("cap", t(&[]), t(&["V", "V"])),
        ("f", t(&["V"]), t(&["W"])),
        ("g", t(&["W"]), t(&["V"])),
        ("s", t(&[]), t(&["W"])),
        ("k", t(&["W", "V"]), t(&["V", "W"])),
    ] {
        s.add_gen(GenDecl::new(name, dom, cod)).unwrap();
    }
    s
}

pub fn random_type(rng: &mut ChaCha8Rng, max: usize) -> ObjType {
    let n = rng.gen_range(0..=max);
    ObjType::new((0..n).map(|_| if rng.gen_bool(0.6) { "V" } else { "W" }))
}

pub fn slice(o: &ObjType, from: usize, to: usize) -> ObjType {
    ObjType(o.0[from..to].to_vec())
}

/// A random term of type `dom -> cod`, built only from well-typed pieces.
pub fn gen_term(rng: &mut ChaCha8Rng, sig: &Signature, dom: &ObjType, cod: &ObjType, depth: u32) -> Term {
    let leaf = |rng: &mut ChaCha8Rng| {
        let matching: Vec<&GenDecl> = sig.gens().filter(|g| &g.dom == dom && &g.cod == cod).collect();
        if !matching.is_empty() && rng.gen_bool(0.7) {
            return Term::gen(matching[rng.gen_range(0..matching.len())].name.clone());
        }
        let n = dom.len();
        if dom == cod && rng.gen_bool(0.5) {
            return Term::id(dom.clone());
        }
        if n == cod.len() && n >= 2 {
            let k = rng.gen_range(1..n);
            if slice(dom, k, n).concat(&slice(dom, 0, k)) == *cod {
                let (x, y) = (slice(dom, 0, k), slice(dom, k, n));
                return if rng.gen_bool(0.5) { Term::Braid(x, y) } else { Term::BraidInv(y, x) };
            }
        }
        Term::Zero(dom.clone(), cod.clone())
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 => leaf(rng),
        1 => {
            let mid = random_type(rng, 2);
            let before = gen_term(rng, sig, dom, &mid, depth - 1);
            let after = gen_term(rng, sig, &mid, cod, depth - 1);
            Term::compose(after, before)
        }
        2 => {
            let (i, j) = (rng.gen_range(0..=dom.len()), rng.gen_range(0..=cod.len()));
            let l = gen_term(rng, sig, &slice(dom, 0, i), &slice(cod, 0, j), depth - 1);
            let r = gen_term(rng, sig, &slice(dom, i, dom.len()), &slice(cod, j, cod.len()), depth - 1);
            Term::tensor(l, r)
        }
        3 => Term::sum(gen_term(rng, sig, dom, cod, depth - 1), gen_term(rng, sig, dom, cod, depth - 1)),
        4 => {
            let c = Rational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=5)));
            Term::scale(c, gen_term(rng, sig, dom, cod, depth - 1))
        }
        _ => gen_term(rng, sig, dom, cod, depth - 1),
    }
}

pub const DIMS: [(&str, usize); 3] = [("U", 1), ("V", 2), ("W", 3)];

pub fn dim(label: &str) -> usize {
    DIMS.iter().find(|(l, _)| *l == label).unwrap().1
}

pub fn ty(text: &str) -> ObjType {
    ObjType::new(text.split_whitespace())
}

pub fn random_tensor(rng: &mut ChaCha8Rng, dom: &str, cod: &str) -> RationalTensor {
    let d: Vec<usize> = dom.split_whitespace().map(dim).collect();
    let c: Vec<usize> = cod.split_whitespace().map(dim).collect();
    let n: usize = d.iter().chain(&c).product();
    let entries = (0..n)
        .map(|_| Rational::new(BigInt::from(rng.gen_range(-4..=4)), BigInt::from(rng.gen_range(1..=3))))
        .collect();
    RationalTensor::new(d, c, entries).unwrap()
}

/// Random generators: a, b : V -> W, c : W -> V V, h : V V -> W, k : V -> U.
pub fn model(seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Model::new("random");
    for (l, n) in DIMS {
        m.add_object(l, n).unwrap();
    }
    for (name, dom, cod) in [("a", "V", "W"), ("b", "V", "W"), ("c", "W", "V V"), ("h", "V V", "W"), ("k", "V", "U"), ("j", "W", "W")] {
        let t = random_tensor(&mut rng, dom, cod);
        m.add_gen(name, ty(dom), ty(cod), t).unwrap();
    }
    m
}

pub fn ev(m: &Model, text: &str) -> RationalTensor {
    evaluate(&parse(text, &m.signature()).unwrap(), m).unwrap()
}

pub fn gen(m: &Model, name: &str) -> RationalTensor {
    m.gen(name).unwrap().tensor.clone()
}

/// Swap `X⊗Y → Y⊗X` built entry by entry.
pub fn swap_oracle(x: usize, y: usize) -> RationalTensor {
    let mut t = RationalTensor::zeros(vec![x, y], vec![y, x]);
    for i in 0..x {
        for j in 0..y {
            t.set(&[i, j, j, i], Rational::from_integer(1.into())).unwrap();
        }
    }
    t
}

