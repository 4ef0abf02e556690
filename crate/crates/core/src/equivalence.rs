//! Passing between composition algebras and vector product algebras.
//!
//! `phi` splits the idempotent `id − e∘p` of a composition algebra `A`,
//! giving `A ≅ I ⊕ V`, and restricts the form and the antisymmetrized
//! product to `V`. `psi` rebuilds `A = I ⊕ V` from a vector product algebra
//! by `(α,x)(β,y) = (αβ − x·y, αy + βx + x∧y)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::model::{Model, ModelError, Role};
use crate::tensor::{RationalTensor, TensorError};
use crate::term::ObjType;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("not a composition algebra: {0}")]
    NotIdempotent(String),
    #[error("vector product axioms fail: {}", .0.join(", "))]
    SuiteFailure(Vec<String>),
    #[error("isomorphism check `{what}` fails at {index:?}: {lhs} versus {rhs}")]
    IsoCheckFailure { what: String, index: Vec<usize>, lhs: Rational, rhs: Rational },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// `A ≅ I ⊕ V` realized by `e : I → A`, `p : A → I`, `i : V → A`, `q : A → V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumData {
    pub e: RationalTensor,
    pub p: RationalTensor,
    pub i: RationalTensor,
    pub q: RationalTensor,
    pub idem: RationalTensor,
}

impl DirectSumData {
    /// Dimension of the complement `V`.
    pub fn rank(&self) -> usize {
        self.i.dom()[0]
    }
}

fn compose(a: &RationalTensor, b: &RationalTensor) -> RationalTensor {
    RationalTensor::compose(a, b).expect("shapes fixed by construction")
}

fn tensor(a: &RationalTensor, b: &RationalTensor) -> RationalTensor {
    RationalTensor::tensor(a, b)
}

fn add(a: &RationalTensor, b: &RationalTensor) -> RationalTensor {
    RationalTensor::add(a, b).expect("shapes fixed by construction")
}

fn sub(a: &RationalTensor, b: &RationalTensor) -> RationalTensor {
    add(a, &RationalTensor::scale(&-Rational::one(), b))
}

fn expect_equal(what: &str, lhs: &RationalTensor, rhs: &RationalTensor) -> Result<(), EquivalenceError> {
    if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
        return Err(EquivalenceError::Tensor(TensorError::ShapeMismatch(format!("{what}: shapes differ"))));
    }
    match lhs.first_difference(rhs) {
        None => Ok(()),
        Some((index, l, r)) => Err(EquivalenceError::IsoCheckFailure { what: what.to_string(), index, lhs: l, rhs: r }),
    }
}

/// Matrix of a map `n → k` acting on column vectors.
fn to_matrix(f: &RationalTensor) -> Matrix {
    let (n, k) = (f.dom()[0], f.cod()[0]);
    (0..k).map(|row| (0..n).map(|col| f.get(&[col, row]).expect("in range").clone()).collect()).collect()
}

fn from_matrix(a: &Matrix, n: usize, k: usize) -> RationalTensor {
    let mut t = RationalTensor::zeros(vec![n], vec![k]);
    for (row, r) in a.iter().enumerate() {
        for (col, v) in r.iter().enumerate() {
            if !v.is_zero() {
                t.set(&[col, row], v.clone()).expect("in range");
            }
        }
    }
    t
}

pub fn split_unit(ca: &Model) -> Result<DirectSumData, EquivalenceError> {
    let cup = ca.role_tensor(Role::Cup)?;
    let e = ca.role_tensor(Role::E)?.clone();
    ca.role_tensor(Role::M)?;
    let n = e.cod()[0];
    let id = RationalTensor::identity(n);
    let p = compose(cup, &tensor(&id, &e));
    let pe = compose(&p, &e);
    if pe.as_scalar() != Some(&Rational::one()) {
        return Err(EquivalenceError::NotIdempotent(format!("cup(e, e) = {}, not 1", pe.entries()[0])));
    }
    let idem = sub(&id, &compose(&e, &p));
    if compose(&idem, &idem) != idem {
        return Err(EquivalenceError::NotIdempotent("id − e∘p is not idempotent".into()));
    }
    let (c, f) = linalg::rank_factorization(&to_matrix(&idem));
    let r = c.first().map_or(0, Vec::len);
    let i = from_matrix(&c, r, n);
    let q = from_matrix(&f, n, r);
    Ok(DirectSumData { e, p, i, q, idem })
}

/// `½(m − m∘swap)`.
pub fn wedge_of_ca(ca: &Model) -> Result<RationalTensor, EquivalenceError> {
    let m = ca.role_tensor(Role::M)?;
    let n = m.cod()[0];
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    Ok(RationalTensor::scale(&half, &sub(m, &compose(m, &RationalTensor::swap(n, n)))))
}

fn vpa_model(name: String, cup: RationalTensor, cap: RationalTensor, wedge: RationalTensor) -> Result<Model, ModelError> {
    let d = wedge.cod()[0];
    let mut m = Model::new(name);
    m.add_object("V", d)?;
    let vv = ObjType::power("V", 2);
    m.add_gen("cup", vv.clone(), ObjType::unit(), cup)?;
    m.add_gen("cap", ObjType::unit(), vv.clone(), cap)?;
    m.add_gen("wedge", vv, ObjType::power("V", 1), wedge)?;
    m.set_role(Role::Cup, "cup")?;
    m.set_role(Role::Cap, "cap")?;
    m.set_role(Role::Wedge, "wedge")?;
    Ok(m)
}

/// The vector product algebra on the complement of the unit.
pub fn phi(ca: &Model) -> Result<Model, EquivalenceError> {
    let ds = split_unit(ca)?;
    let wedge = wedge_of_ca(ca)?;
    let cup = compose(ca.role_tensor(Role::Cup)?, &tensor(&ds.i, &ds.i));
    let cap = compose(&tensor(&ds.q, &ds.q), ca.role_tensor(Role::Cap)?);
    let w = compose(&ds.q, &compose(&wedge, &tensor(&ds.i, &ds.i)));
    Ok(vpa_model(format!("phi({})", ca.name()), cup, cap, w)?)
}

/// `ca` extended by object `V` and generators `p`, `q`, `i` and the derived
/// `wedge`, all with roles.
pub fn augment(ca: &Model) -> Result<Model, EquivalenceError> {
    let ds = split_unit(ca)?;
    let a = ca.self_dual_object()?.to_string();
    let mut m = ca.clone();
    let v = if m.dim("V").is_none() { "V".to_string() } else { format!("{a}_im") };
    m.add_object(v.clone(), ds.rank())?;
    let (ao, vo) = (ObjType::new([a.as_str()]), ObjType::new([v.as_str()]));
    m.add_gen("p", ao.clone(), ObjType::unit(), ds.p)?;
    m.add_gen("q", ao.clone(), vo.clone(), ds.q)?;
    m.add_gen("i", vo, ao.clone(), ds.i)?;
    m.set_role(Role::P, "p")?;
    m.set_role(Role::Q, "q")?;
    m.set_role(Role::I, "i")?;
    if m.role(Role::Wedge).is_none() {
        m.add_gen("wedge", ObjType::power(&a, 2), ao, wedge_of_ca(ca)?)?;
        m.set_role(Role::Wedge, "wedge")?;
    }
    Ok(m)
}

/// Coordinates `(unit, V…)` for `A = I ⊕ V`.
struct Summands {
    e: RationalTensor,
    p: RationalTensor,
    i: RationalTensor,
    q: RationalTensor,
}

fn summands(d: usize) -> Summands {
    let n = d + 1;
    let mut e = RationalTensor::zeros(vec![], vec![n]);
    let mut p = RationalTensor::zeros(vec![n], vec![]);
    e.set(&[0], Rational::one()).expect("in range");
    p.set(&[0], Rational::one()).expect("in range");
    let mut i = RationalTensor::zeros(vec![d], vec![n]);
    let mut q = RationalTensor::zeros(vec![n], vec![d]);
    for k in 0..d {
        i.set(&[k, k + 1], Rational::one()).expect("in range");
        q.set(&[k + 1, k], Rational::one()).expect("in range");
    }
    Summands { e, p, i, q }
}

/// The composition algebra `I ⊕ V`.
pub fn psi(vpa: &Model) -> Result<Model, EquivalenceError> {
    let failures = crate::verify::vpa_axiom_failures(vpa);
    if !failures.is_empty() {
        return Err(EquivalenceError::SuiteFailure(failures));
    }
    let cup_v = vpa.role_tensor(Role::Cup)?;
    let cap_v = vpa.role_tensor(Role::Cap)?;
    let wedge_v = vpa.role_tensor(Role::Wedge)?;
    let d = wedge_v.cod()[0];
    let Summands { e, p, i, q } = summands(d);
    let qq = tensor(&q, &q);

    let cup = add(&tensor(&p, &p), &compose(cup_v, &qq));
    let cap = add(&tensor(&e, &e), &compose(&tensor(&i, &i), cap_v));
    let real = sub(&compose(&e, &tensor(&p, &p)), &compose(&e, &compose(cup_v, &qq)));
    let imag = add(
        &add(&compose(&i, &tensor(&p, &q)), &compose(&i, &tensor(&q, &p))),
        &compose(&i, &compose(wedge_v, &qq)),
    );
    let mul = add(&real, &imag);

    let mut m = Model::new(format!("psi({})", vpa.name()));
    m.add_object("A", d + 1)?;
    let aa = ObjType::power("A", 2);
    let a = ObjType::power("A", 1);
    m.add_gen("cup", aa.clone(), ObjType::unit(), cup)?;
    m.add_gen("cap", ObjType::unit(), aa.clone(), cap)?;
    m.add_gen("m", aa, a.clone(), mul)?;
    m.add_gen("e", ObjType::unit(), a, e)?;
    m.set_role(Role::Cup, "cup")?;
    m.set_role(Role::Cap, "cap")?;
    m.set_role(Role::M, "m")?;
    m.set_role(Role::E, "e")?;
    Ok(m)
}

/// Checks `h : V → W` preserves the form and the vector product.
pub fn check_vpa_morphism(h: &RationalTensor, src: &Model, dst: &Model) -> Result<(), EquivalenceError> {
    let hh = tensor(h, h);
    expect_equal("cup", &compose(dst.role_tensor(Role::Cup)?, &hh), src.role_tensor(Role::Cup)?)?;
    expect_equal(
        "wedge",
        &compose(h, src.role_tensor(Role::Wedge)?),
        &compose(dst.role_tensor(Role::Wedge)?, &hh),
    )
}

/// Checks `g : A → B` preserves the form, the multiplication and the unit.
pub fn check_ca_morphism(g: &RationalTensor, src: &Model, dst: &Model) -> Result<(), EquivalenceError> {
    let gg = tensor(g, g);
    expect_equal("cup", &compose(dst.role_tensor(Role::Cup)?, &gg), src.role_tensor(Role::Cup)?)?;
    expect_equal("m", &compose(dst.role_tensor(Role::M)?, &gg), &compose(g, src.role_tensor(Role::M)?))?;
    expect_equal("e", &compose(g, src.role_tensor(Role::E)?), dst.role_tensor(Role::E)?)
}

fn check_inverse(h: &RationalTensor, hinv: &RationalTensor) -> Result<(), EquivalenceError> {
    let n = h.dom()[0];
    let k = h.cod()[0];
    if n != k {
        return Err(EquivalenceError::Tensor(TensorError::ShapeMismatch(format!("{n} → {k} cannot be invertible"))));
    }
    expect_equal("inverse", &compose(hinv, h), &RationalTensor::identity(n))?;
    expect_equal("inverse", &compose(h, hinv), &RationalTensor::identity(n))
}

/// An isomorphism into a doubly transformed model, already checked.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub matrix: RationalTensor,
    pub target: Model,
}

impl RoundTrip {
    pub fn is_identity(&self) -> bool {
        self.matrix.dom() == self.matrix.cod() && self.matrix == RationalTensor::identity(self.matrix.dom()[0])
    }
}

/// The isomorphism `V → Φ(Ψ(V))`, checked to be invertible and to transport
/// cup, cap and wedge.
pub fn round_trip(vpa: &Model) -> Result<RoundTrip, EquivalenceError> {
    let a = psi(vpa)?;
    let target = phi(&a)?;
    let ds = split_unit(&a)?;
    let d = vpa.role_tensor(Role::Wedge)?.cod()[0];
    let s = summands(d);
    let h = compose(&ds.q, &s.i);
    let hinv = compose(&s.q, &ds.i);
    check_inverse(&h, &hinv)?;
    check_vpa_morphism(&h, vpa, &target)?;
    expect_equal(
        "cap",
        &compose(&tensor(&h, &h), vpa.role_tensor(Role::Cap)?),
        target.role_tensor(Role::Cap)?,
    )?;
    Ok(RoundTrip { matrix: h, target })
}

/// The isomorphism `A → Ψ(Φ(A))`, checked to be invertible and a morphism
/// of composition algebras.
pub fn round_trip_ca(ca: &Model) -> Result<RoundTrip, EquivalenceError> {
    let ds = split_unit(ca)?;
    let target = psi(&phi(ca)?)?;
    let s = summands(ds.rank());
    let g = add(&compose(&s.e, &ds.p), &compose(&s.i, &ds.q));
    let ginv = add(&compose(&ds.e, &s.p), &compose(&ds.i, &s.q));
    check_inverse(&g, &ginv)?;
    check_ca_morphism(&g, ca, &target)?;
    Ok(RoundTrip { matrix: g, target })
}
