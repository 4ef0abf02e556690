//! Built-in models: cross-product algebras in dimensions 0, 1, 3, 7, the
//! Cayley–Dickson algebras and their split forms, and zero-wedge controls.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{Model, Role};
use crate::tensor::RationalTensor;
use crate::term::ObjType;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("no cross product algebra in dimension {0}; choose 0, 1, 3 or 7")]
    UnsupportedDimension(usize),
    #[error("doubling parameters must be {levels} signs of ±1")]
    BadParams { levels: usize },
    #[error("unknown builtin `{0}`")]
    UnknownName(String),
}

/// Parameters for iterated doubling: `gammas[j]` is used at doubling step `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdParams {
    pub levels: usize,
    pub gammas: Vec<Rational>,
}

impl CdParams {
    pub fn new(gammas: Vec<Rational>) -> Result<Self, BuiltinError> {
        let levels = gammas.len();
        if gammas.iter().any(|g| g.abs() != Rational::one()) {
            return Err(BuiltinError::BadParams { levels });
        }
        Ok(CdParams { levels, gammas })
    }

    /// All signs −1: ℝ, ℂ, ℍ, 𝕆 for 0..=3 levels.
    pub fn classical(levels: usize) -> Self {
        CdParams { levels, gammas: vec![-Rational::one(); levels] }
    }

    pub fn dim(&self) -> usize {
        1 << self.levels
    }
}

const CLASSICAL: [&str; 4] = ["real", "complex", "quaternion", "octonion"];

pub fn conjugate(x: &[Rational]) -> Vec<Rational> {
    x.iter().enumerate().map(|(k, v)| if k == 0 { v.clone() } else { -v }).collect()
}

/// Doubling product `(a,b)(c,d) = (ac + γ d̄b, da + bc̄)`, coordinates of the
/// `a` half first.
pub fn cd_multiply(x: &[Rational], y: &[Rational], gammas: &[Rational]) -> Vec<Rational> {
    let n = x.len();
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = n / 2;
    let g = &gammas[n.trailing_zeros() as usize - 1];
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_multiply(a, c, gammas);
    let dbar_b = cd_multiply(&conjugate(d), b, gammas);
    let da = cd_multiply(d, a, gammas);
    let b_cbar = cd_multiply(b, &conjugate(c), gammas);
    let mut out: Vec<Rational> = ac.iter().zip(&dbar_b).map(|(p, q)| p + g * q).collect();
    out.extend(da.iter().zip(&b_cbar).map(|(p, q)| p + q));
    out
}

/// Signs of the diagonal norm form: coordinate `k` picks up `−γ_j` for each
/// doubling step `j` whose second half contains it.
pub fn norm_signs(p: &CdParams) -> Vec<Rational> {
    (0..p.dim())
        .map(|k| (0..p.levels).filter(|j| k >> j & 1 == 1).fold(Rational::one(), |acc, j| acc * -&p.gammas[j]))
        .collect()
}

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn basis(n: usize, k: usize) -> Vec<Rational> {
    (0..n).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect()
}

/// Diagonal form with the given signs, as both cup and cap tensors.
fn diagonal_pair(signs: &[Rational]) -> (RationalTensor, RationalTensor) {
    let n = signs.len();
    let mut cup = RationalTensor::zeros(vec![n, n], vec![]);
    let mut cap = RationalTensor::zeros(vec![], vec![n, n]);
    for (k, s) in signs.iter().enumerate() {
        cup.set(&[k, k], s.clone()).expect("in range");
        cap.set(&[k, k], Rational::one() / s).expect("in range");
    }
    (cup, cap)
}

fn self_dual(name: &str, label: &str, signs: &[Rational]) -> Model {
    let mut m = Model::new(name);
    m.add_object(label, signs.len()).expect("fresh model");
    let (cup, cap) = diagonal_pair(signs);
    let x = ObjType::power(label, 2);
    m.add_gen("cup", x.clone(), ObjType::unit(), cup).expect("shapes match");
    m.add_gen("cap", ObjType::unit(), x, cap).expect("shapes match");
    m.set_role(Role::Cup, "cup").expect("typed");
    m.set_role(Role::Cap, "cap").expect("typed");
    m
}

fn with_binary(mut m: Model, label: &str, name: &str, role: Role, t: RationalTensor) -> Model {
    m.add_gen(name, ObjType::power(label, 2), ObjType::power(label, 1), t).expect("shapes match");
    m.set_role(role, name).expect("typed");
    m
}

pub fn cd_name(p: &CdParams) -> String {
    let classical = p.gammas.iter().all(|g| g.is_negative());
    if classical && p.levels < CLASSICAL.len() {
        return CLASSICAL[p.levels].to_string();
    }
    let signs: String = p.gammas.iter().map(|g| if g.is_positive() { '+' } else { '-' }).collect();
    match CLASSICAL.get(p.levels) {
        Some(base) => format!("{base}:{signs}"),
        None => format!("cd{}:{signs}", p.levels),
    }
}

/// The doubled algebra on object `A`, with generators cup, cap, m, e.
pub fn cayley_dickson(p: &CdParams) -> Model {
    let n = p.dim();
    let mut mul = RationalTensor::zeros(vec![n, n], vec![n]);
    for i in 0..n {
        for j in 0..n {
            let prod = cd_multiply(&basis(n, i), &basis(n, j), &p.gammas);
            for (k, v) in prod.into_iter().enumerate() {
                if !v.is_zero() {
                    mul.set(&[i, j, k], v).expect("in range");
                }
            }
        }
    }
    let mut unit = RationalTensor::zeros(vec![], vec![n]);
    unit.set(&[0], Rational::one()).expect("in range");

    let m = self_dual(&cd_name(p), "A", &norm_signs(p));
    let mut m = with_binary(m, "A", "m", Role::M, mul);
    m.add_gen("e", ObjType::unit(), ObjType::new(["A"]), unit).expect("shapes match");
    m.set_role(Role::E, "e").expect("typed");
    m
}

/// Levi-Civita symbol with `ε(0,1,2) = 1`.
fn levi_civita() -> RationalTensor {
    let mut t = RationalTensor::zeros(vec![3, 3], vec![3]);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        t.set(&[i, j, k], r(1)).expect("in range");
        t.set(&[j, i, k], r(-1)).expect("in range");
    }
    t
}

/// Imaginary part of products of imaginary octonion units.
fn octonion_wedge() -> RationalTensor {
    let g = CdParams::classical(3).gammas;
    let mut t = RationalTensor::zeros(vec![7, 7], vec![7]);
    for i in 0..7 {
        for j in 0..7 {
            let prod = cd_multiply(&basis(8, i + 1), &basis(8, j + 1), &g);
            for k in 0..7 {
                if !prod[k + 1].is_zero() {
                    t.set(&[i, j, k], prod[k + 1].clone()).expect("in range");
                }
            }
        }
    }
    t
}

/// The vector product algebra on object `V` of dimension 0, 1, 3 or 7.
pub fn cross_vpa(n: usize) -> Result<Model, BuiltinError> {
    let wedge = match n {
        0 | 1 => RationalTensor::zeros(vec![n, n], vec![n]),
        3 => levi_civita(),
        7 => octonion_wedge(),
        _ => return Err(BuiltinError::UnsupportedDimension(n)),
    };
    let m = self_dual(&format!("cross{n}"), "V", &vec![r(1); n]);
    Ok(with_binary(m, "V", "wedge", Role::Wedge, wedge))
}

/// Standard dot product with an identically zero wedge.
pub fn zero_wedge_control(n: usize) -> Model {
    let m = self_dual(&format!("zerowedge{n}"), "V", &vec![r(1); n]);
    with_binary(m, "V", "wedge", Role::Wedge, RationalTensor::zeros(vec![n, n], vec![n]))
}

/// Names accepted by [`by_name`]; `zerowedge<N>` and `<algebra>:<signs>` are patterns.
pub fn names() -> Vec<String> {
    let mut v: Vec<String> = ["cross0", "cross1", "cross3", "cross7"].iter().map(|s| s.to_string()).collect();
    v.extend(CLASSICAL.iter().map(|s| s.to_string()));
    v.extend(["complex:+", "quaternion:+-", "octonion:+--", "zerowedge<N>"].iter().map(|s| s.to_string()));
    v
}

pub fn by_name(name: &str) -> Result<Model, BuiltinError> {
    let unknown = || BuiltinError::UnknownName(name.to_string());
    if let Some(n) = name.strip_prefix("cross") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        return cross_vpa(n);
    }
    if let Some(n) = name.strip_prefix("zerowedge") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        return Ok(zero_wedge_control(n));
    }
    let (base, signs) = match name.split_once(':') {
        Some((b, s)) => (b, Some(s)),
        None => (name, None),
    };
    let levels = CLASSICAL.iter().position(|c| *c == base).ok_or_else(unknown)?;
    let params = match signs {
        None => CdParams::classical(levels),
        Some(s) => {
            if s.chars().count() != levels {
                return Err(BuiltinError::BadParams { levels });
            }
            let gammas = s
                .chars()
                .map(|c| match c {
                    '+' => Ok(r(1)),
                    '-' => Ok(r(-1)),
                    _ => Err(BuiltinError::BadParams { levels }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            CdParams::new(gammas)?
        }
    };
    Ok(cayley_dickson(&params))
}
