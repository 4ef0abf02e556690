//! Concrete models: dimensions for object labels, tensors for generators,
//! and designated structure roles. Includes the line-oriented model file
//! format.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::dsl::parse;
use crate::eval::{evaluate, evaluate_scalar, EvalError};
use crate::tensor::RationalTensor;
use crate::term::{GenDecl, ObjType, Signature};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Cup,
    Cap,
    Wedge,
    M,
    E,
    P,
    Q,
    I,
}

impl Role {
    pub const ALL: [Role; 8] = [Role::Cup, Role::Cap, Role::Wedge, Role::M, Role::E, Role::P, Role::Q, Role::I];

    pub fn name(self) -> &'static str {
        match self {
            Role::Cup => "cup",
            Role::Cap => "cap",
            Role::Wedge => "wedge",
            Role::M => "m",
            Role::E => "e",
            Role::P => "p",
            Role::Q => "q",
            Role::I => "i",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Role::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| format!("unknown role `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("generator `{0}`: tensor shape does not match its declared type")]
    ShapeMismatch(String),
    #[error("model designates no {0}")]
    MissingRole(Role),
    #[error("unknown object label `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("generator `{gen}` has the wrong type to play {role}")]
    RoleType { role: Role, gen: String },
    #[error("snake equation fails for cup/cap on `{0}`")]
    Snake(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub dom: ObjType,
    pub cod: ObjType,
    pub tensor: RationalTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    name: String,
    objects: BTreeMap<String, usize>,
    gens: BTreeMap<String, Generator>,
    roles: BTreeMap<Role, String>,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model { name: name.into(), objects: BTreeMap::new(), gens: BTreeMap::new(), roles: BTreeMap::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_object(&mut self, label: impl Into<String>, dim: usize) -> Result<(), ModelError> {
        let label = label.into();
        if self.objects.contains_key(&label) {
            return Err(ModelError::Duplicate(label));
        }
        self.objects.insert(label, dim);
        Ok(())
    }

    pub fn extents(&self, o: &ObjType) -> Result<Vec<usize>, ModelError> {
        o.labels().iter().map(|l| self.dim(l).ok_or_else(|| ModelError::UnknownObject(l.clone()))).collect()
    }

    pub fn add_gen(&mut self, name: impl Into<String>, dom: ObjType, cod: ObjType, tensor: RationalTensor) -> Result<(), ModelError> {
        let name = name.into();
        if self.gens.contains_key(&name) {
            return Err(ModelError::Duplicate(name));
        }
        if tensor.dom() != self.extents(&dom)? || tensor.cod() != self.extents(&cod)? {
            return Err(ModelError::ShapeMismatch(name));
        }
        self.gens.insert(name, Generator { dom, cod, tensor });
        Ok(())
    }

    /// Replaces the tensor of an existing generator.
    pub fn replace_gen(&mut self, name: &str, tensor: RationalTensor) -> Result<(), ModelError> {
        let g = self.gens.get(name).ok_or_else(|| ModelError::UnknownGenerator(name.to_string()))?;
        if tensor.dom() != self.extents(&g.dom)? || tensor.cod() != self.extents(&g.cod)? {
            return Err(ModelError::ShapeMismatch(name.to_string()));
        }
        self.gens.get_mut(name).expect("present").tensor = tensor;
        Ok(())
    }

    pub fn set_role(&mut self, role: Role, gen: &str) -> Result<(), ModelError> {
        let g = self.gens.get(gen).ok_or_else(|| ModelError::UnknownGenerator(gen.to_string()))?;
        let homogeneous = |o: &ObjType, n: usize| o.len() == n && o.labels().windows(2).all(|w| w[0] == w[1]);
        let ok = match role {
            Role::Cup => homogeneous(&g.dom, 2) && g.cod.is_unit(),
            Role::Cap => g.dom.is_unit() && homogeneous(&g.cod, 2),
            Role::Wedge | Role::M => homogeneous(&g.dom.concat(&g.cod), 3),
            Role::E => g.dom.is_unit() && g.cod.len() == 1,
            Role::P => g.dom.len() == 1 && g.cod.is_unit(),
            Role::Q | Role::I => g.dom.len() == 1 && g.cod.len() == 1,
        };
        if !ok {
            return Err(ModelError::RoleType { role, gen: gen.to_string() });
        }
        self.roles.insert(role, gen.to_string());
        Ok(())
    }

    pub fn dim(&self, label: &str) -> Option<usize> {
        self.objects.get(label).copied()
    }

    pub fn objects(&self) -> &BTreeMap<String, usize> {
        &self.objects
    }

    pub fn gen(&self, name: &str) -> Option<&Generator> {
        self.gens.get(name)
    }

    pub fn gens(&self) -> &BTreeMap<String, Generator> {
        &self.gens
    }

    pub fn roles(&self) -> &BTreeMap<Role, String> {
        &self.roles
    }

    pub fn role(&self, role: Role) -> Option<&str> {
        self.roles.get(&role).map(String::as_str)
    }

    pub fn role_gen(&self, role: Role) -> Result<&Generator, ModelError> {
        let name = self.role(role).ok_or(ModelError::MissingRole(role))?;
        Ok(&self.gens[name])
    }

    /// Tensor of the generator playing `role`.
    pub fn role_tensor(&self, role: Role) -> Result<&RationalTensor, ModelError> {
        Ok(&self.role_gen(role)?.tensor)
    }

    /// The object carrying the designated cup.
    pub fn self_dual_object(&self) -> Result<&str, ModelError> {
        Ok(&self.role_gen(Role::Cup)?.dom.labels()[0])
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::new();
        for l in self.objects.keys() {
            s.add_object(l.clone());
        }
        for (n, g) in &self.gens {
            s.add_gen(GenDecl::new(n.clone(), g.dom.clone(), g.cod.clone())).expect("model invariants");
        }
        s
    }

    /// Dimension of `label`: the closed loop cup ∘ cap.
    pub fn dimension(&self, label: &str) -> Result<Rational, ModelError> {
        let cup = self.role(Role::Cup).ok_or(ModelError::MissingRole(Role::Cup))?;
        let cap = self.role(Role::Cap).ok_or(ModelError::MissingRole(Role::Cap))?;
        if self.gens[cup].dom.labels()[0] != label {
            return Err(ModelError::MissingRole(Role::Cup));
        }
        if self.gens[cap].cod.labels()[0] != label {
            return Err(ModelError::MissingRole(Role::Cap));
        }
        let t = parse(&format!("{cup} * {cap}"), &self.signature()).map_err(|_| ModelError::RoleType { role: Role::Cap, gen: cap.into() })?;
        Ok(evaluate_scalar(&t, self)?)
    }

    /// Checks that a designated cup and cap satisfy both snake equations.
    pub fn validate(&self) -> Result<(), ModelError> {
        let (Some(cup), Some(cap)) = (self.role(Role::Cup), self.role(Role::Cap)) else {
            return Ok(());
        };
        let x = self.gens[cup].dom.labels()[0].clone();
        if self.gens[cap].cod.labels()[0] != x {
            return Err(ModelError::RoleType { role: Role::Cap, gen: cap.into() });
        }
        let sig = self.signature();
        let id = evaluate(&parse(&format!("id[{x}]"), &sig).expect("identity parses"), self)?;
        for text in [format!("({cup} @ id[{x}]) * (id[{x}] @ {cap})"), format!("(id[{x}] @ {cup}) * ({cap} @ id[{x}])")] {
            let t = parse(&text, &sig).expect("snake parses");
            if evaluate(&t, self)? != id {
                return Err(ModelError::Snake(x));
            }
        }
        Ok(())
    }

    /// Same objects, generators and roles, ignoring the name.
    pub fn same_structure(&self, other: &Model) -> bool {
        self.objects == other.objects && self.gens == other.gens && self.roles == other.roles
    }
}

/// `p/q` reduced with `q > 0`, or the bare integer `p`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit());
    let body = n.strip_prefix('-').unwrap_or(n);
    if !digits(body) || !digits(d) {
        return None;
    }
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = d.parse().ok()?;
    if !den.is_positive() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn emit_model(m: &Model) -> String {
    let mut s = String::new();
    writeln!(s, "model {}", m.name).unwrap();
    for (l, d) in &m.objects {
        writeln!(s, "object {l} dim {d}").unwrap();
    }
    for (n, g) in &m.gens {
        let side = |o: &ObjType| o.labels().iter().map(|l| format!(" {l}")).collect::<String>();
        writeln!(s, "gen {n} :{} ->{}", side(&g.dom), side(&g.cod)).unwrap();
    }
    for (r, g) in &m.roles {
        writeln!(s, "role {r} {g}").unwrap();
    }
    for (n, g) in &m.gens {
        writeln!(s, "entries {n}").unwrap();
        for (idx, v) in g.tensor.nonzeros() {
            let idx: Vec<String> = idx.iter().map(usize::to_string).collect();
            let lhs = idx.join(" ");
            let sep = if lhs.is_empty() { "" } else { " " };
            writeln!(s, "{lhs}{sep}= {}", format_rational(v)).unwrap();
        }
        writeln!(s, "end").unwrap();
    }
    s
}

pub fn load_model(text: &str) -> Result<Model, ModelError> {
    let fail = |line: usize, reason: String| ModelError::Format { line, reason };
    let mut model: Option<Model> = None;
    let mut roles: Vec<(usize, Role, String)> = Vec::new();
    let mut block: Option<(String, Vec<usize>, Vec<Rational>, Vec<bool>)> = None;
    let mut filled: BTreeMap<String, RationalTensor> = BTreeMap::new();

    for (li, raw) in text.lines().enumerate() {
        let ln = li + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "end" && block.is_some() {
            let (gen, ext, data, _) = block.take().expect("open block");
            let m = model.as_ref().expect("block inside model");
            let nd = m.gens[&gen].dom.len();
            let t = RationalTensor::new(ext[..nd].to_vec(), ext[nd..].to_vec(), data).expect("sized from extents");
            filled.insert(gen, t);
            continue;
        }
        if let Some((gen, ext, data, seen)) = block.as_mut() {
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| fail(ln, "expected `indices = value` or `end`".into()))?;
            let idx: Vec<usize> = lhs
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| fail(ln, format!("bad index `{t}`"))))
                .collect::<Result<_, _>>()?;
            if idx.len() != ext.len() {
                return Err(fail(ln, format!("`{gen}` takes {} indices, found {}", ext.len(), idx.len())));
            }
            if let Some(k) = (0..idx.len()).find(|&k| idx[k] >= ext[k]) {
                return Err(fail(ln, format!("index {} out of range for extent {}", idx[k], ext[k])));
            }
            let v = parse_rational(rhs.trim()).ok_or_else(|| fail(ln, format!("bad rational `{}`", rhs.trim())))?;
            let off = idx.iter().zip(crate::tensor::strides(ext)).map(|(i, s)| i * s).sum::<usize>();
            if std::mem::replace(&mut seen[off], true) {
                return Err(fail(ln, "entry listed twice".into()));
            }
            data[off] = v;
            continue;
        }

        let mut words = line.split_whitespace();
        let kw = words.next().expect("nonempty line");
        if kw == "model" {
            if model.is_some() {
                return Err(fail(ln, "second `model` line".into()));
            }
            let name = line["model".len()..].trim();
            if name.is_empty() {
                return Err(fail(ln, "model needs a name".into()));
            }
            model = Some(Model::new(name));
            continue;
        }
        let m = model.as_mut().ok_or_else(|| fail(ln, "file must begin with `model <name>`".into()))?;
        match kw {
            "object" => {
                let parts: Vec<&str> = words.collect();
                let [label, "dim", n] = parts.as_slice() else {
                    return Err(fail(ln, "expected `object <label> dim <n>`".into()));
                };
                let n: usize = n.parse().map_err(|_| fail(ln, format!("bad dimension `{n}`")))?;
                m.add_object(*label, n).map_err(|e| fail(ln, e.to_string()))?;
            }
            "gen" => {
                let rest = line["gen".len()..].trim();
                let (name, ty) = rest.split_once(':').ok_or_else(|| fail(ln, "expected `gen <name> : <dom> -> <cod>`".into()))?;
                let name = name.trim();
                let (d, c) = ty.split_once("->").ok_or_else(|| fail(ln, "missing `->`".into()))?;
                let dom = ObjType::new(d.split_whitespace());
                let cod = ObjType::new(c.split_whitespace());
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(fail(ln, format!("bad generator name `{name}`")));
                }
                let ext = [m.extents(&dom), m.extents(&cod)];
                let [Ok(de), Ok(ce)] = ext else {
                    return Err(fail(ln, "generator uses an undeclared object".into()));
                };
                m.add_gen(name, dom, cod, RationalTensor::zeros(de, ce)).map_err(|e| fail(ln, e.to_string()))?;
            }
            "role" => {
                let parts: Vec<&str> = words.collect();
                let [role, gen] = parts.as_slice() else {
                    return Err(fail(ln, "expected `role <role> <gen>`".into()));
                };
                let role: Role = role.parse().map_err(|e| fail(ln, e))?;
                roles.push((ln, role, gen.to_string()));
            }
            "entries" => {
                let parts: Vec<&str> = words.collect();
                let [gen] = parts.as_slice() else {
                    return Err(fail(ln, "expected `entries <gen>`".into()));
                };
                let g = m.gen(gen).ok_or_else(|| fail(ln, format!("unknown generator `{gen}`")))?;
                if filled.contains_key(*gen) {
                    return Err(fail(ln, format!("second entries block for `{gen}`")));
                }
                let ext = g.tensor.extents();
                let n = g.tensor.entries().len();
                block = Some((gen.to_string(), ext, vec![Rational::zero(); n], vec![false; n]));
            }
            other => return Err(fail(ln, format!("unknown directive `{other}`"))),
        }
    }
    if block.is_some() {
        return Err(fail(text.lines().count(), "entries block not closed by `end`".into()));
    }
    let mut m = model.ok_or_else(|| fail(1, "empty model file".into()))?;
    for (n, t) in filled {
        m.replace_gen(&n, t)?;
    }
    for (ln, role, gen) in roles {
        m.set_role(role, &gen).map_err(|e| fail(ln, e.to_string()))?;
    }
    m.validate()?;
    Ok(m)
}
