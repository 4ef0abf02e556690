//! Checking catalog entries against a model by exact evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dsl::parse;
use crate::equivalence::{augment, wedge_of_ca};
use crate::eval::evaluate;
use crate::model::{Model, Role};
use crate::tensor::RationalTensor;
use crate::term::{typecheck, GenDecl, ObjType, Signature, Term};
use crate::Rational;

use super::catalog::{Catalog, Forall, IdentityEntry, Probe};
use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Vpa,
    Assoc,
    Ca,
    Equivalence,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Duality, Suite::Vpa, Suite::Assoc, Suite::Ca, Suite::Equivalence];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Vpa => "vpa",
            Suite::Assoc => "assoc",
            Suite::Ca => "ca",
            Suite::Equivalence => "equivalence",
        }
    }

    pub fn contains(self, e: &IdentityEntry) -> bool {
        match self {
            Suite::Duality => Binding::for_tags(&e.tags) == Binding::Duality,
            Suite::Vpa => e.has_tag("vpa") || e.has_tag("vpa-derived"),
            Suite::Assoc => e.has_tag("assoc-only"),
            Suite::Ca => e.has_tag("ca"),
            Suite::Equivalence => e.has_tag("equivalence"),
        }
    }

    /// Roles a model needs for this suite.
    pub fn required_roles(self) -> &'static [Role] {
        match self {
            Suite::Duality => &[Role::Cup, Role::Cap],
            Suite::Vpa | Suite::Assoc => &[Role::Cup, Role::Cap, Role::Wedge],
            Suite::Ca | Suite::Equivalence => &[Role::Cup, Role::Cap, Role::M, Role::E],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// The suites that apply to a model, judged by its roles.
pub fn suites_for(m: &Model) -> Vec<Suite> {
    let has = |r: Role| m.role(r).is_some();
    let mut v = Vec::new();
    if has(Role::Cup) && has(Role::Cap) {
        v.push(Suite::Duality);
    }
    if has(Role::M) && has(Role::E) {
        v.extend([Suite::Ca, Suite::Equivalence]);
    } else if has(Role::Wedge) {
        v.extend([Suite::Vpa, Suite::Assoc]);
    }
    v
}

/// How catalog names are matched to a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Duality,
    Vpa,
    Ca,
    Equivalence,
}

impl Binding {
    pub fn for_tags(tags: &[String]) -> Binding {
        let has = |t: &str| tags.iter().any(|x| x == t);
        if has("equivalence") {
            Binding::Equivalence
        } else if has("ca") {
            Binding::Ca
        } else if has("vpa") || has("vpa-derived") || has("assoc-only") {
            Binding::Vpa
        } else {
            Binding::Duality
        }
    }

    /// Object label the catalog uses for the self-dual object.
    fn object(self) -> &'static str {
        match self {
            Binding::Duality => "X",
            Binding::Vpa => "V",
            Binding::Ca | Binding::Equivalence => "A",
        }
    }

    /// Catalog-side signature: generators named after their roles.
    pub fn signature(self) -> Signature {
        let x = self.object();
        let mut s = Signature::new();
        s.add_object(x);
        let xx = ObjType::power(x, 2);
        let x1 = ObjType::power(x, 1);
        let mut gens = vec![
            GenDecl::new("cup", xx.clone(), ObjType::unit()),
            GenDecl::new("cap", ObjType::unit(), xx.clone()),
        ];
        if self != Binding::Duality {
            gens.push(GenDecl::new("wedge", xx.clone(), x1.clone()));
        }
        if matches!(self, Binding::Ca | Binding::Equivalence) {
            gens.push(GenDecl::new("m", xx, x1.clone()));
            gens.push(GenDecl::new("e", ObjType::unit(), x1.clone()));
        }
        if self == Binding::Equivalence {
            s.add_object("V");
            let v = ObjType::new(["V"]);
            gens.push(GenDecl::new("p", x1.clone(), ObjType::unit()));
            gens.push(GenDecl::new("q", x1.clone(), v.clone()));
            gens.push(GenDecl::new("i", v, x1));
        }
        for g in gens {
            s.add_gen(g).expect("distinct names");
        }
        s
    }

    fn roles(self) -> &'static [Role] {
        match self {
            Binding::Duality => &[Role::Cup, Role::Cap],
            Binding::Vpa => &[Role::Cup, Role::Cap, Role::Wedge],
            Binding::Ca => &[Role::Cup, Role::Cap, Role::M, Role::E],
            Binding::Equivalence => &[Role::Cup, Role::Cap, Role::M, Role::E, Role::Wedge, Role::P, Role::Q, Role::I],
        }
    }
}

/// A model prepared for one binding, with the renamings from catalog names.
#[derive(Clone, Debug)]
pub struct Bound {
    binding: Binding,
    model: Model,
    objs: BTreeMap<String, String>,
    gens: BTreeMap<String, String>,
}

impl Bound {
    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Evaluates a closed catalog-side term such as an expanded macro.
    pub fn evaluate_text(&self, text: &str) -> Result<RationalTensor, VerifyError> {
        let sig = self.binding.signature();
        let t = parse(text, &sig).map_err(|err| VerifyError::Parse { id: text.to_string(), reason: err.to_string() })?;
        Ok(evaluate(&t.rename(&self.objs, &self.gens), &self.model)?)
    }
}

/// Prepares `m` for a binding, or explains why entries must be skipped.
pub fn bind(m: &Model, binding: Binding) -> Result<Bound, String> {
    let needed: &[Role] = match binding {
        Binding::Equivalence => Binding::Ca.roles(),
        b => b.roles(),
    };
    if let Some(r) = needed.iter().find(|r| m.role(**r).is_none()) {
        return Err(format!("model designates no {r}"));
    }
    let mut model = m.clone();
    match binding {
        Binding::Ca if m.role(Role::Wedge).is_none() => {
            let w = wedge_of_ca(m).map_err(|e| e.to_string())?;
            let name = ["wedge", "wedge_derived", "wedge_ca"].into_iter().find(|n| m.gen(n).is_none()).ok_or("no free name for wedge")?;
            let a = m.self_dual_object().map_err(|e| e.to_string())?.to_string();
            model
                .add_gen(name, ObjType::power(&a, 2), ObjType::power(&a, 1), w)
                .and_then(|_| model.set_role(Role::Wedge, name))
                .map_err(|e| e.to_string())?;
        }
        Binding::Equivalence => {
            model = augment(m).map_err(|e| format!("cannot split the unit: {e}"))?;
        }
        _ => {}
    }
    let x = model.self_dual_object().map_err(|e| e.to_string())?.to_string();
    let mut objs = BTreeMap::from([(binding.object().to_string(), x)]);
    if binding == Binding::Equivalence {
        let v = model.role_gen(Role::I).map_err(|e| e.to_string())?.dom.labels()[0].clone();
        objs.insert("V".into(), v);
    }
    let mut gens = BTreeMap::new();
    let roles = if binding == Binding::Ca { &[Role::Cup, Role::Cap, Role::M, Role::E, Role::Wedge][..] } else { binding.roles() };
    for r in roles {
        gens.insert(r.name().to_string(), model.role(*r).expect("checked").to_string());
    }
    Ok(Bound { binding, model, objs, gens })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// The first entry where the two sides disagree, under a probe assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<(String, String)>,
    pub index: Vec<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub id: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<Witness>,
    /// Set by a profile when this failure is predicted.
    pub expected: bool,
}

impl Verdict {
    fn new(id: &str, status: Status, detail: String, witness: Option<Witness>) -> Verdict {
        Verdict { id: id.to_string(), status, detail, witness, expected: false }
    }
}

/// Stable 64-bit FNV-1a, used to seed probes from entry ids.
fn seed(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.bytes().chain([0]) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn describe_basis(dom: usize, cod: usize, idx: &[usize]) -> String {
    match (dom, cod) {
        (0, 1) => format!("e{}", idx[0] + 1),
        (1, 0) => format!("e{}*", idx[0] + 1),
        _ => format!("E{idx:?}"),
    }
}

/// Probe tensors with descriptions, basis first.
fn probes(f: &Forall, dom: Vec<usize>, cod: Vec<usize>, entry: &str) -> Vec<(RationalTensor, String)> {
    let mut out = Vec::new();
    let shape = RationalTensor::zeros(dom.clone(), cod.clone());
    let n = shape.entries().len();
    let ext = shape.extents();
    let (basis, random) = match f.probe {
        Probe::Basis => (true, 0),
        Probe::Random(k) => (false, k),
        Probe::BasisRandom(k) => (true, k),
    };
    if basis {
        for flat in 0..n {
            let mut idx = vec![0; ext.len()];
            crate::tensor::unflatten(flat, &ext, &mut idx);
            let mut t = shape.clone();
            t.set(&idx, Rational::from_integer(1.into())).expect("in range");
            out.push((t, describe_basis(dom.len(), cod.len(), &idx)));
        }
    }
    for j in 0..random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed(&[entry, &f.name, &j.to_string()]));
        let entries: Vec<Rational> =
            (0..n).map(|_| Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())).collect();
        let t = RationalTensor::new(dom.clone(), cod.clone(), entries).expect("sized");
        let desc = if t.rank() == 1 {
            let coords: Vec<String> = t.entries().iter().map(ToString::to_string).collect();
            format!("({})", coords.join(","))
        } else {
            format!("random#{}", j + 1)
        };
        out.push((t, desc));
    }
    out
}

fn show_values(t: &RationalTensor) -> Option<String> {
    if t.rank() != 1 || t.entries().len() > 8 {
        return None;
    }
    let v: Vec<String> = t.entries().iter().map(ToString::to_string).collect();
    Some(format!("({})", v.join(",")))
}

/// A quantified generator with its probe tensors.
struct Family {
    gen: String,
    name: String,
    dom: ObjType,
    cod: ObjType,
    probes: Vec<(RationalTensor, String)>,
}

/// Checks one entry against a prepared model.
pub fn check_bound(bound: &Bound, e: &IdentityEntry) -> Result<Verdict, VerifyError> {
    if Binding::for_tags(&e.tags) != bound.binding {
        return Err(VerifyError::Binding(e.id.clone()));
    }
    let mut sig = bound.binding.signature();
    let mut gens = bound.gens.clone();
    let mut families = Vec::new();
    for f in &e.forall {
        sig.add_gen(GenDecl::new(f.name.clone(), f.dom.clone(), f.cod.clone()))
            .map_err(|err| VerifyError::Parse { id: e.id.clone(), reason: err.to_string() })?;
        let gen = format!("${}", f.name);
        gens.insert(f.name.clone(), gen.clone());
        let dom = ObjType(f.dom.labels().iter().map(|l| bound.objs[l].clone()).collect());
        let cod = ObjType(f.cod.labels().iter().map(|l| bound.objs[l].clone()).collect());
        let (de, ce) = (bound.model.extents(&dom)?, bound.model.extents(&cod)?);
        let probes = probes(f, de, ce, &e.id);
        families.push(Family { gen, name: f.name.clone(), dom, cod, probes });
    }
    let side = |text: &str| -> Result<Term, VerifyError> {
        let t = parse(text, &sig).map_err(|err| VerifyError::Parse { id: e.id.clone(), reason: err.to_string() })?;
        Ok(t.rename(&bound.objs, &gens))
    };
    let (lhs, rhs) = (side(&e.lhs)?, side(&e.rhs)?);
    probe_loop(&e.id, &e.source, &bound.model, &families, &lhs, &rhs)
}

/// Checks an ad hoc equation written in the model's own generator names.
pub fn check_terms(m: &Model, id: &str, lhs: &str, rhs: &str, forall: &[Forall]) -> Result<Verdict, VerifyError> {
    let fail = |reason: String| VerifyError::Parse { id: id.to_string(), reason };
    let mut sig = m.signature();
    let mut families = Vec::new();
    for f in forall {
        sig.add_gen(GenDecl::new(f.name.clone(), f.dom.clone(), f.cod.clone())).map_err(|e| fail(e.to_string()))?;
        let (de, ce) = (m.extents(&f.dom)?, m.extents(&f.cod)?);
        let probes = probes(f, de, ce, id);
        families.push(Family { gen: f.name.clone(), name: f.name.clone(), dom: f.dom.clone(), cod: f.cod.clone(), probes });
    }
    let l = parse(lhs, &sig).map_err(|e| fail(format!("lhs: {e}")))?;
    let r = parse(rhs, &sig).map_err(|e| fail(format!("rhs: {e}")))?;
    let (lt, rt) = (typecheck(&l, &sig).expect("parsed"), typecheck(&r, &sig).expect("parsed"));
    if lt != rt {
        return Err(fail(format!("sides have types {} -> {} and {} -> {}", lt.0, lt.1, rt.0, rt.1)));
    }
    probe_loop(id, "", m, &families, &l, &r)
}

/// Tries every combination of probes, stopping at the first disagreement.
fn probe_loop(id: &str, source: &str, base: &Model, families: &[Family], lhs: &Term, rhs: &Term) -> Result<Verdict, VerifyError> {
    let total: usize = families.iter().map(|f| f.probes.len()).product();
    let mut choice = vec![0usize; families.len()];
    for _ in 0..total {
        let mut model = base.clone();
        let mut assignment = Vec::new();
        for (f, &c) in families.iter().zip(&choice) {
            let (t, desc) = &f.probes[c];
            model.add_gen(f.gen.clone(), f.dom.clone(), f.cod.clone(), t.clone())?;
            assignment.push((f.name.clone(), desc.clone()));
        }
        let l = evaluate(lhs, &model)?;
        let r = evaluate(rhs, &model)?;
        if let Some((index, lv, rv)) = l.first_difference(&r) {
            let at: Vec<String> = assignment.iter().map(|(n, d)| format!("{n}={d}")).collect();
            let mut detail = if at.is_empty() { String::new() } else { format!("at {}: ", at.join(", ")) };
            detail.push_str(&format!("first difference at {index:?}: lhs {lv}, rhs {rv}"));
            if let (Some(a), Some(b)) = (show_values(&l), show_values(&r)) {
                detail.push_str(&format!(" (lhs {a}, rhs {b})"));
            }
            let w = Witness { assignment, index, lhs: lv, rhs: rv };
            return Ok(Verdict::new(id, Status::Fail, detail, Some(w)));
        }
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < families[k].probes.len() {
                break;
            }
            choice[k] = 0;
        }
    }
    let mut detail = source.to_string();
    if !families.is_empty() {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&match total {
            0 => "vacuous, no probes in dimension 0".to_string(),
            n => format!("{n} probe assignments"),
        });
    }
    Ok(Verdict::new(id, Status::Pass, detail, None))
}

/// Checks one entry, binding the model from the entry's tags.
pub fn check_equation(m: &Model, e: &IdentityEntry) -> Result<Verdict, VerifyError> {
    match bind(m, Binding::for_tags(&e.tags)) {
        Ok(b) => check_bound(&b, e),
        Err(reason) => Ok(Verdict::new(&e.id, Status::Skipped, reason, None)),
    }
}

/// Runs every entry of `suite`, in id order.
pub fn run_suite(m: &Model, suite: Suite, catalog: &Catalog) -> Result<Vec<Verdict>, VerifyError> {
    run_entries(m, catalog.entries().iter().filter(|e| suite.contains(e)).collect())
}

/// Runs the given entries, sharing one binding per kind; output sorted by id.
pub fn run_entries(m: &Model, mut entries: Vec<&IdentityEntry>) -> Result<Vec<Verdict>, VerifyError> {
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let mut bound: BTreeMap<u8, Result<Bound, String>> = BTreeMap::new();
    let key = |b: Binding| b as u8;
    for e in &entries {
        let b = Binding::for_tags(&e.tags);
        bound.entry(key(b)).or_insert_with(|| bind(m, b));
    }
    entries
        .par_iter()
        .map(|e| match &bound[&key(Binding::for_tags(&e.tags))] {
            Ok(b) => check_bound(b, e),
            Err(reason) => Ok(Verdict::new(&e.id, Status::Skipped, reason.clone(), None)),
        })
        .collect()
}

/// Ids of the defining vector product axioms that fail (or cannot run) on `m`.
pub fn vpa_axiom_failures(m: &Model) -> Vec<String> {
    let entries = Catalog::builtin().entries().iter().filter(|e| e.id.starts_with("vpa.axiom.")).collect();
    match run_entries(m, entries) {
        Ok(vs) => vs.into_iter().filter(|v| v.status != Status::Pass).map(|v| v.id).collect(),
        Err(e) => vec![e.to_string()],
    }
}
