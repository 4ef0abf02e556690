//! Typed string-diagram terms over a signature of object labels and generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::Rational;

/// A tensor product of object labels. The empty list is the unit object I.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjType(pub Vec<String>);

impl ObjType {
    pub fn unit() -> Self {
        ObjType(Vec::new())
    }

    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        ObjType(labels.into_iter().map(Into::into).collect())
    }

    /// `label` repeated `n` times.
    pub fn power(label: &str, n: usize) -> Self {
        ObjType(vec![label.to_string(); n])
    }

    pub fn concat(&self, other: &ObjType) -> ObjType {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        ObjType(v)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for ObjType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "I")
        } else {
            write!(f, "{}", self.0.join("⊗"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub dom: ObjType,
    pub cod: ObjType,
}

impl GenDecl {
    pub fn new(name: impl Into<String>, dom: ObjType, cod: ObjType) -> Self {
        GenDecl { name: name.into(), dom, cod }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown object label `{0}`")]
    UnknownObject(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch { path: String, expected: ObjType, found: ObjType },
}

/// Object alphabet plus generator declarations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    objects: BTreeSet<String>,
    gens: BTreeMap<String, GenDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>) {
        self.objects.insert(label.into());
    }

    pub fn add_gen(&mut self, decl: GenDecl) -> Result<(), TermError> {
        for l in decl.dom.labels().iter().chain(decl.cod.labels()) {
            if !self.objects.contains(l) {
                return Err(TermError::UnknownObject(l.clone()));
            }
        }
        if self.gens.contains_key(&decl.name) {
            return Err(TermError::DuplicateGenerator(decl.name));
        }
        self.gens.insert(decl.name.clone(), decl);
        Ok(())
    }

    pub fn has_object(&self, label: &str) -> bool {
        self.objects.contains(label)
    }

    pub fn gen(&self, name: &str) -> Option<&GenDecl> {
        self.gens.get(name)
    }

    pub fn objects(&self) -> impl Iterator<Item = &str> {
        self.objects.iter().map(String::as_str)
    }

    pub fn gens(&self) -> impl Iterator<Item = &GenDecl> {
        self.gens.values()
    }
}

/// A string-diagram morphism.
///
/// `Compose(after, before)` is `after ∘ before`. `Braid(x, y)` has type
/// `x⧺y → y⧺x`; `BraidInv(x, y)` is its inverse, typed `y⧺x → x⧺y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Id(ObjType),
    Gen(String),
    Compose(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
    Braid(ObjType, ObjType),
    BraidInv(ObjType, ObjType),
    ScalarMul(Rational, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Zero(ObjType, ObjType),
}

impl Term {
    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    pub fn id(o: ObjType) -> Term {
        Term::Id(o)
    }

    pub fn compose(after: Term, before: Term) -> Term {
        Term::Compose(Box::new(after), Box::new(before))
    }

    pub fn tensor(left: Term, right: Term) -> Term {
        Term::Tensor(Box::new(left), Box::new(right))
    }

    pub fn scale(c: Rational, t: Term) -> Term {
        Term::ScalarMul(c, Box::new(t))
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    /// `a - b`, encoded as `a + (-1).b`.
    pub fn difference(a: Term, b: Term) -> Term {
        Term::sum(a, Term::scale(-Rational::one(), b))
    }

    /// Generator names occurring in the term.
    pub fn generators(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_gens(&mut out);
        out
    }

    fn collect_gens(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Gen(n) => {
                out.insert(n.clone());
            }
            Term::Compose(a, b) | Term::Tensor(a, b) | Term::Sum(a, b) => {
                a.collect_gens(out);
                b.collect_gens(out);
            }
            Term::ScalarMul(_, t) => t.collect_gens(out),
            Term::Id(_) | Term::Braid(..) | Term::BraidInv(..) | Term::Zero(..) => {}
        }
    }

    /// Renames object labels and generators. Names absent from a map are kept.
    pub fn rename(&self, objs: &BTreeMap<String, String>, gens: &BTreeMap<String, String>) -> Term {
        let ro = |o: &ObjType| ObjType(o.0.iter().map(|l| objs.get(l).unwrap_or(l).clone()).collect());
        match self {
            Term::Id(o) => Term::Id(ro(o)),
            Term::Gen(n) => Term::Gen(gens.get(n).unwrap_or(n).clone()),
            Term::Compose(a, b) => Term::compose(a.rename(objs, gens), b.rename(objs, gens)),
            Term::Tensor(a, b) => Term::tensor(a.rename(objs, gens), b.rename(objs, gens)),
            Term::Braid(x, y) => Term::Braid(ro(x), ro(y)),
            Term::BraidInv(x, y) => Term::BraidInv(ro(x), ro(y)),
            Term::ScalarMul(c, t) => Term::scale(c.clone(), t.rename(objs, gens)),
            Term::Sum(a, b) => Term::sum(a.rename(objs, gens), b.rename(objs, gens)),
            Term::Zero(d, c) => Term::Zero(ro(d), ro(c)),
        }
    }
}

/// Computes `(dom, cod)` or reports the first ill-typed subterm.
///
/// Paths are written from the root, e.g. `root.after.left`.
pub fn typecheck(t: &Term, sig: &Signature) -> Result<(ObjType, ObjType), TermError> {
    tc(t, sig, &mut vec!["root"])
}

fn check_labels(o: &ObjType, sig: &Signature) -> Result<(), TermError> {
    match o.labels().iter().find(|l| !sig.has_object(l)) {
        Some(l) => Err(TermError::UnknownObject(l.clone())),
        None => Ok(()),
    }
}

fn tc(t: &Term, sig: &Signature, path: &mut Vec<&'static str>) -> Result<(ObjType, ObjType), TermError> {
    let sub = |t: &Term, step: &'static str, path: &mut Vec<&'static str>| {
        path.push(step);
        let r = tc(t, sig, path);
        path.pop();
        r
    };
    match t {
        Term::Id(o) => {
            check_labels(o, sig)?;
            Ok((o.clone(), o.clone()))
        }
        Term::Gen(n) => sig
            .gen(n)
            .map(|g| (g.dom.clone(), g.cod.clone()))
            .ok_or_else(|| TermError::UnknownGenerator(n.clone())),
        Term::Compose(after, before) => {
            let (ad, ac) = sub(after, "after", path)?;
            let (bd, bc) = sub(before, "before", path)?;
            if bc != ad {
                return Err(TermError::TypeMismatch { path: path.join("."), expected: ad, found: bc });
            }
            Ok((bd, ac))
        }
        Term::Tensor(l, r) => {
            let (ld, lc) = sub(l, "left", path)?;
            let (rd, rc) = sub(r, "right", path)?;
            Ok((ld.concat(&rd), lc.concat(&rc)))
        }
        Term::Braid(x, y) => {
            check_labels(x, sig)?;
            check_labels(y, sig)?;
            Ok((x.concat(y), y.concat(x)))
        }
        Term::BraidInv(x, y) => {
            check_labels(x, sig)?;
            check_labels(y, sig)?;
            Ok((y.concat(x), x.concat(y)))
        }
        Term::ScalarMul(_, t) => sub(t, "scaled", path),
        Term::Sum(a, b) => {
            let (ad, ac) = sub(a, "left", path)?;
            let (bd, bc) = sub(b, "right", path)?;
            if ad != bd {
                return Err(TermError::TypeMismatch { path: format!("{}.right", path.join(".")), expected: ad, found: bd });
            }
            if ac != bc {
                return Err(TermError::TypeMismatch { path: format!("{}.right", path.join(".")), expected: ac, found: bc });
            }
            Ok((ad, ac))
        }
        Term::Zero(d, c) => {
            check_labels(d, sig)?;
            check_labels(c, sig)?;
            Ok((d.clone(), c.clone()))
        }
    }
}
