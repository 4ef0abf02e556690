//! Loading and validating the identity catalog.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::dsl::parse;
use crate::term::{typecheck, GenDecl, ObjType};

use super::runner::Binding;

/// The catalog shipped with the crate.
pub const BUILTIN_CATALOG: &str = include_str!("../../catalog/identities.toml");

pub const TAGS: [&str; 8] = ["duality", "braiding", "vpa", "vpa-derived", "assoc-only", "ca", "equivalence", "closed-scalar"];

/// Every identity family the catalog must cover, by `source`.
pub const COVERAGE: &[&str] = &[
    "snake equations",
    "adjunction from braided counit",
    "braiding inverse",
    "braiding naturality",
    "hexagon identities",
    "Yang-Baxter equation",
    "dimension as closed loop",
    "symmetric self-duality",
    "transpose of a morphism",
    "bending a two-leg state",
    "curl removal",
    "scalars commute",
    "additive structure",
    "antisymmetry axiom",
    "cyclic axiom",
    "strange axiom",
    "nilpotent wedge",
    "scalar triple product",
    "double wedge expansion",
    "swinging a leg",
    "swinging corollary one",
    "swinging corollary two",
    "swinging corollary three",
    "swinging corollary four",
    "loop evaluations",
    "Springer identity",
    "enabler identity",
    "mickey diagram",
    "mounts diagram",
    "mounted equation",
    "dimension quartic",
    "restricted composition axiom",
    "associativity",
    "associativity alternative",
    "associative triple expansion",
    "mickey associative form",
    "dimension cubic",
    "unit counit",
    "double braiding",
    "unit laws",
    "composition axiom",
    "norm multiplicativity",
    "wedge from multiplication",
    "wedge antisymmetry",
    "wedge leg swap",
    "wedge annihilated by unit",
    "unit idempotent",
    "dimension of composition algebra",
    "direct sum decomposition",
    "self-duality of imaginary part",
    "wedge factors through imaginary part",
    "restricted multiplication identities",
    "symmetrized product on imaginary part",
    "self-duality of algebra",
    "multiplication from vector product",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("catalog is not valid TOML: {0}")]
    Toml(String),
    #[error("macro `{name}`: {reason}")]
    Macro { name: String, reason: String },
    #[error("entry `{id}`: {reason}")]
    Entry { id: String, reason: String },
    #[error("cannot read catalog {path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Basis,
    Random(usize),
    BasisRandom(usize),
}

impl Probe {
    /// `basis`, `random:N` or `basis+random:N`.
    pub fn parse(s: &str) -> Option<Probe> {
        let count = |n: &str| n.parse::<usize>().ok();
        match s {
            "basis" => Some(Probe::Basis),
            _ => {
                if let Some(n) = s.strip_prefix("basis+random:") {
                    count(n).map(Probe::BasisRandom)
                } else {
                    s.strip_prefix("random:").and_then(count).map(Probe::Random)
                }
            }
        }
    }
}

/// A generator quantified over a probe family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forall {
    pub name: String,
    pub dom: ObjType,
    pub cod: ObjType,
    pub probe: Probe,
}

impl Forall {
    /// Reads `name : dom -> cod`, e.g. `x : -> V`.
    pub fn parse(spec: &str, probe: Probe) -> Option<Forall> {
        let (name, ty) = spec.split_once(':')?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(is_ident_char) {
            return None;
        }
        let (dom, cod) = parse_type(ty)?;
        Some(Forall { name: name.to_string(), dom, cod, probe })
    }
}

/// An equation with macros already expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityEntry {
    pub id: String,
    pub tags: Vec<String>,
    pub source: String,
    pub lhs: String,
    pub rhs: String,
    pub forall: Vec<Forall>,
}

impl IdentityEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// The same entry with both sides exchanged.
    pub fn swapped(&self) -> IdentityEntry {
        IdentityEntry { lhs: self.rhs.clone(), rhs: self.lhs.clone(), ..self.clone() }
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    #[serde(default)]
    macros: BTreeMap<String, String>,
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    tags: Vec<String>,
    source: String,
    lhs: String,
    rhs: String,
    #[serde(default)]
    forall: Vec<RawForall>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForall {
    name: String,
    #[serde(rename = "type")]
    ty: String,
    probe: String,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<IdentityEntry>,
    macros: BTreeMap<String, String>,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Replaces each `$name` by `(body)`, recursively.
fn expand(text: &str, raw: &BTreeMap<String, String>, depth: usize) -> Result<String, String> {
    if depth > 16 {
        return Err("macro expansion nests too deeply".into());
    }
    let mut out = String::new();
    let mut rest = text;
    while let Some(pos) = rest.find('$') {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 1..];
        let len = after.find(|c: char| !is_ident_char(c)).unwrap_or(after.len());
        let name = &after[..len];
        let body = raw.get(name).ok_or_else(|| format!("unknown macro `${name}`"))?;
        out.push('(');
        out.push_str(&expand(body, raw, depth + 1)?);
        out.push(')');
        rest = &after[len..];
    }
    out.push_str(rest);
    Ok(out)
}

fn parse_type(s: &str) -> Option<(ObjType, ObjType)> {
    let (d, c) = s.split_once("->")?;
    Some((ObjType::new(d.split_whitespace()), ObjType::new(c.split_whitespace())))
}

impl Catalog {
    pub fn from_toml(text: &str) -> Result<Catalog, CatalogError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Toml(e.to_string()))?;
        let mut macros = BTreeMap::new();
        for name in raw.macros.keys() {
            let body = expand(&format!("${name}"), &raw.macros, 0)
                .map_err(|reason| CatalogError::Macro { name: name.clone(), reason })?;
            macros.insert(name.clone(), body);
        }
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for e in raw.entry {
            let fail = |reason: String| CatalogError::Entry { id: e.id.clone(), reason };
            if !seen.insert(e.id.clone()) {
                return Err(fail("duplicate id".into()));
            }
            if e.tags.is_empty() {
                return Err(fail("no tags".into()));
            }
            if let Some(t) = e.tags.iter().find(|t| !TAGS.contains(&t.as_str())) {
                return Err(fail(format!("unknown tag `{t}`")));
            }
            let lhs = expand(&e.lhs, &raw.macros, 0).map_err(fail)?;
            let rhs = expand(&e.rhs, &raw.macros, 0).map_err(fail)?;
            let mut forall = Vec::new();
            for f in &e.forall {
                let (dom, cod) = parse_type(&f.ty).ok_or_else(|| fail(format!("bad type `{}`", f.ty)))?;
                let probe = Probe::parse(&f.probe).ok_or_else(|| fail(format!("bad probe `{}`", f.probe)))?;
                forall.push(Forall { name: f.name.clone(), dom, cod, probe });
            }
            let entry = IdentityEntry { id: e.id.clone(), tags: e.tags.clone(), source: e.source.clone(), lhs, rhs, forall };
            check_entry_types(&entry).map_err(fail)?;
            entries.push(entry);
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Catalog { entries, macros })
    }

    pub fn load(path: &std::path::Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Catalog::from_toml(&text)
    }

    /// The embedded catalog.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_toml(BUILTIN_CATALOG).expect("embedded catalog is valid"))
    }

    /// Entries sorted by id.
    pub fn entries(&self) -> &[IdentityEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Fully expanded body of a macro.
    pub fn macro_text(&self, name: &str) -> Option<&str> {
        self.macros.get(name).map(String::as_str)
    }
}

/// Both sides must typecheck to the same type in the binding picked by the tags.
pub(crate) fn check_entry_types(e: &IdentityEntry) -> Result<(), String> {
    let binding = Binding::for_tags(&e.tags);
    let mut sig = binding.signature();
    for f in &e.forall {
        sig.add_gen(GenDecl::new(f.name.clone(), f.dom.clone(), f.cod.clone())).map_err(|err| err.to_string())?;
    }
    let l = parse(&e.lhs, &sig).map_err(|err| format!("lhs: {err}"))?;
    let r = parse(&e.rhs, &sig).map_err(|err| format!("rhs: {err}"))?;
    let (lt, rt) = (typecheck(&l, &sig).expect("parsed"), typecheck(&r, &sig).expect("parsed"));
    if lt != rt {
        return Err(format!("sides have types {} -> {} and {} -> {}", lt.0, lt.1, rt.0, rt.1));
    }
    Ok(())
}
