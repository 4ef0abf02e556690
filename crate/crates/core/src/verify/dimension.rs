//! Closed-diagram evaluations that pin down the dimension.

use num_bigint::BigInt;
use num_traits::One;

use crate::equivalence::split_unit;
use crate::model::{Model, ModelError, Role};
use crate::Rational;

use super::catalog::Catalog;
use super::runner::{bind, run_suite, Binding, Status, Suite};
use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionKind {
    Vpa,
    Ca,
}

/// One computed value against its predicted value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCheck {
    /// Closed diagram being evaluated; `None` for a polynomial in `d`.
    pub diagram: Option<String>,
    pub formula: String,
    pub computed: Rational,
    pub expected: Rational,
    /// Informational checks never fail the report.
    pub asserted: bool,
}

impl DimensionCheck {
    pub fn ok(&self) -> bool {
        self.computed == self.expected
    }

    fn status(&self) -> &'static str {
        match (self.ok(), self.asserted) {
            (true, _) => "OK",
            (false, true) => "FAIL",
            (false, false) => "(not asserted)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub model: String,
    pub kind: DimensionKind,
    pub d: Rational,
    /// Whether the associativity suite passed; only meaningful for vpa.
    pub associative: bool,
    pub checks: Vec<DimensionCheck>,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok() || !c.asserted)
    }

    pub fn check(&self, diagram: &str) -> Option<&DimensionCheck> {
        self.checks.iter().find(|c| c.diagram.as_deref() == Some(diagram))
    }

    /// Human-readable lines, one per check.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| match &c.diagram {
                None => format!("d={}  {}={} {}", self.d, c.formula, c.computed, c.status()),
                Some(n) => format!("{n}={} {}  {}={}", c.computed, c.status(), c.formula, c.expected),
            })
            .collect()
    }

    /// The first failing asserted check as an error.
    pub fn into_result(self) -> Result<DimensionReport, VerifyError> {
        match self.checks.iter().find(|c| c.asserted && !c.ok()) {
            Some(c) => Err(VerifyError::AssertionFailure {
                what: format!("{} {}", c.diagram.as_deref().unwrap_or("polynomial"), c.formula),
                computed: c.computed.clone(),
                expected: c.expected.clone(),
            }),
            None => Ok(self),
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn poly(d: &Rational, roots: &[i64]) -> Rational {
    roots.iter().fold(Rational::one(), |acc, r| acc * (d - int(*r)))
}

fn closed(catalog: &Catalog, bound: &super::runner::Bound, name: &str) -> Result<Rational, VerifyError> {
    let text = catalog
        .macro_text(name)
        .or_else(|| Catalog::builtin().macro_text(name))
        .ok_or_else(|| VerifyError::Unsupported(format!("catalog has no `{name}` macro")))?;
    let t = bound.evaluate_text(text)?;
    Ok(t.as_scalar().cloned().expect("closed diagram"))
}

fn check(diagram: Option<&str>, formula: &str, computed: Rational, expected: Rational, asserted: bool) -> DimensionCheck {
    DimensionCheck { diagram: diagram.map(str::to_string), formula: formula.to_string(), computed, expected, asserted }
}

/// Evaluates the dimension-theorem diagrams on a vpa or ca model.
pub fn dimension_report(m: &Model, catalog: &Catalog) -> Result<DimensionReport, VerifyError> {
    let is_ca = m.role(Role::M).is_some() && m.role(Role::E).is_some();
    if is_ca {
        let bound = bind(m, Binding::Ca).map_err(VerifyError::Unsupported)?;
        let d = closed(catalog, &bound, "d")?;
        let rank = split_unit(m).map_err(|e| VerifyError::Unsupported(e.to_string()))?.rank();
        let checks = vec![
            check(None, "(d-1)(d-2)(d-4)(d-8)", poly(&d, &[1, 2, 4, 8]), int(0), true),
            check(Some("rank V"), "d-1", int(rank as i64), &d - int(1), true),
        ];
        return Ok(DimensionReport { model: m.name().to_string(), kind: DimensionKind::Ca, d, associative: true, checks });
    }
    if m.role(Role::Wedge).is_none() {
        return Err(VerifyError::Model(ModelError::MissingRole(Role::Wedge)));
    }
    let bound = bind(m, Binding::Vpa).map_err(VerifyError::Unsupported)?;
    let associative = run_suite(m, Suite::Assoc, catalog)?.iter().all(|v| v.status == Status::Pass);
    let d = closed(catalog, &bound, "d")?;
    let one = int(1);
    let mickey = closed(catalog, &bound, "mickey")?;
    let mounts = closed(catalog, &bound, "mounts")?;
    let theta = closed(catalog, &bound, "theta")?;
    let d4 = &d - int(4);
    let checks = vec![
        check(None, "d(d-1)(d-3)(d-7)", poly(&d, &[0, 1, 3, 7]), int(0), true),
        check(None, "d(d-1)(d-3)", poly(&d, &[0, 1, 3]), int(0), associative),
        check(Some("theta"), "(1-d)d", theta, (&one - &d) * &d, true),
        check(Some("mickey"), "d(d-1)^2", mickey.clone(), &d * (&d - &one) * (&d - &one), true),
        check(Some("mickey"), "2d(d-1)", mickey, int(2) * &d * (&d - &one), associative),
        check(Some("mounts"), "(d-4)^2(1-d)d", mounts.clone(), &d4 * &d4 * (&one - &d) * &d, true),
        check(
            Some("mounts"),
            "(d-4)(1-d)d-d(1-d)^2",
            mounts,
            &d4 * (&one - &d) * &d - &d * (&one - &d) * (&one - &d),
            true,
        ),
    ];
    Ok(DimensionReport { model: m.name().to_string(), kind: DimensionKind::Vpa, d, associative, checks })
}
