//! Scenario files.
//!
//! ```json
//! {
//!   "name": "square_one_dirichlet_side",
//!   "domain": {"type": "box", "faces": {"x": ["N", "N"], "y": ["D", "N"]}},
//!   "k_max": 4,
//!   "levels": 4,
//!   "spectra": ["dirichlet", "neumann", "mixed"],
//!   "checks": [{"type": "chain"}, {"type": "neumann_mixed"}]
//! }
//! ```
//!
//! `levels` and `k_max` given on the command line replace the values in the
//! file; `levels` defaults to [`DEFAULT_LEVELS`] when neither sets it.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use speclab_core::geometry::{refine_partition, BoundaryKind, Domain, Label, PolygonDomain};
use speclab_core::identity::MAX_DEGREE;

use crate::domain::{array, field, number, object, only_keys, parse_domain, string, Pointer};
use crate::error::{RunError, SchemaError};

pub const DEFAULT_LEVELS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckSpec {
    Chain,
    NeumannMixed,
    /// Without a shift the theorem with shift `dim S(Γ_D)`; with one, a probe.
    DirichletMixed {
        shift: Option<usize>,
    },
    /// Without a shift the theorem with shift `d`; with one, a probe.
    LevineWeinberger {
        shift: Option<usize>,
    },
    /// Shrinks the first Dirichlet segment to fraction `shrink`.
    Monotonicity {
        shrink: f64,
    },
    Identity,
}

impl CheckSpec {
    pub fn type_name(&self) -> &'static str {
        match self {
            CheckSpec::Chain => "chain",
            CheckSpec::NeumannMixed => "neumann_mixed",
            CheckSpec::DirichletMixed { .. } => "dirichlet_mixed",
            CheckSpec::LevineWeinberger { .. } => "levine_weinberger",
            CheckSpec::Monotonicity { .. } => "monotonicity",
            CheckSpec::Identity => "identity",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub domain: Domain,
    pub k_max: usize,
    pub levels: usize,
    /// Kinds whose spectra are written out.
    pub spectra: Vec<BoundaryKind>,
    pub checks: Vec<CheckSpec>,
    /// Default output directory, used when none is given on the command line.
    pub output: Option<PathBuf>,
}

/// Command-line values that take precedence over the scenario file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub levels: Option<usize>,
    pub k_max: Option<usize>,
}

pub fn parse_kind(s: &str) -> Option<BoundaryKind> {
    match s {
        "d" | "dirichlet" => Some(BoundaryKind::Dirichlet),
        "n" | "neumann" => Some(BoundaryKind::Neumann),
        "mixed" => Some(BoundaryKind::Mixed),
        _ => None,
    }
}

fn count(v: &Value, at: &Pointer) -> Result<usize, SchemaError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| at.error("expected a non-negative integer"))
}

fn parse_check(v: &Value, at: &Pointer) -> Result<CheckSpec, SchemaError> {
    let obj = object(v, at)?;
    let kind = string(field(obj, "type", at)?, &at.key("type"))?;
    let shift = |obj: &serde_json::Map<String, Value>| -> Result<Option<usize>, SchemaError> {
        only_keys(obj, &["type", "shift"], at)?;
        match obj.get("shift") {
            None => Ok(None),
            Some(s) => {
                let n = count(s, &at.key("shift"))?;
                if n == 0 {
                    return Err(at.key("shift").error("shift must be at least 1"));
                }
                Ok(Some(n))
            }
        }
    };
    Ok(match kind {
        "chain" | "neumann_mixed" | "identity" => {
            only_keys(obj, &["type"], at)?;
            match kind {
                "chain" => CheckSpec::Chain,
                "neumann_mixed" => CheckSpec::NeumannMixed,
                _ => CheckSpec::Identity,
            }
        }
        "dirichlet_mixed" => CheckSpec::DirichletMixed { shift: shift(obj)? },
        "levine_weinberger" => CheckSpec::LevineWeinberger { shift: shift(obj)? },
        "monotonicity" => {
            only_keys(obj, &["type", "shrink"], at)?;
            let sat = at.key("shrink");
            let shrink = match obj.get("shrink") {
                None => 0.5,
                Some(s) => number(s, &sat)?,
            };
            if !(shrink > 0.0 && shrink < 1.0) {
                return Err(sat.error(format!("shrink must lie in (0, 1), got {shrink}")));
            }
            CheckSpec::Monotonicity { shrink }
        }
        other => {
            return Err(at.key("type").error(format!(
                "unknown check {other:?}, expected one of chain, neumann_mixed, dirichlet_mixed, \
                 levine_weinberger, monotonicity, identity"
            )))
        }
    })
}

const KEYS: [&str; 8] = [
    "name",
    "description",
    "domain",
    "k_max",
    "levels",
    "spectra",
    "checks",
    "output",
];

/// Parses a scenario and applies `overrides`, then validates it.
pub fn parse_scenario(text: &str, overrides: Overrides) -> Result<Scenario, RunError> {
    let root = Pointer::root();
    let v: Value =
        serde_json::from_str(text).map_err(|e| root.error(format!("invalid JSON: {e}")))?;
    let obj = object(&v, &root)?;
    only_keys(obj, &KEYS, &root)?;
    let name = string(field(obj, "name", &root)?, &root.key("name"))?.to_string();
    let description = match obj.get("description") {
        None => None,
        Some(d) => Some(string(d, &root.key("description"))?.to_string()),
    };
    let domain = parse_domain(field(obj, "domain", &root)?, &root.key("domain"))?;
    let k_max = match overrides.k_max {
        Some(k) => k,
        None => count(field(obj, "k_max", &root)?, &root.key("k_max"))?,
    };
    let levels = match (overrides.levels, obj.get("levels")) {
        (Some(l), _) => l,
        (None, Some(l)) => count(l, &root.key("levels"))?,
        (None, None) => DEFAULT_LEVELS,
    };
    let mut spectra = Vec::new();
    if let Some(s) = obj.get("spectra") {
        let sat = root.key("spectra");
        for (i, k) in array(s, &sat)?.iter().enumerate() {
            let kat = sat.index(i);
            let name = string(k, &kat)?;
            let kind = parse_kind(name).ok_or_else(|| {
                kat.error(format!(
                    "expected dirichlet, neumann or mixed, got {name:?}"
                ))
            })?;
            if !spectra.contains(&kind) {
                spectra.push(kind);
            }
        }
    }
    let cat = root.key("checks");
    let checks = match obj.get("checks") {
        None => Vec::new(),
        Some(c) => array(c, &cat)?
            .iter()
            .enumerate()
            .map(|(i, c)| parse_check(c, &cat.index(i)))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let output = match obj.get("output") {
        None => None,
        Some(o) => Some(PathBuf::from(string(o, &root.key("output"))?)),
    };
    let scenario = Scenario {
        name,
        description,
        domain,
        k_max,
        levels,
        spectra,
        checks,
        output,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path, overrides: Overrides) -> Result<Scenario, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    parse_scenario(&text, overrides)
}

fn prerequisite(at: &Pointer, source: speclab_core::geometry::GeometryError) -> RunError {
    RunError::Prerequisite {
        pointer: at.as_str().to_string(),
        source,
    }
}

impl Scenario {
    pub fn polygon(&self) -> Option<&PolygonDomain> {
        match &self.domain {
            Domain::Polygon(p) => Some(p),
            Domain::Box(_) => None,
        }
    }

    /// Checks every prerequisite that can be decided without computing a
    /// spectrum.
    pub fn validate(&self) -> Result<(), RunError> {
        let root = Pointer::root();
        if self.k_max < 1 {
            return Err(root.key("k_max").error("k_max must be at least 1").into());
        }
        if self.polygon().is_some() && self.levels < 2 {
            return Err(root
                .key("levels")
                .error(format!(
                    "FEM extrapolation needs at least 2 levels, got {}",
                    self.levels
                ))
                .into());
        }
        if self.spectra.is_empty() && self.checks.is_empty() {
            return Err(root
                .key("checks")
                .error("nothing to compute: no spectra and no checks")
                .into());
        }
        if self.spectra.contains(&BoundaryKind::Mixed) {
            self.domain
                .validate_mixed()
                .map_err(|e| prerequisite(&root.key("spectra"), e))?;
        }
        let cat = root.key("checks");
        for (i, check) in self.checks.iter().enumerate() {
            let at = cat.index(i);
            let mixed = || {
                self.domain
                    .validate_mixed()
                    .map_err(|e| prerequisite(&at, e))
            };
            let convex = || {
                if self.domain.is_convex() {
                    Ok(())
                } else {
                    Err(prerequisite(
                        &at,
                        speclab_core::geometry::GeometryError::NotConvex,
                    ))
                }
            };
            match *check {
                CheckSpec::Chain | CheckSpec::NeumannMixed => mixed()?,
                CheckSpec::DirichletMixed { shift } => {
                    mixed()?;
                    if shift.is_none() {
                        convex()?;
                    }
                }
                CheckSpec::LevineWeinberger { shift } => {
                    if shift.is_none() {
                        convex()?;
                    }
                }
                CheckSpec::Monotonicity { shrink } => {
                    let Some(p) = self.polygon() else {
                        return Err(at
                            .key("type")
                            .error("monotonicity needs a polygon domain")
                            .into());
                    };
                    mixed()?;
                    refine_partition(p, Label::Dirichlet, shrink)
                        .map_err(|e| prerequisite(&at, e))?;
                }
                CheckSpec::Identity => {
                    let Some(p) = self.polygon() else {
                        return Err(at
                            .key("type")
                            .error("identity needs a polygon domain")
                            .into());
                    };
                    convex()?;
                    // The bubble has one linear factor per edge and extras up to degree 2.
                    if p.len() + 2 > MAX_DEGREE {
                        return Err(at
                            .error(format!(
                                "identity on a {}-gon needs polynomial degree {}, at most {MAX_DEGREE} supported",
                                p.len(),
                                p.len() + 2
                            ))
                            .into());
                    }
                }
            }
        }
        Ok(())
    }
}
