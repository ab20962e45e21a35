//! Runs a validated scenario: spectra first, then every check in order.

use std::time::Instant;

use speclab_core::geometry::{refine_partition, tangent_space_dim, BoundaryKind, Domain, Label};
use speclab_core::identity::{certify, standard_extras, IdentityCase, Region, CERTIFY_TOL};
use speclab_core::inequalities::{
    check_chain, check_dirichlet_mixed, check_levine_weinberger, check_monotonicity,
    check_neumann_mixed, fem_spectrum_on, probe_dirichlet_mixed, probe_levine_weinberger,
    InequalityReport, MeshHierarchy, Spectrum, Verdict,
};

use crate::error::RunError;
use crate::scenario::{CheckSpec, Scenario};

/// All boundary kinds in output order.
pub const KINDS: [BoundaryKind; 3] = [
    BoundaryKind::Dirichlet,
    BoundaryKind::Neumann,
    BoundaryKind::Mixed,
];

/// Identity residuals over every extra and index triple on one region.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub domain: String,
    /// The identity is only claimed on convex polygons.
    pub hypothesis_satisfied: bool,
    pub cases: Vec<IdentityCase>,
    pub worst_relative: f64,
    pub overall: Verdict,
}

impl IdentityReport {
    pub fn new(domain: String, region: Region<'_>) -> Result<Self, RunError> {
        let cases = certify(region, &standard_extras())?;
        let worst_relative = cases
            .iter()
            .map(|c| c.result.relative())
            .fold(0.0, f64::max);
        let overall = if worst_relative < CERTIFY_TOL {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Ok(IdentityReport {
            domain,
            hypothesis_satisfied: matches!(region, Region::Polygon(_)),
            cases,
            worst_relative,
            overall,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckBody {
    Inequality(InequalityReport),
    Identity(IdentityReport),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    /// Unique within the scenario; used as the report file stem.
    pub id: String,
    pub spec: CheckSpec,
    pub body: CheckBody,
    pub seconds: f64,
}

impl CheckResult {
    pub fn claim(&self) -> &str {
        match &self.body {
            CheckBody::Inequality(r) => &r.claim,
            CheckBody::Identity(_) => "identity",
        }
    }

    pub fn hypothesis_satisfied(&self) -> bool {
        match &self.body {
            CheckBody::Inequality(r) => r.hypothesis_satisfied,
            CheckBody::Identity(r) => r.hypothesis_satisfied,
        }
    }

    pub fn probe(&self) -> bool {
        match &self.body {
            CheckBody::Inequality(r) => r.probe,
            CheckBody::Identity(_) => false,
        }
    }

    pub fn overall(&self) -> Verdict {
        match &self.body {
            CheckBody::Inequality(r) => r.overall,
            CheckBody::Identity(r) => r.overall,
        }
    }

    /// A violation of a theorem whose hypotheses hold.
    pub fn is_theorem_failure(&self) -> bool {
        self.hypothesis_satisfied() && !self.probe() && self.overall() == Verdict::Violated
    }

    /// `theorem`, `probe` or `hypothesis_unsatisfied`.
    pub fn role(&self) -> &'static str {
        if self.probe() {
            "probe"
        } else if self.hypothesis_satisfied() {
            "theorem"
        } else {
            "hypothesis_unsatisfied"
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub scenario: String,
    /// Spectra by kind, in [`KINDS`] order.
    pub spectra: Vec<Spectrum>,
    /// Kinds the scenario asked to report.
    pub requested: Vec<BoundaryKind>,
    pub checks: Vec<CheckResult>,
    /// Named phases and their wall-clock durations in seconds.
    pub timings: Vec<(String, f64)>,
}

impl Outcome {
    pub fn spectrum(&self, kind: BoundaryKind) -> Option<&Spectrum> {
        self.spectra.iter().find(|s| s.kind == kind)
    }

    pub fn has_theorem_failure(&self) -> bool {
        self.checks.iter().any(CheckResult::is_theorem_failure)
    }
}

fn dim_s(domain: &Domain, part: Label) -> Result<usize, RunError> {
    tangent_space_dim(domain, part)
        .map(|t| t.dim)
        .map_err(|e| RunError::Inequality(e.into()))
}

/// Number of eigenvalues each kind must supply, indexed like [`KINDS`].
fn needs(s: &Scenario) -> Result<[usize; 3], RunError> {
    let mut n = [0usize; 3];
    let k = s.k_max;
    let mut need = |kind: BoundaryKind, count: usize| {
        let i = KINDS.iter().position(|&x| x == kind).unwrap();
        n[i] = n[i].max(count);
    };
    for &kind in &s.spectra {
        need(kind, k);
    }
    for check in &s.checks {
        match *check {
            CheckSpec::Chain => {
                for kind in KINDS {
                    need(kind, k);
                }
            }
            CheckSpec::NeumannMixed => {
                need(BoundaryKind::Neumann, k + 1);
                need(BoundaryKind::Mixed, k);
            }
            CheckSpec::DirichletMixed { shift } => {
                let shift = match shift {
                    Some(s) => s,
                    None => dim_s(&s.domain, Label::Dirichlet)?,
                };
                need(BoundaryKind::Mixed, k + shift);
                need(BoundaryKind::Dirichlet, k);
            }
            CheckSpec::LevineWeinberger { shift } => {
                need(BoundaryKind::Neumann, k + shift.unwrap_or(s.domain.dim()));
                need(BoundaryKind::Dirichlet, k);
            }
            CheckSpec::Monotonicity { .. } | CheckSpec::Identity => {}
        }
    }
    Ok(n)
}

fn compute_spectra(s: &Scenario) -> Result<Vec<Spectrum>, RunError> {
    let counts = needs(s)?;
    let mut out = Vec::new();
    match &s.domain {
        Domain::Box(b) => {
            for (kind, &count) in KINDS.iter().zip(&counts) {
                if count > 0 {
                    out.push(Spectrum::analytic(b, *kind, count)?);
                }
            }
        }
        Domain::Polygon(p) => {
            let max = counts.iter().copied().max().unwrap_or(0);
            if max > 0 {
                let h = MeshHierarchy::for_count(p, max, s.levels)?;
                for (kind, &count) in KINDS.iter().zip(&counts) {
                    if count > 0 {
                        out.push(fem_spectrum_on(&h, *kind, count)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn spectrum(spectra: &[Spectrum], kind: BoundaryKind) -> &Spectrum {
    spectra
        .iter()
        .find(|s| s.kind == kind)
        .expect("spectrum computed for every kind a check uses")
}

fn run_check(s: &Scenario, spectra: &[Spectrum], check: CheckSpec) -> Result<CheckBody, RunError> {
    use BoundaryKind::{Dirichlet, Mixed, Neumann};
    let k = s.k_max;
    let sp = |kind| spectrum(spectra, kind);
    let report = match check {
        CheckSpec::Chain => check_chain(sp(Neumann), sp(Mixed), sp(Dirichlet), k)?,
        CheckSpec::NeumannMixed => {
            check_neumann_mixed(sp(Neumann), sp(Mixed), dim_s(&s.domain, Label::Neumann)?, k)?
        }
        CheckSpec::DirichletMixed { shift: None } => check_dirichlet_mixed(
            sp(Mixed),
            sp(Dirichlet),
            dim_s(&s.domain, Label::Dirichlet)?,
            k,
        )?,
        CheckSpec::DirichletMixed { shift: Some(shift) } => {
            probe_dirichlet_mixed(sp(Mixed), sp(Dirichlet), shift, k)?
        }
        CheckSpec::LevineWeinberger { shift: None } => {
            check_levine_weinberger(sp(Neumann), sp(Dirichlet), s.domain.dim(), k)?
        }
        CheckSpec::LevineWeinberger { shift: Some(shift) } => {
            probe_levine_weinberger(sp(Neumann), sp(Dirichlet), shift, k)?
        }
        CheckSpec::Monotonicity { shrink } => {
            let p = s.polygon().expect("validated: monotonicity on a polygon");
            let seg = p
                .segments()
                .iter()
                .position(|g| g.label == Label::Dirichlet)
                .expect("validated: Dirichlet part present");
            let large = p
                .split_segment(seg, shrink)
                .map_err(|e| RunError::Inequality(e.into()))?;
            let small = refine_partition(p, Label::Dirichlet, shrink)
                .map_err(|e| RunError::Inequality(e.into()))?;
            let hl = MeshHierarchy::for_count(&large, k, s.levels)?;
            let base = hl.levels()[0];
            let hs = MeshHierarchy::new(&small, base, s.levels)?;
            let l = fem_spectrum_on(&hl, Mixed, k)?;
            let sm = fem_spectrum_on(&hs, Mixed, k)?;
            check_monotonicity(&sm, &l, k)?
        }
        CheckSpec::Identity => {
            let p = s.polygon().expect("validated: identity on a polygon");
            return Ok(CheckBody::Identity(IdentityReport::new(
                s.name.clone(),
                Region::Polygon(p),
            )?));
        }
    };
    Ok(CheckBody::Inequality(report))
}

fn check_id(spec: &CheckSpec, taken: &[String]) -> String {
    let base = match *spec {
        CheckSpec::DirichletMixed { shift: Some(s) } => format!("dirichlet_mixed_probe_shift{s}"),
        CheckSpec::LevineWeinberger { shift: Some(s) } => {
            format!("levine_weinberger_probe_shift{s}")
        }
        _ => spec.type_name().to_string(),
    };
    let mut id = base.clone();
    let mut n = 2;
    while taken.contains(&id) {
        id = format!("{base}_{n}");
        n += 1;
    }
    id
}

/// Runs the scenario sequentially. The scenario must have passed
/// [`Scenario::validate`].
pub fn run(s: &Scenario) -> Result<Outcome, RunError> {
    let mut timings = Vec::new();
    let start = Instant::now();
    let spectra = compute_spectra(s)?;
    timings.push(("spectra".to_string(), start.elapsed().as_secs_f64()));
    let mut checks: Vec<CheckResult> = Vec::new();
    for &spec in &s.checks {
        let start = Instant::now();
        let body = run_check(s, &spectra, spec)?;
        let taken: Vec<String> = checks.iter().map(|c| c.id.clone()).collect();
        let id = check_id(&spec, &taken);
        let seconds = start.elapsed().as_secs_f64();
        timings.push((id.clone(), seconds));
        checks.push(CheckResult {
            id,
            spec,
            body,
            seconds,
        });
    }
    Ok(Outcome {
        scenario: s.name.clone(),
        spectra,
        requested: s.spectra.clone(),
        checks,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::exit_status;

    fn outcome(hypothesis_satisfied: bool, probe: bool, overall: Verdict) -> Outcome {
        let report = InequalityReport {
            claim: "c".into(),
            hypothesis_satisfied,
            probe,
            strict: false,
            rows: Vec::new(),
            overall,
        };
        Outcome {
            scenario: "s".into(),
            spectra: Vec::new(),
            requested: Vec::new(),
            checks: vec![CheckResult {
                id: "c".into(),
                spec: CheckSpec::Chain,
                body: CheckBody::Inequality(report),
                seconds: 0.0,
            }],
            timings: Vec::new(),
        }
    }

    #[test]
    fn only_theorem_violations_fail_the_run() {
        assert_eq!(exit_status(&outcome(true, false, Verdict::Violated)), 2);
        assert_eq!(exit_status(&outcome(false, false, Verdict::Violated)), 0);
        assert_eq!(exit_status(&outcome(true, true, Verdict::Violated)), 0);
        assert_eq!(exit_status(&outcome(true, false, Verdict::Inconclusive)), 0);
        assert_eq!(
            outcome(false, false, Verdict::Violated).checks[0].role(),
            "hypothesis_unsatisfied"
        );
    }

    #[test]
    fn repeated_checks_get_distinct_ids() {
        let taken = vec!["chain".to_string(), "chain_2".to_string()];
        assert_eq!(check_id(&CheckSpec::Chain, &taken), "chain_3");
        assert_eq!(
            check_id(&CheckSpec::DirichletMixed { shift: Some(2) }, &[]),
            "dirichlet_mixed_probe_shift2"
        );
    }
}
