//! Spectra with uncertainties and uncertainty-aware checks of eigenvalue
//! inequalities.
//!
//! A row compares `lhs ≤ rhs` through `margin = rhs − lhs` and the combined
//! uncertainty `U` (the sum of both uncertainties):
//!
//! * `HOLDS` if `margin > U`,
//! * `VIOLATED` if `margin < −U`,
//! * `EQUALITY_WITHIN_TOL` if `|margin| ≤ U` and either `U > 0` or
//!   `margin = 0` exactly,
//! * `INCONCLUSIVE` if a value is missing or not finite.
//!
//! Analytic spectra on π-sided boxes carry exact values and zero uncertainty,
//! so their equalities are decided exactly.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::analytic::{separable_spectrum, Quarters};
use crate::assembly::{assemble, AssemblyError, BoundaryCondition};
use crate::eigensolve::{smallest_eigs_with, EigenError, EigenOptions};
use crate::geometry::{
    is_convex, BoundaryKind, BoxDomain, GeometryError, Label, Point, PolygonDomain,
};
use crate::meshing::{refine, triangulate, Mesh, MeshError};

/// Relative floor on every extrapolation uncertainty.
pub const UNCERTAINTY_FLOOR: f64 = 1e-6;
/// Assumed convergence order of P1 eigenvalues.
pub const ASSUMED_ORDER: f64 = 2.0;
/// Observed orders below this mark the extrapolation as unsafe.
pub const MIN_SAFE_ORDER: f64 = 1.5;
/// Deepest mesh level the automatic hierarchy will build.
pub const MAX_BASE_LEVEL: usize = 6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum InequalityError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("extrapolation needs at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("{count} eigenvalues need more than {needed} free unknowns on the coarsest mesh")]
    CoarsestTooSmall { count: usize, needed: usize },
    #[error("spectra belong to different domains")]
    DomainMismatch,
    #[error("domain is not convex")]
    NotConvex,
    #[error("spectrum `{which}` has {have} values, need {needed}")]
    InsufficientValues {
        which: &'static str,
        needed: usize,
        have: usize,
    },
}

/// Geometry of a domain without its boundary labels.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainShape {
    Polygon(Vec<Point>),
    Box(Vec<f64>),
}

impl DomainShape {
    pub fn is_convex(&self) -> bool {
        match self {
            DomainShape::Polygon(v) => {
                let labels = alloc::vec![Label::Dirichlet; v.len()];
                crate::geometry::build_polygon(v, &labels)
                    .map(|p| is_convex(&p))
                    .unwrap_or(false)
            }
            DomainShape::Box(_) => true,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainShape::Polygon(_) => 2,
            DomainShape::Box(l) => l.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Analytic,
    /// Richardson-extrapolated from these mesh levels.
    FemExtrapolated {
        levels: Vec<usize>,
    },
}

/// Per-level raw values and convergence diagnostics of a FEM spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct FemDiagnostics {
    pub mesh_levels: Vec<usize>,
    pub free_dofs: Vec<usize>,
    /// `raw[level][k]`, ascending in `k`.
    pub raw: Vec<Vec<f64>>,
    pub observed_orders: Vec<Option<f64>>,
    pub non_monotone: Vec<bool>,
    pub inflated: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub shape: DomainShape,
    pub kind: BoundaryKind,
    /// Effective labels (per polygon segment, or per box face as lo, hi pairs).
    pub labels: Vec<Label>,
    pub values: Vec<f64>,
    pub uncertainties: Vec<f64>,
    pub exact: Option<Vec<Quarters>>,
    pub provenance: Provenance,
    pub diagnostics: Option<FemDiagnostics>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact spectrum of a box under `kind`.
    pub fn analytic(
        domain: &BoxDomain,
        kind: BoundaryKind,
        count: usize,
    ) -> Result<Self, InequalityError> {
        if kind == BoundaryKind::Mixed {
            domain.validate_mixed()?;
        }
        let resolved = domain.resolved(kind);
        let s = separable_spectrum(&resolved, count);
        Ok(Spectrum {
            shape: DomainShape::Box(domain.lengths().to_vec()),
            kind,
            labels: resolved.faces().iter().flat_map(|&(a, b)| [a, b]).collect(),
            uncertainties: alloc::vec![0.0; s.values.len()],
            values: s.values,
            exact: s.exact,
            provenance: Provenance::Analytic,
            diagnostics: None,
        })
    }
}

/// Result of Richardson extrapolation over a refinement sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub uncertainty: f64,
    /// `log2((v0 − v1) / (v1 − v2))` over the three finest levels.
    pub observed_order: Option<f64>,
    /// Successive differences change sign or fail to contract.
    pub non_monotone: bool,
    /// Uncertainty was inflated to the last level difference, because the
    /// sequence is non-monotone or converges slower than [`MIN_SAFE_ORDER`].
    pub inflated: bool,
}

/// Extrapolates values from meshes whose size halves at every step, using
/// the two finest levels and the assumed rate `order`.
///
/// The uncertainty is `max(|value − fine|, 1e-6 |value|)`, raised to
/// `|fine − coarse|` when the levels are not in the asymptotic regime.
pub fn richardson(values: &[f64], order: f64) -> Result<Extrapolation, InequalityError> {
    let n = values.len();
    if n < 2 {
        return Err(InequalityError::TooFewLevels(n));
    }
    let fine = values[n - 1];
    let coarse = values[n - 2];
    let r = libm::pow(2.0, order);
    let value = (r * fine - coarse) / (r - 1.0);
    let mut uncertainty = (value - fine).abs().max(UNCERTAINTY_FLOOR * value.abs());

    let diffs: Vec<f64> = values.windows(2).map(|w| w[0] - w[1]).collect();
    let mut non_monotone = false;
    for w in diffs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0) || (b != 0.0 && b.abs() >= a.abs()) {
            non_monotone = true;
        }
    }
    let observed_order = if n >= 3 {
        let q = diffs[n - 3] / diffs[n - 2];
        (q > 0.0 && q.is_finite()).then(|| libm::log2(q))
    } else {
        None
    };
    let inflated = non_monotone || observed_order.is_some_and(|q| q < MIN_SAFE_ORDER);
    if inflated {
        uncertainty = uncertainty.max((fine - coarse).abs());
    }
    Ok(Extrapolation {
        value,
        uncertainty,
        observed_order,
        non_monotone,
        inflated,
    })
}

/// Nested uniform refinements of one polygon, shared by every boundary kind
/// that enters a comparison.
#[derive(Clone, Debug)]
pub struct MeshHierarchy {
    domain: PolygonDomain,
    meshes: Vec<Mesh>,
}

impl MeshHierarchy {
    /// Meshes at levels `base_level ..= base_level + levels − 1`.
    pub fn new(
        domain: &PolygonDomain,
        base_level: usize,
        levels: usize,
    ) -> Result<Self, InequalityError> {
        if levels < 2 {
            return Err(InequalityError::TooFewLevels(levels));
        }
        let mut mesh = triangulate(domain)?;
        for _ in 0..base_level {
            mesh = refine(&mesh);
        }
        let mut meshes = alloc::vec![mesh];
        for _ in 1..levels {
            let next = refine(meshes.last().unwrap());
            meshes.push(next);
        }
        Ok(MeshHierarchy {
            domain: domain.clone(),
            meshes,
        })
    }

    /// Starts at the first level whose interior node count exceeds
    /// `4 * count`, so that every boundary kind has enough unknowns.
    pub fn for_count(
        domain: &PolygonDomain,
        count: usize,
        levels: usize,
    ) -> Result<Self, InequalityError> {
        let mut mesh = triangulate(domain)?;
        let mut base = 0;
        loop {
            let interior = interior_nodes(&mesh);
            if interior > 4 * count {
                break;
            }
            if base == MAX_BASE_LEVEL {
                return Err(InequalityError::CoarsestTooSmall {
                    count,
                    needed: 4 * count + 1,
                });
            }
            mesh = refine(&mesh);
            base += 1;
        }
        Self::new(domain, base, levels)
    }

    pub fn domain(&self) -> &PolygonDomain {
        &self.domain
    }

    pub fn meshes(&self) -> &[Mesh] {
        &self.meshes
    }

    pub fn levels(&self) -> Vec<usize> {
        self.meshes.iter().map(|m| m.level).collect()
    }
}

fn interior_nodes(mesh: &Mesh) -> usize {
    let mut on_boundary = alloc::vec![false; mesh.nodes.len()];
    for e in &mesh.boundary_edges {
        on_boundary[e.nodes[0]] = true;
        on_boundary[e.nodes[1]] = true;
    }
    on_boundary.iter().filter(|b| !**b).count()
}

fn condition(
    domain: &PolygonDomain,
    kind: BoundaryKind,
) -> Result<BoundaryCondition, InequalityError> {
    Ok(match kind {
        BoundaryKind::Dirichlet => BoundaryCondition::PureDirichlet,
        BoundaryKind::Neumann => BoundaryCondition::PureNeumann,
        BoundaryKind::Mixed => {
            domain.validate_mixed()?;
            BoundaryCondition::Mixed(domain.labels())
        }
    })
}

/// Raw FEM eigenvalues of one mesh. Problems without constrained nodes are
/// solved with `K + M` and shifted back.
pub fn fem_eigenvalues(
    mesh: &Mesh,
    bc: &BoundaryCondition,
    count: usize,
) -> Result<(Vec<f64>, usize), InequalityError> {
    let a = assemble(mesh, bc)?;
    let free = a.dofs.free_count();
    let shift = if a.dofs.constrained_nodes().is_empty() {
        1.0
    } else {
        0.0
    };
    let opts = EigenOptions {
        shift,
        ..Default::default()
    };
    let r = smallest_eigs_with(&a.stiffness, &a.mass, count, &opts)?;
    Ok((r.eigenvalues, free))
}

/// Extrapolated spectrum over a prepared hierarchy.
pub fn fem_spectrum_on(
    hierarchy: &MeshHierarchy,
    kind: BoundaryKind,
    count: usize,
) -> Result<Spectrum, InequalityError> {
    let domain = hierarchy.domain();
    let bc = condition(domain, kind)?;
    let mut raw = Vec::new();
    let mut free_dofs = Vec::new();
    for mesh in hierarchy.meshes() {
        let (vals, free) = fem_eigenvalues(mesh, &bc, count)?;
        raw.push(vals);
        free_dofs.push(free);
    }
    let mut rows = Vec::with_capacity(count);
    let mut observed_orders = Vec::with_capacity(count);
    let mut non_monotone = Vec::with_capacity(count);
    let mut inflated = Vec::with_capacity(count);
    for k in 0..count {
        let seq: Vec<f64> = raw.iter().map(|r| r[k]).collect();
        let e = richardson(&seq, ASSUMED_ORDER)?;
        rows.push((e.value, e.uncertainty));
        observed_orders.push(e.observed_order);
        non_monotone.push(e.non_monotone);
        inflated.push(e.inflated);
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Spectrum {
        shape: DomainShape::Polygon(domain.vertices().to_vec()),
        kind,
        labels: domain
            .segments()
            .iter()
            .map(|s| kind.resolve(s.label))
            .collect(),
        values: rows.iter().map(|r| r.0).collect(),
        uncertainties: rows.iter().map(|r| r.1).collect(),
        exact: None,
        provenance: Provenance::FemExtrapolated {
            levels: hierarchy.levels(),
        },
        diagnostics: Some(FemDiagnostics {
            mesh_levels: hierarchy.levels(),
            free_dofs,
            raw,
            observed_orders,
            non_monotone,
            inflated,
        }),
    })
}

/// Assembles and solves on `levels` uniform refinements and extrapolates
/// every eigenvalue.
pub fn fem_spectrum(
    domain: &PolygonDomain,
    kind: BoundaryKind,
    count: usize,
    levels: usize,
) -> Result<Spectrum, InequalityError> {
    let h = MeshHierarchy::for_count(domain, count, levels)?;
    fem_spectrum_on(&h, kind, count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    EqualityWithinTol,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::EqualityWithinTol => "EQUALITY_WITHIN_TOL",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn verdict(margin: f64, uncertainty: f64) -> Verdict {
    if !margin.is_finite() || !uncertainty.is_finite() || uncertainty < 0.0 {
        Verdict::Inconclusive
    } else if margin > uncertainty {
        Verdict::Holds
    } else if margin < -uncertainty {
        Verdict::Violated
    } else if uncertainty > 0.0 || margin == 0.0 {
        Verdict::EqualityWithinTol
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub claim: String,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub uncertainty: f64,
    pub verdict: Verdict,
    /// Exact sides when both spectra are exact.
    pub exact: Option<(Quarters, Quarters)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub claim: String,
    /// The theorem's hypotheses hold for this configuration.
    pub hypothesis_satisfied: bool,
    /// Beyond-theorem probe; violations are expected and informative.
    pub probe: bool,
    /// The claim is a strict inequality.
    pub strict: bool,
    pub rows: Vec<ReportRow>,
    pub overall: Verdict,
}

impl InequalityReport {
    fn new(
        claim: String,
        hypothesis_satisfied: bool,
        probe: bool,
        strict: bool,
        rows: Vec<ReportRow>,
    ) -> Self {
        let overall = overall(&rows, strict);
        InequalityReport {
            claim,
            hypothesis_satisfied,
            probe,
            strict,
            rows,
            overall,
        }
    }

    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Violated)
            .count()
    }

    /// Every row holds with margin beyond the uncertainty.
    pub fn strict_holds(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Holds)
    }

    /// A violation here contradicts a theorem whose hypotheses are met.
    pub fn is_theorem_failure(&self) -> bool {
        self.hypothesis_satisfied && !self.probe && self.overall == Verdict::Violated
    }
}

/// `VIOLATED` and `INCONCLUSIVE` rows dominate. A non-strict claim holds
/// when every row holds or is an equality, and is an equality when all rows
/// are; a strict claim needs every row to hold.
fn overall(rows: &[ReportRow], strict: bool) -> Verdict {
    let has = |v| rows.iter().any(|r| r.verdict == v);
    if has(Verdict::Violated) {
        Verdict::Violated
    } else if has(Verdict::Inconclusive) || rows.is_empty() {
        Verdict::Inconclusive
    } else if rows.iter().all(|r| r.verdict == Verdict::EqualityWithinTol)
        || (strict && has(Verdict::EqualityWithinTol))
    {
        Verdict::EqualityWithinTol
    } else {
        Verdict::Holds
    }
}

fn need(s: &Spectrum, which: &'static str, needed: usize) -> Result<(), InequalityError> {
    if s.len() < needed {
        Err(InequalityError::InsufficientValues {
            which,
            needed,
            have: s.len(),
        })
    } else {
        Ok(())
    }
}

fn same_domain(a: &Spectrum, b: &Spectrum) -> Result<(), InequalityError> {
    if a.shape == b.shape {
        Ok(())
    } else {
        Err(InequalityError::DomainMismatch)
    }
}

/// Rows `lhs[k + lhs_offset] ≤ rhs[k + rhs_offset]` for `k = 1..=k_max`
/// (one-based indices).
fn compare(
    claim: &str,
    lhs: &Spectrum,
    lhs_offset: usize,
    rhs: &Spectrum,
    rhs_offset: usize,
    k_max: usize,
) -> Vec<ReportRow> {
    (1..=k_max)
        .map(|k| {
            let i = k + lhs_offset - 1;
            let j = k + rhs_offset - 1;
            let (l, r) = (lhs.values[i], rhs.values[j]);
            let uncertainty = lhs.uncertainties[i] + rhs.uncertainties[j];
            let exact = match (&lhs.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some((a[i], b[j])),
                _ => None,
            };
            let margin = match exact {
                Some((a, b)) => (b.0 as f64 - a.0 as f64) / 4.0,
                None => r - l,
            };
            ReportRow {
                claim: String::from(claim),
                k,
                lhs: l,
                rhs: r,
                margin,
                uncertainty,
                verdict: verdict(margin, uncertainty),
                exact,
            }
        })
        .collect()
}

/// `μ_k ≤ λ_k^Γ ≤ λ_k` for `k ≤ k_max`.
pub fn check_chain(
    mu: &Spectrum,
    mixed: &Spectrum,
    dirichlet: &Spectrum,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    same_domain(mu, mixed)?;
    same_domain(mixed, dirichlet)?;
    need(mu, "neumann", k_max)?;
    need(mixed, "mixed", k_max)?;
    need(dirichlet, "dirichlet", k_max)?;
    let mut rows = compare("chain:neumann<=mixed", mu, 0, mixed, 0, k_max);
    rows.extend(compare(
        "chain:mixed<=dirichlet",
        mixed,
        0,
        dirichlet,
        0,
        k_max,
    ));
    Ok(InequalityReport::new(
        "chain".into(),
        true,
        false,
        false,
        rows,
    ))
}

/// `μ_{k+1} ≤ λ_k^Γ`, which is guaranteed when `dim S(Γ_N) ≥ 1`. With
/// `dim S(Γ_N) = 0` the rows are still produced and the report is marked as
/// having unsatisfied hypotheses.
pub fn check_neumann_mixed(
    mu: &Spectrum,
    mixed: &Spectrum,
    dim_s_n: usize,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    same_domain(mu, mixed)?;
    need(mu, "neumann", k_max + 1)?;
    need(mixed, "mixed", k_max)?;
    let rows = compare("neumann_mixed", mu, 1, mixed, 0, k_max);
    Ok(InequalityReport::new(
        "neumann_mixed".into(),
        dim_s_n >= 1,
        false,
        false,
        rows,
    ))
}

/// `λ^Γ_{k + dim S(Γ_D)} ≤ λ_k` on a convex domain.
pub fn check_dirichlet_mixed(
    mixed: &Spectrum,
    dirichlet: &Spectrum,
    dim_s_d: usize,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    if !mixed.shape.is_convex() {
        return Err(InequalityError::NotConvex);
    }
    shifted_mixed_dirichlet(
        "dirichlet_mixed".into(),
        mixed,
        dirichlet,
        dim_s_d,
        k_max,
        false,
    )
}

/// `λ^Γ_{k + shift} ≤ λ_k` with an arbitrary shift, reported as a probe.
pub fn probe_dirichlet_mixed(
    mixed: &Spectrum,
    dirichlet: &Spectrum,
    shift: usize,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    let claim = format!("dirichlet_mixed_probe_shift{shift}");
    shifted_mixed_dirichlet(claim, mixed, dirichlet, shift, k_max, true)
}

fn shifted_mixed_dirichlet(
    claim: String,
    mixed: &Spectrum,
    dirichlet: &Spectrum,
    shift: usize,
    k_max: usize,
    probe: bool,
) -> Result<InequalityReport, InequalityError> {
    same_domain(mixed, dirichlet)?;
    need(mixed, "mixed", k_max + shift)?;
    need(dirichlet, "dirichlet", k_max)?;
    let rows = compare(&claim, mixed, shift, dirichlet, 0, k_max);
    Ok(InequalityReport::new(claim, true, probe, false, rows))
}

/// `μ_{k+d} ≤ λ_k` on a convex domain of dimension `d`.
pub fn check_levine_weinberger(
    mu: &Spectrum,
    dirichlet: &Spectrum,
    d: usize,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    if !mu.shape.is_convex() {
        return Err(InequalityError::NotConvex);
    }
    shifted_neumann_dirichlet("levine_weinberger".into(), mu, dirichlet, d, k_max, false)
}

/// `μ_{k+shift} ≤ λ_k` beyond what is known to hold, reported as a probe.
pub fn probe_levine_weinberger(
    mu: &Spectrum,
    dirichlet: &Spectrum,
    shift: usize,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    let claim = format!("levine_weinberger_probe_shift{shift}");
    shifted_neumann_dirichlet(claim, mu, dirichlet, shift, k_max, true)
}

fn shifted_neumann_dirichlet(
    claim: String,
    mu: &Spectrum,
    dirichlet: &Spectrum,
    shift: usize,
    k_max: usize,
    probe: bool,
) -> Result<InequalityReport, InequalityError> {
    same_domain(mu, dirichlet)?;
    need(mu, "neumann", k_max + shift)?;
    need(dirichlet, "dirichlet", k_max)?;
    let rows = compare(&claim, mu, shift, dirichlet, 0, k_max);
    Ok(InequalityReport::new(claim, true, probe, false, rows))
}

/// Strict `λ_k^Γ < λ_k^{Γ'}` for Dirichlet parts `Γ ⊂ Γ'`.
pub fn check_monotonicity(
    mixed_small: &Spectrum,
    mixed_large: &Spectrum,
    k_max: usize,
) -> Result<InequalityReport, InequalityError> {
    same_domain(mixed_small, mixed_large)?;
    need(mixed_small, "smaller Dirichlet part", k_max)?;
    need(mixed_large, "larger Dirichlet part", k_max)?;
    let rows = compare("monotonicity", mixed_small, 0, mixed_large, 0, k_max);
    Ok(InequalityReport::new(
        "monotonicity".into(),
        true,
        false,
        true,
        rows,
    ))
}
