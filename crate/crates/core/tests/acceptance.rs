//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    determinant_roots, disk_product_integral, pi_square, polygon, random_pair, regular, rng,
};
use rand::Rng;
use speclab_core::analytic::Quarters;
use speclab_core::eigensolve::smallest_eigs;
use speclab_core::geometry::{
    tangent_space_dim, BoundaryKind, BoxDomain, Domain, Label, PolygonDomain,
};
use speclab_core::identity::{
    bubble, identity_residual, standard_extras, Axis, PolynomialField, Region,
};
use speclab_core::inequalities::{
    check_chain, check_dirichlet_mixed, check_levine_weinberger, check_monotonicity,
    check_neumann_mixed, fem_spectrum_on, probe_dirichlet_mixed, MeshHierarchy, Spectrum, Verdict,
};
use speclab_core::linalg::SquareMatrix;
use speclab_core::sparse::SymmetricSparseMatrix;

use Label::{Dirichlet as D, Neumann as N};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exact_of(s: &Spectrum, k: usize) -> Option<Quarters> {
    s.exact.as_ref().map(|e| e[k - 1])
}

fn square_counterexample() -> Outcome {
    let start = Instant::now();
    let faces = [(N, N), (D, N)];
    let b = BoxDomain::pi_box(&faces).unwrap();
    let mixed = Spectrum::analytic(&b, BoundaryKind::Mixed, 1).map_err(|e| e.to_string())?;
    let mu = Spectrum::analytic(&b, BoundaryKind::Neumann, 2).map_err(|e| e.to_string())?;
    ensure(
        exact_of(&mixed, 1) == Some(Quarters(1)),
        "analytic lambda_1^G != 1/4",
    )?;
    ensure(exact_of(&mu, 2) == Some(Quarters(4)), "analytic mu_2 != 1")?;

    let dom = pi_square(&[D, N, N, N]);
    let h = MeshHierarchy::for_count(&dom, 2, 4).map_err(|e| e.to_string())?;
    let fm = fem_spectrum_on(&h, BoundaryKind::Mixed, 1).map_err(|e| e.to_string())?;
    let fn_ = fem_spectrum_on(&h, BoundaryKind::Neumann, 2).map_err(|e| e.to_string())?;
    let e1 = rel(fm.values[0], 0.25);
    let e2 = rel(fn_.values[1], 1.0);
    ensure(
        e1 < 1e-3,
        format!("FEM lambda_1^G = {} (rel err {e1:e})", fm.values[0]),
    )?;
    ensure(
        e2 < 1e-3,
        format!("FEM mu_2 = {} (rel err {e2:e})", fn_.values[1]),
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!(
        "exact 1/4 and 1/1; FEM lambda_1^G={:.8} (rel {e1:.1e}), mu_2={:.8} (rel {e2:.1e}), {:.1?}",
        fm.values[0], fn_.values[1], t
    ))
}

fn equality_case() -> Outcome {
    let faces = [(N, N), (D, D)];
    let b = BoxDomain::pi_box(&faces).unwrap();
    let mixed = Spectrum::analytic(&b, BoundaryKind::Mixed, 1).map_err(|e| e.to_string())?;
    let mu = Spectrum::analytic(&b, BoundaryKind::Neumann, 2).map_err(|e| e.to_string())?;
    let r = check_neumann_mixed(&mu, &mixed, 1, 1).map_err(|e| e.to_string())?;
    let row = &r.rows[0];
    ensure(
        row.exact == Some((Quarters(4), Quarters(4))),
        "analytic sides not exactly 1",
    )?;
    ensure(
        row.margin == 0.0 && row.uncertainty == 0.0 && row.verdict == Verdict::EqualityWithinTol,
        format!("analytic row {row:?}"),
    )?;

    let dom = pi_square(&[D, N, D, N]);
    let h = MeshHierarchy::for_count(&dom, 2, 4).map_err(|e| e.to_string())?;
    let fm = fem_spectrum_on(&h, BoundaryKind::Mixed, 1).map_err(|e| e.to_string())?;
    let fn_ = fem_spectrum_on(&h, BoundaryKind::Neumann, 2).map_err(|e| e.to_string())?;
    let r = check_neumann_mixed(&fn_, &fm, 1, 1).map_err(|e| e.to_string())?;
    let row = &r.rows[0];
    ensure(
        row.verdict == Verdict::EqualityWithinTol,
        format!("FEM verdict {}", row.verdict),
    )?;
    ensure(
        row.margin.abs() < 5e-3,
        format!("FEM |margin| = {:e}", row.margin.abs()),
    )?;
    Ok(format!(
        "exact margin 0; FEM EQUALITY_WITHIN_TOL with margin {:.2e}, uncertainty {:.2e}",
        row.margin, row.uncertainty
    ))
}

fn cube_example() -> Outcome {
    let faces = [(D, D), (D, D), (N, N)];
    let b = BoxDomain::pi_box(&faces).unwrap();
    let mixed = Spectrum::analytic(&b, BoundaryKind::Mixed, 3).map_err(|e| e.to_string())?;
    let dir = Spectrum::analytic(&b, BoundaryKind::Dirichlet, 1).map_err(|e| e.to_string())?;
    let dim_s_d = tangent_space_dim(&Domain::Box(b.clone()), D)
        .map_err(|e| e.to_string())?
        .dim;
    ensure(dim_s_d == 1, format!("dim S(G_D) = {dim_s_d}"))?;

    let probe = probe_dirichlet_mixed(&mixed, &dir, 2, 1).map_err(|e| e.to_string())?;
    let p = &probe.rows[0];
    ensure(
        p.exact == Some((Quarters(20), Quarters(12))),
        format!("lambda_3^G vs lambda_1: {:?}", p.exact),
    )?;
    ensure(
        p.verdict == Verdict::Violated && p.margin == -2.0,
        "lambda_3^G = 5 > 3 = lambda_1 not exact",
    )?;

    let thm = check_dirichlet_mixed(&mixed, &dir, dim_s_d, 1).map_err(|e| e.to_string())?;
    let t = &thm.rows[0];
    ensure(
        t.exact == Some((Quarters(12), Quarters(12))),
        format!("lambda_2^G vs lambda_1: {:?}", t.exact),
    )?;
    ensure(
        t.margin == 0.0 && t.uncertainty == 0.0,
        "lambda_2^G = 3 = lambda_1 not exact",
    )?;
    Ok("lambda_3^G = 5 > 3 = lambda_1 and lambda_2^G = 3 = lambda_1 exactly".into())
}

fn trapezoid_neumann_mixed() -> Outcome {
    let start = Instant::now();
    let dom = polygon(
        &[(-1.0, 0.0), (1.0, 0.0), (0.5, 1.0), (-0.5, 1.0)],
        &[N, D, N, D],
    );
    let dim_s_n = tangent_space_dim(&Domain::Polygon(dom.clone()), N)
        .map_err(|e| e.to_string())?
        .dim;
    ensure(dim_s_n == 1, format!("dim S(G_N) = {dim_s_n}"))?;
    let k_max = 8;
    let h = MeshHierarchy::for_count(&dom, k_max + 1, 3).map_err(|e| e.to_string())?;
    let mu = fem_spectrum_on(&h, BoundaryKind::Neumann, k_max + 1).map_err(|e| e.to_string())?;
    let mixed = fem_spectrum_on(&h, BoundaryKind::Mixed, k_max).map_err(|e| e.to_string())?;
    let r = check_neumann_mixed(&mu, &mixed, dim_s_n, k_max).map_err(|e| e.to_string())?;
    for row in &r.rows {
        ensure(
            row.verdict == Verdict::Holds && row.margin > row.uncertainty,
            format!(
                "k={}: margin {:e}, uncertainty {:e}, {}",
                row.k, row.margin, row.uncertainty, row.verdict
            ),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), format!("took {t:?}"))?;
    let min_ratio = r
        .rows
        .iter()
        .map(|r| r.margin / r.uncertainty)
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "mu_(k+1) <= lambda_k^G HOLDS for k <= {k_max}, min margin/uncertainty {min_ratio:.1}, levels {:?}, {:.1?}",
        h.levels(),
        t
    ))
}

fn pentagon_dirichlet_mixed() -> Outcome {
    let dom = regular(5, &[D, N, N, N, N]);
    let dim_s_d = tangent_space_dim(&Domain::Polygon(dom.clone()), D)
        .map_err(|e| e.to_string())?
        .dim;
    ensure(dim_s_d == 1, format!("dim S(G_D) = {dim_s_d}"))?;
    let k_max = 6;
    let h = MeshHierarchy::for_count(&dom, k_max + dim_s_d, 3).map_err(|e| e.to_string())?;
    let mixed =
        fem_spectrum_on(&h, BoundaryKind::Mixed, k_max + dim_s_d).map_err(|e| e.to_string())?;
    let dir = fem_spectrum_on(&h, BoundaryKind::Dirichlet, k_max).map_err(|e| e.to_string())?;
    let r = check_dirichlet_mixed(&mixed, &dir, dim_s_d, k_max).map_err(|e| e.to_string())?;
    for row in &r.rows {
        ensure(
            row.verdict == Verdict::Holds,
            format!(
                "k={}: margin {:e}, uncertainty {:e}, {}",
                row.k, row.margin, row.uncertainty, row.verdict
            ),
        )?;
    }
    Ok(format!(
        "lambda_(k+1)^G <= lambda_k HOLDS for k <= {k_max}, levels {:?}",
        h.levels()
    ))
}

fn levine_weinberger() -> Outcome {
    let k_max = 10;
    let mut out = Vec::new();
    for d in [2usize, 3] {
        let n = BoxDomain::pi_box(&vec![(N, N); d]).unwrap();
        let dd = BoxDomain::pi_box(&vec![(D, D); d]).unwrap();
        let mu =
            Spectrum::analytic(&n, BoundaryKind::Neumann, k_max + d).map_err(|e| e.to_string())?;
        let dir =
            Spectrum::analytic(&dd, BoundaryKind::Dirichlet, k_max).map_err(|e| e.to_string())?;
        let r = check_levine_weinberger(&mu, &dir, d, k_max).map_err(|e| e.to_string())?;
        ensure(
            r.violations() == 0,
            format!("d={d}: {} violations", r.violations()),
        )?;
        ensure(
            r.rows.iter().all(|row| row.exact.is_some()),
            "inexact comparison",
        )?;
        out.push(format!("d={d}: 0 violations"));
    }
    Ok(out.join(", "))
}

fn strict_monotonicity() -> Outcome {
    let k_max = 5;
    let full = pi_square(&[D, N, N, N]);
    let large = full.split_segment(0, 0.5).map_err(|e| e.to_string())?;
    let small = large
        .with_labels(&[D, N, N, N, N])
        .map_err(|e| e.to_string())?;
    ensure(
        small.part_length(D) * 2.0 == large.part_length(D),
        "Gamma is not half of Gamma'",
    )?;
    let hs = MeshHierarchy::for_count(&small, k_max, 4).map_err(|e| e.to_string())?;
    let hl = MeshHierarchy::for_count(&large, k_max, 4).map_err(|e| e.to_string())?;
    ensure(
        hs.meshes() == hl.meshes(),
        "partitions are not on identical meshes",
    )?;
    let s = fem_spectrum_on(&hs, BoundaryKind::Mixed, k_max).map_err(|e| e.to_string())?;
    let l = fem_spectrum_on(&hl, BoundaryKind::Mixed, k_max).map_err(|e| e.to_string())?;
    let r = check_monotonicity(&s, &l, k_max).map_err(|e| e.to_string())?;
    for row in &r.rows {
        ensure(
            row.margin > row.uncertainty,
            format!(
                "k={}: margin {:e}, uncertainty {:e}",
                row.k, row.margin, row.uncertainty
            ),
        )?;
    }
    ensure(r.strict_holds(), "strict verdict not HOLDS")?;
    let min_ratio = r
        .rows
        .iter()
        .map(|r| r.margin / r.uncertainty)
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "strict HOLDS for k <= {k_max}, min margin/uncertainty {min_ratio:.1}"
    ))
}

fn integral_identity() -> Outcome {
    let domains: Vec<(&str, PolygonDomain)> = vec![
        (
            "triangle",
            polygon(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], &[D; 3]),
        ),
        ("square", pi_square(&[D; 4])),
        ("pentagon", regular(5, &[D; 5])),
        ("hexagon", regular(6, &[D; 6])),
    ];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (name, dom) in &domains {
        for extra in standard_extras() {
            let u = bubble(dom, &extra).map_err(|e| e.to_string())?;
            for j in Axis::ALL {
                for k in Axis::ALL {
                    for m in Axis::ALL {
                        let r = identity_residual(&u, j, k, m, Region::Polygon(dom))
                            .map_err(|e| e.to_string())?;
                        ensure(
                            r.relative() < 1e-9,
                            format!(
                                "{name} (j,k,m)=({},{},{}): relative residual {:e}",
                                j.index(),
                                k.index(),
                                m.index(),
                                r.relative()
                            ),
                        )?;
                        worst = worst.max(r.relative());
                        cases += 1;
                    }
                }
            }
        }
    }
    // Disk: u = (1 − x² − y²) x, (k, m, j) = (1, 2, 2).
    let u = PolynomialField::from_terms(&[(1.0, 1, 0), (-1.0, 3, 0), (-1.0, 1, 2)]).unwrap();
    let lhs_oracle = disk_product_integral(
        &u.second_derivative(Axis::X, Axis::Y),
        &u.second_derivative(Axis::X, Axis::Y),
    );
    let rhs_oracle = disk_product_integral(
        &u.second_derivative(Axis::Y, Axis::Y),
        &u.second_derivative(Axis::X, Axis::X),
    );
    ensure(
        rel(lhs_oracle, PI) < 1e-14 && rel(rhs_oracle, 3.0 * PI) < 1e-14,
        format!("polar oracle gives {lhs_oracle} and {rhs_oracle}"),
    )?;
    let target = lhs_oracle - rhs_oracle;
    let r = identity_residual(&u, Axis::Y, Axis::X, Axis::Y, Region::UnitDisk)
        .map_err(|e| e.to_string())?;
    ensure(
        rel(r.residual, target) < 1e-8,
        format!("disk residual {}", r.residual),
    )?;
    ensure(
        rel(r.residual, -2.0 * PI) < 1e-8,
        format!("disk residual {} != -2 pi", r.residual),
    )?;
    Ok(format!(
        "{cases} polygon cases, worst relative residual {worst:.1e}; disk residual {:.15} (oracle {target:.15})",
        r.residual
    ))
}

fn chain_all_labelings() -> Outcome {
    let k_max = 12;
    for mask in 0u32..16 {
        let label = |bit: u32| if mask & (1 << bit) != 0 { D } else { N };
        let faces = [(label(0), label(1)), (label(2), label(3))];
        let b = BoxDomain::pi_box(&faces).unwrap();
        let mixed_kind = if !b.has_part(N) {
            BoundaryKind::Dirichlet
        } else if !b.has_part(D) {
            BoundaryKind::Neumann
        } else {
            BoundaryKind::Mixed
        };
        let mu = Spectrum::analytic(&b, BoundaryKind::Neumann, k_max).map_err(|e| e.to_string())?;
        let mixed = Spectrum::analytic(&b, mixed_kind, k_max).map_err(|e| e.to_string())?;
        let dir =
            Spectrum::analytic(&b, BoundaryKind::Dirichlet, k_max).map_err(|e| e.to_string())?;
        let r = check_chain(&mu, &mixed, &dir, k_max).map_err(|e| e.to_string())?;
        ensure(
            r.violations() == 0,
            format!("labeling {faces:?}: {} violations", r.violations()),
        )?;
    }
    Ok(format!("16 labelings, k <= {k_max}, 0 violations"))
}

fn numerical_hygiene() -> Outcome {
    let mut r = rng(20_240_601);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = r.gen_range(1..=8);
        let (k, m) = random_pair(&mut r, n);
        let ks = SymmetricSparseMatrix::from_dense(&SquareMatrix::from_rows(&k));
        let ms = SymmetricSparseMatrix::from_dense(&SquareMatrix::from_rows(&m));
        let got = smallest_eigs(&ks, &ms, n)
            .map_err(|e| e.to_string())?
            .eigenvalues;
        let frob: f64 = k.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let want = determinant_roots(&k, &m, -1.0, frob / n as f64 + 1.0);
        for (g, w) in got.iter().zip(&want) {
            let e = (g - w).abs() / w.abs().max(1.0);
            worst = worst.max(e);
        }
    }
    ensure(worst < 1e-9, format!("oracle mismatch {worst:e}"))?;

    let dom = pi_square(&[D; 4]);
    let h = MeshHierarchy::new(&dom, 1, 5).map_err(|e| e.to_string())?;
    let s = fem_spectrum_on(&h, BoundaryKind::Dirichlet, 4).map_err(|e| e.to_string())?;
    let diag = s.diagnostics.as_ref().unwrap();
    let order = diag.observed_orders[0].ok_or("no observed order")?;
    ensure(
        (1.8..=2.2).contains(&order),
        format!("observed order {order}"),
    )?;
    let exact = [2.0, 5.0, 5.0, 8.0];
    for (level, raw) in diag.mesh_levels.iter().zip(&diag.raw) {
        for (k, (&v, &e)) in raw.iter().zip(&exact).enumerate() {
            ensure(
                v >= e,
                format!("level {level}: lambda_{} = {v} below {e}", k + 1),
            )?;
        }
    }
    Ok(format!(
        "oracle max error {worst:.1e} over 50 pairs; observed order {order:.3}; upper bounds hold on levels {:?}",
        diag.mesh_levels
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("square counterexample", square_counterexample),
        ("equality case", equality_case),
        ("cube example", cube_example),
        ("neumann-mixed sweep on trapezoid", trapezoid_neumann_mixed),
        (
            "dirichlet-mixed sweep on pentagon",
            pentagon_dirichlet_mixed,
        ),
        ("levine-weinberger exact", levine_weinberger),
        ("strict monotonicity", strict_monotonicity),
        ("integral identity", integral_identity),
        ("chain over 16 labelings", chain_all_labelings),
        ("numerical hygiene", numerical_hygiene),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (res, t))) in criteria.iter().zip(results).enumerate() {
        match res {
            Ok(msg) => println!("PASS criterion {:>2} {name}: {msg} [{t:.1?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {msg} [{t:.1?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
