//! Exact spectra of boxes with a Dirichlet or Neumann label on every face.
//!
//! Separation of variables gives eigenvalues `Σ_axis (π / L)^2 c_n^2` with
//! `c_n = n` (DD), `n − 1` (NN) or `n − 1/2` (DN, ND), `n ≥ 1`. When every
//! side is π the values are quarter-integers and are handled exactly as
//! `4 λ ∈ ℕ`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use crate::geometry::{BoxDomain, Label};

/// An exact eigenvalue `q / 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarters(pub u64);

impl Quarters {
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }

    /// Reduced numerator and denominator.
    pub fn ratio(self) -> (u64, u64) {
        let g = gcd(self.0, 4);
        (self.0 / g, 4 / g)
    }
}

impl fmt::Display for Quarters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.ratio();
        write!(f, "{p}/{q}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn doubled_index(labels: (Label, Label), n: usize) -> u64 {
    assert!(n >= 1, "mode index starts at 1");
    let n = n as u64;
    match labels {
        (Label::Dirichlet, Label::Dirichlet) => 2 * n,
        (Label::Neumann, Label::Neumann) => 2 * (n - 1),
        _ => 2 * n - 1,
    }
}

/// `4 c_n^2`, the exact one-axis eigenvalue for side length π, in quarters.
pub fn axis_factor_quarters(labels: (Label, Label), n: usize) -> Quarters {
    let c2 = doubled_index(labels, n);
    Quarters(c2 * c2)
}

/// One-dimensional eigenvalue `(π / L)^2 c_n^2` on an interval of length `length`.
pub fn axis_factor(labels: (Label, Label), length: f64, n: usize) -> f64 {
    let c = doubled_index(labels, n) as f64 / 2.0;
    let w = PI / length;
    w * w * c * c
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparableSpectrum {
    pub values: Vec<f64>,
    /// Present iff all sides equal π.
    pub exact: Option<Vec<Quarters>>,
    /// One-based mode indices per axis for each eigenvalue.
    pub modes: Vec<Vec<usize>>,
    /// Per-axis index cap that certified the enumeration.
    pub caps: Vec<usize>,
}

impl SeparableSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multiplicity of the `k`-th (one-based) eigenvalue.
    pub fn multiplicity(&self, k: usize) -> usize {
        let v = self.values[k - 1];
        self.values.iter().filter(|&&w| w == v).count()
    }
}

enum Tables {
    Exact(Vec<(Label, Label)>),
    Float(Vec<(Label, Label)>, Vec<f64>),
}

impl Tables {
    fn value(&self, axis: usize, n: usize) -> (f64, Option<u64>) {
        match self {
            Tables::Exact(f) => {
                let q = axis_factor_quarters(f[axis], n);
                (q.to_f64(), Some(q.0))
            }
            Tables::Float(f, l) => (axis_factor(f[axis], l[axis], n), None),
        }
    }

    fn cmp(a: &(f64, Option<u64>), b: &(f64, Option<u64>)) -> Ordering {
        match (a.1, b.1) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => a.0.total_cmp(&b.0),
        }
    }
}

fn tuples(caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=c).map(move |n| {
                    let mut t = t.clone();
                    t.push(n);
                    t
                })
            })
            .collect();
    }
    out
}

/// The `count` smallest eigenvalues of the box with multiplicity.
///
/// Per-axis caps grow until the smallest tuple excluded along every axis is
/// strictly larger than the `count`-th enumerated value.
pub fn separable_spectrum(domain: &BoxDomain, count: usize) -> SeparableSpectrum {
    assert!(count >= 1, "need at least one eigenvalue");
    let d = domain.dim();
    let exact = domain.lengths().iter().all(|&l| l == PI);
    let tables = if exact {
        Tables::Exact(domain.faces().to_vec())
    } else {
        Tables::Float(domain.faces().to_vec(), domain.lengths().to_vec())
    };
    let sum = |t: &[usize]| -> (f64, Option<u64>) {
        let mut f = 0.0;
        let mut q = Some(0u64);
        for (axis, &n) in t.iter().enumerate() {
            let (vf, vq) = tables.value(axis, n);
            f += vf;
            q = q.zip(vq).map(|(a, b)| a + b);
        }
        (f, q)
    };
    let mut caps = vec![2usize; d];
    loop {
        let mut entries: Vec<((f64, Option<u64>), Vec<usize>)> =
            tuples(&caps).into_iter().map(|t| (sum(&t), t)).collect();
        entries.sort_by(|a, b| Tables::cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
        if entries.len() < count {
            caps.iter_mut().for_each(|c| *c *= 2);
            continue;
        }
        let kth = entries[count - 1].0;
        let mut grown = false;
        for axis in 0..d {
            let mut t = vec![1usize; d];
            t[axis] = caps[axis] + 1;
            if Tables::cmp(&sum(&t), &kth) != Ordering::Greater {
                caps[axis] *= 2;
                grown = true;
            }
        }
        if grown {
            continue;
        }
        entries.truncate(count);
        let values = entries.iter().map(|e| e.0 .0).collect();
        let exact = exact.then(|| entries.iter().map(|e| Quarters(e.0 .1.unwrap())).collect());
        let modes = entries.into_iter().map(|e| e.1).collect();
        return SeparableSpectrum {
            values,
            exact,
            modes,
            caps,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Dirichlet as D, Neumann as N};

    #[test]
    fn axis_factors() {
        assert_eq!(axis_factor((N, N), PI, 1), 0.0);
        assert_eq!(axis_factor((D, N), PI, 1), 0.25);
        assert_eq!(axis_factor((N, D), PI, 1), 0.25);
        assert_eq!(axis_factor((D, D), PI, 2), 4.0);
        assert_eq!(axis_factor_quarters((D, N), 1), Quarters(1));
        assert!((axis_factor((D, D), 1.0, 1) - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn quarters_display() {
        assert_eq!(alloc::format!("{}", Quarters(1)), "1/4");
        assert_eq!(alloc::format!("{}", Quarters(5)), "5/4");
        assert_eq!(alloc::format!("{}", Quarters(4)), "1/1");
        assert_eq!(alloc::format!("{}", Quarters(6)), "3/2");
    }

    #[test]
    fn square_one_dirichlet_side() {
        let mixed = separable_spectrum(&BoxDomain::pi_box(&[(N, N), (D, N)]).unwrap(), 2);
        assert_eq!(mixed.exact, Some(vec![Quarters(1), Quarters(5)]));
        let neu = separable_spectrum(&BoxDomain::pi_box(&[(N, N), (N, N)]).unwrap(), 2);
        assert_eq!(neu.values, vec![0.0, 1.0]);
    }

    #[test]
    fn square_two_dirichlet_sides() {
        let mixed = separable_spectrum(&BoxDomain::pi_box(&[(N, N), (D, D)]).unwrap(), 1);
        assert_eq!(mixed.exact, Some(vec![Quarters(4)]));
        assert_eq!(mixed.modes, vec![vec![1, 1]]);
    }

    #[test]
    fn cube_example() {
        let mixed = separable_spectrum(&BoxDomain::pi_box(&[(D, D), (D, D), (N, N)]).unwrap(), 3);
        assert_eq!(mixed.values, vec![2.0, 3.0, 5.0]);
        let dir = separable_spectrum(&BoxDomain::pi_box(&[(D, D), (D, D), (D, D)]).unwrap(), 1);
        assert_eq!(dir.values, vec![3.0]);
    }

    #[test]
    fn multiplicities_of_dirichlet_square() {
        let s = separable_spectrum(&BoxDomain::pi_box(&[(D, D), (D, D)]).unwrap(), 6);
        assert_eq!(s.values, vec![2.0, 5.0, 5.0, 8.0, 10.0, 10.0]);
        assert_eq!(s.multiplicity(2), 2);
        assert_eq!(s.modes[1], vec![1, 2]);
        assert_eq!(s.modes[2], vec![2, 1]);
    }

    #[test]
    fn float_path_for_other_lengths() {
        let b = BoxDomain::new(&[1.0, 2.0], &[(D, D), (D, D)]).unwrap();
        let s = separable_spectrum(&b, 3);
        assert!(s.exact.is_none());
        let p2 = PI * PI;
        let want = [p2 * 1.25, p2 * 2.0, p2 * 3.25];
        for (v, w) in s.values.iter().zip(want) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn elongated_box_grows_caps() {
        let b = BoxDomain::new(&[20.0, 1.0], &[(D, D), (D, D)]).unwrap();
        let s = separable_spectrum(&b, 10);
        assert!(s.caps[0] >= 11);
        assert!(s.modes.iter().all(|m| m[1] == 1));
    }
}
