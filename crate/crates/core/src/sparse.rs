//! Symmetric sparse matrices in upper-triangular coordinate form, plus a
//! reverse Cuthill-McKee ordered envelope Cholesky factorization.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::SquareMatrix;

/// Symmetric matrix stored as its upper triangle: `(row, col, value)` with
/// `row <= col`, sorted by `(row, col)` and free of duplicates.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSparseMatrix {
    order: usize,
    entries: Vec<(usize, usize, f64)>,
}

/// Accumulates symmetric contributions in a fixed, index-sorted order.
#[derive(Clone, Debug, Default)]
pub struct SymmetricBuilder {
    order: usize,
    acc: BTreeMap<(usize, usize), f64>,
}

impl SymmetricBuilder {
    pub fn new(order: usize) -> Self {
        SymmetricBuilder {
            order,
            acc: BTreeMap::new(),
        }
    }

    /// Adds `value` at `(i, j)`; the mirrored entry is implied.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.order && j < self.order, "index out of range");
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.acc.entry(key).or_insert(0.0) += value;
    }

    pub fn build(self) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix {
            order: self.order,
            entries: self.acc.into_iter().map(|((i, j), v)| (i, j, v)).collect(),
        }
    }
}

impl SymmetricSparseMatrix {
    /// Builds from arbitrary triplets; entries below the diagonal are folded
    /// onto their mirror and duplicates are summed.
    pub fn from_triplets(order: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut b = SymmetricBuilder::new(order);
        for &(i, j, v) in triplets {
            b.add(i, j, v);
        }
        b.build()
    }

    /// Upper triangle of a dense symmetric matrix (exact zeros dropped).
    pub fn from_dense(a: &SquareMatrix) -> Self {
        let n = a.order();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if a[(i, j)] != 0.0 {
                    entries.push((i, j, a[(i, j)]));
                }
            }
        }
        SymmetricSparseMatrix { order: n, entries }
    }

    pub fn identity(order: usize) -> Self {
        SymmetricSparseMatrix {
            order,
            entries: (0..order).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn nnz_upper(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&key))
            .map(|p| self.entries[p].2)
            .unwrap_or(0.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        let mut y = vec![0.0; self.order];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
            if i != j {
                y[j] += v * x[i];
            }
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x[i] * x[i]
                } else {
                    2.0 * v * x[i] * x[j]
                }
            })
            .sum()
    }

    /// Sum of all entries of the full symmetric matrix.
    pub fn total_sum(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v } else { 2.0 * v })
            .sum()
    }

    /// Largest absolute row sum, the induced infinity norm.
    pub fn row_sum_norm(&self) -> f64 {
        let mut rows = vec![0.0; self.order];
        for &(i, j, v) in &self.entries {
            rows[i] += v.abs();
            if i != j {
                rows[j] += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymmetricSparseMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .map(|&(i, j, v)| (i, j, c * v))
                .collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SymmetricSparseMatrix) -> Self {
        assert_eq!(self.order, other.order);
        let mut b = SymmetricBuilder::new(self.order);
        for &(i, j, v) in &self.entries {
            b.add(i, j, v);
        }
        for &(i, j, v) in &other.entries {
            b.add(i, j, s * v);
        }
        b.build()
    }

    pub fn to_dense(&self) -> SquareMatrix {
        let mut a = SquareMatrix::zeros(self.order);
        for &(i, j, v) in &self.entries {
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
        a
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.order];
        for &(i, j, _) in &self.entries {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }
}

fn bfs_levels(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<Vec<usize>> {
    let mut levels = vec![vec![start]];
    seen[start] = true;
    loop {
        let mut next = Vec::new();
        for &u in levels.last().unwrap() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
}

fn pseudo_peripheral(adj: &[Vec<usize>], start: usize) -> usize {
    let mut node = start;
    let mut ecc = 0;
    loop {
        let mut seen = vec![false; adj.len()];
        let levels = bfs_levels(adj, node, &mut seen);
        let far = levels.last().unwrap();
        let cand = *far.iter().min_by_key(|&&u| (adj[u].len(), u)).unwrap();
        if levels.len() - 1 <= ecc {
            return node;
        }
        ecc = levels.len() - 1;
        node = cand;
    }
}

/// Reverse Cuthill-McKee permutation: `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SymmetricSparseMatrix) -> Vec<usize> {
    let adj = a.adjacency();
    let n = a.order();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| (adj[u].len(), u))
            .unwrap();
        // Restrict the peripheral search to the seed's component.
        let start = pseudo_peripheral(&adj, seed);
        let mut queue = VecDeque::new();
        placed[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&w| !placed[w]).collect();
            nb.sort_by_key(|&w| (adj[w].len(), w));
            for w in nb {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factor `P A P^T = L L^T` stored row by row over the envelope.
#[derive(Clone, Debug)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors `a`; returns the permuted index of the first non-positive
    /// pivot on failure.
    pub fn factor(a: &SymmetricSparseMatrix) -> Result<Self, usize> {
        let n = a.order();
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        let mut lower = Vec::with_capacity(a.nnz_upper());
        for &(i, j, v) in a.entries() {
            let (pi, pj) = (inv[i], inv[j]);
            let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
            first[r] = first[r].min(c);
            lower.push((r, c, v));
        }
        let mut start = vec![0; n + 1];
        for r in 0..n {
            start[r + 1] = start[r] + (r - first[r] + 1);
        }
        let mut values = vec![0.0; start[n]];
        for (r, c, v) in lower {
            values[start[r] + (c - first[r])] += v;
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = values[start[i] + j - fi];
                let ri = start[i] + lo - fi;
                let rj = start[j] + lo - fj;
                let len = j - lo;
                for k in 0..len {
                    s -= values[ri + k] * values[rj + k];
                }
                if j < i {
                    s /= values[start[j] + j - fj];
                } else {
                    if !(s > 0.0) {
                        return Err(i);
                    }
                    s = libm::sqrt(s);
                }
                values[start[i] + j - fi] = s;
            }
        }
        Ok(EnvelopeCholesky {
            perm,
            first,
            start,
            values,
        })
    }

    pub fn order(&self) -> usize {
        self.perm.len()
    }

    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            let mut s = y[i];
            for (k, &l) in row[..i - fi].iter().enumerate() {
                s -= l * y[fi + k];
            }
            y[i] = s / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (k, &l) in row[..i - fi].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_laplacian(m: usize) -> SymmetricSparseMatrix {
        let n = m * m;
        let mut b = SymmetricBuilder::new(n);
        for i in 0..m {
            for j in 0..m {
                let p = i * m + j;
                b.add(p, p, 4.0);
                if i + 1 < m {
                    b.add(p, p + m, -1.0);
                }
                if j + 1 < m {
                    b.add(p, p + 1, -1.0);
                }
            }
        }
        b.build()
    }

    #[test]
    fn builder_folds_lower_entries() {
        let a = SymmetricSparseMatrix::from_triplets(3, &[(1, 0, 2.0), (0, 1, 1.0), (2, 2, 5.0)]);
        assert_eq!(a.entries(), &[(0, 1, 3.0), (2, 2, 5.0)]);
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![3.0, 3.0, 5.0]);
        assert_eq!(a.total_sum(), 11.0);
    }

    #[test]
    fn rcm_is_permutation() {
        let a = grid_laplacian(6);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort_unstable();
        assert_eq!(p, (0..36).collect::<Vec<_>>());
    }

    #[test]
    fn envelope_cholesky_solves_grid_laplacian() {
        let a = grid_laplacian(9);
        let f = EnvelopeCholesky::factor(&a).unwrap();
        let b: Vec<f64> = (0..81).map(|i| libm::sin(i as f64)).collect();
        let x = f.solve(&b);
        let r = a.mul_vec(&x);
        for i in 0..81 {
            assert!((r[i] - b[i]).abs() < 1e-12);
        }
        // Bandwidth after RCM is about one grid row.
        assert!(f.envelope_size() < 81 * 12);
    }

    #[test]
    fn envelope_cholesky_rejects_singular() {
        let a = SymmetricSparseMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 1, -1.0), (1, 1, 1.0)]);
        assert!(EnvelopeCholesky::factor(&a).is_err());
    }
}
