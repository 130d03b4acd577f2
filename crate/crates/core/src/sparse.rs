//! Compressed sparse row storage and a banded LU factorization.
//!
//! The direct solver reorders unknowns by physical position (row-major in
//! `(y, x)`), which confines every coupling of the staggered stencil to a
//! band a few mesh rows wide, then runs Gaussian elimination with partial
//! pivoting inside that band. Rows are equilibrated to unit max-norm before
//! factoring because the scaled system mixes `1/K` and `1/h` magnitudes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    /// Explicit zeros are kept so the pattern does not depend on values.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
            last = Some((r, c));
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    #[inline]
    pub fn row_dot(&self, r: usize, x: &[f64]) -> f64 {
        let (cols, vals) = self.row(r);
        cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows).map(|r| self.row_dot(r, x)).collect()
    }

    /// Adds `delta` to the stored diagonal entry of each listed row.
    pub fn add_to_diagonal(&mut self, updates: impl IntoIterator<Item = (usize, f64)>) {
        for (r, delta) in updates {
            let span = self.row_ptr[r]..self.row_ptr[r + 1];
            let pos = self.col_idx[span.clone()]
                .binary_search(&r)
                .expect("diagonal entry present in pattern");
            self.values[span.start + pos] += delta;
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            d[r][c] += v;
        }
        d
    }
}

/// LU factors of a banded, symmetrically permuted matrix.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    kv: usize,
    ldab: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
    /// New position -> original index.
    order: Vec<usize>,
    /// Original index -> new position.
    position: Vec<usize>,
    row_scale: Vec<f64>,
}

impl BandedLu {
    /// Factors `a` after reordering its unknowns by `order` (new -> old).
    pub fn factor(a: &CsrMatrix, order: Vec<usize>) -> Result<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "banded LU needs a square matrix");
        assert_eq!(order.len(), n);
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for (r, c, _) in a.triplets() {
            let (i, j) = (position[r], position[c]);
            if i > j {
                kl = kl.max(i - j);
            } else {
                ku = ku.max(j - i);
            }
        }
        let kv = kl + ku;
        let ldab = kv + kl + 1;
        let mut ab = vec![0.0; ldab * n];
        let mut row_scale = vec![1.0; n];
        for r in 0..n {
            let (_, vals) = a.row(r);
            let m = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m > 0.0 {
                row_scale[r] = 1.0 / m;
            }
        }
        for (r, c, v) in a.triplets() {
            let (i, j) = (position[r], position[c]);
            ab[j * ldab + kv + i - j] += v * row_scale[r];
        }
        let mut lu = Self {
            n,
            kl,
            kv,
            ldab,
            ab,
            pivots: vec![0; n],
            order,
            position,
            row_scale,
        };
        lu.eliminate()?;
        Ok(lu)
    }

    /// Factors with the geometric ordering given by `positions[i] = (x, y)`.
    pub fn factor_geometric(a: &CsrMatrix, positions: &[(f64, f64)]) -> Result<Self> {
        let mut order: Vec<usize> = (0..a.nrows()).collect();
        order.sort_by(|&p, &q| {
            let (xp, yp) = positions[p];
            let (xq, yq) = positions[q];
            yp.total_cmp(&yq).then(xp.total_cmp(&xq)).then(p.cmp(&q))
        });
        Self::factor(a, order)
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.kv - self.kl)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kv + i - j
    }

    fn eliminate(&mut self) -> Result<()> {
        let n = self.n;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.ab[self.idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = self.ab[self.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix(k));
            }
            self.pivots[k] = p;
            let last_col = (k + self.kv).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[self.idx(k, k)];
            for i in k + 1..=last_row {
                let lik = self.ab[self.idx(i, k)] / pivot;
                let at = self.idx(i, k);
                self.ab[at] = lik;
                if lik == 0.0 {
                    continue;
                }
                for j in k + 1..=last_col {
                    let ukj = self.ab[self.idx(k, j)];
                    let at = self.idx(i, j);
                    self.ab[at] -= lik * ukj;
                }
            }
        }
        Ok(())
    }

    /// Solves `A x = b` in the original unknown numbering.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self
            .order
            .iter()
            .map(|&old| b[old] * self.row_scale[old])
            .collect();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                y.swap(k, p);
            }
            let yk = y[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                y[i] -= self.ab[self.idx(i, k)] * yk;
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..=(k + self.kv).min(n - 1) {
                s -= self.ab[self.idx(k, j)] * y[j];
            }
            y[k] = s / self.ab[self.idx(k, k)];
        }
        (0..n).map(|old| y[self.position[old]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0), (1, 0, -1.0)]);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.matvec(&[1.0, 1.0]), vec![3.0, -1.0]);
    }

    #[test]
    fn banded_solve_matches_dense_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let mut trip = Vec::new();
        for i in 0..n {
            // zero diagonal on every third row forces pivoting
            if i % 3 != 0 {
                trip.push((i, i, rng.gen_range(1.0..2.0)));
            }
            for d in 1..4 {
                if i + d < n {
                    trip.push((i, i + d, rng.gen_range(-1.0..1.0)));
                    trip.push((i + d, i, rng.gen_range(-1.0..1.0)));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, trip);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // a scrambled order widens the band but must not change the answer
        let mut order: Vec<usize> = (0..n).collect();
        order.swap(3, 17);
        for ord in [(0..n).collect::<Vec<_>>(), order] {
            let lu = BandedLu::factor(&a, ord).unwrap();
            let x = lu.solve(&b);
            let r = a.matvec(&x);
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-10, "{ri} vs {bi}");
            }
        }
    }

    #[test]
    fn singular_detected() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 0, 1.0)]);
        assert!(matches!(
            BandedLu::factor(&a, vec![0, 1]),
            Err(Error::SingularMatrix(_))
        ));
    }
}
