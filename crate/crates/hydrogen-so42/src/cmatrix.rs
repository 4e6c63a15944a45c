//! A small row-compressed complex sparse matrix tailored to Lie-algebra
//! generators: few nonzeros per row, exact structural arithmetic, and
//! interior-restricted residual norms.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Complex sparse matrix with column-sorted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SpMat {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

const DROP_EPS: f64 = 0.0; // keep exact structural zeros out via explicit checks

impl SpMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.rows[i].push((i, Complex64::new(1.0, 0.0)));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Add `v` to entry (i, j), keeping the row column-sorted.
    pub fn add_entry(&mut self, i: usize, j: usize, v: Complex64) {
        if v.norm_sqr() == DROP_EPS {
            return;
        }
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => row[k].1 += v,
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex64)] {
        &self.rows[i]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for e in row.iter_mut() {
                e.1 *= c;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for (i, row) in other.rows.iter().enumerate() {
            for &(j, v) in row {
                out.add_entry(i, j, v);
            }
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Sparse product self * other via per-row dense scatter.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in mul");
        let mut out = Self::zeros(self.dim);
        let mut scratch: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.dim {
            for &(k, a) in &self.rows[i] {
                for &(j, b) in &other.rows[k] {
                    if scratch[j] == Complex64::new(0.0, 0.0) {
                        touched.push(j);
                    }
                    scratch[j] += a * b;
                }
            }
            touched.sort_unstable();
            let row = &mut out.rows[i];
            for &j in &touched {
                let v = scratch[j];
                if v.norm_sqr() > 0.0 {
                    row.push((j, v));
                }
                scratch[j] = Complex64::new(0.0, 0.0);
            }
            touched.clear();
        }
        out
    }

    /// Commutator [self, other].
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.add_entry(j, i, v.conj());
            }
        }
        out
    }

    /// Drop exact-zero stored entries (after cancellations in add/sub).
    pub fn prune(&mut self) {
        for row in &mut self.rows {
            row.retain(|e| e.1.norm_sqr() > 0.0);
        }
    }

    /// Max |entry| over rows and columns both < `bound` (the interior block;
    /// interior states occupy the leading offsets).
    pub fn max_abs_interior(&self, bound: usize) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..bound.min(self.dim) {
            for &(j, v) in &self.rows[i] {
                if j < bound {
                    best = best.max(v.norm());
                }
            }
        }
        best
    }

    /// Max |entry| over the whole matrix.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0_f64;
        for row in &self.rows {
            for &(_, v) in row {
                best = best.max(v.norm());
            }
        }
        best
    }

    /// y = self * x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(j, v) in row {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Dense copy.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex64>, drop_tol: f64) -> Self {
        let dim = m.nrows();
        assert_eq!(dim, m.ncols());
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.norm() > drop_tol {
                    out.rows[i].push((j, v));
                }
            }
        }
        out
    }

    /// Triplet list (row, col, re, im) in deterministic row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64, f64)> {
        let mut t = Vec::with_capacity(self.nnz());
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                t.push((i, j, v.re, v.im));
            }
        }
        t
    }

    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64, f64)]) -> Self {
        let mut m = Self::zeros(dim);
        for &(i, j, re, im) in triplets {
            m.add_entry(i, j, Complex64::new(re, im));
        }
        m
    }

    /// Dense restriction of the matrix to a list of offsets (block extraction,
    /// used for the invariant (l, m) towers).
    pub fn dense_block(&self, offsets: &[usize]) -> DMatrix<Complex64> {
        let k = offsets.len();
        let pos: std::collections::HashMap<usize, usize> =
            offsets.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut m = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
        for (a, &off) in offsets.iter().enumerate() {
            for &(j, v) in &self.rows[off] {
                if let Some(&b) = pos.get(&j) {
                    m[(a, b)] = v;
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mul_matches_dense() {
        let mut a = SpMat::zeros(4);
        a.add_entry(0, 1, c(1.0, 2.0));
        a.add_entry(1, 2, c(-0.5, 0.0));
        a.add_entry(3, 0, c(0.0, 1.0));
        let mut b = SpMat::zeros(4);
        b.add_entry(1, 1, c(2.0, 0.0));
        b.add_entry(2, 3, c(1.0, -1.0));
        b.add_entry(0, 2, c(3.0, 0.0));
        let prod = a.mul(&b).to_dense();
        let expect = a.to_dense() * b.to_dense();
        assert!((prod - expect).norm() < 1e-14);
    }

    #[test]
    fn commutator_of_self_is_zero() {
        let mut a = SpMat::zeros(3);
        a.add_entry(0, 1, c(1.0, 0.5));
        a.add_entry(1, 0, c(1.0, -0.5));
        a.add_entry(2, 2, c(0.3, 0.0));
        let comm = a.commutator(&a);
        assert_eq!(comm.max_abs(), 0.0);
    }

    #[test]
    fn adjoint_roundtrip() {
        let mut a = SpMat::zeros(3);
        a.add_entry(0, 2, c(1.0, 2.0));
        a.add_entry(1, 1, c(0.0, -1.0));
        let adj2 = a.adjoint().adjoint();
        assert!(a.sub(&adj2).max_abs() < 1e-15);
    }

    #[test]
    fn triplets_roundtrip() {
        let mut a = SpMat::zeros(5);
        a.add_entry(0, 4, c(1.5, 0.0));
        a.add_entry(3, 3, c(0.0, 2.0));
        let b = SpMat::from_triplets(5, &a.triplets());
        assert!(a.sub(&b).max_abs() == 0.0);
    }
}
