//! Small dense and banded direct solvers for the per-block systems.

use crate::{Error, Result};

/// Dense LU with partial pivoting; solves in place, returns x.
pub(crate) fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k][k].abs();
        for (i, row) in a.iter().enumerate().skip(k + 1) {
            if row[k].abs() > best {
                best = row[k].abs();
                piv = i;
            }
        }
        if best == 0.0 {
            return Err(Error::NotSpd(format!("singular pivot at column {k}")));
        }
        if piv != k {
            a.swap(k, piv);
            b.swap(k, piv);
        }
        let akk = a[k][k];
        let (pivot_rows, rest) = a.split_at_mut(k + 1);
        let pivot = &pivot_rows[k];
        for (off, row) in rest.iter_mut().enumerate() {
            let f = row[k] / akk;
            if f != 0.0 {
                for (rj, pj) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                    *rj -= f * pj;
                }
                b[k + 1 + off] -= f * b[k];
            }
            row[k] = 0.0;
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Ok(x)
}

/// LDL^T solve for a symmetric positive definite tridiagonal system.
pub(crate) fn tridiag_spd_solve(diag: &[f64], off: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1));
    assert_eq!(rhs.len(), n);
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    for i in 0..n {
        let mut di = diag[i];
        if i > 0 {
            di -= l[i - 1] * l[i - 1] * d[i - 1];
        }
        if di <= 0.0 {
            return Err(Error::NotSpd(format!(
                "tridiagonal pivot {di:e} at row {i}"
            )));
        }
        d[i] = di;
        if i + 1 < n {
            l[i] = off[i] / di;
        }
    }
    let mut y = rhs.to_vec();
    for i in 1..n {
        y[i] -= l[i - 1] * y[i - 1];
    }
    for i in 0..n {
        y[i] /= d[i];
    }
    for i in (0..n.saturating_sub(1)).rev() {
        y[i] -= l[i] * y[i + 1];
    }
    Ok(y)
}

/// Symmetric banded matrix, lower storage: `band[i][p]` holds A[i, i-bw+p]
/// for p = 0..=bw (entries left of the band are zero-padded).
#[derive(Clone, Debug)]
pub struct SymBand {
    pub n: usize,
    pub bw: usize,
    pub band: Vec<Vec<f64>>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymBand {
            n,
            bw,
            band: vec![vec![0.0; bw + 1]; n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        if r - c > self.bw {
            0.0
        } else {
            self.band[r][self.bw - (r - c)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        assert!(
            r - c <= self.bw,
            "entry ({i},{j}) outside bandwidth {}",
            self.bw
        );
        self.band[r][self.bw - (r - c)] = v;
    }

    /// Banded Cholesky factorization followed by forward/back substitution.
    pub fn cholesky_solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let bw = self.bw;
        assert_eq!(rhs.len(), n);
        let mut l = vec![vec![0.0; bw + 1]; n];
        for i in 0..n {
            let jmin = i.saturating_sub(bw);
            for j in jmin..=i {
                let mut s = self.get(i, j);
                let kmin = jmin.max(j.saturating_sub(bw));
                for k in kmin..j {
                    s -= l[i][bw - (i - k)] * l[j][bw - (j - k)];
                }
                if j == i {
                    if s <= 0.0 {
                        return Err(Error::NotSpd(format!("band pivot {s:e} at row {i}")));
                    }
                    l[i][bw] = s.sqrt();
                } else {
                    l[i][bw - (i - j)] = s / l[j][bw];
                }
            }
        }
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in i.saturating_sub(bw)..i {
                s -= l[i][bw - (i - k)] * y[k];
            }
            y[i] = s / l[i][bw];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= l[k][bw - (k - i)] * x[k];
            }
            x[i] = s / l[i][bw];
        }
        Ok(x)
    }
}
