//! Thin Householder QR for small dense complex least-squares problems.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Systems whose diagonal ratio `max|R_ii| / min|R_ii|` exceeds this are
/// treated as rank deficient.
pub const MAX_CONDITION: f64 = 1e12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Householder factorization of an `m × k` column-major matrix, `k ≤ m`.
#[derive(Debug, Clone)]
pub struct QrFactor {
    rows: usize,
    cols: usize,
    /// Reflected matrix: R in the upper triangle, reflector tails below.
    packed: Vec<Complex64>,
    /// Leading entry of each unit reflector.
    heads: Vec<Complex64>,
    diag: Vec<Complex64>,
}

impl QrFactor {
    /// Factors `a`, stored column-major with `rows` rows.
    pub fn new(mut a: Vec<Complex64>, rows: usize, cols: usize) -> Result<Self> {
        if cols > rows {
            return Err(Error::SupportTooLarge { size: cols, rows });
        }
        debug_assert_eq!(a.len(), rows * cols);
        let mut heads = Vec::with_capacity(cols);
        let mut diag = Vec::with_capacity(cols);
        for j in 0..cols {
            let col = j * rows;
            let norm = a[col + j..col + rows].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::RankDeficient { condition: f64::INFINITY });
            }
            let x0 = a[col + j];
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let alpha = -phase * norm;
            // v = x - alpha e1, normalized to unit length.
            a[col + j] = x0 - alpha;
            let vnorm = a[col + j..col + rows].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in a[col + j..col + rows].iter_mut() {
                *x /= vnorm;
            }
            // Apply H = I - 2vvᴴ to the remaining columns.
            for c in j + 1..cols {
                let cc = c * rows;
                let mut dot = ZERO;
                for i in j..rows {
                    dot += a[col + i].conj() * a[cc + i];
                }
                dot *= 2.0;
                for i in j..rows {
                    let vi = a[col + i];
                    a[cc + i] -= vi * dot;
                }
            }
            heads.push(a[col + j]);
            diag.push(alpha);
        }
        let fac = QrFactor { rows, cols, packed: a, heads, diag };
        let cond = fac.condition_estimate();
        if !(cond <= MAX_CONDITION) {
            return Err(Error::RankDeficient { condition: cond });
        }
        Ok(fac)
    }

    /// `max|R_ii| / min|R_ii|`; 1 for an empty factor.
    pub fn condition_estimate(&self) -> f64 {
        if self.diag.is_empty() {
            return 1.0;
        }
        let (lo, hi) = self
            .diag
            .iter()
            .map(|d| d.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Least-squares coefficients and residual norm for right-hand side `b`.
    pub fn solve(&self, b: &[Complex64]) -> (Vec<Complex64>, f64) {
        let (m, k) = (self.rows, self.cols);
        debug_assert_eq!(b.len(), m);
        let mut y = b.to_vec();
        for j in 0..k {
            let col = j * m;
            let mut dot = self.heads[j].conj() * y[j];
            for i in j + 1..m {
                dot += self.packed[col + i].conj() * y[i];
            }
            dot *= 2.0;
            y[j] -= self.heads[j] * dot;
            for i in j + 1..m {
                y[i] -= self.packed[col + i] * dot;
            }
        }
        let residual = y[k..].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let mut x = vec![ZERO; k];
        for j in (0..k).rev() {
            let mut s = y[j];
            for c in j + 1..k {
                s -= self.packed[c * m + j] * x[c];
            }
            x[j] = s / self.diag[j];
        }
        (x, residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_square_system_exactly() {
        // [[1, 2], [3, 4+i]] column-major
        let a = vec![c(1.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), c(4.0, 1.0)];
        let x_true = [c(0.5, -1.0), c(2.0, 0.3)];
        let b = vec![a[0] * x_true[0] + a[2] * x_true[1], a[1] * x_true[0] + a[3] * x_true[1]];
        let f = QrFactor::new(a, 2, 2).unwrap();
        let (x, r) = f.solve(&b);
        assert!(r < 1e-12);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn overdetermined_residual_is_orthogonal_component() {
        // Single column [1, 1, 0]; b = [1, 0, 1] -> x = 0.5, residual = [0.5, -0.5, 1].
        let f = QrFactor::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 3, 1).unwrap();
        let (x, r) = f.solve(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((x[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((r - 1.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn detects_rank_deficiency() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert!(matches!(QrFactor::new(a, 2, 2), Err(Error::RankDeficient { .. })));
        assert!(matches!(QrFactor::new(vec![c(1.0, 0.0)], 1, 2), Err(Error::SupportTooLarge { .. })));
    }

    #[test]
    fn empty_factor() {
        let f = QrFactor::new(vec![], 3, 0).unwrap();
        let (x, r) = f.solve(&[c(3.0, 0.0), c(0.0, 4.0), c(0.0, 0.0)]);
        assert!(x.is_empty());
        assert!((r - 5.0).abs() < 1e-15);
    }
}
