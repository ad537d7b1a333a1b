//! Complex banded LU with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Factorization of an `n × n` matrix with `kl` sub- and `ku`
/// super-diagonals. Row interchanges widen the upper band to `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    // Row i holds columns i - kl ..= i + kl + ku.
    rows: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl BandLu {
    /// Factors the matrix given by `entry(i, j)`, which is only queried inside
    /// the band.
    pub fn factor<F>(n: usize, kl: usize, ku: usize, entry: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            rows: vec![Complex64::new(0.0, 0.0); n * width],
            pivots: vec![0; n],
        };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                *lu.at_mut(i, j) = entry(i, j);
            }
        }
        lu.eliminate()?;
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i * self.width + (j + self.kl - i)]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.rows[i * self.width + (j + self.kl - i)]
    }

    fn eliminate(&mut self) -> Result<()> {
        let n = self.n;
        let reach = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let mut p = k;
            let mut best = self.at(k, k).norm();
            for i in k + 1..=last_row {
                let v = self.at(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularSystem(0.0));
            }
            self.pivots[k] = p;
            if p != k {
                for j in k..=last_col {
                    let a = self.at(k, j);
                    let b = self.at(p, j);
                    *self.at_mut(k, j) = b;
                    *self.at_mut(p, j) = a;
                }
            }
            let pivot = self.at(k, k);
            for i in k + 1..=last_row {
                let l = self.at(i, k) / pivot;
                *self.at_mut(i, k) = l;
                if l.re == 0.0 && l.im == 0.0 {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = self.at(k, j);
                    *self.at_mut(i, j) -= l * u;
                }
            }
        }
        Ok(())
    }

    /// Solves in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                b[i] -= self.at(i, k) * bk;
            }
        }
        let reach = self.kl + self.ku;
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..=(i + reach).min(n - 1) {
                acc -= self.at(i, j) * b[j];
            }
            b[i] = acc / self.at(i, i);
        }
    }
}
