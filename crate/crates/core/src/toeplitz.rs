//! Symmetric Toeplitz matrix-vector products.
//!
//! `T[i][j] = c[|i - j|]`. The fast path embeds `T` into a circulant of size
//! `M = next_pow2(2N - 1)` with first column
//! `[c_0, .., c_{N-1}, 0, .., 0, c_{N-1}, .., c_1]`, whose eigenvalues are the
//! DFT of that column. The eigenvalues are real because the column is
//! symmetric, so only their real parts are kept.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// First column of a symmetric Toeplitz matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricToeplitzKernel {
    first_col: Vec<f64>,
}

impl SymmetricToeplitzKernel {
    pub fn new(first_col: Vec<f64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(invalid("first_col", "kernel needs at least one entry"));
        }
        if first_col.iter().any(|c| !c.is_finite()) {
            return Err(invalid("first_col", "kernel entries must be finite"));
        }
        Ok(Self { first_col })
    }

    pub fn len(&self) -> usize {
        self.first_col.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_col.is_empty()
    }

    pub fn first_col(&self) -> &[f64] {
        &self.first_col
    }

    /// Reference `O(N^2)` product.
    pub fn matvec_naive(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        check_len(n, v.len())?;
        let c = &self.first_col;
        Ok((0..n)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .map(|(j, vj)| c[i.abs_diff(j)] * vj)
                    .sum()
            })
            .collect())
    }

    /// One-shot fast product; prefer [`PreparedToeplitz`] when the kernel is reused.
    pub fn matvec_fft(&self, v: &[f64]) -> Result<Vec<f64>> {
        let prepared = PreparedToeplitz::new(self);
        let mut scratch = prepared.scratch();
        let mut out = vec![0.0; self.len()];
        prepared.matvec_into(v, &mut out, &mut scratch)?;
        Ok(out)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// Circulant embedding with its transform plans and spectrum computed once.
#[derive(Clone)]
pub struct PreparedToeplitz {
    n: usize,
    spectrum: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PreparedToeplitz {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PreparedToeplitz")
            .field("n", &self.n)
            .field("embedding", &self.spectrum.len())
            .finish()
    }
}

/// Per-caller workspace for [`PreparedToeplitz::matvec_into`].
#[derive(Debug, Clone)]
pub struct ToeplitzScratch {
    buf: Vec<Complex64>,
    fft_scratch: Vec<Complex64>,
}

impl PreparedToeplitz {
    pub fn new(kernel: &SymmetricToeplitzKernel) -> Self {
        let n = kernel.len();
        let m = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);

        let c = kernel.first_col();
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        for (k, &ck) in c.iter().enumerate() {
            col[k].re = ck;
            if k > 0 {
                col[m - k].re = ck;
            }
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); forward.get_inplace_scratch_len()];
        forward.process_with_scratch(&mut col, &mut scratch);
        // Fold the 1/M normalization of the inverse transform into the spectrum.
        let scale = 1.0 / m as f64;
        let spectrum = col.iter().map(|z| z.re * scale).collect();
        Self {
            n,
            spectrum,
            forward,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Size of the circulant embedding.
    pub fn embedding_len(&self) -> usize {
        self.spectrum.len()
    }

    pub fn scratch(&self) -> ToeplitzScratch {
        let len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        ToeplitzScratch {
            buf: vec![Complex64::new(0.0, 0.0); self.spectrum.len()],
            fft_scratch: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// `out = T v`.
    pub fn matvec_into(
        &self,
        v: &[f64],
        out: &mut [f64],
        scratch: &mut ToeplitzScratch,
    ) -> Result<()> {
        check_len(self.n, v.len())?;
        check_len(self.n, out.len())?;
        let m = self.spectrum.len();
        if scratch.buf.len() != m {
            *scratch = self.scratch();
        }
        let buf = &mut scratch.buf;
        for (b, &x) in buf.iter_mut().zip(v) {
            *b = Complex64::new(x, 0.0);
        }
        for b in buf[self.n..].iter_mut() {
            *b = Complex64::new(0.0, 0.0);
        }
        self.forward
            .process_with_scratch(buf, &mut scratch.fft_scratch);
        for (b, &s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse
            .process_with_scratch(buf, &mut scratch.fft_scratch);
        for (o, b) in out.iter_mut().zip(buf.iter()) {
            *o = b.re;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(c: &[f64]) -> SymmetricToeplitzKernel {
        SymmetricToeplitzKernel::new(c.to_vec()).unwrap()
    }

    #[test]
    fn identity_kernel() {
        let k = kernel(&[1.0, 0.0, 0.0]);
        let v = [2.5, -1.0, 7.0];
        assert_eq!(k.matvec_naive(&v).unwrap(), v.to_vec());
        let fast = k.matvec_fft(&v).unwrap();
        for (a, b) in fast.iter().zip(v) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn tridiagonal_by_hand() {
        let k = kernel(&[2.0, 1.0, 0.0]);
        assert_eq!(
            k.matvec_naive(&[1.0, 1.0, 1.0]).unwrap(),
            vec![3.0, 4.0, 3.0]
        );
        let fast = k.matvec_fft(&[1.0, 1.0, 1.0]).unwrap();
        for (a, b) in fast.iter().zip([3.0, 4.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn antidiagonal_swap() {
        let k = kernel(&[0.0, 1.0]);
        assert_eq!(k.matvec_naive(&[5.0, 7.0]).unwrap(), vec![7.0, 5.0]);
        let fast = k.matvec_fft(&[5.0, 7.0]).unwrap();
        assert!((fast[0] - 7.0).abs() < 1e-14 && (fast[1] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn single_entry() {
        let k = kernel(&[3.0]);
        assert_eq!(k.matvec_fft(&[2.0]).unwrap().len(), 1);
        assert!((k.matvec_fft(&[2.0]).unwrap()[0] - 6.0).abs() < 1e-14);
    }

    #[test]
    fn length_mismatch() {
        let k = kernel(&[1.0, 2.0]);
        assert!(matches!(
            k.matvec_naive(&[1.0]),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        ));
        assert!(k.matvec_fft(&[1.0, 2.0, 3.0]).is_err());
        assert!(SymmetricToeplitzKernel::new(vec![]).is_err());
        assert!(SymmetricToeplitzKernel::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn embedding_is_power_of_two() {
        let p = PreparedToeplitz::new(&kernel(&[1.0; 5]));
        assert_eq!(p.embedding_len(), 16);
        let p = PreparedToeplitz::new(&kernel(&[1.0; 8]));
        assert_eq!(p.embedding_len(), 16);
    }
}
