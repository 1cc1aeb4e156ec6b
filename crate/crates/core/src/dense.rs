//! Small dense complex matrices and vectors.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub type StateVector = Vec<Complex64>;

/// Row-major `dim × dim` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> DenseOperator {
        DenseOperator { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> DenseOperator {
        let mut m = DenseOperator::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> DenseOperator {
        assert_eq!(data.len(), dim * dim);
        DenseOperator { dim, data }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Complex64]) -> DenseOperator {
        let dim = psi.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in psi {
            for b in psi {
                data.push(a * b.conj());
            }
        }
        DenseOperator { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.dim;
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: Complex64) -> DenseOperator {
        DenseOperator { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add_scaled(&mut self, other: &DenseOperator, s: Complex64) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &DenseOperator) -> Complex64 {
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Complex64]) -> StateVector {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|k| self.data[i * n + k] * v[k]).sum())
            .collect()
    }

    /// `⟨a|self|b⟩`.
    pub fn matrix_element(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        inner(a, &self.apply(b))
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        let n = self.dim;
        assert_eq!(n, rhs.dim);
        let mut out = DenseOperator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(1.0, 0.0));
        out
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        let mut out = self.clone();
        out.add_scaled(rhs, Complex64::new(-1.0, 0.0));
        out
    }
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

pub fn normalize(v: &mut [Complex64]) {
    let norm = norm_sqr(v).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}
