//! In-place fast Walsh–Hadamard transform and exact Gaussian integers.

use std::ops::{Add, AddAssign, Neg, Sub};

/// `re + i·im` with integer parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };

    pub fn new(re: i64, im: i64) -> GaussianInt {
        GaussianInt { re, im }
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> GaussianInt {
        match k & 3 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    pub fn conj(self) -> GaussianInt {
        GaussianInt::new(self.re, -self.im)
    }

    pub fn scale(self, s: i64) -> GaussianInt {
        GaussianInt::new(self.re * s, self.im * s)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: GaussianInt) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

/// Unnormalized transform `ĝ(u) = Σ_v (-1)^{popcount(u & v)} g(v)`.
///
/// `data.len()` must be a power of two.
pub fn fwht<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "FWHT length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}
