//! Scalar abstraction.
//!
//! Everything numeric in the crate is generic over [`Real`], implemented for
//! `f32` and `f64`. Complex amplitudes are `num_complex::Complex<T>`, which
//! nalgebra treats as a `ComplexField` so the dense linear algebra (matrix
//! exponential, Hermitian eigensolver) works for both precisions.

use nalgebra::{ComplexField, DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::ToPrimitive;

/// Real scalar usable by the simulation core.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Converts an `f64` literal. Every finite `f64` has a (possibly rounded)
    /// representation in the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over `T`.
pub type Cx<T> = Complex<T>;
/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn i_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{iφ}`.
#[inline]
pub fn cis<T: Real>(phase: T) -> Cx<T> {
    Complex::new(phase.cos(), phase.sin())
}

#[inline]
pub fn modulus<T: Real>(z: Cx<T>) -> T {
    ComplexField::modulus(z)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| modulus(*x - *y))
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// Largest entrywise modulus.
pub fn max_abs<T: Real>(a: &CMatrix<T>) -> T {
    a.iter()
        .map(|x| modulus(*x))
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// `⟨a|b⟩`.
pub fn inner<T: Real>(a: &CVector<T>, b: &CVector<T>) -> Cx<T> {
    a.iter()
        .zip(b.iter())
        .fold(Cx::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}
