//! Real scalar abstraction shared by every numerical module.
//!
//! All matrix code is written against [`Real`], so the same routines run in
//! `f64` (the default, see the aliases at the crate root) or `f32`. Each
//! implementation carries the tolerance scales that make sense at its
//! precision.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Tolerance for quantities that vanish in exact arithmetic (1e-12 at f64).
    const EXACT_ATOL: f64;
    /// Default rank / PSD tolerance (1e-9 at f64).
    const DEFAULT_TOL: f64;
    /// Acceptance level for derived residuals, e.g. proportionality (1e-7 at f64).
    const LOOSE_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EXACT_ATOL: f64 = 1e-12;
    const DEFAULT_TOL: f64 = 1e-9;
    const LOOSE_TOL: f64 = 1e-7;
}

impl Real for f32 {
    const EXACT_ATOL: f64 = 1e-5;
    const DEFAULT_TOL: f64 = 1e-4;
    const LOOSE_TOL: f64 = 1e-3;
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `|z|` for generic real parts.
#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
