//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Floating-point type usable as the real part of matrix entries.
pub trait Real:
    Float + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default relative tolerance for membership and axiom checks.
    fn default_tol() -> Self;

    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
}

/// Complex number over `T`.
pub type Cx<T> = Complex<T>;

pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn real<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Threshold for rank decisions made from singular values: anything below
/// `rank_cut(tol) * sigma_max` counts as zero.
pub(crate) fn rank_cut<T: Real>(tol: T) -> T {
    tol.sqrt()
}

/// Deterministic generator for randomized spot checks.
pub(crate) fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficient vector with entries uniform in the unit square around 0.
pub(crate) fn random_coords<T: Real>(rng: &mut impl rand::Rng, k: usize) -> Vec<Cx<T>> {
    (0..k)
        .map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}
