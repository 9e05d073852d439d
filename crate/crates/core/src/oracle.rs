//! Brute-force ground truth: dense PPT checks and seeded product-state
//! sampling of the attainable set `W^β`.
//!
//! Sampling is chunked with a fixed chunk size and a per-chunk generator
//! seeded with `seed + chunk_index`, so the output does not depend on how
//! many threads run the chunks.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::invariant::{partial_transpose, AlphaVector, BetaVector, InvariantBasis, ProductState, SpinPair};
use crate::linalg::{CMatrix, CVector, HermitianOperator};

pub use crate::geometry::convex_hull as convex_hull_2d;

/// Samples per generator chunk.
pub const CHUNK: usize = 4096;

/// The generator used for every seeded computation.
pub type SampleRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Smallest eigenvalue of `T₂ρ`.
pub fn min_partial_transpose_eigenvalue(rho: &HermitianOperator, pair: SpinPair) -> Result<f64> {
    Ok(partial_transpose(rho, pair)?.min_eigenvalue())
}

/// Peres–Horodecki test by dense eigensolve: `λ_min(T₂ρ) >= -tol`.
pub fn ppt_bruteforce(rho: &CMatrix, pair: SpinPair, tol: f64) -> Result<bool> {
    let rho = HermitianOperator::new(rho.clone())?;
    let tr = rho.trace();
    if (tr - 1.0).abs() > tol.max(crate::invariant::TOL_NORMALIZATION) {
        return Err(Error::NotNormalized(tr));
    }
    Ok(min_partial_transpose_eigenvalue(&rho, pair)? >= -tol)
}

/// One standard normal pair by Box–Muller.
pub fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Standard complex Gaussian vector (unnormalized).
pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    CVector::from_fn(dim, |_, _| {
        let (re, im) = gaussian_pair(rng);
        Complex64::new(re, im)
    })
}

/// Haar-uniform unit vector.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = gaussian_vector(dim, rng);
        let n = v.norm();
        if n > 1e-300 {
            return v.unscale(n);
        }
    }
}

/// Both factors Haar-uniform on their unit spheres.
pub fn sample_product_state<R: Rng + ?Sized>(pair: SpinPair, rng: &mut R) -> ProductState {
    let phi1 = haar_vector(pair.n1(), rng);
    let phi2 = haar_vector(pair.n2(), rng);
    ProductState::new(phi1, phi2).expect("unit vectors")
}

/// A random `|m>` basis vector plus a complex Gaussian kick of log-uniform
/// size in `[1e-4, 1]`, normalized.
fn perturbed_basis_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let k = rng.random_range(0..dim);
    let scale = 10f64.powf(-4.0 * rng.random::<f64>());
    let mut v = gaussian_vector(dim, rng).scale(scale);
    v[k] += Complex64::new(1.0, 0.0);
    let n = v.norm();
    v.unscale(n)
}

/// How product states are drawn for a cloud.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingScheme {
    /// Every state Haar.
    Haar,
    /// Half Haar, half perturbed `|m1> ⊗ |m2>` states. Haar samples almost
    /// never come near the extreme points of `W^β` once `N2` grows; the
    /// perturbed basis states do.
    Mixed,
}

pub fn sample_with_scheme<R: Rng + ?Sized>(pair: SpinPair, scheme: SamplingScheme, rng: &mut R) -> ProductState {
    match scheme {
        SamplingScheme::Haar => sample_product_state(pair, rng),
        SamplingScheme::Mixed => {
            if rng.random::<bool>() {
                sample_product_state(pair, rng)
            } else {
                let phi1 = perturbed_basis_vector(pair.n1(), rng);
                let phi2 = perturbed_basis_vector(pair.n2(), rng);
                ProductState::new(phi1, phi2).expect("unit vectors")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleCloud {
    pub pair: SpinPair,
    pub seed: u64,
    pub scheme: SamplingScheme,
    pub points: Vec<BetaVector>,
}

impl SampleCloud {
    /// `(β1, β2)` projections; only for `N1 = 3`.
    pub fn points2(&self) -> Result<Vec<Point2>> {
        if self.pair.n1() != 3 {
            return Err(Error::Unsupported(format!("planar projection needs N1 = 3, got {}", self.pair.n1())));
        }
        Ok(self.points.iter().map(|b| Point2::new(b.components()[1], b.components()[2])).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `count` points `β̃[φ1, φ2]` with the mixed scheme.
pub fn wbeta_cloud(pair: SpinPair, count: usize, seed: u64) -> Result<SampleCloud> {
    wbeta_cloud_with(pair, count, seed, SamplingScheme::Mixed)
}

pub fn wbeta_cloud_with(pair: SpinPair, count: usize, seed: u64, scheme: SamplingScheme) -> Result<SampleCloud> {
    if count == 0 {
        return Err(Error::ParameterRange {
            name: "count",
            value: 0.0,
            range: ">= 1",
        });
    }
    let basis = InvariantBasis::new(pair)?;
    let chunks = count.div_ceil(CHUNK);
    let points = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_from_seed(seed.wrapping_add(c as u64));
            let len = CHUNK.min(count - c * CHUNK);
            (0..len)
                .map(|_| basis.beta_functionals(&sample_with_scheme(pair, scheme, &mut rng)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<Vec<_>>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(SampleCloud {
        pair,
        seed,
        scheme,
        points,
    })
}

/// Invariant state with `p_J` uniform on the probability simplex.
pub fn random_invariant_alpha<R: Rng + ?Sized>(pair: SpinPair, rng: &mut R) -> AlphaVector {
    let e: Vec<f64> = (0..pair.n1()).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    let p: Vec<f64> = e.iter().map(|x| x / s).collect();
    AlphaVector::from_probabilities(pair, &p).expect("length matches")
}
