//! Separability of invariant states of a spin 1 and a spin `j2`
//! (`3 ⊗ N`, `N = 2 j2 + 1`).
//!
//! States live in the `(β1, β2)` plane. The invariant states form the
//! triangle `ABC`, the PPT states the quadrilateral `A E A' D`. For odd `N`
//! every PPT state is separable. For even `N` the separable set is cut off
//! below the line `β2 = ε0(1)` through `F` and has a curved upper boundary
//! through `A`, `F`, `A'`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, convex_hull, point_in_convex_polygon, Point2, TOL_INSIDE};
use crate::halfint::HalfInt;
use crate::invariant::{basis_vector, AlphaVector, BetaVector, InvariantBasis, ProductState, SpinPair};
use crate::linalg::{CMatrix, CVector, HermitianOperator};
use crate::oracle;
use crate::tensors::{spin_matrices, SpinTensors};

/// Validates `N = 2 j2 + 1 >= 3` and returns the pair `(1, j2)`.
pub fn pair_for(n: usize) -> Result<SpinPair> {
    if n < 3 {
        return Err(Error::SystemSize(n));
    }
    SpinPair::new(HalfInt::ONE, HalfInt::from_twice(n as i64 - 1))
}

fn nf(n: usize) -> f64 {
    n as f64
}

/// Vertices of the invariant-state simplex in `(α_{j2-1}, α_{j2}, α_{j2+1})`.
pub fn simplex_vertices_alpha(n: usize) -> Result<[AlphaVector; 3]> {
    let pair = pair_for(n)?;
    let x = nf(n);
    Ok([
        AlphaVector::new(pair, vec![0.0, 0.0, (3.0 * x / (x + 2.0)).sqrt()])?,
        AlphaVector::new(pair, vec![(3.0 * x / (x - 2.0)).sqrt(), 0.0, 0.0])?,
        AlphaVector::new(pair, vec![0.0, 3f64.sqrt(), 0.0])?,
    ])
}

/// Named points of the `3 ⊗ N` picture, from closed forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertices {
    pub n: usize,
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
    pub a_prime: Point2,
    pub d: Point2,
    pub e: Point2,
    /// Only for even `N`.
    pub f: Option<Point2>,
}

pub fn vertices(n: usize) -> Result<Vertices> {
    pair_for(n)?;
    let x = nf(n);
    let a = Point2::new(
        (3.0 * (x - 1.0) / (2.0 * (x + 1.0))).sqrt(),
        ((x - 1.0) * (x - 2.0) / (2.0 * (x + 1.0) * (x + 2.0))).sqrt(),
    );
    let b = Point2::new(
        -(3.0 * (x + 1.0) / (2.0 * (x - 1.0))).sqrt(),
        ((x + 1.0) * (x + 2.0) / (2.0 * (x - 1.0) * (x - 2.0))).sqrt(),
    );
    let c = Point2::new(
        -(6.0 / ((x - 1.0) * (x + 1.0))).sqrt(),
        -(2.0 * (x - 2.0) * (x + 2.0) / ((x - 1.0) * (x + 1.0))).sqrt(),
    );
    let d = Point2::new(0.0, -(2.0 * (x - 1.0) * (x - 2.0) / ((x + 1.0) * (x + 2.0))).sqrt());
    let e = Point2::new(0.0, ((x + 1.0) * (x - 1.0) / (2.0 * (x + 2.0) * (x - 2.0))).sqrt());
    Ok(Vertices {
        n,
        a,
        b,
        c,
        a_prime: a.reflect(),
        d,
        e,
        f: point_f(n).ok(),
    })
}

/// `F = (0, ε0(1))`, even `N` only.
pub fn point_f(n: usize) -> Result<Point2> {
    pair_for(n)?;
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("point F needs even N, got {n}")));
    }
    Ok(Point2::new(0.0, epsilon0_closed(n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Polygon,
    PolygonPlusCurve,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub param: f64,
    pub point: Point2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region2 {
    pub kind: RegionKind,
    /// Counterclockwise. For `PolygonPlusCurve` this is the full polygonal
    /// approximation, curve points included.
    pub vertices: Vec<Point2>,
    pub curve: Option<Vec<CurvePoint>>,
}

impl Region2 {
    fn polygon(vertices: Vec<Point2>) -> Self {
        Region2 {
            kind: RegionKind::Polygon,
            vertices,
            curve: None,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_convex_polygon(&self.vertices, p, TOL_INSIDE)
    }

    pub fn area(&self) -> f64 {
        geometry::area(&self.vertices)
    }
}

/// `S^β`: triangle `A B C`.
pub fn state_triangle(n: usize) -> Result<Region2> {
    let v = vertices(n)?;
    Ok(Region2::polygon(vec![v.a, v.b, v.c]))
}

/// `S^β_ppt`: quadrilateral `A E A' D`.
pub fn ppt_polygon(n: usize) -> Result<Region2> {
    let v = vertices(n)?;
    Ok(Region2::polygon(vec![v.a, v.e, v.a_prime, v.d]))
}

/// Separable set. Exact for odd `N`; for even `N` the certified inner
/// approximation built from extreme product states.
pub fn separable_region(n: usize) -> Result<Region2> {
    if n % 2 == 1 {
        return ppt_polygon(n);
    }
    Ok(Classifier::new(n)?.inner_region().clone())
}

// ---------------------------------------------------------------------------
// Spectral analysis of H(λ)

struct Spin2Ops {
    t10: DMatrix<f64>,
    h0: DMatrix<f64>,
    h1: DMatrix<f64>,
}

impl Spin2Ops {
    fn new(n: usize) -> Result<Self> {
        let pair = pair_for(n)?;
        let t = SpinTensors::new(pair.j2(), 2)?;
        let x = nf(n);
        let re = |m: &CMatrix| m.map(|z| z.re);
        let t22 = t.get(2, 2);
        Ok(Spin2Ops {
            t10: re(t.get(1, 0)),
            h0: re(t.get(2, 0)) * (x / 10.0).sqrt(),
            h1: re(&(t22 + t22.adjoint())) * (0.5 * (3.0 * x / 5.0).sqrt()),
        })
    }
}

fn check_unit_interval(name: &'static str, value: f64, lo: f64) -> Result<()> {
    if (lo..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value,
            range: if lo == 0.0 { "[0, 1]" } else { "[-1, 1]" },
        })
    }
}

/// `H(λ) = H0 + λ H1` on the spin `j2`.
pub fn h_lambda(n: usize, lambda: f64) -> Result<HermitianOperator> {
    check_unit_interval("lambda", lambda, 0.0)?;
    let ops = Spin2Ops::new(n)?;
    HermitianOperator::from_real(&(&ops.h0 + &ops.h1 * lambda))
}

/// `H(1)` written through spin operators:
/// `2 sqrt(2/((N+2)(N+1)(N-1)(N-2))) (ĵ² - 3 ĵ_y²)`.
pub fn h_one_spin_form(n: usize) -> Result<HermitianOperator> {
    let pair = pair_for(n)?;
    let j = pair.j2();
    let x = nf(n);
    let [_, jy, _] = spin_matrices(j);
    let jj = j.to_f64() * (j.to_f64() + 1.0);
    let pref = 2.0 * (2.0 / ((x + 2.0) * (x + 1.0) * (x - 1.0) * (x - 2.0))).sqrt();
    let m = (CMatrix::identity(n, n).scale(jj) - (&jy * &jy).scale(3.0)).scale(pref);
    HermitianOperator::new(m)
}

fn lambda_max(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Largest eigenvalue of `H(λ)`.
pub fn epsilon0(n: usize, lambda: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda, 0.0)?;
    let ops = Spin2Ops::new(n)?;
    Ok(lambda_max(&(&ops.h0 + &ops.h1 * lambda)))
}

/// `sqrt((N+2)(N-2) / (2(N+1)(N-1)))`, the value of `ε0(1)` for even `N`.
pub fn epsilon0_closed(n: usize) -> f64 {
    let x = nf(n);
    ((x + 2.0) * (x - 2.0) / (2.0 * (x + 1.0) * (x - 1.0))).sqrt()
}

/// `ε0` on a uniform `λ` grid with monotonicity and convexity verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonScan {
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub min_first_difference: f64,
    pub min_second_difference: f64,
    pub monotone: bool,
    pub convex: bool,
}

/// Slack for the grid monotonicity and convexity checks.
pub const TOL_SCAN: f64 = 1e-9;

pub fn epsilon_scan(n: usize, points: usize) -> Result<EpsilonScan> {
    if points < 3 {
        return Err(Error::ParameterRange {
            name: "grid",
            value: points as f64,
            range: ">= 3",
        });
    }
    let ops = Spin2Ops::new(n)?;
    let lambdas: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let values: Vec<f64> = lambdas.iter().map(|&l| lambda_max(&(&ops.h0 + &ops.h1 * l))).collect();
    let d1 = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let d2 = values.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).fold(f64::INFINITY, f64::min);
    Ok(EpsilonScan {
        n,
        lambdas,
        values,
        min_first_difference: d1,
        min_second_difference: d2,
        monotone: d1 >= -TOL_SCAN,
        convex: d2 >= -TOL_SCAN,
    })
}

/// Ascending eigenvalues fall into consecutive pairs equal within `tol`.
pub fn has_even_multiplicity(sorted: &[f64], tol: f64) -> bool {
    sorted.len().is_multiple_of(2) && sorted.chunks(2).all(|p| (p[1] - p[0]).abs() <= tol)
}

// ---------------------------------------------------------------------------
// Ellipse through F

/// `(sqrt(3N² / (8(N+1)(N-1))) μ, (ε0(1)/4)(1 + 3 sqrt(1 - μ²)))`.
pub fn ellipse_curve(n: usize, mu: f64) -> Result<Point2> {
    pair_for(n)?;
    check_unit_interval("mu", mu, -1.0)?;
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("ellipse curve needs even N, got {n}")));
    }
    let x = nf(n);
    Ok(Point2::new(
        (3.0 * x * x / (8.0 * (x + 1.0) * (x - 1.0))).sqrt() * mu,
        epsilon0_closed(n) / 4.0 * (1.0 + 3.0 * (1.0 - mu * mu).max(0.0).sqrt()),
    ))
}

/// `√r |1,+1> + √(1-r) |1,-1>`.
pub fn spin1_state(r: f64) -> Result<CVector> {
    check_unit_interval("r", r, 0.0)?;
    let mut v = CVector::zeros(3);
    v[2] = Complex64::new(r.sqrt(), 0.0);
    v[0] = Complex64::new((1.0 - r).sqrt(), 0.0);
    Ok(v)
}

/// The fixed second-spin state of the ellipse family: the combination of
/// `|ĵ_y = ±1/2>` with `<ĵ_z> = +N/4`. It is a top eigenvector of `H(1)`
/// and fixes the sign of `β1` along the curve.
pub fn ellipse_phi2(n: usize) -> Result<CVector> {
    let pair = pair_for(n)?;
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("ellipse curve needs even N, got {n}")));
    }
    let [_, jy, jz] = spin_matrices(pair.j2());
    let (vals, vecs) = HermitianOperator::new(jy)?.eigh();
    let pick = |target: f64| {
        let i = vals.iter().position(|&v| (v - target).abs() < 1e-9).expect("jy eigenvalue ±1/2");
        vecs.column(i).into_owned()
    };
    let up = pick(0.5);
    let down = pick(-0.5);
    let z = |a: &CVector, b: &CVector| a.dotc(&(&jz * b));
    let block = CMatrix::from_row_slice(2, 2, &[z(&up, &up), z(&up, &down), z(&down, &up), z(&down, &down)]);
    let (_, c) = HermitianOperator::new(block)?.eigh();
    let v = up * c[(0, 1)] + down * c[(1, 1)];
    let norm = v.norm();
    Ok(v.unscale(norm))
}

/// Product state whose `β̃` is `ellipse_curve(n, mu)`.
pub fn ellipse_state(n: usize, mu: f64) -> Result<ProductState> {
    check_unit_interval("mu", mu, -1.0)?;
    ProductState::new(spin1_state((1.0 + mu) / 2.0)?, ellipse_phi2(n)?)
}

// ---------------------------------------------------------------------------
// Witness and PPT inequalities

/// `-P_{j2-1}/(N-2) + P_{j2} + P_{j2+1}/(N+2)`. Nonnegative on separable
/// states for even `N`; for odd `N` it is not a witness (`E` is separable
/// and violates it).
pub fn witness_operator(n: usize) -> Result<HermitianOperator> {
    let pair = pair_for(n)?;
    let basis = InvariantBasis::new(pair)?;
    let weights = witness_weights(n);
    let mut w = CMatrix::zeros(pair.dim(), pair.dim());
    for (p, c) in basis.projectors().iter().zip(weights) {
        w += p.matrix().scale(c);
    }
    HermitianOperator::new(w)
}

fn witness_weights(n: usize) -> [f64; 3] {
    let x = nf(n);
    [-1.0 / (x - 2.0), 1.0, 1.0 / (x + 2.0)]
}

/// Probability slack for `p_J >= 0`.
pub const TOL_PROBABILITY: f64 = 1e-12;

pub fn check_probabilities(p: &[f64]) -> Result<[f64; 3]> {
    let arr: [f64; 3] = p
        .try_into()
        .map_err(|_| Error::InvalidProbabilities(format!("expected 3 values, got {}", p.len())))?;
    if arr.iter().any(|x| !x.is_finite() || *x < -TOL_PROBABILITY) {
        return Err(Error::InvalidProbabilities(format!("negative or non-finite entry in {arr:?}")));
    }
    let s: f64 = arr.iter().sum();
    if (s - 1.0).abs() > crate::invariant::TOL_NORMALIZATION {
        return Err(Error::InvalidProbabilities(format!("sum is {s}")));
    }
    Ok(arr)
}

/// `tr{𝒲ρ}` from the total angular momentum distribution
/// `p = (p_{j2-1}, p_{j2}, p_{j2+1})`.
pub fn witness_value(p: &[f64], n: usize) -> Result<f64> {
    pair_for(n)?;
    Ok(protocol_values(&check_probabilities(p)?, n).witness)
}

/// Left-hand sides of the two linear PPT conditions; both `>= 0` iff PPT.
pub fn ppt_inequalities(p: &[f64], n: usize) -> Result<(f64, f64)> {
    pair_for(n)?;
    let v = protocol_values(&check_probabilities(p)?, n);
    Ok((v.ppt_first, v.ppt_second))
}

/// The three linear functionals of the detection protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolValues {
    pub witness: f64,
    pub ppt_first: f64,
    pub ppt_second: f64,
}

/// Evaluates the protocol functionals without validating `p`.
pub fn protocol_values(p: &[f64; 3], n: usize) -> ProtocolValues {
    let [p0, p1, p2] = *p;
    let x = nf(n);
    ProtocolValues {
        witness: p.iter().zip(witness_weights(n)).map(|(a, b)| a * b).sum(),
        ppt_first: -2.0 * p0 / (x - 1.0) + (x * x - 5.0) * p1 / ((x + 1.0) * (x - 1.0)) + 2.0 * p2 / (x + 1.0),
        ppt_second: 2.0 * p0 / ((x - 1.0) * (x - 2.0)) - 2.0 * p1 / (x - 1.0) + p2,
    }
}

// ---------------------------------------------------------------------------
// Support function of W^β

/// `h(n) = max over product states of n · β̃`.
///
/// Rotating the spin-1 factor into `cos(θ/2)|1,+1> + sin(θ/2)|1,-1>` leaves
/// `n · β̃ = <φ2| n1 √(N/2) cosθ T10 + n2 H(sinθ) |φ2>`, so `h` is a 1-D
/// maximum of a largest eigenvalue over `θ ∈ [0, π]`.
pub struct SupportFunction {
    n: usize,
    basis: InvariantBasis,
    ops: Spin2Ops,
}

/// Extreme product state in a given direction.
#[derive(Clone, Debug)]
pub struct Support {
    pub value: f64,
    pub theta: f64,
    pub state: ProductState,
    /// `β̃` of `state`, recomputed from the general functionals.
    pub point: Point2,
}

const THETA_GRID: usize = 181;

impl SupportFunction {
    pub fn new(n: usize) -> Result<Self> {
        Ok(SupportFunction {
            n,
            basis: InvariantBasis::new(pair_for(n)?)?,
            ops: Spin2Ops::new(n)?,
        })
    }

    fn matrix(&self, dir: Point2, theta: f64) -> DMatrix<f64> {
        let c = (nf(self.n) / 2.0).sqrt() * dir.beta1 * theta.cos();
        &self.ops.t10 * c + (&self.ops.h0 + &self.ops.h1 * theta.sin()) * dir.beta2
    }

    fn objective(&self, dir: Point2, theta: f64) -> f64 {
        lambda_max(&self.matrix(dir, theta))
    }

    /// `dir` need not be normalized; the value scales with it.
    pub fn evaluate(&self, dir: Point2) -> Result<Support> {
        let grid: Vec<f64> = (0..THETA_GRID).map(|i| PI * i as f64 / (THETA_GRID - 1) as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.objective(dir, t)).collect();
        let mut order: Vec<usize> = (0..THETA_GRID).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        let mut best = (vals[order[0]], grid[order[0]]);
        for &i in order.iter().take(3) {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(THETA_GRID - 1)];
            let (t, v) = golden_max(|t| self.objective(dir, t), lo, hi);
            if v > best.0 {
                best = (v, t);
            }
        }
        let (value, theta) = best;
        let eig = SymmetricEigen::new(self.matrix(dir, theta));
        let top = (0..self.n).max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
        let phi2 = CVector::from_iterator(self.n, eig.eigenvectors.column(top).iter().map(|&x| Complex64::new(x, 0.0)));
        let mut phi1 = CVector::zeros(3);
        phi1[2] = Complex64::new((theta / 2.0).cos(), 0.0);
        phi1[0] = Complex64::new((theta / 2.0).sin(), 0.0);
        let state = ProductState::normalized(phi1, phi2)?;
        let b = self.basis.beta_functionals(&state)?;
        Ok(Support {
            value,
            theta,
            point: Point2::new(b.components()[1], b.components()[2]),
            state,
        })
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-11 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = (a + b) / 2.0;
    (t, f(t))
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictClass {
    NotAState,
    Separable,
    PptEntangled,
    NptEntangled,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub class: VerdictClass,
    pub certificate: String,
}

impl Verdict {
    fn new(class: VerdictClass, certificate: impl Into<String>) -> Self {
        Verdict {
            class,
            certificate: certificate.into(),
        }
    }
}

/// Margin above the line `h` before a point is declared entangled by the
/// witness.
pub const SEP_MARGIN: f64 = 1e-9;
/// Margin by which a point must exceed a supporting line to be declared
/// entangled.
pub const ENT_MARGIN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifierOptions {
    /// Directions at which the support function seeds the inner hull.
    pub directions: usize,
    /// Extra random product states added to the inner hull when seeded.
    pub samples: usize,
    pub seed: Option<u64>,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        ClassifierOptions {
            directions: 256,
            samples: 10_000,
            seed: None,
        }
    }
}

/// Decides where a `3 ⊗ N` invariant state sits. The even-`N` machinery is
/// built on first use.
pub struct Classifier {
    n: usize,
    options: ClassifierOptions,
    vertices: Vertices,
    triangle: Region2,
    ppt: Region2,
    l: DMatrix<f64>,
    even: OnceLock<EvenData>,
}

struct EvenData {
    support: SupportFunction,
    inner: Region2,
}

impl Classifier {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_options(n, ClassifierOptions::default())
    }

    pub fn with_options(n: usize, options: ClassifierOptions) -> Result<Self> {
        let pair = pair_for(n)?;
        Ok(Classifier {
            n,
            options,
            vertices: vertices(n)?,
            triangle: state_triangle(n)?,
            ppt: ppt_polygon(n)?,
            l: crate::invariant::l_matrix(pair, crate::invariant::LMethod::SixJ)?.values,
            even: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `β = L α` for the distribution `p`.
    pub fn beta_from_probabilities(&self, p: &[f64]) -> Result<BetaVector> {
        let p = check_probabilities(p)?;
        let pair = pair_for(self.n)?;
        let alpha = AlphaVector::from_probabilities(pair, &p)?;
        let b = &self.l * nalgebra::DVector::from_column_slice(alpha.components());
        BetaVector::new(pair, b.iter().copied().collect())
    }

    /// `p` for a beta vector (`α = Lᵀ β`).
    pub fn probabilities_from_beta(&self, beta: &BetaVector) -> Result<[f64; 3]> {
        let pair = pair_for(self.n)?;
        if beta.pair() != pair {
            return Err(Error::Dimension {
                expected: pair.dim(),
                got: beta.pair().dim(),
            });
        }
        let a = self.l.transpose() * nalgebra::DVector::from_column_slice(beta.components());
        let p = AlphaVector::new(pair, a.iter().copied().collect())?.probabilities();
        Ok([p[0], p[1], p[2]])
    }

    fn even_data(&self) -> Result<&EvenData> {
        if let Some(d) = self.even.get() {
            return Ok(d);
        }
        let data = self.build_even()?;
        Ok(self.even.get_or_init(|| data))
    }

    fn build_even(&self) -> Result<EvenData> {
        let support = SupportFunction::new(self.n)?;
        let v = &self.vertices;
        let mut pts = vec![v.a, v.a_prime, v.d];
        pts.extend(v.f);
        for i in 0..=100 {
            pts.push(ellipse_curve(self.n, -1.0 + i as f64 / 50.0)?);
        }
        for k in 0..self.options.directions {
            let phi = 2.0 * PI * k as f64 / self.options.directions as f64;
            pts.push(support.evaluate(Point2::new(phi.cos(), phi.sin()))?.point);
        }
        if let Some(seed) = self.options.seed {
            if self.options.samples > 0 {
                pts.extend(oracle::wbeta_cloud(pair_for(self.n)?, self.options.samples, seed)?.points2()?);
            }
        }
        let hull = convex_hull(&pts).vertices;
        // Upper arc: hull vertices strictly above the segment A'A, walked
        // counterclockwise from A to A'.
        let above: Vec<Point2> = hull
            .iter()
            .copied()
            .filter(|p| geometry::cross(v.a_prime, v.a, *p) > -1e-12)
            .collect();
        let start = (0..above.len())
            .min_by(|&i, &j| above[i].distance(v.a).total_cmp(&above[j].distance(v.a)))
            .unwrap_or(0);
        let mut arc: Vec<Point2> = above[start..].to_vec();
        arc.extend_from_slice(&above[..start]);
        let mut len = vec![0.0];
        for w in arc.windows(2) {
            len.push(len.last().unwrap() + w[0].distance(w[1]));
        }
        let total = len.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let curve = arc
            .iter()
            .zip(&len)
            .map(|(p, l)| CurvePoint {
                param: l / total,
                point: *p,
            })
            .collect();
        Ok(EvenData {
            support,
            inner: Region2 {
                kind: RegionKind::PolygonPlusCurve,
                vertices: hull,
                curve: Some(curve),
            },
        })
    }

    /// The separable region, or its inner approximation for even `N`.
    pub fn inner_region(&self) -> &Region2 {
        if self.n % 2 == 1 {
            return &self.ppt;
        }
        &self.even_data().expect("validated at construction").inner
    }

    pub fn classify(&self, beta: &BetaVector) -> Result<Verdict> {
        let pair = pair_for(self.n)?;
        if beta.pair() != pair {
            return Err(Error::Dimension {
                expected: pair.dim(),
                got: beta.pair().dim(),
            });
        }
        if !beta.is_state() {
            return Err(Error::NotNormalizedBeta(beta.components()[0]));
        }
        self.classify_point(Point2::new(beta.components()[1], beta.components()[2]))
    }

    pub fn classify_point(&self, p: Point2) -> Result<Verdict> {
        use VerdictClass::*;
        if !p.is_finite() {
            return Err(Error::InvalidProbabilities(format!("non-finite point {p:?}")));
        }
        if !self.triangle.contains(p) {
            let d = geometry::outside_distance(&self.triangle.vertices, p);
            return Ok(Verdict::new(NotAState, format!("outside the invariant-state triangle ABC by {d:.3e}")));
        }
        if !self.ppt.contains(p) {
            let d = geometry::outside_distance(&self.ppt.vertices, p);
            return Ok(Verdict::new(
                NptEntangled,
                format!("outside the PPT polygon A E A' D by {d:.3e}; partial transpose has a negative eigenvalue"),
            ));
        }
        if self.n % 2 == 1 {
            return Ok(Verdict::new(Separable, "inside the PPT polygon; for odd N every PPT invariant state is separable"));
        }
        let data = self.even_data()?;
        // Every hull vertex is the image of an explicit product state, so the
        // hull itself (boundary included) is separable.
        if point_in_convex_polygon(&data.inner.vertices, p, TOL_INSIDE) {
            return Ok(Verdict::new(
                Separable,
                "inside the convex hull of attained product-state points (A, A', D, F, ellipse arc, extreme states)",
            ));
        }
        let eps = epsilon0_closed(self.n);
        if p.beta2 > eps + SEP_MARGIN {
            return Ok(Verdict::new(
                PptEntangled,
                format!("PPT but beta2 = {:.12} exceeds the tangent line h at beta2 = {eps:.12}: witness W is violated", p.beta2),
            ));
        }
        let q = geometry::nearest_boundary_point(&data.inner.vertices, p);
        let mut dirs = vec![p - q];
        let hull = &data.inner.vertices;
        for i in 0..hull.len() {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            if geometry::cross(a, b, p) < 0.0 {
                dirs.push(Point2::new(b.beta2 - a.beta2, a.beta1 - b.beta1));
            }
        }
        for dir in dirs {
            let norm = dir.norm();
            if norm == 0.0 {
                continue;
            }
            let dir = dir * (1.0 / norm);
            let s = data.support.evaluate(dir)?;
            let excess = dir.dot(p) - s.value;
            if excess > ENT_MARGIN {
                return Ok(Verdict::new(
                    PptEntangled,
                    format!(
                        "PPT but violates the linear witness with normal ({:.6}, {:.6}): n.beta exceeds the product-state maximum by {excess:.3e}",
                        dir.beta1, dir.beta2
                    ),
                ));
            }
        }
        Ok(Verdict::new(Unknown, "PPT, below the line h, between the certified inner hull and the tested supporting lines"))
    }
}

/// One-shot classification with default options.
pub fn classify(beta: &BetaVector, n: usize) -> Result<Verdict> {
    Classifier::new(n)?.classify(beta)
}

/// `|1,0> ⊗ |j2, m2>`, the product states behind `E`, `D` and `F`.
pub fn vertex_state(n: usize, m2: HalfInt) -> Result<ProductState> {
    let pair = pair_for(n)?;
    crate::wigner::check_projection(pair.j2(), m2)?;
    ProductState::new(basis_vector(HalfInt::ONE, HalfInt::ZERO), basis_vector(pair.j2(), m2))
}
