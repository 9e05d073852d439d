//! Rotationally invariant operators on `C^{N1} ⊗ C^{N2}` and the two
//! coordinate systems for invariant states.
//!
//! * alpha-coordinates expand a state in the total angular momentum
//!   projectors `P_J`, `J = j2 - j1 ..= j1 + j2`.
//! * beta-coordinates expand it in `Q_K = Σ_q T^(1)_{Kq} ⊗ T^(2)†_{Kq}`,
//!   `K = 0 ..= 2 j1`, in which partial time reversal acts diagonally.
//!
//! Both are normalized so that `β = L α` with `L` orthogonal.
//!
//! Product-space index of `|m1> ⊗ |m2>` is `i1 * N2 + i2`, with `i1`, `i2`
//! the ascending-`m` indices of the factors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{CMatrix, CVector, HermitianOperator};
use crate::surd::SqrtRational;
use crate::tensors::{pi_rotation_matrix, SpinTensors};
use crate::wigner::{clebsch_gordan, triangle_ok, wigner_6j};

/// Positivity slack for alpha components of a state.
pub const TOL_POSITIVITY: f64 = 1e-12;
/// Normalization slack for `tr ρ = 1` in either coordinate system.
pub const TOL_NORMALIZATION: f64 = 1e-10;
/// Norm slack for state vectors.
pub const TOL_NORM: f64 = 1e-12;

/// Two spins `j1 <= j2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinPair {
    j1: HalfInt,
    j2: HalfInt,
}

impl SpinPair {
    pub fn new(j1: HalfInt, j2: HalfInt) -> Result<Self> {
        for j in [j1, j2] {
            if !j.is_nonnegative() {
                return Err(Error::NegativeSpin(j));
            }
        }
        if j1 > j2 {
            return Err(Error::UnorderedPair(j1, j2));
        }
        Ok(SpinPair { j1, j2 })
    }

    pub fn j1(&self) -> HalfInt {
        self.j1
    }

    pub fn j2(&self) -> HalfInt {
        self.j2
    }

    pub fn n1(&self) -> usize {
        self.j1.multiplicity()
    }

    pub fn n2(&self) -> usize {
        self.j2.multiplicity()
    }

    pub fn dim(&self) -> usize {
        self.n1() * self.n2()
    }

    /// Total angular momenta `J`, ascending. There are `N1` of them.
    pub fn total_spins(&self) -> Vec<HalfInt> {
        let lo = self.j2 - self.j1;
        (0..self.n1() as i64).map(|k| lo + HalfInt::integer(k)).collect()
    }

    /// Ranks `K = 0 ..= 2 j1`.
    pub fn ranks(&self) -> Vec<i64> {
        (0..=self.j1.twice()).collect()
    }

    pub fn product_index(&self, m1: HalfInt, m2: HalfInt) -> usize {
        self.j1.index_of(m1) * self.n2() + self.j2.index_of(m2)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.dim(),
                got,
            })
        }
    }
}

fn same_pair(a: &SpinPair, b: &SpinPair) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: a.dim(),
            got: b.dim(),
        })
    }
}

/// Coordinates `α_J` of an invariant operator in the `P_J` basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaVector {
    pair: SpinPair,
    components: Vec<f64>,
}

impl AlphaVector {
    pub fn new(pair: SpinPair, components: Vec<f64>) -> Result<Self> {
        if components.len() != pair.n1() {
            return Err(Error::Dimension {
                expected: pair.n1(),
                got: components.len(),
            });
        }
        Ok(AlphaVector { pair, components })
    }

    /// Alpha vector whose total angular momentum distribution is `p`
    /// (`p_J = tr{P_J ρ}`).
    pub fn from_probabilities(pair: SpinPair, p: &[f64]) -> Result<Self> {
        let nn = pair.dim() as f64;
        let comps = pair
            .total_spins()
            .iter()
            .zip(p)
            .map(|(jt, &pj)| pj * (nn / (jt.twice() + 1) as f64).sqrt())
            .collect();
        Self::new(pair, comps)
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// The `J` each slot refers to.
    pub fn labels(&self) -> Vec<HalfInt> {
        self.pair.total_spins()
    }

    pub fn get(&self, total: HalfInt) -> Option<f64> {
        self.labels().iter().position(|&l| l == total).map(|i| self.components[i])
    }

    /// `p_J = tr{P_J ρ} = α_J sqrt((2J+1)/(N1 N2))`.
    pub fn probabilities(&self) -> Vec<f64> {
        let nn = self.pair.dim() as f64;
        self.labels()
            .iter()
            .zip(&self.components)
            .map(|(jt, a)| a * ((jt.twice() + 1) as f64 / nn).sqrt())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.probabilities().iter().sum()
    }

    /// Positive and normalized, i.e. the coordinates of a density matrix.
    pub fn is_state(&self) -> bool {
        self.components.iter().all(|&a| a >= -TOL_POSITIVITY) && (self.trace() - 1.0).abs() <= TOL_NORMALIZATION
    }
}

/// Coordinates `β_K` of an invariant operator in the `Q_K` basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaVector {
    pair: SpinPair,
    components: Vec<f64>,
}

impl BetaVector {
    pub fn new(pair: SpinPair, components: Vec<f64>) -> Result<Self> {
        if components.len() != pair.n1() {
            return Err(Error::Dimension {
                expected: pair.n1(),
                got: components.len(),
            });
        }
        Ok(BetaVector { pair, components })
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// The rank `K` each slot refers to.
    pub fn labels(&self) -> Vec<i64> {
        self.pair.ranks()
    }

    pub fn get(&self, rank: i64) -> Option<f64> {
        self.components.get(usize::try_from(rank).ok()?).copied()
    }

    pub fn is_state(&self) -> bool {
        (self.components[0] - 1.0).abs() <= TOL_NORMALIZATION
    }
}

/// A pure product state `|φ1> ⊗ |φ2>` with unit-norm factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    phi1: CVector,
    phi2: CVector,
}

impl ProductState {
    pub fn new(phi1: CVector, phi2: CVector) -> Result<Self> {
        for v in [&phi1, &phi2] {
            let n = v.norm();
            if (n - 1.0).abs() > TOL_NORM {
                return Err(Error::NotNormalized(n));
            }
        }
        Ok(ProductState { phi1, phi2 })
    }

    /// Normalizes both factors first; fails only on zero vectors.
    pub fn normalized(phi1: CVector, phi2: CVector) -> Result<Self> {
        let n1 = phi1.norm();
        let n2 = phi2.norm();
        if n1 == 0.0 || n2 == 0.0 || !n1.is_finite() || !n2.is_finite() {
            return Err(Error::NotNormalized(n1.min(n2)));
        }
        Ok(ProductState {
            phi1: phi1.unscale(n1),
            phi2: phi2.unscale(n2),
        })
    }

    /// `|j1, m1> ⊗ |j2, m2>`.
    pub fn basis(pair: SpinPair, m1: HalfInt, m2: HalfInt) -> Result<Self> {
        crate::wigner::check_projection(pair.j1(), m1)?;
        crate::wigner::check_projection(pair.j2(), m2)?;
        Ok(ProductState {
            phi1: basis_vector(pair.j1(), m1),
            phi2: basis_vector(pair.j2(), m2),
        })
    }

    pub fn phi1(&self) -> &CVector {
        &self.phi1
    }

    pub fn phi2(&self) -> &CVector {
        &self.phi2
    }

    /// The product vector on the composite space.
    pub fn tensor(&self) -> CVector {
        self.phi1.kronecker(&self.phi2)
    }

    pub fn density_matrix(&self) -> HermitianOperator {
        let v = self.tensor();
        HermitianOperator::new(&v * v.adjoint()).expect("outer product is Hermitian")
    }

    fn check(&self, pair: &SpinPair) -> Result<()> {
        if self.phi1.len() != pair.n1() {
            return Err(Error::Dimension {
                expected: pair.n1(),
                got: self.phi1.len(),
            });
        }
        if self.phi2.len() != pair.n2() {
            return Err(Error::Dimension {
                expected: pair.n2(),
                got: self.phi2.len(),
            });
        }
        Ok(())
    }
}

/// `|j, m>` as a unit vector.
pub fn basis_vector(j: HalfInt, m: HalfInt) -> CVector {
    let mut v = CVector::zeros(j.multiplicity());
    v[j.index_of(m)] = Complex64::new(1.0, 0.0);
    v
}

fn check_total(pair: &SpinPair, total: HalfInt) -> Result<()> {
    if triangle_ok(pair.j1(), pair.j2(), total) {
        Ok(())
    } else {
        Err(Error::Triangle(pair.j1(), pair.j2(), total))
    }
}

fn check_rank(pair: &SpinPair, rank: i64) -> Result<()> {
    if (0..=pair.j1().twice()).contains(&rank) {
        Ok(())
    } else {
        Err(Error::RankOutOfRange { j: pair.j1(), rank })
    }
}

/// `|J M> = Σ <j1 m1; j2 m2|J M> |m1> ⊗ |m2>`.
pub fn coupled_state(pair: SpinPair, total: HalfInt, projection: HalfInt) -> Result<CVector> {
    check_total(&pair, total)?;
    crate::wigner::check_projection(total, projection)?;
    let mut v = CVector::zeros(pair.dim());
    for m1 in pair.j1().projections() {
        let m2 = projection - m1;
        if m2.abs() > pair.j2() {
            continue;
        }
        let cg = clebsch_gordan(pair.j1(), m1, pair.j2(), m2, total, projection)?;
        v[pair.product_index(m1, m2)] = Complex64::new(cg.to_f64(), 0.0);
    }
    Ok(v)
}

/// Projector onto total angular momentum `J`.
pub fn projector_pj(pair: SpinPair, total: HalfInt) -> Result<HermitianOperator> {
    check_total(&pair, total)?;
    let mut p = CMatrix::zeros(pair.dim(), pair.dim());
    for m in total.projections() {
        let v = coupled_state(pair, total, m)?;
        p += &v * v.adjoint();
    }
    HermitianOperator::new(p)
}

/// `Q_K = Σ_q T^(1)_{Kq} ⊗ T^(2)†_{Kq}`.
pub fn operator_qk(pair: SpinPair, rank: i64) -> Result<HermitianOperator> {
    check_rank(&pair, rank)?;
    let t1 = SpinTensors::new(pair.j1(), rank)?;
    let t2 = SpinTensors::new(pair.j2(), rank)?;
    qk_from(&pair, &t1, &t2, rank)
}

fn qk_from(pair: &SpinPair, t1: &SpinTensors, t2: &SpinTensors, rank: i64) -> Result<HermitianOperator> {
    let mut q_op = CMatrix::zeros(pair.dim(), pair.dim());
    for q in -rank..=rank {
        q_op += t1.get(rank, q).kronecker(&t2.get(rank, q).adjoint());
    }
    HermitianOperator::new(q_op)
}

/// How to build the `L` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LMethod {
    /// `tr{Q_K P_J} / sqrt((2K+1)(2J+1))` from explicit matrices.
    Trace,
    /// `sqrt((2K+1)(2J+1)) (-1)^(j1+j2+J) {j1 j2 J; j2 j1 K}`, exact.
    SixJ,
    /// Tabulated rows `K = 0, 1, 2`, exact; other rows are masked out.
    ClosedRows,
}

/// The orthogonal change of basis `β = L α`; rows by `K`, columns by `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct LMatrix {
    pub pair: SpinPair,
    pub method: LMethod,
    pub values: DMatrix<f64>,
    /// `false` for rows the method cannot produce.
    pub defined_rows: Vec<bool>,
}

impl LMatrix {
    /// `max |L Lᵀ - I|`, only meaningful when every row is defined.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.values.nrows();
        let g = &self.values * self.values.transpose();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (g[(r, c)] - if r == c { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// Max entry deviation over rows defined in both.
    pub fn max_deviation(&self, other: &LMatrix) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.values.nrows() {
            if self.defined_rows[r] && other.defined_rows[r] {
                for c in 0..self.values.ncols() {
                    worst = worst.max((self.values[(r, c)] - other.values[(r, c)]).abs());
                }
            }
        }
        worst
    }
}

/// Single exact entry via the 6-j symbol.
pub fn l_entry_six_j(pair: SpinPair, rank: i64, total: HalfInt) -> Result<SqrtRational> {
    check_rank(&pair, rank)?;
    check_total(&pair, total)?;
    let (j1, j2) = (pair.j1(), pair.j2());
    let six_j = wigner_6j(j1, j2, total, j2, j1, HalfInt::integer(rank))?;
    let exponent = (j1 + j2 + total).twice() / 2;
    let phase = if exponent % 2 == 0 { 1 } else { -1 };
    Ok(SqrtRational::from_integer(phase) * SqrtRational::sqrt_ratio((2 * rank + 1) * (total.twice() + 1), 1) * six_j)
}

/// Closed-form entry for rows `K = 0, 1, 2`; `None` for higher rows or when
/// `K > 2 j1`.
pub fn l_entry_closed(pair: SpinPair, rank: i64, total: HalfInt) -> Result<Option<SqrtRational>> {
    check_total(&pair, total)?;
    if !(0..=2).contains(&rank) || rank > pair.j1().twice() {
        return Ok(None);
    }
    use num_rational::BigRational;
    let (t1, t2, tt) = (pair.j1().twice(), pair.j2().twice(), total.twice());
    let (n1, n2) = (t1 + 1, t2 + 1);
    let dim_j = tt + 1;
    // 4 j(j+1) = t (t + 2)
    let casimir4 = |t: i64| t * (t + 2);
    // 4 X = 4 [j1(j1+1) + j2(j2+1) - J(J+1)]
    let x4 = casimir4(t1) + casimir4(t2) - casimir4(tt);
    let value = match rank {
        0 => SqrtRational::sqrt_ratio(dim_j, n1 * n2),
        1 => {
            let den = (n1 - 1) * n1 * (n1 + 1) * (n2 - 1) * n2 * (n2 + 1);
            // -2 X sqrt(3(2J+1)/den) with X = x4 / 4
            SqrtRational::from_rational(BigRational::new((-x4).into(), 2.into())) * SqrtRational::sqrt_ratio(3 * dim_j, den)
        }
        _ => {
            let den = (n1 - 2) * (n1 - 1) * n1 * (n1 + 1) * (n1 + 2) * (n2 - 2) * (n2 - 1) * n2 * (n2 + 1) * (n2 + 2);
            // 3X(X-1) - 4 j1(j1+1) j2(j2+1), scaled by 16
            let poly16 = 3 * x4 * (x4 - 4) - 4 * casimir4(t1) * casimir4(t2);
            SqrtRational::from_rational(BigRational::new((2 * poly16).into(), 16.into())) * SqrtRational::sqrt_ratio(5 * dim_j, den)
        }
    };
    Ok(Some(value))
}

/// Exact `L` via 6-j symbols, rows by `K`.
pub fn l_matrix_exact(pair: SpinPair) -> Result<Vec<Vec<SqrtRational>>> {
    pair.ranks()
        .iter()
        .map(|&k| pair.total_spins().iter().map(|&jt| l_entry_six_j(pair, k, jt)).collect())
        .collect()
}

pub fn l_matrix(pair: SpinPair, method: LMethod) -> Result<LMatrix> {
    let n = pair.n1();
    let totals = pair.total_spins();
    let mut values = DMatrix::zeros(n, n);
    let mut defined_rows = vec![true; n];
    match method {
        LMethod::Trace => {
            let basis = InvariantBasis::new(pair)?;
            for (r, &k) in pair.ranks().iter().enumerate() {
                for (c, jt) in totals.iter().enumerate() {
                    let tr = basis.q_ops[r].trace_product(&basis.projectors[c]);
                    values[(r, c)] = tr / (((2 * k + 1) * (jt.twice() + 1)) as f64).sqrt();
                }
            }
        }
        LMethod::SixJ => {
            for (r, row) in l_matrix_exact(pair)?.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    values[(r, c)] = v.to_f64();
                }
            }
        }
        LMethod::ClosedRows => {
            for (r, &k) in pair.ranks().iter().enumerate() {
                for (c, &jt) in totals.iter().enumerate() {
                    match l_entry_closed(pair, k, jt)? {
                        Some(v) => values[(r, c)] = v.to_f64(),
                        None => defined_rows[r] = false,
                    }
                }
            }
        }
    }
    Ok(LMatrix {
        pair,
        method,
        values,
        defined_rows,
    })
}

/// Cached `P_J`, `Q_K` and single-spin tensors for one spin pair.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pair: SpinPair,
    projectors: Vec<HermitianOperator>,
    q_ops: Vec<HermitianOperator>,
    t1: SpinTensors,
    t2: SpinTensors,
    l: DMatrix<f64>,
}

impl InvariantBasis {
    pub fn new(pair: SpinPair) -> Result<Self> {
        let top = pair.j1().twice();
        let t1 = SpinTensors::new(pair.j1(), top)?;
        let t2 = SpinTensors::new(pair.j2(), top)?;
        let projectors = pair.total_spins().into_iter().map(|jt| projector_pj(pair, jt)).collect::<Result<Vec<_>>>()?;
        let q_ops = pair.ranks().into_iter().map(|k| qk_from(&pair, &t1, &t2, k)).collect::<Result<Vec<_>>>()?;
        let l = l_matrix(pair, LMethod::SixJ)?.values;
        Ok(InvariantBasis {
            pair,
            projectors,
            q_ops,
            t1,
            t2,
            l,
        })
    }

    pub fn pair(&self) -> SpinPair {
        self.pair
    }

    pub fn projectors(&self) -> &[HermitianOperator] {
        &self.projectors
    }

    pub fn q_operators(&self) -> &[HermitianOperator] {
        &self.q_ops
    }

    /// `L` from 6-j symbols.
    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn alpha_to_beta(&self, alpha: &AlphaVector) -> Result<BetaVector> {
        same_pair(&self.pair, &alpha.pair)?;
        let a = nalgebra::DVector::from_column_slice(&alpha.components);
        BetaVector::new(self.pair, (&self.l * a).iter().copied().collect())
    }

    pub fn beta_to_alpha(&self, beta: &BetaVector) -> Result<AlphaVector> {
        same_pair(&self.pair, &beta.pair)?;
        let b = nalgebra::DVector::from_column_slice(&beta.components);
        AlphaVector::new(self.pair, (self.l.transpose() * b).iter().copied().collect())
    }

    /// `ρ = (N1 N2)^(-1/2) Σ_J α_J (2J+1)^(-1/2) P_J`.
    pub fn rho_from_alpha(&self, alpha: &AlphaVector) -> Result<HermitianOperator> {
        same_pair(&self.pair, &alpha.pair)?;
        let nn = (self.pair.dim() as f64).sqrt();
        let mut rho = CMatrix::zeros(self.pair.dim(), self.pair.dim());
        for ((a, jt), p) in alpha.components.iter().zip(self.pair.total_spins()).zip(&self.projectors) {
            rho += p.matrix().scale(a / (nn * ((jt.twice() + 1) as f64).sqrt()));
        }
        HermitianOperator::new(rho)
    }

    /// `ρ = (N1 N2)^(-1/2) Σ_K β_K (2K+1)^(-1/2) Q_K`.
    pub fn rho_from_beta(&self, beta: &BetaVector) -> Result<HermitianOperator> {
        same_pair(&self.pair, &beta.pair)?;
        let nn = (self.pair.dim() as f64).sqrt();
        let mut rho = CMatrix::zeros(self.pair.dim(), self.pair.dim());
        for ((b, k), q) in beta.components.iter().zip(self.pair.ranks()).zip(&self.q_ops) {
            rho += q.matrix().scale(b / (nn * ((2 * k + 1) as f64).sqrt()));
        }
        HermitianOperator::new(rho)
    }

    /// Coordinates of the twirled state `Πρ`. `ρ` need not be invariant.
    pub fn twirl(&self, rho: &HermitianOperator) -> Result<(AlphaVector, BetaVector)> {
        self.pair.check_dim(rho.dim())?;
        let nn = self.pair.dim() as f64;
        let alpha = self
            .projectors
            .iter()
            .zip(self.pair.total_spins())
            .map(|(p, jt)| (nn / (jt.twice() + 1) as f64).sqrt() * p.trace_product(rho))
            .collect();
        let beta = self
            .q_ops
            .iter()
            .zip(self.pair.ranks())
            .map(|(q, k)| (nn / (2 * k + 1) as f64).sqrt() * q.trace_product(rho))
            .collect();
        Ok((AlphaVector::new(self.pair, alpha)?, BetaVector::new(self.pair, beta)?))
    }

    /// `β̃_K[φ1, φ2] = sqrt(N1 N2/(2K+1)) Σ_q <φ1|T_Kq|φ1> <φ2|T_Kq†|φ2>`.
    pub fn beta_functionals(&self, state: &ProductState) -> Result<BetaVector> {
        state.check(&self.pair)?;
        let nn = self.pair.dim() as f64;
        let comps = self
            .pair
            .ranks()
            .into_iter()
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for q in -k..=k {
                    let e1 = state.phi1.dotc(&(self.t1.get(k, q) * &state.phi1));
                    let e2 = state.phi2.dotc(&(self.t2.get(k, q) * &state.phi2));
                    // <φ2|T†|φ2> = conj <φ2|T|φ2>
                    acc += e1 * e2.conj();
                }
                debug_assert!(acc.im.abs() < 1e-10, "imaginary beta functional {acc}");
                (nn / (2 * k + 1) as f64).sqrt() * acc.re
            })
            .collect();
        BetaVector::new(self.pair, comps)
    }
}

pub fn rho_from_alpha(alpha: &AlphaVector) -> Result<HermitianOperator> {
    InvariantBasis::new(alpha.pair)?.rho_from_alpha(alpha)
}

pub fn twirl(rho: &HermitianOperator, pair: SpinPair) -> Result<(AlphaVector, BetaVector)> {
    InvariantBasis::new(pair)?.twirl(rho)
}

pub fn beta_functionals(state: &ProductState, pair: SpinPair) -> Result<BetaVector> {
    InvariantBasis::new(pair)?.beta_functionals(state)
}

/// Transpose on the second factor in the product basis. Works for any
/// square matrix of the right size.
pub fn partial_transpose_matrix(m: &CMatrix, pair: SpinPair) -> Result<CMatrix> {
    pair.check_dim(m.nrows())?;
    pair.check_dim(m.ncols())?;
    let (n1, n2) = (pair.n1(), pair.n2());
    Ok(CMatrix::from_fn(pair.dim(), pair.dim(), |r, c| {
        let (a, b) = (r / n2, r % n2);
        let (ap, bp) = (c / n2, c % n2);
        debug_assert!(a < n1 && ap < n1);
        m[(a * n2 + bp, ap * n2 + b)]
    }))
}

pub fn partial_transpose(rho: &HermitianOperator, pair: SpinPair) -> Result<HermitianOperator> {
    HermitianOperator::new(partial_transpose_matrix(rho.matrix(), pair)?)
}

/// `(I ⊗ ϑ) ρ = (I ⊗ V) T₂ρ (I ⊗ V)†`.
pub fn partial_time_reversal(rho: &HermitianOperator, pair: SpinPair) -> Result<HermitianOperator> {
    let pt = partial_transpose_matrix(rho.matrix(), pair)?;
    let u = CMatrix::identity(pair.n1(), pair.n1()).kronecker(&pi_rotation_matrix(pair.j2()));
    HermitianOperator::new(&u * pt * u.adjoint())
}

/// Partial time reversal in beta-coordinates: `β_K -> (-1)^K β_K`.
pub fn partial_time_reversal_beta(beta: &BetaVector) -> BetaVector {
    let comps = beta
        .components
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b } else { -b })
        .collect();
    BetaVector {
        pair: beta.pair,
        components: comps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn pair(t1: i64, t2: i64) -> SpinPair {
        SpinPair::new(HalfInt::from_twice(t1), HalfInt::from_twice(t2)).unwrap()
    }

    #[test]
    fn pair_requires_order() {
        assert!(matches!(
            SpinPair::new(HalfInt::integer(2), HalfInt::ONE),
            Err(Error::UnorderedPair(..))
        ));
        let p = pair(2, 3);
        assert_eq!(p.total_spins(), vec![HalfInt::from_twice(1), HalfInt::from_twice(3), HalfInt::from_twice(5)]);
        assert_eq!(p.ranks(), vec![0, 1, 2]);
    }

    #[test]
    fn singlet_and_stretched_states() {
        let p = pair(1, 1);
        let s = coupled_state(p, HalfInt::ZERO, HalfInt::ZERO).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // ascending basis: |↓↓>, |↓↑>, |↑↓>, |↑↑>
        let expect = [0.0, -r, r, 0.0];
        for (i, e) in expect.iter().enumerate() {
            assert!((s[i].re - e).abs() < 1e-15 && s[i].im == 0.0);
        }
        for (t1, t2) in [(2, 3), (2, 2), (1, 5), (4, 4)] {
            let p = pair(t1, t2);
            let top = p.j1() + p.j2();
            let v = coupled_state(p, top, top).unwrap();
            let basis = ProductState::basis(p, p.j1(), p.j2()).unwrap().tensor();
            assert!((&v - basis).norm() < 1e-15);
        }
        assert!(coupled_state(p, HalfInt::integer(2), HalfInt::ZERO).is_err());
    }

    #[test]
    fn projectors_resolve_identity() {
        for (t1, t2) in [(1, 1), (2, 3), (2, 4), (3, 5)] {
            let p = pair(t1, t2);
            let basis = InvariantBasis::new(p).unwrap();
            let mut sum = CMatrix::zeros(p.dim(), p.dim());
            for (pj, jt) in basis.projectors().iter().zip(p.total_spins()) {
                assert!((pj.trace() - (jt.twice() + 1) as f64).abs() < 1e-12);
                let sq = pj.matrix() * pj.matrix();
                assert!(max_abs_diff(&sq, pj.matrix()) < 1e-12);
                sum += pj.matrix();
            }
            assert!(max_abs_diff(&sum, &CMatrix::identity(p.dim(), p.dim())) < 1e-12);
            for a in 0..p.n1() {
                for b in 0..p.n1() {
                    if a != b {
                        let prod = basis.projectors()[a].matrix() * basis.projectors()[b].matrix();
                        assert!(prod.iter().all(|z| z.norm() < 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn q0_is_scaled_identity_and_q_orthogonal() {
        for (t1, t2) in [(1, 2), (2, 3), (2, 5), (3, 3)] {
            let p = pair(t1, t2);
            let basis = InvariantBasis::new(p).unwrap();
            let q0 = &basis.q_operators()[0];
            let expect = CMatrix::identity(p.dim(), p.dim()).unscale((p.dim() as f64).sqrt());
            assert!(max_abs_diff(q0.matrix(), &expect) < 1e-13);
            for (a, qa) in basis.q_operators().iter().enumerate() {
                for (b, qb) in basis.q_operators().iter().enumerate() {
                    let expect = if a == b { (2 * a + 1) as f64 } else { 0.0 };
                    assert!((qa.trace_product(qb) - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn q1_is_scaled_spin_product() {
        use crate::tensors::spin_matrices;
        for (t1, t2) in [(2, 2), (2, 3), (2, 7), (3, 4)] {
            let p = pair(t1, t2);
            let a = |n: usize| {
                let n = n as f64;
                2.0 * (3.0 / (n * (n * n - 1.0))).sqrt()
            };
            let s1 = spin_matrices(p.j1());
            let s2 = spin_matrices(p.j2());
            let mut dot = CMatrix::zeros(p.dim(), p.dim());
            for c in 0..3 {
                dot += s1[c].kronecker(&s2[c]);
            }
            let expect = dot.scale(a(p.n1()) * a(p.n2()));
            let q1 = operator_qk(p, 1).unwrap();
            assert!(max_abs_diff(q1.matrix(), &expect) < 1e-13);
        }
    }

    #[test]
    fn rank_and_total_validation() {
        let p = pair(2, 3);
        assert!(operator_qk(p, 3).is_err());
        assert!(projector_pj(p, HalfInt::from_twice(7)).is_err());
        assert!(projector_pj(p, HalfInt::integer(1)).is_err());
    }

    #[test]
    fn half_half_l_matrix() {
        let p = pair(1, 1);
        let l = l_matrix(p, LMethod::SixJ).unwrap();
        let s = 3f64.sqrt() / 2.0;
        let expect = DMatrix::from_row_slice(2, 2, &[0.5, s, -s, 0.5]);
        assert!((l.values - expect).abs().max() < 1e-15);
        let closed = l_matrix(p, LMethod::ClosedRows).unwrap();
        assert_eq!(closed.defined_rows, vec![true, true]);
    }

    #[test]
    fn closed_rows_mask_high_ranks() {
        let p = pair(4, 4);
        let closed = l_matrix(p, LMethod::ClosedRows).unwrap();
        assert_eq!(closed.defined_rows, vec![true, true, true, false, false]);
        let six = l_matrix(p, LMethod::SixJ).unwrap();
        assert!(closed.max_deviation(&six) < 1e-14);
    }

    #[test]
    fn maximally_mixed_alpha() {
        let p = pair(2, 3);
        let basis = InvariantBasis::new(p).unwrap();
        let comps = p.total_spins().iter().map(|jt| ((jt.twice() + 1) as f64 / p.dim() as f64).sqrt()).collect();
        let alpha = AlphaVector::new(p, comps).unwrap();
        assert!(alpha.is_state());
        let rho = basis.rho_from_alpha(&alpha).unwrap();
        let expect = CMatrix::identity(p.dim(), p.dim()).unscale(p.dim() as f64);
        assert!(max_abs_diff(rho.matrix(), &expect) < 1e-15);
        let beta = basis.alpha_to_beta(&alpha).unwrap();
        assert!((beta.components()[0] - 1.0).abs() < 1e-14);
        assert!(beta.components()[1..].iter().all(|b| b.abs() < 1e-14));
    }

    #[test]
    fn stretched_alpha_gives_normalized_projector() {
        let p = pair(2, 5);
        let basis = InvariantBasis::new(p).unwrap();
        let top = p.j1() + p.j2();
        let mut comps = vec![0.0; p.n1()];
        comps[p.n1() - 1] = (p.dim() as f64 / (top.twice() + 1) as f64).sqrt();
        let alpha = AlphaVector::new(p, comps).unwrap();
        assert!(alpha.is_state());
        let rho = basis.rho_from_alpha(&alpha).unwrap();
        let expect = basis.projectors().last().unwrap().scale(1.0 / (top.twice() + 1) as f64);
        assert!(max_abs_diff(rho.matrix(), expect.matrix()) < 1e-14);
        let (a, _) = basis.twirl(&rho).unwrap();
        for (x, y) in a.components().iter().zip(alpha.components()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn state_flags() {
        let p = pair(2, 3);
        let a = AlphaVector::new(p, vec![-0.1, 1.0, 1.0]).unwrap();
        assert!(!a.is_state());
        assert!(AlphaVector::new(p, vec![1.0, 1.0]).is_err());
        let b = BetaVector::new(p, vec![1.0, 0.3, -0.2]).unwrap();
        assert!(b.is_state());
        let b = BetaVector::new(p, vec![0.9, 0.3, -0.2]).unwrap();
        assert!(!b.is_state());
    }

    #[test]
    fn product_state_norms() {
        let v = CVector::from_element(3, Complex64::new(1.0, 0.0));
        let w = CVector::from_element(4, Complex64::new(0.5, 0.0));
        assert!(matches!(ProductState::new(v.clone(), w.clone()), Err(Error::NotNormalized(_))));
        let s = ProductState::normalized(v, w).unwrap();
        assert!((s.phi1().norm() - 1.0).abs() < 1e-15);
        assert!(ProductState::normalized(CVector::zeros(3), CVector::zeros(4)).is_err());
    }

    #[test]
    fn partial_transpose_of_product_operator() {
        let p = pair(2, 3);
        let a = CMatrix::from_fn(3, 3, |r, c| Complex64::new((r * 3 + c) as f64, (r as f64) - (c as f64) * 0.5));
        let b = CMatrix::from_fn(4, 4, |r, c| Complex64::new(1.0 + (r as f64) * 0.25, (c * r) as f64));
        let pt = partial_transpose_matrix(&a.kronecker(&b), p).unwrap();
        assert!(max_abs_diff(&pt, &a.kronecker(&b.transpose())) < 1e-15);
        let twice = partial_transpose_matrix(&pt, p).unwrap();
        assert!(max_abs_diff(&twice, &a.kronecker(&b)) < 1e-15);
        assert!(partial_transpose_matrix(&CMatrix::zeros(5, 5), p).is_err());
    }

    #[test]
    fn singlet_is_npt() {
        let p = pair(1, 1);
        let basis = InvariantBasis::new(p).unwrap();
        let pt = partial_transpose(&basis.projectors()[0], p).unwrap();
        assert!((pt.min_eigenvalue() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn reflection_rule() {
        let p = pair(2, 3);
        let b = BetaVector::new(p, vec![1.0, 0.4, -0.3]).unwrap();
        assert_eq!(partial_time_reversal_beta(&b).components(), &[1.0, -0.4, -0.3]);
        let fixed = BetaVector::new(p, vec![1.0, 0.0, 0.2]).unwrap();
        assert_eq!(partial_time_reversal_beta(&fixed), fixed);
    }

    #[test]
    fn time_reversal_diagonal_on_q() {
        for (t1, t2) in [(1, 2), (2, 3), (2, 4), (3, 5)] {
            let p = pair(t1, t2);
            let basis = InvariantBasis::new(p).unwrap();
            for (k, q) in basis.q_operators().iter().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let rev = partial_time_reversal(q, p).unwrap();
                assert!(max_abs_diff(rev.matrix(), &q.matrix().scale(sign)) < 1e-13);
            }
        }
    }
}
