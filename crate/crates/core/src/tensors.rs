//! Irreducible spherical tensor operators `T_{Kq}` on a single spin-`j` space.
//!
//! Basis convention used throughout the crate: `|j, m>` with `m` ascending
//! from `-j` to `+j`, so row/column `i` holds `m = -j + i`.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{CMatrix, HermitianOperator};
use crate::surd::SqrtRational;
use crate::wigner::{check_projection, wigner_3j};

fn check_rank(j: HalfInt, rank: i64, q: i64) -> Result<()> {
    if !j.is_nonnegative() {
        return Err(Error::NegativeSpin(j));
    }
    if rank < 0 || rank > j.twice() {
        return Err(Error::RankOutOfRange { j, rank });
    }
    if q.abs() > rank {
        return Err(Error::ProjectionOutOfRange {
            j: HalfInt::integer(rank),
            m: HalfInt::integer(q),
        });
    }
    Ok(())
}

/// `<j,m|T_{Kq}|j,m'> = sqrt(2K+1) (-1)^(j-m) (j j K; m -m' -q)`.
pub fn tensor_element(j: HalfInt, rank: i64, q: i64, m: HalfInt, m_prime: HalfInt) -> Result<SqrtRational> {
    check_rank(j, rank, q)?;
    check_projection(j, m)?;
    check_projection(j, m_prime)?;
    let k = HalfInt::integer(rank);
    let three_j = wigner_3j(j, j, k, m, -m_prime, -HalfInt::integer(q))?;
    if three_j.is_zero() {
        return Ok(three_j);
    }
    let phase = if ((j - m).twice() / 2) % 2 == 0 { 1 } else { -1 };
    Ok(SqrtRational::from_integer(phase) * SqrtRational::sqrt_ratio(2 * rank + 1, 1) * three_j)
}

/// Full `(2j+1) x (2j+1)` matrix of `T_{Kq}`. All entries are real.
pub fn tensor_matrix(j: HalfInt, rank: i64, q: i64) -> Result<CMatrix> {
    check_rank(j, rank, q)?;
    let n = j.multiplicity();
    let ms: Vec<HalfInt> = j.projections().collect();
    let mut out = CMatrix::zeros(n, n);
    for (r, &m) in ms.iter().enumerate() {
        // only m' = m - q survives the selection rule
        let mp = m - HalfInt::integer(q);
        if mp.abs() <= j {
            let c = j.index_of(mp);
            out[(r, c)] = Complex64::new(tensor_element(j, rank, q, m, mp)?.to_f64(), 0.0);
        }
    }
    Ok(out)
}

/// All tensor operators of one spin, indexed by rank then `q + K`.
#[derive(Clone, Debug)]
pub struct SpinTensors {
    j: HalfInt,
    matrices: Vec<Vec<CMatrix>>,
}

impl SpinTensors {
    /// Tensors of every rank `0..=max_rank` (clamped to `2j`).
    pub fn new(j: HalfInt, max_rank: i64) -> Result<Self> {
        if !j.is_nonnegative() {
            return Err(Error::NegativeSpin(j));
        }
        let top = max_rank.min(j.twice());
        let matrices = (0..=top)
            .map(|k| (-k..=k).map(|q| tensor_matrix(j, k, q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinTensors { j, matrices })
    }

    pub fn spin(&self) -> HalfInt {
        self.j
    }

    pub fn max_rank(&self) -> i64 {
        self.matrices.len() as i64 - 1
    }

    pub fn get(&self, rank: i64, q: i64) -> &CMatrix {
        &self.matrices[rank as usize][(q + rank) as usize]
    }
}

/// Spin matrices `(j_x, j_y, j_z)` in the ascending-`m` basis.
pub fn spin_matrices(j: HalfInt) -> [CMatrix; 3] {
    let n = j.multiplicity();
    let ms: Vec<f64> = j.projections().map(HalfInt::to_f64).collect();
    let jv = j.to_f64();
    let mut raise = CMatrix::zeros(n, n);
    for c in 0..n.saturating_sub(1) {
        let m = ms[c];
        raise[(c + 1, c)] = Complex64::new(((jv - m) * (jv + m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower).unscale(2.0);
    let jy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, ms.iter().map(|&m| Complex64::new(m, 0.0))));
    [jx, jy, jz]
}

/// Matrix `V` of the rotation by pi about the y-axis:
/// `V_{m',m} = (-1)^(j-m') delta_{m',-m}`.
pub fn pi_rotation_matrix(j: HalfInt) -> CMatrix {
    let n = j.multiplicity();
    let mut v = CMatrix::zeros(n, n);
    for mp in j.projections() {
        let sign = if ((j - mp).twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
        v[(j.index_of(mp), j.index_of(-mp))] = Complex64::new(sign, 0.0);
    }
    v
}

/// Time reversal of an operator on the spin-`j` space: `V B^T V^dagger`.
pub fn time_reversal(j: HalfInt, b: &CMatrix) -> Result<CMatrix> {
    let n = j.multiplicity();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: b.nrows().max(b.ncols()),
        });
    }
    let v = pi_rotation_matrix(j);
    Ok(&v * b.transpose() * v.adjoint())
}

/// Time reversal of a Hermitian operator stays Hermitian.
pub fn time_reversal_hermitian(j: HalfInt, b: &HermitianOperator) -> Result<HermitianOperator> {
    HermitianOperator::new(time_reversal(j, b.matrix())?)
}

/// The tabulated closed-form matrix elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TensorCase {
    /// `<j,m|T_10|j,m>`
    T10,
    /// `<j,m|T_11^dagger|j,m+1>`
    T11,
    /// `<j,m|T_20|j,m>`
    T20,
    /// `<j,m|T_21^dagger|j,m+1>`
    T21,
    /// `<j,m|T_22^dagger|j,m+2>`
    T22,
}

impl TensorCase {
    pub const ALL: [TensorCase; 5] = [TensorCase::T10, TensorCase::T11, TensorCase::T20, TensorCase::T21, TensorCase::T22];

    pub fn rank(self) -> i64 {
        match self {
            TensorCase::T10 | TensorCase::T11 => 1,
            _ => 2,
        }
    }

    pub fn q(self) -> i64 {
        match self {
            TensorCase::T10 | TensorCase::T20 => 0,
            TensorCase::T11 | TensorCase::T21 => 1,
            TensorCase::T22 => 2,
        }
    }

    /// Projections `m` for which the case's element is defined.
    pub fn projections(self, j: HalfInt) -> impl Iterator<Item = HalfInt> {
        let shift = HalfInt::integer(self.q());
        j.projections().filter(move |&m| (m + shift) <= j)
    }

    /// The same element read from the general formula: since the tensor
    /// elements are real, `<m|T_Kq^dagger|m+q> = <m+q|T_Kq|m>`.
    pub fn general_element(self, j: HalfInt, m: HalfInt) -> Result<SqrtRational> {
        let q = self.q();
        tensor_element(j, self.rank(), q, m + HalfInt::integer(q), m)
    }
}

/// Closed form of the element named by `case`, independent of the 3-j route.
pub fn closed_form_element(j: HalfInt, case: TensorCase, m: HalfInt) -> Result<SqrtRational> {
    check_rank(j, case.rank(), case.q())?;
    check_projection(j, m)?;
    let shifted = m + HalfInt::integer(case.q());
    if shifted > j {
        return Err(Error::ProjectionOutOfRange { j, m: shifted });
    }

    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let (tj, tm) = (j.twice(), m.twice());
    let n = tj + 1;
    let rank1_den = n * (n - 1) * (n + 1);
    let rank2_den = (n + 2) * (n + 1) * n * (n - 1) * (n - 2);
    // (j - m)(j + m + 1), exact integer
    let raise = (tj - tm) * (tj + tm + 2) / 4;

    let value = match case {
        TensorCase::T10 => SqrtRational::from_integer(tm) * SqrtRational::sqrt_ratio(3, rank1_den),
        TensorCase::T11 => -SqrtRational::sqrt_ratio(6 * raise, rank1_den),
        TensorCase::T20 => {
            // 2 [3m^2 - j(j+1)] = (3 tm^2 - tj (tj + 2)) / 2
            SqrtRational::from_rational(q(3 * tm * tm - tj * (tj + 2), 2)) * SqrtRational::sqrt_ratio(5, rank2_den)
        }
        TensorCase::T21 => -SqrtRational::from_integer(1 + tm) * SqrtRational::sqrt_ratio(30 * raise, rank2_den),
        TensorCase::T22 => {
            // (j-m-1)(j-m)(j+m+1)(j+m+2)
            let prod = (tj - tm - 2) * (tj - tm) * (tj + tm + 2) * (tj + tm + 4) / 16;
            SqrtRational::sqrt_ratio(30 * prod, rank2_den)
        }
    };
    Ok(value)
}
