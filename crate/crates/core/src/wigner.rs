//! Clebsch-Gordan coefficients, Wigner 3-j and 6-j symbols in exact arithmetic.
//!
//! All symbols are evaluated with Racah's single-sum formulas. The sums are
//! carried out in big rationals and the result is returned as a
//! [`SqrtRational`], so no rounding happens anywhere in this module.

use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::surd::SqrtRational;

static FACTORIALS: LazyLock<RwLock<Vec<BigInt>>> = LazyLock::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!`, served from a process-wide cache that grows on demand.
pub fn factorial(n: usize) -> BigInt {
    {
        let table = FACTORIALS.read().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = table.get(n) {
            return f.clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap_or_else(|e| e.into_inner());
    // another writer may have extended the table in the meantime
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

fn fact_i(n: i64) -> BigInt {
    debug_assert!(n >= 0, "factorial of {n}");
    factorial(n as usize)
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// True iff `|a-b| <= c <= a+b` and `a+b+c` is an integer.
pub fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c >= (a - b).abs() && c <= a + b
}

fn check_spin(j: HalfInt) -> Result<()> {
    if j.is_nonnegative() {
        Ok(())
    } else {
        Err(Error::NegativeSpin(j))
    }
}

/// Validates a pair `(j, m)`: `j >= 0`, matching parity, `|m| <= j`.
pub fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    check_spin(j)?;
    if !j.same_parity(m) {
        return Err(Error::ParityMismatch { j, m });
    }
    if m.abs() > j {
        return Err(Error::ProjectionOutOfRange { j, m });
    }
    Ok(())
}

/// Triangle coefficient `(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!` for a valid triad.
fn triangle_coefficient(a: HalfInt, b: HalfInt, c: HalfInt) -> BigRational {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    let num = fact_i((a + b - c) / 2) * fact_i((a - b + c) / 2) * fact_i((-a + b + c) / 2);
    let den = fact_i((a + b + c) / 2 + 1);
    BigRational::new(num, den)
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
///
/// Returns zero when `m1+m2+m3 != 0` or the triad does not couple.
pub fn wigner_3j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> Result<SqrtRational> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j3, m3)?;
    if (m1 + m2 + m3).twice() != 0 || !triangle_ok(j1, j2, j3) {
        return Ok(SqrtRational::zero());
    }

    // everything below is an integer once the triad is valid
    let h = |x: HalfInt| -> i64 {
        debug_assert!(x.is_integer());
        x.twice() / 2
    };
    let kmin = 0.max(h(j2 - j3 - m1)).max(h(j1 - j3 + m2));
    let kmax = h(j1 + j2 - j3).min(h(j1 - m1)).min(h(j2 + m2));

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = fact_i(k)
            * fact_i(h(j3 - j2 + m1) + k)
            * fact_i(h(j3 - j1 - m2) + k)
            * fact_i(h(j1 + j2 - j3) - k)
            * fact_i(h(j1 - m1) - k)
            * fact_i(h(j2 + m2) - k);
        sum += BigRational::new(BigInt::from(parity_sign(k)), den);
    }
    if sum.is_zero() {
        return Ok(SqrtRational::zero());
    }

    let outer = fact_i(h(j1 + m1))
        * fact_i(h(j1 - m1))
        * fact_i(h(j2 + m2))
        * fact_i(h(j2 - m2))
        * fact_i(h(j3 + m3))
        * fact_i(h(j3 - m3));
    let radicand = triangle_coefficient(j1, j2, j3) * BigRational::from_integer(outer) * &sum * &sum;
    let phase = parity_sign(h(j1 - j2 - m3));
    let sign = if (sum > BigRational::zero()) == (phase > 0) { 1 } else { -1 };
    Ok(SqrtRational::new(sign, radicand))
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` (Condon-Shortley phase),
/// via `sqrt(2J+1) (-1)^(j1-j2+M) (j1 j2 J; m1 m2 -M)`.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Result<SqrtRational> {
    let three_j = wigner_3j(j1, j2, j, m1, m2, -m)?;
    if three_j.is_zero() {
        return Ok(three_j);
    }
    let phase = parity_sign((j1 - j2 + m).twice() / 2);
    Ok(SqrtRational::from_integer(phase) * SqrtRational::sqrt_ratio(j.twice() + 1, 1) * three_j)
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
///
/// Zero whenever any of the triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6),
/// (j4 j5 j3) fails the triangle rule.
pub fn wigner_6j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> Result<SqrtRational> {
    for j in [j1, j2, j3, j4, j5, j6] {
        check_spin(j)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle_ok(a, b, c)) {
        return Ok(SqrtRational::zero());
    }

    let half = |x: i64| x / 2;
    let a = triads.map(|(a, b, c)| half(a.twice() + b.twice() + c.twice()));
    let b = [
        half(j1.twice() + j2.twice() + j4.twice() + j5.twice()),
        half(j2.twice() + j3.twice() + j5.twice() + j6.twice()),
        half(j3.twice() + j1.twice() + j6.twice() + j4.twice()),
    ];
    let tmin = *a.iter().max().expect("four triads");
    let tmax = *b.iter().min().expect("three sums");

    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let den = a.iter().map(|&ai| fact_i(t - ai)).product::<BigInt>() * b.iter().map(|&bi| fact_i(bi - t)).product::<BigInt>();
        sum += BigRational::new(BigInt::from(parity_sign(t)) * fact_i(t + 1), den);
    }
    if sum.is_zero() {
        return Ok(SqrtRational::zero());
    }

    let delta = triads
        .iter()
        .map(|&(a, b, c)| triangle_coefficient(a, b, c))
        .fold(BigRational::one(), |acc, d| acc * d);
    let sign = if sum > BigRational::zero() { 1 } else { -1 };
    Ok(SqrtRational::new(sign, delta * &sum * &sum))
}
