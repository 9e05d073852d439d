use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rotinv::wigner::{clebsch_gordan, triangle_ok, wigner_3j, wigner_6j};
use rotinv::{HalfInt, SqrtRational};

fn hi(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn sign_of(exp_twice: i64) -> i64 {
    assert_eq!(exp_twice % 2, 0);
    if (exp_twice / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Exact sums of surds: each term is q * sqrt(f) with f square-free.

const SMALL_PRIMES: [u32; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// `n = s² f` with `f` square-free; `n` only has small prime factors here.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= &p;
        }
    }
    assert!(rest.is_one(), "unexpected large prime factor in {n}");
    (s, f)
}

#[derive(Default)]
struct SurdSum {
    groups: HashMap<BigInt, BigRational>,
}

impl SurdSum {
    fn add(&mut self, sign: i64, radicand: &BigRational) {
        if radicand.is_zero() {
            return;
        }
        // sqrt(a/b) = sqrt(a b) / b
        let (a, b) = (radicand.numer(), radicand.denom());
        let (s, f) = split_square(&(a * b));
        let coeff = BigRational::new(BigInt::from(sign) * s, b.clone());
        *self.groups.entry(f).or_insert_with(BigRational::zero) += coeff;
    }

    fn into_surd(self) -> SqrtRational {
        let live: Vec<_> = self.groups.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        match live.len() {
            0 => SqrtRational::zero(),
            1 => {
                let (f, c) = &live[0];
                let sign: i8 = if c.is_positive() { 1 } else { -1 };
                SqrtRational::new(sign, c * c * BigRational::from_integer(f.clone()))
            }
            _ => panic!("sum is not a single surd: {live:?}"),
        }
    }
}

/// `{j1 j2 j3; j4 j5 j6}` by contracting four 3-j symbols over all
/// projections.
fn six_j_contraction(j: [HalfInt; 6]) -> SqrtRational {
    let [j1, j2, j3, j4, j5, j6] = j;
    let mut acc = SurdSum::default();
    for m1 in j1.projections() {
        for m2 in j2.projections() {
            let m3 = -(m1 + m2);
            if m3.abs() > j3 {
                continue;
            }
            for m5 in j5.projections() {
                let m6 = m5 - m1;
                let m4 = m6 - m2;
                if m6.abs() > j6 || m4.abs() > j4 {
                    continue;
                }
                let a = wigner_3j(j1, j2, j3, -m1, -m2, -m3).unwrap();
                let b = wigner_3j(j1, j5, j6, m1, -m5, m6).unwrap();
                let c = wigner_3j(j4, j2, j6, m4, m2, -m6).unwrap();
                let d = wigner_3j(j4, j5, j3, -m4, m5, m3).unwrap();
                let prod = a * b * c * d;
                if prod.is_zero() {
                    continue;
                }
                let phase: i64 = [(j1, m1), (j2, m2), (j3, m3), (j4, m4), (j5, m5), (j6, m6)]
                    .iter()
                    .map(|(jj, mm)| (*jj - *mm).twice())
                    .sum();
                acc.add(sign_of(phase) * prod.sign() as i64, prod.radicand());
            }
        }
    }
    acc.into_surd()
}

#[test]
fn six_j_matches_contraction_exactly() {
    let mut checked = 0;
    let top = 6; // twice-values 0..=6, i.e. j <= 3
    for a in 0..=top {
        for b in 0..=top {
            for c in 0..=top {
                if !triangle_ok(hi(a), hi(b), hi(c)) {
                    continue;
                }
                for d in 0..=top {
                    for e in 0..=top {
                        if !triangle_ok(hi(d), hi(e), hi(c)) {
                            continue;
                        }
                        for f in 0..=top {
                            if !(triangle_ok(hi(a), hi(e), hi(f)) && triangle_ok(hi(d), hi(b), hi(f))) {
                                continue;
                            }
                            // keep the quadruple sum small enough
                            if a + b + c + d + e + f > 22 {
                                continue;
                            }
                            let j = [hi(a), hi(b), hi(c), hi(d), hi(e), hi(f)];
                            let racah = wigner_6j(j[0], j[1], j[2], j[3], j[4], j[5]).unwrap();
                            assert_eq!(racah, six_j_contraction(j), "{j:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 500, "only {checked} symbols checked");
}

#[test]
fn six_j_spot_values() {
    // {1 3/2 5/2; 3/2 1 1}
    let v = wigner_6j(hi(2), hi(3), hi(5), hi(3), hi(2), hi(2)).unwrap();
    assert_eq!(v, SqrtRational::new(-1, BigRational::new(1.into(), 40.into())));
    assert_eq!(v, six_j_contraction([hi(2), hi(3), hi(5), hi(3), hi(2), hi(2)]));
    assert!(wigner_6j(hi(2), hi(2), hi(6), hi(2), hi(2), hi(2)).unwrap().is_zero());
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan by explicit construction of |J M> in the product basis.

fn raise(j: f64, m: f64) -> f64 {
    ((j - m) * (j + m + 1.0)).sqrt()
}

fn lower(j: f64, m: f64) -> f64 {
    ((j + m) * (j - m + 1.0)).sqrt()
}

/// Coefficients of `|J M>` for every `M`, indexed `[M index][i1][i2]`.
fn coupled_multiplet(t1: i64, t2: i64, tj: i64) -> Vec<Vec<Vec<f64>>> {
    let (j1, j2, jt) = (t1 as f64 / 2.0, t2 as f64 / 2.0, tj as f64 / 2.0);
    let (n1, n2) = (t1 as usize + 1, t2 as usize + 1);
    let m_of = |t: i64, i: usize| (-t + 2 * i as i64) as f64 / 2.0;
    let mut top = vec![vec![0.0; n2]; n1];
    // highest weight: J+ annihilates it; seed at m1 = j1 (Condon-Shortley
    // positive), recurse downward in m1
    let mut m1 = j1;
    let mut c = 1.0;
    loop {
        let m2 = jt - m1;
        if m2.abs() > j2 + 1e-9 {
            break;
        }
        let i1 = (m1 + j1).round() as usize;
        let i2 = (m2 + j2).round() as usize;
        top[i1][i2] = c;
        let next = m1 - 1.0;
        if next < -j1 - 1e-9 || jt - next > j2 + 1e-9 {
            break;
        }
        // c(next) a+(j1,next) + c(m1) a+(j2, J-m1) = 0
        c = -c * raise(j2, jt - m1) / raise(j1, next);
        m1 = next;
    }
    let norm: f64 = top.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    top.iter_mut().flatten().for_each(|x| *x /= norm);
    let mut out = vec![top];
    let mut mm = jt;
    while mm > -jt + 1e-9 {
        let cur = out.last().unwrap();
        let mut next = vec![vec![0.0; n2]; n1];
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                let v = cur[i1][i2];
                if v == 0.0 {
                    continue;
                }
                let (a, b) = (m_of(t1, i1), m_of(t2, i2));
                if i1 > 0 {
                    next[i1 - 1][i2] += v * lower(j1, a);
                }
                if i2 > 0 {
                    next[i1][i2 - 1] += v * lower(j2, b);
                }
            }
        }
        let f = lower(jt, mm);
        next.iter_mut().flatten().for_each(|x| *x /= f);
        out.push(next);
        mm -= 1.0;
    }
    out.reverse(); // ascending M
    out
}

#[test]
fn clebsch_gordan_matches_lowering_construction() {
    for t1 in 0..=6 {
        for t2 in 0..=6 {
            let mut tj = (t1 - t2).abs();
            while tj <= t1 + t2 {
                let multiplet = coupled_multiplet(t1, t2, tj);
                for (im, tm) in (-tj..=tj).step_by(2).enumerate() {
                    for i1 in 0..=t1 as usize {
                        for i2 in 0..=t2 as usize {
                            let m1 = hi(-t1 + 2 * i1 as i64);
                            let m2 = hi(-t2 + 2 * i2 as i64);
                            let exact = clebsch_gordan(hi(t1), m1, hi(t2), m2, hi(tj), hi(tm)).unwrap().to_f64();
                            let want = multiplet[im][i1][i2];
                            assert!(
                                (exact - want).abs() <= 1e-12,
                                "<{t1}/2 {m1}; {t2}/2 {m2} | {tj}/2 {tm}/2>: {exact} vs {want}"
                            );
                        }
                    }
                }
                tj += 2;
            }
        }
    }
}

#[test]
fn documented_values() {
    assert_eq!(
        wigner_3j(hi(1), hi(1), hi(2), hi(-1), hi(-1), hi(2)).unwrap().to_string(),
        "-√(1/3)"
    );
    assert_eq!(wigner_3j(hi(0), hi(0), hi(0), hi(0), hi(0), hi(0)).unwrap(), SqrtRational::one());
    assert_eq!(
        clebsch_gordan(hi(1), hi(1), hi(1), hi(-1), hi(0), hi(0)).unwrap().to_string(),
        "+√(1/2)"
    );
}

// ---------------------------------------------------------------------------
// Symmetries and orthogonality

fn arb_3j() -> impl Strategy<Value = ([i64; 3], [i64; 3])> {
    (0i64..=8, 0i64..=8, 0i64..=8)
        .prop_filter("triangle", |(a, b, c)| triangle_ok(hi(*a), hi(*b), hi(*c)))
        .prop_flat_map(|(a, b, c)| {
            let ms = (0..=a, 0..=b).prop_map(move |(i, k)| (-a + 2 * i, -b + 2 * k));
            (Just([a, b, c]), ms)
        })
        .prop_filter("|m3| <= j3", |(j, (m1, m2))| (m1 + m2).abs() <= j[2])
        .prop_map(|(j, (m1, m2))| (j, [m1, m2, -m1 - m2]))
}

fn three_j(j: [i64; 3], m: [i64; 3]) -> SqrtRational {
    wigner_3j(hi(j[0]), hi(j[1]), hi(j[2]), hi(m[0]), hi(m[1]), hi(m[2])).unwrap()
}

fn six_j(j: [i64; 6]) -> SqrtRational {
    wigner_6j(hi(j[0]), hi(j[1]), hi(j[2]), hi(j[3]), hi(j[4]), hi(j[5])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn three_j_permutation_symmetry((j, m) in arb_3j()) {
        let base = three_j(j, m);
        prop_assert_eq!(&three_j([j[1], j[2], j[0]], [m[1], m[2], m[0]]), &base);
        let odd = SqrtRational::from_integer(sign_of(j[0] + j[1] + j[2]));
        prop_assert_eq!(three_j([j[1], j[0], j[2]], [m[1], m[0], m[2]]), &odd * &base);
        prop_assert_eq!(three_j(j, [-m[0], -m[1], -m[2]]), &odd * &base);
    }

    #[test]
    fn six_j_tetrahedral_symmetry(j in prop::array::uniform6(0i64..=6)) {
        let base = six_j(j);
        // column permutation
        prop_assert_eq!(&six_j([j[1], j[0], j[2], j[4], j[3], j[5]]), &base);
        prop_assert_eq!(&six_j([j[0], j[2], j[1], j[3], j[5], j[4]]), &base);
        // swap upper and lower in two columns
        prop_assert_eq!(&six_j([j[3], j[4], j[2], j[0], j[1], j[5]]), &base);
    }

    #[test]
    fn three_j_orthogonality(a in 0i64..=6, b in 0i64..=6, m3i in 0usize..13) {
        let lo = (a - b).abs();
        let mut ok = true;
        let mut c1 = lo;
        while c1 <= a + b {
            let mut c2 = lo;
            while c2 <= a + b {
                let m3 = -c1.min(c2) + 2 * (m3i as i64 % (c1.min(c2) + 1));
                let mut s = 0.0;
                for m1 in (-a..=a).step_by(2) {
                    let m2 = -m3 - m1;
                    if m2.abs() > b {
                        continue;
                    }
                    s += three_j([a, b, c1], [m1, m2, m3]).to_f64() * three_j([a, b, c2], [m1, m2, m3]).to_f64();
                }
                let want = if c1 == c2 { 1.0 / (c1 + 1) as f64 } else { 0.0 };
                ok &= (s - want).abs() < 1e-12;
                c2 += 2;
            }
            c1 += 2;
        }
        prop_assert!(ok);
    }

    #[test]
    fn six_j_orthogonality(j in prop::array::uniform4(0i64..=6)) {
        // sum_x (2x+1)(2k+1) {a b x; c d k}{a b x; c d k'} = delta(k, k')
        let [a, b, c, d] = j;
        let ks: Vec<i64> = (0..=12)
            .filter(|&k| triangle_ok(hi(a), hi(d), hi(k)) && triangle_ok(hi(c), hi(b), hi(k)))
            .collect();
        for &k in &ks {
            for &k2 in &ks {
                let mut s = 0.0;
                for x in 0..=12 {
                    if triangle_ok(hi(a), hi(b), hi(x)) && triangle_ok(hi(c), hi(d), hi(x)) {
                        s += (x + 1) as f64 * (k + 1) as f64 * six_j([a, b, x, c, d, k]).to_f64() * six_j([a, b, x, c, d, k2]).to_f64();
                    }
                }
                let want = if k == k2 { 1.0 } else { 0.0 };
                prop_assert!((s - want).abs() < 1e-12, "k={} k'={} sum {}", k, k2, s);
            }
        }
    }
}
