//! Upper unitriangular rational matrices: exact multiplication, unique
//! k-th roots via the nilpotent logarithm and exponential, and the
//! superdiagonal band statistic that controls derived length.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UtError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not upper unitriangular")]
    NotUnitriangular,
}

/// n x n rational matrix with unit diagonal and zeros below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitriangularMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl UnitriangularMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self, UtError> {
        if entries.len() != n * n {
            return Err(UtError::NotUnitriangular);
        }
        for i in 0..n {
            for j in 0..=i {
                let e = &entries[i * n + j];
                let ok = if i == j { e.is_one() } else { e.is_zero() };
                if !ok {
                    return Err(UtError::NotUnitriangular);
                }
            }
        }
        Ok(UnitriangularMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        UnitriangularMatrix { n, entries }
    }

    /// Builds from the strictly-upper entries of a full matrix, filling
    /// the diagonal with ones.
    pub fn from_strict_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                m.entries[i * n + j] = upper(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }

    pub fn inverse(&self) -> UnitriangularMatrix {
        // I + N has inverse I - N + N^2 - ... (N nilpotent)
        let nil = self.nilpotent_part();
        let mut acc = full_identity(self.n);
        let mut pw = nil.clone();
        let mut sign = -Rational::one();
        for _ in 1..self.n {
            acc = full_add(&acc, &full_scale(&pw, &sign));
            pw = full_mul_n(self.n, &pw, &nil);
            sign = -sign;
        }
        UnitriangularMatrix { n: self.n, entries: acc }
    }

    /// The strictly upper part N with M = I + N, as a plain matrix.
    fn nilpotent_part(&self) -> Vec<Rational> {
        let mut out = self.entries.clone();
        for i in 0..self.n {
            out[i * self.n + i] = Rational::zero();
        }
        out
    }
}

fn full_identity(n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n * n];
    for i in 0..n {
        out[i * n + i] = Rational::one();
    }
    out
}

fn full_mul_n(n: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k * n + j].is_zero() {
                    continue;
                }
                out[i * n + j] += &a[i * n + k] * &b[k * n + j];
            }
        }
    }
    out
}

fn full_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn full_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

/// Exact matrix product of two unitriangular matrices.
pub fn ut_multiply(
    m: &UnitriangularMatrix,
    n: &UnitriangularMatrix,
) -> Result<UnitriangularMatrix, UtError> {
    if m.n != n.n {
        return Err(UtError::DimensionMismatch(m.n, n.n));
    }
    Ok(UnitriangularMatrix { n: m.n, entries: full_mul_n(m.n, &m.entries, &n.entries) })
}

/// M^e for integer e (negative uses the inverse).
pub fn ut_power(m: &UnitriangularMatrix, e: i64) -> UnitriangularMatrix {
    let base = if e < 0 { m.inverse() } else { m.clone() };
    let mut acc = UnitriangularMatrix::identity(m.n);
    for _ in 0..e.unsigned_abs() {
        acc = ut_multiply(&acc, &base).expect("same dimension");
    }
    acc
}

/// The unique unitriangular k-th root of M, via the finite series
/// log(I + N) = N - N^2/2 + ..., division by k, and the finite exp.
pub fn ut_root(m: &UnitriangularMatrix, k: u64) -> UnitriangularMatrix {
    assert!(k >= 1);
    let n = m.n;
    let nil = m.nilpotent_part();
    // log
    let mut log = vec![Rational::zero(); n * n];
    let mut pw = nil.clone();
    for t in 1..n {
        let coeff = Rational::new(
            if t % 2 == 1 { BigInt::one() } else { -BigInt::one() },
            BigInt::from(t),
        );
        log = full_add(&log, &full_scale(&pw, &coeff));
        pw = full_mul_n(n, &pw, &nil);
    }
    let scaled = full_scale(&log, &Rational::new(BigInt::one(), BigInt::from(k)));
    // exp
    let mut acc = full_identity(n);
    let mut term = full_identity(n);
    let mut factorial = BigInt::one();
    for t in 1..n {
        term = full_mul_n(n, &term, &scaled);
        factorial *= t;
        acc = full_add(&acc, &full_scale(&term, &Rational::new(BigInt::one(), factorial.clone())));
    }
    UnitriangularMatrix { n, entries: acc }
}

/// Smallest superdiagonal offset carrying a nonzero entry; None for the
/// identity (band "infinity").
pub fn ut_band(m: &UnitriangularMatrix) -> Option<usize> {
    (1..m.n).find(|&offset| (0..m.n - offset).any(|i| !m.at(i, i + offset).is_zero()))
}

/// [M, N] = M^-1 N^-1 M N.
pub fn ut_commutator(
    m: &UnitriangularMatrix,
    n: &UnitriangularMatrix,
) -> Result<UnitriangularMatrix, UtError> {
    ut_multiply(&ut_multiply(&ut_multiply(&m.inverse(), &n.inverse())?, m)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational_from_i64 as q;
    use proptest::prelude::*;

    fn shear2(x: Rational) -> UnitriangularMatrix {
        UnitriangularMatrix::from_strict_upper(2, move |_, _| x.clone())
    }

    #[test]
    fn constructor_enforces_shape() {
        let bad = vec![q(1, 1), q(0, 1), q(1, 1), q(1, 1)];
        assert_eq!(UnitriangularMatrix::new(2, bad), Err(UtError::NotUnitriangular));
        let good = vec![q(1, 1), q(5, 2), q(0, 1), q(1, 1)];
        assert!(UnitriangularMatrix::new(2, good).is_ok());
    }

    #[test]
    fn multiply_examples() {
        let m = shear2(q(1, 1));
        let id = UnitriangularMatrix::identity(2);
        assert_eq!(ut_multiply(&m, &id).unwrap(), m);
        assert_eq!(ut_multiply(&m, &m.inverse()).unwrap(), id);
        assert_eq!(ut_multiply(&m, &m).unwrap(), shear2(q(2, 1)));
        assert!(matches!(
            ut_multiply(&m, &UnitriangularMatrix::identity(3)),
            Err(UtError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn root_examples() {
        let id = UnitriangularMatrix::identity(4);
        assert_eq!(ut_root(&id, 7), id);
        assert_eq!(ut_root(&shear2(q(1, 1)), 2), shear2(q(1, 2)));
    }

    #[test]
    fn band_examples() {
        assert_eq!(ut_band(&UnitriangularMatrix::identity(3)), None);
        assert_eq!(ut_band(&shear2(q(1, 1))), Some(1));
        let m = UnitriangularMatrix::from_strict_upper(3, |i, j| q((i + j) as i64, 1));
        let n = UnitriangularMatrix::from_strict_upper(3, |i, j| q((2 * i + 3 * j) as i64, 1));
        let c = ut_commutator(&m, &n).unwrap();
        assert!(ut_band(&c).map_or(true, |b| b >= 2));
    }

    fn arb_ut(n: usize) -> impl Strategy<Value = UnitriangularMatrix> {
        proptest::collection::vec((-9i64..9, 1i64..9), n * n).prop_map(move |vals| {
            let mut it = vals.into_iter();
            UnitriangularMatrix::from_strict_upper(n, |_, _| {
                let (a, b) = it.next().unwrap();
                q(a, b)
            })
        })
    }

    proptest! {
        #[test]
        fn root_power_round_trip(
            m in (2usize..6).prop_flat_map(arb_ut),
            k in 1u64..5,
        ) {
            let root = ut_root(&m, k);
            prop_assert_eq!(ut_power(&root, k as i64), m.clone());
            // uniqueness via idempotence: root of m^k with exponent k is m
            let pw = ut_power(&m, k as i64);
            prop_assert_eq!(ut_root(&pw, k), m);
        }

        #[test]
        fn band_superadditive(
            m in (3usize..6).prop_flat_map(|n| (arb_ut(n), arb_ut(n))),
        ) {
            let (a, bb) = m;
            let c = ut_commutator(&a, &bb).unwrap();
            if let (Some(ba), Some(bn), Some(bc)) = (ut_band(&a), ut_band(&bb), ut_band(&c)) {
                prop_assert!(bc >= ba + bn, "band [M,N]={bc} < {ba}+{bn}");
            }
        }
    }
}
