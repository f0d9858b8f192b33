//! Hall certification for flag-described subgroups of (Z/n)^s + D_n^r:
//! the torsion exponent, a maximal independent free basis of the rational
//! parts, and the finite prime set pi supporting the quotient K/F.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{factorize, PrimeSet, Rational};
use crate::snf::{smith_normal_form, IntegerMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HallError {
    #[error("flagged (divisible) generators cannot carry a torsion part")]
    FlaggedTorsion,
    #[error("generator shape mismatch: torsion length {torsion} vs rank {s}, rational length {rational} vs dim {r}")]
    BadGenerator { torsion: usize, s: usize, rational: usize, r: usize },
    #[error("rational coordinate {0} is not n-local")]
    NotLocal(String),
}

/// One generator: a torsion part in (Z/n)^s, a rational part in Q^r, and
/// a flag selecting the D_n-span (divisible hull) instead of the Z-span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlaggedGenerator {
    pub torsion: Vec<u64>,
    pub rational: Vec<Rational>,
    pub divisible: bool,
}

/// Finite description of a subgroup of (Z/n)^s + D_n^r: the Z-span of
/// the unflagged generators plus the D_n-span of the flagged ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlaggedGeneratingSet {
    pub modulus: u64,
    pub torsion_rank: usize,
    pub free_dim: usize,
    pub generators: Vec<FlaggedGenerator>,
}

impl FlaggedGeneratingSet {
    pub fn validate(&self) -> Result<(), HallError> {
        for g in &self.generators {
            if g.torsion.len() != self.torsion_rank || g.rational.len() != self.free_dim {
                return Err(HallError::BadGenerator {
                    torsion: g.torsion.len(),
                    s: self.torsion_rank,
                    rational: g.rational.len(),
                    r: self.free_dim,
                });
            }
            if g.divisible && g.torsion.iter().any(|&t| t % self.modulus != 0) {
                return Err(HallError::FlaggedTorsion);
            }
            for q in &g.rational {
                if crate::arith::dn_make(q.clone(), self.modulus).is_err() {
                    return Err(HallError::NotLocal(crate::arith::format_rational(q)));
                }
            }
        }
        Ok(())
    }
}

/// Certificate of the Hall-group properties for the described subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallCertificate {
    pub torsion_exponent: BigInt,
    pub free_basis: Vec<Vec<Rational>>,
    pub quotient_primes: PrimeSet,
}

/// Rational rank of a set of vectors by exact Gaussian elimination.
fn rational_rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let mut rank = 0;
    let dim = rows.first().map_or(0, |v| v.len());
    let mut col = 0;
    while col < dim && rank < rows.len() {
        if let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            rows.swap(rank, pivot);
            let inv = rows[rank][col].recip();
            for j in col..dim {
                rows[rank][j] = &rows[rank][j] * &inv;
            }
            for i in 0..rows.len() {
                if i != rank && !rows[i][col].is_zero() {
                    let factor = rows[i][col].clone();
                    for j in col..dim {
                        let t = &rows[rank][j] * &factor;
                        rows[i][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Clears denominators of the vectors jointly: returns integer columns
/// and the common denominator D, with column_i = D * vector_i.
fn clear_denominators(vectors: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut d = BigInt::one();
    for v in vectors {
        for q in v {
            d = d.lcm(q.denom());
        }
    }
    let cols = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|q| q.numer() * (&d / q.denom()))
                .collect()
        })
        .collect();
    (cols, d)
}

/// True iff v lies in the integer column span of the columns.
fn in_integer_span(columns: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let rows = v.len();
    if columns.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let cols = columns.len();
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for c in columns {
            entries.push(c[i].clone());
        }
    }
    let m = IntegerMatrix::new(rows, cols, entries).expect("consistent shape");
    let (s, u, _) = smith_normal_form(&m);
    // w = U v must satisfy s_i | w_i on the diagonal and w_i = 0 beyond it
    let w: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).map(|j| u.at(i, j) * &v[j]).sum())
        .collect();
    for i in 0..rows {
        if i < cols.min(rows) && !s.at(i, i).is_zero() {
            if !(&w[i] % s.at(i, i)).is_zero() {
                return false;
            }
        } else if !w[i].is_zero() {
            return false;
        }
    }
    true
}

/// Membership of v in the Z-span of the given rational vectors.
pub fn in_rational_lattice(vectors: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut all = vectors.to_vec();
    all.push(v.to_vec());
    let (mut cols, _) = clear_denominators(&all);
    let target = cols.pop().expect("pushed above");
    in_integer_span(&cols, &target)
}

/// Builds the certificate:
///   torsion_exponent from the unflagged torsion coordinates via SNF of
///     [A | nI] (the subgroup of (Z/n)^s is diag(d)Z^s / nZ^s in a
///     suitable basis, so the exponent is n / d_1);
///   free_basis as a maximal Z-independent subset of the rational parts;
///   pi as the primes p | n at which some flagged generator is not
///     already p-divisible inside the Z-span of the rational parts.
pub fn hall_certificate(gens: &FlaggedGeneratingSet) -> Result<HallCertificate, HallError> {
    gens.validate()?;
    let n = gens.modulus;
    let s = gens.torsion_rank;

    // torsion exponent
    let torsion_exponent = if s == 0 {
        BigInt::one()
    } else {
        let torsion_cols: Vec<Vec<BigInt>> = gens
            .generators
            .iter()
            .filter(|g| !g.divisible)
            .map(|g| g.torsion.iter().map(|&t| BigInt::from(t % n)).collect())
            .collect();
        let k = torsion_cols.len();
        let mut entries = Vec::with_capacity(s * (k + s));
        for i in 0..s {
            for c in &torsion_cols {
                entries.push(c[i].clone());
            }
            for j in 0..s {
                entries.push(if i == j { BigInt::from(n) } else { BigInt::zero() });
            }
        }
        let m = IntegerMatrix::new(s, k + s, entries).expect("consistent shape");
        let (snf, _, _) = smith_normal_form(&m);
        let d1 = snf.at(0, 0);
        debug_assert!(!d1.is_zero() && (BigInt::from(n) % d1).is_zero());
        BigInt::from(n) / d1
    };

    // maximal independent subset of the nonzero rational parts
    let rational_parts: Vec<Vec<Rational>> = gens
        .generators
        .iter()
        .map(|g| g.rational.clone())
        .filter(|v| v.iter().any(|q| !q.is_zero()))
        .collect();
    let mut free_basis: Vec<Vec<Rational>> = Vec::new();
    for v in &rational_parts {
        let mut candidate = free_basis.clone();
        candidate.push(v.clone());
        if rational_rank(&candidate) > free_basis.len() {
            free_basis = candidate;
        }
    }

    // pi: primes of n where a flagged generator strictly extends the Z-span
    let mut pi = Vec::new();
    for (p, _) in factorize(n) {
        let extends = gens.generators.iter().any(|g| {
            if !g.divisible || g.rational.iter().all(|q| q.is_zero()) {
                return false;
            }
            let scaled: Vec<Rational> = g
                .rational
                .iter()
                .map(|q| q / Rational::from(BigInt::from(p)))
                .collect();
            !in_rational_lattice(&rational_parts, &scaled)
        });
        if extends {
            pi.push(p);
        }
    }
    let quotient_primes = PrimeSet::new(pi).expect("factors of n are ascending primes");

    Ok(HallCertificate { torsion_exponent, free_basis, quotient_primes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational_from_i64 as q;

    fn gen(torsion: &[u64], rational: &[(i64, i64)], divisible: bool) -> FlaggedGenerator {
        FlaggedGenerator {
            torsion: torsion.to_vec(),
            rational: rational.iter().map(|&(a, b)| q(a, b)).collect(),
            divisible,
        }
    }

    #[test]
    fn single_flagged_generator_in_d6() {
        let gens = FlaggedGeneratingSet {
            modulus: 6,
            torsion_rank: 0,
            free_dim: 1,
            generators: vec![gen(&[], &[(1, 1)], true)],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert_eq!(cert.torsion_exponent, BigInt::one());
        assert_eq!(cert.free_basis, vec![vec![q(1, 1)]]);
        assert_eq!(cert.quotient_primes.primes(), &[2, 3]);
    }

    #[test]
    fn free_abelian_generators() {
        let gens = FlaggedGeneratingSet {
            modulus: 2,
            torsion_rank: 0,
            free_dim: 2,
            generators: vec![
                gen(&[], &[(1, 1), (0, 1)], false),
                gen(&[], &[(0, 1), (1, 1)], false),
            ],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert_eq!(cert.free_basis.len(), 2);
        assert!(cert.quotient_primes.primes().is_empty());
        assert_eq!(cert.torsion_exponent, BigInt::one());
    }

    #[test]
    fn pure_torsion_generator() {
        let gens = FlaggedGeneratingSet {
            modulus: 4,
            torsion_rank: 1,
            free_dim: 0,
            generators: vec![gen(&[1], &[], false)],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert_eq!(cert.torsion_exponent, BigInt::from(4));
        assert!(cert.free_basis.is_empty());
        assert!(cert.quotient_primes.primes().is_empty());
    }

    #[test]
    fn torsion_exponent_of_order_two_element_in_z4() {
        // the element 2 in Z/4 generates a subgroup of exponent 2
        let gens = FlaggedGeneratingSet {
            modulus: 4,
            torsion_rank: 1,
            free_dim: 0,
            generators: vec![gen(&[2], &[], false)],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert_eq!(cert.torsion_exponent, BigInt::from(2));
    }

    #[test]
    fn flagged_torsion_rejected() {
        let gens = FlaggedGeneratingSet {
            modulus: 4,
            torsion_rank: 1,
            free_dim: 1,
            generators: vec![gen(&[1], &[(1, 1)], true)],
        };
        assert_eq!(hall_certificate(&gens), Err(HallError::FlaggedTorsion));
    }

    #[test]
    fn non_local_rational_rejected() {
        let gens = FlaggedGeneratingSet {
            modulus: 4,
            torsion_rank: 0,
            free_dim: 1,
            generators: vec![gen(&[], &[(1, 3)], false)],
        };
        assert!(matches!(hall_certificate(&gens), Err(HallError::NotLocal(_))));
    }

    #[test]
    fn unflagged_only_generators_yield_empty_pi() {
        // 1/2 is in the Z-span only up to 2-divisibility, but with no
        // flagged generator pi stays empty
        let gens = FlaggedGeneratingSet {
            modulus: 2,
            torsion_rank: 0,
            free_dim: 1,
            generators: vec![gen(&[], &[(1, 2)], false)],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert!(cert.quotient_primes.primes().is_empty());
    }

    #[test]
    fn pi_ignores_primes_already_divisible() {
        // flagged generator 1/1 alongside unflagged 1/2: still not
        // 2-divisible arbitrarily deep, so 2 is in pi; mod 10 the prime 5
        // is also needed
        let gens = FlaggedGeneratingSet {
            modulus: 10,
            torsion_rank: 0,
            free_dim: 1,
            generators: vec![gen(&[], &[(1, 1)], true)],
        };
        let cert = hall_certificate(&gens).unwrap();
        assert_eq!(cert.quotient_primes.primes(), &[2, 5]);
    }

    #[test]
    fn generators_lie_in_span_of_basis_and_dn_hull() {
        // every generator's rational part must be reachable from the
        // certificate: Z-span of all parts extended n-divisibly at pi
        let gens = FlaggedGeneratingSet {
            modulus: 6,
            torsion_rank: 0,
            free_dim: 2,
            generators: vec![
                gen(&[], &[(1, 1), (1, 1)], true),
                gen(&[], &[(1, 2), (0, 1)], false),
                gen(&[], &[(0, 1), (1, 3)], false),
            ],
        };
        let cert = hall_certificate(&gens).unwrap();
        let all: Vec<Vec<Rational>> = gens.generators.iter().map(|g| g.rational.clone()).collect();
        for g in &gens.generators {
            // multiply by n^K to clear the D_n-denominators, then check
            // lattice membership of the scaled vector
            let scale = q(36, 1);
            let scaled: Vec<Rational> = g.rational.iter().map(|x| x * &scale).collect();
            assert!(in_rational_lattice(&all, &scaled));
        }
        assert_eq!(cert.free_basis.len(), 2);
        for p in cert.quotient_primes.primes() {
            assert_eq!(6 % p, 0);
        }
    }

    #[test]
    fn lattice_membership_basics() {
        let vecs = vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(3, 1)]];
        assert!(in_rational_lattice(&vecs, &[q(4, 1), q(3, 1)]));
        assert!(!in_rational_lattice(&vecs, &[q(1, 1), q(0, 1)]));
        assert!(in_rational_lattice(&vecs, &[q(0, 1), q(0, 1)]));
        assert!(in_rational_lattice(&[], &[]));
    }
}
