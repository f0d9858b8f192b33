//! The indecomposable rank-two subgroup of Q^2 generated by
//! p^m u, q^m v, r^m (u + v) over all integers m, with a decidable
//! membership test.

use thiserror::Error;

use crate::arith::{is_prime, prime_fraction_split, PrimeSet, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PqrError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be pairwise distinct")]
    NotDistinct,
}

/// Three distinct primes naming the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PqrSpec {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl PqrSpec {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self, PqrError> {
        for v in [p, q, r] {
            if !is_prime(v) {
                return Err(PqrError::NotPrime(v));
            }
        }
        if p == q || q == r || p == r {
            return Err(PqrError::NotDistinct);
        }
        Ok(PqrSpec { p, q, r })
    }
}

/// Decides (x, y) in G = { (A + C, B + C) : A in Z[1/p], B in Z[1/q],
/// C in Z[1/r] }: the denominator of x must be {p,r}-supported, that of
/// y {q,r}-supported, and the r-fractional parts of x and y must agree
/// (the common C can then absorb them, the rest goes to A and B).
pub fn pqr_membership(x: &Rational, y: &Rational, spec: &PqrSpec) -> bool {
    let mut px = vec![spec.p, spec.r];
    px.sort_unstable();
    let mut py = vec![spec.q, spec.r];
    py.sort_unstable();
    let sx = PrimeSet::new(px).expect("distinct primes");
    let sy = PrimeSet::new(py).expect("distinct primes");
    let Ok((parts_x, _)) = prime_fraction_split(x, &sx) else {
        return false;
    };
    let Ok((parts_y, _)) = prime_fraction_split(y, &sy) else {
        return false;
    };
    parts_x[&spec.r] == parts_y[&spec.r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational_from_i64 as q;

    const SPEC: PqrSpec = PqrSpec { p: 2, q: 3, r: 5 };

    #[test]
    fn spec_validation() {
        assert!(PqrSpec::new(2, 3, 5).is_ok());
        assert_eq!(PqrSpec::new(2, 3, 4), Err(PqrError::NotPrime(4)));
        assert_eq!(PqrSpec::new(2, 3, 3), Err(PqrError::NotDistinct));
    }

    #[test]
    fn generators_are_members() {
        // r^-1 (u + v)
        assert!(pqr_membership(&q(1, 5), &q(1, 5), &SPEC));
        // p^-1 u and q^-1 v combined
        assert!(pqr_membership(&q(1, 2), &q(1, 3), &SPEC));
        // integer lattice
        assert!(pqr_membership(&q(7, 1), &q(-4, 1), &SPEC));
    }

    #[test]
    fn mismatched_r_parts_rejected() {
        assert!(!pqr_membership(&q(1, 5), &q(2, 5), &SPEC));
    }

    #[test]
    fn foreign_denominators_rejected() {
        assert!(!pqr_membership(&q(1, 7), &q(0, 1), &SPEC));
        // q-power denominator on the u coordinate is not allowed
        assert!(!pqr_membership(&q(1, 3), &q(0, 1), &SPEC));
        assert!(!pqr_membership(&q(0, 1), &q(1, 2), &SPEC));
    }
}
