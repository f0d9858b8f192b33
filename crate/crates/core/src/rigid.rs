//! p-adic digit streams, partial sums, the vectors x_n, and a membership
//! decision for the rigid-system subgroups of Q^r built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{valuation, Rational};

/// Deterministic digit source for one p-adic number: either an explicit
/// prefix with a periodic tail, or a seeded pseudorandom stream.
///
/// The construction calls for algebraically independent p-adic units,
/// which no finite description can certify; seeded pseudorandom digits
/// are the documented stand-in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    Explicit {
        digits: Vec<u64>,
        #[serde(default)]
        tail: Vec<u64>,
    },
    Seeded { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitStream {
    pub p: u64,
    #[serde(flatten)]
    pub descriptor: Descriptor,
}

impl DigitStream {
    pub fn explicit(p: u64, digits: Vec<u64>, tail: Vec<u64>) -> Self {
        assert!(digits.iter().chain(&tail).all(|&d| d < p), "digit out of range");
        DigitStream { p, descriptor: Descriptor::Explicit { digits, tail } }
    }

    pub fn seeded(p: u64, seed: u64) -> Self {
        DigitStream { p, descriptor: Descriptor::Seeded { seed } }
    }

    /// The constant stream 1, 0, 0, ... encoding the unit 1.
    pub fn constant_unit(p: u64) -> Self {
        Self::explicit(p, vec![1], vec![0])
    }

    /// Digit at the given level, always in [0, p).
    pub fn digit(&self, level: u64) -> u64 {
        match &self.descriptor {
            Descriptor::Explicit { digits, tail } => {
                if (level as usize) < digits.len() {
                    digits[level as usize]
                } else if tail.is_empty() {
                    0
                } else {
                    tail[(level as usize - digits.len()) % tail.len()]
                }
            }
            Descriptor::Seeded { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_word_pos(level as u128);
                rng.next_u64() % self.p
            }
        }
    }

    /// A p-adic unit needs a nonzero constant digit.
    pub fn is_unit(&self) -> bool {
        self.digit(0) != 0
    }
}

/// A rank-r family of digit streams over one prime, the first stream
/// fixed to the constant unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidSystemSpec {
    pub p: u64,
    pub r: usize,
    streams: Vec<DigitStream>,
}

impl RigidSystemSpec {
    /// Builds the spec from the streams for pi_2 .. pi_r; pi_1 = 1 is
    /// supplied internally. Returns the spec together with the indices
    /// (2-based as in the construction) of streams that are not p-adic
    /// units, as a warning list rather than an error.
    pub fn new(p: u64, extra: Vec<DigitStream>) -> (Self, Vec<usize>) {
        assert!(crate::arith::is_prime(p), "p must be prime");
        assert!(!extra.is_empty(), "rank must be at least 2");
        assert!(extra.iter().all(|s| s.p == p), "stream prime mismatch");
        let non_units = extra
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_unit())
            .map(|(i, _)| i + 2)
            .collect();
        let mut streams = vec![DigitStream::constant_unit(p)];
        streams.extend(extra);
        let r = streams.len();
        (RigidSystemSpec { p, r, streams }, non_units)
    }

    /// Seeded spec with r - 1 pseudorandom unit streams derived from one seed.
    pub fn seeded(p: u64, r: usize, seed: u64) -> Self {
        assert!(r >= 2);
        let extra = (1..r)
            .map(|i| {
                // nudge the seed until the constant digit is nonzero, so the
                // stream is a unit
                let mut s = seed.wrapping_add(i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                while !DigitStream::seeded(p, s).is_unit() {
                    s = s.wrapping_add(1);
                }
                DigitStream::seeded(p, s)
            })
            .collect();
        Self::new(p, extra).0
    }

    pub fn streams(&self) -> &[DigitStream] {
        &self.streams
    }
}

/// n-th truncation: sum over k < n of s_k p^k; level 0 gives 0.
pub fn partial_sum(s: &DigitStream, n: u64) -> BigInt {
    let p = BigInt::from(s.p);
    let mut acc = BigInt::zero();
    let mut pk = BigInt::one();
    for k in 0..n {
        acc += BigInt::from(s.digit(k)) * &pk;
        pk *= &p;
    }
    acc
}

/// x_n = p^-n (a_1 + pi_{2,n} a_2 + ... + pi_{r,n} a_r); x_0 = a_1.
pub fn x_vector(spec: &RigidSystemSpec, n: u64) -> Vec<Rational> {
    if n == 0 {
        let mut v = vec![Rational::zero(); spec.r];
        v[0] = Rational::one();
        return v;
    }
    let pn = BigInt::from(spec.p).pow(n as u32);
    spec.streams
        .iter()
        .map(|s| Rational::new(partial_sum(s, n), pn.clone()))
        .collect()
}

/// Verifies p x_{n+1} - x_n = sum_i s_{in} a_i for 0 <= n < upto.
///
/// Coordinate 1's digit at level 0 counts as 0: the convention x_0 = a_1
/// already contains the whole of pi_1 = 1, so the level-0 increment of
/// the first coordinate is zero.
pub fn recurrence_check(spec: &RigidSystemSpec, upto: u64) -> bool {
    let p = Rational::from(BigInt::from(spec.p));
    let mut xn = x_vector(spec, 0);
    for n in 0..upto {
        let xn1 = x_vector(spec, n + 1);
        for (i, s) in spec.streams.iter().enumerate() {
            let digit = if i == 0 && n == 0 { 0 } else { s.digit(n) };
            let lhs = &p * &xn1[i] - &xn[i];
            if lhs != Rational::from(BigInt::from(digit)) {
                return false;
            }
        }
        xn = xn1;
    }
    true
}

/// Decides v in A_pi = <a_1, ..., a_r, x_1, x_2, ...>.
///
/// The chain G_N = <a_1..a_r, x_N> is increasing in N since
/// x_{N-1} = p x_N - (digit vector), so it suffices to test v in G_N at
/// N = max(0, -min_i val_p(v_i)). Coordinate 1 of x_N is 1/p^N, which
/// pins the only possible x_N-coefficient c modulo p^N.
pub fn rigid_membership(v: &[Rational], spec: &RigidSystemSpec) -> bool {
    assert_eq!(v.len(), spec.r, "vector rank mismatch");
    // every coordinate must be p-local
    for c in v {
        let mut d = c.denom().clone();
        let p = BigInt::from(spec.p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
        if !d.is_one() {
            return false;
        }
    }
    let level = v
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| -valuation(c, spec.p).expect("nonzero"))
        .max()
        .unwrap_or(0)
        .max(0) as u64;
    let pn = BigInt::from(spec.p).pow(level as u32);
    let scaled = &v[0] * Rational::from(pn.clone());
    if !scaled.denom().is_one() {
        return false;
    }
    let c = Rational::from(scaled.numer().mod_floor(&pn));
    let xn = x_vector(spec, level);
    v.iter()
        .zip(&xn)
        .all(|(vi, xi)| (vi - &c * xi).denom().is_one())
}
