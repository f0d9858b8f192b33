//! Exact rational arithmetic, localization at a prime set, p-adic
//! valuations, and partial-fraction decomposition by prime support.
//!
//! All arithmetic is arbitrary precision; no floating point anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number, always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("denominator prime {prime} does not divide modulus {modulus}")]
    DenominatorNotLocal { prime: BigUint, modulus: u64 },
    #[error("valuation of zero is undefined")]
    ZeroInput,
    #[error("denominator prime {0} is outside the given prime set")]
    UnsupportedPrime(BigUint),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be distinct and strictly increasing")]
    UnsortedPrimes,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

pub fn rational_from_i64(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as "m/d", omitting "/d" when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses "m" or "m/d"; rejects empty parts and zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let mut parts = s.splitn(2, '/');
    let numer = parts.next().ok_or_else(|| format!("empty rational: {s:?}"))?;
    let numer = BigInt::from_str(numer.trim()).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
    let denom = match parts.next() {
        None => BigInt::one(),
        Some(d) => BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator in {s:?}: {e}"))?,
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(numer, denom))
}

/// Returns true if n is prime, by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of a small integer by trial division, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A finite ascending set of distinct primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(primes: Vec<u64>) -> Result<Self, ArithError> {
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(ArithError::UnsortedPrimes);
            }
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(ArithError::NotPrime(p));
            }
        }
        Ok(PrimeSet { primes })
    }

    /// The primes dividing n (radical support), as a prime set.
    pub fn support_of(n: u64) -> Self {
        PrimeSet {
            primes: factorize(n).into_iter().map(|(p, _)| p).collect(),
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

/// A rational whose reduced denominator is supported on the primes of a
/// fixed modulus n; an element of the group D_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedRational {
    value: Rational,
    modulus: u64,
}

/// True iff every prime of d divides n.
fn denominator_is_local(d: &BigUint, n: u64) -> bool {
    let n = BigUint::from(n);
    let mut d = d.clone();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&n);
        if g.is_one() {
            return false;
        }
        d /= g;
    }
}

/// First prime of d not dividing n (for error reporting). Caller
/// guarantees one exists; found by stripping the n-part and factoring.
fn offending_prime(d: &BigUint, n: u64) -> BigUint {
    let nn = BigUint::from(n);
    let mut d = d.clone();
    loop {
        let g = d.gcd(&nn);
        if g.is_one() {
            break;
        }
        d /= g;
    }
    // d is now coprime to n and > 1; return its smallest prime factor.
    let mut p = BigUint::from(2u32);
    loop {
        if (&d % &p).is_zero() {
            return p;
        }
        p += 1u32;
    }
}

/// Tags q with modulus n after checking q's denominator divides a power
/// of n ("dn_make").
pub fn dn_make(q: Rational, n: u64) -> Result<LocalizedRational, ArithError> {
    assert!(n >= 1, "modulus must be positive");
    let d = q.denom().to_biguint().expect("denominator is positive");
    if !denominator_is_local(&d, n) {
        return Err(ArithError::DenominatorNotLocal {
            prime: offending_prime(&d, n),
            modulus: n,
        });
    }
    Ok(LocalizedRational { value: q, modulus: n })
}

impl LocalizedRational {
    pub fn zero(n: u64) -> Self {
        LocalizedRational {
            value: Rational::zero(),
            modulus: n,
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn combine(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, ArithError> {
        if self.modulus != other.modulus {
            return Err(ArithError::ModulusMismatch(self.modulus, other.modulus));
        }
        // Sums, differences and products of n-local rationals stay n-local.
        Ok(LocalizedRational {
            value: f(&self.value, &other.value),
            modulus: self.modulus,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        LocalizedRational {
            value: -self.value.clone(),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for LocalizedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.value))
    }
}

/// p-adic valuation of a nonzero rational: q = p^v (u/w) with p dividing
/// neither u nor w.
pub fn valuation(q: &Rational, p: u64) -> Result<i64, ArithError> {
    if q.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut numer = q.numer().abs();
    while (&numer % &p).is_zero() {
        numer /= &p;
        v += 1;
    }
    if v == 0 {
        let mut denom = q.denom().clone();
        while (&denom % &p).is_zero() {
            denom /= &p;
            v -= 1;
        }
    }
    Ok(v)
}

/// Splits q as remainder + sum of p-parts, each p-part in [0,1) with
/// denominator a power of p; the decomposition is unique under these
/// normalizations.
pub fn prime_fraction_split(
    q: &Rational,
    primes: &PrimeSet,
) -> Result<(BTreeMap<u64, Rational>, BigInt), ArithError> {
    // Reject denominators with support outside the set up front.
    for (p, _) in factorize_denominator(q)? {
        if !primes.contains(p) {
            return Err(ArithError::UnsupportedPrime(BigUint::from(p)));
        }
    }
    let mut parts = BTreeMap::new();
    let mut rest = q.clone();
    for &p in primes.primes() {
        let e = {
            let mut e = 0u32;
            let bp = BigInt::from(p);
            let mut d = rest.denom().clone();
            while (&d % &bp).is_zero() {
                d /= &bp;
                e += 1;
            }
            e
        };
        let modulus = BigInt::from(p).pow(e);
        // rest = a / (modulus * w) with gcd(modulus, w) = 1; the p-part is
        // (a * w^{-1} mod modulus) / modulus, reduced into [0,1).
        let w = rest.denom() / &modulus;
        let inv = modular_inverse(&w, &modulus);
        let residue = (rest.numer() * inv).mod_floor(&modulus);
        let part = Rational::new(residue, modulus);
        rest -= &part;
        parts.insert(p, part);
    }
    debug_assert!(rest.denom().is_one());
    Ok((parts, rest.numer().clone()))
}

/// Prime factorization of q's reduced denominator. Denominators in this
/// crate are products of u64 prime powers, so any leftover prime cofactor
/// fits in u64.
fn factorize_denominator(q: &Rational) -> Result<Vec<(u64, u32)>, ArithError> {
    let mut d = q.denom().to_biguint().expect("positive denominator");
    let mut out = Vec::new();
    let mut p = 2u64;
    while !d.is_one() {
        let bp = BigUint::from(p);
        if &bp * &bp > d {
            break;
        }
        if (&d % &bp).is_zero() {
            let mut e = 0;
            while (&d % &bp).is_zero() {
                d /= &bp;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !d.is_one() {
        // leftover cofactor is prime
        let digits = d.to_u64_digits();
        let val = if digits.len() == 1 { digits[0] } else { u64::MAX };
        out.push((val, 1));
    }
    Ok(out)
}

/// Inverse of a modulo m for coprime a, m >= 1 (extended gcd).
pub fn modular_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "inputs must be coprime");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        rational_from_i64(n, d)
    }

    #[test]
    fn dn_make_accepts_local_denominators() {
        let x = dn_make(r(3, 8), 2).unwrap();
        assert_eq!(x.value(), &r(3, 8));
        assert_eq!(x.modulus(), 2);
        let z = dn_make(r(0, 1), 5).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn dn_make_rejects_foreign_prime() {
        match dn_make(r(1, 6), 2) {
            Err(ArithError::DenominatorNotLocal { prime, modulus }) => {
                assert_eq!(prime, BigUint::from(3u32));
                assert_eq!(modulus, 2);
            }
            other => panic!("expected DenominatorNotLocal, got {other:?}"),
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&r(8, 3), 2).unwrap(), 3);
        assert_eq!(valuation(&r(1, 9), 3).unwrap(), -2);
        assert_eq!(valuation(&r(5, 7), 2).unwrap(), 0);
        assert_eq!(valuation(&Rational::zero(), 2), Err(ArithError::ZeroInput));
    }

    #[test]
    fn prime_fraction_split_examples() {
        let ps = PrimeSet::new(vec![2, 3]).unwrap();
        let (parts, rem) = prime_fraction_split(&r(1, 6), &ps).unwrap();
        assert_eq!(parts[&2], r(1, 2));
        assert_eq!(parts[&3], r(2, 3));
        assert_eq!(rem, BigInt::from(-1));

        let ps2 = PrimeSet::new(vec![2]).unwrap();
        let (parts, rem) = prime_fraction_split(&Rational::zero(), &ps2).unwrap();
        assert!(parts[&2].is_zero());
        assert!(rem.is_zero());

        let (parts, rem) = prime_fraction_split(&r(5, 4), &ps2).unwrap();
        assert_eq!(parts[&2], r(1, 4));
        assert_eq!(rem, BigInt::from(1));
    }

    #[test]
    fn prime_fraction_split_rejects_unsupported() {
        let ps = PrimeSet::new(vec![2]).unwrap();
        assert!(matches!(
            prime_fraction_split(&r(1, 6), &ps),
            Err(ArithError::UnsupportedPrime(_))
        ));
    }

    #[test]
    fn rational_string_round_trip() {
        assert_eq!(format_rational(&r(-3, 4)), "-3/4");
        assert_eq!(format_rational(&r(6, 3)), "2");
        assert_eq!(parse_rational("-3/4").unwrap(), r(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1//2").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new(vec![2, 3, 5]).is_ok());
        assert!(matches!(PrimeSet::new(vec![3, 2]), Err(ArithError::UnsortedPrimes)));
        assert!(matches!(PrimeSet::new(vec![2, 4]), Err(ArithError::NotPrime(4))));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn valuation_is_additive(
            a in arb_rational().prop_filter("nonzero", |q| !q.is_zero()),
            b in arb_rational().prop_filter("nonzero", |q| !q.is_zero()),
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let lhs = valuation(&(&a * &b), p).unwrap();
            prop_assert_eq!(lhs, valuation(&a, p).unwrap() + valuation(&b, p).unwrap());
        }

        #[test]
        fn split_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            // restrict the denominator to {2,3,5}-smooth inputs
            let mut dd = d;
            for p in [2, 3, 5] {
                while dd % p == 0 { dd /= p; }
            }
            let q = r(n, d / dd);
            let ps = PrimeSet::new(vec![2, 3, 5]).unwrap();
            let (parts, rem) = prime_fraction_split(&q, &ps).unwrap();
            let mut total = Rational::from(rem);
            for (p, part) in &parts {
                prop_assert!(!part.is_negative() && part < &Rational::one());
                if !part.is_zero() {
                    prop_assert_eq!(factorize_denominator(part).unwrap().len(), 1);
                    prop_assert!(part.denom().to_string().parse::<u64>().is_ok());
                    prop_assert_eq!(valuation(part, *p).unwrap() < 0, !part.denom().is_one());
                }
                total += part;
            }
            prop_assert_eq!(total, q);
        }

        #[test]
        fn localized_closure(
            an in -100i64..100, ad in 0u32..6, bn in -100i64..100, bd in 0u32..6,
        ) {
            let n = 6u64;
            let a = dn_make(r(an, 6i64.pow(ad)), n).unwrap();
            let b = dn_make(r(bn, 6i64.pow(bd)), n).unwrap();
            for v in [a.add(&b).unwrap(), a.sub(&b).unwrap(), a.mul(&b).unwrap()] {
                // re-tagging must succeed: the result is still n-local
                prop_assert!(dn_make(v.value().clone(), n).is_ok());
            }
        }
    }
}
