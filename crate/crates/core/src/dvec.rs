//! The group D(n) of finitely supported vectors of n-local rationals,
//! the shift and scale automorphisms, the split extension
//! S = D(n) x| <a,b>, and a decidable membership test for the
//! 2-generated metabelian subgroup G = <a, f> with f = b*c.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{dn_make, format_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DvecError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("coordinate {index} = {value} is not n-local for n = {modulus}")]
    NotLocal { index: i64, value: String, modulus: u64 },
}

/// Finitely supported map Z -> D_n; an element of D(n). Zero values are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DVector {
    modulus: u64,
    support: BTreeMap<i64, Rational>,
}

impl DVector {
    pub fn zero(modulus: u64) -> Self {
        DVector { modulus, support: BTreeMap::new() }
    }

    /// Builds a vector from (index, value) pairs, checking n-locality.
    pub fn from_entries(
        modulus: u64,
        entries: impl IntoIterator<Item = (i64, Rational)>,
    ) -> Result<Self, DvecError> {
        let mut support = BTreeMap::new();
        for (i, v) in entries {
            if v.is_zero() {
                continue;
            }
            dn_make(v.clone(), modulus).map_err(|_| DvecError::NotLocal {
                index: i,
                value: format_rational(&v),
                modulus,
            })?;
            let slot = support.entry(i).or_insert_with(Rational::zero);
            *slot += v;
            if slot.is_zero() {
                support.remove(&i);
            }
        }
        Ok(DVector { modulus, support })
    }

    /// The standard basis vector e_i.
    pub fn basis(modulus: u64, index: i64) -> Self {
        let mut support = BTreeMap::new();
        support.insert(index, Rational::one());
        DVector { modulus, support }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn support(&self) -> &BTreeMap<i64, Rational> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, index: i64) -> Rational {
        self.support.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &DVector) -> Result<DVector, DvecError> {
        if self.modulus != other.modulus {
            return Err(DvecError::ModulusMismatch(self.modulus, other.modulus));
        }
        let mut support = self.support.clone();
        for (&i, v) in &other.support {
            let slot = support.entry(i).or_insert_with(Rational::zero);
            *slot += v;
            if slot.is_zero() {
                support.remove(&i);
            }
        }
        Ok(DVector { modulus: self.modulus, support })
    }

    pub fn neg(&self) -> DVector {
        DVector {
            modulus: self.modulus,
            support: self.support.iter().map(|(&i, v)| (i, -v.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &DVector) -> Result<DVector, DvecError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> DVector {
        if c.is_zero() {
            return DVector::zero(self.modulus);
        }
        DVector {
            modulus: self.modulus,
            support: self.support.iter().map(|(&i, v)| (i, v * c)).collect(),
        }
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, v) in &self.support {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})e_{}", format_rational(v), i)?;
        }
        Ok(())
    }
}

/// k-fold coordinate shift: result index i carries x's value at i - k.
pub fn alpha(x: &DVector, k: i64) -> DVector {
    DVector {
        modulus: x.modulus,
        support: x.support.iter().map(|(&i, v)| (i + k, v.clone())).collect(),
    }
}

/// Multiplication by n^k (k negative divides; values stay n-local).
pub fn beta(x: &DVector, k: i64) -> DVector {
    let n = BigInt::from(x.modulus);
    let factor = if k >= 0 {
        Rational::from(n.pow(k as u32))
    } else {
        Rational::new(BigInt::one(), n.pow((-k) as u32))
    };
    x.scale(&factor)
}

/// Coordinate-sum functional: sigma(x) = sum of all coordinates, in D_n.
pub fn sigma(x: &DVector) -> Rational {
    x.support.values().sum()
}

/// Element of S = D(n) x| <a,b> in the normal form g = x * a^i * b^j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SElement {
    pub base: DVector,
    pub a_exp: i64,
    pub b_exp: i64,
}

impl SElement {
    pub fn identity(modulus: u64) -> Self {
        SElement { base: DVector::zero(modulus), a_exp: 0, b_exp: 0 }
    }

    pub fn from_base(base: DVector) -> Self {
        SElement { base, a_exp: 0, b_exp: 0 }
    }

    pub fn gen_a(modulus: u64) -> Self {
        SElement { base: DVector::zero(modulus), a_exp: 1, b_exp: 0 }
    }

    pub fn gen_b(modulus: u64) -> Self {
        SElement { base: DVector::zero(modulus), a_exp: 0, b_exp: 1 }
    }

    /// The distinguished vector c = e_0 as a group element.
    pub fn gen_c(modulus: u64) -> Self {
        SElement::from_base(DVector::basis(modulus, 0))
    }

    /// f = b * c.
    pub fn gen_f(modulus: u64) -> Self {
        s_multiply(&SElement::gen_b(modulus), &SElement::gen_c(modulus)).unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus()
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_zero() && self.a_exp == 0 && self.b_exp == 0
    }

    pub fn inverse(&self) -> SElement {
        // (x a^i b^j)^-1 = alpha^i(beta^j(-x)) a^-i b^-j
        let base = alpha(&beta(&self.base.neg(), self.b_exp), self.a_exp);
        SElement { base, a_exp: -self.a_exp, b_exp: -self.b_exp }
    }
}

/// Product in S. With the conjugation rules a^-1 x a = alpha(x) and
/// b^-1 x b = beta(x), the normal-form law reads
/// (x a^i b^j)(y a^k b^l) = (x + alpha^{-i}(beta^{-j}(y))) a^{i+k} b^{j+l}.
pub fn s_multiply(g: &SElement, h: &SElement) -> Result<SElement, DvecError> {
    if g.modulus() != h.modulus() {
        return Err(DvecError::ModulusMismatch(g.modulus(), h.modulus()));
    }
    let moved = alpha(&beta(&h.base, -g.b_exp), -g.a_exp);
    Ok(SElement {
        base: g.base.add(&moved)?,
        a_exp: g.a_exp + h.a_exp,
        b_exp: g.b_exp + h.b_exp,
    })
}

/// [g, h] = g^-1 h^-1 g h.
pub fn commutator(g: &SElement, h: &SElement) -> Result<SElement, DvecError> {
    let gi = g.inverse();
    let hi = h.inverse();
    s_multiply(&s_multiply(&s_multiply(&gi, &hi)?, g)?, h)
}

/// Letters of words over S; uppercase in the CLI syntax means inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
    C,
    CInv,
    F,
    FInv,
}

impl Letter {
    pub fn from_char(ch: char) -> Option<Letter> {
        Some(match ch {
            'a' => Letter::A,
            'A' => Letter::AInv,
            'b' => Letter::B,
            'B' => Letter::BInv,
            'c' => Letter::C,
            'C' => Letter::CInv,
            'f' => Letter::F,
            'F' => Letter::FInv,
            _ => return None,
        })
    }
}

/// Word over {a, b, c, f} and inverses; f abbreviates b*c.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GWord(pub Vec<Letter>);

impl GWord {
    /// Parses "aFcB"-style words (uppercase = inverse).
    pub fn parse(s: &str) -> Result<GWord, char> {
        s.chars()
            .filter(|ch| !ch.is_whitespace())
            .map(|ch| Letter::from_char(ch).ok_or(ch))
            .collect::<Result<Vec<_>, _>>()
            .map(GWord)
    }

    /// Formal commutator [x, y] = x^-1 y^-1 x y as a word.
    pub fn commutator_word(x: &GWord, y: &GWord) -> GWord {
        let mut letters = Vec::new();
        letters.extend(x.inverse().0);
        letters.extend(y.inverse().0);
        letters.extend(x.0.iter().copied());
        letters.extend(y.0.iter().copied());
        GWord(letters)
    }

    pub fn inverse(&self) -> GWord {
        GWord(
            self.0
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::A => Letter::AInv,
                    Letter::AInv => Letter::A,
                    Letter::B => Letter::BInv,
                    Letter::BInv => Letter::B,
                    Letter::C => Letter::CInv,
                    Letter::CInv => Letter::C,
                    Letter::F => Letter::FInv,
                    Letter::FInv => Letter::F,
                })
                .collect(),
        )
    }
}

/// Evaluates a word under a -> a, b -> b, c -> e_0, f -> b*c.
pub fn evaluate_word(w: &GWord, n: u64) -> SElement {
    let a = SElement::gen_a(n);
    let b = SElement::gen_b(n);
    let c = SElement::gen_c(n);
    let f = SElement::gen_f(n);
    let mut acc = SElement::identity(n);
    for letter in &w.0 {
        let g = match letter {
            Letter::A => a.clone(),
            Letter::AInv => a.inverse(),
            Letter::B => b.clone(),
            Letter::BInv => b.inverse(),
            Letter::C => c.clone(),
            Letter::CInv => c.inverse(),
            Letter::F => f.clone(),
            Letter::FInv => f.inverse(),
        };
        acc = s_multiply(&acc, &g).expect("same modulus");
    }
    acc
}

/// The embedding of D(n) into [G,G]: x maps to the base vector
/// sum_l x_l (e_{2l+1} - e_{2l}), top exponents trivial.
pub fn embed_dn(x: &DVector) -> SElement {
    let mut acc = DVector::zero(x.modulus());
    for (&l, v) in x.support() {
        let block = DVector::from_entries(
            x.modulus(),
            [(2 * l + 1, v.clone()), (2 * l, -v.clone())],
        )
        .expect("values already n-local");
        acc = acc.add(&block).expect("same modulus");
    }
    SElement::from_base(acc)
}

/// Membership in G = <a, f>: peel off the abelianized part a^i f^j and
/// test whether the residual base vector sums to zero.
///
/// Uses [G,G] = { v in D(n) : sigma(v) = 0 }, a derived characterization
/// cross-checked against the exhaustive word-ball oracle in the tests.
pub fn g_membership(g: &SElement) -> (bool, DVector) {
    let n = g.modulus();
    let a = SElement::gen_a(n);
    let f = SElement::gen_f(n);
    let mut candidate = SElement::identity(n);
    candidate = s_multiply(&candidate, &power(&a, g.a_exp)).unwrap();
    candidate = s_multiply(&candidate, &power(&f, g.b_exp)).unwrap();
    let residual = s_multiply(&candidate.inverse(), g).unwrap();
    debug_assert_eq!(residual.a_exp, 0);
    debug_assert_eq!(residual.b_exp, 0);
    let member = sigma(&residual.base).is_zero();
    (member, residual.base)
}

/// g^k by repeated squaring over s_multiply.
pub fn power(g: &SElement, k: i64) -> SElement {
    let mut base = if k < 0 { g.inverse() } else { g.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = SElement::identity(g.modulus());
    while e > 0 {
        if e & 1 == 1 {
            acc = s_multiply(&acc, &base).unwrap();
        }
        base = s_multiply(&base, &base).unwrap();
        e >>= 1;
    }
    acc
}
