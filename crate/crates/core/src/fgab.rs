//! Embedding a finitely generated abelian group H as a normal subgroup
//! with finite cyclic quotient in a 2-generated metabelian group: the
//! cycling automorphism phi, its exact order, the semidirect product
//! H x| <phi>, and explicit words generating everything from phi and z_1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FgabError {
    #[error("finite orders must each be >= 2 and divide the previous one")]
    InvalidOrders,
    #[error("spec mismatch")]
    SpecMismatch,
    #[error("phi iteration exceeded its certified bound")]
    OrderBoundExceeded,
}

/// Generator data for H = Z^m + Z/n_{m+1} + ... + Z/n_{m+n} with the
/// decreasing divisibility chain n_{i+1} | n_i on the finite orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdersSpec {
    pub free_count: usize,
    pub finite_orders: Vec<u64>,
}

impl OrdersSpec {
    pub fn new(free_count: usize, finite_orders: Vec<u64>) -> Result<Self, FgabError> {
        for d in &finite_orders {
            if *d < 2 {
                return Err(FgabError::InvalidOrders);
            }
        }
        for w in finite_orders.windows(2) {
            if w[0] % w[1] != 0 {
                return Err(FgabError::InvalidOrders);
            }
        }
        Ok(OrdersSpec { free_count, finite_orders })
    }

    pub fn generator_count(&self) -> usize {
        self.free_count + self.finite_orders.len()
    }

    /// |L| for the torsion tail L = <z_{m+1}, ..., z_{m+n}>.
    pub fn torsion_order(&self) -> BigInt {
        self.finite_orders.iter().map(|&d| BigInt::from(d)).product()
    }

    fn reduce(&self, e: &mut [BigInt]) {
        for (i, &d) in self.finite_orders.iter().enumerate() {
            let j = self.free_count + i;
            e[j] = e[j].mod_floor(&BigInt::from(d));
        }
    }
}

/// Element of H as an exponent vector, torsion coordinates reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HElement {
    pub spec: OrdersSpec,
    pub exponents: Vec<BigInt>,
}

impl HElement {
    pub fn zero(spec: &OrdersSpec) -> Self {
        HElement {
            spec: spec.clone(),
            exponents: vec![BigInt::zero(); spec.generator_count()],
        }
    }

    pub fn generator(spec: &OrdersSpec, i: usize) -> Self {
        let mut h = Self::zero(spec);
        h.exponents[i] = BigInt::one();
        h
    }

    pub fn from_exponents(spec: &OrdersSpec, mut exponents: Vec<BigInt>) -> Self {
        assert_eq!(exponents.len(), spec.generator_count());
        spec.reduce(&mut exponents);
        HElement { spec: spec.clone(), exponents }
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &HElement) -> Result<HElement, FgabError> {
        if self.spec != other.spec {
            return Err(FgabError::SpecMismatch);
        }
        let mut e: Vec<BigInt> = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        self.spec.reduce(&mut e);
        Ok(HElement { spec: self.spec.clone(), exponents: e })
    }

    pub fn neg(&self) -> HElement {
        let mut e: Vec<BigInt> = self.exponents.iter().map(|x| -x).collect();
        self.spec.reduce(&mut e);
        HElement { spec: self.spec.clone(), exponents: e }
    }
}

/// The matrix of phi: column i holds the exponent vector of phi(z_i).
/// Rules: z_i -> z_{i+1} for i < m, z_m -> z_1 z_{m+1},
/// z_{m+i} -> z_{m+i} z_{m+i+1} for i < n, z_{m+n} -> z_{m+n}.
/// Well defined on the torsion tail by the divisibility chain.
pub fn build_phi(spec: &OrdersSpec) -> Vec<Vec<BigInt>> {
    let m = spec.free_count;
    let n = spec.finite_orders.len();
    let total = m + n;
    let mut cols = vec![vec![BigInt::zero(); total]; total];
    for i in 0..total {
        if i + 1 < m {
            cols[i][i + 1] = BigInt::one();
        } else if i + 1 == m {
            // z_m -> z_1 z_{m+1}
            cols[i][0] = BigInt::one();
            if n > 0 {
                cols[i][m] = BigInt::one();
            }
        } else {
            // torsion generator z_{m+j}, j = i - m
            cols[i][i] = BigInt::one();
            if i + 1 < total {
                cols[i][i + 1] = BigInt::one();
            }
        }
    }
    cols
}

/// Applies phi^k (k >= 0) to an element through the matrix action.
pub fn apply_phi(spec: &OrdersSpec, phi: &[Vec<BigInt>], h: &HElement, k: u64) -> HElement {
    let mut e = h.exponents.clone();
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); e.len()];
        for (i, col) in phi.iter().enumerate() {
            if e[i].is_zero() {
                continue;
            }
            for (j, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    next[j] += &e[i] * c;
                }
            }
        }
        spec.reduce(&mut next);
        e = next;
    }
    HElement { spec: spec.clone(), exponents: e }
}

/// Images of all generators under phi^k, advanced one application at a time.
struct PhiIterate<'a> {
    spec: &'a OrdersSpec,
    phi: &'a [Vec<BigInt>],
    images: Vec<HElement>,
}

impl<'a> PhiIterate<'a> {
    fn new(spec: &'a OrdersSpec, phi: &'a [Vec<BigInt>]) -> Self {
        let images = (0..spec.generator_count())
            .map(|i| HElement::generator(spec, i))
            .collect();
        PhiIterate { spec, phi, images }
    }

    fn step(&mut self) {
        for img in &mut self.images {
            *img = apply_phi(self.spec, self.phi, img, 1);
        }
    }

    fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, img)| *img == HElement::generator(self.spec, i))
    }

    fn is_identity_on_torsion(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .skip(self.spec.free_count)
            .all(|(i, img)| *img == HElement::generator(self.spec, i))
    }
}

/// The order of phi together with the pieces of its certified cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiOrderInfo {
    pub order: u64,
    /// minimal s > 0 with phi^{max(m,1) * s} identical on the torsion tail
    pub s: u64,
    /// |L|, the order of the torsion tail
    pub l: u64,
    /// max(m,1) * s * l, which the order divides
    pub bound: u64,
}

/// Exact multiplicative order of phi, found by iteration under the
/// certified cap m*s*l (s = minimal positive integer with phi^{ms}
/// identical on L, l = |L|; for m = 0 the cap degenerates to the order
/// of phi on L, which is finite since L is).
pub fn phi_order(spec: &OrdersSpec) -> Result<u64, FgabError> {
    phi_order_details(spec).map(|info| info.order)
}

pub fn phi_order_details(spec: &OrdersSpec) -> Result<PhiOrderInfo, FgabError> {
    let phi = build_phi(spec);
    let m = spec.free_count as u64;
    let step = m.max(1);
    let l_u64 = u64::try_from(&spec.torsion_order()).unwrap_or(u64::MAX);

    // find s by advancing phi^step at a time and watching the torsion tail
    let mut iter = PhiIterate::new(spec, &phi);
    let mut s = 0u64;
    let s_cap = l_u64.saturating_mul(l_u64).max(4);
    loop {
        for _ in 0..step {
            iter.step();
        }
        s += 1;
        if iter.is_identity_on_torsion() {
            break;
        }
        if s > s_cap {
            return Err(FgabError::OrderBoundExceeded);
        }
    }

    let bound = step.saturating_mul(s).saturating_mul(l_u64.max(1));
    let mut iter = PhiIterate::new(spec, &phi);
    for k in 1..=bound {
        iter.step();
        if iter.is_identity() {
            return Ok(PhiOrderInfo { order: k, s, l: l_u64, bound });
        }
    }
    Err(FgabError::OrderBoundExceeded)
}

/// Element of G = H x| <phi> in the normal form h * phi^t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSplitElement {
    pub h: HElement,
    pub t: u64,
}

/// The group G with its precomputed phi data.
#[derive(Debug, Clone)]
pub struct SplitGroup {
    pub spec: OrdersSpec,
    phi: Vec<Vec<BigInt>>,
    order: u64,
}

impl SplitGroup {
    pub fn new(spec: OrdersSpec) -> Result<Self, FgabError> {
        let order = phi_order(&spec)?;
        let phi = build_phi(&spec);
        Ok(SplitGroup { spec, phi, order })
    }

    pub fn phi_order(&self) -> u64 {
        self.order
    }

    pub fn phi_matrix(&self) -> &[Vec<BigInt>] {
        &self.phi
    }

    pub fn identity(&self) -> GSplitElement {
        GSplitElement { h: HElement::zero(&self.spec), t: 0 }
    }

    pub fn gen_phi(&self) -> GSplitElement {
        GSplitElement { h: HElement::zero(&self.spec), t: 1 % self.order }
    }

    pub fn gen_z(&self, i: usize) -> GSplitElement {
        GSplitElement { h: HElement::generator(&self.spec, i), t: 0 }
    }

    /// Conjugation convention: phi^-1 h phi = phi(h), so
    /// (h1 phi^t1)(h2 phi^t2) = (h1 + phi^{-t1}(h2)) phi^{t1+t2}.
    pub fn multiply(
        &self,
        g: &GSplitElement,
        h: &GSplitElement,
    ) -> Result<GSplitElement, FgabError> {
        if g.h.spec != self.spec || h.h.spec != self.spec {
            return Err(FgabError::SpecMismatch);
        }
        let moved = apply_phi(
            &self.spec,
            &self.phi,
            &h.h,
            (self.order - g.t % self.order) % self.order,
        );
        Ok(GSplitElement {
            h: g.h.add(&moved)?,
            t: (g.t + h.t) % self.order,
        })
    }

    pub fn inverse(&self, g: &GSplitElement) -> GSplitElement {
        let moved = apply_phi(&self.spec, &self.phi, &g.h.neg(), g.t % self.order);
        GSplitElement {
            h: moved,
            t: (self.order - g.t % self.order) % self.order,
        }
    }

    pub fn evaluate(&self, word: &[WitnessLetter]) -> GSplitElement {
        let mut acc = self.identity();
        for l in word {
            let g = match l {
                WitnessLetter::Phi => self.gen_phi(),
                WitnessLetter::PhiInv => self.inverse(&self.gen_phi()),
                WitnessLetter::Z1 => self.gen_z(0),
                WitnessLetter::Z1Inv => self.inverse(&self.gen_z(0)),
            };
            acc = self.multiply(&acc, &g).expect("same spec");
        }
        acc
    }
}

/// Letters of witness words over {phi, z_1} and inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessLetter {
    Phi,
    PhiInv,
    Z1,
    Z1Inv,
}

pub fn format_witness_word(word: &[WitnessLetter]) -> String {
    word.iter()
        .map(|l| match l {
            WitnessLetter::Phi => "p",
            WitnessLetter::PhiInv => "P",
            WitnessLetter::Z1 => "z",
            WitnessLetter::Z1Inv => "Z",
        })
        .collect()
}

fn inverse_word(word: &[WitnessLetter]) -> Vec<WitnessLetter> {
    word.iter()
        .rev()
        .map(|l| match l {
            WitnessLetter::Phi => WitnessLetter::PhiInv,
            WitnessLetter::PhiInv => WitnessLetter::Phi,
            WitnessLetter::Z1 => WitnessLetter::Z1Inv,
            WitnessLetter::Z1Inv => WitnessLetter::Z1,
        })
        .collect()
}

/// For each generator z_i, a word in phi and z_1 evaluating to z_i.
///
/// The chain follows the rules of phi: conjugation by phi sends the word
/// for z_i to phi(z_i), and the torsion steps divide out the already
/// reached generator.
pub fn two_generation_witness(spec: &OrdersSpec) -> Result<Vec<Vec<WitnessLetter>>, FgabError> {
    let m = spec.free_count;
    let n = spec.finite_orders.len();
    let total = m + n;
    if total == 0 {
        return Ok(vec![]);
    }
    let mut words: Vec<Vec<WitnessLetter>> = Vec::with_capacity(total);
    words.push(vec![WitnessLetter::Z1]);
    let conj = |w: &[WitnessLetter]| {
        // phi^-1 w phi evaluates to phi(target)
        let mut out = vec![WitnessLetter::PhiInv];
        out.extend_from_slice(w);
        out.push(WitnessLetter::Phi);
        out
    };
    for i in 1..total {
        let prev = &words[i - 1];
        let word = if i < m {
            // z_{i+1} = phi(z_i)
            conj(prev)
        } else if i == m {
            // z_{m+1} = phi(z_m) z_1^{-1}
            let mut w = conj(prev);
            w.extend(inverse_word(&words[0]));
            w
        } else {
            // z_{m+j+1} = phi(z_{m+j}) z_{m+j}^{-1}
            let mut w = conj(prev);
            w.extend(inverse_word(prev));
            w
        };
        words.push(word);
    }
    Ok(words)
}
