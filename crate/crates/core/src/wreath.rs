//! Restricted wreath products B wr Z^k with finitely generated abelian
//! base, the evaluation map from 2-letter words into (Z/m)^2 wr Z^2, and
//! the disjoint-support conjugate procedure.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::snf::FgAbelianGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WreathError {
    #[error("base group or top rank mismatch")]
    SpecMismatch,
    #[error("element does not lie in the base subgroup W")]
    NotInBase,
    #[error("exponent vector has wrong length: expected {expected}, got {got}")]
    BadExponentLength { expected: usize, got: usize },
}

/// Exponent vector of an element of a group in canonical form: free
/// coordinates first, then one coordinate per invariant factor reduced
/// into [0, d_i).
pub type BaseElement = Vec<BigInt>;

fn reduce(spec: &FgAbelianGroup, mut e: BaseElement) -> Result<BaseElement, WreathError> {
    let expected = spec.free_rank + spec.invariant_factors.len();
    if e.len() != expected {
        return Err(WreathError::BadExponentLength { expected, got: e.len() });
    }
    for (i, d) in spec.invariant_factors.iter().enumerate() {
        let j = spec.free_rank + i;
        e[j] = e[j].mod_floor(d);
    }
    Ok(e)
}

/// Order of an exponent vector in the base group; None means infinite.
pub fn element_order(spec: &FgAbelianGroup, e: &BaseElement) -> Option<BigInt> {
    for i in 0..spec.free_rank {
        if !e[i].is_zero() {
            return None;
        }
    }
    let mut order = BigInt::from(1);
    for (i, d) in spec.invariant_factors.iter().enumerate() {
        let v = &e[spec.free_rank + i];
        let g = v.gcd(d);
        order = order.lcm(&(d / g));
    }
    Some(order)
}

/// Element of B wr Z^k: a finitely supported map Z^k -> B plus a top
/// tuple, multiplied by translation of supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub base_spec: FgAbelianGroup,
    pub k: usize,
    pub support: BTreeMap<Vec<i64>, BaseElement>,
    pub top: Vec<i64>,
}

impl WreathElement {
    pub fn identity(base_spec: FgAbelianGroup, k: usize) -> Self {
        WreathElement { base_spec, k, support: BTreeMap::new(), top: vec![0; k] }
    }

    pub fn from_parts(
        base_spec: FgAbelianGroup,
        k: usize,
        entries: impl IntoIterator<Item = (Vec<i64>, BaseElement)>,
        top: Vec<i64>,
    ) -> Result<Self, WreathError> {
        assert_eq!(top.len(), k, "top tuple length must equal k");
        let mut support = BTreeMap::new();
        for (at, e) in entries {
            assert_eq!(at.len(), k, "support tuple length must equal k");
            let e = reduce(&base_spec, e)?;
            if e.iter().all(|x| x.is_zero()) {
                continue;
            }
            support.insert(at, e);
        }
        Ok(WreathElement { base_spec, k, support, top })
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty() && self.top.iter().all(|&t| t == 0)
    }

    pub fn in_base(&self) -> bool {
        self.top.iter().all(|&t| t == 0)
    }

    pub fn inverse(&self) -> WreathElement {
        // (f, c)^-1 = (g, -c) with g(t) = -f(t + c)
        let mut support = BTreeMap::new();
        for (at, e) in &self.support {
            let shifted: Vec<i64> = at.iter().zip(&self.top).map(|(a, c)| a - c).collect();
            let neg: BaseElement = e.iter().map(|x| -x.clone()).collect();
            let neg = reduce(&self.base_spec, neg).expect("length preserved");
            if !neg.iter().all(|x| x.is_zero()) {
                support.insert(shifted, neg);
            }
        }
        WreathElement {
            base_spec: self.base_spec.clone(),
            k: self.k,
            support,
            top: self.top.iter().map(|t| -t).collect(),
        }
    }
}

/// (f1, c1)(f2, c2) = (f1 + c1 |> f2, c1 + c2) where (c |> f)(t) = f(t - c).
pub fn w_multiply(g: &WreathElement, h: &WreathElement) -> Result<WreathElement, WreathError> {
    if g.base_spec != h.base_spec || g.k != h.k {
        return Err(WreathError::SpecMismatch);
    }
    let mut support = g.support.clone();
    for (at, e) in &h.support {
        let moved: Vec<i64> = at.iter().zip(&g.top).map(|(a, c)| a + c).collect();
        let mut sum = support.remove(&moved).unwrap_or_else(|| vec![BigInt::zero(); e.len()]);
        for (s, x) in sum.iter_mut().zip(e) {
            *s += x;
        }
        let reduced = reduce(&g.base_spec, sum)?;
        if !reduced.iter().all(|x| x.is_zero()) {
            support.insert(moved, reduced);
        }
    }
    Ok(WreathElement {
        base_spec: g.base_spec.clone(),
        k: g.k,
        support,
        top: g.top.iter().zip(&h.top).map(|(a, b)| a + b).collect(),
    })
}

/// g^e by repeated multiplication (e may be negative).
pub fn w_power(g: &WreathElement, e: i64) -> WreathElement {
    let base = if e < 0 { g.inverse() } else { g.clone() };
    let mut acc = WreathElement::identity(g.base_spec.clone(), g.k);
    for _ in 0..e.unsigned_abs() {
        acc = w_multiply(&acc, &base).expect("same spec");
    }
    acc
}

/// Letters of 2-letter free-group words fed to the evaluation map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XyLetter {
    X,
    XInv,
    Y,
    YInv,
}

impl XyLetter {
    pub fn from_char(ch: char) -> Option<XyLetter> {
        Some(match ch {
            'x' => XyLetter::X,
            'X' => XyLetter::XInv,
            'y' => XyLetter::Y,
            'Y' => XyLetter::YInv,
            _ => return None,
        })
    }
}

/// Parses "xYxy"-style words (uppercase = inverse).
pub fn parse_xy_word(s: &str) -> Result<Vec<XyLetter>, char> {
    s.chars()
        .filter(|ch| !ch.is_whitespace())
        .map(|ch| XyLetter::from_char(ch).ok_or(ch))
        .collect()
}

/// The base group (Z/m)^2 used by the evaluation map.
pub fn shmelkin_base(m: u64) -> FgAbelianGroup {
    if m <= 1 {
        FgAbelianGroup::trivial()
    } else {
        FgAbelianGroup::new(0, vec![BigInt::from(m), BigInt::from(m)]).unwrap()
    }
}

/// Homomorphic extension of
///   x -> (delta at (0,0) carrying (1,0); top (1,0)),
///   y -> (delta at (0,0) carrying (0,1); top (0,1))
/// into (Z/m)^2 wr Z^2.
pub fn shmelkin_eval(word: &[XyLetter], m: u64) -> WreathElement {
    let spec = shmelkin_base(m);
    let dim = spec.invariant_factors.len();
    let img = |unit: usize, top: [i64; 2]| {
        let mut e = vec![BigInt::zero(); dim];
        if dim > 0 {
            e[unit] = BigInt::from(1);
        }
        WreathElement::from_parts(spec.clone(), 2, [(vec![0, 0], e)], top.to_vec()).unwrap()
    };
    let x = img(0, [1, 0]);
    let y = img(1, [0, 1]);
    let mut acc = WreathElement::identity(spec.clone(), 2);
    for l in word {
        let g = match l {
            XyLetter::X => x.clone(),
            XyLetter::XInv => x.inverse(),
            XyLetter::Y => y.clone(),
            XyLetter::YInv => y.inverse(),
        };
        acc = w_multiply(&acc, &g).expect("same spec");
    }
    acc
}

/// t conjugates of a base element g by the translations j*(D+1)*e_1,
/// j = 0..t-1, where D is the support diameter in the first coordinate;
/// the supports are pairwise disjoint by construction.
pub fn disjoint_conjugates(g: &WreathElement, t: usize) -> Result<Vec<WreathElement>, WreathError> {
    if !g.in_base() {
        return Err(WreathError::NotInBase);
    }
    let diameter = match (
        g.support.keys().map(|at| at[0]).min(),
        g.support.keys().map(|at| at[0]).max(),
    ) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    let step = diameter + 1;
    let mut out = Vec::with_capacity(t);
    for j in 0..t as i64 {
        let mut top = vec![0i64; g.k];
        top[0] = j * step;
        let u = WreathElement {
            base_spec: g.base_spec.clone(),
            k: g.k,
            support: BTreeMap::new(),
            top,
        };
        let conj = w_multiply(&w_multiply(&u.inverse(), g)?, &u)?;
        out.push(conj);
    }
    Ok(out)
}

/// True iff the elements lie in the base, have pairwise disjoint
/// supports, and each generates a cyclic group of order exactly n; by
/// disjointness the span is then the direct power (Z/n)^t.
pub fn verify_direct_power(elems: &[WreathElement], n: u64) -> Result<bool, WreathError> {
    let target = BigInt::from(n);
    let mut seen: Vec<&Vec<i64>> = Vec::new();
    for g in elems {
        if !g.in_base() {
            return Err(WreathError::NotInBase);
        }
        for at in g.support.keys() {
            if seen.contains(&at) {
                return Ok(false);
            }
            seen.push(at);
        }
        let order = g
            .support
            .values()
            .map(|e| element_order(&g.base_spec, e))
            .try_fold(BigInt::from(1), |acc, o| o.map(|o| acc.lcm(&o)));
        match order {
            Some(o) if o == target => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}
