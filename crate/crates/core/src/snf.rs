//! Integer matrices, Smith normal form with unimodular transforms, and
//! finitely generated abelian groups in canonical invariant-factor form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("entry count {found} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, found: usize },
    #[error("invariant factors must form a divisibility chain with factors >= 2")]
    BadInvariantFactors,
}

/// Dense row-major integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, SnfError> {
        if entries.len() != rows * cols {
            return Err(SnfError::BadShape { rows, cols, found: entries.len() });
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect()).unwrap()
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.at(k, j);
                    *out.at_mut(i, j) += t;
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let idx = |r: usize, c: usize| r * n + c;
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if m[idx(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[idx(r, k)].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(idx(k, c), idx(r, c));
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[idx(i, j)] * &m[idx(k, k)] - &m[idx(i, k)] * &m[idx(k, j)];
                    m[idx(i, j)] = &t / &prev;
                }
            }
            prev = m[idx(k, k)].clone();
        }
        sign * m[idx(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let i = a * self.cols + c;
            let j = b * self.cols + c;
            self.entries.swap(i, j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let i = r * self.cols + a;
            let j = r * self.cols + b;
            self.entries.swap(i, j);
        }
    }

    /// row a += q * row b
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = q * self.at(b, c);
            *self.at_mut(a, c) += t;
        }
    }

    /// col a += q * col b
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = q * self.at(r, b);
            *self.at_mut(r, a) += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for c in 0..self.cols {
            let t = -self.at(a, c).clone();
            *self.at_mut(a, c) = t;
        }
    }
}

/// Smith normal form: returns (S, U, V) with U*M*V = S, U and V
/// unimodular, S diagonal with s_1 | s_2 | ... and s_i >= 0.
///
/// Pivot selection picks the smallest nonzero entry of the working block,
/// which keeps intermediate entries from blowing up on typical inputs.
pub fn smith_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        loop {
            // smallest nonzero pivot in the remaining block
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..s.rows {
                for c in t..s.cols {
                    if !s.at(r, c).is_zero()
                        && pivot.map_or(true, |(pr, pc)| s.at(r, c).abs() < s.at(pr, pc).abs())
                    {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                // block is zero; done with the whole diagonalization
                break;
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut dirty = false;
            for r in t + 1..s.rows {
                if !s.at(r, t).is_zero() {
                    let q = -(s.at(r, t) / s.at(t, t));
                    s.add_row(r, t, &q);
                    u.add_row(r, t, &q);
                    if !s.at(r, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..s.cols {
                if !s.at(t, c).is_zero() {
                    let q = -(s.at(t, c) / s.at(t, t));
                    s.add_col(c, t, &q);
                    v.add_col(c, t, &q);
                    if !s.at(t, c).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue; // remainders became new, smaller pivot candidates
            }
            // row and column t are clear; enforce pivot | rest of block
            let mut fixed = true;
            'scan: for r in t + 1..s.rows {
                for c in t + 1..s.cols {
                    if !(s.at(r, c) % s.at(t, t)).is_zero() {
                        // fold row r into row t so the gcd surfaces
                        s.add_row(t, r, &BigInt::one());
                        u.add_row(t, r, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s.at(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Canonical form of a finitely generated abelian group: free rank plus
/// an invariant-factor chain d_1 | d_2 | ... with every d_i >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, SnfError> {
        let two = BigInt::from(2);
        for d in &invariant_factors {
            if d < &two {
                return Err(SnfError::BadInvariantFactors);
            }
        }
        for w in invariant_factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(SnfError::BadInvariantFactors);
            }
        }
        Ok(FgAbelianGroup { free_rank, invariant_factors })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, invariant_factors: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, invariant_factors: vec![] }
    }

    pub fn cyclic(order: u64) -> Self {
        if order <= 1 {
            Self::trivial()
        } else {
            FgAbelianGroup { free_rank: 0, invariant_factors: vec![BigInt::from(order)] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the torsion part (the whole order when free_rank = 0).
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Exponent of the torsion part: the largest invariant factor.
    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Direct sum, renormalized to canonical form.
    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut factors: Vec<BigInt> = self
            .invariant_factors
            .iter()
            .chain(&other.invariant_factors)
            .cloned()
            .collect();
        canonicalize_factors(&mut factors);
        FgAbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            invariant_factors: factors,
        }
    }
}

/// Rewrites a multiset of cyclic orders into an invariant-factor chain
/// (repeated pairwise gcd/lcm exchange until the chain stabilizes).
fn canonicalize_factors(factors: &mut Vec<BigInt>) {
    factors.retain(|d| !d.is_one());
    loop {
        factors.sort();
        let mut changed = false;
        for i in 0..factors.len().saturating_sub(1) {
            let g = factors[i].gcd(&factors[i + 1]);
            if g != factors[i] {
                let l = factors[i].lcm(&factors[i + 1]);
                factors[i] = g;
                factors[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    factors.retain(|d| !d.is_one());
}

/// Cokernel of a presentation matrix (columns are relators): the group
/// Z^rows / column-span(M) in canonical form.
pub fn decompose(m: &IntegerMatrix) -> FgAbelianGroup {
    let (s, _, _) = smith_normal_form(m);
    let n = m.rows.min(m.cols);
    let mut factors = Vec::new();
    let mut rank = m.rows;
    for i in 0..n {
        let d = s.at(i, i);
        if d.is_zero() {
            continue;
        }
        rank -= 1;
        if !d.is_one() {
            factors.push(d.clone());
        }
    }
    FgAbelianGroup { free_rank: rank, invariant_factors: factors }
}

/// The verbal subgroup G^m ([G,G]G^m is G^m for abelian G) together with
/// the quotient G/G^m, both in canonical form.
pub fn verbal_subgroup_m(g: &FgAbelianGroup, m: u64) -> (FgAbelianGroup, FgAbelianGroup) {
    assert!(m >= 1);
    let bm = BigInt::from(m);
    let mut sub = Vec::new();
    let mut quot = Vec::new();
    for d in &g.invariant_factors {
        let gcd = d.gcd(&bm);
        let piece = d / &gcd;
        if !piece.is_one() {
            sub.push(piece);
        }
        if !gcd.is_one() {
            quot.push(gcd);
        }
    }
    // each free generator contributes Z to the subgroup and Z/m to the quotient
    for _ in 0..g.free_rank {
        if !bm.is_one() {
            quot.push(bm.clone());
        }
    }
    canonicalize_factors(&mut sub);
    canonicalize_factors(&mut quot);
    (
        FgAbelianGroup { free_rank: g.free_rank, invariant_factors: sub },
        FgAbelianGroup { free_rank: 0, invariant_factors: quot },
    )
}

/// Splits G as T + K with T the full torsion part and K free.
pub fn torsion_split(g: &FgAbelianGroup) -> (FgAbelianGroup, FgAbelianGroup) {
    (
        FgAbelianGroup { free_rank: 0, invariant_factors: g.invariant_factors.clone() },
        FgAbelianGroup::free(g.free_rank),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(m: &IntegerMatrix) {
        let (s, u, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), s, "U*M*V != S");
        assert_eq!(u.determinant().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(v.determinant().abs(), BigInt::one(), "V not unimodular");
        let n = m.rows().min(m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.at(i, j).is_zero(), "S not diagonal");
                }
            }
        }
        for i in 0..n {
            assert!(!s.at(i, i).is_negative());
            if i + 1 < n && !s.at(i + 1, i + 1).is_zero() {
                assert!(
                    !s.at(i, i).is_zero() && (s.at(i + 1, i + 1) % s.at(i, i)).is_zero(),
                    "divisibility chain broken: {:?}",
                    (0..n).map(|k| s.at(k, k).clone()).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let (s, _, _) = smith_normal_form(&m);
        assert_eq!(s.at(0, 0), &BigInt::one());
        assert_eq!(s.at(1, 1), &BigInt::from(6));
        check_snf(&m);
    }

    #[test]
    fn snf_identity() {
        let m = IntegerMatrix::identity(3);
        let (s, _, _) = smith_normal_form(&m);
        assert_eq!(s, IntegerMatrix::identity(3));
    }

    #[test]
    fn snf_4622() {
        let m = IntegerMatrix::from_i64(2, 2, &[4, 6, 2, 2]);
        let (s, _, _) = smith_normal_form(&m);
        assert_eq!(s.at(0, 0), &BigInt::from(2));
        assert_eq!(s.at(1, 1), &BigInt::from(2));
        check_snf(&m);
    }

    #[test]
    fn decompose_examples() {
        let no_relators = IntegerMatrix::zero(2, 0);
        assert_eq!(decompose(&no_relators), FgAbelianGroup::free(2));

        let z6 = IntegerMatrix::from_i64(1, 1, &[6]);
        assert_eq!(decompose(&z6), FgAbelianGroup::cyclic(6));

        let m = IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 4]);
        assert_eq!(
            decompose(&m),
            FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]).unwrap()
        );
    }

    #[test]
    fn verbal_examples() {
        let (sub, quot) = verbal_subgroup_m(&FgAbelianGroup::free(1), 3);
        assert_eq!(sub, FgAbelianGroup::free(1));
        assert_eq!(quot, FgAbelianGroup::cyclic(3));

        let (sub, quot) = verbal_subgroup_m(&FgAbelianGroup::cyclic(6), 2);
        assert_eq!(sub, FgAbelianGroup::cyclic(3));
        assert_eq!(quot, FgAbelianGroup::cyclic(2));

        let (sub, quot) = verbal_subgroup_m(&FgAbelianGroup::trivial(), 5);
        assert!(sub.is_trivial() && quot.is_trivial());
    }

    #[test]
    fn verbal_order_identity() {
        // |G| = |G^m| * |G/G^m| for finite G
        let g = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(12)]).unwrap();
        for m in 1..=12u64 {
            let (sub, quot) = verbal_subgroup_m(&g, m);
            assert_eq!(g.torsion_order(), sub.torsion_order() * quot.torsion_order());
        }
    }

    #[test]
    fn torsion_split_examples() {
        let g = FgAbelianGroup::new(2, vec![BigInt::from(4)]).unwrap();
        let (t, k) = torsion_split(&g);
        assert_eq!(t, FgAbelianGroup::cyclic(4));
        assert_eq!(k, FgAbelianGroup::free(2));
        assert_eq!(t.direct_sum(&k), g);

        let g2 = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(6)]).unwrap();
        let (t2, k2) = torsion_split(&g2);
        assert_eq!(t2, g2);
        assert!(k2.is_trivial());

        let g3 = FgAbelianGroup::free(3);
        let (t3, k3) = torsion_split(&g3);
        assert!(t3.is_trivial());
        assert_eq!(k3, g3);
    }

    /// gcd of all k x k minors (the k-th determinantal divisor).
    fn determinantal_divisor(m: &IntegerMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&r| r > first) {
                        let mut c = vec![first];
                        c.append(&mut rest);
                        out.push(c);
                    }
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(m.rows(), k) {
            for cs in combos(m.cols(), k) {
                let entries: Vec<BigInt> = rs
                    .iter()
                    .flat_map(|&r| cs.iter().map(move |&c| m.at(r, c).clone()))
                    .collect();
                let minor = IntegerMatrix::new(k, k, entries).unwrap().determinant();
                g = g.gcd(&minor);
            }
        }
        g
    }

    #[test]
    fn snf_matches_determinantal_divisors() {
        let cases = [
            IntegerMatrix::from_i64(2, 2, &[2, 0, 0, 3]),
            IntegerMatrix::from_i64(2, 3, &[6, 4, 2, 2, 8, 10]),
            IntegerMatrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]),
            IntegerMatrix::from_i64(3, 2, &[0, 0, 4, 8, 12, 6]),
        ];
        for m in &cases {
            let (s, _, _) = smith_normal_form(m);
            let mut product = BigInt::one();
            for k in 1..=m.rows().min(m.cols()) {
                product *= s.at(k - 1, k - 1);
                assert_eq!(product, determinantal_divisor(m, k), "k={k} for {m:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn snf_contract_random(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-50i64..50, 16),
        ) {
            let entries: Vec<i64> = seed.into_iter().take(rows * cols).collect();
            if entries.len() == rows * cols {
                check_snf(&IntegerMatrix::from_i64(rows, cols, &entries));
            }
        }

        #[test]
        fn canonical_direct_sum_is_canonical(
            xs in proptest::collection::vec(2u64..60, 0..4),
            ys in proptest::collection::vec(2u64..60, 0..4),
        ) {
            let mut a = xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
            let mut b = ys.iter().map(|&y| BigInt::from(y)).collect::<Vec<_>>();
            canonicalize_factors(&mut a);
            canonicalize_factors(&mut b);
            let ga = FgAbelianGroup::new(0, a).unwrap();
            let gb = FgAbelianGroup::new(0, b).unwrap();
            let sum = ga.direct_sum(&gb);
            prop_assert!(FgAbelianGroup::new(0, sum.invariant_factors.clone()).is_ok());
            prop_assert_eq!(sum.torsion_order(), ga.torsion_order() * gb.torsion_order());
        }
    }
}
