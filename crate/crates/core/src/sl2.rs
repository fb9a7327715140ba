//! Representation-ring arithmetic for nilpotent operators.
//!
//! A nilpotent endomorphism over a field of characteristic zero is determined
//! up to conjugacy by its Jordan type, the multiset of its Jordan block sizes.
//! Through Jacobson–Morozov the same data describes a finite-dimensional
//! `sl2`-representation, and every functorial construction applied to
//! monodromy logarithms (direct sums, tensor products, symmetric and exterior
//! powers) is computed here on that level:
//!
//! - tensor products by the Clebsch–Gordan rule on blocks,
//! - symmetric and exterior powers by Newton/Adams recursions on weight
//!   characters followed by a top-down decomposition into irreducibles.
//!
//! Nothing in this module builds a matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Jordan type of a nilpotent operator: block size `h >= 1` mapped to its
/// multiplicity. The empty type is the zero vector space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanType {
    blocks: BTreeMap<usize, usize>,
}

impl JordanType {
    pub const EMPTY: JordanType = JordanType {
        blocks: BTreeMap::new(),
    };

    /// The zero space.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `dim` copies of the one-dimensional trivial block, i.e. `N = 0`.
    pub fn trivial(dim: usize) -> Self {
        Self::with_multiplicity(1, dim)
    }

    /// `mult` blocks of size `h`.
    ///
    /// Panics if `h == 0` and `mult > 0`.
    pub fn with_multiplicity(h: usize, mult: usize) -> Self {
        let mut out = Self::zero();
        out.push(h, mult);
        out
    }

    /// Builds a Jordan type from a list of block sizes (in any order).
    ///
    /// Panics on a block of size zero; use [`JordanType::from_str`] for
    /// untrusted input.
    pub fn from_blocks<I: IntoIterator<Item = usize>>(blocks: I) -> Self {
        let mut out = Self::zero();
        for h in blocks {
            out.push(h, 1);
        }
        out
    }

    fn push(&mut self, h: usize, mult: usize) {
        if mult == 0 {
            return;
        }
        assert!(h >= 1, "Jordan blocks have size at least 1");
        *self.blocks.entry(h).or_insert(0) += mult;
    }

    /// `(size, multiplicity)` pairs, largest block first.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().rev().map(|(&h, &m)| (h, m))
    }

    /// All block sizes, largest first, with repetition.
    pub fn block_list(&self) -> Vec<usize> {
        self.blocks()
            .flat_map(|(h, m)| std::iter::repeat_n(h, m))
            .collect()
    }

    pub fn multiplicity(&self, h: usize) -> usize {
        self.blocks.get(&h).copied().unwrap_or(0)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.values().sum()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|(h, m)| h * m).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of nilpotency: the largest `k` with `N^k != 0`, and `0` for the
    /// zero operator (including on the zero space).
    pub fn nilp(&self) -> usize {
        self.blocks.keys().next_back().map_or(0, |h| h - 1)
    }

    /// Rank of the operator, `sum (h - 1)` over blocks.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|(h, m)| (h - 1) * m).sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&h, &m) in &other.blocks {
            out.push(h, m);
        }
        out
    }

    /// Direct sum of `copies` copies of `self`.
    pub fn repeated(&self, copies: usize) -> Self {
        let mut out = Self::zero();
        for (&h, &m) in &self.blocks {
            out.push(h, m * copies);
        }
        out
    }

    /// Multiset difference `self - other`, or `None` when some block of
    /// `other` is missing from `self`. Returns the first missing block size in
    /// the error position.
    pub fn checked_sub(&self, other: &Self) -> std::result::Result<Self, usize> {
        let mut out = self.clone();
        for (&h, &m) in &other.blocks {
            match out.blocks.get_mut(&h) {
                Some(have) if *have >= m => {
                    *have -= m;
                    if *have == 0 {
                        out.blocks.remove(&h);
                    }
                }
                _ => return Err(h),
            }
        }
        Ok(out)
    }

    /// Jordan type of `N1 ⊗ 1 + 1 ⊗ N2`, by Clebsch–Gordan:
    /// `[a] ⊗ [b] = ⊕_{k < min(a,b)} [a + b - 1 - 2k]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, &ma) in &self.blocks {
            for (&b, &mb) in &other.blocks {
                let mult = ma * mb;
                for k in 0..a.min(b) {
                    out.push(a + b - 1 - 2 * k, mult);
                }
            }
        }
        out
    }

    /// Jordan type of the operator induced on `Sym^k`.
    pub fn sym_power(&self, k: usize) -> Self {
        let ch = WeightCharacter::of(self);
        ch.symmetric_power(k)
            .decompose()
            .expect("symmetric powers of characters are effective")
    }

    /// Jordan type of the operator induced on `Λ^k`.
    ///
    /// Fails when `k` exceeds the dimension, where the exterior power is the
    /// zero space and a request for it usually signals a bookkeeping error.
    pub fn ext_power(&self, k: usize) -> Result<Self> {
        let dim = self.total_dim();
        if k > dim {
            return Err(Error::ExteriorDegree { k, dim });
        }
        let ch = WeightCharacter::of(self);
        Ok(ch
            .exterior_power(k)
            .decompose()
            .expect("exterior powers of characters are effective"))
    }

    /// Dimensions of the graded pieces of the monodromy weight filtration
    /// centred at `center`. A block of size `h` contributes one dimension to
    /// each of `center - h + 1, center - h + 3, ..., center + h - 1`.
    pub fn weight_gradeds(&self, center: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&h, &m) in &self.blocks {
            let top = h as i64 - 1;
            let mut w = -top;
            while w <= top {
                *out.entry(center + w).or_insert(0) += m;
                w += 2;
            }
        }
        out
    }

    /// Dimension of `ker N` in each weight: block `h` contributes its lowest
    /// weight vector, of weight `center - h + 1`.
    pub fn kernel_weights(&self, center: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&h, &m) in &self.blocks {
            *out.entry(center - (h as i64 - 1)).or_insert(0) += m;
        }
        out
    }
}

impl Add for &JordanType {
    type Output = JordanType;

    fn add(self, rhs: &JordanType) -> JordanType {
        self.direct_sum(rhs)
    }
}

impl fmt::Display for JordanType {
    /// Compact form `{3,2x4,1x19}`; `{}` is the zero space.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", format_blocks(self))
    }
}

/// Block list in the fixture syntax, e.g. `3,2x4,1x19` (empty for zero).
pub fn format_blocks(j: &JordanType) -> String {
    j.blocks()
        .map(|(h, m)| {
            if m == 1 {
                h.to_string()
            } else {
                format!("{h}x{m}")
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

impl FromStr for JordanType {
    type Err = String;

    /// Accepts comma or whitespace separated block sizes with an optional
    /// `x<mult>` (or `×<mult>`) repetition suffix and optional braces:
    /// `2,1x20`, `{3, 1×19}`, `` (zero space).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = JordanType::zero();
        for tok in body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (h, m) = match tok.split_once(['x', '×']) {
                Some((h, m)) => (h, m),
                None => (tok, "1"),
            };
            let h: usize = h
                .trim()
                .parse()
                .map_err(|_| format!("bad block size `{tok}`"))?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| format!("bad multiplicity in `{tok}`"))?;
            if h == 0 {
                return Err(format!("block size must be positive in `{tok}`"));
            }
            out.push(h, m);
        }
        Ok(out)
    }
}

/// Weight character of an `sl2`-representation: a Laurent polynomial in `q`
/// stored as weight → multiplicity. Intermediate values of the Newton
/// recursions may be negative, so coefficients are signed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightCharacter {
    coeffs: BTreeMap<i64, i64>,
}

impl WeightCharacter {
    /// Character of the trivial one-dimensional representation.
    pub fn one() -> Self {
        let mut c = Self::default();
        c.add_term(0, 1);
        c
    }

    /// Block `h` contributes `q^{h-1} + q^{h-3} + ... + q^{-(h-1)}`.
    pub fn of(j: &JordanType) -> Self {
        let mut c = Self::default();
        for (h, m) in j.blocks() {
            let top = h as i64 - 1;
            let mut w = -top;
            while w <= top {
                c.add_term(w, m as i64);
                w += 2;
            }
        }
        c
    }

    fn add_term(&mut self, w: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&w);
        }
    }

    pub fn coeff(&self, w: i64) -> i64 {
        self.coeffs.get(&w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&w, &c)| (w, c))
    }

    pub fn dim(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().all(|(&w, &c)| self.coeff(-w) == c)
    }

    /// Adams operation `ψ^i`: substitute `q -> q^i`.
    pub fn adams(&self, i: i64) -> Self {
        let mut c = Self::default();
        for (&w, &m) in &self.coeffs {
            c.add_term(w * i, m);
        }
        c
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.clone();
        for (&w, &m) in &other.coeffs {
            c.add_term(w, m);
        }
        c
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut c = Self::default();
        for (&w, &m) in &self.coeffs {
            c.add_term(w, m * s);
        }
        c
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = Self::default();
        for (&w1, &m1) in &self.coeffs {
            for (&w2, &m2) in &other.coeffs {
                c.add_term(w1 + w2, m1 * m2);
            }
        }
        c
    }

    fn div_exact(&self, d: i64) -> Self {
        let mut c = Self::default();
        for (&w, &m) in &self.coeffs {
            debug_assert_eq!(m % d, 0, "Newton recursion must divide exactly");
            c.add_term(w, m / d);
        }
        c
    }

    /// `k·ch(Sym^k V) = Σ_{i=1..k} ψ^i(ch V)·ch(Sym^{k-i} V)`.
    pub fn symmetric_power(&self, k: usize) -> Self {
        self.newton(k, false)
    }

    /// `k·ch(Λ^k V) = Σ_{i=1..k} (-1)^{i-1} ψ^i(ch V)·ch(Λ^{k-i} V)`.
    pub fn exterior_power(&self, k: usize) -> Self {
        self.newton(k, true)
    }

    fn newton(&self, k: usize, alternating: bool) -> Self {
        let adams: Vec<Self> = (1..=k as i64).map(|i| self.adams(i)).collect();
        let mut powers = vec![Self::one()];
        for j in 1..=k {
            let mut acc = Self::default();
            for i in 1..=j {
                let sign = if alternating && i % 2 == 0 { -1 } else { 1 };
                acc = acc.add(&adams[i - 1].mul(&powers[j - i]).scale(sign));
            }
            powers.push(acc.div_exact(j as i64));
        }
        powers.pop().expect("at least the constant term")
    }

    /// Top-down decomposition into irreducible characters. Fails when the
    /// character is not palindromic or the greedy peel-off would need a
    /// negative multiplicity.
    pub fn decompose(&self) -> Result<JordanType> {
        if !self.is_palindromic() {
            return Err(Error::NotACharacter);
        }
        let mut rest = self.clone();
        let mut out = JordanType::zero();
        while let Some((&top, &mult)) = rest.coeffs.iter().next_back() {
            if mult < 0 || top < 0 {
                return Err(Error::NotACharacter);
            }
            let h = top as usize + 1;
            out.push(h, mult as usize);
            let mut w = -top;
            while w <= top {
                rest.add_term(w, -mult);
                w += 2;
            }
        }
        Ok(out)
    }
}
