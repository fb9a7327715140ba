//! The subalgebra generated by `H^2` of an irreducible symplectic `2n`-fold:
//! `Sym^* H^2 / ⟨α^{n+1} : q(α) = 0⟩`, computed degree by degree as an exact
//! rank over the rationals.
//!
//! The degree-`k` piece of the ideal is spanned by `α^{n+1}·β` with `α`
//! isotropic and `β` a monomial of degree `k - n - 1`. Isotropic vectors are
//! Zariski dense on the quadric, so rational points sampled by projecting
//! from one known isotropic point span the same space once the rank stops
//! growing.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Span};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Beauville–Bogomolov lattice: a non-degenerate symmetric rational form on
/// `H^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBLattice {
    gram: Vec<Vec<BigRational>>,
    // Positive integer multiple of `gram`; same isotropic vectors.
    integral: Vec<Vec<BigInt>>,
}

impl BBLattice {
    pub fn new(gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let b = gram.len();
        if b == 0 {
            return Err(Error::InvalidLattice("empty Gram matrix".into()));
        }
        if gram.iter().any(|r| r.len() != b) {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        for i in 0..b {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let denom = gram
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let integral: Vec<Vec<BigInt>> = gram
            .iter()
            .map(|r| r.iter().map(|x| (x * &denom).to_integer()).collect())
            .collect();
        let (_, _, zero) = linalg::signature(&integral);
        if zero > 0 {
            return Err(Error::InvalidLattice("Gram matrix is degenerate".into()));
        }
        Ok(Self { gram, integral })
    }

    pub fn from_integers(gram: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            gram.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// `U ⊕ ⟨-2⟩^{b2-2}`, the hyperbolic plane plus a negative diagonal.
    pub fn hyperbolic_plus_diagonal(b2: usize) -> Result<Self> {
        if b2 < 2 {
            return Err(Error::InvalidLattice("need b2 >= 2 for a hyperbolic plane".into()));
        }
        let mut g = vec![vec![0i64; b2]; b2];
        g[0][1] = 1;
        g[1][0] = 1;
        for (i, row) in g.iter_mut().enumerate().skip(2) {
            row[i] = -2;
        }
        Self::from_integers(&g)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = linalg::signature(&self.integral);
        (p, n)
    }

    fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, row) in self.integral.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, g) in row.iter().enumerate() {
                if !g.is_zero() && !y[j].is_zero() {
                    acc += &x[i] * g * &y[j];
                }
            }
        }
        acc
    }

    /// Smallest-height nonzero integer isotropic vector, searching entries in
    /// `[-4, 4]`.
    fn find_isotropic(&self) -> Result<Vec<BigInt>> {
        let (pos, neg) = self.signature();
        if pos == 0 || neg == 0 {
            return Err(Error::NoIsotropicVectors("the form is definite".into()));
        }
        let b = self.rank();
        for bound in 1..=4i64 {
            let mut x = vec![-bound; b];
            loop {
                if x.iter().any(|v| v.abs() == bound) {
                    let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                    if self.bilinear(&big, &big).is_zero() {
                        return Ok(big);
                    }
                }
                // Odometer increment.
                let mut i = 0;
                while i < b && x[i] == bound {
                    x[i] = -bound;
                    i += 1;
                }
                if i == b {
                    break;
                }
                x[i] += 1;
            }
        }
        Err(Error::NoIsotropicVectors(
            "no integral isotropic vector with entries in [-4, 4]".into(),
        ))
    }
}

impl FromStr for BBLattice {
    type Err = Error;

    /// One row per line, entries separated by whitespace or commas; entries
    /// are integers or fractions `p/q`. `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let mut gram = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<BigRational>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("bad matrix entry `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            gram.push(row);
        }
        Self::new(gram)
    }
}

/// Random rational points of the isotropic quadric, obtained by intersecting
/// random lines through a fixed isotropic point `p` with the quadric.
struct IsotropicSampler<'a> {
    lattice: &'a BBLattice,
    base: Vec<BigInt>,
    rng: ChaCha8Rng,
}

impl<'a> IsotropicSampler<'a> {
    fn new(lattice: &'a BBLattice, seed: u64) -> Result<Self> {
        Ok(Self {
            lattice,
            base: lattice.find_isotropic()?,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    fn sample(&mut self) -> Vec<BigInt> {
        loop {
            let v: Vec<BigInt> = (0..self.lattice.rank())
                .map(|_| BigInt::from(self.rng.gen_range(-6i64..=6)))
                .collect();
            // q(s·p + t·v) = 2st·B(p,v) + t²·q(v); the second root is
            // s = q(v), t = -2B(p,v).
            let qv = self.lattice.bilinear(&v, &v);
            let bpv = self.lattice.bilinear(&self.base, &v);
            let x: Vec<BigInt> = self
                .base
                .iter()
                .zip(&v)
                .map(|(p, vi)| &qv * p - BigInt::from(2) * &bpv * vi)
                .collect();
            if x.iter().all(Zero::is_zero) {
                continue;
            }
            let g = x.iter().fold(BigInt::zero(), |g, xi| g.gcd(xi));
            debug_assert!(self.lattice.bilinear(&x, &x).is_zero());
            return x.into_iter().map(|xi| xi / &g).collect();
        }
    }
}

/// Exponent vectors of degree `d` in `b` variables, in a fixed order.
fn monomials(b: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(b: usize, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == b {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(b, i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if b == 0 {
        return out;
    }
    go(b, 0, d, &mut vec![0; b], &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim Sym^k` of a `b`-dimensional space.
pub fn sym_dim(b: usize, k: usize) -> usize {
    if b == 0 {
        return usize::from(k == 0);
    }
    binomial(b + k - 1, k)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Coefficients of `α^e` on the monomials of degree `e`.
fn power_coefficients(alpha: &[BigInt], exps: &[Vec<usize>], e: usize) -> Vec<BigInt> {
    let top = factorial(e);
    exps.iter()
        .map(|m| {
            let mut c = top.clone();
            for (a, &k) in alpha.iter().zip(m) {
                c /= factorial(k);
                c *= num_traits::pow(a.clone(), k);
            }
            c
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealDim {
    pub degree: usize,
    /// `dim` of the degree-`k` piece of the ideal.
    pub dim: usize,
    /// `dim Sym^k H^2`.
    pub ambient: usize,
    /// Rank stayed constant over the stabilization window (or is saturated).
    pub stabilized: bool,
    pub samples_used: usize,
}

/// Default sample budget `8·dim Sym^k H^2`.
pub fn default_samples(b2: usize, k: usize) -> usize {
    8 * sym_dim(b2, k)
}

/// Dimension of the degree-`k` piece of `⟨α^{n+1} : q(α) = 0⟩ ⊂ Sym^k H^2`.
///
/// Isotropic samples are added until the rank has not grown for
/// `⌈samples/4⌉` consecutive samples, or until it fills `Sym^k`. Running out
/// of the budget first is [`Error::NotStabilized`].
pub fn ideal_dim(lattice: &BBLattice, n: usize, k: usize, samples: usize, seed: u64) -> Result<IdealDim> {
    let b = lattice.rank();
    let ambient = sym_dim(b, k);
    if k < n + 1 {
        return Ok(IdealDim {
            degree: k,
            dim: 0,
            ambient,
            stabilized: true,
            samples_used: 0,
        });
    }
    let mut sampler = IsotropicSampler::new(lattice, seed)?;
    let target = monomials(b, k);
    let index: HashMap<&[usize], usize> = target
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let gen_exps = monomials(b, n + 1);
    let multipliers = monomials(b, k - n - 1);

    let window = samples.div_ceil(4).max(1);
    let mut basis = Span::new(ambient);
    let mut last_growth = 0;
    let mut used = 0;
    while used < samples {
        let alpha = sampler.sample();
        used += 1;
        let coeffs = power_coefficients(&alpha, &gen_exps, n + 1);
        for beta in &multipliers {
            let mut row = vec![BigInt::zero(); ambient];
            for (e, c) in gen_exps.iter().zip(&coeffs) {
                if c.is_zero() {
                    continue;
                }
                let m: Vec<usize> = e.iter().zip(beta).map(|(x, y)| x + y).collect();
                row[index[m.as_slice()]] += c;
            }
            if basis.insert(row) {
                last_growth = used;
            }
        }
        if basis.is_full() || used - last_growth >= window {
            return Ok(IdealDim {
                degree: k,
                dim: basis.rank(),
                ambient,
                stabilized: true,
                samples_used: used,
            });
        }
    }
    Err(Error::NotStabilized {
        degree: k,
        samples,
        rank: basis.rank(),
    })
}

/// `dim SH^{2k} = dim Sym^k H^2 - dim(ideal)_k` for `k = 0..=k_max`, with the
/// default sample budget in every degree.
pub fn sh_dims(lattice: &BBLattice, n: usize, k_max: usize, seed: u64) -> Result<BTreeMap<usize, usize>> {
    (0..=k_max)
        .map(|k| {
            let ideal = ideal_dim(lattice, n, k, default_samples(lattice.rank(), k), seed)?;
            Ok((k, ideal.ambient - ideal.dim))
        })
        .collect()
}
