//! Independent oracles for the integration tests. Nothing here goes through
//! weight characters or the crate's linear algebra: Jordan types come from
//! ranks of powers of explicit nilpotent matrices, Betti numbers from
//! generating functions and monomial counts.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use monodromy::JordanType;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// A nilpotent operator on `Q^dim` in a basis of weight vectors; `image[i]`
/// is `N e_i` as a sparse combination. `N` lowers weights by exactly 2.
#[derive(Clone, Debug)]
pub struct Operator {
    pub weights: Vec<i64>,
    pub image: Vec<Vec<(usize, i64)>>,
}

impl Operator {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Direct sum of shift operators `e_0 -> e_1 -> ... -> e_{h-1} -> 0`.
    pub fn from_jordan(j: &JordanType) -> Self {
        let mut weights = Vec::new();
        let mut image = Vec::new();
        for h in j.block_list() {
            let base = weights.len();
            for t in 0..h {
                weights.push(h as i64 - 1 - 2 * t as i64);
                image.push(if t + 1 < h { vec![(base + t + 1, 1)] } else { vec![] });
            }
        }
        Self { weights, image }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let shift = self.dim();
        let mut out = self.clone();
        out.weights.extend(&other.weights);
        out.image
            .extend(other.image.iter().map(|v| v.iter().map(|&(y, c)| (y + shift, c)).collect()));
        out
    }

    /// `N ⊗ 1 + 1 ⊗ N`.
    pub fn tensor(&self, other: &Self) -> Self {
        let m = other.dim();
        let mut weights = Vec::new();
        let mut image = Vec::new();
        for a in 0..self.dim() {
            for b in 0..m {
                weights.push(self.weights[a] + other.weights[b]);
                let mut v: Vec<(usize, i64)> = self.image[a].iter().map(|&(x, c)| (x * m + b, c)).collect();
                v.extend(other.image[b].iter().map(|&(y, c)| (a * m + y, c)));
                image.push(v);
            }
        }
        Self { weights, image }
    }

    /// Induced derivation on `Sym^k`, basis of nondecreasing index tuples.
    pub fn sym(&self, k: usize) -> Self {
        self.induced(k, false)
    }

    /// Induced derivation on `Λ^k`, basis of increasing index tuples.
    pub fn ext(&self, k: usize) -> Self {
        self.induced(k, true)
    }

    fn induced(&self, k: usize, alternating: bool) -> Self {
        let tuples = index_tuples(self.dim(), k, alternating);
        let index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut weights = Vec::new();
        let mut image = Vec::new();
        for t in &tuples {
            weights.push(t.iter().map(|&i| self.weights[i]).sum());
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for slot in 0..k {
                for &(target, c) in &self.image[t[slot]] {
                    let mut u = t.clone();
                    u[slot] = target;
                    let sign = if alternating {
                        match sort_with_sign(&mut u) {
                            Some(s) => s,
                            None => continue,
                        }
                    } else {
                        u.sort_unstable();
                        1
                    };
                    *acc.entry(index[&u]).or_insert(0) += sign * c;
                }
            }
            image.push(acc.into_iter().filter(|&(_, c)| c != 0).collect());
        }
        Self { weights, image }
    }

    /// `N^j e_i` for every basis vector.
    fn power_images(&self, j: usize) -> Vec<BTreeMap<usize, BigInt>> {
        (0..self.dim())
            .map(|i| {
                let mut v: BTreeMap<usize, BigInt> = BTreeMap::from([(i, BigInt::one())]);
                for _ in 0..j {
                    let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
                    for (x, c) in &v {
                        for &(y, d) in &self.image[*x] {
                            *next.entry(y).or_insert_with(BigInt::zero) += c * d;
                        }
                    }
                    next.retain(|_, c| !c.is_zero());
                    v = next;
                }
                v
            })
            .collect()
    }

    /// `rank N^j`, summed over the weight blocks `V_w -> V_{w-2j}`.
    pub fn rank_of_power(&self, j: usize) -> usize {
        if j == 0 {
            return self.dim();
        }
        let images = self.power_images(j);
        let mut by_weight: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &w) in self.weights.iter().enumerate() {
            by_weight.entry(w).or_default().push(i);
        }
        by_weight
            .values()
            .map(|sources| {
                let mut cols: Vec<usize> = sources.iter().flat_map(|&i| images[i].keys().copied()).collect();
                cols.sort_unstable();
                cols.dedup();
                let rows: Vec<Vec<BigInt>> = sources
                    .iter()
                    .map(|&i| cols.iter().map(|c| images[i].get(c).cloned().unwrap_or_default()).collect())
                    .collect();
                rank(rows)
            })
            .sum()
    }

    /// Jordan type from `#{blocks of size >= s} = rank N^{s-1} - rank N^s`.
    pub fn jordan_type(&self) -> JordanType {
        let mut ranks = vec![self.dim()];
        while *ranks.last().unwrap() > 0 {
            ranks.push(self.rank_of_power(ranks.len()));
        }
        ranks.push(0);
        let at_least = |s: usize| ranks[s - 1] - ranks[s];
        let mut blocks = Vec::new();
        for s in 1..ranks.len() - 1 {
            let exactly = at_least(s) - at_least(s + 1);
            blocks.extend(std::iter::repeat_n(s, exactly));
        }
        JordanType::from_blocks(blocks)
    }

    pub fn dense(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (i, img) in self.image.iter().enumerate() {
            for &(y, c) in img {
                // Column i is N e_i.
                m[y][i] += BigRational::from_integer(c.into());
            }
        }
        m
    }
}

fn index_tuples(n: usize, k: usize, strict: bool) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, strict: bool, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, strict, if strict { i + 1 } else { i }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, strict, 0, &mut Vec::new(), &mut out);
    out
}

/// Sorts `u`; `None` on a repeated index, else the sign of the permutation.
fn sort_with_sign(u: &mut [usize]) -> Option<i64> {
    let mut inversions = 0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if u[i] == u[j] {
                return None;
            }
            if u[i] > u[j] {
                inversions += 1;
            }
        }
    }
    u.sort_unstable();
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Rank over `Q` of an integer matrix by Bareiss elimination.
pub fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank over `Q` of a rational matrix by Gaussian elimination.
pub fn rank_q(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..cols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

/// Basis (as column vectors) of the null space of `m`.
fn kernel(m: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = BigRational::one() / &a[r][c];
        for j in 0..n {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Columns of `m` (an `n × n` matrix).
fn columns(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

/// Basis of `U ∩ V` for spanning sets of vectors in `Q^n`.
fn intersect(u: &[Vec<BigRational>], v: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    // Solve Σ a_i u_i = Σ b_j v_j.
    let k = u.len() + v.len();
    let system: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            u.iter()
                .map(|x| x[row].clone())
                .chain(v.iter().map(|y| -y[row].clone()))
                .collect()
        })
        .collect();
    kernel(&system, k)
        .into_iter()
        .map(|c| {
            (0..n)
                .map(|row| u.iter().zip(&c).fold(BigRational::zero(), |acc, (x, a)| acc + &x[row] * a))
                .collect()
        })
        .collect()
}

/// `dim Gr^W_k` for the monodromy weight filtration centered at `center`,
/// from `W_{center+k} = Σ_{i-j=k} ker N^{i+1} ∩ im N^j` on the dense matrix.
/// With `kernel_only`, the gradeds of the induced filtration on `ker N`.
pub fn weight_gradeds(op: &Operator, center: i64, kernel_only: bool) -> BTreeMap<i64, usize> {
    let n = op.dim();
    let nm = op.dense();
    let mut powers = vec![identity(n)];
    for _ in 0..=n {
        let next = mat_mul(powers.last().unwrap(), &nm);
        powers.push(next);
    }
    let ker_n = kernel(&nm, n);
    let span_dim = |vs: &[Vec<BigRational>]| if vs.is_empty() { 0 } else { rank_q(vs.to_vec()) };
    let w_dim = |k: i64| -> usize {
        let mut gens = Vec::new();
        for j in 0..=n as i64 {
            let i = k + j;
            if i < 0 || i as usize > n {
                continue;
            }
            let ker = kernel(&powers[i as usize + 1], n);
            let im = columns(&powers[j as usize]);
            gens.extend(intersect(&ker, &im, n));
        }
        if kernel_only {
            gens = intersect(&gens, &ker_n, n);
        }
        span_dim(&gens)
    };
    let mut out = BTreeMap::new();
    let bound = n as i64;
    let mut prev = w_dim(-bound - 1);
    for k in -bound..=bound {
        let cur = w_dim(k);
        if cur > prev {
            out.insert(center + k, cur - prev);
        }
        prev = cur;
    }
    out
}

/// Random Jordan type with total dimension in `1..=max_dim`.
pub fn random_jordan<R: Rng>(rng: &mut R, max_dim: usize) -> JordanType {
    let target = rng.gen_range(1..=max_dim);
    let mut left = target;
    let mut blocks = Vec::new();
    while left > 0 {
        let h = rng.gen_range(1..=left);
        blocks.push(h);
        left -= h;
    }
    JordanType::from_blocks(blocks)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Power series in `q` (up to `q^max`) with polynomial coefficients in `t`.
type Series = Vec<Vec<i64>>;

fn series_mul(a: &Series, b: &Series, max: usize) -> Series {
    let mut out: Series = vec![Vec::new(); max + 1];
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            if i + j > max {
                break;
            }
            for (x, &ca) in pa.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (y, &cb) in pb.iter().enumerate() {
                    let slot = &mut out[i + j];
                    if slot.len() <= x + y {
                        slot.resize(x + y + 1, 0);
                    }
                    slot[x + y] += ca * cb;
                }
            }
        }
    }
    out
}

/// `(1 - s·t^d q^k)^{-s·e}` for `s = ±1`, truncated at `q^max`.
fn factor(d: usize, k: usize, e: u64, odd: bool, max: usize) -> Series {
    let mut out: Series = vec![Vec::new(); max + 1];
    let mut m = 0u64;
    while (k as u64) * m <= max as u64 {
        let c = if odd { binomial(e, m) } else { binomial(e + m - 1, m) } as i64;
        if c == 0 {
            break;
        }
        let slot = &mut out[k * m as usize];
        let deg = d * m as usize;
        if slot.len() <= deg {
            slot.resize(deg + 1, 0);
        }
        slot[deg] += c;
        m += 1;
    }
    out
}

/// Betti numbers of `Hilb^n` of a surface with Betti numbers `b`, from
/// `Π_k Π_i (1 - (-1)^i t^{2k-2+i} q^k)^{-(-1)^i b_i}`.
pub fn goettsche_hilb_betti(b: &[u64], n: usize) -> Vec<i64> {
    let mut acc: Series = vec![Vec::new(); n + 1];
    acc[0] = vec![1];
    for k in 1..=n {
        for (i, &bi) in b.iter().enumerate() {
            if bi == 0 {
                continue;
            }
            acc = series_mul(&acc, &factor(2 * k - 2 + i, k, bi, i % 2 == 1, n), n);
        }
    }
    let mut out = acc[n].clone();
    out.resize(4 * n + 1, 0);
    out
}

/// Betti numbers of `Sym^a S` by counting `S_a`-invariant monomials in a
/// graded basis of `H^*(S)`: multisets of basis elements in which odd-degree
/// elements occur at most once.
pub fn sym_product_betti(b: &[u64], a: usize) -> Vec<i64> {
    let degrees: Vec<usize> = b
        .iter()
        .enumerate()
        .flat_map(|(i, &bi)| std::iter::repeat_n(i, bi as usize))
        .collect();
    let mut out = vec![0i64; 4 * a + 1];
    fn go(degrees: &[usize], start: usize, left: usize, deg: usize, out: &mut [i64]) {
        if left == 0 {
            out[deg] += 1;
            return;
        }
        for i in start..degrees.len() {
            let next = if degrees[i] % 2 == 1 { i + 1 } else { i };
            go(degrees, next, left - 1, deg + degrees[i], out);
        }
    }
    go(&degrees, 0, a, 0, &mut out);
    out
}

pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

/// Nonzero integer vectors with entries in `[-bound, bound]` that are
/// isotropic for `gram`, in lexicographic order.
pub fn isotropic_grid(gram: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let b = gram.len();
    let mut out = Vec::new();
    let mut x = vec![-bound; b];
    loop {
        let q: i64 = (0..b).map(|i| (0..b).map(|j| x[i] * gram[i][j] * x[j]).sum::<i64>()).sum();
        if q == 0 && x.iter().any(|&v| v != 0) {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < b && x[i] == bound {
            x[i] = -bound;
            i += 1;
        }
        if i == b {
            return out;
        }
        x[i] += 1;
    }
}

/// `dim` of the span of `α^{n+1}·x^β` over the given isotropic `α` and
/// monomials `β` of degree `k - n - 1`, by expanding polynomials directly.
pub fn ideal_rank_oracle(alphas: &[Vec<i64>], n: usize, k: usize) -> usize {
    let b = alphas.first().map_or(0, Vec::len);
    let monos = index_tuples(b, k, false);
    let index: HashMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let betas = index_tuples(b, k - n - 1, false);
    let mut rows = Vec::new();
    for alpha in alphas {
        // α^{n+1} expanded as a product of linear forms over index tuples.
        let mut power: BTreeMap<Vec<usize>, BigInt> = BTreeMap::from([(vec![], BigInt::one())]);
        for _ in 0..=n {
            let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            for (t, c) in &power {
                for (i, &a) in alpha.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let mut u = t.clone();
                    u.push(i);
                    u.sort_unstable();
                    *next.entry(u).or_insert_with(BigInt::zero) += c * BigInt::from(a);
                }
            }
            power = next;
        }
        for beta in &betas {
            let mut row = vec![BigInt::zero(); monos.len()];
            for (t, c) in &power {
                let mut u = t.clone();
                u.extend(beta);
                u.sort_unstable();
                row[index[&u]] += c;
            }
            rows.push(row);
        }
    }
    rank(rows)
}
