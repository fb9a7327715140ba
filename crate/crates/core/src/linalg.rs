//! Exact rank computations over the rationals.
//!
//! A subspace `V ⊂ Q^w` is tracked through an integral basis of its
//! annihilator `V^⊥` under the standard pairing. Membership of a row is then
//! `dim V^⊥` dot products, which is cheap exactly when `V` is nearly
//! everything, the common case when most incoming rows are dependent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Span of integer vectors in `Q^width`, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct Span {
    width: usize,
    // Primitive integral basis of the annihilator of the span.
    complement: Vec<Vec<BigInt>>,
}

impl Span {
    pub fn new(width: usize) -> Self {
        let complement = (0..width)
            .map(|i| {
                let mut e = vec![BigInt::zero(); width];
                e[i] = BigInt::one();
                e
            })
            .collect();
        Self { width, complement }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.width - self.complement.len()
    }

    pub fn is_full(&self) -> bool {
        self.complement.is_empty()
    }

    /// Whether `row` lies in the span.
    pub fn contains(&self, row: &[BigInt]) -> bool {
        assert_eq!(row.len(), self.width, "row width mismatch");
        self.complement.iter().all(|w| dot(row, w).is_zero())
    }

    /// Adds `row` to the spanning set; returns whether the rank went up.
    pub fn insert(&mut self, row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.width, "row width mismatch");
        let pairings: Vec<BigInt> = self.complement.iter().map(|w| dot(&row, w)).collect();
        // Pivot on the smallest nonzero pairing to limit coefficient growth.
        let Some(pivot) = pairings
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .min_by(|(_, a), (_, b)| a.magnitude().cmp(b.magnitude()))
            .map(|(i, _)| i)
        else {
            return false;
        };
        let w0 = self.complement.swap_remove(pivot);
        let d0 = pairings[pivot].clone();
        let mut rest = pairings;
        rest.swap_remove(pivot);
        for (w, d) in self.complement.iter_mut().zip(rest) {
            if d.is_zero() {
                continue;
            }
            // w <- d0·w - d·w0 pairs to zero with `row`.
            let g = d0.gcd(&d);
            let (a, b) = (&d0 / &g, d / &g);
            for (x, y) in w.iter_mut().zip(&w0) {
                *x = &*x * &a - &b * y;
            }
            make_primitive(w);
        }
        true
    }
}

fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Rank over `Q` of an integer matrix given by rows.
pub fn rank<I, R>(width: usize, rows: I) -> usize
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = i64>,
{
    let mut basis = Span::new(width);
    for r in rows {
        basis.insert(r.into_iter().map(BigInt::from).collect());
        if basis.is_full() {
            break;
        }
    }
    basis.rank()
}

/// Signature `(positive, negative, zero)` of a symmetric integer matrix, via
/// symmetric Gaussian elimination over `Q` (Sylvester's law of inertia).
pub fn signature(gram: &[Vec<BigInt>]) -> (usize, usize, usize) {
    use num_rational::BigRational;
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // Prefer a nonzero diagonal pivot.
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // All diagonal entries vanish; find an off-diagonal pair and
                // replace e_i by e_i + e_j, which makes the diagonal 2·a_ij.
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    None => {
                        zero += active.len();
                        break;
                    }
                    Some((i, j)) => {
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                }
            }
        };
        let d = a[pivot][pivot].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            let f = &a[i][pivot] / &d;
            if f.is_zero() {
                continue;
            }
            for &k in &active {
                let v = &f * &a[pivot][k];
                a[i][k] -= v;
            }
            a[i][pivot] = BigRational::zero();
        }
        for &k in &active {
            a[pivot][k] = BigRational::zero();
        }
    }
    (pos, neg, zero)
}
