//! Göttsche–Soergel decompositions for Hilbert schemes of points on a K3
//! surface and for generalized Kummer varieties, with the closed-form
//! nilpotency formulas used to cross-check them.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{deconvolve, kunneth, sym_product_surface, GradedMonodromyProfile, SurfaceFixture, SurfaceKind};

/// A partition of `n` in exponent notation: `alpha[i-1]` parts of size `i`,
/// with `Σ i·α_i = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    alpha: Vec<usize>,
}

impl Partition {
    /// Wraps an exponent vector of length `n`; fails unless `Σ i·α_i = n`.
    pub fn new(alpha: Vec<usize>) -> Result<Self> {
        let n = alpha.len();
        let weight: usize = alpha.iter().enumerate().map(|(i, a)| (i + 1) * a).sum();
        if n == 0 || weight != n {
            return Err(Error::InvalidFixture(format!(
                "exponent vector {alpha:?} is not a partition of {n}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// Number of parts `|α| = Σ α_i`.
    pub fn size(&self) -> usize {
        self.alpha.iter().sum()
    }

    /// `g(α) = gcd{ i : α_i ≠ 0 }`.
    pub fn gcd_part(&self) -> usize {
        self.part_sizes().fold(0, |g, i| g.gcd(&i))
    }

    /// `ν(α) = #{ i : α_i ≠ 0 } - 1`.
    pub fn nu(&self) -> usize {
        self.part_sizes().count() - 1
    }

    fn part_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.alpha
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, _)| i + 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.alpha.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` as exponent vectors, in decreasing lexicographic
/// order of `(α_1, ..., α_n)`; so `(n, 0, ...)` comes first and
/// `(0, ..., 0, 1)` last.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, i: usize, remaining: usize, alpha: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i > n {
            if remaining == 0 {
                out.push(Partition {
                    alpha: alpha.clone(),
                });
            }
            return;
        }
        for a in (0..=remaining / i).rev() {
            alpha[i - 1] = a;
            go(n, i + 1, remaining - a * i, alpha, out);
        }
        alpha[i - 1] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(n, 1, n, &mut vec![0; n], &mut out);
    out
}

/// Profile of `S^{(α)} = Π_j Sym^{α_j} S`.
fn partition_product(surface: &SurfaceFixture, alpha: &Partition) -> GradedMonodromyProfile {
    alpha
        .alpha()
        .iter()
        .filter(|&&a| a > 0)
        .fold(GradedMonodromyProfile::point(), |acc, &a| {
            kunneth(&acc, &sym_product_surface(surface, a))
        })
}

/// Göttsche–Soergel placement: `H^{i + 2|α|}(S^{(α)})` sits in degree
/// `i + 2·weight` of a variety of dimension `2·weight`, so source degree `s`
/// goes to `s + 2(weight - |α|)`.
fn place(source: &GradedMonodromyProfile, alpha: &Partition, weight: usize) -> GradedMonodromyProfile {
    let shift = 2 * (weight - alpha.size());
    source.shifted(shift, 4 * weight)
}

fn require_kind(surface: &SurfaceFixture, kind: SurfaceKind) -> Result<()> {
    if surface.kind() != kind {
        return Err(Error::InvalidFixture(format!(
            "expected a {kind} surface, got {} `{}`",
            surface.kind(),
            surface.name()
        )));
    }
    Ok(())
}

/// Monodromy profile of `Hilb^n(S)` for a degenerating K3 surface `S`.
pub fn hilb_profile(surface: &SurfaceFixture, n: usize) -> Result<GradedMonodromyProfile> {
    require_kind(surface, SurfaceKind::K3)?;
    if n == 0 {
        return Err(Error::InvalidFixture("Hilb^n needs n >= 1".into()));
    }
    Ok(partitions(n)
        .iter()
        .map(|alpha| place(&partition_product(surface, alpha), alpha, n))
        .fold(GradedMonodromyProfile::new(4 * n), |acc, p| acc.direct_sum(&p)))
}

/// Monodromy profile of `A × Kum^n(A)`, from the decomposition over
/// partitions of `n + 1` with multiplicities `g(α)^4`.
pub fn kummer_product_profile(surface: &SurfaceFixture, n: usize) -> Result<GradedMonodromyProfile> {
    require_kind(surface, SurfaceKind::Abelian)?;
    if n == 0 {
        return Err(Error::InvalidFixture("Kum^n needs n >= 1".into()));
    }
    let weight = n + 1;
    Ok(partitions(weight)
        .iter()
        .map(|alpha| {
            let g = alpha.gcd_part();
            place(&partition_product(surface, alpha), alpha, weight).repeated(g.pow(4))
        })
        .fold(GradedMonodromyProfile::new(4 * weight), |acc, p| acc.direct_sum(&p)))
}

/// Monodromy profile of `Kum^n(A)`: the Künneth quotient of
/// [`kummer_product_profile`] by `H^*(A)`.
pub fn kummer_profile(surface: &SurfaceFixture, n: usize) -> Result<GradedMonodromyProfile> {
    let product = kummer_product_profile(surface, n)?;
    deconvolve(&product, surface.profile())
}

/// Closed-form `nilp` of the monodromy on `H^m(Sym^a A)` for an abelian
/// surface with `l = rank N̄_1`, written with `m = 2M` or `2M + 1`:
///
/// ```text
/// even: M·l (M <= a),    (2a - M)·l (a < M <= 2a),      0 (M > 2a)
/// odd:  M·l + 1 (M <= a), (2a - M - 1)·l + 1 (a < M <= 2a), 0 (M > 2a)
/// ```
///
/// Returns 0 for `l = 0`. The odd branch is reproduced as stated; see
/// [`compare_sym_nilp`] for where it departs from the actual cohomology.
pub fn closed_form_sym_nilp(m: usize, a: usize, l: usize) -> i64 {
    if l == 0 {
        return 0;
    }
    let (big_m, a, l) = ((m / 2) as i64, a as i64, l as i64);
    if m % 2 == 0 {
        if big_m <= a {
            big_m * l
        } else if big_m <= 2 * a {
            (2 * a - big_m) * l
        } else {
            0
        }
    } else if big_m <= a {
        big_m * l + 1
    } else if big_m <= 2 * a {
        (2 * a - big_m - 1) * l + 1
    } else {
        0
    }
}

/// One row of the closed-form versus computed comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymNilpRow {
    pub degree: usize,
    pub a: usize,
    pub l: usize,
    pub closed_form: i64,
    pub computed: usize,
}

impl SymNilpRow {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.computed as i64
    }
}

/// Compares [`closed_form_sym_nilp`] with `nilp` of
/// [`sym_product_surface`] in every degree `0..=4a`.
pub fn compare_sym_nilp(surface: &SurfaceFixture, a: usize) -> Result<Vec<SymNilpRow>> {
    require_kind(surface, SurfaceKind::Abelian)?;
    let l = surface.l();
    let profile = sym_product_surface(surface, a);
    Ok((0..=4 * a)
        .map(|degree| SymNilpRow {
            degree,
            a,
            l,
            closed_form: closed_form_sym_nilp(degree, a, l),
            computed: profile.nilp(degree),
        })
        .collect())
}

/// Right-hand side of the Künneth estimate for `nilp(Ñ_{2k})` on
/// `H^{2k}(A × K)`: `max_i nilp(N_{2k-i} on K) + nilp(N_i on A)` over the
/// pairs where both factors are nonzero.
pub fn kunneth_nilp_estimate(candidate: &GradedMonodromyProfile, surface: &SurfaceFixture, k: usize) -> usize {
    let degree = 2 * k;
    (0..=4.min(degree))
        .filter(|&i| !surface.h(i).is_zero() && !candidate.get(degree - i).is_zero())
        .map(|i| candidate.nilp(degree - i) + surface.h(i).nilp())
        .max()
        .unwrap_or(0)
}
