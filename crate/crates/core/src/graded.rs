//! Graded monodromy profiles: the Jordan types of `N_m` on every `H^m` of a
//! nearby fiber, and the whole-cohomology operations built from them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2::JordanType;

static ZERO: JordanType = JordanType::EMPTY;

/// Cohomological degree → Jordan type of the monodromy logarithm, for degrees
/// `0..=top_degree`. Degrees that are not stored are the zero space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMonodromyProfile {
    by_degree: BTreeMap<usize, JordanType>,
    top_degree: usize,
}

impl GradedMonodromyProfile {
    /// The zero profile on degrees `0..=top_degree`.
    pub fn new(top_degree: usize) -> Self {
        Self {
            by_degree: BTreeMap::new(),
            top_degree,
        }
    }

    /// Cohomology of a point: one trivial block in degree 0. Unit of
    /// [`kunneth`].
    pub fn point() -> Self {
        Self::new(0).with(0, JordanType::trivial(1))
    }

    pub fn with(mut self, degree: usize, j: JordanType) -> Self {
        self.set(degree, j);
        self
    }

    /// Sets the Jordan type in `degree`, growing `top_degree` if needed.
    pub fn set(&mut self, degree: usize, j: JordanType) {
        self.top_degree = self.top_degree.max(degree);
        if j.is_zero() {
            self.by_degree.remove(&degree);
        } else {
            self.by_degree.insert(degree, j);
        }
    }

    fn add_to(&mut self, degree: usize, j: &JordanType) {
        if j.is_zero() {
            return;
        }
        self.top_degree = self.top_degree.max(degree);
        let slot = self.by_degree.entry(degree).or_default();
        *slot = slot.direct_sum(j);
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn get(&self, degree: usize) -> &JordanType {
        self.by_degree.get(&degree).unwrap_or(&ZERO)
    }

    pub fn nilp(&self, degree: usize) -> usize {
        self.get(degree).nilp()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.get(degree).total_dim()
    }

    /// Nonzero degrees in increasing order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &JordanType)> {
        self.by_degree.iter().map(|(&m, j)| (m, j))
    }

    /// Betti numbers `b_0, ..., b_top`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.top_degree).map(|m| self.dim(m)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(JordanType::total_dim).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nonzero()
            .map(|(m, j)| {
                let d = j.total_dim() as i64;
                if m % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// Degreewise direct sum; the top degree is the larger of the two.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.top_degree = out.top_degree.max(other.top_degree);
        for (m, j) in other.nonzero() {
            out.add_to(m, j);
        }
        out
    }

    /// `copies` copies of every degree.
    pub fn repeated(&self, copies: usize) -> Self {
        let mut out = Self::new(self.top_degree);
        for (m, j) in self.nonzero() {
            out.set(m, j.repeated(copies));
        }
        out
    }

    /// Moves degree `m` to `m + shift` and declares `top_degree`.
    pub fn shifted(&self, shift: usize, top_degree: usize) -> Self {
        let mut out = Self::new(top_degree);
        for (m, j) in self.nonzero() {
            out.set(m + shift, j.clone());
        }
        out
    }

    pub fn max_nilp(&self) -> usize {
        self.by_degree.values().map(JordanType::nilp).max().unwrap_or(0)
    }
}

impl fmt::Display for GradedMonodromyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in 0..=self.top_degree {
            writeln!(f, "H^{m}: {}", self.get(m))?;
        }
        Ok(())
    }
}

/// Künneth formula: `out[m] = ⊕_{i+j=m} P1[i] ⊗ P2[j]`.
pub fn kunneth(p1: &GradedMonodromyProfile, p2: &GradedMonodromyProfile) -> GradedMonodromyProfile {
    let mut out = GradedMonodromyProfile::new(p1.top_degree + p2.top_degree);
    for (i, a) in p1.nonzero() {
        for (j, b) in p2.nonzero() {
            out.add_to(i + j, &a.tensor(b));
        }
    }
    out
}

/// Inverse of [`kunneth`] with respect to a factor whose degree-0 part is a
/// single trivial block. Solves `kunneth(factor, Q) = total` for `Q` degree by
/// degree and verifies the product afterwards.
pub fn deconvolve(
    total: &GradedMonodromyProfile,
    factor: &GradedMonodromyProfile,
) -> Result<GradedMonodromyProfile> {
    if factor.get(0) != &JordanType::trivial(1) {
        return Err(Error::FactorNotUnital(factor.get(0).to_string()));
    }
    let top = total.top_degree.saturating_sub(factor.top_degree);
    let mut quotient = GradedMonodromyProfile::new(top);
    for m in 0..=total.top_degree {
        let mut known = JordanType::zero();
        for (i, f) in factor.nonzero().filter(|&(i, _)| i >= 1 && i <= m) {
            known = known.direct_sum(&f.tensor(quotient.get(m - i)));
        }
        let rest = total
            .get(m)
            .checked_sub(&known)
            .map_err(|block| Error::NotDivisible { degree: m, block })?;
        if !rest.is_zero() && m > top {
            let block = rest.blocks().next().map_or(0, |(h, _)| h);
            return Err(Error::NotDivisible { degree: m, block });
        }
        quotient.set(m, rest);
    }
    quotient.top_degree = top;
    let check = kunneth(factor, &quotient);
    if check.by_degree != total.by_degree {
        let degree = (0..=check.top_degree.max(total.top_degree))
            .find(|&m| check.get(m) != total.get(m))
            .unwrap_or(0);
        let block = check
            .get(degree)
            .checked_sub(total.get(degree))
            .ok()
            .and_then(|d| d.blocks().next().map(|(h, _)| h))
            .unwrap_or(0);
        return Err(Error::NotDivisible { degree, block });
    }
    Ok(quotient)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    K3,
    Abelian,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::K3 => "k3",
            SurfaceKind::Abelian => "abelian",
        })
    }
}

/// Monodromy data of a degenerating surface on `H^0..H^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFixture {
    name: String,
    kind: SurfaceKind,
    profile: GradedMonodromyProfile,
}

/// Names accepted by [`SurfaceFixture::preset`].
pub const PRESETS: [&str; 6] = [
    "k3-typeI",
    "k3-typeII",
    "k3-typeIII",
    "abelian-l0",
    "abelian-l1",
    "abelian-l2",
];

impl SurfaceFixture {
    /// A K3 surface with the given monodromy on `H^2` (22-dimensional,
    /// `nilp <= 2`); `H^0` and `H^4` are trivial lines, odd degrees vanish.
    pub fn k3(name: impl Into<String>, h2: JordanType) -> Result<Self> {
        if h2.total_dim() != 22 {
            return Err(Error::InvalidFixture(format!(
                "K3 H^2 must be 22-dimensional, got {}",
                h2.total_dim()
            )));
        }
        if h2.nilp() > 2 {
            return Err(Error::InvalidFixture(format!(
                "K3 H^2 monodromy has nilp {} > 2",
                h2.nilp()
            )));
        }
        let profile = GradedMonodromyProfile::new(4)
            .with(0, JordanType::trivial(1))
            .with(2, h2)
            .with(4, JordanType::trivial(1));
        Ok(Self {
            name: name.into(),
            kind: SurfaceKind::K3,
            profile,
        })
    }

    /// An abelian surface whose `H^m` is `Λ^m H^1`, from the 4-dimensional
    /// `H^1` with `nilp <= 1`.
    pub fn abelian(name: impl Into<String>, h1: JordanType) -> Result<Self> {
        if h1.total_dim() != 4 {
            return Err(Error::InvalidFixture(format!(
                "abelian H^1 must be 4-dimensional, got {}",
                h1.total_dim()
            )));
        }
        if h1.nilp() > 1 {
            return Err(Error::InvalidFixture(format!(
                "abelian H^1 monodromy has nilp {} > 1",
                h1.nilp()
            )));
        }
        let mut profile = GradedMonodromyProfile::new(4);
        for m in 0..=4 {
            profile.set(m, h1.ext_power(m)?);
        }
        Ok(Self {
            name: name.into(),
            kind: SurfaceKind::Abelian,
            profile,
        })
    }

    /// K3 of Kulikov type I, II or III (`nilp` 0, 1, 2 on `H^2`).
    pub fn k3_type(nilp: usize) -> Result<Self> {
        let (name, h2) = match nilp {
            0 => ("k3-typeI", JordanType::trivial(22)),
            1 => (
                "k3-typeII",
                JordanType::with_multiplicity(2, 1).direct_sum(&JordanType::trivial(20)),
            ),
            2 => (
                "k3-typeIII",
                JordanType::with_multiplicity(3, 1).direct_sum(&JordanType::trivial(19)),
            ),
            _ => {
                return Err(Error::InvalidFixture(format!(
                    "K3 monodromy has nilp at most 2, asked for {nilp}"
                )))
            }
        };
        Self::k3(name, h2)
    }

    /// Abelian surface with `l = rank N̄_1` in `{0, 1, 2}`.
    pub fn abelian_with_rank(l: usize) -> Result<Self> {
        if l > 2 {
            return Err(Error::InvalidFixture(format!(
                "rank of N on H^1 of an abelian surface is at most 2, asked for {l}"
            )));
        }
        let h1 = JordanType::with_multiplicity(2, l).direct_sum(&JordanType::trivial(4 - 2 * l));
        Self::abelian(format!("abelian-l{l}"), h1)
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "k3-typeI" => Self::k3_type(0).ok(),
            "k3-typeII" => Self::k3_type(1).ok(),
            "k3-typeIII" => Self::k3_type(2).ok(),
            "abelian-l0" => Self::abelian_with_rank(0).ok(),
            "abelian-l1" => Self::abelian_with_rank(1).ok(),
            "abelian-l2" => Self::abelian_with_rank(2).ok(),
            _ => None,
        }
    }

    /// Checks a profile against the invariants of `kind` and wraps it.
    pub fn from_profile(
        name: impl Into<String>,
        kind: SurfaceKind,
        profile: &GradedMonodromyProfile,
    ) -> Result<Self> {
        let name = name.into();
        if profile.top_degree() > 4 {
            return Err(Error::InvalidFixture(format!(
                "surface profile has degree {} > 4",
                profile.top_degree()
            )));
        }
        let expected = match kind {
            SurfaceKind::K3 => {
                for m in [1, 3] {
                    if !profile.get(m).is_zero() {
                        return Err(Error::InvalidFixture(format!("K3 has H^{m} = 0")));
                    }
                }
                Self::k3(name, profile.get(2).clone())?
            }
            SurfaceKind::Abelian => Self::abelian(name, profile.get(1).clone())?,
        };
        if expected.profile != *profile {
            let m = (0..=4)
                .find(|&m| expected.profile.get(m) != profile.get(m))
                .unwrap_or(0);
            return Err(Error::InvalidFixture(format!(
                "{kind} fixture: H^{m} should be {}, got {}",
                expected.profile.get(m),
                profile.get(m)
            )));
        }
        Ok(expected)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn profile(&self) -> &GradedMonodromyProfile {
        &self.profile
    }

    pub fn h(&self, degree: usize) -> &JordanType {
        self.profile.get(degree)
    }

    /// Rank of the monodromy logarithm on `H^1` (zero for K3).
    pub fn l(&self) -> usize {
        self.h(1).rank()
    }
}

/// Cohomology of `Sym^a S` with induced monodromy:
/// `out[m] = ⊕ Λ^{μ1}H^1 ⊗ Sym^{μ2}H^2 ⊗ Λ^{μ3}H^3 ⊗ Sym^{μ4}H^4` over
/// `μ1 + 2μ2 + 3μ3 + 4μ4 = m`, `|μ| <= a`.
pub fn sym_product_surface(surface: &SurfaceFixture, a: usize) -> GradedMonodromyProfile {
    let ext = |m: usize| -> Vec<JordanType> {
        let h = surface.h(m);
        (0..=a)
            .map(|k| h.ext_power(k).unwrap_or_else(|_| JordanType::zero()))
            .collect()
    };
    let sym = |m: usize| -> Vec<JordanType> { (0..=a).map(|k| surface.h(m).sym_power(k)).collect() };
    let (e1, s2, e3, s4) = (ext(1), sym(2), ext(3), sym(4));

    let mut out = GradedMonodromyProfile::new(4 * a);
    for m1 in 0..=a {
        if e1[m1].is_zero() {
            continue;
        }
        for m2 in 0..=a - m1 {
            let t12 = e1[m1].tensor(&s2[m2]);
            if t12.is_zero() {
                continue;
            }
            for m3 in 0..=a - m1 - m2 {
                let t123 = t12.tensor(&e3[m3]);
                if t123.is_zero() {
                    continue;
                }
                for m4 in 0..=a - m1 - m2 - m3 {
                    let degree = m1 + 2 * m2 + 3 * m3 + 4 * m4;
                    out.add_to(degree, &t123.tensor(&s4[m4]));
                }
            }
        }
    }
    out
}

/// `k · nilp(N_2)`: the lower bound for `nilp(N_{2k})` coming from the
/// injection `Sym^k H^2 ↪ H^{2k}`.
pub fn lower_bound_nilp(h2: &JordanType, k: usize) -> usize {
    k * h2.nilp()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundViolation {
    /// `nilp(N_m) > m`.
    DegreeBound { degree: usize, nilp: usize },
    /// `nilp(N_{2n})` in `1..n`: excluded for good degenerations.
    MiddleGap { n: usize, nilp: usize },
    /// Exactly one of `N_2`, `N_{2n}` vanishes.
    SecondVersusMiddle { n: usize, nilp2: usize, nilp_middle: usize },
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DegreeBound { degree, nilp } => {
                write!(f, "degree {degree}: nilp {nilp} exceeds the degree")
            }
            Self::MiddleGap { n, nilp } => write!(
                f,
                "degree {}: nilp {nilp} lies in 1..{n}, expected 0 or {n}..={}",
                2 * n,
                2 * n
            ),
            Self::SecondVersusMiddle { n, nilp2, nilp_middle } => write!(
                f,
                "nilp(N_2) = {nilp2} but nilp(N_{}) = {nilp_middle}; they vanish together",
                2 * n
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub violations: Vec<BoundViolation>,
}

impl BoundsReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn degree_bound_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, BoundViolation::DegreeBound { .. }))
    }
}

/// Checks `nilp(N_m) <= m` in every degree, and for a `2n`-dimensional
/// irreducible symplectic fiber the good-degeneration constraints
/// `nilp(N_{2n}) ∈ {0} ∪ [n, 2n]` and `N_2 = 0 ⇔ N_{2n} = 0`.
pub fn validate_bounds(profile: &GradedMonodromyProfile, n: usize) -> BoundsReport {
    let mut violations = Vec::new();
    for (degree, j) in profile.nonzero() {
        if j.nilp() > degree {
            violations.push(BoundViolation::DegreeBound {
                degree,
                nilp: j.nilp(),
            });
        }
    }
    let middle = profile.nilp(2 * n);
    if middle > 0 && middle < n {
        violations.push(BoundViolation::MiddleGap { n, nilp: middle });
    }
    let second = profile.nilp(2);
    if (second == 0) != (middle == 0) {
        violations.push(BoundViolation::SecondVersusMiddle {
            n,
            nilp2: second,
            nilp_middle: middle,
        });
    }
    BoundsReport { violations }
}
