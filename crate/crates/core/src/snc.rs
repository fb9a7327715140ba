//! Combinatorics of simple normal crossing singular fibers.
//!
//! A [`DualComplex`] records the components of the singular fiber (0-cells)
//! and their multiple intersections (`p`-cells for `(p+1)`-fold
//! intersections) as a Δ-complex, optionally with Betti numbers of every
//! stratum. On top of it sit the `q = 0` row of the weight spectral sequence,
//! the depth test for nontrivial middle monodromy, and a dimension budget
//! check against the Clemens–Schmid sequence.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::GradedMonodromyProfile;
use crate::linalg;
use crate::sl2::JordanType;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    /// Indices into the cells one dimension down; face `i` omits vertex `i`.
    pub faces: Vec<usize>,
    /// Betti numbers of the stratum, degree → dimension.
    pub betti: BTreeMap<usize, usize>,
}

/// Δ-complex of an SNC configuration: `cells[p]` are the `p`-cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualComplex {
    cells: Vec<Vec<Cell>>,
    index: HashMap<String, (usize, usize)>,
}

impl DualComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a `p`-cell whose faces are named by id (in face order). Returns its
    /// index among the `p`-cells.
    pub fn add_cell(
        &mut self,
        p: usize,
        id: impl Into<String>,
        faces: &[&str],
        betti: BTreeMap<usize, usize>,
    ) -> Result<usize> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(Error::InconsistentComplex(format!("duplicate cell id `{id}`")));
        }
        let expected = if p == 0 { 0 } else { p + 1 };
        if faces.len() != expected {
            return Err(Error::InconsistentComplex(format!(
                "{p}-cell `{id}` needs {expected} faces, got {}",
                faces.len()
            )));
        }
        let faces = faces
            .iter()
            .map(|f| match self.index.get(*f) {
                Some(&(q, i)) if q + 1 == p => Ok(i),
                Some(&(q, _)) => Err(Error::InconsistentComplex(format!(
                    "face `{f}` of {p}-cell `{id}` is a {q}-cell"
                ))),
                None => Err(Error::InconsistentComplex(format!(
                    "face `{f}` of `{id}` is not defined yet"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if self.cells.len() <= p {
            self.cells.resize_with(p + 1, Vec::new);
        }
        let at = self.cells[p].len();
        self.index.insert(id.clone(), (p, at));
        self.cells[p].push(Cell { id, faces, betti });
        Ok(at)
    }

    pub fn cells(&self, p: usize) -> &[Cell] {
        self.cells.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn cell_mut(&mut self, id: &str) -> Option<&mut Cell> {
        let &(p, i) = self.index.get(id)?;
        Some(&mut self.cells[p][i])
    }

    /// Number of `p`-cells for `p = 0..=depth`.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self.cells.iter().map(Vec::len).collect();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    /// Largest `p` with a `p`-cell, i.e. `dim |Γ|`. Zero for the empty
    /// complex as well as for a single component.
    pub fn depth(&self) -> usize {
        self.cell_counts().len().saturating_sub(1)
    }

    /// Sets the same Betti number in `degree` on every `p`-cell.
    pub fn fill_betti(&mut self, p: usize, degree: usize, value: usize) {
        if let Some(cells) = self.cells.get_mut(p) {
            for c in cells {
                c.betti.insert(degree, value);
            }
        }
    }

    /// Boundary `∂_p` as a sparse column list: one entry per `p`-cell mapping
    /// `(p-1)`-cell index to coefficient.
    fn boundary(&self, p: usize) -> Vec<BTreeMap<usize, i64>> {
        if p == 0 {
            return vec![BTreeMap::new(); self.cells(0).len()];
        }
        self.cells(p)
            .iter()
            .map(|c| {
                let mut col = BTreeMap::new();
                for (i, &f) in c.faces.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    *col.entry(f).or_insert(0) += sign;
                }
                col.retain(|_, v| *v != 0);
                col
            })
            .collect()
    }

    /// Verifies `∂_{p-1} ∘ ∂_p = 0` in every dimension.
    pub fn check_boundary(&self) -> Result<()> {
        for p in 2..self.cells.len() {
            let lower = self.boundary(p - 1);
            for (c, col) in self.cells(p).iter().zip(self.boundary(p)) {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (&f, &coef) in &col {
                    for (&g, &c2) in &lower[f] {
                        *acc.entry(g).or_insert(0) += coef * c2;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(Error::InconsistentComplex(format!(
                        "boundary of boundary of `{}` is nonzero",
                        c.id
                    )));
                }
            }
        }
        Ok(())
    }

    fn boundary_rank(&self, p: usize) -> usize {
        if p == 0 || p >= self.cells.len() {
            return 0;
        }
        let width = self.cells(p - 1).len();
        let rows = self.boundary(p).into_iter().map(|col| {
            let mut row = vec![0i64; width];
            for (f, v) in col {
                row[f] = v;
            }
            row
        });
        linalg::rank(width, rows)
    }

    /// Rational cohomology of `|Γ|`, nonzero degrees only. With connected
    /// strata this is the `E_2` page of the `q = 0` row of the weight spectral
    /// sequence, i.e. `Gr^W_0 H^m` of the singular fiber.
    pub fn weight_row0(&self) -> Result<BTreeMap<usize, usize>> {
        self.check_boundary()?;
        let mut out = BTreeMap::new();
        for m in 0..self.cells.len() {
            let dim = self.cells(m).len() - self.boundary_rank(m) - self.boundary_rank(m + 1);
            if dim > 0 {
                out.insert(m, dim);
            }
        }
        Ok(out)
    }

    /// `Σ_p (-1)^p #cells(p)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(p, c)| if p % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// `dim H^q(X^{[p]})` summed over the `p`-cells. Degree 0 defaults to one
    /// per cell (connected strata); other degrees must be recorded.
    pub fn stratum_betti(&self, p: usize, q: usize) -> Result<usize> {
        self.cells(p)
            .iter()
            .map(|c| match c.betti.get(&q) {
                Some(&b) => Ok(b),
                None if q == 0 => Ok(1),
                None => Err(Error::MissingStratumData {
                    cell: c.id.clone(),
                    degree: q,
                }),
            })
            .sum()
    }

    /// A chain of `len` components, each meeting only its neighbours.
    pub fn chain(len: usize) -> Self {
        let mut d = Self::new();
        for i in 0..len {
            d.add_cell(0, format!("X{i}"), &[], BTreeMap::new())
                .expect("fresh id");
        }
        for i in 1..len {
            let (a, b) = (format!("X{}", i - 1), format!("X{i}"));
            d.add_cell(1, format!("C{}", i - 1), &[&b, &a], BTreeMap::new())
                .expect("faces exist");
        }
        d
    }

    /// A cycle of `len >= 1` components; two components meet in two curves
    /// when `len = 2`, a single component meets itself when `len = 1`.
    pub fn cycle(len: usize) -> Self {
        assert!(len >= 1, "a cycle needs at least one component");
        let mut d = Self::chain(len);
        let (a, b) = (format!("X{}", len - 1), "X0".to_string());
        d.add_cell(1, format!("C{}", len - 1), &[&b, &a], BTreeMap::new())
            .expect("faces exist");
        d
    }
}

/// Builds a complex from vertex labels, edges and triangles, orienting every
/// simplex by label order.
struct SimplexBuilder {
    complex: DualComplex,
    edges: HashMap<(usize, usize), String>,
    labels: Vec<String>,
}

impl SimplexBuilder {
    fn new(labels: Vec<String>) -> Self {
        let mut complex = DualComplex::new();
        for l in &labels {
            complex.add_cell(0, l.clone(), &[], BTreeMap::new()).expect("fresh id");
        }
        Self {
            complex,
            edges: HashMap::new(),
            labels,
        }
    }

    fn edge(&mut self, a: usize, b: usize) {
        let (a, b) = (a.min(b), a.max(b));
        if self.edges.contains_key(&(a, b)) {
            return;
        }
        let id = format!("{}~{}", self.labels[a], self.labels[b]);
        self.complex
            .add_cell(1, id.clone(), &[&self.labels[b], &self.labels[a]], BTreeMap::new())
            .expect("vertices exist");
        self.edges.insert((a, b), id);
    }

    fn triangle(&mut self, v: [usize; 3]) {
        let mut v = v;
        v.sort_unstable();
        let [a, b, c] = v;
        for (x, y) in [(a, b), (a, c), (b, c)] {
            self.edge(x, y);
        }
        let faces = [
            self.edges[&(b, c)].clone(),
            self.edges[&(a, c)].clone(),
            self.edges[&(a, b)].clone(),
        ];
        let id = format!("{}~{}~{}", self.labels[a], self.labels[b], self.labels[c]);
        let faces: Vec<&str> = faces.iter().map(String::as_str).collect();
        self.complex
            .add_cell(2, id, &faces, BTreeMap::new())
            .expect("edges exist");
    }
}

/// Filled triangle: three components meeting pairwise and in a triple point.
pub fn triangle() -> DualComplex {
    let mut b = SimplexBuilder::new(vec!["X0".into(), "X1".into(), "X2".into()]);
    b.triangle([0, 1, 2]);
    b.complex
}

/// Dual complex of the semistable model of `Hilb^2` of a type II degeneration
/// of K3 surfaces with `k + 1` components.
///
/// Components are `X_{ij}`, `0 <= i <= j <= k`. Neighbours in the staircase
/// grid meet along divisors, and every unit square of the grid (including the
/// half-squares on the diagonal) carries one further double locus joining its
/// two corners with `i + j` even; every resulting triangle is a triple point.
/// This reproduces the drawn `k = 3` configuration (10 components, 18 double
/// loci, 9 triple points). For other `k` the same rule is extrapolated.
pub fn staircase_fixture(k: usize) -> DualComplex {
    assert!(k >= 1, "staircase needs k >= 1");
    let mut labels = Vec::new();
    let mut at = HashMap::new();
    for i in 0..=k {
        for j in i..=k {
            at.insert((i, j), labels.len());
            labels.push(format!("X{i}_{j}"));
        }
    }
    let mut b = SimplexBuilder::new(labels);
    let v = |i: usize, j: usize| at[&(i, j)];
    for i in 0..=k {
        for j in i..=k {
            if j < k {
                b.edge(v(i, j), v(i, j + 1));
            }
            if i < j {
                b.edge(v(i, j), v(i + 1, j));
            }
        }
    }
    for i in 0..k {
        // Half square on the diagonal: X_ii, X_i,i+1, X_i+1,i+1.
        b.triangle([v(i, i), v(i, i + 1), v(i + 1, i + 1)]);
        for j in i + 1..k {
            let (ll, lu, rl, ru) = (v(i, j), v(i, j + 1), v(i + 1, j), v(i + 1, j + 1));
            if (i + j) % 2 == 0 {
                b.triangle([ll, lu, ru]);
                b.triangle([ll, rl, ru]);
            } else {
                b.triangle([lu, ll, rl]);
                b.triangle([lu, ru, rl]);
            }
        }
    }
    b.complex
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictKind {
    Accept,
    Reject,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Accept => "ACCEPT",
            VerdictKind::Reject => "REJECT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub depth: usize,
    pub n: usize,
    pub nilp: usize,
    pub reasons: Vec<String>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.verdict == VerdictKind::Accept
    }
}

/// Necessary conditions on a good degeneration of irreducible symplectic
/// `2n`-folds with singular-fiber dual complex `complex` and claimed middle
/// monodromy `claimed`.
///
/// If `X^{[n]}` is empty then `Gr^W_q H^{2n}` of the singular fiber vanishes
/// for `q <= n`, which forces `N_{2n}^n = 0` and therefore `N_{2n} = 0`.
/// Independently `nilp(N_{2n})` may not lie strictly between `0` and `n`.
pub fn nocycle_check(complex: &DualComplex, n: usize, claimed: &JordanType) -> Verdict {
    let depth = complex.depth();
    let nilp = claimed.nilp();
    let mut reasons = Vec::new();
    if nilp > 0 {
        if depth < n {
            reasons.push(format!(
                "X^[{n}] is empty (depth {depth}), so Gr^W_q H^{} = 0 for q <= {n} and N^{n} = 0, hence N = 0; claimed nilp {nilp}",
                2 * n
            ));
        }
        if nilp < n {
            reasons.push(format!(
                "N^{n} = 0 forces N = 0 on the middle cohomology; claimed nilp {nilp} < {n}"
            ));
        }
    }
    Verdict {
        verdict: if reasons.is_empty() {
            VerdictKind::Accept
        } else {
            VerdictKind::Reject
        },
        depth,
        n,
        nilp,
        reasons,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetRow {
    /// Weight `q` of `Gr^W_q H^{2n}`.
    pub q: usize,
    /// `dim Gr^W_q ker N` on the nearby fiber.
    pub requirement: usize,
    /// `dim H^q(X^{[2n-q]})`, when known.
    pub budget: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClemensSchmidReport {
    pub n: usize,
    pub rows: Vec<BudgetRow>,
    pub pass: bool,
}

/// For `q < 2n`, `Gr^W_q H^{2n}(X) ≅ Gr^W_q ker N_{2n}`, and the left side is
/// a subquotient of `H^q(X^{[2n-q]})`. Checks that each such `E_1` term is at
/// least as large as the kernel graded it must carry. Only a necessary
/// condition: the differentials are not available from dimensions.
///
/// A weight whose stratum Betti numbers are not recorded is an error unless
/// some other weight already fails.
pub fn clemens_schmid_consistency(
    profile: &GradedMonodromyProfile,
    complex: &DualComplex,
    n: usize,
) -> Result<ClemensSchmidReport> {
    let middle = 2 * n;
    let kernel = profile.get(middle).kernel_weights(middle as i64);
    let mut rows = Vec::with_capacity(middle);
    let mut missing = None;
    for q in 0..middle {
        let requirement = kernel.get(&(q as i64)).copied().unwrap_or(0);
        let budget = match complex.stratum_betti(middle - q, q) {
            Ok(b) => Some(b),
            Err(e) => {
                if requirement > 0 && missing.is_none() {
                    missing = Some(e);
                }
                None
            }
        };
        let ok = requirement == 0 || budget.is_some_and(|b| b >= requirement);
        rows.push(BudgetRow {
            q,
            requirement,
            budget,
            ok,
        });
    }
    let failed = rows.iter().any(|r| !r.ok && r.budget.is_some());
    match missing {
        Some(e) if !failed => Err(e),
        _ => Ok(ClemensSchmidReport {
            n,
            rows,
            pass: !failed,
        }),
    }
}

/// Text form, one cell per line: `cell p: id [face ids] {q:dim,...}`.
pub fn format_complex(complex: &DualComplex) -> String {
    let mut out = String::new();
    for (p, cells) in complex.cells.iter().enumerate() {
        for c in cells {
            let faces: Vec<&str> = c
                .faces
                .iter()
                .map(|&f| complex.cells[p - 1][f].id.as_str())
                .collect();
            let betti: Vec<String> = c.betti.iter().map(|(q, d)| format!("{q}:{d}")).collect();
            out.push_str(&format!(
                "cell {p}: {} [{}] {{{}}}\n",
                c.id,
                faces.join(" "),
                betti.join(",")
            ));
        }
    }
    out
}

/// Parses the text form produced by [`format_complex`]. Faces may be
/// separated by spaces or commas, the bracket and brace groups are optional,
/// `#` starts a comment, and cells must come after their faces.
pub fn parse_complex(text: &str) -> Result<DualComplex> {
    let mut d = DualComplex::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("cell")
            .ok_or_else(|| err(format!("expected `cell p: ...`, got `{line}`")))?;
        let (p, rest) = rest
            .split_once(':')
            .ok_or_else(|| err("missing `:` after the cell dimension".into()))?;
        let p: usize = p
            .trim()
            .parse()
            .map_err(|_| err(format!("bad cell dimension `{}`", p.trim())))?;
        let rest = rest.trim();
        let id_end = rest
            .find(|c: char| c.is_whitespace() || c == '[' || c == '{')
            .unwrap_or(rest.len());
        let (id, mut rest) = rest.split_at(id_end);
        if id.is_empty() {
            return Err(err("missing cell id".into()));
        }
        rest = rest.trim();
        let mut faces = Vec::new();
        if let Some(r) = rest.strip_prefix('[') {
            let (inside, after) = r
                .split_once(']')
                .ok_or_else(|| err("unterminated face list".into()))?;
            faces = inside
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            rest = after.trim();
        }
        let mut betti = BTreeMap::new();
        if let Some(r) = rest.strip_prefix('{') {
            let (inside, after) = r
                .split_once('}')
                .ok_or_else(|| err("unterminated Betti list".into()))?;
            for entry in inside.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (q, dim) = entry
                    .split_once(':')
                    .ok_or_else(|| err(format!("bad Betti entry `{entry}`")))?;
                let q: usize = q
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad degree in `{entry}`")))?;
                let dim: usize = dim
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad dimension in `{entry}`")))?;
                betti.insert(q, dim);
            }
            rest = after.trim();
        }
        if !rest.is_empty() {
            return Err(err(format!("unexpected trailing text `{rest}`")));
        }
        d.add_cell(p, id, &faces, betti).map_err(|e| err(e.to_string()))?;
    }
    Ok(d)
}
