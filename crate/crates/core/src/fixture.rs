//! Profile files: a line-oriented text format and its JSON equivalent.
//!
//! Text:
//!
//! ```text
//! # K3 with a type II degeneration
//! name: my-k3
//! kind: k3
//! degree 0: 1
//! degree 2: 2,1x20
//! degree 4: 1
//! ```
//!
//! Each `degree m:` line lists the Jordan blocks of `N_m` (`hxk` is `k` blocks
//! of size `h`; an empty list is the zero space). `name`, `kind` and `top`
//! are optional headers; unlisted degrees are zero.
//!
//! JSON:
//!
//! ```json
//! {"name": "my-k3", "kind": "k3", "top_degree": 4,
//!  "degrees": [{"degree": 2, "dims": 22, "nilp": 1, "blocks": [[2, 1], [1, 20]]}]}
//! ```
//!
//! `blocks` holds `[size, multiplicity]` pairs, largest first. On input only
//! `degree` and `blocks` are required; `dims` and `nilp`, when present, must
//! agree with the blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedMonodromyProfile, SurfaceFixture, SurfaceKind};
use crate::sl2::{format_blocks, JordanType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileFile {
    pub name: Option<String>,
    pub kind: Option<SurfaceKind>,
    pub profile: GradedMonodromyProfile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<usize>,
    /// `None` for the zero space.
    #[serde(default)]
    pub nilp: Option<usize>,
    pub blocks: Vec<[usize; 2]>,
}

impl DegreeRecord {
    pub fn new(degree: usize, j: &JordanType) -> Self {
        Self {
            degree,
            dims: Some(j.total_dim()),
            nilp: (!j.is_zero()).then(|| j.nilp()),
            blocks: j.blocks().map(|(h, m)| [h, m]).collect(),
        }
    }

    fn jordan_type(&self) -> Result<JordanType> {
        let mut j = JordanType::zero();
        for &[h, m] in &self.blocks {
            if h == 0 {
                return Err(Error::InvalidFixture(format!(
                    "degree {}: block size 0",
                    self.degree
                )));
            }
            j = j.direct_sum(&JordanType::with_multiplicity(h, m));
        }
        if let Some(d) = self.dims {
            if d != j.total_dim() {
                return Err(Error::InvalidFixture(format!(
                    "degree {}: dims {d} but blocks span {}",
                    self.degree,
                    j.total_dim()
                )));
            }
        }
        if let Some(nilp) = self.nilp {
            if j.is_zero() || nilp != j.nilp() {
                return Err(Error::InvalidFixture(format!(
                    "degree {}: nilp {nilp} does not match blocks {j}",
                    self.degree
                )));
            }
        }
        Ok(j)
    }
}

/// All degrees `0..=top_degree` of a profile, zero ones included.
pub fn degree_records(profile: &GradedMonodromyProfile) -> Vec<DegreeRecord> {
    (0..=profile.top_degree())
        .map(|m| DegreeRecord::new(m, profile.get(m)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SurfaceKind>,
    #[serde(default)]
    pub top_degree: Option<usize>,
    pub degrees: Vec<DegreeRecord>,
}

impl ProfileFile {
    pub fn new(profile: GradedMonodromyProfile) -> Self {
        Self {
            name: None,
            kind: None,
            profile,
        }
    }

    pub fn from_surface(surface: &SurfaceFixture) -> Self {
        Self {
            name: Some(surface.name().to_string()),
            kind: Some(surface.kind()),
            profile: surface.profile().clone(),
        }
    }

    /// Parses either format; input whose first non-blank character is `{` is
    /// read as JSON.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut name = None;
        let mut kind = None;
        let mut top = None;
        let mut profile = GradedMonodromyProfile::new(0);
        let mut seen = std::collections::BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if let Some(m) = key.strip_prefix("degree") {
                let m: usize = m
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad degree `{}`", m.trim())))?;
                if !seen.insert(m) {
                    return Err(err(format!("degree {m} listed twice")));
                }
                let j: JordanType = value.parse().map_err(err)?;
                profile.set(m, j);
                continue;
            }
            match key {
                "name" => name = Some(value.to_string()),
                "kind" => {
                    kind = Some(match value {
                        "k3" | "K3" => SurfaceKind::K3,
                        "abelian" => SurfaceKind::Abelian,
                        _ => return Err(err(format!("unknown kind `{value}` (k3 or abelian)"))),
                    })
                }
                "top" | "top_degree" => {
                    top = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad top degree `{value}`")))?,
                    )
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        Self::assemble(name, kind, top, profile, seen.last().copied())
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: ProfileDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: format!("column {}: {e}", e.column()),
        })?;
        let mut profile = GradedMonodromyProfile::new(0);
        let mut seen = std::collections::BTreeSet::new();
        for rec in &doc.degrees {
            if !seen.insert(rec.degree) {
                return Err(Error::InvalidFixture(format!(
                    "degree {} listed twice",
                    rec.degree
                )));
            }
            profile.set(rec.degree, rec.jordan_type()?);
        }
        Self::assemble(doc.name, doc.kind, doc.top_degree, profile, seen.last().copied())
    }

    fn assemble(
        name: Option<String>,
        kind: Option<SurfaceKind>,
        top: Option<usize>,
        profile: GradedMonodromyProfile,
        max_listed: Option<usize>,
    ) -> Result<Self> {
        let top = match (top, max_listed) {
            (Some(t), Some(m)) if m > t => {
                return Err(Error::InvalidFixture(format!(
                    "degree {m} listed above top degree {t}"
                )))
            }
            (Some(t), _) => t,
            (None, Some(m)) if kind.is_some() => m.max(4),
            (None, Some(m)) => m,
            (None, None) if kind.is_some() => 4,
            (None, None) => 0,
        };
        let mut padded = GradedMonodromyProfile::new(top);
        for (m, j) in profile.nonzero() {
            padded.set(m, j.clone());
        }
        Ok(Self {
            name,
            kind,
            profile: padded,
        })
    }

    /// Interprets the file as a surface fixture; `kind` must be given.
    pub fn into_surface(self) -> Result<SurfaceFixture> {
        let kind = self
            .kind
            .ok_or_else(|| Error::InvalidFixture("surface fixture needs `kind: k3|abelian`".into()))?;
        let name = self.name.unwrap_or_else(|| format!("custom-{kind}"));
        SurfaceFixture::from_profile(name, kind, &self.profile)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {name}\n"));
        }
        if let Some(kind) = self.kind {
            out.push_str(&format!("kind: {kind}\n"));
        }
        out.push_str(&format!("top: {}\n", self.profile.top_degree()));
        for (m, j) in self.profile.nonzero() {
            out.push_str(&format!("degree {m}: {}\n", format_blocks(j)));
        }
        out
    }

    pub fn to_document(&self) -> ProfileDocument {
        ProfileDocument {
            name: self.name.clone(),
            kind: self.kind,
            top_degree: Some(self.profile.top_degree()),
            degrees: degree_records(&self.profile),
        }
    }
}
