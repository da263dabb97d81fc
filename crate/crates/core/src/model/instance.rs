use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag written into every file this crate produces.
pub const FORMAT_VERSION: u32 = 1;

/// A nomination problem: `n` papers, `m` authors, the sparse authorship
/// incidence, per-author irresponsibility probabilities, and the optional
/// nomination limit and penalty weight.
///
/// Indices are 0-based in memory and 1-based on disk. An `Instance` may be
/// built unchecked (for example straight from a file) and inspected with
/// [`Instance::validate`]; the solvers refuse invalid instances.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    m: usize,
    papers: Vec<Vec<usize>>,
    p: Vec<f64>,
    b: Option<usize>,
    lambda: Option<f64>,
    offsets: Vec<usize>,
}

/// A violated instance invariant. Indices are stored 0-based and displayed
/// 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoPapers,
    NoAuthors,
    PaperCountMismatch { declared: usize, listed: usize },
    ProbabilityCountMismatch { declared: usize, listed: usize },
    EmptyPaper { paper: usize },
    AuthorOutOfRange { paper: usize, author: usize },
    DuplicateAuthor { paper: usize, author: usize },
    UnsortedAuthors { paper: usize },
    ProbabilityOutOfRange { author: usize, value: f64 },
    InvalidLimit,
    InvalidLambda { value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // wrapping_add keeps a file's out-of-range author 0 printable as 0
        let one = |i: usize| i.wrapping_add(1);
        match self {
            Violation::NoPapers => write!(f, "instance has no papers"),
            Violation::NoAuthors => write!(f, "instance has no authors"),
            Violation::PaperCountMismatch { declared, listed } => {
                write!(f, "n = {declared} but {listed} papers listed")
            }
            Violation::ProbabilityCountMismatch { declared, listed } => {
                write!(f, "m = {declared} but {listed} probabilities listed")
            }
            Violation::EmptyPaper { paper } => write!(f, "paper {} has no authors", one(*paper)),
            Violation::AuthorOutOfRange { paper, author } => {
                write!(f, "paper {} lists author {} out of range", one(*paper), one(*author))
            }
            Violation::DuplicateAuthor { paper, author } => {
                write!(f, "paper {} lists author {} twice", one(*paper), one(*author))
            }
            Violation::UnsortedAuthors { paper } => {
                write!(f, "paper {} authors not in ascending order", one(*paper))
            }
            Violation::ProbabilityOutOfRange { author, value } => {
                write!(f, "p_{} out of [0,1] ({value})", one(*author))
            }
            Violation::InvalidLimit => write!(f, "b must be at least 1"),
            Violation::InvalidLambda { value } => {
                write!(f, "lambda must be finite and > 0 ({value})")
            }
        }
    }
}

impl Instance {
    /// Builds an instance without checking any invariant.
    pub fn from_parts(
        n: usize,
        m: usize,
        papers: Vec<Vec<usize>>,
        p: Vec<f64>,
        b: Option<usize>,
        lambda: Option<f64>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(papers.len() + 1);
        offsets.push(0);
        for authors in &papers {
            offsets.push(offsets.last().unwrap() + authors.len());
        }
        Self {
            n,
            m,
            papers,
            p,
            b,
            lambda,
            offsets,
        }
    }

    /// Builds and validates an instance with `n = papers.len()` and
    /// `m = p.len()`.
    pub fn new(papers: Vec<Vec<usize>>, p: Vec<f64>) -> Result<Self> {
        Self::from_parts(papers.len(), p.len(), papers, p, None, None).checked()
    }

    pub fn with_limit(mut self, b: usize) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// Returns `self` if valid, otherwise every violation.
    pub fn checked(self) -> Result<Self> {
        self.ensure_valid()?;
        Ok(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(v))
        }
    }

    /// Lists every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation::NoPapers);
        }
        if self.m == 0 {
            out.push(Violation::NoAuthors);
        }
        if self.papers.len() != self.n {
            out.push(Violation::PaperCountMismatch {
                declared: self.n,
                listed: self.papers.len(),
            });
        }
        if self.p.len() != self.m {
            out.push(Violation::ProbabilityCountMismatch {
                declared: self.m,
                listed: self.p.len(),
            });
        }
        for (i, authors) in self.papers.iter().enumerate() {
            if authors.is_empty() {
                out.push(Violation::EmptyPaper { paper: i });
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            for &j in authors {
                if j >= self.m {
                    out.push(Violation::AuthorOutOfRange { paper: i, author: j });
                }
                if !seen.insert(j) {
                    out.push(Violation::DuplicateAuthor { paper: i, author: j });
                }
            }
            if seen.len() == authors.len() && authors.windows(2).any(|w| w[0] > w[1]) {
                out.push(Violation::UnsortedAuthors { paper: i });
            }
        }
        for (j, &pj) in self.p.iter().enumerate() {
            if !(0.0..=1.0).contains(&pj) {
                out.push(Violation::ProbabilityOutOfRange { author: j, value: pj });
            }
        }
        if self.b == Some(0) {
            out.push(Violation::InvalidLimit);
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l > 0.0) {
                out.push(Violation::InvalidLambda { value: l });
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Authors of paper `i`, ascending.
    pub fn authors(&self, i: usize) -> &[usize] {
        &self.papers[i]
    }

    pub fn papers(&self) -> &[Vec<usize>] {
        &self.papers
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn b(&self) -> Option<usize> {
        self.b
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    /// Number of incident (paper, author) pairs, `nnz(a)`.
    pub fn nnz(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Index of the first pair of paper `i` in paper-major pair order.
    pub fn pair_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Incident pairs `(paper, author)` in paper-major order. The position
    /// of a pair in this sequence is its pair index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.papers
            .iter()
            .enumerate()
            .flat_map(|(i, authors)| authors.iter().map(move |&j| (i, j)))
    }

    pub fn is_incident(&self, i: usize, j: usize) -> bool {
        self.papers.get(i).is_some_and(|a| a.contains(&j))
    }

    /// Product of the per-paper author counts: the number of feasible
    /// nominations of the basic problem.
    pub fn assignment_count(&self) -> u128 {
        self.papers
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Resolves the nomination limit, preferring an explicit value.
    pub fn resolve_limit(&self, explicit: Option<usize>) -> Result<usize> {
        let b = explicit.or(self.b).ok_or(Error::MissingParameter("b"))?;
        if b == 0 {
            return Err(Error::InvalidParameter("b must be at least 1".into()));
        }
        Ok(b)
    }

    /// Resolves the penalty weight, preferring an explicit value.
    pub fn resolve_lambda(&self, explicit: Option<f64>) -> Result<f64> {
        let l = explicit.or(self.lambda).ok_or(Error::MissingParameter("lambda"))?;
        check_lambda(l)?;
        Ok(l)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        if file.format != FORMAT_VERSION {
            return Err(Error::UnsupportedFormat(file.format));
        }
        let papers = file
            .papers
            .into_iter()
            .map(|authors| authors.into_iter().map(|j| j.wrapping_sub(1)).collect())
            .collect();
        Ok(Self::from_parts(file.n, file.m, papers, file.p, file.b, file.lambda))
    }

    /// Compact JSON, one line, trailing newline.
    pub fn to_json_string(&self) -> String {
        let file = InstanceFile {
            format: FORMAT_VERSION,
            n: self.n,
            m: self.m,
            papers: self
                .papers
                .iter()
                .map(|a| a.iter().map(|j| j.wrapping_add(1)).collect())
                .collect(),
            p: self.p.clone(),
            b: self.b,
            lambda: self.lambda,
        };
        let mut s = serde_json::to_string(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    /// Imports a `paper_id,author_id` pair list (1-based, optional header)
    /// plus an `author_id,p` sidecar. `n` and `m` are the largest ids seen.
    pub fn from_csv<R1: std::io::Read, R2: std::io::Read>(pairs: R1, probs: R2) -> Result<Self> {
        let mut papers: Vec<Vec<usize>> = Vec::new();
        for rec in csv_reader(pairs).records() {
            let rec = rec?;
            let (Some(i), Some(j)) = (parse_id(rec.get(0)), parse_id(rec.get(1))) else {
                if rec.position().is_some_and(|p| p.line() == 1) {
                    continue;
                }
                return Err(Error::InvalidParameter(format!("bad pair row {rec:?}")));
            };
            if i == 0 || j == 0 {
                return Err(Error::InvalidParameter("ids are 1-based".into()));
            }
            if papers.len() < i {
                papers.resize_with(i, Vec::new);
            }
            papers[i - 1].push(j - 1);
        }
        let mut p: Vec<Option<f64>> = Vec::new();
        for rec in csv_reader(probs).records() {
            let rec = rec?;
            let id = parse_id(rec.get(0));
            let val = rec.get(1).and_then(|s| s.trim().parse::<f64>().ok());
            let (Some(j), Some(val)) = (id, val) else {
                if rec.position().is_some_and(|p| p.line() == 1) {
                    continue;
                }
                return Err(Error::InvalidParameter(format!("bad probability row {rec:?}")));
            };
            if j == 0 {
                return Err(Error::InvalidParameter("ids are 1-based".into()));
            }
            if p.len() < j {
                p.resize(j, None);
            }
            p[j - 1] = Some(val);
        }
        let max_author = papers.iter().flatten().map(|j| j + 1).max().unwrap_or(0);
        if p.len() < max_author {
            p.resize(max_author, None);
        }
        let p = p
            .into_iter()
            .enumerate()
            .map(|(j, v)| v.ok_or_else(|| Error::InvalidParameter(format!("no probability for author {}", j + 1))))
            .collect::<Result<Vec<_>>>()?;
        for authors in &mut papers {
            authors.sort_unstable();
        }
        Ok(Self::from_parts(papers.len(), p.len(), papers, p, None, None))
    }
}

pub(crate) fn check_lambda(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "lambda must be finite and > 0, got {l}"
        )))
    }
}

fn csv_reader<R: std::io::Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn parse_id(s: Option<&str>) -> Option<usize> {
    s?.trim().parse().ok()
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default = "default_format")]
    format: u32,
    n: usize,
    m: usize,
    papers: Vec<Vec<usize>>,
    p: Vec<f64>,
    #[serde(default)]
    b: Option<usize>,
    #[serde(default)]
    lambda: Option<f64>,
}
