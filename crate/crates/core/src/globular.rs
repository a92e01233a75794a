//! Finite, dimension-truncated globular sets, maps out of pasting shapes, and
//! the bounded free strict ω-category on a finite globular set.

use std::collections::HashMap;
use std::fmt;

use crate::pasting::{PastingDiagram, Side};

/// Truncation used when no other bound is given.
pub const DEFAULT_TRUNCATION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlobularError {
    #[error("dimension {0} exceeds truncation {1}")]
    DimensionOutOfRange(usize, usize),
    #[error("duplicate cell label {0:?} in dimension {1}")]
    DuplicateLabel(String, usize),
    #[error("unknown cell {0:?} in dimension {1}")]
    UnknownCell(String, usize),
    #[error("cell {0:?} of dimension {1} needs a source and target")]
    MissingFaces(String, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("globularity fails at {} cell(s), first {}", .0.len(), .0[0])]
    NotGlobular(Vec<Violation>),
}

/// A failure of `ss = st` or `ts = tt` at one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub dim: usize,
    pub label: String,
    pub equation: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}): {}", self.label, self.dim, self.equation)
    }
}

/// Cells in dimensions `0..=truncation`, with source and target indices into
/// the dimension below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGlobularSet {
    cells: Vec<Vec<String>>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
    index: Vec<HashMap<String, usize>>,
}

impl FiniteGlobularSet {
    pub fn new(truncation: usize) -> Self {
        let n = truncation + 1;
        FiniteGlobularSet {
            cells: vec![Vec::new(); n],
            src: vec![Vec::new(); n],
            tgt: vec![Vec::new(); n],
            index: vec![HashMap::new(); n],
        }
    }

    /// One cell in each dimension.
    pub fn terminal(truncation: usize) -> Self {
        let mut g = Self::new(truncation);
        g.add_cell(0, "*".into(), None).unwrap();
        for d in 1..=truncation {
            g.add_cell(d, "*".into(), Some(("*".into(), "*".into())))
                .unwrap();
        }
        g
    }

    pub fn truncation(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    pub fn label(&self, dim: usize, i: usize) -> &str {
        &self.cells[dim][i]
    }

    pub fn lookup(&self, dim: usize, label: &str) -> Option<usize> {
        self.index.get(dim)?.get(label).copied()
    }

    pub fn source(&self, dim: usize, i: usize) -> usize {
        self.src[dim][i]
    }

    pub fn target(&self, dim: usize, i: usize) -> usize {
        self.tgt[dim][i]
    }

    pub fn face(&self, side: Side, dim: usize, i: usize) -> usize {
        match side {
            Side::Source => self.src[dim][i],
            Side::Target => self.tgt[dim][i],
        }
    }

    /// Adds a cell; faces are labels of existing cells one dimension down.
    pub fn add_cell(
        &mut self,
        dim: usize,
        label: String,
        faces: Option<(String, String)>,
    ) -> Result<usize, GlobularError> {
        if dim > self.truncation() {
            return Err(GlobularError::DimensionOutOfRange(dim, self.truncation()));
        }
        if self.index[dim].contains_key(&label) {
            return Err(GlobularError::DuplicateLabel(label, dim));
        }
        let (s, t) = match (dim, faces) {
            (0, _) => (0, 0),
            (_, None) => return Err(GlobularError::MissingFaces(label, dim)),
            (_, Some((s, t))) => {
                let find = |l: &str| {
                    self.lookup(dim - 1, l)
                        .ok_or_else(|| GlobularError::UnknownCell(l.to_string(), dim - 1))
                };
                (find(&s)?, find(&t)?)
            }
        };
        let i = self.cells[dim].len();
        self.index[dim].insert(label.clone(), i);
        self.cells[dim].push(label);
        self.src[dim].push(s);
        self.tgt[dim].push(t);
        Ok(i)
    }

    /// Overwrites a source map entry without any check (for negative tests).
    pub fn set_source_unchecked(&mut self, dim: usize, i: usize, s: usize) {
        self.src[dim][i] = s;
    }

    /// All violations of `ss = st` and `ts = tt`.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for d in 2..self.cells.len() {
            for i in 0..self.cells[d].len() {
                let (s, t) = (self.src[d][i], self.tgt[d][i]);
                if self.src[d - 1][s] != self.src[d - 1][t] {
                    out.push(Violation {
                        dim: d,
                        label: self.cells[d][i].clone(),
                        equation: "ss = st",
                    });
                }
                if self.tgt[d - 1][s] != self.tgt[d - 1][t] {
                    out.push(Violation {
                        dim: d,
                        label: self.cells[d][i].clone(),
                        equation: "ts = tt",
                    });
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), GlobularError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(GlobularError::NotGlobular(v))
        }
    }

    /// Parses the line format `dim label src tgt` (`-` for faces of
    /// objects, `#` starts a comment) and validates globularity.
    pub fn parse(text: &str) -> Result<Self, GlobularError> {
        let mut rows = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| GlobularError::Parse {
                line: n + 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(err("expected `dim label src tgt`"));
            }
            let dim: usize = parts[0].parse().map_err(|_| err("bad dimension"))?;
            let faces = if dim == 0 {
                if parts[2] != "-" || parts[3] != "-" {
                    return Err(err("objects take `-` for source and target"));
                }
                None
            } else {
                Some((parts[2].to_string(), parts[3].to_string()))
            };
            rows.push((n + 1, dim, parts[1].to_string(), faces));
        }
        let top = rows.iter().map(|r| r.1).max().unwrap_or(0);
        let mut g = Self::new(top);
        rows.sort_by_key(|r| r.1);
        for (line, dim, label, faces) in rows {
            g.add_cell(dim, label, faces)
                .map_err(|e| GlobularError::Parse {
                    line,
                    msg: e.to_string(),
                })?;
        }
        g.check()?;
        Ok(g)
    }
}

impl fmt::Display for FiniteGlobularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, layer) in self.cells.iter().enumerate() {
            for (i, label) in layer.iter().enumerate() {
                if d == 0 {
                    writeln!(f, "0 {label} - -")?;
                } else {
                    let s = &self.cells[d - 1][self.src[d][i]];
                    let t = &self.cells[d - 1][self.tgt[d][i]];
                    writeln!(f, "{d} {label} {s} {t}")?;
                }
            }
        }
        Ok(())
    }
}

/// A map of globular sets, as per-dimension index vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobularMap {
    pub images: Vec<Vec<usize>>,
}

impl GlobularMap {
    pub fn is_globular(&self, from: &FiniteGlobularSet, to: &FiniteGlobularSet) -> bool {
        (0..=from.truncation()).all(|d| {
            from.count(d) == self.images.get(d).map_or(0, Vec::len)
                && (0..from.count(d)).all(|i| {
                    let j = self.images[d][i];
                    j < to.count(d)
                        && (d == 0
                            || (self.images[d - 1][from.source(d, i)] == to.source(d, j)
                                && self.images[d - 1][from.target(d, i)] == to.target(d, j)))
                })
        })
    }
}

/// All globular maps `from → to`, by backtracking in dimension order.
pub fn hom(from: &FiniteGlobularSet, to: &FiniteGlobularSet) -> Vec<GlobularMap> {
    let top = from.truncation();
    if (0..=top).any(|d| from.count(d) > 0 && d > to.truncation()) {
        return Vec::new();
    }
    let order: Vec<(usize, usize)> = (0..=top)
        .flat_map(|d| (0..from.count(d)).map(move |i| (d, i)))
        .collect();
    let mut images: Vec<Vec<usize>> = (0..=top).map(|d| vec![0; from.count(d)]).collect();
    let mut out = Vec::new();
    fn go(
        at: usize,
        order: &[(usize, usize)],
        from: &FiniteGlobularSet,
        to: &FiniteGlobularSet,
        images: &mut Vec<Vec<usize>>,
        out: &mut Vec<GlobularMap>,
    ) {
        let Some(&(d, i)) = order.get(at) else {
            out.push(GlobularMap {
                images: images.clone(),
            });
            return;
        };
        for j in 0..to.count(d) {
            if d > 0
                && (images[d - 1][from.source(d, i)] != to.source(d, j)
                    || images[d - 1][from.target(d, i)] != to.target(d, j))
            {
                continue;
            }
            images[d][i] = j;
            go(at + 1, order, from, to, images, out);
        }
    }
    go(0, &order, from, to, &mut images, &mut out);
    out
}

/// `GSet(π̂, X)`.
pub fn hom_set(pi: &PastingDiagram, x: &FiniteGlobularSet) -> Vec<GlobularMap> {
    hom(&pi.shape().globular, x)
}

/// A cell of the free strict ω-category: a pasting diagram labelled in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeCell {
    pub diagram: PastingDiagram,
    pub labels: GlobularMap,
}

impl FreeCell {
    /// The source or target, induced by precomposing with `σ` or `τ`.
    pub fn face(&self, side: Side) -> Option<FreeCell> {
        if self.diagram.dimension() == 0 {
            return None;
        }
        let boundary = self.diagram.boundary().ok()?;
        let emb = self.diagram.embedding(side).ok()?;
        let outer = self.diagram.shape();
        let inner = boundary.shape();
        let mut images: Vec<Vec<usize>> = (0..=inner.globular.truncation())
            .map(|d| vec![0; inner.count(d)])
            .collect();
        for c in &inner.cells {
            let d = c.dim();
            let i = inner.globular.lookup(d, &c.to_string())?;
            let j = outer.globular.lookup(d, &emb[c].to_string())?;
            images[d][i] = self.labels.images[d][j];
        }
        Some(FreeCell {
            diagram: boundary,
            labels: GlobularMap { images },
        })
    }
}

/// The slice of `(TX)_n` with at most `max_leaves` leaves per diagram.
pub fn free_strict_cells(x: &FiniteGlobularSet, n: usize, max_leaves: usize) -> Vec<FreeCell> {
    PastingDiagram::enumerate(n, max_leaves)
        .into_iter()
        .flat_map(|pi| {
            hom_set(&pi, x).into_iter().map(move |labels| FreeCell {
                diagram: pi.clone(),
                labels,
            })
        })
        .collect()
}
