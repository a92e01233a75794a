//! Pasting diagrams: the cells of `T1`, their boundaries, the globular shapes
//! they index, grafting (the multiplication of `T`) and bounded enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::globular::FiniteGlobularSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PasteError {
    #[error("boundary of a 0-dimensional diagram")]
    BoundaryOfPoint,
    #[error("children of a {0}-dimensional node must have dimension {1}")]
    ChildDimension(usize, usize),
    #[error("assignment missing cell {0}")]
    MissingCell(CellAddr),
    #[error("cell {cell} of dimension {expected} assigned a diagram of dimension {found}")]
    AssignmentDimension {
        cell: CellAddr,
        expected: usize,
        found: usize,
    },
    #[error("assignment is not globular at cell {0}")]
    AssignmentBoundary(CellAddr),
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An element of `(T1)_n`: `⋆` in dimension 0, otherwise an ordered list of
/// diagrams one dimension down. The dimension is stored explicitly since the
/// empty list is legal in every positive dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PastingDiagram {
    dim: usize,
    children: Vec<PastingDiagram>,
}

impl PastingDiagram {
    pub fn star() -> Self {
        PastingDiagram {
            dim: 0,
            children: Vec::new(),
        }
    }

    /// The empty list in dimension `dim >= 1`.
    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "the empty list needs a positive dimension");
        PastingDiagram {
            dim,
            children: Vec::new(),
        }
    }

    /// A non-empty list; the dimension is one more than the children's.
    pub fn node(children: Vec<PastingDiagram>) -> Result<Self, PasteError> {
        let Some(first) = children.first() else {
            return Ok(Self::empty(1));
        };
        Self::node_with_dim(first.dim + 1, children)
    }

    pub fn node_with_dim(dim: usize, children: Vec<PastingDiagram>) -> Result<Self, PasteError> {
        if dim == 0 {
            return Err(PasteError::ChildDimension(0, 0));
        }
        if children.iter().any(|c| c.dim + 1 != dim) {
            return Err(PasteError::ChildDimension(dim, dim - 1));
        }
        Ok(PastingDiagram { dim, children })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn children(&self) -> &[PastingDiagram] {
        &self.children
    }

    pub fn is_star(&self) -> bool {
        self.dim == 0
    }

    /// `ι_n = (⋯(⋆)⋯)`.
    pub fn iota(n: usize) -> Self {
        let mut d = Self::star();
        for k in 1..=n {
            d = PastingDiagram {
                dim: k,
                children: vec![d],
            };
        }
        d
    }

    /// `0_n = (⋯()⋯)`, the shape of identity cells.
    pub fn zero_diagram(n: usize) -> Self {
        assert!(n >= 1, "0_n is defined for n >= 1");
        let mut d = Self::empty(1);
        for k in 2..=n {
            d = PastingDiagram {
                dim: k,
                children: vec![d],
            };
        }
        d
    }

    /// `2_n = (⋯(⋆,⋆)⋯)`, the shape of binary composition.
    pub fn two_diagram(n: usize) -> Self {
        assert!(n >= 1, "2_n is defined for n >= 1");
        let mut d = PastingDiagram {
            dim: 1,
            children: vec![Self::star(), Self::star()],
        };
        for k in 2..=n {
            d = PastingDiagram {
                dim: k,
                children: vec![d],
            };
        }
        d
    }

    /// The common source and target `∂π`.
    pub fn boundary(&self) -> Result<Self, PasteError> {
        match self.dim {
            0 => Err(PasteError::BoundaryOfPoint),
            1 => Ok(Self::star()),
            _ => Ok(PastingDiagram {
                dim: self.dim - 1,
                children: self
                    .children
                    .iter()
                    .map(|c| c.boundary())
                    .collect::<Result<_, _>>()?,
            }),
        }
    }

    /// Leaves of the underlying rose tree: `⋆` atoms and empty lists.
    pub fn leaf_count(&self) -> usize {
        if self.dim == 0 || self.children.is_empty() {
            1
        } else {
            self.children.iter().map(Self::leaf_count).sum()
        }
    }

    pub fn star_count(&self) -> usize {
        if self.dim == 0 {
            1
        } else {
            self.children.iter().map(Self::star_count).sum()
        }
    }

    pub fn node_count(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            1 + self.children.iter().map(Self::node_count).sum::<usize>()
        }
    }

    fn max_depth(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            1 + self.children.iter().map(Self::max_depth).max().unwrap_or(0)
        }
    }

    /// Cells of the shape `π̂`, in flattening order: the objects of a node,
    /// then the cells of each hom left to right.
    pub fn cells(&self) -> Vec<CellAddr> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_cells(self, &mut path, &mut out);
        out
    }

    /// Cells that are not a face of any other cell, in flattening order.
    pub fn maximal_cells(&self) -> Vec<CellAddr> {
        let cells = self.cells();
        let faces: std::collections::BTreeSet<CellAddr> = cells
            .iter()
            .flat_map(|c| [c.source(), c.target()])
            .flatten()
            .collect();
        cells.into_iter().filter(|c| !faces.contains(c)).collect()
    }

    pub fn shape(&self) -> ShapeGlobularSet {
        ShapeGlobularSet::new(self)
    }

    /// The source embedding `σ : ∂π̂ → π̂` as a map on cell addresses.
    pub fn source_embedding(&self) -> Result<BTreeMap<CellAddr, CellAddr>, PasteError> {
        self.embedding(Side::Source)
    }

    /// The target embedding `τ : ∂π̂ → π̂`.
    pub fn target_embedding(&self) -> Result<BTreeMap<CellAddr, CellAddr>, PasteError> {
        self.embedding(Side::Target)
    }

    pub fn embedding(&self, side: Side) -> Result<BTreeMap<CellAddr, CellAddr>, PasteError> {
        match self.dim {
            0 => Err(PasteError::BoundaryOfPoint),
            1 => {
                let obj = match side {
                    Side::Source => 0,
                    Side::Target => self.children.len(),
                };
                Ok(BTreeMap::from([(
                    CellAddr::object(0),
                    CellAddr::object(obj),
                )]))
            }
            _ => {
                let mut map = BTreeMap::new();
                for j in 0..=self.children.len() {
                    map.insert(CellAddr::object(j), CellAddr::object(j));
                }
                for (i, child) in self.children.iter().enumerate() {
                    for (a, b) in child.embedding(side)? {
                        map.insert(a.under(i), b.under(i));
                    }
                }
                Ok(map)
            }
        }
    }

    /// Grafting `φ ∘ π`: substitute into each cell of `π̂` the diagram the
    /// assignment gives it.
    pub fn substitute(&self, assignment: &CellAssignment) -> Result<Self, PasteError> {
        Ok(self.substitute_tracked(assignment)?.diagram)
    }

    /// As [`substitute`](Self::substitute), also returning for every cell `c`
    /// of `π̂` the embedding of `φ(c)`'s shape into the shape of the result.
    pub fn substitute_tracked(&self, assignment: &CellAssignment) -> Result<Grafting, PasteError> {
        assignment.validate(self)?;
        let label = |c: &CellAddr| assignment.0[c].clone();
        let (diagram, embeddings) = graft(self, &label);
        Ok(Grafting {
            diagram,
            embeddings,
        })
    }

    /// All diagrams of dimension `n` with at most `max_leaves` tree leaves, in
    /// canonical order (length, then lexicographic, of the printed form).
    /// Dimension 0 always yields `⋆` alone.
    pub fn enumerate(n: usize, max_leaves: usize) -> Vec<PastingDiagram> {
        let mut all = if n == 0 {
            vec![Self::star()]
        } else {
            enumerate_raw(n, max_leaves)
        };
        let mut keyed: Vec<(String, PastingDiagram)> =
            all.drain(..).map(|d| (d.to_string(), d)).collect();
        keyed.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        keyed.into_iter().map(|(_, d)| d).collect()
    }
}

fn enumerate_raw(n: usize, budget: usize) -> Vec<PastingDiagram> {
    if n == 0 {
        return if budget >= 1 {
            vec![PastingDiagram::star()]
        } else {
            Vec::new()
        };
    }
    if budget == 0 {
        return Vec::new();
    }
    let lower = enumerate_raw(n - 1, budget);
    let mut out = vec![PastingDiagram::empty(n)];
    let mut stack: Vec<(Vec<PastingDiagram>, usize)> = vec![(Vec::new(), budget)];
    while let Some((prefix, left)) = stack.pop() {
        for c in &lower {
            let l = c.leaf_count();
            if l <= left {
                let mut next = prefix.clone();
                next.push(c.clone());
                out.push(PastingDiagram {
                    dim: n,
                    children: next.clone(),
                });
                stack.push((next, left - l));
            }
        }
    }
    out
}

fn collect_cells(node: &PastingDiagram, path: &mut Vec<usize>, out: &mut Vec<CellAddr>) {
    if node.dim == 0 {
        out.push(CellAddr {
            path: path.clone(),
            obj: 0,
        });
        return;
    }
    for j in 0..=node.children.len() {
        out.push(CellAddr {
            path: path.clone(),
            obj: j,
        });
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        collect_cells(child, path, out);
        path.pop();
    }
}

type Embeddings = BTreeMap<CellAddr, BTreeMap<CellAddr, CellAddr>>;

fn graft(
    pi: &PastingDiagram,
    label: &dyn Fn(&CellAddr) -> PastingDiagram,
) -> (PastingDiagram, Embeddings) {
    let mut emb: Embeddings = BTreeMap::new();
    if pi.dim == 0 {
        emb.insert(
            CellAddr::object(0),
            BTreeMap::from([(CellAddr::object(0), CellAddr::object(0))]),
        );
        return (PastingDiagram::star(), emb);
    }
    let mut children = Vec::new();
    let mut offset = 0;
    emb.insert(
        CellAddr::object(0),
        BTreeMap::from([(CellAddr::object(0), CellAddr::object(0))]),
    );
    for (ci, child) in pi.children.iter().enumerate() {
        let width = label(&CellAddr::object(0).under(ci)).children.len();
        let mut parts = Vec::with_capacity(width);
        for l in 0..width {
            let component = |c: &CellAddr| label(&c.under(ci)).children[l].clone();
            parts.push(graft(child, &component));
        }
        for c in child.cells() {
            let mut map = BTreeMap::new();
            for j in 0..=width {
                map.insert(CellAddr::object(j), CellAddr::object(offset + j));
            }
            for (l, (_, sub_emb)) in parts.iter().enumerate() {
                for (a, b) in &sub_emb[&c] {
                    map.insert(a.under(l), b.under(offset + l));
                }
            }
            emb.insert(c.under(ci), map);
        }
        children.extend(parts.into_iter().map(|(d, _)| d));
        offset += width;
        emb.insert(
            CellAddr::object(ci + 1),
            BTreeMap::from([(CellAddr::object(0), CellAddr::object(offset))]),
        );
    }
    (
        PastingDiagram {
            dim: pi.dim,
            children,
        },
        emb,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

/// Address of a cell of `π̂`: the child indices leading to a node, then an
/// object index of that node. The length of the path is the cell dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddr {
    pub path: Vec<usize>,
    pub obj: usize,
}

impl CellAddr {
    pub fn object(obj: usize) -> Self {
        CellAddr {
            path: Vec::new(),
            obj,
        }
    }

    pub fn dim(&self) -> usize {
        self.path.len()
    }

    /// The same cell seen from the parent node, inside hom `i`.
    pub fn under(&self, i: usize) -> Self {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.push(i);
        path.extend_from_slice(&self.path);
        CellAddr {
            path,
            obj: self.obj,
        }
    }

    pub fn source(&self) -> Option<CellAddr> {
        self.face(Side::Source)
    }

    pub fn target(&self) -> Option<CellAddr> {
        self.face(Side::Target)
    }

    pub fn face(&self, side: Side) -> Option<CellAddr> {
        let (&head, rest) = self.path.split_first()?;
        if rest.is_empty() {
            return Some(CellAddr::object(match side {
                Side::Source => head,
                Side::Target => head + 1,
            }));
        }
        let inner = CellAddr {
            path: rest.to_vec(),
            obj: self.obj,
        }
        .face(side)?;
        Some(inner.under(head))
    }

    /// Variable name used for this cell in indexed contexts.
    pub fn var_name(&self) -> String {
        const LETTERS: [char; 5] = ['x', 'p', 'a', 'm', 'c'];
        let letter = LETTERS[self.dim().min(LETTERS.len() - 1)];
        let mut s = String::new();
        s.push(letter);
        for i in &self.path {
            s.push_str(&i.to_string());
            s.push('_');
        }
        s.push_str(&self.obj.to_string());
        s
    }
}

impl fmt::Display for CellAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{}:{}", path.join("."), self.obj)
    }
}

/// A globular map `π̂ → T1`, keyed by cell address.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellAssignment(pub BTreeMap<CellAddr, PastingDiagram>);

impl CellAssignment {
    /// Every `d`-cell labelled `ι_d`: the unit of the monad.
    pub fn iota(pi: &PastingDiagram) -> Self {
        CellAssignment(
            pi.cells()
                .into_iter()
                .map(|c| {
                    let d = c.dim();
                    (c, PastingDiagram::iota(d))
                })
                .collect(),
        )
    }

    /// Assignment on `ι_n` putting `phi` on the top cell and its iterated
    /// boundaries below.
    pub fn top_of_iota(phi: &PastingDiagram) -> Self {
        let n = phi.dimension();
        let iota = PastingDiagram::iota(n);
        let mut bounds = vec![phi.clone()];
        for _ in 0..n {
            let b = bounds
                .last()
                .unwrap()
                .boundary()
                .expect("positive dimension");
            bounds.push(b);
        }
        CellAssignment(
            iota.cells()
                .into_iter()
                .map(|c| {
                    let d = c.dim();
                    (c, bounds[n - d].clone())
                })
                .collect(),
        )
    }

    /// Labels the maximal cells of `π̂` in order and every other cell by the
    /// boundary its cofaces force.
    pub fn from_maximal(
        pi: &PastingDiagram,
        labels: &[PastingDiagram],
    ) -> Result<Self, PasteError> {
        let maximal = pi.maximal_cells();
        if labels.len() != maximal.len() {
            return Err(PasteError::LabelCount {
                expected: maximal.len(),
                found: labels.len(),
            });
        }
        let mut map: BTreeMap<CellAddr, PastingDiagram> = BTreeMap::new();
        let mut todo: Vec<(CellAddr, PastingDiagram)> =
            maximal.into_iter().zip(labels.iter().cloned()).collect();
        while let Some((c, label)) = todo.pop() {
            if label.dimension() != c.dim() {
                return Err(PasteError::AssignmentDimension {
                    expected: c.dim(),
                    found: label.dimension(),
                    cell: c,
                });
            }
            if let Some(prev) = map.get(&c) {
                if *prev != label {
                    return Err(PasteError::AssignmentBoundary(c));
                }
                continue;
            }
            if c.dim() > 0 {
                let b = label.boundary()?;
                for f in [c.source(), c.target()].into_iter().flatten() {
                    todo.push((f, b.clone()));
                }
            }
            map.insert(c, label);
        }
        let a = CellAssignment(map);
        a.validate(pi)?;
        Ok(a)
    }

    pub fn get(&self, c: &CellAddr) -> Option<&PastingDiagram> {
        self.0.get(c)
    }

    pub fn validate(&self, pi: &PastingDiagram) -> Result<(), PasteError> {
        for c in pi.cells() {
            let label = self
                .0
                .get(&c)
                .ok_or_else(|| PasteError::MissingCell(c.clone()))?;
            if label.dimension() != c.dim() {
                return Err(PasteError::AssignmentDimension {
                    cell: c.clone(),
                    expected: c.dim(),
                    found: label.dimension(),
                });
            }
            if c.dim() >= 1 {
                let b = label.boundary()?;
                for face in [c.source(), c.target()].into_iter().flatten() {
                    if self.0.get(&face) != Some(&b) {
                        return Err(PasteError::AssignmentBoundary(c.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// All globular assignments on `π̂` whose labels have at most
    /// `max_leaves` leaves each.
    pub fn enumerate(pi: &PastingDiagram, max_leaves: usize) -> Vec<CellAssignment> {
        Self::enumerate_up_to(pi, max_leaves, usize::MAX)
    }

    /// The first `limit` assignments of [`CellAssignment::enumerate`].
    pub fn enumerate_up_to(
        pi: &PastingDiagram,
        max_leaves: usize,
        limit: usize,
    ) -> Vec<CellAssignment> {
        let mut cells = pi.cells();
        cells.sort_by_key(|c| c.dim());
        // Labels of dimension `d`, grouped by their boundary.
        let mut by_boundary: Vec<BTreeMap<PastingDiagram, Vec<PastingDiagram>>> = Vec::new();
        for d in 0..=pi.dimension() {
            let mut m: BTreeMap<PastingDiagram, Vec<PastingDiagram>> = BTreeMap::new();
            if d > 0 {
                for label in PastingDiagram::enumerate(d, max_leaves) {
                    let b = label.boundary().expect("positive dimension");
                    m.entry(b).or_default().push(label);
                }
            }
            by_boundary.push(m);
        }
        let mut out = Vec::new();
        let mut current = BTreeMap::new();
        extend_assignments(&cells, 0, &by_boundary, limit, &mut current, &mut out);
        out
    }
}

fn extend_assignments(
    cells: &[CellAddr],
    at: usize,
    by_boundary: &[BTreeMap<PastingDiagram, Vec<PastingDiagram>>],
    limit: usize,
    current: &mut BTreeMap<CellAddr, PastingDiagram>,
    out: &mut Vec<CellAssignment>,
) {
    if out.len() >= limit {
        return;
    }
    let Some(c) = cells.get(at) else {
        out.push(CellAssignment(current.clone()));
        return;
    };
    let star = [PastingDiagram::star()];
    let candidates: &[PastingDiagram] = if c.dim() == 0 {
        &star
    } else {
        let s = &current[&c.source().unwrap()];
        if current[&c.target().unwrap()] != *s {
            return;
        }
        by_boundary[c.dim()].get(s).map_or(&[], Vec::as_slice)
    };
    for d in candidates {
        current.insert(c.clone(), d.clone());
        extend_assignments(cells, at + 1, by_boundary, limit, current, out);
    }
    current.remove(c);
}

/// Result of grafting: the substituted diagram and where each original
/// cell's label landed.
#[derive(Debug, Clone)]
pub struct Grafting {
    pub diagram: PastingDiagram,
    pub embeddings: BTreeMap<CellAddr, BTreeMap<CellAddr, CellAddr>>,
}

/// The globular set `π̂`, with cells identified by address.
#[derive(Debug, Clone)]
pub struct ShapeGlobularSet {
    pub diagram: PastingDiagram,
    /// Cells in flattening order.
    pub cells: Vec<CellAddr>,
    pub globular: FiniteGlobularSet,
}

impl ShapeGlobularSet {
    fn new(pi: &PastingDiagram) -> Self {
        let cells = pi.cells();
        let top = pi.dimension();
        let mut by_dim: Vec<Vec<&CellAddr>> = vec![Vec::new(); top + 1];
        for c in &cells {
            by_dim[c.dim()].push(c);
        }
        let mut g = FiniteGlobularSet::new(top);
        for (d, layer) in by_dim.iter().enumerate() {
            for c in layer {
                let faces = if d == 0 {
                    None
                } else {
                    Some((
                        c.source().unwrap().to_string(),
                        c.target().unwrap().to_string(),
                    ))
                };
                g.add_cell(d, c.to_string(), faces)
                    .expect("shape faces are added before their cofaces");
            }
        }
        ShapeGlobularSet {
            diagram: pi.clone(),
            cells,
            globular: g,
        }
    }

    pub fn count(&self, dim: usize) -> usize {
        self.globular.count(dim)
    }
}

impl fmt::Display for PastingDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tree(self, f)?;
        if self.star_count() == 0 && self.max_depth() != self.dim {
            write!(f, "@{}", self.dim)?;
        }
        Ok(())
    }
}

fn write_tree(d: &PastingDiagram, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if d.dim == 0 {
        return f.write_str("*");
    }
    f.write_str("[")?;
    for (i, c) in d.children.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write_tree(c, f)?;
    }
    f.write_str("]")
}

enum Raw {
    Star,
    List(Vec<Raw>),
}

impl Raw {
    fn star_depth(&self, depth: usize, found: &mut Option<usize>) -> Result<(), usize> {
        match self {
            Raw::Star => match found {
                Some(d) if *d != depth => Err(depth),
                _ => {
                    *found = Some(depth);
                    Ok(())
                }
            },
            Raw::List(xs) => xs.iter().try_for_each(|x| x.star_depth(depth + 1, found)),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Raw::Star => 0,
            Raw::List(xs) => 1 + xs.iter().map(Raw::depth).max().unwrap_or(0),
        }
    }

    fn build(self, dim: usize) -> Option<PastingDiagram> {
        match self {
            Raw::Star if dim == 0 => Some(PastingDiagram::star()),
            Raw::List(xs) if dim >= 1 => Some(PastingDiagram {
                dim,
                children: xs
                    .into_iter()
                    .map(|x| x.build(dim - 1))
                    .collect::<Option<_>>()?,
            }),
            _ => None,
        }
    }
}

struct DiagramParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl DiagramParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> PasteError {
        PasteError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn raw(&mut self) -> Result<Raw, PasteError> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(Raw::Star)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Raw::List(items));
                }
                loop {
                    items.push(self.raw()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Raw::List(items));
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
            }
            _ => Err(self.err("expected '*' or '['")),
        }
    }
}

impl FromStr for PastingDiagram {
    type Err = PasteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = DiagramParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let raw = p.raw()?;
        let annotated = if p.peek() == Some(b'@') {
            p.pos += 1;
            p.skip_ws();
            let start = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            let digits = std::str::from_utf8(&p.src[start..p.pos]).unwrap();
            Some(
                digits
                    .parse::<usize>()
                    .map_err(|_| p.err("expected a dimension"))?,
            )
        } else {
            None
        };
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        let mut star_depth = None;
        raw.star_depth(0, &mut star_depth)
            .map_err(|_| p.err("atoms at different depths"))?;
        let dim = match (star_depth, annotated) {
            (Some(d), Some(a)) if d != a => return Err(p.err("dimension annotation disagrees")),
            (Some(d), _) => d,
            (None, Some(a)) => a,
            (None, None) => raw.depth(),
        };
        raw.build(dim)
            .ok_or_else(|| p.err("nesting deeper than the dimension"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(s: &str) -> PastingDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(pd("*").dimension(), 0);
        assert_eq!(pd("[*,*]").dimension(), 1);
        assert_eq!(pd("[[*],[*,*]]").dimension(), 2);
        assert_eq!(pd("[]").dimension(), 1);
        assert_eq!(pd("[]@3").dimension(), 3);
    }

    #[test]
    fn boundaries() {
        assert_eq!(pd("[*,*]").boundary().unwrap(), pd("*"));
        assert_eq!(pd("[[*],[*,*]]").boundary().unwrap(), pd("[*,*]"));
        for n in 1..5 {
            assert_eq!(
                PastingDiagram::iota(n).boundary().unwrap(),
                PastingDiagram::iota(n - 1)
            );
        }
        assert_eq!(pd("*").boundary(), Err(PasteError::BoundaryOfPoint));
    }

    #[test]
    fn named_diagrams() {
        assert_eq!(PastingDiagram::iota(2), pd("[[*]]"));
        assert_eq!(PastingDiagram::zero_diagram(1), pd("[]"));
        assert_eq!(PastingDiagram::two_diagram(2), pd("[[*,*]]"));
        assert_eq!(PastingDiagram::zero_diagram(3).to_string(), "[[[]]]");
    }

    #[test]
    fn parse_print() {
        for s in ["*", "[]", "[[*],[*,*]]", "[[],[*]]", "[]@2", "[[]]@3"] {
            assert_eq!(pd(s).to_string(), s);
        }
        assert_eq!(pd(" [ [ * ] , [*, *] ] ").to_string(), "[[*],[*,*]]");
        assert!("[*,[*]]".parse::<PastingDiagram>().is_err());
        assert!("[*]@2".parse::<PastingDiagram>().is_err());
        assert!("[*".parse::<PastingDiagram>().is_err());
    }

    #[test]
    fn shape_counts() {
        let s = pd("*").shape();
        assert_eq!((s.count(0), s.globular.truncation()), (1, 0));
        let s = pd("[]").shape();
        assert_eq!((s.count(0), s.count(1)), (1, 0));
        let s = pd("[[*],[*,*]]").shape();
        assert_eq!((s.count(0), s.count(1), s.count(2)), (3, 5, 3));
        assert!(s.globular.check().is_ok());
    }

    #[test]
    fn embeddings() {
        let p = pd("[*,*]");
        let obj = CellAddr::object;
        assert_eq!(p.source_embedding().unwrap()[&obj(0)], obj(0));
        assert_eq!(p.target_embedding().unwrap()[&obj(0)], obj(2));

        // σ picks the first 1-cell of each hom, τ the last.
        let p = pd("[[*],[*,*]]");
        let s = p.source_embedding().unwrap();
        let t = p.target_embedding().unwrap();
        let one = |path: usize, o: usize| CellAddr {
            path: vec![path],
            obj: o,
        };
        assert_eq!(s[&one(0, 0)], one(0, 0));
        assert_eq!(s[&one(1, 0)], one(1, 0));
        assert_eq!(t[&one(0, 0)], one(0, 1));
        assert_eq!(t[&one(1, 0)], one(1, 2));
        for j in 0..3 {
            assert_eq!(s[&obj(j)], obj(j));
            assert_eq!(t[&obj(j)], obj(j));
        }
    }

    #[test]
    fn enumerate_small() {
        let e = PastingDiagram::enumerate(1, 3);
        let printed: Vec<String> = e.iter().map(|d| d.to_string()).collect();
        assert_eq!(printed, ["[]", "[*]", "[*,*]", "[*,*,*]"]);
        assert_eq!(PastingDiagram::enumerate(0, 0), vec![pd("*")]);
        assert_eq!(PastingDiagram::enumerate(0, 7), vec![pd("*")]);
    }

    #[test]
    fn substitute_dim_one() {
        let p = pd("[*,*]");
        let mut a = CellAssignment::iota(&p);
        a.0.insert(
            CellAddr {
                path: vec![0],
                obj: 0,
            },
            pd("[*,*,*]"),
        );
        a.0.insert(
            CellAddr {
                path: vec![1],
                obj: 0,
            },
            pd("[]"),
        );
        assert_eq!(p.substitute(&a).unwrap(), pd("[*,*,*]"));
    }

    #[test]
    fn substitute_rejects_non_globular() {
        let p = pd("[[*]]");
        let mut a = CellAssignment::iota(&p);
        a.0.insert(
            CellAddr {
                path: vec![0, 0],
                obj: 0,
            },
            pd("[[*],[*]]"),
        );
        assert!(matches!(
            p.substitute(&a),
            Err(PasteError::AssignmentBoundary(_))
        ));
    }

    #[test]
    fn unit_laws_small() {
        let p = pd("[[*],[*,*]]");
        assert_eq!(p.substitute(&CellAssignment::iota(&p)).unwrap(), p);
        let phi = pd("[[*,*],[]]");
        let a = CellAssignment::top_of_iota(&phi);
        assert_eq!(PastingDiagram::iota(2).substitute(&a).unwrap(), phi);
    }

    #[test]
    fn from_maximal_forces_faces() {
        let p = pd("[[],[*]]");
        let names: Vec<String> = p.maximal_cells().iter().map(|c| c.var_name()).collect();
        assert_eq!(names, ["p0_0", "a1_0_0"]);
        let a = CellAssignment::from_maximal(&p, &[pd("[*,*]"), pd("[[*],[*]]")]);
        assert_eq!(p.substitute(&a.unwrap()).unwrap(), pd("[[],[],[*],[*]]"));
        assert!(matches!(
            CellAssignment::from_maximal(&p, &[pd("[*]")]),
            Err(PasteError::LabelCount {
                expected: 2,
                found: 1
            })
        ));
        // Both 1-cells of `[[*,*]]` bound the same pair of 2-cells.
        let q = pd("[[*,*]]");
        let names: Vec<String> = q.maximal_cells().iter().map(|c| c.var_name()).collect();
        assert_eq!(names, ["a0_0_0", "a0_1_0"]);
        let r = CellAssignment::from_maximal(&q, &[pd("[[*]]"), pd("[[],[]]")]);
        assert!(r.is_err(), "{r:?}");
    }
}
