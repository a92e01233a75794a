//! Membership in the pointed suboperad `P` of the endomorphism operad of the
//! tower, truncated presentations of `P`, and the normality, contractibility
//! and closure checks.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::kernel::{def_eq, normalize, ContextMorphism, Term};
use crate::par::{self, Parallelism};
use crate::pasting::{PastingDiagram, Side};
use crate::synth::{
    self, compose_on_top, compose_operations, contract, Operation, SynthError, SystemOfCompositions,
};
use crate::tower::IdentityTower;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub check: &'static str,
    pub level: usize,
    pub detail: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at level {}: {}", self.check, self.level, self.detail)
    }
}

/// `f ∘ r_π ≡ r_{ι_n}`, recursively on the boundary operations.
pub fn check_pointed(tower: &IdentityTower, op: &Operation) -> Result<(), CheckFailure> {
    let n = op.dim();
    let fail = |detail: String| CheckFailure {
        check: "pointed",
        level: n,
        detail,
    };
    let r = tower.pointing(&op.shape).map_err(|e| fail(e.to_string()))?;
    let r_iota = tower
        .pointing(&PastingDiagram::iota(n))
        .map_err(|e| fail(e.to_string()))?;
    let around = op
        .top
        .compose(&r.morphism)
        .map_err(|e| fail(e.to_string()))?;
    for (i, (a, b)) in around
        .components
        .iter()
        .zip(&r_iota.morphism.components)
        .enumerate()
    {
        if !def_eq(a, b) {
            return Err(fail(format!(
                "component {} is {}",
                op.top.target.name(i),
                tower.point().print_term(&normalize(a))
            )));
        }
    }
    for side in [Side::Source, Side::Target] {
        if let Some(face) = op.face(side) {
            check_pointed(tower, face)?;
        }
    }
    Ok(())
}

/// The `σ`/`τ` squares commute at every level, and the boundary operations
/// are themselves globular.
pub fn check_serial_commutativity(
    tower: &IdentityTower,
    op: &Operation,
) -> Result<(), CheckFailure> {
    let n = op.dim();
    let fail = |detail: String| CheckFailure {
        check: "serial",
        level: n,
        detail,
    };
    if n == 0 {
        return if op.source.is_none() && op.target.is_none() {
            Ok(())
        } else {
            Err(fail("0-dimensional operation with boundaries".into()))
        };
    }
    let iota = tower
        .indexed(&PastingDiagram::iota(n))
        .map_err(|e| fail(e.to_string()))?;
    let ctx = tower.indexed(&op.shape).map_err(|e| fail(e.to_string()))?;
    let boundary = op.shape.boundary().map_err(|e| fail(e.to_string()))?;
    for side in [Side::Source, Side::Target] {
        let Some(face) = op.face(side) else {
            return Err(fail(format!("missing {side:?} operation")));
        };
        if face.shape != boundary {
            return Err(fail(format!("{side:?} operation has shape {}", face.shape)));
        }
        let lhs = iota
            .projection(side)
            .unwrap()
            .compose(&op.top)
            .map_err(|e| fail(e.to_string()))?;
        let rhs = face
            .top
            .compose(ctx.projection(side).unwrap())
            .map_err(|e| fail(e.to_string()))?;
        if !lhs.def_eq(&rhs) {
            return Err(fail(format!("{side:?} square does not commute")));
        }
    }
    let (s, t) = (op.source.as_ref().unwrap(), op.target.as_ref().unwrap());
    if n >= 2 {
        for side in [Side::Source, Side::Target] {
            if !s.face(side).unwrap().equiv(t.face(side).unwrap()) {
                return Err(fail(format!("boundary operations disagree on {side:?}")));
            }
        }
    }
    check_serial_commutativity(tower, s)?;
    check_serial_commutativity(tower, t)
}

/// Both membership predicates of `P`.
pub fn check_member(tower: &IdentityTower, op: &Operation) -> Result<(), CheckFailure> {
    check_serial_commutativity(tower, op)?;
    check_pointed(tower, op)
}

/// Finitely many operations of `P`, filed by shape.
#[derive(Debug, Clone, Default)]
pub struct OperadTruncation {
    pub max_dim: usize,
    pub max_leaves: usize,
    fibers: BTreeMap<PastingDiagram, Vec<Arc<Operation>>>,
    keys: HashSet<(PastingDiagram, Vec<Term>)>,
}

impl OperadTruncation {
    pub fn new(max_dim: usize, max_leaves: usize) -> Self {
        OperadTruncation {
            max_dim,
            max_leaves,
            ..Default::default()
        }
    }

    /// Adds `op` unless its shape is out of bounds or an equal operation is
    /// present. Returns whether it was added.
    pub fn insert(&mut self, op: Arc<Operation>) -> bool {
        if op.dim() > self.max_dim || op.shape.leaf_count() > self.max_leaves {
            return false;
        }
        let key = (
            op.shape.clone(),
            op.top.components.iter().map(normalize).collect(),
        );
        if !self.keys.insert(key) {
            return false;
        }
        self.fibers.entry(op.shape.clone()).or_default().push(op);
        true
    }

    /// Adds without deduplication, for injecting test operations.
    pub fn insert_raw(&mut self, op: Arc<Operation>) {
        self.fibers.entry(op.shape.clone()).or_default().push(op);
    }

    pub fn clear_fiber(&mut self, pi: &PastingDiagram) {
        self.fibers.remove(pi);
        self.keys.retain(|(s, _)| s != pi);
    }

    pub fn fiber(&self, pi: &PastingDiagram) -> &[Arc<Operation>] {
        self.fibers.get(pi).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.fibers.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn operations(&self) -> impl Iterator<Item = &Arc<Operation>> {
        self.fibers.values().flatten()
    }

    pub fn shapes(&self) -> impl Iterator<Item = &PastingDiagram> {
        self.fibers.keys()
    }
}

/// The synthesized truncation: the point, identities, `i_n` and `m_n`.
pub fn synthesized_truncation(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    max_leaves: usize,
) -> OperadTruncation {
    let mut t = OperadTruncation::new(soc.depth(), max_leaves);
    t.insert(Operation::point(tower));
    for n in 1..=soc.depth() {
        t.insert(Operation::identity(tower, n));
        t.insert(soc.unit(n).clone());
        t.insert(soc.binary(n).clone());
    }
    t
}

/// A named generator for closures.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub op: Arc<Operation>,
}

/// `star∘star` as an operation of shape `ι_n` with identity boundaries.
/// `star` itself swaps source and target, so it is not an operation of `P`.
pub fn double_dual(tower: &IdentityTower, n: usize) -> Result<Arc<Operation>, SynthError> {
    let star = synth::star(tower, n)?;
    let id = Operation::identity(tower, n - 1);
    Ok(Arc::new(Operation {
        shape: PastingDiagram::iota(n),
        top: star.compose(&star)?,
        source: Some(id.clone()),
        target: Some(id),
    }))
}

/// Identities, units and binary composites for dimensions `1..=max_dim`,
/// plus `star∘star` when `with_duals`.
pub fn generators(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    max_dim: usize,
    with_duals: bool,
) -> Result<Vec<Generator>, SynthError> {
    let mut out = Vec::new();
    for n in 1..=max_dim {
        out.push(Generator {
            name: format!("id{n}"),
            op: Operation::identity(tower, n),
        });
        out.push(Generator {
            name: format!("i{n}"),
            op: soc.unit(n).clone(),
        });
        out.push(Generator {
            name: format!("m{n}"),
            op: soc.binary(n).clone(),
        });
        if with_duals {
            out.push(Generator {
                name: format!("ss{n}"),
                op: double_dual(tower, n)?,
            });
        }
    }
    Ok(out)
}

/// Operadic terms of depth at most `depth` over the generators: depth 0 is
/// the generators, depth `k` substitutes depth `k-1` terms into the top
/// cells of a generator. Boundary-incompatible substitutions are skipped.
pub fn closure(
    tower: &IdentityTower,
    gens: &[Generator],
    depth: usize,
    max_dim: usize,
    max_leaves: usize,
    mode: Parallelism,
) -> Result<OperadTruncation, SynthError> {
    let mut trunc = OperadTruncation::new(max_dim, max_leaves);
    trunc.insert(Operation::point(tower));
    for g in gens {
        trunc.insert(g.op.clone());
    }
    let mut layer: Vec<Arc<Operation>> = trunc.operations().cloned().collect();
    for _ in 0..depth {
        let mut by_dim: BTreeMap<usize, Vec<Arc<Operation>>> = BTreeMap::new();
        for op in &layer {
            by_dim.entry(op.dim()).or_default().push(op.clone());
        }
        let mut jobs: Vec<(Arc<Operation>, Vec<Arc<Operation>>)> = Vec::new();
        for g in gens {
            let n = g.op.dim();
            let tops = g.op.shape.cells().iter().filter(|c| c.dim() == n).count();
            let choices = by_dim.get(&n).map_or(&[][..], Vec::as_slice);
            for combo in product(choices, tops) {
                jobs.push((g.op.clone(), combo));
            }
        }
        let results = par::map(mode, &jobs, |(theta, ops)| {
            match compose_on_top(tower, theta, ops) {
                Ok(op) => Ok(Some(Arc::new(op))),
                Err(SynthError::BoundaryMismatch(_)) => Ok(None),
                Err(e) => Err(e),
            }
        });
        let mut next = Vec::new();
        for r in results {
            if let Some(op) = r? {
                if trunc.insert(op.clone()) {
                    next.push(op);
                }
            }
        }
        layer.extend(next);
    }
    Ok(trunc)
}

fn product(choices: &[Arc<Operation>], k: usize) -> Vec<Vec<Arc<Operation>>> {
    let mut out: Vec<Vec<Arc<Operation>>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Parses an operation expression:
///
/// ```text
/// expr ::= atom | atom(expr, ...)
/// atom ::= point | id<n> | i<n> | m<n> | ss<n>
/// ```
///
/// `θ(ψ1, ..., ψk)` substitutes the `ψ`s into the top cells of `θ`.
pub fn parse_operation(tower: &IdentityTower, src: &str) -> Result<Arc<Operation>, SynthError> {
    let mut p = ExprParser {
        tower,
        src,
        pos: 0,
        soc: None,
    };
    let op = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(op)
}

struct ExprParser<'a> {
    tower: &'a IdentityTower,
    src: &'a str,
    pos: usize,
    soc: Option<SystemOfCompositions>,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> SynthError {
        SynthError::Expression {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Arc<Operation>, SynthError> {
        let head = self.atom()?;
        if !self.eat('(') {
            return Ok(head);
        }
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        if !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Arc::new(compose_on_top(self.tower, &head, &args)?))
    }

    fn atom(&mut self) -> Result<Arc<Operation>, SynthError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let letters = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        let digits = rest[letters..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - letters);
        let (name, num) = (&rest[..letters], &rest[letters..letters + digits]);
        if name == "point" && num.is_empty() {
            self.pos += letters;
            return Ok(Operation::point(self.tower));
        }
        let n: usize = num
            .parse()
            .map_err(|_| self.error("expected an operation name"))?;
        if n == 0 || n > self.tower.truncation() {
            return Err(self.error("dimension out of range"));
        }
        self.pos += letters + digits;
        match name {
            "id" => Ok(Operation::identity(self.tower, n)),
            "i" => Ok(self.soc(n)?.unit(n).clone()),
            "m" => Ok(self.soc(n)?.binary(n).clone()),
            "ss" => double_dual(self.tower, n),
            _ => {
                self.pos = start;
                Err(self.error("unknown operation"))
            }
        }
    }

    fn soc(&mut self, n: usize) -> Result<&SystemOfCompositions, SynthError> {
        if self.soc.as_ref().is_none_or(|s| s.depth() < n) {
            self.soc = Some(synth::system_of_compositions(self.tower, n)?);
        }
        Ok(self.soc.as_ref().unwrap())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportLine {
    pub pass: bool,
    pub check: String,
    pub diagram: String,
    pub detail: String,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} {} {}",
            self.check, self.diagram, self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub lines: Vec<ReportLine>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub pass: usize,
    pub fail: usize,
}

impl Report {
    pub fn push(&mut self, pass: bool, check: &str, diagram: &str, detail: impl Into<String>) {
        self.lines.push(ReportLine {
            pass,
            check: check.to_string(),
            diagram: diagram.to_string(),
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.pass).count()
    }

    /// Pass and fail counts per check name.
    pub fn summary(&self) -> BTreeMap<String, CheckCounts> {
        let mut m: BTreeMap<String, CheckCounts> = BTreeMap::new();
        for l in &self.lines {
            let c = m.entry(l.check.clone()).or_default();
            if l.pass {
                c.pass += 1;
            } else {
                c.fail += 1;
            }
        }
        m
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The fiber over `⋆` is exactly the identity, and every element that
/// commutes with the pointing is the identity.
pub fn check_normal(tower: &IdentityTower, trunc: &OperadTruncation) -> Report {
    let mut r = Report::default();
    let star = PastingDiagram::star();
    let fiber = trunc.fiber(&star);
    let id = ContextMorphism::identity(tower.point().clone());
    r.push(
        fiber.len() == 1,
        "normal",
        "*",
        format!("fiber has {} element(s)", fiber.len()),
    );
    for (i, op) in fiber.iter().enumerate() {
        let pointed = check_pointed(tower, op).is_ok();
        let is_id = op.top.def_eq(&id);
        r.push(
            pointed == is_id && is_id,
            "normal",
            "*",
            format!(
                "element {i}: {} pointed={pointed} identity={is_id}",
                op.print_cell()
            ),
        );
    }
    r
}

/// Result of a contractibility sweep.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepOutcome {
    pub report: Report,
    pub diagrams: usize,
    pub pairs: usize,
    pub witnesses: usize,
    pub pool: usize,
}

/// For every `π` with `1 <= dim π <= max_dim` and at most `max_leaves`
/// leaves, and every pair of operations over `∂π` in `trunc` with equal
/// boundaries, contracts the pair and checks the witness is in `P`.
pub fn check_contractible(
    tower: &IdentityTower,
    trunc: &OperadTruncation,
    max_dim: usize,
    max_leaves: usize,
    mode: Parallelism,
) -> SweepOutcome {
    let mut jobs = Vec::new();
    let mut diagrams = 0;
    for d in 1..=max_dim {
        for pi in PastingDiagram::enumerate(d, max_leaves) {
            diagrams += 1;
            let boundary = pi.boundary().expect("positive dimension");
            let fiber = trunc.fiber(&boundary);
            for a in fiber {
                for b in fiber {
                    let parallel = d < 2
                        || [Side::Source, Side::Target]
                            .iter()
                            .all(|&s| a.face(s).unwrap().equiv(b.face(s).unwrap()));
                    if parallel {
                        jobs.push((pi.clone(), a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    let lines = par::map(mode, &jobs, |(pi, a, b)| {
        let pair = format!("{} | {}", a.print_cell(), b.print_cell());
        match contract(tower, pi, a, b) {
            Ok(op) => match check_member(tower, &op) {
                Ok(()) => (true, format!("size={} {pair}", op.cell().size())),
                Err(f) => (false, format!("{f} {pair}")),
            },
            Err(e) => (false, format!("{e} {pair}")),
        }
        .pipe(|(pass, detail)| ReportLine {
            pass,
            check: "contractible".into(),
            diagram: pi.to_string(),
            detail,
        })
    });
    let witnesses = lines.iter().filter(|l| l.pass).count();
    SweepOutcome {
        report: Report { lines },
        diagrams,
        pairs: jobs.len(),
        witnesses,
        pool: trunc.len(),
    }
}

trait Pipe: Sized {
    fn pipe<R>(self, f: impl FnOnce(Self) -> R) -> R {
        f(self)
    }
}

impl<T> Pipe for T {}

/// Every operation is in `P`, and composing with identities on either side
/// gives the operation back.
pub fn check_closure(tower: &IdentityTower, trunc: &OperadTruncation, mode: Parallelism) -> Report {
    let ops: Vec<Arc<Operation>> = trunc.operations().cloned().collect();
    let lines = par::map(mode, &ops, |op| {
        let shape = op.shape.to_string();
        let mut out = Vec::new();
        let member = check_member(tower, op);
        out.push(ReportLine {
            pass: member.is_ok(),
            check: "member".into(),
            diagram: shape.clone(),
            detail: member
                .err()
                .map_or_else(|| op.print_cell(), |f| f.to_string()),
        });
        let units: BTreeMap<_, _> = op
            .shape
            .cells()
            .into_iter()
            .map(|c| {
                let d = c.dim();
                (c, Operation::identity(tower, d))
            })
            .collect();
        let right = compose_operations(tower, op, &units).map(|r| r.equiv(op));
        out.push(ReportLine {
            pass: matches!(right, Ok(true)),
            check: "unit-right".into(),
            diagram: shape.clone(),
            detail: format!("{right:?}"),
        });
        let n = op.dim();
        let left = compose_on_top(
            tower,
            &Operation::identity(tower, n),
            std::slice::from_ref(op),
        )
        .map(|l| l.equiv(op));
        out.push(ReportLine {
            pass: matches!(left, Ok(true)),
            check: "unit-left".into(),
            diagram: shape,
            detail: format!("{left:?}"),
        });
        out
    });
    Report {
        lines: lines.into_iter().flatten().collect(),
    }
}
