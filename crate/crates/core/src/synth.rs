//! Coherence synthesis. Diagonal fillers against pointings are built by
//! iterated `J`-elimination; contractions, systems of compositions, duals and
//! the named cells are all instances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::kernel::syntax::{abstract_term, abstract_type};
use crate::kernel::{
    def_eq, normalize, normalize_type, ContextMorphism, JElim, KernelError, Telescope, Term, Type,
};
use crate::operad;
use crate::pasting::{CellAddr, CellAssignment, PasteError, PastingDiagram, Side};
use crate::tower::{Elimination, IdentityTower, TowerError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Paste(#[from] PasteError),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("operation is not pointed: {0}")]
    NotPointed(String),
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("internal error while filling {problem}: {reason}")]
    Internal { problem: String, reason: String },
    #[error("unknown coherence {0}")]
    UnknownCoherence(String),
    #[error("operation expression, byte {pos}: {msg}")]
    Expression { pos: usize, msg: String },
}

/// An operation of the endomorphism operad: `top : A^π → A^{ι_n}` together
/// with its source and target operations of shape `∂π`.
#[derive(Debug, Clone)]
pub struct Operation {
    pub shape: PastingDiagram,
    pub top: ContextMorphism,
    pub source: Option<Arc<Operation>>,
    pub target: Option<Arc<Operation>>,
}

impl Operation {
    pub fn dim(&self) -> usize {
        self.shape.dimension()
    }

    /// The unique 0-dimensional operation, the identity on `(x : A)`.
    pub fn point(tower: &IdentityTower) -> Arc<Operation> {
        Arc::new(Operation {
            shape: PastingDiagram::star(),
            top: ContextMorphism::identity(tower.point().clone()),
            source: None,
            target: None,
        })
    }

    /// The identity operation of shape `ι_n`.
    pub fn identity(tower: &IdentityTower, n: usize) -> Arc<Operation> {
        let mut op = Self::point(tower);
        for k in 1..=n {
            op = Arc::new(Operation {
                shape: PastingDiagram::iota(k),
                top: ContextMorphism::identity(tower.levels[k].clone()),
                source: Some(op.clone()),
                target: Some(op),
            });
        }
        op
    }

    pub fn face(&self, side: Side) -> Option<&Arc<Operation>> {
        match side {
            Side::Source => self.source.as_ref(),
            Side::Target => self.target.as_ref(),
        }
    }

    /// The top-dimensional component.
    pub fn cell(&self) -> &Term {
        self.top.components.last().expect("levels are non-empty")
    }

    /// Same shape and definitionally equal interpretation.
    pub fn equiv(&self, other: &Operation) -> bool {
        self.shape == other.shape && self.top.def_eq(&other.top)
    }

    pub fn print_cell(&self) -> String {
        self.top.source.print_term(self.cell())
    }

    pub fn cell_type(&self) -> Type {
        let tel = &self.top.target;
        tel.ty(tel.len() - 1).subst(&self.top.components)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} |- {}",
            self.shape,
            self.top.source,
            self.print_cell()
        )
    }
}

/// Order in which cells are eliminated while filling.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Order {
    /// Highest dimension first, rightmost first within a dimension.
    #[default]
    Canonical,
    /// The linearization of the pointing's witness tree.
    Witness,
}

/// A square with a pointing `r_π` on the left and the projection dropping
/// the last entries of `target` on the right.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    pub shape: PastingDiagram,
    pub target: Arc<Telescope>,
    /// Number of entries the right-hand projection keeps.
    pub kept: usize,
    /// `d : (x : A) → target`.
    pub top: ContextMorphism,
    /// `k : A^π → target.prefix(kept)`.
    pub bottom: ContextMorphism,
}

impl fmt::Display for LiftingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "shape {} into {} keeping {}",
            self.shape, self.target, self.kept
        )
    }
}

/// Diagonal filler `j : A^π → target` with `j∘r_π ≡ top` and
/// `p∘j ≡ bottom`.
pub fn fill(
    tower: &IdentityTower,
    problem: &LiftingProblem,
    order: &Order,
) -> Result<ContextMorphism, SynthError> {
    let ctx = tower.indexed(&problem.shape)?;
    let pointing = tower.pointing(&problem.shape)?;
    let r = &pointing.morphism;
    let internal = |reason: String| SynthError::Internal {
        problem: problem.to_string(),
        reason,
    };
    if problem.bottom.components.len() != problem.kept
        || problem.top.components.len() != problem.target.len()
    {
        return Err(internal("arity of the square".into()));
    }
    let around = problem.bottom.compose(r)?;
    for (i, c) in around.components.iter().enumerate() {
        if !def_eq(c, &problem.top.components[i]) {
            return Err(SynthError::NotCommuting(format!(
                "component {} of {}",
                problem.target.name(i),
                problem
            )));
        }
    }
    let elim_order: Option<Vec<usize>> = match order {
        Order::Canonical => None,
        Order::Witness => Some(
            pointing
                .witness
                .linearize()
                .iter()
                .map(|c| ctx.level(c))
                .collect(),
        ),
    };
    let labels: Vec<usize> = (0..ctx.cells.len()).collect();
    let mut comps = problem.bottom.components.clone();
    for j in problem.kept..problem.target.len() {
        let goal = problem.target.ty(j).subst(&comps);
        let value = normalize(&problem.top.components[j]);
        let h = solve(
            &ctx.telescope,
            &labels,
            &goal,
            &r.components,
            &value,
            elim_order.as_deref(),
        )
        .map_err(&internal)?;
        tower
            .signature()
            .check(ctx.telescope.types(), &h, &goal)
            .map_err(|e| internal(format!("filler does not typecheck: {e}")))?;
        comps.push(h);
    }
    Ok(ContextMorphism::new(
        ctx.telescope.clone(),
        problem.target.clone(),
        comps,
    ))
}

/// A term `h` over `omega` of type `goal` with `h[point] ≡ value`.
/// `labels[l]` is the level of variable `l` in the original context.
fn solve(
    omega: &Arc<Telescope>,
    labels: &[usize],
    goal: &Type,
    point: &[Term],
    value: &Term,
    order: Option<&[usize]>,
) -> Result<Term, String> {
    let goal_nf = normalize_type(goal);
    for l in (0..omega.len()).rev() {
        if *omega.ty(l) == goal_nf && def_eq(&point[l], value) {
            return Ok(Term::Var(l));
        }
    }

    let next = match order {
        None => (0..omega.len())
            .filter(
                |&l| matches!(omega.ty(l).as_id(), Some((_, Term::Var(u), Term::Var(v))) if u != v),
            )
            .max_by_key(|&l| (omega.ty(l).level(), labels[l])),
        Some([]) => None,
        Some([first, ..]) => Some(
            labels
                .iter()
                .position(|x| x == first)
                .ok_or_else(|| format!("witness cell {first} already eliminated"))?,
        ),
    };

    let Some(c) = next else {
        // Base case: the pointing is a renaming of the context.
        let mut inverse = vec![usize::MAX; point.len()];
        for (l, p) in point.iter().enumerate() {
            match p {
                Term::Var(x) if *x < inverse.len() && inverse[*x] == usize::MAX => inverse[*x] = l,
                _ => return Err(format!("no eliminable cell left in {omega}")),
            }
        }
        return Ok(value.rename(&|x| inverse[x]));
    };

    let e = Elimination::new(omega, c).map_err(|e| e.to_string())?;
    let (u, v) = (e.src, e.tgt);
    if !def_eq(&point[v], &point[u]) || !def_eq(&point[c], &Term::refl(point[u].clone())) {
        return Err(format!("pointing is not reflexive at {}", omega.name(c)));
    }
    let kept = e.kept();
    let sub_point: Vec<Term> = kept.iter().map(|&l| point[l].clone()).collect();
    let sub_labels: Vec<usize> = kept.iter().map(|&l| labels[l]).collect();
    let sub_goal = goal.subst(&e.embed.components);
    let sub_order = order.map(|o| &o[1..]);
    let h = solve(
        &e.reduced,
        &sub_labels,
        &sub_goal,
        &sub_point,
        value,
        sub_order,
    )?;

    let g = e.rest.len();
    let mut abstracted = vec![u, v, c];
    abstracted.extend(&e.deps);
    let delta = e
        .deps
        .iter()
        .enumerate()
        .map(|(j, &d)| abstract_type(omega.ty(d), &abstracted[..3 + j], &|l| l))
        .collect();
    let motive = abstract_type(goal, &abstracted, &|l| l);
    let base_vars: Vec<usize> = (g..g + 1 + e.deps.len()).collect();
    let rest = &e.rest;
    let base = abstract_term(&h, &base_vars, &|l| rest[l]);
    Ok(Term::j(JElim {
        delta,
        motive,
        base,
        a: Term::Var(u),
        b: Term::Var(v),
        p: Term::Var(c),
        args: e.deps.iter().map(|&d| Term::Var(d)).collect(),
    }))
}

/// An operation of shape `π` with source `θ1` and target `θ2`.
pub fn contract(
    tower: &IdentityTower,
    pi: &PastingDiagram,
    theta1: &Arc<Operation>,
    theta2: &Arc<Operation>,
) -> Result<Operation, SynthError> {
    contract_with(tower, pi, theta1, theta2, &Order::Canonical)
}

pub fn contract_with(
    tower: &IdentityTower,
    pi: &PastingDiagram,
    theta1: &Arc<Operation>,
    theta2: &Arc<Operation>,
    order: &Order,
) -> Result<Operation, SynthError> {
    let n = pi.dimension();
    let boundary = pi.boundary()?;
    for th in [theta1, theta2] {
        if th.shape != boundary {
            return Err(SynthError::BoundaryMismatch(format!(
                "operation of shape {} over boundary {}",
                th.shape, boundary
            )));
        }
        if let Err(f) = operad::check_pointed(tower, th) {
            return Err(SynthError::NotPointed(f.to_string()));
        }
    }
    if n >= 2 {
        for side in [Side::Source, Side::Target] {
            let (a, b) = (theta1.face(side).unwrap(), theta2.face(side).unwrap());
            if !a.equiv(b) {
                return Err(SynthError::BoundaryMismatch(format!(
                    "{side:?} faces differ: {} vs {}",
                    a.print_cell(),
                    b.print_cell()
                )));
            }
        }
    }
    let ctx = tower.indexed(pi)?;
    let lower = theta1.top.compose(ctx.source_proj.as_ref().unwrap())?;
    let upper = theta2.top.compose(ctx.target_proj.as_ref().unwrap())?;
    let mut k = lower.components;
    k.push(upper.components.last().unwrap().clone());
    let target = tower.levels[n].clone();
    let bottom = ContextMorphism::new(ctx.telescope.clone(), tower.boundaries[n].clone(), k);
    let problem = LiftingProblem {
        shape: pi.clone(),
        target: target.clone(),
        kept: 2 * n,
        top: tower.pointing(&PastingDiagram::iota(n))?.morphism,
        bottom,
    };
    let top = fill(tower, &problem, order)?;
    Ok(Operation {
        shape: pi.clone(),
        top,
        source: Some(theta1.clone()),
        target: Some(theta2.clone()),
    })
}

/// Operadic substitution `θ∘ψ`: `ψ` assigns an operation to every cell of
/// `θ`'s shape.
pub fn compose_operations(
    tower: &IdentityTower,
    theta: &Operation,
    psi: &BTreeMap<CellAddr, Arc<Operation>>,
) -> Result<Operation, SynthError> {
    let pi = &theta.shape;
    let cells = pi.cells();
    for c in &cells {
        let op = psi
            .get(c)
            .ok_or_else(|| SynthError::BoundaryMismatch(format!("no operation at {c}")))?;
        if op.dim() != c.dim() {
            return Err(SynthError::BoundaryMismatch(format!(
                "operation of dimension {} at {c}",
                op.dim()
            )));
        }
        for side in [Side::Source, Side::Target] {
            if let Some(face) = c.face(side) {
                if !op.face(side).unwrap().equiv(&psi[&face]) {
                    return Err(SynthError::BoundaryMismatch(format!(
                        "{side:?} of the operation at {c} disagrees with {face}"
                    )));
                }
            }
        }
    }
    let shapes = CellAssignment(
        cells
            .iter()
            .map(|c| (c.clone(), psi[c].shape.clone()))
            .collect(),
    );
    let graft = pi.substitute_tracked(&shapes)?;
    let result = tower.indexed(&graft.diagram)?;
    let theta_ctx = tower.indexed(pi)?;
    let mut comps = Vec::with_capacity(cells.len());
    for c in &cells {
        let op = &psi[c];
        let inner = tower.indexed(&op.shape)?;
        let emb = &graft.embeddings[c];
        let restrict: Vec<Term> = inner
            .cells
            .iter()
            .map(|c2| Term::Var(result.level(&emb[c2])))
            .collect();
        comps.push(op.cell().subst(&restrict));
    }
    let bracket =
        ContextMorphism::new(result.telescope.clone(), theta_ctx.telescope.clone(), comps);
    let top = theta.top.compose(&bracket)?;
    let (source, target) = if pi.dimension() == 0 {
        (None, None)
    } else {
        let mut faces = Vec::with_capacity(2);
        for side in [Side::Source, Side::Target] {
            let emb = pi.embedding(side)?;
            let restricted: BTreeMap<CellAddr, Arc<Operation>> = emb
                .iter()
                .map(|(c, c2)| (c.clone(), psi[c2].clone()))
                .collect();
            let face = theta.face(side).unwrap();
            faces.push(Arc::new(compose_operations(tower, face, &restricted)?));
        }
        let t = faces.pop();
        (faces.pop(), t)
    };
    Ok(Operation {
        shape: graft.diagram,
        top,
        source,
        target,
    })
}

/// Assigns `ops[i]` to the `i`-th top-dimensional cell of `θ`'s shape (in
/// flattening order) and fills lower cells with the faces they force.
pub fn compose_on_top(
    tower: &IdentityTower,
    theta: &Operation,
    ops: &[Arc<Operation>],
) -> Result<Operation, SynthError> {
    let psi = assignment_from_top(tower, &theta.shape, ops)?;
    compose_operations(tower, theta, &psi)
}

/// Extends an assignment on the top cells of `π̂` to all cells using
/// faces; fails if two top cells force different faces on a shared cell.
pub fn assignment_from_top(
    tower: &IdentityTower,
    pi: &PastingDiagram,
    ops: &[Arc<Operation>],
) -> Result<BTreeMap<CellAddr, Arc<Operation>>, SynthError> {
    let n = pi.dimension();
    let cells = pi.cells();
    let tops: Vec<&CellAddr> = cells.iter().filter(|c| c.dim() == n).collect();
    if tops.len() != ops.len() {
        return Err(SynthError::BoundaryMismatch(format!(
            "{} has {} top cells, {} operations given",
            pi,
            tops.len(),
            ops.len()
        )));
    }
    let mut psi: BTreeMap<CellAddr, Arc<Operation>> = BTreeMap::new();
    let point = Operation::point(tower);
    for c in cells.iter().filter(|c| c.dim() == 0) {
        psi.insert(c.clone(), point.clone());
    }
    // Top-down: every lower cell is a face of some higher one, except the
    // lower cells of empty homs, which get identities.
    let mut pending: Vec<(CellAddr, Arc<Operation>)> =
        tops.into_iter().cloned().zip(ops.iter().cloned()).collect();
    while let Some((c, op)) = pending.pop() {
        if let Some(existing) = psi.get(&c) {
            if !existing.equiv(&op) {
                return Err(SynthError::BoundaryMismatch(format!(
                    "cell {c} is forced to two different operations"
                )));
            }
            continue;
        }
        if op.dim() != c.dim() {
            return Err(SynthError::BoundaryMismatch(format!(
                "operation of dimension {} at {c}",
                op.dim()
            )));
        }
        for side in [Side::Source, Side::Target] {
            if let (Some(face), Some(fop)) = (c.face(side), op.face(side)) {
                if face.dim() > 0 {
                    pending.push((face, fop.clone()));
                }
            }
        }
        psi.insert(c, op);
    }
    for c in &cells {
        if !psi.contains_key(c) {
            psi.insert(c.clone(), Operation::identity(tower, c.dim()));
        }
    }
    Ok(psi)
}

/// `i_n` (shape `0_n`) and `m_n` (shape `2_n`) for `1 <= n <= depth`.
#[derive(Debug, Clone)]
pub struct SystemOfCompositions {
    pub units: Vec<Arc<Operation>>,
    pub binary: Vec<Arc<Operation>>,
}

impl SystemOfCompositions {
    pub fn unit(&self, n: usize) -> &Arc<Operation> {
        &self.units[n - 1]
    }

    pub fn binary(&self, n: usize) -> &Arc<Operation> {
        &self.binary[n - 1]
    }

    pub fn depth(&self) -> usize {
        self.units.len()
    }
}

pub fn system_of_compositions(
    tower: &IdentityTower,
    depth: usize,
) -> Result<SystemOfCompositions, SynthError> {
    let mut units = Vec::new();
    let mut binary = Vec::new();
    for n in 1..=depth {
        let id = Operation::identity(tower, n - 1);
        units.push(Arc::new(contract(
            tower,
            &PastingDiagram::zero_diagram(n),
            &id,
            &id,
        )?));
        binary.push(Arc::new(contract(
            tower,
            &PastingDiagram::two_diagram(n),
            &id,
            &id,
        )?));
    }
    Ok(SystemOfCompositions { units, binary })
}

/// Inverses `star[n-1] : levels[n] → levels[n]` with unit and counit cells
/// `eta[n-1], eps[n-1] : levels[n] → levels[n+1]`.
#[derive(Debug, Clone)]
pub struct DualsStructure {
    pub star: Vec<ContextMorphism>,
    pub eta: Vec<ContextMorphism>,
    pub eps: Vec<ContextMorphism>,
}

impl DualsStructure {
    pub fn star(&self, n: usize) -> &ContextMorphism {
        &self.star[n - 1]
    }

    pub fn eta(&self, n: usize) -> &ContextMorphism {
        &self.eta[n - 1]
    }

    pub fn eps(&self, n: usize) -> &ContextMorphism {
        &self.eps[n - 1]
    }
}

/// `(t, s) : levels[n] → boundaries[n]`.
fn swap(tower: &IdentityTower, n: usize) -> ContextMorphism {
    let mut comps: Vec<Term> = (0..2 * n - 2).map(Term::Var).collect();
    comps.push(Term::Var(2 * n - 1));
    comps.push(Term::Var(2 * n - 2));
    ContextMorphism::new(tower.levels[n].clone(), tower.boundaries[n].clone(), comps)
}

/// `levels[n] → A^{2_n}` placing `first` then `second` as a composable pair
/// over the objects `(a, b, a)` of the top hom, where `a, b` are variables
/// of `levels[n]`.
fn pair_into_two(
    tower: &IdentityTower,
    n: usize,
    ends: (usize, usize),
    first: Term,
    second: Term,
) -> Result<ContextMorphism, SynthError> {
    let ctx = tower.indexed(&PastingDiagram::two_diagram(n))?;
    let mut comps: Vec<Term> = (0..2 * n - 2).map(Term::Var).collect();
    comps.extend([Term::Var(ends.0), Term::Var(ends.1), Term::Var(ends.0)]);
    comps.extend([first, second]);
    Ok(ContextMorphism::new(
        tower.levels[n].clone(),
        ctx.telescope.clone(),
        comps,
    ))
}

/// `[i_n] ∘ s` or `[i_n] ∘ t` on `levels[n]`.
fn unit_on_face(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    n: usize,
    side: Side,
) -> Result<ContextMorphism, SynthError> {
    let iota = tower.indexed(&PastingDiagram::iota(n))?;
    Ok(soc.unit(n).top.compose(iota.projection(side).unwrap())?)
}

/// `[m_n] ∘ (−*, id)` when `star_first`, else `[m_n] ∘ (id, −*)`.
fn composite_with_dual(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    star: &ContextMorphism,
    n: usize,
    star_first: bool,
) -> Result<ContextMorphism, SynthError> {
    let f = Term::Var(2 * n);
    let fs = star.components[2 * n].clone();
    let (s, t) = (2 * n - 2, 2 * n - 1);
    let pair = if star_first {
        pair_into_two(tower, n, (s, t), f, fs)?
    } else {
        pair_into_two(tower, n, (t, s), fs, f)?
    };
    Ok(soc.binary(n).top.compose(&pair)?)
}

/// The inverse `star : levels[n] → levels[n]` with `(s,t) ∘ star = (t,s)`.
pub fn star(tower: &IdentityTower, n: usize) -> Result<ContextMorphism, SynthError> {
    let iota = PastingDiagram::iota(n);
    fill(
        tower,
        &LiftingProblem {
            shape: iota.clone(),
            target: tower.levels[n].clone(),
            kept: 2 * n,
            top: tower.pointing(&iota)?.morphism,
            bottom: swap(tower, n),
        },
        &Order::Canonical,
    )
}

pub fn duals(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    depth: usize,
) -> Result<DualsStructure, SynthError> {
    let mut out = DualsStructure {
        star: Vec::new(),
        eta: Vec::new(),
        eps: Vec::new(),
    };
    for n in 1..=depth {
        let iota = PastingDiagram::iota(n);
        let star = star(tower, n)?;
        let r_up = tower.pointing(&PastingDiagram::iota(n + 1))?.morphism;
        let lift = |lower: ContextMorphism, upper: &ContextMorphism| {
            let mut k = lower.components;
            k.push(upper.components.last().unwrap().clone());
            let bottom =
                ContextMorphism::new(tower.levels[n].clone(), tower.boundaries[n + 1].clone(), k);
            fill(
                tower,
                &LiftingProblem {
                    shape: iota.clone(),
                    target: tower.levels[n + 1].clone(),
                    kept: 2 * n + 2,
                    top: r_up.clone(),
                    bottom,
                },
                &Order::Canonical,
            )
        };
        let eta = lift(
            unit_on_face(tower, soc, n, Side::Source)?,
            &composite_with_dual(tower, soc, &star, n, true)?,
        )?;
        let eps = lift(
            composite_with_dual(tower, soc, &star, n, false)?,
            &unit_on_face(tower, soc, n, Side::Target)?,
        )?;
        out.star.push(star);
        out.eta.push(eta);
        out.eps.push(eps);
    }
    Ok(out)
}

/// The five commuting diagrams a choice of duals must satisfy, at level `n`.
pub fn check_duals(
    tower: &IdentityTower,
    soc: &SystemOfCompositions,
    d: &DualsStructure,
    n: usize,
) -> Result<Vec<(&'static str, bool)>, SynthError> {
    let star = d.star(n);
    let up = tower.indexed(&PastingDiagram::iota(n + 1))?;
    let st = ContextMorphism::projection(tower.levels[n].clone(), tower.boundaries[n].clone());
    let s_up = up.source_proj.as_ref().unwrap();
    let t_up = up.target_proj.as_ref().unwrap();
    Ok(vec![
        (
            "(s,t) star = (t,s)",
            st.compose(star)?.def_eq(&swap(tower, n)),
        ),
        (
            "s eta = [i] s",
            s_up.compose(d.eta(n))?
                .def_eq(&unit_on_face(tower, soc, n, Side::Source)?),
        ),
        (
            "t eta = [m] (star, id)",
            t_up.compose(d.eta(n))?
                .def_eq(&composite_with_dual(tower, soc, star, n, true)?),
        ),
        (
            "t eps = [i] t",
            t_up.compose(d.eps(n))?
                .def_eq(&unit_on_face(tower, soc, n, Side::Target)?),
        ),
        (
            "s eps = [m] (id, star)",
            s_up.compose(d.eps(n))?
                .def_eq(&composite_with_dual(tower, soc, star, n, false)?),
        ),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedCoherence {
    Symmetry,
    LeftUnit,
    RightUnit,
    Assoc,
    EckmannHiltonProbe,
}

impl NamedCoherence {
    pub const ALL: [NamedCoherence; 5] = [
        NamedCoherence::Symmetry,
        NamedCoherence::LeftUnit,
        NamedCoherence::RightUnit,
        NamedCoherence::Assoc,
        NamedCoherence::EckmannHiltonProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedCoherence::Symmetry => "symmetry",
            NamedCoherence::LeftUnit => "leftUnit",
            NamedCoherence::RightUnit => "rightUnit",
            NamedCoherence::Assoc => "assoc",
            NamedCoherence::EckmannHiltonProbe => "eckmannHiltonProbe",
        }
    }
}

impl FromStr for NamedCoherence {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SynthError::UnknownCoherence(s.to_string()))
    }
}

/// A synthesized cell: the morphism into the tower, the top term and its
/// type. Inverses are not operad operations, so `operation` is optional.
#[derive(Debug, Clone)]
pub struct NamedCell {
    pub name: NamedCoherence,
    pub morphism: ContextMorphism,
    pub operation: Option<Arc<Operation>>,
}

impl NamedCell {
    pub fn context(&self) -> &Arc<Telescope> {
        &self.morphism.source
    }

    pub fn term(&self) -> &Term {
        self.morphism.components.last().unwrap()
    }

    pub fn ty(&self) -> Type {
        let tel = &self.morphism.target;
        tel.ty(tel.len() - 1).subst(&self.morphism.components)
    }
}

pub fn named_coherence(
    tower: &IdentityTower,
    name: NamedCoherence,
) -> Result<NamedCell, SynthError> {
    let soc = system_of_compositions(tower, 1)?;
    let (i1, m1) = (soc.unit(1).clone(), soc.binary(1).clone());
    let id1 = Operation::identity(tower, 1);
    let pd = |s: &str| s.parse::<PastingDiagram>().expect("literal diagram");
    let op = match name {
        NamedCoherence::Symmetry => {
            let d = duals(tower, &soc, 1)?;
            return Ok(NamedCell {
                name,
                morphism: d.star(1).clone(),
                operation: None,
            });
        }
        NamedCoherence::LeftUnit => {
            let lhs = compose_on_top(tower, &m1, &[id1.clone(), i1])?;
            contract(tower, &pd("[[*]]"), &Arc::new(lhs), &id1)?
        }
        NamedCoherence::RightUnit => {
            let lhs = compose_on_top(tower, &m1, &[i1, id1.clone()])?;
            contract(tower, &pd("[[*]]"), &Arc::new(lhs), &id1)?
        }
        NamedCoherence::Assoc => {
            let left = compose_on_top(tower, &m1, &[m1.clone(), id1.clone()])?;
            let right = compose_on_top(tower, &m1, &[id1, m1.clone()])?;
            contract(tower, &pd("[[],[],[]]"), &Arc::new(left), &Arc::new(right))?
        }
        NamedCoherence::EckmannHiltonProbe => contract(tower, &pd("[[*],[*]]"), &m1, &m1)?,
    };
    Ok(NamedCell {
        name,
        morphism: op.top.clone(),
        operation: Some(Arc::new(op)),
    })
}
