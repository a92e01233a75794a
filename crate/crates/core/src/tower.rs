//! The tower of iterated identity types over a base type, the contexts
//! `A^π` indexed by pasting diagrams, their pointings `r_π`, and the
//! decomposition of pointings into elementary reflexivity insertions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::kernel::{ContextMorphism, KernelError, Signature, Telescope, Term, Type};
use crate::pasting::{CellAddr, PastingDiagram, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("dimension {0} exceeds tower truncation {1}")]
    DimensionOverflow(usize, usize),
    #[error("unknown base type {0}")]
    UnknownBase(String),
    #[error("cannot eliminate {cell}: {reason}")]
    Elimination { cell: String, reason: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// `A^π`: one variable per cell of `π̂`, in flattening order.
#[derive(Debug)]
pub struct IndexedContext {
    pub diagram: PastingDiagram,
    pub telescope: Arc<Telescope>,
    pub cells: Vec<CellAddr>,
    index: HashMap<CellAddr, usize>,
    /// Precomposition with `σ` and `τ`, into `A^{∂π}`.
    pub source_proj: Option<ContextMorphism>,
    pub target_proj: Option<ContextMorphism>,
}

impl IndexedContext {
    pub fn level(&self, c: &CellAddr) -> usize {
        self.index[c]
    }

    pub fn projection(&self, side: Side) -> Option<&ContextMorphism> {
        match side {
            Side::Source => self.source_proj.as_ref(),
            Side::Target => self.target_proj.as_ref(),
        }
    }
}

/// The reflexive globular context of iterated identity types over `A`.
#[derive(Debug)]
pub struct IdentityTower {
    sig: Arc<Signature>,
    base: Type,
    truncation: usize,
    pub levels: Vec<Arc<Telescope>>,
    /// `boundaries[n]` is `levels[n]` without its top variable (`n >= 1`).
    pub boundaries: Vec<Arc<Telescope>>,
    /// `refl[n] : levels[n] → levels[n+1]`.
    pub refl: Vec<ContextMorphism>,
    cache: RwLock<HashMap<PastingDiagram, Arc<IndexedContext>>>,
}

impl IdentityTower {
    pub fn build(sig: Arc<Signature>, base: &str, truncation: usize) -> Result<Self, TowerError> {
        if !sig.has_base(base) {
            return Err(TowerError::UnknownBase(base.to_string()));
        }
        let mut tower = IdentityTower {
            sig,
            base: Type::base(base),
            truncation,
            levels: Vec::new(),
            boundaries: Vec::new(),
            refl: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        };
        for n in 0..=truncation {
            let ctx = tower.indexed(&PastingDiagram::iota(n))?;
            tower.levels.push(ctx.telescope.clone());
            tower.boundaries.push(Arc::new(ctx.telescope.prefix(2 * n)));
        }
        for n in 0..truncation {
            let top = 2 * n;
            let mut comps: Vec<Term> = (0..top).map(Term::Var).collect();
            comps.extend([Term::Var(top), Term::Var(top), Term::refl(Term::Var(top))]);
            tower.refl.push(ContextMorphism::new(
                tower.levels[n].clone(),
                tower.levels[n + 1].clone(),
                comps,
            ));
        }
        Ok(tower)
    }

    /// Tower over a fresh signature with the single base type `base`.
    pub fn over(base: &str, truncation: usize) -> Self {
        Self::build(Arc::new(Signature::with_base(base)), base, truncation)
            .expect("base type declared")
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn base(&self) -> &Type {
        &self.base
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `(x : A)`.
    pub fn point(&self) -> &Arc<Telescope> {
        &self.levels[0]
    }

    /// `A^π` with its source and target projections.
    pub fn indexed(&self, pi: &PastingDiagram) -> Result<Arc<IndexedContext>, TowerError> {
        if pi.dimension() > self.truncation {
            return Err(TowerError::DimensionOverflow(
                pi.dimension(),
                self.truncation,
            ));
        }
        if let Some(c) = self.cache.read().unwrap().get(pi) {
            return Ok(c.clone());
        }
        let cells = pi.cells();
        let index: HashMap<CellAddr, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let mut tel = Telescope::new();
        for c in &cells {
            let ty = match (c.source(), c.target()) {
                (Some(s), Some(t)) => {
                    let (s, t) = (index[&s], index[&t]);
                    Type::id(tel.ty(s).clone(), Term::Var(s), Term::Var(t))
                }
                _ => self.base.clone(),
            };
            tel.push(&c.var_name(), ty);
        }
        let telescope = Arc::new(tel);
        let (source_proj, target_proj) = if pi.dimension() == 0 {
            (None, None)
        } else {
            let boundary = self.indexed(&pi.boundary().expect("positive dimension"))?;
            let proj = |side: Side| {
                let emb = pi.embedding(side).expect("positive dimension");
                let comps = boundary
                    .cells
                    .iter()
                    .map(|c| Term::Var(index[&emb[c]]))
                    .collect();
                ContextMorphism::new(telescope.clone(), boundary.telescope.clone(), comps)
            };
            (Some(proj(Side::Source)), Some(proj(Side::Target)))
        };
        let ctx = Arc::new(IndexedContext {
            diagram: pi.clone(),
            telescope,
            cells,
            index,
            source_proj,
            target_proj,
        });
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry(pi.clone()).or_insert(ctx).clone())
    }

    /// `r_π : (x : A) → A^π`.
    pub fn pointing(&self, pi: &PastingDiagram) -> Result<Pointing, TowerError> {
        let ctx = self.indexed(pi)?;
        let mut comps = Vec::with_capacity(ctx.cells.len());
        pointing_components(pi, &Term::Var(0), &mut comps);
        Ok(Pointing {
            diagram: pi.clone(),
            morphism: ContextMorphism::new(self.point().clone(), ctx.telescope.clone(), comps),
            witness: witness_for(pi, &mut Vec::new()),
        })
    }

    /// The elementary reflexivity insertions that rebuild `r_π`, composed in
    /// the order the witness prescribes.
    pub fn recompose(
        &self,
        pi: &PastingDiagram,
        witness: &IMapWitness,
    ) -> Result<ContextMorphism, TowerError> {
        let ctx = self.indexed(pi)?;
        let mut tel = ctx.telescope.clone();
        let mut labels = ctx.cells.clone();
        let mut acc = ContextMorphism::identity(tel.clone());
        for cell in witness.linearize() {
            let Some(c) = labels.iter().position(|l| *l == cell) else {
                return Err(TowerError::Elimination {
                    cell: cell.to_string(),
                    reason: "cell already eliminated".into(),
                });
            };
            let e = Elimination::new(&tel, c)?;
            labels = e.labels(&labels);
            acc = acc.compose(&e.embed)?;
            tel = e.reduced.clone();
        }
        if tel.len() != 1 {
            return Err(TowerError::Elimination {
                cell: String::new(),
                reason: format!("{} variables left after the witness", tel.len()),
            });
        }
        Ok(ContextMorphism::new(
            self.point().clone(),
            acc.target.clone(),
            acc.components,
        ))
    }

    /// Checks `s∘r_n = t∘r_n = id` and that `(s,t)` drops exactly the top
    /// variable.
    pub fn check_reflexive(&self) -> Result<(), TowerError> {
        for n in 0..self.truncation {
            let up = self.indexed(&PastingDiagram::iota(n + 1))?;
            let id = ContextMorphism::identity(self.levels[n].clone());
            for side in [Side::Source, Side::Target] {
                let face = up.projection(side).unwrap().compose(&self.refl[n])?;
                if !face.def_eq(&id) {
                    return Err(TowerError::Elimination {
                        cell: format!("level {n}"),
                        reason: "face of reflexivity is not the identity".into(),
                    });
                }
            }
            self.refl[n].check(&self.sig)?;
            let st = ContextMorphism::projection(
                self.levels[n + 1].clone(),
                self.boundaries[n + 1].clone(),
            );
            if !st.is_dependent_projection()
                || self.boundaries[n + 1].len() + 1 != self.levels[n + 1].len()
            {
                return Err(TowerError::Elimination {
                    cell: format!("level {}", n + 1),
                    reason: "(s,t) is not a dependent projection".into(),
                });
            }
        }
        Ok(())
    }
}

fn pointing_components(pi: &PastingDiagram, x: &Term, out: &mut Vec<Term>) {
    if pi.is_star() {
        out.push(x.clone());
        return;
    }
    out.extend(std::iter::repeat_n(x.clone(), pi.children().len() + 1));
    let rx = Term::refl(x.clone());
    for child in pi.children() {
        pointing_components(child, &rx, out);
    }
}

fn witness_for(pi: &PastingDiagram, path: &mut Vec<usize>) -> IMapWitness {
    if pi.is_star() {
        return IMapWitness::IdentityMap;
    }
    let mut acc: Option<IMapWitness> = None;
    for (i, child) in pi.children().iter().enumerate() {
        let connect = IMapWitness::ElementaryRefl {
            level: path.len(),
            cell: CellAddr {
                path: {
                    let mut p = path.clone();
                    p.push(i);
                    p
                },
                obj: 0,
            },
        };
        path.push(i);
        let interior = witness_for(child, path);
        path.pop();
        let branch = match interior {
            IMapWitness::IdentityMap => connect,
            w => IMapWitness::Composite(vec![connect, w]),
        };
        acc = Some(match acc {
            None => branch,
            Some(prev) => IMapWitness::PairedLemma(Box::new(prev), Box::new(branch)),
        });
    }
    acc.unwrap_or(IMapWitness::IdentityMap)
}

/// How a pointing is assembled from elementary reflexivities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IMapWitness {
    IdentityMap,
    /// Inserts `cell` as `refl` of its source at the given level, together
    /// with its target.
    ElementaryRefl {
        level: usize,
        cell: CellAddr,
    },
    /// Applied first to last.
    Composite(Vec<IMapWitness>),
    /// The induced map into a pullback of two I-maps.
    PairedLemma(Box<IMapWitness>, Box<IMapWitness>),
}

impl IMapWitness {
    /// Cells to eliminate, outermost first.
    pub fn linearize(&self) -> Vec<CellAddr> {
        let mut out = Vec::new();
        self.push_linear(&mut out);
        out
    }

    fn push_linear(&self, out: &mut Vec<CellAddr>) {
        match self {
            IMapWitness::IdentityMap => {}
            IMapWitness::ElementaryRefl { cell, .. } => out.push(cell.clone()),
            IMapWitness::Composite(ws) => {
                for w in ws.iter().rev() {
                    w.push_linear(out);
                }
            }
            IMapWitness::PairedLemma(l, r) => {
                r.push_linear(out);
                l.push_linear(out);
            }
        }
    }

    pub fn elementary_count(&self) -> usize {
        match self {
            IMapWitness::IdentityMap => 0,
            IMapWitness::ElementaryRefl { .. } => 1,
            IMapWitness::Composite(ws) => ws.iter().map(Self::elementary_count).sum(),
            IMapWitness::PairedLemma(l, r) => l.elementary_count() + r.elementary_count(),
        }
    }
}

impl fmt::Display for IMapWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IMapWitness::IdentityMap => f.write_str("id"),
            IMapWitness::ElementaryRefl { level, cell } => write!(f, "r{level}@{cell}"),
            IMapWitness::Composite(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "({})", parts.join(" ; "))
            }
            IMapWitness::PairedLemma(l, r) => write!(f, "<{l}, {r}>"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pointing {
    pub diagram: PastingDiagram,
    pub morphism: ContextMorphism,
    pub witness: IMapWitness,
}

/// One `J`-elimination step on a context `Ω`: the cell `c : Id(u, v)` and
/// its target `v` are removed, `D` (everything depending on `u`, `v` or `c`)
/// is kept after the surviving copy of `u`.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub cell: usize,
    pub src: usize,
    pub tgt: usize,
    /// Levels in `Ω` of the variables that do not depend on `u`, `v`, `c`.
    pub rest: Vec<usize>,
    /// Levels in `Ω` of the dependent variables, in order.
    pub deps: Vec<usize>,
    /// `Ω' = rest, x, deps[v := u, c := refl u]`.
    pub reduced: Arc<Telescope>,
    /// `Ω' → Ω`, sending `v` to `x` and `c` to `refl x`.
    pub embed: ContextMorphism,
}

impl Elimination {
    pub fn new(omega: &Arc<Telescope>, cell: usize) -> Result<Self, TowerError> {
        let fail = |reason: &str| TowerError::Elimination {
            cell: omega.name(cell).to_string(),
            reason: reason.to_string(),
        };
        let Some((_, Term::Var(u), Term::Var(v))) = omega.ty(cell).as_id() else {
            return Err(fail("type is not an identity between variables"));
        };
        let (u, v) = (*u, *v);
        if u == v {
            return Err(fail("degenerate cell"));
        }
        let n = omega.len();
        let mut dependent = vec![false; n];
        for l in 0..n {
            if l == u || l == v || l == cell {
                continue;
            }
            let mut hit = false;
            omega.ty(l).visit_free(&mut |w| {
                hit |= w == u || w == v || w == cell || dependent[w];
            });
            dependent[l] = hit;
        }
        let rest: Vec<usize> = (0..n)
            .filter(|&l| l != u && l != v && l != cell && !dependent[l])
            .collect();
        let deps: Vec<usize> = (0..n).filter(|&l| dependent[l]).collect();
        let mut blocked = false;
        omega
            .ty(u)
            .visit_free(&mut |w| blocked |= dependent[w] || w == v || w == cell);
        if blocked {
            return Err(fail("source type depends on eliminated variables"));
        }

        let g = rest.len();
        let x = Term::Var(g);
        let mut rho = vec![Term::Var(usize::MAX); n];
        for (i, &l) in rest.iter().enumerate() {
            rho[l] = Term::Var(i);
        }
        rho[u] = x.clone();
        rho[v] = x.clone();
        rho[cell] = Term::refl(x);
        for (j, &l) in deps.iter().enumerate() {
            rho[l] = Term::Var(g + 1 + j);
        }
        let mut reduced = Telescope::new();
        for &l in rest.iter().chain(std::iter::once(&u)).chain(&deps) {
            reduced.push(omega.name(l), omega.ty(l).subst(&rho));
        }
        let reduced = Arc::new(reduced);
        let embed = ContextMorphism::new(reduced.clone(), omega.clone(), rho);
        Ok(Elimination {
            cell,
            src: u,
            tgt: v,
            rest,
            deps,
            reduced,
            embed,
        })
    }

    /// Levels in `Ω` of the variables of `Ω'`, in order.
    pub fn kept(&self) -> Vec<usize> {
        let mut k = self.rest.clone();
        k.push(self.src);
        k.extend(&self.deps);
        k
    }

    /// Per-variable labels carried from `Ω` to `Ω'`.
    pub fn labels<L: Clone>(&self, labels: &[L]) -> Vec<L> {
        self.kept().into_iter().map(|l| labels[l].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(s: &str) -> PastingDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn level_one() {
        let t = IdentityTower::over("A", 3);
        assert_eq!(
            t.levels[1].to_string(),
            "(x0 : A, x1 : A, p0_0 : Id(A, x0, x1))"
        );
        assert_eq!(t.boundaries[1].to_string(), "(x0 : A, x1 : A)");
        assert_eq!(t.refl[0].print_components(), ["x0", "x0", "refl(x0)"]);
        t.check_reflexive().unwrap();
    }

    #[test]
    fn composable_pair_context() {
        let t = IdentityTower::over("A", 3);
        let ctx = t.indexed(&pd("[*,*]")).unwrap();
        assert_eq!(
            ctx.telescope.to_string(),
            "(x0 : A, x1 : A, x2 : A, p0_0 : Id(A, x0, x1), p1_0 : Id(A, x1, x2))"
        );
        assert_eq!(t.indexed(&pd("[[*],[*,*]]")).unwrap().telescope.len(), 11);
    }

    #[test]
    fn pointing_pair() {
        let t = IdentityTower::over("A", 3);
        let r = t.pointing(&pd("[*,*]")).unwrap();
        assert_eq!(
            r.morphism.print_components(),
            ["x0", "x0", "x0", "refl(x0)", "refl(x0)"]
        );
        assert!(matches!(r.witness, IMapWitness::PairedLemma(..)));
        assert!(t
            .recompose(&r.diagram, &r.witness)
            .unwrap()
            .def_eq(&r.morphism));
    }

    #[test]
    fn overflow() {
        let t = IdentityTower::over("A", 1);
        assert!(matches!(
            t.indexed(&PastingDiagram::iota(2)),
            Err(TowerError::DimensionOverflow(2, 1))
        ));
    }
}
