//! Locally nameless syntax. Free variables are de Bruijn levels into the
//! ambient context; variables bound by `J` are de Bruijn indices.

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Base(Arc<str>),
    Id(Arc<Type>, Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Free variable, by level.
    Var(usize),
    /// Variable bound by an enclosing `J`, by index.
    Bound(usize),
    /// Declared constant of a base type.
    Const(Arc<str>),
    Refl(Arc<Term>),
    J(Arc<JElim>),
}

/// `J` in Frobenius form. With `m = delta.len()`:
/// `delta[j]` binds `x, y, p, δ_0 .. δ_{j-1}`;
/// `motive` binds `x, y, p, δ_0 .. δ_{m-1}`;
/// `base` binds `x, δ_0 .. δ_{m-1}` (the δ at `y := x`, `p := refl x`).
/// The carrier is read off the type of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JElim {
    pub delta: Vec<Type>,
    pub motive: Type,
    pub base: Term,
    pub a: Term,
    pub b: Term,
    pub p: Term,
    pub args: Vec<Term>,
}

impl Type {
    pub fn base(name: &str) -> Type {
        Type::Base(name.into())
    }

    pub fn id(carrier: Type, a: Term, b: Term) -> Type {
        Type::Id(Arc::new(carrier), a, b)
    }

    /// Carrier and endpoints of an identity type.
    pub fn as_id(&self) -> Option<(&Type, &Term, &Term)> {
        match self {
            Type::Id(t, a, b) => Some((t, a, b)),
            Type::Base(_) => None,
        }
    }

    /// Number of `Id` formers above the base type.
    pub fn level(&self) -> usize {
        match self {
            Type::Base(_) => 0,
            Type::Id(t, _, _) => 1 + t.level(),
        }
    }

    pub fn map_free(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Type {
        match self {
            Type::Base(_) => self.clone(),
            Type::Id(t, a, b) => Type::Id(
                Arc::new(t.map_free(depth, f)),
                a.map_free(depth, f),
                b.map_free(depth, f),
            ),
        }
    }

    fn open_at(&self, depth: usize, vals: &[Term]) -> Type {
        match self {
            Type::Base(_) => self.clone(),
            Type::Id(t, a, b) => Type::Id(
                Arc::new(t.open_at(depth, vals)),
                a.open_at(depth, vals),
                b.open_at(depth, vals),
            ),
        }
    }

    /// Instantiates the innermost `vals.len()` binders, outermost first.
    /// The values must be locally closed.
    pub fn open(&self, vals: &[Term]) -> Type {
        self.open_at(0, vals)
    }

    pub fn subst(&self, s: &[Term]) -> Type {
        self.subst_prefix(s, s.len())
    }

    /// Replaces `Var(l)` by `s[l]` for `l < s.len()` and renumbers the rest
    /// as if the first `s.len()` variables became `new_len` variables.
    pub fn subst_prefix(&self, s: &[Term], new_len: usize) -> Type {
        self.map_free(0, &mut |l, _| prefix_image(s, new_len, l))
    }

    pub fn rename(&self, f: &dyn Fn(usize) -> usize) -> Type {
        self.map_free(0, &mut |l, _| Term::Var(f(l)))
    }

    pub fn visit_free(&self, f: &mut dyn FnMut(usize)) {
        if let Type::Id(t, a, b) = self {
            t.visit_free(f);
            a.visit_free(f);
            b.visit_free(f);
        }
    }

    pub fn mentions(&self, l: usize) -> bool {
        let mut hit = false;
        self.visit_free(&mut |v| hit |= v == l);
        hit
    }

    pub fn is_locally_closed(&self) -> bool {
        self.loose_bound(0).is_none()
    }

    fn loose_bound(&self, depth: usize) -> Option<usize> {
        match self {
            Type::Base(_) => None,
            Type::Id(t, a, b) => t
                .loose_bound(depth)
                .or_else(|| a.loose_bound(depth))
                .or_else(|| b.loose_bound(depth)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Base(_) => 1,
            Type::Id(t, a, b) => 1 + t.size() + a.size() + b.size(),
        }
    }
}

fn prefix_image(s: &[Term], new_len: usize, l: usize) -> Term {
    if l < s.len() {
        s[l].clone()
    } else {
        Term::Var(l - s.len() + new_len)
    }
}

impl Term {
    pub fn var(l: usize) -> Term {
        Term::Var(l)
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn refl(t: Term) -> Term {
        Term::Refl(Arc::new(t))
    }

    /// `refl` applied `n` times.
    pub fn refl_n(t: Term, n: usize) -> Term {
        (0..n).fold(t, |acc, _| Term::refl(acc))
    }

    pub fn j(j: JElim) -> Term {
        Term::J(Arc::new(j))
    }

    /// Applies `f(level, depth)` to every free variable; `depth` counts the
    /// binders passed so the image can refer to them.
    pub fn map_free(&self, depth: usize, f: &mut dyn FnMut(usize, usize) -> Term) -> Term {
        match self {
            Term::Var(l) => f(*l, depth),
            Term::Bound(_) | Term::Const(_) => self.clone(),
            Term::Refl(a) => Term::refl(a.map_free(depth, f)),
            Term::J(j) => {
                let m = j.delta.len();
                Term::j(JElim {
                    delta: j
                        .delta
                        .iter()
                        .enumerate()
                        .map(|(i, d)| d.map_free(depth + 3 + i, f))
                        .collect(),
                    motive: j.motive.map_free(depth + 3 + m, f),
                    base: j.base.map_free(depth + 1 + m, f),
                    a: j.a.map_free(depth, f),
                    b: j.b.map_free(depth, f),
                    p: j.p.map_free(depth, f),
                    args: j.args.iter().map(|e| e.map_free(depth, f)).collect(),
                })
            }
        }
    }

    fn open_at(&self, depth: usize, vals: &[Term]) -> Term {
        match self {
            Term::Bound(i) if *i >= depth => {
                let k = vals.len();
                let rel = i - depth;
                if rel < k {
                    vals[k - 1 - rel].clone()
                } else {
                    Term::Bound(i - k)
                }
            }
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => self.clone(),
            Term::Refl(a) => Term::refl(a.open_at(depth, vals)),
            Term::J(j) => {
                let m = j.delta.len();
                Term::j(JElim {
                    delta: j
                        .delta
                        .iter()
                        .enumerate()
                        .map(|(i, d)| d.open_at(depth + 3 + i, vals))
                        .collect(),
                    motive: j.motive.open_at(depth + 3 + m, vals),
                    base: j.base.open_at(depth + 1 + m, vals),
                    a: j.a.open_at(depth, vals),
                    b: j.b.open_at(depth, vals),
                    p: j.p.open_at(depth, vals),
                    args: j.args.iter().map(|e| e.open_at(depth, vals)).collect(),
                })
            }
        }
    }

    /// Instantiates the innermost `vals.len()` binders, outermost first.
    /// The values must be locally closed.
    pub fn open(&self, vals: &[Term]) -> Term {
        self.open_at(0, vals)
    }

    pub fn subst(&self, s: &[Term]) -> Term {
        self.subst_prefix(s, s.len())
    }

    /// See [`Type::subst_prefix`].
    pub fn subst_prefix(&self, s: &[Term], new_len: usize) -> Term {
        self.map_free(0, &mut |l, _| prefix_image(s, new_len, l))
    }

    pub fn rename(&self, f: &dyn Fn(usize) -> usize) -> Term {
        self.map_free(0, &mut |l, _| Term::Var(f(l)))
    }

    pub fn visit_free(&self, f: &mut dyn FnMut(usize)) {
        match self {
            Term::Var(l) => f(*l),
            Term::Bound(_) | Term::Const(_) => {}
            Term::Refl(a) => a.visit_free(f),
            Term::J(j) => {
                for d in &j.delta {
                    d.visit_free(f);
                }
                j.motive.visit_free(f);
                j.base.visit_free(f);
                j.a.visit_free(f);
                j.b.visit_free(f);
                j.p.visit_free(f);
                for e in &j.args {
                    e.visit_free(f);
                }
            }
        }
    }

    pub fn mentions(&self, l: usize) -> bool {
        let mut hit = false;
        self.visit_free(&mut |v| hit |= v == l);
        hit
    }

    pub fn is_locally_closed(&self) -> bool {
        self.loose_bound(0).is_none()
    }

    fn loose_bound(&self, depth: usize) -> Option<usize> {
        match self {
            Term::Bound(i) if *i >= depth => Some(i - depth),
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => None,
            Term::Refl(a) => a.loose_bound(depth),
            Term::J(j) => {
                let m = j.delta.len();
                j.delta
                    .iter()
                    .enumerate()
                    .find_map(|(i, d)| d.loose_bound(depth + 3 + i))
                    .or_else(|| j.motive.loose_bound(depth + 3 + m))
                    .or_else(|| j.base.loose_bound(depth + 1 + m))
                    .or_else(|| j.a.loose_bound(depth))
                    .or_else(|| j.b.loose_bound(depth))
                    .or_else(|| j.p.loose_bound(depth))
                    .or_else(|| j.args.iter().find_map(|e| e.loose_bound(depth)))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => 1,
            Term::Refl(a) => 1 + a.size(),
            Term::J(j) => {
                1 + j.delta.iter().map(Type::size).sum::<usize>()
                    + j.motive.size()
                    + j.base.size()
                    + j.a.size()
                    + j.b.size()
                    + j.p.size()
                    + j.args.iter().map(Term::size).sum::<usize>()
            }
        }
    }

    /// Number of `J` nodes.
    pub fn j_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::Const(_) => 0,
            Term::Refl(a) => a.j_count(),
            Term::J(j) => {
                1 + j.base.j_count()
                    + j.a.j_count()
                    + j.b.j_count()
                    + j.p.j_count()
                    + j.args.iter().map(Term::j_count).sum::<usize>()
            }
        }
    }

    /// Peels `refl`s: `refl^n(t)` gives `(n, t)`.
    pub fn refl_depth(&self) -> (usize, &Term) {
        let mut n = 0;
        let mut t = self;
        while let Term::Refl(a) = t {
            n += 1;
            t = a;
        }
        (n, t)
    }
}

/// Abstracts the listed free variables into the innermost binders, in order
/// (the last one becomes index 0). Other variables go through `rest`.
pub fn abstract_type(t: &Type, vars: &[usize], rest: &dyn Fn(usize) -> usize) -> Type {
    t.map_free(0, &mut |l, depth| abstract_image(l, depth, vars, rest))
}

pub fn abstract_term(t: &Term, vars: &[usize], rest: &dyn Fn(usize) -> usize) -> Term {
    t.map_free(0, &mut |l, depth| abstract_image(l, depth, vars, rest))
}

fn abstract_image(l: usize, depth: usize, vars: &[usize], rest: &dyn Fn(usize) -> usize) -> Term {
    match vars.iter().position(|&v| v == l) {
        Some(j) => Term::Bound(depth + vars.len() - 1 - j),
        None => Term::Var(rest(l)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_and_abstract_are_inverse() {
        let a = Type::base("A");
        let t = Type::id(a.clone(), Term::Var(3), Term::refl(Term::Var(1)));
        let abs = abstract_type(&t, &[1, 3], &|l| l);
        assert!(!abs.is_locally_closed());
        assert_eq!(abs, Type::id(a, Term::Bound(0), Term::refl(Term::Bound(1))));
        assert_eq!(abs.open(&[Term::Var(1), Term::Var(3)]), t);
    }

    #[test]
    fn open_under_binder() {
        // A J whose motive mentions the outer bound variable 0.
        let a = Type::base("A");
        let j = Term::j(JElim {
            delta: vec![],
            motive: Type::id(a.clone(), Term::Bound(3), Term::Bound(1)),
            base: Term::refl(Term::Bound(0)),
            a: Term::Bound(0),
            b: Term::Bound(0),
            p: Term::refl(Term::Bound(0)),
            args: vec![],
        });
        let opened = j.open(&[Term::Var(7)]);
        let Term::J(o) = &opened else { panic!() };
        assert_eq!(o.motive, Type::id(a, Term::Var(7), Term::Bound(1)));
        assert_eq!(o.a, Term::Var(7));
        assert!(opened.is_locally_closed());
    }

    #[test]
    fn subst_prefix_renumbers_tail() {
        let t = Term::refl(Term::Var(2));
        assert_eq!(t.subst_prefix(&[Term::Var(0)], 3), Term::refl(Term::Var(4)));
        assert_eq!(Term::Var(0).subst_prefix(&[Term::Var(5)], 3), Term::Var(5));
    }
}
