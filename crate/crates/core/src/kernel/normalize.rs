//! J-reduction: `J(C; d; a; a; refl a; δ) ⟶ d[a, δ]`.

use super::syntax::{JElim, Term, Type};

/// Innermost-first normal form.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Const(_) => t.clone(),
        Term::Refl(a) => Term::refl(normalize(a)),
        Term::J(j) => {
            let p = normalize(&j.p);
            let args: Vec<Term> = j.args.iter().map(normalize).collect();
            if let Term::Refl(c) = &p {
                let mut vals = Vec::with_capacity(1 + args.len());
                vals.push((**c).clone());
                vals.extend(args);
                return normalize(&j.base.open(&vals));
            }
            Term::j(JElim {
                delta: j.delta.iter().map(normalize_type).collect(),
                motive: normalize_type(&j.motive),
                base: normalize(&j.base),
                a: normalize(&j.a),
                b: normalize(&j.b),
                p,
                args,
            })
        }
    }
}

pub fn normalize_type(t: &Type) -> Type {
    match t {
        Type::Base(_) => t.clone(),
        Type::Id(c, a, b) => Type::id(normalize_type(c), normalize(a), normalize(b)),
    }
}

pub fn is_normal(t: &Term) -> bool {
    step(t).is_none()
}

/// One leftmost-innermost reduction step, or `None` on normal forms.
pub fn step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Const(_) => None,
        Term::Refl(a) => step(a).map(Term::refl),
        Term::J(j) => {
            let mut j2 = (**j).clone();
            if step_in_types(&mut j2.delta).is_some() {
                return Some(Term::j(j2));
            }
            if let Some(m) = step_type(&j.motive) {
                j2.motive = m;
                return Some(Term::j(j2));
            }
            if let Some(s) = step(&j.base) {
                j2.base = s;
                return Some(Term::j(j2));
            }
            if let Some(s) = step(&j.a) {
                j2.a = s;
                return Some(Term::j(j2));
            }
            if let Some(s) = step(&j.b) {
                j2.b = s;
                return Some(Term::j(j2));
            }
            if let Some(s) = step(&j.p) {
                j2.p = s;
                return Some(Term::j(j2));
            }
            for (i, e) in j.args.iter().enumerate() {
                if let Some(s) = step(e) {
                    j2.args[i] = s;
                    return Some(Term::j(j2));
                }
            }
            if let Term::Refl(c) = &j.p {
                let mut vals = vec![(**c).clone()];
                vals.extend(j.args.iter().cloned());
                return Some(j.base.open(&vals));
            }
            None
        }
    }
}

fn step_in_types(ts: &mut [Type]) -> Option<()> {
    for t in ts.iter_mut() {
        if let Some(s) = step_type(t) {
            *t = s;
            return Some(());
        }
    }
    None
}

pub fn step_type(t: &Type) -> Option<Type> {
    match t {
        Type::Base(_) => None,
        Type::Id(c, a, b) => {
            if let Some(c2) = step_type(c) {
                return Some(Type::id(c2, a.clone(), b.clone()));
            }
            if let Some(a2) = step(a) {
                return Some(Type::id((**c).clone(), a2, b.clone()));
            }
            step(b).map(|b2| Type::id((**c).clone(), a.clone(), b2))
        }
    }
}

/// Definitional equality: syntactic equality of normal forms.
pub fn def_eq(t: &Term, u: &Term) -> bool {
    t == u || normalize(t) == normalize(u)
}

pub fn type_eq(t: &Type, u: &Type) -> bool {
    t == u || normalize_type(t) == normalize_type(u)
}
