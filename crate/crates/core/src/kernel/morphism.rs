//! Telescopes and context morphisms; composition is substitution.

use std::fmt;
use std::sync::Arc;

use super::check::Signature;
use super::normalize::{def_eq, normalize, type_eq};
use super::print::{print_term, print_type};
use super::syntax::{Term, Type};
use super::KernelError;

/// An ordered context; entry `l` may mention variables `0..l`. Names are
/// printing hints only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Telescope {
    names: Vec<String>,
    types: Vec<Type>,
}

impl Telescope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (String, Type)>) -> Self {
        let mut t = Self::new();
        for (n, ty) in entries {
            t.names.push(n);
            t.types.push(ty);
        }
        t
    }

    pub fn push(&mut self, name: &str, ty: Type) {
        self.names.push(name.to_string());
        self.types.push(ty);
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn types(&self) -> &[Type] {
        &self.types
    }

    pub fn name(&self, l: usize) -> &str {
        &self.names[l]
    }

    pub fn ty(&self, l: usize) -> &Type {
        &self.types[l]
    }

    pub fn last(&self) -> Option<&Type> {
        self.types.last()
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> Telescope {
        Telescope {
            names: self.names[..n].to_vec(),
            types: self.types[..n].to_vec(),
        }
    }

    /// Appends `ext`, whose entries are written over `self`.
    pub fn extend(&self, ext: &Telescope) -> Telescope {
        let mut t = self.clone();
        t.names.extend(ext.names.iter().cloned());
        t.types.extend(ext.types.iter().cloned());
        t
    }

    pub fn check(&self, sig: &Signature) -> Result<(), KernelError> {
        sig.check_context(&self.types)
    }

    /// Same types entrywise, up to definitional equality.
    pub fn equiv(&self, other: &Telescope) -> bool {
        self.len() == other.len()
            && self
                .types
                .iter()
                .zip(&other.types)
                .all(|(a, b)| type_eq(a, b))
    }

    pub fn print_term(&self, t: &Term) -> String {
        print_term(&self.names, t)
    }

    pub fn print_type(&self, t: &Type) -> String {
        print_type(&self.names, t)
    }
}

impl fmt::Display for Telescope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for l in 0..self.len() {
            if l > 0 {
                f.write_str(", ")?;
            }
            let ty = print_type(&self.names[..l], &self.types[l]);
            write!(f, "{} : {}", self.names[l], ty)?;
        }
        f.write_str(")")
    }
}

/// Interprets each entry of `target` by a term over `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextMorphism {
    pub source: Arc<Telescope>,
    pub target: Arc<Telescope>,
    pub components: Vec<Term>,
}

impl ContextMorphism {
    pub fn new(source: Arc<Telescope>, target: Arc<Telescope>, components: Vec<Term>) -> Self {
        debug_assert_eq!(target.len(), components.len());
        ContextMorphism {
            source,
            target,
            components,
        }
    }

    pub fn identity(tel: Arc<Telescope>) -> Self {
        let components = (0..tel.len()).map(Term::Var).collect();
        ContextMorphism {
            source: tel.clone(),
            target: tel,
            components,
        }
    }

    /// The projection `(base, ext) → base`.
    pub fn dependent_projection(base: &Telescope, ext: &Telescope) -> Self {
        let source = Arc::new(base.extend(ext));
        let target = Arc::new(base.clone());
        Self::projection(source, target)
    }

    /// Keeps the first `target.len()` variables of `source`.
    pub fn projection(source: Arc<Telescope>, target: Arc<Telescope>) -> Self {
        let components = (0..target.len()).map(Term::Var).collect();
        ContextMorphism {
            source,
            target,
            components,
        }
    }

    /// Whether the components are exactly the leading variables.
    pub fn is_dependent_projection(&self) -> bool {
        self.target.len() <= self.source.len()
            && self
                .components
                .iter()
                .enumerate()
                .all(|(i, c)| *c == Term::Var(i))
    }

    /// `self ∘ f`: first `f`, then `self`.
    pub fn compose(&self, f: &ContextMorphism) -> Result<ContextMorphism, KernelError> {
        if f.target.len() != self.source.len() {
            return Err(KernelError::TelescopeMismatch(format!(
                "composing through {} and {} entries",
                f.target.len(),
                self.source.len()
            )));
        }
        Ok(self.after_unchecked(f))
    }

    /// As [`compose`](Self::compose) but also checks the middle telescopes
    /// agree up to definitional equality.
    pub fn compose_checked(&self, f: &ContextMorphism) -> Result<ContextMorphism, KernelError> {
        if !Arc::ptr_eq(&f.target, &self.source) && !f.target.equiv(&self.source) {
            return Err(KernelError::TelescopeMismatch(format!(
                "{} vs {}",
                f.target, self.source
            )));
        }
        self.compose(f)
    }

    fn after_unchecked(&self, f: &ContextMorphism) -> ContextMorphism {
        ContextMorphism {
            source: f.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|c| c.subst(&f.components))
                .collect(),
        }
    }

    /// Reindexes a type over the target into one over the source.
    pub fn substitute_type(&self, ty: &Type) -> Type {
        ty.subst(&self.components)
    }

    pub fn substitute_term(&self, t: &Term) -> Term {
        t.subst(&self.components)
    }

    /// Checks every component against its target entry, instantiated at the
    /// components before it.
    pub fn check(&self, sig: &Signature) -> Result<(), KernelError> {
        if self.components.len() != self.target.len() {
            return Err(KernelError::Arity {
                expected: self.target.len(),
                found: self.components.len(),
            });
        }
        let ctx = self.source.types();
        for (i, c) in self.components.iter().enumerate() {
            let want = self.target.ty(i).subst(&self.components[..i]);
            sig.check(ctx, c, &want)?;
        }
        Ok(())
    }

    pub fn def_eq(&self, other: &ContextMorphism) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| def_eq(a, b))
    }

    pub fn normalize(&self) -> ContextMorphism {
        ContextMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(normalize).collect(),
        }
    }

    /// Keeps the listed target entries; the result's target is `target`.
    pub fn select(&self, indices: &[usize], target: Arc<Telescope>) -> ContextMorphism {
        ContextMorphism {
            source: self.source.clone(),
            target,
            components: indices
                .iter()
                .map(|&i| self.components[i].clone())
                .collect(),
        }
    }

    pub fn print_components(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|c| self.source.print_term(c))
            .collect()
    }
}

impl fmt::Display for ContextMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> <{}>",
            self.source,
            self.print_components().join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Type {
        Type::base("A")
    }

    #[test]
    fn identity_laws() {
        let sig = Signature::with_base("A");
        let tel = Arc::new(Telescope::from_entries([
            ("x".to_string(), a()),
            ("y".to_string(), a()),
            ("p".to_string(), Type::id(a(), Term::Var(0), Term::Var(1))),
        ]));
        let id = ContextMorphism::identity(tel.clone());
        assert!(id.check(&sig).is_ok());
        let point = Arc::new(Telescope::from_entries([("x".to_string(), a())]));
        let r = ContextMorphism::new(
            point.clone(),
            tel.clone(),
            vec![Term::Var(0), Term::Var(0), Term::refl(Term::Var(0))],
        );
        assert!(r.check(&sig).is_ok());
        assert!(id.compose(&r).unwrap().def_eq(&r));
        assert!(r
            .compose(&ContextMorphism::identity(point))
            .unwrap()
            .def_eq(&r));
    }

    #[test]
    fn ill_typed_component_rejected() {
        let sig = Signature::with_base("A");
        let tel = Arc::new(Telescope::from_entries([
            ("x".to_string(), a()),
            ("y".to_string(), a()),
            ("p".to_string(), Type::id(a(), Term::Var(0), Term::Var(1))),
        ]));
        let bad = ContextMorphism::new(
            tel.clone(),
            tel.clone(),
            vec![Term::Var(1), Term::Var(0), Term::Var(2)],
        );
        assert!(bad.check(&sig).is_err());
    }

    #[test]
    fn dependent_projection_empty_extension() {
        let base = Telescope::from_entries([("x".to_string(), a())]);
        let p = ContextMorphism::dependent_projection(&base, &Telescope::new());
        assert!(p.def_eq(&ContextMorphism::identity(Arc::new(base))));
        assert!(p.is_dependent_projection());
    }
}
