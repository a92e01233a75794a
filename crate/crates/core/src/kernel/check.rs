//! Type formation and type inference.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::normalize::{def_eq, type_eq};
use super::syntax::{Term, Type};
use super::KernelError;

/// Declared base types and constants. Immutable once checking starts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    bases: BTreeSet<Arc<str>>,
    consts: BTreeMap<Arc<str>, Type>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_base(name: &str) -> Self {
        let mut s = Self::new();
        s.declare_base(name);
        s
    }

    pub fn declare_base(&mut self, name: &str) {
        self.bases.insert(name.into());
    }

    pub fn declare_const(&mut self, name: &str, ty: Type) -> Result<(), KernelError> {
        self.check_type(&[], &ty)?;
        self.consts.insert(name.into(), ty);
        Ok(())
    }

    pub fn has_base(&self, name: &str) -> bool {
        self.bases.contains(name)
    }

    pub fn const_type(&self, name: &str) -> Option<&Type> {
        self.consts.get(name)
    }

    pub fn is_const(&self, name: &str) -> bool {
        self.consts.contains_key(name)
    }

    pub fn check_type(&self, ctx: &[Type], ty: &Type) -> Result<(), KernelError> {
        let mut c = ctx.to_vec();
        self.check_type_in(&mut c, ty)
    }

    pub fn infer(&self, ctx: &[Type], t: &Term) -> Result<Type, KernelError> {
        let mut c = ctx.to_vec();
        self.infer_in(&mut c, t)
    }

    pub fn check(&self, ctx: &[Type], t: &Term, ty: &Type) -> Result<(), KernelError> {
        let found = self.infer(ctx, t)?;
        expect_type(ty, &found)
    }

    /// Checks that every entry is well formed over the ones before it.
    pub fn check_context(&self, ctx: &[Type]) -> Result<(), KernelError> {
        let mut c = Vec::with_capacity(ctx.len());
        for ty in ctx {
            self.check_type_in(&mut c, ty)?;
            c.push(ty.clone());
        }
        Ok(())
    }

    fn check_type_in(&self, ctx: &mut Vec<Type>, ty: &Type) -> Result<(), KernelError> {
        match ty {
            Type::Base(n) => {
                if self.bases.contains(n) {
                    Ok(())
                } else {
                    Err(KernelError::UnknownBase(n.to_string()))
                }
            }
            Type::Id(c, a, b) => {
                self.check_type_in(ctx, c)?;
                let ta = self.infer_in(ctx, a)?;
                expect_type(c, &ta)?;
                let tb = self.infer_in(ctx, b)?;
                expect_type(c, &tb)
            }
        }
    }

    fn infer_in(&self, ctx: &mut Vec<Type>, t: &Term) -> Result<Type, KernelError> {
        match t {
            Term::Var(l) => ctx
                .get(*l)
                .cloned()
                .ok_or(KernelError::UnboundVar(*l, ctx.len())),
            Term::Bound(i) => Err(KernelError::LooseBound(*i)),
            Term::Const(c) => self
                .consts
                .get(c)
                .cloned()
                .ok_or_else(|| KernelError::UnknownConst(c.to_string())),
            Term::Refl(a) => {
                let ty = self.infer_in(ctx, a)?;
                Ok(Type::id(ty, (**a).clone(), (**a).clone()))
            }
            Term::J(j) => {
                let p_ty = self.infer_in(ctx, &j.p)?;
                let Some((carrier, pa, pb)) = p_ty.as_id() else {
                    return Err(KernelError::NotAnId(format!("{p_ty:?}")));
                };
                if !def_eq(pa, &j.a) {
                    return Err(KernelError::mismatch("J left endpoint", pa, &j.a));
                }
                if !def_eq(pb, &j.b) {
                    return Err(KernelError::mismatch("J right endpoint", pb, &j.b));
                }
                let carrier = carrier.clone();
                let n = ctx.len();
                let m = j.delta.len();
                if j.args.len() != m {
                    return Err(KernelError::Arity {
                        expected: m,
                        found: j.args.len(),
                    });
                }

                // Motive context: x, y : T, p : Id(x, y), δ.
                let generic: Vec<Term> = (n..n + 3 + m).map(Term::Var).collect();
                ctx.push(carrier.clone());
                ctx.push(carrier.clone());
                ctx.push(Type::id(carrier.clone(), Term::Var(n), Term::Var(n + 1)));
                let mut result = Ok(());
                for (i, d) in j.delta.iter().enumerate() {
                    let di = d.open(&generic[..3 + i]);
                    result = self.check_type_in(ctx, &di);
                    if result.is_err() {
                        break;
                    }
                    ctx.push(di);
                }
                if result.is_ok() {
                    result = self.check_type_in(ctx, &j.motive.open(&generic));
                }
                ctx.truncate(n);
                result?;

                // Base context: x : T, δ at (x, x, refl x).
                let x = Term::Var(n);
                let mut diag = vec![x.clone(), x.clone(), Term::refl(x.clone())];
                diag.extend((n + 1..n + 1 + m).map(Term::Var));
                ctx.push(carrier.clone());
                for (i, d) in j.delta.iter().enumerate() {
                    ctx.push(d.open(&diag[..3 + i]));
                }
                let base_vals: Vec<Term> = (n..n + 1 + m).map(Term::Var).collect();
                let found = self.infer_in(ctx, &j.base.open(&base_vals));
                ctx.truncate(n);
                let found = found?;
                expect_type(&j.motive.open(&diag), &found)?;

                // Arguments.
                let mut inst = vec![j.a.clone(), j.b.clone(), j.p.clone()];
                for (d, e) in j.delta.iter().zip(&j.args) {
                    let want = d.open(&inst);
                    let got = self.infer_in(ctx, e)?;
                    expect_type(&want, &got)?;
                    inst.push(e.clone());
                }
                Ok(j.motive.open(&inst))
            }
        }
    }
}

fn expect_type(want: &Type, got: &Type) -> Result<(), KernelError> {
    if type_eq(want, got) {
        Ok(())
    } else {
        Err(KernelError::TypeMismatch {
            expected: format!("{want:?}"),
            found: format!("{got:?}"),
        })
    }
}
