//! Parser for the textual syntax:
//!
//! ```text
//! type  ::= Id(type, term, term) | NAME
//! term  ::= refl(term) | NAME
//!         | J[x y p | d : type, ...](type; term; term; term; term; term, ...)
//! tele  ::= (NAME : type, ...)
//! ```
//!
//! Names resolve to the innermost binder, then the context (last entry
//! wins), then declared constants.

use super::check::Signature;
use super::morphism::Telescope;
use super::syntax::{JElim, Term, Type};
use super::KernelError;

pub fn parse_term(sig: &Signature, names: &[String], src: &str) -> Result<Term, KernelError> {
    let mut p = Parser::new(sig, names, src);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(sig: &Signature, names: &[String], src: &str) -> Result<Type, KernelError> {
    let mut p = Parser::new(sig, names, src);
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_telescope(sig: &Signature, src: &str) -> Result<Telescope, KernelError> {
    let mut p = Parser::new(sig, &[], src);
    let mut tel = Telescope::new();
    p.expect('(')?;
    if !p.eat(')') {
        loop {
            let name = p.ident()?;
            p.expect(':')?;
            let ty = p.ty()?;
            tel.push(&name, ty);
            p.free.push(name);
            if p.eat(')') {
                break;
            }
            p.expect(',')?;
        }
    }
    p.finish()?;
    Ok(tel)
}

struct Parser<'a> {
    sig: &'a Signature,
    free: Vec<String>,
    bound: Vec<String>,
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(sig: &'a Signature, names: &[String], src: &'a str) -> Self {
        Parser {
            sig,
            free: names.to_vec(),
            bound: Vec::new(),
            src,
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> KernelError {
        KernelError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), KernelError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn finish(&mut self) -> Result<(), KernelError> {
        if self.peek().is_some() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> Result<String, KernelError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_alphanumeric() || c == '_' || c == '\'' || (i > 0 && c == '.')))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || rest.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn ty(&mut self) -> Result<Type, KernelError> {
        let start = self.pos;
        let name = self.ident()?;
        if name == "Id" && self.peek() == Some('(') {
            self.expect('(')?;
            let c = self.ty()?;
            self.expect(',')?;
            let a = self.term()?;
            self.expect(',')?;
            let b = self.term()?;
            self.expect(')')?;
            return Ok(Type::id(c, a, b));
        }
        if self.resolve(&name).is_some() {
            self.pos = start;
            return Err(self.err(format!("{name} is a term, not a type")));
        }
        Ok(Type::base(&name))
    }

    fn resolve(&self, name: &str) -> Option<Term> {
        if let Some(k) = self.bound.iter().rposition(|n| n == name) {
            return Some(Term::Bound(self.bound.len() - 1 - k));
        }
        if let Some(l) = self.free.iter().rposition(|n| n == name) {
            return Some(Term::Var(l));
        }
        if self.sig.is_const(name) {
            return Some(Term::constant(name));
        }
        None
    }

    fn term(&mut self) -> Result<Term, KernelError> {
        let start = self.pos;
        let name = self.ident()?;
        match name.as_str() {
            "refl" if self.peek() == Some('(') => {
                self.expect('(')?;
                let a = self.term()?;
                self.expect(')')?;
                Ok(Term::refl(a))
            }
            "J" if self.peek() == Some('[') => self.j(),
            _ => self.resolve(&name).ok_or_else(|| {
                self.pos = start;
                KernelError::UnknownName(name)
            }),
        }
    }

    fn j(&mut self) -> Result<Term, KernelError> {
        self.expect('[')?;
        let mark = self.bound.len();
        let x = self.ident()?;
        let y = self.ident()?;
        let p = self.ident()?;
        self.bound.extend([x.clone(), y, p]);
        let mut delta = Vec::new();
        let mut dnames = Vec::new();
        if self.eat('|') {
            loop {
                let d = self.ident()?;
                self.expect(':')?;
                delta.push(self.ty()?);
                self.bound.push(d.clone());
                dnames.push(d);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(']')?;
        self.expect('(')?;
        let motive = self.ty()?;
        self.expect(';')?;
        self.bound.truncate(mark);
        self.bound.push(x);
        self.bound.extend(dnames);
        let base = self.term()?;
        self.bound.truncate(mark);
        self.expect(';')?;
        let a = self.term()?;
        self.expect(';')?;
        let b = self.term()?;
        self.expect(';')?;
        let pt = self.term()?;
        let mut args = Vec::new();
        if self.eat(';') {
            loop {
                args.push(self.term()?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(')')?;
        if args.len() != delta.len() {
            return Err(self.err(format!(
                "J binds {} extra variables but has {} arguments",
                delta.len(),
                args.len()
            )));
        }
        Ok(Term::j(JElim {
            delta,
            motive,
            base,
            a,
            b,
            p: pt,
            args,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::print::{print_term, print_type};

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip_symmetry() {
        let sig = Signature::with_base("A");
        let ns = names(&["x", "y", "p"]);
        let src = "J[u v w](Id(A, v, u); refl(u); x; y; p)";
        let t = parse_term(&sig, &ns, src).unwrap();
        assert_eq!(print_term(&ns, &t), src);
        let ty = sig
            .infer(
                &[
                    Type::base("A"),
                    Type::base("A"),
                    Type::id(Type::base("A"), Term::Var(0), Term::Var(1)),
                ],
                &t,
            )
            .unwrap();
        assert_eq!(print_type(&ns, &ty), "Id(A, y, x)");
    }

    #[test]
    fn round_trip_frobenius() {
        let sig = Signature::with_base("A");
        let ns = names(&["x", "y", "z", "p", "q"]);
        let src = "J[u v w | d : Id(A, v, z)](Id(A, u, z); d; x; y; p; q)";
        let t = parse_term(&sig, &ns, src).unwrap();
        assert_eq!(print_term(&ns, &t), src);
    }

    #[test]
    fn telescope() {
        let sig = Signature::with_base("A");
        let tel = parse_telescope(&sig, "(x : A, p : Id(A, x, x))").unwrap();
        assert_eq!(tel.len(), 2);
        assert_eq!(tel.to_string(), "(x : A, p : Id(A, x, x))");
        assert!(parse_telescope(&sig, "(x : A, p : Id(A, x, y))").is_err());
    }

    #[test]
    fn errors_carry_position() {
        let sig = Signature::with_base("A");
        let e = parse_term(&sig, &names(&["x"]), "refl(y)").unwrap_err();
        assert_eq!(e, KernelError::UnknownName("y".into()));
        let e = parse_term(&sig, &names(&["x"]), "refl(x").unwrap_err();
        assert!(matches!(e, KernelError::Parse { pos: 6, .. }));
    }
}
