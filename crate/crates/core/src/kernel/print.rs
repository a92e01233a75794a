//! Printer for the textual syntax. Binder names are chosen fresh against
//! everything in scope, so the output re-parses to the same term.

use super::syntax::{Term, Type};

pub fn print_term(names: &[String], t: &Term) -> String {
    let mut p = Printer {
        free: names,
        bound: Vec::new(),
        out: String::new(),
    };
    p.term(t);
    p.out
}

pub fn print_type(names: &[String], t: &Type) -> String {
    let mut p = Printer {
        free: names,
        bound: Vec::new(),
        out: String::new(),
    };
    p.ty(t);
    p.out
}

struct Printer<'a> {
    free: &'a [String],
    bound: Vec<String>,
    out: String,
}

impl Printer<'_> {
    fn fresh(&self, hint: &str) -> String {
        let taken = |s: &str| self.free.iter().any(|n| n == s) || self.bound.iter().any(|n| n == s);
        if !taken(hint) {
            return hint.to_string();
        }
        (1..)
            .map(|i| format!("{hint}{i}"))
            .find(|s| !taken(s))
            .unwrap()
    }

    fn ty(&mut self, t: &Type) {
        match t {
            Type::Base(n) => self.out.push_str(n),
            Type::Id(c, a, b) => {
                self.out.push_str("Id(");
                self.ty(c);
                self.out.push_str(", ");
                self.term(a);
                self.out.push_str(", ");
                self.term(b);
                self.out.push(')');
            }
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(l) => match self.free.get(*l) {
                Some(n) => self.out.push_str(n),
                None => self.out.push_str(&format!("#{l}")),
            },
            Term::Bound(i) => match self.bound.len().checked_sub(i + 1) {
                Some(k) => {
                    let n = self.bound[k].clone();
                    self.out.push_str(&n);
                }
                None => self.out.push_str(&format!("^{i}")),
            },
            Term::Const(c) => self.out.push_str(c),
            Term::Refl(a) => {
                self.out.push_str("refl(");
                self.term(a);
                self.out.push(')');
            }
            Term::J(j) => {
                let mark = self.bound.len();
                let x = self.fresh("u");
                self.bound.push(x.clone());
                let y = self.fresh("v");
                self.bound.push(y.clone());
                let p = self.fresh("w");
                self.bound.push(p.clone());
                self.out.push_str(&format!("J[{x} {y} {p}"));
                let mut ds = Vec::new();
                for (i, d) in j.delta.iter().enumerate() {
                    let name = self.fresh("d");
                    self.out.push_str(if i == 0 { " | " } else { ", " });
                    self.out.push_str(&name);
                    self.out.push_str(" : ");
                    self.ty(d);
                    self.bound.push(name.clone());
                    ds.push(name);
                }
                self.out.push_str("](");
                self.ty(&j.motive);
                self.out.push_str("; ");
                self.bound.truncate(mark);
                self.bound.push(x);
                self.bound.extend(ds);
                self.term(&j.base);
                self.bound.truncate(mark);
                for part in [&j.a, &j.b, &j.p] {
                    self.out.push_str("; ");
                    self.term(part);
                }
                for (i, e) in j.args.iter().enumerate() {
                    self.out.push_str(if i == 0 { "; " } else { ", " });
                    self.term(e);
                }
                self.out.push(')');
            }
        }
    }
}
