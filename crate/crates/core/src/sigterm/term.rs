use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::position::Position;
use super::signature::{OpId, Signature, SortId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: SortId,
}

impl Var {
    pub fn new(name: &str, sort: SortId) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }

    /// Variables minted by a `FreshScope` (`#n` / `%n`).
    pub fn is_fresh(&self) -> bool {
        self.name.starts_with('#') || self.name.starts_with('%')
    }
}

/// Order-sorted term. AC arguments are kept flattened and sorted by the
/// derived total order, so `==` is equality modulo the structural axioms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(OpId, Vec<Term>),
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

impl Term {
    pub fn var(name: &str, sort: SortId) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(op: OpId) -> Self {
        Term::App(op, Vec::new())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<OpId> {
        match self {
            Term::Var(_) => None,
            Term::App(op, _) => Some(*op),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_in_order(out)),
        }
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    /// All positions in pre-order, root first.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn walk(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
            out.push(Position::from(path.clone()));
            for (i, a) in t.args().iter().enumerate() {
                path.push(i + 1);
                walk(a, path, out);
                path.pop();
            }
        }
        walk(self, &mut path, &mut out);
        out
    }

    /// Non-variable positions in pre-order.
    pub fn fun_positions(&self) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|p| !self.subterm_at(p).map(Term::is_var).unwrap_or(true))
            .collect()
    }

    /// Positions at which `x` occurs.
    pub fn var_positions(&self, x: &Var) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|p| matches!(self.subterm_at(p), Ok(Term::Var(v)) if v == x))
            .collect()
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term> {
        let mut t = self;
        for &i in p.path() {
            t = t
                .args()
                .get(i.wrapping_sub(1))
                .ok_or_else(|| Error::PositionOutOfRange(p.to_string()))?;
        }
        Ok(t)
    }

    /// `self[u]_p`, re-establishing AC canonical form on the way up.
    pub fn replace_at(&self, sig: &Signature, p: &Position, u: Term) -> Result<Term> {
        fn go(t: &Term, sig: &Signature, path: &[usize], u: Term, p: &Position) -> Result<Term> {
            match path.split_first() {
                None => Ok(u),
                Some((&i, rest)) => match t {
                    Term::App(op, args) if i >= 1 && i <= args.len() => {
                        let mut args = args.clone();
                        let child = go(&args[i - 1], sig, rest, u, p)?;
                        args[i - 1] = child;
                        Ok(sig.mk(*op, args))
                    }
                    _ => Err(Error::PositionOutOfRange(p.to_string())),
                },
            }
        }
        let old = self.subterm_at(p)?;
        let (ko, ku) = (sig.kind_of(sig.least_sort(old)), sig.kind_of(sig.least_sort(&u)));
        if ko != ku && !p.is_root() {
            return Err(Error::Sort(format!(
                "replacement of kind {} at {} where {} is expected",
                sig.sort_name(ku),
                p,
                sig.sort_name(ko)
            )));
        }
        go(self, sig, p.path(), u, p)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

impl Signature {
    /// Builds `op(args)`, flattening and sorting AC arguments and ordering
    /// the two arguments of a comm-only symbol.
    pub fn mk(&self, op: OpId, args: Vec<Term>) -> Term {
        let attrs = self.op(op).attrs;
        if attrs.is_ac() {
            let mut flat = Vec::with_capacity(args.len());
            for a in args {
                match a {
                    Term::App(o, inner) if o == op => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            if flat.len() == 1 {
                return flat.pop().unwrap();
            }
            flat.sort();
            Term::App(op, flat)
        } else if attrs.comm {
            let mut args = args;
            args.sort();
            Term::App(op, args)
        } else {
            Term::App(op, args)
        }
    }

    /// AC product of a non-empty multiset of terms; a singleton is returned as is.
    pub fn mk_ac(&self, op: OpId, mut items: Vec<Term>) -> Term {
        debug_assert!(!items.is_empty());
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            self.mk(op, items)
        }
    }

    pub fn least_sort(&self, t: &Term) -> SortId {
        match t {
            Term::Var(v) => v.sort,
            Term::App(op, _) => self.op(*op).result,
        }
    }

    /// Canonicalize a term built without [`Signature::mk`].
    pub fn flatten(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(op, args) => self.mk(*op, args.iter().map(|a| self.flatten(a)).collect()),
        }
    }

    /// Kind-level well-formedness of `op(args)`.
    pub fn check_app(&self, op: OpId, args: &[Term]) -> Result<()> {
        let d = self.op(op);
        if d.tuple {
            return Ok(());
        }
        if d.attrs.is_ac() && args.len() >= 2 {
            let want = d.arg_sorts[0];
            for a in args {
                let s = self.least_sort(a);
                if !self.same_component(s, want) {
                    return Err(Error::Sort(format!(
                        "argument of sort {} given to `{}` expecting {}",
                        self.sort_name(s),
                        d.name,
                        self.sort_name(want)
                    )));
                }
            }
            return Ok(());
        }
        if d.arity() != args.len() {
            return Err(Error::Sort(format!(
                "`{}` expects {} arguments, got {}",
                d.name,
                d.arity(),
                args.len()
            )));
        }
        for (a, &want) in args.iter().zip(&d.arg_sorts) {
            let s = self.least_sort(a);
            if !self.same_component(s, want) {
                return Err(Error::Sort(format!(
                    "argument of sort {} given to `{}` expecting {}",
                    self.sort_name(s),
                    d.name,
                    self.sort_name(want)
                )));
            }
        }
        Ok(())
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.sig, self.term, false)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, sig: &Signature, t: &Term, nested_infix: bool) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{}:{}", v.name, sig.sort_name(v.sort)),
        Term::App(op, args) => {
            let d = sig.op(*op);
            if d.tuple {
                write!(f, "<")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_term(f, sig, a, false)?;
                }
                return write!(f, ">");
            }
            if d.is_infix() {
                if nested_infix {
                    write!(f, "(")?;
                }
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", d.symbol())?;
                    }
                    write_term(f, sig, a, true)?;
                }
                if nested_infix {
                    write!(f, ")")?;
                }
                Ok(())
            } else if args.is_empty() {
                write!(f, "{}", d.name)
            } else {
                write!(f, "{}(", d.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_term(f, sig, a, false)?;
                }
                write!(f, ")")
            }
        }
    }
}
