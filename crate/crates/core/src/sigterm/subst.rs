use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::signature::Signature;
use super::term::{Term, Var};
use crate::error::{Error, Result};

/// Finite map from variables to terms, kept idempotent by the operations
/// that build unifiers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.map.insert(x, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.map.get(x)
    }

    /// Image of `x` (itself when unbound).
    pub fn image(&self, x: &Var) -> Term {
        self.map.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        let ran = self.range_vars();
        self.map.keys().all(|x| !ran.contains(x))
    }

    /// Raw insertion; callers keep the map idempotent.
    pub fn insert(&mut self, x: Var, t: Term) {
        if t.as_var() == Some(&x) {
            self.map.remove(&x);
        } else {
            self.map.insert(x, t);
        }
    }

    pub fn remove(&mut self, x: &Var) -> Option<Term> {
        self.map.remove(x)
    }

    pub fn apply(&self, sig: &Signature, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.image(v),
            Term::App(op, args) => sig.mk(*op, args.iter().map(|a| self.apply(sig, a)).collect()),
        }
    }

    /// Adds `x ↦ t` to a solved form: existing images are instantiated by the
    /// new binding. `t` must already be instantiated by `self`.
    pub fn bind(&mut self, sig: &Signature, x: Var, t: Term) {
        let single = Substitution::singleton(x.clone(), t.clone());
        for v in self.map.values_mut() {
            if v.contains_var(&x) {
                *v = single.apply(sig, v);
            }
        }
        self.insert(x, t);
    }

    /// `self` followed by `other`: `t(self.compose(other)) = (t self) other`.
    pub fn compose(&self, sig: &Signature, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<Var, Term> = self
            .map
            .iter()
            .map(|(x, t)| (x.clone(), other.apply(sig, t)))
            .filter(|(x, t)| t.as_var() != Some(x))
            .collect();
        for (x, t) in &other.map {
            map.entry(x.clone()).or_insert_with(|| t.clone());
        }
        let mut out = Substitution { map };
        // fixpoint over the finite domain to restore idempotency
        for _ in 0..=out.map.len() {
            if out.is_idempotent() {
                break;
            }
            let snapshot = out.clone();
            for t in out.map.values_mut() {
                *t = snapshot.apply(sig, t);
            }
        }
        out
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        let mut out = Substitution::new();
        for x in vars {
            if let Some(t) = self.map.get(x) {
                out.map.insert(x.clone(), t.clone());
            }
        }
        out
    }

    pub fn combine(&self, other: &Substitution) -> Result<Substitution> {
        let mut out = self.clone();
        for (x, t) in &other.map {
            if out.map.contains_key(x) {
                return Err(Error::OverlappingDomains(x.name.to_string()));
            }
            out.map.insert(x.clone(), t.clone());
        }
        Ok(out)
    }

    /// Injective variable-to-variable map.
    pub fn is_renaming(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map
            .values()
            .all(|t| matches!(t, Term::Var(v) if seen.insert(v.clone())))
    }

    pub fn inverse_renaming(&self) -> Option<Substitution> {
        if !self.is_renaming() {
            return None;
        }
        Some(Substitution {
            map: self
                .map
                .iter()
                .map(|(x, t)| (t.as_var().unwrap().clone(), Term::Var(x.clone())))
                .collect(),
        })
    }

    pub fn map_images(&self, mut f: impl FnMut(&Term) -> Term) -> Substitution {
        Substitution {
            map: self.map.iter().map(|(x, t)| (x.clone(), f(t))).collect(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> SubstDisplay<'a> {
        SubstDisplay { subst: self, sig }
    }
}

pub struct SubstDisplay<'a> {
    subst: &'a Substitution,
    sig: &'a Signature,
}

impl fmt::Display for SubstDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.subst.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} |-> {}", x.name, t.display(self.sig))?;
        }
        write!(f, "}}")
    }
}
