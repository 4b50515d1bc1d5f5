//! Matching modulo free, comm and AC operators.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::sigterm::{OpId, Signature, Substitution, Term, Var};

type Bindings = BTreeMap<Var, Term>;

#[derive(Debug, Clone)]
enum Goal {
    Match(Term, Term),
    Ac {
        op: OpId,
        nonvar: Vec<Term>,
        vars: Vec<(Var, usize)>,
        subject: Vec<(Term, usize)>,
    },
}

struct Matcher<'a> {
    sig: &'a Signature,
    protected: &'a BTreeSet<Var>,
}

fn group(items: &[Term]) -> Vec<(Term, usize)> {
    let mut out: Vec<(Term, usize)> = Vec::new();
    for t in items {
        match out.last_mut() {
            Some((u, n)) if u == t => *n += 1,
            _ => out.push((t.clone(), 1)),
        }
    }
    out
}

impl Matcher<'_> {
    fn bind(&self, b: &mut Bindings, x: &Var, t: Term) -> bool {
        if self.protected.contains(x) {
            return t.as_var() == Some(x);
        }
        match b.get(x) {
            Some(v) => *v == t,
            None => {
                if !self.sig.leq(self.sig.least_sort(&t), x.sort) {
                    return false;
                }
                b.insert(x.clone(), t);
                true
            }
        }
    }

    /// Removes the next goal to solve: plain matches first, then the AC goal
    /// with the fewest choices left.
    fn pick(&self, goals: &mut Vec<Goal>, b: &Bindings) -> Option<Goal> {
        if matches!(goals.last(), Some(Goal::Match(..))) {
            return goals.pop();
        }
        if let Some(i) = goals.iter().rposition(|g| matches!(g, Goal::Match(..))) {
            return Some(goals.remove(i));
        }
        let cost = |g: &Goal| match g {
            Goal::Ac { nonvar, vars, .. } => {
                let unbound = vars.iter().filter(|(x, _)| !b.contains_key(x)).count();
                match (nonvar.len(), unbound) {
                    (0, 0 | 1) => 0,
                    (0, n) => 100 + n,
                    (n, _) => n,
                }
            }
            Goal::Match(..) => 0,
        };
        let i = (0..goals.len()).rev().min_by_key(|&i| cost(&goals[i]))?;
        Some(goals.remove(i))
    }

    fn run(
        &self,
        mut goals: Vec<Goal>,
        mut b: Bindings,
        k: &mut dyn FnMut(&Bindings) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        while let Some(goal) = self.pick(&mut goals, &b) {
            match goal {
                Goal::Match(p, s) => match p {
                    Term::Var(x) => {
                        if !self.bind(&mut b, &x, s) {
                            return ControlFlow::Continue(());
                        }
                    }
                    Term::App(f, pargs) => {
                        let Term::App(g, sargs) = s else {
                            return ControlFlow::Continue(());
                        };
                        if f != g {
                            return ControlFlow::Continue(());
                        }
                        let attrs = self.sig.op(f).attrs;
                        if attrs.is_ac() {
                            if pargs.len() > sargs.len() {
                                return ControlFlow::Continue(());
                            }
                            let mut nonvar = Vec::new();
                            let mut vars: Vec<(Var, usize)> = Vec::new();
                            for a in pargs {
                                match a {
                                    Term::Var(x) if !self.protected.contains(&x) => {
                                        match vars.iter_mut().find(|(y, _)| *y == x) {
                                            Some((_, n)) => *n += 1,
                                            None => vars.push((x, 1)),
                                        }
                                    }
                                    other => nonvar.push(other),
                                }
                            }
                            goals.push(Goal::Ac {
                                op: f,
                                nonvar,
                                vars,
                                subject: group(&sargs),
                            });
                        } else if attrs.comm {
                            if pargs.len() != 2 || sargs.len() != 2 {
                                return ControlFlow::Continue(());
                            }
                            if sargs[0] != sargs[1] {
                                let mut alt = goals.clone();
                                alt.push(Goal::Match(pargs[1].clone(), sargs[0].clone()));
                                alt.push(Goal::Match(pargs[0].clone(), sargs[1].clone()));
                                self.run(alt, b.clone(), k)?;
                            }
                            goals.push(Goal::Match(pargs[1].clone(), sargs[1].clone()));
                            goals.push(Goal::Match(pargs[0].clone(), sargs[0].clone()));
                        } else {
                            if pargs.len() != sargs.len() {
                                return ControlFlow::Continue(());
                            }
                            for (p, s) in pargs.into_iter().zip(sargs).rev() {
                                goals.push(Goal::Match(p, s));
                            }
                        }
                    }
                },
                Goal::Ac {
                    op,
                    mut nonvar,
                    vars,
                    subject,
                } => {
                    if let Some(q) = nonvar.pop() {
                        for i in 0..subject.len() {
                            if subject[i].1 == 0 {
                                continue;
                            }
                            let e = &subject[i].0;
                            let compatible = match (&q, e) {
                                (Term::App(f, _), Term::App(g, _)) => f == g,
                                (Term::Var(_), _) => true,
                                _ => false,
                            };
                            if !compatible {
                                continue;
                            }
                            let mut sub = subject.clone();
                            sub[i].1 -= 1;
                            let mut alt = goals.clone();
                            alt.push(Goal::Ac {
                                op,
                                nonvar: nonvar.clone(),
                                vars: vars.clone(),
                                subject: sub,
                            });
                            alt.push(Goal::Match(q.clone(), e.clone()));
                            self.run(alt, b.clone(), k)?;
                        }
                        return ControlFlow::Continue(());
                    }
                    let mut subject = subject;
                    let mut unbound: Vec<(Var, usize)> = Vec::new();
                    for (x, m) in vars {
                        let Some(v) = b.get(&x) else {
                            unbound.push((x, m));
                            continue;
                        };
                        let pieces: Vec<Term> = match v {
                            Term::App(g, inner) if *g == op => inner.clone(),
                            other => vec![other.clone()],
                        };
                        for piece in pieces {
                            match subject.iter_mut().find(|(t, _)| *t == piece) {
                                Some((_, n)) if *n >= m => *n -= m,
                                _ => return ControlFlow::Continue(()),
                            }
                        }
                    }
                    subject.retain(|(_, n)| *n > 0);
                    match unbound.len() {
                        0 => {
                            if !subject.is_empty() {
                                return ControlFlow::Continue(());
                            }
                        }
                        1 => {
                            let (x, m) = &unbound[0];
                            if subject.is_empty() || subject.iter().any(|(_, n)| n % m != 0) {
                                return ControlFlow::Continue(());
                            }
                            let items: Vec<Term> = subject
                                .iter()
                                .flat_map(|(t, n)| std::iter::repeat(t.clone()).take(n / m))
                                .collect();
                            let value = self.sig.mk_ac(op, items);
                            if !self.bind(&mut b, x, value) {
                                return ControlFlow::Continue(());
                            }
                        }
                        _ => {
                            // split the variable with the fewest choices first
                            let caps: Vec<Vec<usize>> =
                                unbound.iter().map(|(x, m)| caps(op, x, *m, &subject, &goals)).collect();
                            let space = |c: &Vec<usize>| c.iter().fold(1usize, |a, &n| a.saturating_mul(n + 1));
                            let best = (0..unbound.len()).min_by_key(|&j| space(&caps[j])).unwrap_or(0);
                            unbound.swap(0, best);
                            let cap = &caps[best];
                            let (x, m) = unbound[0].clone();
                            let rest_need: usize = unbound[1..].iter().map(|(_, n)| n).sum();
                            let total: usize = subject.iter().map(|(_, n)| n).sum();
                            let mut choice = vec![0usize; subject.len()];
                            loop {
                                // advance odometer
                                let mut i = 0;
                                while i < choice.len() {
                                    choice[i] += 1;
                                    if choice[i] <= cap[i] {
                                        break;
                                    }
                                    choice[i] = 0;
                                    i += 1;
                                }
                                if i == choice.len() {
                                    break;
                                }
                                let taken: usize = choice.iter().sum::<usize>() * m;
                                if total - taken < rest_need {
                                    continue;
                                }
                                let items: Vec<Term> = subject
                                    .iter()
                                    .zip(&choice)
                                    .flat_map(|((t, _), &c)| std::iter::repeat(t.clone()).take(c))
                                    .collect();
                                let value = self.sig.mk_ac(op, items);
                                let mut b2 = b.clone();
                                if !self.bind(&mut b2, &x, value) {
                                    continue;
                                }
                                let sub: Vec<(Term, usize)> = subject
                                    .iter()
                                    .zip(&choice)
                                    .map(|((t, n), &c)| (t.clone(), n - c * m))
                                    .collect();
                                let mut alt = goals.clone();
                                alt.push(Goal::Ac {
                                    op,
                                    nonvar: Vec::new(),
                                    vars: unbound[1..].to_vec(),
                                    subject: sub,
                                });
                                self.run(alt, b2, k)?;
                            }
                            return ControlFlow::Continue(());
                        }
                    }
                }
            }
        }
        k(&b)
    }
}

/// Upper bound on how often each subject element can occur in the value of
/// `x`, using every pending goal under the same operator that mentions `x`.
fn caps(op: OpId, x: &Var, m: usize, subject: &[(Term, usize)], goals: &[Goal]) -> Vec<usize> {
    let mut cap: Vec<usize> = subject.iter().map(|(_, n)| n / m).collect();
    for g in goals {
        let Goal::Ac { op: g_op, vars, subject: other, .. } = g else {
            continue;
        };
        if *g_op != op {
            continue;
        }
        let Some(&(_, k)) = vars.iter().find(|(y, _)| y == x) else {
            continue;
        };
        for (c, (t, _)) in cap.iter_mut().zip(subject) {
            let avail = other.iter().find(|(u, _)| u == t).map_or(0, |(_, n)| *n);
            *c = (*c).min(avail / k);
        }
    }
    cap
}

fn to_subst(b: &Bindings) -> Substitution {
    Substitution::from_pairs(
        b.iter()
            .filter(|(x, t)| t.as_var() != Some(*x))
            .map(|(x, t)| (x.clone(), t.clone())),
    )
}

/// Enumerates matchers of `pattern_i` onto `subject_i` for all pairs at
/// once, starting from `init`. `protected` variables only match themselves.
pub fn match_pairs_with(
    sig: &Signature,
    pairs: &[(Term, Term)],
    protected: &BTreeSet<Var>,
    init: &Substitution,
    mut k: impl FnMut(&Substitution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let m = Matcher { sig, protected };
    let goals: Vec<Goal> = pairs
        .iter()
        .rev()
        .map(|(p, s)| Goal::Match(p.clone(), s.clone()))
        .collect();
    let b: Bindings = init.iter().map(|(x, t)| (x.clone(), t.clone())).collect();
    m.run(goals, b, &mut |b| k(&to_subst(b)))
}

/// Complete set of B-matchers of `pattern` onto `subject`, sorted and deduplicated.
pub fn b_match(sig: &Signature, pattern: &Term, subject: &Term, protected: &BTreeSet<Var>) -> Vec<Substitution> {
    let mut out = BTreeSet::new();
    let _ = match_pairs_with(
        sig,
        &[(pattern.clone(), subject.clone())],
        protected,
        &Substitution::new(),
        |s| {
            out.insert(s.clone());
            ControlFlow::Continue(())
        },
    );
    out.into_iter().collect()
}

/// First matcher found for all pairs, if any.
pub fn match_first(sig: &Signature, pairs: &[(Term, Term)]) -> Option<Substitution> {
    let mut found = None;
    let _ = match_pairs_with(sig, pairs, &BTreeSet::new(), &Substitution::new(), |s| {
        found = Some(s.clone());
        ControlFlow::Break(())
    });
    found
}

/// `general` B-matches onto `instance`.
pub fn is_instance(sig: &Signature, general: &Term, instance: &Term) -> bool {
    match_first(sig, &[(general.clone(), instance.clone())]).is_some()
}
