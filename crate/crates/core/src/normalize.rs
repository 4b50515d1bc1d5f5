//! Rewriting with the oriented equations of a theory modulo its axioms.

use std::fmt;

use crate::axunify::match_first;
use crate::error::{Error, Result};
use crate::sigterm::{Position, Signature, Substitution, Term};
use crate::theoryparse::Theory;
use crate::Ctx;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub pos: Position,
    pub rule: String,
    pub matcher: Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub start: Term,
    pub steps: Vec<Step>,
    pub result: Term,
}

impl RewriteTrace {
    pub fn display<'a>(&'a self, sig: &'a Signature) -> TraceDisplay<'a> {
        TraceDisplay { trace: self, sig }
    }

    /// Re-applies every step to `start`; `None` if some step does not apply.
    pub fn replay(&self, th: &Theory) -> Option<Term> {
        let mut t = self.start.clone();
        for step in &self.steps {
            let rule = th.rules.iter().find(|r| r.label == step.rule)?;
            let at = t.subterm_at(&step.pos).ok()?;
            if step.matcher.apply(&th.sig, &rule.lhs) != *at {
                return None;
            }
            t = t.replace_at(&th.sig, &step.pos, step.matcher.apply(&th.sig, &rule.rhs)).ok()?;
        }
        Some(t)
    }
}

pub struct TraceDisplay<'a> {
    trace: &'a RewriteTrace,
    sig: &'a Signature,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.trace.steps {
            writeln!(f, "pos={} rule={} matcher={}", s.pos, s.rule, s.matcher.display(self.sig))?;
        }
        Ok(())
    }
}

/// First rule, in declaration order, whose lhs matches `t` at the root.
fn root_redex(th: &Theory, t: &Term) -> Option<(usize, Substitution)> {
    let op = t.root()?;
    th.rules_for(op).iter().find_map(|&i| {
        match_first(&th.sig, &[(th.rules[i].lhs.clone(), t.clone())]).map(|m| (i, m))
    })
}

/// One innermost-leftmost rewrite step, or `None` on a normal form.
pub fn rewrite_step(th: &Theory, t: &Term) -> Option<(Term, Step)> {
    fn find(th: &Theory, t: &Term, path: &mut Vec<usize>) -> Option<(Position, usize, Substitution)> {
        for (i, a) in t.args().iter().enumerate() {
            path.push(i + 1);
            let hit = find(th, a, path);
            path.pop();
            if hit.is_some() {
                return hit;
            }
        }
        root_redex(th, t).map(|(r, m)| (Position::from(path.clone()), r, m))
    }
    let (pos, r, matcher) = find(th, t, &mut Vec::new())?;
    let rule = &th.rules[r];
    let next = t
        .replace_at(&th.sig, &pos, matcher.apply(&th.sig, &rule.rhs))
        .expect("redex position exists");
    Some((
        next,
        Step {
            pos,
            rule: rule.label.clone(),
            matcher,
        },
    ))
}

pub fn is_normal_form(th: &Theory, t: &Term) -> bool {
    rewrite_step(th, t).is_none()
}

/// `t↓`, bottom-up innermost.
pub fn normalize(th: &Theory, ctx: &Ctx, t: &Term) -> Result<Term> {
    let mut steps = 0usize;
    norm(th, ctx.limits.step_budget, t, &mut steps)
}

fn norm(th: &Theory, budget: usize, t: &Term, steps: &mut usize) -> Result<Term> {
    let Term::App(op, args) = t else {
        return Ok(t.clone());
    };
    let args = args
        .iter()
        .map(|a| norm(th, budget, a, steps))
        .collect::<Result<Vec<_>>>()?;
    let t = th.sig.mk(*op, args);
    match root_redex(th, &t) {
        None => Ok(t),
        Some((r, m)) => {
            *steps += 1;
            if *steps > budget {
                return Err(Error::StepBudgetExceeded(budget));
            }
            norm(th, budget, &m.apply(&th.sig, &th.rules[r].rhs), steps)
        }
    }
}

/// Normal form together with the innermost-leftmost derivation reaching it.
pub fn normalize_traced(th: &Theory, ctx: &Ctx, t: &Term) -> Result<RewriteTrace> {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    while let Some((next, step)) = rewrite_step(th, &cur) {
        if steps.len() >= ctx.limits.step_budget {
            return Err(Error::StepBudgetExceeded(ctx.limits.step_budget));
        }
        steps.push(step);
        cur = next;
    }
    Ok(RewriteTrace {
        start: t.clone(),
        steps,
        result: cur,
    })
}

/// Normalizes every image of `s`.
pub fn normalize_subst(th: &Theory, ctx: &Ctx, s: &Substitution) -> Result<Substitution> {
    let mut out = Substitution::new();
    for (x, t) in s.iter() {
        out.insert(x.clone(), normalize(th, ctx, t)?);
    }
    Ok(out)
}
