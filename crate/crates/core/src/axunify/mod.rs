//! Equality, matching and unification modulo the structural axioms
//! (associativity-commutativity and commutativity) of a signature.

pub mod dioph;
mod matching;

use std::collections::{BTreeMap, BTreeSet};

pub use matching::{b_match, is_instance, match_first, match_pairs_with};

use crate::error::Result;
use crate::sigterm::{OpId, Signature, SortId, Substitution, Term, Var};
use crate::Ctx;

/// Equality modulo the axioms. Terms are kept canonical, so this is `==`.
pub fn b_equal(t: &Term, u: &Term) -> bool {
    t == u
}

/// Complete, duplicate-free set of B-unifiers of the conjunction `pairs`.
///
/// Each unifier binds exactly the variables of `pairs` that it does not map
/// to themselves. Range variables never belong to `avoid` or to the problem:
/// they are minted by `ctx.fresh` as `%n`.
pub fn b_unify(
    sig: &Signature,
    ctx: &mut Ctx,
    pairs: &[(Term, Term)],
    avoid: &BTreeSet<Var>,
) -> Result<Vec<Substitution>> {
    b_unify_frozen(sig, ctx, pairs, avoid, &BTreeSet::new())
}

/// [`b_unify`] where the `frozen` variables behave as constants.
pub fn b_unify_frozen(
    sig: &Signature,
    ctx: &mut Ctx,
    pairs: &[(Term, Term)],
    avoid: &BTreeSet<Var>,
    frozen: &BTreeSet<Var>,
) -> Result<Vec<Substitution>> {
    unify_with(sig, ctx, pairs, avoid, frozen, None)
}

/// [`b_unify`] restricted to the unifiers no partial solution of which
/// satisfies `dead`. `dead` must be stable under instantiation: once it holds
/// for a substitution it holds for every instance.
pub fn b_unify_pruned(
    sig: &Signature,
    ctx: &mut Ctx,
    pairs: &[(Term, Term)],
    avoid: &BTreeSet<Var>,
    dead: &dyn Fn(&Substitution) -> bool,
) -> Result<Vec<Substitution>> {
    unify_with(sig, ctx, pairs, avoid, &BTreeSet::new(), Some(dead))
}

fn unify_with(
    sig: &Signature,
    ctx: &mut Ctx,
    pairs: &[(Term, Term)],
    avoid: &BTreeSet<Var>,
    frozen: &BTreeSet<Var>,
    dead: Option<&dyn Fn(&Substitution) -> bool>,
) -> Result<Vec<Substitution>> {
    let mut problem_vars = BTreeSet::new();
    for (l, r) in pairs {
        l.collect_vars(&mut problem_vars);
        r.collect_vars(&mut problem_vars);
    }
    let mut raw = Vec::new();
    {
        let mut u = Unifier { sig, ctx, frozen, dead, out: &mut raw };
        u.solve(pairs.iter().rev().cloned().collect(), Substitution::new())?;
    }
    problem_vars.retain(|v| !frozen.contains(v));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in raw {
        let s = away_from(sig, ctx, &s.restrict(&problem_vars), &problem_vars, avoid);
        if seen.insert(canonical(sig, &s)) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Renames range variables that are problem variables or in `avoid` to
/// fresh `%` variables, so that the result is idempotent and fresh.
fn away_from(
    sig: &Signature,
    ctx: &mut Ctx,
    s: &Substitution,
    problem: &BTreeSet<Var>,
    avoid: &BTreeSet<Var>,
) -> Substitution {
    let mut order = Vec::new();
    for x in problem {
        s.image(x).vars_in_order(&mut order);
    }
    let mut ren = Substitution::new();
    for y in order {
        if problem.contains(&y) || avoid.contains(&y) {
            let z = ctx.fresh.fresh_pct(y.sort);
            ren.insert(y, Term::Var(z));
        }
    }
    if ren.is_empty() {
        return s.clone();
    }
    let mut out = Substitution::new();
    for x in problem {
        let img = ren.apply(sig, &s.image(x));
        out.insert(x.clone(), img);
    }
    out
}

/// Representative of the renaming class of `s` on its domain.
fn canonical(sig: &Signature, s: &Substitution) -> Substitution {
    let mut order = Vec::new();
    for (_, t) in s.iter() {
        t.vars_in_order(&mut order);
    }
    let ren = Substitution::from_pairs(
        order
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Term::Var(Var::new(&format!("?{i}"), v.sort)))),
    );
    s.map_images(|t| ren.apply(sig, t))
}

struct Unifier<'a> {
    sig: &'a Signature,
    ctx: &'a mut Ctx,
    frozen: &'a BTreeSet<Var>,
    dead: Option<&'a dyn Fn(&Substitution) -> bool>,
    out: &'a mut Vec<Substitution>,
}

impl Unifier<'_> {
    /// Depth-first over the equation stack; solutions are pushed to `out`.
    fn solve(&mut self, mut eqs: Vec<(Term, Term)>, mut s: Substitution) -> Result<()> {
        self.ctx.check_deadline()?;
        let mut dirty = true;
        while let Some((l, r)) = eqs.pop() {
            if dirty && self.dead.is_some_and(|d| d(&s)) {
                return Ok(());
            }
            dirty = false;
            let l = s.apply(self.sig, &l);
            let r = s.apply(self.sig, &r);
            if l == r {
                continue;
            }
            match (l, r) {
                (Term::Var(x), Term::Var(y)) if self.frozen.contains(&x) || self.frozen.contains(&y) => {
                    let (c, v) = if self.frozen.contains(&x) { (x, y) } else { (y, x) };
                    if self.frozen.contains(&v) || !self.sig.leq(c.sort, v.sort) {
                        return Ok(());
                    }
                    s.bind(self.sig, v, Term::Var(c));
                    dirty = true;
                }
                (Term::Var(x), Term::Var(y)) => {
                    let (xs, ys) = (x.sort, y.sort);
                    dirty = true;
                    if self.sig.leq(ys, xs) {
                        s.bind(self.sig, x, Term::Var(y));
                    } else if self.sig.leq(xs, ys) {
                        s.bind(self.sig, y, Term::Var(x));
                    } else {
                        let glbs = self.sig.maximal_lower_bounds(xs, ys);
                        for g in glbs {
                            let z = Term::Var(self.ctx.fresh.fresh_pct(g));
                            let mut s2 = s.clone();
                            s2.bind(self.sig, x.clone(), z.clone());
                            s2.bind(self.sig, y.clone(), z);
                            self.solve(eqs.clone(), s2)?;
                        }
                        return Ok(());
                    }
                }
                (Term::Var(x), t) | (t, Term::Var(x)) => {
                    if self.frozen.contains(&x) || t.contains_var(&x) || !self.sig.leq(self.sig.least_sort(&t), x.sort) {
                        return Ok(());
                    }
                    s.bind(self.sig, x, t);
                    dirty = true;
                }
                (Term::App(f, fa), Term::App(g, ga)) => {
                    if f != g {
                        return Ok(());
                    }
                    let attrs = self.sig.op(f).attrs;
                    if attrs.is_ac() {
                        return self.ac_step(f, fa, ga, eqs, s);
                    } else if attrs.comm {
                        if fa[0] != fa[1] && ga[0] != ga[1] {
                            let mut alt = eqs.clone();
                            alt.push((fa[0].clone(), ga[1].clone()));
                            alt.push((fa[1].clone(), ga[0].clone()));
                            self.solve(alt, s.clone())?;
                        }
                        eqs.push((fa[1].clone(), ga[1].clone()));
                        eqs.push((fa[0].clone(), ga[0].clone()));
                    } else {
                        if fa.len() != ga.len() {
                            return Ok(());
                        }
                        eqs.extend(fa.into_iter().zip(ga).rev());
                    }
                }
            }
        }
        if dirty && self.dead.is_some_and(|d| d(&s)) {
            return Ok(());
        }
        self.out.push(s);
        Ok(())
    }

    fn ac_step(
        &mut self,
        op: OpId,
        left: Vec<Term>,
        right: Vec<Term>,
        eqs: Vec<(Term, Term)>,
        s: Substitution,
    ) -> Result<()> {
        // pending equations under the same operator are solved jointly
        let mut system = vec![cancel(left, right)];
        let mut eqs_rest = Vec::with_capacity(eqs.len());
        for (l, r) in eqs {
            match (s.apply(self.sig, &l), s.apply(self.sig, &r)) {
                (Term::App(f, fa), Term::App(g, ga)) if f == op && g == op => system.push(cancel(fa, ga)),
                _ => eqs_rest.push((l, r)),
            }
        }
        let eqs = eqs_rest;
        system.retain(|(l, r)| !(l.is_empty() && r.is_empty()));
        if system.iter().any(|(l, r)| l.is_empty() || r.is_empty()) {
            return Ok(());
        }
        if system.is_empty() {
            return self.solve(eqs, s);
        }
        let mut items: Vec<Term> = Vec::new();
        let mut column: BTreeMap<Term, usize> = BTreeMap::new();
        for (l, r) in &system {
            for (t, _) in l.iter().chain(r) {
                column.entry(t.clone()).or_insert_with(|| {
                    items.push(t.clone());
                    items.len() - 1
                });
            }
        }
        let alien: Vec<bool> = items
            .iter()
            .map(|t| !matches!(t, Term::Var(v) if !self.frozen.contains(v)))
            .collect();
        let upper: Vec<Option<u32>> = alien.iter().map(|&al| al.then_some(1)).collect();
        let cap = self.ctx.limits.dioph_cap;
        let basis = if let [(l, r)] = system.as_slice() {
            let a: Vec<u32> = l.iter().map(|(_, n)| *n).collect();
            let b: Vec<u32> = r.iter().map(|(_, n)| *n).collect();
            dioph::minimal_solutions(&a, &b, &upper, cap)?
        } else {
            let rows: Vec<Vec<i64>> = system
                .iter()
                .map(|(l, r)| {
                    let mut row = vec![0i64; items.len()];
                    for (t, n) in l {
                        row[column[t]] += i64::from(*n);
                    }
                    for (t, n) in r {
                        row[column[t]] -= i64::from(*n);
                    }
                    row
                })
                .collect();
            dioph::minimal_system_solutions(&rows, &upper, cap)?
        };
        let counted: Vec<(Term, u32)> = items.iter().map(|t| (t.clone(), 0)).collect();
        let zsort = self.fresh_sort(op, &counted);
        let subsets = cover_subsets(&basis, &alien, cap)?;
        for chosen in subsets {
            let zs: Vec<Term> = chosen
                .iter()
                .map(|_| Term::Var(self.ctx.fresh.fresh_pct(zsort)))
                .collect();
            let mut alt = eqs.clone();
            for (i, item) in items.iter().enumerate() {
                let mut parts = Vec::new();
                for (k, &bi) in chosen.iter().enumerate() {
                    for _ in 0..basis[bi][i] {
                        parts.push(zs[k].clone());
                    }
                }
                alt.push((item.clone(), self.sig.mk_ac(op, parts)));
            }
            // bind the variable items before the aliens are decomposed
            alt.sort_by_key(|(t, _)| matches!(t, Term::Var(v) if !self.frozen.contains(v)));
            self.solve(alt, s.clone())?;
        }
        Ok(())
    }

    /// The kind when some variable argument ranges over the kind, the
    /// component's top sort otherwise.
    fn fresh_sort(&self, op: OpId, items: &[(Term, u32)]) -> SortId {
        let arg = self.sig.op(op).arg_sorts[0];
        let kind = self.sig.kind_of(arg);
        if items.iter().any(|(t, _)| matches!(t, Term::Var(v) if v.sort == kind)) {
            kind
        } else {
            self.sig.top_of(arg)
        }
    }
}

/// Multiset difference in both directions, grouped with multiplicities.
fn cancel(left: Vec<Term>, right: Vec<Term>) -> (Vec<(Term, u32)>, Vec<(Term, u32)>) {
    let mut count: BTreeMap<Term, i64> = BTreeMap::new();
    for t in left {
        *count.entry(t).or_default() += 1;
    }
    for t in right {
        *count.entry(t).or_default() -= 1;
    }
    let mut l = Vec::new();
    let mut r = Vec::new();
    for (t, n) in count {
        if n > 0 {
            l.push((t, n as u32));
        } else if n < 0 {
            r.push((t, (-n) as u32));
        }
    }
    (l, r)
}

/// Subsets of `basis` whose sum is positive on every component and exactly
/// one on alien components.
fn cover_subsets(basis: &[Vec<u32>], alien: &[bool], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = alien.len();
    // avail[k][i]: some vector at index >= k is non-zero at i
    let mut avail = vec![vec![false; n]; basis.len() + 1];
    for k in (0..basis.len()).rev() {
        for i in 0..n {
            avail[k][i] = avail[k + 1][i] || basis[k][i] > 0;
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut cover = vec![0u32; n];
    let mut steps = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        basis: &[Vec<u32>],
        alien: &[bool],
        avail: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        cover: &mut [u32],
        out: &mut Vec<Vec<usize>>,
        steps: &mut usize,
        cap: usize,
    ) -> Result<()> {
        *steps += 1;
        if *steps > cap {
            return Err(crate::Error::DiophantineExplosion(cap));
        }
        if (0..cover.len()).any(|i| cover[i] == 0 && !avail[k][i]) {
            return Ok(());
        }
        if k == basis.len() {
            out.push(chosen.clone());
            return Ok(());
        }
        let v = &basis[k];
        if (0..cover.len()).all(|i| !alien[i] || cover[i] + v[i] <= 1) {
            chosen.push(k);
            for i in 0..cover.len() {
                cover[i] += v[i];
            }
            go(k + 1, basis, alien, avail, chosen, cover, out, steps, cap)?;
            for i in 0..cover.len() {
                cover[i] -= v[i];
            }
            chosen.pop();
        }
        go(k + 1, basis, alien, avail, chosen, cover, out, steps, cap)
    }
    go(0, basis, alien, &avail, &mut chosen, &mut cover, &mut out, &mut steps, cap)?;
    Ok(out)
}

#[cfg(test)]
mod tests;
