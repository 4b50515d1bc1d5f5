//! Variant-based unification: the baseline intersection of variant sets,
//! subsumption-minimized (`fast`), constructor-root incremental (`cr`) and
//! their combination (`cr-fast`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::axunify::{b_match, b_unify, b_unify_frozen, b_unify_pruned, match_first};
use crate::error::{Error, Result};
use crate::normalize::{is_normal_form, normalize};
use crate::sigterm::{Position, Signature, Substitution, Term, Var};
use crate::theoryparse::Theory;
use crate::varnarrow::{get_variants, variant_vars, NodeStatus, Variant, VariantTree};
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Maude,
    Fast,
    Cr,
    CrFast,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Maude, Algo::Fast, Algo::Cr, Algo::CrFast];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Maude => "maude",
            Algo::Fast => "fast",
            Algo::Cr => "cr",
            Algo::CrFast => "cr-fast",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algo> {
        match s {
            "maude" => Ok(Algo::Maude),
            "fast" => Ok(Algo::Fast),
            "cr" => Ok(Algo::Cr),
            "cr-fast" | "crfast" => Ok(Algo::CrFast),
            other => Err(Error::Load(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// `t1 =? t2` with its shared and total variables in first-occurrence order.
#[derive(Debug, Clone)]
pub struct UnifQuery {
    pub t1: Term,
    pub t2: Term,
    pub w_cap: Vec<Var>,
    pub w_cup: Vec<Var>,
}

impl UnifQuery {
    pub fn new(t1: Term, t2: Term) -> UnifQuery {
        let mut v1 = Vec::new();
        t1.vars_in_order(&mut v1);
        let mut v2 = Vec::new();
        t2.vars_in_order(&mut v2);
        let w_cap = v1.iter().filter(|x| v2.contains(x)).cloned().collect();
        let mut w_cup = v1;
        for x in v2 {
            if !w_cup.contains(&x) {
                w_cup.push(x);
            }
        }
        UnifQuery { t1, t2, w_cap, w_cup }
    }

    /// A conjunction of `k > 1` equations becomes one equation between tuples.
    pub fn from_pairs(sig: &Signature, pairs: &[(Term, Term)]) -> Result<UnifQuery> {
        match pairs {
            [] => Err(Error::Load("empty unification problem".into())),
            [(l, r)] => Ok(UnifQuery::new(l.clone(), r.clone())),
            _ => {
                let tuple = sig.tuple_op(pairs.len())?;
                let ls = pairs.iter().map(|(l, _)| l.clone()).collect();
                let rs = pairs.iter().map(|(_, r)| r.clone()).collect();
                Ok(UnifQuery::new(Term::App(tuple, ls), Term::App(tuple, rs)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// A user bound cut the list.
    Truncated(usize),
    /// Subsumption could not be decided for some unifier, which was kept.
    Unminimized,
}

#[derive(Debug, Clone)]
pub struct UnifierSet {
    pub unifiers: Vec<Substitution>,
    pub status: Status,
}

impl UnifierSet {
    fn complete(unifiers: Vec<Substitution>) -> UnifierSet {
        UnifierSet {
            unifiers,
            status: Status::Complete,
        }
    }

    pub fn len(&self) -> usize {
        self.unifiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unifiers.is_empty()
    }

    fn truncate(mut self, bound: Option<usize>) -> UnifierSet {
        if let Some(n) = bound {
            if self.unifiers.len() > n {
                self.unifiers.truncate(n);
                self.status = Status::Truncated(n);
            }
        }
        self
    }
}

/// B-unifiers of `u1 = u2` that also make the shared variables agree:
/// `θ1(x) = θ2(x)` for `x ∈ W∩` is solved in the same problem. Unifiers
/// binding a variant variable to a reducible term are skipped; the normal
/// form of such an instance is reached through another variant pair.
fn pair_unifiers(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, v1: &Variant, v2: &Variant) -> Result<Vec<Substitution>> {
    let mut pairs = vec![(v1.term.clone(), v2.term.clone())];
    for x in &q.w_cap {
        pairs.push((v1.subst.image(x), v2.subst.image(x)));
    }
    let mut vvars = variant_vars(v1);
    vvars.extend(variant_vars(v2));
    let dead = |s: &Substitution| {
        vvars.iter().any(|y| s.get(y).is_some_and(|img| !img.is_var() && !is_normal_form(th, img)))
    };
    b_unify_pruned(&th.sig, ctx, &pairs, &BTreeSet::new(), &dead)
}

/// `((θ1 ∪ θ2)σ)|W∪` with normalized images.
fn combine(th: &Theory, ctx: &Ctx, q: &UnifQuery, v1: &Variant, v2: &Variant, sigma: &Substitution) -> Result<Substitution> {
    let v1vars: BTreeSet<&Var> = v1.subst.domain().collect();
    let mut out = Substitution::new();
    for x in &q.w_cup {
        let base = if v1vars.contains(x) { v1.subst.image(x) } else { v2.subst.image(x) };
        out.insert(x.clone(), normalize(th, ctx, &sigma.apply(&th.sig, &base))?);
    }
    Ok(out)
}

fn size_on(s: &Substitution, vars: &[Var]) -> usize {
    vars.iter().map(|x| s.image(x).size()).sum()
}

/// `general` B-matches onto `inst` on `vars`.
pub fn b_subsumes(sig: &Signature, vars: &[Var], general: &Substitution, inst: &Substitution) -> bool {
    if size_on(general, vars) > size_on(inst, vars) {
        return false;
    }
    let pairs: Vec<(Term, Term)> = vars.iter().map(|x| (general.image(x), inst.image(x))).collect();
    match_first(sig, &pairs).is_some()
}

/// Drops unifiers that are B-instances of another one on `vars`; of two
/// B-equivalent unifiers the first is kept.
pub fn prune_instances(sig: &Signature, vars: &[Var], us: Vec<Substitution>) -> Vec<Substitution> {
    let n = us.len();
    let mut dropped = vec![false; n];
    for j in 0..n {
        for i in 0..n {
            if i == j || dropped[i] || !b_subsumes(sig, vars, &us[i], &us[j]) {
                continue;
            }
            if i < j || !b_subsumes(sig, vars, &us[j], &us[i]) {
                dropped[j] = true;
                break;
            }
        }
    }
    us.into_iter().zip(dropped).filter(|(_, d)| !d).map(|(u, _)| u).collect()
}

/// Unifiers of all pairs from `v1 × v2`, B-instance pruned.
pub fn variant_intersect(
    th: &Theory,
    ctx: &mut Ctx,
    q: &UnifQuery,
    v1: &[Variant],
    v2: &[Variant],
) -> Result<Vec<Substitution>> {
    let mut raw = Vec::new();
    let mut seen = BTreeSet::new();
    for a in v1 {
        for b in v2 {
            ctx.check_deadline()?;
            for sigma in pair_unifiers(th, ctx, q, a, b)? {
                let u = combine(th, ctx, q, a, b, &sigma)?;
                if seen.insert(canonical(&th.sig, q, &u)) {
                    raw.push(u);
                }
            }
        }
    }
    Ok(prune_instances(&th.sig, &q.w_cup, raw))
}

/// Variant unification over the complete variant sets of both sides.
pub fn unify_baseline(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, bound: Option<usize>) -> Result<UnifierSet> {
    let v1 = get_variants(th, ctx, &q.t1, None)?;
    let v2 = get_variants(th, ctx, &q.t2, None)?;
    Ok(UnifierSet::complete(variant_intersect(th, ctx, q, &v1, &v2)?).truncate(bound))
}

/// Variants of unifier images, computed once per term.
#[derive(Default)]
struct VariantCache {
    by_term: HashMap<Term, Option<Vec<Variant>>>,
}

impl VariantCache {
    /// `None` when generation hits a limit.
    fn get(&mut self, th: &Theory, ctx: &mut Ctx, t: &Term) -> Result<Option<&[Variant]>> {
        if !self.by_term.contains_key(t) {
            let got = match get_variants(th, ctx, t, None) {
                Ok(vs) => Some(vs),
                Err(Error::VariantBoundExceeded(_) | Error::DiophantineExplosion(_) | Error::StepBudgetExceeded(_)) => None,
                Err(e) => return Err(e),
            };
            self.by_term.insert(t.clone(), got);
        }
        Ok(self.by_term[t].as_deref())
    }
}

/// `σ ⊒ ρ` modulo E∪B on `vars`, with the variables of `ρ` frozen. For each
/// `x` a variant `(v, θ)` of `σ(x)` B-matches `ρ(x)` by `m`; the candidate
/// instantiations `θm` of the variables of `σ` must then B-unify across all
/// `x`. `None` when variants are unavailable.
fn e_subsumes(
    th: &Theory,
    ctx: &mut Ctx,
    cache: &mut VariantCache,
    vars: &[Var],
    sigma: &Substitution,
    rho: &Substitution,
) -> Result<Option<bool>> {
    let sig = &th.sig;
    let frozen = rho.restrict(vars).range_vars();
    let mut per: Vec<Vec<Substitution>> = Vec::new();
    for x in vars {
        let (s, r) = (sigma.image(x), rho.image(x));
        let Some(vs) = cache.get(th, ctx, &s)? else {
            return Ok(None);
        };
        let vs = vs.to_vec();
        let svars = s.vars();
        let mut cands = BTreeSet::new();
        for v in &vs {
            if v.term.size() > r.size() {
                continue;
            }
            let ms = b_match(sig, &v.term, &r, &frozen);
            if ms.is_empty() {
                continue;
            }
            // variant variables left free by the matcher stay private to x
            let ren = Substitution::from_pairs(
                variant_vars(v)
                    .into_iter()
                    .map(|z| (z.clone(), Term::Var(ctx.fresh.fresh_pct(z.sort)))),
            );
            for m in ms {
                let mut g = Substitution::new();
                for y in &svars {
                    let img = v.subst.image(y);
                    let img = m.apply(sig, &img);
                    g.insert(y.clone(), ren.apply(sig, &img));
                }
                cands.insert(g);
            }
        }
        if cands.is_empty() {
            return Ok(Some(false));
        }
        per.push(cands.into_iter().collect());
    }
    per.sort_by_key(Vec::len);
    Ok(Some(consistent(sig, ctx, &frozen, &per, &Substitution::new())?))
}

/// One candidate per component whose shared variables B-unify.
fn consistent(
    sig: &Signature,
    ctx: &mut Ctx,
    frozen: &BTreeSet<Var>,
    per: &[Vec<Substitution>],
    acc: &Substitution,
) -> Result<bool> {
    let Some((first, rest)) = per.split_first() else {
        return Ok(true);
    };
    for g in first {
        let pairs: Vec<(Term, Term)> = g
            .iter()
            .filter_map(|(y, t)| acc.get(y).map(|u| (u.clone(), t.clone())))
            .collect();
        let mus = if pairs.is_empty() {
            vec![Substitution::new()]
        } else {
            b_unify_frozen(sig, ctx, &pairs, &BTreeSet::new(), frozen)?
        };
        for mu in mus {
            let mut next = Substitution::new();
            for (y, t) in acc.iter().chain(g.iter()) {
                next.insert(y.clone(), mu.apply(sig, t));
            }
            if consistent(sig, ctx, frozen, rest, &next)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Removes unifiers strictly subsumed modulo E∪B by another one, keeping
/// one representative of each equivalence class.
pub fn minimize_subsumption(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, us: Vec<Substitution>) -> Result<UnifierSet> {
    let vars = &q.w_cup;
    let mut order: Vec<usize> = (0..us.len()).collect();
    order.sort_by_key(|&i| (size_on(&us[i], vars), i));
    let mut cache = VariantCache::default();
    let mut status = Status::Complete;
    let mut kept: Vec<usize> = Vec::new();
    for &j in &order {
        ctx.check_deadline()?;
        let mut covered = false;
        for &i in &kept {
            match e_subsumes(th, ctx, &mut cache, vars, &us[i], &us[j])? {
                Some(true) => {
                    covered = true;
                    break;
                }
                Some(false) => {}
                None => status = Status::Unminimized,
            }
        }
        if covered {
            continue;
        }
        let mut still = Vec::new();
        for &k in &kept {
            match e_subsumes(th, ctx, &mut cache, vars, &us[j], &us[k])? {
                Some(true) => {}
                Some(false) => still.push(k),
                None => {
                    status = Status::Unminimized;
                    still.push(k);
                }
            }
        }
        still.push(j);
        kept = still;
    }
    kept.sort_unstable();
    Ok(UnifierSet {
        unifiers: kept.into_iter().map(|k| us[k].clone()).collect(),
        status,
    })
}

/// Instance tests modulo E∪B, sharing variant computations across calls.
#[derive(Default)]
pub struct Subsumer {
    cache: VariantCache,
}

impl Subsumer {
    pub fn new() -> Subsumer {
        Subsumer::default()
    }

    /// `ρ` is an E∪B-instance of `σ` on `vars`; `None` when the variants of
    /// some image of `σ` hit a limit. Use one `ctx` per `Subsumer`.
    pub fn subsumes(
        &mut self,
        th: &Theory,
        ctx: &mut Ctx,
        vars: &[Var],
        sigma: &Substitution,
        rho: &Substitution,
    ) -> Result<Option<bool>> {
        for x in vars {
            for v in sigma.image(x).vars().iter().chain(rho.image(x).vars().iter()) {
                ctx.fresh.reserve(v);
            }
        }
        let ren = Substitution::from_pairs(
            rho.restrict(vars)
                .range_vars()
                .into_iter()
                .map(|v| (v.clone(), Term::Var(ctx.fresh.fresh_pct(v.sort)))),
        );
        let rho = rho.map_images(|t| ren.apply(&th.sig, t));
        e_subsumes(th, ctx, &mut self.cache, vars, sigma, &rho)
    }
}

/// `x =? t` with `x ∉ Var(t)`: the single unifier `{x ↦ t↓}`.
fn variable_short_circuit(th: &Theory, ctx: &mut Ctx, q: &UnifQuery) -> Result<Option<Substitution>> {
    for (a, b) in [(&q.t1, &q.t2), (&q.t2, &q.t1)] {
        let Term::Var(x) = a else { continue };
        if b.contains_var(x) {
            continue;
        }
        let nb = normalize(th, ctx, b)?;
        if !th.sig.leq(th.sig.least_sort(&nb), x.sort) {
            continue;
        }
        // rename the other side's variables apart, as every unifier is
        let mut ren = Substitution::new();
        let mut vs = Vec::new();
        b.vars_in_order(&mut vs);
        for y in vs {
            ren.insert(y.clone(), Term::Var(ctx.fresh.fresh_pct(y.sort)));
        }
        let mut out = Substitution::new();
        for y in &q.w_cup {
            if y == x {
                out.insert(y.clone(), ren.apply(&th.sig, &nb));
            } else {
                out.insert(y.clone(), ren.image(y));
            }
        }
        return Ok(Some(out));
    }
    Ok(None)
}

pub fn unify_fast(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, bound: Option<usize>) -> Result<UnifierSet> {
    if let Some(s) = variable_short_circuit(th, ctx, q)? {
        return Ok(UnifierSet::complete(vec![s]));
    }
    let base = unify_baseline(th, ctx, q, None)?;
    Ok(minimize_subsumption(th, ctx, q, base.unifiers)?.truncate(bound))
}

/// Every proper ancestor of `p` in `t` is rooted by a constructor.
pub fn is_cr_position(th: &Theory, t: &Term, p: &Position) -> bool {
    p.proper_prefixes().all(|q| match t.subterm_at(&q) {
        Ok(Term::App(op, _)) => th.is_ctor(*op),
        _ => false,
    })
}

/// Every occurrence of `x` in `t` is at a constructor-root position;
/// vacuously true when `x` does not occur.
pub fn is_cr_variable(th: &Theory, t: &Term, x: &Var) -> bool {
    fn go(th: &Theory, t: &Term, x: &Var, under_ctor: bool) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(op, args) => {
                let ok = under_ctor && th.is_ctor(*op);
                args.iter().all(|a| match a {
                    Term::Var(y) if y == x => ok,
                    _ => go(th, a, x, ok),
                })
            }
        }
    }
    match t {
        Term::Var(_) => true,
        _ => go(th, t, x, true),
    }
}

/// `t` occurs in `u` modulo B, AC sub-products included.
fn is_b_subterm(sig: &Signature, t: &Term, u: &Term) -> bool {
    if t == u {
        return true;
    }
    let Term::App(g, uargs) = u else { return false };
    if let Term::App(f, targs) = t {
        if f == g && sig.is_ac(*f) && targs.len() < uargs.len() {
            let mut rest = uargs.clone();
            let all = targs.iter().all(|a| match rest.iter().position(|b| b == a) {
                Some(i) => {
                    rest.remove(i);
                    true
                }
                None => false,
            });
            if all {
                return true;
            }
        }
    }
    uargs.iter().any(|a| is_b_subterm(sig, t, a))
}

/// Constructor-root test on a B-unifier `σ` of `u1 =? u2`: every binding is
/// an unshared renaming, binds a constructor-root variable of both terms, or
/// occurs only inside images of such variables (and inside at least one).
pub fn is_cr_unifier(th: &Theory, sigma: &Substitution, u1: &Term, u2: &Term) -> bool {
    let cr = |x: &Var| is_cr_variable(th, u1, x) && is_cr_variable(th, u2, x);
    sigma.iter().all(|(x, t)| {
        if let Term::Var(y) = t {
            let shared = sigma.iter().any(|(x2, t2)| x2 != x && t2.contains_var(y));
            if !shared {
                return true;
            }
        }
        if cr(x) {
            return true;
        }
        let mut holders = sigma
            .iter()
            .filter(|(x2, t2)| *x2 != x && is_b_subterm(&th.sig, t, t2))
            .peekable();
        holders.peek().is_some() && holders.all(|(x2, _)| cr(x2))
    })
}

/// Replaces every maximal subterm not rooted by a constructor by a fresh
/// variable of its kind.
fn abstract_ctor_prefix(th: &Theory, ctx: &mut Ctx, t: &Term) -> Term {
    match t {
        Term::App(op, args) if th.is_ctor(*op) => {
            let args = args.iter().map(|a| abstract_ctor_prefix(th, ctx, a)).collect();
            th.sig.mk(*op, args)
        }
        _ => {
            let kind = th.sig.kind_of(th.sig.least_sort(t));
            Term::Var(ctx.fresh.fresh(kind))
        }
    }
}

/// `u1`, `u2` do not B-unify and neither do their constructor prefixes.
pub fn is_failure_pair(th: &Theory, ctx: &mut Ctx, u1: &Term, u2: &Term) -> Result<bool> {
    if !b_unify(&th.sig, ctx, &[(u1.clone(), u2.clone())], &BTreeSet::new())?.is_empty() {
        return Ok(false);
    }
    let a1 = abstract_ctor_prefix(th, ctx, u1);
    let a2 = abstract_ctor_prefix(th, ctx, u2);
    Ok(b_unify(&th.sig, ctx, &[(a1, a2)], &BTreeSet::new())?.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// Unifies and every B-unifier is constructor-root.
    CrUnifies,
    NonCrUnifies,
    FailurePair,
    /// Does not unify, is no failure pair, and no descendants can unify.
    Dead,
    /// Does not unify yet, but descendants might.
    Open,
}

#[derive(Debug, Clone)]
pub struct FrontierReport {
    /// `(leaf of tree 1, leaf of tree 2, class)`.
    pub pairs: Vec<(usize, usize, PairClass)>,
}

impl FrontierReport {
    pub fn count(&self, c: PairClass) -> usize {
        self.pairs.iter().filter(|p| p.2 == c).count()
    }
}

/// Classifies every pair of leaves of the two trees.
pub fn classify_frontier(
    th: &Theory,
    ctx: &mut Ctx,
    q: &UnifQuery,
    t1: &VariantTree,
    t2: &VariantTree,
) -> Result<FrontierReport> {
    let mut pairs = Vec::new();
    for i in t1.leaves() {
        for j in t2.leaves() {
            ctx.check_deadline()?;
            let (v1, v2) = (&t1.node(i).variant, &t2.node(j).variant);
            let us = pair_unifiers(th, ctx, q, v1, v2)?;
            let class = if !us.is_empty() {
                if us.iter().all(|s| is_cr_unifier(th, s, &v1.term, &v2.term)) {
                    PairClass::CrUnifies
                } else {
                    PairClass::NonCrUnifies
                }
            } else if is_failure_pair(th, ctx, &v1.term, &v2.term)? {
                PairClass::FailurePair
            } else {
                let (f1, f2) = (t1.is_final(i), t2.is_final(j));
                let a1 = if f1 { v1.term.clone() } else { abstract_ctor_prefix(th, ctx, &v1.term) };
                let a2 = if f2 { v2.term.clone() } else { abstract_ctor_prefix(th, ctx, &v2.term) };
                if (f1 && f2) || b_unify(&th.sig, ctx, &[(a1, a2)], &BTreeSet::new())?.is_empty() {
                    PairClass::Dead
                } else {
                    PairClass::Open
                }
            };
            pairs.push((i, j, class));
        }
    }
    Ok(FrontierReport { pairs })
}

enum CrOutcome {
    Success(Vec<Substitution>),
    Failure,
    Fallback,
}

/// Layered expansion of both trees until the leaf pairs are all
/// constructor-root unifiers or all failures.
fn cr_search(th: &Theory, ctx: &mut Ctx, q: &UnifQuery) -> Result<CrOutcome> {
    let mut t1 = VariantTree::new(th, ctx, &q.t1)?;
    let mut t2 = VariantTree::new(th, ctx, &q.t2)?;
    loop {
        let rep = classify_frontier(th, ctx, q, &t1, &t2)?;
        let unifying = rep.count(PairClass::CrUnifies) + rep.count(PairClass::NonCrUnifies);
        let (noncr, open) = (rep.count(PairClass::NonCrUnifies), rep.count(PairClass::Open));
        if unifying == 0 && open == 0 {
            return Ok(CrOutcome::Failure);
        }
        if unifying > 0 && noncr == 0 && open == 0 {
            // inner retained nodes subsume the instances found at the leaves
            return Ok(CrOutcome::Success(variant_intersect(th, ctx, q, &t1.variants(), &t2.variants())?));
        }
        let mut e1 = BTreeSet::new();
        let mut e2 = BTreeSet::new();
        for &(i, j, c) in &rep.pairs {
            let n1 = t1.node(i).status == NodeStatus::Frontier;
            let n2 = t2.node(j).status == NodeStatus::Frontier;
            match c {
                PairClass::NonCrUnifies => {
                    if n1 {
                        e1.insert(i);
                    }
                    if n2 {
                        e2.insert(j);
                    }
                }
                PairClass::Open => {
                    let d1 = n1 && !root_is_ctor(th, &t1.node(i).variant.term);
                    let d2 = n2 && !root_is_ctor(th, &t2.node(j).variant.term);
                    if d1 || d2 {
                        if d1 {
                            e1.insert(i);
                        }
                        if d2 {
                            e2.insert(j);
                        }
                    } else {
                        if n1 {
                            e1.insert(i);
                        }
                        if n2 {
                            e2.insert(j);
                        }
                    }
                }
                _ => {}
            }
        }
        if e1.is_empty() && e2.is_empty() {
            return Ok(CrOutcome::Fallback);
        }
        t1.expand_nodes(th, ctx, &e1.into_iter().collect::<Vec<_>>())?;
        t2.expand_nodes(th, ctx, &e2.into_iter().collect::<Vec<_>>())?;
    }
}

fn root_is_ctor(th: &Theory, t: &Term) -> bool {
    t.root().is_some_and(|op| th.is_ctor(op))
}

pub fn unify_cr(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, bound: Option<usize>) -> Result<UnifierSet> {
    match cr_search(th, ctx, q)? {
        CrOutcome::Success(us) => Ok(UnifierSet::complete(us).truncate(bound)),
        CrOutcome::Failure => Ok(UnifierSet::complete(Vec::new())),
        CrOutcome::Fallback => unify_baseline(th, ctx, q, bound),
    }
}

pub fn unify_cr_fast(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, bound: Option<usize>) -> Result<UnifierSet> {
    match cr_search(th, ctx, q)? {
        CrOutcome::Success(us) => Ok(minimize_subsumption(th, ctx, q, us)?.truncate(bound)),
        CrOutcome::Failure => Ok(UnifierSet::complete(Vec::new())),
        CrOutcome::Fallback => unify_fast(th, ctx, q, bound),
    }
}

pub fn unify(th: &Theory, ctx: &mut Ctx, q: &UnifQuery, algo: Algo, bound: Option<usize>) -> Result<UnifierSet> {
    match algo {
        Algo::Maude => unify_baseline(th, ctx, q, bound),
        Algo::Fast => unify_fast(th, ctx, q, bound),
        Algo::Cr => unify_cr(th, ctx, q, bound),
        Algo::CrFast => unify_cr_fast(th, ctx, q, bound),
    }
}

/// Representative of the renaming class of `u` on `W∪`.
fn canonical(sig: &Signature, q: &UnifQuery, u: &Substitution) -> Vec<Term> {
    let r = renumber(sig, q, u, "?");
    q.w_cup.iter().map(|x| r.image(x)).collect()
}

/// Renames range variables to `<prefix>1, <prefix>2, …` in first-use order
/// over `W∪`.
fn renumber(sig: &Signature, q: &UnifQuery, u: &Substitution, prefix: &str) -> Substitution {
    let mut order = Vec::new();
    for x in &q.w_cup {
        u.image(x).vars_in_order(&mut order);
    }
    let ren = Substitution::from_pairs(
        order
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), Term::Var(Var::new(&format!("{prefix}{}", i + 1), v.sort)))),
    );
    let mut out = Substitution::new();
    for x in &q.w_cup {
        let img = ren.apply(sig, &u.image(x));
        out.insert(x.clone(), img);
    }
    out
}

/// Output form: fresh variables renumbered `#1, #2, …` per unifier, one
/// line per `W∪` variable, unifiers sorted by their printed form.
pub fn present(sig: &Signature, q: &UnifQuery, us: &[Substitution]) -> Vec<Vec<(Var, Term)>> {
    let mut rows: Vec<(String, Vec<(Var, Term)>)> = us
        .iter()
        .map(|u| {
            let r = renumber(sig, q, u, "#");
            let lines: Vec<(Var, Term)> = q.w_cup.iter().map(|x| (x.clone(), r.image(x))).collect();
            let key = lines
                .iter()
                .map(|(x, t)| format!("{} --> {}", x.name, t.display(sig)))
                .collect::<Vec<_>>()
                .join("\n");
            (key, lines)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    rows.into_iter().map(|(_, l)| l).collect()
}
