//! Narrowing modulo the axioms and folding variant narrowing.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::axunify::{b_unify_pruned, match_first};
use crate::error::{Error, Result};
use crate::normalize::{is_normal_form, normalize, normalize_subst};
use crate::sigterm::{Signature, Substitution, Term, Var};
use crate::theoryparse::Theory;
use crate::Ctx;

/// A pair `(t', θ)` with `tθ↓ = t'`; both components are normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variant {
    pub term: Term,
    pub subst: Substitution,
}

impl Variant {
    /// The term followed by the images of `base_vars`.
    pub fn packed(&self, base_vars: &[Var]) -> Vec<Term> {
        std::iter::once(self.term.clone())
            .chain(base_vars.iter().map(|x| self.subst.image(x)))
            .collect()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Variant, &'a Signature);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({}, {})", self.0.term.display(self.1), self.0.subst.display(self.1))
            }
        }
        D(self, sig)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Frontier,
    Expanded,
    Folded,
}

#[derive(Debug, Clone)]
pub struct VariantNode {
    pub variant: Variant,
    pub parent: Option<usize>,
    pub depth: usize,
    pub status: NodeStatus,
    pub children: Vec<usize>,
    /// Retained node that subsumes a folded one.
    pub folded_by: Option<usize>,
}

/// Folding variant narrowing tree of one term. Node indices follow creation
/// order, which is breadth-first when whole layers are expanded.
#[derive(Debug, Clone)]
pub struct VariantTree {
    pub base: Term,
    pub base_vars: Vec<Var>,
    pub nodes: Vec<VariantNode>,
    pub complete: bool,
    /// Term followed by the images of `base_vars`, per node.
    packed: Vec<Vec<Term>>,
    /// Component sizes of `packed`, per node.
    sizes: Vec<Vec<usize>>,
    /// Renaming class of each retained node.
    classes: HashMap<Vec<Term>, usize>,
}


/// All one-step variant narrowings of `t`: every non-variable position, every
/// rule renamed apart, every B-unifier whose restriction to `Var(t)` is
/// irreducible. Returns `(normalized result, σ restricted to Var(t))`.
pub fn narrow_steps(th: &Theory, ctx: &mut Ctx, t: &Term) -> Result<Vec<(Term, Substitution)>> {
    let sig = &th.sig;
    let tvars = t.vars();
    let mut out = Vec::new();
    for p in t.fun_positions() {
        let sub = t.subterm_at(&p)?;
        let Some(root) = sub.root() else { continue };
        for &ri in th.rules_for(root) {
            ctx.check_deadline()?;
            let rule = &th.rules[ri];
            let ren = Substitution::from_pairs(
                rule.lhs
                    .vars()
                    .into_iter()
                    .map(|v| {
                        let z = ctx.fresh.fresh(v.sort);
                        (v, Term::Var(z))
                    }),
            );
            let lhs = ren.apply(sig, &rule.lhs);
            let rhs = ren.apply(sig, &rule.rhs);
            let mut avoid = tvars.clone();
            avoid.extend(lhs.vars());
            // a reducible binding stays reducible, so such branches are cut early
            let dead = |s: &Substitution| {
                tvars.iter().any(|x| {
                    let img = s.image(x);
                    !img.is_var() && !is_normal_form(th, &img)
                })
            };
            for sigma in b_unify_pruned(sig, ctx, &[(sub.clone(), lhs.clone())], &avoid, &dead)? {
                let restricted = sigma.restrict(&tvars);
                let replaced = t.replace_at(sig, &p, rhs.clone())?;
                let next = normalize(th, ctx, &sigma.apply(sig, &replaced))?;
                out.push((next, restricted));
            }
        }
    }
    Ok(out)
}

/// Some subterm has a root symbol with equations.
fn narrowable(th: &Theory, t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(op, args) => !th.rules_for(*op).is_empty() || args.iter().any(|a| narrowable(th, a)),
    }
}

/// `v1` is at least as general as `v2`: one B-matcher maps the term and every
/// base variable image of `v1` onto those of `v2`.
pub fn variant_subsumes(sig: &Signature, v1: &Variant, v2: &Variant, base_vars: &[Var]) -> bool {
    packed_subsumes(sig, &v1.packed(base_vars), &v2.packed(base_vars))
}

/// [`variant_subsumes`] on the output of [`Variant::packed`].
fn packed_subsumes(sig: &Signature, p: &[Term], s: &[Term]) -> bool {
    if s[0].is_var() && !p[0].is_var() {
        return false;
    }
    if !p.iter().zip(s).all(|(p, s)| may_match(sig, p, s)) {
        return false;
    }
    let pairs: Vec<(Term, Term)> = p.iter().cloned().zip(s.iter().cloned()).collect();
    match_first(sig, &pairs).is_some()
}

/// Key shared by variants that are renamings of each other (not conversely).
fn renaming_class(sig: &Signature, packed: &[Term]) -> Vec<Term> {
    let mut ts = packed.to_vec();
    // AC argument order depends on names, so renumber until it settles
    for _ in 0..4 {
        let mut order = Vec::new();
        for t in &ts {
            t.vars_in_order(&mut order);
        }
        let ren = Substitution::from_pairs(
            order
                .into_iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), Term::Var(Var::new(&format!("%{i}"), v.sort)))),
        );
        let next: Vec<Term> = ts.iter().map(|t| ren.apply(sig, t)).collect();
        if next == ts {
            break;
        }
        ts = next;
    }
    ts
}

/// Necessary condition for `p` to match `s`, ignoring variable sharing.
fn may_match(sig: &Signature, p: &Term, s: &Term) -> bool {
    match (p, s) {
        (Term::Var(_), _) => true,
        (Term::App(..), Term::Var(_)) => false,
        (Term::App(f, ps), Term::App(g, ss)) => {
            if f != g || p.size() > s.size() {
                return false;
            }
            if sig.op(*f).attrs.assoc {
                // every non-variable pattern argument needs a subject argument
                ps.len() <= ss.len()
                    && ps.iter().all(|a| a.is_var() || ss.iter().any(|b| may_match(sig, a, b)))
            } else if sig.op(*f).attrs.comm {
                ps.iter().all(|a| ss.iter().any(|b| may_match(sig, a, b)))
            } else {
                ps.iter().zip(ss).all(|(a, b)| may_match(sig, a, b))
            }
        }
    }
}

impl VariantTree {
    /// Tree with the single root `(tρ↓, ρ)`, `ρ` a renaming to fresh variables.
    pub fn new(th: &Theory, ctx: &mut Ctx, t: &Term) -> Result<VariantTree> {
        let mut base_vars = Vec::new();
        t.vars_in_order(&mut base_vars);
        let rho = Substitution::from_pairs(
            base_vars
                .iter()
                .map(|x| (x.clone(), Term::Var(ctx.fresh.fresh(x.sort)))),
        );
        let term = normalize(th, ctx, &rho.apply(&th.sig, t))?;
        let mut tree = VariantTree {
            base: t.clone(),
            base_vars,
            nodes: vec![VariantNode {
                variant: Variant { term, subst: rho },
                parent: None,
                depth: 0,
                status: NodeStatus::Frontier,
                children: Vec::new(),
                folded_by: None,
            }],
            complete: false,
            packed: Vec::new(),
            sizes: Vec::new(),
            classes: HashMap::new(),
        };
        let root = tree.nodes[0].variant.packed(&tree.base_vars);
        tree.sizes.push(root.iter().map(Term::size).collect());
        tree.classes.insert(renaming_class(&th.sig, &root), 0);
        tree.packed.push(root);
        if !narrowable(th, &tree.nodes[0].variant.term) {
            tree.nodes[0].status = NodeStatus::Expanded;
            tree.complete = true;
        }
        Ok(tree)
    }

    pub fn node(&self, id: usize) -> &VariantNode {
        &self.nodes[id]
    }

    pub fn frontier(&self) -> Vec<usize> {
        self.ids_with(NodeStatus::Frontier)
    }

    fn ids_with(&self, st: NodeStatus) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].status == st).collect()
    }

    pub fn is_retained(&self, id: usize) -> bool {
        self.nodes[id].status != NodeStatus::Folded
    }

    /// Non-folded nodes in creation order.
    pub fn retained(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_retained(i)).collect()
    }

    /// Retained nodes without retained children.
    pub fn leaves(&self) -> Vec<usize> {
        self.retained()
            .into_iter()
            .filter(|&i| !self.nodes[i].children.iter().any(|&c| self.is_retained(c)))
            .collect()
    }

    /// Expanded (or variable) retained node with no retained children: it
    /// will never get descendants.
    pub fn is_final(&self, id: usize) -> bool {
        let n = &self.nodes[id];
        match n.status {
            NodeStatus::Folded => false,
            NodeStatus::Frontier => false,
            NodeStatus::Expanded => !n.children.iter().any(|&c| self.is_retained(c)),
        }
    }

    pub fn variants(&self) -> Vec<Variant> {
        self.retained().into_iter().map(|i| self.nodes[i].variant.clone()).collect()
    }

    /// Narrows every frontier node once.
    pub fn expand_layer(&mut self, th: &Theory, ctx: &mut Ctx) -> Result<()> {
        let ids = self.frontier();
        self.expand_nodes(th, ctx, &ids)
    }

    /// Narrows the given frontier nodes once; other ids are ignored.
    pub fn expand_nodes(&mut self, th: &Theory, ctx: &mut Ctx, ids: &[usize]) -> Result<()> {
        let sig = &th.sig;
        let mut live = self.retained();
        let round_start = live.len();
        // scan order for folding; may hold folded ids, which are skipped
        let mut order = live.clone();
        let mut hits: HashMap<usize, u32> = HashMap::new();
        let mut since_sort = 0;
        for &id in ids {
            if self.nodes[id].status != NodeStatus::Frontier {
                continue;
            }
            self.nodes[id].status = NodeStatus::Expanded;
            let parent = self.nodes[id].variant.clone();
            let depth = self.nodes[id].depth + 1;
            for (term, sigma) in narrow_steps(th, ctx, &parent.term)? {
                let theta = normalize_subst(th, ctx, &parent.subst.compose(sig, &sigma))?
                    .restrict(&self.base_vars);
                let cand = Variant { term, subst: theta };
                let packed = cand.packed(&self.base_vars);
                let sizes: Vec<usize> = packed.iter().map(Term::size).collect();
                let class = renaming_class(sig, &packed);
                let folded_by = match self.classes.get(&class) {
                    Some(&r) if self.nodes[r].status != NodeStatus::Folded => Some(r),
                    _ => order.iter().copied().find(|&r| {
                        self.nodes[r].status != NodeStatus::Folded
                            && self.sizes[r].iter().zip(&sizes).all(|(a, b)| a <= b)
                            && packed_subsumes(sig, &self.packed[r], &packed)
                    }),
                };
                if let Some(r) = folded_by {
                    *hits.entry(r).or_insert(0) += 1;
                    since_sort += 1;
                    if since_sort == 256 {
                        // frequent folders first
                        order.sort_by_key(|r| std::cmp::Reverse(hits.get(r).copied().unwrap_or(0)));
                        since_sort = 0;
                    }
                }
                let status = match folded_by {
                    Some(_) => NodeStatus::Folded,
                    None if !narrowable(th, &cand.term) => NodeStatus::Expanded,
                    None => NodeStatus::Frontier,
                };
                let new_id = self.nodes.len();
                self.nodes.push(VariantNode {
                    variant: cand,
                    parent: Some(id),
                    depth,
                    status,
                    children: Vec::new(),
                    folded_by,
                });
                self.nodes[id].children.push(new_id);
                if folded_by.is_none() {
                    // a more general sibling from the same round replaces older ones
                    for &j in &live[round_start..] {
                        if self.nodes[j].status != NodeStatus::Folded
                            && self.sizes[j].iter().zip(&sizes).all(|(a, b)| a >= b)
                            && packed_subsumes(sig, &packed, &self.packed[j])
                        {
                            self.nodes[j].status = NodeStatus::Folded;
                            self.nodes[j].folded_by = Some(new_id);
                        }
                    }
                    live.retain(|&j| self.nodes[j].status != NodeStatus::Folded);
                    live.push(new_id);
                    order.push(new_id);
                    self.classes.insert(class, new_id);
                    if live.len() > ctx.limits.variant_cap {
                        return Err(Error::VariantBoundExceeded(ctx.limits.variant_cap));
                    }
                }
                self.packed.push(packed);
                self.sizes.push(sizes);
            }
        }
        self.complete = self.frontier().is_empty();
        Ok(())
    }

    fn retained_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.status != NodeStatus::Folded).count()
    }

    pub fn expand_all(&mut self, th: &Theory, ctx: &mut Ctx) -> Result<()> {
        while !self.complete {
            self.expand_layer(th, ctx)?;
        }
        Ok(())
    }
}

/// `⟦t⟧` in breadth-first order, root first. With a `bound`, generation stops
/// once that many variants are retained.
pub fn get_variants(th: &Theory, ctx: &mut Ctx, t: &Term, bound: Option<usize>) -> Result<Vec<Variant>> {
    let mut tree = VariantTree::new(th, ctx, t)?;
    if let Some(n) = bound {
        // the user bound replaces the safety cap
        ctx.limits.variant_cap = usize::MAX;
        while !tree.complete && tree.retained_count() < n {
            tree.expand_layer(th, ctx)?;
        }
        let mut vs = tree.variants();
        vs.truncate(n);
        return Ok(vs);
    }
    tree.expand_all(th, ctx)?;
    Ok(tree.variants())
}

/// Variables of all images of a variant's substitution.
pub fn variant_vars(v: &Variant) -> BTreeSet<Var> {
    let mut out = v.term.vars();
    out.extend(v.subst.range_vars());
    out
}
