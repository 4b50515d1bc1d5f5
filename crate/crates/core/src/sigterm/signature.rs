use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a sort inside its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub(crate) u32);

/// Index of an operator declaration inside its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub(crate) u32);

impl SortId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    pub name: String,
    pub component: usize,
    /// Set for the synthetic kind sort `[Top]` of a component.
    pub is_kind: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpAttrs {
    pub assoc: bool,
    pub comm: bool,
    pub ctor: bool,
}

impl OpAttrs {
    pub fn is_ac(&self) -> bool {
        self.assoc && self.comm
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
    pub result: SortId,
    pub attrs: OpAttrs,
    /// Internal tupling symbols used to encode conjunctions and substitution images.
    pub tuple: bool,
}

impl OpDecl {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    /// `_*_`-style binary mixfix declaration.
    pub fn is_infix(&self) -> bool {
        self.arity() == 2 && self.name.len() > 2 && self.name.starts_with('_') && self.name.ends_with('_')
    }

    /// The name as written in terms (`*` for `_*_`).
    pub fn symbol(&self) -> &str {
        if self.is_infix() {
            &self.name[1..self.name.len() - 1]
        } else {
            &self.name
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub top: SortId,
    pub kind: SortId,
}

pub const MAX_TUPLE_ARITY: usize = 64;

/// An order-sorted signature: sorts, the closed subsort order, connected
/// components with their top and kind sorts, and operator declarations.
#[derive(Debug, Clone)]
pub struct Signature {
    sorts: Vec<Sort>,
    leq: Vec<Vec<bool>>,
    components: Vec<Component>,
    ops: Vec<OpDecl>,
    sort_index: HashMap<String, SortId>,
    op_index: HashMap<String, Vec<OpId>>,
    tuple_base: u32,
}

#[derive(Debug, Default, Clone)]
pub struct SignatureBuilder {
    sorts: Vec<String>,
    subsorts: Vec<(String, String)>,
    ops: Vec<(String, Vec<String>, String, OpAttrs)>,
}

impl SignatureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sort(&mut self, name: &str) -> &mut Self {
        if !self.sorts.iter().any(|s| s == name) {
            self.sorts.push(name.to_string());
        }
        self
    }

    pub fn subsort(&mut self, lower: &str, upper: &str) -> &mut Self {
        self.subsorts.push((lower.to_string(), upper.to_string()));
        self
    }

    pub fn op(&mut self, name: &str, args: &[&str], result: &str, attrs: OpAttrs) -> &mut Self {
        self.ops.push((
            name.to_string(),
            args.iter().map(|s| s.to_string()).collect(),
            result.to_string(),
            attrs,
        ));
        self
    }

    pub fn build(&self) -> Result<Signature> {
        let mut sort_index: HashMap<String, SortId> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        for s in &self.sorts {
            if s.starts_with('[') {
                return Err(Error::Load(format!("sort name `{s}` may not start with `[`")));
            }
            sort_index.insert(s.clone(), SortId(names.len() as u32));
            names.push(s.clone());
        }
        let n = names.len();
        let lookup = |s: &str| -> Result<usize> {
            sort_index
                .get(s)
                .map(|id| id.index())
                .ok_or_else(|| Error::UndeclaredSort(s.to_string()))
        };

        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in &self.subsorts {
            let (l, h) = (lookup(lo)?, lookup(hi)?);
            leq[l][h] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Load(format!(
                        "subsort cycle between `{}` and `{}`",
                        names[i], names[j]
                    )));
                }
            }
        }

        // connected components of (<= ∪ >=)+
        let mut comp = vec![usize::MAX; n];
        let mut ncomp = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = ncomp;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if comp[j] == usize::MAX && (leq[i][j] || leq[j][i]) {
                        comp[j] = ncomp;
                        stack.push(j);
                    }
                }
            }
            ncomp += 1;
        }

        let mut sorts: Vec<Sort> = names
            .iter()
            .zip(&comp)
            .map(|(name, &c)| Sort {
                name: name.clone(),
                component: c,
                is_kind: false,
            })
            .collect();

        let mut components = Vec::with_capacity(ncomp);
        for c in 0..ncomp {
            let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
            let maximal: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&i| members.iter().all(|&j| j == i || !leq[i][j]))
                .collect();
            let kind_name = format!(
                "[{}]",
                maximal.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")
            );
            let kind = SortId(sorts.len() as u32);
            sorts.push(Sort {
                name: kind_name.clone(),
                component: c,
                is_kind: true,
            });
            sort_index.insert(kind_name, kind);
            let top = if maximal.len() == 1 {
                SortId(maximal[0] as u32)
            } else {
                kind
            };
            components.push(Component { top, kind });
        }

        // extend the order with the kinds
        let total = sorts.len();
        let mut full = vec![vec![false; total]; total];
        for i in 0..n {
            full[i][..n].copy_from_slice(&leq[i]);
        }
        for (i, s) in sorts.iter().enumerate() {
            let kind = components[s.component].kind.index();
            full[i][kind] = true;
        }

        let mut sig = Signature {
            sorts,
            leq: full,
            components,
            ops: Vec::new(),
            sort_index,
            op_index: HashMap::new(),
            tuple_base: 0,
        };

        for (name, args, result, attrs) in &self.ops {
            let arg_sorts = args
                .iter()
                .map(|a| sig.sort(a))
                .collect::<Result<Vec<_>>>()?;
            let result = sig.sort(result)?;
            let decl = OpDecl {
                name: name.clone(),
                arg_sorts,
                result,
                attrs: *attrs,
                tuple: false,
            };
            sig.check_decl(&decl)?;
            let id = OpId(sig.ops.len() as u32);
            sig.op_index.entry(name.clone()).or_default().push(id);
            sig.ops.push(decl);
        }
        sig.check_preregular()?;

        // tupling symbols live in their own component
        let tuple_sort = SortId(sig.sorts.len() as u32);
        let ncomp = sig.components.len();
        sig.sorts.push(Sort {
            name: "[Tuple]".to_string(),
            component: ncomp,
            is_kind: true,
        });
        sig.components.push(Component {
            top: tuple_sort,
            kind: tuple_sort,
        });
        for row in sig.leq.iter_mut() {
            row.push(false);
        }
        let mut row = vec![false; sig.sorts.len()];
        row[tuple_sort.index()] = true;
        sig.leq.push(row);
        sig.tuple_base = sig.ops.len() as u32;
        for k in 0..=MAX_TUPLE_ARITY {
            sig.ops.push(OpDecl {
                name: format!("<{k}>"),
                arg_sorts: vec![tuple_sort; k],
                result: tuple_sort,
                attrs: OpAttrs {
                    ctor: true,
                    ..OpAttrs::default()
                },
                tuple: true,
            });
        }
        Ok(sig)
    }
}

impl Signature {
    fn check_decl(&self, d: &OpDecl) -> Result<()> {
        let a = d.attrs;
        if d.name.contains('_') && !d.is_infix() {
            return Err(Error::Load(format!(
                "operator `{}`: only binary infix mixfix `_op_` is supported",
                d.name
            )));
        }
        if a.assoc && !a.comm {
            return Err(Error::Load(format!(
                "operator `{}`: `assoc` without `comm` is not supported",
                d.name
            )));
        }
        if a.assoc || a.comm {
            if d.arity() != 2 {
                return Err(Error::Load(format!(
                    "operator `{}`: equational attributes require arity 2",
                    d.name
                )));
            }
            let c = self.sorts[d.result.index()].component;
            let top = self.components[c].top;
            let kind = self.components[c].kind;
            for &s in d.arg_sorts.iter().chain(std::iter::once(&d.result)) {
                if self.sorts[s.index()].component != c {
                    return Err(Error::Load(format!(
                        "operator `{}`: arguments and result of an axiom-carrying operator must share a connected component",
                        d.name
                    )));
                }
                if s != top && s != kind {
                    return Err(Error::Load(format!(
                        "operator `{}`: axioms must be declared using top sorts",
                        d.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Monotonicity check over overloaded declarations sharing argument kinds,
    /// plus rejection of overlapping yet incomparable overloads.
    fn check_preregular(&self) -> Result<()> {
        for ids in self.op_index.values() {
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    let (da, db) = (self.op(a), self.op(b));
                    if da.arity() != db.arity() {
                        continue;
                    }
                    let same_kinds = da
                        .arg_sorts
                        .iter()
                        .zip(&db.arg_sorts)
                        .all(|(&x, &y)| self.same_component(x, y));
                    if !same_kinds {
                        continue;
                    }
                    let a_le_b = da.arg_sorts.iter().zip(&db.arg_sorts).all(|(&x, &y)| self.leq(x, y));
                    let b_le_a = da.arg_sorts.iter().zip(&db.arg_sorts).all(|(&x, &y)| self.leq(y, x));
                    if a_le_b && b_le_a {
                        return Err(Error::Load(format!("operator `{}` declared twice", da.name)));
                    }
                    if (a_le_b && !self.leq(da.result, db.result)) || (b_le_a && !self.leq(db.result, da.result)) {
                        return Err(Error::Load(format!(
                            "operator `{}`: overloads are not monotonic",
                            da.name
                        )));
                    }
                    if !a_le_b && !b_le_a {
                        let overlap = da
                            .arg_sorts
                            .iter()
                            .zip(&db.arg_sorts)
                            .all(|(&x, &y)| self.common_lower(x, y).next().is_some());
                        if overlap {
                            return Err(Error::Load(format!(
                                "signature is not preregular: overloads of `{}` overlap without a least declaration",
                                da.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn common_lower(&self, a: SortId, b: SortId) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len())
            .map(|i| SortId(i as u32))
            .filter(move |&s| self.leq(s, a) && self.leq(s, b))
    }

    pub fn sort(&self, name: &str) -> Result<SortId> {
        self.sort_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UndeclaredSort(name.to_string()))
    }

    pub fn sort_info(&self, s: SortId) -> &Sort {
        &self.sorts[s.index()]
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.index()].name
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(|i| SortId(i as u32))
    }

    pub fn leq(&self, a: SortId, b: SortId) -> bool {
        self.leq[a.index()][b.index()]
    }

    /// `a <= b` by name; errors on undeclared sorts.
    pub fn sort_leq(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.sort(a)?, self.sort(b)?))
    }

    pub fn same_component(&self, a: SortId, b: SortId) -> bool {
        self.sorts[a.index()].component == self.sorts[b.index()].component
    }

    pub fn component(&self, s: SortId) -> &Component {
        &self.components[self.sorts[s.index()].component]
    }

    pub fn kind_of(&self, s: SortId) -> SortId {
        self.component(s).kind
    }

    pub fn top_of(&self, s: SortId) -> SortId {
        self.component(s).top
    }

    /// Maximal sorts below both `a` and `b`.
    pub fn maximal_lower_bounds(&self, a: SortId, b: SortId) -> Vec<SortId> {
        let lower: Vec<SortId> = self.common_lower(a, b).collect();
        lower
            .iter()
            .copied()
            .filter(|&s| lower.iter().all(|&t| t == s || !self.leq(s, t)))
            .collect()
    }

    pub fn op(&self, id: OpId) -> &OpDecl {
        &self.ops[id.index()]
    }

    pub fn ops(&self) -> impl Iterator<Item = (OpId, &OpDecl)> + '_ {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.tuple)
            .map(|(i, d)| (OpId(i as u32), d))
    }

    pub fn ops_named(&self, name: &str) -> &[OpId] {
        self.op_index.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Declarations whose written symbol (`*` for `_*_`) is `sym`.
    pub fn ops_with_symbol<'a>(&'a self, sym: &'a str) -> impl Iterator<Item = OpId> + 'a {
        self.ops().filter(move |(_, d)| d.symbol() == sym).map(|(id, _)| id)
    }

    pub fn tuple_op(&self, arity: usize) -> Result<OpId> {
        if arity > MAX_TUPLE_ARITY {
            return Err(Error::Load(format!(
                "tuples of arity {arity} exceed the supported maximum {MAX_TUPLE_ARITY}"
            )));
        }
        Ok(OpId(self.tuple_base + arity as u32))
    }

    pub fn is_ac(&self, op: OpId) -> bool {
        self.op(op).attrs.is_ac()
    }

    pub fn is_ctor(&self, op: OpId) -> bool {
        self.op(op).attrs.ctor
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, d) in self.ops() {
            let args: Vec<&str> = d.arg_sorts.iter().map(|&s| self.sort_name(s)).collect();
            writeln!(f, "op {} : {} -> {} .", d.name, args.join(" "), self.sort_name(d.result))?;
        }
        Ok(())
    }
}
