//! Maude-style functional modules and unification problems.
//!
//! Accepted module grammar: `fmod NAME is ... endfm` containing `sort(s)`,
//! `subsort(s) A B < C`, `op`/`ops NAMES : ARGS -> SORT [assoc comm ctor]`,
//! `var`/`vars NAMES : SORT` and `eq [label] : LHS = RHS [variant]`.
//! Statements end with a free-standing ` .`; `***` and `---` start comments.
//! Anything else is rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sigterm::{OpAttrs, OpId, Signature, SignatureBuilder, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

/// A decomposition: signature with its axioms, oriented variant equations,
/// and the free constructor symbols.
#[derive(Debug, Clone)]
pub struct Theory {
    pub name: String,
    pub sig: Signature,
    pub rules: Vec<Rule>,
    /// Variables declared with `var`/`vars`, by name.
    pub vars: HashMap<String, Var>,
    /// Lint messages (e.g. a missing AC extension rule).
    pub warnings: Vec<String>,
    by_root: HashMap<OpId, Vec<usize>>,
}

impl Theory {
    pub fn new(name: &str, sig: Signature, rules: Vec<Rule>, vars: HashMap<String, Var>) -> Result<Theory> {
        let mut by_root: HashMap<OpId, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            let root = r
                .lhs
                .root()
                .ok_or_else(|| Error::Load(format!("equation `{}`: left-hand side is a variable", r.label)))?;
            if sig.is_ctor(root) {
                return Err(Error::Load(format!(
                    "equation `{}`: constructor `{}` at the root of a left-hand side",
                    r.label,
                    sig.op(root).name
                )));
            }
            let (ls, rs) = (sig.least_sort(&r.lhs), sig.least_sort(&r.rhs));
            if !sig.same_component(ls, rs) {
                return Err(Error::Load(format!(
                    "equation `{}`: sides have different kinds",
                    r.label
                )));
            }
            let lv = r.lhs.vars();
            if !r.rhs.vars().is_subset(&lv) {
                return Err(Error::Load(format!(
                    "equation `{}`: right-hand side has variables not in the left-hand side",
                    r.label
                )));
            }
            by_root.entry(root).or_default().push(i);
        }
        let mut th = Theory {
            name: name.to_string(),
            sig,
            rules,
            vars,
            warnings: Vec::new(),
            by_root,
        };
        th.warnings = th.lint_coherence();
        Ok(th)
    }

    pub fn rules_for(&self, op: OpId) -> &[usize] {
        self.by_root.get(&op).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn ctor_symbols(&self) -> BTreeSet<String> {
        self.sig
            .ops()
            .filter(|(_, d)| d.attrs.ctor)
            .map(|(_, d)| d.name.clone())
            .collect()
    }

    pub fn is_ctor(&self, op: OpId) -> bool {
        self.sig.is_ctor(op)
    }

    /// Constants of the signature (used by the ground oracle).
    pub fn constants(&self) -> Vec<OpId> {
        self.sig
            .ops()
            .filter(|(_, d)| d.arity() == 0)
            .map(|(id, _)| id)
            .collect()
    }

    /// An AC-rooted lhs `l` should come with an extension `l * Z` unless the
    /// lhs is already extended by a variable argument.
    fn lint_coherence(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rules {
            let Term::App(op, args) = &r.lhs else { continue };
            if !self.sig.is_ac(*op) {
                continue;
            }
            let has_extension_var = {
                let mut counts: HashMap<&Term, usize> = HashMap::new();
                args.iter().for_each(|a| *counts.entry(a).or_default() += 1);
                args.iter().any(|a| {
                    a.is_var() && counts[a] == 1 && args.iter().filter(|b| b.contains_var(a.as_var().unwrap())).count() == 1
                })
            };
            if has_extension_var {
                continue;
            }
            let companion = self.rules.iter().any(|o| match &o.lhs {
                Term::App(op2, args2) if op2 == op && args2.len() == args.len() + 1 => true,
                _ => false,
            });
            if !companion {
                out.push(format!(
                    "equation `{}` has an AC root but no extension equation; rewriting may not be coherent",
                    r.label
                ));
            }
        }
        out
    }
}

/// One unification problem: `T1 =? T1' /\ ... /\ Tk =? Tk'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub module_name: String,
    pub pairs: Vec<(Term, Term)>,
    pub bound: Option<usize>,
}

/// A line of a problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Unify(Problem),
    Variants(Term),
}

// ---------------------------------------------------------------------------
// module parsing

#[derive(Debug, Clone)]
struct Word {
    text: String,
    line: usize,
    col: usize,
}

fn words(text: &str) -> Vec<Word> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = match (raw.find("***"), raw.find("---")) {
            (Some(a), Some(b)) => &raw[..a.min(b)],
            (Some(a), None) | (None, Some(a)) => &raw[..a],
            (None, None) => raw,
        };
        let mut start: Option<usize> = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Word {
                        text: line[s..i].to_string(),
                        line: ln + 1,
                        col: line[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
    }
    out
}

struct PendingEq<'a> {
    label: String,
    lhs: Vec<&'a Word>,
    rhs: Vec<&'a Word>,
    at: &'a Word,
}

pub fn parse_module(text: &str) -> Result<Theory> {
    let ws = words(text);
    let err_at = |w: &Word, msg: String| Error::syntax(w.line, w.col, msg);
    let eof = Word {
        text: String::new(),
        line: text.lines().count().max(1),
        col: 1,
    };
    if ws.len() < 3 || ws[0].text != "fmod" || ws[2].text != "is" {
        return Err(err_at(ws.first().unwrap_or(&eof), "expected `fmod NAME is`".into()));
    }
    let name = ws[1].text.clone();
    let last = ws.last().unwrap();
    if last.text != "endfm" {
        return Err(err_at(last, "expected `endfm`".into()));
    }
    let body = &ws[3..ws.len() - 1];

    let mut stmts: Vec<Vec<&Word>> = Vec::new();
    let mut cur: Vec<&Word> = Vec::new();
    for w in body {
        if w.text == "." {
            if cur.is_empty() {
                return Err(err_at(w, "empty statement".into()));
            }
            stmts.push(std::mem::take(&mut cur));
        } else {
            cur.push(w);
        }
    }
    if let Some(w) = cur.first() {
        return Err(err_at(w, "statement not terminated by ` .`".into()));
    }

    let mut b = SignatureBuilder::new();
    let mut var_decls: Vec<(&Word, String, String)> = Vec::new();
    let mut eqs: Vec<PendingEq> = Vec::new();

    for st in &stmts {
        let head = st[0];
        let rest = &st[1..];
        match head.text.as_str() {
            "sort" | "sorts" => {
                if rest.is_empty() {
                    return Err(err_at(head, "expected sort names".into()));
                }
                for w in rest {
                    b.sort(&w.text);
                }
            }
            "subsort" | "subsorts" => {
                let groups: Vec<Vec<&Word>> = rest
                    .split(|w| w.text == "<")
                    .map(|g| g.to_vec())
                    .collect();
                if groups.len() < 2 || groups.iter().any(Vec::is_empty) {
                    return Err(err_at(head, "malformed subsort declaration".into()));
                }
                for pair in groups.windows(2) {
                    for lo in &pair[0] {
                        for hi in &pair[1] {
                            b.subsort(&lo.text, &hi.text);
                        }
                    }
                }
            }
            "op" | "ops" => {
                let colon = rest
                    .iter()
                    .position(|w| w.text == ":")
                    .ok_or_else(|| err_at(head, "expected `:` in operator declaration".into()))?;
                let arrow = rest
                    .iter()
                    .position(|w| w.text == "->")
                    .ok_or_else(|| err_at(head, "expected `->` in operator declaration".into()))?;
                if colon == 0 || arrow < colon || arrow + 1 >= rest.len() {
                    return Err(err_at(head, "malformed operator declaration".into()));
                }
                let names = &rest[..colon];
                if head.text == "op" && names.len() != 1 {
                    return Err(err_at(head, "`op` declares exactly one operator; use `ops`".into()));
                }
                let args: Vec<&str> = rest[colon + 1..arrow].iter().map(|w| w.text.as_str()).collect();
                let result = &rest[arrow + 1];
                let attrs = parse_op_attrs(&rest[arrow + 2..])?;
                for n in names {
                    b.op(&n.text, &args, &result.text, attrs);
                }
            }
            "var" | "vars" => {
                if rest.len() < 3 || rest[rest.len() - 2].text != ":" {
                    return Err(err_at(head, "malformed variable declaration".into()));
                }
                let sort = rest[rest.len() - 1].text.clone();
                for w in &rest[..rest.len() - 2] {
                    if w.text.starts_with('#') || w.text.starts_with('%') {
                        return Err(err_at(w, "variable names may not start with `#` or `%`".into()));
                    }
                    var_decls.push((w, w.text.clone(), sort.clone()));
                }
            }
            "eq" => eqs.push(split_equation(head, rest, eqs.len())?),
            other => {
                return Err(err_at(head, format!("unsupported statement `{other}`")));
            }
        }
    }

    let sig = b.build()?;
    let mut vars = HashMap::new();
    for (w, n, s) in var_decls {
        let sort = sig.sort(&s).map_err(|e| err_at(w, e.to_string()))?;
        vars.insert(n.clone(), Var::new(&n, sort));
    }
    let mut rules = Vec::new();
    for eq in eqs {
        let lhs_text = join(&eq.lhs);
        let rhs_text = join(&eq.rhs);
        let lhs = parse_term(&lhs_text, &sig, &vars).map_err(|e| relocate(e, eq.lhs[0]))?;
        let rhs = parse_term(&rhs_text, &sig, &vars).map_err(|e| relocate(e, eq.rhs[0]))?;
        if lhs.is_var() {
            return Err(err_at(eq.at, format!("equation `{}`: left-hand side is a variable", eq.label)));
        }
        rules.push(Rule {
            label: eq.label,
            lhs,
            rhs,
        });
    }
    Theory::new(&name, sig, rules, vars)
}

fn relocate(e: Error, w: &Word) -> Error {
    match e {
        Error::Syntax { col, msg, .. } => Error::syntax(w.line, w.col + col - 1, msg),
        Error::Sort(msg) | Error::Load(msg) => Error::syntax(w.line, w.col, msg),
        other => other,
    }
}

fn join(ws: &[&Word]) -> String {
    ws.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ")
}

fn parse_op_attrs(ws: &[&Word]) -> Result<OpAttrs> {
    let mut attrs = OpAttrs::default();
    if ws.is_empty() {
        return Ok(attrs);
    }
    let text = join(ws);
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::syntax(ws[0].line, ws[0].col, "expected attribute list `[...]`"))?;
    for a in inner.split_whitespace() {
        match a {
            "assoc" => attrs.assoc = true,
            "comm" => attrs.comm = true,
            "ctor" => attrs.ctor = true,
            other => {
                return Err(Error::syntax(
                    ws[0].line,
                    ws[0].col,
                    format!("unsupported operator attribute `{other}`"),
                ))
            }
        }
    }
    Ok(attrs)
}

fn split_equation<'a>(head: &'a Word, rest: &[&'a Word], index: usize) -> Result<PendingEq<'a>> {
    let err = |w: &Word, m: &str| Error::syntax(w.line, w.col, m.to_string());
    let mut rest = rest;
    let mut label = format!("eq{}", index + 1);
    if let Some(first) = rest.first() {
        if first.text.starts_with('[') {
            let l = first
                .text
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| err(first, "malformed equation label"))?;
            label = l.to_string();
            if rest.get(1).map(|w| w.text.as_str()) != Some(":") {
                return Err(err(first, "expected `:` after equation label"));
            }
            rest = &rest[2..];
        }
    }
    let eq_pos = rest
        .iter()
        .position(|w| w.text == "=")
        .ok_or_else(|| err(head, "expected `=` in equation"))?;
    let attr_pos = rest
        .iter()
        .rposition(|w| w.text.starts_with('['))
        .filter(|&p| p > eq_pos)
        .ok_or_else(|| err(head, "equation must carry the `[variant]` attribute"))?;
    let attr_text = join(&rest[attr_pos..]);
    if attr_text != "[variant]" {
        return Err(err(rest[attr_pos], "only the `[variant]` equation attribute is supported"));
    }
    let lhs = rest[..eq_pos].to_vec();
    let rhs = rest[eq_pos + 1..attr_pos].to_vec();
    if lhs.is_empty() || rhs.is_empty() {
        return Err(err(head, "empty side in equation"));
    }
    Ok(PendingEq {
        label,
        lhs,
        rhs,
        at: head,
    })
}

// ---------------------------------------------------------------------------
// term parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Colon,
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.chars().enumerate().collect();
    let mut i = 0;
    while i < chars.len() {
        let (col, c) = chars[i];
        let col = col + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::LParen, col));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1
            }
            ':' => {
                out.push((Tok::Colon, col));
                i += 1
            }
            _ => {
                let start = i;
                while i < chars.len() {
                    let c = chars[i].1;
                    if c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':') {
                        break;
                    }
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push((Tok::Ident(s), col));
            }
        }
    }
    Ok(out)
}

struct TermParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    vars: &'a HashMap<String, Var>,
    end_col: usize,
}

impl<'a> TermParser<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(1, self.col(), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn is_infix_symbol(&self, s: &str) -> bool {
        self.sig.ops_with_symbol(s).any(|id| self.sig.op(id).is_infix())
    }

    fn term(&mut self) -> Result<Term> {
        let first = self.primary()?;
        let mut operands = vec![first];
        let mut symbol: Option<(String, usize)> = None;
        while let Some(Tok::Ident(s)) = self.peek() {
            if !self.is_infix_symbol(s) {
                break;
            }
            let s = s.clone();
            let col = self.col();
            match &symbol {
                Some((prev, _)) if *prev != s => {
                    return Err(self.err(format!(
                        "ambiguous mix of infix operators `{prev}` and `{s}`; add parentheses"
                    )))
                }
                _ => symbol = Some((s, col)),
            }
            self.pos += 1;
            operands.push(self.primary()?);
        }
        match symbol {
            None => Ok(operands.pop().unwrap()),
            Some((sym, col)) => self.resolve_infix(&sym, operands, col),
        }
    }

    fn resolve_infix(&self, sym: &str, operands: Vec<Term>, col: usize) -> Result<Term> {
        let candidates: Vec<OpId> = self
            .sig
            .ops_with_symbol(sym)
            .filter(|&id| self.sig.op(id).is_infix())
            .collect();
        let pick = self.pick_overload(&candidates, &operands[..2.min(operands.len())], sym, col)?;
        if operands.len() > 2 && !self.sig.op(pick).attrs.assoc {
            return Err(Error::syntax(
                1,
                col,
                format!("ambiguous chain of non-associative operator `{sym}`; add parentheses"),
            ));
        }
        if operands.len() > 2 {
            self.sig.check_app(pick, &operands).map_err(|e| Error::syntax(1, col, e.to_string()))?;
            return Ok(self.sig.mk(pick, operands));
        }
        Ok(self.sig.mk(pick, operands))
    }

    fn pick_overload(&self, candidates: &[OpId], args: &[Term], name: &str, col: usize) -> Result<OpId> {
        let arity_ok: Vec<OpId> = candidates
            .iter()
            .copied()
            .filter(|&id| self.sig.op(id).arity() == args.len())
            .collect();
        if arity_ok.is_empty() {
            return Err(Error::syntax(
                1,
                col,
                if candidates.is_empty() {
                    format!("unknown operator `{name}`")
                } else {
                    format!("no declaration of `{name}` takes {} arguments", args.len())
                },
            ));
        }
        let kind_ok: Vec<OpId> = arity_ok
            .iter()
            .copied()
            .filter(|&id| self.sig.check_app(id, args).is_ok())
            .collect();
        if kind_ok.is_empty() {
            let e = self.sig.check_app(arity_ok[0], args).unwrap_err();
            return Err(Error::syntax(1, col, e.to_string()));
        }
        if kind_ok.len() == 1 {
            return Ok(kind_ok[0]);
        }
        let sort_ok: Vec<OpId> = kind_ok
            .iter()
            .copied()
            .filter(|&id| {
                args.iter()
                    .zip(&self.sig.op(id).arg_sorts)
                    .all(|(a, &s)| self.sig.leq(self.sig.least_sort(a), s))
            })
            .collect();
        // least applicable declaration
        let least: Vec<OpId> = sort_ok
            .iter()
            .copied()
            .filter(|&a| {
                sort_ok.iter().all(|&b| {
                    self.sig
                        .op(a)
                        .arg_sorts
                        .iter()
                        .zip(&self.sig.op(b).arg_sorts)
                        .all(|(&x, &y)| self.sig.leq(x, y))
                })
            })
            .collect();
        match least.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::syntax(1, col, format!("ambiguous parse of `{name}`"))),
        }
    }

    fn primary(&mut self) -> Result<Term> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::LParen, _)) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some((Tok::Ident(name), _)) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let mut args = vec![self.term()?];
                        while self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                            args.push(self.term()?);
                        }
                        self.expect(Tok::RParen)?;
                        let cands = self.sig.ops_named(&name).to_vec();
                        let op = self.pick_overload(&cands, &args, &name, col)?;
                        Ok(self.sig.mk(op, args))
                    }
                    Some(Tok::Colon) => {
                        self.pos += 1;
                        match self.toks.get(self.pos).cloned() {
                            Some((Tok::Ident(sort), scol)) => {
                                self.pos += 1;
                                let s = self
                                    .sig
                                    .sort(&sort)
                                    .map_err(|e| Error::syntax(1, scol, e.to_string()))?;
                                Ok(Term::var(&name, s))
                            }
                            _ => Err(self.err("expected a sort after `:`")),
                        }
                    }
                    _ => {
                        let var = self.vars.get(&name);
                        let consts: Vec<OpId> = self
                            .sig
                            .ops_named(&name)
                            .iter()
                            .copied()
                            .filter(|&id| self.sig.op(id).arity() == 0)
                            .collect();
                        match (var, consts.as_slice()) {
                            (Some(_), [_, ..]) => Err(Error::syntax(
                                1,
                                col,
                                format!("`{name}` is both a variable and a constant"),
                            )),
                            (Some(v), []) => Ok(Term::Var(v.clone())),
                            (None, [c]) => Ok(Term::constant(*c)),
                            (None, []) => {
                                if self.sig.ops_named(&name).is_empty() {
                                    Err(Error::syntax(1, col, format!("unknown symbol `{name}`")))
                                } else {
                                    Err(Error::syntax(1, col, format!("`{name}` needs arguments")))
                                }
                            }
                            (None, _) => Err(Error::syntax(1, col, format!("ambiguous constant `{name}`"))),
                        }
                    }
                }
            }
            Some((tok, _)) => Err(self.err(format!("unexpected token {tok:?}"))),
            None => Err(self.err("unexpected end of term")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {tok:?}")))
        }
    }
}

/// Parses a term in the mixfix subset of the module's signature. Bare names
/// resolve to declared variables or constants; `NAME:Sort` is an inline variable.
pub fn parse_term(text: &str, sig: &Signature, vars: &HashMap<String, Var>) -> Result<Term> {
    let toks = tokenize(text)?;
    let mut p = TermParser {
        toks,
        pos: 0,
        sig,
        vars,
        end_col: text.chars().count() + 1,
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

/// `T1 =? T1' /\ ... /\ Tk =? Tk'`, optionally prefixed by `[n]` as a bound.
pub fn parse_problem(text: &str, theory: &Theory) -> Result<Problem> {
    let mut body = text.trim();
    let mut bound = None;
    if let Some(rest) = body.strip_prefix('[') {
        let close = rest.find(']').ok_or_else(|| Error::syntax(1, 1, "unterminated bound"))?;
        bound = Some(
            rest[..close]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::syntax(1, 2, "bound must be a natural number"))?,
        );
        body = rest[close + 1..].trim();
    }
    if body.is_empty() {
        return Err(Error::syntax(1, 1, "at least one equation `T =? T'` is required"));
    }
    let mut pairs = Vec::new();
    for conj in body.split("/\\") {
        let (l, r) = conj
            .split_once("=?")
            .ok_or_else(|| Error::syntax(1, 1, format!("expected `=?` in `{}`", conj.trim())))?;
        if r.contains("=?") {
            return Err(Error::syntax(1, 1, "each conjunct has exactly one `=?`"));
        }
        let lt = parse_term(l.trim(), &theory.sig, &theory.vars)?;
        let rt = parse_term(r.trim(), &theory.sig, &theory.vars)?;
        if !theory
            .sig
            .same_component(theory.sig.least_sort(&lt), theory.sig.least_sort(&rt))
        {
            return Err(Error::Sort(format!(
                "sides of `{}` have different kinds",
                conj.trim()
            )));
        }
        pairs.push((lt, rt));
    }
    Ok(Problem {
        module_name: theory.name.clone(),
        pairs,
        bound,
    })
}

/// Problem file: one command per line, `unify: ...` or `variants: T`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_problem_file(text: &str, theory: &Theory) -> Result<Vec<Command>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at_line = |e: Error| match e {
            Error::Syntax { col, msg, .. } => Error::syntax(i + 1, col, msg),
            other => other,
        };
        if let Some(rest) = line.strip_prefix("unify:") {
            out.push(Command::Unify(parse_problem(rest, theory).map_err(at_line)?));
        } else if let Some(rest) = line.strip_prefix("variants:") {
            out.push(Command::Variants(
                parse_term(rest.trim(), &theory.sig, &theory.vars).map_err(at_line)?,
            ));
        } else {
            return Err(Error::syntax(i + 1, 1, "expected `unify:` or `variants:`"));
        }
    }
    Ok(out)
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label)
    }
}
