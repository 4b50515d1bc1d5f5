//! Command implementations, Maude-style listings, the benchmark harness and
//! a brute-force ground oracle.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::normalize::{normalize, normalize_traced};
use crate::sigterm::{OpId, Signature, SortId, Substitution, Term, Var};
use crate::theoryparse::{parse_module, parse_problem, parse_term, Theory};
use crate::varnarrow::{get_variants, Variant};
use crate::varunify::{present, unify, Algo, Status, UnifQuery};
use crate::Ctx;

/// Process exit code for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VariantBoundExceeded(_) | Error::StepBudgetExceeded(_) => 2,
        Error::DiophantineExplosion(_) => 3,
        Error::Timeout => 4,
        _ => 1,
    }
}

pub fn load_module(path: &Path) -> Result<Theory> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_module(&text)
}

/// Text for standard output plus diagnostics for standard error.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
}

/// Least sort of `t`, taking overloading and subsorts into account; the
/// kind when no declaration fits.
pub fn term_sort(sig: &Signature, t: &Term) -> SortId {
    match t {
        Term::Var(v) => v.sort,
        Term::App(op, args) => {
            let d = sig.op(*op);
            if d.tuple {
                return d.result;
            }
            let arg_sorts: Vec<SortId> = args.iter().map(|a| term_sort(sig, a)).collect();
            let fits = |o: OpId| {
                let od = sig.op(o);
                if od.attrs.is_ac() {
                    arg_sorts.iter().all(|&s| sig.leq(s, od.arg_sorts[0]))
                } else {
                    od.arity() == arg_sorts.len() && arg_sorts.iter().zip(&od.arg_sorts).all(|(&s, &w)| sig.leq(s, w))
                }
            };
            let results: Vec<SortId> = sig
                .ops_named(&d.name)
                .iter()
                .copied()
                .filter(|&o| fits(o))
                .map(|o| sig.op(o).result)
                .collect();
            results
                .iter()
                .copied()
                .find(|&r| results.iter().all(|&q| sig.leq(r, q)))
                .or_else(|| results.first().copied())
                .unwrap_or_else(|| sig.kind_of(d.result))
        }
    }
}

/// Renames every non-base variable to `#1, #2, …` in first-use order over
/// the images of `base`, then the term.
fn renumber_variant(sig: &Signature, base: &[Var], v: &Variant) -> (Term, Vec<(Var, Term)>) {
    let mut order = Vec::new();
    for x in base {
        v.subst.image(x).vars_in_order(&mut order);
    }
    v.term.vars_in_order(&mut order);
    let ren = Substitution::from_pairs(
        order
            .iter()
            .enumerate()
            .map(|(i, y)| (y.clone(), Term::Var(Var::new(&format!("#{}", i + 1), y.sort)))),
    );
    let lines = base.iter().map(|x| (x.clone(), ren.apply(sig, &v.subst.image(x)))).collect();
    (ren.apply(sig, &v.term), lines)
}

pub fn format_variants(sig: &Signature, base: &[Var], vs: &[Variant]) -> String {
    let mut out = String::new();
    for (k, v) in vs.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let (term, lines) = renumber_variant(sig, base, v);
        let _ = writeln!(out, "Variant #{}", k + 1);
        let _ = writeln!(out, "{}: {}", sig.sort_name(term_sort(sig, &term)), term.display(sig));
        for (x, t) in lines {
            let _ = writeln!(out, "{} --> {}", x.name, t.display(sig));
        }
    }
    out
}

pub fn format_unifiers(sig: &Signature, rows: &[Vec<(Var, Term)>]) -> String {
    if rows.is_empty() {
        return "No unifiers.\n".to_string();
    }
    let mut out = String::new();
    for (k, lines) in rows.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "Unifier #{}", k + 1);
        for (x, t) in lines {
            let _ = writeln!(out, "{} --> {}", x.name, t.display(sig));
        }
    }
    out
}

fn trace_lines(th: &Theory, ctx: &Ctx, label: &str, t: &Term) -> Result<String> {
    let tr = normalize_traced(th, ctx, t)?;
    Ok(format!("{label}: {}\n{}", t.display(&th.sig), tr.display(&th.sig)))
}

/// `get variants [bound] in M : term`.
pub fn cmd_get_variants(th: &Theory, term_text: &str, bound: Option<usize>, timeout: Option<Duration>, trace: bool) -> Result<CmdOutput> {
    let t = parse_term(term_text.trim(), &th.sig, &th.vars)?;
    let mut ctx = Ctx::new().with_timeout(timeout);
    let mut out = CmdOutput::default();
    if trace {
        out.stderr = trace_lines(th, &ctx, "term", &t)?;
    }
    let vs = get_variants(th, &mut ctx, &t, bound)?;
    let mut base = Vec::new();
    t.vars_in_order(&mut base);
    out.stdout = format_variants(&th.sig, &base, &vs);
    Ok(out)
}

/// `variant unify [bound] in M : problem` with the chosen algorithm. A
/// `[n]` prefix in the problem text acts as the bound when none is given.
pub fn cmd_unify(
    th: &Theory,
    problem_text: &str,
    algo: Algo,
    bound: Option<usize>,
    timeout: Option<Duration>,
    trace: bool,
) -> Result<CmdOutput> {
    let p = parse_problem(problem_text, th)?;
    let bound = bound.or(p.bound);
    let q = UnifQuery::from_pairs(&th.sig, &p.pairs)?;
    let mut ctx = Ctx::new().with_timeout(timeout);
    let mut out = CmdOutput::default();
    if trace {
        for (i, (l, r)) in p.pairs.iter().enumerate() {
            out.stderr += &trace_lines(th, &ctx, &format!("lhs {}", i + 1), l)?;
            out.stderr += &trace_lines(th, &ctx, &format!("rhs {}", i + 1), r)?;
        }
    }
    let us = unify(th, &mut ctx, &q, algo, bound)?;
    match us.status {
        Status::Complete => {}
        Status::Truncated(n) => out.stderr += &format!("note: output truncated to {n} unifiers\n"),
        Status::Unminimized => out.stderr += "warning: subsumption could not be decided for some unifiers\n",
    }
    out.stdout = format_unifiers(&th.sig, &present(&th.sig, &q, &us.unifiers));
    Ok(out)
}

// ---------------------------------------------------------------------------
// benchmark harness

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchProblem {
    pub id: String,
    /// Resolved against the suite file's directory.
    pub module: PathBuf,
    pub problem: String,
    pub expected: Vec<(Algo, usize)>,
    pub hard: bool,
}

impl BenchProblem {
    pub fn expected(&self, algo: Algo) -> Option<usize> {
        self.expected.iter().find(|(a, _)| *a == algo).map(|(_, n)| *n)
    }

    /// Baseline counts are always targets; constructor-root counts only when
    /// they are 0 or 1, since larger ones depend on the expansion order.
    pub fn is_target(&self, algo: Algo) -> bool {
        if !self.hard {
            return false;
        }
        match (algo, self.expected(algo)) {
            (Algo::Maude, Some(_)) => true,
            (Algo::Cr | Algo::CrFast, Some(n)) => n <= 1,
            _ => false,
        }
    }
}

/// `ID | MODULE-FILE | PROBLEM | maude=N,fast=N,cr=N,crfast=N | hard|soft`.
pub fn parse_suite(text: &str, base_dir: &Path) -> Result<Vec<BenchProblem>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::syntax(i + 1, 1, msg.to_string());
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad("expected five `|`-separated fields"));
        }
        let mut expected = Vec::new();
        for item in f[3].split(',').map(str::trim).filter(|s| !s.is_empty() && *s != "-") {
            let (k, v) = item.split_once('=').ok_or_else(|| bad("expected `algo=count`"))?;
            let algo: Algo = k.trim().parse().map_err(|_| bad("unknown algorithm"))?;
            let n = v.trim().parse().map_err(|_| bad("count must be a natural number"))?;
            expected.push((algo, n));
        }
        let hard = match f[4] {
            "hard" => true,
            "soft" => false,
            _ => return Err(bad("last field must be `hard` or `soft`")),
        };
        out.push(BenchProblem {
            id: f[0].to_string(),
            module: base_dir.join(f[1]),
            problem: f[2].to_string(),
            expected,
            hard,
        });
    }
    Ok(out)
}

pub fn load_suite(path: &Path) -> Result<Vec<BenchProblem>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_suite(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Timeout,
    BoundExceeded,
    /// Module or problem could not be loaded.
    Skip,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Timeout => "timeout",
            RowStatus::BoundExceeded => "bound-exceeded",
            RowStatus::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail,
    /// Soft reference value, reported only.
    Reference,
    /// No expected value.
    None,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Reference => "ref",
            Check::None => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub problem: String,
    pub algo: Algo,
    pub count: Option<usize>,
    pub time_ms: f64,
    pub status: RowStatus,
    pub expected: Option<usize>,
    pub check: Check,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, problem: &str, algo: Algo) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.problem == problem && r.algo == algo)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem,algo,count,time_ms,status,expected,check\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.3},{},{},{}",
                r.problem,
                r.algo,
                r.count.map(|n| n.to_string()).unwrap_or_default(),
                r.time_ms,
                r.status.name(),
                r.expected.map(|n| n.to_string()).unwrap_or_default(),
                r.check.name()
            );
        }
        out
    }

    /// Human-readable table of observed against expected counts.
    pub fn summary(&self) -> String {
        let mut out = format!("{:<6} {:<8} {:>8} {:>8} {:>12} {:<15} {}\n", "id", "algo", "count", "expected", "time_ms", "status", "check");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<6} {:<8} {:>8} {:>8} {:>12.3} {:<15} {}",
                r.problem,
                r.algo.to_string(),
                r.count.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
                r.expected.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
                r.time_ms,
                r.status.name(),
                r.check.name()
            );
        }
        let fails = self.rows.iter().filter(|r| r.check == Check::Fail).count();
        let _ = writeln!(out, "{} rows, {} failing targets", self.rows.len(), fails);
        out
    }
}

fn run_row(p: &BenchProblem, th: Option<&Theory>, algo: Algo, timeout: Option<Duration>) -> BenchRow {
    let start = Instant::now();
    let result = th.ok_or(Error::Load(String::new())).and_then(|th| {
        let prob = parse_problem(&p.problem, th)?;
        let q = UnifQuery::from_pairs(&th.sig, &prob.pairs)?;
        let mut ctx = Ctx::new().with_timeout(timeout);
        unify(th, &mut ctx, &q, algo, prob.bound)
    });
    let time_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (count, status) = match result {
        Ok(us) => (Some(us.len()), RowStatus::Ok),
        Err(Error::Timeout) => (None, RowStatus::Timeout),
        Err(Error::VariantBoundExceeded(_) | Error::DiophantineExplosion(_) | Error::StepBudgetExceeded(_)) => {
            (None, RowStatus::BoundExceeded)
        }
        Err(_) => (None, RowStatus::Skip),
    };
    let expected = p.expected(algo);
    let check = match expected {
        None => Check::None,
        Some(_) if !p.is_target(algo) => Check::Reference,
        Some(n) if count == Some(n) => Check::Pass,
        Some(_) => Check::Fail,
    };
    BenchRow {
        problem: p.id.clone(),
        algo,
        count,
        time_ms,
        status,
        expected,
        check,
    }
}

/// Runs every (problem, algorithm) pair; rows come back in suite order
/// whatever the number of worker threads.
pub fn run_bench(problems: &[BenchProblem], algos: &[Algo], timeout: Option<Duration>, jobs: usize) -> BenchReport {
    let theories: Vec<Option<Theory>> = problems.iter().map(|p| load_module(&p.module).ok()).collect();
    let tasks: Vec<(usize, Algo)> = (0..problems.len())
        .flat_map(|i| algos.iter().map(move |&a| (i, a)))
        .collect();
    let slots: Vec<Mutex<Option<BenchRow>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, algo)) = tasks.get(k) else { break };
                let row = run_row(&problems[i], theories[i].as_ref(), algo, timeout);
                *slots[k].lock().unwrap() = Some(row);
            });
        }
    });
    BenchReport {
        rows: slots.into_iter().filter_map(|m| m.into_inner().unwrap()).collect(),
    }
}

// ---------------------------------------------------------------------------
// ground oracle

/// Normal forms of the ground terms of height at most `depth` over `consts`
/// and the non-constant operators. An AC operator contributes products of two
/// or three factors. Fails once more than `cap` terms are produced.
pub fn ground_values(th: &Theory, depth: usize, consts: &[OpId], cap: usize) -> Result<Vec<Term>> {
    let sig = &th.sig;
    let ctx = Ctx::new();
    let mut seen: BTreeSet<Term> = BTreeSet::new();
    for &c in consts {
        seen.insert(normalize(th, &ctx, &Term::App(c, Vec::new()))?);
    }
    let ops: Vec<OpId> = sig
        .ops()
        .filter(|(_, d)| d.arity() > 0 && !d.tuple)
        .map(|(id, _)| id)
        .collect();
    for _ in 0..depth {
        let level: Vec<Term> = seen.iter().cloned().collect();
        let add = |t: Term, seen: &mut BTreeSet<Term>| -> Result<()> {
            seen.insert(normalize(th, &ctx, &t)?);
            if seen.len() > cap {
                return Err(Error::OracleOverflow(cap));
            }
            Ok(())
        };
        for &op in &ops {
            let d = sig.op(op);
            if d.attrs.is_ac() {
                let ok: Vec<&Term> = level
                    .iter()
                    .filter(|t| sig.same_component(term_sort(sig, t), d.arg_sorts[0]))
                    .collect();
                for i in 0..ok.len() {
                    for j in i..ok.len() {
                        add(sig.mk(op, vec![ok[i].clone(), ok[j].clone()]), &mut seen)?;
                        for k in j..ok.len() {
                            add(sig.mk(op, vec![ok[i].clone(), ok[j].clone(), ok[k].clone()]), &mut seen)?;
                        }
                    }
                }
            } else {
                let choices: Vec<Vec<&Term>> = d
                    .arg_sorts
                    .iter()
                    .map(|&w| level.iter().filter(|t| sig.leq(term_sort(sig, t), w)).collect())
                    .collect();
                let mut idx = vec![0usize; choices.len()];
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                loop {
                    let args = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                    add(sig.mk(op, args), &mut seen)?;
                    let mut p = 0;
                    while p < idx.len() {
                        idx[p] += 1;
                        if idx[p] < choices[p].len() {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == idx.len() {
                        break;
                    }
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Every assignment of `values` to `vars` (respecting sorts), as lists of
/// images in the order of `vars`.
fn assignments<'a>(sig: &Signature, vars: &[Var], values: &'a [Term], cap: usize) -> Result<Vec<Vec<&'a Term>>> {
    let choices: Vec<Vec<&Term>> = vars
        .iter()
        .map(|x| values.iter().filter(|t| sig.leq(term_sort(sig, t), x.sort)).collect())
        .collect();
    let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    match total {
        Some(n) if n <= cap => {}
        _ => return Err(Error::OracleOverflow(cap)),
    }
    let mut out = vec![Vec::new()];
    for c in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |&t| {
                    let mut p = prefix.clone();
                    p.push(t);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

/// Ground solutions of `pairs` whose images are among the normalized ground
/// terms of height at most `depth`. `consts` defaults to the theory's constants.
pub fn ground_oracle(
    th: &Theory,
    pairs: &[(Term, Term)],
    depth: usize,
    consts: Option<&[OpId]>,
    cap: usize,
) -> Result<Vec<Substitution>> {
    let all = th.constants();
    let values = ground_values(th, depth, consts.unwrap_or(&all), cap)?;
    let mut vars = Vec::new();
    for (l, r) in pairs {
        l.vars_in_order(&mut vars);
        r.vars_in_order(&mut vars);
    }
    let ctx = Ctx::new();
    let mut out = Vec::new();
    for imgs in assignments(&th.sig, &vars, &values, cap)? {
        let rho = Substitution::from_pairs(vars.iter().cloned().zip(imgs.into_iter().cloned()));
        let mut ok = true;
        for (l, r) in pairs {
            if normalize(th, &ctx, &rho.apply(&th.sig, l))? != normalize(th, &ctx, &rho.apply(&th.sig, r))? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(rho);
        }
    }
    Ok(out)
}

/// Normalized images on `vars` of every ground instance `σγ`, with `γ`
/// ranging over `values` on the variables of `σ`'s images.
pub fn ground_instances(
    th: &Theory,
    vars: &[Var],
    sigma: &Substitution,
    values: &[Term],
    cap: usize,
) -> Result<HashSet<Vec<Term>>> {
    let mut range = Vec::new();
    for x in vars {
        sigma.image(x).vars_in_order(&mut range);
    }
    let ctx = Ctx::new();
    let mut out = HashSet::new();
    for imgs in assignments(&th.sig, &range, values, cap)? {
        let gamma = Substitution::from_pairs(range.iter().cloned().zip(imgs.into_iter().cloned()));
        let row = vars
            .iter()
            .map(|x| normalize(th, &ctx, &gamma.apply(&th.sig, &sigma.image(x))))
            .collect::<Result<Vec<Term>>>()?;
        out.insert(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
