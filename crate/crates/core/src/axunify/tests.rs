use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::theoryparse::{parse_module, parse_term, Theory};

const XOR: &str = include_str!("../../theories/exclusive-or.maude");
const CTORS: &str = include_str!("../../theories/xor-ctors.maude");

fn term(th: &Theory, s: &str) -> Term {
    parse_term(s, &th.sig, &th.vars).unwrap()
}

fn unify(th: &Theory, l: &str, r: &str) -> Vec<Substitution> {
    let mut ctx = Ctx::new();
    b_unify(&th.sig, &mut ctx, &[(term(th, l), term(th, r))], &BTreeSet::new()).unwrap()
}

fn vars_of(pairs: &[(Term, Term)]) -> Vec<Var> {
    let mut out = BTreeSet::new();
    for (l, r) in pairs {
        l.collect_vars(&mut out);
        r.collect_vars(&mut out);
    }
    out.into_iter().collect()
}

/// `general` is at least as general as `inst` on `vars`.
fn more_general(sig: &Signature, vars: &[Var], general: &Substitution, inst: &Substitution) -> bool {
    let pairs: Vec<(Term, Term)> = vars
        .iter()
        .map(|x| (general.image(x), inst.image(x)))
        .collect();
    match_first(sig, &pairs).is_some()
}

#[test]
fn matching_counts() {
    let th = parse_module(XOR).unwrap();
    let none = BTreeSet::new();
    let m = |p: &str, s: &str| b_match(&th.sig, &term(&th, p), &term(&th, s), &none);
    assert_eq!(m("X * X", "a * a").len(), 1);
    assert!(m("X * X", "a * b").is_empty());
    assert_eq!(m("X * Z", "a * b * c").len(), 6);
    assert_eq!(m("X * a", "a * b * c").len(), 1);
    assert_eq!(m("X * X * Y", "a * a * b * b * c").len(), 3);
    assert!(m("X * Y * Z", "a * b").is_empty());
}

#[test]
fn matching_respects_protected_variables() {
    let th = parse_module(XOR).unwrap();
    let x = th.vars["X"].clone();
    let protected: BTreeSet<Var> = [x].into_iter().collect();
    assert_eq!(b_match(&th.sig, &term(&th, "X * Y"), &term(&th, "X * a"), &protected).len(), 1);
    assert!(b_match(&th.sig, &term(&th, "X * Y"), &term(&th, "a * b"), &protected).is_empty());
}

#[test]
fn matching_allows_shared_names() {
    let th = parse_module(CTORS).unwrap();
    // pattern and subject share X; X must not be rebound after X |-> X
    let got = b_match(&th.sig, &term(&th, "f2(X, X)"), &term(&th, "f2(X, a)"), &BTreeSet::new());
    assert!(got.is_empty());
}

#[test]
fn unification_counts() {
    let th = parse_module(XOR).unwrap();
    assert_eq!(unify(&th, "X * Y", "a * b").len(), 2);
    assert_eq!(unify(&th, "X * Y", "U * V").len(), 7);
    assert_eq!(unify(&th, "X * X", "a * b").len(), 0);
    assert_eq!(unify(&th, "X * X", "Y * Y").len(), 1);
    assert_eq!(unify(&th, "X * a", "Y * b").len(), 2);
    assert_eq!(unify(&th, "X", "X * Y").len(), 0);
    assert_eq!(unify(&th, "X", "Y").len(), 1);
}

#[test]
fn unifiers_are_fresh_and_idempotent() {
    let th = parse_module(XOR).unwrap();
    for s in unify(&th, "X * Y", "U * V") {
        assert!(s.is_idempotent());
        for v in s.range_vars() {
            assert!(v.name.starts_with('%'), "{}", s.display(&th.sig));
        }
    }
}

#[test]
fn free_symbols_decompose() {
    let th = parse_module(CTORS).unwrap();
    assert_eq!(unify(&th, "f2(X, Y)", "f2(a, b * Z)").len(), 1);
    assert!(unify(&th, "f1(X)", "f2(X, X)").is_empty());
    assert!(unify(&th, "f1(X)", "X").is_empty());
    assert_eq!(unify(&th, "f1(X) * Y", "f1(a) * b").len(), 1);
}

#[test]
fn sorts_restrict_bindings() {
    let th = parse_module(CTORS).unwrap();
    let e = th.sig.sort("Elem").unwrap();
    let mut ctx = Ctx::new();
    let x = Term::Var(Var::new("E", e));
    let got = b_unify(&th.sig, &mut ctx, &[(x.clone(), term(&th, "a * b"))], &BTreeSet::new()).unwrap();
    assert!(got.is_empty());
    let got = b_unify(&th.sig, &mut ctx, &[(x, term(&th, "a"))], &BTreeSet::new()).unwrap();
    assert_eq!(got.len(), 1);
}

/// Ground products over {a, b} of one or two factors.
fn ground_values(th: &Theory) -> Vec<Term> {
    ["a", "b", "a * a", "a * b", "b * b"].iter().map(|s| term(th, s)).collect()
}

fn assign(vars: &[Var], values: &[Term], idx: &[usize]) -> Substitution {
    Substitution::from_pairs(vars.iter().cloned().zip(idx.iter().map(|&i| values[i].clone())))
}

fn check_against_ground_oracle(th: &Theory, pairs: &[(Term, Term)]) {
    let sig = &th.sig;
    let mut ctx = Ctx::new();
    let sols = b_unify(sig, &mut ctx, pairs, &BTreeSet::new()).unwrap();
    for s in &sols {
        for (l, r) in pairs {
            assert_eq!(s.apply(sig, l), s.apply(sig, r), "unsound {}", s.display(sig));
        }
    }
    let vars = vars_of(pairs);
    let values = ground_values(th);
    let mut idx = vec![0usize; vars.len()];
    loop {
        let rho = assign(&vars, &values, &idx);
        if pairs.iter().all(|(l, r)| rho.apply(sig, l) == rho.apply(sig, r)) {
            assert!(
                sols.iter().any(|s| more_general(sig, &vars, s, &rho)),
                "ground solution {} not covered",
                rho.display(sig)
            );
        }
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < values.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
}

fn side() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["X", "Y", "Z", "a", "b"]), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ac_unifiers_sound_and_ground_complete(l in side(), r in side()) {
        let th = parse_module(XOR).unwrap();
        let pair = (term(&th, &l.join(" * ")), term(&th, &r.join(" * ")));
        check_against_ground_oracle(&th, &[pair]);
    }

    #[test]
    fn matchers_are_sound(l in side(), r in prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 1..5)) {
        let th = parse_module(XOR).unwrap();
        let (p, s) = (term(&th, &l.join(" * ")), term(&th, &r.join(" * ")));
        for m in b_match(&th.sig, &p, &s, &BTreeSet::new()) {
            prop_assert_eq!(m.apply(&th.sig, &p), s.clone());
        }
    }
}
