use super::*;

const XOR: &str = include_str!("../../theories/exclusive-or.maude");
const FG: &str = include_str!("../../theories/fast-vs-cr.maude");
const CTORS: &str = include_str!("../../theories/xor-ctors.maude");

fn blocks(text: &str, head: &str) -> Vec<String> {
    text.split("\n\n").filter(|b| b.starts_with(head)).map(str::to_string).collect()
}

fn suite_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("suites/xor-table1.suite")
}

#[test]
fn xor_product_listing() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_get_variants(&th, "X * Y", None, None, false).unwrap();
    let bs = blocks(&out.stdout, "Variant #");
    assert_eq!(bs.len(), 7);
    let first: Vec<&str> = bs[0].lines().collect();
    assert_eq!(first, ["Variant #1", "[EXor]: #1:[EXor] * #2:[EXor]", "X --> #1:[EXor]", "Y --> #2:[EXor]"]);
    assert!(bs[6].starts_with("Variant #7\n"));
}

#[test]
fn constant_has_one_variant() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_get_variants(&th, "a", None, None, false).unwrap();
    assert_eq!(blocks(&out.stdout, "Variant #").len(), 1);
    assert!(out.stdout.starts_with("Variant #1\nElem: a\n"));
}

#[test]
fn variant_bound_cuts_the_listing() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_get_variants(&th, "X * Y", Some(3), None, false).unwrap();
    assert_eq!(blocks(&out.stdout, "Variant #").len(), 3);
}

#[test]
fn xor_baseline_listing_has_57_unifiers() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_unify(&th, "X * Y =? U * V", Algo::Maude, None, None, false).unwrap();
    let bs = blocks(&out.stdout, "Unifier #");
    assert_eq!(bs.len(), 57);
    for b in &bs {
        let names: Vec<&str> = b.lines().skip(1).map(|l| l.split(" --> ").next().unwrap()).collect();
        assert_eq!(names, ["X", "Y", "U", "V"]);
    }
}

#[test]
fn fg_listing() {
    let th = parse_module(FG).unwrap();
    let out = cmd_unify(&th, "f(X,Y,Z) =? s(W)", Algo::Maude, None, None, false).unwrap();
    let bs = blocks(&out.stdout, "Unifier #");
    assert_eq!(bs.len(), 2);
    assert!(bs[0].lines().any(|l| l == "X --> a"), "{}", bs[0]);
    assert!(bs[1].lines().any(|l| l == "X --> b"), "{}", bs[1]);
    assert!(bs[1].lines().any(|l| l == "Y --> c"), "{}", bs[1]);
}

#[test]
fn p11_has_no_constructor_root_unifier() {
    let th = parse_module(CTORS).unwrap();
    let out = cmd_unify(&th, "f1(V1 * V2) =? f2(V3 * V4 * V5, f2(V4, V5))", Algo::Cr, None, None, false).unwrap();
    assert_eq!(out.stdout, "No unifiers.\n");
}

#[test]
fn listing_is_deterministic() {
    let th = parse_module(XOR).unwrap();
    let a = cmd_unify(&th, "X =? U * V", Algo::Maude, None, None, false).unwrap();
    let b = cmd_unify(&th, "X =? U * V", Algo::Maude, None, None, false).unwrap();
    assert_eq!(a, b);
    assert_eq!(blocks(&a.stdout, "Unifier #").len(), 7);
}

#[test]
fn bracket_bound_in_problem_text() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_unify(&th, "[2] X * Y =? U * V", Algo::Maude, None, None, false).unwrap();
    assert_eq!(blocks(&out.stdout, "Unifier #").len(), 2);
    assert!(out.stderr.contains("truncated"));
}

#[test]
fn trace_goes_to_stderr() {
    let th = parse_module(XOR).unwrap();
    let out = cmd_unify(&th, "X * X * a =? U", Algo::Fast, None, None, true).unwrap();
    assert!(out.stderr.contains("rule=idem"), "{}", out.stderr);
    assert!(out.stderr.lines().any(|l| l.starts_with("pos=")));
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&Error::syntax(1, 1, "x")), 1);
    assert_eq!(exit_code(&Error::Load("x".into())), 1);
    assert_eq!(exit_code(&Error::VariantBoundExceeded(3)), 2);
    assert_eq!(exit_code(&Error::DiophantineExplosion(3)), 3);
    assert_eq!(exit_code(&Error::Timeout), 4);
    let th = parse_module(XOR).unwrap();
    let e = cmd_unify(&th, "X * =? U", Algo::Maude, None, None, false).unwrap_err();
    assert_eq!(exit_code(&e), 1);
}

#[test]
fn zero_timeout_is_reported() {
    let th = parse_module(XOR).unwrap();
    let e = cmd_unify(&th, "X * Y =? U * V", Algo::Maude, None, Some(Duration::ZERO), false).unwrap_err();
    assert_eq!(e, Error::Timeout);
    assert_eq!(exit_code(&e), 4);
}

#[test]
fn shipped_suite_parses() {
    let ps = load_suite(&suite_path()).unwrap();
    assert_eq!(ps.len(), 15);
    assert_eq!(ps[0].id, "P1");
    assert!(ps.iter().all(|p| p.module.ends_with("theories/xor-ctors.maude")));
    let p3 = &ps[2];
    assert_eq!(p3.expected(Algo::Maude), Some(57));
    assert_eq!(p3.expected(Algo::Cr), Some(41));
    assert!(p3.is_target(Algo::Maude));
    assert!(!p3.is_target(Algo::Cr));
    assert!(!p3.is_target(Algo::Fast));
    assert!(ps[0].is_target(Algo::CrFast));
    let soft: Vec<&str> = ps.iter().filter(|p| !p.hard).map(|p| p.id.as_str()).collect();
    assert_eq!(soft, ["P5", "P9", "P10"]);
}

#[test]
fn suite_syntax_errors() {
    assert!(parse_suite("P1 | m | X =? Y | maude=1 |", Path::new(".")).is_err());
    assert!(parse_suite("P1 | m | X =? Y | magic=1 | hard", Path::new(".")).is_err());
    assert!(parse_suite("P1 | m | X =? Y | maude=1 | maybe", Path::new(".")).is_err());
    assert!(parse_suite("# only a comment\n\n", Path::new(".")).unwrap().is_empty());
}

#[test]
fn bench_rows_follow_suite_order() {
    let ps = load_suite(&suite_path()).unwrap();
    let algos = [Algo::Cr, Algo::CrFast];
    let report = run_bench(&ps, &algos, Some(Duration::from_secs(60)), 3);
    assert_eq!(report.rows.len(), 30);
    for (k, r) in report.rows.iter().enumerate() {
        assert_eq!(r.problem, ps[k / 2].id);
        assert_eq!(r.algo, algos[k % 2]);
    }
    let p1 = report.row("P1", Algo::Cr).unwrap();
    assert_eq!((p1.count, p1.status, p1.check), (Some(1), RowStatus::Ok, Check::Pass));
    let p3 = report.row("P3", Algo::Cr).unwrap();
    assert_eq!(p3.check, Check::Reference);
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), 31);
    assert!(csv.starts_with("problem,algo,count,time_ms,status,expected,check\n"));
    assert!(csv.lines().nth(1).unwrap().starts_with("P1,cr,1,"));
}

#[test]
fn bench_csv_is_deterministic_apart_from_times() {
    let ps = load_suite(&suite_path()).unwrap();
    let strip = |r: BenchReport| -> Vec<String> {
        r.to_csv()
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f[3] = "";
                f.join(",")
            })
            .collect()
    };
    let a = strip(run_bench(&ps[..6], &Algo::ALL, None, 1));
    let b = strip(run_bench(&ps[..6], &Algo::ALL, None, 4));
    assert_eq!(a, b);
}

#[test]
fn missing_theory_is_skipped() {
    let ps = parse_suite(
        "P16 | no-such-theory.maude | X * Y =? U | maude=1 | hard",
        Path::new(env!("CARGO_MANIFEST_DIR")),
    )
    .unwrap();
    let report = run_bench(&ps, &Algo::ALL, None, 2);
    assert_eq!(report.rows.len(), 4);
    assert!(report.rows.iter().all(|r| r.status == RowStatus::Skip && r.count.is_none()));
    assert_eq!(report.rows[0].check, Check::Fail);
}

#[test]
fn oracle_single_constant() {
    let th = parse_module(XOR).unwrap();
    let x = parse_term("X", &th.sig, &th.vars).unwrap();
    let a = parse_term("a", &th.sig, &th.vars).unwrap();
    let sols = ground_oracle(&th, &[(x.clone(), a.clone())], 0, None, 10_000).unwrap();
    assert_eq!(sols, vec![Substitution::singleton(x.as_var().unwrap().clone(), a)]);
}

#[test]
fn oracle_xor_to_mt() {
    let th = parse_module(XOR).unwrap();
    let l = parse_term("X * Y", &th.sig, &th.vars).unwrap();
    let r = parse_term("mt", &th.sig, &th.vars).unwrap();
    let sols = ground_oracle(&th, &[(l, r)], 1, None, 10_000).unwrap();
    let show: Vec<String> = sols.iter().map(|s| s.display(&th.sig).to_string()).collect();
    let (x, y) = (th.vars["X"].clone(), th.vars["Y"].clone());
    let pick = |n: &str| parse_term(n, &th.sig, &th.vars).unwrap();
    for c in ["a", "mt"] {
        let want = Substitution::from_pairs([(x.clone(), pick(c)), (y.clone(), pick(c))]);
        assert!(sols.contains(&want), "{c}: {show:?}");
    }
    // the ground normal forms are the 8 subsets of {a, b, c}; each pairs with itself
    assert_eq!(sols.len(), 8);
    assert!(sols.iter().all(|s| s.image(&x) == s.image(&y)));
}

#[test]
fn oracle_fg_solutions_start_with_a_or_b_c() {
    let th = parse_module(FG).unwrap();
    let l = parse_term("f(X,Y,Z)", &th.sig, &th.vars).unwrap();
    let r = parse_term("s(W)", &th.sig, &th.vars).unwrap();
    let consts: Vec<OpId> = ["a", "b", "c"].iter().map(|n| th.sig.ops_named(n)[0]).collect();
    let sols = ground_oracle(&th, &[(l, r)], 1, Some(&consts), 1_000_000).unwrap();
    assert!(!sols.is_empty());
    let pick = |n: &str| parse_term(n, &th.sig, &th.vars).unwrap();
    let (x, y) = (th.vars["X"].clone(), th.vars["Y"].clone());
    for s in &sols {
        assert!(s.image(&x) == pick("a") || (s.image(&x) == pick("b") && s.image(&y) == pick("c")));
    }
}

#[test]
fn oracle_overflow_is_explicit() {
    let th = parse_module(XOR).unwrap();
    let l = parse_term("X * Y * Z", &th.sig, &th.vars).unwrap();
    let r = parse_term("U * V", &th.sig, &th.vars).unwrap();
    assert_eq!(ground_oracle(&th, &[(l, r)], 1, None, 100), Err(Error::OracleOverflow(100)));
}

#[test]
fn ground_instances_of_the_xor_mgu() {
    let th = parse_module(XOR).unwrap();
    let vals = ground_values(&th, 1, &th.constants(), 1000).unwrap();
    assert_eq!(vals.len(), 8);
    let (x, u, v) = (th.vars["X"].clone(), th.vars["U"].clone(), th.vars["V"].clone());
    let mgu = Substitution::from_pairs([
        (x.clone(), parse_term("U * V", &th.sig, &th.vars).unwrap()),
    ]);
    let inst = ground_instances(&th, &[x, u, v], &mgu, &vals, 10_000).unwrap();
    assert_eq!(inst.len(), 64);
}
