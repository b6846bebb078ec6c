//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails. Every CLI run is recorded; criterion 8 re-checks the
//! witness of each failing verdict through the library.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use serde_json::Value;

use exphull::case2::{check_permutation, solve_permutation, support, translation_generator};
use exphull::enumerate::to_rational_rows;
use exphull::mordell::{recheck_element_witness, FiniteRankGroup};
use exphull::scalar::{parse_rational, rat_int};
use exphull::variety::pair_names;
use exphull::{parse_poly, AVariety, Dimension, Ideal, LaurentPoly, Poly, QMatrix, RadicalField, Rational, SubspaceSpec, ZMatrix};
use exphull_cli::input::{self, GroupSpec};
use exphull_cli::report;

const PROPERTY_CASES: u32 = 200;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[derive(Debug, Clone)]
struct Run {
    args: Vec<String>,
    report: Value,
    exit: i32,
    elapsed: Duration,
}

static RUNS: Mutex<Vec<Run>> = Mutex::new(Vec::new());

/// Runs the binary in the data directory and records the run.
fn exphull(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_exphull"))
        .args(args)
        .current_dir(data(""))
        .env_remove("EXPHULL_BUDGET")
        .output()
        .expect("spawn exphull");
    let elapsed = start.elapsed();
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("report of {:?} is not JSON ({}): {}", args, e, String::from_utf8_lossy(&out.stdout)));
    let run = Run {
        args: args.iter().map(|s| s.to_string()).collect(),
        report,
        exit: out.status.code().unwrap_or(-1),
        elapsed,
    };
    RUNS.lock().unwrap().push(run.clone());
    run
}

fn without_timing(v: &Value) -> String {
    let mut v = v.clone();
    v.as_object_mut().expect("report object").remove("timing_ms");
    serde_json::to_string(&v).expect("json")
}

type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn expect_exit(run: &Run, code: i32) -> Check {
    ensure(run.exit == code, || format!("{:?}: exit {} (expected {}): {}", run.args, run.exit, code, run.report))
}

fn expect_field(run: &Run, key: &str, value: Value) -> Check {
    ensure(run.report.get(key) == Some(&value), || {
        format!("{:?}: {} = {:?} (expected {})", run.args, key, run.report.get(key), value)
    })
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Check {
    ensure(elapsed.as_secs_f64() < limit, || format!("{} took {:.2}s (limit {}s)", what, elapsed.as_secs_f64(), limit))
}

fn strs(v: &[&str]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

fn criterion_1() -> Check {
    let d = exphull(&["delta", "--config", "loglog2.cfg", "--sub", "full", "--over", "kernel"]);
    expect_exit(&d, 0)?;
    expect_field(&d, "value", 0.into())?;
    let h = exphull(&["hull", "--config", "loglog2.cfg", "--candidate", "full", "--height", "3"]);
    expect_exit(&h, 0)?;
    expect_field(&h, "verdict", "Holds".into())?;
    expect_field(&h, "bound", 3.into())?;
    within(d.elapsed + h.elapsed, 5.0, "loglog2")
}

fn criterion_2() -> Check {
    let full = exphull(&["delta", "--config", "expA2.cfg", "--sub", "full", "--over", "kernel"]);
    expect_field(&full, "value", 0.into())?;
    let b = exphull(&["delta", "--config", "expA2.cfg", "--sub", "span(b)", "--over", "kernel"]);
    expect_field(&b, "value", 1.into())?;
    let s = exphull(&["strong", "--config", "expA2.cfg", "--sub", "span(b)+kernel", "--height", "2"]);
    expect_exit(&s, 1)?;
    expect_field(&s, "verdict", "Fails".into())?;
    let w = &s.report["witness"];
    ensure(w["kind"] == "subspace" && w["delta"] == -1, || format!("witness {}", w))?;
    let h = exphull(&["hull", "--config", "expA2.cfg", "--candidate", "full", "--height", "3"]);
    expect_exit(&h, 0)?;
    expect_field(&h, "verdict", "Holds".into())?;
    within(full.elapsed + b.elapsed + s.elapsed + h.elapsed, 30.0, "expA2")
}

fn criterion_3() -> Check {
    let line = exphull(&["rotund", "--variety", "line.var", "--height", "1"]);
    expect_exit(&line, 1)?;
    let rows = report::rows_witness_from_json(&line.report["witness"]).ok_or("line: malformed witness")?;
    ensure(rows == vec![vec![1, -1]], || format!("line witness {:?}", rows))?;
    let runs = [
        (exphull(&["rotund", "--variety", "point2.var", "--height", "3"]), 0),
        (exphull(&["free", "--variety", "point2.var", "--height", "3"]), 1),
        (exphull(&["rotund", "--variety", "zero2.var", "--height", "3"]), 0),
        (exphull(&["free", "--variety", "zero2.var", "--height", "3"]), 0),
    ];
    within(line.elapsed, 5.0, "rotund line.var")?;
    for (r, code) in &runs {
        expect_exit(r, *code)?;
        within(r.elapsed, 5.0, &r.args.join(" "))?;
    }
    Ok(())
}

/// `q(X + t) - q(X)` for `q` in `X1` with `t = period * beta`, as
/// coefficients of `X^i beta^j`, expanded by the binomial theorem.
fn shifted_difference(q: &[(u32, Rational)], period: i64) -> Vec<Vec<Rational>> {
    let deg = q.iter().map(|(d, _)| *d).max().unwrap_or(0) as usize;
    let mut out = vec![vec![rat_int(0); deg + 1]; deg + 1];
    for (d, c) in q {
        let d = *d as usize;
        let mut binom = rat_int(1);
        for j in 0..=d {
            // C(d, j) X^{d-j} t^j with t = period * beta
            if j > 0 {
                out[d - j][j] += c * &binom * rat_int(period.pow(j as u32));
            }
            binom = binom * rat_int((d - j) as i64) / rat_int(j as i64 + 1);
        }
    }
    out
}

fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(rat_int(0), |acc, c| acc * x + c)
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Rational `beta` with `q(X + period*beta) = q(X)` identically, by the
/// rational root theorem on each coefficient polynomial in `beta`.
fn admissible_betas(q: &[(u32, Rational)], period: i64) -> BTreeSet<Rational> {
    let diff = shifted_difference(q, period);
    let polys: Vec<&Vec<Rational>> = diff.iter().filter(|p| p.iter().any(|c| *c != rat_int(0))).collect();
    let mut cands: BTreeSet<Rational> = BTreeSet::new();
    cands.insert(rat_int(0));
    if let Some(p) = polys.first() {
        let ints: Vec<i64> = p.iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let low = ints.iter().copied().find(|&c| c != 0).unwrap();
        let high = ints.iter().copied().rev().find(|&c| c != 0).unwrap();
        for a in divisors(low) {
            for b in divisors(high) {
                cands.insert(Rational::new(a.into(), b.into()));
                cands.insert(Rational::new((-a).into(), b.into()));
            }
        }
    }
    cands.into_iter().filter(|x| polys.iter().all(|p| eval(p, x) == rat_int(0))).collect()
}

fn criterion_4() -> Check {
    let r = exphull(&["case2", "--eq", "swap.eq"]);
    expect_exit(&r, 0)?;
    expect_field(&r, "h", 2.into())?;
    expect_field(&r, "u", strs(&["-1"]))?;
    expect_field(&r, "v", strs(&["0"]))?;
    expect_field(&r, "beta", strs(&["0"]))?;
    let swap: Value = serde_json::json!([[[0], [1]], [[1], [0]]]);
    expect_field(&r, "mu", swap)?;
    let eq = input::load_equation(&data("swap.eq")).map_err(|e| e.to_string())?;
    let chosen: Vec<i64> = serde_json::from_value(r.report["chosen"].clone()).map_err(|e| e.to_string())?;
    let q: Vec<(u32, Rational)> =
        eq.p.terms().filter(|(e, _)| e[1..] == chosen[..]).map(|(e, c)| (e[0] as u32, c.clone())).collect();
    let period = r.report["period"].as_i64().ok_or("no period")?;
    let oracle: Vec<Value> = admissible_betas(&q, period).iter().map(report::rational).collect();
    expect_field(&r, "beta", Value::Array(oracle))?;
    let none = exphull(&["case2", "--eq", "double.eq"]);
    expect_exit(&none, 1)?;
    expect_field(&none, "mu", Value::Null)?;
    within(r.elapsed + none.elapsed, 1.0, "case2")
}

fn criterion_5() -> Check {
    let ok = exphull(&["case2", "--pairs", "2,4;3,6"]);
    expect_exit(&ok, 0)?;
    let t = &ok.report["translation"];
    ensure(t["generator"] == serde_json::json!([1, 2]) && t["exponents"] == serde_json::json!([2, 3]), || {
        format!("translation {}", t)
    })?;
    let bad = exphull(&["case2", "--pairs", "2,4;3,5"]);
    expect_exit(&bad, 3)?;
    ensure(bad.report["error"]["kind"] == "non_colinear", || format!("error {}", bad.report["error"]))
}

fn criterion_6() -> Check {
    let find = exphull(&["ml-find", "--ml", "unit.ml", "--word", "10"]);
    expect_exit(&find, 0)?;
    let cosets = find.report["decomposition"]["cosets"].as_array().ok_or("no cosets")?;
    ensure(cosets.len() == 1, || format!("{} cosets", cosets.len()))?;
    ensure(
        cosets[0]["translate"] == strs(&["1/2", "1/2"]) && cosets[0]["dimension"] == 0,
        || format!("coset {}", cosets[0]),
    )?;
    let saved = Path::new(env!("CARGO_TARGET_TMPDIR")).join("unit_found.json");
    std::fs::write(&saved, serde_json::to_string(&find.report).unwrap()).map_err(|e| e.to_string())?;
    let saved = saved.display().to_string();
    let holds = exphull(&["ml-verify", "--ml", "unit.ml", "--decomposition", &saved, "--word", "10"]);
    expect_exit(&holds, 0)?;
    let fails = exphull(&["ml-verify", "--ml", "unit.ml", "--decomposition", "unit_empty.json", "--word", "10"]);
    expect_exit(&fails, 1)?;
    ensure(fails.report["witness"]["point"] == strs(&["1/2", "1/2"]), || format!("witness {}", fails.report["witness"]))?;
    within(find.elapsed + holds.elapsed + fails.elapsed, 5.0, "unit equation")
}

fn run_property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    let mut runner = TestRunner::new(Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{}: {}", name, e))
}

fn row(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, n)
}

fn zmatrix(r: usize, c: usize) -> impl Strategy<Value = ZMatrix> {
    prop::collection::vec(row(c), r).prop_map(move |rows| ZMatrix::from_rows(c, rows))
}

fn variety() -> impl Strategy<Value = AVariety> {
    let templates = ["x1 - x2", "x1 + 2*x2 - 1", "y1 - 2", "y1 - y2", "y1^2 - 3*y2", "x1 - y1", "y1*y2 - 5", "x1^2 - x2"];
    prop::sample::subsequence(templates.to_vec(), 0..=2).prop_map(|gens| {
        let names = pair_names(2);
        AVariety::new(2, gens.iter().map(|g| parse_poly(g, &names).unwrap()).collect()).unwrap()
    })
}

/// Largest set of coordinates on which every monomial vanishes nowhere
/// except through the others.
fn brute_monomial_dimension(n: usize, gens: &[Vec<u8>]) -> Dimension {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Dimension::Empty;
    }
    let best = (0..1u32 << n)
        .filter(|t| gens.iter().all(|g| (0..n).any(|i| g[i] > 0 && t & (1 << i) == 0)))
        .map(|t| t.count_ones() as usize)
        .max()
        .unwrap();
    Dimension::Finite(best)
}

fn all_permutations(items: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in all_permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

fn qmatrix(k: usize) -> impl Strategy<Value = QMatrix> {
    let diag = prop::sample::select(vec![1i64, -1, 2]).prop_map(move |d| {
        QMatrix::from_rows(k, (0..k).map(|i| (0..k).map(|j| rat_int(if i == j { d } else { 0 })).collect()).collect())
    });
    let random = prop::collection::vec(row(k), k).prop_map(move |rows| QMatrix::from_rows(k, to_rational_rows(&rows)));
    prop_oneof![diag, random]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn criterion_7() -> Check {
    let c = input::load_config(&data("expA2.cfg")).map_err(|e| e.to_string())?;
    run_property("delta additivity", (row(5), row(5), row(5)), |(r1, r2, r3)| {
        let lower = c.kernel().join(&SubspaceSpec::from_int_rows(5, &[r1]));
        let middle = lower.join(&SubspaceSpec::from_int_rows(5, &[r2]));
        let upper = middle.join(&SubspaceSpec::from_int_rows(5, &[r3]));
        let whole = c.delta(&upper, &lower).unwrap();
        let split = c.delta(&upper, &middle).unwrap() + c.delta(&middle, &lower).unwrap();
        prop_assert_eq!(whole, split);
        Ok(())
    })?;
    run_property("matrix action functoriality", (variety(), zmatrix(2, 2), zmatrix(2, 2)), |(v, m1, m2)| {
        let direct = v.matrix_act(&m1.mul(&m2)).unwrap();
        let staged = v.matrix_act(&m2).unwrap().matrix_act(&m1).unwrap();
        prop_assert!(direct.ideal().same_as(staged.ideal()).unwrap());
        Ok(())
    })?;
    run_property("row-space invariance", (variety(), zmatrix(2, 2), 1i64..=3, -2i64..=2), |(v, m, a, b)| {
        let rows = m.rows().to_vec();
        let mixed = vec![rows[0].iter().zip(&rows[1]).map(|(x, y)| a * x + b * y).collect::<Vec<_>>(), rows[1].clone()];
        let mixed_m = ZMatrix::from_rows(2, mixed.clone());
        prop_assert_eq!(v.image_dimension(&rows).unwrap(), v.image_dimension(&mixed).unwrap());
        if a == 1 {
            // unimodular change of rows: the images have the same dimension
            prop_assert_eq!(v.matrix_act(&m).unwrap().dimension().unwrap(), v.matrix_act(&mixed_m).unwrap().dimension().unwrap());
        }
        Ok(())
    })?;
    let gens = (1usize..=4, prop::collection::vec(prop::collection::vec(0u8..=2, 4), 0..=4));
    run_property("monomial dimension", gens, |(n, gens)| {
        let gens: Vec<Vec<u8>> = gens.into_iter().map(|g| g[..n].to_vec()).collect();
        let names: Vec<String> = (0..n).map(|i| format!("z{}", i)).collect();
        let polys: Vec<Poly> =
            gens.iter().map(|g| LaurentPoly::monomial(g.iter().map(|&e| e as i64).collect(), rat_int(1))).collect();
        let ideal = Ideal::polynomial(names, polys).unwrap();
        prop_assert_eq!(ideal.dimension().unwrap(), brute_monomial_dimension(n, &gens));
        Ok(())
    })?;
    let supports = (1usize..=2).prop_flat_map(|k| {
        (Just(k), prop::collection::btree_set(row(k), 1..=5), qmatrix(k))
            .prop_map(|(k, s, n)| (k, s.into_iter().collect::<Vec<_>>(), n))
    });
    run_property("centroid completeness", supports, |(k, s, n)| {
        let p = LaurentPoly::from_terms(
            k + 1,
            s.iter().map(|v| {
                let mut e = vec![1];
                e.extend(v);
                (e, rat_int(1))
            }),
        );
        let sd = support(&p).unwrap();
        let found = solve_permutation(&sd, &n).unwrap();
        let q = |v: &Vec<i64>| to_rational_rows(std::slice::from_ref(v)).remove(0);
        let mut brute: BTreeSet<Vec<Rational>> = BTreeSet::new();
        for perm in all_permutations(&s) {
            let u: Vec<Rational> = n.mul_vec(&q(&s[0])).iter().zip(q(&perm[0])).map(|(a, b)| a - b).collect();
            let fits = s.iter().zip(&perm).all(|(v, w)| {
                let rhs: Vec<Rational> = q(w).iter().zip(&u).map(|(a, b)| a + b).collect();
                n.mul_vec(&q(v)) == rhs
            });
            if fits {
                brute.insert(u);
            }
        }
        match found {
            Some(sol) => {
                prop_assert!(check_permutation(&sd, &n, &sol));
                prop_assert_eq!(brute.into_iter().collect::<Vec<_>>(), vec![sol.u]);
            }
            None => prop_assert!(brute.is_empty()),
        }
        Ok(())
    })?;
    run_property("gcd universal property", ((-3i64..=3, -3i64..=3), prop::collection::vec(-4i64..=4, 1..=4)), |(dir, ks)| {
        let pairs: Vec<(i64, i64)> = ks.iter().map(|k| (k * dir.0, k * dir.1)).collect();
        let t = translation_generator(&pairs).unwrap();
        for (p, r) in pairs.iter().zip(&t.exponents) {
            prop_assert_eq!(*p, (r * t.d.0, r * t.d.1));
        }
        for e in 1i64..=24 {
            if pairs.iter().all(|p| p.0 % e == 0) {
                prop_assert_eq!(t.d.0 % e, 0);
            }
            if pairs.iter().all(|p| p.1 % e == 0) {
                prop_assert_eq!(t.d.1 % e, 0);
            }
        }
        prop_assert_eq!(t.d.0, pairs.iter().fold(0, |a, p| gcd(a, p.0)));
        prop_assert_eq!(t.d.1.abs(), pairs.iter().fold(0, |a, p| gcd(a, p.1)));
        Ok(())
    })?;
    let commands: [&[&str]; 6] = [
        &["hull", "--config", "expA2.cfg", "--candidate", "full"],
        &["strong", "--config", "expA2.cfg", "--sub", "span(b)+kernel", "--height", "2"],
        &["schanuel", "--config", "loglog2.cfg"],
        &["rotund", "--variety", "line.var"],
        &["ml-find", "--ml", "unit.ml", "--word", "10"],
        &["case2", "--eq", "swap.eq"],
    ];
    for cmd in commands {
        let mut seen: Vec<String> = Vec::new();
        for threads in ["1", "4"] {
            for _ in 0..2 {
                let mut args = cmd.to_vec();
                args.extend(["--threads", threads]);
                let r = exphull(&args);
                let mut v = r.report.clone();
                v.as_object_mut().unwrap().remove("inputs");
                seen.push(without_timing(&v));
            }
        }
        ensure(seen.iter().all(|s| *s == seen[0]), || format!("{:?}: reports differ across runs or thread counts", cmd))?;
    }
    Ok(())
}

/// Re-checks the witness of a failing report through the library.
fn recheck(run: &Run) -> Result<bool, String> {
    let arg = |flag: &str| -> Option<String> {
        run.args.iter().position(|a| a == flag).and_then(|i| run.args.get(i + 1)).cloned()
    };
    let height = arg("--height").map_or(3, |h| h.parse().unwrap());
    let word = arg("--word").map_or(8, |h| h.parse().unwrap());
    let depth = arg("--depth").map_or(2, |h| h.parse().unwrap());
    let w = &run.report["witness"];
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let config = || input::load_config(&data(&arg("--config").unwrap())).map_err(|e| err(&e));
    let gw = || report::gamma_witness_from_json(w).ok_or_else(|| format!("malformed witness {}", w));
    match run.args[0].as_str() {
        "schanuel" => {
            let c = config()?;
            c.recheck_strong_witness(&c.kernel(), &gw()?).map_err(|e| err(&e))
        }
        "strong" => {
            let c = config()?;
            let sub = c.subspace(&arg("--sub").unwrap()).map_err(|e| err(&e))?;
            c.recheck_strong_witness(&sub, &gw()?).map_err(|e| err(&e))
        }
        "hull" => {
            let c = config()?;
            let cand = c.subspace(&arg("--candidate").unwrap()).map_err(|e| err(&e))?;
            let base = c.subspace(&arg("--base").unwrap_or_else(|| "base".into())).map_err(|e| err(&e))?;
            c.recheck_hull_witness(&base, &cand, height, &gw()?).map_err(|e| err(&e))
        }
        "witness" => {
            let c = config()?;
            let seq: Vec<String> = arg("--sequence").unwrap().split(',').map(|s| s.trim().to_string()).collect();
            let flags = arg("--flags").unwrap().split(',').map(|s| s.parse().unwrap()).collect::<Vec<_>>();
            c.recheck_step_witness(&seq, &flags, &gw()?).map_err(|e| err(&e))
        }
        "rotund" => {
            let v = input::load_variety(&data(&arg("--variety").unwrap())).map_err(|e| err(&e))?;
            let rows = report::rows_witness_from_json(w).ok_or("malformed witness")?;
            v.recheck_rotund_witness(&rows).map_err(|e| err(&e))
        }
        "free" => {
            let v = input::load_variety(&data(&arg("--variety").unwrap())).map_err(|e| err(&e))?;
            let fw = report::free_witness_from_json(w).ok_or("malformed witness")?;
            v.recheck_free_witness(&fw).map_err(|e| err(&e))
        }
        "ml-verify" => {
            let t = input::load_torus(&data(&arg("--ml").unwrap())).map_err(|e| err(&e))?;
            let Some(GroupSpec::Radical(gens)) = &t.group else { return Err("expected a rational group".into()) };
            let g = FiniteRankGroup::new(RadicalField, t.n, gens.clone(), depth).map_err(|e| err(&e))?;
            let dec_path = arg("--decomposition").unwrap();
            let text = std::fs::read_to_string(data(&dec_path)).map_err(|e| err(&e))?;
            let json: Value = serde_json::from_str(&text).map_err(|e| err(&e))?;
            let dec = report::decomposition_from_json(&g, &json).map_err(|e| err(&e))?;
            let el = report::element_from_json(&g, w).map_err(|e| err(&e))?;
            let _ = word;
            recheck_element_witness(&t.ideal, &g, &dec, &el).map_err(|e| err(&e))
        }
        other => Err(format!("no recheck for '{}'", other)),
    }
}

fn criterion_8() -> Check {
    // runs whose only purpose is to produce failing verdicts of every kind
    exphull(&["schanuel", "--config", "schanuel_fail.cfg", "--height", "2"]);
    exphull(&["strong", "--config", "kernel_elem.cfg", "--sub", "kernel"]);
    exphull(&["hull", "--config", "generic.cfg", "--candidate", "full", "--base", "kernel"]);
    exphull(&["witness", "--config", "generic.cfg", "--sequence", "a", "--flags", "y"]);
    exphull(&["free", "--variety", "point2.var"]);
    exphull(&["free", "--variety", "line.var", "--height", "2"]);
    let runs = RUNS.lock().unwrap().clone();
    let fails: Vec<&Run> = runs.iter().filter(|r| r.report["verdict"] == "Fails").collect();
    ensure(fails.len() >= 8, || format!("only {} failing verdicts collected", fails.len()))?;
    let mut bad = Vec::new();
    for r in &fails {
        match recheck(r) {
            Ok(true) if r.report["witness_rechecked"] == true => {}
            Ok(ok) => bad.push(format!("{:?}: library {} / report {}", r.args, ok, r.report["witness_rechecked"])),
            Err(e) => bad.push(format!("{:?}: {}", r.args, e)),
        }
    }
    ensure(bad.is_empty(), || format!("{} of {} witnesses did not re-verify: {}", bad.len(), fails.len(), bad.join("; ")))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("loglog2 golden: delta 0, hull holds at height 3, < 5 s", criterion_1),
        ("exp(a^2) golden: deltas 0 and 1, strong fails with delta -1, hull holds, < 30 s", criterion_2),
        ("rotundity and freeness suite, < 5 s each", criterion_3),
        ("functional-equation engine against the brute-force expansion oracle, < 1 s", criterion_4),
        ("translation generator from colinear pairs", criterion_5),
        ("unit equation decomposition find and verify, < 5 s", criterion_6),
        ("property suites at 200 cases and report determinism", criterion_7),
        ("every failing verdict re-verifies its witness", criterion_8),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let line = match &result {
            Ok(()) => format!("criterion {}: PASS  {}\n", i + 1, name),
            Err(e) => format!("criterion {}: FAIL  {}: {}\n", i + 1, name, e),
        };
        out.write_all(line.as_bytes()).unwrap();
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}

#[test]
fn rational_parsing_round_trips() {
    for s in ["1/2", "-3", "0"] {
        assert_eq!(report::rational(&parse_rational(s).unwrap()), Value::String(s.to_string()));
    }
}
