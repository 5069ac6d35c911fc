//! Acceptance suite. Runs without the default test harness so that each
//! criterion prints exactly one PASS or FAIL line.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use nfold_cli::format::{self, Document, SolutionDoc};
use nfold_cli::run;
use nfold_core::oracle::{
    brute_force_optimize, enumerate_bricks, reachable_sums, OracleLimits, OracleResult,
};
use nfold_core::{
    build_bipartite_incidence, decompose_symmetric, huge_feasible, huge_optimize, ilp_solve,
    is_vertex, lp_solve, solve_huge_table, symmetric_feasible, verify_compact, verify_table,
    BigRational, BrickType, ExactLp, ExtInt, HugeInstance, HugeResult, IlpResult, IntMatrix,
    LpResult, SymmetricAggregate, TableResult, TableSolution, TableSpec, TableType,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| big(x)).collect()
}

fn exts(v: &[i64]) -> Vec<ExtInt> {
    v.iter().map(|&x| ExtInt::from(x)).collect()
}

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every box `[lo, hi]` with `0 <= lo <= hi <= 3` per coordinate.
fn all_boxes(d: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    let pairs: Vec<(i64, i64)> = (0..=3).flat_map(|l| (l..=3).map(move |u| (l, u))).collect();
    let mut out = vec![(Vec::new(), Vec::new())];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|(lo, hi)| {
                pairs.iter().map(move |&(l, u)| {
                    let mut lo = lo.clone();
                    let mut hi = hi.clone();
                    lo.push(l);
                    hi.push(u);
                    (lo, hi)
                })
            })
            .collect();
    }
    out
}

/// Integer points of a box, for small boxes only.
fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (&l, &u) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (l..=u).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut cases = 0usize;
    let mut feasible = 0usize;
    let k22 = build_bipartite_incidence(2, 2);
    // [[1,1]] over every box in [0,3]^2; K_{2,2} over every upper box with zero lower bound.
    let k22_boxes: Vec<(Vec<i64>, Vec<i64>)> = box_points(&[0; 4], &[3; 4])
        .into_iter()
        .map(|hi| (vec![0; 4], hi))
        .collect();
    let systems = [(mat(&[&[1, 1]]), all_boxes(2)), (k22, k22_boxes)];
    for (a, boxes) in &systems {
        for (lo, hi) in boxes {
            let rhs_set: BTreeSet<Vec<BigInt>> = box_points(lo, hi)
                .iter()
                .map(|z| a.mul_vec(&bigs(z)))
                .collect();
            for b in rhs_set {
                let bricks = enumerate_bricks(a, &b, &exts(lo), &exts(hi), 100_000)
                    .map_err(|e| e.to_string())?;
                for n in 1..=5i64 {
                    let reach = reachable_sums(&bricks, n as usize, a.cols());
                    let nb: Vec<BigInt> = b.iter().map(|x| x * n).collect();
                    // one unit of slack on each side so that infeasible aggregates appear too
                    let wide_lo: Vec<i64> = lo.iter().map(|x| x * n - 1).collect();
                    let wide_hi: Vec<i64> = hi.iter().map(|x| x * n + 1).collect();
                    let aggregates =
                        enumerate_bricks(a, &nb, &exts(&wide_lo), &exts(&wide_hi), 100_000)
                            .map_err(|e| e.to_string())?;
                    for agg in aggregates {
                        let sym = SymmetricAggregate {
                            matrix: a.clone(),
                            aggregate: agg.clone(),
                            count: big(n),
                            rhs: b.clone(),
                            lower: exts(lo),
                            upper: exts(hi),
                        };
                        let got = symmetric_feasible(&sym);
                        let want = reach.contains(&agg);
                        ensure(got == want, || {
                            format!("mismatch at box {lo:?}..{hi:?}, b={b:?}, n={n}, a={agg:?}: test {got}, oracle {want}")
                        })?;
                        cases += 1;
                        feasible += usize::from(want);
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(cases >= 500, || format!("only {cases} cases"))?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "{cases} cases ({feasible} feasible) agree with the oracle in {elapsed:.1?}"
    ))
}

/// Spreads `n` over the given bricks with random nonnegative shares.
fn random_aggregate(
    rng: &mut ChaCha8Rng,
    bricks: &[&Vec<BigInt>],
    n: &BigInt,
    d: usize,
) -> Vec<BigInt> {
    let mut rest = n.clone();
    let mut sum = vec![BigInt::zero(); d];
    for (i, z) in bricks.iter().enumerate() {
        let share = if i + 1 == bricks.len() {
            rest.clone()
        } else {
            &rest * big(rng.gen_range(0..=1_000_000)) / big(1_000_000)
        };
        rest -= &share;
        for (s, x) in sum.iter_mut().zip(z.iter()) {
            *s += &share * x;
        }
    }
    sum
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let shapes = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3)];
    let mut slowest = Duration::ZERO;
    let mut max_support = 0;
    let cases = 200;
    for case in 0..cases {
        let (l, m) = shapes[case % shapes.len()];
        let a = build_bipartite_incidence(l, m);
        let d = a.cols();
        let hi: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
        let lo = vec![0i64; d];
        let z0: Vec<i64> = hi.iter().map(|&u| rng.gen_range(0..=u)).collect();
        let b = a.mul_vec(&bigs(&z0));
        let bricks = enumerate_bricks(&a, &b, &exts(&lo), &exts(&hi), 1_000_000)
            .map_err(|e| e.to_string())?;
        let chosen: Vec<&Vec<BigInt>> = bricks
            .choose_multiple(&mut rng, 4.min(bricks.len()))
            .collect();
        let n = if case % 4 == 0 {
            BigInt::from(10u64.pow(12))
        } else {
            BigInt::from(rng.gen_range(1..=10u64.pow(12)))
        };
        let aggregate = random_aggregate(&mut rng, &chosen, &n, d);
        let sym = SymmetricAggregate {
            matrix: a.clone(),
            aggregate: aggregate.clone(),
            count: n.clone(),
            rhs: b.clone(),
            lower: exts(&lo),
            upper: exts(&hi),
        };
        let start = Instant::now();
        let pres = decompose_symmetric(&sym).map_err(|e| format!("case {case}: {e}"))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(1), || {
            format!("case {case} took {elapsed:.2?}")
        })?;
        let mut sum = vec![BigInt::zero(); d];
        let mut total = BigInt::zero();
        for bc in &pres.bricks {
            ensure(bc.multiplicity > BigInt::zero(), || {
                format!("case {case}: nonpositive multiplicity")
            })?;
            ensure(a.mul_vec(&bc.brick) == b, || {
                format!("case {case}: brick {:?} misses A z = b", bc.brick)
            })?;
            let inside = bc
                .brick
                .iter()
                .zip(lo.iter().zip(&hi))
                .all(|(z, (&l, &u))| *z >= big(l) && *z <= big(u));
            ensure(inside, || {
                format!("case {case}: brick {:?} out of bounds", bc.brick)
            })?;
            for (s, z) in sum.iter_mut().zip(&bc.brick) {
                *s += &bc.multiplicity * z;
            }
            total += &bc.multiplicity;
        }
        ensure(sum == aggregate, || {
            format!("case {case}: weighted sum differs from a")
        })?;
        ensure(total == n, || {
            format!("case {case}: multiplicities sum to {total}, not {n}")
        })?;
        ensure(pres.bricks.len() <= 2 * d + 2, || {
            format!(
                "case {case}: support {} exceeds {}",
                pres.bricks.len(),
                2 * d + 2
            )
        })?;
        max_support = max_support.max(pres.bricks.len());
    }
    Ok(format!(
        "{cases} aggregates decomposed exactly; max support {max_support}; slowest {slowest:.2?}"
    ))
}

/// A random instance with `t <= 2`, `n_k <= 3`, `d <= 3` and `|S^k| <= 20`.
fn tiny_instance(rng: &mut ChaCha8Rng) -> HugeInstance {
    let catalog = [
        mat(&[&[1, 1]]),
        mat(&[&[1, 1, 1]]),
        mat(&[&[1, 1, 0], &[0, 1, 1]]),
        mat(&[&[1, -1, 0], &[0, 1, -1]]),
        build_bipartite_incidence(1, 2),
        build_bipartite_incidence(1, 3),
    ];
    let a = catalog.choose(rng).unwrap().clone();
    let d = a.cols();
    let t = rng.gen_range(1..=2);
    let mut types = Vec::new();
    let mut b0 = vec![BigInt::zero(); d];
    while types.len() < t {
        let lo: Vec<i64> = (0..d).map(|_| rng.gen_range(-1..=1)).collect();
        let hi: Vec<i64> = lo.iter().map(|&l| l + rng.gen_range(0..=2)).collect();
        let z0: Vec<i64> = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &u)| rng.gen_range(l..=u))
            .collect();
        let rhs = a.mul_vec(&bigs(&z0));
        let bricks = enumerate_bricks(&a, &rhs, &exts(&lo), &exts(&hi), 1000).unwrap();
        if bricks.len() > 20 {
            continue;
        }
        let count = rng.gen_range(1..=3i64);
        for _ in 0..count {
            let z = bricks.choose(rng).unwrap();
            for (s, x) in b0.iter_mut().zip(z) {
                *s += x;
            }
        }
        types.push(BrickType {
            cost: (0..d).map(|_| big(rng.gen_range(-3..=3))).collect(),
            lower: exts(&lo),
            upper: exts(&hi),
            rhs,
            count: big(count),
        });
    }
    // Perturb the hidden solution's top sum in a share of the cases.
    if rng.gen_bool(0.4) {
        let j = rng.gen_range(0..d);
        b0[j] += big(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    HugeInstance {
        matrix: a,
        b0,
        types,
    }
}

fn tiny_grid() -> Vec<HugeInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..400).map(|_| tiny_instance(&mut rng)).collect()
}

fn criterion_3() -> Check {
    let limits = OracleLimits::default();
    let mut feasible = 0;
    let grid = tiny_grid();
    for (i, inst) in grid.iter().enumerate() {
        let got = huge_feasible(inst).map_err(|e| format!("case {i}: {e}"))?;
        let want =
            match brute_force_optimize(inst, &limits).map_err(|e| format!("case {i}: {e}"))? {
                OracleResult::Infeasible => false,
                OracleResult::Optimal { .. } => true,
            };
        ensure(got == want, || {
            format!("case {i}: huge_feasible {got}, oracle {want}: {inst:?}")
        })?;
        feasible += usize::from(want);
    }
    ensure(grid.len() >= 300, || "too few cases".into())?;
    Ok(format!(
        "{} instances agree ({feasible} feasible)",
        grid.len()
    ))
}

fn criterion_4() -> Check {
    let limits = OracleLimits::default();
    let mut optimal = 0;
    let grid = tiny_grid();
    for (i, inst) in grid.iter().enumerate() {
        let got = huge_optimize(inst).map_err(|e| format!("case {i}: {e}"))?;
        let want = brute_force_optimize(inst, &limits).map_err(|e| format!("case {i}: {e}"))?;
        match (got, want) {
            (HugeResult::Infeasible, OracleResult::Infeasible) => {}
            (HugeResult::Optimal(sol), OracleResult::Optimal { objective, .. }) => {
                ensure(sol.objective == objective, || {
                    format!(
                        "case {i}: objective {} vs oracle {objective}",
                        sol.objective
                    )
                })?;
                let violations = verify_compact(inst, &sol.presentation);
                ensure(violations.is_empty(), || {
                    format!("case {i}: {violations:?}")
                })?;
                optimal += 1;
            }
            (got, want) => return Err(format!("case {i}: solver {got:?} vs oracle {want:?}")),
        }
    }
    Ok(format!(
        "{} instances: objectives match ({optimal} optimal), all presentations verify",
        grid.len()
    ))
}

const F2: &str = r#"{"kind":"huge_nfold","A":[[1,1]],"b0":["2000000","1000000"],"types":[
  {"w":[1,0],"l":[0,0],"u":[2,2],"b":[2],"count":"1000000"},
  {"w":[0,1],"l":[0,0],"u":[1,1],"b":[1],"count":"1000000"}]}"#;

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().expect("temporary directory"),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).expect("write fixture");
        path
    }
}

fn cli(args: &[&str]) -> nfold_cli::Outcome {
    let mut all = vec!["nfold"];
    all.extend_from_slice(args);
    run(all)
}

fn p(path: &Path) -> &str {
    path.to_str().expect("UTF-8 temp path")
}

fn criterion_5() -> Check {
    let ws = Workspace::new();
    let f2 = ws.file("f2.json", F2);
    let start = Instant::now();
    let out = cli(&["solve", p(&f2)]);
    let elapsed = start.elapsed();
    ensure(out.code == 0, || {
        format!("exit {}: {}", out.code, out.stderr)
    })?;
    let doc: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    ensure(doc["status"] == "optimal", || {
        format!("status {}", doc["status"])
    })?;
    ensure(doc["objective"] == "1000000", || {
        format!("objective {}", doc["objective"])
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:.2?}")
    })?;
    Ok(format!("objective \"1000000\" in {elapsed:.2?}"))
}

fn table_fixture(count: i64, g: i64) -> TableSpec {
    TableSpec {
        rows: 2,
        cols: 2,
        line_sums: vec![bigs(&[g, g]), bigs(&[g, g])],
        types: vec![TableType {
            cost: vec![bigs(&[0, 0]), bigs(&[0, 0])],
            col_sums: bigs(&[1, 1]),
            row_sums: bigs(&[1, 1]),
            count: big(count),
        }],
    }
}

/// Independent check: lay the layers out one by one and recompute all line sums.
fn explicit_table_ok(spec: &TableSpec, sol: &TableSolution) -> bool {
    let mut vertical = vec![vec![BigInt::zero(); spec.cols]; spec.rows];
    let mut layers = 0u64;
    for (k, per_type) in sol.layers.iter().enumerate() {
        let ty = &spec.types[k];
        for (layer, mult) in per_type {
            let copies: u64 = mult.try_into().unwrap();
            for _ in 0..copies {
                layers += 1;
                for i in 0..spec.rows {
                    let row: BigInt = layer[i].iter().sum();
                    if row != ty.row_sums[i] {
                        return false;
                    }
                    for j in 0..spec.cols {
                        vertical[i][j] += &layer[i][j];
                    }
                }
                for j in 0..spec.cols {
                    let col: BigInt = layer.iter().map(|r| &r[j]).sum();
                    if col != ty.col_sums[j] {
                        return false;
                    }
                }
            }
        }
    }
    let n: BigInt = spec.types.iter().map(|t| &t.count).sum();
    BigInt::from(layers) == n && vertical == spec.line_sums
}

fn criterion_6() -> Check {
    let spec = table_fixture(1_000_000_000, 500_000_000);
    let start = Instant::now();
    let result = solve_huge_table(&spec).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let TableResult::Optimal(sol) = result else {
        return Err("fixture reported infeasible".into());
    };
    let identity = vec![bigs(&[1, 0]), bigs(&[0, 1])];
    let anti = vec![bigs(&[0, 1]), bigs(&[1, 0])];
    let half = big(500_000_000);
    let mut got = sol.layers[0].clone();
    got.sort();
    let mut want = vec![(identity, half.clone()), (anti, half)];
    want.sort();
    ensure(got == want, || format!("presentation {got:?}"))?;
    ensure(verify_table(&spec, &sol, 0).is_empty(), || {
        "compact verification failed".into()
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:.2?}")
    })?;

    let small = table_fixture(4, 2);
    let TableResult::Optimal(small_sol) = solve_huge_table(&small).map_err(|e| e.to_string())?
    else {
        return Err("n=4 instance reported infeasible".into());
    };
    let violations = verify_table(&small, &small_sol, 4);
    ensure(violations.is_empty(), || {
        format!("n=4 expanded check: {violations:?}")
    })?;
    ensure(explicit_table_ok(&small, &small_sol), || {
        "n=4 explicit array margins differ".into()
    })?;
    Ok(format!(
        "{{identity: 5e8, anti-diagonal: 5e8}} in {elapsed:.2?}; n=4 expanded check passes"
    ))
}

/// A random TU equality system from the catalog.
fn tu_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    match rng.gen_range(0..4) {
        0 => build_bipartite_incidence(rng.gen_range(1..=3), rng.gen_range(1..=3)),
        1 => {
            // interval matrix: each row is a run of consecutive ones
            let cols = rng.gen_range(2..=5);
            let rows: Vec<Vec<i64>> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let s = rng.gen_range(0..cols);
                    let e = rng.gen_range(s..cols);
                    (0..cols).map(|j| i64::from(s <= j && j <= e)).collect()
                })
                .collect();
            IntMatrix::from_rows(&rows).unwrap()
        }
        2 => {
            // identity stacked over its negation
            let k = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> = (0..2 * k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            if i % k == j {
                                if i < k {
                                    1
                                } else {
                                    -1
                                }
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            IntMatrix::from_rows(&rows).unwrap()
        }
        _ => {
            // [I | -I]
            let k = rng.gen_range(1..=3);
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|i| {
                    (0..2 * k)
                        .map(|j| {
                            if j == i {
                                1
                            } else if j == i + k {
                                -1
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            IntMatrix::from_rows(&rows).unwrap()
        }
    }
}

fn tu_lp(rng: &mut ChaCha8Rng) -> ExactLp {
    let a = tu_matrix(rng);
    let n = a.cols();
    let lo: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=0)).collect();
    let hi: Vec<i64> = lo.iter().map(|&l| l + rng.gen_range(0..=4)).collect();
    let x0: Vec<i64> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &u)| rng.gen_range(l..=u))
        .collect();
    let rhs = a.mul_vec(&bigs(&x0));
    let objective = (0..n)
        .map(|_| BigRational::from_integer(big(rng.gen_range(-5..=5))))
        .collect();
    ExactLp::new(a, rhs, exts(&lo), exts(&hi), objective).unwrap()
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let lp = tu_lp(&mut rng);
        let LpResult::Optimal(sol) = lp_solve(&lp) else {
            return Err(format!(
                "case {i}: no optimum for a feasible bounded program"
            ));
        };
        ensure(sol.point.iter().all(|v| v.is_integer()), || {
            format!("case {i}: fractional {:?}", sol.point)
        })?;
        ensure(lp.contains(&sol.point), || {
            format!("case {i}: point violates constraints")
        })?;
        ensure(is_vertex(&lp, &sol.point), || {
            format!("case {i}: point is not a vertex")
        })?;
    }
    Ok("1000 programs, all optima integral vertices".into())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let lp = tu_lp(&mut rng);
        let report = ilp_solve(&lp).map_err(|e| format!("case {i}: {e}"))?;
        ensure(matches!(report.result, IlpResult::Optimal { .. }), || {
            format!("case {i}: not optimal")
        })?;
        ensure(report.nodes == 0, || {
            format!("case {i}: {} branch nodes", report.nodes)
        })?;
    }
    Ok("100 fixtures solved at the root".into())
}

/// Single-field edits of a solution document.
fn tampers(doc: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let mut push = |name: String, f: &dyn Fn(&mut Value)| {
        let mut v = doc.clone();
        f(&mut v);
        out.push((name, v));
    };
    let bump = |s: &Value, by: i64| -> Value {
        let x: BigInt = s
            .as_str()
            .map(|t| t.parse().unwrap())
            .unwrap_or_else(|| s.to_string().parse().unwrap());
        Value::String((x + by).to_string())
    };
    push("objective+1".into(), &|v| {
        v["objective"] = bump(&v["objective"], 1)
    });
    push("objective-1".into(), &|v| {
        v["objective"] = bump(&v["objective"], -1)
    });
    push("status".into(), &|v| {
        v["status"] = Value::String("infeasible".into())
    });
    let types = doc["presentation"].as_array().unwrap().len();
    for k in 0..types {
        let bricks = doc["presentation"][k]["bricks"].as_array().unwrap().len();
        for j in 0..bricks {
            push(format!("type {k} brick {j} multiplicity+1"), &|v| {
                let m = &mut v["presentation"][k]["bricks"][j]["multiplicity"];
                *m = bump(m, 1);
            });
            push(format!("type {k} brick {j} multiplicity-1"), &|v| {
                let m = &mut v["presentation"][k]["bricks"][j]["multiplicity"];
                *m = bump(m, -1);
            });
            push(format!("type {k} brick {j} z[0]+1"), &|v| {
                let z = &mut v["presentation"][k]["bricks"][j]["z"][0];
                let x: i64 = z.as_i64().unwrap();
                *z = Value::from(x + 1);
            });
        }
    }
    if types >= 2 && doc["presentation"][0]["bricks"] != doc["presentation"][1]["bricks"] {
        push("swap type indices".into(), &|v| {
            v["presentation"][0]["type"] = Value::from(1);
            v["presentation"][1]["type"] = Value::from(0);
        });
    }
    out
}

fn criterion_9() -> Check {
    let ws = Workspace::new();
    let mut fixtures: Vec<(String, String)> = vec![
        ("f2".into(), F2.to_string()),
        (
            "f2-infeasible".into(),
            F2.replace("\"2000000\",\"1000000\"", "\"3000000\",\"1000000\""),
        ),
        (
            "table-1e9".into(),
            format::serialize_instance(&Document::Table(table_fixture(1_000_000_000, 500_000_000))),
        ),
        (
            "table-4".into(),
            format::serialize_instance(&Document::Table(table_fixture(4, 2))),
        ),
    ];
    for seed in 1..=3u64 {
        for kind in ["huge_nfold", "table3"] {
            let s = seed.to_string();
            let args = ["gen", "--kind", kind, "--seed", &s, "--count", "1000"];
            let first = cli(&args);
            let second = cli(&args);
            ensure(first.code == 0, || {
                format!("gen {kind} {seed}: {}", first.stderr)
            })?;
            ensure(first.stdout == second.stdout, || {
                format!("gen {kind} {seed} not deterministic")
            })?;
            fixtures.push((format!("gen-{kind}-{seed}"), first.stdout));
        }
    }
    let mut tamper_count = 0;
    let mut solved = 0;
    for (name, text) in &fixtures {
        let doc = format::parse_instance(text).map_err(|e| format!("{name}: {e}"))?;
        let again = format::parse_instance(&format::serialize_instance(&doc))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(again == doc, || {
            format!("{name}: instance round trip changed the document")
        })?;

        let inst = ws.file(&format!("{name}.json"), text);
        let first = cli(&["solve", p(&inst)]);
        let second = cli(&["solve", p(&inst)]);
        ensure(first == second, || format!("{name}: re-solve differs"))?;
        ensure(first.code == 0 || first.code == 1, || {
            format!("{name}: solve failed: {}", first.stderr)
        })?;
        let sol = format::parse_solution(&first.stdout).map_err(|e| format!("{name}: {e}"))?;
        ensure(format::serialize_solution(&sol) == first.stdout, || {
            format!("{name}: solution round trip")
        })?;
        let sol_path = ws.file(&format!("{name}.sol.json"), &first.stdout);
        let verdict = cli(&["verify", p(&inst), p(&sol_path)]);
        ensure(verdict.code == 0, || {
            format!("{name}: verify rejected solve output: {}", verdict.stdout)
        })?;
        if let SolutionDoc::Infeasible = sol {
            let fake = "{\"status\": \"optimal\", \"objective\": \"0\", \"presentation\": []}\n";
            let fake_path = ws.file(&format!("{name}.fake.json"), fake);
            let verdict = cli(&["verify", p(&inst), p(&fake_path)]);
            ensure(verdict.code != 0, || {
                format!("{name}: fake optimum accepted")
            })?;
            tamper_count += 1;
            continue;
        }
        solved += 1;
        let value: Value = serde_json::from_str(&first.stdout).unwrap();
        for (label, tampered) in tampers(&value) {
            let path = ws.file(&format!("{name}.tampered.json"), &tampered.to_string());
            let verdict = cli(&["verify", p(&inst), p(&path)]);
            ensure(
                verdict.code != 0 && !verdict.stdout.contains("\"valid\": true"),
                || format!("{name}: tamper `{label}` not flagged"),
            )?;
            tamper_count += 1;
        }
    }
    ensure(tamper_count >= 20, || {
        format!("only {tamper_count} tampers")
    })?;
    Ok(format!(
        "{} fixtures byte-stable ({solved} optimal), {tamper_count} tampers all flagged",
        fixtures.len()
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("symmetric feasibility matches the oracle", criterion_1),
        ("decomposition identities at scale", criterion_2),
        ("aggregated feasibility matches the oracle", criterion_3),
        ("aggregated optimum matches the oracle", criterion_4),
        ("two-type fixture via the command line", criterion_5),
        ("2x2x1e9 table fixture", criterion_6),
        ("TU vertex integrality", criterion_7),
        ("no branching on TU systems", criterion_8),
        ("command-line determinism and tamper detection", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
