//! Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use graphcon::algo::is_connected;
use graphcon::centralized::{run_accretion, AccretionConfig};
use graphcon::consensus::{
    degree_weighted_average, run_experiment, spread, ConsensusConfig,
};
use graphcon::distributions::{sample, DistributionSpec};
use graphcon::generators::{make_complete, make_erdos_renyi, make_regular, make_ring};
use graphcon::matrices::{
    adjacency_matrix, degree_matrix, laplacian, regular_spectral_check, signed_incidence_matrix,
    walk_count_sum,
};
use graphcon::rootfind::{compare_methods, CompareConfig, Method, ScalarFunction};
use graphcon::Graph;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn laplacian_golden() -> Check {
    let start = Instant::now();
    let l = laplacian(&make_ring(4).map_err(err)?, true).map_err(err)?;
    let elapsed = start.elapsed();
    let golden = [
        [1.0, -0.5, 0.0, -0.5],
        [-0.5, 1.0, -0.5, 0.0],
        [0.0, -0.5, 1.0, -0.5],
        [-0.5, 0.0, -0.5, 1.0],
    ];
    let mut worst: f64 = 0.0;
    for (i, row) in golden.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            worst = worst.max((l.get(i, j) - want).abs());
        }
    }
    ensure(l.rows() == 4 && l.cols() == 4, || "shape is not 4x4".into())?;
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("max deviation {worst:e}, {elapsed:?}"))
}

fn handshaking() -> Check {
    for seed in 0..200u64 {
        let n = 1 + (seed as usize * 37) % 100;
        let p = [0.02, 0.1, 0.3, 0.5, 0.9][seed as usize % 5];
        let g = make_erdos_renyi(n, p, seed).map_err(err)?;
        let d = g.degree_sequence();
        let sum: usize = d.as_slice().iter().sum();
        let odd = d.as_slice().iter().filter(|&&k| k % 2 == 1).count();
        ensure(sum == 2 * g.edge_count(), || format!("seed {seed}: degree sum {sum}, edges {}", g.edge_count()))?;
        ensure(odd % 2 == 0, || format!("seed {seed}: {odd} odd-degree vertices"))?;
    }
    Ok("200 graphs".into())
}

fn complete_edge_count() -> Check {
    for n in 1..=20 {
        let e = make_complete(n).map_err(err)?.edge_count();
        ensure(e == n * (n - 1) / 2, || format!("K_{n} has {e} edges"))?;
    }
    Ok("n = 1..20".into())
}

fn spectral() -> Check {
    for (name, g, k) in [
        ("ring(10)", make_ring(10).map_err(err)?, 2.0),
        ("complete(5)", make_complete(5).map_err(err)?, 4.0),
    ] {
        let ones = vec![1.0; g.n()];
        let a1 = adjacency_matrix(&g).mul_vec(&ones);
        let residual = a1.iter().map(|x| (x - k).abs()).fold(0.0, f64::max);
        ensure(residual < 1e-9, || format!("{name}: residual {residual:e}"))?;
        let r = regular_spectral_check(&g).map_err(err)?;
        ensure((r.degree_eigenvalue - k).abs() < 1e-9, || {
            format!("{name}: largest eigenvalue {}", r.degree_eigenvalue)
        })?;
        let connected = is_connected(&g).map_err(err)?;
        ensure(r.multiplicity_one == connected, || format!("{name}: multiplicity {}", r.multiplicity))?;
    }
    let matching = make_regular(10, 1, 3).map_err(err)?;
    let r = regular_spectral_check(&matching).map_err(err)?;
    ensure(!r.multiplicity_one, || format!("regular(10, 1): multiplicity {}", r.multiplicity))?;
    Ok(format!("regular(10, 1) multiplicity {}", r.multiplicity))
}

fn laplacian_identity() -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let n = 2 + seed as usize % 11;
        let g = make_erdos_renyi(n, 0.4, 1000 + seed).map_err(err)?;
        let q = signed_incidence_matrix(&g).map_err(err)?;
        let qqt = q.matmul(&q.transpose()).map_err(err)?;
        let a = adjacency_matrix(&g);
        let d = degree_matrix(&g);
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((qqt.get(i, j) - (d.get(i, j) - a.get(i, j))).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("50 graphs, max deviation {worst:e}"))
}

/// `counts[len - 1][s][v]` = walks of length `len` from `s` to `v`.
fn enumerate_walks(g: &Graph, k: usize) -> Vec<Vec<Vec<u64>>> {
    fn extend(g: &Graph, start: usize, at: usize, len: usize, k: usize, counts: &mut [Vec<Vec<u64>>]) {
        if len == k {
            return;
        }
        for &v in g.neighbors(at) {
            counts[len][start][v] += 1;
            extend(g, start, v, len + 1, k, counts);
        }
    }
    let n = g.n();
    let mut counts = vec![vec![vec![0u64; n]; n]; k];
    for s in 0..n {
        extend(g, s, s, 0, k, &mut counts);
    }
    counts
}

fn walk_oracle() -> Check {
    let start = Instant::now();
    let mut graphs = 0;
    for n in 1..=6 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let chosen = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
            let g = Graph::from_pairs(n, false, chosen).map_err(err)?;
            if !is_connected(&g).map_err(err)? {
                continue;
            }
            graphs += 1;
            let walks = enumerate_walks(&g, 4);
            let mut total = vec![vec![0u64; n]; n];
            for k in 1..=4 {
                let m = walk_count_sum(&g, k).map_err(err)?;
                for s in 0..n {
                    for v in 0..n {
                        total[s][v] += walks[k - 1][s][v];
                        ensure(m.get(s, v) == total[s][v] as f64, || {
                            format!("n={n} mask={mask:b} k={k} ({s},{v}): {} vs {}", m.get(s, v), total[s][v])
                        })?;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{graphs} connected graphs, k = 1..4, {elapsed:?}"))
}

fn uniform_pm1() -> DistributionSpec {
    DistributionSpec::uniform(-1.0, 1.0).expect("valid")
}

fn consensus_conservation() -> Check {
    let mut worst_drift: f64 = 0.0;
    let mut worst_value: f64 = 0.0;
    for seed in 0..100u64 {
        let exp = run_experiment(&ConsensusConfig::new(uniform_pm1(), seed, 5000 + seed)).map_err(err)?;
        let g = &exp.graph;
        let weighted = |x: &[f64]| (0..g.n()).map(|i| g.neighbors(i).len() as f64 * x[i]).sum::<f64>();
        let initial = weighted(&exp.trace.values[0]);
        for x in &exp.trace.values {
            worst_drift = worst_drift.max((weighted(x) - initial).abs());
        }
        let value = exp.trace.consensus_value.ok_or_else(|| format!("seed {seed}: no consensus"))?;
        worst_value = worst_value.max((value - degree_weighted_average(g, &exp.trace.values[0])).abs());
    }
    ensure(worst_drift <= 1e-9, || format!("weighted sum drifted by {worst_drift:e}"))?;
    ensure(worst_value <= 1e-6, || format!("consensus off by {worst_value:e}"))?;
    Ok(format!("100 runs, drift {worst_drift:e}, value error {worst_value:e}"))
}

fn consensus_speed() -> Check {
    let mut fast = 0;
    for seed in 0..100u64 {
        let mut config = ConsensusConfig::new(uniform_pm1(), seed, 7000 + seed);
        config.max_iters = 10;
        config.tolerance = 0.05;
        let trace = run_experiment(&config).map_err(err)?.trace;
        if trace.values.iter().any(|x| spread(x) < 0.05) {
            fast += 1;
        }
    }
    ensure(fast >= 95, || format!("{fast}/100 seeds below 0.05 within 10 iterations"))?;
    Ok(format!("{fast}/100 seeds below 0.05 within 10 iterations"))
}

fn degree_concentration() -> Check {
    let (mut inside, mut total) = (0, 0);
    for seed in 0..100u64 {
        let g = make_erdos_renyi(20, 0.5, seed).map_err(err)?;
        for &d in g.degree_sequence().as_slice() {
            total += 1;
            inside += usize::from((8..=12).contains(&d));
        }
    }
    let share = inside as f64 / total as f64;
    ensure(share >= 0.6, || format!("{:.1}% in [8, 12]", 100.0 * share))?;
    Ok(format!("{:.1}% of {total} degrees in [8, 12]", 100.0 * share))
}

/// Fourth central moment of each distribution.
fn mu4(spec: &DistributionSpec) -> f64 {
    match *spec {
        DistributionSpec::Uniform { a, b } => (b - a).powi(4) / 80.0,
        DistributionSpec::Normal { sigma, .. } => 3.0 * sigma.powi(4),
        DistributionSpec::Poisson { lambda_t } => lambda_t + 3.0 * lambda_t * lambda_t,
        DistributionSpec::Binomial { n, p } => {
            let q = p * (1.0 - p);
            n as f64 * q * (1.0 + 3.0 * (n as f64 - 2.0) * q)
        }
        DistributionSpec::Exponential { beta } => 9.0 * beta.powi(4),
        DistributionSpec::ChiSquare { v } => 12.0 * v as f64 * (v as f64 + 4.0),
    }
}

/// Closed-form mean and variance, written out independently of the library.
fn closed_form(spec: &DistributionSpec) -> (f64, f64) {
    match *spec {
        DistributionSpec::Uniform { a, b } => ((a + b) / 2.0, (b - a).powi(2) / 12.0),
        DistributionSpec::Normal { mu, sigma } => (mu, sigma * sigma),
        DistributionSpec::Poisson { lambda_t } => (lambda_t, lambda_t),
        DistributionSpec::Binomial { n, p } => (n as f64 * p, n as f64 * p * (1.0 - p)),
        DistributionSpec::Exponential { beta } => (beta, beta * beta),
        DistributionSpec::ChiSquare { v } => (v as f64, 2.0 * v as f64),
    }
}

fn distribution_moments() -> Check {
    let specs = [
        DistributionSpec::uniform(-10.0, 10.0),
        DistributionSpec::normal(10.0, 2.0),
        DistributionSpec::poisson(2.0),
        DistributionSpec::binomial(20, 0.5),
        DistributionSpec::exponential(1.0),
        DistributionSpec::chi_square(3),
    ];
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, spec) in specs.into_iter().enumerate() {
        let spec = spec.map_err(err)?;
        let draws = sample(&spec, 1_000_000, 100 + i as u64).map_err(err)?;
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let (mu, sigma2) = closed_form(&spec);
        let z_mean = (mean - mu).abs() / (sigma2 / n).sqrt();
        let z_var = (var - sigma2).abs() / ((mu4(&spec) - sigma2 * sigma2) / n).sqrt();
        ensure(z_mean <= 6.0 && z_var <= 6.0, || {
            format!("{}: mean {mean} ({z_mean:.2} SE), variance {var} ({z_var:.2} SE)", spec.name())
        })?;
        worst = worst.max(z_mean).max(z_var);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("6 specs, worst {worst:.2} SE, {elapsed:?}"))
}

fn accretion() -> Check {
    let config = AccretionConfig::new(
        DistributionSpec::normal(10.0, 2.0).map_err(err)?,
        DistributionSpec::normal(7.5, 2.0).map_err(err)?,
        2024,
    );
    let snaps = run_accretion(&config).map_err(err)?;
    let last = snaps.last().ok_or("no snapshots")?;
    let count = last.state.points.len();
    ensure(count == 20100, || format!("{count} points"))?;
    let se = 2.0 / (count as f64).sqrt();
    let (cx, cy) = last.state.center;
    let (zx, zy) = ((cx - 10.0).abs() / se, (cy - 7.5).abs() / se);
    ensure(zx <= 6.0 && zy <= 6.0, || format!("center ({cx}, {cy}) is ({zx:.2}, {zy:.2}) SE away"))?;
    Ok(format!("20100 points, center ({cx:.4}, {cy:.4}), ({zx:.2}, {zy:.2}) SE"))
}

fn root_value() -> Check {
    let tol = 1e-6;
    let cmp = compare_methods(
        &ScalarFunction::tanx(),
        &[Method::Bisection, Method::Secant, Method::Newton],
        &CompareConfig::for_bracket(4.0, 5.0, tol, 100),
    );
    let mut iters = BTreeMap::new();
    for row in &cmp.rows {
        let root = row.root().ok_or_else(|| format!("{}: {}", row.method, row.note()))?;
        ensure((root - 4.493409).abs() <= 1e-5, || format!("{}: root {root}", row.method))?;
        iters.insert(row.method.id(), row.iterations().expect("converged"));
    }
    let (b, s, n) = (iters["bisection"], iters["secant"], iters["newton"]);
    let bound = (1.0 / tol).log2().ceil() as usize;
    ensure(b <= bound, || format!("bisection took {b} > {bound}"))?;
    ensure(n <= s && s <= b, || format!("iterations newton {n}, secant {s}, bisection {b}"))?;
    Ok(format!("iterations newton {n} <= secant {s} <= bisection {b} <= {bound}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_graphcon"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(err)?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim())
    })
}

fn csv_files(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(err)? {
        let path = entry.map_err(err)?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            let name = path.file_name().expect("file").to_string_lossy().into_owned();
            files.insert(name, fs::read(&path).map_err(err)?);
        }
    }
    Ok(files)
}

fn cli_determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(err)?;
    let dir = tmp.path();
    let configs = [
        ("consensus.json", r#"{"n": 20, "p": 0.5, "graph_seed": 3, "value_seed": 4, "distribution": {"kind": "uniform", "a": -1, "b": 1}}"#),
        ("central.json", r#"{"spec_x": {"kind": "normal", "mu": 10, "sigma": 2}, "spec_y": {"kind": "normal", "mu": 7.5, "sigma": 2}, "seed": 9}"#),
        ("dist.json", r#"{"spec": {"kind": "chi_square", "v": 3}, "count": 5000, "seed": 8}"#),
        ("er.json", r#"{"kind": "erdos-renyi", "n": 500, "p": 0.05, "seed": 7}"#),
        ("regular.json", r#"{"kind": "regular", "n": 30, "k": 4, "seed": 2}"#),
    ];
    for (name, body) in configs {
        fs::write(dir.join(name), body).map_err(err)?;
    }
    // Each command runs twice into `<label>/a` and `<label>/b`; `matrices`
    // reads the ring written by the first `ring` run.
    let commands: [(&str, &[&str]); 8] = [
        ("erdos_renyi", &["--config", "er.json", "graph", "gen"]),
        ("regular", &["--config", "regular.json", "graph", "gen"]),
        ("ring", &["graph", "gen", "--kind", "ring", "--n", "12"]),
        (
            "matrices",
            &["graph", "matrices", "--graph", "ring/a/edges.csv", "--which", "adjacency,incidence,laplacian,normalized-laplacian,walk-sum", "--k", "3"],
        ),
        ("consensus", &["--config", "consensus.json", "consensus", "run"]),
        ("central", &["--config", "central.json", "central", "run"]),
        ("root", &["root", "find"]),
        ("dist", &["--config", "dist.json", "dist", "sample"]),
    ];
    let mut compared = 0;
    for (label, args) in commands {
        let mut runs = Vec::new();
        for run in ["a", "b"] {
            let out = format!("{label}/{run}");
            let mut full = vec!["--out", out.as_str()];
            full.extend_from_slice(args);
            run_cli(dir, &full)?;
            runs.push(csv_files(&dir.join(&out))?);
        }
        ensure(!runs[0].is_empty(), || format!("{label}: no CSV written"))?;
        ensure(runs[0] == runs[1], || {
            let differing: Vec<&String> = runs[0].keys().filter(|k| runs[0].get(*k) != runs[1].get(*k)).collect();
            format!("{label}: {differing:?} differ")
        })?;
        compared += runs[0].len();
    }
    Ok(format!("{} commands, {compared} CSV files identical", commands.len()))
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 13] = [
        ("laplacian golden ring(4)", laplacian_golden),
        ("handshaking on 200 G(n, p)", handshaking),
        ("complete graph edge count", complete_edge_count),
        ("regular spectral check", spectral),
        ("signed incidence Laplacian identity", laplacian_identity),
        ("walk counts against enumeration", walk_oracle),
        ("consensus conserves the degree-weighted sum", consensus_conservation),
        ("consensus speed on G(20, 0.5)", consensus_speed),
        ("degree concentration in [8, 12]", degree_concentration),
        ("distribution moments at 10^6 draws", distribution_moments),
        ("accretion count and center", accretion),
        ("root of x cos x - sin x", root_value),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
