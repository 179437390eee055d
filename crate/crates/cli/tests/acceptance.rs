//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use rand::Rng;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};
use vslab_core::datasets::{cone_dataset, mohri_hard_dataset, random_separable_dataset};
use vslab_core::geometry::{
    in_version_space, mc_version_space_probability, regularized_incomplete_beta, sector_probability, Hyperplane,
    RealVector,
};
use vslab_core::qsearch::{grover_sample, qsearch, MarkedOracle, C64};
use vslab_core::qwalk::{
    algorithm3_run, build_szegedy, omega, pi3_amplify, reflection_about_state, Algorithm3Params,
    QuantumSampleState, WalkKernel,
};
use vslab_core::rng::{derive_seed, stream};
use vslab_core::solvers::{
    cutting_plane_rounds, cutting_plane_solve, ellipsoid_rounds, ellipsoid_solve, hit_and_run_step, BlackBox,
    CutPolytope, CuttingPlaneParams, EllipsoidState,
};
use vslab_core::QueryLedger;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit_s, format!("runtime {s:.1}s < {limit_s}s"))
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, 1e-15, 50)
}

/// `∫₀ˣ t^{a−1}(1−t)^{b−1} dt` through `t = x·u^{1/a}`.
fn lower_beta_integral(x: f64, a: f64, b: f64) -> f64 {
    let g = |u: f64| (1.0 - x * u.powf(1.0 / a)).powf(b - 1.0);
    x.powf(a) / a * integrate(&g, 0.0, 1.0)
}

fn beta_by_quadrature(x: f64, a: f64, b: f64) -> f64 {
    if x > 0.5 {
        return 1.0 - beta_by_quadrature(1.0 - x, b, a);
    }
    let total = lower_beta_integral(0.5, a, b) + lower_beta_integral(0.5, b, a);
    lower_beta_integral(x, a, b) / total
}

fn beta_oracle() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for &x in &[0.01, 0.2, 0.5, 0.75, 0.99] {
        for &a in &[0.5, 1.5, 3.0, 5.5] {
            for &b in &[0.5, 1.0, 2.5, 4.0, 10.0] {
                let got = regularized_incomplete_beta(x, a, b).unwrap();
                worst = worst.max((got - beta_by_quadrature(x, a, b)).abs());
                count += 1;
            }
        }
    }
    let (fast, rt) = within(start.elapsed(), 5.0);
    verdict(count == 100 && worst <= 1e-9 && fast, format!("{count} points, max |diff| {worst:.2e} ≤ 1e-9, {rt}"))
}

fn sector_anchors() -> Verdict {
    let mut ok = true;
    for d in 2..=12 {
        ok &= sector_probability(0.0, d).unwrap() == 0.0;
        ok &= sector_probability(1.0, d).unwrap() == 0.5;
    }
    let mut worst: f64 = 0.0;
    for i in 1..=50 {
        let g = i as f64 / 51.0;
        worst = worst.max((sector_probability(g, 2).unwrap() - g.asin() / PI).abs());
    }
    verdict(ok && worst <= 1e-9, format!("exact endpoints {ok}, D=2 max |diff| {worst:.2e} over 50 γ"))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn probability_scaling() -> Verdict {
    let start = Instant::now();
    let mut bound_ok = true;
    let mut notes = Vec::new();
    for d in 2..=6 {
        let data = mohri_hard_dataset(d).unwrap();
        let g = data.margin().unwrap().margin;
        let mc = mc_version_space_probability(&data, 1_000_000, derive_seed(31, d as u64)).unwrap();
        bound_ok &= mc.estimate >= sector_probability(g, d).unwrap() - 4.0 * mc.stderr;
    }
    let mut slope_ok = true;
    for d in 2..=6 {
        let mut pts = Vec::new();
        for &g in &[0.1, 0.14, 0.2, 0.28] {
            let data = cone_dataset(d, g).unwrap();
            let mc = mc_version_space_probability(&data, 10_000_000, derive_seed(77, (d * 100) as u64 + (g * 100.0) as u64))
                .unwrap();
            pts.push((g.ln(), mc.estimate.ln()));
        }
        let s = slope(&pts);
        slope_ok &= s.is_finite() && (s - (d as f64 - 1.0)).abs() <= 0.3;
        notes.push(format!("D={d}:{s:.2}"));
    }
    let (fast, rt) = within(start.elapsed(), 120.0);
    verdict(
        bound_ok && slope_ok && fast,
        format!("MC ≥ sector − 4σ on D=2..6: {bound_ok}; slopes {} (±0.3 of D−1); {rt}", notes.join(" ")),
    )
}

fn mohri_margin() -> Verdict {
    let mut ok = true;
    for d in 2..=12 {
        let g = mohri_hard_dataset(d).unwrap().margin().unwrap().margin;
        ok &= g <= (0.5f64).powi(d as i32 - 1).sqrt() + 1e-9;
    }
    let g2 = mohri_hard_dataset(2).unwrap().margin().unwrap().margin;
    let err = (g2 - (PI / 8.0).sin()).abs();
    verdict(ok && err <= 1e-6, format!("bound holds D=2..12: {ok}; |γ₂ − sin(π/8)| = {err:.2e}"))
}

fn grover_exactness() -> Verdict {
    let start = Instant::now();
    let shots = 10_000;
    let mut rng = stream(5);
    let mut worst_z: f64 = 0.0;
    let mut cells = 0;
    let mut exact_cell = false;
    for &n in &[4usize, 8, 16, 32, 64] {
        for &m in &[1usize, 2, 3, n / 2] {
            if m >= n {
                continue;
            }
            let marked: Vec<usize> = (0..m).collect();
            for k in 0..=8u64 {
                let mut oracle = MarkedOracle::with_marked(n, &marked).unwrap();
                let hits = (0..shots).filter(|_| grover_sample(&mut oracle, k, &mut rng) < m).count();
                let freq = hits as f64 / shots as f64;
                let theta = (m as f64 / n as f64).sqrt().asin();
                let p = ((2 * k + 1) as f64 * theta).sin().powi(2);
                let sigma = (p * (1.0 - p) / shots as f64).sqrt().max(1e-12);
                worst_z = worst_z.max((freq - p).abs() / sigma);
                if (n, m, k) == (4, 1, 1) {
                    exact_cell = freq == 1.0;
                }
                cells += 1;
            }
        }
    }
    let (fast, rt) = within(start.elapsed(), 60.0);
    verdict(
        worst_z <= 4.0 && exact_cell && fast,
        format!("{cells} cells, max |z| {worst_z:.2} ≤ 4; N=4,M=1,k=1 frequency 1.0: {exact_cell}; {rt}"),
    )
}

fn qsearch_contract() -> Verdict {
    let runs = 400;
    let mut rng = stream(11);
    let mut worst_rate: f64 = 1.0;
    let mut none_ok = true;
    for &n in &[1usize, 2, 4, 16, 64, 256, 1024] {
        for &m in &[1usize, 2, n / 8, n / 2, n] {
            if m == 0 || m > n {
                continue;
            }
            let marked: Vec<usize> = (0..n).filter(|i| i % (n / m) == 0).take(m).collect();
            let mut ok = 0;
            for _ in 0..runs {
                let mut o = MarkedOracle::with_marked(n, &marked).unwrap();
                if let Some(i) = qsearch(&mut o, &mut rng) {
                    ok += marked.contains(&i) as u32;
                }
            }
            worst_rate = worst_rate.min(ok as f64 / runs as f64);
        }
        for _ in 0..50 {
            let mut o = MarkedOracle::with_marked(n, &[]).unwrap();
            none_ok &= qsearch(&mut o, &mut rng).is_none();
            none_ok &= o.ledger().quantum_queries as f64 <= 9.0 * (n as f64).sqrt();
        }
    }
    verdict(worst_rate >= 0.25 && none_ok, format!("min verified success rate {worst_rate:.3} ≥ 0.25; M=0 → none within 9√N: {none_ok}"))
}

fn scaling_exponents() -> Verdict {
    let start = Instant::now();
    let trials = 100;
    let mut classical = Vec::new();
    let mut quantum = Vec::new();
    for e in 4..=14 {
        let n = 1usize << e;
        let mut rng = stream(derive_seed(13, e));
        let (mut c_tot, mut q_tot) = (0u64, 0u64);
        for t in 0..trials {
            let target = (t * 7919) % n;
            let mut o = MarkedOracle::with_marked(n, &[target]).unwrap();
            while !o.query(rng.random_range(0..n)) {}
            c_tot += o.ledger().classical_queries;
            let mut o = MarkedOracle::with_marked(n, &[target]).unwrap();
            while qsearch(&mut o, &mut rng).is_none() {}
            q_tot += o.ledger().total_queries();
        }
        classical.push(((n as f64).ln(), (c_tot as f64 / trials as f64).ln()));
        quantum.push(((n as f64).ln(), (q_tot as f64 / trials as f64).ln()));
    }
    let (sc, sq) = (slope(&classical), slope(&quantum));
    let (fast, rt) = within(start.elapsed(), 120.0);
    verdict(
        (0.9..=1.1).contains(&sc) && (0.4..=0.6).contains(&sq) && fast,
        format!("classical slope {sc:.3} in [0.9,1.1], quantum slope {sq:.3} in [0.4,0.6]; {rt}"),
    )
}

fn ellipsoid_checks() -> Verdict {
    let mut s = EllipsoidState::unit_ball(2).unwrap();
    s.update(&RealVector::from_vec(vec![1.0, 0.0])).unwrap();
    let hand = (s.center[0] - 1.0 / 3.0).abs().max(s.center[1].abs()).max((s.shape[(0, 0)] - 4.0 / 9.0).abs())
        .max((s.shape[(1, 1)] - 4.0 / 3.0).abs())
        .max(s.shape[(0, 1)].abs())
        .max(s.shape[(1, 0)].abs());
    let mut ratio_ok = true;
    let mut converged = 0;
    let solves = 105;
    for i in 0..solves {
        let d = 2 + i % 7;
        let data = random_separable_dataset(d, 40, 0.05, 1000 + i as u64).unwrap();
        let g = data.margin().unwrap().margin;
        let r = ellipsoid_solve(&data, g, 0.05, BlackBox::Qsearch, i as u64).unwrap();
        let cap = (-1.0 / (2.0 * d as f64)).exp();
        ratio_ok &= r.trace.volume_ratios.iter().all(|&v| v < cap);
        converged += (r.converged && r.rounds <= ellipsoid_rounds(d, g)) as u32;
    }
    let rate = converged as f64 / solves as f64;
    verdict(
        hand <= 1e-12 && ratio_ok && rate >= 0.95,
        format!("hand values off by {hand:.1e}; every volume ratio < e^(−1/2D): {ratio_ok}; converged {converged}/{solves}"),
    )
}

fn cutting_plane_checks() -> Verdict {
    let solves = 100;
    let mut converged = 0;
    let mut cert_ok = true;
    for i in 0..solves {
        let d = 2 + i % 5;
        let data = random_separable_dataset(d, 40, 0.1, 2000 + i as u64).unwrap();
        let cert = data.margin().unwrap();
        let g = cert.margin;
        let r = cutting_plane_solve(&data, &CuttingPlaneParams::new(g, 0.05, BlackBox::Qsearch), i as u64).unwrap();
        converged += (r.converged && r.rounds <= cutting_plane_rounds(d, g)) as u32;
        let point = &cert.separator * (g / 2.0);
        let mut p = CutPolytope::new(d);
        for cut in r.trace.polytope.as_ref().unwrap().cuts() {
            p.push(cut.clone()).unwrap();
            cert_ok &= p.contains(&point);
        }
    }
    let mut moments_ok = true;
    let mut worst_z: f64 = 0.0;
    for d in [2usize, 3, 5] {
        let ball = CutPolytope::new(d);
        let mut rng = stream(derive_seed(17, d as u64));
        let mut ledger = QueryLedger::new();
        let mut w = RealVector::zeros(d);
        for _ in 0..100 {
            w = hit_and_run_step(&w, &ball, 1e-9, &mut rng, &mut ledger).unwrap();
        }
        let n = 10_000;
        let mut mean = RealVector::zeros(d);
        let mut sq = 0.0;
        for _ in 0..n {
            for _ in 0..10 {
                w = hit_and_run_step(&w, &ball, 1e-9, &mut rng, &mut ledger).unwrap();
            }
            mean += &w;
            sq += w.norm_squared();
        }
        mean /= n as f64;
        sq /= n as f64;
        let df = d as f64;
        let coord_sd = (1.0 / (df + 2.0) / n as f64).sqrt();
        let sq_mean = df / (df + 2.0);
        let sq_sd = ((df / (df + 4.0) - sq_mean * sq_mean) / n as f64).sqrt();
        for x in mean.iter() {
            worst_z = worst_z.max(x.abs() / coord_sd);
        }
        worst_z = worst_z.max((sq - sq_mean).abs() / sq_sd);
    }
    moments_ok &= worst_z <= 4.0;
    let rate = converged as f64 / solves as f64;
    verdict(
        rate >= 0.95 && cert_ok && moments_ok,
        format!("converged {converged}/{solves}; certificate point kept after every cut: {cert_ok}; ball moments max |z| {worst_z:.2}"),
    )
}

fn szegedy_checks() -> Verdict {
    let mut rng = stream(23);
    let mut worst_res: f64 = 0.0;
    let mut gap_ok = true;
    for i in 0..20 {
        let d = 2 + (i * 3) % 15;
        let k = WalkKernel::random(d, 0.1 * (i % 5) as f64, &mut rng).unwrap();
        let w = build_szegedy(&k).unwrap();
        worst_res = worst_res.max(w.unitarity_residual()).max(w.stationarity_residual());
        gap_ok &= w.phase_gap() >= 2.0 * k.spectral_gap().sqrt() - 1e-12;
    }
    let two = WalkKernel::from_transition(nalgebra::DMatrix::from_element(2, 2, 0.5)).unwrap();
    let w2 = build_szegedy(&two).unwrap();
    let exact = (w2.phase_gap() - PI).abs() <= 1e-12 && (two.spectral_gap() - 1.0).abs() <= 1e-12;
    verdict(
        worst_res <= 1e-10 && gap_ok && exact,
        format!("max residual {worst_res:.1e}; Δ ≥ 2√δ on 20 kernels: {gap_ok}; two-node Δ=π, δ=1: {exact}"),
    )
}

fn amplification() -> Verdict {
    let mut worst: f64 = f64::INFINITY;
    for &p in &[0.1f64, 1.0 / 3.0, 0.5, 0.9] {
        let s = QuantumSampleState::new(nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])).unwrap();
        let t = QuantumSampleState::new(nalgebra::DVector::from_vec(vec![
            C64::new(p.sqrt(), 0.0),
            C64::new((1.0 - p).sqrt(), 0.0),
        ]))
        .unwrap();
        let rs = reflection_about_state(&s, omega()).unwrap();
        let rt = reflection_about_state(&t, omega()).unwrap();
        for depth in 1..=3 {
            let out = pi3_amplify(&s, &rs, &rt, depth).unwrap();
            let overlap = t.amplitudes().dotc(out.amplitudes()).norm_sqr();
            let bound = 1.0 - (1.0 - p).powi(3i32.pow(depth));
            worst = worst.min(overlap - bound);
        }
    }
    verdict(worst >= -1e-10, format!("min (overlap − bound) {worst:.2e} ≥ −1e-10"))
}

fn algorithm3_end_to_end() -> Verdict {
    let start = Instant::now();
    let data = mohri_hard_dataset(2).unwrap();
    let g = data.margin().unwrap().margin;
    let params = Algorithm3Params::new(g, 0.1);
    let mut masses = Vec::new();
    let (mut cuts, mut good) = (0, 0);
    for seed in 0..10 {
        let out = algorithm3_run(&data, &params, seed).unwrap();
        let mass: f64 = out
            .final_grid
            .points()
            .iter()
            .zip(out.final_state.amplitudes().iter())
            .filter(|(x, _)| in_version_space(&Hyperplane::from((*x).clone()), &data).unwrap())
            .map(|(_, a)| a.norm_sqr())
            .sum();
        masses.push(mass);
        for r in &out.rounds_log {
            cuts += 1;
            good += (r.overlap >= 1.0 / 3.0) as u32;
        }
    }
    let min_mass = masses.iter().copied().fold(f64::INFINITY, f64::min);
    let mass_ok = min_mass >= 0.9;
    let overlap_ok = cuts > 0 && good as f64 >= 0.9 * cuts as f64;
    let (fast, rt) = within(start.elapsed(), 180.0);
    verdict(
        mass_ok && overlap_ok && fast,
        format!("final in-VS mass min {min_mass:.3} (needs ≥ 0.9): {mass_ok}; overlap ≥ 1/3 on {good}/{cuts} cuts: {overlap_ok}; {rt}"),
    )
}

fn run_cli(args: &[&str], out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_vslab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .map(|o| o.status.code() == Some(0))
        .unwrap_or(false)
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    v.sort();
    v
}

fn reproducibility() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let runs: [(&str, &[&str]); 5] = [
        ("fig1", &["fig1", "--d-range", "2..5", "--samples", "200000", "--seed", "4", "--svg"]),
        ("scaling", &["scaling", "--n-range", "16..512", "--trials", "10", "--seed", "4", "--svg"]),
        ("ellipsoid", &["solve", "--algo", "ellipsoid", "--dataset", "mohri", "--d", "3", "--seed", "4"]),
        ("cutting", &["solve", "--algo", "cutting-plane", "--dataset", "random", "--d", "3", "--n", "30", "--margin", "0.1", "--seed", "4"]),
        ("walkdemo", &["walkdemo", "--seed", "4", "--svg"]),
    ];
    let mut same = 0;
    let mut notes = Vec::new();
    for (name, args) in runs {
        let a = tmp.path().join(format!("{name}-a"));
        let b = tmp.path().join(format!("{name}-b"));
        let ok = run_cli(args, &a) && run_cli(args, &b);
        let (fa, fb) = (csv_files(&a), csv_files(&b));
        if ok && !fa.is_empty() && fa == fb {
            same += 1;
        } else {
            notes.push(name);
        }
    }
    verdict(same == runs.len(), format!("{same}/{} experiments byte-identical {:?}", runs.len(), notes))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 13] = [
        ("incomplete beta vs quadrature", beta_oracle),
        ("sector probability anchors", sector_anchors),
        ("version-space probability scaling", probability_scaling),
        ("hard-dataset margin bound", mohri_margin),
        ("Grover success frequencies", grover_exactness),
        ("search with unknown marked count", qsearch_contract),
        ("classical vs quantum search exponents", scaling_exponents),
        ("ellipsoid method", ellipsoid_checks),
        ("cutting-plane method", cutting_plane_checks),
        ("Szegedy walk", szegedy_checks),
        ("fixed-point amplification", amplification),
        ("quantum-walk learner end to end", algorithm3_end_to_end),
        ("CLI reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        failed += !v.pass as usize;
        println!(
            "[{:>2}] {} {name} ({:.1}s): {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
