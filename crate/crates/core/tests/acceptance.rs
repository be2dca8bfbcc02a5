//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 4 prints its weighted-degree localization tally as part of the
//! verdict. That bound does not hold for light edges (a single edge with
//! `ω̃ < 0` has `λ = e^{ω̃/2} > e^{ω̃}`), so its failure is reported but does
//! not fail the run; every other part of criterion 4 must pass.

use dimerlab_core::brute;
use dimerlab_core::disorder::UniformStream;
use dimerlab_core::experiments::checks::{
    annealed_positivity, brownian_fdd_check, clt_checks, joint_campaign, lln_check, quenched_campaign,
    thouless_check, Verdict,
};
use dimerlab_core::experiments::config::{
    AnnealedCheck, BrownianCheck, CltCheck, JointCheck, LlnCheck, QuenchedCheck,
};
use dimerlab_core::experiments::{estimate_limits, run_replicas, ExperimentConfig, FiberConfig, Mode};
use dimerlab_core::groundstate::{gse_remainder, max_weight};
use dimerlab_core::jacobi::{det_check, resolvent_u, JacobiMatrix};
use dimerlab_core::leeyang::{
    density_functionals, gauge_polynomial, localization_check, recurrence_residual, verify_interlacing,
    LeeYangSpectrum,
};
use dimerlab_core::sampler::exact_sample;
use dimerlab_core::stats::chi_square;
use dimerlab_core::transfer::{remainder, remainder_bounds, Problem};
use dimerlab_core::weights::sample_weights;
use dimerlab_core::*;
use nalgebra::{DMatrix, Schur};
use std::collections::HashMap;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure that is reported but does not fail the run.
    tolerated: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            detail,
            tolerated: false,
        }
    }
}

fn draw(g: &CylinderGraph, spec: &DisorderSpec, seed: RngSeed) -> Weights {
    sample_weights(g, spec, seed).unwrap()
}

fn pick(u: &mut UniformStream, k: usize) -> usize {
    ((u.next_open01() * k as f64) as usize).min(k - 1)
}

fn laws() -> Vec<DisorderSpec> {
    vec![
        DisorderSpec::standard_normal(),
        DisorderSpec::new(Law::Uniform { low: -1.0, high: 1.0 }, Law::BernoulliShift { p: 0.5, v0: -1.0, v1: 1.5 })
            .unwrap(),
        DisorderSpec::new(Law::Normal { mean: 0.5, sd: 2.0 }, Law::Normal { mean: -0.5, sd: 2.0 }).unwrap(),
        DisorderSpec::constant(0.0, 0.0),
    ]
}

fn fiber(u: &mut UniformStream, h: usize) -> HGraph {
    match (h, pick(u, 3)) {
        (1, _) => HGraph::path(1).unwrap(),
        (_, 0) => HGraph::path(h).unwrap(),
        (_, 1) => HGraph::complete(h).unwrap(),
        _ => HGraph::empty(h).unwrap(),
    }
}

/// Random instance with at most `max_vertices` vertices and `h ≤ max_h`.
fn instance(stream: u64, max_vertices: usize, max_h: usize) -> (CylinderGraph, Weights) {
    let mut u = RngSeed::new(0xacce, stream).uniforms(Domain::Jitter);
    let h = 1 + pick(&mut u, max_h);
    let n = 1 + pick(&mut u, max_vertices / h);
    let g = CylinderGraph::new(n, fiber(&mut u, h)).unwrap();
    let law = &laws()[pick(&mut u, 4)];
    let w = draw(&g, law, RngSeed::new(0xacce, stream));
    (g, w)
}

fn random_mask(g: &CylinderGraph, stream: u64) -> CountingMask {
    let mut u = RngSeed::new(0x3a5c, stream).uniforms(Domain::Jitter);
    match pick(&mut u, 3) {
        0 => CountingMask::All,
        1 => {
            let a = pick(&mut u, g.n());
            let b = a + 1 + pick(&mut u, g.n() - a);
            CountingMask::layers(a, b)
        }
        _ => CountingMask::set((0..g.n_vertices()).filter(|_| u.next_open01() < 0.5)),
    }
}

fn log_close(a: f64, b: f64, tol: f64) -> bool {
    (a == f64::NEG_INFINITY && b == f64::NEG_INFINITY) || (a - b).abs() <= tol
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut ok, mut worst) = (0, 0.0f64);
    let total = 240;
    for s in 0..total {
        let (g, w) = instance(s, 22, 3);
        let mask = random_mask(&g, s);
        let p = Problem::new(&g, &w).mask(&mask).polynomial().unwrap();
        let b = brute::polynomial(&g, &w, &mask, None).unwrap();
        let good = p.log_coeffs().len() == b.log_coeffs().len()
            && p.log_coeffs().iter().zip(b.log_coeffs()).all(|(&x, &y)| {
                if x.is_finite() {
                    worst = worst.max((x - y).abs());
                }
                log_close(x, y, 1e-10)
            });
        ok += good as u64;
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        ok == total && secs < 60.0,
        format!("{ok}/{total} instances, worst log-coefficient gap {worst:.2e}, {secs:.2}s"),
    )
}

fn criterion_2() -> Outcome {
    let (mut ok, mut worst) = (0, 0.0f64);
    let total = 300;
    for s in 0..total {
        let (g, w) = if s < 200 { instance(s, 22, 3) } else { instance(s, 600, 4) };
        let lz = Problem::new(&g, &w).log_z().unwrap();
        let gauge = w.gauge_transformed(&g).unwrap();
        let lzt = Problem::new(&g, &gauge).log_z().unwrap();
        let gap = (lz - (w.gauge_offset() + lzt)).abs();
        worst = worst.max(gap);
        ok += (gap <= 1e-9) as u64;
    }
    Outcome::new(ok == total, format!("{ok}/{total} instances, worst gap {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let (mut ok, mut worst) = (0, 0.0f64);
    let total = 300;
    for s in 0..total {
        let (g, w) = if s < 200 { instance(s, 22, 3) } else { instance(s, 300, 4) };
        let mut u = RngSeed::new(3, s).uniforms(Domain::Jitter);
        let v = g.vertex_id(g.n() - 1, pick(&mut u, g.h()));
        let r = recurrence_residual(&g, &w, v).unwrap();
        worst = worst.max(r);
        ok += (r <= 1e-9) as u64;
    }
    Outcome::new(ok == total, format!("{ok}/{total} terminal vertices, worst residual {worst:.2e}"))
}

/// Roots of `Σ_k c_k s^k` from the companion matrix, `None` if the QR
/// iteration does not converge.
fn companion_roots(c: &[f64]) -> Option<Vec<(f64, f64)>> {
    let d = c.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / c[d];
    }
    let schur = Schur::try_new(m, f64::EPSILON, 100_000)?;
    Some(schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
}

/// Independent check that the zeroes of `Z̃(w)` are `±iλ_j`: with `s = w²`
/// the nonzero part of `Z̃` is a polynomial in `s` whose roots must be the
/// real numbers `−λ_j²`.
fn companion_agrees(g: &CylinderGraph, w: &Weights, spec: &LeeYangSpectrum<f64>) -> (bool, f64) {
    let p = gauge_polynomial(g, w, None).unwrap();
    let coeffs: Vec<f64> = p.log_coeffs().iter().map(|l| l.exp()).collect();
    let zm = coeffs.iter().position(|&c| c != 0.0).unwrap();
    let in_s: Vec<f64> = coeffs[zm..].iter().step_by(2).copied().collect();
    let odd_free = coeffs[zm..].iter().skip(1).step_by(2).all(|&c| c == 0.0);
    let Some(roots) = companion_roots(&in_s) else {
        return (false, f64::INFINITY);
    };
    let scale = roots.iter().map(|r| r.0.hypot(r.1)).fold(f64::MIN_POSITIVE, f64::max);
    // a k-fold root is only resolved to about eps^(1/k) by an eigensolver
    let tol: Vec<f64> = roots
        .iter()
        .map(|a| {
            let k = roots.iter().filter(|b| (a.0 - b.0).hypot(a.1 - b.1) <= 1e-3 * scale).count();
            (10.0 * f64::EPSILON.powf(1.0 / k as f64)).max(1e-6) * scale
        })
        .collect();
    let off_axis = roots
        .iter()
        .zip(&tol)
        .map(|(r, t)| r.1.abs().max(r.0.max(0.0)) / t)
        .fold(0.0, f64::max);
    let mut l2: Vec<(f64, f64)> = roots.iter().zip(&tol).map(|(r, &t)| (-r.0, t)).collect();
    l2.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let want: Vec<f64> = spec.lambdas().iter().map(|l| l * l).collect();
    let same = zm == spec.zero_mult()
        && l2.len() == want.len()
        && l2.iter().zip(&want).all(|(&(a, t), b)| (a - b).abs() <= t);
    (odd_free && same && off_axis <= 1.0, off_axis)
}

fn criterion_4() -> Outcome {
    let total = 600;
    let (mut imag, mut recon, mut inter, mut local, mut rowsum) = (0, 0, 0, 0, 0);
    let mut worst_re = 0.0f64;
    for s in 0..total {
        let (g, w) = if s < 500 { instance(1000 + s, 16, 3) } else { instance(1000 + s, 120, 3) };
        let spec = LeeYangSpectrum::compute(&g, &w, None).unwrap();
        // independent oracle for small graphs: companion roots of Z̃
        let oracle_ok = if g.n_vertices() <= 16 {
            let (ok, re) = companion_agrees(&g, &w, &spec);
            worst_re = worst_re.max(re);
            ok
        } else {
            true
        };
        imag += (oracle_ok && spec.lambdas().iter().all(|l| l.is_finite() && *l > 0.0)) as u64;
        recon += spec.residual().is_some_and(|r| r <= 1e-8) as u64;
        let mut u = RngSeed::new(4, s).uniforms(Domain::Jitter);
        let v = pick(&mut u, g.n_vertices());
        let child = LeeYangSpectrum::compute(&g, &w, Some(&VertexSet::of(&g, [v]))).unwrap();
        inter += verify_interlacing(&spec, &child).unwrap() as u64;
        let loc = localization_check(&g, &w, &spec).unwrap();
        local += loc.ok as u64;
        rowsum += loc.row_sum_ok as u64;
    }
    let mut pair_gap = 0.0f64;
    for s in 0..50 {
        let g = CylinderGraph::path(2).unwrap();
        let w = draw(&g, &DisorderSpec::standard_normal(), RngSeed::new(44, s));
        let spec = LeeYangSpectrum::compute(&g, &w, None).unwrap();
        let want = (w.gauge_transformed(&g).unwrap().omega()[0] / 2.0).exp();
        pair_gap = pair_gap.max((spec.lambdas()[0] - want).abs() / want);
    }
    let core = imag == total && recon == total && inter == total && pair_gap <= 1e-12;
    let mut out = Outcome::new(
        core && local == total,
        format!(
            "imaginary {imag}/{total} (companion roots in w² off the negative axis, worst fraction of tolerance {worst_re:.1e}), two-vertex gap {pair_gap:.1e}, \
             reconstruction {recon}/{total}, interlacing {inter}/{total}, \
             weighted-degree localization {local}/{total}, row-sum localization {rowsum}/{total}"
        ),
    );
    out.tolerated = core && local < total && rowsum == total;
    out
}

fn criterion_5() -> Outcome {
    let xs: Vec<f64> = (0..17).map(|i| -2.0 + 0.25 * i as f64).collect();
    let (mut spectral, mut fd) = (0.0f64, 0.0f64);
    for s in 0..20 {
        let g = CylinderGraph::new(8 + s as usize * 2, HGraph::path(1 + s as usize % 3).unwrap()).unwrap();
        let w = draw(&g, &DisorderSpec::standard_normal(), RngSeed::new(5, s));
        let n = g.n() as f64;
        let p = Problem::new(&g, &w).polynomial().unwrap();
        let spec = LeeYangSpectrum::compute(&g, &w, None).unwrap();
        for &x in &xs {
            let c = p.cumulants(x, 2).unwrap();
            let (u, v) = density_functionals(&spec, g.n(), x);
            spectral = spectral.max((u - c[0] / n).abs()).max((v - c[1] / n).abs());
            let lz = |t: f64| Problem::new(&g, &w).tilt(t).log_z().unwrap();
            let (h1, h2) = (1e-5, 1e-3);
            let d1 = (lz(x + h1) - lz(x - h1)) / (2.0 * h1);
            let d2 = (lz(x + h2) - 2.0 * lz(x) + lz(x - h2)) / (h2 * h2);
            fd = fd.max((d1 - c[0]).abs() / c[0].abs()).max((d2 - c[1]).abs() / c[1].abs());
        }
    }
    Outcome::new(
        spectral <= 1e-9 && fd <= 1e-5,
        format!("coefficient vs spectral {spectral:.2e}, finite differences {fd:.2e} (relative)"),
    )
}

fn criterion_6() -> Outcome {
    let (mut checks, mut ok) = (0, 0);
    let mut tightest = f64::INFINITY;
    for s in 0..120 {
        let (g, w) = instance(2000 + s, 90, 3);
        if g.n() < 2 {
            continue;
        }
        for k in 1..g.n() {
            let r = remainder(&g, &w, k, 0.0).unwrap();
            let (coarse, sharp) = remainder_bounds(&g, &w, k).unwrap();
            let gse = gse_remainder(&g, &w, k).unwrap();
            let good = r >= -1e-10
                && r <= coarse + 1e-10
                && r <= sharp + 1e-10
                && gse.remainder >= -1e-10
                && gse.remainder <= gse.bound + 1e-10;
            tightest = tightest.min(coarse - r);
            checks += 1;
            ok += good as u64;
        }
    }
    Outcome::new(ok == checks, format!("{ok}/{checks} cuts, smallest slack to the coarse bound {tightest:.3}"))
}

fn normal_h2(n: Vec<usize>, replicas: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(FiberConfig::path(2), DisorderSpec::standard_normal(), n, replicas);
    cfg.run.seed = seed;
    cfg.run.sections = false;
    cfg
}

fn shape(v: &dimerlab_core::experiments::checks::CltVerdict) -> String {
    match &v.stats {
        Some(s) => format!(
            "{}: skew {:.3} kurt {:.3} KS {:.4}",
            v.metric, s.moments.skewness, s.moments.excess_kurtosis, s.ks
        ),
        None => format!("{}: no data", v.metric),
    }
}

fn criteria_7_8_14() -> (Outcome, Outcome, Outcome) {
    let ladder = run_replicas(&normal_h2(vec![64, 128, 256, 512], 1000, 7)).unwrap();
    let limits = estimate_limits(&ladder).unwrap();
    let lln = lln_check(&limits, &LlnCheck::default()).unwrap();
    let c7 = Outcome::new(
        lln.free_energy_passed && ladder.failures() == 0,
        format!(
            "f̂ drift {:.2e}, var/n drift {:.3}, var/n = {:.1} SE above 0",
            lln.mean_drift, lln.var_drift, lln.var_in_se
        ),
    );

    let big = run_replicas(&normal_h2(vec![256], 2000, 8)).unwrap();
    let check = |metric: &str| {
        clt_checks(
            &big,
            &CltCheck {
                enabled: true,
                n: Some(256),
                metrics: vec![metric.into()],
            },
        )
        .unwrap()
    };
    let lz = check("log_z");
    let c8 = Outcome::new(lz.verdicts[0].verdict == Verdict::Pass, shape(&lz.verdicts[0]));

    let mut brute_ok = 0;
    let total = 200;
    for s in 0..total {
        let (g, w) = instance(3000 + s, 22, 3);
        let dp = max_weight(&g, &w).unwrap();
        let (best, _) = brute::ground_states(&g, &w, None, 1e-12).unwrap();
        let argmax_value = dp.argmax.hamiltonian(&g, &w);
        brute_ok += ((dp.value - best).abs() <= 1e-12 * (1.0 + best.abs())
            && (argmax_value - best).abs() <= 1e-12 * (1.0 + best.abs())) as u64;
    }
    let m = check("m_n");
    let drift_ok = lln.ground_passed == Some(true);
    let c14 = Outcome::new(
        brute_ok == total && drift_ok && m.verdicts[0].verdict == Verdict::Pass,
        format!(
            "brute force {brute_ok}/{total}, m̂ drift {:.2e}, {}",
            lln.ground_drift.unwrap_or(f64::NAN),
            shape(&m.verdicts[0])
        ),
    );
    (c7, c8, c14)
}

fn criterion_9() -> Outcome {
    let u = Law::Uniform { low: -0.5, high: 0.5 };
    let mut cfg = ExperimentConfig::new(
        FiberConfig::path(1),
        DisorderSpec::new(u.clone(), u).unwrap(),
        vec![32, 64, 128, 256],
        2,
    );
    cfg.run.mode = Mode::Poly;
    cfg.run.seed = 9;
    let q = quenched_campaign(&cfg, &QuenchedCheck::default()).unwrap();
    Outcome::new(
        q.passed,
        format!(
            "{}/{} environments pass, worst distance at n=256 {:.4}",
            q.passing, q.environments, q.worst_final_distance
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut cfg = normal_h2(vec![512], 2, 10);
    cfg.run.mode = Mode::Poly;
    let check = JointCheck {
        enabled: true,
        environments: 20,
        cov_n: 256,
        var_n: 512,
        cov_ratio: 0.02,
        var_tol: 0.10,
    };
    let j = joint_campaign(&cfg, &check).unwrap();
    Outcome::new(
        j.passed,
        format!(
            "|Cov|/n ÷ σ̂_Q² = {:.4}, section variance ratios {:.3} / {:.3}",
            j.cov_ratio, j.left_ratio, j.right_ratio
        ),
    )
}

fn criterion_11() -> Outcome {
    let vertex = Law::Uniform { low: 1.0, high: 2.0 };
    let edge = Law::Uniform { low: -0.5, high: 0.5 };
    let fiber = FiberConfig::path(2);
    let g = fiber.cylinder(256).unwrap();
    let regime = edge.sup() - 2.0 * vertex.inf() < -(g.max_degree() as f64).ln();
    let mut cfg = ExperimentConfig::new(fiber, DisorderSpec::new(vertex, edge).unwrap(), vec![256], 2000);
    cfg.run.seed = 11;
    cfg.run.sections = false;
    cfg.run.ground = false;
    let table = run_replicas(&cfg).unwrap();
    let limits = estimate_limits(&table).unwrap();
    let a = annealed_positivity(&limits, &AnnealedCheck { enabled: true, se: 3.0 });
    let clt = clt_checks(
        &table,
        &CltCheck {
            enabled: true,
            n: Some(256),
            metrics: vec!["mean_u".into()],
        },
    )
    .unwrap();
    Outcome::new(
        regime && a.passed && clt.verdicts[0].verdict == Verdict::Pass,
        format!(
            "ω̃ < −log d_max: {regime}, σ̂_A² = {:.4} ({:.1} SE), {}",
            a.sigma_a2,
            a.in_se,
            shape(&clt.verdicts[0])
        ),
    )
}

fn criterion_12() -> Outcome {
    let cfg = normal_h2(vec![512], 2, 12);
    let check = BrownianCheck {
        enabled: true,
        n: 512,
        samples: 1000,
        grid_log2: 3,
        var_tol: 0.15,
        corr_max: 0.1,
    };
    let b = brownian_fdd_check(&cfg, &check).unwrap();
    let ratios: Vec<String> = b.increments.iter().map(|i| format!("{:.3}", i.ratio)).collect();
    let ks = b.increments.iter().map(|i| i.ks).fold(0.0, f64::max);
    Outcome::new(
        b.passed,
        format!(
            "variance ratios [{}], max |r| {:.3}, max KS {:.4} (envelope {:.4})",
            ratios.join(" "),
            b.max_abs_corr,
            ks,
            b.ks_envelope
        ),
    )
}

fn criterion_13() -> Outcome {
    let (mut det, mut gauge, mut phase) = (0.0f64, 0.0f64, true);
    let (mut eig, mut res) = (0.0f64, 0.0f64);
    let sizes = [1usize, 2, 3, 4, 5, 7, 16, 33, 64, 100, 128, 255, 256, 300, 512];
    for (i, &n) in sizes.iter().enumerate() {
        for s in 0..4u64 {
            let g = CylinderGraph::path(n).unwrap();
            let w = draw(&g, &DisorderSpec::standard_normal(), RngSeed::new(13, 100 * i as u64 + s));
            let d = det_check(&g, &w).unwrap();
            det = det.max(d.residual);
            gauge = gauge.max(d.gauge_residual);
            phase &= d.phase_ok;
            if n <= 256 {
                let eigs = JacobiMatrix::from_weights(&g, &w).unwrap().gauge().unwrap().real_part_eigenvalues();
                let spec = LeeYangSpectrum::compute(&g, &w, None).unwrap();
                eig = eig.max(eigs.iter().zip(spec.signed()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
                let p = Problem::new(&g, &w).polynomial().unwrap();
                for x in [-1.5, -0.5, 0.0, 0.7, 2.0] {
                    res = res.max((resolvent_u(&eigs, x) - p.cumulants(x, 1).unwrap()[0]).abs());
                }
            }
        }
    }
    let mut cfg = ExperimentConfig::new(FiberConfig::path(1), DisorderSpec::standard_normal(), vec![32, 64, 128, 256], 400);
    cfg.run.seed = 13;
    cfg.run.sections = false;
    cfg.run.ground = false;
    let t = thouless_check(&run_replicas(&cfg).unwrap(), 0.0, 1.0);
    let gaps: Vec<String> = t.rows.iter().map(|r| format!("{:.1e}", r.gap)).collect();
    Outcome::new(
        det <= 1e-9 && gauge <= 1e-9 && phase && eig <= 1e-8 && res <= 1e-8 && t.shrinking,
        format!(
            "det {det:.1e}, gauge det {gauge:.1e}, phase {phase}, eigenvalues {eig:.1e}, resolvent {res:.1e}, \
             Thouless gaps [{}] within shrinking envelopes: {}",
            gaps.join(" "),
            t.shrinking
        ),
    )
}

fn criterion_15() -> Outcome {
    let cases = [
        (12usize, HGraph::path(1).unwrap()),
        (6, HGraph::path(2).unwrap()),
        (4, HGraph::cycle(3).unwrap()),
        (3, HGraph::path(4).unwrap()),
    ];
    let mut ps = Vec::new();
    for (i, (n, h)) in cases.into_iter().enumerate() {
        let g = CylinderGraph::new(n, h).unwrap();
        let w = draw(&g, &DisorderSpec::standard_normal(), RngSeed::new(15, i as u64));
        let exact = brute::gibbs(&g, &w).unwrap();
        let index: HashMap<&[usize], usize> = exact.iter().enumerate().map(|(k, (m, _))| (&m[..], k)).collect();
        let mut counts = vec![0u64; exact.len()];
        for m in exact_sample(&g, &w, RngSeed::new(150, i as u64), 100_000).unwrap() {
            counts[index[m.edges()]] += 1;
        }
        let probs: Vec<f64> = exact.iter().map(|e| e.1).collect();
        ps.push(chi_square(&counts, &probs).unwrap().p_value);
    }
    let shown: Vec<String> = ps.iter().map(|p| format!("{p:.3}")).collect();
    Outcome::new(ps.iter().all(|&p| p >= 0.01), format!("p-values [{}]", shown.join(" ")))
}

fn report(results: &mut Vec<(usize, Outcome)>, k: usize, o: Outcome, secs: f64) {
    println!(
        "criterion {k:>2}: {} ({secs:.1}s) {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    results.push((k, o));
}

fn main() {
    let mut results = Vec::new();
    let single: [(usize, fn() -> Outcome); 6] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
    ];
    for (k, f) in single {
        let t = Instant::now();
        let o = f();
        report(&mut results, k, o, t.elapsed().as_secs_f64());
    }
    // 7, 8 and 14 share their replica campaigns
    let t = Instant::now();
    let (c7, c8, c14) = criteria_7_8_14();
    let secs = t.elapsed().as_secs_f64();
    report(&mut results, 7, c7, secs);
    report(&mut results, 8, c8, secs);
    report(&mut results, 14, c14, secs);
    let rest: [(usize, fn() -> Outcome); 6] = [
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
        (15, criterion_15),
    ];
    for (k, f) in rest {
        let t = Instant::now();
        let o = f();
        report(&mut results, k, o, t.elapsed().as_secs_f64());
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.1.pass && !r.1.tolerated).map(|r| r.0).collect();
    let tolerated: Vec<usize> = results.iter().filter(|r| !r.1.pass && r.1.tolerated).map(|r| r.0).collect();
    let passed = results.iter().filter(|r| r.1.pass).count();
    println!(
        "acceptance: {passed}/{} PASS; reported failures {tolerated:?}; blocking failures {failed:?}",
        results.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
