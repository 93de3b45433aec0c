//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kernel_factor::coeff::{check_bound, estimate_decay, index_weight, reconstruction_error};
use kernel_factor::factorize::{
    factor_chain, factorize, factorize_beurling, factorize_roumieu, factorize_schwartz,
    is_positive_hermite_diagonal, Branch, DiagonalSide, FactorOptions, FactorPair, FactorParams,
};
use kernel_factor::generate::{mehler, projector_symbol, random_gs};
use kernel_factor::schatten::{
    decay_fit, embedding_monotonicity_check, holder_check, hs_identity_check, operator_matrix, partial_sums,
    schatten_norm, singular_values, tail_ratio, HermiteWeight, SchattenOrder,
};
use kernel_factor::weyl::{
    change_quantization, coeffs_to_kernel_grid, factorize_symbol, kernel_to_symbol, sharp, symbol_to_kernel,
    GridKernel, GridSymbol, PhaseGrid,
};
use kernel_factor::{CoeffTensor, Complex64, MultiIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn seeded_inputs() -> Vec<(String, CoeffTensor)> {
    let mut v = vec![("mehler(0.5,64)".to_string(), mehler(0.5, 64).unwrap())];
    for seed in 0..20u64 {
        v.push((format!("random-gs seed {seed}"), random_gs(1, 32, 0.5, 0.5, seed).unwrap()));
    }
    v
}

fn one(v: usize) -> MultiIndex {
    MultiIndex::new(vec![v])
}

/// Entries of `matmul(B, C)` by a plain triple loop over the dense boxes.
fn naive_product(b: &CoeffTensor, c: &CoeffTensor) -> BTreeMap<(MultiIndex, MultiIndex), Complex64> {
    let rows = MultiIndex::box_indices(b.trunc_left());
    let inner = MultiIndex::box_indices(b.trunc_right());
    let cols = MultiIndex::box_indices(c.trunc_right());
    let mut out = BTreeMap::new();
    for a in &rows {
        for g in &cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in &inner {
                acc += b.get(a, k) * c.get(k, g);
            }
            if acc != Complex64::new(0.0, 0.0) {
                out.insert((a.clone(), g.clone()), acc);
            }
        }
    }
    out
}

fn max_rel_error(a: &CoeffTensor, p: &BTreeMap<(MultiIndex, MultiIndex), Complex64>) -> f64 {
    let scale = a.max_abs();
    let mut worst = 0.0f64;
    for (al, be, v) in a.iter() {
        let w = p.get(&(al.clone(), be.clone())).copied().unwrap_or_default();
        worst = worst.max((w - v).norm() / v.norm());
    }
    for ((al, be), w) in p {
        if a.get(al, be) == Complex64::new(0.0, 0.0) {
            worst = worst.max(w.norm() / scale);
        }
    }
    worst
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (name, a) in seeded_inputs() {
        let start = Instant::now();
        // 0.5 is the generator rate of every input (and r̂ of the Mehler kernel).
        let pair = factorize_roumieu(&a, 0.5, 0.5).unwrap();
        let product = pair.product().unwrap();
        slowest = slowest.max(start.elapsed());
        let err = max_rel_error(&a, &naive_product(&pair.b, &pair.c));
        let lib_err = reconstruction_error(&a, &product);
        if err.max(lib_err) > worst {
            worst = err.max(lib_err);
        }
        if !(err <= 1e-12 && lib_err <= 1e-12) {
            return (false, format!("{name}: relative error {err:e} / {lib_err:e}"));
        }
    }
    let ok = slowest < Duration::from_secs(1);
    (ok, format!("max rel error {worst:.2e}, slowest {slowest:.2?} over 21 inputs"))
}

/// `Θ_N = max{|β| : |a_{α,β}| ≥ e^{-2(N+1)(λ(α)+λ(β))} for some α}`, −1 when empty.
fn brute_theta(a: &CoeffTensor, lam: &dyn Fn(&MultiIndex) -> f64, n: usize) -> i64 {
    let mut t = -1i64;
    for (al, be, v) in a.iter() {
        if v.norm() >= (-2.0 * (n as f64 + 1.0) * (lam(al) + lam(be))).exp() {
            t = t.max(be.modulus() as i64);
        }
    }
    t
}

/// Checks the block partition encoded in `pair` against an independent recomputation:
/// every β sits in exactly one block `I_j`, `|β| ≤ Θ_j + j`, and `c_β = e^{-jλ(β)}`.
fn partition_laws(a: &CoeffTensor, pair: &FactorPair, lam: &dyn Fn(&MultiIndex) -> f64) -> Result<(), String> {
    let (jmax, theta) = match &pair.params {
        FactorParams::Blocks { jmax, theta, .. } => (*jmax, theta.clone()),
        other => return Err(format!("unexpected params {other:?}")),
    };
    for (n, t) in theta.iter().enumerate() {
        if *t != brute_theta(a, lam, n) {
            return Err(format!("Θ_{n} = {t}, expected {}", brute_theta(a, lam, n)));
        }
    }
    for beta in MultiIndex::box_indices(a.trunc_right()) {
        let m = beta.modulus() as i64;
        let hits: Vec<usize> = (1..=jmax)
            .filter(|&j| m <= theta[j] + j as i64 && (1..j).all(|i| m > theta[i] + i as i64))
            .collect();
        if hits.len() != 1 {
            return Err(format!("β = {beta} lies in {} blocks", hits.len()));
        }
        let j = hits[0];
        let c = pair.c.get(&beta, &beta).re;
        let expect = (-(j as f64) * lam(&beta)).exp();
        if (c - expect).abs() > 1e-13 * expect.max(f64::MIN_POSITIVE) {
            return Err(format!("c at β = {beta} is {c:e}, block {j} expects {expect:e}"));
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let s_beurling = 1.0;
    let gs = move |b: &MultiIndex| index_weight(b, s_beurling);
    let poly = |b: &MultiIndex| 0.5 * (1.0 + (b.modulus() as f64).powi(2)).ln();
    let mut worst = 0.0f64;
    for (name, a) in seeded_inputs() {
        for (branch, pair, lam) in [
            ("beurling", factorize_beurling(&a, s_beurling).unwrap(), &gs as &dyn Fn(&MultiIndex) -> f64),
            ("schwartz", factorize_schwartz(&a, None).unwrap(), &poly as &dyn Fn(&MultiIndex) -> f64),
        ] {
            let err = max_rel_error(&a, &naive_product(&pair.b, &pair.c));
            worst = worst.max(err);
            if err > 1e-12 {
                return (false, format!("{name} {branch}: relative error {err:e}"));
            }
            if let Err(e) = partition_laws(&a, &pair, lam) {
                return (false, format!("{name} {branch}: {e}"));
            }
        }
    }
    (true, format!("max rel error {worst:.2e}; partition laws hold (Beurling s = {s_beurling})"))
}

fn criterion_3() -> Outcome {
    let a = mehler(0.5, 64).unwrap();
    let r_hat = estimate_decay(&a, 0.5).unwrap().r_hat;
    let pair = factorize_roumieu(&a, 0.5, 0.5).unwrap();
    let bound_a = check_bound(&a, 0.5, 0.5).unwrap();
    let bound_b = check_bound(&pair.b, 0.5, 0.25).unwrap();
    let bound_c = check_bound(&pair.c, 0.5, 0.25).unwrap();
    let rate_ok = (r_hat - 0.5).abs() <= 1e-6;
    let b_ok = bound_b <= bound_a;
    let c_ok = bound_c <= 1.0;
    (
        rate_ok && b_ok && c_ok,
        format!(
            "r_hat = {r_hat} ({}), B bound {bound_b:.6e} <= A bound {bound_a:.6e} ({}), C bound {bound_c:.6e} <= 1 ({})",
            if rate_ok { "ok" } else { "off" },
            if b_ok { "ok" } else { "violated" },
            if c_ok { "ok" } else { "violated" },
        ),
    )
}

fn mixed_tensor() -> CoeffTensor {
    // d_left = 1, d_right = 2 with Gaussian-type decay.
    let rows = MultiIndex::box_indices(&[6]);
    let cols = MultiIndex::box_indices(&[5, 5]);
    let mut entries = Vec::new();
    for a in &rows {
        for b in &cols {
            let decay = (-0.4 * (a.modulus() + b.modulus()) as f64).exp();
            let phase = (a.modulus() * 3 + b.entries()[0] + 2 * b.entries()[1]) as f64;
            entries.push((a.clone(), b.clone(), Complex64::from_polar(decay, phase)));
        }
    }
    CoeffTensor::from_entries(vec![6], vec![5, 5], entries).unwrap()
}

fn criterion_4() -> Outcome {
    let mut inputs = seeded_inputs();
    inputs.truncate(6);
    let check = |what: &str, c: &CoeffTensor, checked: &mut usize| -> Result<(), String> {
        *checked += 1;
        if is_positive_hermite_diagonal(c).0 {
            Ok(())
        } else {
            Err(format!("{what}: diagonal factor fails"))
        }
    };
    let run = || -> Result<usize, String> {
        let mut checked = 0;
        for (name, a) in &inputs {
            for (branch, s) in [(Branch::Roumieu, 0.5), (Branch::Beurling, 1.0), (Branch::Schwartz, 0.5)] {
                let pair = factorize(a, &FactorOptions::new(branch, s)).map_err(|e| e.to_string())?;
                check(&format!("{name} {branch:?}"), &pair.c, &mut checked)?;
                let chain = factor_chain(a, s, 4, branch).map_err(|e| e.to_string())?;
                for (k, f) in chain.factors.iter().enumerate().skip(1) {
                    check(&format!("{name} {branch:?} chain factor {k}"), f, &mut checked)?;
                }
                let mut opts = FactorOptions::new(branch, s);
                opts.d0 = Some(2);
                let ext = factorize(a, &opts).map_err(|e| e.to_string())?;
                check(&format!("{name} {branch:?} d0 = 2"), &ext.c, &mut checked)?;
                let order = is_positive_hermite_diagonal(&ext.c).1.tensor_order;
                if ext.tensor_order != Some(MultiIndex::zero(1)) || order != Some(MultiIndex::zero(1)) {
                    return Err(format!("{name} {branch:?}: d0 = 2 extension lacks the order-0 factor"));
                }
                let err = reconstruction_error(a, &ext.product().map_err(|e| e.to_string())?);
                if err > 1e-12 {
                    return Err(format!("{name} {branch:?}: extension error {err:e}"));
                }
            }
        }
        let m = mixed_tensor();
        for (branch, s) in [(Branch::Roumieu, 0.5), (Branch::Beurling, 1.0), (Branch::Schwartz, 0.5)] {
            let mut opts = FactorOptions::new(branch, s);
            opts.d0 = Some(1);
            let pair = factorize(&m, &opts).map_err(|e| e.to_string())?;
            if pair.diagonal != DiagonalSide::Left {
                return Err("d0 < d1 should put the diagonal on the left".into());
            }
            check(&format!("adjoint route {branch:?}"), pair.diagonal_factor(), &mut checked)?;
        }
        Ok(checked)
    };
    match run() {
        Ok(n) => (true, format!("{n} diagonal factors positive (3 branches, chains, d0 > d1 and d0 < d1 routes)")),
        Err(e) => (false, e),
    }
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> HermiteWeight {
    let vals: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.25..4.0)).collect();
    HermiteWeight::from_fn(1, n, |a| vals[a.entries()[0]]).unwrap()
}

fn random_tensor(rng: &mut ChaCha8Rng, nl: usize, nr: usize) -> CoeffTensor {
    let rate = rng.gen_range(0.1..0.8);
    let mut entries = Vec::new();
    for i in 0..=nl {
        for j in 0..=nr {
            let m = rng.gen::<f64>().sqrt() * (-rate * (i + j) as f64).exp();
            entries.push((one(i), one(j), Complex64::from_polar(m, rng.gen_range(0.0..2.0 * PI))));
        }
    }
    CoeffTensor::from_entries(vec![nl], vec![nr], entries).unwrap()
}

fn criterion_5() -> Outcome {
    let a = mehler(0.5, 64).unwrap();
    let unit = HermiteWeight::unit(1).unwrap();
    let hs = schatten_norm(&singular_values(&operator_matrix(&a, &unit, &unit).unwrap()), SchattenOrder::Finite(2.0));
    let exact = (-0.5f64).exp() * (1.0 - (-2.0f64).exp()).powf(-0.5);
    let rel = (hs - exact).abs() / exact;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut gap = 0.0f64;
    for _ in 0..100 {
        let (nl, nr) = (rng.gen_range(2..24), rng.gen_range(2..24));
        let t = random_tensor(&mut rng, nl, nr);
        let w1 = random_weight(&mut rng, nr);
        let w2 = random_weight(&mut rng, nl);
        let rep = hs_identity_check(&t, &w1, &w2).unwrap();
        gap = gap.max((rep.lhs - rep.rhs).abs());
    }
    (
        rel <= 1e-10 && gap <= 1e-12,
        format!("|T|_I2 = {hs:.10} vs {exact:.10} (rel {rel:.1e}); max weighted HS gap {gap:.1e} over 100 cases"),
    )
}

fn criterion_6() -> Outcome {
    let pairs = [
        (SchattenOrder::Finite(2.0), SchattenOrder::Finite(2.0)),
        (SchattenOrder::Finite(1.0), SchattenOrder::Infinity),
        (SchattenOrder::Finite(4.0), SchattenOrder::Finite(4.0 / 3.0)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut tightest = f64::INFINITY;
    for k in 0..100 {
        let (n1, n2, n3) = (rng.gen_range(2..16), rng.gen_range(2..16), rng.gen_range(2..16));
        let t1 = random_tensor(&mut rng, n2, n1);
        let t2 = random_tensor(&mut rng, n3, n2);
        let w = (random_weight(&mut rng, n1), random_weight(&mut rng, n2), random_weight(&mut rng, n3));
        for (p1, p2) in pairs {
            let rep = holder_check(&t1, &t2, (&w.0, &w.1, &w.2), p1, p2).unwrap();
            tightest = tightest.min(rep.rhs - rep.lhs);
            if !(rep.lhs <= rep.rhs + 1e-10) {
                return (false, format!("pair {k}, ({p1},{p2}): {} > {}", rep.lhs, rep.rhs));
            }
        }
    }
    (true, format!("300 checks, smallest slack {tightest:.2e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let (nl, nr) = (rng.gen_range(2..16), rng.gen_range(2..16));
        let t = random_tensor(&mut rng, nl, nr);
        let b1 = random_weight(&mut rng, nr);
        let b2 = random_weight(&mut rng, nl);
        let c1 = random_weight(&mut rng, nr);
        let c2 = random_weight(&mut rng, nl);
        let rep = embedding_monotonicity_check(&t, (&b1, &b2), (&c1, &c2)).unwrap();
        let sb = singular_values(&operator_matrix(&t, &b1, &b2).unwrap());
        let sc = singular_values(&operator_matrix(&t, &c1, &c2).unwrap());
        let idx = MultiIndex::box_indices(&[nr]);
        let ca = idx.iter().map(|a| b1.get(a).unwrap() / c1.get(a).unwrap()).fold(0.0, f64::max);
        let idx = MultiIndex::box_indices(&[nl]);
        let cb = idx.iter().map(|a| c2.get(a).unwrap() / b2.get(a).unwrap()).fold(0.0, f64::max);
        let holds = sb.sigma.iter().zip(&sc.sigma).all(|(x, y)| *y <= ca * cb * x + 1e-10);
        if !rep.pass || !holds || (rep.constant - ca * cb).abs() > 1e-12 * ca * cb {
            return (false, format!("trial {k}: observed {} vs C_a C_b {}", rep.lhs, ca * cb));
        }
        worst = worst.max(rep.lhs / rep.rhs);
    }
    (true, format!("50 trials, largest observed/C_a C_b = {worst:.4}"))
}

fn criterion_8() -> Outcome {
    let a = mehler(0.5, 64).unwrap();
    let chain = factor_chain(&a, 0.5, 5, Branch::Roumieu).unwrap();
    let product = chain.product().unwrap();
    let err = reconstruction_error(&a, &product);
    let unit = HermiteWeight::unit(1).unwrap();
    let sigma = singular_values(&operator_matrix(&product, &unit, &unit).unwrap());
    let fit = decay_fit(&sigma, 0.5).unwrap();
    let ratio = tail_ratio(&sigma, 0.1).unwrap();
    let sums = partial_sums(&sigma, 0.1);
    let total = *sums.last().unwrap();
    let ok = chain.factors.len() == 5
        && err <= 1e-10
        && (fit.rho - 1.0).abs() <= 1e-6
        && fit.r_squared >= 0.9999
        && ratio < 1.0;
    (
        ok,
        format!(
            "5 factors, error {err:.1e}; rho = {:.9}, r2 = {:.6}; sigma^0.1 tail ratio {ratio:.4}, sum {total:.4}",
            fit.rho, fit.r_squared
        ),
    )
}

fn h0_kernel(g: PhaseGrid) -> GridKernel {
    GridKernel::from_fn(g, |x, y| Complex64::new(PI.powf(-0.5) * (-(x * x + y * y) / 2.0).exp(), 0.0))
}

fn gaussian(g: PhaseGrid, x0: f64, xi0: f64, wx: f64, wxi: f64, tilt: f64) -> GridSymbol {
    GridSymbol::from_fn(g, move |x, xi| {
        Complex64::new(-wx * (x - x0).powi(2) - wxi * (xi - xi0).powi(2), tilt * x * xi).exp()
    })
}

fn criterion_9(suite_start: Instant, rest: Duration) -> Outcome {
    let g = PhaseGrid::default();
    let a = gaussian(g, 0.2, -0.1, 2.0, 0.4, 0.1);
    let mut round = 0.0f64;
    for t in [0.0, 0.5, 1.0] {
        let back = kernel_to_symbol(&symbol_to_kernel(&a, t).unwrap(), t).unwrap();
        round = round.max(back.max_diff(&a).unwrap());
    }
    let p = projector_symbol(g);
    let proj = symbol_to_kernel(&p, 0.5).unwrap().max_diff(&h0_kernel(g)).unwrap();
    let idem = sharp(&p, &p, 0.5).unwrap().max_diff(&p).unwrap();
    let b = gaussian(g, -0.5, 0.4, 0.9, 0.5, -0.1);
    let mut routes = 0.0f64;
    for (s, t) in [(0.5, 0.0), (0.2, 0.9)] {
        let direct = change_quantization(&b, s, t).unwrap();
        let via = kernel_to_symbol(&symbol_to_kernel(&b, s).unwrap(), t).unwrap();
        routes = routes.max(direct.max_diff(&via).unwrap());
    }
    let q = gaussian(g, 0.3, 0.2, 1.0, 0.7, 0.25);
    let there = change_quantization(&q, 0.5, 0.1).unwrap();
    let cycle = change_quantization(&there, 0.1, 0.5).unwrap().max_diff(&q).unwrap();
    let total = suite_start.elapsed() + rest;
    let ok = round <= 1e-8 && proj <= 1e-8 && idem <= 1e-6 && routes <= 1e-7 && cycle <= 1e-10
        && total < Duration::from_secs(60);
    (
        ok,
        format!(
            "round trip {round:.1e}, projector kernel {proj:.1e}, idempotence {idem:.1e}, routes {routes:.1e}, cycle {cycle:.1e}, suite {total:.1?}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let p = projector_symbol(PhaseGrid::default());
    let f = factorize_symbol(&p, 0.5, 0.5, Branch::Roumieu).unwrap();
    let e_proj = sharp(&f.a1, &f.a2, 0.5).unwrap().max_diff(&p).unwrap();

    let g = PhaseGrid::square(-12.0, 12.0, 384).unwrap();
    let k = coeffs_to_kernel_grid(&mehler(0.5, 64).unwrap(), &g).unwrap();
    let m = kernel_to_symbol(&k, 0.5).unwrap();
    let f = factorize_symbol(&m, 0.5, 0.5, Branch::Roumieu).unwrap();
    let e_mehler = sharp(&f.a1, &f.a2, 0.5).unwrap().max_diff(&m).unwrap();
    (
        e_proj <= 1e-6 && e_mehler <= 1e-6,
        format!("projector {e_proj:.1e}; Mehler(0.5) symbol on [-12,12]/384 {e_mehler:.1e}"),
    )
}

fn guarded<F: FnOnce() -> Outcome>(f: F) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        (false, format!("panicked: {msg}"))
    });
    (out, start.elapsed())
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(Outcome, Duration)> = vec![
        guarded(criterion_1),
        guarded(criterion_2),
        guarded(criterion_3),
        guarded(criterion_4),
        guarded(criterion_5),
        guarded(criterion_6),
        guarded(criterion_7),
        guarded(criterion_8),
    ];
    let tenth = guarded(criterion_10);
    let ninth = guarded(|| criterion_9(start, Duration::ZERO));
    results.push(ninth);
    results.push(tenth);
    let mut failed = 0;
    for (k, ((ok, detail), took)) in results.iter().enumerate() {
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2}: {} {detail} [{took:.2?}]", k + 1, if *ok { "PASS" } else { "FAIL" });
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
