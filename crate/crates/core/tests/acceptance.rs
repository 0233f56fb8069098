//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p blochsep --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use blochsep::bloch::{p_norm, purity_relation, to_bloch, BasisConvention, BlochVector};
use blochsep::catalog::{bound_entangled, isotropic, noisy_ghz, random_states, state_a, RandomKind};
use blochsep::certificates::{theorem3, theorem4, theorem6, u_state_decomposition, verify_decomposition};
use blochsep::characters::character_table;
use blochsep::criteria::{theorem2_check, Verdict};
use blochsep::geometry::{extremal_states, r_e, r_e_high_branch, r_e_low_branch, tightness_family};
use blochsep::pipeline::{analyze, AnalysisOptions};
use blochsep::ppt::{is_ppt, ppt_report};
use blochsep::witness::{build_witness, evaluate_witness, OffsetPreset, WitnessMode};
use blochsep::{from_bloch, DensityMatrix, SystemShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

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

/// Locates the flip of a predicate that is true at `lo` and false at `hi`.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<bool, String>) -> Result<f64, String> {
    ensure(f(lo)? && !f(hi)?, || format!("no flip in [{lo}, {hi}]"))?;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn tilde(rho: &DensityMatrix) -> Result<BlochVector, String> {
    to_bloch(rho, BasisConvention::Tilde).map_err(err)
}

fn entangled_by_theorem2(rho: &DensityMatrix) -> Result<bool, String> {
    Ok(theorem2_check(&tilde(rho)?.correlation_tensor()).verdict == Verdict::Entangled)
}

fn ac1_isotropic() -> Outcome {
    let mut notes = Vec::new();
    for d in [2usize, 3, 4] {
        let start = Instant::now();
        let threshold = 1.0 / (d as f64 + 1.0);
        let flip = bisect(0.0, 1.0, |a| Ok(!entangled_by_theorem2(&isotropic(d, a).map_err(err)?)?))?;
        ensure((flip - threshold).abs() < 1e-9, || format!("d={d}: theorem2 flips at {flip}, want {threshold}"))?;
        for a in [threshold - 1e-6, threshold + 1e-6] {
            let ent = entangled_by_theorem2(&isotropic(d, a).map_err(err)?)?;
            ensure(ent == (a > threshold), || format!("d={d}: wrong verdict at alpha={a}"))?;
        }
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(1), || format!("d={d}: took {elapsed:?}"))?;
        let mut note = format!("d={d} flip={flip:.12} ({elapsed:.0?})");
        if d <= 3 {
            let ppt_flip = bisect(0.0, 1.0, |a| is_ppt(&isotropic(d, a).map_err(err)?, &[0]).map_err(err))?;
            ensure((ppt_flip - threshold).abs() < 1e-9, || format!("d={d}: PPT flips at {ppt_flip}"))?;
            note.push_str(&format!(" ppt={ppt_flip:.12}"));
        }
        notes.push(note);
    }
    Ok(notes.join("; "))
}

fn ac2_state_a() -> Outcome {
    let top = 0.5f64.sqrt();
    let (mut certified, mut flagged) = (0, 0);
    for i in 1..=1000 {
        let a = top * i as f64 / 1000.0;
        let b = tilde(&state_a(a).map_err(err)?)?;
        let t3 = theorem3(&b).map_err(err)?.verdict.verdict == Verdict::SeparableCertified;
        let t2 = theorem2_check(&b.correlation_tensor()).verdict == Verdict::Entangled;
        ensure(t3 == (a <= 0.5 + 1e-9), || format!("theorem3 wrong at alpha={a}"))?;
        ensure(t2 == (a > 0.5 + 1e-9), || format!("theorem2 wrong at alpha={a}"))?;
        ensure(t2 != t3, || format!("gap or overlap at alpha={a}"))?;
        certified += t3 as usize;
        flagged += t2 as usize;
    }
    Ok(format!("1000 points: {certified} certified, {flagged} entangled, no gap, no overlap"))
}

fn certifies(
    rho: Result<DensityMatrix, blochsep::Error>,
    f: fn(&BlochVector) -> blochsep::Result<blochsep::Certification>,
) -> Result<bool, String> {
    let b = tilde(&rho.map_err(err)?)?;
    Ok(f(&b).map_err(err)?.verdict.verdict == Verdict::SeparableCertified)
}

fn ac3_ghz3() -> Outcome {
    let t4 = bisect(0.0, 1.0, |a| certifies(noisy_ghz(3, a), theorem4))?;
    ensure((t4 - 0.2).abs() < 1e-9, || format!("theorem4 flips at {t4}"))?;
    let t3 = bisect(0.0, 1.0, |a| certifies(noisy_ghz(3, a), theorem3))?;
    ensure((t3 - 1.0 / 7.0).abs() < 1e-9, || format!("theorem3 flips at {t3}"))?;

    let rho = noisy_ghz(3, 0.2).map_err(err)?;
    let cert = theorem4(&tilde(&rho)?).map_err(err)?;
    ensure(cert.verdict.verdict == Verdict::SeparableCertified, || "not certified at 0.2".into())?;
    ensure(cert.verdict.indices == vec![vec![3, 3, 3]], || format!("indices {:?}", cert.verdict.indices))?;
    let d = cert.decomposition.ok_or("missing decomposition")?;
    let report = verify_decomposition(&d, rho.matrix(), 1e-9);
    ensure(report.passed, || format!("{:?}", report.violations))?;
    Ok(format!(
        "theorem4 flip={t4:.12} at (3,3,3), theorem3 flip={t3:.12}, {} terms, distance {:.1e}",
        d.len(),
        report.reconstruction_distance
    ))
}

fn ac4_ghz4() -> Outcome {
    let flip = bisect(0.0, 1.0, |a| certifies(noisy_ghz(4, a), theorem6))?;
    ensure((flip - 1.0 / 9.0).abs() < 1e-9, || format!("theorem6 flips at {flip}"))?;
    for a in [0.03, 0.08, 1.0 / 9.0] {
        let rho = noisy_ghz(4, a).map_err(err)?;
        let cert = theorem6(&tilde(&rho)?).map_err(err)?;
        let lessmid = cert.verdict.detail["lessmid"];
        ensure((lessmid - 3.0 * a).abs() < 1e-12, || format!("lessmid {lessmid} at alpha={a}"))?;
        let d = cert.decomposition.ok_or_else(|| format!("not certified at {a}"))?;
        let report = verify_decomposition(&d, rho.matrix(), 1e-9);
        ensure(report.passed, || format!("alpha={a}: {:?}", report.violations))?;
    }
    Ok(format!("theorem6 flip={flip:.12}, lessmid=3*alpha, boundary decomposition verified"))
}

fn ac5_bound_entangled() -> Outcome {
    let qubits = SystemShape::qubits(3).map_err(err)?;
    let mut max_f: (f64, f64) = (f64::MIN, -1.0);
    for i in 0..=100 {
        let a = i as f64 / 100.0;
        let rho = bound_entangled(a, 1.0).map_err(err)?.with_shape(qubits.clone()).map_err(err)?;
        let b = tilde(&rho)?;
        let min = [b.get(&[0, 1, 3]), b.get(&[3, 0, 3]), b.get(&[3, 1, 0])]
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        let f = b.l1_norm() - 2.0 * min;
        let want = (1.0 + 15.0 * a + 4.0 * (1.0 - a * a).sqrt()) / (1.0 + 7.0 * a);
        ensure((f - want).abs() < 1e-10, || format!("a={a}: f={f}, want {want}"))?;
        if f > max_f.0 {
            max_f = (f, a);
        }
        let noisy = bound_entangled(a, 0.2).map_err(err)?.with_shape(qubits.clone()).map_err(err)?;
        let cert = theorem4(&tilde(&noisy)?).map_err(err)?;
        ensure(cert.verdict.verdict == Verdict::SeparableCertified, || format!("a={a}: not certified at alpha=1/5"))?;
    }
    ensure((max_f.0 - 5.0).abs() < 1e-10 && max_f.1 == 0.0, || format!("max f = {} at a = {}", max_f.0, max_f.1))?;
    Ok("f(a) matches on 101 points, max 5 at a=0, theorem4 certifies all at alpha=1/5".into())
}

fn ac6_tightness() -> Outcome {
    for n in 2..=4 {
        for eps in [1e-3, 1e-2, 1e-1] {
            let b = tightness_family(n, eps).map_err(err)?;
            let t = b.correlation_tensor();
            let norm = t.norm(1.0).map_err(err)?;
            ensure((norm - (1.0 + eps)).abs() < 1e-12, || format!("N={n} eps={eps}: ||T||_1 = {norm}"))?;
            ensure(theorem2_check(&t).verdict == Verdict::Entangled, || format!("N={n} eps={eps}: not flagged"))?;
        }
        let b = tightness_family(n, 0.0).map_err(err)?;
        let cert = theorem3(&b).map_err(err)?;
        ensure(cert.verdict.verdict == Verdict::SeparableCertified, || format!("N={n}: eps=0 not certified"))?;
    }
    Ok("N=2..4, eps in {1e-3,1e-2,1e-1} flagged; eps=0 certified".into())
}

fn ac7_extremal() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=5 {
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let b = tilde(&extremal_states(p, n).map_err(err)?)?;
            let got = p_norm(b.components(), p).map_err(err)?;
            let want = r_e(p, n).map_err(err)?;
            worst = worst.max((got - want).abs());
            ensure((got - want).abs() < 1e-10, || format!("p={p} N={n}: {got} vs {want}"))?;
        }
        ensure(r_e_low_branch(2.0, n) == r_e_high_branch(2.0, n), || format!("branches differ at p=2, N={n}"))?;
    }
    Ok(format!("25 (p, N) pairs, max deviation {worst:.1e}, branches equal at p=2"))
}

fn ac8_witness() -> Outcome {
    let start = Instant::now();
    let shapes = [vec![2, 2], vec![2, 2, 2], vec![3, 3], vec![2, 4]];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (s, dims) in shapes.iter().enumerate() {
        let shape = SystemShape::new(dims.clone()).map_err(err)?;
        for (i, rho) in random_states(&shape, RandomKind::Generic, 100 + s as u64, 125).map_err(err)?.iter().enumerate() {
            let b = tilde(rho)?;
            let mode = if i % 2 == 0 { WitnessMode::FullNorm } else { WitnessMode::CorrelationOnly };
            let a = if rng.random::<bool>() { rng.random::<f64>() * 2.0 } else { OffsetPreset::SignSlices.resolve(&b).map_err(err)? };
            let w = build_witness(&b, a, mode).map_err(err)?;
            let norm = match mode {
                WitnessMode::FullNorm => b.l1_norm(),
                WitnessMode::CorrelationOnly => b.correlation_tensor().norm(1.0).map_err(err)?,
            };
            let got = evaluate_witness(&w, rho).map_err(err)?;
            worst = worst.max((got - (norm - a)).abs());
            ensure((got - (norm - a)).abs() < 1e-10, || format!("{dims:?}: Tr(rho W)={got}, want {}", norm - a))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{count} states, max deviation {worst:.1e}, {elapsed:.2?}"))
}

fn ac9_characters() -> Outcome {
    for n in 1..=6 {
        let t = character_table(n).map_err(err)?;
        let size = t.size() as i64;
        for a in 0..t.size() {
            for b in 0..t.size() {
                let rows: i64 = (0..t.size()).map(|c| (t.entry(a, c) * t.entry(b, c)) as i64).sum();
                let cols: i64 = (0..t.size()).map(|r| (t.entry(r, a) * t.entry(r, b)) as i64).sum();
                let want = if a == b { size } else { 0 };
                ensure(rows == want && cols == want, || format!("level {n}: ({a},{b}) not orthogonal"))?;
            }
        }
    }
    let mut checked = 0;
    for (dims, conv) in [(vec![2, 2, 2], BasisConvention::Tilde), (vec![3, 3], BasisConvention::Check)] {
        let shape = SystemShape::new(dims.clone()).map_err(err)?;
        let zero = BlochVector::zeros(&shape, conv);
        for p in 0..shape.bloch_len() {
            let idx = zero.index_at(p);
            for sign in [1i8, -1] {
                let d = u_state_decomposition(&shape, &idx.0, sign, conv).map_err(err)?;
                let mut target = BlochVector::zeros(&shape, conv);
                target.set(&idx.0, sign as f64).map_err(err)?;
                let dist = d.expand().map_err(err)?.max_abs_diff(&from_bloch(&target));
                ensure(dist < 1e-12, || format!("{dims:?} {idx} {sign}: distance {dist:e}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("levels 1..6 orthogonal; {checked} u-state reconstructions within 1e-12"))
}

fn ac10_purity() -> Outcome {
    let mut worst = 0.0f64;
    for (s, dims) in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]].into_iter().enumerate() {
        let shape = SystemShape::new(dims).map_err(err)?;
        for rho in random_states(&shape, RandomKind::Generic, 1000 + s as u64, 200).map_err(err)? {
            let rel = purity_relation(&rho).map_err(err)?;
            worst = worst.max((rel.lhs - rel.rhs).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("800 states, max deviation {worst:.1e}"))
}

fn ac11_soundness() -> Outcome {
    let opts = AnalysisOptions::default();
    let mut states: Vec<(String, DensityMatrix)> = Vec::new();
    for i in 0..50 {
        let t = i as f64 / 49.0;
        for d in [2, 3, 4] {
            states.push((format!("isotropic d={d} alpha={t}"), isotropic(d, t).map_err(err)?));
        }
        for n in [3, 4] {
            states.push((format!("noisy_ghz N={n} alpha={t}"), noisy_ghz(n, t).map_err(err)?));
        }
        let a = t * 0.5f64.sqrt();
        states.push((format!("state_A alpha={a}"), state_a(a).map_err(err)?));
        for alpha in [0.1, 0.2, 0.5, 1.0] {
            let rho = bound_entangled(t, alpha).map_err(err)?;
            states.push((format!("bound_entangled a={t} alpha={alpha} [2,2,2]"), rho.with_shape(SystemShape::qubits(3).map_err(err)?).map_err(err)?));
            states.push((format!("bound_entangled a={t} alpha={alpha} [2,4]"), rho));
        }
    }
    let catalog_count = states.len();
    let shapes = [vec![2, 2], vec![2, 2, 2], vec![2, 2, 2, 2], vec![2, 3], vec![3, 3]];
    for (s, dims) in shapes.iter().enumerate() {
        let shape = SystemShape::new(dims.clone()).map_err(err)?;
        for kind in [RandomKind::Generic, RandomKind::ProductMixture] {
            for rho in random_states(&shape, kind, 50 + s as u64, 100).map_err(err)? {
                states.push((format!("random {kind:?} {dims:?}"), rho));
            }
        }
    }
    let random_count = states.len() - catalog_count;
    ensure(random_count >= 1000, || format!("only {random_count} random states"))?;

    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, rho) in &states {
        let a = analyze(rho, &opts).map_err(|e| format!("{name}: {e}"))?;
        *tally.entry(a.verdict.name()).or_default() += 1;
        let oracle = a.oracle.as_ref().ok_or("missing oracle")?;
        if a.verdict == Verdict::SeparableCertified {
            ensure(oracle.all_ppt, || format!("{name}: certified but not PPT"))?;
            let full = ppt_report(rho).map_err(err)?;
            ensure(full.all_ppt, || format!("{name}: certified but not PPT"))?;
        }
        if a.verdict == Verdict::Entangled && rho.shape().dims() == [2, 2] {
            ensure(!oracle.all_ppt, || format!("{name}: entangled but PPT"))?;
        }
        ensure(a.oracle_consistent, || format!("{name}: oracle inconsistent"))?;
    }
    Ok(format!("{catalog_count} catalog + {random_count} random states, verdicts {tally:?}"))
}

fn main() -> ExitCode {
    let criteria: [Check; 11] = [
        ("AC1 isotropic boundary", ac1_isotropic),
        ("AC2 state A characterization", ac2_state_a),
        ("AC3 noisy GHZ3", ac3_ghz3),
        ("AC4 noisy GHZ4", ac4_ghz4),
        ("AC5 bound entangled family", ac5_bound_entangled),
        ("AC6 l1 ball tightness", ac6_tightness),
        ("AC7 enclosing radius vs extremal states", ac7_extremal),
        ("AC8 witness identity", ac8_witness),
        ("AC9 character machinery", ac9_characters),
        ("AC10 purity relation", ac10_purity),
        ("AC11 global soundness", ac11_soundness),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({:.2?})", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
