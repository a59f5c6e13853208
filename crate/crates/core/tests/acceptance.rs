//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cet_core::entropy::{self, HModel};
use cet_core::mass::{phase, random_cbba};
use cet_core::pipeline::{self, Dataset, FusionConfig, Outcome, SweepConfig};
use cet_core::transform::{self, NegationOptions};
use cet_core::{Bba, Cbba64, CetError, Complex64, FocalSet, Frame, Method, RandomProfile};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn frame(n: usize, prefix: &str) -> Frame {
    Frame::with_size(n, prefix).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn example2() -> (Cbba64, Cbba64) {
    let x = Frame::new(["x1", "x2"]).unwrap();
    let y = Frame::new(["y1", "y2"]).unwrap();
    (
        Cbba64::from_labeled(x, &[(&["x1"], 0.2, 0.1), (&["x2"], 0.5, 0.1), (&["x1", "x2"], 0.3, -0.2)]).unwrap(),
        Cbba64::from_labeled(y, &[(&["y1"], 0.3, 0.2), (&["y2"], 0.2, 0.1), (&["y1", "y2"], 0.5, -0.3)]).unwrap(),
    )
}

fn additivity_anchor() -> Check {
    let start = Instant::now();
    let (mx, my) = example2();
    let hx = entropy::fcb(&mx).map_err(|e| e.to_string())?;
    let hy = entropy::fcb(&my).map_err(|e| e.to_string())?;
    let joint = transform::joint(&mx, &my).map_err(|e| e.to_string())?;
    let hj = entropy::fcb(&joint).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!("fcb(joint) = {hj:.6}, fcb(X) + fcb(Y) = {:.6}, {elapsed:?}", hx + hy);
    ensure(
        (hj - 2.8317).abs() <= 1e-3 && (hx + hy - 2.8317).abs() <= 1e-3 && elapsed < Duration::from_secs(1),
        detail,
    )
}

fn degeneration() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..10_000u64 {
        let n = 2 + (seed % 3) as usize;
        let m: Cbba64 = random_cbba(&frame(n, "e"), seed, RandomProfile::RealGeneral);
        let bba = Bba::try_from_cbba(&m).map_err(|e| e.to_string())?;
        let d = (entropy::fcb(&m).map_err(|e| e.to_string())? - entropy::fb(&bba).map_err(|e| e.to_string())?).abs();
        worst = worst.max(d);
    }
    let elapsed = start.elapsed();
    ensure(
        worst < 1e-12 && elapsed < Duration::from_secs(10),
        format!("max |fcb - fb| = {worst:.3e} over 10000 BBAs, {elapsed:?}"),
    )
}

fn probabilistic_consistency() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..10_000u64 {
        let n = 2 + (seed % 5) as usize;
        let m: Cbba64 = random_cbba(&frame(n, "e"), seed, RandomProfile::RealBayesian);
        let p: Vec<f64> = (0..n).map(|i| m.mass(FocalSet::singleton(i)).re).collect();
        let d = (entropy::fcb(&m).map_err(|e| e.to_string())? - entropy::shannon(&p).map_err(|e| e.to_string())?).abs();
        worst = worst.max(d);
    }
    ensure(worst < 1e-12, format!("max |fcb - shannon| = {worst:.3e} over 10000 Bayesian BBAs"))
}

fn maximum_model() -> Check {
    let mut worst_max = 0.0f64;
    let mut worst_over = f64::NEG_INFINITY;
    let mut lowest = f64::INFINITY;
    for n in 1..=6 {
        let f = frame(n, "e");
        let bound = ((1u64 << n) - 1) as f64;
        let bound = bound.log2();
        let uniform = Cbba64::vacuous(f.clone());
        let w = entropy::com_f(&uniform).map_err(|e| e.to_string())?;
        if w.weights.len() != (1 << n) - 1 {
            return Err(format!("n = {n}: Com_F of M(Θ) = 1 has {} entries", w.weights.len()));
        }
        let h = entropy::fcb(&uniform).map_err(|e| e.to_string())?;
        worst_max = worst_max.max((h - bound).abs());
        for seed in 0..1_000u64 {
            let profile = if seed % 2 == 0 { RandomProfile::ComplexGeneral } else { RandomProfile::RealGeneral };
            let m: Cbba64 = random_cbba(&f, seed, profile);
            let h = entropy::fcb(&m).map_err(|e| e.to_string())?;
            worst_over = worst_over.max(h - bound);
            lowest = lowest.min(h);
        }
    }
    ensure(
        worst_max < 1e-12 && worst_over <= 1e-12 && lowest >= -1e-12,
        format!("uniform error {worst_max:.3e}, max excess {worst_over:.3e}, min {lowest:.3e}"),
    )
}

fn cpbt_convergence() -> Check {
    let f = frame(2, "x");
    let m = Cbba64::from_labeled(f.clone(), &[(&["x1"], 0.1, -0.1), (&["x1", "x2"], 0.9, 0.1)]).unwrap();
    let pig = transform::cpbt(&m).com().map_err(|e| e.to_string())?;
    let mut limits = Vec::new();
    for p in [3.0, 4.0, 10.0] {
        let seq = transform::cpbt_iterate(&m, p, 200).map_err(|e| e.to_string())?;
        let last = seq.last().unwrap();
        let com = |s: FocalSet| last.commitment(s).unwrap();
        limits.push([com(FocalSet::singleton(0)), com(FocalSet::singleton(1)), com(f.full())]);
    }
    let spread = (0..3)
        .map(|j| {
            let v: Vec<f64> = limits.iter().map(|l| l[j]).collect();
            v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let mut gap = 0.0f64;
    for l in &limits {
        let s = l[0] + l[1];
        gap = gap.max((l[0] / s - pig[0]).abs()).max((l[1] / s - pig[1]).abs());
    }
    ensure(
        spread < 1e-6 && gap < 1e-6,
        format!("limit spread across p = {spread:.3e}, |limit - cpbt| = {gap:.3e}, Com = {:.6?}", limits[0]),
    )
}

fn interference_identity() -> Check {
    let mut worst = 0.0f64;
    for seed in 0..10_000u64 {
        let n = 2 + (seed % 4) as usize;
        let f = frame(n, "e");
        let m: Cbba64 = random_cbba(&f, seed, RandomProfile::ComplexGeneral);
        let polar: Vec<(FocalSet, f64, f64)> = m.iter().map(|(s, z)| (s, z.norm(), phase(z).unwrap())).collect();
        for b in f.power_set().unwrap() {
            let inside: Vec<&(FocalSet, f64, f64)> = polar.iter().filter(|(s, _, _)| s.is_subset_of(b)).collect();
            let mut cosine = 0.0;
            for (i, (_, mi, ti)) in inside.iter().enumerate() {
                for (j, (_, mj, tj)) in inside.iter().enumerate() {
                    if i != j {
                        cosine += mi * mj * (ti - tj).cos();
                    }
                }
            }
            worst = worst.max((m.interference(b) - cosine).abs());
        }
    }
    ensure(worst < 1e-12, format!("max |modulus form - cosine form| = {worst:.3e}"))
}

fn example3() -> Result<[Cbba64; 3], String> {
    let f = frame(6, "x");
    let build = |sets: [[&str; 2]; 3]| {
        Cbba64::from_labeled(
            f.clone(),
            &[(&sets[0], 0.2, 0.1), (&sets[1], 0.6, 0.2), (&sets[2], 0.2, -0.3)],
        )
        .map_err(|e| e.to_string())
    };
    Ok([
        build([["x1", "x2"], ["x3", "x4"], ["x5", "x6"]])?,
        build([["x1", "x2"], ["x2", "x3"], ["x3", "x6"]])?,
        build([["x1", "x2"], ["x2", "x3"], ["x5", "x6"]])?,
    ])
}

fn intersection_sensitivity() -> Check {
    let [m1, m2, m3] = example3()?;
    let h: Vec<f64> = [&m1, &m2, &m3].iter().map(|m| entropy::fcb(m).unwrap()).collect();
    let mut spread = 0.0f64;
    for model in [HModel::Cardinality, HModel::DengDenominator, HModel::ZhouFactor] {
        let g: Vec<f64> = [&m1, &m2, &m3].iter().map(|m| entropy::generalized(m, model).unwrap()).collect();
        spread = spread.max((g[0] - g[1]).abs()).max((g[0] - g[2]).abs());
    }
    ensure(
        h[0] > h[2] && h[2] > h[1] && spread < 1e-12,
        format!(
            "fcb M1 = {:.4}, M3 = {:.4}, M2 = {:.4}; Pal/Deng/Zhou spread {spread:.3e}",
            h[0], h[2], h[1]
        ),
    )
}

fn negation_monotonicity() -> Check {
    let f = frame(2, "e");
    let mut failures = 0;
    let mut worst_drop = 0.0f64;
    let mut worst_tail = 0.0f64;
    for seed in 0..100u64 {
        let profile = if seed % 2 == 0 { RandomProfile::RealGeneral } else { RandomProfile::ComplexGeneral };
        let mut m: Cbba64 = random_cbba(&f, seed, profile);
        let mut h = vec![entropy::fcb(&m).map_err(|e| e.to_string())?];
        for _ in 0..10 {
            m = transform::exp_negation(&m, NegationOptions::default()).map_err(|e| e.to_string())?;
            h.push(entropy::fcb(&m).map_err(|e| e.to_string())?);
        }
        let drop = h.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
        let tail = (h[10] - h[9]).abs();
        worst_drop = worst_drop.max(drop);
        worst_tail = worst_tail.max(tail);
        if drop > 1e-9 || tail >= 1e-4 {
            failures += 1;
        }
    }
    ensure(
        failures == 0,
        format!("{failures}/100 sequences not non-decreasing or unconverged; largest step decrease {worst_drop:.4}, largest step-10 delta {worst_tail:.3e}"),
    )
}

fn decomposition_grid() -> Check {
    let f = frame(2, "e");
    let (e1, full) = (FocalSet::singleton(0), f.full());
    let mut points = 0;
    let mut exact = true;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut lowest = f64::INFINITY;
    for i in 0..21 {
        for j in 0..21 {
            let x = i as f64 / 20.0;
            let y = -1.0 + j as f64 / 10.0;
            let Ok(m) = Cbba64::new(f.clone(), [(e1, c(1.0 - x, -y)), (full, c(x, y))]) else { continue };
            points += 1;
            let d = entropy::decomposition(&m).map_err(|e| e.to_string())?;
            exact &= d.discord + d.nonspecificity == d.total;
            worst_excess = worst_excess.max(d.discord - d.total);
            lowest = lowest.min(d.discord).min(d.nonspecificity);
        }
    }
    ensure(
        exact && worst_excess <= 1e-12 && lowest >= -1e-12,
        format!("{points} valid grid points; identity exact: {exact}; max discord - total {worst_excess:.3e}; min part {lowest:.3e}"),
    )
}

fn fusion_scenario() -> Result<Vec<Cbba64>, String> {
    let f = Frame::new(["T1", "T2", "T3"]).unwrap();
    let all: &[&str] = &["T1", "T2", "T3"];
    let sources: [&[(&[&str], f64, f64)]; 5] = [
        &[(&["T1"], 0.40, 0.05), (&["T2"], 0.30, -0.05), (&["T3"], 0.10, 0.0), (all, 0.20, 0.0)],
        &[(&["T1"], 0.20, 0.0), (&["T2"], 0.50, 0.05), (&["T1", "T3"], 0.10, -0.05), (all, 0.20, 0.0)],
        &[(&["T1"], 0.50, -0.05), (&["T3"], 0.20, 0.0), (&["T2", "T3"], 0.10, 0.05), (all, 0.20, 0.0)],
        &[(&["T1"], 0.55, 0.0), (&["T2"], 0.15, 0.05), (all, 0.30, -0.05)],
        &[(&["T1"], 0.60, 0.05), (&["T3"], 0.20, -0.05), (all, 0.20, 0.0)],
    ];
    sources.iter()
        .map(|s| Cbba64::from_labeled(f.clone(), s).map_err(|e| e.to_string()))
        .collect()
}

/// Dempster-style fold written out over the full power set.
fn brute_combine(a: &Cbba64, b: &Cbba64) -> BTreeMap<u32, Complex64> {
    let full = a.frame().full().bits();
    let mut k = c(0.0, 0.0);
    let mut out = BTreeMap::new();
    for x in 1..=full {
        for y in 1..=full {
            let p = a.mass(FocalSet::from_bits(x)) * b.mass(FocalSet::from_bits(y));
            if x & y == 0 {
                k += p;
            } else {
                *out.entry(x & y).or_insert(c(0.0, 0.0)) += p;
            }
        }
    }
    out.values_mut().for_each(|z| *z /= c(1.0, 0.0) - k);
    out
}

fn brute_fcb(m: &BTreeMap<u32, Complex64>, full: u32) -> f64 {
    let mf: Vec<f64> = (1..=full)
        .map(|a| {
            m.iter()
                .filter(|(b, _)| *b & a == a)
                .map(|(b, z)| z / ((1u32 << b.count_ones()) - 1) as f64)
                .sum::<Complex64>()
                .norm()
        })
        .collect();
    let total: f64 = mf.iter().sum();
    mf.iter()
        .filter(|v| **v >= 1e-15)
        .map(|v| {
            let p = v / total;
            -p * p.log2()
        })
        .sum()
}

fn fusion_engine() -> Check {
    let evidence = fusion_scenario()?;
    let cfg = FusionConfig::default();
    let trace = pipeline::fuse_until_decision(&evidence, &cfg).map_err(|e| e.to_string())?;
    let Outcome::Accepted { step, target } = trace.outcome else {
        return Err(format!("no acceptance: {:?}", trace.outcome));
    };
    let mut fused: BTreeMap<u32, Complex64> = evidence[0].iter().map(|(s, z)| (s.bits(), z)).collect();
    let mut worst = 0.0f64;
    let mut first_true = None;
    for (t, ev) in evidence.iter().enumerate().skip(1) {
        let cur = Cbba64::collect(evidence[0].frame().clone(), fused.iter().map(|(b, z)| (FocalSet::from_bits(*b), *z)))
            .map_err(|e| e.to_string())?;
        fused = brute_combine(&cur, ev);
        let h = brute_fcb(&fused, 0b111);
        let top = (0..3)
            .map(|i| fused.get(&(1 << i)).map_or(0.0, |z| z.norm()))
            .fold(0.0, f64::max);
        if first_true.is_none() && top >= cfg.sigma && h <= cfg.epsilon {
            first_true = Some(t);
        }
        if let Some(s) = trace.steps.iter().find(|s| s.step == t) {
            worst = worst.max((s.entropy - h).abs());
        }
    }
    let entropies: Vec<String> = trace.steps.iter().map(|s| format!("{:.4}", s.entropy)).collect();
    ensure(
        first_true == Some(step) && target == 0 && step > 1 && worst < 1e-12,
        format!("accepted at step {step} (oracle {first_true:?}), target T{}, fcb trace {entropies:?}, recompute error {worst:.3e}", target + 1),
    )
}

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn classification() -> Check {
    let d = pipeline::two_gaussians(200, 2, 3.0, 0).map_err(|e| e.to_string())?;
    let cfg = SweepConfig {
        ratios: vec![0.5],
        methods: vec![Method::Fcb],
        seed: 0,
        ..Default::default()
    };
    let a = pipeline::accuracy_sweep(&d, &cfg).map_err(|e| e.to_string())?;
    let b = pipeline::accuracy_sweep(&d, &cfg).map_err(|e| e.to_string())?;
    let same = a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| x.accuracy.map(f64::to_bits) == y.accuracy.map(f64::to_bits));
    let acc = a[0].accuracy.unwrap_or(0.0);

    let bc = Dataset::from_path(&data_path("breast_cancer.csv"), "diagnosis").map_err(|e| e.to_string())?;
    let start = Instant::now();
    let sweep = SweepConfig {
        methods: vec![Method::Fcb, Method::ComplexDeng],
        ..Default::default()
    };
    let rows = pipeline::accuracy_sweep(&bc, &sweep).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let fcb_rows: Vec<f64> = rows.iter().filter(|r| r.method == Method::Fcb).filter_map(|r| r.accuracy).collect();
    let mean = fcb_rows.iter().sum::<f64>() / fcb_rows.len().max(1) as f64;
    ensure(
        acc >= 0.9 && same && rows.len() == 198 && elapsed < Duration::from_secs(300),
        format!(
            "synthetic accuracy {acc:.3}, reproducible {same}; breast cancer {} rows in {elapsed:.1?}, mean fcb accuracy {mean:.3}",
            rows.len()
        ),
    )
}

fn combination_rule() -> Check {
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for seed in 0..1_000u64 {
        let n = 2 + (seed % 3) as usize;
        let f = frame(n, "e");
        let a: Cbba64 = random_cbba(&f, 2 * seed, RandomProfile::ComplexGeneral);
        let b: Cbba64 = random_cbba(&f, 2 * seed + 1, RandomProfile::ComplexGeneral);
        match (transform::combine(&a, &b), transform::combine(&b, &a)) {
            (Ok((ab, kab)), Ok((ba, kba))) => {
                worst = worst.max((kab - kba).norm());
                for s in f.power_set().unwrap() {
                    worst = worst.max((ab.mass(s) - ba.mass(s)).norm());
                }
            }
            (Err(_), Err(_)) => {}
            _ => mismatched += 1,
        }
    }

    // threshold sweep around |1 − K| = 1e-12
    let f = frame(2, "e");
    let a = Cbba64::from_labeled(f.clone(), &[(&["e1"], 1.0, 0.0)]).unwrap();
    let mut threshold_ok = true;
    for delta in [0.0, 1e-14, 5e-13, 2e-12, 1e-11, 1e-6, 0.5] {
        let b = Cbba64::collect(f.clone(), [(FocalSet::singleton(1), c(1.0 - delta, 0.0)), (FocalSet::singleton(0), c(delta, 0.0))])
            .unwrap();
        let k = a.mass(FocalSet::singleton(0)) * b.mass(FocalSet::singleton(1));
        let expect_conflict = (c(1.0, 0.0) - k).norm() < 1e-12;
        let got = matches!(transform::combine(&a, &b), Err(CetError::TotalConflict { .. }));
        threshold_ok &= got == expect_conflict;
    }
    let (same, k) = transform::combine(&a, &a).map_err(|e| e.to_string())?;
    let identity = same == a && k == c(0.0, 0.0);
    let e2 = Cbba64::from_labeled(f, &[(&["e2"], 1.0, 0.0)]).unwrap();
    let conflict = matches!(transform::combine(&a, &e2), Err(CetError::TotalConflict { .. }));
    ensure(
        worst < 1e-12 && mismatched == 0 && threshold_ok && identity && conflict,
        format!("commutativity error {worst:.3e}; threshold ok {threshold_ok}; identity {identity}; total conflict {conflict}"),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("additivity anchor", additivity_anchor),
        ("degeneration to FB entropy", degeneration),
        ("probabilistic consistency", probabilistic_consistency),
        ("maximum and range", maximum_model),
        ("pignistic iteration convergence", cpbt_convergence),
        ("interference identity", interference_identity),
        ("intersection sensitivity", intersection_sensitivity),
        ("monotonicity under negation", negation_monotonicity),
        ("discord / non-specificity split", decomposition_grid),
        ("fusion engine", fusion_engine),
        ("classification", classification),
        ("combination rule", combination_rule),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
