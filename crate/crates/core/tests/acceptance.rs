//! Acceptance criteria. Runs without the libtest harness so each criterion prints
//! exactly one PASS/FAIL line; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{periodic_mixture, random_domain, random_measure, ratio, CAP};
use extlab::corpus::{
    binary_counter_measure, ca_to_sft, disconnected_counterexample, elementary_rule, pseudolattice_measure,
    robinson_tileset, RobinsonReading, ROBINSON_LETTERS,
};
use extlab::extension::{
    admissible_patterns, build_window_polytope, compute_h, enumerate_periodic_configs, epsilon_bound, h_bounds,
    periodic_config_search, periodic_extension, pullback_periodic, refute_nonextendible, sft_emptiness, Method,
    PeriodicSearch, PeriodicVerdict, SftVerdict, TorusMeasure, WindowSchedule, WordSet,
};
use extlab::harmonic::{check_extension_fourier, check_stationarity_fourier, fourier_transform, inverse_fourier};
use extlab::lattice::{envelope_for, translates_inside, verify_envelope};
use extlab::lp::enumerate_vertices;
use extlab::markov::MarkovExtension;
use extlab::measure::{entropy_chain_refute, finite_window_entropy, tv_distance, ChainVerdict};
use extlab::{Caps, Domain, Envelope, EnvelopeCheck, FiniteModule, LatticePoint, Measure, PeriodVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn period(p: &[i64]) -> PeriodVector {
    PeriodVector::new(p.to_vec()).unwrap()
}

fn markov_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut windows = 0;
    for case in 0..50 {
        let u = rng.random_range(1..=3i64);
        let a = rng.random_range(2..=3u32);
        let base_dom = Domain::interval(0, u);
        let base = periodic_mixture(&base_dom, a, &mut rng);
        let ext = MarkovExtension::new(base.clone()).map_err(|e| e.to_string())?;
        for n in (u as usize + 1)..=7 {
            let w = ext.window_measure(n, CAP).map_err(|e| e.to_string())?;
            for k in translates_inside(&base_dom, w.domain()) {
                let m = w.marginal(&base_dom.shift(&k).unwrap()).unwrap();
                ensure(m.masses() == base.masses(), || format!("case {case}: N={n}, translate {k} differs from the base"))?;
            }
            windows += 1;
        }
    }
    Ok(format!("50 bases, {windows} windows, every translate marginal exact"))
}

fn maximal_entropy() -> Check {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pair = Domain::interval(0, 1);
    let mut bases = vec![Measure::from_dense(pair.clone(), 2, [3, 1, 1, 3].map(|p| ratio(p, 8)).to_vec()).unwrap()];
    bases.extend((0..4).map(|_| periodic_mixture(&pair, 2, &mut rng)));
    let mut vertices = 0;
    let mut worst = f64::NEG_INFINITY;
    for (i, base) in bases.iter().enumerate() {
        let ext = MarkovExtension::new(base.clone()).unwrap();
        for n in 3..=4 {
            let w = Domain::interval(0, n - 1);
            let h_markov = finite_window_entropy(&ext.window_measure(n as usize, CAP).unwrap());
            let poly = build_window_polytope(base, &w, &caps).map_err(|e| e.to_string())?;
            let vs = enumerate_vertices(&poly.system, 40, 7 + i as u64, caps.pivot_limit).map_err(|e| e.to_string())?;
            for x in &vs {
                let nu = poly.measure_from_point(x, CAP).map_err(|e| e.to_string())?;
                let h = finite_window_entropy(&nu);
                worst = worst.max(h - h_markov);
                ensure(h <= h_markov + 1e-9, || format!("base {i}, N={n}: vertex entropy {h} > Markov {h_markov}"))?;
            }
            vertices += vs.len();
        }
    }
    ensure(vertices >= 50, || format!("only {vertices} vertices found"))?;
    Ok(format!("{vertices} vertices, max H(vertex) - H(Markov) = {worst:.3e}"))
}

fn disconnected() -> Check {
    let mu = disconnected_counterexample(2, &[ratio(1, 2), ratio(1, 2)]).unwrap();
    let report = refute_nonextendible(&mu, &WindowSchedule::Boxes { max_side: 6 }, &Caps::default())
        .map_err(|e| e.to_string())?;
    ensure(report.is_refuted(), || format!("verdict {:?}", report.verdict))?;
    ensure(report.window == Some(Domain::interval(0, 3)), || format!("refuted at {:?}", report.window))?;
    match entropy_chain_refute(&mu, 3).map_err(|e| e.to_string())? {
        ChainVerdict::Refuted { window, .. } => {
            Ok(format!("refuted at {window} by {:?}; entropy chain agrees", report.method.unwrap_or(Method::Lp)))
        }
        ChainVerdict::Unknown => Err("entropy chain returned Unknown".into()),
    }
}

fn pseudolattice() -> Check {
    let mu = pseudolattice_measure().map_err(|e| e.to_string())?;
    ensure(mu.is_locally_stationary().passed(), || "not locally stationary".into())?;
    let t = WordSet::support_of(&mu);
    let windows: Vec<Domain> = (1..=6).map(|n| Domain::cube(2, n)).collect();
    let side = match sft_emptiness(&t, &windows, Caps::default().node_limit).map_err(|e| e.to_string())? {
        SftVerdict::Empty { window } => window.side_lengths().unwrap()[0],
        v => return Err(format!("tiling search: {v:?}")),
    };
    ensure(side <= 6, || format!("empty only at side {side}"))?;
    let report = refute_nonextendible(&mu, &WindowSchedule::Boxes { max_side: 6 }, &Caps::default())
        .map_err(|e| e.to_string())?;
    ensure(report.is_refuted(), || format!("refute returned {:?}", report.verdict))?;
    Ok(format!("stationary; SFT empty at B({side}); refuted by {:?}", report.method.unwrap_or(Method::Lp)))
}

fn periodic() -> Check {
    let caps = Caps::default();
    let u = Domain::cube(2, 2);
    let mu = Measure::uniform(u.clone(), 2, CAP).unwrap();
    let out = periodic_extension(&mu, &period(&[4, 4]), &caps).map_err(|e| e.to_string())?;
    let PeriodicVerdict::Feasible(nu) = out.verdict else {
        return Err(format!("uniform product at (4,4): {:?}", out.verdict));
    };
    ensure(pullback_periodic(&nu, &u, CAP).unwrap() == mu, || "pullback to U differs".into())?;
    let big = Domain::cube(2, 3);
    let pulled = pullback_periodic(&nu, &big, CAP).unwrap();
    for k in translates_inside(&u, &big) {
        ensure(pulled.marginal(&u.shift(&k).unwrap()).unwrap().masses() == mu.masses(), || format!("translate {k}"))?;
    }

    let counter = binary_counter_measure(3).unwrap();
    let wide = periodic_extension(&counter, &period(&[4, 8]), &caps).map_err(|e| e.to_string())?;
    ensure(matches!(wide.verdict, PeriodicVerdict::Feasible(_)), || format!("counter k=3 at (4,8): {:?}", wide.verdict))?;
    let short = periodic_extension(&counter, &period(&[4, 4]), &caps).map_err(|e| e.to_string())?;
    if let PeriodicVerdict::Feasible(_) = short.verdict {
        let configs = enumerate_periodic_configs(&WordSet::support_of(&counter), &period(&[4, 4]), 10_000, caps.node_limit)
            .map_err(|e| e.to_string())?;
        return Err(format!(
            "uniform (4,4) ok, counter k=3 (4,8) feasible, but counter k=3 at (4,4) is Feasible, expected Infeasible: \
             {} admissible 4x4 periodic configurations exist because rows alias under separator rotation",
            configs.len()
        ));
    }
    ensure(short.verdict == PeriodicVerdict::Infeasible, || format!("counter k=3 at (4,4): {:?}", short.verdict))?;
    Ok("uniform (4,4) feasible with exact pullback; counter k=3 feasible at (4,8), infeasible at (4,4)".into())
}

fn epsilon_ball() -> Check {
    let caps = Caps::default();
    let z4 = FiniteModule::new(period(&[4]));
    let u = Domain::interval(0, 1);
    let h = compute_h(&z4, &u, 2).map_err(|e| e.to_string())?;
    ensure(h == 9, || format!("H = {h}"))?;
    let nu = TorusMeasure::uniform(z4, 2, CAP).unwrap();
    let eps = epsilon_bound(&nu, &u).map_err(|e| e.to_string())?;
    ensure(eps == ratio(1, 144), || format!("epsilon = {eps}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mu = Measure::uniform(u.clone(), 2, CAP).unwrap();
    let radius = ratio(1, 288);
    for i in 0..20 {
        let sigma = periodic_mixture(&u, 2, &mut rng);
        let t = ratio(1, rng.random_range(600..=6000));
        let near = extlab::measure::convex_combine(&mu, &sigma, &t).unwrap();
        let d = tv_distance(&near, &mu).unwrap();
        ensure(d < radius, || format!("perturbation {i} at distance {d}"))?;
        let out = periodic_extension(&near, &period(&[4]), &caps).map_err(|e| e.to_string())?;
        ensure(matches!(out.verdict, PeriodicVerdict::Feasible(_)), || format!("perturbation {i}: {:?}", out.verdict))?;
    }

    for i in 0..20 {
        let dim = rng.random_range(1..=2usize);
        let periods: Vec<i64> = (0..dim).map(|_| rng.random_range(2..=if dim == 1 { 6 } else { 3 })).collect();
        let hi: Vec<i64> = periods.iter().map(|p| p - 1).collect();
        let cube = Domain::boxed(&vec![0; dim], &hi);
        let pts: Vec<LatticePoint> = cube.points().iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        let uu = if pts.is_empty() { Domain::new(dim, vec![cube.points()[0].clone()]).unwrap() } else { Domain::new(dim, pts).unwrap() };
        let a = rng.random_range(2..=3u32);
        let m = FiniteModule::new(period(&periods));
        let h = compute_h(&m, &uu, a).map_err(|e| e.to_string())? as u128;
        let (ba, bb) = h_bounds(&m, &uu, a);
        ensure(h <= ba && h <= bb, || format!("pair {i}: H = {h} above bounds ({ba}, {bb})"))?;
    }
    Ok("H = 9, eps = 1/144, 20 perturbations feasible at P=(4), bounds hold on 20 pairs".into())
}

fn envelopes() -> Check {
    let cube = Domain::cube(2, 3);
    let mut checked = 0;
    for mask in 1u64..(1 << 9) {
        let u = cube.subset_by_mask(mask);
        let e = envelope_for(&u).map_err(|e| e.to_string())?;
        let r = verify_envelope(&e, &u, u.len()).map_err(|e| e.to_string())?;
        ensure(r == EnvelopeCheck::Pass, || format!("U = {u}: {r:?}"))?;
        checked += 1;
    }
    for n1 in 3..=4 {
        let u = Domain::boxed(&[1, 1], &[n1, 1]);
        let e = Envelope::new(FiniteModule::new(period(&[n1, 1])));
        match verify_envelope(&e, &u, u.len()).map_err(|e| e.to_string())? {
            EnvelopeCheck::Fail { subset, module_shift } => {
                let v1 = LatticePoint::new(vec![1, 1]);
                let v2 = LatticePoint::new(vec![2, 1]);
                let v3 = LatticePoint::new(vec![n1, 1]);
                ensure(subset == Domain::new(2, vec![v1.clone(), v2]).unwrap(), || format!("witness {subset}"))?;
                ensure(v1.add(&LatticePoint::new(module_shift.clone())) == v3, || format!("shift {module_shift:?}"))?;
            }
            r => return Err(format!("undoubled row N1={n1}: {r:?}")),
        }
    }
    Ok(format!("{checked} subsets of [0..2]^2 pass; undoubled rows fail with witness {{v1,v2}} -> v3"))
}

fn harmonic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let (mut stationary, mut extensions) = (0, 0);
    for i in 0..200 {
        let a = rng.random_range(2..=3u32);
        let w = if rng.random_bool(0.5) { random_domain(2, 0, 1, 2, &mut rng) } else { random_domain(1, 0, 3, 2, &mut rng) };
        let mu = if rng.random_bool(0.5) { periodic_mixture(&w, a, &mut rng) } else { random_measure(&w, a, &mut rng) };
        let exact = mu.is_locally_stationary().passed();
        let fourier = check_stationarity_fourier(&mu, CAP).map_err(|e| e.to_string())?.passed();
        ensure(exact == fourier, || format!("measure {i}: exact {exact}, Fourier {fourier}"))?;
        stationary += exact as usize;

        let sub = Domain::new(w.dim(), w.points().iter().take(1.max(w.len() / 2)).cloned().collect()).unwrap();
        let mu_u = if rng.random_bool(0.5) { mu.marginal(&sub).unwrap() } else { random_measure(&sub, a, &mut rng) };
        let exact = mu.marginal(&sub).unwrap() == mu_u;
        let fourier = check_extension_fourier(&mu_u, &mu, CAP).map_err(|e| e.to_string())?.passed();
        ensure(exact == fourier, || format!("measure {i}: marginal equality {exact}, Fourier {fourier}"))?;
        extensions += exact as usize;

        let back = inverse_fourier(&fourier_transform(&mu, CAP).unwrap()).map_err(|e| e.to_string())?;
        for (x, y) in mu.masses().iter().zip(&back.masses) {
            worst = worst.max((x.to_f64().unwrap() - y).abs());
        }
    }
    ensure(worst < 1e-12, || format!("round trip error {worst:e}"))?;
    Ok(format!("200 measures ({stationary} stationary, {extensions} true marginals) agree; round trip error {worst:.1e}"))
}

fn eca() -> Check {
    let rule = elementary_rule(110);
    let (_, ws) = ca_to_sft(2, &Domain::interval(-1, 1), &rule).map_err(|e| e.to_string())?;
    ensure(ws.len() == 8, || format!("{} words", ws.len()))?;
    let w = Domain::boxed(&[0, 0], &[5, 1]);
    let got: BTreeSet<Vec<u32>> =
        admissible_patterns(&ws, &w, 10_000, 1 << 24).map_err(|e| e.to_string())?.into_iter().collect();
    let mut expected = BTreeSet::new();
    for x in 0u32..64 {
        let bottom: Vec<u32> = (0..6).map(|i| (x >> (5 - i)) & 1).collect();
        for ends in 0u32..4 {
            let mut top = [ends >> 1, 0, 0, 0, 0, ends & 1];
            for i in 1..5 {
                top[i] = rule[(4 * bottom[i - 1] + 2 * bottom[i] + bottom[i + 1]) as usize];
            }
            // box points are ordered (x, t) lexicographically
            expected.insert((0..6).flat_map(|i| [bottom[i], top[i]]).collect::<Vec<u32>>());
        }
    }
    ensure(got == expected, || format!("{} patterns vs {} by brute force", got.len(), expected.len()))?;
    Ok(format!("{} admissible 6x2 blocks, identical to brute force", got.len()))
}

fn robinson() -> Check {
    let node_limit = Caps::default().node_limit;
    let mut readings = vec![RobinsonReading::Distinct];
    readings.extend(ROBINSON_LETTERS.iter().take(7).map(|&c| RobinsonReading::Typo(c)));
    let windows: Vec<Domain> = (1..=6).map(|n| Domain::cube_from(2, 1, n)).collect();
    let mut summary = Vec::new();
    for reading in readings {
        let t = robinson_tileset(reading).map_err(|e| e.to_string())?;
        for p1 in 1..=4 {
            for p2 in 1..=4 {
                match periodic_config_search(&t, &period(&[p1, p2]), node_limit).map_err(|e| e.to_string())? {
                    PeriodicSearch::NoneExists => {}
                    other => return Err(format!("{reading:?}, P=({p1},{p2}): {other:?}")),
                }
            }
        }
        match sft_emptiness(&t, &windows, node_limit).map_err(|e| e.to_string())? {
            SftVerdict::Unknown { largest_window: Some(w), reason: None } if w == windows[5] => {}
            v => return Err(format!("{reading:?}: tiling search {v:?}")),
        }
        summary.push(format!("{reading:?}"));
    }
    Ok(format!("no period <= (4,4) and admissible 6x6 blocks for {}", summary.join(", ")))
}

fn soundness() -> Check {
    // capped windows only weaken the verdict to Unknown, never to Refuted
    let caps = Caps { max_lp_vars: 400, ..Caps::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lp_windows = 0;
    let mut capped = 0;
    for i in 0..100 {
        let memory = rng.random_range(1..=2i64);
        let a = if memory == 1 { rng.random_range(2..=3u32) } else { 2 };
        let ext = MarkovExtension::new(periodic_mixture(&Domain::interval(0, memory), a, &mut rng)).unwrap();
        let n = rng.random_range(memory + 2..=6);
        let window = ext.window_measure(n as usize, CAP).unwrap();
        let v = random_domain(1, 0, n - 1, 2, &mut rng);
        let mu = window.marginal(&v).unwrap();
        let span = v.side_lengths().unwrap()[0] as usize;
        let report = refute_nonextendible(&mu, &WindowSchedule::Boxes { max_side: span + 2 }, &caps)
            .map_err(|e| e.to_string())?;
        ensure(!report.is_refuted(), || format!("case {i}: extendible marginal on {v} refuted: {report:?}"))?;
        lp_windows += span + 2;
        capped += !report.notes.is_empty() as usize;
    }
    Ok(format!("100 Markov marginals, none refuted ({lp_windows} schedule windows, {capped} cases stopped by caps)"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "Markov consistency", budget: Duration::from_secs(10), run: markov_consistency },
        Criterion { id: 2, name: "maximal entropy", budget: Duration::from_secs(30), run: maximal_entropy },
        Criterion { id: 3, name: "disconnected counterexample", budget: Duration::from_secs(5), run: disconnected },
        Criterion { id: 4, name: "pseudolattice", budget: Duration::from_secs(60), run: pseudolattice },
        Criterion { id: 5, name: "periodic extension LP", budget: Duration::from_secs(120), run: periodic },
        Criterion { id: 6, name: "epsilon ball", budget: Duration::from_secs(60), run: epsilon_ball },
        Criterion { id: 7, name: "envelopes", budget: Duration::from_secs(60), run: envelopes },
        Criterion { id: 8, name: "harmonic equivalences", budget: Duration::from_secs(30), run: harmonic },
        Criterion { id: 9, name: "CA encoding", budget: Duration::from_secs(10), run: eca },
        Criterion { id: 10, name: "Robinson evidence", budget: Duration::from_secs(600), run: robinson },
        Criterion { id: 11, name: "soundness guard", budget: Duration::from_secs(300), run: soundness },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f || c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("over budget ({:.1?} > {:?})", elapsed, c.budget)),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {:>2} {:<28} {:>8.2?} / {:<6?} {detail}", c.id, c.name, elapsed, c.budget);
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
