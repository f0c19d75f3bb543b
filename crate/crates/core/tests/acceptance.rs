//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero unless the failing set is exactly `KNOWN_RED`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffe_core::appendix::{verify_appendix, AppendixFixture, CheckStatus};
use ffe_core::classify::{
    classify_lfp, classify_lu, haagerup_histogram, invariant_it, invariant_row_signature, lower_bound,
    membership_check, Catalogue, Scope,
};
use ffe_core::fp::{dephase, random_lfp_with};
use ffe_core::poly::enumerate_polynomial_functions;
use ffe_core::spectral::{
    char_poly_coeffs, purity_rational, rank2_trace_exact, rank2_trace_formula, subspace_maximally_entangled,
    trace_powers, verify_lu_map_f4_f22, LU_MAP_TOLERANCE,
};
use ffe_core::stabilizer::{
    all_full_cycles, complete_set, internal_commutativity, make_stabilizer, unique_fixed_space_dim, CycleSpec,
};
use ffe_core::{is_polynomial, special_function, FiniteFunction, Perm, PointPerm, Polynomial};

/// Criteria that cannot pass against the published figures.
const KNOWN_RED: &[&str] = &["3a", "5c", "9b", "9c"];

const SV_TOL: f64 = 1e-4;
const FORMULA_TOL: f64 = 1e-9;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(300);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(600);
const LIMIT_6: Duration = Duration::from_secs(1);
const LIMIT_7: Duration = Duration::from_secs(30);
const LIMIT_8: Duration = Duration::from_secs(120);

const RANDOM_STABILIZER_TRIALS: usize = 10_000;
const RANDOM_LFP_TRIALS: usize = 1_000;

struct Line {
    id: &'static str,
    pass: bool,
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn poly(s: &str, d: u32) -> FiniteFunction {
    Polynomial::parse(s, d, 2).unwrap().to_function()
}

fn report(
    lines: &mut Vec<Line>,
    id: &'static str,
    started: Instant,
    limit: Option<Duration>,
    ok: bool,
    detail: String,
) {
    let elapsed = started.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = ok && in_time;
    let timing = match limit {
        Some(l) => format!(" [{:.2}s, limit {}s]", elapsed.as_secs_f64(), l.as_secs()),
        None => format!(" [{:.2}s]", elapsed.as_secs_f64()),
    };
    println!("{} {id}: {detail}{timing}", if pass { "PASS" } else { "FAIL" });
    lines.push(Line { id, pass });
}

fn sizes(cat: &Catalogue) -> Vec<u64> {
    let mut s: Vec<u64> = cat.classes.iter().map(|c| c.orbit_size).collect();
    s.sort_unstable();
    s
}

fn sv_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn all_pass(report: &ffe_core::appendix::ConformanceReport, names: &[&str]) -> bool {
    names.iter().all(|n| {
        report
            .checks
            .iter()
            .any(|c| c.name == *n && c.status == CheckStatus::Pass)
    })
}

fn random_perm(d: u32, rng: &mut ChaCha8Rng) -> Perm {
    let mut v: Vec<u32> = (0..d).collect();
    v.shuffle(rng);
    Perm::new(v).unwrap()
}

fn random_function(d: u32, rng: &mut ChaCha8Rng) -> FiniteFunction {
    FiniteFunction::new(d, 2, (0..d * d).map(|_| rng.gen_range(0..d)).collect()).unwrap()
}

fn core_function(d: u32, core: &[u32]) -> FiniteFunction {
    FiniteFunction::from_fn(d, 2, |x| {
        if x[0] == 0 || x[1] == 0 {
            0
        } else {
            core[((x[0] - 1) * (d - 1) + x[1] - 1) as usize] as i64
        }
    })
    .unwrap()
}

fn criterion_1(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let cat = classify_lu(classify_lfp(2, Scope::All, threads()).unwrap()).unwrap();
    let ok = cat.lfp_class_count() == 2 && cat.lu_class_count() == 2;
    report(
        lines,
        "1",
        t,
        Some(LIMIT_1),
        ok,
        format!(
            "d=2 lfp={} lu={} (want 2, 2)",
            cat.lfp_class_count(),
            cat.lu_class_count()
        ),
    );
}

fn criterion_2(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let cat = classify_lu(classify_lfp(3, Scope::All, threads()).unwrap()).unwrap();
    let s = sizes(&cat);
    let total: u64 = s.iter().sum();
    let rep = verify_appendix(&AppendixFixture::builtin(3).unwrap(), &cat).unwrap();
    let listing_ok = all_pass(
        &rep,
        &[
            "listing-integrity",
            "membership",
            "singular-values",
            "classes-distinct",
            "coverage",
        ],
    );
    let ok = cat.lfp_class_count() == 9
        && s == [1, 2, 6, 6, 9, 9, 12, 18, 18]
        && total == 81
        && cat.lu_class_count() == 6
        && listing_ok;
    report(
        lines,
        "2",
        t,
        Some(LIMIT_2),
        ok,
        format!(
            "d=3 lfp={} sizes={s:?} total={total} lu={} listing singular values within {SV_TOL:e}: {listing_ok}",
            cat.lfp_class_count(),
            cat.lu_class_count()
        ),
    );
}

fn criterion_3(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let cat = classify_lu(classify_lfp(4, Scope::All, threads()).unwrap()).unwrap();
    let elapsed = t.elapsed();
    let covered: u64 = cat.classes.iter().map(|c| c.orbit_size).sum();
    report(
        lines,
        "3a",
        t,
        Some(LIMIT_3),
        cat.lfp_class_count() == 807,
        format!(
            "d=4 all-states lfp={} (target 807, alternative figure 682) covering {covered} of 262144 dephased matrices",
            cat.lfp_class_count()
        ),
    );

    let t3b = Instant::now();
    let maximal: Vec<usize> = cat
        .classes
        .iter()
        .filter(|c| subspace_maximally_entangled(&c.representative, 4).unwrap())
        .map(|c| c.id)
        .collect();
    let xy = cat.find_class(&poly("x*y", 4)).unwrap();
    let f22 = cat.find_class(&special_function("f22", 4, None).unwrap()).unwrap();
    let mut found = vec![xy, f22];
    found.sort();
    let ok = cat.lu_class_count() == 127
        && maximal.len() == 2
        && xy != f22
        && found == maximal.iter().map(|&m| Some(m)).collect::<Vec<_>>()
        && elapsed <= LIMIT_3;
    report(
        lines,
        "3b",
        t3b,
        None,
        ok,
        format!(
            "d=4 lu={} (want 127); maximally entangled classes {maximal:?} contain xy -> {xy:?}, xy^2+x^2y+2xy -> {f22:?}",
            cat.lu_class_count()
        ),
    );
}

fn criterion_4(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let cat = classify_lu(classify_lfp(4, Scope::Teh, threads()).unwrap()).unwrap();
    let rep = verify_appendix(&AppendixFixture::builtin(4).unwrap(), &cat).unwrap();
    let listing_ok = all_pass(&rep, &["listing-integrity", "membership", "singular-values"]);
    let ok = listing_ok && cat.lu_class_count() == 7;
    report(
        lines,
        "4",
        t,
        Some(LIMIT_4),
        ok,
        format!(
            "d=4 TEH: 64 listed polynomials land in classes with listed singular values ({SV_TOL:e}): {listing_ok}; lfp={} lu={} (want 7)",
            cat.lfp_class_count(),
            cat.lu_class_count()
        ),
    );
}

fn criterion_5(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let cat = classify_lu(classify_lfp(6, Scope::Teh, threads()).unwrap()).unwrap();
    let elapsed = t.elapsed();
    report(
        lines,
        "5a",
        t,
        Some(LIMIT_5),
        cat.lu_class_count() == 12,
        format!("d=6 TEH lu={} (want 12)", cat.lu_class_count()),
    );

    let t5b = Instant::now();
    let fixture = AppendixFixture::builtin(6).unwrap();
    let spot = [0usize, 9, 14, 22, 27];
    let mut spot_ok = true;
    for &id in &spot {
        let class = &fixture.classes[id];
        let f = fixture.member_function(&class.members[0]).unwrap();
        let got = cat
            .find_class(&f)
            .unwrap()
            .map(|c| cat.classes[c].singular_values.clone())
            .unwrap_or_default();
        spot_ok &= sv_close(&got, &class.singular_values, SV_TOL);
    }
    let class_of = |f: &FiniteFunction| cat.find_class(f).unwrap().map(|c| &cat.classes[c]);
    let two = class_of(&poly("2*x*y", 6)).unwrap();
    let three = class_of(&poly("3*x*y", 6)).unwrap();
    let rank3 = subspace_maximally_entangled(&two.representative, 3).unwrap();
    let rank2 = subspace_maximally_entangled(&three.representative, 2).unwrap();
    let f32 = special_function("f32_fixture", 6, None).unwrap();
    let s6 = special_function("s6_fixture", 6, None).unwrap();
    let xy_f32 = membership_check(&f32, &poly("x*y", 6)).unwrap();
    let s6_apart =
        class_of(&s6).is_none() && is_polynomial(&s6).is_none() && !membership_check(&s6, &poly("x*y", 6)).unwrap();
    let rep = verify_appendix(&fixture, &cat).unwrap();
    let listing_ok = all_pass(
        &rep,
        &["listing-integrity", "membership", "singular-values", "coverage"],
    );
    let ok = spot_ok && rank3 && rank2 && xy_f32 && s6_apart && listing_ok && elapsed <= LIMIT_5;
    report(
        lines,
        "5b",
        t5b,
        None,
        ok,
        format!(
            "d=6 TEH spot classes {spot:?} within {SV_TOL:e}: {spot_ok}; 2xy rank-3 maximal: {rank3}; 3xy rank-2 maximal: {rank2}; \
             xy ~ f_(3,2): {xy_f32}; s_6 separate and non-polynomial: {s6_apart}; all 162 listed members consistent: {listing_ok}"
        ),
    );

    let t5c = Instant::now();
    let a = poly("2*x^2*y^2", 6);
    let b = poly("2*x^2*y^2 + 2*x^2*y", 6);
    let swap = [1u32, 0, 2, 4, 3, 5];
    let moved = FiniteFunction::from_fn(6, 2, |x| a.entry(x[0], swap[x[1] as usize]) as i64).unwrap();
    let witness = dephase(&moved).representative == dephase(&b).representative;
    report(
        lines,
        "5c",
        t5c,
        None,
        cat.lfp_class_count() == 28,
        format!(
            "d=6 TEH lfp={} (listed 28, alternative figure 27); listed classes 2 and 4 are related by the column permutation (0 1)(3 4): {witness}",
            cat.lfp_class_count()
        ),
    );
}

fn criterion_6(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let got: Vec<String> = [(3, 2), (4, 2), (5, 2), (3, 3)]
        .iter()
        .map(|&(d, n)| lower_bound(d, n).unwrap().to_string())
        .collect();
    let ok = got == ["3", "456", "10596382", "16142521"];
    report(
        lines,
        "6",
        t,
        Some(LIMIT_6),
        ok,
        format!("lower bounds (3,2),(4,2),(5,2),(3,3) = {got:?}"),
    );
}

fn criterion_7(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let mut counts = Vec::new();
    let mut distinct = true;
    for d in [3u32, 4, 6] {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut total = 0usize;
        for (_, f) in enumerate_polynomial_functions(d, 2).unwrap() {
            distinct &= seen.insert(f.values().to_vec());
            total += 1;
        }
        counts.push(total);
    }
    let s6 = is_polynomial(&special_function("s6_fixture", 6, None).unwrap()).is_none();
    let f32 = is_polynomial(&special_function("f32_fixture", 6, None).unwrap()).is_none();
    let ok = counts == [19683, 65536, 314928] && distinct && s6 && f32;
    report(
        lines,
        "7",
        t,
        Some(LIMIT_7),
        ok,
        format!(
            "polynomial function counts {counts:?} all distinct: {distinct}; s_6 absent: {s6}; f_(3,2) absent: {f32}"
        ),
    );
}

fn criterion_8(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut fixes = 0usize;
    for _ in 0..RANDOM_STABILIZER_TRIALS {
        let d = rng.gen_range(2..=4);
        let f = random_function(d, &mut rng);
        let pi = PointPerm::from_sites(d, &[random_perm(d, &mut rng), random_perm(d, &mut rng)]).unwrap();
        let (g, phase) = make_stabilizer(&f, &pi).unwrap().apply(&f).unwrap();
        fixes += usize::from(g == f && phase == 0);
    }

    let mut unique = true;
    let mut checked = 0usize;
    for d in [2u32, 3] {
        let cycles = all_full_cycles(d);
        let core_len = ((d - 1) * (d - 1)) as usize;
        for idx in 0..(d as usize).pow(core_len as u32) {
            let core: Vec<u32> = (0..core_len)
                .map(|i| (idx / (d as usize).pow(i as u32) % d as usize) as u32)
                .collect();
            let f = core_function(d, &core);
            for c0 in &cycles {
                for c1 in &cycles {
                    let spec = CycleSpec::new(vec![c0.clone(), c1.clone()]).unwrap();
                    unique &= unique_fixed_space_dim(&complete_set(&f, &spec).unwrap()).unwrap() == 1;
                    checked += 1;
                }
            }
        }
    }

    let mut multilinear = true;
    let cycles = all_full_cycles(3);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for e in 0..3 {
                    let f =
                        FiniteFunction::from_fn(3, 2, |x| (a + b * x[0] + c * x[1] + e * x[0] * x[1]) as i64).unwrap();
                    for c0 in &cycles {
                        for c1 in &cycles {
                            let spec = CycleSpec::new(vec![c0.clone(), c1.clone()]).unwrap();
                            multilinear &= internal_commutativity(&f, &spec).unwrap().iter().all(|&v| v);
                        }
                    }
                }
            }
        }
    }
    for d in [2u32, 4] {
        for _ in 0..50 {
            let (a, b, c) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            let f = FiniteFunction::from_fn(d, 2, |x| (a * x[0] + b * x[1] + c * x[0] * x[1]) as i64).unwrap();
            multilinear &= internal_commutativity(&f, &CycleSpec::kappa_plus(d, 2))
                .unwrap()
                .iter()
                .all(|&v| v);
        }
    }
    let x2y = !internal_commutativity(&poly("x^2*y", 3), &CycleSpec::kappa_plus(3, 2)).unwrap()[0];
    let ok = fixes == RANDOM_STABILIZER_TRIALS && unique && multilinear && x2y;
    report(
        lines,
        "8",
        t,
        Some(LIMIT_8),
        ok,
        format!(
            "stabilizer fixes state {fixes}/{RANDOM_STABILIZER_TRIALS}; fixed space dim 1 on {checked} complete sets: {unique}; \
             multilinear internally commuting: {multilinear}; x^2y fails at site 1: {x2y}"
        ),
    );
}

fn criterion_9(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let rw = |v: i64| (2.0 * std::f64::consts::PI * v as f64 / 3.0).cos();
    let mut worst: f64 = 0.0;
    for idx in 0..81u32 {
        let core: Vec<u32> = (0..4).map(|i| idx / 3u32.pow(i) % 3).collect();
        let f = core_function(3, &core);
        let (a, b, c, d) = (core[0] as i64, core[1] as i64, core[2] as i64, core[3] as i64);
        let first = rw(a) + rw(b) + rw(c) + rw(d) + rw(a - b) + rw(a - c) + rw(b - d) + rw(c - d) + rw(a - b - c + d);
        let second = rw(a - d) + rw(b - c) + rw(a - b - c) + rw(a - b + d) + rw(a - c + d) + rw(b + c - d);
        let t2 = 5.0 / 9.0 + 4.0 / 81.0 * first;
        let t3 = 29.0 / 81.0 + 16.0 / 243.0 * first + 2.0 / 243.0 * second;
        let exact = trace_powers(&f).unwrap().normalized();
        let (e2, e3) = (exact[1].to_complex(), exact[2].to_complex());
        worst = worst
            .max((e2.re - t2).abs())
            .max((e3.re - t3).abs())
            .max(e2.im.abs())
            .max(e3.im.abs());
    }
    report(
        lines,
        "9a",
        t,
        None,
        worst <= FORMULA_TOL,
        format!("d=3 tr rho^2, tr rho^3 closed forms on 81 cores, max deviation {worst:.2e} (tol {FORMULA_TOL:e})"),
    );

    let t = Instant::now();
    let (mut tested, mut formula_hits, mut exact_hits) = (0usize, 0usize, 0usize);
    for d in [3u32, 5] {
        for code in 0..(d as u64).pow(d) {
            let g: Vec<u32> = (0..d).map(|i| (code / (d as u64).pow(i) % d as u64) as u32).collect();
            let distinct: HashSet<u32> = g.iter().copied().collect();
            if distinct.len() != 2 {
                continue;
            }
            let first = g[0];
            let n1 = g.iter().filter(|&&v| v == first).count() as u32;
            let f = FiniteFunction::from_fn(d, 2, |x| (g[x[0] as usize] * x[1]) as i64).unwrap();
            let exact = purity_rational(&f).unwrap().expect("rational purity");
            tested += 1;
            formula_hits += usize::from(rank2_trace_formula(d, n1, d - n1).unwrap() == exact);
            exact_hits += usize::from(rank2_trace_exact(d, n1, d - n1).unwrap() == exact);
        }
    }
    let sample = rank2_trace_formula(3, 1, 2).unwrap();
    report(
        lines,
        "9b",
        t,
        None,
        formula_hits == tested,
        format!(
            "rank-2 tr rho^2 closed form agrees on {formula_hits}/{tested} two-output g_A at d=3,5 (d=3, counts 1,2 gives {sample}, exact 5/9); \
             (n1^2+n2^2)/d^2 agrees on {exact_hits}/{tested}"
        ),
    );

    let t = Instant::now();
    let (mut stated_worst, mut corrected_worst): (f64, f64) = (0.0, 0.0);
    for d in [5u32, 7] {
        for k in 1..d {
            let f = special_function("rank2_h", d, Some(k)).unwrap();
            let c2 = char_poly_coeffs(&f).unwrap()[1].to_complex();
            let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            let scale = 2.0 * ((d - 1) * (d - 1)) as f64 / (d as f64).powi(4);
            stated_worst = stated_worst.max((c2.re - scale * theta.cos()).abs()).max(c2.im.abs());
            corrected_worst = corrected_worst
                .max((c2.re - scale * (1.0 - theta.cos())).abs())
                .max(c2.im.abs());
        }
    }
    report(
        lines,
        "9c",
        t,
        None,
        stated_worst <= FORMULA_TOL,
        format!(
            "c_2 = 2(d-1)^2/d^4 cos(2 pi k/d) for k x^(d-1) y^(d-1) at d=5,7: max deviation {stated_worst:.3e}; \
             with (1 - cos) instead: {corrected_worst:.1e} (tol {FORMULA_TOL:e})"
        ),
    );

    let t = Instant::now();
    let mut kummer = (0usize, 0usize);
    for p in [2u32, 3, 5] {
        for m in 1..=5u32 {
            for k in 1..=(p as u64).pow(m - 1) {
                kummer.0 += 1;
                kummer.1 += usize::from(ffe_core::spectral::kummer_check(p, m, k).unwrap());
            }
        }
    }
    report(
        lines,
        "9d",
        t,
        None,
        kummer.0 == kummer.1,
        format!(
            "Kummer divisibility holds for {}/{} cases, p in 2,3,5, m <= 5",
            kummer.1, kummer.0
        ),
    );
}

fn criterion_10(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let ok = verify_lu_map_f4_f22();
    report(
        lines,
        "10",
        t,
        None,
        ok,
        format!("F4^T H* maps |xy^2+x^2y+2xy> onto |xy> up to phase within {LU_MAP_TOLERANCE:e}"),
    );
}

fn criterion_11(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut functions = Vec::new();
    for d in [3u32, 4, 6] {
        functions.push(random_function(d, &mut rng));
        functions.push(poly("x^2*y + x*y", d));
    }
    functions.push(special_function("s6_fixture", 6, None).unwrap());
    let mut stable = true;
    for f in &functions {
        let base = (
            invariant_it(f),
            invariant_row_signature(f, 0).unwrap(),
            invariant_row_signature(f, 1).unwrap(),
            haagerup_histogram(f).unwrap(),
        );
        for _ in 0..RANDOM_LFP_TRIALS {
            let g = random_lfp_with(f.d(), 2, &mut rng).act(f).unwrap();
            let now = (
                invariant_it(&g),
                invariant_row_signature(&g, 0).unwrap(),
                invariant_row_signature(&g, 1).unwrap(),
                haagerup_histogram(&g).unwrap(),
            );
            stable &= now == base;
        }
    }
    report(
        lines,
        "11",
        t,
        None,
        stable,
        format!("I_t, row/column signatures and Haagerup histograms fixed under {RANDOM_LFP_TRIALS} random LFPs for {} functions at d=3,4,6", functions.len()),
    );
}

fn criterion_12(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let one = classify_lu(classify_lfp(4, Scope::All, 1).unwrap()).unwrap();
    let eight = classify_lu(classify_lfp(4, Scope::All, 8).unwrap()).unwrap();
    let a = one.to_json();
    let same = a == eight.to_json() && one.to_csv().unwrap() == eight.to_csv().unwrap();
    report(
        lines,
        "12",
        t,
        None,
        same,
        format!(
            "d=4 all-states catalogue identical for 1 and 8 threads ({} bytes)",
            a.len()
        ),
    );
}

fn main() {
    let mut lines = Vec::new();
    criterion_1(&mut lines);
    criterion_2(&mut lines);
    criterion_3(&mut lines);
    criterion_4(&mut lines);
    criterion_5(&mut lines);
    criterion_6(&mut lines);
    criterion_7(&mut lines);
    criterion_8(&mut lines);
    criterion_9(&mut lines);
    criterion_10(&mut lines);
    criterion_11(&mut lines);
    criterion_12(&mut lines);

    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    let passed = lines.len() - failed.len();
    println!(
        "acceptance: {passed}/{} criteria pass; failing: {failed:?}; expected failing: {KNOWN_RED:?}",
        lines.len()
    );
    if failed != KNOWN_RED {
        eprintln!("acceptance: failing set differs from the expected set");
        std::process::exit(1);
    }
}
