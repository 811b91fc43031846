//! End-to-end acceptance run: one line per criterion, exit status 1 if any
//! fails. Every check is exact.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use ipskit::booloracle::{
    anyorder_dim_oracle, balanced_words, chunked_parts, deg_check, el_ed_identity, lm_census, lucas_grid,
    rank_lemma_oracle, sym_image, Caps, DegLemma, OracleReport,
};
use ipskit::cnfbridge::{
    emit_dimacs, equisat_check, identity_suite, plain_cnf, random_circuit, AlgCircuit, EquisatMode,
};
use ipskit::ff::Field;
use ipskit::instances::{
    indicator, ks_sym_e2, multiples_factors, multiples_system, roabp_hard_fixed, roabp_hard_poly, subset_sum, x,
};
use ipskit::ipscert::{
    check_flags, extract_multiple, fermat_refute, verify, verify_lin, IpsCert, IpsForm, Mode, VerifyOptions,
};
use ipskit::mpoly::{parse_poly, Poly, VarId};
use ipskit::roabp::{closure_prod, closure_sum, fermat_refutation_roabp, ml_roabp, nisan_build, width_lower};
use ipskit::wordspec::Word;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reps: &[OracleReport]) -> Result<(), String> {
    match reps.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(format!("{} {:?}: {}", r.lemma, r.params, r.failures.join("; "))),
    }
}

fn c1_degree_lemmas() -> Outcome {
    let caps = Caps::default();
    let q = Field::rationals();
    let mut runs = 0;
    let mut skipped = 0;
    let mut reps = Vec::new();
    let mut fields = vec![q.clone()];
    for p in [5, 7, 11, 13] {
        fields.push(Field::prime(p).unwrap());
    }
    for f in &fields {
        let c = f.characteristic() as u32;
        for n in 2..=12u32 {
            let parts = chunked_parts(n);
            let k = parts.len() as u32;
            // The largest β and |I| the constraints leave room for.
            let sub_ok = c == 0 || n + 2 <= c;
            let part_ok = c == 0 || k + 2 <= c;
            if sub_ok {
                let beta = if c == 0 { f.from_i64(-1) } else { f.from_i64(i64::from(n) + 1) };
                reps.push(deg_check(f, &DegLemma::SubsetSum { n, beta }, &caps).map_err(|e| e.to_string())?);
                runs += 1;
            } else {
                skipped += 1;
            }
            if part_ok {
                let beta = if c == 0 { f.from_i64(-1) } else { f.from_i64(i64::from(k) + 1) };
                reps.push(
                    deg_check(f, &DegLemma::Partition { parts: parts.clone(), beta: beta.clone() }, &caps)
                        .map_err(|e| e.to_string())?,
                );
                let psis: Vec<Poly> = parts.iter().map(|p| indicator(f, p)).collect();
                reps.push(deg_check(f, &DegLemma::GeneralPsi { psis, beta }, &caps).map_err(|e| e.to_string())?);
                runs += 2;
            } else {
                skipped += 2;
            }
            if c == 0 {
                reps.push(deg_check(f, &DegLemma::E2Char0 { n, beta: f.from_i64(2) }, &caps).map_err(|e| e.to_string())?);
                runs += 1;
            }
        }
    }
    all_pass(&reps)?;
    Ok(format!("{runs} instances have ml-inverse degree n ({skipped} excluded by characteristic)"))
}

fn rank_words() -> Vec<Word> {
    let mut words: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (a, k) in [(1, 1), (1, 2), (2, 3)] {
        for w in balanced_words(a, k, 14) {
            words.insert(w.entries());
        }
    }
    words.into_iter().map(|e| Word::new(&e).unwrap()).collect()
}

fn rank_sweep() -> Result<(usize, Vec<OracleReport>), String> {
    let caps = Caps::default();
    let words = rank_words();
    let mut reps = Vec::new();
    for p in [5, 7] {
        for w in &words {
            reps.push(rank_lemma_oracle(w, p, &caps).map_err(|e| format!("{w} p={p}: {e}"))?);
        }
    }
    Ok((words.len(), reps))
}

fn c2_rank(reps: &[OracleReport], words: usize) -> Outcome {
    for r in reps {
        let rank_fail: Vec<&String> = r
            .failures
            .iter()
            .filter(|f| f.starts_with("rank") || f.starts_with("coefficient") || f.starts_with("relrk"))
            .collect();
        ensure(rank_fail.is_empty(), || format!("{:?}: {rank_fail:?}", r.params))?;
    }
    Ok(format!("{words} balanced words × p ∈ {{5,7}}: full rank and relrk² · 2^b ≥ 1"))
}

fn c3_leading(reps: &[OracleReport]) -> Outcome {
    let mut lms = 0;
    for r in reps {
        let lm_fail: Vec<&String> =
            r.failures.iter().filter(|f| f.starts_with("LM") || f.starts_with("g_1")).collect();
        ensure(lm_fail.is_empty(), || format!("{:?}: {lm_fail:?}", r.params))?;
        lms += r.cases;
    }
    ensure(reps.iter().all(|r| r.pass), || "rank sweep has other failures".into())?;
    Ok(format!("{} reports, {lms} checks including every LM(g_m) and g_1 = 1/(r−β)", reps.len()))
}

fn c4_identities() -> Outcome {
    let mut reps = Vec::new();
    for f in [Field::rationals(), Field::prime(5).unwrap()] {
        for n in 0..=8 {
            for l in 0..=n {
                for d in 0..=l {
                    reps.push(el_ed_identity(l, d, n, &f).map_err(|e| e.to_string())?);
                }
            }
        }
    }
    let el = reps.len();
    reps.extend(lucas_grid(300, &[2, 3, 5, 7, 11]).map_err(|e| e.to_string())?);
    let mut sym = 0;
    let mut beta_cases = 0;
    for p in [3, 5, 7] {
        for d in 0..=12 {
            for n in 0..=20 {
                let r = sym_image(d, n, p).map_err(|e| e.to_string())?;
                beta_cases += u64::from(r.params.contains_key("beta"));
                reps.push(r);
                sym += 1;
            }
        }
    }
    all_pass(&reps)?;
    Ok(format!("{el} el·ed expansions, Lucas on 301² grid × 5 primes, {sym} images ({beta_cases} β-existence cases)"))
}

fn c5_separation() -> Outcome {
    let mut done = Vec::new();
    for p in [3, 5] {
        let f = Field::prime(p).unwrap();
        for w in ["1,-1", "1,1,-2"] {
            let word = Word::parse(w).unwrap();
            let inst = ks_sym_e2(&word, &f, None).map_err(|e| e.to_string())?.instance;
            let cert = fermat_refute(&inst).map_err(|e| e.to_string())?;
            let rep = verify(&cert, &inst, &VerifyOptions::default()).map_err(|e| e.to_string())?;
            ensure(rep.verdict == ipskit::ipscert::Verdict::Verified, || format!("{w} p={p}: {:?}", rep.witnesses))?;
            let flags = check_flags(&cert, ipskit::ipscert::DEFAULT_TERM_CAP).map_err(|e| e.to_string())?;
            ensure(flags.multilinear_in_xy && flags.linear_in_y, || format!("{w} p={p}: flags {flags:?}"))?;
            done.push(format!("({w})/F_{p}"));
        }
    }
    Ok(format!("exact Fermat refutations verified, multilinear in x̄,ȳ: {}", done.join(" ")))
}

fn c6_roabp() -> Outcome {
    let f = Field::prime(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let vars: Vec<VarId> = (1..=6).map(x).collect();
    let mut builds = 0;
    for _ in 0..200 {
        let p = common::random_poly(&f, &mut rng, &vars, 40, 2);
        for _ in 0..3 {
            let mut ord = vars.clone();
            ord.shuffle(&mut rng);
            let a = nisan_build(&p, &ord).map_err(|e| e.to_string())?;
            ensure(a.extract_poly() == p, || format!("extract differs for {p}"))?;
            let lower = width_lower(&p, &ord).map_err(|e| e.to_string())?;
            ensure(a.width() == lower, || format!("width {} vs coeff_dim {lower} for {p}", a.width()))?;
            builds += 1;
        }
    }
    let mut closures = 0;
    for _ in 0..30 {
        let p = common::random_poly(&f, &mut rng, &vars, 12, 2);
        let q = common::random_poly(&f, &mut rng, &vars, 12, 2);
        let a = nisan_build(&p, &vars).map_err(|e| e.to_string())?;
        let b = nisan_build(&q, &vars).map_err(|e| e.to_string())?;
        let s = closure_sum(&a, &b).map_err(|e| e.to_string())?;
        let m = closure_prod(&a, &b).map_err(|e| e.to_string())?;
        ensure(s.extract_poly() == p.add(&q) && s.width() <= a.width() + b.width(), || "sum closure".into())?;
        ensure(m.extract_poly() == p.mul(&q) && m.width() <= a.width() * b.width(), || "product closure".into())?;
        let ml = ml_roabp(&a);
        ensure(ml.extract_poly() == p.ml() && ml.width() <= a.width(), || "ml closure".into())?;
        closures += 1;
    }
    let mut orders = 0;
    for n in 1..=6u32 {
        let hard = roabp_hard_poly(&f, n);
        let vs: Vec<VarId> = (1..=n).map(x).collect();
        for ord in common::permutations(&vs) {
            let a = nisan_build(&hard, &ord).map_err(|e| e.to_string())?;
            // One variable leaves no interior cut, so the program is a single edge.
            let want = if n == 1 { 1 } else { 2 };
            ensure(a.width() == want, || format!("∏(1−x)−2 has width {} in order {ord:?}", a.width()))?;
            orders += 1;
        }
    }
    Ok(format!("{builds} builds at exact width, {closures} closure triples, ∏(1−x)−2 width 2 in {orders} orders"))
}

fn c7_census() -> Outcome {
    let caps = Caps::default();
    let mut reps = Vec::new();
    for p in [5, 7] {
        let f = Field::prime(p).unwrap();
        for n in 1..=5 {
            reps.push(lm_census(n, &f, &caps).map_err(|e| e.to_string())?);
        }
    }
    let f5 = Field::prime(5).unwrap();
    for n in 1..=3 {
        reps.push(anyorder_dim_oracle(n, &f5).map_err(|e| e.to_string())?);
    }
    all_pass(&reps)?;
    Ok(format!(
        "census 2^n for n ≤ 5 over F_5, F_7; any-order dims {}",
        reps[10..].iter().map(|r| r.computed.clone()).collect::<Vec<_>>().join("; ")
    ))
}

fn c8_multiples() -> Outcome {
    let f = Field::prime(5).unwrap();
    let mut out = Vec::new();
    for n in [2, 3] {
        let inst = multiples_system(&f, n).map_err(|e| e.to_string())?;
        let cert = fermat_refute(&inst).map_err(|e| e.to_string())?;
        ensure(verify(&cert, &inst, &VerifyOptions::default()).map_err(|e| e.to_string())?.passed(), || {
            format!("n={n}: refutation does not verify")
        })?;
        let ex = extract_multiple(&cert, &inst, &multiples_factors(n)).map_err(|e| e.to_string())?;
        let quot = ex.quotient.clone().ok_or_else(|| format!("n={n}: division stopped after {:?}", ex.divided))?;
        ensure(!ex.multiple.is_zero() && quot.mul(&inst.axioms[0]) == ex.multiple, || format!("n={n}: M ≠ f·Q"))?;
        out.push(format!("n={n}: deg M = {}", ex.multiple.degree().unwrap_or(0)));
    }
    Ok(format!("nonzero exact multiples of f: {}", out.join(", ")))
}

fn c9_flbm() -> Outcome {
    let f = Field::prime(5).unwrap();
    let mut widths = Vec::new();
    for n in 1..=6u32 {
        let vs: Vec<VarId> = (1..=n).map(x).collect();
        let a = nisan_build(&roabp_hard_poly(&f, n), &vs).map_err(|e| e.to_string())?;
        let fr = fermat_refutation_roabp(&a).map_err(|e| e.to_string())?;
        let w = fr.inverse.width();
        ensure(w <= 1 << (5 - 2), || format!("n={n}: width {w} > 2^(p−2)"))?;
        let g = fr.inverse.extract_poly();
        let prod = g.mul(&a.extract_poly()).bool_reduce().remainder;
        ensure(prod.is_one(), || format!("n={n}: g·f ≢ 1 on the cube"))?;
        widths.push(w);
    }
    Ok(format!("g·f ≡ 1 with roABP widths {widths:?} ≤ 8"))
}

fn c10_cnf() -> Outcome {
    let mut degs = Vec::new();
    for q in [3, 5, 7] {
        let r = identity_suite(q).map_err(|e| e.to_string())?;
        all_pass(std::slice::from_ref(&r))?;
        degs.push(format!("q={q}: {}", r.computed));
    }
    let f3 = Field::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut circuits = vec![AlgCircuit::from_poly(&parse_poly(&f3, "x_1^2 + 1").unwrap())];
    circuits.extend((0..100).map(|_| random_circuit(&f3, &mut rng, 6, 3)));
    let mut unsat = 0;
    for c in &circuits {
        let r = equisat_check(c, EquisatMode::Enumerate).map_err(|e| e.to_string())?;
        all_pass(std::slice::from_ref(&r))?;
        unsat += usize::from(r.computed.contains("circuit false"));
    }
    ensure(
        equisat_check(&circuits[0], EquisatMode::Enumerate).unwrap().computed == "sat: circuit false, cnf false, ecnf false",
        || "x²+1 fixture is not unsatisfiable".into(),
    )?;
    let golden = include_str!("golden/x1x2_plus_2_q3.cnf");
    let emitted = emit_dimacs(&plain_cnf(&common::golden_circuit()).map_err(|e| e.to_string())?.cnf);
    ensure(emitted == golden, || "DIMACS output differs from the golden file".into())?;
    Ok(format!("identities and Q degrees ({}); {} circuits agree ({unsat} unsat); golden DIMACS matches", degs.join(", "), circuits.len()))
}

/// Certificate/instance pairs that verify.
fn fixtures() -> Vec<(String, IpsCert, ipskit::instances::Instance, ipskit::instances::Instance)> {
    let mut out = Vec::new();
    let f5 = Field::prime(5).unwrap();
    let f7 = Field::prime(7).unwrap();
    for n in [2, 3] {
        let inst = roabp_hard_fixed(&f5, n).unwrap();
        let cert = fermat_refute(&inst).unwrap();
        let wrong = ipskit::instances::Instance {
            axioms: vec![inst.axioms[0].add_const(&f5.one())],
            ..inst.clone()
        };
        out.push((format!("roabp_hard n={n}"), cert, inst, wrong));
    }
    for (n, b) in [(3u32, 5i64), (4, 6)] {
        let inst = subset_sum(&f7, n, f7.from_i64(b)).unwrap();
        let cert = fermat_refute(&inst).unwrap();
        let wrong = subset_sum(&f7, n, f7.from_i64(b - 1)).unwrap();
        out.push((format!("subset_sum n={n} β={b}"), cert, inst, wrong));
    }
    let f3 = Field::prime(3).unwrap();
    let inst = ks_sym_e2(&Word::parse("1,-1").unwrap(), &f3, None).unwrap().instance;
    let cert = fermat_refute(&inst).unwrap();
    let wrong = ipskit::instances::Instance {
        axioms: vec![inst.axioms[0].add_const(&f3.one())],
        ..inst.clone()
    };
    out.push(("ks_sym_e2 (1,-1)/F_3".into(), cert, inst, wrong));
    out
}

fn mutate(cert: &IpsCert, rng: &mut ChaCha8Rng, kind: usize) -> IpsCert {
    let IpsForm::LinearComb { g, h } = &cert.form else { panic!("linear fixtures only") };
    let (mut g, mut h) = (g.clone(), h.clone());
    let f = &cert.field;
    match kind {
        0 => {
            let keys: Vec<usize> = g.keys().copied().collect();
            let k = keys[rng.gen_range(0..keys.len())];
            let terms: Vec<_> = g[&k].terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            let (m, _) = terms[rng.gen_range(0..terms.len())].clone();
            let bump = f.from_i64(rng.gen_range(1..f.characteristic() as i64));
            let delta = Poly::monomial(f, m, bump);
            g.insert(k, g[&k].add(&delta));
        }
        _ => {
            let keys: Vec<VarId> = h.keys().copied().collect();
            let v = keys[rng.gen_range(0..keys.len())];
            let terms: Vec<_> = h[&v].terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            let (m, c) = terms[rng.gen_range(0..terms.len())].clone();
            h.insert(v, h[&v].sub(&Poly::monomial(f, m, c)));
        }
    }
    IpsCert::linear(f, g, h, None)
}

fn c11_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let exact = VerifyOptions::default();
    let sz = VerifyOptions { mode: Mode::Sz, ext: 4, trials: 12, seed: 3, ..VerifyOptions::default() };
    let fx = fixtures();
    let mut rejected = 0;
    let mut agree = 0;
    let run = |g: &BTreeMap<usize, Poly>, h: &BTreeMap<VarId, Poly>, inst, o| {
        verify_lin(g, h, inst, o).map_err(|e: ipskit::ipscert::CertError| e.to_string())
    };
    for (name, cert, inst, _) in &fx {
        let IpsForm::LinearComb { g, h } = &cert.form else { unreachable!() };
        let (a, b) = (run(g, h, inst, &exact)?, run(g, h, inst, &sz)?);
        ensure(a.passed() && b.passed(), || format!("{name}: valid fixture rejected"))?;
        agree += 1;
    }
    let mut i = 0;
    while rejected < 50 {
        let (name, cert, inst, wrong) = &fx[i % fx.len()];
        let kind = i % 3;
        i += 1;
        let (bad, target) = match kind {
            2 => (cert.clone(), wrong),
            k => (mutate(cert, &mut rng, k), inst),
        };
        let IpsForm::LinearComb { g, h } = &bad.form else { unreachable!() };
        if kind == 1 && h.is_empty() {
            continue;
        }
        let a = run(g, h, target, &exact)?;
        let b = run(g, h, target, &sz)?;
        ensure(!a.passed() && !a.witnesses.is_empty(), || format!("{name} mutation {kind} accepted exactly"))?;
        ensure(!b.passed() && !b.witnesses.is_empty(), || format!("{name} mutation {kind} accepted by SZ"))?;
        rejected += 1;
        agree += 1;
    }
    Ok(format!("{rejected} mutants rejected with witnesses; exact and SZ agree on {agree} fixtures"))
}

fn line(id: u32, name: &str, budget: u64, out: &Outcome, dt: Duration) -> bool {
    let secs = dt.as_secs_f64();
    let over = dt > Duration::from_secs(budget);
    let text = match (out, over) {
        (Ok(msg), false) => format!("PASS criterion {id:>2} {name}: {msg} [{secs:.1}s]"),
        (Ok(msg), true) => format!("FAIL criterion {id:>2} {name}: {msg} [{secs:.1}s exceeds {budget}s]"),
        (Err(e), _) => format!("FAIL criterion {id:>2} {name}: {e} [{secs:.1}s]"),
    };
    println!("{text}");
    out.is_ok() && !over
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

fn main() {
    let mut ok = Vec::new();
    let (o, t) = timed(c1_degree_lemmas);
    ok.push(line(1, "degree lemmas", 10, &o, t));

    // Criteria 2 and 3 share one sweep and one time budget.
    let t0 = Instant::now();
    let sweep = rank_sweep();
    let (o2, o3) = match &sweep {
        Ok((n, reps)) => (c2_rank(reps, *n), c3_leading(reps)),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    let t = t0.elapsed();
    ok.push(line(2, "rank lemma", 60, &o2, t));
    ok.push(line(3, "leading monomials", 60, &o3, t));

    let rest: [(u32, &str, u64, fn() -> Outcome); 8] = [
        (4, "symmetric identities", 30, c4_identities),
        (5, "separation upper bound", 30, c5_separation),
        (6, "roABP suite", 60, c6_roabp),
        (7, "census and any-order dimension", 120, c7_census),
        (8, "multiples method", 10, c8_multiples),
        (9, "Fermat roABP upper bound", 10, c9_flbm),
        (10, "CNF bridge", 60, c10_cnf),
        (11, "certificate soundness", 30, c11_soundness),
    ];
    for (id, name, budget, f) in rest {
        let (o, t) = timed(f);
        ok.push(line(id, name, budget, &o, t));
    }
    let failed = ok.iter().filter(|&&b| !b).count();
    if failed > 0 {
        println!("{failed} of 11 criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
