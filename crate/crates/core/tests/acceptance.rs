//! Acceptance suite: one pass/fail line per criterion. Every check compares
//! against an oracle computed here, independently of the library paths it
//! exercises.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use realizer::banach::{point_norm, BanachName, CPoint, Combo, FiniteNorm, Functional, NormKind, PseudoNorm};
use realizer::hb::reversal::{coord_norm_with, z, BlockNorm};
use realizer::hb::{diagonal_instance, hb_le_sep, planted_hb_oracle, pr_test, sep_le_hb, whole_space_instance, PrAnswer};
use realizer::hyperspace::spaces::{interval_closed_noisy, jittered_unit_compact};
use realizer::hyperspace::{sel_le_pathb, SelInstance};
use realizer::kernel::{deinterleave, fueled_run, interleave, MachineDesc, Seq, SeqCode, StreamSpec};
use realizer::multivalued::Oracle;
use realizer::problems::ck::planted_c1_spread;
use realizer::problems::cover::{finite_subcover, planted_cover, OpenInterval};
use realizer::problems::range::random_planted_injective;
use realizer::problems::sep::{hashed_bit, planted_finite};
use realizer::problems::sup::random_planted;
use realizer::problems::tree::{planted_bounded_oracle, planted_unique_path};
use realizer::problems::{
    auto_path_oracle, bounded_ck_oracle, bounded_range_oracle, planted_sep_oracle, regular_path_oracle, Automaton,
    RangeInstance, Sup, TreeChar,
};
use realizer::reals::{pow2_neg, rat, CReal, RatEnum, RealLine, Rational};
use realizer::reductions::{c1_le_range, path2_le_sep, pathb_le_path2, range_le_c1, range_le_sup, sep_le_path2, sup_le_c1};
use realizer::registry::{generate, run, REDUCTIONS};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

/// Sound two-sided bounds on a real at precision k.
fn bounds(x: &CReal, k: u32) -> (Rational, Rational) {
    (x.approx(k) - x.err(k), x.approx(k) + x.err(k))
}

// 1. Every registered reduction on 100 planted instances at depth 64.
fn soundness() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    for r in REDUCTIONS {
        for seed in 0..100 {
            let f = generate(r.generator, seed, None).map_err(|e| format!("{} gen {seed}: {e}", r.id))?;
            let t = run(r.id, &f, None, 64, 4096).map_err(|e| format!("{} seed {seed}: {e}", r.id))?;
            if let Some(bad) = t.verdicts.iter().find(|v| v.verdict != "accept") {
                return Err(format!("{} seed {seed}: {} at depth {}", r.id, bad.verdict, bad.depth));
            }
            runs += 1;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("{} reductions, {runs} runs, zero failures, {:.1}s", REDUCTIONS.len(), took.as_secs_f64()))
}

/// n ∈ ran(p) from a direct scan of the planted window.
fn in_range_by_scan(x: &RangeInstance, n: u64) -> u64 {
    let w = x.witness_bound.as_ref().unwrap()(n);
    (0..w).map(|m| x.p.get(m)).any(|v| v == n) as u64
}

// 2. Range ≅ C₁ on n < 50.
fn range_c1() -> Check {
    for seed in 0..100 {
        let x = random_planted_injective(seed, 16);
        let y = range_le_c1().solve(&x, &bounded_ck_oracle(1)).map_err(|e| e.to_string())?;
        for n in 0..50 {
            ensure(y.get(n) == in_range_by_scan(&x, n), || format!("Range via C1, seed {seed}, n = {n}"))?;
        }
        let r = Seq::from_fn(move |n| hashed_bit(seed, n));
        let c = planted_c1_spread(r.clone(), move |n| (n * 7 + seed) % 9);
        let y = c1_le_range().solve(&c, &bounded_range_oracle()).map_err(|e| e.to_string())?;
        for n in 0..50 {
            ensure(y.get(n) == r.get(n), || format!("C1 via Range, seed {seed}, n = {n}"))?;
        }
    }
    Ok("100 + 100 instances exact on n < 50".into())
}

/// Injective p with range S ∪ {a + b·k}, and its exact sup Σ 2^{-(v+1)}.
fn geometric_range(seed: u64) -> (RangeInstance, Rational, BTreeSet<u64>, (u64, u64)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (rng.gen_range(20..40u64), rng.gen_range(1..5u64));
    let small: BTreeSet<u64> = (0..20).filter(|_| rng.gen_bool(0.4)).collect();
    let mut head: Vec<u64> = small.iter().copied().collect();
    for i in (1..head.len()).rev() {
        head.swap(i, rng.gen_range(0..=i));
    }
    let h = head.clone();
    let p = Seq::from_fn(move |m| match h.get(m as usize) {
        Some(&v) => v,
        None => a + b * (m - h.len() as u64),
    });
    let finite: Rational = small.iter().map(|&v| pow2_neg(v as u32 + 1)).sum();
    let tail = pow2_neg(a as u32 + 1) / (Rational::one() - pow2_neg(b as u32));
    (RangeInstance::new(p), finite + tail, small, (a, b))
}

// 3. Sup ≅ C₁ within 2^{-16}; Range via Sup exact on n < 40.
fn sup_c1() -> Check {
    let eps = pow2_neg(16);
    for seed in 0..100 {
        let x = random_planted(seed);
        let want = x.planting.as_ref().unwrap().sup.approx(40);
        let y = sup_le_c1().solve(&x, &bounded_ck_oracle(1)).map_err(|e| e.to_string())?;
        let (lo, hi) = bounds(&y, 20);
        ensure(&want - &eps <= lo && hi <= &want + &eps, || format!("sup seed {seed}: [{lo}, {hi}] vs {want}"))?;
    }
    for seed in 0..100 {
        let (x, s, small, (a, b)) = geometric_range(seed);
        let exact: Oracle<Sup> = Oracle::total("exact", move |_| Ok(CReal::exact(s.clone())));
        let y = range_le_sup().solve(&x, &exact).map_err(|e| e.to_string())?;
        for n in 0..40 {
            let want = small.contains(&n) || (n >= a && (n - a) % b == 0);
            ensure(y.get(n) == want as u64, || format!("Range via Sup, seed {seed}, n = {n}"))?;
        }
    }
    Ok("100 sups within 2^-16; 100 ranges exact on n < 40".into())
}

/// Runs the automaton on a path prefix; false if it reaches a dead state.
fn stays_alive(a: &Automaton, path: &[u64]) -> bool {
    let mut s = a.initial;
    for &bit in path {
        if bit > 1 {
            return false;
        }
        s = a.trans[s][bit as usize];
        if a.dead[s] {
            return false;
        }
    }
    true
}

fn random_pattern(rng: &mut ChaCha8Rng) -> Vec<Option<u8>> {
    (0..rng.gen_range(1..6)).map(|_| if rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..2)) }).collect()
}

// 4. Sep ≅ Path₂ at depth 64.
fn sep_path2() -> Check {
    for seed in 0..50 {
        let x = planted_finite(seed, 16);
        let t = sep_le_path2().h(&x).map_err(|e| e.to_string())?;
        let a = t.automaton.clone().ok_or("Sep tree without an automaton")?;
        let path = regular_path_oracle().realize(&t).map_err(|e| e.to_string())?;
        ensure(stays_alive(&a, &path.prefix(64)), || format!("seed {seed}: oracle path leaves the automaton"))?;
        let r = sep_le_path2().solve(&x, &regular_path_oracle()).map_err(|e| e.to_string())?;
        let (ps, qs) = x.planting.spec.clone().unwrap();
        for v in values_of(&ps) {
            ensure(r.at(&v) == 0, || format!("seed {seed}: r({v}) should be 0"))?;
        }
        for v in values_of(&qs) {
            ensure(r.at(&v) == 1, || format!("seed {seed}: r({v}) should be 1"))?;
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aut = Automaton::forcing_periodic(&random_pattern(&mut rng));
        let tree = TreeChar::from_automaton(aut.clone());
        let p = path2_le_sep().solve(&tree, &planted_sep_oracle()).map_err(|e| e.to_string())?;
        ensure(stays_alive(&aut, &p.prefix(64)), || format!("seed {seed}: recovered path leaves the automaton"))?;
    }
    Ok("50 + 50 instances, paths checked against automata to depth 64".into())
}

/// The finite value set of an eventually periodic table.
fn values_of(s: &StreamSpec) -> BTreeSet<u64> {
    match s {
        StreamSpec::Table { head, period } => head.iter().chain(period).copied().collect(),
        StreamSpec::Affine { .. } => panic!("finite tables expected"),
    }
}

// 5. Path_B ≅ Path₂: the unique path comes back through the binary coding.
fn pathb_path2() -> Check {
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = rng.gen_range(2..9u64);
        let period: Vec<u64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..bound)).collect();
        let t = planted_unique_path(period.clone(), bound);
        let p = pathb_le_path2().solve(&t, &auto_path_oracle()).map_err(|e| e.to_string())?;
        for i in 0..32u64 {
            let want = BigInt::from(period[i as usize % period.len()]);
            ensure(BigInt::from(p.get(i)) == want, || format!("seed {seed}: position {i}"))?;
        }
    }
    Ok("50 trees, paths equal to depth 32".into())
}

/// Rank of rational column vectors by fraction-exact Gaussian elimination.
fn exact_rank(vs: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = vs.to_vec();
    let width = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r].get(col).cloned().unwrap_or_default().is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let pv = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank {
                let f = m[r].get(col).cloned().unwrap_or_default() / &pv;
                for c in 0..width {
                    let sub = m[rank].get(c).cloned().unwrap_or_default() * &f;
                    if c < m[r].len() {
                        m[r][c] -= sub;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()
}

// 6. pr_test agrees with exact rank.
fn pr_vs_rank() -> Check {
    let dim = 4;
    let identity: Vec<Vec<Rational>> =
        (0..dim).map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let x = BanachName::new(FiniteNorm::new(NormKind::Max, identity));
    let n = 10;
    let (mut indep, mut dep) = (0, 0);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..=dim);
        let mut vs: Vec<Vec<Rational>> = Vec::new();
        while vs.len() < k {
            let v = random_vec(&mut rng, dim);
            let mut t = vs.clone();
            t.push(v.clone());
            if exact_rank(&t) == t.len() {
                vs.push(v);
            }
        }
        let cand = if k == dim || rng.gen_bool(0.5) {
            let gs: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
            (0..dim).map(|c| gs.iter().zip(&vs).map(|(g, v)| g * &v[c]).sum()).collect()
        } else {
            random_vec(&mut rng, dim)
        };
        let mut all = vs.clone();
        all.push(cand.clone());
        let independent = exact_rank(&all) == all.len();
        let combos: Vec<Combo> = vs.iter().map(|v| Combo::new(v.clone())).collect();
        let e = Combo::new(cand.clone());
        match (independent, pr_test(&x, &combos, &e, n)) {
            (true, PrAnswer::Independent { .. }) => indep += 1,
            (false, PrAnswer::Approximable { gammas }) => {
                // ‖e − Σ γ v‖_∞ < 2^{-(n+1)}, computed here.
                let resid = (0..dim)
                    .map(|c| (&cand[c] - gammas.iter().zip(&vs).map(|(g, v)| g * &v[c]).sum::<Rational>()).abs())
                    .max()
                    .unwrap();
                ensure(resid < pow2_neg(n + 1), || format!("seed {seed}: residual {resid}"))?;
                dep += 1;
            }
            (i, got) => return Err(format!("seed {seed}: independent = {i}, pr_test said {got:?}")),
        }
    }
    Ok(format!("200/200 agree ({indep} independent, {dep} dependent)"))
}

/// max over the vertices of the max-norm unit ball: the dual norm |a| + |b|.
fn dual_max_norm(g: &[Rational]) -> Rational {
    let mut best = Rational::zero();
    for s in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let v = (&g[0] * rat(s.0, 1) + &g[1] * rat(s.1, 1)).abs();
        if v > best {
            best = v;
        }
    }
    best
}

// 7. HB ≤ Sep on the max-norm plane.
fn hb_pipeline() -> Check {
    let start = Instant::now();
    let red = hb_le_sep();
    let mut notes = Vec::new();
    for w in [vec![rat(1, 2), rat(1, 2)], vec![rat(1, 4), rat(3, 4)], vec![rat(1, 1), rat(0, 1)]] {
        let x = diagonal_instance(w);
        let g = red.solve(&x, &planted_sep_oracle()).map_err(|e| e.to_string())?;
        let k = 12;
        let (lo, hi) = bounds(&g.at_combo(&Combo::new(vec![rat(1, 1), rat(1, 1)])), k);
        ensure(lo >= Rational::one() - pow2_neg(8) && hi <= Rational::one() + pow2_neg(8), || format!("g(e0 + e1) in [{lo}, {hi}]"))?;
        let a = g.at_combo(&Combo::unit(0)).approx(k);
        let b = g.at_combo(&Combo::unit(1)).approx(k);
        let dual = dual_max_norm(&[a.clone(), b.clone()]);
        ensure(dual <= Rational::one() + pow2_neg(6) - pow2_neg(k - 1), || format!("dual norm {dual}"))?;
        notes.push(format!("({}, {})", a, b));
    }
    let w = vec![rat(1, 3), rat(-1, 2)];
    let x = whole_space_instance(w.clone());
    let g = red.solve(&x, &planted_sep_oracle()).map_err(|e| e.to_string())?;
    for i in 0..20 {
        let c = Combo::new(vec![RatEnum::get(i), RatEnum::get(i + 20)]);
        let want = &w[0] * c.coeff(0) + &w[1] * c.coeff(1);
        let got = g.at_combo(&c).approx(10);
        ensure((&got - &want).abs() <= pow2_neg(8), || format!("A = X at point {i}: {got} vs {want}"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("g = {}; A = X within 2^-8 on 20 points; {:.1}s", notes.join(", "), took.as_secs_f64()))
}

// 8. Sep ≤ HB with the analytic extension g_ε.
fn sep_hb() -> Check {
    for seed in 0..50 {
        let x = planted_finite(seed, 16);
        let r = sep_le_hb().solve(&x, &planted_hb_oracle()).map_err(|e| e.to_string())?;
        let (ps, qs) = x.planting.spec.clone().unwrap();
        let (zeros, ones) = (values_of(&ps), values_of(&qs));
        for v in 0..16u64 {
            if zeros.contains(&v) {
                ensure(r.at(&v) == 0, || format!("seed {seed}: r({v}) should be 0"))?;
            }
            if ones.contains(&v) {
                ensure(r.at(&v) == 1, || format!("seed {seed}: r({v}) should be 1"))?;
            }
        }
    }
    let inst = planted_finite(0, 16);
    let norm = BlockNorm { inst };
    for n in 0..16 {
        ensure(norm.eval(&z(n)).as_exact() == Some(&pow2_neg(n as u32 + 1)), || format!("‖z_{n}‖"))?;
    }
    ensure(norm.eval(&Combo::new(vec![rat(2, 1), rat(0, 1)])).as_exact() == Some(&Rational::one()), || "‖(2, 0)‖".into())?;
    for k in 0..20 {
        let d = pow2_neg(k);
        ensure(coord_norm_with(&d, &(Rational::one() + &d), &d) == Rational::one(), || format!("‖(1 + δ, δ)‖ at δ = 2^-{k}"))?;
    }
    Ok("50 separators exact on n < 16; norm identities exact".into())
}

// 9. Selection of a point of [1/3, 2/3] inside I.
fn selection() -> Check {
    let start = Instant::now();
    let (lo, hi) = (rat(1, 3), rat(2, 3));
    for seed in 0..20 {
        let planted = &lo + rat(seed as i64 % 9, 27);
        let x = SelInstance::new(RealLine, jittered_unit_compact(seed), interval_closed_noisy(lo.clone(), hi.clone(), seed))
            .with_planted(CReal::exact(planted));
        let y = sel_le_pathb::<RealLine>().solve(&x, &planted_bounded_oracle()).map_err(|e| e.to_string())?;
        let (a, b) = bounds(&y, 20);
        ensure(a >= &lo - pow2_neg(16) && b <= &hi + pow2_neg(16), || format!("seed {seed}: [{a}, {b}]"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("20 covers, points within 2^-16 of A, {:.1}s", took.as_secs_f64()))
}

/// [0, 1] ⊆ ⋃ (lo, hi): sweep the intervals sorted by left end.
fn sweep_covers(mut iv: Vec<OpenInterval>) -> bool {
    iv.sort();
    let mut reach: Option<Rational> = None;
    for (lo, hi) in iv {
        let covered_to = reach.clone();
        match covered_to {
            None if lo < Rational::zero() => reach = Some(hi),
            None => return false,
            Some(r) if lo < r => {
                if hi > r {
                    reach = Some(hi);
                }
            }
            Some(r) if r > Rational::one() => return true,
            Some(_) => return false,
        }
    }
    reach.is_some_and(|r| r > Rational::one())
}

// 10. Heine–Borel subcover search.
fn subcovers() -> Check {
    let mut max_steps = 0;
    for seed in 0..50 {
        let cover = planted_cover(seed, 3 + (seed as usize % 6), 400);
        let sub = finite_subcover(&cover, 10_000).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(sub.steps < 10_000, || format!("seed {seed}: {} steps", sub.steps))?;
        let iv: Vec<OpenInterval> = sub.indices.iter().map(|&i| cover.get(i)).collect();
        ensure(sweep_covers(iv), || format!("seed {seed}: subcover misses a point"))?;
        max_steps = max_steps.max(sub.steps);
    }
    Ok(format!("50 covers, exact chains, at most {max_steps} intervals read"))
}

// 11. Kernel invariants.
fn kernel() -> Check {
    let machines = [
        MachineDesc::Identity,
        MachineDesc::Delay { k: 3 },
        MachineDesc::PrefixSum,
        MachineDesc::PairSum,
        MachineDesc::Repeat { times: 2 },
        MachineDesc::Compose { parts: vec![MachineDesc::Project { side: 1 }, MachineDesc::AddConst { c: 5 }] },
    ];
    for case in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let m = machines[case as usize % machines.len()].build();
        let input = Seq::from_fn(move |i| hashed_bit(case, i) * (i % 7));
        let (f1, f2) = {
            let a = rng.gen_range(0..40);
            (a, a + rng.gen_range(0..40))
        };
        let (short, long) = (fueled_run(&m, &input, f1), fueled_run(&m, &input, f2));
        ensure(short.is_prefix_of(&long), || format!("fueled_run case {case}: {f1} vs {f2}"))?;
    }
    for n in 0..5000u64 {
        let s = SeqCode::decode(n);
        ensure(SeqCode::encode(s.items()).ok() == Some(n), || format!("SeqCode at {n}"))?;
    }
    let mut seen = BTreeSet::new();
    for len in 0..4 {
        for code in 0..6u64.pow(len) {
            let items: Vec<u64> = (0..len).map(|i| code / 6u64.pow(i) % 6).collect();
            let c = SeqCode::encode(&items).map_err(|e| e.to_string())?;
            ensure(SeqCode::decode(c).items() == items.as_slice(), || format!("SeqCode of {items:?}"))?;
            ensure(seen.insert(c), || format!("SeqCode collision at {items:?}"))?;
        }
    }
    for case in 0..100u64 {
        let p = Seq::from_fn(move |i| hashed_bit(case, i) + 2 * i);
        let q = Seq::from_fn(move |i| hashed_bit(case ^ 1, i) * 3 + i * i);
        let (a, b) = deinterleave(&interleave(&p, &q));
        ensure(a.prefix(64) == p.prefix(64) && b.prefix(64) == q.prefix(64), || format!("interleave case {case}"))?;
        let r = Seq::from_fn(move |i| hashed_bit(case, i) + i);
        let (a, b) = deinterleave(&r);
        ensure(interleave(&a, &b).prefix(64) == r.prefix(64), || format!("deinterleave case {case}"))?;
    }
    let space = BanachName::new(realizer::banach::two_generator_max());
    let g = Functional::linear("g", vec![rat(2, 3), rat(-1, 5)], 0);
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let c = Combo::new(vec![rat(rng.gen_range(-9..10), 7), rat(rng.gen_range(-9..10), 5)]);
        let (c1, c2) = (c.clone(), c.clone());
        let s1 = case;
        // ‖rep_i − c‖ ≤ 2^{-(i+2)}, so both are Cauchy names of c.
        let x = CPoint { reps: Seq::from_fn(move |i| c1.add(&Combo::new(vec![pow2_neg(i as u32 + 2) * rat(hashed_bit(s1, i) as i64, 1)]))) };
        let y = CPoint { reps: Seq::from_fn(move |i| c2.sub(&Combo::new(vec![rat(0, 1), pow2_neg(i as u32 + 3)]))) };
        let d = (point_norm(&space, &x).approx(16) - point_norm(&space, &y).approx(16)).abs();
        ensure(d <= pow2_neg(15), || format!("norm differs by {d} in case {case}"))?;
        let e = (g.at(&x).approx(16) - g.at(&y).approx(16)).abs();
        ensure(e <= pow2_neg(15), || format!("functional differs by {e} in case {case}"))?;
    }
    Ok("500 fueled runs, SeqCode bijective below 5000 and on 259 short sequences, 200 interleavings, 100 CPoint pairs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("reduction soundness", soundness),
        ("Range and C1", range_c1),
        ("Sup and C1", sup_c1),
        ("Sep and Path2", sep_path2),
        ("PathB and Path2", pathb_path2),
        ("independence test", pr_vs_rank),
        ("HB to Sep", hb_pipeline),
        ("Sep to HB", sep_hb),
        ("selection", selection),
        ("subcover search", subcovers),
        ("kernel invariants", kernel),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
