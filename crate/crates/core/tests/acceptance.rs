//! One line per acceptance criterion, then a single assertion that all passed.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramseylab::bounds::checks::{kappa_margin_check, lemma51_check, lemma52_check, optimal_r, theorem_exponent};
use ramseylab::bounds::classic::{MINUS_PHI, R_POWER};
use ramseylab::bounds::{conlon_bound, es_bound, log_binomial, thomason_bound};
use ramseylab::coloring::{expansion_identity_check, gh_fast, gh_naive, lemma33_check, WalkKind};
use ramseylab::{emit_k2c, paley, parse_k2c, ramsey_number, verify_avoidance, BalancedView, Coloring, HpFloat, PatternGraph};

const PREC: u32 = 256;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_coloring(rng: &mut ChaCha8Rng, n: usize) -> Coloring {
    let density = rng.gen_range(0.2..0.8);
    Coloring::from_fn(n, |_, _| rng.gen_bool(density)).unwrap()
}

/// `|a - b| <= 2^(slack - prec) * max(1, |a|)`.
fn close(a: &HpFloat, b: &HpFloat, slack: i64) -> bool {
    let diff = (a - b).abs();
    let scale = a.abs().ilog2().unwrap_or(0).max(0);
    diff.ilog2().is_none_or(|e| e <= scale + slack - PREC as i64)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_small_ramsey() -> Outcome {
    let start = Instant::now();
    for (a, b, nmax, want) in [(3, 3, 10, 6), (3, 4, 12, 9)] {
        let res = ramsey_number(a, b, nmax).map_err(|e| e.to_string())?;
        ensure(res.value == Some(want), || format!("r({a},{b}) = {:?}, expected {want}", res.value))?;
        let w = res.witness.as_ref().ok_or("no witness")?;
        ensure(w.n() == want - 1 && verify_avoidance(w, a, b), || format!("bad witness for r({a},{b})"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1}s"))?;
    Ok(format!("r(3,3) = 6, r(3,4) = 9, witnesses verified, {secs:.2}s"))
}

fn c2_paley17() -> Outcome {
    let start = Instant::now();
    let p = paley(17).map_err(|e| e.to_string())?;
    let mut quads = 0;
    let mut mono = 0;
    for a in 0..17 {
        for b in a + 1..17 {
            for c in b + 1..17 {
                for d in c + 1..17 {
                    quads += 1;
                    let e = [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)].map(|(x, y)| p.is_red(x, y));
                    if e.iter().all(|&r| r) || e.iter().all(|&r| !r) {
                        mono += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(quads == 2380 && mono == 0, || format!("{mono} monochromatic of {quads}"))?;
    ensure(verify_avoidance(&p, 4, 4), || "verify_avoidance rejected paley(17)".into())?;
    ensure(secs < 1.0, || format!("took {secs:.3}s"))?;
    Ok(format!("{quads} quadruples, none monochromatic, {secs:.3}s"))
}

fn c3_expansion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ps = [q(1, 3), q(2, 5), q(1, 2)];
    let mut checks = 0;
    for i in 0..120 {
        let n = rng.gen_range(1..=10);
        let c = random_coloring(&mut rng, n);
        let v = BalancedView::new(&c, ps[i % 3].clone()).map_err(|e| e.to_string())?;
        for r in 2..=4 {
            let e = expansion_identity_check(&v, r).map_err(|e| e.to_string())?;
            ensure(e.equal, || format!("coloring {i}, n = {n}, r = {r}: {} != {}", e.lhs, e.rhs))?;
            checks += 1;
        }
    }
    Ok(format!("120 colorings, {checks} exact equalities"))
}

fn c4_goodman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..150 {
        let n = rng.gen_range(3..=10);
        let c = random_coloring(&mut rng, n);
        let mut brute = 0u128;
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let (a, b, d) = (c.is_red(x, y), c.is_red(x, z), c.is_red(y, z));
                    if a == b && b == d {
                        brute += 1;
                    }
                }
            }
        }
        let g = c.goodman_triangles().map_err(|e| e.to_string())?;
        ensure(g == brute, || format!("coloring {i}: formula {g}, enumeration {brute}"))?;
    }
    Ok("150 colorings agree".into())
}

fn c5_gh_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let subs = PatternGraph::all_subgraphs(4).map_err(|e| e.to_string())?;
    let ps = [q(1, 3), q(2, 5), q(1, 2)];
    for i in 0..24 {
        let n = rng.gen_range(1..=10);
        let c = random_coloring(&mut rng, n);
        let v = BalancedView::new(&c, ps[i % 3].clone()).map_err(|e| e.to_string())?;
        for h in &subs {
            let fast = gh_fast(&v, h).map_err(|e| e.to_string())?;
            let naive = gh_naive(&v, h).map_err(|e| e.to_string())?;
            ensure(fast == naive, || format!("coloring {i}, H = {:?}: {fast} != {naive}", h.edges()))?;
        }
    }
    Ok(format!("24 colorings x {} subgraphs of K_4 agree", subs.len()))
}

fn c6_walk_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ps = [q(1, 3), q(2, 5), q(1, 2)];
    let mut gated = 0;
    let mut checks = 0;
    for i in 0..300 {
        let n = rng.gen_range(2..=10);
        let c = random_coloring(&mut rng, n);
        let v = BalancedView::new(&c, ps[i % 3].clone()).map_err(|e| e.to_string())?;
        let Some(nu) = v.nu_emp() else { continue };
        let mu = v.mu();
        let mut all = vec![(3, WalkKind::Path), (4, WalkKind::Path), (5, WalkKind::Path), (4, WalkKind::Cycle)]
            .into_iter()
            .map(|(len, kind)| lemma33_check(&v, len, kind, &mu, &nu, PREC).map(|r| (len, kind, r)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        if !all[0].2.gate.passed {
            continue;
        }
        gated += 1;
        for (len, kind, r) in all.drain(..) {
            let cmp = r.comparison.ok_or("gate passed without a comparison")?;
            ensure(cmp.holds, || format!("coloring {i}, {kind:?} of length {len} violated"))?;
            checks += 1;
        }
    }
    ensure(gated >= 50, || format!("only {gated} colorings passed the gate"))?;
    Ok(format!("{gated} of 300 colorings gated, {checks} bounds hold"))
}

fn c7_profile() -> Outcome {
    let start = Instant::now();
    let mut worst_fd: f64 = 0.0;
    for r in 4..=16 {
        let rep = lemma51_check(r, 10_000).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("r = {r}: {rep:?}"))?;
        worst_fd = worst_fd.max(rep.fd_d1_error).max(rep.fd_d2_error);
    }
    Ok(format!(
        "r = 4..16 on 10^4 points, worst derivative mismatch {worst_fd:.2e}, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn c8_rate_steps() -> Outcome {
    let start = Instant::now();
    let k = 2_000_000_000;
    let mut least: Option<HpFloat> = None;
    for m in [1, 2, 4] {
        let rep = lemma52_check(5, k, k, m, PREC).map_err(|e| e.to_string())?;
        for cmp in [&rep.k_step, &rep.l_step] {
            ensure(cmp.holds && cmp.margin.is_positive(), || format!("m = {m}: margin {}", cmp.margin.to_decimal(12)))?;
            if least.as_ref().is_none_or(|l| cmp.margin < *l) {
                least = Some(cmp.margin.clone());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3}s"))?;
    Ok(format!(
        "m = 1, 2, 4 hold, least margin {}, {secs:.3}s",
        least.map(|l| l.to_decimal(6)).unwrap_or_default()
    ))
}

fn c9_kappa() -> Outcome {
    let mut least: Option<BigRational> = None;
    for r in 5..=16i64 {
        let rep = kappa_margin_check(r as u32, 10_000).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("r = {r}: min margin {}", rep.min_margin))?;
        let want = q(r - 3, 2) - q(r - 4, 4) - q(1, 2);
        ensure(rep.margin_at_one == want, || format!("r = {r}: margin at 1 is {}", rep.margin_at_one))?;
        if least.as_ref().is_none_or(|l| rep.min_margin < *l) {
            least = Some(rep.min_margin);
        }
    }
    Ok(format!("r = 5..16, least margin above 1/2 is {}", least.unwrap()))
}

fn c10_diagonal() -> Outcome {
    for k in [1_000u64, 1_000_000] {
        for r in [5u32, 8] {
            let b = conlon_bound(k, k, r, 1.0, PREC).map_err(|e| e.to_string())?;
            let excess = &b.log_value - log_binomial(2 * k, k, PREC).map_err(|e| e.to_string())?;
            let record = b.term(R_POWER).ok_or("no r-power term")? + b.term(MINUS_PHI).ok_or("no phi term")?;
            let want = theorem_exponent(k, r, 1.0, PREC);
            ensure(close(&excess, &want, 16) && close(&record, &want, 16), || {
                format!("k = {k}, r = {r}: {} vs {}", excess.to_decimal(30), want.to_decimal(30))
            })?;
        }
    }
    let mut shapes = Vec::new();
    for k in [1_000_000u64, 1_000_000_000, 1_000_000_000_000] {
        let o = optimal_r(k, 1.0, 1.0, 5, PREC).map_err(|e| e.to_string())?;
        let ln_k = HpFloat::from_u64(k, PREC).ln();
        let cap = -(HpFloat::from_f64(0.01, PREC) * &ln_k * &ln_k / ln_k.ln());
        ensure(o.scan_power_exponent <= cap, || {
            format!("k = {k}: exponent {} above {}", o.scan_power_exponent.to_decimal(8), cap.to_decimal(8))
        })?;
        shapes.push(format!("{:.1}", o.scan_power_exponent.to_f64()));
    }
    Ok(format!("derivation records match; scan exponents {}", shapes.join(", ")))
}

fn c11_thomason() -> Outcome {
    for k in [100u64, 10_000] {
        let t = thomason_bound(k, k, 0.0, PREC).map_err(|e| e.to_string())?;
        let e = es_bound(k, k, PREC).map_err(|e| e.to_string())?;
        let half_ln = HpFloat::from_u64(k, PREC).ln().mul_pow2(-1);
        let want = &e.log_value - &half_ln;
        ensure(t.log_value == want, || {
            format!("k = {k}: {} vs {}", t.log_value.to_decimal(40), want.to_decimal(40))
        })?;
    }
    Ok("k = 100, 10^4 equal in log space".into())
}

fn c12_k2c() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..1000 {
        let n = rng.gen_range(1..=40);
        let c = random_coloring(&mut rng, n);
        let text = emit_k2c(&c);
        let back = parse_k2c(&text).map_err(|e| format!("coloring {i}: {e}"))?;
        ensure(back == c, || format!("coloring {i} changed in the round trip"))?;
        ensure(emit_k2c(&back) == text, || format!("coloring {i} re-emitted differently"))?;
        let canonical = text.is_ascii()
            && !text.contains('\r')
            && text.ends_with('\n')
            && text.lines().all(|l| !l.ends_with(' '));
        ensure(canonical, || format!("coloring {i} emitted non-canonical text"))?;
    }
    let golden = "K2C v1\nn=5\n-RBBR\nR-RBB\nBR-RB\nBBR-R\nRBBR-\n";
    let pent = emit_k2c(&paley(5).map_err(|e| e.to_string())?);
    ensure(pent == golden, || format!("pentagon emitted as {pent:?}"))?;
    Ok("1000 random colorings round-trip, pentagon matches its golden bytes".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("small Ramsey numbers by search", c1_small_ramsey),
        ("paley(17) avoids K_4 in both colours", c2_paley17),
        ("clique expansion identity", c3_expansion),
        ("Goodman triangle formula", c4_goodman),
        ("g_H fast = naive", c5_gh_oracle),
        ("walk bounds on gated colorings", c6_walk_bounds),
        ("alpha profile bounds and derivatives", c7_profile),
        ("rate step inequalities", c8_rate_steps),
        ("kappa margin", c9_kappa),
        ("diagonal exponent identity", c10_diagonal),
        ("Thomason at A = 0", c11_thomason),
        ("K2C round trip", c12_k2c),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
