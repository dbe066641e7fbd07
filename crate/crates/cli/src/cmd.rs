use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use ramseylab::bounds::checks::{
    admissibility, f_ratio_check, kappa_margin_check, lemma51_check, lemma52_check, optimal_r, FD_TOLERANCE,
    KNOT_TOLERANCE,
};
use ramseylab::bounds::{conlon_bound, es_bound, es_recurrence_table, graham_rodl_bound, thomason_bound, BoundValue};
use ramseylab::coloring::{
    clique_extension_audit, coloring_stats, expansion_identity_check, fundamental_audit, gh_fast, gh_naive,
    lemma31_check, lemma32_check, lemma33_check, BoundTally, GatedCheck, WalkKind,
};
use ramseylab::report::{rational_to_decimal, Comparison};
use ramseylab::search::{ramsey_number_with, search_with, SearchOptions};
use ramseylab::{
    emit_k2c, paley, parse_k2c, BalancedView, CheckReport, Coloring, Config, Error, HpFloat, PatternGraph, SearchMode,
    Verdict,
};

use crate::output::{exit_code, render};
use crate::{Command, Global, Mode};

pub enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<u8, Failure>;

/// Formatting context for one run.
struct Fmt<'a> {
    cfg: &'a Config,
}

impl Fmt<'_> {
    fn hp(&self, x: &HpFloat) -> String {
        x.to_decimal(self.cfg.digits())
    }

    fn q(&self, x: &BigRational) -> String {
        rational_to_decimal(x, self.cfg.digits())
    }

    /// Values computed in double precision are shown at 17 digits.
    fn f(&self, x: f64) -> String {
        if x.is_finite() {
            HpFloat::from_f64(x, 64).to_decimal(17)
        } else {
            x.to_string()
        }
    }

    fn cmp(&self, name: &str, c: &Comparison) -> CheckReport {
        CheckReport::new(name, c.verdict()).with_comparison(c, self.cfg.digits())
    }

    fn bound(&self, name: &str, b: &BoundValue) -> CheckReport {
        let mut r = CheckReport::value(name, self.hp(&b.log_value));
        for t in &b.derivation {
            r = r.param(&format!("term: {}", t.label), self.hp(&t.value));
        }
        r
    }
}

fn write_out(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_coloring(path: &Path) -> Result<Coloring, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_k2c(&text)?)
}

fn emit(name: &str, cfg: &Config, g: &Global, reports: Vec<CheckReport>) -> Out {
    write_out(&render(name, cfg, &reports, g.format), g.output.as_deref())?;
    Ok(exit_code(&reports))
}

pub fn run(command: Command, cfg: &Config, g: &Global) -> Out {
    let f = Fmt { cfg };
    let prec = cfg.precision_bits;
    match command {
        Command::Bounds { k, l, r } => {
            let kl = |rep: CheckReport| rep.param("k", k).param("l", l);
            let mut out = vec![
                kl(f.bound("es-bound", &es_bound(k, l, prec)?)),
                match graham_rodl_bound(k, l, prec) {
                    Ok(b) => kl(f.bound("graham-rodl-bound", &b)),
                    Err(e) => kl(CheckReport::new("graham-rodl-bound", Verdict::Informational)).param("skipped", e),
                },
            ];
            let (hi, lo) = (k.max(l), k.min(l));
            out.push(match thomason_bound(hi, lo, cfg.a, prec) {
                Ok(b) => f.bound("thomason-bound", &b).param("k", hi).param("l", lo).param("A", cfg.a),
                Err(e) => kl(CheckReport::new("thomason-bound", Verdict::Informational)).param("skipped", e),
            });
            out.push(kl(f.bound("conlon-bound", &conlon_bound(k, l, r, cfg.c, prec)?)).param("r", r).param("c", cfg.c));
            emit("bounds", cfg, g, out)
        }
        Command::BoundTable { k_max, l_max, known } => {
            let known: BTreeMap<_, _> = known.into_iter().collect();
            let t = es_recurrence_table(k_max, l_max, &known)?;
            let mut out = Vec::new();
            for a in 1..=k_max {
                for b in 1..=l_max {
                    let v = t.require(a, b)?;
                    out.push(
                        CheckReport::value("r", v.to_string())
                            .param("a", a)
                            .param("b", b)
                            .param("exact", t.is_exact(a, b).unwrap_or(false)),
                    );
                }
            }
            emit("bound-table", cfg, g, out)
        }
        Command::Analyze {
            file,
            k,
            l,
            checks,
            r,
            gamma,
            delta,
            mu,
            nu,
        } => {
            let c = read_coloring(&file)?;
            let v = BalancedView::for_kl(&c, k, l)?;
            let mut out = Vec::new();
            for check in &checks {
                match check.trim() {
                    "goodman" => analyze_goodman(&c, &mut out)?,
                    "expansion" => {
                        for rr in 2..=c.n().min(4) {
                            let e = expansion_identity_check(&v, rr)?;
                            let verdict = if e.equal { Verdict::Pass } else { Verdict::Fail };
                            let mut rep = CheckReport::new("expansion", verdict).param("r", rr);
                            rep.lhs = Some(e.lhs.to_string());
                            rep.rhs = Some(f.q(&e.rhs));
                            rep.margin = Some(f.q(&(e.rhs.clone() - BigRational::from_integer(e.lhs.clone()))));
                            out.push(rep);
                        }
                    }
                    "stats" => {
                        let s = coloring_stats(&v, k, l, r)?;
                        out.push(CheckReport::value("stats: s", f.q(&s.s)));
                        out.push(CheckReport::value("stats: t", f.q(&s.t)));
                        out.push(CheckReport::value("stats: mu", f.q(&s.mu)));
                        if let Some(nu) = &s.nu_emp {
                            out.push(CheckReport::value("stats: nu measured", f.q(nu)));
                        }
                        out.push(CheckReport::value("stats: nu cap", f.q(&s.nu_cap)).param("r", r));
                        let dmin = s.degrees.iter().min().copied().unwrap_or(0);
                        let dmax = s.degrees.iter().max().copied().unwrap_or(0);
                        out.push(CheckReport::value("stats: red degree min", dmin.to_string()));
                        out.push(CheckReport::value("stats: red degree max", dmax.to_string()));
                    }
                    "lemma31" => {
                        let rep = lemma31_check(&v, k, l, &gamma, &delta)?;
                        let gate = if rep.hypothesis_holds() { None } else { Some(Verdict::HypothesisNotMet) };
                        let tally = |name: &str, t: &BoundTally, primary: bool| {
                            let verdict = match (gate, primary) {
                                (_, false) => Verdict::Informational,
                                (Some(v), true) => v,
                                (None, true) if t.holds() => Verdict::Pass,
                                (None, true) => Verdict::Fail,
                            };
                            let mut c = CheckReport::new(name, verdict)
                                .param("checked", t.checked)
                                .param("violations", t.violations);
                            c.margin = t.worst_margin.as_ref().map(|m| f.q(m));
                            if let Some((x, z)) = t.worst_at {
                                c = c.param("worst_at", format!("{x},{z}"));
                            }
                            c
                        };
                        out.push(tally("lemma31: row lower", &rep.row_lower, true));
                        out.push(tally("lemma31: row upper", &rep.row_upper, true));
                        out.push(tally("lemma31: path", &rep.path, true));
                        out.push(tally("lemma31: row lower, y distinct", &rep.row_lower_distinct, false));
                        out.push(tally("lemma31: row upper, y distinct", &rep.row_upper_distinct, false));
                        out.push(tally("lemma31: path, y distinct", &rep.path_distinct, false));
                    }
                    "lemma32" => {
                        let nu = nu_or_measured(&v, nu.as_ref());
                        for d in 1..=2 {
                            let chk = lemma32_check(&v, d, 0, &nu, None, prec)?;
                            out.push(gated(&f, "lemma32", &chk).param("d", d).param("c", 0).param("nu", f.q(&nu)));
                        }
                    }
                    "lemma33" => {
                        let nu = nu_or_measured(&v, nu.as_ref());
                        let mu = mu.clone().unwrap_or_else(|| v.mu());
                        for (len, kind, name) in [
                            (3, WalkKind::Path, "lemma33: path"),
                            (4, WalkKind::Path, "lemma33: path"),
                            (5, WalkKind::Path, "lemma33: path"),
                            (4, WalkKind::Cycle, "lemma33: cycle"),
                        ] {
                            let chk = lemma33_check(&v, len, kind, &mu, &nu, prec)?;
                            out.push(gated(&f, name, &chk).param("length", len).param("mu", f.q(&mu)).param("nu", f.q(&nu)));
                        }
                    }
                    other => {
                        return Err(Error::InvalidArgument(format!("unknown check `{other}`")).into());
                    }
                }
            }
            let out = out
                .into_iter()
                .map(|r| r.param("k", k).param("l", l))
                .collect();
            emit("analyze", cfg, g, out)
        }
        Command::Gh {
            file,
            pattern,
            p,
            k,
            l,
            naive,
        } => {
            let c = read_coloring(&file)?;
            let h = parse_pattern(&pattern)?;
            let v = match (p, k, l) {
                (Some(p), None, None) => BalancedView::new(&c, p)?,
                (None, Some(k), Some(l)) => BalancedView::for_kl(&c, k, l)?,
                _ => {
                    return Err(Error::InvalidArgument("give either --p or both --k and --l".into()).into());
                }
            };
            let fast = gh_fast(&v, &h)?;
            let mut rep = CheckReport::value("g_H", f.q(&fast))
                .param("pattern", &pattern)
                .param("p", v.p());
            if naive {
                let slow = gh_naive(&v, &h)?;
                rep.verdict = if slow == fast { Verdict::Pass } else { Verdict::Fail };
                rep.rhs = Some(f.q(&slow));
                rep.margin = Some(f.q(&(slow - &fast)));
            }
            emit("gh", cfg, g, vec![rep])
        }
        Command::Audit {
            file,
            k,
            l,
            r,
            gamma,
            delta,
            known,
            admissibility: adm,
        } => {
            let c = read_coloring(&file)?;
            let v = BalancedView::for_kl(&c, k, l)?;
            let a = fundamental_audit(&v, k, l, r, &gamma, &delta)?;
            let mut out = vec![CheckReport::new("audit", a.verdict())
                .param("avoids_red", a.avoids_red)
                .param("avoids_blue", a.avoids_blue)
                .param("residual_mode", a.residual_mode.as_str())
                .param(
                    "residual_consistent",
                    a.residual_consistent.map_or("n/a".to_string(), |b| b.to_string()),
                )
                .param("triangle_cancellation_exact", a.triangle_cancellation_exact)];
            for t in &a.terms {
                out.push(CheckReport::value(format!("audit: {}", t.label), f.q(&t.value)));
            }
            let known: BTreeMap<_, _> = known.into_iter().collect();
            let dims = (k as u32 + 1).max(l as u32 + 1);
            let table = es_recurrence_table(dims, dims, &known)?;
            match clique_extension_audit(&c, k, l, r, &table) {
                Ok(e) => {
                    let side = |name: &str, got: u64, cap: u128, exact: bool| {
                        let mut rep = CheckReport::new(name, e.verdict())
                            .param("cap_from_exact_value", exact)
                            .param("avoids_red", e.avoids_red)
                            .param("avoids_blue", e.avoids_blue);
                        rep.lhs = Some(got.to_string());
                        rep.rhs = Some(cap.to_string());
                        rep.margin = Some((cap as i128 - got as i128).to_string());
                        rep
                    };
                    out.push(side("clique extension: red", e.red_max_extensions, e.red_cap, e.red_cap_exact));
                    out.push(side("clique extension: blue", e.blue_max_extensions, e.blue_cap, e.blue_cap_exact));
                }
                Err(e @ Error::MissingTableEntry { .. }) | Err(e @ Error::InvalidArgument(_)) => {
                    out.push(CheckReport::new("clique extension", Verdict::Informational).param("skipped", e));
                }
                Err(e) => return Err(e.into()),
            }
            if adm {
                let rep = admissibility(k, l, r as u32, &gamma, &delta, cfg.c, None, prec)?;
                let hyp = rep.hypotheses_hold();
                for (name, cmp) in rep.conditions() {
                    let mut row = f.cmp(&format!("admissibility: {name}"), cmp);
                    if name.starts_with("k gamma") {
                        if !hyp {
                            row.verdict = Verdict::HypothesisNotMet;
                        }
                    } else if !cmp.holds {
                        row.verdict = Verdict::HypothesisNotMet;
                    }
                    out.push(row);
                }
            }
            let out = out
                .into_iter()
                .map(|rep| rep.param("k", k).param("l", l).param("r", r))
                .collect();
            emit("audit", cfg, g, out)
        }
        Command::Search {
            n,
            a,
            b,
            mode,
            progress,
            witness,
        } => {
            let opts = SearchOptions {
                n_guard: cfg.search_n_guard,
                progress,
                ..SearchOptions::default()
            };
            let mode = match mode {
                Mode::First => SearchMode::First,
                Mode::Exhaust => SearchMode::Exhaust,
            };
            let res = search_with(n, a, b, mode, &opts)?;
            if let (Some(path), Some(w)) = (&witness, &res.witness) {
                write_out(&emit_k2c(w), Some(path))?;
            }
            let mut rep = CheckReport::value("search", res.status.as_str().to_string())
                .param("n", n)
                .param("a", a)
                .param("b", b)
                .param("mode", if mode == SearchMode::First { "first" } else { "exhaust" })
                .param("nodes_explored", res.nodes_explored);
            if let Some(count) = res.witness_count {
                rep = rep.param("witness_count", count);
            }
            if let Some(w) = &res.witness {
                rep = rep.param("witness_red_edges", w.red_edge_count());
            }
            emit("search", cfg, g, vec![rep])
        }
        Command::Ramsey {
            a,
            b,
            nmax,
            progress,
            witness,
        } => {
            let opts = SearchOptions {
                n_guard: cfg.search_n_guard,
                progress,
                ..SearchOptions::default()
            };
            let res = ramsey_number_with(a, b, nmax, &opts)?;
            if let (Some(path), Some(w)) = (&witness, &res.witness) {
                write_out(&emit_k2c(w), Some(path))?;
            }
            let mut out: Vec<CheckReport> = res
                .steps
                .iter()
                .map(|(n, status, nodes)| {
                    CheckReport::value("search", status.as_str().to_string())
                        .param("n", n)
                        .param("nodes_explored", nodes)
                })
                .collect();
            let value = res.value.map_or_else(|| "unresolved".to_string(), |v| v.to_string());
            out.push(
                CheckReport::value("ramsey-number", value)
                    .param("a", a)
                    .param("b", b)
                    .param("n_max", nmax),
            );
            if g.format == crate::Format::Text {
                let text = match res.value {
                    Some(v) => format!("{v}\n"),
                    None => format!("unresolved up to n = {nmax}\n"),
                };
                write_out(&text, g.output.as_deref())?;
                return Ok(0);
            }
            emit("ramsey", cfg, g, out)
        }
        Command::Paley { q } => {
            write_out(&emit_k2c(&paley(q)?), g.output.as_deref())?;
            Ok(0)
        }
        Command::VerifyLemma51 { r, grid } => {
            let mut out = Vec::new();
            for r in r {
                let rep = lemma51_check(r, grid)?;
                let rf = r as f64;
                let row = |name: &str, lhs: f64, rhs: f64, ok: bool| {
                    let mut c = CheckReport::new(name, if ok { Verdict::Pass } else { Verdict::Fail })
                        .param("r", r)
                        .param("grid", grid);
                    c.lhs = Some(f.f(lhs));
                    c.rhs = Some(f.f(rhs));
                    c.margin = Some(f.f(rhs - lhs));
                    c
                };
                out.push(row("alpha >= 0 on [0,1]", -rep.min_value, 0.0, rep.min_value >= 0.0));
                out.push(row(
                    "alpha <= (r-4)/2 x on [0,1]",
                    -rep.upper_margin,
                    0.0,
                    rep.upper_margin >= 0.0,
                ));
                out.push(row("|alpha'| <= r^2", rf * rf - rep.d1_margin, rf * rf, rep.d1_margin >= 0.0));
                let d2cap = 20.0 * rf * rf * rf;
                out.push(row("|alpha''| <= 20 r^3", d2cap - rep.d2_margin, d2cap, rep.d2_margin >= 0.0));
                out.push(
                    row("alpha' vs difference quotient", rep.fd_d1_error, FD_TOLERANCE, rep.fd_d1_error <= FD_TOLERANCE)
                        .param("points", rep.fd_points),
                );
                out.push(
                    row("alpha'' vs difference quotient", rep.fd_d2_error, FD_TOLERANCE, rep.fd_d2_error <= FD_TOLERANCE)
                        .param("points", rep.fd_points),
                );
                out.push(row("jump at knots", rep.knot_jump, KNOT_TOLERANCE, rep.knot_jump <= KNOT_TOLERANCE));
            }
            emit("verify-lemma51", cfg, g, out)
        }
        Command::VerifyLemma52 { r, k, l, m, f_ratio } => {
            let mut out = Vec::new();
            for m in m {
                let tag = |rep: CheckReport| rep.param("r", r).param("k", k).param("l", l).param("m", m);
                match lemma52_check(r, k, l, m, prec) {
                    Ok(rep) => {
                        out.push(tag(f.cmp("exp(phi(k,l) - phi(k-m,l)) <= 1 + m Gamma", &rep.k_step)));
                        out.push(tag(f.cmp("exp(phi(k,l) - phi(k,l-m)) <= 1 + m Delta", &rep.l_step)));
                    }
                    Err(e @ Error::HypothesisRange(_)) => {
                        out.push(tag(CheckReport::new("rate steps", Verdict::HypothesisNotMet).param("reason", e)));
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                }
                if f_ratio {
                    let rep = f_ratio_check(r, k, l, m, cfg.c, None, prec)?;
                    let extra = |c: CheckReport| tag(c).param("N", f.hp(&rep.big_n)).param("truncated", rep.truncated);
                    out.push(extra(f.cmp("(1+1/n) f(k-m,l)/f(k,l) <= 1 + m gamma", &rep.k_step)));
                    out.push(extra(f.cmp("(1+1/n) f(k,l-m)/f(k,l) <= 1 + m delta", &rep.l_step)));
                }
            }
            emit("verify-lemma52", cfg, g, out)
        }
        Command::KappaMargin { r, grid } => {
            let mut out = Vec::new();
            for r in r {
                let rep = kappa_margin_check(r, grid)?;
                let mut row = CheckReport::new(
                    "kappa - alpha >= 1/2 on [1-1/r, 1]",
                    if rep.holds() { Verdict::Pass } else { Verdict::Fail },
                )
                .param("r", r)
                .param("grid", grid)
                .param("argmin", f.q(&rep.argmin))
                .param("margin_at_left", f.q(&rep.margin_at_left))
                .param("margin_at_one", f.q(&rep.margin_at_one));
                row.margin = Some(f.q(&rep.min_margin));
                out.push(row);
            }
            emit("kappa-margin", cfg, g, out)
        }
        Command::OptimalR { k, r_min } => {
            let o = optimal_r(k, cfg.c, cfg.d, r_min, prec)?;
            let tag = |rep: CheckReport| rep.param("k", k).param("c", cfg.c).param("d", cfg.d).param("r_min", r_min);
            let out = vec![
                tag(CheckReport::value("formula r", o.formula_r_raw.to_string())),
                tag(CheckReport::value("r", o.r.to_string())),
                tag(CheckReport::value("exponent over C(2k,k) at r", f.hp(&o.theorem_exponent))),
                tag(CheckReport::value("power exponent at r", f.hp(&o.power_exponent))),
                tag(CheckReport::value("scan: best r for exponent over C(2k,k)", o.scan_r_theorem.to_string())
                    .param("exponent", f.hp(&o.scan_theorem_exponent))),
                tag(CheckReport::value("scan: best r for power exponent", o.scan_r_power.to_string())
                    .param("exponent", f.hp(&o.scan_power_exponent))),
            ];
            emit("optimal-r", cfg, g, out)
        }
    }
}

fn analyze_goodman(c: &Coloring, out: &mut Vec<CheckReport>) -> Result<(), Failure> {
    if c.n() < 3 {
        out.push(CheckReport::new("goodman", Verdict::Informational).param("skipped", "n < 3"));
        return Ok(());
    }
    let formula = c.goodman_triangles()?;
    let counted = c.count_red_cliques(3)? + c.count_blue_cliques(3)?;
    let mut rep = CheckReport::new("goodman", if formula == counted { Verdict::Pass } else { Verdict::Fail });
    rep.lhs = Some(formula.to_string());
    rep.rhs = Some(counted.to_string());
    rep.margin = Some((counted as i128 - formula as i128).to_string());
    out.push(rep);
    Ok(())
}

fn nu_or_measured(v: &BalancedView<'_>, nu: Option<&BigRational>) -> BigRational {
    nu.cloned()
        .or_else(|| v.nu_emp())
        .unwrap_or_else(|| BigRational::from_integer(0.into()))
}

fn gated(f: &Fmt<'_>, name: &str, chk: &GatedCheck) -> CheckReport {
    let mut rep = match &chk.comparison {
        Some(c) => f.cmp(name, c),
        None => CheckReport::new(name, Verdict::HypothesisNotMet),
    };
    rep.verdict = chk.verdict();
    if let Some(reason) = &chk.gate.reason {
        rep = rep.param("gate", reason);
    }
    rep.param("sum", f.q(&chk.sum))
}

fn parse_pattern(s: &str) -> Result<PatternGraph, Failure> {
    let bad = || Failure::Lib(Error::InvalidArgument(format!("bad pattern `{s}`")));
    let mut parts = s.splitn(3, ':');
    let kind = parts.next().ok_or_else(bad)?;
    let n: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let h = match (kind, parts.next()) {
        ("path", None) => PatternGraph::path(n)?,
        ("cycle", None) => PatternGraph::cycle(n)?,
        ("complete", None) => PatternGraph::complete(n)?,
        ("empty", None) => PatternGraph::empty(n)?,
        ("edges", Some(list)) => {
            let mut edges = Vec::new();
            for e in list.split(',').filter(|e| !e.is_empty()) {
                let (a, b) = e.split_once('-').ok_or_else(bad)?;
                edges.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
            }
            PatternGraph::new(n, &edges)?
        }
        _ => return Err(bad()),
    };
    Ok(h)
}
