//! The acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hfkcert::bordered::{box_tensor, cfa_cable31, cfa_nu, lot, Flavor};
use hfkcert::complex::{
    example_complex_c, hat_homology, hat_homology_total, localized_rank, rectangle, reduce, Bidegree, GradedComplex,
};
use hfkcert::golden;
use hfkcert::involutive::{
    curly_t_coefficient, im_membership, obstruction_certificate, t_sum_coefficient, verify_certificate, Coefficient,
    TensorWord, Verdict,
};
use hfkcert::weird::{
    assign_gradings, check_weird_k0, check_weird_simple, exit_code, hat_basis_data, run_k0_pipeline, GradingMode,
    Mutation, PipelineOptions, WeirdInputs,
};
use rand::Rng;

use common::{brute_hat_homology, Piece};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// The cable pairing, reduced and graded against the reference table.
struct Cable {
    unreduced: GradedComplex,
    reduced: GradedComplex,
    graded: Result<GradedComplex, String>,
}

fn cable() -> Cable {
    let m = golden::fig3_m();
    let unreduced = box_tensor(&cfa_cable31(), &m, Flavor::Minus).unwrap();
    let reduced = reduce(&unreduced).complex;
    let d_degrees: BTreeMap<String, Bidegree> =
        m.gens.iter().filter_map(|g| g.deg.map(|d| (g.name.clone(), d))).collect();
    let (_, graded) = assign_gradings(GradingMode::Fig6, &unreduced, &reduced, &d_degrees, &golden::fig6());
    Cable { unreduced, reduced, graded }
}

fn degree_multiset(c: &GradedComplex) -> BTreeMap<Bidegree, usize> {
    let mut m = BTreeMap::new();
    for g in &c.gens {
        *m.entry(g.deg.unwrap()).or_insert(0) += 1;
    }
    m
}

fn lengths(c: &GradedComplex) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for (_, _, mono) in c.arrows() {
        *m.entry(mono.u_exp()).or_insert(0) += 1;
    }
    m
}

fn criterion_1() -> Outcome {
    let l = lot(&example_complex_c()).unwrap();
    let m = golden::fig3_m();
    let iso = l.find_isomorphism(&m).is_some();
    let ok = iso && l.len() == 13 && l.arrows.len() == 13 && m.len() == 13 && m.arrows.len() == 13;
    outcome(ok, format!("lot(C) {} gens / {} arrows, isomorphic to reference: {iso}", l.len(), l.arrows.len()))
}

fn criterion_2() -> Outcome {
    let mut r = common::rng(2);
    let nu = cfa_nu();
    for k in 0..100 {
        let c = common::random_multirect(&mut r, 4);
        let paired = box_tensor(&nu, &lot(&c).unwrap(), Flavor::Hat).unwrap();
        let lhs = hat_homology(&paired).unwrap();
        let rhs = brute_hat_homology(&c.hat_truncate());
        if lhs != rhs {
            return outcome(false, format!("instance {k}: {lhs:?} vs {rhs:?}"));
        }
    }
    outcome(true, "100 random multirectangular complexes")
}

fn criterion_3() -> Outcome {
    let c = cable();
    let r = &c.reduced;
    let want = BTreeMap::from([(1, 8), (2, 5), (6, 2)]);
    let isolated: Vec<usize> =
        (0..r.len()).filter(|&i| r.diff.keys().all(|&(f, t)| f != i && t != i)).collect();
    let Ok(g) = &c.graded else {
        return outcome(false, "fig6 grading failed");
    };
    let fig6 = golden::fig6();
    let at = |d: Bidegree| g.gens.iter().enumerate().filter(|(_, x)| x.deg == Some(d)).map(|(i, _)| i).collect::<Vec<_>>();
    let (zeta, alpha) = (at(Bidegree::new(1, 1)), at(Bidegree::new(2, 0)));
    let phi = g.basepoint_phi();
    let phi_ok = zeta.len() == 1
        && alpha.len() == 1
        && (0..g.len()).all(|i| phi.get(i, zeta[0]) == (i == alpha[0]));
    let ok = c.unreduced.len() == 53
        && r.len() == 31
        && r.arrow_count() == 15
        && lengths(r) == want
        && isolated.len() == 1
        && degree_multiset(g) == degree_multiset(&fig6)
        && at(Bidegree::new(0, 0)).len() == 1
        && phi_ok;
    outcome(
        ok,
        format!(
            "{} gens, {} arrows, lengths {:?}, isolated {:?}, bidegrees match: {}, phi(zeta)=alpha: {phi_ok}",
            r.len(),
            r.arrow_count(),
            lengths(r),
            isolated.iter().map(|&i| r.name(i)).collect::<Vec<_>>(),
            degree_multiset(g) == degree_multiset(&fig6)
        ),
    )
}

fn criterion_4() -> Outcome {
    let f = golden::fig6();
    let bad = f
        .arrows()
        .filter(|&(a, b, m)| {
            let l = m.u_exp() as i64;
            m.v_exp() != 0 || f.deg(a).unwrap() - f.deg(b).unwrap() != Bidegree::new(1 - 2 * l, 1)
        })
        .count();
    let ms = degree_multiset(&f);
    let symmetric = ms.iter().all(|(d, n)| ms.get(&d.swap()) == Some(n));
    outcome(
        bad == 0 && symmetric && f.len() == 31,
        format!("{} arrows, {bad} off-rule, multiset of {} swap-invariant: {symmetric}", f.arrow_count(), f.len()),
    )
}

fn criterion_5() -> Outcome {
    let c = cable();
    let Ok(g) = &c.graded else {
        return outcome(false, "fig6 grading failed");
    };
    let (m, fig6, pattern) = (golden::fig3_m(), golden::fig6(), cfa_cable31());
    let wc = check_weird_k0(&WeirdInputs { reduced: g, m: &m, fig6: &fig6, pattern: &pattern });
    let steps = &wc.certificate.steps;
    let all = steps.len() == 4 && steps.iter().all(|s| s.verdict == Verdict::Pass && !s.evidence.is_empty());
    let free = steps.iter().any(|s| s.evidence.iter().any(|e| e.contains("FREE_SUMMAND")));
    outcome(
        all && free && wc.overall() == Verdict::Pass,
        format!(
            "v1={} v2={}; {}",
            wc.v1.as_deref().unwrap_or("?"),
            wc.v2.as_deref().unwrap_or("?"),
            steps.iter().map(|s| format!("{} {}", s.id, s.verdict.label())).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let c = cable();
    let Ok(g) = &c.graded else {
        return outcome(false, "fig6 grading failed");
    };
    let (m, fig6, pattern) = (golden::fig3_m(), golden::fig6(), cfa_cable31());
    let wc = check_weird_k0(&WeirdInputs { reduced: g, m: &m, fig6: &fig6, pattern: &pattern });
    let b = hat_basis_data(g, &wc).unwrap();
    let cert = obstruction_certificate(&b);
    let s: TensorWord = [b.v2, b.v1, b.v1, b.v2];
    let t_sum = t_sum_coefficient(&b, &s).value == Some(true);
    let curly: Vec<_> = cert.steps.iter().filter(|st| st.id.starts_with("curly-t/")).collect();
    let curly_ok = curly.len() == 12 && curly.iter().all(|st| st.verdict == Verdict::Pass);
    // independent spot check of the sweep through the per-word API
    let mut r = common::rng(6);
    let n = b.len();
    let sampled = (0..5_000).all(|_| {
        let x: TensorWord = [r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n)];
        curly_t_coefficient(&b, &x, &s).iter().all(|(_, c)| matches!(c, Coefficient::Zero { .. }))
    });
    let bin = Command::new(env!("CARGO_BIN_EXE_hfkcert")).args(["k0-certify", "--format", "text"]).output();
    let exit = bin.as_ref().ok().and_then(|o| o.status.code());
    let ok = t_sum
        && curly_ok
        && sampled
        && cert.overall == Verdict::Pass
        && verify_certificate(&cert)
        && exit == Some(0);
    outcome(
        ok,
        format!(
            "t_sum = 1: {t_sum}; 12 curly-t terms zero over {n}^4 words: {curly_ok}; 5000 sampled words agree: {sampled}; k0-certify exit {exit:?}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut r = common::rng(7);
    for k in 0..200 {
        let pieces = r.gen_range(1..=6);
        let c = common::random_complex(&mut r, &[Piece::Unit], pieces, 8);
        let acyclic = hat_homology_total(&c.hat_truncate()).unwrap() == 0;
        if !acyclic || !reduce(&c).complex.is_empty() || localized_rank(&c) != 0 {
            return outcome(false, format!("(a) instance {k}"));
        }
    }
    for k in 0..200 {
        let pieces = r.gen_range(1..=5);
        let c = common::random_complex(&mut r, &[Piece::Rect, Piece::Unit], pieces, 8);
        let t = common::total(&brute_hat_homology(&c.hat_truncate()));
        if localized_rank(&c) != 0 || t % 2 != 0 {
            return outcome(false, format!("(b) instance {k}: hat dimension {t}"));
        }
    }
    for i in 1..=5 {
        for j in 1..=5 {
            let t = common::total(&brute_hat_homology(&rectangle("c", i, j, Bidegree::new(0, 0)).hat_truncate()));
            if t != 4 {
                return outcome(false, format!("(c) rectangle ({i},{j}) has hat dimension {t}"));
            }
        }
    }
    let tc = common::total(&brute_hat_homology(&example_complex_c().hat_truncate()));
    outcome(tc == 5, format!("(a) 200 acyclic, (b) 200 rectangle sums, (c) rectangles 4, C {tc}"))
}

fn criterion_8() -> Outcome {
    let mut r = common::rng(8);
    let all = [Piece::Free, Piece::Unit, Piece::UStep, Piece::VStep, Piece::Rect];
    for k in 0..200 {
        let pieces = r.gen_range(1..=6);
        let c = common::random_complex(&mut r, &all, pieces, 10);
        let red = reduce(&c);
        let same = brute_hat_homology(&c.hat_truncate()) == brute_hat_homology(&red.complex.hat_truncate());
        if !same || red.complex.has_unit_arrow() || !red.verify_against(&c) {
            return outcome(false, format!("reduction instance {k}"));
        }
    }
    for k in 0..100 {
        let n = r.gen_range(1..=8);
        let iota = common::random_matrix(&mut r, n, 0.3);
        let image = common::exhaustive_image(&iota);
        for bits in 0..1u32 << n {
            let v: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            if im_membership(&v, &iota).unwrap() != image.contains(&v) {
                return outcome(false, format!("membership instance {k}"));
            }
        }
    }
    let mut seen = [0usize; 2];
    for k in 0..300 {
        let b = common::random_hat_basis(&mut r);
        let fast = check_weird_simple(&b).unwrap();
        if fast != common::brute_weird_simple(&b) {
            return outcome(false, format!("weird-simple instance {k}"));
        }
        seen[fast as usize] += 1;
    }
    outcome(
        seen[0] > 0 && seen[1] > 0,
        format!("200 reductions, 100 membership tables, 300 splittings ({} invariant, {} not)", seen[1], seen[0]),
    )
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in Mutation::ALL {
        let rep = run_k0_pipeline(&PipelineOptions { mutation: Some(m), ..Default::default() }).unwrap();
        let stage = rep.failed_stage.clone();
        ok &= exit_code(&rep) == 1 && stage.is_some();
        lines.push(format!("{} -> {}", m.name(), stage.as_deref().unwrap_or("none")));
    }
    outcome(ok, lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("lot(C) matches the reference type-D structure", criterion_1, Duration::from_secs(1)),
        ("nu pairing recovers hat homology", criterion_2, Duration::from_secs(30)),
        ("cable pairing shape and gradings", criterion_3, Duration::from_secs(5)),
        ("reference table obeys the grading rule", criterion_4, Duration::from_secs(1)),
        ("weirdness certificate", criterion_5, Duration::from_secs(1)),
        ("obstruction certificate", criterion_6, Duration::from_secs(10)),
        ("structural lemmas", criterion_7, Duration::from_secs(30)),
        ("oracle equivalences", criterion_8, Duration::from_secs(60)),
        ("mutation sensitivity", criterion_9, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let ok = o.ok && took <= *budget;
        failed += !ok as usize;
        println!(
            "criterion {}: {} {name} ({:.2}s, budget {}s) {}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
