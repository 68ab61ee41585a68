use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::grading::{assign_gradings, GradingMode, GradingOutcome};
use super::{check_weird_k0, hat_basis_data, verify_weirdness, WeirdInputs};
use crate::bordered::{box_tensor, cable31_diagram, chord_closure, lot, AlgElt, Flavor, TypeA, TypeD};
use crate::complex::{example_complex_c, hat_homology_total, reduce, Bidegree, GradedComplex};
use crate::golden;
use crate::involutive::{obstruction_certificate, verify_certificate, Certificate, Verdict};
use crate::io::{ComplexFile, TypeDFile};

pub const STAGES: [&str; 8] = [
    "build-C",
    "lot",
    "pair-minus",
    "gradings",
    "fig6-check",
    "phi",
    "weird",
    "obstruction",
];

/// Single-edit corruptions of the pattern module or of `M`, for checking
/// that the pipeline notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mutation {
    #[serde(rename = "drop-m2(c,r3)")]
    DropM2CR3,
    #[serde(rename = "drop-m2(a3,r2)")]
    DropM2A3R2,
    #[serde(rename = "m1(a2)=U^3")]
    M1A2Cubed,
    #[serde(rename = "drop-m3(b1,r2,r1)")]
    DropM3B1R2R1,
    #[serde(rename = "drop-arrow(w4,r123,u1)")]
    DropArrowW4R123U1,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::DropM2CR3,
        Mutation::DropM2A3R2,
        Mutation::M1A2Cubed,
        Mutation::DropM3B1R2R1,
        Mutation::DropArrowW4R123U1,
    ];

    pub fn name(self) -> String {
        serde_json::to_value(self).expect("serializable").as_str().expect("string").to_string()
    }

    fn apply_to_pattern(self, a: &mut TypeA) {
        use AlgElt::*;
        match self {
            Mutation::DropM2CR3 => a.act("c", &[R3], "b3", 0),
            Mutation::DropM2A3R2 => a.act("a3", &[R2], "c", 0),
            Mutation::M1A2Cubed => {
                a.act("a2", &[], "b2", 2);
                a.act("a2", &[], "b2", 3);
            }
            Mutation::DropM3B1R2R1 => a.act("b1", &[R2, R1], "b2", 1),
            Mutation::DropArrowW4R123U1 => {}
        }
    }

    fn apply_to_m(self, m: &mut TypeD) {
        if self == Mutation::DropArrowW4R123U1 {
            if let (Some(w4), Some(u1)) = (m.index_of("w4"), m.index_of("u1")) {
                m.toggle_arrow(w4, u1, AlgElt::R123);
            }
        }
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<String> = Mutation::ALL.iter().map(|m| m.name()).collect();
                format!("unknown mutation `{s}` (known: {})", known.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineOptions {
    pub grading_mode: GradingMode,
    pub stop_after: Option<String>,
    pub mutation: Option<Mutation>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            grading_mode: GradingMode::Fig6,
            stop_after: None,
            mutation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub verdict: Verdict,
    pub summary: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub trusted: Vec<String>,
    pub options: PipelineOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingOutcome>,
    pub stages: Vec<StageRecord>,
    pub failed_stage: Option<String>,
    #[serde(rename = "final", skip_serializing_if = "Option::is_none")]
    pub final_certificate: Option<Certificate>,
    pub overall: Verdict,
    pub meaning: String,
}

/// 0 on PASS, 1 on a certification failure.
pub fn exit_code(r: &PipelineReport) -> i32 {
    match r.overall {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
    }
}

const MEANING: &str = "t_{D_{K,id}} + t_{D_{K,f}} is not in Im(1 + iota_K), conditional on the trusted theorems and the grading mode recorded";

fn json<T: Serialize>(v: &T) -> Option<Value> {
    Some(serde_json::to_value(v).expect("serializable"))
}

struct Run {
    stages: Vec<StageRecord>,
    stop: usize,
}

impl Run {
    /// Records a stage; returns whether the pipeline should continue.
    fn record(&mut self, name: &str, ok: bool, summary: Vec<String>, artifact: Option<Value>) -> bool {
        self.stages.push(StageRecord {
            name: name.into(),
            verdict: Verdict::from_bool(ok),
            summary,
            artifact,
        });
        ok && self.stages.len() < self.stop
    }
}

fn length_multiset(c: &GradedComplex) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for (_, _, mono) in c.arrows() {
        *m.entry(mono.u_exp()).or_default() += 1;
    }
    m
}

fn degree_multiset(c: &GradedComplex) -> BTreeMap<Bidegree, usize> {
    let mut m = BTreeMap::new();
    for g in &c.gens {
        if let Some(d) = g.deg {
            *m.entry(d).or_default() += 1;
        }
    }
    m
}

fn swap_symmetric(m: &BTreeMap<Bidegree, usize>) -> bool {
    m.iter().all(|(d, n)| m.get(&d.swap()) == Some(n))
}

fn isolated(c: &GradedComplex) -> Vec<usize> {
    (0..c.len())
        .filter(|&i| c.diff.keys().all(|&(f, t)| f != i && t != i))
        .collect()
}

/// Runs the whole certification. Only an unknown `stop_after` is an error.
pub fn run_k0_pipeline(opts: &PipelineOptions) -> Result<PipelineReport, String> {
    let stop = match &opts.stop_after {
        None => STAGES.len(),
        Some(s) => STAGES
            .iter()
            .position(|n| n == s)
            .map(|i| i + 1)
            .ok_or_else(|| format!("unknown stage `{s}` (stages: {})", STAGES.join(", ")))?,
    };
    let mut run = Run { stages: Vec::new(), stop };
    let mut grading = None;
    let mut final_certificate = None;
    let fig6 = golden::fig6();
    stages(opts, &mut run, &mut grading, &mut final_certificate, &fig6);
    let failed_stage = run
        .stages
        .iter()
        .find(|s| s.verdict == Verdict::Fail)
        .map(|s| s.name.clone());
    let complete = run.stages.len() == STAGES.len();
    let overall = Verdict::from_bool(failed_stage.is_none());
    let meaning = if complete {
        MEANING.to_string()
    } else if failed_stage.is_none() {
        format!("partial run: stages up to {} passed; no obstruction claim", STAGES[stop - 1])
    } else {
        "certification failed; no obstruction claim".to_string()
    };
    Ok(PipelineReport {
        trusted: vec![
            "pairing the (3,-1) pattern module with the type-D structure of the complement computes the cable complex".into(),
            "the splitting M0 ⊕ (M1 ⊕ N) is compatible with iota_K, Φ and Ψ".into(),
            "iota_K ≃ (1 + 𝒯)∘(iota*⊗iota*⊗iota⊗iota) for K = 2K0 # -2K0".into(),
        ],
        options: opts.clone(),
        grading,
        stages: run.stages,
        failed_stage,
        final_certificate,
        overall,
        meaning,
    })
}

fn stages(
    opts: &PipelineOptions,
    run: &mut Run,
    grading: &mut Option<GradingOutcome>,
    final_certificate: &mut Option<Certificate>,
    fig6: &GradedComplex,
) {
    // build-C
    let c = example_complex_c();
    let dec = c.decompose();
    let violations = c.validate();
    let origin = Some(Bidegree::new(0, 0));
    let same_degree = c.index_of("x").and_then(|i| c.deg(i)) == origin && c.index_of("d").and_then(|i| c.deg(i)) == origin;
    let square = dec.rect_pieces.len() == 1 && (dec.rect_pieces[0].i, dec.rect_pieces[0].j) == (2, 2);
    let hat_total = hat_homology_total(&c.hat_truncate()).ok();
    let ok = violations.is_empty()
        && c == golden::complex_c()
        && same_degree
        && dec.is_multirectangular()
        && square
        && hat_total == Some(5);
    let summary = vec![
        format!("validate: {} violation(s)", violations.len()),
        format!("matches shipped complex-C fixture: {}", c == golden::complex_c()),
        format!("x and d both at (0,0): {same_degree}"),
        format!("pieces: {} free, {} rectangular (2,2)", dec.free_pieces.len(), dec.rect_pieces.len()),
        format!("hat homology total dimension {}", hat_total.map_or("?".into(), |n| n.to_string())),
    ];
    if !run.record("build-C", ok, summary, json(&ComplexFile::from_complex(&c))) {
        return;
    }

    // lot
    let mut m = golden::fig3_m();
    if let Some(mu) = opts.mutation {
        mu.apply_to_m(&mut m);
    }
    let Ok(l) = lot(&c) else {
        run.record("lot", false, vec!["complex is not multirectangular".into()], None);
        return;
    };
    let m_violations: Vec<String> = m.validate().iter().map(ToString::to_string).collect();
    let iso = l.find_isomorphism(&m);
    let mut summary = vec![
        format!("lot(C): {} generators, {} arrows", l.len(), l.arrows.len()),
        format!("reference M: {} generators, {} arrows, {} violation(s)", m.len(), m.arrows.len(), m_violations.len()),
    ];
    summary.extend(m_violations.iter().cloned());
    match &iso {
        Some(map) => summary.push(format!(
            "isomorphic to reference M: {}",
            (0..l.len())
                .filter(|&i| l.gens[i].idem == crate::bordered::Idem::I0)
                .map(|i| format!("{}->{}", l.gens[i].name, m.gens[map[i]].name))
                .collect::<Vec<_>>()
                .join(", ")
        )),
        None => summary.push("not isomorphic to reference M".into()),
    }
    let ok = iso.is_some() && m_violations.is_empty() && l.validate().is_empty();
    if !run.record("lot", ok, summary, json(&TypeDFile::from_type_d(&l))) {
        return;
    }

    // pair-minus
    let mut diagram = cable31_diagram();
    if let Some(mu) = opts.mutation {
        mu.apply_to_pattern(&mut diagram);
    }
    let pattern = chord_closure(&diagram);
    let a_violations: Vec<String> = pattern.validate(6).iter().map(ToString::to_string).collect();
    let mut summary = vec![
        format!("pattern: {} displayed actions, closure {} actions", diagram.actions.len(), pattern.actions.len()),
        format!("A-infinity relations to length 6: {} violation(s)", a_violations.len()),
    ];
    summary.extend(a_violations.iter().take(5).cloned());
    let unreduced = match box_tensor(&pattern, &m, Flavor::Minus) {
        Ok(p) => p,
        Err(e) => {
            summary.push(format!("pairing failed: {e}"));
            run.record("pair-minus", false, summary, None);
            return;
        }
    };
    let red = reduce(&unreduced);
    let verified = red.verify_against(&unreduced);
    let reduced = red.complex;
    summary.push(format!(
        "pairing: {} generators, {} arrows; reduced: {} generators, {} arrows",
        unreduced.len(),
        unreduced.arrow_count(),
        reduced.len(),
        reduced.arrow_count()
    ));
    summary.push(format!("reduction maps verified: {verified}"));
    let ok = a_violations.is_empty() && verified && !reduced.has_unit_arrow();
    if !run.record("pair-minus", ok, summary, json(&ComplexFile::from_complex(&reduced))) {
        return;
    }

    // gradings
    let d_degrees: BTreeMap<String, Bidegree> = m
        .gens
        .iter()
        .filter_map(|g| g.deg.map(|d| (g.name.clone(), d)))
        .collect();
    let (outcome, graded) = assign_gradings(opts.grading_mode, &unreduced, &reduced, &d_degrees, fig6);
    let mut summary = outcome.notes.clone();
    *grading = Some(outcome);
    let graded = match graded {
        Ok(g) => g,
        Err(e) => {
            summary.push(e);
            run.record("gradings", false, summary, None);
            return;
        }
    };
    let rule: Vec<String> = graded.validate().iter().map(ToString::to_string).collect();
    let symmetric = swap_symmetric(&degree_multiset(&graded));
    summary.push(format!("arrow rule: {} violation(s)", rule.len()));
    summary.extend(rule.iter().take(5).cloned());
    summary.push(format!("bidegree multiset swap-symmetric: {symmetric}"));
    let ok = graded.is_graded() && rule.is_empty() && symmetric;
    if !run.record("gradings", ok, summary, json(&ComplexFile::from_complex(&graded))) {
        return;
    }

    // fig6-check
    let want_lengths = BTreeMap::from([(1, 8), (2, 5), (6, 2)]);
    let lengths = length_multiset(&graded);
    let ref_lengths = length_multiset(fig6);
    let iso_gens = isolated(&graded);
    let ref_rule = fig6.validate().is_empty();
    let same_degrees = degree_multiset(&graded) == degree_multiset(fig6);
    let unique = |d: Bidegree| graded.gens.iter().filter(|g| g.deg == Some(d)).count() == 1;
    let ok = graded.len() == 31
        && graded.arrow_count() == 15
        && lengths == want_lengths
        && lengths == ref_lengths
        && iso_gens.len() == 1
        && ref_rule
        && swap_symmetric(&degree_multiset(fig6))
        && same_degrees
        && unique(Bidegree::new(0, 0))
        && unique(Bidegree::new(1, 1));
    let summary = vec![
        format!("{} generators, {} U-arrows", graded.len(), graded.arrow_count()),
        format!("U-arrow lengths {lengths:?}, reference {ref_lengths:?}"),
        format!(
            "generators untouched by arrows: [{}]",
            iso_gens.iter().map(|&i| graded.name(i)).collect::<Vec<_>>().join(", ")
        ),
        format!("reference arrows obey the grading rule: {ref_rule}"),
        format!("bidegree multiset equals reference: {same_degrees}"),
        format!("unique generator at (0,0): {}, at (1,1): {}", unique(Bidegree::new(0, 0)), unique(Bidegree::new(1, 1))),
    ];
    if !run.record("fig6-check", ok, summary, None) {
        return;
    }

    // phi
    let phi = graded.basepoint_phi();
    let find = |d: Bidegree| graded.gens.iter().position(|g| g.deg == Some(d));
    let (zeta, alpha) = (find(Bidegree::new(1, 1)), find(Bidegree::new(2, 0)));
    let phi_zeta = match (zeta, alpha) {
        (Some(z), Some(a)) => (0..graded.len()).all(|i| phi.get(i, z) == (i == a)),
        _ => false,
    };
    let entries: Vec<String> = graded
        .arrows()
        .filter(|(_, _, m)| m.u_exp() == 1)
        .map(|(f, t, _)| format!("{} -> {}", graded.name(f), graded.name(t)))
        .collect();
    let summary = vec![
        format!("phi has {} nonzero entries", entries.len()),
        format!(
            "phi({}) = {}: {phi_zeta}",
            zeta.map_or("?", |i| graded.name(i)),
            alpha.map_or("?", |i| graded.name(i))
        ),
    ];
    if !run.record("phi", phi_zeta, summary, json(&entries)) {
        return;
    }

    // weird
    let inputs = WeirdInputs {
        reduced: &graded,
        m: &m,
        fig6,
        pattern: &pattern,
    };
    let wc = check_weird_k0(&inputs);
    let replay = verify_weirdness(&wc, &inputs);
    let summary = vec![
        format!("v1 = {}, v2 = {}", wc.v1.as_deref().unwrap_or("?"), wc.v2.as_deref().unwrap_or("?")),
        format!("bullets: {}", wc.certificate.steps.iter().map(|s| format!("{} {}", s.id, s.verdict.label())).collect::<Vec<_>>().join(", ")),
        format!("replayed: {replay}"),
    ];
    let ok = wc.overall() == Verdict::Pass && replay;
    if !run.record("weird", ok, summary, json(&wc)) {
        return;
    }

    // obstruction
    let b = match hat_basis_data(&graded, &wc) {
        Ok(b) => b,
        Err(e) => {
            run.record("obstruction", false, vec![e.to_string()], None);
            return;
        }
    };
    let cert = obstruction_certificate(&b);
    let replay = verify_certificate(&cert);
    let mut summary = vec![
        format!("obstruction: {}", cert.overall.label()),
        format!("replayed from embedded input: {replay}"),
        format!("digest {}", cert.digest),
    ];
    if let Some(s) = cert.first_failure() {
        summary.push(format!("first failing step {}", s.id));
    }
    let ok = cert.overall == Verdict::Pass && replay;
    *final_certificate = Some(cert);
    run.record("obstruction", ok, summary, None);
}

impl PipelineReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k0-certify: {}", self.overall.label());
        for t in &self.trusted {
            let _ = writeln!(out, "  trusted: {t}");
        }
        if let Some(g) = &self.grading {
            let _ = writeln!(out, "  grading mode: requested {:?}, used {:?}", g.requested, g.used);
        }
        if let Some(m) = self.options.mutation {
            let _ = writeln!(out, "  mutation: {}", m.name());
        }
        for s in &self.stages {
            let _ = writeln!(out, "{}: {}", s.name, s.verdict.label());
            for line in &s.summary {
                let _ = writeln!(out, "    {line}");
            }
        }
        if let Some(f) = &self.failed_stage {
            let _ = writeln!(out, "failed stage: {f}");
        }
        let _ = writeln!(out, "meaning: {}", self.meaning);
        out
    }
}
