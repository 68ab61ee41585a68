//! The `hfkcert` command line. Exit codes: 0 success or PASS, 1 certification
//! failure on well-formed input, 2 invalid input or I/O failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bordered::{box_tensor, builtin_type_a, builtin_type_d, lot, Flavor, TypeA, TypeD};
use crate::complex::{hat_homology, reduce, GradedComplex};
use crate::involutive::{obstruction_certificate, Verdict};
use crate::io::{
    read_document, read_text, render_complex_text, render_type_d_text, to_json, write_text, Document,
    FormatError,
};
use crate::ring::Ring;
use crate::weird::{check_weird_simple, exit_code, run_k0_pipeline, GradingMode, PipelineOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hfkcert", version, about = "Knot Floer complexes, bordered pairing and involutive certificates")]
pub struct Cli {
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a file in any supported format and check its invariants.
    Validate { path: PathBuf },
    /// Type-D structure of a multirectangular complex.
    Lot { path: PathBuf },
    /// Box tensor product of a type-A and a type-D structure.
    Pair {
        /// Built-in name (cfa-nu, cfa-cable-3-1) or a type-A file.
        cfa: String,
        /// Built-in name (cfd-unknot) or a type-D file.
        cfd: String,
        #[arg(long, value_enum, default_value_t = Flavor::Minus)]
        flavor: Flavor,
        /// Cancel unit arrows before writing.
        #[arg(long)]
        reduce: bool,
    },
    /// Cancel unit arrows.
    Reduce { path: PathBuf },
    /// Graded dimensions of the hat homology.
    Homology { path: PathBuf },
    /// Split a reduced complex into free, rectangular and other pieces.
    Decompose { path: PathBuf },
    /// Check the simple weirdness predicate, or with --obstruction certify
    /// the obstruction, on a hat basis file.
    Weird {
        path: PathBuf,
        #[arg(long)]
        obstruction: bool,
    },
    /// Run the full certification for K0.
    #[command(name = "k0-certify")]
    K0Certify {
        #[arg(long, value_enum, default_value_t = GradingMode::Fig6)]
        grading_mode: GradingMode,
        #[arg(long)]
        stop_after: Option<String>,
        /// Apply a single-edit corruption (test builds only).
        #[cfg(feature = "test-hooks")]
        #[arg(long, alias = "mutate-fig4", alias = "mutate-fig3")]
        mutate: Option<String>,
    },
}

/// What a command produced before rendering.
struct Output {
    json: String,
    text: String,
    code: i32,
}

impl Output {
    fn ok(json: String, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

#[derive(Serialize)]
struct HomologyEntry {
    deg: crate::complex::Bidegree,
    dim: usize,
}

#[derive(Serialize)]
struct HomologyReport {
    total: usize,
    table: Vec<HomologyEntry>,
}

#[derive(Serialize)]
struct RectReport {
    i: u32,
    j: u32,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct DecomposeReport {
    multirectangular: bool,
    free: Vec<String>,
    rectangles: Vec<RectReport>,
    other: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ValidateReport {
    kind: &'static str,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct WeirdReport {
    v1: String,
    v2: String,
    weird: bool,
}

fn complex_output(c: &GradedComplex) -> Output {
    let doc = Document::Complex(c.clone());
    Output::ok(doc.to_json(), render_complex_text(c))
}

fn load_complex(path: &Path) -> Result<GradedComplex, String> {
    match read_document(path).map_err(|e| e.to_string())? {
        Document::Complex(c) => {
            let v = c.validate();
            if v.is_empty() {
                Ok(c)
            } else {
                Err(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
            }
        }
        d => Err(format!("expected a complex file, found {}", d.kind())),
    }
}

fn load_type_a(spec: &str) -> Result<TypeA, String> {
    if let Ok(a) = builtin_type_a(spec) {
        return Ok(a);
    }
    match read_document(Path::new(spec)).map_err(|e| e.to_string())? {
        Document::TypeA(a) => {
            let v = a.validate(6);
            if v.is_empty() {
                Ok(a)
            } else {
                Err(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
            }
        }
        d => Err(format!("expected a type-A file, found {}", d.kind())),
    }
}

fn load_type_d(spec: &str) -> Result<TypeD, String> {
    if let Ok(d) = builtin_type_d(spec) {
        return Ok(d);
    }
    match read_document(Path::new(spec)).map_err(|e| e.to_string())? {
        Document::TypeD(d) => {
            let v = d.validate();
            if v.is_empty() {
                Ok(d)
            } else {
                Err(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
            }
        }
        d => Err(format!("expected a type-D file, found {}", d.kind())),
    }
}

fn execute(cmd: &Command) -> Result<Output, String> {
    match cmd {
        Command::Validate { path } => {
            let text = read_text(path).map_err(|e| e.to_string())?;
            let doc = crate::io::parse_document(&text).map_err(|e: FormatError| e.to_string())?;
            let violations = doc.violations();
            if !violations.is_empty() {
                return Err(violations.join("\n"));
            }
            let report = ValidateReport { kind: doc.kind(), violations };
            Ok(Output::ok(to_json(&report), String::new()))
        }
        Command::Lot { path } => {
            let c = load_complex(path)?;
            let d = lot(&c).map_err(|e| e.to_string())?;
            Ok(Output::ok(Document::TypeD(d.clone()).to_json(), render_type_d_text(&d)))
        }
        Command::Pair { cfa, cfd, flavor, reduce: r } => {
            let a = load_type_a(cfa)?;
            let d = load_type_d(cfd)?;
            let p = box_tensor(&a, &d, *flavor).map_err(|e| e.to_string())?;
            let p = if *r { reduce(&p).complex } else { p };
            Ok(complex_output(&p))
        }
        Command::Reduce { path } => {
            let c = load_complex(path)?;
            Ok(complex_output(&reduce(&c).complex))
        }
        Command::Homology { path } => {
            let c = load_complex(path)?;
            let hat = if c.ring == Ring::F2 { c } else { c.hat_truncate() };
            let h = hat_homology(&hat).map_err(|e| e.to_string())?;
            let report = HomologyReport {
                total: h.values().sum(),
                table: h.iter().map(|(&deg, &dim)| HomologyEntry { deg, dim }).collect(),
            };
            let mut text = format!("hat homology, total dimension {}\n", report.total);
            for e in &report.table {
                text.push_str(&format!("  {}: {}\n", e.deg, e.dim));
            }
            Ok(Output::ok(to_json(&report), text))
        }
        Command::Decompose { path } => {
            let c = load_complex(path)?;
            if c.has_unit_arrow() {
                return Err("complex is not reduced; run `reduce` first".into());
            }
            let d = c.decompose();
            let names = |idx: &[usize]| idx.iter().map(|&i| c.name(i).to_string()).collect::<Vec<_>>();
            let report = DecomposeReport {
                multirectangular: d.is_multirectangular(),
                free: names(&d.free_pieces),
                rectangles: d
                    .rect_pieces
                    .iter()
                    .map(|r| RectReport { i: r.i, j: r.j, generators: names(&r.gens) })
                    .collect(),
                other: d.other_pieces.iter().map(|p| names(p)).collect(),
            };
            let mut text = format!("multirectangular: {}\n", report.multirectangular);
            for f in &report.free {
                text.push_str(&format!("  free {f}\n"));
            }
            for r in &report.rectangles {
                text.push_str(&format!("  rectangle U^{} V^{} [{}]\n", r.i, r.j, r.generators.join(", ")));
            }
            for o in &report.other {
                text.push_str(&format!("  other [{}]\n", o.join(", ")));
            }
            Ok(Output::ok(to_json(&report), text))
        }
        Command::Weird { path, obstruction } => {
            let b = match read_document(path).map_err(|e| e.to_string())? {
                Document::HatBasis(b) => b,
                d => return Err(format!("expected a hat basis file, found {}", d.kind())),
            };
            if *obstruction {
                let cert = obstruction_certificate(&b);
                let code = if cert.overall == Verdict::Pass { 0 } else { 1 };
                return Ok(Output { json: to_json(&cert), text: cert.render_text(), code });
            }
            let weird = check_weird_simple(&b).map_err(|e| e.to_string())?;
            let report = WeirdReport {
                v1: b.basis[b.v1].0.clone(),
                v2: b.basis[b.v2].0.clone(),
                weird,
            };
            let text = format!("splitting <{}> + <{}> + rest invariant: {weird}\n", report.v1, report.v2);
            Ok(Output { json: to_json(&report), text, code: if weird { 0 } else { 1 } })
        }
        Command::K0Certify { .. } => unreachable!("handled in run"),
    }
}

#[cfg(feature = "test-hooks")]
fn mutation_of(cmd: &Command) -> Result<Option<crate::weird::Mutation>, String> {
    match cmd {
        Command::K0Certify { mutate: Some(m), .. } => m.replace('ρ', "r").parse().map(Some),
        _ => Ok(None),
    }
}

#[cfg(not(feature = "test-hooks"))]
fn mutation_of(_: &Command) -> Result<Option<crate::weird::Mutation>, String> {
    Ok(None)
}

/// Runs a parsed invocation, writing to the given streams; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if let Command::K0Certify { grading_mode, stop_after, .. } = &cli.command {
        let mutation = match mutation_of(&cli.command) {
            Ok(m) => m,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
        };
        let opts = PipelineOptions {
            grading_mode: *grading_mode,
            stop_after: stop_after.clone(),
            mutation,
        };
        let report = match run_k0_pipeline(&opts) {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
        };
        let json = to_json(&report);
        match (&cli.out, cli.format) {
            (Some(path), _) => {
                if let Err(e) = write_text(path, &json) {
                    let _ = writeln!(stderr, "error: {e}");
                    return 2;
                }
                let _ = stdout.write_all(report.render_text().as_bytes());
            }
            (None, Format::Json) => {
                let _ = stdout.write_all(json.as_bytes());
            }
            (None, Format::Text) => {
                let _ = stdout.write_all(report.render_text().as_bytes());
            }
        }
        return exit_code(&report);
    }
    let out = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let body = match cli.format {
        Format::Json => &out.json,
        Format::Text => &out.text,
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_text(path, body) {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
        }
        None => {
            // validate stays silent on success
            if !matches!(cli.command, Command::Validate { .. }) {
                let _ = stdout.write_all(body.as_bytes());
            }
        }
    }
    out.code
}
