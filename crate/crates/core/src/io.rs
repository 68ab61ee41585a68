//! JSON interchange for complexes, type-D and type-A structures, and hat
//! basis data. Emission is canonical: generators as stored, arrows sorted.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bordered::{AViolation, Action, AlgElt, DViolation, Idem, TypeA, TypeD};
use crate::complex::{Bidegree, ComplexError, Generator, GradedComplex, Violation};
use crate::involutive::{HatBasisData, HatBasisFile, InvolutiveError};
use crate::ring::{Monomial, Ring};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("coefficient {coeff} not allowed over {ring}")]
    Coefficient { coeff: String, ring: Ring },
    #[error("cannot tell which format this document is")]
    UnknownFormat,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Involutive(#[from] InvolutiveError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub from: String,
    pub to: String,
    pub coeff: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub ring: Ring,
    pub generators: Vec<Generator>,
    pub arrows: Vec<ArrowEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub anchors: BTreeMap<String, Bidegree>,
}

impl ComplexFile {
    pub fn from_complex(c: &GradedComplex) -> Self {
        ComplexFile {
            ring: c.ring,
            generators: c.gens.clone(),
            arrows: c
                .canonical_arrows()
                .into_iter()
                .map(|(from, to, m)| ArrowEntry {
                    from,
                    to,
                    coeff: m.parse().expect("rendered monomial parses"),
                })
                .collect(),
            anchors: BTreeMap::new(),
        }
    }

    /// Builds the complex, applying `anchors` through the grading rule when present.
    /// Duplicate names and rule violations are left for `validate`.
    pub fn to_complex(&self) -> Result<GradedComplex, FormatError> {
        let mut c = GradedComplex::new(self.ring);
        for g in &self.generators {
            c.add_generator(g.name.clone(), g.deg);
        }
        for a in &self.arrows {
            let f = c.index_of(&a.from).ok_or_else(|| FormatError::UnknownGenerator(a.from.clone()))?;
            let t = c.index_of(&a.to).ok_or_else(|| FormatError::UnknownGenerator(a.to.clone()))?;
            if !self.ring.admits(a.coeff) {
                return Err(FormatError::Coefficient {
                    coeff: a.coeff.to_string(),
                    ring: self.ring,
                });
            }
            c.add_arrow(f, t, a.coeff);
        }
        if !self.anchors.is_empty() {
            c = c.propagate_gradings(&self.anchors)?;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorderedGen {
    pub name: String,
    pub idem: Idem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<Bidegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DArrowEntry {
    pub from: String,
    pub to: String,
    pub label: AlgElt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeDFile {
    pub generators: Vec<BorderedGen>,
    pub arrows: Vec<DArrowEntry>,
}

impl TypeDFile {
    pub fn from_type_d(d: &TypeD) -> Self {
        let mut arrows: Vec<DArrowEntry> = d
            .arrows
            .iter()
            .map(|&(f, t, label)| DArrowEntry {
                from: d.gens[f].name.clone(),
                to: d.gens[t].name.clone(),
                label,
            })
            .collect();
        arrows.sort_by(|a, b| (&a.from, &a.to, a.label).cmp(&(&b.from, &b.to, b.label)));
        TypeDFile {
            generators: d
                .gens
                .iter()
                .map(|g| BorderedGen { name: g.name.clone(), idem: g.idem, deg: g.deg })
                .collect(),
            arrows,
        }
    }

    pub fn to_type_d(&self) -> Result<TypeD, FormatError> {
        let mut d = TypeD::default();
        for g in &self.generators {
            d.add_gen(g.name.clone(), g.idem, g.deg);
        }
        for a in &self.arrows {
            let f = d.index_of(&a.from).ok_or_else(|| FormatError::UnknownGenerator(a.from.clone()))?;
            let t = d.index_of(&a.to).ok_or_else(|| FormatError::UnknownGenerator(a.to.clone()))?;
            d.toggle_arrow(f, t, a.label);
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub input: String,
    pub rhos: Vec<AlgElt>,
    pub output: String,
    #[serde(default)]
    pub upow: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeAFile {
    pub generators: Vec<BorderedGen>,
    pub actions: Vec<ActionEntry>,
}

impl TypeAFile {
    pub fn from_type_a(a: &TypeA) -> Self {
        TypeAFile {
            generators: a
                .gens
                .iter()
                .map(|g| BorderedGen { name: g.name.clone(), idem: g.idem, deg: g.deg })
                .collect(),
            actions: a
                .actions
                .iter()
                .map(|x| ActionEntry {
                    input: a.gens[x.input].name.clone(),
                    rhos: x.rhos.clone(),
                    output: a.gens[x.output].name.clone(),
                    upow: x.upow,
                })
                .collect(),
        }
    }

    pub fn to_type_a(&self) -> Result<TypeA, FormatError> {
        let mut a = TypeA::default();
        for g in &self.generators {
            a.add_gen(g.name.clone(), g.idem, g.deg);
        }
        for x in &self.actions {
            let input = a.index_of(&x.input).ok_or_else(|| FormatError::UnknownGenerator(x.input.clone()))?;
            let output = a.index_of(&x.output).ok_or_else(|| FormatError::UnknownGenerator(x.output.clone()))?;
            a.toggle_action(Action { input, rhos: x.rhos.clone(), output, upow: x.upow });
        }
        Ok(a)
    }
}

/// Any of the declared file formats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Complex(GradedComplex),
    TypeD(TypeD),
    TypeA(TypeA),
    HatBasis(HatBasisData),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::TypeD(_) => "type-d",
            Document::TypeA(_) => "type-a",
            Document::HatBasis(_) => "hat-basis",
        }
    }

    /// Invariant violations, rendered one per line. Empty means valid.
    pub fn violations(&self) -> Vec<String> {
        match self {
            Document::Complex(c) => c.validate().iter().map(Violation::to_string).collect(),
            Document::TypeD(d) => d.validate().iter().map(DViolation::to_string).collect(),
            Document::TypeA(a) => a.validate(6).iter().map(AViolation::to_string).collect(),
            // shape and facts are checked on load
            Document::HatBasis(_) => Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Document::Complex(c) => to_json(&ComplexFile::from_complex(c)),
            Document::TypeD(d) => to_json(&TypeDFile::from_type_d(d)),
            Document::TypeA(a) => to_json(&TypeAFile::from_type_a(a)),
            Document::HatBasis(b) => to_json(&b.to_file()),
        }
    }
}

/// Parses a document, telling formats apart by their top-level keys.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or(FormatError::UnknownFormat)?;
    if obj.contains_key("ring") {
        let f: ComplexFile = serde_json::from_value(v)?;
        Ok(Document::Complex(f.to_complex()?))
    } else if obj.contains_key("basis") {
        let f: HatBasisFile = serde_json::from_value(v)?;
        Ok(Document::HatBasis(HatBasisData::from_file(f)?))
    } else if obj.contains_key("actions") {
        let f: TypeAFile = serde_json::from_value(v)?;
        Ok(Document::TypeA(f.to_type_a()?))
    } else if obj.contains_key("arrows") {
        let f: TypeDFile = serde_json::from_value(v)?;
        Ok(Document::TypeD(f.to_type_d()?))
    } else {
        Err(FormatError::UnknownFormat)
    }
}

pub fn read_document(path: &Path) -> Result<Document, FormatError> {
    parse_document(&read_text(path)?)
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    std::fs::write(path, text).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_complex(text: &str) -> Result<GradedComplex, FormatError> {
    match parse_document(text)? {
        Document::Complex(c) => Ok(c),
        _ => Err(FormatError::UnknownFormat),
    }
}

pub fn parse_type_d(text: &str) -> Result<TypeD, FormatError> {
    match parse_document(text)? {
        Document::TypeD(d) => Ok(d),
        _ => Err(FormatError::UnknownFormat),
    }
}

pub fn parse_type_a(text: &str) -> Result<TypeA, FormatError> {
    match parse_document(text)? {
        Document::TypeA(a) => Ok(a),
        _ => Err(FormatError::UnknownFormat),
    }
}

/// Text rendering in the style of the figures: one arrow per line.
pub fn render_complex_text(c: &GradedComplex) -> String {
    let mut out = format!("complex over {} with {} generators\n", c.ring, c.len());
    for g in &c.gens {
        match g.deg {
            Some(d) => out.push_str(&format!("  {} {}\n", g.name, d)),
            None => out.push_str(&format!("  {}\n", g.name)),
        }
    }
    for (f, t, m) in c.canonical_arrows() {
        out.push_str(&format!("  {f} --{m}--> {t}\n"));
    }
    out
}

pub fn render_type_d_text(d: &TypeD) -> String {
    let mut out = format!("type-D structure with {} generators\n", d.len());
    for g in &d.gens {
        out.push_str(&format!("  {} [{}]\n", g.name, g.idem));
    }
    for a in TypeDFile::from_type_d(d).arrows {
        out.push_str(&format!("  {} --{}--> {}\n", a.from, a.label, a.to));
    }
    out
}
