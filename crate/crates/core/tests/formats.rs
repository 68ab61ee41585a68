mod common;

use std::process::Command;

use hfkcert::golden;
use hfkcert::io::{parse_complex, parse_document, Document};
use proptest::prelude::*;
use rand::Rng;

use common::Piece;

#[test]
fn fixtures_re_emit_byte_identically() {
    for (name, text) in golden::ALL {
        let doc = parse_document(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(doc.violations().is_empty(), "{name}");
        assert_eq!(doc.to_json(), text, "{name}");
    }
}

#[test]
fn malformed_files_exit_two_without_crashing() {
    let mut r = common::rng(11);
    let dir = tempfile::tempdir().unwrap();
    for k in 0..40 {
        let (_, text) = golden::ALL[k % golden::ALL.len()];
        let mut bytes = text.as_bytes().to_vec();
        match k % 3 {
            0 => bytes.truncate(r.gen_range(0..bytes.len())),
            1 => {
                let i = r.gen_range(0..bytes.len());
                bytes[i] = b"{}[]\",:0xU^"[r.gen_range(0..11)];
            }
            _ => bytes = text.replacen("\"to\"", "\"onto\"", 1).into_bytes(),
        }
        let path = dir.path().join(format!("f{k}.json"));
        std::fs::write(&path, &bytes).unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_hfkcert")).arg("validate").arg(&path).output().unwrap();
        let code = o.status.code();
        assert!(code == Some(0) || code == Some(2), "case {k}: {code:?}");
        if code == Some(2) {
            assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complexes_round_trip(seed: u64) {
        let mut r = common::rng(seed);
        let all = [Piece::Free, Piece::Unit, Piece::UStep, Piece::VStep, Piece::Rect];
        let c = common::random_complex(&mut r, &all, 5, 8);
        let text = Document::Complex(c.clone()).to_json();
        prop_assert_eq!(parse_complex(&text).unwrap(), c);
    }

    #[test]
    fn parsing_arbitrary_edits_never_panics(k in 0usize..5, pos in any::<prop::sample::Index>(), byte in any::<u8>()) {
        let mut bytes = golden::ALL[k].1.as_bytes().to_vec();
        let i = pos.index(bytes.len());
        bytes[i] = byte;
        if let Ok(text) = String::from_utf8(bytes) {
            let _ = parse_document(&text).map(|d| d.violations());
        }
    }
}
