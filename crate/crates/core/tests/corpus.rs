//! Replays the checked-in fuzz seeds with the same round-trip checks the
//! fuzz targets make, so stable builds exercise them too.

use std::fs;
use std::path::PathBuf;

use copolarity::io::{self, extension_to_json, weight_system_to_json};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let bytes = fs::read(&p).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), String::from_utf8(bytes).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn weight_system_seeds() {
    let mut ok = 0;
    for (name, text) in seeds("parse_weight_system") {
        if let Ok(ws) = io::parse_weight_system(&text) {
            let again = io::parse_weight_system(&weight_system_to_json(&ws).to_string()).unwrap();
            assert_eq!(again, ws, "{name}");
            ok += 1;
        }
    }
    assert!(ok >= 4);
}

#[test]
fn extension_seeds() {
    let mut valid = 0;
    for (name, text) in seeds("parse_extension") {
        let Ok(ext) = io::parse_extension(&text) else { continue };
        let again = io::parse_extension(&extension_to_json(&ext).to_string()).unwrap();
        assert_eq!(again.omega, ext.omega, "{name}");
        if ext.validate().is_ok() {
            let _ = ext.is_nice_involution();
            valid += 1;
        }
    }
    assert!(valid >= 2);
}

#[test]
fn rational_seeds() {
    for (name, text) in seeds("parse_rational") {
        if let Ok(q) = io::parse_rational(&text) {
            assert_eq!(io::parse_rational(&q.to_string()).unwrap(), q, "{name}");
        }
    }
    assert!(io::parse_rational("1/0").is_err());
}

#[test]
fn weight_list_seeds() {
    for (name, text) in seeds("parse_weight_list") {
        if let Ok(ws) = io::parse_weight_list(&text) {
            let joined: Vec<String> = ws.iter().map(i64::to_string).collect();
            assert_eq!(io::parse_weight_list(&joined.join(",")).unwrap(), ws, "{name}");
        }
    }
}
