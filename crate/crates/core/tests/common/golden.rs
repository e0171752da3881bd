//! Fixed small configurations whose CSV output is checked in under
//! `tests/golden/`. Set `UPDATE_GOLDEN=1` to rewrite the files.

use hiconn::harness::{run, ExperimentConfig, Format, Settings};
use std::path::PathBuf;

pub const CONFIGS: &[(&str, &str)] = &[
    ("equality", "kind = equality\nn = 8, 10\np = 0.5\ni = 1\ntrials = 3\nseed = 11\nkappa_cap = delta+1\n"),
    ("concentration", "kind = concentration\nn = 60\np = 0.3\nk = 2\nepsilon = 1/2\ntrials = 2\nseed = 12\n"),
    ("interconnection", "kind = concentration\nmode = interconnection\nn = 14\np = 0.5\na = 3\nb = 3\nepsilon = 1/2\ntrials = 2\nseed = 13\n"),
    ("chernoff", "kind = chernoff\nm = 200\np = 0.2\nepsilon = 3/10\ndraws = 2000\nseed = 14\n"),
    ("delicate", "kind = delicate\nn = 7\nalpha = 1/10\ni = 1\nepsilon = 1/2\nell = 5\nr = 5\ntrials = 2\nseed = 15\n"),
    ("survey", "kind = survey\nn = 7\np = 0.5\nc_size_cap = 2\ntrials = 2\nseed = 16\n"),
    // pilot runs whose counts are locked
    ("delicate_pilot", "kind = delicate\nn = 12\nalpha = 1/10\ni = 1\nepsilon = 1/2\nell = 5\nr = 5\ntrials = 20\nseed = 1\n"),
    ("survey_pilot", "kind = survey\nn = 10\np = 0.5\nc_size_cap = 2\ntrials = 50\nseed = 1\n"),
];

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.csv"))
}

pub fn render(text: &str) -> String {
    let cfg = ExperimentConfig::from_settings(&Settings::parse(text).unwrap()).unwrap();
    let mut buf = Vec::new();
    run(&cfg).unwrap().write_records(Format::Csv, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

/// Names of configurations whose output differs from the checked-in file.
pub fn mismatches() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (name, text) in CONFIGS {
        let got = render(text);
        if update {
            std::fs::create_dir_all(path(name).parent().unwrap()).unwrap();
            std::fs::write(path(name), &got).unwrap();
        }
        match std::fs::read_to_string(path(name)) {
            Ok(want) if want == got => {}
            _ => bad.push(name.to_string()),
        }
    }
    bad
}
