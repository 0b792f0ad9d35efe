use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::checker::check_program;
use crate::error::{Error, ErrorKind};
use crate::semantics::{eval_program, Value};
use crate::syntax::parse_program;

/// What a corpus program is expected to end in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// The canonical rendering of the result value.
    Value(String),
    Error(ErrorKind),
}

pub type Observed = Expected;

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Value(v) => f.write_str(v),
            Expected::Error(kind) => write!(f, "<{kind}>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusCase {
    pub name: String,
    pub file: PathBuf,
    pub source: String,
    pub expected: Expected,
    /// Which listing the case reproduces, or `extra`.
    pub origin: String,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub expected: Expected,
    pub observed: Observed,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub results: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CaseResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.passed() { "pass" } else { "FAIL" };
            write!(f, "{status} {}", r.name)?;
            if !r.passed() {
                write!(f, ": expected {}, got {}", r.expected, r.observed)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn parse_kind(word: &str) -> Option<ErrorKind> {
    match word {
        "parseerror" => Some(ErrorKind::Parse),
        "illformed" => Some(ErrorKind::Illformed),
        "typeerror" => Some(ErrorKind::Type),
        _ => None,
    }
}

fn invalid(line_no: usize, msg: &str) -> io::Error {
    io::Error::new(
        io::ErrorKind::InvalidData,
        format!("manifest line {line_no}: {msg}"),
    )
}

/// Reads `manifest.tsv` in `dir`: one tab-separated record per line with
/// columns `name`, `file`, `outcome` (`ok` or an error kind), `expected`
/// rendering (`-` for errors) and `origin`. Blank lines and lines starting
/// with `#` are skipped.
pub fn load_manifest(dir: &Path) -> io::Result<Vec<CorpusCase>> {
    let text = fs::read_to_string(dir.join("manifest.tsv"))?;
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [name, file, outcome, expected, origin] = fields[..] else {
            return Err(invalid(line_no, "expected 5 tab-separated fields"));
        };
        let expected = match outcome {
            "ok" => Expected::Value(expected.to_string()),
            kind => Expected::Error(
                parse_kind(kind).ok_or_else(|| invalid(line_no, "unknown outcome"))?,
            ),
        };
        let file = dir.join(file);
        let source = fs::read_to_string(&file)?;
        cases.push(CorpusCase {
            name: name.to_string(),
            file,
            source,
            expected,
            origin: origin.to_string(),
        });
    }
    Ok(cases)
}

/// Parse, optionally check, then evaluate.
pub fn run_source(source: &str, check_first: bool) -> Result<Value, Error> {
    let program = parse_program(source)?;
    if check_first {
        if let Some(err) = check_program(&program).into_error() {
            return Err(err);
        }
    }
    eval_program(&program)
}

pub fn run_case(case: &CorpusCase) -> CaseResult {
    let observed = match run_source(&case.source, true) {
        Ok(v) => Expected::Value(v.to_string()),
        Err(e) => Expected::Error(e.kind),
    };
    CaseResult {
        name: case.name.clone(),
        expected: case.expected.clone(),
        observed,
    }
}

pub fn run_corpus(dir: &Path) -> io::Result<CorpusReport> {
    let results = load_manifest(dir)?.iter().map(run_case).collect();
    Ok(CorpusReport { results })
}
