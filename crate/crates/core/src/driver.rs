//! Whole-group classification reports and the corpus runner.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::{run_schedule, Budget, Certificate, ClassId, Context, Outcome, Side, Verdict};
use crate::hyperbolic::AlgebraicRep;
use crate::oracle::{OracleError, OracleSpec, PromiseSet};
use crate::presentation::{parse_presentation, FinitePresentation, PresentationError};

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("budget must be positive")]
    Budget,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
}

/// Aggregate verdict over the eight classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overall {
    Geometry(ClassId),
    NotGeometricAmongDecided,
    Undecided,
}

impl Overall {
    pub fn from_verdicts(verdicts: &[Verdict]) -> Overall {
        let members: Vec<ClassId> = verdicts.iter().filter(|v| v.is_member()).map(|v| v.class).collect();
        if let [c] = members.as_slice() {
            return Overall::Geometry(*c);
        }
        if members.is_empty() && verdicts.len() == ClassId::ALL.len() && verdicts.iter().all(Verdict::is_nonmember) {
            return Overall::NotGeometricAmongDecided;
        }
        Overall::Undecided
    }

    /// Process exit code of the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::Geometry(_) => 0,
            Overall::NotGeometricAmongDecided => 2,
            Overall::Undecided => 3,
        }
    }
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Overall::Geometry(c) => write!(f, "{c}"),
            Overall::NotGeometricAmongDecided => f.write_str("NotGeometricAmongDecided"),
            Overall::Undecided => f.write_str("Undecided"),
        }
    }
}

impl FromStr for Overall {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NotGeometricAmongDecided" => Ok(Overall::NotGeometricAmongDecided),
            "Undecided" => Ok(Overall::Undecided),
            other => ClassId::parse(other)
                .map(Overall::Geometry)
                .ok_or_else(|| format!("unknown verdict {other:?}")),
        }
    }
}

/// Serialized form of one decided class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub class: ClassId,
    pub side: Side,
    pub kind: String,
    pub payload: Value,
    pub basis: String,
    pub promises_used: Vec<String>,
}

impl CertificateRecord {
    pub fn from_verdict(v: &Verdict) -> Option<Self> {
        let (side, cert) = match &v.outcome {
            Outcome::Member { certificate } => (Side::Member, certificate),
            Outcome::NonMember { certificate } => (Side::NonMember, certificate),
            Outcome::Exhausted { .. } => return None,
        };
        Some(CertificateRecord {
            class: v.class,
            side,
            kind: cert.kind().to_string(),
            payload: serde_json::to_value(cert).expect("certificates serialize"),
            basis: v.basis.clone().unwrap_or_default(),
            promises_used: v.assumed.names().into_iter().map(String::from).collect(),
        })
    }

    pub fn certificate(&self) -> Result<Certificate, serde_json::Error> {
        serde_json::from_value(self.payload.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: ClassId,
    pub verdict: String,
    pub steps: u64,
    pub certificate: Option<CertificateRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub presentation: String,
    pub oracle: String,
    pub promises: Vec<String>,
    pub classes: Vec<ClassRow>,
    pub overall: Overall,
    pub total_steps: u64,
    pub budget: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "presentation: {}", self.presentation)?;
        writeln!(f, "oracle:       {}", self.oracle)?;
        writeln!(f, "promises:     {}", self.promises.join(", "))?;
        for row in &self.classes {
            write!(f, "  {:<11} {:<10} {:>10} steps", row.class.name(), row.verdict, row.steps)?;
            if let Some(c) = &row.certificate {
                write!(f, "  [{}] {}", c.kind, c.basis)?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {} ({} of {} steps)", self.overall, self.total_steps, self.budget)
    }
}

/// Settings of one classification run besides the group itself.
#[derive(Debug, Clone, Default)]
pub struct ClassifyOptions {
    pub promises: PromiseSet,
    pub budget: u64,
    /// Representations for the hyperbolic side, and whether they are complete.
    pub reps: Option<(Vec<AlgebraicRep>, bool)>,
    /// Directory against which relative oracle file paths resolve.
    pub base: Option<PathBuf>,
}

impl ClassifyOptions {
    pub fn new(budget: u64) -> Self {
        ClassifyOptions {
            promises: PromiseSet::sound(),
            budget,
            ..Default::default()
        }
    }
}

/// Runs all sixteen searchers on `p` and aggregates their verdicts.
///
/// The oracle is built twice from `spec`: one instance feeds the searchers,
/// the other re-verifies their certificates.
pub fn classify(p: &FinitePresentation, spec: &OracleSpec, options: &ClassifyOptions) -> Result<Report, DriverError> {
    if options.budget == 0 {
        return Err(DriverError::Budget);
    }
    let base = options.base.as_deref();
    let oracle = spec.build(p, base)?.with_promises(options.promises);
    let verifier = spec.build(p, base)?.with_promises(options.promises);
    let description = oracle.description().to_string();
    let mut ctx = Context::new(p.clone(), oracle).with_verifier(verifier);
    if let Some((reps, complete)) = &options.reps {
        ctx = ctx.with_reps(reps.clone(), *complete);
    }
    let verdicts = run_schedule(&ctx, &ClassId::ALL, Budget::new(options.budget));
    let overall = Overall::from_verdicts(&verdicts);
    let classes = verdicts
        .iter()
        .map(|v| ClassRow {
            class: v.class,
            verdict: v.label().to_string(),
            steps: v.steps,
            certificate: CertificateRecord::from_verdict(v),
        })
        .collect();
    Ok(Report {
        presentation: p.to_string(),
        oracle: description,
        promises: ctx.oracle.promises().names().into_iter().map(String::from).collect(),
        classes,
        overall,
        total_steps: verdicts.iter().map(|v| v.steps).sum(),
        budget: options.budget,
    })
}

pub fn read_presentation(path: &Path) -> Result<FinitePresentation, DriverError> {
    let text = std::fs::read_to_string(path).map_err(|source| DriverError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_presentation(text.trim())?)
}

/// One manifest line: `file oracle promises budget expected`, with `-` for
/// no promises. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub file: PathBuf,
    pub oracle: String,
    pub promises: PromiseSet,
    pub budget: u64,
    pub expected: Overall,
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>, DriverError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| DriverError::Manifest { line: i + 1, reason };
        let cols: Vec<&str> = line.split_whitespace().collect();
        let [file, oracle, promises, budget, expected] = cols.as_slice() else {
            return Err(bad(format!("expected 5 columns, found {}", cols.len())));
        };
        let mut set = PromiseSet::sound();
        if *promises != "-" {
            for name in promises.split(',') {
                set.add(name).map_err(|e| bad(e.to_string()))?;
            }
        }
        rows.push(ManifestRow {
            file: PathBuf::from(file),
            oracle: oracle.to_string(),
            promises: set,
            budget: budget.parse().map_err(|_| bad(format!("bad budget {budget:?}")))?,
            expected: expected.parse().map_err(bad)?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRow {
    pub file: PathBuf,
    pub expected: Overall,
    /// The report's overall verdict, or the error that prevented one.
    pub actual: Result<Overall, String>,
}

impl CorpusRow {
    pub fn matches(&self) -> bool {
        self.actual.as_ref() == Ok(&self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusOutcome {
    pub rows: Vec<CorpusRow>,
}

impl CorpusOutcome {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(CorpusRow::matches)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_match() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for CorpusOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<32} {:<26} {:<26} ok", "file", "expected", "actual")?;
        for r in &self.rows {
            let actual = match &r.actual {
                Ok(o) => o.to_string(),
                Err(e) => format!("error: {e}"),
            };
            writeln!(
                f,
                "{:<32} {:<26} {:<26} {}",
                r.file.display(),
                r.expected.to_string(),
                actual,
                if r.matches() { "yes" } else { "NO" }
            )?;
        }
        let ok = self.rows.iter().filter(|r| r.matches()).count();
        write!(f, "{ok}/{} rows match", self.rows.len())
    }
}

/// Classifies every manifest row; paths resolve against the manifest's
/// directory.
pub fn run_corpus(manifest: &Path) -> Result<CorpusOutcome, DriverError> {
    let text = std::fs::read_to_string(manifest).map_err(|source| DriverError::Io {
        path: manifest.display().to_string(),
        source,
    })?;
    let base = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut rows = Vec::new();
    for row in parse_manifest(&text)? {
        let actual = classify_row(&row, &base).map(|r| r.overall).map_err(|e| e.to_string());
        rows.push(CorpusRow {
            file: row.file,
            expected: row.expected,
            actual,
        });
    }
    Ok(CorpusOutcome { rows })
}

pub fn classify_row(row: &ManifestRow, base: &Path) -> Result<Report, DriverError> {
    let p = read_presentation(&base.join(&row.file))?;
    let spec = OracleSpec::parse(&row.oracle)?;
    let options = ClassifyOptions {
        promises: row.promises,
        budget: row.budget,
        reps: None,
        base: Some(base.to_path_buf()),
    };
    classify(&p, &spec, &options)
}
