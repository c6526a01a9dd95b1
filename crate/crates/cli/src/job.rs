//! Job descriptions: what the flags or a `--job` file ask for, validated into
//! engine values before anything runs.

use std::fmt;

use arcscheme::artin::{monomial_quotient, truncated, ArtinAlgebra};
use arcscheme::rationalizer::TaggedTuple;
use arcscheme::{parse_poly, Field, Poly};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Arc,
    Jet,
    Igusa,
    Count,
    Verify,
    Tree,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// Algebra along which `arc` takes arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// `k[xi]/(xi^length)`
    Truncated { length: u32 },
    /// `k[variables]/(generators)` with monomial generators.
    Monomial { variables: Vec<String>, generators: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub characteristic: u64,
    #[serde(default)]
    pub variables: Vec<String>,
    pub polynomials: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

#[derive(Debug)]
pub struct JobError(pub String);

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for JobError {
    fn from(e: E) -> Self {
        JobError(e.to_string())
    }
}

pub fn fail<T>(msg: impl Into<String>) -> Result<T, JobError> {
    Err(JobError(msg.into()))
}

/// Tree root choice for `igusa` and `tree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Zero,
    Ones,
    Custom(TaggedTuple),
}

/// A job with every field parsed and checked.
#[derive(Debug, Clone)]
pub struct Validated {
    pub field: Field,
    pub names: Vec<String>,
    pub polys: Vec<Poly>,
    pub algebra: Option<ArtinAlgebra>,
    pub theta: Option<TaggedTuple>,
    pub root: Root,
}

/// Identifiers in the polynomial texts, sorted.
fn infer_variables(polys: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for p in polys {
        let mut cur = String::new();
        for c in p.chars().chain(std::iter::once(' ')) {
            if c.is_ascii_alphabetic() || (!cur.is_empty() && (c.is_ascii_alphanumeric() || c == '_')) {
                cur.push(c);
            } else if !cur.is_empty() {
                if !out.contains(&cur) {
                    out.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    out.sort();
    out
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<JobSpec, JobError> {
        serde_json::from_str(text).map_err(|e| JobError(format!("job file: {e}")))
    }

    /// Fills inferred defaults so the embedded job fully determines the output.
    pub fn resolve(&mut self) {
        if self.variables.is_empty() {
            self.variables = infer_variables(&self.polynomials);
        }
    }

    /// SHA-256 of the job without its output paths.
    pub fn input_hash(&self) -> String {
        let mut inputs = self.clone();
        inputs.output = None;
        inputs.dot = None;
        let bytes = serde_json::to_vec(&inputs).expect("job serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<Validated, JobError> {
        let field = Field::from_characteristic(self.characteristic)?;
        if self.polynomials.is_empty() {
            return fail("no polynomial given");
        }
        if self.variables.is_empty() {
            return fail("no variables given or found in the polynomials");
        }
        let vars: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        let polys = self
            .polynomials
            .iter()
            .map(|p| parse_poly(p, &vars, field).map_err(|e| JobError(format!("`{p}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let algebra = match &self.algebra {
            None => None,
            Some(AlgebraSpec::Truncated { length }) => {
                if *length == 0 {
                    return fail("algebra length must be positive");
                }
                Some(truncated(*length, field)?)
            }
            Some(AlgebraSpec::Monomial { variables, generators }) => {
                let avars: Vec<&str> = variables.iter().map(String::as_str).collect();
                let mut exps = Vec::new();
                for g in generators {
                    let p = parse_poly(g, &avars, field).map_err(|e| JobError(format!("`{g}`: {e}")))?;
                    let terms: Vec<_> = p.terms().collect();
                    if terms.len() != 1 {
                        return fail(format!("algebra generator `{g}` is not a monomial"));
                    }
                    exps.push(terms[0].0 .0.clone());
                }
                Some(monomial_quotient(&avars, &exps, field)?)
            }
        };
        let m = self.variables.len();
        let parse_tuple = |s: &str| -> Result<TaggedTuple, JobError> {
            let t = TaggedTuple::parse(s).ok_or_else(|| JobError(format!("cannot parse tuple `{s}`")))?;
            if t.len() != m {
                return fail(format!("tuple `{s}` has {} entries for {m} variables", t.len()));
            }
            Ok(t)
        };
        let theta = self.theta.as_deref().map(parse_tuple).transpose()?;
        let root = match self.root.as_deref() {
            None | Some("auto") => {
                // the all-ones root needs the origin on the hypersurface
                if polys[0].terms().all(|(mono, _)| mono.0.iter().any(|&e| e > 0)) {
                    Root::Ones
                } else {
                    Root::Zero
                }
            }
            Some("zero") => Root::Zero,
            Some("ones") => Root::Ones,
            Some(s) => Root::Custom(parse_tuple(s)?),
        };
        let needs = |what: &str, v: bool| if v { Ok(()) } else { fail(format!("`{}` needs {what}", self.command)) };
        match self.command {
            Command::Arc => {
                needs("an algebra, or a tuple with n", algebra.is_some() || (theta.is_some() && self.n.is_some()))?;
                needs("either an algebra or a tuple, not both", !(algebra.is_some() && theta.is_some()))?;
            }
            Command::Jet => needs("n", self.n.is_some())?,
            Command::Count => {
                needs("q and n", self.q.is_some() && self.n.is_some())?;
                Field::prime(self.q.unwrap_or(0))?;
                let c = self.characteristic;
                needs("characteristic 0 or q", c == 0 || Some(c) == self.q)?;
            }
            Command::Verify => {
                needs("q", self.q.is_some())?;
                Field::prime(self.q.unwrap_or(0))?;
                let c = self.characteristic;
                needs("characteristic 0 or q", c == 0 || Some(c) == self.q)?;
            }
            Command::Igusa | Command::Tree => {}
        }
        if matches!(self.command, Command::Igusa | Command::Tree | Command::Verify) {
            needs("exactly one polynomial", polys.len() == 1)?;
        }
        if matches!(self.command, Command::Igusa | Command::Verify) {
            needs("the root zero, ones or auto", !matches!(root, Root::Custom(_)))?;
        }
        Ok(Validated { field, names: self.variables.clone(), polys, algebra, theta, root })
    }
}
