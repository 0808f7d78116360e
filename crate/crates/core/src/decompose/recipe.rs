//! Build recipes: terms over circuits, complete graphs and projective
//! geometries joined by direct sums and parallel connections.
//!
//! Text form, produced by `Display` and accepted by `FromStr`:
//!
//! ```text
//! term  := leaf | "D(" term ", " term ")" | "P(" term ", " term "; base=" LABEL ")"
//! leaf  := ("CIRCUIT" | "MK" | "PG") "(" N ")" [ "[" LABEL ("," LABEL)* "]" ]
//! ```
//!
//! A leaf label list names the constructed elements in column order; without
//! one the constructor's default labels are used. The parser also accepts
//! extra whitespace between tokens.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::construct::{
    circuit_matroid, complete_graph_matroid, parallel_connection, projective_geometry,
};
use crate::error::{Error, Result};
use crate::matroid::{validate_label, BinaryMatroid};

/// Nesting limit for parsed terms.
pub const MAX_RECIPE_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BuildRecipe {
    /// `U(n-1, n)`.
    Circuit {
        n: usize,
        labels: Option<Vec<String>>,
    },
    /// `M(K_n)`.
    CompleteGraph {
        n: usize,
        labels: Option<Vec<String>>,
    },
    /// `PG(r-1, 2)`.
    Projective {
        r: usize,
        labels: Option<Vec<String>>,
    },
    DirectSum(Box<BuildRecipe>, Box<BuildRecipe>),
    /// Parallel connection along the element `base` present in both terms.
    ParallelConnection {
        left: Box<BuildRecipe>,
        right: Box<BuildRecipe>,
        base: String,
    },
}

impl BuildRecipe {
    pub fn direct_sum(a: BuildRecipe, b: BuildRecipe) -> Self {
        BuildRecipe::DirectSum(Box::new(a), Box::new(b))
    }

    pub fn parallel(a: BuildRecipe, b: BuildRecipe, base: impl Into<String>) -> Self {
        BuildRecipe::ParallelConnection {
            left: Box::new(a),
            right: Box::new(b),
            base: base.into(),
        }
    }

    /// Build the matroid the term describes.
    pub fn evaluate(&self) -> Result<BinaryMatroid> {
        match self {
            BuildRecipe::Circuit { n, labels } => relabel(circuit_matroid(*n)?, labels),
            BuildRecipe::CompleteGraph { n, labels } => {
                relabel(complete_graph_matroid(*n)?, labels)
            }
            BuildRecipe::Projective { r, labels } => relabel(projective_geometry(*r)?, labels),
            BuildRecipe::DirectSum(a, b) => a.evaluate()?.direct_sum(&b.evaluate()?),
            BuildRecipe::ParallelConnection { left, right, base } => {
                let left = with_base(left.evaluate()?, base)?;
                let right = with_base(right.evaluate()?, base)?;
                parallel_connection(&left, &right, base, base)
            }
        }
    }

    /// Number of leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            BuildRecipe::DirectSum(a, b) => a.leaf_count() + b.leaf_count(),
            BuildRecipe::ParallelConnection { left, right, .. } => {
                left.leaf_count() + right.leaf_count()
            }
            _ => 1,
        }
    }
}

/// A side that lacks the basepoint label uses its first element as the
/// basepoint, so `P(MK(4), PG(3); base=e12)` glues `p1` onto `e12`.
fn with_base(m: BinaryMatroid, base: &str) -> Result<BinaryMatroid> {
    if m.index_of(base).is_some() {
        return Ok(m);
    }
    if m.is_empty() {
        return Err(Error::UnknownLabel(base.to_string()));
    }
    let map = HashMap::from([(m.label(0).to_string(), base.to_string())]);
    m.relabel(&map)
}

fn relabel(m: BinaryMatroid, labels: &Option<Vec<String>>) -> Result<BinaryMatroid> {
    let Some(labels) = labels else { return Ok(m) };
    if labels.len() != m.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels given for {} elements",
            labels.len(),
            m.len()
        )));
    }
    let map: HashMap<String, String> = m
        .labels()
        .iter()
        .cloned()
        .zip(labels.iter().cloned())
        .collect();
    m.relabel(&map)
}

fn write_leaf(
    f: &mut fmt::Formatter<'_>,
    name: &str,
    n: usize,
    labels: &Option<Vec<String>>,
) -> fmt::Result {
    write!(f, "{name}({n})")?;
    if let Some(labels) = labels {
        write!(f, "[{}]", labels.join(","))?;
    }
    Ok(())
}

impl fmt::Display for BuildRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildRecipe::Circuit { n, labels } => write_leaf(f, "CIRCUIT", *n, labels),
            BuildRecipe::CompleteGraph { n, labels } => write_leaf(f, "MK", *n, labels),
            BuildRecipe::Projective { r, labels } => write_leaf(f, "PG", *r, labels),
            BuildRecipe::DirectSum(a, b) => write!(f, "D({a}, {b})"),
            BuildRecipe::ParallelConnection { left, right, base } => {
                write!(f, "P({left}, {right}; base={base})")
            }
        }
    }
}

impl FromStr for BuildRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let term = p.term(0)?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(term)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let n = self.rest()[..digits]
            .parse()
            .map_err(|_| self.error("number out of range"))?;
        self.pos += digits;
        Ok(n)
    }

    fn label(&mut self) -> Result<String> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|&c| validate_label(c.encode_utf8(&mut [0; 4])).is_ok())
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.error("expected a label"));
        }
        let l = self.rest()[..len].to_string();
        self.pos += len;
        Ok(l)
    }

    fn term(&mut self, depth: usize) -> Result<BuildRecipe> {
        if depth > MAX_RECIPE_DEPTH {
            return Err(self.error("terms nested too deeply"));
        }
        self.skip_ws();
        for (name, kind) in [
            ("CIRCUIT(", 0),
            ("MK(", 1),
            ("PG(", 2),
            ("D(", 3),
            ("P(", 4),
        ] {
            if !self.eat(name) {
                continue;
            }
            return match kind {
                3 => {
                    let a = self.term(depth + 1)?;
                    self.expect(",")?;
                    let b = self.term(depth + 1)?;
                    self.expect(")")?;
                    Ok(BuildRecipe::direct_sum(a, b))
                }
                4 => {
                    let a = self.term(depth + 1)?;
                    self.expect(",")?;
                    let b = self.term(depth + 1)?;
                    self.expect(";")?;
                    self.expect("base")?;
                    self.expect("=")?;
                    let base = self.label()?;
                    self.expect(")")?;
                    Ok(BuildRecipe::parallel(a, b, base))
                }
                _ => {
                    let n = self.number()?;
                    self.expect(")")?;
                    let labels = if self.rest().starts_with('[') {
                        self.pos += 1;
                        let mut ls = vec![self.label()?];
                        while self.eat(",") {
                            ls.push(self.label()?);
                        }
                        self.expect("]")?;
                        Some(ls)
                    } else {
                        None
                    };
                    Ok(match kind {
                        0 => BuildRecipe::Circuit { n, labels },
                        1 => BuildRecipe::CompleteGraph { n, labels },
                        _ => BuildRecipe::Projective { r: n, labels },
                    })
                }
            };
        }
        Err(self.error("expected CIRCUIT, MK, PG, D or P"))
    }
}
