//! Scenario files and finite-topology / poset declarations.
//!
//! Scenario:
//!
//! ```text
//! DIM 2
//! CLOSE on
//! OPERATOR sigma_z
//! EIGENVALUE 1 : (1, 0)
//! EIGENVALUE -1 : (0, 1)
//! STATE plus (1, 1)
//! QUERY plus sigma_z {1}
//! ```
//!
//! Topology or poset:
//!
//! ```text
//! POINTS a b          POSET
//! OPEN {}             ELEMENTS p q r
//! OPEN {a}            LEQ p q
//! OPEN {a, b}         LEQ p r
//! ```
//!
//! `#` starts a comment. Keywords are case-sensitive; blank lines are
//! ignored.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;
use topos_core::fincat::{poset_to_category, FinCategory};
use topos_core::heyting::FiniteTopology;
use topos_core::quantum::{
    build_operator_category, make_operator, EigenGroup, EigenMask, GaussianRational,
    OperatorCategory, QuantumError, Rational, SpectralOperator, State,
};

use crate::number::{parse_complex, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A well-formed file whose content breaks a semantic rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("operator `{operator}` violates {law}: {message}")]
    InvariantViolation {
        operator: String,
        law: &'static str,
        message: String,
    },
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: unknown {kind} `{name}`")]
    UnknownName {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
}

impl ValidationError {
    pub fn kind(&self) -> &'static str {
        match self {
            ValidationError::InvariantViolation { .. } => "InvariantViolation",
            ValidationError::DuplicateName { .. } => "DuplicateName",
            ValidationError::UnknownName { .. } => "UnknownName",
            ValidationError::Invalid { .. } => "Invalid",
            ValidationError::Structure(_) => "Structure",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorDecl {
    pub name: String,
    pub line: usize,
    pub eigen: Vec<EigenGroup>,
}

#[derive(Debug, Clone)]
pub struct StateDecl {
    pub name: String,
    pub line: usize,
    pub vector: Vec<GaussianRational>,
}

#[derive(Debug, Clone)]
pub struct QueryDecl {
    pub state: String,
    pub operator: String,
    pub delta: Vec<Rational>,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub dim: usize,
    pub close: bool,
    pub operators: Vec<OperatorDecl>,
    pub states: Vec<StateDecl>,
    pub queries: Vec<QueryDecl>,
}

/// Either kind of non-scenario input.
#[derive(Debug, Clone)]
pub enum Structure {
    Topology(FiniteTopology),
    Poset(FinCategory),
}

#[derive(Debug, Clone)]
pub enum Input {
    Scenario(Scenario),
    Structure(Structure),
}

struct Cursor<'a> {
    line: usize,
    chars: &'a [char],
    pos: usize,
}

const SPECIAL: &[char] = &['(', ')', '{', '}', ',', ':'];

impl<'a> Cursor<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        self.error_at(self.pos, message)
    }

    fn error_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(self.at(pos, message))
    }

    fn at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.chars.len()
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.error(format!("unexpected `{}`", self.chars[self.pos]))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(format!("expected `{c}`, found `{d}`")),
            None => self.error(format!("expected `{c}`")),
        }
    }

    /// A run of non-space characters other than punctuation, with its start.
    fn word(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && !self.chars[self.pos].is_whitespace()
            && !SPECIAL.contains(&self.chars[self.pos])
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error(format!("expected {what}"));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let (w, start) = self.word("a rational number")?;
        parse_rational(&w).or_else(|e| self.error_at(start + e.offset, e.message))
    }

    /// `open item (',' item)* close`, or `open close`.
    fn list<T>(
        &mut self,
        open: char,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.error(format!("expected `,` or `{close}`")),
            }
        }
    }

    fn vector(&mut self) -> Result<Vec<GaussianRational>, ParseError> {
        self.list('(', ')', |c| {
            let (w, start) = c.word("a complex number")?;
            parse_complex(&w).or_else(|e| c.error_at(start + e.offset, e.message))
        })
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<char>)> + '_ {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            None
        } else {
            Some((i + 1, body.chars().collect()))
        }
    })
}

fn first_keyword(text: &str) -> Option<String> {
    lines(text).next().map(|(_, cs)| {
        let s: String = cs.into_iter().collect();
        s.split_whitespace().next().unwrap_or("").to_string()
    })
}

/// Parses either file kind, deciding by the first keyword.
pub fn parse_input(text: &str) -> Result<Input, ParseOrInvalid> {
    match first_keyword(text).as_deref() {
        Some("POINTS") | Some("POSET") => Ok(Input::Structure(parse_structure(text)?)),
        _ => Ok(Input::Scenario(parse_scenario(text)?)),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut dim: Option<usize> = None;
    let mut close: Option<bool> = None;
    let mut operators: Vec<OperatorDecl> = Vec::new();
    let mut states = Vec::new();
    let mut queries = Vec::new();
    let mut last_line = 0;
    for (line, chars) in lines(text) {
        last_line = line;
        let mut c = Cursor {
            line,
            chars: &chars,
            pos: 0,
        };
        let (kw, kw_start) = c.word("a keyword")?;
        match kw.as_str() {
            "DIM" => {
                if dim.is_some() {
                    return c.error_at(kw_start, "DIM given twice");
                }
                let (w, start) = c.word("a dimension")?;
                match w.parse::<usize>() {
                    Ok(n) if n > 0 => dim = Some(n),
                    _ => return c.error_at(start, format!("`{w}` is not a positive integer")),
                }
            }
            "CLOSE" => {
                if close.is_some() {
                    return c.error_at(kw_start, "CLOSE given twice");
                }
                let (w, start) = c.word("`on` or `off`")?;
                close = Some(match w.as_str() {
                    "on" => true,
                    "off" => false,
                    _ => return c.error_at(start, format!("expected `on` or `off`, found `{w}`")),
                });
            }
            "OPERATOR" => {
                let (name, _) = c.word("an operator name")?;
                operators.push(OperatorDecl {
                    name,
                    line,
                    eigen: Vec::new(),
                });
            }
            "EIGENVALUE" => {
                let value = c.rational()?;
                c.expect(':')?;
                let mut vectors = vec![c.vector()?];
                while c.peek() == Some(',') {
                    c.pos += 1;
                    vectors.push(c.vector()?);
                }
                let Some(op) = operators.last_mut() else {
                    return c.error_at(kw_start, "EIGENVALUE outside an OPERATOR block");
                };
                op.eigen.push((value, vectors));
            }
            "STATE" => {
                let (name, _) = c.word("a state name")?;
                let vector = c.vector()?;
                states.push(StateDecl { name, line, vector });
            }
            "QUERY" => {
                let (state, _) = c.word("a state name")?;
                let (operator, _) = c.word("an operator name")?;
                let delta = c.list('{', '}', Cursor::rational)?;
                queries.push(QueryDecl {
                    state,
                    operator,
                    delta,
                    line,
                });
            }
            other => return c.error_at(kw_start, format!("unknown keyword `{other}`")),
        }
        c.finish()?;
    }
    let Some(dim) = dim else {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            message: "missing DIM".into(),
        });
    };
    Ok(Scenario {
        dim,
        close: close.unwrap_or(false),
        operators,
        states,
        queries,
    })
}

/// A structure file can be syntactically fine but not a topology/poset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseOrInvalid {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

pub fn parse_structure(text: &str) -> Result<Structure, ParseOrInvalid> {
    enum Kind {
        Topology {
            points: Vec<String>,
            opens: Vec<(usize, Vec<(String, usize)>)>,
        },
        Poset {
            elements: Option<Vec<String>>,
            leq: Vec<(usize, String, String)>,
        },
    }
    let mut kind: Option<Kind> = None;
    for (line, chars) in lines(text) {
        let mut c = Cursor {
            line,
            chars: &chars,
            pos: 0,
        };
        let (kw, kw_start) = c.word("a keyword")?;
        match (kw.as_str(), &mut kind) {
            ("POINTS", None) => {
                let mut points = Vec::new();
                while !c.at_end() {
                    points.push(c.word("a point name")?.0);
                }
                kind = Some(Kind::Topology {
                    points,
                    opens: Vec::new(),
                });
            }
            ("OPEN", Some(Kind::Topology { opens, .. })) => {
                let members = c.list('{', '}', |c| c.word("a point name"))?;
                opens.push((line, members));
            }
            ("POSET", None) => {
                kind = Some(Kind::Poset {
                    elements: None,
                    leq: Vec::new(),
                })
            }
            ("ELEMENTS", Some(Kind::Poset { elements, .. })) if elements.is_none() => {
                let mut es = Vec::new();
                while !c.at_end() {
                    es.push(c.word("an element name")?.0);
                }
                *elements = Some(es);
            }
            ("LEQ", Some(Kind::Poset { leq, .. })) => {
                let (a, _) = c.word("an element name")?;
                let (b, _) = c.word("an element name")?;
                leq.push((line, a, b));
            }
            (other, _) => {
                return Err(c
                    .at(kw_start, format!("unexpected keyword `{other}`"))
                    .into())
            }
        }
        c.finish()?;
    }
    match kind {
        None => Err(ParseError {
            line: 1,
            column: 1,
            message: "expected POINTS or POSET".into(),
        }
        .into()),
        Some(Kind::Topology { points, opens }) => {
            let index: HashMap<&str, usize> = points
                .iter()
                .enumerate()
                .map(|(i, p)| (p.as_str(), i))
                .collect();
            let mut sets = Vec::new();
            for (line, members) in &opens {
                let mut set = BTreeSet::new();
                for (name, _) in members {
                    let Some(&i) = index.get(name.as_str()) else {
                        return Err(ValidationError::UnknownName {
                            line: *line,
                            kind: "point",
                            name: name.clone(),
                        }
                        .into());
                    };
                    set.insert(i);
                }
                sets.push(set);
            }
            FiniteTopology::new(points, sets)
                .map(Structure::Topology)
                .map_err(|e| ValidationError::Structure(e.to_string()).into())
        }
        Some(Kind::Poset { elements, leq }) => {
            let elements = elements.unwrap_or_default();
            let known: BTreeSet<&str> = elements.iter().map(String::as_str).collect();
            let mut pairs: Vec<(String, String)> =
                elements.iter().map(|e| (e.clone(), e.clone())).collect();
            for (line, a, b) in leq {
                for x in [&a, &b] {
                    if !known.contains(x.as_str()) {
                        return Err(ValidationError::UnknownName {
                            line,
                            kind: "element",
                            name: x.clone(),
                        }
                        .into());
                    }
                }
                if !pairs.contains(&(a.clone(), b.clone())) {
                    pairs.push((a, b));
                }
            }
            poset_to_category(&elements, &pairs)
                .map(Structure::Poset)
                .map_err(|e| ValidationError::Structure(e.to_string()).into())
        }
    }
}

/// A scenario whose operators, states and queries all check out.
#[derive(Debug, Clone)]
pub struct Validated {
    pub scenario: Scenario,
    pub category: OperatorCategory,
    pub states: Vec<State>,
    /// `(state index, seed operator index, Δ mask)` per query.
    pub queries: Vec<(usize, usize, EigenMask)>,
}

fn law_of(e: &QuantumError) -> Option<(String, &'static str)> {
    Some(match e {
        QuantumError::NotOrthogonal { operator } => (operator.clone(), "NotOrthogonal"),
        QuantumError::IncompleteBasis { operator, .. } => (operator.clone(), "IncompleteBasis"),
        QuantumError::DuplicateEigenvalue { operator, .. } => {
            (operator.clone(), "DuplicateEigenvalue")
        }
        QuantumError::EmptyEigenspace { operator, .. } => (operator.clone(), "EmptyEigenspace"),
        QuantumError::ZeroVector { operator } => (operator.clone(), "ZeroVector"),
        QuantumError::InvariantViolation { operator, .. } => {
            (operator.clone(), "InvariantViolation")
        }
        _ => return None,
    })
}

fn invariant(op: &OperatorDecl, e: QuantumError) -> ValidationError {
    match law_of(&e) {
        Some((operator, law)) => ValidationError::InvariantViolation {
            operator,
            law,
            message: e.to_string(),
        },
        None => ValidationError::Invalid {
            line: op.line,
            message: format!("operator `{}`: {e}", op.name),
        },
    }
}

impl Scenario {
    /// Builds every operator and state, resolves queries, and assembles the
    /// operator category.
    pub fn validate(self) -> Result<Validated, ValidationError> {
        let mut names: HashMap<&str, usize> = HashMap::new();
        for op in &self.operators {
            if names.insert(&op.name, op.line).is_some() {
                return Err(ValidationError::DuplicateName {
                    line: op.line,
                    name: op.name.clone(),
                });
            }
        }
        let mut ops: Vec<SpectralOperator> = Vec::new();
        for op in &self.operators {
            for (_, vs) in &op.eigen {
                if let Some(v) = vs.iter().find(|v| v.len() != self.dim) {
                    return Err(ValidationError::Invalid {
                        line: op.line,
                        message: format!(
                            "operator `{}` has a vector of length {}, DIM is {}",
                            op.name,
                            v.len(),
                            self.dim
                        ),
                    });
                }
            }
            ops.push(
                make_operator(&op.name, self.dim, op.eigen.clone())
                    .map_err(|e| invariant(op, e))?,
            );
        }
        let mut state_names: HashMap<&str, usize> = HashMap::new();
        let mut states = Vec::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_names.insert(&s.name, i).is_some() {
                return Err(ValidationError::DuplicateName {
                    line: s.line,
                    name: s.name.clone(),
                });
            }
            if s.vector.len() != self.dim {
                return Err(ValidationError::Invalid {
                    line: s.line,
                    message: format!(
                        "state `{}` has length {}, DIM is {}",
                        s.name,
                        s.vector.len(),
                        self.dim
                    ),
                });
            }
            states.push(
                State::new(s.vector.clone()).map_err(|e| ValidationError::Invalid {
                    line: s.line,
                    message: format!("state `{}`: {e}", s.name),
                })?,
            );
        }
        let op_index: HashMap<&str, usize> = self
            .operators
            .iter()
            .enumerate()
            .map(|(i, o)| (o.name.as_str(), i))
            .collect();
        let mut queries = Vec::new();
        for q in &self.queries {
            let Some(&s) = state_names.get(q.state.as_str()) else {
                return Err(ValidationError::UnknownName {
                    line: q.line,
                    kind: "state",
                    name: q.state.clone(),
                });
            };
            let Some(&o) = op_index.get(q.operator.as_str()) else {
                return Err(ValidationError::UnknownName {
                    line: q.line,
                    kind: "operator",
                    name: q.operator.clone(),
                });
            };
            let mask = ops[o]
                .mask_of(&q.delta)
                .map_err(|e| ValidationError::Invalid {
                    line: q.line,
                    message: e.to_string(),
                })?;
            queries.push((s, o, mask));
        }
        let category = build_operator_category(ops, self.close).map_err(|e| match e {
            QuantumError::NameCollision(name) => ValidationError::DuplicateName {
                line: names.get(name.as_str()).copied().unwrap_or(0),
                name,
            },
            e => ValidationError::Structure(e.to_string()),
        })?;
        Ok(Validated {
            scenario: self,
            category,
            states,
            queries,
        })
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Topology(t) => write!(
                f,
                "topology on {} points, {} opens",
                t.points().len(),
                t.opens().len()
            ),
            Structure::Poset(c) => write!(f, "poset with {} elements", c.num_objects()),
        }
    }
}
