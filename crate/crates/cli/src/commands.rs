use std::path::Path;

use topos_core::fincat::{FinCategory, ObjectId};
use topos_core::heyting::{all_sieves, HeytingAlgebraTable};
use topos_core::presheaf::{PresheafError, SearchOptions};
use topos_core::quantum::gauss::fmt_rational;
use topos_core::quantum::{
    born_prob_mask, ks_global_section_search, nu_state_mask, OperatorCategory, QuantumError,
    SieveValuation,
};

use crate::report::{
    AlgebraTable, ArrowEntry, Assignment, Body, ErrorInfo, FuncResult, ObjectEntry,
    OperatorSummary, QueryResult, Report, SieveMember, Validated as ValidatedReport,
};
use crate::scenario::{
    parse_input, parse_scenario, Input, ParseError, ParseOrInvalid, Structure, Validated,
    ValidationError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Category,
    Valuate,
    KsSearch,
    Heyting,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Category => "category",
            Command::Valuate => "valuate",
            Command::KsSearch => "ks-search",
            Command::Heyting => "heyting",
        }
    }
}

/// Why a command did not produce its normal report.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Parse(ParseError),
    Invalid(ValidationError),
    Guard { needed: u64, limit: u64 },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) | Failure::Parse(_) => 2,
            Failure::Guard { .. } => 3,
        }
    }

    fn info(&self) -> (&'static str, ErrorInfo) {
        let plain = |kind: &str, message: String| ErrorInfo {
            kind: kind.to_string(),
            message,
            line: None,
            column: None,
            operator: None,
            law: None,
        };
        match self {
            Failure::Io(m) => ("io_error", plain("Io", m.clone())),
            Failure::Parse(e) => (
                "parse_error",
                ErrorInfo {
                    line: Some(e.line),
                    column: Some(e.column),
                    ..plain("ParseError", e.message.clone())
                },
            ),
            Failure::Invalid(e) => {
                let mut info = plain(e.kind(), String::new());
                info.message = match e {
                    ValidationError::InvariantViolation {
                        operator,
                        law,
                        message,
                    } => {
                        info.operator = Some(operator.clone());
                        info.law = Some(law.to_string());
                        message.clone()
                    }
                    ValidationError::DuplicateName { line, name } => {
                        info.line = Some(*line);
                        format!("duplicate name `{name}`")
                    }
                    ValidationError::UnknownName { line, kind, name } => {
                        info.line = Some(*line);
                        format!("unknown {kind} `{name}`")
                    }
                    ValidationError::Invalid { line, message } => {
                        info.line = Some(*line);
                        message.clone()
                    }
                    ValidationError::Structure(m) => m.clone(),
                };
                ("invalid", info)
            }
            Failure::Guard { needed, limit } => (
                "size_guard",
                plain(
                    "SizeLimitExceeded",
                    format!(
                        "search needs more than {limit} nodes (stopped at {needed}); raise --guard"
                    ),
                ),
            ),
        }
    }

    pub fn report(&self, command: Command, input: &str) -> Report {
        let (status, error) = self.info();
        Report {
            command: command.name(),
            input: input.to_string(),
            body: Body::Error { status, error },
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        Failure::Invalid(e)
    }
}

impl From<ParseOrInvalid> for Failure {
    fn from(e: ParseOrInvalid) -> Self {
        match e {
            ParseOrInvalid::Parse(p) => Failure::Parse(p),
            ParseOrInvalid::Invalid(v) => Failure::Invalid(v),
        }
    }
}

fn guard(e: PresheafError) -> Failure {
    match e {
        PresheafError::SizeLimitExceeded { needed, limit } => Failure::Guard { needed, limit },
        e => Failure::Invalid(ValidationError::Structure(e.to_string())),
    }
}

fn quantum(e: QuantumError) -> Failure {
    match e {
        QuantumError::Presheaf(p) => guard(p),
        e => Failure::Invalid(ValidationError::Structure(e.to_string())),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub search: SearchOptions,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Validated, Failure> {
    Ok(parse_scenario(&read(path)?)?.validate()?)
}

pub fn run(command: Command, path: &Path, options: Options) -> Result<Report, Failure> {
    let body = match command {
        Command::Validate => validate(path)?,
        Command::Category => category(&load_scenario(path)?),
        Command::Valuate => valuate(&load_scenario(path)?)?,
        Command::KsSearch => ks_search(&load_scenario(path)?, options)?,
        Command::Heyting => heyting(path)?,
    };
    Ok(Report {
        command: command.name(),
        input: path.display().to_string(),
        body,
    })
}

fn validate(path: &Path) -> Result<Body, Failure> {
    let what = match parse_input(&read(path)?)? {
        Input::Scenario(s) => {
            let v = s.validate()?;
            let cat = v.category.category();
            ValidatedReport::Scenario {
                dim: v.scenario.dim,
                closed: v.scenario.close,
                operators: v.category.operators()[..v.category.num_seeds()]
                    .iter()
                    .map(|op| OperatorSummary {
                        name: op.name().to_string(),
                        spectrum: op.spectrum().iter().map(fmt_rational).collect(),
                        multiplicities: op
                            .projectors()
                            .iter()
                            .map(|p| usize::try_from(p.trace().re.to_integer()).unwrap_or(0))
                            .collect(),
                    })
                    .collect(),
                states: v.scenario.states.iter().map(|s| s.name.clone()).collect(),
                queries: v.queries.len(),
                objects: cat.num_objects(),
                arrows: cat.num_arrows(),
            }
        }
        Input::Structure(Structure::Topology(t)) => ValidatedReport::Topology {
            points: t.points().to_vec(),
            opens: t.opens().iter().map(|u| t.label(u)).collect(),
        },
        Input::Structure(Structure::Poset(c)) => ValidatedReport::Poset {
            elements: c.objects().map(|o| c.object_name(o).to_string()).collect(),
            arrows: c.num_arrows(),
        },
    };
    Ok(Body::Validate {
        status: "valid",
        what,
    })
}

fn function_pairs(oc: &OperatorCategory, a: topos_core::fincat::ArrowId) -> Vec<[String; 2]> {
    oc.function_pairs(a)
        .iter()
        .map(|(x, y)| [fmt_rational(x), fmt_rational(y)])
        .collect()
}

fn category(v: &Validated) -> Body {
    let oc = &v.category;
    let cat = oc.category();
    let objects = cat
        .objects()
        .map(|o| ObjectEntry {
            name: cat.object_name(o).to_string(),
            spectrum: oc.operator(o).spectrum().iter().map(fmt_rational).collect(),
            seed: o.0 < oc.num_seeds(),
            sieves: all_sieves(cat, o).map_or(0, |s| s.len()),
        })
        .collect();
    let arrows = cat
        .arrows()
        .iter()
        .map(|a| ArrowEntry {
            name: a.name.clone(),
            dom: cat.object_name(a.dom).to_string(),
            cod: cat.object_name(a.cod).to_string(),
            function: function_pairs(oc, a.id),
        })
        .collect();
    Body::Category {
        closed: v.scenario.close,
        objects,
        arrows,
    }
}

fn valuate(v: &Validated) -> Result<Body, Failure> {
    if v.queries.is_empty() {
        return Err(ValidationError::Structure("valuate needs at least one QUERY".into()).into());
    }
    let oc = &v.category;
    let cat = oc.category();
    let mut queries = Vec::new();
    for (&(s, o, mask), decl) in v.queries.iter().zip(&v.scenario.queries) {
        let psi = &v.states[s];
        let a = ObjectId(o);
        let op = oc.operator(a);
        let sieve = nu_state_mask(oc, psi, a, mask).map_err(quantum)?;
        let truth = if sieve.is_principal(cat) {
            "principal"
        } else if sieve.is_empty() {
            "empty"
        } else {
            "intermediate"
        };
        queries.push(QueryResult {
            state: decl.state.clone(),
            operator: decl.operator.clone(),
            delta: op.values_of(mask).iter().map(fmt_rational).collect(),
            probability: fmt_rational(&born_prob_mask(psi, op, mask)),
            truth,
            sieve: sieve
                .members()
                .iter()
                .map(|&f| SieveMember {
                    codomain: cat.object_name(cat.cod(f)).to_string(),
                    function: function_pairs(oc, f),
                })
                .collect(),
        });
    }
    let mut used: Vec<usize> = v.queries.iter().map(|q| q.0).collect();
    used.sort_unstable();
    used.dedup();
    let func_check = used
        .into_iter()
        .map(|s| {
            let nu = SieveValuation::from_state(oc, &v.states[s]).map_err(quantum)?;
            Ok(FuncResult {
                state: v.scenario.states[s].name.clone(),
                holds: nu.func_check().is_ok(),
            })
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Body::Valuate {
        queries,
        func_check,
    })
}

fn ks_search(v: &Validated, options: Options) -> Result<Body, Failure> {
    let oc = &v.category;
    let cat = oc.category();
    let res = ks_global_section_search(oc, options.search).map_err(quantum)?;
    let sections = res
        .sections
        .iter()
        .map(|s| {
            (0..oc.num_seeds())
                .map(|i| {
                    let op = oc.operator(ObjectId(i));
                    Assignment {
                        operator: op.name().to_string(),
                        value: fmt_rational(&op.spectrum()[s.choice[i]]),
                    }
                })
                .collect()
        })
        .collect();
    Ok(Body::KsSearch {
        objects: cat.num_objects(),
        arrows: cat.num_arrows(),
        section_count: res.sections.len(),
        obstruction_certified: res.sections.is_empty(),
        search_nodes: res.nodes,
        sections,
    })
}

fn algebra(context: String, t: HeytingAlgebraTable) -> AlgebraTable {
    let failures = t
        .excluded_middle_failures()
        .into_iter()
        .map(|i| t.labels[i].clone())
        .collect();
    AlgebraTable {
        context,
        elements: t.labels,
        meet: t.meet,
        join: t.join,
        implies: t.implies,
        not: t.not,
        excluded_middle_failures: failures,
    }
}

fn sieve_algebras(cat: &FinCategory) -> Result<Vec<AlgebraTable>, Failure> {
    cat.objects()
        .map(|o| {
            let t = HeytingAlgebraTable::from_sieves(cat, o)
                .map_err(|e| Failure::Invalid(ValidationError::Structure(e.to_string())))?;
            Ok(algebra(format!("Ω({})", cat.object_name(o)), t))
        })
        .collect()
}

fn heyting(path: &Path) -> Result<Body, Failure> {
    let algebras = match parse_input(&read(path)?)? {
        Input::Scenario(s) => sieve_algebras(s.validate()?.category.category())?,
        Input::Structure(Structure::Poset(c)) => sieve_algebras(&c)?,
        Input::Structure(Structure::Topology(t)) => {
            vec![algebra(
                "open sets".to_string(),
                HeytingAlgebraTable::from_topology(&t),
            )]
        }
    };
    Ok(Body::Heyting { algebras })
}
