//! Command results, rendered either for people or as a JSON record.
//!
//! Both renderings are produced from the same structs, so they always carry
//! the same numbers and memberships.

use std::fmt::Write;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct OperatorSummary {
    pub name: String,
    pub spectrum: Vec<String>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Validated {
    Scenario {
        dim: usize,
        closed: bool,
        operators: Vec<OperatorSummary>,
        states: Vec<String>,
        queries: usize,
        objects: usize,
        arrows: usize,
    },
    Topology {
        points: Vec<String>,
        opens: Vec<String>,
    },
    Poset {
        elements: Vec<String>,
        arrows: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ObjectEntry {
    pub name: String,
    pub spectrum: Vec<String>,
    pub seed: bool,
    pub sieves: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArrowEntry {
    pub name: String,
    pub dom: String,
    pub cod: String,
    /// `[a, f(a)]` for every eigenvalue `a` of the domain.
    pub function: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveMember {
    pub codomain: String,
    pub function: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub state: String,
    pub operator: String,
    pub delta: Vec<String>,
    pub probability: String,
    /// `principal`, `empty` or `intermediate`.
    pub truth: &'static str,
    pub sieve: Vec<SieveMember>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuncResult {
    pub state: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub operator: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraTable {
    pub context: String,
    pub elements: Vec<String>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub implies: Vec<Vec<usize>>,
    pub not: Vec<usize>,
    pub excluded_middle_failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Body {
    Validate {
        status: &'static str,
        #[serde(flatten)]
        what: Validated,
    },
    Category {
        closed: bool,
        objects: Vec<ObjectEntry>,
        arrows: Vec<ArrowEntry>,
    },
    Valuate {
        queries: Vec<QueryResult>,
        func_check: Vec<FuncResult>,
    },
    KsSearch {
        objects: usize,
        arrows: usize,
        section_count: usize,
        obstruction_certified: bool,
        search_nodes: u64,
        sections: Vec<Vec<Assignment>>,
    },
    Heyting {
        algebras: Vec<AlgebraTable>,
    },
    Error {
        status: &'static str,
        error: ErrorInfo,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input: String,
    #[serde(flatten)]
    pub body: Body,
}

fn set(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(", "))
}

fn function(f: &[[String; 2]]) -> String {
    f.iter()
        .map(|[a, b]| format!("{a}↦{b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn table(out: &mut String, name: &str, rows: &[Vec<usize>]) {
    let width = rows.len().saturating_sub(1).to_string().len();
    let _ = writeln!(out, "  {name}:");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        let _ = writeln!(out, "    {}", cells.join(" "));
    }
}

impl Report {
    pub fn to_record(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let o = &mut out;
        let _ = writeln!(o, "{} {}", self.command, self.input);
        match &self.body {
            Body::Validate { what, .. } => match what {
                Validated::Scenario {
                    dim,
                    closed,
                    operators,
                    states,
                    queries,
                    objects,
                    arrows,
                } => {
                    let _ = writeln!(
                        o,
                        "valid scenario: DIM {dim}, {} operators, {} states, {queries} queries, closure {}",
                        operators.len(),
                        states.len(),
                        if *closed { "on" } else { "off" }
                    );
                    for op in operators {
                        let mult: Vec<String> =
                            op.multiplicities.iter().map(|m| m.to_string()).collect();
                        let _ = writeln!(
                            o,
                            "  {}  spectrum {}  multiplicities {}",
                            op.name,
                            set(&op.spectrum),
                            mult.join(", ")
                        );
                    }
                    let _ = writeln!(o, "operator category: {objects} objects, {arrows} arrows");
                }
                Validated::Topology { points, opens } => {
                    let _ = writeln!(
                        o,
                        "valid topology on {}: {} opens",
                        set(points),
                        opens.len()
                    );
                    for u in opens {
                        let _ = writeln!(o, "  {u}");
                    }
                }
                Validated::Poset { elements, arrows } => {
                    let _ = writeln!(o, "valid poset on {}: {arrows} arrows", set(elements));
                }
            },
            Body::Category {
                closed,
                objects,
                arrows,
            } => {
                let _ = writeln!(o, "closure {}", if *closed { "on" } else { "off" });
                let _ = writeln!(o, "objects ({}):", objects.len());
                for ob in objects {
                    let _ = writeln!(
                        o,
                        "  {}{}  spectrum {}  |Ω| = {}",
                        ob.name,
                        if ob.seed { "" } else { " (question closure)" },
                        set(&ob.spectrum),
                        ob.sieves
                    );
                }
                let _ = writeln!(o, "arrows ({}):", arrows.len());
                for a in arrows {
                    let _ = writeln!(
                        o,
                        "  {}: {} -> {}  f: {}",
                        a.name,
                        a.dom,
                        a.cod,
                        function(&a.function)
                    );
                }
            }
            Body::Valuate {
                queries,
                func_check,
            } => {
                for q in queries {
                    let _ = writeln!(o, "QUERY {} {} {}", q.state, q.operator, set(&q.delta));
                    let _ = writeln!(o, "  probability {}", q.probability);
                    let _ = writeln!(o, "  {} sieve, {} arrows", q.truth, q.sieve.len());
                    for m in &q.sieve {
                        let _ = writeln!(o, "    -> {}  f: {}", m.codomain, function(&m.function));
                    }
                }
                for f in func_check {
                    let _ = writeln!(
                        o,
                        "FUNC for state {}: {}",
                        f.state,
                        if f.holds { "holds" } else { "FAILS" }
                    );
                }
            }
            Body::KsSearch {
                objects,
                arrows,
                section_count,
                obstruction_certified,
                search_nodes,
                sections,
            } => {
                let _ = writeln!(o, "operator category: {objects} objects, {arrows} arrows");
                let _ = writeln!(o, "global sections of the dual presheaf: {section_count}");
                if *obstruction_certified {
                    let _ = writeln!(o, "KS obstruction certified");
                }
                let _ = writeln!(o, "search nodes: {search_nodes}");
                for (i, s) in sections.iter().enumerate() {
                    let vals: Vec<String> = s
                        .iter()
                        .map(|a| format!("{} = {}", a.operator, a.value))
                        .collect();
                    let _ = writeln!(o, "  section {}: {}", i + 1, vals.join(", "));
                }
            }
            Body::Heyting { algebras } => {
                for alg in algebras {
                    let _ = writeln!(o, "{} ({} elements):", alg.context, alg.elements.len());
                    for (i, e) in alg.elements.iter().enumerate() {
                        let _ = writeln!(o, "  {i}: {e}");
                    }
                    table(o, "meet", &alg.meet);
                    table(o, "join", &alg.join);
                    table(o, "implies", &alg.implies);
                    let not: Vec<String> = alg.not.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(o, "  not: {}", not.join(" "));
                    if alg.excluded_middle_failures.is_empty() {
                        let _ = writeln!(o, "  excluded middle holds everywhere");
                    } else {
                        for e in &alg.excluded_middle_failures {
                            let _ = writeln!(o, "  excluded middle fails: {e} ∨ ¬{e} ≠ top");
                        }
                    }
                }
            }
            Body::Error { error, .. } => {
                let mut pos = String::new();
                if let Some(l) = error.line {
                    let _ = write!(pos, "line {l}");
                    if let Some(c) = error.column {
                        let _ = write!(pos, ", column {c}");
                    }
                    pos.push_str(": ");
                }
                let _ = writeln!(o, "error ({}): {pos}{}", error.kind, error.message);
            }
        }
        out
    }
}
