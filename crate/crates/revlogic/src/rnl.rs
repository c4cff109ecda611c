//! The `.rnl` circuit interchange format: a line-oriented keyword grammar
//! with one declaration per line.
//!
//! ```text
//! circuit full_adder
//! inputs a b cin
//! constants c0=0 c1=0
//! gate ig1 IG a b c0 c1 -> g0 w0 w1 w2
//! gate ig2 IG cin w0 w1 w2 -> g1 s cout g2
//! outputs s cout
//! garbage g0 g1 g2
//! ```
//!
//! Declarations appear in that order; `constants` and `garbage` are
//! optional. `#` starts a comment. Wires must be defined before use and
//! every wire is consumed exactly once, so a successfully parsed document
//! always yields a circuit that passes validation. Files are UTF-8 with
//! LF line endings canonical; CR is tolerated on input.

use std::collections::HashSet;
use std::fmt;

use crate::circuit::{Circuit, ValidationReport, WireId};
use crate::gate::{builtin_gate, Builtin};

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadIdentifier(String),
    BadConstant(String),
    UnknownGate(String),
    InputArity {
        gate: String,
        expected: usize,
        got: usize,
    },
    OutputArity {
        gate: String,
        expected: usize,
        got: usize,
    },
    WireRedefined(String),
    InstanceRedefined(String),
    FanOut(String),
    UndeclaredWire(String),
    UndesignatedWire(String),
    DuplicateDeclaration(&'static str),
    MissingDeclaration(&'static str),
    MisplacedDeclaration {
        keyword: String,
        expected: &'static str,
    },
    MissingArrow,
    UnexpectedArrow,
    MissingToken(&'static str),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            BadIdentifier(t) => write!(f, "invalid identifier {t:?}"),
            BadConstant(t) => write!(f, "invalid constant assignment {t:?} (expected <id>=<0|1>)"),
            UnknownGate(n) => write!(f, "unknown gate name {n}"),
            InputArity {
                gate,
                expected,
                got,
            } => {
                write!(f, "{gate} expects {expected} inputs, got {got}")
            }
            OutputArity {
                gate,
                expected,
                got,
            } => {
                write!(f, "{gate} expects {expected} outputs, got {got}")
            }
            WireRedefined(w) => write!(f, "wire {w} redefined"),
            InstanceRedefined(i) => write!(f, "instance {i} redefined"),
            FanOut(w) => write!(f, "fan-out at {w}"),
            UndeclaredWire(w) => write!(f, "undeclared wire {w}"),
            UndesignatedWire(w) => {
                write!(
                    f,
                    "wire {w} is neither consumed nor listed in outputs/garbage"
                )
            }
            DuplicateDeclaration(k) => write!(f, "duplicate {k} declaration"),
            MissingDeclaration(k) => write!(f, "missing {k} declaration"),
            MisplacedDeclaration { keyword, expected } => {
                write!(
                    f,
                    "unexpected {keyword:?} declaration (expected {expected})"
                )
            }
            MissingArrow => write!(f, "gate declaration is missing the -> separator"),
            UnexpectedArrow => write!(f, "unexpected -> token"),
            MissingToken(what) => write!(f, "missing {what}"),
        }
    }
}

/// A parse failure, located by 1-based line (and column where the failing
/// token is known).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: Option<usize>,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line,
            column: Some(column),
            kind,
        }
    }

    fn on(line: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line,
            column: None,
            kind,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(col) => write!(f, "line {}, col {}: {}", self.line, col, self.kind),
            None => write!(f, "line {}: {}", self.line, self.kind),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// `garbage` was omitted; these wires were designated automatically.
    AutoGarbage { wires: Vec<String> },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::AutoGarbage { wires } => write!(
                f,
                "no garbage declaration; auto-designated: {}",
                wires.join(" ")
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub circuit: Circuit,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SerializeError {
    #[error("refusing to serialize invalid circuit: {0}")]
    Invalid(ValidationReport),
    #[error("name {0:?} is not a valid identifier")]
    BadName(String),
    #[error("gate {0} is not a builtin; the text format cannot express it")]
    NonBuiltinGate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Header,
    Inputs,
    Gates,
    Outputs,
    Garbage,
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut tokens = Vec::new();
    let mut col = 0usize;
    let mut start: Option<(usize, usize)> = None;
    for (i, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                tokens.push((c, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, c)) = start {
        tokens.push((c, &line[s..]));
    }
    tokens
}

struct Parser {
    circuit: Circuit,
    consumed: HashSet<WireId>,
    instances: HashSet<String>,
    section: Section,
    has_constants: bool,
    has_garbage: bool,
}

impl Parser {
    fn ident(&self, line: usize, col: usize, token: &str) -> Result<String, ParseError> {
        if is_identifier(token) {
            Ok(token.to_string())
        } else {
            Err(ParseError::at(
                line,
                col,
                ParseErrorKind::BadIdentifier(token.to_string()),
            ))
        }
    }

    fn define_wire(&mut self, line: usize, col: usize, token: &str) -> Result<WireId, ParseError> {
        let name = self.ident(line, col, token)?;
        if self.circuit.find_wire(&name).is_some() {
            return Err(ParseError::at(
                line,
                col,
                ParseErrorKind::WireRedefined(name),
            ));
        }
        Ok(self.circuit.add_wire(name))
    }

    fn consume_wire(&mut self, line: usize, col: usize, token: &str) -> Result<WireId, ParseError> {
        let name = self.ident(line, col, token)?;
        let id = self.circuit.find_wire(&name).ok_or_else(|| {
            ParseError::at(line, col, ParseErrorKind::UndeclaredWire(name.clone()))
        })?;
        if !self.consumed.insert(id) {
            return Err(ParseError::at(line, col, ParseErrorKind::FanOut(name)));
        }
        Ok(id)
    }

    fn expect_section(
        &self,
        line: usize,
        keyword: &str,
        allowed: &[Section],
        expected: &'static str,
    ) -> Result<(), ParseError> {
        if allowed.contains(&self.section) {
            Ok(())
        } else {
            Err(ParseError::on(
                line,
                ParseErrorKind::MisplacedDeclaration {
                    keyword: keyword.to_string(),
                    expected,
                },
            ))
        }
    }
}

/// Parses an `.rnl` document. On success the circuit passes validation;
/// every failure names the offending line.
pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        circuit: Circuit::new("unnamed"),
        consumed: HashSet::new(),
        instances: HashSet::new(),
        section: Section::Start,
        has_constants: false,
        has_garbage: false,
    };
    let mut warnings = Vec::new();
    let mut last_line = 0usize;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let stripped = raw_line
            .split('#')
            .next()
            .unwrap_or("")
            .trim_end_matches('\r');
        let tokens = tokenize(stripped);
        if tokens.is_empty() {
            continue;
        }
        let (kw_col, keyword) = tokens[0];
        let rest = &tokens[1..];
        match keyword {
            "circuit" => {
                if p.section != Section::Start {
                    return Err(ParseError::on(
                        line_no,
                        ParseErrorKind::DuplicateDeclaration("circuit"),
                    ));
                }
                let &(col, name_tok) = rest.first().ok_or_else(|| {
                    ParseError::on(line_no, ParseErrorKind::MissingToken("circuit name"))
                })?;
                let name = p.ident(line_no, col, name_tok)?;
                if let Some(&(col, tok)) = rest.get(1) {
                    return Err(ParseError::at(
                        line_no,
                        col,
                        ParseErrorKind::BadIdentifier(tok.to_string()),
                    ));
                }
                p.circuit = Circuit::new(name);
                p.section = Section::Header;
            }
            "inputs" => {
                p.expect_section(line_no, keyword, &[Section::Header], "circuit header first")?;
                for &(col, tok) in rest {
                    let name = p.ident(line_no, col, tok)?;
                    if p.circuit.find_wire(&name).is_some() {
                        return Err(ParseError::at(
                            line_no,
                            col,
                            ParseErrorKind::WireRedefined(name),
                        ));
                    }
                    p.circuit.add_primary_input(name);
                }
                p.section = Section::Inputs;
            }
            "constants" => {
                p.expect_section(line_no, keyword, &[Section::Inputs], "inputs first")?;
                if p.has_constants {
                    return Err(ParseError::on(
                        line_no,
                        ParseErrorKind::DuplicateDeclaration("constants"),
                    ));
                }
                p.has_constants = true;
                for &(col, tok) in rest {
                    let (name, value) = match tok.split_once('=') {
                        Some((n, "0")) => (n, false),
                        Some((n, "1")) => (n, true),
                        _ => {
                            return Err(ParseError::at(
                                line_no,
                                col,
                                ParseErrorKind::BadConstant(tok.to_string()),
                            ))
                        }
                    };
                    let name = p.ident(line_no, col, name)?;
                    if p.circuit.find_wire(&name).is_some() {
                        return Err(ParseError::at(
                            line_no,
                            col,
                            ParseErrorKind::WireRedefined(name),
                        ));
                    }
                    p.circuit.add_constant(name, value);
                }
            }
            "gate" => {
                p.expect_section(
                    line_no,
                    keyword,
                    &[Section::Inputs, Section::Gates],
                    "inputs (and optional constants) first",
                )?;
                p.section = Section::Gates;
                let &(col, inst_tok) = rest.first().ok_or_else(|| {
                    ParseError::on(line_no, ParseErrorKind::MissingToken("instance name"))
                })?;
                let inst_name = p.ident(line_no, col, inst_tok)?;
                if !p.instances.insert(inst_name.clone()) {
                    return Err(ParseError::at(
                        line_no,
                        col,
                        ParseErrorKind::InstanceRedefined(inst_name),
                    ));
                }
                let &(gate_col, gate_tok) = rest.get(1).ok_or_else(|| {
                    ParseError::on(line_no, ParseErrorKind::MissingToken("gate name"))
                })?;
                let gate = builtin_gate(gate_tok).map_err(|_| {
                    ParseError::at(
                        line_no,
                        gate_col,
                        ParseErrorKind::UnknownGate(gate_tok.to_string()),
                    )
                })?;
                let ports = &rest[2..];
                let arrow = ports
                    .iter()
                    .position(|&(_, t)| t == "->")
                    .ok_or_else(|| ParseError::on(line_no, ParseErrorKind::MissingArrow))?;
                if let Some(&(col, _)) = ports[arrow + 1..].iter().find(|&&(_, t)| t == "->") {
                    return Err(ParseError::at(
                        line_no,
                        col,
                        ParseErrorKind::UnexpectedArrow,
                    ));
                }
                let (in_tokens, out_tokens) = (&ports[..arrow], &ports[arrow + 1..]);
                let arity = gate.arity();
                if in_tokens.len() != arity {
                    return Err(ParseError::on(
                        line_no,
                        ParseErrorKind::InputArity {
                            gate: gate.name().to_string(),
                            expected: arity,
                            got: in_tokens.len(),
                        },
                    ));
                }
                if out_tokens.len() != arity {
                    return Err(ParseError::on(
                        line_no,
                        ParseErrorKind::OutputArity {
                            gate: gate.name().to_string(),
                            expected: arity,
                            got: out_tokens.len(),
                        },
                    ));
                }
                let mut inputs = Vec::with_capacity(arity);
                for &(col, tok) in in_tokens {
                    inputs.push(p.consume_wire(line_no, col, tok)?);
                }
                let mut outputs = Vec::with_capacity(arity);
                for &(col, tok) in out_tokens {
                    outputs.push(p.define_wire(line_no, col, tok)?);
                }
                p.circuit.add_instance(inst_name, gate, &inputs, &outputs);
            }
            "outputs" => {
                p.expect_section(
                    line_no,
                    keyword,
                    &[Section::Inputs, Section::Gates],
                    "declarations before outputs",
                )?;
                for &(col, tok) in rest {
                    let id = p.consume_wire(line_no, col, tok)?;
                    p.circuit.mark_primary_output(id);
                }
                p.section = Section::Outputs;
            }
            "garbage" => {
                p.expect_section(line_no, keyword, &[Section::Outputs], "outputs first")?;
                p.has_garbage = true;
                for &(col, tok) in rest {
                    let id = p.consume_wire(line_no, col, tok)?;
                    p.circuit.mark_garbage(id);
                }
                p.section = Section::Garbage;
            }
            other => {
                return Err(ParseError::at(
                    line_no,
                    kw_col,
                    ParseErrorKind::MisplacedDeclaration {
                        keyword: other.to_string(),
                        expected: "circuit/inputs/constants/gate/outputs/garbage",
                    },
                ));
            }
        }
    }

    let eof = last_line.max(1);
    match p.section {
        Section::Start => {
            return Err(ParseError::on(
                eof,
                ParseErrorKind::MissingDeclaration("circuit"),
            ))
        }
        Section::Header => {
            return Err(ParseError::on(
                eof,
                ParseErrorKind::MissingDeclaration("inputs"),
            ))
        }
        Section::Inputs | Section::Gates => {
            return Err(ParseError::on(
                eof,
                ParseErrorKind::MissingDeclaration("outputs"),
            ))
        }
        Section::Outputs | Section::Garbage => {}
    }

    // every wire must end up consumed: auto-designate leftovers as garbage
    // when the garbage declaration was omitted, reject them otherwise
    let leftovers: Vec<WireId> = p
        .circuit
        .wire_ids()
        .filter(|id| !p.consumed.contains(id))
        .collect();
    if !leftovers.is_empty() {
        if p.has_garbage {
            let name = p.circuit.wire_name(leftovers[0]).to_string();
            return Err(ParseError::on(eof, ParseErrorKind::UndesignatedWire(name)));
        }
        let names: Vec<String> = leftovers
            .iter()
            .map(|&w| p.circuit.wire_name(w).to_string())
            .collect();
        for w in leftovers {
            p.circuit.mark_garbage(w);
        }
        warnings.push(Warning::AutoGarbage { wires: names });
    }

    Ok(Parsed {
        circuit: p.circuit,
        warnings,
    })
}

/// Serializes a valid circuit into canonical `.rnl` text: declarations in
/// grammar order, gates topologically sorted with ties broken by instance
/// id, single spaces, LF line endings. Parsing the output reproduces the
/// circuit structurally, and serializing it again is byte-identical.
pub fn serialize(circuit: &Circuit) -> Result<String, SerializeError> {
    let report = circuit.validate();
    if !report.is_ok() {
        return Err(SerializeError::Invalid(report));
    }
    let name_of = |w: WireId| -> Result<&str, SerializeError> {
        let n = circuit.wire_name(w);
        if is_identifier(n) {
            Ok(n)
        } else {
            Err(SerializeError::BadName(n.to_string()))
        }
    };
    if !is_identifier(circuit.name()) {
        return Err(SerializeError::BadName(circuit.name().to_string()));
    }

    let mut out = String::new();
    out.push_str("circuit ");
    out.push_str(circuit.name());
    out.push('\n');

    out.push_str("inputs");
    for &w in circuit.primary_inputs() {
        out.push(' ');
        out.push_str(name_of(w)?);
    }
    out.push('\n');

    if !circuit.constants().is_empty() {
        out.push_str("constants");
        for &(w, v) in circuit.constants() {
            out.push(' ');
            out.push_str(name_of(w)?);
            out.push('=');
            out.push(if v { '1' } else { '0' });
        }
        out.push('\n');
    }

    let topo = circuit
        .topological_order()
        .expect("validated circuit is acyclic");
    for id in topo {
        let inst = circuit.instance(id);
        if !is_identifier(inst.name()) {
            return Err(SerializeError::BadName(inst.name().to_string()));
        }
        if Builtin::from_name(inst.gate().name()).is_none() {
            return Err(SerializeError::NonBuiltinGate(
                inst.gate().name().to_string(),
            ));
        }
        out.push_str("gate ");
        out.push_str(inst.name());
        out.push(' ');
        out.push_str(inst.gate().name());
        for &w in inst.inputs() {
            out.push(' ');
            out.push_str(name_of(w)?);
        }
        out.push_str(" ->");
        for &w in inst.outputs() {
            out.push(' ');
            out.push_str(name_of(w)?);
        }
        out.push('\n');
    }

    out.push_str("outputs");
    for &w in circuit.primary_outputs() {
        out.push(' ');
        out.push_str(name_of(w)?);
    }
    out.push('\n');

    if !circuit.garbage_outputs().is_empty() {
        out.push_str("garbage");
        for &w in circuit.garbage_outputs() {
            out.push(' ');
            out.push_str(name_of(w)?);
        }
        out.push('\n');
    }

    Ok(out)
}
