//! Circuit evaluation: single-vector traces, exhaustive tables, parity
//! audits and equivalence checks against multi-output truth specifications.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits;
use crate::circuit::{Circuit, CircuitError, EXHAUSTIVE_CAP};
use crate::gate::GateError;
use crate::rnl::is_identifier;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("input has {got} bits, circuit has {expected} primary inputs")]
    WidthMismatch { expected: usize, got: usize },
    #[error("output lines have {got} bits, circuit has {expected} output lines")]
    OutputWidthMismatch { expected: usize, got: usize },
    #[error("spec has {spec} inputs, circuit has {circuit} primary inputs")]
    SpecArityMismatch { spec: usize, circuit: usize },
    #[error("unbound output name: {0}")]
    UnboundOutput(String),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// Complete record of one evaluation: a value for every wire plus the
/// values grouped by role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// Value of every wire, indexed by wire id.
    pub wire_values: Vec<bool>,
    /// Primary input values in declaration order.
    pub inputs: Vec<bool>,
    /// Primary output values in declaration order.
    pub outputs: Vec<bool>,
    /// Garbage output values in declaration order.
    pub garbage: Vec<bool>,
}

impl Trace {
    fn from_values(circuit: &Circuit, values: Vec<bool>) -> Trace {
        let pick = |ws: &[crate::circuit::WireId]| -> Vec<bool> {
            ws.iter().map(|&w| values[w.index()]).collect()
        };
        Trace {
            inputs: pick(circuit.primary_inputs()),
            outputs: pick(circuit.primary_outputs()),
            garbage: pick(circuit.garbage_outputs()),
            wire_values: values,
        }
    }

    /// XOR over all input lines (primary inputs and constant wires).
    pub fn input_parity(&self, circuit: &Circuit) -> bool {
        let mut p = bits::parity(&self.inputs);
        for &(w, _) in circuit.constants() {
            p ^= self.wire_values[w.index()];
        }
        p
    }

    /// XOR over all output lines (primary outputs and garbage).
    pub fn output_parity(&self) -> bool {
        bits::parity(&self.outputs) ^ bits::parity(&self.garbage)
    }

    /// All output line values, primary outputs first, then garbage.
    pub fn output_lines(&self) -> Vec<bool> {
        self.outputs
            .iter()
            .chain(self.garbage.iter())
            .copied()
            .collect()
    }

    /// True iff every instance's recorded outputs equal its gate mapping
    /// applied to its recorded inputs.
    pub fn is_consistent(&self, circuit: &Circuit) -> bool {
        circuit.instances().iter().all(|inst| {
            let input: Vec<bool> = inst
                .inputs()
                .iter()
                .map(|&w| self.wire_values[w.index()])
                .collect();
            let expected = match inst.gate().apply(&input) {
                Ok(v) => v,
                Err(_) => return false,
            };
            inst.outputs()
                .iter()
                .map(|&w| self.wire_values[w.index()])
                .eq(expected)
        })
    }
}

fn line_values(circuit: &Circuit, inputs: &[bool]) -> Vec<bool> {
    inputs
        .iter()
        .copied()
        .chain(circuit.constants().iter().map(|&(_, v)| v))
        .collect()
}

/// Evaluates the circuit on one primary-input vector. Constants take their
/// declared values; gates fire in topological order.
pub fn evaluate(circuit: &Circuit, inputs: &[bool]) -> Result<Trace, SimError> {
    let info = circuit.analyze()?;
    if inputs.len() != circuit.primary_inputs().len() {
        return Err(SimError::WidthMismatch {
            expected: circuit.primary_inputs().len(),
            got: inputs.len(),
        });
    }
    let values = info.eval_lines(circuit, &line_values(circuit, inputs), &[]);
    Ok(Trace::from_values(circuit, values))
}

/// Traces for all `2^n` primary-input vectors in ascending binary order.
pub fn exhaustive_table(circuit: &Circuit) -> Result<Vec<Trace>, SimError> {
    let info = circuit.analyze()?;
    let n = circuit.primary_inputs().len();
    if n > EXHAUSTIVE_CAP {
        return Err(CircuitError::TooLarge {
            lines: n,
            cap: EXHAUSTIVE_CAP,
        }
        .into());
    }
    Ok((0..(1usize << n))
        .map(|pattern| {
            let inputs = bits::unpack(pattern, n);
            let values = info.eval_lines(circuit, &line_values(circuit, &inputs), &[]);
            Trace::from_values(circuit, values)
        })
        .collect())
}

/// Exhaustive table as TSV: primary inputs, primary outputs, garbage, then
/// input and output parity columns.
pub fn exhaustive_table_tsv(circuit: &Circuit) -> Result<String, SimError> {
    let traces = exhaustive_table(circuit)?;
    let mut out = String::new();
    let mut header: Vec<String> = Vec::new();
    for &w in circuit
        .primary_inputs()
        .iter()
        .chain(circuit.primary_outputs())
        .chain(circuit.garbage_outputs())
    {
        header.push(circuit.wire_name(w).to_string());
    }
    header.push("in_parity".into());
    header.push("out_parity".into());
    out.push_str(&header.join("\t"));
    out.push('\n');
    for t in &traces {
        let mut row: Vec<String> = Vec::new();
        for &b in t.inputs.iter().chain(&t.outputs).chain(&t.garbage) {
            row.push(if b { "1".into() } else { "0".to_string() });
        }
        row.push(if t.input_parity(circuit) {
            "1".into()
        } else {
            "0".to_string()
        });
        row.push(if t.output_parity() {
            "1".into()
        } else {
            "0".to_string()
        });
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

/// A named single-output Boolean function over unpacked input bits.
pub type NamedBoolFn<'a> = (&'a str, &'a dyn Fn(&[bool]) -> bool);

/// A multi-output Boolean function given as explicit value tables, used as
/// a simulation oracle and as input to the lower-bound calculations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthSpec {
    input_arity: usize,
    outputs: Vec<(String, Vec<bool>)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TruthSpecError {
    #[error("input arity must be between 1 and {cap}, got {got}", cap = EXHAUSTIVE_CAP)]
    BadArity { got: usize },
    #[error("output {name} has {got} entries, expected {expected}")]
    BadTableLength {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate output name {0}")]
    DuplicateOutput(String),
    #[error("spec has no outputs")]
    NoOutputs,
}

impl TruthSpec {
    pub fn new(
        input_arity: usize,
        outputs: Vec<(String, Vec<bool>)>,
    ) -> Result<TruthSpec, TruthSpecError> {
        if input_arity == 0 || input_arity > EXHAUSTIVE_CAP {
            return Err(TruthSpecError::BadArity { got: input_arity });
        }
        if outputs.is_empty() {
            return Err(TruthSpecError::NoOutputs);
        }
        let rows = 1usize << input_arity;
        let mut seen = std::collections::HashSet::new();
        for (name, table) in &outputs {
            if !seen.insert(name.clone()) {
                return Err(TruthSpecError::DuplicateOutput(name.clone()));
            }
            if table.len() != rows {
                return Err(TruthSpecError::BadTableLength {
                    name: name.clone(),
                    expected: rows,
                    got: table.len(),
                });
            }
        }
        Ok(TruthSpec {
            input_arity,
            outputs,
        })
    }

    /// Builds a spec by evaluating named functions on every input vector.
    pub fn from_fns(
        input_arity: usize,
        fns: &[NamedBoolFn<'_>],
    ) -> Result<TruthSpec, TruthSpecError> {
        let outputs = fns
            .iter()
            .map(|(name, f)| {
                let table = (0..(1usize << input_arity))
                    .map(|x| f(&bits::unpack(x, input_arity)))
                    .collect();
                (name.to_string(), table)
            })
            .collect();
        TruthSpec::new(input_arity, outputs)
    }

    pub fn input_arity(&self) -> usize {
        self.input_arity
    }

    pub fn outputs(&self) -> &[(String, Vec<bool>)] {
        &self.outputs
    }

    pub fn output(&self, name: &str) -> Option<&[bool]> {
        self.outputs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.as_slice())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct TruthSpecParseError {
    pub line: usize,
    pub msg: String,
}

impl TruthSpec {
    /// Parses the plain-text spec format:
    ///
    /// ```text
    /// inputs 3
    /// output s 01101001
    /// output cout 00010111
    /// ```
    ///
    /// `#` starts a comment; the value string lists the output for every
    /// input vector in ascending binary order (first input = MSB).
    pub fn parse(text: &str) -> Result<TruthSpec, TruthSpecParseError> {
        let err = |line: usize, msg: String| TruthSpecParseError { line, msg };
        let mut arity: Option<usize> = None;
        let mut outputs: Vec<(String, Vec<bool>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw
                .split('#')
                .next()
                .unwrap_or("")
                .trim_end_matches('\r')
                .trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("inputs") => {
                    if arity.is_some() {
                        return Err(err(line_no, "duplicate inputs declaration".into()));
                    }
                    let n: usize = tokens
                        .next()
                        .ok_or_else(|| err(line_no, "inputs: missing count".into()))?
                        .parse()
                        .map_err(|_| err(line_no, "inputs: count must be a number".into()))?;
                    if n == 0 || n > EXHAUSTIVE_CAP {
                        return Err(err(
                            line_no,
                            format!(
                                "inputs: arity must be between 1 and {EXHAUSTIVE_CAP}, got {n}"
                            ),
                        ));
                    }
                    if tokens.next().is_some() {
                        return Err(err(line_no, "inputs: trailing tokens".into()));
                    }
                    arity = Some(n);
                }
                Some("output") => {
                    let n = arity
                        .ok_or_else(|| err(line_no, "output before inputs declaration".into()))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| err(line_no, "output: missing name".into()))?;
                    if !is_identifier(name) {
                        return Err(err(line_no, format!("output: invalid name {name:?}")));
                    }
                    if outputs.iter().any(|(existing, _)| existing == name) {
                        return Err(err(line_no, format!("duplicate output name {name}")));
                    }
                    let value = tokens
                        .next()
                        .ok_or_else(|| err(line_no, "output: missing value string".into()))?;
                    if tokens.next().is_some() {
                        return Err(err(line_no, "output: trailing tokens".into()));
                    }
                    let table = bits::parse_bitstring_exact(value, 1usize << n)
                        .map_err(|e| err(line_no, format!("output {name}: {e}")))?;
                    outputs.push((name.to_string(), table));
                }
                Some(other) => {
                    return Err(err(line_no, format!("unknown declaration {other:?}")));
                }
                None => unreachable!(),
            }
        }
        let arity = arity.ok_or_else(|| err(0, "missing inputs declaration".into()))?;
        TruthSpec::new(arity, outputs).map_err(|e| err(0, e.to_string()))
    }

    /// Canonical text rendering of the spec,. Parsing it back yields an
    /// equal spec.
    pub fn serialize(&self) -> String {
        let mut out = format!("inputs {}\n", self.input_arity);
        for (name, table) in &self.outputs {
            out.push_str(&format!("output {} {}\n", name, bits::format_bits(table)));
        }
        out
    }
}

/// Result of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivOutcome {
    pub equivalent: bool,
    /// Smallest failing primary-input vector, in ascending binary order.
    pub counterexample: Option<Vec<bool>>,
}

/// Checks every bound spec output against the circuit on all input
/// vectors. `binding` maps spec output names to circuit primary-output
/// names; every spec output must be bound to an existing primary output.
pub fn check_equivalence(
    circuit: &Circuit,
    spec: &TruthSpec,
    binding: &HashMap<String, String>,
) -> Result<EquivOutcome, SimError> {
    let info = circuit.analyze()?;
    let n = circuit.primary_inputs().len();
    if spec.input_arity() != n {
        return Err(SimError::SpecArityMismatch {
            spec: spec.input_arity(),
            circuit: n,
        });
    }
    // resolve each spec output to a primary-output position
    let mut columns: Vec<(usize, &[bool])> = Vec::new();
    for (name, table) in spec.outputs() {
        let target = binding
            .get(name)
            .ok_or_else(|| SimError::UnboundOutput(name.clone()))?;
        let pos = circuit
            .primary_outputs()
            .iter()
            .position(|&w| circuit.wire_name(w) == target)
            .ok_or_else(|| SimError::UnboundOutput(target.clone()))?;
        columns.push((pos, table));
    }
    for pattern in 0..(1usize << n) {
        let inputs = bits::unpack(pattern, n);
        let values = info.eval_lines(circuit, &line_values(circuit, &inputs), &[]);
        for &(pos, table) in &columns {
            let got = values[circuit.primary_outputs()[pos].index()];
            if got != table[pattern] {
                return Ok(EquivOutcome {
                    equivalent: false,
                    counterexample: Some(inputs),
                });
            }
        }
    }
    Ok(EquivOutcome {
        equivalent: true,
        counterexample: None,
    })
}

/// Parity audit report over all primary-input vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityAudit {
    pub circuit_parity_preserving: bool,
    /// Primary-input vectors whose output-line parity differs from the
    /// input-line parity, in ascending order.
    pub offending_vectors: Vec<Vec<bool>>,
}

/// Compares the XOR of all input lines (constants at their declared
/// values) with the XOR of all output lines, for every input vector.
pub fn parity_audit(circuit: &Circuit) -> Result<ParityAudit, SimError> {
    let info = circuit.analyze()?;
    let n = circuit.primary_inputs().len();
    if n > EXHAUSTIVE_CAP {
        return Err(CircuitError::TooLarge {
            lines: n,
            cap: EXHAUSTIVE_CAP,
        }
        .into());
    }
    let mut offending = Vec::new();
    for pattern in 0..(1usize << n) {
        let inputs = bits::unpack(pattern, n);
        let lines = line_values(circuit, &inputs);
        let values = info.eval_lines(circuit, &lines, &[]);
        let in_parity = bits::parity(&lines);
        let out_parity = circuit
            .primary_outputs()
            .iter()
            .chain(circuit.garbage_outputs())
            .fold(false, |acc, &w| acc ^ values[w.index()]);
        if in_parity != out_parity {
            offending.push(inputs);
        }
    }
    Ok(ParityAudit {
        circuit_parity_preserving: offending.is_empty(),
        offending_vectors: offending,
    })
}

/// Recovers the full input-line assignment (primary inputs first, then
/// constants) from the output-line assignment alone, by applying the
/// inverted gates in reverse topological order.
pub fn recover_inputs(circuit: &Circuit, output_lines: &[bool]) -> Result<Vec<bool>, SimError> {
    let info = circuit.analyze()?;
    if output_lines.len() != circuit.output_line_count() {
        return Err(SimError::OutputWidthMismatch {
            expected: circuit.output_line_count(),
            got: output_lines.len(),
        });
    }
    let mut values: Vec<Option<bool>> = vec![None; circuit.wire_count()];
    for (&w, &v) in circuit
        .primary_outputs()
        .iter()
        .chain(circuit.garbage_outputs())
        .zip(output_lines)
    {
        values[w.index()] = Some(v);
    }
    for &id in info.topo.iter().rev() {
        let inst = circuit.instance(id);
        let inverse = inst.gate().inverse()?;
        let mut pattern = 0usize;
        for &w in inst.outputs() {
            pattern = (pattern << 1)
                | values[w.index()].expect("output of a later-inverted gate is known") as usize;
        }
        let recovered = inverse.apply_pattern(pattern);
        let k = inst.gate().arity();
        for (port, &w) in inst.inputs().iter().enumerate() {
            values[w.index()] = Some((recovered >> (k - 1 - port)) & 1 == 1);
        }
    }
    Ok(circuit
        .primary_inputs()
        .iter()
        .chain(circuit.constants().iter().map(|(w, _)| w))
        .map(|&w| values[w.index()].expect("input line reached by inversion"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::gate::Builtin;

    fn fa_binding() -> HashMap<String, String> {
        [("s", "s"), ("cout", "cout")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn full_adder_single_vectors() {
        let fa = builders::full_adder();
        let t = evaluate(&fa, &[false, false, true]).unwrap();
        assert_eq!(t.outputs, vec![true, false], "0+0+1 = sum 1 carry 0");
        let t = evaluate(&fa, &[false, false, false]).unwrap();
        assert_eq!(t.outputs, vec![false, false]);
        let t = evaluate(&fa, &[true, true, true]).unwrap();
        assert_eq!(t.outputs, vec![true, true]);
        assert!(t.garbage[0]);
        assert!(t.garbage[1]);
        assert!(t.is_consistent(&fa));
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let fa = builders::full_adder();
        assert_eq!(
            evaluate(&fa, &[true, false]),
            Err(SimError::WidthMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn exhaustive_table_shape_and_order() {
        let fa = builders::full_adder();
        let traces = exhaustive_table(&fa).unwrap();
        assert_eq!(traces.len(), 8);
        for (i, t) in traces.iter().enumerate() {
            assert_eq!(bits::pack(&t.inputs), i);
            assert!(t.is_consistent(&fa));
        }
    }

    #[test]
    fn evaluate_is_deterministic() {
        let fa = builders::full_adder();
        for pattern in 0..8 {
            let inputs = bits::unpack(pattern, 3);
            assert_eq!(evaluate(&fa, &inputs), evaluate(&fa, &inputs));
        }
    }

    #[test]
    fn equivalence_accepts_the_true_spec() {
        let fa = builders::full_adder();
        let spec = builders::full_adder_spec();
        let out = check_equivalence(&fa, &spec, &fa_binding()).unwrap();
        assert!(out.equivalent);
        assert_eq!(out.counterexample, None);
    }

    #[test]
    fn equivalence_reports_smallest_counterexample() {
        let fa = builders::full_adder();
        // wrong carry: cout = a OR b
        let spec = TruthSpec::from_fns(
            3,
            &[
                ("s", &|v: &[bool]| v[0] ^ v[1] ^ v[2]),
                ("cout", &|v: &[bool]| v[0] | v[1]),
            ],
        )
        .unwrap();
        let out = check_equivalence(&fa, &spec, &fa_binding()).unwrap();
        assert!(!out.equivalent);
        assert_eq!(out.counterexample, Some(vec![false, true, false]));
    }

    #[test]
    fn equivalence_against_own_table_is_true() {
        let fa = builders::full_adder();
        let traces = exhaustive_table(&fa).unwrap();
        let spec = TruthSpec::new(
            3,
            vec![
                (
                    "s".to_string(),
                    traces.iter().map(|t| t.outputs[0]).collect(),
                ),
                (
                    "cout".to_string(),
                    traces.iter().map(|t| t.outputs[1]).collect(),
                ),
            ],
        )
        .unwrap();
        let out = check_equivalence(&fa, &spec, &fa_binding()).unwrap();
        assert!(out.equivalent);
    }

    #[test]
    fn unbound_output_is_an_error() {
        let fa = builders::full_adder();
        let spec = builders::full_adder_spec();
        let out = check_equivalence(&fa, &spec, &HashMap::new());
        assert!(matches!(out, Err(SimError::UnboundOutput(_))));
    }

    #[test]
    fn parity_audit_verdicts() {
        assert!(
            parity_audit(&builders::full_adder())
                .unwrap()
                .circuit_parity_preserving
        );

        let pg = builders::single_gate(&Builtin::Pg.spec());
        let audit = parity_audit(&pg).unwrap();
        assert!(!audit.circuit_parity_preserving);
        assert_eq!(audit.offending_vectors[0], vec![true, false, false]);

        // pass-through circuit preserves parity trivially
        let mut pass = Circuit::new("pass");
        let a = pass.add_primary_input("a");
        pass.mark_primary_output(a);
        assert!(parity_audit(&pass).unwrap().circuit_parity_preserving);
    }

    #[test]
    fn inverse_recovery_round_trips_builders() {
        for circuit in [
            builders::full_adder(),
            builders::parity_preserving_toffoli(),
            builders::ripple_carry_adder(2).unwrap(),
        ] {
            let n = circuit.primary_inputs().len();
            for pattern in 0..(1usize << n) {
                let inputs = bits::unpack(pattern, n);
                let trace = evaluate(&circuit, &inputs).unwrap();
                let recovered = recover_inputs(&circuit, &trace.output_lines()).unwrap();
                let expected: Vec<bool> = inputs
                    .iter()
                    .copied()
                    .chain(circuit.constants().iter().map(|&(_, v)| v))
                    .collect();
                assert_eq!(recovered, expected, "{} {:?}", circuit.name(), inputs);
            }
        }
    }

    #[test]
    fn tsv_has_parity_columns() {
        let fa = builders::full_adder();
        let tsv = exhaustive_table_tsv(&fa).unwrap();
        let mut lines = tsv.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            "a\tb\tcin\ts\tcout\tg0\tg1\tg2\tin_parity\tout_parity"
        );
        for row in lines {
            let cols: Vec<&str> = row.split('\t').collect();
            assert_eq!(cols.len(), 10);
            assert_eq!(cols[8], cols[9], "parity must match on every row");
        }
    }

    #[test]
    fn truth_spec_parse_round_trip() {
        let spec = builders::full_adder_spec();
        let text = spec.serialize();
        assert_eq!(TruthSpec::parse(&text).unwrap(), spec);
        assert!(text.starts_with("inputs 3\n"));
    }

    #[test]
    fn truth_spec_parse_errors_carry_line_numbers() {
        let e = TruthSpec::parse("inputs 2\noutput y 010\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = TruthSpec::parse("output y 01\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = TruthSpec::parse("inputs 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = TruthSpec::parse("inputs 2\nwibble\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(TruthSpec::parse("").is_err());
    }

    #[test]
    fn truth_spec_validation() {
        assert!(matches!(
            TruthSpec::new(2, vec![("y".into(), vec![false; 3])]),
            Err(TruthSpecError::BadTableLength { .. })
        ));
        assert!(matches!(
            TruthSpec::new(
                1,
                vec![("y".into(), vec![false; 2]), ("y".into(), vec![true; 2])]
            ),
            Err(TruthSpecError::DuplicateOutput(_))
        ));
        assert!(matches!(
            TruthSpec::new(2, vec![]),
            Err(TruthSpecError::NoOutputs)
        ));
    }
}
