//! Reversible circuits as DAGs of gate instances over single-use wires.
//!
//! Every wire must be driven exactly once (by a primary input, a constant
//! input or a gate output port) and consumed exactly once (by a gate input
//! port or by a circuit output slot). Fan-out is illegal; copying a signal
//! requires an explicit gate. The structure is permissive on purpose:
//! ill-formed circuits can be represented, and [`Circuit::validate`]
//! reports the violations as data rather than refusing construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bits;
use crate::gate::{CostVector, GateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WireId(u32);

impl WireId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstId(u32);

impl InstId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct GateInstance {
    name: String,
    gate: Arc<GateSpec>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
}

impl GateInstance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gate(&self) -> &Arc<GateSpec> {
        &self.gate
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }
}

/// Where a wire's value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    PrimaryInput(usize),
    Constant(usize),
    GateOutput(InstId, usize),
}

/// Where a wire's value goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sink {
    GateInput(InstId, usize),
    PrimaryOutput(usize),
    Garbage(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UndrivenWire {
        wire: String,
    },
    MultiplyDrivenWire {
        wire: String,
    },
    DanglingWire {
        wire: String,
    },
    FanOut {
        wire: String,
    },
    InputArity {
        instance: String,
        gate: String,
        expected: usize,
        got: usize,
    },
    OutputArity {
        instance: String,
        gate: String,
        expected: usize,
        got: usize,
    },
    Cycle {
        instances: Vec<String>,
    },
    LineConservation {
        input_lines: usize,
        output_lines: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UndrivenWire { wire } => write!(f, "undriven wire {wire}"),
            Violation::MultiplyDrivenWire { wire } => {
                write!(f, "wire {wire} driven more than once")
            }
            Violation::DanglingWire { wire } => {
                write!(f, "dangling wire {wire} (no sink, not designated as output)")
            }
            Violation::FanOut { wire } => write!(f, "fan-out at wire {wire}"),
            Violation::InputArity { instance, gate, expected, got } => {
                write!(f, "instance {instance}: {gate} expects {expected} inputs, got {got}")
            }
            Violation::OutputArity { instance, gate, expected, got } => {
                write!(f, "instance {instance}: {gate} expects {expected} outputs, got {got}")
            }
            Violation::Cycle { instances } => {
                write!(f, "cycle detected involving {}", instances.join(", "))
            }
            Violation::LineConservation { input_lines, output_lines } => write!(
                f,
                "line conservation violated: {input_lines} input lines vs {output_lines} output lines"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid circuit: {0}")]
    Invalid(ValidationReport),
    #[error("cycle detected")]
    Cycle,
    #[error("exhaustive simulation too large: {lines} lines exceed the cap of {cap}")]
    TooLarge { lines: usize, cap: usize },
}

/// Maximum number of lines processed exhaustively (2^20 ≈ 1M patterns).
pub const EXHAUSTIVE_CAP: usize = 20;

/// How a single wire's value is tampered with during simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireOverride {
    Flip,
    Force(bool),
}

impl WireOverride {
    pub fn apply(self, value: bool) -> bool {
        match self {
            WireOverride::Flip => !value,
            WireOverride::Force(v) => v,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    name: String,
    wire_names: Vec<String>,
    wire_lookup: HashMap<String, WireId>,
    instances: Vec<GateInstance>,
    primary_inputs: Vec<WireId>,
    constants: Vec<(WireId, bool)>,
    primary_outputs: Vec<WireId>,
    garbage: Vec<WireId>,
}

impl Circuit {
    pub fn new(name: impl Into<String>) -> Self {
        Circuit {
            name: name.into(),
            wire_names: Vec::new(),
            wire_lookup: HashMap::new(),
            instances: Vec::new(),
            primary_inputs: Vec::new(),
            constants: Vec::new(),
            primary_outputs: Vec::new(),
            garbage: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Creates a bare wire. The name must be unique within the circuit.
    pub fn add_wire(&mut self, name: impl Into<String>) -> WireId {
        let name = name.into();
        assert!(
            !self.wire_lookup.contains_key(&name),
            "duplicate wire name {name:?}"
        );
        let id = WireId(self.wire_names.len() as u32);
        self.wire_lookup.insert(name.clone(), id);
        self.wire_names.push(name);
        id
    }

    pub fn add_primary_input(&mut self, name: impl Into<String>) -> WireId {
        let id = self.add_wire(name);
        self.primary_inputs.push(id);
        id
    }

    pub fn add_constant(&mut self, name: impl Into<String>, value: bool) -> WireId {
        let id = self.add_wire(name);
        self.constants.push((id, value));
        id
    }

    pub fn add_instance(
        &mut self,
        name: impl Into<String>,
        gate: Arc<GateSpec>,
        inputs: &[WireId],
        outputs: &[WireId],
    ) -> InstId {
        let id = InstId(self.instances.len() as u32);
        self.instances.push(GateInstance {
            name: name.into(),
            gate,
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
        });
        id
    }

    pub fn mark_primary_output(&mut self, wire: WireId) {
        self.primary_outputs.push(wire);
    }

    pub fn mark_garbage(&mut self, wire: WireId) {
        self.garbage.push(wire);
    }

    pub fn wire_count(&self) -> usize {
        self.wire_names.len()
    }

    /// All wire ids in creation order.
    pub fn wire_ids(&self) -> impl Iterator<Item = WireId> + '_ {
        (0..self.wire_names.len() as u32).map(WireId)
    }

    pub fn wire_name(&self, wire: WireId) -> &str {
        &self.wire_names[wire.index()]
    }

    pub fn find_wire(&self, name: &str) -> Option<WireId> {
        self.wire_lookup.get(name).copied()
    }

    pub fn instances(&self) -> &[GateInstance] {
        &self.instances
    }

    pub fn instance(&self, id: InstId) -> &GateInstance {
        &self.instances[id.index()]
    }

    pub fn primary_inputs(&self) -> &[WireId] {
        &self.primary_inputs
    }

    pub fn constants(&self) -> &[(WireId, bool)] {
        &self.constants
    }

    pub fn primary_outputs(&self) -> &[WireId] {
        &self.primary_outputs
    }

    pub fn garbage_outputs(&self) -> &[WireId] {
        &self.garbage
    }

    /// Primary plus constant input lines.
    pub fn input_line_count(&self) -> usize {
        self.primary_inputs.len() + self.constants.len()
    }

    /// Primary plus garbage output lines.
    pub fn output_line_count(&self) -> usize {
        self.primary_outputs.len() + self.garbage.len()
    }

    /// Checks the structural legality rules: single origin and single sink
    /// per wire, matching gate arities, acyclicity, line conservation and
    /// total, disjoint output designation. Violations come back as data.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.collect_wiring_violations(&mut violations);
        if let Err(cycle) = self.try_topological_order() {
            violations.push(cycle);
        }
        let (inl, outl) = (self.input_line_count(), self.output_line_count());
        if inl != outl {
            violations.push(Violation::LineConservation {
                input_lines: inl,
                output_lines: outl,
            });
        }
        ValidationReport { violations }
    }

    fn collect_wiring_violations(&self, violations: &mut Vec<Violation>) {
        let n = self.wire_count();
        let mut origin_count = vec![0usize; n];
        let mut sink_count = vec![0usize; n];

        for &w in &self.primary_inputs {
            origin_count[w.index()] += 1;
        }
        for &(w, _) in &self.constants {
            origin_count[w.index()] += 1;
        }
        for inst in &self.instances {
            let arity = inst.gate.arity();
            if inst.inputs.len() != arity {
                violations.push(Violation::InputArity {
                    instance: inst.name.clone(),
                    gate: inst.gate.name().to_string(),
                    expected: arity,
                    got: inst.inputs.len(),
                });
            }
            if inst.outputs.len() != arity {
                violations.push(Violation::OutputArity {
                    instance: inst.name.clone(),
                    gate: inst.gate.name().to_string(),
                    expected: arity,
                    got: inst.outputs.len(),
                });
            }
            for &w in &inst.inputs {
                sink_count[w.index()] += 1;
            }
            for &w in &inst.outputs {
                origin_count[w.index()] += 1;
            }
        }
        for &w in &self.primary_outputs {
            sink_count[w.index()] += 1;
        }
        for &w in &self.garbage {
            sink_count[w.index()] += 1;
        }

        for i in 0..n {
            let name = self.wire_names[i].clone();
            match origin_count[i] {
                0 => violations.push(Violation::UndrivenWire { wire: name.clone() }),
                1 => {}
                _ => violations.push(Violation::MultiplyDrivenWire { wire: name.clone() }),
            }
            match sink_count[i] {
                0 => violations.push(Violation::DanglingWire { wire: name }),
                1 => {}
                _ => violations.push(Violation::FanOut { wire: name }),
            }
        }
    }

    fn try_topological_order(&self) -> Result<Vec<InstId>, Violation> {
        let n = self.instances.len();
        // producer of each wire, if any
        let mut producer: Vec<Option<InstId>> = vec![None; self.wire_count()];
        for (i, inst) in self.instances.iter().enumerate() {
            for &w in &inst.outputs {
                producer[w.index()] = Some(InstId(i as u32));
            }
        }
        let mut indegree = vec![0usize; n];
        let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, inst) in self.instances.iter().enumerate() {
            for &w in &inst.inputs {
                if let Some(p) = producer[w.index()] {
                    if p.index() != i {
                        dependents[p.index()].push(i);
                        indegree[i] += 1;
                    } else {
                        // a gate feeding itself is the tightest cycle
                        indegree[i] += 1;
                    }
                }
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        ready.sort_unstable_by(|a, b| b.cmp(a)); // pop smallest id first
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(InstId(i as u32));
            for &d in &dependents[i] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    let pos = ready.partition_point(|&r| r > d);
                    ready.insert(pos, d);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n)
                .filter(|&i| indegree[i] > 0)
                .map(|i| self.instances[i].name.clone())
                .collect();
            return Err(Violation::Cycle { instances: stuck });
        }
        Ok(order)
    }

    /// Gate instances in dependency order, every producer before its
    /// consumers; ties broken by instance id for determinism.
    pub fn topological_order(&self) -> Result<Vec<InstId>, CircuitError> {
        self.try_topological_order()
            .map_err(|_| CircuitError::Cycle)
    }

    /// Validates and precomputes the evaluation schedule.
    pub(crate) fn analyze(&self) -> Result<CircuitInfo, CircuitError> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(CircuitError::Invalid(report));
        }
        let topo = self.try_topological_order().expect("validated");
        Ok(CircuitInfo { topo })
    }

    /// All wires in a deterministic topological order: primary input wires,
    /// constant input wires, then each instance's outputs in firing order.
    pub fn wires_in_topo_order(&self) -> Result<Vec<WireId>, CircuitError> {
        let info = self.analyze()?;
        let mut out = Vec::with_capacity(self.wire_count());
        out.extend(self.primary_inputs.iter().copied());
        out.extend(self.constants.iter().map(|&(w, _)| w));
        for &inst in &info.topo {
            out.extend(self.instance(inst).outputs.iter().copied());
        }
        Ok(out)
    }

    /// Sum of the instance gates' cost vectors.
    pub fn total_cost(&self) -> CostVector {
        self.instances.iter().map(|i| i.gate.cost()).sum()
    }

    /// Flattens the circuit into a single composite gate over all of its
    /// input lines (primary inputs first, then constants, which are treated
    /// as free lines for this view). Output pattern order is primary
    /// outputs followed by garbage. The result of a valid circuit is always
    /// a bijection, gates being individually reversible.
    pub fn as_bijection(&self) -> Result<GateSpec, CircuitError> {
        let info = self.analyze()?;
        let lines = self.input_line_count();
        if lines > EXHAUSTIVE_CAP {
            return Err(CircuitError::TooLarge {
                lines,
                cap: EXHAUSTIVE_CAP,
            });
        }
        let mut table = Vec::with_capacity(1 << lines);
        for pattern in 0..(1usize << lines) {
            let line_values = bits::unpack(pattern, lines);
            let values = info.eval_lines(self, &line_values, &[]);
            let out_pattern = self.pack_output_lines(&values);
            table.push(out_pattern);
        }
        GateSpec::from_table(self.name.clone(), lines, table, self.total_cost())
            .map_err(|_| unreachable!("table is square by construction"))
    }

    pub(crate) fn pack_output_lines(&self, values: &[bool]) -> usize {
        let mut pattern = 0usize;
        for &w in self.primary_outputs.iter().chain(self.garbage.iter()) {
            pattern = (pattern << 1) | values[w.index()] as usize;
        }
        pattern
    }

    /// Structural equality up to storage order of instances: same wire
    /// roles in the same order, and identically named instances computing
    /// the same gate over identically named wires.
    pub fn structurally_equal(&self, other: &Circuit) -> bool {
        let names = |list: &[WireId], c: &Circuit| -> Vec<String> {
            list.iter().map(|&w| c.wire_name(w).to_string()).collect()
        };
        if self.name != other.name
            || names(&self.primary_inputs, self) != names(&other.primary_inputs, other)
            || names(&self.primary_outputs, self) != names(&other.primary_outputs, other)
            || names(&self.garbage, self) != names(&other.garbage, other)
        {
            return false;
        }
        let consts = |c: &Circuit| -> Vec<(String, bool)> {
            c.constants
                .iter()
                .map(|&(w, v)| (c.wire_name(w).to_string(), v))
                .collect()
        };
        if consts(self) != consts(other) {
            return false;
        }
        if self.instances.len() != other.instances.len() {
            return false;
        }
        let shape = |c: &Circuit| -> HashMap<String, (String, Vec<String>, Vec<String>)> {
            c.instances
                .iter()
                .map(|inst| {
                    (
                        inst.name.clone(),
                        (
                            inst.gate.name().to_string(),
                            names(&inst.inputs, c),
                            names(&inst.outputs, c),
                        ),
                    )
                })
                .collect()
        };
        shape(self) == shape(other)
    }
}

/// Validated evaluation schedule for a circuit.
#[derive(Debug, Clone)]
pub(crate) struct CircuitInfo {
    pub topo: Vec<InstId>,
}

impl CircuitInfo {
    /// Evaluates the circuit on explicit values for every input line
    /// (primary inputs first, then constant lines), optionally tampering
    /// with wires. Returns the value of every wire; a tampered wire stores
    /// its overridden value, which is what both downstream gates and
    /// circuit output slots observe.
    pub fn eval_lines(
        &self,
        circuit: &Circuit,
        line_values: &[bool],
        tamper: &[(WireId, WireOverride)],
    ) -> Vec<bool> {
        debug_assert_eq!(line_values.len(), circuit.input_line_count());
        let mut values = vec![false; circuit.wire_count()];
        let store = |values: &mut Vec<bool>, w: WireId, v: bool| {
            let mut v = v;
            for &(tw, o) in tamper {
                if tw == w {
                    v = o.apply(v);
                }
            }
            values[w.index()] = v;
        };
        let primaries = circuit.primary_inputs().len();
        for (i, &w) in circuit.primary_inputs().iter().enumerate() {
            store(&mut values, w, line_values[i]);
        }
        for (j, &(w, _)) in circuit.constants().iter().enumerate() {
            store(&mut values, w, line_values[primaries + j]);
        }
        for &id in &self.topo {
            let inst = circuit.instance(id);
            let mut pattern = 0usize;
            for &w in inst.inputs() {
                pattern = (pattern << 1) | values[w.index()] as usize;
            }
            let out = inst.gate().apply_pattern(pattern);
            let k = inst.gate().arity();
            for (port, &w) in inst.outputs().iter().enumerate() {
                let v = (out >> (k - 1 - port)) & 1 == 1;
                store(&mut values, w, v);
            }
        }
        values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Builtin;

    fn single_ig() -> Circuit {
        let mut c = Circuit::new("ig_wrap");
        let ins: Vec<WireId> = (0..4)
            .map(|i| c.add_primary_input(format!("x{i}")))
            .collect();
        let outs: Vec<WireId> = (0..4).map(|i| c.add_wire(format!("y{i}"))).collect();
        c.add_instance("g0", Builtin::Ig.spec(), &ins, &outs);
        for w in outs {
            c.mark_primary_output(w);
        }
        c
    }

    #[test]
    fn valid_single_gate_circuit() {
        let c = single_ig();
        assert!(c.validate().is_ok());
        assert_eq!(c.topological_order().unwrap().len(), 1);
    }

    #[test]
    fn fan_out_is_reported() {
        let mut c = Circuit::new("bad");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        let o1 = c.add_wire("o1");
        let o2 = c.add_wire("o2");
        let o3 = c.add_wire("o3");
        let o4 = c.add_wire("o4");
        // wire a feeds both FG instances
        c.add_instance("g1", Builtin::Fg.spec(), &[a, b], &[o1, o2]);
        c.add_instance("g2", Builtin::Fg.spec(), &[a, o2], &[o3, o4]);
        for w in [o1, o3, o4] {
            c.mark_primary_output(w);
        }
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FanOut { wire } if wire == "a")));
    }

    #[test]
    fn cycle_is_reported() {
        let mut c = Circuit::new("loop");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        let u = c.add_wire("u");
        let v = c.add_wire("v");
        let x = c.add_wire("x");
        let y = c.add_wire("y");
        // g1 consumes g2's output and vice versa
        c.add_instance("g1", Builtin::Fg.spec(), &[a, y], &[u, v]);
        c.add_instance("g2", Builtin::Fg.spec(), &[b, v], &[x, y]);
        c.mark_primary_output(u);
        c.mark_primary_output(x);
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Cycle { .. })));
        assert_eq!(c.topological_order(), Err(CircuitError::Cycle));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let mut c = Circuit::new("short");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        let c0 = c.add_constant("c0", false);
        let w1 = c.add_wire("w1");
        let w2 = c.add_wire("w2");
        let w3 = c.add_wire("w3");
        c.add_instance("g1", Builtin::Ig.spec(), &[a, b, c0], &[w1, w2, w3]);
        for w in [w1, w2, w3] {
            c.mark_primary_output(w);
        }
        let report = c.validate();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::InputArity {
                expected: 4,
                got: 3,
                ..
            }
        )));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::OutputArity {
                expected: 4,
                got: 3,
                ..
            }
        )));
    }

    #[test]
    fn dangling_and_undriven_wires_are_reported() {
        let mut c = Circuit::new("dangle");
        let a = c.add_primary_input("a");
        c.add_wire("floating");
        c.mark_primary_output(a);
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::UndrivenWire { wire } if wire == "floating")));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DanglingWire { wire } if wire == "floating")));
    }

    #[test]
    fn line_conservation_is_reported() {
        let mut c = Circuit::new("lossy");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        let o1 = c.add_wire("o1");
        let o2 = c.add_wire("o2");
        c.add_instance("g1", Builtin::Fg.spec(), &[a, b], &[o1, o2]);
        c.mark_primary_output(o1);
        // o2 never designated -> dangling, and 2 inputs vs 1 output line
        let report = c.validate();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::LineConservation {
                input_lines: 2,
                output_lines: 1
            }
        )));
    }

    #[test]
    fn bijection_of_wrapped_gate_equals_the_gate() {
        let c = single_ig();
        let composite = c.as_bijection().unwrap();
        let ig = Builtin::Ig.spec();
        assert_eq!(composite.arity(), 4);
        for x in 0..16 {
            assert_eq!(composite.apply_pattern(x), ig.apply_pattern(x));
        }
        assert!(composite.is_reversible());
        assert!(composite.is_parity_preserving());
    }

    #[test]
    fn pass_through_circuit_is_valid() {
        let mut c = Circuit::new("pass");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        c.mark_primary_output(a);
        c.mark_primary_output(b);
        assert!(c.validate().is_ok());
        let bij = c.as_bijection().unwrap();
        for x in 0..4 {
            assert_eq!(bij.apply_pattern(x), x);
        }
    }

    #[test]
    fn validate_is_pure_and_idempotent() {
        let c = single_ig();
        assert_eq!(c.validate(), c.validate());
    }

    #[test]
    fn topo_order_breaks_ties_by_instance_id() {
        let mut c = Circuit::new("pair");
        let a = c.add_primary_input("a");
        let b = c.add_primary_input("b");
        let x = c.add_primary_input("x");
        let y = c.add_primary_input("y");
        let o: Vec<WireId> = (0..4).map(|i| c.add_wire(format!("o{i}"))).collect();
        c.add_instance("g1", Builtin::Fg.spec(), &[a, b], &[o[0], o[1]]);
        c.add_instance("g2", Builtin::Fg.spec(), &[x, y], &[o[2], o[3]]);
        for w in o {
            c.mark_primary_output(w);
        }
        let order = c.topological_order().unwrap();
        assert_eq!(order, vec![InstId(0), InstId(1)]);
    }
}
