//! Programmatic constructors for the toolkit's reference circuits: the
//! two-IG fault-tolerant full adder, the N-bit ripple-carry adder built
//! from it, the FRG+F2G parity-preserving Toffoli circuit, and the
//! IG-only realizations of the basic Boolean functions.
//!
//! Builders emit canonical wire names so the serialized `.rnl` files are
//! stable and diffable: `a`/`b`/`cin` for primary inputs, `c<k>` for
//! constants, `w<k>` for internal wires, `g<k>` for garbage.

use thiserror::Error;

use crate::circuit::{Circuit, WireId};
use crate::gate::{Builtin, GateSpec};
use crate::sim::TruthSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("ripple-carry width must be at least 1")]
    BadWidth,
}

/// Fault-tolerant full adder over two IG gates.
///
/// The first IG combines the addends: `IG(a, b, 0, 0)` yields a copy of
/// `a` (garbage), `a⊕b`, `ab` and `ab̄`. The second IG folds in the carry:
/// `IG(cin, a⊕b, ab, ab̄)` yields a copy of `cin` (garbage), the sum
/// `s = a⊕b⊕cin`, the carry `cout = (a⊕b)cin ⊕ ab`, and one more garbage
/// line. Three garbage outputs and two constant inputs in total.
pub fn full_adder() -> Circuit {
    let mut c = Circuit::new("full_adder");
    let a = c.add_primary_input("a");
    let b = c.add_primary_input("b");
    let cin = c.add_primary_input("cin");
    let c0 = c.add_constant("c0", false);
    let c1 = c.add_constant("c1", false);

    let g0 = c.add_wire("g0");
    let w_xor = c.add_wire("w0");
    let w_and = c.add_wire("w1");
    let w_nand = c.add_wire("w2");
    c.add_instance(
        "ig1",
        Builtin::Ig.spec(),
        &[a, b, c0, c1],
        &[g0, w_xor, w_and, w_nand],
    );

    let g1 = c.add_wire("g1");
    let s = c.add_wire("s");
    let cout = c.add_wire("cout");
    let g2 = c.add_wire("g2");
    c.add_instance(
        "ig2",
        Builtin::Ig.spec(),
        &[cin, w_xor, w_and, w_nand],
        &[g1, s, cout, g2],
    );

    c.mark_primary_output(s);
    c.mark_primary_output(cout);
    for g in [g0, g1, g2] {
        c.mark_garbage(g);
    }
    c
}

/// The full adder's defining truth specification:
/// `s = a⊕b⊕cin`, `cout = (a⊕b)cin ⊕ ab`.
pub fn full_adder_spec() -> TruthSpec {
    TruthSpec::from_fns(
        3,
        &[
            ("s", &|v: &[bool]| v[0] ^ v[1] ^ v[2]),
            ("cout", &|v: &[bool]| ((v[0] ^ v[1]) & v[2]) ^ (v[0] & v[1])),
        ],
    )
    .expect("full adder spec is well formed")
}

/// N-bit ripple-carry adder: N full-adder stages with each stage's carry
/// wire feeding the next stage's `cin` port. Primary inputs are
/// `a0..a(N-1)`, `b0..b(N-1)`, `cin` (bit 0 = least significant); primary
/// outputs are `s0..s(N-1)`, `cout`. Uses 2N gates, 2N constants and
/// produces 3N garbage outputs.
pub fn ripple_carry_adder(n: usize) -> Result<Circuit, BuildError> {
    if n < 1 {
        return Err(BuildError::BadWidth);
    }
    let mut c = Circuit::new(format!("ripple_carry_adder_{n}"));
    let a: Vec<WireId> = (0..n)
        .map(|i| c.add_primary_input(format!("a{i}")))
        .collect();
    let b: Vec<WireId> = (0..n)
        .map(|i| c.add_primary_input(format!("b{i}")))
        .collect();
    let mut carry = c.add_primary_input("cin");
    let consts: Vec<WireId> = (0..2 * n)
        .map(|k| c.add_constant(format!("c{k}"), false))
        .collect();

    let mut wc = 0usize;
    let mut gc = 0usize;
    let mut sums = Vec::with_capacity(n);
    let mut garbage = Vec::with_capacity(3 * n);
    let new_wire = |c: &mut Circuit, prefix: &str, counter: &mut usize| -> WireId {
        let w = c.add_wire(format!("{prefix}{counter}"));
        *counter += 1;
        w
    };

    for i in 0..n {
        let g_a = new_wire(&mut c, "g", &mut gc);
        let w_xor = new_wire(&mut c, "w", &mut wc);
        let w_and = new_wire(&mut c, "w", &mut wc);
        let w_nand = new_wire(&mut c, "w", &mut wc);
        c.add_instance(
            format!("ig{}", 2 * i + 1),
            Builtin::Ig.spec(),
            &[a[i], b[i], consts[2 * i], consts[2 * i + 1]],
            &[g_a, w_xor, w_and, w_nand],
        );

        let g_c = new_wire(&mut c, "g", &mut gc);
        let s = c.add_wire(format!("s{i}"));
        let carry_out = if i == n - 1 {
            c.add_wire("cout")
        } else {
            new_wire(&mut c, "w", &mut wc)
        };
        let g_d = new_wire(&mut c, "g", &mut gc);
        c.add_instance(
            format!("ig{}", 2 * i + 2),
            Builtin::Ig.spec(),
            &[carry, w_xor, w_and, w_nand],
            &[g_c, s, carry_out, g_d],
        );

        sums.push(s);
        garbage.extend([g_a, g_c, g_d]);
        carry = carry_out;
    }

    for s in sums {
        c.mark_primary_output(s);
    }
    c.mark_primary_output(carry);
    for g in garbage {
        c.mark_garbage(g);
    }
    Ok(c)
}

/// Parity-preserving Toffoli circuit from one FRG and one F2G with a
/// single constant and a single garbage output.
///
/// `FRG(a, 0, b)` yields `(a, ab, āb)`; `F2G(ab, c, āb)` then yields the
/// garbage `ab`, the Toffoli target `ab⊕c`, and `ab⊕āb = b`. The primary
/// outputs `(p, q, r) = (a, b, ab⊕c)` match the plain Toffoli gate.
pub fn parity_preserving_toffoli() -> Circuit {
    let mut c = Circuit::new("toffoli_pp");
    let a = c.add_primary_input("a");
    let b = c.add_primary_input("b");
    let t = c.add_primary_input("c");
    let c0 = c.add_constant("c0", false);

    let p = c.add_wire("p");
    let w_and = c.add_wire("w0");
    let w_nand = c.add_wire("w1");
    c.add_instance(
        "frg1",
        Builtin::Frg.spec(),
        &[a, c0, b],
        &[p, w_and, w_nand],
    );

    let g0 = c.add_wire("g0");
    let r = c.add_wire("r");
    let q = c.add_wire("q");
    c.add_instance(
        "f2g1",
        Builtin::F2g.spec(),
        &[w_and, t, w_nand],
        &[g0, r, q],
    );

    c.mark_primary_output(p);
    c.mark_primary_output(q);
    c.mark_primary_output(r);
    c.mark_garbage(g0);
    c
}

/// Boolean functions realizable from IG gates and constants alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryFunction {
    Not,
    Copy,
    And,
    Nand,
    Xor,
    Or,
}

pub const LIBRARY_FUNCTIONS: [LibraryFunction; 6] = [
    LibraryFunction::Not,
    LibraryFunction::Copy,
    LibraryFunction::And,
    LibraryFunction::Nand,
    LibraryFunction::Xor,
    LibraryFunction::Or,
];

impl LibraryFunction {
    pub fn name(self) -> &'static str {
        match self {
            LibraryFunction::Not => "NOT",
            LibraryFunction::Copy => "COPY",
            LibraryFunction::And => "AND",
            LibraryFunction::Nand => "NAND",
            LibraryFunction::Xor => "XOR",
            LibraryFunction::Or => "OR",
        }
    }

    pub fn from_name(name: &str) -> Option<LibraryFunction> {
        let upper = name.to_ascii_uppercase();
        LIBRARY_FUNCTIONS
            .iter()
            .copied()
            .find(|f| f.name() == upper)
    }

    pub fn input_arity(self) -> usize {
        match self {
            LibraryFunction::Not | LibraryFunction::Copy => 1,
            _ => 2,
        }
    }

    /// The function's defining truth specification, one column per
    /// primary output of [`function_circuit`].
    pub fn truth_spec(self) -> TruthSpec {
        let spec = match self {
            LibraryFunction::Not => TruthSpec::from_fns(1, &[("y", &|v: &[bool]| !v[0])]),
            LibraryFunction::Copy => {
                TruthSpec::from_fns(1, &[("y0", &|v: &[bool]| v[0]), ("y1", &|v: &[bool]| v[0])])
            }
            LibraryFunction::And => TruthSpec::from_fns(2, &[("y", &|v: &[bool]| v[0] & v[1])]),
            LibraryFunction::Nand => TruthSpec::from_fns(2, &[("y", &|v: &[bool]| !(v[0] & v[1]))]),
            LibraryFunction::Xor => TruthSpec::from_fns(2, &[("y", &|v: &[bool]| v[0] ^ v[1])]),
            LibraryFunction::Or => TruthSpec::from_fns(2, &[("y", &|v: &[bool]| v[0] | v[1])]),
        };
        spec.expect("library function spec is well formed")
    }
}

/// Builds the named Boolean function from IG gates and constants only.
///
/// Single-IG forms read the function off one output port: `Q = a⊕b` (XOR),
/// `R = ab⊕c0` (AND with `c0=0`, NAND with `c0=1`), `S = ab̄⊕d` (NOT via
/// `b=0, d=1`). COPY uses ports P and Q of `IG(a,0,0,0)`. OR needs two
/// gates because `a∨b = ab̄⊕b` consumes `b` twice and fan-out is illegal:
/// a first IG copies `b`, a second computes `S = ab̄⊕b`.
pub fn function_circuit(f: LibraryFunction) -> Circuit {
    let ig = Builtin::Ig.spec();
    match f {
        LibraryFunction::Xor | LibraryFunction::And | LibraryFunction::Nand => {
            let mut c = Circuit::new(format!("ig_{}", f.name().to_ascii_lowercase()));
            let a = c.add_primary_input("a");
            let b = c.add_primary_input("b");
            let c0 = c.add_constant("c0", f == LibraryFunction::Nand);
            let c1 = c.add_constant("c1", false);
            let outs: Vec<WireId> = match f {
                LibraryFunction::Xor => {
                    let g0 = c.add_wire("g0");
                    let y = c.add_wire("y");
                    let g1 = c.add_wire("g1");
                    let g2 = c.add_wire("g2");
                    vec![g0, y, g1, g2]
                }
                _ => {
                    let g0 = c.add_wire("g0");
                    let g1 = c.add_wire("g1");
                    let y = c.add_wire("y");
                    let g2 = c.add_wire("g2");
                    vec![g0, g1, y, g2]
                }
            };
            c.add_instance("ig1", ig, &[a, b, c0, c1], &outs);
            let y = c.find_wire("y").unwrap();
            c.mark_primary_output(y);
            for w in outs {
                if w != y {
                    c.mark_garbage(w);
                }
            }
            c
        }
        LibraryFunction::Not => {
            let mut c = Circuit::new("ig_not");
            let a = c.add_primary_input("a");
            let c0 = c.add_constant("c0", false);
            let c1 = c.add_constant("c1", false);
            let c2 = c.add_constant("c2", true);
            let g0 = c.add_wire("g0");
            let g1 = c.add_wire("g1");
            let g2 = c.add_wire("g2");
            let y = c.add_wire("y");
            c.add_instance("ig1", ig, &[a, c0, c1, c2], &[g0, g1, g2, y]);
            c.mark_primary_output(y);
            for w in [g0, g1, g2] {
                c.mark_garbage(w);
            }
            c
        }
        LibraryFunction::Copy => {
            let mut c = Circuit::new("ig_copy");
            let a = c.add_primary_input("a");
            let c0 = c.add_constant("c0", false);
            let c1 = c.add_constant("c1", false);
            let c2 = c.add_constant("c2", false);
            let y0 = c.add_wire("y0");
            let y1 = c.add_wire("y1");
            let g0 = c.add_wire("g0");
            let g1 = c.add_wire("g1");
            c.add_instance("ig1", ig, &[a, c0, c1, c2], &[y0, y1, g0, g1]);
            c.mark_primary_output(y0);
            c.mark_primary_output(y1);
            c.mark_garbage(g0);
            c.mark_garbage(g1);
            c
        }
        LibraryFunction::Or => {
            let mut c = Circuit::new("ig_or");
            let a = c.add_primary_input("a");
            let b = c.add_primary_input("b");
            let c0 = c.add_constant("c0", false);
            let c1 = c.add_constant("c1", false);
            let c2 = c.add_constant("c2", false);
            let c3 = c.add_constant("c3", false);
            // copy b onto two lines
            let w0 = c.add_wire("w0");
            let w1 = c.add_wire("w1");
            let g0 = c.add_wire("g0");
            let g1 = c.add_wire("g1");
            c.add_instance("ig1", ig.clone(), &[b, c0, c1, c2], &[w0, w1, g0, g1]);
            // S = a·b̄ ⊕ b = a ∨ b
            let g2 = c.add_wire("g2");
            let g3 = c.add_wire("g3");
            let g4 = c.add_wire("g4");
            let y = c.add_wire("y");
            c.add_instance("ig2", ig, &[a, w0, c3, w1], &[g2, g3, g4, y]);
            c.mark_primary_output(y);
            for w in [g0, g1, g2, g3, g4] {
                c.mark_garbage(w);
            }
            c
        }
    }
}

/// Wraps a single gate as a circuit: one instance, all lines primary.
pub fn single_gate(gate: &std::sync::Arc<GateSpec>) -> Circuit {
    let mut c = Circuit::new(format!("{}_wrap", gate.name().to_ascii_lowercase()));
    let k = gate.arity();
    let ins: Vec<WireId> = (0..k)
        .map(|i| c.add_primary_input(format!("x{i}")))
        .collect();
    let outs: Vec<WireId> = (0..k).map(|i| c.add_wire(format!("y{i}"))).collect();
    c.add_instance("g1", gate.clone(), &ins, &outs);
    for w in outs {
        c.mark_primary_output(w);
    }
    c
}
