//! Shared helpers for the integration suites: a deterministic generator
//! for random legal circuits over the parity-preserving gate set, and an
//! integer oracle for adder checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use revlogic::circuit::{Circuit, WireId};
use revlogic::gate::Builtin;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds a random legal circuit over {FRG, F2G, NFT, IG} with at most
/// `max_lines` lines and `max_gates` gates. Wires are single-use by
/// construction: gates consume from a frontier of live wires and push
/// their outputs back; whatever remains becomes the circuit outputs.
pub fn random_parity_circuit(
    rng: &mut ChaCha8Rng,
    tag: usize,
    max_lines: usize,
    max_gates: usize,
) -> Circuit {
    assert!(max_lines >= 3);
    let lines = rng.random_range(3..=max_lines);
    let gate_budget = rng.random_range(1..=max_gates);
    let primaries = rng.random_range(1..=lines);
    let constants = lines - primaries;

    let mut c = Circuit::new(format!("rand_{tag}"));
    let mut frontier: Vec<WireId> = Vec::new();
    for i in 0..primaries {
        frontier.push(c.add_primary_input(format!("p{i}")));
    }
    for j in 0..constants {
        frontier.push(c.add_constant(format!("k{j}"), rng.random()));
    }

    let pool = [Builtin::Frg, Builtin::F2g, Builtin::Nft, Builtin::Ig];
    let mut wire_counter = 0usize;
    for gi in 0..gate_budget {
        let fits: Vec<Builtin> = pool
            .iter()
            .copied()
            .filter(|b| b.arity() <= frontier.len())
            .collect();
        if fits.is_empty() {
            break;
        }
        let gate = fits[rng.random_range(0..fits.len())];
        let arity = gate.arity();
        let mut inputs = Vec::with_capacity(arity);
        for _ in 0..arity {
            let idx = rng.random_range(0..frontier.len());
            inputs.push(frontier.swap_remove(idx));
        }
        let outputs: Vec<WireId> = (0..arity)
            .map(|_| {
                let w = c.add_wire(format!("w{wire_counter}"));
                wire_counter += 1;
                w
            })
            .collect();
        c.add_instance(format!("g{gi}"), gate.spec(), &inputs, &outputs);
        frontier.extend(&outputs);
    }

    for w in frontier {
        if rng.random() {
            c.mark_primary_output(w);
        } else {
            c.mark_garbage(w);
        }
    }
    c
}

/// Primary-input vector of a ripple-carry adder for operands `a`, `b` and
/// carry-in `carry`, matching the builder's input order (a bits, b bits,
/// cin; bit 0 least significant).
pub fn adder_inputs(n: usize, a: usize, b: usize, carry: usize) -> Vec<bool> {
    let mut inputs = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        inputs.push((a >> i) & 1 == 1);
    }
    for i in 0..n {
        inputs.push((b >> i) & 1 == 1);
    }
    inputs.push(carry == 1);
    inputs
}

/// Reads the sum out of an adder trace: `s` bits then the final carry.
pub fn adder_sum(n: usize, outputs: &[bool]) -> usize {
    let mut sum = 0usize;
    for (i, &bit) in outputs[..n].iter().enumerate() {
        sum |= (bit as usize) << i;
    }
    sum | ((outputs[n] as usize) << n)
}
