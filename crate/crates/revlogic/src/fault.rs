//! Single-signal fault injection and detection-coverage campaigns.
//!
//! A fault overrides one wire's value after its origin produces it:
//! downstream gates and circuit output slots both see the faulty value.
//! Detection compares the parity the observer expects with the parity of
//! the lines it can see. In a circuit built entirely from
//! parity-preserving gates, a single bit-flip anywhere flips the all-lines
//! output parity exactly once, so the all-lines observer catches every
//! such fault on every vector.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits;
use crate::circuit::{Circuit, CircuitError, WireId, WireOverride, EXHAUSTIVE_CAP};
use crate::sim::Trace;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FaultError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("unknown wire id for this circuit")]
    UnknownWire,
    #[error("input has {got} bits, circuit has {expected} primary inputs")]
    WidthMismatch { expected: usize, got: usize },
    #[error("sampled campaign needs a vector count of at least 1")]
    EmptySample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaultModel {
    BitFlip,
    StuckAt0,
    StuckAt1,
}

pub const FAULT_MODELS: [FaultModel; 3] = [
    FaultModel::BitFlip,
    FaultModel::StuckAt0,
    FaultModel::StuckAt1,
];

impl FaultModel {
    pub fn name(self) -> &'static str {
        match self {
            FaultModel::BitFlip => "bitflip",
            FaultModel::StuckAt0 => "sa0",
            FaultModel::StuckAt1 => "sa1",
        }
    }

    pub fn from_name(name: &str) -> Option<FaultModel> {
        FAULT_MODELS.iter().copied().find(|m| m.name() == name)
    }

    fn as_override(self) -> WireOverride {
        match self {
            FaultModel::BitFlip => WireOverride::Flip,
            FaultModel::StuckAt0 => WireOverride::Force(false),
            FaultModel::StuckAt1 => WireOverride::Force(true),
        }
    }
}

impl fmt::Display for FaultModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One injectable fault: a wire (any wire, including primary-input and
/// constant-input wires) and a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultSite {
    pub wire: WireId,
    pub model: FaultModel,
}

/// Which output lines the parity observer can see.
///
/// `AllLines` implements the detector the parity argument is about:
/// it compares the XOR of all input-line values (as applied, constants at
/// their declared values) with the XOR of all output lines of the faulty
/// run. `PrimaryOnly` models an observer without access to garbage lines;
/// it compares the faulty primary-output parity against the fault-free
/// primary-output parity, since for that observer the input parity is not
/// a valid reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observer {
    AllLines,
    PrimaryOnly,
}

impl Observer {
    pub fn name(self) -> &'static str {
        match self {
            Observer::AllLines => "all",
            Observer::PrimaryOnly => "primary",
        }
    }
}

/// Input vectors a campaign runs: the full space or a seeded sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorSet {
    All,
    Sample { count: usize, seed: u64 },
}

/// Outcome of injecting one fault on one input vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// Packed primary-input pattern (first input = MSB).
    pub vector: usize,
    /// The faulty wire value differs from the fault-free value.
    pub activated: bool,
    /// The observer's parity comparison flags this run.
    pub parity_detected: bool,
    /// At least one primary output differs from the fault-free run.
    pub output_corrupted: bool,
}

/// Per-site campaign record.
#[derive(Debug, Clone)]
pub struct FaultReport {
    pub site: FaultSite,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub observer: Observer,
    pub seed: Option<u64>,
    pub site_count: usize,
    pub vector_count: usize,
    pub bitflip_total: usize,
    pub bitflip_detected: usize,
    pub stuckat_total: usize,
    pub stuckat_activated: usize,
    pub stuckat_activated_detected: usize,
    /// Activated but parity-undetected (site, vector) pairs, all models.
    pub undetected_activated: Vec<(FaultSite, usize)>,
}

impl CampaignSummary {
    /// Detected bit-flips over all injected bit-flips (always activated).
    pub fn bitflip_detection_rate(&self) -> Option<f64> {
        (self.bitflip_total > 0).then(|| self.bitflip_detected as f64 / self.bitflip_total as f64)
    }

    /// Detected stuck-at faults among the activated ones.
    pub fn stuckat_detection_rate(&self) -> Option<f64> {
        (self.stuckat_activated > 0)
            .then(|| self.stuckat_activated_detected as f64 / self.stuckat_activated as f64)
    }
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub reports: Vec<FaultReport>,
    pub summary: CampaignSummary,
}

/// One site per (wire, model) pair, wires in topological order (inputs
/// first, then gate outputs in firing order), models in the given order.
pub fn enumerate_fault_sites(
    circuit: &Circuit,
    models: &[FaultModel],
) -> Result<Vec<FaultSite>, FaultError> {
    let wires = circuit.wires_in_topo_order()?;
    Ok(wires
        .into_iter()
        .flat_map(|wire| models.iter().map(move |&model| FaultSite { wire, model }))
        .collect())
}

fn intended_lines(circuit: &Circuit, inputs: &[bool]) -> Vec<bool> {
    inputs
        .iter()
        .copied()
        .chain(circuit.constants().iter().map(|&(_, v)| v))
        .collect()
}

fn output_parity_all(circuit: &Circuit, values: &[bool]) -> bool {
    circuit
        .primary_outputs()
        .iter()
        .chain(circuit.garbage_outputs())
        .fold(false, |acc, &w| acc ^ values[w.index()])
}

fn primary_parity(circuit: &Circuit, values: &[bool]) -> bool {
    circuit
        .primary_outputs()
        .iter()
        .fold(false, |acc, &w| acc ^ values[w.index()])
}

struct Runner<'c> {
    circuit: &'c Circuit,
    info: crate::circuit::CircuitInfo,
    observer: Observer,
}

impl<'c> Runner<'c> {
    fn new(circuit: &'c Circuit, observer: Observer) -> Result<Self, FaultError> {
        let info = circuit.analyze()?;
        Ok(Runner {
            circuit,
            info,
            observer,
        })
    }

    fn clean(&self, lines: &[bool]) -> Vec<bool> {
        self.info.eval_lines(self.circuit, lines, &[])
    }

    /// Verdict for one site on one vector, given the fault-free values.
    fn verdict(
        &self,
        site: FaultSite,
        vector: usize,
        lines: &[bool],
        clean: &[bool],
    ) -> (Option<Vec<bool>>, Verdict) {
        let clean_value = clean[site.wire.index()];
        let activated = site.model.as_override().apply(clean_value) != clean_value;
        if !activated {
            // the fault changes nothing on this vector
            return (
                None,
                Verdict {
                    vector,
                    activated: false,
                    parity_detected: false,
                    output_corrupted: false,
                },
            );
        }
        let faulty = self.info.eval_lines(
            self.circuit,
            lines,
            &[(site.wire, site.model.as_override())],
        );
        let parity_detected = match self.observer {
            Observer::AllLines => bits::parity(lines) != output_parity_all(self.circuit, &faulty),
            Observer::PrimaryOnly => {
                primary_parity(self.circuit, clean) != primary_parity(self.circuit, &faulty)
            }
        };
        let output_corrupted = self
            .circuit
            .primary_outputs()
            .iter()
            .any(|&w| faulty[w.index()] != clean[w.index()]);
        (
            Some(faulty),
            Verdict {
                vector,
                activated: true,
                parity_detected,
                output_corrupted,
            },
        )
    }
}

/// Injects one fault on one primary-input vector and returns the faulty
/// trace together with the verdict.
pub fn inject_and_run(
    circuit: &Circuit,
    site: FaultSite,
    inputs: &[bool],
    observer: Observer,
) -> Result<(Trace, Verdict), FaultError> {
    if site.wire.index() >= circuit.wire_count() {
        return Err(FaultError::UnknownWire);
    }
    let runner = Runner::new(circuit, observer)?;
    if inputs.len() != circuit.primary_inputs().len() {
        return Err(FaultError::WidthMismatch {
            expected: circuit.primary_inputs().len(),
            got: inputs.len(),
        });
    }
    let lines = intended_lines(circuit, inputs);
    let clean = runner.clean(&lines);
    let vector = bits::pack(inputs);
    let (faulty, verdict) = runner.verdict(site, vector, &lines, &clean);
    let values = faulty.unwrap_or(clean);
    Ok((trace_from(circuit, values), verdict))
}

fn trace_from(circuit: &Circuit, values: Vec<bool>) -> Trace {
    let pick = |ws: &[WireId]| -> Vec<bool> { ws.iter().map(|&w| values[w.index()]).collect() };
    Trace {
        inputs: pick(circuit.primary_inputs()),
        outputs: pick(circuit.primary_outputs()),
        garbage: pick(circuit.garbage_outputs()),
        wire_values: values,
    }
}

/// Runs the full site × vector grid and aggregates detection statistics.
pub fn campaign(
    circuit: &Circuit,
    models: &[FaultModel],
    vectors: VectorSet,
    observer: Observer,
) -> Result<Campaign, FaultError> {
    let runner = Runner::new(circuit, observer)?;
    let sites = enumerate_fault_sites(circuit, models)?;
    let n = circuit.primary_inputs().len();
    if n > EXHAUSTIVE_CAP {
        return Err(CircuitError::TooLarge {
            lines: n,
            cap: EXHAUSTIVE_CAP,
        }
        .into());
    }
    let (patterns, seed) = match vectors {
        VectorSet::All => ((0..(1usize << n)).collect::<Vec<_>>(), None),
        VectorSet::Sample { count, seed } => {
            if count == 0 {
                return Err(FaultError::EmptySample);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let space = 1usize << n;
            (
                (0..count).map(|_| rng.random_range(0..space)).collect(),
                Some(seed),
            )
        }
    };

    // fault-free runs, shared across all sites
    let evaluated: Vec<(usize, Vec<bool>, Vec<bool>)> = patterns
        .iter()
        .map(|&pattern| {
            let inputs = bits::unpack(pattern, n);
            let lines = intended_lines(circuit, &inputs);
            let clean = runner.clean(&lines);
            (pattern, lines, clean)
        })
        .collect();

    let mut summary = CampaignSummary {
        observer,
        seed,
        site_count: sites.len(),
        vector_count: patterns.len(),
        bitflip_total: 0,
        bitflip_detected: 0,
        stuckat_total: 0,
        stuckat_activated: 0,
        stuckat_activated_detected: 0,
        undetected_activated: Vec::new(),
    };
    let mut reports = Vec::with_capacity(sites.len());
    for site in sites {
        let mut verdicts = Vec::with_capacity(evaluated.len());
        for (pattern, lines, clean) in &evaluated {
            let (_, v) = runner.verdict(site, *pattern, lines, clean);
            match site.model {
                FaultModel::BitFlip => {
                    summary.bitflip_total += 1;
                    if v.parity_detected {
                        summary.bitflip_detected += 1;
                    }
                }
                FaultModel::StuckAt0 | FaultModel::StuckAt1 => {
                    summary.stuckat_total += 1;
                    if v.activated {
                        summary.stuckat_activated += 1;
                        if v.parity_detected {
                            summary.stuckat_activated_detected += 1;
                        }
                    }
                }
            }
            if v.activated && !v.parity_detected {
                summary.undetected_activated.push((site, *pattern));
            }
            verdicts.push(v);
        }
        reports.push(FaultReport { site, verdicts });
    }
    Ok(Campaign { reports, summary })
}

impl Campaign {
    /// CSV export: one row per (site, vector), then a `#`-prefixed
    /// key,value summary block.
    pub fn to_csv(&self, circuit: &Circuit) -> String {
        let n = circuit.primary_inputs().len();
        let mut out =
            String::from("wire,model,vector,activated,parity_detected,output_corrupted\n");
        for report in &self.reports {
            let wire = circuit.wire_name(report.site.wire);
            for v in &report.verdicts {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    wire,
                    report.site.model,
                    bits::format_pattern(v.vector, n),
                    v.activated,
                    v.parity_detected,
                    v.output_corrupted
                ));
            }
        }
        let s = &self.summary;
        out.push('\n');
        out.push_str("# summary\n");
        out.push_str(&format!("# observer,{}\n", s.observer.name()));
        match s.seed {
            Some(seed) => out.push_str(&format!("# seed,{seed}\n")),
            None => out.push_str("# seed,none\n"),
        }
        out.push_str(&format!("# sites,{}\n", s.site_count));
        out.push_str(&format!("# vectors,{}\n", s.vector_count));
        out.push_str(&format!("# bitflip_detected,{}\n", s.bitflip_detected));
        out.push_str(&format!("# bitflip_total,{}\n", s.bitflip_total));
        if let Some(rate) = s.bitflip_detection_rate() {
            out.push_str(&format!("# bitflip_detection_rate,{rate:.6}\n"));
        }
        out.push_str(&format!("# stuckat_activated,{}\n", s.stuckat_activated));
        out.push_str(&format!(
            "# stuckat_activated_detected,{}\n",
            s.stuckat_activated_detected
        ));
        if let Some(rate) = s.stuckat_detection_rate() {
            out.push_str(&format!("# stuckat_detection_rate,{rate:.6}\n"));
        }
        out.push_str(&format!(
            "# undetected_activated,{}\n",
            s.undetected_activated.len()
        ));
        out
    }
}
