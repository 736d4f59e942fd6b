//! Interchangeable grouping methods behind one trait, selected by name.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::baseline::{adjacency_bytes, greedy_color_capped, GroupingResult, Relation, DEFAULT_MAX_ADJ_BYTES};
use crate::circuit::{Circuit, Gate};
use crate::diagonalize::{coefficients_from_images, plan_family, MeasurementPlan};
use crate::error::{Error, Result};
use crate::measure::operator::WeightedPauliSum;
use crate::partition::{Solution, MAX_QUBITS};
use crate::pauli::PauliString;

/// Rotation circuits and outcome weights for every group of an operator,
/// plus the identity coefficient, which needs no measurement.
#[derive(Clone, Debug)]
pub struct MeasurementSet {
    pub plans: Vec<MeasurementPlan>,
    pub offset: f64,
}

pub trait GroupingStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// Largest register this method handles in benchmarks.
    fn max_qubits(&self) -> usize;

    /// Partition `strings` into groups that are jointly measurable under the
    /// method's relation. Identity strings are dropped.
    fn group(&self, strings: &[PauliString]) -> Result<GroupingResult>;

    /// Bytes of the method's dominant data structure for `n_strings` strings
    /// on `m` qubits.
    fn memory_proxy(&self, m: usize, n_strings: usize) -> u64;

    fn measurement_plans(&self, h: &WeightedPauliSum) -> Result<MeasurementSet>;

    fn check_qubits(&self, m: usize) -> Result<()> {
        if m > self.max_qubits() {
            return Err(Error::MethodCap {
                method: self.name().into(),
                m,
                max: self.max_qubits(),
            });
        }
        Ok(())
    }
}

fn non_identity(strings: &[PauliString]) -> Vec<PauliString> {
    strings.iter().copied().filter(|p| !p.is_identity()).collect()
}

/// Bytes held by a [`Solution`] on `m` qubits.
pub fn dense_table_bytes(m: usize) -> u64 {
    let n = 1u64 << m;
    (n - 1) * m as u64 * 8 + (n - 1) * 8 + n * 4
}

/// The perfect partition.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dense;

impl GroupingStrategy for Dense {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn max_qubits(&self) -> usize {
        MAX_QUBITS
    }

    fn group(&self, strings: &[PauliString]) -> Result<GroupingResult> {
        let start = Instant::now();
        let strings = non_identity(strings);
        let families = match strings.first() {
            None => Vec::new(),
            Some(p) => Solution::build(p.num_qubits())?
                .group_strings(&strings)?
                .into_iter()
                .map(|(_, members)| members)
                .collect(),
        };
        Ok(GroupingResult {
            method: self.name().into(),
            families,
            walltime: start.elapsed().as_secs_f64(),
            peak_adjacency_bits: None,
        })
    }

    fn memory_proxy(&self, m: usize, n_strings: usize) -> u64 {
        dense_table_bytes(m) + n_strings as u64 * 16
    }

    fn measurement_plans(&self, h: &WeightedPauliSum) -> Result<MeasurementSet> {
        let sol = Solution::build(h.num_qubits())?;
        let plans = sol
            .group_operator(h.terms())?
            .into_iter()
            .map(|(f, terms)| plan_family(&sol, f, &terms, 0.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasurementSet {
            plans,
            offset: h.identity(),
        })
    }
}

/// Greedy coloring of the conflict graph.
#[derive(Clone, Copy, Debug)]
pub struct Graph {
    pub relation: Relation,
    pub cap_bytes: u64,
}

impl Graph {
    pub fn qwc() -> Self {
        Self {
            relation: Relation::Qwc,
            cap_bytes: DEFAULT_MAX_ADJ_BYTES,
        }
    }

    pub fn gc() -> Self {
        Self {
            relation: Relation::Gc,
            cap_bytes: DEFAULT_MAX_ADJ_BYTES,
        }
    }
}

impl GroupingStrategy for Graph {
    fn name(&self) -> &'static str {
        self.relation.name()
    }

    fn max_qubits(&self) -> usize {
        crate::baseline::GRAPH_MAX_QUBITS
    }

    fn group(&self, strings: &[PauliString]) -> Result<GroupingResult> {
        greedy_color_capped(&non_identity(strings), self.relation, self.cap_bytes)
    }

    fn memory_proxy(&self, _m: usize, n_strings: usize) -> u64 {
        adjacency_bytes(n_strings)
    }

    fn measurement_plans(&self, h: &WeightedPauliSum) -> Result<MeasurementSet> {
        if self.relation == Relation::Gc {
            return Err(Error::NoMeasurementCircuits(self.name().into()));
        }
        let grouping = self.group(&h.strings())?;
        let weights: BTreeMap<PauliString, f64> = h.terms().iter().map(|&(a, p)| (p, a)).collect();
        let plans = grouping
            .families
            .iter()
            .enumerate()
            .map(|(i, fam)| {
                let terms: Vec<(f64, PauliString)> = fam.iter().map(|p| (weights[p], *p)).collect();
                qwc_plan(format!("qwc group {i}"), &terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasurementSet {
            plans,
            offset: h.identity(),
        })
    }
}

/// One group per string.
#[derive(Clone, Copy, Debug, Default)]
pub struct Naive;

impl GroupingStrategy for Naive {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn max_qubits(&self) -> usize {
        MAX_QUBITS
    }

    fn group(&self, strings: &[PauliString]) -> Result<GroupingResult> {
        let start = Instant::now();
        let families = non_identity(strings).into_iter().map(|p| vec![p]).collect();
        Ok(GroupingResult {
            method: self.name().into(),
            families,
            walltime: start.elapsed().as_secs_f64(),
            peak_adjacency_bits: None,
        })
    }

    fn memory_proxy(&self, _m: usize, n_strings: usize) -> u64 {
        n_strings as u64 * 16
    }

    fn measurement_plans(&self, h: &WeightedPauliSum) -> Result<MeasurementSet> {
        let plans = h
            .terms()
            .iter()
            .map(|&(a, p)| qwc_plan(format!("string {p}"), &[(a, p)]))
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasurementSet {
            plans,
            offset: h.identity(),
        })
    }
}

/// Single-qubit basis change for a qubit-wise commuting group: `UY` for
/// `X` and `Sdg` then `H` for `Y`. Every member maps to `+z` on its support.
pub fn qwc_plan(label: String, terms: &[(f64, PauliString)]) -> Result<MeasurementPlan> {
    let m = terms
        .first()
        .map(|(_, p)| p.num_qubits())
        .ok_or_else(|| Error::Precondition("empty measurement group".into()))?;
    let mut basis = vec!['I'; m];
    for (_, p) in terms {
        for (q, slot) in basis.iter_mut().enumerate() {
            let c = p.char_at(q);
            if c == 'I' {
                continue;
            }
            if *slot != 'I' && *slot != c {
                return Err(Error::Precondition(format!(
                    "{p} is not qubit-wise commuting with its group"
                )));
            }
            *slot = c;
        }
    }
    let mut circuit = Circuit::new(m);
    for (q, c) in basis.into_iter().enumerate() {
        match c {
            'X' => circuit.push(Gate::Uy(q))?,
            'Y' => {
                circuit.push(Gate::Sdg(q))?;
                circuit.push(Gate::H(q))?;
            }
            _ => {}
        }
    }
    let images: Vec<(f64, i8, u64)> = terms.iter().map(|&(a, p)| (a, 1, p.support())).collect();
    Ok(MeasurementPlan {
        label,
        circuit,
        coeffs: coefficients_from_images(m, &images, 0.0),
        num_terms: terms.len(),
    })
}

/// Strategies keyed by name.
pub struct StrategyRegistry {
    entries: Vec<Box<dyn GroupingStrategy>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_adjacency_cap(DEFAULT_MAX_ADJ_BYTES)
    }
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// The four built-in methods, with `cap_bytes` bounding the graph methods.
    pub fn with_adjacency_cap(cap_bytes: u64) -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(Dense));
        registry.register(Box::new(Graph {
            relation: Relation::Gc,
            cap_bytes,
        }));
        registry.register(Box::new(Naive));
        registry.register(Box::new(Graph {
            relation: Relation::Qwc,
            cap_bytes,
        }));
        registry
    }

    /// Add a strategy, replacing any with the same name.
    pub fn register(&mut self, strategy: Box<dyn GroupingStrategy>) {
        self.entries.retain(|s| s.name() != strategy.name());
        self.entries.push(strategy);
        self.entries.sort_by_key(|s| s.name());
    }

    pub fn get(&self, name: &str) -> Result<&dyn GroupingStrategy> {
        self.entries
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownMethod(name.into()))
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }
}
