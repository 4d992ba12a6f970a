//! Adaptive local-measurement protocols and the information they extract.
//!
//! A protocol is a finite tree: each node measures one party with a set of
//! Kraus operators (one per outcome) and branches on the outcome; leaves stop.
//! Running a protocol on an ensemble yields the joint distribution of member
//! identity and outcome transcript, whose mutual information is the
//! information the protocol extracts.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, QuantumState};
use crate::error::{Error, Result};
use crate::info::{holevo_chi, mutual_information, Bits, COMPLETENESS_TOL};
use crate::linalg::{apply_local_to_vec, c64, embed_local, ComplexMatrix, SystemLayout};

/// Outcomes (and conditional members) below this probability are dropped,
/// with the survivors renormalized.
pub const PRUNE_TOL: f64 = 1e-12;

/// Maximum protocol-tree depth.
pub const MAX_PROTOCOL_DEPTH: usize = 8;

/// A measurement on a single party: one Kraus operator per outcome.
#[derive(Debug, Clone)]
pub struct LocalMeasurement {
    party: usize,
    kraus: Vec<ComplexMatrix>,
}

impl LocalMeasurement {
    /// Validates squareness, a common dimension, and the completeness
    /// relation `sum_y K_y' K_y = I`.
    pub fn new(party: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let d = match kraus.first() {
            Some(k) if k.is_square() => k.rows(),
            _ => return Err(Error::Povm(f64::INFINITY)),
        };
        if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::Shape(
                "Kraus operators must share one square dimension".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &kraus {
            sum = sum.add(&k.adjoint().matmul(k));
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > COMPLETENESS_TOL {
            return Err(Error::Povm(dev));
        }
        Ok(Self { party, kraus })
    }

    /// Projective measurement in the computational basis of a `d`-level party.
    pub fn computational_basis(party: usize, d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(d, d);
                m.set(i, i, c64(1.0, 0.0));
                m
            })
            .collect();
        Self { party, kraus }
    }

    pub fn party(&self) -> usize {
        self.party
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn num_outcomes(&self) -> usize {
        self.kraus.len()
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }
}

/// Adaptive measurement tree with one child per outcome.
#[derive(Debug, Clone)]
pub enum ProtocolTree {
    Leaf,
    Measure {
        measurement: LocalMeasurement,
        children: Vec<ProtocolTree>,
    },
}

impl ProtocolTree {
    pub fn leaf() -> Self {
        ProtocolTree::Leaf
    }

    /// A node; `children` must provide exactly one subtree per outcome, and
    /// the resulting tree must stay within [`MAX_PROTOCOL_DEPTH`].
    pub fn measure(measurement: LocalMeasurement, children: Vec<ProtocolTree>) -> Result<Self> {
        if children.len() != measurement.num_outcomes() {
            return Err(Error::Protocol(format!(
                "{} outcomes need {} children, got {}",
                measurement.num_outcomes(),
                measurement.num_outcomes(),
                children.len()
            )));
        }
        let tree = ProtocolTree::Measure {
            measurement,
            children,
        };
        if tree.depth() > MAX_PROTOCOL_DEPTH {
            return Err(Error::Protocol(format!(
                "depth {} exceeds the maximum {}",
                tree.depth(),
                MAX_PROTOCOL_DEPTH
            )));
        }
        Ok(tree)
    }

    pub fn depth(&self) -> usize {
        match self {
            ProtocolTree::Leaf => 0,
            ProtocolTree::Measure { children, .. } => {
                1 + children.iter().map(Self::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Option<NodeDoc> = serde_json::from_str(text)?;
        let tree = match doc {
            None => ProtocolTree::Leaf,
            Some(node) => node.try_into()?,
        };
        if tree.depth() > MAX_PROTOCOL_DEPTH {
            return Err(Error::Protocol(format!(
                "depth {} exceeds the maximum {}",
                tree.depth(),
                MAX_PROTOCOL_DEPTH
            )));
        }
        Ok(tree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NodeDoc::from_tree(self)).expect("protocol serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

/// Chain of computational-basis measurements over the given parties, in
/// order, with the same continuation after every outcome.
pub fn basis_protocol(layout: &SystemLayout, parties: &[usize]) -> Result<ProtocolTree> {
    match parties.split_first() {
        None => Ok(ProtocolTree::Leaf),
        Some((&party, rest)) => {
            let idx = layout.party_index(party)?;
            let d = layout.dims()[idx];
            let child = basis_protocol(layout, rest)?;
            let children = vec![child; d];
            ProtocolTree::measure(LocalMeasurement::computational_basis(party, d), children)
        }
    }
}

/// On-disk protocol node:
/// `{ "party": k, "kraus": [matrix,...], "children": [subtree|null,...] }`,
/// where a matrix is `[[[re,im],...],...]` and `null` marks a leaf.
#[derive(Serialize, Deserialize)]
struct NodeDoc {
    party: usize,
    kraus: Vec<Vec<Vec<(f64, f64)>>>,
    children: Vec<Option<NodeDoc>>,
}

impl NodeDoc {
    fn from_tree(tree: &ProtocolTree) -> Option<NodeDoc> {
        match tree {
            ProtocolTree::Leaf => None,
            ProtocolTree::Measure {
                measurement,
                children,
            } => Some(NodeDoc {
                party: measurement.party(),
                kraus: measurement
                    .kraus()
                    .iter()
                    .map(|k| {
                        (0..k.rows())
                            .map(|i| {
                                (0..k.cols())
                                    .map(|j| {
                                        let z = k.get(i, j);
                                        (z.re, z.im)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
                children: children.iter().map(NodeDoc::from_tree).collect(),
            }),
        }
    }
}

impl TryFrom<NodeDoc> for ProtocolTree {
    type Error = Error;

    fn try_from(doc: NodeDoc) -> Result<Self> {
        let kraus = doc
            .kraus
            .into_iter()
            .map(|rows| {
                let rows: Vec<Vec<_>> = rows
                    .into_iter()
                    .map(|row| row.into_iter().map(|(re, im)| c64(re, im)).collect())
                    .collect();
                ComplexMatrix::from_rows(&rows)
            })
            .collect::<Result<Vec<_>>>()?;
        let measurement = LocalMeasurement::new(doc.party, kraus)?;
        let children = doc
            .children
            .into_iter()
            .map(|child| match child {
                None => Ok(ProtocolTree::Leaf),
                Some(node) => node.try_into(),
            })
            .collect::<Result<Vec<_>>>()?;
        ProtocolTree::measure(measurement, children)
    }
}

/// Joint distribution of member identity and outcome transcript.
#[derive(Debug, Clone, Serialize)]
pub struct TranscriptDistribution {
    /// Number of members in the measured ensemble.
    pub num_members: usize,
    pub rows: Vec<TranscriptRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranscriptRow {
    /// 0-based index into the original ensemble.
    pub member: usize,
    /// Outcome indices along the path from the root.
    pub transcript: Vec<usize>,
    /// Joint probability of this member and this transcript.
    pub probability: f64,
}

impl TranscriptDistribution {
    /// Collapses the rows into a member-by-transcript joint matrix.
    pub fn joint(&self) -> Vec<Vec<f64>> {
        let mut transcripts: Vec<&[usize]> =
            self.rows.iter().map(|r| r.transcript.as_slice()).collect();
        transcripts.sort_unstable();
        transcripts.dedup();
        let column = |t: &[usize]| transcripts.binary_search(&t).expect("transcript present");
        let mut joint = vec![vec![0.0; transcripts.len()]; self.num_members];
        for row in &self.rows {
            joint[row.member][column(&row.transcript)] += row.probability;
        }
        joint
    }

    pub fn total_probability(&self) -> f64 {
        self.rows.iter().map(|r| r.probability).sum()
    }
}

/// Result of running a protocol tree over an ensemble.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub transcripts: TranscriptDistribution,
    /// Mutual information between member identity and the full transcript.
    pub extracted_info: Bits,
}

struct IndexedMember {
    orig: usize,
    prob: f64,
    state: QuantumState,
}

struct OutcomeBranch {
    /// Index into the measurement's Kraus list (pruning skips outcomes).
    outcome: usize,
    prob: f64,
    members: Vec<IndexedMember>,
}

/// Kraus operators embedded into the full space, plus the probability weight
/// `q = tr(K rho K')` evaluation for a member state.
fn embedded_ops(layout: &SystemLayout, m: &LocalMeasurement) -> Result<Vec<ComplexMatrix>> {
    let idx = layout.party_index(m.party())?;
    let d = layout.dims()[idx];
    if m.dim() != d {
        return Err(Error::Shape(format!(
            "measurement on party {} is {}-dimensional but the party has dimension {}",
            m.party(),
            m.dim(),
            d
        )));
    }
    m.kraus()
        .iter()
        .map(|k| embed_local(k, layout, m.party()))
        .collect()
}

/// Applies one Kraus operator to a member, returning the outcome weight
/// `q` and the normalized post-measurement state when `q` is resolvable.
fn apply_kraus(
    layout: &SystemLayout,
    member: &QuantumState,
    local: &ComplexMatrix,
    embedded: &ComplexMatrix,
    party: usize,
) -> Result<(f64, Option<QuantumState>)> {
    match member.amplitudes() {
        Some(amps) => {
            let out = apply_local_to_vec(local, layout, party, amps)?;
            let q: f64 = out.iter().map(|z| z.norm_sqr()).sum();
            if q <= PRUNE_TOL {
                return Ok((q.max(0.0), None));
            }
            let scale = 1.0 / q.sqrt();
            let normalized = out.into_iter().map(|z| z * scale).collect();
            Ok((q, Some(QuantumState::pure(layout.clone(), normalized)?)))
        }
        None => {
            let rho = member.density();
            let mapped = embedded.matmul(&rho).matmul(&embedded.adjoint());
            let q = mapped.trace().re;
            if q <= PRUNE_TOL {
                return Ok((q.max(0.0), None));
            }
            let post = QuantumState::mixed(layout.clone(), mapped.scale_real(1.0 / q))?;
            Ok((q, Some(post)))
        }
    }
}

/// One measurement round over a set of tracked members. Branch and member
/// probabilities come out renormalized after pruning.
fn measure_members(
    layout: &SystemLayout,
    members: &[IndexedMember],
    m: &LocalMeasurement,
) -> Result<Vec<OutcomeBranch>> {
    let embedded = embedded_ops(layout, m)?;
    let mut branches = Vec::with_capacity(embedded.len());
    for (outcome, (local, full)) in m.kraus().iter().zip(&embedded).enumerate() {
        let mut weights = Vec::with_capacity(members.len());
        let mut p_outcome = 0.0;
        for member in members {
            let (q, post) = apply_kraus(layout, &member.state, local, full, m.party())?;
            let w = member.prob * q;
            p_outcome += w;
            weights.push((member.orig, w, post));
        }
        if p_outcome < PRUNE_TOL {
            continue;
        }
        let mut surviving: Vec<IndexedMember> = weights
            .into_iter()
            .filter_map(|(orig, w, post)| {
                let prob = w / p_outcome;
                match post {
                    Some(state) if prob >= PRUNE_TOL => Some(IndexedMember { orig, prob, state }),
                    _ => None,
                }
            })
            .collect();
        let mass: f64 = surviving.iter().map(|s| s.prob).sum();
        for s in &mut surviving {
            s.prob /= mass;
        }
        branches.push(OutcomeBranch {
            outcome,
            prob: p_outcome,
            members: surviving,
        });
    }
    let total: f64 = branches.iter().map(|b| b.prob).sum();
    for b in &mut branches {
        b.prob /= total;
    }
    Ok(branches)
}

/// Applies a single local measurement to an ensemble, producing the outcome
/// probabilities and normalized post-measurement ensembles.
pub fn apply_local_measurement(
    ensemble: &Ensemble,
    m: &LocalMeasurement,
) -> Result<Vec<(f64, Ensemble)>> {
    let members: Vec<IndexedMember> = ensemble
        .members()
        .iter()
        .enumerate()
        .map(|(i, member)| IndexedMember {
            orig: i,
            prob: member.probability,
            state: member.state.clone(),
        })
        .collect();
    measure_members(ensemble.layout(), &members, m)?
        .into_iter()
        .map(|branch| {
            let members = branch
                .members
                .into_iter()
                .map(|im| (im.prob, im.state))
                .collect();
            Ok((branch.prob, Ensemble::new(members)?))
        })
        .collect()
}

/// Terms of the one-round information inequality
/// `I <= chi(Q) - sum_y p_y chi(Q_y)`.
#[derive(Debug, Clone, Serialize)]
pub struct RoundInequalityReport {
    /// Mutual information between member identity and the outcome.
    pub info_gained: Bits,
    pub chi_before: Bits,
    /// `sum_y p_y chi(Q_y)` over post-measurement ensembles.
    pub avg_chi_after: Bits,
    /// `chi_before - avg_chi_after - info_gained`; nonnegative up to noise.
    pub slack: Bits,
}

/// Evaluates all terms of the one-round inequality for a local measurement.
pub fn round_inequality_check(ensemble: &Ensemble, m: &LocalMeasurement) -> Result<RoundInequalityReport> {
    let embedded = embedded_ops(ensemble.layout(), m)?;
    let joint = crate::info::outcome_distribution(ensemble, &embedded)?;
    let info_gained = mutual_information(&joint)?;

    let chi_before = holevo_chi(ensemble)?;
    let mut avg_chi_after = 0.0;
    for (p, post) in apply_local_measurement(ensemble, m)? {
        avg_chi_after += p * holevo_chi(&post)?.0;
    }
    let slack = chi_before.0 - avg_chi_after - info_gained.0;
    Ok(RoundInequalityReport {
        info_gained,
        chi_before,
        avg_chi_after: Bits(avg_chi_after),
        slack: Bits(slack),
    })
}

/// Runs an adaptive protocol and computes the extracted information.
pub fn run_protocol(ensemble: &Ensemble, tree: &ProtocolTree) -> Result<ProtocolRun> {
    if tree.depth() > MAX_PROTOCOL_DEPTH {
        return Err(Error::Protocol(format!(
            "depth {} exceeds the maximum {}",
            tree.depth(),
            MAX_PROTOCOL_DEPTH
        )));
    }
    let members: Vec<IndexedMember> = ensemble
        .members()
        .iter()
        .enumerate()
        .map(|(i, member)| IndexedMember {
            orig: i,
            prob: member.probability,
            state: member.state.clone(),
        })
        .collect();
    let mut rows = Vec::new();
    walk(
        ensemble.layout(),
        &members,
        tree,
        1.0,
        &mut Vec::new(),
        &mut rows,
    )?;
    let transcripts = TranscriptDistribution {
        num_members: ensemble.len(),
        rows,
    };
    let extracted_info = mutual_information(&transcripts.joint())?;
    Ok(ProtocolRun {
        transcripts,
        extracted_info,
    })
}

fn walk(
    layout: &SystemLayout,
    members: &[IndexedMember],
    tree: &ProtocolTree,
    path_prob: f64,
    transcript: &mut Vec<usize>,
    rows: &mut Vec<TranscriptRow>,
) -> Result<()> {
    match tree {
        ProtocolTree::Leaf => {
            for member in members {
                rows.push(TranscriptRow {
                    member: member.orig,
                    transcript: transcript.clone(),
                    probability: path_prob * member.prob,
                });
            }
            Ok(())
        }
        ProtocolTree::Measure {
            measurement,
            children,
        } => {
            let branches = measure_members(layout, members, measurement)?;
            for branch in branches {
                transcript.push(branch.outcome);
                walk(
                    layout,
                    &branch.members,
                    &children[branch.outcome],
                    path_prob * branch.prob,
                    transcript,
                    rows,
                )?;
                transcript.pop();
            }
            Ok(())
        }
    }
}
