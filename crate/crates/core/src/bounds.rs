//! Upper bounds on locally accessible information and distributed
//! dense-coding capacity.
//!
//! The central quantity, computed by [`locc_bound`], is
//!
//! ```text
//! I_LOCC <= S(rho^B1) + ... + S(rho^BN) - max_Z sum_x p_x S(rho_x^Z)
//! ```
//!
//! where `rho^Bn` are single-party reductions of the ensemble average and the
//! max runs over the parties. When the bound falls below the Holevo quantity
//! of the ensemble, no LOCC protocol can extract all of the information the
//! ensemble carries, which certifies LOCC indistinguishability.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, QuantumState};
use crate::error::{Error, Result};
use crate::info::{holevo_chi, von_neumann_entropy, Bits};
use crate::linalg::{c64, ComplexMatrix};

/// Margin by which the bound must undercut chi before we claim a certificate.
pub const VERDICT_MARGIN: f64 = 1e-9;

/// Accepted deviation of `U'U` from the identity for encoding unitaries.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Outcome of comparing the bound against the ensemble's Holevo information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The bound sits strictly below chi: no LOCC protocol can recover all
    /// of the ensemble's information.
    ProvablyIndistinguishable,
    /// The bound does not separate from chi; nothing is certified.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::ProvablyIndistinguishable => write!(f, "ProvablyIndistinguishable"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Full decomposition of the locally-accessible-information bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// `S(rho^Bn)` for each party, from the average state.
    pub party_entropies: Vec<Bits>,
    /// `sum_x p_x S(rho_x^Z)` for each party `Z`.
    pub avg_member_entropy_per_party: Vec<Bits>,
    /// 1-based party achieving the maximum (ties break to the lowest index).
    pub argmax_party: usize,
    /// The bound itself.
    pub bound_bits: Bits,
    /// Holevo information of the ensemble.
    pub chi_bits: Bits,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Evaluates the locally-accessible-information bound for an ensemble.
pub fn locc_bound(ensemble: &Ensemble) -> Result<BoundReport> {
    let layout = ensemble.layout();
    let average = ensemble.average_state();

    let mut party_entropies = Vec::with_capacity(layout.num_parties());
    for party in layout.parties() {
        let reduction = average.partial_trace(layout, &[party])?;
        party_entropies.push(von_neumann_entropy(&reduction)?);
    }

    let mut avg_member_entropy_per_party = Vec::with_capacity(layout.num_parties());
    for party in layout.parties() {
        let mut avg = 0.0;
        for member in ensemble.members() {
            let reduction = member.state.reduce(&[party])?;
            avg += member.probability * von_neumann_entropy(&reduction)?.0;
        }
        avg_member_entropy_per_party.push(Bits(avg));
    }

    let (argmax_idx, max_term) = avg_member_entropy_per_party.iter().enumerate().fold(
        (0usize, f64::NEG_INFINITY),
        |(bi, bv), (i, v)| {
            if v.0 > bv {
                (i, v.0)
            } else {
                (bi, bv)
            }
        },
    );

    let total: f64 = party_entropies.iter().map(|b| b.0).sum();
    let bound = Bits(total - max_term);
    let chi = holevo_chi(ensemble)?;
    let verdict = if bound.0 < chi.0 - VERDICT_MARGIN {
        Verdict::ProvablyIndistinguishable
    } else {
        Verdict::Inconclusive
    };
    Ok(BoundReport {
        party_entropies,
        avg_member_entropy_per_party,
        argmax_party: argmax_idx + 1,
        bound_bits: bound,
        chi_bits: chi,
        verdict,
    })
}

/// The two-party special case; requires exactly two parties.
pub fn bipartite_bound(ensemble: &Ensemble) -> Result<Bits> {
    if ensemble.layout().num_parties() != 2 {
        return Err(Error::Arity(format!(
            "bipartite bound requires 2 parties, got {}",
            ensemble.layout().num_parties()
        )));
    }
    Ok(locc_bound(ensemble)?.bound_bits)
}

/// Squashed entanglement of a pure multipartite state: the sum of its
/// single-party reduction entropies.
pub fn pure_squashed_entanglement(state: &QuantumState) -> Result<Bits> {
    if !state.is_pure() {
        return Err(Error::Purity);
    }
    let mut total = 0.0;
    for party in state.layout().parties() {
        total += von_neumann_entropy(&state.reduce(&[party])?)?.0;
    }
    Ok(Bits(total))
}

/// Result of the complementarity check for pure-member ensembles.
///
/// The distillable key `K_D` is not computable in general; it is replaced by
/// its upper bound `E_sq / N`, so `lhs = bound + sum_x p_x E_sq(psi_x) / N`
/// is the strongest checkable left-hand side.
#[derive(Debug, Clone, Serialize)]
pub struct ComplementarityReport {
    pub lhs_bits: Bits,
    /// `log2(d_1 ... d_N)`, the total capacity `D`.
    pub capacity_bits: Bits,
    pub holds: bool,
}

/// Checks `bound + sum_x p_x E_sq(psi_x)/N <= log2(d_1...d_N)` for an
/// ensemble of pure states.
pub fn complementarity_check(ensemble: &Ensemble) -> Result<ComplementarityReport> {
    if ensemble.members().iter().any(|m| !m.state.is_pure()) {
        return Err(Error::Purity);
    }
    let n = ensemble.layout().num_parties() as f64;
    let bound = locc_bound(ensemble)?.bound_bits.0;
    let mut key_term = 0.0;
    for member in ensemble.members() {
        key_term += member.probability * pure_squashed_entanglement(&member.state)?.0 / n;
    }
    let lhs = bound + key_term;
    let capacity = ensemble.layout().capacity_bits();
    Ok(ComplementarityReport {
        lhs_bits: Bits(lhs),
        capacity_bits: Bits(capacity),
        holds: lhs <= capacity + VERDICT_MARGIN,
    })
}

/// Capacity bound for distributed dense coding.
///
/// `post_encoding` is the ensemble of globally shared states after the
/// senders applied their local encodings. `sender_dims` are the sender
/// Hilbert-space dimensions (they contribute `sum_i log2 d_Ai`), and
/// `receivers` names the receiver parties (1-based) within the ensemble's
/// layout. The formula is evaluated literally:
///
/// ```text
/// C <= sum_i log2 d_Ai + sum_{j in receivers} S(rho^Bj)
///      - max_{Z in receivers} sum_x p_x S(rho_x^Z)
/// ```
pub fn dense_coding_bound(
    post_encoding: &Ensemble,
    sender_dims: &[usize],
    receivers: &[usize],
) -> Result<Bits> {
    if receivers.is_empty() {
        return Err(Error::Arity(
            "at least one receiver party is required".into(),
        ));
    }
    if let Some(&d) = sender_dims.iter().find(|&&d| d == 0) {
        return Err(Error::Domain(format!(
            "sender dimension must be positive, got {d}"
        )));
    }
    let layout = post_encoding.layout();
    let mut seen = vec![false; layout.num_parties()];
    for &party in receivers {
        let idx = layout.party_index(party)?;
        if seen[idx] {
            return Err(Error::Layout(format!(
                "receiver party {party} listed twice"
            )));
        }
        seen[idx] = true;
    }

    let sender_bits: f64 = sender_dims.iter().map(|&d| (d as f64).log2()).sum();
    let average = post_encoding.average_state();
    let mut receiver_bits = 0.0;
    let mut max_member_term = f64::NEG_INFINITY;
    for &party in receivers {
        let reduction = average.partial_trace(layout, &[party])?;
        receiver_bits += von_neumann_entropy(&reduction)?.0;
        let mut member_term = 0.0;
        for member in post_encoding.members() {
            let r = member.state.reduce(&[party])?;
            member_term += member.probability * von_neumann_entropy(&r)?.0;
        }
        max_member_term = max_member_term.max(member_term);
    }
    Ok(Bits(sender_bits + receiver_bits - max_member_term))
}

/// Applies a set of weighted local encodings `(p_x, U_x)` to a shared base
/// state, producing the post-encoding ensemble `{p_x, (U_x (x) I) rho
/// (U_x (x) I)'}`. Each unitary must act on a leading block of parties:
/// its dimension has to match `d_1 * ... * d_k` for some `k`.
pub fn build_encoding_ensemble(
    base: &QuantumState,
    encodings: &[(f64, ComplexMatrix)],
) -> Result<Ensemble> {
    let layout = base.layout();
    let mut members = Vec::with_capacity(encodings.len());
    for (p, unitary) in encodings {
        if !unitary.is_square() {
            return Err(Error::Shape(format!(
                "encoding operator must be square, got {}x{}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let sender_dim = unitary.rows();
        let mut prefix = 1usize;
        let mut matched = false;
        for &d in layout.dims() {
            if prefix == sender_dim {
                matched = true;
                break;
            }
            prefix *= d;
        }
        matched = matched || prefix == sender_dim;
        if !matched {
            return Err(Error::Shape(format!(
                "encoding dimension {} does not match any leading block of {:?}",
                sender_dim,
                layout.dims()
            )));
        }
        let dev = unitary.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(Error::Unitarity(dev));
        }

        let rest = layout.total_dim() / sender_dim;
        let state = match base.amplitudes() {
            Some(amps) => {
                let mut out = vec![c64(0.0, 0.0); amps.len()];
                for a in 0..sender_dim {
                    for r in 0..rest {
                        let mut acc = c64(0.0, 0.0);
                        for b in 0..sender_dim {
                            acc += unitary.get(a, b) * amps[b * rest + r];
                        }
                        out[a * rest + r] = acc;
                    }
                }
                QuantumState::pure(layout.clone(), out)?
            }
            None => {
                let full = unitary.kron(&ComplexMatrix::identity(rest))?;
                let rho = full.matmul(&base.density()).matmul(&full.adjoint());
                QuantumState::mixed(layout.clone(), rho)?
            }
        };
        members.push((*p, state));
    }
    Ensemble::new(members)
}

/// Encoding-set document: `{ "encodings": [ { "p": f, "unitary":
/// [[[re,im],...],...] }, ... ] }`.
#[derive(Serialize, Deserialize)]
struct EncodingDoc {
    encodings: Vec<EncodingEntry>,
}

#[derive(Serialize, Deserialize)]
struct EncodingEntry {
    p: f64,
    unitary: Vec<Vec<(f64, f64)>>,
}

/// Parses a weighted encoding set from its JSON document.
pub fn encodings_from_json(text: &str) -> Result<Vec<(f64, ComplexMatrix)>> {
    let doc: EncodingDoc = serde_json::from_str(text)?;
    doc.encodings
        .into_iter()
        .map(|e| {
            let rows: Vec<Vec<_>> = e
                .unitary
                .into_iter()
                .map(|row| row.into_iter().map(|(re, im)| c64(re, im)).collect())
                .collect();
            Ok((e.p, ComplexMatrix::from_rows(&rows)?))
        })
        .collect()
}

pub fn load_encodings(path: impl AsRef<Path>) -> Result<Vec<(f64, ComplexMatrix)>> {
    encodings_from_json(&std::fs::read_to_string(path)?)
}
