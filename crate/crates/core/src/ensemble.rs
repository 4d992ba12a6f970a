//! States, ensembles, and their file format.
//!
//! An [`Ensemble`] is a probability-weighted list of [`QuantumState`]s sharing
//! one [`SystemLayout`]. Every public constructor validates; there is no way
//! to hold an invalid ensemble.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_eigenvalues, partial_trace_pure, ComplexMatrix, SystemLayout, HERMITICITY_TOL,
};

/// Accepted deviation of a pure-state norm from 1 before rejection.
pub const PURE_NORM_WINDOW: f64 = 1e-6;

/// Accepted deviation of a density-matrix trace (and probability sums) from 1.
pub const TRACE_TOL: f64 = 1e-9;

/// Most negative eigenvalue tolerated in a density matrix.
pub const EIGENVALUE_NEG_TOL: f64 = 1e-9;

/// A pure or mixed state tagged with its tensor factorization.
#[derive(Debug, Clone)]
pub struct QuantumState {
    layout: SystemLayout,
    form: StateForm,
}

#[derive(Debug, Clone)]
enum StateForm {
    /// Amplitude vector of length `total_dim`, kept normalized.
    Pure(Vec<Complex64>),
    /// Validated density matrix.
    Mixed(ComplexMatrix),
}

impl QuantumState {
    /// Builds a pure state from amplitudes (big-endian basis ordering).
    ///
    /// The norm must land in `[1 - PURE_NORM_WINDOW, 1 + PURE_NORM_WINDOW]`;
    /// inside the window the stored copy is renormalized exactly.
    pub fn pure(layout: SystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::Shape(format!(
                "expected {} amplitudes for layout {:?}, got {}",
                layout.total_dim(),
                layout.dims(),
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Shape("amplitudes must be finite".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > PURE_NORM_WINDOW {
            return Err(Error::Normalization(norm));
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self {
            layout,
            form: StateForm::Pure(amplitudes),
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: SystemLayout, index: usize) -> Result<Self> {
        let dim = layout.total_dim();
        if index >= dim {
            return Err(Error::Shape(format!(
                "basis index {index} out of range 0..{dim}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Self::pure(layout, amps)
    }

    /// Builds a mixed state, validating Hermiticity, unit trace, and
    /// positivity (eigenvalues above `-EIGENVALUE_NEG_TOL`).
    pub fn mixed(layout: SystemLayout, rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_square() || rho.rows() != layout.total_dim() {
            return Err(Error::Shape(format!(
                "expected a {0}x{0} density matrix for layout {1:?}, got {2}x{3}",
                layout.total_dim(),
                layout.dims(),
                rho.rows(),
                rho.cols()
            )));
        }
        let dev = rho.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::Normalization(trace));
        }
        let lowest = hermitian_eigenvalues(&rho)?[0];
        if lowest < -EIGENVALUE_NEG_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(Self {
            layout,
            form: StateForm::Mixed(rho),
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.form, StateForm::Pure(_))
    }

    /// Amplitudes of a pure state, `None` for a mixed one.
    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.form {
            StateForm::Pure(amps) => Some(amps),
            StateForm::Mixed(_) => None,
        }
    }

    /// Density matrix: the outer product for pure states, the stored matrix
    /// for mixed ones.
    pub fn density(&self) -> ComplexMatrix {
        match &self.form {
            StateForm::Pure(amps) => ComplexMatrix::outer(amps),
            StateForm::Mixed(rho) => rho.clone(),
        }
    }

    /// Reduction onto the kept parties (1-based).
    pub fn reduce(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        match &self.form {
            StateForm::Pure(amps) => partial_trace_pure(amps, &self.layout, keep),
            StateForm::Mixed(rho) => rho.partial_trace(&self.layout, keep),
        }
    }

    /// Largest amplitude/entry difference to another state of the same form.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        match (&self.form, &other.form) {
            (StateForm::Pure(a), StateForm::Pure(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max),
            _ => self.density().max_abs_diff(&other.density()),
        }
    }
}

/// One weighted member of an ensemble.
#[derive(Debug, Clone)]
pub struct Member {
    pub probability: f64,
    pub state: QuantumState,
}

/// Probability-weighted list of states sharing one layout.
#[derive(Debug, Clone)]
pub struct Ensemble {
    layout: SystemLayout,
    members: Vec<Member>,
}

impl Ensemble {
    /// Validates and builds an ensemble: nonempty, a common layout, each
    /// probability in `[0, 1]`, probabilities summing to 1 within
    /// [`TRACE_TOL`].
    pub fn new(members: Vec<(f64, QuantumState)>) -> Result<Self> {
        let layout = match members.first() {
            Some((_, state)) => state.layout().clone(),
            None => {
                return Err(Error::Ensemble(
                    "ensemble must have at least one member".into(),
                ))
            }
        };
        let mut sum = 0.0;
        for (i, (p, state)) in members.iter().enumerate() {
            if !(0.0..=1.0 + TRACE_TOL).contains(p) {
                return Err(Error::Ensemble(format!("member {i} has probability {p}")));
            }
            if state.layout() != &layout {
                return Err(Error::Ensemble(format!(
                    "member {i} has layout {:?}, expected {:?}",
                    state.layout().dims(),
                    layout.dims()
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(Error::Ensemble(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        let members = members
            .into_iter()
            .map(|(probability, state)| Member { probability, state })
            .collect();
        Ok(Self { layout, members })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.probability).collect()
    }

    /// The average state `sum_x p_x rho_x`.
    pub fn average_state(&self) -> ComplexMatrix {
        let dim = self.layout.total_dim();
        let mut avg = ComplexMatrix::zeros(dim, dim);
        for member in &self.members {
            avg = avg.add(&member.state.density().scale_real(member.probability));
        }
        avg
    }

    /// Reduction of member `x` (0-based) onto a single party (1-based).
    pub fn reduce_member(&self, x: usize, party: usize) -> Result<ComplexMatrix> {
        let member = self.members.get(x).ok_or_else(|| {
            Error::Ensemble(format!("member index {x} out of range 0..{}", self.len()))
        })?;
        member.state.reduce(&[party])
    }

    /// Parses the JSON document format.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EnsembleDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    /// Serializes to the JSON document format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EnsembleDoc::from(self)).expect("ensemble serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

/// On-disk ensemble document:
/// `{ "dims": [d1,...], "members": [ { "p": f, "pure": [[re,im],...] }
///   | { "p": f, "mixed": [[[re,im],...],...] } ] }`.
#[derive(Serialize, Deserialize)]
struct EnsembleDoc {
    dims: Vec<usize>,
    members: Vec<MemberDoc>,
}

#[derive(Serialize, Deserialize)]
struct MemberDoc {
    p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pure: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mixed: Option<Vec<Vec<(f64, f64)>>>,
}

impl TryFrom<EnsembleDoc> for Ensemble {
    type Error = Error;

    fn try_from(doc: EnsembleDoc) -> Result<Self> {
        let layout = SystemLayout::new(doc.dims)?;
        let mut members = Vec::with_capacity(doc.members.len());
        for (i, m) in doc.members.into_iter().enumerate() {
            let state = match (m.pure, m.mixed) {
                (Some(amps), None) => {
                    let amps = amps.into_iter().map(|(re, im)| c64(re, im)).collect();
                    QuantumState::pure(layout.clone(), amps)?
                }
                (None, Some(rows)) => {
                    let rows: Vec<Vec<Complex64>> = rows
                        .into_iter()
                        .map(|row| row.into_iter().map(|(re, im)| c64(re, im)).collect())
                        .collect();
                    QuantumState::mixed(layout.clone(), ComplexMatrix::from_rows(&rows)?)?
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "member {i} must have exactly one of \"pure\" or \"mixed\""
                    )))
                }
            };
            members.push((m.p, state));
        }
        Ensemble::new(members)
    }
}

impl From<&Ensemble> for EnsembleDoc {
    fn from(e: &Ensemble) -> Self {
        let members = e
            .members
            .iter()
            .map(|m| match &m.state.form {
                StateForm::Pure(amps) => MemberDoc {
                    p: m.probability,
                    pure: Some(amps.iter().map(|z| (z.re, z.im)).collect()),
                    mixed: None,
                },
                StateForm::Mixed(rho) => MemberDoc {
                    p: m.probability,
                    pure: None,
                    mixed: Some(
                        (0..rho.rows())
                            .map(|i| {
                                (0..rho.cols())
                                    .map(|j| {
                                        let z = rho.get(i, j);
                                        (z.re, z.im)
                                    })
                                    .collect()
                            })
                            .collect(),
                    ),
                },
            })
            .collect();
        EnsembleDoc {
            dims: e.layout.dims().to_vec(),
            members,
        }
    }
}
