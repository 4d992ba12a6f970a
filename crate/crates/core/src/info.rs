//! Entropic quantities, all in bits (base-2 logarithms).

use serde::Serialize;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};

/// Eigenvalues below this are treated as exact zeros before `p log p`.
pub const SPECTRUM_CUTOFF: f64 = 1e-12;

/// Accepted deviation of a probability distribution's sum from 1.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Accepted deviation of `sum_y K_y' K_y` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// A quantity measured in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary entropy `H2(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Shannon entropy of a probability distribution, with `0 log 0 = 0`.
///
/// Entries in `[-1e-12, 0)` are clamped to zero; anything more negative, or a
/// sum off 1 by more than [`DISTRIBUTION_TOL`], is rejected.
pub fn shannon_entropy(probabilities: &[f64]) -> Result<Bits> {
    let mut sum = 0.0;
    let mut entropy = 0.0;
    for &p in probabilities {
        if p < -SPECTRUM_CUTOFF {
            return Err(Error::Distribution(format!("negative probability {p}")));
        }
        let p = p.max(0.0);
        sum += p;
        if p > 0.0 {
            entropy -= p * p.log2();
        }
    }
    if (sum - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::Distribution(format!(
            "probabilities sum to {sum}, expected 1"
        )));
    }
    Ok(Bits(entropy.max(0.0)))
}

/// Von Neumann entropy `S(rho)`: Shannon entropy of the eigenvalue spectrum.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<Bits> {
    let spectrum: Vec<f64> = hermitian_eigenvalues(rho)?
        .into_iter()
        .map(|v| if v < SPECTRUM_CUTOFF { 0.0 } else { v })
        .collect();
    shannon_entropy(&spectrum)
}

/// Entropy of one member state; exact zero on the pure path.
fn member_entropy(member: &crate::ensemble::QuantumState) -> Result<f64> {
    if member.is_pure() {
        Ok(0.0)
    } else {
        Ok(von_neumann_entropy(&member.density())?.0)
    }
}

/// Holevo quantity `chi = S(sum_x p_x rho_x) - sum_x p_x S(rho_x)`.
pub fn holevo_chi(ensemble: &Ensemble) -> Result<Bits> {
    let mixture = von_neumann_entropy(&ensemble.average_state())?.0;
    let mut avg = 0.0;
    for member in ensemble.members() {
        avg += member.probability * member_entropy(&member.state)?;
    }
    let chi = mixture - avg;
    if chi < 0.0 && chi > -DISTRIBUTION_TOL {
        return Ok(Bits(0.0));
    }
    Ok(Bits(chi))
}

/// Classical mutual information of a joint distribution `p[x][y]`, in bits.
///
/// Rows and columns need not be normalized individually; the whole table must
/// sum to 1 within [`DISTRIBUTION_TOL`].
pub fn mutual_information(joint: &[Vec<f64>]) -> Result<Bits> {
    let cols = joint.first().map_or(0, |row| row.len());
    if joint.iter().any(|row| row.len() != cols) {
        return Err(Error::Distribution("ragged joint distribution".into()));
    }
    let mut px = vec![0.0; joint.len()];
    let mut py = vec![0.0; cols];
    let mut total = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            if p < -SPECTRUM_CUTOFF {
                return Err(Error::Distribution(format!(
                    "negative joint probability {p}"
                )));
            }
            let p = p.max(0.0);
            px[x] += p;
            py[y] += p;
            total += p;
        }
    }
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::Distribution(format!(
            "joint distribution sums to {total}"
        )));
    }
    let mut mi = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &p) in row.iter().enumerate() {
            if p > 0.0 && px[x] > 0.0 && py[y] > 0.0 {
                mi += p * (p / (px[x] * py[y])).log2();
            }
        }
    }
    Ok(Bits(mi.max(0.0)))
}

/// Joint distribution `p(x, y) = p_x tr(K_y rho_x K_y')` of member identity
/// and measurement outcome, for one Kraus operator per outcome acting on the
/// whole system.
pub fn outcome_distribution(
    ensemble: &Ensemble,
    kraus_ops: &[ComplexMatrix],
) -> Result<Vec<Vec<f64>>> {
    let dim = ensemble.layout().total_dim();
    if kraus_ops.is_empty() {
        return Err(Error::Povm(f64::INFINITY));
    }
    if kraus_ops.iter().any(|k| k.rows() != dim || k.cols() != dim) {
        return Err(Error::Shape(format!("Kraus operators must be {dim}x{dim}")));
    }
    let mut completeness = ComplexMatrix::zeros(dim, dim);
    for k in kraus_ops {
        completeness = completeness.add(&k.adjoint().matmul(k));
    }
    let dev = completeness.max_abs_diff(&ComplexMatrix::identity(dim));
    if dev > COMPLETENESS_TOL {
        return Err(Error::Povm(dev));
    }
    let joint = ensemble
        .members()
        .iter()
        .map(|member| {
            kraus_ops
                .iter()
                .map(|k| {
                    let q = match member.state.amplitudes() {
                        Some(amps) => k.matvec(amps).iter().map(|z| z.norm_sqr()).sum::<f64>(),
                        None => {
                            let rho = member.state.density();
                            k.matmul(&rho).matmul(&k.adjoint()).trace().re
                        }
                    };
                    member.probability * q.max(0.0)
                })
                .collect()
        })
        .collect();
    Ok(joint)
}

/// Mutual information between ensemble identity and the outcome of a global
/// measurement given by one Kraus operator per outcome.
pub fn outcome_mutual_information(
    ensemble: &Ensemble,
    kraus_ops: &[ComplexMatrix],
) -> Result<Bits> {
    mutual_information(&outcome_distribution(ensemble, kraus_ops)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::QuantumState;
    use crate::linalg::{c64, SystemLayout};
    use num_complex::Complex64;

    #[test]
    fn shannon_basic_values() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap().0 - 1.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap().0, 0.0);
        // oracle: -(1/3)log2(1/3) - (2/3)log2(2/3) = log2(3) - 2/3
        let expected = 3.0f64.log2() - 2.0 / 3.0;
        let got = shannon_entropy(&[1.0 / 3.0, 2.0 / 3.0]).unwrap().0;
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.918296).abs() < 1e-6);
    }

    #[test]
    fn shannon_rejects_bad_distributions() {
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        // tiny negatives are clamped
        assert!(shannon_entropy(&[1.0, -1e-13]).is_ok());
    }

    #[test]
    fn von_neumann_pure_and_mixed() {
        let layout = SystemLayout::qubits(2).unwrap();
        let pure = QuantumState::basis(layout, 1).unwrap().density();
        assert!(von_neumann_entropy(&pure).unwrap().0.abs() < 1e-9);

        let mixed = ComplexMatrix::diagonal_real(&[0.25; 4]);
        assert!((von_neumann_entropy(&mixed).unwrap().0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn von_neumann_binary_spectrum() {
        // oracle: binary entropy at p = (1 + a^2)/3 with a = 0.3
        let a: f64 = 0.3;
        let p = (1.0 + a * a) / 3.0;
        let rho = ComplexMatrix::diagonal_real(&[p, 1.0 - p]);
        let got = von_neumann_entropy(&rho).unwrap().0;
        assert!((got - binary_entropy(p)).abs() < 1e-12);
        assert!((got - 0.945).abs() < 2e-3);
    }

    #[test]
    fn holevo_of_orthogonal_pure_states_is_shannon() {
        let layout = SystemLayout::new(vec![4]).unwrap();
        let probs = [0.1, 0.2, 0.3, 0.4];
        let members = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, QuantumState::basis(layout.clone(), i).unwrap()))
            .collect();
        let e = Ensemble::new(members).unwrap();
        let chi = holevo_chi(&e).unwrap().0;
        let h = shannon_entropy(&probs).unwrap().0;
        assert!((chi - h).abs() < 1e-9);
    }

    #[test]
    fn holevo_single_member_is_zero() {
        let layout = SystemLayout::qubits(1).unwrap();
        let e = Ensemble::new(vec![(1.0, QuantumState::basis(layout, 0).unwrap())]).unwrap();
        assert_eq!(holevo_chi(&e).unwrap().0, 0.0);
    }

    #[test]
    fn mutual_information_extremes() {
        // independent
        let independent = vec![vec![0.25, 0.25], vec![0.25, 0.25]];
        assert!(mutual_information(&independent).unwrap().0 < 1e-12);
        // perfectly correlated
        let correlated = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        assert!((mutual_information(&correlated).unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_mi_identity_measurement_is_zero() {
        let layout = SystemLayout::qubits(1).unwrap();
        let e = Ensemble::new(vec![
            (0.5, QuantumState::basis(layout.clone(), 0).unwrap()),
            (0.5, QuantumState::basis(layout, 1).unwrap()),
        ])
        .unwrap();
        let mi = outcome_mutual_information(&e, &[ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(mi.0, 0.0);
    }

    #[test]
    fn outcome_mi_perfect_discrimination() {
        let layout = SystemLayout::qubits(1).unwrap();
        let e = Ensemble::new(vec![
            (0.5, QuantumState::basis(layout.clone(), 0).unwrap()),
            (0.5, QuantumState::basis(layout, 1).unwrap()),
        ])
        .unwrap();
        let projectors = [
            ComplexMatrix::diagonal_real(&[1.0, 0.0]),
            ComplexMatrix::diagonal_real(&[0.0, 1.0]),
        ];
        let mi = outcome_mutual_information(&e, &projectors).unwrap();
        assert!((mi.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_mi_zero_plus_ensemble() {
        // {|0>, |+>} with equal priors, measured in the computational basis.
        // Enumerating the joint by hand: p(0,0)=1/2, p(0,1)=0, p(1,0)=1/4,
        // p(1,1)=1/4, so I = H2(1/4) - 1/2.
        let layout = SystemLayout::qubits(1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = QuantumState::pure(layout.clone(), vec![c64(s, 0.0), c64(s, 0.0)]).unwrap();
        let e = Ensemble::new(vec![
            (0.5, QuantumState::basis(layout, 0).unwrap()),
            (0.5, plus),
        ])
        .unwrap();
        let projectors = [
            ComplexMatrix::diagonal_real(&[1.0, 0.0]),
            ComplexMatrix::diagonal_real(&[0.0, 1.0]),
        ];
        let mi = outcome_mutual_information(&e, &projectors).unwrap().0;
        let oracle = mutual_information(&[vec![0.5, 0.0], vec![0.25, 0.25]])
            .unwrap()
            .0;
        assert!((mi - oracle).abs() < 1e-12);
        assert!((mi - (binary_entropy(0.25) - 0.5)).abs() < 1e-12);
        assert!((mi - 0.3112781244591328).abs() < 1e-12);
    }

    #[test]
    fn outcome_mi_rejects_incomplete_povm() {
        let layout = SystemLayout::qubits(1).unwrap();
        let e = Ensemble::new(vec![(1.0, QuantumState::basis(layout, 0).unwrap())]).unwrap();
        let half = [ComplexMatrix::diagonal_real(&[1.0, 0.0])];
        assert!(matches!(
            outcome_mutual_information(&e, &half),
            Err(Error::Povm(_))
        ));
    }

    #[test]
    fn plain_holevo_bound_on_projective_measurements() {
        // chi upper-bounds the extracted information for any measurement
        let layout = SystemLayout::qubits(1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = QuantumState::pure(layout.clone(), vec![c64(s, 0.0), c64(s, 0.0)]).unwrap();
        let minus = QuantumState::pure(layout.clone(), vec![c64(s, 0.0), c64(-s, 0.0)]).unwrap();
        let zero = QuantumState::basis(layout.clone(), 0).unwrap();
        let e = Ensemble::new(vec![(0.4, zero), (0.3, plus), (0.3, minus)]).unwrap();
        let chi = holevo_chi(&e).unwrap().0;
        let bases: [Vec<Complex64>; 2] = [
            vec![c64(1.0, 0.0), Complex64::ZERO],
            vec![c64(s, 0.0), c64(0.0, s)],
        ];
        for b0 in bases {
            let b1 = vec![-b0[1].conj(), b0[0].conj()];
            let ops = [ComplexMatrix::outer(&b0), ComplexMatrix::outer(&b1)];
            let mi = outcome_mutual_information(&e, &ops).unwrap().0;
            assert!(mi <= chi + 1e-9);
        }
    }
}
