//! Property suites for the toolkit's structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qlocc::catalog;
use qlocc::linalg::{c64, hermitian_eigenvalues, ComplexMatrix, SystemLayout};
use qlocc::random::{
    random_basis_measurement, random_ensemble, random_probabilities, random_protocol,
    random_pure_state, random_unitary, seeded_rng,
};
use qlocc::sim::{apply_local_measurement, run_protocol, LocalMeasurement, ProtocolTree};
use qlocc::{
    build_encoding_ensemble, complementarity_check, dense_coding_bound, holevo_chi, locc_bound,
    mutual_information, outcome_mutual_information, pure_squashed_entanglement,
    von_neumann_entropy, Ensemble,
};

fn matrix_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |entries| {
        ComplexMatrix::new(
            n,
            n,
            entries.into_iter().map(|(re, im)| c64(re, im)).collect(),
        )
        .expect("finite entries")
    })
}

proptest! {
    #[test]
    fn kron_is_associative(a in matrix_strategy(2), b in matrix_strategy(3), m in matrix_strategy(2)) {
        let left = a.kron(&b).unwrap().kron(&m).unwrap();
        let right = a.kron(&b.kron(&m).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn partial_trace_is_linear(
        m in matrix_strategy(8),
        n in matrix_strategy(8),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
    ) {
        let layout = SystemLayout::qubits(3).unwrap();
        for keep in [vec![1], vec![3], vec![1, 2]] {
            let combo = m.scale_real(alpha).add(&n.scale_real(beta));
            let direct = combo.partial_trace(&layout, &keep).unwrap();
            let assembled = m
                .partial_trace(&layout, &keep).unwrap().scale_real(alpha)
                .add(&n.partial_trace(&layout, &keep).unwrap().scale_real(beta));
            prop_assert!(direct.max_abs_diff(&assembled) < 1e-12);
        }
    }

    #[test]
    fn shannon_entropy_is_bounded(probs in proptest::collection::vec(1e-6f64..1.0, 2..8)) {
        let total: f64 = probs.iter().sum();
        let normalized: Vec<f64> = probs.iter().map(|p| p / total).collect();
        let h = qlocc::shannon_entropy(&normalized).unwrap().0;
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (normalized.len() as f64).log2() + 1e-9);
    }

    #[test]
    fn ensemble_json_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 3]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.4);
        let back = Ensemble::from_json(&e.to_json()).unwrap();
        for (a, b) in e.members().iter().zip(back.members()) {
            prop_assert!((a.probability - b.probability).abs() < 1e-15);
            prop_assert!(a.state.max_abs_diff(&b.state) < 1e-15);
        }
    }

    #[test]
    fn produced_density_matrices_have_unit_spectra(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2, 3]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.5);
        for matrix in [e.average_state(), e.members()[0].state.reduce(&[2, 3]).unwrap()] {
            let spectrum = hermitian_eigenvalues(&matrix).unwrap();
            prop_assert!(spectrum.iter().all(|&v| v >= -1e-9));
            let total: f64 = spectrum.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn average_state_commutes_with_reduction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 3]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.3);
        for party in 1..=2 {
            let reduced_avg = e.average_state().partial_trace(&layout, &[party]).unwrap();
            let dim = reduced_avg.rows();
            let mut avg_reduced = ComplexMatrix::zeros(dim, dim);
            for m in e.members() {
                avg_reduced = avg_reduced.add(&m.state.reduce(&[party]).unwrap().scale_real(m.probability));
            }
            prop_assert!(reduced_avg.max_abs_diff(&avg_reduced) < 1e-12);
        }
    }

    #[test]
    fn entropy_is_within_range_and_subadditive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 3]).unwrap();
        let state = if rng.random::<bool>() {
            qlocc::random::random_mixed_state(&mut rng, &layout)
        } else {
            random_pure_state(&mut rng, &layout)
        };
        let rho = state.density();
        let joint = von_neumann_entropy(&rho).unwrap().0;
        prop_assert!(joint >= 0.0 && joint <= (rho.rows() as f64).log2() + 1e-9);
        let s_a = von_neumann_entropy(&state.reduce(&[1]).unwrap()).unwrap().0;
        let s_b = von_neumann_entropy(&state.reduce(&[2]).unwrap()).unwrap().0;
        prop_assert!(joint <= s_a + s_b + 1e-9);
    }

    #[test]
    fn global_measurements_respect_holevo(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.3);
        let u = random_unitary(&mut rng, layout.total_dim());
        let kraus: Vec<ComplexMatrix> = (0..layout.total_dim())
            .map(|j| {
                let column: Vec<Complex64> = (0..layout.total_dim()).map(|i| u.get(i, j)).collect();
                ComplexMatrix::outer(&column)
            })
            .collect();
        let info = outcome_mutual_information(&e, &kraus).unwrap().0;
        let chi = holevo_chi(&e).unwrap().0;
        prop_assert!(info <= chi + 1e-9);
    }

    #[test]
    fn bound_is_member_order_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2, 2]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 4, 0.25);
        let bound = locc_bound(&e).unwrap().bound_bits.0;
        let mut reordered: Vec<_> = e
            .members()
            .iter()
            .map(|m| (m.probability, m.state.clone()))
            .collect();
        reordered.rotate_left(2);
        reordered.swap(0, 1);
        let shuffled = Ensemble::new(reordered).unwrap();
        let shuffled_bound = locc_bound(&shuffled).unwrap().bound_bits.0;
        prop_assert!((bound - shuffled_bound).abs() < 1e-12);
    }

    #[test]
    fn pure_bound_dominates_mean_form(seed in any::<u64>()) {
        // max over parties >= mean over parties, so the bound never exceeds
        // sum_n S(rho^Bn) - sum_x p_x E_sq(psi_x)/N
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2, 2]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.0);
        let report = locc_bound(&e).unwrap();
        let party_sum: f64 = report.party_entropies.iter().map(|b| b.0).sum();
        let key_term: f64 = e
            .members()
            .iter()
            .map(|m| m.probability * pure_squashed_entanglement(&m.state).unwrap().0 / 3.0)
            .sum();
        prop_assert!(report.bound_bits.0 <= party_sum - key_term + 1e-9);
        let rep = complementarity_check(&e).unwrap();
        prop_assert!(rep.holds);
    }

    #[test]
    fn transcript_probabilities_are_normalized(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 3]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.0);
        let tree = random_protocol(&mut rng, &layout, 3);
        let run = run_protocol(&e, &tree).unwrap();
        prop_assert!((run.transcripts.total_probability() - 1.0).abs() < 1e-9);
        prop_assert!(run.transcripts.rows.iter().all(|r| r.probability >= 0.0));
    }

    #[test]
    fn measurement_does_not_move_distant_reductions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2, 2]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.3);
        let measured = rng.random_range(1..=3);
        let m = random_basis_measurement(&mut rng, &layout, measured);
        let outcomes = apply_local_measurement(&e, &m).unwrap();
        let dim = layout.total_dim();
        let mut post_avg = ComplexMatrix::zeros(dim, dim);
        for (p, post) in &outcomes {
            post_avg = post_avg.add(&post.average_state().scale_real(*p));
        }
        for party in (1..=3).filter(|&p| p != measured) {
            let before = e.average_state().partial_trace(&layout, &[party]).unwrap();
            let after = post_avg.partial_trace(&layout, &[party]).unwrap();
            prop_assert!(before.max_abs_diff(&after) < 1e-10);
        }
    }

    #[test]
    fn encoding_members_share_receiver_reductions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = SystemLayout::new(vec![2, 2]).unwrap();
        let base = random_pure_state(&mut rng, &layout);
        let probs = random_probabilities(&mut rng, 3);
        let encodings: Vec<(f64, ComplexMatrix)> = probs
            .into_iter()
            .map(|p| (p, random_unitary(&mut rng, 2)))
            .collect();
        let e = build_encoding_ensemble(&base, &encodings).unwrap();
        let reference = base.reduce(&[2]).unwrap();
        for m in e.members() {
            prop_assert!(m.state.reduce(&[2]).unwrap().max_abs_diff(&reference) < 1e-10);
        }
    }
}

#[test]
fn single_party_bound_collapses_to_chi() {
    let mut rng = seeded_rng();
    for _ in 0..50 {
        let layout = SystemLayout::new(vec![3]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.7);
        let bound = locc_bound(&e).unwrap().bound_bits.0;
        let chi = holevo_chi(&e).unwrap().0;
        assert!((bound - chi).abs() < 1e-12);
    }
}

#[test]
fn extracted_info_matches_chain_rule() {
    // re-derive the protocol's information as a sum of per-round gains,
    // tracking member identity positionally (no pruning occurs for these
    // generic states)
    let mut rng = seeded_rng();
    for _ in 0..25 {
        let layout = SystemLayout::new(vec![2, 2]).unwrap();
        let e = random_ensemble(&mut rng, &layout, 3, 0.0);
        let tree = random_protocol(&mut rng, &layout, 3);
        let run = run_protocol(&e, &tree).unwrap();
        let chained = chain_info(&e, &tree);
        assert!(
            (run.extracted_info.0 - chained).abs() < 1e-9,
            "transcript MI {} vs chained {}",
            run.extracted_info.0,
            chained
        );
    }
}

fn chain_info(e: &Ensemble, tree: &ProtocolTree) -> f64 {
    match tree {
        ProtocolTree::Leaf => 0.0,
        ProtocolTree::Measure {
            measurement,
            children,
        } => {
            let outcomes = apply_local_measurement(e, measurement).unwrap();
            // joint of (member position, outcome); valid because no member
            // is pruned for generic states
            let joint: Vec<Vec<f64>> = (0..e.len())
                .map(|x| {
                    outcomes
                        .iter()
                        .map(|(p, post)| {
                            assert_eq!(post.len(), e.len(), "pruning would break tracking");
                            p * post.members()[x].probability
                        })
                        .collect()
                })
                .collect();
            let here = mutual_information(&joint).unwrap().0;
            let deeper: f64 = outcomes
                .iter()
                .enumerate()
                .map(|(y, (p, post))| p * chain_info(post, &children[y]))
                .sum();
            here + deeper
        }
    }
}

#[test]
fn dense_coding_floor_on_pauli_families() {
    // maximally mixed receiver reductions with pure members keep the
    // capacity bound at or above the sender's classical floor
    let paulis: [ComplexMatrix; 4] = [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ONE, Complex64::ZERO],
        ])
        .unwrap(),
        ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), Complex64::ZERO],
        ])
        .unwrap(),
        ComplexMatrix::diagonal_real(&[1.0, -1.0]),
    ];
    let layout = SystemLayout::qubits(2).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::ZERO; 4];
    amps[0b00] = c64(s, 0.0);
    amps[0b11] = c64(s, 0.0);
    let bell = qlocc::QuantumState::pure(layout, amps).unwrap();

    for weights in [[0.25; 4], [0.4, 0.2, 0.2, 0.2], [0.1, 0.2, 0.3, 0.4]] {
        let encodings: Vec<(f64, ComplexMatrix)> = weights
            .iter()
            .zip(&paulis)
            .map(|(&p, u)| (p, u.clone()))
            .collect();
        let e = build_encoding_ensemble(&bell, &encodings).unwrap();
        let bound = dense_coding_bound(&e, &[2], &[2]).unwrap().0;
        assert!(
            bound >= 1.0 - 1e-9,
            "bound {bound} fell below the sender floor"
        );
    }
}

#[test]
fn e2_interior_protocols_stay_under_bound() {
    // concrete protocols on the catalog family, against its certificate
    let e = catalog::build_e2(0.5).unwrap();
    let bound = locc_bound(&e).unwrap().bound_bits.0;
    let layout = e.layout().clone();
    let all_parties = qlocc::basis_protocol(&layout, &[1, 2, 3]).unwrap();
    let run = run_protocol(&e, &all_parties).unwrap();
    assert!(run.extracted_info.0 <= bound + 1e-9);

    let mut rng = seeded_rng();
    for _ in 0..20 {
        let tree = random_protocol(&mut rng, &layout, 4);
        let run = run_protocol(&e, &tree).unwrap();
        assert!(run.extracted_info.0 <= bound + 1e-9);
    }
}

#[test]
fn e3_full_readout_matches_enumeration_oracle() {
    // measuring every qubit of the nine-state family in the computational
    // basis: the transcript distribution must match the 16-outcome
    // enumeration p(x, y) = p_x |<y|psi_x>|^2, and the extracted information
    // must respect the certificate bound of 3 bits
    let e = catalog::build_e3();
    let oracle: Vec<Vec<f64>> = e
        .members()
        .iter()
        .map(|m| {
            m.state
                .amplitudes()
                .unwrap()
                .iter()
                .map(|amp| m.probability * amp.norm_sqr())
                .collect()
        })
        .collect();
    let oracle_info = mutual_information(&oracle).unwrap().0;

    let tree = qlocc::basis_protocol(e.layout(), &[1, 2, 3, 4]).unwrap();
    let run = run_protocol(&e, &tree).unwrap();
    // transcripts are bit strings; compare row by row against the oracle
    for row in &run.transcripts.rows {
        let index = row
            .transcript
            .iter()
            .fold(0usize, |acc, &bit| acc * 2 + bit);
        assert!(
            (row.probability - oracle[row.member][index]).abs() < 1e-12,
            "member {} transcript {:?}",
            row.member,
            row.transcript
        );
    }
    assert!((run.extracted_info.0 - oracle_info).abs() < 1e-9);

    let bound = locc_bound(&e).unwrap().bound_bits.0;
    assert!(run.extracted_info.0 <= bound + 1e-9);
    assert!((bound - 3.0).abs() < 1e-9);
}

#[test]
fn single_kraus_identity_has_no_effect_anywhere() {
    let e = catalog::bell_ensemble();
    let m = LocalMeasurement::new(1, vec![ComplexMatrix::identity(2)]).unwrap();
    let rep = qlocc::round_inequality_check(&e, &m).unwrap();
    assert!(rep.info_gained.0.abs() < 1e-12);
    assert!(rep.slack.0.abs() < 1e-12);
}
