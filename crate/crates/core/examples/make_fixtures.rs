//! Regenerates the JSON fixtures under `fixtures/` at the workspace root.
//!
//! Usage: `cargo run -p qlocc --example make_fixtures [output-dir]`

use qlocc::linalg::{c64, ComplexMatrix};
use qlocc::{basis_protocol, bell_ensemble, build_e3, Ensemble, QuantumState, SystemLayout};

fn main() -> qlocc::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    std::fs::create_dir_all(&dir)?;
    let path = |name: &str| format!("{dir}/{name}");

    build_e3().save(path("nine_state_ensemble.json"))?;
    bell_ensemble().save(path("bell_ensemble.json"))?;

    let layout = SystemLayout::qubits(2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![c64(0.0, 0.0); 4];
    amps[0b00] = c64(s, 0.0);
    amps[0b11] = c64(s, 0.0);
    let bell = QuantumState::pure(layout.clone(), amps)?;
    Ensemble::new(vec![(1.0, bell)])?.save(path("bell_state.json"))?;

    basis_protocol(&SystemLayout::qubits(4)?, &[1, 2, 3, 4])?
        .save(path("readout_protocol_4q.json"))?;

    let paulis = [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(1.0, 0.0)],
            vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        ])?,
        ComplexMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ])?,
        ComplexMatrix::diagonal_real(&[1.0, -1.0]),
    ];
    let entries: Vec<serde_json::Value> = paulis
        .iter()
        .map(|u| {
            let rows: Vec<Vec<[f64; 2]>> = (0..u.rows())
                .map(|i| {
                    (0..u.cols())
                        .map(|j| [u.get(i, j).re, u.get(i, j).im])
                        .collect()
                })
                .collect();
            serde_json::json!({ "p": 0.25, "unitary": rows })
        })
        .collect();
    let doc = serde_json::json!({ "encodings": entries });
    std::fs::write(
        path("pauli_encodings.json"),
        serde_json::to_string_pretty(&doc).expect("fixture serializes"),
    )?;

    println!("fixtures written to {dir}/");
    Ok(())
}
