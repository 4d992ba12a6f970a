//! Built-in ensemble families, parameter sweeps, and the threshold finder.
//!
//! Three families are provided: `e1` (three tripartite two-term states with a
//! sign pair), `e2` (six tripartite two-term states, a GHZ-like orthonormal
//! shell at `a^2 = 1/2`), and `e3` (nine orthogonal four-qubit states whose
//! bound certifies LOCC indistinguishability). `e2` also has closed forms for
//! its bound and information, used to cross-check the numerical path and to
//! locate where the bound dips below the carried information.

use num_complex::Complex64;

use crate::bounds::locc_bound;
use crate::ensemble::{Ensemble, QuantumState};
use crate::error::{Error, Result};
use crate::info::{holevo_chi, Bits};
use crate::linalg::{c64, SystemLayout};

/// Pure state from sparse (basis index, real amplitude) pairs.
fn sparse_pure(layout: &SystemLayout, terms: &[(usize, f64)]) -> QuantumState {
    let mut amps = vec![Complex64::ZERO; layout.total_dim()];
    for &(idx, v) in terms {
        amps[idx] = c64(v, 0.0);
    }
    QuantumState::pure(layout.clone(), amps).expect("catalog state is normalized")
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::Domain(format!(
            "{name} = {value}, expected 0 <= {name} <= 1"
        )));
    }
    Ok(())
}

/// Three equiprobable tripartite states
/// `a|000> +- b|111>` and `c|001> + d|110>`, with `b = sqrt(1 - a^2)`,
/// `d = sqrt(1 - c^2)`.
pub fn build_e1(a: f64, c: f64) -> Result<Ensemble> {
    check_unit_interval("a", a)?;
    check_unit_interval("c", c)?;
    let b = (1.0 - a * a).sqrt();
    let d = (1.0 - c * c).sqrt();
    let layout = SystemLayout::qubits(3)?;
    let third = 1.0 / 3.0;
    Ensemble::new(vec![
        (third, sparse_pure(&layout, &[(0b000, a), (0b111, b)])),
        (third, sparse_pure(&layout, &[(0b000, a), (0b111, -b)])),
        (third, sparse_pure(&layout, &[(0b001, c), (0b110, d)])),
    ])
}

/// Six equiprobable tripartite states `a|000> +- b|111>`,
/// `a|001> +- b|110>`, `a|010> +- b|101>`.
pub fn build_e2(a: f64) -> Result<Ensemble> {
    check_unit_interval("a", a)?;
    let b = (1.0 - a * a).sqrt();
    let layout = SystemLayout::qubits(3)?;
    let sixth = 1.0 / 6.0;
    Ensemble::new(vec![
        (sixth, sparse_pure(&layout, &[(0b000, a), (0b111, b)])),
        (sixth, sparse_pure(&layout, &[(0b000, a), (0b111, -b)])),
        (sixth, sparse_pure(&layout, &[(0b001, a), (0b110, b)])),
        (sixth, sparse_pure(&layout, &[(0b001, a), (0b110, -b)])),
        (sixth, sparse_pure(&layout, &[(0b010, a), (0b101, b)])),
        (sixth, sparse_pure(&layout, &[(0b010, a), (0b101, -b)])),
    ])
}

/// Nine orthogonal four-qubit states, equiprobable. Pairwise orthogonality
/// is asserted at construction.
pub fn build_e3() -> Ensemble {
    let layout = SystemLayout::qubits(4).expect("4 qubits fit the guardrail");
    let h = 0.5;
    let states = [
        // |0000>, |0011>, |1100>, |1111| block
        vec![(0b0000, h), (0b0011, h), (0b1100, h), (0b1111, -h)],
        vec![(0b0000, h), (0b0011, -h), (0b1100, h), (0b1111, h)],
        // |0001>, |0010>, |1101>, |1110> block
        vec![(0b0001, h), (0b0010, h), (0b1101, h), (0b1110, -h)],
        vec![(0b0001, h), (0b0010, -h), (0b1101, h), (0b1110, h)],
        // |0101>, |0110>, |1001>, |1010> block
        vec![(0b0101, h), (0b0110, h), (0b1001, h), (0b1010, -h)],
        vec![(0b0101, h), (0b0110, -h), (0b1001, h), (0b1010, h)],
        // |0111>, |0100>, |1011>, |1000> block
        vec![(0b0111, h), (0b0100, h), (0b1011, h), (0b1000, -h)],
        vec![(0b0111, h), (0b0100, -h), (0b1011, h), (0b1000, h)],
        // second combination on the first block
        vec![(0b0000, h), (0b0011, h), (0b1100, -h), (0b1111, h)],
    ];
    let members: Vec<(f64, QuantumState)> = states
        .iter()
        .map(|terms| (1.0 / 9.0, sparse_pure(&layout, terms)))
        .collect();

    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let a = members[i].1.amplitudes().expect("pure");
            let b = members[j].1.amplitudes().expect("pure");
            let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            assert!(
                overlap.norm() < 1e-12,
                "members {i} and {j} are not orthogonal"
            );
        }
    }
    Ensemble::new(members).expect("catalog ensemble is valid")
}

/// The four Bell states with equal priors.
pub fn bell_ensemble() -> Ensemble {
    let layout = SystemLayout::qubits(2).expect("2 qubits fit the guardrail");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ensemble::new(vec![
        (0.25, sparse_pure(&layout, &[(0b00, s), (0b11, s)])),
        (0.25, sparse_pure(&layout, &[(0b00, s), (0b11, -s)])),
        (0.25, sparse_pure(&layout, &[(0b01, s), (0b10, s)])),
        (0.25, sparse_pure(&layout, &[(0b01, s), (0b10, -s)])),
    ])
    .expect("Bell ensemble is valid")
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `n` qubits.
pub fn ghz_state(n: usize) -> Result<QuantumState> {
    let layout = SystemLayout::qubits(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dim = layout.total_dim();
    Ok(sparse_pure(&layout, &[(0, s), (dim - 1, s)]))
}

/// Closed form of the `e2` bound:
/// `-(2/3)(1+a^2) log2((1+a^2)/3) - (2/3)(2-a^2) log2((2-a^2)/3)`.
pub fn e2_bound_closed_form(a: f64) -> f64 {
    let a2 = a * a;
    let term = |x: f64| {
        if x > 0.0 {
            -(2.0 / 3.0) * x * (x / 3.0).log2()
        } else {
            0.0
        }
    };
    term(1.0 + a2) + term(2.0 - a2)
}

/// Closed form of the information carried by `e2`:
/// `-a^2 log2(a^2/3) - (1-a^2) log2((1-a^2)/3)`.
pub fn e2_information_closed_form(a: f64) -> f64 {
    let a2 = a * a;
    let term = |x: f64| if x > 0.0 { -x * (x / 3.0).log2() } else { 0.0 };
    term(a2) + term(1.0 - a2)
}

/// Which family a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    /// 2-D grid over `(a, c)`.
    E1,
    /// 1-D grid over `a`.
    E2,
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub a: f64,
    /// Second parameter, present for the `e1` family only.
    pub c: Option<f64>,
    pub bound_bits: Bits,
    pub chi_bits: Bits,
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    let last = (points - 1) as f64;
    (0..points).map(move |i| i as f64 / last)
}

/// Evaluates bound and chi over a uniform grid (per axis) of `grid_points`.
/// Rows come out in row-major parameter order (`a` slowest).
pub fn sweep(target: SweepTarget, grid_points: usize) -> Result<Vec<SweepRow>> {
    if grid_points < 2 {
        return Err(Error::Domain(format!(
            "grid needs at least 2 points, got {grid_points}"
        )));
    }
    let mut rows = Vec::new();
    match target {
        SweepTarget::E1 => {
            for a in grid(grid_points) {
                for c in grid(grid_points) {
                    let e = build_e1(a, c)?;
                    rows.push(SweepRow {
                        a,
                        c: Some(c),
                        bound_bits: locc_bound(&e)?.bound_bits,
                        chi_bits: holevo_chi(&e)?,
                    });
                }
            }
        }
        SweepTarget::E2 => {
            for a in grid(grid_points) {
                let e = build_e2(a)?;
                rows.push(SweepRow {
                    a,
                    c: None,
                    bound_bits: locc_bound(&e)?.bound_bits,
                    chi_bits: holevo_chi(&e)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Renders sweep rows as CSV: `a[,c],bound_bits,chi_bits`, 12 significant
/// digits, LF line endings.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let two_parameters = rows.first().is_some_and(|r| r.c.is_some());
    let mut out = String::new();
    out.push_str(if two_parameters {
        "a,c,bound_bits,chi_bits\n"
    } else {
        "a,bound_bits,chi_bits\n"
    });
    for row in rows {
        out.push_str(&crate::fmt_sig12(row.a));
        if let Some(c) = row.c {
            out.push(',');
            out.push_str(&crate::fmt_sig12(c));
        }
        out.push(',');
        out.push_str(&crate::fmt_sig12(row.bound_bits.0));
        out.push(',');
        out.push_str(&crate::fmt_sig12(row.chi_bits.0));
        out.push('\n');
    }
    out
}

/// `bound(a) - chi(a)` for the `e2` family, via the full numerical path.
pub fn e2_margin(a: f64) -> Result<f64> {
    let e = build_e2(a)?;
    Ok(locc_bound(&e)?.bound_bits.0 - holevo_chi(&e)?.0)
}

/// Finds the two parameter values where the `e2` bound crosses the carried
/// information, by bisection over the brackets `[0.1, 0.5]` and `[0.9, 1.0]`.
/// `tolerance` bounds the returned abscissa error.
pub fn find_e2_crossings(tolerance: f64) -> Result<(f64, f64)> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let low = bisect(e2_margin, 0.1, 0.5, tolerance)?;
    let high = bisect(e2_margin, 0.9, 1.0, tolerance)?;
    Ok((low, high))
}

fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}] (f = {flo:.3e} and {fhi:.3e})"
        )));
    }
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
