use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactq::{Quaternion, Rational, SparseVec, Subspace};

use super::slots::{present, Presentation};
use super::stability::{canonical_probes, is_stable};
use super::{AHModule, AHMorphism, AhError};

const RANDOM_STABLE_ATTEMPTS: usize = 200;

/// `X_q = H` with `X_q' = {p : pq = -qp}`.
pub fn x_q(q: &Quaternion) -> Result<AHModule, AhError> {
    if !q.is_imaginary() || q.is_zero() {
        return Err(AhError::InvalidProbe(q.clone()));
    }
    let l = q.left_matrix();
    let r = q.right_matrix();
    // p -> pq + qp, one equation per output component
    let eqs = (0..4).map(|j| SparseVec::from_dense(&(0..4).map(|i| &l[i][j] + &r[i][j]).collect::<Vec<_>>()));
    AHModule::new(1, Subspace::from_equations_owned(4, eqs))
}

/// Equations of `{(q_1..q_m) : sum_k q_k c_k = 0}` in `R^{4m}`.
fn right_sum_equations(coeffs: &[Quaternion]) -> Vec<SparseVec> {
    let mats: Vec<_> = coeffs.iter().map(Quaternion::right_matrix).collect();
    (0..4)
        .map(|j| {
            let mut row = Vec::with_capacity(4 * coeffs.len());
            for m in &mats {
                for b in 0..4 {
                    row.push(m[b][j].clone());
                }
            }
            SparseVec::from_dense(&row)
        })
        .collect()
}

fn imaginary_equations(slots: usize) -> impl Iterator<Item = SparseVec> {
    (0..slots).map(|k| SparseVec::unit(4 * k))
}

/// `Y = {(q1, q2, q3) : q1 i1 + q2 i2 + q3 i3 = 0}` inside `H^3`, with `Y' = Y ∩ I^3`.
pub fn y_embedded() -> Presentation {
    let units = [Quaternion::i1(), Quaternion::i2(), Quaternion::i3()];
    let eqs = right_sum_equations(&units);
    let w = Subspace::from_equations(12, &eqs);
    let wp = Subspace::from_equations_owned(12, eqs.iter().cloned().chain(imaginary_equations(3)));
    present(&w, &wp).expect("Y is an AH-module")
}

pub fn y_module() -> AHModule {
    y_embedded().module
}

/// Linear q-holomorphic functions `q0 x0 + ... + q3 x3` on H, in the coordinates `(q1, q2, q3)`.
pub fn u_linear() -> AHModule {
    let units = [Quaternion::i1(), Quaternion::i2(), Quaternion::i3()];
    // q0 = -(q1 i1 + q2 i2 + q3 i3) must be imaginary: its real part vanishes
    let re = right_sum_equations(&units).into_iter().next().unwrap();
    let eqs = imaginary_equations(3).chain(std::iter::once(re));
    AHModule::new(3, Subspace::from_equations_owned(12, eqs)).expect("U is an AH-module")
}

/// Random module with `dim U = 4j`, `dim U' = 2j + r` that passes the stability test.
pub fn random_stable(j: usize, r: usize, seed: u64) -> Result<AHModule, AhError> {
    if r == 0 || r > j {
        return Err(AhError::BadParameters(format!("need 0 < r <= j, got j={j}, r={r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, k) = (4 * j, 2 * j + r);
    for _ in 0..RANDOM_STABLE_ATTEMPTS {
        let rows: Vec<SparseVec> = (0..k)
            .map(|_| SparseVec::from_dense(&(0..n).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect::<Vec<_>>()))
            .collect();
        let s = Subspace::span(n, &rows);
        if s.dim() != k {
            continue;
        }
        let Ok(m) = AHModule::new(j, s) else { continue };
        if is_stable(&m, &canonical_probes(), 20, rng.gen())?.stable {
            return Ok(m);
        }
    }
    Err(AhError::RetryLimit(RANDOM_STABLE_ATTEMPTS))
}

/// A random AH-exact `0 -> U -> V -> W -> 0` with `V = H^{m+n}`, `φ` the inclusion of the
/// first `m` slots and `ψ` the projection onto the last `n`.
///
/// `V' = φ(U') + {(L w, w) : w ∈ W'}` for a random real-linear `L : W' -> H^m`, so `V` is
/// in general not AH-isomorphic to `U ⊕ W`.
pub fn random_extension(u: &AHModule, w: &AHModule, seed: u64) -> Result<(AHMorphism, AHMorphism), AhError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (u.rank(), w.rank());
    for _ in 0..RANDOM_STABLE_ATTEMPTS {
        let rows = u.uprime().basis().iter().cloned().chain(w.uprime().basis().iter().map(|b| {
            let lifted = SparseVec::from_dense(&(0..4 * m).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect::<Vec<_>>());
            lifted.add(&b.map_indices(|i| i + 4 * m))
        }));
        let Ok(v) = AHModule::new(m + n, Subspace::span_owned(4 * (m + n), rows.collect::<Vec<_>>())) else { continue };
        let unit = |i: usize, j: usize| if i == j { Quaternion::one() } else { Quaternion::zero() };
        let phi = AHMorphism::new(u.clone(), v.clone(), (0..m).map(|i| (0..m + n).map(|j| unit(i, j)).collect()).collect())?;
        let psi = AHMorphism::new(v, w.clone(), (0..m + n).map(|i| (0..n).map(|j| unit(i, j + m)).collect()).collect())?;
        return Ok((phi, psi));
    }
    Err(AhError::RetryLimit(RANDOM_STABLE_ATTEMPTS))
}
