use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactq::{Quaternion, Subspace};

use super::slots::{h_span, left_mul};
use super::{AHModule, AhError};

/// Seed used for the random part of fingerprints.
const FINGERPRINT_SEED: u64 = 0x5eed;

/// The axis and diagonal directions `i1, i2, i3, i1+i2, i2+i3, i3+i1, i1+i2+i3`.
pub fn canonical_probes() -> Vec<Quaternion> {
    [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 1]]
        .into_iter()
        .map(Quaternion::from_ints)
        .collect()
}

/// Nonzero imaginary directions with small integer coordinates.
pub fn random_probes(count: usize, seed: u64) -> Vec<Quaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [i64; 3] = [rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)];
        if v != [0, 0, 0] {
            out.push(Quaternion::from_ints([0, v[0], v[1], v[2]]));
        }
    }
    out
}

fn check_probe(q: &Quaternion) -> Result<(), AhError> {
    if !q.is_imaginary() || q.is_zero() {
        return Err(AhError::InvalidProbe(q.clone()));
    }
    Ok(())
}

/// `U' ∩ q·U'`.
pub fn sector(prime: &Subspace, q: &Quaternion) -> Subspace {
    let moved = prime.map(prime.ambient_dim(), |v| left_mul(q, v));
    prime.intersect(&moved).expect("same ambient")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub probe: Quaternion,
    pub sector_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub semistable: bool,
    pub stable: bool,
    pub virtual_dim: i64,
    pub probes: Vec<ProbeResult>,
}

/// Semistability for a module of real dimension `dim` with prime part `prime`,
/// embedded in any ambient with quaternionic slots.
pub fn is_semistable_of(dim: usize, prime: &Subspace, probes: &[Quaternion]) -> Result<(bool, Vec<ProbeResult>), AhError> {
    if probes.is_empty() {
        return Err(AhError::BadParameters("empty probe list".into()));
    }
    let mut results = Vec::with_capacity(probes.len());
    let mut sectors = Vec::new();
    for q in probes {
        check_probe(q)?;
        let s = sector(prime, q);
        results.push(ProbeResult { probe: q.clone(), sector_dim: s.dim() });
        sectors.extend(s.into_basis());
    }
    let span = h_span(prime.ambient_dim(), sectors.iter());
    Ok((span.dim() == dim, results))
}

pub fn is_semistable(u: &AHModule, probes: &[Quaternion]) -> Result<(bool, Vec<ProbeResult>), AhError> {
    is_semistable_of(u.dim(), u.uprime(), probes)
}

/// Monte-Carlo stability: semistable, and every probed sector has dimension `2r`.
pub fn is_stable_of(dim: usize, prime: &Subspace, probes: &[Quaternion], random_count: usize, seed: u64) -> Result<StabilityReport, AhError> {
    let mut all: Vec<Quaternion> = probes.to_vec();
    all.extend(random_probes(random_count, seed));
    let (semistable, results) = is_semistable_of(dim, prime, &all)?;
    let r = prime.dim() as i64 - (dim / 2) as i64;
    let stable = semistable && r > 0 && results.iter().all(|p| p.sector_dim as i64 == 2 * r);
    Ok(StabilityReport { semistable, stable, virtual_dim: r, probes: results })
}

pub fn is_stable(u: &AHModule, probes: &[Quaternion], random_count: usize, seed: u64) -> Result<StabilityReport, AhError> {
    is_stable_of(u.dim(), u.uprime(), probes, random_count, seed)
}

/// Invariants preserved by AH-isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoFingerprint {
    pub quat_rank: usize,
    pub uprime_dim: usize,
    pub dagger_dim: usize,
    pub virtual_dim: i64,
    pub probes: Vec<Quaternion>,
    pub sector_dims: Vec<usize>,
}

/// Fingerprint of a module of real dimension `dim` with prime part `prime`.
pub fn fingerprint_of(dim: usize, prime: &Subspace) -> IsoFingerprint {
    let mut probes = canonical_probes();
    probes.extend(random_probes(4, FINGERPRINT_SEED));
    let sector_dims = probes.iter().map(|q| sector(prime, q).dim()).collect();
    IsoFingerprint {
        quat_rank: dim / 4,
        uprime_dim: prime.dim(),
        dagger_dim: dim - prime.dim(),
        virtual_dim: prime.dim() as i64 - (dim / 2) as i64,
        probes,
        sector_dims,
    }
}

pub fn fingerprint(u: &AHModule) -> IsoFingerprint {
    fingerprint_of(u.dim(), u.uprime())
}

pub fn fingerprints_match(a: &IsoFingerprint, b: &IsoFingerprint) -> bool {
    a == b
}

impl IsoFingerprint {
    pub fn dims(&self) -> (usize, usize, usize) {
        (4 * self.quat_rank, self.uprime_dim, self.dagger_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ahmod::x_q;

    #[test]
    fn zero_prime_is_not_semistable() {
        let m = AHModule::new(1, Subspace::zero(4)).unwrap();
        let (ok, res) = is_semistable(&m, &canonical_probes()).unwrap();
        assert!(!ok);
        assert!(res.iter().all(|p| p.sector_dim == 0));
    }

    #[test]
    fn x_i1_is_semistable() {
        let x = x_q(&Quaternion::i1()).unwrap();
        let (ok, res) = is_semistable(&x, &canonical_probes()).unwrap();
        assert!(ok);
        // X_q' ∩ q X_q' at q = i1 is all of X_q'
        assert_eq!(res[0].sector_dim, 2);
    }

    #[test]
    fn probes_must_be_imaginary() {
        let h = AHModule::h();
        assert!(matches!(is_semistable(&h, &[Quaternion::one()]), Err(AhError::InvalidProbe(_))));
        assert!(matches!(is_semistable(&h, &[Quaternion::zero()]), Err(AhError::InvalidProbe(_))));
    }

    #[test]
    fn h_is_stable() {
        let rep = is_stable(&AHModule::h(), &canonical_probes(), 20, 1).unwrap();
        assert!(rep.stable);
        assert!(rep.probes.iter().all(|p| p.sector_dim == 2));
    }
}
