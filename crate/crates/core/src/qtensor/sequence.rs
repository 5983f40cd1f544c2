use serde::{Deserialize, Serialize};

use crate::ahmod::{AHModule, AHMorphism};
use crate::exactq::Subspace;

use super::QtError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionReport {
    /// 1-based position of the module in `0 -> M_1 -> ... -> M_k -> 0`.
    pub position: usize,
    pub module_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub prime_image_dim: usize,
    pub prime_kernel_dim: usize,
    pub module_exact: bool,
    pub prime_exact: bool,
}

impl PositionReport {
    pub fn exact(&self) -> bool {
        self.module_exact && self.prime_exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub positions: Vec<PositionReport>,
}

impl SequenceReport {
    pub fn ah_exact(&self) -> bool {
        self.positions.iter().all(PositionReport::exact)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.positions.iter().find(|p| !p.exact()).map(|p| p.position)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.positions.iter().map(|p| p.module_dim).collect()
    }
}

/// Exactness of `0 -> M_1 -> ... -> M_{k+1} -> 0` for morphisms `fs = [f_1, ..., f_k]`,
/// at module level and on the prime subspaces.
pub fn check_sequence(fs: &[AHMorphism]) -> Result<SequenceReport, QtError> {
    if fs.is_empty() {
        return Ok(SequenceReport { positions: Vec::new() });
    }
    for (i, w) in fs.windows(2).enumerate() {
        if w[0].target() != w[1].source() {
            return Err(QtError::NotComposable(i + 1, i + 2));
        }
    }
    let mut modules: Vec<&AHModule> = vec![fs[0].source()];
    modules.extend(fs.iter().map(AHMorphism::target));
    let mut positions = Vec::with_capacity(modules.len());
    for (i, m) in modules.iter().enumerate() {
        let n = m.dim();
        let (image, prime_image) = if i == 0 {
            (Subspace::zero(n), Subspace::zero(n))
        } else {
            let f = &fs[i - 1];
            (f.image(), f.source().uprime().map(n, |u| f.apply(u)))
        };
        let kernel = if i == fs.len() { Subspace::full(n) } else { fs[i].kernel() };
        let prime_kernel = kernel.intersect(m.uprime())?;
        positions.push(PositionReport {
            position: i + 1,
            module_dim: n,
            image_dim: image.dim(),
            kernel_dim: kernel.dim(),
            prime_image_dim: prime_image.dim(),
            prime_kernel_dim: prime_kernel.dim(),
            module_exact: image == kernel,
            prime_exact: prime_image == prime_kernel,
        });
    }
    Ok(SequenceReport { positions })
}
