//! Real varieties of H-algebra morphisms: the polynomials `ψ_y` on `Q†`, the equations
//! they emit, exact membership and pointwise rank probes, and the Eguchi–Hanson family.

mod eh;
mod poly;

pub use eh::{
    eh_chart, eh_family, eh_generator, eh_j, is_rotation, lambda_map, orbit_samples, rotate_point, rotation_from_quaternion, so3_action_check,
    EHFamily, EhCase, Lambda, Mat3,
};
pub use poly::{format_poly, Monomials};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ahmod::AhError;
use crate::exactq::{Quaternion, RatMatrix, Rational, SparseVec, Subspace};
use crate::halg::{total_ambient, GradedAlgebra, HalgError, IdealData};
use crate::qtensor::{Layout, QtError};

#[derive(Debug, Error)]
pub enum VarietyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("generator has a component in grade {0}; only grades up to 2 give quadratics")]
    GeneratorGrade(usize),
    #[error("invalid lambda: {0}")]
    InvalidLambda(String),
    #[error("matrix is not a rotation")]
    NotRotation,
    #[error(transparent)]
    Halg(#[from] HalgError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error(transparent)]
    Ah(#[from] AhError),
}

/// Linear coordinates on `Q†`: dual coordinate `x_i = sum_a rows[i][a] v_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub vars: usize,
    pub rows: Vec<Vec<Rational>>,
}

impl Chart {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|a| if a == i { Rational::one() } else { Rational::zero() }).collect()).collect();
        Chart { vars: n, rows }
    }

    /// Dimension of `Q†`.
    pub fn dual_dim(&self) -> usize {
        self.rows.len()
    }

    /// Dual coordinates of the point with chart coordinates `v`.
    pub fn to_dual(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

/// An H-valued polynomial of degree at most 2, one real polynomial per component.
pub type HPoly = [SparseVec; 4];

/// Per-position weight and sorted variable tuple of a layout over a single dual space.
fn contraction_terms(layout: &Layout, n: usize) -> Result<Vec<(Rational, Vec<usize>)>, VarietyError> {
    if let Some(b) = layout.blocks().iter().find(|b| b.d != n) {
        return Err(VarietyError::Dimension { expected: n, got: b.d });
    }
    Ok((0..layout.size())
        .map(|pos| {
            let w: i64 = layout.expand(pos).iter().map(|(_, s)| *s as i64).sum();
            let mut t: Vec<usize> = layout.tuple(pos).iter().map(|&i| i as usize).collect();
            t.sort_unstable();
            (Rational::from_int(w), t)
        })
        .collect())
}

/// `θ_x(y)`: full contraction of `y ∈ H ⊗ ((Q†)*)^{⊗k}` against `x^{⊗k}`, with `x` in
/// dagger coordinates.
pub fn eval_theta(x: &[Rational], layout: &Layout, y: &SparseVec) -> Result<Quaternion, VarietyError> {
    let terms = contraction_terms(layout, x.len())?;
    let mut out = Quaternion::zero();
    for (idx, c) in y.iter() {
        let (w, t) = &terms[idx / 4];
        let mut m = c * w;
        for &a in t {
            m *= &x[a];
        }
        out.c[idx % 4] += &m;
    }
    Ok(out)
}

/// `ψ_y` as a polynomial in chart coordinates, for `y` of degree at most 2.
pub fn psi_poly(chart: &Chart, layout: &Layout, y: &SparseVec) -> Result<HPoly, VarietyError> {
    if layout.order() > 2 {
        return Err(VarietyError::GeneratorGrade(layout.order()));
    }
    let dual = Monomials::new(chart.dual_dim());
    let terms = contraction_terms(layout, dual.n)?;
    let mut comps: [Vec<(u32, Rational)>; 4] = Default::default();
    for (idx, c) in y.iter() {
        let (w, t) = &terms[idx / 4];
        comps[idx % 4].push((dual.index(t) as u32, c * w));
    }
    let target = Monomials::new(chart.vars);
    Ok(comps.map(|c| dual.substitute(&SparseVec::from_pairs(c), &chart.rows, target)))
}

fn add_poly(a: &HPoly, b: &HPoly) -> HPoly {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2]), a[3].add(&b[3])]
}

/// The equations of `M_{P,Q}` cut out by generators of the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    /// `dim Q†`, also the number of chart variables.
    pub gen_dual_dim: usize,
    /// `ψ_y` for each generator `y`.
    pub forms: Vec<HPoly>,
    /// Row space of the real components, as an RREF subspace of the monomial space.
    pub real_equations: Subspace,
}

impl QuadraticSystem {
    pub fn from_forms(vars: usize, forms: Vec<HPoly>) -> Self {
        let m = Monomials::new(vars);
        let real_equations = Subspace::span(m.count(), forms.iter().flat_map(|f| f.iter()));
        QuadraticSystem { gen_dual_dim: vars, forms, real_equations }
    }

    pub fn monomials(&self) -> Monomials {
        Monomials::new(self.gen_dual_dim)
    }

    pub fn equations(&self) -> &[SparseVec] {
        self.real_equations.basis()
    }

    /// Same row space of real coefficient vectors.
    pub fn equivalent(&self, other: &QuadraticSystem) -> bool {
        self.gen_dual_dim == other.gen_dual_dim && self.real_equations == other.real_equations
    }

    /// Human-readable equations `p = 0`, with variables `names(a)`.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> Vec<String> {
        let m = self.monomials();
        self.equations().iter().map(|p| format_poly(&m, p, names)).collect()
    }
}

/// `ψ_y` for generators `y` given in the total ambient of `alg`; components above
/// power 2 are rejected.
pub fn emit_equations(alg: &GradedAlgebra, generators: &[SparseVec], chart: &Chart) -> Result<QuadraticSystem, VarietyError> {
    let n = alg.gen().dagger_dim();
    if chart.dual_dim() != n {
        return Err(VarietyError::Dimension { expected: n, got: chart.dual_dim() });
    }
    let (offsets, total) = total_ambient(alg);
    let mut forms = Vec::with_capacity(generators.len());
    for g in generators {
        if g.max_index().is_some_and(|i| i >= total) {
            return Err(VarietyError::Dimension { expected: total, got: g.max_index().unwrap() + 1 });
        }
        let mut f: HPoly = Default::default();
        for (k, grade) in alg.grades().iter().enumerate() {
            let lo = offsets[k];
            let hi = lo + grade.ambient_dim();
            let part = SparseVec::from_sorted(g.iter().filter(|(i, _)| (lo..hi).contains(i)).map(|(i, x)| ((i - lo) as u32, x.clone())).collect());
            if part.is_zero() {
                continue;
            }
            if k > 2 {
                return Err(VarietyError::GeneratorGrade(k));
            }
            f = add_poly(&f, &psi_poly(chart, grade.layout(), &part)?);
        }
        forms.push(f);
    }
    Ok(QuadraticSystem::from_forms(chart.vars, forms))
}

/// Equations from the generating module of a graded ideal.
pub fn emit_for_ideal(alg: &GradedAlgebra, ideal: &IdealData, chart: &Chart) -> Result<QuadraticSystem, VarietyError> {
    if ideal.g0 > 2 {
        return Err(VarietyError::GeneratorGrade(ideal.g0));
    }
    let (offsets, _) = total_ambient(alg);
    let off = offsets[ideal.g0];
    let gens: Vec<SparseVec> = ideal.generators.subspace().basis().iter().map(|v| v.map_indices(|i| i + off)).collect();
    emit_equations(alg, &gens, chart)
}

/// Whether every equation vanishes at `v`.
pub fn membership(sys: &QuadraticSystem, v: &[Rational]) -> bool {
    let m = sys.monomials();
    v.len() == m.n && sys.equations().iter().all(|p| m.eval(p, v).is_zero())
}

fn jacobian(sys: &QuadraticSystem, v: &[Rational]) -> RatMatrix {
    let m = sys.monomials();
    RatMatrix::from_rows_with_cols(sys.equations().iter().map(|p| m.gradient(p, v)).collect(), m.n)
}

/// Rank of the Jacobian of the real system at `v`.
pub fn jacobian_rank(sys: &QuadraticSystem, v: &[Rational]) -> usize {
    jacobian(sys, v).rank()
}

/// Whether the Jacobian drops rank at `v`.
pub fn is_singular_at(sys: &QuadraticSystem, v: &[Rational]) -> bool {
    jacobian_rank(sys, v) < sys.real_equations.dim()
}

/// Kernel of the Jacobian at `v`.
pub fn tangent_space(sys: &QuadraticSystem, v: &[Rational]) -> Subspace {
    let m = sys.monomials();
    Subspace::from_equations_owned(m.n, sys.equations().iter().map(|p| SparseVec::from_dense(&m.gradient(p, v))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VmReport {
    pub tangent_dim: usize,
    pub rank: usize,
    /// `12k` for a tangent space of dimension `4k`.
    pub bound: usize,
    pub determined: bool,
}

/// `dim V_m`: rank of the first derivatives along `T_m` of `ψ_y` for real bases of the
/// listed grades of `alg`.
pub fn vm_rank(alg: &GradedAlgebra, chart: &Chart, sys: &QuadraticSystem, grades: &[usize], v: &[Rational]) -> Result<VmReport, VarietyError> {
    let tangent = tangent_space(sys, v);
    let t = tangent.dim();
    let m = Monomials::new(chart.vars);
    let mut rows = Vec::new();
    for &k in grades {
        let grade = alg.grade(k)?;
        for y in grade.subspace().basis() {
            let f = psi_poly(chart, grade.layout(), y)?;
            let grads: Vec<Vec<Rational>> = f.iter().map(|p| m.gradient(p, v)).collect();
            let mut row = Vec::with_capacity(4 * t);
            for s in tangent.basis() {
                for g in &grads {
                    row.push(s.dot_dense(g));
                }
            }
            rows.push(row);
        }
    }
    let rank = RatMatrix::from_rows_with_cols(rows, 4 * t).rank();
    let bound = 3 * t;
    Ok(VmReport { tangent_dim: t, rank, bound, determined: t % 4 == 0 && rank == bound })
}
