use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ahmod::{y_embedded, y_module, AHModule};
use crate::exactq::{Rational, SparseVec, Subspace};
use crate::halg::{
    free_algebra_weighted, ideal_from_generators, quotient_algebra, total_ambient, Check, CheckReport, FilteredIdeal, GradedAlgebra, IdealData,
    LinearMap, QuotientAlgebra,
};
use crate::qtensor::{sym_power, Block, Budget, EmbeddedModule};

use super::{emit_equations, membership, Chart, Monomials, QuadraticSystem, VarietyError};

pub type Mat3 = [[Rational; 3]; 3];

fn mat(f: impl Fn(usize, usize) -> Rational) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    mat(|i, j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum())
}

fn transpose(a: &Mat3) -> Mat3 {
    mat(|i, j| a[j][i].clone())
}

fn det(a: &Mat3) -> Rational {
    let m = |i: usize, j: usize, k: usize, l: usize| &(&a[i][j] * &a[k][l]) - &(&a[i][l] * &a[k][j]);
    &(&(&a[0][0] * &m(1, 1, 2, 2)) - &(&a[0][1] * &m(1, 0, 2, 2))) + &(&a[0][2] * &m(1, 0, 2, 1))
}

fn identity() -> Mat3 {
    mat(|i, j| if i == j { Rational::one() } else { Rational::zero() })
}

/// A symmetric trace-free `3×3` rational matrix `(a_kl)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda {
    a: Mat3,
}

/// The three shapes of the deformed variety, by the eigenvalues of `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EhCase {
    /// `λ = 0`: two cones meeting at the origin.
    Cone,
    /// Smallest eigenvalue repeated: singular along one 2-sphere orbit.
    SpecialOrbit,
    /// Smallest eigenvalue simple: nonsingular.
    Smooth,
}

impl Lambda {
    /// From `a11, a22, a12, a23, a31`, with `a33 = -a11 - a22`.
    pub fn new(a11: Rational, a22: Rational, a12: Rational, a23: Rational, a31: Rational) -> Self {
        let a33 = -(&a11 + &a22);
        let a = [[a11, a12.clone(), a31.clone()], [a12, a22, a23.clone()], [a31, a23, a33]];
        Lambda { a }
    }

    pub fn zero() -> Self {
        Lambda { a: mat(|_, _| Rational::zero()) }
    }

    pub fn from_matrix(a: Mat3) -> Result<Self, VarietyError> {
        if (0..3).any(|i| (0..3).any(|j| a[i][j] != a[j][i])) {
            return Err(VarietyError::InvalidLambda("not symmetric".into()));
        }
        if !(0..3).map(|i| a[i][i].clone()).sum::<Rational>().is_zero() {
            return Err(VarietyError::InvalidLambda("trace is not zero".into()));
        }
        Ok(Lambda { a })
    }

    /// The diagonal matrix with `a11 - a33 = a` and `a22 - a33 = b`.
    pub fn normal_form(a: Rational, b: Rational) -> Self {
        let three = Rational::from_int(3);
        let two = Rational::from_int(2);
        let d = [&(&(&two * &a) - &b) / &three, &(&(&two * &b) - &a) / &three, -(&(&a + &b) / &three)];
        Lambda { a: mat(|i, j| if i == j { d[i].clone() } else { Rational::zero() }) }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(Rational::is_zero)
    }

    /// `R λ R^T`.
    pub fn conjugate(&self, r: &Mat3) -> Lambda {
        Lambda { a: mul(&mul(r, &self.a), &transpose(r)) }
    }

    pub fn case(&self) -> EhCase {
        if self.is_zero() {
            return EhCase::Cone;
        }
        // t^3 + p t + q with p = -tr(λ²)/2, q = -det λ
        let tr2: Rational = self.a.iter().flatten().map(|x| x * x).sum();
        let p = -(&tr2 / &Rational::from_int(2));
        let d = det(&self.a);
        let disc = &(&Rational::from_int(-4) * &p.pow(3)) - &(&Rational::from_int(27) * &(&d * &d));
        if disc.is_zero() && d.signum() > 0 {
            EhCase::SpecialOrbit
        } else {
            EhCase::Smooth
        }
    }
}

/// `Q = R³ ⊗ Y`, as three copies of `Y`.
pub fn eh_generator() -> AHModule {
    let y = y_module();
    y.direct_sum(&y).direct_sum(&y)
}

/// `M[k]`: coordinates of `(q1, q2, q3) -> q_{k+1}` in the dagger basis of `Y`.
fn y_coordinate_functionals() -> Mat3 {
    let pres = y_embedded();
    let dagger = pres.module.dagger();
    let rows: Vec<Vec<Rational>> = (0..3)
        .map(|k| {
            let alpha = SparseVec::from_pairs(
                pres.generators().iter().enumerate().flat_map(|(i, g)| (0..4).filter_map(move |h| g.get(4 * k + h).map(|x| ((4 * i + h) as u32, x.clone())))).collect(),
            );
            dagger.coordinates(&alpha).expect("coordinate functionals lie in the dual")
        })
        .collect();
    mat(|k, y| rows[k][y].clone())
}

/// Chart `v = (v1, v2, v3)` on `Q†`: variable `3k + c` is component `c` of `v_{k+1}`,
/// and the point is `sum_k v_k ⊗ α_k`.
pub fn eh_chart() -> Chart {
    let m = y_coordinate_functionals();
    let mut rows = vec![vec![Rational::zero(); 9]; 9];
    for c in 0..3 {
        for y in 0..3 {
            for k in 0..3 {
                rows[3 * c + y][3 * k + c] = m[k][y].clone();
            }
        }
    }
    Chart { vars: 9, rows }
}

/// `J = <h> ⊗ S_H²Y` inside the ambient of `S_H²Q`.
pub fn eh_j(budget: Budget) -> Result<Subspace, VarietyError> {
    let s2y = sym_power(&y_module(), 2, budget)?;
    let small = Block::sym(3, 2);
    let big = Block::sym(9, 2);
    let rows = s2y.subspace().basis().iter().map(|t| {
        let mut pairs = Vec::new();
        for (idx, x) in t.iter() {
            let tup = small.tuple(idx / 4);
            for c in 0..3u16 {
                let p = big.position(&[3 * c + tup[0], 3 * c + tup[1]]).expect("sorted tuple");
                pairs.push(((4 * p + idx % 4) as u32, x.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    });
    Ok(Subspace::span_owned(big.count() * 4, rows))
}

/// `λ : J -> H`, `j -> -(1/3) sum j[(c,y1),(c,y2)] (MᵀλM)[y1][y2]`, so that the
/// generators `λ(j) + j` give `v_k·v_l - a_kl` proportional to the identity.
pub fn lambda_map(j: &EmbeddedModule, lambda: &Lambda) -> LinearMap {
    let m = y_coordinate_functionals();
    let b = mul(&mul(&transpose(&m), lambda.matrix()), &m);
    let block = Block::sym(9, 2);
    let scale = Rational::new(-1, 3);
    let weights: Vec<Rational> = (0..block.count())
        .map(|p| {
            let t = block.tuple(p);
            let (i1, i2) = (t[0] as usize, t[1] as usize);
            if i1 / 3 != i2 / 3 {
                return Rational::zero();
            }
            let mult = if i1 == i2 { Rational::one() } else { Rational::from_int(2) };
            &(&mult * &b[i1 % 3][i2 % 3]) * &scale
        })
        .collect();
    LinearMap::from_ambient(j.clone(), EmbeddedModule::h(), move |v| {
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        for (idx, x) in v.iter() {
            out[idx % 4] += &(x * &weights[idx / 4]);
        }
        SparseVec::from_dense(&out)
    })
}

/// The deformed algebra `P^λ = F^Q / I^λ`, kept as the filtered ideal `I^λ` together
/// with the graded quotient `B = F^Q / I` by its leading part.
#[derive(Clone, Debug)]
pub struct EHFamily {
    pub lambda: Lambda,
    pub chart: Chart,
    pub free: GradedAlgebra,
    pub j: EmbeddedModule,
    pub lambda_map: LinearMap,
    /// `λ(j) + j` for a basis of `J`, in the total ambient of `free`.
    pub generators: Vec<SparseVec>,
    pub ideal: IdealData,
    pub graded: QuotientAlgebra,
    pub filtered: FilteredIdeal,
    pub system: QuadraticSystem,
    pub checks: CheckReport,
}

impl EHFamily {
    pub fn case(&self) -> EhCase {
        self.lambda.case()
    }

    /// `dim P^λ_k = dim F_k - dim I^λ_k`, by power.
    pub fn quotient_dims(&self) -> Vec<usize> {
        self.filtered.quotient_dims(&self.free)
    }
}

/// Builds the family member for `λ` with the free algebra truncated at weighted grade
/// `max_grade` (`Q` has weight 2).
pub fn eh_family(lambda: &Lambda, max_grade: usize, budget: Budget) -> Result<EHFamily, VarietyError> {
    let lambda = Lambda::from_matrix(lambda.matrix().clone())?;
    if max_grade < 4 {
        return Err(VarietyError::Dimension { expected: 4, got: max_grade });
    }
    let q = eh_generator();
    let free = free_algebra_weighted(&q, 2, max_grade, budget)?;
    let js = eh_j(budget)?;
    let g2 = free.grade(2)?;
    let j = EmbeddedModule::new(g2.layout().clone(), g2.factors().to_vec(), js.clone());
    let ideal = ideal_from_generators(&free, 2, &js, budget)?;
    let graded = quotient_algebra(&free, &ideal, budget)?;
    let f = lambda_map(&j, &lambda);
    let filtered = FilteredIdeal::generate(&free, 2, 0, &f, budget)?;

    let (offsets, total) = total_ambient(&free);
    let mut generators = Vec::with_capacity(js.dim());
    for v in js.basis() {
        generators.push(v.map_indices(|i| i + offsets[2]).add(&f.apply(v)?));
    }
    let chart = eh_chart();
    let system = emit_equations(&free, &generators, &chart)?;

    let mut checks = CheckReport::default();
    checks.extend(ideal.checks.clone());
    for (k, level) in filtered.levels.iter().enumerate() {
        let lo = offsets[k];
        let hi = offsets.get(k + 1).copied().unwrap_or(total);
        let lead = level.map(hi - lo, |v| {
            SparseVec::from_sorted(v.iter().filter(|(i, _)| (lo..hi).contains(i)).map(|(i, x)| ((i - lo) as u32, x.clone())).collect())
        });
        checks.push(Check::new(format!("leading_forms({k})"), &lead == ideal.grades[k].subspace()));
    }
    Ok(EHFamily { lambda, chart, free, j, lambda_map: f, generators, ideal, graded, filtered, system, checks })
}

pub fn is_rotation(r: &Mat3) -> bool {
    mul(r, &transpose(r)) == identity() && det(r).is_one()
}

/// Rotation of the unit quaternion `q/|q|`, acting on `R³` by conjugation.
pub fn rotation_from_quaternion(q: [i64; 4]) -> Option<Mat3> {
    let [a, b, c, d] = q.map(Rational::from_int);
    let n = &(&(&a * &a) + &(&b * &b)) + &(&(&c * &c) + &(&d * &d));
    if n.is_zero() {
        return None;
    }
    let two = Rational::from_int(2);
    let sq = |x: &Rational| x * x;
    let r = [
        [&(&sq(&a) + &sq(&b)) - &(&sq(&c) + &sq(&d)), &two * &(&(&b * &c) - &(&a * &d)), &two * &(&(&b * &d) + &(&a * &c))],
        [&two * &(&(&b * &c) + &(&a * &d)), &(&sq(&a) - &sq(&b)) + &(&sq(&c) - &sq(&d)), &two * &(&(&c * &d) - &(&a * &b))],
        [&two * &(&(&b * &d) - &(&a * &c)), &two * &(&(&c * &d) + &(&a * &b)), &(&sq(&a) - &sq(&b)) - &(&sq(&c) - &sq(&d))],
    ];
    Some(mat(|i, j| &r[i][j] / &n))
}

/// `(v1, v2, v3) -> (R v1, R v2, R v3)` in chart coordinates.
pub fn rotate_point(r: &Mat3, v: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); 9];
    for k in 0..3 {
        for c in 0..3 {
            out[3 * k + c] = (0..3).map(|d| &r[c][d] * &v[3 * k + d]).sum();
        }
    }
    out
}

/// Whether substituting `v_k -> R v_k` preserves the row space of the equations and
/// keeps every witness in the variety.
pub fn so3_action_check(sys: &QuadraticSystem, r: &Mat3, witnesses: &[Vec<Rational>]) -> Result<bool, VarietyError> {
    if sys.gen_dual_dim != 9 {
        return Err(VarietyError::Dimension { expected: 9, got: sys.gen_dual_dim });
    }
    if !is_rotation(r) {
        return Err(VarietyError::NotRotation);
    }
    let m = Monomials::new(9);
    let rows: Vec<Vec<Rational>> = (0..9)
        .map(|i| {
            let (k, c) = (i / 3, i % 3);
            (0..9).map(|a| if a / 3 == k { r[c][a % 3].clone() } else { Rational::zero() }).collect()
        })
        .collect();
    let moved = Subspace::span_owned(m.count(), sys.equations().iter().map(|p| m.substitute(p, &rows, m)));
    let stable = moved == sys.real_equations;
    Ok(stable && witnesses.iter().filter(|w| membership(sys, w)).all(|w| membership(sys, &rotate_point(r, w))))
}

/// Images of `v` under `count` rotations from random integer quaternions.
pub fn orbit_samples(v: &[Rational], count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
        if let Some(r) = rotation_from_quaternion(q) {
            out.push(rotate_point(&r, v));
        }
    }
    out
}
