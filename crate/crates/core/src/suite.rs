//! The battery run by `hquat suite`: dimension formulas, canonical modules, exactness,
//! the Fueter bridge, the Eguchi–Hanson family and the algebra axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use hquat::ahmod::{
    canonical_probes, fingerprint, is_semistable, is_stable, random_extension, random_stable, u_linear, x_q, y_module, AHModule, AHMorphism,
};
use hquat::exactq::{Quaternion, Rational, SparseVec, Subspace};
use hquat::fueter::{fueter_kernel, invariant_grades};
use hquat::halg::{axiom_a_check, free_algebra, hl_from_lie, poisson_on_free, LieAlgebra};
use hquat::qtensor::{alt_power, check_sequence, qtensor, sym_power, tensor_morphism, Budget};
use hquat::variety::{eh_family, Lambda, Monomials};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteItem {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A semistable module of quaternionic rank `k`: stable, `X_q`, or a sum of both.
///
/// `q` is drawn from the canonical probes, so the probe test can see the single sector of `X_q`.
fn random_semistable(k: usize, rng: &mut ChaCha8Rng) -> Result<AHModule, String> {
    let probes = canonical_probes();
    let xq = x_q(&probes[rng.gen_range(0..probes.len())]).map_err(err)?;
    match (k, rng.gen_range(0..3)) {
        (1, 0) => Ok(xq),
        (_, 0) | (_, 1) if k > 1 => {
            let rest = random_stable(k - 1, 1, rng.gen()).map_err(err)?;
            Ok(xq.direct_sum(&rest))
        }
        _ => {
            let s = rng.gen_range(1..=k.min(2));
            random_stable(k, s, rng.gen()).map_err(err)
        }
    }
}

/// Any AH-module of rank `n`, from random small-integer prime vectors.
fn random_module(n: usize, rng: &mut ChaCha8Rng) -> Result<AHModule, String> {
    for _ in 0..200 {
        let d = rng.gen_range(1..4 * n);
        let rows: Vec<SparseVec> =
            (0..d).map(|_| SparseVec::from_dense(&(0..4 * n).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect::<Vec<_>>())).collect();
        if let Ok(m) = AHModule::new(n, Subspace::span(4 * n, &rows)) {
            return Ok(m);
        }
    }
    Err("no random module found".into())
}

fn dimension_theorem(seed: u64, budget: Budget) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let j = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=j.min(2));
        let k = rng.gen_range(1..=3);
        let u = random_stable(j, r, rng.gen()).map_err(err)?;
        let v = random_semistable(k, &mut rng)?;
        let s = v.uprime().dim() - 2 * k;
        let t = qtensor(&u, &v, budget).map_err(err)?;
        let l = j * s + r * k - r * s;
        ensure!(t.dims() == (4 * l, 2 * l + r * s), "pair {i}: (j,r,k,s) = ({j},{r},{k},{s}) gave {:?}", t.dims());
    }
    Ok(())
}

fn binomial_powers(seed: u64, budget: Budget) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 1..=3 {
        for r in 1..=j.min(2) {
            let u = random_stable(j, r, rng.gen()).map_err(err)?;
            for n in 1..=3 {
                let k = (j - r) * binom(r + n - 1, n - 1) + binom(r + n - 1, n);
                let s = binom(r + n - 1, n);
                let l = (j - r) * binom(r - 1, n - 1) + binom(r, n);
                let t = binom(r, n);
                let sym = sym_power(&u, n, budget).map_err(err)?;
                let alt = alt_power(&u, n, budget).map_err(err)?;
                ensure!(sym.dims() == (4 * k, 2 * k + s), "S^{n} of (j,r)=({j},{r}) gave {:?}", sym.dims());
                ensure!(alt.dims() == (4 * l, 2 * l + t), "Λ^{n} of (j,r)=({j},{r}) gave {:?}", alt.dims());
            }
        }
    }
    Ok(())
}

fn canonical_modules(seed: u64, budget: Budget) -> Outcome {
    let y = y_module();
    let u = u_linear();
    ensure!(y.dims() == (8, 5, 3), "Y dims {:?}", y.dims());
    ensure!(is_stable(&y, &canonical_probes(), 20, seed).map_err(err)?.stable, "Y not stable");
    let yy = qtensor(&y, &y, budget).map_err(err)?;
    ensure!(yy.dims() == (12, 7), "Y⊗Y dims {:?}", yy.dims());
    ensure!(alt_power(&y, 2, budget).map_err(err)?.dim() == 0, "Λ²Y nonzero");
    ensure!(u.dims() == (12, 8, 4), "U dims {:?}", u.dims());
    ensure!(is_stable(&u, &canonical_probes(), 20, seed).map_err(err)?.stable, "U not stable");
    ensure!(alt_power(&u, 2, budget).map_err(err)?.fingerprint() == fingerprint(&y), "Λ²U is not Y");
    for k in 0..=4 {
        let d = sym_power(&u, k, budget).map_err(err)?.dim();
        ensure!(d == 2 * (k + 1) * (k + 2), "S^{k}U has dim {d}");
    }
    Ok(())
}

fn counterexample(budget: Budget) -> Outcome {
    let ints = |v: [i64; 8]| v.map(Rational::from_int).to_vec();
    let u = AHModule::new(1, Subspace::zero(4)).map_err(err)?;
    let v = AHModule::new(2, Subspace::span_dense(8, &[ints([1, 0, 0, 0, 0, 1, 0, 0]), ints([1, 0, 0, 0, 0, 0, 1, 0])])).map_err(err)?;
    let w = AHModule::new(1, Subspace::span_owned(4, [SparseVec::unit(1), SparseVec::unit(2)])).map_err(err)?;
    let (one, zero) = (Quaternion::one(), Quaternion::zero());
    let phi = AHMorphism::new(u, v.clone(), vec![vec![one.clone(), zero.clone()]]).map_err(err)?;
    let psi = AHMorphism::new(v, w.clone(), vec![vec![zero], vec![one]]).map_err(err)?;
    ensure!(check_sequence(&[phi.clone(), psi.clone()]).map_err(err)?.ah_exact(), "base sequence not exact");
    let id = AHMorphism::identity(&w);
    let rep = check_sequence(&[tensor_morphism(&phi, &id, budget).map_err(err)?, tensor_morphism(&psi, &id, budget).map_err(err)?]).map_err(err)?;
    ensure!(rep.dims() == vec![0, 0, 4], "tensored dims {:?}", rep.dims());
    ensure!(rep.first_failure() == Some(3), "first failure {:?}", rep.first_failure());
    Ok(())
}

fn exactness(seed: u64, budget: Budget) -> Outcome {
    counterexample(budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for right in [false, true] {
        for i in 0..20 {
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let u = random_stable(a, rng.gen_range(1..=a), rng.gen()).map_err(err)?;
            let w = random_stable(b, rng.gen_range(1..=b), rng.gen()).map_err(err)?;
            let (phi, psi) = random_extension(&u, &w, rng.gen()).map_err(err)?;
            ensure!(check_sequence(&[phi.clone(), psi.clone()]).map_err(err)?.ah_exact(), "instance {i}: base sequence not exact");
            let zr = rng.gen_range(1..=2);
            let z = if right { random_semistable(zr, &mut rng)? } else { random_module(zr, &mut rng)? };
            if right {
                ensure!(is_semistable(&z, &canonical_probes()).map_err(err)?.0, "instance {i}: Z not semistable");
            }
            let id = AHMorphism::identity(&z);
            let rep = check_sequence(&[tensor_morphism(&phi, &id, budget).map_err(err)?, tensor_morphism(&psi, &id, budget).map_err(err)?])
                .map_err(err)?;
            let ok = if right { rep.ah_exact() } else { rep.positions[0].exact() && rep.positions[1].exact() };
            let side = if right { "right" } else { "left" };
            ensure!(ok, "{side} instance {i}: failure at {:?}", rep.first_failure());
        }
    }
    Ok(())
}

fn fueter_bridge(budget: Budget) -> Outcome {
    let u = u_linear();
    for (k, want) in [4, 12, 24, 40, 60, 84].into_iter().enumerate() {
        let fk = fueter_kernel(k);
        ensure!(fk.dim() == want, "degree {k}: kernel dim {}", fk.dim());
        if k <= 3 {
            let s = sym_power(&u, k, budget).map_err(err)?;
            ensure!(fk.fingerprint().map_err(err)? == s.fingerprint(), "degree {k}: fingerprints differ");
        }
    }
    Ok(())
}

/// `v_k·v_k - a_kk` all equal and `v_k·v_l = a_kl`, as a row space over the monomials.
fn gram_system(a: &[[Rational; 3]; 3]) -> Subspace {
    let m = Monomials::new(9);
    let shifted = |k: usize, l: usize| {
        let mut pairs: Vec<(u32, Rational)> = (0..3).map(|c| (m.quadratic(3 * k + c, 3 * l + c) as u32, Rational::one())).collect();
        pairs.push((0, -a[k][l].clone()));
        SparseVec::from_pairs(pairs)
    };
    let one = Rational::one();
    let rows = vec![
        shifted(0, 0).sub_scaled(&one, &shifted(1, 1)),
        shifted(1, 1).sub_scaled(&one, &shifted(2, 2)),
        shifted(0, 1),
        shifted(1, 2),
        shifted(0, 2),
    ];
    Subspace::span_owned(m.count(), rows)
}

fn eguchi_hanson(budget: Budget) -> Outcome {
    let fam = eh_family(&Lambda::zero(), 8, budget).map_err(err)?;
    ensure!(fam.checks.passed(), "family checks failed: {:?}", fam.checks.failures());
    for j in 0..=4usize {
        let l = (2 * j + 1) * (j + 1);
        let free = fam.free.grades()[j].dim();
        let ideal = fam.ideal.grades[j].dim();
        let quot = fam.graded.algebra.grades()[j].dims();
        ensure!(free == 2 * (j + 1) * (j + 1) * (j + 2), "grade {}: free dim {free}", 2 * j);
        ensure!(ideal == 2 * j * (j + 1) * j.saturating_sub(1), "grade {}: ideal dim {ideal}", 2 * j);
        ensure!(quot == (4 * l, 2 * l + 2 * j + 1), "grade {}: quotient dims {quot:?}", 2 * j);
    }
    ensure!(fam.system.real_equations == gram_system(Lambda::zero().matrix()), "λ = 0 system differs from the frame equations");
    let diag = Lambda::normal_form(Rational::from_int(5), Rational::from_int(2));
    let fam = eh_family(&diag, 4, budget).map_err(err)?;
    ensure!(fam.system.real_equations == gram_system(diag.matrix()), "diagonal λ system differs from the deformed equations");
    let grades = invariant_grades(4);
    for j in 0..=2 {
        ensure!(grades[2 * j] == 4 * (2 * j + 1) * (j + 1), "invariant grade {}: {}", 2 * j, grades[2 * j]);
    }
    Ok(())
}

fn hl_axioms(budget: Budget) -> Outcome {
    for (name, g) in [("so3", LieAlgebra::so3()), ("solvable2", LieAlgebra::solvable2())] {
        let hl = hl_from_lie(&g, budget).map_err(err)?;
        let rep = hl.axioms(budget).map_err(err)?;
        ensure!(rep.passed(), "{name}: {:?}", rep.failures());
        let p = poisson_on_free(&hl, 3, budget).map_err(err)?;
        ensure!(p.checks.passed(), "{name}: {:?}", p.checks.failures());
        ensure!(p.checks.checks.iter().any(|c| c.name == "derivation"), "{name}: derivation not checked");
    }
    Ok(())
}

fn axiom_a(budget: Budget) -> Outcome {
    for (name, m, k) in [("Y", y_module(), 4), ("U", u_linear(), 3)] {
        let alg = free_algebra(&m, k, budget).map_err(err)?;
        let rep = axiom_a_check(&alg, budget).map_err(err)?;
        ensure!(rep.passed(), "{name}: {:?}", rep.failures());
    }
    Ok(())
}

pub fn run(seed: u64, budget: Budget) -> Vec<SuiteItem> {
    let battery: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("dimension_theorem", Box::new(move || dimension_theorem(seed, budget))),
        ("binomial_powers", Box::new(move || binomial_powers(seed, budget))),
        ("canonical_modules", Box::new(move || canonical_modules(seed, budget))),
        ("exactness", Box::new(move || exactness(seed, budget))),
        ("fueter_bridge", Box::new(move || fueter_bridge(budget))),
        ("eguchi_hanson", Box::new(move || eguchi_hanson(budget))),
        ("hl_axioms", Box::new(move || hl_axioms(budget))),
        ("axiom_a", Box::new(move || axiom_a(budget))),
    ];
    battery
        .into_iter()
        .map(|(name, f)| {
            let out = f();
            SuiteItem { name: name.to_string(), passed: out.is_ok(), detail: out.err() }
        })
        .collect()
}
