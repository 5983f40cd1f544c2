//! Acceptance battery. Each criterion prints one PASS/FAIL line straight to stdout so the
//! lines survive the test harness's output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hquat::ahmod::{
    canonical_probes, fingerprint, is_semistable, is_stable, random_extension, random_stable, u_linear, x_q, y_module, AHModule, AHMorphism,
};
use hquat::exactq::{Quaternion, Rational, SparseVec, Subspace};
use hquat::fueter::{fueter_kernel, invariant_grades};
use hquat::halg::{axiom_a_check, free_algebra, hl_from_lie, poisson_on_free, LieAlgebra};
use hquat::qtensor::{alt_power, check_sequence, qtensor, sym_power, tensor_morphism, Budget};
use hquat::variety::{eh_family, Lambda, Monomials};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e<E: std::fmt::Debug>(x: E) -> String {
    format!("{x:?}")
}

fn criterion(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let out = f();
    let t = start.elapsed();
    let line = match &out {
        Ok(note) if t <= limit => format!("PASS {n} {name}: {note} ({:.1} s)", t.as_secs_f64()),
        Ok(_) => format!("FAIL {n} {name}: over the {} s limit ({:.1} s)", limit.as_secs(), t.as_secs_f64()),
        Err(msg) => format!("FAIL {n} {name}: {msg} ({:.1} s)", t.as_secs_f64()),
    };
    writeln!(std::io::stdout().lock(), "{line}").unwrap();
    assert!(line.starts_with("PASS"), "{line}");
}

fn budget() -> Budget {
    Budget::default()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }
}

fn stable(j: usize, r: usize, rng: &mut ChaCha8Rng) -> Result<AHModule, String> {
    let u = random_stable(j, r, rng.gen()).map_err(e)?;
    ensure!(is_stable(&u, &canonical_probes(), 30, rng.gen()).map_err(e)?.stable, "generated module fails the stability test");
    Ok(u)
}

/// Stable of rank `k`, or a sum of `X_q` for canonical directions `q` (semistable, `s = 0`),
/// or one `X_q` plus a stable module.
fn stable_or_semistable(k: usize, rng: &mut ChaCha8Rng) -> Result<AHModule, String> {
    let probes = canonical_probes();
    let v = match rng.gen_range(0..3) {
        0 => {
            let mut m = x_q(&probes[0]).map_err(e)?;
            for i in 1..k {
                m = m.direct_sum(&x_q(&probes[i % probes.len()]).map_err(e)?);
            }
            m
        }
        1 if k > 1 => x_q(&probes[rng.gen_range(0..probes.len())]).map_err(e)?.direct_sum(&stable(k - 1, 1, rng)?),
        _ => stable(k, rng.gen_range(1..=k.min(2)), rng)?,
    };
    ensure!(is_semistable(&v, &probes).map_err(e)?.0, "generated module is not semistable");
    Ok(v)
}

#[test]
fn c1_dimension_theorem() {
    criterion(1, "dimension theorem", Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
        for i in 0..60 {
            let j = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=j.min(2));
            let k = rng.gen_range(1..=3);
            let u = stable(j, r, &mut rng)?;
            let v = stable_or_semistable(k, &mut rng)?;
            let s = v.uprime().dim() - 2 * k;
            let l = j * s + r * k - r * s;
            let t = qtensor(&u, &v, budget()).map_err(e)?;
            ensure!(t.dim() == 4 * l, "pair {i} (j,r,k,s)=({j},{r},{k},{s}): dim {} != {}", t.dim(), 4 * l);
            ensure!(t.prime_dim() == 2 * l + r * s, "pair {i}: prime dim {} != {}", t.prime_dim(), 2 * l + r * s);
        }
        Ok("60 random pairs".into())
    });
}

#[test]
fn c2_binomial_powers() {
    criterion(2, "binomial powers", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut count = 0;
        for j in 1..=3 {
            for r in 1..=j.min(2) {
                for _ in 0..2 {
                    let u = stable(j, r, &mut rng)?;
                    for n in 1..=3 {
                        let (k, s) = ((j - r) * binom(r + n - 1, n - 1) + binom(r + n - 1, n), binom(r + n - 1, n));
                        let (l, t) = ((j - r) * binom(r - 1, n - 1) + binom(r, n), binom(r, n));
                        let sp = sym_power(&u, n, budget()).map_err(e)?;
                        let ap = alt_power(&u, n, budget()).map_err(e)?;
                        ensure!(sp.dims() == (4 * k, 2 * k + s), "S^{n}, (j,r)=({j},{r}): {:?} != {:?}", sp.dims(), (4 * k, 2 * k + s));
                        ensure!(ap.dims() == (4 * l, 2 * l + t), "Λ^{n}, (j,r)=({j},{r}): {:?} != {:?}", ap.dims(), (4 * l, 2 * l + t));
                        count += 2;
                    }
                }
            }
        }
        Ok(format!("{count} powers"))
    });
}

#[test]
fn c3_canonical_modules() {
    criterion(3, "canonical modules", Duration::from_secs(120), || {
        let (y, u) = (y_module(), u_linear());
        ensure!(y.dims() == (8, 5, 3), "Y dims {:?}", y.dims());
        ensure!(is_stable(&y, &canonical_probes(), 30, 1).map_err(e)?.stable, "Y unstable");
        ensure!(qtensor(&y, &y, budget()).map_err(e)?.dims() == (12, 7), "Y⊗Y");
        ensure!(alt_power(&y, 2, budget()).map_err(e)?.dim() == 0, "Λ²Y ≠ 0");
        ensure!(u.dims() == (12, 8, 4), "U dims {:?}", u.dims());
        ensure!(is_stable(&u, &canonical_probes(), 30, 2).map_err(e)?.stable, "U unstable");
        ensure!(alt_power(&u, 2, budget()).map_err(e)?.fingerprint() == fingerprint(&y), "Λ²U fingerprint differs from Y");
        for k in 0..=4 {
            let d = sym_power(&u, k, budget()).map_err(e)?.dim();
            ensure!(d == 2 * (k + 1) * (k + 2), "S^{k}U dim {d}");
        }
        Ok("Y, Y⊗Y, Λ²Y, U, Λ²U, S^kU".into())
    });
}

fn tensored(phi: &AHMorphism, psi: &AHMorphism, z: &AHModule) -> Result<(AHMorphism, AHMorphism), String> {
    let id = AHMorphism::identity(z);
    Ok((tensor_morphism(phi, &id, budget()).map_err(e)?, tensor_morphism(psi, &id, budget()).map_err(e)?))
}

#[test]
fn c4_exactness() {
    criterion(4, "exactness", Duration::from_secs(60), || {
        // the counterexample: U = (H, 0), V' = <(1, i1), (1, i2)>, W' = <i1, i2>, tensored with W
        let row = |v: [i64; 8]| v.map(Rational::from_int).to_vec();
        let u = AHModule::new(1, Subspace::zero(4)).map_err(e)?;
        let v = AHModule::new(2, Subspace::span_dense(8, &[row([1, 0, 0, 0, 0, 1, 0, 0]), row([1, 0, 0, 0, 0, 0, 1, 0])])).map_err(e)?;
        let w = AHModule::new(1, Subspace::span_owned(4, [SparseVec::unit(1), SparseVec::unit(2)])).map_err(e)?;
        let (o, z0) = (Quaternion::one(), Quaternion::zero());
        let phi = AHMorphism::new(u, v.clone(), vec![vec![o.clone(), z0.clone()]]).map_err(e)?;
        let psi = AHMorphism::new(v, w.clone(), vec![vec![z0], vec![o]]).map_err(e)?;
        ensure!(check_sequence(&[phi.clone(), psi.clone()]).map_err(e)?.ah_exact(), "counterexample base not exact");
        let (pz, qz) = tensored(&phi, &psi, &w)?;
        let rep = check_sequence(&[pz, qz.clone()]).map_err(e)?;
        ensure!(rep.dims() == vec![0, 0, 4], "tensored dims {:?}", rep.dims());
        ensure!(rep.first_failure() == Some(3), "failure at {:?}", rep.first_failure());
        ensure!(qz.image().dim() == 0, "ψ⊗id should vanish");

        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for i in 0..20 {
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let u = stable(a, rng.gen_range(1..=a), &mut rng)?;
            let w = stable(b, rng.gen_range(1..=b), &mut rng)?;
            let (phi, psi) = random_extension(&u, &w, rng.gen()).map_err(e)?;
            ensure!(check_sequence(&[phi.clone(), psi.clone()]).map_err(e)?.ah_exact(), "left {i}: base not exact");
            // any module, with a random prime part
            let n = rng.gen_range(1..=2);
            let z = loop {
                let d = rng.gen_range(1..4 * n);
                let rows: Vec<SparseVec> =
                    (0..d).map(|_| SparseVec::from_dense(&(0..4 * n).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect::<Vec<_>>())).collect();
                if let Ok(m) = AHModule::new(n, Subspace::span(4 * n, &rows)) {
                    break m;
                }
            };
            let (pz, qz) = tensored(&phi, &psi, &z)?;
            ensure!(pz.kernel().dim() == 0, "left {i}: φ⊗id not injective");
            ensure!(pz.then(&qz).map_err(e)?.image().dim() == 0, "left {i}: composite nonzero");
            let rep = check_sequence(&[pz, qz]).map_err(e)?;
            ensure!(rep.positions[0].exact() && rep.positions[1].exact(), "left {i}: {:?}", rep.first_failure());
        }
        for i in 0..20 {
            let (a, b) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let u = stable(a, rng.gen_range(1..=a), &mut rng)?;
            let w = stable(b, rng.gen_range(1..=b), &mut rng)?;
            let (phi, psi) = random_extension(&u, &w, rng.gen()).map_err(e)?;
            let z = stable_or_semistable(rng.gen_range(1..=2), &mut rng)?;
            let (pz, qz) = tensored(&phi, &psi, &z)?;
            let rep = check_sequence(&[pz, qz]).map_err(e)?;
            ensure!(rep.ah_exact(), "right {i}: failure at {:?}", rep.first_failure());
            let p = &rep.positions;
            ensure!(p[1].module_dim == p[0].module_dim + p[2].module_dim, "right {i}: dims do not add");
            ensure!(p[1].prime_kernel_dim >= p[0].prime_image_dim, "right {i}: prime parts");
        }
        Ok("counterexample + 20 left + 20 right".into())
    });
}

#[test]
fn c5_fueter_bridge() {
    criterion(5, "Fueter bridge", Duration::from_secs(120), || {
        let u = u_linear();
        for (k, want) in [4, 12, 24, 40, 60, 84].into_iter().enumerate() {
            let fk = fueter_kernel(k);
            ensure!(fk.dim() == want && want == 2 * (k + 1) * (k + 2), "degree {k}: {}", fk.dim());
            if k <= 3 {
                let s = sym_power(&u, k, budget()).map_err(e)?;
                ensure!(fk.fingerprint().map_err(e)? == s.fingerprint(), "degree {k}: fingerprint mismatch");
            }
        }
        Ok("dims 4..84, fingerprints k ≤ 3".into())
    });
}

/// `v_k · v_l` in the chart variables `3k + c`.
fn dot(m: &Monomials, k: usize, l: usize) -> SparseVec {
    SparseVec::from_pairs((0..3).map(|c| (m.quadratic(3 * k + c, 3 * l + c) as u32, Rational::one())).collect())
}

#[test]
fn c6_eguchi_hanson() {
    criterion(6, "Eguchi-Hanson battery", Duration::from_secs(600), || {
        let fam = eh_family(&Lambda::zero(), 8, budget()).map_err(e)?;
        ensure!(fam.checks.passed(), "{:?}", fam.checks.failures());
        for j in 0..=4usize {
            let (l, t) = ((2 * j + 1) * (j + 1), 2 * j + 1);
            let ideal = 2 * j * (j + 1) * j.saturating_sub(1);
            ensure!(fam.ideal.grades[j].dim() == ideal, "grade {}: ideal {}", 2 * j, fam.ideal.grades[j].dim());
            ensure!(fam.graded.algebra.grades()[j].dims() == (4 * l, 2 * l + t), "grade {}: quotient", 2 * j);
            ensure!(fam.free.grades()[j].dim() == 4 * l + ideal, "grade {}: free", 2 * j);
        }
        let m = Monomials::new(9);
        let one = Rational::one();
        // v1·v1 = v2·v2 = v3·v3, v_i·v_j = 0
        let cone = Subspace::span_owned(
            m.count(),
            vec![dot(&m, 0, 0).sub_scaled(&one, &dot(&m, 1, 1)), dot(&m, 1, 1).sub_scaled(&one, &dot(&m, 2, 2)), dot(&m, 0, 1), dot(&m, 1, 2), dot(&m, 2, 0)],
        );
        ensure!(fam.system.real_equations == cone, "λ = 0 system differs");
        // v1·v1 - a = v2·v2 - b = v3·v3, v_i·v_j = 0
        for (a, b) in [(3, 0), (5, 2), (4, 4)] {
            let lam = Lambda::normal_form(Rational::from_int(a), Rational::from_int(b));
            let sys = eh_family(&lam, 4, budget()).map_err(e)?.system;
            let c = |x: i64| SparseVec::from_pairs(vec![(0, Rational::from_int(-x))]);
            let want = Subspace::span_owned(
                m.count(),
                vec![
                    dot(&m, 0, 0).sub_scaled(&one, &dot(&m, 2, 2)).add(&c(a)),
                    dot(&m, 1, 1).sub_scaled(&one, &dot(&m, 2, 2)).add(&c(b)),
                    dot(&m, 0, 1),
                    dot(&m, 1, 2),
                    dot(&m, 2, 0),
                ],
            );
            ensure!(sys.real_equations == want, "diagonal ({a},{b}) system differs");
        }
        let grades = invariant_grades(4);
        for j in 0..=2 {
            ensure!(grades[2 * j] == 4 * (2 * j + 1) * (j + 1), "invariant grade {}", 2 * j);
        }
        Ok("grades ≤ 8, cone and diagonal systems, invariant grades".into())
    });
}

#[test]
fn c7_hl_axioms() {
    criterion(7, "HP/HL axioms", Duration::from_secs(600), || {
        for (name, g) in [("so(3)", LieAlgebra::so3()), ("solvable", LieAlgebra::solvable2())] {
            let m = g.dim();
            let hl = hl_from_lie(&g, budget()).map_err(e)?;
            ensure!(hl.xi.source().dim() == m * m * 12, "{name}: A⊗A dim {}", hl.xi.source().dim());
            let rep = hl.axioms(budget()).map_err(e)?;
            ensure!(rep.passed(), "{name}: {:?}", rep.failures());
            let p = poisson_on_free(&hl, 3, budget()).map_err(e)?;
            ensure!(p.checks.passed(), "{name}: {:?}", p.checks.failures());
            for needed in ["antisymmetry", "jacobi"] {
                ensure!(rep.checks.iter().any(|c| c.name == needed), "{name}: {needed} not checked");
            }
            ensure!(p.checks.checks.iter().any(|c| c.name == "derivation"), "{name}: derivation not checked");
            ensure!(p.checks.checks.iter().any(|c| c.name.starts_with("antisymmetry(")), "{name}: bracket antisymmetry not checked");
        }
        Ok("so(3) and the 2-dim solvable algebra at K = 3".into())
    });
}

#[test]
fn c8_axiom_a() {
    criterion(8, "Axiom A", Duration::from_secs(300), || {
        for (name, q, k) in [("Y", y_module(), 4), ("U", u_linear(), 3)] {
            let alg = free_algebra(&q, k, budget()).map_err(e)?;
            let rep = axiom_a_check(&alg, budget()).map_err(e)?;
            ensure!(rep.passed(), "{name}: {:?}", rep.failures());
            for needed in ["commutativity", "associativity", "identity"] {
                ensure!(rep.checks.iter().any(|c| c.name.starts_with(needed)), "{name}: {needed} not checked");
            }
        }
        Ok("F^Y to 4, F^U to 3".into())
    });
}
