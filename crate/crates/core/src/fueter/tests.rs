use super::*;
use crate::ahmod::u_linear;
use crate::qtensor::{sym_power, Budget};

#[test]
fn kernel_dimensions() {
    for k in 0..=5 {
        assert_eq!(fueter_kernel(k).dim(), 2 * (k + 1) * (k + 2), "degree {k}");
        assert_eq!(PolySpace::new(k).real_dim(), 4 * (k + 1) * (k + 2) * (k + 3) / 6);
    }
}

#[test]
fn linear_kernel_matches_hand_condition() {
    // q0 x0 + ... + q3 x3 is in the kernel iff q0 + q1 i1 + q2 i2 + q3 i3 = 0
    let space = PolySpace::new(1);
    let slot = |p: usize| {
        let mut m = [0; 4];
        m[p] = 1;
        space.monomial_index(&m).unwrap()
    };
    let mut eqs = Vec::new();
    for h in 0..4 {
        let mut pairs = Vec::new();
        for p in 0..4 {
            for b in 0..4 {
                let (s, out) = basis_product(b, p);
                if out == h {
                    pairs.push(((4 * slot(p) + b) as u32, Rational::from_int(s as i64)));
                }
            }
        }
        eqs.push(SparseVec::from_pairs(pairs));
    }
    assert_eq!(fueter_kernel(1).kernel, Subspace::from_equations_owned(16, eqs));
}

#[test]
fn both_forms_agree() {
    for k in 0..=4 {
        assert_eq!(fueter_kernel(k).kernel, alternative_kernel(k), "degree {k}");
    }
}

#[test]
fn bridge_to_symmetric_powers() {
    let u = u_linear();
    for k in 1..=3 {
        let fk = fueter_kernel(k);
        let s = sym_power(&u, k, Budget::default()).unwrap();
        assert_eq!(fk.dims(), s.dims(), "degree {k}");
        assert_eq!(fk.fingerprint().unwrap(), s.fingerprint(), "degree {k}");
    }
    assert_eq!(fueter_kernel(1).dims(), (12, 8));
}

#[test]
fn kernel_is_h_closed_and_equivariant() {
    for k in 0..=3 {
        let fk = fueter_kernel(k);
        assert!(crate::ahmod::is_h_closed(&fk.kernel));
        assert!(fk.presentation().is_ok());
    }
    let q = Quaternion::new(Rational::new(1, 2), Rational::from_int(-2), Rational::from_int(3), Rational::new(5, 7));
    for k in 1..=3 {
        assert!(FueterOperator::new(k).is_equivariant(&q));
    }
}

#[test]
fn z2_invariant_grades() {
    assert_eq!(invariant_grades(4), vec![4, 0, 24, 0, 60]);
}

#[test]
fn holomorphic_functions_are_in_the_kernel() {
    for k in 0..=3 {
        let kernel = fueter_kernel(k).kernel;
        for j in 1..=3 {
            let hol = holomorphic_elements(k, j);
            assert!(hol.iter().all(|f| kernel.contains(f)), "degree {k}, structure {j}");
            assert_eq!(Subspace::span(kernel.ambient_dim(), &hol).dim(), 2 * (k + 1));
        }
    }
    // x2 - x3 i1 comes from the antiholomorphic x2 - i x3
    let space = PolySpace::new(1);
    let f = SparseVec::from_pairs(vec![
        ((4 * space.monomial_index(&[0, 0, 1, 0]).unwrap()) as u32, Rational::one()),
        ((4 * space.monomial_index(&[0, 0, 0, 1]).unwrap() + 1) as u32, Rational::from_int(-1)),
    ]);
    assert!(!fueter_kernel(1).kernel.contains(&f));
}

#[test]
fn evaluation() {
    let space = PolySpace::new(2);
    let h = holomorphic_elements(2, 1);
    // (x0 + i x1)^2 at (1, 2, 0, 0) is -3 + 4 i
    let x = [Rational::one(), Rational::from_int(2), Rational::zero(), Rational::zero()];
    let w = space.eval(&h[4], &x);
    assert_eq!(w, Quaternion::from_ints([-3, 4, 0, 0]));
}

#[test]
fn delta_splitting() {
    for (n, dims) in [(1, (3, 3)), (2, (10, 18)), (3, (21, 45))] {
        let d = delta_split(n);
        assert!(d.identity_holds);
        assert_eq!((d.plus, d.minus), dims);
    }
}
