use super::*;
use crate::ahmod::{fingerprint, u_linear, y_module};

fn q(v: [i64; 4]) -> Quaternion {
    Quaternion::from_ints(v)
}

fn b() -> Budget {
    Budget::default()
}

/// The modules U, V, W of the exactness counterexample.
fn exactness_triple() -> (AHModule, AHModule, AHModule) {
    let u = AHModule::new(1, Subspace::zero(4)).unwrap();
    let v_prime = Subspace::span_dense(8, &[[1, 0, 0, 0, 0, 1, 0, 0], [1, 0, 0, 0, 0, 0, 1, 0]].map(|r| r.map(Rational::from_int).to_vec()));
    let v = AHModule::new(2, v_prime).unwrap();
    let w = AHModule::new(1, Subspace::span_owned(4, [SparseVec::unit(1), SparseVec::unit(2)])).unwrap();
    (u, v, w)
}

#[test]
fn iota_of_h_is_onto() {
    let e = iota_module(&AHModule::h());
    assert_eq!(e.subspace(), &Subspace::full(4));
    assert_eq!(e.dims(), (4, 3));
}

#[test]
fn unit_and_y_square() {
    let y = y_module();
    let hy = qtensor(&AHModule::h(), &y, b()).unwrap();
    assert_eq!(hy.fingerprint(), fingerprint(&y));
    let yy = qtensor(&y, &y, b()).unwrap();
    assert_eq!(yy.dims(), (12, 7));
    assert_eq!(qtensor_k(&y, 2, b()).unwrap().dims(), (12, 7));
}

#[test]
fn zero_product_of_nonzero_modules() {
    let z = AHModule::new(1, Subspace::zero(4)).unwrap();
    assert_eq!(qtensor(&z, &z, b()).unwrap().dim(), 0);
}

#[test]
fn counterexample_products() {
    let (u, v, w) = exactness_triple();
    let z = w.clone();
    assert_eq!(qtensor(&u, &z, b()).unwrap().dim(), 0);
    assert_eq!(qtensor(&v, &z, b()).unwrap().dim(), 0);
    assert_eq!(qtensor(&w, &z, b()).unwrap().dims(), (4, 2));
}

#[test]
fn triple_linear_functions() {
    // l = js + rk - rs: (3,2) ⊗ (3,2) gives (8,4), then (8,4) ⊗ (3,2) gives (20,8)
    let u = u_linear();
    assert_eq!(qtensor_k(&u, 2, b()).unwrap().dims(), (32, 2 * 8 + 4));
    let t = qtensor_k(&u, 3, b()).unwrap();
    assert_eq!(t.dims(), (80, 2 * 20 + 8));
}

#[test]
fn powers_of_y() {
    let y = y_module();
    let s2 = sym_power(&y, 2, b()).unwrap();
    let yy = qtensor(&y, &y, b()).unwrap();
    assert_eq!(s2.dims(), yy.dims());
    // every element of Y ⊗_H Y is already symmetric
    let l = yy.layout();
    for r in yy.subspace().basis() {
        for (j, x) in r.iter() {
            let t = l.tuple(j / 4);
            let swapped = l.compress(&[t[1], t[0]]).unwrap().0;
            assert_eq!(r.get(4 * swapped + j % 4), Some(x));
        }
    }
    assert_eq!(alt_power(&y, 2, b()).unwrap().dim(), 0);
}

#[test]
fn powers_of_linear_functions() {
    let u = u_linear();
    assert_eq!(sym_power(&u, 2, b()).unwrap().dims(), (24, 15));
    let a2 = alt_power(&u, 2, b()).unwrap();
    assert_eq!(a2.dims(), (8, 5));
    assert_eq!(a2.fingerprint(), fingerprint(&y_module()));
}

#[test]
fn sigma_projects_onto_sym_power() {
    let y = y_module();
    let t = qtensor_k(&y, 2, b()).unwrap();
    let s = sym_power(&y, 2, b()).unwrap();
    for r in t.subspace().basis() {
        let sr = sigma_h(r, t.layout());
        assert!(s.contains(&sr));
        // sigma is the identity on symmetric input
        assert_eq!(sigma_h(&sr, s.layout()), sr);
    }
    let img = t.subspace().map(s.ambient_dim(), |r| sigma_h(r, t.layout()));
    assert_eq!(&img, s.subspace());
    let pimg = t.prime().map(s.ambient_dim(), |r| sigma_h(r, t.layout()));
    assert!(s.prime().contains_subspace(&pimg));
}

#[test]
fn tensor_of_identities_is_identity() {
    let y = y_module();
    let id = AHMorphism::identity(&y);
    let t = tensor_morphism(&id, &id, b()).unwrap();
    assert_eq!(t, AHMorphism::identity(t.source()));
}

#[test]
fn elem_tensor_cases() {
    let y = y_module();
    let h = AHModule::h();
    let one = SparseVec::unit(0);
    let yy = qtensor(&h, &y, b()).unwrap();
    for a in y.uprime().basis() {
        let t = elem_tensor(&one, a, &h, &y).unwrap();
        assert!(yy.contains(&t));
        assert!(!t.is_zero());
    }
    let u = AHModule::new(1, Subspace::zero(4)).unwrap();
    let x = SparseVec::from_dense(&q([1, 2, 3, 4]).c);
    let w = SparseVec::from_dense(&q([0, 1, -1, 2]).c);
    assert_eq!(elem_tensor(&x, &w, &u, &u), Err(QtError::Incompatible));
}

#[test]
fn counterexample_sequence() {
    let (u, v, w) = exactness_triple();
    let phi = AHMorphism::new(u.clone(), v.clone(), vec![vec![Quaternion::one(), Quaternion::zero()]]).unwrap();
    let psi = AHMorphism::new(v.clone(), w.clone(), vec![vec![Quaternion::zero()], vec![Quaternion::one()]]).unwrap();
    let rep = check_sequence(&[phi.clone(), psi.clone()]).unwrap();
    assert!(rep.ah_exact(), "{rep:?}");
    let z = w.clone();
    let idz = AHMorphism::identity(&z);
    let pz = tensor_morphism(&phi, &idz, b()).unwrap();
    let qz = tensor_morphism(&psi, &idz, b()).unwrap();
    let rep = check_sequence(&[pz, qz.clone()]).unwrap();
    assert_eq!(rep.dims(), vec![0, 0, 4]);
    assert_eq!(rep.first_failure(), Some(3));
    assert!(rep.positions[0].exact() && rep.positions[1].exact());
    assert!(qz.image().dim() < qz.target().dim());
}

#[test]
fn identity_sequence_is_exact() {
    let y = y_module();
    let rep = check_sequence(&[AHMorphism::identity(&y)]).unwrap();
    assert!(rep.ah_exact());
}

#[test]
fn budget_is_enforced() {
    let u = u_linear();
    let err = qtensor_k(&u, 8, Budget(1000)).unwrap_err();
    assert!(matches!(err, QtError::Budget { .. }));
}

#[test]
fn json_round_trip() {
    let e = sym_power(&y_module(), 2, b()).unwrap();
    let s = serde_json::to_string(&e).unwrap();
    assert_eq!(serde_json::from_str::<EmbeddedModule>(&s).unwrap(), e);
}
