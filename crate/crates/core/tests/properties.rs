use proptest::prelude::*;
use semiheap_core::derivation::{derivation_from_observable, gen_leibniz_residual, observable_from_derivation};
use semiheap_core::hilbert::{Complex, Ket, Operator, Tolerance};
use semiheap_core::kerner::{evaluate, expand, raw_terms, reconstruction_tolerance, OrthonormalBasis};
use semiheap_core::operator::{heap_residuals, tern_op};
use semiheap_core::random::{random_hermitian, random_unitary, rng};
use semiheap_core::symmetry::{cocycle_check, Cocycle, FiniteGroup};
use semiheap_core::vector::tern_vec;

fn complex() -> impl Strategy<Value = Complex> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn ket(dim: usize) -> impl Strategy<Value = Ket> {
    prop::collection::vec(complex(), dim).prop_map(|v| Ket::new(v).unwrap())
}

fn op(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec(complex(), dim * dim).prop_map(move |v| Operator::new(dim, v).unwrap())
}

fn kets(n: usize) -> impl Strategy<Value = Vec<Ket>> {
    (1usize..7).prop_flat_map(move |d| prop::collection::vec(ket(d), n))
}

fn ops(n: usize) -> impl Strategy<Value = Vec<Operator>> {
    (1usize..5).prop_flat_map(move |d| prop::collection::vec(op(d), n))
}

fn within(lhs: &Ket, rhs: &Ket) -> bool {
    let r = lhs.distance(rhs).unwrap();
    Tolerance::default().accepts(r, lhs.norm().max(rhs.norm()))
}

proptest! {
    #[test]
    fn vector_para_associativity(v in kets(5)) {
        let (a, b, c, d, e) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
        let left = tern_vec(&tern_vec(a, b, c).unwrap(), d, e).unwrap();
        prop_assert!(within(&left, &tern_vec(a, &tern_vec(d, c, b).unwrap(), e).unwrap()));
        prop_assert!(within(&left, &tern_vec(a, b, &tern_vec(c, d, e).unwrap()).unwrap()));
    }

    #[test]
    fn operator_para_associativity(v in ops(5)) {
        let (a, b, c, d, e) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
        let left = tern_op(&tern_op(a, b, c).unwrap(), d, e).unwrap();
        for other in [
            tern_op(a, &tern_op(d, c, b).unwrap(), e).unwrap(),
            tern_op(a, b, &tern_op(c, d, e).unwrap()).unwrap(),
        ] {
            let r = left.max_distance(&other).unwrap();
            prop_assert!(Tolerance::default().accepts(r, left.max_norm().max(other.max_norm())));
        }
    }

    #[test]
    fn normalized_right_malcev(v in kets(2)) {
        prop_assume!(v[1].norm() > 1e-3);
        let b = v[1].normalized().unwrap();
        prop_assert!(within(&tern_vec(&v[0], &b, &b).unwrap(), &v[0]));
    }

    #[test]
    fn generalized_leibniz_for_every_operator(a in op(3), v in prop::collection::vec(ket(3), 3)) {
        let r = gen_leibniz_residual(&a, &v[0], &v[1], &v[2]).unwrap();
        let scale = a.max_norm() * v.iter().map(Ket::norm).product::<f64>() * 9.0;
        prop_assert!(Tolerance::default().accepts(r, scale));
    }

    #[test]
    fn unitaries_form_a_heap(seed in any::<u64>(), dim in 1usize..7) {
        let mut r = rng(seed);
        let u = random_unitary(dim, &mut r).unwrap();
        let v = random_unitary(dim, &mut r).unwrap();
        let (right, left) = heap_residuals(&u, &v).unwrap();
        prop_assert!(right <= 1e-12 && left <= 1e-12);
    }

    #[test]
    fn observable_derivation_bijection_is_exact(seed in any::<u64>(), dim in 1usize..8) {
        let h = random_hermitian(dim, &mut rng(seed)).unwrap();
        let tol = Tolerance::default();
        let d = derivation_from_observable(&h, &tol).unwrap();
        prop_assert_eq!(observable_from_derivation(&d, &tol).unwrap(), h);
    }

    #[test]
    fn kerner_is_basis_independent_and_linear(
        seed in any::<u64>(),
        a in op(4),
        psi in ket(4),
        phi in ket(4),
        c in complex(),
    ) {
        let mut r = rng(seed);
        let b1 = OrthonormalBasis::from_unitary(&random_unitary(4, &mut r).unwrap()).unwrap();
        let b2 = OrthonormalBasis::standard(4).unwrap();
        let tol = reconstruction_tolerance();
        let e1 = expand(&a, &psi, &b1, 0.0).unwrap();
        let e2 = expand(&a, &psi, &b2, 0.0).unwrap();
        let (x1, x2) = (evaluate(&e1).unwrap(), evaluate(&e2).unwrap());
        prop_assert!(tol.accepts(x1.distance(&x2).unwrap(), e1.mass().max(e2.mass())));

        let mixed = &psi + &(c * &phi);
        let em = expand(&a, &mixed, &b1, 0.0).unwrap();
        let ep = expand(&a, &phi, &b1, 0.0).unwrap();
        let lhs = evaluate(&em).unwrap();
        let rhs = &x1 + &(c * &evaluate(&ep).unwrap());
        let scale = em.mass().max(e1.mass() + c.norm() * ep.mass());
        prop_assert!(tol.accepts(lhs.distance(&rhs).unwrap(), scale));
    }

    #[test]
    fn kerner_term_counts(a in op(3), psi in ket(3), zeros in prop::collection::vec(any::<bool>(), 9)) {
        // zero out a random pattern of entries
        let data: Vec<Complex> = (0..9)
            .map(|k| if zeros[k] { Complex::new(0.0, 0.0) } else { a.get(k / 3, k % 3) })
            .collect();
        let a = Operator::new(3, data).unwrap();
        let nnz = (0..9).filter(|&k| a.get(k / 3, k % 3) != Complex::new(0.0, 0.0)).count();
        let basis = OrthonormalBasis::standard(3).unwrap();
        prop_assert_eq!(raw_terms(&a, &psi, &basis).unwrap().len(), 3 * nnz);
        let ts = expand(&a, &psi, &basis, 1e-12).unwrap();
        prop_assert!(ts.terms().len() <= 27);
        prop_assert_eq!(ts.terms().len() + ts.pruned_small + ts.pruned_orthogonal, 3 * nnz);
    }

    #[test]
    fn trivial_cocycles_pass(n in 1usize..8) {
        let c = Cocycle::trivial(FiniteGroup::cyclic(n).unwrap());
        prop_assert!(cocycle_check(&c, &Tolerance::default()).pass);
    }
}
