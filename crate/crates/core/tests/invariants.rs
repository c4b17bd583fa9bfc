use std::collections::BTreeSet;

use proptest::prelude::*;

use cubicfold::arith::{compose_crt, gcd, units, Automorphism, SymmetryElement, NVARS};
use cubicfold::eigenbasis::{lambda_all, lambda_j};
use cubicfold::field::{Field, PrimeField};
use cubicfold::poly::{Monomial, Polynomial};

const MODULI: [u64; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 27, 32];

fn pair() -> impl Strategy<Value = Automorphism> {
    prop::sample::select(MODULI.to_vec()).prop_flat_map(|n| {
        (prop::array::uniform6(0..n as i64), 0..n as i64)
            .prop_map(move |(e, j)| Automorphism::with_modulus(n, e, j))
    })
}

fn symmetry(n: u64) -> impl Strategy<Value = SymmetryElement> {
    (
        Just([0usize, 1, 2, 3, 4, 5]).prop_shuffle(),
        prop::sample::select(units(n)),
        0..n,
    )
        .prop_map(|(p, unit, shift)| SymmetryElement {
            permutation: p,
            unit,
            shift,
        })
}

fn pair_and_symmetry() -> impl Strategy<Value = (Automorphism, SymmetryElement)> {
    pair().prop_flat_map(|a| (Just(a), symmetry(a.n())))
}

/// Renames coordinates the same way `Automorphism::apply` does: new
/// coordinate `i` is old coordinate `perm[i]`.
fn rename<F: Field>(t: &Polynomial<F>, perm: &[usize; NVARS]) -> Polynomial<F> {
    let terms = t.terms().map(|(m, c)| {
        let exps: Vec<u16> = (0..NVARS).map(|i| m.exp(perm[i])).collect();
        (Monomial::from_exponents(&exps), c.clone())
    });
    Polynomial::from_terms(t.field(), NVARS, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_constant_on_orbits((a, g) in pair_and_symmetry()) {
        prop_assert_eq!(a.canonicalize(), a.apply(&g).canonicalize());
        prop_assert_eq!(a.projective_form(), a.apply(&g).projective_form());
    }

    #[test]
    fn canonical_form_lies_in_orbit(a in pair()) {
        let c = a.canonicalize();
        let g = cubicfold::arith::symmetry_group(a.n());
        prop_assert!(g.iter().any(|g| a.apply(g) == c));
    }

    #[test]
    fn characters_partition_the_cubic_monomials(a in pair()) {
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for j in 0..a.n() {
            let b = lambda_j(&a, j);
            total += b.len();
            seen.extend(b.monomial_set());
        }
        prop_assert_eq!(total, 56);
        prop_assert_eq!(seen.len(), 56);
    }

    #[test]
    fn symplectic_pairs_are_invariant(
        (a, g) in pair_and_symmetry(),
        coeffs in prop::collection::vec(1u32..101, 56),
    ) {
        let f = PrimeField::new(101).unwrap();
        let terms = lambda_j(&a, a.j())
            .monomial_set()
            .into_iter()
            .zip(&coeffs)
            .map(|(m, &c)| (m.to_monomial(), c));
        let t = Polynomial::from_terms(&f, NVARS, terms);
        prop_assume!(!t.is_zero());
        let moved = a.apply(&g);
        prop_assert_eq!(
            a.is_symplectic_pair(&t).unwrap(),
            moved.is_symplectic_pair(&rename(&t, &g.permutation)).unwrap()
        );
    }

    #[test]
    fn crt_composition_commutes(
        a in pair(),
        b in pair(),
    ) {
        prop_assume!(gcd(a.n(), b.n()) == 1);
        let ab = compose_crt(&a, &b).unwrap();
        let ba = compose_crt(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(ab.n(), a.n() * b.n());
        for (i, &e) in ab.exponents().iter().enumerate() {
            prop_assert_eq!(e % a.n(), a.exponents()[i]);
            prop_assert_eq!(e % b.n(), b.exponents()[i]);
        }
        prop_assert_eq!(ab.j() % a.n(), a.j());
    }

    #[test]
    fn crt_basis_is_the_common_basis(a in pair(), b in pair()) {
        prop_assume!(gcd(a.n(), b.n()) == 1);
        let ab = compose_crt(&a, &b).unwrap();
        let expected: BTreeSet<_> = lambda_all()
            .into_iter()
            .filter(|m| a.character(&m.alpha()) == a.j() && b.character(&m.alpha()) == b.j())
            .collect();
        prop_assert_eq!(lambda_j(&ab, ab.j()).monomial_set(), expected);
    }

    #[test]
    fn normalization_keeps_the_basis(a in pair()) {
        let b = a.normalize();
        prop_assert_eq!(b.exponents()[0], 0);
        prop_assert_eq!(lambda_j(&a, a.j()).monomial_set(), lambda_j(&b, b.j()).monomial_set());
    }
}
