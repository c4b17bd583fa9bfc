use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Polynomial;
use crate::eigenbasis::FamilyBasis;
use crate::error::Result;
use crate::field::{Field, PrimeField, Rationals};

/// Deterministic generator for sample `stream` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A member of the family with independent uniform coefficients in
/// `1..q` on exactly the basis monomials.
pub fn random_member(basis: &FamilyBasis, field: &PrimeField, seed: u64) -> Polynomial<PrimeField> {
    let mut rng = sample_rng(seed, 0);
    random_member_with(basis, field, &mut rng)
}

pub(crate) fn random_member_with(
    basis: &FamilyBasis,
    field: &PrimeField,
    rng: &mut impl Rng,
) -> Polynomial<PrimeField> {
    let q = field.modulus();
    Polynomial::from_terms(
        field,
        6,
        basis
            .monomials
            .iter()
            .map(|alpha| (alpha.to_monomial(), rng.gen_range(1..q))),
    )
}

/// Reduces a rational polynomial modulo the characteristic of `target`;
/// fails when a denominator vanishes there.
pub fn reduce_rational(p: &Polynomial<Rationals>, target: &PrimeField) -> Result<Polynomial<PrimeField>> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        terms.push((*m, target.from_ratio(c.numer(), c.denom())?));
    }
    Ok(Polynomial::from_terms(target, p.nvars(), terms))
}

/// Reads each residue as an integer in `0..q` and reduces it into `target`.
/// Coefficients drawn below both moduli describe the same integer polynomial.
pub fn reinterpret(p: &Polynomial<PrimeField>, target: &PrimeField) -> Polynomial<PrimeField> {
    p.map_field(target, |c| target.from_i64(*c as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Automorphism;
    use crate::eigenbasis::lambda_j;

    fn family_i() -> FamilyBasis {
        let aut = Automorphism::new(11, 1, [0, 1, 10, 3, 6, 4], 1).unwrap();
        lambda_j(&aut, 1)
    }

    #[test]
    fn support_is_the_basis() {
        let f = PrimeField::new(32003).unwrap();
        let b = family_i();
        let t = random_member(&b, &f, 1);
        assert_eq!(t.len(), 6);
        for alpha in &b.monomials {
            assert_ne!(t.coefficient(&alpha.to_monomial()), 0);
        }
        let aut = b.automorphism;
        assert!(t.terms().all(|(m, _)| {
            let a = std::array::from_fn(|i| m.exp(i) as u8);
            aut.character(&a) == b.j
        }));
    }

    #[test]
    fn seeds_differ_and_repeat() {
        let f = PrimeField::new(32003).unwrap();
        let b = family_i();
        assert_eq!(random_member(&b, &f, 5), random_member(&b, &f, 5));
        assert_ne!(random_member(&b, &f, 1), random_member(&b, &f, 2));
    }
}
