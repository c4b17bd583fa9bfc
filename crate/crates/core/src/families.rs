//! The known families and rejected sub-families, loaded from
//! `data/families.toml`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::arith::{permutations, Automorphism, NVARS};
use crate::eigenbasis::{lambda_j, ExponentVector, FamilyBasis};
use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::poly::{parse_polynomial, Monomial, Polynomial};

const DATA: &str = include_str!("../data/families.toml");

#[derive(Clone, Debug, Deserialize)]
pub struct KnownFamily {
    pub id: String,
    pub p: u64,
    pub m: u32,
    pub e: [i64; NVARS],
    pub j: i64,
    pub basis_size: usize,
    pub witness: String,
    pub fixed_points: u64,
    pub computed_points: Option<u64>,
    pub surface_dims: Vec<i32>,
    pub surface_type: Option<String>,
    pub discrepancy: Option<String>,
    #[serde(default)]
    pub published_strata: Vec<[u64; 3]>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RejectedFamily {
    pub id: String,
    pub p: u64,
    pub m: u32,
    pub e: [i64; NVARS],
    pub j: i64,
    pub basis_size: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct UnlistedClass {
    pub p: u64,
    pub m: u32,
    pub e: [i64; NVARS],
    pub j: i64,
    pub equivalent_to: String,
    pub note: String,
}

impl UnlistedClass {
    pub fn automorphism(&self) -> Automorphism {
        Automorphism::new(self.p, self.m, self.e, self.j).expect("valid class data")
    }
}

#[derive(Debug, Deserialize)]
struct DataFile {
    family: Vec<KnownFamily>,
    rejected: Vec<RejectedFamily>,
    #[serde(default)]
    unlisted: Vec<UnlistedClass>,
}

fn data() -> &'static DataFile {
    static DATA_FILE: OnceLock<DataFile> = OnceLock::new();
    DATA_FILE.get_or_init(|| toml::from_str(DATA).expect("families.toml is well-formed"))
}

impl KnownFamily {
    pub fn automorphism(&self) -> Automorphism {
        Automorphism::new(self.p, self.m, self.e, self.j).expect("valid family data")
    }

    pub fn basis(&self) -> FamilyBasis {
        let aut = self.automorphism();
        lambda_j(&aut, aut.j())
    }

    pub fn witness_polynomial(&self) -> Polynomial<Rationals> {
        parse_polynomial(&Rationals, NVARS, &self.witness).expect("valid witness")
    }

    pub fn is_identity(&self) -> bool {
        self.p == 1
    }

    /// The isolated-point count this program should reproduce.
    pub fn expected_points(&self) -> u64 {
        self.computed_points.unwrap_or(self.fixed_points)
    }
}

impl RejectedFamily {
    pub fn automorphism(&self) -> Automorphism {
        Automorphism::new(self.p, self.m, self.e, self.j).expect("valid family data")
    }

    pub fn basis(&self) -> FamilyBasis {
        let aut = self.automorphism();
        lambda_j(&aut, aut.j())
    }
}

/// Family 0 followed by the twelve nonidentity families, in table order.
pub fn known_families() -> &'static [KnownFamily] {
    &data().family
}

pub fn rejected_families() -> &'static [RejectedFamily] {
    &data().rejected
}

/// Smooth classes found by enumeration but absent from the published table.
pub fn unlisted_classes() -> &'static [UnlistedClass] {
    &data().unlisted
}

pub fn family(id: &str) -> Result<&'static KnownFamily> {
    known_families()
        .iter()
        .find(|f| f.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Named smooth member of every family.
pub fn witness_table() -> Vec<(String, Polynomial<Rationals>)> {
    known_families()
        .iter()
        .map(|f| (f.id.clone(), f.witness_polynomial()))
        .collect()
}

/// Renames variables: new `x_i` is old `x_{perm[i]}`.
pub fn permute_polynomial<F: Field>(t: &Polynomial<F>, perm: &[usize; NVARS]) -> Polynomial<F> {
    Polynomial::from_terms(
        t.field(),
        t.nvars(),
        t.terms().map(|(m, c)| {
            let exps: [u16; NVARS] = std::array::from_fn(|i| m.exp(perm[i]));
            (Monomial::from_exponents(&exps), c.clone())
        }),
    )
}

/// A known family whose basis equals `basis` after renaming coordinates,
/// together with the permutation taking the family's frame to `basis`'s.
pub fn match_family(basis: &FamilyBasis) -> Option<(&'static KnownFamily, [usize; NVARS])> {
    let target: BTreeSet<ExponentVector> = basis.monomial_set();
    let perms = permutations();
    known_families()
        .iter()
        .filter(|f| f.basis_size == target.len())
        .find_map(|f| {
            let own = f.basis();
            perms
                .iter()
                .find(|perm| own.monomials.iter().all(|m| target.contains(&m.permuted(perm))))
                .map(|perm| (f, *perm))
        })
}

/// Identifies the family a class belongs to by comparing class keys.
pub fn identify(aut: &Automorphism) -> Option<&'static KnownFamily> {
    let key = aut.class_key();
    known_families()
        .iter()
        .find(|f| f.automorphism().class_key() == key)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_loads() {
        assert_eq!(known_families().len(), 13);
        assert_eq!(known_families()[0].id, "0");
        assert_eq!(rejected_families().len(), 8);
        assert_eq!(unlisted_classes().len(), 1);
    }

    #[test]
    fn basis_sizes() {
        for f in known_families() {
            assert_eq!(f.basis().len(), f.basis_size, "family {}", f.id);
        }
        for r in rejected_families() {
            assert_eq!(r.basis().len(), r.basis_size, "sub-family {}", r.id);
        }
    }

    #[test]
    fn data_is_symplectic() {
        for f in known_families() {
            let aut = f.automorphism();
            assert!(aut.satisfies_symplectic_congruence(), "family {}", f.id);
            assert_eq!(aut.projective_order(), aut.n(), "family {}", f.id);
        }
    }

    #[test]
    fn witnesses_lie_in_their_families() {
        for f in known_families() {
            let basis = f.basis();
            let w = f.witness_polynomial();
            for (m, _) in w.terms() {
                let alpha = ExponentVector::from_monomial(m).unwrap();
                assert!(basis.contains(&alpha), "{} not in family {}", alpha, f.id);
            }
            assert!(f.automorphism().is_symplectic_pair(&w).unwrap());
        }
    }

    #[test]
    fn match_up_to_permutation() {
        let f = family("II").unwrap();
        let perm = [3, 1, 0, 5, 2, 4];
        let moved = f.basis().permuted(&perm);
        let (found, p) = match_family(&moved).unwrap();
        assert_eq!(found.id, "II");
        let w = permute_polynomial(&f.witness_polynomial(), &p);
        for (m, _) in w.terms() {
            assert!(moved.contains(&ExponentVector::from_monomial(m).unwrap()));
        }
    }

    #[test]
    fn v2_families_are_distinct_classes() {
        let a = family("V-(2)(a)").unwrap().automorphism();
        let b = family("V-(2)(b)").unwrap().automorphism();
        assert_eq!(a.canonicalize(), b.canonicalize());
        assert_ne!(a.class_key(), b.class_key());
        assert_eq!(identify(&a).unwrap().id, "V-(2)(a)");
        assert_eq!(identify(&b).unwrap().id, "V-(2)(b)");
    }

    #[test]
    fn unlisted_class_matches_its_family() {
        for u in unlisted_classes() {
            let aut = u.automorphism();
            assert!(identify(&aut).is_none());
            let (f, _) = match_family(&lambda_j(&aut, aut.j())).unwrap();
            assert_eq!(f.id, u.equivalent_to);
        }
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(family("VI"), Err(Error::UnknownFamily(_))));
        assert_eq!(family("iv-(4)").unwrap().id, "IV-(4)");
    }
}
