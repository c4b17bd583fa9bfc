//! Degree-3 monomials in six variables and their character slices.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Automorphism, NVARS};
use crate::poly::Monomial;

/// Exponent tuple of a cubic monomial, `alpha_0 + ... + alpha_5 = 3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; NVARS]", into = "[u8; NVARS]")]
pub struct ExponentVector([u8; NVARS]);

impl ExponentVector {
    pub fn new(alpha: [u8; NVARS]) -> Option<Self> {
        (alpha.iter().map(|&a| a as u32).sum::<u32>() == 3).then_some(ExponentVector(alpha))
    }

    pub fn alpha(&self) -> [u8; NVARS] {
        self.0
    }

    pub fn to_monomial(&self) -> Monomial {
        Monomial::from_exponents(&self.0.map(|a| a as u16))
    }

    pub fn from_monomial(m: &Monomial) -> Option<Self> {
        if m.exps()[NVARS..].iter().any(|&e| e != 0) {
            return None;
        }
        let alpha = std::array::from_fn(|i| m.exp(i).min(255) as u8);
        Self::new(alpha)
    }

    /// Bit `i` set iff `x_i` divides the monomial.
    pub fn support(&self) -> u8 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, &a)| if a > 0 { m | (1 << i) } else { m })
    }

    /// `x_i^2 x_k` (or `x_i^3` when `i == k`).
    pub fn square_times(i: usize, k: usize) -> Self {
        let mut a = [0u8; NVARS];
        a[i] += 2;
        a[k] += 1;
        ExponentVector(a)
    }

    /// New coordinate `i` is old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize; NVARS]) -> Self {
        ExponentVector(std::array::from_fn(|i| self.0[perm[i]]))
    }
}

impl TryFrom<[u8; NVARS]> for ExponentVector {
    type Error = String;
    fn try_from(a: [u8; NVARS]) -> Result<Self, String> {
        ExponentVector::new(a).ok_or_else(|| format!("{a:?} does not have degree 3"))
    }
}

impl From<ExponentVector> for [u8; NVARS] {
    fn from(v: ExponentVector) -> Self {
        v.0
    }
}

/// All members have degree 3, so this is lex with `x0 > x1 > ...`.
impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_monomial().to_string_with(NVARS))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The monomials spanning one eigenspace of the cubic forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBasis {
    #[serde(rename = "aut")]
    pub automorphism: Automorphism,
    pub j: u64,
    /// Descending graded-lex, `x0^3` first.
    pub monomials: Vec<ExponentVector>,
}

impl FamilyBasis {
    pub fn new(automorphism: Automorphism, j: u64, monomials: impl IntoIterator<Item = ExponentVector>) -> Self {
        let set: BTreeSet<ExponentVector> = monomials.into_iter().collect();
        FamilyBasis {
            automorphism: automorphism.with_j(j as i64),
            j: j % automorphism.n(),
            monomials: set.into_iter().rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, alpha: &ExponentVector) -> bool {
        self.monomials.contains(alpha)
    }

    pub fn monomial_set(&self) -> BTreeSet<ExponentVector> {
        self.monomials.iter().copied().collect()
    }

    /// First coordinate `i` with no `x_i^2 x_k` in the basis.
    pub fn star_violation(&self) -> Option<usize> {
        (0..NVARS).find(|&i| {
            !(0..NVARS).any(|k| self.contains(&ExponentVector::square_times(i, k)))
        })
    }

    pub fn monomial_strings(&self) -> Vec<String> {
        self.monomials.iter().map(|m| m.to_string()).collect()
    }

    /// Applies a coordinate permutation to both the automorphism and the monomials.
    pub fn permuted(&self, perm: &[usize; NVARS]) -> FamilyBasis {
        FamilyBasis::new(
            self.automorphism.permuted(perm),
            self.j,
            self.monomials.iter().map(|m| m.permuted(perm)),
        )
    }
}

/// All 56 cubic monomials in six variables, descending.
pub fn lambda_all() -> Vec<ExponentVector> {
    let mut out = Vec::with_capacity(56);
    let mut a = [0u8; NVARS];
    fn rec(pos: usize, left: u8, a: &mut [u8; NVARS], out: &mut Vec<ExponentVector>) {
        if pos == NVARS - 1 {
            a[pos] = left;
            out.push(ExponentVector(*a));
            return;
        }
        for v in (0..=left).rev() {
            a[pos] = v;
            rec(pos + 1, left - v, a, out);
        }
    }
    rec(0, 3, &mut a, &mut out);
    out
}

/// Monomials of character `j`.
pub fn lambda_j(aut: &Automorphism, j: u64) -> FamilyBasis {
    let j = j % aut.n();
    let monomials = lambda_all()
        .into_iter()
        .filter(|alpha| aut.character(&alpha.alpha()) == j);
    FamilyBasis::new(*aut, j, monomials)
}

/// Coordinate `i` with no `i'` satisfying `2 e_i + e_{i'} = j (mod n)`, if any.
/// Every member of the family is singular at the `i`-th coordinate point.
pub fn star_violation(aut: &Automorphism, j: u64) -> Option<usize> {
    let n = aut.n();
    let e = aut.exponents();
    (0..NVARS).find(|&i| !(0..NVARS).any(|k| (2 * e[i] + e[k]) % n == j % n))
}

pub fn star_condition(aut: &Automorphism, j: u64) -> bool {
    star_violation(aut, j).is_none()
}

pub fn intersect_bases(b1: &FamilyBasis, b2: &FamilyBasis) -> Vec<ExponentVector> {
    let other = b2.monomial_set();
    b1.monomials.iter().filter(|m| other.contains(m)).copied().collect()
}
