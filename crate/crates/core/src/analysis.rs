//! Generic smoothness of a family: named witnesses first, then random members.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigenbasis::FamilyBasis;
use crate::families::{identify, match_family, permute_polynomial};
use crate::field::{FieldSpec, PrimeField, Rationals, DEFAULT_PRIME, SECOND_PRIME};
use crate::groebner::{is_smooth_cubic, singular_locus_dimension};
use crate::poly::{random_member_with, reinterpret, sample_rng, Polynomial};

pub const DEFAULT_TRIALS: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessStatus {
    GenericallySmooth,
    ProbablyAllSingular,
    StarViolated,
}

impl std::fmt::Display for SmoothnessStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SmoothnessStatus::GenericallySmooth => "generically-smooth",
            SmoothnessStatus::ProbablyAllSingular => "probably-all-singular",
            SmoothnessStatus::StarViolated => "star-violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `family <id>` for a named member, `sample <k>` for a random one.
    pub source: String,
    pub polynomial: String,
    pub field: FieldSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub status: SmoothnessStatus,
    pub witness: Option<Witness>,
    /// Random members examined.
    pub samples: u64,
    pub fields: Vec<FieldSpec>,
    /// Dimension of the singular locus of the first sample, when all are singular.
    pub singular_locus_dim: Option<i32>,
    pub star_violation: Option<usize>,
    pub note: Option<String>,
}

impl SmoothnessVerdict {
    pub fn is_smooth(&self) -> bool {
        self.status == SmoothnessStatus::GenericallySmooth
    }

    fn star_violated(i: usize) -> Self {
        SmoothnessVerdict {
            status: SmoothnessStatus::StarViolated,
            witness: None,
            samples: 0,
            fields: Vec::new(),
            singular_locus_dim: None,
            star_violation: Some(i),
            note: Some(format!("every member is singular at P{i}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    /// Smooth reduction at the given prime.
    Smooth(u32),
    /// Singular at both default primes.
    Singular,
}

/// Random member number `index` of a run seeded with `seed`, with integer
/// coefficients in `1..32003`.
pub fn sample_member(basis: &FamilyBasis, seed: u64, index: u64) -> Polynomial<PrimeField> {
    let field = PrimeField::new(DEFAULT_PRIME).expect("prime");
    sample_member_over(basis, &field, seed, index)
}

/// Like [`sample_member`] with coefficients in `1..q` for the given field.
pub fn sample_member_over(basis: &FamilyBasis, field: &PrimeField, seed: u64, index: u64) -> Polynomial<PrimeField> {
    let mut rng = sample_rng(seed, index);
    random_member_with(basis, field, &mut rng)
}

/// Smoothness of one sample: a smooth reduction mod 32003 certifies it; a
/// singular one is retried mod 65537 with the same integer coefficients.
pub fn check_sample(t: &Polynomial<PrimeField>) -> SampleOutcome {
    if is_smooth_cubic(t).expect("cubic over a large prime") {
        return SampleOutcome::Smooth(t.field().modulus());
    }
    let second = PrimeField::new(SECOND_PRIME).expect("prime");
    let lifted = reinterpret(t, &second);
    if is_smooth_cubic(&lifted).expect("cubic over a large prime") {
        SampleOutcome::Smooth(SECOND_PRIME)
    } else {
        SampleOutcome::Singular
    }
}

/// Outcomes of samples `0..trials`, evaluated concurrently, in index order.
pub fn sample_outcomes(basis: &FamilyBasis, trials: u64, seed: u64) -> Vec<SampleOutcome> {
    if basis.is_empty() {
        return vec![SampleOutcome::Singular; trials as usize];
    }
    (0..trials)
        .into_par_iter()
        .map(|k| check_sample(&sample_member(basis, seed, k)))
        .collect()
}

/// Decides whether the general member of the family is smooth.
pub fn generic_smoothness(basis: &FamilyBasis, trials: u64, seed: u64) -> SmoothnessVerdict {
    let trials = trials.max(1);
    if basis.is_empty() {
        return SmoothnessVerdict {
            status: SmoothnessStatus::ProbablyAllSingular,
            witness: None,
            samples: 0,
            fields: Vec::new(),
            singular_locus_dim: None,
            star_violation: None,
            note: Some("empty family".into()),
        };
    }

    let own = identify(&basis.automorphism)
        .filter(|f| f.basis().monomial_set() == basis.monomial_set())
        .map(|f| (f, std::array::from_fn(|i| i)));
    if let Some((fam, perm)) = own.or_else(|| match_family(basis)) {
        let w = permute_polynomial(&fam.witness_polynomial(), &perm);
        if is_smooth_cubic(&w).unwrap_or(false) {
            return SmoothnessVerdict {
                status: SmoothnessStatus::GenericallySmooth,
                witness: Some(Witness {
                    source: format!("family {}", fam.id),
                    polynomial: w.to_string(),
                    field: FieldSpec::Rationals,
                }),
                samples: 0,
                fields: vec![FieldSpec::Rationals],
                singular_locus_dim: None,
                star_violation: None,
                note: None,
            };
        }
    }

    // Ordered batches keep the reported witness independent of scheduling.
    let batch = rayon::current_num_threads().max(1) as u64;
    let mut start = 0;
    while start < trials {
        let end = (start + batch).min(trials);
        let hit = (start..end)
            .into_par_iter()
            .map(|k| {
                let t = sample_member(basis, seed, k);
                (k, check_sample(&t), t)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .find(|(_, o, _)| matches!(o, SampleOutcome::Smooth(_)));
        if let Some((k, SampleOutcome::Smooth(q), t)) = hit {
            let field = PrimeField::new(q).expect("prime");
            let shown = reinterpret(&t, &field);
            return SmoothnessVerdict {
                status: SmoothnessStatus::GenericallySmooth,
                witness: Some(Witness {
                    source: format!("sample {k}"),
                    polynomial: shown.to_string(),
                    field: FieldSpec::PrimeField(q),
                }),
                samples: k + 1,
                fields: vec![FieldSpec::PrimeField(DEFAULT_PRIME), FieldSpec::PrimeField(SECOND_PRIME)],
                singular_locus_dim: None,
                star_violation: None,
                note: None,
            };
        }
        start = end;
    }

    let first = sample_member(basis, seed, 0);
    SmoothnessVerdict {
        status: SmoothnessStatus::ProbablyAllSingular,
        witness: None,
        samples: trials,
        fields: vec![FieldSpec::PrimeField(DEFAULT_PRIME), FieldSpec::PrimeField(SECOND_PRIME)],
        singular_locus_dim: singular_locus_dimension(&first),
        star_violation: None,
        note: None,
    }
}

/// Like [`generic_smoothness`], but reports a violated condition (*) without
/// sampling.
pub fn classify_family(basis: &FamilyBasis, trials: u64, seed: u64) -> SmoothnessVerdict {
    match basis.star_violation() {
        Some(i) => SmoothnessVerdict::star_violated(i),
        None => generic_smoothness(basis, trials, seed),
    }
}

/// Exact smoothness of a rational cubic.
pub fn is_smooth_over_q(t: &Polynomial<Rationals>) -> bool {
    is_smooth_cubic(t).unwrap_or(false)
}
