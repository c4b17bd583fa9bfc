//! End-to-end checks of the classification, one per acceptance criterion.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{is_smooth_over_q, sample_outcomes, SampleOutcome};
use crate::arith::{primes_up_to, NVARS};
use crate::classifier::enumerate_candidates;
use crate::eigenbasis::{lambda_all, FamilyBasis};
use crate::families::{family, known_families, rejected_families};
use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
use crate::fixedlocus::lines_in_subspace_count;
use crate::groebner::{ideal_basis, MonomialOrder};
use crate::poly::{parse_polynomial, Monomial, Polynomial};
use crate::table::{build_table, family_fixed_locus, missing_published_strata, render_markdown, smooth_classes, TableConfig};

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "classification completeness"),
    (2, "order bounds"),
    (3, "basis sizes"),
    (4, "witness smoothness"),
    (5, "negative families"),
    (6, "fixed-locus counts"),
    (7, "V-(2) fixed points"),
    (8, "engine oracles"),
    (9, "determinism"),
];

/// Random samples per rejected family.
pub const NEGATIVE_SAMPLES: u64 = 50;
/// Random members per V-(2) family.
pub const V2_MEMBERS: u64 = 5;
/// Random ideals compared under grevlex and lex.
pub const ORDER_COMPARISONS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: u64,
    pub primes: (u32, u32),
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let t = TableConfig::default();
        VerifyConfig {
            seed: t.seed,
            trials: t.trials,
            primes: t.primes,
        }
    }
}

/// Runs the selected criteria (all when `only` is empty), in order.
pub fn run_criteria(only: &[u8], cfg: &VerifyConfig) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .map(|&(id, name)| {
            let (passed, detail) = match id {
                1 => classification(cfg),
                2 => order_bounds(cfg),
                3 => basis_sizes(),
                4 => witnesses(),
                5 => negatives(cfg),
                6 => fixed_counts(cfg),
                7 => v2_discrepancy(cfg),
                8 => engine_oracles(cfg),
                _ => determinism(cfg),
            };
            CriterionResult {
                id,
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

pub fn format_result(r: &CriterionResult) -> String {
    format!(
        "criterion {} {}: {} ({})",
        r.id,
        r.name,
        if r.passed { "PASS" } else { "FAIL" },
        r.detail
    )
}

/// The nonidentity families of the table.
fn nonidentity() -> impl Iterator<Item = &'static crate::families::KnownFamily> {
    known_families().iter().filter(|f| !f.is_identity())
}

fn classification(cfg: &VerifyConfig) -> (bool, String) {
    let (_, classes) = smooth_classes(cfg.trials, cfg.seed);
    let found: BTreeSet<&str> = classes.iter().filter_map(|c| c.family.as_deref()).collect();
    let expected: BTreeSet<&str> = nonidentity().map(|f| f.id.as_str()).collect();
    let missing: Vec<&str> = expected.difference(&found).copied().collect();
    let extra: Vec<String> = classes
        .iter()
        .filter(|c| c.family.is_none())
        .map(|c| match &c.equivalent_to {
            Some(id) => format!("{} (basis of {id} up to permutation)", c.automorphism.display_signed()),
            None => c.automorphism.display_signed(),
        })
        .collect();
    let others: Vec<String> = primes_up_to(31)
        .into_iter()
        .filter(|p| !crate::table::TABLE_PRIMES.contains(p))
        .filter_map(|p| {
            let e = enumerate_candidates(p, 1, cfg.trials, cfg.seed);
            let n = e.stats.smooth_classes.unwrap_or(0);
            (n > 0).then(|| format!("p={p}: {n}"))
        })
        .collect();
    let passed = classes.len() == expected.len() && missing.is_empty() && others.is_empty();
    let mut detail = format!("{} generically smooth classes, {} of {} families found", classes.len(), found.len(), expected.len());
    if !missing.is_empty() {
        detail += &format!("; missing {missing:?}");
    }
    if !extra.is_empty() {
        detail += &format!("; outside the table: {}", extra.join(", "));
    }
    if !others.is_empty() {
        detail += &format!("; other primes: {}", others.join(", "));
    }
    (passed, detail)
}

fn order_bounds(cfg: &VerifyConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut passed = true;
    for (p, m) in [(2, 4), (2, 5), (3, 3)] {
        let e = enumerate_candidates(p, m, cfg.trials, cfg.seed);
        let n = e.stats.smooth_classes.unwrap_or(0);
        passed &= n == 0;
        parts.push(format!("n={}: {n}", e.stats.n));
    }
    (passed, parts.join(", "))
}

/// Cubic monomials of character `j`, listed from index triples.
fn basis_by_triples(b: &FamilyBasis) -> usize {
    let e = b.automorphism.exponents();
    let n = b.automorphism.n();
    let mut count = 0;
    for i in 0..NVARS {
        for k in i..NVARS {
            for l in k..NVARS {
                if (e[i] + e[k] + e[l]) % n == b.j {
                    count += 1;
                }
            }
        }
    }
    count
}

fn basis_sizes() -> (bool, String) {
    let mut bad = Vec::new();
    for f in nonidentity() {
        let b = f.basis();
        let brute = basis_by_triples(&b);
        if b.len() != f.basis_size || brute != f.basis_size {
            bad.push(format!("{}: {} / {} vs {}", f.id, b.len(), brute, f.basis_size));
        }
    }
    let total: usize = lambda_all().len();
    let passed = bad.is_empty() && total == 56;
    let detail = if passed {
        "12 families match".to_string()
    } else {
        bad.join(", ")
    };
    (passed, detail)
}

fn witnesses() -> (bool, String) {
    let bad: Vec<&str> = known_families()
        .iter()
        .filter(|f| !is_smooth_over_q(&f.witness_polynomial()))
        .map(|f| f.id.as_str())
        .collect();
    let detail = if bad.is_empty() {
        format!("{} witnesses smooth over Q", known_families().len())
    } else {
        format!("singular: {bad:?}")
    };
    (bad.is_empty(), detail)
}

fn negatives(cfg: &VerifyConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut passed = true;
    for r in rejected_families() {
        let singular = sample_outcomes(&r.basis(), NEGATIVE_SAMPLES, cfg.seed)
            .iter()
            .filter(|o| **o == SampleOutcome::Singular)
            .count();
        passed &= singular as u64 == NEGATIVE_SAMPLES;
        parts.push(format!("{}: {singular}/{NEGATIVE_SAMPLES}", r.id));
    }
    (passed, parts.join(", "))
}

fn fixed_counts(cfg: &VerifyConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut passed = true;
    for f in nonidentity().filter(|f| f.discrepancy.is_none()) {
        match family_fixed_locus(f, cfg.seed, 0, cfg.primes) {
            Ok(c) => {
                let ok = c.isolated_points == f.fixed_points && c.positive_dims == f.surface_dims;
                passed &= ok;
                let dims = if c.positive_dims.is_empty() {
                    String::new()
                } else {
                    format!("+dim{:?}", c.positive_dims)
                };
                parts.push(format!("{} {}{dims}{}", f.id, c.isolated_points, if ok { "" } else { " MISMATCH" }));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("{}: {e}", f.id));
            }
        }
    }
    (passed, parts.join(", "))
}

fn v2_discrepancy(cfg: &VerifyConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut passed = true;
    for id in ["V-(2)(a)", "V-(2)(b)"] {
        let f = family(id).expect("known family");
        let mut counts = BTreeSet::new();
        let mut missing = 0;
        for k in 0..V2_MEMBERS {
            match family_fixed_locus(f, cfg.seed, k, cfg.primes) {
                Ok(c) => {
                    counts.insert(c.isolated_points);
                    missing += missing_published_strata(f, &c.report).len();
                }
                Err(e) => {
                    passed = false;
                    parts.push(format!("{id}: {e}"));
                }
            }
        }
        let flagged = f.discrepancy.is_some();
        passed &= counts.len() == 1 && missing == 0 && flagged;
        parts.push(format!(
            "{id}: computed {counts:?} over {V2_MEMBERS} members, published {}, published strata {}",
            f.fixed_points,
            if missing == 0 { "contained" } else { "NOT contained" }
        ));
    }
    (passed, parts.join("; "))
}

/// Random dense quadrics in three variables; generically eight common zeros.
fn random_quadric_ideal(field: &PrimeField, rng: &mut ChaCha8Rng) -> Vec<Polynomial<PrimeField>> {
    let monos: Vec<Monomial> = (0..=2u16)
        .flat_map(|a| (0..=2 - a).flat_map(move |b| (0..=2 - a - b).map(move |c| Monomial::from_exponents(&[a, b, c]))))
        .collect();
    (0..3)
        .map(|_| {
            Polynomial::from_terms(
                field,
                3,
                monos.iter().map(|m| (*m, rng.gen_range(0..field.modulus()))).collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// Coordinate pairs `{a, b}` spanning a line of every member: no basis
/// monomial is supported on `{a, b}`. Meaningful when the exponents are distinct.
pub fn distinct_eigenvalue_count(basis: &FamilyBasis) -> u64 {
    let mut count = 0;
    for a in 0..NVARS {
        for b in a + 1..NVARS {
            let mask = (1u8 << a) | (1u8 << b);
            if basis.monomials.iter().all(|m| m.support() & !mask != 0) {
                count += 1;
            }
        }
    }
    count
}

fn engine_oracles(cfg: &VerifyConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut passed = true;

    let fermat = parse_polynomial(&Rationals, 4, "x0^3 + x1^3 + x2^3 + x3^3").expect("valid");
    let lines = lines_in_subspace_count(&fermat, 4);
    passed &= lines == Some(27);
    parts.push(format!("Fermat surface lines {lines:?}"));

    let f = PrimeField::new(DEFAULT_PRIME).expect("prime");
    let fermat4 = parse_polynomial(&f, 6, "x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3").expect("valid");
    let jac = ideal_basis(&f, 6, &fermat4.jacobian(), &MonomialOrder::grevlex(6)).quotient_dimension();
    passed &= jac == Some(64);
    parts.push(format!("Fermat Jacobian quotient {jac:?}"));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut agree = 0;
    for _ in 0..ORDER_COMPARISONS {
        let gens = random_quadric_ideal(&f, &mut rng);
        let g = ideal_basis(&f, 3, &gens, &MonomialOrder::grevlex(3)).quotient_dimension();
        let l = ideal_basis(&f, 3, &gens, &MonomialOrder::lex(3)).quotient_dimension();
        if g.is_some() && g == l {
            agree += 1;
        }
    }
    passed &= agree == ORDER_COMPARISONS;
    parts.push(format!("grevlex/lex agree on {agree}/{ORDER_COMPARISONS}"));

    for id in ["I", "II", "IV-(4)", "V-(3)"] {
        let fam = family(id).expect("known family");
        let oracle = distinct_eigenvalue_count(&fam.basis());
        match family_fixed_locus(fam, cfg.seed, 0, cfg.primes) {
            Ok(c) => {
                passed &= c.isolated_points == oracle && c.positive_dims.is_empty();
                parts.push(format!("{id} oracle {oracle} vs {}", c.isolated_points));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("{id}: {e}"));
            }
        }
    }
    (passed, parts.join(", "))
}

fn determinism(cfg: &VerifyConfig) -> (bool, String) {
    let tc = TableConfig {
        seed: cfg.seed,
        trials: cfg.trials,
        fixed_loci: true,
        primes: cfg.primes,
    };
    let render = || build_table(&tc).map(|t| render_markdown(&t));
    match (render(), render()) {
        (Ok(a), Ok(b)) => (a == b, format!("{} bytes, {}", a.len(), if a == b { "identical" } else { "different" })),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}
