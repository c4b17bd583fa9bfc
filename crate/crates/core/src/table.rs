//! The classification table: every family found by enumeration, with its
//! smoothness witness and fixed locus, checked against `data/families.toml`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{classify_family, sample_member_over, SmoothnessStatus, Witness};
use crate::arith::{Automorphism, NVARS};
use crate::classifier::{enumerate_candidates, max_exponent, CandidateClass, EnumerationStats};
use crate::error::{Error, Result};
use crate::families::{known_families, unlisted_classes, KnownFamily};
use crate::field::{Field, FieldSpec, PrimeField, DEFAULT_PRIME, SECOND_PRIME};
use crate::fixedlocus::{certified_report, FixedLocusReport, StratumKind};

/// Primes for which some family exists.
pub const TABLE_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

#[derive(Clone, Debug)]
pub struct TableConfig {
    pub seed: u64,
    pub trials: u64,
    pub fixed_loci: bool,
    pub primes: (u32, u32),
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            seed: 0,
            trials: crate::analysis::DEFAULT_TRIALS,
            fixed_loci: true,
            primes: (DEFAULT_PRIME, SECOND_PRIME),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedLocusCell {
    pub isolated_points: u64,
    pub positive_dims: Vec<i32>,
    pub expected_points: u64,
    pub published_points: u64,
    /// Copied from the data file, never computed.
    pub surface_type: Option<String>,
    pub discrepancy: Option<String>,
    pub fields: Vec<FieldSpec>,
    pub report: FixedLocusReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: String,
    pub p: u64,
    pub n: u64,
    pub exponents: [i64; NVARS],
    pub j: i64,
    pub basis_size: usize,
    pub basis: Vec<String>,
    pub smoothness: SmoothnessStatus,
    pub witness: Option<Witness>,
    /// Whether enumeration produced this class as generically smooth.
    pub found_by_enumeration: bool,
    pub fixed_locus: Option<FixedLocusCell>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtraClass {
    pub automorphism: Automorphism,
    pub basis_size: usize,
    pub equivalent_to: Option<String>,
    /// Listed in the data file.
    pub expected: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub seed: u64,
    pub trials: u64,
    pub primes: [u32; 2],
    pub enumeration: Vec<EnumerationStats>,
    pub rows: Vec<TableRow>,
    pub extra_classes: Vec<ExtraClass>,
    pub mismatches: Vec<String>,
}

impl Table {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn row(&self, family: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.family == family)
    }

    /// Generically smooth nonidentity classes produced by enumeration.
    pub fn smooth_class_count(&self) -> u64 {
        self.enumeration.iter().filter_map(|s| s.smooth_classes).sum()
    }
}

/// Smooth classes for every prime of the table and every order `p^m` up to
/// the enumeration bound.
pub fn smooth_classes(trials: u64, seed: u64) -> (Vec<EnumerationStats>, Vec<CandidateClass>) {
    let mut stats = Vec::new();
    let mut classes = Vec::new();
    for p in TABLE_PRIMES {
        for m in 1..=max_exponent(p) {
            let e = enumerate_candidates(p, m, trials, seed);
            stats.push(e.stats);
            classes.extend(e.classes.into_iter().filter(|c| c.verdict.is_smooth()));
        }
    }
    (stats, classes)
}

/// Fixed locus of a random member of `f`, certified at both primes.
pub fn family_fixed_locus(f: &KnownFamily, seed: u64, index: u64, primes: (u32, u32)) -> Result<FixedLocusCell> {
    let q1 = PrimeField::new(primes.0)?;
    let q2 = PrimeField::new(primes.1)?;
    let t = sample_member_over(&f.basis(), &q1, seed, index);
    let report = certified_report(&t, &f.automorphism(), &q2)?;
    Ok(FixedLocusCell {
        isolated_points: report.isolated_points,
        positive_dims: report.positive_dims.clone(),
        expected_points: f.expected_points(),
        published_points: f.fixed_points,
        surface_type: f.surface_type.clone(),
        discrepancy: f.discrepancy.clone(),
        fields: vec![q1.spec(), q2.spec()],
        report,
    })
}

/// Published strata `[a, b, count]` whose count exceeds the computed one.
pub fn missing_published_strata(f: &KnownFamily, report: &FixedLocusReport) -> Vec<[u64; 3]> {
    f.published_strata
        .iter()
        .filter(|[a, b, count]| {
            let kind = if a == b { StratumKind::Diagonal(*a) } else { StratumKind::Cross(*a, *b) };
            report.stratum(kind).and_then(|s| s.count).unwrap_or(0) < *count
        })
        .copied()
        .collect()
}

fn build_row(
    f: &KnownFamily,
    classes: &[CandidateClass],
    cfg: &TableConfig,
    mismatches: &mut Vec<String>,
) -> Result<TableRow> {
    let aut = f.automorphism();
    let basis = f.basis();
    let verdict = classify_family(&basis, cfg.trials, cfg.seed);
    let found = f.is_identity() || classes.iter().any(|c| c.family.as_deref() == Some(f.id.as_str()));
    let mut ok = true;
    let mut fail = |msg: String| {
        ok = false;
        mismatches.push(format!("{}: {msg}", f.id));
    };
    if !found {
        fail("not produced by enumeration as a generically smooth class".into());
    }
    if basis.len() != f.basis_size {
        fail(format!("basis has {} monomials, expected {}", basis.len(), f.basis_size));
    }
    if !verdict.is_smooth() {
        fail(format!("smoothness verdict {}", verdict.status));
    }
    let fixed_locus = if cfg.fixed_loci {
        let cell = family_fixed_locus(f, cfg.seed, 0, cfg.primes)?;
        if cell.isolated_points != cell.expected_points {
            fail(format!("{} isolated fixed points, expected {}", cell.isolated_points, cell.expected_points));
        }
        if cell.positive_dims != f.surface_dims {
            fail(format!(
                "positive-dimensional strata {:?}, expected {:?}",
                cell.positive_dims, f.surface_dims
            ));
        }
        let missing = missing_published_strata(f, &cell.report);
        if !missing.is_empty() {
            fail(format!("published strata not found: {missing:?}"));
        }
        Some(cell)
    } else {
        None
    };
    Ok(TableRow {
        family: f.id.clone(),
        p: f.p,
        n: aut.n(),
        exponents: aut.signed_exponents(),
        j: aut.signed_j(),
        basis_size: basis.len(),
        basis: basis.monomial_strings(),
        smoothness: verdict.status,
        witness: verdict.witness,
        found_by_enumeration: found,
        fixed_locus,
        matches: ok,
    })
}

/// Runs the whole pipeline. Fails with [`Error::NotCertified`] when the two
/// primes give different fixed loci.
pub fn build_table(cfg: &TableConfig) -> Result<Table> {
    let (enumeration, classes) = smooth_classes(cfg.trials, cfg.seed);
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    for f in known_families() {
        rows.push(build_row(f, &classes, cfg, &mut mismatches)?);
    }

    let mut extra_classes = Vec::new();
    for c in classes.iter().filter(|c| c.family.is_none()) {
        let key = c.automorphism.class_key();
        let listed = unlisted_classes().iter().find(|u| u.automorphism().class_key() == key);
        if listed.is_none() {
            mismatches.push(format!("unexpected generically smooth class {}", c.automorphism));
        }
        extra_classes.push(ExtraClass {
            automorphism: c.automorphism,
            basis_size: c.basis.len(),
            equivalent_to: c.equivalent_to.clone(),
            expected: listed.is_some(),
            note: listed.map(|u| u.note.clone()),
        });
    }
    for u in unlisted_classes() {
        let key = u.automorphism().class_key();
        if !classes.iter().any(|c| c.automorphism.class_key() == key) {
            mismatches.push(format!("expected extra class {} not found", u.automorphism()));
        }
    }

    Ok(Table {
        seed: cfg.seed,
        trials: cfg.trials,
        primes: [cfg.primes.0, cfg.primes.1],
        enumeration,
        rows,
        extra_classes,
        mismatches,
    })
}

fn exponents_text(e: &[i64; NVARS]) -> String {
    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fixed_text(row: &TableRow) -> String {
    let Some(cell) = &row.fixed_locus else {
        return "not computed".into();
    };
    let mut parts = Vec::new();
    if cell.isolated_points > 0 || cell.positive_dims.is_empty() {
        parts.push(format!("{} points", cell.isolated_points));
    }
    for d in &cell.positive_dims {
        match &cell.surface_type {
            Some(t) => parts.push(format!("dim {d} ({t})")),
            None => parts.push(format!("dim {d}")),
        }
    }
    let mut s = parts.join(" + ");
    if cell.published_points != cell.isolated_points {
        let _ = write!(s, " [published: {}]", cell.published_points);
    }
    s
}

fn witness_text(row: &TableRow) -> String {
    match &row.witness {
        Some(w) => format!("{} over {}: {}", w.source, w.field, w.polynomial),
        None => "-".into(),
    }
}

pub fn render_markdown(t: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| family | p | n | exponents | j | dim | smooth member | fixed lines | check |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|");
    for r in &t.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.family,
            r.p,
            r.n,
            exponents_text(&r.exponents),
            r.j,
            r.basis_size,
            witness_text(r),
            fixed_text(r),
            if r.matches { "ok" } else { "MISMATCH" }
        );
    }
    let notes: Vec<&TableRow> = t
        .rows
        .iter()
        .filter(|r| r.fixed_locus.as_ref().is_some_and(|c| c.discrepancy.is_some()))
        .collect();
    if !notes.is_empty() {
        let _ = writeln!(out, "\nFixed-point discrepancies:\n");
        for r in notes {
            let c = r.fixed_locus.as_ref().expect("filtered");
            let _ = writeln!(
                out,
                "- {}: computed {}, published {}; {}",
                r.family,
                c.isolated_points,
                c.published_points,
                c.discrepancy.as_deref().unwrap_or_default()
            );
        }
    }
    if !t.extra_classes.is_empty() {
        let _ = writeln!(out, "\nGenerically smooth classes outside the table:\n");
        for c in &t.extra_classes {
            let _ = writeln!(
                out,
                "- {} (dim {}), same basis as {} up to permutation{}",
                c.automorphism.display_signed(),
                c.basis_size,
                c.equivalent_to.as_deref().unwrap_or("no family"),
                if c.expected { "" } else { " [UNEXPECTED]" }
            );
        }
    }
    let _ = writeln!(
        out,
        "\nseed {}, {} trials, primes {} and {}: {}",
        t.seed,
        t.trials,
        t.primes[0],
        t.primes[1],
        if t.all_match() { "all rows match" } else { "mismatches found" }
    );
    for m in &t.mismatches {
        let _ = writeln!(out, "- {m}");
    }
    out
}

pub fn render_json(t: &Table) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("serializable table");
    s.push('\n');
    s
}

pub fn render_csv(t: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "family",
        "p",
        "n",
        "exponents",
        "j",
        "basis_size",
        "smoothness",
        "witness_source",
        "witness",
        "isolated_points",
        "positive_dims",
        "published_points",
        "matches",
    ])
    .map_err(io)?;
    for r in &t.rows {
        let cell = r.fixed_locus.as_ref();
        let dims: Vec<String> = cell.map_or(Vec::new(), |c| c.positive_dims.iter().map(|d| d.to_string()).collect());
        w.write_record([
            r.family.clone(),
            r.p.to_string(),
            r.n.to_string(),
            exponents_text(&r.exponents),
            r.j.to_string(),
            r.basis_size.to_string(),
            r.smoothness.to_string(),
            r.witness.as_ref().map_or(String::new(), |w| w.source.clone()),
            r.witness.as_ref().map_or(String::new(), |w| w.polynomial.clone()),
            cell.map_or(String::new(), |c| c.isolated_points.to_string()),
            dims.join(";"),
            cell.map_or(String::new(), |c| c.published_points.to_string()),
            r.matches.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
