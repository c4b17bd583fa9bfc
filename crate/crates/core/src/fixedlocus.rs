//! Lines of `X` fixed by a diagonal automorphism.
//!
//! An invariant line is spanned by two eigenvectors, so the fixed lines split
//! into strata indexed by the characters of those eigenvectors: lines inside
//! one eigenspace (diagonal strata) and lines joining two (cross strata).
//! Each stratum is covered by Schubert cells, and the lines of `X` in a cell
//! form the zero set of the coefficients of `T` restricted to the line.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Automorphism, NVARS};
use crate::eigenbasis::ExponentVector;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField};
use crate::groebner::{ideal_basis, MonomialOrder};
use crate::poly::{reinterpret, substitute_line, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigenspace {
    pub character: u64,
    pub coordinates: Vec<usize>,
}

impl Eigenspace {
    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }
}

/// Eigenspaces ordered by character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenDecomposition {
    pub spaces: Vec<Eigenspace>,
}

impl EigenDecomposition {
    pub fn space(&self, character: u64) -> Option<&Eigenspace> {
        self.spaces.iter().find(|s| s.character == character)
    }
}

pub fn eigen_decomposition(aut: &Automorphism) -> EigenDecomposition {
    let e = aut.exponents();
    let mut chars: Vec<u64> = e.to_vec();
    chars.sort_unstable();
    chars.dedup();
    let spaces = chars
        .into_iter()
        .map(|c| Eigenspace {
            character: c,
            coordinates: (0..NVARS).filter(|&i| e[i] == c).collect(),
        })
        .collect();
    EigenDecomposition { spaces }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumKind {
    /// Lines inside the eigenspace of one character.
    Diagonal(u64),
    /// Lines joining the eigenspaces of two characters, `a < b`.
    Cross(u64, u64),
}

impl StratumKind {
    /// The character pair, repeated for a diagonal stratum.
    pub fn characters(&self) -> (u64, u64) {
        match *self {
            StratumKind::Diagonal(a) => (a, a),
            StratumKind::Cross(a, b) => (a, b),
        }
    }
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumKind::Diagonal(a) => write!(f, "diag({a})"),
            StratumKind::Cross(a, b) => write!(f, "cross({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub kind: StratumKind,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

impl Stratum {
    /// Number of Schubert cells covering the stratum.
    pub fn charts(&self) -> usize {
        match self.kind {
            StratumKind::Diagonal(_) => {
                let d = self.source.len();
                d * d.saturating_sub(1) / 2
            }
            StratumKind::Cross(..) => self.source.len() * self.target.len(),
        }
    }

    /// Dimension of the space of all lines in the stratum.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            StratumKind::Diagonal(_) => 2 * self.source.len().saturating_sub(2),
            StratumKind::Cross(..) => self.source.len() + self.target.len() - 2,
        }
    }
}

/// Diagonal strata for eigenspaces of dimension at least 2, then cross strata,
/// ordered by character pair.
pub fn strata(dec: &EigenDecomposition) -> Vec<Stratum> {
    let mut out = Vec::new();
    for (i, a) in dec.spaces.iter().enumerate() {
        if a.dim() >= 2 {
            out.push(Stratum {
                kind: StratumKind::Diagonal(a.character),
                source: a.coordinates.clone(),
                target: a.coordinates.clone(),
            });
        }
        for b in &dec.spaces[i + 1..] {
            out.push(Stratum {
                kind: StratumKind::Cross(a.character, b.character),
                source: a.coordinates.clone(),
                target: b.coordinates.clone(),
            });
        }
    }
    out.sort_by_key(|s| {
        let (a, b) = s.kind.characters();
        (a, b)
    });
    out
}

/// Symbolic points spanning the lines of one Schubert cell, with coordinates
/// in a ring of `params` variables.
struct Cell<F: Field> {
    params: usize,
    v: Vec<Polynomial<F>>,
    w: Vec<Polynomial<F>>,
}

struct CellBuilder<'a, F: Field> {
    field: &'a F,
    params: usize,
}

impl<F: Field> CellBuilder<'_, F> {
    fn zero_point(&self) -> Vec<Polynomial<F>> {
        vec![Polynomial::zero(self.field, self.params); NVARS]
    }

    fn one(&self) -> Polynomial<F> {
        Polynomial::one(self.field, self.params)
    }

    fn param(&self, k: usize) -> Polynomial<F> {
        Polynomial::var(self.field, self.params, k)
    }
}

/// The point of `P(V)` whose first nonzero coordinate is `coords[pivot]`.
fn cross_cell<F: Field>(field: &F, source: &[usize], target: &[usize], k: usize, l: usize) -> Cell<F> {
    let params = (source.len() - 1 - k) + (target.len() - 1 - l);
    let b = CellBuilder { field, params };
    let mut next = 0;
    let mut v = b.zero_point();
    v[source[k]] = b.one();
    for &c in &source[k + 1..] {
        v[c] = b.param(next);
        next += 1;
    }
    let mut w = b.zero_point();
    w[target[l]] = b.one();
    for &c in &target[l + 1..] {
        w[c] = b.param(next);
        next += 1;
    }
    Cell { params, v, w }
}

/// Row-reduced 2-frames with pivots `p1 < p2` in the coordinates `coords`.
fn grassmann_cell<F: Field>(field: &F, coords: &[usize], p1: usize, p2: usize) -> Cell<F> {
    let d = coords.len();
    let params = (d - 2 - p1) + (d - 1 - p2);
    let b = CellBuilder { field, params };
    let mut next = 0;
    let mut v = b.zero_point();
    v[coords[p1]] = b.one();
    for (i, &c) in coords.iter().enumerate().skip(p1 + 1) {
        if i != p2 {
            v[c] = b.param(next);
            next += 1;
        }
    }
    let mut w = b.zero_point();
    w[coords[p2]] = b.one();
    for &c in &coords[p2 + 1..] {
        w[c] = b.param(next);
        next += 1;
    }
    Cell { params, v, w }
}

fn pivot_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|p1| (p1 + 1..d).map(move |p2| (p1, p2))).collect()
}

fn cell<F: Field>(field: &F, stratum: &Stratum, chart: usize) -> Result<Cell<F>> {
    let available = stratum.charts();
    if available == 0 {
        return Err(Error::EmptyStratum(format!(
            "{} has a one-dimensional eigenspace",
            stratum.kind
        )));
    }
    if chart >= available {
        return Err(Error::ChartOutOfRange { chart, available });
    }
    Ok(match stratum.kind {
        StratumKind::Diagonal(_) => {
            let (p1, p2) = pivot_pairs(stratum.source.len())[chart];
            grassmann_cell(field, &stratum.source, p1, p2)
        }
        StratumKind::Cross(..) => {
            let k = chart / stratum.target.len();
            let l = chart % stratum.target.len();
            cross_cell(field, &stratum.source, &stratum.target, k, l)
        }
    })
}

/// Checks that every monomial of `t` has character `aut.j()`.
pub fn check_pure_character<F: Field>(t: &Polynomial<F>, aut: &Automorphism) -> Result<()> {
    if t.nvars() != NVARS || !t.is_homogeneous_of_degree(3) {
        return Err(Error::NotCubic(t.to_string()));
    }
    for (m, _) in t.terms() {
        let alpha = ExponentVector::from_monomial(m).ok_or_else(|| Error::NotCubic(t.to_string()))?;
        let c = aut.character(&alpha.alpha());
        if c != aut.j() {
            return Err(Error::MixedCharacter {
                expected: aut.j(),
                detail: format!("{alpha} has character {c}"),
            });
        }
    }
    Ok(())
}

/// Generators of the ideal of lines of `X` in one Schubert cell of `stratum`,
/// as polynomials in the cell parameters.
///
/// For a cross stratum only the coefficients of `s^i t^(3-i)` with
/// `i a + (3-i) b = j` can be nonzero; the others are checked to vanish.
pub fn stratum_ideal<F: Field>(
    t: &Polynomial<F>,
    aut: &Automorphism,
    stratum: &Stratum,
    chart: usize,
) -> Result<Vec<Polynomial<F>>> {
    let c = cell(t.field(), stratum, chart)?;
    let coeffs = substitute_line(t, &c.v, &c.w);
    match stratum.kind {
        StratumKind::Diagonal(_) => Ok(coeffs.0.to_vec()),
        StratumKind::Cross(a, b) => {
            let n = aut.n();
            let mut gens = Vec::new();
            for i in 0..4u64 {
                let coeff = coeffs.s_power(i as usize);
                if (i * a + (3 - i) * b) % n == aut.j() {
                    gens.push(coeff.clone());
                } else if !coeff.is_zero() {
                    return Err(Error::MixedCharacter {
                        expected: aut.j(),
                        detail: format!("coefficient of s^{i} t^{} on {}", 3 - i, stratum.kind),
                    });
                }
            }
            Ok(gens)
        }
    }
}

/// Cells with more parameters than this get their dimension by slicing.
const SLICING_THRESHOLD: usize = 5;

/// Dimension and length of the ideal of one cell: `(-1, Some(0))` when empty.
fn cell_invariants<F: Field>(field: &F, params: usize, gens: &[Polynomial<F>]) -> (i32, Option<u64>) {
    if params == 0 {
        let contained = gens.iter().all(|g| g.is_zero());
        return if contained { (0, Some(1)) } else { (-1, Some(0)) };
    }
    if params > SLICING_THRESHOLD {
        if let Some(dim) = sliced_dimension(field, params, gens) {
            return (dim, None);
        }
    }
    let gb = ideal_basis(field, params, gens, &MonomialOrder::grevlex(params));
    let dim = gb.krull_dimension();
    let len = match dim {
        d if d < 0 => Some(0),
        0 => gb.quotient_dimension(),
        _ => None,
    };
    (dim, len)
}

/// Positive dimension of `V(gens)`, found by intersecting with `k` generic
/// affine hyperplanes for `k = params, params - 1, ...` until the
/// intersection is nonempty. `None` when only `k = 0` is left, i.e. the
/// zero set is finite.
///
/// The hyperplanes come from a fixed seed, so the result is deterministic.
fn sliced_dimension<F: Field>(field: &F, params: usize, gens: &[Polynomial<F>]) -> Option<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in (1..=params).rev() {
        let kept = params - k;
        let images: Vec<Polynomial<F>> = (0..params)
            .map(|i| {
                if i < kept {
                    return Polynomial::var(field, kept, i);
                }
                let mut h = Polynomial::constant(field, kept, field.from_i64(rng.gen_range(1..30000)));
                for v in 0..kept {
                    let c = field.from_i64(rng.gen_range(1..30000));
                    h = h.add(&Polynomial::var(field, kept, v).scale(&c));
                }
                h
            })
            .collect();
        let sliced: Vec<Polynomial<F>> = gens.iter().map(|g| g.substitute(&images)).collect();
        let dim = if kept == 0 {
            if sliced.iter().all(|g| g.is_zero()) { 0 } else { -1 }
        } else {
            ideal_basis(field, kept, &sliced, &MonomialOrder::grevlex(kept)).krull_dimension()
        };
        if dim >= 0 {
            return Some(k as i32 + dim);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub kind: StratumKind,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub charts: usize,
    /// Dimension of the fixed lines in this stratum, `-1` if there are none.
    pub dimension: i32,
    /// Number of fixed lines with multiplicity, when finitely many.
    pub count: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocusReport {
    pub field: FieldSpec,
    pub strata: Vec<StratumReport>,
    pub isolated_points: u64,
    /// Dimensions of the strata with infinitely many fixed lines.
    pub positive_dims: Vec<i32>,
}

impl FixedLocusReport {
    pub fn stratum(&self, kind: StratumKind) -> Option<&StratumReport> {
        self.strata.iter().find(|s| s.kind == kind)
    }

    /// Equal up to the field the computation ran over.
    pub fn same_counts(&self, other: &FixedLocusReport) -> bool {
        self.strata == other.strata
    }

    pub fn summary(&self) -> String {
        let mut parts = vec![format!("{} points", self.isolated_points)];
        for d in &self.positive_dims {
            parts.push(format!("dim-{d} component"));
        }
        parts.join(" + ")
    }
}

fn stratum_report<F: Field>(t: &Polynomial<F>, aut: &Automorphism, s: &Stratum) -> Result<StratumReport> {
    let charts = s.charts();
    let cells: Vec<(i32, Option<u64>)> = (0..charts)
        .into_par_iter()
        .map(|chart| {
            let c = cell(t.field(), s, chart)?;
            let gens = stratum_ideal(t, aut, s, chart)?;
            Ok(cell_invariants(t.field(), c.params, &gens))
        })
        .collect::<Result<_>>()?;
    let dimension = cells.iter().map(|c| c.0).max().unwrap_or(-1);
    let count = if dimension <= 0 {
        cells.iter().map(|c| c.1).sum::<Option<u64>>()
    } else {
        None
    };
    Ok(StratumReport {
        kind: s.kind,
        source: s.source.clone(),
        target: s.target.clone(),
        charts,
        dimension,
        count,
    })
}

/// Fixed lines of `X = V(t)` under `aut`, stratum by stratum.
pub fn fixed_lines_report<F: Field>(t: &Polynomial<F>, aut: &Automorphism) -> Result<FixedLocusReport> {
    check_pure_character(t, aut)?;
    let all = strata(&eigen_decomposition(aut));
    let reports: Vec<StratumReport> = all
        .par_iter()
        .map(|s| stratum_report(t, aut, s))
        .collect::<Result<_>>()?;
    let isolated_points = reports.iter().filter_map(|r| r.count).sum();
    let positive_dims = reports.iter().filter(|r| r.dimension > 0).map(|r| r.dimension).collect();
    Ok(FixedLocusReport {
        field: t.field().spec(),
        strata: reports,
        isolated_points,
        positive_dims,
    })
}

/// Runs [`fixed_lines_report`] at the field of `t` and again at `second`,
/// reading the coefficients as the same integers. Disagreement is reported
/// as [`Error::NotCertified`].
pub fn certified_report(
    t: &Polynomial<PrimeField>,
    aut: &Automorphism,
    second: &PrimeField,
) -> Result<FixedLocusReport> {
    let first = fixed_lines_report(t, aut)?;
    let other = fixed_lines_report(&reinterpret(t, second), aut)?;
    if !first.same_counts(&other) {
        return Err(Error::NotCertified {
            q1: t.field().modulus(),
            q2: second.modulus(),
            detail: format!("{} vs {}", first.summary(), other.summary()),
        });
    }
    Ok(first)
}

/// Number of lines, with multiplicity, on the hypersurface `V(t)` in
/// `P^(d-1)`, where `t` is a cubic in the first `d <= 4` variables.
/// `None` when there are infinitely many.
pub fn lines_in_subspace_count<F: Field>(t: &Polynomial<F>, d: usize) -> Option<u64> {
    assert!((2..=NVARS).contains(&d), "need between 2 and 6 variables");
    let t = if t.nvars() == NVARS { t.clone() } else { t.with_nvars(NVARS) };
    let coords: Vec<usize> = (0..d).collect();
    let mut total = 0;
    for (p1, p2) in pivot_pairs(d) {
        let c = grassmann_cell(t.field(), &coords, p1, p2);
        let gens = substitute_line(&t, &c.v, &c.w).0;
        match cell_invariants(t.field(), c.params, &gens) {
            (dim, _) if dim > 0 => return None,
            (_, len) => total += len?,
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::sample_member;
    use crate::families::family;
    use crate::field::{Rationals, SECOND_PRIME};
    use crate::poly::parse_polynomial;

    #[test]
    fn decompositions() {
        let d = eigen_decomposition(&family("I").unwrap().automorphism());
        assert_eq!(d.spaces.len(), 6);
        assert!(d.spaces.iter().all(|s| s.dim() == 1));
        let d = eigen_decomposition(&family("V-(1)").unwrap().automorphism());
        assert_eq!(d.space(0).unwrap().coordinates, [0, 1, 2, 3]);
        assert_eq!(d.space(1).unwrap().coordinates, [4, 5]);
        let d = eigen_decomposition(&Automorphism::identity());
        assert_eq!(d.spaces.len(), 1);
        assert_eq!(d.spaces[0].dim(), 6);
    }

    #[test]
    fn strata_and_charts() {
        let s = strata(&eigen_decomposition(&family("V-(1)").unwrap().automorphism()));
        let kinds: Vec<_> = s.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            [StratumKind::Diagonal(0), StratumKind::Cross(0, 1), StratumKind::Diagonal(1)]
        );
        assert_eq!(s[0].charts(), 6);
        assert_eq!(s[1].charts(), 8);
        assert_eq!(s[2].charts(), 1);
        assert_eq!(s[1].ambient_dim(), 4);
    }

    #[test]
    fn chart_errors() {
        let f = family("IV-(2)").unwrap();
        let aut = f.automorphism();
        let t = f.witness_polynomial();
        let s = &strata(&eigen_decomposition(&aut))[1];
        assert!(matches!(
            stratum_ideal(&t, &aut, s, 9),
            Err(Error::ChartOutOfRange { chart: 9, available: 9 })
        ));
        let lonely = Stratum {
            kind: StratumKind::Diagonal(4),
            source: vec![4],
            target: vec![4],
        };
        assert!(matches!(stratum_ideal(&t, &aut, &lonely, 0), Err(Error::EmptyStratum(_))));
    }

    #[test]
    fn cross_stratum_has_two_conditions() {
        let f = family("IV-(2)").unwrap();
        let aut = f.automorphism();
        let t = reinterpret(&sample_member(&f.basis(), 3, 0), &PrimeField::new(32003).unwrap());
        let s = strata(&eigen_decomposition(&aut))
            .into_iter()
            .find(|s| s.kind == StratumKind::Cross(0, 1))
            .unwrap();
        for chart in 0..s.charts() {
            assert_eq!(stratum_ideal(&t, &aut, &s, chart).unwrap().len(), 2);
        }
    }

    #[test]
    fn slicing_matches_exact_dimension() {
        let f = Rationals;
        let p = |s: &str| parse_polynomial(&f, 6, s).unwrap();
        let gens = [p("x0*x1 + x2^2 + 1"), p("x3^3 - x4*x5")];
        assert_eq!(sliced_dimension(&f, 6, &gens), Some(4));
        let exact = ideal_basis(&f, 6, &gens, &MonomialOrder::grevlex(6)).krull_dimension();
        assert_eq!(exact, 4);
        let points = [p("x0 - 1"), p("x1"), p("x2"), p("x3"), p("x4"), p("x5 - 2")];
        assert_eq!(sliced_dimension(&f, 6, &points), None);
        assert_eq!(sliced_dimension(&f, 6, &[p("1")]), None);
    }

    #[test]
    fn identity_has_four_dimensional_fixed_locus() {
        let f = family("0").unwrap();
        let t = sample_member(&f.basis(), 7, 0);
        let r = fixed_lines_report(&t, &f.automorphism()).unwrap();
        assert_eq!(r.isolated_points, 0);
        assert_eq!(r.positive_dims, [4]);
    }

    #[test]
    fn mixed_character_rejected() {
        let aut = family("I").unwrap().automorphism();
        let t = parse_polynomial(&Rationals, 6, "x0^3 + x0^2*x1").unwrap();
        assert!(matches!(fixed_lines_report(&t, &aut), Err(Error::MixedCharacter { .. })));
    }

    #[test]
    fn family_i_witness() {
        let f = family("I").unwrap();
        let r = fixed_lines_report(&f.witness_polynomial(), &f.automorphism()).unwrap();
        assert_eq!(r.isolated_points, 5);
        assert!(r.positive_dims.is_empty());
    }

    #[test]
    fn family_iv2_random_member() {
        let f = family("IV-(2)").unwrap();
        let t = sample_member(&f.basis(), 5, 0);
        let r = certified_report(&t, &f.automorphism(), &PrimeField::new(SECOND_PRIME).unwrap()).unwrap();
        assert_eq!(r.isolated_points, 0);
        assert_eq!(r.positive_dims, [2]);
    }

    #[test]
    fn lines_on_small_hypersurfaces() {
        let fermat = parse_polynomial(&Rationals, 4, "x0^3 + x1^3 + x2^3 + x3^3").unwrap();
        assert_eq!(lines_in_subspace_count(&fermat, 4), Some(27));
        let curve = parse_polynomial(&Rationals, 3, "x0^3 + x1^3 + x2^3").unwrap();
        assert_eq!(lines_in_subspace_count(&curve, 3), Some(0));
        let binary = parse_polynomial(&Rationals, 2, "x0^3 + x1^3").unwrap();
        assert_eq!(lines_in_subspace_count(&binary, 2), Some(0));
        assert_eq!(lines_in_subspace_count(&Polynomial::zero(&Rationals, 2), 2), Some(1));
        let many = parse_polynomial(&Rationals, 6, "x0*x1*x2").unwrap();
        assert_eq!(lines_in_subspace_count(&many, 6), None);
        let cone = parse_polynomial(&Rationals, 4, "x0^3 + x1^3 + x2^3").unwrap();
        assert_eq!(lines_in_subspace_count(&cone, 4), None);
    }
}
