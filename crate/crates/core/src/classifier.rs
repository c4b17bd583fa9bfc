//! Enumeration of symplectic pairs `(e, j)` of prime-power order, their arrow
//! diagrams, and the resulting candidate classes.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{classify_family, SmoothnessVerdict};
use crate::arith::{gcd, is_prime, Automorphism, NVARS};
use crate::eigenbasis::{lambda_j, star_violation, FamilyBasis};
use crate::error::{Error, Result};
use crate::families::{identify, match_family};

/// Largest modulus the enumeration visits.
pub const MAX_ENUMERATED_ORDER: u64 = 32;

/// Vertices are the classes of equal exponents, ordered by their first
/// coordinate; `arrows[v]` is the vertex hit by `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub vertices: Vec<Vec<usize>>,
    pub values: Vec<u64>,
    pub arrows: Vec<usize>,
}

impl Diagram {
    /// Cycles of the arrow map, each listed from its smallest vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.vertices.len();
        let mut on_cycle = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            // walk k steps to land on a cycle
            let mut v = start;
            for _ in 0..k {
                v = self.arrows[v];
            }
            if on_cycle[v] {
                continue;
            }
            let mut cycle = vec![v];
            on_cycle[v] = true;
            let mut w = self.arrows[v];
            while w != v {
                on_cycle[w] = true;
                cycle.push(w);
                w = self.arrows[w];
            }
            let min_pos = cycle.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap();
            cycle.rotate_left(min_pos);
            out.push(cycle);
        }
        out.sort();
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        l.sort_unstable();
        l
    }

    pub fn is_bijective(&self) -> bool {
        let hit: BTreeSet<usize> = self.arrows.iter().copied().collect();
        hit.len() == self.arrows.len()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |v: usize| {
            let idx: Vec<String> = self.vertices[v].iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", idx.join(","))
        };
        let parts: Vec<String> = (0..self.vertices.len())
            .map(|v| format!("{} -> {}", label(v), label(self.arrows[v])))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Arrow diagram of the pair: `i -> i'` whenever `2 e_i + e_{i'} = j (mod n)`.
pub fn build_diagram(aut: &Automorphism, j: u64) -> Result<Diagram> {
    if let Some(index) = star_violation(aut, j) {
        return Err(Error::StarViolated { index });
    }
    let n = aut.n();
    let e = aut.exponents();
    let mut vertices: Vec<Vec<usize>> = Vec::new();
    let mut values: Vec<u64> = Vec::new();
    for (i, &v) in e.iter().enumerate() {
        match values.iter().position(|&x| x == v) {
            Some(pos) => vertices[pos].push(i),
            None => {
                values.push(v);
                vertices.push(vec![i]);
            }
        }
    }
    let arrows = values
        .iter()
        .map(|&a| {
            let target = (j % n + 2 * n - (2 * a) % n) % n;
            values.iter().position(|&b| b == target).expect("condition (*) holds")
        })
        .collect();
    Ok(Diagram {
        vertices,
        values,
        arrows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CycleViolation {
    TwoCycle,
    SeveralFixedVertices(usize),
    /// `p` does not divide `((-2)^l - 1) / 3`.
    Length(usize),
}

impl fmt::Display for CycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleViolation::TwoCycle => write!(f, "cycle of length 2"),
            CycleViolation::SeveralFixedVertices(k) => write!(f, "{k} cycles of length 1"),
            CycleViolation::Length(l) => write!(f, "cycle of length {l} not allowed for this prime"),
        }
    }
}

/// Necessary conditions on the cycle structure of a diagram admitting a
/// smooth member.
pub fn cycle_admissible(d: &Diagram, p: u64, _m: u32) -> std::result::Result<(), CycleViolation> {
    let lengths = d.cycle_lengths();
    if lengths.contains(&2) {
        return Err(CycleViolation::TwoCycle);
    }
    let ones = lengths.iter().filter(|&&l| l == 1).count();
    if ones > 1 && p != 3 {
        return Err(CycleViolation::SeveralFixedVertices(ones));
    }
    for &l in &lengths {
        if (3..=6).contains(&l) {
            let q = ((-2i64).pow(l as u32) - 1) / 3;
            if q % p as i64 != 0 {
                return Err(CycleViolation::Length(l));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub p: u64,
    pub m: u32,
    pub n: u64,
    /// Nondecreasing tuples with `e_0 = 0` visited.
    pub tuples: u64,
    /// Those whose projective order is exactly `n`.
    pub exact_order: u64,
    /// Pairs `(e, j)` satisfying the symplectic congruence.
    pub symplectic_pairs: u64,
    /// Those also satisfying condition (*).
    pub star_pairs: u64,
    pub classes: u64,
    /// Classes with a smooth member, when smoothness was evaluated.
    pub smooth_classes: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateClass {
    /// Canonical exponents with the character in the same frame.
    pub automorphism: Automorphism,
    pub basis: FamilyBasis,
    pub verdict: SmoothnessVerdict,
    pub family: Option<String>,
    /// For an unidentified class, a family whose basis agrees with this one
    /// up to renaming coordinates.
    pub equivalent_to: Option<String>,
    pub cycle_lengths: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub stats: EnumerationStats,
    pub classes: Vec<CandidateClass>,
}

pub fn within_bounds(p: u64, m: u32) -> bool {
    m >= 1 && p.checked_pow(m).is_some_and(|n| n <= MAX_ENUMERATED_ORDER)
}

fn nondecreasing_tuples(n: u64) -> Vec<[u64; NVARS]> {
    let mut out = Vec::new();
    let mut cur = [0u64; NVARS];
    fn rec(pos: usize, lo: u64, n: u64, cur: &mut [u64; NVARS], out: &mut Vec<[u64; NVARS]>) {
        if pos == NVARS {
            out.push(*cur);
            return;
        }
        for v in lo..n {
            cur[pos] = v;
            rec(pos + 1, v, n, cur, out);
        }
    }
    rec(1, 0, n, &mut cur, &mut out);
    out
}

/// The classes `(e*, j)` of order exactly `p^m` satisfying the symplectic
/// congruence and condition (*): `e*` is the canonical exponent vector and
/// `j` runs over the admissible characters in that frame.
///
/// Orders above [`MAX_ENUMERATED_ORDER`] are not visited and give nothing.
pub fn enumerate_classes(p: u64, m: u32) -> (Vec<Automorphism>, EnumerationStats) {
    let mut stats = EnumerationStats {
        p,
        m,
        ..Default::default()
    };
    if !is_prime(p) || !within_bounds(p, m) {
        stats.n = p.saturating_pow(m);
        return (Vec::new(), stats);
    }
    let n = p.pow(m);
    stats.n = n;
    let tuples = nondecreasing_tuples(n);
    stats.tuples = tuples.len() as u64;

    struct Hit {
        exact: bool,
        symplectic: u64,
        star: Vec<Automorphism>,
    }
    let hits: Vec<Hit> = tuples
        .par_iter()
        .map(|e| {
            let g = e.iter().fold(n, |g, &x| gcd(g, x));
            if g != 1 {
                return Hit {
                    exact: false,
                    symplectic: 0,
                    star: Vec::new(),
                };
            }
            let sum = e.iter().sum::<u64>() % n;
            let e_signed = e.map(|x| x as i64);
            let mut symplectic = 0;
            let mut star = Vec::new();
            for j in (0..n).filter(|j| (2 * j) % n == sum) {
                symplectic += 1;
                let aut = Automorphism::with_modulus(n, e_signed, j as i64);
                if star_violation(&aut, j).is_none() {
                    star.push(aut.class_key());
                }
            }
            Hit {
                exact: true,
                symplectic,
                star,
            }
        })
        .collect();

    let mut classes = BTreeSet::new();
    for h in hits {
        stats.exact_order += h.exact as u64;
        stats.symplectic_pairs += h.symplectic;
        stats.star_pairs += h.star.len() as u64;
        classes.extend(h.star);
    }
    stats.classes = classes.len() as u64;
    (classes.into_iter().collect(), stats)
}

/// [`enumerate_classes`] plus a smoothness verdict for every class.
pub fn enumerate_candidates(p: u64, m: u32, trials: u64, seed: u64) -> Enumeration {
    let (auts, mut stats) = enumerate_classes(p, m);
    let classes: Vec<CandidateClass> = auts
        .par_iter()
        .map(|aut| candidate(aut, trials, seed))
        .collect();
    stats.smooth_classes = Some(classes.iter().filter(|c| c.verdict.is_smooth()).count() as u64);
    Enumeration { stats, classes }
}

pub fn candidate(aut: &Automorphism, trials: u64, seed: u64) -> CandidateClass {
    let basis = lambda_j(aut, aut.j());
    let verdict = classify_family(&basis, trials, seed);
    let cycle_lengths = build_diagram(aut, aut.j()).map(|d| d.cycle_lengths()).unwrap_or_default();
    let family = identify(aut).map(|f| f.id.clone());
    let equivalent_to = match family {
        Some(_) => None,
        None if verdict.is_smooth() => match_family(&basis).map(|(f, _)| f.id.clone()),
        None => None,
    };
    CandidateClass {
        automorphism: *aut,
        family,
        equivalent_to,
        basis,
        verdict,
        cycle_lengths,
    }
}

/// Largest exponent `m` visited for the prime `p`.
pub fn max_exponent(p: u64) -> u32 {
    (1..).take_while(|&m| within_bounds(p, m)).last().unwrap_or(0)
}

/// Per-order statistics for `p^1, ..., p^max_m`, smoothness included.
pub fn transcript(p: u64, max_m: u32, trials: u64, seed: u64) -> Vec<EnumerationStats> {
    (1..=max_m)
        .map(|m| enumerate_candidates(p, m, trials, seed).stats)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family;

    fn fam(id: &str) -> Automorphism {
        family(id).unwrap().automorphism()
    }

    #[test]
    fn family_i_diagram() {
        let d = build_diagram(&fam("I"), 1).unwrap();
        assert_eq!(d.cycle_lengths(), [1, 5]);
        assert!(d.is_bijective());
        assert!(cycle_admissible(&d, 11, 1).is_ok());
    }

    #[test]
    fn identity_diagram() {
        let d = build_diagram(&Automorphism::identity(), 0).unwrap();
        assert_eq!(d.vertices, vec![vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(d.arrows, vec![0]);
    }

    #[test]
    fn two_three_cycles() {
        let d = build_diagram(&fam("IV-(4)"), 6).unwrap();
        assert_eq!(d.cycle_lengths(), [3, 3]);
        assert!(cycle_admissible(&d, 3, 2).is_ok());
    }

    #[test]
    fn inadmissible_cycles() {
        let four = Diagram {
            vertices: (0..4).map(|i| vec![i]).collect(),
            values: vec![0, 1, 2, 3],
            arrows: vec![1, 2, 3, 0],
        };
        assert_eq!(cycle_admissible(&four, 7, 1), Err(CycleViolation::Length(4)));
        let two = Diagram {
            vertices: vec![vec![0], vec![1]],
            values: vec![0, 1],
            arrows: vec![1, 0],
        };
        assert_eq!(cycle_admissible(&two, 5, 1), Err(CycleViolation::TwoCycle));
    }

    #[test]
    fn star_failure_is_reported() {
        let a = Automorphism::new(3, 1, [0, 0, 0, 0, 0, 1], 1).unwrap();
        assert!(matches!(build_diagram(&a, 1), Err(Error::StarViolated { index: 5 })));
    }

    #[test]
    fn binary_tree_for_p2() {
        for id in ["V-(1)", "V-(2)(a)", "V-(2)(b)", "V-(3)"] {
            let a = fam(id);
            let d = build_diagram(&a, a.j()).unwrap();
            assert_eq!(d.cycle_lengths(), [1], "family {id}");
        }
    }

    #[test]
    fn p11_has_one_class() {
        let e = enumerate_candidates(11, 1, 20, 1);
        let smooth: Vec<_> = e.classes.iter().filter(|c| c.verdict.is_smooth()).collect();
        assert_eq!(smooth.len(), 1);
        assert_eq!(smooth[0].family.as_deref(), Some("I"));
    }

    #[test]
    fn p13_has_nothing() {
        let (classes, stats) = enumerate_classes(13, 1);
        assert!(classes.is_empty());
        assert!(stats.tuples > 0);
    }

    #[test]
    fn beyond_bounds_is_empty() {
        let (classes, stats) = enumerate_classes(2, 6);
        assert!(classes.is_empty());
        assert_eq!(stats.tuples, 0);
        assert_eq!(max_exponent(2), 5);
        assert_eq!(max_exponent(3), 3);
        assert_eq!(max_exponent(7), 1);
    }
}
