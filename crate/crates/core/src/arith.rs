//! Residue arithmetic for diagonal automorphisms of `P^5`.
//!
//! An [`Automorphism`] is `x_i -> zeta^{e_i} x_i` for a primitive `n`-th root of
//! unity `zeta`, together with the character `j` by which it scales the cubic
//! form (`f^* T = zeta^j T`). Two descriptions are equivalent when they differ
//! by a [`SymmetryElement`]: a coordinate permutation, a rechoice of `zeta`
//! (multiplying all exponents by a unit), or a global scalar (adding a constant
//! to every exponent, which shifts `j` by three times that constant).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Polynomial;

pub const NVARS: usize = 6;

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Returns `(p, m)` with `n = p^m`, or `None` when `n` is not a prime power.
/// `n = 1` maps to `(1, 1)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n == 1 {
        return Some((1, 1));
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut rest = n;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Units of `Z/n`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

/// Least non-negative `x` with `x = a (mod na)` and `x = b (mod nb)`; moduli coprime.
pub fn crt_pair(a: u64, na: u64, b: u64, nb: u64) -> Option<u64> {
    if gcd(na, nb) != 1 {
        return None;
    }
    let n = na * nb;
    if n == 1 {
        return Some(0);
    }
    let inv = mod_inverse(na % nb, nb).unwrap_or(0);
    // x = a + na * ((b - a) * na^{-1} mod nb)
    let diff = (b as i128 - a as i128).rem_euclid(nb as i128) as u64;
    let k = (diff as u128 * inv as u128 % nb as u128) as u64;
    Some((a + na * k) % n)
}

/// Signed representative in `(-n/2, n/2]`.
pub fn signed(r: u64, n: u64) -> i64 {
    if n > 1 && 2 * r > n {
        r as i64 - n as i64
    } else {
        r as i64
    }
}

/// A diagonal projective automorphism of order dividing `n` together with the
/// character `j` of the cubic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    n: u64,
    exponents: [u64; NVARS],
    j: u64,
}

impl Automorphism {
    /// Builds an automorphism of prime-power modulus `p^m`. Entries are reduced
    /// modulo `n`. `p = 1` is accepted only for the identity.
    pub fn new(p: u64, m: u32, exponents: [i64; NVARS], j: i64) -> Result<Self> {
        if p == 1 {
            if exponents.iter().any(|&e| e != 0) || j != 0 {
                return Err(Error::InvalidAutomorphism(
                    "p = 1 is reserved for the identity".into(),
                ));
            }
            return Ok(Self::identity());
        }
        if !is_prime(p) {
            return Err(Error::InvalidAutomorphism(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidAutomorphism("m must be at least 1".into()));
        }
        let n = p
            .checked_pow(m)
            .ok_or_else(|| Error::InvalidAutomorphism("p^m overflows".into()))?;
        Ok(Self::with_modulus(n, exponents, j))
    }

    /// Builds an automorphism over an arbitrary modulus `n >= 1` (composite
    /// moduli arise from CRT composition).
    pub fn with_modulus(n: u64, exponents: [i64; NVARS], j: i64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let r = |v: i64| v.rem_euclid(n as i64) as u64;
        Automorphism {
            n,
            exponents: exponents.map(r),
            j: r(j),
        }
    }

    fn from_residues(n: u64, exponents: [u64; NVARS], j: u64) -> Self {
        Automorphism {
            n,
            exponents: exponents.map(|e| e % n),
            j: j % n,
        }
    }

    pub fn identity() -> Self {
        Automorphism {
            n: 1,
            exponents: [0; NVARS],
            j: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn exponents(&self) -> [u64; NVARS] {
        self.exponents
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn with_j(&self, j: i64) -> Self {
        Self::with_modulus(self.n, self.exponents.map(|e| e as i64), j)
    }

    pub fn prime_power(&self) -> Option<(u64, u32)> {
        prime_power(self.n)
    }

    pub fn signed_exponents(&self) -> [i64; NVARS] {
        self.exponents.map(|e| signed(e, self.n))
    }

    pub fn signed_j(&self) -> i64 {
        signed(self.j, self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == self.exponents[0])
    }

    /// Order of the represented projective transformation.
    pub fn projective_order(&self) -> u64 {
        let e0 = self.exponents[0];
        let g = self
            .exponents
            .iter()
            .fold(self.n, |g, &e| gcd(g, (e + self.n - e0) % self.n));
        self.n / g
    }

    /// Character `sum_i e_i alpha_i mod n` of the monomial `x^alpha`.
    pub fn character(&self, alpha: &[u8; NVARS]) -> u64 {
        let s: u128 = self
            .exponents
            .iter()
            .zip(alpha)
            .map(|(&e, &a)| e as u128 * a as u128)
            .sum();
        (s % self.n as u128) as u64
    }

    pub fn exponent_sum(&self) -> u64 {
        self.exponents.iter().sum::<u64>() % self.n
    }

    /// The symplectic congruence `e_0 + ... + e_5 = 2j (mod n)`.
    pub fn satisfies_symplectic_congruence(&self) -> bool {
        self.exponent_sum() == (2 * self.j) % self.n
    }

    /// Shifts so that `e_0 = 0` and re-expresses over the smallest modulus
    /// compatible with both the exponents and the character.
    ///
    /// When the character is not divisible by the common factor of the
    /// exponents the pair has no monomials of that character; the reduction
    /// then stops at `gcd(e, j, n)`.
    pub fn normalize(&self) -> Automorphism {
        let n = self.n;
        let e0 = self.exponents[0];
        let shifted = self.exponents.map(|e| (e + n - e0) % n);
        let j = (self.j + 3 * (n - e0)) % n;
        let d = shifted.iter().fold(gcd(n, j), |g, &e| gcd(g, e));
        if d <= 1 {
            return Automorphism::from_residues(n, shifted, j);
        }
        let m = n / d;
        Automorphism::from_residues(m, shifted.map(|e| e / d), j / d)
    }

    /// Lexicographically least `(exponents, j)` over the orbit under all
    /// symmetry elements. For a fixed unit and shift the permutation minimum is
    /// the sorted exponent vector, so only units and shifts are enumerated
    /// explicitly.
    pub fn canonicalize(&self) -> Automorphism {
        let n = self.n;
        let mut best: Option<([u64; NVARS], u64)> = None;
        for u in units(n) {
            for c in 0..n {
                let mut v = self.exponents.map(|e| (u * e + c) % n);
                v.sort_unstable();
                let jj = (u * self.j + 3 * c) % n;
                let cand = (v, jj);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        let (e, j) = best.expect("non-empty orbit");
        Automorphism::from_residues(n, e, j)
    }

    /// Least exponent vector over the orbit, ignoring the character.
    pub fn projective_form(&self) -> [u64; NVARS] {
        let n = self.n;
        let mut best: Option<[u64; NVARS]> = None;
        for u in units(n) {
            for c in 0..n {
                let mut v = self.exponents.map(|e| (u * e + c) % n);
                v.sort_unstable();
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best.expect("non-empty orbit")
    }

    /// Moves the pair into the frame of [`Automorphism::projective_form`],
    /// transporting `j` along the first symmetry element (units ascending,
    /// then shifts ascending) that achieves it. Pairs that differ only in `j`
    /// for the same exponents keep distinct characters.
    pub fn class_key(&self) -> Automorphism {
        let n = self.n;
        let target = self.projective_form();
        for u in units(n) {
            for c in 0..n {
                let mut v = self.exponents.map(|e| (u * e + c) % n);
                v.sort_unstable();
                if v == target {
                    return Automorphism::from_residues(n, v, (u * self.j + 3 * c) % n);
                }
            }
        }
        unreachable!("projective form lies in the orbit")
    }

    pub fn apply(&self, g: &SymmetryElement) -> Automorphism {
        let n = self.n;
        let e = std::array::from_fn(|i| (g.unit * self.exponents[g.permutation[i]] + g.shift) % n);
        Automorphism::from_residues(n, e, (g.unit * self.j + 3 * g.shift) % n)
    }

    /// Applies a coordinate permutation only: new coordinate `i` is old
    /// coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize; NVARS]) -> Automorphism {
        self.apply(&SymmetryElement {
            permutation: *perm,
            unit: 1,
            shift: 0,
        })
    }

    /// True iff `T` has pure character `j` and the symplectic congruence holds.
    pub fn is_symplectic_pair<F: Field>(&self, t: &Polynomial<F>) -> Result<bool> {
        if t.nvars() != NVARS || !t.is_homogeneous_of_degree(3) || t.is_zero() {
            return Err(Error::NotCubic(t.to_string()));
        }
        let preserved = t.terms().all(|(mono, _)| {
            let alpha = std::array::from_fn(|i| mono.exp(i) as u8);
            self.character(&alpha) == self.j
        });
        Ok(preserved && self.satisfies_symplectic_congruence())
    }

    pub fn display_signed(&self) -> String {
        format!(
            "n={} e=({}) j={}",
            self.n,
            join(&self.signed_exponents()),
            self.signed_j()
        )
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} e=({}) j={}",
            self.n,
            join(&self.exponents),
            self.j
        )
    }
}

impl PartialOrd for Automorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Automorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.exponents, self.j).cmp(&(other.n, other.exponents, other.j))
    }
}

/// Wire form: `{"p":11,"m":1,"e":[0,1,10,3,6,4],"j":1}`. Composite moduli are
/// written as `{"n":6,...}`. Exponents may be signed on input.
#[derive(Serialize, Deserialize)]
struct AutomorphismWire {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    n: Option<u64>,
    e: [i64; NVARS],
    j: i64,
}

impl Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire(false).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Automorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = AutomorphismWire::deserialize(d)?;
        let aut = match (w.p, w.m, w.n) {
            (Some(p), Some(m), None) => Automorphism::new(p, m, w.e, w.j),
            (None, None, Some(n)) if n >= 1 => Ok(Automorphism::with_modulus(n, w.e, w.j)),
            _ => Err(Error::InvalidAutomorphism(
                "expected either p and m, or n".into(),
            )),
        };
        aut.map_err(serde::de::Error::custom)
    }
}

impl Automorphism {
    fn to_wire(&self, signed_form: bool) -> AutomorphismWire {
        let (e, j) = if signed_form {
            (self.signed_exponents(), self.signed_j())
        } else {
            (self.exponents.map(|x| x as i64), self.j as i64)
        };
        match self.prime_power() {
            Some((p, m)) => AutomorphismWire {
                p: Some(p),
                m: Some(m),
                n: None,
                e,
                j,
            },
            None => AutomorphismWire {
                p: None,
                m: None,
                n: Some(self.n),
                e,
                j,
            },
        }
    }

    pub fn to_json(&self, signed_form: bool) -> serde_json::Value {
        serde_json::to_value(self.to_wire(signed_form)).expect("plain struct")
    }

    pub fn to_json_string(&self, signed_form: bool) -> String {
        serde_json::to_string(&self.to_wire(signed_form)).expect("plain struct")
    }
}

/// `e_i -> unit * e_{perm(i)} + shift`, `j -> unit * j + 3 * shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetryElement {
    pub permutation: [usize; NVARS],
    pub unit: u64,
    pub shift: u64,
}

/// All permutations of `{0..5}` in lexicographic order.
pub fn permutations() -> Vec<[usize; NVARS]> {
    let mut out = Vec::with_capacity(720);
    let mut cur = [0usize; NVARS];
    let mut used = [false; NVARS];
    fn rec(
        k: usize,
        cur: &mut [usize; NVARS],
        used: &mut [bool; NVARS],
        out: &mut Vec<[usize; NVARS]>,
    ) {
        if k == NVARS {
            out.push(*cur);
            return;
        }
        for v in 0..NVARS {
            if !used[v] {
                used[v] = true;
                cur[k] = v;
                rec(k + 1, cur, used, out);
                used[v] = false;
            }
        }
    }
    rec(0, &mut cur, &mut used, &mut out);
    out
}

/// The full symmetry group acting on pairs of modulus `n`.
pub fn symmetry_group(n: u64) -> Vec<SymmetryElement> {
    let perms = permutations();
    let mut out = Vec::new();
    for unit in units(n) {
        for shift in 0..n {
            for permutation in &perms {
                out.push(SymmetryElement {
                    permutation: *permutation,
                    unit,
                    shift,
                });
            }
        }
    }
    out
}

/// Product of two commuting automorphisms of coprime orders: exponents and
/// characters combined residue-wise by the Chinese remainder theorem.
pub fn compose_crt(a: &Automorphism, b: &Automorphism) -> Result<Automorphism> {
    let (na, nb) = (a.n, b.n);
    if gcd(na, nb) != 1 {
        return Err(Error::NotCoprime(na, nb));
    }
    let n = na * nb;
    let combine = |x: u64, y: u64| crt_pair(x, na, y, nb).expect("coprime moduli");
    let e = std::array::from_fn(|i| combine(a.exponents[i], b.exponents[i]));
    Ok(Automorphism::from_residues(n, e, combine(a.j, b.j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aut(p: u64, m: u32, e: [i64; 6], j: i64) -> Automorphism {
        Automorphism::new(p, m, e, j).unwrap()
    }

    #[test]
    fn normalize_shifts_to_zero() {
        let a = aut(11, 1, [3, 4, 2, 6, 9, 7], 10).normalize();
        assert_eq!(a, aut(11, 1, [0, 1, 10, 3, 6, 4], 1));
    }

    #[test]
    fn normalize_keeps_normalized() {
        let a = aut(2, 1, [0, 0, 0, 0, 1, 1], 0);
        assert_eq!(a.normalize(), a);
    }

    #[test]
    fn normalize_drops_common_factor() {
        let a = aut(3, 2, [0, 3, 6, 0, 3, 6], 0).normalize();
        assert_eq!(a, aut(3, 1, [0, 1, 2, 0, 1, 2], 0));
        assert_eq!(a.prime_power(), Some((3, 1)));
    }

    #[test]
    fn normalize_to_identity() {
        let a = aut(5, 1, [2, 2, 2, 2, 2, 2], 1).normalize();
        assert_eq!(a, Automorphism::identity());
    }

    #[test]
    fn subcase_iii_ii_equals_iii_i() {
        let a = aut(5, 1, [0, 1, 4, 3, 1, 3], 1);
        let b = aut(5, 1, [0, 1, 4, 3, 0, 4], 1);
        assert!(a.satisfies_symplectic_congruence());
        assert!(b.satisfies_symplectic_congruence());
        assert_eq!(a.canonicalize(), b.canonicalize());
    }

    #[test]
    fn identity_is_canonical() {
        let id = Automorphism::identity();
        assert_eq!(id.canonicalize(), id);
        assert_eq!(id.projective_order(), 1);
    }

    #[test]
    fn canonical_is_orbit_minimum_for_family_ii() {
        let a = aut(7, 1, [0, 1, 6, 3, 2, 4], 1);
        let brute = symmetry_group(7)
            .iter()
            .map(|g| {
                let b = a.apply(g);
                (b.exponents(), b.j())
            })
            .min()
            .unwrap();
        let c = a.canonicalize();
        assert_eq!((c.exponents(), c.j()), brute);
    }

    #[test]
    fn crt_composition() {
        let a = aut(2, 1, [0, 0, 0, 0, 1, 1], 0);
        let b = aut(3, 1, [0, 0, 0, 1, 1, 1], 0);
        let c = compose_crt(&a, &b).unwrap();
        assert_eq!(c.n(), 6);
        assert_eq!(c.exponents(), [0, 0, 0, 4, 1, 1]);
        assert_eq!(c.j(), 0);
        assert_eq!(compose_crt(&a, &Automorphism::identity()).unwrap(), a);
        assert_eq!(
            compose_crt(&a, &a),
            Err(Error::NotCoprime(2, 2))
        );
    }

    #[test]
    fn json_wire_format() {
        let a = aut(11, 1, [0, 1, 10, 3, 6, 4], 1);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"p":11,"m":1,"e":[0,1,10,3,6,4],"j":1}"#);
        let back: Automorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert_eq!(
            a.to_json_string(true),
            r#"{"p":11,"m":1,"e":[0,1,-1,3,-5,4],"j":1}"#
        );
        let signed: Automorphism =
            serde_json::from_str(r#"{"p":11,"m":1,"e":[0,1,-1,3,-5,4],"j":1}"#).unwrap();
        assert_eq!(signed, a);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Automorphism::new(9, 1, [0; 6], 0).is_err());
        assert!(Automorphism::new(1, 1, [0, 1, 0, 0, 0, 0], 0).is_err());
        assert!(serde_json::from_str::<Automorphism>(r#"{"e":[0,0,0,0,0,0],"j":0}"#).is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), Some((1, 1)));
    }
}
