//! Buchberger's algorithm with the Gebauer–Möller criteria and the normal
//! selection strategy, plus the dimension counts read off a Gröbner basis.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Polynomial, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    GrevLex,
    Lex,
}

/// A monomial order together with a ranking of the variables:
/// `priority[0]` is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::GrevLex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Self {
        let mut sorted = priority.clone();
        sorted.sort_unstable();
        assert!(
            sorted.iter().enumerate().all(|(i, &v)| i == v),
            "priority must be a permutation"
        );
        MonomialOrder { kind, priority }
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.priority {
                    match a.exp(v).cmp(&b.exp(v)) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &v in self.priority.iter().rev() {
                    match a.exp(v).cmp(&b.exp(v)) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Terms sorted descending under the working order; never contains zeros.
type Terms<E> = Vec<(Monomial, E)>;

struct Engine<'a, F: Field> {
    field: &'a F,
    order: &'a MonomialOrder,
}

impl<F: Field> Engine<'_, F> {
    fn from_poly(&self, p: &Polynomial<F>) -> Terms<F::Elem> {
        let mut t: Terms<F::Elem> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
        t.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        t
    }

    fn make_monic(&self, t: &mut Terms<F::Elem>) {
        if let Some((_, lc)) = t.first() {
            if !self.field.is_one(lc) {
                let inv = self.field.inv(lc);
                for (_, c) in t.iter_mut() {
                    *c = self.field.mul(c, &inv);
                }
            }
        }
    }

    /// `a - c * m * b`, both inputs descending.
    fn sub_mul(&self, a: &[(Monomial, F::Elem)], c: &F::Elem, m: &Monomial, b: &[(Monomial, F::Elem)]) -> Terms<F::Elem> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() || k < b.len() {
            let bm = b.get(k).map(|(bm, _)| bm.mul(m));
            let ord = match (a.get(i), &bm) {
                (Some((am, _)), Some(bm)) => self.order.cmp(am, bm),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm.unwrap(), f.neg(&f.mul(c, &b[k].1))));
                    k += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&a[i].1, &f.mul(c, &b[k].1));
                    if !f.is_zero(&v) {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        out
    }

    /// Full reduction of `p` modulo the monic polynomials `basis[idx]`.
    fn reduce(&self, mut p: Terms<F::Elem>, basis: &[Terms<F::Elem>], idx: &[usize]) -> Terms<F::Elem> {
        let mut done: Terms<F::Elem> = Vec::new();
        while let Some((lm, lc)) = p.first().cloned() {
            let divisor = idx.iter().find(|&&g| basis[g][0].0.divides(&lm));
            match divisor {
                Some(&g) => {
                    let q = basis[g][0].0.quotient_of(&lm);
                    p = self.sub_mul(&p, &lc, &q, &basis[g]);
                }
                None => {
                    done.push(p.remove(0));
                }
            }
        }
        done
    }

    fn spoly(&self, f: &[(Monomial, F::Elem)], g: &[(Monomial, F::Elem)]) -> Terms<F::Elem> {
        let l = f[0].0.lcm(&g[0].0);
        let mf = f[0].0.quotient_of(&l);
        let mg = g[0].0.quotient_of(&l);
        let scaled: Terms<F::Elem> = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
        self.sub_mul(&scaled, &self.field.one(), &mg, &g[1..])
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    k: usize,
    lcm: Monomial,
}

/// A reduced Gröbner basis, monic, sorted by ascending leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<Terms<F::Elem>>,
}

pub fn groebner_basis<F: Field>(gens: &[Polynomial<F>], order: &MonomialOrder) -> GroebnerBasis<F> {
    let field = gens
        .first()
        .map(|g| g.field().clone())
        .expect("groebner_basis needs at least one generator");
    let nvars = gens[0].nvars();
    assert_eq!(order.nvars(), nvars, "order and ring disagree on the variable count");
    let eng = Engine {
        field: &field,
        order,
    };

    let mut basis: Vec<Terms<F::Elem>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let insert = |h: Terms<F::Elem>, basis: &mut Vec<Terms<F::Elem>>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| {
        let hl = h[0].0;
        let hidx = basis.len();
        basis.push(h);
        active.push(true);

        // new pairs (g, h), pruned by the chain and product criteria
        let mut cands: Vec<Pair> = (0..hidx)
            .filter(|&g| active[g])
            .map(|g| Pair {
                i: g,
                k: hidx,
                lcm: basis[g][0].0.lcm(&hl),
            })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = cands.pop() {
            let coprime = basis[p.i][0].0.is_coprime(&hl);
            let dominated = cands.iter().chain(kept.iter()).any(|o| o.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|p| !basis[p.i][0].0.is_coprime(&hl))
            .collect();

        pairs.retain(|p| {
            !(hl.divides(&p.lcm)
                && basis[p.i][0].0.lcm(&hl) != p.lcm
                && basis[p.k][0].0.lcm(&hl) != p.lcm)
        });
        // dedupe fresh pairs with equal lcm
        let mut seen: Vec<Monomial> = Vec::new();
        for p in fresh {
            if !seen.contains(&p.lcm) {
                seen.push(p.lcm);
                pairs.push(p);
            }
        }

        for g in 0..hidx {
            if active[g] && hl.divides(&basis[g][0].0) {
                active[g] = false;
            }
        }
    };

    for g in gens {
        assert_eq!(g.nvars(), nvars, "generators live in different rings");
        let idx: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
        let mut h = eng.reduce(eng.from_poly(g), &basis, &idx);
        if h.is_empty() {
            continue;
        }
        eng.make_monic(&mut h);
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                pa.lcm
                    .degree()
                    .cmp(&pb.lcm.degree())
                    .then_with(|| order.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| (pa.k, pa.i).cmp(&(pb.k, pb.i)))
            })
            .unwrap();
        let p = pairs.swap_remove(best);
        let s = eng.spoly(&basis[p.i], &basis[p.k]);
        let idx: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
        let mut h = eng.reduce(s, &basis, &idx);
        if h.is_empty() {
            continue;
        }
        eng.make_monic(&mut h);
        if h[0].0.degree() == 0 {
            return GroebnerBasis {
                field: field.clone(),
                nvars,
                order: order.clone(),
                terms: vec![h],
            };
        }
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    // minimalize then interreduce
    let mut idx: Vec<usize> = (0..basis.len()).filter(|&i| active[i]).collect();
    idx.sort_by(|&a, &b| order.cmp(&basis[a][0].0, &basis[b][0].0));
    let mut minimal: Vec<usize> = Vec::new();
    for &i in &idx {
        if !minimal.iter().any(|&k| basis[k][0].0.divides(&basis[i][0].0)) {
            minimal.push(i);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for (pos, &i) in minimal.iter().enumerate() {
        let others: Vec<usize> = minimal.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &k)| k).collect();
        let head = basis[i][0].clone();
        let mut tail = eng.reduce(basis[i][1..].to_vec(), &basis, &others);
        tail.insert(0, head);
        reduced.push(tail);
    }
    GroebnerBasis {
        field,
        nvars,
        order: order.clone(),
        terms: reduced,
    }
}

impl<F: Field> GroebnerBasis<F> {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        self.terms
            .iter()
            .map(|t| Polynomial::from_terms(&self.field, self.nvars, t.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t[0].0).collect()
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.terms.iter().any(|t| t[0].0.degree() == 0)
    }

    /// Dimension of the affine variety: the largest set of variables no
    /// leading monomial is confined to. `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> i32 {
        if self.is_unit() {
            return -1;
        }
        let masks: Vec<u32> = self.terms.iter().map(|t| t[0].0.support_mask()).collect();
        let full = (1u32 << self.nvars) - 1;
        (0..=full)
            .filter(|&s| masks.iter().all(|&m| m & !s != 0))
            .map(|s| s.count_ones() as i32)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero_dimensional(&self) -> bool {
        let mut have = [false; MAX_VARS];
        for t in &self.terms {
            if let Some(v) = t[0].0.pure_power_var() {
                have[v] = true;
            }
        }
        self.is_unit() || have[..self.nvars].iter().all(|&h| h)
    }

    /// Number of standard monomials, i.e. the length of the quotient ring
    /// (points counted with multiplicity). `None` if infinite.
    pub fn quotient_dimension(&self) -> Option<u64> {
        if self.is_unit() {
            return Some(0);
        }
        if !self.is_zero_dimensional() {
            return None;
        }
        let lms = self.leading_monomials();
        let mut seen: HashSet<Monomial> = HashSet::new();
        let mut queue = VecDeque::from([Monomial::one()]);
        seen.insert(Monomial::one());
        while let Some(m) = queue.pop_front() {
            for v in 0..self.nvars {
                let next = m.mul(&Monomial::var(v));
                if !seen.contains(&next) && !lms.iter().any(|l| l.divides(&next)) {
                    seen.insert(next);
                    queue.push_back(next);
                }
            }
        }
        Some(seen.len() as u64)
    }

    pub fn normal_form(&self, p: &Polynomial<F>) -> Polynomial<F> {
        let eng = Engine {
            field: &self.field,
            order: &self.order,
        };
        let idx: Vec<usize> = (0..self.terms.len()).collect();
        let r = eng.reduce(eng.from_poly(p), &self.terms, &idx);
        Polynomial::from_terms(&self.field, self.nvars, r)
    }

    pub fn contains(&self, p: &Polynomial<F>) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Gröbner basis of the ideal generated by `gens`; an empty or all-zero list
/// gives the zero ideal in `nvars` variables.
pub fn ideal_basis<F: Field>(field: &F, nvars: usize, gens: &[Polynomial<F>], order: &MonomialOrder) -> GroebnerBasis<F> {
    let nonzero: Vec<Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return GroebnerBasis {
            field: field.clone(),
            nvars,
            order: order.clone(),
            terms: Vec::new(),
        };
    }
    groebner_basis(&nonzero, order)
}

/// Whether `V(T)` is a smooth hypersurface: the Jacobian ideal must cut out
/// only the origin. Needs characteristic 0 or at least 5.
pub fn is_smooth_cubic<F: Field>(t: &Polynomial<F>) -> Result<bool> {
    let ch = t.field().characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::UnsupportedField(format!(
            "characteristic {ch} divides the degree or its predecessor"
        )));
    }
    if t.is_zero() || !t.is_homogeneous_of_degree(3) {
        return Err(Error::NotCubic(t.to_string()));
    }
    let jac = t.jacobian();
    let gb = ideal_basis(t.field(), t.nvars(), &jac, &MonomialOrder::grevlex(t.nvars()));
    Ok(gb.is_zero_dimensional())
}

/// Dimension of the singular locus of `V(T)` in projective space, or `None`
/// when `T` is smooth.
pub fn singular_locus_dimension<F: Field>(t: &Polynomial<F>) -> Option<i32> {
    let mut gens = t.jacobian();
    gens.push(t.clone());
    let gb = ideal_basis(t.field(), t.nvars(), &gens, &MonomialOrder::grevlex(t.nvars()));
    let d = gb.krull_dimension() - 1;
    (d >= 0).then_some(d)
}
