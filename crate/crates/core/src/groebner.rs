//! Buchberger's algorithm with the sugar selection strategy and the
//! Gebauer–Möller criteria.
//!
//! Polynomials are kept as term vectors sorted in decreasing term order.
//! Pair selection is deterministic: smallest sugar first, ties broken by the
//! term order on the pair's lcm and then by the pair indices.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};


use crate::error::{Error, Result};
use crate::poly::LaurentPoly;
use crate::scalar::Field;

pub type Mono = Vec<u32>;

static DEFAULT_BUDGET: AtomicU64 = AtomicU64::new(1_000_000);

/// Sets the process-wide default reduction budget used by new computations.
pub fn set_default_budget(steps: u64) {
    DEFAULT_BUDGET.store(steps.max(1), AtomicOrdering::Relaxed);
}

pub fn default_budget() -> u64 {
    DEFAULT_BUDGET.load(AtomicOrdering::Relaxed)
}

/// Counts reduction steps; exceeding it is a resource-limit error.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn from_default() -> Self {
        Self::new(default_budget())
    }

    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::ResourceLimit(format!(
                "Groebner reduction budget of {} steps exhausted",
                self.limit
            )))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    Lex,
    DegRevLex,
}

/// A monomial order, optionally refined into a two-block elimination order.
///
/// With a block mask, monomials are first compared on the masked variables
/// (the block being eliminated), then on the rest; both blocks use `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    base: BaseOrder,
    block: Option<Vec<bool>>,
}

impl TermOrder {
    pub fn lex() -> Self {
        TermOrder {
            base: BaseOrder::Lex,
            block: None,
        }
    }

    pub fn degrevlex() -> Self {
        TermOrder {
            base: BaseOrder::DegRevLex,
            block: None,
        }
    }

    pub fn elimination(eliminate: Vec<bool>) -> Self {
        TermOrder {
            base: BaseOrder::DegRevLex,
            block: Some(eliminate),
        }
    }

    pub fn with_base(mut self, base: BaseOrder) -> Self {
        self.base = base;
        self
    }

    pub fn base(&self) -> BaseOrder {
        self.base
    }

    pub fn block(&self) -> Option<&[bool]> {
        self.block.as_deref()
    }

    /// Short tag used in reports.
    pub fn tag(&self) -> &'static str {
        match (self.base, self.block.is_some()) {
            (BaseOrder::Lex, false) => "lex",
            (BaseOrder::DegRevLex, false) => "degrevlex",
            (_, true) => "elimination",
        }
    }

    fn cmp_on(&self, a: &[u32], b: &[u32], sel: impl Fn(usize) -> bool) -> Ordering {
        match self.base {
            BaseOrder::Lex => {
                for i in 0..a.len() {
                    if sel(i) && a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            BaseOrder::DegRevLex => {
                let (mut da, mut db) = (0u64, 0u64);
                for i in 0..a.len() {
                    if sel(i) {
                        da += a[i] as u64;
                        db += b[i] as u64;
                    }
                }
                if da != db {
                    return da.cmp(&db);
                }
                for i in (0..a.len()).rev() {
                    if sel(i) && a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match &self.block {
            None => self.cmp_on(a, b, |_| true),
            Some(mask) => self
                .cmp_on(a, b, |i| mask[i])
                .then_with(|| self.cmp_on(a, b, |i| !mask[i])),
        }
    }
}

/// Internal sorted representation.
#[derive(Clone, Debug)]
pub(crate) struct GPoly<C> {
    pub(crate) terms: Vec<(Mono, C)>,
    sugar: u32,
}

fn mono_deg(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn quotient(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<C: Field> GPoly<C> {
    pub(crate) fn from_poly(p: &LaurentPoly<C>, order: &TermOrder) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            let m: Option<Mono> = e.iter().map(|&k| u32::try_from(k).ok()).collect();
            let m = m.ok_or_else(|| {
                Error::Precondition("Groebner input has negative exponents".into())
            })?;
            terms.push((m, c.clone()));
        }
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let sugar = terms.iter().map(|t| mono_deg(&t.0)).max().unwrap_or(0);
        Ok(GPoly { terms, sugar })
    }

    pub(crate) fn to_poly(&self, nvars: usize) -> LaurentPoly<C> {
        LaurentPoly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (m.iter().map(|&k| k as i64).collect(), c.clone())),
        )
    }

    pub(crate) fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = C::one() / lc.clone();
                for t in &mut self.terms {
                    t.1 = t.1.clone() * inv.clone();
                }
            }
        }
    }

    /// `terms[from..] - c * x^q * g`, both sides sorted.
    fn sub_scaled(
        terms: &[(Mono, C)],
        c: &C,
        q: &[u32],
        g: &[(Mono, C)],
        order: &TermOrder,
    ) -> Vec<(Mono, C)> {
        let mut out = Vec::with_capacity(terms.len() + g.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &(Mono, C)| -> Mono { t.0.iter().zip(q).map(|(a, b)| a + b).collect() };
        let mut pending: Option<Mono> = g.first().map(shifted);
        while i < terms.len() || j < g.len() {
            match (terms.get(i), &pending) {
                (Some(t), Some(m)) => match order.cmp(&t.0, m) {
                    Ordering::Greater => {
                        out.push(t.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push((m.clone(), -(c.clone() * g[j].1.clone())));
                        j += 1;
                        pending = g.get(j).map(shifted);
                    }
                    Ordering::Equal => {
                        let v = t.1.clone() - c.clone() * g[j].1.clone();
                        if !v.is_zero() {
                            out.push((t.0.clone(), v));
                        }
                        i += 1;
                        j += 1;
                        pending = g.get(j).map(shifted);
                    }
                },
                (Some(t), None) => {
                    out.push(t.clone());
                    i += 1;
                }
                (None, Some(m)) => {
                    out.push((m.clone(), -(c.clone() * g[j].1.clone())));
                    j += 1;
                    pending = g.get(j).map(shifted);
                }
                (None, None) => break,
            }
        }
        out
    }
}

/// Fully reduces `f` modulo the (monic) polynomials selected by `basis`.
fn reduce<C: Field>(
    f: GPoly<C>,
    polys: &[GPoly<C>],
    basis: &[usize],
    order: &TermOrder,
    budget: &mut Budget,
) -> Result<GPoly<C>> {
    let mut sugar = f.sugar;
    let mut rem: Vec<(Mono, C)> = Vec::new();
    let mut p = f.terms;
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = (&p[start].0, &p[start].1);
        let reducer = basis.iter().copied().find(|&k| divides(polys[k].lm(), lm));
        match reducer {
            Some(k) => {
                budget.spend()?;
                let g = &polys[k];
                let q = quotient(lm, g.lm());
                sugar = sugar.max(mono_deg(&q) + g.sugar);
                let c = lc.clone();
                p = GPoly::sub_scaled(&p[start + 1..], &c, &q, &g.terms[1..], order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(GPoly { terms: rem, sugar })
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

struct Engine<'o, C> {
    order: &'o TermOrder,
    polys: Vec<GPoly<C>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'o, C: Field> Engine<'o, C> {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let l = lcm(a.lm(), b.lm());
        let dl = mono_deg(&l);
        let sugar = (a.sugar + dl - mono_deg(a.lm())).max(b.sugar + dl - mono_deg(b.lm()));
        Pair {
            i: i.min(j),
            j: i.max(j),
            lcm: l,
            sugar,
        }
    }

    fn update(&mut self, h: usize) {
        let hl = self.polys[h].lm().clone();
        let cands: Vec<usize> = self.active.clone();
        let lcms: Vec<Mono> = cands.iter().map(|&g| lcm(self.polys[g].lm(), &hl)).collect();
        let mut kept: Vec<usize> = Vec::new();
        for (idx, &g) in cands.iter().enumerate() {
            let l1 = &lcms[idx];
            let is_coprime = coprime(self.polys[g].lm(), &hl);
            let dominated_later = cands
                .iter()
                .enumerate()
                .skip(idx + 1)
                .any(|(k, _)| divides(&lcms[k], l1));
            let dominated_kept = kept.iter().any(|&k| divides(&lcms[k], l1));
            if is_coprime || (!dominated_later && !dominated_kept) {
                kept.push(idx);
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|&k| !coprime(self.polys[cands[k]].lm(), &hl))
            .map(|k| self.pair(cands[k], h))
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let l1h = lcm(polys[p.i].lm(), &hl);
            let l2h = lcm(polys[p.j].lm(), &hl);
            !(divides(&hl, &p.lcm) && l1h != p.lcm && l2h != p.lcm)
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !divides(&hl, polys[g].lm()));
        self.active.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| order.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> GPoly<C> {
        let (a, b) = (&self.polys[p.i], &self.polys[p.j]);
        let qa = quotient(&p.lcm, a.lm());
        let qb = quotient(&p.lcm, b.lm());
        // both monic: x^qa * a - x^qb * b
        let shifted_a: Vec<(Mono, C)> = a.terms[1..]
            .iter()
            .map(|(m, c)| (m.iter().zip(&qa).map(|(x, y)| x + y).collect(), c.clone()))
            .collect();
        let terms = GPoly::sub_scaled(&shifted_a, &C::one(), &qb, &b.terms[1..], self.order);
        GPoly {
            terms,
            sugar: p.sugar,
        }
    }
}

/// A reduced Gröbner basis together with its order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C = num_rational::BigRational> {
    nvars: usize,
    order: TermOrder,
    polys: Vec<GPoly<C>>,
}

impl<C: Field> GroebnerBasis<C> {
    /// Computes the reduced Gröbner basis of the ideal generated by `gens`.
    pub fn compute(
        nvars: usize,
        gens: &[LaurentPoly<C>],
        order: &TermOrder,
        budget: &mut Budget,
    ) -> Result<Self> {
        let mut inputs: Vec<GPoly<C>> = Vec::new();
        for g in gens {
            assert_eq!(g.nvars(), nvars);
            if !g.is_zero() {
                inputs.push(GPoly::from_poly(g, order)?);
            }
        }
        inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut eng = Engine {
            order,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        };
        let unit = |order: &TermOrder| GroebnerBasis {
            nvars,
            order: order.clone(),
            polys: vec![GPoly {
                terms: vec![(vec![0; nvars], C::one())],
                sugar: 0,
            }],
        };
        for f in inputs {
            let mut h = reduce(f, &eng.polys, &eng.active, order, budget)?;
            if h.is_zero() {
                continue;
            }
            h.make_monic();
            if mono_deg(h.lm()) == 0 {
                return Ok(unit(order));
            }
            eng.polys.push(h);
            let idx = eng.polys.len() - 1;
            eng.update(idx);
        }
        while let Some(p) = eng.select() {
            let s = eng.spoly(&p);
            let mut h = reduce(s, &eng.polys, &eng.active, order, budget)?;
            if h.is_zero() {
                continue;
            }
            h.make_monic();
            if mono_deg(h.lm()) == 0 {
                return Ok(unit(order));
            }
            eng.polys.push(h);
            let idx = eng.polys.len() - 1;
            eng.update(idx);
        }
        // inter-reduce the (already minimal) active set
        let active = eng.active.clone();
        let mut reduced: Vec<GPoly<C>> = Vec::with_capacity(active.len());
        for &k in &active {
            let others: Vec<usize> = active.iter().copied().filter(|&o| o != k).collect();
            let g = eng.polys[k].clone();
            let head = g.terms[0].clone();
            let tail = GPoly {
                terms: g.terms[1..].to_vec(),
                sugar: g.sugar,
            };
            let mut t = reduce(tail, &eng.polys, &others, order, budget)?;
            t.terms.insert(0, head);
            reduced.push(t);
        }
        reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
        Ok(GroebnerBasis {
            nvars,
            order: order.clone(),
            polys: reduced,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && mono_deg(self.polys[0].lm()) == 0
    }

    pub fn polys(&self) -> Vec<LaurentPoly<C>> {
        self.polys.iter().map(|g| g.to_poly(self.nvars)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.polys.iter().map(|g| g.lm().clone()).collect()
    }

    /// Normal form of `f` (nonnegative exponents) modulo the basis.
    pub fn normal_form(&self, f: &LaurentPoly<C>, budget: &mut Budget) -> Result<LaurentPoly<C>> {
        let g = GPoly::from_poly(f, &self.order)?;
        let all: Vec<usize> = (0..self.polys.len()).collect();
        Ok(reduce(g, &self.polys, &all, &self.order, budget)?.to_poly(self.nvars))
    }

    pub fn reduces_to_zero(&self, f: &LaurentPoly<C>, budget: &mut Budget) -> Result<bool> {
        Ok(self.normal_form(f, budget)?.is_zero())
    }

    /// Basis elements involving only the variables where `keep` is true.
    pub fn restricted_to(&self, keep: &[bool]) -> Vec<LaurentPoly<C>> {
        self.polys
            .iter()
            .filter(|g| {
                g.terms
                    .iter()
                    .all(|(m, _)| m.iter().enumerate().all(|(i, &k)| k == 0 || keep[i]))
            })
            .map(|g| g.to_poly(self.nvars))
            .collect()
    }
}

/// Krull dimension of `K[vars]/I` from the leading monomials of a Gröbner
/// basis of `I`: the size of a largest variable subset (within `allowed`)
/// containing the support of no leading monomial. Returns `None` when a
/// leading monomial is constant (unit ideal).
pub fn dimension_from_leading(lms: &[Mono], allowed: &[bool]) -> Option<usize> {
    if lms.iter().any(|m| m.iter().all(|&k| k == 0)) {
        return None;
    }
    // Each leading monomial whose support lies within `allowed` must be hit
    // by a removed variable. dim = |allowed| - min hitting set.
    let supports: Vec<Vec<usize>> = lms
        .iter()
        .filter(|m| m.iter().enumerate().all(|(i, &k)| k == 0 || allowed[i]))
        .map(|m| {
            m.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let n_allowed = allowed.iter().filter(|&&a| a).count();
    let mut best = n_allowed;
    let mut chosen = vec![false; allowed.len()];
    min_hitting_set(&supports, &mut chosen, 0, &mut best);
    Some(n_allowed - best)
}

fn min_hitting_set(supports: &[Vec<usize>], chosen: &mut [bool], size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let unhit = supports
        .iter()
        .filter(|s| !s.iter().any(|&v| chosen[v]))
        .min_by_key(|s| s.len());
    match unhit {
        None => *best = size,
        Some(s) => {
            for &v in s {
                chosen[v] = true;
                min_hitting_set(supports, chosen, size + 1, best);
                chosen[v] = false;
            }
        }
    }
}
