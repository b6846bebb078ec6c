//! Finite-rank subgroups of algebraic tori and bounded coset
//! decompositions of their intersections with subvarieties.
//!
//! Group elements are products of rational powers of the generators. Two
//! exact models are provided: positive-rational radicals with principal
//! real roots ([`RadicalField`]), and monomials in the exponential
//! coordinates of a configuration ([`ConfigUnits`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::enumerate::{primitive_vectors, rank, to_rational_rows};
use crate::error::{Error, Result};
use crate::gamma::{GammaConfig, SubspaceSpec};
use crate::ideal::Ideal;
use crate::matrix::Matrix;
use crate::poly::{parse_poly, LaurentPoly};
use crate::scalar::{parse_rational, rat, rat_int};
use crate::variety::{complete_greedily, CosetForm};
use crate::verdict::Verdict;
use crate::{Poly, Rational, ZMatrix};

/// Largest number of group elements a bounded enumeration may visit.
pub const MAX_ELEMENTS: usize = 1_000_000;

/// A multiplicative group of units with an exact test for vanishing of
/// rational combinations.
pub trait UnitGroupField: Clone + Send + Sync {
    type Unit: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn one(&self) -> Self::Unit;
    fn from_rational(&self, q: &Rational) -> Result<Self::Unit>;
    fn mul(&self, a: &Self::Unit, b: &Self::Unit) -> Self::Unit;
    /// Rational power, taking principal roots where a model has them.
    fn pow(&self, a: &Self::Unit, e: &Rational) -> Result<Self::Unit>;
    /// Whether `sum c_i * u_i` is zero.
    fn is_zero_combination(&self, terms: &[(Rational, Self::Unit)]) -> Result<bool>;
    fn render(&self, u: &Self::Unit) -> String;
    fn parse(&self, text: &str) -> Result<Self::Unit>;
    /// Whether non-integral powers are available.
    fn has_roots(&self) -> bool;
}

/// `coef * prod p^{f_p}` with primes `p` and `0 < f_p < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadicalUnit {
    coef: Rational,
    rad: BTreeMap<BigInt, Rational>,
}

impl RadicalUnit {
    pub fn coefficient(&self) -> &Rational {
        &self.coef
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_empty()
    }
}

/// Real radicals over the rationals: roots are the principal positive
/// roots of positive numbers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RadicalField;

const TRIAL_LIMIT: u64 = 1_000_000;

fn factor(n: &BigInt) -> Result<Vec<(BigInt, i64)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while n > BigInt::one() && p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut k = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            k += 1;
        }
        if k > 0 {
            out.push((bp, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT) < n {
            return Err(Error::ResourceLimit(format!("cannot factor {} by trial division", n)));
        }
        out.push((n, 1));
    }
    Ok(out)
}

fn rational_pow(q: &Rational, k: &BigInt) -> Rational {
    let e = k.to_i32().expect("exponent fits i32");
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

impl RadicalField {
    fn normalize(coef: Rational, exps: BTreeMap<BigInt, Rational>) -> RadicalUnit {
        let mut coef = coef;
        let mut rad = BTreeMap::new();
        for (p, e) in exps {
            let fl = e.floor();
            let frac = &e - &fl;
            let shift = fl.to_integer();
            if !shift.is_zero() {
                coef *= rational_pow(&Rational::from_integer(p.clone()), &shift);
            }
            if !frac.is_zero() {
                rad.insert(p, frac);
            }
        }
        RadicalUnit { coef, rad }
    }
}

impl UnitGroupField for RadicalField {
    type Unit = RadicalUnit;

    fn one(&self) -> RadicalUnit {
        RadicalUnit { coef: Rational::one(), rad: BTreeMap::new() }
    }

    fn from_rational(&self, q: &Rational) -> Result<RadicalUnit> {
        if q.is_zero() {
            return Err(Error::Validation("group generators must be nonzero".into()));
        }
        Ok(RadicalUnit { coef: q.clone(), rad: BTreeMap::new() })
    }

    fn mul(&self, a: &RadicalUnit, b: &RadicalUnit) -> RadicalUnit {
        let mut exps = a.rad.clone();
        for (p, e) in &b.rad {
            *exps.entry(p.clone()).or_insert_with(Rational::zero) += e;
        }
        Self::normalize(&a.coef * &b.coef, exps)
    }

    fn pow(&self, a: &RadicalUnit, e: &Rational) -> Result<RadicalUnit> {
        if e.is_integer() {
            let k = e.to_integer();
            let exps = a.rad.iter().map(|(p, f)| (p.clone(), f * e)).collect();
            return Ok(Self::normalize(rational_pow(&a.coef, &k), exps));
        }
        if a.coef.is_negative() {
            return Err(Error::NonIntegralExponent(format!(
                "fractional power {} of the negative number {}",
                e, a.coef
            )));
        }
        let mut exps: BTreeMap<BigInt, Rational> = a.rad.iter().map(|(p, f)| (p.clone(), f * e)).collect();
        for (p, k) in factor(a.coef.numer())? {
            *exps.entry(p).or_insert_with(Rational::zero) += rat_int(k) * e;
        }
        for (p, k) in factor(a.coef.denom())? {
            *exps.entry(p).or_insert_with(Rational::zero) -= rat_int(k) * e;
        }
        Ok(Self::normalize(Rational::one(), exps))
    }

    fn is_zero_combination(&self, terms: &[(Rational, RadicalUnit)]) -> Result<bool> {
        // distinct radical classes are linearly independent over Q
        let mut sums: BTreeMap<Vec<(BigInt, Rational)>, Rational> = BTreeMap::new();
        for (c, u) in terms {
            let key: Vec<(BigInt, Rational)> = u.rad.iter().map(|(p, f)| (p.clone(), f.clone())).collect();
            *sums.entry(key).or_insert_with(Rational::zero) += c * &u.coef;
        }
        Ok(sums.values().all(|s| s.is_zero()))
    }

    fn render(&self, u: &RadicalUnit) -> String {
        let mut parts = Vec::new();
        if !u.coef.is_one() || u.rad.is_empty() {
            parts.push(u.coef.to_string());
        }
        for (p, f) in &u.rad {
            parts.push(format!("{}^({})", p, f));
        }
        parts.join("*")
    }

    fn parse(&self, text: &str) -> Result<RadicalUnit> {
        let mut acc = self.one();
        for factor in text.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().trim_start_matches('(').trim_end_matches(')')),
                None => (factor, "1"),
            };
            let b = parse_rational(base).ok_or_else(|| Error::Validation(format!("bad unit factor '{}'", factor)))?;
            let e = parse_rational(exp).ok_or_else(|| Error::Validation(format!("bad exponent in '{}'", factor)))?;
            let u = self.pow(&self.from_rational(&b)?, &e)?;
            acc = self.mul(&acc, &u);
        }
        Ok(acc)
    }

    fn has_roots(&self) -> bool {
        true
    }
}

/// `coef * y^exps` over the exponential coordinates of a configuration,
/// compared modulo its locus. Only integral powers are available; divide
/// the basis of the configuration to obtain roots.
#[derive(Debug, Clone)]
pub struct ConfigUnits {
    config: Arc<GammaConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicUnit {
    pub coef: Rational,
    pub exps: Vec<i64>,
}

impl ConfigUnits {
    pub fn new(config: Arc<GammaConfig>) -> Self {
        ConfigUnits { config }
    }

    pub fn config(&self) -> &GammaConfig {
        &self.config
    }

    fn as_poly(&self, u: &SymbolicUnit) -> Poly {
        let n = self.config.npairs();
        let mut e = vec![0i64; 2 * n];
        e[n..].copy_from_slice(&u.exps);
        LaurentPoly::monomial(e, u.coef.clone())
    }

    /// `y^row` for an integer row over the pairs.
    pub fn exponential(&self, row: &[i64]) -> SymbolicUnit {
        SymbolicUnit { coef: Rational::one(), exps: row.to_vec() }
    }
}

impl UnitGroupField for ConfigUnits {
    type Unit = SymbolicUnit;

    fn one(&self) -> SymbolicUnit {
        SymbolicUnit { coef: Rational::one(), exps: vec![0; self.config.npairs()] }
    }

    fn from_rational(&self, q: &Rational) -> Result<SymbolicUnit> {
        if q.is_zero() {
            return Err(Error::Validation("group generators must be nonzero".into()));
        }
        Ok(SymbolicUnit { coef: q.clone(), exps: vec![0; self.config.npairs()] })
    }

    fn mul(&self, a: &SymbolicUnit, b: &SymbolicUnit) -> SymbolicUnit {
        SymbolicUnit { coef: &a.coef * &b.coef, exps: a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect() }
    }

    fn pow(&self, a: &SymbolicUnit, e: &Rational) -> Result<SymbolicUnit> {
        if !e.is_integer() {
            return Err(Error::NonIntegralExponent(format!(
                "power {} of a symbolic unit; divide the basis of the configuration first",
                e
            )));
        }
        let k = e.to_integer();
        let ki = k.to_i64().ok_or_else(|| Error::ResourceLimit("exponent overflow".into()))?;
        Ok(SymbolicUnit { coef: rational_pow(&a.coef, &k), exps: a.exps.iter().map(|x| x * ki).collect() })
    }

    fn is_zero_combination(&self, terms: &[(Rational, SymbolicUnit)]) -> Result<bool> {
        let n = self.config.npairs();
        let mut f = LaurentPoly::zero(2 * n);
        for (c, u) in terms {
            f = &f + &self.as_poly(u).scale(c);
        }
        self.config.locus().contains(&f)
    }

    fn render(&self, u: &SymbolicUnit) -> String {
        self.as_poly(u).display(self.config.locus().vars())
    }

    fn parse(&self, text: &str) -> Result<SymbolicUnit> {
        let n = self.config.npairs();
        let p = parse_poly(text, self.config.locus().vars())?;
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((e, c)), None) if e[..n].iter().all(|&k| k == 0) => {
                Ok(SymbolicUnit { coef: c.clone(), exps: e[n..].to_vec() })
            }
            _ => Err(Error::Validation(format!("'{}' is not a monomial in the exponential coordinates", text))),
        }
    }

    fn has_roots(&self) -> bool {
        false
    }
}

/// A subgroup of `G_m^n` generated by finitely many points, with formal
/// roots of order up to `depth`.
#[derive(Debug, Clone)]
pub struct FiniteRankGroup<F: UnitGroupField> {
    field: F,
    n: usize,
    generators: Vec<Vec<F::Unit>>,
    depth: u32,
}

/// An enumerated element: exponents over the generators and coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<U> {
    pub exponents: Vec<Rational>,
    pub point: Vec<U>,
}

impl<F: UnitGroupField> FiniteRankGroup<F> {
    pub fn new(field: F, n: usize, generators: Vec<Vec<F::Unit>>, depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Precondition("division depth must be at least 1".into()));
        }
        if depth > 1 && !field.has_roots() {
            return Err(Error::Precondition(
                "this group model has no roots; use depth 1 on a divided configuration".into(),
            ));
        }
        for g in &generators {
            if g.len() != n {
                return Err(Error::AmbientMismatch(format!("generator has {} coordinates, expected {}", g.len(), n)));
            }
            for u in g {
                if field.is_zero_combination(&[(Rational::one(), u.clone())])? {
                    return Err(Error::Validation("group generators must be nonzero in every coordinate".into()));
                }
            }
        }
        Ok(FiniteRankGroup { field, n, generators, depth })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<F::Unit>] {
        &self.generators
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `Gamma^k`: each generator placed in each of `k` coordinates of a
    /// 1-dimensional group.
    pub fn power(&self, k: usize) -> Result<Self> {
        if self.n != 1 {
            return Err(Error::Precondition("only 1-dimensional groups can be raised to a power".into()));
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            for j in 0..k {
                let mut v = vec![self.field.one(); k];
                v[j] = g[0].clone();
                gens.push(v);
            }
        }
        Self::new(self.field.clone(), k, gens, self.depth)
    }

    fn exponent_values(&self, word: u32) -> Vec<Rational> {
        let mut vals: Vec<Rational> = Vec::new();
        for q in 1..=self.depth as i64 {
            for a in -(word as i64) * q..=(word as i64) * q {
                let v = rat(a, q);
                if !vals.contains(&v) {
                    vals.push(v);
                }
            }
        }
        vals.sort();
        vals
    }

    /// Exponent vectors with entries in `[-word, word]` and denominators at
    /// most the depth, ordered by absolute sum and then lexicographically.
    pub fn exponent_vectors(&self, word: u32) -> Result<Vec<Vec<Rational>>> {
        let vals = self.exponent_values(word);
        let r = self.generators.len();
        let count = (vals.len() as f64).powi(r as i32);
        if count > MAX_ELEMENTS as f64 {
            return Err(Error::ResourceLimit(format!(
                "{} group elements exceed the enumeration limit of {}",
                count, MAX_ELEMENTS
            )));
        }
        let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|v| {
                    vals.iter().map(move |x| {
                        let mut w = v.clone();
                        w.push(x.clone());
                        w
                    })
                })
                .collect();
        }
        let norm = |v: &Vec<Rational>| v.iter().fold(Rational::zero(), |acc, x| acc + x.abs());
        out.sort_by(|a, b| norm(a).cmp(&norm(b)).then_with(|| a.cmp(b)));
        Ok(out)
    }

    pub fn element(&self, e: &[Rational]) -> Result<Vec<F::Unit>> {
        let mut point = vec![self.field.one(); self.n];
        for (g, x) in self.generators.iter().zip(e) {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.n {
                let p = self.field.pow(&g[j], x)?;
                point[j] = self.field.mul(&point[j], &p);
            }
        }
        Ok(point)
    }

    pub fn elements(&self, word: u32) -> Result<Vec<GroupElement<F::Unit>>> {
        self.exponent_vectors(word)?
            .into_par_iter()
            .map(|e| Ok(GroupElement { point: self.element(&e)?, exponents: e }))
            .collect()
    }

    /// `prod point_j^{m_j}` for an integer character `m`.
    pub fn character(&self, point: &[F::Unit], m: &[i64]) -> Result<F::Unit> {
        let mut acc = self.field.one();
        for (u, &k) in point.iter().zip(m) {
            if k != 0 {
                acc = self.field.mul(&acc, &self.field.pow(u, &rat_int(k))?);
            }
        }
        Ok(acc)
    }

    pub fn render_point(&self, point: &[F::Unit]) -> Vec<String> {
        point.iter().map(|u| self.field.render(u)).collect()
    }
}

/// Group of exponentials of a hull: one generator `y^row` per integer row,
/// dropping those equal to 1 on the locus.
pub fn group_from_config(config: Arc<GammaConfig>, hull: &SubspaceSpec, depth: u32) -> Result<FiniteRankGroup<ConfigUnits>> {
    let units = ConfigUnits::new(config.clone());
    let mut gens = Vec::new();
    for row in hull.rows() {
        let ints: Option<Vec<i64>> = row.iter().map(|q| q.is_integer().then(|| q.to_integer().to_i64()).flatten()).collect();
        let ints = ints.ok_or_else(|| {
            Error::InexpressibleExponential(format!(
                "row {:?} has no exponential among the pairs; divide the basis first",
                row.iter().map(|q| q.to_string()).collect::<Vec<_>>()
            ))
        })?;
        let u = units.exponential(&ints);
        if units.is_zero_combination(&[(Rational::one(), u.clone()), (-Rational::one(), units.one())])? {
            continue;
        }
        gens.push(vec![u]);
    }
    FiniteRankGroup::new(units, 1, gens, depth)
}

/// A coset `translate * H` where `H` is the subtorus with cocharacter
/// basis `cocharacters` and character lattice `lattice`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coset<U> {
    pub translate: Vec<U>,
    pub lattice: ZMatrix,
    pub cocharacters: ZMatrix,
}

impl<U> Coset<U> {
    pub fn dimension(&self) -> usize {
        self.cocharacters.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosetDecomposition<U> {
    pub n: usize,
    pub cosets: Vec<Coset<U>>,
}

/// Integer kernel (rows) of the matrix with rows `b`, in Hermite form.
fn annihilator(n: usize, b: &[Vec<i64>]) -> ZMatrix {
    if b.is_empty() {
        return Matrix::identity(n);
    }
    Matrix::from_rows(n, b.to_vec()).integer_kernel().row_basis()
}

impl<U: Clone> Coset<U> {
    /// Coset from a character lattice (saturated rows) and any point on
    /// it; the translate is normalised so that the free coordinates of the
    /// adapted basis are 1.
    pub fn from_lattice<F: UnitGroupField<Unit = U>>(group: &FiniteRankGroup<F>, lattice: ZMatrix, point: &[U]) -> Result<Self> {
        let n = group.n();
        let lattice = if lattice.nrows() == 0 { lattice } else { lattice.row_basis() };
        let cochar = if lattice.nrows() == 0 {
            Matrix::identity(n)
        } else {
            lattice.integer_kernel().row_basis()
        };
        let c = lattice.nrows();
        let u = if c == 0 { Some(Matrix::identity(n)) } else { complete_greedily(&lattice) };
        let u = u.ok_or_else(|| Error::Precondition("character lattice is not saturated".into()))?;
        let v = u.unimodular_inverse().expect("unimodular");
        let chis: Vec<U> = (0..c).map(|k| group.character(point, lattice.row(k))).collect::<Result<_>>()?;
        let mut translate = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = group.field().one();
            for (k, chi) in chis.iter().enumerate() {
                let e = *v.get(j, k);
                if e != 0 {
                    acc = group.field().mul(&acc, &group.field().pow(chi, &rat_int(e))?);
                }
            }
            translate.push(acc);
        }
        Ok(Coset { translate, lattice, cocharacters: cochar })
    }
}

fn vanishes_at<F: UnitGroupField>(group: &FiniteRankGroup<F>, w: &Ideal, point: &[F::Unit]) -> Result<bool> {
    for f in w.gens() {
        let mut terms = Vec::new();
        for (e, c) in f.terms() {
            terms.push((c.clone(), group.character(point, e)?));
        }
        if !group.field().is_zero_combination(&terms)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `point * t^B` lies on `V(w)` for all `t`.
fn coset_inside<F: UnitGroupField>(group: &FiniteRankGroup<F>, w: &Ideal, point: &[F::Unit], b: &[Vec<i64>]) -> Result<bool> {
    for f in w.gens() {
        let mut groups: BTreeMap<Vec<i64>, Vec<(Rational, F::Unit)>> = BTreeMap::new();
        for (e, c) in f.terms() {
            let key: Vec<i64> = b.iter().map(|r| r.iter().zip(e).map(|(x, y)| x * y).sum()).collect();
            groups.entry(key).or_default().push((c.clone(), group.character(point, e)?));
        }
        for terms in groups.values() {
            if !group.field().is_zero_combination(terms)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `point` lies on the coset.
pub fn coset_contains<F: UnitGroupField>(group: &FiniteRankGroup<F>, coset: &Coset<F::Unit>, point: &[F::Unit]) -> Result<bool> {
    for r in coset.lattice.rows() {
        let a = group.character(point, r)?;
        let b = group.character(&coset.translate, r)?;
        if !group.field().is_zero_combination(&[(Rational::one(), a), (-Rational::one(), b)])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether coset `a` is contained in coset `b`.
fn coset_subset<F: UnitGroupField>(group: &FiniteRankGroup<F>, a: &Coset<F::Unit>, b: &Coset<F::Unit>) -> Result<bool> {
    let n = group.n();
    // H_a inside H_b iff the lattice of b lies in the lattice of a
    let la = to_rational_rows(a.lattice.rows());
    let mut both = la.clone();
    both.extend(to_rational_rows(b.lattice.rows()));
    if rank(n, &both) != rank(n, &la) {
        return Ok(false);
    }
    coset_contains(group, b, &a.translate)
}

fn check_torus_ideal(w: &Ideal, n: usize) -> Result<()> {
    if w.nvars() != n || w.inverted().iter().any(|&i| !i) {
        return Err(Error::AmbientMismatch(format!(
            "expected an ideal in {} torus coordinates matching the group",
            n
        )));
    }
    if !w.is_proper()? {
        return Err(Error::Precondition("ideal is the unit ideal".into()));
    }
    Ok(())
}

/// Enumerates group elements of word length at most `word` on `V(w)` and
/// grows around each one a coset `gamma * H` inside `V(w)` by greedily
/// adding primitive cocharacters of height at most `height`. Cosets
/// contained in others are dropped.
pub fn find_cosets_bounded<F: UnitGroupField>(
    w: &Ideal,
    group: &FiniteRankGroup<F>,
    word: u32,
    height: u32,
) -> Result<CosetDecomposition<F::Unit>> {
    let n = group.n();
    check_torus_ideal(w, n)?;
    let elements = group.elements(word)?;
    let on_w: Vec<bool> = elements
        .par_iter()
        .map(|g| vanishes_at(group, w, &g.point))
        .collect::<Result<_>>()?;
    let cochars = primitive_vectors(n, height as i64);
    let mut cosets: Vec<Coset<F::Unit>> = Vec::new();
    for (g, _) in elements.iter().zip(&on_w).filter(|(_, &on)| on) {
        let mut b: Vec<Vec<i64>> = Vec::new();
        for c in &cochars {
            if b.len() == n {
                break;
            }
            let mut trial = b.clone();
            trial.push(c.clone());
            if rank(n, &to_rational_rows(&trial)) <= b.len() {
                continue;
            }
            if coset_inside(group, w, &g.point, &trial)? {
                b = trial;
            }
        }
        let coset = Coset::from_lattice(group, annihilator(n, &b), &g.point)?;
        let mut known = false;
        for c in &cosets {
            if coset_subset(group, &coset, c)? {
                known = true;
                break;
            }
        }
        if !known {
            cosets.push(coset);
        }
    }
    let mut kept: Vec<Coset<F::Unit>> = Vec::new();
    for (i, c) in cosets.iter().enumerate() {
        let mut covered = false;
        for (j, d) in cosets.iter().enumerate() {
            if i != j && coset_subset(group, c, d)? && !(coset_subset(group, d, c)? && j > i) {
                covered = true;
                break;
            }
        }
        if !covered {
            kept.push(c.clone());
        }
    }
    Ok(CosetDecomposition { n, cosets: kept })
}

/// Re-checks `gamma * H` inside `V(w)` by grouping terms by cocharacter
/// weight.
pub fn coset_within<F: UnitGroupField>(w: &Ideal, group: &FiniteRankGroup<F>, coset: &Coset<F::Unit>) -> Result<bool> {
    coset_inside(group, w, &coset.translate, coset.cocharacters.rows())
}

/// Checks that every group element of word length at most `word` lies on
/// `V(w)` exactly when it lies on one of the listed cosets.
pub fn verify_decomposition<F: UnitGroupField>(
    w: &Ideal,
    group: &FiniteRankGroup<F>,
    dec: &CosetDecomposition<F::Unit>,
    word: u32,
) -> Result<Verdict<GroupElement<F::Unit>>> {
    let n = group.n();
    check_torus_ideal(w, n)?;
    if dec.n != n {
        return Err(Error::AmbientMismatch(format!("decomposition lives in G_m^{}, group in G_m^{}", dec.n, n)));
    }
    let elements = group.elements(word)?;
    let bad = elements
        .into_par_iter()
        .map(|g| {
            let on_w = vanishes_at(group, w, &g.point)?;
            let mut on_coset = false;
            for c in &dec.cosets {
                if coset_contains(group, c, &g.point)? {
                    on_coset = true;
                    break;
                }
            }
            Ok((on_w != on_coset).then_some(g))
        })
        .find_map_first(|r: Result<Option<GroupElement<F::Unit>>>| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match bad {
        None => Ok(Verdict::Holds { bound: word }),
        Some(r) => Ok(match r? {
            Some(g) => Verdict::Fails { witness: g, bound: word },
            None => Verdict::Holds { bound: word },
        }),
    }
}

/// Re-checks a witness of [`verify_decomposition`].
pub fn recheck_element_witness<F: UnitGroupField>(
    w: &Ideal,
    group: &FiniteRankGroup<F>,
    dec: &CosetDecomposition<F::Unit>,
    g: &GroupElement<F::Unit>,
) -> Result<bool> {
    if group.element(&g.exponents)? != g.point {
        return Ok(false);
    }
    let on_w = vanishes_at(group, w, &g.point)?;
    let mut on_coset = false;
    for c in &dec.cosets {
        on_coset |= coset_contains(group, c, &g.point)?;
    }
    Ok(on_w != on_coset)
}

/// Values of the character `m` on the cosets of `dec`, duplicates merged.
pub fn coset_constants<F: UnitGroupField>(
    group: &FiniteRankGroup<F>,
    dec: &CosetDecomposition<F::Unit>,
    m: &[i64],
) -> Result<Vec<F::Unit>> {
    let n = dec.n;
    if m.len() != n {
        return Err(Error::AmbientMismatch(format!("character has {} entries, expected {}", m.len(), n)));
    }
    let mut out: Vec<F::Unit> = Vec::new();
    for (i, c) in dec.cosets.iter().enumerate() {
        let mut rows = to_rational_rows(c.lattice.rows());
        let r = rank(n, &rows);
        rows.push(m.iter().map(|&x| rat_int(x)).collect());
        if rank(n, &rows) != r {
            return Err(Error::CharacterNotConstant(i));
        }
        let v = group.character(&c.translate, m)?;
        let mut dup = false;
        for u in &out {
            if group.field().is_zero_combination(&[(Rational::one(), u.clone()), (-Rational::one(), v.clone())])? {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(v);
        }
    }
    Ok(out)
}

/// The coset cut out by a [`CosetForm`] with rational constants.
pub fn coset_from_form<F: UnitGroupField>(group: &FiniteRankGroup<F>, form: &CosetForm) -> Result<Coset<F::Unit>> {
    let n = group.n();
    let c = form.lattice.nrows();
    let u = form.change.clone().ok_or_else(|| Error::Precondition("character lattice is not saturated".into()))?;
    let v = u.unimodular_inverse().expect("unimodular");
    let consts: Vec<F::Unit> = form
        .constants
        .iter()
        .map(|p| {
            let q = p.constant_value().ok_or_else(|| Error::Precondition("constants must be rational".into()))?;
            group.field().from_rational(&q)
        })
        .collect::<Result<_>>()?;
    let mut translate = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = group.field().one();
        for k in 0..c {
            let e = *v.get(j, k);
            if e != 0 {
                acc = group.field().mul(&acc, &group.field().pow(&consts[k], &rat_int(e))?);
            }
        }
        translate.push(acc);
    }
    Coset::from_lattice(group, form.lattice.clone(), &translate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(gens: &[&str], n: usize) -> Ideal {
        let names: Vec<String> = (1..=n).map(|i| format!("y{}", i)).collect();
        Ideal::new(names.clone(), gens.iter().map(|g| parse_poly(g, &names).unwrap()), vec![true; n]).unwrap()
    }

    fn rgroup(gens: &[&[(i64, i64)]], depth: u32) -> FiniteRankGroup<RadicalField> {
        let f = RadicalField;
        let n = gens[0].len();
        let g = gens
            .iter()
            .map(|row| row.iter().map(|&(a, b)| f.from_rational(&rat(a, b)).unwrap()).collect())
            .collect();
        FiniteRankGroup::new(f, n, g, depth).unwrap()
    }

    #[test]
    fn radical_arithmetic() {
        let f = RadicalField;
        let two = f.from_rational(&rat_int(2)).unwrap();
        let r = f.pow(&two, &rat(1, 2)).unwrap();
        assert_eq!(f.mul(&r, &r), two);
        assert!(!f.is_zero_combination(&[(rat_int(1), r.clone()), (rat_int(-1), f.one())]).unwrap());
        let eight = f.from_rational(&rat_int(8)).unwrap();
        let r8 = f.pow(&eight, &rat(1, 2)).unwrap();
        // sqrt(8) = 2 sqrt(2)
        assert!(f.is_zero_combination(&[(rat_int(1), r8.clone()), (rat_int(-2), r.clone())]).unwrap());
        assert_eq!(f.parse(&f.render(&r8)).unwrap(), r8);
        assert!(f.pow(&f.from_rational(&rat_int(-2)).unwrap(), &rat(1, 2)).is_err());
    }

    #[test]
    fn unit_equation() {
        let w = torus(&["y1 + y2 - 1"], 2);
        let g = rgroup(&[&[(2, 1), (2, 1)]], 2);
        let dec = find_cosets_bounded(&w, &g, 10, 2).unwrap();
        assert_eq!(dec.cosets.len(), 1);
        let half = RadicalField.from_rational(&rat(1, 2)).unwrap();
        assert_eq!(dec.cosets[0].translate, vec![half.clone(), half]);
        assert_eq!(dec.cosets[0].dimension(), 0);
        assert!(verify_decomposition(&w, &g, &dec, 10).unwrap().is_holds());
        let empty = CosetDecomposition { n: 2, cosets: vec![] };
        let v = verify_decomposition(&w, &g, &empty, 10).unwrap();
        assert_eq!(v.witness().unwrap().exponents, vec![rat_int(-1)]);
        assert!(recheck_element_witness(&w, &g, &empty, v.witness().unwrap()).unwrap());
    }

    #[test]
    fn subtorus_is_its_own_coset() {
        let w = torus(&["y1 - y2"], 2);
        let g = rgroup(&[&[(3, 1), (3, 1)], &[(2, 1), (5, 1)]], 1);
        let dec = find_cosets_bounded(&w, &g, 2, 2).unwrap();
        assert_eq!(dec.cosets.len(), 1);
        assert_eq!(dec.cosets[0].lattice, Matrix::from_rows(2, vec![vec![1, -1]]));
        assert!(coset_within(&w, &g, &dec.cosets[0]).unwrap());
    }

    #[test]
    fn vertical_line() {
        let w = torus(&["y1 - 2"], 2);
        let g = rgroup(&[&[(2, 1), (3, 1)]], 1);
        let dec = find_cosets_bounded(&w, &g, 5, 2).unwrap();
        assert_eq!(dec.cosets.len(), 1);
        let c = &dec.cosets[0];
        let f = RadicalField;
        assert_eq!(c.translate, vec![f.from_rational(&rat_int(2)).unwrap(), f.one()]);
        assert_eq!(c.lattice, Matrix::from_rows(2, vec![vec![1, 0]]));
    }

    #[test]
    fn constants_of_cosets() {
        let f = RadicalField;
        let g = rgroup(&[&[(2, 1), (3, 1)]], 1);
        let lat = Matrix::from_rows(2, vec![vec![1, 0]]);
        let q = |a| f.from_rational(&rat_int(a)).unwrap();
        let c1 = Coset::from_lattice(&g, lat.clone(), &[q(2), q(1)]).unwrap();
        let c2 = Coset::from_lattice(&g, lat, &[q(3), q(7)]).unwrap();
        assert_eq!(c2.translate, vec![q(3), q(1)]);
        let dec = CosetDecomposition { n: 2, cosets: vec![c1.clone(), c2] };
        assert_eq!(coset_constants(&g, &dec, &[1, 0]).unwrap(), vec![q(2), q(3)]);
        assert_eq!(coset_constants(&g, &CosetDecomposition { n: 2, cosets: vec![c1] }, &[1, 0]).unwrap(), vec![q(2)]);
        assert!(matches!(coset_constants(&g, &dec, &[0, 1]), Err(Error::CharacterNotConstant(0))));

        let w = torus(&["y1*y2 - 3"], 2);
        let form = crate::variety::coset_normal_form(&w, 2, 3).unwrap().unwrap();
        let c = coset_from_form(&g, &form).unwrap();
        let dec = CosetDecomposition { n: 2, cosets: vec![c] };
        assert_eq!(coset_constants(&g, &dec, &[1, 1]).unwrap(), vec![q(3)]);
    }

    #[test]
    fn groups_from_configs() {
        let pairs: Vec<String> = ["tau", "a1", "a2"].iter().map(|s| s.to_string()).collect();
        let names = crate::gamma::variable_names(&pairs);
        let locus = ["y_a2 - 2", "x_a2 - y_a1", "y_tau - 1"].iter().map(|g| parse_poly(g, &names).unwrap()).collect();
        let c = Arc::new(GammaConfig::new(pairs, 2, locus, vec![], true).unwrap());
        let g = group_from_config(c.clone(), &c.kernel(), 1).unwrap();
        assert!(g.generators().is_empty());
        let g = group_from_config(c.clone(), &c.full(), 1).unwrap();
        assert_eq!(g.generators().len(), 2);
        let rendered: Vec<String> = g.generators().iter().map(|u| g.field().render(&u[0])).collect();
        assert_eq!(rendered, vec!["y_a1", "y_a2"]);
        // y_a2 is 2 on the locus
        let two = g.field().from_rational(&rat_int(2)).unwrap();
        assert!(g.field().is_zero_combination(&[(rat_int(1), g.generators()[1][0].clone()), (rat_int(-1), two)]).unwrap());
        assert!(group_from_config(c.clone(), &c.full(), 2).is_err());
        let half = SubspaceSpec::new(3, vec![vec![rat_int(0), rat(1, 2), rat_int(0)]]);
        assert!(matches!(group_from_config(c, &half, 1), Err(Error::InexpressibleExponential(_))));
    }
}
