//! Finitely presented partial exponential fields.
//!
//! A configuration lists pairs `(x_i, y_i)` read as `(a_i, exp(a_i))`. The
//! first pair is the kernel pair `(tau, 1)`, a prefix of the pairs forms the
//! base, and the locus is an ideal in all coordinates with every `y`
//! inverted. Transcendence degrees are Krull dimensions of projections of
//! the locus, which is exact when the locus is prime; configurations carry
//! that as an assertion rather than a checked property.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::enumerate::{canonical_basis, canonical_basis_int, canonical_subspaces, rank, signed_vectors, to_rational_rows};
use crate::error::{Error, Result};
use crate::groebner::TermOrder;
use crate::ideal::{Dimension, Ideal};
use crate::matrix::Matrix;
use crate::poly::{parse_poly, LaurentPoly};
use crate::scalar::{primitive_integer_row, rat_int};
use crate::variety::image_dimension;
use crate::verdict::Verdict;
use crate::{Poly, Rational};

/// A subspace of the `Q`-span of the `x`-coordinates, given by rows of
/// rational coefficients (one column per pair).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspaceSpec {
    ncols: usize,
    rows: Vec<Vec<Rational>>,
}

impl SubspaceSpec {
    pub fn new(ncols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "row length mismatch");
        SubspaceSpec { ncols, rows }
    }

    pub fn from_int_rows(ncols: usize, rows: &[Vec<i64>]) -> Self {
        Self::new(ncols, to_rational_rows(rows))
    }

    pub fn empty(ncols: usize) -> Self {
        Self::new(ncols, Vec::new())
    }

    /// Span of the coordinate vectors with the given indices.
    pub fn coordinates(ncols: usize, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| (0..ncols).map(|j| rat_int((i == j) as i64)).collect())
            .collect();
        Self::new(ncols, rows)
    }

    pub fn full(ncols: usize) -> Self {
        Self::coordinates(ncols, &(0..ncols).collect::<Vec<_>>())
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        rank(self.ncols, &self.rows)
    }

    /// Canonical integer basis of the span.
    pub fn canonical(&self) -> Vec<Vec<i64>> {
        canonical_basis(self.ncols, &self.rows)
    }

    /// Each nonzero row scaled to a primitive integer row.
    pub fn integer_rows(&self) -> Vec<Vec<i64>> {
        self.rows.iter().filter_map(|r| primitive_integer_row(r)).collect()
    }

    pub fn join(&self, other: &SubspaceSpec) -> SubspaceSpec {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        SubspaceSpec::new(self.ncols, rows)
    }

    /// Whether `other` is contained in the span of `self` and `extra`.
    pub fn contains_modulo(&self, other: &SubspaceSpec, extra: &[Vec<Rational>]) -> bool {
        let mut base = self.rows.clone();
        base.extend(extra.iter().cloned());
        let r = rank(self.ncols, &base);
        base.extend(other.rows.iter().cloned());
        rank(self.ncols, &base) == r
    }
}

/// Counterexamples produced by the bounded checks of this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaWitness {
    /// A subspace `L` (rows over the pairs) with `delta(L + sub / sub) < 0`.
    Subspace { rows: Vec<Vec<i64>>, delta: i64 },
    /// An `x`-combination with exponential 1 that lies outside the subspace.
    KernelElement { row: Vec<i64> },
    /// A proper subspace of a hull candidate that is itself strong.
    StrongSubspace { rows: Vec<Vec<i64>> },
    /// A step of a witnessing sequence whose flagged coordinate is not
    /// algebraic over the earlier coordinates.
    Step { index: usize, pair: String },
}

/// Which coordinate of a pair is claimed algebraic at a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    XAlgebraic,
    YAlgebraic,
}

impl std::str::FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "x-algebraic" => Ok(Flag::XAlgebraic),
            "y" | "y-algebraic" => Ok(Flag::YAlgebraic),
            other => Err(Error::Validation(format!("unknown flag '{}'", other))),
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::XAlgebraic => "x-algebraic",
            Flag::YAlgebraic => "y-algebraic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub pair: String,
    pub flag: Flag,
    pub x_algebraic: bool,
    pub y_algebraic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessingOutcome {
    pub verdict: Verdict<GammaWitness>,
    pub steps: Vec<StepReport>,
    /// On success: the pairs of the sequence, which then span the hull of
    /// the base together with the last element.
    pub hull_basis: Option<Vec<String>>,
}

pub struct GammaConfig {
    pairs: Vec<String>,
    base_len: usize,
    locus: Ideal,
    qlinear: Vec<Vec<Rational>>,
    irreducible: bool,
    td_cache: Mutex<HashMap<Vec<Vec<i64>>, usize>>,
    kernel_cache: Mutex<HashMap<i64, Vec<Vec<i64>>>>,
    jacobian: Arc<OnceLock<Result<Option<Jacobian>>>>,
}

/// Logarithmic Jacobian of the locus: rows `(dg/dx, y dg/dy)` for a basis
/// of the saturated locus ideal, and their generic rank.
#[derive(Debug)]
struct Jacobian {
    rows: Vec<Vec<Poly>>,
    rank: usize,
}

impl Clone for GammaConfig {
    fn clone(&self) -> Self {
        GammaConfig {
            pairs: self.pairs.clone(),
            base_len: self.base_len,
            locus: self.locus.clone(),
            qlinear: self.qlinear.clone(),
            irreducible: self.irreducible,
            td_cache: Mutex::new(self.td_cache.lock().expect("cache").clone()),
            kernel_cache: Mutex::new(self.kernel_cache.lock().expect("cache").clone()),
            jacobian: self.jacobian.clone(),
        }
    }
}

impl fmt::Debug for GammaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaConfig")
            .field("pairs", &self.pairs)
            .field("base_len", &self.base_len)
            .field("locus", &self.locus.display_gens())
            .field("qlinear", &self.qlinear)
            .field("irreducible", &self.irreducible)
            .finish()
    }
}

/// Coordinate names `x_<pair>` followed by `y_<pair>`.
pub fn variable_names(pairs: &[String]) -> Vec<String> {
    pairs
        .iter()
        .map(|p| format!("x_{}", p))
        .chain(pairs.iter().map(|p| format!("y_{}", p)))
        .collect()
}

impl GammaConfig {
    /// Builds and validates a configuration. The first pair is the kernel
    /// pair; the first `base_len` pairs form the base.
    pub fn new(
        pairs: Vec<String>,
        base_len: usize,
        locus: Vec<Poly>,
        qlinear: Vec<Vec<Rational>>,
        irreducible: bool,
    ) -> Result<Self> {
        let n = pairs.len();
        if n == 0 {
            return Err(Error::Validation("no pairs declared; the kernel pair comes first".into()));
        }
        for (i, p) in pairs.iter().enumerate() {
            if pairs[..i].contains(p) {
                return Err(Error::Validation(format!("duplicate pair name '{}'", p)));
            }
        }
        if base_len == 0 || base_len > n {
            return Err(Error::Validation(format!(
                "base must be a prefix of 1..={} pairs containing the kernel pair, got {}",
                n, base_len
            )));
        }
        let vars = variable_names(&pairs);
        let inverted = (0..2 * n).map(|i| i >= n).collect();
        let locus = Ideal::new(vars, locus, inverted)?;
        if !locus.is_proper()? {
            return Err(Error::Validation("locus is the unit ideal".into()));
        }
        let mut ky = vec![0i64; 2 * n];
        ky[n] = 1;
        let kernel_rel = &LaurentPoly::monomial(ky, Rational::one()) - &LaurentPoly::one(2 * n);
        if !locus.contains(&kernel_rel)? {
            return Err(Error::Validation(format!("kernel pair missing y_{} - 1", pairs[0])));
        }
        for (i, row) in qlinear.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!("qlinear row {} has {} entries, expected {}", i + 1, row.len(), n)));
            }
            let f = LaurentPoly::linear(2 * n, 0, row);
            if !locus.contains(&f)? {
                return Err(Error::Validation(format!(
                    "qlinear row {} is not in the locus: {}",
                    i + 1,
                    f.display(locus.vars())
                )));
            }
        }
        let found = locus.linear_relations(&(0..n).collect::<Vec<_>>())?;
        if rank(n, &found) > rank(n, &qlinear) {
            let extra = found
                .iter()
                .find(|r| {
                    let mut m = qlinear.clone();
                    let before = rank(n, &m);
                    m.push((*r).clone());
                    rank(n, &m) > before
                })
                .expect("some relation is new");
            return Err(Error::Validation(format!(
                "undeclared linear relation among x-coordinates: {}",
                LaurentPoly::linear(2 * n, 0, extra).display(locus.vars())
            )));
        }
        Ok(GammaConfig {
            pairs,
            base_len,
            locus,
            qlinear,
            irreducible,
            td_cache: Mutex::new(HashMap::new()),
            kernel_cache: Mutex::new(HashMap::new()),
            jacobian: Arc::new(OnceLock::new()),
        })
    }

    pub fn pairs(&self) -> &[String] {
        &self.pairs
    }

    pub fn npairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn locus(&self) -> &Ideal {
        &self.locus
    }

    pub fn qlinear(&self) -> &[Vec<Rational>] {
        &self.qlinear
    }

    pub fn irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn pair_index(&self, name: &str) -> Option<usize> {
        self.pairs.iter().position(|p| p == name)
    }

    pub fn x_index(&self, pair: usize) -> usize {
        pair
    }

    pub fn y_index(&self, pair: usize) -> usize {
        self.npairs() + pair
    }

    pub fn kernel(&self) -> SubspaceSpec {
        SubspaceSpec::coordinates(self.npairs(), &[0])
    }

    pub fn base(&self) -> SubspaceSpec {
        SubspaceSpec::coordinates(self.npairs(), &(0..self.base_len).collect::<Vec<_>>())
    }

    pub fn full(&self) -> SubspaceSpec {
        SubspaceSpec::full(self.npairs())
    }

    pub fn empty(&self) -> SubspaceSpec {
        SubspaceSpec::empty(self.npairs())
    }

    /// Parses a subspace expression: terms `full`, `kernel`, `base`,
    /// `empty` or `span(item, ...)` joined by `+`. An item is a pair name or
    /// a homogeneous linear form in the `x_<pair>` coordinates.
    pub fn subspace(&self, expr: &str) -> Result<SubspaceSpec> {
        let n = self.npairs();
        let mut out = self.empty();
        for term in split_top_level(expr, '+') {
            let term = term.trim();
            let part = match term {
                "full" => self.full(),
                "kernel" => self.kernel(),
                "base" => self.base(),
                "empty" | "0" => self.empty(),
                _ => {
                    let inner = term
                        .strip_prefix("span(")
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or_else(|| Error::Validation(format!("unknown subspace term '{}'", term)))?;
                    let mut rows = Vec::new();
                    for item in split_top_level(inner, ',') {
                        let item = item.trim();
                        if item.is_empty() {
                            continue;
                        }
                        rows.push(self.linear_form(item)?);
                    }
                    SubspaceSpec::new(n, rows)
                }
            };
            out = out.join(&part);
        }
        Ok(out)
    }

    fn linear_form(&self, item: &str) -> Result<Vec<Rational>> {
        let n = self.npairs();
        if let Some(i) = self.pair_index(item) {
            return Ok((0..n).map(|j| rat_int((i == j) as i64)).collect());
        }
        let names: Vec<String> = self.pairs.iter().map(|p| format!("x_{}", p)).collect();
        let p = parse_poly(item, &names)?;
        let mut row = vec![Rational::zero(); n];
        for (e, c) in p.terms() {
            let support: Vec<usize> = (0..n).filter(|&i| e[i] != 0).collect();
            if support.len() != 1 || e[support[0]] != 1 {
                return Err(Error::Validation(format!("'{}' is not a homogeneous linear form in x-coordinates", item)));
            }
            row[support[0]] = c.clone();
        }
        Ok(row)
    }

    /// Renders rows as linear forms, e.g. `span(x_a, x_b - 2*x_c)`.
    pub fn render_rows(&self, rows: &[Vec<i64>]) -> String {
        let names: Vec<String> = self.pairs.iter().map(|p| format!("x_{}", p)).collect();
        let items: Vec<String> = rows
            .iter()
            .map(|r| {
                let q: Vec<Rational> = r.iter().map(|&v| rat_int(v)).collect();
                LaurentPoly::linear(self.npairs(), 0, &q).display(&names)
            })
            .collect();
        format!("span({})", items.join(", "))
    }

    /// Transcendence degree of the coordinates `R x` and `y^R` for the
    /// integer rows `R`: the dimension of the image of the locus under
    /// `(x, y) -> (R x, y^R)`.
    pub fn td_rows(&self, rows: &[Vec<i64>]) -> Result<usize> {
        let n = self.npairs();
        let key = canonical_basis_int(n, rows);
        if key.is_empty() {
            return Ok(0);
        }
        if let Some(&v) = self.td_cache.lock().expect("cache").get(&key) {
            return Ok(v);
        }
        let td = match self.jacobian()? {
            Some(j) => {
                let total = self.locus.nvars();
                let mut rows: Vec<Vec<Poly>> = Vec::new();
                for r in &key {
                    for offset in [0, n] {
                        let mut v = vec![LaurentPoly::zero(total); 2 * n];
                        for (i, &c) in r.iter().enumerate() {
                            v[offset + i] = LaurentPoly::constant(total, rat_int(c));
                        }
                        rows.push(v);
                    }
                }
                rows.extend(j.rows.iter().cloned());
                self.locus.generic_rank(&rows)? - j.rank
            }
            None => match image_dimension(&self.locus, n, &key, true, true)? {
                Dimension::Finite(d) => d,
                Dimension::Empty => return Err(Error::Validation("locus is the unit ideal".into())),
            },
        };
        self.td_cache.lock().expect("cache").insert(key, td);
        Ok(td)
    }

    /// The Jacobian of an irreducible locus, when its generic rank equals
    /// the codimension; transcendence degrees are then ranks.
    fn jacobian(&self) -> Result<Option<&Jacobian>> {
        let j = self.jacobian.get_or_init(|| {
            if !self.irreducible {
                return Ok(None);
            }
            let n = self.npairs();
            let basis = self.locus.groebner_basis(&TermOrder::degrevlex())?;
            let rows: Vec<Vec<Poly>> = basis
                .iter()
                .map(|g| (0..n).map(|i| g.derivative(i)).chain((n..2 * n).map(|i| g.euler_derivative(i))).collect())
                .collect();
            let rank = self.locus.generic_rank(&rows)?;
            let dim = self.locus.dimension()?.value().unwrap_or(0);
            Ok((rank + dim == 2 * n).then_some(Jacobian { rows, rank }))
        });
        match j {
            Ok(j) => Ok(j.as_ref()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Transcendence degree of `(L, exp L)`. Rational rows are scaled to
    /// integer rows, which does not change the value.
    pub fn td(&self, sub: &SubspaceSpec) -> Result<usize> {
        self.check_ambient(sub)?;
        self.td_rows(&sub.integer_rows())
    }

    /// `td(sub + over) - td(over)`.
    pub fn relative_td(&self, sub: &SubspaceSpec, over: &SubspaceSpec) -> Result<usize> {
        let join = sub.join(over);
        Ok(self.td(&join)? - self.td(over)?)
    }

    /// Linear dimension of `sub + over` over `over`, modulo the declared
    /// linear relations.
    pub fn ldim(&self, sub: &SubspaceSpec, over: &SubspaceSpec) -> usize {
        let n = self.npairs();
        let mut o = over.rows().to_vec();
        o.extend(self.qlinear.iter().cloned());
        let mut j = o.clone();
        j.extend(sub.rows().iter().cloned());
        rank(n, &j) - rank(n, &o)
    }

    /// Relative predimension `delta(sub / over) = td - ldim`, computed on
    /// `sub + over`.
    pub fn delta(&self, sub: &SubspaceSpec, over: &SubspaceSpec) -> Result<i64> {
        Ok(self.relative_td(sub, over)? as i64 - self.ldim(sub, over) as i64)
    }

    fn check_ambient(&self, sub: &SubspaceSpec) -> Result<()> {
        if sub.ncols() != self.npairs() {
            return Err(Error::AmbientMismatch(format!(
                "subspace has {} columns, configuration has {} pairs",
                sub.ncols(),
                self.npairs()
            )));
        }
        Ok(())
    }

    fn y_monomial_minus_one(&self, r: &[i64]) -> Poly {
        let n = self.npairs();
        let mut e = vec![0i64; 2 * n];
        e[n..].copy_from_slice(r);
        &LaurentPoly::monomial(e, Rational::one()) - &LaurentPoly::one(2 * n)
    }

    /// Integer vectors `r` of height at most `h` (up to sign) with
    /// `y^r = 1` on the locus.
    pub fn kernel_elements(&self, h: i64) -> Result<Vec<Vec<i64>>> {
        if let Some(v) = self.kernel_cache.lock().expect("cache").get(&h) {
            return Ok(v.clone());
        }
        let cands = signed_vectors(self.npairs(), h);
        let found: Vec<Result<Option<Vec<i64>>>> = cands
            .into_par_iter()
            .map(|r| Ok(self.locus.contains(&self.y_monomial_minus_one(&r))?.then_some(r)))
            .collect();
        let mut out = Vec::new();
        for f in found {
            if let Some(r) = f? {
                out.push(r);
            }
        }
        self.kernel_cache.lock().expect("cache").insert(h, out.clone());
        Ok(out)
    }

    /// First subspace `L` (in the quotient by `sub` and the linear
    /// relations, enumerated by dimension descending, then height, then
    /// basis) with `delta(L + sub / sub) < 0`.
    fn find_negative_delta(&self, sub: &SubspaceSpec, h: i64) -> Result<Option<GammaWitness>> {
        let n = self.npairs();
        let mut rows = sub.rows().to_vec();
        rows.extend(self.qlinear.iter().cloned());
        let pivots = if rows.is_empty() { Vec::new() } else { Matrix::from_rows(n, rows).rref().1 };
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let m = free.len();
        for d in (1..=m).rev() {
            let cands = canonical_subspaces(m, d, h);
            let hit = cands
                .into_par_iter()
                .map(|c| {
                    let lrows: Vec<Vec<i64>> = c
                        .iter()
                        .map(|r| {
                            let mut full = vec![0i64; n];
                            for (&col, &v) in free.iter().zip(r) {
                                full[col] = v;
                            }
                            full
                        })
                        .collect();
                    let l = SubspaceSpec::from_int_rows(n, &lrows);
                    let delta = self.delta(&l, sub)?;
                    Ok((delta < 0).then_some(GammaWitness::Subspace { rows: lrows, delta }))
                })
                .find_map_first(|r: Result<Option<GammaWitness>>| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            if let Some(r) = hit {
                return r;
            }
        }
        Ok(None)
    }

    /// Bounded check of the Schanuel property: `delta(L / kernel) >= 0` for
    /// all subspaces of height at most `h`.
    pub fn schanuel_check(&self, h: u32) -> Result<Verdict<GammaWitness>> {
        Ok(match self.find_negative_delta(&self.kernel(), h as i64)? {
            None => Verdict::Holds { bound: h },
            Some(w) => Verdict::Fails { witness: w, bound: h },
        })
    }

    /// Bounded strongness of `sub` in the full configuration.
    pub fn is_strong_bounded(&self, sub: &SubspaceSpec, h: u32) -> Result<Verdict<GammaWitness>> {
        self.check_ambient(sub)?;
        if !sub.contains_modulo(&self.kernel(), &self.qlinear) {
            return Err(Error::Precondition("the kernel pair must lie in the subspace".into()));
        }
        for r in self.kernel_elements(h as i64)? {
            let rs = SubspaceSpec::from_int_rows(self.npairs(), &[r.clone()]);
            if !sub.contains_modulo(&rs, &self.qlinear) {
                return Ok(Verdict::Fails { witness: GammaWitness::KernelElement { row: r }, bound: h });
            }
        }
        Ok(match self.find_negative_delta(sub, h as i64)? {
            None => Verdict::Holds { bound: h },
            Some(w) => Verdict::Fails { witness: w, bound: h },
        })
    }

    /// Certifies `candidate` as the hull of `base` within height `h`: it is
    /// strong, and no subspace strictly between `base + kernel` and
    /// `candidate` of height at most `h` is strong.
    pub fn hull_certify(&self, base: &SubspaceSpec, candidate: &SubspaceSpec, h: u32) -> Result<Verdict<GammaWitness>> {
        self.check_ambient(base)?;
        self.check_ambient(candidate)?;
        let n = self.npairs();
        let lower = base.join(&self.kernel());
        if !candidate.contains_modulo(&lower, &self.qlinear) {
            return Err(Error::Precondition("base and kernel must lie in the candidate".into()));
        }
        let top = self.is_strong_bounded(candidate, h)?;
        if top.is_fails() {
            return Ok(top);
        }
        // the quotient candidate / (lower + qlinear), in reduced coordinates
        let mut lrows = lower.rows().to_vec();
        lrows.extend(self.qlinear.iter().cloned());
        let (red, pivots) = Matrix::from_rows(n, lrows).rref();
        let reduce = |v: &[Rational]| -> Vec<Rational> {
            let mut v = v.to_vec();
            for (i, &p) in pivots.iter().enumerate() {
                if !v[p].is_zero() {
                    let f = v[p].clone();
                    for c in 0..n {
                        v[c] = &v[c] - &f * red.get(i, c);
                    }
                }
            }
            v
        };
        let reduced: Vec<Vec<Rational>> = candidate.rows().iter().map(|r| reduce(r)).collect();
        let qbasis = canonical_basis(n, &reduced);
        let k = qbasis.len();
        for d in 0..k {
            let cands = canonical_subspaces(k, d, h as i64);
            let hit = cands
                .into_par_iter()
                .map(|c| {
                    let srows: Vec<Vec<i64>> = c
                        .iter()
                        .map(|coef| {
                            let mut v = vec![BigInt::zero(); n];
                            for (a, b) in coef.iter().zip(&qbasis) {
                                for j in 0..n {
                                    v[j] += BigInt::from(*a) * BigInt::from(b[j]);
                                }
                            }
                            let q: Vec<Rational> = v.into_iter().map(Rational::from_integer).collect();
                            primitive_integer_row(&q).expect("independent combination")
                        })
                        .collect();
                    let s = lower.join(&SubspaceSpec::from_int_rows(n, &srows));
                    let v = self.is_strong_bounded(&s, h)?;
                    Ok(v.is_holds().then(|| GammaWitness::StrongSubspace { rows: canonical_basis(n, s.rows()) }))
                })
                .find_map_first(|r: Result<Option<GammaWitness>>| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            if let Some(r) = hit {
                if let Some(w) = r? {
                    return Ok(Verdict::Fails { witness: w, bound: h });
                }
            }
        }
        Ok(Verdict::Holds { bound: h })
    }

    /// Re-checks a witness returned by [`GammaConfig::is_strong_bounded`]
    /// or [`GammaConfig::schanuel_check`] for `sub`.
    pub fn recheck_strong_witness(&self, sub: &SubspaceSpec, w: &GammaWitness) -> Result<bool> {
        match w {
            GammaWitness::Subspace { rows, delta } => {
                let l = SubspaceSpec::from_int_rows(self.npairs(), rows);
                let d = self.delta(&l, sub)?;
                Ok(d < 0 && d == *delta)
            }
            GammaWitness::KernelElement { row } => {
                let rs = SubspaceSpec::from_int_rows(self.npairs(), &[row.clone()]);
                Ok(self.locus.contains(&self.y_monomial_minus_one(row))? && !sub.contains_modulo(&rs, &self.qlinear))
            }
            _ => Ok(false),
        }
    }

    /// Re-checks a witness returned by [`GammaConfig::hull_certify`].
    pub fn recheck_hull_witness(
        &self,
        base: &SubspaceSpec,
        candidate: &SubspaceSpec,
        h: u32,
        w: &GammaWitness,
    ) -> Result<bool> {
        match w {
            GammaWitness::StrongSubspace { rows } => {
                let s = SubspaceSpec::from_int_rows(self.npairs(), rows);
                let lower = base.join(&self.kernel());
                let inside = candidate.contains_modulo(&s, &self.qlinear) && s.contains_modulo(&lower, &self.qlinear);
                let proper = !s.contains_modulo(candidate, &self.qlinear);
                Ok(inside && proper && self.is_strong_bounded(&s, h)?.is_holds())
            }
            other => self.recheck_strong_witness(candidate, other),
        }
    }

    /// Adjoins an `m`-th division of every non-base pair: a fresh pair
    /// `<name>_d<m>` with `m x' = x` and `y'^m = y`. The original pairs and
    /// the base are retained; the new relations `m x' - x` are declared as
    /// linear relations. Roots of constants may split the locus, so for
    /// `m > 1` the result is not asserted irreducible.
    pub fn divide_basis(&self, m: u32) -> Result<GammaConfig> {
        if m == 0 {
            return Err(Error::Precondition("division factor must be at least 1".into()));
        }
        let n = self.npairs();
        let divided: Vec<usize> = (self.base_len..n).collect();
        let mut pairs = self.pairs.clone();
        for &i in &divided {
            let name = format!("{}_d{}", self.pairs[i], m);
            if pairs.contains(&name) {
                return Err(Error::Validation(format!("pair name '{}' already in use", name)));
            }
            pairs.push(name);
        }
        let nn = pairs.len();
        let map: Vec<usize> = (0..n).chain(nn..nn + n).collect();
        let mut gens: Vec<Poly> = self.locus.gens().iter().map(|g| g.embed(2 * nn, &map)).collect();
        let mut qlinear: Vec<Vec<Rational>> = self
            .qlinear
            .iter()
            .map(|r| r.iter().cloned().chain(std::iter::repeat(Rational::zero()).take(nn - n)).collect())
            .collect();
        for (j, &i) in divided.iter().enumerate() {
            let new = n + j;
            let mut row = vec![Rational::zero(); nn];
            row[new] = rat_int(m as i64);
            row[i] = rat_int(-1);
            gens.push(LaurentPoly::linear(2 * nn, 0, &row));
            qlinear.push(row);
            let mut e = vec![0i64; 2 * nn];
            e[nn + new] = m as i64;
            let mut f = vec![0i64; 2 * nn];
            f[nn + i] = 1;
            gens.push(&LaurentPoly::monomial(e, Rational::one()) - &LaurentPoly::monomial(f, Rational::one()));
        }
        GammaConfig::new(pairs, self.base_len, gens, qlinear, self.irreducible && m == 1)
    }

    fn projection_dim(&self, coords: &[usize]) -> Result<usize> {
        if let Some(j) = self.jacobian()? {
            let total = self.locus.nvars();
            let mut rows: Vec<Vec<Poly>> = coords
                .iter()
                .map(|&c| {
                    let mut v = vec![LaurentPoly::zero(total); total];
                    v[c] = LaurentPoly::one(total);
                    v
                })
                .collect();
            rows.extend(j.rows.iter().cloned());
            return Ok(self.locus.generic_rank(&rows)? - j.rank);
        }
        match self.locus.projection_dimension(coords)? {
            Dimension::Finite(d) => Ok(d),
            Dimension::Empty => Err(Error::Validation("locus is the unit ideal".into())),
        }
    }

    /// Validates a witnessing sequence over the base. At step `i` the
    /// flagged coordinate of the `i`-th pair must be algebraic over the
    /// base coordinates and the earlier pairs. With `strong_base`, exactly
    /// one coordinate must be algebraic at each step.
    pub fn witnessing_check(&self, sequence: &[String], flags: &[Flag], strong_base: bool) -> Result<WitnessingOutcome> {
        if sequence.len() != flags.len() {
            return Err(Error::Precondition("one flag per sequence element is required".into()));
        }
        let n = self.npairs();
        let idx: Vec<usize> = sequence
            .iter()
            .map(|s| self.pair_index(s).ok_or_else(|| Error::Validation(format!("unknown pair '{}'", s))))
            .collect::<Result<_>>()?;
        let seq_space = SubspaceSpec::coordinates(n, &idx);
        if self.ldim(&seq_space, &self.base()) != idx.len() {
            return Err(Error::Precondition("sequence is not linearly independent over the base".into()));
        }
        let mut coords: Vec<usize> = (0..self.base_len).flat_map(|p| [p, n + p]).collect();
        let mut steps = Vec::new();
        for (i, (&p, &flag)) in idx.iter().zip(flags).enumerate() {
            let before = self.projection_dim(&coords)?;
            let with = |c: usize| -> Result<bool> {
                let mut cs = coords.clone();
                cs.push(c);
                Ok(self.projection_dim(&cs)? == before)
            };
            let x_alg = with(p)?;
            let y_alg = with(n + p)?;
            steps.push(StepReport { pair: self.pairs[p].clone(), flag, x_algebraic: x_alg, y_algebraic: y_alg });
            if strong_base && x_alg == y_alg {
                return Err(Error::FlagContradiction {
                    step: i + 1,
                    message: format!(
                        "{} coordinates of pair '{}' are algebraic",
                        if x_alg { "both" } else { "neither of the" },
                        self.pairs[p]
                    ),
                });
            }
            let ok = match flag {
                Flag::XAlgebraic => x_alg,
                Flag::YAlgebraic => y_alg,
            };
            if !ok {
                return Ok(WitnessingOutcome {
                    verdict: Verdict::Fails { witness: GammaWitness::Step { index: i + 1, pair: self.pairs[p].clone() }, bound: 0 },
                    steps,
                    hull_basis: None,
                });
            }
            coords.push(p);
            coords.push(n + p);
        }
        Ok(WitnessingOutcome { verdict: Verdict::Holds { bound: 0 }, steps, hull_basis: Some(sequence.to_vec()) })
    }
    /// Re-checks a [`GammaWitness::Step`] returned by
    /// [`GammaConfig::witnessing_check`] for the same sequence and flags.
    pub fn recheck_step_witness(&self, sequence: &[String], flags: &[Flag], w: &GammaWitness) -> Result<bool> {
        let GammaWitness::Step { index, pair } = w else { return Ok(false) };
        if *index == 0 || *index > sequence.len() || &sequence[index - 1] != pair {
            return Ok(false);
        }
        let n = self.npairs();
        let mut coords: Vec<usize> = (0..self.base_len).flat_map(|p| [p, n + p]).collect();
        for name in &sequence[..index - 1] {
            let p = self.pair_index(name).ok_or_else(|| Error::Validation(format!("unknown pair '{}'", name)))?;
            coords.extend([p, n + p]);
        }
        let p = self.pair_index(pair).ok_or_else(|| Error::Validation(format!("unknown pair '{}'", pair)))?;
        let c = match flags[index - 1] {
            Flag::XAlgebraic => p,
            Flag::YAlgebraic => n + p,
        };
        let before = self.locus.projection_dimension(&coords)?;
        coords.push(c);
        Ok(self.locus.projection_dimension(&coords)? != before)
    }
}


fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
