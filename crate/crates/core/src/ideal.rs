//! Polynomial ideals with torus (inverted) coordinates.
//!
//! An ideal carries a set of inverted variables. Every query works with its
//! saturation by the product of the inverted variables that occur, realised
//! by adjoining one extra variable `t` and the relation `t * prod - 1`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groebner::{dimension_from_leading, Budget, GroebnerBasis, TermOrder};
use crate::matrix::Matrix;
use crate::poly::LaurentPoly;
use crate::scalar::Field;

/// Krull dimension of a quotient ring, or `Empty` for the unit ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Empty,
    Finite(usize),
}

impl Dimension {
    pub fn value(self) -> Option<usize> {
        match self {
            Dimension::Empty => None,
            Dimension::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Empty => write!(f, "empty"),
            Dimension::Finite(d) => write!(f, "{}", d),
        }
    }
}

#[derive(Debug)]
struct Working<C> {
    nvars: usize,
    gb: GroebnerBasis<C>,
}

#[derive(Debug, Clone)]
pub struct Ideal<C = BigRational> {
    vars: Vec<String>,
    gens: Vec<LaurentPoly<C>>,
    inverted: Vec<bool>,
    saturated: bool,
    working: OnceLock<Result<Arc<Working<C>>>>,
}

impl<C: Field> Ideal<C> {
    /// Builds an ideal. Laurent generators are cleared by multiplying with
    /// monomials in inverted variables; a negative exponent on any other
    /// variable is an error.
    pub fn new(
        vars: Vec<String>,
        gens: impl IntoIterator<Item = LaurentPoly<C>>,
        inverted: Vec<bool>,
    ) -> Result<Self> {
        assert_eq!(vars.len(), inverted.len());
        let mut out = Vec::new();
        for g in gens {
            assert_eq!(g.nvars(), vars.len(), "generator ring mismatch");
            if g.is_zero() {
                continue;
            }
            let (cleared, shift) = g.clear_negative();
            if let Some(i) = (0..vars.len()).find(|&i| shift[i] > 0 && !inverted[i]) {
                return Err(Error::NegativeExponent(vars[i].clone()));
            }
            // drop common monomial factors in inverted variables
            let mins = cleared.min_exponents();
            let strip: Vec<i64> = (0..vars.len())
                .map(|i| if inverted[i] { -mins[i] } else { 0 })
                .collect();
            let g = cleared.shift(&strip);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Ideal {
            vars,
            gens: out,
            inverted,
            saturated: false,
            working: OnceLock::new(),
        })
    }

    /// Ideal with no inverted variables.
    pub fn polynomial(vars: Vec<String>, gens: impl IntoIterator<Item = LaurentPoly<C>>) -> Result<Self> {
        let n = vars.len();
        Self::new(vars, gens, vec![false; n])
    }

    pub fn zero(vars: Vec<String>, inverted: Vec<bool>) -> Self {
        Self::new(vars, Vec::new(), inverted).expect("zero ideal")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn gens(&self) -> &[LaurentPoly<C>] {
        &self.gens
    }

    pub fn inverted(&self) -> &[bool] {
        &self.inverted
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Marks the generators as already saturated (skips the `t` trick).
    pub(crate) fn assume_saturated(mut self) -> Self {
        self.saturated = true;
        self.working = OnceLock::new();
        self
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = LaurentPoly<C>>) -> Result<Self> {
        Self::new(
            self.vars.clone(),
            self.gens.iter().cloned().chain(extra),
            self.inverted.clone(),
        )
    }

    fn working_ring(&self) -> (usize, Vec<LaurentPoly<C>>, Option<usize>) {
        let n = self.nvars();
        let occurring: Vec<usize> = (0..n)
            .filter(|&i| self.inverted[i] && self.gens.iter().any(|g| g.involves(i)))
            .collect();
        if self.saturated || occurring.is_empty() {
            return (n, self.gens.clone(), None);
        }
        let map: Vec<usize> = (0..n).collect();
        let mut gens: Vec<LaurentPoly<C>> = self.gens.iter().map(|g| g.embed(n + 1, &map)).collect();
        let mut e = vec![0i64; n + 1];
        for &i in &occurring {
            e[i] = 1;
        }
        e[n] = 1;
        gens.push(&LaurentPoly::monomial(e, C::one()) - &LaurentPoly::one(n + 1));
        (n + 1, gens, Some(n))
    }

    fn working(&self) -> Result<Arc<Working<C>>> {
        self.working
            .get_or_init(|| {
                let (nvars, gens, _) = self.working_ring();
                let gb = GroebnerBasis::compute(nvars, &gens, &TermOrder::degrevlex(), &mut Budget::from_default())?;
                Ok(Arc::new(Working { nvars, gb }))
            })
            .clone()
    }

    /// Clears `f` into the working ring; fails if `f` has a negative
    /// exponent on a variable that is not inverted.
    fn to_working(&self, f: &LaurentPoly<C>, nvars: usize) -> Result<LaurentPoly<C>> {
        assert_eq!(f.nvars(), self.nvars(), "ring mismatch");
        let (cleared, shift) = f.clear_negative();
        if let Some(i) = (0..self.nvars()).find(|&i| shift[i] > 0 && !self.inverted[i]) {
            return Err(Error::NegativeExponent(self.vars[i].clone()));
        }
        let map: Vec<usize> = (0..self.nvars()).collect();
        Ok(cleared.embed(nvars, &map))
    }

    /// Membership in the saturated ideal.
    pub fn contains(&self, f: &LaurentPoly<C>) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let w = self.working()?;
        let g = self.to_working(f, w.nvars)?;
        w.gb.reduces_to_zero(&g, &mut Budget::from_default())
    }

    pub fn contains_all(&self, fs: &[LaurentPoly<C>]) -> Result<bool> {
        for f in fs {
            if !self.contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank of a matrix of polynomials over the fraction field of the
    /// quotient by the saturation, which must be prime. Entries must not
    /// have negative exponents.
    pub fn generic_rank(&self, rows: &[Vec<LaurentPoly<C>>]) -> Result<usize> {
        let w = self.working()?;
        let mut budget = Budget::from_default();
        let mut m: Vec<Vec<LaurentPoly<C>>> = Vec::with_capacity(rows.len());
        for r in rows {
            let mut out = Vec::with_capacity(r.len());
            for f in r {
                if f.has_negative_exponents() {
                    return Err(Error::NegativeExponent("matrix entry".into()));
                }
                let g = self.to_working(f, w.nvars)?;
                out.push(w.gb.normal_form(&g, &mut budget)?);
            }
            m.push(out);
        }
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            // prefer the sparsest nonzero pivot
            let pivot = (rank..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| (m[i][c].len(), i));
            let Some(p) = pivot else { continue };
            m.swap(rank, p);
            let prow = m[rank].clone();
            let lead = prow[c].clone();
            for row in m.iter_mut().skip(rank + 1) {
                let a = row[c].clone();
                if a.is_zero() {
                    continue;
                }
                for j in c..ncols {
                    let v = &(&lead * &row[j]) - &(&a * &prow[j]);
                    row[j] = w.gb.normal_form(&v, &mut budget)?;
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        Ok(rank)
    }

    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.working()?.gb.is_unit())
    }

    /// Krull dimension of the coordinate ring of the saturation.
    pub fn dimension(&self) -> Result<Dimension> {
        let w = self.working()?;
        Ok(dim_of(&w.gb, w.nvars))
    }

    /// Dimension computed from a fresh basis in another base order.
    pub fn dimension_with(&self, order: &TermOrder) -> Result<Dimension> {
        let (nvars, gens, _) = self.working_ring();
        let gb = GroebnerBasis::compute(nvars, &gens, order, &mut Budget::from_default())?;
        Ok(dim_of(&gb, nvars))
    }

    /// Reduced Gröbner basis of the saturation under `order` (a plain
    /// lex/degrevlex order on this ideal's variables).
    pub fn groebner_basis(&self, order: &TermOrder) -> Result<Vec<LaurentPoly<C>>> {
        let (nvars, gens, t) = self.working_ring();
        match t {
            None => Ok(GroebnerBasis::compute(nvars, &gens, order, &mut Budget::from_default())?.polys()),
            Some(t) => {
                let mut mask = vec![false; nvars];
                mask[t] = true;
                let eo = TermOrder::elimination(mask).with_base(order.base());
                let gb = GroebnerBasis::compute(nvars, &gens, &eo, &mut Budget::from_default())?;
                let keep: Vec<bool> = (0..nvars).map(|i| i != t).collect();
                let kept: Vec<usize> = (0..self.nvars()).collect();
                let mut out: Vec<LaurentPoly<C>> = gb
                    .restricted_to(&keep)
                    .into_iter()
                    .map(|p| p.restrict(&kept).expect("t eliminated"))
                    .collect();
                // re-run in the target order so the result is reduced there
                out = GroebnerBasis::compute(self.nvars(), &out, order, &mut Budget::from_default())?.polys();
                Ok(out)
            }
        }
    }

    /// Equivalent ideal whose generators form the reduced basis of the
    /// saturation. Idempotent.
    pub fn groebner(&self, order: &TermOrder) -> Result<Self> {
        let basis = self.groebner_basis(order)?;
        Ok(Ideal {
            vars: self.vars.clone(),
            gens: basis,
            inverted: self.inverted.clone(),
            saturated: true,
            working: OnceLock::new(),
        })
    }

    /// Contraction of the saturation to the variables in `keep` (indices,
    /// in the order they should appear in the result).
    pub fn eliminate(&self, keep: &[usize]) -> Result<Self> {
        let (nvars, gens, _) = self.working_ring();
        let mask: Vec<bool> = (0..nvars).map(|i| !keep.contains(&i)).collect();
        let basis: Vec<LaurentPoly<C>> = if mask.iter().any(|&m| m) {
            let gb = GroebnerBasis::compute(nvars, &gens, &TermOrder::elimination(mask.clone()), &mut Budget::from_default())?;
            let keep_mask: Vec<bool> = mask.iter().map(|m| !m).collect();
            gb.restricted_to(&keep_mask)
        } else {
            gens
        };
        let gens: Vec<LaurentPoly<C>> = basis
            .into_iter()
            .map(|p| p.restrict(keep).expect("restricted to kept variables"))
            .collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let inverted = keep.iter().map(|&i| self.inverted[i]).collect();
        Ok(Ideal::new(vars, gens, inverted)?.assume_saturated())
    }

    pub fn eliminate_names(&self, keep: &[&str]) -> Result<Self> {
        let idx: Option<Vec<usize>> = keep.iter().map(|n| self.var_index(n)).collect();
        let idx = idx.ok_or_else(|| Error::Precondition("unknown variable in keep set".into()))?;
        self.eliminate(&idx)
    }

    /// Dimension of the contraction to `keep`, without building the ideal.
    pub fn projection_dimension(&self, keep: &[usize]) -> Result<Dimension> {
        let (nvars, gens, _) = self.working_ring();
        let mask: Vec<bool> = (0..nvars).map(|i| !keep.contains(&i)).collect();
        let gb = GroebnerBasis::compute(nvars, &gens, &TermOrder::elimination(mask.clone()), &mut Budget::from_default())?;
        if gb.is_unit() {
            return Ok(Dimension::Empty);
        }
        let keep_mask: Vec<bool> = mask.iter().map(|m| !m).collect();
        let lms: Vec<Vec<u32>> = gb
            .leading_monomials()
            .into_iter()
            .filter(|m| m.iter().enumerate().all(|(i, &k)| k == 0 || keep_mask[i]))
            .collect();
        Ok(match dimension_from_leading(&lms, &keep_mask) {
            None => Dimension::Empty,
            Some(d) => Dimension::Finite(d),
        })
    }

    /// Basis (in reduced echelon form) of the vectors `v` such that the
    /// linear form `sum v_i * var(cols[i])` lies in the saturated ideal.
    pub fn linear_relations(&self, cols: &[usize]) -> Result<Vec<Vec<C>>> {
        let w = self.working()?;
        let nv = w.nvars;
        // in a graded order every element of degree <= 1 is a combination
        // of the basis elements of degree <= 1
        let lin: Vec<Vec<C>> = w
            .gb
            .polys()
            .into_iter()
            .filter(|p| p.total_degree() <= 1)
            .map(|p| {
                let mut v = vec![C::zero(); nv + 1];
                for (e, c) in p.terms() {
                    match e.iter().position(|&k| k != 0) {
                        None => v[0] = c.clone(),
                        Some(i) => v[i + 1] = c.clone(),
                    }
                }
                v
            })
            .collect();
        if lin.is_empty() {
            return Ok(Vec::new());
        }
        let other: Vec<usize> = (0..=nv).filter(|&j| j == 0 || !cols.contains(&(j - 1))).collect();
        let a = Matrix::from_rows(
            other.len(),
            lin.iter().map(|v| other.iter().map(|&j| v[j].clone()).collect()).collect(),
        );
        let lambdas = a.transpose().nullspace();
        let rows: Vec<Vec<C>> = lambdas
            .rows()
            .iter()
            .map(|l| {
                cols.iter()
                    .map(|&c| l.iter().zip(&lin).fold(C::zero(), |acc, (lk, v)| acc + lk.clone() * v[c + 1].clone()))
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            return Ok(rows);
        }
        let (r, piv) = Matrix::from_rows(cols.len(), rows).rref();
        Ok(r.rows()[..piv.len()].to_vec())
    }

    /// Equality of saturations, by mutual membership.
    pub fn same_as(&self, other: &Ideal<C>) -> Result<bool> {
        if self.vars != other.vars {
            return Ok(false);
        }
        Ok(self.contains_all(&other.gens)? && other.contains_all(&self.gens)?)
    }

    /// Renders the generators, one per entry.
    pub fn display_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.display(&self.vars)).collect()
    }
}

fn dim_of<C: Field>(gb: &GroebnerBasis<C>, nvars: usize) -> Dimension {
    match dimension_from_leading(&gb.leading_monomials(), &vec![true; nvars]) {
        None => Dimension::Empty,
        Some(d) => Dimension::Finite(d),
    }
}

impl<C: Field> fmt::Display for Ideal<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.display_gens().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn ideal(vars: &[&str], inv: &[&str], gens: &[&str]) -> Ideal {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let inverted = vars.iter().map(|s| inv.contains(s)).collect();
        Ideal::new(v, gens.iter().map(|g| parse_poly(g, vars).unwrap()), inverted).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(ideal(&["a", "b", "c"], &[], &[]).dimension().unwrap(), Dimension::Finite(3));
        let i = ideal(&["x1", "x2", "y1", "y2"], &["y1", "y2"], &["y2 - 2", "x2 - y1"]);
        assert_eq!(i.dimension().unwrap(), Dimension::Finite(2));
        assert_eq!(ideal(&["x"], &[], &["x - 1", "x - 2"]).dimension().unwrap(), Dimension::Empty);
    }

    #[test]
    fn elimination_examples() {
        let i = ideal(&["y1", "y2"], &["y1", "y2"], &["y1 - y2"]);
        let e = i.eliminate(&[0]).unwrap();
        assert!(e.gens().is_empty());

        let i = ideal(&["x2", "y1", "y2"], &["y1", "y2"], &["x2 - y1", "y2 - 2"]);
        let e = i.eliminate_names(&["y1", "y2"]).unwrap();
        let expect = ideal(&["y1", "y2"], &["y1", "y2"], &["y2 - 2"]);
        assert!(e.same_as(&expect).unwrap());

        let i = ideal(&["x", "y"], &["y"], &["x*y - 1"]);
        let e = i.eliminate(&[0]).unwrap();
        assert!(e.gens().is_empty());
    }

    #[test]
    fn saturation_removes_torus_boundary() {
        // y*(x - 1) with y a unit is x - 1
        let i = ideal(&["x", "y"], &["y"], &["y*x - y"]);
        assert!(i.contains(&parse_poly("x - 1", &["x", "y"]).unwrap()).unwrap());
        let plain = ideal(&["x", "y"], &[], &["y*x - y"]);
        assert!(!plain.contains(&parse_poly("x - 1", &["x", "y"]).unwrap()).unwrap());
        // monomial in a unit is the unit ideal
        let u = ideal(&["x", "y"], &["y"], &["y^2"]);
        assert_eq!(u.dimension().unwrap(), Dimension::Empty);
    }

    #[test]
    fn laurent_membership() {
        let i = ideal(&["y1", "y2"], &["y1", "y2"], &["y1*y2 - 3"]);
        assert!(i.contains(&parse_poly("y1 - 3*y2^-1", &["y1", "y2"]).unwrap()).unwrap());
        let j = ideal(&["x", "y"], &[], &["x"]);
        assert!(matches!(
            j.contains(&parse_poly("x^-1", &["x", "y"]).unwrap()),
            Err(Error::NegativeExponent(_))
        ));
    }

    #[test]
    fn groebner_is_idempotent() {
        let i = ideal(&["x", "y"], &["y"], &["x^2 - y", "x*y - 1"]);
        let g1 = i.groebner(&TermOrder::lex()).unwrap();
        let g2 = g1.groebner(&TermOrder::lex()).unwrap();
        assert_eq!(g1.gens(), g2.gens());
        assert!(g1.same_as(&i).unwrap());
    }

    #[test]
    fn linear_relations_found() {
        let i = ideal(&["x1", "x2", "y1"], &["y1"], &["x1 - 2*x2", "y1 - x1", "y1^2 - 3"]);
        let rel = i.linear_relations(&[0, 1]).unwrap();
        assert_eq!(rel, vec![vec![crate::scalar::rat_int(1), crate::scalar::rat_int(-2)]]);
        let j = ideal(&["x1", "x2"], &[], &["x1 - 1"]);
        assert!(j.linear_relations(&[0, 1]).unwrap().is_empty());
    }

    #[test]
    fn projection_dimension_matches_elimination() {
        let i = ideal(&["x1", "x2", "y1", "y2"], &["y1", "y2"], &["x1 - x2", "y1 - y2"]);
        let d1 = i.projection_dimension(&[0, 2]).unwrap();
        let d2 = i.eliminate(&[0, 2]).unwrap().dimension().unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1, Dimension::Finite(2));
    }
}
