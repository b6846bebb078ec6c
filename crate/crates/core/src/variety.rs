//! Subvarieties of `G_a^n x G_m^n` and the integer matrix action
//! `M: (x, y) -> (M x, y^M)`.

use std::sync::Arc;

use num_traits::One;

use crate::enumerate::{canonical_basis_int, canonical_subspaces, primitive_vectors, rank, to_rational_rows};
use crate::error::{Error, Result};
use crate::gamma::{GammaConfig, SubspaceSpec};
use crate::groebner::{Budget, GroebnerBasis, TermOrder};
use crate::ideal::{Dimension, Ideal};
use crate::matrix::Matrix;
use crate::poly::LaurentPoly;
use crate::scalar::{rat_int, rational_to_i64};
use crate::verdict::Verdict;
use crate::{Poly, Rational, ZMatrix};

/// Names `x1..xn, y1..yn`.
pub fn pair_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{}", i)).chain((1..=n).map(|i| format!("y{}", i))).collect()
}

/// Dimension of the image of `V(ideal)` under `(x, y) -> (R x, y^R)`,
/// where the ideal lives in `x1..xn, y1..yn` followed by extra variables
/// that are carried along unchanged. Only the `x`-part (resp. `y`-part) of
/// the image is kept when `keep_y` (resp. `keep_x`) is false.
///
/// The rows are saturated and completed to a unimodular `W`; after the
/// monomial change of coordinates `x' = W x`, `y' = y^W` the image is a
/// coordinate projection.
pub(crate) fn image_dimension(
    ideal: &Ideal,
    n: usize,
    rows: &[Vec<i64>],
    keep_x: bool,
    keep_y: bool,
) -> Result<Dimension> {
    let total = ideal.nvars();
    let extra = total - 2 * n;
    let key = canonical_basis_int(n, rows);
    let k = key.len();
    let mut images: Vec<Poly> = Vec::with_capacity(total);
    if k == 0 {
        images = (0..total).map(|i| LaurentPoly::var(total, i)).collect();
    } else {
        let sat = Matrix::from_rows(n, key).saturate_rows();
        let w = sat.unimodular_completion().expect("saturated rows complete to a unimodular matrix");
        let winv = w.unimodular_inverse().expect("unimodular");
        for j in 0..n {
            let coeffs: Vec<Rational> = (0..n).map(|i| rat_int(*winv.get(j, i))).collect();
            images.push(LaurentPoly::linear(total, 0, &coeffs));
        }
        for j in 0..n {
            let mut e = vec![0i64; total];
            for i in 0..n {
                e[n + i] = *winv.get(j, i);
            }
            images.push(LaurentPoly::monomial(e, Rational::one()));
        }
        images.extend((2 * n..total).map(|i| LaurentPoly::var(total, i)));
    }
    let gens: Vec<Poly> = ideal.gens().iter().map(|g| g.compose(&images)).collect::<Result<_>>()?;
    let moved = Ideal::new(ideal.vars().to_vec(), gens, ideal.inverted().to_vec())?;
    let mut keep: Vec<usize> = Vec::new();
    if keep_x {
        keep.extend(0..k);
    }
    if keep_y {
        keep.extend(n..n + k);
    }
    keep.extend(2 * n..2 * n + extra);
    moved.projection_dimension(&keep)
}

/// A subvariety of `G_a^n x G_m^n`, optionally over the coordinates of a
/// configuration used as parameters. Dimensions are relative to the
/// parameter locus.
#[derive(Debug, Clone)]
pub struct AVariety {
    n: usize,
    ideal: Ideal,
    params: Option<Arc<GammaConfig>>,
    param_dim: usize,
}

impl AVariety {
    pub fn new(n: usize, gens: Vec<Poly>) -> Result<Self> {
        let inverted = (0..2 * n).map(|i| i >= n).collect();
        let ideal = Ideal::new(pair_names(n), gens, inverted)?;
        Self::from_ideal(n, ideal, None)
    }

    /// A variety whose generators may also involve the coordinates of
    /// `config` (appended after `x1..xn, y1..yn`); the config locus is
    /// added to the ideal.
    pub fn with_params(n: usize, gens: Vec<Poly>, config: Arc<GammaConfig>) -> Result<Self> {
        let pn = config.locus().nvars();
        let total = 2 * n + pn;
        let map: Vec<usize> = (2 * n..total).collect();
        let mut all = gens;
        all.extend(config.locus().gens().iter().map(|g| g.embed(total, &map)));
        let mut vars = pair_names(n);
        vars.extend(config.locus().vars().iter().cloned());
        let mut inverted: Vec<bool> = (0..2 * n).map(|i| i >= n).collect();
        inverted.extend(config.locus().inverted().iter().copied());
        let ideal = Ideal::new(vars, all, inverted)?;
        Self::from_ideal(n, ideal, Some(config))
    }

    fn from_ideal(n: usize, ideal: Ideal, params: Option<Arc<GammaConfig>>) -> Result<Self> {
        if !ideal.is_proper()? {
            return Err(Error::Validation("variety ideal is the unit ideal".into()));
        }
        let param_dim = match &params {
            None => 0,
            Some(c) => c.locus().dimension()?.value().unwrap_or(0),
        };
        Ok(AVariety { n, ideal, params, param_dim })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn params(&self) -> Option<&Arc<GammaConfig>> {
        self.params.as_ref()
    }

    fn relative(&self, d: Dimension) -> Dimension {
        match d {
            Dimension::Finite(v) => Dimension::Finite(v.saturating_sub(self.param_dim)),
            Dimension::Empty => Dimension::Empty,
        }
    }

    pub fn dimension(&self) -> Result<Dimension> {
        Ok(self.relative(self.ideal.dimension()?))
    }

    /// The image `M(V)` for an integer matrix with `n` columns.
    pub fn matrix_act(&self, m: &ZMatrix) -> Result<AVariety> {
        let n = self.n;
        if m.ncols() != n {
            return Err(Error::AmbientMismatch(format!("matrix has {} columns, variety has {} pairs", m.ncols(), n)));
        }
        let l = m.nrows();
        let extra = self.ideal.nvars() - 2 * n;
        // variables: u (l), v (l), x (n), y (n), extra
        let total = 2 * l + 2 * n + extra;
        let map: Vec<usize> = (2 * l..total).collect();
        let mut gens: Vec<Poly> = self.ideal.gens().iter().map(|g| g.embed(total, &map)).collect();
        for i in 0..l {
            let mut lin = LaurentPoly::var(total, i);
            for j in 0..n {
                let c = *m.get(i, j);
                if c != 0 {
                    lin = &lin - &LaurentPoly::var(total, 2 * l + j).scale(&rat_int(c));
                }
            }
            gens.push(lin);
            let mut pos = vec![0i64; total];
            let mut neg = vec![0i64; total];
            for j in 0..n {
                let c = *m.get(i, j);
                if c > 0 {
                    pos[2 * l + n + j] = c;
                } else {
                    neg[2 * l + n + j] = -c;
                }
            }
            neg[l + i] = 1;
            gens.push(&LaurentPoly::monomial(neg, Rational::one()) - &LaurentPoly::monomial(pos, Rational::one()));
        }
        let mut vars = pair_names(l);
        vars.extend(pair_names(n).into_iter().map(|s| format!("{}'", s)));
        vars.extend(self.ideal.vars()[2 * n..].iter().cloned());
        let mut inverted: Vec<bool> = (0..2 * l).map(|i| i >= l).collect();
        inverted.extend(self.ideal.inverted().iter().copied());
        let big = Ideal::new(vars, gens, inverted)?;
        let keep: Vec<usize> = (0..2 * l).chain(2 * l + 2 * n..total).collect();
        let image = big.eliminate(&keep)?;
        Ok(AVariety { n: l, ideal: image, params: self.params.clone(), param_dim: self.param_dim })
    }

    /// `dim M(V)` for the row space of `rows`, without building the image.
    pub fn image_dimension(&self, rows: &[Vec<i64>]) -> Result<Dimension> {
        Ok(self.relative(image_dimension(&self.ideal, self.n, rows, true, true)?))
    }

    /// Dimensions of the additive and multiplicative projections of
    /// `M(V)` for a single row `M`.
    pub fn projection_dimensions(&self, row: &[i64]) -> Result<(Dimension, Dimension)> {
        let rows = [row.to_vec()];
        let add = self.relative(image_dimension(&self.ideal, self.n, &rows, true, false)?);
        let mul = self.relative(image_dimension(&self.ideal, self.n, &rows, false, true)?);
        Ok((add, mul))
    }

    /// Bounded rotundity: `dim M(V) >= rk M` for one matrix per row space
    /// of height at most `h`. The witness is the canonical basis of a
    /// failing row space.
    pub fn is_rotund_bounded(&self, h: u32) -> Result<Verdict<Vec<Vec<i64>>>> {
        for l in 1..=self.n {
            for rows in canonical_subspaces(self.n, l, h as i64) {
                let d = self.image_dimension(&rows)?;
                if d.value().is_none_or(|d| d < l) {
                    return Ok(Verdict::Fails { witness: rows, bound: h });
                }
            }
        }
        Ok(Verdict::Holds { bound: h })
    }

    /// Bounded freeness: for every primitive row `m` of height at most `h`
    /// both projections of `m(V)` are one-dimensional.
    pub fn is_free_bounded(&self, h: u32) -> Result<Verdict<FreeWitness>> {
        for row in primitive_vectors(self.n, h as i64) {
            let (add, mul) = self.projection_dimensions(&row)?;
            if add != Dimension::Finite(1) || mul != Dimension::Finite(1) {
                return Ok(Verdict::Fails { witness: FreeWitness { row, additive: add, multiplicative: mul }, bound: h });
            }
        }
        Ok(Verdict::Holds { bound: h })
    }

    /// Re-checks a rotundity witness.
    pub fn recheck_rotund_witness(&self, rows: &[Vec<i64>]) -> Result<bool> {
        let r = rank(self.n, &to_rational_rows(rows));
        let via_action = self.matrix_act(&Matrix::from_rows(self.n, rows.to_vec()))?.dimension()?;
        Ok(via_action.value().is_none_or(|d| d < r))
    }

    /// Re-checks a freeness witness by explicit elimination.
    pub fn recheck_free_witness(&self, w: &FreeWitness) -> Result<bool> {
        let image = self.matrix_act(&Matrix::from_rows(self.n, vec![w.row.clone()]))?;
        let extra: Vec<usize> = (2..image.ideal.nvars()).collect();
        let add: Vec<usize> = std::iter::once(0).chain(extra.iter().copied()).collect();
        let mul: Vec<usize> = std::iter::once(1).chain(extra.iter().copied()).collect();
        let a = self.relative(image.ideal.projection_dimension(&add)?);
        let m = self.relative(image.ideal.projection_dimension(&mul)?);
        Ok((a, m) == (w.additive, w.multiplicative) && (a != Dimension::Finite(1) || m != Dimension::Finite(1)))
    }

    /// Eliminates the additive coordinates.
    pub fn mult_projection(&self) -> Result<Ideal> {
        let keep: Vec<usize> = (self.n..self.ideal.nvars()).collect();
        self.ideal.eliminate(&keep)
    }

    /// Whether the point given by `rows` (one row of rational coefficients
    /// over the configuration pairs for each coordinate pair of `V`) lies
    /// on `V` modulo the configuration locus and is linearly independent
    /// over `base`.
    pub fn dagger_member(&self, config: &GammaConfig, rows: &[Vec<Rational>], base: &SubspaceSpec) -> Result<bool> {
        let np = config.npairs();
        if rows.len() != self.n || rows.iter().any(|r| r.len() != np) {
            return Err(Error::AmbientMismatch(format!(
                "point needs {} rows of {} coefficients",
                self.n, np
            )));
        }
        if let Some(p) = &self.params {
            if p.pairs() != config.pairs() {
                return Err(Error::AmbientMismatch("parameters come from a different configuration".into()));
            }
        }
        let total = 2 * np;
        let mut images: Vec<Poly> = Vec::with_capacity(self.ideal.nvars());
        for r in rows {
            images.push(LaurentPoly::linear(total, 0, r));
        }
        for r in rows {
            let mut e = vec![0i64; total];
            for (j, q) in r.iter().enumerate() {
                e[np + j] = rational_to_i64(q).ok_or_else(|| {
                    Error::InexpressibleExponential(format!("coefficient {} has no exponential among the pairs", q))
                })?;
            }
            images.push(LaurentPoly::monomial(e, Rational::one()));
        }
        images.extend((0..total).map(|i| LaurentPoly::var(total, i)).take(self.ideal.nvars() - 2 * self.n));
        for g in self.ideal.gens() {
            if !config.locus().contains(&g.compose(&images)?)? {
                return Ok(false);
            }
        }
        let point = SubspaceSpec::new(np, rows.to_vec());
        Ok(config.ldim(&point, base) == self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWitness {
    pub row: Vec<i64>,
    pub additive: Dimension,
    pub multiplicative: Dimension,
}

/// A coset of a subtorus: `y^{lattice row k} = constants[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetForm {
    pub lattice: ZMatrix,
    pub constants: Vec<Poly>,
    /// Unimodular change of coordinates whose first rows are the lattice;
    /// in the new coordinates the coset reads `y'_k = c_k`.
    pub change: Option<ZMatrix>,
}

impl CosetForm {
    /// The binomial ideal of the coset in `vars` (the first `n` are the
    /// torus coordinates, the rest parameters the constants live in).
    pub fn ideal(&self, vars: Vec<String>, inverted: Vec<bool>) -> Result<Ideal> {
        let total = vars.len();
        let n = self.lattice.ncols();
        let map: Vec<usize> = (n..total).collect();
        let gens = self
            .lattice
            .rows()
            .iter()
            .zip(&self.constants)
            .map(|(r, c)| {
                let mut pos = vec![0i64; total];
                let mut neg = vec![0i64; total];
                for (j, &v) in r.iter().enumerate() {
                    if v > 0 {
                        pos[j] = v;
                    } else {
                        neg[j] = -v;
                    }
                }
                &LaurentPoly::monomial(pos, Rational::one())
                    - &(&LaurentPoly::monomial(neg, Rational::one()) * &c.embed(total, &map))
            })
            .collect::<Vec<_>>();
        Ideal::new(vars, gens, inverted)
    }
}

/// Searches characters of height at most `h` that are constant on `V(w)`.
/// `w` lives in torus coordinates `0..n` followed by parameters. Returns
/// a coset form when the characters found cut out `w` exactly.
pub fn coset_normal_form(w: &Ideal, n: usize, h: u32) -> Result<Option<CosetForm>> {
    let total = w.nvars();
    let p = total - n;
    if !w.is_proper()? {
        return Err(Error::Precondition("ideal is the unit ideal".into()));
    }
    let dim = w.dimension()?.value().unwrap_or(0);
    let pdim = if p == 0 {
        0
    } else {
        w.eliminate(&(n..total).collect::<Vec<_>>())?.dimension()?.value().unwrap_or(0)
    };
    let codim = n - (dim - pdim).min(n);
    // y (n), z (n), params (p) with y_j z_j = 1
    let big = 2 * n + p;
    let map: Vec<usize> = (0..n).chain(2 * n..big).collect();
    let mut gens: Vec<Poly> = w.gens().iter().map(|g| g.embed(big, &map)).collect();
    for j in 0..n {
        let mut e = vec![0i64; big];
        e[j] = 1;
        e[n + j] = 1;
        gens.push(&LaurentPoly::monomial(e, Rational::one()) - &LaurentPoly::one(big));
    }
    let order = if p == 0 {
        TermOrder::degrevlex()
    } else {
        TermOrder::elimination((0..big).map(|i| i < 2 * n).collect())
    };
    let gb = GroebnerBasis::compute(big, &gens, &order, &mut Budget::from_default())?;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut constants: Vec<Poly> = Vec::new();
    if codim > 0 {
        for m in primitive_vectors(n, h as i64) {
            let mut e = vec![0i64; big];
            for j in 0..n {
                if m[j] > 0 {
                    e[j] = m[j];
                } else {
                    e[n + j] = -m[j];
                }
            }
            let nf = gb.normal_form(&LaurentPoly::monomial(e, Rational::one()), &mut Budget::from_default())?;
            if nf.terms().any(|(ex, _)| ex[..2 * n].iter().any(|&k| k != 0)) {
                continue;
            }
            let mut trial = rows.clone();
            trial.push(m.clone());
            if rank(n, &to_rational_rows(&trial)) > rows.len() {
                rows = trial;
                let keep: Vec<usize> = (2 * n..big).collect();
                constants.push(nf.restrict(&keep).expect("parameter-only normal form"));
                if rows.len() == codim {
                    break;
                }
            }
        }
    }
    if rows.len() < codim {
        return Ok(None);
    }
    let lattice = Matrix::from_rows(n, rows);
    let form = CosetForm { change: complete_greedily(&lattice), lattice, constants };
    let b = form.ideal(w.vars().to_vec(), w.inverted().to_vec())?;
    let b = if p == 0 {
        b
    } else {
        let pgens = w.eliminate(&(n..total).collect::<Vec<_>>())?;
        let map: Vec<usize> = (n..total).collect();
        b.with_generators(pgens.gens().iter().map(|g| g.embed(total, &map)))?
    };
    if !b.same_as(w)? {
        return Ok(None);
    }
    Ok(Some(form))
}

/// Completes the lattice rows to a unimodular matrix by appending unit
/// vectors `e_n, ..., e_1` while the rows stay saturated; falls back to a
/// Smith-based completion.
pub(crate) fn complete_greedily(lattice: &ZMatrix) -> Option<ZMatrix> {
    let n = lattice.ncols();
    let mut rows = lattice.rows().to_vec();
    for j in (0..n).rev() {
        if rows.len() == n {
            break;
        }
        let mut e = vec![0i64; n];
        e[j] = 1;
        let mut trial = rows.clone();
        trial.push(e);
        let m = Matrix::from_rows(n, trial.clone());
        let sm = m.smith();
        if (0..trial.len()).all(|i| sm.s.get(i, i).is_one()) {
            rows = trial;
        }
    }
    let m = Matrix::from_rows(n, rows);
    if m.is_square() && m.is_unimodular() {
        Some(m)
    } else {
        lattice.unimodular_completion()
    }
}
