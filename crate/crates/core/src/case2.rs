//! Translation generators for pairs of integer translations, and the
//! Laurent functional equation
//! `p(X1 + beta, Y^M * gamma) = xi * Y^u * p(X1, Y)`
//! with `N = M^T`: supports, permutation-plus-translation solutions,
//! iteration to `h!` and the resulting constraint on `beta`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::bezout;
use crate::poly::LaurentPoly;
use crate::scalar::{denominator_lcm, gcd_slice, parse_rational, rat_int};
use crate::{Poly, QMatrix, Rational};

/// A coefficient that is either a known rational or a free symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Value(Rational),
    Symbol(String),
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(q) = parse_rational(s) {
            return Ok(Param::Value(q));
        }
        let ok = s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && s.chars().all(|c| c.is_alphanumeric() || c == '_');
        if ok {
            Ok(Param::Symbol(s.to_string()))
        } else {
            Err(Error::Validation(format!("'{}' is neither a rational nor a symbol", s)))
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(q) => write!(f, "{}", q),
            Param::Symbol(s) => write!(f, "{}", s),
        }
    }
}

/// `p(X1 + beta, Y^M * gamma) = xi * Y^u * p(X1, Y)`, where `p` is in the
/// variables `X1, Y_2, ..., Y_n` and `n_matrix = M^T`.
#[derive(Debug, Clone)]
pub struct FunctionalEquation {
    pub p: Poly,
    pub n_matrix: QMatrix,
    pub gamma: Vec<Param>,
    pub beta: Param,
    pub xi: Param,
    pub u: Vec<Rational>,
}

/// Exponents of `Y` occurring in `p` with their coefficients in `X1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportData {
    pub s: Vec<Vec<i64>>,
    pub h: usize,
    /// Univariate polynomials in `X1`.
    pub coefficients: BTreeMap<Vec<i64>, Poly>,
}

impl SupportData {
    pub fn dim(&self) -> usize {
        self.s.first().map_or(0, |v| v.len())
    }
}

pub fn support(p: &Poly) -> Result<SupportData> {
    if p.is_zero() {
        return Err(Error::Precondition("the zero polynomial has no support".into()));
    }
    if p.nvars() == 0 {
        return Err(Error::Precondition("expected variables X1, Y_2, ..., Y_n".into()));
    }
    let mut coefficients: BTreeMap<Vec<i64>, Poly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let term = LaurentPoly::monomial(vec![e[0]], c.clone());
        let entry = coefficients.entry(e[1..].to_vec()).or_insert_with(|| LaurentPoly::zero(1));
        *entry = &*entry + &term;
    }
    let s: Vec<Vec<i64>> = coefficients.keys().cloned().collect();
    Ok(SupportData { h: s.len(), s, coefficients })
}

/// A bijection `mu` of the support and a translation `u` with
/// `N s = mu(s) + u` for every `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationSolution {
    pub mu: BTreeMap<Vec<i64>, Vec<i64>>,
    pub u: Vec<Rational>,
}

impl PermutationSolution {
    /// Order of `mu` as a permutation.
    pub fn order(&self) -> u64 {
        let mut seen = BTreeSet::new();
        let mut order = 1u64;
        for start in self.mu.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut len = 0u64;
            let mut cur = start.clone();
            loop {
                seen.insert(cur.clone());
                cur = self.mu[&cur].clone();
                len += 1;
                if &cur == start {
                    break;
                }
            }
            order = order.lcm(&len);
        }
        order
    }

    /// Cycle notation over the support, e.g. `(0 1)`.
    pub fn cycles(&self) -> Vec<Vec<Vec<i64>>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.mu.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start.clone();
            loop {
                seen.insert(cur.clone());
                cycle.push(cur.clone());
                cur = self.mu[&cur].clone();
                if &cur == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }
}

fn int_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat_int(x)).collect()
}

fn check_square(n: &QMatrix, k: usize) -> Result<()> {
    if n.nrows() != k || n.ncols() != k {
        return Err(Error::AmbientMismatch(format!(
            "matrix is {}x{}, support lives in dimension {}",
            n.nrows(),
            n.ncols(),
            k
        )));
    }
    Ok(())
}

/// Since `mu` permutes `S`, summing `N s = mu(s) + u` over `S` forces
/// `u = N c - c` for the mean `c` of `S`; the induced map is then checked
/// to be a bijection.
pub fn solve_permutation(s: &SupportData, n: &QMatrix) -> Result<Option<PermutationSolution>> {
    let k = s.dim();
    check_square(n, k)?;
    let h = Rational::from_integer(BigInt::from(s.h));
    let mut c = vec![Rational::zero(); k];
    for v in &s.s {
        for (ci, &x) in c.iter_mut().zip(v) {
            *ci += rat_int(x);
        }
    }
    let c: Vec<Rational> = c.into_iter().map(|x| x / &h).collect();
    let nc = n.mul_vec(&c);
    let u: Vec<Rational> = nc.iter().zip(&c).map(|(a, b)| a - b).collect();
    let members: BTreeSet<&Vec<i64>> = s.s.iter().collect();
    let mut mu = BTreeMap::new();
    let mut images = BTreeSet::new();
    for v in &s.s {
        let img: Vec<Rational> = n.mul_vec(&int_vec(v)).iter().zip(&u).map(|(a, b)| a - b).collect();
        if img.iter().any(|x| !x.is_integer()) {
            return Ok(None);
        }
        let img: Option<Vec<i64>> = img.iter().map(|x| x.to_integer().to_i64()).collect();
        let Some(img) = img else { return Ok(None) };
        if !members.contains(&img) || !images.insert(img.clone()) {
            return Ok(None);
        }
        mu.insert(v.clone(), img);
    }
    let sol = PermutationSolution { mu, u };
    Ok(check_permutation(s, n, &sol).then_some(sol))
}

/// Re-verifies `N s = mu(s) + u` on the support and that `mu` is a
/// bijection of it.
pub fn check_permutation(s: &SupportData, n: &QMatrix, sol: &PermutationSolution) -> bool {
    let members: BTreeSet<&Vec<i64>> = s.s.iter().collect();
    let images: BTreeSet<&Vec<i64>> = sol.mu.values().collect();
    if sol.mu.len() != s.h || images != members || sol.mu.keys().collect::<BTreeSet<_>>() != members {
        return false;
    }
    sol.mu.iter().all(|(v, img)| {
        let lhs = n.mul_vec(&int_vec(v));
        let rhs: Vec<Rational> = int_vec(img).iter().zip(&sol.u).map(|(a, b)| a + b).collect();
        lhs == rhs
    })
}

/// `(N^r, (I + N + ... + N^{r-1}) u)` by repeated squaring of the cocycle.
pub fn iterate_relation(n: &QMatrix, u: &[Rational], r: u64) -> Result<(QMatrix, Vec<Rational>)> {
    if r == 0 {
        return Err(Error::Precondition("iteration count must be at least 1".into()));
    }
    let k = u.len();
    check_square(n, k)?;
    let compose = |a: &(QMatrix, Vec<Rational>), b: &(QMatrix, Vec<Rational>)| {
        let g: Vec<Rational> = a.1.iter().zip(a.0.mul_vec(&b.1)).map(|(x, y)| x + y).collect();
        (a.0.mul(&b.0), g)
    };
    let mut acc = (QMatrix::identity(k), vec![Rational::zero(); k]);
    let mut base = (n.clone(), u.to_vec());
    let mut r = r;
    while r > 0 {
        if r & 1 == 1 {
            acc = compose(&acc, &base);
        }
        r >>= 1;
        if r > 0 {
            base = compose(&base, &base);
        }
    }
    Ok(acc)
}

pub fn factorial(h: usize) -> Result<u64> {
    (1..=h as u64).try_fold(1u64, |acc, i| acc.checked_mul(i)).ok_or_else(|| {
        Error::ResourceLimit(format!("{}! does not fit in 64 bits", h))
    })
}

/// Outcome of [`verify_equation`].
#[derive(Debug, Clone, PartialEq)]
pub struct EquationCheck {
    pub holds: bool,
    /// `Y = Z^scale` was substituted to make all exponents integral.
    pub scale: i64,
    /// `xi` as solved from the leading term when it was given as a symbol.
    pub xi: Option<String>,
    /// First exponent vector over `X1, Y` where the two sides differ.
    pub mismatch: Option<Vec<Rational>>,
}

/// Least `m` making `m N s` and `m u` integral for `s` in the support.
pub fn rescaling_factor(s: &SupportData, n: &QMatrix, u: &[Rational]) -> Result<i64> {
    check_square(n, s.dim())?;
    let mut l = denominator_lcm(u);
    for v in &s.s {
        l = l.lcm(&denominator_lcm(&n.mul_vec(&int_vec(v))));
    }
    l.to_i64().ok_or_else(|| Error::ResourceLimit("rescaling factor overflow".into()))
}

fn scaled(v: &[Rational], m: i64) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            let y = x * rat_int(m);
            if !y.is_integer() {
                return Err(Error::NonIntegralExponent(format!(
                    "exponent {} is not integral after substituting Y = Z^{}",
                    x, m
                )));
            }
            y.to_integer().to_i64().ok_or_else(|| Error::ResourceLimit("exponent overflow".into()))
        })
        .collect()
}

/// Both sides of the equation after `Y = Z^m`, without the factor `xi`
/// on the right. Variables: `X1, Z_2..Z_n`, then the symbols in order of
/// first appearance among `beta, gamma`.
pub fn expand_equation(eq: &FunctionalEquation, m: i64) -> Result<(Poly, Poly, Vec<String>)> {
    let n = eq.p.nvars();
    let k = n - 1;
    check_square(&eq.n_matrix, k)?;
    if eq.gamma.len() != k || eq.u.len() != k {
        return Err(Error::AmbientMismatch(format!("gamma and u need {} entries", k)));
    }
    let mut names: Vec<String> = vec!["X1".to_string()];
    names.extend((2..=n).map(|i| format!("Z{}", i)));
    let mut symbols: Vec<String> = Vec::new();
    for p in std::iter::once(&eq.beta).chain(&eq.gamma) {
        if let Param::Symbol(name) = p {
            if !symbols.contains(name) {
                symbols.push(name.clone());
            }
        }
    }
    let total = n + symbols.len();
    names.extend(symbols.iter().cloned());
    let value = |p: &Param| -> Poly {
        match p {
            Param::Value(q) => LaurentPoly::constant(total, q.clone()),
            Param::Symbol(name) => LaurentPoly::var(total, n + symbols.iter().position(|x| x == name).unwrap()),
        }
    };
    for g in &eq.gamma {
        if *g == Param::Value(Rational::zero()) {
            return Err(Error::Validation("gamma entries must be nonzero".into()));
        }
    }
    let shift = &LaurentPoly::var(total, 0) + &value(&eq.beta);
    let mut lhs = LaurentPoly::zero(total);
    let mut rhs = LaurentPoly::zero(total);
    let zu = scaled(&eq.u, m)?;
    for (e, c) in eq.p.terms() {
        if e[0] < 0 {
            return Err(Error::NegativeExponent("X1 occurs with a negative exponent".into()));
        }
        let sv = &e[1..];
        let ns = scaled(&eq.n_matrix.mul_vec(&int_vec(sv)), m)?;
        let mut zexp = vec![0i64; total];
        zexp[1..n].copy_from_slice(&ns);
        let mut term = &shift.pow(e[0] as u32) * &LaurentPoly::monomial(zexp, c.clone());
        for (g, &si) in eq.gamma.iter().zip(sv) {
            if si != 0 {
                term = &term * &value(g).pow_i64(si)?;
            }
        }
        lhs = &lhs + &term;
        let mut rexp = vec![0i64; total];
        rexp[0] = e[0];
        for i in 0..k {
            rexp[1 + i] = sv[i] * m + zu[i];
        }
        rhs = &rhs + &LaurentPoly::monomial(rexp, c.clone());
    }
    Ok((lhs, rhs, names))
}

/// Expands both sides with symbols as fresh transcendentals and compares
/// them term by term. A symbolic `xi` is first solved from the leading
/// term of the right-hand side.
pub fn verify_equation(eq: &FunctionalEquation) -> Result<EquationCheck> {
    let s = support(&eq.p)?;
    let m = rescaling_factor(&s, &eq.n_matrix, &eq.u)?;
    let (lhs, base, names) = expand_equation(eq, m)?;
    let n = eq.p.nvars();
    let total = names.len();
    let (rhs, xi) = match &eq.xi {
        Param::Value(x) => (base.scale(x), None),
        Param::Symbol(_) => {
            let (lead, c) = base.lex_leading().expect("p is nonzero");
            let lead = lead[..n].to_vec();
            let coef = LaurentPoly::from_terms(
                total,
                lhs.terms().filter(|(e, _)| e[..n] == lead[..]).map(|(e, a)| {
                    let mut e = e.clone();
                    e[..n].iter_mut().for_each(|x| *x = 0);
                    (e, a / c)
                }),
            );
            let shown = coef.display(&names);
            (&coef * &base, Some(shown))
        }
    };
    let diff = &lhs - &rhs;
    let mismatch = diff.terms().next().map(|(e, _)| {
        let mut v = vec![rat_int(e[0])];
        v.extend(e[1..n].iter().map(|&z| Rational::new(BigInt::from(z), BigInt::from(m))));
        v
    });
    Ok(EquationCheck { holds: diff.is_zero(), scale: m, xi, mismatch })
}

fn eq_display(p: &Poly) -> String {
    let mut names = vec!["X1".to_string()];
    names.extend((2..=p.nvars()).map(|i| format!("Y{}", i)));
    p.display(&names)
}

/// Admissible values of `beta`.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaConstraint {
    Values(Vec<Rational>),
    /// No permutation-plus-translation solution exists.
    NoConstraint,
}

impl fmt::Display for BetaConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaConstraint::Values(v) => {
                let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            BetaConstraint::NoConstraint => write!(f, "no constraint derivable"),
        }
    }
}

/// Everything derived from `p` and `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Case2Report {
    pub support: SupportData,
    pub solution: Option<PermutationSolution>,
    pub h: usize,
    /// `h!`
    pub period: u64,
    /// `(I + N + ... + N^{h!-1}) u`
    pub v: Option<Vec<Rational>>,
    /// The support element whose coefficient `q(X1)` was used.
    pub chosen: Option<Vec<i64>>,
    pub beta: BetaConstraint,
}

/// Dense univariate coefficients, lowest degree first, no trailing zeros.
type Univariate = Vec<Rational>;

fn trim(mut p: Univariate) -> Univariate {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &Univariate, b: &Univariate) -> Univariate {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let f = &lr / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: Univariate, b: Univariate) -> Univariate {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn eval(p: &Univariate, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let limit = BigInt::from(1_000_000_000_000i64);
    if n > limit {
        return Err(Error::ResourceLimit(format!("cannot enumerate divisors of {}", n)));
    }
    let n = n.to_u64().unwrap();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Rational roots of a nonzero univariate polynomial, ascending.
fn rational_roots(p: &Univariate) -> Result<Vec<Rational>> {
    let p = trim(p.clone());
    let mut roots = Vec::new();
    let low = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::zero());
    }
    let q: Univariate = p[low..].to_vec();
    if q.len() > 1 {
        let l = denominator_lcm(&q);
        let ints: Vec<BigInt> = q.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        for a in divisors(&ints[0])? {
            for b in divisors(ints.last().unwrap())? {
                for cand in [Rational::new(a.clone(), b.clone()), -Rational::new(a.clone(), b.clone())] {
                    if eval(&q, &cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Solves `q(X1 + r*beta) = q(X1)` for rational `beta`: every coefficient
/// in `X1` of the difference is a polynomial in `beta`, and the answer is
/// the set of common rational roots.
pub fn periodicity_roots(q: &Poly, r: u64) -> Result<Vec<Rational>> {
    // variables X1, beta
    let x = LaurentPoly::var(2, 0);
    let beta = LaurentPoly::var(2, 1).scale(&Rational::from_integer(BigInt::from(r)));
    let shifted = q.compose(&[&x + &beta])?;
    let diff = &shifted - &q.embed(2, &[0]);
    let mut by_x: BTreeMap<i64, Univariate> = BTreeMap::new();
    for (e, c) in diff.terms() {
        let v = by_x.entry(e[0]).or_default();
        let d = e[1] as usize;
        if v.len() <= d {
            v.resize(d + 1, Rational::zero());
        }
        v[d] += c;
    }
    let g = by_x.into_values().fold(Vec::new(), poly_gcd);
    if g.is_empty() {
        return Err(Error::Precondition("q is constant, every shift is a period".into()));
    }
    rational_roots(&g)
}

/// The constraint on `beta` forced by the functional equation for the
/// given `p` and `N`.
pub fn derive_beta_constraint(p: &Poly, n: &QMatrix) -> Result<Case2Report> {
    let s = support(p)?;
    let chosen = s.coefficients.iter().find(|(_, q)| q.involves(0)).map(|(k, _)| k.clone());
    let Some(chosen) = chosen else {
        return Err(Error::IndependentOfX1(eq_display(p)));
    };
    let h = s.h;
    let period = factorial(h)?;
    let Some(solution) = solve_permutation(&s, n)? else {
        return Ok(Case2Report { support: s, solution: None, h, period, v: None, chosen: None, beta: BetaConstraint::NoConstraint });
    };
    let (_, v) = iterate_relation(n, &solution.u, period)?;
    let q = &s.coefficients[&chosen];
    let values = periodicity_roots(q, period)?;
    Ok(Case2Report {
        support: s,
        solution: Some(solution),
        h,
        period,
        v: Some(v),
        chosen: Some(chosen),
        beta: BetaConstraint::Values(values),
    })
}

/// Minimal generator of a family of colinear integer translations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationGenerator {
    pub d: (i64, i64),
    /// `-1` when the second coordinate had to be negated, i.e. the inputs
    /// lie on a line of negative slope.
    pub sign: i64,
    /// `pair_i = exponents[i] * d`
    pub exponents: Vec<i64>,
    /// `sum coefficients[i] * pair_i = d`
    pub coefficients: Vec<i64>,
}

pub fn translation_generator(pairs: &[(i64, i64)]) -> Result<TranslationGenerator> {
    if pairs.is_empty() {
        return Err(Error::Precondition("no translations given".into()));
    }
    for (i, &(m1, m2)) in pairs.iter().enumerate() {
        for &(l1, l2) in &pairs[i + 1..] {
            if l1 * m2 - l2 * m1 != 0 {
                return Err(Error::NonColinear(format!("({}, {}) and ({}, {})", m1, m2, l1, l2)));
            }
        }
    }
    let d1 = gcd_slice(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let d2 = gcd_slice(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let sign = match pairs.iter().find(|p| p.0 != 0 && p.1 != 0) {
        Some(&(a, b)) if a.signum() != b.signum() => -1,
        _ => 1,
    };
    let d = (d1, sign * d2);
    if d == (0, 0) {
        return Ok(TranslationGenerator { d, sign, exponents: vec![0; pairs.len()], coefficients: vec![0; pairs.len()] });
    }
    let exponents: Vec<i64> = pairs.iter().map(|&(a, b)| if d.0 != 0 { a / d.0 } else { b / d.1 }).collect();
    // extended gcd of the exponents, which are coprime
    let mut coefficients = vec![0i64; pairs.len()];
    let mut g = 0i64;
    for (i, &r) in exponents.iter().enumerate() {
        let (ng, a, b) = bezout(g, r);
        for c in coefficients.iter_mut().take(i) {
            *c *= a;
        }
        coefficients[i] = b;
        g = ng;
    }
    if g == -1 {
        coefficients.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(TranslationGenerator { d, sign, exponents, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::scalar::rat;

    fn p(text: &str, n: usize) -> Poly {
        let mut names = vec!["X1".to_string()];
        names.extend((2..=n).map(|i| format!("Y{}", i)));
        parse_poly(text, &names).unwrap()
    }

    fn qm(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.len(), rows.iter().map(|r| int_vec(r)).collect())
    }

    fn eq(poly: &str, n: i64, gamma: &str, beta: &str, xi: &str) -> FunctionalEquation {
        FunctionalEquation {
            p: p(poly, 2),
            n_matrix: qm(&[&[n]]),
            gamma: vec![gamma.parse().unwrap()],
            beta: beta.parse().unwrap(),
            xi: xi.parse().unwrap(),
            u: vec![Rational::zero()],
        }
    }

    #[test]
    fn supports() {
        let s = support(&p("X1^2 + Y2", 2)).unwrap();
        assert_eq!(s.s, vec![vec![0], vec![1]]);
        assert_eq!(s.coefficients[&vec![0]], p("X1^2", 2).restrict(&[0]).unwrap());
        assert_eq!(s.coefficients[&vec![1]], LaurentPoly::one(1));
        assert_eq!(support(&p("7", 2)).unwrap().h, 1);
        assert_eq!(support(&p("X1*Y2 + X1*Y2^-1", 2)).unwrap().s, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn permutations() {
        let s = support(&p("X1^2 + Y2", 2)).unwrap();
        let sol = solve_permutation(&s, &qm(&[&[1]])).unwrap().unwrap();
        assert_eq!(sol.u, vec![Rational::zero()]);
        assert_eq!(sol.order(), 1);
        let sol = solve_permutation(&s, &qm(&[&[-1]])).unwrap().unwrap();
        assert_eq!(sol.u, vec![rat_int(-1)]);
        assert_eq!(sol.mu[&vec![0]], vec![1]);
        assert_eq!(sol.mu[&vec![1]], vec![0]);
        assert!(check_permutation(&s, &qm(&[&[-1]]), &sol));
        assert_eq!(solve_permutation(&s, &qm(&[&[2]])).unwrap(), None);
    }

    #[test]
    fn iteration() {
        let n = qm(&[&[-1]]);
        let u = vec![rat_int(-1)];
        assert_eq!(iterate_relation(&n, &u, 1).unwrap(), (n.clone(), u.clone()));
        assert_eq!(iterate_relation(&n, &u, 2).unwrap(), (qm(&[&[1]]), vec![Rational::zero()]));
        let id = qm(&[&[1, 0], &[0, 1]]);
        let w = vec![rat(1, 2), rat_int(3)];
        assert_eq!(iterate_relation(&id, &w, 5).unwrap().1, vec![rat(5, 2), rat_int(15)]);
        assert!(iterate_relation(&n, &u, 0).is_err());
    }

    #[test]
    fn equations() {
        assert!(verify_equation(&eq("X1^2 + Y2", 1, "1", "0", "1")).unwrap().holds);
        let c = verify_equation(&eq("X1^2 + Y2", 1, "1", "1", "1")).unwrap();
        assert!(!c.holds);
        assert!(c.mismatch.is_some());
        assert!(verify_equation(&eq("X1*Y2", 1, "5", "0", "5")).unwrap().holds);
        let c = verify_equation(&eq("X1*Y2", 1, "g", "0", "xi")).unwrap();
        assert!(c.holds);
        assert_eq!(c.xi.as_deref(), Some("g"));
        assert!(!verify_equation(&eq("X1*Y2", 1, "5", "0", "3")).unwrap().holds);
    }

    #[test]
    fn rescaled_equation() {
        // Y^2 maps to Y under N = 1/2; with Y = Z^2 everything is integral
        let mut e = eq("X1 + Y2^2", 1, "1", "0", "1");
        e.n_matrix = QMatrix::from_rows(1, vec![vec![rat(1, 2)]]);
        e.p = p("X1*Y2^2 + Y2^4", 2);
        e.u = vec![rat_int(-1)];
        let c = verify_equation(&e).unwrap();
        assert_eq!(c.scale, 1);
        assert!(matches!(expand_equation(&{ let mut f = e.clone(); f.u = vec![rat(1, 2)]; f }, 1), Err(Error::NonIntegralExponent(_))));
        let mut f = e.clone();
        f.u = vec![rat(1, 2)];
        assert_eq!(verify_equation(&f).unwrap().scale, 2);
    }

    #[test]
    fn beta_constraints() {
        let r = derive_beta_constraint(&p("X1^2 + Y2", 2), &qm(&[&[1]])).unwrap();
        assert_eq!(r.beta, BetaConstraint::Values(vec![Rational::zero()]));
        let r = derive_beta_constraint(&p("X1^2 + Y2", 2), &qm(&[&[-1]])).unwrap();
        assert_eq!(r.h, 2);
        assert_eq!(r.period, 2);
        assert_eq!(r.v, Some(vec![Rational::zero()]));
        assert_eq!(r.beta, BetaConstraint::Values(vec![Rational::zero()]));
        assert!(matches!(derive_beta_constraint(&p("Y2 + Y2^2", 2), &qm(&[&[1]])), Err(Error::IndependentOfX1(_))));
        let r = derive_beta_constraint(&p("X1^2 + Y2", 2), &qm(&[&[2]])).unwrap();
        assert_eq!(r.beta, BetaConstraint::NoConstraint);
    }

    #[test]
    fn roots() {
        // (b - 1/2)(b + 3) b
        let p = vec![rat_int(0), rat(-3, 2), rat(5, 2), rat_int(1)];
        assert_eq!(rational_roots(&p).unwrap(), vec![rat_int(-3), rat_int(0), rat(1, 2)]);
        assert_eq!(rational_roots(&vec![rat_int(1), rat_int(0), rat_int(1)]).unwrap(), vec![]);
    }

    #[test]
    fn translation_generators() {
        let t = translation_generator(&[(2, 4), (3, 6)]).unwrap();
        assert_eq!(t.d, (1, 2));
        assert_eq!(t.exponents, vec![2, 3]);
        assert_eq!(2 * t.coefficients[0] + 3 * t.coefficients[1], 1);
        let t = translation_generator(&[(0, 0)]).unwrap();
        assert_eq!(t.d, (0, 0));
        assert!(matches!(translation_generator(&[(2, 4), (3, 5)]), Err(Error::NonColinear(_))));
        let t = translation_generator(&[(2, -4), (-3, 6)]).unwrap();
        assert_eq!((t.d, t.sign, t.exponents), ((1, -2), -1, vec![2, -3]));
        let t = translation_generator(&[(0, 4), (0, -6)]).unwrap();
        assert_eq!((t.d, t.exponents), ((0, 2), vec![2, -3]));
    }
}
