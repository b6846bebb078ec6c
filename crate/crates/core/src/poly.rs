//! Sparse multivariate Laurent polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Exponent vector of a Laurent monomial. Entries may be negative.
pub type Exponents = Vec<i64>;

/// A Laurent polynomial in `nvars` variables.
///
/// Variable names live with the owning ideal or configuration, not here;
/// `display` takes them as an argument.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentPoly<C = BigRational> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Field> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, C::one())
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    /// Linear form `sum coeffs[i] * var(offset + i)` in `nvars` variables.
    pub fn linear(nvars: usize, offset: usize, coeffs: &[C]) -> Self {
        Self::from_terms(
            nvars,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; nvars];
                e[offset + i] = 1;
                (e, c.clone())
            }),
        )
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponents, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, e: &[i64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// True iff the polynomial is a unit of the Laurent ring: a single
    /// nonzero term.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0)))
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Componentwise minimum exponent over all terms (zero vector for 0).
    pub fn min_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(mut cur) => {
                    for (a, b) in cur.iter_mut().zip(e) {
                        *a = (*a).min(*b);
                    }
                    cur
                }
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .collect()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    /// Multiplies by the monomial with exponent `shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Multiplies by a monomial so that no exponent is negative and, in each
    /// variable, the minimum exponent is zero whenever it was negative.
    /// Returns the cleared polynomial and the applied shift.
    pub fn clear_negative(&self) -> (Self, Exponents) {
        let shift: Exponents = self.min_exponents().iter().map(|&m| (-m).max(0)).collect();
        (self.shift(&shift), shift)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a unit (single term).
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(
            e.iter().map(|x| -x).collect(),
            C::one() / c.clone(),
        ))
    }

    /// Integer power allowing negative exponents for units.
    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            let inv = self
                .unit_inverse()
                .ok_or_else(|| Error::Precondition("negative power of a non-unit".into()))?;
            Ok(inv.pow((-k) as u32))
        }
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// ring. A negative exponent is allowed only where the image is a unit.
    pub fn compose(&self, images: &[LaurentPoly<C>]) -> Result<Self> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    term = &term * &images[i].pow_i64(k)?;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-indexes into a ring with `nvars` variables, sending variable `i`
    /// to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        LaurentPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0; nvars];
                    for (i, &k) in e.iter().enumerate() {
                        ne[map[i]] += k;
                    }
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Restricts to a subset of variables; `None` if a dropped variable occurs.
    pub fn restrict(&self, keep: &[usize]) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                if k != 0 && !keep.contains(&i) {
                    return None;
                }
            }
            terms.insert(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        Some(LaurentPoly {
            nvars: keep.len(),
            terms,
        })
    }

    pub fn derivative(&self, var: usize) -> Self {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] != 0).map(|(e, c)| {
                let mut d = e.clone();
                d[var] -= 1;
                (d, c.clone() * C::from_i64(e[var]))
            }),
        )
    }

    /// `z * d/dz` for the variable `z = var`.
    pub fn euler_derivative(&self, var: usize) -> Self {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] != 0).map(|(e, c)| (e.clone(), c.clone() * C::from_i64(e[var]))),
        )
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Leading coefficient in lexicographic order of exponent vectors.
    pub fn lex_leading(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().next_back()
    }

    /// Renders with the given variable names, highest lexicographic term first.
    pub fn display(&self, names: &[impl AsRef<str>]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].as_ref().to_string()
                    } else {
                        format!("{}^{}", names[i].as_ref(), k)
                    }
                })
                .collect();
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    let _ = write!(s, "{}*", mag);
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl<'a, C: Field> Add for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Field> Sub for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Field> Mul for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "ring mismatch");
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<'a, C: Field> Neg for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Field> Add for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        &self + &rhs
    }
}

impl<C: Field> Sub for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        &self - &rhs
    }
}

impl<C: Field> Mul for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        &self * &rhs
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    src: &'a str,
}

fn lex(src: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (col, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((Tok::Num(s.parse().unwrap()), col + 1));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((Tok::Ident(s), col + 1));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Sym(ch), col + 1));
            i += 1;
        } else if ch == '−' {
            out.push((Tok::Sym('-'), col + 1));
            i += 1;
        } else {
            return Err(Error::parse(line, col + 1, format!("unexpected character `{}`", ch)));
        }
    }
    Ok(out)
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or(self.src.len() + 1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

struct PolyParser<'a, 'n, S: AsRef<str>> {
    lx: Lexer<'a>,
    names: &'n [S],
}

impl<'a, 'n, S: AsRef<str>> PolyParser<'a, 'n, S> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = if self.lx.eat('-') {
            -&self.term()?
        } else {
            self.lx.eat('+');
            self.term()?
        };
        loop {
            if self.lx.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.lx.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.lx.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.lx.eat('/') {
                let d = self.factor()?;
                let c = d
                    .constant_value()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| self.lx.err("division only by a nonzero constant"))?;
                acc = acc.scale(&(BigRational::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.lx.eat('^') {
            let neg = self.lx.eat('-');
            let k = match self.lx.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.lx.pos += 1;
                    i64::try_from(n).map_err(|_| self.lx.err("exponent too large"))?
                }
                _ => return Err(self.lx.err("expected integer exponent")),
            };
            let k = if neg { -k } else { k };
            base.pow_i64(k)
                .map_err(|_| self.lx.err("negative exponent requires a monomial base"))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.lx.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.lx.pos += 1;
                Ok(LaurentPoly::constant(self.nvars(), BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let idx = self
                    .names
                    .iter()
                    .position(|n| n.as_ref() == name)
                    .ok_or_else(|| self.lx.err(format!("unknown variable `{}`", name)))?;
                self.lx.pos += 1;
                Ok(LaurentPoly::var(self.nvars(), idx))
            }
            Some(Tok::Sym('(')) => {
                self.lx.pos += 1;
                let e = self.expr()?;
                if !self.lx.eat(')') {
                    return Err(self.lx.err("expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.lx.pos += 1;
                Ok(-&self.atom()?)
            }
            _ => Err(self.lx.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses a rational Laurent polynomial over the given variable names.
///
/// Accepts `+ - * / ^ ( )`, integer literals, and integer (possibly
/// negative) exponents. Division is only by nonzero constants.
pub fn parse_poly<S: AsRef<str>>(text: &str, names: &[S]) -> Result<LaurentPoly> {
    parse_poly_at(text, names, 1)
}

/// As [`parse_poly`], reporting errors on the given line number.
pub fn parse_poly_at<S: AsRef<str>>(text: &str, names: &[S], line: usize) -> Result<LaurentPoly> {
    let toks = lex(text, line)?;
    if toks.is_empty() {
        return Err(Error::parse(line, 1, "empty polynomial"));
    }
    let mut p = PolyParser {
        lx: Lexer {
            toks,
            pos: 0,
            line,
            src: text,
        },
        names,
    };
    let out = p.expr()?;
    if p.lx.pos != p.lx.toks.len() {
        return Err(p.lx.err("trailing input"));
    }
    Ok(out)
}
