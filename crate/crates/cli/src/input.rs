//! Sectioned plain-text input files.
//!
//! A file is a sequence of `[section]` headers, each followed by entries,
//! one per line. `#` starts a comment; blank lines are ignored.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use exphull::gamma::variable_names;
use exphull::mordell::RadicalUnit;
use exphull::poly::parse_poly_at;
use exphull::scalar::parse_rational;
use exphull::variety::pair_names;
use exphull::case2::Param;
use exphull::{AVariety, Error, FunctionalEquation, GammaConfig, Ideal, Matrix, Poly, QMatrix, RadicalField, Rational, UnitGroupField};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub column: usize,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone)]
pub struct Sections {
    list: Vec<Section>,
}

impl Sections {
    /// Splits `text` into sections, rejecting names outside `allowed` and
    /// repeated sections.
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, Error> {
        let mut list: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                continue;
            }
            let column = body.len() - body.trim_start().len() + 1;
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| parse_err(line, column, "unterminated section header"))?
                    .trim();
                if !allowed.contains(&name) {
                    return Err(parse_err(
                        line,
                        column,
                        format!("unknown section [{}]; expected one of {}", name, bracketed(allowed)),
                    ));
                }
                if let Some(prev) = list.iter().find(|s| s.name == name) {
                    return Err(parse_err(line, column, format!("section [{}] repeated (first at line {})", name, prev.line)));
                }
                list.push(Section { name: name.to_string(), line, entries: Vec::new() });
                continue;
            }
            let section = list
                .last_mut()
                .ok_or_else(|| parse_err(line, column, "entry before the first section header"))?;
            section.entries.push(Entry { line, column, text: trimmed.to_string() });
        }
        Ok(Sections { list })
    }

    pub fn get(&self, name: &str) -> Option<&Section> {
        self.list.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section, Error> {
        self.get(name).ok_or_else(|| Error::Validation(format!("missing section [{}]", name)))
    }
}

fn bracketed(names: &[&str]) -> String {
    names.iter().map(|n| format!("[{}]", n)).collect::<Vec<_>>().join(", ")
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn single<'a>(section: &'a Section) -> Result<&'a Entry, Error> {
    match section.entries.as_slice() {
        [e] => Ok(e),
        [] => Err(parse_err(section.line, 1, format!("section [{}] needs one entry", section.name))),
        [_, e, ..] => Err(parse_err(e.line, e.column, format!("section [{}] takes a single entry", section.name))),
    }
}

fn natural(entry: &Entry) -> Result<usize, Error> {
    let t = entry.text.strip_prefix("n").map(|r| r.trim_start().trim_start_matches('=').trim()).unwrap_or(&entry.text);
    t.parse::<usize>()
        .map_err(|_| parse_err(entry.line, entry.column, format!("expected a natural number, found '{}'", entry.text)))
}

fn poly(entry: &Entry, names: &[String]) -> Result<Poly, Error> {
    parse_poly_at(&entry.text, names, entry.line).map_err(|e| shift_column(e, entry.column - 1))
}

fn shift_column(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse { line, column: column + by, message },
        other => other,
    }
}

fn split_items(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

/// Comma- or space-separated rationals.
pub fn rational_list(text: &str, line: usize, column: usize) -> Result<Vec<Rational>, Error> {
    split_items(text)
        .map(|s| parse_rational(s).ok_or_else(|| parse_err(line, column, format!("'{}' is not a rational number", s))))
        .collect()
}

/// Rows separated by `;`, entries by `,` or spaces.
pub fn rational_rows(text: &str, line: usize, column: usize) -> Result<Vec<Vec<Rational>>, Error> {
    text.split(';').map(|r| rational_list(r, line, column)).collect()
}

/// Integer pairs `m1,m2;l1,l2;...`.
pub fn integer_pairs(text: &str) -> Result<Vec<(i64, i64)>, Error> {
    text.split(';')
        .map(|r| {
            let v: Vec<i64> = split_items(r)
                .map(|s| s.parse::<i64>().map_err(|_| parse_err(1, 1, format!("'{}' is not an integer", s))))
                .collect::<Result<_, _>>()?;
            match v.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(parse_err(1, 1, format!("'{}' is not an integer pair", r.trim()))),
            }
        })
        .collect()
}

fn is_identifier(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn boolean(entry: &Entry) -> Result<bool, Error> {
    match entry.text.to_ascii_lowercase().as_str() {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        other => Err(parse_err(entry.line, entry.column, format!("expected true or false, found '{}'", other))),
    }
}

/// Reads a file, attributing failures to its path.
pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn resolve(base: &Path, entry: &Entry) -> PathBuf {
    let p = Path::new(&entry.text);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn in_file<T>(path: &Path, r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|e| CliError::in_file(path, e))
}

pub const CONFIG_SECTIONS: &[&str] = &["pairs", "base", "locus", "qlinear", "irreducible"];

/// Parses a configuration: `[pairs]` (kernel first), `[base]` (prefix
/// length, default 1), `[locus]`, `[qlinear]`, `[irreducible]`.
pub fn parse_config(text: &str) -> Result<GammaConfig, Error> {
    let s = Sections::parse(text, CONFIG_SECTIONS)?;
    let mut pairs: Vec<String> = Vec::new();
    for e in &s.require("pairs")?.entries {
        for name in split_items(&e.text) {
            if !is_identifier(name) {
                return Err(parse_err(e.line, e.column, format!("'{}' is not a valid pair name", name)));
            }
            if pairs.iter().any(|p| p == name) {
                return Err(parse_err(e.line, e.column, format!("duplicate pair name '{}'", name)));
            }
            pairs.push(name.to_string());
        }
    }
    let base = match s.get("base") {
        Some(sec) => natural(single(sec)?)?,
        None => 1,
    };
    let names = variable_names(&pairs);
    let locus: Vec<Poly> = s.require("locus")?.entries.iter().map(|e| poly(e, &names)).collect::<Result<_, _>>()?;
    let mut qlinear = Vec::new();
    if let Some(sec) = s.get("qlinear") {
        for e in &sec.entries {
            let row = rational_list(&e.text, e.line, e.column)?;
            if row.len() != pairs.len() {
                return Err(parse_err(
                    e.line,
                    e.column,
                    format!("qlinear row has {} entries, expected {}", row.len(), pairs.len()),
                ));
            }
            qlinear.push(row);
        }
    }
    let irreducible = match s.get("irreducible") {
        Some(sec) => boolean(single(sec)?)?,
        None => true,
    };
    GammaConfig::new(pairs, base, locus, qlinear, irreducible)
}

pub fn load_config(path: &Path) -> Result<GammaConfig, CliError> {
    let text = read(path)?;
    in_file(path, parse_config(&text))
}

pub const VARIETY_SECTIONS: &[&str] = &["variables", "ideal", "params"];

/// Loads a variety: `[variables]` (number of pairs `n`), `[ideal]` in
/// `x1..xn, y1..yn`, and optionally `[params]`, the path of a
/// configuration whose coordinates may appear as coefficients.
pub fn load_variety(path: &Path) -> Result<AVariety, CliError> {
    let text = read(path)?;
    let s = in_file(path, Sections::parse(&text, VARIETY_SECTIONS))?;
    let n = in_file(path, s.require("variables").and_then(single).and_then(natural))?;
    let params = match s.get("params") {
        Some(sec) => {
            let e = in_file(path, single(sec))?;
            Some(Arc::new(load_config(&resolve(path, e))?))
        }
        None => None,
    };
    let mut names = pair_names(n);
    if let Some(c) = &params {
        names.extend(c.locus().vars().iter().cloned());
    }
    let gens: Vec<Poly> = match s.get("ideal") {
        Some(sec) => in_file(path, sec.entries.iter().map(|e| poly(e, &names)).collect())?,
        None => Vec::new(),
    };
    in_file(
        path,
        match params {
            Some(c) => AVariety::with_params(n, gens, c),
            None => AVariety::new(n, gens),
        },
    )
}

pub const EQUATION_SECTIONS: &[&str] = &["variables", "equation"];

/// Parses a functional equation. `[variables]` lists the names of `X1`
/// and the torus variables; `[equation]` holds `key = value` lines for
/// `p`, `N` (rows separated by `;`), `gamma`, `beta`, `xi` and `u`.
/// Defaults: `gamma` all 1, `beta` and `xi` symbolic, `u` zero.
pub fn parse_equation(text: &str) -> Result<FunctionalEquation, Error> {
    let s = Sections::parse(text, EQUATION_SECTIONS)?;
    let mut names: Vec<String> = Vec::new();
    for e in &s.require("variables")?.entries {
        for name in split_items(&e.text) {
            if !is_identifier(name) || names.iter().any(|n| n == name) {
                return Err(parse_err(e.line, e.column, format!("bad or repeated variable name '{}'", name)));
            }
            names.push(name.to_string());
        }
    }
    if names.is_empty() {
        return Err(Error::Validation("no variables declared".into()));
    }
    let k = names.len() - 1;
    let mut p = None;
    let mut n_matrix = None;
    let mut gamma = None;
    let mut beta = None;
    let mut xi = None;
    let mut u = None;
    let sec = s.require("equation")?;
    for e in &sec.entries {
        let (key, value) = e
            .text
            .split_once('=')
            .ok_or_else(|| parse_err(e.line, e.column, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let vcol = e.column + e.text.find('=').unwrap_or(0) + 1;
        let seen = match key {
            "p" => p
                .replace(parse_poly_at(value, &names, e.line).map_err(|err| shift_column(err, vcol))?)
                .is_some(),
            "N" => {
                let rows = rational_rows(value, e.line, vcol)?;
                if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                    return Err(parse_err(e.line, vcol, format!("N must be a {}x{} matrix", k, k)));
                }
                n_matrix.replace(Matrix::from_rows(k, rows)).is_some()
            }
            "gamma" => {
                let v: Vec<Param> = split_items(value)
                    .map(|t| t.parse::<Param>().map_err(|err| parse_err(e.line, vcol, err.to_string())))
                    .collect::<Result<_, _>>()?;
                gamma.replace(v).is_some()
            }
            "beta" => beta.replace(value.parse::<Param>().map_err(|err| parse_err(e.line, vcol, err.to_string()))?).is_some(),
            "xi" => xi.replace(value.parse::<Param>().map_err(|err| parse_err(e.line, vcol, err.to_string()))?).is_some(),
            "u" => u.replace(rational_list(value, e.line, vcol)?).is_some(),
            other => return Err(parse_err(e.line, e.column, format!("unknown key '{}'", other))),
        };
        if seen {
            return Err(parse_err(e.line, e.column, format!("key '{}' given twice", key)));
        }
    }
    let p = p.ok_or_else(|| Error::Validation("equation needs `p = ...`".into()))?;
    let n_matrix: QMatrix = n_matrix.ok_or_else(|| Error::Validation("equation needs `N = ...`".into()))?;
    let gamma = gamma.unwrap_or_else(|| vec![Param::Value(Rational::from_integer(1.into())); k]);
    let u = u.unwrap_or_else(|| vec![Rational::from_integer(0.into()); k]);
    if gamma.len() != k || u.len() != k {
        return Err(Error::Validation(format!("gamma and u need {} entries", k)));
    }
    Ok(FunctionalEquation {
        p,
        n_matrix,
        gamma,
        beta: beta.unwrap_or_else(|| Param::Symbol("beta".into())),
        xi: xi.unwrap_or_else(|| Param::Symbol("xi".into())),
        u,
    })
}

pub fn load_equation(path: &Path) -> Result<FunctionalEquation, CliError> {
    let text = read(path)?;
    in_file(path, parse_equation(&text))
}

/// The group of a torus file.
#[derive(Debug, Clone)]
pub enum GroupSpec {
    /// Generators with coordinates in the real radicals.
    Radical(Vec<Vec<RadicalUnit>>),
    /// Exponentials of a hull in a configuration, one factor per torus
    /// coordinate.
    Config { config: Arc<GammaConfig>, hull: String },
}

/// A subvariety of `G_m^n`, optionally over configuration parameters,
/// with an optional finite-rank group.
#[derive(Debug, Clone)]
pub struct TorusInput {
    pub n: usize,
    /// Torus coordinates `y1..yn` first, then parameters.
    pub ideal: Ideal,
    pub params: Option<Arc<GammaConfig>>,
    pub group: Option<GroupSpec>,
}

pub const TORUS_SECTIONS: &[&str] = &["torus", "ideal", "params", "generators", "config", "hull"];

/// Loads a torus file: `[torus]` (dimension), `[ideal]` in `y1..yn`,
/// optionally `[params]` (configuration path, for coefficients), and a
/// group given either by `[generators]` (one rational or radical tuple
/// per line) or by `[config]` and `[hull]`.
pub fn load_torus(path: &Path) -> Result<TorusInput, CliError> {
    let text = read(path)?;
    let s = in_file(path, Sections::parse(&text, TORUS_SECTIONS))?;
    let n = in_file(path, s.require("torus").and_then(single).and_then(natural))?;
    let params = match s.get("params") {
        Some(sec) => Some(Arc::new(load_config(&resolve(path, in_file(path, single(sec))?))?)),
        None => None,
    };
    let mut names: Vec<String> = (1..=n).map(|i| format!("y{}", i)).collect();
    let mut inverted = vec![true; n];
    let mut gens: Vec<Poly> = Vec::new();
    if let Some(c) = &params {
        names.extend(c.locus().vars().iter().cloned());
        inverted.extend(c.locus().inverted().iter().copied());
    }
    let total = names.len();
    if let Some(sec) = s.get("ideal") {
        for e in &sec.entries {
            gens.push(in_file(path, poly(e, &names))?);
        }
    }
    if let Some(c) = &params {
        let map: Vec<usize> = (n..total).collect();
        gens.extend(c.locus().gens().iter().map(|g| g.embed(total, &map)));
    }
    let ideal = in_file(path, Ideal::new(names, gens, inverted))?;
    let group = match (s.get("generators"), s.get("config")) {
        (Some(_), Some(sec)) => {
            return Err(CliError::in_file(path, parse_err(sec.line, 1, "give either [generators] or [config], not both")));
        }
        (Some(sec), None) => {
            let field = RadicalField;
            let mut out = Vec::new();
            for e in &sec.entries {
                let items: Vec<&str> = e.text.split(',').map(str::trim).collect();
                if items.len() != n {
                    return Err(CliError::in_file(
                        path,
                        parse_err(e.line, e.column, format!("generator has {} coordinates, expected {}", items.len(), n)),
                    ));
                }
                let units = items
                    .iter()
                    .map(|t| field.parse(t).map_err(|err| parse_err(e.line, e.column, err.to_string())))
                    .collect::<Result<Vec<_>, _>>();
                out.push(in_file(path, units)?);
            }
            Some(GroupSpec::Radical(out))
        }
        (None, Some(sec)) => {
            let config = Arc::new(load_config(&resolve(path, in_file(path, single(sec))?))?);
            let hull = match s.get("hull") {
                Some(h) => in_file(path, single(h))?.text.clone(),
                None => "full".to_string(),
            };
            Some(GroupSpec::Config { config, hull })
        }
        (None, None) => None,
    };
    Ok(TorusInput { n, ideal, params, group })
}
