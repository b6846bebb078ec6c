//! Subcommands and their dispatch.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use exphull::case2::{verify_equation, BetaConstraint};
use exphull::mordell::{group_from_config, recheck_element_witness, FiniteRankGroup};
use exphull::scalar::parse_rational;
use exphull::{
    coset_normal_form, derive_beta_constraint, find_cosets_bounded, translation_generator, verify_decomposition, Error,
    Flag, GammaConfig, RadicalField, Rational, UnitGroupField,
};

use crate::error::CliError;
use crate::input::{self, GroupSpec, TorusInput};
use crate::report::{self, object};

#[derive(Debug, Parser)]
#[command(name = "exphull", version, about = "Predimension, strong hulls, rotundity and torus cosets for finitely presented partial exponential fields")]
pub struct Cli {
    /// Coefficient height bound for subspace, matrix and character searches.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
    /// Word-length bound for group enumeration.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub word: u32,
    /// Division depth: roots of order up to this are admitted in groups.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Cap on Groebner reduction steps per basis computation.
    #[arg(long, global = true, env = "EXPHULL_BUDGET")]
    pub budget: Option<u64>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Relative predimension of a subspace over another.
    Delta {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        sub: String,
        #[arg(long, default_value = "kernel")]
        over: String,
    },
    /// Bounded Schanuel property over the kernel.
    Schanuel {
        #[arg(long)]
        config: PathBuf,
    },
    /// Bounded strongness of a subspace in the configuration.
    Strong {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        sub: String,
    },
    /// Certifies a candidate as the strong hull of the base.
    Hull {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        candidate: String,
        #[arg(long, default_value = "base")]
        base: String,
    },
    /// Bounded rotundity of a variety.
    Rotund {
        #[arg(long)]
        variety: PathBuf,
    },
    /// Bounded freeness of a variety.
    Free {
        #[arg(long)]
        variety: PathBuf,
    },
    /// Membership of a point, given over the pairs of a configuration, in V-dagger.
    Dagger {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// One row per coordinate pair of the variety, separated by `;`:
        /// rational coefficients over the pairs or a linear form in `x_<pair>`.
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "base")]
        base: String,
    },
    /// Coset-of-subtorus normal form of a torus subvariety.
    CosetForm {
        #[arg(long)]
        torus: PathBuf,
    },
    /// Bounded discovery of group cosets inside a torus subvariety.
    MlFind {
        #[arg(long)]
        ml: PathBuf,
    },
    /// Verifies a coset decomposition against all bounded group elements.
    MlVerify {
        #[arg(long)]
        ml: PathBuf,
        /// JSON file: `{"cosets": [{"translate": [...], "lattice": [[...]]}]}`
        /// or an `ml-find` report.
        #[arg(long)]
        decomposition: PathBuf,
    },
    /// Support, permutation, iteration and the constraint on beta for a
    /// functional equation; translation generators for integer pairs.
    Case2 {
        #[arg(long, required_unless_present = "pairs")]
        eq: Option<PathBuf>,
        /// Integer translation pairs `m1,m2;l1,l2;...`.
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Validates a witnessing sequence over the base.
    Witness {
        #[arg(long)]
        config: PathBuf,
        /// Pair names separated by commas.
        #[arg(long, default_value = "")]
        sequence: String,
        /// One of `x` or `y` per step, separated by commas.
        #[arg(long, default_value = "")]
        flags: String,
        /// Assert that the base is strong.
        #[arg(long)]
        strong_base: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Delta { .. } => "delta",
            Command::Schanuel { .. } => "schanuel",
            Command::Strong { .. } => "strong",
            Command::Hull { .. } => "hull",
            Command::Rotund { .. } => "rotund",
            Command::Free { .. } => "free",
            Command::Dagger { .. } => "dagger",
            Command::CosetForm { .. } => "coset-form",
            Command::MlFind { .. } => "ml-find",
            Command::MlVerify { .. } => "ml-verify",
            Command::Case2 { .. } => "case2",
            Command::Witness { .. } => "witness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub height: u32,
    pub word: u32,
    pub depth: u32,
}

/// Report fields of a command and its exit status.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub fields: Map<String, Value>,
    pub exit: i32,
}

/// Runs a command and assembles the full report. Errors become a report
/// with an `error` field and exit status 3.
pub fn report(command: &Command, bounds: Bounds) -> (Value, i32) {
    let start = Instant::now();
    let result = execute(command, bounds);
    let (mut fields, exit) = match result {
        Ok(o) => (o.fields, o.exit),
        Err(e) => (object([("error", e.to_json())]), 3),
    };
    fields.insert("command".into(), json!(command.name()));
    fields.insert("inputs".into(), inputs(command));
    fields.insert(
        "bounds".into(),
        Value::Object(object([
            ("height", json!(bounds.height)),
            ("word", json!(bounds.word)),
            ("depth", json!(bounds.depth)),
        ])),
    );
    fields.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
    (Value::Object(fields), exit)
}

fn inputs(command: &Command) -> Value {
    let p = |p: &Path| json!(p.display().to_string());
    let m = match command {
        Command::Delta { config, sub, over } => object([("config", p(config)), ("sub", json!(sub)), ("over", json!(over))]),
        Command::Schanuel { config } => object([("config", p(config))]),
        Command::Strong { config, sub } => object([("config", p(config)), ("sub", json!(sub))]),
        Command::Hull { config, candidate, base } => {
            object([("config", p(config)), ("candidate", json!(candidate)), ("base", json!(base))])
        }
        Command::Rotund { variety } | Command::Free { variety } => object([("variety", p(variety))]),
        Command::Dagger { variety, config, point, base } => object([
            ("variety", p(variety)),
            ("config", p(config)),
            ("point", json!(point)),
            ("base", json!(base)),
        ]),
        Command::CosetForm { torus } => object([("torus", p(torus))]),
        Command::MlFind { ml } => object([("ml", p(ml))]),
        Command::MlVerify { ml, decomposition } => object([("ml", p(ml)), ("decomposition", p(decomposition))]),
        Command::Case2 { eq, pairs } => {
            let mut m = Map::new();
            if let Some(e) = eq {
                m.insert("eq".into(), p(e));
            }
            if let Some(s) = pairs {
                m.insert("pairs".into(), json!(s));
            }
            m
        }
        Command::Witness { config, sequence, flags, strong_base } => object([
            ("config", p(config)),
            ("sequence", json!(sequence)),
            ("flags", json!(flags)),
            ("strong_base", json!(strong_base)),
        ]),
    };
    Value::Object(m)
}

fn with_config(config: &GammaConfig, mut fields: Map<String, Value>) -> Map<String, Value> {
    fields.insert("irreducible".into(), json!(config.irreducible()));
    fields
}

fn recheck_flag(fields: &mut Map<String, Value>, ok: Option<bool>) {
    if let Some(ok) = ok {
        fields.insert("witness_rechecked".into(), json!(ok));
    }
}

pub fn execute(command: &Command, b: Bounds) -> Result<Outcome, CliError> {
    match command {
        Command::Delta { config, sub, over } => {
            let c = input::load_config(config)?;
            let s = c.subspace(sub)?;
            let o = c.subspace(over)?;
            let td = c.relative_td(&s, &o)?;
            let ldim = c.ldim(&s, &o);
            let fields = object([
                ("value", json!(td as i64 - ldim as i64)),
                ("td", json!(td)),
                ("ldim", json!(ldim)),
            ]);
            Ok(Outcome { fields: with_config(&c, fields), exit: 0 })
        }
        Command::Schanuel { config } => {
            let c = input::load_config(config)?;
            let v = c.schanuel_check(b.height)?;
            let mut fields = report::verdict(&v, |w| report::gamma_witness(&c, w));
            let kernel = c.kernel();
            recheck_flag(&mut fields, v.witness().map(|w| c.recheck_strong_witness(&kernel, w)).transpose()?);
            Ok(Outcome { exit: report::exit_code(&v), fields: with_config(&c, fields) })
        }
        Command::Strong { config, sub } => {
            let c = input::load_config(config)?;
            let s = c.subspace(sub)?;
            let v = c.is_strong_bounded(&s, b.height)?;
            let mut fields = report::verdict(&v, |w| report::gamma_witness(&c, w));
            recheck_flag(&mut fields, v.witness().map(|w| c.recheck_strong_witness(&s, w)).transpose()?);
            Ok(Outcome { exit: report::exit_code(&v), fields: with_config(&c, fields) })
        }
        Command::Hull { config, candidate, base } => {
            let c = input::load_config(config)?;
            let cand = c.subspace(candidate)?;
            let base = c.subspace(base)?;
            let v = c.hull_certify(&base, &cand, b.height)?;
            let mut fields = report::verdict(&v, |w| report::gamma_witness(&c, w));
            recheck_flag(
                &mut fields,
                v.witness().map(|w| c.recheck_hull_witness(&base, &cand, b.height, w)).transpose()?,
            );
            Ok(Outcome { exit: report::exit_code(&v), fields: with_config(&c, fields) })
        }
        Command::Rotund { variety } => {
            let v = input::load_variety(variety)?;
            let verdict = v.is_rotund_bounded(b.height)?;
            let mut fields = report::verdict(&verdict, |w| report::rows_witness(w));
            recheck_flag(&mut fields, verdict.witness().map(|w| v.recheck_rotund_witness(w)).transpose()?);
            if let Some(p) = v.params() {
                fields = with_config(p, fields);
            }
            Ok(Outcome { exit: report::exit_code(&verdict), fields })
        }
        Command::Free { variety } => {
            let v = input::load_variety(variety)?;
            let verdict = v.is_free_bounded(b.height)?;
            let mut fields = report::verdict(&verdict, report::free_witness);
            recheck_flag(&mut fields, verdict.witness().map(|w| v.recheck_free_witness(w)).transpose()?);
            if let Some(p) = v.params() {
                fields = with_config(p, fields);
            }
            Ok(Outcome { exit: report::exit_code(&verdict), fields })
        }
        Command::Dagger { variety, config, point, base } => {
            let v = input::load_variety(variety)?;
            let c = input::load_config(config)?;
            let rows = point_rows(&c, point)?;
            let base = c.subspace(base)?;
            let member = v.dagger_member(&c, &rows, &base)?;
            let fields = object([("value", json!(member))]);
            Ok(Outcome { fields: with_config(&c, fields), exit: if member { 0 } else { 1 } })
        }
        Command::CosetForm { torus } => {
            let t = input::load_torus(torus)?;
            let form = coset_normal_form(&t.ideal, t.n, b.height)?;
            let names = t.ideal.vars()[t.n..].to_vec();
            let (fields, exit) = match form {
                Some(f) => {
                    let constants: Vec<String> = f.constants.iter().map(|p| p.display(&names)).collect();
                    let value = object([
                        ("lattice", json!(f.lattice.rows())),
                        ("constants", json!(constants)),
                        ("change", f.change.as_ref().map_or(Value::Null, |u| json!(u.rows()))),
                    ]);
                    (object([("verdict", json!("Found")), ("value", Value::Object(value))]), 0)
                }
                None => (
                    object([
                        ("verdict", json!("UnknownUpTo")),
                        ("bound", json!(b.height)),
                        ("value", Value::Null),
                    ]),
                    2,
                ),
            };
            let fields = match &t.params {
                Some(p) => with_config(p, fields),
                None => fields,
            };
            Ok(Outcome { fields, exit })
        }
        Command::MlFind { ml } => {
            let t = input::load_torus(ml)?;
            match build_group(&t, b.depth)? {
                AnyGroup::Radical(g) => ml_find(&t, &g, b),
                AnyGroup::Config(g, c) => ml_find(&t, &g, b).map(|o| Outcome { fields: with_config(&c, o.fields), ..o }),
            }
        }
        Command::MlVerify { ml, decomposition } => {
            let t = input::load_torus(ml)?;
            let text = input::read(decomposition)?;
            let json: Value = serde_json::from_str(&text).map_err(|e| {
                CliError::in_file(decomposition, Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
            })?;
            match build_group(&t, b.depth)? {
                AnyGroup::Radical(g) => ml_verify(&t, &g, &json, decomposition, b),
                AnyGroup::Config(g, c) => {
                    ml_verify(&t, &g, &json, decomposition, b).map(|o| Outcome { fields: with_config(&c, o.fields), ..o })
                }
            }
        }
        Command::Case2 { eq, pairs } => case2(eq.as_deref(), pairs.as_deref()),
        Command::Witness { config, sequence, flags, strong_base } => {
            let c = input::load_config(config)?;
            let seq: Vec<String> = split_list(sequence);
            let flags: Vec<Flag> = split_list(flags).iter().map(|f| f.parse()).collect::<Result<_, _>>()?;
            let out = c.witnessing_check(&seq, &flags, *strong_base)?;
            let mut fields = report::verdict(&out.verdict, |w| report::gamma_witness(&c, w));
            recheck_flag(
                &mut fields,
                out.verdict.witness().map(|w| c.recheck_step_witness(&seq, &flags, w)).transpose()?,
            );
            let steps: Vec<Value> = out
                .steps
                .iter()
                .map(|s| {
                    Value::Object(object([
                        ("pair", json!(s.pair)),
                        ("flag", json!(s.flag.to_string())),
                        ("x_algebraic", json!(s.x_algebraic)),
                        ("y_algebraic", json!(s.y_algebraic)),
                    ]))
                })
                .collect();
            fields.insert("steps".into(), Value::Array(steps));
            if let Some(basis) = &out.hull_basis {
                fields.insert("hull_basis".into(), json!(basis));
            }
            Ok(Outcome { exit: report::exit_code(&out.verdict), fields: with_config(&c, fields) })
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

/// Parses `r;r;...` where each row is either rationals over the pairs or
/// a linear form in the `x_<pair>` coordinates.
pub fn point_rows(config: &GammaConfig, text: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    let n = config.npairs();
    text.split(';')
        .map(|r| {
            let r = r.trim();
            let items: Vec<&str> = r.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let numeric: Option<Vec<Rational>> = items.iter().map(|s| parse_rational(s)).collect();
            match numeric {
                Some(row) if row.len() == n => Ok(row),
                Some(row) => Err(CliError::Core {
                    file: None,
                    error: Error::AmbientMismatch(format!("point row has {} entries, expected {}", row.len(), n)),
                }),
                None => {
                    let s = config.subspace(&format!("span({})", r))?;
                    match s.rows() {
                        [row] => Ok(row.clone()),
                        _ => Err(CliError::Usage(format!("'{}' is not a single linear form", r))),
                    }
                }
            }
        })
        .collect()
}

enum AnyGroup {
    Radical(FiniteRankGroup<RadicalField>),
    Config(FiniteRankGroup<exphull::ConfigUnits>, Arc<GammaConfig>),
}

/// Symbolic groups have no roots; their depth is clamped to 1.
fn build_group(t: &TorusInput, depth: u32) -> Result<AnyGroup, CliError> {
    match &t.group {
        None => Err(CliError::Usage("the torus file declares no group ([generators] or [config])".into())),
        Some(GroupSpec::Radical(gens)) => Ok(AnyGroup::Radical(FiniteRankGroup::new(RadicalField, t.n, gens.clone(), depth)?)),
        Some(GroupSpec::Config { config, hull }) => {
            let h = config.subspace(hull)?;
            let g0 = group_from_config(config.clone(), &h, 1)?;
            Ok(AnyGroup::Config(g0.power(t.n)?, config.clone()))
        }
    }
}

fn effective_bounds<F: UnitGroupField>(fields: &mut Map<String, Value>, g: &FiniteRankGroup<F>) {
    fields.insert("group_depth".into(), json!(g.depth()));
    let gens: Vec<Value> = g.generators().iter().map(|p| report::point(g, p)).collect();
    fields.insert("generators".into(), Value::Array(gens));
}

fn ml_find<F: UnitGroupField>(t: &TorusInput, g: &FiniteRankGroup<F>, b: Bounds) -> Result<Outcome, CliError> {
    let dec = find_cosets_bounded(&t.ideal, g, b.word, b.height)?;
    let mut fields = object([("decomposition", report::decomposition(g, &dec))]);
    effective_bounds(&mut fields, g);
    Ok(Outcome { fields, exit: 0 })
}

fn ml_verify<F: UnitGroupField>(
    t: &TorusInput,
    g: &FiniteRankGroup<F>,
    json: &Value,
    path: &Path,
    b: Bounds,
) -> Result<Outcome, CliError> {
    let dec = report::decomposition_from_json(g, json).map_err(|e| CliError::in_file(path, e))?;
    let v = verify_decomposition(&t.ideal, g, &dec, b.word)?;
    let mut fields = report::verdict(&v, |w| report::element(g, w));
    recheck_flag(&mut fields, v.witness().map(|w| recheck_element_witness(&t.ideal, g, &dec, w)).transpose()?);
    effective_bounds(&mut fields, g);
    Ok(Outcome { exit: report::exit_code(&v), fields })
}

fn case2(eq: Option<&Path>, pairs: Option<&str>) -> Result<Outcome, CliError> {
    let mut fields = Map::new();
    let mut exit = 0;
    if let Some(path) = eq {
        let e = input::load_equation(path)?;
        let r = derive_beta_constraint(&e.p, &e.n_matrix)?;
        let s = &r.support;
        fields.insert("support".into(), json!(s.s));
        fields.insert("h".into(), json!(r.h));
        fields.insert("period".into(), json!(r.period));
        let names = ["X1"];
        let coefficients: Vec<Value> = s
            .coefficients
            .iter()
            .map(|(k, q)| Value::Object(object([("s", json!(k)), ("q", json!(q.display(&names)))])))
            .collect();
        fields.insert("coefficients".into(), Value::Array(coefficients));
        match &r.solution {
            Some(sol) => {
                let mu: Vec<Value> = sol.mu.iter().map(|(a, b)| json!([a, b])).collect();
                fields.insert("mu".into(), Value::Array(mu));
                fields.insert("mu_cycles".into(), json!(sol.cycles()));
                fields.insert("mu_order".into(), json!(sol.order()));
                fields.insert("u".into(), report::rationals(&sol.u));
            }
            None => {
                fields.insert("mu".into(), Value::Null);
                fields.insert("u".into(), Value::Null);
            }
        }
        fields.insert("v".into(), r.v.as_ref().map_or(Value::Null, |v| report::rationals(v)));
        fields.insert("chosen".into(), json!(r.chosen));
        match &r.beta {
            BetaConstraint::Values(vals) => {
                fields.insert("beta".into(), report::rationals(vals));
            }
            BetaConstraint::NoConstraint => {
                fields.insert("beta".into(), Value::Null);
                exit = 1;
            }
        }
        fields.insert("value".into(), json!(r.beta.to_string()));
        let check = verify_equation(&e)?;
        fields.insert(
            "equation".into(),
            Value::Object(object([
                ("holds", json!(check.holds)),
                ("scale", json!(check.scale)),
                ("xi", json!(check.xi)),
                ("mismatch", check.mismatch.as_ref().map_or(Value::Null, |m| report::rationals(m))),
            ])),
        );
    }
    if let Some(text) = pairs {
        let ps = input::integer_pairs(text)?;
        let g = translation_generator(&ps)?;
        fields.insert(
            "translation".into(),
            Value::Object(object([
                ("generator", json!([g.d.0, g.d.1])),
                ("sign", json!(g.sign)),
                ("exponents", json!(g.exponents)),
                ("coefficients", json!(g.coefficients)),
            ])),
        );
    }
    Ok(Outcome { fields, exit })
}
