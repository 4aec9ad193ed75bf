use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use tracemon::markov::{self, ChainSpec};
use tracemon::measures::{self, BernoulliMeasure, Enforcement, Tolerance, Valuation};
use tracemon::mobius;
use tracemon::{Clique, CliqueSet, IndependencePair, Trace};

use crate::format::{sig, write_sample};
use crate::parallel::speedup_threaded;
use crate::roots;
use crate::specfile::{load_spec, LoadError};
use crate::valuation::{write_valuation, ValuationArg, ValuationError};

#[derive(Debug, Parser)]
#[command(name = "tracemon", version, about = "Trace monoids, Möbius valuations and Bernoulli measures")]
pub struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Measured {
    /// Monoid description file.
    pub spec: PathBuf,
    /// `uniform` or comma-separated `letter=value` pairs.
    #[arg(long)]
    pub valuation: ValuationArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Alphabet size, cliques, irreducibility, Möbius polynomial and p0.
    Info { spec: PathBuf },
    /// Cliques in canonical order.
    Cliques { spec: PathBuf },
    /// Möbius polynomial with all its roots.
    Mobius { spec: PathBuf },
    /// Number of traces of each length.
    Count {
        spec: PathBuf,
        #[arg(long)]
        max_length: usize,
    },
    /// Möbius transform of a valuation; exits with 1 if it is not Möbius.
    Check(Measured),
    /// Solves h(ε) = 0 for the characteristic number of one letter.
    Complete {
        spec: PathBuf,
        /// `letter=value` for every letter except the free one.
        #[arg(long)]
        fixed: ValuationArg,
        #[arg(long)]
        free: String,
    },
    /// Initial law, transition matrix and stationary law of the clique chain.
    Chain(Measured),
    /// Samples the first cliques of a random infinite trace.
    Sample {
        #[command(flatten)]
        measured: Measured,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Speedup and average parallelism.
    #[command(group(ArgGroup::new("mode").required(true).args(["exact", "mc"])))]
    Speedup {
        #[command(flatten)]
        measured: Measured,
        #[arg(long)]
        exact: bool,
        #[arg(long, requires_all = ["steps", "seed"])]
        mc: bool,
        #[arg(long, requires = "mc", value_parser = clap::value_parser!(u64).range(1..))]
        steps: Option<u64>,
        #[arg(long, requires = "mc")]
        seed: Option<u64>,
        /// Independent chains run in parallel, each with a derived seed.
        #[arg(long, default_value = "1", requires = "mc")]
        threads: NonZeroUsize,
    },
    /// Probability that a random infinite trace starts with a given trace.
    #[command(group(ArgGroup::new("mode").required(true).args(["exact", "mc"])))]
    Cylinder {
        #[command(flatten)]
        measured: Measured,
        /// A word; letters may be separated by spaces.
        #[arg(long, allow_hyphen_values = true)]
        trace: String,
        #[arg(long)]
        exact: bool,
        #[arg(long, requires_all = ["runs", "seed"], conflicts_with = "waive")]
        mc: bool,
        #[arg(long, requires = "mc", value_parser = clap::value_parser!(u64).range(1..))]
        runs: Option<u64>,
        #[arg(long, requires = "mc")]
        seed: Option<u64>,
        /// Evaluate f(u) even if the valuation is not Möbius.
        #[arg(long)]
        waive: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("invalid valuation: {0}")]
    Valuation(#[from] ValuationError),
    #[error("invalid {what}: {source}")]
    Input {
        what: &'static str,
        source: tracemon::Error,
    },
    #[error(transparent)]
    Domain(#[from] tracemon::Error),
}

impl CliError {
    /// 1 for mathematical refusals, 2 for malformed input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) | CliError::Valuation(ValuationError::Invalid(tracemon::Error::Reducible)) => 1,
            _ => 2,
        }
    }
}

/// Output of one command. A report with a rejection is printed and then
/// reported as a domain error.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub monoid: Value,
    pub result: Value,
    pub text: String,
    pub rejection: Option<tracemon::Error>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({ "command": self.command, "monoid": self.monoid, "result": self.result })
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            format!("{}\n", self.to_json())
        } else {
            self.text.clone()
        }
    }
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0) + 2;
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}{v}\n"))
        .collect()
}

fn clique_json(pair: &IndependencePair, c: &Clique) -> Value {
    c.iter().map(|l| Value::from(pair.name(l))).collect()
}

fn monoid_json(pair: &IndependencePair) -> Value {
    let independent: Vec<Value> = pair
        .independent_pairs()
        .into_iter()
        .map(|(a, b)| json!([pair.name(a), pair.name(b)]))
        .collect();
    json!({
        "letters": pair.names(),
        "independent": independent,
        "irreducible": pair.is_irreducible(),
    })
}

fn valuation_json(pair: &IndependencePair, v: &Valuation) -> Value {
    let map: Map<String, Value> = pair
        .letters()
        .map(|l| (pair.name(l).to_string(), Value::from(v.characteristic(l))))
        .collect();
    Value::Object(map)
}

fn floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig(x)).collect::<Vec<_>>().join("  ")
}

struct Context {
    pair: IndependencePair,
    cliques: CliqueSet,
}

impl Context {
    fn load(spec: &Path) -> Result<Self, CliError> {
        let pair = load_spec(spec)?;
        let cliques = CliqueSet::enumerate(&pair)?;
        Ok(Self { pair, cliques })
    }

    fn report(&self, command: &'static str, result: Value, text: String) -> Report {
        Report {
            command,
            monoid: monoid_json(&self.pair),
            result,
            text,
            rejection: None,
        }
    }

    fn show(&self, c: &Clique) -> String {
        self.pair.display_clique(c).to_string()
    }

    fn measure(&self, arg: &ValuationArg) -> Result<BernoulliMeasure, CliError> {
        let v = arg.resolve(&self.pair, &self.cliques)?;
        Ok(BernoulliMeasure::new(&self.cliques, v, Tolerance::default())?)
    }

    fn chain(&self, arg: &ValuationArg) -> Result<ChainSpec, CliError> {
        Ok(ChainSpec::build(&self.pair, &self.cliques, &self.measure(arg)?)?)
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Info { spec } => info(&Context::load(spec)?),
        Command::Cliques { spec } => Ok(cliques(&Context::load(spec)?)),
        Command::Mobius { spec } => mobius_roots(&Context::load(spec)?),
        Command::Count { spec, max_length } => Ok(count(&Context::load(spec)?, *max_length)),
        Command::Check(m) => check(&Context::load(&m.spec)?, &m.valuation),
        Command::Complete { spec, fixed, free } => complete(&Context::load(spec)?, fixed, free),
        Command::Chain(m) => chain(&Context::load(&m.spec)?, &m.valuation),
        Command::Sample { measured, steps, seed } => {
            let ctx = Context::load(&measured.spec)?;
            sample(&ctx, &measured.valuation, *steps, *seed)
        }
        Command::Speedup {
            measured,
            mc,
            steps,
            seed,
            threads,
            ..
        } => {
            let ctx = Context::load(&measured.spec)?;
            let mc = mc.then(|| (steps.unwrap_or(1) as usize, seed.unwrap_or(0), *threads));
            speedup(&ctx, &measured.valuation, mc)
        }
        Command::Cylinder {
            measured,
            trace,
            mc,
            runs,
            seed,
            waive,
            ..
        } => {
            let ctx = Context::load(&measured.spec)?;
            let u = ctx.pair.trace(trace).map_err(|source| CliError::Input { what: "trace", source })?;
            let mc = mc.then(|| (runs.unwrap_or(1) as usize, seed.unwrap_or(0)));
            cylinder(&ctx, &measured.valuation, &u, mc, *waive)
        }
    }
}

fn info(ctx: &Context) -> Result<Report, CliError> {
    let poly = mobius::mobius_polynomial(&ctx.cliques);
    let p0 = mobius::smallest_root(&poly)?;
    let pair = &ctx.pair;
    let result = json!({
        "letters": pair.len(),
        "cliques": ctx.cliques.len(),
        "max_clique_size": ctx.cliques.max_size(),
        "irreducible": pair.is_irreducible(),
        "mobius": poly.coefficients(),
        "p0": p0,
    });
    let independent: Vec<String> = pair
        .independent_pairs()
        .iter()
        .map(|&(a, b)| format!("{}-{}", pair.name(a), pair.name(b)))
        .collect();
    let text = table(&[
        ("letters", format!("{} ({})", pair.len(), pair.names().join(" "))),
        ("independent", if independent.is_empty() { "none".into() } else { independent.join(" ") }),
        ("cliques", format!("{} (max size {})", ctx.cliques.len(), ctx.cliques.max_size())),
        ("irreducible", pair.is_irreducible().to_string()),
        ("mobius", poly.to_string()),
        ("p0", sig(p0)),
    ]);
    Ok(ctx.report("info", result, text))
}

fn cliques(ctx: &Context) -> Report {
    let list: Vec<Value> = ctx.cliques.iter().map(|c| clique_json(&ctx.pair, c)).collect();
    let text = ctx
        .cliques
        .iter()
        .map(|c| format!("{}\t{}\n", c.len(), ctx.show(c)))
        .collect();
    let result = json!({ "cliques": list, "size_counts": ctx.cliques.size_counts() });
    ctx.report("cliques", result, text)
}

fn mobius_roots(ctx: &Context) -> Result<Report, CliError> {
    let poly = mobius::mobius_polynomial(&ctx.cliques);
    let p0 = mobius::smallest_root(&poly)?;
    let cert = roots::certify(&poly, p0);
    let shown: Vec<String> = cert
        .roots
        .iter()
        .map(|r| {
            if r.im.abs() <= roots::MODULUS_TOLERANCE {
                sig(r.re)
            } else {
                format!("{}{}{}i", sig(r.re), if r.im < 0.0 { "-" } else { "+" }, sig(r.im.abs()))
            }
        })
        .collect();
    let result = json!({
        "coefficients": poly.coefficients(),
        "p0": p0,
        "roots": cert.roots.iter().map(|r| json!([r.re, r.im])).collect::<Vec<_>>(),
        "smallest_modulus_certified": cert.certified,
    });
    let text = table(&[
        ("mobius", poly.to_string()),
        ("p0", sig(p0)),
        ("roots", shown.join(", ")),
        ("certified", cert.certified.to_string()),
    ]);
    Ok(ctx.report("mobius", result, text))
}

fn count(ctx: &Context, max_length: usize) -> Report {
    let counts = mobius::count_traces(&mobius::mobius_polynomial(&ctx.cliques), max_length);
    let as_text: Vec<String> = counts.as_slice().iter().map(ToString::to_string).collect();
    let text = as_text.iter().enumerate().map(|(k, c)| format!("{k}\t{c}\n")).collect();
    // counts outgrow 64 bits quickly, so they travel as decimal strings
    let result = json!({ "max_length": max_length, "counts": as_text });
    ctx.report("count", result, text)
}

fn transform_rows(ctx: &Context, report: &measures::ValuationReport) -> (Vec<Value>, Vec<(String, String)>) {
    ctx.cliques
        .iter()
        .zip(report.h.values())
        .map(|(c, &h)| {
            (
                json!({ "clique": clique_json(&ctx.pair, c), "h": h }),
                (format!("h({})", ctx.show(c)), sig(h)),
            )
        })
        .unzip()
}

fn check(ctx: &Context, arg: &ValuationArg) -> Result<Report, CliError> {
    let v = arg.resolve(&ctx.pair, &ctx.cliques)?;
    let report = measures::classify_valuation(&ctx.cliques, &v, Tolerance::default());
    let (h, rows) = transform_rows(ctx, &report);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|(c, x)| json!({ "clique": clique_json(&ctx.pair, c), "h": x }))
        .collect();
    let result = json!({
        "valuation": valuation_json(&ctx.pair, &v),
        "h0": report.h0,
        "transform": h,
        "is_mobius": report.is_mobius,
        "violations": violations,
    });
    let mut text_rows: Vec<(&str, String)> = rows.iter().map(|(k, x)| (k.as_str(), x.clone())).collect();
    text_rows.push(("mobius", report.is_mobius.to_string()));
    let mut out = ctx.report("check", result, table(&text_rows));
    if !report.is_mobius {
        out.rejection = Some(tracemon::Error::NotMobius { h0: report.h0 });
    }
    Ok(out)
}

fn complete(ctx: &Context, fixed: &ValuationArg, free: &str) -> Result<Report, CliError> {
    let assignments = fixed.assignments(&ctx.pair)?;
    let free_letter = ctx.pair.letter(free).ok_or_else(|| CliError::Input {
        what: "free letter",
        source: tracemon::Error::UnknownLetter(free.to_string()),
    })?;
    let v = measures::complete_valuation(&ctx.pair, &ctx.cliques, &assignments, free_letter).map_err(|e| match e {
        tracemon::Error::FreeLetterFixed(_) | tracemon::Error::MissingCharacteristic(_) => CliError::Input {
            what: "completion request",
            source: e,
        },
        other => CliError::Domain(other),
    })?;
    let report = measures::classify_valuation(&ctx.cliques, &v, Tolerance::default());
    let result = json!({
        "valuation": valuation_json(&ctx.pair, &v),
        "free": free,
        "value": v.characteristic(free_letter),
        "h0": report.h0,
        "is_mobius": report.is_mobius,
    });
    let text = table(&[
        (free, sig(v.characteristic(free_letter))),
        ("valuation", write_valuation(&ctx.pair, &v)),
        ("h(ε)", sig(report.h0)),
        ("mobius", report.is_mobius.to_string()),
    ]);
    Ok(ctx.report("complete", result, text))
}

fn chain(ctx: &Context, arg: &ValuationArg) -> Result<Report, CliError> {
    let chain = ctx.chain(arg)?;
    let pi = chain.stationary()?;
    let s = chain.speedup()?;
    let states: Vec<Value> = chain.states().iter().map(|c| clique_json(&ctx.pair, c)).collect();
    let matrix: Vec<&[f64]> = (0..chain.len()).map(|i| chain.row(i)).collect();
    let result = json!({
        "states": states,
        "initial": chain.initial(),
        "transition": matrix,
        "normalization": chain.normalization(),
        "stationary": pi,
        "rho": s.rho,
        "gamma": s.gamma,
    });
    let names: Vec<String> = chain.states().iter().map(|c| ctx.show(c)).collect();
    let mut text = table(&[
        ("states", names.join("  ")),
        ("initial", floats(chain.initial())),
        ("g", floats(chain.normalization())),
        ("stationary", floats(&pi)),
        ("rho", sig(s.rho)),
        ("gamma", sig(s.gamma)),
    ]);
    text.push_str("transition\n");
    for (name, row) in names.iter().zip(&matrix) {
        text.push_str(&format!("  {name}\t{}\n", floats(row)));
    }
    Ok(ctx.report("chain", result, text))
}

fn sample(ctx: &Context, arg: &ValuationArg, steps: usize, seed: u64) -> Result<Report, CliError> {
    let chain = ctx.chain(arg)?;
    let run = markov::sample_prefix(&chain, steps, seed);
    let cliques: Vec<Value> = run.cliques.iter().map(|c| clique_json(&ctx.pair, c)).collect();
    let result = json!({
        "seed": run.seed,
        "steps": run.steps,
        "generator": run.generator,
        "cliques": cliques,
        "trace": ctx.pair.display_trace(&run.trace).to_string(),
        "length": run.length(),
        "height": run.height(),
        "ratio": run.ratio(),
    });
    Ok(ctx.report("sample", result, write_sample(&ctx.pair, &run)))
}

fn speedup(ctx: &Context, arg: &ValuationArg, mc: Option<(usize, u64, NonZeroUsize)>) -> Result<Report, CliError> {
    let chain = ctx.chain(arg)?;
    let (result, rho) = match mc {
        None => {
            let s = chain.speedup()?;
            (json!({ "method": "exact", "rho": s.rho, "gamma": s.gamma }), s.rho)
        }
        Some((steps, seed, threads)) => {
            let rho = if threads.get() == 1 {
                markov::speedup_montecarlo(&chain, steps, seed)
            } else {
                speedup_threaded(&chain, steps, seed, threads)
            };
            let result = json!({
                "method": "montecarlo",
                "steps": steps,
                "seed": seed,
                "threads": threads.get(),
                "rho": rho,
                "gamma": 1.0 / rho,
            });
            (result, rho)
        }
    };
    let text = table(&[("rho", sig(rho)), ("gamma", sig(1.0 / rho))]);
    Ok(ctx.report("speedup", result, text))
}

fn cylinder(
    ctx: &Context,
    arg: &ValuationArg,
    u: &Trace,
    mc: Option<(usize, u64)>,
    waive: bool,
) -> Result<Report, CliError> {
    let shown = ctx.pair.display_trace(u).to_string();
    let (result, probability) = match mc {
        None => {
            let v = arg.resolve(&ctx.pair, &ctx.cliques)?;
            let enforcement = if waive {
                Enforcement::Waive
            } else {
                Enforcement::Require(Tolerance::default())
            };
            let p = measures::cylinder_probability(&ctx.cliques, &v, u, enforcement)?;
            (json!({ "method": "exact", "trace": shown, "probability": p, "waived": waive }), p)
        }
        Some((runs, seed)) => {
            let chain = ctx.chain(arg)?;
            let p = markov::empirical_cylinder(&chain, &ctx.pair, u, runs, seed);
            let result = json!({
                "method": "montecarlo",
                "trace": shown,
                "runs": runs,
                "seed": seed,
                "probability": p,
            });
            (result, p)
        }
    };
    let text = table(&[("trace", shown.clone()), ("probability", sig(probability))]);
    Ok(ctx.report("cylinder", result, text))
}
