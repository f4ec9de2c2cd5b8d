use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use bilinear_lab::experiments::{
    growth_witness, khintchine_comparison, records_to_csv, run_experiment, ExperimentConfig, Family,
};
use bilinear_lab::indices::{parse_rational, Exponent, IndexTuple};
use bilinear_lab::operator::{apply_bilinear_with, tau_symbol, Strategy};
use bilinear_lab::partitions::{LpFamily, UniformFamily};
use bilinear_lab::spaces::{bmo_norm, lebesgue_norm, local_hardy_norm, sobolev_norm, wiener_amalgam_norm};
use bilinear_lab::suites::{
    lemma22_trends, random_band_limited, run_suite, series_q_bound, series_reconstruction, tau_identity_errors,
    tau_sharpness, SuiteName, SuiteOptions, SuiteReport,
};
use bilinear_lab::symbols::Symbol;
use bilinear_lab::torus::{GridFunction, TorusGrid};

#[derive(Parser)]
#[command(name = "bilinear-lab", version, about = "Bilinear pseudo-differential operators on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Points per axis (power of two).
    #[arg(long = "size", short = 'N', default_value_t = 256)]
    size: usize,
    /// Band limit.
    #[arg(long, default_value_t = 32)]
    xi: usize,
}

impl GridArgs {
    fn grid(&self) -> anyhow::Result<TorusGrid> {
        Ok(TorusGrid::new(self.n, self.size, self.xi)?)
    }
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Spectrum as JSON `[[k1, k2, re, im], ...]` (k2 ignored when n = 1).
    #[arg(long)]
    spectrum: Option<String>,
    /// Random band-limited input with this seed when no spectrum is given.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Spectral radius of the random input.
    #[arg(long, default_value_t = 8)]
    radius: i64,
}

fn parse_input(grid: &TorusGrid, spectrum: Option<&str>, seed: u64, radius: i64) -> anyhow::Result<GridFunction> {
    match spectrum {
        Some(text) => {
            let rows: Vec<[f64; 4]> = serde_json::from_str(text).context("spectrum must be [[k1,k2,re,im],...]")?;
            let entries: Vec<_> = rows
                .iter()
                .map(|r| ([r[0] as i64, if grid.dim() == 1 { 0 } else { r[1] as i64 }], Complex64::new(r[2], r[3])))
                .collect();
            Ok(GridFunction::synthesize(*grid, &entries)?)
        }
        None => Ok(random_band_limited(grid, radius, &mut ChaCha8Rng::seed_from_u64(seed))?),
    }
}

fn nonzero_spectrum(f: &GridFunction) -> Vec<[f64; 4]> {
    let g = f.grid();
    let floor = f.max_coefficient() * 1e-14;
    f.spectrum()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > floor)
        .map(|(i, c)| {
            let k = g.freq(i);
            [k[0] as f64, k[1] as f64, c.re, c.im]
        })
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Apply T_σ (or T_τ when smoothness indices are given) to two inputs.
    Apply {
        #[command(flatten)]
        grid: GridArgs,
        /// constant | bracket | of-sum
        #[arg(long, default_value = "bracket")]
        symbol: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        m: f64,
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        radius: i64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s2: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
        /// Force the plain double sum.
        #[arg(long)]
        direct: bool,
    },
    /// L^p, L^p_s, h^p_s, bmo_s and W^{p,2}_s norms of one function.
    Norms {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
    },
    /// Derived quantities, sufficiency, necessity and classification of an index tuple.
    Indices {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s1: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s2: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Growth experiment of a sharpness family; writes CSV records and a JSON summary.
    Sharpness {
        /// JSON config; the family default when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "product")]
        family: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Print the default config of the family and exit.
        #[arg(long)]
        print_config: bool,
        /// Compare slopes at bound + 1/2, bound and bound - 1/2.
        #[arg(long)]
        witness: bool,
    },
    /// Discrete convolution constants in the bounded regime and the control.
    Lemma22 {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Fourier-series reconstruction errors and Q bounds of the star1 test symbol.
    Decompose {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2i64, 4, 8, 16])]
        kmax: Vec<i64>,
    },
    /// The τ identity over random draws and the class-constant sharpness check.
    TauCheck {
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a property suite (or `all`).
    Suite {
        name: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_suite(r: &SuiteReport) {
    for c in &r.checks {
        println!(
            "{} {:<10} {:<40} {:.3e} {} {:.3e}",
            if c.pass { "PASS" } else { "FAIL" },
            r.suite,
            c.name,
            c.value,
            c.relation,
            c.limit
        );
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Apply { grid, symbol, m, f1, f2, seed, radius, s1, s2, s, direct } => {
            let g = grid.grid()?;
            let a = parse_input(&g, f1.as_deref(), seed, radius)?;
            let b = parse_input(&g, f2.as_deref(), seed.wrapping_add(1), radius)?;
            let sigma = match symbol.as_str() {
                "constant" => Symbol::constant(g.dim(), Complex64::new(1.0, 0.0)),
                "bracket" => Symbol::bracket_power(g.dim(), m),
                "of-sum" => Symbol::of_sum(
                    g.dim(),
                    std::sync::Arc::new(move |xi: &[f64]| Complex64::new(bilinear_lab::torus::bracket(xi).powf(m), 0.0)),
                ),
                other => bail!("unknown symbol {other:?}"),
            };
            let sigma = tau_symbol(&sigma, s1, s2, s)?;
            let strategy = if direct { Strategy::Direct } else { Strategy::Auto };
            let report = apply_bilinear_with(&sigma, &a, &b, strategy)?;
            print_json(&json!({
                "symbol": sigma.name(),
                "strategy": report.strategy,
                "pairs": report.pairs,
                "support_radius": report.support_radius,
                "spectrum": nonzero_spectrum(&report.output),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Norms { grid, input, p, s } => {
            let g = grid.grid()?;
            let f = parse_input(&g, input.spectrum.as_deref(), input.seed, input.radius)?;
            let p: Exponent = p.parse()?;
            let two = Exponent::from_int(2)?;
            let hardy = if p.is_infinite() { None } else { Some(local_hardy_norm(&f, p, s, &LpFamily::standard())?.value) };
            print_json(&json!({
                "lebesgue": lebesgue_norm(&f, p).value,
                "sobolev": sobolev_norm(&f, p, s).value,
                "local_hardy": hardy,
                "bmo": bmo_norm(&f, s).value,
                "wiener_amalgam_q2": wiener_amalgam_norm(&f, p, two, s, &UniformFamily::new(1.0, true)?).value,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Indices { n, p1, p2, p, s1, s2, s, m } => {
            let t = IndexTuple::new(
                n,
                p1.parse()?,
                p2.parse()?,
                p.parse()?,
                parse_rational(&s1)?,
                parse_rational(&s2)?,
                parse_rational(&s)?,
                parse_rational(&m)?,
            )?;
            print_json(&t.summary())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sharpness { config, family, csv, summary, print_config, witness } => {
            let cfg = match config {
                Some(path) => ExperimentConfig::from_json(&fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?)?,
                None => ExperimentConfig::default_for(family.parse::<Family>()?),
            };
            if print_config {
                println!("{}", cfg.to_json());
                return Ok(ExitCode::SUCCESS);
            }
            if witness {
                let w = growth_witness(&cfg)?;
                print_json(&w)?;
                return Ok(verdict(w.gap >= cfg.tolerances.discrimination));
            }
            let out = run_experiment(&cfg)?;
            let text = records_to_csv(&out.records, cfg.grid.size)?;
            match csv {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            let mut doc = serde_json::to_value(out.summary())?;
            if cfg.family.kind.randomized() {
                doc["khintchine"] = serde_json::to_value(khintchine_comparison(&cfg, &out.records)?)?;
            }
            let body = serde_json::to_string_pretty(&doc)?;
            match summary {
                Some(path) => fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?,
                None => eprintln!("{body}"),
            }
            Ok(verdict(out.fit.verdict))
        }
        Command::Lemma22 { n, seed } => {
            let rows = lemma22_trends(n, seed)?;
            print_json(&rows)?;
            let report = run_suite(SuiteName::Lemma22, &SuiteOptions { dim: n, seed })?;
            print_suite(&report);
            Ok(verdict(report.passed))
        }
        Command::Decompose { kmax } => {
            let errs = series_reconstruction(&kmax)?;
            let q = series_q_bound()?;
            print_json(&json!({ "reconstruction": errs, "q_bound": q }))?;
            let monotone = errs.windows(2).all(|w| w[1].1 <= w[0].1);
            Ok(verdict(monotone && q.bounded))
        }
        Command::TauCheck { draws, seed } => {
            let errs = tau_identity_errors(draws, seed)?;
            let (matched, lowered) = tau_sharpness(seed)?;
            let worst = errs.iter().map(|e| e.1).fold(0.0, f64::max);
            print_json(&json!({
                "identity": errs,
                "worst": worst,
                "matched_spread": matched.spread,
                "lowered_growth": lowered.growth,
            }))?;
            Ok(verdict(worst <= 1e-8 && matched.spread <= 4.0 && lowered.growth >= 2.0))
        }
        Command::Suite { name, n, seed } => {
            let names: Vec<SuiteName> = if name == "all" { SuiteName::ALL.to_vec() } else { vec![name.parse()?] };
            let mut ok = true;
            for s in names {
                let report = run_suite(s, &SuiteOptions { dim: n, seed })?;
                print_suite(&report);
                ok &= report.passed;
            }
            Ok(verdict(ok))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
