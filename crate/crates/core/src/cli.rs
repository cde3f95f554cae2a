//! The `dephasing` command line: figure data and validation runs as CSV.
//!
//! Every subcommand takes `--seed`, `--panels` and `--out`; without `--out`
//! the table goes to standard output. Files are written to a temporary
//! sibling and renamed into place once the whole table is ready. Sweeps are
//! evaluated in parallel on a pool sized by `--threads` (default from
//! `DEPHASING_THREADS`, else one per core); rows always come out in sweep
//! order.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::circular::{l1_distance, CircularDensity, Family};
use crate::divergences::{chernoff, fisher_information, relative_entropy, stein_second_order};
use crate::error::{invalid, Error, Result};
use crate::montecarlo::{bayes_test, estimation_risk, neyman_pearson, Cost, TestSpec};
use crate::numerics::QuadratureGrid;
use crate::schemes::SchemeChannel;
use crate::seed::RngSeed;

pub const THREADS_ENV: &str = "DEPHASING_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dephasing", version, about = "Discrimination and estimation limits for bosonic dephasing channels")]
pub struct Cli {
    /// Worker threads for sweeps and Monte Carlo trials.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Quadrature panels on [-π, π] (16 nodes each).
    #[arg(long, default_value_t = crate::numerics::DEFAULT_PANELS)]
    pub panels: usize,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Chernoff,
    Relent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Wn,
    Vm,
    Wc,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Wn => Family::WrappedNormal,
            FamilyArg::Vm => Family::VonMises,
            FamilyArg::Wc => Family::WrappedCauchy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Quadratic,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Photon,
    Coherent,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Chernoff divergence or relative entropy against a fixed first
    /// parameter, for all three families.
    Divergence {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Quantity::Chernoff)]
        quantity: Quantity,
        /// Parameter of the first density.
        #[arg(long, default_value_t = 1.0)]
        param1: f64,
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 5.0)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Append the quadrature error estimate of each cell.
        #[arg(long)]
        with_errors: bool,
    },
    /// Fisher information in the spread parameter on a log-spaced sweep.
    Fisher {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.05)]
        from: f64,
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Relative entropy of the wrapped-normal channels against what the
    /// photon-number and coherent-state schemes retain of it.
    SchemeComparison {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        gamma1: f64,
        #[arg(long, default_value_t = 20)]
        d: usize,
        /// Mean photon numbers |α|² of the coherent probes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![9.5, 25.0])]
        energies: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 5.0)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Monte Carlo Bayes and Neyman–Pearson tests against the predicted
    /// exponents.
    Hypotest {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FamilyArg::Wn)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        param1: f64,
        #[arg(long, default_value_t = 3.0)]
        param2: f64,
        #[arg(long, default_value_t = 0.5)]
        prior: f64,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5, 10, 20, 40])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 20_000)]
        trials: usize,
    },
    /// Monte Carlo risk of the maximum-likelihood estimator against the
    /// Cramér–Rao bound.
    Estimate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = FamilyArg::Wn)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![100, 300, 1000])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = CostArg::Quadratic)]
        cost: CostArg,
    },
    /// L1 distance between a wrapped normal and its scheme-induced density
    /// as the probe grows.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SchemeArg::Photon)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Levels `d` (photon) or amplitudes `α` (coherent); defaults to
        /// 8,16,32,64,128 or 1,2,4,8,12.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<f64>>,
    },
    /// Relative entropy retained by the photon-number scheme behind a
    /// pure-loss channel, one column per transmissivity.
    Lossy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        gamma1: f64,
        #[arg(long, default_value_t = 20)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.7, 0.9, 1.0])]
        etas: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        from: f64,
        #[arg(long, default_value_t = 5.0)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Divergence { common, .. }
            | Command::Fisher { common, .. }
            | Command::SchemeComparison { common, .. }
            | Command::Hypotest { common, .. }
            | Command::Estimate { common, .. }
            | Command::Converge { common, .. }
            | Command::Lossy { common, .. } => common,
        }
    }
}

/// Parses, runs, and writes the table.
pub fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return invalid("--threads must be at least 1");
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
    let csv = pool.install(|| render(&cli.command))?;
    match &cli.command.common().out {
        Some(path) => write_atomically(path, &csv),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(csv.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Writes to `.<name>.tmp` next to `path`, then renames.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let name =
        path.file_name().ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let written = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if written.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(written?)
}

fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    check_sweep(from, to, points)?;
    if points == 1 {
        return Ok(vec![from]);
    }
    Ok((0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect())
}

fn logspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    Ok(linspace(from.ln(), to.ln(), points)?.into_iter().map(f64::exp).collect())
}

fn check_sweep(from: f64, to: f64, points: usize) -> Result<()> {
    if points == 0 || !(from.is_finite() && to.is_finite()) || from > to {
        return invalid(format!("bad sweep {from}..{to} with {points} points"));
    }
    Ok(())
}

/// `9.5` → `9p5`, for column names.
fn number_tag(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}

fn push_row(out: &mut String, cells: &[f64]) {
    let row: Vec<String> = cells.iter().map(|c| format!("{c}")).collect();
    let _ = writeln!(out, "{}", row.join(","));
}

fn table(header: &str, rows: Vec<Vec<f64>>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        push_row(&mut out, &r);
    }
    out
}

/// Renders the command's CSV table, header row first.
pub fn render(command: &Command) -> Result<String> {
    let panels = command.common().panels;
    let seed = RngSeed(command.common().seed);
    let grid = QuadratureGrid::new(panels)?;
    match command {
        Command::Divergence { quantity, param1, from, to, points, with_errors, .. } => {
            let name = match quantity {
                Quantity::Chernoff => "chernoff",
                Quantity::Relent => "relent",
            };
            let mut header = format!("param2,{name}_wn,{name}_vm,{name}_wc");
            if *with_errors {
                header.push_str(",quad_error_wn,quad_error_vm,quad_error_wc");
            }
            let firsts: Vec<CircularDensity> = Family::ALL.iter().map(|f| f.density(*param1)).collect::<Result<_>>()?;
            let rows = linspace(*from, *to, *points)?
                .par_iter()
                .map(|&x| {
                    let mut values = vec![x];
                    let mut errors = Vec::new();
                    for (f, p) in Family::ALL.iter().zip(&firsts) {
                        let q = f.density(x)?;
                        let r = match quantity {
                            Quantity::Chernoff => chernoff(p, &q, &grid)?,
                            Quantity::Relent => relative_entropy(p, &q, &grid)?,
                        };
                        values.push(r.value);
                        errors.push(r.quad_error);
                    }
                    if *with_errors {
                        values.extend(errors);
                    }
                    Ok(values)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(table(&header, rows))
        }
        Command::Fisher { from, to, points, .. } => {
            let rows = logspace(*from, *to, *points)?
                .par_iter()
                .map(|&t| {
                    let mut row = vec![t];
                    for f in Family::ALL {
                        row.push(fisher_information(f, t, &grid)?);
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(table("param,fisher_wn,fisher_vm,fisher_wc", rows))
        }
        Command::SchemeComparison { gamma1, d, energies, from, to, points, .. } => {
            let mut schemes = vec![SchemeChannel::fejer(*d)?];
            let mut header = format!("gamma2,D_limit,D_photon_d{d}");
            for &e in energies {
                schemes.push(SchemeChannel::rician_with_energy(e)?);
                let _ = write!(header, ",D_coh_a{}", number_tag(e));
            }
            let rows = induced_relent_sweep(*gamma1, &schemes, *from, *to, *points, panels)?;
            Ok(table(&header, rows))
        }
        Command::Lossy { gamma1, d, etas, from, to, points, .. } => {
            let mut header = String::from("gamma2,D_limit");
            let schemes = etas
                .iter()
                .map(|&eta| {
                    let _ = write!(header, ",D_eta{}", number_tag(eta));
                    // the lossless column goes through the plain scheme so it
                    // matches scheme-comparison exactly
                    if eta == 1.0 {
                        SchemeChannel::fejer(*d)
                    } else {
                        SchemeChannel::lossy_fejer(*d, eta)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = induced_relent_sweep(*gamma1, &schemes, *from, *to, *points, panels)?;
            Ok(table(&header, rows))
        }
        Command::Hypotest { family, param1, param2, prior, level, ns, trials, .. } => {
            let family = Family::from(*family);
            let (p, q) = (family.density(*param1)?, family.density(*param2)?);
            let c = chernoff(&p, &q, &grid)?.value;
            let d = relative_entropy(&p, &q, &grid)?.value;
            let mut rows = Vec::new();
            for &n in ns {
                let b = bayes_test(&p, &q, &TestSpec::bayes(*prior, n, *trials, seed)?)?;
                let np = neyman_pearson(&p, &q, &TestSpec::neyman_pearson(*level, n, *trials, seed)?)?;
                let nf = n as f64;
                let avg = b.average_error(*prior);
                rows.push(vec![
                    nf,
                    b.alpha_hat,
                    b.beta_hat,
                    avg,
                    b.average_ci(*prior),
                    -avg.ln() / nf,
                    c,
                    np.alpha_hat,
                    np.beta_hat,
                    np.beta_ci,
                    -np.beta_hat.ln() / nf,
                    stein_second_order(&p, &q, n, *level, &grid)?,
                    d,
                ]);
            }
            Ok(table(
                "n,alpha_hat,beta_hat,avg_error,avg_ci,bayes_exponent,chernoff,np_alpha,np_beta,np_beta_ci,np_exponent,strassen,relent",
                rows,
            ))
        }
        Command::Estimate { family, theta, ns, trials, cost, .. } => {
            let family = Family::from(*family);
            let cost = match cost {
                CostArg::Quadratic => Cost::Quadratic,
                CostArg::Absolute => Cost::Absolute,
            };
            let mut rows = Vec::new();
            for &n in ns {
                let r = estimation_risk(family, *theta, n, *trials, seed, cost, &grid)?;
                let bound = r.cramer_rao.unwrap_or(f64::NAN);
                rows.push(vec![n as f64, r.risk, r.std_error, bound, r.risk / bound]);
            }
            Ok(table("n,risk,std_error,cramer_rao,ratio", rows))
        }
        Command::Converge { scheme, gamma, sizes, .. } => {
            let base = CircularDensity::wrapped_normal(*gamma)?;
            let (header, sizes) = match scheme {
                SchemeArg::Photon => ("d,l1", sizes.clone().unwrap_or(vec![8.0, 16.0, 32.0, 64.0, 128.0])),
                SchemeArg::Coherent => ("alpha,l1", sizes.clone().unwrap_or(vec![1.0, 2.0, 4.0, 8.0, 12.0])),
            };
            let rows = sizes
                .par_iter()
                .map(|&s| {
                    let ch = match scheme {
                        SchemeArg::Photon => {
                            if s.fract() != 0.0 || s < 2.0 {
                                return invalid(format!("level count must be an integer ≥ 2, got {s}"));
                            }
                            SchemeChannel::fejer(s as usize)?
                        }
                        SchemeArg::Coherent => SchemeChannel::rician(s)?,
                    };
                    let induced = ch.induce(&base, panels)?;
                    let g = CircularDensity::grid_for(&[&base, &induced], panels)?;
                    Ok(vec![s, l1_distance(&base, &induced, &g)?])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(table(header, rows))
        }
    }
}

/// Rows `γ₂, D(p₁‖p₂), D(S(p₁)‖S(p₂)) for each scheme S` over a linear sweep.
fn induced_relent_sweep(
    gamma1: f64,
    schemes: &[SchemeChannel],
    from: f64,
    to: f64,
    points: usize,
    panels: usize,
) -> Result<Vec<Vec<f64>>> {
    let p = CircularDensity::wrapped_normal(gamma1)?;
    let induced_p: Vec<CircularDensity> = schemes.iter().map(|s| s.induce(&p, panels)).collect::<Result<_>>()?;
    linspace(from, to, points)?
        .par_iter()
        .map(|&g2| {
            let q = CircularDensity::wrapped_normal(g2)?;
            let grid = QuadratureGrid::new(panels)?;
            let mut row = vec![g2, relative_entropy(&p, &q, &grid)?.value];
            for (s, ip) in schemes.iter().zip(&induced_p) {
                let iq = s.induce(&q, panels)?;
                let g = CircularDensity::grid_for(&[ip, &iq], panels)?;
                row.push(relative_entropy(ip, &iq, &g)?.value);
            }
            Ok(row)
        })
        .collect()
}
