//! Command-line front end: compute any implemented quantity over parameter
//! sweeps, emit CSV or JSON, run the verification suites, or estimate by
//! seeded Monte Carlo.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error (including
//! refused oracle sizes).

mod output;
mod verify;

use std::str::FromStr;

use clap::{Parser, Subcommand};

use cycleprod::cycles::{
    p_all_same_length, p_cycle_type_k2, p_identity, p_involution_k2, p_is_cycle, p_num_cycles,
    pgf_num_cycles, ProductSpec,
};
use cycleprod::exact::{to_f64, Rational};
use cycleprod::hooks::CycleType;
use cycleprod::montecarlo::{estimate, Confidence, McConfig};
use cycleprod::oracle;
use cycleprod::subsets::{
    p_a1, p_a2, p_blocking, p_occupancy, p_separation, s_nab, BlockingSpec, OccupancySet,
    OccupancySpec, SeparationSpec,
};

use output::{emit, Format, Row};

/// Inclusive parameter range: `7` or `3..10`.
#[derive(Clone, Debug)]
struct RangeArg {
    lo: u32,
    hi: u32,
}

impl RangeArg {
    fn values(&self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_one = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad number {v:?} in range argument"))
        };
        if let Some((lo, hi)) = s.split_once("..") {
            let (lo, hi) = (parse_one(lo)?, parse_one(hi)?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(RangeArg { lo, hi })
        } else {
            let v = parse_one(s)?;
            Ok(RangeArg { lo: v, hi: v })
        }
    }
}

fn parse_sets(s: &str) -> Result<Vec<u32>, String> {
    let sizes: Result<Vec<u32>, _> = s
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad set size {tok:?}"))
        })
        .collect();
    let sizes = sizes?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err("set sizes must be positive integers, e.g. --sets 2,1,1".into());
    }
    Ok(sizes)
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))
}

#[derive(Parser)]
#[command(
    name = "cycleprod",
    version,
    about = "Exact cycle statistics of products of uniform random maximal cycles"
)]
struct Cli {
    /// Output format (csv or json)
    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    /// Append a decimal column next to each exact value
    #[arg(long, global = true)]
    float: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// P(number of cycles = nu) for the product of k maximal cycles
    CyclesDist {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
        /// Cycle count (defaults to all of 1..=N)
        #[arg(long)]
        nu: Option<RangeArg>,
    },
    /// P(product = identity)
    Identity {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// P(product is a single N-cycle)
    IsCycle {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// E[x^(number of cycles)] at a rational point x
    Pgf {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
        /// Rational evaluation point, e.g. 2 or -5/3
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// P(product of two maximal cycles has a given cycle type)
    CycleType {
        #[arg(long = "N")]
        n: u32,
        /// Canonical type text, e.g. "1^2 3^1"
        #[arg(long = "type")]
        ctype: String,
    },
    /// P(all cycles of the k=2 product have the same length r)
    SameLength {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        r: u32,
    },
    /// P(product of two maximal cycles is an involution)
    Involution {
        #[arg(long = "N")]
        n: RangeArg,
    },
    /// P(per-cycle counts of [ell] all lie in the set A)
    Occupancy {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        ell: RangeArg,
        #[arg(long)]
        k: RangeArg,
        /// Count set: "positive", "0,ell" or "{a1,a2,...}"
        #[arg(long = "A")]
        set: String,
    },
    /// P(every cycle contains an element of [ell])
    A1 {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        ell: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// P(all of [ell] lies in one cycle)
    A2 {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        ell: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// The binomial sum S_{n,a,b} (three evaluation routes, cross-checked)
    Snab {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// P(no cycle meets two of the disjoint sets of the given sizes)
    Separation {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
        /// Comma-separated set sizes, e.g. 2,1,1
        #[arg(long)]
        sets: String,
    },
    /// P(no two elements of [ell] are cyclically adjacent and each has an
    /// outside neighbor)
    Blocking {
        #[arg(long = "N")]
        n: RangeArg,
        #[arg(long)]
        ell: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// Cross-check formulas, characters, oracle and Monte Carlo
    Verify {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value = "2")]
        k: u32,
        /// characters | oracle | identities | mc | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Seeded Monte Carlo estimate of an event probability
    Mc {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        k: u32,
        /// is-cycle | identity | derangement | involution | blocks | separates
        #[arg(long)]
        event: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 0.95 or 0.99
        #[arg(long, default_value = "0.99")]
        confidence: String,
        /// Marked prefix size for the "blocks" event
        #[arg(long, default_value_t = 2)]
        ell: u32,
        /// Set sizes for the "separates" event
        #[arg(long, default_value = "1,1")]
        sets: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

/// Push the exact value (and optionally its float rendering) onto a row.
fn value_cells(row: Row, name: &'static str, value: &Rational, float: bool) -> Row {
    let row = row.text(name, value.to_string());
    if float {
        row.float("float", to_f64(value))
    } else {
        row
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let float = cli.float;
    let mut rows: Vec<Row> = Vec::new();
    let mut exit = 0;

    match cli.command {
        Command::CyclesDist { n, k, nu } => {
            let mut any = false;
            for n in n.values().filter(|&v| v >= 1) {
                for k in k.values().filter(|&k| k >= 1) {
                    let nus: Vec<u32> = match &nu {
                        Some(range) => range.values().filter(|&v| (1..=n).contains(&v)).collect(),
                        None => (1..=n).collect(),
                    };
                    for v in nus {
                        any = true;
                        let p = p_num_cycles(ProductSpec::new(n, k), v);
                        let row =
                            Row::new().int("N", n as i64).int("k", k as i64).int("nu", v as i64);
                        rows.push(value_cells(row, "p", &p, float));
                    }
                }
            }
            require(any, "no valid (N, k, nu) tuple in the requested ranges")?;
        }
        Command::Identity { n, k } => {
            for n in n.values() {
                for k in k.values() {
                    require(n >= 1 && k >= 1, "N and k must be positive")?;
                    let p = p_identity(ProductSpec::new(n, k));
                    let row = Row::new().int("N", n as i64).int("k", k as i64);
                    rows.push(value_cells(row, "p", &p, float));
                }
            }
        }
        Command::IsCycle { n, k } => {
            for n in n.values() {
                for k in k.values() {
                    require(n >= 1 && k >= 1, "N and k must be positive")?;
                    let p = p_is_cycle(ProductSpec::new(n, k));
                    let row = Row::new().int("N", n as i64).int("k", k as i64);
                    rows.push(value_cells(row, "p", &p, float));
                }
            }
        }
        Command::Pgf { n, k, x } => {
            let x = parse_rational(&x)?;
            for n in n.values() {
                for k in k.values() {
                    require(n >= 1 && k >= 1, "N and k must be positive")?;
                    let p = pgf_num_cycles(ProductSpec::new(n, k), &x);
                    let row = Row::new()
                        .int("N", n as i64)
                        .int("k", k as i64)
                        .text("x", x.to_string());
                    rows.push(value_cells(row, "p", &p, float));
                }
            }
        }
        Command::CycleType { n, ctype } => {
            let parsed: CycleType = ctype.parse()?;
            require(
                parsed.n() == n,
                &format!("type {parsed} describes N={}, not N={n}", parsed.n()),
            )?;
            let p = p_cycle_type_k2(&parsed);
            let row = Row::new().int("N", n as i64).text("type", parsed.to_string());
            rows.push(value_cells(row, "p", &p, float));
        }
        Command::SameLength { n, r } => {
            require(r >= 2, "r must be at least 2")?;
            let valid: Vec<u32> = n.values().filter(|&v| v >= 1 && v % r == 0).collect();
            require(
                !valid.is_empty(),
                &format!("no N in the requested range is a positive multiple of r={r}"),
            )?;
            for n in valid {
                let p = p_all_same_length(n, r);
                let row = Row::new().int("N", n as i64).int("r", r as i64);
                rows.push(value_cells(row, "p", &p, float));
            }
        }
        Command::Involution { n } => {
            for n in n.values() {
                require(n >= 1, "N must be positive")?;
                let p = p_involution_k2(n);
                rows.push(value_cells(Row::new().int("N", n as i64), "p", &p, float));
            }
        }
        Command::Occupancy { n, ell, k, set } => {
            let set: OccupancySet = set.parse()?;
            let mut any = false;
            for n in n.values().filter(|&v| v >= 1) {
                for ell in ell.values().filter(|&e| e <= n) {
                    for k in k.values().filter(|&k| k >= 1) {
                        any = true;
                        let spec = OccupancySpec::new(n, ell, set.clone());
                        let p = p_occupancy(&spec, k);
                        let row = Row::new()
                            .int("N", n as i64)
                            .int("ell", ell as i64)
                            .int("k", k as i64)
                            .text("A", set.to_string());
                        rows.push(value_cells(row, "p", &p, float));
                    }
                }
            }
            require(any, "no valid (N, ell, k) tuple in the requested ranges")?;
        }
        Command::A1 { n, ell, k } => {
            let mut any = false;
            for n in n.values().filter(|&v| v >= 1) {
                for ell in ell.values().filter(|&e| (1..=n).contains(&e)) {
                    for k in k.values().filter(|&k| k >= 1) {
                        any = true;
                        let p = p_a1(n, ell, k);
                        let row = Row::new()
                            .int("N", n as i64)
                            .int("ell", ell as i64)
                            .int("k", k as i64);
                        rows.push(value_cells(row, "p", &p, float));
                    }
                }
            }
            require(any, "no valid (N, ell, k) tuple in the requested ranges")?;
        }
        Command::A2 { n, ell, k } => {
            let mut any = false;
            for n in n.values().filter(|&v| v >= 1) {
                for ell in ell.values().filter(|&e| e <= n) {
                    for k in k.values().filter(|&k| k >= 1) {
                        any = true;
                        let p = p_a2(n, ell, k);
                        let row = Row::new()
                            .int("N", n as i64)
                            .int("ell", ell as i64)
                            .int("k", k as i64);
                        rows.push(value_cells(row, "p", &p, float));
                    }
                }
            }
            require(any, "no valid (N, ell, k) tuple in the requested ranges")?;
        }
        Command::Snab { n, a, b } => {
            require(a + b <= n, "snab requires a + b <= n")?;
            let v = s_nab(n, a, b);
            let row = Row::new().int("n", n as i64).int("a", a as i64).int("b", b as i64);
            rows.push(value_cells(row, "value", &v, float));
        }
        Command::Separation { n, k, sets } => {
            let sizes = parse_sets(&sets)?;
            let total: u32 = sizes.iter().sum();
            let mut any = false;
            for n in n.values().filter(|&v| v >= total) {
                for k in k.values().filter(|&k| k >= 1) {
                    any = true;
                    let spec = SeparationSpec::new(n, sizes.clone());
                    let p = p_separation(&spec, k);
                    let row = Row::new()
                        .int("N", n as i64)
                        .int("k", k as i64)
                        .text("sets", sets.clone());
                    rows.push(value_cells(row, "p", &p, float));
                }
            }
            require(any, "the sets do not fit inside [N] for any requested N")?;
        }
        Command::Blocking { n, ell, k } => {
            let mut any = false;
            for n in n.values().filter(|&v| v >= 1) {
                for ell in ell.values().filter(|&e| e <= n) {
                    for k in k.values().filter(|&k| k >= 1) {
                        any = true;
                        let p = p_blocking(&BlockingSpec::new(n, ell), k);
                        let row = Row::new()
                            .int("N", n as i64)
                            .int("ell", ell as i64)
                            .int("k", k as i64);
                        rows.push(value_cells(row, "p", &p, float));
                    }
                }
            }
            require(any, "no valid (N, ell, k) tuple in the requested ranges")?;
        }
        Command::Verify { n, k, suite } => {
            require(n >= 1 && k >= 1, "N and k must be positive")?;
            let caps = verify::Caps::from_env()?;
            let checks = verify::run(&suite, n, k, caps)?;
            for c in &checks {
                rows.push(
                    Row::new()
                        .text("suite", c.suite)
                        .text("check", c.name)
                        .text("result", if c.pass { "pass" } else { "fail" })
                        .text("detail", c.detail.clone()),
                );
            }
            if checks.iter().any(|c| !c.pass) {
                exit = 1;
            }
        }
        Command::Mc {
            n,
            k,
            event,
            trials,
            seed,
            confidence,
            ell,
            sets,
        } => {
            require(n >= 1 && k >= 1 && trials >= 1, "N, k and trials must be positive")?;
            let confidence: Confidence = confidence.parse()?;
            let sizes = parse_sets(&sets)?;
            let pred: Box<dyn Fn(&oracle::Permutation) -> bool + Sync> = match event.as_str() {
                "is-cycle" => Box::new(|p| p.is_max_cycle()),
                "identity" => Box::new(|p| p.is_identity()),
                "derangement" => Box::new(|p| p.is_derangement()),
                "involution" => Box::new(|p| p.is_involution()),
                "blocks" => {
                    require(ell <= n, "blocks event needs ell <= N")?;
                    Box::new(move |p| oracle::blocks(p, ell))
                }
                "separates" => {
                    require(
                        sizes.iter().sum::<u32>() <= n,
                        "separates event needs the sets to fit inside [N]",
                    )?;
                    let sizes = sizes.clone();
                    Box::new(move |p| oracle::separates(p, &sizes))
                }
                other => {
                    return Err(format!(
                        "unknown event {other:?}: expected is-cycle, identity, derangement, \
                         involution, blocks or separates"
                    ))
                }
            };
            let config = McConfig::new(n, k, trials, seed, confidence);
            let est = estimate(&config, pred);
            let mut row = Row::new()
                .int("N", n as i64)
                .int("k", k as i64)
                .text("event", event)
                .int("trials", trials as i64)
                .int("seed", seed as i64)
                .text("confidence", confidence.level())
                .int("successes", est.successes as i64)
                .text("estimate", est.point.to_string());
            if float {
                row = row.float("float", to_f64(&est.point));
            }
            rows.push(row.float("low", est.low).float("high", est.high));
        }
    }

    let stdout = std::io::stdout();
    emit(&mut stdout.lock(), cli.format, &rows).map_err(|e| e.to_string())?;
    Ok(exit)
}

fn require(condition: bool, message: &str) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message.to_string())
    }
}
