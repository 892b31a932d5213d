//! `pcf` — exact P-adic continued fractions over Q and quadratic fields.
//!
//! Subcommands: `expand` an element under a floor-function type, `certify`
//! finiteness criteria for a (field, prime) pair, `sweep` certificates over
//! a prime range, and `selftest` the seeded property suites.
//!
//! Exit codes: 0 success (an Unknown verdict is a valid answer), 1 on
//! usage or parse errors, 2 when the self test finds a property violation.

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pcf_core::cf::{convergents, expand, ExpandOptions};
use pcf_core::certify::{
    certify_browkin, certify_imag_quad, certify_ruban, certify_special, certify_sqrt2,
    Certificate, SweepRow, Verdict,
};
use pcf_core::floor::{build_repset, FloorSpec, RepSetKind};
use pcf_core::json::{ExpansionJson, FloorSpecJson};
use pcf_core::primes::{find_generator, split_type, GeneratorStrategy, PrimeIdeal};
use pcf_core::quad::QuadElem;
use pcf_core::selftest::{run_all, SelftestConfig};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "pcf",
    version,
    about = "Exact P-adic continued fractions: expansion, certification, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TypeArg {
    Browkin,
    Ruban,
    Special,
    Sqrt2,
    Euclidean,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepArg {
    Browkin,
    Ruban,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand an element into its continued fraction under a type
    Expand {
        /// Radicand D of Q(sqrt(D)); omit for types over Q
        #[arg(long = "D", allow_negative_numbers = true)]
        d: Option<i64>,
        /// Odd prime below the prime ideal
        #[arg(long)]
        p: u64,
        #[arg(long = "type", value_enum, default_value = "browkin")]
        variant: TypeArg,
        /// Generator element (defaults to a canonical choice)
        #[arg(long)]
        pi: Option<String>,
        /// Representative set for special types
        #[arg(long, value_enum, default_value = "browkin")]
        repset: RepArg,
        /// Element to expand, canonical grammar (e.g. "1/3", "1 + 4*sqrt(2)")
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Also print the convergent table
        #[arg(long)]
        convergents: bool,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Certify CFF/CFP criteria for a field and prime
    Certify {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: Option<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long = "type", value_enum)]
        variant: Option<TypeArg>,
        /// Generator for special-type certification
        #[arg(long)]
        pi: Option<String>,
        #[arg(long, value_enum, default_value = "browkin")]
        repset: RepArg,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Certify every odd prime up to a bound, one row per prime
    Sweep {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: Option<i64>,
        #[arg(long)]
        p_max: u64,
        /// Type family over Q (browkin/ruban) when no D is given
        #[arg(long = "type", value_enum)]
        variant: Option<TypeArg>,
        #[arg(long, value_enum, default_value = "csv")]
        output: OutputArg,
    },
    /// Run the seeded property suites
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Corrupt one structural check to prove violations are detected
        #[arg(long)]
        inject_fault: bool,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputArg,
    },
}

fn precision_bits() -> u32 {
    std::env::var("CFCLI_PRECISION_BITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(256)
}

fn parse_element(s: &str) -> Result<QuadElem> {
    s.parse::<QuadElem>().map_err(|e| anyhow!("cannot parse element '{s}': {e}"))
}

fn prime_with_generator(
    p: u64,
    d: i64,
    pi: &Option<String>,
    default_strategy: GeneratorStrategy,
) -> Result<PrimeIdeal> {
    let mut prime = split_type(p, d)?;
    let strategy = match pi {
        Some(s) => GeneratorStrategy::FixedPi(parse_element(s)?),
        None => default_strategy,
    };
    prime.generator = Some(find_generator(&prime, &strategy)?);
    Ok(prime)
}

fn build_floor_spec(
    variant: TypeArg,
    d: Option<i64>,
    p: u64,
    pi: &Option<String>,
    repset: RepArg,
) -> Result<FloorSpec> {
    let kind = match repset {
        RepArg::Browkin => RepSetKind::BrowkinLike,
        RepArg::Ruban => RepSetKind::RubanLike,
    };
    match variant {
        TypeArg::Browkin => {
            if d.is_some() {
                bail!("--type browkin is defined over Q; drop --D");
            }
            Ok(FloorSpec::browkin(p)?)
        }
        TypeArg::Ruban => {
            if d.is_some() {
                bail!("--type ruban is defined over Q; drop --D");
            }
            Ok(FloorSpec::ruban(p)?)
        }
        TypeArg::Special => {
            let d = d.ok_or_else(|| anyhow!("--type special needs --D"))?;
            let prime =
                prime_with_generator(p, d, pi, GeneratorStrategy::MinimizeSumAbs)?;
            let rs = build_repset(kind, &prime, None)?;
            Ok(FloorSpec::special(prime, rs)?)
        }
        TypeArg::Sqrt2 => {
            let d = d.unwrap_or(2);
            if d != 2 {
                bail!("--type sqrt2 needs D = 2");
            }
            let prime = match pi {
                Some(_) => prime_with_generator(p, 2, pi, GeneratorStrategy::MinimizeSumAbs)?,
                None => {
                    // default to the generator the certification procedure picks
                    let cert = certify_sqrt2(p, precision_bits())?;
                    let mut prime = split_type(p, 2)?;
                    prime.generator = Some(cert.generator);
                    prime
                }
            };
            Ok(FloorSpec::sqrt2(prime)?)
        }
        TypeArg::Euclidean => {
            let d = d.ok_or_else(|| anyhow!("--type euclidean needs --D"))?;
            let prime =
                prime_with_generator(p, d, pi, GeneratorStrategy::MinimizeSumAbs)?;
            Ok(FloorSpec::euclidean(prime, None)?)
        }
    }
}

#[derive(serde::Serialize)]
struct ConvergentRowJson {
    n: usize,
    a_n: String,
    b_n: String,
    q_n: String,
    v_n: String,
}

#[derive(serde::Serialize)]
struct ExpandOutput {
    spec: FloorSpecJson,
    element: String,
    expansion: ExpansionJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergents: Option<Vec<ConvergentRowJson>>,
}

fn cmd_expand(
    d: Option<i64>,
    p: u64,
    variant: TypeArg,
    pi: &Option<String>,
    repset: RepArg,
    element: &str,
    max_steps: usize,
    want_convergents: bool,
    output: OutputArg,
) -> Result<i32> {
    if max_steps == 0 {
        bail!("--max-steps must be at least 1");
    }
    let spec = build_floor_spec(variant, d, p, pi, repset)?;
    let alpha = parse_element(element)?;
    let exp = expand(&alpha, &spec, ExpandOptions { max_steps, record_complete: false })?;
    let rows = if want_convergents && !exp.is_empty() {
        Some(
            convergents(&exp.partial_quotients, &alpha)?
                .iter()
                .map(|r| ConvergentRowJson {
                    n: r.n,
                    a_n: r.a_n.to_string(),
                    b_n: r.b_n.to_string(),
                    q_n: r.q_n.to_string(),
                    v_n: r.v_n.to_string(),
                })
                .collect(),
        )
    } else {
        None
    };
    let out = ExpandOutput {
        spec: FloorSpecJson::from(&spec),
        element: alpha.to_string(),
        expansion: ExpansionJson::from(&exp),
        convergents: rows,
    };
    match output {
        OutputArg::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        OutputArg::Csv => {
            println!("index,quotient");
            for (i, q) in out.expansion.partial_quotients.iter().enumerate() {
                println!("{i},{}", csv_quote(q));
            }
        }
        OutputArg::Text => {
            println!("element: {}", out.element);
            println!("status: {:?}", exp.status);
            println!(
                "quotients: [{}]",
                out.expansion
                    .partial_quotients
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            if let Some(rows) = &out.convergents {
                for r in rows {
                    println!("n={} A={} B={} Q={} V={}", r.n, r.a_n, r.b_n, r.q_n, r.v_n);
                }
            }
        }
    }
    Ok(0)
}

fn merged_imag_certificate(d: i64, p: u64) -> Result<Certificate> {
    let a = certify_imag_quad(d, p, false)?;
    if a.verdict == Verdict::CffCertified {
        return Ok(a);
    }
    let b = certify_imag_quad(d, p, true)?;
    if b.verdict == Verdict::CffCertified {
        return Ok(b);
    }
    let mut witnesses = a.witnesses;
    witnesses.extend(b.witnesses);
    Ok(Certificate { verdict: Verdict::Unknown, criterion: a.criterion, witnesses })
}

fn cmd_certify(
    d: Option<i64>,
    p: u64,
    variant: Option<TypeArg>,
    pi: &Option<String>,
    repset: RepArg,
    output: OutputArg,
) -> Result<i32> {
    let cert = match (variant, d) {
        (Some(TypeArg::Browkin), None) => certify_browkin(p)?,
        (Some(TypeArg::Ruban), None) => certify_ruban(p)?,
        (Some(TypeArg::Browkin | TypeArg::Ruban), Some(_)) => {
            bail!("browkin/ruban certification is over Q; drop --D")
        }
        (Some(TypeArg::Special), d) => {
            let d = d.ok_or_else(|| anyhow!("--type special needs --D"))?;
            let prime = prime_with_generator(p, d, pi, GeneratorStrategy::MinimizeSumAbs)?;
            let kind = match repset {
                RepArg::Browkin => RepSetKind::BrowkinLike,
                RepArg::Ruban => RepSetKind::RubanLike,
            };
            let rs = build_repset(kind, &prime, None)?;
            certify_special(&prime, &rs)?
        }
        (Some(TypeArg::Sqrt2), _) | (None, Some(2)) => {
            certify_sqrt2(p, precision_bits())?.certificate
        }
        (None, Some(d)) if d < 0 => merged_imag_certificate(d, p)?,
        (None, None) => certify_browkin(p)?,
        (Some(TypeArg::Euclidean), Some(d)) if d < 0 => merged_imag_certificate(d, p)?,
        _ => bail!(
            "unsupported certify target: use --type browkin|ruban over Q, --D 2, a negative --D, or --type special"
        ),
    };
    match output {
        OutputArg::Json => println!("{}", serde_json::to_string_pretty(&cert)?),
        OutputArg::Csv => {
            println!("verdict,criterion,witnesses");
            let w = cert
                .witnesses
                .iter()
                .map(|w| format!("{} {} {} {}", w.name, w.value, w.relation, w.bound))
                .collect::<Vec<_>>()
                .join("; ");
            println!("{},{},{}", cert.verdict, cert.criterion, csv_quote(&w));
        }
        OutputArg::Text => {
            println!("verdict: {}", cert.verdict);
            println!("criterion: {}", cert.criterion);
            for w in &cert.witnesses {
                println!("  {}: {} {} {}", w.name, w.value, w.relation, w.bound);
            }
        }
    }
    Ok(0)
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sweep_rows(d: Option<i64>, variant: Option<TypeArg>, p_max: u64) -> Result<Vec<SweepRow>> {
    let bits = precision_bits();
    let primes = pcf_core::certify::odd_primes_upto(p_max);
    match (d, variant) {
        (Some(2), _) => {
            let mut rows: Vec<SweepRow> = primes
                .par_iter()
                .map(|&p| pcf_core::certify::sweep_sqrt2_single(p, bits))
                .collect::<Result<Vec<_>, _>>()?;
            rows.sort_by_key(|r| r.p);
            Ok(rows)
        }
        (Some(d), _) if d < 0 => {
            let mut rows: Vec<SweepRow> = primes
                .par_iter()
                .map(|&p| pcf_core::certify::sweep_imag_quad_single(d, p))
                .collect::<Result<Vec<_>, _>>()?;
            rows.sort_by_key(|r| r.p);
            Ok(rows)
        }
        (None, Some(TypeArg::Ruban)) => {
            Ok(pcf_core::certify::sweep_rational(RepSetKind::RubanLike, p_max)?)
        }
        (None, _) => Ok(pcf_core::certify::sweep_rational(RepSetKind::BrowkinLike, p_max)?),
        _ => bail!("unsupported sweep target"),
    }
}

fn cmd_sweep(
    d: Option<i64>,
    variant: Option<TypeArg>,
    p_max: u64,
    output: OutputArg,
) -> Result<i32> {
    let rows = sweep_rows(d, variant, p_max)?;
    match output {
        OutputArg::Csv => {
            let max_w = rows.iter().map(|r| r.witnesses.len()).max().unwrap_or(0);
            let mut header = "D,p,splitting,generator,verdict,criterion".to_string();
            for i in 1..=max_w {
                header.push_str(&format!(",witness_{i}"));
            }
            println!("{header}");
            for r in rows {
                let mut line = format!(
                    "{},{},{},{},{},{}",
                    r.d.map(|d| d.to_string()).unwrap_or_default(),
                    r.p,
                    r.splitting,
                    csv_quote(&r.generator.map(|g| g.to_string()).unwrap_or_default()),
                    r.verdict,
                    r.criterion
                );
                for i in 0..max_w {
                    let cell = r
                        .witnesses
                        .get(i)
                        .map(|w| format!("{} {} {} {}", w.name, w.value, w.relation, w.bound))
                        .unwrap_or_default();
                    line.push(',');
                    line.push_str(&csv_quote(&cell));
                }
                println!("{line}");
            }
        }
        OutputArg::Json => {
            #[derive(serde::Serialize)]
            struct RowJson {
                d: Option<i64>,
                p: u64,
                splitting: String,
                generator: Option<String>,
                verdict: Verdict,
                criterion: pcf_core::certify::Criterion,
                cff_generic: Option<bool>,
                special_type: Option<bool>,
                witnesses: Vec<pcf_core::certify::Witness>,
            }
            let out: Vec<RowJson> = rows
                .into_iter()
                .map(|r| RowJson {
                    d: r.d,
                    p: r.p,
                    splitting: r.splitting.to_string(),
                    generator: r.generator.map(|g| g.to_string()),
                    verdict: r.verdict,
                    criterion: r.criterion,
                    cff_generic: r.cff_generic,
                    special_type: r.special_type,
                    witnesses: r.witnesses,
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OutputArg::Text => {
            for r in rows {
                println!(
                    "p = {:>4} [{}]: {} via {}{}",
                    r.p,
                    r.splitting,
                    r.verdict,
                    r.criterion,
                    r.generator.map(|g| format!(" (pi = {g})")).unwrap_or_default()
                );
            }
        }
    }
    Ok(0)
}

fn cmd_selftest(seed: u64, n: usize, inject_fault: bool, output: OutputArg) -> Result<i32> {
    let cfg = SelftestConfig { seed, n, inject_fault };
    let results = run_all(&cfg);
    let all_pass = results.iter().all(|r| r.passed);
    match output {
        OutputArg::Json => println!("{}", serde_json::to_string_pretty(&results)?),
        _ => {
            for r in &results {
                if r.passed {
                    println!("suite {:<10} PASS ({} checks)", r.name, r.cases);
                } else {
                    println!(
                        "suite {:<10} FAIL ({} checks): {}",
                        r.name,
                        r.cases,
                        r.counterexample.as_deref().unwrap_or("")
                    );
                }
            }
        }
    }
    Ok(if all_pass { 0 } else { 2 })
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Expand { d, p, variant, pi, repset, element, max_steps, convergents, output } => {
            cmd_expand(d, p, variant, &pi, repset, &element, max_steps, convergents, output)
        }
        Cmd::Certify { d, p, variant, pi, repset, output } => {
            cmd_certify(d, p, variant, &pi, repset, output)
        }
        Cmd::Sweep { d, p_max, variant, output } => cmd_sweep(d, variant, p_max, output),
        Cmd::Selftest { seed, n, inject_fault, output } => {
            cmd_selftest(seed, n, inject_fault, output)
        }
    }
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}
