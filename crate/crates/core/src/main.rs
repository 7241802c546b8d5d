use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use congruence_lab::algebra::arith::is_prime;
use congruence_lab::criterion::{
    self, certify_claim, delta_table, Subject, TableCell, DEFAULT_WEIGHT_CAP,
};
use congruence_lab::engine::{
    cross_validate, read_certificates, scan, write_certificates, Claim, CongruenceCertificate,
    Evidence, FormData, ScanConfig, ScanGrid, ValidationReport, DEFAULT_SUPPORT,
};
use congruence_lab::forms::{self, default_basis_precision, NamedForm};
use congruence_lab::heckeops::{theta_kill, theta_zero_kill};
use congruence_lab::p1rep::{
    generate_submodule, membership, p1_enumerate, steinberg_subspace, tm_vector, P1Vector,
};
use congruence_lab::qseries::cache::{AnySeries, SeriesCache};
use congruence_lab::qseries::{
    FormDescriptor, IntSeries, Integers, ModSeries, ResidueRing, Weight,
};
use congruence_lab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "congruence-lab",
    version,
    about = "Ramanujan-type congruences of modular forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Write a q-expansion cache file.
    Gen {
        /// delta, e4, e6, products like e4^2*delta, eta^R, or partition.
        #[arg(long)]
        form: String,
        #[arg(long)]
        prec: i64,
        /// Reduce the coefficients mod this prime.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find maximal progressions on which a series vanishes mod ell.
    Scan {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        max_modulus: u64,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_SUPPORT)]
        support: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "records")]
        format: Format,
    },
    /// Table of maximal congruences of Delta.
    CertifyTable {
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 1000)]
        verify_bound: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Decide the gap congruence on p^m n + beta (p ∤ n) by the Hecke criterion.
    Certify {
        #[arg(long)]
        form: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        beta: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Computations in the permutation module on P^1(Z/M).
    Rep {
        #[arg(value_enum)]
        action: RepAction,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        beta: i64,
    },
    /// Check classical partition congruences.
    Partition {
        #[arg(long, value_enum)]
        check: PartitionCheck,
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Build a form with a congruence on ell n + beta and a U_ell preimage of it.
    ThetaLab {
        #[arg(long)]
        ell: u64,
        #[arg(long, allow_hyphen_values = true)]
        beta: i64,
        #[arg(long, default_value = "delta")]
        form: String,
        #[arg(long, default_value_t = 1)]
        preimage_steps: u32,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        weight_cap: i64,
    },
    /// Re-check a certificate file against a series file.
    Validate {
        #[arg(long)]
        certs: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepAction {
    Dims,
    Membership,
    Steinberg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionCheck {
    Ramanujan,
    Atkin,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Discrepancy,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Discrepancy) => ExitCode::from(1),
        Err(e) => {
            let record = serde_json::json!({ "error": error_kind(&e), "message": e.to_string() });
            eprintln!("{record}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Precision { .. } => "precision",
        Error::Usage(_) | Error::NotOddPrime(_) | Error::RamifiedModulus { .. } => "usage",
        Error::Format(_) | Error::Io(_) => "io",
        Error::Hypothesis(_) => "hypothesis",
        Error::Unsupported(_) => "unsupported",
        _ => "computation",
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precision { .. } => 3,
        Error::Usage(_)
        | Error::NotOddPrime(_)
        | Error::RamifiedModulus { .. }
        | Error::Format(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Gen {
            form,
            prec,
            modulus,
            out,
        } => gen(&form, prec, modulus, &out),
        Command::Scan {
            input,
            ell,
            max_modulus,
            bound,
            support,
            out,
            format,
        } => run_scan(
            &input,
            ell,
            max_modulus,
            bound,
            support,
            out.as_deref(),
            format,
        ),
        Command::CertifyTable {
            ell,
            primes,
            count,
            verify_bound,
            format,
        } => certify_table(&ell, &primes, count, verify_bound, format),
        Command::Certify {
            form,
            ell,
            p,
            m,
            beta,
            format,
        } => certify(&form, ell, p, m, beta, format),
        Command::Rep {
            action,
            modulus,
            ell,
            beta,
        } => rep(action, modulus, ell, beta),
        Command::Partition {
            check,
            bound,
            format,
        } => partition(check, bound, format),
        Command::ThetaLab {
            ell,
            beta,
            form,
            preimage_steps,
            weight_cap,
        } => theta_lab(ell, beta, &form, preimage_steps, weight_cap),
        Command::Validate {
            certs,
            input,
            format,
        } => validate(&certs, &input, format),
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn partition_descriptor() -> FormDescriptor {
    FormDescriptor {
        name: "partition".into(),
        weight: Weight::half(-1),
        level: 1,
        character: congruence_lab::algebra::KroneckerChar::TRIVIAL,
    }
}

fn generate(form: &str, prec: i64, modulus: Option<u64>) -> Result<AnySeries> {
    let lower = form.to_ascii_lowercase();
    if lower == "partition" {
        if prec < 1 {
            return Err(Error::Usage("precision must be positive".into()));
        }
        let n = prec as usize - 1;
        return Ok(match modulus {
            Some(ell) => AnySeries::Mod(
                ModSeries::from_coeffs(ResidueRing::new(ell)?, forms::partition_mod(ell, n)?)
                    .with_descriptor(partition_descriptor()),
            ),
            None => AnySeries::Int(
                IntSeries::from_coeffs(Integers, forms::partitions(n))
                    .with_descriptor(partition_descriptor()),
            ),
        });
    }
    if let Some(r) = lower
        .strip_prefix("eta^")
        .or_else(|| (lower == "eta").then_some("1"))
    {
        let r: i64 = r
            .parse()
            .map_err(|_| Error::Usage(format!("bad eta power in {form:?}")))?;
        let s = forms::eta_power(r, prec)?;
        return Ok(match modulus {
            Some(ell) => AnySeries::Mod(s.reduce_mod(ell)?),
            None => AnySeries::Int(s),
        });
    }
    let named: NamedForm = form.parse()?;
    Ok(match modulus {
        Some(ell) => AnySeries::Mod(named.series_mod(ell, prec)?),
        None => AnySeries::Int(named.series(prec)?),
    })
}

fn gen(form: &str, prec: i64, modulus: Option<u64>, out: &Path) -> Result<Outcome> {
    let domain = modulus.map_or_else(|| "int".to_string(), |l| format!("mod{l}"));
    let series = match SeriesCache::from_env() {
        Some(cache) => {
            cache.get_or_insert(form, &domain, prec, || generate(form, prec, modulus))?
        }
        None => generate(form, prec, modulus)?,
    };
    series.write(out)?;
    Ok(Outcome::Ok)
}

fn run_scan(
    input: &Path,
    ell: u64,
    max_modulus: u64,
    bound: i64,
    support: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<Outcome> {
    congruence_lab::algebra::arith::odd_prime(ell)?;
    let f = AnySeries::read(input)?.to_mod(ell)?;
    let grid = ScanGrid::of(&f);
    let certs = scan(
        &f,
        &ScanConfig {
            max_modulus,
            bound,
            support_min: support,
        },
    )?;
    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout()),
    };
    match format {
        Format::Records => write_certificates(&mut w, &certs)?,
        Format::Table => {
            for c in &certs {
                let support = match c.evidence {
                    Evidence::VerifiedToBound { support, .. } => support,
                    _ => 0,
                };
                match grid.claim_from_raw(&c.claim) {
                    Some((m, b)) if grid != ScanGrid::INTEGRAL => {
                        writeln!(w, "{m}k + {b}  [raw {}]  support {support}", c.claim)?
                    }
                    _ => writeln!(w, "{}  support {support}", c.claim)?,
                }
            }
        }
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn table_certificates(rows: &[criterion::TableRow]) -> Result<Vec<CongruenceCertificate>> {
    let mut out = Vec::new();
    for row in rows {
        for cell in &row.cells {
            match cell {
                TableCell::Gap {
                    p,
                    exponents,
                    analysis,
                } => {
                    for &m in exponents {
                        let stride = p.pow(m as u32);
                        out.push(CongruenceCertificate {
                            form: "Delta".into(),
                            ell: row.ell,
                            claim: Claim::gap(stride, 0, *p)?,
                            evidence: Evidence::CertifiedHecke {
                                p: *p,
                                m,
                                constant_components: 0,
                                components: vec![analysis.record()],
                            },
                            witnesses: Vec::new(),
                        });
                    }
                }
                TableCell::Full { p, bound } => out.push(CongruenceCertificate {
                    form: "Delta".into(),
                    ell: row.ell,
                    claim: Claim::progression(*p, 0)?,
                    evidence: Evidence::VerifiedToBound {
                        bound: *p as i64 * bound,
                        support: *bound as u64 + 1,
                    },
                    witnesses: Vec::new(),
                }),
                TableCell::Empty { .. } => {}
            }
        }
    }
    Ok(out)
}

fn certify_table(
    ells: &[u64],
    primes: &[u64],
    count: usize,
    verify_bound: i64,
    format: Format,
) -> Result<Outcome> {
    let rows = delta_table(ells, primes, count, verify_bound)?;
    let mut w = stdout();
    match format {
        Format::Records => write_certificates(&mut w, &table_certificates(&rows)?)?,
        Format::Table => {
            let mut grid: Vec<Vec<String>> = vec![std::iter::once("ell".to_string())
                .chain(primes.iter().map(|p| format!("p={p}")))
                .collect()];
            for row in &rows {
                grid.push(
                    std::iter::once(row.ell.to_string())
                        .chain(row.cells.iter().map(|c| c.to_string()))
                        .collect(),
                );
            }
            let widths: Vec<usize> = (0..grid[0].len())
                .map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            for r in &grid {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(c, &wd)| format!("{c:<wd$}"))
                    .collect();
                writeln!(w, "{}", cells.join(" | ").trim_end())?;
            }
        }
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn certify(form: &str, ell: u64, p: u64, m: u64, beta: i64, format: Format) -> Result<Outcome> {
    congruence_lab::algebra::arith::odd_prime(ell)?;
    if !is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    let named: NamedForm = form.parse()?;
    let k = named.weight();
    let precision = p as i64 * (default_basis_precision(k) + 1);
    let f = named.series_mod(ell, precision)?;
    let c = certify_claim(&Subject::Form { f: &f, weight: k }, p, m, beta)?;
    let mut w = stdout();
    match format {
        Format::Records => {
            if c.certified {
                write_certificates(&mut w, std::slice::from_ref(&c.certificate))?;
            } else {
                eprintln!(
                    "not certified: {} mod {ell} on {}",
                    c.certificate.form, c.certificate.claim
                );
            }
        }
        Format::Table => {
            let verdict = if c.certified {
                "certified"
            } else {
                "not certified"
            };
            writeln!(
                w,
                "{}: {} mod {ell} vanishes on {}",
                verdict, c.certificate.form, c.certificate.claim
            )?;
            if c.constant_components > 0 {
                writeln!(w, "  {} constant component(s)", c.constant_components)?;
            }
            for a in &c.analyses {
                let admits = if a.admits(m) { "admits" } else { "rejects" };
                writeln!(
                    w,
                    "  lambda = {}, case {}, period {}: {admits} m = {m}",
                    a.lambda,
                    a.case.name(),
                    a.period
                )?;
            }
        }
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn rep(action: RepAction, modulus: u64, ell: u64, beta: i64) -> Result<Outcome> {
    let mut w = stdout();
    match action {
        RepAction::Dims => {
            let v = tm_vector(modulus, beta, ell)?;
            let sub = generate_submodule(&[v])?;
            writeln!(w, "dimension {}", sub.dim())?;
        }
        RepAction::Membership => {
            let sub = generate_submodule(&[tm_vector(modulus, beta, ell)?])?;
            let members: Vec<String> = (0..modulus as i64)
                .map(|b| Ok((b, membership(&tm_vector(modulus, b, ell)?, &sub)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|&(_, inside)| inside)
                .map(|(b, _)| b.to_string())
                .collect();
            writeln!(w, "dimension {}", sub.dim())?;
            writeln!(w, "members {}", members.join(","))?;
        }
        RepAction::Steinberg => {
            let st = steinberg_subspace(modulus, ell)?;
            let line = p1_enumerate(modulus)?;
            let inv = P1Vector::invariant(&line, &st.field);
            let v = tm_vector(modulus, beta, ell)?;
            writeln!(w, "steinberg dimension {}", st.dim())?;
            writeln!(w, "invariant vector inside {}", membership(&inv, &st)?)?;
            writeln!(w, "tm vector inside {}", membership(&v, &st)?)?;
            writeln!(w, "generated dimension {}", generate_submodule(&[v])?.dim())?;
        }
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

/// `(modulus of the congruence, A, B)` meaning `p(A n + B) ≡ 0`.
fn partition_checks(check: PartitionCheck) -> Vec<(u64, u64, u64)> {
    match check {
        PartitionCheck::Ramanujan => vec![(5, 5, 4), (7, 7, 5), (11, 11, 6)],
        PartitionCheck::Atkin => vec![(13, 11 * 11 * 11 * 13, 237)],
    }
}

fn partition(check: PartitionCheck, bound: u64, format: Format) -> Result<Outcome> {
    let checks = partition_checks(check);
    let product: u64 = checks.iter().map(|c| c.0).product();
    let n_max = checks
        .iter()
        .map(|&(_, a, b)| a * bound + b)
        .max()
        .unwrap_or(0);
    let p = forms::partition_mod(product, n_max as usize)?;
    let mut all = true;
    let mut w = stdout();
    for (ell, a, b) in checks {
        let fail = (0..=bound).find(|&n| p[(a * n + b) as usize] % ell != 0);
        all &= fail.is_none();
        match format {
            Format::Table => match fail {
                None => writeln!(w, "PASS p({a}n + {b}) = 0 mod {ell} for 0 <= n <= {bound}")?,
                Some(n) => writeln!(w, "FAIL p({a}n + {b}) mod {ell} is nonzero at n = {n}")?,
            },
            Format::Records => {
                if fail.is_none() {
                    let cert = CongruenceCertificate {
                        form: "partition".into(),
                        ell,
                        claim: Claim::progression(a, b as i64)?,
                        evidence: Evidence::VerifiedToBound {
                            bound: (a * bound + b) as i64,
                            support: bound + 1,
                        },
                        witnesses: Vec::new(),
                    };
                    write_certificates(&mut w, &[cert])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(if all {
        Outcome::Ok
    } else {
        Outcome::Discrepancy
    })
}

fn theta_lab(ell: u64, beta: i64, form: &str, steps: u32, cap: i64) -> Result<Outcome> {
    congruence_lab::algebra::arith::odd_prime(ell)?;
    let named: NamedForm = form.parse()?;
    let k = named.weight();
    let rows = forms::sturm_bound(cap) + 2;
    let precision = rows.max(default_basis_precision(k)) * 2;
    let g = named.series_mod(ell, precision)?;
    let b = beta.rem_euclid(ell as i64) as u64;
    let (g1, k1) = if b == 0 {
        (theta_zero_kill(&g)?, k + ell as i64 + 1)
    } else {
        (
            theta_kill(&g, beta)?,
            k + (ell as i64 + 1) * (ell as i64 - 1) / 2,
        )
    };
    let killed = g1.sieve(ell, b)?.is_zero();
    let mut w = stdout();
    writeln!(w, "g = {named} mod {ell}, weight {k}")?;
    writeln!(w, "g1 weight {k1}: vanishes on {ell}n + {b}: {killed}")?;
    let pre = criterion::u_ell_preimage(&g1, k1, steps, cap)?;
    let mut u = pre.series.clone();
    for _ in 0..steps {
        u = u.u_operator(ell)?;
    }
    let sieved = u.sieve(ell, b)?.is_zero();
    let nonzero = !u.is_zero();
    writeln!(
        w,
        "g2 found in weight {} with filtration {}",
        pre.weight, pre.filtration
    )?;
    writeln!(w, "U_ell^{steps} g2 vanishes on {ell}n + {b}: {sieved}")?;
    writeln!(w, "U_ell^{steps} g2 nonzero: {nonzero}")?;
    let mut head = Vec::new();
    for n in 0..pre.series.precision() {
        let c = pre.series.coeff(n)?;
        if c != 0 {
            head.push(format!("{c} q^{n}"));
            if head.len() == 6 {
                break;
            }
        }
    }
    writeln!(w, "g2 = {} + ...", head.join(" + "))?;
    w.flush()?;
    Ok(if killed && sieved && nonzero {
        Outcome::Ok
    } else {
        Outcome::Discrepancy
    })
}

fn validate(certs: &Path, input: &Path, format: Format) -> Result<Outcome> {
    let store = read_certificates(BufReader::new(File::open(certs)?))?;
    let series = AnySeries::read(input)?;
    let mut ells: Vec<u64> = store.iter().map(|c| c.ell).collect();
    ells.sort();
    ells.dedup();
    let mut total = ValidationReport::default();
    let mut skipped = vec![true; store.len()];
    for ell in ells {
        let f = match series.to_mod(ell) {
            Ok(f) => f,
            Err(Error::DomainMismatch(_)) => continue,
            Err(e) => return Err(e),
        };
        let report = cross_validate(&store, &FormData::new(f))?;
        for (i, s) in skipped.iter_mut().enumerate() {
            *s &= report.skipped.contains(&i);
        }
        total.checked += report.checked;
        total.discrepancies.extend(report.discrepancies);
    }
    total.skipped = skipped
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| i)
        .collect();
    let mut w = stdout();
    match format {
        Format::Records => writeln!(w, "{}", serde_json::to_string(&total)?)?,
        Format::Table => {
            writeln!(
                w,
                "checked {} skipped {}",
                total.checked,
                total.skipped.len()
            )?;
            for d in &total.discrepancies {
                let at = d.witness.map_or_else(String::new, |n| format!(" at {n}"));
                writeln!(
                    w,
                    "DISCREPANCY #{} {}: {}{at}",
                    d.certificate, d.claim, d.reason
                )?;
            }
        }
    }
    w.flush()?;
    Ok(if total.is_clean() {
        Outcome::Ok
    } else {
        Outcome::Discrepancy
    })
}
