use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cubicfold::analysis::{classify_family, sample_member_over, DEFAULT_TRIALS};
use cubicfold::arith::{compose_crt, Automorphism};
use cubicfold::classifier::{build_diagram, enumerate_candidates, max_exponent, Enumeration};
use cubicfold::eigenbasis::{intersect_bases, lambda_j, FamilyBasis};
use cubicfold::error::Error;
use cubicfold::families::family;
use cubicfold::field::{Field, FieldSpec, PrimeField, Rationals};
use cubicfold::fixedlocus::{certified_report, fixed_lines_report, FixedLocusReport};
use cubicfold::groebner::is_smooth_cubic;
use cubicfold::poly::{parse_polynomial, reduce_rational};
use cubicfold::table::{build_table, render_csv, render_json, render_markdown, TableConfig};
use cubicfold::verify::{format_result, run_criteria, VerifyConfig};

const EXIT_MISMATCH: u8 = 1;
const EXIT_NOT_CERTIFIED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "cubicfold", version, about = "Symplectic automorphisms of Fano varieties of cubic fourfolds")]
struct Cli {
    /// Characteristic pair used for fixed-locus computations.
    #[arg(long = "char", global = true, env = "CUBICFOLD_CHAR", default_value = "32003,65537")]
    characteristics: String,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate classes of order p^m and decide their generic smoothness.
    Classify {
        #[arg(long, short)]
        prime: u64,
        /// Single exponent m; all admissible exponents when omitted.
        #[arg(long, short)]
        m: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Monomials of one character.
    Basis {
        #[arg(long, conflicts_with = "aut")]
        family: Option<String>,
        /// Automorphism as JSON, e.g. '{"p":11,"m":1,"e":[0,1,10,3,6,4],"j":1}'.
        #[arg(long)]
        aut: Option<String>,
        /// Character; defaults to the automorphism's own.
        #[arg(long, short)]
        j: Option<i64>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Decide smoothness of a cubic form. Exit 0 smooth, 1 singular, 2 not certified.
    Smooth {
        /// Polynomial text or a file containing it.
        #[arg(long)]
        poly: String,
        /// Q, Fq (F32003) or F<q>.
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Generic smoothness of a family given by its basis.
    FamilySmoothness {
        /// FamilyBasis JSON (text or file).
        #[arg(long, conflicts_with = "family")]
        basis: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fixed lines of a member of a family.
    FixedLines {
        #[arg(long, conflicts_with = "aut")]
        family: Option<String>,
        #[arg(long)]
        aut: Option<String>,
        /// `random`, `witness`, or polynomial text / file.
        #[arg(long, default_value = "random")]
        poly: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Combine two automorphisms of coprime orders.
    Compose {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Reproduce the classification table.
    Table {
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        skip_fixed_loci: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
    },
    /// Run the acceptance checks.
    Verify {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
    },
}

/// Failure of a command: a library error or a finished run with a nonzero status.
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn text_or_file(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::Lib(Error::Io(format!("{arg}: {e}"))))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_aut(arg: &str) -> Result<Automorphism, Failure> {
    let text = text_or_file(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::InvalidAutomorphism(e.to_string())))
}

fn resolve_aut(family_id: Option<&str>, aut: Option<&str>) -> Result<Automorphism, Failure> {
    match (family_id, aut) {
        (Some(id), _) => Ok(family(id)?.automorphism()),
        (None, Some(a)) => parse_aut(a),
        (None, None) => Err(Failure::Usage("give --family or --aut".into())),
    }
}

fn parse_characteristics(s: &str) -> Result<(PrimeField, PrimeField), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(Failure::Usage(format!("expected two primes, got {s:?}")));
    };
    let prime = |t: &str| -> Result<PrimeField, Failure> {
        let q = t.parse().map_err(|_| Failure::Usage(format!("not a prime: {t}")))?;
        Ok(PrimeField::new(q)?)
    };
    Ok((prime(a)?, prime(b)?))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_enumerations(runs: &[Enumeration], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => to_json(&runs),
        Format::Md => {
            let mut out = String::from("| n | exponents | j | dim | verdict | family | cycles |\n|---|---|---|---|---|---|---|\n");
            for run in runs {
                for c in &run.classes {
                    let family = match (&c.family, &c.equivalent_to) {
                        (Some(f), _) => f.clone(),
                        (None, Some(f)) => format!("({f} up to permutation)"),
                        (None, None) => "-".into(),
                    };
                    out += &format!(
                        "| {} | {:?} | {} | {} | {} | {} | {:?} |\n",
                        c.automorphism.n(),
                        c.automorphism.signed_exponents(),
                        c.automorphism.signed_j(),
                        c.basis.len(),
                        c.verdict.status,
                        family,
                        c.cycle_lengths
                    );
                }
            }
            for run in runs {
                let s = &run.stats;
                out += &format!(
                    "\nn={}: {} tuples, {} of exact order, {} symplectic pairs, {} satisfy (*), {} classes, {} generically smooth",
                    s.n,
                    s.tuples,
                    s.exact_order,
                    s.symplectic_pairs,
                    s.star_pairs,
                    s.classes,
                    s.smooth_classes.unwrap_or(0)
                );
            }
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Lib(Error::Io(e.to_string()));
            w.write_record(["n", "exponents", "j", "basis_size", "verdict", "family"]).map_err(io)?;
            for run in runs {
                for c in &run.classes {
                    w.write_record([
                        c.automorphism.n().to_string(),
                        format!("{:?}", c.automorphism.signed_exponents()),
                        c.automorphism.signed_j().to_string(),
                        c.basis.len().to_string(),
                        c.verdict.status.to_string(),
                        c.family.clone().unwrap_or_default(),
                    ])
                    .map_err(io)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Failure::Lib(Error::Io(e.to_string())))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
    })
}

fn render_report(r: &FixedLocusReport, format: Format) -> String {
    match format {
        Format::Json | Format::Csv => to_json(r),
        Format::Md => {
            let mut out = String::from("| stratum | source | target | cells | dimension | count |\n|---|---|---|---|---|---|\n");
            for s in &r.strata {
                out += &format!(
                    "| {} | {:?} | {:?} | {} | {} | {} |\n",
                    s.kind,
                    s.source,
                    s.target,
                    s.charts,
                    s.dimension,
                    s.count.map_or("-".into(), |c| c.to_string())
                );
            }
            out += &format!("\nover {}: {}\n", r.field, r.summary());
            out
        }
    }
}

fn smooth_exit<F: Field>(t: &cubicfold::poly::Polynomial<F>, exact: bool) -> CmdResult {
    let smooth = is_smooth_cubic(t)?;
    Ok(match (smooth, exact) {
        (true, _) => ("smooth\n".into(), 0),
        (false, true) => ("singular\n".into(), EXIT_MISMATCH),
        (false, false) => ("not certified: singular reduction\n".into(), EXIT_NOT_CERTIFIED),
    })
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Classify { prime, m, trials, seed, format } => {
            let ms: Vec<u32> = match m {
                Some(m) => vec![m],
                None => (1..=max_exponent(prime).max(1)).collect(),
            };
            let runs: Vec<Enumeration> = ms.iter().map(|&m| enumerate_candidates(prime, m, trials, seed)).collect();
            Ok((render_enumerations(&runs, format)?, 0))
        }
        Command::Basis { family, aut, j, format } => {
            let aut = resolve_aut(family.as_deref(), aut.as_deref())?;
            let j = j.map_or(aut.j(), |j| j.rem_euclid(aut.n() as i64) as u64);
            let basis = lambda_j(&aut, j);
            let out = match format {
                Format::Json => to_json(&basis),
                _ => {
                    let diagram = build_diagram(&aut, j)
                        .map(|d| d.to_string())
                        .unwrap_or_else(|e| e.to_string());
                    format!(
                        "{} monomials: {}\ndiagram: {}\n",
                        basis.len(),
                        basis.monomial_strings().join(", "),
                        diagram
                    )
                }
            };
            Ok((out, 0))
        }
        Command::Smooth { poly, field } => {
            let text = text_or_file(&poly)?;
            match field {
                FieldSpec::Rationals => smooth_exit(&parse_polynomial(&Rationals, 6, &text)?, true),
                FieldSpec::PrimeField(q) => {
                    let f = PrimeField::new(q)?;
                    smooth_exit(&parse_polynomial(&f, 6, &text)?, false)
                }
            }
        }
        Command::FamilySmoothness { basis, family: id, trials, seed } => {
            let basis: FamilyBasis = match (basis, id) {
                (Some(b), _) => serde_json::from_str(&text_or_file(&b)?)
                    .map_err(|e| Failure::Lib(Error::Parse(e.to_string())))?,
                (None, Some(id)) => family(&id)?.basis(),
                (None, None) => return Err(Failure::Usage("give --basis or --family".into())),
            };
            let verdict = classify_family(&basis, trials, seed);
            let code = if verdict.is_smooth() { 0 } else { EXIT_MISMATCH };
            Ok((to_json(&verdict), code))
        }
        Command::FixedLines { family: id, aut, poly, seed, format } => {
            let automorphism = resolve_aut(id.as_deref(), aut.as_deref())?;
            let (q1, q2) = parse_characteristics(&cli.characteristics)?;
            let basis = lambda_j(&automorphism, automorphism.j());
            let member = match poly.as_str() {
                "random" => sample_member_over(&basis, &q1, seed, 0),
                "witness" => {
                    let id = id.ok_or_else(|| Failure::Usage("--poly witness needs --family".into()))?;
                    reduce_rational(&family(&id)?.witness_polynomial(), &q1)?
                }
                text => {
                    let t = parse_polynomial(&Rationals, 6, &text_or_file(text)?)?;
                    reduce_rational(&t, &q1)?
                }
            };
            let report = if q1 == q2 {
                fixed_lines_report(&member, &automorphism)?
            } else {
                certified_report(&member, &automorphism, &q2)?
            };
            Ok((render_report(&report, format), 0))
        }
        Command::Compose { a, b } => {
            let (a, b) = (parse_aut(&a)?, parse_aut(&b)?);
            let c = compose_crt(&a, &b)?;
            let common = intersect_bases(&lambda_j(&a, a.j()), &lambda_j(&b, b.j()));
            let out = json!({
                "composite": c,
                "common_monomials": common.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            Ok((to_json(&out), 0))
        }
        Command::Table { format, skip_fixed_loci, seed, trials } => {
            let (q1, q2) = parse_characteristics(&cli.characteristics)?;
            let cfg = TableConfig {
                seed,
                trials,
                fixed_loci: !skip_fixed_loci,
                primes: (q1.modulus(), q2.modulus()),
            };
            let table = build_table(&cfg)?;
            let out = match format {
                Format::Md => render_markdown(&table),
                Format::Json => render_json(&table),
                Format::Csv => render_csv(&table)?,
            };
            Ok((out, if table.all_match() { 0 } else { EXIT_MISMATCH }))
        }
        Command::Verify { only, seed, trials } => {
            let (q1, q2) = parse_characteristics(&cli.characteristics)?;
            let cfg = VerifyConfig {
                seed,
                trials,
                primes: (q1.modulus(), q2.modulus()),
            };
            let results = run_criteria(&only, &cfg);
            let mut out: String = results.iter().map(|r| format_result(r) + "\n").collect();
            let failed = results.iter().filter(|r| !r.passed).count();
            out += &format!("{} of {} criteria passed\n", results.len() - failed, results.len());
            Ok((out, if failed == 0 { 0 } else { EXIT_MISMATCH }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok((text, code)) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INTERNAL);
            }
            ExitCode::from(code)
        }
        Err(Failure::Lib(e @ Error::NotCertified { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NOT_CERTIFIED)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
