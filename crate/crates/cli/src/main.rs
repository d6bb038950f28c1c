//! `metacomm`: metacommutation of primes in `M_n(Z)` and the Hurwitz
//! order, cycle-structure reports for the projective matrix action, and
//! the formula-vs-brute-force verification sweeps.
//!
//! All output is JSON with sorted keys (or fixed-format text for `verify`),
//! byte-identical for identical arguments and seed.
//!
//! Exit codes: 0 success, 2 malformed input, 3 mathematical precondition
//! violation, 4 internal consistency failure (a formula disagreeing with
//! brute force is reported this way, never silently).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metacomm::error::ErrorCategory;
use metacomm::fq::Field;
use metacomm::fqmat::MatFq;
use metacomm::hurwitz::{self, Quaternion};
use metacomm::intmat::{self, MatZ};
use metacomm::verify::{self, SuiteReport};
use metacomm::{cycles, Error};

#[derive(Parser)]
#[command(name = "metacomm", version, about = "Metacommutation of primes: factorization, permutations, and cycle-structure verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cycle structure of the projective action of an invertible matrix
    /// over F_q (use "-" to read the matrix from stdin).
    Cycles {
        /// Field size q = p^e
        #[arg(long)]
        q: u64,
        /// Matrix as a row-major JSON array; for e > 1 each entry is a
        /// coefficient list
        #[arg(long)]
        matrix: String,
    },
    /// Fixed points of the projective action, with the per-eigenvalue
    /// breakdown.
    FixedPoints {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        matrix: String,
    },
    /// Factor an integer matrix into prime-determinant factors. The first
    /// listed prime is peeled first (it becomes the rightmost factor), so
    /// the output determinants read as the reversed prime list.
    FactorMatrix {
        #[arg(long)]
        matrix: String,
        /// Comma-separated distinct primes whose product is |det|
        #[arg(long)]
        primes: String,
    },
    /// Metacommute: rewrite P*omega = omega'*P' at the prime p and report
    /// the kernel map on projective space.
    MetacommuteMatrix {
        #[arg(long)]
        p: u64,
        /// The prime-determinant factor P (JSON rows)
        #[arg(long)]
        matrix: String,
        /// The coprime factor omega (JSON rows)
        #[arg(long)]
        omega: String,
    },
    /// Factor a Hurwitz quaternion along the listed prime norms, in
    /// product order: the i-th output factor has norm equal to the i-th prime.
    FactorQuaternion {
        /// A JSON 4-list of coordinates in the 1,i,j,w basis; append "/1"
        /// (or "/2") for 1,i,j,k coordinates over that denominator
        #[arg(long)]
        quat: String,
        #[arg(long)]
        primes: String,
    },
    /// Metacommute pi*omega = omega'*pi' in the Hurwitz order at the odd
    /// prime p.
    MetacommuteQuaternion {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        omega: String,
    },
    /// The p+1 canonical classes of reduced norm p (odd p).
    Primes {
        #[arg(long)]
        p: u64,
    },
    /// Run a verification sweep; exits 0 iff every check passes.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Seed for the randomized sweeps
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap the field sizes a suite walks
        #[arg(long)]
        max_q: Option<u64>,
        /// Cap the primes a suite walks
        #[arg(long)]
        max_p: Option<u64>,
        /// Worker threads; output is identical regardless
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Fripertinger,
    Fixedpoints,
    Gl2,
    DiagramZ,
    DiagramH,
    Subexp,
}

enum CliError {
    Parse(String),
    Math(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Math(e) => match e.category() {
                ErrorCategory::Precondition => 3,
                ErrorCategory::Consistency => 4,
            },
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Parse(msg) => json!({"error": msg, "kind": "parse"}),
            CliError::Math(e) => {
                let kind = match e.category() {
                    ErrorCategory::Precondition => "precondition",
                    ErrorCategory::Consistency => "consistency",
                };
                json!({"error": e.to_string(), "kind": kind})
            }
        }
    }
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Expand "-" to the full standard input.
fn read_arg(raw: &str) -> Result<String, CliError> {
    if raw != "-" {
        return Ok(raw.to_string());
    }
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| parse_err(format!("failed to read stdin: {e}")))?;
    Ok(buf)
}

fn parse_json(raw: &str) -> Result<Value, CliError> {
    serde_json::from_str(raw).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}

/// Interpret q as p^e with p prime.
fn field_of_order(q: u64) -> Result<Field, CliError> {
    if q < 2 {
        return Err(parse_err(format!("{q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q; // q itself is prime
    }
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(parse_err(format!("{q} is not a prime power")));
    }
    Ok(Field::new(p, e)?)
}

fn value_to_i64(v: &Value) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| parse_err(format!("expected an integer, found {v}")))
}

fn parse_matfq(raw: &str, field: &Field) -> Result<MatFq, CliError> {
    let value = parse_json(raw)?;
    let rows = value.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| parse_err("matrix row must be an array"))?;
        let mut elems = Vec::with_capacity(row.len());
        for entry in row {
            let elem = match entry {
                Value::Array(coeffs) => {
                    let ints = coeffs.iter().map(value_to_i64).collect::<Result<Vec<_>, _>>()?;
                    field.element(&ints)?
                }
                other => field.from_int(value_to_i64(other)?),
            };
            elems.push(elem);
        }
        out.push(elems);
    }
    Ok(MatFq::from_rows(field, out)?)
}

fn parse_matz(raw: &str) -> Result<MatZ, CliError> {
    let value = parse_json(raw)?;
    let rows = value.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| parse_err("matrix row must be an array"))?;
        out.push(row.iter().map(value_to_i64).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(MatZ::from_ints(&out)?)
}

/// `"[a,b,c,d]"` in the integral basis, or `"[w,x,y,z]/den"` in the
/// 1,i,j,k basis with den 1 or 2.
fn parse_quat(raw: &str) -> Result<Quaternion, CliError> {
    let raw = raw.trim();
    let (coords_part, den) = match raw.rsplit_once('/') {
        Some((left, den)) => {
            let den: i64 =
                den.trim().parse().map_err(|_| parse_err("denominator must be an integer"))?;
            (left.trim(), Some(den))
        }
        None => (raw, None),
    };
    let value = parse_json(coords_part)?;
    let list = value.as_array().ok_or_else(|| parse_err("quaternion must be a 4-element array"))?;
    if list.len() != 4 {
        return Err(parse_err("quaternion must have exactly 4 coordinates"));
    }
    let mut coords = [0i64; 4];
    for (slot, v) in coords.iter_mut().zip(list) {
        *slot = value_to_i64(v)?;
    }
    match den {
        None => Ok(Quaternion::new(coords)),
        Some(den) => Ok(Quaternion::from_ijk(coords, den)?),
    }
}

fn parse_primes(raw: &str) -> Result<Vec<u64>, CliError> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| parse_err(format!("bad prime list entry {part:?}")))
        })
        .collect()
}

fn matz_to_value(m: &MatZ) -> Result<Value, CliError> {
    let rows = m
        .rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    i64::try_from(v)
                        .map(Value::from)
                        .map_err(|_| CliError::Math(Error::capacity("entry exceeds 64 bits")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Value::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::from(rows))
}

fn quat_to_value(x: &Quaternion) -> Value {
    Value::from(x.coords().to_vec())
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.cmd {
        Cmd::Cycles { q, matrix } => {
            let field = field_of_order(q)?;
            let mat = parse_matfq(&read_arg(&matrix)?, &field)?;
            let report = cycles::cycle_structure(&mat)?;
            Ok(serde_json::to_string(&report).expect("report serializes"))
        }
        Cmd::FixedPoints { q, matrix } => {
            let field = field_of_order(q)?;
            let mat = parse_matfq(&read_arg(&matrix)?, &field)?;
            let breakdown = cycles::eigenvalue_fixed_points(&mat)?;
            let total: u64 = breakdown.iter().map(|(_, _, pts)| pts).sum();
            let eigenvalues: Vec<Value> = breakdown
                .iter()
                .map(|(lambda, dim, pts)| {
                    let value = if field.extension_degree() == 1 {
                        Value::from(lambda.coeffs()[0])
                    } else {
                        Value::from(lambda.coeffs().to_vec())
                    };
                    json!({"dimension": dim, "points": pts, "value": value})
                })
                .collect();
            Ok(json!({"count": total, "eigenvalues": eigenvalues}).to_string())
        }
        Cmd::FactorMatrix { matrix, primes } => {
            let mat = parse_matz(&read_arg(&matrix)?)?;
            let primes = parse_primes(&primes)?;
            let chain = intmat::factor_prime_chain(&mat, &primes)?;
            let dets: Vec<Value> = chain
                .iter()
                .map(|f| {
                    i64::try_from(f.det())
                        .map(Value::from)
                        .map_err(|_| CliError::Math(Error::capacity("det exceeds 64 bits")))
                })
                .collect::<Result<_, _>>()?;
            let factors = chain.iter().map(matz_to_value).collect::<Result<Vec<_>, _>>()?;
            Ok(json!({"dets": dets, "factors": factors}).to_string())
        }
        Cmd::MetacommuteMatrix { p, matrix, omega } => {
            let p_mat = parse_matz(&read_arg(&matrix)?)?;
            let w = parse_matz(&read_arg(&omega)?)?;
            let (w_prime, p_prime) = intmat::metacommute(&p_mat, &w, p)?;
            let (before, after) = intmat::kernel_pair(&p_mat, &p_prime, p)?;
            Ok(json!({
                "P_prime": matz_to_value(&p_prime)?,
                "omega_prime": matz_to_value(&w_prime)?,
                "kernel_before": before.to_string(),
                "kernel_after": after.to_string(),
            })
            .to_string())
        }
        Cmd::FactorQuaternion { quat, primes } => {
            let alpha = parse_quat(&read_arg(&quat)?)?;
            let primes = parse_primes(&primes)?;
            let factors = hurwitz::factor_by_primes(&alpha, &primes)?;
            let norms: Vec<i64> = factors.iter().map(Quaternion::nrd).collect();
            let factors: Vec<Value> = factors.iter().map(quat_to_value).collect();
            Ok(json!({"factors": factors, "norms": norms}).to_string())
        }
        Cmd::MetacommuteQuaternion { p, pi, omega } => {
            let pi = parse_quat(&read_arg(&pi)?)?;
            let w = parse_quat(&read_arg(&omega)?)?;
            if pi.nrd() != p as i64 {
                return Err(CliError::Math(Error::domain(format!(
                    "pi has norm {}, not the requested prime {p}",
                    pi.nrd()
                ))));
            }
            let (pi_prime, w_prime) = hurwitz::metacommute(&pi, &w)?;
            let classes = hurwitz::primes_of_norm(p)?;
            let class_index = classes
                .iter()
                .position(|c| *c == pi_prime)
                .ok_or_else(|| Error::consistency("image class missing from the class list"))?;
            let split = hurwitz::SplitMap::new(p)?;
            let before = split.apply(&pi).kernel_point()?;
            let after = split.apply(&pi_prime).kernel_point()?;
            Ok(json!({
                "class_index": class_index,
                "kernel_after": after.to_string(),
                "kernel_before": before.to_string(),
                "omega_prime": quat_to_value(&w_prime),
                "pi_prime": quat_to_value(&pi_prime),
            })
            .to_string())
        }
        Cmd::Primes { p } => {
            let classes = hurwitz::primes_of_norm(p)?;
            let rendered: Vec<Value> = classes.iter().map(quat_to_value).collect();
            Ok(json!({"classes": rendered, "count": classes.len(), "p": p}).to_string())
        }
        Cmd::Verify { suite, seed, max_q, max_p, jobs } => {
            let report = run_suite(suite, seed, max_q, max_p, jobs)?;
            let mut out = String::new();
            out.push_str(&format!("suite: {}\n", report.suite));
            out.push_str(&format!("seed: {seed}\n"));
            out.push_str(&format!("jobs: {jobs}\n"));
            if let Some(q) = max_q {
                out.push_str(&format!("max-q: {q}\n"));
            }
            if let Some(p) = max_p {
                out.push_str(&format!("max-p: {p}\n"));
            }
            for line in &report.lines {
                out.push_str(line);
                out.push('\n');
            }
            for witness in &report.failures {
                out.push_str(&format!("witness: {witness}\n"));
            }
            out.push_str(&format!(
                "result: {} ({} cases, {} failures)",
                if report.passed() { "PASS" } else { "FAIL" },
                report.cases,
                report.failures.len()
            ));
            if report.passed() {
                Ok(out)
            } else {
                println!("{out}");
                Err(CliError::Math(Error::consistency(format!(
                    "verification suite {} found {} counterexamples",
                    report.suite,
                    report.failures.len()
                ))))
            }
        }
    }
}

fn run_suite(
    suite: Suite,
    seed: u64,
    max_q: Option<u64>,
    max_p: Option<u64>,
    jobs: usize,
) -> Result<SuiteReport, CliError> {
    let report = match suite {
        Suite::Fripertinger => verify::fripertinger(max_q)?,
        Suite::Fixedpoints => verify::fixed_points(seed, max_q, jobs)?,
        Suite::Gl2 => verify::gl2(max_q)?,
        Suite::DiagramZ => verify::diagram_z(seed, max_p, jobs)?,
        Suite::DiagramH => verify::diagram_h(seed, max_p, jobs)?,
        Suite::Subexp => verify::subexp(max_q)?,
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap prints usage and picks exit 2 for bad arguments itself
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
