//! JSON front end for the group-theory library. Payloads are read from
//! stdin (or a file argument where noted) and results printed as JSON.
//! Exit codes: 0 pass, 1 fail (negative verdict or failed suite),
//! 2 usage or input error.

mod schema;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hallgroups::dvec::{evaluate_word, g_membership, GWord};
use hallgroups::fgab::{format_witness_word, two_generation_witness, OrdersSpec, SplitGroup};
use hallgroups::hall::hall_certificate;
use hallgroups::pqr::{pqr_membership, PqrSpec};
use hallgroups::rigid::{rigid_membership, RigidSystemSpec};
use hallgroups::snf::smith_normal_form;
use hallgroups::unitriangular::{ut_power, ut_root};
use hallgroups::verify::{run_suite, Scale, VerificationReport};
use hallgroups::wreath::{parse_xy_word, shmelkin_eval};

use schema::SchemaError;

#[derive(Parser)]
#[command(name = "hallgroups", version, about = "Exact computations in finitely generated metabelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix (JSON on stdin)
    Snf,
    /// Certificate for a flagged generating set (JSON on stdin)
    HallCert,
    /// Evaluate a word over a,b,c,f (uppercase = inverse)
    EvalWord {
        /// Denominator base n >= 2
        #[arg(long)]
        n: u64,
        #[arg(long)]
        word: String,
    },
    /// Membership of an element (JSON on stdin) in the two-generated group
    MemberG {
        /// Modulus used when the payload omits "n"
        #[arg(long, default_value_t = 2)]
        n: u64,
    },
    /// Evaluate a word over x,y into the wreath product (Z/m)^2 wr Z^2
    Shmelkin {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
    },
    /// Seeded p-adic series system queries
    Rigid(RigidArgs),
    /// Membership in the three-prime subgroup of Q^2
    Pqr(PqrArgs),
    /// Unitriangular matrix operations
    Ut {
        #[command(subcommand)]
        op: UtOp,
    },
    /// Embedding data for a finitely generated abelian group
    EmbedFgab {
        /// Number of infinite-order generators
        #[arg(long)]
        free: usize,
        /// Comma-separated finite orders n1,n2,... with n_{i+1} | n_i
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        orders: Vec<String>,
    },
    /// Run a deterministic verification suite
    Verify {
        /// Suite name or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ScaleArg::Small)]
        scale: ScaleArg,
        /// Emit the machine-readable report
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RigidArgs {
    /// Prime p
    #[arg(long)]
    p: u64,
    /// Number of coordinates r >= 2
    #[arg(long)]
    r: usize,
    #[arg(long)]
    seed: u64,
    #[command(subcommand)]
    op: RigidOp,
}

#[derive(Subcommand)]
enum RigidOp {
    /// Decide membership of a rational vector
    Member {
        /// JSON array of "m/d" strings, e.g. '["1/9","5/9"]'
        #[arg(long)]
        vector: String,
    },
}

#[derive(Args)]
struct PqrArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u64,
    #[command(subcommand)]
    op: PqrOp,
}

#[derive(Subcommand)]
enum PqrOp {
    /// Decide membership of a rational pair (x, y)
    Member { x: String, y: String },
}

#[derive(Subcommand)]
enum UtOp {
    /// Unique k-th root of a unitriangular matrix (JSON [[..]] on stdin)
    Root {
        #[arg(long)]
        k: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    Full,
}

enum CliError {
    /// Bad input or usage: exit 2.
    Usage(String),
    /// Negative verdict or failed suite: exit 1.
    Fail,
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn read_stdin_json() -> Result<Value, CliError> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
    serde_json::from_str(&buf).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

fn parse_json_arg(s: &str) -> Result<Value, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("invalid JSON argument: {e}")))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Snf => {
            let m = schema::parse_matrix(&read_stdin_json()?, "$")?;
            let (s, u, v) = smith_normal_form(&m);
            print_json(&json!({
                "S": schema::emit_matrix(&s),
                "U": schema::emit_matrix(&u),
                "V": schema::emit_matrix(&v),
            }));
            Ok(())
        }
        Command::HallCert => {
            let set = schema::parse_flagged_set(&read_stdin_json()?, "$")?;
            let cert = hall_certificate(&set).map_err(|e| CliError::Usage(e.to_string()))?;
            print_json(&schema::emit_certificate(&cert));
            Ok(())
        }
        Command::EvalWord { n, word } => {
            if n < 2 {
                return Err(CliError::Usage("n must be at least 2".into()));
            }
            let w = GWord::parse(&word)
                .map_err(|ch| CliError::Usage(format!("invalid letter {ch:?} in word")))?;
            print_json(&schema::emit_s_element(&evaluate_word(&w, n)));
            Ok(())
        }
        Command::MemberG { n } => {
            let g = schema::parse_s_element(&read_stdin_json()?, "$", n)?;
            let (member, residual) = g_membership(&g);
            print_json(&json!({
                "member": member,
                "residual": schema::emit_dvector(&residual),
            }));
            if member { Ok(()) } else { Err(CliError::Fail) }
        }
        Command::Shmelkin { m, word } => {
            if m < 2 {
                return Err(CliError::Usage("m must be at least 2".into()));
            }
            let w = parse_xy_word(&word)
                .map_err(|ch| CliError::Usage(format!("invalid letter {ch:?} in word")))?;
            print_json(&schema::emit_wreath(&shmelkin_eval(&w, m)));
            Ok(())
        }
        Command::Rigid(args) => {
            if !hallgroups::arith::is_prime(args.p) {
                return Err(CliError::Usage(format!("p = {} is not prime", args.p)));
            }
            if args.r < 2 {
                return Err(CliError::Usage("r must be at least 2".into()));
            }
            let spec = RigidSystemSpec::seeded(args.p, args.r, args.seed);
            match args.op {
                RigidOp::Member { vector } => {
                    let v = schema::parse_rational_vector(&parse_json_arg(&vector)?, "$")?;
                    if v.len() != args.r {
                        return Err(CliError::Usage(format!(
                            "vector has {} coordinates, expected {}",
                            v.len(),
                            args.r
                        )));
                    }
                    let member = rigid_membership(&v, &spec);
                    print_json(&json!({ "member": member }));
                    if member { Ok(()) } else { Err(CliError::Fail) }
                }
            }
        }
        Command::Pqr(args) => {
            let spec = PqrSpec::new(args.p, args.q, args.r)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            match args.op {
                PqrOp::Member { x, y } => {
                    let x = hallgroups::arith::parse_rational(&x).map_err(CliError::Usage)?;
                    let y = hallgroups::arith::parse_rational(&y).map_err(CliError::Usage)?;
                    let member = pqr_membership(&x, &y, &spec);
                    print_json(&json!({ "member": member }));
                    if member { Ok(()) } else { Err(CliError::Fail) }
                }
            }
        }
        Command::Ut { op } => match op {
            UtOp::Root { k } => {
                if k == 0 {
                    return Err(CliError::Usage("k must be positive".into()));
                }
                let m = schema::parse_ut_matrix(&read_stdin_json()?, "$")?;
                let root = ut_root(&m, k);
                debug_assert_eq!(ut_power(&root, k as i64), m);
                print_json(&schema::emit_ut_matrix(&root));
                Ok(())
            }
        },
        Command::EmbedFgab { free, orders } => {
            let orders: Vec<u64> = orders
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| CliError::Usage(format!("invalid order {s:?}"))))
                .collect::<Result<_, _>>()?;
            let spec = OrdersSpec::new(free, orders).map_err(|e| CliError::Usage(e.to_string()))?;
            let group = SplitGroup::new(spec.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
            let words = two_generation_witness(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
            let phi: Vec<Vec<Value>> = group
                .phi_matrix()
                .iter()
                .map(|col| col.iter().map(schema::emit_bigint).collect())
                .collect();
            print_json(&json!({
                "phi_columns": phi,
                "order": group.phi_order(),
                "witness_words": words.iter().map(|w| format_witness_word(w)).collect::<Vec<_>>(),
            }));
            Ok(())
        }
        Command::Verify { suite, seed, scale, json: as_json } => {
            let scale = match scale {
                ScaleArg::Small => Scale::Small,
                ScaleArg::Full => Scale::Full,
            };
            let report = run_suite(&suite, seed, scale)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if as_json {
                print_json(&serde_json::to_value(&report).expect("serializable"));
            } else {
                print_report(&report);
            }
            if report.passed() { Ok(()) } else { Err(CliError::Fail) }
        }
    }
}

fn print_report(report: &VerificationReport) {
    for c in &report.cases {
        println!("{} {} - {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.detail);
    }
    println!(
        "suite {}: {} ({} cases, {} ms)",
        report.suite,
        if report.passed() { "pass" } else { "FAIL" },
        report.cases.len(),
        report.elapsed_ms,
    );
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Fail) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
