use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use loopgl::context::ModPContext;
use loopgl::error::Error;
use loopgl::garland::{lambda_poly, partition_rhs, partitions, psi};
use loopgl::hall::HallAlgebra;
use loopgl::hyper::{BasisTag, HKey, HyperAlgebra};
use loopgl::json as js;
use loopgl::kstab::{kbar_mul, phi_h, KAlgebra};
use loopgl::modp::{enumerate_basis, independence_check, little_inf_basis, membership_h, HKind, LittleKind};
use loopgl::schur::{SchurAlgebra, Strategy};
use loopgl::verify::{self, VerifyOptions, SUITES};
use loopgl::Ring;

#[derive(Parser)]
#[command(name = "loopgl", version, about = "Exact arithmetic in affine Schur algebras, the loop-algebra hyperalgebra and its modular pieces")]
struct Cli {
    #[command(flatten)]
    ctx: Context,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Context {
    /// Rank of the periodic matrices.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Degree of the affine Schur algebra.
    #[arg(long, global = true)]
    r: Option<i64>,
    #[arg(long, global = true)]
    p: Option<u64>,
    #[arg(long, global = true)]
    h: Option<u32>,
    /// Column window for enumerations.
    #[arg(long, global = true, env = "LOOPGL_WINDOW")]
    window: Option<i64>,
    /// Coefficient ring: Z, Q or Fp:<p>.
    #[arg(long, global = true)]
    ring: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, env = "LOOPGL_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true)]
    k: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Product in S(n,r) by the generator formula and triangular rewriting.
    SchurMul { x: String, y: String },
    /// Product in S(n,r) by double-coset convolution.
    SchurOracle { x: String, y: String },
    HyperMul { x: String, y: String },
    HyperConvert {
        x: String,
        /// Target basis: B, M, Bp, C or G.
        #[arg(long)]
        to: String,
    },
    /// u+_A · u+_B for upper strict matrices A and B.
    HallMul { a: String, b: String },
    GarlandLambda,
    /// Psi(Lambda_k) against the partition sums for k up to --k.
    GarlandVerify,
    ModpBasis {
        /// M_h, C_h, G_h, B_h or M0_h.
        #[arg(long, default_value = "B_h")]
        kind: String,
    },
    ModpMember { x: String },
    LittleBasis {
        /// P_hr, M_hr, B_hr, P'_hr or M'_hr.
        #[arg(long, default_value = "P_hr")]
        kind: String,
    },
    KMul { x: String, y: String },
    KbarMul { x: String, y: String },
    Phi { x: String },
    /// Runs one verification suite by name or number.
    Verify { suite: String },
    /// Independence mod p of the evaluation sequences of a family of brace indices.
    Independence { family: String },
}

enum Failure {
    Contract(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(m) => Failure::Verification(m),
            other => Failure::Contract(other.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn contract(msg: impl Into<String>) -> Failure {
    Failure::Contract(msg.into())
}

/// Inline JSON, or a path to a file holding it.
fn document(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with('{') || arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| contract(format!("cannot read {arg}: {e}")))?
    };
    Ok(js::parse_document(&text)?)
}

impl Context {
    fn need_n(&self) -> Result<usize, Failure> {
        let n = self.n.ok_or_else(|| contract("--n is required"))?;
        if n < 2 {
            return Err(contract(format!("precondition violated: rank n must be at least 2, got {n}")));
        }
        Ok(n)
    }

    fn modp(&self) -> Result<ModPContext, Failure> {
        let p = self.p.ok_or_else(|| contract("--p is required"))?;
        Ok(ModPContext::new(p, self.h.unwrap_or(1))?)
    }

    fn window(&self) -> Result<i64, Failure> {
        let w = self.window.unwrap_or(2);
        if w < 0 {
            return Err(contract(format!("precondition violated: window must be nonnegative, got {w}")));
        }
        Ok(w)
    }

    fn ring(&self) -> Result<Option<Ring>, Failure> {
        self.ring.as_deref().map(|r| Ring::from_str(r).map_err(Failure::from)).transpose()
    }
}

fn list<T>(items: &[T], f: impl Fn(&T) -> Value) -> Value {
    Value::Array(items.iter().map(f).collect())
}

fn run(cli: &Cli) -> Outcome {
    let ctx = &cli.ctx;
    let ring = ctx.ring()?;
    match &cli.cmd {
        Command::SchurMul { x, y } | Command::SchurOracle { x, y } => {
            let strategy = if matches!(cli.cmd, Command::SchurMul { .. }) { Strategy::Formula } else { Strategy::Oracle };
            let mut x = js::schur_from_json(&document(x)?)?;
            let mut y = js::schur_from_json(&document(y)?)?;
            if let Some(r) = ring {
                (x, y) = (x.change_ring(r)?, y.change_ring(r)?);
            }
            if x.n != y.n || x.r != y.r {
                return Err(contract(format!("context mismatch: S({},{}) and S({},{})", x.n, x.r, y.n, y.r)));
            }
            let z = SchurAlgebra::new(x.n, x.r)?.mul(&x, &y, strategy)?;
            Ok((js::schur_to_json(&z), z.to_string()))
        }
        Command::HyperMul { x, y } => {
            let mut x = js::hyper_from_json(&document(x)?)?;
            let mut y = js::hyper_from_json(&document(y)?)?;
            if let Some(r) = ring {
                (x, y) = (x.change_ring(r)?, y.change_ring(r)?);
            }
            let z = HyperAlgebra::new(x.n)?.mul(&x, &y)?;
            Ok((js::hyper_to_json(&z), z.to_string()))
        }
        Command::HyperConvert { x, to } => {
            let to = BasisTag::from_str(to)?;
            let mut x = js::hyper_from_json(&document(x)?)?;
            if let Some(r) = ring {
                x = x.change_ring(r)?;
            }
            let z = HyperAlgebra::new(x.n)?.convert(&x, to)?;
            Ok((js::hyper_to_json(&z), z.to_string()))
        }
        Command::HallMul { a, b } => {
            let a = js::matrix_from_json(&document(a)?)?;
            let b = js::matrix_from_json(&document(b)?)?;
            if a.n() != b.n() {
                return Err(contract(format!("context mismatch: ranks {} and {}", a.n(), b.n())));
            }
            let z = HyperAlgebra::new(a.n())?.hall_mul(&a, &b)?;
            Ok((js::hyper_to_json(&z), z.to_string()))
        }
        Command::GarlandLambda => {
            let k = ctx.k.ok_or_else(|| contract("--k is required"))?;
            let f = lambda_poly(k as usize);
            Ok((js::garland_to_json(&f), f.to_string()))
        }
        Command::GarlandVerify => {
            let n = ctx.need_n()?;
            let top = ctx.k.unwrap_or(5);
            let hall = HallAlgebra::new(n);
            let (mut checked, mut failures) = (0usize, Vec::new());
            for i in 1..=n as i64 {
                for l in [1i64, -1, 2] {
                    for k in 1..=top {
                        checked += 1;
                        let image = psi(&hall, i, l, &lambda_poly(k as usize))?;
                        let ok = image.to_integral().ok().is_some_and(|z| z == partition_rhs(n, k, i, l).expect("l is nonzero") && z.terms.len() == partitions(k).len());
                        if !ok {
                            failures.push(format!("Psi_{{{i},{l}}}(Lambda_{k}) = {image}"));
                        }
                    }
                }
            }
            let text = format!("{checked} checks, {} failed", failures.len());
            let doc = json!({"checked": checked.to_string(), "failures": failures});
            if !failures.is_empty() {
                return Err(Failure::Verification(format!("{text}: {}", failures.join("; "))));
            }
            Ok((doc, text))
        }
        Command::ModpBasis { kind } => {
            let n = ctx.need_n()?;
            let (m, w) = (ctx.modp()?, ctx.window()?);
            let kind = HKind::from_str(kind)?;
            let basis = enumerate_basis(n, kind, m, w)?;
            let text = basis.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n");
            let doc = json!({"kind": kind.as_str(), "window": w.to_string(), "count": basis.len().to_string(), "elements": list(&basis, js::hyper_to_json)});
            Ok((doc, format!("{text}\n{} elements", basis.len())))
        }
        Command::ModpMember { x } => {
            let x = js::hyper_from_json(&document(x)?)?;
            let m = ctx.modp()?;
            let member = membership_h(&HyperAlgebra::new(x.n)?, &x, m)?;
            Ok((json!({"member": member}), member.to_string()))
        }
        Command::LittleBasis { kind } => {
            let n = ctx.need_n()?;
            let r = ctx.r.ok_or_else(|| contract("--r is required"))?;
            let (m, w) = (ctx.modp()?, ctx.window()?);
            let kind = LittleKind::from_str(kind)?;
            let basis = little_inf_basis(n, kind, r, m, w)?;
            let elements = list(&basis, |e| json!({"matrix": js::matrix_to_json(&e.index.0), "index": js::vector_to_json(&e.index.1), "value": js::schur_to_json(&e.value)}));
            let text = basis.iter().map(|e| format!("{}: {}", e.index.0.add_diag(&e.index.1), e.value)).collect::<Vec<_>>().join("\n");
            Ok((json!({"kind": kind.as_str(), "window": w.to_string(), "count": basis.len().to_string(), "elements": elements}), format!("{text}\n{} elements", basis.len())))
        }
        Command::KMul { x, y } => {
            let mut x = js::k_from_json(&document(x)?)?;
            let mut y = js::k_from_json(&document(y)?)?;
            if let Some(r) = ring {
                (x, y) = (x.change_ring(r)?, y.change_ring(r)?);
            }
            let z = KAlgebra::new(x.n)?.k_mul(&x, &y)?;
            Ok((js::k_to_json(&z), z.to_string()))
        }
        Command::KbarMul { x, y } => {
            let x = js::kbar_from_json(&document(x)?)?;
            let y = js::kbar_from_json(&document(y)?)?;
            let z = kbar_mul(&KAlgebra::new(x.n)?, &x, &y)?;
            Ok((js::kbar_to_json(&z), z.to_string()))
        }
        Command::Phi { x } => {
            let x = js::hyper_from_json(&document(x)?)?;
            let z = phi_h(&HyperAlgebra::new(x.n)?, &x, ctx.modp()?)?;
            Ok((js::kbar_to_json(&z), z.to_string()))
        }
        Command::Verify { suite } => {
            let id = verify::suite_id(suite).ok_or_else(|| {
                let names: Vec<&str> = SUITES.iter().map(|s| s.1).collect();
                contract(format!("unknown suite {suite:?}; expected one of {}", names.join(", ")))
            })?;
            if let Some(n) = ctx.n {
                if n < 2 {
                    return Err(contract(format!("precondition violated: rank n must be at least 2, got {n}")));
                }
            }
            let mut opts = VerifyOptions { n: ctx.n, r: ctx.r, ..VerifyOptions::default() };
            if let Some(s) = ctx.seed {
                opts.seed = s;
            }
            let report = verify::run(id, opts)?;
            let doc = json!({
                "suite": report.name,
                "checks": report.statement,
                "seed": opts.seed.to_string(),
                "cases": report.checks.to_string(),
                "failed": report.failed.to_string(),
                "failures": report.failures,
                "notes": report.notes,
                "passed": report.passed(),
            });
            if !report.passed() {
                return Err(Failure::Verification(format!("{report}")));
            }
            Ok((doc, report.to_string()))
        }
        Command::Independence { family } => {
            let n = ctx.need_n()?;
            let m = ctx.modp()?;
            let doc = document(family)?;
            let items = doc.as_array().ok_or_else(|| contract("malformed input: family must be an array of {\"matrix\", \"lambda\"} objects"))?;
            let mut keys: Vec<HKey> = Vec::new();
            for it in items {
                let a = js::matrix_from_json(it.get("matrix").ok_or_else(|| contract("malformed input: missing field \"matrix\""))?)?;
                let l = js::vector_from_json(it.get("lambda").ok_or_else(|| contract("malformed input: missing field \"lambda\""))?)?;
                keys.push((a, l));
            }
            let r = independence_check(n, &keys, m.p)?;
            let doc = json!({"size": r.size.to_string(), "rank": r.rank.to_string(), "max_degree": r.max_degree.to_string(), "independent": r.independent});
            Ok((doc, format!("rank {} of {} (degrees up to {}): {}", r.rank, r.size, r.max_degree, if r.independent { "independent" } else { "dependent" })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, text)) => {
            match cli.ctx.format {
                Format::Json => println!("{}", js::to_string(&doc)),
                Format::Text => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Contract(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
    }
}
