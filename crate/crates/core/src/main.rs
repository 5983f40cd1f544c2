use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use hquat::ahmod::{fingerprint, is_stable, random_stable, u_linear, x_q, y_module, AHModule, AHMorphism, AhError};
use hquat::exactq::{Quaternion, Rational, Subspace};
use hquat::fueter::{delta_split, fueter_kernel, invariant_grades};
use hquat::halg::{axiom_a_check, free_algebra_weighted, hl_from_lie, ideal_from_generators, poisson_on_free, quotient_algebra, CheckReport};
use hquat::halg::{GradedAlgebra, HalgError, IdealData, LieAlgebra};
use hquat::qtensor::{alt_power, check_sequence, qtensor, sym_power, tensor_morphism, Budget, EmbeddedModule, QtError, DEFAULT_BUDGET};
use hquat::variety::{eh_family, eh_generator, eh_j, is_singular_at, jacobian_rank, membership, Lambda, VarietyError};

mod suite;

#[derive(Parser)]
#[command(name = "hquat", version, about = "Exact computations with augmented quaternionic modules and H-algebras")]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest real dimension of any tensor ambient.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Include the wall-clock runtime in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions and isomorphism fingerprint of a module.
    Module {
        #[arg(long)]
        module: String,
    },
    /// Quaternionic tensor product of two modules.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Symmetric or alternating power.
    Power {
        #[arg(long)]
        module: String,
        #[arg(long, conflicts_with = "alt", required_unless_present = "alt")]
        sym: bool,
        #[arg(long)]
        alt: bool,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Probabilistic stability test.
    Stability {
        #[arg(long)]
        module: String,
        /// Number of random probe directions on top of the canonical ones.
        #[arg(long, default_value_t = 20)]
        random: usize,
    },
    /// Exactness of a sequence, optionally after tensoring with a module.
    Exactness {
        /// Sequence file; the built-in counterexample when absent.
        #[arg(long)]
        sequence: Option<String>,
        /// Module to tensor the sequence with; defaults to the last module for the built-in example.
        #[arg(long)]
        with: Option<String>,
    },
    /// Free algebra on a module, truncated at grade K.
    Free {
        #[arg(long)]
        gen: String,
        #[arg(short = 'K')]
        k: usize,
        #[arg(long, default_value_t = 1)]
        weight: usize,
    },
    /// Graded ideal generated inside a free algebra.
    Ideal(IdealArgs),
    /// Quotient of a free algebra by a generated ideal.
    Quotient(IdealArgs),
    /// Bracket axioms for the algebra built from a Lie algebra.
    Hl {
        /// `so3`, `solvable2` or a structure-constants file.
        #[arg(long)]
        lie: String,
        #[arg(short = 'K', default_value_t = 3)]
        k: usize,
    },
    /// Varieties cut out by generators.
    Variety {
        #[command(subcommand)]
        command: VarietyCommand,
    },
    /// Regular functions on H.
    Fueter {
        #[command(subcommand)]
        command: FueterCommand,
    },
    /// Run the full check battery.
    Suite,
}

#[derive(Args)]
struct IdealArgs {
    #[arg(long)]
    gen: String,
    #[arg(short = 'K')]
    k: usize,
    #[arg(long, default_value_t = 1)]
    weight: usize,
    /// `POWER,FILE` with a subspace of that power's ambient, or `eh` for the Eguchi–Hanson generators.
    #[arg(long)]
    gens: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Eh,
}

#[derive(Subcommand)]
enum VarietyCommand {
    /// Real equations of the family member.
    Emit {
        #[arg(long, value_enum)]
        family: Family,
        /// `a11,a22,a12,a23,a31`; `a33 = -a11 - a22`.
        #[arg(long)]
        lambda: String,
    },
    /// Exact membership and Jacobian rank at a point.
    Member {
        #[arg(long, value_enum, default_value = "eh")]
        family: Family,
        #[arg(long, default_value = "0,0,0,0,0")]
        lambda: String,
        /// Nine coordinates: the components of v1, v2, v3.
        #[arg(long)]
        point: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuotientKind {
    Z2,
}

#[derive(Subcommand)]
enum FueterCommand {
    /// Dimension of the kernel on homogeneous polynomials of degree k.
    Dim {
        #[arg(short = 'k')]
        k: usize,
    },
    /// Invariant kernel dimensions by degree.
    Grades {
        #[arg(long, value_enum)]
        quotient: QuotientKind,
        #[arg(short = 'K')]
        k: usize,
    },
    /// Eigenspaces of I1⊗I1 + I2⊗I2 + I3⊗I3 on 2-forms on H^n.
    Delta {
        #[arg(short = 'n')]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    UsageError,
    BudgetExceeded,
    InvariantViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Diagnostic {
    kind: String,
    message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Report {
    command: Vec<String>,
    /// Input argument to SHA-256 of the file, or `builtin`.
    inputs: BTreeMap<String, String>,
    seed: u64,
    budget: usize,
    status: Status,
    result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<Diagnostic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u64>,
}

enum CliError {
    Usage(String),
    Budget(String),
    Invariant { kind: &'static str, message: String },
}

impl From<QtError> for CliError {
    fn from(e: QtError) -> Self {
        match e {
            QtError::Budget { .. } => CliError::Budget(e.to_string()),
            QtError::Ah(a) => a.into(),
            other => CliError::Invariant { kind: "qtensor", message: other.to_string() },
        }
    }
}

impl From<AhError> for CliError {
    fn from(e: AhError) -> Self {
        match e {
            AhError::BadParameters(_) | AhError::InvalidProbe(_) | AhError::Dimension { .. } => CliError::Usage(e.to_string()),
            other => CliError::Invariant { kind: "ahmod", message: other.to_string() },
        }
    }
}

impl From<HalgError> for CliError {
    fn from(e: HalgError) -> Self {
        match e {
            HalgError::Qt(q) => q.into(),
            HalgError::Ah(a) => a.into(),
            HalgError::Lie(_) | HalgError::BadGrade(_) | HalgError::NotSubmodule => CliError::Usage(e.to_string()),
            other => CliError::Invariant { kind: "halg", message: other.to_string() },
        }
    }
}

impl From<VarietyError> for CliError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::Qt(q) => q.into(),
            VarietyError::Halg(h) => h.into(),
            VarietyError::Ah(a) => a.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// A result payload and the names of failed checks.
struct Outcome {
    result: Value,
    failures: Vec<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, failures: Vec::new() }
    }

    fn checked(result: Value, reports: &[&CheckReport]) -> Self {
        let failures = reports.iter().flat_map(|r| r.failures()).map(|c| c.name.clone()).collect();
        Outcome { result, failures }
    }
}

struct Ctx {
    seed: u64,
    budget: Budget,
    inputs: BTreeMap<String, String>,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Ctx {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(path.to_string(), digest);
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{path}: not UTF-8")))
    }

    fn parse_file<T: serde::de::DeserializeOwned>(&mut self, path: &str) -> Result<T, CliError> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }

    fn builtin(&mut self, name: &str) {
        self.inputs.insert(name.to_string(), "builtin".to_string());
    }

    /// A module from a file, or one of `h`, `y`, `u_linear`, `eh`, `x:a,b,c`, `random:j,r`.
    fn module(&mut self, spec: &str) -> Result<AHModule, CliError> {
        if Path::new(spec).is_file() {
            return self.parse_file(spec);
        }
        let m = match spec {
            "h" => AHModule::h(),
            "y" => y_module(),
            "u_linear" => u_linear(),
            "eh" => eh_generator(),
            _ => {
                if let Some(rest) = spec.strip_prefix("x:") {
                    let v = parse_rationals(rest, 3)?;
                    x_q(&Quaternion::new(Rational::zero(), v[0].clone(), v[1].clone(), v[2].clone()))?
                } else if let Some(rest) = spec.strip_prefix("random:") {
                    let v = parse_ints(rest, 2)?;
                    random_stable(v[0], v[1], self.seed)?
                } else {
                    return Err(CliError::Usage(format!("{spec}: no such file or built-in module")));
                }
            }
        };
        self.builtin(spec);
        Ok(m)
    }
}

fn parse_rationals(s: &str, n: usize) -> Result<Vec<Rational>, CliError> {
    let v = s.split(',').map(|x| x.parse::<Rational>().map_err(|e| CliError::Usage(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(CliError::Usage(format!("expected {n} comma-separated values, got {}", v.len())));
    }
    Ok(v)
}

fn parse_ints(s: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let v = s.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("{x}: {e}")))).collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(CliError::Usage(format!("expected {n} comma-separated integers, got {}", v.len())));
    }
    Ok(v)
}

fn parse_lambda(s: &str) -> Result<Lambda, CliError> {
    let v = parse_rationals(s, 5)?;
    let [a11, a22, a12, a23, a31]: [Rational; 5] = v.try_into().expect("five values");
    Ok(Lambda::new(a11, a22, a12, a23, a31))
}

fn embedded_summary(e: &EmbeddedModule) -> Value {
    json!({
        "dims": e.dims(),
        "virtual_dim": e.virtual_dim(),
        "fingerprint": e.fingerprint(),
        "module": e.base(),
    })
}

fn grade_dims(alg: &GradedAlgebra) -> Value {
    let w = alg.weight();
    to_json(&alg.dims().iter().enumerate().map(|(k, d)| json!({"grade": w * k, "dims": d})).collect::<Vec<_>>())
}

/// A sequence file: the modules `M_1..M_{k+1}` and the coefficient matrices of `f_i : M_i -> M_{i+1}`.
#[derive(Deserialize)]
struct SequenceFile {
    modules: Vec<AHModule>,
    maps: Vec<Vec<Vec<Quaternion>>>,
}

fn builtin_sequence() -> Result<Vec<AHMorphism>, CliError> {
    let ints = |v: [i64; 8]| v.map(Rational::from_int).to_vec();
    let u = AHModule::new(1, Subspace::zero(4))?;
    let v = AHModule::new(2, Subspace::span_dense(8, &[ints([1, 0, 0, 0, 0, 1, 0, 0]), ints([1, 0, 0, 0, 0, 0, 1, 0])]))?;
    let w = AHModule::new(1, Subspace::span_owned(4, [hquat::exactq::SparseVec::unit(1), hquat::exactq::SparseVec::unit(2)]))?;
    let (one, zero) = (Quaternion::one(), Quaternion::zero());
    Ok(vec![AHMorphism::new(u, v.clone(), vec![vec![one.clone(), zero.clone()]])?, AHMorphism::new(v, w, vec![vec![zero], vec![one]])?])
}

fn ideal_data(args: &IdealArgs, ctx: &mut Ctx) -> Result<(GradedAlgebra, IdealData), CliError> {
    let q = ctx.module(&args.gen)?;
    let alg = free_algebra_weighted(&q, args.weight, args.k, ctx.budget)?;
    let (g0, j) = if args.gens == "eh" {
        ctx.builtin("eh");
        if q != eh_generator() {
            return Err(CliError::Usage("--gens eh needs --gen eh".into()));
        }
        (2, eh_j(ctx.budget)?)
    } else {
        let (g, path) = args.gens.split_once(',').ok_or_else(|| CliError::Usage("--gens expects POWER,FILE".into()))?;
        let g = g.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("{g}: {e}")))?;
        let j: Subspace = ctx.parse_file(path)?;
        (g, j)
    };
    let ideal = ideal_from_generators(&alg, g0, &j, ctx.budget)?;
    Ok((alg, ideal))
}

fn run_variety(cmd: &VarietyCommand, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match cmd {
        VarietyCommand::Emit { family: Family::Eh, lambda } => {
            let l = parse_lambda(lambda)?;
            let fam = eh_family(&l, 4, ctx.budget)?;
            let names = |a: usize| format!("v{}_{}", a / 3 + 1, a % 3 + 1);
            let result = json!({
                "family": "eh",
                "lambda": l.matrix(),
                "case": l.case(),
                "variables": (0..9).map(names).collect::<Vec<_>>(),
                "equations": fam.system.render(&names),
                "coefficients": fam.system.real_equations,
                "checks": fam.checks,
            });
            Ok(Outcome::checked(result, &[&fam.checks]))
        }
        VarietyCommand::Member { family: Family::Eh, lambda, point } => {
            let l = parse_lambda(lambda)?;
            let p = parse_rationals(point, 9)?;
            let sys = eh_family(&l, 4, ctx.budget)?.system;
            let member = membership(&sys, &p);
            let mut result = json!({"family": "eh", "lambda": l.matrix(), "point": p, "member": member});
            if member {
                result["jacobian_rank"] = json!(jacobian_rank(&sys, &p));
                result["equations_rank"] = json!(sys.real_equations.dim());
                result["singular"] = json!(is_singular_at(&sys, &p));
            }
            Ok(Outcome::ok(result))
        }
    }
}

fn run_fueter(cmd: &FueterCommand) -> Outcome {
    match *cmd {
        FueterCommand::Dim { k } => {
            let fk = fueter_kernel(k);
            Outcome::ok(json!({"k": k, "dim": fk.dim(), "dims": fk.dims()}))
        }
        FueterCommand::Grades { quotient: QuotientKind::Z2, k } => Outcome::ok(json!({"quotient": "z2", "K": k, "grades": invariant_grades(k)})),
        FueterCommand::Delta { n } => {
            let d = delta_split(n);
            let failures = if d.identity_holds { Vec::new() } else { vec!["delta_identity".to_string()] };
            Outcome { result: to_json(&d), failures }
        }
    }
}

fn run(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let budget = ctx.budget;
    match cmd {
        Command::Module { module } => {
            let m = ctx.module(module)?;
            Ok(Outcome::ok(json!({"dims": m.dims(), "virtual_dim": m.virtual_dim(), "fingerprint": fingerprint(&m), "module": m})))
        }
        Command::Tensor { left, right } => {
            let (u, v) = (ctx.module(left)?, ctx.module(right)?);
            let t = qtensor(&u, &v, budget)?;
            let mut result = embedded_summary(&t);
            result["left_dims"] = json!(u.dims());
            result["right_dims"] = json!(v.dims());
            Ok(Outcome::ok(result))
        }
        Command::Power { module, sym, k, .. } => {
            let u = ctx.module(module)?;
            let p = if *sym { sym_power(&u, *k, budget)? } else { alt_power(&u, *k, budget)? };
            let mut result = embedded_summary(&p);
            result["kind"] = json!(if *sym { "sym" } else { "alt" });
            result["k"] = json!(k);
            Ok(Outcome::ok(result))
        }
        Command::Stability { module, random } => {
            let u = ctx.module(module)?;
            let rep = is_stable(&u, &hquat::ahmod::canonical_probes(), *random, ctx.seed)?;
            Ok(Outcome::ok(to_json(&rep)))
        }
        Command::Exactness { sequence, with } => {
            let fs = match sequence {
                Some(path) => {
                    let file: SequenceFile = ctx.parse_file(path)?;
                    if file.modules.len() != file.maps.len() + 1 {
                        return Err(CliError::Usage("a sequence of k maps needs k + 1 modules".into()));
                    }
                    file.maps
                        .into_iter()
                        .enumerate()
                        .map(|(i, c)| AHMorphism::new(file.modules[i].clone(), file.modules[i + 1].clone(), c))
                        .collect::<Result<Vec<_>, _>>()?
                }
                None => {
                    ctx.builtin("counterexample");
                    builtin_sequence()?
                }
            };
            let base = check_sequence(&fs)?;
            let z = match (with, sequence) {
                (Some(spec), _) => Some(ctx.module(spec)?),
                (None, None) => fs.last().map(|f| f.target().clone()),
                (None, Some(_)) => None,
            };
            let mut result = json!({"sequence": base, "exact": base.ah_exact()});
            if let Some(z) = z {
                let id = AHMorphism::identity(&z);
                let tensored = fs.iter().map(|f| tensor_morphism(f, &id, budget)).collect::<Result<Vec<_>, _>>()?;
                let rep = check_sequence(&tensored)?;
                result["tensored"] = json!({
                    "with_dims": z.dims(),
                    "sequence": rep,
                    "dims": rep.dims(),
                    "exact": rep.ah_exact(),
                    "first_failure": rep.first_failure(),
                });
            }
            Ok(Outcome::ok(result))
        }
        Command::Free { gen, k, weight } => {
            let q = ctx.module(gen)?;
            let alg = free_algebra_weighted(&q, *weight, *k, budget)?;
            let axioms = axiom_a_check(&alg, budget)?;
            let result = json!({"generator_dims": q.dims(), "weight": weight, "grades": grade_dims(&alg), "axioms": axioms});
            Ok(Outcome::checked(result, &[&axioms]))
        }
        Command::Ideal(args) => {
            let (alg, ideal) = ideal_data(args, ctx)?;
            let w = alg.weight();
            let grades: Vec<Value> = ideal.dims().iter().zip(&ideal.iterated_dims).enumerate().map(|(k, (d, it))| json!({"grade": w * k, "dims": d, "iterated_dim": it})).collect();
            let result = json!({
                "generator_grade": w * ideal.g0,
                "generators_dims": ideal.generators.dims(),
                "grades": grades,
                "candidates_agree": ideal.candidates_agree(),
                "checks": ideal.checks,
            });
            Ok(Outcome::checked(result, &[&ideal.checks]))
        }
        Command::Quotient(args) => {
            let (alg, ideal) = ideal_data(args, ctx)?;
            let quot = quotient_algebra(&alg, &ideal, budget)?;
            let mut failures: Vec<String> = quot.exactness.iter().filter(|e| !e.exact).map(|e| format!("exactness({})", e.grade)).collect();
            failures.extend(ideal.checks.failures().iter().map(|c| c.name.clone()));
            let result = json!({"parent": grade_dims(&alg), "quotient": grade_dims(&quot.algebra), "exactness": quot.exactness});
            Ok(Outcome { result, failures })
        }
        Command::Hl { lie, k } => {
            let g = match lie.as_str() {
                "so3" if !Path::new(lie).is_file() => {
                    ctx.builtin(lie);
                    LieAlgebra::so3()
                }
                "solvable2" if !Path::new(lie).is_file() => {
                    ctx.builtin(lie);
                    LieAlgebra::solvable2()
                }
                path => ctx.parse_file(path)?,
            };
            let hl = hl_from_lie(&g, budget)?;
            let axioms = hl.axioms(budget)?;
            let poisson = poisson_on_free(&hl, *k, budget)?;
            let result = json!({
                "lie_dim": g.dim(),
                "carrier_dims": hl.carrier.dims(),
                "bracket_source_dims": hl.xi.source().dims(),
                "axioms": axioms,
                "poisson": poisson.checks,
            });
            Ok(Outcome::checked(result, &[&axioms, &poisson.checks]))
        }
        Command::Variety { command } => run_variety(command, ctx),
        Command::Fueter { command } => Ok(run_fueter(command)),
        Command::Suite => {
            let items = suite::run(ctx.seed, budget);
            let failures = items.iter().filter(|i| !i.passed).map(|i| i.name.clone()).collect();
            Ok(Outcome { result: json!({"items": items}), failures })
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut ctx = Ctx { seed: cli.seed, budget: Budget(cli.budget), inputs: BTreeMap::new() };
    let (status, result, error, code) = match run(&cli.command, &mut ctx) {
        Ok(Outcome { result, failures }) if failures.is_empty() => (Status::Ok, result, None, 0),
        Ok(Outcome { result, failures }) => {
            let d = Diagnostic { kind: "check_failed".into(), message: format!("{} check(s) failed", failures.len()), failures };
            (Status::InvariantViolation, result, Some(d), 4)
        }
        Err(CliError::Usage(m)) => (Status::UsageError, Value::Null, Some(Diagnostic { kind: "usage".into(), message: m, failures: Vec::new() }), 2),
        Err(CliError::Budget(m)) => (Status::BudgetExceeded, Value::Null, Some(Diagnostic { kind: "budget".into(), message: m, failures: Vec::new() }), 3),
        Err(CliError::Invariant { kind, message }) => {
            (Status::InvariantViolation, Value::Null, Some(Diagnostic { kind: kind.into(), message, failures: Vec::new() }), 4)
        }
    };
    let report = Report {
        command: argv[1..].to_vec(),
        inputs: ctx.inputs,
        seed: cli.seed,
        budget: cli.budget,
        status,
        result,
        error,
        runtime_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::from(code)
}
