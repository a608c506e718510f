//! `greenpres`: Green's relations and their linear preservers from the shell.
//!
//! Exit status is 0 for true or success, 1 for a false verdict and 2 for
//! usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greenpres::census::census;
use greenpres::green::{count_rank_matrices, pencil_lambda_set, rank_sum_decompose};
use greenpres::operator::{
    construct_botta, construct_division_algebra, construct_petrovic, first_column_operator, op_column_functional, op_regular,
    op_two_sided, Side,
};
use greenpres::sampling::DEFAULT_BOUND;
use greenpres::{
    classify_bijective_rank1, classify_h_preserver, classify_j_preserver, classify_l_preserver, classify_r_preserver, preserves,
    preserves_set, strongly_preserves, Error, FieldSpec, GreenRelation, LinearOperator, Matrix, MatrixSet, Polynomial, Strategy,
    Verdict,
};

#[derive(Parser)]
#[command(name = "greenpres", version, about = "Green's relations on matrices and their linear preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test A ≡ B for an equivalence L, R, H or J.
    Relate {
        #[arg(long)]
        rel: GreenRelation,
        a: PathBuf,
        b: PathBuf,
    },
    /// Test A ≤ B for a pre-order (L, R, H, J or leqL, ...).
    Leq {
        #[arg(long)]
        rel: GreenRelation,
        a: PathBuf,
        b: PathBuf,
    },
    /// Check that an operator preserves a relation or a set.
    Verify(VerifyArgs),
    /// Check strong preservation of an equivalence.
    VerifyStrong(VerifyArgs),
    /// Classify a preserver into a canonical form.
    Classify {
        #[arg(long)]
        target: Target,
        #[arg(long)]
        op: PathBuf,
    },
    /// Build an operator from one of the preserver families.
    Construct(ConstructArgs),
    /// Split A into two matrices of rank k.
    Decompose {
        #[arg(long)]
        k: usize,
        a: PathBuf,
    },
    /// Number of n×n matrices of rank r over GF(q).
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
    },
    /// Scalars λ with rank(A + λB) = r.
    Pencil {
        #[arg(long)]
        r: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Tally every operator on M_n over a tiny field and check the theorems.
    Census {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "set", required_unless_present = "set")]
    rel: Option<GreenRelation>,
    #[arg(long)]
    set: Option<MatrixSet>,
    #[arg(long)]
    op: PathBuf,
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long, requires = "seed")]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    #[value(name = "L")]
    L,
    #[value(name = "R")]
    R,
    #[value(name = "H")]
    H,
    #[value(name = "J")]
    J,
    #[value(name = "rank1")]
    Rank1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    TwoSided,
    Regular,
    Column,
    Petrovic,
    Botta,
    Divalg,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    kind: Kind,
    /// P for two-sided and regular forms.
    #[arg(long)]
    p: Option<PathBuf>,
    /// Q for the two-sided form.
    #[arg(long)]
    q: Option<PathBuf>,
    /// X for regular forms, or the 1×n row vector x for column forms.
    #[arg(long)]
    x: Option<PathBuf>,
    /// The matrices C_1, …, C_n of a column form, in order.
    #[arg(long = "c")]
    c: Vec<PathBuf>,
    #[arg(long)]
    side: Option<String>,
    #[arg(long)]
    transposed: bool,
    /// Size for the Petrović construction.
    #[arg(long)]
    n: Option<usize>,
    /// Dimension 2, 4 or 8 of the division algebra.
    #[arg(long)]
    d: Option<usize>,
    /// Field for Petrović, Botta and division-algebra constructions.
    #[arg(long, default_value = "q")]
    field: FieldSpec,
    /// Polynomial coefficients from the constant term up, e.g. "1 1 1".
    #[arg(long)]
    poly: Option<String>,
    /// Emit the `operator-images` form.
    #[arg(long)]
    images: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

fn read_matrix(path: &Path) -> Result<Matrix, Error> {
    read(path)?.parse()
}

fn read_operator(path: &Path) -> Result<LinearOperator, Error> {
    read(path)?.parse()
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, Error> {
    v.as_ref().ok_or_else(|| Error::InvalidArgument(format!("--{} is required for this kind", flag)))
}

fn verdict_exit(v: &Verdict) -> ExitCode {
    let mut out = String::new();
    if v.holds {
        out.push_str("holds\n");
        if matches!(v.strategy, Strategy::Sampled { .. }) {
            out.push_str("note sampled evidence, not a proof\n");
        }
    } else {
        out.push_str("fails\n");
    }
    out.push_str(&format!("strategy {}\nchecked {}\n", v.strategy, v.checked));
    if let Some((a, b)) = &v.witness {
        out.push_str("witness\n");
        out.push_str(&a.to_string());
        out.push_str(&b.to_string());
    }
    print!("{}", out);
    if v.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn bool_exit(b: bool) -> ExitCode {
    println!("{}", b);
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn strategy(args: &VerifyArgs) -> Strategy {
    match (args.exhaustive, args.samples) {
        (_, Some(trials)) => Strategy::Sampled { trials, seed: args.seed.unwrap_or(0), bound: args.bound },
        _ => Strategy::Exhaustive,
    }
}

fn construct(args: &ConstructArgs) -> Result<LinearOperator, Error> {
    let matrix = |p: &Option<PathBuf>, flag: &str| read_matrix(required(p, flag)?);
    match args.kind {
        Kind::TwoSided => op_two_sided(&matrix(&args.p, "p")?, &matrix(&args.q, "q")?, args.transposed),
        Kind::Regular => {
            let side: Side = required(&args.side, "side")?.parse()?;
            op_regular(side, &matrix(&args.p, "p")?, &matrix(&args.x, "x")?)
        }
        Kind::Column => {
            let x = matrix(&args.x, "x")?;
            if x.rows() != 1 {
                return Err(Error::InvalidArgument("x must be a 1×n matrix".into()));
            }
            let c = args.c.iter().map(|p| read_matrix(p)).collect::<Result<Vec<_>, _>>()?;
            op_column_functional(x.row(0), &c, args.transposed)
        }
        Kind::Petrovic => construct_petrovic(*required(&args.n, "n")?, args.field),
        Kind::Botta => {
            let coeffs = required(&args.poly, "poly")?
                .split_whitespace()
                .map(|t| args.field.parse_element(t))
                .collect::<Result<Vec<_>, _>>()?;
            construct_botta(&Polynomial::new(args.field, coeffs)?)
        }
        Kind::Divalg => first_column_operator(&construct_division_algebra(*required(&args.d, "d")?, args.field)?),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    Ok(match cli.command {
        Command::Relate { rel, a, b } => {
            if !rel.is_equivalence() {
                return Err(Error::InvalidArgument(format!("{} is not an equivalence; use `leq`", rel)));
            }
            bool_exit(rel.holds(&read_matrix(&a)?, &read_matrix(&b)?)?)
        }
        Command::Leq { rel, a, b } => bool_exit(rel.preorder().holds(&read_matrix(&a)?, &read_matrix(&b)?)?),
        Command::Verify(args) => {
            let t = read_operator(&args.op)?;
            let s = strategy(&args);
            let v = match (args.rel, args.set) {
                (Some(rel), _) => preserves(&t, rel, s)?,
                (None, Some(set)) => preserves_set(&t, set, s)?,
                (None, None) => return Err(Error::InvalidArgument("one of --rel or --set is required".into())),
            };
            verdict_exit(&v)
        }
        Command::VerifyStrong(args) => {
            let t = read_operator(&args.op)?;
            let rel = *required(&args.rel, "rel")?;
            verdict_exit(&strongly_preserves(&t, rel, strategy(&args))?)
        }
        Command::Classify { target, op } => {
            let t = read_operator(&op)?;
            let form = match target {
                Target::L => classify_l_preserver(&t)?.0,
                Target::R => classify_r_preserver(&t)?,
                Target::H => classify_h_preserver(&t)?,
                Target::J => classify_j_preserver(&t)?,
                Target::Rank1 => classify_bijective_rank1(&t)?,
            };
            print!("{}", form);
            ExitCode::SUCCESS
        }
        Command::Construct(args) => {
            let t = construct(&args)?;
            let text = if args.images { t.to_images_string() } else { t.to_string() };
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {}", path.display(), e)))?,
                None => print!("{}", text),
            }
            ExitCode::SUCCESS
        }
        Command::Decompose { k, a } => {
            let (b, c) = rank_sum_decompose(&read_matrix(&a)?, k)?;
            print!("{}{}", b, c);
            ExitCode::SUCCESS
        }
        Command::Count { n, q, r } => {
            println!("{}", count_rank_matrices(n, q, r)?);
            ExitCode::SUCCESS
        }
        Command::Pencil { r, a, b } => {
            let set = pencil_lambda_set(&read_matrix(&a)?, &read_matrix(&b)?, r)?;
            let line: Vec<String> = set.iter().map(ToString::to_string).collect();
            println!("{}", line.join(" "));
            ExitCode::SUCCESS
        }
        Command::Census { field, n } => {
            let report = census(field, n)?;
            print!("{}", report);
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
