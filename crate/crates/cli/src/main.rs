//! Batch command-line front end: evaluation of framed (singular) links over
//! truncated rings, Vassiliev coefficient extraction, tortile axiom checks,
//! deformation cohomology, obstruction-driven extension, and the braiding
//! round trip, all over flat files.
//!
//! Exit codes: 0 success/pass, 1 property failure (with witnesses printed),
//! 2 input or validation error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tortile::defcomplex::{
    cohomology_dims, format_deformation, parse_deformation, ExtendOutcome,
};
use tortile::invariants::{
    check_disjoint_union, evaluate, normalized_value, vassiliev_coeff, verify_type_bound,
    InvariantError,
};
use tortile::ribbon::TortileObjectData;
use tortile::skeletal::{FunctorPresentation, SkeletalPresentation};
use tortile::tangles::{BraidWord, MorseDiagram};
use tortile::{Field, FieldElem};

#[derive(Parser)]
#[command(name = "tortile", version, about = "Quantum link invariants over truncated deformation rings and deformation cohomology of monoidal functors")]
struct Cli {
    /// Expected ground field (Q or Fp:<prime>); checked against every loaded artifact.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Expected truncation order; checked against every loaded artifact.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Line-oriented machine-readable output.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a framed (singular) link diagram against tortile data.
    Eval(EvalArgs),
    /// Print every Vassiliev coefficient of a closed diagram.
    Coeffs(DiagramArgs),
    /// Sweep singularization patterns and verify the type bound.
    VerifyType(VerifyTypeArgs),
    /// Run the exact axiom checks on a tortile datum.
    Axioms(DataArgs),
    /// Cohomology dimensions of a functor's deformation complex.
    Cohomology(CohomologyArgs),
    /// Extend a deformation order by order, or report the obstruction.
    Extend(ExtendArgs),
    /// Enumerate braidings and verify the multiplication round trip.
    BraidingRoundtrip(RoundtripArgs),
    /// Check multiplicativity and coefficient convolution under separated union.
    CheckDisjoint(DisjointArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Tortile data: `kauffman:<order>` or a data file path.
    #[arg(long)]
    data: String,
}

#[derive(Args)]
struct DiagramArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Braid input: inline text (`strands=..; word=..`) or a file path.
    #[arg(long)]
    braid: Option<String>,
    /// Morse diagram file path.
    #[arg(long)]
    morse: Option<PathBuf>,
    /// Identifier used in machine output (defaults to the file stem).
    #[arg(long)]
    id: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    diagram: DiagramArgs,
    /// Also print each Vassiliev coefficient.
    #[arg(long)]
    coeffs: bool,
    /// Also print the per-component normalized value.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct VerifyTypeArgs {
    #[command(flatten)]
    diagram: DiagramArgs,
    /// Largest number of singular slices to sweep.
    #[arg(long, default_value_t = 3)]
    max_singular: usize,
}

#[derive(Args)]
struct CohomologyArgs {
    /// Source presentation file.
    #[arg(long)]
    presentation: PathBuf,
    /// Target presentation file (defaults to the source).
    #[arg(long)]
    target: Option<PathBuf>,
    /// Functor file (defaults to the identity functor).
    #[arg(long)]
    functor: Option<PathBuf>,
    /// Comma-separated degrees, each at most 4.
    #[arg(long, default_value = "2,3")]
    degree: String,
    /// Restrict to the proper subcomplex.
    #[arg(long)]
    proper: bool,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long)]
    presentation: PathBuf,
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long)]
    functor: Option<PathBuf>,
    /// Deformation file to extend.
    #[arg(long)]
    deformation: PathBuf,
    /// Target order.
    #[arg(long)]
    to: usize,
    /// Treat the deformation as proper (solve in the proper subcomplex).
    #[arg(long)]
    proper: bool,
    /// Write the extended series here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long)]
    presentation: PathBuf,
    /// Candidate braiding values over Q (comma separated; ignored over Fp,
    /// where every nonzero residue is tried).
    #[arg(long, default_value = "1,-1")]
    candidates: String,
}

#[derive(Args)]
struct DisjointArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Left diagram: inline braid text or a braid/morse file path.
    #[arg(long)]
    left: String,
    /// Right diagram: inline braid text or a braid/morse file path.
    #[arg(long)]
    right: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(cli, args),
        Command::Coeffs(args) => cmd_coeffs(cli, args),
        Command::VerifyType(args) => cmd_verify_type(cli, args),
        Command::Axioms(args) => cmd_axioms(cli, args),
        Command::Cohomology(args) => cmd_cohomology(cli, args),
        Command::Extend(args) => cmd_extend(cli, args),
        Command::BraidingRoundtrip(args) => cmd_roundtrip(cli, args),
        Command::CheckDisjoint(args) => cmd_check_disjoint(cli, args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_data(cli: &Cli, source: &str) -> Result<TortileObjectData> {
    let data = if let Some(order) = source.strip_prefix("kauffman:") {
        let order: usize = order
            .parse()
            .map_err(|_| anyhow!("bad builtin order in `{source}`"))?;
        TortileObjectData::kauffman(order)?
    } else {
        TortileObjectData::parse(&read(Path::new(source))?)?
    };
    check_context(cli, data.ring().field, Some(data.order()))?;
    Ok(data)
}

fn check_context(cli: &Cli, field: Field, order: Option<usize>) -> Result<()> {
    if let Some(expected) = &cli.field {
        let expected = Field::parse(expected)?;
        if expected != field {
            bail!("artifact field {field} does not match --field {expected}");
        }
    }
    if let (Some(expected), Some(order)) = (cli.order, order) {
        if expected != order {
            bail!("artifact order {order} does not match --order {expected}");
        }
    }
    Ok(())
}

/// Inline braid text or a file ending in `.braid`/`.morse`.
fn load_diagram(text_or_path: &str) -> Result<(String, MorseDiagram)> {
    if text_or_path.contains("strands=") {
        let braid = BraidWord::parse(text_or_path)?;
        return Ok(("diagram".to_string(), braid.trace_closure()?));
    }
    let path = Path::new(text_or_path);
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "diagram".to_string());
    let text = read(path)?;
    let diagram = if text.contains("strands=") {
        BraidWord::parse(text.trim())?.trace_closure()?
    } else {
        MorseDiagram::parse(&text)?
    };
    Ok((id, diagram))
}

fn diagram_from_args(args: &DiagramArgs) -> Result<(String, MorseDiagram)> {
    let (id, diagram) = match (&args.braid, &args.morse) {
        (Some(braid), None) => load_diagram(braid)?,
        (None, Some(path)) => load_diagram(&path.to_string_lossy())?,
        _ => bail!("give exactly one of --braid or --morse"),
    };
    Ok((args.id.clone().unwrap_or(id), diagram))
}

fn print_header(cli: &Cli, field: Field, order: usize) {
    if cli.machine {
        println!("field {field}");
        println!("order {order}");
    } else {
        println!("# field={field} order={order}");
    }
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> Result<ExitCode> {
    let data = load_data(cli, &args.diagram.data.data)?;
    let (id, diagram) = diagram_from_args(&args.diagram)?;
    let value = evaluate(&diagram, &data)?;
    print_header(cli, data.ring().field, data.order());
    match value.scalar() {
        Some(s) => {
            if cli.machine {
                println!("eval {id} {s}");
            } else {
                println!("{s}");
            }
            if args.coeffs {
                for k in 0..=data.order() {
                    if cli.machine {
                        println!("{id} {k} {}", s.coeff(k));
                    } else {
                        println!("coeff {k}: {}", s.coeff(k));
                    }
                }
            }
            if args.normalize {
                let n = normalized_value(&diagram, &data)?;
                if cli.machine {
                    println!("normalized {id} {n}");
                } else {
                    println!("normalized: {n}");
                }
            }
        }
        None => {
            // Open diagram: print the full matrix.
            let m = &value.matrix;
            if !cli.machine {
                println!("# open diagram, matrix {}x{}", m.rows(), m.cols());
            }
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).to_string()).collect();
                println!("{}", row.join(" "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_coeffs(cli: &Cli, args: &DiagramArgs) -> Result<ExitCode> {
    let data = load_data(cli, &args.data.data)?;
    let (id, diagram) = diagram_from_args(args)?;
    print_header(cli, data.ring().field, data.order());
    for k in 0..=data.order() {
        let c = vassiliev_coeff(&diagram, &data, k)?;
        if cli.machine {
            println!("{id} {k} {c}");
        } else {
            println!("coeff {k}: {c}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn singularizable_positions(d: &MorseDiagram) -> Vec<usize> {
    use tortile::tangles::SliceKind::{CrNeg, CrPos, TwNeg, TwPos};
    d.slices()
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s.kind, CrPos | CrNeg | TwPos | TwNeg))
        .map(|(i, _)| i)
        .collect()
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn cmd_verify_type(cli: &Cli, args: &VerifyTypeArgs) -> Result<ExitCode> {
    let data = load_data(cli, &args.diagram.data.data)?;
    if !data.is_infinitesimally_symmetric() {
        bail!(
            "data fails the infinitesimal symmetry conditions \
             (c - c^-1 or theta - theta^-1 nonzero mod eps); \
             the type bound is not guaranteed and the sweep is refused"
        );
    }
    let (id, diagram) = diagram_from_args(&args.diagram)?;
    let positions = singularizable_positions(&diagram);
    print_header(cli, data.ring().field, data.order());
    let need = data.order() + 1;
    let mut failures = 0usize;
    for count in 1..=args.max_singular.min(positions.len()) {
        for combo in combinations(&positions, count) {
            let singular = diagram.singularize(&combo)?;
            let label: Vec<String> = combo.iter().map(|p| p.to_string()).collect();
            let label = format!("sing[{}]", label.join(","));
            if count >= need {
                let report = verify_type_bound(&singular, &data)?;
                let status = if report.passed { "PASS" } else { "FAIL" };
                if !report.passed {
                    failures += 1;
                }
                if cli.machine {
                    println!("{id} {label} {count} {status} {}", report.value);
                } else {
                    println!("{label} count={count} {status} value={}", report.value);
                }
            } else {
                let v = evaluate(&singular, &data)?;
                let s = v.scalar().ok_or(InvariantError::NotClosed)?;
                if cli.machine {
                    println!("{id} {label} {count} BELOW-BOUND {s}");
                } else {
                    println!("{label} count={count} below bound, value={s}");
                }
            }
        }
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_axioms(cli: &Cli, args: &DataArgs) -> Result<ExitCode> {
    let data = load_data(cli, &args.data)?;
    let report = data.check_axioms();
    print_header(cli, data.ring().field, data.order());
    for check in &report.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        match check.counterexample {
            Some((r, c)) if !check.pass => {
                println!("{} {status} witness entry ({r},{c})", check.axiom)
            }
            _ => println!("{} {status}", check.axiom),
        }
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_functor(
    cli: &Cli,
    presentation: &Path,
    target: &Option<PathBuf>,
    functor: &Option<PathBuf>,
) -> Result<Arc<FunctorPresentation>> {
    let source = SkeletalPresentation::parse(&read(presentation)?)?;
    source.validate()?;
    check_context(cli, source.field(), None)?;
    let target_p = match target {
        Some(path) => {
            let t = SkeletalPresentation::parse(&read(path)?)?;
            t.validate()?;
            t
        }
        None => source.clone(),
    };
    let f = match functor {
        Some(path) => FunctorPresentation::parse(&read(path)?, source, target_p)?,
        None => {
            if target.is_some() {
                bail!("--target without --functor has no meaning");
            }
            FunctorPresentation::identity(&source)?
        }
    };
    Ok(Arc::new(f))
}

fn cmd_cohomology(cli: &Cli, args: &CohomologyArgs) -> Result<ExitCode> {
    let f = load_functor(cli, &args.presentation, &args.target, &args.functor)?;
    let degrees = args
        .degree
        .split(',')
        .map(|d| d.trim().parse::<usize>().map_err(|_| anyhow!("bad degree `{d}`")))
        .collect::<Result<Vec<_>>>()?;
    for &d in &degrees {
        if d == 0 || d > 4 {
            bail!("degree {d} unsupported: the complex is materialized for degrees 1..=4");
        }
    }
    print_header(cli, f.field(), 0);
    for &d in &degrees {
        let dims = cohomology_dims(&f, d, args.proper)?;
        if cli.machine {
            println!(
                "H {d} {} {} {} {}",
                dims.cochain_dim, dims.kernel, dims.image_prev, dims.h_dim
            );
        } else {
            println!(
                "degree {d}: dim X = {}, dim ker = {}, dim im = {}, dim H = {}",
                dims.cochain_dim, dims.kernel, dims.image_prev, dims.h_dim
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_extend(cli: &Cli, args: &ExtendArgs) -> Result<ExitCode> {
    let f = load_functor(cli, &args.presentation, &args.target, &args.functor)?;
    let series = parse_deformation(&read(&args.deformation)?, &f, args.proper)?;
    series
        .check()
        .map_err(|e| anyhow!("input deformation rejected: {e}"))?;
    match series.extend_to(args.to)? {
        ExtendOutcome::Extended(extended) => {
            let text = format_deformation(&extended);
            match &args.out {
                Some(path) => {
                    fs::write(path, &text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    if !cli.machine {
                        println!("extended to order {} -> {}", args.to, path.display());
                    } else {
                        println!("extended {}", args.to);
                    }
                }
                None => {
                    if cli.machine {
                        println!("extended {}", args.to);
                    }
                    print!("{text}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        ExtendOutcome::Obstructed(class) => {
            println!(
                "obstructed at order {}: dim ker(delta_3) = {}, dim im(delta_2) = {}, dim H^3 = {}",
                class.at_order, class.kernel_dim, class.image_dim, class.h3_dim
            );
            let src = f.source();
            for (i, v) in class.representative.components().iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let tuple = class.representative.index_tuple(i);
                let names: Vec<&str> = tuple.iter().map(|&o| src.name(o)).collect();
                println!("obstruction {} -> {v}", names.join(" "));
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_roundtrip(cli: &Cli, args: &RoundtripArgs) -> Result<ExitCode> {
    let cat = SkeletalPresentation::parse(&read(&args.presentation)?)?;
    cat.validate()?;
    check_context(cli, cat.field(), None)?;
    let candidates: Vec<FieldElem> = match cat.field() {
        Field::Q => args
            .candidates
            .split(',')
            .map(|c| FieldElem::parse(c.trim(), Field::Q).map_err(Into::into))
            .collect::<Result<Vec<_>>>()?,
        Field::Fp(p) => (1..p).map(|v| FieldElem::from_int(v as i64, cat.field())).collect(),
    };
    let braidings = cat.enumerate_braidings(&candidates);
    if !cli.machine {
        println!("# {} hexagon-satisfying braidings", braidings.len());
    }
    let mut failures = 0usize;
    for (i, table) in braidings.iter().enumerate() {
        let mut braided = cat.clone();
        braided.set_braiding_table(table.clone());
        braided.validate()?;
        let mult = FunctorPresentation::mult_functor(&braided)?;
        let coherent = mult.check_functor_hexagon().is_empty();
        let recovered = mult.braiding_from_mult()?;
        let round_trip = recovered.as_slice() == table.as_slice();
        if !(coherent && round_trip) {
            failures += 1;
        }
        let values: Vec<String> = table.iter().map(|v| v.to_string()).collect();
        let status = if coherent && round_trip { "PASS" } else { "FAIL" };
        println!("braiding {i} [{}] {status}", values.join(","));
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check_disjoint(cli: &Cli, args: &DisjointArgs) -> Result<ExitCode> {
    let data = load_data(cli, &args.data.data)?;
    let (lid, left) = load_diagram(&args.left)?;
    let (rid, right) = load_diagram(&args.right)?;
    let report = check_disjoint_union(&left, &right, &data)?;
    print_header(cli, data.ring().field, data.order());
    println!(
        "union {lid}+{rid}: value={} product={} multiplicative={}",
        report.union_value, report.product_value, report.multiplicative
    );
    for row in &report.convolution {
        println!(
            "conv k={} union={} sum={} {}",
            row.k,
            row.union_coeff,
            row.convolved,
            if row.ok { "PASS" } else { "FAIL" }
        );
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
