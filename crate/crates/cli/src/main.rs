mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quord::dimension::{
    enumerate_halfspaces_with, hs_dimension_in, order_dimension_with, realizer_to_linear_extensions,
    realizer_to_linear_extensions_alt, HalfSpaceCatalog, Limits, Realizer, TransformSeeds,
};
use quord::extension::{linearize_halfspace, szpilrajn_extension, tighten_halfspace};
use quord::format::{parse_class_order, parse_permutation, parse_relation, write_relation_json, RelationDocument};
use quord::halfspace::{box_decomposition, complement_halfspace, halfspace_witness};
use quord::oracle::{enumerate_quasiorders, suite_aliases, suite_ids, theorem_replay_with_seed, DEFAULT_SEED};
use quord::product::{direct_product, lemma_witnesses, product_halfspace_predicate};
use quord::{Error, GroundSet, HalfSpace, LinearOrder, PartialOrder, Quasiorder, Relation};

use report::Report;

#[derive(Parser)]
#[command(name = "quord", version, about = "Finite quasiorders, half-spaces and order dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print which basic axioms a relation satisfies
    Classify { file: PathBuf },
    /// Run a predicate check (exit 0 when true, 1 when false)
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Print the box decomposition of a half-space
    Decompose { file: PathBuf },
    /// Print the complementary half-space
    Complement { file: PathBuf },
    /// Extend a partial order to a linear order
    Extend {
        file: PathBuf,
        /// Comma-separated element names fixing the order in which
        /// incomparable pairs are resolved (default: file order)
        #[arg(long)]
        seed: Option<String>,
    },
    /// Shrink a half-space above gamma so its symmetric part matches gamma's
    Tighten {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        alpha: PathBuf,
        /// Linear extension of gamma's quotient order, as element names
        /// (one per class at least; default: seeded extension in file order)
        #[arg(long)]
        r: Option<String>,
    },
    /// Extend an antisymmetric half-space by a linear order on its
    /// incomparable pairs
    Linearize {
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        /// Also linearize with the inverse order and check that the two
        /// results meet in alpha
        #[arg(long)]
        both: bool,
    },
    /// Order dimension of the quotient partial order (first line: the number)
    Dim { file: PathBuf },
    /// Half-space dimension (first line: the number)
    Hsdim { file: PathBuf },
    /// Turn a half-space realizer into linear extensions of the quotient order
    Transform {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        realizer: Vec<PathBuf>,
        /// Tie-breaking order on classes, as element names (default: file order)
        #[arg(long)]
        mu: Option<String>,
        /// Index of the part that receives the inverse tie-break
        #[arg(long, default_value_t = 0)]
        istar: usize,
        /// Use the first-comparison construction instead
        #[arg(long)]
        alt: bool,
    },
    /// Direct product of quasiorders and whether it is a half-space
    Product {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
        /// Only classify; do not build the product
        #[arg(long)]
        structural_only: bool,
        /// Reject identity and full factors instead of handling them
        #[arg(long)]
        strict_factors: bool,
    },
    /// Stream every quasiorder or half-space on N points, one JSON object per line
    Enumerate { kind: EnumerateKind, n: usize },
    /// Replay a verification suite (exit 1 on any failure)
    Oracle {
        #[arg(required_unless_present = "list")]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// List the registered suites
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Is the quasiorder a half-space?
    Halfspace { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateKind {
    Quasiorders,
    Halfspaces,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn limits() -> Result<Limits, Failure> {
    match std::env::var("QUORD_MAX_N") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Limits::uniform)
            .map_err(|_| invalid(format!("QUORD_MAX_N must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(Limits::default()),
    }
}

fn load(path: &Path) -> Result<RelationDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_relation(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn validation(doc: &RelationDocument, e: Error, what: &str) -> Failure {
    match e {
        Error::Validation(v) => invalid(format!(
            "expected a {what}: {v}; witness {}",
            report::names(doc, &v.elements())
        )),
        other => other.into(),
    }
}

fn as_quasiorder(doc: &RelationDocument) -> Result<Quasiorder, Failure> {
    Quasiorder::new(doc.relation.clone()).map_err(|e| validation(doc, e, "quasiorder"))
}

fn as_halfspace(doc: &RelationDocument) -> Result<HalfSpace, Failure> {
    HalfSpace::new(as_quasiorder(doc)?).map_err(|e| validation(doc, e, "half-space"))
}

fn as_partial_order(doc: &RelationDocument) -> Result<PartialOrder, Failure> {
    PartialOrder::new(doc.relation.clone()).map_err(|e| validation(doc, e, "partial order"))
}

fn same_ground(a: &RelationDocument, b: &RelationDocument, what: &str) -> Result<(), Failure> {
    if a.ground != b.ground {
        return Err(invalid(format!("{what} is declared on a different ground set")));
    }
    Ok(())
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Classify { file } => classify(&load(&file)?),
        Command::Check {
            what: CheckCommand::Halfspace { file },
        } => check_halfspace(&load(&file)?),
        Command::Decompose { file } => decompose(&load(&file)?),
        Command::Complement { file } => complement(&load(&file)?),
        Command::Extend { file, seed } => extend(&load(&file)?, seed.as_deref()),
        Command::Tighten { gamma, alpha, r } => tighten(&load(&gamma)?, &load(&alpha)?, r.as_deref()),
        Command::Linearize { alpha, lambda, both } => linearize(&load(&alpha)?, &load(&lambda)?, both),
        Command::Dim { file } => dim(&load(&file)?),
        Command::Hsdim { file } => hsdim(&load(&file)?),
        Command::Transform {
            gamma,
            realizer,
            mu,
            istar,
            alt,
        } => {
            let parts = realizer.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            transform(&load(&gamma)?, &parts, mu.as_deref(), istar, alt)
        }
        Command::Product {
            files,
            structural_only,
            strict_factors,
        } => {
            let docs = files.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            product(&docs, structural_only, strict_factors)
        }
        Command::Enumerate { kind, n } => enumerate(kind, n),
        Command::Oracle { suite, seed, list } => oracle(suite.as_deref(), seed, list),
    }
}

fn classify(doc: &RelationDocument) -> CliResult {
    let p = doc.relation.classify();
    let mut r = Report::new();
    r.line("elements", doc.relation.n());
    r.line("pairs", doc.relation.len());
    r.line("reflexive", p.reflexive);
    r.line("transitive", p.transitive);
    r.line("antisymmetric", p.antisymmetric);
    r.line("symmetric", p.symmetric);
    r.line("total", p.total);
    let quasi = p.reflexive && p.transitive;
    r.line("quasiorder", quasi);
    r.line("partial_order", quasi && p.antisymmetric);
    r.line("linear_order", quasi && p.antisymmetric && p.total);
    r.line("equivalence", quasi && p.symmetric);
    if quasi {
        let q = Quasiorder::new(doc.relation.clone())?;
        r.line("halfspace", halfspace_witness(&q).is_none());
        r.line("classes", q.induced_order().len());
    }
    Ok((r.finish(), true))
}

fn check_halfspace(doc: &RelationDocument) -> CliResult {
    let q = as_quasiorder(doc)?;
    let mut r = Report::new();
    match halfspace_witness(&q) {
        None => {
            r.line("halfspace", true);
            Ok((r.finish(), true))
        }
        Some((x, y, z)) => {
            r.line("halfspace", false);
            r.line("witness", report::names(doc, &[x, y, z]));
            r.line(
                "reason",
                format!(
                    "{} and {} are incomparable, {} <= {}, but not {} <= {}",
                    doc.name(x),
                    doc.name(y),
                    doc.name(x),
                    doc.name(z),
                    doc.name(y),
                    doc.name(z)
                ),
            );
            Ok((r.finish(), false))
        }
    }
}

fn decompose(doc: &RelationDocument) -> CliResult {
    let h = as_halfspace(doc)?;
    let d = box_decomposition(&h);
    let mut r = Report::new();
    r.line("boxes", d.render(|i| doc.name(i)));
    for (i, b) in d.boxes().iter().enumerate() {
        let kind = if b.members.len() == 1 {
            "singleton"
        } else if b.kind == quord::BoxKind::Full {
            "full"
        } else {
            "empty"
        };
        r.line(&format!("box {i}"), format!("{kind} {}", report::names(doc, &b.members)));
    }
    Ok((r.finish(), true))
}

fn complement(doc: &RelationDocument) -> CliResult {
    let h = as_halfspace(doc)?;
    let c = complement_halfspace(&h);
    let out = doc.with_relation(c.as_relation().clone())?;
    let mut r = Report::new();
    r.comment("boxes", box_decomposition(&c).render(|i| doc.name(i)));
    r.relation(&out);
    Ok((r.finish(), true))
}

fn extend(doc: &RelationDocument, seed: Option<&str>) -> CliResult {
    let p = as_partial_order(doc)?;
    let seed = match seed {
        Some(s) => parse_permutation(&doc.ground, s)?,
        None => LinearOrder::identity_permutation(p.n()),
    };
    let l = szpilrajn_extension(&p, &seed)?;
    let mut r = Report::new();
    r.comment("order", report::order(&doc.ground, &l));
    r.relation(&doc.with_relation(l.as_relation().clone())?);
    Ok((r.finish(), true))
}

fn tighten(gamma_doc: &RelationDocument, alpha_doc: &RelationDocument, r_arg: Option<&str>) -> CliResult {
    same_ground(gamma_doc, alpha_doc, "alpha")?;
    let gamma = as_quasiorder(gamma_doc)?;
    let alpha = as_halfspace(alpha_doc)?;
    let quotient = gamma.induced_order();
    let order = match r_arg {
        Some(s) => parse_class_order(&gamma_doc.ground, &quotient, s)?,
        None => szpilrajn_extension(&quotient.induced, &LinearOrder::identity_permutation(quotient.len()))?,
    };
    let tau = tighten_halfspace(&gamma, &alpha, &order).map_err(|e| report::precondition(gamma_doc, e))?;
    let mut r = Report::new();
    r.comment("r", report::class_order(&gamma_doc.ground, &quotient, &order));
    r.comment("boxes", box_decomposition(&tau).render(|i| gamma_doc.name(i)));
    r.relation(&gamma_doc.with_relation(tau.as_relation().clone())?);
    Ok((r.finish(), true))
}

fn linearize(alpha_doc: &RelationDocument, lambda_doc: &RelationDocument, both: bool) -> CliResult {
    same_ground(alpha_doc, lambda_doc, "lambda")?;
    let alpha = as_halfspace(alpha_doc)?;
    let lambda = LinearOrder::new(lambda_doc.relation.clone()).map_err(|e| validation(lambda_doc, e, "linear order"))?;
    let l = linearize_halfspace(&alpha, &lambda).map_err(|e| report::precondition(alpha_doc, e))?;
    let mut r = Report::new();
    if both {
        let l2 = linearize_halfspace(&alpha, &lambda.inverse())?;
        r.line("lambda", report::order(&alpha_doc.ground, &l));
        r.line("lambda_inverse", report::order(&alpha_doc.ground, &l2));
        r.line("meet_is_alpha", l.intersection(&l2) == *alpha.as_relation());
    } else {
        r.comment("order", report::order(&alpha_doc.ground, &l));
        r.relation(&alpha_doc.with_relation(l.as_relation().clone())?);
    }
    Ok((r.finish(), true))
}

fn dim(doc: &RelationDocument) -> CliResult {
    let q = as_quasiorder(doc)?;
    let quotient = q.induced_order();
    let (d, witness) = order_dimension_with(&quotient.induced, &limits()?)?;
    let mut r = Report::new();
    r.raw(d);
    r.line("dim", d);
    r.line("partial_order", quotient.len() == q.n());
    r.line("classes", quotient.len());
    for (i, l) in witness.iter().enumerate() {
        r.line(&format!("linear {i}"), report::class_order(&doc.ground, &quotient, l));
    }
    Ok((r.finish(), true))
}

fn hsdim(doc: &RelationDocument) -> CliResult {
    let q = as_quasiorder(doc)?;
    let limits = limits()?;
    let catalog = HalfSpaceCatalog::with_limits(q.n(), &limits)?;
    let (d, realizer) = hs_dimension_in(&catalog, &q)?;
    let mut r = Report::new();
    r.raw(d);
    r.line("hsdim", d);
    for (i, h) in realizer.parts().iter().enumerate() {
        r.line(&format!("halfspace {i}"), box_decomposition(h).render(|x| doc.name(x)));
    }
    Ok((r.finish(), true))
}

fn transform(
    gamma_doc: &RelationDocument,
    part_docs: &[RelationDocument],
    mu: Option<&str>,
    i_star: usize,
    alt: bool,
) -> CliResult {
    let gamma = as_quasiorder(gamma_doc)?;
    let mut parts = Vec::new();
    for d in part_docs {
        same_ground(gamma_doc, d, "a realizer part")?;
        parts.push(as_halfspace(d)?);
    }
    let realizer = Realizer::new(gamma.clone(), parts).map_err(|e| report::precondition(gamma_doc, e))?;
    let (realizer, padded) = realizer.padded();
    let quotient = gamma.induced_order();
    let mu = match mu {
        Some(s) => parse_class_order(&gamma_doc.ground, &quotient, s)?,
        None => LinearOrder::identity_permutation(quotient.len()),
    };
    let orders = if alt {
        realizer_to_linear_extensions_alt(&realizer, &mu, i_star)?.orders
    } else {
        realizer_to_linear_extensions(&realizer, &mu, i_star, &TransformSeeds::default())?.orders
    };
    let meet = orders
        .iter()
        .fold(Relation::full(quotient.len()), |acc, l| acc.intersection(l));
    let mut r = Report::new();
    r.line("construction", if alt { "first-comparison" } else { "tie-break" });
    r.line("padded", padded);
    r.line("parts", realizer.len());
    r.line("mu", report::class_order(&gamma_doc.ground, &quotient, &mu));
    r.line("istar", i_star);
    for (i, l) in orders.iter().enumerate() {
        r.line(&format!("linear {i}"), report::class_order(&gamma_doc.ground, &quotient, l));
    }
    r.line("meet_is_quotient_order", meet == *quotient.induced.as_relation());
    Ok((r.finish(), true))
}

fn product(docs: &[RelationDocument], structural_only: bool, strict_factors: bool) -> CliResult {
    let factors = docs.iter().map(as_quasiorder).collect::<Result<Vec<_>, _>>()?;
    let (verdict, why) = product_halfspace_predicate(&factors, !strict_factors)?;
    let mut r = Report::new();
    if structural_only {
        r.line("halfspace", verdict);
        r.line("reason", why);
        return Ok((r.finish(), true));
    }
    let (p, enc) = direct_product(&factors)?;
    let direct = halfspace_witness(&p).is_none();
    let names: Vec<String> = (0..enc.size())
        .map(|i| {
            enc.decode(i)
                .iter()
                .zip(docs)
                .map(|(&c, d)| d.name(c))
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    let ground = GroundSet::labeled(names).unwrap_or_else(|_| GroundSet::unlabeled(enc.size()));
    let doc = RelationDocument::new(ground, p.into_relation())?;
    r.comment("halfspace", direct);
    r.comment("structural", format!("{verdict} ({why})"));
    if let Some(t) = lemma_witnesses(&factors)?.non_halfspace_triple {
        let ids: Vec<usize> = [&t.a, &t.b, &t.c].iter().map(|x| enc.encode(x)).collect::<Result<_, _>>()?;
        r.comment("refuting_triple", report::names(&doc, &ids));
    }
    r.relation(&doc);
    Ok((r.finish(), true))
}

fn enumerate(kind: EnumerateKind, n: usize) -> CliResult {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut emit = |rel: Relation| -> Result<(), Failure> {
        writeln!(out, "{}", write_relation_json(&RelationDocument::unlabeled(rel)))
            .map_err(|e| invalid(format!("write failed: {e}")))
    };
    match kind {
        EnumerateKind::Quasiorders => {
            for q in enumerate_quasiorders(n)? {
                emit(q.into_relation())?;
            }
        }
        EnumerateKind::Halfspaces => {
            for h in enumerate_halfspaces_with(n, &limits()?)? {
                emit(h.into_quasiorder().into_relation())?;
            }
        }
    }
    out.flush().map_err(|e| invalid(format!("write failed: {e}")))?;
    Ok((String::new(), true))
}

fn oracle(suite: Option<&str>, seed: Option<u64>, list: bool) -> CliResult {
    if list {
        let mut r = Report::new();
        for id in suite_ids() {
            r.raw(id);
        }
        for (alias, id) in suite_aliases() {
            r.raw(format!("{alias} -> {id}"));
        }
        return Ok((r.finish(), true));
    }
    let suite = suite.expect("clap requires a suite unless --list");
    let report = theorem_replay_with_seed(suite, seed.unwrap_or(DEFAULT_SEED))?;
    eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
    Ok((report.to_string(), report.passed()))
}
