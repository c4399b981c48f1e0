use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use ribbon_tcft::algebra::{construct_hodge, heat_kernel, hodge_candidates, validate_hodge};
use ribbon_tcft::cochain::{
    algebra_fingerprint, generators, hodge_fingerprint, hodge_independence, verify_cocycle,
    verify_equivalence, Check, CochainEngine, Witness,
};
use ribbon_tcft::graphs::{boundary, canonical_form, Complex, GraphChain, SignConvention};
use ribbon_tcft::io::{self, GraphJson};
use ribbon_tcft::otft::{random_representative, surface_specs, OtftEvaluator};
use ribbon_tcft::report::ValidationReport;
use ribbon_tcft::{scalar, DgFrobeniusAlgebra, Error, HodgeDecomposition, Scalar};

const REPRESENTATIVES: usize = 10;

#[derive(Parser)]
#[command(
    name = "ribbon-tcft",
    version,
    about = "Exact cocycles on ribbon graph complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra axioms and, if given, the Hodge identities.
    Validate {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        hodge: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// List the generators of one type with their automorphism groups.
    Enumerate {
        #[command(flatten)]
        kind: TypeArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Run the full identity battery.
    Verify {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        kind: TypeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop the face signs from the boundary (negative control).
        #[arg(long, hide = true)]
        debug_unsigned_boundary: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate both evaluations on every generator, or on one graph file.
    Cocycle {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        kind: TypeArgs,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    algebra: PathBuf,
    /// Hodge decomposition; solved for when absent.
    #[arg(long)]
    hodge: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TypeArgs {
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    max_edges: usize,
    #[arg(long, value_enum, default_value_t = ComplexArg::Linf)]
    complex: ComplexArg,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ComplexArg {
    Lcirc,
    Linf,
    Open,
}

impl From<ComplexArg> for Complex {
    fn from(c: ComplexArg) -> Self {
        match c {
            ComplexArg::Lcirc => Complex::Lcirc,
            ComplexArg::Linf => Complex::Linf,
            ComplexArg::Open => Complex::Open,
        }
    }
}

enum Failure {
    Input(String),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceBound(_) => Failure::Bound(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<DgFrobeniusAlgebra, Failure> {
    io::parse_algebra(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_hodge(path: &Path, alg: &DgFrobeniusAlgebra) -> Result<HodgeDecomposition, Failure> {
    io::parse_hodge(&read(path)?, alg)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, text: String, json: &impl Serialize) -> Result<(), Failure> {
    let body = if output.json {
        serde_json::to_string_pretty(json).expect("serializable") + "\n"
    } else {
        text
    };
    match &output.out {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn axiom_check(name: &str, rep: &ValidationReport, checked: usize) -> Check {
    Check {
        name: name.into(),
        passed: rep.is_ok(),
        checked,
        witnesses: rep
            .violations
            .iter()
            .map(|v| Witness {
                at: v.axiom.into(),
                detail: format!("{:?}: {}", v.witness, v.detail),
            })
            .collect(),
    }
}

fn render_checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        let status = if c.passed { "ok" } else { "FAIL" };
        let _ = writeln!(out, "{:<24} {:<4} ({} checked)", c.name, status, c.checked);
        for w in &c.witnesses {
            let _ = writeln!(out, "    {}: {}", w.at, w.detail);
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    algebra: String,
    hodge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<serde_json::Value>,
    checks: Vec<Check>,
    notes: Vec<String>,
    passed: bool,
}

impl CheckReport {
    fn render(&self) -> String {
        let mut s = format!("algebra {}\n", self.algebra);
        if let Some(h) = &self.hodge {
            let _ = writeln!(s, "hodge   {h}");
        }
        render_checks(&mut s, &self.checks);
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "{}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

fn validate(algebra: &Path, hodge: Option<&Path>, output: &Output) -> Outcome {
    let alg = load_algebra(algebra)?;
    let mut checks = vec![axiom_check("frobenius", &alg.validate(), alg.dim())];
    let mut fp = None;
    if let Some(p) = hodge {
        let h = load_hodge(p, &alg)?;
        checks.push(axiom_check("hodge", &validate_hodge(&alg, &h)?, alg.dim()));
        fp = Some(hodge_fingerprint(&h));
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = CheckReport {
        command: "validate",
        algebra: algebra_fingerprint(&alg),
        hodge: fp,
        config: None,
        checks,
        notes: Vec::new(),
        passed,
    };
    emit(output, report.render(), &report)?;
    Ok(passed)
}

#[derive(Serialize)]
struct GraphEntry {
    key: String,
    edges: usize,
    black: usize,
    aut: usize,
    orientation_reversing: bool,
    genus: usize,
    boundaries: usize,
    graph: GraphJson,
}

#[derive(Serialize)]
struct Listing<'a> {
    #[serde(flatten)]
    kind: &'a TypeArgs,
    count: usize,
    by_edges: BTreeMap<usize, usize>,
    /// Sum of `(-1)^edges / |Aut|` over the listed graphs.
    euler_sum: String,
    graphs: Vec<GraphEntry>,
}

fn enumerate(kind: &TypeArgs, output: &Output) -> Outcome {
    let graphs = generators(kind.g, kind.n, kind.max_edges, kind.complex.into())?;
    let entries: Vec<GraphEntry> = graphs
        .par_iter()
        .map(|gr| {
            let c = canonical_form(gr);
            let (genus, boundaries) = gr.surface_invariants()?;
            Ok(GraphEntry {
                key: c.key.to_string(),
                edges: gr.num_edges(),
                black: gr.black_edges().len(),
                aut: c.aut_order(),
                orientation_reversing: c.has_reversing_automorphism(gr),
                genus,
                boundaries,
                graph: GraphJson::from_graph(gr, Some(&gr.default_orientation())),
            })
        })
        .collect::<Result<_, Error>>()?;
    let mut by_edges = BTreeMap::new();
    let mut euler = Scalar::zero();
    for e in &entries {
        *by_edges.entry(e.edges).or_insert(0) += 1;
        euler += scalar::sign(e.edges % 2 == 1) / scalar::int(e.aut as i64);
    }
    let listing = Listing {
        kind,
        count: entries.len(),
        by_edges,
        euler_sum: scalar::format(&euler),
        graphs: entries,
    };
    let mut text = String::new();
    for e in &listing.graphs {
        let _ = writeln!(
            text,
            "{}  edges {} black {} |Aut| {}{}  (g, n) = ({}, {})",
            e.key,
            e.edges,
            e.black,
            e.aut,
            if e.orientation_reversing {
                " reversing"
            } else {
                ""
            },
            e.genus,
            e.boundaries
        );
    }
    let _ = writeln!(text, "count {}", listing.count);
    for (k, v) in &listing.by_edges {
        let _ = writeln!(text, "  {k} edges: {v}");
    }
    let _ = writeln!(text, "euler sum {}", listing.euler_sum);
    emit(output, text, &listing)?;
    Ok(true)
}

fn engine(inputs: &Inputs) -> Result<CochainEngine, Failure> {
    let alg = load_algebra(&inputs.algebra)?;
    let rep = alg.validate();
    if !rep.is_ok() {
        return Err(Failure::Input(format!(
            "algebra fails axioms: {}",
            rep.axioms().join(", ")
        )));
    }
    let h = match &inputs.hodge {
        Some(p) => load_hodge(p, &alg)?,
        None => construct_hodge(&alg)?,
    };
    Ok(CochainEngine::new(&alg, &h)?)
}

fn heat_check(engine: &CochainEngine) -> Result<Check, Error> {
    let (alg, h) = (engine.algebra(), engine.hodge());
    let k = heat_kernel(alg, h)?;
    let mut witnesses = Vec::new();
    if k.at_zero() != alg.copairing()? {
        witnesses.push(Witness {
            at: "K_0".into(),
            detail: "heat kernel at t = 0 differs from the copairing".into(),
        });
    }
    for (i, r) in k.ode_residual(h).iter().enumerate() {
        if !r.is_zero() {
            witnesses.push(Witness {
                at: format!("u^{i}"),
                detail: "heat equation residual is nonzero".into(),
            });
        }
    }
    let lap = h.laplacian();
    if &(lap * lap) != lap {
        witnesses.push(Witness {
            at: "laplacian".into(),
            detail: "not idempotent, so exp(-t Delta) != pi + u Delta".into(),
        });
    }
    Ok(Check {
        name: "heat_flow".into(),
        passed: witnesses.is_empty(),
        checked: 3,
        witnesses,
    })
}

fn boundary_check(
    graphs: &[ribbon_tcft::StableRibbonGraph],
    complex: Complex,
    conv: SignConvention,
) -> Check {
    let witnesses: Vec<Witness> = graphs
        .par_iter()
        .filter_map(|gr| {
            let d = boundary(&GraphChain::from_graph(gr), complex, conv);
            let dd = boundary(&d, complex, conv);
            (!dd.is_zero()).then(|| Witness {
                at: canonical_form(gr).key.to_string(),
                detail: format!("boundary squared has {} terms", dd.len()),
            })
        })
        .collect();
    Check {
        name: "boundary_squared".into(),
        passed: witnesses.is_empty(),
        checked: graphs.len(),
        witnesses,
    }
}

fn representative_check(alg: &DgFrobeniusAlgebra, seed: u64) -> Result<Check, Error> {
    let ev = OtftEvaluator::new(alg)?;
    let specs = surface_specs(1, 2, 4);
    let witnesses = specs
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let want = ev.vertex_tensor(s)?;
            let mut bad = Vec::new();
            for i in 0..REPRESENTATIVES {
                let rep = random_representative(s, &mut rng, 2)?;
                if ev.evaluate(&rep)? != *want {
                    bad.push(Witness {
                        at: format!("genus {} cycles {:?}", s.genus, s.cycles),
                        detail: format!("representative {i} disagrees with the normal form"),
                    });
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>, Error>>()?
        .concat();
    Ok(Check {
        name: "vertex_representatives".into(),
        passed: witnesses.is_empty(),
        checked: specs.len() * REPRESENTATIVES,
        witnesses,
    })
}

fn verify(inputs: &Inputs, kind: &TypeArgs, seed: u64, unsigned: bool, output: &Output) -> Outcome {
    let e = engine(inputs)?;
    let complex: Complex = kind.complex.into();
    let (g, n, max) = (kind.g, kind.n, kind.max_edges);
    let alg = e.algebra();
    let pi_zero = e.hodge().pi().is_zero();
    let mut notes = vec![format!("seed {seed}")];
    let mut checks = vec![
        axiom_check("frobenius", &alg.validate(), alg.dim()),
        axiom_check("hodge", &validate_hodge(alg, e.hodge())?, alg.dim()),
        heat_check(&e)?,
        representative_check(alg, seed)?,
    ];
    let graphs = generators(g, n, max, complex)?;
    let conv = if unsigned {
        notes.push("boundary signs disabled".into());
        SignConvention::Unsigned
    } else {
        SignConvention::Alternating
    };
    checks.push(boundary_check(&graphs, complex, conv));
    checks.extend(verify_equivalence(&e, g, n, max)?);
    if complex == Complex::Lcirc && !pi_zero {
        notes.push("cocycle check skipped: the contraction-only complex needs pi = 0".into());
    } else {
        checks.extend(verify_cocycle(&e, g, n, max, complex)?);
        let others: Vec<HodgeDecomposition> = hodge_candidates(alg, 2)?
            .into_iter()
            .filter(|h| h != e.hodge())
            .collect();
        match others.first() {
            Some(h) => {
                let other = CochainEngine::new(alg, h)?;
                checks.push(hodge_independence(&e, &other, g, n, max, complex)?);
            }
            None => notes.push("only one Hodge decomposition found".into()),
        }
    }
    if e.hodge().s().is_zero() {
        notes.push("s = 0: every value on a cell with a black edge is zero".into());
    }
    let values = ribbon_tcft::cochain::cochain_values(&e, g, n, max, complex)?;
    if values.values.values().all(Zero::is_zero) {
        notes.push(format!("all {} values are zero", values.values.len()));
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = CheckReport {
        command: "verify",
        algebra: algebra_fingerprint(alg),
        hodge: Some(hodge_fingerprint(e.hodge())),
        config: Some(serde_json::to_value(kind).expect("serializable")),
        checks,
        notes,
        passed,
    };
    emit(output, report.render(), &report)?;
    Ok(passed)
}

#[derive(Serialize)]
struct Row {
    key: String,
    edges: usize,
    black: usize,
    costello: String,
    kontsevich: String,
    equal: bool,
    cochain: String,
}

#[derive(Serialize)]
struct Table {
    algebra: String,
    hodge: String,
    rows: Vec<Row>,
}

fn cocycle(inputs: &Inputs, kind: &TypeArgs, graph: Option<&Path>, output: &Output) -> Outcome {
    let e = engine(inputs)?;
    let graphs: Vec<_> = match graph {
        Some(p) => {
            let (gr, or) = io::parse_graph(&read(p)?)
                .map_err(|err| Failure::Input(format!("{}: {err}", p.display())))?;
            vec![(gr, or)]
        }
        None => generators(kind.g, kind.n, kind.max_edges, kind.complex.into())?
            .into_iter()
            .map(|gr| {
                let or = gr.default_orientation();
                (gr, or)
            })
            .collect(),
    };
    let rows = graphs
        .par_iter()
        .map(|(gr, or)| {
            let costello = e.costello_value(gr, or)?;
            let kontsevich = e.kontsevich_value(gr, or)?;
            Ok(Row {
                key: canonical_form(gr).key.to_string(),
                edges: gr.num_edges(),
                black: gr.black_edges().len(),
                equal: costello == kontsevich,
                cochain: scalar::format(&e.cochain_value(gr, or)?),
                costello: scalar::format(&costello),
                kontsevich: scalar::format(&kontsevich),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let table = Table {
        algebra: algebra_fingerprint(e.algebra()),
        hodge: hodge_fingerprint(e.hodge()),
        rows,
    };
    let mut text = String::new();
    for r in &table.rows {
        let _ = writeln!(
            text,
            "{}  edges {} black {}  costello {}  kontsevich {}  {}",
            r.key,
            r.edges,
            r.black,
            r.costello,
            r.kontsevich,
            if r.equal { "equal" } else { "DIFFER" }
        );
    }
    emit(output, text, &table)?;
    Ok(table.rows.iter().all(|r| r.equal))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate {
            algebra,
            hodge,
            output,
        } => validate(algebra, hodge.as_deref(), output),
        Command::Enumerate { kind, output } => enumerate(kind, output),
        Command::Verify {
            inputs,
            kind,
            seed,
            debug_unsigned_boundary,
            output,
        } => verify(inputs, kind, *seed, *debug_unsigned_boundary, output),
        Command::Cocycle {
            inputs,
            kind,
            graph,
            output,
        } => cocycle(inputs, kind, graph.as_deref(), output),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Bound(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
