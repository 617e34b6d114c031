use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kcross::criterion::{check_nonplanar_with, enumerated_crossing_number, NonPlanarCertificate, SubproblemOutcome};
use kcross::diagram::Diagram;
use kcross::invariants::{
    crossing_lower_bound, kauffman_bracket, linking_matrix, span_bound, writhe, CrTwoCertificate,
};
use kcross::moves::{simplify, Budget};
use kcross::multigraph::{automorphism_group, minimalizability_status, symmetric_product_decomposition, Multigraph};
use kcross::tangle::{closure_d, closure_n, normal_form, parse_conway, tangle_crossing_number, VertexOrientation};
use kcross::Error;

#[derive(Parser)]
#[command(name = "kcross", version, about = "Graph diagrams, tangles and non-planarity certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest crossing count visited by searches.
    #[arg(long, global = true, default_value_t = 10)]
    budget_crossings: usize,
    /// Largest number of diagrams visited by one search.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    budget_states: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket, span, writhe and linking numbers of a diagram.
    Invariant { path: String },
    /// Fraction, normal form, crossing number and closures of a tangle.
    Tangle {
        #[arg(allow_hyphen_values = true)]
        conway: String,
    },
    /// Automorphism group of a graph.
    Aut { path: String },
    /// Non-planarity criterion at a degree-4 vertex.
    Criterion {
        path: String,
        /// Vertex label; every degree-4 vertex is tried when absent.
        #[arg(long)]
        vertex: Option<usize>,
        /// Slot of the vertex receiving tangle end a.
        #[arg(long, default_value_t = 0)]
        orientation: usize,
        /// Write the certificate as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Crossing number of a graph by enumeration over automorphisms.
    CrossingNumber { path: String },
    /// Replay a non-planarity certificate.
    Verify {
        path: String,
        /// Also require the certificate to be about this diagram.
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Search for a diagram with fewer crossings.
    Simplify { path: String },
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    Ok(text)
}

fn read_diagram(path: &str) -> Result<Diagram, Error> {
    Diagram::parse(&read_input(path)?)
}

fn read_graph(path: &str) -> Result<Multigraph, Error> {
    Multigraph::parse(&read_input(path)?)
}

/// Text and JSON renderings of a result.
struct Output {
    text: String,
    json: Value,
}

fn invariant(d: &Diagram) -> Result<Output, Error> {
    if !d.is_link() {
        let lower = crossing_lower_bound(d)?;
        return Ok(Output {
            text: format!("graph diagram, {} crossings\nlower bound {lower}", d.crossing_count()),
            json: json!({ "kind": "graph", "crossings": d.crossing_count(), "lower_bound": lower }),
        });
    }
    let bracket = kauffman_bracket(d)?;
    let span = bracket.span().unwrap_or(0);
    let w = writhe(d)?;
    let lk = linking_matrix(d)?;
    let bound = span_bound(d)?;
    let rows: Vec<String> = lk.iter().map(|r| format!("{r:?}")).collect();
    Ok(Output {
        text: format!(
            "link diagram, {} crossings, {} components\nbracket {bracket}\nspan {span}\nwrithe {w}\nlinking {}\nlower bound {bound}",
            d.crossing_count(),
            lk.len(),
            rows.join(" ")
        ),
        json: json!({
            "kind": "link",
            "crossings": d.crossing_count(),
            "bracket": bracket,
            "span": span,
            "writhe": w,
            "linking_matrix": lk,
            "lower_bound": bound,
        }),
    })
}

fn tangle(text: &str) -> Result<Output, Error> {
    let t = parse_conway(text)?;
    let nf = normal_form(&t);
    let r = tangle_crossing_number(&t);
    let mut closures = Vec::new();
    let mut lines = vec![format!("fraction {}, |r| = {r}", t.fraction), format!("normal form {nf}")];
    for (name, d) in [("N", closure_n(&nf)), ("D", closure_d(&nf))] {
        let comps = d.link_components()?.len();
        let span = kauffman_bracket(&d)?.span().unwrap_or(0);
        let reduced_alternating = d.is_reduced()? && d.is_alternating()? && d.is_connected();
        lines.push(format!(
            "{name}: {} crossings, {comps} components, span {span}{}",
            d.crossing_count(),
            if reduced_alternating { ", reduced alternating" } else { "" }
        ));
        closures.push(json!({
            "closure": name,
            "crossings": d.crossing_count(),
            "components": comps,
            "span": span,
            "reduced_alternating": reduced_alternating,
            "diagram": d.to_string(),
        }));
    }
    Ok(Output {
        text: lines.join("\n"),
        json: json!({ "fraction": t.fraction, "normal_form": nf.conway, "crossing_number": r, "closures": closures }),
    })
}

fn aut(g: &Multigraph) -> Result<Output, Error> {
    let group = automorphism_group(g)?;
    let blocks = symmetric_product_decomposition(g)?.map(|c| c.block_sizes());
    let status = minimalizability_status(g)?;
    let verdict = match status {
        kcross::multigraph::MinimalizabilityStatus::StronglyMinimalizableByTrivialAut => {
            "strongly minimalizable (trivial automorphism group)"
        }
        kcross::multigraph::MinimalizabilityStatus::StronglyMinimalizableByProduct => {
            "strongly minimalizable (symmetric product)"
        }
        kcross::multigraph::MinimalizabilityStatus::Unknown => "minimalizability unknown",
    };
    let block_text = blocks.as_ref().map_or("none".to_string(), |b| format!("{b:?}"));
    Ok(Output {
        text: format!("order {}, blocks: {block_text} → {verdict}", group.order),
        json: json!({ "order": group.order, "generators": group.generators, "blocks": blocks, "status": status }),
    })
}

fn certificate_summary(cert: &NonPlanarCertificate) -> Vec<String> {
    let mut lines = vec![format!("non-planar (vertex {}, a at slot {})", cert.orientation.vertex, cert.orientation.a_slot)];
    for w in &cert.per_assignment {
        let evidence = match &w.certificate {
            CrTwoCertificate::LinkedCycles { linking_number, .. } => format!("linked cycles, lk = {linking_number}"),
            CrTwoCertificate::SpanBound { span, .. } => format!("span {span}"),
            CrTwoCertificate::ExhaustiveBfs { cap, .. } => format!("exhaustive search to {cap} crossings"),
        };
        lines.push(format!("  assignment {:b}: tangle {}, {evidence}", w.mask, w.tangle));
    }
    lines
}

fn criterion(d: &Diagram, vertex: Option<usize>, a_slot: usize, out: Option<&PathBuf>, budget: &Budget) -> Result<Output, Error> {
    let vertices: Vec<usize> = match vertex {
        Some(v) => vec![v],
        None => {
            let mut labels: Vec<usize> =
                d.vertices().filter(|&n| d.node(n).degree() == 4).filter_map(|n| d.node(n).label()).collect();
            labels.sort();
            labels
        }
    };
    for v in vertices {
        let o = VertexOrientation { vertex: v, a_slot };
        if let Some(cert) = check_nonplanar_with(d, o, budget.max_crossings)? {
            let value = serde_json::to_value(&cert)?;
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&value)? + "\n")
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            }
            let mut lines = certificate_summary(&cert);
            lines.push(format!("minimalizability {:?}", cert.minimalizability));
            return Ok(Output { text: lines.join("\n"), json: json!({ "result": "non-planar", "certificate": value }) });
        }
    }
    Ok(Output { text: "inconclusive".into(), json: json!({ "result": "inconclusive" }) })
}

fn crossing_number(g: &Multigraph, budget: &Budget) -> Result<Output, Error> {
    let out = enumerated_crossing_number(g, budget)?;
    let mut lines = Vec::new();
    for s in &out.transcript {
        let what = match &s.outcome {
            SubproblemOutcome::Exact { value } => format!("exact {value}"),
            SubproblemOutcome::Pruned { lower } => format!("pruned (lower bound {lower})"),
            SubproblemOutcome::Open { lower } => format!("open (lower bound {lower})"),
            SubproblemOutcome::BudgetExceeded { lower } => format!("budget exceeded (lower bound {lower})"),
        };
        lines.push(format!("positions {:?} assignment {:b}: {} crossings, {what}", s.automorphism, s.mask, s.crossings));
    }
    lines.push(match out.value {
        Some(v) => format!("crossing number {v}"),
        None => format!("inconclusive (lower bound {}, best {:?})", out.lower_bound, out.best),
    });
    Ok(Output { text: lines.join("\n"), json: serde_json::to_value(&out)? })
}

fn verify(path: &str, diagram: Option<&str>) -> Result<Output, Error> {
    let cert: NonPlanarCertificate = serde_json::from_str(&read_input(path)?)?;
    match diagram {
        Some(p) => cert.verify_for(&read_diagram(p)?)?,
        None => cert.verify()?,
    }
    let mut lines = certificate_summary(&cert);
    lines.push("certificate valid".into());
    Ok(Output { text: lines.join("\n"), json: json!({ "valid": true }) })
}

fn simplify_cmd(d: &Diagram, budget: &Budget) -> Result<Output, Error> {
    let out = simplify(d, budget)?;
    Ok(Output {
        text: format!(
            "{} -> {} crossings in {} moves ({} states{})\n{}",
            d.crossing_count(),
            out.diagram.crossing_count(),
            out.path.steps.len(),
            out.states,
            if out.complete { ", complete" } else { "" },
            out.diagram
        )
        .trim_end()
        .to_string(),
        json: json!({
            "crossings": out.diagram.crossing_count(),
            "complete": out.complete,
            "states": out.states,
            "path": out.path,
            "diagram": out.diagram.to_string(),
        }),
    })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = Budget { max_crossings: cli.budget.budget_crossings, max_states: cli.budget.budget_states };
    match &cli.command {
        Command::Invariant { path } => invariant(&read_diagram(path)?),
        Command::Tangle { conway } => tangle(conway),
        Command::Aut { path } => aut(&read_graph(path)?),
        Command::Criterion { path, vertex, orientation, out } => {
            criterion(&read_diagram(path)?, *vertex, *orientation, out.as_ref(), &budget)
        }
        Command::CrossingNumber { path } => crossing_number(&read_graph(path)?, &budget),
        Command::Verify { path, diagram } => verify(path, diagram.as_deref()),
        Command::Simplify { path } => simplify_cmd(&read_diagram(path)?, &budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
