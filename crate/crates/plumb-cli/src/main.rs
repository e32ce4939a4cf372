//! Command-line front end for the plumbing-graph calculus.
//!
//! Subcommands: normalize, dual, cf, invariants, seifert, decide,
//! decompose, embed, lattice-stats, enumerate. Input graphs use the
//! line-oriented text format (`v <id> <w>`, `e <id> <id>`, optional
//! `root <id>`, `#` comments); lattice subsets are one vector per line.
//!
//! Output is human-readable text by default and a JSON envelope with
//! `--json` (schema `plumb-calc/1`, alphabetically ordered keys). Exit
//! codes: 0 ok, 1 input error, 2 inapplicable.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use plumb::blocks::{decide_bounds, decompose, BlockDecomposition, Decision, Orientation};
use plumb::calculus::{continued_fraction, dual, normalize, CalculusError};
use plumb::graph::{
    canonical_form, determinant, invariant_i, linear_complexity, signature, PlumbingGraph,
    RootedGraph, VertexId,
};
use plumb::lattice::{embed_with_extra_jobs, enumerate_good_subsets, stats, LatticeSubset};
use plumb::seifert::{
    decide_seifert_bounds, euler_number, seifert_from_star, SeifertCertificate, SeifertInvariants,
};
use plumb::text::{format_graph, parse_graph, parse_seifert, parse_subset};

const SCHEMA: &str = "plumb-calc/1";

#[derive(Parser)]
#[command(name = "plumb", version, about = "Exact plumbing-graph calculus for 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized property tooling; accepted for reproducibility.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the embedding search.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a plumbing graph to its normal form.
    Normalize(FileArg),
    /// Dual (orientation-reversed) graph of a normal form.
    Dual(FileArg),
    /// Continued fraction of a rooted graph.
    Cf {
        file: String,
        /// Root vertex (overrides a `root` directive in the file).
        #[arg(long)]
        root: Option<String>,
    },
    /// Determinant, signature, I, and linear complexity.
    Invariants(FileArg),
    /// Seifert invariants of a star-shaped graph, or a decision from
    /// textual invariants.
    Seifert {
        file: Option<String>,
        /// Invariants as `b; (a1,b1) (a2,b2) ...` instead of a graph file.
        #[arg(long, allow_hyphen_values = true)]
        invariants: Option<String>,
    },
    /// Decide whether the manifold bounds a rational homology S^1 x D^3.
    Decide(FileArg),
    /// Decompose into building blocks joined at a vertex.
    Decompose {
        file: String,
        /// Center vertex; every linearizing vertex is tried when absent.
        #[arg(long)]
        at: Option<String>,
    },
    /// Lattice embedding test at a distinguished vertex.
    Embed {
        file: String,
        #[arg(long)]
        at: String,
    },
    /// Statistics of a lattice subset.
    LatticeStats(FileArg),
    /// Enumerate good subsets of Z^rank.
    Enumerate {
        #[arg(long)]
        rank: usize,
        /// Cap on I(S); bounds the search.
        #[arg(long, default_value_t = 0)]
        max_i: i64,
        /// Keep only orthogonal subsets (c(S) = rank).
        #[arg(long)]
        orthogonal: bool,
    },
}

#[derive(Args)]
struct FileArg {
    file: String,
}

struct Output {
    command: &'static str,
    status: &'static str,
    text: String,
    payload: Value,
    certificate: Value,
}

impl Output {
    fn ok(command: &'static str, text: String, payload: Value) -> Self {
        Output {
            command,
            status: "ok",
            text,
            payload,
            certificate: Value::Null,
        }
    }

    fn inapplicable(command: &'static str, msg: String) -> Self {
        Output {
            command,
            status: "inapplicable",
            text: msg.clone(),
            payload: json!({ "message": msg }),
            certificate: Value::Null,
        }
    }

    fn exit_code(&self) -> ExitCode {
        match self.status {
            "ok" => ExitCode::from(0),
            "inapplicable" => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::from(0);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                let envelope = json!({
                    "schema": SCHEMA,
                    "command": out.command,
                    "status": out.status,
                    "payload": out.payload,
                    "certificate": out.certificate,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                println!("{}", out.text.trim_end());
            }
            out.exit_code()
        }
        Err(msg) => {
            if json {
                let envelope = json!({
                    "schema": SCHEMA,
                    "command": "error",
                    "status": "error",
                    "payload": { "message": msg },
                    "certificate": Value::Null,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}

fn load_graph(path: &str) -> Result<(PlumbingGraph, Option<VertexId>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    parse_graph(&text).map_err(|e| format!("{path}: {e}"))
}

fn load_subset(path: &str) -> Result<LatticeSubset, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    parse_subset(&text).map_err(|e| format!("{path}: {e}"))
}

fn graph_value(g: &PlumbingGraph, root: Option<&VertexId>) -> Value {
    json!({
        "vertices": g.vertices().map(|(v, w)| json!([v.to_string(), w])).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
        "root": root.map(|r| r.to_string()),
        "text": format_graph(g, root),
    })
}

fn decomposition_value(d: &BlockDecomposition) -> Value {
    json!({
        "center": d.center.to_string(),
        "blocks": d.blocks.iter().map(|b| json!({
            "type": format!("{:?}", b.block.block_type),
            "dual": b.block.is_dual,
            "chain_len": b.block.chain_len,
            "strings": b.block.strings,
            "root_weight": b.root_weight,
            "legs": b.legs.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn decomposition_text(d: &BlockDecomposition) -> String {
    let mut out = format!("decomposition at `{}`:\n", d.center);
    for b in &d.blocks {
        out.push_str(&format!(
            "  type {:?}{} root {} strings {:?} legs [{}]\n",
            b.block.block_type,
            if b.block.is_dual { " (dual)" } else { "" },
            b.root_weight,
            b.block.strings,
            b.legs
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        ));
    }
    out
}

fn seifert_value(si: &SeifertInvariants) -> Value {
    json!({
        "genus": 0,
        "b": si.b(),
        "pairs": si.pairs(),
        "euler": euler_number(si).to_string(),
    })
}

fn run(cli: Cli) -> Result<Output, String> {
    match cli.command {
        Command::Normalize(f) => {
            let (g, root) = load_graph(&f.file)?;
            match normalize(&g) {
                Ok(nf) => Ok(Output::ok(
                    "normalize",
                    format_graph(&nf, None),
                    graph_value(&nf, None),
                )),
                Err(CalculusError::NotReduced { at }) => Ok(Output::inapplicable(
                    "normalize",
                    format!("cannot reduce to normal form: stuck at vertex `{at}`"),
                )),
                Err(e) => Err(e.to_string()),
            }
            .map(|mut out| {
                let _ = root;
                out.text = out.text.clone();
                out
            })
        }
        Command::Dual(f) => {
            let (g, _) = load_graph(&f.file)?;
            match dual(&g) {
                Ok(d) => Ok(Output::ok("dual", format_graph(&d, None), graph_value(&d, None))),
                Err(CalculusError::NotNormalForm(v)) => Ok(Output::inapplicable(
                    "dual",
                    format!("graph is not in normal form (vertex `{v}`)"),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Cf { file, root } => {
            let (g, file_root) = load_graph(&file)?;
            let root = root
                .map(VertexId::new)
                .or(file_root)
                .ok_or("no root: pass --root or a `root` directive")?;
            let rg = RootedGraph::new(g, root).map_err(|e| e.to_string())?;
            match continued_fraction(&rg) {
                Ok(cf) => Ok(Output::ok(
                    "cf",
                    cf.to_string(),
                    json!({ "cf": cf.to_string() }),
                )),
                Err(CalculusError::Indeterminate0Over0) => Ok(Output::inapplicable(
                    "cf",
                    "continued fraction is indeterminate (0/0)".into(),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Invariants(f) => {
            let (g, _) = load_graph(&f.file)?;
            let det = determinant(&g);
            let sig = signature(&g);
            let i = invariant_i(&g);
            let lc = linear_complexity(&g).ok();
            let canon = canonical_form(&g);
            let text = format!(
                "det = {det}\nsignature = ({}, {}, {})\nI = {i}\nlc = {}\nnormal_form = {}\ncanonical = {canon}",
                sig.b_plus,
                sig.b_minus,
                sig.b_zero,
                lc.map_or("undefined".to_string(), |v| v.to_string()),
                g.is_normal_form(),
            );
            Ok(Output::ok(
                "invariants",
                text,
                json!({
                    "det": det.to_string(),
                    "signature": { "b_plus": sig.b_plus, "b_minus": sig.b_minus, "b_zero": sig.b_zero },
                    "invariant_i": i,
                    "lc": lc,
                    "normal_form": g.is_normal_form(),
                    "canonical": canon,
                }),
            ))
        }
        Command::Seifert { file, invariants } => {
            let si = match (file, invariants) {
                (Some(path), None) => {
                    let (g, _) = load_graph(&path)?;
                    match seifert_from_star(&g) {
                        Ok(si) => si,
                        Err(e) => {
                            return Ok(Output::inapplicable("seifert", e.to_string()));
                        }
                    }
                }
                (None, Some(text)) => parse_seifert(&text).map_err(|e| e.to_string())?,
                _ => return Err("pass exactly one of <FILE> or --invariants".into()),
            };
            let decision = decide_seifert_bounds(&si).map_err(|e| e.to_string())?;
            let verdict = if decision.bounds { "bounds" } else { "not-bounds" };
            let cert = match &decision.certificate {
                SeifertCertificate::Pairing { legs, pairing } => json!({
                    "kind": "pairing", "legs": legs, "pairs": pairing,
                }),
                SeifertCertificate::EulerNonZero(e) => {
                    json!({ "kind": "euler-nonzero", "euler": e.to_string() })
                }
                SeifertCertificate::OddLegCount(n) => json!({ "kind": "odd-legs", "legs": n }),
                SeifertCertificate::NoComplementaryPairing(legs) => {
                    json!({ "kind": "no-pairing", "legs": legs })
                }
            };
            let mut out = Output::ok(
                "seifert",
                format!(
                    "invariants: (0; {}; {:?})\neuler = {}\nverdict: {verdict}",
                    si.b(),
                    si.pairs(),
                    euler_number(&si),
                ),
                json!({ "invariants": seifert_value(&si), "verdict": verdict }),
            );
            out.certificate = cert;
            Ok(out)
        }
        Command::Decide(f) => {
            let (g, _) = load_graph(&f.file)?;
            let decision = decide_bounds(&g).map_err(|e| e.to_string())?;
            match decision {
                Decision::Bounds {
                    orientation,
                    decomposition,
                } => {
                    // Revalidate the certificate before emitting it.
                    let reference = match orientation {
                        Orientation::Given => g.clone(),
                        Orientation::Reversed => dual(&g).map_err(|e| e.to_string())?,
                    };
                    let rebuilt = decomposition.reassemble().map_err(|e| e.to_string())?;
                    if canonical_form(rebuilt.graph()) != canonical_form(&reference) {
                        return Err("internal error: certificate failed revalidation".into());
                    }
                    let mut out = Output::ok(
                        "decide",
                        format!(
                            "Bounds ({} orientation)\n{}",
                            match orientation {
                                Orientation::Given => "given",
                                Orientation::Reversed => "reversed",
                            },
                            decomposition_text(&decomposition),
                        ),
                        json!({
                            "verdict": "bounds",
                            "orientation": format!("{orientation:?}"),
                        }),
                    );
                    out.certificate = decomposition_value(&decomposition);
                    Ok(out)
                }
                Decision::NotBounds { reason } => Ok(Output::ok(
                    "decide",
                    format!("NotBounds: {reason}"),
                    json!({ "verdict": "not-bounds", "reason": reason }),
                )),
                Decision::Inapplicable { reason } => {
                    Ok(Output::inapplicable("decide", format!("Inapplicable: {reason}")))
                }
            }
        }
        Command::Decompose { file, at } => {
            let (g, _) = load_graph(&file)?;
            let candidates: Vec<VertexId> = match at {
                Some(id) => vec![VertexId::new(id)],
                None => plumb::blocks::linearizing_vertices(&g),
            };
            for v in &candidates {
                if !g.contains(v) {
                    return Err(format!("unknown vertex `{v}`"));
                }
                if let Some(d) = decompose(&g, v) {
                    return Ok(Output::ok(
                        "decompose",
                        decomposition_text(&d),
                        json!({ "found": true, "decomposition": decomposition_value(&d) }),
                    ));
                }
            }
            Ok(Output::ok(
                "decompose",
                "no block decomposition".into(),
                json!({ "found": false }),
            ))
        }
        Command::Embed { file, at } => {
            let (g, _) = load_graph(&file)?;
            let v = VertexId::new(at);
            match embed_with_extra_jobs(&g, &v, cli.jobs.max(1)) {
                Ok(Some((s, x))) => {
                    let vectors: Vec<Vec<String>> = s
                        .vectors()
                        .iter()
                        .map(|vv| vv.coords().iter().map(|c| c.to_string()).collect())
                        .collect();
                    let extra: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
                    let mut text = String::from("embedding found:\n");
                    for row in &vectors {
                        text.push_str(&format!("  [{}]\n", row.join(", ")));
                    }
                    text.push_str(&format!("extra vector: [{}]", extra.join(", ")));
                    Ok(Output::ok(
                        "embed",
                        text,
                        json!({ "found": true, "subset": vectors, "extra": extra }),
                    ))
                }
                Ok(None) => Ok(Output::ok(
                    "embed",
                    "no embedding: the lattice obstruction fires".into(),
                    json!({ "found": false }),
                )),
                Err(plumb::lattice::LatticeError::Precondition(msg)) => {
                    Ok(Output::inapplicable("embed", msg))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::LatticeStats(f) => {
            let s = load_subset(&f.file)?;
            let st = stats(&s).map_err(|e| e.to_string())?;
            let text = format!(
                "c = {}\nI = {}\np = {:?}\nbad = {}\nirreducible_components = {:?}",
                st.components, st.invariant_i, st.p, st.bad_components, st.irreducible_components,
            );
            Ok(Output::ok(
                "lattice-stats",
                text,
                json!({
                    "c": st.components,
                    "invariant_i": st.invariant_i,
                    "p": st.p.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                    "bad": st.bad_components,
                    "irreducible_components": st.irreducible_components,
                }),
            ))
        }
        Command::Enumerate {
            rank,
            max_i,
            orthogonal,
        } => {
            let subsets = enumerate_good_subsets(rank, max_i, |st| {
                !orthogonal || st.components == rank
            })
            .map_err(|e| e.to_string())?;
            let mut text = format!("{} orbit(s)\n", subsets.len());
            let mut items = Vec::new();
            for s in &subsets {
                let rows: Vec<Vec<String>> = s
                    .vectors()
                    .iter()
                    .map(|v| v.coords().iter().map(|c| c.to_string()).collect())
                    .collect();
                let st = stats(s).map_err(|e| e.to_string())?;
                text.push_str(&format!(
                    "  vectors {rows:?}  c={} I={} b={}\n",
                    st.components, st.invariant_i, st.bad_components
                ));
                items.push(json!({
                    "vectors": rows,
                    "c": st.components,
                    "invariant_i": st.invariant_i,
                    "bad": st.bad_components,
                }));
            }
            Ok(Output::ok(
                "enumerate",
                text,
                json!({ "count": subsets.len(), "subsets": items }),
            ))
        }
    }
}
