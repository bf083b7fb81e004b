//! The `vdc` command line. Every command prints a one-line verdict followed
//! by details, or a JSON document with `--json`. Exit codes: 0 success or
//! true, 1 a clean negative answer, 2 usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::collapse;
use crate::complex::{Complex2, Vertex};
use crate::constructions::{self, UniqueSearch, X3CInstance};
use crate::degree_reduction::{self, DegreeSet, Orientation};
use crate::engine::{self, ReductionWitness, SearchOptions};
use crate::error::{Error, Result};
use crate::family::{self, FamilySpec};
use crate::graph::Graph;

#[derive(Parser, Debug)]
#[command(name = "vdc", version, about = "Vertex decompositions of 2-complexes and graphs")]
struct Cli {
    /// Print a structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run exact searches on the thread pool.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// all-trees | stars:<n|inf> | stars-in:{a,b} | trees:<file> | trees:{point,edge,P3} | discrete:<n>
    #[arg(long)]
    family: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide F-reducibility and print a witness.
    Reduce {
        #[command(flatten)]
        family: FamilyArg,
        /// Use the greedy reduction instead of the exact search.
        #[arg(long)]
        greedy: bool,
        /// First vertex removed by the greedy reduction.
        #[arg(long, requires = "greedy")]
        first: Option<String>,
        /// Require the reduction to end at this vertex.
        #[arg(long, conflicts_with = "greedy")]
        target: Option<String>,
        complex: PathBuf,
    },
    /// List the initial vertices and their links.
    Initial {
        #[command(flatten)]
        family: FamilyArg,
        complex: PathBuf,
    },
    /// Search for a base complex and assemble a complex on which greedy fails.
    GreedyTrap {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Print the graph built from an exact-cover instance.
    Gadget { instance: PathBuf },
    /// Compare exhaustive exact cover with reducibility of the gadget.
    X3cCheck { instance: PathBuf },
    /// Evaluate the three cone conditions for a graph and degree set.
    ConeEquiv {
        #[arg(long)]
        degrees: String,
        graph: PathBuf,
    },
    /// Test whether a complex is a 2-tree.
    TwoTree { complex: PathBuf },
    /// Decompose a complex into maximal sub-2-trees.
    Blocks { complex: PathBuf },
    /// Print the barycentric subdivision.
    Sd { complex: PathBuf },
    /// Collapsibility of K against reducibility of sd K.
    SdReport { complex: PathBuf },
    /// Greedy collapse to a point.
    Collapse { complex: PathBuf },
    /// Degeneracy of a graph.
    Degeneracy { graph: PathBuf },
    /// Acyclic orientation from a reduction, or a reduction from an orientation.
    Orient {
        #[arg(long)]
        degrees: String,
        /// Orientation file with lines `tail -> head`.
        #[arg(long)]
        orientation: Option<PathBuf>,
        graph: PathBuf,
    },
    /// Randomised search for a reducible complex with one initial vertex.
    SearchUnique {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Required link of the initial vertex: point, edge, P<n> or star<n>.
        #[arg(long)]
        link: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
    /// Replay a witness printed by `reduce`.
    Verify {
        #[command(flatten)]
        family: FamilyArg,
        /// The witness must end at this vertex.
        #[arg(long)]
        target: Option<String>,
        complex: PathBuf,
        witness: PathBuf,
    },
}

struct Outcome {
    success: bool,
    verdict: String,
    detail: String,
    json: Value,
}

impl Outcome {
    fn new(success: bool, verdict: impl Into<String>, detail: impl Into<String>, json: Value) -> Self {
        Outcome {
            success,
            verdict: verdict.into(),
            detail: detail.into(),
            json,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let opts = SearchOptions { parallel: cli.parallel };
    match dispatch(&cli.command, opts) {
        Ok(o) => {
            let written = if cli.json {
                let mut doc = o.json;
                if let Value::Object(map) = &mut doc {
                    map.insert("verdict".into(), Value::String(o.verdict));
                }
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serialisable"))
            } else {
                write!(out, "{}\n{}", o.verdict, o.detail)
            };
            if written.is_err() {
                return 2;
            }
            if o.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

fn read_complex(path: &Path) -> Result<Complex2> {
    Complex2::parse(&read(path)?)
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?)
}

fn vertex(label: &str) -> Result<Vertex> {
    Vertex::new(label)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serialisable")
}

/// Drops a leading verdict line so that `reduce` output can be fed back to
/// `verify` unchanged.
fn strip_verdict(text: &str) -> String {
    let mut lines = text.lines().peekable();
    if let Some(first) = lines.peek() {
        let t = first.trim();
        if !t.is_empty() && t.chars().all(|c| c.is_ascii_uppercase() || c == '_') {
            lines.next();
        }
    }
    lines.map(|l| format!("{l}\n")).collect()
}

fn witness_detail(w: &ReductionWitness) -> String {
    w.to_string()
}

fn dispatch(cmd: &Command, opts: SearchOptions) -> Result<Outcome> {
    match cmd {
        Command::Reduce {
            family,
            greedy,
            first,
            target,
            complex,
        } => {
            let f = FamilySpec::parse(&family.family)?;
            let k = read_complex(complex)?;
            if *greedy {
                let first = first.as_deref().map(vertex).transpose()?;
                let outcome = engine::greedy_reduce(&k, &f, first.as_ref())?;
                let reduced = outcome.verdict == engine::GreedyVerdict::Reduced;
                let mut detail = witness_detail(&outcome.witness);
                if let Some(stuck) = outcome.stuck_complex() {
                    for line in stuck.to_face_list().lines() {
                        detail.push_str(&format!("# stuck: {line}\n"));
                    }
                }
                let verdict = if reduced { "REDUCED" } else { "STUCK" };
                return Ok(Outcome::new(reduced, verdict, detail, to_json(&outcome)));
            }
            let w = match target {
                Some(t) => engine::reduce_to_target_with(&k, &f, &vertex(t)?, opts)?,
                None => engine::decide_reducible_with(&k, &f, opts)?,
            };
            Ok(match w {
                Some(w) => Outcome::new(
                    true,
                    "REDUCIBLE",
                    witness_detail(&w),
                    json!({ "reducible": true, "witness": w }),
                ),
                None => Outcome::new(false, "NOT_REDUCIBLE", "", json!({ "reducible": false })),
            })
        }
        Command::Initial { family, complex } => {
            let f = FamilySpec::parse(&family.family)?;
            let k = read_complex(complex)?;
            let init = engine::initial_vertices(&k, &f)?;
            let mut detail = String::new();
            let mut entries = Vec::new();
            for v in &init {
                let link = k.link(v)?;
                detail.push_str(&format!("{v} : {}\n", link.to_inline()));
                entries.push(json!({ "vertex": v, "link": link }));
            }
            let verdict = format!("INITIAL {}", init.len());
            Ok(Outcome::new(
                !init.is_empty(),
                verdict,
                detail,
                json!({ "initial": entries }),
            ))
        }
        Command::GreedyTrap { seed, budget } => greedy_trap(*seed, *budget),
        Command::Gadget { instance } => {
            let inst = X3CInstance::parse(&read(instance)?)?;
            let g = inst.gadget();
            let verdict = format!("# GADGET vertices={} edges={}", g.num_vertices(), g.num_edges());
            let json = json!({ "vertices": g.num_vertices(), "edges": g.num_edges(), "graph": g });
            Ok(Outcome::new(true, verdict, g.to_face_list(), json))
        }
        Command::X3cCheck { instance } => {
            let inst = X3CInstance::parse(&read(instance)?)?;
            let check = constructions::x3c_check(&inst)?;
            let cover = |c: &Option<Vec<usize>>| c.as_ref().map_or("none".to_string(), |c| inst.format_cover(c));
            let detail = format!(
                "gadget: {} vertices, {} edges\nbrute force: {}\n{{0,{}}}-reducible: {}\nsink blocks: {}\n",
                check.gadget_vertices,
                check.gadget_edges,
                cover(&check.brute_force),
                inst.d().unwrap_or(3),
                check.witness.is_some(),
                cover(&check.extracted),
            );
            let verdict = if !check.agrees() {
                "MISMATCH".to_string()
            } else {
                match &check.extracted {
                    Some(c) => format!("COVER {}", inst.format_cover(c)),
                    None => "NO_COVER".to_string(),
                }
            };
            let ok = check.agrees() && check.extracted.is_some();
            Ok(Outcome::new(ok, verdict, detail, to_json(&check)))
        }
        Command::ConeEquiv { degrees, graph } => {
            let a = DegreeSet::parse(degrees)?;
            let g = read_graph(graph)?;
            let r = constructions::cones::cone_equivalence_check_with(&g, &a, opts)?;
            let detail = format!(
                "C(G+G) reducible: {}\nCG reducible to apex: {}\nG {a}-reducible: {}\n",
                r.doubled_cone, r.cone_to_apex, r.graph
            );
            let verdict = if r.all_equal() { "EQUIVALENT" } else { "NOT_EQUIVALENT" };
            Ok(Outcome::new(r.all_equal(), verdict, detail, to_json(&r)))
        }
        Command::TwoTree { complex } => {
            let k = read_complex(complex)?;
            let r = constructions::is_2tree(&k);
            let detail = format!(
                "vertices {} edges {} triangles {}\nadjacency graph: {} nodes, {} arcs, tree: {}\n",
                k.num_vertices(),
                k.num_edges(),
                k.num_triangles(),
                r.adjacency.num_vertices(),
                r.adjacency.num_edges(),
                r.adjacency.is_tree()
            );
            let verdict = if r.is_2tree { "TWO_TREE" } else { "NOT_TWO_TREE" };
            Ok(Outcome::new(r.is_2tree, verdict, detail, to_json(&r)))
        }
        Command::Blocks { complex } => {
            let k = read_complex(complex)?;
            let r = constructions::block_decomposition(&k);
            let mut detail = String::new();
            for (i, b) in r.blocks.iter().enumerate() {
                let faces: Vec<String> = b.maximal_faces().iter().map(ToString::to_string).collect();
                detail.push_str(&format!("block {} : {}\n", i + 1, faces.join(", ")));
            }
            detail.push_str(&format!(
                "blocks are 2-trees: {}\nblock tree: {}\n",
                r.blocks_are_2trees, r.block_tree
            ));
            let verdict = if r.reducible() { "REDUCIBLE" } else { "NOT_REDUCIBLE" };
            Ok(Outcome::new(r.reducible(), verdict, detail, to_json(&r)))
        }
        Command::Sd { complex } => {
            let k = read_complex(complex)?;
            let sd = k.barycentric_subdivision()?;
            let verdict = format!(
                "# SD vertices={} edges={} triangles={}",
                sd.num_vertices(),
                sd.num_edges(),
                sd.num_triangles()
            );
            Ok(Outcome::new(true, verdict, sd.to_face_list(), json!({ "complex": sd })))
        }
        Command::SdReport { complex } => {
            let k = read_complex(complex)?;
            let r = collapse::sd_equivalence_report_with(&k, opts)?;
            let detail = format!(
                "K collapsible: {}\nsd K {{point,P3,P5}}-reducible: {}\nsd K nonevasive: {}\nsd K collapsible: {}\n",
                r.collapsible, r.sd_restricted, r.sd_nonevasive, r.sd_collapsible
            );
            let verdict = match (r.all_equal(), r.collapsible) {
                (false, _) => "MISMATCH",
                (true, true) => "ALL_TRUE",
                (true, false) => "ALL_FALSE",
            };
            Ok(Outcome::new(
                r.all_equal() && r.collapsible,
                verdict,
                detail,
                to_json(&r),
            ))
        }
        Command::Collapse { complex } => {
            let k = read_complex(complex)?;
            let w = collapse::collapse_greedily(&k, None)?;
            let ok = w.final_complex.is_point();
            let mut detail = w.to_string();
            if !ok {
                for line in w.final_complex.to_face_list().lines() {
                    detail.push_str(&format!("# stuck: {line}\n"));
                }
            }
            let verdict = if ok { "COLLAPSIBLE" } else { "NOT_COLLAPSIBLE" };
            Ok(Outcome::new(
                ok,
                verdict,
                detail,
                json!({ "collapsible": ok, "witness": w }),
            ))
        }
        Command::Degeneracy { graph } => {
            let g = read_graph(graph)?;
            let d = degree_reduction::degeneracy(&g)?;
            Ok(Outcome::new(true, d.to_string(), "", json!({ "degeneracy": d })))
        }
        Command::Orient {
            degrees,
            orientation,
            graph,
        } => {
            let a = DegreeSet::parse(degrees)?;
            let g = read_graph(graph)?;
            match orientation {
                Some(path) => {
                    let o = Orientation::parse(&read(path)?)?;
                    match degree_reduction::witness_from_orientation(&g, &o, &a) {
                        Ok(w) => Ok(Outcome::new(true, "REDUCIBLE", w.to_string(), to_json(&w))),
                        Err(e @ (Error::CyclicOrientation | Error::OutDegree { .. })) => Ok(Outcome::new(
                            false,
                            "NOT_REDUCIBLE",
                            format!("# {e}\n"),
                            json!({ "reason": e.to_string() }),
                        )),
                        Err(e) => Err(e),
                    }
                }
                None => match degree_reduction::a_reducible_with(&g, &a, opts)? {
                    Some(w) => {
                        let o = degree_reduction::orientation_from_witness(&g, &w)?;
                        let json = json!({ "witness": w, "orientation": o.to_string() });
                        Ok(Outcome::new(true, "REDUCIBLE", o.to_string(), json))
                    }
                    None => Ok(Outcome::new(false, "NOT_REDUCIBLE", "", json!({}))),
                },
            }
        }
        Command::SearchUnique {
            family,
            budget,
            seed,
            link,
            max_vertices,
        } => {
            let f = FamilySpec::parse(&family.family)?;
            let mut cfg = UniqueSearch::new(f, *budget, *seed);
            cfg.max_vertices = *max_vertices;
            cfg.required_link = link.as_deref().map(family::named_tree).transpose()?;
            match constructions::search_unique_initial_with(&cfg, |_| true) {
                Ok(hit) => {
                    let link = hit.complex.link(&hit.initial)?;
                    let verdict = format!(
                        "FOUND trial={} vertex={} link={}",
                        hit.trial,
                        hit.initial,
                        family::tree_name(&link)
                    );
                    Ok(Outcome::new(true, verdict, hit.complex.to_face_list(), to_json(&hit)))
                }
                Err(Error::BudgetExhausted(n)) => Ok(Outcome::new(
                    false,
                    format!("NOT_FOUND trials={n}"),
                    "",
                    json!({ "found": false }),
                )),
                Err(e) => Err(e),
            }
        }
        Command::Verify {
            family,
            target,
            complex,
            witness,
        } => {
            let f = FamilySpec::parse(&family.family)?;
            let k = read_complex(complex)?;
            let steps = ReductionWitness::parse_steps(&strip_verdict(&read(witness)?))?;
            let end = match engine::replay_steps(&k, &f, &steps) {
                Ok(end) => end,
                Err(e @ (Error::InvalidWitness(_) | Error::MissingVertex(_) | Error::Invariant(_))) => {
                    return Ok(Outcome::new(
                        false,
                        "INVALID",
                        format!("# {e}\n"),
                        json!({ "reason": e.to_string() }),
                    ));
                }
                Err(e) => return Err(e),
            };
            let expected = match target {
                Some(t) => end == Complex2::point(vertex(t)?),
                None => end.is_point(),
            };
            if expected {
                Ok(Outcome::new(
                    true,
                    "VALID",
                    format!("# {} steps\n", steps.len()),
                    json!({ "steps": steps.len() }),
                ))
            } else {
                let detail = format!("# witness ends at a complex with {} vertices\n", end.num_vertices());
                Ok(Outcome::new(false, "INVALID", detail, json!({ "remaining": end })))
            }
        }
    }
}

fn greedy_trap(seed: u64, budget: u64) -> Result<Outcome> {
    let f = FamilySpec::trees(["point", "edge", "P3", "P4"])?;
    let mut cfg = UniqueSearch::new(f.clone(), budget, seed);
    cfg.required_link = Some(Graph::path(3));
    let base =
        match constructions::search_unique_initial_with(&cfg, |h| constructions::greedy_trap(&h.complex, &f).is_ok()) {
            Ok(b) => b,
            Err(Error::BudgetExhausted(n)) => {
                return Ok(Outcome::new(
                    false,
                    format!("NOT_FOUND trials={n}"),
                    "",
                    json!({ "found": false }),
                ))
            }
            Err(e) => return Err(e),
        };
    let trap = constructions::greedy_trap(&base.complex, &f)?;
    let greedy = engine::greedy_reduce(&trap.complex, &f, Some(&trap.a))?;
    let exact = engine::decide_reducible(&trap.complex, &f)?.is_some();
    let after_a = trap.complex.delete_vertex(&trap.a)?;
    let remaining_initial = engine::initial_vertices(&after_a, &f)?.len();
    let stuck = greedy.verdict == engine::GreedyVerdict::Stuck;
    let verdict = format!(
        "TRAP reducible={exact} greedy_from_{}={} initial_after_{}={remaining_initial}",
        trap.a,
        if stuck { "STUCK" } else { "REDUCED" },
        trap.a
    );
    let mut detail = format!("# base found at trial {} (seed {seed})\n", base.trial);
    detail.push_str(&trap.complex.to_face_list());
    detail.push_str("# planned reduction\n");
    for line in trap.witness.to_string().lines() {
        detail.push_str(&format!("# {line}\n"));
    }
    let ok = exact && stuck && remaining_initial == 0;
    let json = json!({
        "base": base.complex,
        "trap": trap,
        "reducible": exact,
        "greedy_stuck": stuck,
        "initial_after_a": remaining_initial,
    });
    Ok(Outcome::new(ok, verdict, detail, json))
}
