use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use treedim::dimension::{dimension_profile, inequality_sweep};
use treedim::engine::{rigid_level_stabilizer, weakly_branch_evidence};
use treedim::lifting::tree_lifting;
use treedim::matrix::{exhaustive_max_vn, AnyMatrixRep};
use treedim::ncgraph::{construct_vn_via_lifting, construct_vn_weakly_branch, DEFAULT_SEARCH_BOUND};
use treedim::{catalog, AutomatonGroup, Error, ErrorKind, GroupDef, Portrait, TreeGroup};

mod render;

#[derive(Parser, Debug)]
#[command(name = "treedim", version, about = "Finite-depth dimension and representation experiments on tree groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension profile log|G:St(n)| / log|Aut T:St(n)| for n = 1..depth.
    Dim {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rigid stabilizers of the vertices on one level.
    Rist {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        level: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Level-transitivity and rigid-stabilizer evidence for levels 1..n_max.
    Evidence {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        margin: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Level-index inequality for every k + n <= max_total.
    Ineq {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        max_total: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lifting witness for the stabilizer of a level.
    Lift {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        level: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Non-commuting representation of V_n inside the truncation.
    Ncrep {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Lifting)]
        method: Method,
        /// Lifting level (lifting method only).
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: usize,
        /// Also write the labelling in the representation file format.
        #[arg(long)]
        rep_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Checks a matrix labelling file: V_n pattern, invertibility, rank bound.
    Matcheck {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Largest V_n inside GL_k(F_p), by exhaustive search.
    Maxvn {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Serialize)]
struct GroupArgs {
    /// Catalog group name.
    #[arg(long, conflicts_with = "automaton", required_unless_present = "automaton")]
    group: Option<String>,
    /// TOML automaton file.
    #[arg(long)]
    automaton: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Recorded for reproducibility; no command samples randomly.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Lifting,
    WeaklyBranch,
}

/// Truncation context stamped on every record.
#[derive(Clone, Copy, Default)]
struct Context {
    depth: Option<usize>,
    margin: Option<usize>,
    search_bound: Option<usize>,
}

/// What a command produces before rendering.
pub struct Report {
    config: Value,
    records: Vec<Value>,
    summary: Map<String, Value>,
    /// Nonzero status to return after printing (a failed check, not an error).
    status: u8,
}

fn load(group: &GroupArgs) -> Result<GroupDef, Error> {
    match (&group.group, &group.automaton) {
        (Some(name), _) => catalog(name),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            AutomatonGroup::parse_toml(&text).map(GroupDef::Automaton)
        }
        (None, None) => Err(Error::Definition("no group given".into())),
    }
}

fn unfold(group: &GroupArgs, depth: usize) -> Result<TreeGroup, Error> {
    load(group)?.unfold(depth)
}

fn records<T: Serialize>(items: &[T], ctx: Context) -> Vec<Value> {
    items
        .iter()
        .map(|x| stamp(serde_json::to_value(x).expect("serializable"), ctx))
        .collect()
}

fn stamp(mut v: Value, ctx: Context) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("depth".into(), json!(ctx.depth));
        m.insert("margin".into(), json!(ctx.margin));
        m.insert("search_bound".into(), json!(ctx.search_bound));
    }
    v
}

/// One line per non-identity label: `v -> images`, joined with `; `.
fn compact(p: &Portrait) -> String {
    let parts: Vec<String> = p
        .to_text()
        .lines()
        .skip(1)
        .filter(|l| {
            let images = l.split_once("->").map_or("", |x| x.1);
            !images
                .split_whitespace()
                .enumerate()
                .all(|(i, s)| s == i.to_string())
        })
        .map(str::to_string)
        .collect();
    if parts.is_empty() {
        "id".into()
    } else {
        parts.join("; ")
    }
}

fn run(command: &Command) -> Result<Report, Error> {
    let config = serde_json::to_value(ConfigEcho::of(command)).expect("serializable");
    let mut summary = Map::new();
    let mut status = 0;
    let records = match command {
        Command::Dim { group, depth, .. } => {
            let ctx = Context {
                depth: Some(*depth),
                ..Context::default()
            };
            let g = unfold(group, *depth)?;
            let profile = dimension_profile(&g, *depth)?;
            summary.insert("group".into(), json!(profile.group));
            summary.insert("shape".into(), json!(profile.shape));
            summary.insert("window".into(), stamp(serde_json::to_value(&profile.window).unwrap(), ctx));
            records(&profile.records, ctx)
        }
        Command::Rist {
            group, depth, level, ..
        } => {
            let ctx = Context {
                depth: Some(*depth),
                ..Context::default()
            };
            let g = unfold(group, *depth)?;
            let rists = rigid_level_stabilizer(&g, *level)?;
            let rows: Vec<Value> = rists
                .iter()
                .map(|r| {
                    stamp(
                        json!({
                            "vertex": r.vertex.to_string(),
                            "order": r.order().to_string(),
                            "trivial": r.is_trivial(),
                            "generators": r.group.generators().len(),
                        }),
                        ctx,
                    )
                })
                .collect();
            summary.insert("group".into(), json!(g.name()));
            summary.insert("level".into(), json!(level));
            summary.insert("all_nontrivial".into(), json!(rists.iter().all(|r| !r.is_trivial())));
            rows
        }
        Command::Evidence {
            group, n_max, margin, ..
        } => {
            let g = unfold(group, n_max + margin)?;
            let report = weakly_branch_evidence(&g, *n_max, *margin)?;
            summary.insert("group".into(), json!(report.group));
            summary.insert("positive".into(), json!(report.positive()));
            report
                .levels
                .iter()
                .map(|l| {
                    let trivial = l.rist_trivial_flags.iter().filter(|&&t| t).count();
                    json!({
                        "level": l.level,
                        "transitive": l.transitive,
                        "trivial_rists": format!("{trivial}/{}", l.rist_trivial_flags.len()),
                        "depth": l.depth,
                        "margin": l.margin,
                        "search_bound": null,
                    })
                })
                .collect()
        }
        Command::Ineq {
            group, max_total, ..
        } => {
            let ctx = Context {
                depth: Some(*max_total),
                ..Context::default()
            };
            let g = unfold(group, *max_total)?;
            let checks = inequality_sweep(&g, *max_total)?;
            summary.insert("group".into(), json!(g.name()));
            summary.insert("all_hold".into(), json!(checks.iter().all(|c| c.holds)));
            records(&checks, ctx)
        }
        Command::Lift {
            group, depth, level, ..
        } => {
            let ctx = Context {
                depth: Some(*depth),
                ..Context::default()
            };
            let g = unfold(group, *depth)?;
            let lift = tree_lifting(&g, *level)?;
            let rec = lift.record()?;
            summary.insert("group".into(), json!(rec.group));
            summary.insert("level".into(), json!(rec.level));
            summary.insert("i".into(), json!(rec.i));
            summary.insert("k".into(), json!(rec.k));
            summary.insert("route".into(), serde_json::to_value(rec.route).unwrap());
            summary.insert("n_order".into(), json!(rec.n_order));
            let sub = lift.n_subtree()?;
            sub.generators()
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    let gen = TreeGroup::from_vertex_perms("n", lift.subshape(), lift.subdepth(), std::slice::from_ref(a))?;
                    Ok(stamp(
                        json!({
                            "index": j,
                            "generator": compact(&gen.generators()[0]),
                            "lift": compact(&lift.lift(a)?),
                        }),
                        ctx,
                    ))
                })
                .collect::<Result<_, Error>>()?
        }
        Command::Ncrep {
            group,
            depth,
            n,
            method,
            level,
            search_bound,
            rep_out,
            ..
        } => {
            let ctx = Context {
                depth: Some(*depth),
                search_bound: Some(*search_bound),
                ..Context::default()
            };
            let g = unfold(group, *depth)?;
            let c = match method {
                Method::Lifting => construct_vn_via_lifting(&g, *n, *level, *search_bound)?,
                Method::WeaklyBranch => construct_vn_weakly_branch(&g, *n, *search_bound)?,
            };
            let verified = c.rep.verify();
            if let Some(path) = rep_out {
                fs::write(path, c.rep.to_text())?;
            }
            summary.insert("group".into(), json!(c.group));
            summary.insert("n".into(), json!(n));
            summary.insert("lifting_level".into(), json!(c.lifting_level));
            summary.insert("vertex_level".into(), json!(c.level));
            summary.insert("verified".into(), json!(verified.holds));
            c.rep
                .labels
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let name = format!("{}_{}", if j % 2 == 0 { "a" } else { "b" }, j / 2 + 1);
                    stamp(
                        json!({
                            "vertex": name,
                            "tree_vertex": c.vertices[j / 2].to_string(),
                            "label": compact(p),
                        }),
                        ctx,
                    )
                })
                .collect()
        }
        Command::Matcheck { file, .. } => {
            let rep = AnyMatrixRep::parse_text(&fs::read_to_string(file)?)?;
            let ok = rep.verify_pattern()?;
            summary.insert("ring".into(), json!(rep.ring_tag()));
            summary.insert("pattern_ok".into(), json!(ok));
            if ok {
                let b = rep.assert_sqrt_bound()?;
                summary.insert("n".into(), json!(b.n));
                summary.insert("degree".into(), json!(b.degree));
                summary.insert("rank".into(), json!(b.rank));
                summary.insert("bound_ok".into(), json!(b.holds));
                if !b.holds {
                    status = 2;
                }
            } else {
                status = 2;
            }
            vec![]
        }
        Command::Maxvn { p, k, .. } => {
            let r = exhaustive_max_vn(*p, *k)?;
            summary.insert("p".into(), json!(r.p));
            summary.insert("degree".into(), json!(r.degree));
            summary.insert("order".into(), json!(r.order));
            summary.insert("max_n".into(), json!(r.max_n));
            summary.insert("within_bound".into(), json!(r.max_n <= k * k));
            vec![]
        }
    };
    Ok(Report {
        config,
        records,
        summary,
        status,
    })
}

/// Flattened echo of every option of the command.
#[derive(Serialize)]
struct ConfigEcho<'a> {
    command: &'static str,
    #[serde(flatten)]
    fields: &'a Command,
}

impl<'a> ConfigEcho<'a> {
    fn of(command: &'a Command) -> Self {
        let name = match command {
            Command::Dim { .. } => "dim",
            Command::Rist { .. } => "rist",
            Command::Evidence { .. } => "evidence",
            Command::Ineq { .. } => "ineq",
            Command::Lift { .. } => "lift",
            Command::Ncrep { .. } => "ncrep",
            Command::Matcheck { .. } => "matcheck",
            Command::Maxvn { .. } => "maxvn",
        };
        ConfigEcho {
            command: name,
            fields: command,
        }
    }
}

impl Serialize for Command {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = match self {
            Command::Dim { group, depth, out } => json!({"group": group, "depth": depth, "out": out}),
            Command::Rist {
                group,
                depth,
                level,
                out,
            } => json!({"group": group, "depth": depth, "level": level, "out": out}),
            Command::Evidence {
                group,
                n_max,
                margin,
                out,
            } => json!({"group": group, "n_max": n_max, "margin": margin, "out": out}),
            Command::Ineq { group, max_total, out } => {
                json!({"group": group, "max_total": max_total, "out": out})
            }
            Command::Lift {
                group,
                depth,
                level,
                out,
            } => json!({"group": group, "depth": depth, "level": level, "out": out}),
            Command::Ncrep {
                group,
                depth,
                n,
                method,
                level,
                search_bound,
                rep_out,
                out,
            } => json!({
                "group": group, "depth": depth, "n": n, "method": method, "level": level,
                "search_bound": search_bound, "rep_out": rep_out, "out": out,
            }),
            Command::Matcheck { file, out } => json!({"file": file, "out": out}),
            Command::Maxvn { p, k, out } => json!({"p": p, "k": k, "out": out}),
        };
        // Lift the shared argument groups to the top level.
        let mut flat = Map::new();
        for (key, x) in v.as_object().expect("object") {
            match (key.as_str(), x) {
                ("group" | "out", Value::Object(inner)) => flat.extend(inner.clone()),
                _ => {
                    flat.insert(key.clone(), x.clone());
                }
            }
        }
        flat.serialize(s)
    }
}

fn out_args(command: &Command) -> &OutArgs {
    match command {
        Command::Dim { out, .. }
        | Command::Rist { out, .. }
        | Command::Evidence { out, .. }
        | Command::Ineq { out, .. }
        | Command::Lift { out, .. }
        | Command::Ncrep { out, .. }
        | Command::Matcheck { out, .. }
        | Command::Maxvn { out, .. } => out,
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Precondition => 2,
        ErrorKind::SearchExhausted => 3,
        ErrorKind::Budget => 4,
        ErrorKind::Io => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = out_args(&cli.command);
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match out.format {
        Format::Table => render::table(&report),
        Format::Json => render::json(&report),
    };
    let written = match &out.output {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    ExitCode::from(report.status)
}
