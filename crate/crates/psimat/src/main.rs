use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use psimat::axioms::{base_extend, check_axioms, reconstruct};
use psimat::games::{
    duality_check, induced_matroid, psi_circuit_exists, tgame_psi, GameKind, Partition, Player, TgamePsi,
};
use psimat::graphs::{
    degree_tree, gen_t2_k3, gen_t_k2, normal_spanning_tree, t_k2_structure, torso, tree_structure_from_nst,
    undomination_graph, walk_g, walk_u,
};
use psimat::matroid::Matroid;
use psimat::sets::Ground;
use psimat::tom::{delta_glue, TreePresentation};
use psimat::{selftest, text, Error, Result};

#[derive(Parser)]
#[command(name = "psimat", version, about = "Matroids, orthogonality axioms, trees of matroids and circuit games")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the eight orthogonality axioms on a set-system file.
    CheckAxioms { system: String },
    /// Rebuild the matroid whose circuits are C of a set-system file.
    Reconstruct { system: String },
    /// Run the I/J base construction over an enumeration of X.
    BaseExtend {
        system: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        independent: Vec<String>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        within: Vec<String>,
        /// Enumeration of X; defaults to the ground order.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        order: Vec<String>,
    },
    /// Circuits, cocircuits, dual and an optional minor of a matroid file.
    MatroidInfo {
        matroid: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        contract: Vec<String>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        delete: Vec<String>,
    },
    /// △-glue two represented matroids.
    Glue { rep1: String, rep2: String },
    /// Solve the circuit game for one edge and partition.
    Solve {
        presentation: String,
        #[command(flatten)]
        part: PartArgs,
        #[arg(long)]
        representable: bool,
        /// Deepest truncation the witness is checked at.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// The matroid induced on the real edges.
    Induced { presentation: String },
    /// Compare Colin's status in the game and the cocircuit game; all
    /// partitions unless an edge is given.
    DualityCheck {
        presentation: String,
        #[command(flatten)]
        part: OptPartArgs,
        #[arg(long)]
        representable: bool,
    },
    /// Tree structure from the normal spanning tree at a root.
    TreeStructure {
        graph: String,
        #[arg(long)]
        root: String,
    },
    /// The torso of one class of a tree structure.
    Torso {
        graph: String,
        structure: String,
        #[arg(long)]
        class: String,
    },
    /// The undomination graph U(G, T); with --walk, also u(P) and g(u(P)).
    Undominate {
        graph: String,
        tree: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        walk: Vec<String>,
        #[arg(long)]
        t0: Option<String>,
        #[arg(long)]
        t1: Option<String>,
    },
    /// Generate an example instance.
    Gen {
        family: Family,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// For tgame: which set of ends is Ψ.
        #[arg(long, value_enum, default_value_t = Psi::All)]
        psi: Psi,
        /// For tk2 and t2k3: print the tree structure instead of the graph.
        #[arg(long)]
        structure: bool,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Run only these criteria (1-12).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        only: Vec<usize>,
    },
}

#[derive(clap::Args)]
struct PartArgs {
    #[arg(long)]
    edge: String,
    /// Edges Colin must avoid outside of; unnamed edges join P_C.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pco: Vec<String>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pde: Vec<String>,
}

#[derive(clap::Args)]
struct OptPartArgs {
    #[arg(long)]
    edge: Option<String>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pco: Vec<String>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pde: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Tgame,
    Tk2,
    T2k3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Psi {
    All,
    None,
    Buchi,
    Cobuchi,
}

/// Text and JSON forms of one report, plus the exit status.
struct Report {
    text: String,
    json: Value,
    status: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, status: 0 }
    }
}

fn read(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("{path}: {e}")))
    }
}

fn clean(labels: &[String]) -> BTreeSet<String> {
    labels.iter().filter(|l| !l.is_empty()).cloned().collect()
}

fn show(set: &BTreeSet<String>) -> String {
    format!("{{{}}}", set.iter().cloned().collect::<Vec<_>>().join(","))
}

fn sets_json(g: &Ground, ms: &[u64]) -> Value {
    json!(ms.iter().map(|&m| g.list(m)).collect::<Vec<_>>())
}

fn matroid_json(m: &Matroid) -> Value {
    json!({
        "ground": m.ground().labels(),
        "rank": m.rank(),
        "circuits": sets_json(m.ground(), m.circuits()),
        "cocircuits": sets_json(m.ground(), m.cocircuits()),
    })
}

fn partition(ground: &Ground, edge: &str, pco: &[String], pde: &[String]) -> Result<Partition> {
    let pd = clean(pde);
    let mut pc = clean(pco);
    pc.extend(
        ground
            .labels()
            .iter()
            .filter(|l| *l != edge && !pd.contains(*l))
            .cloned(),
    );
    Partition::new(ground, edge, pc, pd)
}

fn kind(p: &TreePresentation, representable: bool) -> Result<GameKind> {
    if representable {
        if !p.is_represented() {
            return Err(Error::input("--representable needs a representation at every node"));
        }
        Ok(GameKind::Representable)
    } else {
        GameKind::for_presentation(p)
    }
}

fn check_axioms_verb(path: &str) -> Result<Report> {
    let (name, s) = text::parse_system(&read(path)?)?;
    let r = check_axioms(&s)?;
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|(a, w)| json!({"axiom": a.to_string(), "pass": w.is_none(), "witness": w.as_ref().map(|w| r.describe(w))}))
        .collect();
    Ok(Report {
        text: format!("system {name}\n{r}\n"),
        json: json!({"system": name, "passed": r.passed(), "verdicts": verdicts}),
        status: if r.all_pass() { 0 } else { 1 },
    })
}

fn reconstruct_verb(path: &str) -> Result<Report> {
    let (name, s) = text::parse_system(&read(path)?)?;
    let m = reconstruct(&s)?;
    Ok(Report::ok(text::write_matroid(&name, &m, None), matroid_json(&m)))
}

fn base_extend_verb(path: &str, independent: &[String], within: &[String], order: &[String]) -> Result<Report> {
    let (name, s) = text::parse_system(&read(path)?)?;
    let g = &s.ground;
    let i = g.mask(clean(independent))?;
    let x = g.mask(clean(within))?;
    let order: Vec<usize> = if order.is_empty() {
        psimat::sets::bits(x).collect()
    } else {
        order
            .iter()
            .map(|l| g.index(l).ok_or_else(|| Error::input(format!("{l} is not in the ground set"))))
            .collect::<Result<_>>()?
    };
    let b = base_extend(&s, i, x, &order)?;
    let mut out = format!("system {name}\n");
    for st in &b.steps {
        let _ = write!(out, "step {}: {:?}", g.label(st.element), st.kind);
        if let Some(c) = st.chosen {
            let _ = write!(out, " via {}", g.show(c));
        }
        let _ = writeln!(out, "; I = {}, J = {}", g.show(st.i), g.show(st.j));
    }
    let _ = writeln!(out, "independent: {}", g.show(b.independent));
    let _ = writeln!(out, "rest: {}", g.show(b.rest));
    let steps: Vec<Value> = b
        .steps
        .iter()
        .map(|st| {
            json!({
                "element": g.label(st.element),
                "kind": format!("{:?}", st.kind),
                "chosen": st.chosen.map(|c| g.list(c)),
                "i": g.list(st.i),
                "j": g.list(st.j),
            })
        })
        .collect();
    Ok(Report::ok(
        out,
        json!({"system": name, "steps": steps, "independent": g.list(b.independent), "rest": g.list(b.rest)}),
    ))
}

fn matroid_info_verb(path: &str, contract: &[String], delete: &[String]) -> Result<Report> {
    let doc = text::parse_matroid(&read(path)?)?;
    let m = &doc.matroid;
    let dual = m.dual();
    let mut out = format!("matroid {}\n{m}", doc.name);
    let _ = writeln!(out, "bases: {}", m.bases().len());
    let _ = write!(out, "dual\n{dual}");
    let mut js = json!({"name": doc.name, "matroid": matroid_json(m), "bases": m.bases().len(), "dual": matroid_json(&dual)});
    let (c, d) = (clean(contract), clean(delete));
    if !c.is_empty() || !d.is_empty() {
        let minor = m.minor_by_labels(c.iter().map(String::as_str), d.iter().map(String::as_str))?;
        let _ = write!(out, "minor / {} \\ {}\n{minor}", show(&c), show(&d));
        js["minor"] = matroid_json(&minor);
    }
    Ok(Report::ok(out, js))
}

fn glue_verb(p1: &str, p2: &str) -> Result<Report> {
    let a = text::parse_matroid(&read(p1)?)?;
    let b = text::parse_matroid(&read(p2)?)?;
    let (Some(u1), Some(u2)) = (&a.rep, &b.rep) else {
        return Err(Error::input("glue needs two represented matroids"));
    };
    let u = delta_glue(u1, u2)?;
    let m = Matroid::from_representation(&u)?;
    let name = format!("{}+{}", a.name, b.name);
    Ok(Report::ok(text::write_matroid(&name, &m, Some(&u)), matroid_json(&m)))
}

fn solve_verb(path: &str, part: &PartArgs, representable: bool, depth: usize) -> Result<Report> {
    let doc = text::parse_presentation(&read(path)?)?;
    let p = &doc.presentation;
    let part = partition(p.ground(), &part.edge, &part.pco, &part.pde)?;
    let kind = kind(p, representable)?;
    let v = psi_circuit_exists(p, &part, kind, depth)?;
    let e = &part.e;
    let witness = v.witnesses.iter().rev().find(|w| w.valid).map(|w| &w.set);
    let single = BTreeSet::from([e.clone()]);
    let verdict = match (v.winner, witness) {
        (Player::Sarah, Some(s)) if *s == single => format!("{e} is a Ψ-circuit (loop)"),
        (Player::Sarah, Some(s)) => format!("{e} lies in the Ψ-circuit {}", show(s)),
        (Player::Sarah, None) => format!("{e} lies in a Ψ-circuit inside {{{e}}} ∪ P_C"),
        (Player::Colin, Some(s)) if *s == single => format!("{e} is a Ψᶜ-cocircuit (coloop)"),
        (Player::Colin, Some(s)) => format!("{e} lies in the Ψᶜ-cocircuit {}", show(s)),
        (Player::Colin, None) => format!("{e} lies in a Ψᶜ-cocircuit inside {{{e}}} ∪ P_D"),
    };
    let mut out = format!("presentation: {}\n", p.name);
    let _ = writeln!(out, "edge: {e}\nP_C: {}\nP_D: {}", show(&part.pc), show(&part.pd));
    let _ = writeln!(out, "game: {kind:?}\npositions: {}", v.positions);
    let _ = writeln!(out, "winner: {}; {verdict}", v.winner);
    for w in &v.witnesses {
        let _ = writeln!(out, "witness depth {}: {} {}", w.depth, show(&w.set), if w.valid { "valid" } else { "INVALID" });
    }
    let _ = writeln!(out, "strategy{}", if v.dual { " (cocircuit game)" } else { "" });
    for l in &v.automaton {
        let _ = writeln!(out, "  {} | {} | {} | {}", l.at, l.entry, l.challenge, l.play);
    }
    out.push_str("end\n");
    let js = json!({
        "presentation": p.name,
        "edge": e,
        "pc": part.pc,
        "pd": part.pd,
        "game": format!("{kind:?}"),
        "positions": v.positions,
        "winner": v.winner,
        "verdict": verdict,
        "dual": v.dual,
        "witnesses": v.witnesses,
        "strategy": v.automaton,
    });
    Ok(Report::ok(out, js))
}

fn induced_verb(path: &str) -> Result<Report> {
    let doc = text::parse_presentation(&read(path)?)?;
    let m = induced_matroid(&doc.presentation)?;
    Ok(Report::ok(text::write_matroid(&doc.presentation.name, &m, None), matroid_json(&m)))
}

fn duality_check_verb(path: &str, part: &OptPartArgs, representable: bool) -> Result<Report> {
    let doc = text::parse_presentation(&read(path)?)?;
    let p = &doc.presentation;
    let kind = kind(p, representable)?;
    let g = p.ground();
    let parts: Vec<Partition> = match &part.edge {
        Some(e) => vec![partition(g, e, &part.pco, &part.pde)?],
        None => (1..=g.all())
            .flat_map(|s| psimat::sets::bits(s).map(move |e| Partition::of_set(g, e, s)))
            .collect(),
    };
    let mut out = format!("presentation: {}\ngame: {kind:?}\n", p.name);
    let mut rows = Vec::new();
    for part in &parts {
        let r = duality_check(p, part, kind)?;
        let _ = writeln!(
            out,
            "{} | P_C {} | P_D {} | colin wins game: {} | colin wins cogame: {}",
            part.e,
            show(&part.pc),
            show(&part.pd),
            r.colin_wins_game,
            r.colin_wins_cogame
        );
        rows.push(json!({"edge": part.e, "pc": part.pc, "pd": part.pd, "report": r}));
    }
    let _ = writeln!(out, "agree: {}/{}", parts.len(), parts.len());
    Ok(Report::ok(out, json!({"presentation": p.name, "game": format!("{kind:?}"), "checks": rows})))
}

fn graph_json(g: &psimat::graphs::Graph) -> Value {
    json!({
        "name": g.name,
        "vertices": g.vertices(),
        "edges": g.edges().iter().map(|e| json!([e.u, e.v, e.label])).collect::<Vec<_>>(),
    })
}

fn structure_json(ts: &psimat::graphs::TreeStructure) -> Value {
    json!({
        "classes": ts.classes().iter().map(|c| json!({"name": c.name, "vertices": c.vertices})).collect::<Vec<_>>(),
        "edges": ts.edges().iter().map(|&(a, b)| json!([ts.classes()[a].name, ts.classes()[b].name])).collect::<Vec<_>>(),
    })
}

fn tree_structure_verb(path: &str, root: &str) -> Result<Report> {
    let g = text::parse_graph(&read(path)?)?;
    let f = normal_spanning_tree(&g, root)?;
    let ts = tree_structure_from_nst(&g, &f)?;
    Ok(Report::ok(text::write_structure(&g.name, &ts), structure_json(&ts)))
}

fn torso_verb(gpath: &str, spath: &str, class: &str) -> Result<Report> {
    let g = text::parse_graph(&read(gpath)?)?;
    let ts = text::parse_structure(&read(spath)?, &g)?;
    let t = ts
        .class_index(class)
        .ok_or_else(|| Error::input(format!("no class named {class}")))?;
    let h = torso(&g, &ts, t)?;
    Ok(Report::ok(text::write_graph(&h), graph_json(&h)))
}

fn undominate_verb(gpath: &str, tpath: &str, walk: &[String], t0: Option<&str>, t1: Option<&str>) -> Result<Report> {
    if gpath == "-" && tpath == "-" {
        return Err(Error::input("only one input can come from stdin"));
    }
    let g = text::parse_graph(&read(gpath)?)?;
    let t = text::parse_graph(&read(tpath)?)?;
    let u = undomination_graph(&g, &t)?;
    let mut out = text::write_graph(&u.graph);
    let mut js = json!({"graph": graph_json(&u.graph)});
    if !walk.is_empty() {
        let t0 = t0.unwrap_or(&walk[0]);
        let t1 = t1.unwrap_or(&walk[walk.len() - 1]);
        let pu = walk_u(&g, &t, walk, t0, t1)?;
        let back = walk_g(&g, &t, &pu)?;
        let pu_text: Vec<String> = pu.iter().map(|(v, s)| format!("{v}@{s}")).collect();
        let _ = writeln!(out, "u(P): {}", pu_text.join(" "));
        let _ = writeln!(out, "g(u(P)): {}", back.join(" "));
        let _ = writeln!(out, "round trip: {}", if back == walk { "ok" } else { "FAIL" });
        js["u"] = json!(pu_text);
        js["g"] = json!(back);
        if back != walk {
            return Err(Error::invariant("g(u(P)) differs from P"));
        }
    }
    Ok(Report::ok(out, js))
}

fn gen_verb(family: Family, depth: usize, psi: Psi, structure: bool) -> Result<Report> {
    let (g, ts) = match family {
        Family::Tgame => {
            let psi = match psi {
                Psi::All => TgamePsi::All,
                Psi::None => TgamePsi::None,
                Psi::Buchi => TgamePsi::Buchi,
                Psi::Cobuchi => TgamePsi::CoBuchi,
            };
            let p = tgame_psi(psi);
            return Ok(Report::ok(text::write_presentation(&p, None), json!({"presentation": p.name})));
        }
        Family::Tk2 => {
            let t = degree_tree(depth);
            let g = gen_t_k2(&t, "v2", depth)?;
            let ts = t_k2_structure(&t, &g)?;
            (g, ts)
        }
        Family::T2k3 => gen_t2_k3(depth)?,
    };
    if structure {
        Ok(Report::ok(text::write_structure(&g.name, &ts), structure_json(&ts)))
    } else {
        Ok(Report::ok(text::write_graph(&g), graph_json(&g)))
    }
}

fn selftest_verb(only: &[usize]) -> Result<Report> {
    let ids: Vec<usize> = if only.is_empty() { (1..=selftest::CRITERIA).collect() } else { only.to_vec() };
    let mut results = Vec::new();
    for &id in &ids {
        results.push(selftest::run(id).ok_or_else(|| Error::input(format!("no criterion {id}")))?);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let mut out: String = results.iter().map(|r| format!("{r}\n")).collect();
    let _ = writeln!(out, "{passed}/{} criteria pass", results.len());
    Ok(Report {
        text: out,
        json: json!({"passed": passed, "total": results.len(), "criteria": results}),
        status: if passed == results.len() { 0 } else { 1 },
    })
}

fn dispatch(verb: &Verb) -> Result<Report> {
    match verb {
        Verb::CheckAxioms { system } => check_axioms_verb(system),
        Verb::Reconstruct { system } => reconstruct_verb(system),
        Verb::BaseExtend { system, independent, within, order } => base_extend_verb(system, independent, within, order),
        Verb::MatroidInfo { matroid, contract, delete } => matroid_info_verb(matroid, contract, delete),
        Verb::Glue { rep1, rep2 } => glue_verb(rep1, rep2),
        Verb::Solve { presentation, part, representable, depth } => solve_verb(presentation, part, *representable, *depth),
        Verb::Induced { presentation } => induced_verb(presentation),
        Verb::DualityCheck { presentation, part, representable } => duality_check_verb(presentation, part, *representable),
        Verb::TreeStructure { graph, root } => tree_structure_verb(graph, root),
        Verb::Torso { graph, structure, class } => torso_verb(graph, structure, class),
        Verb::Undominate { graph, tree, walk, t0, t1 } => undominate_verb(graph, tree, walk, t0.as_deref(), t1.as_deref()),
        Verb::Gen { family, depth, psi, structure } => gen_verb(*family, *depth, *psi, *structure),
        Verb::Selftest { only } => selftest_verb(only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.verb) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("reports serialize"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.status)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "status": e.exit_code()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
