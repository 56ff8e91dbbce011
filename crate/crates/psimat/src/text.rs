//! Line-oriented text formats for matroids, set systems, presentations,
//! graphs and tree structures. `#` starts a comment; blank lines are
//! ignored; indentation is free.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::axioms::SetSystemPair;
use crate::error::{Error, Result};
use crate::games::StrategyLine;
use crate::gf::{Field, Subspace, Vector};
use crate::graphs::{Class, Graph, TreeStructure};
use crate::matroid::Matroid;
use crate::sets::Ground;
use crate::tom::{CoreState, Loc, PrefixNode, Transition, TreePresentation};

#[derive(Debug, Clone, Copy)]
struct Line<'a> {
    no: usize,
    /// Byte offset of `text` within the raw line.
    indent: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }

    /// Tokens with 1-based columns.
    fn tokens(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((self.indent + s + 1, &self.text[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((self.indent + s + 1, &self.text[s..]));
        }
        out
    }

    fn keyword(&self) -> &'a str {
        self.text.split_whitespace().next().unwrap_or("")
    }

    /// Tokens after a `key:` prefix.
    fn after_colon(&self) -> Vec<(usize, &'a str)> {
        let cut = self.text.find(':').map_or(0, |i| i + 1);
        self.tokens().into_iter().filter(|(c, _)| *c > self.indent + cut).collect()
    }

    /// Converts a semantic error into a parse error at this line.
    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Input(msg) => self.err(1, msg),
            other => other,
        })
    }
}

fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim();
            if trimmed.is_empty() {
                return None;
            }
            Some(Line {
                no: i + 1,
                indent: body.len() - body.trim_start().len(),
                text: trimmed,
            })
        })
        .collect()
}

fn header<'a>(ls: &[Line<'a>], kind: &str) -> Result<(String, usize)> {
    let Some(first) = ls.first() else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: format!("empty input, expected `{kind} <name>`"),
        });
    };
    let toks = first.tokens();
    match toks[..] {
        [(_, k), (_, name)] if k == kind => Ok((name.to_string(), 1)),
        _ => Err(first.err(1, format!("expected `{kind} <name>`"))),
    }
}

fn words(toks: &[(usize, &str)]) -> Vec<String> {
    toks.iter().map(|(_, t)| t.to_string()).collect()
}

/// A matroid with an optional representation.
#[derive(Debug, Clone)]
pub struct MatroidDoc {
    pub name: String,
    pub matroid: Matroid,
    pub rep: Option<Subspace>,
}

/// Parses the body of a matroid block: `ground:`, then `circuit:` lines or a
/// `rep GF(p)` block of rows.
fn matroid_block(at: &Line, body: &[Line]) -> Result<(Matroid, Option<Subspace>)> {
    let Some(g) = body.first().filter(|l| l.text.starts_with("ground:")) else {
        let l = body.first().unwrap_or(at);
        return Err(l.err(1, "expected `ground: ...`"));
    };
    let ground = words(&g.after_colon());
    let gset: BTreeSet<&String> = ground.iter().collect();
    if gset.len() != ground.len() {
        return Err(g.err(1, "ground set repeats a label"));
    }
    let mut circuits = Vec::new();
    let mut rep: Option<(Field, Vec<Vector>)> = None;
    for l in &body[1..] {
        if l.text.starts_with("circuit:") {
            if rep.is_some() {
                return Err(l.err(1, "circuits and a representation cannot be mixed"));
            }
            let toks = l.after_colon();
            if let Some((c, t)) = toks.iter().find(|(_, t)| !gset.contains(&t.to_string())) {
                return Err(l.err(*c, format!("{t} is not in the ground set")));
            }
            circuits.push(words(&toks));
        } else if l.keyword() == "rep" {
            if !circuits.is_empty() || rep.is_some() {
                return Err(l.err(1, "unexpected `rep`"));
            }
            let toks = l.tokens();
            let field = toks
                .get(1)
                .and_then(|(_, t)| t.strip_prefix("GF(")?.strip_suffix(')')?.parse::<u32>().ok())
                .ok_or_else(|| l.err(toks.get(1).map_or(5, |t| t.0), "expected `rep GF(p)`"))?;
            rep = Some((l.wrap(Field::new(field))?, Vec::new()));
        } else if let Some((field, rows)) = rep.as_mut() {
            let toks = l.tokens();
            if toks.len() != ground.len() {
                return Err(l.err(1, format!("row has {} entries, ground has {}", toks.len(), ground.len())));
            }
            let mut v = Vector::zero(*field);
            for ((c, t), label) in toks.iter().zip(&ground) {
                let x: i64 = t.parse().map_err(|_| l.err(*c, format!("{t} is not an integer")))?;
                v.set(label.clone(), field.reduce(x));
            }
            rows.push(v);
        } else {
            return Err(l.err(1, format!("unexpected `{}`", l.keyword())));
        }
    }
    match rep {
        Some((field, rows)) => {
            let u = g.wrap(Subspace::rref(field, ground.iter().cloned(), &rows))?;
            let m = g.wrap(Matroid::from_representation(&u))?;
            Ok((m, Some(u)))
        }
        None => Ok((g.wrap(Matroid::from_circuit_sets(ground, circuits))?, None)),
    }
}

pub fn parse_matroid(src: &str) -> Result<MatroidDoc> {
    let ls = lines(src);
    let (name, start) = header(&ls, "matroid")?;
    let (matroid, rep) = matroid_block(&ls[0], &ls[start..])?;
    Ok(MatroidDoc { name, matroid, rep })
}

fn write_matroid_body(out: &mut String, indent: &str, m: &Matroid, rep: Option<&Subspace>) {
    match rep {
        Some(u) => {
            let _ = writeln!(out, "{indent}ground: {}", u.ambient().join(" "));
            let _ = writeln!(out, "{indent}rep GF({})", u.field().p());
            for row in u.dense_basis() {
                let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                let _ = writeln!(out, "{indent}{}", cells.join(" "));
            }
        }
        None => {
            let _ = writeln!(out, "{indent}ground: {}", m.ground().labels().join(" "));
            for &c in m.circuits() {
                let _ = writeln!(out, "{indent}circuit: {}", m.ground().list(c).join(" "));
            }
        }
    }
}

pub fn write_matroid(name: &str, m: &Matroid, rep: Option<&Subspace>) -> String {
    let mut out = format!("matroid {name}\n");
    write_matroid_body(&mut out, "", m, rep);
    out
}

pub fn parse_system(src: &str) -> Result<(String, SetSystemPair)> {
    let ls = lines(src);
    let (name, start) = header(&ls, "system")?;
    let Some(g) = ls.get(start).filter(|l| l.text.starts_with("ground:")) else {
        return Err(ls.get(start).unwrap_or(&ls[0]).err(1, "expected `ground: ...`"));
    };
    let ground = g.wrap(Ground::new(words(&g.after_colon())))?;
    let (mut c, mut d) = (Vec::new(), Vec::new());
    for l in &ls[start + 1..] {
        let target = if l.text.starts_with("C:") {
            &mut c
        } else if l.text.starts_with("D:") {
            &mut d
        } else {
            return Err(l.err(1, "expected `C: ...` or `D: ...`"));
        };
        let toks = l.after_colon();
        if let Some((col, t)) = toks.iter().find(|(_, t)| ground.index(t).is_none()) {
            return Err(l.err(*col, format!("{t} is not in the ground set")));
        }
        target.push(ground.mask(toks.iter().map(|(_, t)| *t)).expect("checked labels"));
    }
    let pair = g.wrap(SetSystemPair::new(ground, c, d))?;
    Ok((name, pair))
}

pub fn write_system(name: &str, s: &SetSystemPair) -> String {
    let mut out = format!("system {name}\nground: {}\n", s.ground.labels().join(" "));
    for (key, sets) in [("C", &s.c), ("D", &s.d)] {
        for &m in sets {
            let _ = writeln!(out, "{key}: {}", s.ground.list(m).join(" "));
        }
    }
    out
}

/// A presentation together with any `strategy` section lines.
#[derive(Debug, Clone)]
pub struct PresentationDoc {
    pub presentation: TreePresentation,
    pub strategy: Vec<String>,
}

/// Lines up to the matching `end`, and the index after it.
fn block<'a, 'b>(ls: &'b [Line<'a>], open: usize) -> Result<(&'b [Line<'a>], usize)> {
    let end = ls[open + 1..]
        .iter()
        .position(|l| l.text == "end")
        .ok_or_else(|| ls[open].err(1, format!("`{}` block has no `end`", ls[open].keyword())))?;
    Ok((&ls[open + 1..open + 1 + end], open + end + 2))
}

struct RawTransition<'a> {
    line: Line<'a>,
    source: String,
    name: String,
    target: String,
    map: BTreeMap<String, String>,
    priority: u32,
}

fn parse_transition<'a>(l: &Line<'a>) -> Result<RawTransition<'a>> {
    let toks = l.tokens();
    let shape = "expected `<source>:<name> -> <target> a->x ... [priority: n]`";
    let [(c0, id), (_, arrow), (_, target), rest @ ..] = &toks[..] else {
        return Err(l.err(1, shape));
    };
    if *arrow != "->" {
        return Err(l.err(1, shape));
    }
    let (source, name) = id.split_once(':').ok_or_else(|| l.err(*c0, "transition id must be `source:name`"))?;
    let mut map = BTreeMap::new();
    let mut priority = 0;
    let mut i = 0;
    while i < rest.len() {
        let (c, t) = rest[i];
        if t == "priority:" {
            let (pc, pt) = rest.get(i + 1).ok_or_else(|| l.err(c, "missing priority value"))?;
            priority = pt.parse().map_err(|_| l.err(*pc, format!("{pt} is not a priority")))?;
            i += 2;
            continue;
        }
        let (a, x) = t.split_once("->").ok_or_else(|| l.err(c, format!("expected `a->x`, found {t}")))?;
        if map.insert(a.to_string(), x.to_string()).is_some() {
            return Err(l.err(c, format!("label {a} is mapped twice")));
        }
        i += 1;
    }
    Ok(RawTransition {
        line: *l,
        source: source.to_string(),
        name: name.to_string(),
        target: target.to_string(),
        map,
        priority,
    })
}

pub fn parse_presentation(src: &str) -> Result<PresentationDoc> {
    let ls = lines(src);
    let (name, mut i) = header(&ls, "presentation")?;
    let mut real: Option<BTreeSet<String>> = None;
    let mut prefix = Vec::new();
    let mut core = Vec::new();
    let mut raw = Vec::new();
    let mut strategy = Vec::new();
    while i < ls.len() {
        let l = &ls[i];
        let toks = l.tokens();
        if l.text.starts_with("real-edges:") {
            real = Some(words(&l.after_colon()).into_iter().collect());
            i += 1;
            continue;
        }
        match l.keyword() {
            kind @ ("prefix" | "core") => {
                let [_, (_, node)] = toks[..] else {
                    return Err(l.err(1, format!("expected `{kind} <name>`")));
                };
                let (body, next) = block(&ls, i)?;
                let (incoming, body) = match body.first() {
                    Some(b) if b.text.starts_with("incoming:") => {
                        if kind == "prefix" {
                            return Err(b.err(1, "prefix nodes have no incoming labels"));
                        }
                        (words(&b.after_colon()).into_iter().collect(), &body[1..])
                    }
                    _ => (BTreeSet::new(), body),
                };
                let (matroid, rep) = matroid_block(l, body)?;
                if kind == "prefix" {
                    prefix.push(PrefixNode {
                        name: node.to_string(),
                        matroid,
                        rep,
                    });
                } else {
                    core.push(CoreState {
                        name: node.to_string(),
                        matroid,
                        rep,
                        incoming,
                    });
                }
                i = next;
            }
            "transitions" => {
                let (body, next) = block(&ls, i)?;
                for b in body {
                    raw.push(parse_transition(b)?);
                }
                i = next;
            }
            "strategy" => {
                let (body, next) = block(&ls, i)?;
                strategy.extend(body.iter().map(|b| b.text.to_string()));
                i = next;
            }
            other => return Err(l.err(1, format!("unexpected `{other}`"))),
        }
    }
    let real = real.ok_or_else(|| ls[0].err(1, "missing `real-edges:` line"))?;
    let loc = |n: &str| -> Option<Loc> {
        prefix
            .iter()
            .position(|p: &PrefixNode| p.name == n)
            .map(Loc::Prefix)
            .or_else(|| core.iter().position(|c: &CoreState| c.name == n).map(Loc::Core))
    };
    let mut transitions = Vec::new();
    for r in raw {
        let source = loc(&r.source).ok_or_else(|| r.line.err(1, format!("unknown source {}", r.source)))?;
        let Some(Loc::Core(target)) = loc(&r.target) else {
            return Err(r.line.err(1, format!("target {} is not a core state", r.target)));
        };
        transitions.push(Transition {
            name: r.name,
            source,
            target,
            map: r.map,
            priority: r.priority,
        });
    }
    let presentation = ls[0].wrap(TreePresentation::new(name, prefix, core, transitions, real))?;
    Ok(PresentationDoc { presentation, strategy })
}

pub fn write_presentation(p: &TreePresentation, strategy: Option<&[StrategyLine]>) -> String {
    let mut out = format!("presentation {}\nreal-edges: {}\n", p.name, p.ground().labels().join(" "));
    for node in p.prefix() {
        let _ = writeln!(out, "prefix {}", node.name);
        write_matroid_body(&mut out, "  ", &node.matroid, node.rep.as_ref());
        out.push_str("end\n");
    }
    for state in p.core() {
        let _ = writeln!(out, "core {}", state.name);
        let incoming: Vec<&str> = state.incoming.iter().map(String::as_str).collect();
        let _ = writeln!(out, "  incoming: {}", incoming.join(" "));
        write_matroid_body(&mut out, "  ", &state.matroid, state.rep.as_ref());
        out.push_str("end\n");
    }
    if !p.transitions().is_empty() {
        out.push_str("transitions\n");
        for (k, t) in p.transitions().iter().enumerate() {
            let map: Vec<String> = t.map.iter().map(|(a, x)| format!("{a}->{x}")).collect();
            let _ = writeln!(
                out,
                "  {} -> {} {} priority: {}",
                p.transition_id(k),
                p.core()[t.target].name,
                map.join(" "),
                t.priority
            );
        }
        out.push_str("end\n");
    }
    if let Some(lines) = strategy {
        out.push_str("strategy\n");
        for s in lines {
            let _ = writeln!(out, "  {} | {} | {} | {}", s.at, s.entry, s.challenge, s.play);
        }
        out.push_str("end\n");
    }
    out
}

pub fn parse_graph(src: &str) -> Result<Graph> {
    let ls = lines(src);
    let (name, start) = header(&ls, "graph")?;
    let mut g = Graph::new(name);
    for l in &ls[start..] {
        let toks = l.tokens();
        match (l.keyword(), &toks[..]) {
            ("vertex", [_, (_, v)]) => g.add_vertex(*v),
            ("edge", [_, (_, u), (_, v)]) => l.wrap(g.add_edge(u, v, None))?,
            ("edge", [_, (_, u), (_, v), (_, label)]) => l.wrap(g.add_edge(u, v, Some(label)))?,
            _ => return Err(l.err(1, "expected `vertex v` or `edge u v [label]`")),
        }
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.name);
    let touched: BTreeSet<&String> = g.edges().iter().flat_map(|e| [&e.u, &e.v]).collect();
    for v in g.vertices().iter().filter(|v| !touched.contains(v)) {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.u, e.v, e.label);
    }
    out
}

pub fn parse_structure(src: &str, g: &Graph) -> Result<TreeStructure> {
    let ls = lines(src);
    let start = usize::from(ls.first().is_some_and(|l| l.keyword() == "structure"));
    let mut classes: Vec<Class> = Vec::new();
    let mut raw_edges = Vec::new();
    for l in &ls[start..] {
        let toks = l.tokens();
        match l.keyword() {
            "class" => {
                let name = toks
                    .get(1)
                    .and_then(|(_, t)| t.strip_suffix(':'))
                    .ok_or_else(|| l.err(1, "expected `class t: v1 v2 ...`"))?;
                classes.push(Class {
                    name: name.to_string(),
                    vertices: words(&toks[2..]).into_iter().collect(),
                });
            }
            "tedge" => match toks[..] {
                [_, (ca, a), (cb, b)] => raw_edges.push((*l, (ca, a), (cb, b))),
                _ => return Err(l.err(1, "expected `tedge t t'`")),
            },
            other => return Err(l.err(1, format!("unexpected `{other}`"))),
        }
    }
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (l, (ca, a), (cb, b)) in &raw_edges {
        let ia = *index.get(a).ok_or_else(|| l.err(*ca, format!("unknown class {a}")))?;
        let ib = *index.get(b).ok_or_else(|| l.err(*cb, format!("unknown class {b}")))?;
        edges.push((ia, ib));
    }
    let at = ls.first().copied().unwrap_or(Line {
        no: 1,
        indent: 0,
        text: "",
    });
    at.wrap(TreeStructure::new(g, classes, edges))
}

pub fn write_structure(name: &str, ts: &TreeStructure) -> String {
    let mut out = format!("structure {name}\n");
    for c in ts.classes() {
        let vs: Vec<&str> = c.vertices.iter().map(String::as_str).collect();
        let _ = writeln!(out, "class {}: {}", c.name, vs.join(" "));
    }
    for &(a, b) in ts.edges() {
        let _ = writeln!(out, "tedge {} {}", ts.classes()[a].name, ts.classes()[b].name);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{tgame_psi, TgamePsi};
    use crate::graphs::gen_t2_k3;

    #[test]
    fn matroid_round_trip() {
        let src = "matroid tri\nground: a b c\ncircuit: a b c\n";
        let doc = parse_matroid(src).unwrap();
        assert_eq!(doc.matroid.rank(), 2);
        assert_eq!(write_matroid("tri", &doc.matroid, None), src);
    }

    #[test]
    fn represented_matroid() {
        let src = "matroid u23  # one vector, one circuit\nground: x y z\nrep GF(3)\n1 1 -1\n";
        let doc = parse_matroid(src).unwrap();
        assert_eq!(doc.matroid.circuits(), &[0b111]);
        let again = parse_matroid(&write_matroid("u23", &doc.matroid, doc.rep.as_ref())).unwrap();
        assert_eq!(again.matroid, doc.matroid);
        assert_eq!(again.rep, doc.rep);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_matroid("matroid m\nground: a b\ncircuit: a q\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 3, col: 12, msg: "q is not in the ground set".into() });
        let e = parse_matroid("matroid m\nground: a b\nrep GF(2)\n1 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 3, .. }));
        let e = parse_matroid("").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_matroid("matroid m\nground: a b\ncircuit: a\ncircuit: a b\n").unwrap_err();
        assert!(matches!(e, Error::Axiom { .. }));
    }

    #[test]
    fn system_round_trip() {
        let src = "system s\nground: a b\nC: a b\nD: a\nD: b\n";
        let (name, s) = parse_system(src).unwrap();
        assert_eq!(write_system(&name, &s), src);
    }

    #[test]
    fn presentation_round_trip() {
        let p = tgame_psi(TgamePsi::Buchi);
        let text = write_presentation(&p, None);
        let doc = parse_presentation(&text).unwrap();
        assert_eq!(doc.presentation, p);
        assert_eq!(write_presentation(&doc.presentation, None), text);
    }

    #[test]
    fn presentation_errors() {
        let text = write_presentation(&tgame_psi(TgamePsi::All), None).replace("-> even", "-> nowhere");
        assert!(matches!(parse_presentation(&text), Err(Error::Parse { .. })));
        let text = write_presentation(&tgame_psi(TgamePsi::All), None).replace("priority: 0\n  odd:1", "priority: x\n  odd:1");
        assert!(matches!(parse_presentation(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph_and_structure_round_trip() {
        let (g, ts) = gen_t2_k3(1).unwrap();
        let g2 = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(g2.edges(), g.edges());
        let ts2 = parse_structure(&write_structure("s", &ts), &g2).unwrap();
        assert_eq!(ts2, ts);
        let e = parse_graph("graph g\nedge a a\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
