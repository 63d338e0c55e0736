use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use psts::format::{parse_sequence, parse_system, write_sequence, write_system_text, SystemDoc};
use psts::generators::{
    cyclic_system, friendship, friendship_chain, johnson_schonheim, random_system, CyclicBase,
};
use psts::packing::{bad_sets, is_good_set, max_disjoint_blocks};
use psts::sequencer::{
    construct_with, decide_with, verify_sts13_certificate, ConstructOptions, DecideOptions,
    Outcome, SequencerError,
};
use psts::{inadmissible_segments, Block, Sequence, TripleSystem};
use serde_json::{json, Value};

use crate::report::{Output, Status};

pub struct Ctx {
    pub json: bool,
    pub seed: u64,
    pub budget: u64,
    pub workers: usize,
    pub inputs: Vec<Vec<u8>>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = if path.as_os_str() == "-" {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .context("reading stdin")?;
            buf
        } else {
            std::fs::read(path).with_context(|| format!("reading {}", path.display()))?
        };
        let text = String::from_utf8(bytes.clone())
            .with_context(|| format!("{} is not UTF-8", path.display()))?;
        self.inputs.push(bytes);
        Ok(text)
    }

    fn system(&mut self, path: &Path) -> Result<TripleSystem> {
        let text = self.read(path)?;
        parse_system(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn decide_options(&self) -> DecideOptions {
        DecideOptions {
            budget: self.budget,
            workers: self.workers,
            ..DecideOptions::default()
        }
    }
}

fn block_labels(t: &TripleSystem, b: &Block) -> [String; 3] {
    b.points().map(|p| t.label(p).to_string())
}

fn blocks_json(t: &TripleSystem, blocks: &[Block]) -> Value {
    json!(blocks
        .iter()
        .map(|b| block_labels(t, b))
        .collect::<Vec<_>>())
}

fn blocks_text(t: &TripleSystem, blocks: &[Block]) -> String {
    blocks
        .iter()
        .map(|b| format!("[{}]", block_labels(t, b).join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn labels(t: &TripleSystem, s: &Sequence) -> Vec<String> {
    s.labels(t).into_iter().map(str::to_string).collect()
}

pub fn validate(ctx: &mut Ctx, file: &Path) -> Result<Output> {
    let t = ctx.system(file)?;
    let details = json!({
        "order": t.order(),
        "blocks": t.blocks().len(),
        "points": t.labels(),
    });
    let text = format!("valid: order {}, {} blocks", t.order(), t.blocks().len());
    Ok(Output::new(Status::Positive, "valid", details, text))
}

pub fn check_seq(ctx: &mut Ctx, system: &Path, sequence: &Path) -> Result<Output> {
    let t = ctx.system(system)?;
    let raw = ctx.read(sequence)?;
    let s = parse_sequence(&raw, &t).with_context(|| format!("parsing {}", sequence.display()))?;
    let bad = inadmissible_segments(&s, &t)?;
    let segments: Vec<Value> = bad
        .iter()
        .map(|(seg, w)| {
            json!({
                "start": seg.start,
                "len": seg.len,
                "points": t.labels_of(&s.entries()[seg.start..seg.end()]),
                "partition": blocks_json(&t, &w.parts),
            })
        })
        .collect();
    let mut text = String::new();
    for (seg, w) in &bad {
        let _ = writeln!(
            text,
            "segment {}..{}: {}",
            seg.start,
            seg.end(),
            blocks_text(&t, &w.parts)
        );
    }
    let details = json!({ "sequence": labels(&t, &s), "inadmissible_segments": segments });
    Ok(if bad.is_empty() {
        Output::new(Status::Positive, "admissible", details, "admissible".into())
    } else {
        let _ = write!(text, "inadmissible ({} segments)", bad.len());
        Output::new(Status::Negative, "inadmissible", details, text)
    })
}

pub fn decide(ctx: &mut Ctx, file: &Path) -> Result<Output> {
    let t = ctx.system(file)?;
    let d = decide_with(&t, &ctx.decide_options());
    let out = match &d.outcome {
        Outcome::Sequenceable(s) => Output::new(
            Status::Positive,
            "sequenceable",
            json!({ "witness": labels(&t, s) }),
            write_sequence(s, &t),
        ),
        Outcome::NotSequenceable(c) => Output::new(
            Status::Negative,
            "not_sequenceable",
            json!({ "certificate": c }),
            format!(
                "not sequenceable (search exhausted after {} nodes)",
                c.nodes_explored
            ),
        ),
        Outcome::Unknown => Output::new(
            Status::Unknown,
            "unknown",
            json!({ "budget": ctx.budget }),
            format!("unknown: budget of {} nodes exhausted", ctx.budget),
        ),
    };
    Ok(out.with_nodes(d.budget_spent))
}

pub fn construct(ctx: &mut Ctx, file: &Path) -> Result<Output> {
    let t = ctx.system(file)?;
    let opts = ConstructOptions {
        fallback_budget: ctx.budget,
    };
    Ok(match construct_with(&t, &opts) {
        Ok(c) => Output::new(
            Status::Positive,
            "sequenceable",
            json!({
                "sequence": labels(&t, &c.sequence),
                "method": c.method,
                "nu": c.nu,
                "attempts": c.attempts,
            }),
            write_sequence(&c.sequence, &t),
        ),
        Err(SequencerError::NotSequenceableSystem { nodes }) => Output::new(
            Status::Negative,
            "not_sequenceable",
            json!({ "nodes_explored": nodes }),
            format!("not sequenceable (search exhausted after {nodes} nodes)"),
        )
        .with_nodes(nodes),
        Err(SequencerError::BudgetExhausted { nodes }) => Output::new(
            Status::Unknown,
            "unknown",
            json!({ "budget": ctx.budget }),
            format!("unknown: budget of {} nodes exhausted", ctx.budget),
        )
        .with_nodes(nodes),
        Err(e) => Output::new(
            Status::Unknown,
            "unknown",
            json!({ "error": e.to_string() }),
            format!("no sequence: {e}"),
        ),
    })
}

fn generated(t: &TripleSystem, note: Option<String>) -> Output {
    let mut text = String::new();
    if let Some(n) = &note {
        let _ = writeln!(text, "# {n}");
    }
    text.push_str(write_system_text(t).trim_end());
    Output::new(
        Status::Positive,
        "generated",
        json!({ "system": SystemDoc::from_system(t), "note": note }),
        text,
    )
}

fn parse_triple(s: &str) -> Result<[usize; 3]> {
    let v: Vec<usize> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().with_context(|| format!("`{x}` is not a number")))
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b, c] => Ok([a, b, c]),
        _ => bail!("base block `{s}` needs exactly three residues"),
    }
}

pub fn gen_cyclic(n: usize, bases: &[String]) -> Result<Output> {
    let base_blocks = bases
        .iter()
        .map(|b| parse_triple(b))
        .collect::<Result<Vec<_>>>()?;
    let t = cyclic_system(&CyclicBase {
        modulus: n,
        base_blocks,
    })?;
    Ok(generated(&t, None))
}

pub fn gen_friendship(m: usize) -> Result<Output> {
    Ok(generated(&friendship(m)?, None))
}

pub fn gen_chain(sizes: &[usize]) -> Result<Output> {
    Ok(generated(&friendship_chain(sizes)?, None))
}

pub fn gen_random(ctx: &Ctx, n: usize, blocks: usize) -> Result<Output> {
    let r = random_system(n, blocks, ctx.seed)?;
    let note = r
        .is_short()
        .then(|| format!("requested {} blocks, placed {}", r.requested, r.achieved));
    Ok(generated(&r.system, note))
}

pub fn pack(ctx: &mut Ctx, file: &Path) -> Result<Output> {
    let t = ctx.system(file)?;
    let r = max_disjoint_blocks(&t, Some(ctx.budget));
    let status = if r.exact {
        Status::Positive
    } else {
        Status::Unknown
    };
    let text = format!(
        "{} disjoint blocks{}: {}",
        r.nu,
        if r.exact {
            ""
        } else {
            " (lower bound, budget exhausted)"
        },
        blocks_text(&t, &r.witness)
    );
    let details = json!({ "nu": r.nu, "exact": r.exact, "witness": blocks_json(&t, &r.witness) });
    let outcome = if r.exact { "packed" } else { "unknown" };
    Ok(Output::new(status, outcome, details, text).with_nodes(r.nodes_explored))
}

pub fn bad_sets_cmd(ctx: &mut Ctx, file: &Path) -> Result<Output> {
    let t = ctx.system(file)?;
    let report = bad_sets(&t)?;
    let sets: Vec<Value> = report
        .bad_sets
        .iter()
        .map(|b| json!({ "set": t.labels_of(&b.points), "realization": blocks_json(&t, &b.realization) }))
        .collect();
    let mut text = format!(
        "{} bad sets of size {}",
        report.bad_sets.len(),
        report.m_size
    );
    for b in &report.bad_sets {
        let _ = write!(
            text,
            "\n{{{}}}: {}",
            t.labels_of(&b.points).join(","),
            blocks_text(&t, &b.realization)
        );
    }
    Ok(Output::new(
        Status::Positive,
        "listed",
        json!({ "m_size": report.m_size, "bad_sets": sets }),
        text,
    ))
}

pub fn good_set(ctx: &mut Ctx, file: &Path, points: &str) -> Result<Output> {
    let t = ctx.system(file)?;
    let names: Vec<String> = points
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    let m = t.resolve(&names)?;
    let a = is_good_set(&t, &m)?;
    Ok(match a.realization {
        None => Output::new(
            Status::Positive,
            "good",
            json!({ "good": true }),
            "good".into(),
        ),
        Some(r) => Output::new(
            Status::Negative,
            "bad",
            json!({ "good": false, "realization": blocks_json(&t, &r) }),
            format!("bad: {}", blocks_text(&t, &r)),
        ),
    })
}

pub fn bound(n: usize) -> Output {
    let b = johnson_schonheim(n);
    Output::new(
        Status::Positive,
        "computed",
        json!({ "order": n, "max_blocks": b }),
        b.to_string(),
    )
}

pub fn verify_sts13() -> Result<Output> {
    let c = verify_sts13_certificate()?;
    let mut text = String::from(
        "cyclic STS(13) is not sequenceable; for each point, four disjoint blocks on the rest:",
    );
    for e in &c.entries {
        let blocks: Vec<String> = e
            .blocks
            .iter()
            .map(|b| format!("[{}]", b.points().map(|p| p.to_string()).join(",")))
            .collect();
        let _ = write!(
            text,
            "\n{:>2} (shift {:>2}): {}",
            e.vertex,
            e.exponent,
            blocks.join(" ")
        );
    }
    Ok(Output::new(
        Status::Positive,
        "verified",
        json!({ "entries": c.entries }),
        text,
    ))
}

pub fn parse_range(s: &str) -> Result<std::ops::Range<u64>> {
    let (a, b) = s.split_once("..").context("expected a range A..B")?;
    let a: u64 = a.trim().parse().context("bad range start")?;
    let b: u64 = b.trim().parse().context("bad range end")?;
    if b < a {
        bail!("empty range {s}");
    }
    Ok(a..b)
}

/// Runs `decide` on random systems of one order, one seed at a time, and
/// writes one JSON line per seed followed by a summary line.
pub fn hunt(
    ctx: &Ctx,
    order: usize,
    seeds: std::ops::Range<u64>,
    blocks: Option<usize>,
    out: &mut dyn std::io::Write,
) -> Result<Output> {
    let target = blocks.unwrap_or_else(|| johnson_schonheim(order));
    let (mut found, mut unknown, mut nodes) = (Vec::new(), 0u64, 0u64);
    let total = seeds.end - seeds.start;
    for seed in seeds {
        let r = random_system(order, target, seed)?;
        let d = decide_with(&r.system, &ctx.decide_options());
        nodes += d.budget_spent;
        let outcome = match &d.outcome {
            Outcome::Sequenceable(_) => "sequenceable",
            Outcome::NotSequenceable(_) => {
                found.push(seed);
                "not_sequenceable"
            }
            Outcome::Unknown => {
                unknown += 1;
                "unknown"
            }
        };
        let mut line = json!({
            "seed": seed,
            "order": order,
            "blocks": r.achieved,
            "outcome": outcome,
            "nodes": d.budget_spent,
        });
        if outcome == "not_sequenceable" {
            line["system"] = json!(SystemDoc::from_system(&r.system));
        }
        if writeln!(out, "{line}").and_then(|_| out.flush()).is_err() {
            break;
        }
    }
    let status = if !found.is_empty() {
        Status::Negative
    } else if unknown > 0 {
        Status::Unknown
    } else {
        Status::Positive
    };
    let outcome = match status {
        Status::Negative => "found",
        Status::Unknown => "unknown",
        _ => "none_found",
    };
    let details = json!({ "seeds": total, "not_sequenceable": found, "unknown": unknown });
    let text = format!(
        "{} seeds: {} not sequenceable, {} unknown",
        total,
        found.len(),
        unknown
    );
    Ok(Output::new(status, outcome, details, text).with_nodes(nodes))
}
