//! Plain-text renderings of command output.

use std::fmt::Write;

use realbott::classifier::FamilySpec;
use realbott::{BottMatrix, ClassificationReport, SeifertForm, TableReport, Verdict};
use serde_json::Value;

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn classification(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", r.n);
    let _ = writeln!(out, "matrices = {}", r.total_matrices);
    let _ = writeln!(out, "classes = {}", r.class_count);
    let _ = writeln!(out, "verified = {}", r.verified);
    let _ = writeln!(out, "audited = {}", r.audited);
    let _ = writeln!(out, "moves = {}", r.move_set);
    for (i, o) in r.orbits.iter().enumerate() {
        let _ = writeln!(
            out,
            "class {}: orbit {} k={} s={} blocks={:?}",
            i + 1,
            o.orbit_size,
            o.k,
            o.s,
            o.block_type
        );
        out.push_str(&indent(&o.representative.to_text()));
    }
    for [a, b] in &r.coincident_keys {
        let _ = writeln!(out, "coincident keys:");
        out.push_str(&indent(&a.to_text()));
        let _ = writeln!(out, "  --");
        out.push_str(&indent(&b.to_text()));
    }
    out
}

pub fn orbit(members: &[BottMatrix]) -> String {
    let mut out = format!("orbit size = {}\n", members.len());
    for m in members {
        out.push_str(&m.to_text());
        out.push('\n');
    }
    out
}

pub fn verdict(v: &Verdict) -> String {
    let mut out = format!(
        "equivalent = {}\nkeys agree = {}\n",
        v.equivalent, v.keys_agree
    );
    let _ = writeln!(out, "key a = {}", v.digest_a);
    let _ = writeln!(out, "key b = {}", v.digest_b);
    out.push_str("representative a:\n");
    out.push_str(&indent(&v.representative_a.to_text()));
    out.push_str("representative b:\n");
    out.push_str(&indent(&v.representative_b.to_text()));
    if v.audit.is_some() {
        out.push_str("audit: invariant keys agree across different classes\n");
    }
    out
}

pub fn normal_form(sf: &SeifertForm) -> String {
    let perm: Vec<String> = sf.perm().iter().map(|p| (p + 1).to_string()).collect();
    let mut out = format!(
        "k = {}\ns = {}\nperm = {}\n",
        sf.k(),
        sf.s(),
        perm.join(" ")
    );
    out.push_str("C:\n");
    for row in sf.coupling_strings() {
        let _ = writeln!(out, "  {row}");
    }
    out.push_str("B:\n");
    out.push_str(&indent(&sf.base().to_text()));
    let _ = writeln!(
        out,
        "block type = {:?}",
        realbott::block_type(sf.base()).sizes()
    );
    out
}

fn profile_line(profile: &Value) -> String {
    let parts: Vec<String> = profile
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| {
            format!(
                "{}x dim {} {}",
                e["multiplicity"], e["dimension"], e["free_counts"]
            )
        })
        .collect();
    if parts.is_empty() {
        "empty".into()
    } else {
        parts.join(", ")
    }
}

pub fn fixed_points(json: &Value) -> String {
    let mut out = format!(
        "k = {}\ns = {}\nblock type = {}\n",
        json["k"], json["s"], json["block_type"]
    );
    out.push_str("B:\n");
    out.push_str(&indent(json["B"].as_str().unwrap_or_default()));
    for e in json["elements"].as_array().into_iter().flatten() {
        let ops: Vec<&str> = e["action"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        let _ = writeln!(out, "element {}: ({})", e["element"], ops.join(", "));
        let _ = writeln!(out, "  profile: {}", profile_line(&e["profile"]));
        for c in e["components"].as_array().into_iter().flatten() {
            let pattern: Vec<String> = c["pattern"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|p| p.as_str().map_or_else(|| p.to_string(), str::to_owned))
                .collect();
            let _ = writeln!(
                out,
                "  component [{}] dim {} lifts {}",
                pattern.join(" "),
                c["dimension"],
                c["lifts"]
            );
        }
    }
    if let Some(agg) = json.get("aggregate") {
        let _ = writeln!(out, "aggregate: {}", profile_line(agg));
    }
    out
}

pub fn table(r: &TableReport) -> String {
    let mut out = format!(
        "n = {}\nok = {}\nlisted = {} of {}\ncovers every class = {}\n",
        r.n, r.ok, r.listed_matrices, r.total_matrices, r.covers_every_class
    );
    for c in &r.classes {
        let _ = writeln!(
            out,
            "{}: {} listed, {} class(es)",
            c.name,
            c.listed,
            c.representatives.len()
        );
    }
    for v in &r.violations {
        let _ = writeln!(out, "violation: {v}");
    }
    out
}

pub fn family(spec: &FamilySpec, n: usize, members: &[BottMatrix]) -> String {
    let mut out = format!("family = {spec}\nn = {n}\ncount = {}\n", members.len());
    for m in members {
        out.push_str(&m.to_text());
        out.push('\n');
    }
    out
}
