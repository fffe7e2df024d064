//! Text renderings (JSON, CSV, markdown, plain) of scales, closure traces,
//! mean tables, equal-temperament comparisons and interval censuses.
//!
//! All output is deterministic: no maps with unstable order, fixed float
//! precision, `\n` line endings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::analysis::{interval_name, CellClass, CensusEntry, EqualComparison, MeanTable};
use crate::error::Result;
use crate::generator::ClosureTrace;
use crate::scales::{solfege, step_intervals, EqualTemperament, Scale};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values always serialize");
    s.push('\n');
    s
}

fn label_or_blank(label: Option<&str>) -> &str {
    label.unwrap_or("")
}

// Scales.

/// `{"name": ..., "tones": ["num/den", ...]}`
pub fn scale_json(scale: &Scale) -> String {
    to_json(scale)
}

/// Columns `tone,num,den,cents`.
pub fn scale_csv(scale: &Scale) -> String {
    let mut out = String::from("tone,num,den,cents\n");
    for t in scale.tones() {
        let v = t.value();
        writeln!(out, "{},{},{},{:.3}", v, v.numer(), v.denom(), v.cents()).unwrap();
    }
    out
}

pub fn scale_markdown(scale: &Scale) -> Result<String> {
    let mut out = format!("## {}\n\n| tone | cents | name |\n|---:|---:|:---|\n", scale.name());
    for t in scale.tones() {
        writeln!(out, "| {} | {:.3} | {} |", t, t.cents(), label_or_blank(solfege(t))).unwrap();
    }
    if scale.len() >= 2 {
        out.push_str("\n| step | ratio | cents | interval |\n|---|---:|---:|:---|\n");
        for (w, step) in scale.tones().windows(2).zip(step_intervals(scale)?) {
            writeln!(
                out,
                "| {} → {} | {} | {:.3} | {} |",
                w[0],
                w[1],
                step,
                step.cents(),
                label_or_blank(interval_name(&step))
            )
            .unwrap();
        }
    }
    Ok(out)
}

pub fn scale_plain(scale: &Scale) -> Result<String> {
    let mut out = format!("{} ({} tones)\n", scale.name(), scale.len());
    for t in scale.tones() {
        writeln!(
            out,
            "  {:>10}  {:>9.3} c  {}",
            t.to_string(),
            t.cents(),
            label_or_blank(solfege(t))
        )
        .unwrap();
    }
    if scale.len() >= 2 {
        out.push_str("steps:\n");
        for step in step_intervals(scale)? {
            writeln!(
                out,
                "  {:>10}  {:>9.3} c  {}",
                step.to_string(),
                step.cents(),
                label_or_blank(interval_name(&step))
            )
            .unwrap();
        }
    }
    Ok(out)
}

// Equal temperament.

pub fn equal_json(et: &EqualTemperament) -> String {
    to_json(&json!({
        "name": format!("equal:N={}", et.divisions()),
        "divisions": et.divisions(),
        "degrees": et.degrees(),
    }))
}

/// Columns `degree,value,cents`.
pub fn equal_csv(et: &EqualTemperament) -> String {
    let mut out = String::from("degree,value,cents\n");
    for (i, d) in et.degrees().iter().enumerate() {
        writeln!(out, "{},{:.10},{:.3}", i + 1, d, 1200.0 * d.log2()).unwrap();
    }
    out
}

pub fn equal_markdown(et: &EqualTemperament) -> String {
    let mut out = format!(
        "## equal:N={}\n\n| degree | value | cents |\n|---:|---:|---:|\n",
        et.divisions()
    );
    for (i, d) in et.degrees().iter().enumerate() {
        writeln!(out, "| {} | {:.10} | {:.3} |", i + 1, d, 1200.0 * d.log2()).unwrap();
    }
    out
}

pub fn equal_plain(et: &EqualTemperament) -> String {
    let mut out = format!(
        "equal:N={} ({} degrees, {:.3} c apart)\n",
        et.divisions(),
        et.degrees().len(),
        et.step_cents()
    );
    for (i, d) in et.degrees().iter().enumerate() {
        writeln!(out, "  {:>3}  {:.10}  {:>9.3} c", i + 1, d, 1200.0 * d.log2()).unwrap();
    }
    out
}

// Closure traces.

pub fn trace_json(trace: &ClosureTrace) -> String {
    to_json(trace)
}

/// One row per added tone: `generation,tone,a,b,kind`.
pub fn trace_csv(trace: &ClosureTrace) -> String {
    let mut out = String::from("generation,tone,a,b,kind\n");
    for (i, g) in trace.generations.iter().enumerate() {
        for w in &g.witnesses {
            writeln!(out, "{},{},{},{},{}", i + 1, w.tone, w.a, w.b, w.kind).unwrap();
        }
    }
    out
}

fn fmt_tones(scale: &Scale) -> String {
    let parts: Vec<String> = scale.tones().iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn kind_symbol(kind: crate::means::MeanKind) -> &'static str {
    match kind {
        crate::means::MeanKind::Arithmetic => "m_A",
        crate::means::MeanKind::Geometric => "m_G",
        crate::means::MeanKind::Harmonic => "m_H",
    }
}

pub fn trace_markdown(trace: &ClosureTrace) -> String {
    let mut out = format!(
        "## closure of {}\n\nseed: {}\n\n",
        trace.seed.name(),
        fmt_tones(&trace.seed)
    );
    if !trace.generations.is_empty() {
        out.push_str("| generation | tone | witness |\n|---:|---:|:---|\n");
        for (i, g) in trace.generations.iter().enumerate() {
            for w in &g.witnesses {
                writeln!(
                    out,
                    "| {} | {} | {}({}, {}) |",
                    i + 1,
                    w.tone,
                    kind_symbol(w.kind),
                    w.a,
                    w.b
                )
                .unwrap();
            }
        }
        out.push('\n');
    }
    writeln!(
        out,
        "fixpoint: {}\n\nfinal ({} tones): {}",
        if trace.fixpoint_reached {
            "reached"
        } else {
            "not reached (generation cap)"
        },
        trace.final_scale.len(),
        fmt_tones(&trace.final_scale)
    )
    .unwrap();
    out
}

pub fn trace_plain(trace: &ClosureTrace) -> String {
    let mut out = format!("seed {}: {}\n", trace.seed.name(), fmt_tones(&trace.seed));
    for (i, g) in trace.generations.iter().enumerate() {
        writeln!(out, "generation {}:", i + 1).unwrap();
        for w in &g.witnesses {
            writeln!(out, "  {} = {}({}, {})", w.tone, kind_symbol(w.kind), w.a, w.b).unwrap();
        }
    }
    writeln!(
        out,
        "fixpoint: {}\nfinal ({} tones): {}",
        if trace.fixpoint_reached {
            "reached"
        } else {
            "not reached"
        },
        trace.final_scale.len(),
        fmt_tones(&trace.final_scale)
    )
    .unwrap();
    out
}

// Mean tables.

/// Columns `row,col,mean,class`, row-major upper triangle.
pub fn table_csv(table: &MeanTable) -> String {
    let mut out = String::from("row,col,mean,class\n");
    for c in &table.cells {
        writeln!(out, "{},{},{},{}", c.row, c.col, c.mean, c.class).unwrap();
    }
    out
}

pub fn table_json(table: &MeanTable) -> String {
    to_json(table)
}

fn class_marker(class: CellClass) -> &'static str {
    match class {
        CellClass::InScale => "**",
        CellClass::InLimit => "*",
        CellClass::Outside => "",
    }
}

/// Upper-triangle grid. In-scale means are bold, in-limit means italic.
pub fn table_markdown(table: &MeanTable) -> String {
    let tones = table.scale.tones();
    let mut out = format!("| {} |", table.scale.name());
    for t in tones {
        write!(out, " {t} |").unwrap();
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(tones.len()));
    out.push('\n');
    for (i, row) in tones.iter().enumerate().take(tones.len() - 1) {
        write!(out, "| {row} |").unwrap();
        for (j, col) in tones.iter().enumerate() {
            if j <= i {
                out.push_str("  |");
                continue;
            }
            let cell = table
                .cell(&row.value(), &col.value())
                .expect("every upper-triangle pair has a cell");
            let m = class_marker(cell.class);
            write!(out, " {m}{}{m} |", cell.mean).unwrap();
        }
        out.push('\n');
    }
    writeln!(
        out,
        "\n**bold**: mean in the scale; *italic*: outside the scale but {}-smooth ({} mean)",
        table.restriction, table.kind
    )
    .unwrap();
    out
}

pub fn table_plain(table: &MeanTable) -> String {
    let mut out = format!(
        "{} mean table of {} under {}\n",
        table.kind,
        table.scale.name(),
        table.restriction
    );
    for c in &table.cells {
        writeln!(
            out,
            "  {:>9} {:>9}  {:>10}  {}",
            c.row.to_string(),
            c.col.to_string(),
            c.mean.to_string(),
            c.class
        )
        .unwrap();
    }
    out
}

// Equal-temperament comparisons.

pub fn compare_csv(rows: &[EqualComparison]) -> String {
    let mut out = String::from("tone,degree,deviation_cents\n");
    for r in rows {
        writeln!(out, "{},{},{:.3}", r.tone, r.degree, r.deviation_cents).unwrap();
    }
    out
}

pub fn compare_json(rows: &[EqualComparison]) -> String {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "tone": r.tone,
                "degree": r.degree,
                "deviation_cents": (r.deviation_cents * 1000.0).round() / 1000.0,
            })
        })
        .collect();
    to_json(&rows)
}

pub fn compare_markdown(rows: &[EqualComparison], divisions: u32) -> String {
    let mut out = format!("| tone | degree (N={divisions}) | deviation (cents) |\n|---:|---:|---:|\n");
    for r in rows {
        writeln!(out, "| {} | {} | {:+.3} |", r.tone, r.degree, r.deviation_cents).unwrap();
    }
    out
}

pub fn compare_plain(rows: &[EqualComparison], divisions: u32) -> String {
    let mut out = format!("nearest degrees of {divisions}-tone equal temperament\n");
    for r in rows {
        writeln!(
            out,
            "  {:>10}  degree {:>3}  {:+9.3} c",
            r.tone.to_string(),
            r.degree,
            r.deviation_cents
        )
        .unwrap();
    }
    out
}

// Interval census.

pub fn census_csv(entries: &[CensusEntry]) -> String {
    let mut out = String::from("ratio,label,count\n");
    for e in entries {
        writeln!(out, "{},{},{}", e.ratio, e.label.as_deref().unwrap_or(""), e.count).unwrap();
    }
    out
}

pub fn census_json(entries: &[CensusEntry]) -> String {
    to_json(&entries)
}

pub fn census_markdown(entries: &[CensusEntry]) -> String {
    let mut out = String::from("| interval | name | count | cents |\n|---:|:---|---:|---:|\n");
    for e in entries {
        writeln!(
            out,
            "| {} | {} | {} | {:.3} |",
            e.ratio,
            e.label.as_deref().unwrap_or(""),
            e.count,
            e.ratio.cents()
        )
        .unwrap();
    }
    out
}

pub fn census_plain(entries: &[CensusEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(
            out,
            "  {:>10}  x{}  {:>9.3} c  {}",
            e.ratio.to_string(),
            e.count,
            e.ratio.cents(),
            e.label.as_deref().unwrap_or("")
        )
        .unwrap();
    }
    out
}
