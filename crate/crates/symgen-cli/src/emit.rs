//! Report table, JSON record, and DOT graph emitters.

use serde_json::json;

use symgen::catalog::VerificationReport;
use symgen::progenitor::DoubleCosetTable;

/// Fixed-width table, one line per entry.
pub fn print_report_table(reports: &[VerificationReport]) {
    println!(
        "{:<18} {:<9} {:>9} {:>15} {:>4} {:>7} {:>8}  message",
        "entry", "status", "index", "order", "ab", "dcosets", "seconds"
    );
    for r in reports {
        println!(
            "{:<18} {:<9} {:>9} {:>15} {:>4} {:>7} {:>8.2}  {}",
            r.id,
            r.status.to_string(),
            r.index.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            r.order.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            r.abelianization
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
            if r.double_cosets.is_empty() {
                "-".to_string()
            } else {
                r.double_cosets.len().to_string()
            },
            r.seconds,
            r.message
        );
    }
}

/// The stable JSON record for one report.
pub fn report_json(r: &VerificationReport) -> String {
    let record = json!({
        "entry": r.id,
        "status": r.status.to_string(),
        "index": r.index,
        "order": r.order.map(|v| v as u64),
        "abelianization": r.abelianization.map(|v| v as u64),
        "double_cosets": r.double_cosets.iter().map(|c| json!({
            "size": c.size,
            "stab_order": c.stabilizer_order as u64,
            "word": c.word,
        })).collect::<Vec<_>>(),
        "stats": r.stats.as_ref().map(|s| json!({
            "defined": s.total_defined,
            "merged": s.merges,
            "seconds": s.seconds,
        })),
    });
    record.to_string()
}

/// Deterministic DOT rendering of the double-coset Cayley diagram: nodes
/// are double cosets labelled |N:N^(w)|, edges carry the count of
/// symmetric generators joining them.
pub fn dot_graph(entry: &str, table: &DoubleCosetTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("// double-coset diagram for {entry}\n"));
    out.push_str("graph cayley {\n");
    out.push_str("  rankdir=LR;\n");
    for (i, c) in table.cosets.iter().enumerate() {
        let word = if c.word.is_empty() {
            "1".to_string()
        } else {
            c.word
                .iter()
                .map(|&t| format!("t{}", t + 1))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!(
            "  n{i} [label=\"{}\\n[{}]\"];\n",
            c.orbit_size, word
        ));
    }
    // Undirected edges, emitted once per unordered pair in sorted order.
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, c) in table.cosets.iter().enumerate() {
        for (target, labels) in &c.edges {
            let (a, b) = if i <= *target { (i, *target) } else { (*target, i) };
            match edges.iter_mut().find(|(x, y, _)| *x == a && *y == b) {
                Some((_, _, n)) => *n = (*n).max(labels.len()),
                None => edges.push((a, b, labels.len())),
            }
        }
    }
    edges.sort_unstable();
    for (a, b, n) in edges {
        out.push_str(&format!("  n{a} -- n{b} [label=\"{n}\"];\n"));
    }
    out.push_str("}\n");
    out
}
