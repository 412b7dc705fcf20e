//! Plain-text tables and summaries.

use std::fmt::Write;

use linkfill_core::certify::{Certificate, LinkingMatrix};
use linkfill_core::finger::InvarianceReport;
use linkfill_core::LinkSpec;
use num_bigint::BigInt;

pub fn matrix_table(m: &LinkingMatrix) -> String {
    let cells: Vec<Vec<String>> = m
        .entries
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let head = m.rows.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..m.cols.len())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].len())
                .chain(std::iter::once(m.cols[j].chars().count()))
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:head$}", "");
    for (c, w) in m.cols.iter().zip(widths.iter()) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    for (label, row) in m.rows.iter().zip(cells.iter()) {
        let _ = write!(out, "{label:<head$}");
        for (x, w) in row.iter().zip(widths.iter()) {
            let _ = write!(out, "  {x:>w$}");
        }
        out.push('\n');
    }
    out
}

pub fn link_table(link: &LinkSpec) -> String {
    let mut out = String::new();
    if link.is_empty() {
        out.push_str("(empty link)\n");
    }
    for c in link.components.iter() {
        let _ = writeln!(
            out,
            "{:<10} direction {:?}  seed {}",
            c.label, c.direction, c.offset_seed
        );
    }
    out
}

/// `sum c_i b_i` over basis labels, e.g. `(1-z) P_z - 2 (1-x) P_y`.
pub fn combination(coords: &[BigInt], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coords.iter().zip(labels.iter()) {
        if c.sign() == num_bigint::Sign::NoSign {
            continue;
        }
        let neg = c.sign() == num_bigint::Sign::Minus;
        let mag = c.magnitude();
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if *mag != 1u32.into() {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn certificate_summary(c: &Certificate, verbose: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "certify m={} dim={} over {} component(s): {}",
        c.m,
        c.ambient.dim(),
        c.link.len(),
        if c.verdict { "SUCCESS" } else { "FAILED" }
    );
    for d in c.degrees.iter() {
        let geo = match d.geometric_agrees {
            Some(true) => "oracle agrees",
            Some(false) => "ORACLE DISAGREES",
            None => "oracle skipped",
        };
        let _ = writeln!(
            out,
            "  j={:<2} {}x{}  rank bareiss={} smith={}  injective={}  {}  boundary in I^{}: {}",
            d.j,
            d.matrix.entries.rows(),
            d.matrix.entries.cols(),
            d.injectivity.rank_bareiss,
            d.injectivity.rank_smith,
            d.injectivity.injective,
            geo,
            d.j + 1,
            d.boundary_vanishes
        );
        if verbose {
            out.push_str(&matrix_table(&d.matrix));
        }
        if let Some(w) = &d.injectivity.witness {
            let _ = writeln!(out, "  kernel witness: {}", combination(w, &d.matrix.rows));
        }
    }
    for step in c.lemma_chain.iter() {
        let _ = writeln!(out, "  - {step}");
    }
    out
}

pub fn invariance_line(seed: Option<u64>, r: &InvarianceReport) -> String {
    let who = seed.map_or_else(|| String::from("replay"), |s| format!("seed {s}"));
    let mut out = format!(
        "{who}: {} basis elements, {} violation(s)",
        r.checked,
        r.violations.len()
    );
    for v in r.violations.iter() {
        let _ = write!(out, "\n    {} on {} at degree {}", v.element, v.component, v.degree);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations() {
        let labels: Vec<String> = ["P_z", "(1-z) P_y", "P_x"].iter().map(|s| s.to_string()).collect();
        let c = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(combination(&c(&[1, 0, 0]), &labels), "P_z");
        assert_eq!(combination(&c(&[0, -2, 1]), &labels), "-2 (1-z) P_y + P_x");
        assert_eq!(combination(&c(&[0, 0, 0]), &labels), "0");
    }
}
