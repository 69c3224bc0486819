use std::fmt::Write;

use cfp_core::{IncidenceMatrix, Solution};

/// Matrix with rows grouped by machine cell and columns by part cell, cells in
/// label order and members ascending. Headers carry the original 1-based
/// indices; `|` and dashed lines delimit the cells.
pub fn render_solution(matrix: &IncidenceMatrix, s: &Solution) -> String {
    let groups: Vec<(Vec<usize>, Vec<usize>)> = (0..s.cells())
        .map(|c| (s.machines_of(c).collect::<Vec<_>>(), s.parts_of(c).collect::<Vec<_>>()))
        .filter(|(m, p)| !m.is_empty() || !p.is_empty())
        .collect();
    let width = format!("p{}", matrix.parts())
        .len()
        .max(format!("m{}", matrix.machines()).len());

    let mut header = format!("{:<width$} |", "");
    let mut rule = format!("{}-+", "-".repeat(width));
    for (_, parts) in &groups {
        if parts.is_empty() {
            continue;
        }
        for &j in parts {
            write!(header, " {:>width$}", format!("p{}", j + 1)).unwrap();
        }
        header.push_str(" |");
        rule.push_str(&"-".repeat(parts.len() * (width + 1) + 1));
        rule.push('+');
    }

    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    writeln!(out, "{rule}").unwrap();
    for (machines, _) in &groups {
        if machines.is_empty() {
            continue;
        }
        for &i in machines {
            let mut line = format!("{:<width$} |", format!("m{}", i + 1));
            for (_, parts) in groups.iter().filter(|(_, p)| !p.is_empty()) {
                for &j in parts {
                    write!(line, " {:>width$}", u8::from(matrix.get(i, j))).unwrap();
                }
                line.push_str(" |");
            }
            writeln!(out, "{line}").unwrap();
        }
        writeln!(out, "{rule}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfp_core::instances;

    /// Matrix entries of the rendering, row by row.
    fn body(text: &str) -> Vec<Vec<String>> {
        text.lines()
            .filter(|l| l.starts_with('m'))
            .map(|l| {
                l.split_whitespace()
                    .skip(1)
                    .filter(|t| *t != "|")
                    .map(String::from)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn groups_columns_by_cell() {
        let a = instances::sample_5x7();
        let text = render_solution(&a, &instances::sample_5x7_with_singleton());
        let header: Vec<&str> = text
            .lines()
            .next()
            .unwrap()
            .split_whitespace()
            .filter(|t| *t != "|")
            .collect();
        let mut first: Vec<&str> = header[..3].to_vec();
        first.sort();
        assert_eq!(first, vec!["p1", "p6", "p7"]);
        assert_eq!(body(&text)[0], vec!["1", "1", "1", "0", "0", "0", "1"]);
        let labels: Vec<&str> = text.lines().filter(|l| l.starts_with('m')).map(|l| &l[..2]).collect();
        assert_eq!(labels, vec!["m1", "m2", "m3", "m4", "m5"]);
    }

    #[test]
    fn identity_assignment_prints_unpermuted() {
        let a = IncidenceMatrix::from_rows(&[[1u8, 0], [1, 1]]).unwrap();
        let s = Solution::new(&a, vec![0, 1], vec![0, 1]).unwrap();
        let text = render_solution(&a, &s);
        assert_eq!(body(&text), vec![vec!["1", "0"], vec!["1", "1"]]);
        assert!(text.starts_with("   | p1 | p2 |"));
    }

    #[test]
    fn conserves_ones_and_zeros() {
        let a = instances::sample_8x12();
        let text = render_solution(&a, &instances::sample_8x12_start());
        let cells: Vec<String> = body(&text).into_iter().flatten().collect();
        assert_eq!(cells.iter().filter(|c| *c == "1").count(), a.ones());
        assert_eq!(cells.iter().filter(|c| *c == "0").count(), a.zeros());
    }
}
