//! Text rendering of Betti tables and spectral sequence grids.

use perfcone::homology::{BettiTable, Grid};

pub fn qdim(n: usize) -> String {
    match n {
        0 => "0".into(),
        1 => "Q".into(),
        k => format!("Q^{k}"),
    }
}

/// `H_4 = Q^1; all other degrees 0`.
pub fn betti_line(b: &BettiTable) -> String {
    if b.is_empty() {
        return "all degrees 0".into();
    }
    let parts: Vec<String> = b.iter().map(|(n, k)| format!("H_{n} = Q^{k}")).collect();
    format!("{}; all other degrees 0", parts.join("; "))
}

/// Grid indexed `[s][n]` drawn with rows `t = n - s` ascending and
/// columns `s`.
pub fn st_table(title: &str, g: &Grid) -> String {
    let cols = g.len();
    let tmax = (0..cols)
        .flat_map(|s| g[s].iter().enumerate().filter(|(_, &x)| x > 0).map(move |(n, _)| n.saturating_sub(s)))
        .max()
        .unwrap_or(0);
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["t\\s".to_string()];
    header.extend((0..cols).map(|s| s.to_string()));
    cells.push(header);
    for t in 0..=tmax {
        let mut row = vec![t.to_string()];
        row.extend((0..cols).map(|s| qdim(g[s].get(s + t).copied().unwrap_or(0))));
        cells.push(row);
    }
    let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut out = format!("{title}\n");
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        assert_eq!(betti_line(&BettiTable::from([(4, 1)])), "H_4 = Q^1; all other degrees 0");
        assert_eq!(betti_line(&BettiTable::new()), "all degrees 0");
    }

    #[test]
    fn grid_layout() {
        let g = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]];
        let s = st_table("E1", &g);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("  0"));
        assert!(lines[2].contains('Q'));
    }
}
