//! Solver regression fixtures: each file carries two coefficient blocks
//! and one expected-root block, separated by blank lines.

use beamalign::{solve_system, BeamAngles, SolveOptions, SparsePolynomial};
use num_complex::Complex;

type C64 = Complex<f64>;

fn split_blocks(text: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut cur = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if !cur.is_empty() {
        blocks.push(cur);
    }
    blocks
}

fn parse_roots(block: &str) -> Vec<(C64, C64)> {
    block
        .lines()
        .filter_map(|line| {
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .ok()?;
            assert_eq!(cols.len(), 4, "root line '{line}' needs 4 columns");
            Some((C64::new(cols[0], cols[1]), C64::new(cols[2], cols[3])))
        })
        .collect()
}

fn load_fixture(
    name: &str,
) -> (
    SparsePolynomial<f64>,
    SparsePolynomial<f64>,
    Vec<(C64, C64)>,
) {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let blocks = split_blocks(&text);
    assert_eq!(blocks.len(), 3, "{name}: expected p1, p2, roots blocks");
    let center = BeamAngles::new(0.0, 0.0);
    let p1 = SparsePolynomial::from_csv(&blocks[0], center).unwrap();
    let p2 = SparsePolynomial::from_csv(&blocks[1], center).unwrap();
    let expected = parse_roots(&blocks[2]);
    assert!(!expected.is_empty(), "{name}: no expected roots parsed");
    (p1, p2, expected)
}

fn check_fixture(name: &str) {
    let (p1, p2, expected) = load_fixture(name);
    let rs = solve_system(&p1, &p2, &SolveOptions::default()).unwrap();
    assert_eq!(rs.len(), expected.len(), "{name}: root count mismatch");
    for (ex, ey) in &expected {
        let hit = rs
            .roots
            .iter()
            .any(|r| (r.theta_rx - ex).norm() < 1e-8 && (r.theta_tx - ey).norm() < 1e-8);
        assert!(hit, "{name}: expected root ({ex}, {ey}) not found");
    }
    // Output ordering contract: real part of theta_tx, then theta_rx.
    for w in rs.roots.windows(2) {
        assert!(
            (w[0].theta_tx.re, w[0].theta_rx.re) <= (w[1].theta_tx.re, w[1].theta_rx.re),
            "{name}: roots out of order"
        );
    }
}

#[test]
fn test_01_parabola_line_fixture() {
    check_fixture("parabola_line.txt");
}

#[test]
fn test_02_circle_diagonal_fixture() {
    check_fixture("circle_diagonal.txt");
}

#[test]
fn test_03_grid_mixed_fixture() {
    check_fixture("grid_mixed.txt");
}

#[test]
fn test_04_complex_pair_fixture() {
    check_fixture("complex_pair.txt");
}
