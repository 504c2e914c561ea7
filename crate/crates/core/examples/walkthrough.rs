//! The six-worker, eight-question example end to end: agreement graph,
//! peeling, expert core and the aggregators that use it.

use expert_core::aggregate::{majority_vote, top2};
use expert_core::{extract, load_response_matrix, AggregationResult, CandidateCatalog, ResponseMatrix, TiePolicy};

const ANSWERS: [(&str, &str); 6] = [
    ("w1", "DCDEBCAE"),
    ("w2", "DCBEBCAC"),
    ("w3", "DCDDBCAE"),
    ("w4", "CBAAECDB"),
    ("w5", "ABEABEEC"),
    ("w6", "CABEBBAC"),
];

fn show(matrix: &ResponseMatrix, name: &str, r: &AggregationResult) {
    let row: String = (0..matrix.m()).map(|q| matrix.candidates(q)[r.estimates[q]].as_str()).collect();
    println!("{name:>6}: {row}  ({} ties)", r.tie_count());
}

fn main() -> expert_core::Result<()> {
    let mut csv = String::from("worker,question,answer\n");
    for (w, row) in ANSWERS {
        for (q, c) in row.chars().enumerate() {
            csv += &format!("{w},q{},{c}\n", q + 1);
        }
    }
    let catalog = CandidateCatalog::shared(["A", "B", "C", "D", "E"]);
    let matrix = load_response_matrix(csv.as_bytes(), Some(&catalog))?;

    let e = extract(&matrix, None)?;
    println!("average agreement probability p = {:.4}\n", e.graph.p());
    e.graph.write_csv(&matrix, std::io::stdout())?;
    println!();
    e.trace.write_csv(&matrix, std::io::stdout())?;
    let core: Vec<&str> = e.core.iter().map(|&w| matrix.workers()[w].as_str()).collect();
    println!("\nexpert core: {core:?}\n");

    println!(" truth: DCDEBCAE");
    show(&matrix, "MV", &majority_vote(&matrix, None, TiePolicy::Lexicographic)?);
    show(&matrix, "Ex-MV", &majority_vote(&matrix, Some(&e.core), TiePolicy::Lexicographic)?);
    show(&matrix, "Top-2", &top2(&matrix, &e.trace)?);
    Ok(())
}
