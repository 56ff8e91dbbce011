//! The twelve acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p psimat --test acceptance -- --nocapture` to see
//! the lines.

use psimat::selftest;

#[test]
fn acceptance() {
    let results = selftest::run_all();
    assert_eq!(results.len(), selftest::CRITERIA);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{}/{} criteria pass", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
