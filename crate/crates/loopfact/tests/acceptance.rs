//! End-to-end acceptance sweep: one PASS/FAIL line per criterion.

use loopfact::verify;

#[test]
fn acceptance_criteria() {
    let lines = verify::run_all(7);
    let mut all = true;
    for (i, line) in lines.iter().enumerate() {
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {} [{}] {}", i + 1, line.name, line.detail);
        all &= line.pass;
    }
    assert!(all, "acceptance criteria failed; see the report lines above");
}
