use std::io::Write;

use veech_cli::acceptance::{criteria_for_tag, run_criterion, KNOWN_OPEN};

// Written straight to the stderr handle so the lines survive libtest's output capture.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

#[test]
fn acceptance() {
    let results: Vec<_> = criteria_for_tag("all")
        .unwrap()
        .into_iter()
        .map(|id| {
            let r = run_criterion(id);
            report(&r.line());
            r
        })
        .collect();
    let blocking: Vec<u32> = results.iter().filter(|r| !r.pass && !KNOWN_OPEN.contains(&r.id)).map(|r| r.id).collect();
    let open: Vec<u32> = results.iter().filter(|r| !r.pass && KNOWN_OPEN.contains(&r.id)).map(|r| r.id).collect();
    report(&format!("open (analysed, not blocking): {open:?}"));
    assert!(blocking.is_empty(), "failing criteria: {blocking:?}");
}

#[test]
fn tags_select_criteria() {
    assert_eq!(criteria_for_tag("exactfield"), Some(vec![4]));
    assert_eq!(criteria_for_tag("polyflow"), Some(vec![10, 11]));
    assert_eq!(criteria_for_tag("7"), Some(vec![7]));
    assert_eq!(criteria_for_tag("12"), None);
    assert_eq!(criteria_for_tag("all").unwrap().len(), 11);
}
