use reflectia::verify::{check_catalog, closed_form, suite, verify_all, verify_group};

#[test]
fn suite_membership() {
    let default = suite(None, false).unwrap();
    assert!(!default.contains(&"E7".to_string()));
    assert!(!default.iter().any(|n| n == "E8" || n == "G34"), "beyond the element cap");
    assert!(suite(None, true).unwrap().contains(&"E7".to_string()));
    let small = suite(Some(100), false).unwrap();
    assert!(small.contains(&"G4".to_string()) && !small.contains(&"G9".to_string()));
    let mut sorted = default.clone();
    sorted.sort();
    assert_eq!(default, sorted);
}

#[test]
fn report_shape() {
    let rep = verify_group("G(3,1,2)", false).unwrap();
    assert!(rep.pass, "{:?}", rep.failures());
    assert_eq!(rep.per_r.len(), 3);
    assert!(rep.per_r.iter().all(|o| o.source == "theorem" && o.equal));
    assert_eq!(rep.psi_checks.len(), 9);
    let json = serde_json::to_string(&rep).unwrap();
    assert!(!json.contains("millis"), "timing stays out of JSON");
}

#[test]
fn sources_by_group() {
    assert_eq!(closed_form("A3", 1).unwrap().0, "theorem");
    assert_eq!(closed_form("G(4,2,2)", 1).unwrap().0, "wedge");
    assert_eq!(closed_form("G34", 3).unwrap().0, "table");
    assert_eq!(closed_form("G7", 0).unwrap().0, "boundary");
    assert!(closed_form("G7", 1).is_err());
    assert!(closed_form("A3", 4).is_err());
}

#[test]
fn parallel_results_are_sorted() {
    let names: Vec<String> = ["H3", "A2", "G(2,2,3)", "B3", "G4"].iter().map(|s| s.to_string()).collect();
    let out = verify_all(&names, false);
    let got: Vec<&str> = out.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(got, ["A2", "B3", "G(2,2,3)", "G4", "H3"]);
    assert!(out.iter().all(|(_, r)| r.as_ref().unwrap().pass));
}

#[test]
fn catalog_entries_check_out() {
    let checks = check_catalog(1_000).unwrap();
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    assert!(checks.iter().any(|c| c.generated_order.is_none()), "large entries are parsed only");
}
