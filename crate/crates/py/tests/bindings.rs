use veech::{cylinders_json, family, lyapunov, saddles, surface_json, verify_word};

#[test]
fn verify_word_matches_table() {
    let (poly, degree, dominant) = verify_word("2qinf", 7, "t^3.s").unwrap();
    assert_eq!(poly, "x^3 - 2x^2 - x + 1");
    assert_eq!(degree, 3);
    assert!((dominant - 2.247).abs() < 5e-4);
}

#[test]
fn bad_inputs_are_errors() {
    assert!(family("hecke", 5).is_err());
    assert!(verify_word("2qinf", 7, "t^^").is_err());
    assert!(surface_json(1).is_err());
}

#[test]
fn lyapunov_identity_is_one() {
    let (mean, stderr) = lyapunov("2qinf", 5, 1, 500, 4, 1).unwrap();
    assert!((mean - 1.0).abs() < 1e-12 && stderr < 1e-12);
}

#[test]
fn surface_and_cylinders_serialize() {
    let s: serde_json::Value = serde_json::from_str(&surface_json(8).unwrap()).unwrap();
    assert_eq!(s["genus"], 2);
    let c: serde_json::Value = serde_json::from_str(&cylinders_json(8, 0.0).unwrap()).unwrap();
    assert_eq!(c["cylinders"].as_array().unwrap().len(), 2);
    assert_eq!(saddles(4, 1.5).unwrap().len(), 4);
}
