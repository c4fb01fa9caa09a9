use ncorep::report::Status;
use ncorep::suite::Command;
use ncorep_wasm::{determinant, explore, normal_form, relations};

#[test]
fn relations_at_the_limit() {
    let rep = explore(Command::Relations, "r=0, s=0", &[]).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.substitutions, ["r=0", "s=0"]);
    assert_eq!(rep.check("relations-rank").unwrap().status, Status::Pass);
}

#[test]
fn determinant_with_full_parameters() {
    let rep = explore(Command::Det, "", &[]).unwrap();
    assert_eq!(rep.check("determinant-expected").unwrap().status, Status::Pass);
}

#[test]
fn normal_form_reorders_words() {
    let rep = explore(Command::NormalForm, " r=0 ;s=0 ", &["b a".to_string()]).unwrap();
    let nf = &rep.check("normal-form").unwrap().artifacts["normal_form"];
    assert_eq!(nf, "(p/q) a b");
}

#[test]
fn json_exports() {
    assert!(relations("r=0, s=0").unwrap().contains("\"command\": \"relations\""));
    assert!(determinant("r=0, s=0").unwrap().contains("\"determinant\""));
    assert!(normal_form("d a", "r=0, s=0").unwrap().contains("normal_form"));
}

#[test]
fn bad_substitutions_are_errors() {
    assert!(explore(Command::Det, "z=1", &[]).is_err());
    assert!(explore(Command::Det, "s=0, r=0", &[]).is_err());
    assert!(explore(Command::NormalForm, "", &["a +".to_string()]).is_err());
}
