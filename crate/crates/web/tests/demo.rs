use ludeme::engine::library;
use ludeme_web::{check_text, grammar, library_ids, library_text, Session};

#[test]
fn check_reports_summary_and_positions() {
    let ok = check_text(library::text("hex").unwrap());
    assert_eq!(ok["ok"], true);
    assert!(ok["summary"].as_str().unwrap().contains("121 cells"));
    assert!(ok["pretty"].as_str().unwrap().starts_with("(game \"Hex\""));

    let bad = check_text("(game \"X\"\n  (mode 2 (addToEmpty))\n  (equipment { (Hexboard 5) })\n  (rules (play (to (empty))) (end (full) (result mover Draw))))");
    assert_eq!(bad["ok"], false);
    assert_eq!(bad["errors"][0]["line"], 3);
    assert!(bad["errors"][0]["message"]
        .as_str()
        .unwrap()
        .contains("Hexboard"));

    let unbuildable = check_text("(game \"X\" (mode 2 (addToEmpty)) (equipment { (ball Each) }) (rules (play (to (empty))) (end (full) (result mover Draw))))");
    assert_eq!(unbuildable["ok"], false);
    assert!(unbuildable["pretty"].is_string());
}

#[test]
fn grammar_and_library() {
    assert!(grammar().contains("HexBoard ::="));
    let ids: Vec<String> = serde_json::from_str(&library_ids()).unwrap();
    assert!(ids.contains(&"hex5".to_string()));
    assert!(library_text("hex5").is_some());
    assert!(library_text("chess").is_none());
}

#[test]
fn play_against_uct_until_the_end() {
    let mut s = Session::new(library_text("hex5").as_deref().unwrap()).unwrap();
    let v = s.view();
    assert_eq!(v["side"], 5);
    assert_eq!(v["cells"].as_array().unwrap().len(), 25);
    assert_eq!(v["to_move"], "P1");
    assert!(s.play("z9").is_err());
    let v = s.play("c3").unwrap();
    assert_eq!(v["to_move"], "P2");
    assert!(s.play("c3").is_err());
    let mut view = s.reply(200).unwrap();
    assert_eq!(view["moves"].as_array().unwrap().len(), 2);
    while view["result"].is_null() {
        let free = view["cells"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["owner"].is_null())
            .unwrap()["label"]
            .as_str()
            .unwrap()
            .to_string();
        view = s.play(&free).unwrap();
        if view["result"].is_null() {
            view = s.reply(50).unwrap();
        }
    }
    assert!(view["to_move"].is_null());
    assert!(!view["result"]["winner"].is_null());
    assert!(s.reply(10).is_err());
}
