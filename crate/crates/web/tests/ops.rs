use rfsm_web::ops::{approximate, render, run_word, sample_machine};

#[test]
fn approximation_of_a_split_block() {
    let m = sample_machine();
    assert_eq!(approximate(&m, "q1, q3").unwrap(), "(φ,{q1,q2}∪{q3,q5})");
    assert_eq!(
        approximate(&m, "q3 q5 q4").unwrap(),
        "({q3,q5}∪{q4},{q3,q5}∪{q4})"
    );
}

#[test]
fn word_run_matches_table_entry() {
    let m = sample_machine();
    assert_eq!(
        run_word(&m, "q3", "b").unwrap(),
        "({q1,q2},{q1,q2}∪{q3,q5}∪{q4})"
    );
    assert_eq!(run_word(&m, "q4", "").unwrap(), "({q4},{q4})");
}

#[test]
fn render_both_tables() {
    let m = sample_machine();
    assert!(render(&m, false, "").unwrap().contains("δ(q,a)"));
    assert!(render(&m, true, "").unwrap().contains("δD(D,a)"));
    assert!(render(&m, false, "ab").unwrap().contains("δ*(q,ab)"));
}

#[test]
fn errors_come_back_as_text() {
    let m = sample_machine();
    assert!(approximate(&m, "q9").unwrap_err().contains("q9"));
    assert!(run_word("machine x", "q1", "a").is_err());
    assert!(render(&m, false, "zz").is_err());
}
