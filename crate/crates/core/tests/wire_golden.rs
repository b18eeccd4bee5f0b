use std::path::Path;

use steerlab::fixtures::a_record;
use steerlab::universe::{Candidate, Metadata, RrType};
use steerlab::wire::{encode_rrsets, hex_dump, parse_hex, Question};

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn question() -> Question {
    Question::new("svc.example.com", RrType::A)
}

#[test]
fn empty_answer() {
    let e = encode_rrsets(&question(), &[]).unwrap();
    assert_eq!(hex_dump(&e.bytes), golden("empty.hex"));
    assert_eq!(e.bytes.len(), 33);
}

#[test]
fn fifteen_single_record_rrsets() {
    let cands: Vec<Candidate> = (1..=15)
        .map(|i| Candidate::new(format!("c{i}"), vec![a_record(i)], Metadata::default()).unwrap())
        .collect();
    let refs: Vec<&Candidate> = cands.iter().collect();
    let e = encode_rrsets(&question(), &refs).unwrap();
    assert_eq!(hex_dump(&e.bytes), golden("fifteen.hex"));
    assert_eq!(parse_hex(&golden("fifteen.hex")).unwrap().len(), 498);
}

#[test]
fn one_fifteen_record_rrset_matches_too() {
    let big = Candidate::new("big", (1..=15).map(a_record).collect(), Metadata::default()).unwrap();
    let e = encode_rrsets(&question(), &[&big]).unwrap();
    assert!(!e.truncated);
    assert_eq!(hex_dump(&e.bytes), golden("fifteen.hex"));
}

#[test]
fn sixteen_record_rrset_is_dropped_with_tc() {
    let big = Candidate::new("big", (1..=16).map(a_record).collect(), Metadata::default()).unwrap();
    let e = encode_rrsets(&question(), &[&big]).unwrap();
    assert!(e.truncated);
    assert_eq!(hex_dump(&e.bytes), golden("sixteen_truncated.hex"));
}
