//! Simplified DNS message encoding.
//!
//! Layout: a 12-byte header (id 0, QR and AA set, TC when truncated, one
//! question), the question with an uncompressed name, then one resource record per
//! served record, all class IN and named by the question name. Messages over 512
//! bytes lose whole RRsets, largest first, until they fit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::universe::{Candidate, RrType};

pub const MAX_MESSAGE_LEN: usize = 512;
pub const HEADER_LEN: usize = 12;

const FLAG_QR: u16 = 0x8000;
const FLAG_AA: u16 = 0x0400;
const FLAG_TC: u16 = 0x0200;
const CLASS_IN: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub qname: String,
    pub qtype: RrType,
}

impl Question {
    pub fn new(qname: impl Into<String>, qtype: RrType) -> Self {
        Question {
            qname: qname.into(),
            qtype,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub bytes: Vec<u8>,
    pub truncated: bool,
    /// Positions, in the input slice, of the RRsets that made it into the message.
    pub kept: Vec<usize>,
}

/// Length-prefixed labels terminated by the root label. A trailing dot is optional.
pub fn encode_name(name: &str) -> Result<Vec<u8>> {
    let invalid = |reason: &str| Error::InvalidName {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = name.strip_suffix('.').unwrap_or(name);
    let mut out = Vec::with_capacity(trimmed.len() + 2);
    if !trimmed.is_empty() {
        for label in trimmed.split('.') {
            if label.is_empty() {
                return Err(invalid("empty label"));
            }
            if label.len() > 63 {
                return Err(invalid("label longer than 63 bytes"));
            }
            out.push(label.len() as u8);
            out.extend_from_slice(label.as_bytes());
        }
    }
    out.push(0);
    if out.len() > 255 {
        return Err(invalid("name longer than 255 bytes"));
    }
    Ok(out)
}

fn rrset_len(name_len: usize, candidate: &Candidate) -> usize {
    candidate.records().iter().map(|r| name_len + 10 + r.rdata.len()).sum()
}

/// Encodes the question and the given RRsets, dropping whole RRsets if needed.
pub fn encode_rrsets(question: &Question, rrsets: &[&Candidate]) -> Result<Encoded> {
    let name = encode_name(&question.qname)?;
    let base = HEADER_LEN + name.len() + 4;
    let sizes: Vec<usize> = rrsets.iter().map(|c| rrset_len(name.len(), c)).collect();
    let mut kept: Vec<usize> = (0..rrsets.len()).collect();
    let mut total = base + sizes.iter().sum::<usize>();
    let mut truncated = false;
    // largest first; ties go to the earlier RRset
    let mut drop_order = kept.clone();
    drop_order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut drops = drop_order.into_iter();
    while total > MAX_MESSAGE_LEN {
        let victim = drops.next().expect("the bare question fits");
        kept.retain(|&k| k != victim);
        total -= sizes[victim];
        truncated = true;
    }

    let ancount: usize = kept.iter().map(|&k| rrsets[k].records().len()).sum();
    let mut bytes = Vec::with_capacity(total);
    let flags = FLAG_QR | FLAG_AA | if truncated { FLAG_TC } else { 0 };
    for field in [0u16, flags, 1, ancount as u16, 0, 0] {
        bytes.extend_from_slice(&field.to_be_bytes());
    }
    bytes.extend_from_slice(&name);
    bytes.extend_from_slice(&question.qtype.code().to_be_bytes());
    bytes.extend_from_slice(&CLASS_IN.to_be_bytes());
    for &k in &kept {
        for record in rrsets[k].records() {
            bytes.extend_from_slice(&name);
            bytes.extend_from_slice(&record.rrtype.code().to_be_bytes());
            bytes.extend_from_slice(&CLASS_IN.to_be_bytes());
            bytes.extend_from_slice(&record.ttl.to_be_bytes());
            bytes.extend_from_slice(&(record.rdata.len() as u16).to_be_bytes());
            bytes.extend_from_slice(&record.rdata);
        }
    }
    debug_assert_eq!(bytes.len(), total);
    Ok(Encoded { bytes, truncated, kept })
}

/// Lowercase hex, sixteen space-separated bytes per line, newline-terminated.
pub fn hex_dump(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 3);
    for line in bytes.chunks(16) {
        let mut first = true;
        for b in line {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{b:02x}").expect("writing to a string");
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`hex_dump`]; ignores whitespace.
pub fn parse_hex(text: &str) -> Option<Vec<u8>> {
    let digits: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    if !digits.len().is_multiple_of(2) {
        return None;
    }
    digits
        .chunks(2)
        .map(|pair| u8::from_str_radix(std::str::from_utf8(pair).ok()?, 16).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::a_record;
    use crate::universe::Metadata;

    fn single(i: u8) -> Candidate {
        Candidate::new(format!("c{i}"), vec![a_record(i)], Metadata::default()).unwrap()
    }

    fn question() -> Question {
        Question::new("svc.example.com", RrType::A)
    }

    fn flags(bytes: &[u8]) -> u16 {
        u16::from_be_bytes([bytes[2], bytes[3]])
    }

    #[test]
    fn name_encoding() {
        assert_eq!(encode_name("svc.example.com").unwrap().len(), 17);
        assert_eq!(
            encode_name("svc.example.com.").unwrap(),
            encode_name("svc.example.com").unwrap()
        );
        assert_eq!(encode_name(".").unwrap(), vec![0]);
        assert!(matches!(encode_name("a..b"), Err(Error::InvalidName { .. })));
        assert!(encode_name(&"x".repeat(64)).is_err());
        assert!(encode_name(&"x".repeat(63)).is_ok());
        let long = vec!["y".repeat(63); 4].join(".");
        assert!(encode_name(&long).is_err());
    }

    #[test]
    fn empty_response_is_33_bytes() {
        let e = encode_rrsets(&question(), &[]).unwrap();
        assert_eq!(e.bytes.len(), 33);
        assert!(!e.truncated);
        assert_eq!(flags(&e.bytes), 0x8400);
    }

    #[test]
    fn fifteen_records_fit() {
        let cands: Vec<Candidate> = (1..=15).map(single).collect();
        let refs: Vec<&Candidate> = cands.iter().collect();
        let e = encode_rrsets(&question(), &refs).unwrap();
        assert_eq!(e.bytes.len(), 498);
        assert!(!e.truncated);
        assert_eq!(u16::from_be_bytes([e.bytes[6], e.bytes[7]]), 15);
    }

    #[test]
    fn sixteen_record_rrset_is_dropped_whole() {
        let big = Candidate::new("big", (1..=16).map(a_record).collect(), Metadata::default()).unwrap();
        let e = encode_rrsets(&question(), &[&big]).unwrap();
        assert_eq!(e.bytes.len(), 33);
        assert!(e.truncated);
        assert_eq!(flags(&e.bytes), 0x8600);
        assert!(e.kept.is_empty());
    }

    #[test]
    fn drops_largest_rrset_first() {
        let big = Candidate::new("big", (1..=10).map(a_record).collect(), Metadata::default()).unwrap();
        let small: Vec<Candidate> = (20..=26).map(single).collect();
        let mut refs: Vec<&Candidate> = small.iter().collect();
        refs.insert(3, &big);
        // 33 + 17·31 = 560 > 512; dropping the 10-record set leaves 7 records
        let e = encode_rrsets(&question(), &refs).unwrap();
        assert!(e.truncated);
        assert_eq!(e.kept, vec![0, 1, 2, 4, 5, 6, 7]);
        assert_eq!(e.bytes.len(), 33 + 7 * 31);
    }

    #[test]
    fn hex_round_trip() {
        let bytes: Vec<u8> = (0..=40).collect();
        let dump = hex_dump(&bytes);
        assert_eq!(dump.lines().count(), 3);
        assert!(dump.starts_with("00 01 02"));
        assert_eq!(parse_hex(&dump).unwrap(), bytes);
        assert!(parse_hex("0").is_none());
    }
}
