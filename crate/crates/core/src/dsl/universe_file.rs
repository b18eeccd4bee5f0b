//! Universe files: TOML with a `[schema]` table and one `[candidates.<id>]`
//! table per candidate, in declaration order.
//!
//! ```toml
//! [schema]
//! region = ["NA", "EU"]
//!
//! [candidates.a1]
//! rrtype = "A"
//! ttl = 300
//! rdata = ["192.0.2.1"]
//! weight = "1/3"      # integer or "p/q"; default 1
//! priority = 0        # default 0
//! tag = "primary"     # optional
//! health = "up"       # "up" or "down"; default up
//! ```
//!
//! An optional `[limits]` table sets `max_contexts` and `max_candidates`.

use std::fmt::Write as _;
use std::net::{Ipv4Addr, Ipv6Addr};

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::rational::{format_weight, parse_weight, Weight};
use crate::universe::{AttributeSchema, Candidate, Health, Limits, Metadata, Record, RrType, Universe};

fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidUniverse(message.into())
}

fn table<'a>(value: &'a Value, what: &str) -> Result<&'a Table> {
    value
        .as_table()
        .ok_or_else(|| invalid(format!("{what} must be a table")))
}

fn string_list(value: &Value, what: &str) -> Result<Vec<String>> {
    let items = value
        .as_array()
        .ok_or_else(|| invalid(format!("{what} must be a list of strings")))?;
    items
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| invalid(format!("{what} must be a list of strings")))
        })
        .collect()
}

fn usize_field(value: &Value, what: &str) -> Result<usize> {
    value
        .as_integer()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(format!("{what} must be a nonnegative integer")))
}

fn weight_field(value: &Value, id: &str) -> Result<Weight> {
    match value {
        Value::Integer(n) if *n >= 0 => Ok(Weight::from_integer((*n).into())),
        Value::String(s) => parse_weight(s).map_err(|e| invalid(format!("candidate `{id}` weight: {e}"))),
        _ => Err(invalid(format!(
            "candidate `{id}` weight must be a nonnegative integer or a \"p/q\" string"
        ))),
    }
}

fn candidate(id: &str, value: &Value) -> Result<Candidate> {
    let fields = table(value, &format!("candidate `{id}`"))?;
    for key in fields.keys() {
        if !["rrtype", "ttl", "rdata", "weight", "priority", "tag", "health"].contains(&key.as_str()) {
            return Err(invalid(format!("candidate `{id}` has unknown field `{key}`")));
        }
    }
    let required = |key: &str| {
        fields
            .get(key)
            .ok_or_else(|| invalid(format!("candidate `{id}` is missing `{key}`")))
    };
    let rrtype = RrType::parse(
        required("rrtype")?
            .as_str()
            .ok_or_else(|| invalid(format!("candidate `{id}` rrtype must be a string")))?,
    )?;
    let ttl = required("ttl")?
        .as_integer()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| invalid(format!("candidate `{id}` ttl must be an integer in 0..=4294967295")))?;
    let records = string_list(required("rdata")?, &format!("candidate `{id}` rdata"))?
        .iter()
        .map(|text| {
            Ok(Record {
                rdata: rrtype.parse_rdata(text)?,
                rrtype,
                ttl,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut metadata = Metadata::default();
    if let Some(w) = fields.get("weight") {
        metadata.weight = weight_field(w, id)?;
    }
    if let Some(p) = fields.get("priority") {
        metadata.priority = p
            .as_integer()
            .ok_or_else(|| invalid(format!("candidate `{id}` priority must be an integer")))?;
    }
    if let Some(t) = fields.get("tag") {
        metadata.tag = Some(
            t.as_str()
                .ok_or_else(|| invalid(format!("candidate `{id}` tag must be a string")))?
                .to_string(),
        );
    }
    if let Some(h) = fields.get("health") {
        metadata.health = match h.as_str() {
            Some("up") => Health::Up,
            Some("down") => Health::Down,
            _ => return Err(invalid(format!("candidate `{id}` health must be \"up\" or \"down\""))),
        };
    }
    Candidate::new(id, records, metadata)
}

pub fn parse_universe(text: &str) -> Result<Universe> {
    let doc: Table = toml::from_str(text).map_err(|e| invalid(e.to_string().trim_end().to_string()))?;
    for key in doc.keys() {
        if !["schema", "candidates", "limits"].contains(&key.as_str()) {
            return Err(invalid(format!("unknown top-level table `{key}`")));
        }
    }
    let schema_table = table(
        doc.get("schema").ok_or_else(|| invalid("missing [schema]"))?,
        "[schema]",
    )?;
    let attributes = schema_table
        .iter()
        .map(|(name, values)| Ok((name.clone(), string_list(values, &format!("attribute `{name}`"))?)))
        .collect::<Result<Vec<_>>>()?;
    let schema = AttributeSchema::new(attributes)?;
    let candidates = match doc.get("candidates") {
        None => Vec::new(),
        Some(v) => table(v, "[candidates]")?
            .iter()
            .map(|(id, value)| candidate(id, value))
            .collect::<Result<Vec<_>>>()?,
    };
    let mut limits = Limits::default();
    if let Some(v) = doc.get("limits") {
        for (key, value) in table(v, "[limits]")? {
            match key.as_str() {
                "max_contexts" => limits.max_contexts = usize_field(value, "max_contexts")?,
                "max_candidates" => limits.max_candidates = usize_field(value, "max_candidates")?,
                other => return Err(invalid(format!("unknown limit `{other}`"))),
            }
        }
    }
    Universe::with_limits(schema, candidates, limits)
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn key(s: &str) -> String {
    if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        quote(s)
    }
}

fn rdata_text(record: &Record) -> String {
    match record.rrtype {
        RrType::A => Ipv4Addr::from(<[u8; 4]>::try_from(record.rdata.as_slice()).expect("A rdata")).to_string(),
        RrType::Aaaa => Ipv6Addr::from(<[u8; 16]>::try_from(record.rdata.as_slice()).expect("AAAA rdata")).to_string(),
    }
}

/// Writes a universe back in the file format; `parse_universe` reads it unchanged.
pub fn print_universe(universe: &Universe) -> String {
    let mut out = String::new();
    let limits = universe.limits();
    if limits != Limits::default() {
        let _ = writeln!(
            out,
            "[limits]\nmax_contexts = {}\nmax_candidates = {}\n",
            limits.max_contexts, limits.max_candidates
        );
    }
    out.push_str("[schema]\n");
    for attr in universe.schema().attributes() {
        let values: Vec<String> = attr.domain.iter().map(|v| quote(v)).collect();
        let _ = writeln!(out, "{} = [{}]", key(&attr.name), values.join(", "));
    }
    for c in universe.candidates() {
        let _ = writeln!(out, "\n[candidates.{}]", key(c.id()));
        let _ = writeln!(out, "rrtype = \"{}\"", c.rrtype());
        let _ = writeln!(out, "ttl = {}", c.ttl());
        let rdata: Vec<String> = c.records().iter().map(|r| quote(&rdata_text(r))).collect();
        let _ = writeln!(out, "rdata = [{}]", rdata.join(", "));
        let m = c.metadata();
        let _ = writeln!(out, "weight = \"{}\"", format_weight(&m.weight));
        let _ = writeln!(out, "priority = {}", m.priority);
        if let Some(tag) = &m.tag {
            let _ = writeln!(out, "tag = {}", quote(tag));
        }
        let _ = writeln!(
            out,
            "health = \"{}\"",
            if m.health == Health::Up { "up" } else { "down" }
        );
    }
    out
}
