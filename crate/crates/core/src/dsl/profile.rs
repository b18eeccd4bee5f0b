use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::lexer::{tokenize, Cursor, Token};
use crate::algebra::SelectionKind;
use crate::error::{Error, Result};
use crate::rational::format_weight;
use crate::realization::{AttributeScope, RealizationProfile};

/// Parses `profile <name> { field: value; … }`. Omitted fields keep their
/// unrestricted defaults; `attributes: *` allows every schema attribute.
pub fn parse_profile(text: &str) -> Result<RealizationProfile> {
    let mut cur = Cursor::new(tokenize(text, false)?);
    cur.expect_keyword("profile")?;
    let name = cur.name("a profile name", &[])?;
    let mut profile = RealizationProfile::unrestricted(name);
    let mut seen: BTreeSet<String> = BTreeSet::new();
    cur.expect(&Token::LBrace)?;
    while !cur.eat(&Token::RBrace) {
        let field = cur.name("a profile field", &[])?;
        if !seen.insert(field.clone()) {
            return cur.error(format!("field `{field}` given twice"));
        }
        cur.expect(&Token::Colon)?;
        match field.as_str() {
            "attributes" => {
                profile.attributes = if cur.eat(&Token::Star) {
                    AttributeScope::All
                } else {
                    AttributeScope::Only(word_list(&mut cur)?.into_iter().collect())
                };
            }
            "selections" => {
                let mut kinds = BTreeSet::new();
                let here = cur.here().clone();
                for word in word_list(&mut cur)? {
                    let kind: SelectionKind = word.parse().map_err(|_| Error::Syntax {
                        line: here.line,
                        column: here.column,
                        message: format!("unknown selection `{word}`"),
                    })?;
                    kinds.insert(kind);
                }
                profile.selections = kinds;
            }
            "weight_quantum" => {
                profile.weight_quantum = if cur.eat_keyword("none") {
                    None
                } else {
                    Some(cur.rational()?)
                };
            }
            "max_regions" => {
                profile.max_regions = if cur.eat_keyword("none") {
                    None
                } else {
                    let here = cur.here().clone();
                    match cur.next().token {
                        Token::Word(n) => Some(n.parse::<usize>().map_err(|_| Error::Syntax {
                            line: here.line,
                            column: here.column,
                            message: format!("max_regions must be a positive integer, found `{n}`"),
                        })?),
                        other => return cur.error(format!("expected a region count, found {other}")),
                    }
                };
            }
            "forget_distribution" => {
                profile.forget_distribution = if cur.eat_keyword("true") {
                    true
                } else if cur.eat_keyword("false") {
                    false
                } else {
                    return cur.error("forget_distribution must be `true` or `false`");
                };
            }
            other => return cur.error(format!("unknown profile field `{other}`")),
        }
        if !cur.eat(&Token::Semicolon) && cur.peek() != &Token::RBrace {
            return cur.error(format!("expected `;` or `}}`, found {}", cur.peek()));
        }
    }
    if cur.peek() != &Token::Eof {
        return cur.error(format!("unexpected {} after the profile", cur.peek()));
    }
    Ok(profile)
}

fn word_list(cur: &mut Cursor) -> Result<Vec<String>> {
    cur.expect(&Token::LBracket)?;
    let mut items = Vec::new();
    if cur.eat(&Token::RBracket) {
        return Ok(items);
    }
    loop {
        items.push(cur.name("a name", &[])?);
        if cur.eat(&Token::RBracket) {
            return Ok(items);
        }
        cur.expect(&Token::Comma)?;
    }
}

pub fn print_profile(profile: &RealizationProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "profile {} {{", profile.name);
    match &profile.attributes {
        AttributeScope::All => out.push_str("  attributes: *;\n"),
        AttributeScope::Only(names) => {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let _ = writeln!(out, "  attributes: [{}];", names.join(", "));
        }
    }
    let kinds: Vec<&str> = profile.selections.iter().map(|k| k.name()).collect();
    let _ = writeln!(out, "  selections: [{}];", kinds.join(", "));
    match &profile.weight_quantum {
        Some(q) => {
            let _ = writeln!(out, "  weight_quantum: {};", format_weight(q));
        }
        None => out.push_str("  weight_quantum: none;\n"),
    }
    match profile.max_regions {
        Some(n) => {
            let _ = writeln!(out, "  max_regions: {n};");
        }
        None => out.push_str("  max_regions: none;\n"),
    }
    let _ = writeln!(out, "  forget_distribution: {}", profile.forget_distribution);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::weight;

    #[test]
    fn full_profile() {
        let p = parse_profile(
            "profile geo { attributes: [region]; selections: [fixed, weighted]; weight_quantum: 1/2; max_regions: 3; forget_distribution: true }",
        )
        .unwrap();
        assert_eq!(p.name, "geo");
        assert_eq!(p.attributes, AttributeScope::Only(["region".to_string()].into()));
        assert_eq!(p.selections, [SelectionKind::Fixed, SelectionKind::Weighted].into());
        assert_eq!(p.weight_quantum, Some(weight(1, 2)));
        assert_eq!(p.max_regions, Some(3));
        assert!(p.forget_distribution);
        assert_eq!(parse_profile(&print_profile(&p)).unwrap(), p);
    }

    #[test]
    fn defaults_and_star() {
        let p = parse_profile("profile open { attributes: *; weight_quantum: none; max_regions: none; }").unwrap();
        assert_eq!(p, RealizationProfile::unrestricted("open"));
        let empty = parse_profile("profile flat { attributes: [] }").unwrap();
        assert_eq!(empty.attributes, AttributeScope::Only(BTreeSet::new()));
    }

    #[test]
    fn rejects_bad_fields() {
        for text in [
            "profile p { colour: red }",
            "profile p { selections: [roundrobin] }",
            "profile p { forget_distribution: maybe }",
            "profile p { max_regions: 2; max_regions: 3 }",
            "profile p { weight_quantum: 0.5 }",
            "profile p { max_regions: 1/2 }",
            "profile p { attributes: [region] selections: [fixed] }",
        ] {
            assert!(matches!(parse_profile(text), Err(Error::Syntax { .. })), "{text}");
        }
    }
}
