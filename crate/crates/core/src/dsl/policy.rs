use std::fmt::{self, Write as _};
use std::sync::Arc;

use super::lexer::{tokenize, Cursor, Token};
use crate::algebra::{Policy, Predicate, Term};
use crate::error::{Error, Result};
use crate::rational::{format_weight, Weight};
use crate::universe::{AnswerSet, Universe, RESERVED_WORDS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PredExpr {
    True,
    False,
    Eq { attribute: String, value: String },
    In { attribute: String, values: Vec<String> },
    And(Box<PredExpr>, Box<PredExpr>),
    Or(Box<PredExpr>, Box<PredExpr>),
    Not(Box<PredExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PolicyExpr {
    Zero,
    One,
    Fixed(Vec<String>),
    Weighted(Vec<(Vec<String>, Weight)>),
    Priority(Vec<String>),
    Affinity(String),
    When(PredExpr, Box<PolicyExpr>),
    Merge(Vec<PolicyExpr>),
    Product(Box<PolicyExpr>, Box<PolicyExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyDocument {
    /// Path from an optional `universe "…"` line.
    pub universe_ref: Option<String>,
    pub expr: PolicyExpr,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `product(e1, e2)`.
    pub extended_algebra: bool,
}

pub fn parse_policy(text: &str, options: ParseOptions) -> Result<PolicyDocument> {
    let mut p = Parser::new(Cursor::new(tokenize(text, false)?), options);
    let universe_ref = if p.cur.eat_keyword("universe") {
        match p.cur.next().token {
            Token::Str(path) => Some(path),
            other => return p.cur.error(format!("expected a quoted universe path, found {other}")),
        }
    } else {
        None
    };
    let expr = p.expr()?;
    if p.cur.peek() != &Token::Eof {
        return p.cur.error(format!("unexpected {} after the policy", p.cur.peek()));
    }
    Ok(PolicyDocument { universe_ref, expr })
}

pub(crate) struct Parser {
    pub(crate) cur: Cursor,
    options: ParseOptions,
}

impl Parser {
    pub(crate) fn new(cur: Cursor, options: ParseOptions) -> Self {
        Parser { cur, options }
    }

    pub(crate) fn predicate(&mut self) -> Result<PredExpr> {
        self.pred_or()
    }

    pub(crate) fn answer_set_names(&mut self) -> Result<Vec<String>> {
        self.list(Token::LBrace, Token::RBrace, "a candidate id")
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        self.cur.name(what, RESERVED_WORDS)
    }

    /// Values and candidate ids sit in unambiguous positions, so keywords are allowed.
    fn word(&mut self, what: &str) -> Result<String> {
        self.cur.name(what, &[])
    }

    fn list(&mut self, open: Token, close: Token, what: &str) -> Result<Vec<String>> {
        self.cur.expect(&open)?;
        let mut items = Vec::new();
        if self.cur.eat(&close) {
            return Ok(items);
        }
        loop {
            items.push(self.word(what)?);
            if self.cur.eat(&close) {
                return Ok(items);
            }
            self.cur.expect(&Token::Comma)?;
        }
    }

    fn expr(&mut self) -> Result<PolicyExpr> {
        let Token::Word(word) = self.cur.peek().clone() else {
            return self
                .cur
                .error(format!("expected a policy expression, found {}", self.cur.peek()));
        };
        match word.as_str() {
            "zero" => {
                self.cur.next();
                Ok(PolicyExpr::Zero)
            }
            "one" => {
                self.cur.next();
                Ok(PolicyExpr::One)
            }
            "when" => {
                self.cur.next();
                let pred = self.pred_or()?;
                self.cur.expect_keyword("apply")?;
                Ok(PolicyExpr::When(pred, Box::new(self.expr()?)))
            }
            "merge" => {
                self.cur.next();
                self.cur.expect(&Token::LParen)?;
                let mut items = vec![self.expr()?];
                while self.cur.eat(&Token::Comma) {
                    items.push(self.expr()?);
                }
                self.cur.expect(&Token::RParen)?;
                Ok(PolicyExpr::Merge(items))
            }
            "fixed" => {
                self.cur.next();
                Ok(PolicyExpr::Fixed(self.list(
                    Token::LBrace,
                    Token::RBrace,
                    "a candidate id",
                )?))
            }
            "weighted" => {
                self.cur.next();
                self.cur.expect(&Token::LBrace)?;
                let mut entries = Vec::new();
                loop {
                    let set = self.list(Token::LBrace, Token::RBrace, "a candidate id")?;
                    self.cur.expect(&Token::Colon)?;
                    entries.push((set, self.cur.rational()?));
                    if self.cur.eat(&Token::RBrace) {
                        break;
                    }
                    self.cur.expect(&Token::Comma)?;
                }
                Ok(PolicyExpr::Weighted(entries))
            }
            "priority" => {
                self.cur.next();
                Ok(PolicyExpr::Priority(self.list(
                    Token::LBracket,
                    Token::RBracket,
                    "a candidate id",
                )?))
            }
            "affinity" => {
                self.cur.next();
                self.cur.expect(&Token::LParen)?;
                let attr = self.ident("an attribute")?;
                self.cur.expect(&Token::RParen)?;
                Ok(PolicyExpr::Affinity(attr))
            }
            "product" => {
                if !self.options.extended_algebra {
                    return self
                        .cur
                        .error("`product` needs the extended algebra (--extended-algebra)");
                }
                self.cur.next();
                self.cur.expect(&Token::LParen)?;
                let left = self.expr()?;
                self.cur.expect(&Token::Comma)?;
                let right = self.expr()?;
                self.cur.expect(&Token::RParen)?;
                Ok(PolicyExpr::Product(Box::new(left), Box::new(right)))
            }
            other => self.cur.error(format!("expected a policy expression, found `{other}`")),
        }
    }

    fn pred_or(&mut self) -> Result<PredExpr> {
        let mut left = self.pred_and()?;
        while self.cur.eat_keyword("or") {
            left = PredExpr::Or(Box::new(left), Box::new(self.pred_and()?));
        }
        Ok(left)
    }

    fn pred_and(&mut self) -> Result<PredExpr> {
        let mut left = self.pred_not()?;
        while self.cur.eat_keyword("and") {
            left = PredExpr::And(Box::new(left), Box::new(self.pred_not()?));
        }
        Ok(left)
    }

    fn pred_not(&mut self) -> Result<PredExpr> {
        if self.cur.eat_keyword("not") {
            return Ok(PredExpr::Not(Box::new(self.pred_not()?)));
        }
        self.pred_atom()
    }

    fn pred_atom(&mut self) -> Result<PredExpr> {
        if self.cur.eat(&Token::LParen) {
            let inner = self.pred_or()?;
            self.cur.expect(&Token::RParen)?;
            return Ok(inner);
        }
        if self.cur.eat_keyword("true") {
            return Ok(PredExpr::True);
        }
        if self.cur.eat_keyword("false") {
            return Ok(PredExpr::False);
        }
        let attribute = self.ident("an attribute")?;
        if self.cur.eat(&Token::Equals) {
            let value = self.word("a value")?;
            return Ok(PredExpr::Eq { attribute, value });
        }
        if self.cur.eat_keyword("in") {
            let values = self.list(Token::LBrace, Token::RBrace, "a value")?;
            return Ok(PredExpr::In { attribute, values });
        }
        self.cur.error(format!("expected `=` or `in` after `{attribute}`"))
    }
}

fn pred_prec(p: &PredExpr) -> u8 {
    match p {
        PredExpr::Or(..) => 0,
        PredExpr::And(..) => 1,
        PredExpr::Not(_) => 2,
        _ => 3,
    }
}

fn write_pred(out: &mut String, p: &PredExpr, min: u8) {
    let parens = pred_prec(p) < min;
    if parens {
        out.push('(');
    }
    match p {
        PredExpr::True => out.push_str("true"),
        PredExpr::False => out.push_str("false"),
        PredExpr::Eq { attribute, value } => {
            let _ = write!(out, "{attribute} = {value}");
        }
        PredExpr::In { attribute, values } => {
            let _ = write!(out, "{attribute} in {{{}}}", values.join(", "));
        }
        PredExpr::Or(l, r) => {
            write_pred(out, l, 0);
            out.push_str(" or ");
            write_pred(out, r, 1);
        }
        PredExpr::And(l, r) => {
            write_pred(out, l, 1);
            out.push_str(" and ");
            write_pred(out, r, 2);
        }
        PredExpr::Not(inner) => {
            out.push_str("not ");
            write_pred(out, inner, 2);
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_expr(out: &mut String, e: &PolicyExpr) {
    match e {
        PolicyExpr::Zero => out.push_str("zero"),
        PolicyExpr::One => out.push_str("one"),
        PolicyExpr::Fixed(ids) => {
            let _ = write!(out, "fixed {{{}}}", ids.join(", "));
        }
        PolicyExpr::Weighted(entries) => {
            let body: Vec<String> = entries
                .iter()
                .map(|(set, w)| format!("{{{}}}: {}", set.join(", "), format_weight(w)))
                .collect();
            let _ = write!(out, "weighted {{ {} }}", body.join(", "));
        }
        PolicyExpr::Priority(ids) => {
            let _ = write!(out, "priority [{}]", ids.join(", "));
        }
        PolicyExpr::Affinity(attr) => {
            let _ = write!(out, "affinity({attr})");
        }
        PolicyExpr::When(p, body) => {
            out.push_str("when ");
            write_pred(out, p, 0);
            out.push_str(" apply ");
            write_expr(out, body);
        }
        PolicyExpr::Merge(items) => {
            out.push_str("merge(");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, item);
            }
            out.push(')');
        }
        PolicyExpr::Product(l, r) => {
            out.push_str("product(");
            write_expr(out, l);
            out.push_str(", ");
            write_expr(out, r);
            out.push(')');
        }
    }
}

impl fmt::Display for PredExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_pred(&mut s, self, 0);
        f.write_str(&s)
    }
}

impl fmt::Display for PolicyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self);
        f.write_str(&s)
    }
}

pub fn print_policy(doc: &PolicyDocument) -> String {
    let mut out = String::new();
    if let Some(path) = &doc.universe_ref {
        let escaped = path.replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(out, "universe \"{escaped}\"");
    }
    write_expr(&mut out, &doc.expr);
    out.push('\n');
    out
}

fn attribute(u: &Universe, name: &str) -> Result<usize> {
    u.schema()
        .attribute_index(name)
        .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
}

fn value(u: &Universe, attribute: usize, name: &str) -> Result<usize> {
    let attr = &u.schema().attributes()[attribute];
    attr.value_index(name).ok_or_else(|| Error::UnknownValue {
        attribute: attr.name.clone(),
        value: name.to_string(),
    })
}

fn candidate(u: &Universe, id: &str) -> Result<usize> {
    u.candidate_index(id)
        .ok_or_else(|| Error::UnknownCandidate(id.to_string()))
}

pub(crate) fn answer_set(u: &Universe, ids: &[String]) -> Result<AnswerSet> {
    ids.iter()
        .map(|id| candidate(u, id))
        .collect::<Result<Vec<_>>>()
        .map(AnswerSet::from_indices)
}

impl PredExpr {
    pub fn resolve(&self, u: &Universe) -> Result<Predicate> {
        Ok(match self {
            PredExpr::True => Predicate::True,
            PredExpr::False => Predicate::False,
            PredExpr::Eq { attribute: a, value: v } => {
                let a = attribute(u, a)?;
                Predicate::eq(a, value(u, a, v)?)
            }
            PredExpr::In { attribute: a, values } => {
                let a = attribute(u, a)?;
                let values = values.iter().map(|v| value(u, a, v)).collect::<Result<Vec<_>>>()?;
                Predicate::one_of(a, values)
            }
            PredExpr::And(l, r) => l.resolve(u)?.and(r.resolve(u)?),
            PredExpr::Or(l, r) => l.resolve(u)?.or(r.resolve(u)?),
            PredExpr::Not(inner) => inner.resolve(u)?.not(),
        })
    }

    /// Names for a resolved predicate; single-value tests print as `attr = value`.
    pub fn from_predicate(p: &Predicate, u: &Universe) -> PredExpr {
        match p {
            Predicate::True => PredExpr::True,
            Predicate::False => PredExpr::False,
            Predicate::Test { attribute, values } => {
                let attr = &u.schema().attributes()[*attribute];
                let names: Vec<String> = values.iter().map(|&v| attr.domain[v].clone()).collect();
                if names.len() == 1 {
                    PredExpr::Eq {
                        attribute: attr.name.clone(),
                        value: names[0].clone(),
                    }
                } else {
                    PredExpr::In {
                        attribute: attr.name.clone(),
                        values: names,
                    }
                }
            }
            Predicate::And(l, r) => PredExpr::And(
                Box::new(PredExpr::from_predicate(l, u)),
                Box::new(PredExpr::from_predicate(r, u)),
            ),
            Predicate::Or(l, r) => PredExpr::Or(
                Box::new(PredExpr::from_predicate(l, u)),
                Box::new(PredExpr::from_predicate(r, u)),
            ),
            Predicate::Not(inner) => PredExpr::Not(Box::new(PredExpr::from_predicate(inner, u))),
        }
    }
}

impl PolicyExpr {
    pub fn to_term(&self, u: &Universe) -> Result<Term> {
        Ok(match self {
            PolicyExpr::Zero => Term::Zero,
            PolicyExpr::One => Term::One,
            PolicyExpr::Fixed(ids) => Term::Fixed(answer_set(u, ids)?),
            PolicyExpr::Weighted(entries) => Term::Weighted(
                entries
                    .iter()
                    .map(|(ids, w)| Ok((answer_set(u, ids)?, w.clone())))
                    .collect::<Result<_>>()?,
            ),
            PolicyExpr::Priority(ids) => Term::Priority(ids.iter().map(|id| candidate(u, id)).collect::<Result<_>>()?),
            PolicyExpr::Affinity(a) => Term::Affinity(attribute(u, a)?),
            PolicyExpr::When(p, body) => Term::when(p.resolve(u)?, body.to_term(u)?),
            PolicyExpr::Merge(items) => Term::Merge(items.iter().map(|t| t.to_term(u)).collect::<Result<_>>()?),
            PolicyExpr::Product(l, r) => Term::product(l.to_term(u)?, r.to_term(u)?),
        })
    }

    pub fn from_term(term: &Term, u: &Universe) -> PolicyExpr {
        let ids = |s: AnswerSet| -> Vec<String> { s.indices().map(|i| u.candidates()[i].id().to_string()).collect() };
        match term {
            Term::Zero => PolicyExpr::Zero,
            Term::One => PolicyExpr::One,
            Term::Fixed(s) => PolicyExpr::Fixed(ids(*s)),
            Term::Weighted(entries) => {
                PolicyExpr::Weighted(entries.iter().map(|(s, w)| (ids(*s), w.clone())).collect())
            }
            Term::Priority(order) => {
                PolicyExpr::Priority(order.iter().map(|&i| u.candidates()[i].id().to_string()).collect())
            }
            Term::Affinity(a) => PolicyExpr::Affinity(u.schema().attributes()[*a].name.clone()),
            Term::When(p, body) => {
                PolicyExpr::When(PredExpr::from_predicate(p, u), Box::new(PolicyExpr::from_term(body, u)))
            }
            Term::Merge(items) if items.is_empty() => PolicyExpr::Zero,
            Term::Merge(items) => PolicyExpr::Merge(items.iter().map(|t| PolicyExpr::from_term(t, u)).collect()),
            Term::Product(l, r) => PolicyExpr::Product(
                Box::new(PolicyExpr::from_term(l, u)),
                Box::new(PolicyExpr::from_term(r, u)),
            ),
        }
    }
}

/// Binds a parsed document to `universe`, rejecting unknown names.
pub fn resolve(doc: &PolicyDocument, universe: &Arc<Universe>) -> Result<Policy> {
    Policy::new(universe.clone(), doc.expr.to_term(universe)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{p_geo, u0};

    fn parse(text: &str) -> PolicyDocument {
        parse_policy(text, ParseOptions::default()).unwrap()
    }

    #[test]
    fn when_maps_to_gate_times_selection() {
        let doc = parse("when region = NA apply fixed {a1}");
        assert_eq!(
            doc.expr,
            PolicyExpr::When(
                PredExpr::Eq {
                    attribute: "region".into(),
                    value: "NA".into()
                },
                Box::new(PolicyExpr::Fixed(vec!["a1".into()]))
            )
        );
        assert_eq!(doc.universe_ref, None);
    }

    #[test]
    fn merge_elaborates_to_p_geo() {
        let u = u0();
        let doc = parse("merge(when region=NA apply fixed{a1}, when region=EU apply fixed{a2})");
        let f = resolve(&doc, &u).unwrap().to_behavior();
        assert!(f.equiv(&p_geo(&u)).unwrap().holds());
    }

    #[test]
    fn precedence_and_printing() {
        let doc = parse("when not region = NA or qtype = A and region in {NA, EU} apply one");
        let PolicyExpr::When(p, _) = &doc.expr else { panic!() };
        assert!(matches!(p, PredExpr::Or(l, r) if matches!(**l, PredExpr::Not(_)) && matches!(**r, PredExpr::And(..))));
        let printed = print_policy(&doc);
        assert_eq!(
            printed,
            "when not region = NA or qtype = A and region in {NA, EU} apply one\n"
        );
        let grouped = parse("when (region = NA or qtype = A) and not (qtype = AAAA and true) apply zero");
        let printed = print_policy(&grouped);
        assert_eq!(
            printed,
            "when (region = NA or qtype = A) and not (qtype = AAAA and true) apply zero\n"
        );
        assert_eq!(parse(&printed), grouped);
    }

    #[test]
    fn right_nested_operators_keep_parentheses() {
        let doc = parse("when region = NA and (qtype = A and region = EU) apply one");
        assert_eq!(parse(&print_policy(&doc)), doc);
        assert!(print_policy(&doc).contains("(qtype = A and region = EU)"));
    }

    #[test]
    fn all_forms_round_trip() {
        let text = "universe \"fixtures/u0.universe\"\nmerge(weighted { {a1}: 1/4, {a1, a2}: 3, {}: 1 }, priority [a2, a1], affinity(region), fixed {}, zero, one)\n";
        let doc = parse(text);
        assert_eq!(doc.universe_ref.as_deref(), Some("fixtures/u0.universe"));
        assert_eq!(print_policy(&doc), text);
    }

    #[test]
    fn product_needs_the_flag() {
        let text = "product(one, fixed {a1})";
        assert!(matches!(
            parse_policy(text, ParseOptions::default()),
            Err(Error::Syntax { line: 1, column: 1, .. })
        ));
        let doc = parse_policy(text, ParseOptions { extended_algebra: true }).unwrap();
        assert!(matches!(doc.expr, PolicyExpr::Product(..)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_policy("merge(zero,\n  fixed {a1 a2})", ParseOptions::default()).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 2,
                    column: 13,
                    ..
                }
            ),
            "{err:?}"
        );
        assert!(parse_policy("weighted { {a1}: 0.5 }", ParseOptions::default()).is_err());
        assert!(parse_policy("weighted { {a1}: -1 }", ParseOptions::default()).is_err());
        assert!(parse_policy("zero zero", ParseOptions::default()).is_err());
    }

    #[test]
    fn unknown_names_are_semantic_errors() {
        let u = u0();
        let cases = [
            ("when zone = NA apply one", Error::UnknownAttribute("zone".into())),
            (
                "when region = SA apply one",
                Error::UnknownValue {
                    attribute: "region".into(),
                    value: "SA".into(),
                },
            ),
            ("fixed {a9}", Error::UnknownCandidate("a9".into())),
            ("affinity(zone)", Error::UnknownAttribute("zone".into())),
        ];
        for (text, expected) in cases {
            assert_eq!(resolve(&parse(text), &u).unwrap_err(), expected);
        }
    }

    #[test]
    fn terms_print_back() {
        let u = u0();
        let term = crate::fixtures::p_geo_term();
        let expr = PolicyExpr::from_term(&term, &u);
        assert_eq!(
            expr.to_string(),
            "merge(when region = NA apply fixed {a1}, when region = EU apply fixed {a2})"
        );
        assert_eq!(expr.to_term(&u).unwrap(), term);
    }
}
