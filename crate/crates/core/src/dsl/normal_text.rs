//! Normal forms as text: one `when <predicate> serve <outcome>` clause per line,
//! where the outcome is `empty` or `{ {a1}: 1/4, {a2}: 3/4 }`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{tokenize, Cursor, Token};
use super::policy::{answer_set, ParseOptions, Parser, PredExpr};
use crate::algebra::ObservableRow;
use crate::error::{Error, Result};
use crate::normalform::NormalForm;
use crate::universe::Universe;

pub fn print_normal_form(nf: &NormalForm) -> String {
    let u = nf.universe();
    nf.regions()
        .iter()
        .map(|r| {
            format!(
                "when {} serve {}\n",
                PredExpr::from_predicate(r.predicate(), u),
                r.outcome().format(u)
            )
        })
        .collect()
}

pub fn parse_normal_form(text: &str, universe: &Arc<Universe>) -> Result<NormalForm> {
    let mut p = Parser::new(Cursor::new(tokenize(text, true)?), ParseOptions::default());
    let mut clauses = Vec::new();
    loop {
        p.cur.skip_newlines();
        if p.cur.peek() == &Token::Eof {
            break;
        }
        p.cur.expect_keyword("when")?;
        let pred = p.predicate()?;
        p.cur.expect_keyword("serve")?;
        let outcome = outcome(&mut p, universe)?;
        if !matches!(p.cur.peek(), Token::Newline | Token::Eof) {
            return p.cur.error(format!("unexpected {} after the clause", p.cur.peek()));
        }
        let predicate = pred.resolve(universe)?;
        clauses.push((predicate, outcome));
    }
    NormalForm::from_clauses(universe.clone(), clauses)
}

fn outcome(p: &mut Parser, u: &Universe) -> Result<ObservableRow> {
    if p.cur.eat_keyword("empty") {
        return Ok(ObservableRow::Empty);
    }
    p.cur.expect(&Token::LBrace)?;
    let mut dist = BTreeMap::new();
    loop {
        let here = p.cur.here().clone();
        let set = answer_set(u, &p.answer_set_names()?)?;
        p.cur.expect(&Token::Colon)?;
        let w = p.cur.rational()?;
        if dist.insert(set, w).is_some() {
            return Err(Error::Syntax {
                line: here.line,
                column: here.column,
                message: format!("answer set {} listed twice", u.format_answer_set(set)),
            });
        }
        if p.cur.eat(&Token::RBrace) {
            break;
        }
        p.cur.expect(&Token::Comma)?;
    }
    Ok(ObservableRow::Distribution(dist))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fixtures::{p_geo, p_w, u0};
    use crate::generate::{random_behavior, random_universe};
    use crate::normalform::normalize;

    #[test]
    fn p_geo_text() {
        let u = u0();
        let text = print_normal_form(&normalize(&p_geo(&u)));
        assert_eq!(
            text,
            "when region = NA serve { {a1}: 1 }\nwhen region = EU serve { {a2}: 1 }\n"
        );
        assert_eq!(parse_normal_form(&text, &u).unwrap(), normalize(&p_geo(&u)));
    }

    #[test]
    fn p_w_text() {
        let u = u0();
        let text = print_normal_form(&normalize(&p_w(&u)));
        assert_eq!(text, "when true serve { {a1}: 1/4, {a2}: 3/4 }\n");
    }

    #[test]
    fn generated_forms_round_trip_bit_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let u = random_universe(&mut rng, 24, 3);
            let nf = normalize(&random_behavior(&mut rng, &u));
            let text = print_normal_form(&nf);
            let back = parse_normal_form(&text, &u).unwrap();
            assert_eq!(back, nf);
            assert_eq!(print_normal_form(&back), text);
        }
    }

    #[test]
    fn rejects_non_partitions_and_bad_outcomes() {
        let u = u0();
        assert!(parse_normal_form("when region = NA serve empty\n", &u).is_err());
        assert!(parse_normal_form("when true serve { {a1}: 1/2 }\n", &u).is_err());
        assert!(parse_normal_form("when true serve { {a1}: 1/2, {a1}: 1/2 }\n", &u).is_err());
        assert!(parse_normal_form("when true serve empty when true serve empty\n", &u).is_err());
        assert!(parse_normal_form("when true serve empty\n", &u).is_ok());
        assert!(parse_normal_form("# comment\n\nwhen true serve { {}: 1 }\n", &u).is_ok());
    }
}
