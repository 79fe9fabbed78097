//! Pretty-printer producing text that [`super::parse_formula`] reads back to
//! the same tree.

use std::fmt;

use super::Formula;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..)
        | Formula::Forall(..)
        | Formula::ModExists { .. }
        | Formula::Majority(..)
        | Formula::Lindstrom { .. } => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        // `!` in front of a quantifier reaches as far right as the quantifier
        Formula::Not(g)
            if prec(g) == 0 => {
                0
            }
        _ => 5,
    }
}

fn child(f: &mut fmt::Formatter<'_>, g: &Formula, min: u8) -> fmt::Result {
    if prec(g) < min {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

fn join(f: &mut fmt::Formatter<'_>, parts: &[Formula], op: &str, min: u8) -> fmt::Result {
    for (i, g) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        child(f, g, min)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Letter { symbol, var } => write!(f, "Q{symbol}({var})"),
            Formula::Num { name, params, args } => {
                f.write_str(name)?;
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(u64::to_string).collect();
                    write!(f, "[{}]", ps.join(","))?;
                }
                write!(f, "({})", args.join(", "))
            }
            Formula::Less(a, b) => write!(f, "{a} < {b}"),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                if prec(g) == 0 {
                    write!(f, "{g}")
                } else {
                    child(f, g, 5)
                }
            }
            Formula::And(gs) if gs.is_empty() => f.write_str("true"),
            Formula::Or(gs) if gs.is_empty() => f.write_str("false"),
            Formula::And(gs) => join(f, gs, "&", 5),
            Formula::Or(gs) => join(f, gs, "|", 4),
            Formula::Implies(a, b) => {
                child(f, a, 3)?;
                f.write_str(" -> ")?;
                child(f, b, 2)
            }
            Formula::Iff(a, b) => {
                child(f, a, 1)?;
                f.write_str(" <-> ")?;
                child(f, b, 2)
            }
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
            Formula::Majority(v, g) => write!(f, "maj {v}. {g}"),
            Formula::ModExists { q, r, var, body } => write!(f, "existsmod[{q},{r}] {var}. {body}"),
            Formula::Lindstrom { language, var, bodies } => {
                write!(f, "lind[{language}] {var}. [")?;
                for (i, g) in bodies.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::logic::{parse_formula, Registry};

    #[test]
    fn canonical_text() {
        let r = Registry::standard();
        for text in [
            "!exists i. even(i) & Qb(i)",
            "(exists x. Qa(x)) & (forall y. y = y)",
            "(a < b -> c = d) -> true",
            "a = b <-> (true <-> false)",
            "(true | false) & !(x < y | x = y)",
            "existsmod[3,1] x. maj y. x < y",
            "(!exists x. true) | true",
            "modq[2,1](x) | bit(x, y)",
            "!!true",
            "Qx1+x2(z) & Q.(z)",
        ] {
            let f = parse_formula(text, &r).unwrap();
            assert_eq!(f.to_string(), text);
        }
    }
}
