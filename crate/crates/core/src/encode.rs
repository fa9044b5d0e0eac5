//! Every type is a retract of the program type: `encode` sends a value to a program
//! (a quoted code), `decode` runs the code and checks the result is of the right type.
//!
//! Codes of data are constant programs. Programs themselves are coded through a
//! numeric Gödel numbering of their canonical text, so `decode(prog, _)` has to parse a
//! number back into a program and is genuinely partial.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

use crate::category::{reason, Outcome};
use crate::eval::universal_eval;
use crate::prog::Prog;
use crate::registry::Registry;
use crate::syntax::parse_prog;
use crate::turing;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tag {
    Nat,
    Bool,
    Pair(Box<Tag>, Box<Tag>),
    Prog,
    Tape,
    TmState,
}

impl Tag {
    pub fn pair(a: Tag, b: Tag) -> Self {
        Tag::Pair(Box::new(a), Box::new(b))
    }

    /// Whether `v` is an element of the type named by this tag.
    pub fn admits(&self, v: &Value) -> bool {
        match self {
            Tag::Nat => v.as_nat().is_some(),
            Tag::Bool => v.as_bool().is_some(),
            Tag::Prog => v.as_quote().is_some(),
            Tag::Tape => turing::tape_from_value(v).is_some(),
            Tag::TmState => turing::machine_state_from_value(v).is_some(),
            Tag::Pair(a, b) => v.as_pair().is_some_and(|(x, y)| a.admits(x) && b.admits(y)),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Nat => f.write_str("nat"),
            Tag::Bool => f.write_str("bool"),
            Tag::Prog => f.write_str("prog"),
            Tag::Tape => f.write_str("tape"),
            Tag::TmState => f.write_str("tm-state"),
            Tag::Pair(a, b) => write!(f, "pair({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("value {value} is not of type {tag}")]
    NotOfTag { tag: String, value: String },
    #[error("unknown type tag '{0}'")]
    UnknownTag(String),
}

impl FromStr for Tag {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "nat" => return Ok(Tag::Nat),
            "bool" => return Ok(Tag::Bool),
            "prog" => return Ok(Tag::Prog),
            "tape" => return Ok(Tag::Tape),
            "tm-state" => return Ok(Tag::TmState),
            _ => {}
        }
        let inner = s
            .strip_prefix("pair(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| EncodeError::UnknownTag(s.to_string()))?;
        // split at the top-level comma
        let mut depth = 0usize;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    return Ok(Tag::pair(inner[..i].parse()?, inner[i + 1..].parse()?));
                }
                _ => {}
            }
        }
        Err(EncodeError::UnknownTag(s.to_string()))
    }
}

/// Gödel number of a program: its canonical text read as a base-256 numeral.
pub fn godel_number(p: &Prog) -> BigUint {
    BigUint::from_bytes_be(p.to_string().as_bytes())
}

/// Inverse of [`godel_number`] on its image.
pub fn program_of_godel_number(n: &BigUint) -> Option<Prog> {
    let bytes = n.to_bytes_be();
    let text = std::str::from_utf8(&bytes).ok()?;
    let p = parse_prog(text).ok()?;
    (p.to_string() == text).then_some(p)
}

fn code_program(tag: &Tag, v: &Value) -> Result<Prog, EncodeError> {
    let not_of_tag = || EncodeError::NotOfTag {
        tag: tag.to_string(),
        value: v.to_string(),
    };
    match tag {
        Tag::Prog => {
            let p = v.as_quote().ok_or_else(not_of_tag)?;
            Ok(Prog::lit(Value::Nat(godel_number(p))))
        }
        Tag::Pair(a, b) => {
            let (x, y) = v.as_pair().ok_or_else(not_of_tag)?;
            Ok(Prog::pairing(code_program(a, x)?, code_program(b, y)?))
        }
        _ if tag.admits(v) => Ok(Prog::lit(v.clone())),
        _ => Err(not_of_tag()),
    }
}

/// `e^B`: a total, injective map from the type into quoted codes.
pub fn encode(tag: &Tag, v: &Value) -> Result<Value, EncodeError> {
    Ok(Value::quote(code_program(tag, v)?))
}

fn interpret(tag: &Tag, payload: &Value) -> Option<Value> {
    match tag {
        Tag::Prog => Some(Value::quote(program_of_godel_number(payload.as_nat()?)?)),
        Tag::Pair(a, b) => {
            let (x, y) = payload.as_pair()?;
            Some(Value::pair(interpret(a, x)?, interpret(b, y)?))
        }
        _ => tag.admits(payload).then(|| payload.clone()),
    }
}

fn decode_registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(Registry::standard)
}

/// `d^B`: runs the code on `()` and reads the result back as an element of the type.
/// Codes outside the image of `encode` are rejected as `Stuck("bad-code")`.
pub fn decode(tag: &Tag, code: &Value, fuel: u64) -> Outcome {
    let Some(p) = code.as_quote() else {
        return Outcome::Stuck(reason::BAD_CODE.into());
    };
    match universal_eval(decode_registry(), p, Value::Unit, fuel) {
        // only codes produced by `encode` are accepted
        Outcome::Done(payload) => match interpret(tag, &payload) {
            Some(v) if encode(tag, &v).as_ref() == Ok(code) => Outcome::Done(v),
            _ => Outcome::Stuck(reason::BAD_CODE.into()),
        },
        Outcome::Diverged(n) => Outcome::Diverged(n),
        Outcome::Stuck(_) => Outcome::Stuck(reason::BAD_CODE.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_round_trip_and_rejection() {
        let code = encode(&Tag::Nat, &Value::nat(42u64)).unwrap();
        assert_eq!(
            decode(&Tag::Nat, &code, 100),
            Outcome::Done(Value::nat(42u64))
        );
        assert_eq!(
            decode(&Tag::Bool, &code, 100),
            Outcome::Stuck("bad-code".into())
        );
    }

    #[test]
    fn programs_go_through_godel_numbers() {
        let v = Value::quote(Prog::prim("succ"));
        let code = encode(&Tag::Prog, &v).unwrap();
        let Some(Prog::Lit(Value::Nat(g))) = code.as_quote() else {
            panic!("program codes are numerals");
        };
        assert_eq!(g, &godel_number(&Prog::prim("succ")));
        assert_eq!(decode(&Tag::Prog, &code, 100), Outcome::Done(v));
    }

    #[test]
    fn non_canonical_numbers_are_rejected() {
        // text "(seq  fst id)" parses but does not reprint identically
        let n = BigUint::from_bytes_be(b"(seq  fst id)");
        assert!(program_of_godel_number(&n).is_none());
        assert!(program_of_godel_number(&BigUint::from(0u32)).is_none());
        let code = Value::quote(Prog::lit(Value::Nat(n)));
        assert!(decode(&Tag::Prog, &code, 100).is_stuck());
    }

    #[test]
    fn pair_tags_compose() {
        let tag = Tag::pair(Tag::Prog, Tag::Nat);
        let v = Value::pair(Value::quote(Prog::Fst), Value::nat(3u64));
        let code = encode(&tag, &v).unwrap();
        assert_eq!(decode(&tag, &code, 100), Outcome::Done(v));
        assert!(encode(&tag, &Value::nat(3u64)).is_err());
    }

    #[test]
    fn codes_outside_the_image_are_rejected() {
        // evaluates to a pair of the right type, but is not how pairs are encoded
        let tag = Tag::pair(Tag::Nat, Tag::Nat);
        let code = Value::quote(Prog::lit(Value::pair(Value::nat(1u64), Value::nat(2u64))));
        assert!(decode(&tag, &code, 100).is_stuck());
    }

    #[test]
    fn decode_is_partial() {
        assert!(decode(&Tag::Nat, &Value::nat(1u64), 100).is_stuck());
        let code = encode(&Tag::Nat, &Value::nat(1u64)).unwrap();
        assert_eq!(decode(&Tag::Nat, &code, 0), Outcome::Diverged(0));
    }

    #[test]
    fn tags_parse() {
        assert_eq!(
            "pair(nat,pair(bool,prog))"
                .parse::<Tag>()
                .unwrap()
                .to_string(),
            "pair(nat,pair(bool,prog))"
        );
        assert!("pair(nat)".parse::<Tag>().is_err());
        assert!("real".parse::<Tag>().is_err());
    }
}
