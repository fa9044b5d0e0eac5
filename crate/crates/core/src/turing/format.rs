//! Line-oriented machine files.
//!
//! ```text
//! # unary successor
//! alphabet: 1 _
//! start: q0
//! rule: q0 1 -> q0 1 R
//! rule: q0 _ -> HALT 1 S
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Move, Rule, TuringProcess};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

fn symbol(line: usize, tok: &str) -> Result<char, FormatError> {
    let mut it = tok.chars();
    match (it.next(), it.next()) {
        (Some(c), None) if super::valid_symbol(c) => Ok(c),
        _ => err(line, format!("'{tok}' is not a single tape symbol")),
    }
}

fn parse_rule(line: usize, body: &str) -> Result<Rule, FormatError> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    let [from, read, "->", to, write, dir] = toks[..] else {
        return err(
            line,
            "expected 'rule: <state> <symbol> -> <state> <symbol> L|S|R'",
        );
    };
    let dir = Move::from_letter(dir).map_or_else(
        || err(line, format!("direction '{dir}' is not L, S or R")),
        Ok,
    )?;
    Ok(Rule::new(
        from,
        symbol(line, read)?,
        to,
        symbol(line, write)?,
        dir,
    ))
}

pub fn parse_machine(text: &str) -> Result<TuringProcess, FormatError> {
    let mut alphabet: Option<(usize, Vec<char>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut rules: Vec<(usize, Rule)> = Vec::new();
    let mut seen: BTreeMap<(String, char), usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, body)) = content.split_once(':') else {
            return err(
                line,
                format!("expected 'alphabet:', 'start:' or 'rule:', got '{content}'"),
            );
        };
        match key.trim() {
            "alphabet" => {
                if alphabet.is_some() {
                    return err(line, "alphabet declared twice");
                }
                let syms = body
                    .split_whitespace()
                    .map(|t| symbol(line, t))
                    .collect::<Result<_, _>>()?;
                alphabet = Some((line, syms));
            }
            "start" => {
                if start.is_some() {
                    return err(line, "start state declared twice");
                }
                let toks: Vec<&str> = body.split_whitespace().collect();
                let [q] = toks[..] else {
                    return err(line, "expected 'start: <state>'");
                };
                start = Some((line, q.to_string()));
            }
            "rule" => {
                let r = parse_rule(line, body)?;
                if let Some(prev) = seen.insert((r.from.clone(), r.read), line) {
                    return err(
                        line,
                        format!(
                            "duplicate rule for '{}' reading '{}' (first at line {prev})",
                            r.from, r.read
                        ),
                    );
                }
                rules.push((line, r));
            }
            other => return err(line, format!("unknown declaration '{other}'")),
        }
    }
    let Some((alpha_line, alphabet)) = alphabet else {
        return err(
            text.lines().count().max(1),
            "missing 'alphabet:' declaration",
        );
    };
    let Some((start_line, start)) = start else {
        return err(text.lines().count().max(1), "missing 'start:' declaration");
    };
    for (line, r) in &rules {
        for c in [r.read, r.write] {
            if c != super::BLANK && !alphabet.contains(&c) {
                return err(
                    *line,
                    format!("symbol '{c}' is not in the alphabet (line {alpha_line})"),
                );
            }
        }
    }
    let plain: Vec<Rule> = rules.iter().map(|(_, r)| r.clone()).collect();
    TuringProcess::new(&start, &alphabet, &plain).or_else(|e| {
        // point at the first line that mentions the offending state
        let line = match &e {
            super::MachineError::MissingRule { state, .. } => rules
                .iter()
                .find(|(_, r)| &r.from == state || &r.to == state)
                .map_or(start_line, |(l, _)| *l),
            super::MachineError::RuleFromHalt => rules
                .iter()
                .find(|(_, r)| r.from == super::HALT)
                .map_or(start_line, |(l, _)| *l),
            super::MachineError::BadStateName(name) => rules
                .iter()
                .find(|(_, r)| &r.from == name || &r.to == name)
                .map_or(start_line, |(l, _)| *l),
            _ => start_line,
        };
        err(line, e.to_string())
    })
}

/// Canonical text; [`parse_machine`] reads it back to an equal machine.
pub fn print_machine(tm: &TuringProcess) -> String {
    let mut out = String::new();
    let syms: Vec<String> = tm.alphabet().iter().map(|c| c.to_string()).collect();
    writeln!(out, "alphabet: {}", syms.join(" ")).unwrap();
    writeln!(out, "start: {}", tm.start()).unwrap();
    for r in tm.rules() {
        writeln!(
            out,
            "rule: {} {} -> {} {} {}",
            r.from, r.read, r.to, r.write, r.dir
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::library::*;
    use super::*;

    #[test]
    fn parses_the_append_machine() {
        let text = "# append a 1\nalphabet: 1 _\nstart: q0\nrule: q0 1 -> q0 1 R  # walk\nrule: q0 _ -> HALT 1 S\n";
        assert_eq!(parse_machine(text).unwrap(), append_one());
    }

    #[test]
    fn printer_round_trips() {
        for tm in [append_one(), halt_immediately(), spin(), unary_add()] {
            assert_eq!(parse_machine(&print_machine(&tm)).unwrap(), tm);
        }
    }

    #[test]
    fn diagnostics_name_the_line() {
        let e = parse_machine("alphabet: 1\nstart: q0\nrule: q0 1 -> q0 1 X\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_machine("alphabet: 1\nstart: q0\nrule: q0 1 -> q0 1 R\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("no rule"), "{e}");
        let e =
            parse_machine("alphabet: 1\nstart: q0\nrule: q0 1 -> q0 1 R\nrule: q0 1 -> q0 1 R\n")
                .unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_machine("alphabet: 1\nstart: q0\nrule: q0 7 -> q0 1 R\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_machine("start: q0\n").unwrap_err();
        assert!(e.message.contains("alphabet"));
        assert!(parse_machine("alphabet: 10\nstart: q\n").is_err());
    }
}
