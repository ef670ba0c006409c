//! Parser for type expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! type    := operand | operand "->" operand
//! operand := word | "(" type ")"
//! word    := label+ | "I"
//! ```
//!
//! `->` carries no associativity: `A->B->C` is rejected and the caller must
//! bracket one side, mirroring the mandatory bracketing of the notation this
//! grammar concretizes. `⇒` is accepted as an input alias for `->` and is
//! normalized away by formatting.
//!
//! Without a registry, labels are single uppercase letters other than `I`.
//! With a registry, words are segmented against the registered label set
//! (longest labels preferred, with backtracking), and any unregistered
//! remainder is an error.

use crate::error::ParseError;
use crate::registry::SystemRegistry;
use crate::types::{Label, Type};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Word(String, usize),
    Arrow(usize),
    LParen(usize),
    RParen(usize),
}

impl Token {
    fn pos(&self) -> usize {
        match *self {
            Token::Word(_, p) | Token::Arrow(p) | Token::LParen(p) | Token::RParen(p) => p,
        }
    }

    fn describe(&self) -> String {
        match self {
            Token::Word(w, _) => format!("word `{w}`"),
            Token::Arrow(_) => "`->`".to_string(),
            Token::LParen(_) => "`(`".to_string(),
            Token::RParen(_) => "`)`".to_string(),
        }
    }
}

/// Positions are character offsets, so caret diagnostics line up even when
/// the source contains `⇒`.
fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                tokens.push(Token::LParen(i));
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen(i));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push(Token::Arrow(i));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        expected: "expected `->`".to_string(),
                    });
                }
            }
            '⇒' => {
                tokens.push(Token::Arrow(i));
                i += 1;
            }
            c if c.is_ascii_alphanumeric() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token::Word(chars[start..i].iter().collect(), start));
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: i,
                    expected: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(tokens)
}

/// Split one word into labels.
///
/// In default mode each character must be an uppercase letter other than `I`.
/// In registry mode the word is segmented against the registered labels,
/// trying longer labels first and backtracking on dead ends.
fn segment_word(
    word: &str,
    pos: usize,
    registry: Option<&SystemRegistry>,
) -> Result<Vec<Label>, ParseError> {
    if word == "I" {
        return Ok(Vec::new());
    }
    match registry {
        None => {
            let mut labels = Vec::new();
            for (offset, c) in word.chars().enumerate() {
                if c == 'I' {
                    return Err(ParseError::TrivialInWord { pos: pos + offset });
                }
                if !c.is_ascii_uppercase() {
                    return Err(ParseError::UnknownLabel {
                        pos: pos + offset,
                        label: c.to_string(),
                    });
                }
                labels.push(Label::new(c.to_string()).expect("uppercase letter"));
            }
            Ok(labels)
        }
        Some(reg) => {
            let mut names: Vec<&str> = reg.labels().map(|l| l.as_str()).collect();
            names.sort_by_key(|n| std::cmp::Reverse(n.len()));
            let mut best_stuck = 0;
            if let Some(labels) = segment_backtrack(word, 0, &names, &mut best_stuck) {
                Ok(labels)
            } else if word[best_stuck..].starts_with('I') {
                Err(ParseError::TrivialInWord { pos: pos + best_stuck })
            } else {
                Err(ParseError::UnknownLabel {
                    pos: pos + best_stuck,
                    label: word[best_stuck..].to_string(),
                })
            }
        }
    }
}

/// `best_stuck` tracks the deepest offset any segmentation attempt reached,
/// which is where the error is reported if all attempts fail. Words are
/// ASCII, so byte offsets equal character offsets here.
fn segment_backtrack(
    word: &str,
    at: usize,
    names: &[&str],
    best_stuck: &mut usize,
) -> Option<Vec<Label>> {
    if at == word.len() {
        return Some(Vec::new());
    }
    *best_stuck = (*best_stuck).max(at);
    for name in names {
        if word[at..].starts_with(name) {
            if let Some(mut labels) = segment_backtrack(word, at + name.len(), names, best_stuck) {
                labels.insert(0, Label::new(*name).expect("validated at registration"));
                return Some(labels);
            }
        }
    }
    None
}

struct Parser<'a> {
    tokens: Vec<Token>,
    cursor: usize,
    src_len: usize,
    registry: Option<&'a SystemRegistry>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn end_pos(&self) -> usize {
        self.src_len
    }

    /// `type := operand ("->" operand)?`, with a dedicated diagnosis for a
    /// second unbracketed arrow.
    fn parse_expr(&mut self) -> Result<Type, ParseError> {
        let first = self.parse_operand()?;
        match self.peek() {
            Some(Token::Arrow(_)) => {
                self.bump();
                let second = self.parse_operand()?;
                if let Some(Token::Arrow(pos)) = self.peek() {
                    return Err(ParseError::AmbiguousArrow { pos: *pos });
                }
                Ok(Type::arrow(first, second))
            }
            _ => Ok(first),
        }
    }

    fn parse_operand(&mut self) -> Result<Type, ParseError> {
        match self.bump() {
            Some(Token::Word(word, pos)) => {
                Ok(Type::Elementary(segment_word(&word, pos, self.registry)?))
            }
            Some(Token::LParen(open)) => {
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Token::RParen(_)) => Ok(inner),
                    Some(tok) => Err(ParseError::Syntax {
                        pos: tok.pos(),
                        expected: format!("expected `)` to close `(` at column {open}, found {}", tok.describe()),
                    }),
                    None => Err(ParseError::Syntax {
                        pos: self.end_pos(),
                        expected: format!("expected `)` to close `(` at column {open}"),
                    }),
                }
            }
            Some(tok) => Err(ParseError::Syntax {
                pos: tok.pos(),
                expected: format!("expected a word or `(`, found {}", tok.describe()),
            }),
            None => Err(ParseError::Syntax {
                pos: self.end_pos(),
                expected: "expected a word or `(`, found end of input".to_string(),
            }),
        }
    }

    fn parse_top(&mut self) -> Result<Type, ParseError> {
        let t = self.parse_expr()?;
        match self.peek() {
            None => Ok(t),
            Some(Token::Arrow(pos)) => Err(ParseError::AmbiguousArrow { pos: *pos }),
            Some(tok) => Err(ParseError::Syntax {
                pos: tok.pos(),
                expected: format!("expected end of input, found {}", tok.describe()),
            }),
        }
    }
}

fn parse_with(src: &str, registry: Option<&SystemRegistry>) -> Result<Type, ParseError> {
    let tokens = lex(src)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        src_len: src.chars().count(),
        registry,
    };
    parser.parse_top()
}

/// Parse a type expression with default single-letter labels.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    parse_with(src, None)
}

/// Parse a type expression whose words must segment into labels of `registry`.
pub fn parse_type_in(src: &str, registry: &SystemRegistry) -> Result<Type, ParseError> {
    parse_with(src, Some(registry))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_examples() {
        let t: Type = parse_type("(A->B)->(C->D)").unwrap();
        assert_eq!(t.to_string(), "(A->B)->(C->D)");
        assert_eq!(parse_type("I").unwrap(), Type::trivial());
        let w = parse_type("AABCB").unwrap();
        assert_eq!(w.to_string(), "AABCB");
        assert!(w.is_elementary());
    }

    #[test]
    fn whitespace_and_alias_arrow() {
        assert_eq!(parse_type(" ( A -> B ) -> C ").unwrap().to_string(), "(A->B)->C");
        assert_eq!(parse_type("A⇒B").unwrap().to_string(), "A->B");
        assert_eq!(parse_type("A ⇒ (B ⇒ C)").unwrap().to_string(), "A->(B->C)");
    }

    #[test]
    fn minimal_parenthesization_round_trips() {
        for src in ["AB->(C->D)", "(A->B)->(C->D)", "I->I", "A", "I", "(AB->C)->(DEF->(GH->K))"] {
            let t = parse_type(src).unwrap();
            assert_eq!(t.to_string(), src);
            assert_eq!(parse_type(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn unbracketed_arrow_chain_is_ambiguous() {
        let err = parse_type("A->B->C").unwrap_err();
        assert!(matches!(err, ParseError::AmbiguousArrow { pos: 4 }));
        let err = parse_type("A->(B)->C").unwrap_err();
        assert!(matches!(err, ParseError::AmbiguousArrow { .. }));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_type("(A->B").unwrap_err();
        assert_eq!(err.position(), 5);
        let err = parse_type("A->").unwrap_err();
        assert_eq!(err.position(), 3);
        let err = parse_type("->A").unwrap_err();
        assert_eq!(err.position(), 0);
        let err = parse_type("A B C D-").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn trivial_type_cannot_sit_inside_a_word() {
        assert!(matches!(parse_type("AIB"), Err(ParseError::TrivialInWord { pos: 1 })));
        assert!(matches!(parse_type("IA"), Err(ParseError::TrivialInWord { pos: 0 })));
    }

    #[test]
    fn lowercase_rejected_without_registry() {
        assert!(matches!(parse_type("Ab"), Err(ParseError::UnknownLabel { pos: 1, .. })));
    }

    #[test]
    fn registry_mode_segments_multicharacter_labels() {
        let reg = SystemRegistry::from_pairs([("Alice", 2), ("Bob", 3), ("A", 2)]).unwrap();
        let t = parse_type_in("AliceBob->A", &reg).unwrap();
        assert_eq!(t.to_string(), "AliceBob->A");
        match t {
            Type::Arrow(a, _) => match *a {
                Type::Elementary(ref labels) => {
                    assert_eq!(labels.len(), 2);
                    assert_eq!(labels[0].as_str(), "Alice");
                }
                _ => panic!("expected word"),
            },
            _ => panic!("expected arrow"),
        }
    }

    #[test]
    fn registry_mode_backtracks_when_greedy_fails() {
        // greedy longest-first would take "AB" and strand the second "B"
        let reg = SystemRegistry::from_pairs([("AB", 2), ("A", 2), ("BB", 2)]).unwrap();
        let t = parse_type_in("ABB", &reg).unwrap();
        let labels = match t {
            Type::Elementary(l) => l,
            _ => panic!(),
        };
        assert_eq!(labels.iter().map(|l| l.as_str()).collect::<Vec<_>>(), ["A", "BB"]);
    }

    #[test]
    fn registry_mode_reports_unknown_labels() {
        let reg = SystemRegistry::from_pairs([("A", 2)]).unwrap();
        assert!(matches!(
            parse_type_in("AX", &reg),
            Err(ParseError::UnknownLabel { pos: 1, .. })
        ));
    }

    #[test]
    fn caret_diagnostic_points_at_error() {
        let err = parse_type("A->B->C").unwrap_err();
        let diag = err.caret_diagnostic("A->B->C");
        let lines: Vec<&str> = diag.lines().collect();
        assert_eq!(lines[1], "    A->B->C");
        assert_eq!(lines[2], "        ^");
    }
}
