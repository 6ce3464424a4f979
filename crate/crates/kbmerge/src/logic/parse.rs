//! Recursive-descent parser for the formula language.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! iff     := implies ("<->" iff)?
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" iff ")" | "true" | "false" | ident
//! ident   := [A-Za-z_][A-Za-z0-9_]*'*
//! ```
//!
//! `->` and `<->` associate to the right; `&` and `|` chains parse to
//! flat n-ary nodes.

use super::{Formula, LogicError, Variable};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, col: usize, msg: impl Into<String>) -> LogicError {
        LogicError::Syntax { line, col, msg: msg.into() }
    }

    /// Returns the next token together with its starting position.
    fn next_token(&mut self) -> Result<(Token, usize, usize), LogicError> {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let c = match self.bump() {
            None => return Ok((Token::Eof, line, col)),
            Some(c) => c,
        };
        let tok = match c {
            '(' => Token::LParen,
            ')' => Token::RParen,
            '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '-' => match self.bump() {
                Some('>') => Token::Implies,
                _ => return Err(self.error(line, col, "expected `->`")),
            },
            '<' => match (self.bump(), self.bump()) {
                (Some('-'), Some('>')) => Token::Iff,
                _ => return Err(self.error(line, col, "expected `<->`")),
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                name.push(c);
                while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_')
                {
                    name.push(self.bump().unwrap());
                }
                while matches!(self.chars.peek(), Some('\'')) {
                    name.push(self.bump().unwrap());
                }
                match name.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Ident(name),
                }
            }
            other => return Err(self.error(line, col, format!("unexpected character `{other}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn bump(&mut self) -> (Token, usize, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> LogicError {
        let (tok, line, col) = &self.tokens[self.pos];
        LogicError::Syntax {
            line: *line,
            col: *col,
            msg: format!("expected {expected}, found {}", tok.describe()),
        }
    }

    fn iff(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.implies()?;
        if *self.peek() == Token::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut children = vec![self.and()?];
        while *self.peek() == Token::Or {
            self.bump();
            children.push(self.and()?);
        }
        if children.len() == 1 {
            Ok(children.pop().unwrap())
        } else {
            Ok(Formula::Or(children))
        }
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut children = vec![self.unary()?];
        while *self.peek() == Token::And {
            self.bump();
            children.push(self.unary()?);
        }
        if children.len() == 1 {
            Ok(children.pop().unwrap())
        } else {
            Ok(Formula::And(children))
        }
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Token::Not => {
                self.bump();
                Ok(Formula::negate(self.unary()?))
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            Token::True => {
                self.bump();
                Ok(Formula::TRUE)
            }
            Token::False => {
                self.bump();
                Ok(Formula::FALSE)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(Formula::Var(Variable::new(name)?))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula; round-trips with the printer up to whitespace.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let done = t.0 == Token::Eof;
        tokens.push(t);
        if done {
            break;
        }
    }
    if tokens.len() == 1 {
        return Err(LogicError::EmptyInput);
    }
    let mut parser = Parser { tokens, pos: 0 };
    let f = parser.iff()?;
    if *parser.peek() != Token::Eof {
        return Err(parser.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_implication() {
        let f = parse_formula("x1 -> y").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::Var(Variable::new("x1").unwrap()),
                Formula::Var(Variable::new("y").unwrap())
            )
        );
    }

    #[test]
    fn parses_negated_group_with_constant() {
        let f = parse_formula("!(a & b) | true").unwrap();
        match f {
            Formula::Or(cs) => {
                assert_eq!(cs.len(), 2);
                assert!(matches!(&cs[0], Formula::Not(inner) if matches!(**inner, Formula::And(_))));
                assert_eq!(cs[1], Formula::TRUE);
            }
            other => panic!("expected Or, got {other:?}"),
        }
    }

    #[test]
    fn primes_are_legal_identifier_suffixes() {
        let f = parse_formula("a <-> a'").unwrap();
        assert_eq!(
            f,
            Formula::iff(
                Formula::Var(Variable::new("a").unwrap()),
                Formula::Var(Variable::new("a'").unwrap())
            )
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("a -> b -> c").unwrap();
        let g = parse_formula("a -> (b -> c)").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn and_or_chains_flatten() {
        let f = parse_formula("a & b & c").unwrap();
        assert!(matches!(f, Formula::And(ref cs) if cs.len() == 3));
        let f = parse_formula("a | b | c").unwrap();
        assert!(matches!(f, Formula::Or(ref cs) if cs.len() == 3));
    }

    #[test]
    fn precedence_orders_connectives() {
        let f = parse_formula("!a & b | c -> d <-> e").unwrap();
        let g = parse_formula("((((!a) & b) | c) -> d) <-> e").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn reports_position_of_errors() {
        match parse_formula("a &\n& b") {
            Err(LogicError::Syntax { line, col, .. }) => {
                assert_eq!((line, col), (2, 1));
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_formula(""), Err(LogicError::EmptyInput)));
        assert!(matches!(parse_formula("   \n "), Err(LogicError::EmptyInput)));
        assert!(matches!(parse_formula("a b"), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse_formula("(a"), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse_formula("a @ b"), Err(LogicError::Syntax { .. })));
    }
}
