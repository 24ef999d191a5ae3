//! Line lexer for the `.fkb` and `.gold` formats.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    Plus,
    Minus,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Var(v) => format!("variable `?{v}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
        }
    }
}

/// A token with its 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub col: usize,
}

#[derive(Debug, Default)]
pub(crate) struct LexedLine {
    pub tokens: Vec<Spanned>,
    /// Trimmed text of a trailing `#` comment.
    pub comment: Option<String>,
    /// Number of characters on the line.
    pub width: usize,
}

#[derive(Debug)]
pub(crate) struct LexError {
    pub col: usize,
    pub message: String,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn lex_line(line: &str) -> Result<LexedLine, LexError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = LexedLine { width: chars.len(), ..Default::default() };
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '#' => {
                let rest: String = chars[i + 1..].iter().collect();
                out.comment = Some(rest.trim().to_string());
                break;
            }
            '(' => push(&mut out, Tok::LParen, col, &mut i),
            ')' => push(&mut out, Tok::RParen, col, &mut i),
            ',' => push(&mut out, Tok::Comma, col, &mut i),
            ':' => push(&mut out, Tok::Colon, col, &mut i),
            '+' => push(&mut out, Tok::Plus, col, &mut i),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.tokens.push(Spanned { tok: Tok::Arrow, col });
                i += 2;
            }
            '-' => push(&mut out, Tok::Minus, col, &mut i),
            '?' => {
                let start = i + 1;
                let mut j = start;
                if j < chars.len() && is_ident_start(chars[j]) {
                    j += 1;
                    while j < chars.len() && is_ident_continue(chars[j]) {
                        j += 1;
                    }
                } else {
                    return Err(LexError { col, message: "expected a variable name after `?`".into() });
                }
                out.tokens.push(Spanned { tok: Tok::Var(chars[start..j].iter().collect()), col });
                i = j;
            }
            '"' => {
                let mut value = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => return Err(LexError { col, message: "unterminated string literal".into() }),
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(j + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('r') => '\r',
                                Some(_) => {
                                    return Err(LexError { col: j + 2, message: "unknown escape sequence".into() })
                                }
                                None => return Err(LexError { col, message: "unterminated string literal".into() }),
                            };
                            value.push(esc);
                            j += 2;
                        }
                        Some(&ch) => {
                            value.push(ch);
                            j += 1;
                        }
                    }
                }
                out.tokens.push(Spanned { tok: Tok::Str(value), col });
                i = j + 1;
            }
            c if is_ident_start(c) => {
                let mut j = i + 1;
                while j < chars.len() && is_ident_continue(chars[j]) {
                    j += 1;
                }
                out.tokens.push(Spanned { tok: Tok::Ident(chars[i..j].iter().collect()), col });
                i = j;
            }
            other => return Err(LexError { col, message: format!("unexpected character `{other}`") }),
        }
    }
    Ok(out)
}

fn push(out: &mut LexedLine, tok: Tok, col: usize, i: &mut usize) {
    out.tokens.push(Spanned { tok, col });
    *i += 1;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_statement_and_comment() {
        let l = lex_line(r#"Data(p, a, "x\"y") # INVENTED"#).unwrap();
        assert_eq!(l.comment.as_deref(), Some("INVENTED"));
        assert_eq!(l.tokens[6].tok, Tok::Str("x\"y".into()));
        assert_eq!(l.tokens[6].col, 12);
    }

    #[test]
    fn arrow_and_vars() {
        let l = lex_line("Rule: A(?x) -> B(?x)").unwrap();
        assert!(l.tokens.iter().any(|t| t.tok == Tok::Arrow));
        assert_eq!(l.tokens[4].tok, Tok::Var("x".into()));
    }

    #[test]
    fn bad_character_has_column() {
        let e = lex_line("Class(A$)").unwrap_err();
        assert_eq!(e.col, 8);
    }
}
