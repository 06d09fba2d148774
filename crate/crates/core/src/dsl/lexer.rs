use std::fmt;

use super::ast::Span;
use super::Diagnostic;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    Plus,
    Star,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Str(_) => f.write_str("string literal"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Splits `src` into tokens, ending with [`TokenKind::Eof`].
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b'[' => Some(TokenKind::LBracket),
            b']' => Some(TokenKind::RBracket),
            b',' => Some(TokenKind::Comma),
            b';' => Some(TokenKind::Semi),
            b'=' => Some(TokenKind::Eq),
            b'+' => Some(TokenKind::Plus),
            b'*' => Some(TokenKind::Star),
            _ => None,
        };
        if let Some(kind) = single {
            i += 1;
            out.push(Token {
                kind,
                span: Span::new(start, i),
            });
            continue;
        }
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let span = Span::new(start, i);
                let n = src[start..i]
                    .parse::<u64>()
                    .map_err(|_| Diagnostic::new(src, span, "integer literal is too large"))?;
                out.push(Token {
                    kind: TokenKind::Int(n),
                    span,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    span: Span::new(start, i),
                });
            }
            b'"' => {
                i += 1;
                let mut text = String::new();
                loop {
                    let Some(ch) = src[i..].chars().next() else {
                        return Err(Diagnostic::new(src, Span::new(start, i), "unterminated string literal"));
                    };
                    match ch {
                        '"' => {
                            i += 1;
                            break;
                        }
                        '\\' => {
                            let esc = src[i + 1..].chars().next();
                            let decoded = match esc {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                _ => {
                                    let end = i + 1 + esc.map_or(0, char::len_utf8);
                                    return Err(Diagnostic::new(src, Span::new(i, end), "unknown escape sequence"));
                                }
                            };
                            text.push(decoded);
                            i += 2;
                        }
                        _ => {
                            text.push(ch);
                            i += ch.len_utf8();
                        }
                    }
                }
                out.push(Token {
                    kind: TokenKind::Str(text),
                    span: Span::new(start, i),
                });
            }
            _ => {
                let ch = src[i..].chars().next().expect("inside the input");
                let span = Span::new(i, i + ch.len_utf8());
                return Err(Diagnostic::new(src, span, format!("unexpected character {ch:?}")));
            }
        }
    }
    out.push(Token {
        kind: TokenKind::Eof,
        span: Span::new(bytes.len(), bytes.len()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn tokens_and_comments() {
        assert_eq!(
            kinds("let X = B(cyclic(4)); // note\ncard(X);"),
            vec![
                TokenKind::Ident("let".into()),
                TokenKind::Ident("X".into()),
                TokenKind::Eq,
                TokenKind::Ident("B".into()),
                TokenKind::LParen,
                TokenKind::Ident("cyclic".into()),
                TokenKind::LParen,
                TokenKind::Int(4),
                TokenKind::RParen,
                TokenKind::RParen,
                TokenKind::Semi,
                TokenKind::Ident("card".into()),
                TokenKind::LParen,
                TokenKind::Ident("X".into()),
                TokenKind::RParen,
                TokenKind::Semi,
                TokenKind::Eof,
            ]
        );
        assert_eq!(kinds(r#""a\"b""#)[0], TokenKind::Str("a\"b".into()));
    }

    #[test]
    fn lexical_errors_have_positions() {
        let e = tokenize("card(#)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = tokenize("\n  \"open").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(tokenize("99999999999999999999999").is_err());
        assert!(tokenize("\"é\\q\"").is_err());
    }
}
