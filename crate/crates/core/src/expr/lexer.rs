use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the first character.
    pub position: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            i = scan_number(bytes, i);
            TokenKind::Number
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            TokenKind::Identifier
        } else {
            i += 1;
            match c {
                b'(' => TokenKind::LParen,
                b')' => TokenKind::RParen,
                b',' => TokenKind::Comma,
                b'+' | b'-' | b'*' | b'/' | b'^' => TokenKind::Operator,
                b'<' | b'>' => {
                    if bytes.get(i) == Some(&b'=') {
                        i += 1;
                    }
                    TokenKind::Operator
                }
                b'=' if bytes.get(i) == Some(&b'=') => {
                    i += 1;
                    TokenKind::Operator
                }
                _ => {
                    let found = src[start..].chars().next().map(String::from).unwrap_or_default();
                    return Err(ParseError {
                        position: start,
                        expected: "token".into(),
                        found: format!("'{found}'"),
                    });
                }
            }
        };
        tokens.push(Token {
            kind,
            text: src[start..i].to_string(),
            position: start,
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(&mut i);
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        digits(&mut i);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = j;
            digits(&mut i);
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_increase() {
        let toks = tokenize("if(x1 >= 2.5e-3, x2, 1)").unwrap();
        assert!(toks.windows(2).all(|w| w[0].position < w[1].position));
        assert_eq!(toks[3].text, ">=");
        assert_eq!(toks[4].text, "2.5e-3");
    }

    #[test]
    fn exponent_needs_digits() {
        let toks = tokenize("2e").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[1].kind, TokenKind::Identifier);
    }

    #[test]
    fn rejects_stray_characters() {
        let err = tokenize("x1 $ 2").unwrap_err();
        assert_eq!(err.position, 3);
    }
}
