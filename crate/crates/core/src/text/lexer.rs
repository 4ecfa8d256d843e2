use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMS: &[&str] =
    &["<=", ">=", "!=", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "+", "-", "*", "/", "^", "<", ">"];

/// Splits source text into tokens; `#` starts a line comment.
pub fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let pos = |tok| Token { tok, line: li + 1, col };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = chars[s..i].iter().collect();
                out.push(pos(Tok::Int(txt.parse().unwrap())));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let s = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                out.push(pos(Tok::Ident(chars[s..i].iter().collect())));
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(pos(Tok::Sym(s)));
                    i += s.len();
                }
                None => return Err(Error::Parse { line: li + 1, col, msg: format!("unexpected character {c:?}") }),
            }
        }
    }
    let line = src.lines().count() + 1;
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}
