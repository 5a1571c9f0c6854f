//! Parser for the textual form produced by `Display for GwElement`.
//!
//! ```text
//! element := "0" | ["-"] term (("+" | "-") term)*
//! term    := [count] ("ℍ" | "H" | class)
//! class   := ("⟨" | "<") ["-"] factor (("·" | "*") factor)* ("⟩" | ">")
//! factor  := integer ["/" integer] | identifier
//! ```
//! `−` (U+2212) is accepted wherever `-` is.

use super::{GwElement, GwError, SquareClass};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GwError> {
        Err(GwError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, options: &[char]) -> bool {
        self.skip_ws();
        match self.peek() {
            Some(c) if options.contains(&c) => {
                self.bump();
                true
            }
            _ => false,
        }
    }

    fn integer(&mut self) -> Result<Option<i64>, GwError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Ok(None);
        }
        match self.src[start..self.pos].parse::<i64>() {
            Ok(v) => Ok(Some(v)),
            Err(_) => Err(GwError::Parse { pos: start, msg: "integer out of range".into() }),
        }
    }

    fn identifier(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                self.bump();
            }
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Some(&self.src[start..self.pos])
    }
}

const MINUS: [char; 2] = ['-', '−'];

pub(super) fn parse_element(src: &str) -> Result<GwElement, GwError> {
    let mut cur = Cursor { src, pos: 0 };
    cur.skip_ws();
    if cur.src[cur.pos..].trim() == "0" {
        return Ok(GwElement::zero());
    }
    let mut out = GwElement::zero();
    let mut negative = cur.eat(&MINUS);
    loop {
        let (class, count) = term(&mut cur)?;
        let m = if negative { -count } else { count };
        match class {
            None => out.hyperbolics = out.hyperbolics.checked_add(m).ok_or(overflow(&cur))?,
            Some(c) => out.try_add_class(c, m).map_err(|_| overflow(&cur))?,
        }
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(out);
        }
        if cur.eat(&['+']) {
            negative = false;
        } else if cur.eat(&MINUS) {
            negative = true;
        } else {
            return cur.err("expected `+` or `-`");
        }
    }
}

fn overflow(cur: &Cursor<'_>) -> GwError {
    GwError::Parse { pos: cur.pos, msg: "multiplicity out of range".into() }
}

/// Returns `(None, n)` for `nℍ` and `(Some(c), n)` for `n⟨c⟩`.
fn term(cur: &mut Cursor<'_>) -> Result<(Option<SquareClass>, i64), GwError> {
    let count = cur.integer()?.unwrap_or(1);
    if cur.eat(&['ℍ', 'H']) {
        return Ok((None, count));
    }
    if !cur.eat(&['⟨', '<']) {
        return cur.err("expected `ℍ` or `⟨`");
    }
    let mut class = if cur.eat(&MINUS) { SquareClass::minus_one() } else { SquareClass::one() };
    loop {
        if let Some(num) = cur.integer()? {
            let den = if cur.eat(&['/']) {
                match cur.integer()? {
                    Some(d) => d,
                    None => return cur.err("expected denominator"),
                }
            } else {
                1
            };
            let f = SquareClass::new::<&str>(num, den, &[]).map_err(|e| match e {
                GwError::ZeroClass => GwError::Parse { pos: cur.pos, msg: "zero entry in square class".into() },
                other => other,
            })?;
            class = class.checked_mul(&f)?;
        } else if let Some(name) = cur.identifier() {
            class = class.checked_mul(&SquareClass::new(1, 1, &[name])?)?;
        } else {
            return cur.err("expected integer or generator name");
        }
        if cur.eat(&['·', '*']) {
            continue;
        }
        if cur.eat(&['⟩', '>']) {
            return Ok((Some(class), count));
        }
        return cur.err("expected `·` or `⟩`");
    }
}
