//! Text syntax shared by scalars and algebra elements.
//!
//! Scalars are expressions in `u`, `q` (= `u^2`), `i`, integers, `+ - * / ^`
//! and parentheses. Elements add generator atoms `I+(k,l)`, `I-(k,l)` and
//! `I(k,l)` (basic generators); juxtaposition multiplies.

use crate::error::{Error, Result};
use crate::qnum::{GaussRat, HalfInt, QScalar};

/// Sign of a generator symbol `I^±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `−1`.
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "plus" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("expected + or -, got {other:?}"))),
        }
    }
}

/// A value type the parser can build.
pub trait ParseTarget: Sized {
    fn from_scalar(c: QScalar) -> Self;
    fn generator(sign: Sign, upper: u32, lower: u32) -> Result<Self>;
    fn as_scalar(&self) -> Option<QScalar>;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl ParseTarget for QScalar {
    fn from_scalar(c: QScalar) -> Self {
        c
    }
    fn generator(_: Sign, upper: u32, lower: u32) -> Result<Self> {
        Err(Error::Parse(format!("generator I({upper},{lower}) in a scalar expression")))
    }
    fn as_scalar(&self) -> Option<QScalar> {
        Some(self.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

pub fn parse_scalar(s: &str) -> Result<QScalar> {
    parse::<QScalar>(s)
}

pub fn parse<T: ParseTarget + Clone>(s: &str) -> Result<T> {
    let tokens = tokenize(s)?;
    let mut p = Parser { tokens, pos: 0 };
    let v: T = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected {:?} in {s:?}", p.tokens[p.pos])));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    U,
    Q,
    I,
    Gen(Sign, u32, u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| Error::Parse(format!("integer literal too large: {text}")))?;
                out.push(Tok::Int(n));
            }
            'u' => {
                out.push(Tok::U);
                i += 1;
            }
            'q' => {
                out.push(Tok::Q);
                i += 1;
            }
            'i' => {
                out.push(Tok::I);
                i += 1;
            }
            'I' => {
                i += 1;
                let sign = match chars.get(i) {
                    Some('+') => {
                        i += 1;
                        Some(Sign::Plus)
                    }
                    Some('-') => {
                        i += 1;
                        Some(Sign::Minus)
                    }
                    _ => None,
                };
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .filter(|_| chars.get(i) == Some(&'('))
                    .ok_or_else(|| Error::Parse(format!("expected I±(k,l) at offset {i}")))?;
                let inner: String = chars[i + 1..i + close].iter().collect();
                let (k, l) =
                    inner.split_once(',').ok_or_else(|| Error::Parse(format!("expected two indices in I({inner})")))?;
                let k: u32 = k.trim().parse().map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
                let l: u32 = l.trim().parse().map_err(|_| Error::Parse(format!("bad index {l:?}")))?;
                let sign = match sign {
                    Some(s) => s,
                    None if k == l + 1 => Sign::Plus,
                    None => return Err(Error::Parse(format!("composite generator I({k},{l}) needs an explicit sign"))),
                };
                out.push(Tok::Gen(sign, k, l));
                i += close + 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, got {got:?}"))),
        }
    }

    fn expr<T: ParseTarget + Clone>(&mut self) -> Result<T> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first: T = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t: T = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t: T = self.term()?;
                    acc = acc.add(&t.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::U | Tok::Q | Tok::I | Tok::Gen(..) | Tok::LParen))
    }

    fn term<T: ParseTarget + Clone>(&mut self) -> Result<T> {
        let mut acc: T = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f: T = self.factor()?;
                    acc = acc.mul(&f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f: T = self.factor()?;
                    let d = f.as_scalar().ok_or_else(|| Error::Parse("division by a non-scalar".into()))?;
                    let inv = d.inv().map_err(|_| Error::Parse("division by zero".into()))?;
                    acc = acc.mul(&T::from_scalar(inv));
                }
                _ if self.starts_factor() => {
                    let f: T = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// `^e` with `e` an integer or a parenthesised integer/half-integer.
    fn exponent(&mut self) -> Result<Option<HalfInt>> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = match self.bump() {
            Some(Tok::Int(n)) => n,
            got => return Err(Error::Parse(format!("expected exponent, got {got:?}"))),
        };
        let mut e = HalfInt::from_int(n);
        if paren {
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let d = match self.bump() {
                    Some(Tok::Int(d)) => d,
                    got => return Err(Error::Parse(format!("expected exponent denominator, got {got:?}"))),
                };
                e = HalfInt::new(n, d)?;
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Some(if neg { -e } else { e }))
    }

    fn factor<T: ParseTarget + Clone>(&mut self) -> Result<T> {
        let tok = self.bump().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        let atom: Atom<T> = match tok {
            Tok::Int(n) => Atom::Scalar(QScalar::from_int(n)),
            Tok::U => Atom::U,
            Tok::Q => Atom::Q,
            Tok::I => Atom::Scalar(QScalar::i()),
            Tok::Gen(s, k, l) => Atom::Other(T::generator(s, k, l)?),
            Tok::LParen => {
                let v: T = self.expr()?;
                self.expect(Tok::RParen)?;
                match v.as_scalar() {
                    Some(c) => Atom::Scalar(c),
                    None => Atom::Other(v),
                }
            }
            other => return Err(Error::Parse(format!("unexpected {other:?}"))),
        };
        let e = self.exponent()?;
        match (atom, e) {
            (Atom::U, None) => Ok(T::from_scalar(QScalar::u_pow(1))),
            (Atom::Q, None) => Ok(T::from_scalar(QScalar::u_pow(2))),
            (Atom::Scalar(c), None) => Ok(T::from_scalar(c)),
            (Atom::Other(v), None) => Ok(v),
            (Atom::Q, Some(e)) => Ok(T::from_scalar(QScalar::qpower(e))),
            (Atom::U, Some(e)) if e.is_integer() => Ok(T::from_scalar(QScalar::u_pow(e.twice() / 2))),
            (Atom::Scalar(c), Some(e)) if e.is_integer() => {
                let p = c.pow(e.twice() / 2).map_err(|_| Error::Parse("0 to a negative power".into()))?;
                Ok(T::from_scalar(p))
            }
            (Atom::Other(v), Some(e)) if e.is_integer() && e >= HalfInt::ZERO => {
                let mut acc = T::from_scalar(QScalar::one());
                for _ in 0..e.twice() / 2 {
                    acc = acc.mul(&v);
                }
                Ok(acc)
            }
            (_, Some(e)) => Err(Error::Parse(format!("unsupported exponent {e}"))),
        }
    }
}

enum Atom<T> {
    U,
    Q,
    Scalar(QScalar),
    Other(T),
}

/// Parses a rational or decimal number into an exact Gaussian rational.
pub fn parse_rational(s: &str) -> Result<GaussRat> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let b: i64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if b == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(GaussRat::from_ratio(a, b));
    }
    let neg = s.starts_with('-');
    let body = s.trim_start_matches(['-', '+']);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let digits = format!("{int}{frac}");
    let n: i64 = digits.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
    let d = 10i64.checked_pow(frac.len() as u32).ok_or_else(|| Error::Parse(format!("too many decimals in {s:?}")))?;
    Ok(GaussRat::from_ratio(if neg { -n } else { n }, d))
}
