//! Text forms of numbers: `a`, `a/b`, decimals, `sqrt(d)`, `delta_d`, `phi`,
//! combined with `+ - * /` and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Expr, QuadraticNumber};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(rhs).or_else(|_| err(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.primary()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let at = self.pos;
        let ds = self.digits();
        if ds.is_empty() {
            return err(at, "expected an integer");
        }
        Ok(ds.parse().expect("digits"))
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = match self.peek() {
            Some(_) => self.pos,
            None => return err(self.pos, "unexpected end of input"),
        };
        let c = self.src[at];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            let int = self.digits();
            let mut value = if int.is_empty() {
                BigRational::zero()
            } else {
                BigRational::from_integer(int.parse().expect("digits"))
            };
            if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                self.pos += 1;
                let frac = self.digits();
                if int.is_empty() && frac.is_empty() {
                    return err(at, "malformed decimal");
                }
                if !frac.is_empty() {
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    value += BigRational::new(frac.parse().expect("digits"), scale);
                }
            }
            return Ok(Expr::Num(QuadraticNumber::from_rational(value)));
        }
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match word {
            "sqrt" => {
                self.expect(b'(')?;
                let arg_at = self.pos;
                let n = self.integer()?;
                self.expect(b')')?;
                let x = QuadraticNumber::new(BigRational::zero(), BigRational::one(), n)
                    .or_else(|e| err(arg_at, e.to_string()))?;
                Ok(Expr::Num(x))
            }
            "phi" => Ok(Expr::Num(QuadraticNumber::phi())),
            w if w.starts_with("delta_") => {
                let d: u64 = w[6..].parse().or_else(|_| err(start, "bad delta index"))?;
                let x = QuadraticNumber::delta(d).or_else(|e| err(start, e.to_string()))?;
                Ok(Expr::Num(x))
            }
            "" => err(start, format!("unexpected character '{}'", c as char)),
            w => err(start, format!("unknown identifier '{w}'")),
        }
    }
}

/// Parses a real expression; subterms sharing a field are folded exactly.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}
