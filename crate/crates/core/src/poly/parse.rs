//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | '+' factor | atom ('^' uint)?
//! atom   := uint ('/' uint)? | var | '(' expr ')'
//! var    := 'x' uint | 'x' | 'y' | 'z'
//! ```
//!
//! `x`, `y`, `z` are aliases for `x1`, `x2`, `x3` and are only accepted when
//! there are at most three variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::Polynomial;
use crate::error::{Error, Result};

pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    if nvars == 0 {
        return Err(Error::InvalidArgument("nvars must be positive".into()));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty input"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(b'^') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let e = self.uint()?;
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let save = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.uint()?;
                    if den.is_zero() {
                        self.pos = save;
                        return Err(self.error("zero denominator"));
                    }
                    Ok(Polynomial::constant(self.nvars, BigRational::new(num, den)))
                } else {
                    Ok(Polynomial::constant(self.nvars, BigRational::from_integer(num)))
                }
            }
            Some(b'x') | Some(b'y') | Some(b'z') => self.variable(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn variable(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        let c = self.src[self.pos];
        self.pos += 1;
        let has_digits = self.pos < self.src.len() && self.src[self.pos].is_ascii_digit();
        let index = if c == b'x' && has_digits {
            let k = self.uint()?;
            let k: usize = k.try_into().map_err(|_| self.error("variable index too large"))?;
            if k == 0 || k > self.nvars {
                self.pos = start;
                return Err(self.error(&format!(
                    "variable x{k} out of range for {} variables",
                    self.nvars
                )));
            }
            k - 1
        } else {
            if self.nvars > 3 {
                self.pos = start;
                return Err(self.error("aliases x, y, z need at most three variables"));
            }
            let k = match c {
                b'x' => 0,
                b'y' => 1,
                _ => 2,
            };
            if k >= self.nvars {
                self.pos = start;
                return Err(self.error("alias refers to a missing variable"));
            }
            k
        };
        Ok(Polynomial::var(self.nvars, index))
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ratio, Monomial};

    #[test]
    fn two_term_example() {
        let p = parse_polynomial("x1^2 - 3/2*x2^3", 2).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![2, 0])), ratio(1, 1));
        assert_eq!(p.coeff(&Monomial::new(vec![0, 3])), ratio(-3, 2));
    }

    #[test]
    fn zero_has_no_terms() {
        let p = parse_polynomial("0", 3).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.nvars(), 3);
    }

    #[test]
    fn products_normalize() {
        assert_eq!(
            parse_polynomial("x1*x1", 2).unwrap(),
            parse_polynomial("x1^2", 2).unwrap()
        );
    }

    #[test]
    fn aliases_and_parentheses() {
        let a = parse_polynomial("(x + y)^2 - z", 3).unwrap();
        let b = parse_polynomial("x1^2 + 2*x1*x2 + x2^2 - x3", 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial("x1 + * x2", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_polynomial("x3", 2),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(parse_polynomial("x", 4).is_err());
        assert!(parse_polynomial("1/0", 1).is_err());
        assert!(parse_polynomial("(x1", 1).is_err());
        assert!(parse_polynomial("", 1).is_err());
    }
}
