//! Text syntax for cyclotomic numbers: a sum of terms `c*z^k`, where `c` is a
//! rational `a/b` and `z` stands for `ζ_m` at a conductor fixed by context,
//! e.g. `1/2*z^0 + -1/2*z^15`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ArithError, Cyclo};

/// Renders the element at its own conductor. Terms appear in increasing power
/// order; zero renders as `0`.
pub fn format_literal(a: &Cyclo) -> String {
    let terms: Vec<String> = a
        .coeffs()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            if c.denom().is_one() {
                format!("{}*z^{k}", c.numer())
            } else {
                format!("{}/{}*z^{k}", c.numer(), c.denom())
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> ArithError {
        ArithError::Parse {
            input: self.src.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, ArithError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected digits at offset {start}")));
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn signed_integer(&mut self) -> Result<BigInt, ArithError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = self.integer()?;
        Ok(if neg { -v } else { v })
    }

    /// One term, with the sign already consumed by the caller.
    fn term(&mut self, m: u32) -> Result<Cyclo, ArithError> {
        // unary signs inside the term, e.g. "+ -1/2*z^3"
        let mut sign = BigInt::one();
        while let Some(c @ (b'-' | b'+')) = self.peek() {
            self.pos += 1;
            if c == b'-' {
                sign = -sign;
            }
        }
        let mut coeff = BigRational::one();
        let mut have_coeff = false;
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            let n = self.integer()?;
            let mut d = BigInt::one();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                d = self.integer()?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
            }
            coeff = BigRational::new(n, d);
            have_coeff = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(Cyclo::from_rational(m, &(coeff * BigRational::from(sign))));
            }
        }
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                let mut k = BigInt::one();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    k = self.signed_integer()?;
                }
                let k = k.mod_floor_i64(m);
                let z = Cyclo::zeta(m, k);
                Ok(z.scale(&(coeff * BigRational::from(sign))))
            }
            _ if have_coeff => Err(self.err("expected 'z' after '*'")),
            Some(c) => Err(self.err(format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

trait ModFloorI64 {
    fn mod_floor_i64(&self, m: u32) -> i64;
}

impl ModFloorI64 for BigInt {
    fn mod_floor_i64(&self, m: u32) -> i64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        self.mod_floor(&BigInt::from(m)).to_i64().expect("small residue")
    }
}

/// Parses the literal syntax at conductor `m`.
pub fn parse_literal(src: &str, m: u32) -> Result<Cyclo, ArithError> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(p.err("empty literal"));
    }
    let mut acc = p.term(m)?;
    loop {
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                let t = p.term(m)?;
                acc = &acc + &t;
            }
            Some(b'-') => {
                p.pos += 1;
                let t = p.term(m)?;
                acc = &acc - &t;
            }
            Some(c) => {
                return Err(p.err(format!(
                    "unexpected character {:?} at offset {}",
                    c as char, p.pos
                )))
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spec_example() {
        let a = parse_literal("1/2*z^0 + -1/2*z^15", 60).unwrap();
        let expected = (&Cyclo::one(60) - &Cyclo::zeta(60, 15))
            .scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(a, expected);
    }

    #[test]
    fn parse_variants() {
        assert_eq!(parse_literal("z", 4).unwrap(), Cyclo::zeta(4, 1));
        assert_eq!(parse_literal("-z^3", 4).unwrap(), Cyclo::zeta(4, 1));
        assert_eq!(parse_literal("3", 5).unwrap(), Cyclo::from_int(5, 3));
        assert_eq!(parse_literal("z^2 - 1", 4).unwrap(), Cyclo::from_int(4, -2));
        assert_eq!(parse_literal("z^-1", 7).unwrap(), Cyclo::zeta(7, 6));
        assert_eq!(parse_literal("0", 7).unwrap(), Cyclo::zero(7));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_literal("", 4).is_err());
        assert!(parse_literal("1/0", 4).is_err());
        assert!(parse_literal("2*y", 4).is_err());
        assert!(parse_literal("1 +", 4).is_err());
    }

    #[test]
    fn format_round_trip() {
        let a = &Cyclo::zeta(28, 5).scale(&BigRational::new((-3).into(), 7.into()))
            + &Cyclo::from_int(28, 2);
        let s = format_literal(&a);
        assert_eq!(parse_literal(&s, 28).unwrap(), a);
        assert_eq!(format_literal(&Cyclo::zero(3)), "0");
    }
}
