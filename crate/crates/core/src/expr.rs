//! Exact evaluation of the small arithmetic and boolean expressions used in
//! reference-data files, over big rationals.
//!
//! Grammar, loosest binding first: `||`, `&&`, `!`, comparisons
//! (`== != < <= > >=`), `+ -`, `* / %`, unary `-`, `^` (right associative,
//! non-negative integer exponents).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(BigRational),
    Bool(bool),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(&'static str),
}

const OPS: [&str; 19] = [
    "||", "&&", "==", "!=", "<=", ">=", "<", ">", "!", "+", "-", "*", "/", "%", "^", "(", ")", "=", "|",
];

fn lex(s: &str) -> Result<Vec<Tok>> {
    let err = |m: String| Error::Parse { line: 0, msg: m };
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let j = (i..b.len()).find(|&j| !b[j].is_ascii_digit()).unwrap_or(b.len());
            out.push(Tok::Num(s[i..j].parse().map_err(|_| err(format!("bad number in {s:?}")))?));
            i = j;
        } else if c.is_ascii_alphabetic() {
            let j = (i..b.len())
                .find(|&j| !(b[j].is_ascii_alphanumeric() || b[j] == b'_'))
                .unwrap_or(b.len());
            out.push(Tok::Ident(s[i..j].to_string()));
            i = j;
        } else {
            let op = OPS
                .iter()
                .find(|op| s[i..].starts_with(*op))
                .ok_or_else(|| err(format!("unexpected {c:?} in {s:?}")))?;
            if *op == "=" || *op == "|" {
                return Err(err(format!("unexpected {op:?} in {s:?}")));
            }
            out.push(Tok::Op(op));
            i += op.len();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a dyn Fn(&str) -> Option<BigRational>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Parse {
            line: 0,
            msg: format!("{m} in {:?}", self.src),
        }
    }

    fn eat(&mut self, op: &str) -> bool {
        let hit = matches!(self.toks.get(self.pos), Some(Tok::Op(o)) if *o == op);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn num(&self, v: Value) -> Result<BigRational> {
        match v {
            Value::Num(x) => Ok(x),
            Value::Bool(_) => Err(self.err("expected a number")),
        }
    }

    fn boolean(&self, v: Value) -> Result<bool> {
        match v {
            Value::Bool(x) => Ok(x),
            Value::Num(_) => Err(self.err("expected a boolean")),
        }
    }

    fn or(&mut self) -> Result<Value> {
        let mut v = self.and()?;
        while self.eat("||") {
            let l = self.boolean(v)?;
            let r = self.and()?;
            v = Value::Bool(l | self.boolean(r)?);
        }
        Ok(v)
    }

    fn and(&mut self) -> Result<Value> {
        let mut v = self.not()?;
        while self.eat("&&") {
            let l = self.boolean(v)?;
            let r = self.not()?;
            v = Value::Bool(l & self.boolean(r)?);
        }
        Ok(v)
    }

    fn not(&mut self) -> Result<Value> {
        if self.eat("!") {
            let v = self.not()?;
            return Ok(Value::Bool(!self.boolean(v)?));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Value> {
        let l = self.sum()?;
        for op in ["==", "!=", "<=", ">=", "<", ">"] {
            if self.eat(op) {
                let r = self.sum()?;
                let (l, r) = (self.num(l)?, self.num(r)?);
                return Ok(Value::Bool(match op {
                    "==" => l == r,
                    "!=" => l != r,
                    "<=" => l <= r,
                    ">=" => l >= r,
                    "<" => l < r,
                    _ => l > r,
                }));
            }
        }
        Ok(l)
    }

    fn sum(&mut self) -> Result<Value> {
        let mut v = self.prod()?;
        loop {
            let plus = if self.eat("+") {
                true
            } else if self.eat("-") {
                false
            } else {
                return Ok(v);
            };
            let l = self.num(v)?;
            let r = self.prod()?;
            let r = self.num(r)?;
            v = Value::Num(if plus { l + r } else { l - r });
        }
    }

    fn prod(&mut self) -> Result<Value> {
        let mut v = self.unary()?;
        loop {
            let op = ["*", "/", "%"].into_iter().find(|op| self.eat(op));
            let Some(op) = op else { return Ok(v) };
            let l = self.num(v)?;
            let r = self.unary()?;
            let r = self.num(r)?;
            v = Value::Num(match op {
                "*" => l * r,
                "/" if r.is_zero() => return Err(self.err("division by zero")),
                "/" => l / r,
                _ => {
                    if !l.is_integer() || !r.is_integer() || r.is_zero() {
                        return Err(self.err("% needs integers and a nonzero modulus"));
                    }
                    BigRational::from_integer(l.to_integer().mod_floor(&r.to_integer()))
                }
            });
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat("-") {
            let v = self.unary()?;
            return Ok(Value::Num(-self.num(v)?));
        }
        self.pow()
    }

    fn pow(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat("^") {
            return Ok(base);
        }
        let base = self.num(base)?;
        let e = self.unary()?;
        let e = self.num(e)?;
        if !e.is_integer() || e.is_negative() {
            return Err(self.err("exponent must be a non-negative integer"));
        }
        let e = e.to_integer().to_u32().ok_or_else(|| self.err("exponent too large"))?;
        Ok(Value::Num(num_traits::pow(base, e as usize)))
    }

    fn atom(&mut self) -> Result<Value> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(Value::Num(BigRational::from_integer(n))),
            Some(Tok::Ident(name)) => (self.vars)(&name)
                .map(Value::Num)
                .ok_or_else(|| self.err(&format!("unknown variable {name}"))),
            Some(Tok::Op("(")) => {
                let v = self.or()?;
                if !self.eat(")") {
                    return Err(self.err("missing )"));
                }
                Ok(v)
            }
            _ => Err(self.err("unexpected end or token")),
        }
    }
}

pub fn eval(src: &str, vars: &dyn Fn(&str) -> Option<BigRational>) -> Result<Value> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        vars,
        src,
    };
    let v = p.or()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Evaluates with integer variables given as `(name, value)` pairs.
pub fn eval_with(src: &str, vars: &[(&str, i64)]) -> Result<Value> {
    eval(src, &|name| {
        vars.iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| BigRational::from_integer(v.into()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn num(s: &str, n: i64, q: i64) -> BigRational {
        match eval_with(s, &[("n", n), ("q", q)]).unwrap() {
            Value::Num(x) => x,
            v => panic!("{v:?}"),
        }
    }

    fn truth(s: &str, n: i64, q: i64) -> bool {
        eval_with(s, &[("n", n), ("q", q)]).unwrap() == Value::Bool(true)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(num("(q^n-q)/(q-1)", 4, 2), int(14));
        assert_eq!(num("(q^3-1)*(q-1)/2", 4, 5), int(248));
        assert_eq!(num("2^3^2", 0, 0), int(512));
        assert_eq!(num("-2^2", 0, 0), int(-4));
        assert_eq!(num("7/2 - 1", 0, 0), rat(5, 2));
        assert_eq!(num("-7 % 3", 0, 0), int(2));
        // far beyond i64
        assert_eq!(num("q^40", 0, 10), BigRational::from_integer(BigInt::from(10).pow(40)));
    }

    #[test]
    fn conditions() {
        let c = "n >= 5 && q >= 3 && !(n == 6 && q == 3)";
        assert!(truth(c, 5, 3));
        assert!(!truth(c, 6, 3));
        assert!(truth(c, 6, 4));
        assert!(truth("n == 4 && q % 2 == 1 && q != 3", 4, 5));
        assert!(truth("q == 2 || q == 3", 0, 3));
    }

    #[test]
    fn errors() {
        for bad in ["1 +", "(1", "x", "1 = 1", "2^-1", "1/0", "1 && 2", "1 2"] {
            assert!(eval_with(bad, &[]).is_err(), "{bad}");
        }
    }
}
