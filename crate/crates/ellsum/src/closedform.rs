//! A tiny expression language for the closed-form sides of identities.
//!
//! Grammar (whitespace insignificant, symbols case-sensitive):
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := ['-'] base ['^' exponent]
//! base     := NUMBER | 'pi' | 'gamma4' | 'K' | 'E' | 'Kp' | 'Ep' | 'k' | 'kp' | 'q'
//!           | 'sqrt' '(' expr ')' | '(' expr ')'
//! exponent := INTEGER | '(' INTEGER '/' INTEGER ')'
//! NUMBER   := decimal integer or INTEGER '/' INTEGER
//! ```
//! There are no general functions beyond `sqrt`; rational powers are written
//! `a^(p/q)`. Every expression in the identity corpus fits this grammar.

use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};
use crate::singular::gamma_quarter;

/// Named constants resolvable without a context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    /// Γ(1/4), resolved once per process from the K(k₁) closed form.
    Gamma4,
}

/// Context symbols, resolved against an [`EllipticContext`] at evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    K,
    E,
    Kp,
    Ep,
    LittleK,
    LittleKp,
    Q,
}

/// Immutable expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Rational literal p/q with q > 0.
    Rational(i64, i64),
    Const(Constant),
    Sym(Symbol),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// base ^ (p/q) with q > 0.
    Pow(Box<Expr>, i64, i64),
    Sqrt(Box<Expr>),
}

/// Parse an expression, reporting syntax errors with a byte offset.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluate against a context. `gamma4` comes from [`gamma_quarter`].
pub fn eval(expr: &Expr, ctx: &EllipticContext) -> Result<f64> {
    match expr {
        Expr::Rational(p, q) => Ok(*p as f64 / *q as f64),
        Expr::Const(Constant::Pi) => Ok(std::f64::consts::PI),
        Expr::Const(Constant::Gamma4) => Ok(gamma_quarter()),
        Expr::Sym(s) => Ok(match s {
            Symbol::K => ctx.K,
            Symbol::E => ctx.E,
            Symbol::Kp => ctx.K_prime,
            Symbol::Ep => ctx.E_prime,
            Symbol::LittleK => ctx.modulus.k(),
            Symbol::LittleKp => ctx.modulus.k_prime(),
            Symbol::Q => ctx.q,
        }),
        Expr::Neg(a) => Ok(-eval(a, ctx)?),
        Expr::Add(a, b) => Ok(eval(a, ctx)? + eval(b, ctx)?),
        Expr::Sub(a, b) => Ok(eval(a, ctx)? - eval(b, ctx)?),
        Expr::Mul(a, b) => Ok(eval(a, ctx)? * eval(b, ctx)?),
        Expr::Div(a, b) => {
            let d = eval(b, ctx)?;
            if d == 0.0 {
                return Err(Error::Domain("division by zero".into()));
            }
            Ok(eval(a, ctx)? / d)
        }
        Expr::Pow(base, p, q) => {
            let b = eval(base, ctx)?;
            if *q == 1 {
                return Ok(if p.unsigned_abs() <= i32::MAX as u64 {
                    b.powi(*p as i32)
                } else {
                    b.powf(*p as f64)
                });
            }
            if b < 0.0 {
                return Err(Error::Domain(format!(
                    "negative base {b} with non-integer exponent {p}/{q}"
                )));
            }
            Ok(b.powf(*p as f64 / *q as f64))
        }
        Expr::Sqrt(a) => {
            let v = eval(a, ctx)?;
            if v < 0.0 {
                return Err(Error::Domain(format!("sqrt of negative value {v}")));
            }
            Ok(v.sqrt())
        }
    }
}

/// Render back to the grammar; `parse(render(e))` is structurally equal to `e`.
pub fn render(expr: &Expr) -> String {
    // Precedence levels: 0 add/sub, 1 mul/div, 2 unary minus, 3 power, 4 atom.
    // Rationals count as atoms because the lexer binds `p/q` as one number.
    fn go(e: &Expr, parent: u8, out: &mut String) {
        let mine = match e {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Rational(p, _) if *p < 0 => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        };
        let need_paren = mine < parent;
        if need_paren {
            out.push('(');
        }
        match e {
            Expr::Rational(p, q) => {
                if *q == 1 {
                    out.push_str(&p.to_string());
                } else {
                    out.push_str(&format!("{p}/{q}"));
                }
            }
            Expr::Const(Constant::Pi) => out.push_str("pi"),
            Expr::Const(Constant::Gamma4) => out.push_str("gamma4"),
            Expr::Sym(s) => out.push_str(match s {
                Symbol::K => "K",
                Symbol::E => "E",
                Symbol::Kp => "Kp",
                Symbol::Ep => "Ep",
                Symbol::LittleK => "k",
                Symbol::LittleKp => "kp",
                Symbol::Q => "q",
            }),
            Expr::Neg(a) => {
                out.push('-');
                go(a, 2, out);
            }
            Expr::Add(a, b) => {
                go(a, 0, out);
                out.push_str(" + ");
                go(b, 1, out);
            }
            Expr::Sub(a, b) => {
                go(a, 0, out);
                out.push_str(" - ");
                go(b, 1, out);
            }
            Expr::Mul(a, b) => {
                go(a, 1, out);
                out.push('*');
                go(b, 2, out);
            }
            Expr::Div(a, b) => {
                go(a, 1, out);
                out.push('/');
                go(b, 2, out);
            }
            Expr::Pow(base, p, q) => {
                // A power cannot be the base of another power without parens.
                go(base, 4, out);
                out.push('^');
                if *q == 1 && *p >= 0 {
                    out.push_str(&p.to_string());
                } else {
                    out.push_str(&format!("({p}/{q})"));
                }
            }
            Expr::Sqrt(a) => {
                out.push_str("sqrt(");
                go(a, 0, out);
                out.push(')');
            }
        }
        if need_paren {
            out.push(')');
        }
    }
    let mut s = String::new();
    go(expr, 0, &mut s);
    s
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let (p, q) = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), p, q));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.eat(b'(');
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric())
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.skip_ws();
                match word {
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "gamma4" => Ok(Expr::Const(Constant::Gamma4)),
                    "K" => Ok(Expr::Sym(Symbol::K)),
                    "E" => Ok(Expr::Sym(Symbol::E)),
                    "Kp" => Ok(Expr::Sym(Symbol::Kp)),
                    "Ep" => Ok(Expr::Sym(Symbol::Ep)),
                    "k" => Ok(Expr::Sym(Symbol::LittleK)),
                    "kp" => Ok(Expr::Sym(Symbol::LittleKp)),
                    "q" => Ok(Expr::Sym(Symbol::Q)),
                    "sqrt" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Sqrt(Box::new(e)))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown symbol '{word}'")))
                    }
                }
            }
            _ => Err(self.err("expected a number, symbol, or '('")),
        }
    }

    /// Integer, or rational `INTEGER/INTEGER` when the slash is immediately
    /// followed by a digit (so `1/(2*pi)` still parses as a division).
    fn number(&mut self) -> Result<Expr> {
        let p = self.integer()?;
        if self.peek() == Some(b'/')
            && self
                .src
                .get(self.pos + 1)
                .map(|c| c.is_ascii_digit())
                .unwrap_or(false)
        {
            self.pos += 1;
            let q = self.integer()?;
            if q == 0 {
                return Err(self.err("zero denominator"));
            }
            self.skip_ws();
            return Ok(Expr::Rational(p, q));
        }
        self.skip_ws();
        Ok(Expr::Rational(p, 1))
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn exponent(&mut self) -> Result<(i64, i64)> {
        if self.eat(b'(') {
            let p = self.integer()?;
            self.skip_ws();
            self.expect(b'/')?;
            let q = self.integer()?;
            self.skip_ws();
            self.expect(b')')?;
            if q <= 0 {
                return Err(self.err("exponent denominator must be positive"));
            }
            Ok((p, q))
        } else {
            let p = self.integer()?;
            self.skip_ws();
            Ok((p, 1))
        }
    }
}
