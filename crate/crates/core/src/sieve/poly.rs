use std::fmt;

use serde::Serialize;

use super::SieveError;

/// Integer polynomial in the coordinates `x1, …, xm`, stored as a sorted
/// list of monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polynomial {
    vars: usize,
    terms: Vec<(i64, Vec<u32>)>,
}

impl Polynomial {
    pub fn constant(vars: usize, c: i64) -> Self {
        Self::from_terms(vars, vec![(c, vec![0; vars])])
    }

    /// The coordinate `x_{i+1}`.
    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::from_terms(vars, vec![(1, e)])
    }

    fn from_terms(vars: usize, mut terms: Vec<(i64, Vec<u32>)>) -> Self {
        terms.sort_by(|a, b| b.1.cmp(&a.1));
        let mut out: Vec<(i64, Vec<u32>)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match out.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|t| t.0 != 0);
        Self { vars, terms: out }
    }

    /// Parses `+ - * ^`, parentheses, integer literals and the variables
    /// `x1 … xm`.
    pub fn parse(src: &str, vars: usize) -> Result<Self, SieveError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
            vars,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        Self::from_terms(self.vars, self.terms.iter().chain(&rhs.terms).cloned().collect())
    }

    fn neg(&self) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(c, e)| (-c, e.clone())).collect())
    }

    fn mul(&self, rhs: &Self) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c1, e1) in &self.terms {
            for (c2, e2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                terms.push((c1.checked_mul(*c2)?, e));
            }
        }
        Some(Self::from_terms(self.vars, terms))
    }

    /// Exact value, or `None` on `i128` overflow.
    pub fn eval(&self, x: &[i64]) -> Option<i128> {
        let mut total: i128 = 0;
        for (c, e) in &self.terms {
            let mut term = *c as i128;
            for (&xi, &k) in x.iter().zip(e) {
                term = term.checked_mul((xi as i128).checked_pow(k)?)?;
            }
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    /// Value modulo `d ≥ 1`, in `[0, d)`.
    pub fn eval_mod(&self, x: &[u64], d: u64) -> u64 {
        let d = d as u128;
        let mut total = 0u128;
        for (c, e) in &self.terms {
            let mut term = (*c as i128).rem_euclid(d as i128) as u128;
            for (&xi, &k) in x.iter().zip(e) {
                let xi = xi as u128 % d;
                for _ in 0..k {
                    term = term * xi % d;
                }
            }
            total = (total + term) % d;
        }
        total as u64
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                .collect();
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.unsigned_abs();
            match (a, monomial.is_empty()) {
                (_, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{}", monomial.join("*"))?,
                _ => write!(f, "{a}*{}", monomial.join("*"))?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> SieveError {
        SieveError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, SieveError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected a number"))
    }

    fn expr(&mut self) -> Result<Polynomial, SieveError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, SieveError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.mul(&rhs).ok_or(SieveError::Overflow)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, SieveError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let k = self.number()?;
        let mut acc = Polynomial::constant(self.vars, 1);
        for _ in 0..k {
            acc = acc.mul(&base).ok_or(SieveError::Overflow)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Polynomial, SieveError> {
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
            Some(b'x') => {
                self.pos += 1;
                let i = self.number()? as usize;
                if i == 0 || i > self.vars {
                    return Err(self.error(&format!("variable x{i} outside x1..x{}", self.vars)));
                }
                Ok(Polynomial::variable(self.vars, i - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let c = i64::try_from(n).map_err(|_| SieveError::Overflow)?;
                Ok(Polynomial::constant(self.vars, c))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// `F = F_1 ⋯ F_r` given by its factors. `r` counts the nonconstant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialF {
    pub factors: Vec<Polynomial>,
    pub degree: u32,
    pub r: usize,
}

impl PolynomialF {
    pub fn new(factors: Vec<Polynomial>) -> Result<Self, SieveError> {
        let vars = factors.first().map(Polynomial::vars).ok_or_else(|| SieveError::Parse("no factors".into()))?;
        if factors.iter().any(|f| f.vars() != vars) {
            return Err(SieveError::Parse("factors disagree on the number of variables".into()));
        }
        let degree = factors.iter().map(Polynomial::degree).sum();
        let r = factors.iter().filter(|f| !f.is_constant()).count();
        Ok(Self { factors, degree, r })
    }

    pub fn parse(factors: &[impl AsRef<str>], vars: usize) -> Result<Self, SieveError> {
        let polys = factors
            .iter()
            .map(|s| Polynomial::parse(s.as_ref(), vars))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(polys)
    }

    pub fn vars(&self) -> usize {
        self.factors[0].vars()
    }

    /// Values of the individual factors, or `None` on overflow.
    pub fn factor_values(&self, x: &[i64]) -> Option<Vec<i128>> {
        self.factors.iter().map(|f| f.eval(x)).collect()
    }

    pub fn eval(&self, x: &[i64]) -> Option<i128> {
        self.factor_values(x)?.into_iter().try_fold(1i128, |acc, v| acc.checked_mul(v))
    }

    pub fn eval_mod(&self, x: &[u64], d: u64) -> u64 {
        self.factors
            .iter()
            .fold(1 % d as u128, |acc, f| acc * f.eval_mod(x, d) as u128 % d as u128) as u64
    }

    pub fn describe(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("({f})"))
            .collect::<Vec<_>>()
            .join("*")
    }
}
