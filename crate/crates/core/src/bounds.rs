//! Explicit bound functions: `m(k,n)`, the `θ` recursion, `t(Σ,k)`, the
//! untangling bound `k·3ⁿ` and `ω = 256·C·(k⁴+n⁴)`. Values too large to
//! store are kept as a straight-line program and estimated by level-index
//! magnitude arithmetic.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surface::SurfaceSignature;

pub const DEFAULT_EXACT_LIMIT: u64 = 1_000_000;

const LN10: f64 = std::f64::consts::LN_10;
const HI: f64 = 1e300;
const LO: f64 = 300.0;

/// A non-negative magnitude `E^level(x)` with `E(y) = 10^y`. Canonical
/// form keeps `x ≤ 1e300`, and `x ≥ 300` whenever `level > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Mag {
    pub level: u32,
    pub x: f64,
}

impl Mag {
    pub const ZERO: Mag = Mag { level: 0, x: 0.0 };

    pub fn new(level: u32, x: f64) -> Mag {
        let mut m = Mag { level, x };
        while m.x > HI {
            m.x = m.x.log10();
            m.level += 1;
        }
        while m.level > 0 && m.x < LO {
            m.x = 10f64.powf(m.x);
            m.level -= 1;
        }
        m
    }

    pub fn from_f64(x: f64) -> Mag {
        Mag::new(0, x)
    }

    pub fn from_big(n: &BigUint) -> Mag {
        match n.to_f64() {
            Some(x) if x.is_finite() && x <= HI => Mag::from_f64(x),
            _ => Mag::new(1, big_log10(n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.x == 0.0
    }

    /// `log10` of a value `≥ 1` (clamped at zero below that).
    pub fn log10(self) -> Mag {
        if self.level == 0 {
            Mag::from_f64(self.x.log10().max(0.0))
        } else {
            Mag::new(self.level - 1, self.x)
        }
    }

    pub fn exp10(self) -> Mag {
        Mag::new(self.level + 1, self.x)
    }

    /// `log10` as a float, when it fits.
    pub fn log10_f64(self) -> Option<f64> {
        let l = self.log10();
        (l.level == 0).then_some(l.x)
    }

    pub fn add(self, other: Mag) -> Mag {
        let (hi, lo) = if self >= other { (self, other) } else { (other, self) };
        if lo.is_zero() {
            return hi;
        }
        match hi.level {
            0 => Mag::from_f64(hi.x + lo.x),
            1 => {
                let la = hi.x;
                let lb = if lo.level == 1 { lo.x } else { lo.x.log10() };
                Mag::new(1, la + (1.0 + 10f64.powf(lb - la)).ln() / LN10)
            }
            _ => hi,
        }
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        if self.level == 0 && other.level == 0 && self.x * other.x <= HI {
            return Mag::from_f64(self.x * other.x);
        }
        self.log10().add(other.log10()).exp10()
    }

    pub fn pow(self, e: Mag) -> Mag {
        if e.is_zero() {
            return Mag::from_f64(1.0);
        }
        if self.is_zero() {
            return Mag::ZERO;
        }
        e.mul(self.log10()).exp10()
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.level {
            write!(f, "10^")?;
        }
        if self.level == 0 && self.x < 1e15 && self.x.fract() == 0.0 {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{:.6}", self.x)
        }
    }
}

impl Serialize for Mag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `log10(n)` for `n > 0`, accurate to double precision.
pub fn big_log10(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).log10();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

fn int(v: u64) -> Expr {
    Expr::Int(BigUint::from(v))
}
fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}
fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}
fn pow(a: Expr, b: Expr) -> Expr {
    Expr::Pow(Box::new(a), Box::new(b))
}

/// A straight-line program: each binding may refer to earlier ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub names: Vec<String>,
    pub defs: Vec<Expr>,
    pub result: Expr,
}

impl Program {
    fn fmt_expr(&self, e: &Expr, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        let (op, a, b) = match e {
            Expr::Int(n) => return write!(f, "{n}"),
            Expr::Var(i) => return write!(f, "{}", self.names[*i]),
            Expr::Add(a, b) => ("+", a, b),
            Expr::Mul(a, b) => ("*", a, b),
            Expr::Pow(a, b) => ("^", a, b),
        };
        if !top {
            write!(f, "(")?;
        }
        self.fmt_expr(a, f, false)?;
        write!(f, "{op}")?;
        self.fmt_expr(b, f, false)?;
        if !top {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, d) in self.names.iter().zip(&self.defs) {
            write!(f, "{n} = ")?;
            self.fmt_expr(d, f, true)?;
            write!(f, "; ")?;
        }
        self.fmt_expr(&self.result, f, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigUint),
    Approx(Mag),
}

impl Value {
    pub fn mag(&self) -> Mag {
        match self {
            Value::Exact(n) => Mag::from_big(n),
            Value::Approx(m) => *m,
        }
    }

    /// Estimated decimal digit count, used to decide exactness.
    fn digits(&self) -> Mag {
        match self {
            Value::Exact(n) if n.is_zero() => Mag::from_f64(1.0),
            Value::Exact(n) => Mag::from_f64(big_log10(n).floor() + 1.0),
            Value::Approx(m) => m.log10().add(Mag::from_f64(1.0)),
        }
    }
}

fn fits(d: Mag, limit: u64) -> bool {
    d.level == 0 && d.x <= limit as f64
}

/// Evaluates with exact big integers while every intermediate stays within
/// `limit` decimal digits, switching to magnitudes beyond that.
pub fn evaluate(p: &Program, limit: u64) -> Value {
    let mut env: Vec<Value> = Vec::with_capacity(p.defs.len());
    for d in &p.defs {
        let v = eval(d, &env, limit);
        env.push(v);
    }
    eval(&p.result, &env, limit)
}

fn eval(e: &Expr, env: &[Value], limit: u64) -> Value {
    let exact_or = |v: Value| match v {
        Value::Exact(n) if !fits(Value::Exact(n.clone()).digits(), limit) => Value::Approx(Mag::from_big(&n)),
        v => v,
    };
    match e {
        Expr::Int(n) => exact_or(Value::Exact(n.clone())),
        Expr::Var(i) => env[*i].clone(),
        Expr::Add(a, b) => match (eval(a, env, limit), eval(b, env, limit)) {
            (Value::Exact(x), Value::Exact(y)) => exact_or(Value::Exact(x + y)),
            (x, y) => Value::Approx(x.mag().add(y.mag())),
        },
        Expr::Mul(a, b) => match (eval(a, env, limit), eval(b, env, limit)) {
            (Value::Exact(x), _) | (_, Value::Exact(x)) if x.is_zero() => Value::Exact(BigUint::zero()),
            (Value::Exact(x), Value::Exact(y)) => {
                let est = Value::Exact(x.clone()).digits().add(Value::Exact(y.clone()).digits());
                if fits(est, limit) {
                    exact_or(Value::Exact(x * y))
                } else {
                    Value::Approx(Mag::from_big(&x).mul(Mag::from_big(&y)))
                }
            }
            (x, y) => Value::Approx(x.mag().mul(y.mag())),
        },
        Expr::Pow(a, b) => {
            let (x, y) = (eval(a, env, limit), eval(b, env, limit));
            if let Value::Exact(ref e) = y {
                if e.is_zero() {
                    return Value::Exact(BigUint::one());
                }
            }
            if let Value::Exact(ref base) = x {
                if base.is_zero() || base.is_one() {
                    return Value::Exact(base.clone());
                }
            }
            match (&x, &y) {
                (Value::Exact(base), Value::Exact(e)) => {
                    let est = e.to_f64().unwrap_or(f64::INFINITY) * big_log10(base) + 1.0;
                    match e.to_u32() {
                        Some(e32) if est <= limit as f64 => Value::Exact(base.pow(e32)),
                        _ => Value::Approx(x.mag().pow(y.mag())),
                    }
                }
                _ => Value::Approx(x.mag().pow(y.mag())),
            }
        }
    }
}

/// `m(k,n) = (4n+1)·k·3ⁿ + 8k`.
pub fn m_bound(k: u64, n: u64) -> BigUint {
    let three = BigUint::from(3u32).pow(n as u32);
    BigUint::from(4 * n + 1) * k * three + BigUint::from(8 * k)
}

pub fn untangle_bound(k: u64, n: u64) -> BigUint {
    BigUint::from(k) * BigUint::from(3u32).pow(n as u32)
}

pub fn omega_bound(k: u64, n: u64, c: Option<u64>) -> Result<BigUint> {
    match c {
        Some(c) if c > 0 => {
            let s = BigUint::from(k).pow(4) + BigUint::from(n).pow(4);
            Ok(BigUint::from(256u32) * c * s)
        }
        _ => Err(Error::MissingConstant),
    }
}

/// Unrolls `θ(k,0) = k`,
/// `θ(k,n) = θ(k + 4·m·(2n+1)^(4·n·m), n−1) + 2k + n·k·3ⁿ` with `m = m(k,n)`.
pub fn theta_program(k: u64, n: u64) -> Program {
    let mut names = vec!["k0".to_string()];
    let mut defs = vec![int(k)];
    let mut tail: Option<Expr> = None;
    for j in 0..n {
        let nj = n - j;
        let kj = Expr::Var(names.len() - 1);
        let three = pow(int(3), int(nj));
        let m = add(mul(mul(int(4 * nj + 1), kj.clone()), three.clone()), mul(int(8), kj.clone()));
        names.push(format!("m{j}"));
        defs.push(m);
        let mv = Expr::Var(names.len() - 1);
        let step = mul(mul(int(4), mv.clone()), pow(int(2 * nj + 1), mul(int(4 * nj), mv)));
        let extra = add(mul(int(2), kj.clone()), mul(mul(int(nj), kj.clone()), three));
        tail = Some(match tail {
            None => extra,
            Some(t) => add(t, extra),
        });
        names.push(format!("k{}", j + 1));
        defs.push(add(kj, step));
    }
    let last = Expr::Var(names.len() - 1);
    let result = match tail {
        None => last,
        Some(t) => add(last, t),
    };
    Program { names, defs, result }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Exact(BigUint),
    Tower(Program),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundDescriptor {
    pub form: Form,
    /// `log10` of the value (zero for the value zero).
    pub log10_estimate: Mag,
    /// Upper bound on the decimal digit count.
    pub digits_bound: Mag,
}

impl BoundDescriptor {
    fn from_value(p: Program, v: Value) -> BoundDescriptor {
        let digits_bound = match &v {
            Value::Exact(n) => Mag::from_f64(n.to_string().len() as f64),
            Value::Approx(m) => Mag::new(m.log10().level, m.log10().x.floor() + 1.0),
        };
        match v {
            Value::Exact(n) => BoundDescriptor {
                log10_estimate: if n.is_zero() { Mag::ZERO } else { Mag::from_f64(big_log10(&n)) },
                form: Form::Exact(n),
                digits_bound,
            },
            Value::Approx(m) => BoundDescriptor { form: Form::Tower(p), log10_estimate: m.log10(), digits_bound },
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match &self.form {
            Form::Exact(n) => Some(n),
            Form::Tower(_) => None,
        }
    }
}

impl fmt::Display for BoundDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            Form::Exact(n) => write!(f, "{n}"),
            Form::Tower(p) => write!(f, "TOWER({p}) ~ 10^{}", self.log10_estimate),
        }
    }
}

impl Serialize for BoundDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundDescriptor", 4)?;
        match &self.form {
            Form::Exact(n) => {
                st.serialize_field("form", "exact")?;
                st.serialize_field("value", &n.to_string())?;
            }
            Form::Tower(p) => {
                st.serialize_field("form", "tower")?;
                st.serialize_field("value", &p.to_string())?;
            }
        }
        st.serialize_field("log10_estimate", &self.log10_estimate)?;
        st.serialize_field("digits_bound", &self.digits_bound)?;
        st.end()
    }
}

pub fn theta(k: u64, n: u64, exact_limit: u64) -> BoundDescriptor {
    let p = theta_program(k, n);
    let v = evaluate(&p, exact_limit);
    BoundDescriptor::from_value(p, v)
}

/// `t(Σ,k) = θ(k, 4k + 3g)` for a surface without boundary.
pub fn t_bound(sig: SurfaceSignature, k: u64, exact_limit: u64) -> Result<BoundDescriptor> {
    if sig.c != 0 {
        return Err(Error::HasBoundary(sig.c));
    }
    Ok(theta(k, 4 * k + 3 * sig.genus() as u64, exact_limit))
}
