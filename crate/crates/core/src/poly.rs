//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a decimal like `0.25` into an exact rational.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A polynomial in `nvars` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate polynomial `x_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// Builds a polynomial from integer-coefficient terms.
    pub fn from_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e.to_vec(), int(*c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(self.nvars, BigRational::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * x.iter().zip(e).map(|(xi, &k)| xi.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Substitutes `subs[k]` (polynomials in `nvars_out` variables) for each
    /// variable.
    pub fn compose(&self, subs: &[MultiPoly]) -> Self {
        assert_eq!(subs.len(), self.nvars);
        let nout = subs.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(nout);
        for (e, c) in &self.terms {
            let mut t = Self::constant(nout, c.clone());
            for (p, &k) in subs.iter().zip(e) {
                if k > 0 {
                    t = &t * &p.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Fixes variable `k` at a rational value, keeping the variable count.
    pub fn substitute(&self, k: usize, value: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[k] = 0;
            out.add_term(e2, c * num_traits::pow(value.clone(), e[k] as usize));
        }
        out
    }

    /// Coefficients of `x_k^0, x_k^1, …` as polynomials in the other variables.
    pub fn coefficients_in(&self, k: usize) -> Vec<MultiPoly> {
        let mut out = vec![Self::zero(self.nvars); self.degree_in(k) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[k] = 0;
            out[e[k] as usize].add_term(e2, c.clone());
        }
        out
    }

    /// Exact division by a monomial `x_k^n`, `None` when not divisible.
    pub fn divide_by_var_power(&self, k: usize, n: u32) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] < n {
                return None;
            }
            let mut e2 = e.clone();
            e2[k] -= n;
            out.add_term(e2, c.clone());
        }
        Some(out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c < &BigRational::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = if c < &BigRational::zero() { -c.clone() } else { c.clone() };
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if mono.is_empty() || !mag.is_one() {
                write!(f, "{}", rat_string(&mag))?;
                if !mono.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", mono.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_evaluation() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let one = MultiPoly::constant(2, int(1));
        // (x + y)(x − y) = x² − y²
        let p = &(&x + &y) * &(&x - &y);
        let q = &x.pow(2) - &y.pow(2);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!(p.eval(&[rat(1, 2), rat(1, 3)]), rat(5, 36));
        assert_eq!(p.total_degree(), 2);
        assert!((&(&x + &one) - &one - x.clone()).is_zero());
    }

    #[test]
    fn compose_substitute_and_coefficients() {
        let p = MultiPoly::from_terms(2, &[(3, &[2, 0]), (-2, &[1, 1]), (5, &[0, 0])]);
        // x ↦ 2y
        let two_y = MultiPoly::var(1, 0).scale(&int(2));
        let c = p.compose(&[two_y, MultiPoly::var(1, 0)]);
        assert_eq!(c, MultiPoly::from_terms(1, &[(8, &[2]), (5, &[0])]));
        let s = p.substitute(1, &int(3));
        assert_eq!(s.eval(&[int(2), int(100)]), int(12 - 12 + 5));
        let coeffs = p.coefficients_in(0);
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[1], MultiPoly::from_terms(2, &[(-2, &[0, 1])]));
        let d = MultiPoly::from_terms(2, &[(4, &[2, 1]), (1, &[3, 0])]).divide_by_var_power(0, 2).unwrap();
        assert_eq!(d, MultiPoly::from_terms(2, &[(4, &[0, 1]), (1, &[1, 0])]));
        assert!(p.divide_by_var_power(0, 1).is_none());
        assert!((p.eval_f64(&[0.5, 0.25]) - 5.5).abs() < 1e-15);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("17/36"), Some(rat(17, 36)));
        assert_eq!(parse_rat("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rat("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rat("3"), Some(int(3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
        assert_eq!(rat_string(&rat(-14, 25)), "-14/25");
        assert_eq!(rat_string(&int(4)), "4");
    }
}
