//! Second-order forward-mode automatic differentiation in three variables.
//!
//! A [`Jet`] carries a value, its gradient and its (symmetric) Hessian with
//! respect to `(x, y, z)`. Arithmetic propagates all three exactly, so a
//! scalar potential written once in terms of jets yields the first and second
//! partial derivatives needed for displacements and their gradients.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Hessian storage order: xx, xy, xz, yy, yz, zz.
const SYM: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub g: [f64; 3],
    h: [f64; 6],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 3], h: [0.0; 6] }
    }

    /// The coordinate function `x_k` evaluated at `v`.
    pub fn variable(v: f64, k: usize) -> Self {
        let mut g = [0.0; 3];
        g[k] = 1.0;
        Self { v, g, h: [0.0; 6] }
    }

    /// The three coordinate jets at a point.
    pub fn coordinates(p: [f64; 3]) -> [Self; 3] {
        [Self::variable(p[0], 0), Self::variable(p[1], 1), Self::variable(p[2], 2)]
    }

    /// Second partial `∂_a ∂_b`.
    pub fn hess(&self, a: usize, b: usize) -> f64 {
        self.h[SYM[a][b]]
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    fn chain(&self, f: f64, df: f64, d2f: f64) -> Self {
        let g = self.g.map(|gi| df * gi);
        let mut h = [0.0; 6];
        for a in 0..3 {
            for b in a..3 {
                h[SYM[a][b]] = df * self.h[SYM[a][b]] + d2f * self.g[a] * self.g[b];
            }
        }
        Self { v: f, g, h }
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn ln(&self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }

    pub fn powi(&self, n: i32) -> Self {
        let nf = n as f64;
        self.chain(
            self.v.powi(n),
            nf * self.v.powi(n - 1),
            nf * (nf - 1.0) * self.v.powi(n - 2),
        )
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            g: std::array::from_fn(|i| self.g[i] + o.g[i]),
            h: std::array::from_fn(|i| self.h[i] + o.h[i]),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            g: std::array::from_fn(|i| self.g[i] - o.g[i]),
            h: std::array::from_fn(|i| self.h[i] - o.h[i]),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut h = [0.0; 6];
        for a in 0..3 {
            for b in a..3 {
                let k = SYM[a][b];
                h[k] = self.h[k] * o.v + self.v * o.h[k] + self.g[a] * o.g[b] + self.g[b] * o.g[a];
            }
        }
        Jet {
            v: self.v * o.v,
            g: std::array::from_fn(|i| self.g[i] * o.v + self.v * o.g[i]),
            h,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet {
            v: self.v * c,
            g: self.g.map(|x| x * c),
            h: self.h.map(|x| x * c),
        }
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, j: Jet) -> Jet {
        j * self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, c: f64) -> Jet {
        self * (1.0 / c)
    }
}
