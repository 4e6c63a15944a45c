//! Scalar abstractions for the generating-function algebra: plain floats,
//! dual numbers (forward derivative in s), and truncated Laurent series in
//! y = e^{-s/2} (for extracting spectral weights). A truncated polynomial in
//! the generating variable w is generic over these scalars, so one
//! implementation of the generating-function iteration serves numeric
//! evaluation, s-differentiation, and coefficient extraction.

/// Field-like scalar for series arithmetic.
pub trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn scale(&self, k: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        1.0 / self
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
}

/// First-order dual number v + d eps for forward differentiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }
    pub fn variable(v: f64) -> Self {
        Self { v, d: 1.0 }
    }
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self {
            v: e,
            d: self.d * e,
        }
    }
    pub fn cosh(self) -> Self {
        Self {
            v: self.v.cosh(),
            d: self.d * self.v.sinh(),
        }
    }
    pub fn sinh(self) -> Self {
        Self {
            v: self.v.sinh(),
            d: self.d * self.v.cosh(),
        }
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Self { v: 0.0, d: 0.0 }
    }
    fn one() -> Self {
        Self { v: 1.0, d: 0.0 }
    }
    fn from_f64(v: f64) -> Self {
        Self::constant(v)
    }
    fn add(&self, rhs: &Self) -> Self {
        Self {
            v: self.v + rhs.v,
            d: self.d + rhs.d,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self {
            v: self.v - rhs.v,
            d: self.d - rhs.d,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self {
            v: self.v * rhs.v,
            d: self.v * rhs.d + self.d * rhs.v,
        }
    }
    fn neg(&self) -> Self {
        Self {
            v: -self.v,
            d: -self.d,
        }
    }
    fn inv(&self) -> Self {
        Self {
            v: 1.0 / self.v,
            d: -self.d / (self.v * self.v),
        }
    }
    fn scale(&self, k: f64) -> Self {
        Self {
            v: self.v * k,
            d: self.d * k,
        }
    }
}

/// Truncated Laurent series sum_i co[i] y^{off + i}, with exponents above
/// `pmax` discarded. Exact scalars (zero, one, from_f64) carry
/// pmax = i32::MAX; binary operations keep the tighter bound.
#[derive(Debug, Clone)]
pub struct Laurent {
    pub off: i32,
    pub co: Vec<f64>,
    pub pmax: i32,
}

impl Laurent {
    /// The monomial c y^k.
    pub fn monomial(c: f64, k: i32, pmax: i32) -> Self {
        Self {
            off: k,
            co: vec![c],
            pmax,
        }
        .trimmed()
    }

    /// Coefficient of y^k.
    pub fn coeff(&self, k: i32) -> f64 {
        let i = k - self.off;
        if i < 0 || i as usize >= self.co.len() {
            0.0
        } else {
            self.co[i as usize]
        }
    }

    fn trimmed(mut self) -> Self {
        // drop exponents above pmax
        if self.pmax < i32::MAX {
            let keep = (self.pmax - self.off + 1).max(0) as usize;
            self.co.truncate(keep);
        }
        // drop leading zeros to keep `off` meaningful
        let lead = self.co.iter().take_while(|c| **c == 0.0).count();
        if lead == self.co.len() {
            self.co.clear();
            self.off = 0;
        } else if lead > 0 {
            self.co.drain(..lead);
            self.off += lead as i32;
        }
        self
    }
}

impl Scalar for Laurent {
    fn zero() -> Self {
        Self {
            off: 0,
            co: vec![],
            pmax: i32::MAX,
        }
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::zero()
        } else {
            Self {
                off: 0,
                co: vec![v],
                pmax: i32::MAX,
            }
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.co.is_empty() {
            let mut r = rhs.clone();
            r.pmax = r.pmax.min(self.pmax);
            return r.trimmed();
        }
        if rhs.co.is_empty() {
            let mut r = self.clone();
            r.pmax = r.pmax.min(rhs.pmax);
            return r.trimmed();
        }
        let off = self.off.min(rhs.off);
        let top = (self.off + self.co.len() as i32).max(rhs.off + rhs.co.len() as i32);
        let mut co = vec![0.0; (top - off) as usize];
        for (i, c) in self.co.iter().enumerate() {
            co[(self.off - off) as usize + i] += c;
        }
        for (i, c) in rhs.co.iter().enumerate() {
            co[(rhs.off - off) as usize + i] += c;
        }
        Self {
            off,
            co,
            pmax: self.pmax.min(rhs.pmax),
        }
        .trimmed()
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let pmax = self.pmax.min(rhs.pmax);
        if self.co.is_empty() || rhs.co.is_empty() {
            return Self {
                off: 0,
                co: vec![],
                pmax,
            };
        }
        let off = self.off + rhs.off;
        let len = if pmax == i32::MAX {
            self.co.len() + rhs.co.len() - 1
        } else {
            (self.co.len() + rhs.co.len() - 1).min(((pmax - off + 1).max(0)) as usize)
        };
        let mut co = vec![0.0; len];
        for (i, a) in self.co.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in rhs.co.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                co[i + j] += a * b;
            }
        }
        Self { off, co, pmax }.trimmed()
    }
    fn neg(&self) -> Self {
        Self {
            off: self.off,
            co: self.co.iter().map(|c| -c).collect(),
            pmax: self.pmax,
        }
    }
    /// Series inverse: factor the leading monomial c0 y^off and invert the
    /// remaining unit series. Requires a nonzero leading coefficient and a
    /// finite truncation bound (otherwise the inverse is an infinite series).
    fn inv(&self) -> Self {
        assert!(
            !self.co.is_empty() && self.co[0] != 0.0,
            "cannot invert a Laurent series with zero leading coefficient"
        );
        assert!(
            self.pmax < i32::MAX || self.co.len() == 1,
            "inverse of a non-monomial series requires a truncation bound"
        );
        let off = -self.off;
        if self.co.len() == 1 {
            return Self {
                off,
                co: vec![1.0 / self.co[0]],
                pmax: self.pmax,
            };
        }
        let len = ((self.pmax - off + 1).max(1)) as usize;
        let c0 = self.co[0];
        let mut co = vec![0.0; len];
        co[0] = 1.0 / c0;
        for k in 1..len {
            let mut acc = 0.0;
            for j in 1..=k.min(self.co.len() - 1) {
                acc += self.co[j] * co[k - j];
            }
            co[k] = -acc / c0;
        }
        Self {
            off,
            co,
            pmax: self.pmax,
        }
        .trimmed()
    }
    fn scale(&self, k: f64) -> Self {
        Self {
            off: self.off,
            co: self.co.iter().map(|c| c * k).collect(),
            pmax: self.pmax,
        }
    }
}

/// Polynomial in the generating variable w, truncated after w^order.
#[derive(Debug, Clone)]
pub struct Poly<S: Scalar> {
    /// co[k] is the w^k coefficient; fixed length order + 1.
    pub co: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn constant(c: S, order: usize) -> Self {
        let mut co = vec![S::zero(); order + 1];
        co[0] = c;
        Self { co }
    }

    pub fn order(&self) -> usize {
        self.co.len() - 1
    }

    /// Multiply by w (shift up one order, dropping the top coefficient).
    pub fn times_w(&self) -> Self {
        let mut co = vec![S::zero(); self.co.len()];
        co[1..].clone_from_slice(&self.co[..self.co.len() - 1]);
        Self { co }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.co.len(), rhs.co.len());
        Self {
            co: self
                .co
                .iter()
                .zip(&rhs.co)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.co.len(), rhs.co.len());
        Self {
            co: self
                .co
                .iter()
                .zip(&rhs.co)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.co.len(), rhs.co.len());
        let n = self.co.len();
        let mut co = vec![S::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                co[i + j] = co[i + j].add(&self.co[i].mul(&rhs.co[j]));
            }
        }
        Self { co }
    }

    /// Multiplicative inverse as a truncated power series (requires an
    /// invertible w^0 coefficient).
    pub fn inverse(&self) -> Self {
        let n = self.co.len();
        let r0 = self.co[0].inv();
        let mut co = vec![S::zero(); n];
        co[0] = r0.clone();
        for k in 1..n {
            let mut acc = S::zero();
            for j in 1..=k {
                acc = acc.add(&self.co[j].mul(&co[k - j]));
            }
            co[k] = r0.mul(&acc).neg();
        }
        Self { co }
    }
}
