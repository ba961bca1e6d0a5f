//! Second-order forward-mode jets over the half-plane coordinates (ρ, z).
//!
//! A [`Jet2`] carries a value together with its first and second partial
//! derivatives with respect to ρ and z. Arithmetic on jets propagates
//! derivatives exactly (to rounding), which is what the closed-form
//! derivative mode of `ScalarField2D` is built on: metric families are
//! written once as jet-valued expressions and every ∂ρ, ∂z, ∂ρρ, ∂ρz, ∂zz
//! needed by curvature and mass formulas comes out of the same evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value plus first and second partials with respect to (ρ, z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    /// function value
    pub v: f64,
    /// ∂/∂ρ
    pub dr: f64,
    /// ∂/∂z
    pub dz: f64,
    /// ∂²/∂ρ²
    pub drr: f64,
    /// ∂²/∂ρ∂z
    pub drz: f64,
    /// ∂²/∂z²
    pub dzz: f64,
}

impl Jet2 {
    /// A constant: all derivatives zero.
    pub const fn cst(v: f64) -> Self {
        Jet2 { v, dr: 0.0, dz: 0.0, drr: 0.0, drz: 0.0, dzz: 0.0 }
    }

    /// The coordinate ρ as a jet (∂ρ/∂ρ = 1).
    pub const fn var_rho(v: f64) -> Self {
        Jet2 { v, dr: 1.0, dz: 0.0, drr: 0.0, drz: 0.0, dzz: 0.0 }
    }

    /// The coordinate z as a jet (∂z/∂z = 1).
    pub const fn var_z(v: f64) -> Self {
        Jet2 { v, dr: 0.0, dz: 1.0, drr: 0.0, drz: 0.0, dzz: 0.0 }
    }

    /// Compose a univariate C² function with this jet given f(v), f'(v), f''(v).
    ///
    /// Standard second-order chain rule:
    ///   (f∘g)_i  = f' g_i
    ///   (f∘g)_ij = f'' g_i g_j + f' g_ij
    pub fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            v: f0,
            dr: f1 * self.dr,
            dz: f1 * self.dz,
            drr: f2 * self.dr * self.dr + f1 * self.drr,
            drz: f2 * self.dr * self.dz + f1 * self.drz,
            dzz: f2 * self.dz * self.dz + f1 * self.dzz,
        }
    }

    pub fn ln(self) -> Self {
        let v = self.v;
        self.lift(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn recip(self) -> Self {
        let v = self.v;
        self.lift(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    /// Integer power by exponentiation of the value with analytic derivatives.
    pub fn powi(self, n: i32) -> Self {
        let v = self.v;
        let f0 = v.powi(n);
        let f1 = f64::from(n) * v.powi(n - 1);
        let f2 = f64::from(n) * f64::from(n - 1) * v.powi(n - 2);
        self.lift(f0, f1, f2)
    }

    /// |x| with the convention sign(0) = 0 (derivatives of the kink are
    /// taken from the side the value lies on; exact zero keeps zero jets).
    pub fn abs(self) -> Self {
        if self.v > 0.0 {
            self
        } else if self.v < 0.0 {
            -self
        } else {
            Jet2::cst(0.0)
        }
    }

    /// Squared jet, slightly cheaper and symmetric.
    pub fn sq(self) -> Self {
        self * self
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            dr: self.dr + o.dr,
            dz: self.dz + o.dz,
            drr: self.drr + o.drr,
            drz: self.drz + o.drz,
            dzz: self.dzz + o.dzz,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - o.v,
            dr: self.dr - o.dr,
            dz: self.dz - o.dz,
            drr: self.drr - o.drr,
            drz: self.drz - o.drz,
            dzz: self.dzz - o.dzz,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            dr: -self.dr,
            dz: -self.dz,
            drr: -self.drr,
            drz: -self.drz,
            dzz: -self.dzz,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        // Leibniz to second order.
        Jet2 {
            v: self.v * o.v,
            dr: self.dr * o.v + self.v * o.dr,
            dz: self.dz * o.v + self.v * o.dz,
            drr: self.drr * o.v + 2.0 * self.dr * o.dr + self.v * o.drr,
            drz: self.drz * o.v + self.dr * o.dz + self.dz * o.dr + self.v * o.drz,
            dzz: self.dzz * o.v + 2.0 * self.dz * o.dz + self.v * o.dzz,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    // division of jets is composition with the reciprocal jet
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        Jet2 { v: self.v + c, ..self }
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: f64) -> Jet2 {
        Jet2 { v: self.v - c, ..self }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2 {
            v: self.v * c,
            dr: self.dr * c,
            dz: self.dz * c,
            drr: self.drr * c,
            drz: self.drz * c,
            dzz: self.dzz * c,
        }
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, c: f64) -> Jet2 {
        self * (1.0 / c)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, j: Jet2) -> Jet2 {
        j + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, j: Jet2) -> Jet2 {
        -j + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j * self
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, j: Jet2) -> Jet2 {
        j.recip() * self
    }
}
