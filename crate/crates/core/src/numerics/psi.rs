use std::fmt;
use std::str::FromStr;

use super::{lit, Real};

/// Named winding functions `ψ(t, I)` with `ψ(2π, I) − ψ(0, I) = 2πq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Psi {
    /// `q·t`
    Linear,
    /// `q·t + I·sin t`
    ISin,
    /// `q·t + 0.3·sin t`
    Sin03,
    /// `q·t + I²·cos t`
    I2Cos,
}

impl Psi {
    pub const ALL: [Psi; 4] = [Psi::Linear, Psi::ISin, Psi::Sin03, Psi::I2Cos];

    pub fn name(self) -> &'static str {
        match self {
            Psi::Linear => "linear",
            Psi::ISin => "isin",
            Psi::Sin03 => "sin03",
            Psi::I2Cos => "i2cos",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Psi::Linear => "q*t",
            Psi::ISin => "q*t + I*sin(t)",
            Psi::Sin03 => "q*t + 0.3*sin(t)",
            Psi::I2Cos => "q*t + I^2*cos(t)",
        }
    }

    pub fn value<T: Real>(self, q: T, t: T, i: T) -> T {
        q * t
            + match self {
                Psi::Linear => T::zero(),
                Psi::ISin => i * t.sin(),
                Psi::Sin03 => lit::<T>(0.3) * t.sin(),
                Psi::I2Cos => i * i * t.cos(),
            }
    }

    /// `∂ψ/∂t`
    pub fn dt<T: Real>(self, q: T, t: T, i: T) -> T {
        q + match self {
            Psi::Linear => T::zero(),
            Psi::ISin => i * t.cos(),
            Psi::Sin03 => lit::<T>(0.3) * t.cos(),
            Psi::I2Cos => -(i * i * t.sin()),
        }
    }

    /// `∂²ψ/∂I∂t`
    pub fn dti<T: Real>(self, _q: T, t: T, i: T) -> T {
        match self {
            Psi::Linear | Psi::Sin03 => T::zero(),
            Psi::ISin => t.cos(),
            Psi::I2Cos => -(lit::<T>(2.0) * i * t.sin()),
        }
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Psi {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Psi::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Psi::ALL.iter().map(|p| p.name()).collect();
            format!("unknown psi `{s}` (expected one of {})", names.join(", "))
        })
    }
}
