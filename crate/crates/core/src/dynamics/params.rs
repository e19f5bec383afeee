use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;

/// Physical constants of the shell and the core.
///
/// Field names follow the usual mechanics shorthand: `ms`/`mc` are the
/// sphere and core masses, `big_r` the shell radius and `r` the distance
/// from the shell centre to the core centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobotParams {
    /// Gravitational acceleration (m/s²).
    pub g: f64,
    /// Shell mass (kg).
    pub ms: f64,
    /// Core mass (kg).
    pub mc: f64,
    /// Shell radius (m).
    #[serde(alias = "R")]
    pub big_r: f64,
    /// Core orbit radius (m).
    pub r: f64,
    /// Shell moment of inertia (kg·m²).
    pub is: f64,
    /// Core moment of inertia (kg·m²).
    pub ic: f64,
    /// Viscous friction coefficient.
    pub zeta: f64,
}

impl Default for RobotParams {
    /// Desk-scale prototype: 3 kg shell of radius 0.36 m, 1 kg core on a
    /// 0.317 m orbit, ζ = 0.8.
    fn default() -> Self {
        Self { g: 9.8, ms: 3.0, mc: 1.0, big_r: 0.36, r: 0.317, is: 0.2592, ic: 0.0402, zeta: 0.8 }
    }
}

impl RobotParams {
    /// Builds a parameter set with the core mass fixed at one third of the
    /// shell mass. Use [`RobotParams::with_core_mass`] to override.
    pub fn new(g: f64, ms: f64, big_r: f64, r: f64, is: f64, ic: f64, zeta: f64) -> Result<Self, DynamicsError> {
        let params = Self { g, ms, mc: ms / 3.0, big_r, r, is, ic, zeta };
        params.validate()?;
        Ok(params)
    }

    /// Same geometry with inertias from the thin-shell and solid-sphere
    /// formulas.
    pub fn from_geometry(g: f64, ms: f64, big_r: f64, r: f64, zeta: f64) -> Result<Self, DynamicsError> {
        let mc = ms / 3.0;
        Self::new(g, ms, big_r, r, inertia_sphere(ms, big_r)?, inertia_core(mc, r)?, zeta)
    }

    pub fn with_core_mass(mut self, mc: f64) -> Self {
        self.mc = mc;
        self
    }

    pub fn with_zeta(mut self, zeta: f64) -> Self {
        self.zeta = zeta;
        self
    }

    /// Checks the field invariants. A zero core mass is accepted so the
    /// bare-shell limit can be studied.
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let fields = [
            ("g", self.g),
            ("ms", self.ms),
            ("mc", self.mc),
            ("big_r", self.big_r),
            ("r", self.r),
            ("is", self.is),
            ("ic", self.ic),
            ("zeta", self.zeta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(DynamicsError::InvalidParams(format!("{name} is not finite")));
            }
        }
        for (name, value) in
            [("g", self.g), ("ms", self.ms), ("big_r", self.big_r), ("r", self.r), ("is", self.is), ("ic", self.ic)]
        {
            if value <= 0.0 {
                return Err(DynamicsError::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        if self.mc < 0.0 {
            return Err(DynamicsError::InvalidParams(format!("mc must be non-negative, got {}", self.mc)));
        }
        if self.r >= self.big_r {
            return Err(DynamicsError::InvalidParams(format!(
                "core orbit radius r = {} must be smaller than shell radius R = {}",
                self.r, self.big_r
            )));
        }
        if self.zeta < 0.0 {
            return Err(DynamicsError::InvalidParams(format!("zeta must be non-negative, got {}", self.zeta)));
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedConstants, DynamicsError> {
        validate_and_derive(self)
    }
}

/// Thin spherical shell: `I = 2/3 · M · R²`.
pub fn inertia_sphere(ms: f64, big_r: f64) -> Result<f64, DynamicsError> {
    check_mass("ms", ms)?;
    check_length("big_r", big_r)?;
    Ok(2.0 / 3.0 * ms * big_r * big_r)
}

/// Solid sphere evaluated at the orbit radius: `I = 2/5 · m · r²`.
pub fn inertia_core(mc: f64, r: f64) -> Result<f64, DynamicsError> {
    check_mass("mc", mc)?;
    check_length("r", r)?;
    Ok(2.0 / 5.0 * mc * r * r)
}

fn check_mass(name: &str, value: f64) -> Result<(), DynamicsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::InvalidParams(format!("{name} must be positive, got {value}")))
    }
}

// A zero length is allowed and collapses the inertia to zero.
fn check_length(name: &str, value: f64) -> Result<(), DynamicsError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::InvalidParams(format!("{name} must be non-negative, got {value}")))
    }
}

/// The scalar shorthands shared by every equation of motion.
///
/// `a`, `b`, `d`, `h` are constants; the phase-dependent terms
/// `A(φ)`, `B(φ)` and `E(φ) = A·D − B²` are exposed as methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub h: f64,
}

impl DerivedConstants {
    pub fn big_a(&self, phi: f64) -> f64 {
        self.a + 2.0 * self.b * phi.cos()
    }

    pub fn big_b(&self, phi: f64) -> f64 {
        self.d + self.b * phi.cos()
    }

    pub fn big_e(&self, phi: f64) -> f64 {
        let big_b = self.big_b(phi);
        self.big_a(phi) * self.d - big_b * big_b
    }

    /// `E(φ)` expands to `D(a − D) − b²cos²φ`, so its minimum over the
    /// circle sits at `cos²φ = 1`.
    pub fn min_big_e(&self) -> f64 {
        self.d * (self.a - self.d) - self.b * self.b
    }
}

pub fn validate_and_derive(params: &RobotParams) -> Result<DerivedConstants, DynamicsError> {
    params.validate()?;
    let RobotParams { g, ms, mc, big_r, r, is, ic, .. } = *params;
    let consts = DerivedConstants {
        a: ms * big_r * big_r + is + mc * big_r * big_r + ic + mc * r * r,
        b: mc * big_r * r,
        d: ic + mc * r * r,
        h: mc * g * r,
    };
    let e_min = consts.min_big_e();
    if !(e_min > 0.0) {
        return Err(DynamicsError::SingularMassMatrix { det: e_min, phase: 0.0 });
    }
    Ok(consts)
}
