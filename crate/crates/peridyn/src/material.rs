//! Influence function, bond potential, and the material constants derived
//! from them.
//!
//! The shipped influence is `J(r) = 2 r exp(-r^2 / alpha)` with compact
//! support on `[0, 1]`, and the shipped potential is
//! `f(r) = amplitude (1 - exp(-decay r))`: positive, smooth, concave, with a
//! horizontal asymptote at `amplitude`. Both are behind traits so tests can
//! inject other members of the admissible class.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_gauss_kronrod;

/// Relative tolerance for the moment integrals; these feed stability bounds
/// and must sit far below every experiment tolerance.
const MOMENT_REL_TOL: f64 = 1e-10;

/// Weight `J` modulating bond force with (rescaled) bond length.
///
/// Contract: `eval(r) >= 0`, and `eval(r) == 0` exactly for `r > 1`.
pub trait InfluenceFunction: Send + Sync {
    fn eval(&self, r: f64) -> f64;

    /// Maximum of `J` over `(0, 1]`. The default scans and refines by
    /// golden-section search; implementors with a closed form override it.
    fn max(&self) -> f64 {
        let n = 4096usize;
        let mut best = 0.0_f64;
        let mut best_i = 1usize;
        for i in 1..=n {
            let v = self.eval(i as f64 / n as f64);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let lo = (best_i.saturating_sub(1)) as f64 / n as f64;
        let hi = ((best_i + 1).min(n)) as f64 / n as f64;
        golden_max(|r| self.eval(r), lo, hi).max(best)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = 0.618_033_988_749_894_8;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// `J(r) = 2 r exp(-r^2 / alpha)` on `[0, 1]`, zero beyond.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialInfluence {
    alpha: f64,
}

impl ExponentialInfluence {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidMaterial(format!(
                "influence shape parameter must be positive and finite, got {alpha}"
            )));
        }
        Ok(ExponentialInfluence { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl InfluenceFunction for ExponentialInfluence {
    fn eval(&self, r: f64) -> f64 {
        if r > 1.0 {
            0.0
        } else {
            2.0 * r * (-r * r / self.alpha).exp()
        }
    }

    fn max(&self) -> f64 {
        // stationary point of 2 r exp(-r^2/alpha) is r = sqrt(alpha/2);
        // when it falls outside the support the max sits at r = 1
        let r_star = (self.alpha / 2.0).sqrt();
        if r_star <= 1.0 {
            2.0 * r_star * (-0.5_f64).exp()
        } else {
            2.0 * (-1.0 / self.alpha).exp()
        }
    }
}

/// Two-point bond potential `f`: positive, smooth, concave on `r > 0`,
/// `f(0) = 0`, with a finite horizontal asymptote.
pub trait BondPotential: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn deriv(&self, r: f64) -> f64;
    fn second_deriv(&self, r: f64) -> f64;

    /// Closed-form root of `f'(r^2) + 2 r^2 f''(r^2) = 0` when one is known;
    /// generic potentials fall back to bracketing.
    fn softening_radius(&self) -> Option<f64> {
        None
    }
}

/// `f(r) = amplitude (1 - exp(-decay r))`.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialPotential {
    amplitude: f64,
    decay: f64,
}

impl ExponentialPotential {
    pub fn new(amplitude: f64, decay: f64) -> Result<Self> {
        if amplitude <= 0.0 || decay <= 0.0 || amplitude.is_nan() || decay.is_nan() {
            return Err(Error::InvalidMaterial(format!(
                "potential amplitude and decay must be positive, got {amplitude}, {decay}"
            )));
        }
        Ok(ExponentialPotential { amplitude, decay })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }
}

impl BondPotential for ExponentialPotential {
    fn value(&self, r: f64) -> f64 {
        self.amplitude * (1.0 - (-self.decay * r).exp())
    }

    fn deriv(&self, r: f64) -> f64 {
        self.amplitude * self.decay * (-self.decay * r).exp()
    }

    fn second_deriv(&self, r: f64) -> f64 {
        -self.amplitude * self.decay * self.decay * (-self.decay * r).exp()
    }

    fn softening_radius(&self) -> Option<f64> {
        // exp(-b r^2)(1 - 2 b r^2) = 0  =>  r = 1/sqrt(2 b)
        Some(1.0 / (2.0 * self.decay).sqrt())
    }
}

fn rescale(inner: Arc<dyn BondPotential>, length: f64, modulus: f64) -> RescaledPotential {
    RescaledPotential {
        inner,
        length,
        modulus,
    }
}

/// Potential rescaled to nondimensional form: `f_bar(r) = f(L r)/(L EC)`,
/// so `f_bar'(r) = f'(L r)/EC` and the rescaled modulus is exactly one.
struct RescaledPotential {
    inner: Arc<dyn BondPotential>,
    length: f64,
    modulus: f64,
}

impl BondPotential for RescaledPotential {
    fn value(&self, r: f64) -> f64 {
        self.inner.value(self.length * r) / (self.length * self.modulus)
    }

    fn deriv(&self, r: f64) -> f64 {
        self.inner.deriv(self.length * r) / self.modulus
    }

    fn second_deriv(&self, r: f64) -> f64 {
        self.length * self.inner.second_deriv(self.length * r) / self.modulus
    }

    fn softening_radius(&self) -> Option<f64> {
        // argument of f scales by L, so the root scales by 1/sqrt(L)
        self.inner.softening_radius().map(|r| r / self.length.sqrt())
    }
}

/// Material data: influence function, bond potential, mass density, and the
/// constants derived from them at construction time.
#[derive(Clone)]
pub struct MaterialModel {
    influence: Arc<dyn InfluenceFunction>,
    potential: Arc<dyn BondPotential>,
    density: f64,
    first_moment: f64,
    influence_max: f64,
}

impl std::fmt::Debug for MaterialModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaterialModel")
            .field("density", &self.density)
            .field("first_moment", &self.first_moment)
            .field("influence_max", &self.influence_max)
            .field("elastic_modulus", &self.elastic_modulus())
            .finish()
    }
}

impl MaterialModel {
    pub fn new(
        influence: Arc<dyn InfluenceFunction>,
        potential: Arc<dyn BondPotential>,
        density: f64,
    ) -> Result<Self> {
        if density <= 0.0 || !density.is_finite() {
            return Err(Error::InvalidMaterial(format!(
                "density must be positive and finite, got {density}"
            )));
        }
        // the linearized force integrand carries J(r)/r; J(0) > 0 would make
        // it singular, so such influences are rejected here
        if influence.eval(0.0).abs() > 1e-14 {
            return Err(Error::InvalidMaterial(
                "influence function must vanish at zero bond length".into(),
            ));
        }
        let fp0 = potential.deriv(0.0);
        if fp0 <= 0.0 || fp0.is_nan() {
            return Err(Error::InvalidMaterial(format!(
                "potential must have positive slope at zero, got f'(0) = {fp0}"
            )));
        }
        let first_moment =
            adaptive_gauss_kronrod(&|r| 2.0 * influence.eval(r) * r, 0.0, 1.0, MOMENT_REL_TOL);
        if first_moment <= 0.0 || first_moment.is_nan() {
            return Err(Error::InvalidMaterial(
                "influence function has nonpositive first moment".into(),
            ));
        }
        let influence_max = influence.max();
        Ok(MaterialModel {
            influence,
            potential,
            density,
            first_moment,
            influence_max,
        })
    }

    /// The nondimensional default: `alpha = 0.4`, `decay = 1`, amplitude
    /// fixed so that `f'(0)` equals the reciprocal first moment, density 1.
    /// This makes the elastic modulus and the wave speed exactly one.
    pub fn default_nondimensional() -> Self {
        Self::exponential(0.4, None, 1.0, 1.0).expect("default parameters are valid")
    }

    /// Exponential-family model. When `amplitude` is `None` it is chosen as
    /// `1 / (decay * first_moment)` so that `f'(0) * first_moment = 1`.
    pub fn exponential(
        alpha: f64,
        amplitude: Option<f64>,
        decay: f64,
        density: f64,
    ) -> Result<Self> {
        let influence = Arc::new(ExponentialInfluence::new(alpha)?);
        let amplitude = match amplitude {
            Some(c) => c,
            None => {
                let m1 = adaptive_gauss_kronrod(
                    &|r| 2.0 * influence.eval(r) * r,
                    0.0,
                    1.0,
                    MOMENT_REL_TOL,
                );
                1.0 / (decay * m1)
            }
        };
        let potential = Arc::new(ExponentialPotential::new(amplitude, decay)?);
        Self::new(influence, potential, density)
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// `J(r)`; total on `r >= 0`, identically zero beyond the unit support.
    pub fn influence_eval(&self, r: f64) -> f64 {
        self.influence.eval(r)
    }

    /// `max_{0 < r <= 1} J(r)`.
    pub fn influence_max(&self) -> f64 {
        self.influence_max
    }

    /// First moment `2 * integral_0^1 J(r) r dr`.
    pub fn influence_first_moment(&self) -> f64 {
        self.first_moment
    }

    pub fn potential_value(&self, r: f64) -> f64 {
        self.potential.value(r)
    }

    /// `f'(r)`: strictly positive and strictly decreasing for the admissible
    /// class.
    pub fn potential_deriv(&self, r: f64) -> f64 {
        self.potential.deriv(r)
    }

    pub fn potential_second_deriv(&self, r: f64) -> f64 {
        self.potential.second_deriv(r)
    }

    /// Young's modulus of the local limit:
    /// `f'(0) * 2 integral_0^1 J(z) z dz`.
    pub fn elastic_modulus(&self) -> f64 {
        self.potential.deriv(0.0) * self.first_moment
    }

    /// Wave speed of the equivalent local medium.
    pub fn wave_speed(&self) -> f64 {
        (self.elastic_modulus() / self.density).sqrt()
    }

    /// Critical strain of a bond of the given length: `r_bar / sqrt(length)`
    /// where `r_bar` solves `f'(r^2) + 2 r^2 f''(r^2) = 0`.
    pub fn critical_strain(&self, bond_length: f64) -> Result<f64> {
        if bond_length <= 0.0 || bond_length.is_nan() {
            return Err(Error::Precondition(format!(
                "bond length must be positive, got {bond_length}"
            )));
        }
        let r_bar = match self.potential.softening_radius() {
            Some(r) => r,
            None => self.bracketed_softening_radius()?,
        };
        Ok(r_bar / bond_length.sqrt())
    }

    fn bracketed_softening_radius(&self) -> Result<f64> {
        let g = |r: f64| {
            let r2 = r * r;
            self.potential.deriv(r2) + 2.0 * r2 * self.potential.second_deriv(r2)
        };
        // g(0+) = f'(0) > 0; expand until the sign flips
        let mut lo = 1e-8;
        let mut hi = lo;
        let mut found = false;
        while hi < 1e8 {
            hi *= 2.0;
            if g(hi) < 0.0 {
                found = true;
                break;
            }
            lo = hi;
        }
        if !found {
            return Err(Error::RootFind(
                "no softening point of the bond potential bracketed in (0, 1e8)".into(),
            ));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Rescales to the nondimensional model on a bar of the given length.
    ///
    /// Returns the rescaled model (unit density, unit elastic modulus) and
    /// the time scale `T0 = L sqrt(rho / EC)` that maps nondimensional time
    /// back to seconds.
    pub fn nondimensionalize(&self, length_scale: f64) -> Result<(MaterialModel, f64)> {
        if length_scale <= 0.0 || length_scale.is_nan() {
            return Err(Error::Precondition(format!(
                "length scale must be positive, got {length_scale}"
            )));
        }
        let modulus = self.elastic_modulus();
        let time_scale = length_scale * (self.density / modulus).sqrt();
        let potential = Arc::new(rescale(self.potential.clone(), length_scale, modulus));
        let model = MaterialModel::new(self.influence.clone(), potential, 1.0)?;
        Ok((model, time_scale))
    }
}
