use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BergmanError, check_weight};
use crate::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    DiscToHalfPlane,
    HalfPlaneToDisc,
}

/// `(2/(z+i))^s = exp(s (ln 2 - Log(z+i)))`.
pub fn transport_factor(z: Complex64, s: f64) -> Complex64 {
    (s * (Complex64::new(std::f64::consts::LN_2, 0.0) - (z + Complex64::i()).ln())).exp()
}

/// Unitary transport between the disc and half-plane models:
/// `f̌(z) = (2/(z+i))^s f((z-i)/(z+i))` and its inverse.
pub fn cayley_transport<'a>(
    f: Evaluator<'a>,
    s: f64,
    direction: Direction,
) -> Result<Evaluator<'a>, BergmanError> {
    check_weight(s)?;
    let i = Complex64::i();
    Ok(match direction {
        Direction::DiscToHalfPlane => {
            Box::new(move |z: Complex64| transport_factor(z, s) * f((z - i) / (z + i)))
        }
        Direction::HalfPlaneToDisc => Box::new(move |w: Complex64| {
            let z = i * (1.0 + w) / (1.0 - w);
            f(z) / transport_factor(z, s)
        }),
    })
}
