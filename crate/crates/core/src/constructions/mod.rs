//! Recognizers built as machine specifications, each bundled with the
//! membership predicate it should decide and the bounds it is meant to meet.

mod counter;
mod gadgets;
mod power_eq;
mod stochastic;

use serde::Serialize;

pub use counter::{power_eq_linear_spec, upower_spec};
pub use gadgets::{coin, measure, reset, rotate};
pub use power_eq::{phase_spec, power_eq_spec, theorem1_spec};
pub use stochastic::{stochastic_acceptance, stochastic_spec, StochasticAcceptance};

use crate::languages::{
    log8_exact, power_eq_l_member, power_eq_parse, theta_of, upower_l_member, EncodedAngle, LanguageOracle,
    NaturalSet,
};
use crate::machine::MachineSpec;
use crate::real::Real;
use crate::Result;

/// The language a recognizer is meant to decide.
#[derive(Clone, Debug)]
pub enum Reference {
    PowerEq,
    PowerEqL(LanguageOracle),
    /// The rotation phase alone: only inputs with 8^j a's (j ≥ 1) are
    /// classified, as member iff Σ*(j) ∈ L.
    Phase(LanguageOracle),
    Upower(NaturalSet),
}

impl Reference {
    pub fn member(&self, w: &str) -> Result<bool> {
        match self {
            Reference::PowerEq => Ok(power_eq_parse(w).member),
            Reference::PowerEqL(o) => power_eq_l_member(w, o),
            Reference::Phase(o) => match phase_index(w) {
                Some(j) => o.member_at(j),
                None => Ok(false),
            },
            Reference::Upower(s) => upower_l_member(w, s),
        }
    }

    /// Whether the recognizer's bounds say anything about `w`.
    pub fn covers(&self, w: &str) -> bool {
        match self {
            Reference::Phase(_) => phase_index(w).is_some(),
            Reference::Upower(_) => w != "a",
            _ => true,
        }
    }
}

fn phase_index(w: &str) -> Option<usize> {
    let a = w.chars().filter(|&c| c == 'a').count();
    log8_exact(a).filter(|&j| j >= 1).map(|j| j as usize)
}

/// Probability bounds a recognizer claims. `strict` turns both bounds into
/// strict inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimedBounds {
    pub member_accept: Real,
    pub nonmember_reject: Real,
    pub strict: bool,
    /// Claimed growth of the running time, for reports.
    pub runtime: &'static str,
}

impl ClaimedBounds {
    fn new(member_accept: Real, nonmember_reject: Real, strict: bool, runtime: &'static str) -> Self {
        ClaimedBounds { member_accept, nonmember_reject, strict, runtime }
    }

    /// Whether acceptance `p` meets the bound for an input with the given
    /// membership.
    pub fn holds(&self, member: bool, p: &Real) -> bool {
        let (value, bound) =
            if member { (p.clone(), &self.member_accept) } else { (Real::one() - p, &self.nonmember_reject) };
        if self.strict {
            &value > bound
        } else {
            &value >= bound
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecognizerBundle {
    pub spec: MachineSpec,
    pub reference: Reference,
    pub claims: ClaimedBounds,
}

impl RecognizerBundle {
    pub fn holds(&self, w: &str, accept: &Real) -> Result<bool> {
        Ok(self.claims.holds(self.reference.member(w)?, accept))
    }
}

/// Accepts POWER-EQ with certainty, rejects the rest with probability above 2/3.
pub fn build_power_eq() -> RecognizerBundle {
    RecognizerBundle {
        spec: power_eq_spec(),
        reference: Reference::PowerEq,
        claims: ClaimedBounds::new(Real::one(), Real::ratio(2, 3), false, "O(n^4) expected steps"),
    }
}

/// The rotation phase for `oracle`'s angle.
pub fn build_power_eq_l_phase(oracle: &LanguageOracle) -> RecognizerBundle {
    RecognizerBundle {
        spec: phase_spec(&theta_of(oracle).angle()),
        reference: Reference::Phase(oracle.clone()),
        claims: ClaimedBounds::new(Real::ratio(49, 50), Real::ratio(49, 50), false, "n + 3 steps"),
    }
}

/// POWER-EQ(L): the loop machine with the rotation phase at exit.
pub fn build_theorem1(oracle: &LanguageOracle) -> RecognizerBundle {
    RecognizerBundle {
        spec: theorem1_spec(&theta_of(oracle).angle()),
        reference: Reference::PowerEqL(oracle.clone()),
        claims: ClaimedBounds::new(Real::ratio(13, 20), Real::ratio(13, 20), false, "O(n^4) expected steps"),
    }
}

/// The one-way four-qubit machine, with cutpoint 1/2.
pub fn build_stochastic_1qcfa(oracle: &LanguageOracle) -> Result<RecognizerBundle> {
    Ok(RecognizerBundle {
        spec: stochastic_spec(&theta_of(oracle))?,
        reference: Reference::PowerEqL(oracle.clone()),
        claims: ClaimedBounds::new(Real::ratio(1, 2), Real::ratio(1, 2), true, "n + 2 steps"),
    })
}

/// UPOWER(L) with a counter. L is a set of naturals; digit j of the angle
/// belongs to j, so `a` itself (j = 0) is out of reach and always rejected.
pub fn build_2qcca_upower(set: &NaturalSet) -> RecognizerBundle {
    let theta = EncodedAngle::from_bits(&set.positive_part());
    RecognizerBundle {
        spec: upower_spec(&theta.angle()),
        reference: Reference::Upower(set.clone()),
        claims: ClaimedBounds::new(Real::ratio(49, 50), Real::ratio(49, 50), false, "O(n log n) steps"),
    }
}

/// POWER-EQ(L) with a counter in linear time.
pub fn build_2qcca_power_eq_l(oracle: &LanguageOracle) -> RecognizerBundle {
    RecognizerBundle {
        spec: power_eq_linear_spec(&theta_of(oracle).angle()),
        reference: Reference::PowerEqL(oracle.clone()),
        claims: ClaimedBounds::new(Real::ratio(49, 50), Real::ratio(49, 50), false, "O(n) steps"),
    }
}

#[cfg(test)]
mod tests;
