//! The weight space `span{Λ0, ω1, δ}` of affine `sl2`, with its invariant
//! form, translations `t_α`, simple reflections and the diagram automorphism σ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::IndexTriple;
use crate::rational::{self, frac, int, Rational};
use crate::{Error, Result};

/// `l0·Λ0 + w1·ω1 + delta·δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineWeight {
    #[serde(rename = "L0")]
    pub l0: i64,
    pub w1: i64,
    #[serde(with = "crate::rational::serde_text")]
    pub delta: Rational,
}

impl AffineWeight {
    pub fn new(l0: i64, w1: i64, delta: Rational) -> Self {
        Self { l0, w1, delta }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, Rational::zero())
    }

    pub fn lambda0() -> Self {
        Self::new(1, 0, Rational::zero())
    }

    pub fn omega1() -> Self {
        Self::new(0, 1, Rational::zero())
    }

    pub fn delta() -> Self {
        Self::new(0, 0, int(1))
    }

    /// `α1 = 2ω1`
    pub fn alpha1() -> Self {
        Self::new(0, 2, Rational::zero())
    }

    /// `α0 = δ − α1`
    pub fn alpha0() -> Self {
        Self::new(0, -2, int(1))
    }

    /// `Λ1 = σΛ0 = Λ0 + ω1 − δ/4`
    pub fn lambda1() -> Self {
        Self::new(1, 1, frac(-1, 4))
    }

    /// Weyl vector `ρ = ω1 + 2Λ0`.
    pub fn rho() -> Self {
        Self::new(2, 1, Rational::zero())
    }

    /// `⟨μ, α1^∨⟩`
    pub fn pair_h(&self) -> i64 {
        self.w1
    }

    /// `⟨μ, c⟩ = (μ|δ)`
    pub fn pair_c(&self) -> i64 {
        self.l0
    }

    /// `⟨μ, α0^∨⟩ = ⟨μ, c − h⟩`
    pub fn pair_alpha0_coroot(&self) -> i64 {
        self.l0 - self.w1
    }

    /// The normalized invariant form: `(Λ0|δ) = 1`, `(ω1|ω1) = 1/2`, all
    /// other pairings of basis vectors vanish.
    pub fn form(&self, other: &AffineWeight) -> Rational {
        &self.delta * int(other.l0) + &other.delta * int(self.l0) + frac(self.w1 * other.w1, 2)
    }

    pub fn scale(&self, c: i64) -> AffineWeight {
        AffineWeight::new(self.l0 * c, self.w1 * c, &self.delta * int(c))
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight::new(self.l0 + rhs.l0, self.w1 + rhs.w1, &self.delta + &rhs.delta)
    }
}

impl Add for AffineWeight {
    type Output = AffineWeight;
    fn add(self, rhs: AffineWeight) -> AffineWeight {
        &self + &rhs
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: &AffineWeight) -> AffineWeight {
        AffineWeight::new(self.l0 - rhs.l0, self.w1 - rhs.w1, &self.delta - &rhs.delta)
    }
}

impl Sub for AffineWeight {
    type Output = AffineWeight;
    fn sub(self, rhs: AffineWeight) -> AffineWeight {
        &self - &rhs
    }
}

impl Neg for AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        self.scale(-1)
    }
}

impl Mul<AffineWeight> for i64 {
    type Output = AffineWeight;
    fn mul(self, rhs: AffineWeight) -> AffineWeight {
        rhs.scale(self)
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Λ0 + {}ω1 + ({})δ", self.l0, self.w1, rational::format(&self.delta))
    }
}

/// `t_α(μ) = μ + (μ|δ)α − (μ|α)δ − ½(μ|δ)(α|α)δ` with `α = q·α1`.
/// `q` must be a half-integer so that `α` lies in the weight lattice.
pub fn translate(mu: &AffineWeight, q: &Rational) -> Result<AffineWeight> {
    let two_q = q * int(2);
    if !two_q.is_integer() {
        return Err(Error::NotHalfInteger(rational::format(q)));
    }
    let alpha_w1: i64 = two_q
        .to_integer()
        .try_into()
        .map_err(|_| Error::NotHalfInteger(rational::format(q)))?;
    let alpha = AffineWeight::new(0, alpha_w1, Rational::zero());
    let mu_delta = int(mu.pair_c());
    let shift = alpha.scale(mu.pair_c());
    let delta = &mu.delta - mu.form(&alpha) - frac(1, 2) * &mu_delta * alpha.form(&alpha);
    Ok(AffineWeight::new(mu.l0 + shift.l0, mu.w1 + shift.w1, delta))
}

/// `t_{jω1}`; never fails.
pub fn translate_half_steps(mu: &AffineWeight, j: i64) -> AffineWeight {
    translate(mu, &frac(j, 2)).expect("j/2 is a half-integer")
}

/// Simple reflection `s_i`, `i ∈ {0, 1}`.
pub fn reflect(mu: &AffineWeight, i: u8) -> AffineWeight {
    match i {
        1 => mu - &AffineWeight::alpha1().scale(mu.pair_h()),
        0 => mu - &AffineWeight::alpha0().scale(mu.pair_alpha0_coroot()),
        _ => panic!("affine sl2 has simple reflections s0 and s1 only"),
    }
}

/// `σ = s1 ∘ t_{−ω1}`.
pub fn sigma(mu: &AffineWeight) -> AffineWeight {
    reflect(&translate_half_steps(mu, -1), 1)
}

/// Weight of `w_n`: `t_{nα1/2}(Λ0)` for even `n`, `t_{(n−1)α1/2}(Λ1)` for odd `n`.
pub fn weight_of_wn(n: u32) -> AffineWeight {
    let n = n as i64;
    if n % 2 == 0 {
        translate_half_steps(&AffineWeight::lambda0(), n)
    } else {
        translate_half_steps(&AffineWeight::lambda1(), n - 1)
    }
}

/// Closed form `Λ0 + nω1 − (n²/4)δ` of [`weight_of_wn`].
pub fn weight_of_wn_closed(n: u32) -> AffineWeight {
    let n = n as i64;
    AffineWeight::new(1, n, frac(-n * n, 4))
}

/// Weight of `CL(ξ)`: `t_{(k−n/2)α1}(Λ0) − |λ|δ` for even `n` and
/// `t_{(k−(n+1)/2)α1}(Λ1) − |λ|δ` for odd `n`.
pub fn weight_of_cl(xi: &IndexTriple) -> AffineWeight {
    let (n, k) = (xi.n() as i64, xi.k() as i64);
    let base = if n % 2 == 0 {
        translate_half_steps(&AffineWeight::lambda0(), 2 * k - n)
    } else {
        translate_half_steps(&AffineWeight::lambda1(), 2 * k - n - 1)
    };
    &base - &AffineWeight::delta().scale(xi.lam().weight() as i64)
}

/// Weight of the Fock state `|m; μ⟩`: `Λ0 + mω1 − (m²/4 + |μ|)δ`.
pub fn weight_of_state(charge: i64, degree: u32) -> AffineWeight {
    AffineWeight::new(1, charge, -(frac(charge * charge, 4) + int(degree as i64)))
}

/// Splits a level-one weight `Λ0 + mω1 + cδ` into `(m, |μ|)` if it is the weight
/// of some Fock state.
pub fn state_data_of_weight(mu: &AffineWeight) -> Option<(i64, u32)> {
    if mu.l0 != 1 {
        return None;
    }
    let m = mu.w1;
    let depth = -(&mu.delta) - frac(m * m, 4);
    if !depth.is_integer() || depth.is_negative() {
        return None;
    }
    let d: BigInt = depth.to_integer();
    d.try_into().ok().map(|d: u32| (m, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enum_p, Partition};

    fn w(l0: i64, w1: i64, num: i64, den: i64) -> AffineWeight {
        AffineWeight::new(l0, w1, frac(num, den))
    }

    #[test]
    fn form_values() {
        let a1 = AffineWeight::alpha1();
        assert_eq!(a1.form(&a1), int(2));
        assert_eq!(AffineWeight::delta().form(&AffineWeight::delta()), int(0));
        assert_eq!(AffineWeight::lambda0().form(&AffineWeight::lambda0()), int(0));
        assert_eq!(AffineWeight::delta().form(&AffineWeight::lambda0()), int(1));
        assert_eq!(a1.form(&AffineWeight::delta()), int(0));
        assert_eq!(AffineWeight::omega1().form(&AffineWeight::omega1()), frac(1, 2));
    }

    #[test]
    fn translate_examples() {
        for q in [-3, -1, 0, 2, 5] {
            assert_eq!(translate(&AffineWeight::delta(), &frac(q, 2)).unwrap(), AffineWeight::delta());
        }
        assert_eq!(
            translate(&AffineWeight::lambda0(), &int(1)).unwrap(),
            &(&AffineWeight::lambda0() + &AffineWeight::alpha1()) - &AffineWeight::delta()
        );
        for j in -4..=4 {
            assert_eq!(
                translate_half_steps(&AffineWeight::lambda0(), j),
                w(1, j, -j * j, 4)
            );
        }
        assert!(translate(&AffineWeight::lambda0(), &frac(1, 3)).is_err());
    }

    #[test]
    fn reflection_and_sigma_examples() {
        assert_eq!(reflect(&AffineWeight::alpha1(), 1), -AffineWeight::alpha1());
        assert_eq!(reflect(&AffineWeight::alpha0(), 0), -AffineWeight::alpha0());
        assert_eq!(sigma(&AffineWeight::lambda0()), AffineWeight::lambda1());
        assert_eq!(sigma(&AffineWeight::rho()), AffineWeight::rho());
        assert_eq!(sigma(&AffineWeight::alpha0()), AffineWeight::alpha1());
        assert_eq!(sigma(&AffineWeight::alpha1()), AffineWeight::alpha0());
        for mu in [
            AffineWeight::lambda0(),
            AffineWeight::lambda1(),
            AffineWeight::alpha0(),
            AffineWeight::alpha1(),
            AffineWeight::delta(),
        ] {
            assert_eq!(sigma(&sigma(&mu)), mu);
        }
    }

    #[test]
    fn form_invariance() {
        let basis = [
            AffineWeight::lambda0(),
            AffineWeight::omega1(),
            AffineWeight::delta(),
            AffineWeight::alpha1(),
        ];
        let maps: Vec<Box<dyn Fn(&AffineWeight) -> AffineWeight>> = vec![
            Box::new(|m| reflect(m, 0)),
            Box::new(|m| reflect(m, 1)),
            Box::new(|m| translate(m, &int(1)).unwrap()),
            Box::new(|m| translate(m, &int(-1)).unwrap()),
        ];
        for f in &maps {
            for a in &basis {
                for b in &basis {
                    assert_eq!(f(a).form(&f(b)), a.form(b));
                }
            }
        }
    }

    #[test]
    fn translation_additivity() {
        let mus = [AffineWeight::lambda0(), AffineWeight::lambda1(), AffineWeight::alpha0(), w(3, -2, 5, 4)];
        for mu in &mus {
            for p in -6..=6 {
                for q in -6..=6 {
                    let lhs = translate(&translate(mu, &frac(p, 2)).unwrap(), &frac(q, 2)).unwrap();
                    assert_eq!(lhs, translate(mu, &frac(p + q, 2)).unwrap());
                }
            }
        }
    }

    #[test]
    fn wn_weights() {
        assert_eq!(weight_of_wn(0), AffineWeight::lambda0());
        assert_eq!(weight_of_wn(2), w(1, 2, -1, 1));
        for n in 0..=12 {
            assert_eq!(weight_of_wn(n), weight_of_wn_closed(n));
            assert_eq!(weight_of_wn(n).pair_h(), n as i64);
        }
    }

    #[test]
    fn cl_weights() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let l0_minus_3d = w(1, 0, -3, 1);
        assert_eq!(weight_of_cl(&IndexTriple::new(4, 2, lam.clone()).unwrap()), l0_minus_3d);
        assert_eq!(weight_of_cl(&IndexTriple::new(6, 3, lam).unwrap()), l0_minus_3d);
        for n in 0..=8 {
            let top = IndexTriple::new(n, n, Partition::empty()).unwrap();
            assert_eq!(weight_of_cl(&top), weight_of_wn(n));
        }
    }

    #[test]
    fn cl_weight_is_psi_invariant_and_has_basic_shape() {
        for n in 0..=8 {
            for xi in enum_p(n) {
                let wt = weight_of_cl(&xi);
                assert_eq!(wt, weight_of_cl(&xi.psi()));
                if n % 2 == 0 {
                    // Λ0 + jα1 − (j² + d)δ
                    let j = xi.k() as i64 - n as i64 / 2;
                    let d = xi.lam().weight() as i64;
                    assert_eq!(wt, w(1, 2 * j, -(j * j + d), 1));
                }
            }
        }
    }

    #[test]
    fn text_and_json() {
        let mu = AffineWeight::lambda1();
        assert_eq!(mu.to_string(), "1Λ0 + 1ω1 + (-1/4)δ");
        let json = serde_json::to_string(&mu).unwrap();
        assert_eq!(json, r#"{"L0":1,"w1":1,"delta":"-1/4"}"#);
        let back: AffineWeight = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn state_weights_roundtrip() {
        for m in -5..=5 {
            for d in 0..4 {
                let wt = weight_of_state(m, d);
                assert_eq!(state_data_of_weight(&wt), Some((m, d)));
            }
        }
        assert_eq!(weight_of_state(1, 0), AffineWeight::lambda1());
    }
}
