//! `U_h(sl_2)` through its action on the modules `Ṽ_n`, with `q = e^{h/2}`.
//!
//! The algebra itself is never materialized. Everything lives at the
//! operator level: generator actions, the twisting map `α(v_i) = γ^{-i} v_i`
//! with `γ = e^{2c}`, and the universal R acting on `Ṽ_n ⊗ Ṽ_m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalars::{q_integer, Scalar, ScalarRing};
use crate::tensor::{LinearOperator, ResidualNorm};

/// The twisting parameter `c`, `γ = e^{2c}`, and the series ring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Uhsl2Model {
    c: Complex64,
    gamma: Complex64,
    ring: ScalarRing,
}

/// `ρ(H)`, `ρ(X_+)`, `ρ(X_-)` on `Ṽ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct VnAction {
    pub h: LinearOperator,
    pub x_plus: LinearOperator,
    pub x_minus: LinearOperator,
}

impl VnAction {
    /// Generators in the fixed order `H, X+, X-`.
    pub fn generators(&self) -> [(&'static str, &LinearOperator); 3] {
        [("H", &self.h), ("X+", &self.x_plus), ("X-", &self.x_minus)]
    }
}

impl Uhsl2Model {
    pub fn new(c: Complex64, order: usize) -> Result<Self> {
        Self::with_ring(c, ScalarRing::series(order)?)
    }

    pub fn with_ring(c: Complex64, ring: ScalarRing) -> Result<Self> {
        ring.series_order()
            .ok_or_else(|| Error::RingMismatch("the sl2 model needs an h-series ring".into()))?;
        let gamma = (2.0 * c).exp();
        if !gamma.is_finite() || gamma.norm() == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gamma = e^(2c) is not usable for c = {c}"
            )));
        }
        Ok(Uhsl2Model { c, gamma, ring })
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.series_order().expect("series ring")
    }

    pub fn vn_action(&self, n: usize) -> Result<VnAction> {
        vn_action(n, &self.ring)
    }

    pub fn vn_alpha(&self, n: usize) -> LinearOperator {
        vn_alpha(n, self.gamma, &self.ring)
    }

    pub fn r_operator(&self, n: usize, m: usize) -> Result<LinearOperator> {
        uhsl2_r_operator(n, m, &self.ring)
    }

    /// Multipliers of `α_A` on `H, X+, X-`.
    pub fn generator_alpha_images(&self) -> [Complex64; 3] {
        uhsl2_generator_alpha_images(self.gamma)
    }

    /// `max_u ‖α ∘ ρ(u) - ρ(α_A(u)) ∘ α‖` over the three generators.
    pub fn intertwining_residual(&self, n: usize) -> Result<f64> {
        let act = self.vn_action(n)?;
        let alpha = self.vn_alpha(n);
        let mut worst: f64 = 0.0;
        for ((_, rho), k) in act
            .generators()
            .into_iter()
            .zip(self.generator_alpha_images())
        {
            let lhs = alpha.compose(rho)?;
            let rhs = rho.scale(&self.ring.constant(k)).compose(&alpha)?;
            worst = worst.max(lhs.try_sub(&rhs)?.residual_norm());
        }
        Ok(worst)
    }

    /// `‖(α⊗α) R (α⊗α)^{-1} - R‖` on `Ṽ_n ⊗ Ṽ_m`.
    pub fn r_invariance_residual(&self, n: usize, m: usize) -> Result<f64> {
        let aa = self.vn_alpha(n).kron(&self.vn_alpha(m))?;
        let r = self.r_operator(n, m)?;
        let conj = aa.compose(&r)?.compose(&aa.try_inverse()?)?;
        Ok(conj.try_sub(&r)?.residual_norm())
    }
}

/// Generator actions on `Ṽ_n` with basis `v_0..v_n`:
/// `X+ v_i = [n+1-i] v_{i-1}`, `X- v_i = [i+1] v_{i+1}`, `H v_i = (n-2i) v_i`.
pub fn vn_action(n: usize, ring: &ScalarRing) -> Result<VnAction> {
    let d = n + 1;
    let mut h = LinearOperator::zeros(*ring, &[d], &[d]);
    let mut x_plus = LinearOperator::zeros(*ring, &[d], &[d]);
    let mut x_minus = LinearOperator::zeros(*ring, &[d], &[d]);
    for i in 0..d {
        h.set_entry(i, i, ring.real(n as f64 - 2.0 * i as f64));
        if i >= 1 {
            x_plus.set_entry(i - 1, i, q_integer((n + 1 - i) as u32, ring)?);
        }
        if i < n {
            x_minus.set_entry(i + 1, i, q_integer((i + 1) as u32, ring)?);
        }
    }
    Ok(VnAction { h, x_plus, x_minus })
}

/// `α(v_i) = γ^{-i} v_i`.
pub fn vn_alpha(n: usize, gamma: Complex64, ring: &ScalarRing) -> LinearOperator {
    let mut a = LinearOperator::zeros(*ring, &[n + 1], &[n + 1]);
    for i in 0..=n {
        a.set_entry(i, i, ring.constant(gamma.powi(-(i as i32))));
    }
    a
}

/// `(1, γ, γ^{-1})`: `α_A` fixes `H` and rescales `X±` by `γ^{±1}`.
pub fn uhsl2_generator_alpha_images(gamma: Complex64) -> [Complex64; 3] {
    [Complex64::new(1.0, 0.0), gamma, gamma.inv()]
}

fn pow_op(op: &LinearOperator, a: u32) -> Result<LinearOperator> {
    op.power(a)
}

/// The universal R on `Ṽ_n ⊗ Ṽ_m`:
/// `Σ_a (q-q^{-1})^a/[a]! q^{-a(a+1)/2} exp(h/4 [H⊗H + a(H⊗1 - 1⊗H)]) (X+^a ⊗ X-^a)`.
/// `X±^a` vanish for `a > min(n, m)`, so the sum is finite. The exponential
/// is diagonal and acts on the output of `X+^a ⊗ X-^a`.
pub fn uhsl2_r_operator(n: usize, m: usize, ring: &ScalarRing) -> Result<LinearOperator> {
    ring.series_order()
        .ok_or_else(|| Error::RingMismatch("the sl2 R needs an h-series ring".into()))?;
    let vn = vn_action(n, ring)?;
    let vm = vn_action(m, ring)?;
    let (dn, dm) = (n + 1, m + 1);
    let q_minus_qinv = &ring.q_power(1.0)? - &ring.q_power(-1.0)?;
    let mut total = LinearOperator::zeros(*ring, &[dn, dm], &[dn, dm]);
    let mut coef = ring.one();
    for a in 0..=n.min(m) {
        if a >= 1 {
            let inv = q_integer(a as u32, ring)?.try_invert(ring.tolerance())?;
            coef = &coef * &(&q_minus_qinv * &inv);
        }
        let prefactor = &coef * &ring.q_power(-((a * (a + 1)) as f64) / 2.0)?;
        let xs = pow_op(&vn.x_plus, a as u32)?.kron(&pow_op(&vm.x_minus, a as u32)?)?;
        let diag: Vec<Scalar> = (0..dn * dm)
            .map(|idx| {
                let h1 = n as f64 - 2.0 * (idx / dm) as f64;
                let h2 = m as f64 - 2.0 * (idx % dm) as f64;
                let exponent = h1 * h2 + a as f64 * (h1 - h2);
                // exp(h/4 · x) = q^{x/2}
                ring.q_power(exponent / 2.0)
            })
            .collect::<Result<_>>()?;
        let e = LinearOperator::diagonal(*ring, &[dn, dm], diag)?;
        total = total.try_add(&e.compose(&xs)?.scale(&prefactor))?;
    }
    Ok(total)
}
