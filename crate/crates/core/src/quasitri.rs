//! Quasi-triangular structures: the three R-axioms, both bracketings of the
//! quantum Hom-Yang-Baxter equation, alpha-invariance, and the four
//! lambda-map diagrams that characterize the first two axioms.

use crate::error::{Error, Result};
use crate::homstruct::{HomBialgebra, VerificationReport};
use crate::scalars::ScalarRing;
use crate::tensor::{
    embed_r, legwise_multiply, twist_operator, LegPair, LinearOperator, ResidualNorm, TensorElement,
};

/// A Hom-bialgebra with weak unit `c` and `R = Σ R[i][j] e_i ⊗ e_j`.
/// `R` need not be invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct QTHomBialgebra {
    base: HomBialgebra,
    r: TensorElement,
}

impl QTHomBialgebra {
    pub fn new(base: HomBialgebra, r: TensorElement) -> Result<Self> {
        if base.weak_unit().is_none() {
            return Err(Error::MissingWeakUnit(
                "a quasi-triangular structure needs the weak unit c to embed R".into(),
            ));
        }
        base.ring().ensure_compatible(r.ring(), "R")?;
        let d = base.dim();
        if r.leg_dims() != [d, d] {
            return Err(Error::ShapeMismatch(format!(
                "R must have legs [{d}, {d}], got {:?}",
                r.leg_dims()
            )));
        }
        Ok(QTHomBialgebra { base, r })
    }

    /// Builds `R` from its coefficient matrix operator (`rows = i`, `cols = j`).
    pub fn from_matrix(base: HomBialgebra, r: &LinearOperator) -> Result<Self> {
        let d = base.dim();
        let t = TensorElement::from_coeffs(*r.ring(), &[d, d], r.entries().to_vec())?;
        Self::new(base, t)
    }

    pub fn base(&self) -> &HomBialgebra {
        &self.base
    }

    pub fn r(&self) -> &TensorElement {
        &self.r
    }

    /// `R` as a `d x d` matrix operator.
    pub fn r_matrix(&self) -> LinearOperator {
        let d = self.base.dim();
        LinearOperator::from_rows(*self.ring(), &[d], &[d], self.r.coeffs().to_vec())
            .expect("shape validated at construction")
    }

    pub fn with_r(&self, r: TensorElement) -> Result<Self> {
        Self::new(self.base.clone(), r)
    }

    pub fn ring(&self) -> &ScalarRing {
        self.base.ring()
    }

    pub fn weak_unit(&self) -> &TensorElement {
        self.base.weak_unit().expect("checked at construction")
    }

    fn leg(&self, which: LegPair) -> Result<TensorElement> {
        embed_r(&self.r, self.weak_unit(), which)
    }

    fn mul(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        legwise_multiply(x, y, self.base.mu())
    }
}

fn diff(a: &TensorElement, b: &TensorElement) -> Result<f64> {
    Ok(a.try_sub(b)?.residual_norm())
}

/// Residuals of `(Δ⊗α)(R) = R13 R23`, `(α⊗Δ)(R) = R13 R12` and
/// `(τΔ(x)) R = R Δ(x)` over every basis `x`.
pub fn check_qt_axioms(q: &QTHomBialgebra) -> Result<VerificationReport> {
    let b = q.base();
    let r12 = q.leg(LegPair::L12)?;
    let r13 = q.leg(LegPair::L13)?;
    let r23 = q.leg(LegPair::L23)?;

    let lhs1 = b.delta().kron(b.alpha())?.apply(&q.r)?;
    let ax1 = diff(&lhs1, &q.mul(&r13, &r23)?)?;
    let lhs2 = b.alpha().kron(b.delta())?.apply(&q.r)?;
    let ax2 = diff(&lhs2, &q.mul(&r13, &r12)?)?;

    let d = b.dim();
    let tau = twist_operator(*q.ring(), d, d);
    let mut ax3: f64 = 0.0;
    for x in 0..d {
        let dx = b.delta().column(x);
        let lhs = q.mul(&tau.apply(&dx)?, &q.r)?;
        let rhs = q.mul(&q.r, &dx)?;
        ax3 = ax3.max(diff(&lhs, &rhs)?);
    }

    let mut report = VerificationReport::for_ring(q.ring());
    report.push("qt_delta_alpha", ax1);
    report.push("qt_alpha_delta", ax2);
    report.push("qt_opposite", ax3);
    Ok(report)
}

/// Residuals of `(R12R13)R23 = R23(R13R12)` and `R12(R13R23) = (R23R13)R12`.
pub fn check_qhybe(q: &QTHomBialgebra) -> Result<VerificationReport> {
    let r12 = q.leg(LegPair::L12)?;
    let r13 = q.leg(LegPair::L13)?;
    let r23 = q.leg(LegPair::L23)?;
    let first = diff(
        &q.mul(&q.mul(&r12, &r13)?, &r23)?,
        &q.mul(&r23, &q.mul(&r13, &r12)?)?,
    )?;
    let second = diff(
        &q.mul(&r12, &q.mul(&r13, &r23)?)?,
        &q.mul(&q.mul(&r23, &r13)?, &r12)?,
    )?;
    let mut report = VerificationReport::for_ring(q.ring());
    report.push("qhybe_left_bracketed", first);
    report.push("qhybe_right_bracketed", second);
    Ok(report)
}

/// `‖α^{⊗2}(R) - R‖`.
pub fn is_alpha_invariant(q: &QTHomBialgebra) -> Result<f64> {
    let alpha = q.base().alpha();
    diff(&alpha.kron(alpha)?.apply(&q.r)?, &q.r)
}

/// How far the two QHYBE forms are from each other, side by side:
/// `(R12R13)R23 - R12(R13R23)` and `R23(R13R12) - (R23R13)R12`.
pub fn check_qhybe_coincide(q: &QTHomBialgebra) -> Result<VerificationReport> {
    let r12 = q.leg(LegPair::L12)?;
    let r13 = q.leg(LegPair::L13)?;
    let r23 = q.leg(LegPair::L23)?;
    let lhs = diff(
        &q.mul(&q.mul(&r12, &r13)?, &r23)?,
        &q.mul(&r12, &q.mul(&r13, &r23)?)?,
    )?;
    let rhs = diff(
        &q.mul(&r23, &q.mul(&r13, &r12)?)?,
        &q.mul(&q.mul(&r23, &r13)?, &r12)?,
    )?;
    let mut report = VerificationReport::for_ring(q.ring());
    report.push("bracketing_lhs", lhs);
    report.push("bracketing_rhs", rhs);
    Ok(report)
}

/// The maps `A* -> A`, column `p` being the image of the dual basis vector `e^p`:
/// `λ1(φ) = <φ⊗α, R>`, `λ1'(φ) = <α*φ ⊗ Id, R>`,
/// `λ2(φ) = <α⊗φ, R>`, `λ2'(φ) = <Id ⊗ α*φ, R>`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaMaps {
    pub lambda1: LinearOperator,
    pub lambda1_prime: LinearOperator,
    pub lambda2: LinearOperator,
    pub lambda2_prime: LinearOperator,
}

pub fn lambda_maps(q: &QTHomBialgebra) -> Result<LambdaMaps> {
    let alpha = q.base().alpha();
    let r = q.r_matrix();
    // λ1(e^p) = Σ_j R[p][j] α(e_j)
    let lambda1 = alpha.compose(&r.transpose())?;
    // λ1'(e^p) = Σ_{i,j} <e^p, α(e_i)> R[i][j] e_j
    let lambda1_prime = alpha.compose(&r)?.transpose();
    // λ2(e^q) = Σ_i R[i][q] α(e_i)
    let lambda2 = alpha.compose(&r)?;
    // λ2'(e^q) = Σ_{i,j} R[i][j] <e^q, α(e_j)> e_i
    let lambda2_prime = r.compose(&alpha.transpose())?;
    Ok(LambdaMaps {
        lambda1,
        lambda1_prime,
        lambda2,
        lambda2_prime,
    })
}

/// Residuals of the four squares. `Δ*` and `μ*` are the transposed
/// structure maps, i.e. the dual multiplication and comultiplication.
/// Diagrams 1 and 2 are equivalent to `(Δ⊗α)(R) = R13R23`, diagrams 3
/// and 4 to `(α⊗Δ)(R) = R13R12`.
pub fn check_lambda_diagrams(q: &QTHomBialgebra) -> Result<VerificationReport> {
    let b = q.base();
    let l = lambda_maps(q)?;
    let d = b.dim();
    let tau = twist_operator(*q.ring(), d, d);
    let delta_star = b.delta().transpose();
    let mu_star = b.mu().transpose();
    let mu = b.mu();
    let delta = b.delta();

    let d1 = l
        .lambda1
        .compose(&delta_star)?
        .try_sub(&mu.compose(&l.lambda1_prime.kron(&l.lambda1_prime)?)?)?;
    let d2 = delta
        .compose(&l.lambda2_prime)?
        .try_sub(&l.lambda2.kron(&l.lambda2)?.compose(&mu_star)?)?;
    let d3 = l.lambda2.compose(&delta_star)?.try_sub(
        &mu.compose(&tau)?
            .compose(&l.lambda2_prime.kron(&l.lambda2_prime)?)?,
    )?;
    let d4 = delta.compose(&l.lambda1_prime)?.try_sub(
        &l.lambda1
            .kron(&l.lambda1)?
            .compose(&tau)?
            .compose(&mu_star)?,
    )?;

    let mut report = VerificationReport::for_ring(q.ring());
    report.push("diagram_lambda1_algebra", d1.residual_norm());
    report.push("diagram_lambda2_coalgebra", d2.residual_norm());
    report.push("diagram_lambda2_antialgebra", d3.residual_norm());
    report.push("diagram_lambda1_anticoalgebra", d4.residual_norm());
    Ok(report)
}

/// Outcome of comparing an axiom residual with its diagram residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    /// At least one residual lies in `[tol/10, 10·tol]`.
    Inconclusive,
}

/// Compares two residuals that should pass or fail together. Only clean
/// values (below `tol/10` or above `10·tol`) are judged.
pub fn compare_residuals(axiom: f64, diagram: f64, tolerance: f64) -> Agreement {
    let class = |r: f64| {
        if r < tolerance / 10.0 {
            Some(true)
        } else if r > 10.0 * tolerance {
            Some(false)
        } else {
            None
        }
    };
    match (class(axiom), class(diagram)) {
        (Some(a), Some(b)) if a == b => Agreement::Agree,
        (Some(_), Some(_)) => Agreement::Disagree,
        _ => Agreement::Inconclusive,
    }
}

/// Everything the verifier reports for a quasi-triangular structure.
pub fn check_all_qt(q: &QTHomBialgebra) -> Result<VerificationReport> {
    let mut report = crate::homstruct::check_all_bialgebra(q.base())?;
    report.extend("", &check_qt_axioms(q)?);
    report.extend("", &check_qhybe(q)?);
    report.extend("", &check_lambda_diagrams(q)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homstruct::fixtures::{cx, twisted_zn};
    use crate::scalars::{root_of_unity, Scalar};

    /// Anyonic R on Z/n, evaluated straight from the Fourier-phase formula.
    fn anyon_r(n: usize) -> TensorElement {
        let ring = ScalarRing::complex();
        TensorElement::from_fn(ring, &[n, n], |ix| {
            let phase = -((ix[0] * ix[1]) as i64);
            root_of_unity(n as u32, phase, &ring)
                .unwrap()
                .scale((1.0 / n as f64).into())
        })
    }

    fn anyon(n: usize, k: usize) -> QTHomBialgebra {
        QTHomBialgebra::new(twisted_zn(n, k), anyon_r(n)).unwrap()
    }

    #[test]
    fn missing_weak_unit_is_an_error() {
        let b = twisted_zn(2, 1).with_weak_unit(None).unwrap();
        assert!(matches!(
            QTHomBialgebra::new(b, anyon_r(2)),
            Err(Error::MissingWeakUnit(_))
        ));
    }

    #[test]
    fn n2_r_matches_four_term_form() {
        let r = anyon_r(2);
        let half = 0.5;
        for (ix, want) in [
            ([0, 0], half),
            ([0, 1], half),
            ([1, 0], half),
            ([1, 1], -half),
        ] {
            assert!(r.get(&ix).approx_eq(&cx(want), 1e-15));
        }
    }

    #[test]
    fn anyonic_passes_qt_and_qhybe() {
        for (n, k) in [(2, 1), (4, 3), (5, 2), (6, 4)] {
            let q = anyon(n, k);
            let qt = check_qt_axioms(&q).unwrap();
            assert!(qt.pass(), "n={n} k={k}\n{qt}");
            assert!(check_qhybe(&q).unwrap().pass());
            assert!(check_lambda_diagrams(&q).unwrap().pass());
        }
    }

    #[test]
    fn zero_r_is_trivial() {
        let q = QTHomBialgebra::new(
            twisted_zn(2, 1),
            TensorElement::zeros(ScalarRing::complex(), &[2, 2]),
        )
        .unwrap();
        assert_eq!(check_qt_axioms(&q).unwrap().max_residual(), 0.0);
        assert_eq!(check_lambda_diagrams(&q).unwrap().max_residual(), 0.0);
        let l = lambda_maps(&q).unwrap();
        assert_eq!(l.lambda1.residual_norm(), 0.0);
        assert_eq!(l.lambda2_prime.residual_norm(), 0.0);
    }

    #[test]
    fn alpha_invariance_matches_k_squared() {
        // oracle: R[pk][qk] = R[p][q] for all p, q iff k² ≡ 1 mod n, checked
        // directly on the formula.
        for n in 2..=8usize {
            for k in 1..n {
                let r = anyon_r(n);
                let moved = (0..n).all(|p| {
                    (0..n).all(|q| {
                        r.get(&[p * k % n, q * k % n])
                            .approx_eq(r.get(&[p, q]), 1e-12)
                    })
                });
                let res = is_alpha_invariant(&anyon(n, k)).unwrap();
                assert_eq!(res < 1e-9, moved, "n={n} k={k}");
                assert_eq!(moved, (k * k) % n == 1, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn bracketings_differ_without_invariance() {
        let q = anyon(5, 2);
        assert!(
            check_qhybe_coincide(&q)
                .unwrap()
                .get("bracketing_lhs")
                .unwrap()
                > 1e-3
        );
        let inv = anyon(5, 4);
        assert!(check_qhybe_coincide(&inv).unwrap().pass());
        let classical = anyon(5, 1);
        assert!(check_qhybe_coincide(&classical).unwrap().pass());
    }

    #[test]
    fn identity_alpha_makes_lambdas_agree() {
        let q = anyon(3, 1);
        let l = lambda_maps(&q).unwrap();
        assert!(l.lambda1.approx_eq(&l.lambda1_prime, 1e-15));
        assert!(l.lambda2.approx_eq(&l.lambda2_prime, 1e-15));
    }

    /// Oracle: λ1 on Z/2 by pairing e^p with R and applying α by hand.
    #[test]
    fn lambda1_brute_force_z2() {
        let q = anyon(2, 1);
        let l = lambda_maps(&q).unwrap();
        let r = anyon_r(2);
        for p in 0..2 {
            let mut img = TensorElement::zeros(ScalarRing::complex(), &[2]);
            for j in 0..2 {
                let e = q.base().alpha().column(j);
                img = img.try_add(&e.scale(r.get(&[p, j]))).unwrap();
            }
            assert!(l.lambda1.column(p).approx_eq(&img, 1e-15));
        }
    }

    #[test]
    fn perturbed_r_fails_axiom_and_diagram_together() {
        let q = anyon(4, 3);
        let mut r = q.r().clone();
        let v = r.get(&[1, 2]) + &Scalar::Complex((1e-2).into());
        r.set(&[1, 2], v);
        let bad = q.with_r(r).unwrap();
        let ax = check_qt_axioms(&bad).unwrap();
        let dg = check_lambda_diagrams(&bad).unwrap();
        let a1 = ax.get("qt_delta_alpha").unwrap();
        let d1 = dg.get("diagram_lambda1_algebra").unwrap();
        assert!(a1 > 1e-4);
        assert_eq!(compare_residuals(a1, d1, 1e-9), Agreement::Agree);
    }

    #[test]
    fn agreement_thresholds() {
        assert_eq!(compare_residuals(0.0, 1e-12, 1e-9), Agreement::Agree);
        assert_eq!(compare_residuals(1.0, 1e-3, 1e-9), Agreement::Agree);
        assert_eq!(compare_residuals(0.0, 1e-3, 1e-9), Agreement::Disagree);
        assert_eq!(
            compare_residuals(5e-10, 1e-3, 1e-9),
            Agreement::Inconclusive
        );
    }
}
