//! Building Hom structures from classical ones: the Yau twist along a
//! bialgebra endomorphism, and the R-twist by powers of a surjective alpha.

use crate::error::{Error, Result};
use crate::homstruct::{check_all_bialgebra, HomBialgebra, VerificationReport};
use crate::quasitri::{check_qt_axioms, QTHomBialgebra};
use crate::tensor::{LinearOperator, ResidualNorm};

/// Constructor settings. Outputs are re-verified unless `verify` is off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistOptions {
    pub verify: bool,
}

impl Default for TwistOptions {
    fn default() -> Self {
        TwistOptions { verify: true }
    }
}

fn ensure_report(report: &VerificationReport, what: &str) -> Result<()> {
    if report.pass() {
        return Ok(());
    }
    let detail = report
        .failures()
        .map(|(n, r)| format!("{n} = {r:.3e}"))
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::Verification {
        what: what.into(),
        detail,
    })
}

fn ensure_classical(b: &HomBialgebra) -> Result<()> {
    let id = LinearOperator::identity(*b.ring(), &[b.dim()]);
    let r = b.alpha().try_sub(&id)?.residual_norm();
    let tol = b.ring().tolerance();
    if !(r < tol) {
        return Err(Error::hypothesis(
            "input is a classical bialgebra (alpha = Id)",
            Some(r),
            tol,
        ));
    }
    Ok(())
}

fn ensure_alpha_shape(alpha: &LinearOperator, b: &HomBialgebra) -> Result<()> {
    b.ring().ensure_compatible(alpha.ring(), "alpha")?;
    let d = b.dim();
    if alpha.out_dims() != [d] || alpha.in_dims() != [d] {
        return Err(Error::ShapeMismatch(format!(
            "alpha must be {d} x {d}, got {:?} <- {:?}",
            alpha.out_dims(),
            alpha.in_dims()
        )));
    }
    Ok(())
}

/// Residual of `alpha` being a (not necessarily unital) bialgebra morphism:
/// the larger of `‖α∘μ - μ∘α^{⊗2}‖` and `‖α^{⊗2}∘Δ - Δ∘α‖`.
pub fn check_bialgebra_morphism(alpha: &LinearOperator, b: &HomBialgebra) -> Result<f64> {
    ensure_classical(b)?;
    ensure_alpha_shape(alpha, b)?;
    let aa = alpha.kron(alpha)?;
    let m = alpha
        .compose(b.mu())?
        .try_sub(&b.mu().compose(&aa)?)?
        .residual_norm();
    let c = aa
        .compose(b.delta())?
        .try_sub(&b.delta().compose(alpha)?)?
        .residual_norm();
    Ok(m.max(c))
}

fn ensure_morphism(alpha: &LinearOperator, b: &HomBialgebra) -> Result<()> {
    let r = check_bialgebra_morphism(alpha, b)?;
    let tol = b.ring().tolerance();
    if !(r < tol) {
        return Err(Error::hypothesis(
            "alpha is a bialgebra morphism",
            Some(r),
            tol,
        ));
    }
    Ok(())
}

/// `(A, α∘μ, Δ∘α, α)`; the classical unit, if present, becomes the weak unit.
pub fn yau_twist(
    b: &HomBialgebra,
    alpha: &LinearOperator,
    opts: TwistOptions,
) -> Result<HomBialgebra> {
    ensure_morphism(alpha, b)?;
    let out = HomBialgebra::new(
        alpha.compose(b.mu())?,
        b.delta().compose(alpha)?,
        alpha.clone(),
        b.weak_unit().cloned(),
    )?;
    if opts.verify {
        ensure_report(&check_all_bialgebra(&out)?, "Yau twist")?;
    }
    Ok(out)
}

/// Yau twist of a classical quasi-triangular bialgebra, keeping `R`.
/// `R` need not be invertible.
pub fn qt_yau_twist(
    b: &HomBialgebra,
    r: &LinearOperator,
    alpha: &LinearOperator,
    opts: TwistOptions,
) -> Result<QTHomBialgebra> {
    ensure_classical(b)?;
    if b.weak_unit().is_none() {
        return Err(Error::MissingWeakUnit(
            "the classical structure needs its unit".into(),
        ));
    }
    let classical = QTHomBialgebra::from_matrix(b.clone(), r)?;
    let pre = check_qt_axioms(&classical)?;
    if !pre.pass() {
        let (name, res) = pre.failures().next().cloned().expect("failing report");
        return Err(Error::hypothesis(
            format!("input R is quasi-triangular ({name})"),
            Some(res),
            pre.tolerance(),
        ));
    }
    let twisted = yau_twist(b, alpha, opts)?;
    let out = QTHomBialgebra::from_matrix(twisted, r)?;
    if opts.verify {
        ensure_report(&check_qt_axioms(&out)?, "quasi-triangular Yau twist")?;
    }
    Ok(out)
}

/// Replaces `R` by `(α^n ⊗ α^n)(R)`. Requires `α` surjective, which in
/// finite dimension means invertible.
pub fn twist_r(q: &QTHomBialgebra, n: u32, opts: TwistOptions) -> Result<QTHomBialgebra> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "R-twist power must be at least 1".into(),
        ));
    }
    let alpha = q.base().alpha();
    if !alpha.is_invertible() {
        return Err(Error::hypothesis(
            "alpha not surjective",
            None,
            q.ring().tolerance(),
        ));
    }
    let an = alpha.power(n)?;
    let r = an.kron(&an)?.apply(q.r())?;
    let out = q.with_r(r)?;
    if opts.verify {
        ensure_report(&check_qt_axioms(&out)?, "R-twist")?;
    }
    Ok(out)
}

/// [`qt_yau_twist`] followed by [`twist_r`] with power `n`.
pub fn qt_yau_twist_powered(
    b: &HomBialgebra,
    r: &LinearOperator,
    alpha: &LinearOperator,
    n: u32,
    opts: TwistOptions,
) -> Result<QTHomBialgebra> {
    if !alpha.is_invertible() {
        return Err(Error::hypothesis(
            "alpha not surjective",
            None,
            b.ring().tolerance(),
        ));
    }
    let q = qt_yau_twist(b, r, alpha, opts)?;
    twist_r(&q, n, opts)
}
