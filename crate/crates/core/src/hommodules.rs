//! Hom-modules, the operator `B = τ∘R` on `M ⊗ M`, the Hom-Yang-Baxter
//! equation, and the braid operators `B_i` on `M^{⊗n}`.

use num_complex::Complex64;

use crate::catalog::Uhsl2Model;
use crate::error::{Error, Result};
use crate::homstruct::{HomAlgebra, VerificationReport};
use crate::quasitri::{is_alpha_invariant, QTHomBialgebra};
use crate::scalars::ScalarRing;
use crate::tensor::{twist_operator, LinearOperator, ResidualNorm, TensorElement};

/// Upper bound on `dim^strands` for braid operators.
pub const MAX_BRAID_DIM: usize = 65536;

/// How the algebra acts on the module.
#[derive(Clone, Debug, PartialEq)]
pub enum ModuleAction {
    /// The Hom action `λ: A ⊗ M -> M` as an operator `[d, m] -> [m]`.
    Tensor(LinearOperator),
    /// Classical operators `ρ(u)` for named generators, acting through the
    /// twisted action `λ_α(u, x) = α_M(ρ(u) x)`.
    Generators(Vec<(String, LinearOperator)>),
}

/// `(M, α_M)` with an action.
#[derive(Clone, Debug, PartialEq)]
pub struct HomModule {
    ring: ScalarRing,
    dim: usize,
    alpha: LinearOperator,
    action: ModuleAction,
}

impl HomModule {
    pub fn new(alpha: LinearOperator, action: ModuleAction) -> Result<Self> {
        let ring = *alpha.ring();
        let m = alpha.rows();
        if m == 0 || alpha.out_dims() != [m] || alpha.in_dims() != [m] {
            return Err(Error::ShapeMismatch(format!(
                "module alpha must be square on one leg, got {:?} <- {:?}",
                alpha.out_dims(),
                alpha.in_dims()
            )));
        }
        match &action {
            ModuleAction::Tensor(lam) => {
                ring.ensure_compatible(lam.ring(), "module action")?;
                let d = lam.cols() / m;
                if lam.out_dims() != [m] || lam.in_dims() != [d, m] || d == 0 {
                    return Err(Error::ShapeMismatch(format!(
                        "module action must map [d, {m}] -> [{m}], got {:?} -> {:?}",
                        lam.in_dims(),
                        lam.out_dims()
                    )));
                }
            }
            ModuleAction::Generators(gens) => {
                if gens.is_empty() {
                    return Err(Error::InvalidArgument("no generator actions".into()));
                }
                for (name, op) in gens {
                    ring.ensure_compatible(op.ring(), "generator action")?;
                    if op.out_dims() != [m] || op.in_dims() != [m] {
                        return Err(Error::ShapeMismatch(format!(
                            "generator {name} must act on [{m}]"
                        )));
                    }
                }
            }
        }
        Ok(HomModule {
            ring,
            dim: m,
            alpha,
            action,
        })
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> &LinearOperator {
        &self.alpha
    }

    pub fn action(&self) -> &ModuleAction {
        &self.action
    }

    /// `x ↦ λ(e_i, x)` for a tensor action.
    pub fn basis_action(&self, i: usize) -> Result<LinearOperator> {
        let ModuleAction::Tensor(lam) = &self.action else {
            return Err(Error::InvalidArgument("module has no tensor action".into()));
        };
        let m = self.dim;
        Ok(LinearOperator::from_fn(self.ring, &[m], &[m], |r, c| {
            lam.entry(r, i * m + c).clone()
        }))
    }
}

/// The algebra a module is checked against.
#[derive(Clone, Copy, Debug)]
pub enum ActingAlgebra<'a> {
    Finite(&'a HomAlgebra),
    Uhsl2(&'a Uhsl2Model),
}

/// Residuals of `(ab)α_M(x) = α_A(a)(bx)` and `α_M(ax) = α_A(a)α_M(x)`.
///
/// For a tensor action both identities are checked on all basis triples. For
/// a generator action over `U_h(sl_2)_α` they are checked on every pair of
/// generators, with `μ_α(a, b) = α_A(ab)` and `λ_α = α_M ∘ ρ`:
/// `α_M ρ(α_A a) ρ(α_A b) α_M` against `α_M ρ(α_A a) α_M ρ(b)`, and
/// `α_M α_M ρ(a)` against `α_M ρ(α_A a) α_M`.
pub fn check_module_axioms(a: ActingAlgebra<'_>, m: &HomModule) -> Result<VerificationReport> {
    let mut report = VerificationReport::for_ring(&m.ring);
    let (assoc, mult) = match (a, &m.action) {
        (ActingAlgebra::Finite(alg), ModuleAction::Tensor(lam)) => {
            alg.ring().ensure_compatible(&m.ring, "module")?;
            if lam.in_dims()[0] != alg.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "action expects an algebra of dimension {}, got {}",
                    lam.in_dims()[0],
                    alg.dim()
                )));
            }
            let lhs = lam.compose(&alg.mu().kron(&m.alpha)?)?;
            let rhs = lam.compose(&alg.alpha().kron(lam)?)?;
            let assoc = lhs.try_sub(&rhs)?.residual_norm();
            let lhs = m.alpha.compose(lam)?;
            let rhs = lam.compose(&alg.alpha().kron(&m.alpha)?)?;
            (assoc, lhs.try_sub(&rhs)?.residual_norm())
        }
        (ActingAlgebra::Uhsl2(model), ModuleAction::Generators(gens)) => {
            model.ring().ensure_compatible(&m.ring, "module")?;
            if gens.len() != 3 {
                return Err(Error::InvalidArgument(
                    "expected the generator actions H, X+, X-".into(),
                ));
            }
            let k = model.generator_alpha_images();
            let alpha = &m.alpha;
            let twisted: Vec<LinearOperator> = gens
                .iter()
                .zip(k)
                .map(|((_, rho), s)| rho.scale(&m.ring.constant(s)))
                .collect();
            let (mut assoc, mut mult) = (0.0f64, 0.0f64);
            for (i, (_, rho_a)) in gens.iter().enumerate() {
                let ta = &twisted[i];
                for (j, (_, rho_b)) in gens.iter().enumerate() {
                    let tb = &twisted[j];
                    let lhs = alpha.compose(ta)?.compose(tb)?.compose(alpha)?;
                    let rhs = alpha.compose(ta)?.compose(alpha)?.compose(rho_b)?;
                    assoc = assoc.max(lhs.try_sub(&rhs)?.residual_norm());
                }
                let lhs = alpha.compose(alpha)?.compose(rho_a)?;
                let rhs = alpha.compose(ta)?.compose(alpha)?;
                mult = mult.max(lhs.try_sub(&rhs)?.residual_norm());
            }
            (assoc, mult)
        }
        _ => {
            return Err(Error::InvalidArgument(
                "module action data does not match the acting algebra".into(),
            ))
        }
    };
    report.push("module_associativity", assoc);
    report.push("module_multiplicativity", mult);
    Ok(report)
}

/// `A` acting on itself: `λ = μ`, `α_M = α`.
pub fn regular_module(q: &QTHomBialgebra) -> Result<HomModule> {
    let b = q.base();
    HomModule::new(b.alpha().clone(), ModuleAction::Tensor(b.mu().clone()))
}

/// `‖α_M ∘ λ - λ ∘ (α_A ⊗ α_M)‖` for a classical action `λ`.
pub fn intertwining_residual(
    lam: &LinearOperator,
    alpha_a: &LinearOperator,
    alpha_m: &LinearOperator,
) -> Result<f64> {
    let lhs = alpha_m.compose(lam)?;
    let rhs = lam.compose(&alpha_a.kron(alpha_m)?)?;
    Ok(lhs.try_sub(&rhs)?.residual_norm())
}

/// The module over the Yau-twisted algebra with action `α_M ∘ λ`.
pub fn twisted_module(
    lam: &LinearOperator,
    alpha_a: &LinearOperator,
    alpha_m: &LinearOperator,
) -> Result<HomModule> {
    let r = intertwining_residual(lam, alpha_a, alpha_m)?;
    let tol = alpha_m.ring().tolerance();
    if !(r < tol) {
        return Err(Error::hypothesis(
            "alpha_M ∘ λ = λ ∘ (alpha_A ⊗ alpha_M)",
            Some(r),
            tol,
        ));
    }
    HomModule::new(alpha_m.clone(), ModuleAction::Tensor(alpha_m.compose(lam)?))
}

/// `(Ṽ_n, α)` over `U_h(sl_2)_α` with action `α ∘ ρ`.
pub fn uhsl2_twisted_module(model: &Uhsl2Model, n: usize) -> Result<HomModule> {
    let r = model.intertwining_residual(n)?;
    let tol = model.ring().tolerance();
    if !(r < tol) {
        return Err(Error::hypothesis(
            "alpha ∘ ρ = ρ ∘ (alpha_A ⊗ alpha)",
            Some(r),
            tol,
        ));
    }
    let act = model.vn_action(n)?;
    let gens = act
        .generators()
        .into_iter()
        .map(|(name, op)| (name.to_string(), op.clone()))
        .collect();
    HomModule::new(model.vn_alpha(n), ModuleAction::Generators(gens))
}

/// `B` on `M ⊗ M` together with `α_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct HybeSolution {
    b: LinearOperator,
    alpha: LinearOperator,
    hypotheses_verified: bool,
}

impl HybeSolution {
    /// Wraps an explicit operator; no hypotheses are involved.
    pub fn new(b: LinearOperator, alpha: LinearOperator) -> Result<Self> {
        b.ring().ensure_compatible(alpha.ring(), "HYBE solution")?;
        let m = alpha.rows();
        if alpha.out_dims() != [m] || alpha.in_dims() != [m] {
            return Err(Error::ShapeMismatch("alpha must act on one leg".into()));
        }
        if b.rows() != m * m || b.cols() != m * m {
            return Err(Error::ShapeMismatch(format!(
                "B must act on a {m}x{m} tensor square, got {} x {}",
                b.rows(),
                b.cols()
            )));
        }
        Ok(HybeSolution {
            b: b.reshape(&[m, m], &[m, m])?,
            alpha,
            hypotheses_verified: true,
        })
    }

    pub fn b(&self) -> &LinearOperator {
        &self.b
    }

    pub fn alpha(&self) -> &LinearOperator {
        &self.alpha
    }

    pub fn dim(&self) -> usize {
        self.alpha.rows()
    }

    pub fn hypotheses_verified(&self) -> bool {
        self.hypotheses_verified
    }
}

/// `Σ R[i][j] λ(e_i, ·) ⊗ λ(e_j, ·)` on `M ⊗ M`.
pub fn r_action(m: &HomModule, r: &TensorElement) -> Result<LinearOperator> {
    let d = match &m.action {
        ModuleAction::Tensor(lam) => lam.in_dims()[0],
        ModuleAction::Generators(_) => {
            return Err(Error::InvalidArgument(
                "R acts through a tensor action only".into(),
            ))
        }
    };
    if r.leg_dims() != [d, d] {
        return Err(Error::ShapeMismatch(format!(
            "R must have legs [{d}, {d}], got {:?}",
            r.leg_dims()
        )));
    }
    let ops: Vec<LinearOperator> = (0..d).map(|i| m.basis_action(i)).collect::<Result<_>>()?;
    let n = m.dim;
    let mut total = LinearOperator::zeros(m.ring, &[n, n], &[n, n]);
    for (flat, coef) in r.nonzero() {
        let (i, j) = (flat / d, flat % d);
        total = total.try_add(&ops[i].kron(&ops[j])?.scale(coef))?;
    }
    Ok(total)
}

fn require(hypothesis: &str, residual: f64, tolerance: f64, force: bool) -> Result<bool> {
    if residual < tolerance {
        Ok(true)
    } else if force {
        Ok(false)
    } else {
        Err(Error::hypothesis(hypothesis, Some(residual), tolerance))
    }
}

/// `B = τ ∘ R` on a Hom-module over `q`, where `R` acts through the module.
/// Requires `α^{⊗2}(R) = R`. With `force`, a failing hypothesis is recorded
/// instead of rejected, and every report on the result is marked unverified.
pub fn build_b(q: &QTHomBialgebra, m: &HomModule, force: bool) -> Result<HybeSolution> {
    let inv = is_alpha_invariant(q)?;
    let ok = require("R is alpha-invariant", inv, q.ring().tolerance(), force)?;
    let r_op = r_action(m, q.r())?;
    let n = m.dim;
    let b = twist_operator(m.ring, n, n).compose(&r_op)?;
    let mut s = HybeSolution::new(b, m.alpha.clone())?;
    s.hypotheses_verified = ok;
    Ok(s)
}

/// `B = τ ∘ R` built from an operator `R` already acting on `M ⊗ M`, given
/// the measured module-level invariance residual `‖α^{⊗2} R α^{⊗2,-1} - R‖`.
pub fn build_b_from_operator(
    r_op: &LinearOperator,
    alpha: &LinearOperator,
    force: bool,
) -> Result<HybeSolution> {
    let aa = alpha.kron(alpha)?;
    let inv = aa
        .compose(r_op)?
        .try_sub(&r_op.compose(&aa)?)?
        .residual_norm();
    let ok = require(
        "R commutes with alpha ⊗ alpha",
        inv,
        alpha.ring().tolerance(),
        force,
    )?;
    let m = alpha.rows();
    let b = twist_operator(*alpha.ring(), m, m).compose(&r_op.reshape(&[m, m], &[m, m])?)?;
    let mut s = HybeSolution::new(b, alpha.clone())?;
    s.hypotheses_verified = ok;
    Ok(s)
}

/// `B_α = (α_M ⊗ α_M) ∘ τ ∘ R` from a classical action of `R` on `M ⊗ M`.
/// `hypothesis_residuals` are the measured `α_A^{⊗2}(R) = R` and
/// intertwining residuals (or the module-morphism residual when `α_A = Id`).
pub fn build_b_alpha(
    r_op: &LinearOperator,
    alpha_m: &LinearOperator,
    hypothesis_residuals: &[(&str, f64)],
    force: bool,
) -> Result<HybeSolution> {
    let tol = alpha_m.ring().tolerance();
    let mut ok = true;
    for (name, r) in hypothesis_residuals {
        ok &= require(name, *r, tol, force)?;
    }
    let m = alpha_m.rows();
    let b = alpha_m
        .kron(alpha_m)?
        .compose(&twist_operator(*alpha_m.ring(), m, m))?
        .compose(&r_op.reshape(&[m, m], &[m, m])?)?;
    let mut s = HybeSolution::new(b, alpha_m.clone())?;
    s.hypotheses_verified = ok;
    Ok(s)
}

/// `B_α` on `(Ṽ_n, α)`, checking the intertwining and invariance hypotheses.
pub fn uhsl2_b_alpha(model: &Uhsl2Model, n: usize, force: bool) -> Result<HybeSolution> {
    let inter = model.intertwining_residual(n)?;
    let inv = model.r_invariance_residual(n, n)?;
    build_b_alpha(
        &model.r_operator(n, n)?,
        &model.vn_alpha(n),
        &[
            ("alpha ∘ ρ = ρ ∘ (alpha_A ⊗ alpha)", inter),
            ("R is alpha-invariant", inv),
        ],
        force,
    )
}

/// `B_α` on `Ṽ_1` in the basis `v0v0, v0v1, v1v0, v1v1`, columns as images.
pub fn b_alpha_v1_matrix(c: Complex64, order: usize) -> Result<LinearOperator> {
    let model = Uhsl2Model::new(c, order)?;
    Ok(uhsl2_b_alpha(&model, 1, false)?.b)
}

/// Residuals of the HYBE
/// `(α⊗B)(B⊗α)(α⊗B) = (B⊗α)(α⊗B)(B⊗α)` and of `[B, α^{⊗2}] = 0`.
pub fn check_hybe(s: &HybeSolution) -> Result<VerificationReport> {
    let a = &s.alpha;
    let ab = a.kron(&s.b)?;
    let ba = s.b.kron(a)?;
    let lhs = ab.compose(&ba)?.compose(&ab)?;
    let rhs = ba.compose(&ab)?.compose(&ba)?;
    let aa = a.kron(a)?;
    let comm = s.b.compose(&aa)?.try_sub(&aa.compose(&s.b)?)?;
    let mut report = VerificationReport::for_ring(s.b.ring());
    report.push("hybe", lhs.try_sub(&rhs)?.residual_norm());
    report.push("b_commutes_with_alpha", comm.residual_norm());
    if !s.hypotheses_verified {
        report.mark_unverified();
    }
    Ok(report)
}

/// `m^strands`, or an error above [`MAX_BRAID_DIM`]. Operators are dense, so
/// memory grows with the square of this number.
pub fn braid_dimension(m: usize, strands: usize) -> Result<usize> {
    u32::try_from(strands)
        .ok()
        .and_then(|k| m.checked_pow(k))
        .filter(|&t| t <= MAX_BRAID_DIM)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "{m}^{strands} exceeds the braid operator cap of {MAX_BRAID_DIM}"
            ))
        })
}

/// `B_i = α^{⊗(i-1)} ⊗ B ⊗ α^{⊗(n-i-1)}` for `i = 1..n-1`.
pub fn braid_operators(s: &HybeSolution, strands: usize) -> Result<Vec<LinearOperator>> {
    if strands < 3 {
        return Err(Error::InvalidArgument(format!(
            "braid relations need at least 3 strands, got {strands}"
        )));
    }
    braid_dimension(s.dim(), strands)?;
    let mut out = Vec::with_capacity(strands - 1);
    for i in 1..strands {
        let mut factors: Vec<&LinearOperator> = vec![&s.alpha; i - 1];
        factors.push(&s.b);
        factors.extend(std::iter::repeat_n(&s.alpha, strands - i - 1));
        out.push(LinearOperator::kron_all(&factors)?);
    }
    Ok(out)
}

/// Residuals of `B_i B_{i+1} B_i = B_{i+1} B_i B_{i+1}` and of
/// `B_i B_j = B_j B_i` for `|i - j| > 1` (1-based names).
pub fn check_braid_relations(ops: &[LinearOperator]) -> Result<VerificationReport> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("no braid operators".into()))?;
    let mut report = VerificationReport::for_ring(first.ring());
    for i in 0..ops.len() {
        if i + 1 < ops.len() {
            let (x, y) = (&ops[i], &ops[i + 1]);
            let lhs = x.compose(y)?.compose(x)?;
            let rhs = y.compose(x)?.compose(y)?;
            report.push(
                format!("braid_{}_{}", i + 1, i + 2),
                lhs.try_sub(&rhs)?.residual_norm(),
            );
        }
        for j in i + 2..ops.len() {
            let lhs = ops[i].compose(&ops[j])?;
            let rhs = ops[j].compose(&ops[i])?;
            report.push(
                format!("far_{}_{}", i + 1, j + 1),
                lhs.try_sub(&rhs)?.residual_norm(),
            );
        }
    }
    Ok(report)
}
