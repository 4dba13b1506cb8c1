//! Hom-algebras, Hom-coalgebras and Hom-bialgebras given by structure
//! constants, with every axiom measured as a residual.
//!
//! Maps are stored as [`LinearOperator`]s in the crate-wide convention:
//! `mu: [d, d] -> [d]` with entry `(k, (i, j)) = mu[i][j][k]`,
//! `delta: [d] -> [d, d]` with entry `((i, j), k) = delta[k][i][j]`, and
//! `alpha: [d] -> [d]` whose column `j` is `alpha(e_j)`.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalars::ScalarRing;
use crate::tensor::{LinearOperator, ResidualNorm, TensorElement};

fn check_shape(op: &LinearOperator, out: &[usize], inp: &[usize], what: &str) -> Result<()> {
    if op.out_dims() != out || op.in_dims() != inp {
        return Err(Error::ShapeMismatch(format!(
            "{what} must map {inp:?} -> {out:?}, got {:?} -> {:?}",
            op.in_dims(),
            op.out_dims()
        )));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `(A, mu, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomAlgebra {
    ring: ScalarRing,
    dim: usize,
    mu: LinearOperator,
    alpha: LinearOperator,
}

impl HomAlgebra {
    pub fn new(mu: LinearOperator, alpha: LinearOperator) -> Result<Self> {
        let ring = *mu.ring();
        ring.ensure_compatible(alpha.ring(), "hom-algebra")?;
        let dim = alpha.rows();
        check_dim(dim)?;
        check_shape(&alpha, &[dim], &[dim], "alpha")?;
        check_shape(&mu, &[dim], &[dim, dim], "mu")?;
        Ok(HomAlgebra {
            ring,
            dim,
            mu,
            alpha,
        })
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> &LinearOperator {
        &self.mu
    }

    pub fn alpha(&self) -> &LinearOperator {
        &self.alpha
    }
}

/// `(C, delta, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomCoalgebra {
    ring: ScalarRing,
    dim: usize,
    delta: LinearOperator,
    alpha: LinearOperator,
}

impl HomCoalgebra {
    pub fn new(delta: LinearOperator, alpha: LinearOperator) -> Result<Self> {
        let ring = *delta.ring();
        ring.ensure_compatible(alpha.ring(), "hom-coalgebra")?;
        let dim = alpha.rows();
        check_dim(dim)?;
        check_shape(&alpha, &[dim], &[dim], "alpha")?;
        check_shape(&delta, &[dim, dim], &[dim], "delta")?;
        Ok(HomCoalgebra {
            ring,
            dim,
            delta,
            alpha,
        })
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> &LinearOperator {
        &self.delta
    }

    pub fn alpha(&self) -> &LinearOperator {
        &self.alpha
    }
}

/// `(A, mu, delta, alpha)` with an optional weak unit `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomBialgebra {
    ring: ScalarRing,
    dim: usize,
    mu: LinearOperator,
    delta: LinearOperator,
    alpha: LinearOperator,
    weak_unit: Option<TensorElement>,
}

impl HomBialgebra {
    pub fn new(
        mu: LinearOperator,
        delta: LinearOperator,
        alpha: LinearOperator,
        weak_unit: Option<TensorElement>,
    ) -> Result<Self> {
        let algebra = HomAlgebra::new(mu, alpha)?;
        let HomAlgebra {
            ring,
            dim,
            mu,
            alpha,
        } = algebra;
        ring.ensure_compatible(delta.ring(), "hom-bialgebra")?;
        check_shape(&delta, &[dim, dim], &[dim], "delta")?;
        if let Some(c) = &weak_unit {
            ring.ensure_compatible(c.ring(), "weak unit")?;
            if c.leg_dims() != [dim] {
                return Err(Error::ShapeMismatch(format!(
                    "weak unit must have legs [{dim}], got {:?}",
                    c.leg_dims()
                )));
            }
        }
        Ok(HomBialgebra {
            ring,
            dim,
            mu,
            delta,
            alpha,
            weak_unit,
        })
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> &LinearOperator {
        &self.mu
    }

    pub fn delta(&self) -> &LinearOperator {
        &self.delta
    }

    pub fn alpha(&self) -> &LinearOperator {
        &self.alpha
    }

    pub fn weak_unit(&self) -> Option<&TensorElement> {
        self.weak_unit.as_ref()
    }

    pub fn with_weak_unit(mut self, c: Option<TensorElement>) -> Result<Self> {
        self.weak_unit = None;
        HomBialgebra::new(self.mu, self.delta, self.alpha, c)
    }

    pub fn algebra(&self) -> HomAlgebra {
        HomAlgebra {
            ring: self.ring,
            dim: self.dim,
            mu: self.mu.clone(),
            alpha: self.alpha.clone(),
        }
    }

    pub fn coalgebra(&self) -> HomCoalgebra {
        HomCoalgebra {
            ring: self.ring,
            dim: self.dim,
            delta: self.delta.clone(),
            alpha: self.alpha.clone(),
        }
    }

    /// Product of two elements of `A`.
    pub fn multiply(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
        self.mu.apply(&x.tensor(y)?)
    }
}

/// Named residuals with the tolerance they are judged against.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    entries: Vec<(String, f64)>,
    tolerance: f64,
    order: Option<usize>,
    hypotheses_verified: bool,
}

impl VerificationReport {
    pub fn new(tolerance: f64) -> Self {
        VerificationReport {
            entries: Vec::new(),
            tolerance,
            order: None,
            hypotheses_verified: true,
        }
    }

    pub fn for_ring(ring: &ScalarRing) -> Self {
        let mut r = Self::new(ring.tolerance());
        r.order = ring.series_order();
        r
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64) {
        self.entries.push((name.into(), residual));
    }

    /// Appends another report's entries, prefixing their names.
    pub fn extend(&mut self, prefix: &str, other: &VerificationReport) {
        for (name, r) in &other.entries {
            let name = if prefix.is_empty() {
                name.clone()
            } else {
                format!("{prefix}.{name}")
            };
            self.entries.push((name, *r));
        }
        self.hypotheses_verified &= other.hypotheses_verified;
    }

    pub fn mark_unverified(&mut self) {
        self.hypotheses_verified = false;
    }

    pub fn hypotheses_verified(&self) -> bool {
        self.hypotheses_verified
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| *r)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn set_order(&mut self, order: Option<usize>) {
        self.order = order;
    }

    /// True iff every residual is below the tolerance. NaN never passes.
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|(_, r)| *r < self.tolerance)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &(String, f64)> {
        self.entries.iter().filter(|(_, r)| !(*r < self.tolerance))
    }

    pub fn to_json(&self) -> Value {
        let axioms: Map<String, Value> = self
            .entries
            .iter()
            .map(|(n, r)| {
                let v = if r.is_finite() {
                    json!(r)
                } else {
                    json!(r.to_string())
                };
                (n.clone(), v)
            })
            .collect();
        let mut out = json!({
            "axioms": axioms,
            "tolerance": self.tolerance,
            "pass": self.pass(),
        });
        if let Some(o) = self.order {
            out["order"] = json!(o);
        }
        if !self.hypotheses_verified {
            out["status"] = json!("unverified-hypotheses");
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        for (name, r) in &self.entries {
            let mark = if *r < self.tolerance { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {name:<width$}  {r:.3e}")?;
        }
        write!(f, "tolerance {:.1e}", self.tolerance)?;
        if let Some(o) = self.order {
            write!(f, ", order {o}")?;
        }
        if !self.hypotheses_verified {
            write!(f, ", unverified-hypotheses")?;
        }
        write!(f, ": {}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

fn residual(lhs: &LinearOperator, rhs: &LinearOperator) -> Result<f64> {
    Ok(lhs.try_sub(rhs)?.residual_norm())
}

/// `mu ∘ (alpha ⊗ mu) - mu ∘ (mu ⊗ alpha)` on `A^{⊗3}`.
pub fn check_hom_associativity(a: &HomAlgebra) -> Result<f64> {
    let lhs = a.mu.compose(&a.alpha.kron(&a.mu)?)?;
    let rhs = a.mu.compose(&a.mu.kron(&a.alpha)?)?;
    residual(&lhs, &rhs)
}

/// `alpha ∘ mu - mu ∘ alpha^{⊗2}`.
pub fn check_multiplicativity(a: &HomAlgebra) -> Result<f64> {
    let lhs = a.alpha.compose(&a.mu)?;
    let rhs = a.mu.compose(&a.alpha.kron(&a.alpha)?)?;
    residual(&lhs, &rhs)
}

/// `(alpha ⊗ delta) ∘ delta - (delta ⊗ alpha) ∘ delta`.
pub fn check_hom_coassociativity(c: &HomCoalgebra) -> Result<f64> {
    let lhs = c.alpha.kron(&c.delta)?.compose(&c.delta)?;
    let rhs = c.delta.kron(&c.alpha)?.compose(&c.delta)?;
    residual(&lhs, &rhs)
}

/// `alpha^{⊗2} ∘ delta - delta ∘ alpha`.
pub fn check_comultiplicativity(c: &HomCoalgebra) -> Result<f64> {
    let lhs = c.alpha.kron(&c.alpha)?.compose(&c.delta)?;
    let rhs = c.delta.compose(&c.alpha)?;
    residual(&lhs, &rhs)
}

/// `delta ∘ mu - mu^{⊗2} ∘ (Id ⊗ tau ⊗ Id) ∘ delta^{⊗2}`.
pub fn check_compatibility(b: &HomBialgebra) -> Result<f64> {
    let lhs = b.delta.compose(&b.mu)?;
    let rhs =
        b.mu.kron(&b.mu)?
            .permute_inputs(&[0, 2, 1, 3])?
            .compose(&b.delta.kron(&b.delta)?)?;
    residual(&lhs, &rhs)
}

/// Left and right weak-unit residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakUnitResidual {
    pub left: f64,
    pub right: f64,
}

impl WeakUnitResidual {
    pub fn max(&self) -> f64 {
        self.left.max(self.right)
    }
}

/// Left multiplication by `c` as an operator `[d] -> [d]`.
pub fn left_multiplication(mu: &LinearOperator, c: &TensorElement) -> Result<LinearOperator> {
    let d = c.leg_dims()[0];
    let id = LinearOperator::identity(*c.ring(), &[d]);
    let col = LinearOperator::from_fn(*c.ring(), &[d], &[1], |r, _| c.coeffs()[r].clone());
    mu.compose(&col.kron(&id)?)?.reshape(&[d], &[d])
}

/// Right multiplication by `c` as an operator `[d] -> [d]`.
pub fn right_multiplication(mu: &LinearOperator, c: &TensorElement) -> Result<LinearOperator> {
    let d = c.leg_dims()[0];
    let id = LinearOperator::identity(*c.ring(), &[d]);
    let col = LinearOperator::from_fn(*c.ring(), &[d], &[1], |r, _| c.coeffs()[r].clone());
    mu.compose(&id.kron(&col)?)?.reshape(&[d], &[d])
}

/// Residuals of `alpha(x) = cx` and `alpha(x) = xc` over the basis.
pub fn check_weak_unit(b: &HomBialgebra, c: &TensorElement) -> Result<WeakUnitResidual> {
    b.ring.ensure_compatible(c.ring(), "weak unit")?;
    if c.leg_dims() != [b.dim] {
        return Err(Error::ShapeMismatch(format!(
            "weak unit must have legs [{}], got {:?}",
            b.dim,
            c.leg_dims()
        )));
    }
    Ok(WeakUnitResidual {
        left: residual(&b.alpha, &left_multiplication(&b.mu, c)?)?,
        right: residual(&b.alpha, &right_multiplication(&b.mu, c)?)?,
    })
}

/// Solves the linear system `alpha = L_c = R_c` for `c`. Returns `None`
/// when no weak unit exists within the ring tolerance.
pub fn find_weak_unit(b: &HomBialgebra) -> Result<Option<TensorElement>> {
    let d = b.dim;
    let ring = b.ring;
    // Row (side, k, i) of the system: sum_p c_p mu[p][i][k] (left) or
    // mu[i][p][k] (right) = alpha[k][i].
    let mut system = LinearOperator::zeros(ring, &[2, d, d], &[d]);
    let mut rhs = TensorElement::zeros(ring, &[2, d, d]);
    for k in 0..d {
        for i in 0..d {
            for p in 0..d {
                system.set_entry(k * d + i, p, b.mu.entry(k, p * d + i).clone());
                system.set_entry(d * d + k * d + i, p, b.mu.entry(k, i * d + p).clone());
            }
            rhs.set(&[0, k, i], b.alpha.entry(k, i).clone());
            rhs.set(&[1, k, i], b.alpha.entry(k, i).clone());
        }
    }
    let c = system.solve(&rhs)?;
    let check = check_weak_unit(b, &c)?;
    Ok((check.max() < ring.tolerance()).then_some(c))
}

/// The dual `(A*, delta*, mu*, alpha*)` in the dual basis. Structure tensors
/// are transposed, so applying this twice returns the input tensors exactly.
/// The weak unit is not carried over: the dual's weak unit lives in `A*`,
/// where none is supplied; [`find_weak_unit`] recovers one when it exists.
pub fn dualize(b: &HomBialgebra) -> Result<HomBialgebra> {
    HomBialgebra::new(
        b.delta.transpose(),
        b.mu.transpose(),
        b.alpha.transpose(),
        None,
    )
}

/// The five Hom-bialgebra residuals, plus the weak-unit residual if `c` is set.
pub fn check_all_bialgebra(b: &HomBialgebra) -> Result<VerificationReport> {
    let algebra = b.algebra();
    let coalgebra = b.coalgebra();
    let mut report = VerificationReport::for_ring(&b.ring);
    report.push("hom_associativity", check_hom_associativity(&algebra)?);
    report.push("multiplicativity", check_multiplicativity(&algebra)?);
    report.push(
        "hom_coassociativity",
        check_hom_coassociativity(&coalgebra)?,
    );
    report.push("comultiplicativity", check_comultiplicativity(&coalgebra)?);
    report.push("compatibility", check_compatibility(b)?);
    if let Some(c) = &b.weak_unit {
        report.push("weak_unit", check_weak_unit(b, c)?.max());
    }
    Ok(report)
}
