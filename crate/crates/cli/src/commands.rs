use std::path::{Path, PathBuf};

use homqg::catalog::{
    anyonic_twisted, bicharacter_r, check_group_r, exp_bicharacter, function_bialgebra,
    group_bialgebra, FiniteAbelianGroup, Uhsl2Model,
};
use homqg::hommodules::{
    braid_operators, build_b, check_braid_relations, check_hybe, regular_module, uhsl2_b_alpha,
    HybeSolution,
};
use homqg::homstruct::{check_all_bialgebra, VerificationReport};
use homqg::io::StructureFile;
use homqg::quasitri::{check_all_qt, is_alpha_invariant, QTHomBialgebra};
use homqg::twisting::{qt_yau_twist, qt_yau_twist_powered, twist_r, yau_twist, TwistOptions};
use homqg::{LinearOperator, ScalarRing, DEFAULT_ORDER};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::files::{self, Overrides};
use crate::outcome::{Failure, Status};
use crate::{CatalogCmd, Cli, Command, Format, HybeArgs, HybeModel, HybeShared};

/// A report plus residuals that are shown but do not decide pass/fail.
struct Outcome {
    report: VerificationReport,
    info: Vec<(String, f64)>,
}

impl Outcome {
    fn new(report: VerificationReport) -> Self {
        Outcome {
            report,
            info: Vec::new(),
        }
    }

    fn status(&self) -> Status {
        if self.report.pass() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn text(&self) -> String {
        let mut s = self.report.to_string();
        for (name, r) in &self.info {
            s.push_str(&format!("\ninfo {name}  {r:.3e}"));
        }
        s
    }

    fn json(&self) -> Value {
        let mut v = self.report.to_json();
        if !self.info.is_empty() {
            let info: serde_json::Map<String, Value> = self
                .info
                .iter()
                .map(|(n, r)| (n.clone(), json!(r)))
                .collect();
            v["info"] = Value::Object(info);
        }
        v
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => files::pretty(&self.json()),
        }
    }
}

struct Ctx {
    ov: Overrides,
    format: Format,
    out: Option<PathBuf>,
    verify: bool,
}

impl Ctx {
    fn ring(&self) -> Result<ScalarRing, Failure> {
        let ring = ScalarRing::complex();
        Ok(match self.ov.tolerance {
            Some(t) => ring.with_tolerance(t)?,
            None => ring,
        })
    }

    fn series_ring(&self) -> Result<ScalarRing, Failure> {
        let ring = ScalarRing::series(self.ov.order.unwrap_or(DEFAULT_ORDER))?;
        Ok(match self.ov.tolerance {
            Some(t) => ring.with_tolerance(t)?,
            None => ring,
        })
    }

    fn opts(&self) -> TwistOptions {
        // The CLI re-verifies the emitted file itself.
        TwistOptions { verify: false }
    }
}

pub fn run(cli: &Cli) -> Result<Status, Failure> {
    let c = &cli.common;
    let ctx = Ctx {
        ov: Overrides {
            tolerance: c.tolerance,
            order: c.order.map(|o| o as usize),
        },
        format: c.format,
        out: c.out.clone(),
        verify: !c.no_verify,
    };
    match &cli.command {
        Command::Verify { files } => verify(&ctx, files),
        Command::Catalog(cmd) => catalog(&ctx, cmd),
        Command::Twist {
            structure,
            alpha,
            power,
        } => twist(&ctx, structure, alpha.as_deref(), *power),
        Command::Hybe(args) => hybe(&ctx, args),
        Command::Braid {
            matrix,
            alpha,
            strands,
        } => braid(&ctx, matrix, alpha.as_deref(), *strands),
    }
}

fn verify_structure(s: &StructureFile) -> Result<Outcome, Failure> {
    match s.qt() {
        None => Ok(Outcome::new(check_all_bialgebra(&s.bialgebra)?)),
        Some(q) => {
            let q = q?;
            let mut out = Outcome::new(check_all_qt(&q)?);
            out.info
                .push(("alpha_invariance".into(), is_alpha_invariant(&q)?));
            Ok(out)
        }
    }
}

fn verify(ctx: &Ctx, paths: &[PathBuf]) -> Result<Status, Failure> {
    let results: Vec<Result<Outcome, Failure>> = paths
        .par_iter()
        .map(|p| verify_structure(&files::read_structure(p, ctx.ov)?))
        .collect();

    let mut status = Status::Pass;
    let mut text = Vec::new();
    let mut docs = Vec::new();
    for (path, res) in paths.iter().zip(&results) {
        let shown = path.display().to_string();
        match res {
            Ok(o) => {
                status = status.max(o.status());
                text.push(if paths.len() > 1 {
                    format!("{shown}\n{}", o.text())
                } else {
                    o.text()
                });
                let mut v = o.json();
                if paths.len() > 1 {
                    v["file"] = json!(shown);
                }
                docs.push(v);
            }
            Err(f) => {
                status = status.max(f.status);
                eprintln!("error: {f}");
                docs.push(json!({"file": shown, "error": f.message}));
            }
        }
    }
    let rendered = match ctx.format {
        Format::Text => text.join("\n\n"),
        Format::Json if docs.len() == 1 => files::pretty(&docs[0]),
        Format::Json => files::pretty(&Value::Array(docs)),
    };
    files::emit(ctx.out.as_deref(), &rendered)?;
    Ok(status)
}

/// Re-reads a constructed structure under the overrides, verifies it unless
/// disabled, and writes it only if it passes.
fn finish_structure(ctx: &Ctx, s: &StructureFile) -> Result<Status, Failure> {
    let s = files::reload_structure(s, ctx.ov)?;
    if ctx.verify {
        let o = verify_structure(&s)?;
        eprintln!("{}", o.render(ctx.format));
        if o.status() != Status::Pass {
            let names: Vec<&str> = o.report.failures().map(|(n, _)| n.as_str()).collect();
            return Err(Failure::fail(format!(
                "constructed structure failed verification: {}",
                names.join(", ")
            )));
        }
    }
    files::emit(ctx.out.as_deref(), &s.to_json_string()?)?;
    Ok(Status::Pass)
}

fn catalog(ctx: &Ctx, cmd: &CatalogCmd) -> Result<Status, Failure> {
    match cmd {
        CatalogCmd::Anyon { n, k, t } => {
            let q = anyonic_twisted(*n, *k, *t, ctx.opts())?;
            finish_structure(ctx, &StructureFile::from_qt(&q))
        }
        CatalogCmd::Kg { orders, r } => {
            let ring = ctx.ring()?;
            let g = FiniteAbelianGroup::new(orders.clone())?;
            let table = files::read_matrix(r, "R", &ring, g.order())?;
            let (first, second) = check_group_r(&g, &table)?;
            let tol = ring.tolerance();
            if !(first < tol) {
                return Err(Failure::from(hypothesis(
                    "R table: sum_{xy=v} R(u,x) R(w,y) = delta_{u,w} R(u,v)",
                    first,
                    tol,
                )));
            }
            if !(second < tol) {
                return Err(Failure::from(hypothesis(
                    "R table: sum_{xy=u} R(x,v) R(y,w) = delta_{v,w} R(u,v)",
                    second,
                    tol,
                )));
            }
            let q = QTHomBialgebra::from_matrix(group_bialgebra(&g, ring)?, &table)?;
            finish_structure(ctx, &StructureFile::from_qt(&q))
        }
        CatalogCmd::Kfun { orders, .. } => {
            let ring = ctx.ring()?;
            let g = FiniteAbelianGroup::new(orders.clone())?;
            let r = bicharacter_r(&g, &exp_bicharacter(&g, ring))?;
            let q = QTHomBialgebra::from_matrix(function_bialgebra(&g, ring)?, &r)?;
            finish_structure(ctx, &StructureFile::from_qt(&q))
        }
        CatalogCmd::Uhsl2 { n, m, c } => uhsl2_operator(ctx, *n, *m, *c),
    }
}

fn hypothesis(what: &str, residual: f64, tol: f64) -> homqg::Error {
    homqg::Error::Hypothesis {
        hypothesis: what.into(),
        residual: Some(residual),
        tolerance: tol,
    }
}

fn uhsl2_operator(ctx: &Ctx, n: usize, m: usize, c: Complex64) -> Result<Status, Failure> {
    let model = Uhsl2Model::with_ring(c, ctx.series_ring()?)?;
    let r = model.r_operator(n, m)?;
    if ctx.verify {
        let mut report = VerificationReport::for_ring(model.ring());
        report.push(
            format!("intertwining_v{n}"),
            model.intertwining_residual(n)?,
        );
        if m != n {
            report.push(
                format!("intertwining_v{m}"),
                model.intertwining_residual(m)?,
            );
        }
        report.push("r_alpha_invariance", model.r_invariance_residual(n, m)?);
        let o = Outcome::new(report);
        eprintln!("{}", o.render(ctx.format));
        if o.status() != Status::Pass {
            return Err(Failure::fail("R operator failed verification"));
        }
    }
    files::emit(
        ctx.out.as_deref(),
        &files::pretty(&files::operator_with_alpha(&r, None)?),
    )?;
    Ok(Status::Pass)
}

fn twist(
    ctx: &Ctx,
    structure: &Path,
    alpha: Option<&Path>,
    power: Option<u32>,
) -> Result<Status, Failure> {
    let s = files::read_structure(structure, ctx.ov)?;
    let b = &s.bialgebra;
    let out = match (alpha, power) {
        (Some(path), _) => {
            let a = files::read_matrix(path, "alpha", b.ring(), b.dim())?;
            match (&s.r, power) {
                (Some(r), p) => {
                    let d = b.dim();
                    let r = LinearOperator::from_rows(*b.ring(), &[d], &[d], r.coeffs().to_vec())?;
                    let q = match p {
                        Some(p) => qt_yau_twist_powered(b, &r, &a, p, ctx.opts())?,
                        None => qt_yau_twist(b, &r, &a, ctx.opts())?,
                    };
                    StructureFile::from_qt(&q)
                }
                (None, Some(_)) => return Err(Failure::input("--power needs a structure with R")),
                (None, None) => StructureFile {
                    bialgebra: yau_twist(b, &a, ctx.opts())?,
                    r: None,
                },
            }
        }
        (None, Some(p)) => {
            let q = s
                .qt()
                .ok_or_else(|| Failure::input("--power needs a structure with R"))??;
            StructureFile::from_qt(&twist_r(&q, p, ctx.opts())?)
        }
        (None, None) => return Err(Failure::input("twist needs --alpha, --power, or both")),
    };
    finish_structure(ctx, &out)
}

fn hybe(ctx: &Ctx, args: &HybeArgs) -> Result<Status, Failure> {
    let (solution, shared) = match &args.model {
        Some(HybeModel::Uhsl2 { n, c, shared }) => {
            let model = Uhsl2Model::with_ring(*c, ctx.series_ring()?)?;
            (uhsl2_b_alpha(&model, *n, shared.force)?, shared)
        }
        None => {
            let path = args.structure.as_deref().ok_or_else(|| {
                Failure::input("hybe needs --structure <file> or the uhsl2 model")
            })?;
            let s = files::read_structure(path, ctx.ov)?;
            let q = s.qt().ok_or_else(|| {
                Failure::input(format!("{}: structure has no R", path.display()))
            })??;
            let m = regular_module(&q)?;
            (build_b(&q, &m, args.shared.force)?, &args.shared)
        }
    };
    report_solution(ctx, &solution, shared)
}

fn report_solution(ctx: &Ctx, s: &HybeSolution, shared: &HybeShared) -> Result<Status, Failure> {
    let mut report = check_hybe(s)?;
    if let Some(strands) = shared.strands {
        report.extend("", &check_braid_relations(&braid_operators(s, strands)?)?);
    }
    if let Some(path) = &shared.emit_matrix {
        let v = files::operator_with_alpha(s.b(), Some(s.alpha()))?;
        files::emit(Some(path), &files::pretty(&v))?;
    }
    let o = Outcome::new(report);
    files::emit(ctx.out.as_deref(), &o.render(ctx.format))?;
    Ok(o.status())
}

fn braid(
    ctx: &Ctx,
    matrix: &Path,
    alpha: Option<&Path>,
    strands: usize,
) -> Result<Status, Failure> {
    let (b, stored) = files::read_operator(matrix, ctx.ov)?;
    let m = match b.out_dims() {
        [m, _] => *m,
        _ => (b.rows() as f64).sqrt().round() as usize,
    };
    let alpha = match (alpha, stored) {
        (Some(path), _) => files::read_matrix(path, "alpha", b.ring(), m)?,
        (None, Some(a)) => a,
        (None, None) => LinearOperator::identity(*b.ring(), &[m]),
    };
    let s = HybeSolution::new(b, alpha)?;
    let report = check_braid_relations(&braid_operators(&s, strands)?)?;
    let o = Outcome::new(report);
    files::emit(ctx.out.as_deref(), &o.render(ctx.format))?;
    Ok(o.status())
}
