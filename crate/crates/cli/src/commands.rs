//! Subcommand implementations. Each returns a report, the exit code it
//! implies, and any extra documents to write.

use std::path::PathBuf;

use povmkit::compat::{
    coexistent_with, extract_kernel_rank1, jointly_measurable, rank1_coexistence_kernel, smear, JointObservable,
    MethodChoice, RangeInclusion, Status,
};
use povmkit::povm::{is_regular, naimark_dilate};
use povmkit::structure::{equivalence_classes, is_extreme, relabel};
use povmkit::{fixtures, Error, Matrix, Povm, Tolerances};
use serde::Serialize;
use serde_json::json;

use crate::args::Command;
use crate::document::{canonical_json, matrix_doc, parse, JointDocument, KernelDocument, MatrixDoc, PovmDocument};
use crate::error::{CliError, EXIT_INVALID, EXIT_OK, EXIT_UNDECIDED};
use crate::report::{fixture_json, load, Input, InputDigest, Report};

/// A file to write alongside the report.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

/// What a command produced.
#[derive(Debug, Clone)]
pub enum Output {
    Report(Report),
    /// Raw text (fixture documents and listings).
    Text(String),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: Output,
    pub exit: i32,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn report(report: Report, exit: i32) -> Self {
        Self { output: Output::Report(report), exit, artifacts: Vec::new() }
    }

    fn with_artifact(mut self, path: Option<PathBuf>, contents: impl FnOnce() -> String) -> Self {
        if let Some(path) = path {
            self.artifacts.push(Artifact { path, contents: contents() });
        }
        self
    }

    /// Text written to stdout or `--out`.
    pub fn text(&self) -> String {
        match &self.output {
            Output::Report(r) => canonical_json(r),
            Output::Text(t) => t.clone(),
        }
    }
}

struct Ctx<'a> {
    tol: &'a Tolerances,
    prune_zero: bool,
    inputs: Vec<InputDigest>,
}

impl Ctx<'_> {
    fn input(&mut self, role: &str, source: &str) -> Result<Input, CliError> {
        let input = load(role, source)?;
        self.inputs.push(input.digest.clone());
        Ok(input)
    }

    fn povm_doc(&mut self, role: &str, source: &str) -> Result<PovmDocument, CliError> {
        let input = self.input(role, source)?;
        let mut doc: PovmDocument = parse(&input.bytes, source)?;
        if self.prune_zero {
            let (labels, mats) = doc.parts()?;
            let zero: Vec<bool> = mats.iter().map(|e| e.max_abs() <= self.tol.validate).collect();
            let digest = self.inputs.last_mut().expect("input was just recorded");
            digest.pruned = labels.into_iter().zip(&zero).filter(|(_, &z)| z).map(|(l, _)| l).collect();
            doc.outcomes = doc.outcomes.into_iter().zip(zero).filter(|(_, z)| !z).map(|(o, _)| o).collect();
        }
        Ok(doc)
    }

    fn povm(&mut self, role: &str, source: &str) -> Result<Povm, CliError> {
        let doc = self.povm_doc(role, source)?;
        doc.to_povm(self.tol)
    }

    fn report(self, command: &str, verdict: impl Serialize) -> Report {
        Report {
            command: command.into(),
            inputs: self.inputs,
            verdict: serde_json::to_value(verdict).expect("verdicts serialize"),
            tolerances_used: self.tol.into(),
        }
    }
}

/// Runs one subcommand; `prune_zero` drops zero effects from input POVMs.
pub fn run(command: &Command, tol: &Tolerances, prune_zero: bool) -> Result<Outcome, CliError> {
    let ctx = Ctx { tol, prune_zero, inputs: Vec::new() };
    match command {
        Command::Validate { povm } => validate(ctx, povm),
        Command::Analyze { povm } => analyze(ctx, povm),
        Command::Smear { povm, kernel, povm_out } => smear_cmd(ctx, povm, kernel, povm_out.clone()),
        Command::Joint { first, second, method, joint_out } => joint(ctx, first, second, *method, joint_out.clone()),
        Command::Coexist { first, second, witness } => coexist(ctx, first, second, witness),
        Command::KernelExtract { povm, joint, kernel_out } => kernel_extract(ctx, povm, joint, kernel_out.clone()),
        Command::Fixtures { name, dir } => fixtures_cmd(name.as_deref(), dir.as_ref()),
    }
}

#[derive(Serialize)]
struct ValidateVerdict {
    valid: bool,
    dim: usize,
    outcomes: usize,
    labels: Vec<String>,
    ranks: Option<Vec<usize>>,
    rank_one: Option<bool>,
    violations: Vec<String>,
}

fn validate(mut ctx: Ctx, source: &str) -> Result<Outcome, CliError> {
    let doc = ctx.povm_doc("povm", source)?;
    let (labels, mats) = doc.parts()?;
    let violations = Povm::diagnose(&labels, &mats, ctx.tol);
    let valid = violations.is_empty();
    let (ranks, rank_one) = if valid {
        let m = Povm::with_labels(labels.clone(), mats, ctx.tol)?;
        let ranks = m.ranks(ctx.tol)?;
        let one = ranks.iter().all(|&r| r == 1);
        (Some(ranks), Some(one))
    } else {
        (None, None)
    };
    let verdict = ValidateVerdict {
        valid,
        dim: doc.dim,
        outcomes: labels.len(),
        labels,
        ranks,
        rank_one,
        violations: violations.iter().map(ToString::to_string).collect(),
    };
    Ok(Outcome::report(ctx.report("validate", verdict), if valid { EXIT_OK } else { EXIT_INVALID }))
}

#[derive(Serialize)]
struct DilationSummary {
    dim: usize,
    multiplicities: Vec<usize>,
    isometry_residual: f64,
    marginal_residual: f64,
    minimal: bool,
    unitary: bool,
}

#[derive(Serialize)]
struct AnalyzeVerdict {
    dim: usize,
    outcomes: usize,
    labels: Vec<String>,
    ranks: Vec<usize>,
    rank_one: bool,
    pvm: bool,
    extreme: bool,
    null_dim: usize,
    singular_ratio: f64,
    /// Fiber operators of a nonzero null vector, when not extreme.
    witness: Option<Vec<MatrixDoc>>,
    /// The same witness as effects summing to zero.
    witness_effects: Option<Vec<MatrixDoc>>,
    /// `null` when the outcome count exceeds the range cap.
    regular: Option<bool>,
    /// Proportionality classes, for rank-1 POVMs.
    classes: Option<Vec<Vec<String>>>,
    relabeling_pvm: Option<bool>,
    dilation: DilationSummary,
}

fn docs(ms: &[Matrix]) -> Vec<MatrixDoc> {
    ms.iter().map(matrix_doc).collect()
}

fn analyze(mut ctx: Ctx, source: &str) -> Result<Outcome, CliError> {
    let m = ctx.povm("povm", source)?;
    let tol = ctx.tol;
    let ranks = m.ranks(tol)?;
    let rank_one = ranks.iter().all(|&r| r == 1);
    let ext = is_extreme(&m, tol)?;
    let regular = match is_regular(&m, tol) {
        Ok(r) => Some(r),
        Err(Error::TooManyOutcomes { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let (classes, relabeling_pvm) = if rank_one {
        let p = equivalence_classes(&m, tol)?;
        let merged = relabel(&m, &p, tol)?;
        (Some(p.labelled(&m)), Some(merged.is_pvm(tol)))
    } else {
        (None, None)
    };
    let dil = naimark_dilate(&m, tol)?;
    let res = dil.residuals(tol);
    let verdict = AnalyzeVerdict {
        dim: m.dim(),
        outcomes: m.len(),
        labels: m.labels().to_vec(),
        rank_one,
        pvm: m.is_pvm(tol),
        extreme: ext.extreme,
        null_dim: ext.null_dim,
        singular_ratio: ext.singular_ratio,
        witness: ext.witness.as_deref().map(docs),
        witness_effects: ext.effect_witness(&m, tol)?.as_deref().map(docs),
        regular,
        classes,
        relabeling_pvm,
        dilation: DilationSummary {
            dim: dil.total_dim(),
            multiplicities: dil.multiplicities(),
            isometry_residual: res.isometry,
            marginal_residual: res.marginals,
            minimal: res.minimal,
            unitary: dil.is_unitary(tol.validate),
        },
        ranks,
    };
    Ok(Outcome::report(ctx.report("analyze", verdict), EXIT_OK))
}

fn smear_cmd(mut ctx: Ctx, source: &str, kernel_src: &str, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let m = ctx.povm("povm", source)?;
    let kin = ctx.input("kernel", kernel_src)?;
    let kdoc: KernelDocument = parse(&kin.bytes, kernel_src)?;
    if kdoc.rows != m.labels() {
        return Err(CliError::Invalid(format!(
            "kernel rows {:?} do not match POVM labels {:?}",
            kdoc.rows,
            m.labels()
        )));
    }
    let k = kdoc.to_kernel(ctx.tol)?;
    let smeared = smear(&m, &k, ctx.tol)?.relabelled(kdoc.cols.clone())?;
    let doc = PovmDocument::from_povm(&smeared);
    let text = canonical_json(&doc);
    let report = ctx.report("smear", json!({ "povm": doc }));
    Ok(Outcome::report(report, EXIT_OK).with_artifact(out, || text))
}

#[derive(Serialize)]
struct JointVerdict {
    status: String,
    method: String,
    heuristic: bool,
    /// The kernel maps the second POVM onto the first.
    swapped: bool,
    residual: f64,
    iterations: usize,
    kernel: Option<KernelDocument>,
    joint: Option<JointDocument>,
}

fn joint(
    mut ctx: Ctx,
    first: &str,
    second: &str,
    method: MethodChoice,
    out: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let m = ctx.povm("first", first)?;
    let mp = ctx.povm("second", second)?;
    let r = jointly_measurable(&m, &mp, method, ctx.tol)?;
    let (src, dst) = if r.swapped { (&mp, &m) } else { (&m, &mp) };
    let kernel = r.kernel.as_ref().map(|k| KernelDocument::from_kernel(k, src.labels(), dst.labels()));
    let joint = r.joint.as_ref().map(JointDocument::from_joint);
    let exit = if r.status == Status::Undecided { EXIT_UNDECIDED } else { EXIT_OK };
    let artifact = joint.as_ref().map(canonical_json);
    let verdict = JointVerdict {
        status: r.status.to_string(),
        method: r.method.to_string(),
        heuristic: r.heuristic,
        swapped: r.swapped,
        residual: r.residual,
        iterations: r.iterations,
        kernel,
        joint,
    };
    let mut outcome = Outcome::report(ctx.report("joint", verdict), exit);
    if let (Some(path), Some(text)) = (out, artifact) {
        outcome.artifacts.push(Artifact { path, contents: text });
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct ElementWitness {
    subset: Vec<String>,
    witness: Option<Vec<String>>,
}

#[derive(Serialize)]
struct InclusionDoc {
    included: bool,
    elements: Vec<ElementWitness>,
}

fn inclusion_doc(inc: &RangeInclusion, a: &Povm, b: &Povm) -> InclusionDoc {
    let names = |m: &Povm, ix: &[usize]| ix.iter().map(|&k| m.labels()[k].clone()).collect::<Vec<_>>();
    InclusionDoc {
        included: inc.included,
        elements: inc
            .witnesses
            .iter()
            .map(|(s, w)| ElementWitness { subset: names(a, s), witness: w.as_ref().map(|w| names(b, w)) })
            .collect(),
    }
}

#[derive(Serialize)]
struct ClassSubset {
    class: Vec<String>,
    subset: Vec<String>,
}

#[derive(Serialize)]
struct SmearingKernel {
    kernel: KernelDocument,
    class_subsets: Vec<ClassSubset>,
    non_unique: bool,
}

#[derive(Serialize)]
struct CoexistVerdict {
    coexistent: bool,
    first: InclusionDoc,
    second: InclusionDoc,
    /// Kernel from a rank-1 first POVM onto the witness.
    smearing_kernel: Option<SmearingKernel>,
    smearing_kernel_error: Option<String>,
}

fn coexist(mut ctx: Ctx, first: &str, second: &str, witness: &str) -> Result<Outcome, CliError> {
    let tol = ctx.tol;
    let m = ctx.povm("first", first)?;
    let mp = ctx.povm("second", second)?;
    let mbar = ctx.povm("witness", witness)?;
    let rep = coexistent_with(&m, &mp, &mbar, tol)?;
    let (smearing_kernel, smearing_kernel_error) = if rep.first.included && m.is_rank_one(tol)? {
        match rank1_coexistence_kernel(&m, &mbar, tol) {
            Ok(ck) => {
                let names = |p: &Povm, ix: &[usize]| ix.iter().map(|&k| p.labels()[k].clone()).collect();
                let class_subsets = ck
                    .class_subsets
                    .iter()
                    .map(|(c, z)| ClassSubset { class: names(&m, c), subset: names(&mbar, z) })
                    .collect();
                let kernel = KernelDocument::from_kernel(&ck.kernel, m.labels(), mbar.labels());
                (Some(SmearingKernel { kernel, class_subsets, non_unique: ck.non_unique }), None)
            }
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let verdict = CoexistVerdict {
        coexistent: rep.coexistent,
        first: inclusion_doc(&rep.first, &m, &mbar),
        second: inclusion_doc(&rep.second, &mp, &mbar),
        smearing_kernel,
        smearing_kernel_error,
    };
    Ok(Outcome::report(ctx.report("coexist", verdict), EXIT_OK))
}

fn kernel_extract(mut ctx: Ctx, source: &str, joint_src: &str, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let tol = ctx.tol;
    let m = ctx.povm("povm", source)?;
    let jin = ctx.input("joint", joint_src)?;
    let jdoc: JointDocument = parse(&jin.bytes, joint_src)?;
    if jdoc.dim != m.dim() {
        return Err(CliError::Invalid(format!("joint has dim {}, POVM has dim {}", jdoc.dim, m.dim())));
    }
    if jdoc.rows != m.labels() {
        return Err(CliError::Invalid(format!("joint rows {:?} do not match POVM labels {:?}", jdoc.rows, m.labels())));
    }
    let grid = jdoc.grid()?;
    let second_effects = (0..jdoc.cols.len()).map(|j| Matrix::sum(m.dim(), grid.iter().map(|row| &row[j]))).collect();
    let second = Povm::with_labels(jdoc.cols.clone(), second_effects, tol)?;
    let joint = JointObservable::new(grid, &m, &second, tol)?;
    let k = extract_kernel_rank1(&m, &joint, tol)?;
    let doc = KernelDocument::from_kernel(&k, m.labels(), second.labels());
    let text = canonical_json(&doc);
    let res = joint.residuals(tol)?;
    let verdict = json!({ "kernel": doc, "marginal_residual": res.marginal(), "negativity": res.negativity + 0.0 });
    Ok(Outcome::report(ctx.report("kernel-extract", verdict), EXIT_OK).with_artifact(out, || text))
}

fn fixtures_cmd(name: Option<&str>, dir: Option<&PathBuf>) -> Result<Outcome, CliError> {
    if let Some(dir) = dir {
        let artifacts = fixtures::NAMES
            .iter()
            .map(|n| Ok(Artifact { path: dir.join(format!("{n}.json")), contents: fixture_json(n)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(Outcome { output: Output::Text(canonical_json(&fixtures::NAMES)), exit: EXIT_OK, artifacts });
    }
    let text = match name {
        Some(n) => fixture_json(n)?,
        None => canonical_json(&fixtures::NAMES),
    };
    Ok(Outcome { output: Output::Text(text), exit: EXIT_OK, artifacts: Vec::new() })
}
