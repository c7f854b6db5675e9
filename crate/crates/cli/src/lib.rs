//! Batch front end for the tempered workbench: parse algebra and module
//! files, run one analysis per invocation, and emit a deterministic
//! report (human-readable or JSON).
//!
//! Exit codes: 0 when no check failed, 1 when some check has status
//! `fail` or `error`, 2 for usage and input errors raised before any
//! computation (unreadable files, malformed documents, bad flags).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use tempered_core::algebra::{random_test_algebra, Algebra, Element, HomotopeSide, TestProfile};
use tempered_core::field::FieldSpec;
use tempered_core::io as tio;
use tempered_core::modules::{
    augmentation_modules, is_projective, recollement_report, regular_module, restrict_along, Side,
};
use tempered_core::nonassoc::{self, EnvelopeSide, Simplicity};
use tempered_core::structure;
use tempered_core::{fiber, Error as CoreError};

#[derive(Parser, Debug)]
#[command(name = "tempered", version, about = "Exact workbench for structure-constant algebras: homotopes, well-tempered elements, radicals, recollement and fiber-product checks")]
pub struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Associativity and unit checks for an algebra file.
    Check {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Jacobson radical (trace-form criterion).
    Radical {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Wedderburn blocks of the semisimple quotient.
    Blocks {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Build the homotope (or augmented homotope) at an element.
    Homotope {
        #[arg(long)]
        algebra: PathBuf,
        /// Element: comma-separated coordinates or a basis label.
        #[arg(long)]
        delta: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// Adjoin an external unit (requires associative unital input).
        #[arg(long)]
        augmented: bool,
        /// Write the resulting algebra document here.
        #[arg(long)]
        write_algebra: Option<PathBuf>,
    },
    /// Decide well-temperedness by the ideal criterion and by the
    /// projectivity of the augmentation ideal, and compare.
    WellTempered {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
    },
    /// Suitable normal form u delta v = s + r.
    NormalForm {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
    },
    /// Dimensions of the irreducible representations of the augmented
    /// homotope.
    RepDims {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
    },
    /// Projectivity of a module given by a module file.
    Projective {
        #[arg(long)]
        module: PathBuf,
    },
    /// Recollement identity report at an element.
    Recollement {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
        /// Sample A-module files (defaults to the regular module and the
        /// restricted semisimple quotient).
        #[arg(long, value_delimiter = ',')]
        modules: Vec<PathBuf>,
    },
    /// Two-method equivalence on seeded random instances.
    Oracle {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        /// Base field: `rationals` or `fp:<p>`.
        #[arg(long, default_value = "rationals")]
        field: String,
    },
    /// Non-associative toolkit.
    Nonassoc {
        #[command(subcommand)]
        cmd: NonassocCmd,
    },
    /// Fiber-product functors over commutative algebras.
    Fiber {
        #[command(subcommand)]
        cmd: FiberCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum NonassocCmd {
    /// Monte Carlo genericity fractions for random tensors.
    Density {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Fiber count of the right-homotope map on a constructed generic
    /// instance (expects 2^d preimages).
    Preimages {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Bruck invertibility class and one-sided simplicity of a sampled
    /// tensor.
    Classify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FiberCmd {
    /// Glue a module over the augmented homotope into a triple.
    Glue {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        write_triple: Option<PathBuf>,
    },
    /// Unglue a triple file back into a module over the augmented
    /// homotope.
    Unglue {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        write_module: Option<PathBuf>,
    },
    /// Kernel of the unit V -> unglue(glue(V)).
    UnitKernel {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        delta: String,
        /// Module file for V; alternatively use --u.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Element u of A delta A: computes V = B/(u).
        #[arg(long)]
        u: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

/// Deterministic run report: identical inputs and seeds produce
/// byte-identical structured output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            tool: "tempered".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: None,
            seed: None,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, status: Status, data: serde_json::Value) {
        self.checks.push(Check { name: name.into(), status, data });
    }

    pub fn exit_code(&self) -> i32 {
        let bad = self
            .checks
            .iter()
            .any(|c| matches!(c.status, Status::Fail | Status::Error));
        if bad {
            1
        } else {
            0
        }
    }
}

/// Renders the report. The structured format is JSON and round-trips
/// through serde; the human format is line-oriented.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "{} {} - {}", report.tool, report.version, report.command);
            if let Some(d) = &report.input_digest {
                let _ = writeln!(s, "input: {d}");
            }
            if let Some(seed) = report.seed {
                let _ = writeln!(s, "seed: {seed}");
            }
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Error => "ERROR",
                    Status::Inconclusive => "inconclusive",
                };
                if c.data.is_null() {
                    let _ = writeln!(s, "[{tag}] {}", c.name);
                } else {
                    let _ = writeln!(s, "[{tag}] {}: {}", c.name, c.data);
                }
            }
            s
        }
    }
}

/// Tracks the digest of every input file consumed by a command.
struct Inputs {
    hasher: Sha256,
    any: bool,
}

impl Inputs {
    fn new() -> Inputs {
        Inputs { hasher: Sha256::new(), any: false }
    }

    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.hasher.update(&bytes);
        self.any = true;
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    fn algebra(&mut self, path: &Path) -> anyhow::Result<Algebra> {
        let text = self.read(path)?;
        tio::parse_algebra_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }

    fn digest(self) -> Option<String> {
        self.any.then(|| {
            let out = self.hasher.finalize();
            let hex: String = out.iter().map(|b| format!("{b:02x}")).collect();
            format!("sha256:{hex}")
        })
    }
}

fn element_arg(a: &Algebra, text: &str) -> anyhow::Result<Element> {
    tio::parse_element(a, text).map_err(|e| anyhow!("--delta/--u: {e}"))
}

fn parse_field_flag(text: &str) -> anyhow::Result<FieldSpec> {
    if text == "rationals" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(p) = text.strip_prefix("fp:") {
        let p: u64 = p.parse().context("prime in --field fp:<p>")?;
        return Ok(FieldSpec::prime(p).map_err(|e| anyhow!("{e}"))?);
    }
    Err(anyhow!("--field must be `rationals` or `fp:<p>`"))
}

fn coords_json(e: &Element) -> serde_json::Value {
    serde_json::Value::Array(e.literals().into_iter().map(serde_json::Value::String).collect())
}

/// Runs one parsed command to a report. Input and usage problems surface
/// as `Err` (exit code 2); computation outcomes, including domain errors
/// like `NotSplit`, land in the report.
pub fn run_command(cli: &Command) -> anyhow::Result<Report> {
    match cli {
        Command::Check { algebra } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let mut report = Report::new("check");
            report.input_digest = inputs.digest();
            report.push(
                "associative",
                Status::Pass,
                serde_json::json!({ "value": a.is_associative() }),
            );
            let found = a.find_unit();
            report.push(
                "unit",
                Status::Pass,
                serde_json::json!({
                    "declared": a.is_unital(),
                    "found": found.as_ref().map(coords_json),
                }),
            );
            report.push("dimension", Status::Pass, serde_json::json!({ "value": a.dim() }));
            Ok(report)
        }
        Command::Radical { algebra } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let mut report = Report::new("radical");
            report.input_digest = inputs.digest();
            match structure::jacobson_radical(&a) {
                Ok(basis) => report.push(
                    "radical",
                    Status::Pass,
                    serde_json::json!({
                        "dim": basis.len(),
                        "basis": basis.iter().map(coords_json).collect::<Vec<_>>(),
                    }),
                ),
                Err(e) => report.push("radical", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::Blocks { algebra } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let mut report = Report::new("blocks");
            report.input_digest = inputs.digest();
            match structure::block_data(&a) {
                Ok(bd) => report.push(
                    "blocks",
                    Status::Pass,
                    serde_json::json!({
                        "block_sizes": bd.block_sizes,
                        "radical_dim": a.dim() - bd.semisimple.dim(),
                        "idempotents": bd.idempotents.iter().map(coords_json).collect::<Vec<_>>(),
                    }),
                ),
                Err(e @ CoreError::NotSplit(_)) => {
                    report.push("blocks", Status::Error, serde_json::json!({ "message": e.to_string() }))
                }
                Err(e) => report.push("blocks", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::Homotope { algebra, delta, side, augmented, write_algebra } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut report = Report::new("homotope");
            report.input_digest = inputs.digest();
            let side = match side {
                SideArg::Left => HomotopeSide::Left,
                SideArg::Right => HomotopeSide::Right,
            };
            let result = if *augmented {
                a.augmented_homotope(&delta)
            } else {
                Ok(a.homotope(&delta, side))
            };
            match result {
                Ok(h) => {
                    report.push(
                        "homotope",
                        Status::Pass,
                        serde_json::json!({
                            "augmented": augmented,
                            "dim": h.dim(),
                            "associative": h.is_associative(),
                            "unital": h.is_unital(),
                        }),
                    );
                    if let Some(path) = write_algebra {
                        tio::write_algebra_file(path, &h).map_err(|e| anyhow!("{e}"))?;
                        report.push(
                            "written",
                            Status::Pass,
                            serde_json::json!({ "path": path.display().to_string() }),
                        );
                    }
                }
                Err(e) => report.push("homotope", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::WellTempered { algebra, delta } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut report = Report::new("well-tempered");
            report.input_digest = inputs.digest();
            match well_tempered_two_ways(&a, &delta) {
                Ok((criterion, projective)) => {
                    report.push("criterion", Status::Pass, serde_json::json!({ "well_tempered": criterion }));
                    report.push(
                        "projectivity",
                        Status::Pass,
                        serde_json::json!({ "augmentation_ideal_projective": projective }),
                    );
                    report.push(
                        "methods-agree",
                        if criterion == projective { Status::Pass } else { Status::Fail },
                        serde_json::Value::Null,
                    );
                }
                Err(e) => report.push("well-tempered", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::NormalForm { algebra, delta } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut report = Report::new("normal-form");
            report.input_digest = inputs.digest();
            match structure::suitable_form(&a, &delta) {
                Ok(form) => report.push(
                    "normal-form",
                    Status::Pass,
                    serde_json::json!({
                        "s": coords_json(&form.s),
                        "r": coords_json(&form.r),
                        "u": coords_json(&form.u),
                        "v": coords_json(&form.v),
                        "i_sets": form.i_sets,
                    }),
                ),
                Err(e) => report.push("normal-form", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::RepDims { algebra, delta } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut report = Report::new("rep-dims");
            report.input_digest = inputs.digest();
            match (structure::block_ranks(&a, &delta), structure::homotope_rep_dims(&a, &delta)) {
                (Ok(ranks), Ok(dims)) => report.push(
                    "rep-dims",
                    Status::Pass,
                    serde_json::json!({ "block_ranks": ranks, "irreducible_dims": dims }),
                ),
                (Err(e), _) | (_, Err(e)) => {
                    report.push("rep-dims", Status::Error, serde_json::json!({ "message": e.to_string() }))
                }
            }
            Ok(report)
        }
        Command::Projective { module } => {
            let mut inputs = Inputs::new();
            let text = inputs.read(module)?;
            let doc: tio::ModuleDoc = serde_json::from_str(&text).with_context(|| format!("{}", module.display()))?;
            let m = tio::module_from_doc(&doc, module.parent()).map_err(|e| anyhow!("{}: {e}", module.display()))?;
            let mut report = Report::new("projective");
            report.input_digest = inputs.digest();
            match is_projective(&m) {
                Ok(value) => report.push(
                    "projective",
                    Status::Pass,
                    serde_json::json!({ "value": value, "dim": m.dim() }),
                ),
                Err(e) => report.push("projective", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::Recollement { algebra, delta, modules } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut samples = Vec::new();
            for path in modules {
                let text = inputs.read(path)?;
                let doc: tio::ModuleDoc = serde_json::from_str(&text).with_context(|| format!("{}", path.display()))?;
                samples.push(tio::module_from_doc(&doc, path.parent()).map_err(|e| anyhow!("{}: {e}", path.display()))?);
            }
            if samples.is_empty() {
                samples.push(regular_module(&a, Side::Left).map_err(|e| anyhow!("{e}"))?);
                if let Ok((_, proj)) = structure::semisimple_quotient(&a) {
                    let s_reg = regular_module(proj.target(), Side::Left).map_err(|e| anyhow!("{e}"))?;
                    samples.push(restrict_along(&proj, &s_reg).map_err(|e| anyhow!("{e}"))?);
                }
            }
            let mut report = Report::new("recollement");
            report.input_digest = inputs.digest();
            match recollement_report(&a, &delta, &samples) {
                Ok(rec) => {
                    report.push(
                        "well-tempered",
                        Status::Pass,
                        serde_json::json!({ "value": rec.well_tempered }),
                    );
                    for c in rec.checks {
                        report.push(
                            &c.name,
                            if c.pass { Status::Pass } else { Status::Fail },
                            if c.detail.is_empty() {
                                serde_json::Value::Null
                            } else {
                                serde_json::json!({ "detail": c.detail })
                            },
                        );
                    }
                }
                Err(e) => report.push("recollement", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        Command::Oracle { trials, seed, max_dim, field } => {
            let field = parse_field_flag(field)?;
            let mut report = Report::new("oracle");
            report.seed = Some(*seed);
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let profiles = [
                TestProfile::SplitSemisimple,
                TestProfile::SemisimplePlusNilpotent,
                TestProfile::TriangularLike,
            ];
            let mut agreements = 0usize;
            let mut mismatches = Vec::new();
            let mut k = 0u64;
            let mut done = 0usize;
            while done < *trials {
                let a = random_test_algebra(field, profiles[(k % 3) as usize], seed.wrapping_add(k));
                k += 1;
                if a.dim() > *max_dim {
                    continue;
                }
                let delta = match done % 5 {
                    0 | 3 => a.random_element(&mut rng),
                    1 => a.basis_element(rng.gen_range(0..a.dim())),
                    2 => a.zero_element(),
                    _ => a.unit().expect("constructed algebras are unital"),
                };
                match well_tempered_two_ways(&a, &delta) {
                    Ok((criterion, projective)) => {
                        if criterion == projective {
                            agreements += 1;
                        } else {
                            mismatches.push(serde_json::json!({
                                "trial": done,
                                "criterion": criterion,
                                "projective": projective,
                            }));
                        }
                    }
                    Err(e) => mismatches.push(serde_json::json!({ "trial": done, "error": e.to_string() })),
                }
                done += 1;
            }
            report.push(
                "agreement",
                if agreements == *trials { Status::Pass } else { Status::Fail },
                serde_json::json!({
                    "trials": trials,
                    "agreements": agreements,
                    "mismatches": mismatches,
                }),
            );
            Ok(report)
        }
        Command::Nonassoc { cmd } => run_nonassoc(cmd),
        Command::Fiber { cmd } => run_fiber(cmd),
    }
}

fn well_tempered_two_ways(a: &Algebra, delta: &Element) -> tempered_core::Result<(bool, bool)> {
    let criterion = a.is_well_tempered_criterion(delta)?;
    let aug = augmentation_modules(a, delta)?;
    let projective = is_projective(&aug.b_plus_left)? && is_projective(&aug.b_plus_right)?;
    Ok((criterion, projective))
}

fn run_nonassoc(cmd: &NonassocCmd) -> anyhow::Result<Report> {
    match cmd {
        NonassocCmd::Density { d, p, samples, seed } => {
            let field = FieldSpec::prime(*p).map_err(|e| anyhow!("{e}"))?;
            let mut report = Report::new("nonassoc density");
            report.seed = Some(*seed);
            let r = nonassoc::genericity_density(*d, field, *samples, *seed);
            report.push(
                "density",
                Status::Pass,
                serde_json::json!({
                    "d": d,
                    "p": p,
                    "samples": r.samples,
                    "l_invertible": r.l_invertible,
                    "r_invertible": r.r_invertible,
                    "simple_left": r.simple_left,
                    "simple_right": r.simple_right,
                    "frac_l_invertible": r.frac_l_invertible(),
                    "frac_r_invertible": r.frac_r_invertible(),
                    "frac_simple_left": r.frac_simple_left(),
                    "frac_simple_right": r.frac_simple_right(),
                }),
            );
            Ok(report)
        }
        NonassocCmd::Preimages { d, p, seed } => {
            let field = FieldSpec::prime(*p).map_err(|e| anyhow!("{e}"))?;
            let mut report = Report::new("nonassoc preimages");
            report.seed = Some(*seed);
            let (m, v) = generic_preimage_instance(*d, field, *seed);
            let m_prime = m.homotope(&v, HomotopeSide::Right);
            match nonassoc::homotope_preimages(&m_prime, &v) {
                Ok(pre) => {
                    let expected = 1usize << *d;
                    report.push(
                        "preimages",
                        if pre.len() == expected { Status::Pass } else { Status::Fail },
                        serde_json::json!({ "count": pre.len(), "expected": expected, "verified": true }),
                    );
                }
                Err(e) => report.push("preimages", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        NonassocCmd::Classify { d, p, seed, samples } => {
            let field = FieldSpec::prime(*p).map_err(|e| anyhow!("{e}"))?;
            let mut report = Report::new("nonassoc classify");
            report.seed = Some(*seed);
            let m = nonassoc::random_tensor(*d, field, *seed);
            let class = nonassoc::invertibility_class(&m, *samples, seed.wrapping_add(1));
            report.push(
                "invertibility-class",
                Status::Pass,
                serde_json::json!({
                    "class": class.class,
                    "samples": class.samples,
                    "left_witness": class.left_witness.as_ref().map(coords_json),
                    "right_witness": class.right_witness.as_ref().map(coords_json),
                }),
            );
            for (name, side) in [("simplicity-left", EnvelopeSide::Left), ("simplicity-right", EnvelopeSide::Right)] {
                let (status, value) = match nonassoc::simplicity_check(&m, side) {
                    Simplicity::Simple => (Status::Pass, serde_json::json!({ "value": "simple" })),
                    Simplicity::NotSimple(witness) => (
                        Status::Pass,
                        serde_json::json!({
                            "value": "not-simple",
                            "invariant_subspace_dim": witness.len(),
                        }),
                    ),
                    Simplicity::Inconclusive => (Status::Inconclusive, serde_json::json!({ "value": "inconclusive" })),
                };
                report.push(name, status, value);
            }
            Ok(report)
        }
    }
}

/// Constructed generic instance for the preimage count: the right
/// multiplication at e_0 is diagonalizable with distinct nonzero
/// eigenvalues whose squares stay distinct.
fn generic_preimage_instance(d: usize, field: FieldSpec, seed: u64) -> (Algebra, Element) {
    use rand::SeedableRng;
    use tempered_core::Matrix;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = loop {
        let mut g = Matrix::zeros(field, d, d);
        for r in 0..d {
            for c in 0..d {
                g.set(r, c, field.random_scalar(&mut rng));
            }
        }
        if g.invert().expect("square").is_some() {
            break g;
        }
    };
    let mut diag = Matrix::zeros(field, d, d);
    for i in 0..d {
        diag.set(i, i, field.from_i64(i as i64 + 2));
    }
    let r1 = p.mul(&diag).mul(&p.invert().expect("square").expect("invertible"));
    let mut ops = vec![r1];
    for _ in 1..d {
        let mut g = Matrix::zeros(field, d, d);
        for r in 0..d {
            for c in 0..d {
                g.set(r, c, field.random_scalar(&mut rng));
            }
        }
        ops.push(g);
    }
    let mut entries = Vec::new();
    for (j, op) in ops.iter().enumerate() {
        for i in 0..d {
            for (l, c) in op.col(i).into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, l, c));
                }
            }
        }
    }
    let m = Algebra::new(field, d, None, entries, None).expect("valid entries");
    let v = m.basis_element(0);
    (m, v)
}

fn run_fiber(cmd: &FiberCmd) -> anyhow::Result<Report> {
    match cmd {
        FiberCmd::Glue { algebra, delta, module, write_triple } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let text = inputs.read(module)?;
            let doc: tio::ModuleDoc = serde_json::from_str(&text).with_context(|| format!("{}", module.display()))?;
            let l = tio::module_from_doc(&doc, module.parent()).map_err(|e| anyhow!("{}: {e}", module.display()))?;
            let mut report = Report::new("fiber glue");
            report.input_digest = inputs.digest();
            match fiber::glue(&a, &delta, &l) {
                Ok(triple) => {
                    report.push(
                        "glue",
                        Status::Pass,
                        serde_json::json!({ "n_dim": triple.n_dim, "m_prime_dim": triple.m_prime.dim() }),
                    );
                    if let Some(path) = write_triple {
                        tio::write_triple_file(path, &triple).map_err(|e| anyhow!("{e}"))?;
                        report.push("written", Status::Pass, serde_json::json!({ "path": path.display().to_string() }));
                    }
                }
                Err(e) => report.push("glue", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        FiberCmd::Unglue { algebra, delta, triple, write_module } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let text = inputs.read(triple)?;
            let doc: tio::TripleDoc = serde_json::from_str(&text).with_context(|| format!("{}", triple.display()))?;
            let t = tio::triple_from_doc(&doc, triple.parent()).map_err(|e| anyhow!("{}: {e}", triple.display()))?;
            let mut report = Report::new("fiber unglue");
            report.input_digest = inputs.digest();
            match fiber::unglue(&a, &delta, &t) {
                Ok((module, _incl)) => {
                    report.push("unglue", Status::Pass, serde_json::json!({ "dim": module.dim() }));
                    if let Some(path) = write_module {
                        tio::write_module_file(path, &module).map_err(|e| anyhow!("{e}"))?;
                        report.push("written", Status::Pass, serde_json::json!({ "path": path.display().to_string() }));
                    }
                }
                Err(e) => report.push("unglue", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
        FiberCmd::UnitKernel { algebra, delta, module, u } => {
            let mut inputs = Inputs::new();
            let a = inputs.algebra(algebra)?;
            let delta = element_arg(&a, delta)?;
            let mut report = Report::new("fiber unit-kernel");
            let v = match (module, u) {
                (Some(path), None) => {
                    let text = inputs.read(path)?;
                    let doc: tio::ModuleDoc = serde_json::from_str(&text).with_context(|| format!("{}", path.display()))?;
                    tio::module_from_doc(&doc, path.parent()).map_err(|e| anyhow!("{}: {e}", path.display()))?
                }
                (None, Some(u_text)) => {
                    let u_elem = element_arg(&a, u_text)?;
                    let ideal = a
                        .principal_two_sided_ideal(&delta)
                        .map_err(|e| anyhow!("{e}"))?;
                    let span = tempered_core::Subspace::from_vectors(
                        a.field(),
                        a.dim(),
                        ideal.iter().map(|e| e.coords().to_vec()),
                    );
                    if !span.contains(u_elem.coords()) {
                        return Err(anyhow!("--u must lie in the ideal generated by delta"));
                    }
                    let b = a.augmented_homotope(&delta).map_err(|e| anyhow!("{e}"))?;
                    let reg = regular_module(&b, Side::Left).map_err(|e| anyhow!("{e}"))?;
                    let span = reg.spin(&[a.embed_in_augmented(&u_elem).coords().to_vec()]);
                    reg.quotient_module(&span).map_err(|e| anyhow!("{e}"))?.0
                }
                _ => return Err(anyhow!("unit-kernel needs exactly one of --module or --u")),
            };
            report.input_digest = inputs.digest();
            match fiber::unit_kernel(&a, &delta, &v) {
                Ok(kernel) => report.push(
                    "unit-kernel",
                    Status::Pass,
                    serde_json::json!({
                        "dim": kernel.len(),
                        "basis": kernel
                            .iter()
                            .map(|v| v.iter().map(|s| s.literal()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    }),
                ),
                Err(e) => report.push("unit-kernel", Status::Error, serde_json::json!({ "message": e.to_string() })),
            }
            Ok(report)
        }
    }
}

/// Full entry point used by the binary and by the integration tests.
pub fn run(cli: &Cli) -> anyhow::Result<(String, i32)> {
    let report = run_command(&cli.command)?;
    let text = emit_report(&report, cli.format);
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok((text, report.exit_code()))
}
