//! Reproducible experiments over `coe-core`, driven by JSON configs.
//!
//! Each command loads and validates its config before computing anything,
//! returns a deterministic JSON payload, and reports whether every
//! verification it ran passed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use coe_core::chain::{DivisibilityChain, OdometerModel};
use coe_core::cocycle::{
    coboundary_decide_chain, coboundary_solve_at_level, cohomologous_verify, essential_values_bruteforce,
    essential_values_closed_form, essential_values_limit, CocycleConfig, LevelCocycle, SolveOutcome,
    TransferOrientation,
};
use coe_core::group::{bilipschitz_classify, pairing_pi, pairing_pi_inv, DihedralElement, FiniteGroupTable, GroupRef};
use coe_core::rigidity::{
    rigidity_extract_with_window, topological_freeness_sweep, CoeWitness, DinftyModel, ModelConfig, ModelKind,
    Stabilizer,
};
use coe_core::skew::{nonconjugacy_certificate, transitive_and_free_check, verify_coe, SkewSystem};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "coe",
    about = "Odometer cocycles, skew products and D∞ rigidity on finite models"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config for the command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Model level (skew-demo, freeness-sweep) or highest essential-value level (coboundary).
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Split window for rigidity.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Decide whether a level cocycle is a coboundary and list essential values.
    Coboundary,
    /// Build a skew product pair, check coe and certify non-conjugacy.
    SkewDemo,
    /// Extract a conjugacy from an orbit equivalence witness.
    Rigidity,
    /// Classify sampled bi-Lipschitz maps.
    Bilipschitz,
    /// Stabilizers of a finite D∞ model.
    FreenessSweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Coboundary => "coboundary",
            Command::SkewDemo => "skew-demo",
            Command::Rigidity => "rigidity",
            Command::Bilipschitz => "bilipschitz",
            Command::FreenessSweep => "freeness-sweep",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub payload: Value,
    /// Every verification the command ran passed.
    pub passed: bool,
    /// One line per verdict, for `--format text`.
    pub summary: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoboundaryConfig {
    pub chain: DivisibilityChain,
    pub cocycle: CocycleConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewConfig {
    #[serde(default = "DivisibilityChain::dyadic")]
    pub chain: DivisibilityChain,
    #[serde(default = "default_skew_level")]
    pub level: usize,
    #[serde(default = "default_skew_group")]
    pub group: GroupRef,
    #[serde(default = "one")]
    pub cocycle_level: usize,
    /// Defaults to `(e, r, e, …)` with `r` of the largest prime order available.
    #[serde(default)]
    pub table: Option<Vec<usize>>,
}

impl Default for SkewConfig {
    fn default() -> Self {
        SkewConfig {
            chain: DivisibilityChain::dyadic(),
            level: default_skew_level(),
            group: default_skew_group(),
            cocycle_level: 1,
            table: None,
        }
    }
}

fn default_skew_level() -> usize {
    6
}

fn default_skew_group() -> GroupRef {
    GroupRef::Named("S3".into())
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub model: DinftyModel,
    pub model_prime: DinftyModel,
    pub h: Vec<u64>,
    pub c_s: Vec<DihedralElement>,
    pub c_t: Vec<DihedralElement>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilipschitzConfig {
    /// Samples `(x, f(x))` of a map `ℤ → ℤ`.
    #[serde(default)]
    pub pairs: Vec<(i64, i64)>,
    /// Samples `(g, F(g))` of a map `D∞ → D∞`, classified through `π`.
    #[serde(default)]
    pub dihedral: Vec<(DihedralElement, DihedralElement)>,
    /// Defaults to the largest `|x|` sampled.
    #[serde(default)]
    pub threshold: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreenessConfig {
    pub model: ModelConfig,
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn require_config(cfg: &RunConfig) -> Result<&Path> {
    cfg.config
        .as_deref()
        .with_context(|| format!("{} needs --config", cfg.command.name()))
}

fn reject_flags(cfg: &RunConfig, level: bool, window: bool) -> Result<()> {
    if !level && cfg.level.is_some() {
        bail!("--level does not apply to {}", cfg.command.name());
    }
    if !window && cfg.window.is_some() {
        bail!("--window does not apply to {}", cfg.command.name());
    }
    Ok(())
}

/// Loads the config, then runs the command.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Coboundary => {
            reject_flags(cfg, true, false)?;
            cmd_coboundary(&load(require_config(cfg)?)?, cfg.level)
        }
        Command::SkewDemo => {
            reject_flags(cfg, true, false)?;
            let mut sc: SkewConfig = match &cfg.config {
                Some(p) => load(p)?,
                None => SkewConfig::default(),
            };
            if let Some(l) = cfg.level {
                sc.level = l;
            }
            cmd_skew_demo(&sc)
        }
        Command::Rigidity => {
            reject_flags(cfg, false, true)?;
            cmd_rigidity(&load(require_config(cfg)?)?, cfg.window)
        }
        Command::Bilipschitz => {
            reject_flags(cfg, false, false)?;
            cmd_bilipschitz(&load(require_config(cfg)?)?)
        }
        Command::FreenessSweep => {
            reject_flags(cfg, true, false)?;
            let mut fc: FreenessConfig = load(require_config(cfg)?)?;
            if let Some(l) = cfg.level {
                fc.model.level = l;
            }
            cmd_freeness(&fc)
        }
    }
}

/// Brute-force essential values are skipped above this modulus.
const BRUTEFORCE_LIMIT: u64 = 1 << 16;

pub fn cmd_coboundary(cfg: &CoboundaryConfig, max_level: Option<usize>) -> Result<Outcome> {
    let chain = &cfg.chain;
    let c = cfg.cocycle.build(chain)?;
    let verdict = coboundary_decide_chain(&c, chain)?;
    let limit = essential_values_limit(&c, chain)?;
    let e = c.target().identity_index();
    let mut summary = vec![format!("verdict: {}", serde_json::to_string(&verdict)?)];
    let mut passed = limit.is_trivial(e) == verdict.is_coboundary();

    let mut transfer = Value::Null;
    if let coe_core::cocycle::CoboundaryVerdict::CoboundaryAtLevel { level } = verdict {
        match coboundary_solve_at_level(&c, chain, level)? {
            SolveOutcome::Solved { transfer: b } => {
                let model = OdometerModel::new(chain.clone(), level)?;
                let trivial = LevelCocycle::trivial(c.target().clone(), chain, c.level())?;
                let window = 2 * model.modulus() as i64;
                let ok = cohomologous_verify(&c, &trivial, &b, &model, window)?;
                summary.push(format!("transfer at level {level}: {:?} (verified: {ok})", b.table));
                passed &= ok && b.orientation == TransferOrientation::Forward;
                transfer = json!({ "transfer": b, "verified": ok });
            }
            SolveOutcome::Unsolvable { obstruction } => {
                summary.push(format!("solver disagrees with verdict: obstruction {obstruction}"));
                passed = false;
            }
        }
    }

    let top = max_level.unwrap_or(c.level() + 3).max(c.level());
    let mut levels = Vec::new();
    for k in c.level()..=top {
        let closed = essential_values_closed_form(&c, chain, k)?;
        let modulus = chain.nth_modulus_u64(k);
        let brute = match modulus {
            Some(m) if m <= BRUTEFORCE_LIMIT => {
                let model = OdometerModel::new(chain.clone(), k)?;
                Some(essential_values_bruteforce(&c, &model, k)?)
            }
            _ => None,
        };
        let agree = brute.as_ref().map(|b| *b == closed);
        passed &= agree != Some(false);
        summary.push(format!(
            "E_{k} = {:?}{}",
            closed.values,
            match agree {
                Some(true) => " (brute force agrees)",
                Some(false) => " (brute force DISAGREES)",
                None => "",
            }
        ));
        levels.push(json!({ "level": k, "closed_form": closed, "bruteforce": brute }));
    }
    summary.push(format!("E(c) = {:?}", limit.values));
    Ok(Outcome {
        payload: json!({
            "verdict": verdict,
            "coboundary": transfer,
            "essential_values": levels,
            "limit": limit,
        }),
        passed,
        summary,
    })
}

const MAX_SKEW_MODULUS: u64 = 1024;

pub fn cmd_skew_demo(cfg: &SkewConfig) -> Result<Outcome> {
    let group: FiniteGroupTable = cfg.group.resolve()?;
    let table = match &cfg.table {
        Some(t) => t.clone(),
        None => {
            let r = [7u64, 5, 3, 2]
                .iter()
                .find_map(|&p| group.prime_order_element(p).ok())
                .context("fibre group has no element of prime order")?;
            let n = cfg
                .chain
                .nth_modulus_u64(cfg.cocycle_level)
                .context("cocycle level modulus overflows")?;
            (0..n)
                .map(|x| if x == 1 { r } else { group.identity_index() })
                .collect()
        }
    };
    let c = LevelCocycle::new(group.clone(), &cfg.chain, cfg.cocycle_level, table)?;
    let e = LevelCocycle::trivial(group.clone(), &cfg.chain, cfg.cocycle_level)?;
    let model = OdometerModel::new(cfg.chain.clone(), cfg.level)?;
    if model.modulus() > MAX_SKEW_MODULUS {
        bail!(
            "level {} has {} base states; skew-demo caches O(n_L²) values and stops at {MAX_SKEW_MODULUS}",
            cfg.level,
            model.modulus()
        );
    }
    let sys = SkewSystem::new(model.clone(), c.clone())?;
    let triv = SkewSystem::new(model, e)?;
    let orbit = transitive_and_free_check(&sys);
    let orbit_trivial = transitive_and_free_check(&triv);
    let coe = verify_coe(&sys, &triv)?;
    let certificate = nonconjugacy_certificate(&group, &c, &cfg.chain);
    let certified = matches!(&certificate, Ok(cert) if cert.verify(&cfg.chain));

    let summary = vec![
        format!("transitive: {} / {}", orbit.transitive, orbit_trivial.transitive),
        format!("free: {} / {}", orbit.free, orbit_trivial.free),
        format!("coe: {}", coe.holds()),
        match &certificate {
            Ok(_) => format!("non-conjugacy certificate: issued (verified: {certified})"),
            Err(why) => format!("non-conjugacy certificate: refused ({why})"),
        },
    ];
    let passed =
        orbit.transitive && orbit.free && orbit_trivial.transitive && orbit_trivial.free && coe.holds() && certified;
    Ok(Outcome {
        payload: json!({
            "states": sys.points().count(),
            "orbit": orbit,
            "orbit_trivial": orbit_trivial,
            "coe": coe,
            "certificate": match &certificate {
                Ok(cert) => json!({ "issued": true, "verified": certified, "certificate": cert }),
                Err(why) => json!({ "issued": false, "refusal": why }),
            },
        }),
        passed,
        summary,
    })
}

pub fn cmd_rigidity(file: &WitnessFile, window: Option<i64>) -> Result<Outcome> {
    let w = CoeWitness {
        h: file.h.clone(),
        c_s: file.c_s.clone(),
        c_t: file.c_t.clone(),
    };
    match rigidity_extract_with_window(&w, &file.model, &file.model_prime, window) {
        Ok(res) => {
            let summary = vec![
                format!("kind: {:?}", res.kind),
                format!("X+ / X-: {} / {}", res.trace.plus, res.trace.minus),
                format!("defect values: {}", res.trace.defect_values.len()),
                format!("k = {}", res.k),
                format!("verified: {}", res.verified),
            ];
            Ok(Outcome {
                passed: res.verified,
                payload: json!({ "result": res }),
                summary,
            })
        }
        Err(err) => Ok(Outcome {
            payload: json!({ "error": { "message": err.to_string(), "state": err.state(), "detail": format!("{err:?}") } }),
            passed: false,
            summary: vec![format!("refused: {err}")],
        }),
    }
}

#[derive(Debug, Serialize)]
struct Classification {
    samples: usize,
    report: Option<coe_core::group::BiLipschitzReport>,
    error: Option<String>,
}

fn classify(samples: &[(i64, i64)], threshold: Option<u64>) -> Classification {
    let threshold = threshold.unwrap_or_else(|| samples.iter().map(|s| s.0.unsigned_abs()).max().unwrap_or(0));
    match bilipschitz_classify(samples, threshold) {
        Ok(r) => Classification {
            samples: samples.len(),
            report: Some(r),
            error: None,
        },
        Err(e) => Classification {
            samples: samples.len(),
            report: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn cmd_bilipschitz(cfg: &BilipschitzConfig) -> Result<Outcome> {
    if cfg.pairs.is_empty() && cfg.dihedral.is_empty() {
        bail!("bilipschitz config needs `pairs` or `dihedral` samples");
    }
    let mut payload = serde_json::Map::new();
    let mut summary = Vec::new();
    let mut passed = true;
    let mut record = |name: &str, c: Classification| -> Result<()> {
        summary.push(match (&c.report, &c.error) {
            (Some(r), _) => format!(
                "{name}: sign {}, constant {}, defect {}",
                r.sign.sign(),
                r.constant,
                r.defect_bound
            ),
            (_, Some(e)) => format!("{name}: {e}"),
            _ => unreachable!(),
        });
        passed &= c.report.is_some();
        payload.insert(name.into(), serde_json::to_value(c)?);
        Ok(())
    };
    if !cfg.pairs.is_empty() {
        record("integer", classify(&cfg.pairs, cfg.threshold))?;
    }
    if !cfg.dihedral.is_empty() {
        // n ↦ π⁻¹(F(π(n)))
        let conj: Vec<(i64, i64)> = cfg
            .dihedral
            .iter()
            .map(|&(g, fg)| {
                let n = pairing_pi_inv(g);
                debug_assert_eq!(pairing_pi(n), g);
                (n, pairing_pi_inv(fg))
            })
            .collect();
        record("pi_conjugated", classify(&conj, cfg.threshold))?;
    }
    Ok(Outcome {
        payload: Value::Object(payload),
        passed,
        summary,
    })
}

pub fn cmd_freeness(cfg: &FreenessConfig) -> Result<Outcome> {
    let model = DinftyModel::try_from(cfg.model.clone())?;
    let report = topological_freeness_sweep(&model);
    let classified = report
        .stabilizers
        .iter()
        .all(|s| !matches!(s, Stabilizer::Other { .. }));
    let passed = classified && (model.kind() == ModelKind::CaseI || report.free);
    let mut summary = vec![
        format!("kind: {:?}, n_L = {}", report.kind, report.modulus),
        format!("free: {}", report.free),
    ];
    for f in &report.fixed_points {
        summary.push(format!("s^{}t fixes {:?}", f.class, f.states));
    }
    Ok(Outcome {
        payload: serde_json::to_value(&report)?,
        passed,
        summary,
    })
}

/// The report file: the deterministic payload plus a separate metadata block.
pub fn render(cfg: &RunConfig, outcome: &Outcome, elapsed_ms: u128) -> Result<String> {
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": cfg.command.name(),
                "passed": outcome.passed,
                "payload": outcome.payload,
                "metadata": { "elapsed_ms": elapsed_ms },
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Text => {
            let mut out = format!(
                "{}: {}\n",
                cfg.command.name(),
                if outcome.passed { "PASS" } else { "FAIL" }
            );
            for line in &outcome.summary {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&format!("  elapsed: {elapsed_ms} ms\n"));
            Ok(out)
        }
    }
}
