mod commands;

use clap::{Args, Parser, Subcommand};
use modeq::Caps;
use serde_json::{Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact checks of first-order properties of finite module categories.
///
/// Ring arguments take either a catalog key (zmod2, zmod3, zmod4, zmod6,
/// f2_dual, f4, m2f2, f2xf2) or the path of a JSON ring spec such as
/// {"kind": "zmod", "n": 4}. Caps can be raised with
/// MODEQ_CAP_OVERRIDE="ring_size=1024,module_size=256".
#[derive(Parser, Debug)]
#[command(name = "modeq", version)]
pub struct Cli {
    /// Also write the report to DIR/<group>-<command>.json.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Finite rings.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Skeletons of finite modules.
    #[command(subcommand)]
    Module(ModuleCmd),
    /// The two-sorted category encoding.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Filters and filter products.
    #[command(subcommand)]
    Ultra(UltraCmd),
    /// Submodule lattices of free modules.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Unit groups of matrix rings.
    #[command(subcommand)]
    Group(GroupCmd),
    /// The end-to-end property checks.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Args, Debug, Clone)]
pub struct RingArg {
    /// Catalog key or JSON ring spec file.
    #[arg(long, visible_alias = "spec", value_name = "RING")]
    pub ring: String,
}

#[derive(Args, Debug, Clone)]
pub struct SkeletonArg {
    #[command(flatten)]
    pub ring: RingArg,
    /// Largest module size in the skeleton.
    #[arg(long, default_value_t = 16)]
    pub bound: usize,
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    /// Build a ring and summarise it.
    New {
        #[command(flatten)]
        ring: RingArg,
        /// Include units, central idempotents and the center.
        #[arg(long)]
        features: bool,
    },
    /// Units, central idempotents and the center.
    Features {
        #[command(flatten)]
        ring: RingArg,
    },
    /// Decide isomorphism of two rings.
    Iso {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, value_name = "RING")]
        other: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    /// List the isomorphism classes up to the bound.
    Skeleton(SkeletonArg),
    /// Simple, projective, injective, generator and progenerator verdicts.
    Predicates(SkeletonArg),
}

#[derive(Subcommand, Debug)]
pub enum CatCmd {
    /// Encode the skeleton as a category and verify the axioms.
    Encode(SkeletonArg),
    /// Evaluate a named formula at every argument.
    Eval {
        #[command(flatten)]
        skel: SkeletonArg,
        /// Formula name, e.g. mono, projective or sum_fin_bounded(2).
        #[arg(long)]
        formula: String,
        /// literal or zero_test.
        #[arg(long, default_value = "zero_test")]
        style: String,
        /// Compare every verdict with the module-theoretic oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Recover the ring from the endomorphism monoid of R_R.
    Gr(SkeletonArg),
    /// Evaluate the translated sentence of one ring over another's skeleton.
    Xi {
        #[command(flatten)]
        skel: SkeletonArg,
        /// Ring whose skeleton is the model; defaults to --ring.
        #[arg(long, value_name = "RING")]
        over: Option<String>,
        /// Expected truth value; a mismatch is a property violation.
        #[arg(long)]
        expect: Option<bool>,
    },
}

#[derive(Subcommand, Debug)]
pub enum UltraCmd {
    /// Every filter on an index set of the given size.
    Enum {
        #[arg(long, default_value_t = 3)]
        index: usize,
    },
    /// The filter product of copies of a ring over a principal filter.
    Product {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 3)]
        index: usize,
        /// Generator of the filter, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        generator: Vec<usize>,
    },
    /// Compare a ring with each of its ultrapowers on sampled sentences.
    Check {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 3)]
        index: usize,
        #[arg(long, default_value_t = modeq::sample::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// The submodule lattice of R^n.
    Space {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Check the definable operations against their meaning.
        #[arg(long)]
        ops: bool,
    },
    /// Recover R from the lattice of R^n.
    Recover {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 3)]
        rank: usize,
    },
    /// Verify the matrix encoding of submodules.
    Matrix {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Build GL_n(R) and check the standard matrix units.
    Gl {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Exhaustive transvection identities.
    Identities {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 3)]
        rank: usize,
    },
    /// Compare group sentences with their relativization to M_n(R).
    Relativize {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = modeq::sample::DEFAULT_SEED)]
        seed: u64,
        /// Sentences to use instead of the seeded sample.
        #[arg(long)]
        sentence: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SuiteCmd {
    /// Run the numbered checks.
    All {
        #[arg(long, default_value = "default")]
        catalog: String,
        #[arg(long, default_value_t = modeq::sample::DEFAULT_SEED)]
        seed: u64,
        /// Run only these checks, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// Report body plus the names of any violated properties.
pub struct Outcome {
    pub name: &'static str,
    pub body: Map<String, Value>,
    pub violations: Vec<String>,
}

fn caps(base: Caps) -> modeq::Result<Caps> {
    match std::env::var("MODEQ_CAP_OVERRIDE") {
        Ok(s) if !s.trim().is_empty() => base.with_overrides(&s),
        _ => Ok(base),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = match cli.command {
        Group::Suite(_) => Caps::generous(),
        _ => Caps::default(),
    };
    let outcome = caps(base).and_then(|c| commands::run(&cli.command, &c));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ok = outcome.violations.is_empty();
    let mut report = outcome.body;
    report.insert("command".into(), Value::from(outcome.name));
    report.insert("ok".into(), Value::from(ok));
    report.insert("violations".into(), Value::from(outcome.violations.clone()));
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("reports serialise");
    println!("{text}");
    if let Some(dir) = &cli.out {
        let path = dir.join(format!("{}.json", outcome.name.replace(' ', "-")));
        if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, format!("{text}\n"))) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        for v in &outcome.violations {
            eprintln!("violation: {v}");
        }
        ExitCode::from(1)
    }
}
