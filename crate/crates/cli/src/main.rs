mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aspherical::abhomology::{group_homology, group_homology_graded, real_cohomology_rank, DEFAULT_MAX_DEGREE};
use aspherical::asphericity::classify;
use aspherical::fibersum::{
    fiber_sum_with_trivial_bundle, ssd_quotient, witness_presentation, FiberSumError, SsdData,
    SurfaceFiberedPresentation,
};
use aspherical::lefschetz::{euler_characteristic, monodromy_product, total_space_pi1, MonodromyFactorization};
use aspherical::zlinalg::{cokernel, smith_normal_form, FgAbelian, IntMatrix};
use aspherical::Presentation;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use report::{new_report, render, Format};

#[derive(Parser)]
#[command(name = "aspherical", version, about = "Symplectically aspherical abelian groups, Lefschetz fibration presentations and integer linear algebra")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Highest homology degree to compute (at most 8).
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE, global = true)]
    max_degree: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an abelian group such as `Z^4+Z/2` is symplectically aspherical.
    Classify { group: String },
    /// Integral homology and real cohomology ranks of an abelian group.
    Homology {
        group: String,
        /// Overrides --max-degree.
        degree: Option<usize>,
    },
    /// Fundamental group and invariants of a Lefschetz fibration file.
    Fibration { file: PathBuf },
    /// Build a presentation realizing the group, with an abelianization check.
    Witness {
        group: String,
        /// Also write the presentation to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smith normal form of an integer matrix file.
    Snf { file: PathBuf },
    /// Fiber sum of a surface-fibered presentation with a trivial bundle over a genus-e surface.
    Fibersum {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        base_genus: usize,
    },
}

enum Failure {
    /// Bad input; exit code 2.
    Usage(String),
    /// A construction's precondition does not hold; exit code 3.
    Precondition(String),
}

/// A report plus whether the domain verdict was negative (exit code 3).
struct Outcome {
    report: Map<String, Value>,
    negative: bool,
}

impl Outcome {
    fn ok(report: Map<String, Value>) -> Self {
        Self { report, negative: false }
    }
}

fn parse_group(text: &str) -> Result<FgAbelian, Failure> {
    text.parse().map_err(|e| Failure::Usage(format!("{e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn text_block(s: impl ToString) -> Value {
    Value::String(s.to_string().trim_end().to_string())
}

fn cmd_classify(group: &str) -> Result<Outcome, Failure> {
    let gamma = parse_group(group)?;
    let v = classify(&gamma);
    let mut r = new_report("classify");
    r.insert("group".into(), gamma.to_string().into());
    r.insert("aspherical".into(), v.aspherical.into());
    r.insert("reason".into(), v.reason.as_str().into());
    r.insert("realizable_dims".into(), json!(v.realizable_dims));
    r.insert("pi2_forced_nonzero_in_dim4".into(), v.pi2_forced_nonzero_in_dim4.into());
    r.insert("class_note".into(), json!(v.class_note.map(|n| n.as_str())));
    r.insert("covering_note".into(), json!(v.covering_note));
    r.insert("citations".into(), json!(v.citations));
    Ok(Outcome {
        report: r,
        negative: !v.aspherical,
    })
}

fn cmd_homology(group: &str, max_degree: usize) -> Result<Outcome, Failure> {
    if max_degree > DEFAULT_MAX_DEGREE {
        return Err(Failure::Usage(format!(
            "degree {max_degree} exceeds the supported maximum {DEFAULT_MAX_DEGREE}"
        )));
    }
    let gamma = parse_group(group)?;
    let graded = group_homology_graded(&gamma, max_degree);
    let mut r = new_report("homology");
    r.insert("group".into(), gamma.to_string().into());
    r.insert("max_degree".into(), max_degree.into());
    let homology: Vec<Value> = graded
        .groups()
        .iter()
        .enumerate()
        .map(|(k, h)| json!({"degree": k, "group": h.to_string()}))
        .collect();
    r.insert("homology".into(), homology.into());
    let ranks: Vec<Value> = (0..=max_degree)
        .map(|k| json!({"degree": k, "rank": real_cohomology_rank(&gamma, k).to_string()}))
        .collect();
    r.insert("real_cohomology_ranks".into(), ranks.into());
    if max_degree >= 3 {
        // H_3(free part) + H_3(torsion part) splits off H_3 of the sum.
        let free = FgAbelian::free(gamma.rank());
        let part = group_homology(&free, 3).direct_sum(&group_homology(&gamma.torsion_part(), 3));
        let holds = graded.groups()[3].complement_of_summand(&part).is_some();
        r.insert(
            "h3_summand".into(),
            json!({"summand": part.to_string(), "contained": holds}),
        );
    }
    Ok(Outcome::ok(r))
}

fn cmd_fibration(file: &Path) -> Result<Outcome, Failure> {
    let m: MonodromyFactorization = read(file)?
        .parse()
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let x = total_space_pi1(&m);
    let al = m.fiber_alphabet();
    let mut r = new_report("fibration");
    r.insert("label".into(), json!(m.label()));
    r.insert("fiber_genus".into(), m.fiber_genus().into());
    let cycles: Vec<Value> = m
        .cycles()
        .iter()
        .zip(m.signs())
        .map(|(c, s)| format!("{} {}", s.symbol(), al.render(c.word())).into())
        .collect();
    r.insert("cycles".into(), cycles.into());
    r.insert("presentation".into(), text_block(x.presentation.to_text()));
    r.insert("abelianization".into(), x.presentation.abelianization().to_string().into());
    r.insert("homologically_trivial".into(), x.homologically_trivial.into());
    r.insert(
        "note".into(),
        if x.is_conditional() {
            "monodromy acts nontrivially on H_1; the presentation assumes the twist product is isotopic to the identity".into()
        } else {
            Value::Null
        },
    );
    r.insert("euler_characteristic".into(), euler_characteristic(&m).into());
    r.insert("monodromy".into(), text_block(monodromy_product(&m)));
    Ok(Outcome::ok(r))
}

fn cmd_witness(group: &str, output: Option<&Path>) -> Result<Outcome, Failure> {
    let gamma = parse_group(group)?;
    let mut r = new_report("witness");
    r.insert("group".into(), gamma.to_string().into());
    let p = match witness_presentation(&gamma) {
        Ok(p) => p,
        Err(FiberSumError::NotAspherical(reason)) => {
            r.insert("aspherical".into(), false.into());
            r.insert("reason".into(), reason.as_str().into());
            r.insert("citations".into(), json!(classify(&gamma).citations));
            return Ok(Outcome {
                report: r,
                negative: true,
            });
        }
        Err(e) => return Err(Failure::Precondition(e.to_string())),
    };
    let ab = p.abelianization();
    let pass = ab == gamma;
    r.insert("aspherical".into(), true.into());
    r.insert("generators".into(), p.generator_count().into());
    r.insert("relators".into(), p.relators().len().into());
    r.insert("presentation".into(), text_block(p.to_text()));
    r.insert("abelianization".into(), ab.to_string().into());
    r.insert("abelianization_check".into(), if pass { "PASS" } else { "FAIL" }.into());
    if let Some(path) = output {
        fs::write(path, p.to_text()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        r.insert("output".into(), path.display().to_string().into());
    }
    Ok(Outcome {
        report: r,
        negative: !pass,
    })
}

fn cmd_snf(file: &Path) -> Result<Outcome, Failure> {
    let a = IntMatrix::parse_text(&read(file)?).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let s = smith_normal_form(&a);
    let mut r = new_report("snf");
    r.insert("rows".into(), a.rows().into());
    r.insert("cols".into(), a.cols().into());
    let diag: Vec<Value> = s.diagonal().iter().map(|d| d.to_string().into()).collect();
    r.insert("diagonal".into(), diag.into());
    r.insert("rank".into(), s.rank().into());
    r.insert("d".into(), text_block(&s.d));
    r.insert("u".into(), text_block(&s.u));
    r.insert("v".into(), text_block(&s.v));
    r.insert("cokernel".into(), cokernel(&a).to_string().into());
    Ok(Outcome::ok(r))
}

fn cmd_fibersum(file: &Path, base_genus: usize) -> Result<Outcome, Failure> {
    let p: Presentation = read(file)?
        .parse()
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let x = SurfaceFiberedPresentation::from_presentation(&p).map_err(|e| Failure::Precondition(e.to_string()))?;
    let sum = fiber_sum_with_trivial_bundle(&x, base_genus).map_err(|e| Failure::Precondition(e.to_string()))?;
    let quotient = ssd_quotient(&SsdData::for_trivial_fiber_sum(&x, base_genus))
        .map_err(|e| Failure::Precondition(e.to_string()))?;
    let ab = sum.abelianization();
    let expected = p.abelianization().direct_sum(&FgAbelian::free(2 * base_genus));
    let pass = ab == expected && quotient == expected;
    let mut r = new_report("fibersum");
    r.insert("fiber_genus".into(), x.fiber_genus().into());
    r.insert("base_genus".into(), base_genus.into());
    r.insert("presentation".into(), text_block(sum.to_text()));
    r.insert("abelianization".into(), ab.to_string().into());
    r.insert("expected".into(), expected.to_string().into());
    r.insert("diagram_quotient".into(), quotient.to_string().into());
    r.insert("check".into(), if pass { "PASS" } else { "FAIL" }.into());
    Ok(Outcome {
        report: r,
        negative: !pass,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { group } => cmd_classify(group),
        Command::Homology { group, degree } => cmd_homology(group, degree.unwrap_or(cli.max_degree)),
        Command::Fibration { file } => cmd_fibration(file),
        Command::Witness { group, output } => cmd_witness(group, output.as_deref()),
        Command::Snf { file } => cmd_snf(file),
        Command::Fibersum { file, base_genus } => cmd_fibersum(file, *base_genus),
    };
    match result {
        Ok(outcome) => {
            print!("{}", render(&outcome.report, cli.format));
            if outcome.negative {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
