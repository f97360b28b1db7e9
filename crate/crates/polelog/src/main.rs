//! polelog: pole order spectral sequences and logarithmic comparison
//! certificates for (weighted) homogeneous divisors and central arrangements.
//!
//! Exit codes: 0 success, 2 hypothesis/input failures, 1 internal errors.

mod parse;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polelog_core::arrangement::{
    build_lattice, lct_certificate, Arrangement, ArrangementFile,
};
use polelog_core::localcoh::{cor3_check, h0m_profile, prop1_report, symmetry_checks};
use polelog_core::poly::Poly;
use polelog_core::resolution::{freeness_check, regularity_check, tameness_check, tor_betti};
use polelog_core::scalar::ExactScalar;
use polelog_core::sketch::{module_sketch, SketchKind};
use polelog_core::spectral::{
    integral_bs_root_indicator, ss_pages, surjectivity_check_cor2, torsion_page_profile, Mode,
    SsOptions,
};
use polelog_core::whlct::{
    spectrum_wh, thm1_acyclicity, twisted_log_dims, ResidueData,
};
use polelog_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "polelog",
    about = "Exact graded invariants of logarithmic de Rham complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// polynomial expression, e.g. "x^4 + y^3*z + z^3*w + x*y*z*w"
    #[arg(short = 'f', long = "poly")]
    poly: String,
    /// comma-separated variable names
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// comma-separated positive integer weights (default: all 1)
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
}

impl PolyArgs {
    fn parse(&self) -> Result<Poly, Box<dyn std::error::Error>> {
        let weights = self
            .weights
            .clone()
            .unwrap_or_else(|| vec![1; self.vars.len()]);
        if weights.len() != self.vars.len() || self.vars.is_empty() {
            return Err("need one weight per variable and at least one variable".into());
        }
        parse::parse_poly(&self.poly, &self.vars, &weights)
    }
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    /// force exact rational elimination
    #[arg(long)]
    exact: bool,
    /// force the modular mode with this many primes (>= 2)
    #[arg(long)]
    modp: Option<usize>,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        if self.exact {
            Mode::Exact
        } else if let Some(p) = self.modp {
            Mode::MultiPrime(p)
        } else {
            Mode::Auto
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pole order spectral sequence table (all pages up to --rmax)
    Ss {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// largest reported degree (default n·e − Σa)
        #[arg(long)]
        kmax: Option<usize>,
        /// last page (default 3)
        #[arg(long, default_value_t = 3)]
        rmax: usize,
        /// general three-row mode for dim Sing D = 2 inputs
        #[arg(long)]
        three_row: bool,
        /// assert weighted homogeneity of all projective singularities
        #[arg(long)]
        wh_asserted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Surjectivity / unique-integral-root indicator (Corollary 2)
    Cor2 {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        wh_asserted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Equivalent LCT conditions for n = 3 (Proposition 1)
    Prop1 {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        wh_asserted: bool,
        #[arg(long)]
        json: bool,
    },
    /// gamma_d vs mu_Z injectivity trigger (Corollary 3)
    Cor3 {
        #[command(flatten)]
        poly: PolyArgs,
        /// saturation bound B (default n·d)
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Local cohomology profile mu', mu'', delta'' and symmetries
    H0m {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Brieskorn-module torsion indicator at weighted degree 1
    Torsion {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Residue acyclicity test: acyclic iff e·alpha_tilde is not an integer
    Thm1 {
        /// comma-separated factor degrees d_k (rationals summing to 1)
        #[arg(long, value_delimiter = ',')]
        dk: Vec<ExactScalar>,
        /// comma-separated residues alpha_k
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<ExactScalar>,
        /// optional weights w_i fixing e (rationals in (0,1])
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<ExactScalar>>,
        #[arg(long)]
        json: bool,
    },
    /// Spectrum of a weighted-homogeneous isolated singularity
    Spectrum {
        /// comma-separated weights, e.g. 1/2,1/3,1/5
        #[arg(long, value_delimiter = ',')]
        weights: Vec<ExactScalar>,
        #[arg(long)]
        json: bool,
    },
    /// Twisted logarithmic de Rham dimensions (equal residues alpha)
    Lct {
        #[command(flatten)]
        poly: PolyArgs,
        /// the common residue alpha
        #[arg(long)]
        alpha: ExactScalar,
        /// pole twist r >= 0
        #[arg(long, default_value_t = 0)]
        rpow: i64,
        #[arg(long)]
        json: bool,
    },
    /// Graded Betti table / pd / regularity of a logarithmic module
    Betti {
        #[command(flatten)]
        poly: PolyArgs,
        /// logders | logforms:<j> | milnor | koszul:<j>
        #[arg(long)]
        kind: String,
        /// top degree of the Tor window (default 2d + n)
        #[arg(long)]
        ktor: Option<i64>,
        /// run a verdict on top: freeness | tameness
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Logarithmic form module dimensions L^j per degree
    Logforms {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        j: usize,
        /// top true degree (default d + n)
        #[arg(long)]
        top: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Arrangement lattice, dense edges, delta invariants and certificates
    Arrangement {
        /// JSON file {"forms": [[...]], "residues": ["p/q", ...]}
        #[arg(long)]
        file: String,
        /// run the residue certificates (b), (c), (d)
        #[arg(long)]
        certify: bool,
        /// uniform residue for certificate (d)
        #[arg(long)]
        alpha: Option<ExactScalar>,
        /// Castelnuovo–Mumford regularity of the log modules
        #[arg(long)]
        regularity: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("POLELOG_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let hypothesis = err
                .downcast_ref::<CoreError>()
                .map(|e| e.is_hypothesis_failure())
                // parse errors and bad flags are input problems too
                .unwrap_or(true);
            if hypothesis {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).expect("serializable");
    let _ = out.write_all(b"\n");
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Ss {
            poly,
            mode,
            kmax,
            rmax,
            three_row,
            wh_asserted,
            json,
        } => {
            let f = poly.parse()?;
            let table = ss_pages(
                &f,
                &SsOptions {
                    k_max: kmax,
                    r_max: rmax,
                    mode: mode.mode(),
                    three_row,
                    window_cap: None,
                    wh_asserted,
                },
            )?;
            if json {
                println!("{}", render::render_json(&f.to_string(), &table));
            } else {
                print!("{}", render::render_table(&table));
                if let Some(r) = table.r_stab {
                    println!("# pages stable from r = {r}");
                }
                println!(
                    "# hypothesis flags: isolated_proj_sing={} tau_stabilized={} wh_asserted={}",
                    table.hypothesis.isolated_proj_sing,
                    table.hypothesis.tau_stabilized,
                    table.hypothesis.wh_asserted_by_user
                );
            }
        }
        Command::Cor2 {
            poly,
            mode,
            wh_asserted,
            json,
        } => {
            let f = poly.parse()?;
            let rep = surjectivity_check_cor2(&f, mode.mode(), wh_asserted)?;
            let roots = integral_bs_root_indicator(&f, mode.mode(), wh_asserted)?;
            if json {
                print_json(&serde_json::json!({
                    "surjective": rep.surjective,
                    "witness_degrees": rep.witness_degrees,
                    "flagged_roots": roots.flagged,
                    "note_minus_one_undetected": roots.note_minus_one_undetected,
                    "hypothesis": rep.hypothesis,
                }));
            } else {
                println!(
                    "cor2 verdict: {}",
                    if rep.surjective {
                        "true (-1 is the unique integral root indicated at page 2)"
                    } else {
                        "false"
                    }
                );
                if !rep.witness_degrees.is_empty() {
                    println!("witness degrees: {:?}", rep.witness_degrees);
                }
                println!("flagged integral roots (negated): {:?}", roots.flagged);
                if roots.note_minus_one_undetected {
                    println!("note: the root -1 is not detected by this page-2 indicator for this f");
                }
                print_hypothesis(&rep.hypothesis);
            }
        }
        Command::Prop1 {
            poly,
            mode,
            wh_asserted,
            json,
        } => {
            let f = poly.parse()?;
            if f.n() != 3 {
                return Err("prop1 requires exactly three variables".into());
            }
            let rep = prop1_report(&f, mode.mode(), wh_asserted)?;
            if json {
                print_json(&rep);
            } else {
                println!(
                    "LCT verdict (conditions (a)-(e)): {}",
                    if rep.lct_holds { "holds" } else { "fails" }
                );
                println!(
                    "(d) M'_d = 0: {} (mu'_d = {})",
                    rep.m_prime_d_vanishes, rep.mu_prime_d
                );
                println!("(c) surjectivity indicator: {}", rep.cor2.surjective);
                println!("free divisor indicator (M' = 0): {}", rep.free_divisor);
                println!("tau_Z = {}", rep.tau_z);
                print_hypothesis(&rep.cor2.hypothesis);
            }
        }
        Command::Cor3 { poly, bound, json } => {
            let f = poly.parse()?;
            let verdict = cor3_check(&f, bound)?;
            if json {
                print_json(&verdict);
            } else {
                println!("cor3: {verdict:?}");
            }
        }
        Command::H0m { poly, bound, json } => {
            let f = poly.parse()?;
            let b = bound.unwrap_or(f.n() * f.e() as usize);
            let profile = h0m_profile(&f, b)?;
            let sym = symmetry_checks(&f, &profile);
            if json {
                print_json(&serde_json::json!({
                    "profile": profile,
                    "symmetry": sym,
                }));
            } else {
                println!("bound B = {}", profile.bound_used);
                println!("tau_Z = {}", profile.tau_z);
                println!("k:      {:?}", (0..=b).collect::<Vec<_>>());
                println!("mu:     {:?}", profile.mu);
                println!("mu':    {:?}", profile.mu_prime);
                println!("mu'':   {:?}", profile.mu_double);
                println!("delta'': {:?}", profile.delta_double);
                println!(
                    "mu' symmetry violations about {}: {:?}",
                    sym.center_mu_prime, sym.mu_prime_violations
                );
                if f.n() == 3 {
                    println!(
                        "delta'' symmetry violations about {}: {:?}",
                        sym.center_delta, sym.delta_double_violations
                    );
                }
            }
        }
        Command::Torsion {
            poly,
            mode,
            rmax,
            json,
        } => {
            let f = poly.parse()?;
            let profile = torsion_page_profile(&f, rmax, mode.mode())?;
            if json {
                print_json(&profile);
            } else {
                println!("degree e = {}", profile.degree);
                println!("mu pages:  {:?}", profile.mu_pages);
                println!("nu pages:  {:?}", profile.nu_pages);
                println!("verdict: {:?}", profile.verdict);
                print_hypothesis(&profile.hypothesis);
            }
        }
        Command::Thm1 {
            dk,
            alphas,
            weights,
            json,
        } => {
            if dk.len() != alphas.len() {
                return Err("need one residue per factor degree".into());
            }
            let components: Vec<(ExactScalar, ExactScalar)> =
                dk.into_iter().zip(alphas).collect();
            let res = match weights {
                Some(w) => ResidueData::with_weights(&w, components)?,
                None => ResidueData::new(components)?,
            };
            let verdict = thm1_acyclicity(&res);
            if json {
                print_json(&serde_json::json!({
                    "alpha_tilde": res.alpha_tilde,
                    "e": res.e,
                    "verdict": verdict,
                }));
            } else {
                println!("alpha_tilde = {}", res.alpha_tilde);
                println!("e = {}", res.e);
                println!("thm1: {verdict:?}");
            }
        }
        Command::Spectrum { weights, json } => {
            let (spectrum, verdict) = spectrum_wh(&weights)?;
            if json {
                print_json(&serde_json::json!({
                    "exponents": spectrum
                        .exponents()
                        .iter()
                        .map(|(a, m)| (a.to_string(), m))
                        .collect::<Vec<_>>(),
                    "milnor_number": spectrum.total(),
                    "symmetric": spectrum.is_symmetric(weights.len()),
                    "lct": verdict,
                }));
            } else {
                for (a, m) in spectrum.exponents() {
                    println!("exponent {a} multiplicity {m}");
                }
                println!("milnor number = {}", spectrum.total());
                println!("lct: {verdict:?}");
            }
        }
        Command::Lct {
            poly,
            alpha,
            rpow,
            json,
        } => {
            let f = poly.parse()?;
            let n = f.n();
            let dims: Vec<(usize, usize)> = (0..=n)
                .map(|j| Ok((j, twisted_log_dims(&f, &alpha, rpow, j)?)))
                .collect::<Result<_, CoreError>>()?;
            if json {
                print_json(&serde_json::json!({
                    "alpha": alpha,
                    "r": rpow,
                    "dims": dims,
                }));
            } else {
                for (j, dim) in dims {
                    println!("H^{j}(Omega^*(log D) f^-{rpow}, d + alpha dlog f) = {dim}");
                }
            }
        }
        Command::Betti {
            poly,
            kind,
            ktor,
            check,
            json,
        } => {
            let f = poly.parse()?;
            let k_tor = ktor.unwrap_or(2 * f.e() as i64 + f.n() as i64);
            if let Some(which) = check {
                match which.as_str() {
                    "freeness" => {
                        let rep = freeness_check(&f, ktor)?;
                        if json {
                            print_json(&rep);
                        } else {
                            println!(
                                "free: {} (certified window: {})",
                                rep.free, rep.certified
                            );
                            println!("generators (degree, count): {:?}", rep.generators);
                            println!("pd = {}", rep.pd);
                        }
                    }
                    "tameness" => {
                        let rep = tameness_check(&f, ktor)?;
                        if json {
                            print_json(&rep);
                        } else {
                            println!("tame: {} (certified: {})", rep.tame, rep.certified);
                            for (j, pd, cert) in rep.per_j {
                                println!("pd L^{j} = {pd} (certified {cert})");
                            }
                        }
                    }
                    other => return Err(format!("unknown check {other:?}").into()),
                }
                return Ok(());
            }
            let sk = match kind.as_str() {
                "logders" => module_sketch(SketchKind::LogDerivations, &f, k_tor + f.e() as i64)?,
                "milnor" => module_sketch(SketchKind::MilnorTop, &f, k_tor + f.e() as i64)?,
                other => {
                    if let Some(j) = other.strip_prefix("logforms:") {
                        module_sketch(SketchKind::LogForms(j.parse()?), &f, k_tor + f.e() as i64)?
                    } else if let Some(j) = other.strip_prefix("koszul:") {
                        module_sketch(
                            SketchKind::KoszulKernel(j.parse()?),
                            &f,
                            k_tor + f.e() as i64,
                        )?
                    } else {
                        return Err(format!("unknown kind {other:?}").into());
                    }
                }
            };
            let betti = tor_betti(&sk, k_tor);
            if json {
                print_json(&serde_json::json!({
                    "entries": betti
                        .entries
                        .iter()
                        .map(|((i, k), v)| (format!("{i},{k}"), v))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "pd": betti.pd,
                    "reg": betti.reg,
                    "certified": betti.certified,
                }));
            } else {
                for ((i, k), v) in &betti.entries {
                    println!("beta_{{{i},{k}}} = {v}");
                }
                println!("pd = {}", betti.pd);
                println!("reg = {:?}", betti.reg);
                println!("certified = {}", betti.certified);
            }
        }
        Command::Logforms { poly, j, top, json } => {
            let f = poly.parse()?;
            let top = top.unwrap_or(f.e() as i64 + f.n() as i64);
            let sk = module_sketch(SketchKind::LogForms(j), &f, top)?;
            let dims: Vec<(i64, usize)> = (sk.offset..=top).map(|m| (m, sk.dim_at(m))).collect();
            if json {
                print_json(&serde_json::json!({ "j": j, "dims": dims }));
            } else {
                for (m, d) in dims {
                    println!("dim L^{j}_{{{m}}} = {d}");
                }
            }
        }
        Command::Arrangement {
            file,
            certify,
            alpha,
            regularity,
            json,
        } => {
            let raw = std::fs::read_to_string(&file)?;
            let parsed: ArrangementFile = serde_json::from_str(&raw)?;
            let arr = Arrangement::from_file(parsed)?;
            let mut payload = serde_json::Map::new();
            let edges = build_lattice(&arr);
            if !json {
                println!(
                    "{} hyperplanes in dimension {}, essential: {}",
                    arr.len(),
                    arr.n(),
                    arr.essential()
                );
                for e in &edges {
                    println!(
                        "edge {:?}: codim {}, m = {}, dense = {}{}",
                        e.hyperplanes,
                        e.codim,
                        e.m,
                        e.dense,
                        e.alpha
                            .as_ref()
                            .map(|a| format!(", alpha_Z = {a}"))
                            .unwrap_or_default()
                    );
                }
            } else {
                payload.insert("essential".into(), serde_json::json!(arr.essential()));
                payload.insert("edges".into(), serde_json::to_value(&edges)?);
            }
            if certify {
                let rep = lct_certificate(&arr, alpha)?;
                if json {
                    payload.insert("certificates".into(), serde_json::to_value(&rep)?);
                } else {
                    println!("(b) full direct image: {:?}", rep.full_direct_image);
                    println!("(c) zero extension: {:?}", rep.zero_extension);
                    match (&rep.annihilator, &rep.uniform_alpha) {
                        (Some(v), Some(a)) => println!("(d) annihilator at alpha = {a}: {v:?}"),
                        _ => println!("(d) annihilator: skipped (no uniform residue)"),
                    }
                    for e in &rep.dense_edge_data {
                        println!(
                            "dense edge {:?}: m = {}, delta = {:?}, profile = {:?}",
                            e.hyperplanes, e.m, e.delta, e.delta_profile
                        );
                    }
                }
            }
            if regularity {
                let rep = regularity_check(&arr, None)?;
                if json {
                    payload.insert("regularity".into(), serde_json::to_value(&rep)?);
                } else {
                    println!(
                        "reg L^j <= 0: {} (certified {})",
                        rep.bound_holds, rep.certified
                    );
                    for (j, reg, cert) in &rep.per_j {
                        println!("reg L^{j} = {reg:?} (certified {cert})");
                    }
                    println!(
                        "derivation side: reg Theta = {:?} <= d - n + 1 = {}: {}",
                        rep.reg_derivations, rep.derivation_bound, rep.derivation_bound_holds
                    );
                }
            }
            if json {
                print_json(&serde_json::Value::Object(payload));
            }
        }
    }
    Ok(())
}

fn print_hypothesis(h: &polelog_core::spectral::HypothesisFlags) {
    println!(
        "# hypothesis flags: isolated_proj_sing={} tau_stabilized={} wh_asserted={}",
        h.isolated_proj_sing, h.tau_stabilized, h.wh_asserted_by_user
    );
}
