//! Command-line front end. All logic lives in the library; this binary only
//! parses flags, moves files, and prints results.
//!
//! Exit codes: 0 success, 1 usage error, 2 assumption violation, 3 capacity.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use latent_ising::error::{Error, Result};
use latent_ising::exact::{distribution_from_potential, ENUMERATION_BOUND};
use latent_ising::experiment::{parse_experiment_spec, run_experiment, write_results};
use latent_ising::generator::{
    gen_ferro_ising, gen_latent_ising, gen_rbm, latent_blankets, LatentGenParams, RbmGenParams,
};
use latent_ising::influence::empirical_influence;
use latent_ising::model::{
    parse_model, validate_nondegeneracy, write_ising, write_mrf, write_rbm, ModelFile,
    NondegeneracyParams, Subset,
};
use latent_ising::partition::{check_lee_yang, fugacity_polynomial, lee_yang_log_z};
use latent_ising::regression::{
    assemble_potential, glmtron_fit, RegressionProblem, TieRule, DEFAULT_HOLDOUT_FRACTION,
    DEFAULT_MAX_ITERS,
};
use latent_ising::sampler::{parse_samples, sample_exact, sample_gibbs, write_samples};
use latent_ising::structure::{
    default_config, greedy_nbhd, search_nbhd, write_structure, LearnerKind,
    NeighborhoodEstimate,
};

const USAGE: &str = "\
latent-ising: structure and potential learning for latent ferromagnetic Ising models

Usage: latent-ising <command> [--flag value ...]

Commands:
  gen-model        --kind rbm|latent|ising --n N [--m M] [--seed S] --out DIR
                   [--alpha A --beta B --weight-max W --field-max F]
                   [--hidden-degree D --observed-degree-max D --edge-prob P]
  sample           --model FILE --count M [--seed S] --out FILE
                   [--gibbs --burn-in B --thinning T]
  influence        --samples FILE --target I [--given J1,J2,...]
  learn-structure  --samples FILE --alpha A --beta B --d2 D --out FILE
                   [--ell L --delta D --learner greedy|search --eta E --k K]
  learn-potential  --samples FILE --structure FILE --beta B --out FILE
                   [--radius R --holdout F --iters N --seed S]
  rbm2mrf          --model FILE --out FILE
  mrf2rbm          --model FILE --out FILE [--gamma G]
  parity-rbm       --n N --support J1,J2 --noise ETA --out FILE
  logz             --model FILE --field-shift H [--epsilon E]
  experiment       --config FILE --out DIR [--format csv]
  verify           [--out DIR]

Indices in flags are 1-based, matching the file formats.";

struct Flags(BTreeMap<String, String>);

impl Flags {
    fn parse(args: &[String]) -> Result<Flags> {
        let mut map = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let key = args[i]
                .strip_prefix("--")
                .ok_or_else(|| Error::Parameter(format!("expected --flag, got `{}`", args[i])))?;
            // Boolean flags take no value.
            if key == "gibbs" {
                map.insert(key.to_string(), "true".to_string());
                i += 1;
                continue;
            }
            let value = args
                .get(i + 1)
                .ok_or_else(|| Error::Parameter(format!("flag --{key} needs a value")))?;
            map.insert(key.to_string(), value.clone());
            i += 2;
        }
        Ok(Flags(map))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Parameter(format!("missing required flag --{key}")))
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Parameter(format!("bad value for --{key}: {e}"))),
        }
    }

    fn value_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parse_value(key)?.unwrap_or(default))
    }

    fn required_value<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.require(key)?
            .parse()
            .map_err(|e| Error::Parameter(format!("bad value for --{key}: {e}")))
    }
}

fn parse_index_list(text: &str) -> Result<Subset> {
    let mut mask: Subset = 0;
    for tok in text.split(',') {
        let idx: usize = tok
            .trim()
            .parse()
            .map_err(|e| Error::Parameter(format!("bad index `{tok}`: {e}")))?;
        if idx == 0 || idx > 32 {
            return Err(Error::Parameter(format!("index {idx} out of range 1..=32")));
        }
        mask |= 1 << (idx - 1);
    }
    Ok(mask)
}

fn read_model(path: &str) -> Result<ModelFile> {
    parse_model(&std::fs::read_to_string(path)?)
}

fn cmd_gen_model(flags: &Flags) -> Result<()> {
    let kind = flags.value_or("kind", "rbm".to_string())?;
    let seed: u64 = flags.value_or("seed", 0)?;
    let out = PathBuf::from(flags.require("out")?);
    let n: usize = flags.required_value("n")?;
    let alpha: f64 = flags.value_or("alpha", 0.3)?;
    let beta: f64 = flags.value_or("beta", 1.2)?;
    if alpha >= beta {
        return Err(Error::Parameter(format!(
            "need alpha < beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let weight_max: f64 = flags.value_or("weight-max", 0.5)?;
    let field_max: f64 = flags.value_or("field-max", 0.0)?;
    let (model, blankets) = match kind.as_str() {
        "rbm" => {
            let params = RbmGenParams {
                n_observed: n,
                n_hidden: flags.value_or("m", 2)?,
                hidden_degree_min: flags.value_or("hidden-degree", 2)?,
                hidden_degree_max: flags.value_or("hidden-degree", 2)?,
                observed_degree_max: flags.value_or("observed-degree-max", 2)?,
                alpha,
                beta,
                weight_max,
                observed_field_range: (0.0, field_max),
                hidden_field_range: (0.0, 0.0),
            };
            let gen = gen_rbm(&params, seed)?;
            (gen.model, gen.blankets)
        }
        "latent" => {
            let params = LatentGenParams {
                n_observed: n,
                n_hidden: flags.value_or("m", 2)?,
                alpha,
                beta,
                degree_max: flags.value_or("observed-degree-max", 3)?,
                hidden_pair_prob: flags.value_or("hidden-pair-prob", 0.5)?,
                n_direct_edges: flags.value_or("direct-edges", 1)?,
                observed_field_max: field_max,
            };
            let gen = gen_latent_ising(&params, seed)?;
            (gen.model, gen.blankets)
        }
        "ising" => {
            let edge_prob: f64 = flags.value_or("edge-prob", 0.4)?;
            let mut model =
                gen_ferro_ising(n, edge_prob, (alpha, weight_max), (0.0, field_max), seed);
            // Rescale interaction mass so every node respects the L1 bound.
            let mut factor = 1.0f64;
            for i in 0..n {
                let edge_mass: f64 = model.neighbors(i).iter().map(|(_, w)| w.abs()).sum();
                if edge_mass > 0.0 {
                    factor = factor.min((beta - model.field(i).abs()) / edge_mass);
                }
            }
            if factor < 1.0 {
                let edges: Vec<_> = model.edges().collect();
                for (i, j, w) in edges {
                    model.set_weight(i, j, w * factor);
                }
            }
            let (blankets, _) = latent_blankets(&model);
            (model, blankets)
        }
        other => return Err(Error::Parameter(format!("unknown model kind `{other}`"))),
    };
    let params = NondegeneracyParams::new(alpha, beta)?;
    let report = validate_nondegeneracy(&model, &params);
    if !report.passes() {
        return Err(Error::Parameter(format!(
            "infeasible parameter combination: the generated model fails nondegeneracy \
             validation ({} weak edges, {} overloaded nodes); widen beta or raise alpha",
            report.weak_edges.len(),
            report.overloaded_nodes.len()
        )));
    }
    std::fs::create_dir_all(&out)?;
    let model_path = out.join("model.txt");
    std::fs::write(&model_path, write_ising(&model))?;
    let estimates: Vec<NeighborhoodEstimate> = blankets
        .iter()
        .enumerate()
        .map(|(node, members)| NeighborhoodEstimate {
            node,
            members: members.clone(),
            greedy_trace: vec![],
            pruned: vec![],
        })
        .collect();
    let sidecar_path = out.join("blankets.txt");
    std::fs::write(&sidecar_path, write_structure(&estimates))?;
    println!("model: {}", model_path.display());
    println!("blankets: {}", sidecar_path.display());
    Ok(())
}

fn cmd_sample(flags: &Flags) -> Result<()> {
    let model = match read_model(flags.require("model")?)? {
        ModelFile::Ising(m) => m,
        ModelFile::Rbm(r) => r.as_ising(),
        ModelFile::Mrf(_) => {
            return Err(Error::Parameter(
                "sampling needs an ising-v1 or rbm-v1 model".into(),
            ))
        }
    };
    let count: usize = flags.required_value("count")?;
    let seed: u64 = flags.value_or("seed", 0)?;
    let samples = if flags.get("gibbs").is_some() {
        let burn_in = flags.value_or("burn-in", latent_ising::sampler::GIBBS_BURN_IN)?;
        let thinning = flags.value_or("thinning", latent_ising::sampler::GIBBS_THINNING)?;
        sample_gibbs(&model, count, burn_in, thinning, seed)
    } else {
        sample_exact(&model, count, seed)?
    };
    let out = flags.require("out")?;
    std::fs::write(out, write_samples(&samples))?;
    println!("wrote {count} rows to {out}");
    Ok(())
}

fn cmd_influence(flags: &Flags) -> Result<()> {
    let samples = parse_samples(&std::fs::read_to_string(flags.require("samples")?)?)?;
    let target: usize = flags.required_value("target")?;
    if target == 0 {
        return Err(Error::Parameter("indices are 1-based".into()));
    }
    let subset = match flags.get("given") {
        Some(list) => parse_index_list(list)?,
        None => 0,
    };
    let est = empirical_influence(&samples, target - 1, subset)?;
    match est.value {
        Some(v) => println!("influence={v:.9} support_count={}", est.support_count),
        None => println!("influence=undefined support_count=0"),
    }
    Ok(())
}

fn learner_kind(flags: &Flags) -> Result<LearnerKind> {
    match flags.value_or("learner", "greedy".to_string())?.as_str() {
        "greedy" => Ok(LearnerKind::Greedy),
        "search" => Ok(LearnerKind::Search),
        other => Err(Error::Parameter(format!("unknown learner `{other}`"))),
    }
}

fn cmd_learn_structure(flags: &Flags) -> Result<()> {
    let samples = parse_samples(&std::fs::read_to_string(flags.require("samples")?)?)?;
    let alpha: f64 = flags.required_value("alpha")?;
    let beta: f64 = flags.required_value("beta")?;
    let d2: usize = flags.required_value("d2")?;
    let ell: usize = flags.value_or("ell", 2)?;
    let delta: f64 = flags.value_or("delta", 0.1)?;
    let kind = learner_kind(flags)?;
    let mut config = default_config(alpha, beta, d2, ell, delta, samples.n_vars(), kind)?;
    if let Some(eta) = flags.parse_value::<f64>("eta")? {
        config.eta = eta;
    }
    if let Some(k) = flags.parse_value::<usize>("k")? {
        config.k = k;
    }
    let estimates: Vec<NeighborhoodEstimate> = (0..samples.n_vars())
        .map(|i| match kind {
            LearnerKind::Greedy => greedy_nbhd(&samples, i, &config),
            LearnerKind::Search => search_nbhd(&samples, i, &config),
        })
        .collect::<Result<_>>()?;
    let out = flags.require("out")?;
    std::fs::write(out, write_structure(&estimates))?;
    println!(
        "learned {} neighborhoods (eta={:.3e}, k={}) -> {out}",
        estimates.len(),
        config.eta,
        config.k
    );
    Ok(())
}

fn cmd_learn_potential(flags: &Flags) -> Result<()> {
    let samples = parse_samples(&std::fs::read_to_string(flags.require("samples")?)?)?;
    let structure = latent_ising::structure::parse_structure(&std::fs::read_to_string(
        flags.require("structure")?,
    )?)?;
    let beta: f64 = flags.required_value("beta")?;
    let d2 = structure.iter().map(|(_, m)| m.len()).max().unwrap_or(1);
    let radius: f64 = flags.value_or("radius", beta * 2f64.powf(d2 as f64 / 2.0))?;
    let holdout: f64 = flags.value_or("holdout", DEFAULT_HOLDOUT_FRACTION)?;
    let iters: usize = flags.value_or("iters", DEFAULT_MAX_ITERS)?;
    let seed: u64 = flags.value_or("seed", 0)?;
    let locals = structure
        .iter()
        .map(|(node, members)| {
            let problem = RegressionProblem::from_samples(&samples, *node, members)?;
            glmtron_fit(&problem, radius, holdout, iters, seed ^ *node as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    let potential = assemble_potential(&locals, TieRule::MinIndex)?;
    let out = flags.require("out")?;
    std::fs::write(out, write_mrf(&potential))?;
    println!("fitted potential with {} terms -> {out}", potential.n_terms());
    Ok(())
}

fn cmd_rbm2mrf(flags: &Flags) -> Result<()> {
    let rbm = match read_model(flags.require("model")?)? {
        ModelFile::Rbm(r) => r,
        _ => return Err(Error::Parameter("rbm2mrf needs an rbm-v1 model".into())),
    };
    let potential = latent_ising::convert::rbm_to_mrf(&rbm)?;
    let out = flags.require("out")?;
    std::fs::write(out, write_mrf(&potential))?;
    println!(
        "induced MRF: {} terms, order {} -> {out}",
        potential.n_terms(),
        potential.order()
    );
    Ok(())
}

fn cmd_mrf2rbm(flags: &Flags) -> Result<()> {
    let potential = match read_model(flags.require("model")?)? {
        ModelFile::Mrf(p) => p,
        _ => return Err(Error::Parameter("mrf2rbm needs an mrf-v1 model".into())),
    };
    let gamma: f64 = flags.value_or("gamma", latent_ising::convert::DEFAULT_GAMMA)?;
    let rbm = latent_ising::convert::mrf_to_rbm(&potential, gamma)?;
    let out = flags.require("out")?;
    std::fs::write(out, write_rbm(&rbm))?;
    println!(
        "compiled RBM: {} observed, {} hidden units -> {out}",
        rbm.n_observed(),
        rbm.n_hidden()
    );
    Ok(())
}

fn cmd_parity_rbm(flags: &Flags) -> Result<()> {
    let n: usize = flags.required_value("n")?;
    let support = parse_index_list(flags.require("support")?)?;
    let noise: f64 = flags.required_value("noise")?;
    let rbm = latent_ising::convert::sparse_parity_rbm(n, support, noise)?;
    let out = flags.require("out")?;
    std::fs::write(out, write_rbm(&rbm))?;
    println!(
        "sparse-parity RBM on {} observed variables ({} hidden units) -> {out}",
        n + 1,
        rbm.n_hidden()
    );
    Ok(())
}

fn cmd_logz(flags: &Flags) -> Result<()> {
    let potential = match read_model(flags.require("model")?)? {
        ModelFile::Mrf(p) => p,
        _ => return Err(Error::Parameter("logz needs an mrf-v1 model".into())),
    };
    let h: f64 = flags.required_value("field-shift")?;
    let epsilon: f64 = flags.value_or("epsilon", 0.1)?;
    let taylor = lee_yang_log_z(&potential, h, epsilon)?;
    let poly = fugacity_polynomial(&potential.with_uniform_field_shift(h))?;
    let zero_report = check_lee_yang(&poly)?;
    println!("m={}", taylor.truncation_order);
    println!("lambda={:.12}", taylor.lambda);
    println!("approx_log_z={:.12}", taylor.model_log_z());
    if potential.n_vars() <= ENUMERATION_BOUND {
        let exact = distribution_from_potential(&potential)?.log_z();
        println!("exact_log_z={exact:.12}");
        println!("abs_error={:.3e}", (taylor.model_log_z() - exact).abs());
    } else {
        println!("exact_log_z=unavailable (beyond enumeration bound)");
    }
    println!(
        "min_zero_modulus={:.9} lee_yang={}",
        zero_report.min_modulus,
        if zero_report.passes { "pass" } else { "fail" }
    );
    Ok(())
}

fn cmd_experiment(flags: &Flags) -> Result<()> {
    let format = flags.value_or("format", "csv".to_string())?;
    if format != "csv" {
        return Err(Error::Parameter(format!(
            "only --format csv is supported, got `{format}`"
        )));
    }
    let spec = parse_experiment_spec(&std::fs::read_to_string(flags.require("config")?)?)?;
    let results = run_experiment(&spec)?;
    let out = PathBuf::from(flags.require("out")?);
    let path = write_results(&results, &out)?;
    for (m, freq, med) in &results.summary {
        match med {
            Some(v) => println!("M={m}: recovery {freq:.3}, median potential Linf {v:.4}"),
            None => println!("M={m}: recovery {freq:.3}"),
        }
    }
    println!("rows: {}", path.display());
    Ok(())
}

fn cmd_verify(flags: &Flags) -> Result<bool> {
    let report = latent_ising::verify::run_all()?;
    for outcome in &report.outcomes {
        println!("{}", outcome.line());
    }
    if let Some(dir) = flags.get("out") {
        latent_ising::verify::write_artifacts(&report, Path::new(dir))?;
        println!("artifacts: {dir}");
    }
    Ok(report.all_passed())
}

fn dispatch(command: &str, flags: &Flags) -> Result<bool> {
    match command {
        "gen-model" => cmd_gen_model(flags).map(|()| true),
        "sample" => cmd_sample(flags).map(|()| true),
        "influence" => cmd_influence(flags).map(|()| true),
        "learn-structure" => cmd_learn_structure(flags).map(|()| true),
        "learn-potential" => cmd_learn_potential(flags).map(|()| true),
        "rbm2mrf" => cmd_rbm2mrf(flags).map(|()| true),
        "mrf2rbm" => cmd_mrf2rbm(flags).map(|()| true),
        "parity-rbm" => cmd_parity_rbm(flags).map(|()| true),
        "logz" => cmd_logz(flags).map(|()| true),
        "experiment" => cmd_experiment(flags).map(|()| true),
        "verify" => cmd_verify(flags),
        other => Err(Error::Parameter(format!("unknown command `{other}`"))),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(1);
    };
    if command == "--help" || command == "help" {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let flags = match Flags::parse(&args[1..]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}\n\n{USAGE}");
            return ExitCode::from(1);
        }
    };
    match dispatch(command, &flags) {
        Ok(true) => ExitCode::SUCCESS,
        // A completed verify run with failing criteria: assumption-violation code.
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
