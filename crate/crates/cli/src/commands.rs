use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use repeval_core::curve::{
    estimate_curve, estimate_curve_with, estimate_curve_with_holdout, probe_sampler, EvalPlan,
    LossDataCurve, LossMetric, LossSampler, StubNoise, StubSampler,
};
use repeval_core::data::{
    gen_gaussian_task, gen_parity, load_dataset, save_dataset, Dataset, DatasetFormat, ParityRepr,
    ParitySpec,
};
use repeval_core::measures::{
    esc_from_curve, esc_search, mdl_at, sdl_from_curve, va_at, EscSearchConfig, MeasureError,
    MeasureResult,
};
use repeval_core::report::{curve_to_csv, plot_svg, ComparisonTable};
use repeval_core::RandomStream;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{
    CurveArgs, EscArgs, MeasureArgs, MetricArg, NoiseArg, ReportArgs, ReprArg, SourceArgs,
    SynthArgs, SynthTask,
};
use crate::config::FileConfig;
use crate::manifest::Manifest;
use crate::spec::{parse_alg, parse_sizes, AlgChoice, ProbeOverrides};

/// Settings shared by every command.
pub struct RunContext {
    pub out: PathBuf,
    pub seed: u64,
    pub cfg: FileConfig,
    pub argv: Vec<String>,
}

impl RunContext {
    fn manifest(&self, command: &str, settings: serde_json::Value) -> Manifest {
        Manifest::new(command, &self.argv, self.seed, settings)
    }

    fn write(
        &self,
        manifest: &mut Manifest,
        name: &str,
        contents: &str,
    ) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        manifest.output(&path)?;
        Ok(path)
    }
}

/// Column name for tables and file stems.
fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn load(path: &Path) -> anyhow::Result<Dataset> {
    load_dataset(path, DatasetFormat::from_path(path))
        .with_context(|| format!("loading {}", path.display()))
}

fn load_curve(path: &Path) -> anyhow::Result<LossDataCurve> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    LossDataCurve::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn synth(ctx: &RunContext, a: SynthArgs) -> anyhow::Result<()> {
    let stream = RandomStream::new(ctx.seed).derive("synth", 0);
    let (ds, settings) = match a.task {
        SynthTask::Parity {
            d,
            alpha,
            repr,
            n,
            secret,
        } => {
            let repr = match repr {
                ReprArg::Noisy => ParityRepr::NoisyLabel,
                ReprArg::Raw => ParityRepr::Raw,
            };
            let mut spec = ParitySpec::new(d, alpha, repr, ctx.seed);
            if let Some(bits) = secret {
                spec.secret = Some(
                    bits.chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(anyhow!("secret must be a 0/1 string, got {bits:?}")),
                        })
                        .collect::<anyhow::Result<_>>()?,
                );
            }
            spec.validate()?;
            let ds = gen_parity(&spec, n, &stream)?;
            (ds, json!({ "task": "parity", "spec": spec, "n": n }))
        }
        SynthTask::Gaussian { mu, d, n } => {
            let ds = gen_gaussian_task(d, mu, n, &stream)?;
            (ds, json!({ "task": "gaussian", "mu": mu, "d": d, "n": n }))
        }
    };
    let mut manifest = ctx.manifest("synth", settings);
    let file = a
        .output
        .unwrap_or_else(|| format!("{}.rpev", file_stem(ds.name())));
    std::fs::create_dir_all(&ctx.out).with_context(|| format!("creating {}", ctx.out.display()))?;
    let path = ctx.out.join(&file);
    save_dataset(&ds, &path, DatasetFormat::from_path(&path))
        .with_context(|| format!("writing {}", path.display()))?;
    manifest.output(&path)?;
    println!(
        "wrote {} ({} examples, d={}, K={}, fingerprint {})",
        path.display(),
        ds.len(),
        ds.dim(),
        ds.num_classes(),
        ds.fingerprint()
    );
    println!("oracle_loss {:.6}", ds.oracle_loss().unwrap_or(f64::NAN));
    manifest.write(&ctx.out, "synth")
}

/// Loss source resolved from flags and config.
struct Source {
    choice: AlgChoice,
    alg_text: String,
    data: Option<PathBuf>,
    holdout: Option<PathBuf>,
    plan: EvalPlan,
    noise: StubNoise,
}

impl Source {
    fn settings(&self) -> serde_json::Value {
        let alg = match &self.choice {
            AlgChoice::Learner(a) => serde_json::to_value(a).unwrap(),
            AlgChoice::Stub(c) => json!({ "stub": c, "noise": self.noise }),
        };
        json!({
            "alg": self.alg_text,
            "algorithm": alg,
            "data": self.data,
            "holdout": self.holdout,
            "plan": self.plan,
        })
    }

    fn inputs(&self) -> Vec<&Path> {
        self.data
            .iter()
            .chain(&self.holdout)
            .map(PathBuf::as_path)
            .collect()
    }

    fn stub(&self) -> Option<StubSampler> {
        match &self.choice {
            AlgChoice::Stub(c) => Some(StubSampler {
                curve: c.clone(),
                noise: self.noise,
                bound: self.plan.loss_cap.unwrap_or(1.0),
                num_classes: 2,
            }),
            AlgChoice::Learner(_) => None,
        }
    }

    fn dataset(&self) -> anyhow::Result<Dataset> {
        let path = self
            .data
            .as_ref()
            .ok_or_else(|| anyhow!("--data is required for this algorithm"))?;
        load(path)
    }

    /// Pool and holdout exactly as curve estimation splits them.
    fn split(&self) -> anyhow::Result<(Dataset, Dataset)> {
        let ds = self.dataset()?;
        match &self.holdout {
            Some(h) => Ok((ds, load(h)?)),
            None => {
                let stream = RandomStream::new(self.plan.master_seed).derive("holdout", 0);
                Ok(ds.split_holdout(self.plan.holdout_fraction, &stream)?)
            }
        }
    }
}

fn resolve_source(
    ctx: &RunContext,
    a: &SourceArgs,
    grid: Vec<usize>,
    replicates: Option<usize>,
) -> anyhow::Result<Source> {
    let cfg = &ctx.cfg;
    let alg_text = a
        .alg
        .clone()
        .or_else(|| cfg.algorithm.name.clone())
        .ok_or_else(|| anyhow!("--alg is required"))?;
    let overrides = ProbeOverrides {
        width: a.width.or(cfg.algorithm.width),
        learning_rate: a.lr.or(cfg.algorithm.learning_rate),
        steps: a.steps.or(cfg.algorithm.steps),
        batch_size: a.batch.or(cfg.algorithm.batch_size),
    };
    let choice = parse_alg(&alg_text, overrides)?;
    let noise = match a.noise {
        Some(NoiseArg::Bernoulli) => StubNoise::Bernoulli,
        Some(NoiseArg::None) => StubNoise::None,
        None => match cfg.algorithm.noise.as_deref() {
            None | Some("none") => StubNoise::None,
            Some("bernoulli") => StubNoise::Bernoulli,
            Some(other) => bail!("unknown noise {other:?}"),
        },
    };
    let metric = match a.metric {
        Some(MetricArg::Nll) => LossMetric::Nll,
        Some(MetricArg::ZeroOne) => LossMetric::ZeroOne,
        None => match cfg.plan.metric.as_deref() {
            None | Some("nll") => LossMetric::Nll,
            Some("zero-one") | Some("zero_one") => LossMetric::ZeroOne,
            Some(other) => bail!("unknown metric {other:?}"),
        },
    };
    let defaults = EvalPlan::default();
    let plan = EvalPlan {
        grid,
        replicates: replicates.unwrap_or(defaults.replicates),
        loss_cap: a.loss_cap.or(cfg.plan.loss_cap),
        holdout_fraction: a
            .holdout_fraction
            .or(cfg.data.holdout_fraction)
            .unwrap_or(defaults.holdout_fraction),
        normalize: !a.no_normalize && cfg.plan.normalize.unwrap_or(true),
        metric,
        master_seed: ctx.seed,
    };
    Ok(Source {
        choice,
        alg_text,
        data: a.data.clone().or_else(|| cfg.data.path.clone()),
        holdout: a.holdout.clone().or_else(|| cfg.data.holdout.clone()),
        plan,
        noise,
    })
}

pub fn curve(ctx: &RunContext, a: CurveArgs) -> anyhow::Result<()> {
    let sizes = a
        .sizes
        .clone()
        .or_else(|| ctx.cfg.plan.sizes.clone())
        .ok_or_else(|| anyhow!("--sizes is required"))?;
    let replicates = a.replicates.or(ctx.cfg.plan.replicates);
    let src = resolve_source(ctx, &a.source, parse_sizes(&sizes)?, replicates)?;
    src.plan.validate()?;
    let mut manifest = ctx.manifest("curve", src.settings());
    for p in src.inputs() {
        manifest.input(p)?;
    }
    let mut curve = match (&src.choice, src.stub()) {
        (_, Some(stub)) => {
            let desc = format!("stub {}", src.alg_text);
            estimate_curve_with(&stub, &src.plan, "stub", &desc)?
        }
        (AlgChoice::Learner(alg), None) => match &src.holdout {
            Some(h) => estimate_curve_with_holdout(alg, &src.dataset()?, &load(h)?, &src.plan)?,
            None => estimate_curve(alg, &src.dataset()?, &src.plan)?,
        },
        (AlgChoice::Stub(_), None) => unreachable!("stubs always build a sampler"),
    };
    if let Some(name) = a.name {
        curve = curve.with_name(name);
    }
    for (p, m) in curve.points.iter().zip(&curve.monotone_means) {
        println!(
            "n={:>7}  mean={:.4}  se={:.4}  monotone={:.4}",
            p.n, p.mean_loss, p.std_error, m
        );
    }
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let file = format!("{}.curve.json", file_stem(&curve.name));
    let path = ctx.write(&mut manifest, &file, &(curve.to_json() + "\n"))?;
    println!("wrote {}", path.display());
    manifest.write(&ctx.out, "curve")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasuresFile {
    pub columns: Vec<String>,
    pub results: Vec<ColumnResult>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ColumnResult {
    pub column: String,
    pub result: MeasureResult,
}

impl MeasuresFile {
    fn table(&self) -> anyhow::Result<ComparisonTable> {
        let mut t = ComparisonTable::new(self.columns.iter().cloned());
        for r in &self.results {
            t.insert(&r.column, r.result.clone())?;
        }
        Ok(t)
    }
}

fn column_names(curves: &[LossDataCurve], given: &[String]) -> anyhow::Result<Vec<String>> {
    if !given.is_empty() {
        if given.len() != curves.len() {
            bail!("{} names for {} curves", given.len(), curves.len());
        }
        return Ok(given.to_vec());
    }
    let mut names: Vec<String> = Vec::new();
    for c in curves {
        let mut name = c.name.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{} ({k})", c.name);
            k += 1;
        }
        names.push(name);
    }
    Ok(names)
}

pub fn measure(ctx: &RunContext, a: MeasureArgs) -> anyhow::Result<()> {
    let curves = a
        .curves
        .iter()
        .map(|p| load_curve(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let first = &curves[0];
    for (c, p) in curves.iter().zip(&a.curves).skip(1) {
        if c.metric != first.metric || (c.loss_bound - first.loss_bound).abs() > 1e-12 {
            bail!(
                "{} uses loss bound {} ({:?}) but {} uses {} ({:?}); curves are not comparable",
                p.display(),
                c.loss_bound,
                c.metric,
                a.curves[0].display(),
                first.loss_bound,
                first.metric
            );
        }
    }
    let at = if !a.at.is_empty() {
        a.at.clone()
    } else if !ctx.cfg.measures.at.is_empty() {
        ctx.cfg.measures.at.clone()
    } else {
        let last = first.points.last().expect("validated curve").n;
        if curves.iter().all(|c| c.point_at(last).is_some()) {
            vec![last]
        } else {
            Vec::new()
        }
    };
    let epsilons = if a.epsilon.is_empty() {
        ctx.cfg.measures.epsilon.clone()
    } else {
        a.epsilon.clone()
    };
    let columns = column_names(&curves, &a.names)?;
    let mut manifest = ctx.manifest(
        "measure",
        json!({ "curves": a.curves, "at": at, "epsilon": epsilons, "columns": columns }),
    );
    for p in &a.curves {
        manifest.input(p)?;
    }

    let mut results = Vec::new();
    for (c, col) in curves.iter().zip(&columns) {
        for &n in &at {
            results.push(ColumnResult {
                column: col.clone(),
                result: va_at(c, n)?,
            });
            results.push(ColumnResult {
                column: col.clone(),
                result: mdl_at(c, n, c.num_classes)?,
            });
        }
        for &eps in &epsilons {
            for r in [sdl_from_curve(c, eps)?, esc_from_curve(c, eps)?] {
                if let Some(note) = &r.annotation {
                    eprintln!("note: {col}: {note}");
                }
                results.push(ColumnResult {
                    column: col.clone(),
                    result: r,
                });
            }
        }
    }
    if results.is_empty() {
        bail!("nothing to compute: pass --at and/or --epsilon");
    }
    let file = MeasuresFile { columns, results };
    let md = file.table()?.to_markdown()?;
    ctx.write(
        &mut manifest,
        "measures.json",
        &(serde_json::to_string_pretty(&file)? + "\n"),
    )?;
    ctx.write(&mut manifest, "measures.md", &md)?;
    print!("{md}");
    manifest.write(&ctx.out, "measure")
}

fn confirm() -> anyhow::Result<bool> {
    print!("proceed? [y/N] ");
    std::io::stdout().flush()?;
    let mut line = String::new();
    std::io::stdin().lock().read_line(&mut line)?;
    Ok(matches!(line.trim(), "y" | "Y" | "yes"))
}

pub fn esc_refine(ctx: &RunContext, a: EscArgs) -> anyhow::Result<()> {
    let m = &ctx.cfg.measures;
    let epsilon = a
        .epsilon
        .or_else(|| m.epsilon.first().copied())
        .ok_or_else(|| anyhow!("--epsilon is required"))?;
    let limit = a
        .limit
        .or(m.search_limit)
        .ok_or_else(|| anyhow!("--limit is required"))?;
    let config = EscSearchConfig {
        epsilon,
        delta: a.delta.or(m.delta).unwrap_or(0.05),
        search_limit: limit,
        rounds: a.rounds.or(m.rounds).unwrap_or(2),
        budget: a.budget.or(m.budget),
        master_seed: ctx.seed,
    };
    config.validate()?;
    let src = resolve_source(ctx, &a.source, vec![1], None)?;
    let sampler: Box<dyn LossSampler> = match (&src.choice, src.stub()) {
        (_, Some(stub)) => Box::new(stub),
        (AlgChoice::Learner(alg), None) => {
            let (pool, holdout) = src.split()?;
            Box::new(probe_sampler(alg, &pool, &holdout, &src.plan))
        }
        (AlgChoice::Stub(_), None) => unreachable!("stubs always build a sampler"),
    };
    let bound = sampler.loss_bound();
    let s = config.replicates(bound);
    let runs = config.max_training_runs(bound);
    println!(
        "S = {s} replicates per evaluated size (B = {bound}); at most {runs} training runs over {} round(s)",
        config.rounds
    );
    if let Some(budget) = config.budget {
        if runs > budget {
            return Err(MeasureError::BudgetExceeded {
                required: runs,
                budget,
                detail: format!(
                    "S={s} replicates per size x up to 10 sizes x {} rounds",
                    config.rounds
                ),
            }
            .into());
        }
    }
    if !a.yes {
        if !std::io::stdin().is_terminal() {
            println!("not started; re-run with --yes to execute");
            return Ok(());
        }
        if !confirm()? {
            println!("aborted");
            return Ok(());
        }
    }
    let mut settings = src.settings();
    settings["search"] = serde_json::to_value(&config)?;
    let mut manifest = ctx.manifest("esc-refine", settings);
    for p in src.inputs() {
        manifest.input(p)?;
    }
    let result = esc_search(sampler.as_ref(), &config)?;
    println!("{result}");
    if let Some(note) = &result.annotation {
        println!("{note}");
    }
    let path = ctx.write(
        &mut manifest,
        "esc.json",
        &(serde_json::to_string_pretty(&result)? + "\n"),
    )?;
    println!("wrote {}", path.display());
    manifest.write(&ctx.out, "esc-refine")
}

pub fn report(ctx: &RunContext, a: ReportArgs) -> anyhow::Result<()> {
    let curves = a
        .curves
        .iter()
        .map(|p| load_curve(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut manifest = ctx.manifest(
        "report",
        json!({ "curves": a.curves, "epsilon": a.epsilon, "measures": a.measures }),
    );
    for p in &a.curves {
        manifest.input(p)?;
    }
    let svg = plot_svg(&curves, a.epsilon)?;
    let path = ctx.write(&mut manifest, "curves.svg", &svg)?;
    println!("wrote {}", path.display());
    let mut used = Vec::new();
    for c in &curves {
        let mut stem = file_stem(&c.name);
        while used.contains(&stem) {
            stem.push('_');
        }
        let path = ctx.write(&mut manifest, &format!("{stem}.csv"), &curve_to_csv(c))?;
        println!("wrote {}", path.display());
        used.push(stem);
    }
    if let Some(mpath) = &a.measures {
        manifest.input(mpath)?;
        let text = std::fs::read_to_string(mpath)
            .with_context(|| format!("reading {}", mpath.display()))?;
        let file: MeasuresFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", mpath.display()))?;
        let md = file.table()?.to_markdown()?;
        let path = ctx.write(&mut manifest, "table.md", &md)?;
        println!("wrote {}", path.display());
    }
    manifest.write(&ctx.out, "report")
}
