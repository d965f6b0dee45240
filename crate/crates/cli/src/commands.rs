use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use axlab::approx::{AxConfig, Multiplier};
use axlab::float::{FpFormat, FpMultiplier};
use axlab::kernels::{
    bundled_image, cer, default_taps, fir, gaussian_blur_fp, matmul_tiled, pgm_read, pgm_write, psnr, sobel, ssim, GrayImage, Matrix,
};
use axlab::metrics::pareto::pareto_front;
use axlab::metrics::sampling::rng_from_seed;
use axlab::metrics::{run_sweep, Domain, MetricsAccumulator, Sampler, SweepRow, SweepSpec, DEFAULT_THRESHOLDS};
use axlab::net::{bundled_energy_table, bundled_network, estimate_energy, fidelity, read_axnet, AssignmentScheme, EnergyTable};
use axlab::oracle::{run_suite, Suite};
use axlab::ApproxOptions;
use rand::Rng;

use crate::args::{Globals, KernelArgs, NetArgs, OracleArgs, ParetoArgs, SweepArgs};

/// Bad invocation; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// CSV bytes plus whether every check inside passed.
pub struct Output {
    pub csv: Vec<u8>,
    pub ok: bool,
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| anyhow!("{}", e.error()))
}

fn parse_cfg(text: &str) -> Result<AxConfig> {
    text.parse::<AxConfig>().with_context(|| format!("configuration {text:?}"))
}

fn load_table(spec: &str) -> Result<EnergyTable> {
    if spec == "bundled" {
        return Ok(bundled_energy_table());
    }
    let f = fs::File::open(spec).with_context(|| format!("opening {spec}"))?;
    Ok(EnergyTable::from_csv(f)?)
}

pub fn sweep(g: &Globals, a: SweepArgs) -> Result<Output> {
    if a.cfg.is_empty() {
        return Err(usage("sweep needs at least one --cfg"));
    }
    let configs = a.cfg.iter().map(|c| parse_cfg(c)).collect::<Result<Vec<_>>>()?;
    let (domain, sampler) = match &a.format {
        Some(f) => {
            if a.exhaustive_b || a.exhaustive {
                return Err(usage("exhaustive samplers apply to fixed-point widths only"));
            }
            (Domain::Float(FpFormat::parse(f)?), Sampler::UniformNormalFp)
        }
        None => {
            let sampler = if a.exhaustive_b {
                Sampler::ExhaustiveB { a: a.a.unwrap_or(1) }
            } else if a.exhaustive {
                Sampler::ExhaustivePairs
            } else {
                Sampler::UniformFixed
            };
            (Domain::Fixed(a.n.unwrap_or(16)), sampler)
        }
    };
    let spec = SweepSpec {
        domain,
        configs,
        sampler,
        samples: g.samples.unwrap_or(200_000),
        seed: g.seed,
        thresholds: DEFAULT_THRESHOLDS.to_vec(),
        options: ApproxOptions::default(),
    };
    let rows = run_sweep(&spec)?;
    let csv = match &a.energy_table {
        None => csv_bytes(&SweepRow::HEADER, rows.iter().map(|r| r.record()))?,
        Some(t) => {
            let table = load_table(t)?;
            let mut header = SweepRow::HEADER.to_vec();
            header.push("cost_units");
            let mut records = vec![];
            for r in &rows {
                let mut rec = r.record();
                rec.push(table.cost(&r.config)?.to_string());
                records.push(rec);
            }
            csv_bytes(&header, records)?
        }
    };
    Ok(Output { csv, ok: true })
}

const KERNEL_HEADER: [&str; 6] = ["kernel", "config", "cer_pct", "psnr_db", "ssim", "mred_pct"];

fn load_image(path: &Option<std::path::PathBuf>) -> Result<GrayImage> {
    match path {
        Some(p) => pgm_read(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(bundled_image()),
    }
}

fn mred_pct(pairs: impl IntoIterator<Item = (i128, i128)>) -> Result<String> {
    let mut acc = MetricsAccumulator::new(&DEFAULT_THRESHOLDS);
    for (e, x) in pairs {
        acc.push_fixed(e, x);
    }
    Ok(format!("{:.2}", acc.report()?.mred_pct()))
}

fn db(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.2}")
    }
}

pub fn kernel(g: &Globals, a: KernelArgs) -> Result<Output> {
    let name = a.name.clone().ok_or_else(|| usage("kernel needs a name: sobel, blur, fir or matmul"))?;
    let cfg = parse_cfg(a.cfg.as_deref().unwrap_or("acc"))?;
    let mut row = vec![name.clone(), cfg.to_string(), String::new(), String::new(), String::new(), String::new()];
    match name.as_str() {
        "sobel" => {
            let img = load_image(&a.image)?;
            let threshold = a.threshold.unwrap_or(64.0);
            let reference = sobel(&img, &Multiplier::new(&AxConfig::Accurate, 16)?, threshold)?;
            let edges = sobel(&img, &Multiplier::new(&cfg, 16)?, threshold)?;
            row[2] = format!("{:.2}", 100.0 * cer(&edges, &reference)?);
            if let Some(p) = &a.artifact {
                pgm_write(p, &edges.to_image())?;
            }
        }
        "blur" => {
            let img = load_image(&a.image)?;
            let exact = gaussian_blur_fp(&img, &FpMultiplier::new(&AxConfig::Accurate, FpFormat::SINGLE)?)?;
            let out = gaussian_blur_fp(&img, &FpMultiplier::new(&cfg, FpFormat::SINGLE)?)?;
            row[3] = db(psnr(&exact, &out)?);
            row[4] = format!("{:.4}", ssim(&exact, &out)?);
            if let Some(p) = &a.artifact {
                pgm_write(p, &out)?;
            }
        }
        "fir" => {
            let signal = match &a.signal {
                Some(p) => read_signal(p)?,
                None => {
                    let mut rng = rng_from_seed(g.seed);
                    (0..g.samples.unwrap_or(4096)).map(|_| rng.random_range(-(1i64 << 15)..1i64 << 15)).collect()
                }
            };
            let taps = default_taps();
            let exact = fir(&signal, &taps, &Multiplier::new(&AxConfig::Accurate, 16)?)?;
            let out = fir(&signal, &taps, &Multiplier::new(&cfg, 16)?)?;
            row[5] = mred_pct(exact.iter().copied().zip(out.iter().copied()))?;
            if let Some(p) = &a.artifact {
                let text: String = out.iter().map(|v| format!("{v}\n")).collect();
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        "matmul" => {
            // non-negative entries, as for pixel or activation data
            let mut rng = rng_from_seed(g.seed);
            let mut tile = || Matrix::new(3, 3, (0..9).map(|_| rng.random_range(0..1i64 << 15)).collect());
            let (exact_mul, mul) = (Multiplier::new(&AxConfig::Accurate, 16)?, Multiplier::new(&cfg, 16)?);
            let mut pairs = vec![];
            for _ in 0..g.samples.unwrap_or(10_000) {
                let (x, y) = (tile()?, tile()?);
                pairs.extend(matmul_tiled(&x, &y, &exact_mul, 3)?.into_iter().zip(matmul_tiled(&x, &y, &mul, 3)?));
            }
            row[5] = mred_pct(pairs)?;
        }
        other => return Err(usage(format!("unknown kernel {other:?}; expected sobel, blur, fir or matmul"))),
    }
    Ok(Output { csv: csv_bytes(&KERNEL_HEADER, [row])?, ok: true })
}

fn read_signal(path: &Path) -> Result<Vec<i64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<i64>().with_context(|| format!("bad sample {l:?} in {}", path.display())))
        .collect()
}

pub fn oracle(g: &Globals, a: OracleArgs) -> Result<Output> {
    let name = a.suite.unwrap_or_default();
    let suites = match name.as_str() {
        "" => return Err(usage("oracle needs a suite name: fixed, dlsb, partition, dyfxu, winograd or all")),
        "all" => Suite::ALL.to_vec(),
        s => vec![s.parse::<Suite>().map_err(|e| usage(e.to_string()))?],
    };
    let mut ok = true;
    let mut rows = vec![];
    for s in suites {
        let r = run_suite(s, g.seed)?;
        ok &= r.passed();
        rows.push(vec![
            s.to_string(),
            r.checked.to_string(),
            r.mismatches.to_string(),
            if r.passed() { "pass" } else { "fail" }.to_string(),
        ]);
    }
    Ok(Output { csv: csv_bytes(&["suite", "checked", "mismatches", "result"], rows)?, ok })
}

pub fn pareto(a: ParetoArgs) -> Result<Output> {
    let input = a.input.ok_or_else(|| usage("pareto needs --input"))?;
    let error_col = a.error_col.unwrap_or_else(|| "mred_pct".into());
    let cost_col = a.cost_col.unwrap_or_else(|| "cost_units".into());
    let mut rdr = csv::Reader::from_path(&input).with_context(|| format!("reading {}", input.display()))?;
    let header = rdr.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| anyhow!("{}: missing column {name:?}", input.display()));
    let (ei, ci) = (col(&error_col)?, col(&cost_col)?);
    let mut records = vec![];
    let mut points = vec![];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            let v = rec.get(i).unwrap_or("");
            v.trim().parse::<f64>().map_err(|_| anyhow!("{}: row {}: {v:?} is not a number", input.display(), line + 1))
        };
        points.push((num(ei)?, num(ci)?));
        records.push(rec.iter().map(String::from).collect::<Vec<_>>());
    }
    let mut front = pareto_front(&points);
    front.sort_unstable();
    let header: Vec<&str> = header.iter().collect();
    let csv = csv_bytes(&header, front.into_iter().map(|i| records[i].clone()))?;
    Ok(Output { csv, ok: true })
}

pub fn net(g: &Globals, a: NetArgs) -> Result<Output> {
    let network = match &a.network {
        Some(p) => read_axnet(p)?,
        None => bundled_network(),
    };
    let table = match &a.energy_table {
        Some(p) => load_table(&p.to_string_lossy())?,
        None => bundled_energy_table(),
    };
    let mut schemes: Vec<(String, AssignmentScheme)> = vec![];
    for c in &a.cfg {
        let cfg = parse_cfg(c)?;
        schemes.push((cfg.to_string(), AssignmentScheme::uniform(&network, cfg)));
    }
    for p in &a.scheme {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let label = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        schemes.push((label, AssignmentScheme::from_toml(&text).with_context(|| format!("scheme {}", p.display()))?));
    }
    if schemes.is_empty() {
        for c in ["acc", "rad:k=6", "rad:k=8"] {
            let cfg = parse_cfg(c)?;
            schemes.push((c.to_string(), AssignmentScheme::uniform(&network, cfg)));
        }
    }
    let inputs = network.random_inputs(g.samples.unwrap_or(64), g.seed);
    let mut rows = vec![];
    for (label, scheme) in &schemes {
        let proxy = fidelity(&network, scheme, &inputs)?;
        let energy = estimate_energy(&network, scheme, &table)?;
        rows.push(vec![label.clone(), format!("{proxy:.6}"), energy.total.to_string()]);
    }
    if rows.is_empty() {
        bail!("no schemes to evaluate");
    }
    Ok(Output { csv: csv_bytes(&["scheme", "accuracy_proxy", "energy_units"], rows)?, ok: true })
}
