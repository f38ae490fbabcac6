use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use ramsey_glue::canon::CanonicalForm;
use ramsey_glue::extender::{census_with, count_by_order_and_size, has_one_point_extension, Deletion};
use ramsey_glue::gluer::{glue, GluingProblem};
use ramsey_glue::io::dedup::{dedup_stream, sorted_forms, DedupConfig};
use ramsey_glue::io::graph6::read_graphs;
use ramsey_glue::io::manifest::{manifest_path, Manifest};
use ramsey_glue::io::verify::{verify_reader, Violation};
use ramsey_glue::pair::{run_plan, Plan};
use ramsey_glue::spec::ramsey_number_3;
use ramsey_glue::{is_ramsey, CensusSpec, Graph};

use crate::{Cli, Command, ExtendArgs, GlueArgs, IoArgs, PairglueArgs, VerifyArgs};

/// `Ok(false)` means the run finished but a check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Extend(a) => extend(a),
        Command::Glue(a) => glue_cmd(a),
        Command::Pairglue(a) => pairglue(a),
        Command::Verify(a) => verify(a),
        Command::CensusStats(a) => census_stats(a),
        Command::Canon(a) => canon(a, cli.memory_cap),
    }
}

pub fn parse_shard(text: &str) -> Result<(usize, usize), String> {
    let (i, k) = text.split_once('/').ok_or("expected I/K")?;
    let i: usize = i.trim().parse().map_err(|_| format!("bad shard index `{i}`"))?;
    let k: usize = k.trim().parse().map_err(|_| format!("bad shard count `{k}`"))?;
    if k == 0 || i >= k {
        return Err(format!("shard {i}/{k} out of range (0 <= I < K)"));
    }
    Ok((i, k))
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Box::new(BufReader::new(f)))
}

fn read_input(io_args: &IoArgs) -> Result<Vec<Graph>> {
    let graphs = read_graphs(open_input(&io_args.input)?)
        .collect::<ramsey_glue::Result<Vec<_>>>()
        .with_context(|| format!("reading {}", io_args.input.display()))?;
    Ok(match io_args.shard {
        Some((i, k)) => {
            let len = graphs.len();
            graphs[i * len / k..(i + 1) * len / k].to_vec()
        }
        None => graphs,
    })
}

fn base_manifest(command: &str, io_args: &IoArgs) -> Manifest {
    let mut m = Manifest::new();
    m.push("tool", concat!("rglue ", env!("CARGO_PKG_VERSION")));
    m.push("command", command);
    m.push("input", io_args.input.display());
    if let Some((i, k)) = io_args.shard {
        m.push("shard", format!("{i}/{k}"));
    }
    m
}

fn print_counts(w: &mut dyn Write, counts: &BTreeMap<(usize, usize), usize>) -> io::Result<()> {
    for ((n, e), c) in counts {
        writeln!(w, "n={n} e={e}: {c}")?;
    }
    writeln!(w, "total: {}", counts.values().sum::<usize>())
}

/// Writes sorted forms and the manifest; the count table goes to stdout, or
/// to stderr when the graphs themselves go to stdout.
fn finish(io_args: &IoArgs, forms: impl IntoIterator<Item = CanonicalForm>, mut manifest: Manifest) -> Result<()> {
    let forms = sorted_forms(forms);
    let counts = count_by_order_and_size(forms.iter());
    let write_forms = |w: &mut dyn Write| -> io::Result<()> {
        for f in &forms {
            w.write_all(f.as_bytes())?;
            w.write_all(b"\n")?;
        }
        w.flush()
    };
    match &io_args.out {
        Some(path) => {
            let mut f = io::BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            write_forms(&mut f)?;
            manifest.push("output", path.display());
            manifest.push_counts(&counts);
            manifest.write(manifest_path(path))?;
            print_counts(&mut io::stdout().lock(), &counts)?;
        }
        None => {
            write_forms(&mut io::stdout().lock())?;
            print_counts(&mut io::stderr().lock(), &counts)?;
        }
    }
    Ok(())
}

fn extend(a: &ExtendArgs) -> Result<bool> {
    if a.s != 3 {
        bail!("only s = 3 is supported");
    }
    let graphs = read_input(&a.io)?;
    let mut by_order: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
    for g in graphs {
        if let Some(n) = a.n {
            if g.order() + 1 != n {
                bail!("input graph of order {} cannot extend to order {n}", g.order());
            }
        }
        by_order.entry(g.order()).or_default().push(g);
    }
    let rule = if a.max_degree_deletion { Deletion::MaxDegree } else { Deletion::Any };
    let mut manifest = base_manifest("extend", &a.io);
    let mut out = BTreeSet::new();
    for (order, seeds) in &by_order {
        let mut spec = CensusSpec::new(3, a.t, order + 1);
        spec.max_edges = a.max_edges;
        let census = census_with(&spec, seeds, rule)?;
        manifest.push("spec", spec);
        manifest.push("completeness", census.completeness);
        out.extend(census.graphs);
    }
    finish(&a.io, out, manifest)?;
    Ok(true)
}

fn glue_cmd(a: &GlueArgs) -> Result<bool> {
    if a.s != 3 {
        bail!("only s = 3 is supported");
    }
    if a.t < 2 {
        bail!("t must be at least 2");
    }
    let tbound = a.t - 1;
    let cores = read_input(&a.io)?;
    for (i, c) in cores.iter().enumerate() {
        if !is_ramsey(c, 3, tbound) {
            bail!("input core {} is not in R(3,{tbound})", i + 1);
        }
    }
    let d_hi = a.d_max.unwrap_or(tbound).min(tbound);
    let d_lo = a.d_min.unwrap_or_else(|| match (a.n, ramsey_number_3(tbound)) {
        (Some(n), Some(r)) => (n - 1).saturating_sub(r - 1),
        _ => 0,
    });
    let mut jobs = Vec::new();
    for (i, c) in cores.iter().enumerate() {
        let degrees: Vec<usize> = match a.n {
            Some(n) if c.order() < n => vec![n - 1 - c.order()],
            Some(_) => Vec::new(),
            None => (d_lo..=d_hi).collect(),
        };
        jobs.extend(degrees.into_iter().filter(|d| (d_lo..=d_hi).contains(d)).map(|d| (i, d)));
    }
    let results: Vec<ramsey_glue::Result<_>> = jobs
        .par_iter()
        .map(|&(i, d)| {
            let core = &cores[i];
            let mut spec = CensusSpec::new(3, a.t, core.order() + 1 + d);
            spec.max_edges = a.max_edges;
            let mut problem = GluingProblem::new(core.clone(), d, tbound, spec.effective_max_edges());
            if let Some(m) = a.min_degree {
                problem = problem.with_min_degree(m);
            } else if a.apex_min_degree {
                problem = problem.with_min_degree(d);
            }
            glue(&problem)
        })
        .collect();
    let mut out = BTreeSet::new();
    for r in results {
        out.extend(r?);
    }
    let mut manifest = base_manifest("glue", &a.io);
    manifest.push("t", a.t).push("apex_degrees", format!("{d_lo}..={d_hi}"));
    if let Some(n) = a.n {
        manifest.push("n", n);
    }
    if let Some(e) = a.max_edges {
        manifest.push("max_edges", e);
    }
    if let Some(m) = a.min_degree {
        manifest.push("min_degree", m);
    } else if a.apex_min_degree {
        manifest.push("min_degree", "apex degree");
    }
    manifest.push("cores", cores.len());
    finish(&a.io, out, manifest)?;
    Ok(true)
}

fn pairglue(a: &PairglueArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&a.plan).with_context(|| format!("reading {}", a.plan.display()))?;
    let plan = Plan::parse(&text).with_context(|| format!("in plan {}", a.plan.display()))?;
    let cores = read_input(&a.io)?;
    let (out, stats) = run_plan(&plan, &cores)?;
    let mut manifest = base_manifest("pairglue", &a.io);
    manifest.push("plan", a.plan.display());
    manifest.push("target", format!("{} degree {}", plan.target, plan.degree));
    for (step, s) in plan.steps.iter().zip(&stats) {
        manifest.push(
            "step",
            format!(
                "core {} extensions={} excluded={} merges={} outputs={}",
                step.core, s.extensions, s.excluded, s.merges, s.outputs
            ),
        );
    }
    finish(&a.io, out, manifest)?;
    Ok(true)
}

fn verify(a: &VerifyArgs) -> Result<bool> {
    let spec = CensusSpec { s: a.s, t: a.t, n: a.n, max_edges: a.max_edges, min_edges: a.min_edges };
    let mut report = verify_reader(open_input(&a.input)?, &spec)?;
    if a.extend_check {
        if a.s != 3 {
            bail!("the extension check needs s = 3");
        }
        let lines: Vec<(usize, Graph)> = read_graphs_with_lines(&a.input)?;
        let extending: Vec<usize> = lines
            .par_iter()
            .filter(|(_, g)| is_ramsey(g, 3, a.t) && has_one_point_extension(g, a.t, a.extend_max_edges))
            .map(|(line, _)| *line)
            .collect();
        for line in extending {
            report.violations.push(Violation { line, reason: format!("extends to order {}", a.n + 1) });
        }
        report.violations.sort_by_key(|v| v.line);
    }
    println!("{report}");
    Ok(report.passed())
}

/// Decodable graphs with their line numbers; undecodable lines are already
/// reported by the verifier.
fn read_graphs_with_lines(path: &Path) -> Result<Vec<(usize, Graph)>> {
    let mut out = Vec::new();
    for (i, line) in open_input(path)?.split(b'\n').enumerate() {
        let bytes = line?;
        if let Ok(g) = ramsey_glue::io::graph6::decode_line(&bytes, i + 1) {
            out.push((i + 1, g));
        }
    }
    Ok(out)
}

fn census_stats(a: &IoArgs) -> Result<bool> {
    let graphs = read_input(a)?;
    let mut counts = BTreeMap::new();
    for g in &graphs {
        *counts.entry((g.order(), g.edge_count())).or_insert(0) += 1;
    }
    print_counts(&mut io::stdout().lock(), &counts)?;
    Ok(true)
}

fn canon(a: &IoArgs, memory_cap_mb: Option<usize>) -> Result<bool> {
    let config = DedupConfig { memory_cap: memory_cap_mb.map(|mb| mb << 20), temp_dir: None };
    let reader = open_input(&a.input)?;
    let graphs: Box<dyn Iterator<Item = ramsey_glue::Result<Graph>>> = match a.shard {
        Some(_) => Box::new(read_input(a)?.into_iter().map(Ok)),
        None => Box::new(read_graphs(reader)),
    };
    let mut manifest = base_manifest("canon", a);
    match &a.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let report = dedup_stream(graphs, f, &config)?;
            manifest.push("output", path.display());
            manifest.push("input_graphs", report.input);
            manifest.push("runs", report.runs);
            manifest.push_counts(&report.counts);
            manifest.write(manifest_path(path))?;
            print_counts(&mut io::stdout().lock(), &report.counts)?;
        }
        None => {
            let report = dedup_stream(graphs, io::stdout().lock(), &config)?;
            print_counts(&mut io::stderr().lock(), &report.counts)?;
        }
    }
    Ok(true)
}
