use std::collections::HashMap;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tok_core::classify::LABELS_223;
use tok_core::format::{field_header, format_223, format_233, parse_document};
use tok_core::oracle::{census_223, census_matches_bfs, full_census, CensusCounts, MemoryCap};
use tok_core::pencil::pencil_orbit_summary;
use tok_core::{
    canonical_form, classify_223, classify_h, nurmiev_label, signature, Field, OrbitLabel, Tensor223,
};

#[derive(Parser)]
#[command(name = "tok", version, about = "Orbits of tensors in F_q^2 x F_q^3 x F_q^3")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for census and verification (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    #[value(name = "233")]
    S233,
    #[value(name = "223")]
    S223,
}

#[derive(Subcommand)]
enum Command {
    /// Classify tensors given one per line as `q=<q>; a=<entries>`
    Classify {
        /// Input file, or `-` for stdin
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "233")]
        shape: Shape,
    },
    /// Print the canonical representative of an orbit
    Canonical {
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "233")]
        shape: Shape,
    },
    /// Classify every tensor of the space (q <= 3) and count labels
    Census {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "233")]
        shape: Shape,
    },
    /// Check the classifier against the brute-force orbit oracle
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        q: u32,
        #[arg(long)]
        full_census: bool,
        #[arg(long)]
        bfs_cross_check: bool,
    },
    /// PGL(2,q) orbits on monic irreducible cubics
    PencilOrbits {
        #[arg(long)]
        q: u32,
    },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Mismatch,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Classify { input, shape } => classify(input, *shape, cli.json).map_err(Failure::from),
        Command::Canonical { orbit, q, shape } => canonical(orbit, *q, *shape, cli.json).map_err(Failure::from),
        Command::Census { q, shape } => census(*q, *shape, cli.json).map_err(Failure::from),
        Command::Verify { q, full_census, bfs_cross_check } => verify(*q, *full_census, *bfs_cross_check, cli.json),
        Command::PencilOrbits { q } => pencil_orbits(*q, cli.json).map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("plain data serializes"));
}

#[derive(Serialize)]
struct ClassifyRecord {
    q: u32,
    #[serde(rename = "H")]
    h: String,
    #[serde(rename = "G")]
    g: String,
    rd: [u32; 3],
    dims: [usize; 3],
    det: Option<String>,
    nurmiev: Option<u32>,
}

impl ClassifyRecord {
    fn line(&self) -> String {
        let [a, b, c] = self.rd;
        let [d1, d2, d3] = self.dims;
        let or_dash = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        format!(
            "H={} G={} rd=[{a},{b},{c}] dims=({d1},{d2},{d3}) det={} nurmiev={}",
            self.h,
            self.g,
            or_dash(self.det.clone()),
            or_dash(self.nurmiev.map(|n| n.to_string()))
        )
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

fn classify(input: &str, shape: Shape, json: bool) -> Result<()> {
    let text = read_input(input)?;
    let lines = parse_document(&text)?;
    if lines.is_empty() {
        bail!("no tensors in input");
    }
    let mut fields: HashMap<u32, Field> = HashMap::new();
    for (n, line) in lines {
        let field = match fields.get(&line.q) {
            Some(f) => f.clone(),
            None => {
                let f = line.field().with_context(|| format!("line {n}"))?;
                fields.insert(line.q, f.clone());
                f
            }
        };
        let (t, h, g) = match shape {
            Shape::S233 => {
                let t = line.to_233(&field).with_context(|| format!("line {n}"))?;
                let h = classify_h(&field, &t);
                (t, h, h.g_projection())
            }
            Shape::S223 => {
                let b = line.to_223(&field).with_context(|| format!("line {n}"))?;
                let (h, g) = classify_223(&field, &b)?;
                (b.embed(), h, g)
            }
        };
        let sig = signature(&field, &t);
        let record = ClassifyRecord {
            q: field.q(),
            h: h.name().into(),
            g: g.name().into(),
            rd: sig.rd.0,
            dims: sig.dims,
            det: sig.det_type.map(|d| d.name().into()),
            nurmiev: nurmiev_label(g),
        };
        if json {
            print_json(&record);
        } else {
            println!("{}", record.line());
        }
    }
    Ok(())
}

fn field_of(q: u32) -> Result<Field> {
    Field::with_order(q).map_err(|e| anyhow!("q={q}: {e}"))
}

#[derive(Serialize)]
struct CanonicalRecord {
    q: u32,
    orbit: String,
    field: String,
    line: String,
}

fn canonical(orbit: &str, q: u32, shape: Shape, json: bool) -> Result<()> {
    let label: OrbitLabel = orbit.parse()?;
    let field = field_of(q)?;
    let t = canonical_form(&field, label);
    let line = match shape {
        Shape::S233 => format_233(&field, &t),
        Shape::S223 => {
            if !LABELS_223.contains(&label) {
                bail!("orbit {label} does not occur in the 2x2x3 space");
            }
            let mut b = Tensor223::zero();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..3 {
                        b.a[6 * i + 3 * j + k] = t.get(i, j, k);
                    }
                }
            }
            debug_assert_eq!(b.embed(), t);
            format_223(&field, &b)
        }
    };
    if json {
        print_json(&CanonicalRecord { q, orbit: label.name().into(), field: field.describe(), line });
    } else {
        if !field.is_prime_field() {
            println!("{}", field_header(&field));
        }
        println!("{line}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CensusRecord {
    q: u32,
    shape: &'static str,
    total: u64,
    h_orbits: usize,
    g_orbits: usize,
    h_counts: Vec<(String, u64)>,
    g_counts: Vec<(String, u64)>,
}

fn nonzero_counts(c: &CensusCounts) -> Vec<(String, u64)> {
    c.labels().into_iter().map(|l| (l.name().to_string(), c.get(l))).collect()
}

fn census(q: u32, shape: Shape, json: bool) -> Result<()> {
    let field = field_of(q)?;
    let (h, g, shape_name) = match shape {
        Shape::S233 => {
            let h = full_census(&field)?;
            let g = h.projected(OrbitLabel::g_projection);
            (h, g, "233")
        }
        Shape::S223 => {
            let (h, g) = census_223(&field)?;
            (h, g, "223")
        }
    };
    let record = CensusRecord {
        q,
        shape: shape_name,
        total: h.total(),
        h_orbits: h.labels().len(),
        g_orbits: g.labels().len(),
        h_counts: nonzero_counts(&h),
        g_counts: nonzero_counts(&g),
    };
    if json {
        print_json(&record);
        return Ok(());
    }
    if !field.is_prime_field() {
        println!("{}", field_header(&field));
    }
    println!("{:<6} {:>12}", "H", "count");
    for (l, n) in &record.h_counts {
        println!("{l:<6} {n:>12}");
    }
    println!("total {:>13}", record.total);
    println!("{} H-orbits / {} G-orbits", record.h_orbits, record.g_orbits);
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    orbit: String,
    census: u64,
    bfs: Option<u64>,
    ok: bool,
}

#[derive(Serialize)]
struct VerifyRecord {
    q: u32,
    total: u64,
    h_orbits: usize,
    g_orbits: usize,
    rows: Vec<VerifyRow>,
    failures: Vec<String>,
    passed: bool,
}

fn verify(q: u32, full: bool, bfs: bool, json: bool) -> Result<(), Failure> {
    let field = field_of(q)?;
    let full = full || !bfs;
    let mut failures = Vec::new();
    let (census, bfs_sizes) = if bfs {
        let report = census_matches_bfs(&field, MemoryCap::from_env()).map_err(anyhow::Error::from)?;
        failures.extend(report.failures.iter().cloned());
        let mut counts = [0; 21];
        let mut sizes = [0; 21];
        for c in &report.h_orbits {
            counts[c.label.index()] = c.census;
            sizes[c.label.index()] = c.orbit_size;
        }
        (CensusCounts { q, counts }, Some(sizes))
    } else {
        (full_census(&field).map_err(anyhow::Error::from)?, None)
    };
    let expected_total = (q as u64).pow(18);
    let h_orbits = census.labels().len();
    let g_orbits = census.projected(OrbitLabel::g_projection).labels().len();
    if full {
        if h_orbits != 21 || g_orbits != 18 {
            failures.push(format!("expected 21 H-orbits / 18 G-orbits, found {h_orbits} / {g_orbits}"));
        }
        if census.total() != expected_total {
            failures.push(format!("census covers {} of {expected_total}", census.total()));
        }
    }
    let rows: Vec<VerifyRow> = OrbitLabel::ALL
        .into_iter()
        .map(|l| {
            let count = census.get(l);
            let size = bfs_sizes.map(|s| s[l.index()]);
            VerifyRow { orbit: l.name().into(), census: count, bfs: size, ok: count > 0 && size.map_or(true, |s| s == count) }
        })
        .collect();
    let passed = failures.is_empty() && rows.iter().all(|r| r.ok);
    let record = VerifyRecord { q, total: census.total(), h_orbits, g_orbits, rows, failures, passed };
    if json {
        print_json(&record);
    } else {
        println!("verify q={q}");
        println!("{:<6} {:>12} {:>12}  status", "orbit", "census", "bfs");
        for r in &record.rows {
            let bfs = r.bfs.map_or("-".to_string(), |s| s.to_string());
            println!("{:<6} {:>12} {:>12}  {}", r.orbit, r.census, bfs, if r.ok { "ok" } else { "MISMATCH" });
        }
        println!("total {:>13}", record.total);
        println!("{} H-orbits / {} G-orbits", record.h_orbits, record.g_orbits);
        for f in &record.failures {
            println!("failure: {f}");
        }
        println!("{}", if record.passed { "PASS" } else { "FAIL" });
    }
    if record.passed {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

#[derive(Serialize)]
struct PencilRecord {
    q: u32,
    irreducible_cubics: usize,
    orbits: usize,
    orbit_sizes: Vec<usize>,
    stabilizer_orders: Vec<usize>,
}

fn pencil_orbits(q: u32, json: bool) -> Result<()> {
    let field = field_of(q)?;
    let s = pencil_orbit_summary(&field);
    let record = PencilRecord {
        q,
        irreducible_cubics: s.cubic_count,
        orbits: s.orbit_count(),
        orbit_sizes: s.orbit_sizes.clone(),
        stabilizer_orders: s.stabilizer_orders.clone(),
    };
    if json {
        print_json(&record);
    } else {
        if !field.is_prime_field() {
            println!("{}", field_header(&field));
        }
        println!("irreducible monic cubics: {}", record.irreducible_cubics);
        println!("PGL(2,{q}) orbits: {}", record.orbits);
        println!("orbit sizes: {:?}", record.orbit_sizes);
        println!("stabilizer orders: {:?}", record.stabilizer_orders);
    }
    Ok(())
}
