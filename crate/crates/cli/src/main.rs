use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quand_core::analysis::{comparison_table, comparison_tsv, probe_overlap, Topology};
use quand_core::arith::{
    size_report, synth_adder, synth_const_adder, synth_incrementer, verify_adder, verify_unary,
};
use quand_core::grover::{
    asp_curve, derive_seed, fit_fidelity, format_label, parse_label, run_grover, sample_curve,
    solution_matrix, AspCurve, GroverSpec,
};
use quand_core::sim::{binary_digits, NoiseParams, TrajectorySampler};
use quand_core::synth::{
    synth_fredkin, synth_mcu, synth_mcz_with_roots, synth_toffoli, Synthesis, TargetGate,
};
use quand_core::{Circuit, ConnectivityGraph, DepthMode, GateKind, TruthTable64};

/// Compiles and simulates QuAND circuits.
#[derive(Parser)]
#[command(name = "quand", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a gate on a connectivity graph and verify it.
    Synth(SynthArgs),
    /// Truth table of a circuit file, or sampled counts for one input.
    Sim(SimArgs),
    /// Grover ASP curve, output distribution and solution matrix.
    Grover(GroverArgs),
    /// Build and exhaustively check an arithmetic circuit.
    Arith(ArithArgs),
    /// Decomposition comparison table over a range of n.
    Bench(BenchArgs),
    /// Fit the per-gate fidelity to an ASP curve.
    Fit(FitArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    Mcz,
    Toffoli,
    Fredkin,
    Mcu,
}

#[derive(Clone, Copy, ValueEnum)]
enum Unitary {
    Z,
    X,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Count only multi-wire gates.
    Multi,
    /// Count every gate.
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    AllToAll,
    Chain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithOp {
    Incrementer,
    ConstAdder,
    Adder,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    gate: Gate,
    /// Edge list, one "u v" per line.
    #[arg(long)]
    graph: PathBuf,
    /// Fixed root edge "u,v" for mcz.
    #[arg(long, value_delimiter = ',')]
    roots: Option<Vec<usize>>,
    /// Target wire for toffoli and mcu.
    #[arg(long)]
    target: Option<usize>,
    /// Adjacent target pair "t1,t2" for fredkin.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
    /// Control wires for mcu.
    #[arg(long, value_delimiter = ',')]
    controls: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "z")]
    unitary: Unitary,
    #[arg(long, value_enum, default_value = "multi")]
    mode: Mode,
    /// Circuit file; the plan goes to "<out>.plan".
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Binary input label; without it the full truth table is printed.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-macro fidelity for noisy sampling.
    #[arg(long)]
    fidelity: Option<f64>,
    /// Circuit file to check equivalence against instead of simulating.
    #[arg(long, conflicts_with_all = ["input", "fidelity"])]
    reference: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GroverArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated bit strings; character i is wire i.
    #[arg(long, value_delimiter = ',', required = true)]
    solutions: Vec<String>,
    /// Curve runs M = 1..=cycles; the distribution and matrix use M = cycles.
    #[arg(long, default_value_t = 1)]
    cycles: usize,
    #[arg(long)]
    fidelity: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list; defaults to the topology.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "chain")]
    topology: TopologyArg,
    /// Curve file; distribution and matrix go to "<out>.dist" and "<out>.matrix".
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ArithArgs {
    #[arg(long, value_enum)]
    op: ArithOp,
    #[arg(long)]
    n: usize,
    /// Odd constant for const-adder.
    #[arg(long)]
    constant: Option<u64>,
    /// Circuit file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Single n or an inclusive range "lo..hi".
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value = "all-to-all")]
    topology: TopologyArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    n: usize,
    /// Curve file with "M asp [shots]" rows; without it a synthetic curve is drawn.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Fidelity of the synthetic curve.
    #[arg(long)]
    fidelity: Option<f64>,
    #[arg(long, default_value_t = 10)]
    cycles: usize,
    /// Shots per synthetic point; 0 gives the exact model.
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<quand_core::Error> for Failure {
    fn from(e: quand_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Sim(a) => sim(a),
        Command::Grover(a) => grover(a),
        Command::Arith(a) => arith(a),
        Command::Bench(a) => bench(a),
        Command::Fit(a) => fit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn header(seed: Option<u64>) -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = format!(
        "# quand {}\n# command: quand {}\n",
        env!("CARGO_PKG_VERSION"),
        args.join(" ")
    );
    if let Some(seed) = seed {
        let _ = writeln!(out, "# seed: {seed}");
    }
    out
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_graph(path: &Path) -> std::result::Result<ConnectivityGraph, Failure> {
    Ok(ConnectivityGraph::parse(&read(path)?)?)
}

fn pair(v: &[usize], flag: &str) -> std::result::Result<(usize, usize), Failure> {
    match v {
        &[a, b] => Ok((a, b)),
        _ => Err(Failure::Input(format!("--{flag} takes two wires \"a,b\""))),
    }
}

fn noise(fidelity: Option<f64>) -> std::result::Result<Option<NoiseParams>, Failure> {
    Ok(fidelity.map(NoiseParams::new).transpose()?)
}

fn synth(a: SynthArgs) -> Outcome {
    let graph = load_graph(&a.graph)?;
    let n = graph.num_vertices();
    let mut reference = Circuit::reference(&vec![2; n])?;
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Input(format!("--{flag} is required")))
    };
    let s: Synthesis = match a.gate {
        Gate::Mcz => {
            let roots = a.roots.as_deref().map(|r| pair(r, "roots")).transpose()?;
            reference.push(GateKind::RefMcz, &(0..n).collect::<Vec<_>>())?;
            synth_mcz_with_roots(&graph, roots)?
        }
        Gate::Toffoli => {
            let t = need(a.target, "target")?;
            let s = synth_toffoli(&graph, t)?;
            let mut wires: Vec<usize> = (0..n).filter(|&w| w != t).collect();
            wires.push(t);
            reference.push(GateKind::RefMcx, &wires)?;
            s
        }
        Gate::Fredkin => {
            let t = a
                .targets
                .ok_or_else(|| Failure::Input("--targets is required".into()))?;
            let t = pair(&t, "targets")?;
            let s = synth_fredkin(&graph, t)?;
            let mut wires: Vec<usize> = (0..n).filter(|&w| w != t.1).collect();
            wires.push(t.1);
            reference.push(GateKind::Cnot, &[t.1, t.0])?;
            reference.push(GateKind::RefMcx, &wires)?;
            reference.push(GateKind::Cnot, &[t.1, t.0])?;
            s
        }
        Gate::Mcu => {
            let t = need(a.target, "target")?;
            let controls = a
                .controls
                .ok_or_else(|| Failure::Input("--controls is required".into()))?;
            let (gate, kind) = match a.unitary {
                Unitary::Z => (TargetGate::Z, GateKind::RefMcz),
                Unitary::X => (TargetGate::X, GateKind::RefMcx),
            };
            let s = synth_mcu(&graph, &controls, t, gate)?;
            let mut wires = controls.clone();
            wires.push(t);
            reference.push(kind, &wires)?;
            s
        }
    };
    let c = &s.circuit;
    let mode = match a.mode {
        Mode::Multi => DepthMode::MultiWireOnly,
        Mode::All => DepthMode::AllGates,
    };
    let counts = c.gate_count();
    let qutrits = c.dims().iter().filter(|&&d| d == 3).count();
    let mut stats = header(None);
    let _ = writeln!(
        stats,
        "gates={} single={} depth={} height={} wires={n} qutrits={qutrits}",
        counts.multi_wire,
        counts.single_wire,
        c.depth(mode),
        s.plan.tree.height(),
    );
    print!("{stats}");
    if let Some(out) = &a.out {
        write(out, &c.to_json())?;
        write(
            &with_suffix(out, ".plan"),
            &(header(None) + &s.plan.to_text(c)),
        )?;
    }
    verify_against(c, &reference)
}

/// Truth table (when small enough) and uniform-superposition phase probe.
fn verify_against(c: &Circuit, reference: &Circuit) -> Outcome {
    let n = c.num_wires();
    if n <= 12 {
        let got = TruthTable64::of(c)?;
        let want = TruthTable64::of(reference)?;
        let dev = got.max_deviation(&want).unwrap_or(f64::INFINITY);
        if dev > 1e-9 {
            return Err(Failure::Verify(format!(
                "truth table deviates by {dev:.3e}"
            )));
        }
    }
    let overlap: f64 = probe_overlap(c, reference)?;
    if (1.0 - overlap).abs() > 1e-9 {
        return Err(Failure::Verify(format!(
            "phase probe overlap {overlap:.12}"
        )));
    }
    println!("verify=ok");
    Ok(())
}

fn sim(a: SimArgs) -> Outcome {
    let circuit = Circuit::from_json(&read(&a.circuit)?)?;
    let n = circuit.num_wires();
    if let Some(path) = &a.reference {
        let reference = Circuit::from_json(&read(path)?)?;
        if reference.num_wires() != n {
            return Err(Failure::Input(format!(
                "reference has {} wires, circuit has {n}",
                reference.num_wires()
            )));
        }
        print!("{}", header(None));
        return verify_against(&circuit, &reference);
    }
    match &a.input {
        None => {
            let t = TruthTable64::of(&circuit)?;
            emit(a.out.as_deref(), &(header(None) + &t.to_tsv()))
        }
        Some(text) => {
            let label = parse_label(text, n)?;
            let input = binary_digits(label, n);
            let noise = noise(a.fidelity)?.unwrap_or_else(NoiseParams::ideal);
            let sampler = TrajectorySampler::new(&circuit, noise, &input)?;
            let counts = sampler.counts(a.shots, a.seed);
            let mut out = header(Some(a.seed));
            out.push_str("outcome\tcount\n");
            for (k, c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
                let _ = writeln!(out, "{}\t{c}", format_label(k, n));
            }
            emit(a.out.as_deref(), &out)
        }
    }
}

fn grover(a: GroverArgs) -> Outcome {
    let n = a.n;
    let solutions = a
        .solutions
        .iter()
        .map(|s| parse_label(s, n))
        .collect::<quand_core::Result<Vec<_>>>()?;
    let graph = match (&a.graph, a.topology) {
        (Some(p), _) => load_graph(p)?,
        (None, TopologyArg::Chain) => ConnectivityGraph::path(n),
        (None, TopologyArg::AllToAll) => ConnectivityGraph::complete(n)?,
    };
    let noise = noise(a.fidelity)?;
    let spec = GroverSpec {
        n,
        solutions,
        cycles: a.cycles,
        graph: graph.clone(),
    };
    let curve = asp_curve(&spec, a.cycles, noise, a.shots, a.seed)?;
    let run = run_grover(&spec, noise, a.shots, derive_seed(a.seed, a.cycles as u64))?;
    let matrix = solution_matrix(
        n,
        a.cycles,
        &graph,
        noise,
        a.shots,
        derive_seed(a.seed, u64::MAX),
    )?;

    let curve_text = header(Some(a.seed)) + &curve.to_tsv();
    let mut dist = header(Some(a.seed));
    let _ = writeln!(dist, "# cycles: {}", a.cycles);
    dist.push_str("outcome\tprobability\tsolution\n");
    for (k, &c) in run.counts.iter().enumerate() {
        let marked = spec.solutions.contains(&k) as u8;
        let _ = writeln!(
            dist,
            "{}\t{:.6}\t{marked}",
            format_label(k, n),
            c as f64 / run.shots as f64
        );
    }
    let mut mat = header(Some(a.seed));
    let _ = writeln!(
        mat,
        "# cycles: {}\n# average_asp: {:.6}",
        a.cycles,
        matrix.average_asp()
    );
    mat.push_str(&matrix.to_tsv());
    match &a.out {
        Some(out) => {
            write(out, &curve_text)?;
            write(&with_suffix(out, ".dist"), &dist)?;
            write(&with_suffix(out, ".matrix"), &mat)
        }
        None => {
            print!("{curve_text}\n{dist}\n{mat}");
            Ok(())
        }
    }
}

fn arith(a: ArithArgs) -> Outcome {
    let n = a.n;
    let m = 1u64
        .checked_shl(n as u32)
        .ok_or_else(|| Failure::Input(format!("n = {n} too large")))?;
    let (circuit, report) = match a.op {
        ArithOp::Incrementer => {
            let c = synth_incrementer(n)?;
            let r = verify_unary(&c, n, |x| (x + 1) % m)?;
            (c, r)
        }
        ArithOp::ConstAdder => {
            let b = a
                .constant
                .ok_or_else(|| Failure::Input("--constant is required".into()))?;
            let c = synth_const_adder(n, b)?;
            let r = verify_unary(&c, n, |x| (x + b) % m)?;
            (c, r)
        }
        ArithOp::Adder => {
            let c = synth_adder(n)?;
            let r = verify_adder(&c, n)?;
            (c, r)
        }
    };
    let mut out = header(None);
    for line in size_report(&circuit, n).lines() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str(&report.to_tsv());
    print!("{out}");
    if let Some(p) = &a.out {
        write(p, &circuit.to_json())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "{} of {} rows wrong",
            report.failures(),
            report.rows.len()
        )))
    }
}

fn parse_range(text: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure::Input(format!("bad n range \"{text}\""));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let v = num(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn bench(a: BenchArgs) -> Outcome {
    let (lo, hi) = parse_range(&a.n)?;
    let topology = match a.topology {
        TopologyArg::AllToAll => Topology::AllToAll,
        TopologyArg::Chain => Topology::Chain,
    };
    let mut out = header(None);
    let mut mismatches = Vec::new();
    for n in lo..=hi {
        let rows = comparison_table(n, topology)?;
        // both measured rows must hit 2n - 3 multi-wire units
        for r in rows.iter().filter(|r| r.measured.is_some()) {
            let m = r.measured.expect("filtered");
            if m.size != 2 * n - 3 || m.ancilla != r.ancilla.eval(n) {
                mismatches.push(format!("{} at n={n}", r.scheme));
            }
        }
        out.push_str(&comparison_tsv(n, &rows, n == lo));
    }
    emit(a.out.as_deref(), &out)?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(mismatches.join(", ")))
    }
}

fn fit(a: FitArgs) -> Outcome {
    let (curve, seed) = match (&a.curve, a.fidelity) {
        (Some(p), _) => (AspCurve::parse(&read(p)?)?, None),
        (None, Some(f)) => (
            sample_curve(a.n, f, a.cycles, a.shots, a.seed)?,
            Some(a.seed),
        ),
        (None, None) => return Err(Failure::Input("give --curve or --fidelity".into())),
    };
    let r = fit_fidelity(&curve, a.n)?;
    let mut out = header(seed);
    out.push_str("fidelity\tsse\twarning\n");
    let warning = r
        .warning
        .map_or("-".to_string(), |w| format!("{w:?}").to_lowercase());
    let _ = writeln!(out, "{:.6}\t{:.6e}\t{warning}", r.fidelity, r.sse);
    out.push_str("# curve\n");
    for line in curve.to_tsv().lines() {
        let _ = writeln!(out, "# {line}");
    }
    emit(a.out.as_deref(), &out)
}
