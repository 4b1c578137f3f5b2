mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use perfcone::complex::{perfect_complex, StoredComplex};
use perfcone::homology::{betti, doubling_check, spectral_sequence, BettiTable, ChainComplex, Grid};
use perfcone::levels;
use perfcone::ring::FieldCtx;
use perfcone::voronoi::enumerate_perfect;
use perfcone::Error;

use cache::{Cache, Key};

const CACHE_ENV: &str = "PERFCONE_CACHE_DIR";

#[derive(Parser)]
#[command(name = "perfcone", version, about = "Perfect cone complexes and their homology")]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = default_threads(), value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cache directory (also read from PERFCONE_CACHE_DIR).
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

fn default_threads() -> u16 {
    std::thread::available_parallelism().map_or(1, |n| n.get().min(u16::MAX as usize) as u16)
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Clone)]
struct Target {
    #[arg(long, default_value_t = 0)]
    d: u32,
    #[arg(long)]
    rank: usize,
    /// Symmetric forms over Z instead of Hermitian forms.
    #[arg(long)]
    symmetric: bool,
}

#[derive(Args, Clone)]
struct Source {
    /// Complex JSON written by `complex build`.
    #[arg(long = "in", conflicts_with_all = ["d", "rank", "symmetric"])]
    input: Option<PathBuf>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    symmetric: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Perfect cone enumeration.
    Perfect {
        #[command(subcommand)]
        cmd: PerfectCmd,
    },
    /// Cell complex construction.
    Complex {
        #[command(subcommand)]
        cmd: ComplexCmd,
    },
    /// Betti numbers of the full complex.
    Homology(Source),
    /// Spectral sequence of the rank filtration.
    Spectral(Source),
    /// Compare the first page with the undoubled columns.
    Doubling {
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        symmetric: bool,
    },
    /// Homology of the inflation subcomplex.
    Inflation(Source),
    /// Level structure counts.
    Levels {
        #[command(subcommand)]
        cmd: LevelsCmd,
    },
}

#[derive(Subcommand)]
enum PerfectCmd {
    Enumerate(Target),
}

#[derive(Subcommand)]
enum ComplexCmd {
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LevelsCmd {
    Pi {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: Option<u32>,
    },
    Count {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        brute: bool,
    },
    Table {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        kmax: usize,
    },
}

type Res<T> = Result<T, Error>;

struct App {
    format: Format,
    cache: Option<Cache>,
}

fn field(d: u32, symmetric: bool) -> Res<FieldCtx> {
    if symmetric {
        Ok(FieldCtx::symmetric())
    } else {
        FieldCtx::new(d)
    }
}

fn betti_json(b: &BettiTable) -> Value {
    json!(b.iter().map(|(n, k)| (n.to_string(), json!(k))).collect::<serde_json::Map<String, Value>>())
}

impl App {
    fn emit(&self, j: Value, text: String) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&j).expect("serializable")),
            Format::Table => print!("{}", if text.ends_with('\n') { text } else { text + "\n" }),
        }
    }

    fn complex_json(&self, d: u32, r: usize, symmetric: bool) -> Res<Value> {
        let ctx = field(d, symmetric)?;
        let compute = || perfect_complex(&ctx, r).map(|pc| pc.to_json());
        match &self.cache {
            Some(c) => c.get_or(&Key { d: ctx.d(), r, symmetric, kind: "complex".into() }, compute),
            None => compute(),
        }
    }

    fn stored(&self, src: &Source) -> Res<StoredComplex> {
        let v = match (&src.input, src.rank) {
            (Some(p), _) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            (None, Some(r)) => self.complex_json(src.d.unwrap_or(0), r, src.symmetric)?,
            (None, None) => return Err(Error::Invalid("give --in or --rank".into())),
        };
        StoredComplex::from_json(&v)
    }

    fn run(&self, cmd: Cmd) -> Res<()> {
        match cmd {
            Cmd::Perfect { cmd: PerfectCmd::Enumerate(t) } => {
                let ctx = field(t.d, t.symmetric)?;
                let dec = enumerate_perfect(&ctx, t.rank)?;
                let mut text = format!("{} perfect class(es)\n", dec.classes.len());
                for (i, c) in dec.classes.iter().enumerate() {
                    text += &format!(
                        "class {i}: {} minimal vectors up to units, {} facets, stabilizer order {}, neighbors {:?}\n",
                        c.min_vectors.len(),
                        c.facets.len(),
                        c.stabilizer.len(),
                        c.adjacency
                    );
                }
                self.emit(dec.to_json(), text);
            }
            Cmd::Complex { cmd: ComplexCmd::Build { target, out } } => {
                let j = self.complex_json(target.d, target.rank, target.symmetric)?;
                if let Some(p) = &out {
                    std::fs::write(p, serde_json::to_string(&j)?)?;
                }
                let mut text = String::new();
                for c in j["cells"].as_array().into_iter().flatten() {
                    text += &format!(
                        "cell {}: dim {}, rank {}, alternating {}, stabilizer order {}\n",
                        c["id"], c["dim"], c["rank"], c["alternating"], c["stabilizer_order"]
                    );
                }
                if let Some(p) = out {
                    text += &format!("written to {}\n", p.display());
                }
                self.emit(j, text);
            }
            Cmd::Homology(src) => {
                let s = self.stored(&src)?;
                let b = betti(&s.chain);
                self.emit(json!({ "d": s.d, "r": s.r, "betti": betti_json(&b) }), render::betti_line(&b));
            }
            Cmd::Inflation(src) => {
                let s = self.stored(&src)?;
                let b = betti(&s.inflation_subcomplex()?);
                self.emit(
                    json!({ "d": s.d, "r": s.r, "betti": betti_json(&b), "acyclic": b.is_empty() }),
                    format!("inflation subcomplex: {}", render::betti_line(&b)),
                );
            }
            Cmd::Spectral(src) => {
                let s = self.stored(&src)?;
                let ss = spectral_sequence(&s.chain);
                let full = betti(&s.chain);
                let einf = ss.e_inf_totals();
                let text = format!(
                    "{}{}E-infinity totals: {}\nfull complex: {}\n",
                    render::st_table("E1", ss.e1()),
                    render::st_table("E2", ss.e2()),
                    render::betti_line(&einf),
                    render::betti_line(&full)
                );
                self.emit(
                    json!({
                        "d": s.d, "r": s.r,
                        "e1": ss.e1(), "e2": ss.e2(), "d1_rank": ss.d1_rank,
                        "e_inf_totals": betti_json(&einf), "betti": betti_json(&full),
                    }),
                    text,
                );
                if einf != full {
                    return Err(Error::Invalid("E-infinity does not match the homology".into()));
                }
            }
            Cmd::Doubling { d, max_rank, symmetric } => self.doubling(d, max_rank, symmetric)?,
            Cmd::Levels { cmd } => self.levels(cmd)?,
        }
        Ok(())
    }

    fn doubling(&self, d: u32, max_rank: usize, symmetric: bool) -> Res<()> {
        let top = self.stored(&Source { input: None, d: Some(d), rank: Some(max_rank), symmetric })?;
        let ss = spectral_sequence(&top.chain);
        let width = top.chain.gens.len();
        let mut undoubled: Grid = Vec::new();
        for s in 0..=max_rank {
            let c: ChainComplex = if s == max_rank {
                top.chain.clone()
            } else {
                self.stored(&Source { input: None, d: Some(d), rank: Some(s), symmetric })?.chain
            };
            let b = betti(&c);
            undoubled.push((0..width).map(|n| b.get(&n).copied().unwrap_or(0)).collect());
        }
        let rep = doubling_check(&undoubled, ss.e1(), ss.e2(), &ss.d1_rank);
        let mut text = render::st_table("undoubled", &undoubled) + &render::st_table("E1", ss.e1());
        for (s, t, m) in &rep.implied_bounds {
            text += &format!("implied: dim E1[s={s}, t={t}] >= {m}\n");
        }
        for v in &rep.violations {
            text += &format!("violation: {v}\n");
        }
        text += if rep.consistent() { "consistent\n" } else { "INCONSISTENT\n" };
        self.emit(json!({ "undoubled": undoubled, "e1": ss.e1(), "report": rep }), text);
        if rep.consistent() {
            Ok(())
        } else {
            Err(Error::Invalid("doubling pattern violated".into()))
        }
    }

    fn levels(&self, cmd: LevelsCmd) -> Res<()> {
        match cmd {
            LevelsCmd::Pi { g, m, p } => {
                check_level(g, m)?;
                let v = match p {
                    Some(p) if p != g => levels::pi(g, p, m)?,
                    _ => levels::pi_closed(g, m),
                };
                self.emit(json!({ "g": g, "m": m, "p": p.unwrap_or(g), "pi": v.to_string() }), v.to_string());
            }
            LevelsCmd::Count { g, m, p, brute } => {
                check_level(g, m)?;
                let p = p.unwrap_or(g);
                let v = if brute || p != g {
                    levels::count_isotropic_bruteforce(g, p, m)?
                } else {
                    levels::count_isotropic_formula(g, m)
                };
                self.emit(json!({ "g": g, "m": m, "p": p, "count": v.to_string() }), v.to_string());
            }
            LevelsCmd::Table { g, m, kmax } => {
                check_level(g, m)?;
                let t = levels::top_weight_table(g, m, kmax);
                let entries: Vec<Value> = t
                    .iter()
                    .map(|e| match e {
                        levels::TableEntry::Value(v) => json!(v.to_string()),
                        levels::TableEntry::OutsideStableRange => json!("outside stable range"),
                    })
                    .collect();
                let mut text = String::new();
                for (k, e) in entries.iter().enumerate() {
                    text += &format!("k={k}: {}\n", e.as_str().unwrap_or_default());
                }
                self.emit(json!({ "g": g, "m": m, "entries": entries }), text);
            }
        }
        Ok(())
    }
}

fn check_level(g: u32, m: u64) -> Res<()> {
    if g == 0 || m == 0 {
        return Err(Error::Invalid("g and m must be positive".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads as usize).build_global() {
        eprintln!("{e}");
        return ExitCode::from(1);
    }
    let app = App { format: cli.format, cache: cli.cache_dir.map(Cache::new) };
    match app.run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn parses() {
        Cli::command().debug_assert();
        assert!(Cli::try_parse_from(["perfcone", "homology", "--d", "1", "--rank", "2"]).is_ok());
        assert!(Cli::try_parse_from(["perfcone", "homology", "--in", "x.json", "--rank", "2"]).is_err());
        assert!(Cli::try_parse_from(["perfcone", "--threads", "0", "levels", "pi", "--g", "1", "--m", "3"]).is_err());
    }

}
