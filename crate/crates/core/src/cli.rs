//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for bad input, 2 when an internal check
//! (d² = 0, face anticommutativity, Lee degeneration) fails.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chain::{build_complex, verify_d_squared, d_squared_failures, Mode};
use crate::cube::{build_cube, check_faces, word_string, CubeOptions, DEFAULT_MAX_CROSSINGS};
use crate::diagram::{parse_any, Diagram};
use crate::error::{Error, Result};
use crate::frobenius::{make_universal, preset, FrobParams, FrobeniusAlgebra, Preset};
use crate::homology::{betti_poly, euler_char, homology_over, torsion_poly, BigradedHomology};
use crate::lee::{lee_degeneration_check, non_alternating_resolutions};
use crate::ring::Ring;
use crate::skein::{bracket_with_limit, normalize};

#[derive(Parser, Debug)]
#[command(name = "vkh", version, about = "Virtual Khovanov homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bigraded homology, Poincaré polynomial and torsion
    Compute(Opts),
    /// Bracket, Kauffman and Jones polynomials
    Jones(Opts),
    /// p-torsion polynomial over Z
    Torsion(Opts),
    /// Non-alternating resolutions and the Lee rank check
    Lee(Opts),
    /// Check d² = 0 and face anticommutativity
    Verify(Opts),
    /// Dump every saddle of the cube
    Signs(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Diagram as a CD code
    #[arg(long, group = "input")]
    pd: Option<String>,
    /// Diagram as a signed Gauss code
    #[arg(long, group = "input")]
    gauss: Option<String>,
    /// File with one diagram per line
    #[arg(long, group = "input")]
    file: Option<PathBuf>,
    /// Z, Q or Fp (e.g. F2); defaults to F2 for bn1/bn2 and Z otherwise
    #[arg(long)]
    ring: Option<String>,
    /// khovanov, lee, bn1, bn2 or custom:a=..,alpha=..,beta=..,gamma=..,t=..
    #[arg(long, default_value = "khovanov")]
    tqft: String,
    #[arg(long, default_value = "normalized")]
    mode: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// One + or - per component, reversing components marked -
    #[arg(long)]
    orient: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 2)]
    torsion_prime: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Parses `args` (including the program name) and runs the request.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let (cmd, opts) = match cli.command {
        Command::Compute(o) => (Cmd::Compute, o),
        Command::Jones(o) => (Cmd::Jones, o),
        Command::Torsion(o) => (Cmd::Torsion, o),
        Command::Lee(o) => (Cmd::Lee, o),
        Command::Verify(o) => (Cmd::Verify, o),
        Command::Signs(o) => (Cmd::Signs, o),
    };
    let go = || {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = execute(cmd, &opts, &mut o, &mut e);
        (code, o, e)
    };
    let (code, o, e) = match opts.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(go),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        },
        None => go(),
    };
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    code
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmd {
    Compute,
    Jones,
    Torsion,
    Lee,
    Verify,
    Signs,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

struct Setup {
    alg: FrobeniusAlgebra,
    mode: Mode,
    tqft: String,
}

fn setup(opts: &Opts) -> Result<Setup> {
    let mode: Mode = opts.mode.parse()?;
    let (alg, tqft) = if let Some(params) = opts.tqft.strip_prefix("custom:") {
        let ring: Ring = opts.ring.as_deref().unwrap_or("Z").parse()?;
        let p: FrobParams = params.parse()?;
        (make_universal(ring, &p)?, opts.tqft.clone())
    } else {
        let p: Preset = opts.tqft.parse()?;
        let default_ring = match p {
            Preset::Bn1 | Preset::Bn2 => "F2",
            _ => "Z",
        };
        let ring: Ring = opts.ring.as_deref().unwrap_or(default_ring).parse()?;
        (preset(p, ring)?, p.to_string())
    };
    Ok(Setup { alg, mode, tqft })
}

fn orient(d: Diagram, flags: Option<&str>) -> Result<Diagram> {
    let Some(s) = flags else { return Ok(d) };
    let f = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' | '1' => Ok(true),
            '-' | '0' => Ok(false),
            _ => Err(Error::Orientation(format!("unexpected character {c:?} in --orient"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    d.with_orientation(&f)
}

fn execute(cmd: Cmd, opts: &Opts, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = match setup(opts) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let inputs: Vec<String> = match (&opts.pd, &opts.gauss, &opts.file) {
        (Some(t), None, None) | (None, Some(t), None) => vec![t.clone()],
        (None, None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(text) => text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect(),
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return 1;
            }
        },
        _ => {
            let _ = writeln!(err, "error: exactly one of --pd, --gauss, --file is required");
            return 1;
        }
    };
    let batch = opts.file.is_some();
    let mut code = 0;
    for text in &inputs {
        let parsed = if opts.gauss.is_some() && !text.trim_start().starts_with("CD") {
            crate::diagram::parse_gauss(text).map(|g| crate::diagram::gauss_to_cd(&g))
        } else if opts.pd.is_some() {
            crate::diagram::parse_cd(text)
        } else {
            parse_any(text)
        };
        let result = parsed
            .and_then(|d| orient(d, opts.orient.as_deref()))
            .and_then(|d| handle(cmd, &d, opts, &setup));
        match result {
            Ok(Payload { text: t, json, failed }) => {
                if batch {
                    let mut v = json;
                    if let serde_json::Value::Object(m) = &mut v {
                        m.insert("input".into(), serde_json::Value::String(text.clone()));
                    }
                    let _ = writeln!(out, "{v}");
                } else if opts.format == Format::Json {
                    let _ = writeln!(out, "{json}");
                } else {
                    let _ = write!(out, "{t}");
                }
                if failed {
                    code = code.max(2);
                }
            }
            Err(e) => {
                if batch {
                    let v = serde_json::json!({ "input": text, "error": e.to_string() });
                    let _ = writeln!(out, "{v}");
                } else {
                    let _ = writeln!(err, "error: {e}");
                }
                code = code.max(exit_code(&e));
            }
        }
    }
    code
}

struct Payload {
    text: String,
    json: serde_json::Value,
    /// An internal check failed; reported in the payload, exit code 2.
    failed: bool,
}

#[derive(Serialize)]
struct BettiEntry {
    t: i64,
    q: Option<i64>,
    rank: usize,
}

#[derive(Serialize)]
struct TorsionEntry {
    t: i64,
    q: Option<i64>,
    factors: Vec<String>,
}

#[derive(Serialize)]
struct HomologyJson {
    mode: String,
    ring: String,
    betti: Vec<BettiEntry>,
    torsion: Vec<TorsionEntry>,
    poincare: String,
    euler: Option<String>,
}

fn homology_json(h: &BigradedHomology, euler: Option<String>) -> HomologyJson {
    HomologyJson {
        mode: h.mode.to_string(),
        ring: h.ring.to_string(),
        betti: h
            .entries
            .iter()
            .filter(|(_, g)| g.rank > 0)
            .map(|(&(t, q), g)| BettiEntry { t, q, rank: g.rank })
            .collect(),
        torsion: h
            .entries
            .iter()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(&(t, q), g)| TorsionEntry {
                t,
                q,
                factors: g.torsion.iter().map(ToString::to_string).collect(),
            })
            .collect(),
        poincare: betti_poly(h).to_string(),
        euler,
    }
}

fn cube_options(opts: &Opts) -> CubeOptions {
    CubeOptions {
        max_crossings: opts.max_crossings,
        ..CubeOptions::default()
    }
}

fn q_label(q: Option<i64>) -> String {
    q.map_or_else(|| "*".into(), |q| q.to_string())
}

fn handle(cmd: Cmd, d: &Diagram, opts: &Opts, s: &Setup) -> Result<Payload> {
    let copts = cube_options(opts);
    match cmd {
        Cmd::Compute => {
            let cube = build_cube(d, &copts)?;
            let c = build_complex(&cube, &s.alg, s.mode)?;
            let h = homology_over(&c, s.alg.ring)?;
            let euler = if c.graded { Some(euler_char(&c)?.to_string()) } else { None };
            let j = homology_json(&h, euler.clone());
            let mut t = String::new();
            t += &format!("diagram: {d}\n");
            t += &format!(
                "crossings: {}  n+: {}  n-: {}\n",
                d.crossing_count(),
                d.n_plus(),
                d.n_minus()
            );
            t += &format!("ring: {}  tqft: {}  mode: {}\n", h.ring, s.tqft, h.mode);
            t += &format!("poincare: {}\n", j.poincare);
            if h.ring == Ring::Z {
                t += &format!(
                    "torsion({}): {}\n",
                    opts.torsion_prime,
                    torsion_poly(&h, opts.torsion_prime)?
                );
            }
            if let Some(e) = &euler {
                t += &format!("euler: {e}\n");
            }
            t += "homology:\n";
            for (&(deg, q), g) in &h.entries {
                let mut parts = Vec::new();
                if g.rank > 0 {
                    parts.push(if g.rank == 1 { h.ring.to_string() } else { format!("{}^{}", h.ring, g.rank) });
                }
                parts.extend(g.torsion.iter().map(|f| format!("Z/{f}")));
                t += &format!("  t={deg} q={}: {}\n", q_label(q), parts.join(" + "));
            }
            Ok(Payload {
                text: t,
                json: serde_json::to_value(j).expect("serializable"),
                failed: false,
            })
        }
        Cmd::Jones => {
            let b = bracket_with_limit(d, opts.max_crossings)?;
            let k = normalize(d, &b);
            let jn = k
                .div_exact(&crate::poly::Laurent1::circle())
                .ok_or_else(|| Error::Invariant(format!("{k} is not divisible by q + q^-1")))?;
            let t = format!("bracket: {b}\nkauffman: {k}\njones: {jn}\n");
            let json = serde_json::json!({
                "bracket": b.to_string(),
                "kauffman": k.to_string(),
                "jones": jn.to_string(),
            });
            Ok(Payload { text: t, json, failed: false })
        }
        Cmd::Torsion => {
            if s.alg.ring != Ring::Z {
                return Err(Error::Request("torsion needs --ring Z".into()));
            }
            let cube = build_cube(d, &copts)?;
            let c = build_complex(&cube, &s.alg, s.mode)?;
            let h = homology_over(&c, Ring::Z)?;
            let p = opts.torsion_prime;
            let poly = torsion_poly(&h, p)?;
            let entries: Vec<serde_json::Value> = poly
                .terms()
                .map(|(n, q, t)| serde_json::json!({ "t": t, "q": q, "count": n }))
                .collect();
            let json = serde_json::json!({
                "mode": h.mode.to_string(),
                "prime": p,
                "torsion": poly.to_string(),
                "entries": entries,
            });
            Ok(Payload {
                text: format!("{p}-torsion: {poly}\n"),
                json,
                failed: false,
            })
        }
        Cmd::Lee => {
            let ws = non_alternating_resolutions(d)?;
            let r = lee_degeneration_check(d, &copts)?;
            let n = d.crossing_count();
            let sign_str = |o: &[bool]| o.iter().map(|&b| if b { '+' } else { '-' }).collect::<String>();
            let mut t = String::new();
            for w in &ws {
                t += &format!(
                    "orientation {} word {} homdeg {}\n",
                    sign_str(&w.orientation),
                    word_string(w.word, n),
                    w.homdeg
                );
            }
            let ranks: Vec<String> = r.ranks.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            t += &format!(
                "lee rank over Q: {} (expected {}) by degree {{{}}}\n",
                r.total_rank,
                r.expected_rank,
                ranks.join(", ")
            );
            for (p, rk) in &r.fp_ranks {
                t += &format!("rank over F{p}: {rk}\n");
            }
            let two: Vec<String> = r.torsion.iter().map(|(deg, f)| format!("t={deg}: Z/{f}")).collect();
            if !two.is_empty() {
                t += &format!("torsion: {}\n", two.join(", "));
            }
            t += &format!(
                "degeneration: {}\n",
                if r.ok() { "OK".to_string() } else { format!("FAILED ({})", r.violations.join("; ")) }
            );
            let json = serde_json::json!({
                "witnesses": ws.iter().map(|w| serde_json::json!({
                    "orientation": sign_str(&w.orientation),
                    "word": word_string(w.word, n),
                    "homdeg": w.homdeg,
                })).collect::<Vec<_>>(),
                "ranks": r.ranks.iter().map(|(k, v)| serde_json::json!({"t": k, "rank": v})).collect::<Vec<_>>(),
                "total_rank": r.total_rank,
                "expected_rank": r.expected_rank,
                "fp_ranks": r.fp_ranks.iter().map(|(p, k)| serde_json::json!({"p": p, "rank": k})).collect::<Vec<_>>(),
                "torsion": r.torsion.iter().map(|(deg, f)| serde_json::json!({"t": deg, "factor": f.to_string()})).collect::<Vec<_>>(),
                "ok": r.ok(),
            });
            Ok(Payload { text: t, json, failed: !r.ok() })
        }
        Cmd::Verify => {
            let cube = build_cube(d, &copts)?;
            let c = build_complex(&cube, &s.alg, s.mode)?;
            let bad = d_squared_failures(&c);
            let faces = check_faces(&cube, &s.alg);
            let d2_ok = verify_d_squared(&c);
            let mut t = String::new();
            for r in 0..c.diffs.len().saturating_sub(1) {
                t += &format!(
                    "d{}∘d{} (t={}): {}\n",
                    r + 1,
                    r,
                    c.hom_degree(r),
                    if bad.contains(&r) { "FAIL" } else { "OK" }
                );
            }
            t += &format!(
                "faces checked: {}, violations: {}\n",
                faces.faces,
                faces.violations.len()
            );
            let ok = |b: bool| if b { "OK" } else { "FAIL" };
            t += &format!("d2=0: {}, faces: {}\n", ok(d2_ok), ok(faces.ok()));
            let json = serde_json::json!({
                "d2": d2_ok,
                "d2_failures": bad.iter().map(|&r| c.hom_degree(r)).collect::<Vec<_>>(),
                "faces": faces.faces,
                "face_violations": faces.violations.iter().map(|v| {
                    let mut w = word_string(v.word, d.crossing_count()).into_bytes();
                    w[v.crossings.0] = b'*';
                    w[v.crossings.1] = b'*';
                    String::from_utf8(w).expect("ascii")
                }).collect::<Vec<_>>(),
            });
            Ok(Payload {
                text: t,
                json,
                failed: !(d2_ok && faces.ok()),
            })
        }
        Cmd::Signs => {
            let cube = build_cube(d, &copts)?;
            let n = cube.crossing_count();
            let mut lines = Vec::new();
            for w in cube.words() {
                for c in 0..n {
                    if let Some(sd) = cube.saddle(w, c) {
                        lines.push(sd.dump_line(n));
                    }
                }
            }
            let mut t = lines.join("\n");
            if !t.is_empty() {
                t.push('\n');
            }
            Ok(Payload {
                text: t,
                json: serde_json::json!({ "saddles": lines }),
                failed: false,
            })
        }
    }
}
