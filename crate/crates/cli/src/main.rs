mod cache;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crossint_core::certify::{self, appendix_threshold_scan, Certificate, GridParams, LemmaId};
use crossint_core::family::{example1_pair, hm_family, mixed_uniformity_pair, PairStats};
use crossint_core::io::{to_json, write_family, ReportDoc, TraceDoc};
use crossint_core::search::{
    brute_oracle, fk_diversity_trial, hilton_trial, max_product_search, prop21_diagnostic,
    size_sum_trial, star_split_trial, SearchReport, TrialReport,
};
use crossint_core::shifting::{shift_pair_to_fixpoint, ShiftTrace};
use crossint_core::{Family, KSet};

use cache::SearchCache;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "crossint",
    version,
    about = "Exact certificates, constructions and searches for cross-intersecting families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Directory receiving the output documents.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// What to print on stdout. Files are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Leave `produced_at` null so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Prop {
    Hilton,
    Starsplit,
    Fk,
    Sizesum,
    Prop21,
}

impl Prop {
    fn name(self) -> &'static str {
        match self {
            Prop::Hilton => "hilton",
            Prop::Starsplit => "starsplit",
            Prop::Fk => "fk",
            Prop::Sizesum => "sizesum",
            Prop::Prop21 => "prop21",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SearchMode {
    Exact,
    Brute,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a lemma over a k-range with exact arithmetic.
    Certify {
        #[arg(long, value_parser = parse_lemma)]
        lemma: LemmaId,
        /// Inclusive range `a..b` (or a single `k`).
        #[arg(long, value_parser = parse_k_range)]
        k: (u32, u32),
        #[arg(long)]
        t: Option<u32>,
        /// Fix `n` instead of sweeping the lemma's range.
        #[arg(long)]
        n: Option<u32>,
        /// Reject points outside the claimed range; `false` evaluates and flags them.
        #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
        strict_paper_ranges: bool,
    },
    /// Write the Hilton–Milner family.
    Hm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Write the two-sided pinned construction around `f0`, `g0`.
    Example1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_kset)]
        f0: KSet,
        #[arg(long, value_parser = parse_kset)]
        g0: KSet,
    },
    /// Like `example1` with `G` made `l`-uniform.
    Mixed {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = parse_kset)]
        f0: KSet,
        #[arg(long, value_parser = parse_kset)]
        g0: KSet,
    },
    /// Maximize `|F||G|` over non-trivial cross-intersecting pairs.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = SearchMode::Exact)]
        mode: SearchMode,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Overrides `CROSSINT_CACHE`.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Seeded randomized checks of the structural lemmas.
    Trials {
        #[arg(long, value_enum)]
        prop: Prop,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Diversity parameter for `fk`.
        #[arg(long)]
        u: Option<u32>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Exact scan for the thresholds behind the analytic estimates.
    AppendixScan {
        #[arg(long, default_value_t = 200)]
        max_k: u32,
    },
}

fn parse_lemma(s: &str) -> Result<LemmaId, String> {
    s.parse::<LemmaId>().map_err(|e| e.to_string())
}

fn parse_k_range(s: &str) -> Result<(u32, u32), String> {
    let num = |x: &str| {
        x.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad k in range: {x:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_kset(s: &str) -> Result<KSet, String> {
    let elems = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad element {x:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    KSet::from_elems(&elems).map_err(|e| e.to_string())
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<crossint_core::Error> for Failure {
    fn from(e: crossint_core::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

type CmdResult = Result<u8, Failure>;

struct Ctx {
    common: Common,
}

impl Ctx {
    fn stamp(&self) -> Option<String> {
        if self.common.no_timestamp {
            return None;
        }
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(format!("unix:{secs}"))
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.common.out_dir)?;
        let path = self.common.out_dir.join(name);
        fs::write(&path, text)?;
        Ok(path)
    }

    fn emit(
        &self,
        json: &str,
        human: impl FnOnce() -> String,
        csv: Option<String>,
    ) -> Result<(), Failure> {
        match self.common.format {
            Format::Json => print!("{json}"),
            Format::Human => print!("{}", human()),
            Format::Csv => match csv {
                Some(c) => print!("{c}"),
                None => return Err(usage("csv output is only available for certify and trials")),
            },
        }
        Ok(())
    }

    fn report<T: Serialize>(&self, kind: &str, body: &T) -> String {
        let mut doc = ReportDoc::new(kind, body);
        doc.produced_at = self.stamp();
        to_json(&doc)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        common: cli.common.clone(),
    };
    let run = match cli.command {
        Command::Certify {
            lemma,
            k,
            t,
            n,
            strict_paper_ranges,
        } => cmd_certify(&ctx, lemma, k, t, n, strict_paper_ranges),
        Command::Hm { n, k } => cmd_hm(&ctx, n, k),
        Command::Example1 { n, k, f0, g0 } => example1_pair(n, k, f0, g0)
            .map_err(Failure::from)
            .and_then(|(f, g)| cmd_pair(&ctx, &format!("example1_n{n}_k{k}"), &f, &g)),
        Command::Mixed { n, k, l, f0, g0 } => mixed_uniformity_pair(n, k, l, f0, g0)
            .map_err(Failure::from)
            .and_then(|(f, g)| cmd_pair(&ctx, &format!("mixed_n{n}_k{k}_l{l}"), &f, &g)),
        Command::Search {
            n,
            k,
            mode,
            budget,
            cache_dir,
            no_cache,
        } => {
            let cache = if no_cache {
                None
            } else {
                SearchCache::locate(cache_dir.as_deref())
            };
            cmd_search(&ctx, n, k, mode, budget, cache)
        }
        Command::Trials {
            prop,
            n,
            k,
            u,
            trials,
            seed,
        } => cmd_trials(&ctx, prop, n, k, u, trials, seed),
        Command::AppendixScan { max_k } => cmd_appendix(&ctx, max_k),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_certify(
    ctx: &Ctx,
    lemma: LemmaId,
    (k_lo, k_hi): (u32, u32),
    t: Option<u32>,
    n: Option<u32>,
    strict: bool,
) -> CmdResult {
    let params = GridParams {
        k_lo,
        k_hi,
        t,
        n,
        strict,
    };
    let mut cert = certify::certify(lemma, &params)?;
    cert.produced_at = ctx.stamp();
    let json = to_json(&cert);
    let mut name = format!("cert_{}_k{k_lo}-{k_hi}", lemma.as_str());
    if let Some(t) = t {
        let _ = write!(name, "_t{t}");
    }
    if let Some(n) = n {
        let _ = write!(name, "_n{n}");
    }
    let path = ctx.write(&format!("{name}.json"), &json)?;
    ctx.emit(
        &json,
        || certificate_human(&cert, &path),
        Some(certificate_csv(&cert)),
    )?;
    Ok(if cert.all_hold { EXIT_OK } else { EXIT_FAIL })
}

fn certificate_human(cert: &Certificate, path: &Path) -> String {
    let failing: Vec<_> = cert.records.iter().filter(|r| !r.holds).collect();
    let flagged = cert.records.iter().filter(|r| !r.flags.is_empty()).count();
    let mut s = format!(
        "{} k={}..{}: {} records, {} failing, {} flagged -> {}\n",
        cert.lemma_id,
        cert.params.k_lo,
        cert.params.k_hi,
        cert.records.len(),
        failing.len(),
        flagged,
        path.display()
    );
    for r in failing.iter().take(10) {
        let _ = writeln!(s, "  fails at n={:?} k={} t={:?}", r.n, r.k, r.t);
    }
    let _ = writeln!(s, "all_hold: {}", cert.all_hold);
    s
}

fn certificate_csv(cert: &Certificate) -> String {
    let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut s = String::from("lemma_id,n,k,t,lhs,rhs,holds,flags\n");
    for r in &cert.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.lemma_id,
            opt(r.n),
            r.k,
            opt(r.t),
            r.lhs,
            r.rhs,
            r.holds,
            r.flags.join(";")
        );
    }
    s
}

fn cmd_hm(ctx: &Ctx, n: u32, k: u32) -> CmdResult {
    let f = hm_family(n, k)?;
    let text = write_family(&f);
    let path = ctx.write(&format!("hm_n{n}_k{k}.family.json"), &text)?;
    let human = || {
        format!(
            "hm n={n} k={k}: {} sets, intersecting {}, non-trivial {} -> {}\n",
            f.len(),
            f.is_intersecting(),
            f.is_non_trivial(),
            path.display()
        )
    };
    ctx.emit(&text, human, None)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PairSummary<'a> {
    #[serde(flatten)]
    stats: &'a PairStats,
    admissible: bool,
    f_file: String,
    g_file: String,
}

fn cmd_pair(ctx: &Ctx, stem: &str, f: &Family, g: &Family) -> CmdResult {
    let stats = PairStats::of(f, g)?;
    let fp = ctx.write(&format!("{stem}_F.family.json"), &write_family(f))?;
    let gp = ctx.write(&format!("{stem}_G.family.json"), &write_family(g))?;
    let summary = PairSummary {
        stats: &stats,
        admissible: stats.is_admissible(),
        f_file: file_name(&fp),
        g_file: file_name(&gp),
    };
    let json = to_json(&summary);
    let human = || {
        format!(
            "|F| = {}, |G| = {}, product {}\ncross-intersecting {}, F non-trivial {}, G non-trivial {}\n-> {}\n-> {}\n",
            stats.size_f,
            stats.size_g,
            stats.product,
            stats.ci,
            stats.nontrivial_f,
            stats.nontrivial_g,
            fp.display(),
            gp.display()
        )
    };
    ctx.emit(&json, human, None)?;
    Ok(if stats.is_admissible() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Serialize)]
struct SearchBody<'a> {
    #[serde(flatten)]
    report: &'a SearchReport,
    exceeds_conjecture: bool,
    best_pair_trace: Option<TraceDoc<'a>>,
}

fn search_exit(optimal: bool, exceeds: bool) -> u8 {
    if exceeds {
        EXIT_FAIL
    } else if optimal {
        EXIT_OK
    } else {
        EXIT_BUDGET
    }
}

fn cmd_search(
    ctx: &Ctx,
    n: u32,
    k: u32,
    mode: SearchMode,
    budget: Option<f64>,
    cache: Option<SearchCache>,
) -> CmdResult {
    if k < 2 || n < 2 * k {
        return Err(usage(format!(
            "search needs k >= 2 and n >= 2k, got n={n}, k={k}"
        )));
    }
    let budget = match budget {
        Some(b) if !(b.is_finite() && b > 0.0) => {
            return Err(usage(format!("budget must be positive, got {b}")))
        }
        Some(b) => Some(Duration::from_secs_f64(b)),
        None => None,
    };
    let mode_name = match mode {
        SearchMode::Exact => "exact",
        SearchMode::Brute => "brute",
    };
    let name = format!("search_n{n}_k{k}_{mode_name}.json");

    if let Some(hit) = cache.as_ref().and_then(|c| c.load(n, k, mode_name)) {
        let text = match ctx.stamp() {
            Some(ts) => hit.replacen(
                "\"produced_at\": null",
                &format!("\"produced_at\": \"{ts}\""),
                1,
            ),
            None => hit,
        };
        let path = ctx.write(&name, &text)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
        let optimal = v["optimal"].as_bool().unwrap_or(false);
        let exceeds = v["exceeds_conjecture"].as_bool().unwrap_or(false);
        let human = || {
            format!(
                "search n={n} k={k} ({mode_name}, cached): best product {}, h^2 {}, optimal {optimal} -> {}\n",
                v["best_product"].as_str().unwrap_or("?"),
                v["hm_square"].as_str().unwrap_or("?"),
                path.display()
            )
        };
        ctx.emit(&text, human, None)?;
        return Ok(search_exit(optimal, exceeds));
    }

    let report = match mode {
        SearchMode::Exact => max_product_search(n, k, budget)?,
        SearchMode::Brute => brute_oracle(n, k)?,
    };
    let trace: Option<ShiftTrace> = match &report.best_pair {
        Some((f, g)) => Some(shift_pair_to_fixpoint(f, g)?.2),
        None => None,
    };
    let exceeds = report.exceeds_conjecture();
    let body = SearchBody {
        report: &report,
        exceeds_conjecture: exceeds,
        best_pair_trace: trace.as_ref().map(TraceDoc::new),
    };

    if exceeds {
        if let Some((f, g)) = &report.best_pair {
            ctx.write(
                &format!("search_n{n}_k{k}_witness_F.family.json"),
                &write_family(f),
            )?;
            ctx.write(
                &format!("search_n{n}_k{k}_witness_G.family.json"),
                &write_family(g),
            )?;
        }
    }
    if let Some(c) = cache.as_ref().filter(|_| report.optimal && !exceeds) {
        let mut doc = ReportDoc::new("search", &body);
        doc.produced_at = None;
        if let Err(e) = c.store(n, k, mode_name, &to_json(&doc)) {
            eprintln!("warning: could not write search cache: {e}");
        }
    }
    let json = ctx.report("search", &body);
    let path = ctx.write(&name, &json)?;
    let human = || {
        let h2 = report
            .hm_square
            .as_ref()
            .map(|h| h.to_string())
            .unwrap_or_else(|| "n/a".into());
        let mut s = format!(
            "search n={n} k={k} ({mode_name}): best product {}, h^2 {h2}, optimal {}, nodes {} -> {}\n",
            report.best_product,
            report.optimal,
            report.nodes_explored,
            path.display()
        );
        if exceeds {
            s.push_str("best product exceeds h^2; witness pair written\n");
        } else if !report.optimal {
            s.push_str("budget exhausted before the search space was covered\n");
        }
        s
    };
    ctx.emit(&json, human, None)?;
    Ok(search_exit(report.optimal, exceeds))
}

fn cmd_trials(
    ctx: &Ctx,
    prop: Prop,
    n: u32,
    k: u32,
    u: Option<u32>,
    trials: u64,
    seed: u64,
) -> CmdResult {
    if prop == Prop::Prop21 {
        let rep = prop21_diagnostic(n, k)?;
        let json = ctx.report("trials", &rep);
        let path = ctx.write(&format!("trials_prop21_n{n}_k{k}.json"), &json)?;
        let human = || {
            format!(
                "prop21 n={n} k={k}: best product {}, h^2 {}, {} optima, {} apparent violations (diagnostic) -> {}\n",
                rep.best_product,
                rep.hm_square,
                rep.optima.len(),
                rep.apparent_violations,
                path.display()
            )
        };
        ctx.emit(&json, human, None)?;
        return Ok(EXIT_OK);
    }
    if u.is_some() && prop != Prop::Fk {
        return Err(usage("--u only applies to --prop fk"));
    }
    let rep: TrialReport = match prop {
        Prop::Hilton => hilton_trial(n, k, trials, seed)?,
        Prop::Starsplit => star_split_trial(n, k, trials, seed)?,
        Prop::Fk => {
            let u = u.ok_or_else(|| usage("--prop fk needs --u"))?;
            fk_diversity_trial(n, k, u, trials, seed)?
        }
        Prop::Sizesum => size_sum_trial(n, k, trials, seed)?,
        Prop::Prop21 => unreachable!(),
    };
    let json = ctx.report("trials", &rep);
    let mut name = format!("trials_{}_n{n}_k{k}", prop.name());
    if let Some(u) = u {
        let _ = write!(name, "_u{u}");
    }
    let _ = write!(name, "_s{seed}.json");
    let path = ctx.write(&name, &json)?;
    let human = || {
        let mut s = format!(
            "{} n={n} k={k} seed={seed}: {} trials, {} hypothesis hits, {} violations -> {}\n",
            prop.name(),
            rep.trials,
            rep.hypothesis_hits,
            rep.violations,
            path.display()
        );
        if rep.vacuous() {
            s.push_str("warning: no trial met the hypothesis\n");
        }
        s
    };
    let csv = format!(
        "property_id,n,k,u,seed,trials,hypothesis_hits,strict_hits,violations\n{},{n},{k},{},{seed},{},{},{},{}\n",
        rep.property_id,
        rep.u.map(|x| x.to_string()).unwrap_or_default(),
        rep.trials,
        rep.hypothesis_hits,
        rep.strict_hits.map(|x| x.to_string()).unwrap_or_default(),
        rep.violations
    );
    ctx.emit(&json, human, Some(csv))?;
    Ok(if rep.violations == 0 {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn cmd_appendix(ctx: &Ctx, max_k: u32) -> CmdResult {
    let rep = appendix_threshold_scan(max_k)?;
    let json = ctx.report("appendix", &rep);
    let path = ctx.write(&format!("appendix_k{max_k}.json"), &json)?;
    let human = || {
        let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_else(|| "none".into());
        let mut s = format!(
            "(5/7)^(k-1) < 1/32 from k = {} (claimed {})\nf(k) < 1 from k = {} (claimed {}), f(24) = {}\n\
             f decreasing on 24..{max_k}: {}\nkey1/key2 pointwise on k = 8..12: {} / {}\n",
            opt(rep.pow57_min_k),
            rep.pow57_claimed_min_k,
            opt(rep.f_min_k),
            rep.f_claimed_min_k,
            rep.f24_decimal,
            rep.f_mono_holds,
            rep.key1_pointwise_8_12,
            rep.key2_pointwise_8_12
        );
        for d in &rep.discrepancies {
            let _ = writeln!(s, "discrepancy: {d}");
        }
        let _ = writeln!(s, "-> {}", path.display());
        s
    };
    ctx.emit(&json, human, None)?;
    Ok(if rep.conclusions_hold() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}
