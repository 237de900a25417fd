//! Command-line front end: the manifold/map file format, the built-in
//! corpus, and dispatch of the report commands.
//!
//! Input files hold `[manifold]` and `[map]` sections with one `key = value`
//! pair per line; `#` starts a comment.
//!
//! ```text
//! [manifold]
//! name = quadric
//! m = 1
//! d = 1
//! theta_bar_1 = w1*zeta1
//!
//! [map]
//! name = id
//! source = quadric
//! target = quadric
//! h_1 = w1
//! h_2 = z1
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify_map, manifold_classify, Bounds, ClassificationReport};
use crate::corpus;
use crate::error::{Error, Result};
use crate::fps::{parse_series, Gq, Series};
use crate::manifold::{conjugate_theta, theta_from_conjugate, verify_maps_into, verify_maps_into_conj, verify_reality, Blocks, FormalMap, GenericManifold};
use crate::propagate::artin::{artin_hypothesis_check, determination_experiment, launch_system, quadric_automorphisms, ArtinOutcome, DeterminationContext};
use crate::propagate::table::{direct_table, propagate_jets};
use crate::propagate::{default_fundamental_system, verify_on_chain};
use crate::reflection::{conjugate_reflection_check, multi_indices_upto, theta_beta_direct, theta_beta_recursive, ReflectionSystem};
use crate::segre::{minimality_witness, segre_multitype};

pub const DEFAULT_ORDER: u32 = 8;

/// Manifolds and maps read from input files or the built-in corpus.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub manifolds: BTreeMap<String, Arc<GenericManifold>>,
    pub maps: BTreeMap<String, FormalMap>,
}

impl Document {
    pub fn manifold(&self, name: &str) -> Option<&Arc<GenericManifold>> {
        self.manifolds.get(name)
    }

    pub fn map(&self, name: &str) -> Option<&FormalMap> {
        self.maps.get(name)
    }

    fn add_manifold(&mut self, mf: GenericManifold) {
        self.manifolds.insert(mf.name.clone(), Arc::new(mf));
    }

    fn add_map(&mut self, h: FormalMap) {
        self.manifolds.entry(h.source.name.clone()).or_insert_with(|| h.source.clone());
        self.manifolds.entry(h.target.name.clone()).or_insert_with(|| h.target.clone());
        self.maps.insert(h.name.clone(), h);
    }

    /// Adds everything from `other`, which takes precedence.
    pub fn merge(&mut self, other: Document) {
        self.manifolds.extend(other.manifolds);
        self.maps.extend(other.maps);
    }
}

/// The built-in corpus at the given order.
pub fn builtin(order: u32) -> Result<Document> {
    let mut doc = Document::default();
    doc.add_manifold(corpus::quadric(order)?);
    doc.add_manifold(corpus::quartic(order)?);
    doc.add_manifold(corpus::bidegree(order)?);
    doc.add_manifold(corpus::rational_graph(order)?);
    doc.add_manifold(corpus::levi_flat(order));
    for a in 1..=2 {
        doc.add_map(corpus::quadric_embedding(a, order)?);
    }
    doc.add_map(corpus::quartic_embedding(order)?);
    doc.add_map(corpus::id_quadric(order)?);
    doc.add_map(corpus::id_bidegree(order)?);
    Ok(doc)
}

#[derive(Debug)]
struct Entry {
    line: usize,
    col: usize,
    value: String,
}

#[derive(Debug)]
struct Section {
    kind: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn parse_err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(kind) = rest.strip_suffix(']') else {
                return parse_err(line, indent + 1, "unterminated section header");
            };
            if kind != "manifold" && kind != "map" {
                return parse_err(line, indent + 2, format!("unknown section `{kind}`"));
            }
            out.push(Section { kind: kind.to_string(), line, entries: BTreeMap::new() });
            continue;
        }
        let Some(sec) = out.last_mut() else {
            return parse_err(line, indent + 1, "entry outside of a section");
        };
        let Some(eq) = body.find('=') else {
            return parse_err(line, indent + 1, "expected `key = value`");
        };
        let key = body[..eq].trim().to_string();
        if key.is_empty() {
            return parse_err(line, indent + 1, "missing key");
        }
        let after = &body[eq + 1..];
        let value = after.trim().to_string();
        let col = eq + 2 + (after.len() - after.trim_start().len());
        if value.is_empty() {
            return parse_err(line, col, format!("missing value for `{key}`"));
        }
        if sec.entries.contains_key(&key) {
            return parse_err(line, indent + 1, format!("duplicate key `{key}`"));
        }
        sec.entries.insert(key, Entry { line, col, value });
    }
    Ok(out)
}

fn required<'a>(sec: &'a Section, key: &str) -> Result<&'a Entry> {
    sec.entries.get(key).ok_or_else(|| Error::Parse { line: sec.line, col: 1, msg: format!("[{}] section lacks `{key}`", sec.kind) })
}

fn int_value(e: &Entry) -> Result<usize> {
    e.value.parse().or_else(|_| parse_err(e.line, e.col, format!("expected an integer, found `{}`", e.value)))
}

/// Parses an expression entry, relocating errors to the file position.
fn series_value(e: &Entry, vars: &crate::fps::Vars, order: u32) -> Result<Series> {
    parse_series(&e.value, vars, order).map_err(|err| match err {
        Error::Parse { col, msg, .. } => Error::Parse { line: e.line, col: e.col + col - 1, msg },
        Error::UnknownVar(v) => Error::Parse { line: e.line, col: e.col, msg: format!("undeclared identifier `{v}`") },
        other => Error::Parse { line: e.line, col: e.col, msg: other.to_string() },
    })
}

fn check_keys(sec: &Section, allowed: impl Fn(&str) -> bool) -> Result<()> {
    for (k, e) in &sec.entries {
        if !allowed(k) {
            return parse_err(e.line, 1, format!("unknown key `{k}` in [{}]", sec.kind));
        }
    }
    Ok(())
}

fn indexed(prefix: &str, count: usize) -> impl Fn(&str) -> bool + '_ {
    move |k: &str| k.strip_prefix(prefix).and_then(|j| j.parse::<usize>().ok()).map_or(false, |j| j >= 1 && j <= count)
}

/// Parses manifold and map sections. `order` overrides the `order` keys;
/// without either the default order is used. Maps may refer to
/// manifolds of `known` as well as to earlier sections.
pub fn parse_input_with(text: &str, order: Option<u32>, known: &Document) -> Result<Document> {
    let mut doc = Document::default();
    for sec in sections(text)? {
        let name = required(&sec, "name")?.value.clone();
        if sec.kind == "manifold" {
            let me = required(&sec, "m")?;
            let de = required(&sec, "d")?;
            let (m, d) = (int_value(me)?, int_value(de)?);
            if m == 0 || d == 0 {
                return parse_err(me.line, me.col, "m and d must be positive");
            }
            check_keys(&sec, |k| ["name", "m", "d", "order"].contains(&k) || indexed("theta_bar_", d)(k))?;
            let ord = match (order, sec.entries.get("order")) {
                (Some(o), _) => o,
                (None, Some(e)) => int_value(e)? as u32,
                (None, None) => DEFAULT_ORDER,
            };
            let vars = Blocks::new(m, d).theta_bar_vars();
            let tb = (1..=d).map(|j| series_value(required(&sec, &format!("theta_bar_{j}"))?, &vars, ord)).collect::<Result<Vec<_>>>()?;
            let mf = GenericManifold::from_theta_bar(&name, m, d, tb)?;
            doc.manifolds.insert(name, Arc::new(mf));
        } else {
            let lookup = |key: &str| -> Result<Arc<GenericManifold>> {
                let e = required(&sec, key)?;
                doc.manifolds
                    .get(&e.value)
                    .or_else(|| known.manifolds.get(&e.value))
                    .cloned()
                    .ok_or_else(|| Error::Parse { line: e.line, col: e.col, msg: format!("undeclared identifier `{}`", e.value) })
            };
            let source = lookup("source")?;
            let target = lookup("target")?;
            let np = target.n();
            check_keys(&sec, |k| ["name", "source", "target"].contains(&k) || indexed("h_", np)(k))?;
            let ord = source.order.min(target.order);
            let t = source.blocks().t();
            let comps = (1..=np).map(|j| series_value(required(&sec, &format!("h_{j}"))?, &t, ord)).collect::<Result<Vec<_>>>()?;
            let h = FormalMap::new(&name, source, target, comps)?;
            doc.maps.insert(name, h);
        }
    }
    Ok(doc)
}

pub fn parse_input(text: &str) -> Result<Document> {
    parse_input_with(text, None, &Document::default())
}

pub fn serialize_manifold(mf: &GenericManifold) -> String {
    let mut s = format!("[manifold]\nname = {}\nm = {}\nd = {}\norder = {}\n", mf.name, mf.m, mf.d, mf.order);
    for (j, tb) in mf.theta_bar.iter().enumerate() {
        let _ = writeln!(s, "theta_bar_{} = {}", j + 1, tb);
    }
    s
}

pub fn serialize_map(h: &FormalMap) -> String {
    let mut s = format!("[map]\nname = {}\nsource = {}\ntarget = {}\n", h.name, h.source.name, h.target.name);
    for (j, c) in h.h().iter().enumerate() {
        let _ = writeln!(s, "h_{} = {}", j + 1, c);
    }
    s
}

/// Manifolds first, then maps, separated by blank lines.
pub fn serialize(doc: &Document) -> String {
    let mut parts: Vec<String> = doc.manifolds.values().map(|m| serialize_manifold(m)).collect();
    parts.extend(doc.maps.values().map(serialize_map));
    parts.join("\n")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyManifold,
    VerifyMap,
    SegreType,
    Minimality,
    ClassifyManifold,
    ClassifyMap,
    Reflect,
    CheckRecursion,
    Propagate,
    Determine,
    ArtinCheck,
}

const COMMANDS: [(Command, &str); 11] = [
    (Command::VerifyManifold, "verify-manifold"),
    (Command::VerifyMap, "verify-map"),
    (Command::SegreType, "segre-type"),
    (Command::Minimality, "minimality"),
    (Command::ClassifyManifold, "classify-manifold"),
    (Command::ClassifyMap, "classify-map"),
    (Command::Reflect, "reflect"),
    (Command::CheckRecursion, "check-prop51"),
    (Command::Propagate, "propagate"),
    (Command::Determine, "determine"),
    (Command::ArtinCheck, "artin-check"),
];

impl Command {
    pub fn all() -> impl Iterator<Item = Command> {
        COMMANDS.iter().map(|(c, _)| *c)
    }

    pub fn name(self) -> &'static str {
        COMMANDS.iter().find(|(c, _)| *c == self).map(|(_, n)| *n).expect("listed")
    }

    /// Whether the subject is a map (otherwise a manifold).
    pub fn takes_map(self) -> bool {
        !matches!(self, Command::VerifyManifold | Command::SegreType | Command::Minimality | Command::ClassifyManifold)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        COMMANDS.iter().find(|(_, n)| *n == s).map(|(c, _)| *c).ok_or_else(|| Error::Parse { line: 0, col: 0, msg: format!("unknown command `{s}`") })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Name of the manifold or map, from the inputs or the built-in corpus.
    pub subject: String,
    /// Truncation order; the default order or the files' `order` keys when absent.
    pub order: Option<u32>,
    pub kappa_max: u32,
    pub gamma_bound: u32,
    pub beta_bound: u32,
    pub k_max: usize,
    /// Jet order at the end of the propagated chain.
    pub kappa: u32,
    pub family_size: usize,
    pub nu_max: u32,
    pub seed: u64,
    /// Contents of the input files, in order.
    pub inputs: Vec<String>,
}

impl RunConfig {
    pub fn new(command: Command, subject: &str) -> Self {
        RunConfig {
            command,
            subject: subject.to_string(),
            order: None,
            kappa_max: 6,
            gamma_bound: 4,
            beta_bound: 4,
            k_max: 2,
            kappa: 1,
            family_size: 6,
            nu_max: 3,
            seed: 0,
            inputs: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(o) = self.order {
            if o < 4 {
                return Err(Error::Precondition(format!("order {o} is below 4")));
            }
        }
        if self.kappa_max == 0 || self.gamma_bound == 0 || self.beta_bound == 0 || self.k_max == 0 {
            return Err(Error::Precondition("all bounds must be at least 1".into()));
        }
        if self.family_size < 2 {
            return Err(Error::Precondition("a determination family needs at least two members".into()));
        }
        Ok(())
    }

    fn bounds(&self) -> Bounds {
        Bounds { kappa_max: self.kappa_max, gamma_bound: self.gamma_bound, beta_bound: self.beta_bound }
    }
}

/// Report text and process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

/// 2 for malformed input, 3 for violated preconditions, 4 for
/// inconclusive computations, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::UnknownVar(_) => 2,
        Error::Precondition(_) | Error::NotNormal | Error::Reality(_) => 3,
        Error::Inconclusive(_) | Error::OrderExhausted(_) => 4,
        _ => 1,
    }
}

#[derive(Default)]
struct Report(String);

impl Report {
    fn kv(&mut self, key: &str, value: impl fmt::Display) {
        let _ = writeln!(self.0, "{key}={value}");
    }
}

fn nonzero_terms(rs: &[Series]) -> usize {
    rs.iter().map(|r| r.terms().len()).sum()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn run_command(cfg: &RunConfig) -> Outcome {
    let mut rep = Report::default();
    match dispatch(cfg, &mut rep) {
        Ok(code) => Outcome { code, text: rep.0 },
        Err(e) => {
            rep.kv("error", &e);
            Outcome { code: exit_code(&e), text: rep.0 }
        }
    }
}

fn load(cfg: &RunConfig) -> Result<Document> {
    let mut doc = builtin(cfg.order.unwrap_or(DEFAULT_ORDER))?;
    for text in &cfg.inputs {
        let parsed = parse_input_with(text, cfg.order, &doc)?;
        doc.merge(parsed);
    }
    Ok(doc)
}

fn dispatch(cfg: &RunConfig, rep: &mut Report) -> Result<i32> {
    cfg.validate()?;
    let doc = load(cfg)?;
    let unknown = || Error::Precondition(format!("no {} named `{}`", if cfg.command.takes_map() { "map" } else { "manifold" }, cfg.subject));
    rep.kv("command", cfg.command);
    rep.kv("subject", &cfg.subject);
    if cfg.command.takes_map() {
        let h = doc.map(&cfg.subject).ok_or_else(unknown)?;
        rep.kv("order", h.order);
        map_command(cfg, h, rep)
    } else {
        let mf = doc.manifold(&cfg.subject).ok_or_else(unknown)?;
        rep.kv("order", mf.order);
        manifold_command(cfg, mf, rep)
    }
}

fn classification(rep: &mut Report, r: &ClassificationReport) -> i32 {
    rep.kv("s_solvable", &r.solvable.verdict);
    rep.kv("kappa0", r.solvable.kappa0.map_or("none".to_string(), |k| k.to_string()));
    rep.kv("s_finite", &r.finite.verdict);
    rep.kv("s_nondeg", &r.nondeg.verdict);
    match &r.nondeg.witness {
        Some(w) => {
            let idx: Vec<String> = w.indices.iter().zip(&w.components).map(|(g, l)| format!("{}:{}", join(g), l + 1)).collect();
            rep.kv("witness", idx.join(";"));
            rep.kv("witness_det_leading", &w.leading);
        }
        None => rep.kv("witness", "none"),
    }
    if let Some(e) = &r.nondeg_manifold {
        rep.kv("s_nondeg_manifold", &e.verdict);
        if let Some(w) = &e.witness {
            rep.kv("manifold_witness_det_leading", &w.leading);
        }
    }
    rep.kv("audit", if r.audit_ok { "pass" } else { "fail" });
    if r.all_inconclusive() {
        4
    } else {
        0
    }
}

fn manifold_command(cfg: &RunConfig, mf: &Arc<GenericManifold>, rep: &mut Report) -> Result<i32> {
    rep.kv("m", mf.m);
    rep.kv("d", mf.d);
    match cfg.command {
        Command::VerifyManifold => {
            let (r1, r2) = verify_reality(mf)?;
            let back = theta_from_conjugate(&conjugate_theta(&mf.theta, mf.m, mf.d)?, mf.m, mf.d)?;
            let involution = back.iter().zip(&mf.theta).all(|(a, b)| a == b);
            rep.kv("reality_residual_terms", nonzero_terms(&r1) + nonzero_terms(&r2));
            rep.kv("involution", involution);
            rep.kv("normal", mf.normal);
            Ok(if involution && r1.iter().chain(&r2).all(|r| r.is_zero()) { 0 } else { 1 })
        }
        Command::SegreType => {
            let k_max = cfg.k_max.max(mf.d + 3).min(6 * mf.n());
            let r = segre_multitype(mf, k_max, cfg.seed)?;
            rep.kv("mu", r.mu);
            rep.kv("multitype", join(&r.multitype(mf.m)));
            rep.kv("minimal", r.minimal);
            for (k, rank) in r.ranks.iter().enumerate() {
                rep.kv(&format!("rank_{}", k + 1), rank);
            }
            Ok(0)
        }
        Command::Minimality => {
            let r = segre_multitype(mf, (mf.d + 3).min(6 * mf.n()).max(3), cfg.seed)?;
            rep.kv("minimal", r.minimal);
            rep.kv("mu", r.mu);
            rep.kv("stable_rank", r.ranks[r.mu - 1]);
            if r.minimal {
                let w = minimality_witness(mf, cfg.seed, 8)?;
                rep.kv("returns", w.returns);
                rep.kv("rank_t", w.rank_t);
                rep.kv("rank_tau", w.rank_tau);
                rep.kv("conj_rank_t", w.conj_rank_t);
                rep.kv("conj_rank_tau", w.conj_rank_tau);
                let tuple: Vec<String> = w.tuple.iter().map(|b| join(b)).collect();
                rep.kv("tuple", tuple.join(";"));
            }
            Ok(0)
        }
        Command::ClassifyManifold => Ok(classification(rep, &manifold_classify(mf, cfg.bounds())?)),
        _ => unreachable!("map command"),
    }
}

/// Members `φ∘h` for quadric self-maps `φ`, paired so that consecutive
/// members share their linear parts.
fn determination_family(h: &FormalMap, size: usize, seed: u64) -> Result<Vec<FormalMap>> {
    let quadric = corpus::quadric(h.target.order)?;
    if h.target.m != 1 || h.target.d != 1 || h.target.theta_bar != quadric.theta_bar {
        return Err(Error::Precondition(format!("determination families need the quadric as target, not {}", h.target.name)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut linear: Vec<(Gq, Gq)> = Vec::new();
    for lam in [Gq::one(), Gq::i(), Gq::int(-1), Gq::int(2)] {
        for b in [Gq::zero(), Gq::one(), Gq::i()] {
            linear.push((lam.clone(), b));
        }
    }
    linear.shuffle(&mut rng);
    let params: Vec<(Gq, Gq, Gq)> = (0..size).map(|i| {
        let (lam, b) = linear[(i / 2) % linear.len()].clone();
        (lam, b, Gq::int((i % 2) as i64))
    }).collect();
    let auts = quadric_automorphisms(&h.target, &params)?;
    auts.iter()
        .enumerate()
        .map(|(i, phi)| {
            let comps = phi.h().iter().map(|c| c.compose(&h.h())).collect::<Result<Vec<_>>>()?;
            FormalMap::new(&format!("{}_{i}", h.name), h.source.clone(), h.target.clone(), comps)
        })
        .collect()
}

fn map_command(cfg: &RunConfig, h: &FormalMap, rep: &mut Report) -> Result<i32> {
    rep.kv("source", &h.source.name);
    rep.kv("target", &h.target.name);
    match cfg.command {
        Command::VerifyMap => {
            let r = verify_maps_into(h)?;
            let rc = verify_maps_into_conj(h)?;
            rep.kv("maps_into_residual_terms", nonzero_terms(&r));
            rep.kv("conj_residual_terms", nonzero_terms(&rc));
            let ok = r.iter().chain(&rc).all(|x| x.is_zero());
            rep.kv("maps_into", ok);
            Ok(if ok { 0 } else { 1 })
        }
        Command::ClassifyMap => Ok(classification(rep, &classify_map(h, cfg.bounds())?)),
        Command::Reflect => {
            let sys = ReflectionSystem::new(h, cfg.gamma_bound)?;
            for (g, rs) in &sys.r {
                for (l, r) in rs.iter().enumerate() {
                    let lead = r.leading_term().map_or("0".to_string(), |(e, c)| Series::monomial(r.vars(), r.order(), e, c).to_string());
                    rep.kv(&format!("R[{}]_{}", join(g), l + 1), lead);
                }
            }
            let res = sys.vanishing_residuals()?;
            rep.kv("vanishing_residual_terms", res.values().map(|v| nonzero_terms(v)).sum::<usize>());
            Ok(0)
        }
        Command::CheckRecursion => {
            let mut all = true;
            for beta in multi_indices_upto(h.target.m, cfg.beta_bound).into_iter().skip(1) {
                let direct = theta_beta_direct(h, &beta)?;
                let recursive = theta_beta_recursive(h, &beta)?;
                let same = direct.iter().zip(&recursive).all(|(a, b)| {
                    let o = a.order().min(b.order());
                    a.truncate(o) == b.truncate(o)
                });
                let conj = conjugate_reflection_check(h, &beta)?;
                all &= same && conj.iter().all(|r| r.is_zero());
                rep.kv(&format!("beta[{}]_recursive_eq_direct", join(&beta)), same);
                rep.kv(&format!("beta[{}]_conj_residual_terms", join(&beta)), nonzero_terms(&conj));
            }
            rep.kv("consistent", all);
            Ok(if all { 0 } else { 1 })
        }
        Command::Propagate => {
            let report = classify_map(h, cfg.bounds())?;
            let sys = default_fundamental_system(h, &report)?;
            rep.kv("kappa0", sys.kappa0);
            rep.kv("system_rows", sys.witness_rows.len());
            for k in 1..=cfg.k_max {
                let r = verify_on_chain(&sys, h, k)?;
                rep.kv(&format!("chain_{k}_residual_nonzero"), r.nonzero_coefficients());
            }
            let tables = propagate_jets(&sys, h, cfg.k_max, cfg.kappa)?;
            let mut agree = true;
            for t in &tables {
                let oracle = direct_table(h, t.k, t.kappa)?;
                let ok = t.agrees_with(&oracle);
                agree &= ok;
                rep.kv(&format!("table_{}_kappa", t.k), t.kappa);
                rep.kv(&format!("table_{}_checksum", t.k), format!("{:016x}", t.checksum()));
                rep.kv(&format!("table_{}_oracle", t.k), if ok { "agree" } else { "differ" });
            }
            Ok(if agree { 0 } else { 1 })
        }
        Command::Determine => {
            let maps = determination_family(h, cfg.family_size, cfg.seed)?;
            let ctx = DeterminationContext::Maps { maps };
            let nus: Vec<u32> = (0..=cfg.nu_max).collect();
            let b = determination_experiment(&ctx, &nus)?;
            rep.kv("family_size", cfg.family_size);
            rep.kv("trials", b.evidence.len());
            rep.kv("counterexamples", b.evidence.iter().filter(|t| t.failed()).count());
            rep.kv("nu", b.nu.map_or(format!("none-up-to({})", cfg.nu_max), |n| n.to_string()));
            Ok(if b.nu.is_some() { 0 } else { 4 })
        }
        Command::ArtinCheck => {
            let report = classify_map(h, cfg.bounds())?;
            let sys = default_fundamental_system(h, &report)?;
            let (r, g) = launch_system(&sys, h)?;
            match artin_hypothesis_check(&r, &g, h.order)? {
                ArtinOutcome::Holds { rows, det } => {
                    rep.kv("artin", "holds");
                    rep.kv("rows", join(&rows.iter().map(|r| r + 1).collect::<Vec<_>>()));
                    rep.kv("det_valuation", det.valuation().map_or("none".into(), |v| v.to_string()));
                }
                ArtinOutcome::Fails => rep.kv("artin", "fails"),
            }
            Ok(0)
        }
        _ => unreachable!("manifold command"),
    }
}
