//! String-id access to generators, oracles and reductions, with the finite
//! instance and trace formats used by the command line.
//!
//! An instance file names its problem and either a registered generator
//! (id, seed, size) or finite data: eventually periodic streams, an
//! automaton, a norm id. Generated files also record the finite data they
//! can, and loading checks it against the regenerated instance.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::banach::Functional;
use crate::hb::{build_hb_instance, diagonal_instance, hb_le_sep, planted_hb_oracle, sep_le_hb, Hb, HbInstance};
use crate::hyperspace::spaces::{interval_closed_noisy, jittered_unit_compact};
use crate::hyperspace::{path2_le_sel, planted_sel_oracle, sel_le_pathb, Sel, SelInstance};
use crate::kernel::{Seq, StreamSpec};
use crate::multivalued::{Oracle, Problem, ReduceError, Reduction, Verdict};
use crate::problems::ck::planted_c1_spread;
use crate::problems::range::random_planted_injective;
use crate::problems::sep::{evens_odds, hashed_bit, planted_finite, planted_random};
use crate::problems::tree::{auto_bounded_oracle, decidable_bounded_oracle, planted_bounded_oracle, planted_unique_path};
use crate::problems::{
    auto_path_oracle, bounded_ck_oracle, bounded_range_oracle, ck_value, decidable_path_oracle, planted_path_oracle,
    planted_sep_oracle, regular_path_oracle, sup_oracle, Automaton, BoundedTree, CharFn, CkInstance, Path2, PathB,
    RangeInstance, Sep, SepInstance, SupInstance, TreeChar,
};
use crate::reals::rational::{format, parse};
use crate::reals::{rat, CReal, RealLine, Rational};
use crate::reductions::{
    c1_le_range, c1_le_sup, path2_le_pathb, path2_le_sep, pathb_le_path2, range_le_c1, range_le_sup,
    sep_compose_default, sep_le_c1, sep_le_path2, sup_le_c1,
};

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown {kind} id: {id}")]
    Unknown { kind: &'static str, id: String },
    #[error("malformed instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

impl RegistryError {
    fn format(msg: impl Into<String>) -> Self {
        RegistryError::Format(msg.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRef {
    pub id: String,
    pub seed: u64,
    pub size: u64,
}

/// The on-disk instance. Field order is fixed, maps are sorted and absent
/// parts are omitted, so equal instances serialize to equal bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub problem: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorRef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub streams: BTreeMap<String, StreamSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<Automaton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<Value>,
}

impl InstanceFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, RegistryError> {
        let f: InstanceFile = serde_json::from_str(s).map_err(|e| RegistryError::format(e.to_string()))?;
        for (name, spec) in &f.streams {
            spec.validate().map_err(|e| RegistryError::format(format!("stream {name}: {e}")))?;
        }
        if let Some(a) = &f.automaton {
            a.validate().map_err(|e| RegistryError::format(e.to_string()))?;
        }
        Ok(f)
    }

    /// SHA-256 of the compact serialization, hex encoded.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("instance files serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthVerdict {
    pub depth: usize,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl DepthVerdict {
    fn new(depth: usize, v: &Verdict) -> Self {
        let detail = match v {
            Verdict::Reject(r) => Some(r.clone()),
            _ => None,
        };
        DepthVerdict { depth, verdict: v.label().into(), detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub reduction: String,
    pub oracle: String,
    pub instance_digest: String,
    pub depth: usize,
    pub fuel: u64,
    pub verdicts: Vec<DepthVerdict>,
    pub output_prefix: Value,
}

impl TraceRecord {
    /// The verdict at the full depth.
    pub fn final_verdict(&self) -> &str {
        self.verdicts.last().map_or("undetermined", |v| v.verdict.as_str())
    }
}

/// A loaded instance of one of the registered problems.
#[derive(Clone)]
pub enum Loaded {
    Range(RangeInstance),
    C1(CkInstance),
    Sup(SupInstance),
    Sep(SepInstance),
    Path2(TreeChar),
    PathB(BoundedTree),
    Sel(SelInstance<RealLine>),
    Hb(HbInstance),
}

impl Loaded {
    pub fn problem(&self) -> &'static str {
        match self {
            Loaded::Range(_) => "range",
            Loaded::C1(_) => "c1",
            Loaded::Sup(_) => "sup",
            Loaded::Sep(_) => "sep",
            Loaded::Path2(_) => "path2",
            Loaded::PathB(_) => "pathB",
            Loaded::Sel(_) => "sel",
            Loaded::Hb(_) => "hb",
        }
    }
}

pub struct Entry {
    pub id: &'static str,
    pub about: &'static str,
}

pub const PROBLEMS: &[Entry] = &[
    Entry { id: "range", about: "characteristic function of the range of an injective p" },
    Entry { id: "c1", about: "C_1(p)(n) = 0 iff p(<n, m>) != 0 for some m" },
    Entry { id: "sup", about: "supremum of a sequence in [0, 1]" },
    Entry { id: "sep", about: "a set separating the ranges of p and q" },
    Entry { id: "path2", about: "an infinite path through an infinite binary tree" },
    Entry { id: "pathB", about: "an infinite path through an infinite bounded tree" },
    Entry { id: "sel", about: "a point of a nonempty closed A inside a compact K of the real line" },
    Entry { id: "hb", about: "a norm-bounded extension of a partial linear functional" },
];

pub struct GeneratorEntry {
    pub id: &'static str,
    pub problem: &'static str,
    pub default_size: u64,
    pub about: &'static str,
}

pub const GENERATORS: &[GeneratorEntry] = &[
    GeneratorEntry { id: "range", problem: "range", default_size: 16, about: "injective p, range inside [0, size) planted" },
    GeneratorEntry { id: "c1", problem: "c1", default_size: 8, about: "C_1 instance with witnesses below size" },
    GeneratorEntry { id: "sup", problem: "sup", default_size: 0, about: "finite-support or increasing sequence with planted sup" },
    GeneratorEntry { id: "sep", problem: "sep", default_size: 16, about: "tables with finite ranges inside [0, size)" },
    GeneratorEntry { id: "evens_odds", problem: "sep", default_size: 0, about: "p the evens, q the odds" },
    GeneratorEntry { id: "sep_random", problem: "sep", default_size: 0, about: "infinite pseudo-random classes" },
    GeneratorEntry { id: "path2", problem: "path2", default_size: 4, about: "automaton forcing a periodic bit pattern of length size" },
    GeneratorEntry { id: "pathB", problem: "pathB", default_size: 4, about: "bounded tree with a unique periodic path, bound size" },
    GeneratorEntry { id: "sel", problem: "sel", default_size: 0, about: "subinterval of a jittered unit interval" },
    GeneratorEntry { id: "hb", problem: "hb", default_size: 0, about: "max-norm plane, A the diagonal, f(t, t) = t" },
    GeneratorEntry { id: "hb_block", problem: "hb", default_size: 16, about: "block space X(p, q) from a sep instance" },
];

pub struct OracleEntry {
    pub problem: &'static str,
    pub id: &'static str,
    pub about: &'static str,
}

pub const ORACLES: &[OracleEntry] = &[
    OracleEntry { problem: "c1", id: "bounded", about: "bounded search with the planted witness bound" },
    OracleEntry { problem: "range", id: "bounded", about: "bounded search with the planted witness bound" },
    OracleEntry { problem: "sup", id: "planted", about: "the planted supremum" },
    OracleEntry { problem: "sep", id: "planted", about: "the planted separator" },
    OracleEntry { problem: "path2", id: "regular", about: "leftmost path of an automaton tree" },
    OracleEntry { problem: "path2", id: "decidable", about: "leftmost path by decidable extendibility" },
    OracleEntry { problem: "path2", id: "planted", about: "the planted path" },
    OracleEntry { problem: "path2", id: "auto", about: "planted, regular or decidable, in that order" },
    OracleEntry { problem: "pathB", id: "planted", about: "the planted path" },
    OracleEntry { problem: "pathB", id: "decidable", about: "leftmost path by decidable extendibility" },
    OracleEntry { problem: "pathB", id: "auto", about: "planted or decidable" },
    OracleEntry { problem: "sel", id: "planted", about: "the planted point" },
    OracleEntry { problem: "hb", id: "planted", about: "the planted extension" },
    OracleEntry { problem: "hb", id: "analytic", about: "alias of planted: the closed-form extension of generated instances" },
];

pub struct ReductionEntry {
    pub id: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub oracles: &'static [&'static str],
    pub generator: &'static str,
}

pub const REDUCTIONS: &[ReductionEntry] = &[
    ReductionEntry { id: "range_le_c1", source: "range", target: "c1", oracles: &["bounded"], generator: "range" },
    ReductionEntry { id: "c1_le_range", source: "c1", target: "range", oracles: &["bounded"], generator: "c1" },
    ReductionEntry { id: "sup_le_c1", source: "sup", target: "c1", oracles: &["bounded"], generator: "sup" },
    ReductionEntry { id: "range_le_sup", source: "range", target: "sup", oracles: &["planted"], generator: "range" },
    ReductionEntry { id: "c1_le_sup", source: "c1", target: "sup", oracles: &["planted"], generator: "c1" },
    ReductionEntry { id: "sep_le_c1", source: "sep", target: "c1", oracles: &["bounded"], generator: "sep" },
    ReductionEntry {
        id: "sep_le_path2",
        source: "sep",
        target: "path2",
        oracles: &["auto", "regular", "decidable", "planted"],
        generator: "sep",
    },
    ReductionEntry { id: "path2_le_sep", source: "path2", target: "sep", oracles: &["planted"], generator: "path2" },
    ReductionEntry {
        id: "pathB_le_path2",
        source: "pathB",
        target: "path2",
        oracles: &["auto", "decidable", "planted"],
        generator: "pathB",
    },
    ReductionEntry {
        id: "path2_le_pathB",
        source: "path2",
        target: "pathB",
        oracles: &["auto", "decidable", "planted"],
        generator: "path2",
    },
    ReductionEntry { id: "sep_compose", source: "sep", target: "path2", oracles: &["planted", "auto"], generator: "sep" },
    ReductionEntry {
        id: "sel_le_pathB",
        source: "sel",
        target: "pathB",
        oracles: &["planted", "auto"],
        generator: "sel",
    },
    ReductionEntry { id: "path2_le_sel", source: "path2", target: "sel", oracles: &["planted"], generator: "path2" },
    ReductionEntry { id: "hb_le_sep", source: "hb", target: "sep", oracles: &["planted"], generator: "hb" },
    ReductionEntry {
        id: "sep_le_hb",
        source: "sep",
        target: "hb",
        oracles: &["analytic", "planted"],
        generator: "sep",
    },
];

pub fn reduction_entry(id: &str) -> Result<&'static ReductionEntry, RegistryError> {
    REDUCTIONS.iter().find(|r| r.id == id).ok_or_else(|| RegistryError::Unknown { kind: "reduction", id: id.into() })
}

pub fn generator_entry(id: &str) -> Result<&'static GeneratorEntry, RegistryError> {
    GENERATORS.iter().find(|g| g.id == id).ok_or_else(|| RegistryError::Unknown { kind: "generator", id: id.into() })
}

/// Depth to which recorded planted solutions are listed.
pub const PLANTED_DEPTH: u64 = 128;

struct Generated {
    loaded: Loaded,
    streams: BTreeMap<String, StreamSpec>,
    automaton: Option<Automaton>,
    norm: Option<String>,
}

impl Generated {
    fn bare(loaded: Loaded) -> Self {
        Generated { loaded, streams: BTreeMap::new(), automaton: None, norm: None }
    }

    fn with_specs(loaded: Loaded, inst: &SepInstance) -> Self {
        let mut g = Generated::bare(loaded);
        if let Some((p, q)) = &inst.planting.spec {
            g.streams.insert("p".into(), p.clone());
            g.streams.insert("q".into(), q.clone());
        }
        g
    }
}

fn random_pattern(seed: u64, len: usize) -> Vec<Option<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len.max(1))
        .map(|_| match rng.gen_range(0..3) {
            0 => None,
            b => Some((b - 1) as u8),
        })
        .collect()
}

fn materialize(g: &GeneratorRef) -> Result<Generated, RegistryError> {
    let (seed, size) = (g.seed, g.size);
    Ok(match g.id.as_str() {
        "range" => Generated::bare(Loaded::Range(random_planted_injective(seed, size.max(1)))),
        "c1" => {
            let r = Seq::from_fn(move |n| hashed_bit(seed, n));
            let spread = size.max(1);
            Generated::bare(Loaded::C1(planted_c1_spread(r, move |n| hashed_bit(seed ^ 0xc1, n) * (n % spread))))
        }
        "sup" => Generated::bare(Loaded::Sup(crate::problems::sup::random_planted(seed))),
        "sep" => {
            let inst = planted_finite(seed, size.max(2));
            Generated::with_specs(Loaded::Sep(inst.clone()), &inst)
        }
        "evens_odds" => {
            let inst = evens_odds();
            Generated::with_specs(Loaded::Sep(inst.clone()), &inst)
        }
        "sep_random" => Generated::bare(Loaded::Sep(planted_random(seed))),
        "path2" => {
            let a = Automaton::forcing_periodic(&random_pattern(seed, size as usize));
            let path = a.leftmost_path().map_err(|e| RegistryError::format(e.to_string()))?;
            let mut out = Generated::bare(Loaded::Path2(TreeChar::from_automaton(a.clone()).with_planted(path)));
            out.automaton = Some(a);
            out
        }
        "pathB" => {
            let bound = size.max(2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let period: Vec<u64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..bound)).collect();
            Generated::bare(Loaded::PathB(planted_unique_path(period, bound)))
        }
        "sel" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lo = rat(rng.gen_range(1..24), 64);
            let hi = &lo + rat(rng.gen_range(0..24), 64);
            let mid = (&lo + &hi) / rat(2, 1);
            let inst = SelInstance::new(RealLine, jittered_unit_compact(seed), interval_closed_noisy(lo, hi, seed))
                .with_planted(CReal::exact(mid));
            Generated::bare(Loaded::Sel(inst))
        }
        "hb" => {
            let t = rat((seed % 17) as i64, 16);
            let mut out = Generated::bare(Loaded::Hb(diagonal_instance(vec![t.clone(), rat(1, 1) - t])));
            out.norm = Some("max2".into());
            out
        }
        "hb_block" => {
            let inst = planted_finite(seed, size.max(2));
            let mut out = Generated::with_specs(Loaded::Hb(build_hb_instance(&inst)), &inst);
            out.norm = Some("block".into());
            out
        }
        other => return Err(RegistryError::Unknown { kind: "generator", id: other.into() }),
    })
}

/// gen: a planted instance with its solution recorded, deterministic in seed.
pub fn generate(id: &str, seed: u64, size: Option<u64>) -> Result<InstanceFile, RegistryError> {
    let entry = generator_entry(id)?;
    let g = GeneratorRef { id: id.into(), seed, size: size.unwrap_or(entry.default_size) };
    let out = materialize(&g)?;
    Ok(InstanceFile {
        problem: entry.problem.into(),
        generator: Some(g),
        streams: out.streams,
        automaton: out.automaton,
        norm: out.norm,
        planted: planted_solution(&out.loaded),
    })
}

fn stream(f: &InstanceFile, name: &str) -> Result<StreamSpec, RegistryError> {
    f.streams.get(name).cloned().ok_or_else(|| RegistryError::format(format!("missing stream {name}")))
}

fn sep_from_streams(f: &InstanceFile) -> Result<SepInstance, RegistryError> {
    let inst = SepInstance::from_specs(stream(f, "p")?, stream(f, "q")?);
    Ok(match f.planted.as_ref().map(parse_prefix_u64).transpose()? {
        Some(prefix) => inst.with_separator(CharFn::from_seq(&prefix_seq(prefix))),
        None => inst,
    })
}

/// Builds the instance a file describes. Generated files are rebuilt from
/// their generator and must agree with their recorded finite data.
pub fn load(f: &InstanceFile) -> Result<Loaded, RegistryError> {
    if let Some(g) = &f.generator {
        let out = materialize(g)?;
        if out.loaded.problem() != f.problem {
            return Err(RegistryError::format(format!("generator {} makes {} instances, file says {}", g.id, out.loaded.problem(), f.problem)));
        }
        if out.streams != f.streams || out.automaton != f.automaton || out.norm != f.norm {
            return Err(RegistryError::format("recorded streams, automaton or norm differ from the generator's"));
        }
        return Ok(out.loaded);
    }
    Ok(match (f.problem.as_str(), f.norm.as_deref()) {
        ("sep", _) => Loaded::Sep(sep_from_streams(f)?),
        ("range", _) => {
            let p = stream(f, "p")?;
            let p2 = p.clone();
            Loaded::Range(RangeInstance::new(p.build()).with_bound(move |n| p2.first_index_of(n).map_or(0, |m| m + 1)))
        }
        ("c1", _) => Loaded::C1(CkInstance::new(stream(f, "p")?.build(), 1)),
        ("path2", _) => {
            let a = f.automaton.clone().ok_or_else(|| RegistryError::format("path2 files need an automaton"))?;
            Loaded::Path2(TreeChar::from_automaton(a))
        }
        ("hb", Some("block")) => Loaded::Hb(build_hb_instance(&sep_from_streams(f)?)),
        ("hb", Some("max2")) => {
            let planted = f.planted.as_ref().ok_or_else(|| RegistryError::format("max2 files need planted weights"))?;
            let w = parse_weights(planted)?;
            Loaded::Hb(diagonal_instance(w))
        }
        (p, _) => return Err(RegistryError::format(format!("{p} instances are only described through a generator"))),
    })
}

fn prefix_seq(prefix: Vec<u64>) -> Seq {
    let prefix = Arc::new(prefix);
    Seq::from_fn(move |n| prefix.get(n as usize).copied().unwrap_or(0))
}

fn parse_prefix_u64(v: &Value) -> Result<Vec<u64>, RegistryError> {
    v.get("prefix")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<u64>>>())
        .ok_or_else(|| RegistryError::format("solution needs a \"prefix\" list of naturals"))
}

fn parse_prefix_big(v: &Value) -> Result<Vec<BigUint>, RegistryError> {
    v.get("prefix")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|x| x.as_str().and_then(|s| s.parse().ok())).collect::<Option<Vec<BigUint>>>())
        .ok_or_else(|| RegistryError::format("solution needs a \"prefix\" list of decimal strings"))
}

fn parse_value(v: &Value) -> Result<Rational, RegistryError> {
    let s = v.get("value").and_then(Value::as_str).ok_or_else(|| RegistryError::format("solution needs a \"value\" string"))?;
    parse(s).map_err(|e| RegistryError::format(e.to_string()))
}

fn parse_weights(v: &Value) -> Result<Vec<Rational>, RegistryError> {
    v.get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| RegistryError::format("solution needs a \"weights\" list"))?
        .iter()
        .map(|x| x.as_str().ok_or_else(|| RegistryError::format("weights are rational strings")).and_then(|s| parse(s).map_err(|e| RegistryError::format(e.to_string()))))
        .collect()
}

/// Lipschitz shift assumed for functionals read from weight lists.
const WEIGHTS_LIP: u32 = 4;

/// The planted solution in the file format: prefixes for sequences and
/// sets, a rational for reals, weights for functionals.
fn planted_solution(x: &Loaded) -> Option<Value> {
    let n = PLANTED_DEPTH;
    Some(match x {
        Loaded::Range(r) => json!({ "prefix": (0..n).map(|i| r.planted_value(i).unwrap_or(0)).collect::<Vec<_>>() }),
        Loaded::C1(c) => {
            let w = c.witness_bound.clone()?;
            json!({ "prefix": (0..n).map(|i| ck_value(&c.p, i, c.k, w(i))).collect::<Vec<_>>() })
        }
        Loaded::Sup(s) => json!({ "value": format(&exact_or_approx(&s.planting.as_ref()?.sup)) }),
        Loaded::Sep(s) => {
            let r = s.planting.separator.as_ref()?;
            json!({ "prefix": (0..separator_len(s)).map(|v| r.at(&v)).collect::<Vec<_>>() })
        }
        Loaded::Path2(t) => json!({ "prefix": t.planted.as_ref()?.prefix(n as usize) }),
        Loaded::PathB(b) => {
            json!({ "prefix": b.planted.as_ref()?.prefix(n as usize).iter().map(|v| v.to_string()).collect::<Vec<_>>() })
        }
        Loaded::Sel(s) => json!({ "value": format(&exact_or_approx(s.planted.as_ref()?)) }),
        Loaded::Hb(h) => {
            let g = h.planted.as_ref()?;
            json!({ "weights": weights_of(g, functional_width(h)).iter().map(format).collect::<Vec<_>>() })
        }
    })
}

fn exact_or_approx(x: &CReal) -> Rational {
    x.as_exact().cloned().unwrap_or_else(|| x.approx(32))
}

/// Values r must cover to decide the first PLANTED_DEPTH constraints.
fn separator_len(s: &SepInstance) -> u64 {
    (0..PLANTED_DEPTH).map(|i| s.p.get(i).max(s.q.get(i))).max().unwrap_or(0) + 1
}

/// Generators a functional is listed on.
fn functional_width(h: &HbInstance) -> usize {
    match h.f.space.norm.name().as_str() {
        "block" => 2 * PLANTED_DEPTH as usize,
        _ => 2,
    }
}

fn weights_of(g: &Functional, n: usize) -> Vec<Rational> {
    (0..n).map(|i| exact_or_approx(&g.at_combo(&crate::banach::Combo::unit(i)))).collect()
}

/// Reads a solution value for the loaded instance. Prefixes extend by 0.
fn parse_solution_and_verify(x: &Loaded, v: &Value, depth: usize) -> Result<Verdict, RegistryError> {
    Ok(match x {
        Loaded::Range(r) => crate::problems::Range.verify(r, &prefix_seq(parse_prefix_u64(v)?), depth),
        Loaded::C1(c) => crate::problems::Ck { k: c.k }.verify(c, &prefix_seq(parse_prefix_u64(v)?), depth),
        Loaded::Sup(s) => crate::problems::Sup.verify(s, &CReal::exact(parse_value(v)?), depth),
        Loaded::Sep(s) => Sep::<u64>::default().verify(s, &CharFn::from_seq(&prefix_seq(parse_prefix_u64(v)?)), depth),
        Loaded::Path2(t) => Path2.verify(t, &prefix_seq(parse_prefix_u64(v)?), depth),
        Loaded::PathB(b) => {
            let p = Arc::new(parse_prefix_big(v)?);
            PathB.verify(b, &Seq::from_fn(move |n| p.get(n as usize).cloned().unwrap_or_default()), depth)
        }
        Loaded::Sel(s) => Sel::<RealLine>::default().verify(s, &CReal::exact(parse_value(v)?), depth),
        Loaded::Hb(h) => Hb.verify(h, &Functional::linear("weights", parse_weights(v)?, WEIGHTS_LIP), depth),
    })
}

/// verify: checks `solution`, or the file's planted solution, at `depth`.
pub fn verify_file(f: &InstanceFile, solution: Option<&Value>, depth: usize) -> Result<Verdict, RegistryError> {
    let x = load(f)?;
    let v = solution.or(f.planted.as_ref()).ok_or_else(|| RegistryError::format("no solution given and none planted"))?;
    parse_solution_and_verify(&x, v, depth)
}

/// Solutions rendered for traces.
pub trait Render {
    fn render(&self, n: usize) -> Value;
}

/// Entries kept in trace output prefixes.
const OUTPUT_PREFIX: usize = 32;

/// Bits to which real outputs are printed in traces.
const REAL_PRECISION: usize = 16;

impl Render for Seq {
    fn render(&self, n: usize) -> Value {
        json!(self.prefix(n.min(OUTPUT_PREFIX)))
    }
}

impl Render for Seq<BigUint> {
    fn render(&self, n: usize) -> Value {
        json!(self.prefix(n.min(OUTPUT_PREFIX)).iter().map(|v| v.to_string()).collect::<Vec<_>>())
    }
}

impl Render for CharFn<u64> {
    fn render(&self, n: usize) -> Value {
        json!((0..n.min(OUTPUT_PREFIX) as u64).map(|v| self.at(&v)).collect::<Vec<_>>())
    }
}

impl Render for CReal {
    fn render(&self, n: usize) -> Value {
        json!(format(&self.approx(n.min(REAL_PRECISION) as u32)))
    }
}

impl Render for Functional {
    fn render(&self, n: usize) -> Value {
        let k = n.min(REAL_PRECISION) as u32;
        json!((0..4).map(|i| format(&self.at_combo(&crate::banach::Combo::unit(i)).approx(k))).collect::<Vec<_>>())
    }
}

impl<A: Render, B: Render> Render for (A, B) {
    fn render(&self, n: usize) -> Value {
        json!([self.0.render(n), self.1.render(n)])
    }
}

/// Verification depths reported in a trace: powers of two below `depth`,
/// then `depth`.
pub fn checkpoints(depth: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..).map(|i| 1usize << i).take_while(|&d| d < depth).collect();
    v.push(depth);
    v
}

struct Outcome {
    verdicts: Vec<DepthVerdict>,
    output: Value,
}

fn execute<F, G>(red: &Reduction<F, G>, x: &F::Instance, oracle: &Oracle<G>, depth: usize, fuel: u64) -> Result<Outcome, ReduceError>
where
    F: Problem,
    G: Problem,
    F::Solution: Render,
{
    if let Verdict::Reject(r) = red.source.domain_check(x, fuel) {
        return Err(ReduceError::Domain(r));
    }
    let y = red.solve(x, oracle)?;
    let verdicts = checkpoints(depth).into_iter().map(|d| DepthVerdict::new(d, &red.source.verify(x, &y, d))).collect();
    Ok(Outcome { verdicts, output: y.render(depth) })
}

fn unknown_oracle(problem: &str, id: &str) -> RegistryError {
    RegistryError::Unknown { kind: "oracle", id: format!("{id} (for {problem})") }
}

fn path2_oracle(id: &str) -> Result<Oracle<Path2>, RegistryError> {
    match id {
        "regular" => Ok(regular_path_oracle()),
        "decidable" => Ok(decidable_path_oracle()),
        "planted" => Ok(planted_path_oracle()),
        "auto" => Ok(auto_path_oracle()),
        _ => Err(unknown_oracle("path2", id)),
    }
}

fn pathb_oracle(id: &str) -> Result<Oracle<PathB>, RegistryError> {
    match id {
        "planted" => Ok(planted_bounded_oracle()),
        "decidable" => Ok(decidable_bounded_oracle()),
        "auto" => Ok(auto_bounded_oracle()),
        _ => Err(unknown_oracle("pathB", id)),
    }
}

fn only<O>(problem: &str, id: &str, ids: &[&str], o: impl FnOnce() -> O) -> Result<O, RegistryError> {
    if ids.contains(&id) { Ok(o()) } else { Err(unknown_oracle(problem, id)) }
}

fn mismatch(entry: &ReductionEntry, x: &Loaded) -> RegistryError {
    RegistryError::Reduce(ReduceError::Mismatch(format!("{} expects a {} instance, got {}", entry.id, entry.source, x.problem())))
}

/// run: the reduction applied to the instance through the oracle, verified
/// at each checkpoint depth.
pub fn run(id: &str, f: &InstanceFile, oracle: Option<&str>, depth: usize, fuel: u64) -> Result<TraceRecord, RegistryError> {
    let entry = reduction_entry(id)?;
    let o = oracle.unwrap_or(entry.oracles[0]);
    let x = load(f)?;
    let out = run_loaded(entry, &x, o, depth, fuel)?;
    Ok(TraceRecord {
        reduction: id.into(),
        oracle: o.into(),
        instance_digest: f.digest(),
        depth,
        fuel,
        verdicts: out.verdicts,
        output_prefix: out.output,
    })
}

fn run_loaded(entry: &ReductionEntry, x: &Loaded, o: &str, depth: usize, fuel: u64) -> Result<Outcome, RegistryError> {
    let bounded_ck = || bounded_ck_oracle(1);
    Ok(match (entry.id, x) {
        ("range_le_c1", Loaded::Range(x)) => execute(&range_le_c1(), x, &only("c1", o, &["bounded"], bounded_ck)?, depth, fuel)?,
        ("c1_le_range", Loaded::C1(x)) => execute(&c1_le_range(), x, &only("range", o, &["bounded"], bounded_range_oracle)?, depth, fuel)?,
        ("sup_le_c1", Loaded::Sup(x)) => execute(&sup_le_c1(), x, &only("c1", o, &["bounded"], bounded_ck)?, depth, fuel)?,
        ("range_le_sup", Loaded::Range(x)) => execute(&range_le_sup(), x, &only("sup", o, &["planted"], sup_oracle)?, depth, fuel)?,
        ("c1_le_sup", Loaded::C1(x)) => execute(&c1_le_sup(), x, &only("sup", o, &["planted"], sup_oracle)?, depth, fuel)?,
        ("sep_le_c1", Loaded::Sep(x)) => execute(&sep_le_c1(), x, &only("c1", o, &["bounded"], bounded_ck)?, depth, fuel)?,
        ("sep_le_path2", Loaded::Sep(x)) => execute(&sep_le_path2(), x, &path2_oracle(o)?, depth, fuel)?,
        ("path2_le_sep", Loaded::Path2(x)) => {
            execute(&path2_le_sep(), x, &only("sep", o, &["planted"], planted_sep_oracle::<BigUint>)?, depth, fuel)?
        }
        ("pathB_le_path2", Loaded::PathB(x)) => execute(&pathb_le_path2(), x, &path2_oracle(o)?, depth, fuel)?,
        ("path2_le_pathB", Loaded::Path2(x)) => execute(&path2_le_pathb(), x, &pathb_oracle(o)?, depth, fuel)?,
        ("sep_compose", Loaded::Sep(x)) => execute(&sep_compose_default(), x, &path2_oracle(o)?, depth, fuel)?,
        ("sel_le_pathB", Loaded::Sel(x)) => execute(&sel_le_pathb::<RealLine>(), x, &pathb_oracle(o)?, depth, fuel)?,
        ("path2_le_sel", Loaded::Path2(x)) => {
            let oracle = only("sel", o, &["planted"], planted_sel_oracle::<crate::reals::CantorSpace>)?;
            execute(&path2_le_sel(), x, &oracle, depth, fuel)?
        }
        ("hb_le_sep", Loaded::Hb(x)) => {
            execute(&hb_le_sep(), x, &only("sep", o, &["planted"], planted_sep_oracle::<BigUint>)?, depth, fuel)?
        }
        ("sep_le_hb", Loaded::Sep(x)) => {
            execute(&sep_le_hb(), x, &only("hb", o, &["planted", "analytic"], planted_hb_oracle)?, depth, fuel)?
        }
        _ => return Err(mismatch(entry, x)),
    })
}

/// list: every registered id as JSON.
pub fn list() -> Value {
    json!({
        "problems": PROBLEMS.iter().map(|e| json!({ "id": e.id, "about": e.about })).collect::<Vec<_>>(),
        "generators": GENERATORS.iter().map(|g| json!({
            "id": g.id, "problem": g.problem, "default_size": g.default_size, "about": g.about
        })).collect::<Vec<_>>(),
        "oracles": ORACLES.iter().map(|o| json!({ "problem": o.problem, "id": o.id, "about": o.about })).collect::<Vec<_>>(),
        "reductions": REDUCTIONS.iter().map(|r| json!({
            "id": r.id, "source": r.source, "target": r.target, "oracles": r.oracles, "generator": r.generator
        })).collect::<Vec<_>>(),
    })
}
