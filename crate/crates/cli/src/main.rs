//! `zw`: command-line access to located words, Schreier families, the
//! rational codec and witness search.

use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use thiserror::Error;

use zw_core::families::{self, Pool};
use zw_core::rationals;
use zw_core::schreier;
use zw_core::search::{self, Coloring, SearchReport, SearchWindow, Semigroup};
use zw_core::words::{self, TupleMode};
use zw_core::{ExactRational, FiniteSet, LocatedWord, OrderlyTuple, Ordinal, Profile, WordFamily};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] zw_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

macro_rules! domain_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.into())
            }
        })*
    };
}

domain_from!(
    zw_core::OrdinalError,
    zw_core::SchreierError,
    zw_core::WordError,
    zw_core::FamilyError,
    zw_core::RationalError,
    zw_core::SearchError
);

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "zw", version, about = "Located words, Schreier families, rational codec and witness search")]
struct Cli {
    /// Wrap output fields in a JSON object.
    #[arg(long, global = true)]
    json: bool,

    /// Enumeration caps, e.g. `candidates=100000,grid=4096,schreier=16`.
    #[arg(long, global = true, env = "ZW_CAPS", value_name = "SPEC")]
    caps: Option<String>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Word algebra.
    #[command(subcommand)]
    Word(WordCmd),
    /// Schreier families of finite sets.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Ordinals in Cantor normal form.
    #[command(subcommand)]
    Ordinal(OrdinalCmd),
    /// Families of word tuples.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// The rational codec.
    #[command(subcommand)]
    Rat(RatCmd),
    /// Witness search and the semigroup layer.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Args, Clone)]
struct ProfileArg {
    /// Domination profile: `abs`, `abs+c`, `const:c` or `table:...`.
    #[arg(long, default_value = "abs")]
    profile: String,
}

impl ProfileArg {
    fn get(&self) -> CliResult<Profile> {
        Ok(self.profile.parse()?)
    }
}

#[derive(Subcommand)]
enum WordCmd {
    /// Validate a word and report its properties.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Star product of two or more words with disjoint domains.
    Concat {
        #[arg(long = "word", action = ArgAction::Append, required = true, allow_hyphen_values = true)]
        words: Vec<String>,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Apply `T_(p,q)`.
    Subst {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Max-merge of two words.
    Merge {
        #[arg(long = "word", action = ArgAction::Append, required = true, allow_hyphen_values = true)]
        words: Vec<String>,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Extracted variable words of a tuple (`--constants` for constant ones).
    Ev {
        /// `;`-separated tuple of variable words.
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, default_value_t = 1)]
        first_index: u64,
        #[arg(long)]
        constants: bool,
        #[command(flatten)]
        profile: ProfileArg,
    },
}

#[derive(Subcommand)]
enum SchreierCmd {
    /// Membership of a set in `A_xi`.
    Member {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        set: String,
    },
    /// All members of `A_xi` inside `{1..n}`.
    Enum {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        n: u64,
    },
    /// Canonical block decomposition of an increasing sequence.
    Canon {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        seq: String,
    },
    /// Compare `A_xi` restricted to minimum `n` with `A_{xi_n}` inside `{1..N}`.
    CheckRestriction {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        ground: u64,
    },
}

#[derive(Subcommand)]
enum OrdinalCmd {
    /// Print `<`, `=` or `>`.
    Cmp { a: String, b: String },
    /// The `n`-th term of the fundamental sequence.
    Fund {
        xi: String,
        #[arg(long)]
        n: u64,
    },
    /// The `n`-th predecessor ordinal `xi_n`.
    Pred {
        xi: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureKind {
    Tree,
    Hereditary,
    LargestHereditary,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Tree or hereditary closure of a family.
    Closure {
        /// Family file, one `;`-joined tuple per line (`-` for stdin).
        #[arg(long)]
        family: String,
        /// Pool file, one word per line. Required for hereditary closures.
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, value_enum, default_value = "hereditary")]
        kind: ClosureKind,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Strong Cantor-Bendixson index of a hereditary family, or of the
    /// set family `A_m` closed downward over `{1..N}` with `--set-m`.
    Cbindex {
        #[arg(long, required_unless_present = "set_m")]
        family: Option<String>,
        #[arg(long, required_unless_present = "set_m")]
        pool: Option<String>,
        #[arg(long, default_value_t = families::DEFAULT_TAU)]
        tau: usize,
        #[arg(long, conflicts_with_all = ["family", "pool"])]
        set_m: Option<u64>,
        #[arg(long, default_value_t = 12)]
        ground: u64,
        #[command(flatten)]
        profile: ProfileArg,
    },
}

#[derive(Subcommand)]
enum RatCmd {
    /// The constant word whose value is `q`.
    Encode {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// The rational value of a constant word.
    Decode {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Whether the encoding of `b` surrounds the encoding of `a`.
    Precedes {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Membership of an increasing tuple of rationals in the `xi`-th family.
    Qxi {
        #[arg(long)]
        xi: String,
        #[arg(required = true, allow_hyphen_values = true)]
        qs: Vec<String>,
    },
}

#[derive(Args)]
struct ColoringArgs {
    /// Coloring file (`word<TAB>color` lines or `seed:<u64>:<r>`), `-` for stdin.
    #[arg(long, conflicts_with = "seed")]
    coloring: Option<String>,
    /// Seed of the hash coloring.
    #[arg(long, requires = "arity")]
    seed: Option<u64>,
    /// Number of colors of the hash coloring.
    #[arg(long)]
    arity: Option<u32>,
}

impl ColoringArgs {
    fn get(&self) -> CliResult<Coloring> {
        match (&self.coloring, self.seed, self.arity) {
            (Some(path), _, _) => Ok(Coloring::parse(&read_input(path)?)?),
            (None, Some(seed), Some(r)) => Ok(Coloring::hashed(seed, r)?),
            _ => Err(CliError::Usage("give --coloring or --seed with --arity".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemigroupKind {
    /// Integers under addition with `y(l,n) = l*n`.
    Product,
    /// Words over generators `(l,n)` under concatenation.
    Concat,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Monochromatic substitution grid for an increasing tuple of variable words.
    Hj {
        #[command(flatten)]
        coloring: ColoringArgs,
        /// Bounds `n_1,…,n_m`; their count is the tuple length.
        #[arg(long, value_delimiter = ',', required = true)]
        bounds: Vec<u64>,
        /// Total domain size of the tuple.
        #[arg(long)]
        n: usize,
        /// Window radius `P`.
        #[arg(long)]
        radius: i64,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Monochromatic `xi`-family slice of extracted constants.
    Xi {
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long)]
        xi: String,
        /// Tuple length.
        #[arg(long)]
        l: usize,
        /// Total length of the colored tuples.
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        radius: i64,
        #[command(flatten)]
        profile: ProfileArg,
    },
    /// Finite sums of rationals; with `--zs`, the two-sided variant.
    Fs {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        xs: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        zs: Option<Vec<String>>,
    },
    /// `psi(w)` in a built-in semigroup.
    Psi {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value = "product")]
        semigroup: SemigroupKind,
        #[command(flatten)]
        profile: ProfileArg,
    },
}

/// Output as plain lines and as a JSON object with the same fields.
struct Out {
    text: Vec<String>,
    json: Map<String, Value>,
}

impl Out {
    fn value(key: &str, v: impl Into<Value> + ToString + Clone) -> Self {
        let mut json = Map::new();
        json.insert(key.into(), v.clone().into());
        Out { text: vec![v.to_string()], json }
    }

    fn list(key: &str, items: Vec<String>) -> Self {
        let mut json = Map::new();
        json.insert(key.into(), Value::from(items.clone()));
        Out { text: items, json }
    }

    fn fields(items: Vec<(String, Value)>) -> Self {
        let text = items
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect();
        Out { text, json: items.into_iter().collect() }
    }

    fn print(&self, as_json: bool) {
        if as_json {
            println!("{}", Value::Object(self.json.clone()));
        } else {
            for line in &self.text {
                println!("{line}");
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Caps {
    candidates: u128,
    grid: u128,
    schreier: u64,
}

impl Caps {
    fn parse(spec: Option<&str>) -> CliResult<Self> {
        let mut caps = Caps { candidates: 5_000_000, grid: 1 << 20, schreier: schreier::DEFAULT_CAP };
        let Some(spec) = spec else {
            return Ok(caps);
        };
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || CliError::Usage(format!("bad cap {item:?}"));
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "candidates" => caps.candidates = v.trim().parse().map_err(|_| bad())?,
                "grid" => caps.grid = v.trim().parse().map_err(|_| bad())?,
                "schreier" => caps.schreier = v.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Ok(caps)
    }

    fn window(&self, radius: i64, profile: Profile) -> CliResult<SearchWindow> {
        let mut w = SearchWindow::new(radius, profile)?;
        w.max_candidates = self.candidates;
        w.max_grid = self.grid;
        Ok(w)
    }
}

fn read_input(path: &str) -> CliResult<String> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn ordinal(s: &str) -> CliResult<Ordinal> {
    Ok(s.parse()?)
}

fn rational(s: &str) -> CliResult<ExactRational> {
    Ok(s.parse()?)
}

fn word(s: &str, profile: &Profile) -> CliResult<LocatedWord> {
    Ok(LocatedWord::parse(s, profile)?)
}

fn pool_from(path: &str, profile: &Profile) -> CliResult<Pool> {
    let text = read_input(path)?;
    let words = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| word(l, profile))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Pool::new(words))
}

fn run_word(cmd: WordCmd) -> CliResult<Out> {
    match cmd {
        WordCmd::Check { word: w, profile } => {
            let w = word(&w, &profile.get()?)?;
            Ok(Out::fields(vec![
                ("word".into(), w.to_string().into()),
                ("length".into(), w.len().into()),
                ("constant".into(), w.is_constant().into()),
                ("variable".into(), w.is_variable().into()),
                ("two_sided".into(), w.is_two_sided().into()),
                ("n_supported".into(), w.is_n_supported().into()),
            ]))
        }
        WordCmd::Concat { words: ws, profile } => {
            let p = profile.get()?;
            let ws = ws.iter().map(|s| word(s, &p)).collect::<CliResult<Vec<_>>>()?;
            let out = words::concat_all(&ws)?.expect("at least one word");
            Ok(Out::value("word", out.to_string()))
        }
        WordCmd::Subst { p, q, word: w, profile } => {
            let w = word(&w, &profile.get()?)?;
            Ok(Out::value("word", words::substitute(&w, p, q)?.to_string()))
        }
        WordCmd::Merge { words: ws, profile } => {
            let p = profile.get()?;
            let ws = ws.iter().map(|s| word(s, &p)).collect::<CliResult<Vec<_>>>()?;
            let mut it = ws.iter();
            let first = it.next().expect("required").clone();
            let out = it.try_fold(first, |acc, w| words::merge(&acc, w))?;
            Ok(Out::value("word", out.to_string()))
        }
        WordCmd::Ev { tuple, first_index, constants, profile } => {
            let t = OrderlyTuple::parse(&tuple, &profile.get()?, TupleMode::Surround)?;
            let ev = words::extracted_sets(t.words(), first_index)?;
            let set = if constants { ev.constants } else { ev.variables };
            Ok(Out::list("words", set.iter().map(ToString::to_string).collect()))
        }
    }
}

fn run_schreier(cmd: SchreierCmd, caps: Caps) -> CliResult<Out> {
    match cmd {
        SchreierCmd::Member { xi, set } => {
            let s: FiniteSet = set.parse()?;
            Ok(Out::value("member", schreier::is_member(s.as_slice(), &ordinal(&xi)?)))
        }
        SchreierCmd::Enum { xi, n } => {
            let sets = schreier::enumerate(&ordinal(&xi)?, n, caps.schreier)?;
            Ok(Out::list("sets", sets.iter().map(ToString::to_string).collect()))
        }
        SchreierCmd::Canon { xi, seq } => {
            let s: FiniteSet = seq.parse()?;
            let d = schreier::canonical_decompose(s.as_slice(), &ordinal(&xi)?);
            Ok(Out::fields(vec![
                ("decomposition".into(), d.to_string().into()),
                ("blocks".into(), Value::from(d.blocks.iter().map(ToString::to_string).collect::<Vec<_>>())),
                ("remainder".into(), d.remainder.as_ref().map_or(Value::Null, |r| r.to_string().into())),
            ]))
        }
        SchreierCmd::CheckRestriction { xi, n, ground } => {
            let ok = schreier::restriction_check(&ordinal(&xi)?, n, ground, caps.schreier)?;
            Ok(Out::value("holds", ok))
        }
    }
}

fn run_ordinal(cmd: OrdinalCmd) -> CliResult<Out> {
    match cmd {
        OrdinalCmd::Cmp { a, b } => {
            let sym = match ordinal(&a)?.cmp(&ordinal(&b)?) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            Ok(Out::value("order", sym))
        }
        OrdinalCmd::Fund { xi, n } => {
            Ok(Out::value("ordinal", ordinal(&xi)?.fundamental_sequence(n)?.to_string()))
        }
        OrdinalCmd::Pred { xi, n } => {
            Ok(Out::value("ordinal", ordinal(&xi)?.predecessor_sequence(n)?.to_string()))
        }
    }
}

fn run_family(cmd: FamilyCmd) -> CliResult<Out> {
    match cmd {
        FamilyCmd::Closure { family, pool, kind, profile } => {
            let p = profile.get()?;
            let f = WordFamily::parse(&read_input(&family)?, &p)?;
            let pool = || -> CliResult<Pool> {
                let path = pool
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("this closure needs --pool".into()))?;
                pool_from(path, &p)
            };
            let out = match kind {
                ClosureKind::Tree => f.tree_closure(),
                ClosureKind::Hereditary => families::hereditary_closure(&f, &pool()?)?,
                ClosureKind::LargestHereditary => families::largest_hereditary(&f, &pool()?)?,
            };
            Ok(Out::list("tuples", out.tuples().iter().map(|t| words::tuple_key(t)).collect()))
        }
        FamilyCmd::Cbindex { family, pool, tau, set_m, ground, profile } => {
            let index = match set_m {
                Some(m) => families::set_family_cb_index(m, ground, tau)?,
                None => {
                    let p = profile.get()?;
                    let f = WordFamily::parse(&read_input(family.as_deref().expect("required"))?, &p)?;
                    let pool = pool_from(pool.as_deref().expect("required"), &p)?;
                    families::cb_index(&f, &pool, tau)?
                }
            };
            Ok(Out::value("index", index))
        }
    }
}

fn run_rat(cmd: RatCmd) -> CliResult<Out> {
    match cmd {
        RatCmd::Encode { q } => Ok(Out::value("word", rationals::encode(&rational(&q)?)?.to_string())),
        RatCmd::Decode { word: w } => {
            Ok(Out::value("value", rationals::decode(&word(&w, &Profile::Abs)?)?.to_string()))
        }
        RatCmd::Precedes { a, b } => {
            Ok(Out::value("precedes", rationals::rational_precedes(&rational(&a)?, &rational(&b)?)?))
        }
        RatCmd::Qxi { xi, qs } => {
            let qs = qs.iter().map(|q| rational(q)).collect::<CliResult<Vec<_>>>()?;
            Ok(Out::value("member", rationals::q_xi_member(&qs, &ordinal(&xi)?)?))
        }
    }
}

fn report_out(r: &SearchReport, extra: Vec<(String, Value)>) -> Out {
    eprintln!("elapsed: {:.3}s", r.elapsed.as_secs_f64());
    let mut fields: Vec<(String, Value)> = r
        .data_lines()
        .into_iter()
        .map(|(k, v)| (k, Value::from(v)))
        .collect();
    fields.extend(extra);
    Out::fields(fields)
}

fn run_search(cmd: SearchCmd, caps: Caps) -> CliResult<Out> {
    match cmd {
        SearchCmd::Hj { coloring, bounds, n, radius, profile } => {
            let c = coloring.get()?;
            let window = caps.window(radius, profile.get()?)?;
            let r = search::hj_witness_search(&c, bounds.len(), &bounds, n, &window)?;
            let verified = match &r.witness {
                Some(t) => search::verify_witness(t, &c, &bounds, &window.profile)?.passed(),
                None => false,
            };
            Ok(report_out(&r, vec![("verified".into(), verified.into())]))
        }
        SearchCmd::Xi { coloring, xi, l, n0, radius, profile } => {
            let c = coloring.get()?;
            let xi = ordinal(&xi)?;
            let window = caps.window(radius, profile.get()?)?;
            let r = search::xi_witness_search(&c, &xi, l, n0, &window)?;
            let verified = match &r.witness {
                Some(t) => search::verify_xi_witness(t, &c, &xi, n0)?.passed(),
                None => false,
            };
            Ok(report_out(
                &r,
                vec![
                    ("vacuous_skipped".into(), r.vacuous_skipped.into()),
                    ("verified".into(), verified.into()),
                ],
            ))
        }
        SearchCmd::Fs { xs, zs } => {
            let sg = Semigroup::new(|a: &ExactRational, b: &ExactRational| a + b, |_, _| ExactRational::zero(), true);
            let xs = xs.iter().map(|q| rational(q)).collect::<CliResult<Vec<_>>>()?;
            let set: BTreeSet<ExactRational> = match zs {
                None => search::fs_enumerate(&xs, &sg)?,
                Some(zs) => {
                    let zs = zs.iter().map(|q| rational(q)).collect::<CliResult<Vec<_>>>()?;
                    search::fs_two_sided(&xs, &zs, &sg)?
                }
            };
            Ok(Out::list("sums", set.iter().map(ToString::to_string).collect()))
        }
        SearchCmd::Psi { word: w, semigroup, profile } => {
            let w = word(&w, &profile.get()?)?;
            let value = match semigroup {
                SemigroupKind::Product => {
                    let sg = Semigroup::new(|a: &i128, b: &i128| a + b, |l, n| l as i128 * n as i128, true);
                    search::psi_map(&w, &sg).to_string()
                }
                SemigroupKind::Concat => {
                    let sg = Semigroup::new(
                        |a: &String, b: &String| format!("{a} {b}"),
                        |l, n| format!("({l},{n})"),
                        false,
                    );
                    search::psi_map(&w, &sg)
                }
            };
            Ok(Out::value("value", value))
        }
    }
}

fn run(cli: Cli) -> CliResult<Out> {
    let caps = Caps::parse(cli.caps.as_deref())?;
    match cli.cmd {
        Cmd::Word(c) => run_word(c),
        Cmd::Schreier(c) => run_schreier(c, caps),
        Cmd::Ordinal(c) => run_ordinal(c),
        Cmd::Family(c) => run_family(c),
        Cmd::Rat(c) => run_rat(c),
        Cmd::Search(c) => run_search(c, caps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            out.print(as_json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
