//! `yfrieze`: knit, verify and enumerate frieze and Y-frieze patterns.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 when knitting or
//! verification fails; in the last case a JSON error object goes to stderr.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use yfrieze_core::enumerate::{coxeter_orbit_sum, tropical_matrix};
use yfrieze_core::frieze::{render_csv, render_grid, render_json, window_from_json};
use yfrieze_core::gca2::{gca_friezes, region_csv};
use yfrieze_core::mutation::matrix_orbit;
use yfrieze_core::{
    belt, check_glide, ensemble_image, enumerate_patterns, gca_period, gca_variables, knit, parse_cartan, phi_check,
    superunitary_contains, theorem_bound, tropical_y_friezes, CartanMatrix, FiniteType, Flavor, FriezeError, GcaParams,
    MutationMatrix, PatternKind, PatternWindow, SemiringId, Seed,
};

#[derive(Parser)]
#[command(name = "yfrieze", version, about = "Frieze and Y-frieze patterns over semirings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extend column-0 values to a window of columns.
    Knit(KnitArgs),
    /// Check every relation of a pattern stored as JSON.
    Verify(VerifyArgs),
    /// Send a frieze to its Y-frieze image under the ensemble map.
    Map(KnitArgs),
    /// Mutate a seed along a sequence of directions.
    Mutate(MutateArgs),
    /// Belt variables as Laurent expressions in the root cluster.
    Belt(BeltArgs),
    /// Rank-2 generalized cluster algebras.
    Gca(GcaArgs),
    /// Exhaustive search for positive-integer patterns.
    Enumerate(EnumerateArgs),
    /// Tropical Y-friezes and the Coxeter companion.
    Tropical(CartanArgs),
    /// Glide symmetry data, optionally checked on a knitted window.
    Glide(GlideArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Grid,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Frieze,
    Y,
}

impl From<KindArg> for PatternKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Frieze => PatternKind::Frieze,
            KindArg::Y => PatternKind::YFrieze,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    A,
    Y,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::A => Flavor::A,
            FlavorArg::Y => Flavor::Y,
        }
    }
}

#[derive(Args)]
struct CartanArgs {
    /// Type name such as A3, C2, G2 or A1~.
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "cartan")]
    ty: Option<String>,
    /// Raw matrix, rows separated by ';', e.g. "2,-1;-1,2".
    #[arg(long)]
    cartan: Option<String>,
}

impl CartanArgs {
    fn matrix(&self) -> Result<CartanMatrix, Failure> {
        let src = self
            .ty
            .as_deref()
            .or(self.cartan.as_deref())
            .ok_or_else(|| Failure::usage("one of --type or --cartan is required"))?;
        parse_cartan(src).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Args)]
struct KnitArgs {
    #[command(flatten)]
    cartan: CartanArgs,
    #[arg(long, value_enum, default_value = "frieze")]
    kind: KindArg,
    /// zpos, qpos, tropn, trop or universal.
    #[arg(long, default_value = "zpos")]
    semiring: String,
    /// Comma-separated column-0 values; defaults to the variables in universal mode.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    /// Column range lo..hi; defaults to one period plus one column in finite type.
    #[arg(long, allow_hyphen_values = true)]
    cols: Option<String>,
    #[arg(long, value_enum, default_value = "grid")]
    format: Format,
    /// Draw the border rows of the type-A presentation.
    #[arg(long)]
    border: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON window file, or '-' for stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct MutateArgs {
    #[command(flatten)]
    cartan: CartanArgs,
    /// Mutation matrix, rows separated by ';'; overrides the Cartan input.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    #[arg(long, value_enum, default_value = "a")]
    flavor: FlavorArg,
    /// Comma-separated 1-based directions.
    #[arg(long, default_value = "")]
    sequence: String,
    /// Report the orbit of the matrix under mutation, up to this many matrices.
    #[arg(long)]
    orbit: Option<usize>,
}

#[derive(Args)]
struct BeltArgs {
    #[command(flatten)]
    cartan: CartanArgs,
    #[arg(long, value_enum, default_value = "y")]
    flavor: FlavorArg,
    #[arg(long, allow_hyphen_values = true)]
    cols: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GcaArgs {
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    c: Option<u32>,
    #[command(flatten)]
    cartan: CartanArgs,
    /// Range lo..hi of cluster variable indices; defaults to one period.
    #[arg(long, allow_hyphen_values = true)]
    cols: Option<String>,
    /// Emit a CSV raster of the superunitary region.
    #[arg(long)]
    region: bool,
    /// Raster range lo..hi on both axes.
    #[arg(long, default_value = "0..8")]
    range: String,
    /// Raster steps per axis.
    #[arg(long, default_value_t = 32)]
    resolution: u32,
    /// Test one point x,y for membership in the superunitary region.
    #[arg(long)]
    point: Option<String>,
    /// List positive integer friezes with entries up to this cap.
    #[arg(long)]
    friezes: Option<u64>,
    /// Index range checked when the period is not found.
    #[arg(long, default_value_t = 24)]
    maxk: i64,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    cartan: CartanArgs,
    #[arg(long, value_enum, default_value = "y")]
    kind: KindArg,
    /// One cap for all rows, or one per row separated by commas.
    #[arg(long, default_value = "128")]
    cap: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GlideArgs {
    #[command(flatten)]
    cartan: CartanArgs,
    /// Knit these values over qpos and check the glide on the window.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    #[arg(long, value_enum, default_value = "frieze")]
    kind: KindArg,
}

enum Failure {
    Usage(String),
    Pattern(serde_json::Value),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

impl From<FriezeError> for Failure {
    fn from(e: FriezeError) -> Self {
        match e {
            FriezeError::KnitFailure { at, direction } => Failure::Pattern(json!({
                "error": "knit_failure",
                "at": { "row": at.row + 1, "col": at.col },
                "direction": direction,
                "message": e.to_string(),
            })),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Failure::usage(format!("expected lo..hi, got '{s}'")))?;
    let lo = a.trim().parse().map_err(|_| Failure::usage(format!("bad range start '{a}'")))?;
    let hi = b.trim().parse().map_err(|_| Failure::usage(format!("bad range end '{b}'")))?;
    if lo > hi {
        return Err(Failure::usage(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::usage(format!("bad rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_int_matrix(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse().map_err(|_| Failure::usage(format!("bad entry '{x}'"))))
                .collect()
        })
        .collect()
}

fn default_cols(a: &CartanMatrix) -> (i64, i64) {
    match a.coxeter_number() {
        Ok(h) => (0, h + 2),
        Err(_) => (0, 4),
    }
}

fn semiring_for(name: &str, rank: usize) -> Result<SemiringId, Failure> {
    match name.parse::<SemiringId>().map_err(|e| Failure::usage(e.to_string()))? {
        SemiringId::Universal(0) => Ok(SemiringId::Universal(rank)),
        s => Ok(s),
    }
}

fn knit_window(args: &KnitArgs, kind: PatternKind) -> Result<PatternWindow, Failure> {
    let a = args.cartan.matrix()?;
    let r = a.rank();
    let s = semiring_for(&args.semiring, r)?;
    let init = match (&args.initial, s) {
        (Some(text), _) => text
            .split(',')
            .map(|v| s.parse_value(v.trim()).map_err(|e| Failure::usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?,
        (None, SemiringId::Universal(_)) => (0..r)
            .map(|i| s.variable(i).map_err(|e| Failure::usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?,
        (None, _) => return Err(Failure::usage("--initial is required for this semiring")),
    };
    if init.len() != r {
        return Err(Failure::usage(format!("expected {r} initial values, got {}", init.len())));
    }
    let (lo, hi) = match &args.cols {
        Some(c) => parse_range(c)?,
        None => default_cols(&a),
    };
    if lo > 0 || hi < 0 {
        return Err(Failure::usage("the column range must contain 0"));
    }
    Ok(knit(&a, s, kind, &init, lo, hi)?)
}

fn render(w: &PatternWindow, format: Format, border: bool) -> Result<String, Failure> {
    if border && !w.cartan().finite_type().is_some_and(|t| matches!(t, FiniteType::A(_))) {
        return Err(Failure::usage("--border applies to type A only"));
    }
    Ok(match format {
        Format::Grid => render_grid(w, border),
        Format::Json => render_json(w) + "\n",
        Format::Csv => render_csv(w),
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_knit(args: &KnitArgs) -> Result<String, Failure> {
    let w = knit_window(args, args.kind.into())?;
    render(&w, args.format, args.border)
}

fn cmd_map(args: &KnitArgs) -> Result<String, Failure> {
    let f = knit_window(args, PatternKind::Frieze)?;
    let p = ensemble_image(&f)?;
    if let Some(at) = p.first_violation() {
        return Err(Failure::Pattern(json!({
            "error": "verification_failure",
            "at": { "row": at.row + 1, "col": at.col },
            "message": format!("image fails the Y-frieze relation at {at}"),
        })));
    }
    render(&p, args.format, args.border)
}

fn cmd_verify(args: &VerifyArgs) -> Result<String, Failure> {
    let text = if args.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(&args.input).map_err(|e| Failure::usage(format!("{}: {e}", args.input)))?
    };
    let w = window_from_json(&text).map_err(|e| Failure::usage(e.to_string()))?;
    match w.first_violation() {
        None => Ok(to_json(&json!({ "valid": true, "cols": [w.lo(), w.hi()] }))),
        Some(at) => Err(Failure::Pattern(json!({
            "error": "verification_failure",
            "at": { "row": at.row + 1, "col": at.col },
            "message": format!("relation fails at {at}"),
        }))),
    }
}

fn cmd_mutate(args: &MutateArgs) -> Result<String, Failure> {
    let b = match &args.matrix {
        Some(m) => parse_int_matrix(m)?,
        None => args.cartan.matrix()?.exchange_matrix(),
    };
    let b = MutationMatrix::new(b).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(limit) = args.orbit {
        let orbit = matrix_orbit(&b, limit);
        return Ok(to_json(&json!({
            "size": orbit.len(),
            "complete": orbit.len() < limit,
            "matrices": orbit.iter().map(|m| m.entries()).collect::<Vec<_>>(),
        })));
    }
    let flavor: Flavor = args.flavor.into();
    let mut seed = Seed::initial(b, flavor);
    let dirs: Vec<usize> = args
        .sequence
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().parse::<usize>() {
            Ok(k) if (1..=seed.rank()).contains(&k) => Ok(k - 1),
            _ => Err(Failure::usage(format!("bad direction '{s}'"))),
        })
        .collect::<Result<_, _>>()?;
    for &k in &dirs {
        seed = seed.mutate(k).map_err(|e| Failure::usage(e.to_string()))?;
    }
    let vars: Vec<String> = seed.vars.iter().map(|v| v.render(flavor.prefix())).collect();
    Ok(to_json(&json!({
        "flavor": flavor,
        "sequence": dirs.iter().map(|k| k + 1).collect::<Vec<_>>(),
        "matrix": seed.matrix.entries(),
        "vars": vars,
    })))
}

fn cmd_belt(args: &BeltArgs) -> Result<String, Failure> {
    let a = args.cartan.matrix()?;
    let (lo, hi) = match &args.cols {
        Some(c) => parse_range(c)?,
        None => default_cols(&a),
    };
    if lo > 0 || hi < 0 {
        return Err(Failure::usage("the column range must contain 0"));
    }
    let b = belt(&a, args.flavor.into(), lo, hi).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(match args.format {
        Format::Json => b.to_json() + "\n",
        Format::Csv => {
            let mut out = String::from("name,value\n");
            for m in lo..=hi {
                for i in 0..b.rank() {
                    out.push_str(&format!("{},\"{}\"\n", b.name(i, m), b.var(i, m).render(b.flavor().prefix())));
                }
            }
            out
        }
        Format::Grid => {
            let mut out = String::new();
            for i in 0..b.rank() {
                for m in lo..=hi {
                    out.push_str(&format!("{} = {}\n", b.name(i, m), b.var(i, m).render(b.flavor().prefix())));
                }
            }
            out
        }
    })
}

fn cmd_gca(args: &GcaArgs) -> Result<String, Failure> {
    let p = match (args.b, args.c) {
        (Some(b), Some(c)) if b > 0 && c > 0 => GcaParams::new(b, c),
        (None, None) => {
            let a = args.cartan.matrix()?;
            GcaParams::from_cartan(&a).ok_or_else(|| Failure::usage("need a rank-2 matrix [[2,-b],[-c,2]]"))?
        }
        _ => return Err(Failure::usage("give both --b and --c as positive integers, or a rank-2 type")),
    };
    if args.region {
        let (lo, hi) = parse_range(&args.range)?;
        if args.resolution == 0 {
            return Err(Failure::usage("resolution must be positive"));
        }
        let (lo, hi) = (BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into()));
        return Ok(region_csv(p, &lo, &hi, args.resolution, args.maxk));
    }
    if let Some(pt) = &args.point {
        let (x, y) = pt
            .split_once(',')
            .ok_or_else(|| Failure::usage("--point takes x,y"))?;
        let (x, y) = (parse_rational(x)?, parse_rational(y)?);
        let t = superunitary_contains(p, (&x, &y), args.maxk).map_err(|e| Failure::usage(e.to_string()))?;
        return Ok(to_json(&json!({ "b": p.b, "c": p.c, "point": [x.to_string(), y.to_string()], "inside": t.inside, "truncated": t.truncated })));
    }
    if let Some(cap) = args.friezes {
        let pts = gca_friezes(p, cap).ok_or_else(|| Failure::usage("friezes are listed for finite type only"))?;
        return Ok(to_json(&json!({ "b": p.b, "c": p.c, "cap": cap, "friezes": pts })));
    }
    let period = gca_period(p, args.maxk);
    let (lo, hi) = match (&args.cols, period) {
        (Some(c), _) => parse_range(c)?,
        (None, Some(d)) => (1, d + 2),
        (None, None) => (1, 8),
    };
    if lo > 1 || hi < 2 {
        return Err(Failure::usage("the index range must contain 1 and 2"));
    }
    let t = gca_variables(p, lo, hi);
    let vars: Vec<_> = (lo..=hi).map(|k| json!({ "k": k, "value": t.render(k) })).collect();
    let phi = if p.is_finite_type() {
        let a = p.cartan();
        let h = a.coxeter_number().map_err(|e| Failure::usage(e.to_string()))?;
        Some(phi_check(&a, 0, h + 2).map_err(|e| Failure::usage(e.to_string()))?)
    } else {
        None
    };
    Ok(to_json(&json!({
        "b": p.b,
        "c": p.c,
        "finite_type": p.is_finite_type(),
        "period": period,
        "relations_hold": t.relations_hold(),
        "laurent_positive": t.laurent_positive(),
        "phi_identification": phi,
        "variables": vars,
    })))
}

fn parse_caps(s: &str, r: usize) -> Result<Vec<u64>, Failure> {
    let caps: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Failure::usage(format!("bad cap '{x}'"))))
        .collect::<Result<_, _>>()?;
    match caps.len() {
        1 => Ok(vec![caps[0]; r]),
        n if n == r => Ok(caps),
        n => Err(Failure::usage(format!("expected 1 or {r} caps, got {n}"))),
    }
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<String, Failure> {
    let a = args.cartan.matrix()?;
    let caps = parse_caps(&args.cap, a.rank())?;
    let rep = enumerate_patterns(&a, args.kind.into(), &caps).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(match args.format {
        Format::Json => rep.to_json() + "\n",
        Format::Csv => {
            let header: Vec<String> = (1..=a.rank()).map(|i| format!("v{i}")).collect();
            let mut out = header.join(",") + "\n";
            for p in &rep.patterns {
                out.push_str(&p.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        Format::Grid => {
            let mut out = format!("# {} {} patterns for {}, cap {:?}\n", rep.count(), rep.kind, rep.cartan, rep.cap);
            for p in &rep.patterns {
                out.push_str(&format!("{p:?}\n"));
            }
            out
        }
    })
}

fn cmd_tropical(args: &CartanArgs) -> Result<String, Failure> {
    let a = args.matrix()?;
    let sols = tropical_y_friezes(&a).map_err(|e| Failure::usage(e.to_string()))?;
    let sum = coxeter_orbit_sum(&a).map_err(|e| Failure::usage(e.to_string()))?;
    let bound = theorem_bound(&a).ok().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    Ok(to_json(&json!({
        "cartan": a.name(),
        "coxeter_number": a.coxeter_number().ok(),
        "companion": a.coxeter_companion().companion,
        "tropical_step": tropical_matrix(&a),
        "orbit_sum_is_zero": sum.iter().flatten().all(|&x| x == 0),
        "y_friezes": sols,
        "entry_bound": bound,
    })))
}

fn cmd_glide(args: &GlideArgs) -> Result<String, Failure> {
    let a = args.cartan.matrix()?;
    let g = a.glide_data().map_err(|e| Failure::usage(e.to_string()))?;
    let involution: Vec<usize> = g.involution.iter().map(|i| i + 1).collect();
    let mut out = json!({
        "cartan": a.name(),
        "involution": involution,
        "shifts": g.shifts,
        "coxeter_number": g.coxeter_number,
        "period": g.period,
    });
    if let Some(init) = &args.initial {
        let s = SemiringId::PositiveRationals;
        let vals = init
            .split(',')
            .map(|v| s.parse_value(v.trim()).map_err(|e| Failure::usage(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != a.rank() {
            return Err(Failure::usage(format!("expected {} initial values", a.rank())));
        }
        let w = knit(&a, s, args.kind.into(), &vals, 0, g.period + 1)?;
        let ok = check_glide(&w)?;
        if !ok {
            return Err(Failure::Pattern(json!({
                "error": "verification_failure",
                "message": "window is not glide invariant",
            })));
        }
        out["glide_invariant"] = json!(ok);
        out["periodic"] = json!(w.has_period(g.period));
    }
    Ok(to_json(&out))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Knit(a) => cmd_knit(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Map(a) => cmd_map(a),
        Command::Mutate(a) => cmd_mutate(a),
        Command::Belt(a) => cmd_belt(a),
        Command::Gca(a) => cmd_gca(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Tropical(a) => cmd_tropical(a),
        Command::Glide(a) => cmd_glide(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Pattern(v)) => {
            eprintln!("{v}");
            ExitCode::from(2)
        }
    }
}
