//! The `ffl` command line. [`run`] parses arguments and returns the rendered
//! output with an exit code, so tests can drive it in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffl_core::chargroup::UnitGroup;
use ffl_core::lfunc::{self, Parity};
use ffl_core::moments::{self, Moment2Variant, TamamSign};
use ffl_core::multfun::{self, GrowthKind};
use ffl_core::sieveprobe::{self, DoubleDivisor, ProbeReport};
use ffl_core::{Budget, Elem, Poly, QSqrt, Ring};
use num_complex::Complex64;
use rayon::ThreadPool;

use crate::par;
use crate::table::{Cell, Table};
use crate::text::{self, format_poly, format_qsqrt, format_rational, pretty_poly, TextError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ffl", version, about = "Dirichlet characters and L-function moments over F_q[T]")]
pub struct Cli {
    /// Emit one JSON document instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for character-parallel commands.
    #[arg(long, global = true, env = "FFL_WORKERS")]
    workers: Option<usize>,
    /// Largest flat table (sieve or residue table) allowed.
    #[arg(long, global = true, env = "FFL_MAX_TABLE")]
    max_table: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FieldArg {
    /// Field order, as q or p^e.
    #[arg(long)]
    q: String,
}

#[derive(Args, Debug)]
struct ModArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Modulus R.
    #[arg(long = "mod")]
    modulus: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Monic irreducibles of one degree, in canonical order.
    Primes {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        deg: usize,
    },
    /// Factorization into monic irreducibles.
    Factor {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
    },
    /// Arithmetic functions.
    Arith {
        func: ArithFn,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        poly: String,
    },
    /// The character group of (F_q[T]/R)^*.
    Chars {
        #[command(flatten)]
        m: ModArgs,
    },
    /// L(1/2, χ) for one or all characters.
    Lvalue {
        #[command(flatten)]
        m: ModArgs,
        /// Character index; all characters when omitted.
        #[arg(long = "char")]
        index: Option<u64>,
    },
    /// Root numbers and functional-equation residuals of primitive characters.
    FeCheck {
        #[command(flatten)]
        m: ModArgs,
    },
    /// Second moment over primitive characters.
    Moment2 {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long, value_enum, default_value_t = M2Method::Chars)]
        method: M2Method,
    },
    /// Fourth moment over primitive characters.
    Moment4 {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long, value_enum, default_value_t = M4Method::Report)]
        method: M4Method,
    },
    /// Divisor-sum, sieve and 2^ω probes.
    Probe {
        #[command(subcommand)]
        probe: ProbeCmd,
    },
    /// Primorial growth ratios.
    Growth {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum)]
        kind: GrowthArg,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ArithFn {
    Mu,
    Phi,
    Phistar,
    Omega,
    Rad,
    D,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum M2Method {
    Chars,
    Moebius,
    Formula,
    FormulaStatement,
    Tamam,
    TamamPrinted,
    TamamChars,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum M4Method {
    Chars,
    Moebius,
    MainTerm,
    Report,
    Diagonal,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GrowthArg {
    Omega,
    Phi,
    Phistar,
}

#[derive(Subcommand, Debug)]
enum ProbeCmd {
    /// Σ d(N) over a short interval in a progression.
    Bt(BtArgs),
    /// The same with deg(N − X) = y and N − X ∈ aM.
    BtEq {
        #[command(flatten)]
        bt: BtArgs,
        #[arg(long, default_value_t = 1)]
        lead: Elem,
    },
    /// Count of N in a short progression with no prime factor of degree ≤ z.
    Selberg {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: usize,
        #[arg(long, default_value = "[1]")]
        k: String,
        #[arg(long, default_value = "[0]")]
        a: String,
        #[arg(long)]
        z: usize,
    },
    /// Σ_{deg N ≤ x} 2^ω(N)/|N| against its closed form.
    TwoOmega {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        x: usize,
    },
    /// Σ_{deg N ≤ deg R, (N,R)=1} 2^ω(N)/|N|.
    TwoOmegaCoprime {
        #[command(flatten)]
        m: ModArgs,
    },
    /// The (z' − deg N)²-weighted 2^ω sum against its main term.
    Weighted {
        #[command(flatten)]
        m: ModArgs,
    },
    /// Σ_{deg A ≤ x, (A,R)=1} 1/|A|.
    Harmonic {
        #[command(flatten)]
        m: ModArgs,
        #[arg(long)]
        x: usize,
    },
    /// Σ_{deg N ≤ x} 1/φ(N).
    InvPhi {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        x: usize,
    },
    /// Σ_{deg N ≤ x} μ²(N)/φ(N), against x.
    MusqPhi {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        x: usize,
    },
    /// Σ_{deg P ≤ w} 1/deg P.
    InvDegP {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        w: usize,
    },
    /// Count of w(z)-smooth N of degree ≤ z.
    Smooth {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        z: usize,
    },
    /// Σ d(N)/|N| over deg N ≥ z/2 with all prime factors of degree ≤ z/r.
    Rough {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        r: usize,
    },
    /// Off-diagonal quadruples AC ≡ a BD (mod F), AC ≠ BD.
    OffDiagonal {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        z1: usize,
        #[arg(long)]
        z2: usize,
        #[arg(long, default_value_t = 1)]
        lead: Elem,
    },
    /// Σ d(N) d(KF + aN).
    DoubleDivisor {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        x: usize,
        #[arg(long, default_value_t = 1)]
        lead: Elem,
        #[arg(long, value_enum, default_value_t = DdArg::Full)]
        variant: DdArg,
    },
}

#[derive(Args, Debug)]
struct BtArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: usize,
    #[arg(long, default_value = "[0]")]
    a: String,
    #[arg(long, default_value = "[1]")]
    g: String,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DdArg {
    Shifted,
    Full,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ffl_core::Error),
    #[error(transparent)]
    Text(#[from] TextError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            _ => EXIT_PRECONDITION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PRECONDITION } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let ctx = Ctx {
        budget: par::budget(cli.max_table),
        pool: par::pool(cli.workers),
    };
    match execute(&cli.cmd, &ctx) {
        Ok(t) => Outcome {
            code: EXIT_OK,
            stdout: t.render(cli.json),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Ctx {
    budget: Budget,
    pool: ThreadPool,
}

type Res<T> = Result<T, CliError>;

fn ring_of(f: &FieldArg) -> Res<Ring> {
    Ok(Ring::with_order(text::parse_q(&f.q)?)?)
}

fn poly_in(ring: &Ring, s: &str) -> Res<Poly> {
    Ok(text::parse_poly(s, Some(ring.q() as u64))?.1)
}

fn group_of(m: &ModArgs, ctx: &Ctx) -> Res<(Ring, Poly, UnitGroup)> {
    let ring = ring_of(&m.field)?;
    let r = poly_in(&ring, &m.modulus)?;
    let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
    Ok((ring, r, g))
}

fn kvec_text(k: &[u32]) -> String {
    k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn execute(cmd: &Cmd, ctx: &Ctx) -> Res<Table> {
    match cmd {
        Cmd::Primes { field, deg } => {
            let ring = ring_of(field)?;
            ctx.budget.check_work("prime enumeration", ring.q_pow(*deg))?;
            let mut t = Table::new("primes", &["poly", "pretty"]);
            for p in ring.enumerate_primes(*deg) {
                t.push(vec![format_poly(&p).into(), pretty_poly(&p).into()]);
            }
            Ok(t)
        }
        Cmd::Factor { field, poly } => {
            let ring = ring_of(field)?;
            let a = poly_in(&ring, poly)?;
            let fac = ring.factor(&a)?;
            let mut t = Table::new("factor", &["unit", "prime", "pretty", "exponent"]);
            for (p, e) in &fac.factors {
                t.push(vec![
                    Cell::from(fac.unit as u64),
                    format_poly(p).into(),
                    pretty_poly(p).into(),
                    (*e).into(),
                ]);
            }
            Ok(t)
        }
        Cmd::Arith { func, field, poly } => {
            let ring = ring_of(field)?;
            let a = poly_in(&ring, poly)?;
            let (name, value): (&str, Cell) = match func {
                ArithFn::Mu => ("mu", multfun::mu(&ring, &a)?.into()),
                ArithFn::Phi => ("phi", multfun::phi(&ring, &a)?.into()),
                ArithFn::Phistar => ("phistar", multfun::phi_star(&ring, &a)?.into()),
                ArithFn::Omega => ("omega", multfun::omega(&ring, &a)?.into()),
                ArithFn::Rad => ("rad", format_poly(&multfun::rad(&ring, &a)?).into()),
                ArithFn::D => ("d", multfun::divisor_d(&ring, &a)?.into()),
            };
            let mut t = Table::new("arith", &["func", "poly", "value"]);
            t.push(vec![name.into(), format_poly(&a).into(), value]);
            Ok(t)
        }
        Cmd::Chars { m } => {
            let (_, _, g) = group_of(m, ctx)?;
            let mut t = Table::new("chars", &["index", "kvec", "trivial", "primitive", "parity", "conductor"]);
            for chi in g.characters() {
                t.push(vec![
                    chi.index().into(),
                    kvec_text(chi.kvec()).into(),
                    chi.is_trivial().into(),
                    chi.is_primitive().into(),
                    Parity::of(&chi).as_str().into(),
                    format_poly(&chi.conductor()).into(),
                ]);
            }
            Ok(t)
        }
        Cmd::Lvalue { m, index } => {
            let (_, _, g) = group_of(m, ctx)?;
            let values = lfunc::half_values(&g);
            let mut t = Table::new("lvalue", &["index", "primitive", "parity", "re", "im", "abs2"]);
            let range = match index {
                Some(i) if *i < g.char_count() => *i..*i + 1,
                Some(i) => return Err(ffl_core::Error::Precondition(format!("no character with index {i}")).into()),
                None => 0..g.char_count(),
            };
            for i in range {
                let chi = g.character(i);
                let v: Complex64 = values[i as usize];
                t.push(vec![
                    i.into(),
                    chi.is_primitive().into(),
                    Parity::of(&chi).as_str().into(),
                    v.re.into(),
                    v.im.into(),
                    v.norm_sqr().into(),
                ]);
            }
            Ok(t)
        }
        Cmd::FeCheck { m } => {
            let (_, _, g) = group_of(m, ctx)?;
            let mut t = Table::new("fe-check", &["index", "parity", "w_re", "w_im", "w_abs", "residual"]);
            for (i, w) in par::root_numbers(&g, &ctx.pool) {
                t.push(vec![
                    i.into(),
                    w.parity.as_str().into(),
                    w.value.re.into(),
                    w.value.im.into(),
                    w.value.norm().into(),
                    w.residual.into(),
                ]);
            }
            Ok(t)
        }
        Cmd::Moment2 { m, method } => moment2(m, *method, ctx),
        Cmd::Moment4 { m, method } => moment4(m, *method, ctx),
        Cmd::Probe { probe } => probe_cmd(probe, ctx),
        Cmd::Growth { field, kind, from, to } => {
            let q = text::parse_q(&field.q)?;
            ffl_core::Field::with_order(q)?;
            let k = match kind {
                GrowthArg::Omega => GrowthKind::OmegaPrimorial,
                GrowthArg::Phi => GrowthKind::PhiLower,
                GrowthArg::Phistar => GrowthKind::PhiStarRatio,
            };
            let mut t = Table::new("growth", &["n", "degree", "m", "r", "ratio"]);
            for row in multfun::growth_probe(q, k, *from..=*to) {
                t.push(vec![row.n.into(), row.degree.into(), row.m.into(), row.r.into(), row.ratio.into()]);
            }
            Ok(t)
        }
    }
}

fn exact_row(t: &mut Table, r: &Poly, method: &str, x: &QSqrt) {
    t.push(vec![
        format_poly(r).into(),
        method.into(),
        format_qsqrt(x).into(),
        x.to_f64().into(),
    ]);
}

fn moment2(m: &ModArgs, method: M2Method, ctx: &Ctx) -> Res<Table> {
    let ring = ring_of(&m.field)?;
    let r = poly_in(&ring, &m.modulus)?;
    let mut t = Table::new("moment2", &["modulus", "method", "exact", "value"]);
    match method {
        M2Method::Chars => {
            let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
            let v = par::moment2_chars(&g, &ctx.pool);
            t.push(vec![format_poly(&r).into(), "chars".into(), "".into(), v.into()]);
        }
        M2Method::Moebius => {
            let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
            exact_row(&mut t, &r, "moebius", &moments::moment2_moebius_exact(&g, &ctx.budget)?);
        }
        M2Method::Formula | M2Method::FormulaStatement => {
            let (variant, name) = if method == M2Method::Formula {
                (Moment2Variant::ProofFinal, "formula")
            } else {
                (Moment2Variant::Statement, "formula-statement")
            };
            let f = moments::moment2_formula(&ring, &r, variant)?;
            exact_row(&mut t, &r, name, &f.total);
            exact_row(&mut t, &r, &format!("{name}:main"), &f.main);
            exact_row(&mut t, &r, &format!("{name}:prime-sum"), &f.prime_sum);
            exact_row(&mut t, &r, &format!("{name}:correction"), &f.correction);
        }
        M2Method::Tamam | M2Method::TamamPrinted => {
            let (sign, name) = if method == M2Method::Tamam {
                (TamamSign::Corrected, "tamam")
            } else {
                (TamamSign::AsPrinted, "tamam-printed")
            };
            exact_row(&mut t, &r, name, &moments::moment2_tamam_prime(&ring, &r, sign)?);
        }
        M2Method::TamamChars => {
            if r.deg() == 0 || !ring.is_irreducible(&r)? {
                return Err(ffl_core::Error::NotIrreducible.into());
            }
            let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
            t.push(vec![
                format_poly(&r).into(),
                "tamam-chars".into(),
                "".into(),
                moments::tamam_chars(&g).into(),
            ]);
        }
    }
    Ok(t)
}

fn moment4(m: &ModArgs, method: M4Method, ctx: &Ctx) -> Res<Table> {
    let ring = ring_of(&m.field)?;
    let r = poly_in(&ring, &m.modulus)?;
    let modulus = format_poly(&r);
    match method {
        M4Method::Chars | M4Method::Moebius | M4Method::MainTerm => {
            let mut t = Table::new("moment4", &["modulus", "method", "exact", "value"]);
            match method {
                M4Method::Chars => {
                    let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
                    let v = par::moment4_chars(&g, &ctx.pool);
                    t.push(vec![modulus.into(), "chars".into(), "".into(), v.into()]);
                }
                M4Method::Moebius => {
                    let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
                    exact_row(&mut t, &r, "moebius", &moments::moment4_moebius_exact(&g, &ctx.budget)?);
                }
                _ => {
                    let v = moments::moment4_main_term(&ring, &r)?;
                    t.push(vec![
                        modulus.into(),
                        "main-term".into(),
                        format_rational(&v).into(),
                        rat_f64(&v).into(),
                    ]);
                }
            }
            Ok(t)
        }
        M4Method::Report => {
            let g = UnitGroup::new(&ring, &r, &ctx.budget)?;
            let v = par::moment4_chars(&g, &ctx.pool);
            let rep = moments::moment4_report(&g, v)?;
            let mut t = Table::new(
                "moment4",
                &["modulus", "method", "value", "main_term", "ratio", "normalized_deviation"],
            );
            t.push(vec![
                modulus.into(),
                "report".into(),
                rep.value.into(),
                rep.main_term.into(),
                rep.ratio.into(),
                rep.normalized_deviation.into(),
            ]);
            Ok(t)
        }
        M4Method::Diagonal => {
            let rep = moments::diagonal_term_check(&ring, &r, &ctx.budget)?;
            let mut t = Table::new(
                "moment4",
                &["modulus", "method", "z", "exact", "value", "main_term", "ratio"],
            );
            t.push(vec![
                modulus.into(),
                "diagonal".into(),
                rep.z.into(),
                format_rational(&rep.value).into(),
                rat_f64(&rep.value).into(),
                rat_f64(&rep.main_term).into(),
                rep.ratio.into(),
            ]);
            Ok(t)
        }
    }
}

fn rat_f64(r: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

pub const PROBE_COLUMNS: [&str; 9] = [
    "probe_id",
    "params",
    "lhs",
    "lhs_exact",
    "rhs",
    "ratio",
    "empirical_const",
    "extra",
    "skipped",
];

/// One CSV row in the probe schema.
pub fn probe_row(r: &ProbeReport) -> Vec<Cell> {
    let params = r
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    let extra = r
        .extra
        .iter()
        .map(|(k, v)| format!("{k}={}", text::fmt_float(*v)))
        .collect::<Vec<_>>()
        .join(";");
    vec![
        r.id.into(),
        params.into(),
        r.lhs.into(),
        r.lhs_exact.as_ref().map(format_rational).unwrap_or_default().into(),
        r.rhs.into(),
        r.ratio.into(),
        r.extra("C").unwrap_or(r.ratio).into(),
        extra.into(),
        r.skipped.into(),
    ]
}

fn exact_probe(id: &'static str, params: Vec<(&'static str, String)>, lhs: num_rational::BigRational, rhs: num_rational::BigRational) -> ProbeReport {
    let l = rat_f64(&lhs);
    let r = rat_f64(&rhs);
    ProbeReport {
        id,
        params,
        lhs: l,
        lhs_exact: Some(lhs),
        rhs: r,
        ratio: if r != 0.0 { l / r } else { 0.0 },
        extra: Vec::new(),
        skipped: false,
    }
}

fn probe_cmd(p: &ProbeCmd, ctx: &Ctx) -> Res<Table> {
    let b = &ctx.budget;
    let rep = match p {
        ProbeCmd::Bt(a) => {
            let ring = ring_of(&a.field)?;
            sieveprobe::bt_sum(&ring, &poly_in(&ring, &a.x)?, a.y, &poly_in(&ring, &a.a)?, &poly_in(&ring, &a.g)?, b)?
        }
        ProbeCmd::BtEq { bt: a, lead } => {
            let ring = ring_of(&a.field)?;
            sieveprobe::bt_sum_eq(
                &ring,
                &poly_in(&ring, &a.x)?,
                a.y,
                &poly_in(&ring, &a.a)?,
                &poly_in(&ring, &a.g)?,
                *lead,
                b,
            )?
        }
        ProbeCmd::Selberg { field, x, y, k, a, z } => {
            let ring = ring_of(field)?;
            sieveprobe::selberg_sifted_count(&ring, &poly_in(&ring, x)?, *y, &poly_in(&ring, k)?, &poly_in(&ring, a)?, *z, b)?
        }
        ProbeCmd::TwoOmega { field, x } => {
            let ring = ring_of(field)?;
            let lhs = sieveprobe::two_omega_sum(ring.q(), *x);
            let rhs = sieveprobe::two_omega_closed_form(ring.q(), *x);
            exact_probe("two_omega_sum", vec![("x", x.to_string())], lhs, rhs)
        }
        ProbeCmd::TwoOmegaCoprime { m } => {
            let ring = ring_of(&m.field)?;
            sieveprobe::two_omega_sum_coprime(&ring, &poly_in(&ring, &m.modulus)?)?
        }
        ProbeCmd::Weighted { m } => {
            let ring = ring_of(&m.field)?;
            sieveprobe::weighted_two_omega_sum(&ring, &poly_in(&ring, &m.modulus)?)?
        }
        ProbeCmd::Harmonic { m, x } => {
            let ring = ring_of(&m.field)?;
            sieveprobe::coprime_harmonic(&ring, &poly_in(&ring, &m.modulus)?, *x, b)?
        }
        ProbeCmd::InvPhi { field, x } => {
            let ring = ring_of(field)?;
            let lhs = sieveprobe::inv_phi_sum(&ring, *x, b)?;
            exact_probe("inv_phi_sum", vec![("x", x.to_string())], lhs, num_rational::BigRational::from_integer((*x as u64).into()))
        }
        ProbeCmd::MusqPhi { field, x } => {
            let ring = ring_of(field)?;
            let lhs = sieveprobe::musq_phi_sum(&ring, *x, b)?;
            exact_probe("musq_phi_sum", vec![("x", x.to_string())], lhs, num_rational::BigRational::from_integer((*x as u64).into()))
        }
        ProbeCmd::InvDegP { field, w } => sieveprobe::inv_deg_p_sum(ring_of(field)?.q(), *w),
        ProbeCmd::Smooth { field, z } => sieveprobe::smooth_count(ring_of(field)?.q(), *z),
        ProbeCmd::Rough { field, z, r } => sieveprobe::rough_divisor_sum(ring_of(field)?.q(), *z, *r)?,
        ProbeCmd::OffDiagonal { field, f, z1, z2, lead } => {
            let ring = ring_of(field)?;
            sieveprobe::off_diagonal_count(&ring, &poly_in(&ring, f)?, *z1, *z2, *lead, b)?
        }
        ProbeCmd::DoubleDivisor { field, f, k, x, lead, variant } => {
            let ring = ring_of(field)?;
            let kind = match variant {
                DdArg::Shifted => DoubleDivisor::Shifted,
                DdArg::Full => DoubleDivisor::Full,
            };
            sieveprobe::double_divisor_probe(&ring, &poly_in(&ring, f)?, &poly_in(&ring, k)?, *x, *lead, kind, b)?
        }
    };
    let mut t = Table::new("probe", &PROBE_COLUMNS);
    t.push(probe_row(&rep));
    Ok(t)
}
