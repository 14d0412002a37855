//! Command-line front end. [`run`] parses arguments, calls the library and
//! renders the result; the binary only forwards `argv` and prints.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::danielewski::{
    conjugation_identity_check, jt_auto, sl2t_quotient, tau_commutes, weight_set_surface,
};
use crate::endo::{invert, jacobian, Automorphism, PolyMap};
use crate::equilift::{
    descend, is_mu_d_equivariant, lift, phi_d_diagonal_kernel, sl_scalar_kernel, QuotientAuto,
};
use crate::error::{Error, Result};
use crate::lnd::{
    descend_lnd, exp_action, is_locally_nilpotent, kernel_basis_up_to_degree, modify, Derivation,
    Verdict,
};
use crate::plane::{equivariant_decompose, jvdk_decompose, AmalgamWord};
use crate::poly::{parse_rational, Monomial, Polynomial};
use crate::quotient::{recognize_asdn, ring_membership, VeroneseRing, semigroup_closure, semigroup_saturate, DegreeSemigroup};
use crate::roots::weight_set_quotient;
use crate::verify::{run_suite, DEFAULT_SEED, SUITES};

pub const MAX_DEGREE_VAR: &str = "AFFAUTO_MAX_DEGREE";
pub const DEFAULT_MAX_DEGREE: u32 = 64;

#[derive(Parser, Debug)]
#[command(name = "affauto", version, about = "Exact polynomial automorphisms of affine space and its cyclic quotients")]
struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial parsing and d-th roots.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Endomorphisms and automorphisms of affine space.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// Equivariance, descent to A^n/mu_d, and lifting.
    #[command(subcommand)]
    Equi(EquiCmd),
    /// Locally nilpotent derivations.
    #[command(subcommand)]
    Lnd(LndCmd),
    /// Weights of root subgroups of A^n/mu_d.
    Weights(WeightsArgs),
    /// Degree semigroups.
    #[command(subcommand)]
    Semigroup(SemigroupCmd),
    /// The quadric surface xz + y^2 = 1.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Seeded verification suites ("all" runs every suite).
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct Dim {
    /// Number of variables.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Parse and print; with --d, also test membership in the ring
    /// C + sum over k >= s of the degree-dk forms.
    Parse {
        text: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    Root {
        text: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Args, Debug)]
struct MapInput {
    /// Components separated by commas, e.g. "(x1 + x2^2, x2)".
    map: Option<String>,
    #[command(flatten)]
    dim: Dim,
    /// Read the map as PolyMap JSON from a file.
    #[arg(long = "in")]
    input: Option<String>,
}

#[derive(Subcommand, Debug)]
enum AutoCmd {
    /// f∘g (apply g first).
    Compose {
        f: String,
        g: String,
        #[arg(long)]
        n: Option<usize>,
    },
    Invert {
        #[command(flatten)]
        map: MapInput,
        #[arg(long)]
        witness: Option<String>,
    },
    Jacobian {
        #[command(flatten)]
        map: MapInput,
    },
    /// Amalgamated product decomposition of a plane automorphism.
    Decompose {
        #[command(flatten)]
        map: MapInput,
        /// Require letters equivariant under k-th roots of unity.
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum EquiCmd {
    Check {
        #[command(flatten)]
        map: MapInput,
        #[arg(long)]
        d: u32,
    },
    Descend {
        #[command(flatten)]
        map: MapInput,
        #[arg(long)]
        d: u32,
        /// Inverse map certifying invertibility (needed for n ≥ 3).
        #[arg(long)]
        witness: Option<String>,
    },
    Lift {
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        /// JSON file: a quotient automorphism or a bare map of generator images.
        #[arg(long, alias = "in")]
        images: String,
    },
    Kernel {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct DerivationInput {
    /// Coefficients of d/dx1, ..., d/dxn separated by commas.
    coeffs: String,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum LndCmd {
    Check {
        #[command(flatten)]
        der: DerivationInput,
        #[arg(long, default_value_t = 32)]
        bound: u32,
    },
    /// exp(tD); without --t the parameter is the extra variable x_{n+1}.
    Exp {
        #[command(flatten)]
        der: DerivationInput,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    Modify {
        #[command(flatten)]
        der: DerivationInput,
        #[arg(long)]
        f: String,
    },
    Kernel {
        #[command(flatten)]
        der: DerivationInput,
        #[arg(long)]
        bound: u32,
    },
    Descend {
        #[command(flatten)]
        der: DerivationInput,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Args, Debug)]
struct WeightsArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    bound: u64,
}

#[derive(Args, Debug)]
struct GensInput {
    /// Progressions d:k separated by commas, e.g. 4:2,6:1.
    #[arg(long)]
    gens: Option<String>,
    #[arg(long, default_value_t = 500)]
    bound: u64,
}

#[derive(Subcommand, Debug)]
enum SemigroupCmd {
    Closure {
        #[command(flatten)]
        gens: GensInput,
    },
    Saturate {
        #[command(flatten)]
        gens: GensInput,
    },
    Recognize {
        #[command(flatten)]
        gens: GensInput,
        /// Explicit members up to the bound, comma separated.
        #[arg(long)]
        members: Option<String>,
        /// Semigroup JSON file.
        #[arg(long = "in")]
        input: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// SL2 -> SL2/T for a matrix a,b,c,d.
    Quotient {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    Jt {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Polynomial in z.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Does J(alpha, P) commute with tau = (-x, -y, -z)?
    Tau {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    Weights {
        #[arg(long)]
        bound: u32,
        /// Only root subgroups commuting with tau.
        #[arg(long)]
        tau: bool,
    },
    /// Torus conjugation identity for J(1, P).
    Identity {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
}

/// Parses `argv` (including the program name) and executes the command.
/// Returns the exit code and the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match execute(&cli) {
        Ok(out) => (0, out),
        Err(e) => (e.exit_code(), format!("error: {e}")),
    }
}

fn max_degree() -> Result<u32> {
    match std::env::var(MAX_DEGREE_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{MAX_DEGREE_VAR} must be a non-negative integer"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn cap(degree: u32) -> Result<()> {
    let limit = max_degree()?;
    if degree > limit {
        return Err(Error::BoundTooSmall {
            bound: limit as u64,
            reason: format!("degree {degree} exceeds {MAX_DEGREE_VAR}"),
        });
    }
    Ok(())
}

fn cap_poly(p: &Polynomial) -> Result<()> {
    cap(p.degree().unwrap_or(0))
}

fn cap_map(f: &PolyMap) -> Result<()> {
    cap(f.degree())
}

fn split_components(text: &str) -> Vec<&str> {
    let t = text.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t);
    t.split(',').map(str::trim).collect()
}

fn parse_map(text: &str, n: Option<usize>) -> Result<PolyMap> {
    let comps = split_components(text);
    let n = n.unwrap_or(comps.len());
    let f = PolyMap::parse(&comps, n)?;
    cap_map(&f)?;
    Ok(f)
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: e.to_string(),
    })
}

fn load_map(input: &MapInput) -> Result<PolyMap> {
    match (&input.map, &input.input) {
        (Some(text), None) => parse_map(text, input.dim.n),
        (None, Some(path)) => {
            let f: PolyMap = from_json(&read_file(path)?)?;
            cap_map(&f)?;
            Ok(f)
        }
        _ => Err(Error::InvalidArgument("give either a map or --in <path>".into())),
    }
}

fn parse_rat(text: &str) -> Result<BigRational> {
    parse_rational(text.trim())
}

fn parse_derivation(input: &DerivationInput) -> Result<Derivation> {
    let comps = split_components(&input.coeffs);
    let n = input.n.unwrap_or(comps.len());
    let d = Derivation::parse(&comps, n)?;
    for c in d.coeffs() {
        cap_poly(c)?;
    }
    Ok(d)
}

/// A polynomial in `z` given in the three surface variables.
fn parse_z_poly(text: &str) -> Result<Polynomial> {
    let p = Polynomial::parse(text, 3)?;
    cap_poly(&p)?;
    p.restrict(&[2])
        .ok_or_else(|| Error::InvalidArgument("P must be a polynomial in z only".into()))
}

fn parse_gens(text: &str) -> Result<Vec<(u64, u64)>> {
    text.split(',')
        .map(|pair| {
            let (d, k) = pair
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected d:k, got {pair:?}")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("not a positive integer: {s:?}")))
            };
            Ok((num(d)?, num(k)?))
        })
        .collect()
}

fn need_gens(g: &GensInput) -> Result<Vec<(u64, u64)>> {
    parse_gens(
        g.gens
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--gens is required".into()))?,
    )
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Internal(e.to_string()))
}

fn render<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<String> {
    if json {
        to_json(value)
    } else {
        Ok(text())
    }
}

fn word_text(w: &AmalgamWord) -> String {
    if w.is_empty() {
        return "identity (empty word)".into();
    }
    w.letters
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let kind = if l.is_affine() { "affine" } else { "jonquieres" };
            format!("{}. {kind:<10} {}", i + 1, l.to_map())
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn certified(f: PolyMap, witness: Option<&String>) -> Result<Automorphism> {
    if let Some(w) = witness {
        let w = parse_map(w, Some(f.nvars()))?;
        return Automorphism::with_witness(f, w);
    }
    match f.nvars() {
        2 => Automorphism::from_plane_map(f),
        _ => {
            let inv = invert(&f, None)?;
            Automorphism::with_witness(f, inv)
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let json = cli.json;
    match &cli.command {
        Command::Poly(cmd) => match cmd {
            PolyCmd::Parse { text, n, d, s } => {
                let p = Polynomial::parse(text, *n)?;
                cap_poly(&p)?;
                match d {
                    None => render(json, &p, || p.to_string()),
                    Some(d) => {
                        let ring = VeroneseRing::new(*n, *d, *s)?;
                        let member = ring_membership(&p, &ring);
                        let out = serde_json::json!({ "poly": &p, "member": member });
                        render(json, &out, || format!("{p}\nin R(d={d}, s={s}): {member}"))
                    }
                }
            }
            PolyCmd::Root { text, n, d } => {
                let p = Polynomial::parse(text, *n)?;
                cap_poly(&p)?;
                let r = p.dth_root(*d)?;
                render(json, &r, || r.to_string())
            }
        },
        Command::Auto(cmd) => match cmd {
            AutoCmd::Compose { f, g, n } => {
                let f = parse_map(f, *n)?;
                let g = parse_map(g, Some(f.nvars()))?;
                let h = f.compose(&g)?;
                cap_map(&h)?;
                render(json, &h, || h.to_string())
            }
            AutoCmd::Invert { map, witness } => {
                let f = load_map(map)?;
                let w = witness.as_ref().map(|w| parse_map(w, Some(f.nvars()))).transpose()?;
                let inv = invert(&f, w.as_ref())?;
                render(json, &inv, || inv.to_string())
            }
            AutoCmd::Jacobian { map } => {
                let f = load_map(map)?;
                let jd = jacobian(&f);
                #[derive(Serialize)]
                struct Out {
                    matrix: Vec<Vec<Polynomial>>,
                    det: Polynomial,
                    constant: bool,
                }
                let out = Out {
                    matrix: jd.matrix.clone(),
                    det: jd.det.clone(),
                    constant: jd.constant_det().is_some(),
                };
                render(json, &out, || {
                    let rows: Vec<String> = jd
                        .matrix
                        .iter()
                        .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("  |  "))
                        .collect();
                    format!("{}\ndet = {}", rows.join("\n"), jd.det)
                })
            }
            AutoCmd::Decompose { map, k } => {
                let f = load_map(map)?;
                let w = match k {
                    Some(k) => equivariant_decompose(&f, *k)?,
                    None => jvdk_decompose(&f)?,
                };
                render(json, &w, || word_text(&w))
            }
        },
        Command::Equi(cmd) => match cmd {
            EquiCmd::Check { map, d } => {
                let f = load_map(map)?;
                let ok = is_mu_d_equivariant(&f, *d);
                render(json, &ok, || {
                    if ok {
                        format!("equivariant under mu_{d}")
                    } else {
                        format!("not equivariant under mu_{d}")
                    }
                })
            }
            EquiCmd::Descend { map, d, witness } => {
                let f = load_map(map)?;
                let a = certified(f, witness.as_ref())?;
                let q = descend(&a, *d)?;
                render(json, &q, || quotient_text(&q))
            }
            EquiCmd::Lift { d, n, images } => {
                let q = load_quotient(&read_file(images)?, *d, *n)?;
                let l = lift(&q)?;
                render(json, &l, || {
                    format!(
                        "lift: {}\nunique up to the scalars xi^e * id, e = 0..{}",
                        l.map,
                        q.d() - 1
                    )
                })
            }
            EquiCmd::Kernel { d, n } => {
                let diag = phi_d_diagonal_kernel(*d, *n);
                let sl = sl_scalar_kernel(*n as u32, *d);
                #[derive(Serialize)]
                struct Out {
                    diagonal_kernel: Vec<Vec<u32>>,
                    order: usize,
                    sl_scalar_kernel: u32,
                }
                let out = Out {
                    diagonal_kernel: diag.iter().map(|m| m.exponents.clone()).collect(),
                    order: diag.len(),
                    sl_scalar_kernel: sl,
                };
                render(json, &out, || {
                    format!(
                        "kernel of the quotient map on diagonal roots of unity: {} scalars\n\
                         scalar matrices in SL_{n} acting trivially: {sl}",
                        diag.len()
                    )
                })
            }
        },
        Command::Lnd(cmd) => match cmd {
            LndCmd::Check { der, bound } => {
                let d = parse_derivation(der)?;
                let v = is_locally_nilpotent(&d, *bound);
                let (label, detail) = match &v {
                    Verdict::CertifiedYes { order } => (
                        "certified_yes",
                        format!(
                            "triangular order {}",
                            order.iter().map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(" < ")
                        ),
                    ),
                    Verdict::YesUpToBound { bound } => ("yes_up_to_bound", format!("all iterates vanish within {bound} steps")),
                    Verdict::No { witness, .. } => ("no", witness.clone()),
                    Verdict::Unknown => ("unknown", format!("undecided within {bound} steps")),
                };
                let out = BTreeMap::from([("verdict", label.to_string()), ("detail", detail.clone())]);
                render(json, &out, || format!("{label}: {detail}"))
            }
            LndCmd::Exp { der, t } => {
                let d = parse_derivation(der)?;
                let n = d.nvars();
                let t = match t {
                    Some(text) => Polynomial::constant(n, parse_rat(text)?),
                    None => Polynomial::var(n + 1, n),
                };
                let e = exp_action(&d, &t)?;
                cap_map(&e)?;
                render(json, &e, || e.to_string())
            }
            LndCmd::Modify { der, f } => {
                let d = parse_derivation(der)?;
                let f = Polynomial::parse(f, d.nvars())?;
                let m = modify(&f, &d)?;
                render(json, &m, || m.to_string())
            }
            LndCmd::Kernel { der, bound } => {
                let d = parse_derivation(der)?;
                cap(*bound)?;
                let k = kernel_basis_up_to_degree(&d, *bound);
                render(json, &k, || {
                    k.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n")
                })
            }
            LndCmd::Descend { der, d } => {
                let dd = parse_derivation(der)?;
                let table = descend_lnd(&dd, *d)?;
                render(json, &table, || {
                    table
                        .images
                        .iter()
                        .rev()
                        .map(|(m, p)| format!("D({m}) = {p}"))
                        .collect::<Vec<_>>()
                        .join("\n")
                })
            }
        },
        Command::Weights(a) => {
            let w = weight_set_quotient(a.d, a.n, a.bound)?;
            render(json, &w, || list_text(&w))
        }
        Command::Semigroup(cmd) => match cmd {
            SemigroupCmd::Closure { gens } => {
                let o = semigroup_closure(&need_gens(gens)?, gens.bound)?;
                render(json, &o, || semigroup_text(&o))
            }
            SemigroupCmd::Saturate { gens } => {
                let s = semigroup_saturate(&need_gens(gens)?, gens.bound)?;
                let out = BTreeMap::from([("d", s.d), ("s", s.s)]);
                render(json, &out, || format!("d = {}, s = {}\n{}", s.d, s.s, semigroup_text(&s.semigroup)))
            }
            SemigroupCmd::Recognize { gens, members, input } => {
                let o = match (&gens.gens, members, input) {
                    (Some(_), None, None) => semigroup_closure(&need_gens(gens)?, gens.bound)?,
                    (None, Some(list), None) => {
                        let set = list
                            .split(',')
                            .map(|s| {
                                s.trim()
                                    .parse::<u64>()
                                    .map_err(|_| Error::InvalidArgument(format!("not a member: {s:?}")))
                            })
                            .collect::<Result<_>>()?;
                        DegreeSemigroup::from_members(set, gens.bound)?
                    }
                    (None, None, Some(path)) => from_json(&read_file(path)?)?,
                    _ => {
                        return Err(Error::InvalidArgument(
                            "give exactly one of --gens, --members, --in".into(),
                        ))
                    }
                };
                let r = recognize_asdn(&o);
                let value = r.map(|(d, s)| BTreeMap::from([("d", d), ("s", s)]));
                render(json, &value, || match r {
                    Some((d, s)) => format!("d = {d}, s = {s}"),
                    None => "not of the form {0} ∪ {kd : k ≥ s}".into(),
                })
            }
        },
        Command::Surface(cmd) => match cmd {
            SurfaceCmd::Quotient { matrix } => {
                let v = matrix.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
                if v.len() != 4 {
                    return Err(Error::InvalidArgument("--matrix needs four entries a,b,c,d".into()));
                }
                let m = [[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]];
                let (p, img) = sl2t_quotient(&m)?;
                let p: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                #[derive(Serialize)]
                struct Out<'a> {
                    point: &'a [String],
                    symmetric: &'a crate::danielewski::SurfacePoint,
                }
                render(json, &Out { point: &p, symmetric: &img }, || {
                    format!(
                        "({}) on xz - y^2 + y = 0\n({}, {}, {}) on xz + y^2 = 1",
                        p.join(", "),
                        img.x,
                        img.y,
                        img.z
                    )
                })
            }
            SurfaceCmd::Jt { alpha, p } => {
                let a = jt_auto(&parse_rat(alpha)?, &parse_z_poly(p)?)?;
                render(json, &a, || a.map.to_string())
            }
            SurfaceCmd::Tau { alpha, p } => {
                let a = jt_auto(&parse_rat(alpha)?, &parse_z_poly(p)?)?;
                let ok = tau_commutes(&a)?;
                render(json, &ok, || {
                    if ok { "commutes with tau" } else { "does not commute with tau" }.into()
                })
            }
            SurfaceCmd::Weights { bound, tau } => {
                cap(*bound)?;
                let w = weight_set_surface(*tau, *bound)?;
                render(json, &w, || list_text(&w))
            }
            SurfaceCmd::Identity { p } => {
                let ok = conjugation_identity_check(&parse_z_poly(p)?)?;
                render(json, &ok, || {
                    if ok { "identity holds" } else { "identity fails" }.into()
                })
            }
        },
        Command::Verify { suite, seed } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let reports = names
                .iter()
                .map(|s| run_suite(s, *seed))
                .collect::<Result<Vec<_>>>()?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            let text = render(json, &reports, || {
                reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
            })?;
            if failed > 0 {
                return Err(Error::Internal(format!("{failed} suite(s) failed\n{text}")));
            }
            Ok(text)
        }
    }
}

fn list_text<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ")
}

fn semigroup_text(o: &DegreeSemigroup) -> String {
    let shown: Vec<String> = o.members.iter().take(20).map(|m| m.to_string()).collect();
    format!(
        "members: {}{}\ngcd = {}, conductor = {}",
        shown.join(", "),
        if o.members.len() > 20 { ", ..." } else { "" },
        o.gcd,
        o.conductor
    )
}

fn quotient_text(q: &QuotientAuto) -> String {
    q.images()
        .iter()
        .rev()
        .map(|(m, p)| format!("{m} -> {p}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Accepts a full quotient-automorphism document or a bare object mapping
/// generator names to polynomials (JSON or text).
fn load_quotient(text: &str, d: Option<u32>, n: Option<usize>) -> Result<QuotientAuto> {
    let value: Value = from_json(text)?;
    if value.get("images").is_some() {
        let q: QuotientAuto = from_json(text)?;
        if d.is_some_and(|d| d != q.d()) || n.is_some_and(|n| n != q.n()) {
            return Err(Error::InvalidArgument("--d/--n disagree with the file".into()));
        }
        return Ok(q);
    }
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidArgument("images must be a JSON object".into()))?;
    let d = d.ok_or_else(|| Error::InvalidArgument("--d is required for a bare image map".into()))?;
    let n = match n {
        Some(n) => n,
        None => obj
            .values()
            .find_map(|v| v.get("nvars").and_then(Value::as_u64))
            .map(|n| n as usize)
            .ok_or_else(|| Error::InvalidArgument("--n is required for textual images".into()))?,
    };
    let mut images = BTreeMap::new();
    for (k, v) in obj {
        let key = Polynomial::parse(k, n)?;
        let m: Monomial = match key.leading_term() {
            Some((m, _)) if key.num_terms() == 1 => m.clone(),
            _ => return Err(Error::InvalidArgument(format!("{k:?} is not a monomial"))),
        };
        let p = match v {
            Value::String(s) => Polynomial::parse(s, n)?,
            other => from_json(&other.to_string())?,
        };
        cap_poly(&p)?;
        images.insert(m, p);
    }
    QuotientAuto::from_images(d, n, images)
}
