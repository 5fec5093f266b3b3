use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use hypercover::complexity::{algebraic_complexity, index_complexity_exact, index_complexity_greedy};
use hypercover::constructions::{
    halfcube_example_cover, layer_complement_cover, layer_minus_point_cover, level_plane, tail_cover,
    venkitesh_counterexample,
};
use hypercover::field::{PrimeField, Rationals, Ring};
use hypercover::fieldkit::{
    check_res_sum_theorem, cn_witness, cw_generalized_search, erdos_heilbronn_check, FpPoly, GridSpec,
    SumsetInstance,
};
use hypercover::hyperplane_cover::verify_cover;
use hypercover::polynomial::{
    check_degree_certificates, check_grid_theorem, from_family, verify_poly_cover, zero_multiplicity,
    BoundMode, RationalPoly,
};
use hypercover::search::{enumerate_traces, min_cover_search, SearchOptions, SearchStart};
use hypercover::{CoverFamily, CubePoint, PointSet, SparsePoly};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Failure, Outcome};

type Res = Result<Outcome, Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_points(path: &Path) -> Result<PointSet, Failure> {
    Ok(PointSet::parse(&read(path)?)?)
}

fn read_family(path: &Path) -> Result<CoverFamily, Failure> {
    CoverFamily::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// A polynomial file: the JSON object form, or the text form (needs `n`).
fn read_rational_poly(path: &Path, n: Option<usize>) -> Result<RationalPoly, Failure> {
    let text = read(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        Ok(RationalPoly::from_json(Rationals, trimmed)?)
    } else {
        let n = n.ok_or_else(|| usage("a text-form polynomial needs --n"))?;
        Ok(RationalPoly::parse_text(Rationals, n, trimmed)?)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

#[derive(Subcommand, Debug)]
pub enum Construction {
    /// (t, t-1)-cover of the cube minus the layer of weight k.
    LayerCover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Planes whose joint trace is the tail set of weights < l or > n - l.
    TailCover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Planes covering the layer of weight k except one point.
    LayerMinusPoint {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// (t, t-1)-cover of the cube minus the set {x_1 = 1}, with an extra point.
    Halfcube {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Four planes covering every point of Q^7 off the middle layer of weight 3.
    Venkitesh,
    /// The single plane x_1 + ... + x_n = j.
    LevelPlane {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
    },
}

fn family_report(family: &CoverFamily, provenance: &str) -> Value {
    let mut v = to_value(family);
    let obj = v.as_object_mut().expect("family is an object");
    obj.insert("size".into(), json!(family.size()));
    obj.insert("provenance".into(), json!(provenance));
    v
}

pub fn construct(which: Construction) -> Res {
    let report = match which {
        Construction::LayerCover { n, k, t } => {
            let f = layer_complement_cover(n, k, t)?;
            let mut v = family_report(&f, "layer cover theorem: max{k, n-k} + 2t - 2 planes, tight");
            v["uncovered"] = json!({ "layer": k });
            v
        }
        Construction::TailCover { n, l } => family_report(&tail_cover(n, l)?, "tail-set plane lemma"),
        Construction::LayerMinusPoint { n, k } => {
            let (f, point) = layer_minus_point_cover(n, k)?;
            let mut v = family_report(&f, "layer-minus-one-point corollary: min{k, n-k} planes");
            v["missed"] = json!(point.to_string());
            v
        }
        Construction::Halfcube { n, t } => {
            let (f, s) = halfcube_example_cover(n, t)?;
            let mut v = family_report(&f, "half-cube example: n - 1 + 2(t - 1) planes, index complexity 1");
            v["uncovered"] = to_value(&s);
            v
        }
        Construction::Venkitesh => {
            let ex = venkitesh_counterexample()?;
            let mut v = family_report(
                &ex.family,
                "symmetric-set counterexample: 4 planes against the weight-count prediction",
            );
            v["conjectured_size"] = json!(ex.conjectured_size);
            v["uncovered"] = json!({ "layer": 3 });
            v
        }
        Construction::LevelPlane { n, j } => {
            let f = CoverFamily::from_planes(n, [level_plane(n, j)?])?;
            family_report(&f, "level plane with the layer of weight j as trace")
        }
    };
    Ok(Outcome::ok(report))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// CoverFamily JSON.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    family: Option<PathBuf>,
    /// Polynomial file (JSON, or text with --n); checked by vanishing order.
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Variables of a text-form polynomial.
    #[arg(long)]
    n: Option<usize>,
    /// Point set S (line format or JSON array of bitstrings).
    #[arg(long = "S", alias = "s")]
    s: PathBuf,
    #[arg(long, default_value_t = 1)]
    t: u32,
    /// Required count on S; defaults to t - 1.
    #[arg(long)]
    l: Option<u32>,
}

pub fn verify(args: VerifyArgs) -> Res {
    let s = read_points(&args.s)?;
    let report = match (&args.family, &args.poly) {
        (Some(path), _) => {
            let family = read_family(path)?;
            let l = args.l.unwrap_or(args.t.saturating_sub(1));
            verify_cover(&family, &s, args.t, l)?
        }
        (None, Some(path)) => {
            if args.l.is_some_and(|l| l + 1 != args.t) {
                return Err(usage("polynomial covers are checked with l = t - 1 only"));
            }
            let p = read_rational_poly(path, args.n.or(Some(s.dim())))?;
            verify_poly_cover(&p, &s, args.t)?
        }
        (None, None) => unreachable!("clap requires one of --family, --poly"),
    };
    Ok(Outcome { ok: report.ok, report: to_value(&report) })
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    /// Point set file for r(S), or for a(S) over 0/1 points.
    #[arg(long = "S", alias = "s", required_unless_present = "points")]
    s: Option<PathBuf>,
    /// JSON array of integer tuples for a(S) over Z_p.
    #[arg(long, conflicts_with = "s")]
    points: Option<PathBuf>,
    #[arg(long, group = "kind")]
    exact: bool,
    #[arg(long, group = "kind")]
    greedy: bool,
    #[arg(long, group = "kind", requires = "prime")]
    algebraic: bool,
    #[arg(long)]
    prime: Option<u64>,
}

pub fn complexity(args: ComplexityArgs) -> Res {
    if args.algebraic {
        let p = args.prime.expect("clap enforces --prime");
        let points: Vec<Vec<u64>> = match (&args.s, &args.points) {
            (_, Some(path)) => read_json(path)?,
            (Some(path), None) => read_points(path)?
                .iter()
                .map(|pt| pt.coords().into_iter().map(u64::from).collect())
                .collect(),
            (None, None) => unreachable!("clap requires --S or --points"),
        };
        let (a, w) = algebraic_complexity(&points, p)?;
        return Ok(Outcome::ok(json!({
            "a": a,
            "p": p,
            "witness": { "v": w.v, "g": w.g.to_json_value(), "g_text": w.g.to_text(), "degree": w.degree },
        })));
    }
    let path = args.s.as_ref().ok_or_else(|| usage("--S is required for index complexity"))?;
    let s = read_points(path)?;
    let (r, w) = if args.greedy { index_complexity_greedy(&s)? } else { index_complexity_exact(&s)? };
    let one_based: Vec<usize> = w.indices.iter().map(|i| i + 1).collect();
    Ok(Outcome::ok(json!({
        "r": r,
        "method": if args.greedy { "greedy" } else { "exact" },
        "witness": { "v": w.v.to_string(), "I": one_based },
    })))
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Layer,
    Index,
    Size,
    Sw,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Layer => BoundMode::Layer,
            ModeArg::Index => BoundMode::Index,
            ModeArg::Size => BoundMode::Size,
            ModeArg::Sw => BoundMode::Sw,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum PolyCommand {
    /// Product of the affine forms of a family.
    FromFamily {
        #[arg(long)]
        family: PathBuf,
    },
    /// Vanishing order at a cube point, capped.
    Multiplicity {
        #[arg(long)]
        poly: PathBuf,
        /// Bitstring x_1 ... x_n.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 8)]
        cap: u32,
    },
    /// Degree of a verified (t, t-1) polynomial cover against a lower bound.
    DegreeBound {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long = "S", alias = "s")]
        s: PathBuf,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Index)]
        mode: ModeArg,
    },
    /// Grid degree theorem on {"p"?, "f", "g", "T", "grid"}; rationals without "p".
    Grid {
        #[arg(long)]
        input: PathBuf,
    },
}

pub fn polynomial(which: PolyCommand) -> Res {
    match which {
        PolyCommand::FromFamily { family } => {
            let p = from_family(&read_family(&family)?);
            let mut v = p.to_json_value();
            v["text"] = json!(p.to_text());
            v["degree"] = to_value(&p.degree());
            Ok(Outcome::ok(v))
        }
        PolyCommand::Multiplicity { poly, point, cap } => {
            let pt = CubePoint::parse(&point)?;
            let p = read_rational_poly(&poly, Some(pt.dim()))?;
            Ok(Outcome::ok(to_value(&zero_multiplicity(&p, &pt, cap)?)))
        }
        PolyCommand::DegreeBound { poly, s, t, mode } => {
            let s = read_points(&s)?;
            let p = read_rational_poly(&poly, Some(s.dim()))?;
            Ok(Outcome::ok(to_value(&check_degree_certificates(&p, &s, t, mode.into())?)))
        }
        PolyCommand::Grid { input } => {
            let v: Value = read_json(&input)?;
            match v.get("p").and_then(Value::as_u64) {
                Some(p) => grid_theorem(PrimeField::new(p)?, &v),
                None => grid_theorem(Rationals, &v),
            }
        }
    }
}

fn elem<R: Ring>(ring: &R, v: &Value) -> Result<R::Elem, Failure> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(usage(format!("expected a number, found {other}"))),
    };
    Ok(ring.parse(&text)?)
}

fn elem_rows<R: Ring>(ring: &R, v: &Value, what: &str) -> Result<Vec<Vec<R::Elem>>, Failure> {
    let rows = v.as_array().ok_or_else(|| usage(format!("\"{what}\" must be an array of arrays")))?;
    rows.iter()
        .map(|row| {
            let items = row.as_array().ok_or_else(|| usage(format!("\"{what}\" must be an array of arrays")))?;
            items.iter().map(|c| elem(ring, c)).collect()
        })
        .collect()
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| usage(format!("missing \"{key}\"")))
}

fn grid_theorem<R: Ring>(ring: R, v: &Value) -> Res {
    let grid = elem_rows(&ring, field_of(v, "grid")?, "grid")?;
    let t_set = elem_rows(&ring, field_of(v, "T")?, "T")?;
    let n = grid.len();
    let f = SparsePoly::from_value(ring.clone(), field_of(v, "f")?, Some(n))?;
    let g = SparsePoly::from_value(ring, field_of(v, "g")?, Some(n))?;
    let report = check_grid_theorem(&f, &g, &t_set, &grid)?;
    Ok(Outcome { ok: report.failed.is_none(), report: to_value(&report) })
}

#[derive(Args, Debug)]
pub struct SumsetArgs {
    /// JSON {"p", "A": [[...]], "S": [[...]], "g": poly, "k": 1-based}.
    #[arg(long, required_unless_present = "erdos_heilbronn")]
    input: Option<PathBuf>,
    /// Check |{a + a' : a != a'}| >= min{p, 2|A| - 3} for the given set.
    #[arg(long, conflicts_with = "input", requires_all = ["p", "set"])]
    erdos_heilbronn: bool,
    #[arg(long)]
    p: Option<u64>,
    /// Comma-separated residues.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<u64>>,
}

#[derive(Deserialize)]
struct SumsetInput {
    p: u64,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    #[serde(rename = "S")]
    s: Vec<Vec<u64>>,
    g: Value,
    k: usize,
}

pub fn sumset(args: SumsetArgs) -> Res {
    if args.erdos_heilbronn {
        let p = args.p.expect("clap enforces --p");
        let set = args.set.expect("clap enforces --set");
        let report = erdos_heilbronn_check(p, &set)?;
        return Ok(Outcome { ok: report.ok, report: to_value(&report) });
    }
    let input: SumsetInput = read_json(args.input.as_deref().expect("clap enforces --input"))?;
    let field = PrimeField::new(input.p)?;
    let g = FpPoly::from_value(field, &input.g, Some(input.a.len()))?;
    if input.k == 0 {
        return Err(usage("k is 1-based"));
    }
    let inst = SumsetInstance::new(field, input.a, input.s, g, input.k - 1)?;
    Ok(Outcome::ok(to_value(&check_res_sum_theorem(&inst)?)))
}

#[derive(Deserialize)]
struct CwInput {
    p: u64,
    /// Number of variables, needed only for text-form polynomials.
    n: Option<usize>,
    polys: Vec<Value>,
    #[serde(rename = "T")]
    t: Vec<Vec<u64>>,
}

pub fn cw(path: &Path) -> Res {
    let input: CwInput = read_json(path)?;
    let field = PrimeField::new(input.p)?;
    let n = input.n.or_else(|| input.t.first().map(Vec::len));
    let polys = input
        .polys
        .iter()
        .map(|v| FpPoly::from_value(field, v, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome::ok(to_value(&cw_generalized_search(&polys, &input.t)?)))
}

#[derive(Deserialize)]
struct NullsatzInput {
    p: u64,
    f: Value,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    t: Vec<u32>,
}

pub fn nullsatz(path: &Path) -> Res {
    let input: NullsatzInput = read_json(path)?;
    let field = PrimeField::new(input.p)?;
    let f = FpPoly::from_value(field, &input.f, Some(input.a.len()))?;
    let grid = GridSpec::new(field, input.a, input.t)?;
    let witness = cn_witness(&f, &grid)?;
    let value = f.evaluate(&witness)?;
    Ok(Outcome::ok(json!({ "witness": witness, "value": value, "grid": to_value(&grid) })))
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Point set S left out of the cover.
    #[arg(long = "S", alias = "s")]
    s: PathBuf,
    #[arg(long, default_value_t = 1)]
    t: u32,
    /// Required count on S; defaults to t - 1.
    #[arg(long)]
    l: Option<u32>,
    /// Coefficient box [-B, B]; defaults to n + 1.
    #[arg(long)]
    coeff_bound: Option<i64>,
    /// Largest family size tried.
    #[arg(long)]
    max_size: Option<usize>,
    /// Sweep sizes from 0 rather than from the lower bound.
    #[arg(long)]
    from_zero: bool,
}

pub fn search(args: SearchArgs) -> Res {
    let s = read_points(&args.s)?;
    if s.dim() != args.n {
        return Err(usage(format!("S has dimension {}, --n is {}", s.dim(), args.n)));
    }
    let catalog = enumerate_traces(args.n, args.coeff_bound.unwrap_or(args.n as i64 + 1))?;
    let options = SearchOptions {
        start: if args.from_zero { SearchStart::Zero } else { SearchStart::LowerBound },
        max_size: args.max_size,
    };
    let l = args.l.unwrap_or(args.t.saturating_sub(1));
    let result = min_cover_search(&catalog, &s, args.t, l, options)?;
    let mut v = to_value(&result);
    v["catalog_size"] = json!(catalog.len());
    v["scope"] = json!("minimal within the catalog of traces realizable with coefficients in [-B, B]");
    Ok(Outcome { ok: result.size.is_some(), report: v })
}
