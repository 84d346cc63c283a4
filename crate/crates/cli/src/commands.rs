use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use realhodge::cohomology::{
    cohomology_ring, hdg0_torsion_budget, hs_profile, kunneth_h_odd, pi0_real_locus, topological_correction,
    EllipticType, RealTorus,
};
use realhodge::exterior::Multivector;
use realhodge::fourier::{dual_theta, fourier as fourier_transform, fourier_dual, FourierConvention};
use realhodge::hecke::{gl_tau_s_generators, orbit_approach, sunit_gap, SUnitConfig, SearchParams};
use realhodge::json;
use realhodge::moduli::{classify_type, pi0_by_type, torus_from_period, RealType};
use realhodge::polarization::{minimal_class as gamma, principalize as run_principalize, theta};
use realhodge::RatMatrix;

use crate::{CliError, Report, TorusInput};

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_factors(names: &[String]) -> Result<Vec<EllipticType>, CliError> {
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| EllipticType::parse(s.trim()).map_err(CliError::from))
        .collect()
}

fn load_torus(t: &TorusInput) -> Result<RealTorus, CliError> {
    match (&t.input, &t.factors) {
        (Some(path), None) => Ok(json::parse_torus(&read_json(path)?)?),
        (None, Some(names)) => Ok(RealTorus::from_factors(&parse_factors(names)?)),
        _ => Err(CliError::Input("give exactly one of --input or --factors".into())),
    }
}

fn float(x: f64) -> Value {
    Value::String(format!("{x}"))
}

pub fn cohomology(t: &TorusInput, k: usize) -> Result<Report, CliError> {
    let torus = load_torus(t)?;
    let profile = hs_profile(&cohomology_ring(&torus), k)?;
    let budget = match torus.g() {
        3 => json::count(hdg0_torsion_budget(&torus)?),
        _ => Value::Null,
    };
    let pi0 = pi0_real_locus(&torus);
    let summary = format!(
        "g = {}, degree {} torsion {}, free rank {}",
        torus.g(),
        profile.degree,
        profile.torsion_dimension(),
        profile.free_rank
    );
    Ok(Report::ok(
        json!({
            "g": json::count(torus.g()),
            "pi0": json::count(pi0),
            "profile": {
                "k": json::count(k),
                "degree": json::count(profile.degree),
                "ranks": json::count_map(&profile.ranks),
                "free_rank": json::count(profile.free_rank),
                "torsion": json::count(profile.torsion_dimension()),
            },
            "budget": budget,
        }),
        summary,
    ))
}

pub fn pi0(t: &TorusInput) -> Result<Report, CliError> {
    let torus = load_torus(t)?;
    let pi0 = pi0_real_locus(&torus);
    Ok(Report::ok(
        json!({
            "g": json::count(torus.g()),
            "pi0": json::count(pi0),
            "correction": json::count(topological_correction(&torus)),
        }),
        format!("|pi0| = {pi0}"),
    ))
}

pub fn pi0_table(g: usize) -> Result<Report, CliError> {
    if g == 0 || g > 6 {
        return Err(CliError::Input(format!("type table needs 1 <= g <= 6, got {g}")));
    }
    let rows: Vec<Value> = pi0_by_type(g)
        .into_iter()
        .map(|(t, n)| json!({ "type": t.label(), "pi0": json::count(n) }))
        .collect();
    let summary = format!("{} types for g = {g}", rows.len());
    Ok(Report::ok(json!({ "g": json::count(g), "types": rows }), summary))
}

pub fn budget(t: &TorusInput) -> Result<Report, CliError> {
    let torus = load_torus(t)?;
    let budget = hdg0_torsion_budget(&torus)?;
    let profile = hs_profile(&cohomology_ring(&torus), 2)?;
    Ok(Report::ok(
        json!({
            "g": json::count(torus.g()),
            "budget": json::count(budget),
            "torsion": json::count(profile.torsion_dimension()),
            "pi0": json::count(pi0_real_locus(&torus)),
        }),
        format!("budget {budget}"),
    ))
}

pub fn classify(path: &Path) -> Result<Report, CliError> {
    let pd = json::parse_period(&read_json(path)?)?;
    let t = classify_type(pd.m())?;
    let t = RealType::new(pd.g(), t.r, t.alpha)?;
    let torus = torus_from_period(&pd)?;
    Ok(Report::ok(
        json!({
            "g": json::count(pd.g()),
            "type": t.label(),
            "r": json::count(t.r),
            "alpha": json::count(t.alpha),
            "pi0": json::count(pi0_real_locus(&torus)),
        }),
        format!("type {t}"),
    ))
}

pub fn principalize(path: &Path) -> Result<Report, CliError> {
    let pl = json::parse_polarized(&read_json(path)?)?;
    let out = run_principalize(&pl)?;
    let primes: Vec<String> = out.steps.iter().map(|s| s.prime.to_string()).collect();
    let summary = format!("degree {} principalized in {} steps [{}]", pl.degree(), out.steps.len(), primes.join(", "));
    Ok(Report::ok(json::transcript(&out), summary))
}

pub fn minimal_class(path: &Path) -> Result<Report, CliError> {
    let pl = json::parse_polarized(&read_json(path)?)?;
    let class = gamma(&pl)?;
    let g = pl.g();
    Ok(Report::ok(
        json!({
            "g": json::count(g),
            "degree": json::count(2 * g - 2),
            "theta": json::multivector(&theta(&pl)),
            "class": json::multivector(&class),
        }),
        format!("minimal class with {} terms", class.len()),
    ))
}

fn transform_all(g: usize, x: &Multivector, dual: bool, conv: FourierConvention) -> Result<Multivector, CliError> {
    let mut out = Multivector::zero(2 * g);
    for d in 0..=2 * g {
        let part = x.component(d);
        if part.is_zero() {
            continue;
        }
        let y = if dual {
            fourier_dual(g, &part)?
        } else {
            fourier_transform(g, &part, conv)?
        };
        out = out.add(&y);
    }
    Ok(out)
}

pub fn fourier(path: &Path, dual: bool, flip: bool) -> Result<Report, CliError> {
    let input = read_json(path)?;
    if input.get("lattice").is_some() {
        // θ identity for a principally polarized lattice.
        let pl = json::parse_polarized(&input)?;
        let g = pl.g();
        let mut conv = FourierConvention::for_polarization(&pl);
        conv.orientation_flip ^= flip;
        let image = fourier_transform(g, &theta(&pl), conv)?;
        let sign = BigInt::from(if g % 2 == 1 { 1 } else { -1 });
        let fact: BigInt = (1..g).map(BigInt::from).product();
        let expected = dual_theta(&pl)?.pow(g - 1).div_exact(&fact)?.scale(&sign);
        let holds = image == expected;
        return Ok(Report {
            json: json!({
                "g": json::count(g),
                "fourier_theta": json::multivector(&image),
                "expected": json::multivector(&expected),
                "identity_holds": holds,
            }),
            summary: format!("theta identity {}", if holds { "holds" } else { "FAILS" }),
            ok: holds,
        });
    }
    let g = json::parse_usize(
        input
            .get("g")
            .ok_or_else(|| CliError::Input("missing field \"g\"".into()))?,
    )?;
    let class = json::parse_multivector(
        2 * g,
        input
            .get("class")
            .ok_or_else(|| CliError::Input("missing field \"class\"".into()))?,
    )?;
    let conv = FourierConvention { orientation_flip: flip };
    let image = transform_all(g, &class, dual, conv)?;
    Ok(Report::ok(
        json!({ "g": json::count(g), "image": json::multivector(&image) }),
        format!("{} terms in, {} terms out", class.len(), image.len()),
    ))
}

pub fn kunneth(a: &[String], b: &[String], n: usize, k: i64) -> Result<Report, CliError> {
    let ta = RealTorus::from_factors(&parse_factors(a)?);
    let tb = RealTorus::from_factors(&parse_factors(b)?);
    let d = kunneth_h_odd(&ta, &tb, n, k)?;
    let summands: Vec<Value> = d
        .summands
        .iter()
        .map(|s| json!({ "i": json::count(s.i), "j": json::count(s.j), "dimension": json::count(s.dimension) }))
        .collect();
    let ok = d.total == d.direct;
    Ok(Report {
        json: json!({
            "n": json::count(n),
            "k": k.to_string(),
            "summands": summands,
            "total": json::count(d.total),
            "direct": json::count(d.direct),
        }),
        summary: format!("total {} vs direct {}", d.total, d.direct),
        ok,
    })
}

pub struct ApproachArgs {
    pub g: usize,
    pub ty: String,
    pub p: u64,
    pub q: u64,
    pub target: PathBuf,
    pub budget: u64,
    pub seed: u64,
    pub params: SearchParams,
}

fn parse_positive_rational(s: &str, what: &str) -> Result<BigRational, CliError> {
    let x = json::parse_rational(&Value::String(s.to_string()))?;
    if x <= BigRational::from_integer(0.into()) {
        return Err(CliError::Input(format!("{what} must be positive, got {s}")));
    }
    Ok(x)
}

pub fn hecke_approach(args: &ApproachArgs) -> Result<Report, CliError> {
    let ty = RealType::parse(args.g, &args.ty)?;
    let cfg = SUnitConfig::new(args.p, args.q, 30)?;
    let input = read_json(&args.target)?;
    let target = json::parse_rat_matrix(
        input
            .get("target")
            .ok_or_else(|| CliError::Input("missing field \"target\"".into()))?,
    )?;
    let start = match input.get("start") {
        Some(v) => json::parse_rat_matrix(v)?,
        None => RatMatrix::identity(args.g),
    };
    let gens = gl_tau_s_generators(&ty, &cfg)?;
    let r = orbit_approach(&ty, &cfg, &start, &target, args.budget, args.seed, &args.params)?;
    let word: Vec<Value> = r
        .best
        .word
        .iter()
        .map(|&(l, e)| json!({ "generator": gens[l].name, "power": json::count(e) }))
        .collect();
    let summary = format!(
        "best distance {} after {} expansions (word length {})",
        r.best.distance,
        r.expansions,
        r.best.word.iter().map(|&(_, e)| e as usize).sum::<usize>()
    );
    Ok(Report::ok(
        json!({
            "type": ty.label(),
            "p": json::count(args.p),
            "q": json::count(args.q),
            "seed": json::count(args.seed),
            "budget": json::count(args.budget),
            "generators": gens.iter().map(|x| Value::String(x.name.clone())).collect::<Vec<_>>(),
            "generating_set": "not claimed to generate the full group",
            "best": {
                "word": word,
                "matrix": json::rat_matrix(&r.best.matrix),
                "image": json::rat_matrix(&r.best.image),
                "distance": float(r.best.distance),
            },
            "trace": r.trace.iter().map(|&x| float(x)).collect::<Vec<_>>(),
            "expansions": json::count(r.expansions),
        }),
        summary,
    ))
}

pub fn hecke_sunit(p: u64, q: u64, bound: u32, target: &str, tolerance: &str) -> Result<Report, CliError> {
    let cfg = SUnitConfig::new(p, q, bound)?;
    let target = parse_positive_rational(target, "target")?;
    let tol = parse_positive_rational(tolerance, "tolerance")?;
    let gap = sunit_gap(&cfg, &target, &tol)?;
    let mut out = BTreeMap::new();
    out.insert("n", Value::String(gap.n.to_string()));
    out.insert("m", Value::String(gap.m.to_string()));
    out.insert("value", json::rational(&gap.value));
    out.insert("distance", json::rational(&gap.distance));
    out.insert("distance_approx", float(num_traits::ToPrimitive::to_f64(&gap.distance).unwrap_or(f64::NAN)));
    out.insert("within_tolerance", Value::Bool(gap.within_tolerance));
    let summary = format!("{p}^{} {q}^{} within tolerance: {}", gap.n, gap.m, gap.within_tolerance);
    Ok(Report::ok(json!(out), summary))
}
