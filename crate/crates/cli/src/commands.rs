use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use typea_sheets::ab_diagram::{delta_of_phi, enumerate_admissible, signature_of_phi, ABDiagram, Label};
use typea_sheets::epsilon::{same_rank_profile, slice_contains, EpsilonMap};
use typea_sheets::gl_setup::{build_triple, TorusElement};
use typea_sheets::involution::{build, PairType};
use typea_sheets::linalg::{parse_rational, to_fraction_string, RatMatrix};
use typea_sheets::sheets::{self, bilinear_sheet_report, k_sheet_components, satisfies_mitc, SheetReport};
use typea_sheets::verify::{self, VerifyConfig};
use typea_sheets::{Error, Partition, Result};

use crate::{Common, Output, VerifyArgs};

pub enum Failure {
    /// Bad input or a library error.
    Lib(Error),
    /// The computation finished but a checked invariant failed; carries the
    /// rendered output.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<String, Failure>;

struct Parsed {
    lambda: Partition,
    pair: Option<PairType>,
    phi: Option<Vec<Label>>,
    signature: Option<(usize, usize)>,
    t: Option<TorusElement>,
    output: Output,
}

fn parse(a: &Common) -> Result<Parsed> {
    let lambda: Partition = a.partition.parse()?;
    let pair = a.pair.as_deref().map(str::parse::<PairType>).transpose()?;
    let phi = a.phi.as_deref().map(Label::parse_phi).transpose()?;
    if let Some(phi) = &phi {
        if phi.len() != lambda.len() {
            return Err(Error::PhiLength { expected: lambda.len(), got: phi.len() });
        }
        if matches!(pair, Some(PairType::AI | PairType::AII)) {
            return Err(Error::Precondition("--phi only applies to --pair AIII".into()));
        }
    }
    let signature = a.signature.as_deref().map(parse_signature).transpose()?;
    if let Some((na, nb)) = signature {
        if na + nb != lambda.size() {
            return Err(Error::Precondition(format!("signature ({na},{nb}) does not add up to N = {}", lambda.size())));
        }
        if let Some(phi) = &phi {
            let from_phi = signature_of_phi(&lambda, phi)?;
            if from_phi != (na, nb) {
                return Err(Error::Precondition(format!(
                    "--phi {} gives signature {from_phi:?}, not ({na},{nb})",
                    Label::phi_string(phi)
                )));
            }
        }
    }
    let t = a
        .t
        .as_deref()
        .map(|s| s.split(',').map(parse_rational).collect::<Result<Vec<_>>>().map(TorusElement::new))
        .transpose()?;
    if let Some(t) = &t {
        t.block_values(&lambda)?;
    }
    Ok(Parsed { lambda, pair, phi, signature, t, output: a.output })
}

fn parse_signature(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("signature must look like N_a,N_b, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn indent(m: &RatMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn show_diagram(d: &ABDiagram) -> String {
    if d.is_empty() {
        "(empty)".to_string()
    } else {
        d.to_string()
    }
}

pub fn triple(a: &Common) -> CmdResult {
    let p = parse(a)?;
    let t = build_triple(&p.lambda);
    if !t.satisfies_relations() {
        return Err(Error::Inconsistency("standard triple breaks the sl2 relations".into()).into());
    }
    if p.output == Output::Json {
        return Ok(to_json(&t));
    }
    Ok(format!(
        "lambda = {}, N = {}\ne =\n{}h =\n{}f =\n{}",
        p.lambda,
        p.lambda.size(),
        indent(&t.e),
        indent(&t.h),
        indent(&t.f)
    ))
}

pub fn epsilon(a: &Common) -> CmdResult {
    let p = parse(a)?;
    let t = p.t.ok_or_else(|| Error::Precondition("epsilon needs --t x_1,...,x_{λ_1}".into()))?;
    let triple = build_triple(&p.lambda);
    let map = EpsilonMap::new(&triple)?;
    let x = map.apply_torus(&t)?;
    let start = &triple.e + &t.to_matrix(&p.lambda)?;
    let in_slice = slice_contains(&triple, &x)?;
    let conjugate = same_rank_profile(&start, &x)?;
    let pair = match (p.pair, &p.phi) {
        (None, Some(_)) => Some(PairType::AIII),
        (pair, _) => pair,
    };
    let membership = match pair {
        Some(kind) => {
            let inv = build(kind, &p.lambda, p.phi.as_deref())?;
            let observed = (&x + &inv.theta_apply(&x)?).is_zero();
            let expected = kind != PairType::AIII || satisfies_mitc(&p.lambda, &t)?;
            Some((kind, observed, expected))
        }
        None => None,
    };
    let ok = in_slice && conjugate && membership.is_none_or(|(_, o, e)| o == e);
    let out = if p.output == Output::Json {
        to_json(&json!({
            "lambda": p.lambda,
            "pair": pair,
            "phi": p.phi.as_deref().map(Label::phi_string),
            "t": t,
            "epsilon": x,
            "in_slice": in_slice,
            "conjugate": conjugate,
            "in_p": membership.map(|m| m.1),
            "expected_in_p": membership.map(|m| m.2),
        }))
    } else {
        let coords: Vec<String> = t.coords.iter().map(to_fraction_string).collect();
        let mut s = format!("lambda = {}, t = ({})\nepsilon(e+t) =\n{}", p.lambda, coords.join(", "), indent(&x));
        let _ = writeln!(s, "in-slice: {}", yes_no(in_slice));
        let _ = writeln!(s, "conjugate to e+t: {}", yes_no(conjugate));
        if let Some((kind, observed, expected)) = membership {
            let _ = writeln!(s, "in-p ({kind}): {} (expected {})", yes_no(observed), yes_no(expected));
        }
        s
    };
    if ok {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn aiii_signature(p: &Parsed) -> Result<(usize, usize)> {
    if let Some(sig) = p.signature {
        return Ok(sig);
    }
    match &p.phi {
        Some(phi) => signature_of_phi(&p.lambda, phi),
        None => Err(Error::Precondition("need --signature N_a,N_b or --phi".into())),
    }
}

pub fn orbits(a: &Common) -> CmdResult {
    let p = parse(a)?;
    if matches!(p.pair, Some(PairType::AI | PairType::AII)) {
        return Err(Error::Precondition("ab-diagrams classify orbits for AIII only".into()).into());
    }
    let (na, nb) = aiii_signature(&p)?;
    let diagrams = enumerate_admissible(&p.lambda, na, nb);
    let of_e = p.phi.as_deref().map(|phi| delta_of_phi(&p.lambda, phi)).transpose()?;
    if p.output == Output::Json {
        return Ok(to_json(&json!({
            "lambda": p.lambda,
            "signature": [na, nb],
            "diagrams": diagrams,
            "orbit_of_e": of_e,
        })));
    }
    let mut s = format!(
        "{} admissible diagram{} for lambda = {}, signature ({na},{nb})\n",
        diagrams.len(),
        if diagrams.len() == 1 { "" } else { "s" },
        p.lambda
    );
    for d in &diagrams {
        let mark = if of_e.as_ref() == Some(d) { "  <- K.e" } else { "" };
        let _ = writeln!(s, "{d}{mark}");
    }
    Ok(s)
}

fn report_for(p: &Parsed) -> Result<SheetReport> {
    match p.pair {
        Some(kind @ (PairType::AI | PairType::AII)) => bilinear_sheet_report(&p.lambda, kind),
        _ => {
            let (na, nb) = aiii_signature(p)?;
            k_sheet_components(&p.lambda, na, nb)
        }
    }
}

pub fn components(a: &Common) -> CmdResult {
    let p = parse(a)?;
    let r = report_for(&p)?;
    if p.output == Output::Json {
        return Ok(to_json(&r));
    }
    let mut s = format!("lambda = {}, pair {}", r.lambda, r.pair);
    if let Some((na, nb)) = r.signature {
        let _ = write!(s, ", signature ({na},{nb})");
    }
    s.push('\n');
    if r.pair == PairType::AIII {
        let _ = writeln!(s, "{} orbits in {} components", r.n_orbits(), r.n_components());
        for (i, c) in r.components.iter().enumerate() {
            let orbits: Vec<String> = c.orbits.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "component {}: rigidified {}: {}", i + 1, show_diagram(&c.rigidified), orbits.join(", "));
        }
    } else {
        let _ = writeln!(s, "{} component", r.n_components());
    }
    s.push_str(&render_dims(&r.dims));
    let _ = writeln!(s, "dixmier: {}", yes_no(r.flags.dixmier));
    let _ = writeln!(s, "rigid orbits: {}", yes_no(r.flags.rigid_orbits));
    Ok(s)
}

fn render_dims(d: &sheets::SheetDims) -> String {
    format!(
        "dim G.e = {}\ndim K.e = {}\ndim slice in p = {}\ndim S_G in p = {}\n",
        d.dim_g_orbit, d.dim_k_orbit, d.dim_slice_p, d.dim_intersection
    )
}

pub fn dims(a: &Common) -> CmdResult {
    let p = parse(a)?;
    let pairs: Vec<PairType> = match p.pair {
        Some(kind) => vec![kind],
        None => [PairType::AI, PairType::AII, PairType::AIII]
            .into_iter()
            .filter(|&k| sheets::slice_p_dimension(&p.lambda, k).is_ok())
            .collect(),
    };
    let rows = pairs
        .iter()
        .map(|&k| sheets::dims(&p.lambda, k).map(|d| (k, d)))
        .collect::<Result<Vec<_>>>()?;
    if p.output == Output::Json {
        let list: Vec<_> = rows.iter().map(|(k, d)| json!({ "pair": k, "dims": d })).collect();
        return Ok(to_json(&json!({ "lambda": p.lambda, "by_pair": list })));
    }
    let mut s = format!("lambda = {}, N = {}\n", p.lambda, p.lambda.size());
    for (k, d) in rows {
        let _ = writeln!(s, "[{k}]");
        s.push_str(&render_dims(&d));
    }
    Ok(s)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let report = verify::run(&VerifyConfig { seed: a.seed, max_size: a.max_size, samples: a.samples });
    let out = if a.output == Output::Json {
        to_json(&report)
    } else {
        let mut s = format!("seed {}, N <= {}, {} samples\n", report.seed, report.max_size, report.samples);
        for c in &report.checks {
            let status = if c.failed == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {} ({}/{})", c.name, c.passed, c.passed + c.failed);
            for f in &c.failures {
                let _ = writeln!(s, "    {f}");
            }
        }
        let _ = writeln!(s, "{} passed, {} failed", report.passed(), report.failed());
        s
    };
    if report.all_passed() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
