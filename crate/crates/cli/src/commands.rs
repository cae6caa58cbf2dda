use crate::{CensusKind, Cli, ClubKind, Command, ConeBase, Family, Outcome};
use kmarc::arcs::{
    directions_club, gw_cone, gw_default_base, km_family, lift_club_to_arc, new_family, translation_hyperoval,
    triad_trace, vandendriessche, ArcJson, FamilyParams, GwVariant, KMArc, OPolynomial,
};
use kmarc::census::{club_census, fixed_head_census, line_set_orbit, transliff_census, triad_census};
use kmarc::gf2field::{find_modulus, Fe, Field, ModulusConstraints};
use kmarc::linsets::{club_hminus2, club_km, club_scattered, club_trace};
use kmarc::projgeom::Spread;
use kmarc::symmetry::{pgl_equivalent, property_witness, stabilizer_order, translation_lines, Property};
use kmarc::tracesys::TraceSystem;
use kmarc::{Error, Result};
use serde_json::{json, Value};
use std::path::Path;

pub fn run(cli: &Cli) -> Result<Outcome> {
    let modulus = cli.modulus.as_deref();
    match &cli.command {
        Command::Field(a) => field_info(modulus, a.h, a.primitive, a.vdd),
        Command::Construct { family, out } => construct(modulus, family, out.as_deref()),
        Command::Analyze(a) => analyze(&a.input, a.props, a.translation, a.club_check),
        Command::Equiv(a) => equiv(&a.first, &a.second, a.semilinear),
        Command::Census { kind } => census(modulus, kind),
        Command::TraceSys(a) => trace_sys(modulus, a.h, &a.k, &a.c, a.solutions),
    }
}

fn ok(field: &Field, results: Value) -> Result<Outcome> {
    Ok(Outcome { field: Some(*field.spec()), results, mismatch: None })
}

fn parse_modulus(s: &str) -> Result<u128> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u128::from_str_radix(digits, 16).map_err(|_| Error::BadParams(format!("modulus {s:?} is not hex")))
}

/// The explicit modulus when given, else the smallest one meeting the constraints.
fn resolve_field(modulus: Option<&str>, h: Option<u32>, c: ModulusConstraints) -> Result<Field> {
    match (modulus, h) {
        (Some(s), h) => {
            let f = Field::from_modulus(parse_modulus(s)?)?;
            if h.is_some_and(|h| h != f.m()) {
                return Err(Error::BadParams(format!("--h {} disagrees with modulus degree {}", h.unwrap(), f.m())));
            }
            if c.vdd_compatible && !f.spec().vdd_compatible {
                return Err(Error::BadField(format!("modulus {s} has a term of degree h-1 or h-2")));
            }
            Ok(f)
        }
        (None, Some(h)) => Ok(Field::new(find_modulus(h, c)?)),
        (None, None) => Err(Error::BadParams("need --h or --modulus".into())),
    }
}

fn plain(modulus: Option<&str>, h: Option<u32>) -> Result<Field> {
    resolve_field(modulus, h, ModulusConstraints::default())
}

fn degree_of(q: u64) -> Result<u32> {
    if q < 4 || !q.is_power_of_two() {
        return Err(Error::BadParams(format!("q = {q} is not a power of two >= 4")));
    }
    Ok(q.trailing_zeros())
}

fn parse_fe(field: &Field, s: &str) -> Result<Fe> {
    let x = Fe::from_hex(s)?;
    if !field.contains(x) {
        return Err(Error::BadParams(format!("{s} is outside F_{}", field.q())));
    }
    Ok(x)
}

fn field_info(modulus: Option<&str>, h: Option<u32>, primitive: bool, vdd: bool) -> Result<Outcome> {
    let f = resolve_field(modulus, h, ModulusConstraints { primitive, vdd_compatible: vdd })?;
    if primitive && !f.spec().primitive {
        return Err(Error::BadField("modulus is not primitive".into()));
    }
    let g = f.generator();
    ok(
        &f,
        json!({
            "q": f.q(),
            "lambda": f.lambda(),
            "lambda_order": f.order(f.lambda()),
            "generator": g,
            "subfields": (1..=f.m()).filter(|d| f.m() % d == 0).collect::<Vec<_>>(),
        }),
    )
}

/// Metadata that analyze must reproduce for a constructed arc.
fn summary(arc: &KMArc) -> Value {
    json!({
        "t": arc.t(),
        "size": arc.len(),
        "nucleus": arc.nucleus(),
        "t_secants": arc.t_secants(),
        "spectrum": arc.spectrum(),
    })
}

fn construct(modulus: Option<&str>, family: &Family, out: Option<&Path>) -> Result<Outcome> {
    let mut extra = serde_json::Map::new();
    let (name, arc) = match *family {
        Family::New { h, ref alpha, ref beta, a, b } => {
            let f = plain(modulus, h)?;
            let p = FamilyParams::new(&f, parse_fe(&f, alpha)?, parse_fe(&f, beta)?, a, b)?;
            ("new", new_family(&f, &p)?)
        }
        Family::Vdd { h, c } => {
            let f = resolve_field(modulus, h, ModulusConstraints { primitive: false, vdd_compatible: true })?;
            ("vdd", vandendriessche(&f, c)?)
        }
        Family::Km { h, i, n } => {
            let f = plain(modulus, h)?;
            ("km", km_family(&f, i, &OPolynomial::Monomial { n })?)
        }
        Family::Gw { h, r, base, j } => {
            let f = plain(modulus, h)?;
            if r == 0 || f.m() % r != 0 {
                return Err(Error::BadParams(format!("r = {r} does not divide h = {}", f.m())));
            }
            let variant = match (base, j) {
                (ConeBase::In, _) => GwVariant::In,
                (ConeBase::Out, _) => GwVariant::Out,
                (ConeBase::Recursive, Some(j)) => GwVariant::Recursive { j },
                (ConeBase::Recursive, None) => return Err(Error::BadParams("recursive base needs --j".into())),
            };
            let (pts, p) = gw_default_base(&f, r, variant)?;
            ("gw", gw_cone(&f, r, f.m() / r, &pts, p, None, variant)?)
        }
        Family::Triad { h } => ("triad", triad_trace(&plain(modulus, h)?)?),
        Family::Hyperoval { h, n } => ("hyperoval", translation_hyperoval(&plain(modulus, h)?, n)?),
        Family::Lift { club, h, i, n } => {
            let f = plain(modulus, h)?;
            let s = Spread::binary(&f, 2)?;
            let w = match club {
                ClubKind::Trace => club_trace(&s)?,
                ClubKind::Hminus2 => club_hminus2(&s)?,
                ClubKind::Scattered => club_scattered(&s, n)?,
                ClubKind::Km => {
                    let i = i.ok_or_else(|| Error::BadParams("km club needs --i".into()))?;
                    club_km(&s, i, n)?
                }
            };
            extra.insert("club".into(), json!({ "descriptor": w.club(), "linear_set": w.to_json() }));
            ("lift", lift_club_to_arc(&w.mu, None)?)
        }
    };
    let mut results = serde_json::Map::new();
    results.insert("family".into(), json!(name));
    results.insert("summary".into(), summary(&arc));
    results.extend(extra);
    match out {
        Some(path) => {
            std::fs::write(path, arc.to_json_string() + "\n")
                .map_err(|e| Error::BadParams(format!("cannot write {}: {e}", path.display())))?;
            results.insert("arc_file".into(), json!(path.display().to_string()));
        }
        None => {
            results.insert("arc".into(), json!(arc.to_json()));
        }
    }
    ok(arc.field(), Value::Object(results))
}

/// Reads an arc JSON file, or the embedded arc of a construct report.
fn read_arc(path: &Path) -> Result<KMArc> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Error::BadParams(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::BadParams(format!("cannot read {}: {e}", path.display())))?
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::BadParams(format!("{}: malformed JSON: {e}", path.display())))?;
    let arc_value = v.pointer("/results/arc").cloned().unwrap_or(v);
    let j: ArcJson = serde_json::from_value(arc_value)
        .map_err(|e| Error::BadParams(format!("{}: malformed arc: {e}", path.display())))?;
    KMArc::from_json(&j)
}

fn analyze(input: &Path, props: bool, translation: bool, club_check: bool) -> Result<Outcome> {
    let arc = read_arc(input)?;
    let mut results = serde_json::Map::new();
    results.insert("summary".into(), summary(&arc));
    let mut mismatch = None;
    let lines = if translation || club_check { translation_lines(&arc) } else { Vec::new() };
    if translation {
        results.insert("translation_lines".into(), json!(lines));
    }
    if props {
        let quarter = arc.nucleus().is_some() && arc.t() * 4 == arc.q() as usize;
        let value = if quarter {
            let rows = arc
                .t_secants()
                .iter()
                .map(|l| {
                    Ok(json!({
                        "line": l,
                        "property_i": property_witness(&arc, l, Property::I)?,
                        "property_ii": property_witness(&arc, l, Property::II)?,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            json!(rows)
        } else {
            json!({ "skipped": format!("type {} is not q/4", arc.t()) })
        };
        results.insert("properties".into(), value);
    }
    if club_check {
        let mut rows = Vec::new();
        for l in &lines {
            let w = directions_club(&arc, l)?;
            let club = w.club();
            let weight = w.club_weight();
            if weight.is_none_or(|i| 1usize << i != arc.t()) {
                mismatch = Some(format!("direction club on {l:?} has head weight {weight:?} for type {}", arc.t()));
            }
            rows.push(json!({ "line": l, "descriptor": club, "head_weight": weight, "linear_set": w.to_json() }));
        }
        results.insert("direction_clubs".into(), json!(rows));
    }
    Ok(Outcome { field: Some(*arc.field().spec()), results: Value::Object(results), mismatch })
}

fn equiv(first: &Path, second: &Path, semilinear: bool) -> Result<Outcome> {
    let (a, b) = (read_arc(first)?, read_arc(second)?);
    let found = pgl_equivalent(&a, &b, semilinear)?;
    ok(
        a.field(),
        json!({
            "group": if semilinear { "PGammaL" } else { "PGL" },
            "equivalent": found.is_some(),
            "collineation": found.map(|g| g.to_json()),
        }),
    )
}

fn compare(field: Option<&Field>, results: Value, holds: bool, what: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(Outcome { field: field.map(|f| *f.spec()), results, mismatch: (!holds).then(what) })
}

fn census(modulus: Option<&str>, kind: &CensusKind) -> Result<Outcome> {
    match *kind {
        CensusKind::Clubs { q0, h } => {
            if q0 != 2 {
                return Err(Error::BadParams(format!("club census runs over F2, got q0 = {q0}")));
            }
            let c = club_census(h)?;
            let holds = c.clubs == c.expected_clubs && c.per_head.iter().all(|&n| n == c.expected_per_head);
            let results = json!({ "census": c, "matches_closed_form": holds });
            compare(None, results, holds, || format!("{} clubs, closed form {}", c.clubs, c.expected_clubs))
        }
        CensusKind::Triads { q } => {
            let f = plain(modulus, Some(degree_of(q)?))?;
            let c = triad_census(&f)?;
            let holds = c.count == c.expected;
            let results = json!({ "census": c, "matches_closed_form": holds });
            compare(Some(&f), results, holds, || format!("{} triads, closed form {}", c.count, c.expected))
        }
        CensusKind::Transliff { q } => {
            if q > 64 {
                return Err(Error::TooLarge(format!("transliff census supports q <= 64, got {q}")));
            }
            let f = plain(modulus, Some(degree_of(q)?))?;
            let c = transliff_census(&f)?;
            let holds = c.is_diagonal();
            let results = json!({ "census": c, "diagonal": holds });
            compare(Some(&f), results, holds, || format!("confusion matrix {:?}", c.matrix))
        }
        CensusKind::Equiv { h, linear } => {
            let f = plain(modulus, Some(h))?;
            let club = club_trace(&Spread::binary(&f, 2)?)?.points();
            let stabilizer = stabilizer_order(&f, &club, !linear)?;
            let orbit = line_set_orbit(&f, &club, !linear)?.len() as u64;
            let group = (f.q().pow(3) - f.q()) * if linear { 1 } else { f.m() as u64 };
            let holds = stabilizer * orbit == group;
            let results = json!({ "stabilizer": stabilizer, "orbit": orbit, "group_order": group });
            compare(Some(&f), results, holds, || format!("{orbit} x {stabilizer} != {group}"))
        }
        CensusKind::FixedHead { h, i, rank } => {
            let c = fixed_head_census(h, i, rank)?;
            let holds = c.all_equivalent;
            let f = Field::canonical(h)?;
            compare(Some(&f), json!({ "census": c }), holds, || "clubs are not pairwise equivalent".into())
        }
    }
}

fn trace_sys(modulus: Option<&str>, h: Option<u32>, ks: &[String], cs: &[u8], list: bool) -> Result<Outcome> {
    let f = plain(modulus, h)?;
    let ks = ks.iter().map(|k| parse_fe(&f, k)).collect::<Result<Vec<_>>>()?;
    let sys = TraceSystem::new(&f, ks, cs.to_vec())?;
    let count = sys.count(&f);
    let mut results = json!({ "equations": sys.len(), "count": count.to_string() });
    if list {
        results["solutions"] = json!(sys.solve(&f)?);
    }
    ok(&f, results)
}
