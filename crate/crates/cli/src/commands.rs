use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orbitcodes::distance::{
    distance_bounds, distance_bruteforce, distance_multiset, subfield_coset_upper_bound,
    DistanceReport,
};
use orbitcodes::field::{smallest_primitive_polynomial, FieldOptions, DEFAULT_TABLE_THRESHOLD};
use orbitcodes::fixtures::{catalog, load_catalog, run_catalog};
use orbitcodes::input::GeneratorSpec;
use orbitcodes::linkage::{
    check_cardinality_bound, link_cyclic, link_many, ConstituentCode, Construction, LinkedCode,
};
use orbitcodes::orbit::{analyze as analyze_orbit, is_partial_spread, is_primitive_beta, OrbitCode};
use orbitcodes::search::{exhaustive_search, random_search, SearchMode, SearchSpec};
use orbitcodes::{Error, Field, FieldSpec, Matrix, Result, Subspace};

use crate::exit;
use crate::output::{Output, Text};
use crate::{CodeArgs, FieldArgs, MethodArg, SearchModeArg};

fn field_spec(a: &FieldArgs) -> Result<FieldSpec> {
    let mut spec = match (&a.field, a.q, a.n) {
        (Some(s), _, _) => match s.strip_prefix('@') {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?
            }
            None => FieldSpec::parse_inline(s)?,
        },
        (None, Some(q), Some(n)) => FieldSpec::new(q, n, smallest_primitive_polynomial(q, n)?),
        _ => return Err(Error::InvalidInput("give --field, or both --q and --n".into())),
    };
    spec.non_primitive_allowed |= a.allow_non_primitive;
    Ok(spec)
}

fn build_field(a: &FieldArgs) -> Result<Arc<Field>> {
    let opts = FieldOptions {
        table_threshold: a.table_threshold.unwrap_or(DEFAULT_TABLE_THRESHOLD),
    };
    Ok(Arc::new(Field::with_options(field_spec(a)?, opts)?))
}

fn parse_generator(s: &str) -> Result<GeneratorSpec> {
    s.parse()
}

/// The generator, rescaled to contain 1 when the field is primitive.
fn build_code(c: &CodeArgs) -> Result<(Arc<Field>, Subspace)> {
    let field = build_field(&c.field)?;
    let u = parse_generator(&c.generator)?.build(&field)?;
    if u.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    let u = if field.is_primitive() { u.normalize_contains_one()?.0 } else { u };
    Ok((field, u))
}

fn compute_distance(u: &Subspace, beta_log: u64, method: MethodArg, distribution: bool) -> Result<DistanceReport> {
    let primitive = is_primitive_beta(u.field(), beta_log);
    match method {
        MethodArg::Brute => distance_bruteforce(u, beta_log, distribution),
        MethodArg::Multiset if !primitive => Err(Error::InvalidInput(
            "the multiset method needs a primitive beta; use --method brute".into(),
        )),
        MethodArg::Multiset => distance_multiset(u, distribution),
        MethodArg::Auto if primitive => distance_multiset(u, distribution),
        MethodArg::Auto => distance_bruteforce(u, beta_log, distribution),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

pub fn field(a: &FieldArgs, element_log: Option<u64>) -> Result<Output> {
    let f = build_field(a)?;
    let spec = f.spec();
    let companion = f.companion_matrix().to_rows();
    let mut doc = json!({
        "q": spec.q,
        "n": spec.n,
        "modulus": spec.modulus,
        "inline": spec.to_inline(),
        "primitive": f.is_primitive(),
        "size": f.size(),
        "tables": f.has_tables(),
        "subfield_degrees": f.subfield_degrees(),
        "companion_matrix": companion,
    });
    let mut t = Text::new();
    t.line("field", format!("F_{}^{}", spec.q, spec.n))
        .line("modulus", format!("{:?}", spec.modulus))
        .line("primitive", f.is_primitive())
        .line("size", f.size())
        .line("subfield degrees", format!("{:?}", f.subfield_degrees()));
    if let Some(e) = element_log {
        let x = f.alpha_pow(e);
        let order = f.element_order(x)?;
        let mipo = f.minimal_polynomial_base(x)?;
        let log = if f.is_primitive() { Some(f.discrete_log(x)?) } else { None };
        doc["element"] = json!({
            "exponent": e,
            "coeffs": f.coeffs(x),
            "log": log,
            "order": order,
            "minimal_polynomial": mipo,
            "degree": mipo.len() - 1,
        });
        t.line("element coeffs", format!("{:?}", f.coeffs(x)))
            .line("element order", order)
            .line("minimal polynomial", format!("{mipo:?}"));
    }
    t.raw("companion matrix:");
    for row in &companion {
        let s: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        t.raw(&format!("  {}", s.join(" ")));
    }
    Ok(Output::new("field", doc, t.finish(), exit::OK))
}

pub fn analyze(c: &CodeArgs) -> Result<Output> {
    let (field, u) = build_code(c)?;
    let a = analyze_orbit(&u, c.beta_log)?;
    let report = compute_distance(&u, c.beta_log, MethodArg::Auto, false)?;
    let bounds = distance_bounds(&u)?;
    let coset = subfield_coset_upper_bound(&u)?;
    let primitive = is_primitive_beta(&field, c.beta_log);
    let spread = primitive && a.r == a.k;
    let doc = json!({
        "field": field.spec(),
        "beta_log": c.beta_log,
        "generator": u.to_json(),
        "k": a.k,
        "r": a.r,
        "t": a.t,
        "friends": a.friends,
        "stab_order": a.stab_order,
        "N": a.orbit_size,
        "stab_beta_plus_degree": a.stab_beta_plus_degree,
        "d": report.d,
        "s": report.s,
        "method": report.method,
        "bounds": bounds,
        "coset_bound": coset.as_ref().map(|c| json!({"r_prime": c.r_prime, "bound": c.bound})),
        "spread": spread,
    });
    let mut t = Text::new();
    t.line("k", a.k)
        .line("r", a.r)
        .line("t", a.t)
        .line("friends", format!("{:?}", a.friends))
        .line("stab_order", a.stab_order)
        .line("N", a.orbit_size)
        .line("stab_beta_plus_degree", a.stab_beta_plus_degree)
        .line("d", format!("{} ({})", report.d, report.method))
        .line("bounds", format!("[{}, {}]", bounds.lower, bounds.upper));
    if let Some(b) = bounds.non_spread_upper {
        t.line("non-spread upper", b);
    }
    if let Some(c) = &coset {
        t.line("coset bound", format!("{} (F_q^{} coset)", c.bound, c.r_prime));
    }
    t.line("spread", spread);
    Ok(Output::new("analyze", doc, t.finish(), exit::OK))
}

pub fn distance(c: &CodeArgs, method: MethodArg, distribution: bool, csv_path: Option<&Path>) -> Result<Output> {
    let (_, u) = build_code(c)?;
    let want_dist = distribution || csv_path.is_some();
    let report = compute_distance(&u, c.beta_log, method, want_dist)?;
    if let (Some(path), Some(dist)) = (csv_path, &report.distribution) {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
        w.write_record(["distance", "pairs"])
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        for (d, n) in dist {
            w.write_record([d.to_string(), n.to_string()])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let mut doc = to_value(&report);
    if !distribution {
        if let Value::Object(m) = &mut doc {
            m.remove("distribution");
        }
    }
    let mut t = Text::new();
    t.line("d", report.d)
        .line("s", report.s)
        .line("r", report.r)
        .line("k", report.k)
        .line("N", report.orbit_size)
        .line("method", report.method);
    if distribution {
        for (d, n) in report.distribution.iter().flatten() {
            t.line(&format!("pairs at distance {d}"), n);
        }
    }
    Ok(Output::new("distance", doc, t.finish(), exit::OK))
}

pub fn orbit(c: &CodeArgs, list_members: bool) -> Result<Output> {
    let (_, u) = build_code(c)?;
    let code = OrbitCode::new(&u, c.beta_log)?;
    let desc = code.descriptor(None)?;
    let mut doc = json!({ "descriptor": desc });
    let mut t = Text::new();
    t.line("N", code.len())
        .line("beta_log", code.beta_log())
        .line("best_friend_degree", desc.best_friend_degree)
        .line("generator", format!("{:?}", code.generator().basis().to_rows()));
    if list_members {
        let members: Vec<Subspace> = code.members().collect();
        let spread = is_partial_spread(&members);
        doc["partial_spread"] = json!(spread);
        doc["members"] = json!(members.iter().map(|m| m.basis().to_rows()).collect::<Vec<_>>());
        t.line("partial spread", spread);
        for (i, m) in members.iter().enumerate() {
            t.line(&format!("member {i}"), format!("{:?}", m.basis().to_rows()));
        }
    }
    Ok(Output::new("orbit", doc, t.finish(), exit::OK))
}

pub struct LinkRequest {
    pub two: bool,
    pub cyclic: bool,
    pub codes: Vec<String>,
    pub cyclic_field: Option<String>,
    pub cyclic_gen: Option<String>,
    pub exponents: Vec<u64>,
    pub verify: bool,
    pub spot_check: Option<usize>,
    pub seed: Option<u64>,
    pub export_members: bool,
    pub member_cap: u64,
}

/// `FIELD@GEN[@BETA_LOG]` as a full-orbit constituent with its distance.
fn parse_constituent(s: &str) -> Result<ConstituentCode> {
    let parts: Vec<&str> = s.split('@').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(Error::InvalidInput(format!("code {s:?}: expected FIELD@GEN[@BETA_LOG]")));
    }
    let field = Arc::new(Field::new(FieldSpec::parse_inline(parts[0])?)?);
    let beta_log = match parts.get(2) {
        Some(b) => b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("code {s:?}: bad beta log")))?,
        None => 1,
    };
    let u = parse_generator(parts[1])?.build(&field)?;
    let u = if field.is_primitive() { u.normalize_contains_one()?.0 } else { u };
    let d = compute_distance(&u, beta_log, MethodArg::Auto, false)?.d;
    ConstituentCode::from_orbit(&OrbitCode::new(&u, beta_log)?, Some(d))
}

pub fn link(req: LinkRequest) -> Result<Output> {
    let consts: Vec<ConstituentCode> = req.codes.iter().map(|s| parse_constituent(s)).collect::<Result<_>>()?;
    let linked: LinkedCode = if req.cyclic {
        if consts.len() != 1 {
            return Err(Error::InvalidInput("--cyclic takes exactly one --code".into()));
        }
        let (Some(fs), Some(gs)) = (&req.cyclic_field, &req.cyclic_gen) else {
            return Err(Error::InvalidInput("--cyclic needs --cyclic-field and --cyclic-gen".into()));
        };
        if req.exponents.is_empty() {
            return Err(Error::InvalidInput("--cyclic needs --exponents".into()));
        }
        let f2 = Arc::new(Field::new(FieldSpec::parse_inline(fs)?)?);
        let u2 = match parse_generator(gs)? {
            GeneratorSpec::Rows(rows) => Matrix::from_rows(f2.q(), f2.n(), &rows)?,
            other => other.build(&f2)?.basis().clone(),
        };
        let mut c2 = ConstituentCode::orbit_subset(&f2, u2.clone(), 1, Some(req.exponents.clone()), 0, None)?;
        let d2 = c2.verify_distance()?;
        link_cyclic(&consts[0], &f2, &u2, &req.exponents, Some(d2))?
    } else {
        if req.two && consts.len() != 2 {
            return Err(Error::InvalidInput("--two takes exactly two --code".into()));
        }
        link_many(&consts)?
    };
    let mut doc = to_value(&linked.to_json(req.export_members.then_some(req.member_cap))?);
    let mut t = Text::new();
    t.line("construction", format!("{:?}", linked.construction()).to_lowercase())
        .line("n", linked.n())
        .line("k", linked.k())
        .line("q", linked.q())
        .line("N", linked.size());
    if let Some(d) = linked.distance() {
        t.line("d", d);
    }
    let mut code = exit::OK;
    if req.verify {
        let v = linked.verify_distance(req.member_cap)?;
        doc["verified_distance"] = json!(v);
        t.line("verified d", v);
        if linked.distance().is_some_and(|d| d != v) {
            code = exit::INTERNAL;
        }
    }
    if let Some(pairs) = req.spot_check {
        let seed = req
            .seed
            .ok_or_else(|| Error::InvalidInput("--spot-check needs --seed".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ds = linked.spot_check(&mut rng, pairs)?;
        let min = ds.iter().min().copied();
        doc["spot_check"] = json!({"pairs": pairs, "seed": seed, "min_distance": min});
        let shown = min.map_or("none".to_string(), |m| m.to_string());
        t.line("spot-check min d", format!("{shown} over {pairs} pairs"));
        if let (Some(m), Some(d)) = (min, linked.distance()) {
            if m < d {
                code = exit::INTERNAL;
            }
        }
    }
    if linked.construction() == Construction::Product {
        if let Ok(c) = check_cardinality_bound(&linked) {
            doc["cardinality_bound"] = json!({
                "bound": c.bound.to_string(),
                "holds": c.holds,
                "equality": c.equality,
                "equality_predicted": c.equality_predicted,
            });
            t.line("cardinality bound", format!("{} (equality: {})", c.bound, c.equality));
        }
    }
    Ok(Output::new("link", doc, t.finish(), code))
}

pub struct SearchRequest {
    pub mode: SearchModeArg,
    pub field: FieldArgs,
    pub k: usize,
    pub r: usize,
    pub target_d: usize,
    pub trials: u64,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub cap: u128,
    pub prune: bool,
}

pub fn search(req: SearchRequest) -> Result<Output> {
    let spec_field = field_spec(&req.field)?;
    let mode = match req.mode {
        SearchModeArg::Exhaustive => SearchMode::Exhaustive,
        SearchModeArg::Random => SearchMode::Random,
    };
    let mut spec = SearchSpec::new(spec_field, req.k, req.r, req.target_d, mode);
    spec.trials = req.trials;
    spec.jobs = req.jobs;
    spec.cap = req.cap;
    spec.prune = req.prune;
    let res = match mode {
        SearchMode::Exhaustive => exhaustive_search(&spec)?,
        SearchMode::Random => {
            spec.seed = req
                .seed
                .ok_or_else(|| Error::InvalidInput("random search needs --seed".into()))?;
            random_search(&spec)?
        }
    };
    // re-validate the reported code independently of the search path
    let mut validated = None;
    if let Some(b) = &res.best_found {
        let brute = distance_bruteforce(&b.subspace, 1, false)?;
        if brute.d != b.distance || brute.r != req.r {
            return Err(Error::InternalInconsistency(format!(
                "best code re-validates to d = {}, r = {}",
                brute.d, brute.r
            )));
        }
        validated = Some(brute.d);
    }
    let code = if res.target_met {
        exit::OK
    } else if res.certifies_nonexistence() {
        exit::CERTIFIED_NEGATIVE
    } else {
        exit::BUDGET_EXHAUSTED
    };
    let histogram: serde_json::Map<String, Value> = res
        .histogram
        .iter()
        .map(|(d, c)| (d.to_string(), json!(c)))
        .collect();
    let doc = json!({
        "mode": mode,
        "q": spec.field.q,
        "n": spec.field.n,
        "modulus": spec.field.modulus,
        "k": req.k,
        "r": req.r,
        "target_distance": req.target_d,
        "trials": req.trials,
        "seed": req.seed,
        "best_found": res.best_found.as_ref().map(|b| json!({
            "distance": b.distance,
            "validated_distance": validated,
            "generator": b.subspace.to_json(),
        })),
        "candidates_examined": res.candidates_examined,
        "rank_deficient": res.rank_deficient,
        "wrong_best_friend": res.wrong_best_friend,
        "pruned": res.pruned,
        "histogram": histogram,
        "exhaustive_complete": res.exhaustive_complete,
        "target_met": res.target_met,
        "certified_nonexistence": res.certifies_nonexistence(),
    });
    let mut t = Text::new();
    t.line("candidates examined", res.candidates_examined)
        .line("wrong best friend", res.wrong_best_friend)
        .line("pruned", res.pruned);
    for (d, c) in &res.histogram {
        t.line(&format!("candidates at distance {d}"), c);
    }
    match &res.best_found {
        Some(b) => t
            .line("best distance", b.distance)
            .line("best generator", format!("{:?}", b.subspace.basis().to_rows())),
        None => t.line("best distance", "none"),
    };
    t.line("exhaustive complete", res.exhaustive_complete)
        .line("target met", res.target_met);
    if res.certifies_nonexistence() {
        t.raw("no code in the searched class reaches the target");
    }
    Ok(Output::new("search", doc, t.finish(), code))
}

pub fn verify_fixtures(filter: Option<&str>, path: Option<&Path>) -> Result<Output> {
    let fixtures = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
            load_catalog(&text)?
        }
        None => catalog(),
    };
    let reports = run_catalog(&fixtures, filter);
    let mut t = Text::new();
    for r in &reports {
        let detail: Vec<String> = r
            .comparisons
            .iter()
            .map(|c| format!("{} expected {} got {}", c.quantity, c.expected, c.computed))
            .collect();
        let status = if r.pass { "PASS" } else { "FAIL" };
        match &r.error {
            Some(e) => t.raw(&format!("{status} {}: {e}", r.name)),
            None => t.raw(&format!("{status} {}: {}", r.name, detail.join("; "))),
        };
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    t.raw(&format!("{passed}/{} passed", reports.len()));
    let code = if reports.iter().any(|r| r.error.is_some()) {
        exit::INVALID_INPUT
    } else if passed < reports.len() {
        exit::INTERNAL
    } else {
        exit::OK
    };
    let doc = json!({
        "passed": passed,
        "total": reports.len(),
        "reports": reports,
    });
    Ok(Output::new("verify-fixtures", doc, t.finish(), code))
}
