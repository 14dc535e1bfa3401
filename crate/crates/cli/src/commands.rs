//! One function per subcommand, each producing a JSON report.

use std::collections::BTreeMap;
use std::sync::Arc;

use fell_core::bundle::{pullback, restrict, Axiom, AxiomReport, IsoReport};
use fell_core::duality::{
    extract_twist, graded_ideals, is_g_simple, landstad_reconstruct, olesen_pedersen_forward, stabilizer_obstruction,
    transported_family, DualityError, LandstadResult,
};
use fell_core::ep::{amenability_report, ep_defect, EpError, EpWitness};
use fell_core::{Bundle, CrossedProduct, GSetAction, Imprimitivity, MultiplierFamily, Quotient, SectionAlgebra};
use serde_json::{json, Map, Value};

use crate::spec::{bundle_json, matrix_json, parse_index_flag, parse_witness, read_spec, BundleSpec, GroupSpec, SCHEMA};
use crate::{Cli, CliError, Command};

pub const DEFAULT_TOL: f64 = 1e-9;

/// A report and whether every check in it passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    fn new(command: &str, passed: bool, mut body: Map<String, Value>) -> Self {
        body.insert("schema".into(), json!(SCHEMA));
        body.insert("command".into(), json!(command));
        body.insert("passed".into(), json!(passed));
        Outcome { report: Value::Object(body), passed }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn tol(&self, spec: Option<&BundleSpec>) -> f64 {
        self.cli.tol.or_else(|| spec.and_then(|s| s.tolerance)).unwrap_or(DEFAULT_TOL)
    }

    fn spec(&self, path: &std::path::Path) -> Result<BundleSpec, CliError> {
        let tol = self.cli.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Validation("--tol must lie in (0, 1)".into()));
        }
        read_spec(path, tol)
    }

    fn group(&self) -> Result<GroupSpec, CliError> {
        let g = self.cli.group.as_deref().ok_or_else(|| CliError::Usage("--group is required for this command".into()))?;
        GroupSpec::parse_short(g)
    }

    fn normal(&self, spec: Option<&BundleSpec>) -> Result<Vec<usize>, CliError> {
        match (&self.cli.normal, spec.and_then(|s| s.normal_subgroup.clone())) {
            (Some(flag), _) => parse_index_flag(flag, "normal"),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(CliError::Usage("--normal (or the spec's normal_subgroup) is required".into())),
        }
    }

    /// `G/N` from the flags, checked against the group of a spec over the quotient.
    fn quotient(&self, spec: &BundleSpec) -> Result<(GroupSpec, Quotient), CliError> {
        let gspec = self.group()?;
        let g = Arc::new(gspec.build()?);
        let n = self.normal(Some(spec))?;
        let q = Quotient::new(g, &n).map_err(|e| CliError::Validation(format!("--normal: {e}")))?;
        if **q.quotient_group() != *spec.group {
            return Err(CliError::Validation(format!(
                "the spec's group does not match {}/N with its cosets numbered by first appearance",
                gspec_name(&gspec)
            )));
        }
        Ok((gspec, q))
    }
}

fn gspec_name(g: &GroupSpec) -> String {
    match g {
        GroupSpec::Trivial => "trivial".into(),
        GroupSpec::Cyclic(m) => format!("cyclic:{m}"),
        GroupSpec::Dihedral(m) => format!("dihedral:{m}"),
        GroupSpec::Symmetric(m) => format!("symmetric:{m}"),
        GroupSpec::Product(a, b) => format!("{}*{}", gspec_name(a), gspec_name(b)),
        GroupSpec::Table(t) => format!("table({})", t.len()),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Verify { spec } => verify(&ctx, &ctx.spec(spec)?),
        Command::Pullback { spec } => pullback_cmd(&ctx, &ctx.spec(spec)?),
        Command::Crossed { spec } => crossed(&ctx, &ctx.spec(spec)?),
        Command::Imprimitivity { spec } => imprimitivity(&ctx, &ctx.spec(spec)?),
        Command::Landstad { spec } => landstad(&ctx, &ctx.spec(spec)?),
        Command::OlesenPedersen { spec } => olesen_pedersen(&ctx, &ctx.spec(spec)?),
        Command::Gsimple { spec } => gsimple(&ctx, &ctx.spec(spec)?),
        Command::Obstruction { subgroup } => obstruction(&ctx, subgroup),
        Command::Ep { spec, witness } => ep(&ctx, &ctx.spec(spec)?, witness.as_deref()),
        Command::Report { spec } => report(&ctx, &ctx.spec(spec)?),
    }
}

fn check_tol(tol: f64) -> f64 {
    tol.sqrt()
}

fn axioms_json(r: &AxiomReport) -> Value {
    let mut m = Map::new();
    for axiom in Axiom::ALL {
        let worst = r.violations.iter().filter(|v| v.axiom == axiom).map(|v| v.residual).fold(None, |a: Option<f64>, b| Some(a.map_or(b, |a| a.max(b))));
        let at: Vec<Value> = r.violations.iter().filter(|v| v.axiom == axiom).map(|v| json!([v.s, v.t])).collect();
        m.insert(axiom.name().into(), json!({"passed": r.holds(axiom), "worst_residual": worst, "violations_at": at}));
    }
    Value::Object(m)
}

fn bundle_summary(b: &Bundle) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("group_order".into(), json!(b.group().order()));
    m.insert("ambient_dim".into(), json!(b.ambient_dim()));
    m.insert("fiber_dims".into(), json!(b.fiber_dims()));
    m.insert("total_dim".into(), json!(b.total_dim()));
    m
}

fn iso_json(r: &IsoReport) -> Value {
    json!({
        "bijective": r.bijective,
        "fiber_membership": r.fiber_membership,
        "multiplicative": r.multiplicative,
        "involutive": r.involutive,
        "isometric": r.isometric,
    })
}

/// Stops with exit 1 when the axioms fail, since later checks assume them.
fn require_axioms(command: &str, b: &Bundle, tol: f64) -> Result<(), Outcome> {
    let r = b.verify(tol);
    if r.passed() {
        return Ok(());
    }
    let mut body = bundle_summary(b);
    body.insert("axioms".into(), axioms_json(&r));
    body.insert("error".into(), json!("the input is not a Fell bundle"));
    Err(Outcome::new(command, false, body))
}

macro_rules! require {
    ($command:expr, $b:expr, $tol:expr) => {
        if let Err(o) = require_axioms($command, $b, $tol) {
            return Ok(o);
        }
    };
}

fn math_failure(command: &str, b: &Bundle, msg: String) -> Outcome {
    let mut body = bundle_summary(b);
    body.insert("error".into(), json!(msg));
    Outcome::new(command, false, body)
}

fn verify(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    let r = spec.bundle.verify(tol);
    let mut body = bundle_summary(&spec.bundle);
    body.insert("axioms".into(), axioms_json(&r));
    Ok(Outcome::new("verify", r.passed(), body))
}

fn pullback_cmd(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    let (gspec, q) = ctx.quotient(spec)?;
    let p = pullback(&spec.bundle, &q, tol).map_err(|e| CliError::Validation(e.to_string()))?;
    let report = bundle_json(&gspec, &p);
    Ok(Outcome { report, passed: true })
}

fn crossed(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    require!("crossed", &spec.bundle, tol);
    let cp = match CrossedProduct::new(&spec.bundle, tol) {
        Ok(cp) => cp,
        Err(e) => return Ok(math_failure("crossed", &spec.bundle, e.to_string())),
    };
    let r = cp.verify(tol);
    let blocks = cp.block_count(tol).ok();
    let mut body = bundle_summary(&spec.bundle);
    body.insert(
        "crossed_product".into(),
        json!({
            "dim": cp.dim(),
            "ambient_dim": cp.ambient_dim(),
            "expected_dim": spec.bundle.group().order() * spec.bundle.total_dim(),
            "blocks": blocks,
            "groupoid_product": r.groupoid_product,
            "groupoid_adjoint": r.groupoid_adjoint,
            "isometry": r.isometry,
            "covariance": r.covariance,
            "dual_action": r.dual_action,
            "dimension_law": r.dimension_law,
            "faithful": r.faithful,
        }),
    );
    Ok(Outcome::new("crossed", r.holds(check_tol(tol)), body))
}

fn imprimitivity(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    let (_, q) = ctx.quotient(spec)?;
    require!("imprimitivity", &spec.bundle, tol);
    let imp = match Imprimitivity::new(q, spec.bundle.clone(), tol) {
        Ok(imp) => imp,
        Err(e) => return Ok(math_failure("imprimitivity", &spec.bundle, e.to_string())),
    };
    let r = imp.verify(tol);
    let mut items = Map::new();
    for i in &r.items {
        items.insert(i.item.into(), json!({"description": i.description, "passed": i.passed, "residual": i.residual}));
    }
    let eq = imp.equivariance();
    let eq_ok = eq.left_inner.max(eq.right_action) <= check_tol(tol);
    let mut body = bundle_summary(&spec.bundle);
    body.insert("items".into(), Value::Object(items));
    body.insert("equivariance".into(), json!({"left_inner": eq.left_inner, "right_action": eq.right_action, "passed": eq_ok}));
    let mut passed = r.passed() && eq_ok;
    match imp.morita_report(tol) {
        Ok(m) => {
            passed &= m.equivalent;
            body.insert(
                "morita".into(),
                json!({"dim_b": m.dim_b, "dim_c": m.dim_c, "dim_x": m.dim_x, "blocks_b": m.blocks_b, "blocks_c": m.blocks_c, "equivalent": m.equivalent}),
            );
        }
        Err(e) => {
            passed = false;
            body.insert("morita".into(), json!({"error": e.to_string()}));
        }
    }
    Ok(Outcome::new("imprimitivity", passed, body))
}

fn multiplier_family(spec: &BundleSpec, q: &Quotient) -> Result<MultiplierFamily<f64>, CliError> {
    let given = spec.multipliers.as_ref().ok_or_else(|| CliError::Validation("spec has no `multipliers`".into()))?;
    let g = q.group();
    let members: Vec<usize> = g.elements().collect();
    let unitaries = members
        .iter()
        .map(|s| given.get(s).cloned().ok_or_else(|| CliError::Validation(format!("multipliers: missing element {s}"))))
        .collect::<Result<Vec<_>, _>>()?;
    MultiplierFamily::new(g.clone(), &members, unitaries).map_err(|e| CliError::Validation(format!("multipliers: {e}")))
}

fn duality_failure(command: &str, b: &Bundle, e: DualityError) -> Result<Outcome, CliError> {
    match e {
        DualityError::MultiplierNotOrderCompatible(_) | DualityError::FiberNotPrincipal(_) | DualityError::InvalidMultiplierFamily(_) => {
            Ok(math_failure(command, b, e.to_string()))
        }
        other => Err(CliError::Validation(other.to_string())),
    }
}

fn landstad_run(ctx: &Ctx, spec: &BundleSpec) -> Result<Result<(Quotient, LandstadResult<f64>), DualityError>, CliError> {
    let tol = ctx.tol(Some(spec));
    let (_, q) = ctx.quotient(spec)?;
    let u = multiplier_family(spec, &q)?;
    Ok(landstad_reconstruct(&spec.bundle, &q, &u, tol).map(|r| (q, r)))
}

fn tau_json(q: &Quotient, r: &LandstadResult<f64>) -> Value {
    let m: Map<String, Value> = q.normal().members().iter().map(|&n| (n.to_string(), matrix_json(r.action.tau(n)))).collect();
    Value::Object(m)
}

fn landstad(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    require!("landstad", &spec.bundle, tol);
    let (q, r) = match landstad_run(ctx, spec)? {
        Ok(x) => x,
        Err(e) => return duality_failure("landstad", &spec.bundle, e),
    };
    let mut body = bundle_summary(&spec.bundle);
    body.insert("unit_fiber_dim".into(), json!(r.action.algebra().dim()));
    body.insert("tau".into(), tau_json(&q, &r));
    body.insert("isomorphism".into(), iso_json(&r.isomorphism));
    Ok(Outcome::new("landstad", r.isomorphism.holds(check_tol(tol)), body))
}

fn olesen_pedersen(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    require!("olesen-pedersen", &spec.bundle, tol);
    let (q, r) = match landstad_run(ctx, spec)? {
        Ok(x) => x,
        Err(e) => return duality_failure("olesen-pedersen", &spec.bundle, e),
    };
    let action = &r.action;
    let run = || -> Result<_, DualityError> {
        let op = olesen_pedersen_forward(action, tol)?;
        let u = transported_family(action, &op, tol)?;
        let tau = extract_twist(action, &op.semidirect, &u, tol)?;
        Ok((op, tau))
    };
    let (op, tau) = match run() {
        Ok(x) => x,
        Err(e) => return duality_failure("olesen-pedersen", &spec.bundle, e),
    };
    let tau_residual = tau.iter().map(|(n, t)| (t - action.tau(*n)).max_abs()).fold(0.0, f64::max);
    let mut body = bundle_summary(&spec.bundle);
    body.insert("tau".into(), tau_json(&q, &r));
    body.insert("semidirect_dim".into(), json!(op.dim_semidirect()));
    body.insert("pullback_dim".into(), json!(op.dim_pullback()));
    body.insert("isomorphism".into(), iso_json(&op.isomorphism));
    body.insert("extracted_tau_residual".into(), json!(tau_residual));
    let passed = op.isomorphism.holds(check_tol(tol)) && tau_residual <= check_tol(tol);
    Ok(Outcome::new("olesen-pedersen", passed, body))
}

fn graded_summary(b: &Bundle, tol: f64) -> Result<(Vec<usize>, bool), String> {
    let s = SectionAlgebra::new(b, tol).map_err(|e| e.to_string())?;
    let ideals = graded_ideals(&s, tol).map_err(|e| e.to_string())?;
    let simple = is_g_simple(&s, tol).map_err(|e| e.to_string())?;
    Ok((ideals.iter().map(|i| i.dim()).collect(), simple))
}

fn gsimple(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    require!("gsimple", &spec.bundle, tol);
    let mut body = bundle_summary(&spec.bundle);
    match graded_summary(&spec.bundle, tol) {
        Ok((dims, simple)) => {
            body.insert("graded_ideal_dims".into(), json!(dims));
            body.insert("g_simple".into(), json!(simple));
            Ok(Outcome::new("gsimple", true, body))
        }
        Err(e) => Ok(math_failure("gsimple", &spec.bundle, e)),
    }
}

fn obstruction(ctx: &Ctx, subgroup: &str) -> Result<Outcome, CliError> {
    let tol = ctx.tol(None);
    let gspec = ctx.group()?;
    let g = Arc::new(gspec.build()?);
    let h = parse_index_flag(subgroup, "subgroup")?;
    let n = ctx.normal(None)?;
    let act = GSetAction::on_cosets(g, &h).map_err(|e| CliError::Validation(format!("--subgroup: {e}")))?;
    let r = match stabilizer_obstruction(&act, &n) {
        Ok(r) => r,
        Err(e) => return Err(CliError::Validation(format!("--normal: {e}"))),
    };
    let crossed = act.crossed_product_bundle::<f64>(tol).map_err(|e| CliError::Validation(e.to_string()))?;
    let (dims, simple) = graded_summary(&crossed, tol).map_err(CliError::Validation)?;
    let verdict = if r.induced_possible { "no_obstruction" } else { "not_weakly_induced" };
    let mut body = Map::new();
    body.insert("group".into(), json!(gspec_name(&gspec)));
    body.insert("subgroup".into(), json!(h));
    body.insert("normal_subgroup".into(), json!(n));
    body.insert("points".into(), json!(act.size()));
    body.insert("orbits".into(), json!(act.orbits()));
    body.insert("stabilizer_kernel".into(), json!(r.kernel));
    body.insert("induced_possible".into(), json!(r.induced_possible));
    body.insert("verdict".into(), json!(verdict));
    body.insert("invariant_ideals".into(), json!(act.invariant_ideal_count()));
    body.insert("dual_grading".into(), json!({"total_dim": crossed.total_dim(), "graded_ideal_dims": dims, "g_simple": simple}));
    Ok(Outcome::new("obstruction", true, body))
}

fn ep_error(e: EpError) -> CliError {
    CliError::Validation(e.to_string())
}

fn ep(ctx: &Ctx, spec: &BundleSpec, witness: Option<&std::path::Path>) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    require!("ep", &spec.bundle, tol);
    let b = &spec.bundle;
    let (w, kind) = match witness {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let f = parse_witness(&text, b.ambient_dim(), b.group().order()).map_err(|e| e.with_context(&path.display().to_string()))?;
            (EpWitness::new(b, f, tol).map_err(ep_error)?, "file")
        }
        None => (EpWitness::uniform(b, tol).map_err(ep_error)?, "uniform"),
    };
    let d = ep_defect(b, &w);
    let mut body = bundle_summary(b);
    body.insert("witness".into(), json!(kind));
    body.insert("support".into(), json!(w.values().keys().collect::<Vec<_>>()));
    body.insert("bound".into(), json!(d.bound));
    body.insert("defect".into(), json!(d.defect));
    Ok(Outcome::new("ep", true, body))
}

fn report(ctx: &Ctx, spec: &BundleSpec) -> Result<Outcome, CliError> {
    let tol = ctx.tol(Some(spec));
    let b = &spec.bundle;
    let axioms = b.verify(tol);
    let mut body = bundle_summary(b);
    body.insert("axioms".into(), axioms_json(&axioms));
    if !axioms.passed() {
        return Ok(Outcome::new("report", false, body));
    }
    let mut passed = true;
    let mut sections = BTreeMap::new();
    match CrossedProduct::new(b, tol) {
        Ok(cp) => {
            let r = cp.verify(tol);
            passed &= r.holds(check_tol(tol));
            sections.insert("crossed_product", json!({"dim": cp.dim(), "dimension_law": r.dimension_law, "max_residual": r.max_residual()}));
        }
        Err(e) => {
            passed = false;
            sections.insert("crossed_product", json!({"error": e.to_string()}));
        }
    }
    match SectionAlgebra::new(b, tol).and_then(|s| s.block_count()) {
        Ok(blocks) => {
            sections.insert("section_algebra", json!({"dim": b.total_dim(), "blocks": blocks}));
        }
        Err(e) => {
            passed = false;
            sections.insert("section_algebra", json!({"error": e.to_string()}));
        }
    }
    match graded_summary(b, tol) {
        Ok((dims, simple)) => sections.insert("graded_ideals", json!({"dims": dims, "g_simple": simple})),
        Err(e) => sections.insert("graded_ideals", json!({"error": e})),
    };
    match amenability_report(b, tol) {
        Ok(a) => {
            passed &= a.regular_rep_kernel_dim == 0;
            sections.insert(
                "amenability",
                json!({"regular_rep_kernel_dim": a.regular_rep_kernel_dim, "ep_exact_witness_found": a.ep_exact_witness_found, "uniform_defect": a.defect}),
            );
        }
        Err(e) => {
            passed = false;
            sections.insert("amenability", json!({"error": e.to_string()}));
        }
    }
    if ctx.cli.normal.is_some() || spec.normal_subgroup.is_some() {
        let n = ctx.normal(Some(spec))?;
        let (an, _) = restrict(b, &n).map_err(|e| CliError::Validation(format!("--normal: {e}")))?;
        let ok = an.verify(tol).passed();
        passed &= ok;
        let defect = EpWitness::uniform(&an, tol).map(|w| ep_defect(&an, &w).defect).ok();
        sections.insert("restriction", json!({"subgroup": n, "fiber_dims": an.fiber_dims(), "axioms_passed": ok, "uniform_defect": defect}));
    }
    for (k, v) in sections {
        body.insert(k.into(), v);
    }
    Ok(Outcome::new("report", passed, body))
}
