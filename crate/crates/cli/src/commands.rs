use serde::Deserialize;
use serde_json::{json, Value};

use kummer_core::algebra::{json as js, MPoly, ProjPoint, Scalar};
use kummer_core::enriques::{
    build_graph, double_cover_graph, group_preserves_graph, invariants, max_independent_sets,
    orbit_coverage,
};
use kummer_core::groups::{kummer_group_linear, signed_permutation_group};
use kummer_core::kummer::{
    build_surface, cefalu_crossratio_certificate, cefalu_frame, cefalu_quartic,
    configuration_check, cremona_test, normalize_coefficients, project_from_node,
    self_dual_remainder, trope_double_conic, validate_params, verify_nodes, KummerSurface, Params,
};
use kummer_core::picard::{
    infinite_order_certificate, iota, switch_isometry, trope_class, NsVector,
};
use kummer_core::segre::{
    dual_point, duality_certificate, gallery, project, search_center, segre_cubic,
    sixteen_node_certificate, tangent_section,
};
use kummer_core::theta::{identity_residuals, kummer_from_tau, SiegelTau};
use kummer_core::{Error, Result};

use crate::report::Report;
use crate::{Command, RunConfig};

/// Centre used by `segre` when none is given: the first admissible point of
/// the search box of radius 5.
const DEFAULT_CENTER: [i64; 5] = [5, 1, -4, 1, 1];

pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    match &cfg.command {
        Command::Validate(p) => validate(&p.a),
        Command::Build(p) => build(&p.a),
        Command::Certify { params, node } => certify(&params.a, *node, cfg.jobs),
        Command::Graph(p) => graph(&p.a),
        Command::Picard { params, swap } => picard(&params.a, swap),
        Command::Segre { center, search } => segre(center.as_deref(), *search),
        Command::Theta {
            tau,
            epsilon,
            residual_tol,
            samples,
            seed,
        } => theta(tau, *epsilon, *residual_tol, *samples, *seed),
        Command::Cefalu => cefalu(cfg.jobs),
    }
}

type Task<'a> = Box<dyn FnOnce() -> Result<Value> + Send + 'a>;

/// Runs named certificates, at most `jobs` at a time, and records them in
/// order. A certificate error marks the check failed; other errors abort.
fn run_tasks(
    report: &mut Report,
    jobs: usize,
    tasks: Vec<(&'static str, Task<'_>)>,
) -> Result<Value> {
    let mut results: Vec<(&str, Result<Value>)> = Vec::with_capacity(tasks.len());
    let mut pending = tasks.into_iter().peekable();
    while pending.peek().is_some() {
        let batch: Vec<_> = pending.by_ref().take(jobs).collect();
        let done: Vec<(&str, Result<Value>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .into_iter()
                .map(|(name, f)| (name, scope.spawn(f)))
                .collect();
            handles
                .into_iter()
                .map(|(name, h)| (name, h.join().expect("certificate thread panicked")))
                .collect()
        });
        results.extend(done);
    }
    let mut out = serde_json::Map::new();
    for (name, r) in results {
        match r {
            Ok(v) => {
                let passed = v.get("passed").and_then(Value::as_bool).unwrap_or(true);
                report.check(name, passed);
                out.insert(name.into(), v);
            }
            Err(Error::Certificate(msg)) => {
                report.check(name, false);
                out.insert(name.into(), json!({ "passed": false, "error": msg }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Value::Object(out))
}

fn params(args: &[String]) -> Result<Params> {
    Params::parse(args)
}

fn surface(args: &[String]) -> Result<KummerSurface> {
    build_surface(&params(args)?)
}

fn validate(args: &[String]) -> Result<Report> {
    let p = params(args)?;
    let v = validate_params(&p);
    let mut r = Report::new("validate");
    r.check("conditions I-III", v.is_valid());
    r.input_rejected = !v.is_valid();
    r.result = json!({
        "params": js::scalars(p.coords()),
        "valid": v.is_valid(),
        "failures": v.failures,
    });
    Ok(r)
}

fn build(args: &[String]) -> Result<Report> {
    let s = surface(args)?;
    let mut r = Report::new("build");
    r.check("sixteen distinct nodes", s.nodes().len() == 16);
    r.check("sixteen distinct tropes", s.tropes().len() == 16);
    r.result = s.to_json(json!({}));
    Ok(r)
}

fn nodes_task(s: &KummerSurface) -> Result<Value> {
    let n = verify_nodes(s)?;
    Ok(json!({ "hessian_ranks": n.hessian_ranks }))
}

fn configuration_task(s: &KummerSurface) -> Result<Value> {
    Ok(serde_json::to_value(configuration_check(&s.config)?).unwrap())
}

fn tropes_task(s: &KummerSurface) -> Result<Value> {
    let items: Vec<Value> = (0..s.tropes().len())
        .map(|j| {
            let (conic, c) = trope_double_conic(s, j)?;
            Ok(json!({ "trope": js::point(&s.tropes()[j]), "conic": conic.to_string(), "scale": js::scalar(&c) }))
        })
        .collect::<Result<_>>()?;
    Ok(Value::Array(items))
}

fn self_duality_task(f: &MPoly) -> Result<Value> {
    let rem = self_dual_remainder(f)?;
    Ok(json!({ "passed": rem.is_zero(), "remainder_terms": rem.terms().count() }))
}

fn projection_task(
    s: &KummerSurface,
    node: usize,
    frame: Option<&kummer_core::algebra::QMat>,
) -> Result<Value> {
    let pr = project_from_node(s, node, frame)?;
    Ok(json!({
        "node": js::point(&s.nodes()[node]),
        "frame": js::matrix(&pr.frame),
        "phi": pr.phi.to_string(),
        "psi": pr.psi.to_string(),
        "f": pr.f.to_string(),
        "sextic": js::mpoly(&pr.sextic),
        "lines": pr.lines.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "scale": js::scalar(&pr.scale),
    }))
}

fn certify(args: &[String], node: usize, jobs: usize) -> Result<Report> {
    let s = surface(args)?;
    if node >= s.nodes().len() {
        return Err(Error::InvalidParams(format!("no node {node}")));
    }
    let mut r = Report::new("certify");
    let s_ref = &s;
    let tasks: Vec<(&'static str, Task<'_>)> = vec![
        ("nodes", Box::new(move || nodes_task(s_ref))),
        ("configuration", Box::new(move || configuration_task(s_ref))),
        ("tropes", Box::new(move || tropes_task(s_ref))),
        (
            "self_duality",
            Box::new(move || self_duality_task(&s_ref.f)),
        ),
        (
            "projection_sextic",
            Box::new(move || projection_task(s_ref, node, None)),
        ),
    ];
    let certs = run_tasks(&mut r, jobs, tasks)?;
    r.result = s.to_json(certs);
    Ok(r)
}

fn graph(args: &[String]) -> Result<Report> {
    let s = surface(args)?;
    let g = build_graph(s.nodes())?;
    let inv = invariants(&g);
    let sets = max_independent_sets(&g);
    let vectors = kummer_group_linear().vector_orbit(s.params.coords())?;
    let cover = double_cover_graph(&vectors)?;
    let c = &cover.report;

    let mut r = Report::new("graph");
    r.check(
        "16 vertices, 48 edges, 32 triangles",
        (inv.vertices, inv.edges, inv.triangles) == (16, 48, 32),
    );
    r.check("euler characteristic 0", inv.euler == 0);
    r.check("6-regular", inv.degrees.iter().all(|&d| d == 6));
    r.check(
        "every edge in two triangles",
        inv.edge_triangle_counts.iter().all(|&k| k == 2),
    );
    r.check(
        "maximum independent sets have size 4",
        sets.max_size == 4 && sets.count_of_size_five == 0,
    );
    r.check(
        "double cover: 32 vertices, 96 edges, 2-to-1",
        (c.vertices, c.edges, c.euler) == (32, 96, 0) && c.covering && c.connected,
    );
    r.dot = Some(g.to_dot("kummer"));
    r.result = json!({
        "vertices": g.vertices.iter().map(js::point).collect::<Vec<_>>(),
        "edges": g.edges(),
        "invariants": inv,
        "independent_sets": {
            "max_size": sets.max_size,
            "count_of_size_five": sets.count_of_size_five,
            "count": sets.sets.len(),
            "classes": sets.classes,
        },
        "double_cover": cover.report,
    });
    Ok(r)
}

fn picard(args: &[String], swap: &[usize]) -> Result<Report> {
    let s = surface(args)?;
    let (a, b) = (swap[0], swap[1]);
    if !(1..=16).contains(&a) || !(1..=16).contains(&b) || a == b {
        return Err(Error::InvalidParams(format!(
            "swap needs two distinct nodes in 1..16, got {a} {b}"
        )));
    }
    let mut r = Report::new("picard");
    // Isometry construction checks the Gram form; failures surface as errors.
    let iota = iota(a - 1)?;
    r.check("projection involution preserves the form", true);
    r.check("projection involution squares to 1", iota.is_involution());
    let sigma = switch_isometry(s.incidence())?;
    r.check("switch preserves the form", true);
    r.check("switch squares to 1", sigma.is_involution());

    let d_sum = (0..16)
        .map(|i| trope_class(i, s.incidence()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .fold(NsVector::zero(), |acc, d| acc.add(d));
    let e_sum = (0..16).fold(NsVector::zero(), |acc, i| acc.add(&NsVector::e(i)));
    let expected = NsVector::h()
        .scale(&Scalar::from_int(8))
        .sub(&e_sum.scale(&Scalar::from_int(3)));
    r.check("sum of trope classes is 8H - 3 sum E", d_sum == expected);

    let cert = infinite_order_certificate(a - 1, b - 1)?;
    r.check(
        "swap after projection has infinite order",
        cert.infinite_order,
    );
    r.result = json!({
        "iota": { "node": a, "image_of_h": iota.apply(&NsVector::h()).to_string() },
        "switch": { "image_of_h": sigma.apply(&NsVector::h()).to_string() },
        "trope_class_sum": d_sum.to_string(),
        "infinite_order": cert,
    });
    Ok(r)
}

fn segre(center: Option<&[String]>, search: Option<i64>) -> Result<Report> {
    let cubic = segre_cubic()?;
    let (pd, sixteen) = match (center, search) {
        (_, Some(bound)) => {
            if bound <= 0 {
                return Err(Error::InvalidParams("search bound must be positive".into()));
            }
            search_center(&cubic, bound)?
        }
        (Some(c), None) => {
            let p = ProjPoint::new(c.iter().map(|x| x.parse()).collect::<Result<_>>()?)?;
            let pd = project(&cubic, &p)?;
            let rep = sixteen_node_certificate(&pd)?;
            (pd, rep)
        }
        (None, None) => {
            let pd = project(&cubic, &ProjPoint::from_i64(&DEFAULT_CENTER)?)?;
            let rep = sixteen_node_certificate(&pd)?;
            (pd, rep)
        }
    };
    let section = tangent_section(&dual_point(&pd.center)?)?;
    let dual = duality_certificate(&pd, &section)?;
    let items = gallery()?;

    let mut r = Report::new("segre");
    r.check("cubic has 10 nodes", cubic.nodes.len() == 10);
    r.check("cubic contains 15 planes", cubic.planes.len() == 15);
    r.check(
        "projected nodes are singular",
        sixteen.projected_nodes == 10,
    );
    r.check(
        "resultant sextic is squarefree, 16 nodes",
        sixteen.squarefree && sixteen.total_nodes == 16,
    );
    r.check(
        "derivative identity",
        sixteen.f_in_ideal && sixteen.gradient_in_ideal,
    );
    r.check("tangent section has 16 nodes", section.nodes.len() == 16);
    r.check("discriminant dual to tangent section", dual);
    for it in &items {
        r.check(format!("gallery: {}", it.name), it.passed);
    }
    r.result = json!({
        "cubic": { "equation": cubic.f.to_string(), "nodes": cubic.nodes.iter().map(js::point).collect::<Vec<_>>() },
        "center": js::point(&pd.center),
        "discriminant": js::mpoly(&pd.f),
        "node_images": pd.node_images.iter().map(js::point).collect::<Vec<_>>(),
        "sixteen_nodes": sixteen,
        "tangent_section": {
            "point": js::point(&section.point),
            "quartic": section.quartic.to_string(),
            "nodes": section.nodes.iter().map(js::point).collect::<Vec<_>>(),
        },
        "duality": dual,
        "gallery": items,
    });
    Ok(r)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TauInput {
    Pairs([[[f64; 2]; 2]; 2]),
    Parts {
        re: [[f64; 2]; 2],
        im: [[f64; 2]; 2],
    },
}

fn parse_tau(s: &str) -> Result<SiegelTau> {
    let t: TauInput = serde_json::from_str(s).map_err(|e| Error::Parse(format!("tau: {e}")))?;
    match t {
        TauInput::Pairs(m) => {
            SiegelTau::from_parts(m.map(|r| r.map(|c| c[0])), m.map(|r| r.map(|c| c[1])))
        }
        TauInput::Parts { re, im } => SiegelTau::from_parts(re, im),
    }
}

fn theta(tau: &str, eps: f64, residual_tol: f64, samples: usize, seed: u64) -> Result<Report> {
    if !(eps > 0.0 && residual_tol > 0.0) {
        return Err(Error::InvalidParams("tolerances must be positive".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParams("need at least one sample".into()));
    }
    let tau = parse_tau(tau)?;
    let ids = identity_residuals(&tau, eps, samples, seed)?;
    let pipe = kummer_from_tau(&tau, eps, samples, seed)?;
    let bound = 50.0 * eps;
    let mut r = Report::new("theta");
    r.check("addition formula", ids.addition_max < bound);
    r.check("half-period shifts", ids.halfperiod_max < bound);
    r.check("parity", ids.parity_max < bound);
    r.check("thetanull conditions", pipe.diagnostics.failures.is_empty());
    r.check(
        "embedding residual",
        pipe.residual_max.is_some_and(|x| x < residual_tol),
    );
    r.check(
        "two-torsion images match the node orbit",
        pipe.matched_two_torsion,
    );
    r.result = json!({ "identities": ids, "bound": bound, "pipeline": pipe });
    Ok(r)
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn poly3(terms: &[(i64, [u32; 3])]) -> Result<MPoly> {
    MPoly::from_terms(
        3,
        terms
            .iter()
            .map(|(c, e)| (e.to_vec(), Scalar::from_int(*c)))
            .collect(),
    )
}

fn points(v: &[[i64; 4]]) -> Result<Vec<ProjPoint>> {
    let mut out: Vec<ProjPoint> = v
        .iter()
        .map(|p| ProjPoint::from_i64(p))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

fn cefalu(jobs: usize) -> Result<Report> {
    let args: Vec<String> = ["0", "1", "1", "1"].iter().map(|s| s.to_string()).collect();
    let s = surface(&args)?;
    let mut r = Report::new("cefalu");

    let hudson = normalize_coefficients(&s.hudson)?;
    r.check(
        "hudson proportional to (2,-1,-1,-1,0)",
        hudson == normalize_coefficients(&ints(&[2, -1, -1, -1, 0]))?,
    );
    let ratio = s.f.proportionality(&cefalu_quartic());
    r.check("F proportional to (sum z^2)^2 - 3 sum z^4", ratio.is_some());

    let node = ProjPoint::from_i64(&[1, 1, 1, 0])?;
    let p1 = s
        .nodes()
        .iter()
        .position(|p| *p == node)
        .expect("(1,1,1,0) is a node");
    let trope = ProjPoint::from_i64(&[0, 1, 1, 1])?;
    let t = s
        .tropes()
        .iter()
        .position(|p| *p == trope)
        .expect("z2+z3+z4 is a trope");
    let (conic, _) = trope_double_conic(&s, t)?;
    let expected_conic = poly3(&[
        (-1, [2, 0, 0]),
        (1, [0, 2, 0]),
        (1, [0, 0, 2]),
        (1, [0, 1, 1]),
    ])?;
    r.check(
        "trope z2+z3+z4 cuts the expected double conic",
        conic.proportionality(&expected_conic).is_some(),
    );

    let frame = cefalu_frame();
    let pr = project_from_node(&s, p1, Some(&frame))?;
    let (w2, w3, w4sq) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2).pow(2));
    let expected =
        &(&(&w4sq - &w2.pow(2)) * &(&w4sq - &w3.pow(2))) * &(&w4sq - &(&w2 + &w3).pow(2));
    r.check(
        "branch sextic at (1,1,1,0)",
        pr.sextic.proportionality(&expected).is_some(),
    );

    let cross = cefalu_crossratio_certificate();
    r.check("tangency values -3,-1,0,1,3", cross.is_ok());

    let tetrad = points(&[[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])?;
    let cremona = cremona_test(&s.f, &tetrad, None, &[ProjPoint::from_i64(&[0, 1, 1, -1])?])?;

    let g = build_graph(s.nodes())?;
    let group = signed_permutation_group();
    let preserves = group_preserves_graph(&group, &g)?;
    r.check("G acts on the graph", preserves);
    let sets = max_independent_sets(&g);
    let refs = vec![
        points(&[[1, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]])?,
        points(&[[1, 1, 1, 0], [1, 1, -1, 0], [1, -1, 1, 0], [-1, 1, 1, 0]])?,
        points(&[[1, 1, 1, 0], [1, 1, 0, -1], [1, 0, 1, -1], [0, 1, 1, -1]])?,
    ];
    let coverage = orbit_coverage(&g, &sets, &group, &refs)?;

    let s_ref = &s;
    let tasks: Vec<(&'static str, Task<'_>)> = vec![
        ("nodes", Box::new(move || nodes_task(s_ref))),
        (
            "self_duality",
            Box::new(move || self_duality_task(&s_ref.f)),
        ),
        (
            "infinite_order",
            Box::new(|| {
                let c = infinite_order_certificate(p1, (p1 + 1) % 16)?;
                Ok(json!({ "passed": c.infinite_order, "report": c }))
            }),
        ),
    ];
    let certs = run_tasks(&mut r, jobs, tasks)?;

    r.result = json!({
        "hudson": js::scalars(&s.hudson),
        "F": js::mpoly(&s.f),
        "ratio_to_displayed_equation": ratio.as_ref().map(js::scalar),
        "trope_conic": conic.to_string(),
        "projection": {
            "frame": js::matrix(&frame),
            "phi": pr.phi.to_string(),
            "sextic": js::mpoly(&pr.sextic),
        },
        "cross_ratio": match &cross {
            Ok(c) => c.to_json(),
            Err(e) => json!({ "error": e.to_string() }),
        },
        "cremona": cremona.to_json(),
        "independent_set_orbits": coverage,
        "certificates": certs,
    });
    Ok(r)
}
