use ovoid_core::classify::{search, search_report, spot_check, SearchSpace, SPOT_CHECK_SEED};
use ovoid_core::families::{Family, FamilyParams, FamilySpec};
use ovoid_core::linpp::{
    pp_family_pw, pp_family_tp, pw_polynomial, tp_polynomial, LinearizedUnivariate, NotLinearized,
};
use ovoid_core::quadric::{GeneratorVerdict, PairwiseVerdict, Quadric};
use ovoid_core::surface::{
    cm_window, count_affine, find_offplane_witness, hyperplane_section, round_significant,
    threshold_main,
};
use ovoid_core::{build_sf, BivariatePoly, Elem, Error, Field, OvoidCandidate, Result};
use serde_json::{json, Value};

use crate::{Command, FieldCmd, Format, Oracle, OvoidCmd, PolySource, PpCmd, PpFamily, SurfaceCmd};

pub struct Outcome {
    pub report: Value,
    /// Exit 0 when the checked property holds, 1 when it is refuted.
    pub holds: bool,
}

fn holds(report: Value, holds: bool) -> Result<Outcome> {
    Ok(Outcome { report, holds })
}

pub fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => println!("{report}"),
        Format::Text => match report {
            Value::Object(map) => {
                for (k, v) in map {
                    match v {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
            other => println!("{other}"),
        },
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Field(FieldCmd::Info { q }) => field_info(q),
        Command::Ovoid(OvoidCmd::Verify {
            source,
            oracle,
            generator_guard,
        }) => verify(source, *oracle, *generator_guard),
        Command::Ovoid(OvoidCmd::Search {
            q,
            max_deg,
            force_a01_zero,
            full_function_space,
            budget,
            spot_check: spot,
        }) => {
            let field = Field::parse(q)?;
            let space = SearchSpace {
                field,
                max_degree: *max_deg,
                force_a01_zero: *force_a01_zero,
                full_function_space: *full_function_space,
                budget: *budget,
            };
            let result = search(&space)?;
            let report = search_report(&result, &space);
            let mut value = serde_json::to_value(&report).expect("serializable");
            if *spot {
                let check = spot_check(&result, &space, SPOT_CHECK_SEED)?;
                value["spot_check"] = serde_json::to_value(&check).expect("serializable");
            }
            holds(value, report.conformance.passes)
        }
        Command::Surface(cmd) => surface(cmd),
        Command::Bounds(args) => {
            let delta = args.deg as u64 + 1;
            let value = match args.q {
                Some(q) => serde_json::to_value(cm_window(args.r, args.deg, q)).expect("serializable"),
                None => json!({
                    "r": args.r,
                    "degree": delta,
                    "min_valid_q": 2 * (args.r as u64 + 1) * delta * delta + 1,
                    "threshold_main": round_significant(threshold_main(args.deg), 4),
                }),
            };
            holds(value, true)
        }
        Command::Pp(cmd) => pp(cmd),
    }
}

fn elem(field: &Field, index: Option<u64>) -> Result<Option<Elem>> {
    index.map(|i| field.elem(i)).transpose()
}

fn point_json(p: &ovoid_core::ProjPoint5) -> Value {
    json!(p.coords())
}

fn field_info(q: &str) -> Result<Outcome> {
    let field = Field::parse(q)?;
    let report = json!({
        "q": field.q(),
        "p": field.p(),
        "h": field.h(),
        "modulus": field.spec().modulus(),
        "generator": field.generator(),
        "canonical_nonsquare": field.canonical_nonsquare().ok(),
        "trace_one_element": field.trace_one_element().ok(),
    });
    holds(report, true)
}

struct Resolved {
    f: BivariatePoly,
    family: Option<Family>,
}

fn resolve(source: &PolySource) -> Result<Resolved> {
    let field = Field::parse(&source.q)?;
    match (&source.family, &source.f) {
        (Some(name), _) => {
            let family: Family = name.parse()?;
            let params = FamilyParams {
                n: elem(&field, source.n)?,
                a: elem(&field, source.a)?,
                sigma_exp: source.sigma,
            };
            let f = FamilySpec::with_params(family, &field, params).instantiate()?;
            Ok(Resolved {
                f,
                family: Some(family),
            })
        }
        (None, Some(text)) => {
            if source.n.is_some() || source.a.is_some() || source.sigma.is_some() {
                return Err(Error::Restriction {
                    family: "f",
                    reason: "--n, --a and --sigma only apply with --family".into(),
                });
            }
            Ok(Resolved {
                f: BivariatePoly::parse(&field, text)?,
                family: None,
            })
        }
        (None, None) => Err(Error::ParsePoly("one of --family or --f is required".into())),
    }
}

fn base_report(r: &Resolved) -> Value {
    let mut v = json!({
        "q": r.f.field().q(),
        "f": r.f.to_string(),
    });
    if let Some(fam) = r.family {
        v["family"] = json!(fam.name());
    }
    v
}

fn verify(source: &PolySource, oracle: Oracle, guard: u32) -> Result<Outcome> {
    let resolved = resolve(source)?;
    let candidate = OvoidCandidate::new(&resolved.f)?;
    let mut report = base_report(&resolved);
    report["points"] = json!(candidate.len());
    report["oracle"] = json!(match oracle {
        Oracle::Pairwise => "pairwise",
        Oracle::Generators => "generators",
        Oracle::Both => "both",
    });

    // Enumerate generators before the long pairwise scan so a guard refusal
    // comes first.
    let generators = match oracle {
        Oracle::Pairwise => None,
        _ => Some(Quadric::new(candidate.field()).enumerate_generators_with_guard(guard)?),
    };
    let mut ovoid = true;
    if oracle != Oracle::Generators {
        let verdict = candidate.is_ovoid_pairwise();
        if let PairwiseVerdict::Collinear(w) = verdict {
            ovoid = false;
            report["witness"] = json!({
                "first": w.first,
                "second": w.second,
                "points": [
                    point_json(&candidate.affine_point(w.first.0, w.first.1)),
                    point_json(&candidate.affine_point(w.second.0, w.second.1)),
                ],
            });
        }
        report["pairwise"] = json!(verdict.is_ovoid());
    }
    if let Some(gens) = generators {
        let verdict = gens.check(&candidate)?;
        if let GeneratorVerdict::Fails { line, meets } = &verdict {
            ovoid = false;
            let pts: Vec<Value> = line.points(gens.quadric()).iter().map(point_json).collect();
            report["generator_witness"] = json!({ "line": pts, "meets": meets });
        }
        report["generators"] = json!(verdict.is_ovoid());
    }
    report["ovoid"] = json!(ovoid);
    holds(report, ovoid)
}

fn surface(cmd: &SurfaceCmd) -> Result<Outcome> {
    match cmd {
        SurfaceCmd::Count { source } => {
            let r = resolve(source)?;
            let rep = count_affine(&build_sf(&r.f)?)?;
            let mut v = base_report(&r);
            for (k, val) in serde_json::to_value(rep).expect("serializable").as_object().unwrap() {
                v[k] = val.clone();
            }
            holds(v, true)
        }
        SurfaceCmd::Witness { source } => {
            let r = resolve(source)?;
            let w = find_offplane_witness(&build_sf(&r.f)?)?;
            let mut v = base_report(&r);
            v["witness"] = json!(w);
            holds(v, w.is_none())
        }
        SurfaceCmd::Section {
            source,
            coord,
            value,
        } => {
            let r = resolve(source)?;
            let field = r.f.field().clone();
            if *coord > 4 {
                return Err(Error::BadVariable(*coord));
            }
            let form = build_sf(&r.f)?;
            let sec = hyperplane_section(&form, *coord, field.elem(*value)?)?;
            let mut v = base_report(&r);
            v["form"] = json!(form.to_string());
            v["coord"] = json!(coord);
            v["value"] = json!(value);
            v["section"] = json!(sec.to_string());
            holds(v, true)
        }
    }
}

fn not_linearized(e: NotLinearized) -> Error {
    let NotLinearized::Monomial(i, j) = e;
    Error::ParsePoly(format!("monomial x^{i}*y^{j} is not of the form x^(p^k)"))
}

fn uni_report(u: &LinearizedUnivariate) -> Value {
    let kernel = u.is_pp_by_kernel();
    let rank = u.is_pp_by_rank();
    json!({
        "q": u.field().q(),
        "poly": u.to_bivariate().to_string(),
        "pp": kernel && rank,
        "kernel_scan": kernel,
        "rank": rank,
    })
}

fn pp(cmd: &PpCmd) -> Result<Outcome> {
    match cmd {
        PpCmd::Check {
            family,
            poly,
            q,
            m,
            l0,
            m0,
        } => {
            let field = Field::parse(q)?;
            let u = match (family, poly) {
                (_, Some(text)) => {
                    LinearizedUnivariate::from_bivariate(&BivariatePoly::parse(&field, text)?)
                        .map_err(not_linearized)?
                }
                (Some(fam), None) => {
                    let (Some(l0), Some(m0)) = (elem(&field, *l0)?, elem(&field, *m0)?) else {
                        return Err(Error::ParsePoly("--family needs --l0 and --m0".into()));
                    };
                    match fam {
                        PpFamily::Pw => pw_polynomial(&field, l0, m0)?,
                        PpFamily::Tp => {
                            let m = match elem(&field, *m)? {
                                Some(m) => m,
                                None => field.canonical_nonsquare()?,
                            };
                            tp_polynomial(&field, m, l0, m0)?
                        }
                    }
                }
                (None, None) => return Err(Error::ParsePoly("one of --family or --poly is required".into())),
            };
            let report = uni_report(&u);
            let ok = report["pp"].as_bool().unwrap_or(false);
            holds(report, ok)
        }
        PpCmd::Sweep { family, q, m } => {
            let field = Field::parse(q)?;
            match family {
                PpFamily::Pw => {
                    let rep = pp_family_pw(&field)?;
                    let ok = rep.failures.is_empty();
                    holds(serde_json::to_value(rep).expect("serializable"), ok)
                }
                PpFamily::Tp => {
                    let ms: Vec<Elem> = match elem(&field, *m)? {
                        Some(m) => vec![m],
                        None => field
                            .elements()
                            .filter(|&x| !x.is_zero() && !field.is_square(x))
                            .collect(),
                    };
                    let mut pairs = 0;
                    let mut failures = Vec::new();
                    for &m in &ms {
                        let rep = pp_family_tp(&field, m)?;
                        pairs += rep.pairs_checked;
                        failures.extend(rep.failures.into_iter().map(|(l0, m0)| json!({"m": m, "l0": l0, "m0": m0})));
                    }
                    let ok = failures.is_empty();
                    let report = json!({
                        "q": field.q(),
                        "family": "tp",
                        "m": ms,
                        "pairs_checked": pairs,
                        "failures": failures,
                    });
                    holds(report, ok)
                }
            }
        }
    }
}
