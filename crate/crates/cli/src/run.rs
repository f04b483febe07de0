//! Command dispatch: one function per subcommand, each returning a payload
//! with a `table` and the warnings its reports raised.

use num_complex::Complex64;
use num_rational::Ratio;
use orbit_bergman::bergman::{BergmanError, KernelVector, QuadratureSpec, TRUNCATION_LOSS_LIMIT};
use orbit_bergman::dimension::{
    DimensionError, density_estimate, density_for, vn_dimension_exact, vn_dimension_numeric,
};
use orbit_bergman::groups::{
    GroupError, GroupPreset, OrbitBudget, PresetName, orbit_sample, reduce_to_fundamental_domain,
};
use orbit_bergman::modular::{
    FdGrid, ModularError, PeterssonSpec, QSeries, delta_q, eisenstein_q, eval_modular, j_eval,
    log_eta, petersson, rw_function, space_dims,
};
use orbit_bergman::moebius::{GroupElement, MoebiusError, to_disc};
use orbit_bergman::poincare::{PoincareError, gram_matrix_with, poincare_sums, tracelike_deviation};
use orbit_bergman::zero_lab::{
    TransportedVanishing, ZeroLabError, decay_summary, extremal_profile, generator_ball,
    ordered_orbit, vanishing_base_point, wandering_truncated,
};
use orbit_bergman::Point;
use serde_json::{Value, json};
use thiserror::Error;

use crate::config::{Command, ConfigError, FormName, RunConfig};
use crate::emit::{ResultRecord, table};
use crate::verify::{transported_e0, verify_suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bergman(#[from] BergmanError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error(transparent)]
    Poincare(#[from] PoincareError),
    #[error(transparent)]
    ZeroLab(#[from] ZeroLabError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Moebius(_) => "moebius",
            CliError::Group(_) => "group",
            CliError::Bergman(_) => "bergman",
            CliError::Modular(_) => "modular",
            CliError::Dimension(_) => "dimension",
            CliError::Poincare(_) => "poincare",
            CliError::ZeroLab(_) => "zero_lab",
            CliError::Io(_) => "io",
        }
    }

    /// 2 for invalid configuration, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn payload(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

type Outcome = Result<(Value, Vec<String>), CliError>;

fn hp(z: Complex64) -> Result<Point, CliError> {
    Ok(Point::half_plane(z)?)
}

fn first_z(cfg: &RunConfig) -> Result<Point, CliError> {
    let z = cfg.z.first().ok_or_else(|| ConfigError::Invalid("at least one z is required".into()))?;
    hp(*z)
}

fn c2(v: Complex64) -> [f64; 2] {
    [v.re, v.im]
}

pub fn run_experiment(cfg: &RunConfig) -> Result<ResultRecord, CliError> {
    cfg.validate()?;
    let (payload, warnings) = match cfg.command {
        Command::Orbit => orbit(cfg),
        Command::Reduce => reduce(cfg),
        Command::Forms => forms(cfg),
        Command::Eval => eval(cfg),
        Command::Petersson => petersson_cmd(cfg),
        Command::Dims => dims(cfg),
        Command::Poincare => poincare(cfg),
        Command::Tracelike => tracelike(cfg),
        Command::Gram => gram(cfg),
        Command::Vndim => vndim(cfg),
        Command::Density => density(cfg),
        Command::Extremal => extremal(cfg),
        Command::Wandering => wandering(cfg),
        Command::Verify => verify(cfg),
    }?;
    Ok(ResultRecord::new(cfg.clone(), warnings, payload))
}

fn orbit(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let z = first_z(cfg)?;
    let budget = OrbitBudget { max_word_len: cfg.budget_word, max_entry: cfg.budget_norm };
    let sample = orbit_sample(&preset, z, budget)?;
    let radius = sample.certified_radius()?;
    let mut warnings = Vec::new();
    if cfg.budget_word.is_some() {
        warnings.push("word-length budget: the sample certifies no disc radius".to_string());
    }
    let mut rows = Vec::with_capacity(sample.entries.len());
    for e in &sample.entries {
        let g = &e.element;
        let w = to_disc(e.image)?.value();
        rows.push(vec![
            json!(g.a),
            json!(g.b),
            json!(g.c),
            json!(g.d),
            json!(g.word_string()),
            json!(e.image.value().re),
            json!(e.image.value().im),
            json!(w.re),
            json!(w.im),
            json!(e.j_abs_sq),
        ]);
    }
    let payload = json!({
        "preset": sample.preset,
        "base": c2(z.value()),
        "budget": sample.budget,
        "count": sample.entries.len(),
        "enumerated": sample.enumerated,
        "stabilizer_order": sample.stabilizer_order,
        "max_multiplicity": sample.max_multiplicity,
        "certified_radius": radius,
        "table": table(&["a", "b", "c", "d", "word", "re", "im", "disc_re", "disc_im", "j_abs_sq"], rows),
    });
    Ok((payload, warnings))
}

fn reduce(cfg: &RunConfig) -> Outcome {
    let mut rows = Vec::new();
    for &z in &cfg.z {
        let (z0, g) = reduce_to_fundamental_domain(hp(z)?)?;
        rows.push(vec![
            json!(z.re),
            json!(z.im),
            json!(z0.value().re),
            json!(z0.value().im),
            json!(g.a),
            json!(g.b),
            json!(g.c),
            json!(g.d),
            json!(g.word_string()),
        ]);
    }
    let cols = ["re", "im", "reduced_re", "reduced_im", "a", "b", "c", "d", "word"];
    Ok((json!({ "table": table(&cols, rows) }), Vec::new()))
}

/// The q-series named by the form, at truncation `n`.
fn series(cfg: &RunConfig, n: usize) -> Result<Vec<QSeries>, CliError> {
    Ok(match cfg.form {
        FormName::E4 => vec![eisenstein_q(4, n)?],
        FormName::E6 => vec![eisenstein_q(6, n)?],
        FormName::Delta => vec![delta_q(n)?],
        FormName::Cusp => space_dims(cfg.k, n)?.cusp_basis,
        other => {
            return Err(ConfigError::Invalid(format!(
                "form {other:?} has no q-series here; use e4, e6, delta or cusp"
            ))
            .into());
        }
    })
}

fn forms(cfg: &RunConfig) -> Outcome {
    let list = series(cfg, cfg.basis_n)?;
    let len = list.iter().map(|f| f.coeffs.len()).max().unwrap_or(0);
    let mut cols = vec!["n".to_string()];
    cols.extend((0..list.len()).map(|i| format!("coeff_{i}")));
    let decimals: Vec<Vec<String>> = list.iter().map(|f| f.decimal_strings()).collect();
    let rows: Vec<Vec<Value>> = (0..len)
        .map(|n| {
            let mut row = vec![json!(n)];
            row.extend(decimals.iter().map(|d| json!(d.get(n))));
            row
        })
        .collect();
    let cols_ref: Vec<&str> = cols.iter().map(String::as_str).collect();
    let payload = json!({
        "form": cfg.form,
        "weight": list.first().map(|f| f.weight),
        "truncation": cfg.basis_n,
        "count": list.len(),
        "table": table(&cols_ref, rows),
    });
    Ok((payload, Vec::new()))
}

fn eval(cfg: &RunConfig) -> Outcome {
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    let evaluators = match cfg.form {
        FormName::E4 | FormName::E6 | FormName::Delta | FormName::Cusp => series(cfg, cfg.basis_n.max(200))?,
        _ => Vec::new(),
    };
    let rw = rw_function(Complex64::new(cfg.w, 0.0), cfg.r)?;
    for &z in &cfg.z {
        let p = hp(z)?;
        let (value, tail) = match cfg.form {
            FormName::J => (j_eval(p)?, None),
            FormName::Eta => (log_eta(p)?.exp(), None),
            FormName::Rw => (rw.eval(z)?, None),
            _ => {
                let v = eval_modular(&evaluators[0], p)?;
                (v.value, Some(v.tail_bound))
            }
        };
        if let Some(t) = tail
            && t > 1e-10 * value.norm()
        {
            warnings.push(format!("tail bound {t:e} at z = {z} is large relative to the value"));
        }
        rows.push(vec![json!(z.re), json!(z.im), json!(value.re), json!(value.im), json!(value.norm()), json!(tail)]);
    }
    let mut payload = json!({
        "form": cfg.form,
        "table": table(&["re", "im", "value_re", "value_im", "abs", "tail_bound"], rows),
    });
    if cfg.form == FormName::Rw {
        payload["weight"] = json!(rw.weight());
        if let Some(g) = &cfg.grid {
            let grid = FdGrid { nx: g.nx, ny: g.ny, y_max: g.y_max };
            let a = rw.growth_certificate(&grid)?;
            let b = rw.growth_certificate(&grid.refined())?;
            let change = (a.sup - b.sup).abs() / b.sup;
            if change > 0.01 {
                warnings.push(format!("growth supremum moved by {change:e} under refinement"));
            }
            payload["growth"] = json!({ "coarse": a, "refined": b, "relative_change": change });
        }
    }
    Ok((payload, warnings))
}

fn petersson_cmd(cfg: &RunConfig) -> Outcome {
    let list = match cfg.form {
        FormName::Delta => vec![delta_q(cfg.basis_n)?],
        FormName::Cusp => space_dims(cfg.k, cfg.basis_n)?.cusp_basis,
        other => {
            return Err(ConfigError::Invalid(format!("Petersson products need delta or cusp, not {other:?}")).into());
        }
    };
    let spec = PeterssonSpec::default();
    let mut rows = Vec::new();
    for (i, f) in list.iter().enumerate() {
        for (j, g) in list.iter().enumerate() {
            let e = petersson(f, g, &spec)?;
            rows.push(vec![
                json!(i),
                json!(j),
                json!(e.value.re),
                json!(e.value.im),
                json!(e.height),
                json!(e.tail_bound),
                json!(e.refinement_delta),
            ]);
        }
    }
    let payload = json!({
        "form": cfg.form,
        "weight": list.first().map(|f| f.weight),
        "spec": spec,
        "table": table(&["i", "j", "re", "im", "height", "tail_bound", "refinement_delta"], rows),
    });
    Ok((payload, Vec::new()))
}

fn dims(cfg: &RunConfig) -> Outcome {
    let mut rows = Vec::new();
    for k in (0..=cfg.k).step_by(2) {
        let d = space_dims(k, cfg.basis_n)?;
        rows.push(vec![json!(k), json!(d.dim_modular), json!(d.dim_cusp)]);
    }
    Ok((json!({ "table": table(&["weight", "dim_modular", "dim_cusp"], rows) }), Vec::new()))
}

fn poincare(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for &s in &cfg.s {
        let xi = transported_e0(s);
        for &z in &cfg.z {
            let p = hp(z)?;
            let r = poincare_sums(&xi, p, s, &preset.orbit(p, cfg.budget_norm)?)?;
            if !r.converged {
                warnings.push(format!(
                    "s = {s}, z = {z}: outer shell carries {:e} of the sum",
                    r.last_shell / r.absolute
                ));
            }
            rows.push(vec![
                json!(s),
                json!(z.re),
                json!(z.im),
                json!(r.absolute),
                json!(z.im.powf(s) * r.absolute),
                json!(r.holomorphic.re),
                json!(r.holomorphic.im),
                json!(r.last_shell),
                json!(r.tail_estimate),
                json!(r.terms),
                json!(r.converged),
            ]);
        }
    }
    let cols = [
        "s", "re", "im", "absolute", "weighted", "holomorphic_re", "holomorphic_im", "last_shell",
        "tail_estimate", "terms", "converged",
    ];
    Ok((json!({ "function": "transported e_0", "table": table(&cols, rows) }), warnings))
}

fn tracelike(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let samples: Vec<Point> = cfg.z.iter().map(|&z| hp(z)).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &s in &cfg.s {
        let r = tracelike_deviation(&transported_e0(s), s, &samples, &preset, cfg.budget_norm)?;
        for (z, v) in r.samples.iter().zip(&r.values) {
            rows.push(vec![json!(s), json!(z.re), json!(z.im), json!(v)]);
        }
        reports.push(json!({
            "s": s,
            "constant": r.constant,
            "deviation": r.deviation,
            "shell_ratio": r.shell_ratio,
        }));
    }
    let payload = json!({
        "function": "transported e_0",
        "reports": reports,
        "table": table(&["s", "re", "im", "value"], rows),
    });
    Ok((payload, Vec::new()))
}

fn gram(cfg: &RunConfig) -> Outcome {
    let elems = match cfg.preset {
        PresetName::Gamma2 => generator_ball(),
        PresetName::Psl2z => {
            let (s, t) = (GroupElement::s(), GroupElement::t());
            vec![GroupElement::identity(), s.clone(), t.clone(), t.inverse(), &s * &t]
        }
    };
    let w = to_disc(first_z(cfg)?)?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for &s in &cfg.s {
        let k = KernelVector::new(w, s)?.to_element(cfg.basis_n);
        let xi = k.scaled(Complex64::new(1.0 / k.norm(), 0.0));
        let out = 2 * cfg.basis_n + 32;
        let r = gram_matrix_with(&xi, &elems, s, out)?;
        if r.max_loss > TRUNCATION_LOSS_LIMIT {
            warnings.push(format!("s = {s}: translates lost {:e} of their norm to truncation", r.max_loss));
        }
        if !r.is_psd() {
            warnings.push(format!("s = {s}: Gram matrix has eigenvalue {:e}", r.min_eigenvalue));
        }
        for (i, row) in r.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                rows.push(vec![json!(s), json!(i), json!(j), json!(v.re), json!(v.im)]);
            }
        }
        reports.push(json!({
            "s": s,
            "elements": r.elements,
            "wandering_deviation": r.wandering_deviation,
            "off_diagonal_mass": r.off_diagonal_mass,
            "min_eigenvalue": r.min_eigenvalue,
            "trace": r.trace,
            "max_loss": r.max_loss,
        }));
    }
    let payload = json!({
        "vector": "normalized truncated kernel at z",
        "reports": reports,
        "table": table(&["s", "i", "j", "re", "im"], rows),
    });
    Ok((payload, warnings))
}

fn vndim(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let spec = QuadratureSpec {
        radial_order: 24,
        angular_points: 24,
        subdivision_depth: 8,
        ..QuadratureSpec::default()
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for &s in &cfg.s {
        let exact = Ratio::<i64>::approximate_float(s)
            .filter(|r| *r.numer() as f64 / *r.denom() as f64 == s && *r.denom() <= 1000)
            .map(|r| vn_dimension_exact(r, &preset))
            .transpose()?
            .map(|r| r.to_string());
        let formula = orbit_bergman::dimension::vn_dimension(s, &preset)?;
        let mut report = json!({ "s": s, "formula": formula, "formula_exact": exact });
        if cfg.preset == PresetName::Psl2z {
            let r = vn_dimension_numeric(s, &preset, cfg.basis_n, &spec)?;
            if r.unresolved_panels > 0 {
                warnings.push(format!("s = {s}: {} panels unresolved at maximum depth", r.unresolved_panels));
            }
            for (n, v) in r.partial_sums.iter().enumerate() {
                rows.push(vec![json!(s), json!(n), json!(v)]);
            }
            report["total"] = json!(r.total());
            report["ratio"] = json!(r.total() / r.formula);
            report["cusp_bound"] = json!(r.cusp_bound);
            report["height"] = json!(r.height);
            report["unresolved_panels"] = json!(r.unresolved_panels);
        } else {
            warnings.push(format!("s = {s}: numeric evaluation is implemented for PSL2Z only"));
        }
        reports.push(report);
    }
    let payload = json!({
        "preset": cfg.preset,
        "basis_n": cfg.basis_n,
        "spec": spec,
        "reports": reports,
        "table": table(&["s", "n", "partial_sum"], rows),
    });
    Ok((payload, warnings))
}

fn density(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &z in &cfg.z {
        let p = hp(z)?;
        let d = match &cfg.radii {
            Some(radii) => density_estimate(&preset.orbit(p, cfg.budget_norm)?, radii)?,
            None => density_for(&preset, p, cfg.budget_norm, 3.0, 12)?,
        };
        for ((r, l), s) in d.radii.iter().zip(&d.log_scale).zip(&d.partial_sums) {
            rows.push(vec![json!(z.re), json!(z.im), json!(r), json!(l), json!(s)]);
        }
        reports.push(json!({
            "base": c2(z),
            "slope": d.slope,
            "intercept": d.intercept,
            "target": d.target,
            "stabilizer_order": d.stabilizer_order,
            "certified_radius": d.certified_radius,
        }));
    }
    let payload = json!({
        "preset": cfg.preset,
        "reports": reports,
        "table": table(&["re", "im", "radius", "log_scale", "partial_sum"], rows),
    });
    Ok((payload, Vec::new()))
}

fn extremal(cfg: &RunConfig) -> Outcome {
    let preset = GroupPreset::from_name(cfg.preset);
    let z_star = Point::disc(Complex64::new(0.0, 0.0))?;
    let profiles = extremal_profile(&preset, first_z(cfg)?, z_star, &cfg.s, cfg.budget_norm, cfg.points)?;
    let mut warnings = Vec::new();
    let mut summaries = Vec::new();
    for p in &profiles {
        if p.skipped > 0 {
            warnings.push(format!("s = {}: {} dependent constraints skipped", p.s, p.skipped));
        }
        let mut s = serde_json::to_value(decay_summary(p)).unwrap_or(Value::Null);
        s["skipped"] = json!(p.skipped);
        s["coincident_at"] = json!(p.coincident_at);
        summaries.push(s);
    }
    let len = profiles.first().map_or(0, |p| p.values.len());
    let rows: Vec<Vec<Value>> = (0..len)
        .map(|m| {
            let mut row = vec![json!(m)];
            row.extend(profiles.iter().map(|p| json!(p.values[m])));
            row
        })
        .collect();
    let mut cols = vec!["m".to_string()];
    cols.extend(cfg.s.iter().map(|s| format!("lambda_s{s}")));
    let cols_ref: Vec<&str> = cols.iter().map(String::as_str).collect();
    let payload = json!({
        "preset": cfg.preset,
        "z_star": [0.0, 0.0],
        "points": len.saturating_sub(1),
        "summaries": summaries,
        "table": table(&cols_ref, rows),
    });
    Ok((payload, warnings))
}

fn wandering(cfg: &RunConfig) -> Outcome {
    let f = TransportedVanishing::new(cfg.w, cfg.r, cfg.s[0])?;
    let z0 = vanishing_base_point(cfg.w)?;
    let count = cfg.points.unwrap_or((cfg.basis_n / 4).max(1));
    let pts = ordered_orbit(z0, count, cfg.budget_norm)?;
    let cand = wandering_truncated(&pts, &f, cfg.basis_n)?;
    let mut warnings = Vec::new();
    if cand.gram.max_loss > TRUNCATION_LOSS_LIMIT {
        warnings.push(format!("Gram translates lost {:e} of their norm to truncation", cand.gram.max_loss));
    }
    let rows: Vec<Vec<Value>> = cand
        .candidate
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| vec![json!(n), json!(c.re), json!(c.im)])
        .collect();
    let points: Vec<Value> = cand
        .points
        .iter()
        .map(|p| json!({ "word": p.word, "sign": p.sign, "disc": c2(p.disc) }))
        .collect();
    let payload = json!({
        "order": cand.order,
        "weight": cand.weight,
        "truncation": cand.truncation,
        "base_point": c2(z0.value()),
        "constraint_count": cand.constraint_count,
        "constraint_residual": cand.constraint_residual,
        "off_diagonal_mass": cand.gram.off_diagonal_mass,
        "wandering_deviation": cand.gram.wandering_deviation,
        "gram_min_eigenvalue": cand.gram.min_eigenvalue,
        "f_overlaps": cand.f_overlaps,
        "points": points,
        "table": table(&["n", "coeff_re", "coeff_im"], rows),
    });
    Ok((payload, warnings))
}

fn verify(cfg: &RunConfig) -> Outcome {
    let summary = verify_suite(cfg.level, cfg.seed);
    for line in summary.lines() {
        eprintln!("{line}");
    }
    let warnings = summary
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} failed: {}", c.id, c.detail))
        .collect();
    let rows: Vec<Vec<Value>> = summary
        .criteria
        .iter()
        .map(|c| vec![json!(c.id), json!(c.passed), json!(c.title), json!(c.detail)])
        .collect();
    let mut payload = serde_json::to_value(&summary).unwrap_or(Value::Null);
    payload["table"] = table(&["id", "passed", "title", "detail"], rows);
    Ok((payload, warnings))
}
