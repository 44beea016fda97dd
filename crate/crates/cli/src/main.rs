mod report;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use irrstokes_core::field::{Scalar, Value};
use irrstokes_core::formal::{
    formal_pdq, formal_ramified_family, formal_unramified, singular_directions, stokes_template,
    ClosureSign, FormalData, Q,
};
use irrstokes_core::linalg::Mat;
use irrstokes_core::montrace::{default_radius, loop_monodromy, spectrum};
use irrstokes_core::newton::{irregularity, newton_polygon};
use irrstokes_core::opcore::{
    build_pdq, parse_operator, parse_scalar, ramified_family, to_system, unramified_family,
    MatrixSystem,
};
use irrstokes_core::qde::{classify, dubrovin_check, formal_data, lookup, solve_entry, QdeParams};
use irrstokes_core::rh3::{
    cubic_residual, relation_residual, solve_link, torus_act, PIIID7Data, TorusElement,
};
use irrstokes_core::stokes::{cross_check, solve_pdq, solve_ramified, StokesSolution};
use irrstokes_core::Error;

use report::Report;

#[derive(Parser)]
#[command(name = "irrstokes", version, about = "Formal invariants and Stokes data of irregular linear ODEs")]
struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon, slopes and Katz invariant of an operator.
    Newton {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        /// Parameter binding `name=value`; repeatable.
        #[arg(long = "bind")]
        bind: Vec<String>,
    },
    /// Formal data of a family.
    Formal(FamilyArgs),
    /// Singular directions and Stokes templates in a window.
    Directions {
        #[command(flatten)]
        family: FamilyArgs,
        /// Half-open window `lo,hi` in turns.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        window: String,
    },
    /// Numerical loop monodromy around 0.
    Monodromy {
        #[command(flatten)]
        family: FamilyArgs,
        /// Operator to use instead of a family.
        #[arg(long, allow_hyphen_values = true)]
        op: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Solve the monodromy identity for the Stokes entries.
    Solve {
        #[command(flatten)]
        family: FamilyArgs,
        /// Unknowns pinned to 1 (pdq only); defaults to one per regular row.
        #[arg(long, value_delimiter = ',')]
        normalize: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Quantum differential equation catalog.
    Qde(QdeArgs),
    /// Painlevé III(D7) monodromy data.
    #[command(name = "piii-d7")]
    Piii {
        #[command(subcommand)]
        action: PiiiAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Pdq,
    Ramified,
    Unramified,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Comma-separated exponents of the ramified family.
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(short = 'p')]
    p: Option<usize>,
    #[arg(short = 'q')]
    q: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Closure sign of the pdq formal monodromy.
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    /// Comma-separated distinct eigenvalue coefficients of the unramified family.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Constant part of the unramified family, rows separated by `;`.
    #[arg(long = "t-matrix", alias = "t", allow_hyphen_values = true)]
    t_matrix: Option<String>,
}

#[derive(Args)]
struct QdeArgs {
    #[arg(long)]
    name: String,
    #[arg(short = 'n')]
    n: Option<usize>,
    #[arg(short = 'm')]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    weights: Vec<usize>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Compare solved Stokes entries with the Gram matrix (projective space).
    #[arg(long)]
    check: bool,
    /// Run the Stokes solver with a numerical monodromy target.
    #[arg(long)]
    solve: bool,
    /// Allow the solver on mixed shapes.
    #[arg(long)]
    mixed: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Subcommand)]
enum PiiiAction {
    /// Solve for `e` and the link from `(alpha, c1, c2)`.
    Solve(PiiiParams),
    /// Evaluate the relation for given data and link `a,b;c,d`.
    Residual {
        #[command(flatten)]
        params: PiiiParams,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        link: String,
    },
    /// Solve, then apply the torus element `l0,l1,l2`.
    Torus {
        #[command(flatten)]
        params: PiiiParams,
        #[arg(long = "torus", allow_hyphen_values = true)]
        torus: String,
    },
    /// Evaluate the cubic surface equation.
    Cubic {
        #[arg(long, allow_hyphen_values = true)]
        l13: String,
        #[arg(long, allow_hyphen_values = true)]
        l23: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
}

#[derive(Args)]
struct PiiiParams {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    c1: String,
    #[arg(long, allow_hyphen_values = true)]
    c2: String,
}

type CmdResult = Result<Report, Error>;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn scalar_list(s: &str) -> Result<Vec<Scalar>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_scalar(x.trim())).collect()
}

fn scalar_matrix(s: &str) -> Result<Mat<Scalar>, Error> {
    let rows: Vec<Vec<Scalar>> = s.split(';').map(scalar_list).collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(usage("matrix must be square, rows separated by `;`"));
    }
    Ok(Mat::from_rows(rows))
}

fn value_of(s: &str) -> Result<Value, Error> {
    parse_scalar(s.trim()).map(Value::from)
}

fn scalar_strings(v: &[Scalar]) -> Json {
    Json::Array(v.iter().map(|s| Json::String(s.to_string())).collect())
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| usage(format!("missing {flag}")))
}

fn need_str<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Error> {
    v.as_deref().ok_or_else(|| usage(format!("missing {flag}")))
}

impl FamilyArgs {
    fn kind(&self) -> Result<FamilyKind, Error> {
        self.family.ok_or_else(|| usage("missing --family"))
    }

    fn closure(&self) -> ClosureSign {
        match self.sign {
            SignArg::Plus => ClosureSign::Plus,
            SignArg::Minus => ClosureSign::Minus,
        }
    }

    fn ramified(&self) -> Result<(usize, Vec<Scalar>), Error> {
        let n = need(self.n, "-n")?;
        let a = scalar_list(need_str(&self.a, "-a")?)?;
        Ok((n, a))
    }

    fn pdq(&self) -> Result<(usize, usize, Vec<Scalar>, Vec<Scalar>), Error> {
        let p = need(self.p, "-p")?;
        let q = need(self.q, "-q")?;
        let mu = scalar_list(need_str(&self.mu, "--mu")?)?;
        let nu = scalar_list(need_str(&self.nu, "--nu")?)?;
        Ok((p, q, mu, nu))
    }

    fn unramified(&self) -> Result<(Vec<Scalar>, Mat<Scalar>), Error> {
        let lambda = scalar_list(need_str(&self.lambda, "--lambda")?)?;
        let t = match &self.t_matrix {
            Some(s) => scalar_matrix(s)?,
            None => Mat::zeros(lambda.len(), lambda.len()),
        };
        Ok((lambda, t))
    }

    fn record(&self, r: &mut Report) -> Result<(), Error> {
        match self.kind()? {
            FamilyKind::Ramified => {
                let (n, a) = self.ramified()?;
                r.input("family", "ramified");
                r.input("n", n);
                r.input("a", scalar_strings(&a));
            }
            FamilyKind::Pdq => {
                let (p, q, mu, nu) = self.pdq()?;
                r.input("family", "pdq");
                r.input("p", p);
                r.input("q", q);
                r.input("mu", scalar_strings(&mu));
                r.input("nu", scalar_strings(&nu));
                r.input(
                    "sign",
                    match self.sign {
                        SignArg::Plus => "plus",
                        SignArg::Minus => "minus",
                    },
                );
            }
            FamilyKind::Unramified => {
                let (lambda, t) = self.unramified()?;
                r.input("family", "unramified");
                r.input("lambda", scalar_strings(&lambda));
                r.input(
                    "t_matrix",
                    Json::Array(t.to_rows().iter().map(|row| scalar_strings(row)).collect()),
                );
            }
        }
        Ok(())
    }

    fn formal(&self) -> Result<FormalData, Error> {
        match self.kind()? {
            FamilyKind::Ramified => {
                let (n, a) = self.ramified()?;
                formal_ramified_family(n, &a)
            }
            FamilyKind::Pdq => {
                let (p, q, mu, nu) = self.pdq()?;
                formal_pdq(p, q, &mu, &nu, self.closure())
            }
            FamilyKind::Unramified => formal_unramified(&self.unramified()?.0),
        }
    }

    fn system(&self) -> Result<MatrixSystem, Error> {
        match self.kind()? {
            FamilyKind::Ramified => {
                let (n, a) = self.ramified()?;
                ramified_family(n, &a)
            }
            FamilyKind::Pdq => {
                let (p, q, mu, nu) = self.pdq()?;
                to_system(&build_pdq(p, q, &mu, &nu)?)
            }
            FamilyKind::Unramified => {
                let (lambda, t) = self.unramified()?;
                unramified_family(&lambda, &t)
            }
        }
    }
}

fn formal_json(f: &FormalData) -> Json {
    json!({
        "dim": f.dim(),
        "blocks": f.blocks().iter().map(|b| json!({
            "eigenvalue": b.eigenvalue.to_string(),
            "dim": b.dim,
            "labels": b.labels,
        })).collect::<Vec<_>>(),
        "gamma": report::value_matrix(f.gamma()),
        "block_permutation": f.perm(),
        "katz": report::rational(&f.katz()),
        "irregularity": report::rational(&irregularity(f)),
    })
}

fn solution_json(sol: &StokesSolution, r: &mut Report) {
    for (k, v) in &sol.values {
        r.output(k, report::value(v));
    }
    r.output(
        "directions",
        Json::Array(
            sol.directions
                .iter()
                .map(|d| {
                    json!({
                        "d": report::direction(&d.d),
                        "unknowns": d.template.unknowns(),
                        "matrix": report::value_matrix(&d.matrix),
                    })
                })
                .collect(),
        ),
    );
    r.output("normalization", json!(sol.normalization));
    r.output(
        "composites",
        Json::Object(
            sol.composites
                .iter()
                .map(|(m, v)| (m.to_string(), report::value(v)))
                .collect(),
        ),
    );
    r.output("reducible", sol.reducible);
    r.output("residual", json!(sol.residual));
    r.residual("charpoly", sol.residual);
    for n in &sol.notes {
        r.warn(n.clone());
    }
}

fn run_newton(op: &str, binds: &[String]) -> CmdResult {
    let mut bindings = HashMap::new();
    for b in binds {
        let (k, v) = b
            .split_once('=')
            .ok_or_else(|| usage(format!("--bind expects name=value, got `{b}`")))?;
        bindings.insert(k.trim().to_string(), parse_scalar(v.trim())?);
    }
    let op = parse_operator(op, &bindings)?;
    let poly = newton_polygon(&op)?;
    let mut r = Report::default();
    r.input("op", op.to_string());
    r.output(
        "slopes",
        Json::Array(
            poly.slopes
                .iter()
                .map(|s| json!({ "slope": s.slope.to_string(), "mult": s.mult }))
                .collect(),
        ),
    );
    r.output("katz", report::rational(&poly.katz()));
    r.output("degree", poly.degree());
    r.output(
        "support",
        Json::Array(poly.support.iter().map(|(i, d)| json!([i, d])).collect()),
    );
    r.output("clearing_factor", poly.clearing_factor.to_string());
    Ok(r)
}

fn run_formal(fam: &FamilyArgs) -> CmdResult {
    let mut r = Report::default();
    fam.record(&mut r)?;
    let f = fam.formal()?;
    r.outputs = formal_json(&f).as_object().cloned().unwrap_or_default();
    Ok(r)
}

fn parse_window(s: &str) -> Result<(Q, Q), Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(usage("--window expects lo,hi"));
    }
    let to_q = |t: &str| -> Result<Q, Error> {
        let x = parse_scalar(t.trim())?;
        if !x.is_real() {
            return Err(usage("--window bounds must be real"));
        }
        let (n, d) = (x.re.numer().clone(), x.re.denom().clone());
        let n: i64 = n.try_into().map_err(|_| usage("--window bound too large"))?;
        let d: i64 = d.try_into().map_err(|_| usage("--window bound too large"))?;
        Ok(Q::new(n, d))
    };
    let (lo, hi) = (to_q(parts[0])?, to_q(parts[1])?);
    if lo >= hi {
        return Err(usage("--window needs lo < hi"));
    }
    Ok((lo, hi))
}

fn run_directions(fam: &FamilyArgs, window: &str) -> CmdResult {
    let mut r = Report::default();
    fam.record(&mut r)?;
    let (lo, hi) = parse_window(window)?;
    r.input("window", json!([lo.to_string(), hi.to_string()]));
    let f = fam.formal()?;
    let dirs = singular_directions(&f, lo, hi);
    let mut out = Vec::new();
    for d in &dirs {
        let t = stokes_template(&f, d.d)?;
        out.push(json!({
            "d": report::direction(&d.d),
            "pairs": d.pairs.iter().map(|p| json!({"source": p.source, "target": p.target})).collect::<Vec<_>>(),
            "entries": t.entries.iter().map(|e| json!({"row": e.row, "col": e.col, "name": e.name})).collect::<Vec<_>>(),
        }));
    }
    r.output("directions", Json::Array(out));
    Ok(r)
}

fn run_monodromy(fam: &FamilyArgs, op: Option<&str>, radius: Option<f64>, tol: f64) -> CmdResult {
    let mut r = Report::default();
    let sys = match op {
        Some(text) => {
            let op = parse_operator(text, &HashMap::new())?;
            r.input("op", op.to_string());
            to_system(&op)?
        }
        None => {
            fam.record(&mut r)?;
            fam.system()?
        }
    };
    let radius = radius.unwrap_or_else(|| default_radius(&sys));
    r.input("radius", radius);
    r.input("tol", tol);
    let t = loop_monodromy(&sys, radius, tol)?;
    let sp = spectrum(&t.matrix);
    r.output("matrix", report::complex_matrix(&t.matrix));
    r.output("charpoly", report::complex_list(&sp.charpoly));
    r.output("eigenvalues", report::complex_list(&sp.eigenvalues));
    r.output("step_count", t.step_count);
    r.output("error_estimate", t.error_estimate);
    r.residual("error_estimate", t.error_estimate);
    r.residual(
        "eigenpair_max",
        sp.residuals.iter().copied().fold(0.0, f64::max),
    );
    if t.error_estimate > 10.0 * tol {
        r.warn(format!(
            "error estimate {:.3e} exceeds 10*tol",
            t.error_estimate
        ));
    }
    Ok(r)
}

fn run_solve(fam: &FamilyArgs, normalize: &[String], tol: f64) -> CmdResult {
    let mut r = Report::default();
    fam.record(&mut r)?;
    match fam.kind()? {
        FamilyKind::Ramified => {
            let (n, a) = fam.ramified()?;
            let sol = solve_ramified(n, &a)?;
            solution_json(&sol, &mut r);
        }
        FamilyKind::Pdq => {
            let (p, q, mu, nu) = fam.pdq()?;
            r.input("tol", tol);
            let norm = (!normalize.is_empty()).then_some(normalize);
            let res = solve_pdq(p, q, &mu, &nu, fam.closure(), norm, tol)?;
            r.output("target", report::value_list(&res.target));
            solution_json(&res.solution, &mut r);
            let cc = cross_check(&res.system, &res.formal, &res.solution, tol)?;
            r.output("cross_check_deviation", cc.deviation);
            r.output("monodromy_radius", cc.radius);
            r.residual("cross_check", cc.deviation);
            r.residual("monodromy_error_estimate", cc.error_estimate);
            if p == 1 && q == 3 {
                r.warn(
                    "the T coefficient is the exact expansion d1*d2*x12 - d1*d2*x10*x02 - d2; \
                     the variant without d1*d2*x12 is not used",
                );
            }
        }
        FamilyKind::Unramified => {
            return Err(usage(
                "solve supports --family ramified and --family pdq; the unramified map is not solved",
            ))
        }
    }
    Ok(r)
}

fn run_qde(a: &QdeArgs) -> CmdResult {
    let mut r = Report::default();
    let entry = lookup(&a.name)?;
    let opt = |s: &Option<String>| s.as_deref().map(parse_scalar).transpose();
    let params = QdeParams {
        n: a.n,
        m: a.m,
        weights: a.weights.clone(),
        a: opt(&a.a)?,
        b: opt(&a.b)?,
        c: opt(&a.c)?,
    };
    r.input("name", entry.name);
    r.input("params", json!({
        "n": a.n, "m": a.m, "weights": a.weights,
        "a": a.a, "b": a.b, "c": a.c,
    }));
    let c = classify(&entry, &params)?;
    r.output("operator", c.operator.to_string());
    r.output("provenance", entry.provenance);
    r.output(
        "slopes",
        Json::Array(
            c.slopes
                .iter()
                .map(|s| json!({ "slope": s.slope.to_string(), "mult": s.mult }))
                .collect(),
        ),
    );
    r.output("katz", report::rational(&c.katz));
    r.output("applicability", c.applicability.as_str());
    for w in &c.warnings {
        r.warn(w.clone());
    }
    if let Some(f) = formal_data(&entry, &params)? {
        r.output("formal", formal_json(&f));
    }
    if a.check {
        let n = a.n.ok_or_else(|| usage("--check needs -n"))?;
        let d = dubrovin_check(n)?;
        r.output(
            "dubrovin",
            json!({
                "entries": d.solution.values.iter().map(|(k, v)| (k.clone(), report::value(v))).collect::<serde_json::Map<_, _>>(),
                "entries_are_binomial": d.entries_are_binomial,
                "connection": report::value_matrix(&d.connection),
                "gram": d.gram.to_rows(),
                "gram_upper_abs": d.gram_upper_abs,
                "connection_offdiag_abs": d.connection_offdiag_abs,
                "multisets_agree": d.multisets_agree,
                "verdict": d.verdict.as_str(),
            }),
        );
    }
    if a.solve {
        r.input("tol", a.tol);
        let sol = solve_entry(&entry, &params, a.mixed, a.tol)?;
        solution_json(&sol, &mut r);
    }
    Ok(r)
}

fn piii_json(d: &PIIID7Data, r: &mut Report) -> Result<(), Error> {
    r.output("e", report::value(&d.e));
    r.output("alpha", report::value(&d.alpha));
    r.output("c1", report::value(&d.c1));
    r.output("c2", report::value(&d.c2));
    r.output("link", report::value_matrix(&d.link));
    r.output("link_scale", report::value(&d.link_scale));
    r.output("link_normalized", report::value_matrix(&d.normalized_link()));
    r.output("top0", report::value_matrix(&d.top0()));
    r.output("topinf", report::value_matrix(&d.topinf()));
    let res = relation_residual(d)?;
    r.output("relation_residual", res);
    r.residual("relation", res);
    Ok(())
}

fn run_piii(action: &PiiiAction) -> CmdResult {
    let mut r = Report::default();
    let params = |p: &PiiiParams, r: &mut Report| -> Result<(Value, Value, Value), Error> {
        r.input("alpha", p.alpha.clone());
        r.input("c1", p.c1.clone());
        r.input("c2", p.c2.clone());
        Ok((value_of(&p.alpha)?, value_of(&p.c1)?, value_of(&p.c2)?))
    };
    match action {
        PiiiAction::Solve(p) => {
            let (alpha, c1, c2) = params(p, &mut r)?;
            let s = solve_link(&alpha, &c1, &c2)?;
            r.output("kernel_dim", s.kernel_dim);
            piii_json(&s.data, &mut r)?;
        }
        PiiiAction::Residual { params: p, e, link } => {
            let (alpha, c1, c2) = params(p, &mut r)?;
            r.input("e", e.clone());
            r.input("link", link.clone());
            let l = scalar_matrix(link)?;
            if l.rows() != 2 {
                return Err(usage("--link must be 2x2"));
            }
            let d = PIIID7Data::new(value_of(e)?, alpha, c1, c2, l.map(|s| Value::from(s)))?;
            piii_json(&d, &mut r)?;
        }
        PiiiAction::Torus { params: p, torus } => {
            let (alpha, c1, c2) = params(p, &mut r)?;
            r.input("torus", torus.clone());
            let l = scalar_list(torus)?;
            if l.len() != 3 {
                return Err(usage("--torus expects l0,l1,l2"));
            }
            let t = TorusElement::new(l[0].clone().into(), l[1].clone().into(), l[2].clone().into())?;
            let s = solve_link(&alpha, &c1, &c2)?;
            let moved = torus_act(&s.data, &t)?;
            let before = relation_residual(&s.data)?;
            r.output("residual_before", before);
            piii_json(&moved, &mut r)?;
        }
        PiiiAction::Cubic { l13, l23, alpha, e } => {
            r.input("l13", l13.clone());
            r.input("l23", l23.clone());
            r.input("alpha", alpha.clone());
            r.input("e", e.clone());
            let v = cubic_residual(&value_of(l13)?, &value_of(l23)?, &value_of(alpha)?, &value_of(e)?);
            r.output("value", report::value(&v));
        }
    }
    Ok(r)
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Newton { op, bind } => run_newton(op, bind),
        Command::Formal(f) => run_formal(f),
        Command::Directions { family, window } => run_directions(family, window),
        Command::Monodromy {
            family,
            op,
            radius,
            tol,
        } => run_monodromy(family, op.as_deref(), *radius, *tol),
        Command::Solve {
            family,
            normalize,
            tol,
        } => run_solve(family, normalize, *tol),
        Command::Qde(a) => run_qde(a),
        Command::Piii { action } => run_piii(action),
    }
}

fn emit(json: &Json, out: Option<&str>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(json).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("{path}: {e}")),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if e.use_stderr() {
                let body = json!({
                    "schema_version": report::SCHEMA_VERSION,
                    "command": argv[1..].to_vec(),
                    "error": e.kind().to_string(),
                    "exit_code": 2,
                });
                let _ = emit(&body, None);
                return ExitCode::from(2);
            }
            return ExitCode::from(code as u8);
        }
    };
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let timing = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let command = argv[1..].to_vec();
    match result {
        Ok(r) => match emit(&r.finish(&command, timing), cli.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(3)
            }
        },
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 3 };
            eprintln!("error: {e}");
            let body = json!({
                "schema_version": report::SCHEMA_VERSION,
                "command": command,
                "error": e.to_string(),
                "exit_code": code,
            });
            let _ = emit(&body, cli.out.as_deref());
            ExitCode::from(code)
        }
    }
}
