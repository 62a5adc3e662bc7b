use std::fs;
use std::path::{Path, PathBuf};

use circle_groups::diffeo::CoverConfig;
use circle_groups::frag_diff::Fragmenter;
use circle_groups::loop_group::{fragment_loop, fragment_loop_sequential, omega};
use circle_groups::periodic::DEFAULT_TAIL_TOL;
use circle_groups::report::{Check, RunReport};
use circle_groups::verify::{
    self, displacement_outside, loop_deviation_outside, Suite, VerifyOptions,
};
use circle_groups::verma::{determinant, fraction_string, parse_fraction, Partition, VermaModule};
use circle_groups::{cocycle, diffeo};
use serde_json::json;

use crate::spec::{parse_algebra, parse_diffeo, parse_field, parse_loop};
use crate::CliError;

pub const DEFAULT_FRAGMENT_GRID: usize = verify::FRAGMENT_GRID;
pub const DEFAULT_COCYCLE_GRID: usize = verify::COCYCLE_GRID;

/// Flags shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Common {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub json: bool,
}

impl Common {
    pub fn cover(&self) -> Result<CoverConfig, CliError> {
        match &self.config {
            None => Ok(CoverConfig::default()),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
                Ok(CoverConfig::from_json(&text)?)
            }
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

/// What a command prints, and whether it succeeded.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

impl Output {
    fn report(report: &RunReport, json: bool) -> Self {
        Output {
            text: if json {
                report.to_json()
            } else {
                report.to_text()
            },
            pass: report.pass,
        }
    }

    fn value(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(path, e))
}

pub fn fragment_diff(spec: &str, common: &Common) -> Result<Output, CliError> {
    let n = common.grid.unwrap_or(DEFAULT_FRAGMENT_GRID);
    let cover = common.cover()?;
    let fragmenter = Fragmenter::new(cover.clone())?;
    let g = parse_diffeo(spec, n)?;
    g.periodic_part().check_tail(DEFAULT_TAIL_TOL)?;
    let r = fragmenter.fragment(&g)?;

    let dir = common.out_dir();
    write_file(&dir, "gamma.csv", &g.to_csv())?;
    for (j, xi) in r.factors().into_iter().enumerate() {
        write_file(&dir, &format!("xi{}.csv", j + 1), &xi.to_csv())?;
    }

    let epsilon = fragmenter.neighbourhood().epsilon();
    let loc = fragmenter.first_localizer();
    let mut report = RunReport::new(
        "fragment-diff",
        &format!(
            "fragment-diff spec={spec} grid={n} cover={}",
            cover.to_json()
        ),
    );
    report.push(Check::below("reconstruction", r.reconstruction_error, 1e-7));
    for (j, xi) in r.factors().into_iter().enumerate() {
        report.push(Check::below(
            format!("xi{}.outside_support", j + 1),
            displacement_outside(&cover.outer(j + 1), xi),
            1e-9,
        ));
    }
    report.push(Check::below(
        "alpha1_over_bound",
        r.alpha1.abs() / loc.alpha_bound(epsilon),
        1.0,
    ));
    report.push(Check::below(
        "beta1_over_bound",
        r.beta1.abs() / loc.beta_bound(epsilon),
        1.0,
    ));
    report.push(Check::below(
        "negated_min_factor_derivative",
        -r.min_derivative[0].min(r.min_derivative[1]),
        0.0,
    ));
    report.note("epsilon", format!("{epsilon:.17e}"));
    report.note(
        "reconstruction_error",
        format!("{:.17e}", r.reconstruction_error),
    );
    report.note("alpha1", format!("{:.17e}", r.alpha1));
    report.note("beta1", format!("{:.17e}", r.beta1));
    report.note("alpha2", format!("{:.17e}", r.alpha2));
    report.note("beta2", format!("{:.17e}", r.beta2));
    let tol = diffeo::DEFAULT_SUPPORT_TOL;
    report.note("support.gamma", g.support(tol).to_string());
    for (j, xi) in r.factors().into_iter().enumerate() {
        report.note(format!("support.xi{}", j + 1), xi.support(tol).to_string());
    }
    report.note("output", dir.display().to_string());
    Ok(Output::report(&report, common.json))
}

pub fn fragment_loop_cmd(spec: &str, common: &Common) -> Result<Output, CliError> {
    let n = common.grid.unwrap_or(DEFAULT_FRAGMENT_GRID);
    let cover = common.cover()?;
    let g = parse_loop(spec, n)?;
    let closed = fragment_loop(&g, &cover)?;
    let sequential = fragment_loop_sequential(&g, &cover)?;

    let dir = common.out_dir();
    write_file(&dir, "gamma.csv", &g.to_csv())?;
    for (j, xi) in closed.factors().into_iter().enumerate() {
        write_file(&dir, &format!("xi{}.csv", j + 1), &xi.to_csv())?;
    }

    let mut report = RunReport::new(
        "fragment-loop",
        &format!(
            "fragment-loop spec={spec} grid={n} cover={}",
            cover.to_json()
        ),
    );
    report.push(Check::below(
        "reconstruction",
        closed.product()?.distance(&g)?,
        1e-9,
    ));
    let mut agreement: f64 = 0.0;
    for (p, q) in closed.factors().into_iter().zip(sequential.factors()) {
        agreement = agreement.max(p.distance(q)?);
    }
    report.push(Check::below("sequential_agreement", agreement, 1e-9));
    for (j, xi) in closed.factors().into_iter().enumerate() {
        report.push(Check::below(
            format!("xi{}.outside_support", j + 1),
            loop_deviation_outside(&cover.outer(j + 1), xi),
            1e-10,
        ));
    }
    let tol = diffeo::DEFAULT_SUPPORT_TOL;
    report.note("support.gamma", g.support(tol).to_string());
    for (j, xi) in closed.factors().into_iter().enumerate() {
        report.note(format!("support.xi{}", j + 1), xi.support(tol).to_string());
    }
    report.note("output", dir.display().to_string());
    Ok(Output::report(&report, common.json))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CocycleKind {
    /// Bott cocycle of two diffeomorphisms
    Bott,
    /// Gelfand–Fuks cocycle of two vector fields
    Vect,
    /// Loop algebra cocycle of two su(2) loops
    Omega,
}

pub fn cocycle_cmd(
    kind: CocycleKind,
    a: &str,
    b: &str,
    common: &Common,
) -> Result<Output, CliError> {
    let n = common.grid.unwrap_or(DEFAULT_COCYCLE_GRID);
    let (name, re, im) = match kind {
        CocycleKind::Bott => {
            let value = cocycle::bott(&parse_diffeo(a, n)?, &parse_diffeo(b, n)?)?;
            ("bott", value, None)
        }
        CocycleKind::Vect => {
            let value = cocycle::vect_cocycle(&parse_field(a, n)?, &parse_field(b, n)?)?;
            ("vect", value.re, Some(value.im))
        }
        CocycleKind::Omega => {
            let value = omega(&parse_algebra(a, n)?, &parse_algebra(b, n)?)?;
            ("omega", value, None)
        }
    };
    let text = if common.json {
        let value = match im {
            Some(im) => json!({ "re": re, "im": im }),
            None => json!(re),
        };
        json!({ "cocycle": name, "grid": n, "value": value }).to_string()
    } else {
        match im {
            Some(im) => format!("{re:.16e}{im:+.16e}i"),
            None => format!("{re:.16e}"),
        }
    };
    Ok(Output::value(text))
}

pub fn verma_cmd(
    c: &str,
    h: &str,
    level: u32,
    max_level: u32,
    common: &Common,
) -> Result<Output, CliError> {
    let module = VermaModule::new(parse_fraction(c)?, parse_fraction(h)?, max_level);
    let gram = module.gram_matrix(level)?;
    let det = determinant(&gram);
    let basis = Partition::all_of_level(level);
    let text = if common.json {
        let rows: Vec<Vec<String>> = gram
            .iter()
            .map(|row| row.iter().map(fraction_string).collect())
            .collect();
        let basis: Vec<&[u32]> = basis.iter().map(Partition::parts).collect();
        serde_json::to_string_pretty(&json!({
            "c": fraction_string(module.central_charge()),
            "h": fraction_string(module.weight()),
            "level": level,
            "basis": basis,
            "gram": rows,
            "determinant": fraction_string(&det),
        }))
        .expect("json values serialize")
    } else {
        let mut out = format!(
            "M(c={}, h={}) level {level}\nbasis:\n",
            module.central_charge(),
            module.weight()
        );
        for p in &basis {
            out.push_str(&format!("  {p}\n"));
        }
        out.push_str("gram:\n");
        for row in &gram {
            let cells: Vec<String> = row.iter().map(fraction_string).collect();
            out.push_str(&format!("  [{}]\n", cells.join(", ")));
        }
        out.push_str(&format!("determinant: {}", fraction_string(&det)));
        out
    };
    Ok(Output::value(text))
}

pub const DEFAULT_TRIALS: usize = 100;

pub fn verify_cmd(suite: &str, common: &Common) -> Result<Output, CliError> {
    let suite: Suite = suite.parse()?;
    let options = VerifyOptions {
        suite,
        seed: common.seed.unwrap_or(0),
        trials: common.trials.unwrap_or(DEFAULT_TRIALS),
        grid: common.grid,
        cover: common.cover()?,
    };
    let report = verify::run(&options)?;
    if let Some(dir) = &common.out {
        write_file(dir, "report.json", &report.to_json())?;
    }
    Ok(Output::report(&report, common.json))
}
