use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use contextsim_core::plasticity::{squeezed_adaptive_curve, EllipseShape, Profile};
use contextsim_core::polytope::{enumerate_facets, format_facets, product_vertices, raw_vertices};
use contextsim_core::protocol::{
    estimate_chsh_with, estimate_curve, reproduce_table1, CurveModel, OrientationLaw,
    REFERENCE_X,
};
use contextsim_core::{Angle, BreakingPoint, McConfig, Outcome, ProtocolKind, SettingsQuad};

use crate::args::{
    ChshArgs, Cli, Command, Common, Coords, CurveArgs, FacetsArgs, Format, ModelArg,
    OrientationArg, ProtocolArg, SqueezeArgs, Table1Args,
};
use crate::output::{render, ChshRow, CurveRow, SqueezeRow, Table1Line};
use crate::CliError;

const GOLDEN_TABLE1: &str = include_str!("../data/table1_golden.csv");

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let common = &cli.common;
    let text = match &cli.command {
        Command::Table1(a) => return table1(common, a),
        Command::Chsh(a) => chsh(common, a)?,
        Command::Curve(a) => curve(common, a)?,
        Command::Facets(a) => facets(common, a)?,
        Command::Squeeze(a) => squeeze(common, a)?,
    };
    emit(common, &text)
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => fs::write(path, text).map_err(|source| io_error(path, source)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn mc(common: &Common, trials: u64) -> Result<McConfig, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let cfg = McConfig::new(trials, common.seed);
    Ok(match common.workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => cfg.with_workers(w),
        None => cfg,
    })
}

fn angle(common: &Common, v: f64) -> Result<Angle, CliError> {
    Ok(if common.radians {
        Angle::new(v)?
    } else {
        Angle::from_degrees(v)?
    })
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: cannot parse {t:?} as a number")))
        })
        .collect()
}

/// Reads breaking points; each keeps its literal text for echoing.
fn read_x_file(path: &Path) -> Result<Vec<(String, BreakingPoint)>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| io_error(path, source))?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let at = |msg: String| CliError::Usage(format!("{}:{}: {msg}", path.display(), k + 1));
        let v: f64 = t
            .parse()
            .map_err(|_| at(format!("{t:?} is not a number")))?;
        let x = BreakingPoint::new(v)
            .map_err(|_| at(format!("breaking point {t} must lie in [-1, 1]")))?;
        out.push((t.to_string(), x));
    }
    Ok(out)
}

fn signs(s: &[Outcome; 4]) -> [String; 4] {
    s.map(|o| o.sign_char().to_string())
}

fn table1(common: &Common, args: &Table1Args) -> Result<(), CliError> {
    let input = match &args.x_file {
        Some(path) => read_x_file(path)?,
        None => REFERENCE_X
            .iter()
            .map(|s| (s.to_string(), BreakingPoint::new(s.parse().expect("literal")).expect("in range")))
            .collect(),
    };
    let xs: Vec<BreakingPoint> = input.iter().map(|(_, x)| *x).collect();
    let lines: Vec<Table1Line> = reproduce_table1(&xs)
        .iter()
        .zip(&input)
        .map(|(row, (text, _))| {
            let [a, ap, b, bp] = signs(&row.outcomes);
            let [n1, n2, n3, n4] = signs(&row.nonadaptive);
            let [d1, d2, d3, d4] = signs(&row.adaptive);
            Table1Line {
                x: text.clone(),
                a,
                ap,
                b,
                bp,
                na_AB: n1,
                na_ABp: n2,
                na_ApB: n3,
                na_ApBp: n4,
                na_chsh: row.nonadaptive_chsh,
                ad_AB: d1,
                ad_ABp: d2,
                ad_ApB: d3,
                ad_ApBp: d4,
                ad_chsh: row.adaptive_chsh,
            }
        })
        .collect();
    emit(common, &render(&lines, common.format))?;
    if args.check {
        let golden = match &args.golden {
            Some(p) => fs::read_to_string(p).map_err(|source| io_error(p, source))?,
            None => GOLDEN_TABLE1.to_string(),
        };
        check_against(&lines, &golden)?;
    }
    Ok(())
}

/// Compares sign patterns and CHSH integers; x values are not compared.
fn check_against(lines: &[Table1Line], golden: &str) -> Result<(), CliError> {
    let expected: Vec<Vec<String>> = golden
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').skip(1).map(|c| c.trim().to_string()).collect())
        .collect();
    if expected.len() != lines.len() {
        return Err(CliError::Check(format!(
            "golden table has {} rows, generated table has {}",
            expected.len(),
            lines.len()
        )));
    }
    for (k, (line, want)) in lines.iter().zip(&expected).enumerate() {
        if &line.signature() != want {
            return Err(CliError::Check(format!(
                "row {} (x = {}): expected {}, got {}",
                k + 1,
                line.x,
                want.join(","),
                line.signature().join(",")
            )));
        }
    }
    Ok(())
}

fn chsh(common: &Common, args: &ChshArgs) -> Result<String, CliError> {
    let values = parse_list(&args.settings, "--settings")?;
    let [al, alp, be, bep] = values[..] else {
        return Err(CliError::Usage(format!(
            "--settings needs 4 angles, got {}",
            values.len()
        )));
    };
    let settings = SettingsQuad::new(
        angle(common, al)?,
        angle(common, alp)?,
        angle(common, be)?,
        angle(common, bep)?,
    );
    let (kind, name) = match args.protocol {
        ProtocolArg::Nonadaptive => (ProtocolKind::NonAdaptive, "nonadaptive"),
        ProtocolArg::Adaptive => (ProtocolKind::Adaptive, "adaptive"),
        ProtocolArg::AdaptiveFresh => (ProtocolKind::AdaptiveFreshShares, "adaptive-fresh"),
    };
    let law = match args.orientation {
        OrientationArg::Aligned => OrientationLaw::Aligned,
        OrientationArg::HalfTurn => OrientationLaw::HalfTurn,
    };
    let (est, ledger) = estimate_chsh_with(kind, &settings, law, &mc(common, args.trials)?)?;
    let row = ChshRow {
        protocol: name,
        mean: est.mean,
        stderr: est.stderr,
        n: est.n,
        analytic: est.analytic,
        cobits: ledger.cobits_total,
        cobits_per_term: ledger.cobits_per_term[0],
        bits: ledger.bits_total,
    };
    Ok(render(&[row], common.format))
}

fn curve(common: &Common, args: &CurveArgs) -> Result<String, CliError> {
    let grid: Vec<f64> = match &args.theta {
        Some(list) => parse_list(list, "--theta")?,
        None => {
            let to = args.to.unwrap_or(if common.radians { PI } else { 180.0 });
            match args.steps {
                0 => return Err(CliError::Usage("--steps must be at least 1".into())),
                1 => vec![args.from],
                n => (0..n)
                    .map(|k| args.from + (to - args.from) * k as f64 / (n - 1) as f64)
                    .collect(),
            }
        }
    };
    let angles = grid
        .iter()
        .map(|v| angle(common, *v))
        .collect::<Result<Vec<_>, _>>()?;
    let model = match args.model {
        ModelArg::BandAdaptive => CurveModel::BandAdaptive,
        ModelArg::BandUniform => CurveModel::BandUniform,
        ModelArg::BandUniformProduct => CurveModel::BandUniformProduct,
        ModelArg::Peres => CurveModel::Peres,
        ModelArg::Urn => CurveModel::Urn,
    };
    let points = estimate_curve(model, &angles, &mc(common, args.trials)?)?;
    let rows: Vec<CurveRow> = grid
        .iter()
        .zip(points)
        .map(|(theta, p)| CurveRow {
            theta: *theta,
            mean: p.estimate.mean,
            stderr: p.estimate.stderr,
            n: p.estimate.n,
            analytic: p.estimate.analytic,
        })
        .collect();
    Ok(render(&rows, common.format))
}

fn facets(common: &Common, args: &FacetsArgs) -> Result<String, CliError> {
    let vs = match args.coords {
        Coords::Raw => raw_vertices(),
        Coords::Product => product_vertices(),
    };
    let list = enumerate_facets(&vs)?;
    Ok(match common.format {
        Format::Csv => format_facets(&list),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&list).expect("facets serialize");
            s.push('\n');
            s
        }
    })
}

fn squeeze(common: &Common, args: &SqueezeArgs) -> Result<String, CliError> {
    let shape = EllipseShape::new(args.minor, args.major)?;
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let grid: Vec<f64> = (0..args.points)
        .map(|k| 0.5 * k as f64 / (args.points - 1) as f64)
        .collect();
    let values = squeezed_adaptive_curve(&Profile::new(shape), &grid)?;
    let rows: Vec<SqueezeRow> = grid
        .iter()
        .zip(values)
        .map(|(t, e)| SqueezeRow {
            a: args.minor,
            b: args.major,
            curve: CurveRow {
                theta: *t,
                mean: e,
                stderr: 0.0,
                n: 0,
                analytic: Some(e),
            },
        })
        .collect();
    Ok(render(&rows, common.format))
}
