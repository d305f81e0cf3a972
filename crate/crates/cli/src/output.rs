//! Record rendering. CSV and JSON share one row type per table so both
//! encodings carry the same numbers.

use serde::Serialize;

use crate::args::Format;

pub trait Row: Serialize {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

pub fn render<R: Row>(rows: &[R], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(R::HEADER);
            out.push('\n');
            for r in rows {
                out.push_str(&r.csv());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Debug, Serialize)]
pub struct CurveRow {
    pub theta: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub analytic: Option<f64>,
}

impl Row for CurveRow {
    const HEADER: &'static str = "theta,mean,stderr,n,analytic";

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.theta,
            self.mean,
            self.stderr,
            self.n,
            opt(self.analytic)
        )
    }
}

#[derive(Debug, Serialize)]
pub struct SqueezeRow {
    pub a: f64,
    pub b: f64,
    #[serde(flatten)]
    pub curve: CurveRow,
}

impl Row for SqueezeRow {
    const HEADER: &'static str = "a,b,theta,mean,stderr,n,analytic";

    fn csv(&self) -> String {
        format!("{},{},{}", self.a, self.b, self.curve.csv())
    }
}

#[derive(Debug, Serialize)]
pub struct ChshRow {
    pub protocol: &'static str,
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub analytic: Option<f64>,
    pub cobits: u64,
    pub cobits_per_term: u64,
    pub bits: u64,
}

impl Row for ChshRow {
    const HEADER: &'static str = "protocol,mean,stderr,n,analytic,cobits,cobits_per_term,bits";

    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.protocol,
            self.mean,
            self.stderr,
            self.n,
            opt(self.analytic),
            self.cobits,
            self.cobits_per_term,
            self.bits
        )
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize)]
pub struct Table1Line {
    pub x: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "Ap")]
    pub ap: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "Bp")]
    pub bp: String,
    pub na_AB: String,
    pub na_ABp: String,
    pub na_ApB: String,
    pub na_ApBp: String,
    pub na_chsh: i64,
    pub ad_AB: String,
    pub ad_ABp: String,
    pub ad_ApB: String,
    pub ad_ApBp: String,
    pub ad_chsh: i64,
}

impl Table1Line {
    /// Columns after `x`, as they appear in CSV.
    pub fn signature(&self) -> Vec<String> {
        vec![
            self.a.clone(),
            self.ap.clone(),
            self.b.clone(),
            self.bp.clone(),
            self.na_AB.clone(),
            self.na_ABp.clone(),
            self.na_ApB.clone(),
            self.na_ApBp.clone(),
            self.na_chsh.to_string(),
            self.ad_AB.clone(),
            self.ad_ABp.clone(),
            self.ad_ApB.clone(),
            self.ad_ApBp.clone(),
            self.ad_chsh.to_string(),
        ]
    }
}

impl Row for Table1Line {
    const HEADER: &'static str =
        "x,A,Ap,B,Bp,na_AB,na_ABp,na_ApB,na_ApBp,na_chsh,ad_AB,ad_ABp,ad_ApB,ad_ApBp,ad_chsh";

    fn csv(&self) -> String {
        format!("{},{}", self.x, self.signature().join(","))
    }
}
