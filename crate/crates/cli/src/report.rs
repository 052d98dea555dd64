//! Audit reports and LP dumps as plain text.

use std::fmt::Write as _;

use degsnd_core::lp::{RowTag, Sense};
use degsnd_core::rounding::CutLp;
use degsnd_core::verify::AuditReport;
use degsnd_core::Rational;
use num_traits::{One, Signed, Zero};

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// One keyed line per check, ending with `overall`.
pub fn write_audit(report: &AuditReport) -> String {
    let mut s = String::new();
    for c in &report.connectivity {
        writeln!(
            s,
            "pair u={} v={} required={} achieved={} status={}",
            c.u,
            c.v,
            c.required,
            c.achieved,
            status(c.pass)
        )
        .unwrap();
    }
    for c in &report.degrees {
        writeln!(s, "degree vertex={} degree={} limit={} status={}", c.vertex, c.degree, c.limit, status(c.pass))
            .unwrap();
    }
    for c in &report.lower_bounds {
        writeln!(s, "lower vertex={} degree={} lower={} status={}", c.vertex, c.degree, c.lower, status(c.pass))
            .unwrap();
    }
    let c = &report.cost;
    let ratio = c.ratio.as_ref().map_or_else(|| "-".to_string(), Rational::to_string);
    writeln!(s, "cost cost={} lp_value={} ratio={} status={}", c.cost, c.lp_value, ratio, status(c.pass)).unwrap();
    writeln!(s, "overall status={}", status(report.overall())).unwrap();
    s
}

fn term(first: bool, coeff: &Rational, var: &str) -> String {
    let sign = match (first, coeff.is_negative()) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    let magnitude = coeff.abs();
    if magnitude.is_one() {
        format!("{sign}{var}")
    } else {
        format!("{sign}{magnitude} {var}")
    }
}

/// The LP in CPLEX-style text with one comment per row naming where it came
/// from. Variable `x<e>` is edge `e`. Coefficients are exact and may be
/// written as `p/q`.
pub fn write_lp(lp: &CutLp) -> String {
    let name = |j: usize| format!("x{}", lp.variables[j]);
    let mut s = String::new();
    writeln!(s, "\\ residual cut LP over {} active edges, {} rows", lp.variables.len(), lp.problem.rows().len())
        .unwrap();
    writeln!(s, "\\ optimum {}", lp.value).unwrap();
    writeln!(s, "Minimize").unwrap();
    let mut obj = String::new();
    for (j, c) in lp.problem.objective().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        obj.push_str(&term(obj.is_empty(), c, &name(j)));
    }
    if obj.is_empty() {
        obj.push('0');
    }
    writeln!(s, " obj: {obj}").unwrap();
    writeln!(s, "Subject To").unwrap();
    for (i, row) in lp.problem.rows().iter().enumerate() {
        let origin = match &row.tag {
            RowTag::Cut(cut) => format!("cut {cut}"),
            RowTag::Degree(v) => format!("degree of vertex {v}"),
            RowTag::Bound(e) => format!("upper bound of edge {e}"),
            RowTag::Plain => "plain".to_string(),
        };
        writeln!(s, " \\ {origin}").unwrap();
        let mut lhs = String::new();
        for (&j, c) in &row.coeffs {
            lhs.push_str(&term(lhs.is_empty(), c, &name(j)));
        }
        let sense = match row.sense {
            Sense::Ge => ">=",
            Sense::Le => "<=",
        };
        writeln!(s, " r{i}: {lhs} {sense} {}", row.rhs).unwrap();
    }
    writeln!(s, "Bounds").unwrap();
    for j in 0..lp.variables.len() {
        writeln!(s, " {} >= 0", name(j)).unwrap();
    }
    writeln!(s, "End").unwrap();
    s
}
