//! The worked examples on the affine line and the projective line, as checks
//! with printable summaries.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    generator_element, is_member, is_scalar_matrix, AlgebraElement, Entries, GeneratorLabel, Membership,
};
use crate::error::Result;
use crate::fan::{standard, ConeId, Fan};
use crate::laurent::LaurentPoly;

pub use crate::pervmod::relations::{dupont_demo, DupontDemo};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

fn check(name: impl Into<String>, ok: bool) -> Check {
    Check { name: name.into(), ok }
}

fn write_checks(f: &mut fmt::Formatter<'_>, checks: &[Check]) -> fmt::Result {
    for c in checks {
        writeln!(f, "{}: {}", c.name, if c.ok { "PASS" } else { "FAIL" })?;
    }
    Ok(())
}

fn matrix_text(x: &AlgebraElement) -> String {
    let fan = x.fan();
    let rows: Vec<String> = fan
        .cone_ids()
        .map(|r| {
            let cells: Vec<String> =
                fan.cone_ids().map(|c| x.entry(r, c).map_or_else(|| "0".to_string(), ToString::to_string)).collect();
            cells.join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Generators on the affine line, rows and columns ordered (zero cone, ray).
pub struct LineFixture {
    pub e1: AlgebraElement,
    pub e2: AlgebraElement,
    pub u: AlgebraElement,
    pub v: AlgebraElement,
    /// `1 + vu + uv`.
    pub s: AlgebraElement,
    /// The same element with `u` normalized by `1 - t` instead.
    pub s_other_sign: AlgebraElement,
    pub checks: Vec<Check>,
}

impl LineFixture {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

pub fn line_fixture() -> Result<LineFixture> {
    let fan = Arc::new(standard::affine_space(1));
    let (zero, ray) = (fan.zero_cone(), fan.cone_id(&[0]).expect("ray"));
    let pair = fan.covering_pair(zero, ray).expect("pair");
    let e1 = generator_element(&fan, GeneratorLabel::Idempotent(zero));
    let e2 = generator_element(&fan, GeneratorLabel::Idempotent(ray));
    let u = generator_element(&fan, GeneratorLabel::Up(pair));
    let v = generator_element(&fan, GeneratorLabel::Down(pair));
    let one = AlgebraElement::unit(&fan);
    let t = LaurentPoly::from_i64(1, &[(1, &[1])]);

    let s = one.add(&v.mul(&u)?)?.add(&u.mul(&v)?)?;
    let u_other = u.neg();
    let s_other_sign = one.add(&v.mul(&u_other)?)?.add(&u_other.mul(&v)?)?;

    let displayed_u = AlgebraElement::matrix_unit(&fan, ray, zero, &LaurentPoly::one(1) - &t)?;
    let mut checks = vec![
        check("e1 = E(0,0), e2 = E(r,r), v = E(0,r)", e1.entry(zero, zero).is_some() && e2.entry(ray, ray).is_some() && v.entry(zero, ray).is_some()),
        check("u is the displayed (1-t)E(r,0) up to sign", u == displayed_u.neg()),
        check("e1 + e2 = 1", e1.add(&e2)? == one),
        check("e1 and e2 are idempotent", e1.mul(&e1)? == e1 && e2.mul(&e2)? == e2),
        check("e2 u = u = u e1", e2.mul(&u)? == u && u.mul(&e1)? == u),
        check("e1 v = v = v e2", e1.mul(&v)? == v && v.mul(&e2)? == v),
    ];
    let scalar = is_scalar_matrix(&s);
    checks.push(check("s ↦ t·1", scalar.as_ref() == Some(&t)));
    checks.push(check("s ↦ t·1: unit", scalar.as_ref().is_some_and(LaurentPoly::is_unit)));
    Ok(LineFixture { e1, e2, u, v, s, s_other_sign, checks })
}

impl fmt::Display for LineFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "affine line, rows and columns (zero cone, ray)")?;
        writeln!(f, "e1 = {}", matrix_text(&self.e1))?;
        writeln!(f, "e2 = {}", matrix_text(&self.e2))?;
        writeln!(f, "u  = {}", matrix_text(&self.u))?;
        writeln!(f, "v  = {}", matrix_text(&self.v))?;
        writeln!(f, "s = 1 + vu + uv = {}", matrix_text(&self.s))?;
        let other = is_scalar_matrix(&self.s_other_sign);
        writeln!(
            f,
            "with u = (1-t)E(r,0) instead: s = {} ({})",
            matrix_text(&self.s_other_sign),
            if other.is_some_and(|p| p.is_unit()) { "a unit" } else { "not a unit" }
        )?;
        write_checks(f, &self.checks)
    }
}

/// Divisibility pattern of the projective line, rows and columns ordered
/// (zero cone, positive ray, negative ray).
pub struct ProjectiveLinePattern {
    pub fan: Arc<Fan>,
    /// Factor required in each slot, as text.
    pub factors: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl ProjectiveLinePattern {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

const LETTERS: [&str; 9] = ["a", "b", "c", "d", "e", "f", "g", "h", "l"];

fn factor_text(fan: &Fan, r: ConeId, c: ConeId) -> String {
    fan.difference(r, c)
        .iter()
        .map(|&i| {
            let e = fan.ray(i).to_i64().expect("small")[0];
            if e == 1 {
                "(1-t)".to_string()
            } else {
                format!("(1-t^{e})")
            }
        })
        .collect()
}

pub fn projective_line_pattern() -> Result<ProjectiveLinePattern> {
    let fan = Arc::new(standard::projective_line());
    let ids: Vec<ConeId> = fan.cone_ids().collect();
    let factors: Vec<Vec<String>> = ids.iter().map(|&r| ids.iter().map(|&c| factor_text(&fan, r, c)).collect()).collect();

    let mut full = Entries::new();
    for &r in &ids {
        for &c in &ids {
            full.insert((r, c), fan.binomial_product(r, c));
        }
    }
    let mut checks = vec![check("pattern with a..l = 1 is a member", is_member(&fan, &full)?.is_member())];
    let mut rejected = true;
    let mut free_ok = true;
    for &r in &ids {
        for &c in &ids {
            let mut perturbed = full.clone();
            perturbed.insert((r, c), LaurentPoly::one(1));
            let got = is_member(&fan, &perturbed)?;
            if fan.difference(r, c).is_empty() {
                free_ok &= got.is_member();
            } else {
                rejected &= got == Membership::NotMember { row: r, col: c };
            }
        }
    }
    checks.push(check("each constrained slot set to 1 is rejected at that slot", rejected));
    checks.push(check("unconstrained slots accept 1", free_ok));
    let displayed = [["", "", ""], ["(1-t)", "", "(1-t)"], ["(1-t^-1)", "(1-t^-1)", ""]];
    let matches = (0..3).all(|i| (0..3).all(|j| factors[i][j] == displayed[i][j]));
    checks.push(check("factors match the displayed pattern", matches));
    Ok(ProjectiveLinePattern { fan, factors, checks })
}

impl fmt::Display for ProjectiveLinePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "projective line, rows and columns ({{0}}, sigma, -sigma)")?;
        let cells: Vec<Vec<String>> = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, x)| format!("{x}{}", LETTERS[3 * i + j])).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|s| format!("{s:<width$}")).collect();
            writeln!(f, "[ {} ]", padded.join("  "))?;
        }
        write_checks(f, &self.checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass() {
        let line = line_fixture().unwrap();
        assert!(line.passed(), "{line}");
        assert!(line.to_string().contains("s ↦ t·1: unit: PASS"));
        assert!(line.to_string().contains("not a unit"));
        let p1 = projective_line_pattern().unwrap();
        assert!(p1.passed(), "{p1}");
    }
}
