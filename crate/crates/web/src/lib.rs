//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use semple_gw::contact::{self, CurveInvariants};
use semple_gw::expr::parse_class;
use semple_gw::recursion::compute_up_to;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest degree the page will ask for.
pub const MAX_DEGREE: u32 = 12;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn degree_in_range(d: u32) -> Result<(), String> {
    if (1..=MAX_DEGREE).contains(&d) {
        Ok(())
    } else {
        Err(format!("degree must be between 1 and {MAX_DEGREE}"))
    }
}

/// Invariant table for degrees `1..=max_degree`, keyed by degree then label.
#[wasm_bindgen]
pub fn invariant_table(max_degree: u32) -> String {
    respond(degree_in_range(max_degree).and_then(|_| {
        compute_up_to(max_degree)
            .map(|t| t.to_json())
            .map_err(|e| e.to_string())
    }))
}

/// Triple-contact count for a curve of degree `c`, class `cdual` and
/// `kappa` cusps, with the symbolic formula.
#[wasm_bindgen]
pub fn contact(degree: u32, c: u32, cdual: u32, kappa: u32) -> String {
    respond(degree_in_range(degree).and_then(|_| {
        let table = compute_up_to(degree).map_err(|e| e.to_string())?;
        let curve = CurveInvariants::new(c.into(), cdual.into(), kappa.into());
        let r = contact::evaluate(&contact::triple_contact_profile(degree, curve), &table)
            .map_err(|e| e.to_string())?;
        serde_json::to_value(r).map_err(|e| e.to_string())
    }))
}

/// Normal form of a ring expression in the `z` or `i` basis, plus its integral.
#[wasm_bindgen]
pub fn chow_eval(expr: &str, basis: &str) -> String {
    respond(
        parse_class(expr)
            .map_err(|e| e.to_string())
            .and_then(|class| {
                let normal = match basis {
                    "z" => class.to_string(),
                    "i" => class.to_i_basis().to_string(),
                    other => return Err(format!("unknown basis {other:?}; use z or i")),
                };
                Ok(json!({ "normal_form": normal, "integral": class.integrate().to_string() }))
            }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn table_export() {
        let v = parse(invariant_table(3));
        assert_eq!(v["3"]["h2.h2"], "12");
        assert!(parse(invariant_table(0))["error"].is_string());
        assert!(parse(invariant_table(MAX_DEGREE + 1))["error"].is_string());
    }

    #[test]
    fn contact_export() {
        let v = parse(contact(3, 2, 2, 0));
        assert_eq!(v["count"], "102");
        assert_eq!(v["formula"], "21c+30č+10κ");
        let v = parse(contact(1, 1, 0, 0));
        assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn chow_export() {
        let v = parse(chow_eval("hz - 3*hd^2", "i"));
        assert_eq!(v["normal_form"], "hi");
        assert_eq!(parse(chow_eval("h^2*hd*z", "z"))["integral"], "1");
        assert!(parse(chow_eval("h +", "z"))["error"].is_string());
        assert!(parse(chow_eval("h", "q"))["error"].is_string());
    }
}
