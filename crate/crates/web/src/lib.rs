//! WebAssembly bindings for the browser demo in `www/`.

use std::str::FromStr;

use klein_core::cf1d::{
    cf_expand, eigen_slopes, is_cyclic_palindrome, klein_polygon, prop1_witness_search, QuadraticSurd, Quadrant,
};
use klein_core::exactint::is_hyperbolic;
use klein_core::render::klein_svg;
use klein_core::sym3d::theorem_check;
use klein_core::{Error, IntMatrix};
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

const MAX_DEPTH: usize = 200_000;

fn matrix(s: &str) -> Result<IntMatrix, Error> {
    serde_json::from_str(s.trim())
        .map_err(|e| Error::Parse { position: e.column().saturating_sub(1), message: e.to_string() })
}

/// A surd `(P+sqrt(D))/Q` or a 2×2 matrix as JSON rows.
fn slopes(input: &str) -> Result<(QuadraticSurd, QuadraticSurd), Error> {
    let t = input.trim();
    if t.starts_with('[') {
        eigen_slopes(&matrix(t)?)
    } else {
        let s = QuadraticSurd::from_str(t)?;
        let c = s.conjugate();
        Ok((s, c))
    }
}

/// SVG of the four Klein polygons of a surd or of a hyperbolic 2×2 operator.
#[wasm_bindgen]
pub fn klein_polygons_svg(input: &str, count: u32, extent: i32) -> Result<String, String> {
    if !(1..=200).contains(&extent) || !(2..=60).contains(&count) {
        return Err("extent must lie in 1..=200 and count in 2..=60".into());
    }
    let (alpha, beta) = slopes(input).map_err(|e| e.to_string())?;
    let polys = Quadrant::ALL
        .iter()
        .map(|&q| klein_polygon(&alpha, &beta, q, count as usize))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(klein_svg(&alpha, &beta, &polys, extent.into()))
}

/// Continued fraction, palindrome axes and trace/norm witnesses as JSON.
#[wasm_bindgen]
pub fn cf1d_report(surd: &str, height: u32) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let s = QuadraticSurd::from_str(surd.trim())?;
        let cf = cf_expand(&s)?;
        let report = json!({
            "value": s.to_string(),
            "expansion": cf,
            "palindrome": is_cyclic_palindrome(&cf.period),
            "prop1": prop1_witness_search(&s, height.min(60))?,
        });
        Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
    };
    run().map_err(|e| e.to_string())
}

/// Palindromic symmetry search for a hyperbolic 3×3 operator given as JSON rows.
#[wasm_bindgen]
pub fn palindromic_certificate(matrix_json: &str, depth: u32) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let a = matrix(matrix_json)?;
        if a.dim() != 3 {
            return Err(Error::UnsupportedDimension(a.dim()));
        }
        if !is_hyperbolic(&a)? {
            return Err(Error::NotHyperbolic);
        }
        let c = theorem_check(&a, (depth as usize).clamp(1, MAX_DEPTH))?;
        Ok(serde_json::to_string_pretty(&c).expect("certificate serializes"))
    };
    run().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_polygons() {
        let a = klein_polygons_svg("[[0,1],[1,1]]", 8, 10).unwrap();
        let b = klein_polygons_svg("(1+sqrt(5))/2", 8, 10).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("(2, 3)"));
        assert_eq!(a.matches("class=\"cone\"").count(), 4);
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(klein_polygons_svg("[[1,1],[0,1]]", 8, 10).is_err());
        assert!(klein_polygons_svg("(1+sqrt(5))/2", 1, 10).is_err());
        assert!(cf1d_report("sqrt(", 30).is_err());
        assert!(palindromic_certificate("[[1,0],[0,1]]", 10).is_err());
    }

    #[test]
    fn sqrt2_report() {
        let r: serde_json::Value = serde_json::from_str(&cf1d_report("(0+sqrt(2))/1", 30).unwrap()).unwrap();
        assert_eq!(r["expansion"]["period"], json!(["2"]));
    }

    #[test]
    fn class_one_certificate() {
        let c = palindromic_certificate("[[0,0,-1],[1,0,-1],[-2,-1,0]]", 10_000).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c).unwrap();
        assert_eq!(v["status"], "found");
    }
}
