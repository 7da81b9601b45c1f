//! Three library operations exported to JavaScript. Each returns a pretty-printed JSON
//! certificate, or an error message.

use wasm_bindgen::prelude::wasm_bindgen;

use iwasawa_kit::cert::{Certificate, FittingInput, ThetaInput, TowerInput};
use iwasawa_kit::field::{AbelianFieldSpec, PlaceSet};
use iwasawa_kit::iwasawa::{default_tower_smoothing, minimal_tower_places};

fn field(modulus: u32, fixing: &str) -> Result<AbelianFieldSpec, String> {
    let fixing = fixing
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u64>().map_err(|_| format!("bad residue {x:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    AbelianFieldSpec::new(u64::from(modulus), fixing, "").map_err(|e| e.to_string())
}

fn places(s: &str) -> Result<PlaceSet, String> {
    s.parse().map_err(|e: iwasawa_kit::Error| e.to_string())
}

fn render(c: Result<Certificate, iwasawa_kit::Error>) -> Result<String, String> {
    c.map(|c| c.to_json()).map_err(|e| e.to_string())
}

/// `Θ_{S,T}(r)` for the subfield of `Q(ζ_modulus)` fixed by `fixing` (comma-separated residues).
/// An empty `s` means the ramified primes and `∞`.
#[wasm_bindgen]
pub fn stickelberger(modulus: u32, fixing: &str, s: &str, t: &str, r: i32) -> Result<String, String> {
    let spec = field(modulus, fixing)?;
    let s = if s.trim().is_empty() { PlaceSet::with_infinity(&spec.ramified_primes()) } else { places(s)? };
    render(Certificate::theta(&ThetaInput { spec, s, t: places(t)?, r: i64::from(r) }))
}

/// Tower of `Θ` over `Q(ζ_modulus)` with the minimal `S` and the default smoothing set.
#[wasm_bindgen]
pub fn tower(modulus: u32, p: u32, precision: u32, levels: u32, r: i32) -> Result<String, String> {
    let spec = field(modulus, "")?;
    let p = u64::from(p);
    let s = minimal_tower_places(&spec, p);
    let t = default_tower_smoothing(&spec, p, &s);
    render(Certificate::tower(&TowerInput { spec, s, t, r: i64::from(r), p, precision, levels, replay: None }))
}

/// Fitting ideal and annihilator of a module given as JSON
/// (`{"algebra": {...}, "generators": n, "relations": [...]}`).
#[wasm_bindgen]
pub fn fitting(module: &str) -> Result<String, String> {
    let module = serde_json::from_str(module).map_err(|e| format!("malformed input: {e}"))?;
    render(Certificate::fitting(&FittingInput { module }))
}
