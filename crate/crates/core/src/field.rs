//! Abelian fields over `Q`, presented as the fixed field of a subgroup of `(Z/m)^×` inside
//! `Q(ζ_m)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::nt;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::group::{smith_normal_form, FiniteAbelianGroup};
use crate::group_ring::GroupRingElement;

/// `L = Q(ζ_m)^H` for the subgroup `H = fixing` of `(Z/m)^×`; the identity may be omitted from
/// `fixing`, so `[]` is `Q(ζ_m)` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec")]
pub struct AbelianFieldSpec {
    pub modulus: u64,
    pub fixing: Vec<u64>,
    #[serde(default)]
    pub label: String,
}

#[derive(Deserialize)]
struct RawFieldSpec {
    modulus: u64,
    fixing: Vec<u64>,
    #[serde(default)]
    label: String,
}

impl TryFrom<RawFieldSpec> for AbelianFieldSpec {
    type Error = String;

    fn try_from(raw: RawFieldSpec) -> std::result::Result<Self, String> {
        AbelianFieldSpec::new(raw.modulus, raw.fixing, raw.label).map_err(|e| match e {
            Error::Malformed(msg) => msg,
            other => other.to_string(),
        })
    }
}

impl AbelianFieldSpec {
    /// Validates that `fixing` is a subgroup of `(Z/m)^×`; the stored list is sorted.
    pub fn new(modulus: u64, fixing: Vec<u64>, label: impl Into<String>) -> Result<Self> {
        let spec = AbelianFieldSpec { modulus, fixing, label: label.into() };
        spec.validated()
    }

    /// The field fixed by the subgroup generated by `gens`.
    pub fn from_generators(modulus: u64, gens: &[u64], label: impl Into<String>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::malformed("modulus must be positive"));
        }
        let sub = subgroup_closure(modulus, gens)?;
        AbelianFieldSpec::new(modulus, sub.into_iter().collect(), label)
    }

    /// The full cyclotomic field `Q(ζ_m)`.
    pub fn cyclotomic(m: u64) -> Self {
        AbelianFieldSpec::from_generators(m, &[], format!("Q(zeta_{m})")).expect("valid modulus")
    }

    pub fn rationals() -> Self {
        AbelianFieldSpec::cyclotomic(1)
    }

    pub fn validated(mut self) -> Result<Self> {
        let m = self.modulus;
        if m == 0 {
            return Err(Error::malformed("modulus must be positive"));
        }
        let one = 1 % m;
        let mut set: BTreeSet<u64> = self.fixing.iter().map(|&h| h % m).collect();
        set.insert(one);
        for &h in &set {
            if nt::gcd(h, m) != 1 && m > 1 {
                return Err(Error::malformed(format!("{h} is not a unit mod {m}")));
            }
            for &k in &set {
                if !set.contains(&nt::mul_mod(h, k, m)) {
                    return Err(Error::malformed(format!(
                        "fixing set not closed: {h}*{k} mod {m} missing"
                    )));
                }
            }
        }
        self.fixing = set.into_iter().collect();
        Ok(self)
    }

    pub fn degree(&self) -> u64 {
        nt::euler_phi(self.modulus) / self.fixing.len() as u64
    }

    fn contains_fixing(&self, a: u64) -> bool {
        self.fixing.binary_search(&(a % self.modulus)).is_ok()
    }

    /// Smallest `f | m` with `L ⊆ Q(ζ_f)`, together with `L` presented at modulus `f`.
    pub fn conductor_reduced(&self) -> AbelianFieldSpec {
        let m = self.modulus;
        for f in nt::divisors(m) {
            // kernel of (Z/m)^× -> (Z/f)^× must lie in H
            let ok = units(m).filter(|&a| a % f == 1 % f).all(|a| self.contains_fixing(a));
            if ok {
                let image: BTreeSet<u64> = self.fixing.iter().map(|&h| h % f).collect();
                return AbelianFieldSpec {
                    modulus: f,
                    fixing: image.into_iter().collect(),
                    label: self.label.clone(),
                };
            }
        }
        unreachable!("f = m always works")
    }

    pub fn conductor(&self) -> u64 {
        self.conductor_reduced().modulus
    }

    /// Rational primes ramified in `L` (the primes dividing the conductor).
    pub fn ramified_primes(&self) -> Vec<u64> {
        nt::prime_divisors(self.conductor())
    }

    pub fn is_totally_real(&self) -> bool {
        self.modulus <= 2 || self.contains_fixing(self.modulus - 1)
    }

    /// `w_L`, the number of roots of unity in `L`.
    pub fn roots_of_unity_order(&self) -> u64 {
        let m = self.modulus;
        let candidates = nt::divisors(nt::lcm(2, m));
        candidates
            .into_iter()
            .filter(|&k| {
                // Q(ζ_k) = Q(ζ_{k/2}) for k ≡ 2 mod 4
                let k0 = if m % k == 0 { k } else { k / 2 };
                self.fixing.iter().all(|&h| h % k0 == 1 % k0)
            })
            .max()
            .unwrap_or(2)
            .max(2)
    }

    /// Whether `Q(ζ_k) ⊆ L`.
    pub fn contains_roots_of_unity(&self, k: u64) -> bool {
        self.roots_of_unity_order() % k == 0
    }

    /// Every abelian field of conductor exactly `f`, one per subgroup of `(Z/f)^×`.
    pub fn of_conductor(f: u64) -> Vec<AbelianFieldSpec> {
        let elems: Vec<u64> = units(f).collect();
        let close = |gens: &BTreeSet<u64>| -> BTreeSet<u64> {
            let mut set: BTreeSet<u64> = BTreeSet::from([1 % f]);
            loop {
                let next: BTreeSet<u64> = set
                    .iter()
                    .flat_map(|&a| gens.iter().map(move |&g| nt::mul_mod(a, g, f)))
                    .chain(set.iter().copied())
                    .collect();
                if next.len() == set.len() {
                    return set;
                }
                set = next;
            }
        };
        let mut found: BTreeSet<Vec<u64>> = BTreeSet::from([vec![1 % f]]);
        let mut frontier: Vec<BTreeSet<u64>> = vec![BTreeSet::from([1 % f])];
        while let Some(h) = frontier.pop() {
            for &g in &elems {
                if h.contains(&g) {
                    continue;
                }
                let mut gens = h.clone();
                gens.insert(g);
                let bigger = close(&gens);
                if found.insert(bigger.iter().copied().collect()) {
                    frontier.push(bigger);
                }
            }
        }
        found
            .into_iter()
            .map(|fixing| AbelianFieldSpec { modulus: f, fixing, label: String::new() })
            .filter(|spec| spec.conductor() == f)
            .map(|mut spec| {
                spec.label = format!("conductor {f}, [H] = {:?}", spec.fixing);
                spec
            })
            .collect()
    }

    /// CM abelian fields with conductor at most `max`.
    pub fn cm_fields_up_to(max: u64) -> Vec<AbelianFieldSpec> {
        (3..=max)
            .flat_map(AbelianFieldSpec::of_conductor)
            .filter(|spec| !spec.is_totally_real())
            .collect()
    }

    /// The `n`-th layer `L_n = L·Q_n` of the cyclotomic `Z_p`-extension, inside
    /// `Q(ζ_{m' p^{n+1}})` with `m'` the prime-to-`p` part of the conductor.
    pub fn layer(&self, p: u64, n: u32) -> Result<AbelianFieldSpec> {
        if p == 2 || !nt::is_prime(p) {
            return Err(Error::pre(format!("layer needs an odd prime, got {p}")));
        }
        let base = self.conductor_reduced();
        let f = base.modulus;
        if nt::valuation(f, p) > 1 {
            return Err(Error::pre(format!(
                "conductor {f} has p-adic valuation > 1 for p = {p}; L meets the cyclotomic Z_p-extension"
            )));
        }
        let mut m_prime = f;
        while m_prime % p == 0 {
            m_prime /= p;
        }
        let ppow = p.pow(n + 1);
        let modulus = m_prime * ppow;
        let fixing: Vec<u64> = units(modulus)
            .filter(|&a| base.contains_fixing(a % f) && nt::pow_mod(a % ppow, p - 1, ppow) == 1 % ppow)
            .collect();
        let label = if self.label.is_empty() {
            format!("layer {n} (p={p})")
        } else {
            format!("{} layer {n} (p={p})", self.label)
        };
        AbelianFieldSpec::new(modulus, fixing, label)
    }

    pub fn galois_group(&self) -> Result<GaloisGroup> {
        GaloisGroup::new(self)
    }
}

fn units(m: u64) -> impl Iterator<Item = u64> {
    let start = if m == 1 { 0 } else { 1 };
    (start..m.max(1)).filter(move |&a| m == 1 || nt::gcd(a, m) == 1)
}

fn subgroup_closure(m: u64, gens: &[u64]) -> Result<BTreeSet<u64>> {
    let mut set = BTreeSet::new();
    set.insert(1 % m);
    for &g in gens {
        if m > 1 && nt::gcd(g % m, m) != 1 {
            return Err(Error::malformed(format!("{g} is not a unit mod {m}")));
        }
    }
    let mut frontier: Vec<u64> = vec![1 % m];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = nt::mul_mod(x, g % m, m);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(set)
}

/// A place of `Q`: the infinite place or a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinite,
    Finite(u64),
}

impl Place {
    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Infinite => None,
            Place::Finite(p) => Some(*p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "infty" | "oo" | "∞" => Ok(Place::Infinite),
            _ => {
                let p: u64 = s.parse().map_err(|_| Error::malformed(format!("bad place {s:?}")))?;
                if !nt::is_prime(p) {
                    return Err(Error::malformed(format!("{p} is not prime")));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("bad place {other}"))),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Finite set of places, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Place>", from = "Vec<Place>")]
pub struct PlaceSet(Vec<Place>);

impl From<Vec<Place>> for PlaceSet {
    fn from(v: Vec<Place>) -> Self {
        PlaceSet::new(v)
    }
}

impl From<PlaceSet> for Vec<Place> {
    fn from(s: PlaceSet) -> Self {
        s.0
    }
}

impl PlaceSet {
    pub fn new(places: impl IntoIterator<Item = Place>) -> Self {
        let set: BTreeSet<Place> = places.into_iter().collect();
        PlaceSet(set.into_iter().collect())
    }

    pub fn finite(primes: &[u64]) -> Self {
        PlaceSet::new(primes.iter().map(|&p| Place::Finite(p)))
    }

    /// Finite primes plus the infinite place.
    pub fn with_infinity(primes: &[u64]) -> Self {
        PlaceSet::new(primes.iter().map(|&p| Place::Finite(p)).chain([Place::Infinite]))
    }

    pub fn places(&self) -> &[Place] {
        &self.0
    }

    pub fn primes(&self) -> Vec<u64> {
        self.0.iter().filter_map(Place::prime).collect()
    }

    pub fn contains(&self, place: Place) -> bool {
        self.0.binary_search(&place).is_ok()
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        self.contains(Place::Finite(p))
    }

    pub fn has_infinite(&self) -> bool {
        self.contains(Place::Infinite)
    }

    pub fn union(&self, other: &PlaceSet) -> PlaceSet {
        PlaceSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for PlaceSet {
    type Err = Error;
    /// Comma-separated list, e.g. `"3,inf"`; the empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let places = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(Place::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(PlaceSet::new(places))
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Place::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Verdict of `Hyp(S, T)` together with the first violated clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypVerdict {
    pub holds: bool,
    pub reason: String,
}

/// `Hyp(S,T)`: `S ⊇ S_ram ∪ S_∞`, `S ∩ T = ∅`, and `E_L^T` torsion-free.
///
/// Torsion-freeness is tested through the equivalent condition that every prime `ℓ | w_L` is
/// matched by some `v ∈ T` of residue characteristic different from `ℓ`: a root of unity of
/// order `ℓ` is congruent to 1 modulo a prime above `v` exactly when `v = ℓ`.
pub fn check_hyp(spec: &AbelianFieldSpec, s: &PlaceSet, t: &PlaceSet) -> Result<HypVerdict> {
    if t.has_infinite() {
        return Err(Error::malformed("T must consist of finite primes"));
    }
    let fail = |reason: String| Ok(HypVerdict { holds: false, reason });
    if !s.has_infinite() {
        return fail("S does not contain the infinite place".into());
    }
    for q in spec.ramified_primes() {
        if !s.contains_prime(q) {
            return fail(format!("S misses the ramified prime {q}"));
        }
    }
    for v in t.primes() {
        if s.contains_prime(v) {
            return fail(format!("{v} lies in both S and T"));
        }
    }
    let w = spec.roots_of_unity_order();
    for ell in nt::prime_divisors(w) {
        if !t.primes().iter().any(|&v| v != ell) {
            return fail(format!(
                "no prime of T has residue characteristic different from {ell} (w_L = {w})"
            ));
        }
    }
    Ok(HypVerdict { holds: true, reason: format!("holds (w_L = {w})") })
}

/// CM structure of a non-totally-real abelian field.
#[derive(Clone, Debug, PartialEq)]
pub struct CmStructure {
    /// Complex conjugation, the class of `-1`.
    pub j: usize,
    pub e_plus: GroupRingElement<Rational>,
    pub e_minus: GroupRingElement<Rational>,
}

impl CmStructure {
    /// `e_r = (1 - (-1)^r j) / 2`.
    pub fn e_r(&self, r: i64) -> GroupRingElement<Rational> {
        if r.rem_euclid(2) == 0 {
            self.e_minus.clone()
        } else {
            self.e_plus.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CmData {
    TotallyReal,
    Cm(CmStructure),
}

/// `Gal(L/Q) ≅ (Z/m)^× / H`, realised concretely on residues mod `m`.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    spec: AbelianFieldSpec,
    group: Arc<FiniteAbelianGroup>,
    class_of: HashMap<u64, usize>,
    representative: Vec<u64>,
}

impl GaloisGroup {
    pub fn new(spec: &AbelianFieldSpec) -> Result<Self> {
        let spec = spec.clone().validated()?;
        let m = spec.modulus;
        // (Z/m)^× as a product of cyclic groups through CRT
        let mut comps: Vec<(u64, u64, u64)> = Vec::new(); // (prime power modulus, generator, order)
        for (q, e) in nt::factor(m) {
            let qe = q.pow(e);
            if q == 2 {
                if e >= 2 {
                    comps.push((qe, qe - 1, 2));
                }
                if e >= 3 {
                    comps.push((qe, 5, qe / 4));
                }
            } else {
                let g = nt::primitive_root(qe).expect("odd prime powers are cyclic");
                comps.push((qe, g, qe / q * (q - 1)));
            }
        }
        let k = comps.len();
        let dlog = |a: u64| -> Vec<i128> {
            comps
                .iter()
                .map(|&(qe, g, ord)| {
                    let target = a % qe;
                    if qe % 2 == 0 && qe >= 8 {
                        // 2-power part: a = ± 5^x
                        let sign_free = if target % 4 == 1 { target } else { qe - target };
                        if g == 5 {
                            (0..ord).find(|&x| nt::pow_mod(5, x, qe) == sign_free).unwrap() as i128
                        } else {
                            i128::from(target % 4 != 1)
                        }
                    } else if qe == 4 {
                        i128::from(target == 3)
                    } else {
                        (0..ord).find(|&x| nt::pow_mod(g, x, qe) == target).unwrap() as i128
                    }
                })
                .collect()
        };
        let mut relations: Vec<Vec<i128>> = Vec::new();
        for (i, &(_, _, ord)) in comps.iter().enumerate() {
            let mut row = vec![0i128; k];
            row[i] = ord as i128;
            relations.push(row);
        }
        for &h in &spec.fixing {
            if m > 1 {
                relations.push(dlog(h));
            }
        }
        let snf = smith_normal_form(&relations, k);
        let factors = snf.invariant_factors();
        let keep: Vec<usize> = (0..k).filter(|&i| factors[i] > 1).collect();
        let group = FiniteAbelianGroup::new(keep.iter().map(|&i| factors[i]).collect())?;
        let mut class_of = HashMap::new();
        let mut representative = vec![u64::MAX; group.order()];
        for a in units(m) {
            let x = if m == 1 { vec![] } else { dlog(a) };
            let coords: Vec<i64> = keep
                .iter()
                .map(|&i| {
                    let c: i128 = (0..k).map(|l| x[l] * snf.col_transform[l][i]).sum();
                    c.rem_euclid(factors[i] as i128) as i64
                })
                .collect();
            let idx = group.index_signed(&coords);
            class_of.insert(a, idx);
            if representative[idx] == u64::MAX {
                representative[idx] = a;
            }
        }
        debug_assert!(representative.iter().all(|&r| r != u64::MAX));
        Ok(GaloisGroup { spec, group: Arc::new(group), class_of, representative })
    }

    pub fn spec(&self) -> &AbelianFieldSpec {
        &self.spec
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.spec.modulus
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Class `σ_a` of a residue `a` prime to the modulus.
    pub fn class_of(&self, a: i64) -> Result<usize> {
        let m = self.spec.modulus;
        let r = nt::reduce_signed(a, m);
        self.class_of
            .get(&r)
            .copied()
            .ok_or_else(|| Error::pre(format!("{a} is not a unit modulo {m}")))
    }

    /// Smallest positive residue in the class.
    pub fn representative(&self, g: usize) -> u64 {
        if self.spec.modulus == 1 {
            1
        } else {
            self.representative[g]
        }
    }

    /// Arithmetic Frobenius at an unramified prime `ℓ ∤ m`.
    pub fn frobenius(&self, ell: u64) -> Result<usize> {
        if self.spec.modulus > 1 && self.spec.modulus % ell == 0 {
            return Err(Error::pre(format!(
                "{ell} divides the modulus {}; Frobenius needs an unramified prime",
                self.spec.modulus
            )));
        }
        self.class_of(ell as i64)
    }

    /// Residues of the canonical generators, one per invariant factor.
    pub fn generator_residues(&self) -> Vec<u64> {
        (0..self.group.rank()).map(|i| self.representative(self.group.generator(i))).collect()
    }

    pub fn cm_data(&self) -> CmData {
        if self.spec.is_totally_real() {
            return CmData::TotallyReal;
        }
        let j = self.class_of(-1).expect("-1 is a unit");
        let one = GroupRingElement::basis(self.group.clone(), 0, Rational::one());
        let jj = GroupRingElement::basis(self.group.clone(), j, Rational::one());
        let half = Rational::new(1, 2);
        CmData::Cm(CmStructure {
            j,
            e_plus: one.add(&jj).scale(&half),
            e_minus: one.sub(&jj).scale(&half),
        })
    }

    /// Index map of the restriction `Gal(L/Q) → Gal(L'/Q)` for a subfield `L' ⊆ L` whose
    /// modulus divides ours.
    pub fn projection_to(&self, target: &GaloisGroup) -> Result<Vec<usize>> {
        let (m, mt) = (self.spec.modulus, target.spec.modulus);
        if m % mt != 0 {
            return Err(Error::mismatch(format!("modulus {mt} does not divide {m}")));
        }
        let mut map = vec![usize::MAX; self.order()];
        for (&a, &g) in &self.class_of {
            let img = target.class_of((a % mt) as i64)?;
            if map[g] == usize::MAX {
                map[g] = img;
            } else if map[g] != img {
                return Err(Error::mismatch(
                    "target field is not a subfield: restriction is not well defined".to_string(),
                ));
            }
        }
        Ok(map)
    }

    /// Isomorphism onto the Galois group of the same field realised at another modulus.
    pub fn isomorphism_to(&self, other: &GaloisGroup) -> Result<Vec<usize>> {
        if self.order() != other.order() {
            return Err(Error::mismatch("fields of different degree"));
        }
        let (m, mo) = (self.spec.modulus, other.spec.modulus);
        let map = if m % mo == 0 {
            self.projection_to(other)?
        } else if mo % m == 0 {
            let back = other.projection_to(self)?;
            let mut inv = vec![usize::MAX; self.order()];
            for (g, &img) in back.iter().enumerate() {
                inv[img] = g;
            }
            inv
        } else {
            return Err(Error::mismatch(format!("moduli {m} and {mo} are not comparable")));
        };
        let distinct: BTreeSet<usize> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return Err(Error::mismatch("restriction is not injective"));
        }
        Ok(map)
    }
}
