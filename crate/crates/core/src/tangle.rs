//! Framed links as braid closures, cut open into string links, and their
//! universal invariants in `U^{⊗m}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hopf::{Algebra, Element, Tensor};
use crate::mtrace::is_invariant;
use crate::quasitriangular::RibbonData;
use crate::repmod::ModuleRep;
use crate::report::Report;
use crate::scalars::CycloScalar;

/// How a component is used in a colored surgery presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Colored by a central element, evaluated with a twisted integral.
    Plus,
    /// Surgery component, evaluated with the integral.
    Surgery,
    /// Colored by a trace class.
    Minus,
}

/// A color as written in a presentation: a single basis name or an integer
/// combination of names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColorSpec {
    Name(String),
    Combination(BTreeMap<String, i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    /// Bottom positions of the strands traversed by this component (1-based).
    pub strands: Vec<usize>,
    /// The strand whose bottom point is the cut point.
    pub cut: usize,
    pub role: Role,
    pub framing: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<ColorSpec>,
}

/// A framed oriented link as the closure of a braid, with roles, colors and
/// cut points. Generators are 1-based; a positive index is a right-handed crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosurePresentation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub strands: usize,
    pub word: Vec<i64>,
    pub components: Vec<ComponentSpec>,
}

/// Which strand of a positive crossing receives the first tensor factor of `R`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// `α` on the strand entering at the left, `β` on the right.
    #[default]
    A,
    /// `α` on the right, `β` on the left.
    B,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Convention::A),
            "B" | "b" => Ok(Convention::B),
            _ => Err(Error::Presentation(format!("unknown crossing convention {s:?}"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::A => "A",
            Convention::B => "B",
        })
    }
}

/// A checked presentation. Strands are 0-based bottom positions here.
#[derive(Clone, Debug)]
pub struct ValidPresentation {
    pub pres: ClosurePresentation,
    /// `perm[s]` is the top position reached by the strand starting at `s`.
    pub perm: Vec<usize>,
    /// Declared component indices in `(L⁺, L⁰, L⁻)` order.
    pub order: Vec<usize>,
    /// For each declared component, its strands traversed from the cut.
    pub cycles: Vec<Vec<usize>>,
}

impl ClosurePresentation {
    /// The closure of `word` with one component per cycle, each cut at its
    /// lowest strand, framed by the blackboard framing and given `role`.
    pub fn closure(strands: usize, word: &[i64], role: Role) -> Result<ClosurePresentation> {
        let perm = braid_permutation(strands, word)?;
        let mut seen = vec![false; strands];
        let mut components = Vec::new();
        for s in 0..strands {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut t = perm[s];
            while t != s {
                seen[t] = true;
                cyc.push(t);
                t = perm[t];
            }
            components.push(ComponentSpec {
                strands: cyc.iter().map(|x| x + 1).collect(),
                cut: s + 1,
                role,
                framing: 0,
                color: None,
            });
        }
        let mut pres = ClosurePresentation { p: None, strands, word: word.to_vec(), components };
        let w = pres.validate()?.writhes();
        for (c, w) in pres.components.iter_mut().zip(w) {
            c.framing = w;
        }
        Ok(pres)
    }

    pub fn from_json(text: &str) -> Result<ClosurePresentation> {
        let pres: ClosurePresentation = serde_json::from_str(text).map_err(|e| {
            Error::Schema(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        pres.validate()?;
        Ok(pres)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn validate(&self) -> Result<ValidPresentation> {
        let n = self.strands;
        if n == 0 {
            return Err(Error::Presentation("a braid needs at least one strand".into()));
        }
        let perm = braid_permutation(n, &self.word)?;
        let mut owner = vec![None; n];
        let mut cycles = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            if !c.strands.contains(&c.cut) {
                return Err(Error::Presentation(format!("component {}: cut strand {} is not one of its strands", ci + 1, c.cut)));
            }
            for &s in &c.strands {
                if s == 0 || s > n {
                    return Err(Error::Presentation(format!("component {}: strand {s} out of range 1..={n}", ci + 1)));
                }
                if owner[s - 1].replace(ci).is_some() {
                    return Err(Error::Presentation(format!("strand {s} is claimed by two components")));
                }
            }
            let start = c.cut - 1;
            let mut cyc = vec![start];
            let mut t = perm[start];
            while t != start {
                cyc.push(t);
                t = perm[t];
            }
            let mut a: Vec<usize> = cyc.iter().map(|x| x + 1).collect();
            let mut b = c.strands.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Presentation(format!(
                    "component {}: strands {:?} are not a cycle of the closure (the cycle through {} is {:?})",
                    ci + 1,
                    c.strands,
                    c.cut,
                    a
                )));
            }
            cycles.push(cyc);
        }
        if let Some(s) = owner.iter().position(Option::is_none) {
            return Err(Error::Presentation(format!("strand {} belongs to no component", s + 1)));
        }
        let mut order: Vec<usize> = (0..self.components.len()).collect();
        order.sort_by_key(|&i| self.components[i].role);
        Ok(ValidPresentation { pres: self.clone(), perm, order, cycles })
    }
}

/// Permutation of bottom positions to top positions.
pub fn braid_permutation(strands: usize, word: &[i64]) -> Result<Vec<usize>> {
    let mut at: Vec<usize> = (0..strands).collect();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(Error::Presentation(format!("generator {g} out of range for {strands} strands")));
        }
        at.swap(i - 1, i);
    }
    let mut perm = vec![0; strands];
    for (top, &s) in at.iter().enumerate() {
        perm[s] = top;
    }
    Ok(perm)
}

impl ValidPresentation {
    pub fn component_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn role_counts(&self) -> (usize, usize, usize) {
        let count = |r| self.pres.components.iter().filter(|c| c.role == r).count();
        (count(Role::Plus), count(Role::Surgery), count(Role::Minus))
    }

    /// Declared component of each bottom strand.
    fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.pres.strands];
        for (ci, cyc) in self.cycles.iter().enumerate() {
            for &s in cyc {
                owner[s] = ci;
            }
        }
        owner
    }

    /// Signed crossings as `(component, component, sign)`.
    fn crossings(&self) -> Vec<(usize, usize, i64)> {
        let owner = self.owners();
        let mut at: Vec<usize> = (0..self.pres.strands).collect();
        let mut out = Vec::new();
        for &g in &self.pres.word {
            let i = g.unsigned_abs() as usize;
            out.push((owner[at[i - 1]], owner[at[i]], g.signum()));
            at.swap(i - 1, i);
        }
        out
    }

    /// Blackboard framing of each declared component.
    pub fn writhes(&self) -> Vec<i64> {
        let mut w = vec![0; self.cycles.len()];
        for (a, b, s) in self.crossings() {
            if a == b {
                w[a] += s;
            }
        }
        w
    }

    /// Linking matrix in `(L⁺, L⁰, L⁻)` order with the declared framings on
    /// the diagonal.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.cycles.len();
        let mut twice = vec![vec![0i64; m]; m];
        for (a, b, s) in self.crossings() {
            if a != b {
                twice[a][b] += s;
                twice[b][a] += s;
            }
        }
        let pos: Vec<usize> = {
            let mut v = vec![0; m];
            for (k, &ci) in self.order.iter().enumerate() {
                v[ci] = k;
            }
            v
        };
        let mut out = vec![vec![0i64; m]; m];
        for a in 0..m {
            for b in 0..m {
                out[pos[a]][pos[b]] = if a == b { self.pres.components[a].framing } else { twice[a][b] / 2 };
            }
        }
        out
    }

    /// Signature of the linking matrix restricted to the surgery components.
    pub fn surgery_signature(&self) -> i64 {
        let lk = self.linking_matrix();
        let idx: Vec<usize> =
            self.order.iter().enumerate().filter(|(_, &ci)| self.pres.components[ci].role == Role::Surgery).map(|(k, _)| k).collect();
        let block: Vec<Vec<i64>> = idx.iter().map(|&a| idx.iter().map(|&b| lk[a][b]).collect()).collect();
        signature(&block)
    }
}

/// Signature of a symmetric integer matrix, by congruence diagonalization
/// over the rationals.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut sig = 0;
    let mut live: Vec<usize> = (0..n).collect();
    while let Some(&first) = live.first() {
        let pivot = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let k = match pivot {
            Some(k) => k,
            None => {
                let Some((i, j)) = live.iter().flat_map(|&i| live.iter().map(move |&j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) else {
                    break;
                };
                // Row and column `i += j` makes the diagonal 2a_ij ≠ 0.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        let d = a[k][k].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        live.retain(|&x| x != k);
        for &r in &live {
            let f = &a[r][k] / &d;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
        }
        for &c in &live {
            a[k][c] = BigRational::zero();
            a[c][k] = BigRational::zero();
        }
        let _ = first;
    }
    sig
}

/// `J_T` of the cut-open presentation.
#[derive(Clone, Debug)]
pub struct UniversalInvariant {
    /// Slot `i` is the `i`-th component in `(L⁺, L⁰, L⁻)` order.
    pub value: Tensor,
    pub presentation_hash: String,
    pub convention: Convention,
    /// Declared component index of each slot.
    pub order: Vec<usize>,
    /// Largest number of terms held by the sweep state.
    pub max_terms: usize,
}

/// A braid with permutation `target ↦ position`: strand starting at bottom
/// position `i` ends at top position `target[i]`.
fn permutation_braid(target: &[usize]) -> Vec<i64> {
    // Bubble sort on the word read bottom to top.
    let n = target.len();
    let mut cur = vec![0; n];
    for (i, &t) in target.iter().enumerate() {
        cur[t] = i;
    }
    let mut swaps = Vec::new();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if cur[i] > cur[i + 1] {
                cur.swap(i, i + 1);
                swaps.push(i as i64 + 1);
            }
        }
    }
    swaps.reverse();
    swaps
}

/// Sweeps braid words through `D^{⊗n}`.
pub struct Sweeper {
    pub p: u32,
    pub convention: Convention,
    ribbon: &'static RibbonData,
    g: Tensor,
}

impl Sweeper {
    pub fn new(p: u32, convention: Convention) -> Result<Sweeper> {
        let ribbon = RibbonData::get(p)?;
        let g = Tensor::from_element(&ribbon.balancing.embed()?);
        Ok(Sweeper { p, convention, ribbon, g })
    }

    pub fn ribbon(&self) -> &'static RibbonData {
        self.ribbon
    }

    fn double(&self) -> &'static Algebra {
        self.ribbon.double()
    }

    /// State after sweeping `word` on `n` strands; slot `s` holds the beads of
    /// the strand starting at bottom position `s`, latest bead leftmost.
    pub fn sweep(&self, n: usize, word: &[i64]) -> Result<(Tensor, usize)> {
        braid_permutation(n, word)?;
        let mut state = Tensor::one(self.double(), n);
        let mut slot_at: Vec<usize> = (0..n).collect();
        let mut max_terms = state.len();
        for &g in word {
            let i = g.unsigned_abs() as usize;
            let (left, right) = (slot_at[i - 1], slot_at[i]);
            let (r, first, second) = match (g > 0, self.convention) {
                (true, Convention::A) => (&self.ribbon.r_matrix, left, right),
                (true, Convention::B) => (&self.ribbon.r_matrix, right, left),
                (false, Convention::A) => (&self.ribbon.r_inv, right, left),
                (false, Convention::B) => (&self.ribbon.r_inv, left, right),
            };
            state = state.left_multiply_at(r, &[first, second]);
            max_terms = max_terms.max(state.len());
            slot_at.swap(i - 1, i);
        }
        Ok((state, max_terms))
    }

    /// `J_T` with membership, ad-invariance and framing handled.
    pub fn universal_invariant(&self, pres: &ClosurePresentation) -> Result<UniversalInvariant> {
        let valid = pres.validate()?;
        let n = pres.strands;
        let m = valid.component_count();
        // Conjugate so that the cut strands sit at positions 1..m in slot order.
        let cuts: Vec<usize> = valid.order.iter().map(|&ci| valid.cycles[ci][0]).collect();
        let mut target: Vec<usize> = cuts.clone();
        target.extend((0..n).filter(|s| !cuts.contains(s)));
        let x = permutation_braid(&target);
        let mut word = x.clone();
        word.extend_from_slice(&pres.word);
        word.extend(x.iter().rev().map(|g| -g));
        let perm = braid_permutation(n, &word)?;
        debug_assert!((0..n).all(|s| braid_permutation(n, &x).map(|px| px[s] == target[s]).unwrap_or(false)));
        let (mut state, max_terms) = self.sweep(n, &word)?;

        let mut groups = Vec::with_capacity(m);
        for k in 0..m {
            let mut traversal = vec![k];
            let mut t = perm[k];
            while t != k {
                traversal.push(t);
                t = perm[t];
            }
            for &s in &traversal[..traversal.len() - 1] {
                state = state.left_multiply_at(&self.g, &[s]);
            }
            traversal.reverse();
            groups.push(traversal);
        }
        let merged = state.merge_slots(&groups);
        let mut value = merged.to_restricted().map_err(|e| Error::Construction(format!("universal invariant is not in U^⊗{m}: {e}")))?;

        let writhes = valid.writhes();
        for (slot, &ci) in valid.order.iter().enumerate() {
            let shift = writhes[ci] - pres.components[ci].framing;
            if shift != 0 {
                let base = if shift > 0 { &self.ribbon.ribbon } else { &self.ribbon.ribbon_inv };
                value = value.left_multiply_at(&Tensor::from_element(&base.pow(shift.unsigned_abs() as u32)), &[slot]);
            }
        }
        if m > 0 && !is_invariant(&value) {
            return Err(Error::Construction("universal invariant is not ad-invariant".into()));
        }
        Ok(UniversalInvariant { value, presentation_hash: pres.hash(), convention: self.convention, order: valid.order, max_terms })
    }

    /// `Σ β g α`-type closure of a one-strand-per-slot state without
    /// conjugation; used to test single curls.
    pub fn closed_word(&self, pres: &ClosurePresentation) -> Result<Element> {
        let j = self.universal_invariant(pres)?;
        if j.value.arity() != 1 {
            return Err(Error::ArityMismatch(j.value.arity(), 1));
        }
        Ok(j.value.multiply_slots(&[0]))
    }
}

/// `(tr(ρ_{V_1}(g)·) ⊗ … ⊗ tr(ρ_{V_m}(g)·)) J_T`, one module per component in
/// declared order.
pub fn rt_colored_invariant(sweeper: &Sweeper, pres: &ClosurePresentation, colors: &[ModuleRep]) -> Result<CycloScalar> {
    let j = sweeper.universal_invariant(pres)?;
    if colors.len() != j.order.len() {
        return Err(Error::ArityMismatch(colors.len(), j.order.len()));
    }
    let alg = j.value.algebra();
    let mut t = j.value;
    for slot in (0..j.order.len()).rev() {
        let v = &colors[j.order[slot]];
        let values: Vec<CycloScalar> =
            (0..alg.dim() as u32).map(|i| v.act(&alg.basis(i)).map(|a| v.pivotal_trace(&a, false))).collect::<Result<_>>()?;
        t = t.apply_functional(slot, |i| values[i as usize].clone());
    }
    Ok(t.scalar_value())
}

/// Strand count and braid word.
pub type Braid = (usize, &'static [i64]);

/// Braid pairs with isotopic closures, related by conjugation or stabilization.
pub const MARKOV_CORPUS: &[(&str, Braid, Braid)] = &[
    ("trefoil conjugated by σ1⁻¹", (2, &[1, 1, 1]), (2, &[-1, 1, 1, 1, 1])),
    ("figure-eight conjugated by σ2", (3, &[1, -2, 1, -2]), (3, &[2, 1, -2, 1, -2, -2])),
    ("Hopf link conjugated by σ1⁻¹", (3, &[1, 1, 2]), (3, &[-1, 1, 1, 2, 1])),
    ("unknot stabilized positively", (1, &[]), (2, &[1])),
    ("unknot stabilized negatively", (1, &[]), (2, &[-1])),
    ("trefoil stabilized positively", (2, &[1, 1, 1]), (3, &[1, 1, 1, 2])),
    ("Hopf link stabilized negatively", (2, &[1, 1]), (3, &[1, 1, -2])),
    ("figure-eight stabilized positively", (3, &[1, -2, 1, -2]), (4, &[1, -2, 1, -2, 3])),
];

/// Closed evaluations of the closure with every framing `+1`: `μ` on every
/// slot, the quantum trace in `X_2^+` on every slot, and the pairing with the
/// same trace class on every slot, for each class.
pub fn closed_evaluations(sw: &Sweeper, mu: &crate::integral::IntegralData, n: usize, word: &[i64]) -> Result<Vec<CycloScalar>> {
    let mut pres = ClosurePresentation::closure(n, word, Role::Surgery)?;
    for c in &mut pres.components {
        c.framing = 1;
    }
    let j = sw.universal_invariant(&pres)?;
    let m = j.value.arity();
    let mut t = j.value.clone();
    for s in (0..m).rev() {
        t = t.apply_functional(s, |i| mu.mu_basis(i));
    }
    let x2 = ModuleRep::simple(sw.p, 2, crate::repmod::Sign::Plus)?;
    let mut out = vec![t.scalar_value(), rt_colored_invariant(sw, &pres, &vec![x2; m])?];
    let tp = crate::mtrace::TracePrime::get(sw.p)?;
    for (label, _) in &tp.hh0.classes {
        out.push(tp.pairing(&j.value, &vec![*label; m], crate::mtrace::PairingRoute::Character)?);
    }
    Ok(out)
}

/// The braid relations, the monodromy oracle and the Markov corpus.
pub fn verify_tangle(p: u32, convention: Convention) -> Result<Report> {
    let sw = Sweeper::new(p, convention)?;
    let mut rep = Report::new(format!("tangle sweep p={p} convention {convention}"));
    let hopf = ClosurePresentation::closure(2, &[1, 1], Role::Minus)?;
    match sw.universal_invariant(&hopf) {
        Ok(j) => {
            rep.check("cut-open σ1² equals the monodromy R21 R", j.value == sw.ribbon.monodromy);
        }
        Err(e) => rep.fail("cut-open σ1² equals the monodromy R21 R", e.to_string()),
    }
    let d = sw.double();
    for n in [2, 3] {
        for i in 1..n as i64 {
            let one = Tensor::one(d, n);
            rep.check(format!("σ{i} σ{i}⁻¹ = 1 on {n} strands"), sw.sweep(n, &[i, -i])?.0 == one);
            rep.check(format!("σ{i}⁻¹ σ{i} = 1 on {n} strands"), sw.sweep(n, &[-i, i])?.0 == one);
        }
    }
    for (a, b) in [(&[1i64, 2, 1][..], &[2i64, 1, 2][..]), (&[-1, -2, -1], &[-2, -1, -2]), (&[1, 2, -1], &[-2, 1, 2])] {
        rep.check(format!("{a:?} = {b:?} on 3 strands"), sw.sweep(3, a)?.0 == sw.sweep(3, b)?.0);
    }
    let mu = crate::integral::IntegralData::new(p)?;
    for (name, (n1, w1), (n2, w2)) in MARKOV_CORPUS {
        match (closed_evaluations(&sw, &mu, *n1, w1), closed_evaluations(&sw, &mu, *n2, w2)) {
            (Ok(a), Ok(b)) => {
                rep.check_with(format!("{name}: equal closed evaluations"), a == b, || format!("{a:?} vs {b:?}"));
            }
            (Err(e), _) | (_, Err(e)) => rep.fail(format!("{name}: equal closed evaluations"), e.to_string()),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::Sign;

    #[test]
    fn validation_examples() {
        let p = ClosurePresentation::closure(1, &[], Role::Minus).unwrap();
        assert_eq!(p.validate().unwrap().component_count(), 1);
        assert_eq!(ClosurePresentation::closure(2, &[1], Role::Minus).unwrap().components.len(), 1);
        assert_eq!(ClosurePresentation::closure(2, &[1, 1], Role::Minus).unwrap().components.len(), 2);
        assert!(ClosurePresentation::closure(2, &[2], Role::Minus).is_err());
        let mut bad = ClosurePresentation::closure(2, &[1, 1], Role::Minus).unwrap();
        bad.components[0].strands = vec![1, 2];
        assert!(bad.validate().is_err());
        let mut bad = ClosurePresentation::closure(2, &[1], Role::Minus).unwrap();
        bad.components[0].cut = 3;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn linking_and_signature() {
        let mut u = ClosurePresentation::closure(1, &[], Role::Surgery).unwrap();
        u.components[0].framing = 1;
        assert_eq!(u.validate().unwrap().linking_matrix(), vec![vec![1]]);
        assert_eq!(u.validate().unwrap().surgery_signature(), 1);
        u.components[0].framing = -1;
        assert_eq!(u.validate().unwrap().surgery_signature(), -1);
        let hopf = ClosurePresentation::closure(2, &[1, 1], Role::Surgery).unwrap();
        let v = hopf.validate().unwrap();
        assert_eq!(v.linking_matrix(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(v.surgery_signature(), 0);
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), 2);
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(signature(&[vec![1, 2], vec![2, 1]]), 0);
        assert_eq!(signature(&[vec![-1, 0, 0], vec![0, 0, 3], vec![0, 3, 0]]), -1);
    }

    #[test]
    fn permutation_braid_realizes_target() {
        let target = vec![2, 0, 3, 1];
        let w = permutation_braid(&target);
        assert_eq!(braid_permutation(4, &w).unwrap(), target);
    }

    #[test]
    fn pure_braid_gives_monodromy() {
        for p in [2, 3] {
            let sw = Sweeper::new(p, Convention::A).unwrap();
            let hopf = ClosurePresentation::closure(2, &[1, 1], Role::Minus).unwrap();
            let j = sw.universal_invariant(&hopf).unwrap();
            assert_eq!(j.value, sw.ribbon().monodromy);
            let b = Sweeper::new(p, Convention::B).unwrap();
            // The other side assignment produces R·R₂₁, which is not ad-invariant.
            assert!(b.universal_invariant(&hopf).map_or(true, |j| j.value != sw.ribbon().monodromy));
            assert_eq!(b.sweep(2, &[1, 1]).unwrap().0, &sw.ribbon().r_matrix * &sw.ribbon().r21);
        }
    }

    #[test]
    fn curl_and_trivial() {
        let sw = Sweeper::new(2, Convention::A).unwrap();
        let r = sw.ribbon();
        let mut unknot = ClosurePresentation::closure(1, &[], Role::Minus).unwrap();
        assert_eq!(sw.closed_word(&unknot).unwrap(), r.restricted().one());
        unknot.components[0].framing = 1;
        assert_eq!(sw.closed_word(&unknot).unwrap(), r.ribbon_inv);
        let curl = ClosurePresentation::closure(2, &[1], Role::Minus).unwrap();
        assert_eq!(curl.components[0].framing, 1);
        assert_eq!(sw.closed_word(&curl).unwrap(), r.ribbon_inv);
        let neg = ClosurePresentation::closure(2, &[-1], Role::Minus).unwrap();
        assert_eq!(sw.closed_word(&neg).unwrap(), r.ribbon);
    }

    #[test]
    fn reidemeister_moves() {
        for p in [2, 3] {
            let sw = Sweeper::new(p, Convention::A).unwrap();
            let d = sw.double();
            let one2 = Tensor::one(d, 2);
            assert_eq!(sw.sweep(2, &[1, -1]).unwrap().0, one2);
            assert_eq!(sw.sweep(2, &[-1, 1]).unwrap().0, one2);
            if p == 2 {
                assert_eq!(sw.sweep(3, &[1, 2, 1]).unwrap().0, sw.sweep(3, &[2, 1, 2]).unwrap().0);
                assert_eq!(sw.sweep(3, &[-1, 2, 1]).unwrap().0, sw.sweep(3, &[2, 1, -2]).unwrap().0);
            }
        }
    }

    #[test]
    fn suite_passes_for_the_fixed_convention_only() {
        let rep = verify_tangle(2, Convention::A).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(!verify_tangle(2, Convention::B).unwrap().passed());
    }

    #[test]
    fn rt_unknots() {
        let sw = Sweeper::new(2, Convention::A).unwrap();
        let unknot = ClosurePresentation::closure(1, &[], Role::Minus).unwrap();
        let sc = *sw.ribbon().restricted().scalars();
        let x1 = ModuleRep::simple(2, 1, Sign::Plus).unwrap();
        assert!(rt_colored_invariant(&sw, &unknot, &[x1]).unwrap().is_one());
        let x2 = ModuleRep::simple(2, 2, Sign::Plus).unwrap();
        assert_eq!(rt_colored_invariant(&sw, &unknot, &[x2]).unwrap(), -(sc.q_pow(1) + sc.q_pow(-1)));
        let center = crate::center::CenterData::get(2).unwrap();
        let m = center.model(1, Sign::Plus);
        let j = sw.universal_invariant(&unknot).unwrap();
        let val = j.value.multiply_slots(&[0]);
        assert!(m.ambient.pivotal_trace(&m.act(&val).unwrap(), false).is_zero());
    }
}
