use std::collections::HashSet;

use serde::Serialize;

use super::words::enumerate_words;
use super::{SchottkyGroup, Word};
use crate::complex_geom::MoebiusMap;
use crate::Result;

/// A conjugate `h g_k h⁻¹` with the conjugator that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugateRep {
    pub word: Word,
    pub map: MoebiusMap,
    pub conjugator: Word,
    pub conjugator_map: MoebiusMap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetRep {
    pub word: Word,
    pub map: MoebiusMap,
}

/// Distinct conjugates `h g_k h⁻¹` over conjugators `|h| ≤ depth`, keyed by
/// the reduced normal form and listed in order of first appearance.
pub fn conjugacy_class_reps(
    group: &SchottkyGroup,
    k: usize,
    depth: usize,
) -> Result<Vec<ConjugateRep>> {
    group.check_rank_index(k)?;
    let gk = Word::new(vec![k as i8])?;
    let gmap = *group.generator(k);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (h, hm) in enumerate_words(group, depth)? {
        let conj = h.concat(&gk).concat(&h.inverse());
        if seen.insert(conj.clone()) {
            out.push(ConjugateRep {
                word: conj,
                map: gmap.conjugate_by(&hm),
                conjugator: h,
                conjugator_map: hm,
            });
        }
    }
    Ok(out)
}

/// Strips leading `g_k^±` and trailing `g_l^±` letters.
pub(crate) fn double_coset_key(w: &Word, k: usize, l: usize) -> Word {
    let letters = w.letters();
    let start = letters.iter().take_while(|x| x.unsigned_abs() as usize == k).count();
    let rest = &letters[start..];
    let end = rest.len() - rest.iter().rev().take_while(|x| x.unsigned_abs() as usize == l).count();
    Word::reduce(rest[..end].iter().copied())
}

/// One representative per double coset `⟨g_k⟩ \ Γ / ⟨g_l⟩` among words of
/// length `≤ depth`; the identity coset is left out when `k = l`.
pub fn double_coset_reps(
    group: &SchottkyGroup,
    k: usize,
    l: usize,
    depth: usize,
) -> Result<Vec<CosetRep>> {
    group.check_rank_index(k)?;
    group.check_rank_index(l)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (w, _) in enumerate_words(group, depth)? {
        let key = double_coset_key(&w, k, l);
        if k == l && key.is_identity() {
            continue;
        }
        if seen.insert(key.clone()) {
            let map = group.word_map(&key);
            out.push(CosetRep { word: key, map });
        }
    }
    Ok(out)
}
