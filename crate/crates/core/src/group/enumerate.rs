//! A documented enumeration of `ℚ(i)Γ`.
//!
//! Group elements are listed as normal forms in shortlex order (alphabet
//! `a, a^-1, b, b^-1, ...`), so the identity is element 0 and the first
//! generator element 1.
//!
//! * Finite groups of order `N`: index `j` gives the coefficient tuple
//!   `tuple_unrank(j, N)`, each entry read through `gauss_rational_at`.
//! * Other groups: index `j` is read as the list `list_decode(j)`; item
//!   `x` is `cantor_pair(gap, c)`, placing coefficient
//!   `gauss_rational_at(c + 1)` (never zero) at the element `gap + 1`
//!   places after the previous one (the first after element `-1`).
//!
//! Index 0 is the zero element in both cases; for infinite groups the
//! identity is index 1 and the first generator index 2.

use std::sync::{Arc, Mutex};

use super::element::GroupAlgebraElement;
use super::spec::{GroupSpec, Word};
use super::GroupError;
use crate::numeric::{
    cantor_pair, cantor_unpair, gauss_index, gauss_rational_at, list_decode, list_encode,
    tuple_rank, tuple_unrank,
};

const MAX_WORD_LEN: usize = 64;

/// Enumerator with a growing cache of shortlex normal forms.
pub struct GroupAlgebraEnumerator {
    spec: Arc<GroupSpec>,
    words: Mutex<Vec<Word>>,
}

impl GroupAlgebraEnumerator {
    pub fn new(spec: Arc<GroupSpec>) -> Self {
        GroupAlgebraEnumerator {
            spec,
            words: Mutex::new(Vec::new()),
        }
    }

    fn words_upto(&self, count: usize) -> Result<Vec<Word>, GroupError> {
        let mut cache = self.words.lock().expect("enumeration cache");
        if cache.len() < count {
            let want = count.max(2 * cache.len());
            *cache = self.spec.normal_forms(want, MAX_WORD_LEN)?;
            if cache.len() < count {
                return Err(GroupError::EnumerationExhausted(count));
            }
        }
        Ok(cache[..count].to_vec())
    }

    pub fn element(&self, index: u64) -> Result<GroupAlgebraElement, GroupError> {
        if let Some(n) = self.spec.order() {
            let coeffs = tuple_unrank(index, n);
            let words = self.words_upto(n)?;
            let terms = words
                .into_iter()
                .zip(coeffs)
                .map(|(w, c)| (w, gauss_rational_at(c)));
            return GroupAlgebraElement::from_terms(&self.spec, terms);
        }
        let mut pos: i64 = -1;
        let mut placed = Vec::new();
        for x in list_decode(index) {
            let (gap, c) = cantor_unpair(x);
            pos += gap as i64 + 1;
            placed.push((pos as usize, gauss_rational_at(c + 1)));
        }
        let Some(&(last, _)) = placed.last() else {
            return Ok(GroupAlgebraElement::zero(&self.spec));
        };
        let words = self.words_upto(last + 1)?;
        let terms = placed.into_iter().map(|(p, c)| (words[p].clone(), c));
        GroupAlgebraElement::from_terms(&self.spec, terms)
    }

    /// Position of `a` in the enumeration.
    pub fn index_of(&self, a: &GroupAlgebraElement) -> Result<u64, GroupError> {
        let longest = a.max_length();
        let mut count = 16;
        let words = loop {
            let ws = self.spec.normal_forms(count, longest + 1)?;
            if ws.len() < count || ws.last().is_some_and(|w| w.len() > longest) {
                break ws;
            }
            count *= 2;
        };
        let position = |w: &Word| {
            words
                .iter()
                .position(|x| x == w)
                .ok_or_else(|| GroupError::BadElement("word outside the enumeration".into()))
        };
        if let Some(n) = self.spec.order() {
            let mut tuple = vec![0u64; n];
            for (w, c) in &a.terms {
                tuple[position(w)?] = gauss_index(c);
            }
            return Ok(tuple_rank(&tuple));
        }
        let mut placed: Vec<(usize, u64)> = a
            .terms
            .iter()
            .map(|(w, c)| Ok((position(w)?, gauss_index(c) - 1)))
            .collect::<Result<_, GroupError>>()?;
        placed.sort();
        let mut prev: i64 = -1;
        let mut items = Vec::new();
        for (p, c) in placed {
            items.push(cantor_pair((p as i64 - prev - 1) as u64, c));
            prev = p as i64;
        }
        Ok(list_encode(&items))
    }
}

pub fn enumerate_group_algebra(
    spec: &Arc<GroupSpec>,
    index: u64,
) -> Result<GroupAlgebraElement, GroupError> {
    GroupAlgebraEnumerator::new(spec.clone()).element(index)
}

pub fn group_algebra_index_of(a: &GroupAlgebraElement) -> Result<u64, GroupError> {
    GroupAlgebraEnumerator::new(a.spec.clone()).index_of(a)
}
