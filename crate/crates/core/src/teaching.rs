//! Concept classes, teaching dimensions and No-Clash teachers.
//!
//! A concept is a bit row over the instance domain. The induced class of a
//! tournament has one concept per vertex `x`: the indicator of the vertices
//! beaten by `x`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::hitting_set::HittingSet;
use crate::tournament::{parse_usize, Tournament};

/// Default cap for exact teaching-set search.
pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptClass {
    domain_size: usize,
    concepts: Vec<Vec<u64>>,
}

impl ConceptClass {
    pub fn new(domain_size: usize, rows: &[Vec<bool>]) -> Result<Self> {
        let mut concepts = Vec::with_capacity(rows.len());
        for (index, row) in rows.iter().enumerate() {
            if row.len() != domain_size {
                return Err(Error::ConceptLength { index, len: row.len(), domain: domain_size });
            }
            concepts.push(bits::from_indices(domain_size, (0..domain_size).filter(|&x| row[x])));
        }
        Self::from_bit_rows(domain_size, concepts)
    }

    /// Rows must already be `words_for(domain_size)` words with no bits past
    /// the domain.
    pub fn from_bit_rows(domain_size: usize, concepts: Vec<Vec<u64>>) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::EmptyClass);
        }
        let mut order: Vec<usize> = (0..concepts.len()).collect();
        order.sort_by(|&a, &b| concepts[a].cmp(&concepts[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if concepts[w[0]] == concepts[w[1]] {
                return Err(Error::DuplicateConcept(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(ConceptClass { domain_size, concepts })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, index: usize) -> &[u64] {
        &self.concepts[index]
    }

    pub fn label(&self, index: usize, instance: usize) -> bool {
        bits::get(&self.concepts[index], instance)
    }

    /// Members of concept `index` as a sorted instance list.
    pub fn members(&self, index: usize) -> Vec<usize> {
        bits::ones(&self.concepts[index]).collect()
    }

    /// The class restricted to the given concepts, in the given order.
    pub fn subclass(&self, indices: &[usize]) -> Result<Self> {
        let rows = indices.iter().map(|&i| self.concepts[i].clone()).collect();
        Self::from_bit_rows(self.domain_size, rows)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            Err(Error::ConceptOutOfRange { index, size: self.len() })
        } else {
            Ok(())
        }
    }

    /// Whether labelling `instances` by concept `index` rules out every other concept.
    pub fn distinguishes(&self, index: usize, instances: &[usize]) -> bool {
        let target = &self.concepts[index];
        (0..self.len())
            .filter(|&j| j != index)
            .all(|j| instances.iter().any(|&x| bits::get(target, x) != bits::get(&self.concepts[j], x)))
    }

    /// Matrix text: `|X| |C|` on the first line, then one 0/1 row per concept.
    pub fn to_matrix(&self) -> String {
        let mut s = format!("{} {}\n", self.domain_size, self.len());
        for c in &self.concepts {
            let row: String = (0..self.domain_size).map(|x| if bits::get(c, x) { '1' } else { '0' }).collect();
            let _ = writeln!(s, "{row}");
        }
        s
    }

    /// Inverse of [`Self::to_matrix`]; whitespace inside rows is ignored.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [domain, count] = dims[..] else {
            return Err(Error::Parse { line, msg: "header must be `|X| |C|`".into() });
        };
        let domain = parse_usize(domain, line)?;
        let count = parse_usize(count, line)?;
        let mut rows = Vec::with_capacity(count);
        for (line, l) in lines {
            let row = l
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Parse { line, msg: format!("unexpected `{c}` in concept row") }),
                })
                .collect::<Result<Vec<bool>>>()?;
            rows.push(row);
        }
        if rows.len() != count {
            return Err(Error::Parse { line, msg: format!("header announces {count} concepts, found {}", rows.len()) });
        }
        Self::new(domain, &rows)
    }
}

/// One concept per vertex, the indicator of its out-neighbourhood.
pub fn induced_class(t: &Tournament) -> ConceptClass {
    let rows = (0..t.order()).map(|x| t.out_row(x).to_vec()).collect();
    ConceptClass::from_bit_rows(t.order(), rows).expect("out-neighbourhoods of a tournament are distinct")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeachingSetResult {
    pub concept_index: usize,
    pub dimension: usize,
    /// Lexicographically smallest teaching set of minimum size.
    pub witness: Vec<usize>,
}

/// Exact teaching dimension of one concept, or `CapExceeded` if it is above `cap`.
pub fn teaching_dim(concept_index: usize, class: &ConceptClass, cap: usize) -> Result<TeachingSetResult> {
    class.check_index(concept_index)?;
    let target = class.concept(concept_index);
    let differences: Vec<Vec<u64>> = (0..class.len())
        .filter(|&j| j != concept_index)
        .map(|j| target.iter().zip(class.concept(j)).map(|(a, b)| a ^ b).collect())
        .collect();
    let witness = HittingSet::new(class.domain_size(), differences)
        .minimum(cap)
        .ok_or(Error::CapExceeded { cap })?;
    Ok(TeachingSetResult { concept_index, dimension: witness.len(), witness })
}

/// Teaching dimension of every concept, computed in parallel.
pub fn all_teaching_dims(class: &ConceptClass, cap: usize) -> Vec<Result<TeachingSetResult>> {
    (0..class.len()).into_par_iter().map(|i| teaching_dim(i, class, cap)).collect()
}

/// Minimum over concepts. Fails only when every concept exceeds `cap`.
pub fn td_min(class: &ConceptClass, cap: usize) -> Result<usize> {
    min_of(&all_teaching_dims(class, cap), cap)
}

fn min_of(dims: &[Result<TeachingSetResult>], cap: usize) -> Result<usize> {
    dims.iter()
        .filter_map(|r| r.as_ref().ok().map(|t| t.dimension))
        .min()
        .ok_or(Error::CapExceeded { cap })
}

/// Maximum over concepts. Fails if any concept exceeds `cap`.
pub fn td_max(class: &ConceptClass, cap: usize) -> Result<usize> {
    all_teaching_dims(class, cap)
        .into_iter()
        .map(|r| r.map(|t| t.dimension))
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RtdLayer {
    pub td_min: usize,
    /// Indices into the original class.
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RtdTrace {
    pub layers: Vec<RtdLayer>,
    pub rtd: usize,
}

/// Recursive teaching dimension by peeling: each layer removes every concept
/// whose teaching dimension in the remaining class equals that class's TD_min.
pub fn rtd(class: &ConceptClass, cap: usize) -> Result<RtdTrace> {
    let mut remaining: Vec<usize> = (0..class.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let sub = class.subclass(&remaining)?;
        let dims = all_teaching_dims(&sub, cap);
        let layer_min = min_of(&dims, cap)?;
        let (removed, kept): (Vec<_>, Vec<_>) = remaining
            .iter()
            .zip(&dims)
            .partition(|(_, d)| matches!(d, Ok(t) if t.dimension == layer_min));
        layers.push(RtdLayer { td_min: layer_min, removed: removed.into_iter().map(|(&i, _)| i).collect() });
        remaining = kept.into_iter().map(|(&i, _)| i).collect();
    }
    let rtd = layers.iter().map(|l| l.td_min).max().unwrap_or(0);
    Ok(RtdTrace { layers, rtd })
}

/// Assignment of a teaching set to every concept, by concept index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcTeacher {
    pub assignment: Vec<Vec<usize>>,
}

impl NcTeacher {
    pub fn max_set_size(&self) -> usize {
        self.assignment.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcVerdict {
    pub valid: bool,
    /// Lexicographically smallest pair of concepts that agree on the union
    /// of their teaching sets.
    pub clash: Option<(usize, usize)>,
}

/// `C_x ↦ {x}`. For `x ≠ y` the loser of the pair is labelled 1 by the
/// winner's concept and 0 by its own, so no two concepts clash.
pub fn canonical_nc_teacher(t: &Tournament) -> NcTeacher {
    NcTeacher { assignment: (0..t.order()).map(|x| vec![x]).collect() }
}

pub fn verify_nc_teacher(class: &ConceptClass, teacher: &NcTeacher) -> Result<NcVerdict> {
    if teacher.assignment.len() != class.len() {
        return Err(Error::MissingAssignment { assigned: teacher.assignment.len(), concepts: class.len() });
    }
    for set in &teacher.assignment {
        if let Some(&x) = set.iter().find(|&&x| x >= class.domain_size()) {
            return Err(Error::InstanceOutOfRange { instance: x, domain: class.domain_size() });
        }
    }
    for i in 0..class.len() {
        for j in i + 1..class.len() {
            let separated = teacher.assignment[i]
                .iter()
                .chain(&teacher.assignment[j])
                .any(|&x| class.label(i, x) != class.label(j, x));
            if !separated {
                return Ok(NcVerdict { valid: false, clash: Some((i, j)) });
            }
        }
    }
    Ok(NcVerdict { valid: true, clash: None })
}

/// NCTD of the induced class: 0 for a single vertex, otherwise 1. The upper
/// bound is witnessed by the canonical teacher; with two or more concepts an
/// all-empty assignment always clashes.
pub fn nctd_of_induced(t: &Tournament) -> usize {
    if t.order() < 2 {
        return 0;
    }
    let class = induced_class(t);
    let verdict = verify_nc_teacher(&class, &canonical_nc_teacher(t)).expect("canonical teacher is well-formed");
    assert!(verdict.valid, "canonical teacher clashed at {:?}", verdict.clash);
    1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::build_qr;

    fn three_cycle() -> Tournament {
        Tournament::build(3, &[(1, 0), (2, 1), (0, 2)]).unwrap()
    }

    fn single() -> Tournament {
        Tournament::build(1, &[]).unwrap()
    }

    #[test]
    fn induced_examples() {
        let c = induced_class(&three_cycle());
        assert_eq!((0..3).map(|i| c.members(i)).collect::<Vec<_>>(), [vec![2], vec![0], vec![1]]);
        let s = induced_class(&single());
        assert_eq!(s.len(), 1);
        assert!(s.members(0).is_empty());
        assert_eq!(induced_class(&build_qr(7).unwrap()).members(0), [3, 5, 6]);
    }

    #[test]
    fn class_validation() {
        assert_eq!(ConceptClass::new(2, &[vec![true, false], vec![true, false]]), Err(Error::DuplicateConcept(0, 1)));
        assert!(matches!(ConceptClass::new(2, &[vec![true]]), Err(Error::ConceptLength { index: 0, .. })));
        assert_eq!(ConceptClass::new(2, &[]), Err(Error::EmptyClass));
    }

    #[test]
    fn teaching_dim_examples() {
        let c = induced_class(&three_cycle());
        let r = teaching_dim(0, &c, DEFAULT_CAP).unwrap();
        assert_eq!((r.dimension, r.witness), (1, vec![2]));

        let s = induced_class(&single());
        let r = teaching_dim(0, &s, DEFAULT_CAP).unwrap();
        assert_eq!((r.dimension, r.witness.len()), (0, 0));

        let pair = ConceptClass::new(1, &[vec![false], vec![true]]).unwrap();
        assert_eq!(teaching_dim(0, &pair, 0), Err(Error::CapExceeded { cap: 0 }));
        for i in 0..2 {
            assert_eq!(teaching_dim(i, &pair, 3).unwrap().dimension, 1);
        }
        assert!(matches!(teaching_dim(2, &pair, 3), Err(Error::ConceptOutOfRange { .. })));
    }

    #[test]
    fn td_min_max_rtd_examples() {
        let c = induced_class(&three_cycle());
        assert_eq!(td_min(&c, DEFAULT_CAP), Ok(1));
        assert_eq!(td_max(&c, DEFAULT_CAP), Ok(1));
        let trace = rtd(&c, DEFAULT_CAP).unwrap();
        assert_eq!(trace.layers, [RtdLayer { td_min: 1, removed: vec![0, 1, 2] }]);
        assert_eq!(trace.rtd, 1);

        let s = induced_class(&single());
        assert_eq!(td_min(&s, DEFAULT_CAP), Ok(0));
        assert_eq!(td_max(&s, DEFAULT_CAP), Ok(0));
        assert_eq!(rtd(&s, DEFAULT_CAP).unwrap().rtd, 0);
    }

    #[test]
    fn qr19_td_min_at_least_two() {
        let c = induced_class(&build_qr(19).unwrap());
        assert!(td_min(&c, DEFAULT_CAP).unwrap() >= 2);
        assert_eq!(td_min(&c, 1), Err(Error::CapExceeded { cap: 1 }));
    }

    #[test]
    fn rtd_peels_multiple_layers() {
        // Hand-checked: {∅, {0}, {0,1}} over two instances. ∅ and {0,1} are
        // taught by one instance each; after removing them {0} is alone.
        let c = ConceptClass::new(2, &[vec![false, false], vec![true, false], vec![true, true]]).unwrap();
        let dims: Vec<usize> = (0..3).map(|i| teaching_dim(i, &c, 5).unwrap().dimension).collect();
        assert_eq!(dims, [1, 2, 1]);
        let trace = rtd(&c, 5).unwrap();
        assert_eq!(
            trace.layers,
            [RtdLayer { td_min: 1, removed: vec![0, 2] }, RtdLayer { td_min: 0, removed: vec![1] }]
        );
        assert_eq!(trace.rtd, 1);
    }

    #[test]
    fn nc_teacher_examples() {
        let t = three_cycle();
        let teacher = canonical_nc_teacher(&t);
        assert_eq!(teacher.assignment, [vec![0], vec![1], vec![2]]);
        assert!(verify_nc_teacher(&induced_class(&t), &teacher).unwrap().valid);

        let s = single();
        assert_eq!(canonical_nc_teacher(&s).assignment, [vec![0]]);
        assert!(verify_nc_teacher(&induced_class(&s), &canonical_nc_teacher(&s)).unwrap().valid);

        let q7 = build_qr(7).unwrap();
        let teacher = canonical_nc_teacher(&q7);
        assert!(verify_nc_teacher(&induced_class(&q7), &teacher).unwrap().valid);
        assert_eq!(teacher.max_set_size(), 1);

        let pair = ConceptClass::new(1, &[vec![false], vec![true]]).unwrap();
        let empty = NcTeacher { assignment: vec![vec![], vec![]] };
        assert_eq!(verify_nc_teacher(&pair, &empty).unwrap(), NcVerdict { valid: false, clash: Some((0, 1)) });
        let both = NcTeacher { assignment: vec![vec![0], vec![0]] };
        assert!(verify_nc_teacher(&pair, &both).unwrap().valid);

        assert!(matches!(
            verify_nc_teacher(&pair, &NcTeacher { assignment: vec![vec![]] }),
            Err(Error::MissingAssignment { .. })
        ));
        assert!(matches!(
            verify_nc_teacher(&pair, &NcTeacher { assignment: vec![vec![3], vec![]] }),
            Err(Error::InstanceOutOfRange { instance: 3, .. })
        ));
    }

    #[test]
    fn nctd_examples() {
        assert_eq!(nctd_of_induced(&single()), 0);
        assert_eq!(nctd_of_induced(&three_cycle()), 1);
        assert_eq!(nctd_of_induced(&build_qr(19).unwrap()), 1);
    }

    #[test]
    fn matrix_text_roundtrip() {
        let c = induced_class(&three_cycle());
        let text = c.to_matrix();
        assert_eq!(text, "3 3\n001\n100\n010\n");
        assert_eq!(ConceptClass::parse_matrix(&text).unwrap(), c);
        assert_eq!(ConceptClass::parse_matrix("2 2\n0 1\n1 1\n").unwrap().members(1), [0, 1]);
        assert!(ConceptClass::parse_matrix("2 3\n01\n11\n").is_err());
        assert!(ConceptClass::parse_matrix("2 1\n0x\n").is_err());
    }
}
