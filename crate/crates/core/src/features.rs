//! Pairwise mutual-information features and the affinity built from them.

use crate::error::{Error, Result};
use crate::graph::{AttrKind, Snapshot, UserId};
use crate::scalar::Real;

/// Counts of information shared by two users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FeatureVector {
    pub mutual_friends: u64,
    pub mutual_schools: u64,
    pub mutual_groups: u64,
    pub mutual_ips: u64,
    pub mutual_interactions: u64,
}

impl FeatureVector {
    pub const LEN: usize = 5;

    pub fn as_array(&self) -> [u64; Self::LEN] {
        [
            self.mutual_friends,
            self.mutual_schools,
            self.mutual_groups,
            self.mutual_ips,
            self.mutual_interactions,
        ]
    }
}

/// One non-negative weight per [`FeatureVector`] field, in field order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureWeights<F> {
    pub w: [F; FeatureVector::LEN],
}

impl<F: Real> FeatureWeights<F> {
    pub fn new(w: [F; FeatureVector::LEN]) -> Result<Self> {
        let weights = FeatureWeights { w };
        weights.validate()?;
        Ok(weights)
    }

    pub fn zero() -> Self {
        FeatureWeights {
            w: [F::zero(); FeatureVector::LEN],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w.iter().all(|x| x.is_finite() && *x >= F::zero()) {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "feature weights must be finite and non-negative, got {:?}",
                self.w
            )))
        }
    }

    pub fn scaled(&self, c: F) -> Self {
        FeatureWeights {
            w: self.w.map(|x| x * c),
        }
    }
}

impl<F: Real> Default for FeatureWeights<F> {
    /// 0.5 friends, 0.3 schools, 0.2 groups; IPs and interactions off.
    fn default() -> Self {
        FeatureWeights {
            w: [0.5, 0.3, 0.2, 0.0, 0.0].map(F::lit),
        }
    }
}

/// Size of the intersection of two ascending slices.
pub(crate) fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn sorted_intersection<'a, T: Ord + Copy>(a: &'a [T], b: &'a [T]) -> impl Iterator<Item = T> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    return Some(a[i - 1]);
                }
            }
        }
        None
    })
}

fn check_pair(snapshot: &Snapshot, u: UserId, v: UserId) -> Result<()> {
    for x in [u, v] {
        if !snapshot.contains(x) {
            return Err(Error::UnknownUser(x));
        }
    }
    if u == v {
        return Err(Error::SelfPair(u));
    }
    Ok(())
}

/// Number of attribute values of `kind` held by both users.
pub fn shared_attributes(snapshot: &Snapshot, u: UserId, v: UserId, kind: AttrKind) -> usize {
    sorted_intersection_len(snapshot.attributes(u, kind), snapshot.attributes(v, kind))
}

pub fn feature_vector(snapshot: &Snapshot, u: UserId, v: UserId) -> Result<FeatureVector> {
    check_pair(snapshot, u, v)?;
    Ok(feature_vector_unchecked(snapshot, u, v))
}

pub(crate) fn feature_vector_unchecked(snapshot: &Snapshot, u: UserId, v: UserId) -> FeatureVector {
    let shared = |kind| shared_attributes(snapshot, u, v, kind) as u64;
    FeatureVector {
        mutual_friends: sorted_intersection_len(snapshot.neighbors(u), snapshot.neighbors(v))
            as u64,
        mutual_schools: shared(AttrKind::School),
        mutual_groups: shared(AttrKind::Group),
        mutual_ips: shared(AttrKind::Ip),
        mutual_interactions: snapshot.interactions(u, v),
    }
}

/// Sum over common neighbors `z` of `1 / ln(deg z)`.
///
/// A common neighbor is adjacent to both users, so its degree is at least 2
/// and every term is finite.
pub fn adamic_adar<F: Real>(snapshot: &Snapshot, u: UserId, v: UserId) -> Result<F> {
    check_pair(snapshot, u, v)?;
    Ok(
        sorted_intersection(snapshot.neighbors(u), snapshot.neighbors(v))
            .map(|z| F::one() / F::from_count(snapshot.neighbors(z).len()).ln())
            .sum(),
    )
}

/// `Σ w_i · ln(S_i + 1)` with the natural logarithm.
pub fn affinity<F: Real>(fv: &FeatureVector, weights: &FeatureWeights<F>) -> F {
    fv.as_array()
        .iter()
        .zip(weights.w.iter())
        .filter(|(_, w)| **w != F::zero())
        .map(|(&s, &w)| w * (F::from_u64(s).expect("count fits") + F::one()).ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeRecord;
    use proptest::prelude::*;

    fn fv1(friends: u64) -> FeatureVector {
        FeatureVector {
            mutual_friends: friends,
            ..Default::default()
        }
    }

    #[test]
    fn disjoint_pair_has_zero_features() {
        let mut b = Snapshot::builder();
        b.add_edge(UserId(1), UserId(2), 0).unwrap();
        b.add_edge(UserId(3), UserId(4), 0).unwrap();
        let s = b.build();
        let fv = feature_vector(&s, UserId(1), UserId(3)).unwrap();
        assert_eq!(fv, FeatureVector::default());
        assert_eq!(adamic_adar::<f64>(&s, UserId(1), UserId(3)).unwrap(), 0.0);
    }

    #[test]
    fn hand_counted_feature_vector() {
        // u=1 friends {10,11,12}, v=2 friends {11,12,13}; shared school; 7 interactions.
        let mut b = Snapshot::builder();
        for f in [10, 11, 12] {
            b.add_edge(UserId(1), UserId(f), 0).unwrap();
        }
        for f in [11, 12, 13] {
            b.add_edge(UserId(2), UserId(f), 0).unwrap();
        }
        b.add_attribute(UserId(1), AttrKind::School, 1);
        b.add_attribute(UserId(2), AttrKind::School, 1);
        b.add_attribute(UserId(2), AttrKind::School, 2);
        b.add_attribute(UserId(1), AttrKind::Group, 5);
        b.add_interaction(UserId(2), UserId(1), 7).unwrap();
        let s = b.build();
        let fv = feature_vector(&s, UserId(1), UserId(2)).unwrap();
        assert_eq!(fv.as_array(), [2, 1, 0, 0, 7]);
    }

    #[test]
    fn feature_vector_rejects_bad_pairs() {
        let mut b = Snapshot::builder();
        b.add_edge(UserId(1), UserId(2), 0).unwrap();
        let s = b.build();
        assert!(matches!(
            feature_vector(&s, UserId(1), UserId(1)),
            Err(Error::SelfPair(_))
        ));
        assert!(matches!(
            feature_vector(&s, UserId(1), UserId(9)),
            Err(Error::UnknownUser(_))
        ));
    }

    #[test]
    fn adamic_adar_hand_values() {
        // 1 and 2 share neighbor 3 (degree 2).
        let edges = [EdgeRecord::new(1, 3, 0), EdgeRecord::new(2, 3, 0)];
        let s = Snapshot::from_records(&edges, &[], &[]).unwrap();
        let aa: f64 = adamic_adar(&s, UserId(1), UserId(2)).unwrap();
        assert!((aa - std::f64::consts::LOG2_E).abs() < 1e-12);

        // Add a second shared neighbor 4 of degree 4.
        let edges = [
            EdgeRecord::new(1, 3, 0),
            EdgeRecord::new(2, 3, 0),
            EdgeRecord::new(1, 4, 0),
            EdgeRecord::new(2, 4, 0),
            EdgeRecord::new(4, 5, 0),
            EdgeRecord::new(4, 6, 0),
        ];
        let s = Snapshot::from_records(&edges, &[], &[]).unwrap();
        let aa: f64 = adamic_adar(&s, UserId(1), UserId(2)).unwrap();
        assert!((aa - 2.1640).abs() < 1e-4);
    }

    #[test]
    fn affinity_differences_for_friend_counts() {
        let w = FeatureWeights::<f64>::new([0.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(affinity(&FeatureVector::default(), &w), 0.0);
        let d1 = (affinity(&fv1(6), &w) - affinity(&fv1(5), &w)).abs();
        let d2 = (affinity(&fv1(100), &w) - affinity(&fv1(99), &w)).abs();
        assert!((d1 - 0.077).abs() < 1e-3, "{d1}");
        assert!((d2 - 0.005).abs() < 1e-3, "{d2}");
    }

    #[test]
    fn affinity_single_school_term() {
        let w = FeatureWeights::<f32>::new([0.0, 0.3, 0.0, 0.0, 0.0]).unwrap();
        let fv = FeatureVector {
            mutual_schools: 1,
            ..Default::default()
        };
        assert!((affinity(&fv, &w) - 0.3 * 2f32.ln()).abs() < 1e-6);
    }

    #[test]
    fn weights_validation() {
        assert!(FeatureWeights::new([0.1, -0.1, 0.0, 0.0, 0.0]).is_err());
        assert!(FeatureWeights::new([f64::NAN, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert_eq!(FeatureWeights::<f64>::default().w, [0.5, 0.3, 0.2, 0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn affinity_is_monotone(
            s in prop::array::uniform5(0u64..500),
            w in prop::array::uniform5(0.0f64..3.0),
            which in 0usize..5,
        ) {
            let weights = FeatureWeights { w };
            let fv = FeatureVector {
                mutual_friends: s[0], mutual_schools: s[1], mutual_groups: s[2],
                mutual_ips: s[3], mutual_interactions: s[4],
            };
            let mut bumped = s;
            bumped[which] += 1;
            let fv2 = FeatureVector {
                mutual_friends: bumped[0], mutual_schools: bumped[1], mutual_groups: bumped[2],
                mutual_ips: bumped[3], mutual_interactions: bumped[4],
            };
            let (a, b) = (affinity(&fv, &weights), affinity(&fv2, &weights));
            prop_assert!(a >= 0.0);
            prop_assert!(b >= a);
            if w[which] > 0.0 {
                prop_assert!(b > a);
            }
        }

        #[test]
        fn affinity_scales_linearly(
            s in prop::array::uniform5(0u64..500),
            w in prop::array::uniform5(0.0f64..3.0),
            c in 0.0f64..10.0,
        ) {
            let fv = FeatureVector {
                mutual_friends: s[0], mutual_schools: s[1], mutual_groups: s[2],
                mutual_ips: s[3], mutual_interactions: s[4],
            };
            let weights = FeatureWeights { w };
            let lhs = affinity(&fv, &weights.scaled(c));
            let rhs = c * affinity(&fv, &weights);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn features_are_symmetric(
            edges in prop::collection::vec((0u32..25, 0u32..25), 0..120),
            attrs in prop::collection::vec((0u32..25, 0usize..4, 0u32..4), 0..60),
            inter in prop::collection::vec((0u32..25, 0u32..25, 0u64..9), 0..30),
            u in 0u32..25,
            v in 0u32..25,
        ) {
            prop_assume!(u != v);
            let mut b = Snapshot::builder();
            b.add_user(UserId(u)).add_user(UserId(v));
            for (a, c) in edges {
                if a != c { b.add_edge(UserId(a), UserId(c), 0).unwrap(); }
            }
            for (x, k, val) in attrs {
                b.add_attribute(UserId(x), AttrKind::ALL[k], val);
            }
            for (a, c, n) in inter {
                if a != c { b.add_interaction(UserId(a), UserId(c), n).unwrap(); }
            }
            let s = b.build();
            let (u, v) = (UserId(u), UserId(v));
            prop_assert_eq!(feature_vector(&s, u, v).unwrap(), feature_vector(&s, v, u).unwrap());
            let aa_uv: f64 = adamic_adar(&s, u, v).unwrap();
            let aa_vu: f64 = adamic_adar(&s, v, u).unwrap();
            prop_assert_eq!(aa_uv, aa_vu);
            let common = feature_vector(&s, u, v).unwrap().mutual_friends;
            prop_assert_eq!(aa_uv == 0.0, common == 0);
            let max_deg = s.users().iter().map(|&x| s.degree(x).unwrap()).max().unwrap_or(0);
            if common > 0 {
                prop_assert!(aa_uv + 1e-12 >= common as f64 / (max_deg as f64).ln());
            }
        }
    }
}
