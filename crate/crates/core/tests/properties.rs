use ordinal_latent::identify::{between_set, within_all_set};
use ordinal_latent::{estimate_cdf, merge_categories, theta, Interval, MergeSpec, OrdinalSample, QuantileSet, Rect, RectSet};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (0u32..1000, 1u32..400).prop_map(|(a, w)| {
        let lo = a as f64 / 1000.0;
        let hi = ((a + w).min(1000)) as f64 / 1000.0;
        Interval::new(lo, hi.max(lo + 0.001).min(1.0)).unwrap_or_else(|_| Interval::new(0.999, 1.0).unwrap())
    })
}

fn qset() -> impl Strategy<Value = QuantileSet> {
    prop::collection::vec(interval(), 0..6).prop_map(QuantileSet::from_intervals)
}

fn counts(j: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u32..50, j).prop_filter("some mass", |c| c.iter().any(|v| *v > 0)).prop_map(|c| {
        c.into_iter().map(f64::from).collect()
    })
}

fn sample_pair() -> impl Strategy<Value = (OrdinalSample, OrdinalSample)> {
    (2usize..8).prop_flat_map(|j| (counts(j), counts(j))).prop_map(|(a, b)| {
        (OrdinalSample::from_counts("x", a).unwrap(), OrdinalSample::from_counts("y", b).unwrap())
    })
}

proptest! {
    #[test]
    fn union_and_intersection_laws(a in qset(), b in qset(), probe in 1u32..=1000) {
        let tau = probe as f64 / 1000.0;
        let u = a.union(&b);
        let i = a.intersection(&b);
        prop_assert_eq!(&u, &b.union(&a));
        prop_assert_eq!(&i, &b.intersection(&a));
        prop_assert!(a.is_subset_of(&u) && b.is_subset_of(&u));
        prop_assert!(i.is_subset_of(&a) && i.is_subset_of(&b));
        prop_assert_eq!(u.contains(tau), a.contains(tau) || b.contains(tau));
        prop_assert_eq!(i.contains(tau), a.contains(tau) && b.contains(tau));
        prop_assert!((u.measure() + i.measure() - a.measure() - b.measure()).abs() < 1e-9);
        prop_assert!(u.intervals().windows(2).all(|w| w[0].hi() < w[1].lo()));
    }

    #[test]
    fn rect_union_contains_parts(a in prop::collection::vec((interval(), interval()), 0..4),
                                 b in prop::collection::vec((interval(), interval()), 0..4)) {
        let ra = RectSet::from_rects(a.into_iter().map(|(x, y)| Rect { x, y }));
        let rb = RectSet::from_rects(b.into_iter().map(|(x, y)| Rect { x, y }));
        let u = ra.union(&rb);
        prop_assert!(ra.is_subset_of(&u) && rb.is_subset_of(&u));
        prop_assert!(u.is_subset_of(&u));
    }

    #[test]
    fn cdfs_are_monotone((x, _) in sample_pair()) {
        let f = estimate_cdf(&x).unwrap();
        prop_assert_eq!(f.values().len(), x.categories() - 1);
        prop_assert!(f.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(f.values().iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert_eq!(f.at(x.categories()), 1.0);
    }

    #[test]
    fn theta_is_antisymmetric((x, y) in sample_pair()) {
        let (fx, fy) = (estimate_cdf(&x).unwrap(), estimate_cdf(&y).unwrap());
        let a = theta(&fx, &fy).unwrap();
        let b = theta(&fy, &fx).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(p, q)| *p == -*q));
        // the two between-group sets are disjoint
        let ab = between_set(&fx, &fy).unwrap();
        let ba = between_set(&fy, &fx).unwrap();
        prop_assert!(ab.intersection(&ba).is_empty());
        prop_assert!(within_all_set(&fx, &fx).unwrap().is_empty());
    }

    #[test]
    fn merging_keeps_cdf_at_group_ends((x, _) in sample_pair(), cuts in prop::collection::vec(any::<bool>(), 8)) {
        let j = x.categories();
        let mut groups = Vec::new();
        let mut start = 1;
        for c in 1..j {
            if cuts[c - 1] {
                groups.push((start, c));
                start = c + 1;
            }
        }
        groups.push((start, j));
        prop_assume!(groups.len() >= 2);
        let spec = MergeSpec::new(groups.clone()).unwrap();
        let merged = merge_categories(&x, &spec).unwrap();
        let (f, g) = (estimate_cdf(&x).unwrap(), estimate_cdf(&merged).unwrap());
        for (i, (_, end)) in groups.iter().enumerate() {
            prop_assert!((g.at(i + 1) - f.at(*end)).abs() < 1e-12);
        }
        prop_assert_eq!(merged.total_weight(), x.total_weight());
    }

    #[test]
    fn merge_spec_text_round_trips(groups in prop::collection::vec(1usize..4, 1..6)) {
        let mut text = Vec::new();
        let mut start = 1;
        for w in &groups {
            let end = start + w - 1;
            text.push(if w == &1 { start.to_string() } else { format!("{start}-{end}") });
            start = end + 1;
        }
        let spec: MergeSpec = text.join(",").parse().unwrap();
        prop_assert_eq!(spec.covers(), start - 1);
        prop_assert_eq!(spec.groups().len(), groups.len());
    }
}
