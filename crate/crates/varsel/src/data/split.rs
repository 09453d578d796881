use crate::rng::SplitMix64;

use super::{DataError, TabularDataset};

/// Per-class test counts by the largest-remainder method.
///
/// The total is `round(N * fraction)`; each class first gets
/// `floor(count * fraction)`, and the leftover seats go to the largest
/// fractional remainders (earlier classes win ties).
pub fn largest_remainder_counts(class_counts: &[usize], fraction: f64) -> Vec<usize> {
    let total: usize = class_counts.iter().sum();
    let seats = (total as f64 * fraction).round() as usize;
    let quotas: Vec<f64> = class_counts.iter().map(|&c| c as f64 * fraction).collect();
    let mut out: Vec<usize> = quotas.iter().zip(class_counts).map(|(q, &c)| (q.floor() as usize).min(c)).collect();
    let mut order: Vec<usize> = (0..class_counts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut left = seats.saturating_sub(out.iter().sum());
    for i in order {
        if left == 0 {
            break;
        }
        if out[i] < class_counts[i] {
            out[i] += 1;
            left -= 1;
        }
    }
    out
}

/// Splits a labeled dataset into `(train, test)` preserving class shares.
///
/// Rows of each class (classes in declared label order) are shuffled by one
/// seeded SplitMix64 stream; the first `k` of each go to the test set. Both
/// outputs keep the original row order.
pub fn stratified_split(
    dataset: &TabularDataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(TabularDataset, TabularDataset), DataError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DataError::InvalidFraction(test_fraction));
    }
    let target = dataset.target_index().ok_or(DataError::Unlabeled)?;
    let classes = dataset.class_counts()?;
    if classes.len() < 2 {
        return Err(DataError::DegenerateClass(classes.len()));
    }

    let counts: Vec<usize> = classes.iter().map(|c| c.1).collect();
    let take = largest_remainder_counts(&counts, test_fraction);

    let mut rng = SplitMix64::new(seed);
    let mut in_test = vec![false; dataset.len()];
    for ((label, _), k) in classes.iter().zip(take) {
        let mut members: Vec<usize> = (0..dataset.len()).filter(|&i| dataset.rows[i][target] == *label).collect();
        rng.shuffle(&mut members);
        for &i in &members[..k] {
            in_test[i] = true;
        }
    }

    let (test, train): (Vec<usize>, Vec<usize>) = (0..dataset.len()).partition(|&i| in_test[i]);
    Ok((dataset.select_rows(&train), dataset.select_rows(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_csv, LoadOptions};

    fn two_class(pos: usize, neg: usize) -> TabularDataset {
        let mut text = String::from("x,y\n");
        for i in 0..pos {
            text.push_str(&format!("{i},1\n"));
        }
        for i in 0..neg {
            text.push_str(&format!("{},0\n", 1000 + i));
        }
        parse_csv(&text, &LoadOptions::default().with_target("y")).unwrap()
    }

    #[test]
    fn heart_failure_counts() {
        // 96 * 0.2 = 19.2, 203 * 0.2 = 40.6; 60 seats, floors give 59, the
        // extra seat goes to the 0.6 remainder.
        assert_eq!(largest_remainder_counts(&[203, 96], 0.2), vec![41, 19]);
        assert_eq!(largest_remainder_counts(&[96, 203], 0.2), vec![19, 41]);
    }

    #[test]
    fn half_of_two_per_class() {
        let (train, test) = stratified_split(&two_class(2, 2), 0.5, 7).unwrap();
        assert_eq!(train.len(), 2);
        assert_eq!(test.len(), 2);
        let classes: Vec<usize> = test.class_counts().unwrap().iter().map(|c| c.1).collect();
        assert_eq!(classes, vec![1, 1]);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let ds = two_class(40, 60);
        let a = stratified_split(&ds, 0.3, 11).unwrap();
        let b = stratified_split(&ds, 0.3, 11).unwrap();
        assert_eq!(a, b);
        let c = stratified_split(&ds, 0.3, 12).unwrap();
        assert_ne!(a.1.row_ids, c.1.row_ids);
    }

    #[test]
    fn error_cases() {
        let ds = two_class(3, 3);
        assert!(matches!(stratified_split(&ds, 0.0, 1), Err(DataError::InvalidFraction(_))));
        assert!(matches!(stratified_split(&ds, 1.0, 1), Err(DataError::InvalidFraction(_))));
        assert!(matches!(stratified_split(&two_class(4, 0), 0.5, 1), Err(DataError::DegenerateClass(1))));
        let mut unlabeled = ds.clone();
        unlabeled.target = None;
        assert!(matches!(stratified_split(&unlabeled, 0.5, 1), Err(DataError::Unlabeled)));
    }
}
