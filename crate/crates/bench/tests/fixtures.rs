use motorsig_bench::{channel, eeg, recording};

#[test]
fn fixtures_have_expected_shape() {
    let (ts, truth) = recording(3, 4);
    assert_eq!(ts.n_trials(), 3);
    assert_eq!(ts.n_channels(), 5);
    assert_eq!(eeg(&ts).n_channels(), 4);
    assert_eq!(channel(&ts, 0).len(), 3);
    assert_eq!(truth.onset_times.len(), 3);
}
