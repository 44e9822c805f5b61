//! Transcript files written and read back for many protocol runs.

use pinkey_cli::transcript;
use pinkey_core::graph::TieBreak;
use pinkey_core::protocols::{self, GroupKeyResult};
use pinkey_core::{NetworkSpec, PairwiseKeyStore};

fn networks() -> Vec<NetworkSpec> {
    let mut out = vec![
        NetworkSpec::from_budgets(3, &[(0, 1, 5), (0, 2, 4), (1, 2, 3)]).unwrap(),
        NetworkSpec::complete(4, 2).unwrap(),
        NetworkSpec::complete(5, 1).unwrap(),
        NetworkSpec::from_budgets(4, &[(0, 1, 3), (1, 2, 2), (2, 3, 4), (0, 3, 1)]).unwrap(),
    ];
    for m in 2..=6 {
        let edges: Vec<(usize, usize, u64)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j, ((i * 7 + j * 3) % 5) as u64)))
            .collect();
        out.push(NetworkSpec::from_budgets(m, &edges).unwrap());
    }
    out
}

fn runs(spec: &NetworkSpec, seed: u64) -> Vec<(GroupKeyResult, PairwiseKeyStore)> {
    let mut out = Vec::new();
    for tb in [TieBreak::LexKruskal, TieBreak::DegreeMin] {
        let mut store = PairwiseKeyStore::generate(spec, seed);
        out.push((protocols::run_group_key(&mut store, spec, tb).unwrap(), store));
    }
    let mut store = PairwiseKeyStore::generate(spec, seed);
    out.push((protocols::run_subgroup(&mut store, spec, 0, spec.m() - 1, seed).unwrap(), store));
    if spec.non_star_pair().is_none() {
        let mut store = PairwiseKeyStore::generate(spec, seed);
        out.push((protocols::run_broadcast(&mut store, spec).unwrap(), store));
    }
    out
}

#[test]
fn written_transcripts_parse_back_exactly() {
    let mut checked = 0;
    for (n, spec) in networks().iter().enumerate() {
        for (result, store) in runs(spec, n as u64) {
            let text = transcript::write(&result.transcript, store.basis());
            let saved = transcript::parse(&text).unwrap();
            let fresh = result.transcript.messages();
            assert_eq!(saved.len(), fresh.len());
            for (s, f) in saved.iter().zip(fresh) {
                assert_eq!((s.round, s.sender, s.receiver), (f.round, f.sender, f.receiver));
                assert_eq!(s.payload, f.payload);
                assert_eq!(s.resolve(store.basis()).unwrap(), f.forms);
            }
            checked += 1;
        }
    }
    assert!(checked >= 27);
}

#[test]
fn every_line_has_one_form_per_bit() {
    let spec = NetworkSpec::from_budgets(3, &[(0, 1, 5), (0, 2, 4), (1, 2, 3)]).unwrap();
    let mut store = PairwiseKeyStore::generate(&spec, 7);
    let result = protocols::run_subgroup(&mut store, &spec, 0, 2, 7).unwrap();
    let text = transcript::write(&result.transcript, store.basis());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(transcript::HEADER));
    for line in lines {
        let fields: Vec<&str> = line.split(' ').collect();
        let nbits: usize = fields[3].parse().unwrap();
        assert_eq!(fields.len(), 5 + nbits, "{line}");
        assert_eq!(fields[4].len(), nbits.div_ceil(4));
        // each hop bit is a key bit of s masked by one pad bit
        for form in &fields[5..] {
            let labels: Vec<&str> = form.split('^').collect();
            assert_eq!(labels.len(), 2, "{form}");
            assert!(labels.iter().any(|l| l.starts_with("r0.")), "{form}");
        }
    }
}
