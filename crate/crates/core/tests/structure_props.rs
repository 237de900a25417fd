use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use segrekit::cli::{builtin, parse_input, parse_input_with, serialize, serialize_manifold, serialize_map, Document};
use segrekit::corpus;
use segrekit::fps::{vars, Gq, Series};
use segrekit::manifold::{GenericManifold, LinearChange};
use segrekit::segre::{build_fields, flow, random_point, sigma, upsilon_bar_flow_closed, Field};

const ORDER: u32 = 6;

fn same(a: &[Series], b: &[Series]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let o = x.order().min(y.order());
            x.truncate(o) == y.truncate(o)
        })
}

fn manifold(pick: usize) -> GenericManifold {
    match pick {
        0 => corpus::quadric(ORDER).unwrap(),
        1 => corpus::bidegree(ORDER).unwrap(),
        _ => corpus::quartic(ORDER).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flows_form_one_parameter_groups(pick in 0usize..3, seed in any::<u64>()) {
        let mf = manifold(pick);
        let fields = build_fields(&mf).unwrap();
        let (m, d) = (mf.m, mf.d);
        let mut names: Vec<String> = vec!["x".into()];
        names.extend((0..m).map(|j| format!("s{j}")));
        names.extend((0..m).map(|j| format!("t{j}")));
        names.extend((0..d).map(|j| format!("u{j}")));
        let ext = vars(&names);
        let v = |i: usize| Series::var_idx(&ext, i, ORDER);
        let s: Vec<Series> = (0..m).map(|j| v(1 + j)).collect();
        let t: Vec<Series> = (0..m).map(|j| v(1 + m + j)).collect();
        let st: Vec<Series> = s.iter().zip(&t).map(|(a, b)| a + b).collect();
        let u: Vec<Series> = (0..d).map(|j| v(1 + 2 * m + j)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: Vec<Series> = random_point(&mf, &vars(&["x"]), ORDER, &mut rng).unwrap().iter().map(|c| c.embed(&ext).unwrap()).collect();
        for f in [Field::L, Field::Lbar] {
            let two = flow(&mf, &fields, f, &t, &flow(&mf, &fields, f, &s, &p).unwrap()).unwrap();
            prop_assert!(same(&two, &flow(&mf, &fields, f, &st, &p).unwrap()));
            let neg: Vec<Series> = s.iter().map(|c| -c).collect();
            let back = flow(&mf, &fields, f, &neg, &flow(&mf, &fields, f, &s, &p).unwrap()).unwrap();
            prop_assert!(same(&back, &p));
        }
        let lu = flow(&mf, &fields, Field::L, &s, &upsilon_bar_flow_closed(&mf, &u, &p).unwrap()).unwrap();
        let ul = upsilon_bar_flow_closed(&mf, &u, &flow(&mf, &fields, Field::L, &s, &p).unwrap()).unwrap();
        prop_assert!(same(&lu, &ul));
        prop_assert!(same(&sigma(&sigma(&p)), &p));
    }

    #[test]
    fn random_manifolds_round_trip(seed in any::<u64>(), m in 1usize..=2, d in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mf = corpus::random_graph_manifold(&mut rng, m, d, 3, 8, ORDER).unwrap();
        let doc = parse_input(&serialize_manifold(&mf)).unwrap();
        prop_assert_eq!(doc.manifold("random_graph").unwrap().as_ref(), &mf);
    }

    #[test]
    fn changed_maps_round_trip(a in (-3i64..=3, -3i64..=3), b in prop_oneof![Just(-2i64), Just(1), Just(3)]) {
        prop_assume!(a != (0, 0));
        let h = corpus::id_bidegree(ORDER).unwrap();
        let (m, d) = (h.source.m, h.source.d);
        let diag = |n: usize, c: Gq| -> Vec<Vec<Gq>> { (0..n).map(|i| (0..n).map(|j| if i == j { c.clone() } else { Gq::zero() }).collect()).collect() };
        let c = LinearChange::new(diag(m, Gq::from_ints(a.0, a.1)), diag(d, Gq::int(b))).unwrap();
        let moved = LinearChange::map(&h, &c, &c).unwrap();
        let mut known = Document::default();
        known.manifolds.insert(moved.source.name.clone(), moved.source.clone());
        known.manifolds.insert(moved.target.name.clone(), moved.target.clone());
        let doc = parse_input_with(&serialize_map(&moved), Some(ORDER), &known).unwrap();
        prop_assert_eq!(doc.map(&moved.name).unwrap(), &moved);
    }
}

#[test]
fn builtin_corpus_round_trips() {
    let doc = builtin(ORDER).unwrap();
    let text = serialize(&doc);
    let back = parse_input(&text).unwrap();
    assert_eq!(serialize(&back), text);
    for (name, h) in &doc.maps {
        assert_eq!(back.map(name).unwrap(), h, "{name}");
    }
}

#[test]
fn shipped_data_matches_builtins() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("sgk") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_input(&text).unwrap();
        let order = doc.manifolds.values().map(|m| m.order).next().unwrap();
        let reference = builtin(order).unwrap();
        for (name, mf) in &doc.manifolds {
            assert_eq!(reference.manifold(name).unwrap(), mf, "{}: {name}", path.display());
        }
        for (name, h) in &doc.maps {
            assert_eq!(reference.map(name).unwrap(), h, "{}: {name}", path.display());
        }
        seen += 1;
    }
    assert!(seen >= 7);
}
