mod common;

use common::{gen_term, random_type, sig};
use prodcheck::{parse, pretty, typecheck};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pretty_then_parse_is_identity(seed in any::<u64>()) {
        let sig = sig();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = random_type(&mut rng, 3);
        let cod = random_type(&mut rng, 3);
        let t = gen_term(&mut rng, &sig, &dom, &cod, 4);
        prop_assert_eq!(typecheck(&t, &sig).unwrap(), (dom, cod));
        let text = pretty(&t);
        let back = parse(&text, &sig).unwrap();
        prop_assert_eq!(&back, &t, "text {}", text);
        prop_assert_eq!(pretty(&back), text);
    }
}

#[test]
fn hand_written_terms_survive_round_trip() {
    let sig = sig();
    for text in [
        "wedge * (wedge @ id[V]) - 2 . wedge * (id[V] @ wedge)",
        "cup * braid[V,V] * cap",
        "-1/2 . k * braid[V;W] + braidinv[V;W] * braid[V;W]",
        "zero[;] + id[] @ cup * cap",
    ] {
        let t = parse(text, &sig).unwrap();
        assert_eq!(parse(&pretty(&t), &sig).unwrap(), t, "{text}");
    }
}
