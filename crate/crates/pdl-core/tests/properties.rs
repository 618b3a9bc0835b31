//! Property tests over randomly generated formulas, models, and tile sets.

use proptest::prelude::*;

use pdl_core::gen::{random_prog, random_prop};
use pdl_core::semantics::{random_model, truth_set, validate_model};
use pdl_core::surface::files::{encode_model, encode_tileset, parse_model, parse_tileset};
use pdl_core::surface::{parse_prop, print_prog, print_prop, SourceText};
use pdl_core::tiling::{search_tiling, verify_tiling, Shape, TileSet, Tiling, TilingVerdict};

use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

fn random_tileset(seed: u64) -> TileSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=4usize);
    let tiles: Vec<String> = (0..k).map(|i| format!("T{i}")).collect();
    let mut pick = |density: f64| {
        let mut set = std::collections::BTreeSet::new();
        for a in 0..k {
            for b in 0..k {
                if rng.gen_bool(density) {
                    set.insert((tiles[a].clone(), tiles[b].clone()));
                }
            }
        }
        set
    };
    let h = pick(0.55);
    let v = pick(0.55);
    let neon = tiles
        .iter()
        .filter(|_| rng.gen_bool(0.3))
        .cloned()
        .collect();
    TileSet { start: tiles[0].clone(), tiles, h, v, neon }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_propositions_reparse_identically(seed in any::<u64>(), depth in 0usize..7) {
        let f = random_prop(seed, depth);
        let text = print_prop(&f);
        let back = parse_prop(&SourceText::inline(&text))
            .unwrap_or_else(|e| panic!("reparse of {text:?}: {e}"));
        prop_assert_eq!(back, f);
    }

    #[test]
    fn printing_is_stable_under_reparse(seed in any::<u64>(), depth in 0usize..7) {
        let f = random_prop(seed, depth);
        let text = print_prop(&f);
        let again = print_prop(&parse_prop(&SourceText::inline(&text)).unwrap());
        prop_assert_eq!(text, again);
    }

    #[test]
    fn program_text_is_reachable_through_a_modality(seed in any::<u64>(), depth in 0usize..6) {
        // programs have no standalone file form; box them to exercise the
        // program grammar through the proposition parser
        let p = random_prog(seed, depth);
        let f = pdl_core::Proposition::box_(p.clone(), pdl_core::Proposition::True);
        let text = print_prop(&f);
        let back = parse_prop(&SourceText::inline(&text)).unwrap();
        prop_assert_eq!(back, f);
        prop_assert!(text.contains(&print_prog(&p)));
    }

    #[test]
    fn destar_output_is_star_free_and_stable(seed in any::<u64>(), depth in 0usize..6) {
        let f = random_prop(seed, depth);
        if let Ok(rewritten) = f.destar() {
            prop_assert!(!rewritten.contains_star());
            prop_assert_eq!(rewritten.clone().destar().unwrap(), rewritten.clone());
            prop_assert_eq!(rewritten.atomic_names(), f.atomic_names());
        }
    }

    #[test]
    fn random_models_survive_the_file_format(seed in any::<u64>(), det in any::<bool>()) {
        let m = random_model(seed, 1 + (seed % 5) as usize, &["a", "b"], &["x", "y"], det, 0.4);
        prop_assert!(validate_model(&m).iter().all(|d| !d.is_error()));
        let text = encode_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(encode_model(&back), text);
    }

    #[test]
    fn found_tilings_verify_and_round_trip(seed in any::<u64>()) {
        let ts = random_tileset(seed);
        let encoded = encode_tileset(&ts);
        prop_assert_eq!(&parse_tileset(&encoded).unwrap(), &ts);
        for shape in [
            Shape::Rect { width: 3, height: 3 },
            Shape::Torus { width: 2, height: 2 },
            Shape::Torus { width: 3, height: 2 },
        ] {
            if let Some(t) = search_tiling(&ts, shape, None) {
                prop_assert_eq!(verify_tiling(&ts, &t).unwrap(), TilingVerdict::Valid);
            }
        }
    }

    #[test]
    fn torus_tilings_unroll_onto_rectangles(seed in any::<u64>()) {
        let ts = random_tileset(seed);
        let (n, m) = (2usize, 2usize);
        if let Some(t) = search_tiling(&ts, Shape::Torus { width: n, height: m }, None) {
            let (rw, rh) = (5usize, 4usize);
            let mut cells = Vec::new();
            for j in 0..rh {
                for i in 0..rw {
                    cells.push(t.get(i % n, j % m).to_string());
                }
            }
            let rect = Tiling::new(Shape::Rect { width: rw, height: rh }, cells).unwrap();
            prop_assert_eq!(verify_tiling(&ts, &rect).unwrap(), TilingVerdict::Valid);
        }
    }

    #[test]
    fn rect_tilings_restrict_to_subrectangles(seed in any::<u64>()) {
        let ts = random_tileset(seed);
        let big = search_tiling(&ts, Shape::Rect { width: 3, height: 3 }, None);
        if big.is_some() {
            for (w, h) in [(2, 3), (3, 2), (2, 2), (1, 1)] {
                prop_assert!(
                    search_tiling(&ts, Shape::Rect { width: w, height: h }, None).is_some(),
                    "sub-rectangle {w}x{h} must be tileable"
                );
            }
        }
    }

    #[test]
    fn evaluation_agrees_with_itself_across_print(seed in any::<u64>(), depth in 1usize..5) {
        // parse(print(f)) must not merely be structurally equal; it must
        // evaluate identically on a random model over the same atoms
        let f = random_prop(seed, depth);
        let m = random_model(seed ^ 0x9e37, 4, &["a", "b", "N", "E"], &["x", "y", "z", "neon"], false, 0.4);
        let back = parse_prop(&SourceText::inline(print_prop(&f))).unwrap();
        prop_assert_eq!(truth_set(&m, &f).unwrap(), truth_set(&m, &back).unwrap());
    }
}
