use gfwigner::{CoordinateMap, Field, FieldElement, FieldSpec, NTuple, PhaseSpace, Striation};
use proptest::prelude::*;

/// Carry-less product reduced by the field polynomial, bit by bit.
fn slow_mul(a: u32, b: u32, poly: u32, n: u32) -> u32 {
    let mut acc: u64 = 0;
    for i in 0..n {
        if b >> i & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    for bit in (n..2 * n).rev() {
        if acc >> bit & 1 == 1 {
            acc ^= (poly as u64) << (bit - n);
        }
    }
    acc as u32
}

fn spec_and_elems() -> impl Strategy<Value = (u32, u32, u32, u32)> {
    (1u32..=12).prop_flat_map(|n| {
        let d = 1u32 << n;
        (Just(n), 0..d, 0..d, 0..d)
    })
}

proptest! {
    #[test]
    fn field_matches_polynomial_oracle((n, a, b, c) in spec_and_elems()) {
        let spec = FieldSpec::default_for(n).unwrap();
        let (fa, fb, fc) = (FieldElement(a), FieldElement(b), FieldElement(c));
        prop_assert_eq!(spec.mul(fa, fb).0, slow_mul(a, b, spec.poly(), n));
        prop_assert_eq!(spec.mul(fa, spec.mul(fb, fc)), spec.mul(spec.mul(fa, fb), fc));
        prop_assert_eq!(spec.mul(fa, spec.add(fb, fc)), spec.add(spec.mul(fa, fb), spec.mul(fa, fc)));
        if a != 0 {
            prop_assert_eq!(spec.mul(fa, spec.inv(fa).unwrap()), FieldElement::ONE);
        }
        let field = Field::new(spec);
        prop_assert_eq!(field.mul(fa, fb), spec.mul(fa, fb));
    }

    #[test]
    fn coordinate_map_is_additive((n, a, b, _c) in spec_and_elems()) {
        let field = Field::new(FieldSpec::default_for(n).unwrap());
        let cmap = CoordinateMap::standard(&field);
        let (fa, fb) = (FieldElement(a), FieldElement(b));
        let sum = FieldElement(a ^ b);
        prop_assert_eq!(cmap.q_tuple(sum), cmap.q_tuple(fa) ^ cmap.q_tuple(fb));
        prop_assert_eq!(cmap.p_tuple(sum), cmap.p_tuple(fa) ^ cmap.p_tuple(fb));
        prop_assert_eq!(cmap.q_element(cmap.q_tuple(fa)), fa);
        prop_assert_eq!(cmap.p_element(cmap.p_tuple(fb)), fb);
    }

    #[test]
    fn tuple_text_roundtrip(n in 1u32..=12, bits in any::<u32>()) {
        let t = NTuple(bits & ((1 << n) - 1));
        let s = t.display(n).to_string();
        prop_assert_eq!(s.len(), n as usize);
        prop_assert_eq!(NTuple::parse(&s, n).unwrap(), t);
    }

    #[test]
    fn two_points_one_line(n in 1u32..=8, seed in any::<u64>()) {
        let space = PhaseSpace::standard(n).unwrap();
        let d = space.d();
        let a = space.point_at(seed as usize % d, (seed >> 16) as usize % d);
        let b = space.point_at((seed >> 32) as usize % d, (seed >> 48) as usize % d);
        prop_assume!(a != b);
        let l = space.line_through(a, b).unwrap();
        prop_assert!(space.contains(&l, a) && space.contains(&l, b));
        let common = space
            .striations()
            .filter(|&s| space.line_in_striation_through(s, a) == space.line_in_striation_through(s, b))
            .count();
        prop_assert_eq!(common, 1);
    }
}

#[test]
fn n2_coordinates_follow_power_order() {
    let space = PhaseSpace::standard(2).unwrap();
    let f = space.field();
    let tuples: Vec<String> = (1..4)
        .map(|i| space.cmap().q_tuple(f.element_at(i)).display(2).to_string())
        .collect();
    assert_eq!(tuples, ["10", "01", "11"]);
    assert_eq!(space.striations().filter(|s| matches!(s, Striation::Oblique(_))).count(), 3);
}
