mod common;

use common::properties as suite;

#[test]
fn field_axioms() {
    suite::field_axioms();
}

#[test]
fn reduction_is_a_ring_homomorphism() {
    suite::reduction_is_a_ring_homomorphism();
}

#[test]
fn action_composes() {
    suite::action_composes();
}

#[test]
fn molien_matches_reynolds() {
    suite::molien_matches_reynolds();
}

#[test]
fn concatenation_inequality() {
    suite::concatenation_inequality();
}

#[test]
fn concatenation_equality_on_disjoint_blocks() {
    suite::concatenation_equality_on_disjoint_blocks();
}

#[test]
fn bound_ignores_block_order() {
    suite::bound_ignores_block_order();
}

#[test]
fn max_degree_closed_form_matches_scan() {
    suite::max_degree_closed_form_matches_scan();
}
