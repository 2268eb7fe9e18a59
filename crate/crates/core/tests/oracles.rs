//! Oracle comparisons run as individual tests.

mod common;

macro_rules! oracle_tests {
    ($($name:ident),* $(,)?) => {
        $(#[test]
        fn $name() {
            common::oracle_suite::$name();
        })*
    };
}

oracle_tests!(
    mordell_h_matches_direct_quadrature,
    jacobi_theta_matches_naive_series_and_product,
    eta_matches_naive_product,
    appell_mu_matches_defining_series,
    correction_r_matches_defining_series,
    r_ml_matches_partial_sum_to_200,
    unary_r_matches_defining_series,
    period_integral_matches_ray_quadrature,
    indefinite_theta_matches_box_sum,
    seventh_order_vector_matches_eulerian_series,
    fifth_order_vector_matches_eulerian_series,
    inverse_euler_product_counts_partitions,
    majorant_lambda_agrees_with_sampled_minimum,
    qplus_is_positive_on_random_vectors,
);
