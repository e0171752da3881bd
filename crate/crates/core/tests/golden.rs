mod common;

#[test]
fn csv_output_matches_golden_files() {
    assert_eq!(common::golden::mismatches(), Vec::<String>::new());
}

#[test]
fn golden_headers_are_stable() {
    let first = |name: &str| std::fs::read_to_string(common::golden::path(name)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(
        first("equality"),
        "trial,seed,n,p,i,edges,delta,kappa_cap,kappa,kappa_lower_bound,outcome,both_infinite,error,wall_ms"
    );
    assert_eq!(first("chernoff"), "seed,m,p,epsilon,mu,draws,outside,frequency,bound,std_error,pass");
}
