use wcspflow::benchmarks::{
    generate, match_code, oracle_solve, oracle_solve_capped, packing_automaton, parse_instance,
    run_suite, write_instance, BenchError, BenchmarkSpec, Family, OracleOutcome, AM, OFF,
};
use wcspflow::global::{GlobalKind, ViolationMeasure};
use wcspflow::{
    solve, Consistency, Cost, CostFunction, SearchConfig, SearchStatus, TableCostFunction, Wcsp,
};

fn tiny(f: Family, seed: u64) -> Wcsp {
    generate(&BenchmarkSpec::new(f, f.tiny_size(), seed)).unwrap()
}

fn count_globals(w: &Wcsp, name: &str) -> usize {
    w.functions()
        .iter()
        .filter(|f| f.as_global().is_some_and(|g| g.kind().name() == name))
        .count()
}

#[test]
fn all_interval_shape() {
    let w = generate(&BenchmarkSpec::new(Family::AllInterval, vec![8], 3)).unwrap();
    assert_eq!(w.num_vars(), 15);
    assert_eq!(count_globals(&w, "alldifferent"), 2);
    let tables: Vec<&TableCostFunction> = w
        .functions()
        .iter()
        .filter_map(CostFunction::as_table)
        .collect();
    assert_eq!(tables.len(), 7);
    assert!(tables.iter().all(|t| t.arity() == 3));
    for x in 0..15 {
        assert!(w.var(x).unary_costs().iter().all(|c| c.0 <= 9));
    }
    // |s_i - s_{i+1}| = d_i, top otherwise
    let mut vals = vec![0i64; 15];
    vals[..8].copy_from_slice(&[0, 7, 1, 6, 2, 5, 3, 4]);
    vals[8..].copy_from_slice(&[7, 6, 5, 4, 3, 2, 1]);
    assert!(!w.evaluate_tuple(&vals).unwrap().is_top(w.top()));
    vals[14] = 2;
    assert!(w.evaluate_tuple(&vals).unwrap().is_top(w.top()));
}

#[test]
fn decomposition_shape() {
    let w = generate(&BenchmarkSpec::new(
        Family::AlldiffBinaryDecomposition,
        vec![5],
        0,
    ))
    .unwrap();
    assert_eq!(w.num_vars(), 9);
    assert_eq!(w.functions().iter().filter(|f| f.is_global()).count(), 0);
    assert_eq!(w.functions().len(), 10 + 6 + 4);
    let global = generate(
        &BenchmarkSpec::new(Family::AllInterval, vec![5], 0).with_measure(ViolationMeasure::Dec),
    )
    .unwrap();
    for vals in [
        [0, 1, 2, 3, 4, 1, 1, 1, 1],
        [2, 2, 0, 4, 1, 0, 2, 4, 3],
        [4, 0, 3, 1, 2, 4, 3, 2, 1],
    ] {
        assert_eq!(
            w.evaluate_tuple(&vals).unwrap(),
            global.evaluate_tuple(&vals).unwrap()
        );
    }
}

#[test]
fn fair_schedule_shape() {
    let w = generate(&BenchmarkSpec::new(Family::FairSchedule, vec![4, 5, 6], 1)).unwrap();
    assert_eq!(w.num_vars(), 30);
    assert_eq!(count_globals(&w, "same"), 15);
}

#[test]
fn sliding_shape() {
    let n = 12;
    let w = generate(&BenchmarkSpec::new(Family::SlidingStretch, vec![n], 1)).unwrap();
    assert_eq!(w.num_vars(), n);
    assert_eq!(count_globals(&w, "stretch"), 5);
    for (i, f) in w.functions().iter().enumerate() {
        assert_eq!(f.scope(), (i..n - 4 + i).collect::<Vec<_>>());
    }
}

#[test]
fn latin_and_round_robin_shapes() {
    let w = generate(&BenchmarkSpec::new(Family::LatinSquareGcc, vec![4], 1)).unwrap();
    assert_eq!((w.num_vars(), count_globals(&w, "gcc")), (16, 8));
    let w = generate(&BenchmarkSpec::new(Family::RoundRobin, vec![4, 3, 2], 1)).unwrap();
    assert_eq!(w.num_vars(), 18);
    assert_eq!(count_globals(&w, "gcc"), 2 + 3 + 1);
    let link = w.function(0).as_table().unwrap();
    assert_eq!(link.scope(), &[0, 1, 2]);
    let m = match_code(1, 3, 4);
    let pos = |x: usize, v: i64| w.var(x).position_of(v).unwrap();
    assert_eq!(link.get(&[pos(0, 1), pos(1, 3), pos(2, m)]), Cost::ZERO);
    assert_eq!(link.get(&[pos(0, 3), pos(1, 1), pos(2, m)]), Cost::ZERO);
    assert!(link.get(&[pos(0, 1), pos(1, 1), pos(2, m)]).is_top(w.top()));
    assert!(link.get(&[pos(0, 0), pos(1, 3), pos(2, m)]).is_top(w.top()));
}

#[test]
fn nurse_packing_automaton_language() {
    let a = packing_automaton();
    let runs = |word: &[i64], v: i64| {
        let mut count = 0;
        for (i, &c) in word.iter().enumerate() {
            if c == v && (i == 0 || word[i - 1] != v) {
                count += 1;
            }
        }
        count
    };
    for len in 0..=6u32 {
        for code in 0..4usize.pow(len) {
            let word: Vec<i64> = (0..len)
                .map(|i| ((code / 4usize.pow(i)) % 4) as i64)
                .collect();
            assert_eq!(
                a.accepts(&word),
                runs(&word, AM) <= 1 && runs(&word, OFF) <= 1,
                "{word:?}"
            );
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for f in Family::ALL {
        let a = write_instance(&tiny(f, 9));
        let b = write_instance(&tiny(f, 9));
        assert_eq!(a, b);
        assert_ne!(a, write_instance(&tiny(f, 10)), "{f}");
        assert!(a.contains("\nseed 9\n"));
    }
}

#[test]
fn files_round_trip() {
    for f in Family::ALL {
        for size in [f.tiny_size(), f.default_size()] {
            let w = generate(&BenchmarkSpec::new(f, size, 4)).unwrap();
            let text = write_instance(&w);
            let back = parse_instance(&text).unwrap();
            assert_eq!(write_instance(&back), text, "{f}");
            assert_eq!(back.num_vars(), w.num_vars());
            assert_eq!(back.functions().len(), w.functions().len());
            for (a, b) in w.functions().iter().zip(back.functions()) {
                assert_eq!(a.scope(), b.scope());
                match (a, b) {
                    (CostFunction::Table(x), CostFunction::Table(y)) => assert_eq!(x, y),
                    (CostFunction::Global(x), CostFunction::Global(y)) => {
                        assert_eq!(x.kind(), y.kind())
                    }
                    _ => panic!("function kind changed"),
                }
            }
            let values: Vec<i64> = (0..w.num_vars())
                .map(|x| w.var(x).values()[x % w.var(x).values().len()])
                .collect();
            assert_eq!(
                w.evaluate_tuple(&values).unwrap(),
                back.evaluate_tuple(&values).unwrap()
            );
        }
    }
}

#[test]
fn all_measures_round_trip() {
    let cases = [
        (Family::AllInterval, ViolationMeasure::Dec),
        (Family::LatinSquare, ViolationMeasure::Dec),
        (Family::RoundRobin, ViolationMeasure::Val),
        (Family::LatinSquareGcc, ViolationMeasure::Var),
        (Family::NurseRoster, ViolationMeasure::Edit),
        (Family::SlidingStretch, ViolationMeasure::Edit),
    ];
    for (f, m) in cases {
        let w = generate(&BenchmarkSpec::new(f, f.tiny_size(), 2).with_measure(m)).unwrap();
        let text = write_instance(&w);
        assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
        let regular = w.functions().iter().filter_map(|f| f.as_global()).any(|g| {
            matches!(
                g.kind(),
                GlobalKind::Regular { .. } | GlobalKind::Stretch { .. }
            )
        });
        assert_eq!(
            regular,
            matches!(f, Family::NurseRoster | Family::SlidingStretch)
        );
    }
}

#[test]
fn invalid_specs_are_refused() {
    let bad = [
        BenchmarkSpec::new(Family::AllInterval, vec![1], 0),
        BenchmarkSpec::new(Family::RoundRobin, vec![4, 3], 0),
        BenchmarkSpec::new(Family::LatinSquare, vec![0], 0),
        BenchmarkSpec::new(Family::SlidingStretch, vec![4], 0),
        BenchmarkSpec::new(Family::FairSchedule, vec![4, 5, 1], 0),
        BenchmarkSpec::new(Family::AllInterval, vec![5], 0).with_measure(ViolationMeasure::Edit),
    ];
    for spec in bad {
        assert!(
            matches!(generate(&spec), Err(BenchError::InvalidSpec(_))),
            "{spec:?}"
        );
    }
}

#[test]
fn malformed_files_are_refused() {
    for text in [
        "",
        "wcsp a\nvar x 0 1\n",
        "wcsp a\ntop 5\nvar x 0 1\ntable 0 default 0\ntuple 7 1\nend\n",
        "wcsp a\ntop 5\nvar x 0 1\nglobal alldifferent var 0 3\n",
        "wcsp a\ntop 5\nvar x 0 1\nfoo\n",
        "wcsp a\ntop 5\nvar x 0 1\nglobal regular var 0\nstates 1\n",
    ] {
        assert!(parse_instance(text).is_err(), "{text:?}");
    }
}

#[test]
fn oracle_basics() {
    let mut w = Wcsp::new("one", Cost(50));
    w.add_variable("x", vec![4, 5, 6]).unwrap();
    w.set_unary(0, vec![Cost(7), Cost(2), Cost(2)]).unwrap();
    assert_eq!(
        oracle_solve(&w).unwrap(),
        OracleOutcome::Optimal(Cost(2), vec![5])
    );

    w.add_variable("y", vec![0, 1]).unwrap();
    w.add_table(TableCostFunction::new(vec![0, 1], vec![3, 2], Cost(50)))
        .unwrap();
    assert_eq!(oracle_solve(&w).unwrap(), OracleOutcome::Infeasible);

    assert!(matches!(
        oracle_solve_capped(&w, 5.0),
        Err(BenchError::TooLarge { .. })
    ));
    let big = generate(&BenchmarkSpec::new(Family::AllInterval, vec![8], 0)).unwrap();
    assert!(oracle_solve(&big).is_err());
}

#[test]
fn search_matches_oracle_on_tiny_instances() {
    for f in Family::ALL {
        let w = tiny(f, 0);
        let OracleOutcome::Optimal(best, _) = oracle_solve(&w).unwrap() else {
            panic!("{f} tiny instance infeasible");
        };
        for level in [Consistency::Gac, Consistency::WeakEdgac] {
            let r = solve(&w, &SearchConfig::new(level));
            assert_eq!(r.status, SearchStatus::Optimal);
            assert_eq!(r.cost, Some(best), "{f} {level}");
            assert_eq!(w.evaluate_tuple(&r.assignment.unwrap()).unwrap(), best);
        }
    }
}

#[test]
fn suite_reports_rows_and_agreement() {
    let specs = vec![BenchmarkSpec::new(Family::RoundRobin, vec![3, 1, 2], 5)];
    let levels = [Consistency::Gac, Consistency::Fdgac];
    let report = run_suite(&specs, &levels, &SearchConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert_eq!(report.rows[0].optimum, report.rows[1].optimum);
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,n,level,seed,optimum,nodes,ms"));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("round-robin,3x1x2,gac,5,"));
    assert_eq!(report.summaries().len(), 2);
    assert!(report.to_table().contains("fdgac"));
}
