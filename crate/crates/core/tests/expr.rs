use proptest::prelude::*;
use rostmot_core::arith::LocalInt;
use rostmot_core::expr::{parse, tokenize, Ast, AstKind, AtomKind, Pos, TokenKind};

const CORPUS: [&str; 50] = [
    "sigma",
    "rho",
    "pi",
    "E(0,2)",
    "H",
    "H^3",
    "7",
    "4/5",
    "t(sigma)",
    "t(sigma) + sigma",
    "sigma @ sigma^2",
    "sigma ^ 2 @ sigma",
    "deg(diag(pi))",
    "mult(pi)",
    "rational(tuple(pi))",
    "inv(tuple(pi))",
    "act(pi, 3)",
    "act(sigma @ rho, 0)",
    "-sigma",
    "--sigma",
    "-sigma^2",
    "(-sigma)^2",
    "-(sigma + rho)",
    "sigma - rho - pi",
    "sigma - (rho - pi)",
    "sigma + rho * pi",
    "(sigma + rho) * pi",
    "sigma * rho @ pi",
    "sigma * (rho @ pi)",
    "sigma @ rho @ pi",
    "sigma @ (rho @ pi)",
    "rho^@2",
    "rho^@2^3",
    "(rho^2)^@3",
    "(1/2 * rho) @ (1/2 * rho)",
    "((1/2 * rho) @ (1/2 * rho))^@9",
    "tuple(((1/4 * rho) @ (1/4 * rho))^@3)",
    "E(1,0) + 2*E(0,1)",
    "3 * E(2,2) - E(0,0) @ E(1,1)",
    "H^2 * H + 3/7 * H^0",
    "deg(H^2 * H)",
    "diag(t(pi)) - H^2",
    "  sigma\n  @\trho  ",
    "t(t(t(sigma)))",
    "(((sigma)))",
    "-(-(rho))^@1",
    "mult(sigma @ sigma^2) * 5",
    "act(pi, 2) + act(t(pi), 2)",
    "tuple(pi) * inv(tuple(pi)) - tuple(E(0,2) + E(2,0))",
    "1 - pi^2 @ -rho",
];

#[test]
fn corpus_round_trips_through_printer() {
    for src in CORPUS {
        let ast = parse(src).unwrap_or_else(|e| panic!("{src:?}: {e}"));
        let printed = ast.to_string();
        let again = parse(&printed).unwrap_or_else(|e| panic!("{printed:?}: {e}"));
        assert_eq!(again, ast, "{src:?} printed as {printed:?}");
        assert_eq!(again.to_string(), printed, "{src:?}");
    }
}

#[test]
fn corpus_tokens_reassemble_source() {
    for src in CORPUS {
        let tokens = tokenize(src).unwrap();
        let lexemes: String = tokens.iter().filter(|t| t.kind != TokenKind::Eof).map(|t| t.lexeme.as_str()).collect();
        let squeezed: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        assert_eq!(lexemes, squeezed);
    }
}

/// Pairs that must parse to the same tree: the left side leans on precedence
/// and associativity, the right side spells out the grouping.
const DISAMBIGUATION: [(&str, &str); 14] = [
    ("sigma^2 @ rho", "(sigma^2) @ rho"),
    ("sigma @ rho^2", "sigma @ (rho^2)"),
    ("-sigma^2", "-(sigma^2)"),
    ("-sigma^@2", "-(sigma^@2)"),
    ("-sigma * rho", "(-sigma) * rho"),
    ("-sigma @ rho", "(-sigma) @ rho"),
    ("sigma * rho @ pi", "(sigma * rho) @ pi"),
    ("sigma @ rho * pi", "(sigma @ rho) * pi"),
    ("sigma @ rho @ pi", "(sigma @ rho) @ pi"),
    ("sigma * rho * pi", "(sigma * rho) * pi"),
    ("sigma + rho @ pi", "sigma + (rho @ pi)"),
    ("sigma - rho + pi", "(sigma - rho) + pi"),
    ("sigma^2^3", "(sigma^2)^3"),
    ("rho^@2^3", "(rho^@2)^3"),
];

#[test]
fn precedence_vectors() {
    for (implicit, explicit) in DISAMBIGUATION {
        assert_eq!(parse(implicit).unwrap(), parse(explicit).unwrap(), "{implicit}");
    }
    let distinct = [("(sigma @ rho)^2", "sigma @ rho^2"), ("sigma @ (rho @ pi)", "sigma @ rho @ pi"), ("(-sigma)^2", "-sigma^2")];
    for (a, b) in distinct {
        assert_ne!(parse(a).unwrap(), parse(b).unwrap(), "{a} vs {b}");
    }
}

#[test]
fn syntax_error_positions() {
    let err = parse("E(1,").unwrap_err();
    assert_eq!(err.pos, Pos { line: 1, col: 5 });
    assert_eq!(err.expected, ["INT"]);
    let err = parse("sigma +\n  * rho").unwrap_err();
    assert_eq!(err.pos, Pos { line: 2, col: 3 });
    assert!(parse("sigma rho").is_err());
    assert!(parse("H^").is_err());
    assert!(parse("t(sigma").is_err());
}

fn node(kind: AstKind) -> Ast {
    Ast { kind, pos: Pos { line: 1, col: 1 } }
}

fn arb_ast() -> impl Strategy<Value = Ast> {
    let leaf = prop_oneof![
        Just(AtomKind::Sigma),
        Just(AtomKind::Rho),
        Just(AtomKind::Pi),
        (0u32..4, 0u32..4).prop_map(|(i, j)| AtomKind::Basis(i, j)),
        (0u32..5).prop_map(AtomKind::HPower),
        (0i64..20, 1i64..9).prop_map(|(a, b)| AtomKind::Literal(LocalInt::new(a, b).unwrap())),
    ]
    .prop_map(|a| node(AstKind::Atom(a)));
    leaf.prop_recursive(5, 40, 2, |inner| {
        let b = |x: Ast| Box::new(x);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(AstKind::Add(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(AstKind::Sub(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(AstKind::IntersectMul(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(AstKind::Compose(b(x), b(y)))),
            inner.clone().prop_map(move |x| node(AstKind::Neg(b(x)))),
            (inner.clone(), 0u64..6).prop_map(move |(x, k)| node(AstKind::IntersectPow(b(x), k))),
            (inner.clone(), 0u64..6).prop_map(move |(x, k)| node(AstKind::ComposePow(b(x), k))),
            inner.clone().prop_map(|x| node(AstKind::Call("t".into(), vec![x]))),
            (inner.clone(), 0i64..4).prop_map(|(x, k)| {
                let k = node(AstKind::Atom(AtomKind::Literal(LocalInt::from(k))));
                node(AstKind::Call("act".into(), vec![x, k]))
            }),
        ]
    })
}

proptest! {
    #[test]
    fn printed_trees_reparse_exactly(ast in arb_ast()) {
        let printed = ast.to_string();
        let back = parse(&printed).map_err(|e| TestCaseError::fail(format!("{printed:?}: {e}")))?;
        prop_assert_eq!(&back, &ast, "{}", printed);
    }
}
