use proptest::prelude::*;
use rigiduality_cli::ast::*;
use rigiduality_cli::diag::Span;
use rigiduality_cli::parser::parse_session;

const RESERVED: &[&str] = &["QQ", "Fp", "omega", "invert", "assuming", "domain", "etale"];

fn name() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,4}".prop_filter("reserved word", |s| {
        !RESERVED.contains(&s.as_str())
            && !VERBS.contains(&s.as_str())
            && !DEFINERS.contains(&s.as_str())
    })
}

fn ident() -> impl Strategy<Value = Ident> {
    name().prop_map(|name| Ident {
        name,
        span: Span::default(),
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        "[0-9]{1,4}".prop_map(|digits| Expr::Num {
            digits,
            span: Span::default()
        }),
        ident().prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div)
        ];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg {
                arg: Box::new(e),
                span: Span::default()
            }),
            (inner.clone(), 0u32..40).prop_map(|(e, exp)| Expr::Pow {
                base: Box::new(e),
                exp,
                span: Span::default()
            }),
            (op, inner.clone(), inner).prop_map(|(op, l, r)| Expr::Bin {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r),
                span: Span::default()
            }),
        ]
    })
}

fn exprs(max: usize) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(expr(), 0..=max)
}

fn form() -> impl Strategy<Value = FormRef> {
    (ident(), 0u64..5, expr()).prop_map(|(tower, level, coeff)| FormRef {
        tower,
        level,
        coeff,
        span: Span::default(),
    })
}

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        ident().prop_map(|ring| Command::Groebner { ring }),
        (ident(), expr()).prop_map(|(ring, expr)| Command::Nf { ring, expr }),
        ident().prop_map(|ring| Command::Dim { ring }),
        ident().prop_map(|target| Command::Hilbert { target }),
        (ident(), prop::option::of(0u64..9))
            .prop_map(|(module, length)| Command::Res { module, length }),
        (0u64..5, ident(), ident()).prop_map(|(degree, m, n)| Command::Ext { degree, m, n }),
        ident().prop_map(|module| Command::Betti { module }),
        (ident(), ident()).prop_map(|(m, n)| Command::IsoProbe { m, n }),
        ident().prop_map(|ring| Command::Omega { ring }),
        ident().prop_map(|ring| Command::Rigidity { ring }),
        ident().prop_map(|module| Command::Dualize { module }),
        (ident(), ident()).prop_map(|(hom, module)| Command::Shriek { hom, module }),
        (ident(), expr()).prop_map(|(hom, expr)| Command::Trace { hom, expr }),
        ident().prop_map(|hom| Command::EtalePairing { hom }),
        (form(), 0u64..5).prop_map(|(form, to)| Command::Pullback { form, to }),
        (form(), prop::option::of(0u64..5)).prop_map(|(form, to)| Command::TraceForm { form, to }),
        form().prop_map(|form| Command::QForm { form }),
        prop::collection::vec(prop_oneof![name(), "[0-9]{1,2}"], 0..3)
            .prop_map(|filter| Command::Check { filter }),
    ]
}

fn module_source() -> impl Strategy<Value = ModuleSource> {
    prop_oneof![
        prop::option::of(0u64..5).prop_map(|rank| ModuleSource::Free { rank }),
        exprs(3).prop_map(|ideal| ModuleSource::Cyclic { ideal }),
        (1u64..4, prop::collection::vec(exprs(3), 0..3))
            .prop_map(|(rank, rows)| ModuleSource::Presented { rank, rows }),
        Just(ModuleSource::Omega),
    ]
}

fn stmt_kind() -> impl Strategy<Value = StmtKind> {
    let field = prop_oneof![
        Just(FieldSpec::Rational),
        (2u64..100_000).prop_map(FieldSpec::Prime)
    ];
    let step = prop_oneof![
        ident().prop_map(TowerStep::Hom),
        expr().prop_map(TowerStep::Invert)
    ];
    prop_oneof![
        (
            ident(),
            field,
            prop::collection::vec(ident(), 0..4),
            prop::option::of(exprs(3))
        )
            .prop_map(|(name, field, vars, relations)| StmtKind::Ring {
                name,
                field,
                vars,
                relations
            }),
        (ident(), ident(), expr()).prop_map(|(name, base, element)| StmtKind::Localize {
            name,
            base,
            element
        }),
        (ident(), ident(), ident(), exprs(3)).prop_map(|(name, source, target, images)| {
            StmtKind::Hom {
                name,
                source,
                target,
                images,
            }
        }),
        (ident(), ident(), module_source()).prop_map(|(name, ring, source)| StmtKind::Module {
            name,
            ring,
            source
        }),
        (ident(), prop::collection::vec(step, 1..4), any::<bool>()).prop_map(
            |(name, steps, assume_domain)| StmtKind::Tower {
                name,
                steps,
                assume_domain
            }
        ),
        command().prop_map(StmtKind::Command),
    ]
}

fn session() -> impl Strategy<Value = Session> {
    prop::collection::vec(
        stmt_kind().prop_map(|kind| Stmt {
            kind,
            span: Span::default(),
        }),
        0..6,
    )
    .prop_map(|stmts| Session { stmts })
}

fn reparse(text: &str) -> Session {
    let (mut s, d) = parse_session(text);
    assert!(d.is_empty(), "{text}\n{d:?}");
    s.erase_spans();
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printing_then_parsing_is_the_identity(s in session()) {
        let text = s.to_string();
        prop_assert_eq!(reparse(&text), s);
    }

    #[test]
    fn spans_cover_their_source_text(s in session()) {
        let text = s.to_string();
        let (parsed, _) = parse_session(&text);
        for stmt in &parsed.stmts {
            let slice = &text[stmt.span.start..stmt.span.end];
            prop_assert_eq!(slice, stmt.to_string());
            if let Some(id) = stmt.defines() {
                prop_assert_eq!(&text[id.span.start..id.span.end], id.name.as_str());
            }
        }
    }
}

#[test]
fn shipped_sessions_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/sessions");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        let first = reparse(&src);
        assert!(!first.stmts.is_empty(), "{}", path.display());
        assert_eq!(reparse(&first.to_string()), first, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 3);
}
