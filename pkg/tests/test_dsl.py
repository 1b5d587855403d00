"""Tests for the zoo language: lexer, parser, printer and evaluator."""

import pytest

from src.core.errors import (
    ArityMismatch,
    DslEvalError,
    DslSyntaxError,
    KeyNotFound,
    ServiceTypeError,
    UnboundIdentifier,
    UnknownBackendKeyword,
    UnpinnedDependency,
    UnterminatedString,
)
from src.core.service import Service
from src.dsl import (
    Acquire,
    BackendKind,
    BackendSpec,
    ComposeList,
    Deploy,
    GetItem,
    Let,
    TokenKind,
    Var,
    evaluate,
    parse,
    parse_expr,
    print_program,
    tokenize,
)


def test_tokenize_operators():
    """Test multi-character operators win over their prefixes."""
    kinds = [t.kind for t in tokenize('$ "a" $> b $@ ;; ; #')]

    assert kinds == [
        TokenKind.ACQUIRE,
        TokenKind.STRING,
        TokenKind.COMPOSE,
        TokenKind.IDENT,
        TokenKind.DEPLOY,
        TokenKind.TERMINATOR,
        TokenKind.SEMICOLON,
        TokenKind.GET,
        TokenKind.EOF,
    ]


def test_tokenize_tracks_lines_and_columns():
    """Test token positions are 1-based."""
    tokens = tokenize('let x =\n  $ "a";;')

    dollar = next(t for t in tokens if t.kind == TokenKind.ACQUIRE)
    assert (dollar.line, dollar.col) == (2, 3)


def test_tokenize_skips_comments():
    """Test comments may span lines."""
    tokens = tokenize("(* one\n two *) let")

    assert [t.kind for t in tokens] == [TokenKind.LET, TokenKind.EOF]


def test_string_escapes():
    """Test only quote and backslash escapes are accepted."""
    assert tokenize(r'"a\"b\\c"')[0].text == 'a"b\\c'

    with pytest.raises(DslSyntaxError):
        tokenize(r'"a\nb"')


def test_unterminated_string():
    """Test a string running into a newline."""
    with pytest.raises(UnterminatedString) as exc_info:
        tokenize('let x = $ "aa36e\n;;')

    assert exc_info.value.location == (1, 11)


def test_unterminated_comment():
    """Test a comment running to the end of input."""
    with pytest.raises(DslSyntaxError):
        tokenize("(* never closed")


def test_parse_get_item():
    """Test the basic acquire-and-get statement."""
    program = parse('let s_img = $ "aa36e" # "infer";;')

    assert program == [Let("s_img", GetItem(Acquire("aa36e"), "infer"))]


def test_parse_compose_chain_is_left_nested():
    """Test later links of a chain are singleton lists."""
    (statement,) = parse("let s = [s_seg; s_style] $> s_nst $> s_img $> s_trans;;")

    first = ComposeList((Var("s_seg"), Var("s_style")), Var("s_nst"))
    second = ComposeList((first,), Var("s_img"))
    assert statement.expr == ComposeList((second,), Var("s_trans"))


def test_parse_deploy():
    """Test deployment binds loosest."""
    (statement,) = parse('let p = s $@ CONTAINER "a/b:latest";;')

    assert statement.expr == Deploy(Var("s"), BackendSpec(kind=BackendKind.CONTAINER, target="a/b:latest"))


def test_parse_precedence():
    """Test '#' binds tighter than '$>', which binds tighter than '$@'."""
    expr = parse_expr('$ "a" # "f" $> $ "b" # "g" $@ SCRIPT "out"')

    assert isinstance(expr, Deploy)
    assert expr.expr == ComposeList((GetItem(Acquire("a"), "f"),), GetItem(Acquire("b"), "g"))


def test_bare_operand_is_singleton_sugar():
    """Test 'a $> b' parses exactly like '[a] $> b'."""
    assert parse_expr("a $> b") == parse_expr("[a] $> b")


def test_parse_records_operator_locations():
    """Test nodes carry the location of their operator."""
    (statement,) = parse("let s =\n  [a] $> b;;")

    assert statement.loc == (1, 1)
    assert statement.expr.loc == (2, 7)


@pytest.mark.parametrize(
    "source",
    [
        "let = a;;",
        "let a = b",
        "let a = [b; c];;",
        'let a = [b] # "f";;',
        "let a = b $> [c];;",
        "let a = ;;",
        'let a = b $@ CONTAINER "";;',
        "let a = b @ c;;",
    ],
)
def test_parse_rejects_malformed(source):
    """Test malformed programs are syntax errors with a location."""
    with pytest.raises(DslSyntaxError) as exc_info:
        parse(source)

    assert exc_info.value.location is not None


def test_unknown_backend_keyword():
    """Test only the three backend keywords are accepted."""
    with pytest.raises(UnknownBackendKeyword) as exc_info:
        parse('let p = s $@ LAMBDA "fn";;')

    assert exc_info.value.keyword == "LAMBDA"
    assert exc_info.value.location == (1, 14)


def test_print_parse_round_trip(usecase_source):
    """Test printing a parsed program and parsing it again gives the same tree."""
    sources = [
        usecase_source,
        'let a = ($ "x" # "f" $> g) $@ UNIKERNEL "out/u";;',
        'let b = [p; q $> r] $> (s $> t);;',
        'let c = $ "q\\"uote" # "n\\\\ame";;',
        "let d = ([a] $> b) $> c;;",
    ]
    for source in sources:
        program = parse(source)
        assert parse(print_program(program)) == program


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------


def test_eval_use_case_binds_uri(store, publisher, usecase_source):
    """Test the use-case program publishes and binds a container URI."""
    env = evaluate(parse(usecase_source), store, publisher)

    assert env["pub"] == "container://alice/image_service:latest"
    assert isinstance(env["s"], Service)
    assert env["s"].type_string == "png_img -> fr_text"
    assert env["s"].name == "s"


def test_eval_check_mode_writes_nothing(store, publisher, usecase_source):
    """Test check mode plans deployments without publishing."""
    env = evaluate(parse(usecase_source), store, publisher, check_only=True)

    assert env["pub"] == "container://alice/image_service:latest"
    assert not publisher.output_dir.exists()


def test_eval_is_deterministic(store, publisher, usecase_source):
    """Test the same program on the same store gives the same environment."""
    first = evaluate(parse(usecase_source), store, publisher)
    second = evaluate(parse(usecase_source), store, publisher)

    assert first == second


def test_eval_singleton_sugar(store):
    """Test 'a $> b' and '[a] $> b' evaluate alike."""
    prelude = 'let seg = $ "d79e9" # "seg";; let infer = $ "aa36e" # "infer";;'

    bare = evaluate(parse(prelude + "let s = seg $> infer;;"), store)["s"]
    listed = evaluate(parse(prelude + "let s = [seg] $> infer;;"), store)["s"]

    assert bare == listed


def test_eval_key_not_found(store):
    """Test '#' misses name the service and the package."""
    with pytest.raises(KeyNotFound) as exc_info:
        evaluate(parse('let s = $ "aa36e" # "nope";;'), store)

    assert exc_info.value.name == "nope"
    assert exc_info.value.package == "aa36e"
    assert exc_info.value.location == (1, 19)


def test_eval_unbound_identifier(store):
    """Test free identifiers are rejected."""
    with pytest.raises(UnboundIdentifier):
        evaluate(parse("let s = missing;;"), store)


def test_eval_type_error_has_location(store):
    """Test checker errors surface with the '$>' location."""
    source = 'let t = $ "7f32a" # "trans";;\nlet i = $ "aa36e" # "infer";;\nlet bad = [t] $> i;;'

    with pytest.raises(ServiceTypeError) as exc_info:
        evaluate(parse(source), store)

    assert exc_info.value.location == (3, 15)
    assert str(exc_info.value) == (
        "type mismatch at position 0: expected png_img, found fr_text at line 3, col 15"
    )


def test_eval_arity_error(store):
    """Test arity errors propagate from compose."""
    with pytest.raises(ArityMismatch):
        evaluate(parse('let s = [$ "d79e9" # "seg"] $> $ "6f28d" # "run";;'), store)


def test_eval_deploy_of_dictionary(store, publisher):
    """Test '$@' needs a service, not a dictionary."""
    with pytest.raises(DslEvalError):
        evaluate(parse('let p = $ "aa36e" $@ SCRIPT "out";;'), store, publisher)


def test_eval_deploy_without_publisher(store):
    """Test '$@' needs a publisher."""
    with pytest.raises(DslEvalError):
        evaluate(parse('let p = $ "aa36e" # "infer" $@ SCRIPT "out";;'), store)


def test_eval_get_item_on_service(store):
    """Test '#' on a service is an evaluation error."""
    with pytest.raises(DslEvalError):
        evaluate(parse('let s = $ "aa36e" # "infer" # "again";;'), store)


def test_eval_rejects_hand_built_latest_service(store, publisher):
    """Test publishing refuses a service that still references latest."""
    from src.core.graph import DependencyGraph
    from src.core.refs import VersionRef
    from src.core.types import parse_type_string

    latest = Service(
        name="infer",
        packages=(VersionRef(gid="aa36e"),),
        signature=parse_type_string("png_img -> en_text"),
        graph=DependencyGraph.single("infer", "aa36e", 1),
    )
    with pytest.raises(UnpinnedDependency):
        evaluate(parse('let p = s $@ SCRIPT "out";;'), store, publisher, env={"s": latest})
