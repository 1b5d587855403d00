"""Tests for service creation, composition and saving."""

import json
import random

import pytest

from src.core.errors import (
    ArityMismatch,
    ConfigMissing,
    ConfigParseError,
    InvalidConfig,
    PackageNotFound,
    ServiceTypeError,
    StoreWriteError,
    UnknownType,
)
from src.core.graph import DependencyGraph
from src.core.refs import VersionRef
from src.core.service import Service
from src.core.types import EN_TEXT, FR_TEXT, JPEG_IMG, PNG_IMG, DataType, ServiceSignature
from src.store.store import PackageStore
from src.typecheck.checker import compose, create_service, save_composed, service_file
from src.typecheck.config import parse_config


TOKENS = [
    "int", "float", "bool", "string", "ndarray",
    "png_img", "jpeg_img", "en_text", "fr_text", "en_voice", "fr_voice",
]
RANDOM_REF = VersionRef(gid="rnd", version="v1")


def make_service(name, inputs, output, ref=RANDOM_REF):
    return Service(
        name=name,
        packages=(ref,),
        signature=ServiceSignature(inputs=tuple(inputs), output=output),
        graph=DependencyGraph.single(name, ref.package_id, len(inputs)),
    )


def random_type(rng, exclude=None):
    choices = [t for t in TOKENS if exclude is None or t != exclude.token]
    return DataType.from_token(rng.choice(choices))


@pytest.fixture
def services(store):
    """Every fixture use-case service keyed by function name."""
    found = {}
    for gid in ("aa36e", "d79e9", "6f28d", "7f32a", "a11ce"):
        found.update(create_service(VersionRef(gid=gid), store))
    return found


def test_create_service_from_config(store, refs):
    """Test one single-node service per config entry."""
    services = create_service(VersionRef(gid="aa36e"), store)

    assert list(services) == ["infer"]
    infer = services["infer"]
    assert infer.signature == ServiceSignature(inputs=(PNG_IMG,), output=EN_TEXT)
    assert len(infer.graph.nodes) == 1
    assert infer.packages == (refs["aa36e"],)


def test_create_service_records_resolved_version(store, refs):
    """Test a latest reference is recorded as the resolved explicit version."""
    infer = create_service(VersionRef.parse("aa36e/latest"), store)["infer"]

    assert not infer.packages[0].is_latest
    assert infer.packages[0].version == refs["aa36e"].version
    assert infer.graph.nodes[0].package_id == refs["aa36e"].package_id


def test_create_service_keys_match_config(store):
    """Test dictionary keys are the exposed function names."""
    services = create_service(VersionRef(gid="m4th"), store)

    assert sorted(services) == sorted(json.loads((store.resolve(VersionRef(gid="m4th")).files["zoo.json"])))


def test_create_service_unknown_package(store):
    """Test an unresolvable id."""
    with pytest.raises(PackageNotFound):
        create_service(VersionRef(gid="zzzzz"), store)


def test_create_service_empty_config(store):
    """Test at least one name/type pair is required."""
    store.publish_package({"zoo.json": b"{}"}, gid="empty")

    with pytest.raises(ConfigParseError):
        create_service(VersionRef(gid="empty"), store)


def test_create_service_without_config(store):
    """Test a library package exposes no services."""
    store.publish_package({"lib.py": b"X = 1\n"}, gid="lib", service_package=False)

    with pytest.raises(ConfigMissing):
        create_service(VersionRef(gid="lib"), store)


def test_create_service_unknown_type(store):
    """Test unknown tokens propagate from the type parser."""
    store.publish_package({"zoo.json": b'{"f": "png_img -> gif_img"}'}, gid="gif")

    with pytest.raises(UnknownType):
        create_service(VersionRef(gid="gif"), store)


@pytest.mark.parametrize(
    "blob",
    [b"not json", b"[1, 2]", b'{"1bad": "int"}', b'{"f": 3}', b'{"f": "  "}'],
)
def test_parse_config_rejects_malformed(blob):
    """Test malformed configs are parse errors."""
    with pytest.raises(ConfigParseError):
        parse_config(blob, "pkg")


def test_compose_single_chain(services):
    """Test [seg] $> infer is png_img -> en_text."""
    composed = compose([services["seg"]], services["infer"])

    assert composed.type_string == "png_img -> en_text"
    assert len(composed.graph.nodes) == 2
    assert composed.graph.node(composed.graph.sink).function_name == "infer"


def test_compose_sums_arities():
    """Test f1 with 2 inputs and f2 with 3 inputs into a binary g gives 5 inputs."""
    f1 = make_service("f1", [PNG_IMG, EN_TEXT], PNG_IMG)
    f2 = make_service("f2", [FR_TEXT, FR_TEXT, JPEG_IMG], EN_TEXT)
    g = make_service("g", [PNG_IMG, EN_TEXT], FR_TEXT)

    composed = compose([f1, f2], g)

    assert composed.arity == 5
    assert composed.inputs == (PNG_IMG, EN_TEXT, FR_TEXT, FR_TEXT, JPEG_IMG)
    assert composed.output == FR_TEXT


def test_compose_rejects_jpeg_for_png():
    """Test an exact-match checker: jpeg is never accepted for png."""
    f = make_service("gen", [], JPEG_IMG)
    g = make_service("infer", [PNG_IMG], EN_TEXT)

    with pytest.raises(ServiceTypeError) as exc_info:
        compose([f], g)

    error = exc_info.value
    assert (error.position, error.expected, error.found) == (0, PNG_IMG, JPEG_IMG)
    assert str(error) == "type mismatch at position 0: expected png_img, found jpeg_img"


def test_compose_arity_mismatch(services):
    """Test the producer count must equal the consumer arity."""
    with pytest.raises(ArityMismatch) as exc_info:
        compose([services["seg"]], services["run"])

    assert (exc_info.value.expected, exc_info.value.found) == (2, 1)


def test_compose_use_case_pipeline(services):
    """Test the full use-case chain types to png_img -> fr_text."""
    nst = compose([services["seg"], services["image_gen"]], services["run"])
    pipeline = compose([compose([nst], services["infer"])], services["trans"])

    assert pipeline.type_string == "png_img -> fr_text"
    assert len(pipeline.graph.nodes) == 5
    assert len(pipeline.packages) == 5


def test_compose_dedupes_packages(store):
    """Test a package used twice is listed once."""
    m = create_service(VersionRef(gid="m4th"), store)
    composed = compose([m["neg"], m["neg"]], m["add"])

    assert len(composed.packages) == 1


def test_compose_is_associative():
    """Test chaining order does not change the graph or signature."""
    f = make_service("f", [PNG_IMG], PNG_IMG)
    g = make_service("g", [PNG_IMG], EN_TEXT)
    h = make_service("h", [EN_TEXT], FR_TEXT)

    left = compose([compose([f], g)], h)
    right = compose([f], compose([g], h))

    assert left.signature == right.signature
    assert left.graph.is_isomorphic(right.graph)


def test_random_compositions_typecheck():
    """Test the arity sum law and positional rejection on 1000 random instances."""
    rng = random.Random(1234)
    for case in range(1000):
        g_inputs = [random_type(rng) for _ in range(rng.randint(1, 4))]
        g = make_service(f"g{case}", g_inputs, random_type(rng))
        fs = [
            make_service(f"f{case}_{i}", [random_type(rng) for _ in range(rng.randint(0, 3))], expected)
            for i, expected in enumerate(g_inputs)
        ]

        composed = compose(fs, g)
        assert composed.arity == sum(f.arity for f in fs)
        assert composed.inputs == tuple(t for f in fs for t in f.inputs)
        assert composed.output == g.output
        assert len(composed.graph.nodes) == len(fs) + 1

        position = rng.randrange(len(fs))
        wrong = random_type(rng, exclude=g_inputs[position])
        perturbed = list(fs)
        perturbed[position] = make_service("bad", fs[position].inputs, wrong)
        with pytest.raises(ServiceTypeError) as exc_info:
            compose(perturbed, g)
        assert exc_info.value.position == position
        assert exc_info.value.expected == g_inputs[position]
        assert exc_info.value.found == wrong


def test_save_composed_round_trip(store, services):
    """Test saving then creating yields an equivalent service."""
    pipeline = compose([services["seg"]], services["infer"], name="labels")
    ref = save_composed(pipeline, store)

    files = store.resolve(ref).files
    assert json.loads(files["zoo.json"]) == {"labels": "png_img -> en_text"}
    assert service_file("labels") in files

    restored = create_service(ref, store)["labels"]
    assert restored.signature == pipeline.signature
    assert restored.graph.is_isomorphic(pipeline.graph)
    assert restored.packages == pipeline.packages


def test_save_composed_twice(store, services):
    """Test two saves give distinct versions with equal content."""
    pipeline = compose([services["seg"]], services["infer"], name="labels")

    first = save_composed(pipeline, store)
    second = save_composed(pipeline, store)

    assert first != second
    assert first.gid == second.gid
    assert store.resolve(first).content_hash == store.resolve(second).content_hash


def test_save_composed_with_pin(store, services):
    """Test pinning stores the graph beside the new version."""
    pipeline = compose([services["seg"]], services["infer"], name="labels")
    ref = save_composed(pipeline, store, pin=True)

    assert ref.pin
    assert store.resolve(ref).dependency_graph == pipeline.graph


def test_save_composed_read_only(tmp_path, services):
    """Test a read-only store refuses the write."""
    read_only = PackageStore(tmp_path / "ro", read_only=True)

    with pytest.raises(StoreWriteError):
        save_composed(services["infer"], read_only)


def test_save_composed_bad_name(store, services):
    """Test the exposed name must be a function name."""
    with pytest.raises(InvalidConfig):
        save_composed(services["infer"], store, name="not a name")
