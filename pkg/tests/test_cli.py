"""Tests for the zooc command line."""

import io
import json

import pytest

from src.cli import main
from src.publish.backends import bundle_dir_name

from .conftest import FIXTURES, PACKAGES


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def store_args(store):
    return ["--store", str(store.root)]


def test_type_error_golden_stderr(store_args):
    """Test a mistyped composition reports position, types and location."""
    code, out, err = run_cli(*store_args, "check", str(FIXTURES / "bad.zoo"))

    assert code == 1
    assert out == ""
    assert err == "error: type mismatch at position 0: expected png_img, found fr_text at line 3, col 21\n"


def test_type_error_json(store_args):
    """Test --json errors are one JSON object."""
    code, _, err = run_cli("--json", *store_args, "run", str(FIXTURES / "bad.zoo"))

    body = json.loads(err)
    assert code == 1
    assert body["error"] == "type_mismatch"
    assert (body["line"], body["col"]) == (3, 21)
    assert (body["position"], body["expected"], body["found"]) == (0, "png_img", "fr_text")


def test_unknown_flag_is_usage_error():
    """Test argparse errors exit with 2."""
    code, _, _ = run_cli("--nope")

    assert code == 2


def test_missing_program_is_usage_error(tmp_path, store_args):
    """Test an unreadable program file exits with 2."""
    code, _, err = run_cli(*store_args, "check", str(tmp_path / "missing.zoo"))

    assert code == 2
    assert err.startswith("error: cannot read")


def test_check_use_case(store_args, tmp_path):
    """Test check prints binding types and planned URIs."""
    code, out, err = run_cli(*store_args, "check", str(FIXTURES / "usecase.zoo"), "--output-dir", str(tmp_path / "b"))

    assert code == 0, err
    lines = out.splitlines()
    assert "s : png_img -> fr_text" in lines
    assert "pub -> container://alice/image_service:latest" in lines
    assert lines[-1] == "ok"
    assert not (tmp_path / "b").exists()


def test_run_use_case_publishes_and_registers(store_args, tmp_path):
    """Test run publishes the container and records it for discovery."""
    build = tmp_path / "build"

    code, out, err = run_cli(*store_args, "run", str(FIXTURES / "usecase.zoo"), "--output-dir", str(build))

    assert code == 0, err
    assert out == "pub container://alice/image_service:latest\n"
    assert (build / "container" / bundle_dir_name("alice/image_service:latest") / "Dockerfile").exists()

    code, out, _ = run_cli("--json", *store_args, "discover", "--output", "fr_text")
    records = json.loads(out)
    assert code == 0
    assert [r["uri"] for r in records] == ["container://alice/image_service:latest"]
    assert records[0]["gist_id"] == "7f32a"


def test_publish_single_service(store_args, tmp_path):
    """Test publish REF#NAME to a script bundle."""
    code, out, err = run_cli(
        *store_args,
        "publish", "aa36e#infer",
        "--backend", "script",
        "--target", "infer",
        "--output-dir", str(tmp_path),
    )

    assert code == 0, err
    assert out.strip() == (tmp_path / "infer.zoosvc").resolve().as_uri()


def test_publish_bad_service_ref(store_args):
    """Test REF#NAME is required."""
    code, _, err = run_cli(*store_args, "publish", "aa36e", "--backend", "script", "--target", "x")

    assert code == 2
    assert "REF#NAME" in err


def test_publish_unknown_name(store_args):
    """Test an unknown service name."""
    code, _, err = run_cli(*store_args, "publish", "aa36e#nope", "--backend", "script", "--target", "x")

    assert code == 1
    assert "nope" in err


def test_pkg_publish_and_resolve(tmp_path):
    """Test storing a directory and resolving it back."""
    args = ["--store", str(tmp_path / "store")]

    code, out, err = run_cli("--json", *args, "pkg", "publish", str(PACKAGES / "m4th"), "--gid", "mathy")
    assert code == 0, err
    published = json.loads(out)

    code, out, _ = run_cli("--json", *args, "pkg", "resolve", "mathy")
    resolved = json.loads(out)
    assert code == 0
    assert resolved["vid"] == published["vid"]
    assert "zoo.json" in resolved["files"]


def test_pkg_resolve_unknown(tmp_path):
    """Test an unknown package exits with 1."""
    code, _, err = run_cli("--store", str(tmp_path / "store"), "pkg", "resolve", "ghost")

    assert code == 1
    assert err.startswith("error:")


def test_invalid_ttl_is_config_error(tmp_path):
    """Test a non-positive TTL exits with 2."""
    code, _, err = run_cli("--store", str(tmp_path), "--ttl", "0", "pkg", "resolve", "x")

    assert code == 2
    assert "ttl_seconds" in err


def test_bench_fold(tmp_path):
    """Test a tiny benchmark run writes its CSV."""
    out_csv = tmp_path / "bench.csv"

    code, out, err = run_cli(
        "--store", str(tmp_path / "store"),
        "bench", "--workloads", "fold,gd_cubic", "--trials", "3", "--warmup", "0", "--out", str(out_csv),
    )

    assert code == 0, err
    assert "gd_cubic" in out
    assert out_csv.read_text().splitlines()[0] == "workload,param,trials,mean_ns,std_ns"


def test_bench_unknown_workload(tmp_path):
    """Test an unknown workload name fails before running."""
    code, _, err = run_cli("--store", str(tmp_path), "bench", "--workloads", "nope")

    assert code == 1
    assert "nope" in err
