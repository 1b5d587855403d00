"""The ``zooc`` command line.

Exit codes: 0 on success, 1 on domain errors, 2 on usage and configuration
errors. Errors are printed to stderr as ``error: <message>``, or as a JSON
object with ``--json``.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO, Tuple

from .. import __version__
from ..core.errors import InsufficientData, UsageError, ZooError
from ..core.refs import VersionRef
from ..core.service import Service
from ..utils.config import Settings, get_config
from ..utils.logger import get_logger, setup_logger


logger = get_logger(__name__)

BACKENDS = ("container", "script", "unikernel")
SUITES = ("all", "core", "strategies")
STRATEGY_WORKLOADS = ("invoke_inprocess", "invoke_http", "invoke_bundle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zooc",
        description="Compose typed services from code packages and publish them.",
    )
    parser.add_argument("--version", action="version", version=f"zooc {__version__}")
    parser.add_argument("--store", type=Path, help="package store root (ZOOC_STORE)")
    parser.add_argument("--registry", help="discovery registry URL (ZOOC_REGISTRY)")
    parser.add_argument("--ttl", type=int, help="seconds a cached 'latest' stays fresh (ZOOC_TTL)")
    parser.add_argument("--config", type=Path, help="config file (default ~/.zooc.json)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--json", action="store_true", help="machine-readable output")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    run = commands.add_parser("run", help="evaluate a zoo program")
    run.add_argument("file", type=Path)
    run.add_argument("--output-dir", type=Path, help="root for published artifacts")
    run.set_defaults(handler=cmd_run)

    check = commands.add_parser("check", help="parse and type-check a zoo program without publishing")
    check.add_argument("file", type=Path)
    check.add_argument("--output-dir", type=Path, help="root the planned URIs refer to")
    check.set_defaults(handler=cmd_check)

    publish = commands.add_parser("publish", help="publish one service of a package")
    publish.add_argument("service", metavar="REF#NAME")
    publish.add_argument("--backend", choices=BACKENDS, required=True)
    publish.add_argument("--target", required=True)
    publish.add_argument("--output-dir", type=Path)
    publish.set_defaults(handler=cmd_publish)

    serve_bundle = commands.add_parser("serve-bundle", help="serve a published bundle over HTTP")
    serve_bundle.add_argument("path", type=Path)
    serve_bundle.add_argument("--host")
    serve_bundle.add_argument("--port", type=int)
    serve_bundle.set_defaults(handler=cmd_serve_bundle)

    serve = commands.add_parser("serve", help="serve a service straight from the store")
    serve.add_argument("service", metavar="REF#NAME")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.set_defaults(handler=cmd_serve)

    registry = commands.add_parser("registry", help="run the discovery registry")
    registry.add_argument("--host")
    registry.add_argument("--port", type=int)
    registry.set_defaults(handler=cmd_registry)

    discover = commands.add_parser("discover", help="search published services")
    discover.add_argument("--input", dest="input_type", help="required input type token")
    discover.add_argument("--output", dest="output_type", help="exact output type token")
    discover.add_argument("--q", dest="text", help="description substring")
    discover.set_defaults(handler=cmd_discover)

    bench = commands.add_parser("bench", help="run the benchmark suite")
    bench.add_argument("--suite", choices=SUITES, default="core")
    bench.add_argument("--workloads", help="comma-separated workload names, overrides --suite")
    bench.add_argument("--trials", type=int)
    bench.add_argument("--warmup", type=int)
    bench.add_argument("--out", type=Path, help="results CSV")
    bench.add_argument("--plot", type=Path, help="log-log chart of the size sweeps")
    bench.add_argument("--sizes-out", type=Path, help="artifact size CSV (script vs container)")
    bench.set_defaults(handler=cmd_bench)

    pkg = commands.add_parser("pkg", help="package store operations")
    pkg_commands = pkg.add_subparsers(dest="pkg_command", metavar="ACTION", required=True)

    pkg_publish = pkg_commands.add_parser("publish", help="store a directory as a new package version")
    pkg_publish.add_argument("directory", type=Path)
    pkg_publish.add_argument("--gid", help="package id, derived from the content when omitted")
    pkg_publish.add_argument("--push", action="store_true", help="also upload to the remote")
    pkg_publish.add_argument("--library", action="store_true", help="allow a package without zoo.json")
    pkg_publish.set_defaults(handler=cmd_pkg_publish)

    pkg_resolve = pkg_commands.add_parser("resolve", help="resolve a reference to a stored version")
    pkg_resolve.add_argument("ref")
    pkg_resolve.set_defaults(handler=cmd_pkg_resolve)

    return parser


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------


def emit(args: argparse.Namespace, text: str, data: Any, out: TextIO) -> None:
    if args.json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
    elif text:
        out.write(text + "\n")


def split_service_ref(text: str) -> Tuple[VersionRef, str]:
    """Split ``REF#NAME``.

    Raises:
        UsageError: Without a ``#NAME`` part
    """
    ref, sep, name = text.partition("#")
    if not sep or not name:
        raise UsageError(f"expected REF#NAME, got {text!r}")
    return VersionRef.parse(ref), name


def read_program(path: Path):
    from ..dsl.parser import parse

    try:
        source = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from e
    return parse(source)


def open_store(config: Settings, read_only: bool = False):
    from ..store.store import PackageStore

    return PackageStore.from_config(config, read_only=read_only)


def discovery_target(config: Settings):
    """The registry published services are recorded in: remote if configured, else the local log."""
    if config.registry_url:
        from ..integrations.registry_client import RegistryClient

        return RegistryClient.from_config(config)
    from ..discovery.registry import DiscoveryRegistry

    return DiscoveryRegistry.from_config(config)


def make_publisher(config: Settings, output_dir: Optional[Path], with_discovery: bool = True):
    from ..discovery.registry import discovery_sink
    from ..publish.backends import Publisher

    sink = discovery_sink(discovery_target(config)) if with_discovery else None
    return Publisher(
        open_store(config),
        output_dir=output_dir or config.publish_dir,
        discovery=sink,
        port=config.serve_port,
    )


def lookup_service(config: Settings, text: str) -> Service:
    from ..core.errors import KeyNotFound
    from ..typecheck.checker import create_service

    ref, name = split_service_ref(text)
    services = create_service(ref, open_store(config))
    if name not in services:
        raise KeyNotFound(name, str(ref))
    return services[name]


def describe_binding(value: Any) -> Dict[str, Any]:
    if isinstance(value, Service):
        return {"kind": "service", "name": value.name, "type": value.type_string}
    if isinstance(value, dict):
        return {"kind": "services", "names": sorted(value)}
    return {"kind": "uri", "uri": value}


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------


def cmd_run(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..dsl.evaluator import evaluate

    program = read_program(args.file)
    publisher = make_publisher(config, args.output_dir)
    env = evaluate(program, publisher.store, publisher)

    if args.json:
        emit(args, "", {name: describe_binding(value) for name, value in env.items()}, out)
        return 0
    for name, value in env.items():
        if isinstance(value, str):
            out.write(f"{name} {value}\n")
    return 0


def cmd_check(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..dsl.evaluator import evaluate
    from ..publish.backends import Publisher

    program = read_program(args.file)
    store = open_store(config)
    publisher = Publisher(store, output_dir=args.output_dir or config.publish_dir)
    env = evaluate(program, store, publisher, check_only=True)

    if args.json:
        emit(args, "", {name: describe_binding(value) for name, value in env.items()}, out)
        return 0
    for name, value in env.items():
        if isinstance(value, Service):
            out.write(f"{name} : {value.type_string}\n")
        elif isinstance(value, str):
            out.write(f"{name} -> {value}\n")
    out.write("ok\n")
    return 0


def cmd_publish(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..publish.models import BackendKind, BackendSpec

    service = lookup_service(config, args.service)
    publisher = make_publisher(config, args.output_dir)
    spec = BackendSpec(kind=BackendKind.parse(args.backend), target=args.target)
    artifact = publisher.publish_service(service, spec)
    emit(
        args,
        artifact.uri,
        {"uri": artifact.uri, "backend": artifact.kind.value, "bytes": artifact.size_bytes},
        out,
    )
    return 0


def cmd_serve_bundle(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..publish.server import serve

    handle = serve(args.path, port=args.port or config.serve_port, host=args.host or config.serve_host)
    emit(args, f"serving on {handle.url}", {"url": handle.url}, out)
    out.flush()
    handle.wait()
    return 0


def cmd_serve(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..publish.server import serve
    from ..runtime.registry import PrimitiveRegistry, load_package_primitives

    service = lookup_service(config, args.service)
    store = open_store(config)
    registry = PrimitiveRegistry()
    for ref in service.packages:
        manifest = store.resolve(ref.model_copy(update={"pin": False}))
        load_package_primitives(ref.package_id, manifest.files, registry)

    handle = serve(service, port=args.port or config.serve_port, registry=registry, host=args.host or config.serve_host)
    emit(args, f"serving {service.name} on {handle.url}", {"url": handle.url}, out)
    out.flush()
    handle.wait()
    return 0


def cmd_registry(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    import uvicorn

    from ..discovery.api import create_registry_app
    from ..discovery.registry import DiscoveryRegistry

    app = create_registry_app(DiscoveryRegistry.from_config(config))
    uvicorn.run(
        app,
        host=args.host or config.registry_host,
        port=args.port or config.registry_port,
        log_level=config.log_level.lower(),
    )
    return 0


def cmd_discover(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    target = discovery_target(config)
    records = target.search(input_type=args.input_type, output_type=args.output_type, text=args.text)
    if args.json:
        emit(args, "", [record.model_dump(mode="json") for record in records], out)
        return 0
    for record in records:
        out.write(f"{record.id}\t{record.type_string}\t{record.uri}\t{record.description}\n")
    return 0


def cmd_bench(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    from ..bench.fit import scaling_fit
    from ..bench.strategies import artifact_size_comparison
    from ..bench.suite import SuiteConfig, run_suite
    from ..bench.workloads import CORE_WORKLOADS, get_workload

    if args.workloads:
        workloads = [name.strip() for name in args.workloads.split(",") if name.strip()]
    elif args.suite == "core":
        workloads = list(CORE_WORKLOADS)
    elif args.suite == "strategies":
        workloads = list(STRATEGY_WORKLOADS)
    else:
        workloads = list(CORE_WORKLOADS) + list(STRATEGY_WORKLOADS)

    suite = SuiteConfig.from_settings(config, workloads=workloads, trials=args.trials, warmup=args.warmup)
    results = run_suite(suite, out=args.out)

    fits = {}
    for name in workloads:
        if not get_workload(name).sized:
            continue
        try:
            fits[name] = scaling_fit([r for r in results if r.workload == name])
        except InsufficientData as e:
            logger.info("no scaling fit", workload=name, reason=e.message)

    if args.plot:
        from ..bench.plot import plot_results

        plot_results(results, args.plot)

    sizes = artifact_size_comparison(args.sizes_out) if args.sizes_out else []

    if args.json:
        emit(
            args,
            "",
            {
                "results": [r.model_dump() for r in results],
                "fits": {name: asdict(fit) for name, fit in fits.items()},
                "sizes": [row.model_dump() for row in sizes],
            },
            out,
        )
        return 0

    for r in results:
        line = f"{r.workload}\t{r.param}\t{r.mean_ns:.0f} ns ± {r.std_ns:.0f}"
        if r.value is not None:
            line += f"\tvalue={r.value:.6f}"
        out.write(line + "\n")
    for name, fit in fits.items():
        out.write(f"{name}\tslope={fit.slope:.3f}\tr2={fit.r_squared:.3f}\n")
    for row in sizes:
        out.write(f"{row.backend}\t{row.bytes} bytes\t{row.uri}\n")
    return 0


def _read_package_dir(directory: Path) -> Dict[str, bytes]:
    if not directory.is_dir():
        raise UsageError(f"{directory} is not a directory")
    return {
        path.relative_to(directory).as_posix(): path.read_bytes()
        for path in sorted(directory.rglob("*"))
        if path.is_file() and not any(part.startswith(".") for part in path.relative_to(directory).parts)
    }


def cmd_pkg_publish(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    store = open_store(config)
    ref = store.publish_package(
        _read_package_dir(args.directory),
        gid=args.gid,
        service_package=not args.library,
        push=args.push,
    )
    emit(args, str(ref), {"gid": ref.gid, "vid": ref.version}, out)
    return 0


def cmd_pkg_resolve(args: argparse.Namespace, config: Settings, out: TextIO) -> int:
    store = open_store(config)
    manifest = store.resolve(VersionRef.parse(args.ref))
    data = {
        "gid": manifest.gid,
        "vid": manifest.vid,
        "content_hash": manifest.content_hash,
        "files": sorted(manifest.files),
    }
    text = f"{manifest.gid}/{manifest.vid}\n" + "\n".join(f"  {name}" for name in data["files"])
    emit(args, text, data, out)
    return 0


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------


def load_settings(args: argparse.Namespace) -> Settings:
    if args.config is not None:
        os.environ["ZOOC_CONFIG"] = str(args.config)
    return get_config(
        store_root=args.store,
        registry_url=args.registry,
        ttl_seconds=args.ttl,
        log_level=args.log_level,
    )


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    """Run one ``zooc`` command.

    Args:
        argv: Arguments without the program name, defaults to ``sys.argv[1:]``
        out: Standard output stream
        err: Standard error stream

    Returns:
        Process exit code
    """
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()

    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = load_settings(args)
        setup_logger(level=config.log_level, json_output=config.log_json or args.json)
        return args.handler(args, config, out)
    except ZooError as e:
        if args.json:
            err.write(json.dumps(e.to_dict(), sort_keys=True) + "\n")
        else:
            err.write(f"error: {e}\n")
        logger.debug("command failed", command=args.command, error=e.code)
        return e.exit_code
    except KeyboardInterrupt:
        return 130


def run() -> None:
    sys.exit(main())
