"""Strict, statement-ordered evaluation of zoo programs.

Values are service dictionaries (``$``), services (``#`` and ``$>``) and
URI strings (``$@``).
"""

from typing import Any, Dict, Iterable, Optional

from ..core.errors import DslEvalError, KeyNotFound, UnboundIdentifier, ZooError
from ..core.refs import VersionRef
from ..core.service import Service
from ..store.store import PackageStore
from ..typecheck.checker import compose, create_service
from ..utils.logger import get_logger
from .nodes import Acquire, ComposeList, Deploy, Expr, GetItem, Let, Var


logger = get_logger(__name__)

Environment = Dict[str, Any]


def describe(value: Any) -> str:
    if isinstance(value, Service):
        return f"service {value.name!r}"
    if isinstance(value, dict):
        return "service dictionary"
    if isinstance(value, str):
        return "URI string"
    return type(value).__name__


class Evaluator:
    """Evaluates expressions against a store and a publisher.

    In check mode ``$@`` only validates the deployment and binds the URI it
    would produce, writing nothing.
    """

    def __init__(self, store: PackageStore, publisher=None, check_only: bool = False):
        self.store = store
        self.publisher = publisher
        self.check_only = check_only

    def run(self, program: Iterable[Let], env: Optional[Environment] = None) -> Environment:
        env = dict(env or {})
        for statement in program:
            env[statement.name] = self._located(statement, lambda: self._let(statement, env))
        return env

    def _let(self, statement: Let, env: Environment) -> Any:
        value = self.eval(statement.expr, env, name=statement.name)
        if statement.body is None:
            return value
        return self.eval(statement.body, {**env, statement.name: value})

    def eval(self, expr: Expr, env: Environment, name: Optional[str] = None) -> Any:
        """Evaluate one expression; ``name`` names a composed result."""
        return self._located(expr, lambda: self._eval(expr, env, name))

    def _eval(self, expr: Expr, env: Environment, name: Optional[str]) -> Any:
        if isinstance(expr, Var):
            if expr.name not in env:
                raise UnboundIdentifier(expr.name)
            return env[expr.name]

        if isinstance(expr, Acquire):
            return create_service(VersionRef.parse(expr.ref), self.store)

        if isinstance(expr, GetItem):
            table = self.eval(expr.expr, env)
            if not isinstance(table, dict):
                raise DslEvalError(f"'#' needs a service dictionary, got a {describe(table)}")
            if expr.name not in table:
                package = expr.expr.ref if isinstance(expr.expr, Acquire) else None
                raise KeyNotFound(expr.name, package)
            return table[expr.name]

        if isinstance(expr, ComposeList):
            fs = [self._service(item, env, "'$>' list item") for item in expr.items]
            g = self._service(expr.target, env, "right operand of '$>'")
            return compose(fs, g, name=name)

        if isinstance(expr, Deploy):
            service = self._service(expr.expr, env, "left operand of '$@'")
            if self.publisher is None:
                raise DslEvalError("no publisher configured for '$@'")
            if self.check_only:
                return self.publisher.plan(service, expr.backend)
            return self.publisher.publish_service(service, expr.backend).uri

        if isinstance(expr, Let):
            return self._let(expr, env)

        raise DslEvalError(f"cannot evaluate {expr!r}")

    def _service(self, expr: Expr, env: Environment, role: str) -> Service:
        value = self.eval(expr, env)
        if not isinstance(value, Service):
            raise DslEvalError(f"{role} must be a service, got a {describe(value)}")
        return value

    @staticmethod
    def _located(node, thunk):
        try:
            return thunk()
        except ZooError as e:
            if e.location is None and getattr(node, "loc", None) is not None:
                e.location = node.loc
            raise


def evaluate(
    program: Iterable[Let],
    store: PackageStore,
    publisher=None,
    env: Optional[Environment] = None,
    check_only: bool = False,
) -> Environment:
    """Evaluate a parsed program.

    Args:
        program: Statements from :func:`parse`
        store: Store resolving ``$`` references
        publisher: Publisher used by ``$@``
        env: Bindings visible to the program
        check_only: Validate deployments without publishing

    Returns:
        The environment extended with every ``let`` binding

    Raises:
        ZooError: The first error raised, located at the innermost node
    """
    env = Evaluator(store, publisher, check_only=check_only).run(program, env)
    logger.info("program evaluated", bindings=sorted(env), check_only=check_only)
    return env
