"""Command-line front end.

Every command writes canonical JSON (sorted keys, CycNum text form) to
stdout or to ``--json PATH``.  Exit status: 0 on success or a true answer,
1 for a false answer, 2 for invalid input with a JSON error object.
"""

from __future__ import annotations

import json
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import click

from .abgroup import FgAbelianGroup
from .cyclo import parse_cyc
from .gradings import (
    FineGradingSpec,
    Grading,
    GradingError,
    brute_equivalent,
    build_fine,
    enumerate_fine,
    equivalent,
    grading_new,
    is_toral,
    universal_group,
)
from .heisenberg import TwistParams, random_skew_instance, skew_normal_form, twisted
from .superalg import SuperAlgebra
from .weyl import (
    AutomorphismCheckError,
    brute_aut_action,
    generators_for,
    weyl_group,
    weyl_order_formula,
)

OUTPUT_DIR_ENV = "GRADALG_OUTPUT_DIR"
COMMANDS = (
    "algebra",
    "grading-build",
    "grading-check",
    "universal-group",
    "enumerate",
    "equiv",
    "weyl-order",
    "weyl-generators",
    "selfcheck",
)


class InputError(ValueError):
    def __init__(self, kind: str, detail: str, extra: Optional[dict] = None) -> None:
        super().__init__(detail)
        self.payload = {"error": kind, "detail": detail, **(extra or {})}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    output: Optional[str] = None
    markdown: bool = False
    oracle: bool = False
    dim_cap: int = 8
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError("bad-config", f"unknown command {self.command!r}")
        if self.dim_cap < 1:
            raise InputError("bad-config", "dimension cap must be positive")
        if self.output is not None and any(_same_path(self.output, p) for p in self.inputs):
            raise InputError("bad-config", "output path coincides with an input path")


def _same_path(a: str, b: str) -> bool:
    return Path(a).resolve() == Path(b).resolve()


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------- loaders

def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("unreadable-input", f"{path}: {exc}") from exc


def load_spec(path: str) -> FineGradingSpec:
    """A spec file, or any artifact carrying a ``spec`` entry."""
    data = _read_json(path)
    if isinstance(data, dict) and "spec" in data:
        data = data["spec"]
    try:
        return FineGradingSpec.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("invalid-spec", f"{path}: {exc}") from exc


def params_from_options(k: int, r: int, m: int, lam: str, kappa: str) -> TwistParams:
    try:
        lam_v = tuple(parse_cyc(x) for x in _split(lam))
        kap_v = tuple(parse_cyc(x) for x in _split(kappa))
        return TwistParams(k, r, m, lam_v, kap_v)
    except ValueError as exc:
        raise InputError("invalid-parameters", str(exc)) from exc


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(";") if t.strip()] if text else []


def grading_to_json(spec: Optional[FineGradingSpec], gr: Grading) -> dict:
    out = {"algebra": gr.algebra.to_json(), "grading": gr.to_json()}
    if spec is not None:
        out["spec"] = spec.to_json()
    return out


def load_grading(path: str) -> Grading:
    """Rebuild and validate a grading artifact; incompatible degrees raise GradingError."""
    data = _read_json(path)
    try:
        A = SuperAlgebra.from_json(data["algebra"])
        gdata = data["grading"]
        G = FgAbelianGroup.from_json(gdata["group"])
        degrees = [G.elem(d["free"], d.get("torsion", ())) for d in gdata["degrees"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("invalid-grading", f"{path}: {exc}") from exc
    if len(degrees) != A.dim:
        raise InputError("invalid-grading", f"{path}: {len(degrees)} degrees for dimension {A.dim}")
    return grading_new(A, None, degrees, G)


def _group_json(G: FgAbelianGroup) -> dict:
    return {**G.to_json(), "text": str(G)}


# --------------------------------------------------------------------- commands

def _algebra(cfg: RunConfig) -> tuple[int, Any]:
    p = cfg.options["params"]
    return 0, {"params": p.to_json(), "algebra": twisted(p).to_json()}


def _grading_build(cfg: RunConfig) -> tuple[int, Any]:
    spec = load_spec(cfg.inputs[0])
    _, gr = build_fine(spec)
    return 0, grading_to_json(spec, gr)


def _grading_check(cfg: RunConfig) -> tuple[int, Any]:
    gr = load_grading(cfg.inputs[0])
    return 0, {"valid": True, "dim": gr.algebra.dim, "support_size": len(gr.support())}


def _universal_group(cfg: RunConfig) -> tuple[int, Any]:
    src = cfg.inputs[0]
    data = _read_json(src)
    if isinstance(data, dict) and "grading" in data:
        gr = load_grading(src)
    else:
        _, gr = build_fine(load_spec(src))
    U, _ = universal_group(gr)
    return 0, {"universal_group": _group_json(U), "toral": is_toral(gr)}


def _catalog_row(spec: FineGradingSpec) -> dict:
    _, gr = build_fine(spec)
    U, _ = universal_group(gr)
    return {
        "spec": spec.to_json(),
        "label": spec.label(),
        "universal_group": _group_json(U),
        "toral": not U.torsion,
        "weyl_order": weyl_group(gr, spec).order,
    }


def _enumerate(cfg: RunConfig) -> tuple[int, Any]:
    p = cfg.options["params"]
    rows = [_catalog_row(s) for s in enumerate_fine(p)]
    return 0, {"params": p.to_json(), "count": len(rows), "catalog": rows}


def _equiv(cfg: RunConfig) -> tuple[int, Any]:
    a, b = (load_spec(x) for x in cfg.inputs)
    answer = equivalent(a, b)
    out: dict = {"equivalent": answer}
    if cfg.oracle:
        _, ga = build_fine(a)
        _, gb = build_fine(b)
        oracle = brute_equivalent(ga, gb, dim_cap=cfg.dim_cap)
        out["oracle"] = oracle
        out["agree"] = oracle == answer
    return (0 if answer else 1), out


def _weyl_order(cfg: RunConfig) -> tuple[int, Any]:
    spec = load_spec(cfg.inputs[0])
    _, gr = build_fine(spec)
    W = weyl_group(gr, spec)
    out: dict = {"spec": spec.to_json(), "order": W.order, "element_orders": W.to_json()["element_orders"]}
    try:
        out["formula"] = weyl_order_formula(spec)
    except ValueError:
        out["formula"] = None
    if cfg.oracle:
        out["oracle"] = brute_aut_action(gr, dim_cap=cfg.dim_cap).order
    return 0, out


def _weyl_generators(cfg: RunConfig) -> tuple[int, Any]:
    spec = load_spec(cfg.inputs[0])
    _, gr = build_fine(spec)
    gens = generators_for(gr, spec)
    return 0, {
        "spec": spec.to_json(),
        "basis": list(gr.algebra.basis),
        "generators": [g.to_json(gr) for g in gens],
    }


def _selfcheck(cfg: RunConfig) -> tuple[int, Any]:
    rng = random.Random(cfg.seed)
    count = cfg.options.get("count", 100)
    failures = []
    for t in range(count):
        M, kappas, zeros = random_skew_instance(rng, max_dim=6)
        try:
            _, got, got_zeros = skew_normal_form(M)
            ok = (got, got_zeros) == (kappas, zeros)
        except (ValueError, AssertionError):
            ok = False
        if not ok:
            failures.append(t)
    return (0 if not failures else 1), {"seed": cfg.seed, "count": count, "failures": failures}


HANDLERS = {
    "algebra": _algebra,
    "grading-build": _grading_build,
    "grading-check": _grading_check,
    "universal-group": _universal_group,
    "enumerate": _enumerate,
    "equiv": _equiv,
    "weyl-order": _weyl_order,
    "weyl-generators": _weyl_generators,
    "selfcheck": _selfcheck,
}


def _markdown(result: dict) -> str:
    lines = ["| # | spec | universal group | Weyl order |", "|---|---|---|---|"]
    for n, row in enumerate(result["catalog"], 1):
        lines.append(f"| {n} | {row['label']} | {row['universal_group']['text']} | {row['weyl_order']} |")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a command; returns the exit status and the rendered artifact."""
    try:
        status, result = HANDLERS[cfg.command](cfg)
    except InputError as exc:
        return 2, dumps(exc.payload)
    except GradingError as exc:
        return 2, dumps(exc.to_json())
    except AutomorphismCheckError as exc:
        return 2, dumps(exc.to_json())
    except ValueError as exc:
        return 2, dumps({"error": "invalid-input", "detail": str(exc)})
    if cfg.markdown and cfg.command == "enumerate":
        return status, _markdown(result)
    return status, dumps(result)


def _emit(cfg: RunConfig) -> None:
    status, text = run(cfg)
    if cfg.output and status != 2:
        path = Path(cfg.output)
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    sys.exit(status)


def _config(command: str, **kw) -> RunConfig:
    try:
        return RunConfig(command, **kw)
    except InputError as exc:
        sys.stdout.write(dumps(exc.payload))
        sys.exit(2)


def _params_or_exit(k, r, m, lam, kappa) -> TwistParams:
    try:
        return params_from_options(k, r, m, lam, kappa)
    except InputError as exc:
        sys.stdout.write(dumps(exc.payload))
        sys.exit(2)


# --------------------------------------------------------------------- click wiring

def _param_options(f):
    for opt in reversed(
        [
            click.option("--k", "k", type=int, required=True, help="number of even twisting pairs"),
            click.option("--r", "r", type=int, default=0, show_default=True, help="number of odd twisting pairs"),
            click.option("--m", "m", type=int, default=0, show_default=True, help="odd dimension"),
            click.option("--lambda", "lam", default="", help='even scalars, ";"-separated, e.g. "1; z(4,1)"'),
            click.option("--kappa", "kappa", default="", help='odd scalars, ";"-separated'),
        ]
    ):
        f = opt(f)
    return f


json_option = click.option("--json", "output", type=click.Path(dir_okay=False), default=None, help="write JSON here")
spec_option = click.option("--spec", "spec", type=click.Path(exists=True, dir_okay=False), required=True)
oracle_option = click.option("--oracle/--no-oracle", default=False, help="cross-check with the exhaustive oracle")
cap_option = click.option("--dim-cap", type=int, default=8, show_default=True, help="oracle dimension cap")


@click.group()
def main() -> None:
    """Twisted Heisenberg superalgebras, their fine gradings and Weyl groups."""


@main.command()
@_param_options
@json_option
def algebra(k, r, m, lam, kappa, output):
    """Structure constants of the twisted Heisenberg superalgebra."""
    p = _params_or_exit(k, r, m, lam, kappa)
    _emit(_config("algebra", output=output, options={"params": p}))


@main.group()
def grading() -> None:
    """Build and inspect gradings."""


@grading.command("build")
@spec_option
@json_option
def grading_build(spec, output):
    """Fine grading assembled from a block spec."""
    _emit(_config("grading-build", inputs=(spec,), output=output))


@grading.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def grading_check(path):
    """Validate a grading artifact; exit 2 names the first bad bracket."""
    _emit(_config("grading-check", inputs=(path,)))


@grading.command("universal-group")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@json_option
def grading_universal(path, output):
    """Universal group of a grading artifact or of a spec."""
    _emit(_config("universal-group", inputs=(path,), output=output))


@main.command("enumerate")
@_param_options
@json_option
@click.option("--markdown", is_flag=True, help="render the catalog as a Markdown table")
def enumerate_cmd(k, r, m, lam, kappa, output, markdown):
    """All fine gradings up to equivalence."""
    p = _params_or_exit(k, r, m, lam, kappa)
    _emit(_config("enumerate", output=output, markdown=markdown, options={"params": p}))


@main.command()
@click.argument("a", type=click.Path(exists=True, dir_okay=False))
@click.argument("b", type=click.Path(exists=True, dir_okay=False))
@oracle_option
@cap_option
def equiv(a, b, oracle, dim_cap):
    """Are two specs equivalent?  Exit 0 yes, 1 no."""
    _emit(_config("equiv", inputs=(a, b), oracle=oracle, dim_cap=dim_cap))


@main.group()
def weyl() -> None:
    """Weyl groups of fine gradings."""


@weyl.command("order")
@spec_option
@oracle_option
@cap_option
@json_option
def weyl_order(spec, oracle, dim_cap, output):
    """Order of the Weyl group, with the closed form and optionally the oracle."""
    _emit(_config("weyl-order", inputs=(spec,), oracle=oracle, dim_cap=dim_cap, output=output))


@weyl.command("generators")
@spec_option
@json_option
def weyl_generators(spec, output):
    """Generating automorphisms as permutations and matrices."""
    _emit(_config("weyl-generators", inputs=(spec,), output=output))


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=100, show_default=True)
def selfcheck(seed, count):
    """Seeded round trips of the skew normal form."""
    _emit(_config("selfcheck", seed=seed, options={"count": count}))


if __name__ == "__main__":  # pragma: no cover
    main()
