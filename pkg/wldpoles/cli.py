"""
Wrappers behind scripts/wld_poles.py: each cmd_* runs one pipeline, writes json, csv or text and returns
the process exit code.
"""
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from . import wld
from .cancel import amplitude_report, report_records
from .exactalg import SetSystem
from .matroid import Matroid
from .poles import (check_r_equalities, classify_factors, r_poly_necklace, boundary_without_pole,
                    vanish_on_boundary_witness, r_poly_edge)
from .positroid import cell_descriptor
from .utils import (InputError, FindingError, dump_json, load_json, get_seed, spawn_rng,
                    flatten_dict, clean_none)

logger = logging.getLogger("wldpoles")

SCHEMA = "1"
ENUMERATE_CAP = 12
FORMATS = ("json", "csv", "text")

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_INPUT = 2


@dataclass
class RunConfig:
    command: str
    k: int = None
    n: int = None
    seed: int = None
    trials: int = 10
    jobs: int = 1
    out: str = None
    fmt: str = "json"
    force: bool = False
    input: str = None
    sets: bool = False


def write_output(text, out=None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        logger.info("Output written to {}".format(out))


def write_records(records, out=None):
    df = pd.DataFrame(records)
    write_output(df.to_csv(index=False), out)


def _check_format(fmt):
    if fmt not in FORMATS:
        raise InputError("Unknown format {}; choose from {}".format(fmt, FORMATS))


def cmd_enumerate(k, n, out=None, fmt="json", force=False):
    _check_format(fmt)
    if n > ENUMERATE_CAP and not force:
        raise InputError("n={} is above the enumeration cap {}; pass --force".format(n, ENUMERATE_CAP))
    diagrams = wld.enumerate(k, n)
    if fmt == "json":
        write_output(dump_json({"schema": SCHEMA, "k": k, "n": n, "count": len(diagrams),
                                "diagrams": [dict(W.to_dict(), label=W.label) for W in diagrams]}), out)
    elif fmt == "csv":
        write_records([{"index": i, "label": W.label, "n": W.n, "props": "|".join(p.label for p in W.props)}
                       for i, W in enumerate(diagrams)], out)
    else:
        lines = [W.label for W in diagrams] + ["{} diagrams for k={} n={}".format(len(diagrams), k, n)]
        write_output("\n".join(lines) + "\n", out)
    return EXIT_OK


def _is_set_system(data, sets):
    if sets:
        return True
    if "props" in data:
        return False
    if "rows" in data:
        return True
    raise InputError("Input needs either props (diagram) or rows (set system)")


def analyze_system(system):
    M = Matroid.from_system(system)
    neck = r_poly_necklace(system)
    rev = r_poly_necklace(system, reverse=True)
    return {"schema": SCHEMA, "input": "sets", "system": system.to_dict(),
            "cell": cell_descriptor(system).to_dict(),
            "flats": M.structure().to_dict(),
            "r": {"necklace": neck.to_dict(), "reverse": rev.to_dict(),
                  "equal": neck.factor_set() == rev.factor_set()}}


def analyze_diagram(W, seed):
    verdict = wld.require_admissible(W)
    V = W.set_system()
    rng = spawn_rng(seed, 0)
    factors = classify_factors(W, rng=rng)
    witnesses = [vanish_on_boundary_witness(W, f, spawn_rng(seed, 1, i))
                 for i, f in enumerate(r_poly_edge(W).factors)]
    return {"schema": SCHEMA, "input": "diagram", "seed": seed, "diagram": dict(W.to_dict(), label=W.label),
            "admissibility": verdict.to_dict(),
            "cell": cell_descriptor(V).to_dict(),
            "flats": Matroid.from_system(V).structure().to_dict(),
            "r": check_r_equalities(W),
            "factors": factors,
            "witnesses": witnesses,
            "boundaries": [c.to_dict() for c in boundary_without_pole(W)]}


def cmd_analyze(filename, sets=False, out=None, fmt="json", seed=None):
    _check_format(fmt)
    seed = get_seed(seed)
    data = load_json(filename)
    if not isinstance(data, dict):
        raise InputError("Expected a JSON object in {}".format(filename))
    if _is_set_system(data, sets):
        bundle = analyze_system(SetSystem.from_dict(data))
        records = [dict(f, provenance="necklace-radical") for f in bundle["r"]["necklace"]["factors"]]
    else:
        bundle = analyze_diagram(wld.WilsonLoopDiagram.from_dict(data), seed)
        records = [{"label": f["label"], "factor": f["factor"], "codim": f["codim"], "case": f["case"]}
                   for f in bundle["factors"]]
    if fmt == "json":
        write_output(dump_json(bundle), out)
    elif fmt == "csv":
        write_records([clean_none(flatten_dict(r)) for r in records], out)
    else:
        necklace = bundle["cell"]["necklace"]
        lines = ["necklace: {}".format(" ".join("".join(str(x) for x in I) for I in necklace)),
                 "dimension: {}".format(bundle["cell"]["dimension"])]
        lines += ["{}".format(r) for r in records]
        write_output("\n".join(lines) + "\n", out)
    return EXIT_OK


def cmd_cancel(k, n, seed=None, trials=10, jobs=1, out=None, fmt="json"):
    _check_format(fmt)
    if trials < 1 or jobs < 1:
        raise InputError("trials and jobs must be positive, got {} and {}".format(trials, jobs))
    report = amplitude_report(k, n, seed=seed, trials=trials, jobs=jobs)
    if fmt == "json":
        write_output(dump_json(report), out)
    elif fmt == "csv":
        write_records(report_records(report), out)
    else:
        lines = ["k={} n={} seed={} trials={}".format(k, n, report["seed"], trials),
                 "groups: {} excluded: {} status: {}".format(report["totals"]["groups"],
                                                             report["totals"]["excluded"], report["status"])]
        write_output("\n".join(lines) + "\n", out)
    return EXIT_OK if report["status"] == "complete" else EXIT_FINDING


def _write_error(e, config):
    body = {"schema": SCHEMA, "error": type(e).__name__, "message": str(e), "payload": e.payload}
    if config.fmt == "json":
        write_output(dump_json(body), config.out)
    else:
        sys.stderr.write(dump_json(body))


def run(config):
    """dispatch a RunConfig; input errors exit 2, mathematical findings exit 1"""
    try:
        if config.command == "enumerate":
            return cmd_enumerate(config.k, config.n, out=config.out, fmt=config.fmt, force=config.force)
        elif config.command == "analyze":
            return cmd_analyze(config.input, sets=config.sets, out=config.out, fmt=config.fmt, seed=config.seed)
        elif config.command == "cancel":
            return cmd_cancel(config.k, config.n, seed=config.seed, trials=config.trials, jobs=config.jobs,
                              out=config.out, fmt=config.fmt)
        raise InputError("Unknown command {}".format(config.command))
    except InputError as e:
        logger.error(str(e))
        _write_error(e, config)
        return EXIT_INPUT
    except FindingError as e:
        logger.error(str(e))
        _write_error(e, config)
        return EXIT_FINDING


def set_log_level(verbose=False, quiet=False):
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)
    if not logger.handlers:
        logger.addHandler(logging.StreamHandler(sys.stderr))
