"""Batch driver: run named check suites, compare against the golden store,
emit JSON certificates (and a CSV table for the level suite).

Exit codes: 0 every check passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from . import __version__, kernel
from .certs import Certificate, expected, tau_order_expected, write_atomic

DEFAULT_GRID = "acceptance_grid.json"

SUITE_NAMES = (
    "solomon-tits",
    "ash-exactness",
    "h0-iso",
    "psi-chainmap",
    "phi-vs-psi",
    "tau-vanishing",
    "coinvariants",
    "modular-symbols",
    "nilmanifold",
    "lattice",
)


class UsageError(Exception):
    pass


def _np_key(params) -> str:
    return f"{params['n']},{params['p']}"


def _require(params: dict, *names) -> None:
    for name in names:
        if params.get(name) is None:
            raise UsageError(f"missing required parameter --{name.replace('_', '-')}")


# ---------------------------------------------------------------------------
# suites


def suite_solomon_tits(params: dict) -> Certificate:
    from .building import TitsBuilding
    from .ash import build_ash_complex

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    b = TitsBuilding(n, p)
    betti = b.reduced_betti()
    ash = build_ash_complex(n, p)
    ash_h0 = ash.dims[0] - kernel.rank(ash.complex.boundary(1))
    exp = {
        "building_dim": expected("steinberg_dimension", _np_key(params)),
        "resolution_h0": expected("steinberg_dimension", _np_key(params)),
        "simplex_counts": expected("building_simplex_counts", _np_key(params)),
        "lower_reduced_betti": {"value": [0] * (n - 2), "source": "oracle"},
    }
    computed = {
        "building_dim": b.steinberg_space().dimension,
        "resolution_h0": ash_h0,
        "simplex_counts": [len(level) for level in b.simplices],
        "lower_reduced_betti": betti[:-1],
    }
    ok = all(computed[k] == exp[k]["value"] for k in computed)
    return Certificate("solomon-tits", {"n": n, "p": p}, computed, exp, ok)


def suite_ash_exactness(params: dict) -> Certificate:
    from .ash import build_ash_complex, exactness_check

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    ash = build_ash_complex(n, p)
    cert = exactness_check(n, p, ash=ash)
    exp = {
        "dims": expected("resolution_dims", _np_key(params)),
        "homology": {
            "value": [expected("steinberg_dimension", _np_key(params))["value"]]
            + [0] * ash.top_k,
            "source": "oracle",
        },
    }
    computed = {"dims": cert.dims, "homology": cert.homology}
    ok = cert.ok and all(computed[k] == exp[k]["value"] for k in computed)
    return Certificate("ash-exactness", {"n": n, "p": p}, computed, exp, ok)


def suite_h0_iso(params: dict) -> Certificate:
    from .ash import h0_to_steinberg

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    _, cert = h0_to_steinberg(n, p)
    st = expected("steinberg_dimension", _np_key(params))
    computed = {
        "steinberg_dimension": cert.steinberg_dimension,
        "map_rank": cert.map_rank,
        "boundary_rank": cert.boundary_rank,
        "c0_dimension": cert.c0_dimension,
        "columns_are_cycles": cert.columns_are_cycles,
        "kills_boundaries": cert.kills_boundaries,
        "surjective": cert.surjective,
        "kernel_is_boundary_image": cert.kernel_is_boundary_image,
    }
    exp = {
        "steinberg_dimension": st,
        "map_rank": st,
        "boundary_rank": {
            "value": expected("resolution_dims", _np_key(params))["value"][0]
            - st["value"],
            "source": "oracle",
        },
        "surjective": {"value": True, "source": "definition"},
        "kernel_is_boundary_image": {"value": True, "source": "definition"},
    }
    ok = cert.ok and all(computed[k] == v["value"] for k, v in exp.items())
    return Certificate("h0-iso", {"n": n, "p": p}, computed, exp, ok)


def suite_psi_chainmap(params: dict) -> Certificate:
    from .ash import build_ash_complex
    from .stabilization import psi_chain_map

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    res = psi_chain_map(build_ash_complex(n, p), build_ash_complex(n + 1, p))
    computed = {
        "commutes": res.ok,
        "degrees_checked": res.chain_map.source.top_degree + 1,
        "failure_degree": res.failure_degree,
    }
    exp = {"commutes": {"value": True, "source": "definition"}}
    return Certificate("psi-chainmap", {"n": n, "p": p}, computed, exp, res.ok)


def suite_phi_vs_psi(params: dict) -> Certificate:
    from .stabilization import compare_phi_psi

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    cert = compare_phi_psi(n, p)
    computed = {
        "epsilon": cert.epsilon,
        "consistent": cert.ok,
        "columns_checked": cert.checked,
    }
    exp = {
        "consistent": {"value": True, "source": "definition"},
        "epsilon_in": {"value": [1, -1], "source": "definition"},
    }
    ok = cert.ok and cert.epsilon in (1, -1)
    return Certificate(
        "phi-vs-psi",
        {"n": n, "p": p},
        computed,
        exp,
        ok,
        signs={"suspension": list(cert.suspension_signs), "epsilon": cert.epsilon},
    )


def suite_tau_vanishing(params: dict) -> Certificate:
    from .stabilization import compare_phi_psi, double_stabilization_zero

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    eps = None
    if n + 1 <= 4:
        try:
            eps = compare_phi_psi(n, p).epsilon
        except ValueError:
            eps = None
    cert = double_stabilization_zero(n, p, epsilon_sign=eps)
    computed = cert.as_json()
    exp = {
        "max_abs_entry": {"value": 0, "source": "definition"},
        "tau_order": tau_order_expected(p),
    }
    ok = (
        cert.ok
        and computed["max_abs_entry"] == 0
        and computed["tau_order"] == exp["tau_order"]["value"]
    )
    return Certificate(
        "tau-vanishing",
        {"n": n, "p": p},
        computed,
        exp,
        ok,
        signs={"epsilon": eps},
    )


def suite_coinvariants(params: dict) -> Certificate:
    from .ash import build_ash_complex
    from .projective import MatrixGroup
    from .stabilization import CoinvariantComplex

    _require(params, "n", "p")
    n, p = params["n"], params["p"]
    coinv = CoinvariantComplex(
        build_ash_complex(n, p), MatrixGroup.special_linear(n, p)
    )
    hom = coinv.homology_dimensions()
    computed = {
        "orbit_counts": coinv.orbit_counts(),
        "dims": coinv.complex.dims,
        "homology": hom,
    }
    exp = {
        "h0": expected("coinvariant_h0", _np_key(params)),
        "positive_homology": {"value": [0] * (len(hom) - 1), "source": "classical"},
    }
    ok = hom[0] == exp["h0"]["value"] and hom[1:] == exp["positive_homology"]["value"]
    return Certificate("coinvariants", {"n": n, "p": p}, computed, exp, ok)


def suite_modular_symbols(params: dict) -> Certificate:
    from .modsym import euler_oracle_dim, level_table, table_csv

    max_level = params.get("level") or 5
    rows = level_table(range(1, max_level + 1))
    computed = {
        "levels": [
            {
                "N": r.N,
                "cosets": r.coset_count,
                "relation_rank": r.relation_rank,
                "dim_h1": r.dimension,
                "oracle": r.oracle,
                "pass": r.ok,
            }
            for r in rows
        ]
    }
    exp = {}
    ok = True
    for r in rows:
        key = str(r.N)
        try:
            exp[key] = expected("h1_dimension", key)
        except KeyError:
            exp[key] = {"value": euler_oracle_dim(r.N), "source": "oracle"}
        ok = ok and r.ok and r.dimension == exp[key]["value"]
    cert = Certificate("modular-symbols", {"level": max_level}, computed, exp, ok)
    out = params.get("out")
    if out:
        write_atomic(os.path.splitext(out)[0] + ".csv", table_csv(rows))
    return cert


def suite_nilmanifold(params: dict) -> Certificate:
    from .lie import chevalley_eilenberg_betti

    max_n = params.get("n") or 5
    if not 2 <= max_n <= 6:
        raise UsageError("nilmanifold rank must satisfy 2 <= n <= 6")
    computed = {}
    exp = {}
    ok = True
    for n in range(2, max_n + 1):
        betti = chevalley_eilenberg_betti(n)
        computed[str(n)] = betti
        try:
            exp[str(n)] = expected("nilpotent_betti", str(n))
            ok = ok and betti == exp[str(n)]["value"]
        except KeyError:
            exp[str(n)] = {"value": "palindromic, ends 1", "source": "classical"}
        ok = ok and betti == betti[::-1] and betti[-1] == 1
    return Certificate("nilmanifold", {"n": max_n}, computed, exp, ok)


def suite_lattice(params: dict) -> Certificate:
    from .quartic import (
        embedding_witness,
        is_member,
        min_pairwise_distance,
        search_members,
        unipotent_free_check,
    )

    h = params.get("height") or 2
    word_length = params.get("word_length") or 4
    members = search_members(h)
    all_member = all(is_member(m).ok for m in members)
    wc = unipotent_free_check(members, word_length)
    max_dev = 0.0
    for m in members:
        rep = embedding_witness(m)
        max_dev = max(max_dev, rep.unitarity_deviation)
    min_dist = min_pairwise_distance(members) if len(members) > 1 else None
    tol = expected("lattice", "unitarity_tolerance")
    computed = {
        "height": h,
        "member_count": len(members),
        "all_pass_membership": all_member,
        "word_length": word_length,
        "ball_size": wc.elements_examined,
        "unipotent_found": wc.unipotent_found,
        "max_unitarity_deviation": max_dev,
        "min_pairwise_distance": min_dist,
    }
    exp = {
        "unipotent_found": {"value": False, "source": "classical"},
        "unitarity_tolerance": tol,
    }
    ok = all_member and wc.ok and max_dev <= tol["value"]
    if min_dist is not None:
        ok = ok and min_dist > 0
    if h in (1, 2):
        key = f"member_count_h{h}"
        exp["member_count"] = expected("lattice", key)
        ok = ok and len(members) == exp["member_count"]["value"]
    if h == 2 and word_length == 4:
        exp["ball_size"] = expected("lattice", "ball_size_h2_len4")
        ok = ok and wc.elements_examined == exp["ball_size"]["value"]
    return Certificate(
        "lattice", {"height": h, "word_length": word_length}, computed, exp, ok
    )


SUITES = {
    "solomon-tits": suite_solomon_tits,
    "ash-exactness": suite_ash_exactness,
    "h0-iso": suite_h0_iso,
    "psi-chainmap": suite_psi_chainmap,
    "phi-vs-psi": suite_phi_vs_psi,
    "tau-vanishing": suite_tau_vanishing,
    "coinvariants": suite_coinvariants,
    "modular-symbols": suite_modular_symbols,
    "nilmanifold": suite_nilmanifold,
    "lattice": suite_lattice,
}

# parameter windows; anything outside is a usage error, not a crash
PARAM_LIMITS = {
    "solomon-tits": {"n": (2, 4), "p": (2, 5)},
    "ash-exactness": {"n": (2, 3), "p": (2, 5)},
    "h0-iso": {"n": (2, 3), "p": (2, 5)},
    "psi-chainmap": {"n": (2, 3), "p": (2, 3)},
    "phi-vs-psi": {"n": (2, 3), "p": (2, 3)},
    "tau-vanishing": {"n": (2, 2), "p": (2, 3)},
    "coinvariants": {"n": (2, 4), "p": (2, 3)},
    "modular-symbols": {"level": (1, 13)},
    "nilmanifold": {"n": (2, 6)},
    "lattice": {"height": (1, 2), "word_length": (0, 6)},
}


def validate_params(suite: str, params: dict) -> None:
    limits = PARAM_LIMITS[suite]
    for name, (lo, hi) in limits.items():
        v = params.get(name)
        if v is not None and not lo <= v <= hi:
            raise UsageError(f"{suite}: parameter {name}={v} outside [{lo}, {hi}]")
    if suite in ("solomon-tits", "ash-exactness", "h0-iso") and params.get("p") == 5:
        if params.get("n", 2) != 2:
            raise UsageError(f"{suite}: p=5 is supported at n=2 only")
    if suite == "coinvariants":
        n, p = params.get("n"), params.get("p")
        if (n, p) not in ((2, 2), (2, 3), (3, 2), (3, 3), (4, 2)):
            raise UsageError(
                "coinvariants: supported instances are (2,2),(2,3),(3,2),(3,3),(4,2)"
            )


def run_suite(suite: str, params: dict) -> Certificate:
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    params = {k: v for k, v in params.items() if v is not None}
    validate_params(suite, params)
    t0 = time.monotonic()
    cert = SUITES[suite](params)
    cert.wall_ms = int((time.monotonic() - t0) * 1000)
    cert.version = __version__
    cert.kernel = kernel.IMPLEMENTATION
    return cert


def _run_one(job):
    suite, params = job
    return run_suite(suite, params)


def load_config(path: str) -> list[tuple[str, dict]]:
    if path == "default":
        text = resources.files("steinlab").joinpath(DEFAULT_GRID).read_text()
    else:
        if not os.path.exists(path):
            raise UsageError(f"config file not found: {path}")
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    jobs = []
    for item in data.get("suites", []):
        jobs.append((item["suite"], item.get("params", {})))
    return jobs


def run_all(config_path: str, workers: int, out_dir: str | None) -> int:
    jobs = load_config(config_path)
    if not jobs:
        print("warning: empty suite grid; nothing to check")
        return 0
    for suite, params in jobs:
        if suite not in SUITES:
            raise UsageError(f"unknown suite {suite!r} in config")
        validate_params(suite, params)
    results: list[Certificate]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    failed = 0
    for cert in results:
        status = "pass" if cert.ok else "FAIL"
        label = " ".join(f"{k}={v}" for k, v in sorted(cert.parameters.items()))
        print(f"[{status}] {cert.suite:<16} {label:<24} {cert.wall_ms:>7} ms")
        if not cert.ok:
            failed += 1
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            name = cert.suite + (
                "-" + "-".join(str(v) for _, v in sorted(cert.parameters.items()))
                if cert.parameters
                else ""
            )
            write_atomic(os.path.join(out_dir, name + ".json"), cert.to_json())
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="steinlab",
        description="run exact verification suites and emit certificates",
    )
    ap.add_argument("--suite", choices=SUITE_NAMES, help="single suite to run")
    ap.add_argument("--n", type=int, help="ambient rank")
    ap.add_argument("--p", type=int, help="field characteristic (prime)")
    ap.add_argument("--level", type=int, help="maximum congruence level N")
    ap.add_argument("--height", type=int, help="coefficient height bound for the search")
    ap.add_argument("--word-length", type=int, dest="word_length",
                    help="maximum generator word length")
    ap.add_argument("--out", help="certificate output path (JSON)")
    ap.add_argument("--workers", type=int, default=None, help="worker pool size")
    ap.add_argument("--config", help="suite grid (JSON path, or 'default')")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("STEINLAB_WORKERS", "1"))
    try:
        if args.config:
            out_dir = args.out
            return run_all(args.config, workers, out_dir)
        if not args.suite:
            raise UsageError("either --suite or --config is required")
        params = {
            "n": args.n,
            "p": args.p,
            "level": args.level,
            "height": args.height,
            "word_length": args.word_length,
            "out": args.out,
        }
        cert = run_suite(args.suite, params)
        text = cert.to_json()
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        return 0 if cert.ok else 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
