"""``cyclet`` command-line front end.

    cyclet <command> [--config FILE] [--set key=value ...] [--format json|csv] [--out PATH]

Commands: solve, spectrum, harmonic, regge, critical, oracle-compare, scaling.
A run is described by one JSON document; ``--set`` overrides single fields
with dotted keys (``--set kinetics.A=0.5``).  Floats are written with 12
significant digits so identical configs give byte-identical output.

Exit codes: 0 success, 1 configuration or domain error, 2 numerical failure
(the partial payload is still written).

CSV columns per command:

    solve           level,Q,E,p0,r0,L,character
    spectrum        level,Q,multiplicity,E,r0,L,character
    harmonic        level,Q,E,multiplicity,patterns,nu
    regge           Q,E,E_squared,L
    critical        N,Q,y0,g_c,ratio_to_limit
    oracle-compare  N,Q,E_et,E_oracle,gap,character,method,converged
    scaling         N,Q,E,E_per_N
"""

from __future__ import annotations

import argparse
import copy
import io
import json
import math
import sys

from . import analytic, et_solver, oracle, oscillator
from .errors import DomainError, NumericalError
from .kernel import Character, Shape, make_finite_range_potential, make_power_kinetics, make_power_potential

COMMANDS = ("solve", "spectrum", "harmonic", "regge", "critical", "oracle-compare", "scaling")

CSV_COLUMNS = {
    "solve": ["level", "Q", "E", "p0", "r0", "L", "character"],
    "spectrum": ["level", "Q", "multiplicity", "E", "r0", "L", "character"],
    "harmonic": ["level", "Q", "E", "multiplicity", "patterns", "nu"],
    "regge": ["Q", "E", "E_squared", "L"],
    "critical": ["N", "Q", "y0", "g_c", "ratio_to_limit"],
    "oracle-compare": ["N", "Q", "E_et", "E_oracle", "gap", "character", "method", "converged"],
    "scaling": ["N", "Q", "E", "E_per_N"],
}

DEFAULTS = {"d": 3, "output": {"format": "json", "path": None}}

ALIASES = {"N": "n", "D": "d", "format": "output.format", "out": "output.path"}


class ConfigError(DomainError):
    pass


# --------------------------------------------------------------------------
# configuration


def _set_dotted(cfg, key, value):
    key = ALIASES.get(key, key)
    parts = key.split(".")
    node = cfg
    for p in parts[:-1]:
        nxt = node.get(p)
        if not isinstance(nxt, dict):
            nxt = {}
            node[p] = nxt
        node = nxt
    node[parts[-1]] = value


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config(path=None, overrides=(), command=None, fmt=None, out=None):
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}:1:1: config must be a JSON object")
        for k, v in data.items():
            if k == "output" and isinstance(v, dict):
                cfg["output"].update(v)
            else:
                _set_dotted(cfg, k, v)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        k, v = item.split("=", 1)
        _set_dotted(cfg, k.strip(), _parse_value(v.strip()))
    if command is not None:
        cfg["command"] = command
    if fmt is not None:
        cfg["output"]["format"] = fmt
    if out is not None:
        cfg["output"]["path"] = out
    return cfg


def _field(cfg, path, kind=float, required=True, default=None):
    node = cfg
    for p in path.split("."):
        if not isinstance(node, dict) or p not in node:
            if required:
                raise ConfigError(f"field '{path}': missing")
            return default
        node = node[p]
    if kind is float:
        if isinstance(node, bool) or not isinstance(node, (int, float)):
            raise ConfigError(f"field '{path}': expected a number, got {node!r}")
        return float(node)
    if kind is int:
        if isinstance(node, bool) or not isinstance(node, (int, float)) or int(node) != node:
            raise ConfigError(f"field '{path}': expected an integer, got {node!r}")
        return int(node)
    return node


def _guard(path, fn, *args):
    try:
        return fn(*args)
    except DomainError as exc:
        raise ConfigError(f"field '{path}': {exc}") from None


def _kinetics(cfg):
    A = _field(cfg, "kinetics.A")
    B = _field(cfg, "kinetics.B")
    return _guard("kinetics", make_power_kinetics, A, B)


def _potential(cfg):
    kind = _field(cfg, "potential.kind", kind=str)
    if kind == "power":
        return _guard("potential", make_power_potential, _field(cfg, "potential.C"), _field(cfg, "potential.F"))
    if kind == "finite":
        g = _field(cfg, "potential.g")
        shape = _guard("potential.shape", Shape.parse, _field(cfg, "potential.shape", kind=str))
        a = _field(cfg, "potential.a", required=False, default=1.0)
        return _guard("potential", make_finite_range_potential, g, shape, a)
    raise ConfigError(f"field 'potential.kind': expected 'power' or 'finite', got {kind!r}")


def _N(cfg, default=None):
    N = _field(cfg, "n", kind=int, required=default is None, default=default)
    if N < 2:
        raise ConfigError(f"field 'n': particle number must be >= 2, got {N}")
    return N


def _D(cfg):
    D = _field(cfg, "d", kind=int)
    if D < 1:
        raise ConfigError(f"field 'd': dimension must be >= 1, got {D}")
    return D


def _levels(cfg, N, D, default="ground"):
    """List of (QuantumNumbers, multiplicity or None) from the level selection."""
    sel = cfg.get("level", default)
    if sel == "ground":
        return [(oscillator.QuantumNumbers.ground(N, D), 1)]
    if isinstance(sel, dict) and "lowest" in sel:
        K = _field(cfg, "level.lowest", kind=int)
        if K < 1:
            raise ConfigError(f"field 'level.lowest': must be >= 1, got {K}")
        return [(lv.representative, lv.multiplicity) for lv in oscillator.enumerate_levels(N, D, K)]
    if isinstance(sel, dict) and "n" in sel and "l" in sel:
        q = _guard("level", oscillator.QuantumNumbers, N, D, tuple(sel["n"]), tuple(sel["l"]))
        return [(q, None)]
    raise ConfigError("field 'level': expected \"ground\", {\"lowest\": K} or {\"n\": [...], \"l\": [...]}")


def _lowest(cfg, default):
    if "level" not in cfg:
        return default
    sel = cfg["level"]
    if isinstance(sel, dict) and "lowest" in sel:
        K = _field(cfg, "level.lowest", kind=int)
        if K < 1:
            raise ConfigError(f"field 'level.lowest': must be >= 1, got {K}")
        return K
    if sel == "ground":
        return 1
    raise ConfigError("field 'level': this command needs \"ground\" or {\"lowest\": K}")


def _n_list(cfg):
    if "n_list" in cfg:
        values = _field(cfg, "n_list", kind=list)
        if not isinstance(values, list) or not values:
            raise ConfigError("field 'n_list': expected a non-empty list of integers")
        out = []
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, int) or v < 2:
                raise ConfigError(f"field 'n_list[{i}]': expected an integer >= 2, got {v!r}")
            out.append(v)
        return out
    lo = _field(cfg, "n_min", kind=int, required=False, default=2)
    hi = _field(cfg, "n_max", kind=int)
    if lo < 2 or hi < lo:
        raise ConfigError(f"fields 'n_min'/'n_max': need 2 <= n_min <= n_max, got {lo}, {hi}")
    return list(range(lo, hi + 1))


def validate(cfg):
    command = cfg.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"field 'command': expected one of {', '.join(COMMANDS)}, got {command!r}")
    fmt = cfg["output"].get("format")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"field 'output.format': expected json or csv, got {fmt!r}")


# --------------------------------------------------------------------------
# commands


def _solution_record(index, sol):
    return {
        "level": index,
        "Q": sol.Q,
        "E": sol.E,
        "p0": sol.p0,
        "r0": sol.r0,
        "L": sol.L,
        "gamma": list(sol.gamma),
        "character": str(sol.character),
    }


def _solution_diag(sol):
    return {
        "residual_virial": sol.residual_virial,
        "residual_product": sol.residual_product,
        "roots": [[r, e] for r, e in sol.all_roots],
    }


def cmd_solve(cfg, out):
    kin, pot, N, D = _kinetics(cfg), _potential(cfg), _N(cfg), _D(cfg)
    for i, (q, _mult) in enumerate(_levels(cfg, N, D)):
        sol = et_solver.solve(kin, pot, N, et_solver.global_quantum_number(q))
        rec = _solution_record(i, sol)
        rec["n"], rec["l"] = list(q.n), list(q.l)
        out.results.append(rec)
        out.diagnostics.append(_solution_diag(sol))


def cmd_spectrum(cfg, out):
    kin, pot, N, D = _kinetics(cfg), _potential(cfg), _N(cfg), _D(cfg)
    K = _lowest(cfg, 10)
    for i, lv in enumerate(oscillator.enumerate_levels(N, D, K)):
        sol = et_solver.solve(kin, pot, N, lv.Q)
        out.results.append(
            {
                "level": i,
                "Q": sol.Q,
                "multiplicity": lv.multiplicity,
                "E": sol.E,
                "r0": sol.r0,
                "L": sol.L,
                "character": str(sol.character),
            }
        )
        out.diagnostics.append(_solution_diag(sol))


def cmd_harmonic(cfg, out):
    m = _field(cfg, "harmonic.m", required=False, default=1.0)
    omega = _field(cfg, "harmonic.omega", required=False, default=1.0)
    if not (m > 0 and omega > 0):
        raise ConfigError(f"fields 'harmonic.m'/'harmonic.omega': must be positive, got {m}, {omega}")
    N, D = _N(cfg), _D(cfg)
    K = _lowest(cfg, 8)
    for i, lv in enumerate(oscillator.enumerate_levels(N, D, K)):
        out.results.append(
            {
                "level": i,
                "Q": lv.Q,
                "E": omega * lv.energy_factor,
                "multiplicity": lv.multiplicity,
                "patterns": len(lv.tuples),
                "nu": list(lv.tuples[0]),
                "nu_patterns": [list(t) for t in lv.tuples],
            }
        )
    out.diagnostics.append({"ground_state_energy": oscillator.ground_state_energy(m, omega, N, D)})


def cmd_regge(cfg, out):
    sigma = _field(cfg, "regge.sigma", required=False, default=1.0)
    if not sigma > 0:
        raise ConfigError(f"field 'regge.sigma': must be positive, got {sigma}")
    N = _N(cfg)
    K = _lowest(cfg, 10)
    kin, pot = make_power_kinetics(1.0, 1.0), make_power_potential(sigma, 1.0)
    for Q, E, E2, L in analytic.glueball_regge_table(sigma, N, K):
        out.results.append({"Q": Q, "E": E, "E_squared": E2, "L": L})
        sol = et_solver.solve(kin, pot, N, Q)
        out.diagnostics.append({"regge_ratio": E2 / (4.0 * N * sigma * Q), "L_solver": sol.L, "E_solver": sol.E})


def cmd_critical(cfg, out):
    A = _field(cfg, "kinetics.A")
    B = _field(cfg, "kinetics.B")
    _guard("kinetics", make_power_kinetics, A, B)
    shape_name = cfg.get("shape", (cfg.get("potential") or {}).get("shape"))
    if shape_name is None:
        raise ConfigError("field 'shape': missing (or give potential.shape)")
    shape = _guard("shape", Shape.parse, shape_name)
    a = _field(cfg, "potential.a", required=False, default=1.0)
    D = _D(cfg)
    limit = analytic.critical_coupling_limit(A, B, shape, D, a)
    for N in _n_list(cfg):
        Q = et_solver.ground_state_Q(N, D)
        res = analytic.critical_coupling(A, B, shape, N, Q, a)
        out.results.append({"N": N, "Q": Q, "y0": res.y0, "g_c": res.g_c, "ratio_to_limit": res.g_c / limit})
    out.results.append({"N": "inf", "Q": None, "y0": analytic.critical_root(shape, B), "g_c": limit, "ratio_to_limit": 1.0})


def cmd_oracle_compare(cfg, out):
    kin, pot = _kinetics(cfg), _potential(cfg)
    N = _N(cfg, default=2)
    if N != 2:
        raise ConfigError(f"field 'n': the oracle exists only for N = 2, got {N}")
    D = _D(cfg)
    if D != 3:
        raise ConfigError(f"field 'd': the oracle is three-dimensional, got {D}")
    Q = et_solver.ground_state_Q(2, 3)
    prob = oracle.reduce_two_body(kin, pot)
    res = oracle.numerov_ground_state(prob) if kin.B == 2 else oracle.basis_diagonalize(prob)
    rec = {"N": 2, "Q": Q, "E_et": None, "E_oracle": res.E, "gap": None, "character": None,
           "method": res.method, "converged": res.converged}
    out.results.append(rec)
    out.diagnostics.append({k: v for k, v in res.meta.items() if k != "history"})
    sol = et_solver.solve(kin, pot, 2, Q)
    gap = sol.E - res.E
    rec.update({"E_et": sol.E, "gap": gap, "character": str(sol.character)})
    out.diagnostics[-1]["gap_sign_consistent"] = _gap_consistent(sol.character, gap)


def _gap_consistent(character, gap, tol=1e-6):
    if character is Character.UPPER_BOUND:
        return gap >= -tol
    if character is Character.LOWER_BOUND:
        return gap <= tol
    if character is Character.EXACT:
        return abs(gap) <= tol
    return True


def cmd_scaling(cfg, out):
    kin, pot, D = _kinetics(cfg), _potential(cfg), _D(cfg)
    N_max = _field(cfg, "n_max", kind=int)
    if N_max < 4:
        raise ConfigError(f"field 'n_max': must be >= 4, got {N_max}")
    for N, e_per in et_solver.asymptotic_scaling_check(kin, pot, D, N_max):
        out.results.append({"N": N, "Q": et_solver.ground_state_Q(N, D), "E": e_per * N, "E_per_N": e_per})


HANDLERS = {
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "harmonic": cmd_harmonic,
    "regge": cmd_regge,
    "critical": cmd_critical,
    "oracle-compare": cmd_oracle_compare,
    "scaling": cmd_scaling,
}


# --------------------------------------------------------------------------
# output


class Output:
    def __init__(self, command, cfg):
        self.command = command
        self.cfg = cfg
        self.results = []
        self.diagnostics = []
        self.error = None


def _round(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def _sorted(x):
    if isinstance(x, dict):
        return {k: _sorted(x[k]) for k in sorted(x)}
    return x


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, (list, tuple)):
        return " ".join(_fmt(v) for v in x)
    return str(x)


def render(out):
    if out.cfg["output"]["format"] == "csv":
        buf = io.StringIO()
        cols = CSV_COLUMNS[out.command]
        buf.write(",".join(cols) + "\n")
        for rec in out.results:
            buf.write(",".join(_fmt(rec.get(c)) for c in cols) + "\n")
        return buf.getvalue()
    # the destination is not part of the run, so file and stdout output agree
    echo = copy.deepcopy(out.cfg)
    echo["output"].pop("path", None)
    payload = {
        "command": out.command,
        "config_echo": _sorted(echo),
        "results": out.results,
        "diagnostics": out.diagnostics,
    }
    if out.error is not None:
        payload["error"] = out.error
    return json.dumps(_round(payload), indent=2) + "\n"


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="cyclet", description="Envelope-theory solver for cyclic N-body systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="FILE", help="JSON run configuration")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config field (dotted keys, JSON values)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", metavar="PATH")
    return p


def run(arguments):
    """Execute one CLI invocation and return the exit code."""
    try:
        args = build_parser().parse_args(arguments)
    except SystemExit as exc:
        # usage errors are configuration errors
        return 0 if exc.code == 0 else 1
    try:
        cfg = load_config(args.config, args.overrides, args.command, args.format, args.out)
        validate(cfg)
    except DomainError as exc:
        print(f"cyclet: {exc}", file=sys.stderr)
        return 1
    out = Output(cfg["command"], cfg)
    code = 0
    try:
        HANDLERS[out.command](cfg, out)
    except DomainError as exc:
        print(f"cyclet: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"cyclet: numerical failure: {exc}", file=sys.stderr)
        out.error = {"type": type(exc).__name__, "message": str(exc)}
        best = getattr(exc, "best_E", None)
        if best is not None:
            out.error["best_E"] = best
        code = 2
        if cfg["output"]["format"] == "csv":
            # CSV has no slot for the failure payload
            print(json.dumps(_round(out.error), sort_keys=True), file=sys.stderr)
    _write(render(out), cfg["output"]["path"])
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
