#!/usr/bin/env python
# coding: utf-8

# Copyright 2016-2017, Nigel Small
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from __future__ import print_function

from argparse import ArgumentParser
from json import dumps
from logging import DEBUG, INFO, getLogger
from sys import argv, exit, stderr, stdout

import numpy as np

from wavicle.analysis import (CLOSED_FORM, MODEL_TAGS, MONTE_CARLO, ROUTES, SweepSpec, evaluate, run_sweep,
                              tur_bound, tur_check, wave_tur_bound)
from wavicle.closed_form import power_stats as closed_power_stats
from wavicle.config import RunConfig, output_path
from wavicle.core import (MODELS, PARTICLE, UNDEFINED, WAVE, ConsistencyError, EngineParams, ParameterError,
                          SimulationError, SolverError, WaveParams, validate)
from wavicle.estimators import TrajectoryConfig
from wavicle.numbers import Z_SCORE_FAILURE
from wavicle.particle.gillespie import estimate_power_stats as estimate_jumps, simulate_jumps
from wavicle.verify import CHECKS, run_checks
from wavicle.wave.trajectory import estimate_power_stats as estimate_wave, simulate_wave
from wavicle.watcher import watch


log = getLogger("wavicle.cli")

SUCCESS = 0
VERIFICATION_FAILURE = 1
USAGE_ERROR = 2
IO_ERROR = 3

DEFAULTS = RunConfig(g=1.0, kappa=1.0, nh=2.0, nc=0.1, delta=1.0)

META_KEYS = ("config", "verbose", "very_verbose")


def usage(out=stdout):
    print("usage: wavicle point [options]", file=out)
    print("       wavicle sweep [options]", file=out)
    print("       wavicle simulate {wave,particle} [options]", file=out)
    print("       wavicle verify [--quick] [--grid-seed N] [--tolerance NAME=VALUE ...]", file=out)


def number(value):
    """ Twelve significant digits, or a tag for missing and undefined
    values.
    """
    if value is None:
        return ""
    if value is UNDEFINED:
        return "undefined"
    return "%.12g" % value


def json_number(value):
    if value is UNDEFINED:
        return "undefined"
    if value is None:
        return None
    return float(number(value))


def _parser(prog, command, usage_line):
    parser = ArgumentParser(prog, usage="%(prog)s {:s} {:s}".format(command, usage_line))
    parser.add_argument("-c", "--config", help="load settings from a key = value file")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-vv", "--very-verbose", action="store_true")
    return parser


def _add_params(parser):
    parser.add_argument("--g", type=float)
    parser.add_argument("--kappa", type=float, help="both bath couplings")
    parser.add_argument("--kappa-h", type=float)
    parser.add_argument("--kappa-c", type=float)
    parser.add_argument("--nh", type=float, help="hot bath occupation")
    parser.add_argument("--nc", type=float, help="cold bath occupation")
    parser.add_argument("--delta", type=float, help="detuning omega_h - omega_c")
    parser.add_argument("--omega-h", type=float)
    parser.add_argument("--omega-c", type=float)
    parser.add_argument("--th", type=float, help="hot bath temperature")
    parser.add_argument("--tc", type=float, help="cold bath temperature")


def _resolve(parser, args):
    """ Parse `args`, start logging if asked and merge defaults, config
    file and explicit flags, in increasing order of precedence.
    """
    parsed = parser.parse_args(args)
    if parsed.verbose:
        watch("wavicle", level=INFO)
    if parsed.very_verbose:
        watch("wavicle", level=DEBUG)
    config = RunConfig(DEFAULTS)
    if parsed.config:
        known = set(vars(parsed)) | set(DEFAULTS) | {"command"}
        config = config.merged(RunConfig.load(parsed.config, known))
        config.pop("command", None)
    flags = {key: value for key, value in vars(parsed).items() if key not in META_KEYS}
    return parsed, config.merged(flags)


def resolve_params(config):
    """ Build validated parameters from either (Δ, n̄_h, n̄_c) or
    (Ω_h, Ω_c, T_h, T_c), and rewrite `config` in the canonical
    (Δ, n̄_h, n̄_c) form.
    """
    kappa = config.get_float("kappa")
    kappa_h = config.get_float("kappa_h", kappa)
    kappa_c = config.get_float("kappa_c", kappa)
    g = config.get_float("g")
    thermal = [config.get_float(name) for name in ("omega_h", "omega_c", "th", "tc")]
    if any(value is not None for value in thermal):
        if any(value is None for value in thermal):
            raise ParameterError("thermal parameters need all of --omega-h, --omega-c, --th and --tc")
        params = validate(EngineParams.thermal(g, kappa_h, kappa_c, *thermal))
    else:
        params = validate(EngineParams.direct(g, kappa_h, kappa_c, config.get_float("nh"), config.get_float("nc"),
                                              config.get_float("delta")))
    for name in ("kappa", "omega_h", "omega_c", "th", "tc"):
        config.pop(name, None)
    config.update(g=params.g, kappa_h=params.kappa_h, kappa_c=params.kappa_c, nh=params.nbar_h, nc=params.nbar_c,
                  delta=params.delta)
    return params


def echo(command, config, out):
    print("# command = %s" % command, file=out)
    for line in config.to_lines(prefix="# "):
        print(line, file=out)


def _pairs(items, what):
    pairs = []
    for item in items:
        key, eq, value = item.partition("=")
        if not eq or not key.strip() or not value.strip():
            raise ParameterError("%s must be given as NAME=VALUE (got %r)" % (what, item))
        pairs.append((key.strip(), value.strip()))
    return pairs


def _models(config):
    models = config.get_list("models", MODELS)
    unknown = [model for model in models if model not in MODELS]
    if unknown:
        raise ParameterError("unknown models %s (choose from %s)" % (", ".join(unknown), ", ".join(MODELS)))
    return models


def _routes(config, models):
    """ Map each model to its list of routes, closed form by default.
    """
    routes = {model: [] for model in models}
    for model, route in _pairs(config.get_list("route"), "routes"):
        if model not in routes:
            raise ParameterError("route given for model %r, which was not requested" % model)
        if route not in ROUTES[model]:
            raise ParameterError("route %r is not available for the %s model (choose from %s)" %
                                 (route, model, ", ".join(ROUTES[model])))
        routes[model].append(route)
    for model in models:
        if not routes[model]:
            routes[model].append(CLOSED_FORM)
    return routes


def point(prog, command, *args, out=stdout):
    parser = _parser(prog, command, "[options]")
    _add_params(parser)
    parser.add_argument("--models", help="comma-separated subset of quantum, wave, particle")
    parser.add_argument("--route", action="append", help="MODEL=ROUTE, repeatable")
    parser.add_argument("--offset-c", type=float, help="wave noise offset C")
    parser.add_argument("--seed", type=int, help="seed for Monte Carlo routes")
    parser.add_argument("--json", action="store_true", default=None)
    parsed, config = _resolve(parser, args)
    params = resolve_params(config)
    models = _models(config)
    routes = _routes(config, models)
    offset_c = config.get_float("offset_c", 0.0)
    seed = config.get_int("seed", 0)
    config.update(models=models, offset_c=offset_c, seed=seed)
    as_json = config.get("json", "") in ("True", "true", "1")

    results = []
    for model in models:
        for route in routes[model]:
            trajectory_config = TrajectoryConfig.for_params(params, seed=seed) if route == MONTE_CARLO else None
            stats = evaluate(params, model, route, offset_c, trajectory_config)
            results.append((model, route, stats))
    deviations = []
    for model in models:
        own = [(route, stats) for m, route, stats in results if m == model]
        for route, stats in own[1:]:
            reference_route, reference = own[0]
            deviations.append((model, route, reference_route,
                               _relative(stats.mean_power, reference.mean_power),
                               _relative(stats.zero_freq_noise, reference.zero_freq_noise)))
    bounds = (tur_bound(params), wave_tur_bound(params))

    if as_json:
        document = {
            "config": dict(config.items()),
            "results": [{"model": model, "route": route, "power": json_number(stats.mean_power),
                         "noise": json_number(stats.zero_freq_noise), "fano": json_number(stats.fano)}
                        for model, route, stats in results],
            "deviations": [{"model": model, "route": route, "reference": reference,
                            "power": json_number(power), "noise": json_number(noise)}
                           for model, route, reference, power, noise in deviations],
            "tur_bound": json_number(bounds[0]),
            "tur_bound_wave": json_number(bounds[1]),
        }
        print(dumps(document, indent=2, sort_keys=True), file=out)
        return SUCCESS

    echo(command, config, out)
    print("%-9s %-12s %-20s %-20s %-20s" % ("model", "route", "power", "noise", "fano"), file=out)
    for model, route, stats in results:
        print("%-9s %-12s %-20s %-20s %-20s" % (model, route, number(stats.mean_power),
                                                 number(stats.zero_freq_noise), number(stats.fano)), file=out)
    for model, route, reference, power, noise in deviations:
        print("deviation %s %s vs %s: power %s, noise %s" % (model, route, reference, number(power), number(noise)),
              file=out)
    for model, route, stats in results:
        report = tur_check(params, stats, model)
        print("tur %s %s: satisfied %s" % (model, route, report.satisfied), file=out)
    print("tur_bound %s" % number(bounds[0]), file=out)
    print("tur_bound_wave %s" % number(bounds[1]), file=out)
    return SUCCESS


def _relative(value, reference):
    if reference == 0:
        return 0.0 if value == 0 else float("inf")
    return abs(value - reference) / abs(reference)


def write_csv(result, f):
    f.write(",".join(result.columns) + "\n")
    for row in result.rows:
        cells = []
        for column in result.columns:
            value = row[column]
            model = _column_model(column)
            if value is None and model in row["errors"]:
                cells.append("failed")
            else:
                cells.append(number(value))
        f.write(",".join(cells) + "\n")


def _column_model(column):
    for model, tag in MODEL_TAGS.items():
        if column.endswith("_" + tag):
            return model
    return None


def write_json(result, f):
    rows = []
    for row in result.rows:
        rows.append(dict((column, json_number(row[column])) for column in result.columns))
        rows[-1]["errors"] = dict(row["errors"])
    f.write(dumps({"columns": result.columns, "rows": rows}, indent=2, sort_keys=True) + "\n")


def sweep(prog, command, *args, out=stdout):
    parser = _parser(prog, command, "[options]")
    _add_params(parser)
    parser.add_argument("--axis", choices=("g", "nh"), help="sweep g/kappa_h or the hot occupation")
    parser.add_argument("--start", type=float)
    parser.add_argument("--stop", type=float)
    parser.add_argument("--num", type=int)
    parser.add_argument("--models")
    parser.add_argument("--route", action="append", help="MODEL=ROUTE, repeatable")
    parser.add_argument("--offset-c", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--n-traj", type=int)
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("-o", "--output", help="output file, relative to $WAVICLE_OUTPUT_DIR if set")
    parser.add_argument("--workers", type=int)
    parsed, config = _resolve(parser, args)
    params = resolve_params(config)
    axis = config.get("axis") or "g"
    start = config.get_float("start", 0.1)
    stop = config.get_float("stop", 100.0)
    num = config.get_int("num", 61)
    if num < 0 or start <= 0 or stop <= 0:
        raise ParameterError("sweep needs positive --start and --stop and a non-negative --num")
    models = _models(config)
    routes = {model: chosen[-1] for model, chosen in _routes(config, models).items()}
    trajectory = {"seed": config.get_int("seed", 0)}
    if config.get_int("n_traj") is not None:
        trajectory["n_traj"] = config.get_int("n_traj")
    fmt = config.get("format") or "csv"
    config.update(axis=axis, start=start, stop=stop, num=num, models=models, format=fmt,
                  route=["%s=%s" % item for item in sorted(routes.items())])
    grid = np.logspace(np.log10(start), np.log10(stop), num) if num else ()
    spec = SweepSpec(axis, grid, params, models, routes, config.get_float("offset_c", 0.0), trajectory,
                     config.get_int("workers", 1))
    result = run_sweep(spec)
    writer = write_json if fmt == "json" else write_csv
    path = config.get("output")
    echo(command, config, out)
    if path:
        with open(output_path(path), "w") as f:
            writer(result, f)
        log.info("Wrote %d rows to %s", len(result.rows), output_path(path))
    else:
        writer(result, out)
    return SUCCESS


def simulate(prog, command, *args, out=stdout):
    parser = _parser(prog, command, "{wave,particle} [options]")
    parser.add_argument("model", choices=(WAVE, PARTICLE))
    _add_params(parser)
    parser.add_argument("--offset-c", type=float)
    parser.add_argument("--n-traj", type=int)
    parser.add_argument("--t-total", type=float)
    parser.add_argument("--t-burn", type=float)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--record-dt", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--dump", help="write trajectory 0 as CSV")
    parsed, config = _resolve(parser, args)
    params = resolve_params(config)
    settings = {}
    for name, read in (("n_traj", config.get_int), ("t_total", config.get_float), ("t_burn", config.get_float),
                       ("dt", config.get_float), ("record_dt", config.get_float), ("seed", config.get_int),
                       ("workers", config.get_int)):
        value = read(name)
        if value is not None:
            settings[name] = value
    if "t_burn" in settings and "t_total" not in settings:
        settings["t_total"] = settings["t_burn"] + 2000.0 / min(params.kappa_h, params.kappa_c)
    trajectory_config = TrajectoryConfig.for_params(params, **settings)
    for name in ("n_traj", "t_total", "t_burn", "dt", "record_dt", "seed", "workers"):
        config[name] = getattr(trajectory_config, name)
    model = parsed.model
    if model == WAVE:
        subject = WaveParams(params, config.get_float("offset_c", 0.0))
        config["offset_c"] = subject.offset_c
        simulator, estimator = simulate_wave, estimate_wave
    else:
        subject = params
        simulator, estimator = simulate_jumps, estimate_jumps

    def run(dump):
        return estimator(simulator(subject, trajectory_config, dump))

    path = config.get("dump")
    if path:
        with open(output_path(path), "w") as dump:
            estimate = run(dump)
    else:
        estimate = run(None)
    target = closed_power_stats(subject, model)
    z_power, z_noise = estimate.z_scores(target)
    echo(command, config, out)
    print("model %s" % model, file=out)
    print("power %s ± %s (closed form %s, z = %.3f)" % (number(estimate.mean_power.mean),
                                                        number(estimate.mean_power.std_error),
                                                        number(target.mean_power), z_power), file=out)
    print("noise %s ± %s (closed form %s, z = %.3f)" % (number(estimate.zero_freq_noise.mean),
                                                        number(estimate.zero_freq_noise.std_error),
                                                        number(target.zero_freq_noise), z_noise), file=out)
    print("fano %s" % number(estimate.stats.fano), file=out)
    if max(abs(z_power), abs(z_noise)) > Z_SCORE_FAILURE:
        log.error("Monte Carlo estimate deviates from the closed form by more than %g standard errors",
                  Z_SCORE_FAILURE)
        return VERIFICATION_FAILURE
    return SUCCESS


def verify(prog, command, *args, out=stdout):
    parser = _parser(prog, command, "[--quick] [--grid-seed N] [--tolerance NAME=VALUE ...]")
    parser.add_argument("--quick", action="store_true", default=None, help="closed-form and moment checks only")
    parser.add_argument("--grid-seed", type=int)
    parser.add_argument("--tolerance", action="append", help="NAME=VALUE, repeatable")
    parser.add_argument("--check", action="append", choices=list(CHECKS), help="run only the named checks")
    parsed, config = _resolve(parser, args)
    quick = config.get("quick", "") in ("True", "true", "1")
    grid_seed = config.get_int("grid_seed", 0)
    tolerances = dict(_pairs(config.get_list("tolerance"), "tolerances"))
    config.update(quick=quick, grid_seed=grid_seed)
    results = run_checks(quick=quick, grid_seed=grid_seed, tolerances=tolerances,
                         names=config.get_list("check") or None)
    echo(command, config, out)
    for result in results:
        print("%-24s %-4s %s" % (result.name, "pass" if result.passed else "FAIL", result.detail), file=out)
    failed = [result.name for result in results if not result.passed]
    print("%d passed, %d failed%s" % (len(results) - len(failed), len(failed),
                                      (": " + ", ".join(failed)) if failed else ""), file=out)
    return VERIFICATION_FAILURE if failed else SUCCESS


COMMANDS = {
    "point": point,
    "sweep": sweep,
    "simulate": simulate,
    "verify": verify,
}


def dispatch(args, out=stdout, err=stderr):
    """ Run the command named by `args[1]` and return its exit code.
    """
    if len(args) < 2 or args[1] not in COMMANDS:
        usage(out if len(args) < 2 or args[1] == "help" else err)
        return SUCCESS if len(args) < 2 or args[1] == "help" else USAGE_ERROR
    try:
        return COMMANDS[args[1]](*args, out=out)
    except ParameterError as error:
        print("%s %s: %s" % (args[0], args[1], error), file=err)
        return USAGE_ERROR
    except OSError as error:
        print("%s %s: %s" % (args[0], args[1], error), file=err)
        return IO_ERROR
    except (SolverError, ConsistencyError, SimulationError) as error:
        log.error("%s: %s", type(error).__name__, error)
        print("%s %s: %s" % (args[0], args[1], error), file=err)
        return VERIFICATION_FAILURE
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else USAGE_ERROR


def main():
    argv[0] = "wavicle"
    exit(dispatch(argv))


if __name__ == "__main__":
    main()
