#!/usr/bin/python3
# -*- coding: utf-8 -*-

##
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
##

import copy
import functools
import getopt
import json
import logging
import logging.handlers
import math
import sys
from os import environ, path

import numpy as np
import yaml

from fracdyn import version as fracdyn_version, version_date as fracdyn_version_date
from fracdyn.frac_utils import FracException, SampledFunction, UniformGrid, deep_get, populate_dict
from fracdyn.linode import CAPUTO, RIEMANN_LIOUVILLE, LinearProblem, solve_linear
from fracdyn.operators import caputo_derivative_num, frac_integral_num, gl_derivative_num, rl_derivative_num
from fracdyn.roughheston import McRun, RoughHestonParams, simulate
from fracdyn.solver import FracIVP, solve
from fracdyn.specialfn import MLParams, mittag_leffler
from fracdyn.stability import classify_spectrum, classify_system, ml_decay_probe, region_rows, \
    stability_region_sample
from fracdyn.tautochrone import AbelProblem, abel_forward, curve_from_arclength, solve_abel

__author__ = "fracdyn developers"

COMMANDS = ("ml", "differint", "solve", "convergence", "stability", "tautochrone", "heston")
NUMERIC_SECTIONS = ("specialfn", "solver", "stability")
FORMATS = ("csv", "json")

# long options of every command, without the common ones
command_options = {
    "ml": ["alpha=", "beta=", "z="],
    "differint": ["input=", "op=", "alpha=", "rule="],
    "solve": ["kind=", "alpha=", "method=", "analytic", "rhs=", "tau=", "T=", "datum=", "corrector-iterations="],
    "convergence": ["preset=", "method=", "alpha=", "taus="],
    "stability": ["alpha=", "matrix=", "eig=", "region=", "probe=", "kind="],
    "tautochrone": ["T=", "g=", "ymax=", "n="],
    "heston": ["model=", "alpha=", "kappa=", "theta=", "xi=", "rho=", "v0=", "s0=", "mu=", "tau=", "T=", "paths=",
               "seed=", "dump-paths=", "truncation="],
}

convergence_presets = {
    "linear-caputo": {"kind": CAPUTO, "rhs": "linear:lambda=-1", "datum": 1.0, "T": 1.0},
    "linear-rl": {"kind": RIEMANN_LIOUVILLE, "rhs": "linear:lambda=-1", "datum": 1.0, "T": 1.0},
    "mlnonlin": {"kind": CAPUTO, "rhs": "mlnonlin:lambda=-1,c=1", "datum": 1.0, "T": 1.0},
}


class CliUsageError(FracException):
    exit_code = 2


def to_float(value, name):
    """Numbers from flags or config. Accepts 'a^b' so steps can be written as 2^-10"""
    if value is None:
        raise CliUsageError("'{}' is required".format(name))
    if isinstance(value, str):
        text = value.strip()
        base, caret, exponent = text.partition("^")
        try:
            return float(base) ** float(exponent) if caret else float(text)
        except ValueError:
            raise CliUsageError("'{}' expects a number, got '{}'".format(name, value))
    return float(value)


def to_int(value, name):
    number = to_float(value, name)
    if number != int(number):
        raise CliUsageError("'{}' expects an integer, got '{}'".format(name, value))
    return int(number)


def to_list(value, name):
    if isinstance(value, (list, tuple)):
        return list(value)
    if value is None or not str(value).strip():
        raise CliUsageError("'{}' expects a non empty comma separated list".format(name))
    return [item.strip() for item in str(value).split(",") if item.strip()]


def _key_values(text):
    out = {}
    for item in filter(None, (i.strip() for i in text.split(","))):
        key, equal, value = item.partition("=")
        if not equal:
            raise CliUsageError("expected key=value in '{}'".format(text))
        out[key.strip()] = to_float(value, key.strip())
    return out


def build_rhs(spec, alpha, dimension):
    """
    Right hand side f(t, u) from its registry name:
        linear:lambda=L[,forcing=F]   L u + F
        logistic:r=R,K=K              R u (1 - u/K)
        mlnonlin:lambda=L,c=C         L u + C (u^2 - E_alpha(L t^alpha)^2), solved by E_alpha(L t^alpha) from u0=1
        poly:c0,c1,...                c0 + c1 u + c2 u^2 + ...
        matrix:a11,a12;a21,a22        A u
    :return: (rhs, lam, forcing); lam and forcing are set only for linear right hand sides
    """
    name, _, args = str(spec).partition(":")
    name = name.strip().lower()
    if name == "linear":
        kw = _key_values(args)
        lam, forcing = kw.get("lambda", -1.0), kw.get("forcing", 0.0)
        return (lambda t, u: lam * u + forcing), lam, forcing
    if name == "logistic":
        kw = _key_values(args)
        r, k = kw.get("r", 1.0), kw.get("K", 1.0)
        if k == 0:
            raise CliUsageError("logistic capacity K must be non zero")
        return (lambda t, u: r * u * (1 - u / k)), None, None
    if name == "mlnonlin":
        kw = _key_values(args)
        lam, c = kw.get("lambda", -1.0), kw.get("c", 1.0)
        params = MLParams(alpha, 1.0)

        @functools.lru_cache(maxsize=8)
        def exact(t):
            return mittag_leffler(params, lam * t ** alpha).real

        return (lambda t, u: lam * u + c * (u * u - exact(float(t)) ** 2)), None, None
    if name == "poly":
        coefficients = [to_float(c, "poly") for c in to_list(args, "poly")]
        return (lambda t, u: sum(c * u ** i for i, c in enumerate(coefficients))), None, None
    if name == "matrix":
        try:
            a = np.array([[to_float(x, "matrix") for x in row.split(",")] for row in args.split(";")])
        except ValueError:
            raise CliUsageError("matrix rows must have the same length")
        if a.shape != (dimension, dimension):
            raise CliUsageError("matrix of shape {} does not match a datum of dimension {}".format(a.shape, dimension))
        return (lambda t, u: a @ u), None, None
    raise CliUsageError("unknown rhs '{}'".format(spec))


def read_table(file_name):
    """Reads a csv with '#' comment lines and a mandatory header row. Returns (columns, float array)"""
    with open(file_name) as f:
        lines = [line for line in f if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise CliUsageError("'{}' has no header row".format(file_name))
    columns = [c.strip() for c in lines[0].split(",")]
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2) if len(lines) > 1 else np.empty((0, len(columns)))
    if data.shape[1] != len(columns):
        raise CliUsageError("'{}' rows do not match the header {}".format(file_name, columns))
    return columns, data


def _format_value(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _flatten(metadata, prefix=""):
    for key, value in metadata.items():
        name = "{}{}".format(prefix, key)
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        else:
            yield name, value


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        return None if not math.isfinite(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_table(stream, columns, rows, metadata, output_format="csv"):
    """
    csv: '# key=value' comment lines with the metadata, header row, one line per row, 'nan' sentinels.
    json: {"metadata": ..., "columns": ..., "data": {column: [...]}} with null sentinels
    """
    if output_format == "json":
        data = {c: [_json_value(row[i]) for row in rows] for i, c in enumerate(columns)}
        json.dump({"metadata": metadata, "columns": list(columns), "data": data}, stream, indent=1)
        stream.write("\n")
        return
    for key, value in _flatten(metadata):
        stream.write("# {}={}\n".format(key, json.dumps(value) if isinstance(value, (list, dict)) else value))
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_format_value(v) for v in row) + "\n")


def _header_value(text):
    """Values of '# key=value' lines: json first, so 1e-12 stays a number; yaml for the rest"""
    try:
        return json.loads(text)
    except ValueError:
        return yaml.safe_load(text)


def load_run_config(file_name):
    """
    Reads a yaml (or json) config file. Outputs of previous runs are accepted too: the config embedded in a json
    metadata block or in the '# section.key=value' header of a csv
    """
    with open(file_name) as f:
        text = f.read()
    if text.lstrip().startswith("#") and "=" in text.splitlines()[0]:
        conf = {}
        for line in text.splitlines():
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            keys = key.split(".")
            if keys[0] == "config" and len(keys) > 2:
                populate_dict(conf, keys[1:], _header_value(value))
        return conf
    try:
        if file_name.endswith(".json") or text.lstrip().startswith("{"):
            conf = json.loads(text)
        else:
            conf = yaml.safe_load(text) or {}
    except (ValueError, yaml.YAMLError) as e:
        raise CliUsageError("At config file '{}': {}".format(file_name, e))
    if not isinstance(conf, dict):
        raise CliUsageError("config file '{}' must hold a mapping".format(file_name))
    if "metadata" in conf:
        conf = deep_get(conf, ("metadata", "config"), {})
    return conf


class FracCli:

    cfg_logger_name = {"specialfn": "frac.specialfn", "operators": "frac.operators", "linode": "frac.linode",
                       "solver": "frac.solver", "stability": "frac.stability", "tautochrone": "frac.tautochrone",
                       "heston": "frac.roughheston"}
    # ^ contains for each section at frac.cfg the used logger name

    def __init__(self, config_file=None, run_config=None, env=None):
        """
        :param config_file: base configuration, the packaged frac.cfg when None
        :param run_config: optional file whose sections override the base ones
        :param env: environ mapping, FRACDYN_<SECTION>_<ITEM> variables override both files
        """
        self.logger = logging.getLogger("frac")
        self.config = self.read_config_file(config_file or self.default_config_file())
        if run_config:
            for section, values in load_run_config(run_config).items():
                if isinstance(values, dict):
                    self.config.setdefault(section, {}).update(values)
        self.apply_environ(self.config, env)
        self.configure_logging()

    @staticmethod
    def default_config_file():
        for config_file in (path.join(path.dirname(path.abspath(__file__)), "frac.cfg"), "./frac.cfg",
                            "/etc/fracdyn/frac.cfg"):
            if path.isfile(config_file):
                return config_file
        return None

    def read_config_file(self, config_file):
        conf = {}
        if config_file:
            try:
                with open(config_file) as f:
                    conf = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                raise CliUsageError("At config file '{}': {}".format(config_file, e))
        # Ensure all sections are not empty
        for k in ("global",) + NUMERIC_SECTIONS + COMMANDS:
            if not conf.get(k):
                conf[k] = {}
        return conf

    def apply_environ(self, conf, env=None):
        # read all environ that starts with FRACDYN_
        for k, v in (environ if env is None else env).items():
            if not k.startswith("FRACDYN_"):
                continue
            subject, _, item = k[8:].lower().partition("_")
            if not item or subject not in conf:
                continue
            try:
                conf[subject][item] = yaml.safe_load(v)
            except yaml.YAMLError as e:
                self.logger.warning("skipping environ '{}' on exception '{}'".format(k, e))

    def configure_logging(self):
        config = self.config
        log_format_simple = "%(asctime)s %(levelname)s %(name)s %(filename)s:%(lineno)s %(message)s"
        log_formatter_simple = logging.Formatter(log_format_simple, datefmt='%Y-%m-%dT%H:%M:%S')
        self.logger.handlers = []
        if config["global"].get("logfile"):
            file_handler = logging.handlers.RotatingFileHandler(config["global"]["logfile"],
                                                                maxBytes=100e6, backupCount=9, delay=0)
            file_handler.setFormatter(log_formatter_simple)
            self.logger.addHandler(file_handler)
        if not config["global"].get("nologging"):
            str_handler = logging.StreamHandler()
            str_handler.setFormatter(log_formatter_simple)
            self.logger.addHandler(str_handler)
        if config["global"].get("loglevel"):
            self.logger.setLevel(config["global"]["loglevel"])
        # logging other modules
        for k1, logname in self.cfg_logger_name.items():
            section = config.get(k1) or {}
            logger_module = logging.getLogger(logname)
            if section.get("logfile"):
                file_handler = logging.handlers.RotatingFileHandler(section["logfile"],
                                                                    maxBytes=100e6, backupCount=9, delay=0)
                file_handler.setFormatter(log_formatter_simple)
                logger_module.addHandler(file_handler)
            if section.get("loglevel"):
                logger_module.setLevel(section["loglevel"])

    def set_flag(self, command, key, value):
        populate_dict(self.config, [command, key], value)

    def option(self, command, key, default=None):
        return deep_get(self.config, [command, key], default)

    def resolved_config(self, command):
        """Sections a run depends on; writing them back as a config file reproduces the run"""
        resolved = {command: copy.deepcopy(self.config.get(command, {}))}
        for section in NUMERIC_SECTIONS:
            resolved[section] = copy.deepcopy(self.config.get(section, {}))
        return resolved

    def metadata(self, command, extra=None):
        meta = {"fracdyn_version": fracdyn_version, "fracdyn_version_date": fracdyn_version_date,
                "command": command, "config": self.resolved_config(command)}
        if extra:
            meta.update(extra)
        return meta

    def run(self, command, stream, output_format="csv"):
        """Executes command and writes its table to stream"""
        if command not in COMMANDS:
            raise CliUsageError("unknown command '{}'".format(command))
        self.logger.debug("running {} with {}".format(command, self.config.get(command)))
        columns, rows, extra = getattr(self, "cmd_" + command)()
        write_table(stream, columns, rows, self.metadata(command, extra), output_format)
        return 0

    def _ml_kwargs(self):
        kwargs = {}
        if self.option("specialfn", "series_bound") is not None:
            kwargs["series_bound"] = to_float(self.option("specialfn", "series_bound"), "series_bound")
        if self.option("specialfn", "max_terms") is not None:
            kwargs["max_terms"] = to_int(self.option("specialfn", "max_terms"), "max_terms")
        return kwargs

    def cmd_ml(self):
        alpha = to_float(self.option("ml", "alpha"), "alpha")
        beta = to_float(self.option("ml", "beta", 1.0), "beta")
        params = MLParams(alpha, beta)
        rows = []
        for token in to_list(self.option("ml", "z"), "z"):
            try:
                z = complex(token.replace(" ", ""))
            except ValueError:
                raise CliUsageError("'{}' is not a complex number".format(token))
            value = mittag_leffler(params, z, **self._ml_kwargs())
            rows.append((token, value.real, value.imag))
        return ("z", "re", "im"), rows, None

    def cmd_differint(self):
        input_file = self.option("differint", "input")
        if not input_file:
            raise CliUsageError("'input' csv file is required")
        columns, data = read_table(input_file)
        if len(columns) != 2:
            raise CliUsageError("input must have the two columns t,value")
        f = SampledFunction(UniformGrid.from_nodes(data[:, 0]), data[:, 1])
        alpha = to_float(self.option("differint", "alpha"), "alpha")
        op = str(self.option("differint", "op", "I"))
        if op == "I":
            out = frac_integral_num(f, alpha, rule=self.option("differint", "rule", "left"))
        elif op == "dC":
            out = caputo_derivative_num(f, alpha)
        elif op == "dRL":
            out = rl_derivative_num(f, alpha)
        elif op == "dGL":
            out = gl_derivative_num(f, alpha)
        else:
            raise CliUsageError("unknown op '{}', use one of I, dC, dRL, dGL".format(op))
        return ("t", "value"), list(zip(data[:, 0], out.values)), None

    def _solver_kwargs(self, method):
        kwargs = {}
        section = self.config.get("solver") or {}
        if "overflow_threshold" in section:
            kwargs["overflow_threshold"] = to_float(section["overflow_threshold"], "overflow_threshold")
        if method == "implicit":
            if "newton_tol" in section:
                kwargs["tol"] = to_float(section["newton_tol"], "newton_tol")
            if "newton_max_iter" in section:
                kwargs["max_iter"] = to_int(section["newton_max_iter"], "newton_max_iter")
        if method == "adams":
            iterations = self.option("solve", "corrector_iterations", section.get("corrector_iterations"))
            if iterations is not None:
                kwargs["corrector_iterations"] = to_int(iterations, "corrector_iterations")
        return kwargs

    def _ivp(self, settings, alpha):
        raw = settings.get("datum", 1.0)
        if isinstance(raw, (int, float)):
            raw = [raw]
        datum = np.array([to_float(x, "datum") for x in to_list(raw, "datum")])
        rhs, lam, forcing = build_rhs(settings.get("rhs", "linear:lambda=-1"), alpha, len(datum))
        horizon = to_float(settings.get("T", 1.0), "T")
        return FracIVP(settings.get("kind", CAPUTO), alpha, rhs, datum, horizon), lam, forcing

    def cmd_solve(self):
        settings = self.config.get("solve") or {}
        alpha = to_float(settings.get("alpha"), "alpha")
        ivp, lam, forcing = self._ivp(settings, alpha)
        grid = UniformGrid.from_horizon(ivp.horizon, to_float(settings.get("tau"), "tau"))
        if settings.get("analytic"):
            if lam is None or ivp.dimension != 1:
                raise CliUsageError("--analytic needs a scalar linear rhs")
            problem = LinearProblem(ivp.kind, alpha, lam, float(ivp.datum[0]),
                                    (lambda t: forcing) if forcing else None)
            solution = solve_linear(problem, grid, **self._ml_kwargs())
        else:
            method = settings.get("method")
            if not method:
                raise CliUsageError("'method' is required unless --analytic is given")
            solution = solve(ivp, grid, method, **self._solver_kwargs(method))
        columns = ["t"] + ["u_{}".format(i + 1) for i in range(solution.dimension)]
        rows = [(t,) + tuple(state) for t, state in zip(grid.nodes, solution.states)]
        return columns, rows, {"solution": solution.meta}

    def cmd_convergence(self):
        settings = self.config.get("convergence") or {}
        preset_name = settings.get("preset", "linear-caputo")
        if preset_name not in convergence_presets:
            raise CliUsageError("unknown preset '{}', use one of {}".format(preset_name,
                                                                            ", ".join(convergence_presets)))
        preset = convergence_presets[preset_name]
        alpha = to_float(settings.get("alpha", 0.5), "alpha")
        method = settings.get("method")
        if not method:
            raise CliUsageError("'method' is required")
        taus = [to_float(x, "taus") for x in to_list(settings.get("taus"), "taus")]
        ivp, lam, _ = self._ivp(preset, alpha)
        ml_kwargs = self._ml_kwargs()
        rows = []
        previous = None
        for tau in taus:
            grid = UniformGrid.from_horizon(ivp.horizon, tau)
            approx = solve(ivp, grid, method, **self._solver_kwargs(method)).values
            if lam is not None:
                exact = solve_linear(LinearProblem(ivp.kind, alpha, lam, float(ivp.datum[0])), grid,
                                     **ml_kwargs).values
            else:
                lam_ml = _key_values(preset["rhs"].partition(":")[2])["lambda"]
                params = MLParams(alpha, 1.0)
                exact = np.array([mittag_leffler(params, lam_ml * t ** alpha, **ml_kwargs).real
                                  for t in grid.nodes])
            # the singular start of RL paths is left out
            first = max(1, grid.n_steps // 10) if ivp.kind == RIEMANN_LIOUVILLE else 0
            error = float(np.max(np.abs(approx[first:] - exact[first:])))
            order = math.log(previous[1] / error) / math.log(previous[0] / tau) if previous and error > 0 \
                else float("nan")
            self.logger.info("convergence {} {} tau={:g} error={:.3e}".format(preset_name, method, tau, error))
            rows.append((tau, error, order))
            previous = (tau, error)
        return ("tau", "sup_error", "observed_order"), rows, None

    def cmd_stability(self):
        settings = self.config.get("stability") or {}
        alpha = to_float(settings.get("alpha"), "alpha")
        tol = to_float(settings.get("marginal_tol", 1e-12), "marginal_tol")
        region = settings.get("region")
        if region:
            try:
                re_part, im_part = str(region).split(",")
                re_range = [to_float(x, "region") for x in re_part.split(":")]
                im_range = [to_float(x, "region") for x in im_part.split(":")]
            except ValueError:
                raise CliUsageError("region must read re0:re1:n,im0:im1:n")
            re, im, mask = stability_region_sample(alpha, re_range, im_range, tol=tol)
            return ("re", "im", "stable"), region_rows(re, im, mask), None
        if settings.get("matrix"):
            matrix = read_matrix(settings["matrix"])
            report = classify_system(alpha, matrix, kind=settings.get("kind", CAPUTO), tol=tol)
        elif settings.get("eig"):
            spectrum = []
            for pair in str(settings["eig"]).split(";"):
                parts = [to_float(x, "eig") for x in pair.split(",")]
                if len(parts) not in (1, 2):
                    raise CliUsageError("eigenvalues must read re,im;re,im")
                spectrum.append(complex(parts[0], parts[1] if len(parts) == 2 else 0.0))
            report = classify_spectrum(alpha, spectrum, tol=tol)
        else:
            raise CliUsageError("one of 'matrix', 'eig' or 'region' is required")
        probe = settings.get("probe")
        columns = ["re", "im", "verdict"] + (["probe", "probe_t"] if probe else [])
        rows = []
        for z, verdict in zip(report.eigenvalues, report.verdicts):
            row = (z.real, z.imag, verdict.value)
            if probe:
                result = ml_decay_probe(alpha, z, to_float(probe, "probe"), **self._ml_kwargs())
                row += (result.trend, result.t_reached)
            rows.append(row)
        return columns, rows, {"report": report.to_dict()}

    def cmd_tautochrone(self):
        settings = self.config.get("tautochrone") or {}
        kind, _, argument = str(settings.get("T", "const:1")).partition(":")
        if kind == "const":
            k = to_float(argument, "T")

            def fall_time(y):
                return k
        elif kind == "sqrt":
            c = to_float(argument, "T")

            def fall_time(y):
                return c * math.sqrt(y)
        elif kind == "table":
            _, table = read_table(argument)

            def fall_time(y):
                return float(np.interp(y, table[:, 0], table[:, 1]))
        else:
            raise CliUsageError("T must read const:k, sqrt:c or table:<csv>")
        problem = AbelProblem(fall_time, to_float(settings.get("g", 9.81), "g"),
                              to_float(settings.get("ymax", 1.0), "ymax"), to_int(settings.get("n", 4096), "n"))
        s = solve_abel(problem)
        psi = curve_from_arclength(s)
        check = abel_forward(s, problem.g)
        return ("y", "s", "psi", "T_check"), list(zip(s.grid.nodes, s.values, psi.values, check.values)), None

    def cmd_heston(self):
        settings = self.config.get("heston") or {}
        params = RoughHestonParams(
            V0=to_float(settings.get("v0", 0.09), "v0"), kappa=to_float(settings.get("kappa", 2.0), "kappa"),
            theta=to_float(settings.get("theta", 0.04), "theta"),
            xi=None if settings.get("xi") is None else to_float(settings["xi"], "xi"),
            alpha=to_float(settings.get("alpha", 0.6), "alpha"), rho=to_float(settings.get("rho", 0.0), "rho"),
            S0=to_float(settings.get("s0", 100.0), "s0"), mu=to_float(settings.get("mu", 0.0), "mu"))
        grid = UniformGrid.from_horizon(to_float(settings.get("T", 1.0), "T"),
                                        to_float(settings.get("tau", "2^-8"), "tau"))
        dump = settings.get("dump_paths")
        run = McRun(params, grid, to_int(settings.get("paths", 10000), "paths"),
                    to_int(settings.get("seed", 0), "seed"), bool(dump), str(settings.get("truncation", "full")))
        stats = simulate(run, settings.get("model", "rough"))
        if dump:
            np.savez(dump, t=stats.t, V=stats.V, S=stats.S)
        return ("t", "mean_V", "sd_V", "mean_S", "sd_S"), stats.rows(), {"params": params.as_dict()}


def read_matrix(file_name):
    """Square matrix from a comma separated file; comment lines and an optional header row are skipped"""
    with open(file_name) as f:
        lines = [line for line in f if line.strip() and not line.lstrip().startswith("#")]
    if lines:
        try:
            [float(x) for x in lines[0].split(",")]
        except ValueError:
            lines = lines[1:]
    if not lines:
        raise CliUsageError("'{}' holds no matrix rows".format(file_name))
    return np.loadtxt(lines, delimiter=",", ndmin=2)


def usage(stream=None):
    print("""Usage: {} <command> [options]
    commands:
        ml           Mittag-Leffler values: --alpha A --beta B --z z1,z2,...
        differint    fractional operator of a t,value csv: --input FILE --op I|dC|dRL|dGL --alpha A
                     [--rule left|right|trapezoid]
        solve        fractional initial value problem: --kind caputo|rl --alpha A --method explicit|implicit|adams
                     | --analytic, --rhs SPEC, --tau STEP, --T HORIZON, --datum u1,u2,... [--corrector-iterations N]
        convergence  error table against closed forms: --preset linear-caputo|linear-rl|mlnonlin --method M
                     --alpha A --taus 2^-6,2^-7,...
        stability    sector test: --alpha A (--matrix FILE | --eig re,im;re,im | --region re0:re1:n,im0:im1:n)
                     [--probe TMAX] [--kind caputo]
        tautochrone  Abel inversion: --T const:k|sqrt:c|table:FILE --g G --ymax Y --n N
        heston       Monte Carlo: --model rough|classical|gbm --alpha --kappa --theta --xi --rho --v0 --s0 --mu
                     --tau --T --paths --seed [--truncation full|partial] [--dump-paths FILE.npz]
    common options:
        -c|--config FILE: yaml/json config, or a previous output, whose sections override frac.cfg; flags win
        -o|--out FILE: output file (default: stdout)
        -f|--format csv|json: output format (default: csv)
        -h|--help: shows this help
    rhs SPEC: linear:lambda=L[,forcing=F] | logistic:r=R,K=K | mlnonlin:lambda=L,c=C | poly:c0,c1,.. | matrix:a,b;c,d
    """.format(path.basename(sys.argv[0])), file=stream or sys.stdout)


def main(argv=None):
    """Command line entry point, returns the exit code"""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        if not argv or argv[0] in ("-h", "--help"):
            usage(sys.stdout if argv else sys.stderr)
            return 0 if argv else 2
        command = argv[0]
        if command not in COMMANDS:
            raise CliUsageError("unknown command '{}'; use one of {}".format(command, ", ".join(COMMANDS)))
        opts, args = getopt.getopt(argv[1:], "hc:o:f:", ["config=", "out=", "format=", "help"] +
                                   command_options[command])
        if args:
            raise CliUsageError("unexpected arguments {}".format(args))
        config_file = None
        out = None
        output_format = "csv"
        flags = []
        for o, a in opts:
            if o in ("-h", "--help"):
                usage()
                return 0
            elif o in ("-c", "--config"):
                config_file = a
            elif o in ("-o", "--out"):
                out = a
            elif o in ("-f", "--format"):
                output_format = a
            else:
                takes_value = o[2:] + "=" in command_options[command]
                flags.append((o[2:].replace("-", "_"), a if takes_value else True))
        if output_format not in FORMATS:
            raise CliUsageError("format must be one of {}".format(", ".join(FORMATS)))
        if config_file and not path.isfile(config_file):
            raise CliUsageError("configuration file '{}' does not exist".format(config_file))
        cli = FracCli(run_config=config_file)
        for key, value in flags:
            cli.set_flag(command, key, value)
        if out:
            with open(out, "w") as stream:
                return cli.run(command, stream, output_format)
        return cli.run(command, sys.stdout, output_format)
    except getopt.GetoptError as e:
        print(str(e), file=sys.stderr)
        return 2
    except FracException as e:
        print("{}: {}".format(type(e).__name__, e), file=sys.stderr)
        return e.exit_code
    except (ValueError, OSError) as e:
        print(str(e), file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
