"""Command-line driver: ``twistcoh <command> [options]``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for configuration or parse errors.  Reports are JSON with sorted keys and
contain no timestamps, so equal inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .constructions import (
    bott_chern_dim,
    c_map,
    hat_cohomology_and_delta,
    lck_classes,
    mv_maps,
    rel_cohomology_dim,
    relative_euler_check,
)
from .engine import TwistedComplex, cohomology_report, twisted_cohomology_report
from .errors import FixtureError, NotClosed, ParseError, PreconditionViolation, TwistError
from .fixtures import Fixture, catalogue, get_fixture
from .operators import OPERATORS
from .parser import format_expression, parse_form
from .suites import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_MATH, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _int_list(text) -> List[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma separated list of integers, got {text!r}")


def _expectations(text: Optional[str]) -> Dict[int, int]:
    """``"0=0,1=2"`` -> {0: 0, 1: 2}."""
    out: Dict[int, int] = {}
    if not text:
        return out
    for item in str(text).split(","):
        try:
            r, d = item.split("=")
            out[int(r)] = int(d)
        except ValueError:
            raise ConfigError(f"bad expectation {item!r}; write degree=dim")
    return out


# -- argument handling -------------------------------------------------------------

def _add_job_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    p.add_argument("--fixture", help="name of a built-in fixture to start from")
    p.add_argument("--model", help="torus model, e.g. t2")
    p.add_argument("--f", dest="f", help="expression for the function f")
    p.add_argument("--theta", help="expression for the closed 1-form theta")
    p.add_argument("--degrees", help="comma separated degrees")
    p.add_argument("--Dmin", type=int)
    p.add_argument("--Dmax", type=int)
    p.add_argument("--stability", type=int)
    p.add_argument("--expect", help="expected stabilized dims, e.g. 0=0,1=2")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistcoh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run randomized identity suites")
    p.add_argument("--suite", default="all", help="suite name or 'all'")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")

    p = sub.add_parser("cohomology", help="truncated cohomology dimensions")
    _add_job_options(p)
    p.add_argument("--operator", choices=sorted(OPERATORS))

    p = sub.add_parser("relative", help="cohomology of the relative complex of a map")
    _add_job_options(p)
    p.add_argument("--map", help="affine map 'A;b', rows of A separated by commas")

    p = sub.add_parser("lck", help="l.c.K. classes, hat complex and delta ranks")
    _add_job_options(p)
    p.add_argument("--omega", help="expression for the 2-form omega")
    p.add_argument("--m", help="rational parameter m")
    p.add_argument("--bidegree", help="also compute a Bott-Chern dimension, e.g. 1,1")

    p = sub.add_parser("twisted", help="twisted cohomology of d_{theta,f} and the c map")
    _add_job_options(p)
    p.add_argument("--certify", type=int, default=20,
                   help="number of closed forms to push through the c map")

    p = sub.add_parser("mv", help="Mayer-Vietoris cochain identities for a partition")
    _add_job_options(p)
    p.add_argument("--partition", help="two functions separated by ';'")
    p.add_argument("--sigma", default="1", help="form sigma")

    p = sub.add_parser("fixtures", help="list built-in fixtures")
    p.add_argument("--out")
    return parser


def _job(args: argparse.Namespace) -> Dict[str, object]:
    """Merge fixture, config file and explicit flags (later wins)."""
    job: Dict[str, object] = {}
    fixture_name = getattr(args, "fixture", None)
    config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(config, dict):
            raise ConfigError("config file must hold a JSON object")
        fixture_name = fixture_name or config.get("fixture")
    if fixture_name:
        job.update(get_fixture(fixture_name).data)
        job["fixture"] = fixture_name
    job.update({k: v for k, v in config.items() if k != "command"})
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command"):
            job[key] = value
    if "Dmin" in job or "Dmax" in job:
        lo, hi = int(job.get("Dmin", 2)), int(job.get("Dmax", 8))
        if hi < lo:
            raise ConfigError(f"Dmax {hi} is smaller than Dmin {lo}")
        job["schedule"] = list(range(lo, hi + 1))
    job.setdefault("schedule", list(range(2, 9)))
    job["schedule"] = _int_list(job["schedule"])
    job.setdefault("stability", 3)
    job["stability"] = int(job["stability"])
    if len(job["schedule"]) < job["stability"]:
        raise ConfigError("schedule is shorter than the stability window")
    job.setdefault("seed", DEFAULT_SEED)
    if "model" not in job:
        raise ConfigError("missing --model (or a fixture providing one)")
    return job


def _fixture_of(job) -> Fixture:
    data = {k: job[k] for k in ("model", "f", "theta", "omega", "m", "map", "partition")
            if k in job}
    return Fixture(str(job.get("fixture", "command line")), data)


def _header(command: str, job) -> Dict[str, object]:
    keep = ("fixture", "model", "f", "theta", "omega", "m", "map", "partition",
            "schedule", "stability", "operator", "bidegree", "sigma")
    return {"engine_version": __version__, "command": command,
            "fixture": job.get("fixture"), "seed": job.get("seed"),
            "config": {k: job[k] for k in keep if k in job}}


def _check_expect(report, expect: Dict[int, int], failures: List[str]) -> None:
    for r, want in sorted(expect.items()):
        if r not in report.degrees:
            failures.append(f"expected degree {r} was not computed")
            continue
        got = report.stabilized_dim(r)
        if got != want:
            failures.append(f"{report.label}: stabilized dim H^{r} is {got}, expected {want}")


# -- commands ------------------------------------------------------------------------

def cmd_verify(args) -> tuple:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in SUITES:
            raise ConfigError(f"unknown suite {n!r}; choose from {', '.join(sorted(SUITES))}")
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    results = [run_suite(n, args.trials, args.seed) for n in names]
    failures = [f"{r.name}: {msg}" for r in results for msg in r.failures]
    doc = {"engine_version": __version__, "command": "verify", "seed": args.seed,
           "trials": args.trials, "suites": [r.to_json() for r in results],
           "passed": sum(r.passed for r in results), "failed": sum(not r.passed for r in results)}
    return doc, failures


def cmd_cohomology(args) -> tuple:
    job = _job(args)
    fx = _fixture_of(job)
    tw = fx.twist()
    op = job.get("operator", "d_f_theta")
    degrees = _int_list(job.get("degrees", list(range(fx.dim + 1))))
    cx = TwistedComplex(op, tw)
    rep = cohomology_report(cx, degrees, job["schedule"], job["stability"],
                            jobs=int(job.get("jobs", 1)))
    failures: List[str] = []
    _check_expect(rep, _expectations(job.get("expect")), failures)
    doc = _header("cohomology", job)
    doc["report"] = rep.to_json()
    if job.get("zeros") is not None:
        fixture = Fixture(fx.name, dict(fx.data, zeros=job["zeros"]))
        ok = fixture.check_zeros()
        doc["declared_zeros"] = {"count": len(fixture.zeros()), "verified": ok}
        if not ok:
            failures.append("declared zeros of f do not evaluate to zero")
    return doc, failures


def cmd_relative(args) -> tuple:
    job = _job(args)
    if "map" not in job:
        raise ConfigError("relative needs --map 'A;b'")
    fx = _fixture_of(job)
    rp = fx.relative_pair()
    top = max(rp.mu.target_dim, rp.mu.source_dim + 1) + 1
    degrees = _int_list(job.get("degrees", list(range(top + 1))))
    rep = rel_cohomology_dim(rp, degrees, job["schedule"], job["stability"])
    euler = relative_euler_check(rp, job["schedule"], job["stability"])
    failures: List[str] = []
    _check_expect(rep, _expectations(job.get("expect")), failures)
    bound = max(rp.mu.source_dim + 1, rp.mu.target_dim)
    for r in degrees:
        if r > bound and rep.stabilized_dim(r) != 0:
            failures.append(f"relative H^{r} should vanish above degree {bound}")
    if euler.alternating_sum not in (0, None):
        failures.append(f"long sequence Euler sum is {euler.alternating_sum}, expected 0")
    doc = _header("relative", job)
    doc["report"] = rep.to_json()
    doc["euler"] = {"alternating_sum": euler.alternating_sum,
                    "target": {str(k): v for k, v in euler.target_dims.items()},
                    "source": {str(k): v for k, v in euler.source_dims.items()},
                    "relative": {str(k): v for k, v in euler.relative_dims.items()}}
    return doc, failures


def cmd_lck(args) -> tuple:
    job = _job(args)
    if "omega" not in job:
        raise ConfigError("lck needs --omega")
    fx = _fixture_of(job).lck()
    certs = lck_classes(fx)
    degrees = _int_list(job.get("degrees", list(range(fx.dim + 2))))
    hat = hat_cohomology_and_delta(fx, degrees, job["schedule"], job["stability"])
    failures: List[str] = []
    for label, ok in (("d_f(f theta) = 0", certs.lee_closed),
                      ("d_{f,theta}(f^2 omega) = 0", certs.lichnerowicz_closed),
                      ("f^2 omega is del/delbar closed", certs.bott_chern_closed)):
        if ok is False:
            failures.append(f"{fx.name}: certificate failed: {label}")
    for r in degrees:
        if hat.identity_holds(r) is False:
            failures.append(f"{fx.name}: hat dimension identity fails in degree {r}")
    doc = _header("lck", job)
    doc["certificates"] = {
        "lee_closed": certs.lee_closed,
        "lichnerowicz_closed": certs.lichnerowicz_closed,
        "bott_chern_closed": certs.bott_chern_closed,
    }
    doc["hat"] = hat.to_json()
    if job.get("bidegree"):
        p, q = _int_list(job["bidegree"])
        bc = bott_chern_dim(fx.tw, (p, q), job["schedule"], job["stability"])
        doc["bott_chern"] = bc.to_json()
    return doc, failures


def cmd_twisted(args) -> tuple:
    job = _job(args)
    fx = _fixture_of(job)
    tw = fx.twist()
    degrees = _int_list(job.get("degrees", list(range(fx.dim + 1))))
    rep = twisted_cohomology_report(tw, degrees, job["schedule"], job["stability"])
    failures: List[str] = []
    _check_expect(rep, _expectations(job.get("expect")), failures)
    cx = TwistedComplex("d_theta_f", tw)
    wanted = int(job.get("certify", 20))
    certified = 0
    D = job["schedule"][0]
    for r in degrees:
        if certified >= wanted:
            break
        space = cx.space(r, D)
        for vec in cx.differential(r, D).kernel_basis():
            if certified >= wanted:
                break
            phi = space.to_forms(vec)[0]
            if not c_map(tw, phi).certified:
                failures.append(f"c map certificate failed on a closed {r}-form")
            certified += 1
    doc = _header("twisted", job)
    doc["report"] = rep.to_json()
    doc["c_map"] = {"closed_forms_checked": certified, "cutoff": D,
                    "failures": len(failures)}
    return doc, failures


def cmd_mv(args) -> tuple:
    job = _job(args)
    if "partition" not in job:
        raise ConfigError("mv needs --partition 'lambdaU;lambdaV'")
    if isinstance(job["partition"], str):
        job["partition"] = job["partition"].split(";")
    fx = _fixture_of(job)
    pf = fx.partition()
    sigma_text = str(job.get("sigma", "1"))
    sigma = parse_form(sigma_text, fx.dim)
    cert = mv_maps(pf, fx.twist(), sigma)
    failures = [] if cert.passed else [f"{fx.name}: Mayer-Vietoris cochain identity failed"]
    doc = _header("mv", job)
    doc["certificate"] = {
        "partition_cancels": cert.partition_cancels,
        "beta_alpha_zero": cert.beta_alpha_zero,
        "sign_rule": cert.sign_rule,
        "representative_closed": cert.representative_closed,
        "delta_representative": format_expression(cert.delta_representative),
    }
    return doc, failures


def cmd_fixtures(args) -> tuple:
    doc = {"engine_version": __version__, "command": "fixtures",
           "fixtures": {n: fx.data for n, fx in sorted(catalogue().items())}}
    return doc, []


COMMANDS = {
    "verify": cmd_verify,
    "cohomology": cmd_cohomology,
    "relative": cmd_relative,
    "lck": cmd_lck,
    "twisted": cmd_twisted,
    "mv": cmd_mv,
    "fixtures": cmd_fixtures,
}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        doc, failures = COMMANDS[args.command](args)
    except (ConfigError, ParseError, FixtureError, NotClosed, PreconditionViolation,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TwistError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    doc["status"] = "fail" if failures else "ok"
    doc["failures"] = failures
    text = dumps(doc)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in failures:
        print(f"check failed: {msg}", file=sys.stderr)
    return EXIT_MATH if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
