"""Command-line interface: job files in, certified JSON records out.

Exit codes: 0 success, 2 parse error, 3 precondition failure,
4 non-stabilization, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional

from .deformation import (
    DeformationError,
    DeformationSetup,
    INFINITE_OR_UNSTABLE,
    InducingMap,
    ae_codim_damon,
    ae_normal_space_direct,
    good_equation_witness,
    ke_discriminant_reduced,
    kev_normal_space,
    mu_e_alternating,
    mu_e_derham,
    mu_e_good_equation,
    t1_log,
    theta_prime_minors,
)
from .forms import (
    CheckedFormsModule,
    FormsError,
    class_is_torsion,
    de_rham_report_homotopy,
    de_rham_report_sliced,
    forms_free,
    forms_pullback,
    pd_check,
    torsion_length,
)
from .groebner import StabilizationError, quotient_dimension
from .jobio import JobError, JobSpec, parse_job
from .logarithmic import (
    Divisor,
    DivisorError,
    FreenessVerdict,
    InternalInvariantError,
    LogBasis,
    derlog,
    is_free,
    saito_check,
)
from .module import INFINITE, FreeElement, ModuleError, ModulePresentation
from .order import MonomialOrder
from .poly import ParseError, Poly, PolyError, quasihomogeneous_weights

SCHEMA = "logforms/1"


class PreconditionError(ValueError):
    pass


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_dim(d):
    return d if isinstance(d, int) else str(d)


def _basis_record(basis: LogBasis) -> dict:
    names = basis.divisor.names
    return {
        "fields": [[p.format(names) for p in col] for col in basis.theta],
        "unit": _fmt_fraction(basis.unit),
        "tangency_witnesses": [w.format(names) for w in basis.witnesses],
    }


def _divisor_from_job(job: JobSpec, check_reduced: bool = True) -> Divisor:
    if not job.ring or job.divisor_text is None:
        raise PreconditionError("this command needs 'ring' and 'divisor'")
    h = job.divisor_poly()
    weights = job.weights
    if weights is None:
        weights = quasihomogeneous_weights(h)
    return Divisor(job.ring, h, weights=weights, check_reduced=check_reduced)


def _certified_basis(job: JobSpec, d: Divisor) -> LogBasis:
    verdict = is_free(d)
    if verdict.kind != FreenessVerdict.FREE:
        raise PreconditionError(
            f"divisor is not certified free ({verdict.kind}); this command needs a Saito basis")
    return verdict.basis


def _target_basis(job: JobSpec) -> LogBasis:
    if not job.target_ring or job.target_divisor_text is None:
        raise PreconditionError("this command needs 'target-ring' and 'target-divisor'")
    h = job.target_divisor_poly()
    weights = job.target_weights or quasihomogeneous_weights(h)
    E = Divisor(job.target_ring, h, weights=weights)
    verdict = is_free(E)
    if verdict.kind != FreenessVerdict.FREE:
        raise PreconditionError(f"target divisor is not certified free ({verdict.kind})")
    return verdict.basis


def _inducing_map(job: JobSpec) -> InducingMap:
    if job.map_text is None:
        raise PreconditionError("this command needs 'map'")
    return InducingMap(job.ring, job.target_ring, job.map_polys(),
                       s_indices=tuple(job.param_indices()),
                       t_indices=tuple(job.ext_param_indices()))


def _source_weights(job: JobSpec, h: Optional[Poly] = None):
    if job.weights is not None:
        return tuple(job.weights)
    if h is not None:
        return quasihomogeneous_weights(h)
    return None


def _flag(certified: bool) -> str:
    return "CERTIFIED" if certified else "UNCERTIFIED-LOCAL"


# ---------------------------------------------------------------------------
# command handlers


def _cmd_is_free(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    verdict = is_free(d, opts.get("order"))
    rec = {"verdicts": {"freeness": verdict.kind},
           "dimensions": {"minimal_generators": {"value": verdict.generator_count,
                                                 "route": "tangent-field syzygies + Nakayama"}},
           "certificates": {}, "flags": {"certified": _flag(True)}}
    if verdict.basis is not None:
        rec["certificates"]["saito_basis"] = _basis_record(verdict.basis)
    if verdict.reason:
        rec["verdicts"]["reason"] = verdict.reason
    return rec


def _cmd_derlog(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    gens = derlog(d, opts.get("order"))
    names = d.names
    return {
        "verdicts": {},
        "dimensions": {"generator_count": {"value": len(gens), "route": "syzygy module"}},
        "certificates": {
            "generators": [{"field": [p.format(names) for p in f.entries],
                            "witness": w.format(names)} for f, w in gens]},
        "flags": {"certified": _flag(True)},
    }


def _cmd_saito_check(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    if job.fields_text is None:
        raise PreconditionError("saito-check needs 'fields'")
    candidates = [FreeElement(vec) for vec in job.field_elements()]
    basis, reason = saito_check(d, candidates)
    rec = {"verdicts": {"saito": "PASS" if basis else "FAIL"},
           "dimensions": {}, "certificates": {},
           "flags": {"certified": _flag(True)}}
    if basis:
        rec["certificates"]["saito_basis"] = _basis_record(basis)
    else:
        rec["verdicts"]["reason"] = reason
    return rec


def _forms_module(job: JobSpec, k: int) -> CheckedFormsModule:
    if job.target_divisor_text is not None and job.map_text is not None:
        e_basis = _target_basis(job)
        imap = _inducing_map(job).germ()
        h0 = e_basis.divisor.h.compose(imap.components)
        weights = None
        if job.weights is not None:
            params = set(job.param_indices()) | set(job.ext_param_indices())
            weights = tuple(w for i, w in enumerate(job.weights) if i not in params)
        else:
            weights = quasihomogeneous_weights(h0)
        return forms_pullback(e_basis, imap.components, imap.source_names, k, weights=weights)
    d = _divisor_from_job(job)
    basis = _certified_basis(job, d)
    return forms_free(basis, k)


def _cmd_omega_check(job: JobSpec, opts: dict) -> dict:
    k = opts.get("form-degree")
    if k is None:
        k = job.options.get("form-degree", 1)
    m = _forms_module(job, k)
    names = m.names
    rec = {"verdicts": {"kind": m.kind}, "dimensions": {}, "certificates": {},
           "tables": {}, "flags": {}}
    rec["certificates"]["relations"] = [[p.format(names) for p in r.entries]
                                        for r in m.relations]
    rec["dimensions"]["rank"] = {"value": m.rank, "route": "binomial(n, k)"}
    graded = m.grading() is not None
    if graded:
        from .forms import GradedDimensionTable

        bound = opts.get("degree-bound", 20)
        rec["tables"]["graded_dimensions"] = GradedDimensionTable(
            m.dimension_table(bound)).as_dict()
    if m.kind == "free":
        rec["verdicts"]["relation_module_free"] = pd_check(m)
    rec["flags"]["certified"] = _flag(graded)
    return rec


def _cmd_de_rham(job: JobSpec, opts: dict) -> dict:
    bound = opts.get("degree-bound", 12)
    if job.target_divisor_text is not None and job.map_text is not None:
        e_basis = _target_basis(job)
        imap = _inducing_map(job).germ()
        h0 = e_basis.divisor.h.compose(imap.components)
        n = imap.source_dim
        weights = _source_weights(job, h0)
        if weights is not None and len(weights) != n:
            params = set(job.param_indices()) | set(job.ext_param_indices())
            weights = tuple(w for i, w in enumerate(weights) if i not in params)
        semi = None if weights else quasihomogeneous_weights(h0, allow_zero=True)
        mods = [forms_pullback(e_basis, imap.components, imap.source_names, k, weights=weights)
                for k in range(0, n + 1)]
    else:
        d = _divisor_from_job(job)
        basis = _certified_basis(job, d)
        n = d.nvars
        weights = d.weights
        semi = None if weights else d.semipositive_weights()
        mods = [forms_free(basis, k) for k in range(0, n + 1)]
    if weights is not None:
        rep = de_rham_report_sliced(mods, bound)
        certified = True
    elif semi is not None:
        rep = de_rham_report_homotopy(mods, semi, bound)
        certified = True
    else:
        raise PreconditionError("de-rham-check needs a weight system (none found)")
    tables = {}
    for deg, info in rep.get("per_degree", {}).items():
        entry = {"exact": info["exact"]}
        if "cohomology" in info:
            entry["cohomology"] = info["cohomology"]
        if "certificate" in info:
            entry["certificate"] = info["certificate"]
        tables[str(deg)] = entry
    return {"verdicts": {"all_exact": rep["all_exact"], "mode": rep["mode"],
                         **({"failure": rep["failure"]} if "failure" in rep else {})},
            "dimensions": {}, "certificates": {}, "tables": {"per_degree": tables},
            "flags": {"certified": _flag(certified)}}


def _cmd_torsion_length(job: JobSpec, opts: dict) -> dict:
    k = opts.get("form-degree")
    if k is None:
        k = job.options.get("form-degree")
    if k is None:
        nsrc = len(job.ring) if job.ring else len(job.target_ring)
        k = nsrc - 1
    m = _forms_module(job, k)
    dim = torsion_length(m)
    graded = m.grading() is not None
    return {"verdicts": {"form_degree": k},
            "dimensions": {"torsion_length": {"value": dim,
                                              "route": "iterated colon saturation"}},
            "certificates": {}, "flags": {"certified": _flag(graded)}}


def _cmd_kev(job: JobSpec, opts: dict) -> dict:
    e_basis = _target_basis(job)
    imap = _inducing_map(job)
    weights = job.weights
    setup = DeformationSetup(e_basis, imap, weights=weights)
    pres, dim = kev_normal_space(setup, opts.get("order"))
    graded = weights is not None
    return {"verdicts": {"algebraically_transverse_off_origin": dim != INFINITE},
            "dimensions": {"kev_codimension": {"value": _fmt_dim(dim),
                                               "route": "normal space quotient"}},
            "certificates": {}, "flags": {"certified": _flag(graded or dim == 0)}}


def _cmd_t1_log(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    basis = _certified_basis(job, d)
    params = job.param_indices()
    ext = job.ext_param_indices()
    if not params:
        raise PreconditionError("t1-log needs 'params'")
    _, dim_rel = t1_log(basis, params + ext, ext, opts.get("order"))
    _, dim_fib = t1_log(basis, params + ext, params + ext, opts.get("order"))
    graded = d.weights is not None
    return {"verdicts": {},
            "dimensions": {
                "t1_log_relative": {"value": _fmt_dim(dim_rel), "route": "parameter rows of the Saito matrix"},
                "t1_log_fibre": {"value": _fmt_dim(dim_fib), "route": "parameter rows mod base maximal ideal"}},
            "certificates": {}, "flags": {"certified": _flag(graded)}}


def _cmd_critical_ideal(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    basis = _certified_basis(job, d)
    params = job.param_indices()
    if not params:
        raise PreconditionError("critical-ideal needs 'params'")
    minors = theta_prime_minors(basis, params, job.ext_param_indices())
    return {"verdicts": {"unit_ideal": any(m.is_constant() and not m.is_zero() for m in minors)},
            "dimensions": {"generator_count": {"value": len(minors), "route": "maximal minors"}},
            "certificates": {"ideal_generators": [m.format(d.names) for m in minors]},
            "flags": {"certified": _flag(True)}}


def _cmd_mu_e(job: JobSpec, opts: dict) -> dict:
    routes = {}
    errors = {}
    # de Rham route needs target data and the map
    if job.target_divisor_text is not None and job.map_text is not None:
        e_basis = _target_basis(job)
        imap = _inducing_map(job)
        weights = _source_weights(job)
        setup = DeformationSetup(e_basis, imap, weights=weights)
        if weights is not None:
            try:
                routes["derham"] = mu_e_derham(setup, bound=opts.get("degree-bound", 20),
                                               window=opts.get("window", 4))
            except (StabilizationError, DeformationError) as exc:
                errors["derham"] = str(exc)
        else:
            errors["derham"] = "no positive weight system"
    # alternating and good-equation routes need the total-space divisor
    if job.divisor_text is not None and job.params:
        d = _divisor_from_job(job)
        params = job.param_indices()
        try:
            basis = _certified_basis(job, d)
            routes["alternating"] = mu_e_alternating(basis, params, opts.get("order"))
        except (PreconditionError, DeformationError) as exc:
            errors["alternating"] = str(exc)
        witness = good_equation_witness(d.h, d.weights)
        if witness is None:
            errors["good_equation"] = "no good-equation witness found"
        else:
            try:
                dim = mu_e_good_equation(d.h, params, witness, opts.get("order"), d.weights)
                routes["good_equation"] = _fmt_dim(dim)
            except DeformationError as exc:
                errors["good_equation"] = str(exc)
    if not routes:
        detail = "; ".join(f"{k}: {v}" for k, v in sorted(errors.items()))
        raise PreconditionError("mu-e could not run any route"
                                + (f" ({detail})" if detail else "; it needs family or map data"))
    values = set(routes.values())
    agreement = len(values) == 1
    dims = {f"mu_e_{name}": {"value": v, "route": name} for name, v in sorted(routes.items())}
    rec = {"verdicts": {"routes_agree": agreement},
           "dimensions": dims, "certificates": {},
           "routes": sorted(routes), "agreement": agreement,
           "flags": {"certified": _flag(job.weights is not None or
                                        job.target_weights is not None)}}
    if errors:
        rec["verdicts"]["route_errors"] = errors
    return rec


def _cmd_ae_codim(job: JobSpec, opts: dict) -> dict:
    if not job.ring or job.map_text is None or not job.target_ring:
        raise PreconditionError("ae-codim needs 'ring', 'target-ring' and 'map' (the germ)")
    f0 = job.map_polys()
    cap = opts.get("jet-cap", 20)
    direct = ae_normal_space_direct(f0, cap=cap)
    routes = {"direct": _fmt_dim(direct)}
    rec_cert = {}
    agreement = None
    if job.unfolding_discriminant_text is not None and job.inclusion_text is not None:
        from .poly import parse_poly as _pp

        hD = _pp(job.unfolding_discriminant_text, job.unfolding_target)
        uw = job.unfolding_weights or quasihomogeneous_weights(hD)
        DF = Divisor(job.unfolding_target, hD, weights=uw)
        verdict = is_free(DF)
        if verdict.kind != FreenessVerdict.FREE:
            raise PreconditionError("unfolding discriminant is not certified free")
        rec_cert["discriminant_saito_basis"] = _basis_record(verdict.basis)
        incl = InducingMap(job.target_ring, job.unfolding_target,
                           [_pp(t, job.target_ring) for t in job.inclusion_text])
        tw = job.target_weights
        damon = ae_codim_damon(verdict.basis, incl, weights=tw, order=opts.get("order"))
        routes["damon"] = _fmt_dim(damon)
        agreement = routes["direct"] == routes["damon"]
    dims = {f"ae_codim_{name}": {"value": v, "route": name} for name, v in sorted(routes.items())}
    rec = {"verdicts": {"finite": direct != INFINITE_OR_UNSTABLE},
           "dimensions": dims, "certificates": rec_cert,
           "routes": sorted(routes),
           "flags": {"certified": _flag(True)}}
    if agreement is not None:
        rec["verdicts"]["routes_agree"] = agreement
        rec["agreement"] = agreement
    return rec


def _cmd_fitting_reduced(job: JobSpec, opts: dict) -> dict:
    d = _divisor_from_job(job)
    basis = _certified_basis(job, d)
    params = job.param_indices()
    if len(params) != 1:
        raise PreconditionError("fitting-reduced needs exactly one parameter")
    reduced, chi, dim = ke_discriminant_reduced(basis, params[0], opts.get("order"))
    return {"verdicts": {"fitting_ideal_is_maximal_ideal": reduced},
            "dimensions": {"t1_log_relative": {"value": _fmt_dim(dim), "route": "parameter rows"}},
            "certificates": {"fitting_ideal_generator": chi.format([job.params[0]])},
            "flags": {"certified": _flag(d.weights is not None)}}


HANDLERS = {
    "is-free": _cmd_is_free,
    "derlog": _cmd_derlog,
    "saito-check": _cmd_saito_check,
    "omega-check": _cmd_omega_check,
    "de-rham-check": _cmd_de_rham,
    "torsion-length": _cmd_torsion_length,
    "kev-codim": _cmd_kev,
    "t1-log": _cmd_t1_log,
    "critical-ideal": _cmd_critical_ideal,
    "mu-e": _cmd_mu_e,
    "ae-codim": _cmd_ae_codim,
    "fitting-reduced": _cmd_fitting_reduced,
}


def run_job(job: JobSpec, options: Optional[dict] = None) -> dict:
    """Execute a validated job and assemble the result record."""
    opts = dict(job.options)
    if options:
        opts.update({k: v for k, v in options.items() if v is not None})
    if "order" in opts and isinstance(opts["order"], str):
        kind = opts["order"]
        if kind not in ("wdegrevlex", "lex"):
            raise PreconditionError(f"unknown order {kind!r}")
        opts["order"] = MonomialOrder(kind) if kind == "lex" else None
    if not job.command:
        raise PreconditionError("no command given (job file or command line)")
    handler = HANDLERS[job.command]
    body = handler(job, opts)
    record = {
        "schema": SCHEMA,
        "command": job.command,
        "input_echo": job.echo(),
        "options": {k: v for k, v in sorted(opts.items()) if k != "order"},
        "seed": opts.get("seed", 0),
    }
    record.update(body)
    return record


def render_text(record: dict) -> str:
    lines = [f"command: {record['command']}"]
    for key in ("verdicts", "dimensions"):
        for k, v in record.get(key, {}).items():
            if isinstance(v, dict) and "value" in v:
                lines.append(f"{k}: {v['value']}    [{v.get('route', '')}]")
            else:
                lines.append(f"{k}: {v}")
    if record.get("routes"):
        lines.append("routes: " + ", ".join(record["routes"]))
    if "agreement" in record:
        lines.append(f"agreement: {record['agreement']}")
    flags = record.get("flags", {})
    if flags:
        lines.append(f"flags: {flags.get('certified', '')}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="logforms",
        description="Exact logarithmic-form computations on free and almost free divisors.")
    parser.add_argument("command", nargs="?", default=None,
                        help="subcommand; may also come from the job file")
    parser.add_argument("--input", required=True, help="job file")
    parser.add_argument("--degree-bound", type=int, default=None)
    parser.add_argument("--order", choices=("wdegrevlex", "lex"), default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--output", choices=("json", "text"), default="json")
    parser.add_argument("--form-degree", type=int, default=None)
    parser.add_argument("--jet-cap", type=int, default=None)
    parser.add_argument("--timing", action="store_true",
                        help="include wall-clock timing (breaks byte determinism)")
    args = parser.parse_args(argv)

    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2

    t0 = time.monotonic()
    try:
        job = parse_job(text)
        if args.command:
            if job.command and job.command != args.command:
                print(f"error: job file declares command {job.command!r}, "
                      f"command line says {args.command!r}", file=sys.stderr)
                return 2
            job.command = args.command
        overrides = {"degree-bound": args.degree_bound, "order": args.order,
                     "seed": args.seed, "form-degree": args.form_degree,
                     "jet-cap": args.jet_cap}
        record = run_job(job, overrides)
    except (JobError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (PreconditionError, DivisorError, DeformationError, FormsError,
            ModuleError, PolyError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return 3
    except StabilizationError as exc:
        print(f"non-stabilization: {exc}", file=sys.stderr)
        return 4
    except InternalInvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 5

    elapsed_ms = int((time.monotonic() - t0) * 1000)
    if args.timing:
        record["timing_ms"] = elapsed_ms
    if args.output == "json":
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        sys.stdout.write(render_text(record))
        print(f"# elapsed {elapsed_ms} ms", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
