"""Self-describing orbit records and deterministic text exports.

Records are schema-versioned JSON documents (human-diffable structured
text).  They round-trip losslessly: floats are written with Python's
shortest round-trip representation, unknown fields are rejected on load,
and every file write is atomic (write to a temporary file, then rename).

A record may hold a seed, a failed run, or a converged orbit; only results
whose equations-of-motion residual passes the certificate threshold are
labeled ``converged``.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass

import numpy as np

from .descent import CONVERGED, DescentSchedule, RunResult, StopRule
from .dynamics import observables_series, residual
from .errors import RecordError
from .fourier import COS, SIN, FourierSeries, Parity
from .potential import PotentialSpec
from .quadrature import QuadratureGrid
from .symmetry import (BodyBinding, Coupling, Family, OrbitModel, OrthTransform,
                       ReducedParams, ScalarGenerator, Slot, SpaceTimeSymmetry,
                       VectorGenerator, build_choreography, build_crisscross,
                       build_cubic_family, make_layout)

SCHEMA_VERSION = 1
RESIDUAL_CERTIFICATE = 1e-5

_TOP_KEYS = {"schema_version", "family", "potential", "k_max", "layout",
             "values", "scale", "converged", "outcome", "iterations",
             "grad_norm", "residual", "observables", "descent"}
_FAMILY_KEYS = {
    "cubic": {"kind", "m"},
    "crisscross": {"kind", "masses"},
    "choreography": {"kind", "n", "parity"},
    "custom": {"kind", "generators", "bindings", "symmetries"},
}
_POTENTIAL_KEYS = {"alpha", "G", "softening"}
_LAYOUT_KEYS = {"slots", "couplings"}
_OBSERVABLE_KEYS = {"E", "J", "Q_max"}
_DESCENT_KEYS = {"rule", "delta", "table", "grad_tol", "max_iters",
                 "escape_radius"}


@dataclass
class OrbitRecord:
    """In-memory form of one record file (plain Python containers only)."""

    schema_version: int
    family: dict
    potential: dict
    k_max: int
    layout: dict
    values: list
    scale: float
    converged: bool
    outcome: str | None
    iterations: int | None
    grad_norm: float | None
    residual: float | None
    observables: dict | None
    descent: dict | None


def _check_keys(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise RecordError(f"unknown field(s) {sorted(unknown)} in {where}")
    missing = allowed - set(mapping)
    if missing:
        raise RecordError(f"missing field(s) {sorted(missing)} in {where}")


def validate_record(record: OrbitRecord) -> None:
    """Structural validation shared by save and load."""
    if record.schema_version != SCHEMA_VERSION:
        raise RecordError(
            f"unsupported schema version {record.schema_version}; "
            f"this build reads version {SCHEMA_VERSION}"
        )
    kind = record.family.get("kind")
    if kind not in _FAMILY_KEYS:
        raise RecordError(f"unknown family kind {kind!r}")
    _check_keys(record.family, _FAMILY_KEYS[kind], "family")
    _check_keys(record.potential, _POTENTIAL_KEYS, "potential")
    _check_keys(record.layout, _LAYOUT_KEYS, "layout")
    if record.observables is not None:
        _check_keys(record.observables, _OBSERVABLE_KEYS, "observables")
    if record.descent is not None:
        _check_keys(record.descent, _DESCENT_KEYS, "descent")
    if len(record.values) != len(record.layout["slots"]):
        raise RecordError("values and layout slots disagree in length")
    if record.converged:
        if record.residual is None or record.grad_norm is None:
            raise RecordError(
                "a record claiming convergence must carry residual and grad_norm"
            )
        if not record.residual <= RESIDUAL_CERTIFICATE:
            raise RecordError(
                f"converged record fails the residual certificate: "
                f"{record.residual:.3e} > {RESIDUAL_CERTIFICATE:.1e}"
            )
    for v in record.values:
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise RecordError("record values must be finite numbers")


def save_record(record: OrbitRecord, path: str) -> None:
    """Validate and write atomically (temporary file, then rename)."""
    validate_record(record)
    text = json.dumps(asdict(record), indent=2)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_record(path: str) -> OrbitRecord:
    """Parse and validate a record file."""
    with open(path) as fh:
        raw = fh.read()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise RecordError(
            f"malformed record {path!r}: {err.msg} at byte offset {err.pos}"
        ) from err
    if not isinstance(data, dict):
        raise RecordError(f"record {path!r} must be a JSON object")
    _check_keys(data, _TOP_KEYS, "record")
    record = OrbitRecord(**data)
    validate_record(record)
    return record


# ----------------------------------------------------------------------
# model <-> record conversion
# ----------------------------------------------------------------------


def _series_meta(series: FourierSeries) -> dict:
    return {"k_max": series.k_max, "parity": series.parity.value}


def _family_dict(model: OrbitModel) -> dict:
    fam = model.family
    if fam.kind == "cubic":
        return {"kind": "cubic", "m": fam.m}
    if fam.kind == "crisscross":
        return {"kind": "crisscross", "masses": list(fam.masses)}
    if fam.kind == "choreography":
        return {"kind": "choreography", "n": fam.n, "parity": fam.parity}
    gens = []
    for gen in model.generators:
        if isinstance(gen, ScalarGenerator):
            gens.append({"type": "scalar", "offsets": list(gen.offsets),
                         **_series_meta(gen.series)})
        else:
            gens.append({"type": "vector",
                         "coords": [_series_meta(gen.channel(c)) for c in range(3)]})
    bindings = [{"generator": b.generator, "matrix": b.transform.matrix.tolist(),
                 "phase": b.phase, "mass": b.mass} for b in model.bindings]
    symmetries = [{"matrix": s.transform.matrix.tolist(),
                   "time_shift": s.time_shift,
                   "time_reversal": s.time_reversal} for s in model.symmetries]
    return {"kind": "custom", "generators": gens, "bindings": bindings,
            "symmetries": symmetries}


def _rebuild_model(record: OrbitRecord) -> OrbitModel:
    fam = record.family
    pot = PotentialSpec(**record.potential)
    kind = fam["kind"]
    if kind == "cubic":
        model, _ = build_cubic_family(fam["m"], record.k_max, pot)
        return model
    if kind == "crisscross":
        model, _ = build_crisscross(tuple(fam["masses"]), record.k_max, pot)
        return model
    if kind == "choreography":
        coords = "xyz"
        active: dict[str, tuple] = {}
        for s in record.layout["slots"]:
            _, channel, basis, _k = s
            name = coords[channel]
            bases = active.setdefault(name, ())
            if basis not in bases:
                active[name] = bases + (basis,)
        model, _ = build_choreography(
            fam["n"], active=active or None, k_max=record.k_max,
            parity=Parity(fam["parity"]), potential=pot)
        return model
    generators = []
    for g in fam["generators"]:
        if g["type"] == "scalar":
            series = FourierSeries.zeros(g["k_max"], Parity(g["parity"]))
            generators.append(ScalarGenerator(series, tuple(g["offsets"])))
        else:
            coords = [FourierSeries.zeros(c["k_max"], Parity(c["parity"]))
                      for c in g["coords"]]
            generators.append(VectorGenerator(*coords))
    bindings = [BodyBinding(b["generator"], OrthTransform(b["matrix"]),
                            b["phase"], b["mass"]) for b in fam["bindings"]]
    symmetries = [SpaceTimeSymmetry(OrthTransform(s["matrix"]), s["time_shift"],
                                    s["time_reversal"]) for s in fam["symmetries"]]
    return OrbitModel(tuple(generators), tuple(bindings), pot,
                      Family(kind="custom"), tuple(symmetries))


def record_to_model(record: OrbitRecord) -> tuple[OrbitModel, ReducedParams]:
    """Rebuild the orbit model and reduced parameters from a record."""
    model = _rebuild_model(record)
    try:
        slots = [Slot(*s) for s in record.layout["slots"]]
        couplings = [Coupling(*c) for c in record.layout["couplings"]]
        layout = make_layout(model, slots, couplings)
        params = ReducedParams(layout, np.array(record.values, dtype=float))
    except Exception as err:
        raise RecordError(f"record layout is inconsistent: {err}") from err
    if record.family["kind"] in ("cubic", "crisscross"):
        builder = (build_cubic_family if record.family["kind"] == "cubic"
                   else build_crisscross)
        arg = (record.family["m"] if record.family["kind"] == "cubic"
               else tuple(record.family["masses"]))
        _, reference = builder(arg, record.k_max, model.potential)
        if reference.layout.slots != layout.slots or \
                reference.layout.couplings != layout.couplings:
            raise RecordError("record layout does not match its family builder")
    return model, params


def designated_scale(model: OrbitModel, params: ReducedParams) -> float:
    """Normalization scale for table export: the generator's k=1 sine
    coefficient for normalized families, 1.0 for families exported at
    physical scale."""
    kind = model.family.kind
    if kind in ("cubic", "choreography"):
        for i, s in enumerate(params.layout.slots):
            if (s.gen, s.channel, s.basis, s.k) == (0, 0, SIN, 1):
                return float(params.values[i])
    return 1.0


def _observable_summary(model: OrbitModel, params: ReducedParams) -> dict | None:
    with np.errstate(divide="ignore", invalid="ignore"):
        _, obs = observables_series(model, params, QuadratureGrid(64))
        q_max = max(float(np.abs(o.Q).max()) for o in obs)
        summary = {"E": obs[0].E, "J": [float(v) for v in obs[0].J],
                   "Q_max": q_max}
    flat = [summary["E"], q_max, *summary["J"]]
    if not all(math.isfinite(v) for v in flat):
        return None   # degenerate configuration (e.g. coincident bodies)
    return summary


def _descent_dict(schedule: DescentSchedule | None,
                  stop: StopRule | None) -> dict | None:
    if schedule is None:
        return None
    stop = stop or StopRule()
    return {
        "rule": schedule.rule,
        "delta": schedule.delta,
        "table": None if schedule.table is None else [list(e) for e in schedule.table],
        "grad_tol": stop.grad_tol,
        "max_iters": stop.max_iters,
        "escape_radius": stop.escape_radius,
    }


def make_record(model: OrbitModel, params: ReducedParams,
                result: RunResult | None = None,
                schedule: DescentSchedule | None = None,
                stop: StopRule | None = None) -> OrbitRecord:
    """Snapshot a model + parameters (optionally with its run outcome).

    ``converged`` is set only when the run converged on the gradient
    criterion *and* the residual certificate holds.
    """
    layout = params.layout
    res = None if result is None else result.residual
    grad_norm = None
    outcome = None
    iterations = None
    if result is not None:
        grad_norm = None if math.isinf(result.grad_norm) else float(result.grad_norm)
        outcome = result.outcome
        iterations = result.iterations
    converged = bool(
        result is not None and result.outcome == CONVERGED
        and res is not None and res <= RESIDUAL_CERTIFICATE
        and grad_norm is not None
    )
    return OrbitRecord(
        schema_version=SCHEMA_VERSION,
        family=_family_dict(model),
        potential={"alpha": model.potential.alpha, "G": model.potential.G,
                   "softening": model.potential.softening},
        k_max=layout.k_max,
        layout={
            "slots": [[s.gen, s.channel, s.basis, s.k] for s in layout.slots],
            "couplings": [[c.slot, c.gen, c.channel, c.basis, c.k, c.sign]
                          for c in layout.couplings],
        },
        values=[float(v) for v in params.values],
        scale=designated_scale(model, params),
        converged=converged,
        outcome=outcome,
        iterations=iterations,
        grad_norm=grad_norm,
        residual=None if res is None else float(res),
        observables=_observable_summary(model, params),
        descent=_descent_dict(schedule, stop),
    )


def verify_record(record: OrbitRecord, factor: float = 2.0
                  ) -> tuple[bool, float]:
    """Recompute the residual of a stored orbit.

    Returns (ok, recomputed); for converged records ok means the recomputed
    residual is within ``factor`` times the stored value.
    """
    model, params = record_to_model(record)
    recomputed = residual(model, params).max_violation
    if record.residual is None:
        return True, float(recomputed)
    return bool(recomputed <= factor * record.residual), float(recomputed)


# ----------------------------------------------------------------------
# table export
# ----------------------------------------------------------------------


def _column_name(slot: Slot, family_kind: str) -> str:
    if family_kind == "cubic":
        return "a"
    if family_kind == "crisscross":
        letter = "a" if slot.basis == COS else "b"
        return f"{letter}_{slot.gen + 1}"
    coord = "xyz"[slot.channel] if family_kind != "cubic" else "f"
    return f"{coord}.{slot.basis}"


def export_table(record: OrbitRecord) -> str:
    """Fixed-point coefficient table, one row per harmonic.

    Families with a designated leading coefficient (cubic, choreography)
    are normalized so a_1 = 1 with the signed scale reported in the header;
    the criss-cross family is exported at physical scale to match its
    reference convention.  Formatting is deterministic: fixed column order
    and 5-decimal fixed-point values.
    """
    model, params = record_to_model(record)
    scale = designated_scale(model, params)
    if scale == 0.0:
        raise RecordError("cannot normalize table: designated coefficient is zero")
    kind = model.family.kind
    columns: list[tuple[str, tuple[int, int, str]]] = []
    for s in params.layout.slots:
        key = (s.gen, s.channel, s.basis)
        name = _column_name(s, kind)
        if (name, key) not in columns:
            columns.append((name, key))
    ks = sorted({s.k for s in params.layout.slots})
    table = {key: {} for _, key in columns}
    for i, s in enumerate(params.layout.slots):
        table[(s.gen, s.channel, s.basis)][s.k] = params.values[i] / scale
    lines = [
        f"# family: {_family_label(record)}",
        f"# scale: {scale!r}",
        f"# k_max: {record.k_max}",
        f"# residual: {record.residual!r}",
        "  k " + " ".join(f"{name:>9s}" for name, _ in columns),
    ]
    for k in ks:
        row = [f"{k:3d}"]
        for _, key in columns:
            v = table[key].get(k)
            row.append("         " if v is None else f"{v:9.5f}")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def _family_label(record: OrbitRecord) -> str:
    fam = record.family
    kind = fam["kind"]
    if kind == "cubic":
        return f"cubic m={fam['m']}"
    if kind == "crisscross":
        masses = ":".join(f"{v:g}" for v in fam["masses"])
        return f"crisscross masses {masses}"
    if kind == "choreography":
        return f"choreography n={fam['n']}"
    return "custom"


def write_text(path: str, text: str) -> None:
    """Atomic plain-text write used by all exports."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
