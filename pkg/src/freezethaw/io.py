"""Byte-stable CSV/JSON emission and report (de)serialization."""
import json
import math

from .freeze import FreezeCriteria, FreezeReport, FrozenInterval, PredictedTimings

SCHEMA_VERSION = 1


def fmt_float(x):
    """Shortest decimal string that round-trips the 64-bit float."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return _jsonable(obj.item())
    return obj


def dumps_json(obj):
    """Deterministic JSON: sorted keys, infinities as the string "inf", trailing newline."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _inf(v):
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return v


def write_csv(stream, columns, rows, comments=()):
    """Comment lines ('# ...'), one header row, then rows of floats; LF endings."""
    for line in comments:
        stream.write(f"# {line}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(v if isinstance(v, str) else fmt_float(v) for v in row) + "\n")


def report_to_dict(report: FreezeReport):
    return {
        "schema": SCHEMA_VERSION,
        "which": report.which,
        "n_sites_b": "inf" if report.n_sites_b is None else report.n_sites_b,
        "frozen_intervals": [iv._asdict() for iv in report.frozen_intervals],
        "thaw_onsets": list(report.thaw_onsets),
        "thaw_events": list(report.thaw_events),
        "predicted": report.predicted._asdict(),
        "deviations": report.deviations,
        "grid_end": report.grid_end,
        "unbounded": report.unbounded,
        "criteria": {
            "window": report.criteria.window,
            "stability_ratio": report.criteria.stability_ratio,
            "derivative_tol": report.criteria.derivative_tol,
            "min_duration": report.criteria.min_duration,
        },
    }


def report_from_dict(data):
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    n = data["n_sites_b"]
    return FreezeReport(
        which=data["which"],
        n_sites_b=None if n == "inf" else int(n),
        frozen_intervals=[FrozenInterval(**iv) for iv in data["frozen_intervals"]],
        thaw_onsets=list(data["thaw_onsets"]),
        thaw_events=list(data["thaw_events"]),
        predicted=PredictedTimings(**{k: _inf(v) for k, v in data["predicted"].items()}),
        deviations=data["deviations"],
        grid_end=data["grid_end"],
        criteria=FreezeCriteria(**data["criteria"]),
    )
