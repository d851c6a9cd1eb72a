"""Text formats: provenance-headed CSV, field and initial-datum files, SVG plots.

Every file starts with '# key: value' lines.  Writes go to a temporary file
in the target directory and are renamed into place.
"""
import csv
import io
import os
import tempfile

import numpy as np

from .spectrum import CoefficientProfile, FourierField, ThetaPoint


def atomic_write_text(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (list, tuple)):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def format_header(meta):
    return "".join(f"# {k}: {_fmt(v)}\n" for k, v in meta.items())


def write_csv(path, columns, rows, meta=None):
    buf = io.StringIO()
    buf.write(format_header(meta or {}))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def read_csv(path):
    """(meta dict of strings, column names, list of row lists of strings)."""
    meta, lines = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# "):
                key, _, value = line[2:].rstrip("\n").partition(": ")
                meta[key] = value
            else:
                lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader)
    return meta, columns, [row for row in reader]


def profile_meta(profile):
    return {"profile_kind": profile.kind, "profile_a": profile.a, "profile_b": profile.b, "profile_N": profile.N}


def profile_from_meta(meta):
    return CoefficientProfile(float(meta["profile_b"]), meta["profile_kind"], float(meta["profile_a"]),
                              int(meta["profile_N"]))


def write_field(path, field, profile=None, seed=None, stream_index=None, extra=None):
    meta = {"time_stamp": field.time_stamp, "epsilon": field.epsilon}
    if profile is not None:
        meta.update(profile_meta(profile))
    if seed is not None:
        meta["master_seed"] = seed
    if stream_index is not None:
        meta["stream_index"] = stream_index
    meta.update(extra or {})
    rows = zip(field.k, field.modes.real, field.modes.imag)
    write_csv(path, ("k", "re", "im"), rows, meta)


def read_field(path):
    meta, _, rows = read_csv(path)
    data = np.array(rows, dtype=float)
    order = np.argsort(data[:, 0])
    modes = data[order, 1] + 1j * data[order, 2]
    return FourierField(modes, float(meta.get("time_stamp", 0.0)), float(meta.get("epsilon", 0.0))), meta


def write_theta(path, theta, extra=None):
    """Initial datum as (k, r, phi) rows; readable back with read_theta."""
    meta = profile_meta(theta.profile)
    meta.update(extra or {})
    write_csv(path, ("k", "r", "phi"), zip(theta.profile.k, theta.r, theta.phi), meta)


def read_theta(path):
    meta, _, rows = read_csv(path)
    data = np.array(rows, dtype=float)
    data = data[np.argsort(data[:, 0])]
    return ThetaPoint(data[:, 1], data[:, 2], profile_from_meta(meta)), meta


def write_svg(path, x, series, labels=None, hline=None, xlabel="x", ylabel="", title=""):
    """Line plot with an optional dashed reference level, deterministic SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "roguewave"
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for i, y in enumerate(series):
        ax.plot(x, y, lw=1.0, label=None if labels is None else labels[i])
    if hline is not None:
        ax.axhline(hline, ls="--", color="k", lw=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if labels is not None:
        ax.legend(frameon=False)
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    atomic_write_text(path, buf.getvalue())
