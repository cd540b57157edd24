"""Deterministic JSON and CSV serialization.

JSON output is rendered by hand so the byte stream is reproducible: keys
sorted, floats printed with 17 significant digits, complex numbers as
{"im": ..., "re": ...}.  CSV uses the RFC dialect with '.' decimals and
complex cells written as quoted "re,im" pairs.
"""
import csv
import io

import numpy as np


def _fmt_float(x):
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    out = format(x, ".17g")
    # keep the token a valid JSON number
    return out if ("e" in out or "." in out or "inf" in out) else out + ".0"


def dumps_canonical(obj, indent=None, _level=0):
    """Canonical JSON text for dict/list/str/num/complex/ndarray trees."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            items.append(
                f"{pad}{dumps_canonical(str(key))}: "
                f"{dumps_canonical(obj[key], indent, _level + 1)}"
            )
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        items = [f"{pad}{dumps_canonical(v, indent, _level + 1)}" for v in obj]
        return "[" + ",".join(items) + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps_canonical(obj.tolist(), indent, _level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        for ch, esc in (("\n", "\\n"), ("\r", "\\r"), ("\t", "\\t")):
            out = out.replace(ch, esc)
        return f'"{out}"'
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps_canonical({"re": float(obj.real), "im": float(obj.imag)}, indent, _level)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def complex_to_obj(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def obj_to_complex(d):
    if isinstance(d, dict):
        return complex(float(d.get("re", 0.0)), float(d.get("im", 0.0)))
    return complex(d)


def _fmt_cell(z):
    z = complex(z)
    if z.imag == 0.0:
        return format(z.real, ".17g")
    return f"{format(z.real, '.17g')},{format(z.imag, '.17g')}"


def write_complex_csv(path_or_file, matrix):
    """Write a complex matrix as CSV; cells with commas are auto-quoted."""
    matrix = np.atleast_2d(np.asarray(matrix))

    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        for row in matrix:
            writer.writerow([_fmt_cell(z) for z in row])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def _parse_cell(cell):
    parts = cell.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"malformed complex cell {cell!r}")


def read_complex_csv(path_or_file):
    """Read a CSV of real or quoted "re,im" cells into a complex matrix."""
    def _read(fh):
        rows = [[_parse_cell(c) for c in row] for row in csv.reader(fh) if row]
        return np.array(rows, dtype=complex)

    if hasattr(path_or_file, "read"):
        return _read(path_or_file)
    with open(path_or_file, newline="") as fh:
        return _read(fh)


def csv_text(matrix):
    buf = io.StringIO()
    write_complex_csv(buf, matrix)
    return buf.getvalue()


def decomposition_to_obj(d):
    """JSON-ready summary of a BiSpectralDecomposition."""
    return {
        "eigenvalues": [complex_to_obj(v) for v in d.eigenvalues],
        "biorth_residual": float(d.biorth_residual),
        "hermitian": bool(d.hermitian),
        "retained": int(d.retained),
    }


def jordan_to_obj(jf):
    """JSON-ready summary of a JordanForm."""
    return {
        "blocks": [
            {"lambda": complex_to_obj(lam), "m": int(m)} for lam, m in jf.blocks
        ],
        "residuals": [float(r) for r in jf.residuals],
    }
