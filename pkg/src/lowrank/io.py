"""MatrixMarket, raw binary and CSV result files."""

import csv
import struct
from dataclasses import astuple, dataclass, fields

import numpy as np

from .core import as_matrix
from .errors import ParseError, ParameterError

MM_BANNER = "%%MatrixMarket"


def _fmt(x):
    # 17 significant digits round-trip every double
    return format(float(x), ".17g")


def write_matrix_market(path, a, format="array"):
    """Write a real general matrix; ``format`` is "array" (dense) or "coordinate" (nonzeros only)."""
    a = as_matrix(a)
    m, n = a.shape
    with open(path, "w", encoding="ascii") as fh:
        if format == "array":
            fh.write(f"{MM_BANNER} matrix array real general\n{m} {n}\n")
            # column-major entry order
            fh.writelines(_fmt(x) + "\n" for x in a.T.ravel())
        elif format == "coordinate":
            rows, cols = np.nonzero(a)
            order = np.lexsort((rows, cols))
            rows, cols = rows[order], cols[order]
            fh.write(f"{MM_BANNER} matrix coordinate real general\n{m} {n} {rows.size}\n")
            fh.writelines(f"{i + 1} {j + 1} {_fmt(a[i, j])}\n" for i, j in zip(rows, cols))
        else:
            raise ParameterError(f"unknown MatrixMarket format {format!r}")


def _data_lines(fh, start):
    for lineno, line in enumerate(fh, start=start):
        text = line.strip()
        if text and not text.startswith("%"):
            yield lineno, text


def _ints(text, count, lineno):
    parts = text.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} integers, got {text!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"malformed size line {text!r}", lineno) from None


def _real(text, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"malformed real value {text!r}", lineno) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite value {text!r}", lineno)
    return value


def read_matrix_market(path):
    """Read a ``real general`` MatrixMarket file in array or coordinate layout."""
    with open(path, encoding="ascii", errors="replace") as fh:
        header = fh.readline()
        tokens = header.split()
        if len(tokens) != 5 or tokens[0] != MM_BANNER or tokens[1].lower() != "matrix":
            raise ParseError(f"not a MatrixMarket matrix header: {header.strip()!r}", 1)
        layout, field, symmetry = (t.lower() for t in tokens[2:])
        if layout not in ("array", "coordinate"):
            raise ParseError(f"unsupported layout {layout!r}", 1)
        if field != "real":
            raise ParseError(f"unsupported field {field!r}; only real is accepted", 1)
        if symmetry != "general":
            raise ParseError(f"unsupported symmetry {symmetry!r}; only general is accepted", 1)

        lines = _data_lines(fh, start=2)
        try:
            lineno, size = next(lines)
        except StopIteration:
            raise ParseError("missing size line", 2) from None

        if layout == "array":
            m, n = _ints(size, 2, lineno)
            if m < 1 or n < 1:
                raise ParseError(f"invalid dimensions {m}x{n}", lineno)
            values = []
            for lineno, text in lines:
                values.append(_real(text, lineno))
            if len(values) != m * n:
                raise ParseError(f"expected {m * n} entries, found {len(values)}", lineno)
            return np.array(values).reshape(n, m).T.copy()

        m, n, nnz = _ints(size, 3, lineno)
        if m < 1 or n < 1 or nnz < 0:
            raise ParseError(f"invalid dimensions {m}x{n} with {nnz} entries", lineno)
        a = np.zeros((m, n))
        count = 0
        for lineno, text in lines:
            parts = text.split()
            if len(parts) != 3:
                raise ParseError(f"expected 'row col value', got {text!r}", lineno)
            i, j = _ints(" ".join(parts[:2]), 2, lineno)
            if not (1 <= i <= m and 1 <= j <= n):
                raise ParseError(f"index ({i}, {j}) outside {m}x{n}", lineno)
            a[i - 1, j - 1] += _real(parts[2], lineno)
            count += 1
        if count != nnz:
            raise ParseError(f"header announces {nnz} entries, found {count}", lineno)
        return a


def write_binary(path, a):
    """Little-endian int64 rows and cols, then row-major float64 entries."""
    a = as_matrix(a)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<qq", *a.shape))
        fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def read_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) != 16:
            raise ParseError("truncated binary header")
        m, n = struct.unpack("<qq", head)
        if m < 1 or n < 1:
            raise ParseError(f"invalid dimensions {m}x{n}")
        body = fh.read()
    if len(body) != 8 * m * n:
        raise ParseError(f"expected {8 * m * n} bytes of entries, found {len(body)}")
    return np.frombuffer(body, dtype="<f8").reshape(m, n).astype(np.float64)


def read_matrix(path):
    """Dispatch on extension: ``.bin`` is the binary format, anything else MatrixMarket."""
    return read_binary(path) if str(path).endswith(".bin") else read_matrix_market(path)


@dataclass(frozen=True)
class ResultRecord:
    matrix_id: str
    method: str
    k: int
    trial_seed: int
    rel_spectral: float
    rel_frob: float
    elapsed_ms: float
    storage_units: int

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.rel_spectral < 0 or self.rel_frob < 0:
            raise ParameterError("relative errors must be nonnegative")


RESULT_FIELDS = [f.name for f in fields(ResultRecord)]


def _cell(value):
    return repr(float(value)) if isinstance(value, float) else str(value)


def write_results_csv(path, records):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_FIELDS)
        for rec in records:
            writer.writerow(_cell(v) for v in astuple(rec))


def read_results_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty results file", 1) from None
        if header != RESULT_FIELDS:
            raise ParseError(f"header {header} does not match {RESULT_FIELDS}", 1)
        records = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(RESULT_FIELDS):
                raise ParseError(f"expected {len(RESULT_FIELDS)} fields, got {len(row)}", lineno)
            try:
                records.append(
                    ResultRecord(
                        matrix_id=row[0],
                        method=row[1],
                        k=int(row[2]),
                        trial_seed=int(row[3]),
                        rel_spectral=float(row[4]),
                        rel_frob=float(row[5]),
                        elapsed_ms=float(row[6]),
                        storage_units=int(row[7]),
                    )
                )
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        return records
