"""Text formats for codebooks and command-line parameter lists."""

import numpy as np

from .errors import ValidationError
from .metric import Codebook


def parse_codebook(text, field):
    """Generator rows of decimal field elements, one row per line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(v) for v in line.replace(",", " ").split()])
        except ValueError:
            raise ValidationError(f"line {lineno}: codebook entries must be integers") from None
    if not rows:
        raise ValidationError("codebook file has no generator rows")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("codebook rows have different lengths")
    return Codebook(field, np.array(rows, dtype=np.int64))


def codebook_to_text(code):
    return "\n".join(" ".join(str(int(v)) for v in row) for row in code.generator) + "\n"


def parse_sink_values(text, sinks, what):
    """``"t=3,u=2"`` or a single integer applied to every sink."""
    text = text.strip()
    try:
        if "=" not in text:
            v = int(text)
            return {t: v for t in sinks}
        out = {}
        for part in text.split(","):
            name, val = part.split("=")
            name = name.strip()
            if name not in sinks:
                raise ValidationError(f"{what}: unknown sink {name!r}")
            out[name] = int(val)
    except ValueError:
        raise ValidationError(f"{what}: cannot parse {text!r}") from None
    missing = [t for t in sinks if t not in out]
    if missing:
        raise ValidationError(f"{what}: no value for sinks {missing}")
    return out


def parse_vector(text, length=None, what="vector"):
    try:
        v = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"{what}: entries must be integers") from None
    if length is not None and len(v) != length:
        raise ValidationError(f"{what}: expected {length} entries, got {len(v)}")
    return np.array(v, dtype=np.int64)
