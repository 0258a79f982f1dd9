"""Atomic file output, seeded random streams and run manifests for the harness."""

from __future__ import annotations

import os
import tempfile
import zlib
from dataclasses import dataclass, field

import numpy as np

TOOLKIT_VERSION = "0.1.0"


def named_rng(seed: int, name: str) -> np.random.Generator:
    """Independent, reproducible stream derived from one root seed and a label."""
    return np.random.default_rng(
        np.random.SeedSequence([int(seed), zlib.crc32(name.encode("utf-8"))]))


def atomic_write_text(path, text: str):
    """Write-to-temp-then-rename so files appear complete or not at all."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: str, rows) -> str:
    """CSV body with 17-significant-digit floats, LF endings."""
    lines = [header]
    for row in rows:
        cells = []
        for c in row:
            if isinstance(c, float):
                cells.append(f"{c:.17g}")
            else:
                cells.append(str(c))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


@dataclass
class RunManifest:
    """Descriptor echo, version, duration and per-check summary of one run."""

    descriptor: dict
    duration_seconds: float = 0.0
    checks: list = field(default_factory=list)   # (name, passed) pairs
    outputs: list = field(default_factory=list)  # file paths

    def add_check(self, name: str, passed: bool):
        self.checks.append((name, bool(passed)))

    def add_output(self, path):
        self.outputs.append(os.fspath(path))

    def all_passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def validate_outputs(self):
        for path in self.outputs:
            if not (os.path.exists(path) and os.path.getsize(path) > 0):
                raise RuntimeError(f"manifest lists missing or empty output {path}")

    def to_text(self) -> str:
        lines = [f"toolkit_version={TOOLKIT_VERSION}"]
        for k in sorted(self.descriptor):
            lines.append(f"descriptor.{k}={self.descriptor[k]}")
        lines.append(f"duration_seconds={self.duration_seconds:.3f}")
        for name, ok in self.checks:
            lines.append(f"check.{name}={'pass' if ok else 'FAIL'}")
        for path in self.outputs:
            lines.append(f"output={path}")
        return "\n".join(lines) + "\n"
