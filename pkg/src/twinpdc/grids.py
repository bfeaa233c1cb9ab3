"""Uniform complex amplitude grids and their on-disk formats.

An AmplitudeGrid holds a 2-D joint amplitude sampled on uniform axes
centered on zero offsets: angular-frequency offsets (rad/ps) for
spectral grids, barred exit times (ps) for temporal ones.  The grid's
L2 norm under quadrature weighting is the mean photon-pair number.

Two export formats, documented bit-exactly in docs/file_formats.md: a
long-format CSV (axis headers plus re/im columns) and a compact binary
dump with a 64-byte self-describing header.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import NonPowerOfTwo, NotSpectral, NotTemporal

MAGIC = b"TPDCGRID"
FORMAT_VERSION = 1


class Domain(Enum):
    SPECTRAL = 1
    TEMPORAL = 2


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def make_axis(n: int, step: float) -> np.ndarray:
    """Uniform FFT-layout axis through 0: (k - n//2) * step."""
    return (np.arange(n) - n // 2) * step


@dataclass
class AmplitudeGrid:
    """Complex joint amplitude on a uniform (signal x idler) grid.

    ``phase_anchor`` records the linear-phase coefficients
    (t_As, t_Ai) carried by a spectral grid; the Fourier transform to
    the temporal domain strips them so the output is centered on barred
    times.
    """

    values: np.ndarray
    axis_s: np.ndarray
    axis_i: np.ndarray
    domain: Domain
    phase_anchor: Optional[tuple] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.axis_s = np.asarray(self.axis_s, dtype=float)
        self.axis_i = np.asarray(self.axis_i, dtype=float)
        if self.values.shape != (self.axis_s.size, self.axis_i.size):
            raise ValueError("values shape must match axis lengths")
        if not (_is_pow2(self.axis_s.size) and _is_pow2(self.axis_i.size)):
            raise NonPowerOfTwo(
                f"axis lengths {self.values.shape} must be powers of two")
        for ax in (self.axis_s, self.axis_i):
            steps = np.diff(ax)
            if steps.size and not np.allclose(steps, steps[0], rtol=1e-12, atol=0.0):
                raise ValueError("axes must be uniform")
            if steps.size and steps[0] <= 0:
                raise ValueError("axis steps must be positive")

    @property
    def n_s(self) -> int:
        return self.axis_s.size

    @property
    def n_i(self) -> int:
        return self.axis_i.size

    @property
    def step_s(self) -> float:
        return float(self.axis_s[1] - self.axis_s[0])

    @property
    def step_i(self) -> float:
        return float(self.axis_i[1] - self.axis_i[0])

    @property
    def weight(self) -> float:
        """Quadrature weight of one cell."""
        return self.step_s * self.step_i

    def require(self, domain: Domain) -> None:
        if self.domain is not domain:
            exc = NotSpectral if domain is Domain.SPECTRAL else NotTemporal
            raise exc(f"grid is {self.domain.name.lower()}")

    def photon_number(self) -> float:
        """Quadrature of |amplitude|^2: the mean pair number N."""
        return float(np.sum(np.abs(self.values) ** 2) * self.weight)

    def probability(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def edge_ring_mass(self, fraction: float = 0.05) -> float:
        """Fraction of total |amplitude|^2 mass in the outermost ring.

        The ring is every cell within ``fraction`` of either border on
        either axis; the truncation audit requires it to be small.
        """
        p = self.probability()
        total = p.sum()
        if total == 0.0:
            return 0.0
        ks = max(1, int(np.ceil(fraction * self.n_s)))
        ki = max(1, int(np.ceil(fraction * self.n_i)))
        interior = p[ks:-ks, ki:-ki].sum()
        return float((total - interior) / total)

    # -- on-disk formats ---------------------------------------------------

    def save_binary(self, path) -> None:
        header = struct.pack(
            "<8sHHII4d",
            MAGIC, FORMAT_VERSION, self.domain.value,
            self.n_s, self.n_i,
            self.step_s, self.step_i,
            float(self.axis_s[self.n_s // 2]), float(self.axis_i[self.n_i // 2]),
        )
        header = header.ljust(64, b"\0")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(self.values,
                                          dtype="<c16").tobytes())

    @classmethod
    def load_binary(cls, path) -> "AmplitudeGrid":
        with open(path, "rb") as fh:
            header = fh.read(64)
            magic, version, domain, n_s, n_i, step_s, step_i, c_s, c_i = (
                struct.unpack("<8sHHII4d", header[:52]))
            if magic != MAGIC:
                raise ValueError("not a twinpdc grid dump")
            if version != FORMAT_VERSION:
                raise ValueError(f"unsupported grid format version {version}")
            data = np.frombuffer(fh.read(16 * n_s * n_i), dtype="<c16")
        values = data.reshape(n_s, n_i).astype(np.complex128)
        axis_s = make_axis(n_s, step_s) + c_s
        axis_i = make_axis(n_i, step_i) + c_i
        return cls(values, axis_s, axis_i, Domain(domain))

    def save_csv(self, path, extra_header=()) -> None:
        labels = ("omega_s[rad/ps]", "omega_i[rad/ps]") \
            if self.domain is Domain.SPECTRAL else ("t_s[ps]", "t_i[ps]")
        with open(path, "w", newline="") as fh:
            fh.write(f"# twinpdc-grid v{FORMAT_VERSION}\n")
            fh.write(f"# domain: {self.domain.name.lower()}\n")
            for line in extra_header:
                fh.write(f"# {line}\n")
            fh.write(f"{labels[0]},{labels[1]},re,im\n")
            for a, row in zip(self.axis_s, self.values):
                for b, v in zip(self.axis_i, row):
                    fh.write(f"{a:.17g},{b:.17g},{v.real:.17g},{v.imag:.17g}\n")

    @classmethod
    def load_csv(cls, path) -> "AmplitudeGrid":
        domain = None
        with open(path) as fh:
            rows = []
            for line in fh:
                if line.startswith("#"):
                    if line.startswith("# domain:"):
                        domain = Domain[line.split(":")[1].strip().upper()]
                    continue
                if line[0].isalpha() or line.startswith("omega") or line.startswith("t_"):
                    continue
                rows.append(tuple(float(x) for x in line.strip().split(",")))
        if domain is None:
            raise ValueError("missing domain header")
        data = np.asarray(rows)
        axis_s = np.unique(data[:, 0])
        axis_i = np.unique(data[:, 1])
        values = (data[:, 2] + 1j * data[:, 3]).reshape(axis_s.size, axis_i.size)
        return cls(values, axis_s, axis_i, domain)


def save_columns_csv(path, header_lines, column_names, columns) -> None:
    """Deterministic multi-column CSV writer used by marginals/sweeps."""
    columns = [np.asarray(c) for c in columns]
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(column_names) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"
