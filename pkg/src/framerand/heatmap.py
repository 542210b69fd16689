"""Grayscale PGM heatmaps of energy landscapes."""
from __future__ import annotations

from typing import Sequence

import numpy as np


def landscape_image(rows: Sequence[dict]) -> tuple[np.ndarray, float, float]:
    """8-bit image (row 0 = top) with gamma on x and beta increasing upward.

    Energies map linearly from [min, max] to [0, 255]; a constant landscape
    maps to 128.
    """
    gammas = sorted({r["gamma"] for r in rows})
    betas = sorted({r["beta"] for r in rows})
    if len(rows) != len(gammas) * len(betas):
        raise ValueError("landscape rows do not form a full grid")
    gi = {g: i for i, g in enumerate(gammas)}
    bi = {b: i for i, b in enumerate(betas)}
    e = np.full((len(betas), len(gammas)), np.nan)
    for r in rows:
        e[bi[r["beta"]], gi[r["gamma"]]] = r["energy"]
    lo, hi = float(e.min()), float(e.max())
    if hi > lo:
        img = np.rint((e - lo) / (hi - lo) * 255.0)
    else:
        img = np.full(e.shape, 128.0)
    return img[::-1].astype(np.uint8), lo, hi


def pgm_bytes(img: np.ndarray, lo: float, hi: float) -> bytes:
    h, w = img.shape
    header = f"P5\n# energy range {lo!r} {hi!r} -> 0 255\n{w} {h}\n255\n".encode()
    return header + np.ascontiguousarray(img, dtype=np.uint8).tobytes()


def read_pgm(data: bytes) -> tuple[np.ndarray, list[str]]:
    """Pixels and comment lines of a binary PGM."""
    fields: list[str] = []
    comments: list[str] = []
    pos = 0
    while len(fields) < 4:
        end = data.index(b"\n", pos)
        line = data[pos:end].decode()
        pos = end + 1
        if line.startswith("#"):
            comments.append(line[1:].strip())
        else:
            fields.extend(line.split())
    if fields[0] != "P5":
        raise ValueError("not a binary PGM")
    w, h = int(fields[1]), int(fields[2])
    pix = np.frombuffer(data[pos:pos + w * h], dtype=np.uint8).reshape(h, w)
    return pix, comments
