"""
Deterministic synthetic signals for oracle tests, recovery tests and benchmarks.

Noise comes from numpy's PCG64 bit generator (``Generator(PCG64(seed))``) via
``standard_normal``, so a given seed reproduces bit-identical fixtures.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DataError, Segmentation, SignalMatrix, uniform_presegmentation
from .utils.file_utils import load_csv, write_csv

logger = logging.getLogger("trace_segmenter.synth")

DATASET_ENV_VAR = "TRACE_SEGMENTER_DATASET"

PAPER_LIKE_SAMPLES = 100
PAPER_LIKE_BOUNDARIES = (17, 38, 61, 83)
# Plateaus 1, 3, 5 in the 0-30 band; 2, 4 in the 50-60 band
PAPER_LIKE_LEVELS = (10.0, 55.0, 25.0, 58.0, 12.0)
STEP_LOW_BAND = (0.0, 0.5)
STEP_HIGH_BAND = (9.5, 10.0)


@dataclass(frozen=True)
class SynthSpec:
    """
    Piecewise-constant signal description.

    Attributes:
        n: Sample count
        m_rows: Row count
        true_boundaries: Ground-truth segmentation
        level_matrix: Constant level per (row, segment)
        noise_sigma: Standard deviation of additive Gaussian noise
        seed: Seed for the noise generator
    """

    n: int
    m_rows: int
    true_boundaries: Segmentation
    level_matrix: np.ndarray
    noise_sigma: float = 0.0
    seed: int = 0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def generate(spec: SynthSpec) -> SignalMatrix:
    """
    Build the piecewise-constant matrix of ``spec`` plus Gaussian noise.

    Raises:
        DataError: If the level matrix does not match the rows and segments
    """
    spec.true_boundaries.check(spec.n)
    levels = np.asarray(spec.level_matrix, dtype=np.float64)
    expected = (spec.m_rows, spec.true_boundaries.num_segments)
    if levels.shape != expected:
        raise DataError(f"level_matrix shape {levels.shape} does not match {expected}")
    if spec.noise_sigma < 0:
        raise DataError(f"noise_sigma must be >= 0, got {spec.noise_sigma}")

    values = np.repeat(levels, spec.true_boundaries.lengths(), axis=1)
    if spec.noise_sigma > 0:
        rng = make_rng(spec.seed)
        values = values + spec.noise_sigma * rng.standard_normal(values.shape)
    return SignalMatrix(values)


def paper_like_test_signal(noise_sigma: float = 1.5, seed: int = 2023) -> SignalMatrix:
    """
    One-row, 100-sample test signal with five alternating plateaus.

    Segments one, three and five sit in the 0-30 band, segments two and four
    in the 50-60 band, with Gaussian noise on top. ``noise_sigma=0`` gives the
    noiseless variant.
    """
    spec = SynthSpec(
        n=PAPER_LIKE_SAMPLES,
        m_rows=1,
        true_boundaries=Segmentation(PAPER_LIKE_BOUNDARIES, PAPER_LIKE_SAMPLES),
        level_matrix=np.array([PAPER_LIKE_LEVELS]),
        noise_sigma=noise_sigma,
        seed=seed,
    )
    matrix = generate(spec)
    return SignalMatrix(matrix.values, ("test_signal",))


def random_step_spec(seed: int, n: int, m_rows: int, s: int, noise_sigma: float = 0.0) -> SynthSpec:
    """
    Seeded step-signal spec with boundaries near the uniform split.

    Boundaries are jittered by at most an eighth of the nominal segment length
    and each row alternates between a low band [0, 0.5] and a high band [9.5, 10],
    so adjacent levels always differ.
    """
    rng = make_rng(seed)
    jitter = int((n / s) // 8)
    boundaries = []
    for nominal in uniform_presegmentation(n, s).boundaries:
        offset = int(rng.integers(-jitter, jitter + 1)) if jitter else 0
        boundaries.append(nominal + offset)

    phases = rng.integers(0, 2, size=m_rows)
    levels = np.empty((m_rows, s))
    for i in range(m_rows):
        for h in range(s):
            high = (h + phases[i]) % 2 == 1
            levels[i, h] = rng.uniform(*STEP_HIGH_BAND) if high else rng.uniform(*STEP_LOW_BAND)

    return SynthSpec(
        n=n,
        m_rows=m_rows,
        true_boundaries=Segmentation(tuple(boundaries), n),
        level_matrix=levels,
        noise_sigma=noise_sigma,
        seed=seed,
    )


def write_fixture(M: SignalMatrix, path: str) -> None:
    """Write a matrix in the CLI's CSV format (rows are signals, no header)."""
    write_csv(M, path, orientation="rows-are-signals")
    logger.info(f"Wrote {M.n_rows}x{M.n_samples} fixture to {path}")


def load_reference_dataset(path: Optional[str] = None,
                           orientation: str = "rows-are-signals") -> Optional[SignalMatrix]:
    """
    Load the converted real trace dataset if it is available.

    Args:
        path: CSV path; defaults to the TRACE_SEGMENTER_DATASET environment variable
        orientation: Layout of the CSV

    Returns:
        The matrix, or None when no dataset is configured or the file is missing
    """
    path = path or os.getenv(DATASET_ENV_VAR)
    if not path:
        logger.debug(f"{DATASET_ENV_VAR} not set; no reference dataset")
        return None
    if not os.path.exists(path):
        logger.warning(f"Reference dataset not found: {path}")
        return None
    return load_csv(path, orientation)
