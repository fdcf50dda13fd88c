"""Executable tube-null machinery for digit-restricted self-similar sets.

Submodules: ``core`` (exact digit systems and IFSs), ``projection``
(projected IFSs, weak separation), ``measures`` (entropy dimensions),
``fourier`` (coefficients and R0 certificates), ``cover`` (explicit slab
covers), ``render`` and ``cli``.
"""
import json as _json
from importlib import resources as _resources

from ._accel import BACKEND, HAVE_EXT
from .core import (
    DEFAULT_BUDGET, Box, BudgetExceeded, CarpetSpec, HoleReport, HomIfsSpec, carpet_to_ifs, cylinder_box,
    find_hole, iterate_ifs, reduce_invariant_set, word_translation,
)
from .cover import (
    FreqCount, Slab, TubeCover, count_freq_words, cover_weight_curve, generate_cover, pigeonhole_pair,
    slab_to_tubes, verify_cover,
)
from .fourier import NotFound, R0Certificate, find_nonvanishing, invariance_check, r0_certificate, ss_fourier
from .measures import (
    BernoulliMeasure, EntropyReport, dimension_drop_scan, entropy_dimension_estimate, garsia_gap,
    offset_partition_entropy, pushforward_weights, scale_entropy, shannon_entropy, subadditivity_probe,
)
from .projection import (
    Direction, ProjectedIfs, exact_overlap_directions, level_offsets, overlap_multiplicity, project_ifs,
    wsc_check,
)

__version__ = "0.1.0"

EXAMPLES = ("sierpinski", "carpet15", "triangle", "four_corners")


def load_example(name: str):
    """(system, measure or None) for one of the bundled specs in ``EXAMPLES``."""
    from . import io

    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {EXAMPLES}")
    text = _resources.files(__name__).joinpath("data", f"{name}.json").read_text()
    return io.system_from_json(_json.loads(text))
