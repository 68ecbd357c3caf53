"""Rauzy classes of permutations.

Submodules: perm (operators), invariants (cycle invariant, Arf sums, sign),
arf_prover (identities on marked permutations), labelling, dynamics
(reduction, boosted words, monodromy), constructions (edge insertion,
gadgets, I2X builder), explorer (class census) and cli.
"""

from ._kernels import HAVE_NUMBA, backend
from .invariants import arf, cycle_invariant, invariant_triple, sign
from .perm import Permutation, apply_L, apply_R, apply_word, is_irreducible

__all__ = [
    "Permutation", "apply_L", "apply_R", "apply_word", "is_irreducible",
    "cycle_invariant", "arf", "sign", "invariant_triple", "HAVE_NUMBA", "backend",
]
__version__ = "0.1.0"
