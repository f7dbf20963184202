import functools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from tldiag import CoxeterSpec, enumerate_fc, theta_diagram


@functools.lru_cache(maxsize=None)
def fc_words(family: str, n: int, max_len: int):
    spec = CoxeterSpec(family, n)
    return tuple(w for level in enumerate_fc(spec, max_len) for w in level)


@functools.lru_cache(maxsize=None)
def images(family: str, n: int, max_len: int):
    spec = CoxeterSpec(family, n)
    return tuple((w, theta_diagram(w, spec)) for w in fc_words(family, n, max_len))
