import json
import os
from fractions import Fraction
from pathlib import Path

import flatten_dict as fdict
import numpy as np

MAX_GROUND = 64
RANDOM_BOUND = 1000


class WLDPolesError(Exception):
    """
    base class; payload is a json-serialisable dict that the cli writes out
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload if payload is not None else {}


class InputError(WLDPolesError):
    pass


class FindingError(WLDPolesError):
    pass


class InadmissibleDiagramError(InputError):
    pass


class CrossingDiagramError(InputError):
    pass


class RankDeficientError(InputError):
    pass


class MissingVariableError(InputError):
    pass


class FactorNotInRError(InputError):
    pass


class RMismatchError(FindingError):
    pass


class UnstructuredResidualError(FindingError):
    pass


class InconsistencyError(FindingError):
    pass


class PartnerError(FindingError):
    pass


def get_seed(seed=None):
    """
    explicit seed wins, then env var WLDPOLES_SEED, then 0
    >>> get_seed(7)
    7
    """
    if seed is None:
        seed = os.environ.get("WLDPOLES_SEED", 0)
    try:
        return int(seed)
    except ValueError:
        raise InputError("Seed must be an integer, got {}".format(seed))


def cyclic(v, n):
    """
    1-based cyclic index
    >>> cyclic(9, 8)
    1
    >>> cyclic(0, 8)
    8
    >>> cyclic(-1, 6)
    5
    """
    return (v - 1) % n + 1


def cyclic_distance(a, b, n):
    """
    steps needed to walk forward from a to b
    >>> cyclic_distance(6, 3, 8)
    5
    >>> cyclic_distance(3, 3, 8)
    0
    """
    return (b - a) % n


def shifted_order(a, n):
    """
    ground set in the a-th cyclic order
    >>> shifted_order(3, 5)
    [3, 4, 5, 1, 2]
    """
    return [cyclic(a + i, n) for i in range(n)]


def cyclic_interval(start, length, n):
    """
    >>> cyclic_interval(7, 3, 8)
    (7, 8, 1)
    """
    return tuple(cyclic(start + i, n) for i in range(length))


def is_cyclic_interval(subset, ground):
    """
    subset is a contiguous run of ground, where ground is read as a cycle in its sorted order
    >>> is_cyclic_interval({5, 6, 1}, range(1, 7))
    True
    >>> is_cyclic_interval({1, 3}, range(1, 5))
    False
    >>> is_cyclic_interval(set(), range(1, 5))
    True
    """
    ground = sorted(ground)
    subset = set(subset)
    if not subset or subset == set(ground):
        return True
    flags = [g in subset for g in ground]
    # number of run starts around the cycle
    starts = sum(1 for i in range(len(flags)) if flags[i] and not flags[i - 1])
    return starts == 1


def interval_start(subset, ground):
    """
    first element of a proper cyclic interval; for the full ground set the smallest element
    >>> interval_start({5, 6, 1}, range(1, 7))
    5
    >>> interval_start({3, 4}, range(1, 7))
    3
    """
    ground = sorted(ground)
    subset = set(subset)
    if not is_cyclic_interval(subset, ground):
        raise InputError("{} is not a cyclic interval of {}".format(sorted(subset), ground))
    for i, g in enumerate(ground):
        if g in subset and ground[i - 1] not in subset:
            return g
    return ground[0]


def to_mask(elements):
    """
    >>> to_mask([1, 3])
    5
    """
    mask = 0
    for e in elements:
        if not 1 <= e <= MAX_GROUND:
            raise InputError("Ground element {} outside 1..{}".format(e, MAX_GROUND))
        mask |= 1 << (e - 1)
    return mask


def from_mask(mask):
    """
    >>> from_mask(5)
    (1, 3)
    """
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def popcount(mask):
    return bin(mask).count("1")


def iter_submasks(mask):
    """
    all submasks of mask, including 0 and mask itself
    >>> sorted(iter_submasks(5))
    [0, 1, 4, 5]
    """
    sub = mask
    while True:
        yield sub
        if sub == 0:
            break
        sub = (sub - 1) & mask


def random_fraction(rng, positive=True):
    """
    numerator and denominator uniform in [1, 1000]
    >>> rng = np.random.default_rng(0)
    >>> random_fraction(rng) > 0
    True
    """
    num = int(rng.integers(1, RANDOM_BOUND + 1))
    den = int(rng.integers(1, RANDOM_BOUND + 1))
    value = Fraction(num, den)
    if not positive and rng.integers(0, 2):
        value = -value
    return value


def spawn_rng(seed, *keys):
    """
    independent generator for (seed, keys...), stable across runs and worker scheduling
    >>> int(spawn_rng(3, 1).integers(0, 100)) == int(spawn_rng(3, 1).integers(0, 100))
    True
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed)] + [int(k) for k in keys]))


def format_fraction(value):
    """
    >>> format_fraction(Fraction(-3, 4))
    '-3/4'
    >>> format_fraction(Fraction(2))
    '2'
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def parse_fraction(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError("Cannot parse rational {}".format(text))


def dot_reducer(k1, k2):
    if k1 is None:
        return k2
    else:
        return k1 + "." + k2


def dot_splitter(flat_key):
    return flat_key.split(".")


def dict_is_hierarchical(d):
    """
    >>> dict_is_hierarchical({"a": 1, "b": 2})
    False

    >>> dict_is_hierarchical({"a": 1, "b": {"x": 2}})
    True
    """
    is_hierarchical = False
    for k, v in d.items():
        if isinstance(v, dict):
            is_hierarchical = True
    return is_hierarchical


def flatten_dict(nested_d):
    """
    >>> flatten_dict({"case": "Case1", "checks": {"sign_identity": True, "row_space_match": True}})
    {'case': 'Case1', 'checks.sign_identity': True, 'checks.row_space_match': True}

    >>> flatten_dict({"group": 0, "size": 2})
    {'group': 0, 'size': 2}

    >>> flatten_dict(None)
    {}
    """
    if nested_d:
        # fdict.flatten fails if you try to flatten a flat dict
        if dict_is_hierarchical(nested_d):
            return fdict.flatten(nested_d, reducer=dot_reducer)
        else:
            return nested_d
    else:
        return {}


def nest_dict(flat_d):
    """
    >>> nest_dict({"size": 3, "checks.jacobian": True, "checks.sign_identity": None})
    {'size': 3, 'checks': {'jacobian': True, 'sign_identity': None}}
    """
    return fdict.unflatten(flat_d, splitter=dot_splitter)


def clean_none(d, clean_val=""):
    """
    finds None in flat dict and replaces them with clean_val
    >>> clean_none({"a": 1, "b": None})
    {'a': 1, 'b': ''}
    """
    for k, v in d.items():
        if v is None:
            d[k] = clean_val
    return d


def dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(filename):
    f = Path(filename)
    if not f.exists():
        raise InputError("Cannot find input file {}".format(f))
    try:
        with open(f) as fi:
            return json.load(fi)
    except json.JSONDecodeError as e:
        raise InputError("Malformed JSON in {}: {}".format(f, e))
