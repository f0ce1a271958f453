"""Pseudo-Boolean benchmark problems and their transformed instances.

A problem instance returns ``a * f(sigma(x XOR z)) + b`` to the algorithm:
an XOR-shift ``z`` or a coordinate permutation ``sigma`` of the search
point combined with a multiplicative shift ``a`` and an additive shift
``b`` of the function value. All instance parameters are derived
deterministically from ``(function_id, instance_id, dimension)`` through
the seeded generator below, so an experiment can be regenerated anywhere
from its configuration alone. The exact recipes are frozen in
``docs/formats.md``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# Instance-id bands. Instance 1 is the untransformed base problem, the
# rest split between the two search-point transformations.
IDENTITY_INSTANCE = 1
XOR_INSTANCES = range(2, 51)
PERMUTATION_INSTANCES = range(51, 101)
MAX_INSTANCE_ID = 100

_MERSENNE31 = 2147483647  # 2^31 - 1


class SeededGenerator:
    """Reproducible stream of uniform reals in [0, 1).

    Park-Miller multiplicative congruential generator (a=16807,
    m=2^31-1) behind a 32-slot Bays-Durham shuffle, computed in exact
    integer arithmetic so the stream is identical on every platform.
    The recipe is frozen in docs/formats.md; changing it would silently
    change every generated problem instance.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        state = abs(self.seed) % (_MERSENNE31 - 1) + 1
        self._table = [0] * 32
        for i in range(39, -1, -1):
            state = self._advance(state)
            if i < 32:
                self._table[i] = state
        self._state = state
        self._pick = self._table[0]

    @staticmethod
    def _advance(state: int) -> int:
        # Schrage's method: 16807 * state mod (2^31 - 1) without overflow.
        hi, lo = divmod(state, 127773)
        state = 16807 * lo - 2836 * hi
        if state < 0:
            state += _MERSENNE31
        return state

    def next_uniform(self) -> float:
        self._state = self._advance(self._state)
        slot = self._pick // 67108865  # 2^26 + 1, maps state onto 0..31
        self._pick = self._table[slot]
        self._table[slot] = self._state
        return self._pick / _MERSENNE31

    def uniforms(self, count: int) -> list[float]:
        return [self.next_uniform() for _ in range(count)]

    def next_normal(self) -> float:
        """Standard normal draw via Box-Muller from two uniforms."""
        u1 = self.next_uniform()
        u2 = self.next_uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def stream_seed(function_id: int, key: int) -> int:
    """Seed for the instance stream keyed by (function_id, key)."""
    return function_id + 10000 * key


# Key band 1000+dimension keeps linear-function weights clear of the
# per-instance keys (instance ids <= 100, scale draws use id+100).
_LINEAR_WEIGHTS_KEY = 1000


# ---------------------------------------------------------------------------
# Base problems


def _as_bits(x: Sequence[int], name: str = "x") -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty vector")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} entries must be 0 or 1")
    return arr.astype(np.int64)


def onemax(x: Sequence[int]) -> float:
    """Number of one-entries in the bit vector."""
    return float(_as_bits(x).sum())


def leading_ones(x: Sequence[int]) -> float:
    """Length of the longest all-ones prefix."""
    bits = _as_bits(x)
    zeros = np.flatnonzero(bits == 0)
    return float(zeros[0]) if zeros.size else float(bits.size)


def jump(x: Sequence[int], k: int = 1) -> float:
    """Jump function with gap size ``k``.

    Returns ``k + |x|`` at the optimum and on the plateau-free region
    ``|x| <= n - k``, and ``n - |x|`` inside the gap. With ``k = 1`` the
    gap is empty and the function reduces to onemax + 1.
    """
    bits = _as_bits(x)
    n = bits.size
    if not 1 <= k <= n:
        raise ValueError(f"jump size k={k} out of range 1..{n}")
    ones = int(bits.sum())
    if ones == n or ones <= n - k:
        return float(k + ones)
    return float(n - ones)


def linear(x: Sequence[int], w: Sequence[float]) -> float:
    """Weighted sum of the bits, weights in [0, 5]."""
    bits = _as_bits(x)
    weights = np.asarray(w, dtype=float)
    if weights.shape != bits.shape:
        raise ValueError(
            f"weight vector length {weights.size} != input length {bits.size}"
        )
    if weights.size and (weights.min() < 0 or weights.max() > 5):
        raise ValueError("linear weights must lie in [0, 5]")
    return float(weights @ bits)


def linear_weights(dimension: int) -> np.ndarray:
    """Weights of the built-in linear problem, fixed per dimension."""
    gen = SeededGenerator(stream_seed(4, _LINEAR_WEIGHTS_KEY + dimension))
    return np.array([5.0 * gen.next_uniform() for _ in range(dimension)])


# ---------------------------------------------------------------------------
# Transformations


def xor_shift(x: Sequence[int], z: Sequence[int]) -> np.ndarray:
    """Component-wise (x_i + z_i) mod 2."""
    bits = _as_bits(x)
    mask = _as_bits(z, "z")
    if bits.shape != mask.shape:
        raise ValueError(f"length mismatch: {bits.size} vs {mask.size}")
    return np.bitwise_xor(bits, mask)


def permute(x: Sequence, sigma: Sequence[int]) -> np.ndarray:
    """Reorder ``x`` as y_i = x[sigma[i]]."""
    arr = np.asarray(x)
    perm = np.asarray(sigma, dtype=np.int64)
    if perm.shape != (arr.size,) or not np.array_equal(
        np.sort(perm), np.arange(arr.size)
    ):
        raise ValueError("sigma is not a permutation of 0..n-1")
    return arr[perm]


def scale_and_shift(v: float, a: float, b: float) -> float:
    return a * v + b


# ---------------------------------------------------------------------------
# Problems and instances


@dataclass(frozen=True)
class Problem:
    """A named objective over bit vectors of a fixed dimension."""

    function_id: int
    name: str
    dimension: int
    evaluate_raw: Callable[[np.ndarray], float]
    optimum_value: float | None = None


@dataclass(frozen=True)
class InstanceSpec:
    """Deterministic transformation tuple attached to an instance id."""

    instance_id: int
    xor_mask: tuple[int, ...]
    permutation: tuple[int, ...]
    scale: float
    shift: float

    def is_identity(self) -> bool:
        return (
            not any(self.xor_mask)
            and self.permutation == tuple(range(len(self.permutation)))
            and self.scale == 1.0
            and self.shift == 0.0
        )


class InstancedProblem:
    """A base problem composed with one instance transformation.

    Immutable after construction; evaluation is a pure function and safe
    to share across threads.
    """

    def __init__(self, problem: Problem, spec: InstanceSpec):
        n = problem.dimension
        if len(spec.xor_mask) != n or len(spec.permutation) != n:
            raise ValueError("instance spec dimension mismatch")
        if sorted(spec.permutation) != list(range(n)):
            raise ValueError("sigma is not a permutation of 0..n-1")
        self.problem = problem
        self.spec = spec
        self._mask = np.array(spec.xor_mask, dtype=np.int64)
        self._perm = np.array(spec.permutation, dtype=np.int64)

    @property
    def dimension(self) -> int:
        return self.problem.dimension

    def evaluate(self, x: Sequence[int]) -> tuple[float, float]:
        """Return (raw, transformed) = (f(sigma(x XOR z)), a*raw + b)."""
        bits = _as_bits(x)
        if bits.size != self.problem.dimension:
            raise ValueError(
                f"input length {bits.size} != dimension {self.problem.dimension}"
            )
        raw = float(self.problem.evaluate_raw(np.bitwise_xor(bits, self._mask)[self._perm]))
        return raw, self.spec.scale * raw + self.spec.shift


def evaluate_instance(ip: InstancedProblem, x: Sequence[int]) -> tuple[float, float]:
    return ip.evaluate(x)


# ---------------------------------------------------------------------------
# Registry and instance generation

_registry_lock = threading.Lock()
_PROBLEM_FACTORIES: dict[int, tuple[str, Callable[[int], Problem]]] = {}


def register_problem(
    function_id: int,
    name: str,
    evaluator: Callable[[np.ndarray], float],
    optimum: Callable[[int], float] | None = None,
) -> None:
    """Make a user-defined problem addressable from configurations.

    ``evaluator`` maps a bit vector of any dimension to a real value;
    ``optimum``, when given, maps the dimension to the maximal raw value.
    Registered problems take part in instance transformations exactly
    like the built-ins.
    """
    fid = int(function_id)
    if fid < 1:
        raise ValueError("function_id must be a positive integer")

    def factory(dimension: int) -> Problem:
        opt = optimum(dimension) if optimum is not None else None
        return Problem(fid, name, dimension, evaluator, opt)

    with _registry_lock:
        if fid in _PROBLEM_FACTORIES:
            raise ValueError(f"function id {fid} is already registered")
        _PROBLEM_FACTORIES[fid] = (name, factory)


def registered_function_ids() -> list[int]:
    with _registry_lock:
        return sorted(_PROBLEM_FACTORIES)


def get_problem(function_id: int, dimension: int) -> Problem:
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    with _registry_lock:
        try:
            _, factory = _PROBLEM_FACTORIES[function_id]
        except KeyError:
            raise LookupError(f"unknown function id {function_id}") from None
    return factory(dimension)


def _register_builtins() -> None:
    register_problem(1, "OneMax", onemax, optimum=float)
    register_problem(2, "LeadingOnes", leading_ones, optimum=float)
    register_problem(3, "Jump", lambda x: jump(x, 1), optimum=lambda n: float(n + 1))

    def linear_eval(x: np.ndarray) -> float:
        return linear(x, linear_weights(len(x)))

    register_problem(4, "Linear", linear_eval, optimum=lambda n: float(linear_weights(n).sum()))


_register_builtins()


def _identity_spec(instance_id: int, n: int) -> InstanceSpec:
    return InstanceSpec(instance_id, (0,) * n, tuple(range(n)), 1.0, 0.0)


def generate_instance_spec(function_id: int, instance_id: int, dimension: int) -> InstanceSpec:
    """Derive the transformation tuple for (function_id, instance_id).

    One stream per (function_id, instance_id) supplies the additive
    shift (draw 1) and then the XOR mask bits or permutation uniforms
    (draws 2..n+1); a second stream keyed by instance_id+100 supplies
    the multiplicative shift, mirroring the a = |u|/1000*4.8 + 0.2
    scaling of a uniform draw u in [-1000, 1000].
    """
    n = dimension
    if instance_id == IDENTITY_INSTANCE:
        return _identity_spec(instance_id, n)
    if instance_id < 1 or instance_id > MAX_INSTANCE_ID:
        raise ValueError(
            f"instance id {instance_id} outside the supported range 1..{MAX_INSTANCE_ID}"
        )

    gen = SeededGenerator(stream_seed(function_id, instance_id))
    shift = -1000.0 + 2000.0 * gen.next_uniform()

    scale_gen = SeededGenerator(stream_seed(function_id, instance_id + 100))
    scale_draw = -1000.0 + 2000.0 * scale_gen.next_uniform()
    scale = abs(scale_draw) / 1000.0 * 4.8 + 0.2

    if instance_id in XOR_INSTANCES:
        mask = tuple(int(2.0 * gen.next_uniform()) for _ in range(n))
        perm = tuple(range(n))
    else:
        sigma = list(range(n))
        for _ in range(n):
            t = int(gen.next_uniform() * n)
            sigma[0], sigma[t] = sigma[t], sigma[0]
        mask = (0,) * n
        perm = tuple(sigma)
    return InstanceSpec(instance_id, mask, perm, scale, shift)


def make_instance(function_id: int, instance_id: int, dimension: int) -> InstancedProblem:
    """Instantiate a registered problem under its id-derived transformation."""
    if instance_id < 1:
        raise ValueError("instance id must be >= 1")
    problem = get_problem(function_id, dimension)
    spec = generate_instance_spec(function_id, instance_id, dimension)
    return InstancedProblem(problem, spec)
