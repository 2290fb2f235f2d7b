"""Symmetry-constrained orbit families.

An :class:`OrbitModel` describes n bodies whose trajectories are all drawn
from a small set of generator curves: body i follows

    x_i(t) = R_i . g_{G(i)}(t + phi_i)

where R_i is a signed permutation matrix, phi_i a phase offset, and g a
generator built from Fourier series.  A :class:`ParamLayout` lists the
free ("reduced") coefficients and sign couplings that tie the remaining
coefficients to them, so symmetry constraints hold exactly at every
parameter value instead of being projected back after each step.

Built-in families:

* ``build_cubic_family(m)`` -- 4m equal masses on four loops related by the
  Klein four-group of double sign flips; each loop carries m bodies at
  Lagrange phases 2*pi*j/m.  One odd-harmonic sine generator f yields the
  loop as (f(t), f(t + 2*pi/3), f(t + 4*pi/3)).
* ``build_crisscross(masses)`` -- three planar bodies with x_i even and
  y_i odd in t (cosine / sine series, odd harmonics).  For equal masses the
  free coefficients reduce to body 1's two series plus body 3's x series,
  with signed couplings filling in the rest.
* ``build_choreography(n, ...)`` -- n bodies sharing a single curve at
  phases 2*pi*j/n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CollisionError, LayoutError
from .fourier import COS, SIN, FourierSeries, Parity
from .potential import PotentialSpec
from .quadrature import QuadratureGrid

TWO_PI = 2.0 * math.pi

# ----------------------------------------------------------------------
# signed permutation transforms and finite groups
# ----------------------------------------------------------------------


class OrthTransform:
    """A 3x3 signed permutation matrix (entries in {-1, 0, +1})."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix)
        if m.shape != (3, 3):
            raise ValueError(f"transform must be 3x3, got shape {m.shape}")
        mi = np.rint(m).astype(int)
        if not np.all(mi == m):
            raise ValueError("transform entries must be integers -1, 0, +1")
        if not np.all(np.isin(mi, (-1, 0, 1))):
            raise ValueError("transform entries must be in {-1, 0, +1}")
        a = np.abs(mi)
        if not (np.all(a.sum(axis=0) == 1) and np.all(a.sum(axis=1) == 1)):
            raise ValueError("transform must be a signed permutation matrix")
        mi.setflags(write=False)
        object.__setattr__(self, "matrix", mi)

    @property
    def det(self) -> int:
        return int(round(np.linalg.det(self.matrix)))

    @property
    def n_negative(self) -> int:
        return int(np.sum(self.matrix == -1))

    def apply(self, points) -> np.ndarray:
        """Apply to one or many 3-vectors (last axis is the coordinate)."""
        return np.asarray(points, dtype=float) @ self.matrix.T

    def compose(self, other: "OrthTransform") -> "OrthTransform":
        return OrthTransform(self.matrix @ other.matrix)

    def inverse(self) -> "OrthTransform":
        return OrthTransform(self.matrix.T)

    def key(self) -> tuple:
        return tuple(int(v) for v in self.matrix.ravel())

    def __eq__(self, other) -> bool:
        return isinstance(other, OrthTransform) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"OrthTransform({self.matrix.tolist()})"


IDENTITY = OrthTransform(np.eye(3, dtype=int))

# Cyclic coordinate rotation x -> y -> z -> x, i.e. (x, y, z) |-> (z, x, y).
CYCLIC_XYZ = OrthTransform([[0, 0, 1], [1, 0, 0], [0, 1, 0]])


def klein_elements() -> list[OrthTransform]:
    """Identity plus the three diagonal double sign flips."""
    patterns = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    return [OrthTransform(np.diag(p)) for p in patterns]


def _closure(seed: Iterable[OrthTransform]) -> list[OrthTransform]:
    elems = {t.key(): t for t in seed}
    while True:
        new = {}
        for a in elems.values():
            for b in elems.values():
                c = a.compose(b)
                if c.key() not in elems and c.key() not in new:
                    new[c.key()] = c
        if not new:
            break
        elems.update(new)
    return [elems[k] for k in sorted(elems)]


def a4_elements() -> list[OrthTransform]:
    """Rotation group of the cube orientation class: closure of the Klein
    four-group and the cyclic coordinate rotation (12 elements, det +1,
    even number of -1 entries)."""
    return _closure(klein_elements() + [CYCLIC_XYZ])


def all_signed_permutations() -> list[OrthTransform]:
    """All 48 signed permutation matrices (full cube symmetry group)."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = np.zeros((3, 3), dtype=int)
            for row, col in enumerate(perm):
                m[row, col] = signs[row]
            out.append(OrthTransform(m))
    return sorted(out, key=OrthTransform.key)


class Verdict(Enum):
    SAFE = "safe"
    COLLISION = "collision"


def collision_parity_check(m: int) -> Verdict:
    """Whether m bodies per loop avoid forced collisions in the cubic family.

    Two Klein-related loops can only exchange a body when their curve
    parameters differ by half a period; with bodies at phases 2*pi*j/m that
    happens exactly when m is even, so even m forces a collision.
    """
    if int(m) != m or m <= 0:
        raise ValueError(f"loop occupancy m must be a positive integer, got {m}")
    return Verdict.COLLISION if m % 2 == 0 else Verdict.SAFE


# ----------------------------------------------------------------------
# generators and bodies
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarGenerator:
    """One scalar series f feeding all three coordinates at fixed offsets:
    g(t) = (f(t + o_0), f(t + o_1), f(t + o_2))."""

    series: FourierSeries
    offsets: tuple[float, float, float] = (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)

    n_channels = 1

    def channel(self, c: int) -> FourierSeries:
        if c != 0:
            raise IndexError("scalar generator has a single channel")
        return self.series

    def with_coeffs(self, table: np.ndarray) -> "ScalarGenerator":
        series = FourierSeries(table[0, 0], table[0, 1], self.series.parity)
        return ScalarGenerator(series, self.offsets)

    def sample(self, t: np.ndarray, deriv: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        cols = [self.series._eval(t + o, deriv) for o in self.offsets]
        return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class VectorGenerator:
    """Three independent coordinate series (x, y, z)."""

    x: FourierSeries
    y: FourierSeries
    z: FourierSeries

    n_channels = 3

    def channel(self, c: int) -> FourierSeries:
        return (self.x, self.y, self.z)[c]

    def with_coeffs(self, table: np.ndarray) -> "VectorGenerator":
        coords = [FourierSeries(table[c, 0], table[c, 1], self.channel(c).parity)
                  for c in range(3)]
        return VectorGenerator(*coords)

    def sample(self, t: np.ndarray, deriv: int = 0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        cols = [self.channel(c)._eval(t, deriv) for c in range(3)]
        return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class BodyBinding:
    """Places one body on a generator: x(t) = transform . g(t + phase)."""

    generator: int
    transform: OrthTransform
    phase: float
    mass: float = 1.0

    def __post_init__(self):
        if self.generator < 0:
            raise ValueError("generator index must be non-negative")
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive, got {self.mass}")
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)


@dataclass(frozen=True)
class SpaceTimeSymmetry:
    """Claimed invariance: the body set at sigma(t) equals ``transform``
    applied to the body set at t, with sigma(t) = -t if time_reversal else
    t + time_shift."""

    transform: OrthTransform
    time_shift: float = 0.0
    time_reversal: bool = False


@dataclass(frozen=True)
class Family:
    """Tag identifying which builder produced a model."""

    kind: str  # 'cubic' | 'crisscross' | 'choreography' | 'custom'
    m: int | None = None
    masses: tuple[float, ...] | None = None
    n: int | None = None
    parity: str | None = None


@dataclass(frozen=True)
class OrbitModel:
    """Generators, body bindings, and the interaction they move under."""

    generators: tuple
    bindings: tuple[BodyBinding, ...]
    potential: PotentialSpec
    family: Family
    symmetries: tuple[SpaceTimeSymmetry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "bindings", tuple(self.bindings))
        object.__setattr__(self, "symmetries", tuple(self.symmetries))
        if not self.bindings:
            raise ValueError("model needs at least one body")
        for b in self.bindings:
            if b.generator >= len(self.generators):
                raise ValueError(f"binding references missing generator {b.generator}")

    @property
    def n_bodies(self) -> int:
        return len(self.bindings)

    @property
    def masses(self) -> np.ndarray:
        return np.array([b.mass for b in self.bindings])

    @property
    def k_max(self) -> int:
        return max(gen.channel(c).k_max
                   for gen in self.generators for c in range(gen.n_channels))


# ----------------------------------------------------------------------
# reduced coefficients
# ----------------------------------------------------------------------

_BASIS_AXIS = {SIN: 0, COS: 1}


@dataclass(frozen=True)
class Slot:
    """One free coefficient: (generator, channel, basis, harmonic)."""

    gen: int
    channel: int
    basis: str
    k: int

    def __post_init__(self):
        if self.basis not in (SIN, COS):
            raise LayoutError(f"unknown basis {self.basis!r}")
        if self.k < (1 if self.basis == SIN else 0):
            raise LayoutError(f"basis {self.basis} cannot hold harmonic k={self.k}")


@dataclass(frozen=True)
class Coupling:
    """A dependent coefficient tied to a slot by a sign: coeff = sign * value."""

    slot: int
    gen: int
    channel: int
    basis: str
    k: int
    sign: float

    def __post_init__(self):
        if self.basis not in (SIN, COS):
            raise LayoutError(f"unknown basis {self.basis!r}")
        if self.sign not in (-1.0, 1.0):
            raise LayoutError(f"coupling sign must be +/-1, got {self.sign}")


@dataclass(frozen=True)
class ParamLayout:
    """Mapping between the reduced vector and the full coefficient tables."""

    slots: tuple[Slot, ...]
    couplings: tuple[Coupling, ...]
    k_max: int
    gen_channels: tuple[int, ...]
    kinetic_mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "couplings", tuple(self.couplings))
        km = np.asarray(self.kinetic_mass, dtype=float)
        km.setflags(write=False)
        object.__setattr__(self, "kinetic_mass", km)
        if km.shape != (len(self.slots),):
            raise LayoutError("kinetic_mass must have one entry per slot")
        targets = set()
        for s in self.slots:
            self._check_target(s.gen, s.channel, s.basis, s.k)
            tgt = (s.gen, s.channel, s.basis, s.k)
            if tgt in targets:
                raise LayoutError(f"duplicate target {tgt}")
            targets.add(tgt)
        for c in self.couplings:
            if not (0 <= c.slot < len(self.slots)):
                raise LayoutError(f"coupling references missing slot {c.slot}")
            self._check_target(c.gen, c.channel, c.basis, c.k)
            tgt = (c.gen, c.channel, c.basis, c.k)
            if tgt in targets:
                raise LayoutError(f"duplicate target {tgt}")
            targets.add(tgt)

    def _check_target(self, gen, channel, basis, k):
        if not (0 <= gen < len(self.gen_channels)):
            raise LayoutError(f"target references missing generator {gen}")
        if not (0 <= channel < self.gen_channels[gen]):
            raise LayoutError(f"generator {gen} has no channel {channel}")
        if k > self.k_max:
            raise LayoutError(f"harmonic k={k} exceeds layout k_max={self.k_max}")

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    @property
    def slot_k(self) -> np.ndarray:
        return np.array([s.k for s in self.slots])

    def expand(self, values: np.ndarray) -> list[np.ndarray]:
        """Reduced vector -> dense per-generator tables (channels, 2, k_max+1)."""
        values = np.asarray(values, dtype=float)
        tables = [np.zeros((nc, 2, self.k_max + 1)) for nc in self.gen_channels]
        for i, s in enumerate(self.slots):
            tables[s.gen][s.channel, _BASIS_AXIS[s.basis], s.k] = values[i]
        for c in self.couplings:
            tables[c.gen][c.channel, _BASIS_AXIS[c.basis], c.k] = c.sign * values[c.slot]
        return tables

    def project(self, tables: Sequence[np.ndarray]) -> np.ndarray:
        """Chain-rule transpose of :meth:`expand`: full-coefficient gradient
        tables -> reduced gradient vector."""
        out = np.zeros(self.n_slots)
        for i, s in enumerate(self.slots):
            out[i] += tables[s.gen][s.channel, _BASIS_AXIS[s.basis], s.k]
        for c in self.couplings:
            out[c.slot] += c.sign * tables[c.gen][c.channel, _BASIS_AXIS[c.basis], c.k]
        return out


@dataclass(frozen=True)
class ReducedParams:
    """A point in the reduced coefficient space."""

    layout: ParamLayout
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.layout.n_slots,):
            raise LayoutError(
                f"expected {self.layout.n_slots} values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("reduced values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "ReducedParams":
        return ReducedParams(self.layout, values)

    def __len__(self) -> int:
        return self.layout.n_slots


def channel_multiplicity(model: OrbitModel, gen: int, channel: int) -> float:
    """Total mass-weighted number of body coordinates reading a channel.

    A scalar generator feeds all three coordinates of every bound body, a
    vector generator feeds one coordinate per channel.  This is the factor
    that makes the kinetic part of the action diagonal in the reduced
    coefficients: d(int K dt)/d(coeff) = pi * multiplicity * k^2 * coeff.
    """
    reads = 3.0 if isinstance(model.generators[gen], ScalarGenerator) else 1.0
    return reads * sum(b.mass for b in model.bindings if b.generator == gen)


def compute_kinetic_mass(model: OrbitModel, slots: Sequence[Slot],
                         couplings: Sequence[Coupling]) -> np.ndarray:
    """Per-slot effective mass summed over the slot's coupled coefficients."""
    out = np.zeros(len(slots))
    for i, s in enumerate(slots):
        out[i] += channel_multiplicity(model, s.gen, s.channel)
    for c in couplings:
        if not (0 <= c.slot < len(slots)):
            raise LayoutError(f"coupling references missing slot {c.slot}")
        out[c.slot] += channel_multiplicity(model, c.gen, c.channel) * c.sign ** 2
    return out


def make_layout(model: OrbitModel, slots: Sequence[Slot],
                couplings: Sequence[Coupling] = ()) -> ParamLayout:
    """Assemble and validate a layout against a model (custom-family hook)."""
    slots = tuple(slots)
    couplings = tuple(couplings)
    gen_channels = tuple(g.n_channels for g in model.generators)
    for tgt in list(slots) + list(couplings):
        series = model.generators[tgt.gen].channel(tgt.channel)
        if not series.parity.allows(tgt.k):
            raise LayoutError(
                f"harmonic k={tgt.k} is disallowed by the generator's parity mask"
            )
        if tgt.k > model.k_max:
            raise LayoutError(f"harmonic k={tgt.k} exceeds model k_max={model.k_max}")
    return ParamLayout(
        slots=slots,
        couplings=couplings,
        k_max=model.k_max,
        gen_channels=gen_channels,
        kinetic_mass=compute_kinetic_mass(model, slots, couplings),
    )


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------


def expand_generators(model: OrbitModel, params: ReducedParams) -> list:
    """Instantiate the model's generators with the reduced values filled in.

    All coefficients outside the layout (slots plus couplings) are zero.
    """
    tables = params.layout.expand(params.values)
    return [gen.with_coeffs(tables[i]) for i, gen in enumerate(model.generators)]


def _as_times(times) -> tuple[np.ndarray, bool]:
    if isinstance(times, QuadratureGrid):
        return times.nodes, False
    arr = np.asarray(times, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def sample_positions(model: OrbitModel, params: ReducedParams, times,
                     deriv: int = 0) -> np.ndarray:
    """Sample body positions (deriv=0), velocities (1), or accelerations (2).

    Returns an array of shape (n_bodies, n_times, 3); ``times`` may be a
    QuadratureGrid, an array, or a scalar (squeezed to (n_bodies, 3)).
    """
    t, scalar = _as_times(times)
    gens = expand_generators(model, params)
    out = np.empty((model.n_bodies, t.size, 3))
    for i, b in enumerate(model.bindings):
        pre = gens[b.generator].sample(t + b.phase, deriv)
        out[i] = pre @ b.transform.matrix.T
    return out[:, 0, :] if scalar else out


def project_gradient(full_gradient: Sequence[np.ndarray],
                     params: ReducedParams) -> np.ndarray:
    """Project per-coefficient gradient tables onto the reduced slots."""
    return params.layout.project(full_gradient)


# ----------------------------------------------------------------------
# family builders
# ----------------------------------------------------------------------

_ODD_OFFSETS = (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)

# Swap of the last two coordinates; -SWAP_YZ composed with t -> -t is the
# time-reversal symmetry of the cubic family (the generator is odd in t).
SWAP_YZ = OrthTransform([[1, 0, 0], [0, 0, 1], [0, 1, 0]])


def _odd_harmonics(k_max: int) -> list[int]:
    return list(range(1, k_max + 1, 2))


def build_cubic_family(m: int, k_max: int = 27,
                       potential: PotentialSpec | None = None
                       ) -> tuple[OrbitModel, ReducedParams]:
    """4m equal unit masses on four Klein-related loops.

    The single generator is an odd-harmonic sine series f; the base loop is
    (f(t), f(t + 2*pi/3), f(t + 4*pi/3)) and each loop carries m bodies at
    phases 2*pi*j/m.  The seed sets a_1 = 1 (a circle of amplitude 1 in the
    plane normal to (1, 1, 1)).  Even m is rejected with a collision error;
    for m divisible by 3 the model additionally carries the full 12-element
    rotation set (its inertia tensor is then scalar and Q vanishes).
    """
    if collision_parity_check(m) is Verdict.COLLISION:
        raise CollisionError(
            (0, 1),
            context=f"even loop occupancy m={m} forces two loops to exchange "
                    "bodies at a crossing; only odd m avoids collision",
        )
    potential = potential or PotentialSpec()
    series = FourierSeries.zeros(k_max, Parity.ODD_ONLY)
    gen = ScalarGenerator(series, _ODD_OFFSETS)
    bindings = [
        BodyBinding(0, R, TWO_PI * j / m, 1.0)
        for R in klein_elements() for j in range(m)
    ]
    symmetries = [SpaceTimeSymmetry(R) for R in klein_elements()]
    if m > 1:
        symmetries.append(SpaceTimeSymmetry(IDENTITY, time_shift=TWO_PI / m))
    symmetries.append(SpaceTimeSymmetry(
        OrthTransform(-np.eye(3, dtype=int)), time_shift=math.pi))
    symmetries.append(SpaceTimeSymmetry(
        OrthTransform(-SWAP_YZ.matrix), time_reversal=True))
    if m % 3 == 0:
        symmetries.extend(SpaceTimeSymmetry(R) for R in a4_elements())
    model = OrbitModel(
        generators=(gen,),
        bindings=tuple(bindings),
        potential=potential,
        family=Family(kind="cubic", m=int(m)),
        symmetries=tuple(symmetries),
    )
    slots = [Slot(0, 0, SIN, k) for k in _odd_harmonics(k_max)]
    layout = make_layout(model, slots)
    values = np.zeros(layout.n_slots)
    values[0] = 1.0
    return model, ReducedParams(layout, values)


def crisscross_coupling_sign(k: int) -> float:
    """Sign tying body 2's coefficients to body 1's (and y_3 to x_3) in the
    equal-mass criss-cross: +1 for k = 3, 7, 11, ...; -1 for k = 1, 5, 9, ..."""
    if k % 2 == 0:
        raise LayoutError("criss-cross couplings apply to odd harmonics only")
    return 1.0 if k % 4 == 3 else -1.0


def _crisscross_generator(k_max: int) -> VectorGenerator:
    return VectorGenerator(
        x=FourierSeries.zeros(k_max, Parity.ODD_ONLY),
        y=FourierSeries.zeros(k_max, Parity.ODD_ONLY),
        z=FourierSeries.zeros(k_max, Parity.ODD_ONLY),
    )


def build_crisscross(masses: Sequence[float] = (1.0, 1.0, 1.0), k_max: int = 27,
                     potential: PotentialSpec | None = None
                     ) -> tuple[OrbitModel, ReducedParams]:
    """Three planar bodies with x_i(t) even and y_i(t) odd in t.

    Each body has its own generator with x = sum_k a_{i,k} cos(k t) and
    y = sum_k b_{i,k} sin(k t), odd k only (z is identically zero).  For
    equal masses the free coefficients are {a_{1,k}, b_{1,k}, a_{3,k}} and
    the rest follow from sign couplings; the seed is the crossing pattern
    (a_{1,1}, b_{1,1}, a_{3,1}) = (1, 0, -1).  For unequal masses every
    coefficient is free and the seed is the same pattern with its
    center-of-mass component removed once.
    """
    masses = tuple(float(v) for v in masses)
    if len(masses) != 3 or any(not (v > 0 and math.isfinite(v)) for v in masses):
        raise ValueError(f"criss-cross needs three positive masses, got {masses}")
    potential = potential or PotentialSpec()
    ks = _odd_harmonics(k_max)
    gens = tuple(_crisscross_generator(k_max) for _ in range(3))
    bindings = tuple(BodyBinding(i, IDENTITY, 0.0, masses[i]) for i in range(3))
    symmetries = (
        SpaceTimeSymmetry(OrthTransform(-np.eye(3, dtype=int)), time_shift=math.pi),
        SpaceTimeSymmetry(OrthTransform(np.diag([1, -1, 1])), time_reversal=True),
    )
    equal = masses[0] == masses[1] == masses[2]
    model = OrbitModel(
        generators=gens,
        bindings=bindings,
        potential=potential,
        family=Family(kind="crisscross", masses=masses),
        symmetries=symmetries,
    )

    if equal:
        slots: list[Slot] = []
        couplings: list[Coupling] = []
        for k in ks:
            s = crisscross_coupling_sign(k)
            i_a1 = len(slots)
            slots.append(Slot(0, 0, COS, k))          # a_{1,k}
            i_b1 = len(slots)
            slots.append(Slot(0, 1, SIN, k))          # b_{1,k}
            i_a3 = len(slots)
            slots.append(Slot(2, 0, COS, k))          # a_{3,k}
            couplings.append(Coupling(i_b1, 1, 0, COS, k, s))   # a_{2,k} = s b_{1,k}
            couplings.append(Coupling(i_a1, 1, 1, SIN, k, s))   # b_{2,k} = s a_{1,k}
            couplings.append(Coupling(i_a3, 2, 1, SIN, k, s))   # b_{3,k} = s a_{3,k}
        layout = make_layout(model, slots, couplings)
        values = np.zeros(layout.n_slots)
        values[0] = 1.0    # a_{1,1}
        values[2] = -1.0   # a_{3,1}
        return model, ReducedParams(layout, values)

    # Unequal masses: all odd-harmonic coefficients are free.
    slots = [Slot(i, ch, basis, k)
             for k in ks for i in range(3)
             for ch, basis in ((0, COS), (1, SIN))]
    layout = make_layout(model, slots)
    # Seed from the equal-mass crossing pattern...
    seed: dict[tuple[int, int, str, int], float] = {
        (0, 0, COS, 1): 1.0,
        (2, 0, COS, 1): -1.0,
        (1, 1, SIN, 1): crisscross_coupling_sign(1) * 1.0,
        (2, 1, SIN, 1): crisscross_coupling_sign(1) * -1.0,
    }
    # ...with its center-of-mass component subtracted once.
    total = sum(masses)
    for ch, basis in ((0, COS), (1, SIN)):
        for k in ks:
            com = sum(masses[i] * seed.get((i, ch, basis, k), 0.0)
                      for i in range(3)) / total
            if com != 0.0:
                for i in range(3):
                    seed[(i, ch, basis, k)] = seed.get((i, ch, basis, k), 0.0) - com
    values = np.array([seed.get((s.gen, s.channel, s.basis, s.k), 0.0)
                       for s in slots])
    return model, ReducedParams(layout, values)


def build_choreography(n: int,
                       active: Mapping[str, Sequence[str]] | None = None,
                       seed: Mapping[tuple[str, str, int], float] | None = None,
                       k_max: int = 27,
                       parity: Parity = Parity.ODD_ONLY,
                       potential: PotentialSpec | None = None
                       ) -> tuple[OrbitModel, ReducedParams]:
    """n unit masses sharing one curve at Lagrange phases 2*pi*j/n.

    Args:
        active: which (coordinate -> bases) carry free coefficients, e.g.
            ``{"x": ("sin",), "y": ("cos",)}`` (the default, which pins both
            the time origin and the orientation of near-circular curves).
        seed: sparse initial values keyed by (coordinate, basis, k).
        parity: harmonic mask of the shared curve.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"choreography needs a positive body count, got {n}")
    potential = potential or PotentialSpec()
    if active is None:
        active = {"x": (SIN,), "y": (COS,)}
    coords = {"x": 0, "y": 1, "z": 2}
    for name in active:
        if name not in coords:
            raise LayoutError(f"unknown coordinate {name!r}")
    gen = VectorGenerator(
        x=FourierSeries.zeros(k_max, parity),
        y=FourierSeries.zeros(k_max, parity),
        z=FourierSeries.zeros(k_max, parity),
    )
    bindings = tuple(BodyBinding(0, IDENTITY, TWO_PI * j / n, 1.0) for j in range(n))
    symmetries = [SpaceTimeSymmetry(IDENTITY, time_shift=TWO_PI / n)] if n > 1 else []
    if parity is Parity.ODD_ONLY:
        symmetries.append(SpaceTimeSymmetry(
            OrthTransform(-np.eye(3, dtype=int)), time_shift=math.pi))
    model = OrbitModel(
        generators=(gen,),
        bindings=bindings,
        potential=potential,
        family=Family(kind="choreography", n=int(n), parity=parity.value),
        symmetries=tuple(symmetries),
    )
    ks = _odd_harmonics(k_max) if parity is Parity.ODD_ONLY else list(range(1, k_max + 1))
    slots = []
    for name in ("x", "y", "z"):
        if name not in active:
            continue
        for basis in active[name]:
            if basis not in (SIN, COS):
                raise LayoutError(f"unknown basis {basis!r}")
            for k in ks:
                slots.append(Slot(0, coords[name], basis, k))
    layout = make_layout(model, slots)
    values = np.zeros(layout.n_slots)
    if seed is None:
        # unit-circle default: k=1 coefficient of each active coordinate's
        # first basis, so bodies start spread around a radius-1 curve
        seed = {(name, bases[0], 1): 1.0 for name, bases in active.items()
                if bases}
    for (name, basis, k), v in seed.items():
        try:
            idx = slots.index(Slot(0, coords[name], basis, int(k)))
        except ValueError:
            raise LayoutError(f"seed entry ({name}, {basis}, {k}) is not a free slot")
        values[idx] = float(v)
    return model, ReducedParams(layout, values)


# ----------------------------------------------------------------------
# symmetry verification
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryReport:
    """Worst set-matching distance for each claimed space-time symmetry."""

    element_errors: tuple[float, ...]
    tol: float

    @property
    def max_error(self) -> float:
        return max(self.element_errors) if self.element_errors else 0.0

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol


def verify_symmetry(model: OrbitModel, params: ReducedParams, times=None,
                    tol: float = 1e-9) -> SymmetryReport:
    """Check that every claimed symmetry maps the sampled body set to itself.

    For each element, positions at sigma(t) are optimally matched (Hungarian
    assignment) against the transformed positions at t; the report carries
    the worst matched distance per element.
    """
    from scipy.optimize import linear_sum_assignment

    if times is None:
        times = QuadratureGrid(64)
    t, _ = _as_times(times)
    base = sample_positions(model, params, t)  # (n, T, 3)
    errors = []
    for sym in model.symmetries:
        shifted_t = -t if sym.time_reversal else t + sym.time_shift
        target = sample_positions(model, params, shifted_t)
        moved = base @ sym.transform.matrix.T
        worst = 0.0
        for j in range(t.size):
            diff = moved[:, j, :][:, None, :] - target[:, j, :][None, :, :]
            cost = np.sqrt(np.einsum("ilc,ilc->il", diff, diff))
            rows, cols = linear_sum_assignment(cost)
            worst = max(worst, float(cost[rows, cols].max()))
        errors.append(worst)
    return SymmetryReport(tuple(errors), tol)
