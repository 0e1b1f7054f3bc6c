"""Finite generalized Boolean algebras realised as fields of sets.

Every family here lives inside a finite, immutable :class:`Universe` of
atoms.  Elements are bitmasks over the universe.  A :class:`Gba` is stored
through its *blocks*: the minimal nonempty members, which partition the
union of the family.  Members are exactly the unions of blocks, so
membership, ideals and covers reduce to block arithmetic and nothing has to
enumerate the (exponentially large) member list unless asked to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from ._check import Check
from .errors import CapacityError, ClosureViolationError, InvalidInputError

DEFAULT_MAX_ATOMS = 24
# exhaustive member listings beyond this many blocks are refused
MAX_ENUMERATED_BLOCKS = 20


@dataclass(frozen=True)
class Universe:
    atoms: tuple

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise InvalidInputError(f"duplicate atoms in universe {self.atoms!r}")

    @cached_property
    def _index(self):
        return {a: i for i, a in enumerate(self.atoms)}

    def __len__(self):
        return len(self.atoms)

    def mask_of(self, atoms: Iterable[Hashable]) -> int:
        index = self._index
        mask = 0
        for a in atoms:
            try:
                mask |= 1 << index[a]
            except KeyError:
                raise InvalidInputError(f"atom {a!r} is not in the universe") from None
        return mask

    def atoms_of(self, mask: int) -> frozenset:
        return frozenset(a for i, a in enumerate(self.atoms) if mask >> i & 1)

    def element(self, atoms: Iterable[Hashable]) -> "GbaElement":
        return GbaElement(self, self.mask_of(atoms))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1


def _as_universe(universe) -> Universe:
    if isinstance(universe, Universe):
        return universe
    return Universe(tuple(universe))


@dataclass(frozen=True)
class GbaElement:
    """A finite set of atoms; ``mask`` bit *i* marks ``universe.atoms[i]``."""

    universe: Universe = field(repr=False, compare=True)
    mask: int

    def _other(self, other: "GbaElement") -> int:
        if not isinstance(other, GbaElement):
            return NotImplemented
        if other.universe != self.universe:
            raise InvalidInputError("elements live in different universes")
        return other.mask

    def __or__(self, other):
        return GbaElement(self.universe, self.mask | self._other(other))

    def __and__(self, other):
        return GbaElement(self.universe, self.mask & self._other(other))

    def __sub__(self, other):
        return GbaElement(self.universe, self.mask & ~self._other(other))

    def __le__(self, other):
        m = self._other(other)
        return self.mask & ~m == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __bool__(self):
        return self.mask != 0

    def __len__(self):
        return bin(self.mask).count("1")

    @property
    def atoms(self) -> frozenset:
        return self.universe.atoms_of(self.mask)

    def sorted_atoms(self) -> list:
        return [a for i, a in enumerate(self.universe.atoms) if self.mask >> i & 1]

    def __repr__(self):
        return "{" + ",".join(map(str, self.sorted_atoms())) + "}"


def _blocks_of(masks: Iterable[int]) -> tuple:
    """Partition the union of ``masks`` by membership signature."""
    masks = [m for m in masks if m]
    union = 0
    for m in masks:
        union |= m
    cells: dict = {}
    bit = 0
    while union >> bit:
        if union >> bit & 1:
            sig = tuple(m >> bit & 1 for m in masks)
            cells[sig] = cells.get(sig, 0) | (1 << bit)
        bit += 1
    return tuple(sorted(cells.values()))


def iter_submasks_of_blocks(blocks: Sequence[int]) -> Iterator[int]:
    """All unions of the given (disjoint) block masks, sorted by mask."""
    out = [0]
    for b in blocks:
        out += [m | b for m in out]
    yield from sorted(out)


class Gba:
    """A finite generalized Boolean algebra of subsets of ``universe``."""

    def __init__(self, universe: Universe, blocks: Iterable[int]):
        self.universe = _as_universe(universe)
        blocks = tuple(sorted(set(blocks)))
        seen = 0
        for b in blocks:
            if b == 0 or b & seen:
                raise InvalidInputError("blocks must be nonempty and pairwise disjoint")
            seen |= b
        if seen & ~self.universe.full_mask:
            raise InvalidInputError("blocks reach outside the universe")
        self.block_masks = blocks
        self.top_mask = seen
        self._block_of_bit = {}
        for b in blocks:
            m = b
            while m:
                low = m & -m
                self._block_of_bit[low] = b
                m ^= low

    @classmethod
    def from_masks(cls, universe: Universe, masks: Iterable[int]) -> "Gba":
        return cls(universe, _blocks_of(masks))

    def __repr__(self):
        return f"Gba(blocks={[self.element(b) for b in self.block_masks]})"

    def __eq__(self, other):
        return (
            isinstance(other, Gba)
            and self.universe == other.universe
            and self.block_masks == other.block_masks
        )

    def __hash__(self):
        return hash((self.universe, self.block_masks))

    def element(self, mask_or_atoms) -> GbaElement:
        if isinstance(mask_or_atoms, int):
            return GbaElement(self.universe, mask_or_atoms)
        if isinstance(mask_or_atoms, GbaElement):
            return mask_or_atoms
        return self.universe.element(mask_or_atoms)

    @property
    def zero(self) -> GbaElement:
        return GbaElement(self.universe, 0)

    @property
    def top(self) -> GbaElement:
        return GbaElement(self.universe, self.top_mask)

    @property
    def blocks(self) -> list:
        return [GbaElement(self.universe, b) for b in self.block_masks]

    def block_containing(self, bit_mask: int) -> int:
        return self._block_of_bit[bit_mask & -bit_mask]

    def contains_mask(self, mask: int) -> bool:
        if mask & ~self.top_mask:
            return False
        m = mask
        while m:
            low = m & -m
            b = self._block_of_bit[low]
            if b & ~mask:
                return False
            m &= ~b
        return True

    def __contains__(self, x) -> bool:
        if isinstance(x, GbaElement):
            if x.universe != self.universe:
                return False
            return self.contains_mask(x.mask)
        return self.contains_mask(self.universe.mask_of(x))

    def blocks_in(self, mask: int) -> list:
        """Blocks below ``mask`` (``mask`` should be a member)."""
        return [b for b in self.block_masks if b & mask == b]

    def __len__(self):
        return 1 << len(self.block_masks)

    @property
    def members(self) -> list:
        if len(self.block_masks) > MAX_ENUMERATED_BLOCKS:
            raise CapacityError(
                f"refusing to list 2^{len(self.block_masks)} members",
                bound=MAX_ENUMERATED_BLOCKS,
            )
        return [GbaElement(self.universe, m) for m in iter_submasks_of_blocks(self.block_masks)]

    def ideal_below(self, x) -> "Gba":
        """The principal ideal of members contained in ``x``."""
        mask = x.mask if isinstance(x, GbaElement) else x
        if not self.contains_mask(mask):
            raise ClosureViolationError(f"{self.element(mask)!r} is not a member")
        return Gba(self.universe, self.blocks_in(mask))

    def is_subalgebra_of(self, other: "Gba") -> bool:
        return self.universe == other.universe and all(
            other.contains_mask(b) for b in self.block_masks
        )

    def relative_complement(self, a: GbaElement, b: GbaElement) -> GbaElement:
        return relative_complement(a, b, ambient=self)


def make_gba(universe, generators: Iterable[Iterable[Hashable]] = (), max_atoms=DEFAULT_MAX_ATOMS) -> Gba:
    """Close ``generators`` together with the empty set under union,
    intersection and relative complement."""
    universe = _as_universe(universe)
    if max_atoms is not None and len(universe) > max_atoms:
        raise CapacityError(
            f"universe has {len(universe)} atoms (cap {max_atoms})", bound=max_atoms
        )
    masks = []
    for g in generators:
        if isinstance(g, GbaElement):
            if g.universe != universe:
                raise InvalidInputError("generator from a different universe")
            masks.append(g.mask)
        else:
            masks.append(universe.mask_of(g))
    return Gba(universe, _blocks_of(masks))


def powerset(universe, max_atoms=DEFAULT_MAX_ATOMS) -> Gba:
    universe = _as_universe(universe)
    return make_gba(universe, [[a] for a in universe.atoms], max_atoms=max_atoms)


def _family_masks(family, amb: Gba) -> list:
    out = set()
    for x in family:
        if isinstance(x, GbaElement):
            if x.universe != amb.universe:
                raise InvalidInputError("family element from a different universe")
            out.add(x.mask)
        else:
            out.add(amb.universe.mask_of(x))
    return sorted(out)


def is_ideal(sub, amb: Gba) -> Check:
    """Decide whether ``sub`` is an ideal of ``amb``.

    ``sub`` may be a :class:`Gba` or an explicit family of elements.  On
    failure the witness is the first violating pair ``(a, b)`` in mask
    order: either ``a ∨ b`` or ``a ∧ b`` falls outside ``sub``.
    """
    if isinstance(sub, Gba):
        if not sub.is_subalgebra_of(amb):
            raise InvalidInputError("sub is not contained in the ambient algebra")
        # an ideal of a finite Gba consists of whole ambient blocks
        for a in sub.block_masks:
            inside = amb.blocks_in(a)
            if inside != [a]:
                return Check(False, (amb.element(a), amb.element(inside[0])))
        return Check(True)

    masks = _family_masks(sub, amb)
    for m in masks:
        if not amb.contains_mask(m):
            raise InvalidInputError(f"{amb.element(m)!r} is not a member of the ambient algebra")
    members = set(masks)
    amb_members = list(iter_submasks_of_blocks(amb.block_masks)) if len(amb.block_masks) <= MAX_ENUMERATED_BLOCKS else None
    if amb_members is None:
        raise CapacityError("ambient algebra too large for an explicit-family ideal test")
    for a in masks:
        for b in amb_members:
            if a & b not in members:
                return Check(False, (amb.element(a), amb.element(b)))
            if b in members and a | b not in members:
                return Check(False, (amb.element(a), amb.element(b)))
    return Check(True)


def is_cover(candidate, target: Gba) -> Check:
    """Every member of ``target`` lies below a finite join of candidates.

    The witness is the first uncovered member in mask order.
    """
    masks = _family_masks(candidate, target)
    union = 0
    for m in masks:
        union |= m
    missing = [b for b in target.block_masks if b & ~union]
    if not missing:
        return Check(True)
    return Check(False, target.element(min(missing)))


def relative_complement(a: GbaElement, b: GbaElement, ambient: Gba | None = None) -> GbaElement:
    result = a - b
    if ambient is not None and result not in ambient:
        raise ClosureViolationError(
            f"{a!r} \\ {b!r} = {result!r} is not in the ambient family (malformed Gba?)"
        )
    return result


def atoms_cover(g: Gba) -> list:
    """The canonical cover given by the blocks."""
    return g.blocks


def gba_from_json(data: dict, max_atoms=DEFAULT_MAX_ATOMS) -> Gba:
    try:
        universe = data["universe"]
        generators = data.get("generators", [])
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInputError(f"malformed Gba JSON: {exc}") from None
    return make_gba(universe, generators, max_atoms=max_atoms)


def gba_to_json(g: Gba) -> dict:
    return {
        "universe": list(g.universe.atoms),
        "generators": [g.element(b).sorted_atoms() for b in g.block_masks],
    }
