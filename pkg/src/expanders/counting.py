"""Exhaustive checks for the equivalence-class counting lemma.

For an equivalence relation on [d]: if every permutation fixes (up to
equivalence) at least t indices, then some class has size at least
ceil((d+t)/2); when the bound fails, a cyclic shift by the largest class
size witnesses a permutation with fewer than t equivalent-fixed indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BudgetExceeded, DomainError, InternalCheckError

PERMUTATION_CAP = 8  # d! enumeration stays sub-second up to here


@dataclass(frozen=True)
class Partition:
    """Set partition of [d] = {1..d} into disjoint nonempty blocks."""

    d: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("d must be positive")
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise DomainError("empty block")
            for i in block:
                if not 1 <= i <= self.d or i in seen:
                    raise DomainError(f"bad or repeated element {i}")
                seen.add(i)
        if len(seen) != self.d:
            raise DomainError("blocks must cover {1..d}")

    @staticmethod
    def from_blocks(d: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        return Partition(d, tuple(tuple(sorted(b)) for b in blocks))

    def class_of(self) -> dict[int, int]:
        out = {}
        for idx, block in enumerate(self.blocks):
            for i in block:
                out[i] = idx
        return out

    def max_block_size(self) -> int:
        return max(len(b) for b in self.blocks)


def _check_budget(part: Partition, t: int):
    if not 1 <= t <= part.d:
        raise DomainError("need 1 <= t <= d")
    if part.d > PERMUTATION_CAP:
        raise BudgetExceeded(
            f"d = {part.d} exceeds the permutation enumeration cap {PERMUTATION_CAP}"
        )


def equivalent_fixed_count(part: Partition, sigma: tuple[int, ...]) -> int:
    """|{i : i equivalent to sigma(i)}| for sigma given as images of 1..d."""
    cls = part.class_of()
    return sum(1 for i in range(1, part.d + 1) if cls[i] == cls[sigma[i - 1]])


def hypothesis_holds(part: Partition, t: int) -> bool:
    """Every permutation fixes at least t indices up to equivalence."""
    _check_budget(part, t)
    cls = part.class_of()
    order = list(range(1, part.d + 1))
    for sigma in itertools.permutations(order):
        hits = 0
        for i, si in zip(order, sigma):
            if cls[i] == cls[si]:
                hits += 1
        if hits < t:
            return False
    return True


def max_class_bound_check(part: Partition, t: int) -> bool:
    """Largest block reaches ceil((d+t)/2)."""
    if not 1 <= t <= part.d:
        raise DomainError("need 1 <= t <= d")
    return part.max_block_size() >= -((part.d + t) // -2)


def cyclic_shift_witness(part: Partition, t: int) -> Optional[tuple[int, ...]]:
    """The refuting shift permutation when the class bound fails, else None.

    Blocks are relabeled consecutively by decreasing size (ties by smallest
    element) and the shift moves every index by the largest block size; the
    returned permutation has exactly max(0, 2m-d) equivalent-fixed indices,
    which is < t.
    """
    _check_budget(part, t)
    if max_class_bound_check(part, t):
        return None
    d = part.d
    blocks = sorted(part.blocks, key=lambda b: (-len(b), min(b)))
    m = len(blocks[0])
    flat = [i for block in blocks for i in sorted(block)]
    position = {orig: pos for pos, orig in enumerate(flat)}  # 0-based positions
    sigma = tuple(
        flat[(position[i] + m) % d] for i in range(1, d + 1)
    )
    hits = equivalent_fixed_count(part, sigma)
    expected = max(0, 2 * m - d)
    if hits != expected or hits >= t:
        raise InternalCheckError("cyclic shift witness failed its guarantee")
    return sigma


def all_partitions(d: int) -> Iterable[Partition]:
    """Every set partition of [d] (restricted-growth enumeration)."""
    if d < 1:
        raise DomainError("d must be positive")

    def rec(i: int, assignment: list[int], nblocks: int):
        if i > d:
            blocks: list[list[int]] = [[] for _ in range(nblocks)]
            for idx, b in enumerate(assignment, start=1):
                blocks[b].append(idx)
            yield Partition.from_blocks(d, blocks)
            return
        for b in range(nblocks):
            assignment.append(b)
            yield from rec(i + 1, assignment, nblocks)
            assignment.pop()
        assignment.append(nblocks)
        yield from rec(i + 1, assignment, nblocks + 1)
        assignment.pop()

    yield from rec(1, [], 0)
