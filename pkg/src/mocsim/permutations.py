"""Elements of S_n with group and orbit utilities.

Composition convention: (f * g)(x) = f(g(x)), i.e. g acts first.
Points are 0-based internally.
"""

from __future__ import annotations

from itertools import permutations as _iter_perms


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def cycle(cls, n: int, points) -> "Permutation":
        """Permutation with one explicit cycle, the rest fixed."""
        images = list(range(n))
        pts = list(points)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
        return cls(images)

    @classmethod
    def all(cls, n: int):
        return [cls(p) for p in _iter_perms(range(n))]

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        return Permutation(self.images[other.images[x]] for x in range(self.n))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation{self.images}"

    def is_identity(self) -> bool:
        return all(self.images[x] == x for x in range(self.n))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_count(self) -> int:
        return len(self.cycles())


def orbit_count(generators: list[Permutation]) -> int:
    """Number of orbits of the generated subgroup on {0..n-1}, via BFS closure."""
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise ValueError("generators act on different degrees")
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        frontier = [start]
        seen[start] = True
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = g(x)
                if not seen[y]:
                    seen[y] = True
                    frontier.append(y)
    return count


def generate_subgroup(generators: list[Permutation]) -> set[Permutation]:
    """Explicit closure of the generated subgroup (small n only)."""
    n = generators[0].n
    group = {Permutation.identity(n)}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for h in generators:
            for prod in (g * h, h * g):
                if prod not in group:
                    group.add(prod)
                    frontier.append(prod)
    return group
