"""Lattice geometry, fermionic mode bookkeeping, and Jordan-Wigner orderings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class ModeKind(Enum):
    PHYSICAL = "physical"
    COPY = "copy"
    ANCILLA = "ancilla"


@dataclass(frozen=True, order=True)
class Mode:
    """A single fermionic mode: lattice site, internal label, and kind.

    `label` distinguishes modes at the same site (spin, spinor component, or
    an ancilla-pair id). Copy modes carry the same (site, label) as their
    physical partner.
    """

    site: tuple[int, ...]
    label: int
    kind: ModeKind = ModeKind.PHYSICAL

    def __repr__(self):
        k = {"physical": "a", "copy": "b", "ancilla": "c"}[self.kind.value]
        return f"{k}[{','.join(map(str, self.site))};{self.label}]"


class Lattice:
    """Finite d-dimensional lattice with an ordered list of fermionic modes.

    The neighborhood of a site is the hypercube of side 3 centered on it,
    wrapping along periodic axes.
    """

    def __init__(self, extents: Sequence[int], periodic, modes: Sequence[Mode]):
        self.extents = tuple(int(e) for e in extents)
        if isinstance(periodic, bool):
            periodic = [periodic] * len(self.extents)
        self.periodic = tuple(bool(p) for p in periodic)
        if len(self.periodic) != len(self.extents):
            raise ValueError("periodic flags must match lattice dimension")
        for e, p in zip(self.extents, self.periodic):
            if e < 1:
                raise ValueError("extents must be positive")
            if e == 1 and p:
                raise ValueError(
                    "degenerate axis: extent 1 with periodic wrap makes the "
                    "neighborhood self-wrap ambiguously"
                )
        self.modes = tuple(modes)
        seen = set()
        for m in self.modes:
            if len(m.site) != self.dims:
                raise ValueError(f"mode {m} has wrong site dimension")
            if not all(0 <= c < e for c, e in zip(m.site, self.extents)):
                raise ValueError(f"mode {m} site out of range")
            key = (m.site, m.label, m.kind)
            if key in seen:
                raise ValueError(f"duplicate mode {m}")
            seen.add(key)
        self._sites = tuple(sorted({m.site for m in self.modes}))

    @property
    def dims(self) -> int:
        return len(self.extents)

    @property
    def sites(self) -> tuple[tuple[int, ...], ...]:
        return self._sites

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def modes_at(self, site) -> tuple[Mode, ...]:
        site = tuple(site)
        return tuple(m for m in self.modes if m.site == site)

    def neighborhood(self, site, radius: int = 1) -> frozenset[tuple[int, ...]]:
        """Sites at most `radius` lattice steps away in each direction."""
        site = tuple(site)
        ranges = []
        for c, e, p in zip(site, self.extents, self.periodic):
            vals = set()
            for d in range(-radius, radius + 1):
                v = c + d
                if p:
                    vals.add(v % e)
                elif 0 <= v < e:
                    vals.add(v)
            ranges.append(sorted(vals))
        cube = set(itertools.product(*ranges))
        return frozenset(s for s in cube if s in set(self._sites))


def chain(n_sites: int, labels: int = 1, periodic: bool = True) -> Lattice:
    """1-D lattice with `labels` physical modes per site."""
    modes = [
        Mode((s,), l) for s in range(n_sites) for l in range(labels)
    ]
    return Lattice((n_sites,), periodic, modes)


def grid(extents: Sequence[int], labels: int = 1, periodic=True) -> Lattice:
    """d-dimensional lattice, sites in row-major order, `labels` modes each."""
    modes = [
        Mode(site, l)
        for site in itertools.product(*(range(e) for e in extents))
        for l in range(labels)
    ]
    return Lattice(extents, periodic, modes)


class Ordering:
    """A Jordan-Wigner enumeration pi: Mode -> {0..N-1}."""

    def __init__(self, modes: Iterable[Mode]):
        self._modes = tuple(modes)
        self._index = {m: k for k, m in enumerate(self._modes)}
        if len(self._index) != len(self._modes):
            raise ValueError("ordering is not a bijection")

    @property
    def n_modes(self) -> int:
        return len(self._modes)

    @property
    def modes(self) -> tuple[Mode, ...]:
        return self._modes

    def position(self, mode: Mode) -> int:
        try:
            return self._index[mode]
        except KeyError:
            raise KeyError(f"mode {mode} is not in the ordering") from None

    def __contains__(self, mode: Mode) -> bool:
        return mode in self._index

    def mode_at(self, k: int) -> Mode:
        return self._modes[k]

    def positions(self, modes: Iterable[Mode]) -> tuple[int, ...]:
        return tuple(self.position(m) for m in modes)

    def site_qubits(self, site) -> tuple[int, ...]:
        site = tuple(site)
        return tuple(k for k, m in enumerate(self._modes) if m.site == site)

    def region_qubits(self, sites: Iterable[tuple[int, ...]]) -> tuple[int, ...]:
        ss = {tuple(s) for s in sites}
        return tuple(k for k, m in enumerate(self._modes) if m.site in ss)

    def is_same_site_consecutive(self) -> bool:
        """True iff all modes sharing a site occupy consecutive positions."""
        seen_done = set()
        prev = None
        for m in self._modes:
            if m.site != prev:
                if m.site in seen_done:
                    return False
                if prev is not None:
                    seen_done.add(prev)
                prev = m.site
        return True


def row_major_ordering(lattice: Lattice) -> Ordering:
    """Default ordering: sites row-major, same-site modes consecutive.

    Within a site: physical-and-copy pairs interleaved (a, b, a, b, ...)
    by label, ancillas last. For the two-label 1-D chain this reduces to
    pi(n, 0) = 2n, pi(n, 1) = 2n + 1.
    """
    def site_key(m: Mode):
        kind_rank = {ModeKind.PHYSICAL: 0, ModeKind.COPY: 1, ModeKind.ANCILLA: 2}
        # ancillas sort after all paired modes at the site
        group = 0 if m.kind != ModeKind.ANCILLA else 1
        return (group, m.label, kind_rank[m.kind])

    modes = []
    for site in sorted({m.site for m in lattice.modes}):
        at = [m for m in lattice.modes if m.site == site]
        modes.extend(sorted(at, key=site_key))
    return Ordering(modes)


class Region:
    """A set of lattice sites; implicitly contains every mode at those sites."""

    def __init__(self, lattice: Lattice, sites: Iterable):
        self.lattice = lattice
        self.sites = frozenset(tuple(s) for s in sites)
        known = set(lattice.sites)
        bad = self.sites - known
        if bad:
            raise ValueError(f"sites not on lattice: {sorted(bad)}")

    def modes(self) -> tuple[Mode, ...]:
        return tuple(m for m in self.lattice.modes if m.site in self.sites)

    def qubits(self, ordering: Ordering) -> tuple[int, ...]:
        return tuple(
            ordering.position(m) for m in self.lattice.modes if m.site in self.sites
        )

    def __repr__(self):
        return f"Region({sorted(self.sites)})"
