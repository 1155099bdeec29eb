"""Partitions of the modes into qudit subsystems and reduced states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import mode_count_of


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Ordered cover of modes ``1..M`` by disjoint nonempty subsets.

    Use :func:`make_partition` or :func:`parse_partition` to build a
    validated instance.
    """

    mode_count: int
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _validate(self.mode_count, self.subsets)

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(2 ** len(s) for s in self.subsets)

    @property
    def is_contiguous(self) -> bool:
        flat = [i for s in self.subsets for i in s]
        return flat == list(range(1, self.mode_count + 1))

    def spec(self) -> str:
        return "|".join(",".join(str(i) for i in s) for s in self.subsets)

    def __str__(self) -> str:
        return self.spec()


def _validate(mode_count, subsets):
    if mode_count < 1:
        raise PartitionError(f"mode count must be positive, got {mode_count}")
    if len(subsets) < 2:
        raise PartitionError(f"need at least two subsets, got {len(subsets)}")
    seen: set[int] = set()
    for pos, subset in enumerate(subsets, start=1):
        if len(subset) == 0:
            raise PartitionError(f"subset {pos} is empty")
        for i in subset:
            if not 1 <= i <= mode_count:
                raise PartitionError(f"mode {i} in subset {pos} outside 1..{mode_count}")
            if i in seen:
                raise PartitionError(f"mode {i} appears in more than one subset (overlap)")
            seen.add(i)
    missing = sorted(set(range(1, mode_count + 1)) - seen)
    if missing:
        raise PartitionError(f"modes {missing} are not covered (gap)")


def make_partition(mode_count: int, subsets) -> Partition:
    """Validated partition; each subset is stored in ascending mode order."""
    subsets = tuple(tuple(sorted(int(i) for i in s)) for s in subsets)
    for s in subsets:
        if len(set(s)) != len(s):
            raise PartitionError(f"repeated mode inside subset {s}")
    return Partition(int(mode_count), subsets)


def parse_partition(text: str, mode_count: int) -> Partition:
    """Parse the ``"1,2|3,4"`` grammar."""
    try:
        subsets = [
            [int(tok) for tok in chunk.split(",") if tok.strip()]
            for chunk in text.strip().split("|")
        ]
    except ValueError as exc:
        raise PartitionError(f"cannot parse partition {text!r}: {exc}") from None
    return make_partition(mode_count, subsets)


def single_modes(mode_count: int) -> Partition:
    return make_partition(mode_count, [[i] for i in range(1, mode_count + 1)])


def sites(mode_count: int) -> Partition:
    """Site partition for modes ordered ``(A up, A down, B up, B down, ...)``."""
    if mode_count % 2:
        raise PartitionError("site partition needs an even mode count")
    return make_partition(mode_count, [[i, i + 1] for i in range(1, mode_count, 2)])


def group_state(vec, partition: Partition) -> np.ndarray:
    """View a state as an ``m``-index tensor of shape ``partition.dims``.

    Qubit factors are permuted without fermionic reordering signs.
    """
    vec = np.asarray(vec, dtype=complex)
    M = mode_count_of(vec)
    if M != partition.mode_count:
        raise PartitionError(
            f"state has {M} modes but partition covers {partition.mode_count}"
        )
    if partition.is_contiguous:
        return vec.reshape(partition.dims)
    order = [i - 1 for s in partition.subsets for i in s]
    return vec.reshape((2,) * M).transpose(order).reshape(partition.dims)


def ungroup_state(grouped, partition: Partition) -> np.ndarray:
    """Inverse of :func:`group_state`."""
    grouped = np.asarray(grouped, dtype=complex)
    M = partition.mode_count
    if partition.is_contiguous:
        return grouped.reshape(-1)
    order = [i - 1 for s in partition.subsets for i in s]
    return grouped.reshape((2,) * M).transpose(np.argsort(order)).reshape(-1)


def reduced_density(grouped, keep) -> np.ndarray:
    """Partial trace of ``|psi><psi|`` onto the subsets at 1-based positions ``keep``.

    Kept subsets appear in the order given.
    """
    grouped = np.asarray(grouped, dtype=complex)
    m = grouped.ndim
    keep = [int(k) for k in np.atleast_1d(keep)]
    if not keep:
        raise PartitionError("keep must name at least one subset")
    if any(not 1 <= k <= m for k in keep) or len(set(keep)) != len(keep):
        raise PartitionError(f"keep positions {keep} invalid for {m} subsets")
    axes = [k - 1 for k in keep]
    rest = [a for a in range(m) if a not in axes]
    psi = grouped.transpose(axes + rest)
    dk = int(np.prod([grouped.shape[a] for a in axes]))
    psi = psi.reshape(dk, -1)
    return psi @ psi.conj().T


def purity(rho) -> float:
    return float(np.real(np.trace(rho @ rho)))


def random_local_unitary(partition: Partition, rng) -> list[np.ndarray]:
    """Haar-ish unitaries, one per subset, from QR of complex Gaussians."""
    out = []
    for d in partition.dims:
        z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        q, r = np.linalg.qr(z)
        out.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return out


def apply_local(vec, partition: Partition, unitaries) -> np.ndarray:
    """Apply one unitary per subset to a state, return the new dense vector."""
    psi = group_state(vec, partition)
    for axis, u in enumerate(unitaries):
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [axis])), 0, axis)
    return ungroup_state(psi, partition)
