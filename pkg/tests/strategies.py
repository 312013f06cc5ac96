"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from cfporecon.cfpo import CfpoInstance


@st.composite
def trees(draw, min_size: int = 1, max_size: int = 12) -> CfpoInstance:
    """A random edge-oriented tree: each point hangs off an earlier one, above or below it."""
    n = draw(st.integers(min_size, max_size))
    edges = []
    for p in range(1, n):
        q = draw(st.integers(0, p - 1))
        edges.append((q, p) if draw(st.booleans()) else (p, q))
    return CfpoInstance(tuple(range(n)), tuple(edges), f"random:{n}")


def points_of(inst: CfpoInstance, k: int):
    return st.tuples(*[st.sampled_from(inst.points)] * k)
