"""Random orientation-consistent PD codes for oracle and property tests.

The generator scatters each crossing's under- and over-passage into
random closed walks, then reads arcs off the walks.  The resulting codes
are always orientation-consistent but need not be planar, which is fine:
the bracket state sum is defined for any such code.
"""

from __future__ import annotations

import random

from ribbonforge.topology import PDCode


def random_pd(rng: random.Random, n_crossings: int, free_loops: int = 0) -> PDCode:
    tokens = [(k, "u") for k in range(n_crossings)]
    tokens += [(k, "o") for k in range(n_crossings)]
    rng.shuffle(tokens)

    cycles = []
    i = 0
    while i < len(tokens):
        size = rng.randint(1, len(tokens) - i)
        cycles.append(tokens[i : i + size])
        i += size

    under = {}
    over = {}
    comps = []
    arc = 0
    for cyc in cycles:
        m = len(cyc)
        base = arc + 1
        comps.append(tuple(range(base, base + m)))
        for j, (k, role) in enumerate(cyc):
            out_arc = base + j
            in_arc = base + (j - 1) % m
            if role == "u":
                under[k] = (in_arc, out_arc)
            else:
                over[k] = (in_arc, out_arc)
        arc += m

    quads = []
    for k in range(n_crossings):
        a, c = under[k]
        o_in, o_out = over[k]
        if rng.random() < 0.5:
            quads.append((a, o_out, c, o_in))
        else:
            quads.append((a, o_in, c, o_out))
    return PDCode(tuple(quads), 2 * n_crossings, tuple(comps), free_loops)
