"""Dimension of the pattern-constrained space of H for each catalog pattern.

Rows are patterns, columns are (n, degree set).  Zero entries are degree
bounds: no H with those term degrees has a Jacobian of that pattern.

    python scripts/pattern_space_table.py --nvars 2,3,4 --degrees 2 3 2,3
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import List, Tuple

from jacsym.sympattern import CATALOG_NAMES, InstanceSpec, catalog_valid_at, pattern_space


@dataclass
class TableConfig:
    nvars: Tuple[int, ...] = (2, 3, 4)
    degree_sets: List[frozenset] = field(default_factory=lambda: [frozenset({2}), frozenset({3}), frozenset({2, 3})])
    patterns: Tuple[str, ...] = CATALOG_NAMES


def parse(argv=None) -> TableConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nvars", default="2,3,4")
    p.add_argument("--degrees", nargs="+", default=["2", "3", "2,3"])
    p.add_argument("--patterns", default=",".join(CATALOG_NAMES))
    a = p.parse_args(argv)
    return TableConfig(
        tuple(int(t) for t in a.nvars.split(",")),
        [frozenset(int(t) for t in d.split(",")) for d in a.degrees],
        tuple(a.patterns.split(",")),
    )


def main(argv=None) -> None:
    cfg = parse(argv)
    cols = [(n, S) for n in cfg.nvars for S in cfg.degree_sets]
    heads = [f"n={n} S={','.join(map(str, sorted(S)))}" for n, S in cols]
    print("pattern".ljust(9) + "".join(h.rjust(14) for h in heads))
    for name in cfg.patterns:
        cells = []
        for n, S in cols:
            if not catalog_valid_at(name, n):
                cells.append("-")
                continue
            dim, _ = pattern_space(InstanceSpec(n, S, name, "none"))
            cells.append(str(dim))
        print(name.ljust(9) + "".join(c.rjust(14) for c in cells), flush=True)


if __name__ == "__main__":
    main()
