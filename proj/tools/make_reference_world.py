#!/usr/bin/env python3
"""Regenerates data/maps/reference_world.map: a 10 m x 10 m room layout at 0.1 m per cell."""

import pathlib
import sys

W = H = 100


def build():
    g = [["."] * W for _ in range(H)]

    def box(x0, y0, x1, y1):
        for y in range(y0, y1):
            for x in range(x0, x1):
                g[y][x] = "#"

    # outer walls
    box(0, 0, W, 2)
    box(0, H - 2, W, H)
    box(0, 0, 2, H)
    box(W - 2, 0, W, H)
    # west room wall with two doorways
    box(40, 2, 42, 22)
    box(40, 30, 42, 70)
    box(40, 78, 42, 98)
    # north-east room wall
    box(42, 45, 68, 47)
    box(76, 45, 98, 47)
    # junk: crates and a shelf
    box(12, 12, 20, 18)
    box(24, 50, 30, 62)
    box(55, 15, 62, 30)
    box(78, 12, 84, 18)
    box(60, 65, 80, 69)
    box(10, 80, 22, 84)
    box(85, 80, 90, 90)
    return g


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/maps/reference_world.map")
    g = build()
    out.write_text(f"{W} {H} 0.1\n" + "\n".join("".join(r) for r in g) + "\n")


if __name__ == "__main__":
    main()
