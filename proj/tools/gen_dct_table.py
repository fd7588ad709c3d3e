#!/usr/bin/env python3
"""Generates src/synthesis/dct64_table.inc.

Entry [k][n] is round(2^20 * c_k * cos(pi * (2n + 1) * k / 128)) with the
orthonormal DCT-II normalisation c_0 = sqrt(1/64), c_k = sqrt(2/64). Only the
left half of each row is rounded; the right half is mirrored with the row's
parity so that T[k][63 - n] == (-1)^k * T[k][n] holds exactly.
"""
import math
import sys

N = 64
BITS = 20


def main(path):
    rows = []
    for k in range(N):
        c = math.sqrt((1.0 if k == 0 else 2.0) / N)
        half = [int(math.floor((1 << BITS) * c * math.cos(math.pi * (2 * n + 1) * k / (2 * N)) + 0.5))
                for n in range(N // 2)]
        sign = -1 if k % 2 else 1
        rows.append(half + [sign * v for v in reversed(half)])
    with open(path, "w") as f:
        f.write("// Generated by tools/gen_dct_table.py. Do not edit.\n")
        f.write("// 64-point DCT-II basis, orthonormal, scaled by 2^%d and rounded.\n" % BITS)
        for row in rows:
            f.write("  {" + ", ".join("%8d" % v for v in row) + "},\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/synthesis/dct64_table.inc")
