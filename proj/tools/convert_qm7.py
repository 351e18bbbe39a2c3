#!/usr/bin/env python3
"""Convert qm7.mat into the molecule text format read by `qwalk`.

Each molecule becomes a block: atom count M, M lines `Z x y z`, then the
atomization energy. Zero-charge padding atoms are dropped.
"""
import argparse
import sys

import scipy.io


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("mat", help="path to qm7.mat")
    ap.add_argument("out", help="output text file")
    ap.add_argument("--limit", type=int, default=0, help="only the first N molecules")
    args = ap.parse_args()

    data = scipy.io.loadmat(args.mat)
    charges, positions, energies = data["Z"], data["R"], data["T"].ravel()
    n = len(energies) if args.limit <= 0 else min(args.limit, len(energies))
    with open(args.out, "w") as f:
        f.write("# qm7: Z x y z (bohr), then atomization energy (kcal/mol)\n")
        for m in range(n):
            atoms = [(int(round(z)), positions[m, i]) for i, z in enumerate(charges[m]) if z > 0]
            f.write(f"{len(atoms)}\n")
            for z, (x, y, w) in atoms:
                f.write(f"{z} {float(x)!r} {float(y)!r} {float(w)!r}\n")
            f.write(f"{float(energies[m])!r}\n")
    print(f"wrote {n} molecules to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
