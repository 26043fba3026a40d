#!/usr/bin/env python3
"""Generates the bundled benchmark suite: .smt2 instances with .expected sidecars."""

import argparse
import pathlib
import random


def bv(value, width):
    if width % 4 == 0:
        return "#x" + format(value, "0{}x".format(width // 4))
    return "#b" + format(value, "0{}b".format(width))


def script(width, strs, asserts, bvs=()):
    lines = ["(set-option :strlen-width {})".format(width)]
    lines += ["(declare-const {} String)".format(s) for s in strs]
    lines += ["(declare-const {} (_ BitVec {}))".format(v, width) for v in bvs]
    lines += ["(assert {})".format(a) for a in asserts]
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def length(x):
    return "(str.len_bv {})".format(x)


def prefix_suffix(rng, w=16):
    lo = rng.randint(500, 12000)
    hi = lo + rng.randint(50, 3000)
    a, b = rng.choice("abc"), rng.choice("abc")
    return script(w, "XY", [
        '(= (str.++ "{}" X) (str.++ Y "{}"))'.format(a, b),
        "(bvugt {} {})".format(length("X"), bv(lo, w)),
        "(bvult {} {})".format(length("X"), bv(hi, w)),
    ]), "sat"


def concat_sum(rng, sat, w=16):
    a = rng.randint(200, 8000)
    b = rng.randint(200, 8000)
    need = a + b + 1  # minimal |X| + |Y| + |"c"|
    u = need + rng.randint(0, 2000) if sat else need - rng.randint(1, 2000)
    return script(w, "XYZ", [
        '(= (str.++ X "c" Y) Z)',
        "(bvuge {} {})".format(length("X"), bv(a, w)),
        "(bvuge {} {})".format(length("Y"), bv(b, w)),
        "(bvule {} {})".format(length("X"), bv(20000, w)),
        "(bvule {} {})".format(length("Y"), bv(20000, w)),
        "(bvule {} {})".format(length("Z"), bv(u, w)),
    ]), "sat" if sat else "unsat"


def chain(rng, sat, w=16):
    lo = rng.randint(100, 6000)
    hi = lo + rng.randint(10, 500)
    # |X| = |Z| + 2 with lo < |Z| < hi.
    m = lo + 4 + rng.randint(0, 300) if sat else lo + 3 - rng.randint(0, 50)
    return script(w, "XYZ", [
        '(= X (str.++ Y "a"))',
        '(= Y (str.++ "b" Z))',
        "(bvugt {} {})".format(length("Z"), bv(lo, w)),
        "(bvult {} {})".format(length("Z"), bv(hi, w)),
        "(bvult {} {})".format(length("X"), bv(m, w)),
    ]), "sat" if sat else "unsat"


def wrap_sum(rng, w=8):
    mask = (1 << w) - 1
    a = rng.randint(100, 240)
    b = rng.randint(100, 240)
    c = rng.randint(1, 120)
    sat = any(((x + y + 1) & mask) < c for x in range(a + 1, mask + 1) for y in range(b + 1, mask + 1))
    return script(w, "XYZ", [
        '(= (str.++ X "a" Y) Z)',
        "(bvugt {} {})".format(length("X"), bv(a, w)),
        "(bvugt {} {})".format(length("Y"), bv(b, w)),
        "(bvult {} {})".format(length("Z"), bv(c, w)),
    ]), "sat" if sat else "unsat"


def constant_clash(rng, w=16):
    p, q = rng.sample(["ab", "ba", "bb", "ca", "cc"], 2)
    n = rng.randint(100, 5000)
    return script(w, "XYZ", [
        '(= X (str.++ "{}" Y))'.format(p),
        '(= X (str.++ "{}" Z))'.format(q),
        "(bvugt {} {})".format(length("Y"), bv(n, w)),
    ]), "unsat"


def scaled_length(rng, w=16):
    # |X| = 3 |Y| + 1 over 16 bits; odd coefficient makes the length system invertible.
    n = rng.randint(1000, 15000)
    return script(w, "XY", [
        '(= X (str.++ Y Y Y "d"))',
        "(bvugt {} {})".format(length("Y"), bv(n, w)),
        "(bvult {} {})".format(length("X"), bv(min(3 * n + 3000, 65535), w)),
    ]), "sat"


def overlap(w=16):
    return script(w, "X", ['(= (str.++ X "a") (str.++ "a" X))', "(bvugt {} {})".format(length("X"), bv(3, w))]), None


def hard(lo, hi, w=32):
    return script(w, "XY", [
        '(= (str.++ "a" X) (str.++ Y "b"))',
        "(bvugt {} {})".format(length("X"), bv(lo, w)),
        "(bvult {} {})".format(length("X"), bv(hi, w)),
    ]), "sat"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=2017)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    cases = []
    cases += [("prefix_suffix", prefix_suffix(rng)) for _ in range(36)]
    cases += [("concat_sat", concat_sum(rng, True)) for _ in range(14)]
    cases += [("concat_unsat", concat_sum(rng, False)) for _ in range(12)]
    cases += [("chain_sat", chain(rng, True)) for _ in range(8)]
    cases += [("chain_unsat", chain(rng, False)) for _ in range(6)]
    cases += [("wrap_sum", wrap_sum(rng)) for _ in range(10)]
    cases += [("clash", constant_clash(rng)) for _ in range(6)]
    cases += [("scaled", scaled_length(rng)) for _ in range(6)]
    cases += [("overlap", overlap()) for _ in range(2)]
    cases += [("hard", hard(3_200_000, 4_500_000)), ("hard", hard(6_000_000, 8_400_000))]

    args.out.mkdir(parents=True, exist_ok=True)
    for i, (family, (text, expected)) in enumerate(cases):
        stem = "{:03d}_{}".format(i, family)
        (args.out / (stem + ".smt2")).write_text(text)
        side = args.out / (stem + ".smt2.expected")
        if expected:
            side.write_text(expected + "\n")
        elif side.exists():
            side.unlink()
    print("wrote {} instances to {}".format(len(cases), args.out))


if __name__ == "__main__":
    main()
