#!/usr/bin/env python3
"""Regenerate the bundled b-file fixtures for A104272, A080359, A006992, A055496.

The fixtures are produced with an implementation that shares no code with the
Rust crates (plain Python sieve for the small sequences, gmpy2 for the
doubling chains whose terms exceed 64 bits), so they serve as an independent
reference when oeis.org is not reachable.

Usage: python3 tools/gen_fixtures.py [OUT_DIR] [TERMS]
"""

import sys
from pathlib import Path

import gmpy2

TERMS = 1000


def sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
        i += 1
    return flags


def half_counts(flags):
    """f[x] = pi(x) - pi(floor(x/2)) for every x in the sieved range."""
    pi = [0] * len(flags)
    running = 0
    for x in range(len(flags)):
        running += flags[x]
        pi[x] = running
    return [pi[x] - pi[x // 2] for x in range(len(flags))]


def ramanujan_and_labos(count):
    # R_n < p_{3n}; p_{3000} = 27449, sieve generously past it.
    limit = 40_000
    flags = sieve(limit)
    primes = [p for p in range(limit + 1) if flags[p]]
    bound = primes[3 * count - 1]
    f = half_counts(flags)
    ramanujan = []
    for n in range(1, count + 1):
        last = max(x for x in range(0, bound + 1) if f[x] == n - 1)
        ramanujan.append(last + 1)
    labos = []
    for n in range(1, count + 1):
        labos.append(next(x for x in range(0, bound + 1) if f[x] == n))
    return ramanujan, labos


def chain(seed, step, count):
    terms = [gmpy2.mpz(seed)]
    while len(terms) < count:
        terms.append(step(2 * terms[-1]))
    return terms


def write_bfile(path, seq_id, title, values):
    with open(path, "w") as out:
        out.write(f"# {seq_id} {title}\n")
        out.write("# regenerated by tools/gen_fixtures.py\n")
        for i, v in enumerate(values, start=1):
            out.write(f"{i} {v}\n")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("crates/core/fixtures")
    count = int(sys.argv[2]) if len(sys.argv) > 2 else TERMS
    out_dir.mkdir(parents=True, exist_ok=True)

    ramanujan, labos = ramanujan_and_labos(count)
    write_bfile(out_dir / "A104272.txt", "A104272", "Ramanujan primes", ramanujan)
    write_bfile(out_dir / "A080359.txt", "A080359", "smallest x with pi(x) - pi(x/2) = n", labos)

    desc = chain(2, gmpy2.prev_prime, count)
    write_bfile(out_dir / "A006992.txt", "A006992", "largest prime < 2 a(n-1)", desc)
    asc = chain(2, gmpy2.next_prime, count)
    write_bfile(out_dir / "A055496.txt", "A055496", "smallest prime > 2 a(n-1)", asc)


if __name__ == "__main__":
    main()
