"""Integers 1 + q + ... + q^m for prime powers q, and repunit coincidences."""
from faithlab import seq

terms = seq.generate(100)
print("terms up to 100:", [t.n for t in terms])
for t in terms:
    if len(t.representations) > 1:
        print(f"  {t.n} has representations {t.representations}")

g = seq.gaps(100)
print(f"largest gap below 100: {g.largest} (after term #{g.largest_index})")
for k in (10**3, 10**4, 10**5, 10**6):
    print(f"density up to {k:>7}: {seq.density(k):.4f}")

for c in seq.goormaghtigh(100, 14):
    print(f"{c.value} = repunit in base {c.first[0]} ({c.first[1]} digits)"
          f" = repunit in base {c.second[0]} ({c.second[1]} digits)")
