"""alpha(q, m): the smallest F in W^(m+1) whose differences meet every line.

The search deepens from the pair-count bound C(t, 2) >= #lines and proves
each smaller size impossible by exhausting it.
"""
import time

from faithlab import alpha

for q, m in [(2, 1), (3, 1), (4, 1), (5, 1), (7, 1), (8, 1), (2, 2), (9, 1)]:
    t0 = time.perf_counter()
    res = alpha.alpha_search(q, m)
    sys = alpha.line_system(q, m)
    print(f"alpha({q},{m}) = {res.alpha}  lines {sys.n_lines:3d}  lower bound {res.lower_bound}  "
          f"{res.nodes:8d} nodes  {time.perf_counter() - t0:6.2f}s")
    print(f"    witness {res.witness_vectors}")

# the generic construction of size #lines, for comparison
F = alpha.upper_witness(3, 2)
print(f"upper construction for (3,2): {len(F)} vectors, covers all lines: "
      f"{alpha.verify_witness(alpha.line_system(3, 2), F).ok}")
