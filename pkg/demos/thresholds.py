"""Faithfulness thresholds of the affine groups G(q, m) = GL_m(q) x| (GF(q)^m)^(m+1).

For each group the abelian socle is decomposed into isotypic components; an
isotypic component holding at least m+1 copies of a simple module W with
centralizer field GF(q) and dim_k W = m forces a non-faithful set of size
q^m + ... + q + 1. The kernel oracle then confirms the value independently.
"""
from faithlab import build, faith

for q, m in [(2, 1), (3, 1), (4, 1), (5, 1), (2, 2)]:
    G = build.gqm(q, m)
    rep = faith.analyze(G, oracle=True, q_oracle=True)
    off = rep.offenders[0]
    print(f"G({q},{m})  order {G.order:4d}  "
          f"P-threshold {rep.p_threshold} (oracle {rep.oracle_p_threshold})  "
          f"Q-threshold {faith.threshold_json(rep.q_threshold)} (oracle {rep.oracle_q_threshold})")
    print(f"    offender: p={off.p}, k=GF({off.q}), m={off.m}, {off.multiplicity} copies")
    print(f"    unfaithful set of size {len(rep.witness)}: {rep.witness}")

# groups with a faithful irreducible representation never fail
for name in ["Q8", "S4", "A5", "Heis27"]:
    G = build.corpus_group(name)
    print(f"{name:7s} faithful irreducible representation: {faith.gaschutz_faithful(G)}")
