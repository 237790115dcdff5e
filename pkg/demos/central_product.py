"""The central product of three copies of D8 (order 256).

Every abelian normal subgroup N leaves a non-cyclic centre in G/N, so every
irreducible character has a non-abelian kernel, while the centre C2 x C2
makes some three-element set unfaithful.
"""
from collections import Counter

from faithlab import build, chartab, faith, grp

G = build.d8_central_product()
Z = grp.center(G)
print(f"order {G.order}, centre of order {Z.order}, socle = centre: "
      f"{grp.socle_decomposition(G).socle == Z}")

T = chartab.character_table(G)
print("character degrees:", dict(Counter(T.degrees.tolist())))
print("sum of squared degrees:", int((T.degrees**2).sum()))

fam = chartab.kernel_family(T)
print(f"{len(fam.kernels)} distinct kernels, abelian ones: "
      f"{sum(grp.is_abelian(G, K) for K in fam.kernels)}")
print("Z(G/N) non-cyclic for every abelian normal N:", chartab.verify_abelian_normal_criterion(G))

rep = faith.analyze(G)
print(f"P-threshold {rep.p_threshold}, witness {[G.label(g) for g in rep.witness]}")
