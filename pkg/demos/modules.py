"""F_p[G]-modules inside a group: simple submodules, isotypic parts, cyclicity.

W + W for the natural module W of GL_2(2) is cyclic, while three copies are
not: a module is cyclic exactly when each isotypic multiplicity is at most
dim_k W.
"""
from faithlab import build, pmod

G = build.gqm(2, 2)
M = pmod.module_of(G, G.extras["V"])
print(f"V of G(2,2): dimension {M.dim} over F_{M.p}")

simples = pmod.simple_submodules(M)
print(f"{len(simples)} simple submodules, formula {pmod.count_simple_submodules(2, 2)}")

comp = pmod.isotypic_decomposition(M)[0]
print(f"one isotypic component: multiplicity {comp.multiplicity}, k = GF({comp.q}), m = {comp.m}")

for copies in (1, 2, 3):
    U = pmod.independent_copies(comp, copies)
    v = pmod.is_cyclic(U.as_module())
    print(f"{copies} cop{'y' if copies == 1 else 'ies'}: cyclic {v.cyclic}, generator {v.witness}")

# the centralizer field of GF(9) viewed as an F_3[GL_1(9)]-module
G9 = build.gqm(9, 1)
W = pmod.simple_submodules(pmod.module_of(G9, G9.extras["V"]))[0].as_module()
k = pmod.centralizer_field(W)
print(f"GF(9) line over F_3: dimension {W.dim}, centralizer field of order {k.q}, m = {k.m}")
