"""Irreducible-faithfulness invariants of finite groups."""
