"""Finite models of comprehension categories and the structures they unify."""
