"""Finite groups that factor as a product of two cyclic subgroups.

Groups are Cayley tables; subgroups are bitsets over element indices.  The
package enumerates cyclic factorizations ``G = AB``, builds the Sylow basis
and decomposition attached to each one, and checks the structural claims
about such products over a generated corpus of small groups.
"""

__version__ = "1.0.0"
