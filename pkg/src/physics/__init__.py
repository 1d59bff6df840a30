"""Physical constants, parameter types and closed-form circuit relations.

Everything here is a pure value type or a pure function shared by the solver packages.
"""
