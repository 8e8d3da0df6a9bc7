"""Exact q-series toolkit: vertex functions of cotangent Grassmannians and
their duals, Macdonald difference operators, and identity checks between them.
"""

__version__ = "0.1.0"
