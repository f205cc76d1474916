"""
mirs
Exact computer algebra for multiindex regularity structures, with a small
noise laboratory for the law-level identities.
"""

__version__ = '1.0.0'
