"""
Test suite for mirs
"""
