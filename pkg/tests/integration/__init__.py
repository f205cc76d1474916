"""
Integration tests for mirs
"""
