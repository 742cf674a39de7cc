# tests/__init__.py

"""
Test suite for the anonpram package.
"""
