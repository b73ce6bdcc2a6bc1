# evit/Interface/__init__.py

"""
Interface layer: run-config validation and the `evit` command line.
"""
