"""Authorship attribution from constituency parse-tree structure."""
