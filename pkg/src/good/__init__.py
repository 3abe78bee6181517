"""Tooling for GOOD-annotated class specifications."""
