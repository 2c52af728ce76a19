"""Topological edge diagrams of colored graphs."""
