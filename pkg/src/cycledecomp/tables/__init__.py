"""Shipped primitive decompositions in the text format."""
